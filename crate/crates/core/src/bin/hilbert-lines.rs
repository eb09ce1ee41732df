fn main() {
    std::process::exit(hilbert_lines::cli::run(std::env::args_os()));
}
