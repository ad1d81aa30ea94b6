fn main() {
    std::process::exit(sharpgrad::cli::run(std::env::args_os()));
}
