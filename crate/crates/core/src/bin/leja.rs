fn main() {
    std::process::exit(leja_core::cli::run(std::env::args_os()));
}
