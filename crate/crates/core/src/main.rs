fn main() {
    std::process::exit(parikh_core::cli::run(std::env::args_os()));
}
