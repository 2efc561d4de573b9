fn main() {
    std::process::exit(ominus_core::cli::main_with_args(std::env::args_os()));
}
