fn main() {
    std::process::exit(enernet::cli::main_with_args(std::env::args_os()));
}
