fn main() {
    std::process::exit(zmpl::cli::main_with_args(std::env::args_os()));
}
