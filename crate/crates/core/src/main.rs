fn main() {
    std::process::exit(spiralkit::cli::main_with_args(std::env::args_os()));
}
