fn main() {
    std::process::exit(magpath_cli::main_with_args(std::env::args_os()));
}
