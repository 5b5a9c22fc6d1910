fn main() {
    std::process::exit(wondertope::cli::main_with_args(std::env::args_os()));
}
