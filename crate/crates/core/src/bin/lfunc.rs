fn main() {
    std::process::exit(lfunc::cli::main_with_args(std::env::args_os()));
}
