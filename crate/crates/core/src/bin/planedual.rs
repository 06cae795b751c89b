fn main() {
    std::process::exit(planedual::cli::main_with_args(std::env::args_os()));
}
