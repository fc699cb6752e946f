fn main() {
    std::process::exit(dplap::cli::main_with_args(std::env::args_os()));
}
