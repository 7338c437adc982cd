fn main() {
    std::process::exit(grassmann_harness::cli::main_with_args(std::env::args_os()));
}
