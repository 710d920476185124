fn main() {
    let code = localcolor::cli::main_with_args(std::env::args().collect());
    std::process::exit(code);
}
