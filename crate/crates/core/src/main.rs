fn main() {
    std::process::exit(tropcurve::cli::main_with(std::env::args_os()));
}
