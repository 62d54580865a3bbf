fn main() {
    std::process::exit(arith_core::cli::main_with(std::env::args_os()));
}
