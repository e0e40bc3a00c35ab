fn main() {
    std::process::exit(prophetlab::cli::main_with_args(std::env::args_os()));
}
