fn main() {
    std::process::exit(simplexion::cli::main_with_args(std::env::args_os()));
}
