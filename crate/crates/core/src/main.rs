fn main() {
    std::process::exit(entgeom::cli::main_with_args(std::env::args_os()));
}
