fn main() {
    std::process::exit(linpoly::cli::run(std::env::args_os()));
}
