fn main() {
    std::process::exit(conestrat::cli::run(std::env::args_os()));
}
