fn main() {
    std::process::exit(semicore_cli::run(std::env::args_os()));
}
