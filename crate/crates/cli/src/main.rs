fn main() {
    std::process::exit(steiner_cli::run(std::env::args_os()));
}
