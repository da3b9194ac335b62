fn main() {
    std::process::exit(capwave::cli::run(std::env::args_os()));
}
