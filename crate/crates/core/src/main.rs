fn main() {
    std::process::exit(polarbound::cli::run(std::env::args_os()));
}
