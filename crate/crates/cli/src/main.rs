fn main() {
    std::process::exit(diterate_cli::run(std::env::args_os()));
}
