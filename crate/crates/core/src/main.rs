fn main() {
    std::process::exit(rumorlab::cli::run(std::env::args_os()));
}
