fn main() {
    std::process::exit(tvband::cli::run(std::env::args_os()));
}
