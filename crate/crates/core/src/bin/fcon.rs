fn main() {
    std::process::exit(fcon::cli::run(std::env::args_os()));
}
