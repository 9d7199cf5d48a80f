fn main() {
    std::process::exit(chromlag::cli::run(std::env::args_os()));
}
