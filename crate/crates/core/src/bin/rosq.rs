fn main() {
    std::process::exit(rosq::cli::run(std::env::args_os()));
}
