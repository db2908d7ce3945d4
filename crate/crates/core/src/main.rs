fn main() {
    std::process::exit(cpv::cli::run(std::env::args_os()));
}
