fn main() {
    std::process::exit(sirs_open::cli::run(std::env::args_os()));
}
