fn main() {
    std::process::exit(kfrac::cli::run(std::env::args_os()));
}
