fn main() {
    std::process::exit(bdl_cli::run(std::env::args_os()));
}
