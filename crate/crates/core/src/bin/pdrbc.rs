fn main() {
    std::process::exit(pdrbc::cli::run(std::env::args_os()));
}
