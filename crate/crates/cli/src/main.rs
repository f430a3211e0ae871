fn main() {
    std::process::exit(qps_cli::run(std::env::args_os()));
}
