fn main() {
    std::process::exit(shuttle_core::cli::run_cli(std::env::args_os()));
}
