fn main() -> std::process::ExitCode {
    weaklog::cli::run(std::env::args_os())
}
