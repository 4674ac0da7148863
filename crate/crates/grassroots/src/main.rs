fn main() -> std::process::ExitCode {
    grassroots::cli::main_with_args(std::env::args_os())
}
