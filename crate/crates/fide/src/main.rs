fn main() -> std::process::ExitCode {
    fide::run(std::env::args_os())
}
