fn main() -> std::process::ExitCode {
    rbl_core::cli::run()
}
