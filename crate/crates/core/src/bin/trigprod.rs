fn main() -> std::process::ExitCode {
    trigprod::cli::main()
}
