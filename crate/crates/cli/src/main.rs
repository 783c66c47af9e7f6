fn main() {
    std::process::exit(workbench_cli::run(std::env::args_os()));
}
