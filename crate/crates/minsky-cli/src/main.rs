fn main() {
    std::process::exit(minsky_cli::app::run(std::env::args_os()));
}
