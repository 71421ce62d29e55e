fn main() {
    std::process::exit(jpsn_cli::dispatch(std::env::args_os()));
}
