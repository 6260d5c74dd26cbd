fn main() {
    std::process::exit(rmodule::cli::run(std::env::args_os()));
}
