fn main() {
    std::process::exit(dbf::cli::run(std::env::args_os()));
}
