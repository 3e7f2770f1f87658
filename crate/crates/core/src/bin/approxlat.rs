fn main() {
    std::process::exit(approxlat::cli::run(std::env::args_os()));
}
