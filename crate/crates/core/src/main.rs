fn main() {
    std::process::exit(depsense::cli::run(std::env::args_os()));
}
