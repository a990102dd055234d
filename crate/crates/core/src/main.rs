fn main() {
    std::process::exit(template_mset::cli::run(std::env::args_os()));
}
