fn main() {
    let code = median_fraisse::cli::run(std::env::args_os(), &mut std::io::stdout());
    std::process::exit(code);
}
