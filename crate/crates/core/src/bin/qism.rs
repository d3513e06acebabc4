fn main() {
    let code = qism_core::cli::run(std::env::args(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
