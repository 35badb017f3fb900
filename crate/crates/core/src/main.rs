fn main() {
    let (code, out) = mrdkit::cli::run(std::env::args_os());
    if code == mrdkit::cli::EXIT_USAGE && !out.starts_with("mrdkit") {
        eprint!("{out}");
    } else {
        print!("{out}");
    }
    std::process::exit(code);
}
