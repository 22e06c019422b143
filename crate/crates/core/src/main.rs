use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let out = symvar::cli::run(&args);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    std::process::exit(out.code);
}
