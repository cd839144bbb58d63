use std::io::{self, Write};

fn main() {
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let stderr = io::stderr();
    let mut err = stderr.lock();
    let code = hypermoments_cli::run(std::env::args(), &mut out, &mut err);
    out.flush().expect("flush stdout");
    std::process::exit(code);
}
