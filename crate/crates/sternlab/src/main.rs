use std::io::Write;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let mut err = stderr.lock();
    let code = sternlab::cli::run(&args, &mut out, &mut err);
    out.flush().expect("flush stdout");
    std::process::exit(code);
}
