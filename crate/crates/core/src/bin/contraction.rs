use std::io::Write;

fn main() {
    let (code, out) = contraction_groups::cli::run(std::env::args_os());
    // A closed pipe is not worth a panic.
    let _ = if code == 0 {
        writeln!(std::io::stdout(), "{out}")
    } else {
        writeln!(std::io::stderr(), "{out}")
    };
    std::process::exit(code);
}
