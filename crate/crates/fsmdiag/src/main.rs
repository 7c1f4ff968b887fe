use std::io;

fn main() {
    let argv = std::env::args_os().map(|a| a.to_string_lossy().into_owned()).collect();
    let code = fsmdiag::cli::run(argv, &mut io::stdin().lock(), &mut io::stdout().lock(), &mut io::stderr().lock());
    std::process::exit(code);
}
