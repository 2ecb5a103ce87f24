use std::io::Write;

fn main() {
    let env = std::env::var(treemono::limits::LEVEL_CAP_ENV).ok();
    let stdin = std::io::stdin();
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    let code = treemono::cli::run(std::env::args_os(), env.as_deref(), &mut stdin.lock(), &mut out, &mut err);
    let _ = out.flush();
    std::process::exit(code);
}
