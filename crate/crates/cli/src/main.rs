use std::io;

fn main() -> std::process::ExitCode {
    let code = backbone_cli::run_cli(std::env::args_os(), &mut io::stdout().lock(), &mut io::stderr().lock());
    code.into()
}
