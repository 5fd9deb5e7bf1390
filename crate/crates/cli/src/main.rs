use std::io::Read;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<std::ffi::OsString> = std::env::args_os().collect();
    // Standard input is consumed only when some argument asks for it.
    let mut stdin = String::new();
    if args.iter().skip(1).any(|a| a == "-") {
        if let Err(e) = std::io::stdin().read_to_string(&mut stdin) {
            eprintln!("standard input: {e}");
            return ExitCode::from(semfact_cli::DOMAIN_ERROR as u8);
        }
    }
    let out = semfact_cli::run(args, &stdin);
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    ExitCode::from(out.status as u8)
}
