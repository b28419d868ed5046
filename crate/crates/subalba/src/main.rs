use std::io;
use std::process::ExitCode;

use clap::Parser;
use subalba::cli::{Cli, Session};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let code = Session {
        cli: &cli,
        out: &mut out,
        err: &mut err,
    }
    .execute();
    ExitCode::from(code as u8)
}
