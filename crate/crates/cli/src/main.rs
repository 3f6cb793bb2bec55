use std::io;
use std::process::ExitCode;

use hypasym_cli::{app, PRECISION_ENV};

fn main() -> ExitCode {
    let precision = std::env::var(PRECISION_ENV).ok();
    let code = app::run(
        std::env::args_os(),
        precision.as_deref(),
        &mut io::stdout().lock(),
        &mut io::stderr().lock(),
    );
    ExitCode::from(code)
}
