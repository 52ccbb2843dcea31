use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use brane_spectrum::cli::{run_from_args, Context, OUT_DIR_ENV};

fn main() -> ExitCode {
    let (stdout, stderr) = (io::stdout(), io::stderr());
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let mut ctx = Context {
        out_dir: std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from),
        stdout: &mut out,
        stderr: &mut err,
    };
    let code = run_from_args(std::env::args_os(), &mut ctx);
    ExitCode::from(u8::try_from(code).unwrap_or(1))
}
