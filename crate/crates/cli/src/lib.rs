//! Command-line front end for the semigroup laboratory: argument parsing,
//! deterministic artifact serialization, and the report envelope with
//! embedded identity self-checks.

pub mod args;
pub mod io;
pub mod report;
pub mod run;

/// Failure classes mapped to exit codes: validation (a named precondition
/// was violated) exits 2, runtime (the computation itself failed) exits 1.
#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Runtime(String),
}

impl From<wcslab_core::Error> for CliError {
    fn from(e: wcslab_core::Error) -> Self {
        if e.is_usage() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Runtime(e.to_string())
        }
    }
}

/// Parses and dispatches, returning the process exit code.
pub fn main_entry<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    use clap::Parser;

    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match run::dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("runtime error: {msg}");
            1
        }
    }
}
