use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use wellorder_cli::{
    parse_input, render_text, run, Format, InputError, ProblemSpec, VerifySpec, EXIT_INPUT_ERROR,
};

/// Build and verify the well-order induced by an explicit choice function.
#[derive(Debug, Parser)]
#[command(name = "wellorder", version)]
struct Args {
    /// Problem document (JSON); `-` reads standard input.
    #[arg(long, value_name = "PATH")]
    input: PathBuf,

    /// Output format; overrides `options.format`.
    #[arg(long, value_enum)]
    emit: Option<Format>,

    /// Run the exhaustive oracle (at most 4 atoms).
    #[arg(long)]
    oracle: bool,

    /// `exhaustive` or `sample:<n>`; overrides `options.verify`.
    #[arg(long, value_name = "MODE")]
    verify_subsets: Option<VerifySpec>,

    /// Seed of the sampled well-order verification.
    #[arg(long, default_value_t = 0)]
    sample_seed: u64,
}

fn load(args: &Args) -> Result<ProblemSpec, InputError> {
    let mut text = Vec::new();
    if args.input.as_os_str() == "-" {
        std::io::stdin().read_to_end(&mut text)?;
    } else {
        text = std::fs::read(&args.input)?;
    }
    let mut input = parse_input(&text)?;
    if args.oracle {
        input.options.oracle = true;
    }
    if let Some(verify) = args.verify_subsets {
        input.options.verify = Some(verify);
    }
    if let Some(format) = args.emit {
        input.options.format = format;
    }
    ProblemSpec::from_input(input, args.sample_seed)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };

    let spec = match load(&args) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT_ERROR as u8);
        }
    };
    let report = match run(&spec) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };

    let rendered = match spec.input.options.format {
        Format::Json => report.to_json(),
        Format::Text => render_text(&report),
    };
    if std::io::stdout().write_all(rendered.as_bytes()).is_err() {
        return ExitCode::from(EXIT_INPUT_ERROR as u8);
    }
    ExitCode::from(report.exit_code() as u8)
}
