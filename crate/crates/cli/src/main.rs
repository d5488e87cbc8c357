// `!(x > 0.0)` is used on purpose: it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod args;
mod commands;
mod report;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, IntegralCommand};
use commands::{error_kind, exit_code, Outcome, EXIT_INTERNAL};
use report::render_error;

fn run(cli: &Cli) -> Outcome {
    let opts = &cli.global;
    match &cli.command {
        Command::Area(a) => commands::area(a, opts),
        Command::Verify(a) => commands::verify(a, opts),
        Command::EvalF2(a) => commands::eval_f2(a, opts),
        Command::EvalF3(a) => commands::eval_f3(a, opts),
        Command::Eval2F1(a) => commands::eval_2f1(a, opts),
        Command::Integral(IntegralCommand::Angular(a)) => commands::integral_angular(a, opts),
        Command::Integral(IntegralCommand::Radial(a)) => commands::integral_radial(a, opts),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.format;
    let code = match run(&cli) {
        Ok((report, code)) => {
            let text = report.render(format);
            print!("{text}");
            match &cli.global.output {
                Some(path) => match std::fs::write(path, &text) {
                    Ok(()) => code,
                    Err(e) => {
                        let msg = format!("cannot write {}: {e}", path.display());
                        eprint!("{}", render_error("io", &msg, format));
                        EXIT_INTERNAL
                    }
                },
                None => code,
            }
        }
        Err(err) => {
            eprint!("{}", render_error(error_kind(&err), &err.to_string(), format));
            exit_code(&err)
        }
    };
    ExitCode::from(code as u8)
}
