//! Command-line front end for the `xxlde` simulator.

pub mod args;
pub mod commands;
pub mod error;
pub mod grid;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Serialize;

use crate::args::{Cli, Command, OutputArgs};
use crate::error::{CliError, CliResult};
use crate::output::{emit, render, resolve_output, Provenance, Table, OUTPUT_DIR_ENV};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Parse, run and report; returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => return clap_exit(e),
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("xxlde: {e}");
            e.exit_code()
        }
    }
}

fn clap_exit(e: clap::Error) -> i32 {
    use clap::error::ErrorKind;
    let _ = e.print();
    match e.kind() {
        ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => 0,
        _ => 1,
    }
}

pub fn execute(cli: Cli) -> CliResult<()> {
    if let Some(threads) = cli.threads {
        if threads == 0 {
            return Err(CliError::Config("--threads must be positive".into()));
        }
        // A pool may already exist when the library is driven in-process.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let name = cli.command.name();
    match &cli.command {
        Command::SweepLength(a) => finish(name, a, &a.output, commands::sweep_length(a)?),
        Command::SweepCouplings(a) => finish(name, a, &a.output, commands::sweep_couplings(a)?),
        Command::Gap(a) => finish(name, a, &a.output, commands::gap(a)?),
        Command::Disorder(a) => finish(name, a, &a.output, commands::disorder(a)?),
        Command::BoseHubbard(a) => finish(name, a, &a.output, commands::bose_hubbard(a)?),
        Command::Teleport(a) => finish(name, a, &a.output, commands::teleport(a)?),
        Command::Tc(a) => finish(name, a, &a.output, commands::tc(a)?),
        Command::Run(a) => {
            let argv = config_to_args(&a.config)?;
            let nested = Cli::try_parse_from(argv).map_err(|e| CliError::Config(e.to_string()))?;
            if matches!(nested.command, Command::Run(_)) {
                return Err(CliError::Config("a config file cannot invoke `run`".into()));
            }
            execute(nested)
        }
    }
}

fn finish<A: Serialize>(command: &'static str, args: &A, output: &OutputArgs, table: Table) -> CliResult<()> {
    let provenance = Provenance {
        tool: "xxlde",
        version: VERSION,
        command,
        config: serde_json::to_value(args).map_err(|e| CliError::Output(e.to_string()))?,
    };
    let text = render(&table, &provenance, output.format)?;
    let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    let path = output.out.as_deref().map(|p| resolve_output(p, dir.as_deref()));
    emit(&text, path.as_deref())
}

/// Translate a TOML run file into an argument vector.  Keys mirror the long
/// flags (`n = "4:100:2"`, `temperature = 0.1`, `oracle = true`); the
/// `command` key names the subcommand.
pub fn config_to_args(path: &Path) -> CliResult<Vec<String>> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    let table: toml::Table = toml::from_str(&text)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let command = table
        .get("command")
        .and_then(|v| v.as_str())
        .ok_or_else(|| CliError::Config(format!("{}: missing string key `command`", path.display())))?;
    let mut argv = vec!["xxlde".to_string(), command.to_string()];
    for (key, value) in &table {
        if key == "command" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            toml::Value::Boolean(true) => argv.push(flag),
            toml::Value::Boolean(false) => {}
            toml::Value::String(s) => argv.extend([flag, s.clone()]),
            toml::Value::Integer(i) => argv.extend([flag, i.to_string()]),
            toml::Value::Float(f) => argv.extend([flag, f.to_string()]),
            toml::Value::Array(items) => {
                let parts = items
                    .iter()
                    .map(|v| match v {
                        toml::Value::Integer(i) => Ok(i.to_string()),
                        toml::Value::Float(f) => Ok(f.to_string()),
                        other => Err(CliError::Config(format!("unsupported list element {other} for `{key}`"))),
                    })
                    .collect::<CliResult<Vec<_>>>()?;
                argv.extend([flag, parts.join(",")]);
            }
            other => return Err(CliError::Config(format!("unsupported value {other} for `{key}`"))),
        }
    }
    Ok(argv)
}
