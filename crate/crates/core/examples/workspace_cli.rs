//! Drives the command layer from code: load a workspace file, run a few
//! commands and print their JSON and CSV reports.

use std::path::Path;

use pfl::cli::{run, Command, Workspace};

fn main() -> pfl::Result<()> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data");
    let ws = Workspace::load(&dir.join("reproductive.toml"))?;
    println!("inputs digest {}", ws.digest);

    let args = |s: &str| s.split_whitespace().map(String::from).collect::<Vec<_>>();
    print!("{}", run(Command::Eval, &args("std_cond_prob normal|early @57"), &ws, None)?.to_json());
    print!("{}", run(Command::Table, &args("g early normal 57 x=57"), &ws, None)?.to_csv());

    let ws = Workspace::load(&dir.join("dose.toml"))?;
    print!("{}", run(Command::Fate, &args("linear"), &ws, Some(11))?.to_csv());
    Ok(())
}
