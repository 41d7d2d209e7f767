use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use princ::fuzz::{fuzz, FuzzConfig};
use princ::io::{blocks_json, congruences_to_json, PosetFile};
use princ::{
    all_congruences, assemble_k, princ_order, valuation, verify_theorem, BoundedPoset, Error,
    FiniteLattice, TemplateKind, Templates,
};

/// Finite lattices whose principal congruences realize a given order.
#[derive(Parser, Debug)]
#[command(name = "princ", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Assemble K for a bounded poset and write it as a lattice file.
    Build {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "PRINC_TEMPLATES")]
        templates: Option<PathBuf>,
    },
    /// Assemble K and check every stage of Princ K ≅ P.
    Verify {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long, env = "PRINC_TEMPLATES")]
        templates: Option<PathBuf>,
    },
    /// Verify the construction on seeded random bounded posets.
    Fuzz {
        #[arg(long)]
        max_size: usize,
        #[arg(long)]
        samples: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, env = "PRINC_TEMPLATES")]
        templates: Option<PathBuf>,
    },
    /// Print every congruence of a lattice.
    Con {
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Print the principal congruences; optionally write their order.
    Princ {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print v(α) for every congruence α.
    Valuation {
        #[arg(long)]
        lattice: PathBuf,
    },
    /// Write the Hasse diagram of a lattice as DOT.
    ExportDot {
        #[arg(long)]
        lattice: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Failure {
    /// Exit code 2.
    Input(String),
    /// Exit code 1.
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TemplateInvalid { .. }
            | Error::AssemblyNotALattice(_)
            | Error::CorrespondenceBroken(_)
            | Error::VerificationFailed { .. }
            | Error::ValuationDiverged(_) => Failure::Verify(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn templates(dir: Option<&Path>) -> Result<Templates, Failure> {
    let t = match dir {
        Some(d) => Templates::load(d),
        None => Templates::builtin(),
    };
    t.map_err(|e| Failure::Verify(format!("template stage: {e}")))
}

fn read_bounded(path: &Path) -> Result<(String, BoundedPoset), Failure> {
    let file = PosetFile::read(path)?;
    let p = BoundedPoset::new(file.to_poset()?)?;
    Ok((file.name, p))
}

fn read_lattice(path: &Path) -> Result<(String, FiniteLattice), Failure> {
    let file = PosetFile::read(path)?;
    let l = file.to_lattice()?;
    Ok((file.name, l))
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Build {
            poset,
            out,
            templates: dir,
        } => {
            let (name, p) = read_bounded(&poset)?;
            let t = templates(dir.as_deref())?;
            let k = assemble_k(&p, &t)?;
            let l = k.lattice();
            let mut file = PosetFile::from_poset(&format!("K({name})"), l.poset());
            let anchors: BTreeMap<String, (String, String)> = k
                .anchor_names()
                .into_iter()
                .map(|(p, a, b)| (p, (a, b)))
                .collect();
            file.anchors = Some(anchors);
            file.write(&out)?;
            println!("|K| = {}", l.len());
            println!("length = {}", l.length());
            for kind in [
                TemplateKind::S,
                TemplateKind::Cp,
                TemplateKind::SC,
                TemplateKind::SV,
                TemplateKind::SH,
            ] {
                println!("{kind} instances = {}", k.count(kind));
            }
            Ok(())
        }
        Command::Verify {
            poset,
            templates: dir,
        } => {
            let (_, p) = read_bounded(&poset)?;
            let t = templates(dir.as_deref())?;
            let report = verify_theorem(&p, &t);
            print!("{}", report.render());
            report.ensure()?;
            println!("Princ K ≅ P");
            Ok(())
        }
        Command::Fuzz {
            max_size,
            samples,
            seed,
            jobs,
            templates: dir,
        } => {
            if max_size == 0 || samples == 0 {
                return Err(Failure::Input(
                    "--max-size and --samples must be at least 1".into(),
                ));
            }
            let t = templates(dir.as_deref())?;
            let cfg = FuzzConfig {
                max_size,
                samples,
                seed,
                jobs,
            };
            let outcome = fuzz(&cfg, &t)?;
            print!("{}", outcome.render());
            eprint!("{}", outcome.render_timings());
            if outcome.failed() > 0 {
                return Err(Failure::Verify(format!(
                    "{} counterexamples",
                    outcome.failed()
                )));
            }
            Ok(())
        }
        Command::Con { lattice } => {
            let (_, l) = read_lattice(&lattice)?;
            let con = all_congruences(&l);
            print!("{}", congruences_to_json(&l, con.congruences()));
            Ok(())
        }
        Command::Princ { lattice, out } => {
            let (name, l) = read_lattice(&lattice)?;
            let princ = princ_order(&l);
            for (c, &(x, y)) in princ.congruences().iter().zip(princ.witnesses()) {
                println!("con({}, {}) = {}", l.name(x), l.name(y), blocks_json(&l, c));
            }
            if let Some(out) = out {
                PosetFile::from_poset(&format!("Princ({name})"), &princ.to_poset(&l))
                    .write(&out)?;
            }
            Ok(())
        }
        Command::Valuation { lattice } => {
            let (_, l) = read_lattice(&lattice)?;
            let v = valuation(&l)?;
            for (c, n) in v.order().congruences().iter().zip(v.values()) {
                println!("v = {n} {}", blocks_json(&l, c));
            }
            Ok(())
        }
        Command::ExportDot { lattice, out } => {
            let (name, l) = read_lattice(&lattice)?;
            std::fs::write(&out, princ::dot::to_dot(l.poset(), &name))
                .map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            Ok(())
        }
    }
}
