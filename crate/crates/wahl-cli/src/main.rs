//! `wahl`: exact arithmetic for Wahl/T-singularity chains, extremal
//! neighborhoods, flips and divisorial contractions, and Mori sequences.
//!
//! Exit codes: 0 on success, 2 on parse or input errors, 3 on contract
//! violations (flip of a divisorial neighborhood and the like).

use std::io::Read;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::json;

use wahl::hjcf::{discrepancies, evaluate, sequences, Cqs};
use wahl::mori::{
    classify_neighborhood, degenerate_mk1a, divisorial_data, divisorial_family, flip,
    initial_neighborhood, mori_sequence, special_flip, MoriSequence,
};
use wahl::neighborhoods::{epres_invariants, Invariants, Neighborhood};
use wahl::notation::{parse, parse_cqs, Parsed};
use wahl::pipeline::{parse_script, render_json, render_text, run_pipeline};
use wahl::tsing::{
    blowup_consistent, classify, t_blowup, t_decompositions, BlowupScript, TData, WahlData,
};
use wahl::Error;

#[derive(Parser)]
#[command(
    name = "wahl",
    version,
    about = "semistable MMP calculus on Wahl chains"
)]
struct Cli {
    /// Emit JSON instead of text (large integers as decimal strings).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ItemCount {
    /// How many family items to generate.
    #[arg(long, default_value_t = 4)]
    max_items: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Hirzebruch-Jung expansion of m/q with sequences and discrepancies.
    Hj { m: String, q: String },
    /// Classify a singularity `1/D(1,O)` (or a chain) as du Val, Wahl, T or plain.
    Classify { input: String },
    /// The Wahl chain of 1/n^2(1,na-1).
    Wahl { n: String, a: String },
    /// The T-chain of 1/(d n^2)(1,dna-1).
    Tchain { d: String, n: String, a: String },
    /// Simulate a T-blow-up of I_d; script like `0`, `1LRL`.
    Tblowup { d: u64, script: String },
    /// delta, Delta, Omega, K.C, C^2 of a neighborhood or P-resolution.
    Invariants { notation: String },
    /// Flip an extremal neighborhood.
    Flip { notation: String },
    /// Divisorial contraction of an extremal neighborhood.
    Contract { notation: String },
    /// Mori sequence generated by an initial neighborhood.
    #[command(name = "mori-seq")]
    MoriSeq {
        notation: String,
        #[command(flatten)]
        items: ItemCount,
    },
    /// The divisorial Mori sequence of the Wahl singularity (n, a).
    #[command(name = "div-family")]
    DivFamily {
        n: String,
        a: String,
        #[command(flatten)]
        items: ItemCount,
    },
    /// Degenerate a k1A to its k2A neighbors.
    Degenerate { notation: String },
    /// Run a script of flips/contractions with K^2 bookkeeping.
    Pipeline {
        /// Script file, one statement per line; stdin when omitted.
        #[arg(long)]
        seed_file: Option<std::path::PathBuf>,
    },
}

enum CliError {
    Input(String),
    Contract(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        match e {
            Error::Contract(_) => CliError::Contract(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<wahl::ParseError> for CliError {
    fn from(e: wahl::ParseError) -> CliError {
        CliError::Input(e.to_string())
    }
}

fn bigint(text: &str) -> Result<BigInt, CliError> {
    BigInt::from_str(text.trim()).map_err(|_| CliError::Input(format!("not an integer: {text:?}")))
}

fn inv_json(inv: &Invariants) -> serde_json::Value {
    json!({
        "delta": inv.delta.to_string(),
        "Delta": inv.cap_delta.to_string(),
        "Omega": inv.omega.to_string(),
        "K.C": inv.kc.to_string(),
        "C^2": inv.c2.to_string(),
    })
}

fn parse_neighborhood(text: &str) -> Result<Neighborhood, CliError> {
    match parse(text)? {
        Parsed::Mk1a(n) => Ok(Neighborhood::Mk1a(n)),
        Parsed::Mk2a(n) => Ok(Neighborhood::Mk2a(n)),
        other => Err(CliError::Input(format!(
            "{other} is not an extremal neighborhood"
        ))),
    }
}

fn print_family(seq: &MoriSequence, json_mode: bool) {
    if json_mode {
        println!(
            "{}",
            json!({
                "family": seq.render(),
                "type": seq.kind.to_string(),
                "delta": seq.delta.to_string(),
                "invariants": inv_json(&seq.invariants),
                "items": seq.chain_items().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "rungs": seq.rungs().iter()
                    .map(|(d, c)| json!([d.to_string(), c.to_string()]))
                    .collect::<Vec<_>>(),
            })
        );
    } else {
        println!("{}", seq.render());
        println!("type: {}  {}", seq.kind, seq.invariants);
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Hj { m, q } => {
            let (m, q) = (bigint(&m)?, bigint(&q)?);
            let seq = sequences(&m, &q)?;
            let discs = discrepancies(&m, &q)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "m": m.to_string(), "q": q.to_string(),
                        "chain": seq.chain.to_string(),
                        "alpha": seq.alpha.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "beta": seq.beta.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "gamma": seq.gamma.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "discrepancies": discs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!("{}/{} = {}", m, q, seq.chain);
                println!(
                    "beta:  {:?}",
                    seq.beta.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                );
                println!(
                    "alpha: {:?}",
                    seq.alpha.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                );
                println!(
                    "gamma: {:?}",
                    seq.gamma.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                );
                let d: Vec<String> = discs.iter().map(|x| x.to_string()).collect();
                println!("discrepancies: {}", d.join(", "));
            }
        }
        Command::Classify { input } => {
            let cqs = if input.trim_start().starts_with('[') {
                match parse(&input)? {
                    Parsed::Chain(chain) => {
                        let (p, q) = evaluate(&chain)?;
                        Cqs::from_pair(&p, &q)?
                    }
                    other => {
                        return Err(CliError::Input(format!(
                            "classify takes a singularity or a plain chain, got {other}"
                        )))
                    }
                }
            } else {
                parse_cqs(&input)?
            };
            let class = classify(&cqs);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "singularity": cqs.to_string(),
                        "chain": cqs.chain().to_string(),
                        "class": class.to_string(),
                        "t_decompositions": t_decompositions(&cqs).iter()
                            .map(|t| t.to_string()).collect::<Vec<_>>(),
                    })
                );
            } else {
                println!("{cqs} = {}: {class}", cqs.chain());
                let all = t_decompositions(&cqs);
                if all.len() > 1 {
                    let rest: Vec<String> = all.iter().map(|t| t.to_string()).collect();
                    println!("all T-decompositions: {}", rest.join(", "));
                }
            }
        }
        Command::Wahl { n, a } => {
            let w = WahlData::new(bigint(&n)?, bigint(&a)?)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "singularity": w.cqs().to_string(),
                        "chain": w.chain().to_string(),
                    })
                );
            } else {
                println!("{} = {}", w.cqs(), w.chain());
            }
        }
        Command::Tchain { d, n, a } => {
            let t = TData::new(bigint(&d)?, bigint(&n)?, bigint(&a)?)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "singularity": t.cqs().to_string(),
                        "chain": t.chain().to_string(),
                    })
                );
            } else {
                println!("{} = {}", t.cqs(), t.chain());
            }
        }
        Command::Tblowup { d, script } => {
            let script = BlowupScript::parse(&script)?;
            let t = t_blowup(d, &script)?;
            blowup_consistent(&t)?;
            let (p, q) = evaluate(&t.chain)?;
            let cqs = Cqs::from_pair(&p, &q)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "chain": t.chain.to_string(),
                        "nu": t.nu.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                        "n": t.n.to_string(),
                        "a": t.a.to_string(),
                        "singularity": cqs.to_string(),
                        "class": classify(&cqs).to_string(),
                        "fiber": t.state.to_json(),
                    })
                );
            } else {
                println!("chain: {}", t.chain);
                let nu: Vec<String> = t.nu.iter().map(|x| x.to_string()).collect();
                println!("nu: ({})", nu.join(","));
                println!("n = {}, a = {}  ->  {} : {}", t.n, t.a, cqs, classify(&cqs));
            }
        }
        Command::Invariants { notation } => {
            let value = parse(&notation)?;
            let (inv, oracle, kind) =
                match &value {
                    Parsed::Mk1a(n) => {
                        let nb = Neighborhood::Mk1a(n.clone());
                        let (kind, _) = classify_neighborhood(&nb)?;
                        (nb.invariants(), nb.oracle_pair()?, Some(kind))
                    }
                    Parsed::Mk2a(n) => {
                        let nb = Neighborhood::Mk2a(n.clone());
                        let (kind, _) = classify_neighborhood(&nb)?;
                        (nb.invariants(), nb.oracle_pair()?, Some(kind))
                    }
                    Parsed::EpRes(p) => (
                        epres_invariants(p),
                        wahl::neighborhoods::oracle_epres(p)?,
                        None,
                    ),
                    Parsed::Chain(_) => return Err(CliError::Input(
                        "invariants of a bare chain are not defined; mark a bar or join two chains"
                            .into(),
                    )),
                };
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "input": value.to_string(),
                        "invariants": inv_json(&inv),
                        "oracle": { "Delta": oracle.0.to_string(), "Omega": oracle.1.to_string() },
                        "type": kind.map(|k| k.to_string()),
                    })
                );
            } else {
                match kind {
                    Some(kind) => println!("{value}: {inv}  ({kind})"),
                    None => println!("{value}: {inv}"),
                }
                println!("oracle: Delta={} Omega={}", oracle.0, oracle.1);
            }
        }
        Command::Flip { notation } => {
            let nb = parse_neighborhood(&notation)?;
            let out = flip(&nb)?;
            let inv = epres_invariants(&out);
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "input": nb.to_string(),
                        "initial": initial_neighborhood(&nb)?.to_string(),
                        "flip": out.to_string(),
                        "invariants": inv_json(&inv),
                    })
                );
            } else {
                println!("{nb} -> {out}");
                println!("{inv}");
            }
        }
        Command::Contract { notation } => {
            let nb = parse_neighborhood(&notation)?;
            let w = divisorial_data(&nb)?;
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "input": nb.to_string(),
                        "target": w.cqs().to_string(),
                        "wahl": [w.n().to_string(), w.a().to_string()],
                        "k2_delta": 1,
                    })
                );
            } else {
                println!("{nb} -> {}  (K^2 of the central fiber rises by 1)", w.cqs());
            }
        }
        Command::MoriSeq { notation, items } => {
            let nb = parse_neighborhood(&notation)?;
            let extra = items.max_items.saturating_sub(1);
            let seq = mori_sequence(&nb, extra)?;
            print_family(&seq, cli.json);
        }
        Command::DivFamily { n, a, items } => {
            let w = WahlData::new(bigint(&n)?, bigint(&a)?)?;
            let extra = items.max_items.saturating_sub(2);
            let seq = divisorial_family(&w, extra)?;
            print_family(&seq, cli.json);
        }
        Command::Degenerate { notation } => {
            let nb = match parse(&notation)? {
                Parsed::Mk1a(n) => n,
                other => {
                    return Err(CliError::Input(format!(
                        "degenerate takes a barred chain, got {other}"
                    )))
                }
            };
            let degs = degenerate_mk1a(&nb);
            // the end-bar shortcut is worth printing when it applies
            let shortcut = special_flip(&nb).ok();
            if cli.json {
                println!(
                    "{}",
                    json!({
                        "input": nb.to_string(),
                        "degenerations": degs.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                        "special_flip": shortcut.map(|p| p.to_string()),
                    })
                );
            } else {
                if degs.is_empty() {
                    println!("{nb} has no k2A degenerations");
                }
                for d in &degs {
                    println!("{d}");
                }
                if let Some(p) = shortcut {
                    println!("special flip: {p}");
                }
            }
        }
        Command::Pipeline { seed_file } => {
            let text = match seed_file {
                Some(path) => std::fs::read_to_string(&path)
                    .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?,
                None => {
                    let mut buf = String::new();
                    std::io::stdin()
                        .read_to_string(&mut buf)
                        .map_err(|e| CliError::Input(format!("cannot read stdin: {e}")))?;
                    buf
                }
            };
            let script = parse_script(&text)?;
            let state = run_pipeline(&script).map_err(|e| match e.source {
                Error::Contract(_) => CliError::Contract(e.to_string()),
                _ => CliError::Input(e.to_string()),
            })?;
            if cli.json {
                println!("{}", render_json(&state));
            } else {
                print!("{}", render_text(&state));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    // die quietly when a downstream pager closes the pipe
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Contract(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
