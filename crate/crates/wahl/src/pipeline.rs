//! Script runner: replay a sequence of flips and divisorial contractions
//! over named neighborhoods, with K^2 bookkeeping.
//!
//! Script syntax, one statement per line (`#` starts a comment):
//!
//! ```text
//! n = [4]-[2,6,2,3]
//! classify n
//! flip n
//! contract m
//! mori-seq n 3
//! ```
//!
//! A flip replaces the named value by its extremal P-resolution and leaves
//! K^2 alone; a contraction replaces it by the Wahl singularity it
//! contracts to and raises the K^2 offset of the central fiber by one.

use std::fmt::Write as _;

use serde_json::{json, Value as Json};

use crate::error::Error;
use crate::mori::{classify_neighborhood, mori_sequence, mori_step, MoriOutcome, NbhdType};
use crate::neighborhoods::{epres_invariants, EpRes, Neighborhood};
use crate::notation::{parse, ParseError, ParseErrorKind, Parsed};
use crate::tsing::WahlData;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step {
    Flip(String),
    Contract(String),
    Classify(String),
    MoriSeq(String, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Script {
    pub defs: Vec<(String, Neighborhood)>,
    pub steps: Vec<Step>,
}

fn script_err(line_no: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        offset: line_no,
        message: format!("line {}: {}", line_no, message.into()),
    }
}

/// Parse a pipeline script. Definitions may only bind neighborhoods;
/// P-resolutions arise as flip outputs.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut defs = Vec::new();
    let mut steps = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((name, rhs)) = line.split_once('=') {
            let name = name.trim();
            if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(script_err(line_no, format!("bad name {name:?}")));
            }
            let value = parse(rhs.trim()).map_err(|e| script_err(line_no, e.to_string()))?;
            let nb = match value {
                Parsed::Mk1a(n) => Neighborhood::Mk1a(n),
                Parsed::Mk2a(n) => Neighborhood::Mk2a(n),
                other => {
                    return Err(script_err(
                        line_no,
                        format!("{other} is not an extremal neighborhood"),
                    ))
                }
            };
            defs.push((name.to_string(), nb));
            continue;
        }
        let mut words = line.split_whitespace();
        let op = words.next().expect("nonempty line");
        let name = words
            .next()
            .ok_or_else(|| script_err(line_no, format!("{op} needs a neighborhood name")))?
            .to_string();
        let step = match op {
            "flip" => Step::Flip(name),
            "contract" => Step::Contract(name),
            "classify" => Step::Classify(name),
            "mori-seq" => {
                let k = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| script_err(line_no, "mori-seq needs an item count"))?;
                Step::MoriSeq(name, k)
            }
            other => return Err(script_err(line_no, format!("unknown operation {other:?}"))),
        };
        if words.next().is_some() {
            return Err(script_err(line_no, "trailing tokens"));
        }
        steps.push(step);
    }
    Ok(Script { defs, steps })
}

/// What a name currently denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    Neighborhood(Neighborhood),
    EpRes(EpRes),
    Contracted(WahlData),
}

impl Slot {
    fn describe(&self) -> String {
        match self {
            Slot::Neighborhood(n) => format!("{n}  {}", n.invariants()),
            Slot::EpRes(p) => format!("{p}  {}", epres_invariants(p)),
            Slot::Contracted(w) => format!("contracted to {}", w.cqs()),
        }
    }

    fn notation(&self) -> String {
        match self {
            Slot::Neighborhood(n) => n.to_string(),
            Slot::EpRes(p) => p.to_string(),
            Slot::Contracted(w) => w.cqs().to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogEntry {
    pub step: usize,
    pub text: String,
    pub json: JsonRepr,
}

// serde_json::Value is not Eq; keep the source string
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JsonRepr(String);

impl JsonRepr {
    fn new(v: Json) -> JsonRepr {
        JsonRepr(v.to_string())
    }

    pub fn value(&self) -> Json {
        serde_json::from_str(&self.0).expect("stored JSON is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineState {
    pub slots: Vec<(String, Slot)>,
    pub k2: i64,
    pub log: Vec<LogEntry>,
}

#[derive(Clone, Debug)]
pub struct PipelineError {
    /// 1-based index of the failing step.
    pub step: usize,
    pub source: Error,
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "step {}: {}", self.step, self.source)
    }
}

impl std::error::Error for PipelineError {}

fn invariants_json(inv: &crate::neighborhoods::Invariants) -> Json {
    json!({
        "delta": inv.delta.to_string(),
        "Delta": inv.cap_delta.to_string(),
        "Omega": inv.omega.to_string(),
        "K.C": inv.kc.to_string(),
        "C^2": inv.c2.to_string(),
    })
}

fn lookup<'a>(
    slots: &'a mut [(String, Slot)],
    name: &str,
    step: usize,
) -> Result<&'a mut Slot, PipelineError> {
    slots
        .iter_mut()
        .find(|(n, _)| n == name)
        .map(|(_, s)| s)
        .ok_or_else(|| PipelineError {
            step,
            source: Error::InvalidInput(format!("unknown name {name:?}")),
        })
}

fn need_neighborhood(slot: &Slot, step: usize) -> Result<Neighborhood, PipelineError> {
    match slot {
        Slot::Neighborhood(n) => Ok(n.clone()),
        other => Err(PipelineError {
            step,
            source: Error::Contract(format!(
                "{} is not an extremal neighborhood anymore",
                other.notation()
            )),
        }),
    }
}

/// Run a script to completion.
pub fn run_pipeline(script: &Script) -> Result<PipelineState, PipelineError> {
    let mut state = PipelineState {
        slots: script
            .defs
            .iter()
            .map(|(n, nb)| (n.clone(), Slot::Neighborhood(nb.clone())))
            .collect(),
        k2: 0,
        log: Vec::new(),
    };
    for (idx, step) in script.steps.iter().enumerate() {
        let step_no = idx + 1;
        match step {
            Step::Flip(name) | Step::Contract(name) => {
                let slot = lookup(&mut state.slots, name, step_no)?;
                let nb = need_neighborhood(slot, step_no)?;
                let ms = mori_step(&nb).map_err(|source| PipelineError {
                    step: step_no,
                    source,
                })?;
                // the script names the operation; running the other one is
                // a contract violation
                let (text, json_entry) = match (&ms.outcome, step) {
                    (MoriOutcome::Flip(out), Step::Flip(_)) => {
                        let inv = epres_invariants(out);
                        *slot = Slot::EpRes(out.clone());
                        (
                            format!("flip {name}: {nb} -> {out}  ({inv}, k2 +0)"),
                            json!({
                                "step": step_no, "op": "flip", "name": name,
                                "input": nb.to_string(), "output": out.to_string(),
                                "invariants": invariants_json(&inv), "k2_delta": 0,
                            }),
                        )
                    }
                    (MoriOutcome::Divisorial(w), Step::Contract(_)) => {
                        state.k2 += 1;
                        *slot = Slot::Contracted(w.clone());
                        (
                            format!("contract {name}: {nb} -> {}  (k2 +1)", w.cqs()),
                            json!({
                                "step": step_no, "op": "contract", "name": name,
                                "input": nb.to_string(), "output": w.cqs().to_string(),
                                "k2_delta": 1,
                            }),
                        )
                    }
                    (MoriOutcome::Flip(_), _) => {
                        return Err(PipelineError {
                            step: step_no,
                            source: Error::Contract(format!(
                                "{nb} is flipping; `contract {name}` does not apply"
                            )),
                        })
                    }
                    (MoriOutcome::Divisorial(_), _) => {
                        return Err(PipelineError {
                            step: step_no,
                            source: Error::Contract(format!(
                                "{nb} is divisorial; `flip {name}` does not apply"
                            )),
                        })
                    }
                };
                state.log.push(LogEntry {
                    step: step_no,
                    text,
                    json: JsonRepr::new(json_entry),
                });
            }
            Step::Classify(name) => {
                let slot = lookup(&mut state.slots, name, step_no)?;
                let nb = need_neighborhood(slot, step_no)?;
                let (kind, trace) = classify_neighborhood(&nb).map_err(|source| PipelineError {
                    step: step_no,
                    source,
                })?;
                let pairs: Vec<String> = trace
                    .pairs
                    .iter()
                    .map(|(d, c)| format!("({d},{c})"))
                    .collect();
                state.log.push(LogEntry {
                    step: step_no,
                    text: format!(
                        "classify {name}: {nb} is {kind}  (pairs {}, stop {})",
                        pairs.join(" "),
                        trace.stop_value
                    ),
                    json: JsonRepr::new(json!({
                        "step": step_no, "op": "classify", "name": name,
                        "input": nb.to_string(), "type": kind.to_string(),
                        "pairs": trace.pairs.iter()
                            .map(|(d, c)| json!([d.to_string(), c.to_string()]))
                            .collect::<Vec<_>>(),
                        "stop": trace.stop_value.to_string(),
                        "invariants": invariants_json(&nb.invariants()),
                    })),
                });
            }
            Step::MoriSeq(name, k) => {
                let slot = lookup(&mut state.slots, name, step_no)?;
                let nb = need_neighborhood(slot, step_no)?;
                let extra = k.saturating_sub(1);
                let seq = mori_sequence(&nb, extra).map_err(|source| PipelineError {
                    step: step_no,
                    source,
                })?;
                state.log.push(LogEntry {
                    step: step_no,
                    text: format!(
                        "mori-seq {name}: {} ({} type, {})",
                        seq.render(),
                        seq.kind,
                        seq.invariants
                    ),
                    json: JsonRepr::new(json!({
                        "step": step_no, "op": "mori-seq", "name": name,
                        "input": nb.to_string(), "family": seq.render(),
                        "type": seq.kind.to_string(),
                        "items": seq.chain_items().iter().map(|c| c.to_string())
                            .collect::<Vec<_>>(),
                        "invariants": invariants_json(&seq.invariants),
                    })),
                });
            }
        }
    }
    Ok(state)
}

/// Plain-text report: slots, K^2 offset, log.
pub fn render_text(state: &PipelineState) -> String {
    let mut out = String::new();
    out.push_str("state:\n");
    for (name, slot) in &state.slots {
        let _ = writeln!(out, "  {name}: {}", slot.describe());
    }
    let _ = writeln!(out, "k2: +{}", state.k2);
    out.push_str("log:\n");
    for entry in &state.log {
        let _ = writeln!(out, "  {}. {}", entry.step, entry.text);
    }
    out
}

/// JSON report. Large integers are serialized as decimal strings: Delta
/// grows quadratically along Mori sequences and overflows fixed-width
/// consumers quickly.
pub fn render_json(state: &PipelineState) -> Json {
    json!({
        "k2": state.k2,
        "state": state.slots.iter().map(|(name, slot)| {
            let kind = match slot {
                Slot::Neighborhood(Neighborhood::Mk1a(_)) => "mk1a",
                Slot::Neighborhood(Neighborhood::Mk2a(_)) => "mk2a",
                Slot::EpRes(_) => "epres",
                Slot::Contracted(_) => "contracted",
            };
            let invariants = match slot {
                Slot::Neighborhood(n) => Some(invariants_json(&n.invariants())),
                Slot::EpRes(p) => Some(invariants_json(&epres_invariants(p))),
                Slot::Contracted(_) => None,
            };
            json!({
                "name": name,
                "kind": kind,
                "notation": slot.notation(),
                "invariants": invariants,
            })
        }).collect::<Vec<_>>(),
        "log": state.log.iter().map(|e| e.json.value()).collect::<Vec<_>>(),
    })
}

/// Classification text used by both the CLI and the demo page.
pub fn type_of(nb: &Neighborhood) -> Result<NbhdType, Error> {
    classify_neighborhood(nb).map(|(kind, _)| kind)
}
