//! Browser bindings: three interactive operations over the calculus,
//! each taking strings and returning a JSON string (all integers as
//! decimal strings, the same schema the CLI emits).

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::json;
use wasm_bindgen::prelude::*;

use wahl::hjcf::{discrepancies, evaluate, sequences, Cqs};
use wahl::mori::{
    classify_neighborhood, flip, initial_neighborhood, mori_sequence, mori_step, MoriOutcome,
};
use wahl::neighborhoods::{epres_invariants, oracle_epres, Invariants, Neighborhood};
use wahl::notation::{parse, parse_cqs, Parsed};
use wahl::tsing::{classify, t_blowup, t_decompositions, BlowupScript};

fn err_json(msg: impl std::fmt::Display) -> String {
    json!({ "error": msg.to_string() }).to_string()
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

/// Expand and classify a cyclic quotient singularity. Accepts `1/D(1,O)`
/// or a pair of decimal strings via `expand_pair`.
#[wasm_bindgen]
pub fn expand_singularity(text: &str) -> String {
    let cqs = match parse_cqs(text) {
        Ok(c) => c,
        Err(e) => return err_json(e),
    };
    describe_cqs(&cqs)
}

#[wasm_bindgen]
pub fn expand_pair(delta: &str, omega: &str) -> String {
    let (Ok(d), Ok(o)) = (
        BigInt::from_str(delta.trim()),
        BigInt::from_str(omega.trim()),
    ) else {
        return err_json("both fields must be integers");
    };
    match Cqs::new(d, o) {
        Ok(cqs) => describe_cqs(&cqs),
        Err(e) => err_json(e),
    }
}

fn describe_cqs(cqs: &Cqs) -> String {
    let seq = sequences(cqs.delta(), cqs.omega()).expect("valid singularity");
    let discs = discrepancies(cqs.delta(), cqs.omega()).expect("valid singularity");
    json!({
        "singularity": cqs.to_string(),
        "dual": cqs.dual().to_string(),
        "chain": cqs.chain().to_string(),
        "class": classify(cqs).to_string(),
        "t_decompositions": t_decompositions(cqs).iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "alpha": seq.alpha.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "beta": seq.beta.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "gamma": seq.gamma.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "discrepancies": discs.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
    })
    .to_string()
}

/// Parse a neighborhood or P-resolution and run the appropriate
/// birational operation on it.
#[wasm_bindgen]
pub fn analyze(notation: &str) -> String {
    let value = match parse(notation) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    match value {
        Parsed::Chain(chain) => {
            let Ok((p, q)) = evaluate(&chain) else {
                return err_json("empty chain");
            };
            match Cqs::from_pair(&p, &q) {
                Ok(cqs) => describe_cqs(&cqs),
                Err(e) => err_json(e),
            }
        }
        Parsed::EpRes(p) => {
            let inv = epres_invariants(&p);
            let oracle = oracle_epres(&p).expect("valid P-resolution");
            json!({
                "kind": "extremal P-resolution",
                "notation": p.to_string(),
                "invariants": inv_json(&inv),
                "oracle": { "Delta": oracle.0.to_string(), "Omega": oracle.1.to_string() },
                "singularity": inv.cqs().to_string(),
            })
            .to_string()
        }
        Parsed::Mk1a(n) => describe_neighborhood(Neighborhood::Mk1a(n)),
        Parsed::Mk2a(n) => describe_neighborhood(Neighborhood::Mk2a(n)),
    }
}

fn describe_neighborhood(nb: Neighborhood) -> String {
    let inv = nb.invariants();
    let (kind, trace) = match classify_neighborhood(&nb) {
        Ok(x) => x,
        Err(e) => return err_json(e),
    };
    let step = match mori_step(&nb) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let (op, output) = match &step.outcome {
        MoriOutcome::Flip(p) => ("flip", p.to_string()),
        MoriOutcome::Divisorial(w) => ("divisorial contraction", w.cqs().to_string()),
    };
    let initial = initial_neighborhood(&nb).map(|i| i.to_string());
    json!({
        "kind": match &nb {
            Neighborhood::Mk1a(_) => "k1A neighborhood",
            Neighborhood::Mk2a(_) => "k2A neighborhood",
        },
        "notation": nb.to_string(),
        "invariants": inv_json(&inv),
        "type": kind.to_string(),
        "pairs": trace.pairs.iter().map(|(d, c)| format!("({d},{c})")).collect::<Vec<_>>(),
        "stop": trace.stop_value.to_string(),
        "initial": initial.ok(),
        "operation": op,
        "output": output,
        "k2_delta": step.k2_delta,
    })
    .to_string()
}

/// Generate a Mori sequence from an initial neighborhood.
#[wasm_bindgen]
pub fn mori_family(notation: &str, items: u32) -> String {
    let nb = match parse(notation) {
        Ok(Parsed::Mk1a(n)) => Neighborhood::Mk1a(n),
        Ok(Parsed::Mk2a(n)) => Neighborhood::Mk2a(n),
        Ok(other) => return err_json(format!("{other} is not an extremal neighborhood")),
        Err(e) => return err_json(e),
    };
    let extra = (items as usize).saturating_sub(1);
    let seq = match mori_sequence(&nb, extra) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let flips: Vec<Option<String>> = seq
        .mk2a_items()
        .into_iter()
        .map(|m| flip(&Neighborhood::Mk2a(m)).ok().map(|p| p.to_string()))
        .collect();
    json!({
        "family": seq.render(),
        "type": seq.kind.to_string(),
        "delta": seq.delta.to_string(),
        "invariants": inv_json(&seq.invariants),
        "items": seq.chain_items().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "rungs": seq.rungs().iter().map(|(d, c)| json!([d.to_string(), c.to_string()])).collect::<Vec<_>>(),
        "member_flips": flips,
    })
    .to_string()
}

/// Simulate a T-blow-up of an I_d fiber; script like "0", "1LRL".
#[wasm_bindgen]
pub fn t_blowup_demo(d: u32, script: &str) -> String {
    let script = match BlowupScript::parse(script) {
        Ok(s) => s,
        Err(e) => return err_json(e),
    };
    let t = match t_blowup(d as u64, &script) {
        Ok(t) => t,
        Err(e) => return err_json(e),
    };
    let (p, q) = evaluate(&t.chain).expect("nonempty chain");
    let cqs = Cqs::from_pair(&p, &q).expect("T-chains are singular");
    json!({
        "chain": t.chain.to_string(),
        "nu": t.nu.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "n": t.n.to_string(),
        "a": t.a.to_string(),
        "singularity": cqs.to_string(),
        "class": classify(&cqs).to_string(),
        "fiber": t.state.to_json(),
    })
    .to_string()
}
