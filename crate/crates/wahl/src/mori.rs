//! The flip/divisorial-contraction algorithm for extremal neighborhoods,
//! and Mori sequences.
//!
//! Every k2A neighborhood descends along the recursion
//! `zeta_{i+1} = delta zeta_i - zeta_{i-1}` through a strictly decreasing
//! ladder of positive pairs; the first non-positive value decides the
//! birational type (negative: flipping, zero: divisorial) and the last two
//! positive rungs form the *initial* neighborhood of its Mori sequence.
//! Running the same ladder upwards enumerates the whole sequence
//! `d(i-1) + d(i+1) = delta d(i)`, an infinite family of neighborhoods
//! sharing delta, the singularity 1/Delta(1,Omega) downstairs, and the
//! birational type.
//!
//! A k1A neighborhood enters the machine either through the smooth-pair
//! embedding (m_1, a_1) = (1, 1) when its bar sits at an end of the chain,
//! or through [`degenerate_mk1a`], which produces up to two k2A
//! neighborhoods with identical invariants and type.
//!
//! Ladder rungs are kept as pairs (d, c). A rung used as the smaller side
//! of a neighborhood is the Wahl singularity (d, c); used as the larger
//! side it is (d, d - c), the same chain read backwards.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hjcf::{big, evaluate, expand, Chain};
use crate::neighborhoods::{epres_invariants, EpRes, Invariants, Mk1a, Mk2a, Neighborhood};
use crate::tsing::WahlData;

/// Birational type of an extremal neighborhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NbhdType {
    Flipping,
    Divisorial,
}

impl fmt::Display for NbhdType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NbhdType::Flipping => write!(f, "flipping"),
            NbhdType::Divisorial => write!(f, "divisorial"),
        }
    }
}

/// Record of one descent run: the zeta values, the positive pairs in
/// descending order, and the first non-positive first coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaTrace {
    pub zetas: Vec<BigInt>,
    pub pairs: Vec<(BigInt, BigInt)>,
    pub stop_value: BigInt,
    /// True when the e-side of the input was the larger singularity, so
    /// the sides were swapped before descending.
    pub swapped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Rung {
    d: BigInt,
    c: BigInt,
}

impl Rung {
    fn new(d: BigInt, c: BigInt) -> Rung {
        Rung { d, c }
    }

    /// The Wahl datum of this rung used as the smaller side.
    fn as_smaller(&self) -> Result<WahlData> {
        WahlData::new(self.d.clone(), self.c.clone())
            .map_err(|e| Error::Internal(format!("ladder rung is not Wahl data: {e}")))
    }

    /// The Wahl datum of this rung used as the larger side.
    fn as_larger(&self) -> Result<WahlData> {
        WahlData::new(self.d.clone(), &self.d - &self.c)
            .map_err(|e| Error::Internal(format!("ladder rung is not Wahl data: {e}")))
    }

    fn is_smooth(&self) -> bool {
        self.d.is_one()
    }
}

/// delta of the neighborhood spanned by a lower and an upper rung.
fn ladder_delta(lower: &Rung, upper: &Rung) -> BigInt {
    // (m1, a1) = (lower.d, lower.c), (m2, a2) = (upper.d, upper.d - upper.c)
    let a2 = &upper.d - &upper.c;
    &lower.d * a2 + &upper.d * &lower.c - &lower.d * &upper.d
}

/// Lower/upper ladder rungs of a neighborhood, plus the swap flag.
fn to_rungs(nb: &Neighborhood) -> Result<(Rung, Rung, bool)> {
    match nb {
        Neighborhood::Mk2a(n) => {
            let (e, f) = (n.right(), n.left());
            if e.n() < f.n() {
                Ok((
                    Rung::new(e.n().clone(), e.a().clone()),
                    Rung::new(f.n().clone(), f.n() - f.a()),
                    false,
                ))
            } else {
                Ok((
                    Rung::new(f.n().clone(), f.a().clone()),
                    Rung::new(e.n().clone(), e.n() - e.a()),
                    true,
                ))
            }
        }
        Neighborhood::Mk1a(n) => {
            let s = n.chain().len();
            let canonical = if n.bar() == s {
                n.clone()
            } else if n.bar() == 1 {
                n.reversed()
            } else {
                // interior bar: use a degeneration, which shares delta,
                // 1/Delta(1,Omega) and the birational type
                let degs = degenerate_mk1a(n);
                let first = degs
                    .into_iter()
                    .next()
                    .ok_or_else(|| Error::Internal(format!("{n} has no degeneration")))?;
                return to_rungs(&Neighborhood::Mk2a(first));
            };
            let w = canonical.wahl();
            Ok((
                Rung::new(BigInt::one(), BigInt::one()),
                Rung::new(w.n().clone(), w.a().clone()),
                false,
            ))
        }
    }
}

struct Descent {
    pairs: Vec<Rung>,
    stop_value: BigInt,
    delta: BigInt,
}

fn descend(lower: &Rung, upper: &Rung) -> Result<Descent> {
    let delta = ladder_delta(lower, upper);
    if !delta.is_positive() {
        return Err(Error::InvalidInput(format!(
            "delta = {delta} <= 0, not an extremal neighborhood"
        )));
    }
    let mut pairs = vec![lower.clone()];
    let mut prev = upper.clone();
    let mut cur = lower.clone();
    loop {
        let next = Rung::new(&delta * &cur.d - &prev.d, &delta * &cur.c - &prev.c);
        if !next.d.is_positive() {
            return Ok(Descent {
                pairs,
                stop_value: next.d,
                delta,
            });
        }
        if next.d >= cur.d || !next.c.is_positive() {
            return Err(Error::Internal(format!(
                "pair descent failed to decrease at ({}, {})",
                next.d, next.c
            )));
        }
        pairs.push(next.clone());
        prev = cur;
        cur = next;
    }
}

fn zetas_for(delta: &BigInt, count: usize) -> Vec<BigInt> {
    let mut z = vec![BigInt::zero(), BigInt::one()];
    while z.len() < count {
        let next = delta * &z[z.len() - 1] - &z[z.len() - 2];
        z.push(next);
    }
    z.truncate(count);
    z
}

/// Mori's criterion: run the descent and read the type off the first
/// non-positive value (negative: flipping, zero: divisorial).
pub fn classify_neighborhood(nb: &Neighborhood) -> Result<(NbhdType, ZetaTrace)> {
    let (lower, upper, swapped) = to_rungs(nb)?;
    let descent = descend(&lower, &upper)?;
    let kind = if descent.stop_value.is_zero() {
        NbhdType::Divisorial
    } else {
        NbhdType::Flipping
    };
    let trace = ZetaTrace {
        zetas: zetas_for(&descent.delta, descent.pairs.len() + 2),
        pairs: descent
            .pairs
            .iter()
            .map(|r| (r.d.clone(), r.c.clone()))
            .collect(),
        stop_value: descent.stop_value,
        swapped,
    };
    Ok((kind, trace))
}

fn initial_from_rungs(last: &Rung, prev: &Rung) -> Result<Neighborhood> {
    if last.is_smooth() {
        if !last.c.is_one() {
            return Err(Error::Internal("smooth rung with c != 1".into()));
        }
        let wahl = prev.as_smaller()?;
        let bar = wahl.chain().len();
        Ok(Neighborhood::Mk1a(Mk1a::new(wahl, bar)?))
    } else {
        Ok(Neighborhood::Mk2a(Mk2a::new(
            last.as_smaller()?,
            prev.as_larger()?,
        )?))
    }
}

/// Descend to the seed of the Mori sequence containing this neighborhood.
/// Already-initial inputs come back unchanged; an interior-bar k1A yields
/// the initial of its degenerations' family.
pub fn initial_neighborhood(nb: &Neighborhood) -> Result<Neighborhood> {
    let (lower, upper, _) = to_rungs(nb)?;
    let descent = descend(&lower, &upper)?;
    if descent.pairs.len() == 1 {
        return Ok(nb.clone());
    }
    let last = &descent.pairs[descent.pairs.len() - 1];
    let prev = &descent.pairs[descent.pairs.len() - 2];
    initial_from_rungs(last, prev)
}

/// Compute the extremal P-resolution produced by the flip. The input is
/// first reduced to its initial neighborhood; flips are unique, so this
/// loses nothing.
pub fn flip(nb: &Neighborhood) -> Result<EpRes> {
    let (kind, _) = classify_neighborhood(nb)?;
    if kind != NbhdType::Flipping {
        return Err(Error::Contract(format!(
            "{nb} is divisorial; it has no flip"
        )));
    }
    let initial = initial_neighborhood(nb)?;
    let (lower, upper, _) = to_rungs(&initial)?;
    let delta = ladder_delta(&lower, &upper);

    // (m1, a1) = lower as the smaller side, (m2, a2) = upper as the larger
    let m1 = &lower.d;
    let a1 = &lower.c;
    let m2 = &upper.d;

    // f-side: m'_2 = m_1, a'_2 = m_1 - a_1 (smooth when m_1 = 1)
    let m2p = m1.clone();
    let f_side = if m2p.is_one() {
        None
    } else {
        Some(
            WahlData::new(m2p.clone(), m1 - a1)
                .map_err(|e| Error::Internal(format!("flip f-side: {e}")))?,
        )
    };

    // e-side: m'_1 = m_2 - delta m_1, a'_1 = c_up - delta c_low mod m'_1
    let m1p = m2 - &delta * m1;
    if !m1p.is_positive() {
        return Err(Error::Internal("flip with non-positive m'_1".into()));
    }
    let e_side = if m1p.is_one() {
        None
    } else {
        let a1p = (&upper.c - &delta * a1).mod_floor(&m1p);
        if a1p.is_zero() {
            return Err(Error::Internal("flip produced a'_1 = 0".into()));
        }
        Some(
            WahlData::new(m1p.clone(), a1p)
                .map_err(|e| Error::Internal(format!("flip e-side: {e}")))?,
        )
    };

    // solve delta = c m'_1 m'_2 - m'_1 a'_2 - m'_2 a'_1 for the central curve
    let (m1v, a1v) = match &e_side {
        Some(w) => (w.n().clone(), w.a().clone()),
        None => (BigInt::one(), BigInt::one()),
    };
    let (m2v, a2v) = match &f_side {
        Some(w) => (w.n().clone(), w.a().clone()),
        None => (BigInt::one(), BigInt::one()),
    };
    let (c, rem) = (&delta + &m1v * &a2v + &m2v * &a1v).div_rem(&(&m1v * &m2v));
    if !rem.is_zero() {
        return Err(Error::Internal(
            "central self-intersection is not integral".into(),
        ));
    }
    let out = EpRes::new(f_side, c, e_side)?;
    debug_assert!(
        epres_invariants(&out).same_singularity(&initial.invariants()),
        "flip must preserve (delta, Delta, Omega)"
    );
    Ok(out)
}

/// For a divisorial neighborhood: the Wahl singularity (Q in Y) that the
/// exceptional divisor contracts to, namely (delta, a_1) at the initial
/// rung. The central fiber gains K^2 + 1 across the contraction.
pub fn divisorial_data(nb: &Neighborhood) -> Result<WahlData> {
    let (kind, _) = classify_neighborhood(nb)?;
    if kind != NbhdType::Divisorial {
        return Err(Error::Contract(format!(
            "{nb} is flipping; it has no divisorial contraction"
        )));
    }
    let initial = initial_neighborhood(nb)?;
    let (lower, upper, _) = to_rungs(&initial)?;
    let delta = ladder_delta(&lower, &upper);
    if lower.d != delta {
        return Err(Error::Internal(format!(
            "divisorial initial has m_1 = {} != delta = {delta}",
            lower.d
        )));
    }
    WahlData::new(delta, lower.c.clone())
        .map_err(|e| Error::Internal(format!("divisorial target: {e}")))
}

/// Result of running one birational step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MoriOutcome {
    Flip(EpRes),
    Divisorial(WahlData),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoriStep {
    pub outcome: MoriOutcome,
    /// Change of K^2 of the central fiber: 0 for a flip, +1 for a
    /// divisorial contraction.
    pub k2_delta: i64,
}

/// Classify and perform the corresponding birational operation.
pub fn mori_step(nb: &Neighborhood) -> Result<MoriStep> {
    let (kind, _) = classify_neighborhood(nb)?;
    Ok(match kind {
        NbhdType::Flipping => MoriStep {
            outcome: MoriOutcome::Flip(flip(nb)?),
            k2_delta: 0,
        },
        NbhdType::Divisorial => MoriStep {
            outcome: MoriOutcome::Divisorial(divisorial_data(nb)?),
            k2_delta: 1,
        },
    })
}

/// A chain with an optional bar, one printed item of a Mori sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BarredChain {
    pub chain: Chain,
    pub bar: Option<usize>,
}

impl fmt::Display for BarredChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.chain.entries().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
            if Some(i + 1) == self.bar {
                write!(f, "*")?;
            }
        }
        write!(f, "]")
    }
}

/// A Mori sequence: the ladder of rungs (d(i), c(i)) with
/// `d(i-1) + d(i+1) = delta d(i)`, starting at an initial neighborhood.
///
/// Rendered items follow the convention of the worked families: rung k
/// prints as the chain of the Wahl singularity (d(k), d(k) - c(k)), with
/// the bar placed after the prefix that evaluates to
/// d(k-1)/(d(k-1) - c(k-1)). The first rung of a flipping family seeded by
/// a k1A is the smooth pair (1,1) and is not printable.
#[derive(Clone, Debug)]
pub struct MoriSequence {
    pub delta: BigInt,
    pub kind: NbhdType,
    pub invariants: Invariants,
    pub initial: Neighborhood,
    rungs: Vec<Rung>,
}

impl MoriSequence {
    /// d(i) and c(i) values of the ladder.
    pub fn rungs(&self) -> Vec<(BigInt, BigInt)> {
        self.rungs
            .iter()
            .map(|r| (r.d.clone(), r.c.clone()))
            .collect()
    }

    /// Advance the ladder by `extra` more rungs (one new neighborhood
    /// each). No-op for delta = 1 families, which stop after one extra.
    pub fn extend(&mut self, extra: usize) {
        if self.delta.is_one() {
            return;
        }
        for _ in 0..extra {
            let k = self.rungs.len();
            let d = &self.delta * &self.rungs[k - 1].d - &self.rungs[k - 2].d;
            let c = &self.delta * &self.rungs[k - 1].c - &self.rungs[k - 2].c;
            self.rungs.push(Rung::new(d, c));
        }
    }

    /// The printable family items, in ladder order.
    pub fn chain_items(&self) -> Vec<BarredChain> {
        let mut out = Vec::new();
        for (k, rung) in self.rungs.iter().enumerate() {
            if rung.is_smooth() {
                continue;
            }
            let w = rung.as_larger().expect("family rung");
            let chain = w.chain();
            let bar = match k.checked_sub(1).map(|j| &self.rungs[j]) {
                None => None,
                Some(prev) if prev.is_smooth() => Some(1),
                // descending tail of a delta = 1 family: no k1A reading
                Some(prev) if prev.d > rung.d => None,
                Some(prev) => {
                    let prefix = expand(&prev.d, &(&prev.d - &prev.c)).expect("family rung");
                    debug_assert_eq!(
                        chain.entries()[..prefix.len()],
                        prefix.entries()[..],
                        "family prefix convention"
                    );
                    Some(prefix.len() + 1)
                }
            };
            out.push(BarredChain { chain, bar });
        }
        out
    }

    /// The k1A members: printable items carrying a bar.
    pub fn mk1a_items(&self) -> Vec<Mk1a> {
        let singular = self.rungs.iter().filter(|r| !r.is_smooth());
        self.chain_items()
            .iter()
            .zip(singular)
            .filter_map(|(item, rung)| {
                item.bar.map(|bar| {
                    let w = rung.as_larger().expect("family rung");
                    Mk1a::new(w, bar).expect("bar within chain")
                })
            })
            .collect()
    }

    /// The k2A members: consecutive rung pairs with both rungs singular.
    pub fn mk2a_items(&self) -> Vec<Mk2a> {
        let mut out = Vec::new();
        for w in self.rungs.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if a.is_smooth() || b.is_smooth() {
                continue;
            }
            let nb = Mk2a::new(
                a.as_smaller().expect("family rung"),
                b.as_larger().expect("family rung"),
            )
            .expect("family members are neighborhoods");
            out.push(nb);
        }
        out
    }

    /// The family in the notation of the worked examples.
    pub fn render(&self) -> String {
        self.chain_items()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join("-")
    }
}

/// Generate a Mori sequence from an initial neighborhood: the initial
/// itself plus `extra` further neighborhoods up the ladder. For delta = 1
/// the ladder reflects after one extra item, so `extra <= 1` is enforced.
pub fn mori_sequence(initial: &Neighborhood, extra: usize) -> Result<MoriSequence> {
    if let Neighborhood::Mk1a(n) = initial {
        let s = n.chain().len();
        if n.bar() != 1 && n.bar() != s {
            return Err(Error::Contract(format!(
                "{n} is not initial: its bar is interior; descend first"
            )));
        }
    }
    let (lower, upper, _) = to_rungs(initial)?;
    let delta = ladder_delta(&lower, &upper);
    if !delta.is_positive() {
        return Err(Error::InvalidInput("delta <= 0".into()));
    }
    if &delta * &lower.d > upper.d {
        return Err(Error::Contract(format!(
            "{initial} is not initial: the pair descent continues below it"
        )));
    }
    let kind = if &delta * &lower.d == upper.d {
        NbhdType::Divisorial
    } else {
        NbhdType::Flipping
    };
    if delta.is_one() && extra > 1 {
        return Err(Error::Contract(
            "a delta = 1 Mori sequence has exactly one neighborhood beyond the initial".into(),
        ));
    }
    let mut rungs = vec![lower, upper];
    for _ in 0..extra {
        let k = rungs.len();
        let d = &delta * &rungs[k - 1].d - &rungs[k - 2].d;
        let c = &delta * &rungs[k - 1].c - &rungs[k - 2].c;
        if !d.is_positive() {
            break;
        }
        rungs.push(Rung::new(d, c));
    }
    Ok(MoriSequence {
        delta,
        kind,
        invariants: initial.invariants(),
        initial: initial.clone(),
        rungs,
    })
}

/// The divisorial Mori sequence attached to a Wahl singularity (Q in Y) =
/// 1/delta^2(1, delta a - 1): seeded by m_1 = delta, a_1 = a,
/// m_2 = delta^2, a_2 = delta^2 - (delta a - 1).
pub fn divisorial_family(w: &WahlData, extra: usize) -> Result<MoriSequence> {
    let delta = w.n();
    let a = w.a();
    let omega = delta * a - 1;
    let f = WahlData::new(delta.clone(), a.clone())?;
    let e = WahlData::new(delta * delta, delta * delta - omega)
        .map_err(|err| Error::Internal(format!("divisorial seed: {err}")))?;
    let initial = Neighborhood::Mk2a(Mk2a::new(f, e)?);
    let seq = mori_sequence(&initial, extra)?;
    debug_assert_eq!(seq.kind, NbhdType::Divisorial);
    Ok(seq)
}

/// Degenerate a k1A to its (up to two) k2A neighbors: prefix of the chain
/// before the bar on one side, suffix after the bar on the other. Both
/// outputs share delta, 1/Delta(1,Omega) and the birational type with the
/// input. Single-entry chains have no degeneration.
pub fn degenerate_mk1a(nb: &Mk1a) -> Vec<Mk2a> {
    let chain = nb.chain();
    let entries = chain.entries();
    let s = entries.len();
    let i = nb.bar();
    let mut out = Vec::new();
    if i > 1 {
        let prefix = Chain::new(entries[..i - 1].to_vec()).expect("prefix of a reduced chain");
        let (p, q) = evaluate(&prefix).expect("nonempty prefix");
        let f = WahlData::new(p.clone(), &p - &q).expect("Wahl datum from prefix");
        out.push(Mk2a::new(f, nb.wahl().clone()).expect("degeneration is a neighborhood"));
    }
    if i < s {
        let suffix = Chain::new(entries[i..].to_vec())
            .expect("suffix of a reduced chain")
            .reverse();
        let (p, q) = evaluate(&suffix).expect("nonempty suffix");
        let e = WahlData::new(p.clone(), &p - &q).expect("Wahl datum from suffix");
        out.push(Mk2a::new(nb.wahl().reversed(), e).expect("degeneration is a neighborhood"));
    }
    out
}

/// The end-bar flip in closed form: for `[e_1, ..., e_s*]` with i the last
/// index carrying e_i >= 3, the P-resolution is `e_1 - [e_2, ..., e_i - 1]`
/// (for i = 1 this degenerates to the bare curve e_1 - 1). Agrees with
/// [`flip`], which it shortcuts.
pub fn special_flip(nb: &Mk1a) -> Result<EpRes> {
    let chain = nb.chain();
    let s = chain.len();
    if nb.bar() != s {
        return Err(Error::Contract(format!(
            "the shortcut applies only when the bar sits on the last component, got {nb}"
        )));
    }
    let entries = chain.entries();
    let two = big(2);
    let i = entries
        .iter()
        .rposition(|e| e > &two)
        .ok_or_else(|| Error::Internal("Wahl chain with all entries 2".into()))?;
    let mut head = entries[..=i].to_vec();
    head[i] -= 1;
    let c = head[0].clone();
    let tail = &head[1..];
    let e_side = if tail.is_empty() {
        None
    } else {
        let (p, q) = evaluate(&Chain::new(tail.to_vec())?)?;
        Some(WahlData::from_chain_value(&p, &q).ok_or_else(|| {
            Error::Internal(format!("[e_2..e_i - 1] of {nb} is not a Wahl chain"))
        })?)
    };
    EpRes::new(None, c, e_side)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hjcf::Cqs;
    use crate::neighborhoods::{mk1a_invariants, mk2a_invariants};

    fn mk2a(e: (i64, i64), f: (i64, i64)) -> Neighborhood {
        Neighborhood::Mk2a(Mk2a::from_ints(e, f))
    }

    fn mk1a(m: i64, a: i64, bar: usize) -> Neighborhood {
        Neighborhood::Mk1a(Mk1a::from_ints(m, a, bar))
    }

    #[test]
    fn classify_example_2_1() {
        let nb = mk2a((14, 5), (37, 24));
        let (kind, trace) = classify_neighborhood(&nb).unwrap();
        assert_eq!(kind, NbhdType::Flipping);
        assert_eq!(
            trace.pairs,
            vec![(big(14), big(5)), (big(5), big(2)), (big(1), big(1))]
        );
        assert_eq!(trace.stop_value, big(-2));
        assert_eq!(trace.zetas, vec![big(0), big(1), big(3), big(8), big(21)]);
    }

    #[test]
    fn classify_divisorial_and_delta_one() {
        let nb = mk2a((2, 1), (4, 3));
        let (kind, trace) = classify_neighborhood(&nb).unwrap();
        assert_eq!(kind, NbhdType::Divisorial);
        assert_eq!(trace.stop_value, big(0));

        let nb = mk2a((2, 1), (7, 4));
        let (kind, trace) = classify_neighborhood(&nb).unwrap();
        assert_eq!(kind, NbhdType::Flipping);
        assert_eq!(trace.stop_value, big(-5));
    }

    #[test]
    fn initial_example_2_1() {
        let nb = mk2a((14, 5), (37, 24));
        let initial = initial_neighborhood(&nb).unwrap();
        match &initial {
            Neighborhood::Mk1a(n) => {
                assert_eq!(n.wahl(), &WahlData::from_ints(5, 2));
                assert_eq!(n.bar(), 3);
                assert!(n.wahl().cqs().class_eq(&Cqs::from_ints(25, 9)));
            }
            _ => panic!("expected a k1A initial"),
        }
        // invariants are transported
        assert!(initial.invariants().same_singularity(&nb.invariants()));
    }

    #[test]
    fn initial_fixed_points() {
        let nb = mk2a((2, 1), (7, 4));
        assert_eq!(initial_neighborhood(&nb).unwrap(), nb);
        let nb = mk2a((2, 1), (4, 3));
        assert_eq!(initial_neighborhood(&nb).unwrap(), nb);
    }

    #[test]
    fn flip_section_5() {
        let nb = mk2a((2, 1), (7, 4));
        let out = flip(&nb).unwrap();
        assert_eq!(out.left(), Some(&WahlData::from_ints(2, 1)));
        assert_eq!(out.right(), Some(&WahlData::from_ints(5, 2)));
        assert_eq!(out.c(), &big(1));
        let inv = epres_invariants(&out);
        assert_eq!(
            (inv.delta, inv.cap_delta, inv.omega),
            (big(1), big(39), big(16))
        );
    }

    #[test]
    fn flip_of_mk1a_and_commutation() {
        // [3,5,2*] -> 3-[4]
        let out = flip(&mk1a(5, 2, 3)).unwrap();
        assert_eq!(out.left(), None);
        assert_eq!(out.c(), &big(3));
        assert_eq!(out.right(), Some(&WahlData::from_ints(2, 1)));

        // flip(n) = flip(initial(n))
        let nb = mk2a((14, 5), (37, 24));
        let via_initial = flip(&initial_neighborhood(&nb).unwrap()).unwrap();
        let direct = flip(&nb).unwrap();
        assert!(direct.class_eq(&via_initial));
        assert!(direct.class_eq(&out));
    }

    #[test]
    fn flip_rejects_divisorial() {
        assert!(matches!(
            flip(&mk2a((2, 1), (4, 3))),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn divisorial_example_2_2() {
        let nb = mk2a((2, 1), (4, 3));
        let w = divisorial_data(&nb).unwrap();
        assert_eq!(w, WahlData::from_ints(2, 1));
        assert_eq!(w.cqs(), Cqs::from_ints(4, 1));
        // Omega = delta a_1 - 1 and a_2 = delta^2 - Omega
        let inv = nb.invariants();
        assert_eq!(inv.omega, big(2) * big(1) - 1);
        assert!(matches!(
            divisorial_data(&mk2a((2, 1), (7, 4))),
            Err(Error::Contract(_))
        ));
        // k1A member of the family contracts to the same point
        let w = divisorial_data(&mk1a(4, 3, 2)).unwrap();
        assert_eq!(w, WahlData::from_ints(2, 1));
    }

    #[test]
    fn divisorial_family_example_2_2() {
        let seq = divisorial_family(&WahlData::from_ints(2, 1), 2).unwrap();
        assert_eq!(seq.render(), "[4]-[2,2*,6]-[2,2,2,2*,8]-[2,2,2,2,2,2*,10]");
        assert_eq!(seq.kind, NbhdType::Divisorial);
        for nb in seq.mk2a_items() {
            let (kind, _) = classify_neighborhood(&Neighborhood::Mk2a(nb)).unwrap();
            assert_eq!(kind, NbhdType::Divisorial);
        }
        for nb in seq.mk1a_items() {
            assert_eq!(
                divisorial_data(&Neighborhood::Mk1a(nb)).unwrap(),
                WahlData::from_ints(2, 1)
            );
        }
        // m-values follow the d-recursion with delta = 2
        let ds: Vec<BigInt> = seq.rungs().iter().map(|(d, _)| d.clone()).collect();
        assert_eq!(ds, vec![big(2), big(4), big(6), big(8)]);
    }

    #[test]
    fn divisorial_family_3_1() {
        let seq = divisorial_family(&WahlData::from_ints(3, 1), 1).unwrap();
        assert_eq!(seq.delta, big(3));
        assert_eq!(seq.invariants.cap_delta, big(9));
        assert!(seq.invariants.cqs().class_eq(&Cqs::from_ints(9, 2)));
        for nb in seq.mk2a_items() {
            let nb = Neighborhood::Mk2a(nb);
            let (kind, _) = classify_neighborhood(&nb).unwrap();
            assert_eq!(kind, NbhdType::Divisorial);
            assert!(nb.invariants().same_singularity(&seq.invariants));
        }
    }

    #[test]
    fn flipping_families_example_2_3() {
        // first family: seeded by the k1A [2*,5,3]
        let seq = mori_sequence(&mk1a(5, 3, 1), 2).unwrap();
        assert_eq!(seq.render(), "[2*,5,3]-[2,3,2*,2,7,3]-[2,3,2,2,2,2*,5,7,3]");
        // second family: seeded by the k2A [4]-[2,2,5,4]
        let seed = mk2a((7, 5), (2, 1));
        let seq2 = mori_sequence(&seed, 2).unwrap();
        assert_eq!(
            seq2.render(),
            "[4]-[2,2*,5,4]-[2,2,3,2*,2,7,4]-[2,2,3,2,2,2,2*,5,7,4]"
        );
        // every member flips to [4]-3 up to orientation
        let expected = EpRes::new(Some(WahlData::from_ints(2, 1)), big(3), None).unwrap();
        for item in seq.mk1a_items().into_iter().chain(seq2.mk1a_items()) {
            assert!(flip(&Neighborhood::Mk1a(item)).unwrap().class_eq(&expected));
        }
        for item in seq.mk2a_items().into_iter().chain(seq2.mk2a_items()) {
            assert!(flip(&Neighborhood::Mk2a(item)).unwrap().class_eq(&expected));
        }
    }

    #[test]
    fn delta_one_sequence_reflects() {
        let initial = mk2a((2, 1), (7, 4));
        let seq = mori_sequence(&initial, 1).unwrap();
        let items = seq.mk2a_items();
        assert_eq!(items.len(), 2);
        // the one extra neighborhood is (5,3),(7,3)
        let extra = &items[1];
        assert_eq!(extra.right(), &WahlData::from_ints(5, 3));
        assert_eq!(extra.left(), &WahlData::from_ints(7, 3));
        assert!(Neighborhood::Mk2a(extra.clone())
            .invariants()
            .same_singularity(&seq.invariants));
        // the reflected tail prints without a bar
        assert_eq!(seq.render(), "[4]-[2,6*,2,3]-[2,5,3]");
        assert!(matches!(
            mori_sequence(&initial, 2),
            Err(Error::Contract(_))
        ));
    }

    /// An interior-bar k1A has two degenerations; both routes must agree
    /// on the birational type, the initial neighborhood and the flip.
    #[test]
    fn degeneration_routes_agree() {
        for n in 2..=20i64 {
            for a in 1..n {
                if !big(n).gcd(&big(a)).is_one() {
                    continue;
                }
                let w = WahlData::from_ints(n, a);
                for bar in 2..w.chain().len() {
                    let Ok(nb) = Mk1a::new(w.clone(), bar) else {
                        continue;
                    };
                    let degs = degenerate_mk1a(&nb);
                    assert_eq!(degs.len(), 2, "interior bar on {nb}");
                    let left = Neighborhood::Mk2a(degs[0].clone());
                    let right = Neighborhood::Mk2a(degs[1].clone());
                    let (k1, _) = classify_neighborhood(&left).unwrap();
                    let (k2, _) = classify_neighborhood(&right).unwrap();
                    assert_eq!(k1, k2, "type split on {nb}");
                    // the right route sees the configuration mirrored, so
                    // the initials agree up to mirror when delta >= 2; a
                    // delta = 1 ladder is reflected and the two routes
                    // legitimately land on its two ends
                    if mk1a_invariants(&nb).delta > BigInt::one() {
                        assert!(
                            initial_neighborhood(&left)
                                .unwrap()
                                .class_eq(&initial_neighborhood(&right).unwrap()),
                            "different initials on {nb}"
                        );
                    }
                    if k1 == NbhdType::Flipping {
                        assert!(
                            flip(&left).unwrap().class_eq(&flip(&right).unwrap()),
                            "different flips on {nb}"
                        );
                    } else {
                        assert_eq!(
                            divisorial_data(&left).unwrap(),
                            divisorial_data(&right).unwrap(),
                            "different contraction targets on {nb}"
                        );
                    }
                }
            }
        }
    }

    /// Mori's dichotomy over every k2A with both indices up to 200: the
    /// descent always terminates at zero or below. The candidate filter
    /// runs in machine integers; the 73746 survivors run the real thing.
    #[test]
    fn dichotomy_sweep_200() {
        let mut wahl = Vec::new();
        for n in 2..=200i64 {
            for a in 1..n {
                if big(n).gcd(&big(a)).is_one() {
                    wahl.push((n, a));
                }
            }
        }
        let mut checked = 0usize;
        for &(m1, a1) in &wahl {
            for &(m2, a2) in &wahl {
                if m1 == m2 {
                    continue;
                }
                let delta = m1 * a2 + m2 * a1 - m1 * m2;
                if delta <= 0 {
                    continue;
                }
                if m1 * m1 + m2 * m2 - delta * m1 * m2 < 2 {
                    continue;
                }
                let nb = Mk2a::new(WahlData::from_ints(m2, a2), WahlData::from_ints(m1, a1))
                    .expect("prefilter matches the constructor");
                let (_, trace) = classify_neighborhood(&Neighborhood::Mk2a(nb)).unwrap();
                assert!(trace.stop_value <= BigInt::ZERO);
                checked += 1;
            }
        }
        assert_eq!(checked, 73746);
    }

    #[test]
    fn mori_sequence_rejects_non_initial() {
        assert!(matches!(
            mori_sequence(&mk2a((14, 5), (37, 24)), 1),
            Err(Error::Contract(_))
        ));
        assert!(matches!(
            mori_sequence(&mk1a(4, 3, 2), 1),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn degenerations_example() {
        // [3,5,2*]: only the left degeneration exists, with (m_2, a_2) = (14, 9)
        let degs = degenerate_mk1a(&Mk1a::from_ints(5, 2, 3));
        assert_eq!(degs.len(), 1);
        assert_eq!(degs[0].left(), &WahlData::from_ints(14, 9));
        assert_eq!(degs[0].right(), &WahlData::from_ints(5, 2));
        // delta, Delta, Omega transport exactly; K.C and C.C are
        // normalized by the ambient surface and differ
        let src = mk1a_invariants(&Mk1a::from_ints(5, 2, 3));
        let got = mk2a_invariants(&degs[0]);
        assert_eq!(
            (got.delta, got.cap_delta, got.omega),
            (src.delta, src.cap_delta, src.omega)
        );

        // single-entry chains degenerate to nothing
        assert!(degenerate_mk1a(&Mk1a::from_ints(2, 1, 1)).is_empty());

        // interior bar: both sides
        let degs = degenerate_mk1a(&Mk1a::from_ints(4, 3, 2));
        assert_eq!(degs.len(), 2);
        let src = mk1a_invariants(&Mk1a::from_ints(4, 3, 2));
        for d in &degs {
            let got = mk2a_invariants(d);
            assert_eq!(
                (got.delta, got.cap_delta, got.omega),
                (src.delta.clone(), src.cap_delta.clone(), src.omega.clone())
            );
        }
    }

    #[test]
    fn special_flip_examples() {
        // [3,5,2*] -> 3-[4]
        let out = special_flip(&Mk1a::from_ints(5, 2, 3)).unwrap();
        assert_eq!(out.to_string(), "3-[4]");
        let inv = epres_invariants(&out);
        assert_eq!(
            (inv.delta.clone(), inv.cap_delta.clone()),
            (big(3), big(11))
        );
        assert!(inv.cqs().class_eq(&Cqs::from_ints(11, 4)));

        // [4*]: i = 1 = s, bare curve
        let out = special_flip(&Mk1a::from_ints(2, 1, 1)).unwrap();
        assert_eq!(out.to_string(), "3");
        assert_eq!(flip(&mk1a(2, 1, 1)).unwrap(), out);

        // [2,2,6*] -> 2-[2,5]
        let out = special_flip(&Mk1a::from_ints(4, 3, 3)).unwrap();
        assert_eq!(out.to_string(), "2-[2,5]");
        assert_eq!(flip(&mk1a(4, 3, 3)).unwrap(), out);

        assert!(matches!(
            special_flip(&Mk1a::from_ints(5, 2, 1)),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn special_flip_agrees_with_flip() {
        for n in 2..=20i64 {
            for a in 1..n {
                if !big(n).gcd(&big(a)).is_one() {
                    continue;
                }
                let w = WahlData::from_ints(n, a);
                let bar = w.chain().len();
                let nb = Mk1a::new(w.clone(), bar).unwrap();
                let fast = special_flip(&nb).unwrap();
                let slow = flip(&Neighborhood::Mk1a(nb.clone())).unwrap();
                assert_eq!(fast, slow, "disagree on {nb}");
                // delta = n - a, Delta = na + 1, Omega ~ a^2
                let inv = epres_invariants(&fast);
                assert_eq!(inv.delta, big(n - a));
                assert_eq!(inv.cap_delta, big(n * a + 1));
                assert!(inv
                    .cqs()
                    .class_eq(&Cqs::from_ints(n * a + 1, (a * a) % (n * a + 1))));
            }
        }
    }
}
