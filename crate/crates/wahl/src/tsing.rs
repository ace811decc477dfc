//! T-singularities, Wahl singularities, and T-blow-ups of elliptic fibers.
//!
//! A T-singularity is a quotient singularity admitting a Q-Gorenstein
//! smoothing: either du Val or cyclic of the form 1/(d n^2)(1, dna-1) with
//! gcd(n,a) = 1. The d = 1 members are the Wahl singularities; their
//! smoothings have Milnor number zero and they are the only singularities
//! allowed on an extremal neighborhood.
//!
//! Every non-du-Val T-chain can also be manufactured from an I_d elliptic
//! fiber by blowing up a node and then nodes on the successive (-1)-curves;
//! the multiplicities of the pull-back of the fiber determine the pair
//! (n, a) and all discrepancies. [`t_blowup`] simulates that construction
//! combinatorially and [`kodaira_case`] computes the coefficient of the
//! canonical class of the contracted surface.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hjcf::{big, discrepancies, evaluate, sequences, Chain, Cqs};

/// Parameters (n, a) of the Wahl singularity 1/n^2(1, na-1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WahlData {
    n: BigInt,
    a: BigInt,
}

impl WahlData {
    pub fn new(n: BigInt, a: BigInt) -> Result<WahlData> {
        if n < big(2) || a <= BigInt::zero() || a >= n || !n.gcd(&a).is_one() {
            return Err(Error::InvalidInput(format!(
                "({n},{a}) is not valid Wahl data"
            )));
        }
        Ok(WahlData { n, a })
    }

    pub fn from_ints(n: i64, a: i64) -> WahlData {
        WahlData::new(big(n), big(a)).expect("valid Wahl data")
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    /// The singularity 1/n^2(1, na-1) in its declared orientation.
    pub fn cqs(&self) -> Cqs {
        Cqs::new(&self.n * &self.n, &self.n * &self.a - 1).expect("Wahl data is valid")
    }

    /// Exceptional chain [e_1, ..., e_s] of the minimal resolution.
    pub fn chain(&self) -> Chain {
        self.cqs().chain()
    }

    /// The same singularity with the chain read backwards: (n, n-a).
    pub fn reversed(&self) -> WahlData {
        WahlData {
            n: self.n.clone(),
            a: &self.n - &self.a,
        }
    }

    /// Recover Wahl data from the value of its chain, if it is one.
    pub fn from_chain_value(p: &BigInt, q: &BigInt) -> Option<WahlData> {
        let n = p.sqrt();
        if &(&n * &n) != p {
            return None;
        }
        let (a, rem) = (q + 1u32).div_rem(&n);
        if !rem.is_zero() {
            return None;
        }
        WahlData::new(n, a).ok()
    }
}

impl fmt::Display for WahlData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.a)
    }
}

/// Parameters (d, n, a) of the T-singularity 1/(d n^2)(1, dna-1).
///
/// `n = a = 1` is allowed as the du Val edge of the family (the
/// singularity is then A_{d-1}); for n >= 2 the data names a genuine
/// non-du-Val T-singularity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TData {
    d: BigInt,
    n: BigInt,
    a: BigInt,
}

impl TData {
    pub fn new(d: BigInt, n: BigInt, a: BigInt) -> Result<TData> {
        let valid = d >= BigInt::one()
            && ((n.is_one() && a.is_one()) || (n >= big(2) && a > BigInt::zero() && a < n))
            && n.gcd(&a).is_one()
            && &d * &n * &n >= big(2);
        if !valid {
            return Err(Error::InvalidInput(format!(
                "({d},{n},{a}) is not valid T-singularity data"
            )));
        }
        Ok(TData { d, n, a })
    }

    pub fn from_ints(d: i64, n: i64, a: i64) -> TData {
        TData::new(big(d), big(n), big(a)).expect("valid T data")
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn n(&self) -> &BigInt {
        &self.n
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn cqs(&self) -> Cqs {
        Cqs::new(&self.d * &self.n * &self.n, &self.d * &self.n * &self.a - 1)
            .expect("T data is valid")
    }

    pub fn chain(&self) -> Chain {
        self.cqs().chain()
    }
}

impl fmt::Display for TData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({},{},{})", self.d, self.n, self.a)
    }
}

/// Outcome of [`classify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    /// All chain entries are 2: the du Val singularity A_index.
    DuValA { index: BigInt },
    /// Delta = n^2 with Omega in the class of na-1.
    Wahl(WahlData),
    /// Delta = d n^2 with d >= 2, n >= 2, Omega in the class of dna-1.
    T(TData),
    /// A cyclic quotient singularity with no Q-Gorenstein smoothing.
    PlainCqs,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::DuValA { index } => write!(f, "A_{index}"),
            Classification::Wahl(w) => write!(f, "Wahl({},{})", w.n, w.a),
            Classification::T(t) => write!(f, "{t}"),
            Classification::PlainCqs => write!(f, "plain cyclic quotient"),
        }
    }
}

/// All ways of writing the singularity as 1/(d n^2)(1, dna-1) with n >= 2,
/// ordered by decreasing n, the stored orientation of Omega before its
/// dual. A d = 1 entry means the singularity is Wahl.
pub fn t_decompositions(cqs: &Cqs) -> Vec<TData> {
    let delta = cqs.delta();
    let omegas = [cqs.omega().clone(), cqs.omega_inverse()];
    let mut out = Vec::new();
    let mut n = delta.sqrt();
    while n >= big(2) {
        let nn = &n * &n;
        if delta.mod_floor(&nn).is_zero() {
            let d = delta / &nn;
            for om in &omegas {
                let (a, rem) = (om + 1u32).div_rem(&(&d * &n));
                if rem.is_zero() && a.is_positive() && a < n && n.gcd(&a).is_one() {
                    let t = TData::new(d.clone(), n.clone(), a).expect("checked");
                    if !out.contains(&t) {
                        out.push(t);
                    }
                }
            }
        }
        n -= 1;
    }
    out
}

/// Decide whether the singularity is du Val of type A, Wahl, a non-Wahl
/// T-singularity, or neither. When several T-decompositions exist the one
/// with maximal n wins; [`t_decompositions`] lists them all.
pub fn classify(cqs: &Cqs) -> Classification {
    if cqs.chain().entries().iter().all(|b| b == &big(2)) {
        return Classification::DuValA {
            index: cqs.delta() - 1,
        };
    }
    let decs = t_decompositions(cqs);
    match decs.into_iter().next() {
        Some(t) if t.d().is_one() => {
            Classification::Wahl(WahlData::new(t.n().clone(), t.a().clone()).expect("valid"))
        }
        Some(t) => Classification::T(t),
        None => Classification::PlainCqs,
    }
}

/// One component of a degenerating fiber: self-intersection (<= -1 after
/// the first blow-up) and its multiplicity in the pull-back of the fiber.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberComponent {
    pub self_int: BigInt,
    pub mult: BigInt,
}

/// Combinatorial state of the total transform of an I_d fiber.
///
/// Components are stored in cyclic order: consecutive entries (and the
/// last/first pair) intersect. A cycle of length 2 means the two curves
/// meet twice; the initial I_1 state is a single component of
/// self-intersection 0 carrying a node, flagged by `self_node`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberState {
    pub components: Vec<FiberComponent>,
    /// Index of the current (-1)-curve, once a blow-up has happened.
    pub marker: Option<usize>,
    pub self_node: bool,
}

impl FiberState {
    /// Initial state of an I_d fiber: d components of self-intersection -2
    /// and multiplicity 1 for d >= 2, the nodal cubic for d = 1.
    pub fn initial(d: u64) -> Result<FiberState> {
        if d == 0 {
            return Err(Error::InvalidInput("fiber type I_0 is not singular".into()));
        }
        if d == 1 {
            return Ok(FiberState {
                components: vec![FiberComponent {
                    self_int: BigInt::zero(),
                    mult: BigInt::one(),
                }],
                marker: None,
                self_node: true,
            });
        }
        Ok(FiberState {
            components: (0..d)
                .map(|_| FiberComponent {
                    self_int: big(-2),
                    mult: BigInt::one(),
                })
                .collect(),
            marker: None,
            self_node: false,
        })
    }

    /// Every component of a fiber pull-back satisfies
    /// `self_int * mult = -(sum of neighbor multiplicities)`.
    pub fn fiber_identity_holds(&self) -> bool {
        let len = self.components.len();
        if len == 1 {
            return true; // initial nodal curve
        }
        (0..len).all(|i| {
            let c = &self.components[i];
            let nb =
                &self.components[(i + len - 1) % len].mult + &self.components[(i + 1) % len].mult;
            &c.self_int * &c.mult == -nb
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "components": self.components.iter().map(|c| serde_json::json!({
                "self_int": c.self_int.to_string(),
                "mult": c.mult.to_string(),
            })).collect::<Vec<_>>(),
            "marker": self.marker,
            "self_node": self.self_node,
        })
    }
}

/// Which node of the current (-1)-curve to blow up next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A T-blow-up recipe: the node of I_d to start at, then a left/right
/// choice on each successive (-1)-curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupScript {
    pub node: u64,
    pub steps: Vec<Side>,
}

impl BlowupScript {
    /// Parse scripts like `"0"`, `"1LRL"`: initial node index, then L/R.
    pub fn parse(text: &str) -> Result<BlowupScript> {
        let digits: String = text.chars().take_while(|c| c.is_ascii_digit()).collect();
        if digits.is_empty() {
            return Err(Error::InvalidInput(format!(
                "blow-up script must start with a node index: {text:?}"
            )));
        }
        let node: u64 = digits
            .parse()
            .map_err(|_| Error::InvalidInput(format!("node index out of range: {digits}")))?;
        let mut steps = Vec::new();
        for c in text[digits.len()..].chars() {
            match c {
                'L' | 'l' => steps.push(Side::Left),
                'R' | 'r' => steps.push(Side::Right),
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "blow-up script steps must be L or R, got {c:?}"
                    )))
                }
            }
        }
        Ok(BlowupScript { node, steps })
    }
}

/// Result of a T-blow-up: the T-chain (final (-1)-curve deleted), the
/// multiplicity sequence nu (chain components first, the (-1)-curve last),
/// and the pair (n, a) with n the final multiplicity and a = n - nu_s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TBlowup {
    pub d: u64,
    pub chain: Chain,
    pub nu: Vec<BigInt>,
    pub n: BigInt,
    pub a: BigInt,
    pub state: FiberState,
}

impl TBlowup {
    /// The data (d, n, a) this blow-up realizes.
    pub fn t_data(&self) -> TData {
        TData::new(big(self.d as i64), self.n.clone(), self.a.clone()).expect("valid by Lemma 4.1")
    }
}

/// Simulate a T-blow-up of I_d. The first blow-up happens at the chosen
/// node of the fiber; each later one at the left or right node of the
/// current (-1)-curve. At least one blow-up is required.
pub fn t_blowup(d: u64, script: &BlowupScript) -> Result<TBlowup> {
    let mut state = FiberState::initial(d)?;
    let node = script.node as usize;

    // first blow-up, at a node of I_d itself
    let marker = if state.self_node {
        if node != 0 {
            return Err(Error::InvalidInput(format!(
                "I_1 has a single node, index {node} is invalid"
            )));
        }
        // ordinary double point: the exceptional curve meets the strict
        // transform twice and carries multiplicity 2
        state.components[0].self_int = big(-4);
        state.components.push(FiberComponent {
            self_int: -BigInt::one(),
            mult: big(2),
        });
        state.self_node = false;
        1
    } else {
        let len = state.components.len();
        if node >= len {
            return Err(Error::InvalidInput(format!(
                "I_{d} has {len} nodes, index {node} is invalid"
            )));
        }
        let next = (node + 1) % len;
        state.components[node].self_int -= 1;
        state.components[next].self_int -= 1;
        let mult = &state.components[node].mult + &state.components[next].mult;
        state.components.insert(
            node + 1,
            FiberComponent {
                self_int: -BigInt::one(),
                mult,
            },
        );
        node + 1
    };
    let mut marker = marker;
    debug_assert!(state.fiber_identity_holds());

    for side in &script.steps {
        let len = state.components.len();
        match side {
            Side::Left => {
                let nb = (marker + len - 1) % len;
                let mult = &state.components[nb].mult + &state.components[marker].mult;
                state.components[nb].self_int -= 1;
                state.components[marker].self_int -= 1;
                state.components.insert(
                    marker,
                    FiberComponent {
                        self_int: -BigInt::one(),
                        mult,
                    },
                );
                // the new curve now sits at the old marker index
            }
            Side::Right => {
                let nb = (marker + 1) % len;
                let mult = &state.components[marker].mult + &state.components[nb].mult;
                state.components[nb].self_int -= 1;
                state.components[marker].self_int -= 1;
                state.components.insert(
                    marker + 1,
                    FiberComponent {
                        self_int: -BigInt::one(),
                        mult,
                    },
                );
                marker += 1;
            }
        }
        debug_assert!(state.fiber_identity_holds());
    }
    state.marker = Some(marker);

    // delete the final (-1)-curve; what remains is linear
    let len = state.components.len();
    let idxs: Vec<usize> = (1..len).map(|k| (marker + k) % len).collect();
    let chain = Chain::new(
        idxs.iter()
            .map(|&i| -state.components[i].self_int.clone())
            .collect(),
    )?;
    let mut nu: Vec<BigInt> = idxs
        .iter()
        .map(|&i| state.components[i].mult.clone())
        .collect();
    let n = state.components[marker].mult.clone();
    let a = &n - nu.last().expect("at least one chain component");
    nu.push(n.clone());

    Ok(TBlowup {
        d,
        chain,
        nu,
        n,
        a,
        state,
    })
}

/// Kodaira dimension of the Q-Gorenstein smoothing of the surface obtained
/// by contracting the T-configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KodairaCase {
    /// One contracted fiber: rational surfaces.
    MinusInfinity,
    /// Two fibers, one blow-up each: Enriques surfaces.
    Zero,
    /// Two fibers, at least one blown up twice: properly elliptic.
    One,
}

impl fmt::Display for KodairaCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KodairaCase::MinusInfinity => write!(f, "-infinity"),
            KodairaCase::Zero => write!(f, "0"),
            KodairaCase::One => write!(f, "1"),
        }
    }
}

/// The coefficient of sigma^* C in the pull-back of the canonical class:
/// -1/n_1 for a single contracted fiber, 1 - 1/n_1 - 1/n_2 for two.
pub fn kodaira_case(fibers: &[&TBlowup]) -> Result<(KodairaCase, BigRational)> {
    match fibers {
        [f] => Ok((
            KodairaCase::MinusInfinity,
            -BigRational::new(BigInt::one(), f.n.clone()),
        )),
        [f1, f2] => {
            let coeff = BigRational::one()
                - BigRational::new(BigInt::one(), f1.n.clone())
                - BigRational::new(BigInt::one(), f2.n.clone());
            if coeff.is_zero() {
                Ok((KodairaCase::Zero, coeff))
            } else {
                Ok((KodairaCase::One, coeff))
            }
        }
        _ => Err(Error::InvalidInput(format!(
            "expected one or two fibers, got {}",
            fibers.len()
        ))),
    }
}

/// For two contracted fibers of Kodaira dimension one: the smoothing is a
/// Dolgachev surface of type (n_1, n_2) exactly when the multiplicities
/// are coprime.
pub fn dolgachev_type(f1: &TBlowup, f2: &TBlowup) -> Option<(BigInt, BigInt)> {
    if f1.n.gcd(&f2.n).is_one() {
        Some((f1.n.clone(), f2.n.clone()))
    } else {
        None
    }
}

/// Check Lemma-style numerics of one blow-up result against the chain
/// arithmetic: discrepancies -1 + nu_i/n and nu_j = a alpha_j - n gamma_j.
/// Used by tests and exposed for the diagnostics output.
pub fn blowup_consistent(t: &TBlowup) -> Result<()> {
    let (p, q) = evaluate(&t.chain)?;
    let td = t.t_data();
    let expected_q = (td.d() * &t.n * &t.a - BigInt::one()).mod_floor(&p);
    if p != td.d() * &t.n * &t.n || q != expected_q {
        return Err(Error::Internal(format!(
            "chain {} does not evaluate to the data {}",
            t.chain, td
        )));
    }
    let seq = sequences(&p, &q)?;
    for (j, nu) in t.nu.iter().enumerate() {
        let expected = &t.a * &seq.alpha[j + 1] - &t.n * &seq.gamma[j + 1];
        if nu != &expected {
            return Err(Error::Internal(format!(
                "multiplicity identity fails at {} in {}",
                j + 1,
                t.chain
            )));
        }
    }
    let discs = discrepancies(&p, &q)?;
    for (i, disc) in discs.iter().enumerate() {
        let expected = BigRational::new(&t.nu[i] - &t.n, t.n.clone());
        if disc != &expected {
            return Err(Error::Internal(format!(
                "discrepancy mismatch at {} in {}",
                i + 1,
                t.chain
            )));
        }
    }
    Ok(())
}
