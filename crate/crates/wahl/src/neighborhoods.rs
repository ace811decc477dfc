//! Extremal neighborhoods of types k1A and k2A, extremal P-resolutions,
//! and their numerical invariants.
//!
//! A k1A neighborhood is a Wahl chain [e_1, ..., e_s] together with the
//! index of the component met by the flipping (-1)-curve, written
//! `[e_1, ..., e_i*, ..., e_s]`. A k2A neighborhood is a pair of Wahl
//! chains joined by a (-1)-curve, written `[f_r, ..., f_1]-[e_1, ..., e_s]`
//! so that the (-1)-curve meets the two dash-adjacent components. An
//! extremal P-resolution replaces the (-1)-curve by a central curve of
//! self-intersection -c: `[f_r, ..., f_1]-c-[e_1, ..., e_s]`.
//!
//! Each descriptor determines a cyclic quotient singularity 1/Delta(1,Omega)
//! at the contraction target and an integer delta with
//! K.C = -delta/(m_1 m_2) (positive for P-resolutions). The closed forms
//! are implemented here, next to an independent oracle that recovers
//! (Delta, Omega) by composing, blowing down, and evaluating the actual
//! chains; the two routes are compared exhaustively in the tests.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::hjcf::{contract_ones, evaluate, sequences, Chain, Cqs};
use crate::tsing::WahlData;

/// k1A data: a Wahl singularity (m, a) and the barred index i in 1..=s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mk1a {
    wahl: WahlData,
    bar: usize,
}

impl Mk1a {
    pub fn new(wahl: WahlData, bar: usize) -> Result<Mk1a> {
        let s = wahl.chain().len();
        if bar == 0 || bar > s {
            return Err(Error::InvalidInput(format!(
                "bar index {bar} out of range 1..={s} for chain {}",
                wahl.chain()
            )));
        }
        // not every bar position yields Delta > 0; reject the rest
        mk1a_raw_invariants(&wahl, bar)?;
        Ok(Mk1a { wahl, bar })
    }

    pub fn from_ints(m: i64, a: i64, bar: usize) -> Mk1a {
        Mk1a::new(WahlData::from_ints(m, a), bar).expect("valid k1A data")
    }

    pub fn wahl(&self) -> &WahlData {
        &self.wahl
    }

    pub fn bar(&self) -> usize {
        self.bar
    }

    pub fn chain(&self) -> Chain {
        self.wahl.chain()
    }

    /// The same neighborhood with the chain read backwards.
    pub fn reversed(&self) -> Mk1a {
        let s = self.chain().len();
        Mk1a {
            wahl: self.wahl.reversed(),
            bar: s + 1 - self.bar,
        }
    }

    /// Equality up to reading the chain backwards.
    pub fn class_eq(&self, other: &Mk1a) -> bool {
        self == other || self == &other.reversed()
    }
}

impl fmt::Display for Mk1a {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.chain().entries().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
            if i + 1 == self.bar {
                write!(f, "*")?;
            }
        }
        write!(f, "]")
    }
}

/// k2A data: the Wahl singularity printed left of the dash (resolved by
/// the F-curves) and the one printed right (resolved by the E-curves).
/// The (-1)-curve meets F_1 and E_1, so the left chain is printed
/// reversed. Swapping sides gives the mirror value: same singularity
/// class, dual stored Omega.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mk2a {
    left: WahlData,
    right: WahlData,
}

impl Mk2a {
    pub fn new(left: WahlData, right: WahlData) -> Result<Mk2a> {
        if left.n() == right.n() {
            return Err(Error::InvalidInput(format!(
                "the two Wahl indices of a k2A must differ, got {} twice",
                left.n()
            )));
        }
        let nb = Mk2a { left, right };
        if !nb.delta().is_positive() {
            return Err(Error::InvalidInput(format!(
                "{nb} has delta <= 0, not an extremal neighborhood"
            )));
        }
        // C.C < 0 downstairs needs Delta > 0 as well
        mk2a_raw_invariants(&nb)?;
        Ok(nb)
    }

    /// Build from the pairs (m_1, a_1), (m_2, a_2) in that order; the
    /// first is the e-side (printed right), the second the f-side.
    pub fn from_ints(e_side: (i64, i64), f_side: (i64, i64)) -> Mk2a {
        Mk2a::new(
            WahlData::from_ints(f_side.0, f_side.1),
            WahlData::from_ints(e_side.0, e_side.1),
        )
        .expect("valid k2A data")
    }

    /// The f-side (m_2, a_2), printed left.
    pub fn left(&self) -> &WahlData {
        &self.left
    }

    /// The e-side (m_1, a_1), printed right.
    pub fn right(&self) -> &WahlData {
        &self.right
    }

    pub fn delta(&self) -> BigInt {
        let (m1, a1) = (self.right.n(), self.right.a());
        let (m2, a2) = (self.left.n(), self.left.a());
        m1 * a2 + m2 * a1 - m1 * m2
    }

    /// Mirror image: sides swapped, chains read backwards.
    pub fn mirrored(&self) -> Mk2a {
        Mk2a {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }

    /// Equality up to the mirror symmetry.
    pub fn class_eq(&self, other: &Mk2a) -> bool {
        self == other || self == &other.mirrored()
    }
}

impl fmt::Display for Mk2a {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.left.chain().reverse(), self.right.chain())
    }
}

/// Extremal P-resolution data: at most two Wahl singularities on a central
/// curve of self-intersection -c. A missing side is a smooth point,
/// encoded as (m', a') = (1, 1) in the formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpRes {
    left: Option<WahlData>,
    c: BigInt,
    right: Option<WahlData>,
}

fn side_params(side: &Option<WahlData>) -> (BigInt, BigInt) {
    match side {
        Some(w) => (w.n().clone(), w.a().clone()),
        None => (BigInt::one(), BigInt::one()),
    }
}

impl EpRes {
    pub fn new(left: Option<WahlData>, c: BigInt, right: Option<WahlData>) -> Result<EpRes> {
        if c < BigInt::one() {
            return Err(Error::InvalidInput(format!(
                "central curve must have self-intersection <= -1, got -{c}"
            )));
        }
        let p = EpRes { left, c, right };
        if !p.delta().is_positive() {
            return Err(Error::InvalidInput(format!(
                "{p} has delta <= 0, not an extremal P-resolution"
            )));
        }
        Ok(p)
    }

    /// The f-side (m'_2, a'_2), printed left.
    pub fn left(&self) -> Option<&WahlData> {
        self.left.as_ref()
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    /// The e-side (m'_1, a'_1), printed right.
    pub fn right(&self) -> Option<&WahlData> {
        self.right.as_ref()
    }

    pub fn delta(&self) -> BigInt {
        let (m1, a1) = side_params(&self.right);
        let (m2, a2) = side_params(&self.left);
        &self.c * &m1 * &m2 - &m1 * a2 - &m2 * a1
    }

    pub fn mirrored(&self) -> EpRes {
        EpRes {
            left: self.right.clone(),
            c: self.c.clone(),
            right: self.left.clone(),
        }
    }

    pub fn class_eq(&self, other: &EpRes) -> bool {
        self == other || self == &other.mirrored()
    }
}

impl fmt::Display for EpRes {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(w) = &self.left {
            write!(f, "{}-", w.chain().reverse())?;
        }
        write!(f, "{}", self.c)?;
        if let Some(w) = &self.right {
            write!(f, "-{}", w.chain())?;
        }
        Ok(())
    }
}

/// Either kind of extremal neighborhood.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Neighborhood {
    Mk1a(Mk1a),
    Mk2a(Mk2a),
}

impl Neighborhood {
    pub fn invariants(&self) -> Invariants {
        match self {
            Neighborhood::Mk1a(n) => mk1a_invariants(n),
            Neighborhood::Mk2a(n) => mk2a_invariants(n),
        }
    }

    /// Equality up to the mirror symmetry of the configuration.
    pub fn class_eq(&self, other: &Neighborhood) -> bool {
        match (self, other) {
            (Neighborhood::Mk1a(a), Neighborhood::Mk1a(b)) => a.class_eq(b),
            (Neighborhood::Mk2a(a), Neighborhood::Mk2a(b)) => a.class_eq(b),
            _ => false,
        }
    }

    pub fn oracle_pair(&self) -> Result<(BigInt, BigInt)> {
        match self {
            Neighborhood::Mk1a(n) => oracle_mk1a(n),
            Neighborhood::Mk2a(n) => oracle_mk2a(n),
        }
    }
}

impl fmt::Display for Neighborhood {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Neighborhood::Mk1a(n) => n.fmt(f),
            Neighborhood::Mk2a(n) => n.fmt(f),
        }
    }
}

impl From<Mk1a> for Neighborhood {
    fn from(n: Mk1a) -> Self {
        Neighborhood::Mk1a(n)
    }
}

impl From<Mk2a> for Neighborhood {
    fn from(n: Mk2a) -> Self {
        Neighborhood::Mk2a(n)
    }
}

/// The numerical package of a neighborhood or P-resolution: delta, the
/// singularity 1/Delta(1,Omega) downstairs, and the exact intersection
/// numbers K.C and C.C.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariants {
    pub delta: BigInt,
    pub cap_delta: BigInt,
    pub omega: BigInt,
    pub kc: BigRational,
    pub c2: BigRational,
}

impl Invariants {
    pub fn cqs(&self) -> Cqs {
        Cqs::new(self.cap_delta.clone(), self.omega.clone()).expect("invariants are valid")
    }

    /// Equality with Omega compared up to duality; the orientation of a
    /// printed Omega is a convention, not an invariant.
    pub fn class_eq(&self, other: &Invariants) -> bool {
        self.delta == other.delta
            && self.cqs().class_eq(&other.cqs())
            && self.kc == other.kc
            && self.c2 == other.c2
    }

    /// As `class_eq` but ignoring the K.C and C.C normalizations, which
    /// depend on which model carries the curve.
    pub fn same_singularity(&self, other: &Invariants) -> bool {
        self.delta == other.delta && self.cqs().class_eq(&other.cqs())
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "delta={} Delta={} Omega={} K.C={} C^2={}",
            self.delta, self.cap_delta, self.omega, self.kc, self.c2
        )
    }
}

fn reduce_omega(raw: BigInt, cap_delta: &BigInt) -> BigInt {
    raw.mod_floor(cap_delta)
}

fn mk1a_raw_invariants(wahl: &WahlData, bar: usize) -> Result<Invariants> {
    let m = wahl.n();
    let cqs = wahl.cqs();
    let seq = sequences(cqs.delta(), cqs.omega()).expect("Wahl data is valid");
    let (alpha, beta, gamma) = (&seq.alpha[bar], &seq.beta[bar], &seq.gamma[bar]);
    let (delta, rem) = (beta + alpha).div_rem(m);
    if !rem.is_zero() {
        return Err(Error::Internal(
            "beta_i + alpha_i must be divisible by m on a Wahl chain".into(),
        ));
    }
    let cap_delta = m * m - beta * alpha;
    if !cap_delta.is_positive() {
        return Err(Error::InvalidInput(format!(
            "bar {bar} on {} has Delta = {cap_delta} <= 0, not an extremal neighborhood",
            wahl.chain()
        )));
    }
    let omega = reduce_omega(cqs.omega() - gamma * beta, &cap_delta);
    Cqs::new(cap_delta.clone(), omega.clone())?;
    Ok(Invariants {
        kc: BigRational::new(-delta.clone(), m.clone()),
        c2: BigRational::new(-cap_delta.clone(), m * m),
        delta,
        cap_delta,
        omega,
    })
}

/// Invariants of a k1A neighborhood. With the sequences of m^2/(ma-1) and
/// i the barred index:
///
/// ```text
/// delta = (beta_i + alpha_i)/m      Delta = m^2 - beta_i alpha_i
/// Omega = ma - 1 - gamma_i beta_i   K.C = -delta/m    C.C = -Delta/m^2
/// ```
pub fn mk1a_invariants(nb: &Mk1a) -> Invariants {
    mk1a_raw_invariants(&nb.wahl, nb.bar).expect("validated at construction")
}

fn mk2a_raw_invariants(nb: &Mk2a) -> Result<Invariants> {
    let (m1, a1) = (nb.right.n(), nb.right.a());
    let (m2, a2) = (nb.left.n(), nb.left.a());
    let delta = nb.delta();
    let cap_delta = m1 * m1 + m2 * m2 - &delta * m1 * m2;
    if !cap_delta.is_positive() {
        return Err(Error::InvalidInput(format!(
            "{nb} has Delta = {cap_delta} <= 0, not an extremal neighborhood"
        )));
    }
    let omega = reduce_omega((m2 - &delta * m1) * (m2 - a2) + m1 * a1 - 1, &cap_delta);
    Cqs::new(cap_delta.clone(), omega.clone())?;
    Ok(Invariants {
        kc: BigRational::new(-delta.clone(), m1 * m2),
        c2: BigRational::new(-cap_delta.clone(), (m1 * m2) * (m1 * m2)),
        delta,
        cap_delta,
        omega,
    })
}

/// Invariants of a k2A neighborhood:
///
/// ```text
/// delta = m_1 a_2 + m_2 a_1 - m_1 m_2
/// Delta = m_1^2 + m_2^2 - delta m_1 m_2
/// Omega = (m_2 - delta m_1)(m_2 - a_2) + m_1 a_1 - 1
/// K.C   = -delta/(m_1 m_2)            C.C = -Delta/(m_1 m_2)^2
/// ```
pub fn mk2a_invariants(nb: &Mk2a) -> Invariants {
    mk2a_raw_invariants(nb).expect("validated at construction")
}

/// Invariants of an extremal P-resolution:
///
/// ```text
/// delta = c m'_1 m'_2 - m'_1 a'_2 - m'_2 a'_1
/// Delta = m'_1^2 + m'_2^2 + delta m'_1 m'_2
/// Omega = -m'_1^2 (c-1) + (m'_2 + delta m'_1)(m'_2 - a'_2) + m'_1 a'_1 - 1
/// K.C   = +delta/(m'_1 m'_2)          C.C = -Delta/(m'_1 m'_2)^2
/// ```
///
/// The displayed Omega formula is stated for two genuine Wahl sides; when
/// a side is smooth the oracle route computes Omega instead.
pub fn epres_invariants(p: &EpRes) -> Invariants {
    let (m1, a1) = side_params(&p.right);
    let (m2, a2) = side_params(&p.left);
    let delta = p.delta();
    let cap_delta = &m1 * &m1 + &m2 * &m2 + &delta * &m1 * &m2;
    let omega = if p.left.is_some() && p.right.is_some() {
        reduce_omega(
            -(&m1 * &m1) * (&p.c - 1) + (&m2 + &delta * &m1) * (&m2 - &a2) + &m1 * &a1 - 1,
            &cap_delta,
        )
    } else {
        let (d, o) = oracle_epres(p).expect("P-resolution composite is non-degenerate");
        debug_assert_eq!(d, cap_delta);
        o
    };
    Invariants {
        kc: BigRational::new(delta.clone(), &m1 * &m2),
        c2: BigRational::new(-cap_delta.clone(), (&m1 * &m2) * (&m1 * &m2)),
        delta,
        cap_delta,
        omega,
    }
}

fn pair_to_window(p: BigInt, q: BigInt) -> Result<(BigInt, BigInt)> {
    let cqs = Cqs::from_pair(&p, &q)?;
    Ok((cqs.delta().clone(), cqs.omega().clone()))
}

/// Oracle for a k1A: decrement the barred entry, blow down, evaluate.
pub fn oracle_mk1a(nb: &Mk1a) -> Result<(BigInt, BigInt)> {
    let mut entries = nb.chain().entries().to_vec();
    entries[nb.bar - 1] -= 1;
    let composite = contract_ones(&Chain::new(entries)?)?;
    let (p, q) = evaluate(&composite)?;
    pair_to_window(p, q)
}

/// Oracle for a k2A: compose `[f_r, ..., f_1, 1, e_1, ..., e_s]`, blow
/// down the 1, evaluate.
pub fn oracle_mk2a(nb: &Mk2a) -> Result<(BigInt, BigInt)> {
    let one = Chain::new(vec![BigInt::one()])?;
    let composite = Chain::concat(&[&nb.left.chain().reverse(), &one, &nb.right.chain()]);
    let (p, q) = evaluate(&contract_ones(&composite)?)?;
    pair_to_window(p, q)
}

/// Oracle for a P-resolution: compose `[f_r, ..., f_1, c, e_1, ..., e_s]`
/// (the central entry can be 1, hence the blow-down), evaluate.
pub fn oracle_epres(p: &EpRes) -> Result<(BigInt, BigInt)> {
    let mut parts: Vec<Chain> = Vec::new();
    if let Some(w) = &p.left {
        parts.push(w.chain().reverse());
    }
    parts.push(Chain::new(vec![p.c.clone()])?);
    if let Some(w) = &p.right {
        parts.push(w.chain());
    }
    let refs: Vec<&Chain> = parts.iter().collect();
    let (num, den) = evaluate(&contract_ones(&Chain::concat(&refs))?)?;
    pair_to_window(num, den)
}
