//! Hirzebruch-Jung continued fractions and cyclic quotient singularities.
//!
//! The minimal resolution of the cyclic quotient singularity 1/m(1,q) is a
//! chain of rational curves with self-intersections -b_1, ..., -b_s, where
//!
//! ```text
//! m/q = b_1 - 1/(b_2 - 1/(... - 1/b_s)) =: [b_1, ..., b_s]
//! ```
//!
//! is the Hirzebruch-Jung expansion (all b_i >= 2). This module is the
//! arithmetic core of the crate: expansion, division-free evaluation of a
//! chain as a product of 2x2 integer matrices, the companion sequences
//! alpha/beta/gamma with their identities, discrepancies, and the blow-down
//! reduction of chains containing 1-entries.
//!
//! Evaluation is projective on purpose: composite chains such as
//! `[f_r, ..., f_1, 1, e_1, ..., e_s]` show up throughout the extremal
//! neighborhood calculus and a naive continued fraction would divide by
//! zero on them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub(crate) fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// A chain of rational curves, encoded by positive integers: entry `b`
/// stands for a curve of self-intersection `-b`.
///
/// A chain is *reduced* when every entry is at least 2; reduced chains are
/// exactly the valid Hirzebruch-Jung expansions. Entries equal to 1 are
/// allowed as values (they arise in composite configurations before
/// blow-down), and the empty chain is the configuration left after
/// contracting everything.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Chain {
    entries: Vec<BigInt>,
}

impl Chain {
    /// Build a chain, rejecting entries below 1.
    pub fn new(entries: Vec<BigInt>) -> Result<Chain> {
        if entries.iter().any(|b| b < &BigInt::one()) {
            return Err(Error::InvalidInput("chain entries must be >= 1".into()));
        }
        Ok(Chain { entries })
    }

    /// Convenience constructor from machine integers, for fixtures.
    pub fn from_ints(entries: &[i64]) -> Chain {
        Chain::new(entries.iter().map(|&b| big(b)).collect()).expect("valid entries")
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// True when every entry is at least 2.
    pub fn is_reduced(&self) -> bool {
        let two = big(2);
        self.entries.iter().all(|b| b >= &two)
    }

    /// The entry-reversed chain. For a reduced chain with value m/q the
    /// reverse has value m/q' where q q' = 1 (mod m).
    pub fn reverse(&self) -> Chain {
        let mut entries = self.entries.clone();
        entries.reverse();
        Chain { entries }
    }

    /// Concatenation used to assemble composite configurations.
    pub fn concat(parts: &[&Chain]) -> Chain {
        let mut entries = Vec::new();
        for p in parts {
            entries.extend_from_slice(&p.entries);
        }
        Chain { entries }
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, b) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "]")
    }
}

fn check_pair(m: &BigInt, q: &BigInt) -> Result<()> {
    if !(q > &BigInt::zero() && q < m) {
        return Err(Error::InvalidInput(format!(
            "need 0 < q < m, got m={m}, q={q}"
        )));
    }
    if !m.gcd(q).is_one() {
        return Err(Error::InvalidInput(format!(
            "m={m} and q={q} are not coprime"
        )));
    }
    Ok(())
}

/// Hirzebruch-Jung expansion of m/q: the unique reduced chain with that
/// value. Round-trips with [`evaluate`].
pub fn expand(m: &BigInt, q: &BigInt) -> Result<Chain> {
    check_pair(m, q)?;
    let mut m = m.clone();
    let mut q = q.clone();
    let mut entries = Vec::new();
    while !q.is_zero() {
        let b = m.div_ceil(&q);
        let next = &b * &q - &m;
        entries.push(b);
        m = q;
        q = next;
    }
    Ok(Chain { entries })
}

/// Evaluate a chain projectively as the product of the matrices
/// `[[b, -1], [1, 0]]`, returning the coprime pair (p, q) with value p/q.
/// No division happens, so 1-entries and intermediate zeros are safe.
pub fn evaluate(chain: &Chain) -> Result<(BigInt, BigInt)> {
    if chain.is_empty() {
        return Err(Error::InvalidInput("cannot evaluate an empty chain".into()));
    }
    // Row-by-row product; the determinant of every factor is 1, so the
    // resulting pair is automatically coprime.
    let (mut a, mut b) = (BigInt::one(), BigInt::zero());
    let (mut c, mut d) = (BigInt::zero(), BigInt::one());
    for e in &chain.entries {
        let na = &a * e + &b;
        let nc = &c * e + &d;
        b = -a;
        d = -c;
        a = na;
        c = nc;
    }
    Ok((a, c))
}

/// Repeatedly blow down 1-entries:
///
/// ```text
/// [.., x, 1, y, ..] -> [.., x-1, y-1, ..]
/// [1, y, ..]        -> [y-1, ..]
/// [.., x, 1]        -> [.., x-1]
/// ```
///
/// until no entry equals 1 (or nothing is left). The value of the chain as
/// a singularity class is preserved. Signals `Degenerate` when a blow-down
/// would push an entry below 1.
pub fn contract_ones(chain: &Chain) -> Result<Chain> {
    let one = BigInt::one();
    let mut entries = chain.entries.clone();
    while let Some(i) = entries.iter().position(|b| b == &one) {
        entries.remove(i);
        if i > 0 {
            entries[i - 1] -= 1;
            if entries[i - 1] < one {
                return Err(Error::Degenerate(format!(
                    "blow-down of {chain} produced an entry below 1"
                )));
            }
        }
        if i < entries.len() {
            entries[i] -= 1;
            if entries[i] < one {
                return Err(Error::Degenerate(format!(
                    "blow-down of {chain} produced an entry below 1"
                )));
            }
        }
    }
    Ok(Chain { entries })
}

/// The companion sequences of the expansion m/q = [b_1, ..., b_s], indexed
/// 0..=s+1:
///
/// * beta:  beta_0 = m, beta_1 = q, beta_{i+1} = b_i beta_i - beta_{i-1};
///   in particular beta_s = 1, beta_{s+1} = 0.
/// * alpha: alpha_0 = 0, alpha_1 = 1, same recursion; alpha_{s+1} = m and
///   alpha_s is the inverse of q mod m.
/// * gamma: gamma_0 = -1, gamma_1 = 0, same recursion; gamma_{s+1} = q.
///
/// They satisfy alpha_{i+1} gamma_i - alpha_i gamma_{i+1} = -1 and
/// beta_i = q alpha_i - m gamma_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HjSequences {
    pub m: BigInt,
    pub q: BigInt,
    pub chain: Chain,
    pub alpha: Vec<BigInt>,
    pub beta: Vec<BigInt>,
    pub gamma: Vec<BigInt>,
}

/// Compute the alpha/beta/gamma sequences for m/q.
pub fn sequences(m: &BigInt, q: &BigInt) -> Result<HjSequences> {
    let chain = expand(m, q)?;
    let s = chain.len();
    let mut alpha = Vec::with_capacity(s + 2);
    let mut beta = Vec::with_capacity(s + 2);
    let mut gamma = Vec::with_capacity(s + 2);
    alpha.extend([BigInt::zero(), BigInt::one()]);
    beta.extend([m.clone(), q.clone()]);
    gamma.extend([-BigInt::one(), BigInt::zero()]);
    for i in 1..=s {
        let b = &chain.entries[i - 1];
        alpha.push(b * &alpha[i] - &alpha[i - 1]);
        beta.push(b * &beta[i] - &beta[i - 1]);
        gamma.push(b * &gamma[i] - &gamma[i - 1]);
    }
    debug_assert!(beta[s + 1].is_zero() && beta[s].is_one());
    debug_assert_eq!(&alpha[s + 1], m);
    debug_assert_eq!(&gamma[s + 1], q);
    Ok(HjSequences {
        m: m.clone(),
        q: q.clone(),
        chain,
        alpha,
        beta,
        gamma,
    })
}

/// Discrepancies of the exceptional curves over 1/m(1,q):
/// `-1 + (beta_i + alpha_i)/m` for i = 1..s, as exact rationals. Each lies
/// in (-1, 0] for log terminal input.
pub fn discrepancies(m: &BigInt, q: &BigInt) -> Result<Vec<BigRational>> {
    let seq = sequences(m, q)?;
    let s = seq.chain.len();
    let mut out = Vec::with_capacity(s);
    for i in 1..=s {
        let num = &seq.beta[i] + &seq.alpha[i] - m;
        out.push(BigRational::new(num, m.clone()));
    }
    Ok(out)
}

/// A cyclic quotient singularity 1/Delta(1, Omega), stored with
/// 0 < Omega < Delta and gcd(Omega, Delta) = 1.
///
/// Equality as derived (`PartialEq`) compares the stored orientation;
/// [`Cqs::class_eq`] also identifies 1/D(1,O) with 1/D(1,O') when
/// O O' = 1 (mod D), which is the same germ with the chain read backwards.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cqs {
    delta: BigInt,
    omega: BigInt,
}

impl Cqs {
    pub fn new(delta: BigInt, omega: BigInt) -> Result<Cqs> {
        if delta < big(2) {
            return Err(Error::InvalidInput(format!(
                "singularity order must be >= 2, got {delta}"
            )));
        }
        check_pair(&delta, &omega)?;
        Ok(Cqs { delta, omega })
    }

    /// Read a singularity class off a projective pair: Delta = p and
    /// Omega = q reduced into the window (0, p). Rejects degenerate pairs.
    pub fn from_pair(p: &BigInt, q: &BigInt) -> Result<Cqs> {
        if p < &big(2) {
            return Err(Error::Degenerate(format!(
                "pair ({p}, {q}) is not a singularity"
            )));
        }
        let omega = q.mod_floor(p);
        Cqs::new(p.clone(), omega)
    }

    pub fn from_ints(delta: i64, omega: i64) -> Cqs {
        Cqs::new(big(delta), big(omega)).expect("valid singularity data")
    }

    pub fn delta(&self) -> &BigInt {
        &self.delta
    }

    pub fn omega(&self) -> &BigInt {
        &self.omega
    }

    /// The inverse orientation Omega^{-1} mod Delta.
    pub fn omega_inverse(&self) -> BigInt {
        self.omega
            .modinv(&self.delta)
            .expect("omega is a unit mod delta")
    }

    /// Same germ, opposite chain orientation.
    pub fn dual(&self) -> Cqs {
        Cqs {
            delta: self.delta.clone(),
            omega: self.omega_inverse(),
        }
    }

    /// Isomorphism-aware equality: orientation of the chain is a
    /// convention, not an invariant of the germ.
    pub fn class_eq(&self, other: &Cqs) -> bool {
        self.delta == other.delta
            && (self.omega == other.omega
                || (&self.omega * &other.omega).mod_floor(&self.delta).is_one())
    }

    /// Exceptional chain of the minimal resolution.
    pub fn chain(&self) -> Chain {
        expand(&self.delta, &self.omega).expect("stored pair is valid")
    }
}

impl fmt::Display for Cqs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1/{}(1,{})", self.delta, self.omega)
    }
}
