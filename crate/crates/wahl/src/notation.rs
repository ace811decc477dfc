//! Text notation for chains, neighborhoods and P-resolutions.
//!
//! ```text
//! [2,6,2,3]            chain
//! [3,5,2*]             k1A (the * marks the barred component; '‾' works too)
//! [4]-[2,6,2,3]        k2A, left block printed reversed as in the data format
//! [4]-3-[2,5]          extremal P-resolution; absent sides are omitted:
//! [4]-3   3-[2,5]   3  (left only / right only / both smooth)
//! 1/11(1,3)            cyclic quotient singularity
//! ```
//!
//! Whitespace is insignificant. Syntax errors and semantic errors (a block
//! that is not a reduced Wahl chain, delta <= 0) are reported separately,
//! both carrying the byte offset they were noticed at.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Error;
use crate::hjcf::{evaluate, Chain, Cqs};
use crate::neighborhoods::{EpRes, Mk1a, Mk2a};
use crate::tsing::WahlData;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Semantic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::Semantic => "semantic error",
        };
        write!(f, "{kind} at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseError {}

fn syntax(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax,
        offset,
        message: message.into(),
    }
}

fn semantic(offset: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Semantic,
        offset,
        message: message.into(),
    }
}

/// Any value the bracket notation can denote.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Chain(Chain),
    Mk1a(Mk1a),
    Mk2a(Mk2a),
    EpRes(EpRes),
}

impl fmt::Display for Parsed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parsed::Chain(v) => v.fmt(f),
            Parsed::Mk1a(v) => v.fmt(f),
            Parsed::Mk2a(v) => v.fmt(f),
            Parsed::EpRes(v) => v.fmt(f),
        }
    }
}

struct Scanner<'a> {
    text: &'a [u8],
    pos: usize,
}

/// A bracketed chain with bar positions, or a bare integer.
enum Block {
    Chain {
        offset: usize,
        entries: Vec<BigInt>,
        bars: Vec<usize>,
    },
    Int {
        offset: usize,
        value: BigInt,
    },
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Scanner<'a> {
        Scanner {
            text: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<(usize, BigInt), ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(syntax(start, "expected an integer"));
        }
        let digits = std::str::from_utf8(&self.text[start..self.pos]).expect("ascii digits");
        Ok((start, digits.parse().expect("digits parse as BigInt")))
    }

    /// The overline '‾' (U+203E) is accepted as a bar mark on input.
    fn eat_bar(&mut self) -> bool {
        if self.eat(b'*') {
            return true;
        }
        let rest = &self.text[self.pos.min(self.text.len())..];
        if rest.starts_with("\u{203E}".as_bytes()) {
            self.pos += "\u{203E}".len();
            return true;
        }
        false
    }

    fn block(&mut self) -> Result<Block, ParseError> {
        self.skip_ws();
        let offset = self.pos;
        if self.eat(b'[') {
            let mut entries = Vec::new();
            let mut bars = Vec::new();
            loop {
                let (_, value) = self.integer()?;
                entries.push(value);
                if self.eat_bar() {
                    bars.push(entries.len());
                }
                if self.eat(b',') {
                    continue;
                }
                if self.eat(b']') {
                    return Ok(Block::Chain {
                        offset,
                        entries,
                        bars,
                    });
                }
                return Err(syntax(self.pos, "expected ',' or ']' in chain"));
            }
        }
        let (offset, value) = self.integer()?;
        Ok(Block::Int { offset, value })
    }
}

fn reduced_chain(offset: usize, entries: &[BigInt]) -> Result<Chain, ParseError> {
    let chain = Chain::new(entries.to_vec()).map_err(|e| semantic(offset, e.to_string()))?;
    if !chain.is_reduced() {
        return Err(semantic(
            offset,
            format!("{chain} is not reduced (it has entries below 2)"),
        ));
    }
    Ok(chain)
}

/// Read a reduced chain as a Wahl singularity, in the orientation written.
fn wahl_block(offset: usize, entries: &[BigInt]) -> Result<WahlData, ParseError> {
    let chain = reduced_chain(offset, entries)?;
    let (p, q) = evaluate(&chain).map_err(|e| semantic(offset, e.to_string()))?;
    WahlData::from_chain_value(&p, &q)
        .ok_or_else(|| semantic(offset, format!("{chain} is not a Wahl chain")))
}

/// Parse the bracket notation into a chain, k1A, k2A or P-resolution.
pub fn parse(text: &str) -> Result<Parsed, ParseError> {
    let mut sc = Scanner::new(text);
    let mut blocks = vec![sc.block()?];
    while sc.eat(b'-') {
        blocks.push(sc.block()?);
    }
    sc.skip_ws();
    if sc.pos != sc.text.len() {
        return Err(syntax(sc.pos, "unexpected trailing input"));
    }

    // bars are only meaningful on a standalone chain (k1A); inside
    // composite notation they are presentation and are ignored
    match &blocks[..] {
        [Block::Chain {
            offset,
            entries,
            bars,
        }] => match bars.len() {
            0 => Ok(Parsed::Chain(
                Chain::new(entries.clone()).map_err(|e| semantic(*offset, e.to_string()))?,
            )),
            1 => {
                let wahl = wahl_block(*offset, entries)?;
                Ok(Parsed::Mk1a(
                    Mk1a::new(wahl, bars[0]).map_err(|e| semantic(*offset, e.to_string()))?,
                ))
            }
            _ => Err(syntax(*offset, "a chain can carry at most one bar")),
        },
        [Block::Int { offset, value }] => Ok(Parsed::EpRes(
            EpRes::new(None, value.clone(), None).map_err(|e| semantic(*offset, e.to_string()))?,
        )),
        [Block::Chain {
            offset: loff,
            entries: left,
            ..
        }, Block::Chain {
            offset: roff,
            entries: right,
            ..
        }] => {
            // [f_r..f_1]-[e_1..e_s]: the left block is the f-chain reversed
            let rev: Vec<BigInt> = left.iter().rev().cloned().collect();
            let f = wahl_block(*loff, &rev)?;
            let e = wahl_block(*roff, right)?;
            Ok(Parsed::Mk2a(
                Mk2a::new(f, e).map_err(|e| semantic(*loff, e.to_string()))?,
            ))
        }
        [Block::Chain {
            offset: loff,
            entries: left,
            ..
        }, Block::Int { value, .. }] => {
            let rev: Vec<BigInt> = left.iter().rev().cloned().collect();
            let f = wahl_block(*loff, &rev)?;
            Ok(Parsed::EpRes(
                EpRes::new(Some(f), value.clone(), None)
                    .map_err(|e| semantic(*loff, e.to_string()))?,
            ))
        }
        [Block::Int { offset, value }, Block::Chain {
            offset: roff,
            entries: right,
            ..
        }] => {
            let e = wahl_block(*roff, right)?;
            Ok(Parsed::EpRes(
                EpRes::new(None, value.clone(), Some(e))
                    .map_err(|e| semantic(*offset, e.to_string()))?,
            ))
        }
        [Block::Chain {
            offset: loff,
            entries: left,
            ..
        }, Block::Int { value, .. }, Block::Chain {
            offset: roff,
            entries: right,
            ..
        }] => {
            let rev: Vec<BigInt> = left.iter().rev().cloned().collect();
            let f = wahl_block(*loff, &rev)?;
            let e = wahl_block(*roff, right)?;
            Ok(Parsed::EpRes(
                EpRes::new(Some(f), value.clone(), Some(e))
                    .map_err(|e| semantic(*loff, e.to_string()))?,
            ))
        }
        _ => Err(syntax(
            0,
            "expected a chain, [..]-[..], [..]-c-[..], [..]-c, c-[..] or c",
        )),
    }
}

/// Parse the singularity syntax `1/D(1,O)`.
pub fn parse_cqs(text: &str) -> Result<Cqs, ParseError> {
    let mut sc = Scanner::new(text);
    let (off, one) = sc.integer()?;
    if !one.is_one() {
        return Err(syntax(off, "singularities are written 1/D(1,O)"));
    }
    if !sc.eat(b'/') {
        return Err(syntax(sc.pos, "expected '/'"));
    }
    let (_, delta) = sc.integer()?;
    if !sc.eat(b'(') {
        return Err(syntax(sc.pos, "expected '('"));
    }
    let (off, one) = sc.integer()?;
    if !one.is_one() {
        return Err(syntax(off, "singularities are written 1/D(1,O)"));
    }
    if !sc.eat(b',') {
        return Err(syntax(sc.pos, "expected ','"));
    }
    let (ooff, omega) = sc.integer()?;
    if !sc.eat(b')') {
        return Err(syntax(sc.pos, "expected ')'"));
    }
    sc.skip_ws();
    if sc.pos != sc.text.len() {
        return Err(syntax(sc.pos, "unexpected trailing input"));
    }
    Cqs::new(delta, omega).map_err(|e: Error| semantic(ooff, e.to_string()))
}
