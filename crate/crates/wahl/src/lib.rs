//! Exact arithmetic for the birational calculus of degenerating surfaces:
//! Hirzebruch-Jung continued fractions, Wahl and T-singularity chains,
//! extremal neighborhoods of types k1A/k2A with their invariants, the
//! flip/divisorial-contraction algorithm and Mori sequences, and T-blow-ups
//! of I_d elliptic fibers.
//!
//! Everything is computed over arbitrary-precision integers and rationals;
//! there is no floating point anywhere. All values are immutable and the
//! operations are pure functions, so the whole crate is thread-safe by
//! construction.
//!
//! ```
//! use wahl::{flip, mori_sequence, parse, Neighborhood, Parsed};
//!
//! let nb = match parse("[4]-[2,6,2,3]").unwrap() {
//!     Parsed::Mk2a(n) => Neighborhood::Mk2a(n),
//!     _ => unreachable!(),
//! };
//! let inv = nb.invariants();
//! assert_eq!(inv.cap_delta.to_string(), "39");
//!
//! let out = flip(&nb).unwrap();
//! assert_eq!(out.to_string(), "[4]-1-[3,5,2]");
//!
//! let seq = mori_sequence(&nb, 1).unwrap(); // delta = 1: one extra member
//! assert_eq!(seq.render(), "[4]-[2,6*,2,3]-[2,5,3]");
//! ```

pub mod error;
pub mod hjcf;
pub mod mori;
pub mod neighborhoods;
pub mod notation;
pub mod pipeline;
pub mod tsing;

pub use error::{Error, Result};
pub use hjcf::{
    contract_ones, discrepancies, evaluate, expand, sequences, Chain, Cqs, HjSequences,
};
pub use mori::{
    classify_neighborhood, degenerate_mk1a, divisorial_data, divisorial_family, flip,
    initial_neighborhood, mori_sequence, mori_step, special_flip, BarredChain, MoriOutcome,
    MoriSequence, MoriStep, NbhdType, ZetaTrace,
};
pub use neighborhoods::{
    epres_invariants, mk1a_invariants, mk2a_invariants, EpRes, Invariants, Mk1a, Mk2a, Neighborhood,
};
pub use notation::{parse, parse_cqs, ParseError, ParseErrorKind, Parsed};
pub use pipeline::{
    parse_script, render_json, render_text, run_pipeline, PipelineError, PipelineState, Script,
    Slot,
};
pub use tsing::{
    classify, dolgachev_type, kodaira_case, t_blowup, t_decompositions, BlowupScript,
    Classification, FiberState, KodairaCase, Side, TBlowup, TData, WahlData,
};
