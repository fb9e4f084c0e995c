//! End-to-end decoding: syndromes of the received word, restricted run of
//! the recursion, exhaustive root search for error positions, a linear
//! solve for error values, and a final verification gate.

use crate::bms::{run_restricted, TraceSnapshot};
use crate::code::AbelianCode;
use crate::gf::FieldElement;
use crate::lattice::{b_delta, point, LatticePoint, MonomialOrder};
use crate::poly2::{defining_set_of_poly_set, BivariatePoly, QuotientPoly};
use crate::syndrome::SyndromeTable;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FailureReason {
    /// The recursion itself could not complete (unknown index, no viable
    /// construction).
    Algorithm(String),
    /// Root count disagrees with the footprint size.
    LocateMismatch { located: usize, footprint: u64 },
    /// More positions than the designed capability.
    TooManyErrors { located: usize, capability: u32 },
    /// The value system has no unique solution.
    SingularSystem,
    /// The value system is overdetermined and contradictory.
    InconsistentSystem,
    /// A solved value lies outside the alphabet subfield.
    ValueNotInAlphabet(LatticePoint),
    /// A solved value is zero at a claimed error position.
    ZeroValue(LatticePoint),
    /// The corrected word still violates a known syndrome constraint.
    Unverified,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailureReason::Algorithm(msg) => write!(f, "recursion failed: {msg}"),
            FailureReason::LocateMismatch { located, footprint } => write!(
                f,
                "{located} roots found but the footprint has {footprint} points"
            ),
            FailureReason::TooManyErrors { located, capability } => {
                write!(f, "{located} positions exceed the capability t = {capability}")
            }
            FailureReason::SingularSystem => write!(f, "value system is singular"),
            FailureReason::InconsistentSystem => write!(f, "value system is inconsistent"),
            FailureReason::ValueNotInAlphabet(p) => {
                write!(f, "value at {p} is outside the alphabet")
            }
            FailureReason::ZeroValue(p) => write!(f, "value at {p} is zero"),
            FailureReason::Unverified => {
                write!(f, "corrected word fails a known syndrome constraint")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecodeStatus {
    Corrected,
    NoError,
    Failure(FailureReason),
}

/// Log of one run of the pipeline under a single monomial order.
#[derive(Clone, Debug)]
pub struct DecodeAttempt {
    pub order: MonomialOrder,
    /// The decodability theorem's nonzero-syndrome condition for this order.
    /// Recorded for diagnosis; the attempt proceeds regardless.
    pub hypothesis_holds: bool,
    pub steps: usize,
    pub changed_steps: usize,
    pub footprint_size: u64,
    pub located: Option<Vec<LatticePoint>>,
    pub failure: Option<FailureReason>,
    pub trace: Vec<TraceSnapshot>,
}

#[derive(Debug)]
pub struct DecodeResult {
    pub status: DecodeStatus,
    pub error: QuotientPoly,
    pub corrected: QuotientPoly,
    /// One entry per order tried; the first entry is the requested order.
    pub attempts: Vec<DecodeAttempt>,
}

/// Error positions: the common roots of the final minimal set over the
/// whole index set, found by exhaustive evaluation.
pub fn locate(f_set: &[BivariatePoly], code: &AbelianCode) -> Vec<LatticePoint> {
    let projected: Vec<QuotientPoly> = f_set
        .iter()
        .map(|f| f.project(code.bounds(), code.field()))
        .collect();
    defining_set_of_poly_set(&projected, code.alpha(), code.bounds(), code.field())
}

/// Solves for the error values at the given support from the syndromes over
/// B_{2t+1}: one equation per index m, sum over p of
/// e_p a1^(p1 (tau1+m1)) a2^(p2 (tau2+m2)) = u_m.
pub fn solve_values(
    support: &[LatticePoint],
    table: &SyndromeTable,
    code: &AbelianCode,
    t: u32,
) -> Result<BTreeMap<LatticePoint, FieldElement>, FailureReason> {
    let field = code.field();
    let tau = code.tau();
    let schedule = b_delta(2 * t + 1, MonomialOrder::Lex).expect("valid schedule");
    let ncols = support.len();
    let mut rows: Vec<Vec<FieldElement>> = Vec::new();
    for m in schedule {
        let Some(u) = table.read(m) else { continue };
        let mut row: Vec<FieldElement> = support
            .iter()
            .map(|p| {
                let at = code.alpha_power(*p);
                let e1 = (tau.n1 + m.n1) as u64;
                let e2 = (tau.n2 + m.n2) as u64;
                field.mul(field.pow(at.0, e1), field.pow(at.1, e2))
            })
            .collect();
        row.push(u);
        rows.push(row);
    }

    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            return Err(FailureReason::SingularSystem);
        };
        rows.swap(rank, pivot);
        let inv = field.inv(rows[rank][col]);
        for c in col..=ncols {
            rows[rank][c] = field.mul(rows[rank][c], inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col];
                for c in col..=ncols {
                    let s = field.mul(factor, rows[rank][c]);
                    rows[r][c] = field.sub(rows[r][c], s);
                }
            }
        }
        rank += 1;
    }
    if rows[rank..].iter().any(|r| !r[ncols].is_zero()) {
        return Err(FailureReason::InconsistentSystem);
    }

    let mut out = BTreeMap::new();
    for (i, &p) in support.iter().enumerate() {
        let v = rows[i][ncols];
        if v.is_zero() {
            return Err(FailureReason::ZeroValue(p));
        }
        if !field.base_field_membership(v) {
            return Err(FailureReason::ValueNotInAlphabet(p));
        }
        out.insert(p, v);
    }
    Ok(out)
}

/// The decodability theorem's syndrome condition: under lex, u_(0,j) != 0
/// for some j < t; under the graded order, a nonzero syndrome at weight-one
/// index (1,0) or (0,1).
pub fn hypothesis_holds(table: &SyndromeTable, t: u32, order: MonomialOrder) -> bool {
    let nonzero = |p: LatticePoint| table.read(p).is_some_and(|v| !v.is_zero());
    match order {
        MonomialOrder::Lex => (0..t).any(|j| nonzero(point(0, j))),
        MonomialOrder::Graded => nonzero(point(1, 0)) || nonzero(point(0, 1)),
    }
}

/// Full pipeline. Tries the requested order first; if that attempt fails
/// at any stage, retries once with the other order. Failures are values,
/// never panics; a corrected status always passed the verification gate.
pub fn decode(
    code: &AbelianCode,
    received: &QuotientPoly,
    t: u32,
    order: MonomialOrder,
) -> DecodeResult {
    let table = code.syndromes_of(received);
    if code.contains(received) {
        return DecodeResult {
            status: DecodeStatus::NoError,
            error: QuotientPoly::zero(code.bounds()),
            corrected: received.clone(),
            attempts: Vec::new(),
        };
    }

    let mut attempts = Vec::new();
    for ord in [order, order.other()] {
        let (attempt, outcome) = attempt_order(code, received, &table, t, ord);
        attempts.push(attempt);
        if let Some((error, corrected)) = outcome {
            return DecodeResult {
                status: DecodeStatus::Corrected,
                error,
                corrected,
                attempts,
            };
        }
    }
    let reason = attempts[0]
        .failure
        .clone()
        .unwrap_or(FailureReason::Unverified);
    DecodeResult {
        status: DecodeStatus::Failure(reason),
        error: QuotientPoly::zero(code.bounds()),
        corrected: received.clone(),
        attempts,
    }
}

fn attempt_order(
    code: &AbelianCode,
    received: &QuotientPoly,
    table: &SyndromeTable,
    t: u32,
    order: MonomialOrder,
) -> (DecodeAttempt, Option<(QuotientPoly, QuotientPoly)>) {
    let field = code.field();
    let mut attempt = DecodeAttempt {
        order,
        hypothesis_holds: hypothesis_holds(table, t, order),
        steps: 0,
        changed_steps: 0,
        footprint_size: 0,
        located: None,
        failure: None,
        trace: Vec::new(),
    };
    let state = match run_restricted(table, t, order, field) {
        Ok(state) => state,
        Err(e) => {
            attempt.failure = Some(FailureReason::Algorithm(e.to_string()));
            return (attempt, None);
        }
    };
    attempt.steps = state.trace().len().saturating_sub(1);
    attempt.changed_steps = state.trace().iter().filter(|s| s.changed).count();
    attempt.footprint_size = state.delta().size();
    attempt.trace = state.trace().to_vec();

    let support = locate(state.f_set(), code);
    attempt.located = Some(support.clone());
    if support.len() as u64 != state.delta().size() {
        attempt.failure = Some(FailureReason::LocateMismatch {
            located: support.len(),
            footprint: state.delta().size(),
        });
        return (attempt, None);
    }
    if support.len() > t as usize {
        attempt.failure = Some(FailureReason::TooManyErrors {
            located: support.len(),
            capability: t,
        });
        return (attempt, None);
    }
    let values = match solve_values(&support, table, code, t) {
        Ok(values) => values,
        Err(reason) => {
            attempt.failure = Some(reason);
            return (attempt, None);
        }
    };
    let error = QuotientPoly::from_terms(code.bounds(), values, field);
    let corrected = received.sub(&error, field);
    if !code.contains(&corrected) {
        attempt.failure = Some(FailureReason::Unverified);
        return (attempt, None);
    }
    (attempt, Some((error, corrected)))
}
