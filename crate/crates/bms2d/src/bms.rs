//! The Berlekamp-Massey-Sakata state machine over bivariate syndrome
//! arrays: minimal polynomial sets F, auxiliary sets G, footprint
//! maintenance, the Berlekamp combine, and the two update procedures.

use crate::gf::{Field, FieldElement};
use crate::lattice::{b_delta, point, DeltaSet, LatticeError, LatticePoint, MonomialOrder};
use crate::poly2::{normalize_minimal_set, BivariatePoly};
use crate::syndrome::{fundamental_points, SyndromeTable};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BmsError {
    #[error("schedule index {0} is unknown in the syndrome table")]
    ScheduleUnknown(LatticePoint),
    #[error("syndrome at {0} is unknown and cannot be inferred from F")]
    NotInferable(LatticePoint),
    #[error("no construction yields a member with leading power {target} at step {l}")]
    NoConstruction { target: LatticePoint, l: LatticePoint },
    #[error("no auxiliary witness for interior corner {corner} at step {l}")]
    NoWitness { corner: LatticePoint, l: LatticePoint },
    #[error("full run requires a fully known table")]
    NotFullyKnown,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// Archived failure witness: g was valid strictly before `fail_point`, where
/// its relation left the nonzero `discrepancy`. The pair witnesses the
/// interior corner fail_point - LP(g) of the footprint.
#[derive(Clone, Debug)]
pub struct AuxiliaryRecord {
    pub g: BivariatePoly,
    pub fail_point: LatticePoint,
    pub discrepancy: FieldElement,
    /// The defining points (s^(b), s^(b+1)) bracketing the witnessed corner
    /// at archival time; kept for display, the corner itself is derived.
    pub span: (LatticePoint, LatticePoint),
}

impl AuxiliaryRecord {
    /// The interior corner this record witnesses.
    pub fn corner(&self, order: MonomialOrder) -> LatticePoint {
        self.fail_point.sub(self.g.leading_power(order).expect("zero auxiliary"))
    }
}

/// One row of the run log: the state after processing point `l` (or the
/// initial state when `l` is None). F is stored in normal form (tails
/// reduced into the footprint) so traces are stable across runs; the
/// working set inside the state stays exactly as constructed.
#[derive(Clone, Debug)]
pub struct TraceSnapshot {
    pub l: Option<LatticePoint>,
    pub f: Vec<BivariatePoly>,
    pub g: Vec<AuxiliaryRecord>,
    pub delta: DeltaSet,
    /// False when every member stayed valid ("Same" rows).
    pub changed: bool,
}

/// Mutable algorithm state plus an append-only trace and run diagnostics.
#[derive(Debug)]
pub struct BmsState {
    order: MonomialOrder,
    f_set: Vec<BivariatePoly>,
    g_set: Vec<AuxiliaryRecord>,
    delta: DeltaSet,
    trace: Vec<TraceSnapshot>,
    /// Treat case 4's index bound as j >= 2 instead of the literal j > 2.
    pub case4_j_geq_2: bool,
    proc2_points: Vec<LatticePoint>,
    fallback_constructions: Vec<(LatticePoint, LatticePoint)>,
    inferred: Vec<LatticePoint>,
}

impl BmsState {
    /// l = (0,0), F = {1}, G empty, footprint empty.
    pub fn init(order: MonomialOrder) -> BmsState {
        let mut state = BmsState {
            order,
            f_set: vec![BivariatePoly::one()],
            g_set: Vec::new(),
            delta: DeltaSet::empty(),
            trace: Vec::new(),
            case4_j_geq_2: false,
            proc2_points: Vec::new(),
            fallback_constructions: Vec::new(),
            inferred: Vec::new(),
        };
        // The normal form of {1} over the empty footprint is itself.
        state.trace.push(TraceSnapshot {
            l: None,
            f: state.f_set.clone(),
            g: Vec::new(),
            delta: DeltaSet::empty(),
            changed: false,
        });
        state
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn f_set(&self) -> &[BivariatePoly] {
        &self.f_set
    }

    /// Current members with tails reduced into the footprint; the canonical
    /// form for printing and for comparing runs against each other.
    pub fn normalized_f(&self, field: &Field) -> Vec<BivariatePoly> {
        normalize_minimal_set(&self.f_set, &self.delta, self.order, field)
    }

    pub fn g_set(&self) -> &[AuxiliaryRecord] {
        &self.g_set
    }

    pub fn delta(&self) -> &DeltaSet {
        &self.delta
    }

    pub fn trace(&self) -> &[TraceSnapshot] {
        &self.trace
    }

    /// Points at which the footprint grew.
    pub fn proc2_points(&self) -> &[LatticePoint] {
        &self.proc2_points
    }

    /// (target, l) pairs built outside the five-case menu.
    pub fn fallback_constructions(&self) -> &[(LatticePoint, LatticePoint)] {
        &self.fallback_constructions
    }

    /// Syndrome positions filled in by recurrence inference.
    pub fn inferred(&self) -> &[LatticePoint] {
        &self.inferred
    }

    fn push_snapshot(&mut self, l: Option<LatticePoint>, changed: bool, field: &Field) {
        self.trace.push(TraceSnapshot {
            l,
            f: self.normalized_f(field),
            g: self.g_set.clone(),
            delta: self.delta.clone(),
            changed,
        });
    }

    fn lp(&self, f: &BivariatePoly) -> LatticePoint {
        f.leading_power(self.order).expect("zero member in F")
    }

    /// Ensures u is known at the (unreduced) position n, deriving it from a
    /// member whose relation is already forced to vanish there.
    fn ensure_known(
        &mut self,
        table: &mut SyndromeTable,
        n: LatticePoint,
        field: &Field,
    ) -> Result<FieldElement, BmsError> {
        if let Some(v) = table.read(n) {
            return Ok(v);
        }
        let idx = (0..self.f_set.len())
            .find(|&i| self.lp(&self.f_set[i]).leq_partial(n))
            .ok_or(BmsError::NotInferable(n))?;
        let f = self.f_set[idx].clone();
        let s = self.lp(&f);
        let mut tail_sum = FieldElement::Zero;
        for (m, c) in f.terms() {
            if m == s {
                continue;
            }
            let v = self.ensure_known(table, m.add(n).sub(s), field)?;
            tail_sum = field.add(tail_sum, field.mul(c, v));
        }
        // f[U]_n = 0 pins the leading read: u_n = -tail / f_s.
        let value = field.div(field.neg(tail_sum), f.coefficient(s));
        table.set(n, value);
        self.inferred.push(n.reduce_mod(table.bounds()));
        Ok(value)
    }

    /// Processes one recursion point. Discrepancies of all members are taken
    /// against the same table snapshot; updates happen afterwards. With
    /// `infer` set, missing reads are first derived from valid members.
    pub fn step(
        &mut self,
        table: &mut SyndromeTable,
        l: LatticePoint,
        infer: bool,
        field: &Field,
    ) -> Result<(), BmsError> {
        if infer {
            for i in 0..self.f_set.len() {
                let f = self.f_set[i].clone();
                let s = self.lp(&f);
                if !s.leq_partial(l) {
                    continue;
                }
                for (m, _) in f.terms() {
                    self.ensure_known(table, m.add(l).sub(s), field)?;
                }
            }
        }
        let w: Vec<FieldElement> = self
            .f_set
            .iter()
            .map(|f| {
                table
                    .apply(f, l, self.order, field)
                    .ok_or(BmsError::ScheduleUnknown(l))
            })
            .collect::<Result<_, _>>()?;

        if w.iter().all(|v| v.is_zero()) {
            self.push_snapshot(Some(l), false, field);
            return Ok(());
        }
        self.rebuild(l, &w, field)?;
        self.push_snapshot(Some(l), true, field);
        Ok(())
    }

    /// Forms the new F, G and footprint from the failing members.
    fn rebuild(
        &mut self,
        l: LatticePoint,
        w: &[FieldElement],
        field: &Field,
    ) -> Result<(), BmsError> {
        let old_s: Vec<LatticePoint> = self.f_set.iter().map(|f| self.lp(f)).collect();
        // A failing relation requires LP(f) ⪯ l, so l - s is a lattice point.
        let growth: Vec<LatticePoint> = (0..self.f_set.len())
            .filter(|&i| !w[i].is_zero() && !self.delta.contains(l.sub(old_s[i])))
            .map(|i| l.sub(old_s[i]))
            .collect();
        let new_delta = if growth.is_empty() {
            self.delta.clone()
        } else {
            self.proc2_points.push(l);
            let corners = self.delta.interior_corners().into_iter().chain(growth);
            DeltaSet::from_interior_corners(corners)
        };
        debug_assert!(new_delta.size() >= self.delta.size());

        let new_points: Vec<LatticePoint> = new_delta.defining_points().to_vec();
        let mut new_f = Vec::with_capacity(new_points.len());
        for &t in &new_points {
            match old_s.iter().position(|&s| s == t) {
                Some(i) if w[i].is_zero() => new_f.push(self.f_set[i].clone()),
                Some(i) if self.delta.contains(l.sub(old_s[i])) => {
                    // The defining point survives: replace in place using a
                    // witness whose corner dominates l - s^(i).
                    let c = l.sub(old_s[i]);
                    let j = self
                        .g_set
                        .iter()
                        .position(|rec| c.leq_partial(rec.corner(self.order)))
                        .ok_or(BmsError::NoConstruction { target: t, l })?;
                    new_f.push(self.combine(i, w, j, l, field));
                }
                _ => new_f.push(self.construct_new(t, l, w, field)?),
            }
        }

        let mut new_g = Vec::new();
        for (j, corner) in new_delta.interior_corners().into_iter().enumerate() {
            if let Some(rec) = self
                .g_set
                .iter()
                .find(|rec| rec.corner(self.order) == corner)
            {
                new_g.push(rec.clone());
            } else if let Some(i) =
                (0..self.f_set.len()).find(|&i| !w[i].is_zero() && l.sub(old_s[i]) == corner)
            {
                new_g.push(AuxiliaryRecord {
                    g: self.f_set[i].clone(),
                    fail_point: l,
                    discrepancy: w[i],
                    span: (new_points[j], new_points[j + 1]),
                });
            } else {
                return Err(BmsError::NoWitness { corner, l });
            }
        }

        // Members are kept exactly as constructed. Reducing a tail monomial
        // with a shifted member asserts that member's relation at a shifted
        // read position; when the shift leaves the fundamental rectangle the
        // position was never processed, so the rewrite can silently inject a
        // wraparound relation that the table does not satisfy. Reduced forms
        // are produced on demand for display and comparison only.
        self.f_set = new_f;
        self.g_set = new_g;
        self.delta = new_delta;
        Ok(())
    }

    /// h_{f^(a), g^(b)} for member index a and auxiliary index b.
    fn combine(
        &self,
        a: usize,
        w: &[FieldElement],
        b: usize,
        l: LatticePoint,
        field: &Field,
    ) -> BivariatePoly {
        berlekamp_combine(
            &self.f_set[a],
            w[a],
            &self.g_set[b],
            l,
            self.order,
            field,
        )
    }

    /// Builds the member for a brand-new defining point t, trying the five
    /// constructions in order and falling back to generic shifts/combines.
    fn construct_new(
        &mut self,
        t: LatticePoint,
        l: LatticePoint,
        w: &[FieldElement],
        field: &Field,
    ) -> Result<BivariatePoly, BmsError> {
        let d = self.f_set.len();
        let s: Vec<LatticePoint> = self.f_set.iter().map(|f| self.lp(f)).collect();
        let corners: Vec<LatticePoint> = self
            .g_set
            .iter()
            .map(|rec| rec.corner(self.order))
            .collect();
        let signed = |x: u32| x as i64;
        let fits = |a: i64, b: i64| -> Option<LatticePoint> {
            (a >= 0 && b >= 0).then(|| point(a as u32, b as u32))
        };
        let accept = |h: BivariatePoly| -> Option<BivariatePoly> {
            (h.leading_power(self.order) == Some(t)).then_some(h)
        };

        // Case 1: S = (l1 - s1^(i) + 1, l2 - s2^(i+1) + 1), f^(i+1) failing.
        for i in 0..d.saturating_sub(1) {
            if w[i + 1].is_zero() {
                continue;
            }
            let c = corners[i];
            let cand = fits(signed(l.n1) - signed(c.n1), signed(l.n2) - signed(c.n2));
            if cand != Some(t) {
                continue;
            }
            if let Some(k) = (0..d).find(|&k| s[k].leq_partial(t)) {
                if let Some(h) = accept(self.combine(k, w, i, l, field)) {
                    return Ok(h);
                }
            }
        }
        // Case 2: S = (l1 - s1^(k) + 1, s2^(i)) for failing k < d.
        for k in 0..d.saturating_sub(1) {
            if w[k].is_zero() {
                continue;
            }
            let Some(s1) = (signed(l.n1) - signed(s[k].n1) + 1).try_into().ok() else {
                continue;
            };
            for i in 0..d {
                let cand = point(s1, s[i].n2);
                if cand == t && s[i].leq_partial(t) {
                    if let Some(h) = accept(self.combine(i, w, k, l, field)) {
                        return Ok(h);
                    }
                }
            }
        }
        // Case 3: S = (l1 + 1, s2^(i)) with i < d; a pure X1 shift.
        for i in 0..d.saturating_sub(1) {
            if point(l.n1 + 1, s[i].n2) == t && s[i].n1 <= l.n1 + 1 {
                let shift = point(l.n1 + 1 - s[i].n1, 0);
                let h = self.f_set[i].mul_monomial(shift, FieldElement::ONE, field);
                if let Some(h) = accept(h) {
                    return Ok(h);
                }
            }
        }
        // Case 4: S = (s1^(i), l2 - s2^(j) + 1) for failing f^(j); the text
        // reads j > 2, with j >= 2 available behind the switch.
        let j_min = if self.case4_j_geq_2 { 2 } else { 3 };
        for j in j_min..=d {
            if w[j - 1].is_zero() {
                continue;
            }
            let Some(s2) = (signed(l.n2) - signed(s[j - 1].n2) + 1).try_into().ok() else {
                continue;
            };
            for i in 0..d {
                let cand = point(s[i].n1, s2);
                if cand == t && s[i].leq_partial(t) {
                    if let Some(h) = accept(self.combine(i, w, j - 2, l, field)) {
                        return Ok(h);
                    }
                }
            }
        }
        // Case 5: S = (s1^(i), l2 + 1); a pure X2 shift.
        for i in 0..d {
            if point(s[i].n1, l.n2 + 1) == t && s[i].n2 <= l.n2 + 1 {
                let shift = point(0, l.n2 + 1 - s[i].n2);
                let h = self.f_set[i].mul_monomial(shift, FieldElement::ONE, field);
                if let Some(h) = accept(h) {
                    return Ok(h);
                }
            }
        }

        // None of the five constructions hit the target. Generic rescues,
        // recorded as diagnostics. Shifting preserves every applicable
        // relation unchanged, so a shifted valid member stays valid, and a
        // lifted combine stays valid; a shifted failing member is only safe
        // when its new leading power does not divide l, which removes the
        // one relation that fails.
        self.fallback_constructions.push((t, l));
        for i in 0..d {
            if w[i].is_zero() && s[i].leq_partial(t) {
                let h = self.f_set[i].mul_monomial(t.sub(s[i]), FieldElement::ONE, field);
                if let Some(h) = accept(h) {
                    return Ok(h);
                }
            }
        }
        for a in 0..d {
            for b in 0..self.g_set.len() {
                let h = self.combine(a, w, b, l, field);
                let r = h.leading_power(self.order).expect("empty combine");
                if r.leq_partial(t) {
                    let lifted = h.mul_monomial(t.sub(r), FieldElement::ONE, field);
                    if let Some(lifted) = accept(lifted) {
                        return Ok(lifted);
                    }
                }
            }
        }
        for i in 0..d {
            if !w[i].is_zero() && s[i].leq_partial(t) && !t.leq_partial(l) {
                let h = self.f_set[i].mul_monomial(t.sub(s[i]), FieldElement::ONE, field);
                if let Some(h) = accept(h) {
                    return Ok(h);
                }
            }
        }
        Err(BmsError::NoConstruction { target: t, l })
    }
}

/// The Berlekamp combine h = X^(r - s^(a)) f^(a) - (w_a / v_b) X^e g^(b).
/// The witnessed corner stands in for (s1^(b) - 1, s2^(b+1) - 1), which by
/// construction refers to the current F. A zero w_a degenerates to the pure
/// shift of f^(a).
pub fn berlekamp_combine(
    f_a: &BivariatePoly,
    w_a: FieldElement,
    rec: &AuxiliaryRecord,
    l: LatticePoint,
    order: MonomialOrder,
    field: &Field,
) -> BivariatePoly {
    let s_a = f_a.leading_power(order).expect("zero member");
    let c = rec.corner(order);
    let d1 = l.n1 as i64 - c.n1 as i64;
    let d2 = l.n2 as i64 - c.n2 as i64;
    let r1 = (s_a.n1 as i64).max(d1);
    let r2 = (s_a.n2 as i64).max(d2);
    let r = point(r1 as u32, r2 as u32);
    let shifted = f_a.mul_monomial(r.sub(s_a), FieldElement::ONE, field);
    if w_a.is_zero() {
        return shifted;
    }
    let e = point((r1 - d1) as u32, (r2 - d2) as u32);
    let factor = field.div(w_a, rec.discrepancy);
    let h = shifted.sub(&rec.g.mul_monomial(e, factor, field), field);
    debug_assert_eq!(h.leading_power(order), Some(r));
    h
}

/// Runs the algorithm over exactly B_{2t+1} in the given order. Every index
/// of B must be known; reads outside B are inferred from the current F as
/// needed. The input table is not modified.
pub fn run_restricted(
    table: &SyndromeTable,
    t: u32,
    order: MonomialOrder,
    field: &Field,
) -> Result<BmsState, BmsError> {
    run_restricted_with(table, t, order, field, false)
}

pub fn run_restricted_with(
    table: &SyndromeTable,
    t: u32,
    order: MonomialOrder,
    field: &Field,
    case4_j_geq_2: bool,
) -> Result<BmsState, BmsError> {
    let schedule = b_delta(2 * t + 1, order)?;
    for &n in &schedule {
        if table.read(n).is_none() {
            return Err(BmsError::ScheduleUnknown(n));
        }
    }
    let mut table = table.clone();
    let mut state = BmsState::init(order);
    state.case4_j_geq_2 = case4_j_geq_2;
    for l in schedule {
        state.step(&mut table, l, true, field)?;
    }
    Ok(state)
}

/// Reference mode: no inference, table fully known, schedule long enough
/// that the answer is exact for an arbitrary periodic table. One period is
/// not enough: a member whose leading power sits at (s1, s2) has distinct
/// relation positions on the tile s + [0,r1) x [0,r2), and the points of
/// that tile past the bounds never appear in a single-period schedule (the
/// one-dimensional analogue is that a sequence of period r needs 2r terms).
/// Processing the doubled box [0,2r1) x [0,2r2) in recursion order covers
/// the tile of every possible member, and every skipped point beyond the
/// box repeats an already processed position by periodicity.
pub fn run_full(
    table: &SyndromeTable,
    order: MonomialOrder,
    field: &Field,
) -> Result<BmsState, BmsError> {
    if !table.is_fully_known() {
        return Err(BmsError::NotFullyKnown);
    }
    let (r1, r2) = table.bounds();
    let mut table = table.clone();
    let mut state = BmsState::init(order);
    for l in fundamental_points((2 * r1, 2 * r2), order) {
        state.step(&mut table, l, false, field)?;
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::tests::example_config;
    use crate::code::AbelianCode;
    use crate::poly2::QuotientPoly;

    fn example() -> (AbelianCode, SyndromeTable) {
        let code = AbelianCode::build(example_config()).unwrap();
        let e = QuotientPoly::parse("X1^2*X2^2 + X2", (5, 15), code.field()).unwrap();
        let table = code.syndromes_of(&e);
        (code, table)
    }

    #[test]
    fn initial_state() {
        let state = BmsState::init(MonomialOrder::Lex);
        assert_eq!(state.f_set(), &[BivariatePoly::one()]);
        assert!(state.g_set().is_empty());
        assert_eq!(state.delta().size(), 0);
        assert_eq!(state.trace().len(), 1);
        assert_eq!(state.trace()[0].l, None);
    }

    #[test]
    fn combine_matches_worked_step() {
        let code = AbelianCode::build(example_config()).unwrap();
        let field = code.field();
        let f = BivariatePoly::parse("X2 + a^13", field).unwrap();
        let rec = AuxiliaryRecord {
            g: BivariatePoly::one(),
            fail_point: point(0, 0),
            discrepancy: FieldElement::Exp(4),
            span: (point(1, 0), point(0, 1)),
        };
        let h = berlekamp_combine(
            &f,
            FieldElement::ONE,
            &rec,
            point(0, 2),
            MonomialOrder::Lex,
            field,
        );
        assert_eq!(h.to_text(MonomialOrder::Lex), "X2^2 + a^13*X2 + a^11");
    }

    #[test]
    fn combine_with_zero_discrepancy_is_a_shift() {
        let code = AbelianCode::build(example_config()).unwrap();
        let field = code.field();
        let f = BivariatePoly::parse("X2 + a^13", field).unwrap();
        let rec = AuxiliaryRecord {
            g: BivariatePoly::one(),
            fail_point: point(0, 0),
            discrepancy: FieldElement::Exp(4),
            span: (point(1, 0), point(0, 1)),
        };
        let h = berlekamp_combine(
            &f,
            FieldElement::Zero,
            &rec,
            point(0, 2),
            MonomialOrder::Lex,
            field,
        );
        assert_eq!(h.to_text(MonomialOrder::Lex), "X2^2 + a^13*X2");
    }

    /// The full restricted run over the worked example, row by row.
    #[test]
    fn golden_trace() {
        let (code, table) = example();
        let state = run_restricted(&table, 2, MonomialOrder::Lex, code.field()).unwrap();
        let rows: Vec<(Vec<String>, Vec<String>, Vec<LatticePoint>, bool)> = state
            .trace()
            .iter()
            .map(|snap| {
                (
                    snap.f.iter().map(|f| f.to_text(MonomialOrder::Lex)).collect(),
                    snap.g.iter().map(|r| r.g.to_text(MonomialOrder::Lex)).collect(),
                    snap.delta.defining_points().to_vec(),
                    snap.changed,
                )
            })
            .collect();

        let expect: Vec<(Vec<&str>, Vec<&str>, Vec<LatticePoint>, bool)> = vec![
            // initial
            (vec!["1"], vec![], vec![point(0, 0)], false),
            // (0,0)
            (vec!["X1", "X2"], vec!["1"], vec![point(1, 0), point(0, 1)], true),
            // (0,1)
            (
                vec!["X1", "X2 + a^13"],
                vec!["1"],
                vec![point(1, 0), point(0, 1)],
                true,
            ),
            // (0,2)
            (
                vec!["X1", "X2^2 + a^13*X2 + a^11"],
                vec!["X2 + a^13"],
                vec![point(1, 0), point(0, 2)],
                true,
            ),
            // (0,3)
            (
                vec!["X1", "X2^2 + a^5*X2 + a^3"],
                vec!["X2 + a^13"],
                vec![point(1, 0), point(0, 2)],
                true,
            ),
            // (1,0)
            (
                vec!["X1 + a^6*X2 + a^2", "X2^2 + a^5*X2 + a^3"],
                vec!["X2 + a^13"],
                vec![point(1, 0), point(0, 2)],
                true,
            ),
            // (1,1)
            (
                vec!["X1 + a^8*X2 + a^7", "X2^2 + a^5*X2 + a^3"],
                vec!["X2 + a^13"],
                vec![point(1, 0), point(0, 2)],
                true,
            ),
            // (2,0): Same
            (
                vec!["X1 + a^8*X2 + a^7", "X2^2 + a^5*X2 + a^3"],
                vec!["X2 + a^13"],
                vec![point(1, 0), point(0, 2)],
                false,
            ),
            // (3,0): Same
            (
                vec!["X1 + a^8*X2 + a^7", "X2^2 + a^5*X2 + a^3"],
                vec!["X2 + a^13"],
                vec![point(1, 0), point(0, 2)],
                false,
            ),
        ];

        assert_eq!(rows.len(), expect.len());
        for (i, ((f, g, dp, changed), (ef, eg, edp, echanged))) in
            rows.iter().zip(&expect).enumerate()
        {
            assert_eq!(f, ef, "F at trace row {i}");
            assert_eq!(g, eg, "G at trace row {i}");
            assert_eq!(dp, edp, "defining points at trace row {i}");
            assert_eq!(changed, echanged, "changed flag at trace row {i}");
        }

        // Processed schedule.
        let ls: Vec<Option<LatticePoint>> = state.trace().iter().map(|s| s.l).collect();
        assert_eq!(
            ls,
            vec![
                None,
                Some(point(0, 0)),
                Some(point(0, 1)),
                Some(point(0, 2)),
                Some(point(0, 3)),
                Some(point(1, 0)),
                Some(point(1, 1)),
                Some(point(2, 0)),
                Some(point(3, 0)),
            ]
        );

        // Footprint growth happened exactly at (0,0) and (0,2), both under
        // the (l1+1(l2+1) <= 2t+1 bound.
        assert_eq!(state.proc2_points(), &[point(0, 0), point(0, 2)]);
        for p in state.proc2_points() {
            assert!((p.n1 + 1) * (p.n2 + 1) <= 5);
        }
    }

    #[test]
    fn zero_table_never_updates() {
        let code = AbelianCode::build(example_config()).unwrap();
        let zero = QuotientPoly::zero((5, 15));
        let table = code.true_table_of(&zero);
        for order in [MonomialOrder::Lex, MonomialOrder::Graded] {
            let state = run_restricted(&table, 2, order, code.field()).unwrap();
            assert_eq!(state.f_set(), &[BivariatePoly::one()]);
            assert!(state.delta().is_empty());
            assert!(state.trace().iter().all(|s| !s.changed));

            let state = run_full(&table, order, code.field()).unwrap();
            assert_eq!(state.f_set(), &[BivariatePoly::one()]);
        }
    }

    #[test]
    fn single_error_footprint_is_one_point() {
        let code = AbelianCode::build(example_config()).unwrap();
        let field = code.field();
        for (p1, p2) in [(0u32, 0u32), (2, 7), (4, 14), (1, 3)] {
            let e = QuotientPoly::from_terms(
                (5, 15),
                [(point(p1, p2), FieldElement::ONE)],
                field,
            );
            let table = code.true_table_of(&e);
            for order in [MonomialOrder::Lex, MonomialOrder::Graded] {
                let state = run_full(&table, order, field).unwrap();
                assert_eq!(state.delta().size(), 1, "error at ({p1},{p2})");
            }
        }
    }

    #[test]
    fn restricted_agrees_with_full_on_example() {
        let (code, table) = example();
        let e = QuotientPoly::parse("X1^2*X2^2 + X2", (5, 15), code.field()).unwrap();
        let full_table = code.true_table_of(&e);
        for order in [MonomialOrder::Lex, MonomialOrder::Graded] {
            let restricted = run_restricted(&table, 2, order, code.field()).unwrap();
            let full = run_full(&full_table, order, code.field()).unwrap();
            let rf: Vec<String> = restricted
                .normalized_f(code.field())
                .iter()
                .map(|f| f.to_text(order))
                .collect();
            let ff: Vec<String> = full
                .normalized_f(code.field())
                .iter()
                .map(|f| f.to_text(order))
                .collect();
            assert_eq!(rf, ff, "{order}");
            assert_eq!(
                restricted.delta().defining_points(),
                full.delta().defining_points()
            );
        }
    }

    #[test]
    fn trace_footprint_is_monotone() {
        let (code, table) = example();
        let state = run_restricted(&table, 2, MonomialOrder::Lex, code.field()).unwrap();
        for w in state.trace().windows(2) {
            assert!(w[0].delta.size() <= w[1].delta.size());
            for p in w[0].delta.points() {
                assert!(w[1].delta.contains(p));
            }
        }
    }

    #[test]
    fn unknown_schedule_index_is_reported() {
        let code = AbelianCode::build(example_config()).unwrap();
        let table = SyndromeTable::new_unknown((5, 15), point(0, 13));
        let err = run_restricted(&table, 2, MonomialOrder::Lex, code.field()).unwrap_err();
        assert!(matches!(err, BmsError::ScheduleUnknown(p) if p == point(0, 0)));
    }

    #[test]
    fn full_run_requires_known_table() {
        let (code, table) = example();
        let err = run_full(&table, MonomialOrder::Lex, code.field()).unwrap_err();
        assert!(matches!(err, BmsError::NotFullyKnown));
    }

    #[test]
    fn final_members_generate_the_whole_array() {
        let (code, _) = example();
        let e = QuotientPoly::parse("X1^2*X2^2 + X2", (5, 15), code.field()).unwrap();
        let table = code.true_table_of(&e);
        // A point past every distinct relation position of every member.
        let beyond = point(1 << 16, 1 << 16);
        for order in [MonomialOrder::Lex, MonomialOrder::Graded] {
            let state = run_full(&table, order, code.field()).unwrap();
            for f in state.f_set() {
                assert_eq!(
                    table.is_valid_up_to(f, beyond, order, code.field()),
                    Some(true)
                );
            }
        }
    }
}
