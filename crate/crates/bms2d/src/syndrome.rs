//! Doubly periodic syndrome arrays with partially known entries, and the
//! linear recurring relation f[U]_n used to test candidate generators.

use crate::gf::{Field, FieldElement};
use crate::lattice::{b_delta, point, LatticePoint, MonomialOrder};
use crate::poly2::BivariatePoly;

/// One fundamental domain of a doubly periodic array over L. Entries are
/// known or unknown; all reads reduce mod (r1, r2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SyndromeTable {
    bounds: (u32, u32),
    tau: LatticePoint,
    entries: Vec<Option<FieldElement>>,
}

impl SyndromeTable {
    pub fn new_unknown(bounds: (u32, u32), tau: LatticePoint) -> SyndromeTable {
        SyndromeTable {
            bounds,
            tau,
            entries: vec![None; (bounds.0 * bounds.1) as usize],
        }
    }

    pub fn bounds(&self) -> (u32, u32) {
        self.bounds
    }

    /// The translation applied when the table was generated from a received
    /// word: u_n = received(alpha^(tau + n)).
    pub fn tau(&self) -> LatticePoint {
        self.tau
    }

    fn index(&self, n: LatticePoint) -> usize {
        let r = n.reduce_mod(self.bounds);
        (r.n1 * self.bounds.1 + r.n2) as usize
    }

    pub fn set(&mut self, n: LatticePoint, v: FieldElement) {
        let i = self.index(n);
        self.entries[i] = Some(v);
    }

    /// Periodic lookup; None when the entry is unknown.
    pub fn read(&self, n: LatticePoint) -> Option<FieldElement> {
        self.entries[self.index(n)]
    }

    pub fn known_count(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_fully_known(&self) -> bool {
        self.entries.iter().all(|e| e.is_some())
    }

    /// f[U]_n. Zero by definition when n is not above LP(f); otherwise the
    /// shifted coefficient sum, or None if it needs an unknown entry.
    pub fn apply(
        &self,
        f: &BivariatePoly,
        n: LatticePoint,
        order: MonomialOrder,
        field: &Field,
    ) -> Option<FieldElement> {
        let s = f.leading_power(order).expect("f[U]_n of the zero polynomial");
        if !s.leq_partial(n) {
            return Some(FieldElement::Zero);
        }
        let mut acc = FieldElement::Zero;
        for (m, c) in f.terms() {
            let u = self.read(m.add(n).sub(s))?;
            acc = field.add(acc, field.mul(c, u));
        }
        Some(acc)
    }

    /// True iff f[U]_n = 0 at every n ⪰ LP(f) before k in the order. The
    /// relation value is periodic in n on that region, so checking the tile
    /// LP(f) + [0,r1) x [0,r2) decides all of it; vacuously true when no
    /// such n exists. None if some required entry is unknown.
    pub fn is_valid_up_to(
        &self,
        f: &BivariatePoly,
        k: LatticePoint,
        order: MonomialOrder,
        field: &Field,
    ) -> Option<bool> {
        let s = f.leading_power(order).expect("validity of the zero polynomial");
        for n1 in s.n1..s.n1 + self.bounds.0 {
            for n2 in s.n2..s.n2 + self.bounds.1 {
                let n = point(n1, n2);
                if order.lt(n, k) && !self.apply(f, n, order, field)?.is_zero() {
                    return Some(false);
                }
            }
        }
        Some(true)
    }

    /// The table over B_delta as a matrix: one row per first coordinate,
    /// entries "a^k" / "0" / "?".
    pub fn dump(&self, delta: u32) -> String {
        let b = b_delta(delta, MonomialOrder::Lex).expect("delta >= 2");
        let mut rows: Vec<Vec<String>> = Vec::new();
        for n in b {
            if rows.len() <= n.n1 as usize {
                rows.resize(n.n1 as usize + 1, Vec::new());
            }
            rows[n.n1 as usize].push(match self.read(n) {
                None => "?".to_string(),
                Some(v) => v.to_string(),
            });
        }
        rows.iter()
            .map(|r| r.join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// All points of the fundamental rectangle sorted by the order; the schedule
/// of a full reference run.
pub fn fundamental_points(bounds: (u32, u32), order: MonomialOrder) -> Vec<LatticePoint> {
    let mut pts = Vec::with_capacity((bounds.0 * bounds.1) as usize);
    for n1 in 0..bounds.0 {
        for n2 in 0..bounds.1 {
            pts.push(point(n1, n2));
        }
    }
    pts.sort_by(|&a, &b| order.compare(a, b));
    pts
}
