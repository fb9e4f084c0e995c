//! Abelian codes in F(r1,r2) cut out by q-orbit-closed defining sets, the
//! hyperbolic-like validation, a kernel-sampling encoder, syndrome
//! extraction, and a brute-force minimum distance search.

use crate::gf::{Field, FieldElement, FieldError, FieldSpec};
use crate::lattice::{b_delta, point, LatticePoint, MonomialOrder};
use crate::poly2::QuotientPoly;
use crate::syndrome::SyndromeTable;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use thiserror::Error;

/// Declarative description of a code; the canonical on-disk format (TOML).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CodeConfig {
    pub name: String,
    pub field: FieldSpec,
    /// (r1, r2); both must be coprime to p and divide |L| - 1.
    pub bounds: (u32, u32),
    /// Representatives of the q-orbits whose union is the defining set.
    pub orbits: Vec<(u32, u32)>,
    /// Exponents (e1, e2) of the global primitive element: alpha_i = a^{e_i}
    /// must have exact order r_i.
    pub alpha: (u32, u32),
    pub tau: (u32, u32),
    /// Designed distance; 0 disables the hyperbolic-like check.
    pub delta: u32,
}

#[derive(Debug, Error)]
pub enum CodeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("bounds must be positive")]
    ZeroBounds,
    #[error("non-semisimple parameters: {r} shares the characteristic {p}")]
    NonSemisimple { r: u32, p: u32 },
    #[error("alpha{index} = a^{exponent} has order {got}, but r{index} = {want}")]
    AlphaOrder {
        index: u8,
        exponent: u32,
        got: u32,
        want: u32,
    },
    #[error("tau {0} lies outside the index rectangle")]
    TauOutOfRange(LatticePoint),
    #[error(
        "hyperbolic-like condition fails for delta = {delta}: index {missing} \
         (= tau + {offset}) is not in the defining set"
    )]
    HyperbolicLike {
        delta: u32,
        missing: LatticePoint,
        offset: LatticePoint,
    },
    #[error("config parse error: {0}")]
    Parse(String),
}

/// Orbit of coordinatewise multiplication by q modulo (r1, r2).
pub fn q_orbit(a: LatticePoint, q: u64, bounds: (u32, u32)) -> BTreeSet<LatticePoint> {
    let mut orbit = BTreeSet::new();
    let mut cur = a.reduce_mod(bounds);
    while orbit.insert(cur) {
        cur = point(
            (cur.n1 as u64 * q % bounds.0 as u64) as u32,
            (cur.n2 as u64 * q % bounds.1 as u64) as u32,
        );
    }
    orbit
}

/// Result of the brute-force distance search.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Distance {
    Exact(u32),
    /// Enumeration exhausted all words of smaller weight without a hit.
    AtLeast(u32),
    /// The zero code has no nonzero word.
    Infinite,
}

#[derive(Debug)]
pub struct AbelianCode {
    config: CodeConfig,
    field: Field,
    alpha: (FieldElement, FieldElement),
    tau: LatticePoint,
    defining_set: BTreeSet<LatticePoint>,
    /// GF(p)-basis of the codeword space; each vector has one digit per
    /// (position, subfield basis element) pair: index (n1*r2+n2)*m + j.
    kernel: Vec<Vec<u32>>,
    /// Generator of GF(q)* inside L; {g^0..g^{m-1}} is the GF(p)-basis of
    /// GF(q) used by the encoder.
    subfield_gen: FieldElement,
}

impl AbelianCode {
    pub fn build(config: CodeConfig) -> Result<AbelianCode, CodeError> {
        let field = Field::new(config.field.clone())?;
        let (r1, r2) = config.bounds;
        if r1 == 0 || r2 == 0 {
            return Err(CodeError::ZeroBounds);
        }
        let p = field.characteristic();
        for r in [r1, r2] {
            if r % p == 0 {
                return Err(CodeError::NonSemisimple { r, p });
            }
        }
        let order = field.order();
        for (index, (e, r)) in [(config.alpha.0, r1), (config.alpha.1, r2)].into_iter().enumerate()
        {
            let got = order / gcd(e % order, order);
            if got != r {
                return Err(CodeError::AlphaOrder {
                    index: index as u8 + 1,
                    exponent: e,
                    got,
                    want: r,
                });
            }
        }
        let alpha = (field.exp(config.alpha.0 as u64), field.exp(config.alpha.1 as u64));
        let tau = point(config.tau.0, config.tau.1);
        if tau.n1 >= r1 || tau.n2 >= r2 {
            return Err(CodeError::TauOutOfRange(tau));
        }

        let q = field.q();
        let mut defining_set = BTreeSet::new();
        for &(a1, a2) in &config.orbits {
            defining_set.extend(q_orbit(point(a1, a2), q, config.bounds));
        }

        if config.delta >= 2 {
            for offset in b_delta(config.delta, MonomialOrder::Lex).expect("delta >= 2") {
                let idx = tau.add(offset).reduce_mod(config.bounds);
                if !defining_set.contains(&idx) {
                    return Err(CodeError::HyperbolicLike {
                        delta: config.delta,
                        missing: idx,
                        offset,
                    });
                }
            }
        }

        let subfield_gen = field.element_of_order((q - 1) as u32)?;
        let kernel = codeword_kernel(&field, config.bounds, &defining_set, alpha, subfield_gen);
        let m = config.field.m as usize;
        let expected = m * ((r1 * r2) as usize - defining_set.len());
        assert_eq!(
            kernel.len(),
            expected,
            "kernel dimension disagrees with |I| - |D|"
        );

        Ok(AbelianCode {
            config,
            field,
            alpha,
            tau,
            defining_set,
            kernel,
            subfield_gen,
        })
    }

    pub fn config(&self) -> &CodeConfig {
        &self.config
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn alpha(&self) -> (FieldElement, FieldElement) {
        self.alpha
    }

    pub fn bounds(&self) -> (u32, u32) {
        self.config.bounds
    }

    pub fn tau(&self) -> LatticePoint {
        self.tau
    }

    pub fn delta(&self) -> u32 {
        self.config.delta
    }

    pub fn defining_set(&self) -> &BTreeSet<LatticePoint> {
        &self.defining_set
    }

    pub fn dimension_over_p(&self) -> usize {
        self.kernel.len()
    }

    pub fn dimension_over_q(&self) -> usize {
        self.kernel.len() / self.config.field.m as usize
    }

    pub fn is_zero_code(&self) -> bool {
        self.kernel.is_empty()
    }

    /// alpha^n = (alpha1^n1, alpha2^n2).
    pub fn alpha_power(&self, n: LatticePoint) -> (FieldElement, FieldElement) {
        (
            self.field.pow(self.alpha.0, n.n1 as u64),
            self.field.pow(self.alpha.1, n.n2 as u64),
        )
    }

    /// True iff the word vanishes on the whole defining set.
    pub fn contains(&self, word: &QuotientPoly) -> bool {
        self.defining_set
            .iter()
            .all(|&d| word.evaluate(self.alpha_power(d), &self.field).is_zero())
    }

    fn word_from_digits(&self, digits: &[u32]) -> QuotientPoly {
        let m = self.config.field.m as usize;
        let (r1, r2) = self.config.bounds;
        let mut terms = Vec::new();
        for n1 in 0..r1 {
            for n2 in 0..r2 {
                let base = ((n1 * r2 + n2) as usize) * m;
                let mut c = FieldElement::Zero;
                for j in 0..m {
                    let d = digit_element(&self.field, digits[base + j]);
                    let basis = self.field.pow(self.subfield_gen, j as u64);
                    c = self.field.add(c, self.field.mul(d, basis));
                }
                if !c.is_zero() {
                    terms.push((point(n1, n2), c));
                }
            }
        }
        QuotientPoly::from_terms(self.config.bounds, terms, &self.field)
    }

    /// A codeword sampled uniformly from the kernel basis span;
    /// deterministic per seed. The zero code always yields the zero word.
    pub fn random_codeword(&self, seed: u64) -> QuotientPoly {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p = self.field.characteristic();
        let m = self.config.field.m as usize;
        let n_digits = (self.config.bounds.0 * self.config.bounds.1) as usize * m;
        let mut digits = vec![0u32; n_digits];
        for basis_vec in &self.kernel {
            let lambda = rng.gen_range(0..p);
            if lambda != 0 {
                for (d, &b) in digits.iter_mut().zip(basis_vec) {
                    *d = (*d + lambda * b) % p;
                }
            }
        }
        self.word_from_digits(&digits)
    }

    /// A word with exactly `weight` nonzero GF(q) coefficients at distinct
    /// random positions.
    pub fn random_error_word(&self, rng: &mut impl Rng, weight: usize) -> QuotientPoly {
        let (r1, r2) = self.config.bounds;
        let n = (r1 * r2) as usize;
        assert!(weight <= n);
        let q = self.field.q();
        let mut positions = BTreeSet::new();
        while positions.len() < weight {
            positions.insert(rng.gen_range(0..n) as u32);
        }
        let terms: Vec<(LatticePoint, FieldElement)> = positions
            .into_iter()
            .map(|idx| {
                let value = self.field.pow(self.subfield_gen, rng.gen_range(0..q - 1));
                (point(idx / r2, idx % r2), value)
            })
            .collect();
        QuotientPoly::from_terms(self.config.bounds, terms, &self.field)
    }

    /// Syndrome table of a received word: u_n = received(alpha^(tau+n)),
    /// known exactly where tau+n falls in the defining set.
    pub fn syndromes_of(&self, received: &QuotientPoly) -> SyndromeTable {
        let mut table = SyndromeTable::new_unknown(self.config.bounds, self.tau);
        for n1 in 0..self.config.bounds.0 {
            for n2 in 0..self.config.bounds.1 {
                let n = point(n1, n2);
                let shifted = self.tau.add(n).reduce_mod(self.config.bounds);
                if self.defining_set.contains(&shifted) {
                    table.set(n, received.evaluate(self.alpha_power(shifted), &self.field));
                }
            }
        }
        table
    }

    /// The fully known table afforded by a word (reference mode: every
    /// entry evaluated, ignoring the defining set).
    pub fn true_table_of(&self, word: &QuotientPoly) -> SyndromeTable {
        let mut table = SyndromeTable::new_unknown(self.config.bounds, self.tau);
        for n1 in 0..self.config.bounds.0 {
            for n2 in 0..self.config.bounds.1 {
                let n = point(n1, n2);
                let shifted = self.tau.add(n).reduce_mod(self.config.bounds);
                table.set(n, word.evaluate(self.alpha_power(shifted), &self.field));
            }
        }
        table
    }

    /// Minimum distance by enumeration. When the whole codeword space fits
    /// in the budget the answer is exact; otherwise low weights are tried in
    /// increasing order until the budget runs out, certifying a lower bound.
    pub fn min_distance_bruteforce(&self, budget: u64) -> Distance {
        if self.is_zero_code() {
            return Distance::Infinite;
        }
        let p = self.field.characteristic() as u64;
        let k = self.kernel.len() as u32;
        if k < 63 && p.saturating_pow(k) <= budget {
            return Distance::Exact(self.min_distance_full_enumeration());
        }
        self.min_distance_low_weight(budget)
    }

    fn min_distance_full_enumeration(&self) -> u32 {
        let p = self.field.characteristic();
        let m = self.config.field.m as usize;
        let n_digits = self.kernel[0].len();
        let n_positions = n_digits / m;
        let mut best = n_positions as u32 + 1;
        // Odometer over GF(p)^k with incremental vector updates.
        let k = self.kernel.len();
        let mut lambda = vec![0u32; k];
        let mut word = vec![0u32; n_digits];
        loop {
            // Increment the odometer, updating the running combination.
            let mut i = 0;
            loop {
                if i == k {
                    return best;
                }
                lambda[i] += 1;
                for (w, &b) in word.iter_mut().zip(&self.kernel[i]) {
                    *w = (*w + b) % p;
                }
                if lambda[i] < p {
                    break;
                }
                lambda[i] = 0;
                i += 1;
            }
            let weight = (0..n_positions)
                .filter(|&pos| word[pos * m..(pos + 1) * m].iter().any(|&d| d != 0))
                .count() as u32;
            if weight > 0 && weight < best {
                best = weight;
            }
        }
    }

    fn min_distance_low_weight(&self, budget: u64) -> Distance {
        let (r1, r2) = self.config.bounds;
        let n = (r1 * r2) as usize;
        let q = self.field.q();
        let values_per_pos = (q - 1) as usize;
        let defs: Vec<(FieldElement, FieldElement)> = self
            .defining_set
            .iter()
            .map(|&d| self.alpha_power(d))
            .collect();
        let mut spent: u64 = 0;
        for w in 1..=n {
            // Candidates at this weight: C(n, w) * (q-1)^w.
            let combos = binomial(n as u64, w as u64)
                .and_then(|c| c.checked_mul((values_per_pos as u64).checked_pow(w as u32)?));
            match combos {
                Some(c) if spent.saturating_add(c) <= budget => spent += c,
                _ => return Distance::AtLeast(w as u32),
            }
            if self.exists_codeword_of_weight(w, &defs, values_per_pos) {
                return Distance::Exact(w as u32);
            }
        }
        Distance::Exact(n as u32 + 1) // unreachable for nonzero codes
    }

    fn exists_codeword_of_weight(
        &self,
        w: usize,
        defs: &[(FieldElement, FieldElement)],
        values_per_pos: usize,
    ) -> bool {
        let (_, r2) = self.config.bounds;
        let n = (self.config.bounds.0 * r2) as usize;
        let field = &self.field;
        let mut support: Vec<usize> = (0..w).collect();
        loop {
            let pts: Vec<LatticePoint> = support
                .iter()
                .map(|&idx| point(idx as u32 / r2, idx as u32 % r2))
                .collect();
            let mut vals = vec![0usize; w];
            loop {
                let word: Vec<(LatticePoint, FieldElement)> = pts
                    .iter()
                    .zip(&vals)
                    .map(|(&pt, &v)| (pt, field.pow(self.subfield_gen, v as u64)))
                    .collect();
                let vanishes = defs.iter().all(|&(a1, a2)| {
                    let mut acc = FieldElement::Zero;
                    for &(pt, c) in &word {
                        let t = field.mul(
                            c,
                            field.mul(field.pow(a1, pt.n1 as u64), field.pow(a2, pt.n2 as u64)),
                        );
                        acc = field.add(acc, t);
                    }
                    acc.is_zero()
                });
                if vanishes {
                    return true;
                }
                // Next value assignment.
                let mut i = 0;
                while i < w {
                    vals[i] += 1;
                    if vals[i] < values_per_pos {
                        break;
                    }
                    vals[i] = 0;
                    i += 1;
                }
                if i == w {
                    break;
                }
            }
            // Next support combination.
            let mut i = w;
            loop {
                if i == 0 {
                    return false;
                }
                i -= 1;
                if support[i] != i + n - w {
                    break;
                }
            }
            support[i] += 1;
            for j in i + 1..w {
                support[j] = support[j - 1] + 1;
            }
        }
    }
}

/// x * 1 as an element of L, for a GF(p) digit x.
fn digit_element(field: &Field, x: u32) -> FieldElement {
    let mut acc = FieldElement::Zero;
    for _ in 0..x {
        acc = field.add(acc, FieldElement::ONE);
    }
    acc
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn binomial(n: u64, k: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// GF(p)-basis of the space of GF(q)-words vanishing on alpha^D. Unknowns:
/// m digits per position (coordinates over {g^j}); equations: the m*s
/// GF(p)-coordinates of each defining-set evaluation.
fn codeword_kernel(
    field: &Field,
    bounds: (u32, u32),
    defining_set: &BTreeSet<LatticePoint>,
    alpha: (FieldElement, FieldElement),
    subfield_gen: FieldElement,
) -> Vec<Vec<u32>> {
    let (r1, r2) = bounds;
    let m = field.spec().m as usize;
    let n_vars = (r1 * r2) as usize * m;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for &d in defining_set {
        let at = (
            field.pow(alpha.0, d.n1 as u64),
            field.pow(alpha.1, d.n2 as u64),
        );
        let mut block: Vec<Vec<u32>> =
            vec![vec![0u32; n_vars]; field.degree() as usize];
        for n1 in 0..r1 {
            for n2 in 0..r2 {
                let monomial = field.mul(
                    field.pow(at.0, n1 as u64),
                    field.pow(at.1, n2 as u64),
                );
                for j in 0..m {
                    let coeff = field.mul(monomial, field.pow(subfield_gen, j as u64));
                    let var = ((n1 * r2 + n2) as usize) * m + j;
                    for (row, &digit) in block.iter_mut().zip(field.coeffs(coeff).iter()) {
                        row[var] = digit;
                    }
                }
            }
        }
        rows.extend(block);
    }
    kernel_of(rows, n_vars, field.characteristic())
}

/// Kernel basis of a matrix over GF(p) by row reduction.
fn kernel_of(mut rows: Vec<Vec<u32>>, n_vars: usize, p: u32) -> Vec<Vec<u32>> {
    let inv = |x: u32| -> u32 {
        // Fermat inverse; p is a small prime.
        let mut acc = 1u64;
        let mut base = x as u64 % p as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u64;
            }
            base = base * base % p as u64;
            e >>= 1;
        }
        acc as u32
    };
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..n_vars {
        let Some(r) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, r);
        let scale = inv(rows[rank][col]);
        for v in rows[rank].iter_mut() {
            *v = *v * scale % p;
        }
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let factor = rows[r][col];
                for c in 0..n_vars {
                    let sub = factor * rows[rank][c] % p;
                    rows[r][c] = (rows[r][c] + p - sub) % p;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let mut basis = Vec::new();
    let pivot_of_col: std::collections::HashMap<usize, usize> = pivot_cols
        .iter()
        .enumerate()
        .map(|(r, &c)| (c, r))
        .collect();
    for free in 0..n_vars {
        if pivot_of_col.contains_key(&free) {
            continue;
        }
        let mut v = vec![0u32; n_vars];
        v[free] = 1;
        for (&col, &r) in &pivot_of_col {
            v[col] = (p - rows[r][free] % p) % p;
        }
        basis.push(v);
    }
    basis
}
