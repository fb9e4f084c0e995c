//! Sparse bivariate polynomials over L and their images in the quotient
//! algebra F(r1,r2) = L[X1,X2]/(X1^r1 - 1, X2^r2 - 1).

use crate::gf::{Field, FieldElement};
use crate::lattice::{point, DeltaSet, LatticePoint, MonomialOrder};
use std::collections::BTreeMap;

/// Polynomial in L[X1,X2]: exponents unrestricted, zero coefficients never
/// stored.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct BivariatePoly {
    terms: BTreeMap<LatticePoint, FieldElement>,
}

impl BivariatePoly {
    pub fn zero() -> BivariatePoly {
        BivariatePoly::default()
    }

    pub fn one() -> BivariatePoly {
        BivariatePoly::monomial(LatticePoint::ORIGIN, FieldElement::ONE)
    }

    pub fn monomial(p: LatticePoint, c: FieldElement) -> BivariatePoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(p, c);
        }
        BivariatePoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, p: LatticePoint) -> FieldElement {
        self.terms.get(&p).copied().unwrap_or(FieldElement::Zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (LatticePoint, FieldElement)> + '_ {
        self.terms.iter().map(|(&p, &c)| (p, c))
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    fn accumulate(&mut self, p: LatticePoint, c: FieldElement, field: &Field) {
        let sum = field.add(self.coefficient(p), c);
        if sum.is_zero() {
            self.terms.remove(&p);
        } else {
            self.terms.insert(p, sum);
        }
    }

    pub fn add(&self, other: &BivariatePoly, field: &Field) -> BivariatePoly {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.accumulate(p, c, field);
        }
        out
    }

    pub fn sub(&self, other: &BivariatePoly, field: &Field) -> BivariatePoly {
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.accumulate(p, field.neg(c), field);
        }
        out
    }

    pub fn scale(&self, c: FieldElement, field: &Field) -> BivariatePoly {
        if c.is_zero() {
            return BivariatePoly::zero();
        }
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .map(|(&p, &a)| (p, field.mul(a, c)))
                .collect(),
        }
    }

    /// c * X^shift * self.
    pub fn mul_monomial(&self, shift: LatticePoint, c: FieldElement, field: &Field) -> BivariatePoly {
        if c.is_zero() {
            return BivariatePoly::zero();
        }
        BivariatePoly {
            terms: self
                .terms
                .iter()
                .map(|(&p, &a)| (p.add(shift), field.mul(a, c)))
                .collect(),
        }
    }

    /// The exponent of the leading power product under the given order;
    /// None for the zero polynomial.
    pub fn leading_power(&self, order: MonomialOrder) -> Option<LatticePoint> {
        self.terms.keys().copied().max_by(|&a, &b| order.compare(a, b))
    }

    pub fn leading_coefficient(&self, order: MonomialOrder) -> FieldElement {
        match self.leading_power(order) {
            Some(p) => self.coefficient(p),
            None => FieldElement::Zero,
        }
    }

    /// Canonical projection onto F(r1,r2): exponents folded, collisions
    /// summed.
    pub fn project(&self, bounds: (u32, u32), field: &Field) -> QuotientPoly {
        let mut out = QuotientPoly::zero(bounds);
        for (p, c) in self.terms() {
            out.accumulate(p.reduce_mod(bounds), c, field);
        }
        out
    }

    /// Terms rendered most-significant first under the given order, joined
    /// by " + ". Monomials print as "X1^i*X2^j" (exponent 1 abbreviated,
    /// zero exponents dropped); unit coefficients are dropped except on the
    /// constant term.
    pub fn to_text(&self, order: MonomialOrder) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut pts = self.support();
        pts.sort_by(|&a, &b| order.compare(b, a));
        let rendered: Vec<String> = pts
            .into_iter()
            .map(|p| {
                let c = self.coefficient(p);
                let mut factors = Vec::new();
                if c != FieldElement::ONE || p == LatticePoint::ORIGIN {
                    factors.push(c.to_string());
                }
                for (var, e) in [("X1", p.n1), ("X2", p.n2)] {
                    match e {
                        0 => {}
                        1 => factors.push(var.to_string()),
                        _ => factors.push(format!("{var}^{e}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        rendered.join(" + ")
    }

    /// Parses the `to_text` format. Accepts any term order and repeated
    /// coefficient factors.
    pub fn parse(text: &str, field: &Field) -> Result<BivariatePoly, String> {
        let text = text.trim();
        if text.is_empty() {
            return Err("empty polynomial text".to_string());
        }
        let mut out = BivariatePoly::zero();
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(format!("empty term in {text:?}"));
            }
            let mut coeff = FieldElement::ONE;
            let mut exp = LatticePoint::ORIGIN;
            for factor in term.split('*') {
                let factor = factor.trim();
                let (base, power) = match factor.split_once('^') {
                    Some((b, e)) => {
                        let e: u32 = e
                            .trim()
                            .parse()
                            .map_err(|_| format!("bad exponent in {factor:?}"))?;
                        (b.trim(), e)
                    }
                    None => (factor, 1),
                };
                match base {
                    "X1" => exp.n1 += power,
                    "X2" => exp.n2 += power,
                    "a" => coeff = field.mul(coeff, field.exp(power as u64)),
                    "0" if power == 1 => coeff = FieldElement::Zero,
                    "1" if power == 1 => {}
                    _ => return Err(format!("unrecognized factor {factor:?}")),
                }
            }
            out.accumulate(exp, coeff, field);
        }
        Ok(out)
    }
}

/// Element of F(r1,r2); exponents always reduced mod (r1, r2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuotientPoly {
    bounds: (u32, u32),
    terms: BTreeMap<LatticePoint, FieldElement>,
}

impl QuotientPoly {
    pub fn zero(bounds: (u32, u32)) -> QuotientPoly {
        QuotientPoly {
            bounds,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        bounds: (u32, u32),
        terms: impl IntoIterator<Item = (LatticePoint, FieldElement)>,
        field: &Field,
    ) -> QuotientPoly {
        let mut out = QuotientPoly::zero(bounds);
        for (p, c) in terms {
            out.accumulate(p.reduce_mod(bounds), c, field);
        }
        out
    }

    pub fn bounds(&self) -> (u32, u32) {
        self.bounds
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero coefficients (the Hamming weight as a word).
    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, p: LatticePoint) -> FieldElement {
        self.terms
            .get(&p.reduce_mod(self.bounds))
            .copied()
            .unwrap_or(FieldElement::Zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (LatticePoint, FieldElement)> + '_ {
        self.terms.iter().map(|(&p, &c)| (p, c))
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    fn accumulate(&mut self, p: LatticePoint, c: FieldElement, field: &Field) {
        debug_assert!(p.n1 < self.bounds.0 && p.n2 < self.bounds.1);
        let sum = field.add(self.terms.get(&p).copied().unwrap_or(FieldElement::Zero), c);
        if sum.is_zero() {
            self.terms.remove(&p);
        } else {
            self.terms.insert(p, sum);
        }
    }

    pub fn add(&self, other: &QuotientPoly, field: &Field) -> QuotientPoly {
        assert_eq!(self.bounds, other.bounds);
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.accumulate(p, c, field);
        }
        out
    }

    pub fn sub(&self, other: &QuotientPoly, field: &Field) -> QuotientPoly {
        assert_eq!(self.bounds, other.bounds);
        let mut out = self.clone();
        for (p, c) in other.terms() {
            out.accumulate(p, field.neg(c), field);
        }
        out
    }

    /// Sum of a_m x1^m1 x2^m2 over the support.
    pub fn evaluate(&self, at: (FieldElement, FieldElement), field: &Field) -> FieldElement {
        let mut acc = FieldElement::Zero;
        for (p, c) in self.terms() {
            let t = field.mul(
                c,
                field.mul(field.pow(at.0, p.n1 as u64), field.pow(at.1, p.n2 as u64)),
            );
            acc = field.add(acc, t);
        }
        acc
    }

    pub fn to_bivariate(&self) -> BivariatePoly {
        BivariatePoly {
            terms: self.terms.clone(),
        }
    }

    pub fn to_text(&self, order: MonomialOrder) -> String {
        self.to_bivariate().to_text(order)
    }

    pub fn parse(
        text: &str,
        bounds: (u32, u32),
        field: &Field,
    ) -> Result<QuotientPoly, String> {
        Ok(BivariatePoly::parse(text, field)?.project(bounds, field))
    }
}

/// All m in Z_r1 x Z_r2 at which every member of F vanishes at
/// (alpha1^m1, alpha2^m2), sorted structurally. An empty F accepts all of I.
pub fn defining_set_of_poly_set(
    polys: &[QuotientPoly],
    alpha: (FieldElement, FieldElement),
    bounds: (u32, u32),
    field: &Field,
) -> Vec<LatticePoint> {
    let mut out = Vec::new();
    for m1 in 0..bounds.0 {
        for m2 in 0..bounds.1 {
            let at = (field.pow(alpha.0, m1 as u64), field.pow(alpha.1, m2 as u64));
            if polys.iter().all(|f| f.evaluate(at, field).is_zero()) {
                out.push(point(m1, m2));
            }
        }
    }
    out
}

/// Reduces every non-leading term of every member into the staircase, using
/// the other members as reducers. Leading terms are untouched; the input
/// leading powers must be the staircase's defining points.
pub fn normalize_minimal_set(
    polys: &[BivariatePoly],
    delta: &DeltaSet,
    order: MonomialOrder,
    field: &Field,
) -> Vec<BivariatePoly> {
    let leads: Vec<LatticePoint> = polys
        .iter()
        .map(|f| f.leading_power(order).expect("zero member"))
        .collect();
    polys
        .iter()
        .enumerate()
        .map(|(i, f)| {
            let mut f = f.clone();
            loop {
                let target = f
                    .terms()
                    .filter(|&(p, _)| p != leads[i] && !delta.contains(p))
                    .max_by(|a, b| order.compare(a.0, b.0));
                let Some((p, c)) = target else { break };
                let (j, &s) = leads
                    .iter()
                    .enumerate()
                    .find(|&(_, &s)| s.leq_partial(p))
                    .expect("tail exponent not covered by any leading power");
                let factor = field.div(c, polys[j].leading_coefficient(order));
                f = f.sub(&polys[j].mul_monomial(p.sub(s), factor, field), field);
            }
            f
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::FieldSpec;

    fn gf16() -> Field {
        Field::new(FieldSpec {
            p: 2,
            m: 1,
            s: 4,
            modulus: vec![1, 1, 0, 0, 1],
        })
        .unwrap()
    }

    fn parse(text: &str, field: &Field) -> BivariatePoly {
        BivariatePoly::parse(text, field).unwrap()
    }

    #[test]
    fn leading_powers() {
        let f = gf16();
        let p = parse("X1 + a^6*X2 + a^2", &f);
        assert_eq!(p.leading_power(MonomialOrder::Lex), Some(point(1, 0)));
        let p = parse("X2^2 + a^5*X2 + a^3", &f);
        assert_eq!(p.leading_power(MonomialOrder::Lex), Some(point(0, 2)));
        let p = parse("a^7", &f);
        assert_eq!(p.leading_power(MonomialOrder::Graded), Some(point(0, 0)));
        // Graded puts X2^2 above X1.
        let p = parse("X1 + X2^2", &f);
        assert_eq!(p.leading_power(MonomialOrder::Graded), Some(point(0, 2)));
        assert_eq!(p.leading_power(MonomialOrder::Lex), Some(point(1, 0)));
        assert_eq!(BivariatePoly::zero().leading_power(MonomialOrder::Lex), None);
    }

    #[test]
    fn leading_power_shifts_with_monomials() {
        let f = gf16();
        let p = parse("X1*X2 + a^3*X2^2 + 1", &f);
        for order in [MonomialOrder::Lex, MonomialOrder::Graded] {
            let lp = p.leading_power(order).unwrap();
            let shifted = p.mul_monomial(point(2, 5), FieldElement::ONE, &f);
            assert_eq!(shifted.leading_power(order), Some(lp.add(point(2, 5))));
        }
    }

    #[test]
    fn evaluate_error_polynomial() {
        let f = gf16();
        let e = parse("X1^2*X2^2 + X2", &f).project((5, 15), &f);
        let beta = f.exp(13);
        let v = e.evaluate((FieldElement::ONE, beta), &f);
        assert_eq!(v, FieldElement::Exp(4));
        assert_eq!(
            QuotientPoly::zero((5, 15)).evaluate((beta, beta), &f),
            FieldElement::Zero
        );
    }

    #[test]
    fn projection_folds() {
        let f = gf16();
        let p = parse("X1^5", &f).project((5, 15), &f);
        assert_eq!(p, parse("1", &f).project((5, 15), &f));

        let p = parse("X1^6 + X1", &f).project((5, 15), &f);
        assert!(p.is_zero());

        let q = parse("X1^2*X2^2 + X2", &f);
        assert_eq!(q.project((5, 15), &f).to_bivariate(), q);

        // X1^r1 == 1 survives evaluation at any point of the torus.
        let alpha = f.element_of_order(5).unwrap();
        let p = parse("X1^5", &f).project((5, 15), &f);
        assert_eq!(p.evaluate((f.pow(alpha, 3), f.exp(2)), &f), FieldElement::ONE);
    }

    #[test]
    fn projection_commutes_with_evaluation() {
        use rand::{Rng, SeedableRng};
        let f = gf16();
        let alpha = f.element_of_order(5).unwrap();
        let beta = f.element_of_order(15).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let mut p = BivariatePoly::zero();
            for _ in 0..rng.gen_range(0..8) {
                let pt = point(rng.gen_range(0..12), rng.gen_range(0..30));
                let c = FieldElement::Exp(rng.gen_range(0..15));
                p.accumulate(pt, c, &f);
            }
            let at = (
                f.pow(alpha, rng.gen_range(0..5)),
                f.pow(beta, rng.gen_range(0..15)),
            );
            let direct = {
                let mut acc = FieldElement::Zero;
                for (m, c) in p.terms() {
                    let t = f.mul(c, f.mul(f.pow(at.0, m.n1 as u64), f.pow(at.1, m.n2 as u64)));
                    acc = f.add(acc, t);
                }
                acc
            };
            assert_eq!(p.project((5, 15), &f).evaluate(at, &f), direct);
        }
    }

    #[test]
    fn vanishing_locus() {
        let f = gf16();
        let alpha = (f.element_of_order(5).unwrap(), f.element_of_order(15).unwrap());

        let one = parse("1", &f).project((5, 15), &f);
        assert!(defining_set_of_poly_set(&[one], alpha, (5, 15), &f).is_empty());

        let all = defining_set_of_poly_set(&[], alpha, (5, 15), &f);
        assert_eq!(all.len(), 75);

        // X1 + 1 vanishes exactly where alpha1^m1 = 1, i.e. m1 = 0.
        let p = parse("X1 + 1", &f).project((5, 15), &f);
        let d = defining_set_of_poly_set(&[p], alpha, (5, 15), &f);
        assert_eq!(d.len(), 15);
        assert!(d.iter().all(|m| m.n1 == 0));
    }

    #[test]
    fn tail_reduction() {
        let f = gf16();
        let delta = DeltaSet::new(vec![point(1, 0), point(0, 2)]).unwrap();
        let set = vec![parse("X1 + X2^2", &f), parse("X2^2 + 1", &f)];
        let reduced = normalize_minimal_set(&set, &delta, MonomialOrder::Lex, &f);
        assert_eq!(reduced[0], parse("X1 + 1", &f));
        assert_eq!(reduced[1], parse("X2^2 + 1", &f));

        let id = vec![BivariatePoly::one()];
        assert_eq!(
            normalize_minimal_set(&id, &DeltaSet::empty(), MonomialOrder::Lex, &f),
            id
        );

        // Already-normalized members come back unchanged.
        let set = vec![parse("X1 + a^8*X2 + a^7", &f), parse("X2^2 + a^5*X2 + a^3", &f)];
        assert_eq!(
            normalize_minimal_set(&set, &delta, MonomialOrder::Lex, &f),
            set
        );
    }

    #[test]
    fn text_round_trip() {
        let f = gf16();
        for text in [
            "X1^2*X2^2 + X2",
            "X1 + a^6*X2 + a^2",
            "X2^2 + a^13*X2 + a^11",
            "a^5",
            "1",
            "0",
            "X1^3 + a*X1*X2 + a^14",
        ] {
            let p = parse(text, &f);
            assert_eq!(p.to_text(MonomialOrder::Lex), text);
            assert_eq!(BivariatePoly::parse(&p.to_text(MonomialOrder::Lex), &f).unwrap(), p);
        }
        // Graded rendering reorders terms.
        let p = parse("X1 + X2^2", &f);
        assert_eq!(p.to_text(MonomialOrder::Graded), "X2^2 + X1");
        // Char-2 folding during parse.
        assert!(parse("X1 + X1", &f).is_zero());
        assert!(BivariatePoly::parse("X3 + 1", &f).is_err());
        assert!(BivariatePoly::parse("", &f).is_err());
    }
}
