//! Randomized cross-module invariants. Deterministic unit tests live next
//! to each module; these drive the same contracts over generated inputs.

use bms2d::bms::run_full;
use bms2d::code::{q_orbit, AbelianCode, CodeConfig};
use bms2d::gf::{Field, FieldElement, FieldSpec};
use bms2d::lattice::{b_delta, point, DeltaSet, LatticePoint, MonomialOrder};
use bms2d::poly2::{defining_set_of_poly_set, BivariatePoly, QuotientPoly};
use bms2d::syndrome::SyndromeTable;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::path::Path;
use std::sync::OnceLock;

fn gf16() -> &'static Field {
    static FIELD: OnceLock<Field> = OnceLock::new();
    FIELD.get_or_init(|| {
        Field::new(FieldSpec {
            p: 2,
            m: 1,
            s: 4,
            modulus: vec![1, 1, 0, 0, 1],
        })
        .unwrap()
    })
}

fn load_code(file: &str) -> AbelianCode {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(file);
    let config: CodeConfig = toml::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    AbelianCode::build(config).unwrap()
}

fn test_codes() -> &'static [AbelianCode] {
    static CODES: OnceLock<Vec<AbelianCode>> = OnceLock::new();
    CODES.get_or_init(|| {
        ["example_f2_5x15.toml", "f4_5x15_d5.toml", "f2_7x9_d7.toml"]
            .iter()
            .map(|f| load_code(f))
            .collect()
    })
}

fn element(exp: Option<u32>) -> FieldElement {
    match exp {
        None => FieldElement::Zero,
        Some(k) => gf16().exp(k as u64),
    }
}

/// Fully known table over GF(16) with the given bounds.
fn table_from(bounds: (u32, u32), entries: &[Option<u32>]) -> SyndromeTable {
    let mut table = SyndromeTable::new_unknown(bounds, point(0, 0));
    let mut it = entries.iter().cycle();
    for n1 in 0..bounds.0 {
        for n2 in 0..bounds.1 {
            table.set(point(n1, n2), element(*it.next().unwrap()));
        }
    }
    table
}

fn arb_bounds() -> impl Strategy<Value = (u32, u32)> {
    (2u32..=5, 2u32..=7)
}

fn arb_entries() -> impl Strategy<Value = Vec<Option<u32>>> {
    prop::collection::vec(prop::option::of(0u32..15), 35)
}

fn arb_poly() -> impl Strategy<Value = Vec<((u32, u32), u32)>> {
    prop::collection::btree_map((0u32..4, 0u32..6), 0u32..15, 1..6)
        .prop_map(|m| m.into_iter().collect())
}

fn poly_from(terms: &[((u32, u32), u32)]) -> BivariatePoly {
    let mut f = BivariatePoly::zero();
    for &((a, b), k) in terms {
        f = f.add(&BivariatePoly::monomial(point(a, b), element(Some(k))), gf16());
    }
    f
}

/// Staircase heights, non-increasing with no trailing zeros, and the
/// minimal points of the complement in column order.
fn staircase(mut heights: Vec<u32>) -> (Vec<u32>, Vec<LatticePoint>) {
    heights.sort_unstable_by(|a, b| b.cmp(a));
    while heights.last() == Some(&0) {
        heights.pop();
    }
    let mut ascending = Vec::new();
    for (i, &h) in heights.iter().enumerate() {
        if i == 0 || h < heights[i - 1] {
            ascending.push(point(i as u32, h));
        }
    }
    ascending.push(point(heights.len() as u32, 0));
    (heights, ascending)
}

proptest! {
    /// Membership agrees with the height profile and with the union of the
    /// rectangles spanned by consecutive defining points; the region is
    /// downward closed and size() counts it exactly.
    #[test]
    fn staircase_membership_matches_naive_enumerators(
        raw in prop::collection::vec(0u32..8, 0..8),
        probe in (0u32..12, 0u32..12),
    ) {
        let (heights, ascending) = staircase(raw);
        // The constructor lists defining points with first coordinates
        // strictly decreasing to 0.
        let delta = DeltaSet::new(ascending.iter().rev().copied().collect()).unwrap();

        let m = point(probe.0, probe.1);
        let by_heights =
            (m.n1 as usize) < heights.len() && m.n2 < heights[m.n1 as usize];
        let by_rectangles = ascending.windows(2).any(|w| m.n1 < w[1].n1 && m.n2 < w[0].n2);
        prop_assert_eq!(delta.contains(m), by_heights);
        prop_assert_eq!(delta.contains(m), by_rectangles);

        if delta.contains(m) {
            for n1 in 0..=m.n1 {
                for n2 in 0..=m.n2 {
                    prop_assert!(delta.contains(point(n1, n2)));
                }
            }
        }
        prop_assert_eq!(delta.size(), heights.iter().map(|&h| h as u64).sum::<u64>());
    }

    /// f[U] is additive when both summands share a leading power that
    /// survives the sum, and is unchanged by monomial shifts.
    #[test]
    fn apply_is_linear_and_shift_invariant(
        bounds in arb_bounds(),
        entries in arb_entries(),
        terms in arb_poly(),
        tail in arb_poly(),
        lead2 in 0u32..14,
        shift in (0u32..3, 0u32..3),
        n in (0u32..10, 0u32..10),
    ) {
        let field = gf16();
        let table = table_from(bounds, &entries);
        let n = point(n.0, n.1);
        for order in [MonomialOrder::Lex, MonomialOrder::Graded] {
            let f = poly_from(&terms);
            let s = f.leading_power(order).unwrap();
            // Same leading power, different leading coefficient: the sum
            // keeps s as its leading power.
            let mut g = BivariatePoly::zero();
            for (m, c) in poly_from(&tail).terms() {
                if order.lt(m, s) {
                    g = g.add(&BivariatePoly::monomial(m, c), field);
                }
            }
            let cf = f.coefficient(s);
            let other = field.mul(cf, field.exp(lead2 as u64 + 1));
            g = g.add(&BivariatePoly::monomial(s, other), field);

            let h = f.add(&g, field);
            prop_assert_eq!(h.leading_power(order), Some(s));
            let sum = field.add(
                table.apply(&f, n, order, field).unwrap(),
                table.apply(&g, n, order, field).unwrap(),
            );
            prop_assert_eq!(table.apply(&h, n, order, field).unwrap(), sum);

            let r = point(shift.0, shift.1);
            let shifted = f.mul_monomial(r, FieldElement::ONE, field);
            if s.add(r).leq_partial(n) {
                prop_assert_eq!(
                    table.apply(&shifted, n, order, field).unwrap(),
                    table.apply(&f, n, order, field).unwrap(),
                );
            }
        }
    }

    /// Evaluation at points of the ambient torus only sees exponents mod
    /// (r1, r2), so it commutes with projection into the quotient.
    #[test]
    fn projection_commutes_with_evaluation(
        terms in prop::collection::btree_map((0u32..40, 0u32..40), 0u32..15, 1..8),
        at in (0u32..5, 0u32..15),
    ) {
        let field = gf16();
        let bounds = (5, 15);
        let alpha = (field.exp(3), field.exp(1));
        let at = (field.pow(alpha.0, at.0 as u64), field.pow(alpha.1, at.1 as u64));

        let mut f = BivariatePoly::zero();
        for (&(a, b), &k) in &terms {
            f = f.add(&BivariatePoly::monomial(point(a, b), element(Some(k))), field);
        }
        let direct = f.terms().fold(FieldElement::Zero, |acc, (p, c)| {
            let term = field.mul(
                c,
                field.mul(field.pow(at.0, p.n1 as u64), field.pow(at.1, p.n2 as u64)),
            );
            field.add(acc, term)
        });
        prop_assert_eq!(f.project(bounds, field).evaluate(at, field), direct);
    }

    /// The orbit of a point is the closure chain itself, and multiplying
    /// every member by q permutes the orbit.
    #[test]
    fn q_orbit_is_the_minimal_closed_superset(
        seed in (0u32..9, 0u32..21),
        q in prop_oneof![Just(2u64), Just(4), Just(8)],
        bounds in prop_oneof![Just((5u32, 15u32)), Just((7, 9)), Just((9, 21))],
    ) {
        let seed = point(seed.0, seed.1);
        let orbit = q_orbit(seed, q, bounds);

        let step = |p: LatticePoint| point(
            (p.n1 as u64 * q % bounds.0 as u64) as u32,
            (p.n2 as u64 * q % bounds.1 as u64) as u32,
        );
        let mut chain = BTreeSet::new();
        let mut cur = seed.reduce_mod(bounds);
        while chain.insert(cur) {
            cur = step(cur);
        }
        prop_assert_eq!(&orbit, &chain);
        let mapped: BTreeSet<LatticePoint> = orbit.iter().map(|&p| step(p)).collect();
        prop_assert_eq!(&mapped, &orbit);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Tail reduction into the footprint never changes which torus points a
    /// minimal set cuts out.
    #[test]
    fn normalization_preserves_vanishing_sets(
        entries in arb_entries(),
        order in prop_oneof![Just(MonomialOrder::Lex), Just(MonomialOrder::Graded)],
    ) {
        let field = gf16();
        let bounds = (5, 15);
        let alpha = (field.exp(3), field.exp(1));
        let table = table_from(bounds, &entries);
        let state = run_full(&table, order, field).unwrap();

        let project =
            |fs: &[BivariatePoly]| fs.iter().map(|f| f.project(bounds, field)).collect::<Vec<_>>();
        let raw = defining_set_of_poly_set(&project(state.f_set()), alpha, bounds, field);
        let reduced =
            defining_set_of_poly_set(&project(&state.normalized_f(field)), alpha, bounds, field);
        prop_assert_eq!(raw, reduced);
    }

    /// On the table of a weight-w error (w <= t), a full reference run only
    /// ever updates inside B_{2w+1}, ends with a footprint of exactly w
    /// points, and leaves every member valid across the whole array.
    #[test]
    fn full_runs_are_silent_outside_the_restricted_schedule(
        code_idx in 0usize..3,
        weight_pick in 0u32..4,
        seed in any::<u64>(),
    ) {
        let code = &test_codes()[code_idx];
        let t = (code.delta() - 1) / 2;
        let weight = weight_pick.min(t);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let error = code.random_error_word(&mut rng, weight as usize);
        let table = code.true_table_of(&error);
        let field = code.field();

        for order in [MonomialOrder::Lex, MonomialOrder::Graded] {
            let state = run_full(&table, order, field).unwrap();
            let schedule: BTreeSet<LatticePoint> = if weight == 0 {
                BTreeSet::new()
            } else {
                b_delta(2 * weight + 1, order).unwrap().into_iter().collect()
            };
            for snap in state.trace() {
                if snap.changed {
                    let l = snap.l.unwrap();
                    prop_assert!(
                        schedule.contains(&l),
                        "update at {l} outside B_{} for weight {weight} ({order})",
                        2 * weight + 1,
                    );
                }
            }
            prop_assert_eq!(state.delta().size(), weight as u64);
            let beyond = point(1 << 16, 1 << 16);
            for f in state.f_set() {
                prop_assert_eq!(table.is_valid_up_to(f, beyond, order, field), Some(true));
            }
        }
    }
}

/// Every committed config builds, and sampled codewords vanish on the whole
/// defining set.
#[test]
fn committed_configs_build_and_their_codewords_vanish() {
    let files = [
        "example_f2_5x15.toml",
        "f4_5x15_d3.toml",
        "f4_5x15_d5.toml",
        "f2_7x9_d7.toml",
        "f2_9x21_d9.toml",
    ];
    for file in files {
        let code = load_code(file);
        assert!(!code.is_zero_code(), "{file} describes the zero code");
        for seed in 0..10 {
            let w = code.random_codeword(seed);
            assert!(code.contains(&w), "{file}: codeword for seed {seed} escapes the code");
        }
    }
}

/// The declared defining set is exactly the common vanishing locus of the
/// codeword space, sampled densely enough to span it.
#[test]
fn defining_set_matches_the_codeword_span() {
    for file in ["example_f2_5x15.toml", "f4_5x15_d3.toml"] {
        let code = load_code(file);
        let words: Vec<QuotientPoly> = (0..2 * code.dimension_over_p() as u64 + 16)
            .map(|seed| code.random_codeword(seed))
            .collect();
        let locus = defining_set_of_poly_set(&words, code.alpha(), code.bounds(), code.field());
        let declared: Vec<LatticePoint> = code.defining_set().iter().copied().collect();
        assert_eq!(locus, declared, "{file}");
    }
}
