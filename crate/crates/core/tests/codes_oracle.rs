//! Code-level checks against independent oracles: explicit popcounts,
//! brute-force constrained compositions, a character-sum formula for the
//! weight distribution, and MacWilliams on the explicit dual.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use ominus_core::codes::{
    codeword_weight_closed, delsarte_report, dual_codewords, full_weight_distribution_small,
    weight_distribution_prefix, DELSARTE_MAX_LENGTH,
};
use ominus_core::combinat::binomial;
use ominus_core::groups::enumerate::enumeration_feasible;
use ominus_core::groups::sums::trace_distribution_closed;
use ominus_core::groups::{DoubleCosetSpec, Family, Sign};
use ominus_core::{make_field, FieldElement};

fn spec(i: u8, sign: Sign, n: u32, r: u32) -> DoubleCosetSpec {
    DoubleCosetSpec::new(Family::new(i).unwrap(), sign, n, make_field(r, None).unwrap()).unwrap()
}

fn feasible_specs() -> Vec<DoubleCosetSpec> {
    let mut out = Vec::new();
    for r in 1..=4 {
        for n in 1..=3 {
            let ctx = make_field(r, None).unwrap();
            if !enumeration_feasible(&ctx, n) {
                continue;
            }
            for family in Family::ALL {
                for sign in [Sign::Plus, Sign::Minus] {
                    if let Ok(s) = DoubleCosetSpec::new(family, sign, n, ctx.clone()) {
                        out.push(s);
                    }
                }
            }
        }
    }
    out
}

/// Sum over all {nu_beta} with sum nu = j and sum nu_beta beta = 0, by
/// recursive enumeration of compositions.
fn brute_force_count(counts: &[(FieldElement, BigInt)], j: u32) -> BigInt {
    fn go(counts: &[(FieldElement, BigInt)], left: u32, acc: u32, weight: BigInt) -> BigInt {
        match counts.split_first() {
            None => {
                if left == 0 && acc == 0 {
                    weight
                } else {
                    BigInt::zero()
                }
            }
            Some(((beta, n), rest)) => (0..=left)
                .map(|nu| {
                    let acc = if nu % 2 == 1 { acc ^ beta.value() } else { acc };
                    go(rest, left - nu, acc, &weight * binomial(n, nu as u64))
                })
                .sum(),
        }
    }
    go(counts, j, 0, BigInt::one())
}

/// `C_j = (1/q) sum_a [x^j] (1 + x)^{P_a} (1 - x)^{N - P_a}` where `P_a` counts
/// the coset elements with `tr(a Tr g) = 0`.
fn character_count(spec: &DoubleCosetSpec, j: u32) -> BigInt {
    let ctx = spec.ctx();
    let dist = trace_distribution_closed(spec).unwrap();
    let total = dist.total();
    let mut acc = BigInt::zero();
    for a in ctx.elements() {
        let plus: BigInt = dist
            .iter()
            .filter(|(b, _)| ctx.trace(ctx.mul(a, *b)) == 0)
            .map(|(_, c)| c.clone())
            .sum();
        let minus = &total - &plus;
        for i in 0..=j {
            let term = binomial(&plus, (j - i) as u64) * binomial(&minus, i as u64);
            if i % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
    }
    let q = BigInt::from(ctx.q());
    assert!((&acc % &q).is_zero());
    acc / q
}

#[test]
fn closed_weights_equal_popcounts() {
    for s in feasible_specs() {
        let words = dual_codewords(&s).unwrap();
        for a in s.ctx().nonzero() {
            assert_eq!(
                BigInt::from(words[a.value() as usize].weight()),
                codeword_weight_closed(&s, a).unwrap(),
                "{} at a = {a}",
                s.label()
            );
        }
    }
}

#[test]
fn prefix_matches_brute_force_compositions() {
    for r in 1..=3 {
        let ctx = make_field(r, None).unwrap();
        for (i, sign, n) in [
            (1, Sign::Minus, 1),
            (1, Sign::Plus, 2),
            (3, Sign::Minus, 3),
            (2, Sign::Plus, 2),
            (4, Sign::Minus, 3),
        ] {
            let Ok(s) = DoubleCosetSpec::new(Family::new(i).unwrap(), sign, n, ctx.clone()) else {
                continue;
            };
            let Ok(prefix) = weight_distribution_prefix(&s, 6) else {
                assert!(i % 2 == 0 && r == 1);
                continue;
            };
            let counts: Vec<_> = trace_distribution_closed(&s)
                .unwrap()
                .iter()
                .map(|(b, c)| (b, c.clone()))
                .collect();
            for j in 0..=6 {
                assert_eq!(
                    prefix.counts[j as usize],
                    brute_force_count(&counts, j),
                    "{} j = {j}",
                    s.label()
                );
            }
        }
    }
}

#[test]
fn prefix_matches_character_formula() {
    for r in 1..=5 {
        let ctx = make_field(r, None).unwrap();
        for family in Family::ALL {
            for sign in [Sign::Plus, Sign::Minus] {
                for n in 1..=5 {
                    let Ok(s) = DoubleCosetSpec::new(family, sign, n, ctx.clone()) else {
                        continue;
                    };
                    let Ok(prefix) = weight_distribution_prefix(&s, 8) else {
                        continue;
                    };
                    assert_eq!(prefix.counts[0], BigInt::one());
                    for j in 0..=8 {
                        assert_eq!(
                            prefix.counts[j as usize],
                            character_count(&s, j),
                            "{} j = {j}",
                            s.label()
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn macwilliams_matches_prefix_and_is_symmetric() {
    let cases = [
        spec(1, Sign::Minus, 1, 1),
        spec(1, Sign::Minus, 1, 2),
        spec(1, Sign::Minus, 1, 3),
        spec(1, Sign::Minus, 1, 4),
        spec(1, Sign::Plus, 2, 1),
        spec(3, Sign::Plus, 2, 1),
    ];
    for s in cases {
        let full = full_weight_distribution_small(&s).unwrap();
        let n = full.len() - 1;
        let prefix = weight_distribution_prefix(&s, n as u32).unwrap();
        assert_eq!(prefix.counts, full, "{}", s.label());
        for j in 0..=n {
            assert_eq!(full[j], full[n - j], "{} symmetry at {j}", s.label());
        }
        let report = delsarte_report(&s).unwrap();
        let total: BigInt = full.iter().sum();
        assert_eq!(total, BigInt::one() << (n - report.rank), "{}", s.label());
    }
}

#[test]
fn delsarte_on_every_feasible_spec() {
    let mut degenerate = 0;
    for s in feasible_specs() {
        assert!(s.constants().n <= BigInt::from(DELSARTE_MAX_LENGTH), "{}", s.label());
        let report = delsarte_report(&s).unwrap();
        assert!(report.passed(), "{}: {report:?}", s.label());
        if s.has_degenerate_dual() {
            degenerate += 1;
            assert_eq!(report.distinct_duals as u32, s.ctx().q() / 2);
        } else {
            assert_eq!(report.distinct_duals as u32, s.ctx().q());
            assert_eq!(report.rank as u32, s.ctx().r());
        }
    }
    assert_eq!(degenerate, 3);
}
