//! Randomised invariants of the kernels, windows, expansions and witnesses.

mod support;

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use spectra::algebraic::{Base, IntPolynomial};
use spectra::expansions::{greedy_expansion, lazy_constrained, Eventual, SignPattern};
use spectra::spectrum::{enumerate_a, enumerate_x, enumerate_y, gaps, DEFAULT_STATE_BUDGET};
use spectra::witness::{build_witness, choose_w};
use support::*;

const MINPOLYS: [&[i64]; 4] = [&[-1, -1, 1], &[-2, 0, 1], &[-1, -1, 0, 1], &[-1, 0, 0, -1, 1]];

fn base(coeffs: &[i64]) -> Base {
    Base::from_root_index(&IntPolynomial::from_i64s(coeffs), 0).unwrap()
}

fn vectors(w: spectra::spectrum::SpectrumWindow) -> BTreeSet<Vec<i64>> {
    w.vectors().unwrap().into_iter().collect()
}

/// Decimal base `num / 100` strictly between 1 and `m + 1`.
fn decimal(num: i64) -> (Base, BigRational) {
    (
        Base::numeric(&format!("{}", num as f64 / 100.0), 0.0).unwrap(),
        rat(num, 100),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn zq_vector_matches_reduction(
        which in 0..MINPOLYS.len(),
        digits in prop::collection::vec(-3i64..=3, 0..14),
    ) {
        let poly = MINPOLYS[which];
        let b = base(poly);
        let ring = b.zq().unwrap();
        let x = ring.from_digits(&digits).unwrap();
        let want = reduce(&digits, poly);
        prop_assert_eq!(x.coeffs(), &want[..]);
        let q = b.to_f64();
        let direct = eval(&digits, q);
        prop_assert!((ring.value_f64(&x) - direct).abs() <= 1e-9 * direct.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn equal_vectors_have_overlapping_intervals(
        which in 0..MINPOLYS.len(),
        digits in prop::collection::vec(-3i64..=3, 1..8),
        mult in -2i64..=2,
        shift in 0usize..4,
    ) {
        let poly = MINPOLYS[which];
        let ring = base(poly).zq().unwrap();
        // add mult * x^shift * minpoly, which vanishes at q
        let mut other = digits.clone();
        other.resize(other.len().max(shift + poly.len()), 0);
        for (j, &c) in poly.iter().enumerate() {
            other[shift + j] += mult * c;
        }
        let (a, b) = (ring.from_digits(&digits).unwrap(), ring.from_digits(&other).unwrap());
        prop_assert_eq!(&a, &b);
        let (ia, ib) = (ring.eval_interval(&a, 64), ring.eval_interval(&b, 64));
        prop_assert!(ia.lo_rational() <= ib.hi_rational() && ib.lo_rational() <= ia.hi_rational());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn windows_nest_and_are_shift_closed(which in 0..MINPOLYS.len(), m in 1i64..=2) {
        let b = base(MINPOLYS[which]);
        let ring = b.zq().unwrap();
        let bound = 3.0;
        let small = enumerate_x(&b, m, bound, DEFAULT_STATE_BUDGET).unwrap();
        let large = vectors(enumerate_x(&b, m + 1, bound, DEFAULT_STATE_BUDGET).unwrap());
        let xs = vectors(small.clone());
        prop_assert!(xs.is_subset(&large));
        for v in &xs {
            let x = ring.from_digits(v).unwrap();
            for s in 0..=m {
                let y = ring.shift_add(&x, s).unwrap();
                if ring.value_f64(&y) < bound - 1e-9 {
                    prop_assert!(xs.contains(y.coeffs()), "q x + {} missing", s);
                }
            }
        }
        let y4 = vectors(enumerate_y(&b, m, 4, bound, DEFAULT_STATE_BUDGET).unwrap());
        let y5 = vectors(enumerate_y(&b, m, 5, bound, DEFAULT_STATE_BUDGET).unwrap());
        prop_assert!(y4.is_subset(&y5));
    }

    #[test]
    fn y_and_a_windows_are_symmetric(which in 0..MINPOLYS.len(), m in 1i64..=2, n in 2usize..6) {
        let b = base(MINPOLYS[which]);
        let neg = |v: &Vec<i64>| v.iter().map(|c| -c).collect::<Vec<i64>>();
        let y = vectors(enumerate_y(&b, m, n, 2.5, DEFAULT_STATE_BUDGET).unwrap());
        prop_assert!(y.iter().all(|v| y.contains(&neg(v))));
        let a = vectors(enumerate_a(&b, n, 2.5, DEFAULT_STATE_BUDGET).unwrap());
        prop_assert!(a.iter().all(|v| a.contains(&neg(v))));
    }

    #[test]
    fn gaps_at_most_one_below_m_plus_one(num in 101i64..300, m in 1i64..=2) {
        prop_assume!(num <= (m + 1) * 100);
        let (b, _) = decimal(num);
        let w = enumerate_x(&b, m, 6.0, DEFAULT_STATE_BUDGET).unwrap();
        let g = gaps(&w).unwrap();
        prop_assert!(g.iter().all(|&d| d <= 1.0 + 1e-9), "max gap {:?}", g.iter().cloned().fold(0.0, f64::max));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn greedy_remainder_bound(num in 101i64..300, m in 1i64..=2, p in 0i64..=1000) {
        prop_assume!(num <= (m + 1) * 100);
        let (b, q) = decimal(num);
        let cap = BigRational::from_integer(m.into()) / (&q - BigRational::one());
        let x = &cap * rat(p, 1000);
        let k = b.field();
        let seq = greedy_expansion(&b, m, &k.rational(x.clone()), 30).unwrap();
        prop_assert_eq!(seq.prefix[0], 0);
        let mut sum = BigRational::zero();
        let mut scale = BigRational::one();
        for (i, &c) in seq.prefix.iter().enumerate().skip(1) {
            prop_assert!((0..=m).contains(&c));
            scale = scale / &q;
            sum += &scale * BigRational::from_integer(c.into());
            let rem = &x - &sum;
            prop_assert!(!rem.is_negative(), "remainder negative at {}", i);
            prop_assert!(rem <= &cap * &scale, "remainder too large at {}", i);
        }
    }

    #[test]
    fn lazy_with_every_index_follows_the_direct_rule(num in 101i64..300, m in 1i64..=2) {
        prop_assume!(num < (m + 1) * 100);
        let (b, q) = decimal(num);
        let seq = lazy_constrained(&b, m, &SignPattern::all(), 40).unwrap();
        let digits = seq.take(41).unwrap();
        let cap = BigRational::from_integer(m.into()) / (&q - BigRational::one());
        let mut t = BigRational::one();
        prop_assert_eq!(digits[0], -1);
        for (i, &s) in digits.iter().enumerate().skip(1) {
            let qt = &q * &t;
            let want = (&qt - &cap).ceil().to_integer().max(0.into());
            prop_assert_eq!(BigRational::from_integer(s.into()), BigRational::from_integer(want), "digit {}", i);
            t = qt - BigRational::from_integer(s.into());
        }
    }

    #[test]
    fn lazy_obeys_pattern_and_corridor(
        num in 101i64..300,
        m in 1i64..=2,
        threshold in 1usize..6,
        explicit in prop::collection::btree_set(1usize..6, 0..5),
        bits in prop::collection::vec(any::<bool>(), 1..5),
    ) {
        prop_assume!(num < (m + 1) * 100);
        let explicit: Vec<usize> = explicit.into_iter().filter(|&i| i < threshold).collect();
        let (b, q) = decimal(num);
        let pattern = SignPattern::new(explicit, threshold, Eventual::Periodic(bits)).unwrap();
        if let Ok(seq) = lazy_constrained(&b, m, &pattern, 50) {
            let d = seq.take(51).unwrap();
            prop_assert!(pattern.admits(&d, m));
            let (res, ok) = exact_residual(&d, &q, m);
            prop_assert!(ok, "residual {}", res);
        }
    }

    #[test]
    fn choose_w_is_admissible(r in 1.0f64..3.0, theta in 0.01f64..6.27) {
        let p = Complex64::from_polar(r, theta);
        let dir = choose_w(p, 1, 60).unwrap();
        let w = Complex64::new(dir.w_re, dir.w_im);
        prop_assert!((w.norm() - 1.0).abs() < 1e-12);
        prop_assert!(w.re > 0.0);
        if r > 1.0 + 1e-9 {
            // the terms Re(w p^-i) are not all of one sign
            let terms: Vec<f64> = (1..=60).map(|i| (w * p.powi(-i)).re).collect();
            prop_assert!(terms.iter().any(|&t| t <= 0.0));
        }
    }

    #[test]
    fn witness_digits_expand_zero(num in 110i64..195, r in 1.05f64..3.0, theta in 0.3f64..5.9) {
        let (b, q) = decimal(num);
        let p = Complex64::from_polar(r, theta);
        if let Ok(w) = build_witness(&b, 1, p, 40) {
            let d = w.digit_vec();
            prop_assert_eq!(d[0], -1);
            prop_assert!(d.iter().all(|s| s.abs() <= 1));
            let (res, ok) = exact_residual(&d, &q, 1);
            prop_assert!(ok, "residual {}", res);
            if let Some(c) = &w.choice {
                let lazy = w.lazy_digits.as_ref().unwrap().take(41).unwrap();
                prop_assert!(c.pattern.admits(&lazy, 1));
            }
        }
    }
}
