use padelab::functions::{Decimal, Ratio};
use padelab::numkernel::{cabs, convert_basis, laurent_mul, Basis, BigPolynomial, Complex, LaurentTail, PrecisionCtx};
use padelab::roots::{find_roots, potential_discrepancy, probe_circle, trimmed_hausdorff, DiscreteMeasure, ZeroSet};
use padelab::Error;
use proptest::prelude::*;

fn points(max: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..max)
}

fn ctx(bits: u32) -> PrecisionCtx {
    PrecisionCtx::new(bits).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hausdorff_is_symmetric_and_vanishes_on_equal_sets(a in points(30), b in points(30), trim in 0.0..0.3f64) {
        match trimmed_hausdorff(&a, &b, trim) {
            Ok(ab) => {
                prop_assert_eq!(ab, trimmed_hausdorff(&b, &a, trim).unwrap());
                prop_assert!(ab >= 0.0);
                prop_assert_eq!(trimmed_hausdorff(&a, &a, trim).unwrap(), 0.0);
            }
            // trimming may empty a very small set
            Err(Error::EmptySet) => prop_assert!((trim * a.len().min(b.len()) as f64).ceil() as usize >= a.len().min(b.len())),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        }
    }

    #[test]
    fn hausdorff_is_translation_invariant(a in points(20), b in points(20), dx in -5.0..5.0f64, dy in -5.0..5.0f64) {
        let shift = |v: &[(f64, f64)]| v.iter().map(|&(x, y)| (x + dx, y + dy)).collect::<Vec<_>>();
        let d0 = trimmed_hausdorff(&a, &b, 0.0).unwrap();
        let d1 = trimmed_hausdorff(&shift(&a), &shift(&b), 0.0).unwrap();
        prop_assert!((d0 - d1).abs() <= 1e-9 * (1.0 + d0));
    }

    #[test]
    fn trimming_discards_far_outliers(core in points(30), far in prop::collection::vec((1e3..1e4f64, 1e3..1e4f64), 1..3)) {
        let mut with = core.clone();
        with.extend(far.iter().copied());
        let trim = far.len() as f64 / with.len() as f64;
        prop_assume!(trim < 0.5);
        prop_assert!(trimmed_hausdorff(&core, &with, trim - 1e-12).unwrap() < 1e3);
        prop_assert!(trimmed_hausdorff(&core, &with, 0.0).unwrap() >= 1e3);
    }

    #[test]
    fn zero_set_csv_round_trip(pts in prop::collection::vec((-1e6..1e6f64, -1e6..1e6f64), 0..20), n in 0usize..200) {
        let c = ctx(160);
        let z: Vec<Complex> = pts.iter().map(|&p| c.complex(p)).collect();
        let mut zs = ZeroSet::new(z, "Q2", n);
        zs.sort();
        let text = zs.to_csv_string();
        let back = ZeroSet::read_csv(text.as_bytes(), 160).unwrap();
        prop_assert_eq!(&back.points, &zs.points);
        prop_assert_eq!(back.to_csv_string(), text);
    }

    #[test]
    fn ratio_is_reduced_and_round_trips(num in -1000i64..1000, den in 1u64..1000) {
        let r = Ratio::new(num, den).unwrap();
        let k = 1 + (den % 7) as i64;
        prop_assert_eq!(Ratio::new(num * k, den * k as u64).unwrap(), r);
        let json = serde_json::to_string(&r).unwrap();
        prop_assert_eq!(serde_json::from_str::<Ratio>(&json).unwrap(), r);
        prop_assert!((r.to_f64() - num as f64 / den as f64).abs() < 1e-12);
    }

    #[test]
    fn decimal_round_trips_through_json(x in -1e12..1e12f64) {
        let d = Decimal::from(x);
        let json = serde_json::to_string(&d).unwrap();
        let back: Decimal = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back.to_f64(), x);
        prop_assert_eq!(back, d);
    }

    #[test]
    fn measure_discrepancy_is_symmetric(a in points(15), b in points(15)) {
        let mu = DiscreteMeasure::uniform(a, 1.0).unwrap();
        let nu = DiscreteMeasure::uniform(b, 1.0).unwrap();
        let probes = probe_circle(40.0, 32);
        let d = potential_discrepancy(&mu, &nu, &probes).unwrap();
        prop_assert_eq!(d, potential_discrepancy(&nu, &mu, &probes).unwrap());
        prop_assert_eq!(potential_discrepancy(&mu, &mu, &probes).unwrap(), 0.0);
    }

    #[test]
    fn laurent_product_commutes(a in prop::collection::vec(-3.0..3.0f64, 1..12), b in prop::collection::vec(-3.0..3.0f64, 1..12)) {
        let c = ctx(128);
        let order = a.len().min(b.len()) - 1;
        let tail = |v: &[f64]| LaurentTail::new(v[..=order].iter().map(|&x| c.complex(x)).collect(), 1.0);
        let (ta, tb) = (tail(&a), tail(&b));
        let (ab, ba) = (laurent_mul(&ta, &tb), laurent_mul(&tb, &ta));
        for k in 0..=order {
            prop_assert!(cabs(&Complex::with_val(128, ab.coeff(k) - ba.coeff(k))) < 1e-30);
        }
    }

    #[test]
    fn chebyshev_conversion_round_trips(v in prop::collection::vec(-1.0..1.0f64, 1..25)) {
        let c = ctx(256);
        let p = BigPolynomial::from_f64(Basis::Monomial, &v, &c);
        let back = convert_basis(&convert_basis(&p, Basis::ChebyshevFirstKind), Basis::Monomial);
        let scale = p.max_abs().to_f64().max(1e-300);
        for (x, y) in p.coeffs().iter().zip(back.coeffs()) {
            prop_assert!(cabs(&Complex::with_val(256, x - y)).to_f64() <= 2f64.powi(-244) * scale);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn real_polynomials_have_conjugate_closed_zero_sets(
        reals in prop::collection::vec(-3.0..3.0f64, 0..5),
        pairs in prop::collection::vec((-3.0..3.0f64, 0.1..3.0f64), 1..5),
    ) {
        let c = ctx(256);
        let mut roots: Vec<Complex> = reals.iter().map(|&x| c.complex(x)).collect();
        for &(x, y) in &pairs {
            roots.push(c.complex((x, y)));
            roots.push(c.complex((x, -y)));
        }
        let p = BigPolynomial::from_roots(&roots, &c);
        let zs = find_roots(&p, "p", &c).unwrap();
        prop_assert_eq!(zs.len(), roots.len());
        prop_assert!(zs.conjugate_pairing_error() < 1e-20);
        for r in &roots {
            let nearest = zs.points.iter().map(|z| cabs(&Complex::with_val(256, z - r)).to_f64()).fold(f64::INFINITY, f64::min);
            prop_assert!(nearest < 1e-20);
        }
    }
}
