//! Round trips and merge laws.

use collatz_fp::framework::{ConditionKind, ConditionParams, LambdaSpec};
use collatz_fp::verifier::{
    condition_coverage, verify_pseudocontraction, verify_weight_bound, ConditionCoverageReport, RangeSpec,
    VerificationReport,
};
use collatz_fp::Rational;
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-1_000_000i128..1_000_000, 1i128..1_000_000).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn unit() -> impl Strategy<Value = Rational> {
    (0i128..=64, 1i128..=64).prop_map(|(n, d)| Rational::new(n.min(d), d).unwrap())
}

fn lambda() -> impl Strategy<Value = LambdaSpec> {
    prop_oneof![
        unit().prop_map(|v| LambdaSpec::constant(v).unwrap()),
        proptest::array::uniform9(unit()).prop_map(|t| LambdaSpec::per_case(t).unwrap()),
    ]
}

/// A rectangle and two interior row cuts.
fn split_range() -> impl Strategy<Value = (RangeSpec, u128, u128)> {
    (1u128..30, 3u128..40, 1u128..30, 0u128..40).prop_flat_map(|(x0, w, y0, h)| {
        (Just((x0, x0 + w, y0, y0 + h)), x0..x0 + w, x0..x0 + w)
            .prop_map(|((x0, x1, y0, y1), a, b)| (RangeSpec::new(x0, x1, y0, y1).unwrap(), a.min(b), a.max(b)))
    })
}

fn rows(r: &RangeSpec, lo: u128, hi: u128) -> RangeSpec {
    RangeSpec::new(lo, hi, r.y_min, r.y_max).unwrap()
}

fn untimed(mut r: VerificationReport) -> VerificationReport {
    r.elapsed_ms = None;
    r
}

fn untimed_cov(mut r: ConditionCoverageReport) -> ConditionCoverageReport {
    r.elapsed_ms = None;
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rational_text_round_trip(v in rational()) {
        prop_assert_eq!(v.to_string().parse::<Rational>().unwrap(), v);
        let json = serde_json::to_string(&v).unwrap();
        prop_assert_eq!(serde_json::from_str::<Rational>(&json).unwrap(), v);
    }

    #[test]
    fn lambda_text_round_trip(l in lambda()) {
        prop_assert_eq!(l.to_string().parse::<LambdaSpec>().unwrap(), l);
    }

    #[test]
    fn verification_merge_laws((range, a, b) in split_range()) {
        let m = Rational::ONE;
        let whole = untimed(verify_weight_bound(&range, m).unwrap());
        let left = untimed(verify_weight_bound(&rows(&range, range.x_min, a), m).unwrap());
        let right = untimed(verify_weight_bound(&rows(&range, a + 1, range.x_max), m).unwrap());

        prop_assert_eq!(left.clone().merge(right.clone()).unwrap(), whole.clone());
        prop_assert_eq!(right.clone().merge(left.clone()).unwrap(), whole.clone());
        if a < b && b < range.x_max {
            let mid = untimed(verify_weight_bound(&rows(&range, a + 1, b), m).unwrap());
            let tail = untimed(verify_weight_bound(&rows(&range, b + 1, range.x_max), m).unwrap());
            let grouped_left = left.clone().merge(mid.clone()).unwrap().merge(tail.clone()).unwrap();
            let grouped_right = left.clone().merge(mid.merge(tail).unwrap()).unwrap();
            prop_assert_eq!(&grouped_left, &grouped_right);
            prop_assert_eq!(grouped_left, whole);
        }
    }

    #[test]
    fn sweep_is_partition_invariant((range, a, _) in split_range()) {
        let whole = untimed(verify_pseudocontraction(&range).unwrap());
        let left = verify_pseudocontraction(&rows(&range, range.x_min, a)).unwrap();
        let right = verify_pseudocontraction(&rows(&range, a + 1, range.x_max)).unwrap();
        prop_assert_eq!(untimed(left.merge(right).unwrap()), whole);
    }

    #[test]
    fn coverage_merge_laws((range, a, _) in split_range(), l in lambda()) {
        let params = ConditionParams::new(l, Rational::new(1, 2).unwrap(), 2.into(), 2.into()).unwrap();
        let kind = ConditionKind::new(3, 5).unwrap();
        let run = |r: &RangeSpec| untimed_cov(condition_coverage(r, &params, kind, false).unwrap());
        let whole = run(&range);
        let left = run(&rows(&range, range.x_min, a));
        let right = run(&rows(&range, a + 1, range.x_max));
        prop_assert_eq!(left.clone().merge(right.clone()).unwrap(), whole.clone());
        prop_assert_eq!(right.merge(left).unwrap(), whole);
    }

    #[test]
    fn report_json_round_trip((range, _, _) in split_range()) {
        let r = verify_weight_bound(&range, Rational::ONE).unwrap();
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: VerificationReport = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
        prop_assert_eq!(back, r);
    }
}
