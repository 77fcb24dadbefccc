mod common;

use common::ring;
use kflag::positivity::{
    check_alternation, claim_table, verify_claim, verify_grku_richardson, verify_grra, Claim,
    FaultInjection, SubtorusBasis, VerifyOptions, Witness, YChart,
};
use kflag::{BasisTag, CartanType, Error, LaurentPoly, Parabolic, YVariables};
use num_bigint::BigInt;

#[test]
fn default_claims_pass_in_rank_two() {
    for (t, n) in [(CartanType::A, 2), (CartanType::B, 2), (CartanType::G, 2)] {
        let r = ring(t, n);
        for claim in Claim::DEFAULT {
            let report = verify_claim(&r, claim, &VerifyOptions::default()).unwrap();
            assert!(report.passed(), "{}: {:?}", claim.name(), report.violations);
            assert!(report.instances > 0);
        }
    }
}

#[test]
fn a1_self_product_coefficient_is_y1() {
    let r = ring(CartanType::A, 1);
    let table = claim_table(&r, Claim::Grra53, &VerifyOptions::default()).unwrap();
    let entry = table
        .iter()
        .find(|e| e.u_word == "s1" && e.v_word == "s1")
        .unwrap();
    let c = &entry.constants["s1"];
    assert_eq!(c.grading_sign, -1);
    let alpha = r.group().root_system().simple_root(0);
    assert_eq!(c.laurent, LaurentPoly::one_minus_exp(-alpha));
    let y = c.y_poly.as_ref().unwrap();
    assert_eq!(y.terms().count(), 1);
    assert_eq!(y.coeff(&[1]), BigInt::from(1));
}

#[test]
fn faults_are_reported_with_witnesses() {
    let r = ring(CartanType::A, 1);
    let g = r.group();
    let (e, s) = (g.identity(), g.longest());
    let alpha = g.root_system().simple_root(0);
    let options = VerifyOptions {
        fault: Some(FaultInjection {
            first: s,
            second: s,
            target: s,
            delta: LaurentPoly::monomial(-alpha, 2),
        }),
        ..Default::default()
    };
    let report = verify_grra(&r, &options).unwrap();
    assert!(!report.passed());
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v.witness, Witness::Sign { .. })));
    assert!(report
        .violations
        .iter()
        .any(|v| matches!(v.witness, Witness::Reconstruction { .. })));

    let options = VerifyOptions {
        fault: Some(FaultInjection {
            first: e,
            second: e,
            target: e,
            delta: LaurentPoly::exp(-alpha),
        }),
        ..Default::default()
    };
    for claim in Claim::DEFAULT {
        assert!(!verify_claim(&r, claim, &options).unwrap().passed());
    }
}

#[test]
fn identity_products_in_xi_basis_pass() {
    let r = ring(CartanType::B, 2);
    let g = r.group();
    let e = g.identity();
    let chart = YChart::simple(YVariables::NegativeSimpleRoots);
    for v in g.ids() {
        let p = r.structure_constants(e, v, BasisTag::XiUpper).unwrap();
        let grading = |w| r.grading_sign(e, v, w);
        let cap = kflag::positivity::default_degree_cap(&r, Claim::Grku52, e, v);
        assert!(check_alternation(&r, ("e", "v"), &p, grading, &chart, cap).is_empty());
        let d = r.structure_constants(e, v, BasisTag::Dualizing).unwrap();
        assert_eq!(d.coefficient(v), &r.unit_value());
    }
}

#[test]
fn restriction_to_positive_full_subtori_preserves_positivity() {
    let r = ring(CartanType::A, 2);
    assert!(verify_grra(&r, &VerifyOptions::default()).unwrap().passed());
    for rows in [
        vec![vec![1, 1]],
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![1, 0], vec![0, 1]],
    ] {
        let basis = SubtorusBasis::new(rows, 2).unwrap();
        assert!(basis.is_full());
        let options = VerifyOptions {
            subtorus: Some(basis),
            ..Default::default()
        };
        let report = verify_grra(&r, &options).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
    }
}

#[test]
fn richardson_family_passes_in_a2_and_b2() {
    for (t, n) in [(CartanType::A, 2), (CartanType::B, 2)] {
        let r = ring(t, n);
        let report = verify_claim(&r, Claim::Richardson, &VerifyOptions::default()).unwrap();
        assert!(report.passed(), "{:?}", report.violations);
        assert_eq!(report.subtori.len(), 3);
    }
}

#[test]
fn non_positive_subtorus_is_a_precondition_error() {
    let r = ring(CartanType::A, 2);
    let g = r.group();
    let basis = SubtorusBasis::new(vec![vec![1, -1]], 2).unwrap();
    assert!(!basis.is_positive());
    assert!(matches!(
        verify_grku_richardson(&r, g.longest(), g.identity(), &basis),
        Err(Error::Precondition(_))
    ));
    let report =
        verify_grku_richardson(&r, g.longest(), g.identity(), &SubtorusBasis::all_ones(2)).unwrap();
    assert!(report.passed());
}

#[test]
fn subtorus_parsing() {
    let b = SubtorusBasis::parse("# beta rows\n1 1\n0, 1\n", 2).unwrap();
    assert_eq!(b.matrix(), &[vec![1, 1], vec![0, 1]]);
    assert!(b.is_positive() && !b.is_full());
    assert!(SubtorusBasis::all_ones(3).is_full());
    assert!(SubtorusBasis::all_ones(3).is_positive());
    assert!(SubtorusBasis::parse("1 x\n", 2).is_err());
    assert!(SubtorusBasis::parse("1 2 3\n", 2).is_err());
    assert!(SubtorusBasis::parse("", 2).is_err());
}

#[test]
fn parabolic_claims_pass() {
    for (t, n, subset) in [
        (CartanType::A, 2, vec![1]),
        (CartanType::A, 3, vec![0, 2]),
        (CartanType::B, 2, vec![0]),
    ] {
        let r = ring(t, n);
        let options = VerifyOptions {
            parabolic: Some(Parabolic::new(r.group(), &subset).unwrap()),
            ..Default::default()
        };
        for claim in [Claim::Grra53, Claim::Grku52] {
            let report = verify_claim(&r, claim, &options).unwrap();
            assert!(report.passed(), "{:?}", report.violations);
            assert_eq!(
                report.parabolic,
                subset.iter().map(|i| i + 1).collect::<Vec<_>>()
            );
        }
        assert!(verify_claim(&r, Claim::Dualizing, &options).is_err());
    }
}

#[test]
fn claim_names_round_trip() {
    for claim in Claim::ALL {
        assert_eq!(claim.name().parse::<Claim>().unwrap(), claim);
    }
    assert!("grra99".parse::<Claim>().is_err());
}
