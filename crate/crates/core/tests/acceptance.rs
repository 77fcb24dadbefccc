mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{ring, rng, structural_invariants, Coverage};
use kflag::oracle::{oracle_structure_constants, GrothendieckOracle};
use kflag::positivity::{verify_claim, Claim, FaultInjection, VerifyOptions, Witness};
use kflag::{BasisTag, CartanType, ElementId, KRing, LaurentPoly, Parabolic, Weight, XiVariant};
use num_traits::Signed;
use rand::Rng;

type Outcome = Result<String, String>;

const RANK_TWO: [(CartanType, usize); 3] =
    [(CartanType::A, 2), (CartanType::B, 2), (CartanType::G, 2)];
const WITH_A3: [(CartanType, usize); 4] = [
    (CartanType::A, 2),
    (CartanType::B, 2),
    (CartanType::G, 2),
    (CartanType::A, 3),
];

fn name(r: &KRing) -> String {
    r.group().root_system().name()
}

fn kronecker(r: &KRing, a: ElementId, b: ElementId) -> LaurentPoly {
    if a == b {
        r.unit_value()
    } else {
        LaurentPoly::zero(r.nvars())
    }
}

fn duality(rings: &[KRing]) -> Outcome {
    let start = Instant::now();
    let mut pairs = 0;
    for r in rings {
        let g = r.group();
        for w in g.ids() {
            for v in g.ids() {
                let lower = r
                    .pairing(r.schubert_class(w), r.xi_class(v, XiVariant::Upper))
                    .map_err(|e| e.to_string())?;
                let upper = r
                    .pairing(
                        r.opposite_schubert_class(w),
                        r.xi_class(v, XiVariant::Lower),
                    )
                    .map_err(|e| e.to_string())?;
                if lower != kronecker(r, w, v) || upper != kronecker(r, w, v) {
                    return Err(format!(
                        "{}: pairing at ({}, {}) is {lower} and {upper}",
                        name(r),
                        g.word_label(w),
                        g.word_label(v)
                    ));
                }
                pairs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(600) {
        return Err(format!("took {elapsed:.1?}"));
    }
    Ok(format!("{pairs} pairs per matrix in {elapsed:.1?}"))
}

fn claim_passes(rings: &[&KRing], claim: Claim) -> Outcome {
    let mut instances = 0;
    for r in rings {
        let report =
            verify_claim(r, claim, &VerifyOptions::default()).map_err(|e| e.to_string())?;
        if !report.passed() {
            return Err(format!(
                "{}: {} violations, first {:?}",
                name(r),
                report.violations.len(),
                report.violations[0]
            ));
        }
        instances += report.instances;
    }
    Ok(format!("{instances} coefficients, zero violations"))
}

fn shadow(rings: &[&KRing]) -> Outcome {
    let mut checked = 0;
    for r in rings {
        let g = r.group();
        for u in g.ids() {
            for v in g.ids() {
                let c = r
                    .structure_constants(u, v, BasisTag::OUpper)
                    .map_err(|e| e.to_string())?;
                for w in g.ids() {
                    let value = c.coefficient(w).eval_at_one();
                    let sign = r.grading_sign(u, v, w);
                    if (sign > 0 && value.is_negative()) || (sign < 0 && value.is_positive()) {
                        return Err(format!(
                            "{}: c at ({}, {}, {}) specializes to {value}",
                            name(r),
                            g.word_label(u),
                            g.word_label(v),
                            g.word_label(w)
                        ));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} specializations"))
}

fn oracle(rings: &[&KRing]) -> Outcome {
    let mut pairs = 0;
    for r in rings {
        let g = r.group();
        let oracle = GrothendieckOracle::new(g.rank()).map_err(|e| e.to_string())?;
        for u in g.ids() {
            for v in g.ids() {
                let expected =
                    oracle_structure_constants(&oracle, g, u, v).map_err(|e| e.to_string())?;
                let got = r
                    .structure_constants(u, v, BasisTag::OUpper)
                    .map_err(|e| e.to_string())?;
                if got != expected {
                    return Err(format!(
                        "{}: mismatch at ({}, {})",
                        name(r),
                        g.word_label(u),
                        g.word_label(v)
                    ));
                }
                pairs += 1;
            }
        }
    }
    Ok(format!("{pairs} pairs agree"))
}

fn structural(a2: &KRing, g2: &KRing, a3: &KRing) -> Outcome {
    let mut failures = structural_invariants(a2, Coverage::Exhaustive);
    failures.extend(structural_invariants(
        g2,
        Coverage::Sampled {
            samples: 100,
            seed: 101,
        },
    ));
    failures.extend(structural_invariants(
        a3,
        Coverage::Sampled {
            samples: 100,
            seed: 102,
        },
    ));
    if failures.is_empty() {
        Ok("A2 exhaustive, 100 samples each in G2 and A3".into())
    } else {
        Err(format!(
            "{} failures, first: {}",
            failures.len(),
            failures[0]
        ))
    }
}

fn parabolic_closure(cases: &[(&KRing, Vec<usize>)]) -> Outcome {
    let mut products = 0;
    for (r, subset) in cases {
        let g = r.group();
        let p = Parabolic::new(g, subset).map_err(|e| e.to_string())?;
        for &u in p.reps() {
            for &v in p.reps() {
                let c = r
                    .structure_constants(u, v, BasisTag::OUpper)
                    .map_err(|e| e.to_string())?;
                if let Some(w) = c
                    .support()
                    .into_iter()
                    .find(|&w| !g.is_minimal_rep(w, subset))
                {
                    return Err(format!(
                        "{}/{subset:?}: O^{} O^{} has a term at {}",
                        name(r),
                        g.word_label(u),
                        g.word_label(v),
                        g.word_label(w)
                    ));
                }
                products += 1;
            }
        }
    }
    Ok(format!("{products} products stay in W^P"))
}

fn sensitivity(r: &KRing, injections: usize) -> Outcome {
    let g = r.group();
    let rs = g.root_system();
    let claims = Claim::DEFAULT;
    let mut rng = rng(2024);
    let mut by_sign = 0;
    for k in 0..injections {
        let claim = claims[k % claims.len()];
        let pick =
            |rng: &mut rand_chacha::ChaCha8Rng| ElementId::from_index(rng.gen_range(0..g.order()));
        let (first, second, target) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let m: Vec<i32> = (0..g.rank()).map(|_| rng.gen_range(-2..=2)).collect();
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        let delta = LaurentPoly::monomial(rs.from_root_coords(&Weight::from_slice(&m)), sign);
        let options = VerifyOptions {
            fault: Some(FaultInjection {
                first,
                second,
                target,
                delta,
            }),
            ..Default::default()
        };
        let report = verify_claim(r, claim, &options).map_err(|e| e.to_string())?;
        if report.passed() {
            return Err(format!(
                "{} fault at ({}, {}, {}) undetected",
                claim.name(),
                g.word_label(first),
                g.word_label(second),
                g.word_label(target)
            ));
        }
        if report.violations.iter().any(|v| {
            matches!(
                v.witness,
                Witness::Sign { .. } | Witness::DegreeCap { .. } | Witness::NotInRootLattice { .. }
            )
        }) {
            by_sign += 1;
        }
    }
    Ok(format!(
        "{injections} injections detected, {by_sign} of them by sign checks alone"
    ))
}

fn run(number: usize, title: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let elapsed = start.elapsed();
    match &outcome {
        Ok(detail) => println!("PASS {number:>2} {title}: {detail} [{elapsed:.1?}]"),
        Err(detail) => println!("FAIL {number:>2} {title}: {detail} [{elapsed:.1?}]"),
    }
    outcome.is_ok()
}

fn main() {
    let rings: Vec<KRing> = WITH_A3.iter().map(|&(t, n)| ring(t, n)).collect();
    let (a2, b2, g2, a3) = (&rings[0], &rings[1], &rings[2], &rings[3]);
    let rank_two: Vec<&KRing> = rings.iter().take(RANK_TWO.len()).collect();
    let all: Vec<&KRing> = rings.iter().collect();
    let a1 = ring(CartanType::A, 1);

    let results = [
        run(1, "duality of O and xi bases in A2, B2, G2, A3", || {
            duality(&rings)
        }),
        run(2, "opposite Schubert alternation in A2, B2, G2, A3", || {
            claim_passes(&all, Claim::Grra53)
        }),
        run(3, "xi basis alternation in A2, B2, G2", || {
            claim_passes(&rank_two, Claim::Grku52)
        }),
        run(4, "dualizing positivity in A2, B2", || {
            claim_passes(&[a2, b2], Claim::Dualizing)
        }),
        run(
            5,
            "Richardson family over identity and all-ones subtori in A2, B2",
            || claim_passes(&[a2, b2], Claim::Richardson),
        ),
        run(6, "non-equivariant shadow signs in A2, B2, G2, A3", || {
            shadow(&all)
        }),
        run(7, "double Grothendieck oracle in A1, A2, A3", || {
            oracle(&[&a1, a2, a3])
        }),
        run(8, "structural invariants", || structural(a2, g2, a3)),
        run(9, "parabolic closure in A2/{2}, A3/{1,3}, B2/{1}", || {
            parabolic_closure(&[(a2, vec![1]), (a3, vec![0, 2]), (b2, vec![0])])
        }),
        run(10, "fault-injection sensitivity in A2", || {
            sensitivity(a2, 60)
        }),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
