#![allow(dead_code)]

use kflag::{
    BasisTag, CartanType, ElementId, KClass, KRing, LaurentPoly, RootSystem, Weight, WeylGroup,
    XiVariant,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn group(t: CartanType, n: usize) -> WeylGroup {
    WeylGroup::generate(&RootSystem::new(t, n).unwrap()).unwrap()
}

pub fn ring(t: CartanType, n: usize) -> KRing {
    KRing::new(group(t, n)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_weight(rng: &mut ChaCha8Rng, n: usize, bound: i32) -> Weight {
    let coords: Vec<i32> = (0..n).map(|_| rng.gen_range(-bound..=bound)).collect();
    Weight::from_slice(&coords)
}

pub fn random_poly(rng: &mut ChaCha8Rng, n: usize, terms: usize, bound: i32) -> LaurentPoly {
    LaurentPoly::from_terms(
        n,
        (0..terms).map(|_| {
            (
                random_weight(rng, n, bound),
                rng.gen_range(-3i64..=3).into(),
            )
        }),
    )
}

/// A random `R(T)`-combination of basis classes and line bundles; always GKM.
pub fn random_class(r: &KRing, rng: &mut ChaCha8Rng) -> KClass {
    let g = r.group();
    let n = r.nvars();
    let mut total = r.zero_class();
    for _ in 0..3 {
        let w = kflag::ElementId::from_index(rng.gen_range(0..g.order()));
        let coeff = random_poly(rng, n, 2, 1);
        let basis = match rng.gen_range(0..4) {
            0 => r.schubert_class(w).clone(),
            1 => r.opposite_schubert_class(w).clone(),
            2 => r.xi_class(w, kflag::XiVariant::Upper).clone(),
            _ => r.line_bundle_class(&random_weight(rng, n, 2)),
        };
        total = total.add(&basis.scale(&coeff));
    }
    total
}

/// Order of `s_i s_j` read off the Cartan matrix.
pub fn braid_order(r: &KRing, i: usize, j: usize) -> usize {
    let c = r.group().root_system().cartan_matrix();
    match c[i][j] * c[j][i] {
        0 => 2,
        1 => 3,
        2 => 4,
        _ => 6,
    }
}

fn alternating(r: &KRing, f: &KClass, first: usize, second: usize, m: usize) -> KClass {
    let mut out = f.clone();
    for k in 0..m {
        let i = if k % 2 == 0 { second } else { first };
        out = r.demazure_step(i, &out).unwrap();
    }
    out
}

/// Element selection for [`structural_invariants`].
pub enum Coverage {
    Exhaustive,
    Sampled { samples: usize, seed: u64 },
}

/// Checks GKM, Demazure idempotence and braid relations, triangularity,
/// `χ(O_w) = 1`, `χ(ξ_w) = δ_{w,e}` and agreement of both `χ` algorithms.
/// Returns a description of every failure.
pub fn structural_invariants(r: &KRing, coverage: Coverage) -> Vec<String> {
    let g = r.group();
    let n = r.nvars();
    let name = g.root_system().name();
    let mut failures = Vec::new();
    let mut fail = |msg: String| failures.push(format!("{name}: {msg}"));

    let exhaustive = matches!(coverage, Coverage::Exhaustive);
    type Selection = (
        Vec<ElementId>,
        Vec<(ElementId, ElementId)>,
        Vec<KClass>,
        Vec<(usize, usize)>,
    );
    let (elements, pairs, classes, braids): Selection = match coverage {
        Coverage::Exhaustive => {
            let ids: Vec<ElementId> = g.ids().collect();
            let pairs = ids
                .iter()
                .flat_map(|&u| ids.iter().map(move |&v| (u, v)))
                .collect();
            let classes = ids
                .iter()
                .flat_map(|&w| {
                    [
                        r.schubert_class(w).clone(),
                        r.opposite_schubert_class(w).clone(),
                    ]
                })
                .collect();
            let braids = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|(i, j)| i < j)
                .collect();
            (ids, pairs, classes, braids)
        }
        Coverage::Sampled { samples, seed } => {
            let mut rng = rng(seed);
            let pick = |rng: &mut ChaCha8Rng| ElementId::from_index(rng.gen_range(0..g.order()));
            let ids = (0..samples).map(|_| pick(&mut rng)).collect();
            let pairs = (0..samples)
                .map(|_| (pick(&mut rng), pick(&mut rng)))
                .collect();
            let classes = (0..samples).map(|_| random_class(r, &mut rng)).collect();
            let braids = (0..samples)
                .map(|_| {
                    let i = rng.gen_range(0..n);
                    let j = (i + rng.gen_range(1..n)) % n;
                    (i, j)
                })
                .collect();
            (ids, pairs, classes, braids)
        }
    };

    let one = r.unit_value();
    for &w in &elements {
        let label = g.word_label(w);
        for (tag, class) in [
            ("O_w", r.schubert_class(w)),
            ("O^w", r.opposite_schubert_class(w)),
            ("xi_w", r.xi_class(w, XiVariant::Lower)),
            ("xi^w", r.xi_class(w, XiVariant::Upper)),
        ] {
            if !r.satisfies_gkm(class) {
                fail(format!("{tag} at {label} fails GKM"));
            }
        }
        for v in g.ids() {
            let below = g.bruhat_leq(v, w);
            let above = g.bruhat_leq(w, v);
            if r.schubert_class(w).restriction(v).is_zero() == below {
                fail(format!(
                    "O_{label} support differs from the lower interval at {}",
                    g.word_label(v)
                ));
            }
            if r.opposite_schubert_class(w).restriction(v).is_zero() == above {
                fail(format!(
                    "O^{label} support differs from the upper interval at {}",
                    g.word_label(v)
                ));
            }
        }
        for i in 0..n {
            let ws = g.right_mul(w, i);
            let expected = if g.length(ws) > g.length(w) { ws } else { w };
            match r.demazure_step(i, r.schubert_class(w)) {
                Ok(d) if &d == r.schubert_class(expected) => {}
                _ => fail(format!(
                    "D_{} O_{label} is not O_{}",
                    i + 1,
                    g.word_label(expected)
                )),
            }
        }
        match r.euler_characteristic(r.schubert_class(w)) {
            Ok(chi) if chi == one => {}
            other => fail(format!("chi(O_{label}) = {other:?}")),
        }
        let delta = if w == g.identity() {
            one.clone()
        } else {
            LaurentPoly::zero(n)
        };
        match r.euler_characteristic(r.xi_class(w, XiVariant::Lower)) {
            Ok(chi) if chi == delta => {}
            other => fail(format!("chi(xi_{label}) = {other:?}")),
        }
    }
    for &(u, v) in &pairs {
        let product = r.kproduct(
            r.opposite_schubert_class(u),
            r.xi_class(v, XiVariant::Lower),
        );
        if !r.satisfies_gkm(&product) {
            fail(format!(
                "O^{} * xi_{} fails GKM",
                g.word_label(u),
                g.word_label(v)
            ));
        }
    }
    for f in &classes {
        if !r.satisfies_gkm(f) {
            fail("sampled class fails GKM".into());
        }
        let direct = r.euler_characteristic_by_localization(f);
        let via_basis = r.expand_in_basis(f, BasisTag::OLower).map(|e| {
            e.coefficients
                .iter()
                .fold(LaurentPoly::zero(n), |a, c| &a + c)
        });
        match (direct, via_basis) {
            (Ok(a), Ok(b)) if a == b => {}
            (a, b) => fail(format!("chi algorithms disagree: {a:?} vs {b:?}")),
        }
        for i in 0..n {
            let once = r.demazure_step(i, f).unwrap();
            if r.demazure_step(i, &once).unwrap() != once {
                fail(format!("D_{} is not idempotent", i + 1));
            }
            if !r.satisfies_gkm(&once) {
                fail(format!("D_{} leaves the GKM ring", i + 1));
            }
        }
    }
    for (k, &(i, j)) in braids.iter().enumerate() {
        let m = braid_order(r, i, j);
        let targets: Vec<&KClass> = if exhaustive {
            classes.iter().collect()
        } else {
            vec![&classes[k % classes.len()]]
        };
        for f in targets {
            if alternating(r, f, i, j, m) != alternating(r, f, j, i, m) {
                fail(format!(
                    "braid relation fails for D_{} and D_{}",
                    i + 1,
                    j + 1
                ));
            }
        }
    }
    failures
}
