//! Verification of the sign-alternation theorems for structure constants.
//!
//! Every coefficient is rewritten as a polynomial in `y_i = e^{∓α_i} − 1`
//! (or in `e^{−β_j} − 1` after restriction to a subtorus) and the integer
//! coefficients are checked against the expected sign. Failures carry enough
//! data to reproduce them offline.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::kring::{BasisTag, Expansion, KClass, KRing, Parabolic};
use crate::laurent::{
    expand_in_shifted_variables, restrict_to_subtorus, JsonInt, LaurentPoly, NonMembership,
    YPolynomial, YVariables,
};
use crate::root_system::{RootSystem, Weight};
use crate::weyl_group::ElementId;

/// The verifiable statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Claim {
    /// Richardson classes in the `O_w` basis, over the configured subtorus.
    Grku51,
    /// `p_{uv}^w` in the `ξ^w` basis.
    Grku52,
    /// `c_{uv}^w` in the `O^w` basis.
    Grra53,
    /// `d_{uv}^w` in the dualizing basis, positive in `e^{α_i} − 1`.
    Dualizing,
    /// Richardson classes over the fixed family of subtori: the identity,
    /// the all-ones row, and the trivial subtorus.
    Richardson,
}

impl Claim {
    pub const ALL: [Claim; 5] = [
        Claim::Grku51,
        Claim::Grku52,
        Claim::Grra53,
        Claim::Dualizing,
        Claim::Richardson,
    ];

    /// The default suite.
    pub const DEFAULT: [Claim; 3] = [Claim::Grra53, Claim::Grku52, Claim::Dualizing];

    pub fn name(self) -> &'static str {
        match self {
            Claim::Grku51 => "grku51",
            Claim::Grku52 => "grku52",
            Claim::Grra53 => "grra53",
            Claim::Dualizing => "dualizing",
            Claim::Richardson => "richardson",
        }
    }

    /// The basis whose structure constants the claim inspects.
    pub fn basis(self) -> BasisTag {
        match self {
            Claim::Grku51 | Claim::Richardson => BasisTag::OLower,
            Claim::Grku52 => BasisTag::XiUpper,
            Claim::Grra53 => BasisTag::OUpper,
            Claim::Dualizing => BasisTag::Dualizing,
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown claim {s:?}; expected one of grku51, grku52, grra53, dualizing, richardson"
                ))
            })
    }
}

impl Serialize for Claim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// Basis of a subtorus `S ⊆ T`, given by the `r × n` matrix whose column `i`
/// is `α_i|_S` in the basis `β_1, …, β_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubtorusBasis {
    matrix: Vec<Vec<i32>>,
}

impl SubtorusBasis {
    pub fn new(matrix: Vec<Vec<i32>>, rank: usize) -> Result<Self> {
        if matrix.is_empty() {
            return Err(Error::Config("subtorus matrix has no rows".into()));
        }
        if matrix.len() > crate::root_system::MAX_VARS {
            return Err(Error::Config(format!(
                "subtorus rank {} exceeds {}",
                matrix.len(),
                crate::root_system::MAX_VARS
            )));
        }
        for row in &matrix {
            if row.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: row.len(),
                });
            }
        }
        Ok(SubtorusBasis { matrix })
    }

    /// `S = T`, `β_i = α_i`.
    pub fn identity(rank: usize) -> Self {
        let matrix = (0..rank)
            .map(|i| (0..rank).map(|j| i32::from(i == j)).collect())
            .collect();
        SubtorusBasis { matrix }
    }

    /// One-dimensional subtorus on which every simple root restricts to `β`.
    pub fn all_ones(rank: usize) -> Self {
        SubtorusBasis {
            matrix: vec![vec![1; rank]],
        }
    }

    /// The trivial subtorus: every character restricts to zero.
    pub fn trivial(rank: usize) -> Self {
        SubtorusBasis {
            matrix: vec![vec![0; rank]],
        }
    }

    /// Parses whitespace-separated integer rows, one row per line; `#` starts
    /// a comment.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let mut matrix = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<i32>().map_err(|_| {
                        Error::Config(format!("subtorus line {}: bad integer {t:?}", k + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            matrix.push(row);
        }
        Self::new(matrix, rank)
    }

    pub fn matrix(&self) -> &[Vec<i32>] {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_positive(&self) -> bool {
        self.matrix.iter().flatten().all(|&a| a >= 0)
    }

    pub fn is_full(&self) -> bool {
        if !self.is_positive() {
            return false;
        }
        let r = self.dim();
        let n = self.matrix[0].len();
        (0..r).all(|j| (0..n).any(|i| (0..r).all(|k| self.matrix[k][i] == i32::from(k == j))))
    }

    /// Largest column sum; bounds how much restriction raises `y`-degrees.
    fn max_column_sum(&self) -> u32 {
        let n = self.matrix[0].len();
        (0..n)
            .map(|i| {
                self.matrix
                    .iter()
                    .map(|row| row[i].unsigned_abs())
                    .sum::<u32>()
            })
            .max()
            .unwrap_or(0)
    }
}

/// Coordinates in which coefficients are expanded.
#[derive(Debug, Clone)]
pub struct YChart {
    pub variables: YVariables,
    pub subtorus: Option<SubtorusBasis>,
}

impl YChart {
    pub fn simple(variables: YVariables) -> Self {
        YChart {
            variables,
            subtorus: None,
        }
    }

    /// Expands `p` in `y_j = e^{∓β_j} − 1` (`β = α` without a subtorus).
    pub fn expand(
        &self,
        rs: &RootSystem,
        p: &LaurentPoly,
        degree_cap: u32,
    ) -> std::result::Result<YPolynomial, NonMembership> {
        let n = rs.rank();
        let mut terms = Vec::with_capacity(p.num_terms());
        for (e, c) in p.terms() {
            let m = rs
                .root_coords(e)
                .ok_or(NonMembership::NotInRootLattice { exponent: *e })?;
            terms.push((m, c.clone()));
        }
        let in_roots = LaurentPoly::from_terms(n, terms);
        let restricted = match &self.subtorus {
            Some(s) => restrict_to_subtorus(&in_roots, s.matrix()).expect("subtorus validated"),
            None => in_roots,
        };
        let x = match self.variables {
            YVariables::NegativeSimpleRoots => {
                restricted.map_exponents(restricted.nvars(), |e| -*e)
            }
            YVariables::PositiveSimpleRoots => restricted,
        };
        expand_in_shifted_variables(&x, degree_cap)
    }

    fn scale_cap(&self, cap: u32) -> u32 {
        match &self.subtorus {
            Some(s) => cap * s.max_column_sum().max(1),
            None => cap,
        }
    }
}

/// Evidence attached to a violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// The signed coefficient has negative `y`-coefficients.
    Sign {
        y_poly: YPolynomial,
        negative_terms: Vec<(Vec<u32>, JsonInt)>,
    },
    /// Iterated differences did not terminate within the degree cap.
    DegreeCap {
        cap: u32,
        multi_index: Vec<u32>,
        residual: LaurentPoly,
    },
    /// An exponent outside the root lattice.
    NotInRootLattice { exponent: Weight },
    /// `e^λ ↦ 1` has the wrong sign.
    Shadow { value: JsonInt },
    /// The coefficients do not rebuild the product they claim to expand.
    Reconstruction { message: String },
    /// A product of `W^P`-indexed classes has a coefficient outside `W^P`.
    OutsideCosetReps,
    /// Two independent computations of the same coefficient disagree.
    CrossPath { other: LaurentPoly },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Word labels: `(u, v, w)` for products, `(v, w, u)` for Richardson classes.
    pub indices: Vec<String>,
    pub coefficient: LaurentPoly,
    pub expected_sign: i32,
    pub witness: Witness,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub claim: Claim,
    pub group: String,
    /// Simple reflections generating `W_P`, 1-based.
    pub parabolic: Vec<usize>,
    pub subtori: Vec<Vec<Vec<i32>>>,
    /// Set when a subtorus basis is not positive: the claim is not a theorem
    /// there and the outcome is informational.
    pub exploratory: bool,
    pub instances: usize,
    pub violations: Vec<Violation>,
    pub status: Status,
}

impl PositivityReport {
    fn new(claim: Claim, ring: &KRing, parabolic: &[usize], subtori: &[SubtorusBasis]) -> Self {
        PositivityReport {
            claim,
            group: ring.group().root_system().name(),
            parabolic: parabolic.iter().map(|i| i + 1).collect(),
            subtori: subtori.iter().map(|s| s.matrix.clone()).collect(),
            exploratory: subtori.iter().any(|s| !s.is_positive()),
            instances: 0,
            violations: Vec::new(),
            status: Status::Pass,
        }
    }

    fn absorb(&mut self, instances: usize, violations: Vec<Violation>) {
        self.instances += instances;
        self.violations.extend(violations);
        self.status = if self.violations.is_empty() {
            Status::Pass
        } else {
            Status::Fail
        };
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Perturbs one structure constant after it is computed, to check that the
/// verifier notices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaultInjection {
    /// Product indices `(u, v)`; for Richardson claims `(v, w)`.
    pub first: ElementId,
    pub second: ElementId,
    /// The perturbed coefficient.
    pub target: ElementId,
    pub delta: LaurentPoly,
}

#[derive(Debug, Clone, Default)]
pub struct VerifyOptions {
    /// Overrides the default `ℓ(u) + ℓ(v) + |R^+|`.
    pub degree_cap: Option<u32>,
    /// Subtorus used by every claim except `richardson`, which has its own
    /// fixed family.
    pub subtorus: Option<SubtorusBasis>,
    pub parabolic: Option<Parabolic>,
    pub fault: Option<FaultInjection>,
}

impl VerifyOptions {
    fn cap_for(&self, ring: &KRing, claim: Claim, a: ElementId, b: ElementId) -> u32 {
        self.degree_cap
            .unwrap_or_else(|| default_degree_cap(ring, claim, a, b))
    }

    fn inject(&self, a: ElementId, b: ElementId, exp: &mut Expansion) {
        if let Some(f) = &self.fault {
            if f.first == a && f.second == b {
                let c = &mut exp.coefficients[f.target.index()];
                *c = &*c + &f.delta;
            }
        }
    }

    fn parabolic_subset(&self) -> Vec<usize> {
        self.parabolic
            .as_ref()
            .map(|p| p.subset().to_vec())
            .unwrap_or_default()
    }
}

/// Default `y`-degree cap: `ℓ(a) + ℓ(b) + |R^+|` for the `O` bases and
/// `ℓ(a) + ℓ(b) + ht(2ρ)` for the `ξ` and dualizing bases, whose constants
/// can carry a factor `e^{−2ρ}` (e.g. `p_{ee}^{w₀}`).
pub fn default_degree_cap(ring: &KRing, claim: Claim, a: ElementId, b: ElementId) -> u32 {
    let g = ring.group();
    let rs = g.root_system();
    let slack = match claim {
        Claim::Grku52 | Claim::Dualizing => {
            let two_rho = rs
                .root_coords(&rs.rho().scaled(2))
                .expect("2ρ lies in the root lattice");
            two_rho.coords().iter().sum::<i32>() as usize
        }
        _ => rs.positive_roots().len(),
    };
    (g.length(a) + g.length(b) + slack) as u32
}

/// Checks that `sign(w) · coeff_w` has nonnegative coefficients in the chart,
/// for every `w`. Zero coefficients pass trivially.
pub fn check_alternation(
    ring: &KRing,
    labels: (&str, &str),
    expansion: &Expansion,
    grading: impl Fn(ElementId) -> i32,
    chart: &YChart,
    degree_cap: u32,
) -> Vec<Violation> {
    let rs = ring.group().root_system();
    let cap = chart.scale_cap(degree_cap);
    let mut out = Vec::new();
    for (w, c) in expansion.terms() {
        let sign = grading(w);
        let indices = vec![
            labels.0.to_string(),
            labels.1.to_string(),
            ring.group().word_label(w),
        ];
        if let Some(witness) = sign_witness(rs, c, sign, chart, cap) {
            out.push(Violation {
                indices,
                coefficient: c.clone(),
                expected_sign: sign,
                witness,
            });
        }
    }
    out
}

fn sign_witness(
    rs: &RootSystem,
    c: &LaurentPoly,
    sign: i32,
    chart: &YChart,
    cap: u32,
) -> Option<Witness> {
    let signed = if sign < 0 { -c } else { c.clone() };
    match chart.expand(rs, &signed, cap) {
        Ok(y) => {
            let negative = y.negative_terms();
            if negative.is_empty() {
                None
            } else {
                Some(Witness::Sign {
                    negative_terms: negative.into_iter().map(|(j, c)| (j, JsonInt(c))).collect(),
                    y_poly: y,
                })
            }
        }
        Err(NonMembership::DegreeCap {
            cap,
            multi_index,
            residual,
        }) => Some(Witness::DegreeCap {
            cap,
            multi_index,
            residual,
        }),
        Err(NonMembership::NotInRootLattice { exponent }) => {
            Some(Witness::NotInRootLattice { exponent })
        }
    }
}

/// `(−1)^{ℓ(w) − ℓ(u) − ℓ(v)} c_{uv}^w ∈ ℕ[e^{−α_i} − 1]`, together with the
/// non-equivariant shadow: `c_{uv}^w` at `e^λ = 1` has that sign or is zero.
pub fn verify_grra(ring: &KRing, options: &VerifyOptions) -> Result<PositivityReport> {
    verify_products(ring, Claim::Grra53, options)
}

/// `(−1)^{ℓ(w) − ℓ(u) − ℓ(v)} p_{uv}^w ∈ ℕ[e^{−α_i} − 1]` in the `ξ^w` basis.
pub fn verify_grku_prime(ring: &KRing, options: &VerifyOptions) -> Result<PositivityReport> {
    verify_products(ring, Claim::Grku52, options)
}

/// `d_{uv}^w ∈ ℕ[e^{α_i} − 1]`, cross-checked against the Serre dual of
/// `c_{uv}^w`.
pub fn verify_dualizing(ring: &KRing, options: &VerifyOptions) -> Result<PositivityReport> {
    if options
        .parabolic
        .as_ref()
        .is_some_and(|p| !p.subset().is_empty())
    {
        return Err(Error::Config(
            "the dualizing claim is implemented for G/B only".into(),
        ));
    }
    verify_products(ring, Claim::Dualizing, options)
}

fn product_chart(claim: Claim, options: &VerifyOptions) -> YChart {
    let variables = if claim == Claim::Dualizing {
        YVariables::PositiveSimpleRoots
    } else {
        YVariables::NegativeSimpleRoots
    };
    YChart {
        variables,
        subtorus: options.subtorus.clone(),
    }
}

fn product_grading(ring: &KRing, claim: Claim, u: ElementId, v: ElementId, w: ElementId) -> i32 {
    match claim {
        Claim::Dualizing => 1,
        _ => ring.grading_sign(u, v, w),
    }
}

fn product_elements(ring: &KRing, options: &VerifyOptions) -> Vec<ElementId> {
    match &options.parabolic {
        Some(p) => p.reps().to_vec(),
        None => ring.group().ids().collect(),
    }
}

/// The product of two basis classes and its expansion, with any configured
/// fault applied to the expansion.
fn product_expansion(
    ring: &KRing,
    claim: Claim,
    options: &VerifyOptions,
    u: ElementId,
    v: ElementId,
) -> Result<(KClass, Expansion)> {
    let basis = claim.basis();
    let (product, mut expansion) = match (&options.parabolic, basis) {
        (Some(p), BasisTag::XiUpper) => {
            let product = p.xi_upper(ring, u).mul(&p.xi_upper(ring, v));
            let expansion = p.expand_xi_upper(ring, &product)?;
            (product, expansion)
        }
        _ => {
            let product = ring.basis_class(basis, u).mul(&ring.basis_class(basis, v));
            (product, ring.structure_constants(u, v, basis)?)
        }
    };
    options.inject(u, v, &mut expansion);
    Ok((product, expansion))
}

fn verify_products(
    ring: &KRing,
    claim: Claim,
    options: &VerifyOptions,
) -> Result<PositivityReport> {
    let subset = options.parabolic_subset();
    let subtori: Vec<SubtorusBasis> = options.subtorus.iter().cloned().collect();
    let mut report = PositivityReport::new(claim, ring, &subset, &subtori);
    let elements = product_elements(ring, options);
    let chart = product_chart(claim, options);
    let pairs: Vec<(ElementId, ElementId)> = elements
        .iter()
        .flat_map(|&u| elements.iter().map(move |&v| (u, v)))
        .collect();
    let results = pairs
        .par_iter()
        .map(|&(u, v)| check_product(ring, claim, options, &chart, elements.len(), u, v))
        .collect::<Result<Vec<_>>>()?;
    for (instances, violations) in results {
        report.absorb(instances, violations);
    }
    Ok(report)
}

fn check_product(
    ring: &KRing,
    claim: Claim,
    options: &VerifyOptions,
    chart: &YChart,
    instances: usize,
    u: ElementId,
    v: ElementId,
) -> Result<(usize, Vec<Violation>)> {
    let g = ring.group();
    let (lu, lv) = (g.word_label(u), g.word_label(v));
    let basis = claim.basis();
    let (product, expansion) = product_expansion(ring, claim, options, u, v)?;

    let mut violations = Vec::new();
    let labels3 = |w: ElementId| vec![lu.clone(), lv.clone(), g.word_label(w)];

    let rebuilt = match (&options.parabolic, basis) {
        (Some(p), BasisTag::XiUpper) => {
            let mut total = ring.zero_class();
            for (w, c) in expansion.terms() {
                if p.contains(w) {
                    total = total.add(&p.xi_upper(ring, w).scale(c));
                }
            }
            total
        }
        (_, BasisTag::Dualizing) => ring.reconstruct(&expansion).mul(&ring.canonical_class()),
        _ => ring.reconstruct(&expansion),
    };
    if rebuilt != product {
        violations.push(Violation {
            indices: vec![lu.clone(), lv.clone()],
            coefficient: LaurentPoly::zero(ring.nvars()),
            expected_sign: 0,
            witness: Witness::Reconstruction {
                message: format!(
                    "Σ coefficients · basis differs from the product in the {} basis",
                    basis.name()
                ),
            },
        });
    }

    if let Some(p) = &options.parabolic {
        for (w, c) in expansion.terms() {
            if !p.contains(w) {
                violations.push(Violation {
                    indices: labels3(w),
                    coefficient: c.clone(),
                    expected_sign: 0,
                    witness: Witness::OutsideCosetReps,
                });
            }
        }
    }

    let grading = |w: ElementId| product_grading(ring, claim, u, v, w);
    let cap = options.cap_for(ring, claim, u, v);
    violations.extend(check_alternation(
        ring,
        (&lu, &lv),
        &expansion,
        grading,
        chart,
        cap,
    ));

    match claim {
        Claim::Grra53 => {
            for (w, value) in KRing::specialize_at_one(&expansion).into_iter().enumerate() {
                let w = ElementId::from_index(w);
                let sign = ring.grading_sign(u, v, w);
                if !KRing::has_sign_or_zero(&value, sign) {
                    violations.push(Violation {
                        indices: labels3(w),
                        coefficient: expansion.coefficient(w).clone(),
                        expected_sign: sign,
                        witness: Witness::Shadow {
                            value: JsonInt(value),
                        },
                    });
                }
            }
        }
        Claim::Dualizing => {
            let c = ring.structure_constants(u, v, BasisTag::OUpper)?;
            let other = ring.dualizing_from_opposite(u, v, &c);
            for w in g.ids() {
                if other.coefficient(w) != expansion.coefficient(w) {
                    violations.push(Violation {
                        indices: labels3(w),
                        coefficient: expansion.coefficient(w).clone(),
                        expected_sign: 1,
                        witness: Witness::CrossPath {
                            other: other.coefficient(w).clone(),
                        },
                    });
                }
            }
        }
        _ => {}
    }
    Ok((instances, violations))
}

/// Subtorus alternation for a single Richardson variety `Y = X_v ∩ X^w`: writing
/// `[O_Y] = Σ a_u O_u`, checks `(−1)^{dim Y − ℓ(u)} a_u|_S ∈ ℕ[e^{−β_j} − 1]`.
pub fn verify_grku_richardson(
    ring: &KRing,
    v: ElementId,
    w: ElementId,
    basis: &SubtorusBasis,
) -> Result<PositivityReport> {
    if !basis.is_positive() {
        return Err(Error::Precondition("subtorus basis is not positive".into()));
    }
    let options = VerifyOptions::default();
    let mut report = PositivityReport::new(Claim::Grku51, ring, &[], std::slice::from_ref(basis));
    let (instances, violations) = check_richardson(ring, &options, basis, v, w)?;
    report.absorb(instances, violations);
    Ok(report)
}

/// `(−1)^{dim Y − ℓ(u)}` for `Y = X_v ∩ X^w`.
fn richardson_grading(ring: &KRing, v: ElementId, w: ElementId, u: ElementId) -> i32 {
    let g = ring.group();
    let dim = g.length(v) as i64 - g.length(w) as i64;
    if (dim - g.length(u) as i64).rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

fn check_richardson(
    ring: &KRing,
    options: &VerifyOptions,
    basis: &SubtorusBasis,
    v: ElementId,
    w: ElementId,
) -> Result<(usize, Vec<Violation>)> {
    let g = ring.group();
    if !g.bruhat_leq(w, v) {
        return Err(Error::Precondition(format!(
            "Richardson variety X_{} ∩ X^{} is empty",
            g.word_label(v),
            g.word_label(w)
        )));
    }
    let class = ring.richardson_class(v, w);
    let mut expansion = ring.expand_in_basis(&class, BasisTag::OLower)?;
    options.inject(v, w, &mut expansion);
    let (lv, lw) = (g.word_label(v), g.word_label(w));
    let mut violations = Vec::new();
    if ring.reconstruct(&expansion) != class {
        violations.push(Violation {
            indices: vec![lv.clone(), lw.clone()],
            coefficient: LaurentPoly::zero(ring.nvars()),
            expected_sign: 0,
            witness: Witness::Reconstruction {
                message: "Σ a_u O_u differs from the Richardson class".into(),
            },
        });
    }
    let grading = |u: ElementId| richardson_grading(ring, v, w, u);
    let chart = YChart {
        variables: YVariables::NegativeSimpleRoots,
        subtorus: Some(basis.clone()),
    };
    let cap = options.cap_for(ring, Claim::Grku51, v, w);
    violations.extend(check_alternation(
        ring,
        (&lv, &lw),
        &expansion,
        grading,
        &chart,
        cap,
    ));
    Ok((g.order(), violations))
}

fn verify_richardson_family(
    ring: &KRing,
    claim: Claim,
    options: &VerifyOptions,
    subtori: &[SubtorusBasis],
) -> Result<PositivityReport> {
    let g = ring.group();
    let mut report = PositivityReport::new(claim, ring, &[], subtori);
    let pairs: Vec<(ElementId, ElementId)> = g
        .ids()
        .flat_map(|v| g.ids().map(move |w| (v, w)))
        .filter(|&(v, w)| g.bruhat_leq(w, v))
        .collect();
    for basis in subtori {
        let results = pairs
            .par_iter()
            .map(|&(v, w)| check_richardson(ring, options, basis, v, w))
            .collect::<Result<Vec<_>>>()?;
        for (instances, violations) in results {
            report.absorb(instances, violations);
        }
    }
    Ok(report)
}

/// Subtorus alternation over every nonempty Richardson variety with the configured
/// subtorus (the identity by default). A non-positive basis is accepted and
/// marks the report exploratory.
pub fn verify_grku51(ring: &KRing, options: &VerifyOptions) -> Result<PositivityReport> {
    if options
        .parabolic
        .as_ref()
        .is_some_and(|p| !p.subset().is_empty())
    {
        return Err(Error::Config(
            "Richardson claims are implemented for G/B only".into(),
        ));
    }
    let basis = options
        .subtorus
        .clone()
        .unwrap_or_else(|| SubtorusBasis::identity(ring.nvars()));
    verify_richardson_family(ring, Claim::Grku51, options, &[basis])
}

/// Subtorus alternation over every nonempty Richardson variety and the fixed
/// family of subtori: identity, all-ones row and the trivial torus.
pub fn verify_richardson(ring: &KRing, options: &VerifyOptions) -> Result<PositivityReport> {
    if options
        .parabolic
        .as_ref()
        .is_some_and(|p| !p.subset().is_empty())
    {
        return Err(Error::Config(
            "Richardson claims are implemented for G/B only".into(),
        ));
    }
    let n = ring.nvars();
    let family = [
        SubtorusBasis::identity(n),
        SubtorusBasis::all_ones(n),
        SubtorusBasis::trivial(n),
    ];
    verify_richardson_family(ring, Claim::Richardson, options, &family)
}

/// One coefficient in a structure-constant table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstantEntry {
    pub laurent: LaurentPoly,
    /// Expansion of `grading_sign · laurent` in the claim's `y` variables;
    /// absent when it does not terminate within the degree cap.
    pub y_poly: Option<YPolynomial>,
    pub grading_sign: i32,
}

/// The nonzero coefficients of one product `B_u · B_v` (for the Richardson
/// claims, of `[O_{X_u ∩ X^v}]` in the `O_w` basis).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableEntry {
    pub claim: Claim,
    pub u_word: String,
    pub v_word: String,
    pub constants: BTreeMap<String, ConstantEntry>,
}

/// Structure constants behind a claim, in `(u, v)` order. Richardson claims
/// use the configured subtorus (identity by default).
pub fn claim_table(ring: &KRing, claim: Claim, options: &VerifyOptions) -> Result<Vec<TableEntry>> {
    let g = ring.group();
    let rs = g.root_system();
    let richardson = matches!(claim, Claim::Grku51 | Claim::Richardson);
    if richardson
        && options
            .parabolic
            .as_ref()
            .is_some_and(|p| !p.subset().is_empty())
    {
        return Err(Error::Config(
            "Richardson claims are implemented for G/B only".into(),
        ));
    }
    let pairs: Vec<(ElementId, ElementId)> = if richardson {
        g.ids()
            .flat_map(|v| g.ids().map(move |w| (v, w)))
            .filter(|&(v, w)| g.bruhat_leq(w, v))
            .collect()
    } else {
        let elements = product_elements(ring, options);
        elements
            .iter()
            .flat_map(|&u| elements.iter().map(move |&v| (u, v)))
            .collect()
    };
    let chart = if richardson {
        YChart {
            variables: YVariables::NegativeSimpleRoots,
            subtorus: Some(
                options
                    .subtorus
                    .clone()
                    .unwrap_or_else(|| SubtorusBasis::identity(ring.nvars())),
            ),
        }
    } else {
        product_chart(claim, options)
    };
    pairs
        .par_iter()
        .map(|&(a, b)| {
            let expansion = if richardson {
                let mut e = ring.expand_in_basis(&ring.richardson_class(a, b), BasisTag::OLower)?;
                options.inject(a, b, &mut e);
                e
            } else {
                product_expansion(ring, claim, options, a, b)?.1
            };
            let cap = chart.scale_cap(options.cap_for(ring, claim, a, b));
            let constants = expansion
                .terms()
                .map(|(w, c)| {
                    let grading_sign = if richardson {
                        richardson_grading(ring, a, b, w)
                    } else {
                        product_grading(ring, claim, a, b, w)
                    };
                    let signed = if grading_sign < 0 { -c } else { c.clone() };
                    let entry = ConstantEntry {
                        laurent: c.clone(),
                        y_poly: chart.expand(rs, &signed, cap).ok(),
                        grading_sign,
                    };
                    (g.word_label(w), entry)
                })
                .collect();
            Ok(TableEntry {
                claim,
                u_word: g.word_label(a),
                v_word: g.word_label(b),
                constants,
            })
        })
        .collect()
}

pub fn verify_claim(
    ring: &KRing,
    claim: Claim,
    options: &VerifyOptions,
) -> Result<PositivityReport> {
    match claim {
        Claim::Grku51 => verify_grku51(ring, options),
        Claim::Grku52 => verify_grku_prime(ring, options),
        Claim::Grra53 => verify_grra(ring, options),
        Claim::Dualizing => verify_dualizing(ring, options),
        Claim::Richardson => verify_richardson(ring, options),
    }
}
