//! `K_T(G/B)` in the fixed-point model.
//!
//! A [`KClass`] stores one Laurent polynomial per Weyl group element: its
//! restriction to the fixed point `vB`. Conventions used throughout:
//!
//! * the tangent weights at `vB` are `−vα` for `α ∈ R^+`;
//! * `O_e|_e = ∏_{α>0} (1 − e^α)` and `O_{w s_i} = D_i O_w` when `w s_i > w`;
//! * `O^w = Φ(O_{w₀w})` with `(Φf)(v) = w₀·f(w₀v)`;
//! * `L_λ|_v = e^{−vλ}`.
//!
//! These are pinned by the duality `⟨O_w, ξ^v⟩ = δ_{w,v}` and `χ(O_w) = 1`,
//! both of which the test suite checks exhaustively.

mod cache;
mod parabolic;

pub use cache::{reduced_word_hash, BasisCache, CacheStatus, CACHE_SCHEMA_VERSION};
pub use parabolic::Parabolic;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laurent::{weyl_act, LaurentPoly};
use crate::root_system::Weight;
use crate::weyl_group::{ElementId, WeylGroup};

/// A class in `K_T(G/B)`, given by its fixed-point restrictions.
#[derive(Clone, PartialEq, Eq)]
pub struct KClass {
    restrictions: Vec<LaurentPoly>,
}

impl KClass {
    pub fn zero(order: usize, nvars: usize) -> Self {
        KClass {
            restrictions: vec![LaurentPoly::zero(nvars); order],
        }
    }

    /// The pullback of `p ∈ R(T)` from a point.
    pub fn constant(order: usize, p: &LaurentPoly) -> Self {
        KClass {
            restrictions: vec![p.clone(); order],
        }
    }

    pub fn from_restrictions(restrictions: Vec<LaurentPoly>) -> Self {
        KClass { restrictions }
    }

    pub fn restriction(&self, v: ElementId) -> &LaurentPoly {
        &self.restrictions[v.index()]
    }

    pub fn restrictions(&self) -> &[LaurentPoly] {
        &self.restrictions
    }

    pub fn is_zero(&self) -> bool {
        self.restrictions.iter().all(LaurentPoly::is_zero)
    }

    /// Fixed points with nonzero restriction.
    pub fn support(&self) -> Vec<ElementId> {
        self.restrictions
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(k, _)| ElementId::from_index(k))
            .collect()
    }

    pub fn add(&self, other: &KClass) -> KClass {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        self.zip_with(other, |a, b| a - b)
    }

    /// Pointwise product; the ring structure of `K_T(G/B)`.
    pub fn mul(&self, other: &KClass) -> KClass {
        self.zip_with(other, |a, b| a * b)
    }

    /// `R(T)`-module action.
    pub fn scale(&self, p: &LaurentPoly) -> KClass {
        KClass {
            restrictions: self.restrictions.iter().map(|r| r * p).collect(),
        }
    }

    pub fn negate(&self) -> KClass {
        KClass {
            restrictions: self.restrictions.iter().map(|r| -r).collect(),
        }
    }

    /// Pointwise exact division by a class whose restrictions are units.
    pub fn divide_by_unit(&self, unit: &KClass) -> Result<KClass> {
        let restrictions = self
            .restrictions
            .iter()
            .zip(&unit.restrictions)
            .map(|(a, u)| {
                a.divide_exact(u)
                    .map_err(|e| Error::Invariant(format!("division by unit class failed: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(KClass { restrictions })
    }

    fn zip_with(
        &self,
        other: &KClass,
        f: impl Fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly,
    ) -> KClass {
        assert_eq!(self.restrictions.len(), other.restrictions.len());
        KClass {
            restrictions: self
                .restrictions
                .iter()
                .zip(&other.restrictions)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl fmt::Debug for KClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.restrictions).finish()
    }
}

/// The named bases of `K_T(G/B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasisTag {
    /// Schubert structure sheaves `O_w`.
    #[serde(rename = "O_lower")]
    OLower,
    /// Opposite Schubert structure sheaves `O^w`.
    #[serde(rename = "O_upper")]
    OUpper,
    /// `ξ_w = [O_{X_w}(−∂X_w)]`.
    #[serde(rename = "xi_lower")]
    XiLower,
    /// `ξ^w = [O_{X^w}(−∂X^w)]`.
    #[serde(rename = "xi_upper")]
    XiUpper,
    /// Dualizing sheaves `[ω_{X^w}]`.
    #[serde(rename = "dualizing")]
    Dualizing,
}

impl BasisTag {
    pub const ALL: [BasisTag; 5] = [
        BasisTag::OLower,
        BasisTag::OUpper,
        BasisTag::XiLower,
        BasisTag::XiUpper,
        BasisTag::Dualizing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BasisTag::OLower => "O_lower",
            BasisTag::OUpper => "O_upper",
            BasisTag::XiLower => "xi_lower",
            BasisTag::XiUpper => "xi_upper",
            BasisTag::Dualizing => "dualizing",
        }
    }
}

impl std::str::FromStr for BasisTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BasisTag::ALL
            .into_iter()
            .find(|b| b.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown basis {s:?}")))
    }
}

/// Which of the two ξ families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum XiVariant {
    Lower,
    Upper,
}

/// Coefficients of a class in one of the named bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Expansion {
    pub basis: BasisTag,
    pub coefficients: Vec<LaurentPoly>,
}

impl Expansion {
    pub fn coefficient(&self, w: ElementId) -> &LaurentPoly {
        &self.coefficients[w.index()]
    }

    pub fn support(&self) -> Vec<ElementId> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, _)| ElementId::from_index(k))
            .collect()
    }

    /// Nonzero `(w, coefficient)` pairs in element order.
    pub fn terms(&self) -> impl Iterator<Item = (ElementId, &LaurentPoly)> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (ElementId::from_index(k), c))
    }
}

/// Fixed point and positive root at which a class fails the GKM congruence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmViolation {
    pub point: ElementId,
    pub root: Weight,
}

/// The engine: a Weyl group together with all basis classes.
#[derive(Clone)]
pub struct KRing {
    group: WeylGroup,
    schubert: Vec<KClass>,
    opposite: Vec<KClass>,
    xi_lower: Vec<KClass>,
    xi_upper: Vec<KClass>,
    /// `e^{ρ}·L_{−ρ}`, so that `[ω_{X^w}] = twist · ξ^w`.
    dualizing_twist: KClass,
    by_length: Vec<ElementId>,
    /// `Δ = ∏_{α>0} (1 − e^α)`.
    delta: LaurentPoly,
    /// `Δ / ∏_{α>0}(1 − e^{vα})`, a signed monomial for each `v`.
    localization_factors: Vec<LaurentPoly>,
}

impl fmt::Debug for KRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("KRing").field("group", &self.group).finish()
    }
}

impl KRing {
    /// Builds every Schubert class by Demazure recursion along the stored
    /// reduced words, then derives the opposite and ξ classes.
    pub fn new(group: WeylGroup) -> Result<Self> {
        let n = group.rank();
        let order = group.order();
        let rs = group.root_system().clone();

        let mut base = KClass::zero(order, n);
        let mut top = LaurentPoly::one(n);
        for alpha in rs.positive_roots() {
            top = &top * &LaurentPoly::one_minus_exp(*alpha);
        }
        base.restrictions[group.identity().index()] = top;

        let mut schubert: Vec<Option<KClass>> = vec![None; order];
        schubert[0] = Some(base);
        // BFS order: the prefix of every stored word precedes the element
        for w in group.ids().skip(1) {
            let word = group.reduced_word(w);
            let (&last, prefix) = word.split_last().expect("non-identity has a word");
            let prev = group.from_word(prefix)?;
            let prev_class = schubert[prev.index()]
                .as_ref()
                .expect("prefix computed before extension");
            let next = demazure_step_in(&group, last, prev_class)?;
            schubert[w.index()] = Some(next);
        }
        let schubert: Vec<KClass> = schubert
            .into_iter()
            .map(|c| c.expect("all computed"))
            .collect();
        let xi_lower = mobius_lower(&group, &schubert);
        Self::assemble(group, schubert, xi_lower)
    }

    /// Builds the engine from precomputed `O_w` and `ξ_w` tables (e.g. a cache).
    pub fn from_tables(
        group: WeylGroup,
        schubert: Vec<KClass>,
        xi_lower: Vec<KClass>,
    ) -> Result<Self> {
        if schubert.len() != group.order() || xi_lower.len() != group.order() {
            return Err(Error::Cache("table size does not match group order".into()));
        }
        Self::assemble(group, schubert, xi_lower)
    }

    fn assemble(group: WeylGroup, schubert: Vec<KClass>, xi_lower: Vec<KClass>) -> Result<Self> {
        let n = group.rank();
        let rs = group.root_system().clone();
        let w0 = group.longest();
        let flip = |f: &KClass| flip_in(&group, f);
        let opposite: Vec<KClass> = group
            .ids()
            .map(|w| flip(&schubert[group.multiply(w0, w).index()]))
            .collect();
        let xi_upper: Vec<KClass> = group
            .ids()
            .map(|w| flip(&xi_lower[group.multiply(w0, w).index()]))
            .collect();

        let rho = rs.rho();
        let dualizing_twist = KClass {
            restrictions: group
                .ids()
                .map(|v| LaurentPoly::exp(rho + group.act(v, &rho)))
                .collect(),
        };

        let mut delta = LaurentPoly::one(n);
        for alpha in rs.positive_roots() {
            delta = &delta * &LaurentPoly::one_minus_exp(*alpha);
        }
        let localization_factors = group
            .ids()
            .map(|v| {
                let mut d = LaurentPoly::one(n);
                for alpha in rs.positive_roots() {
                    d = &d * &LaurentPoly::one_minus_exp(group.act(v, alpha));
                }
                delta
                    .divide_exact(&d)
                    .map_err(|e| Error::Invariant(format!("localization denominator: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;

        let by_length = group.ids_by_length();
        Ok(KRing {
            group,
            schubert,
            opposite,
            xi_lower,
            xi_upper,
            dualizing_twist,
            by_length,
            delta,
            localization_factors,
        })
    }

    pub fn group(&self) -> &WeylGroup {
        &self.group
    }

    pub fn nvars(&self) -> usize {
        self.group.rank()
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn zero_class(&self) -> KClass {
        KClass::zero(self.order(), self.nvars())
    }

    /// The unit class `[O_X]`.
    pub fn unit_class(&self) -> KClass {
        KClass::constant(self.order(), &LaurentPoly::one(self.nvars()))
    }

    /// The trivial line bundle with `T` acting by the character `λ`.
    pub fn character_class(&self, lambda: &Weight) -> KClass {
        KClass::constant(self.order(), &LaurentPoly::exp(*lambda))
    }

    /// Demazure operator
    /// `(D_i f)(v) = (f(v) − e^{vα_i} f(v s_i)) / (1 − e^{vα_i})`.
    pub fn demazure_step(&self, i: usize, f: &KClass) -> Result<KClass> {
        if i >= self.nvars() {
            return Err(Error::IndexOutOfRange {
                index: i,
                rank: self.nvars(),
            });
        }
        demazure_step_in(&self.group, i, f)
    }

    /// `(Φf)(v) = w₀·f(w₀v)`, the involution exchanging `O_{w₀w}` and `O^w`.
    pub fn flip(&self, f: &KClass) -> KClass {
        flip_in(&self.group, f)
    }

    /// `O_w = [O_{X_w}]`
    pub fn schubert_class(&self, w: ElementId) -> &KClass {
        &self.schubert[w.index()]
    }

    /// `O^w = [O_{X^w}]`
    pub fn opposite_schubert_class(&self, w: ElementId) -> &KClass {
        &self.opposite[w.index()]
    }

    /// `ξ_w = Σ_{v≤w} (−1)^{ℓ(w)−ℓ(v)} O_v`, `ξ^w = Σ_{v≥w} (−1)^{ℓ(v)−ℓ(w)} O^v`.
    pub fn xi_class(&self, w: ElementId, variant: XiVariant) -> &KClass {
        match variant {
            XiVariant::Lower => &self.xi_lower[w.index()],
            XiVariant::Upper => &self.xi_upper[w.index()],
        }
    }

    pub fn basis_class(&self, tag: BasisTag, w: ElementId) -> KClass {
        match tag {
            BasisTag::OLower => self.schubert[w.index()].clone(),
            BasisTag::OUpper => self.opposite[w.index()].clone(),
            BasisTag::XiLower => self.xi_lower[w.index()].clone(),
            BasisTag::XiUpper => self.xi_upper[w.index()].clone(),
            BasisTag::Dualizing => self.dualizing_class(w),
        }
    }

    pub fn kproduct(&self, f: &KClass, g: &KClass) -> KClass {
        f.mul(g)
    }

    /// `L_λ = G ×^B ℂ_{−λ}`, restricting to `e^{−vλ}` at `vB`.
    pub fn line_bundle_class(&self, lambda: &Weight) -> KClass {
        KClass {
            restrictions: self
                .group
                .ids()
                .map(|v| LaurentPoly::exp(-self.group.act(v, lambda)))
                .collect(),
        }
    }

    /// `[ω_{X^w}] = e^{ρ}·L_{−ρ}·ξ^w`.
    pub fn dualizing_class(&self, w: ElementId) -> KClass {
        self.dualizing_twist.mul(&self.xi_upper[w.index()])
    }

    /// `[ω_X]`, equal to `L_{−2ρ}`.
    pub fn canonical_class(&self) -> KClass {
        self.dualizing_class(self.group.identity())
    }

    /// `[O_{X_v ∩ X^w}] = O_v · O^w`; zero unless `w ≤ v`.
    pub fn richardson_class(&self, v: ElementId, w: ElementId) -> KClass {
        self.schubert[v.index()].mul(&self.opposite[w.index()])
    }

    /// Fixed points and roots where `f(v) ≢ f(v s_β) mod (1 − e^{vβ})`.
    pub fn gkm_violations(&self, f: &KClass) -> Vec<GkmViolation> {
        let g = &self.group;
        let mut out = Vec::new();
        for v in g.ids() {
            for (beta, t) in g.reflections() {
                let other = g.multiply(v, *t);
                if other < v {
                    continue;
                }
                let diff = f.restriction(v) - f.restriction(other);
                if diff.is_zero() {
                    continue;
                }
                let weight = g.act(v, beta);
                if diff
                    .divide_exact(&LaurentPoly::one_minus_exp(weight))
                    .is_err()
                {
                    out.push(GkmViolation {
                        point: v,
                        root: *beta,
                    });
                }
            }
        }
        out
    }

    pub fn satisfies_gkm(&self, f: &KClass) -> bool {
        self.gkm_violations(f).is_empty()
    }

    /// `χ(f) = π_*(f)`.
    ///
    /// Computed from the `O_w` expansion using `χ(O_w) = 1`, and checked
    /// against the localization sum `Σ_v f(v) / ∏_{α>0}(1 − e^{vα})`.
    pub fn euler_characteristic(&self, f: &KClass) -> Result<LaurentPoly> {
        let expansion = self.expand_in_basis(f, BasisTag::OLower)?;
        let mut chi = LaurentPoly::zero(self.nvars());
        for c in &expansion.coefficients {
            chi = &chi + c;
        }
        let by_localization = self.euler_characteristic_by_localization(f)?;
        if chi != by_localization {
            return Err(Error::Invariant(format!(
                "Euler characteristic mismatch: expansion gives {chi}, localization gives {by_localization}"
            )));
        }
        Ok(chi)
    }

    /// Localization formula over the common denominator `∏_{α>0}(1 − e^α)`.
    pub fn euler_characteristic_by_localization(&self, f: &KClass) -> Result<LaurentPoly> {
        let mut numerator = LaurentPoly::zero(self.nvars());
        for (r, m) in f.restrictions.iter().zip(&self.localization_factors) {
            if !r.is_zero() {
                numerator = &numerator + &(r * m);
            }
        }
        numerator
            .divide_exact(&self.delta)
            .map_err(|e| Error::Invariant(format!("localization sum not in R(T): {e}")))
    }

    /// `⟨f, g⟩ = χ(f · g)`.
    pub fn pairing(&self, f: &KClass, g: &KClass) -> Result<LaurentPoly> {
        self.euler_characteristic(&f.mul(g))
    }

    /// Expands `f` in the requested basis and verifies the reconstruction.
    pub fn expand_in_basis(&self, f: &KClass, basis: BasisTag) -> Result<Expansion> {
        let expansion = self.expand_unchecked(f, basis)?;
        if self.reconstruct(&expansion) != *f {
            return Err(Error::Invariant(format!(
                "reconstruction from the {} expansion differs from the source class",
                basis.name()
            )));
        }
        Ok(expansion)
    }

    fn expand_unchecked(&self, f: &KClass, basis: BasisTag) -> Result<Expansion> {
        let coefficients = match basis {
            BasisTag::OLower => self.triangular_solve(f, &self.schubert, true)?,
            BasisTag::OUpper => self.triangular_solve(f, &self.opposite, false)?,
            BasisTag::XiLower => {
                // O_v = Σ_{w≤v} ξ_w
                let c = self.triangular_solve(f, &self.schubert, true)?;
                self.zeta_sum(&c, |w, v| self.group.bruhat_leq(w, v))
            }
            BasisTag::XiUpper => {
                // O^v = Σ_{w≥v} ξ^w
                let c = self.triangular_solve(f, &self.opposite, false)?;
                self.zeta_sum(&c, |w, v| self.group.bruhat_leq(v, w))
            }
            BasisTag::Dualizing => {
                let untwisted = f.divide_by_unit(&self.dualizing_twist)?;
                let c = self.triangular_solve(&untwisted, &self.opposite, false)?;
                self.zeta_sum(&c, |w, v| self.group.bruhat_leq(v, w))
            }
        };
        Ok(Expansion {
            basis,
            coefficients,
        })
    }

    /// `coeff(w) = Σ_{v : related(w, v)} c_v`.
    fn zeta_sum(
        &self,
        c: &[LaurentPoly],
        related: impl Fn(ElementId, ElementId) -> bool,
    ) -> Vec<LaurentPoly> {
        self.group
            .ids()
            .map(|w| {
                let mut acc = LaurentPoly::zero(self.nvars());
                for v in self.group.ids() {
                    if !c[v.index()].is_zero() && related(w, v) {
                        acc = &acc + &c[v.index()];
                    }
                }
                acc
            })
            .collect()
    }

    /// Solves `f = Σ c_w B_w` for a basis supported on lower (`descending =
    /// true`, `B_w` supported on `[e, w]`) or upper intervals.
    fn triangular_solve(
        &self,
        f: &KClass,
        basis: &[KClass],
        descending: bool,
    ) -> Result<Vec<LaurentPoly>> {
        let n = self.nvars();
        let mut coeffs = vec![LaurentPoly::zero(n); self.order()];
        let mut nonzero: Vec<ElementId> = Vec::new();
        let order: Box<dyn Iterator<Item = &ElementId>> = if descending {
            Box::new(self.by_length.iter().rev())
        } else {
            Box::new(self.by_length.iter())
        };
        for &x in order {
            let mut r = f.restriction(x).clone();
            for &w in &nonzero {
                let bw = basis[w.index()].restriction(x);
                if !bw.is_zero() {
                    r = &r - &(&coeffs[w.index()] * bw);
                }
            }
            if r.is_zero() {
                continue;
            }
            let c = r
                .divide_exact(basis[x.index()].restriction(x))
                .map_err(|e| {
                    Error::Invariant(format!(
                        "triangular expansion stuck at {}: {e}",
                        self.group.word_label(x)
                    ))
                })?;
            coeffs[x.index()] = c;
            nonzero.push(x);
        }
        Ok(coeffs)
    }

    /// `Σ_w coeff_w · B_w`.
    pub fn reconstruct(&self, expansion: &Expansion) -> KClass {
        let mut total = self.zero_class();
        for (w, c) in expansion.terms() {
            total = total.add(&self.basis_class(expansion.basis, w).scale(c));
        }
        total
    }

    /// Structure constants of the requested basis:
    /// `B_u · B_v = Σ_w c_{uv}^w B_w`.
    ///
    /// For [`BasisTag::Dualizing`] the normalisation is
    /// `[ω_{X^u}]·[ω_{X^v}] = Σ_w d_{uv}^w [ω_{X^w}]·[ω_X]`.
    pub fn structure_constants(
        &self,
        u: ElementId,
        v: ElementId,
        basis: BasisTag,
    ) -> Result<Expansion> {
        let product = self.basis_class(basis, u).mul(&self.basis_class(basis, v));
        let target = match basis {
            BasisTag::Dualizing => product.divide_by_unit(&self.canonical_class())?,
            _ => product,
        };
        self.expand_in_basis(&target, basis)
    }

    /// Structure constants for every pair in `elements × elements`, computed
    /// in parallel and returned in row-major `(u, v)` order.
    pub fn structure_constant_table(
        &self,
        elements: &[ElementId],
        basis: BasisTag,
    ) -> Result<Vec<((ElementId, ElementId), Expansion)>> {
        let pairs: Vec<(ElementId, ElementId)> = elements
            .iter()
            .flat_map(|&u| elements.iter().map(move |&v| (u, v)))
            .collect();
        pairs
            .into_par_iter()
            .map(|(u, v)| Ok(((u, v), self.structure_constants(u, v, basis)?)))
            .collect()
    }

    /// Checks that an expansion indexed by `W^P` stays in `W^P`.
    pub fn parabolic_reduce(
        &self,
        expansion: &Expansion,
        parabolic: &[usize],
    ) -> Result<Expansion> {
        self.group.validate_parabolic(parabolic)?;
        for (w, c) in expansion.terms() {
            if !self.group.is_minimal_rep(w, parabolic) {
                return Err(Error::Invariant(format!(
                    "coefficient {c} at {} lies outside W^P",
                    self.group.word_label(w)
                )));
            }
        }
        Ok(expansion.clone())
    }

    /// Sign `(−1)^{ℓ(w)−ℓ(u)−ℓ(v)}` as ±1.
    pub fn grading_sign(&self, u: ElementId, v: ElementId, w: ElementId) -> i32 {
        let l = |x| self.group.length(x) as i64;
        if (l(w) - l(u) - l(v)).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// `d_{uv}^w` recomputed from `c_{uv}^w` through Serre duality:
    /// `d_{uv}^w = (−1)^{ℓ(u)+ℓ(v)−ℓ(w)} (c_{uv}^w)^*`.
    pub fn dualizing_from_opposite(&self, u: ElementId, v: ElementId, c: &Expansion) -> Expansion {
        assert_eq!(c.basis, BasisTag::OUpper);
        let coefficients = self
            .group
            .ids()
            .map(|w| {
                let dual = c.coefficient(w).dual();
                if self.grading_sign(u, v, w) < 0 {
                    -dual
                } else {
                    dual
                }
            })
            .collect();
        Expansion {
            basis: BasisTag::Dualizing,
            coefficients,
        }
    }

    /// Non-equivariant specialisation `e^λ ↦ 1` of every coefficient.
    pub fn specialize_at_one(expansion: &Expansion) -> Vec<BigInt> {
        expansion
            .coefficients
            .iter()
            .map(LaurentPoly::eval_at_one)
            .collect()
    }

    /// Whether an integer has the sign `sign` or is zero.
    pub fn has_sign_or_zero(value: &BigInt, sign: i32) -> bool {
        if sign > 0 {
            !value.is_negative()
        } else {
            !value.is_positive()
        }
    }

    pub(crate) fn schubert_tables(&self) -> (&[KClass], &[KClass]) {
        (&self.schubert, &self.xi_lower)
    }

    /// Elements in order of increasing length.
    pub fn elements_by_length(&self) -> &[ElementId] {
        &self.by_length
    }

    /// `O^w|_w`, the leading restriction of an opposite Schubert class.
    pub fn opposite_diagonal(&self, w: ElementId) -> &LaurentPoly {
        self.opposite[w.index()].restriction(w)
    }

    pub fn unit_value(&self) -> LaurentPoly {
        LaurentPoly::constant(self.nvars(), BigInt::one())
    }
}

fn demazure_step_in(group: &WeylGroup, i: usize, f: &KClass) -> Result<KClass> {
    let alpha = group.root_system().simple_root(i);
    let restrictions = group
        .ids()
        .map(|v| {
            let weight = group.act(v, &alpha);
            let other = f.restriction(group.right_mul(v, i));
            let numerator = f.restriction(v) - &other.shift(&weight);
            numerator
                .divide_exact(&LaurentPoly::one_minus_exp(weight))
                .map_err(|e| {
                    Error::Invariant(format!(
                        "Demazure operator D_{} not exact at {}: {e}",
                        i + 1,
                        group.word_label(v)
                    ))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KClass { restrictions })
}

fn flip_in(group: &WeylGroup, f: &KClass) -> KClass {
    let w0 = group.longest();
    KClass {
        restrictions: group
            .ids()
            .map(|v| weyl_act(group, w0, f.restriction(group.multiply(w0, v))))
            .collect(),
    }
}

fn mobius_lower(group: &WeylGroup, schubert: &[KClass]) -> Vec<KClass> {
    group
        .ids()
        .map(|w| {
            let mut acc = KClass::zero(group.order(), group.rank());
            for v in group.lower_interval(w) {
                let term = &schubert[v.index()];
                acc = if (group.length(w) - group.length(v)).is_multiple_of(2) {
                    acc.add(term)
                } else {
                    acc.sub(term)
                };
            }
            acc
        })
        .collect()
}
