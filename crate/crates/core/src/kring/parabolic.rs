use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::laurent::LaurentPoly;
use crate::weyl_group::{ElementId, WeylGroup};

use super::{BasisTag, Expansion, KClass, KRing};

/// A parabolic subgroup `W_P` together with the poset `W^P` of minimal
/// coset representatives.
///
/// Classes on `G/P` are handled through their pullbacks to `G/B`: the
/// opposite Schubert class of `wP` pulls back to `O^w` for `w ∈ W^P`, and the
/// Schubert class of `wP` pulls back to `O_{w w_{0,P}}`.
#[derive(Debug, Clone)]
pub struct Parabolic {
    subset: Vec<usize>,
    reps: Vec<ElementId>,
    is_rep: Vec<bool>,
    longest_in_levi: ElementId,
    /// `mobius[k]` holds `(v, μ^P(reps[k], v))` for the nonzero values.
    mobius: Vec<Vec<(ElementId, i64)>>,
}

impl Parabolic {
    pub fn new(group: &WeylGroup, subset: &[usize]) -> Result<Self> {
        group.validate_parabolic(subset)?;
        let mut subset = subset.to_vec();
        subset.sort_unstable();
        subset.dedup();
        let mut reps = group.minimal_coset_reps(&subset)?;
        reps.sort_by_key(|&w| (group.length(w), w));
        let mut is_rep = vec![false; group.order()];
        for &w in &reps {
            is_rep[w.index()] = true;
        }

        let mut longest_in_levi = group.identity();
        loop {
            let next = subset
                .iter()
                .map(|&i| group.right_mul(longest_in_levi, i))
                .find(|&x| group.length(x) > group.length(longest_in_levi));
            match next {
                Some(x) => longest_in_levi = x,
                None => break,
            }
        }

        let mobius = reps
            .iter()
            .map(|&w| {
                let mut values: HashMap<ElementId, i64> = HashMap::new();
                let mut out = Vec::new();
                for &v in reps.iter().filter(|&&v| group.bruhat_leq(w, v)) {
                    let mu = if v == w {
                        1
                    } else {
                        -values
                            .iter()
                            .filter(|(&x, _)| group.bruhat_leq(x, v))
                            .map(|(_, &m)| m)
                            .sum::<i64>()
                    };
                    values.insert(v, mu);
                    if mu != 0 {
                        out.push((v, mu));
                    }
                }
                out
            })
            .collect();

        Ok(Parabolic {
            subset,
            reps,
            is_rep,
            longest_in_levi,
            mobius,
        })
    }

    /// The simple reflections generating `W_P` (0-based).
    pub fn subset(&self) -> &[usize] {
        &self.subset
    }

    /// `W^P`, sorted by length.
    pub fn reps(&self) -> &[ElementId] {
        &self.reps
    }

    pub fn contains(&self, w: ElementId) -> bool {
        self.is_rep[w.index()]
    }

    /// The longest element of `W_P`.
    pub fn longest_in_levi(&self) -> ElementId {
        self.longest_in_levi
    }

    /// The maximal representative `w w_{0,P}` of the coset `w W_P`.
    pub fn max_rep(&self, group: &WeylGroup, w: ElementId) -> ElementId {
        group.multiply(w, self.longest_in_levi)
    }

    /// Möbius function of the Bruhat order restricted to `W^P`.
    pub fn mobius(&self, w: ElementId, v: ElementId) -> i64 {
        let k = self.reps.iter().position(|&x| x == w).expect("w in W^P");
        self.mobius[k]
            .iter()
            .find(|(x, _)| *x == v)
            .map_or(0, |(_, m)| *m)
    }

    /// Pullback of `ξ^w` on `G/P`:
    /// `Σ_{v ∈ W^P, v ≥ w} μ^P(w, v) O^v`.
    pub fn xi_upper(&self, ring: &KRing, w: ElementId) -> KClass {
        let k = self.reps.iter().position(|&x| x == w).expect("w in W^P");
        let mut acc = ring.zero_class();
        for &(v, mu) in &self.mobius[k] {
            let term = ring
                .opposite_schubert_class(v)
                .scale(&LaurentPoly::constant(ring.nvars(), mu));
            acc = acc.add(&term);
        }
        acc
    }

    /// Pullback of the Schubert class `O_{X_{wP}}`.
    pub fn schubert_class<'a>(&self, ring: &'a KRing, w: ElementId) -> &'a KClass {
        ring.schubert_class(self.max_rep(ring.group(), w))
    }

    /// Expands a pulled-back class in the opposite Schubert basis of `G/P`.
    pub fn expand_opposite(&self, ring: &KRing, f: &KClass) -> Result<Expansion> {
        let expansion = ring.expand_in_basis(f, BasisTag::OUpper)?;
        ring.parabolic_reduce(&expansion, &self.subset)
    }

    /// Expands a pulled-back class in the `ξ^w` basis of `G/P`.
    ///
    /// Uses `O^v = Σ_{w ∈ W^P, w ≥ v} ξ^w_P`; the result is verified by
    /// reconstruction.
    pub fn expand_xi_upper(&self, ring: &KRing, f: &KClass) -> Result<Expansion> {
        let group = ring.group();
        let c = self.expand_opposite(ring, f)?;
        let mut coefficients = vec![LaurentPoly::zero(ring.nvars()); group.order()];
        for &w in &self.reps {
            let mut acc = LaurentPoly::zero(ring.nvars());
            for (v, cv) in c.terms() {
                if group.bruhat_leq(v, w) {
                    acc = &acc + cv;
                }
            }
            coefficients[w.index()] = acc;
        }
        let expansion = Expansion {
            basis: BasisTag::XiUpper,
            coefficients,
        };
        let mut total = ring.zero_class();
        for (w, cw) in expansion.terms() {
            total = total.add(&self.xi_upper(ring, w).scale(cw));
        }
        if total != *f {
            return Err(Error::Invariant(
                "reconstruction from the parabolic xi expansion differs from the source class"
                    .into(),
            ));
        }
        Ok(expansion)
    }
}
