//! Independent type-A model: double Grothendieck polynomials.
//!
//! Polynomials live in `ℤ[x_1^{±1}, …, x_N^{±1}, b_1^{±1}, …, b_N^{±1}]`
//! with `N = n + 1`, stored as [`LaurentPoly`] over `ℤ^{2N}` (the `x`
//! exponents first). The top polynomial is
//! `𝔊_{w₀} = ∏_{i+j ≤ N} (1 − b_j / x_i)` and the others come from isobaric
//! divided differences `π_i f = (x_i f − x_{i+1} s_i f) / (x_i − x_{i+1})`.
//!
//! Convention dictionary, fixed once against `A1`: the Weyl group element `w`
//! is the permutation `σ` with `w(ε_i) = ε_{σ(i)}`, the fixed point `v ↔ τ`
//! is `x_i ↦ b_{τ(i)}`, and `b_j ↦ e^{−ε_j}`. Under it `𝔊_σ(τ)` equals
//! `O^w|_v`.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::kring::{BasisTag, Expansion};
use crate::laurent::LaurentPoly;
use crate::root_system::{CartanType, Weight, MAX_VARS};
use crate::weyl_group::{ElementId, WeylGroup};

/// `𝔊_σ` for a permutation `σ` in one-line notation (0-based values).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleGrothendieck {
    pub permutation: Vec<usize>,
    pub poly: LaurentPoly,
}

/// All double Grothendieck polynomials of `S_N`.
#[derive(Debug, Clone)]
pub struct GrothendieckOracle {
    size: usize,
    perms: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    polys: Vec<LaurentPoly>,
    /// `localized[s][t] = 𝔊_{perms[s]}(perms[t])`
    localized: Vec<Vec<LaurentPoly>>,
}

/// Largest `n` for which `A_n` fits in the polynomial representation.
pub const MAX_ORACLE_RANK: usize = MAX_VARS / 2 - 1;

fn x_var(i: usize) -> usize {
    i
}

fn b_var(size: usize, j: usize) -> usize {
    size + j
}

/// `π_i` on polynomials in `2N` variables, acting on `x_i, x_{i+1}` (0-based).
pub fn isobaric_divided_difference(p: &LaurentPoly, i: usize) -> LaurentPoly {
    let nvars = p.nvars();
    let xi = LaurentPoly::exp(Weight::unit(nvars, x_var(i)));
    let xj = LaurentPoly::exp(Weight::unit(nvars, x_var(i + 1)));
    let swapped = p.map_exponents(nvars, |e| {
        let mut e = *e;
        let (a, b) = (e.get(x_var(i)), e.get(x_var(i + 1)));
        e.set(x_var(i), b);
        e.set(x_var(i + 1), a);
        e
    });
    let numerator = &(&xi * p) - &(&xj * &swapped);
    numerator
        .divide_exact(&(&xi - &xj))
        .expect("x_i f − x_{i+1} s_i f is divisible by x_i − x_{i+1}")
}

pub fn inversions(perm: &[usize]) -> usize {
    let mut count = 0;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                count += 1;
            }
        }
    }
    count
}

impl GrothendieckOracle {
    /// Computes `𝔊_σ` for every `σ ∈ S_{n+1}` by descending from `w₀`.
    pub fn new(rank: usize) -> Result<Self> {
        if rank == 0 || rank > MAX_ORACLE_RANK {
            return Err(Error::Precondition(format!(
                "oracle supports A1..A{MAX_ORACLE_RANK}, got rank {rank}"
            )));
        }
        let size = rank + 1;
        let nvars = 2 * size;
        let mut top = LaurentPoly::one(nvars);
        for i in 0..size {
            for j in 0..size {
                if i + j + 2 <= size {
                    let mut e = Weight::zero(nvars);
                    e.set(b_var(size, j), 1);
                    e.set(x_var(i), -1);
                    top = &top * &LaurentPoly::one_minus_exp(e);
                }
            }
        }
        let longest: Vec<usize> = (0..size).rev().collect();
        let mut perms = vec![longest.clone()];
        let mut index = HashMap::from([(longest, 0)]);
        let mut polys = vec![top];
        let mut queue = VecDeque::from([0usize]);
        while let Some(k) = queue.pop_front() {
            let perm = perms[k].clone();
            for i in 0..size - 1 {
                if perm[i] < perm[i + 1] {
                    continue;
                }
                let mut next = perm.clone();
                next.swap(i, i + 1);
                if index.contains_key(&next) {
                    continue;
                }
                let poly = isobaric_divided_difference(&polys[k], i);
                index.insert(next.clone(), perms.len());
                queue.push_back(perms.len());
                perms.push(next);
                polys.push(poly);
            }
        }
        let mut oracle = GrothendieckOracle {
            size,
            perms,
            index,
            polys,
            localized: Vec::new(),
        };
        oracle.localized = oracle
            .perms
            .iter()
            .map(|s| oracle.perms.iter().map(|t| oracle.localize(s, t)).collect())
            .collect();
        Ok(oracle)
    }

    pub fn rank(&self) -> usize {
        self.size - 1
    }

    pub fn permutations(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn polynomial(&self, perm: &[usize]) -> Option<&LaurentPoly> {
        self.index.get(perm).map(|&k| &self.polys[k])
    }

    pub fn double_grothendieck(&self, perm: &[usize]) -> Option<DoubleGrothendieck> {
        self.polynomial(perm).map(|p| DoubleGrothendieck {
            permutation: perm.to_vec(),
            poly: p.clone(),
        })
    }

    /// `e^{−ε_j}` in fundamental-weight coordinates.
    fn minus_epsilon(&self, j: usize) -> Weight {
        let n = self.rank();
        let mut w = Weight::zero(n);
        if j < n {
            w.set(j, -1);
        }
        if j > 0 {
            w.set(j - 1, 1);
        }
        w
    }

    /// `𝔊_σ` at the fixed point `τ`: `x_i ↦ b_{τ(i)}`, `b_j ↦ e^{−ε_j}`.
    pub fn localize(&self, perm: &[usize], at: &[usize]) -> LaurentPoly {
        let size = self.size;
        let poly = self
            .polynomial(perm)
            .expect("permutation of the right size");
        poly.map_exponents(self.rank(), |e| {
            let mut out = Weight::zero(self.rank());
            for (i, &t) in at.iter().enumerate().take(size) {
                out += e.get(x_var(i)) * self.minus_epsilon(t);
            }
            for j in 0..size {
                out += e.get(b_var(size, j)) * self.minus_epsilon(j);
            }
            out
        })
    }

    /// Expands `𝔊_u 𝔊_v` restricted to the fixed points in the localized
    /// `𝔊_w`, by elimination in order of inversion count.
    pub fn structure_constants(
        &self,
        u: &[usize],
        v: &[usize],
    ) -> Result<Vec<(Vec<usize>, LaurentPoly)>> {
        let mut order: Vec<usize> = (0..self.perms.len()).collect();
        order.sort_by_key(|&k| (inversions(&self.perms[k]), self.perms[k].clone()));
        let table = &self.localized;
        let (ku, kv) = (
            self.index
                .get(u)
                .copied()
                .ok_or_else(|| Error::Precondition(format!("{u:?} not in S_N")))?,
            self.index
                .get(v)
                .copied()
                .ok_or_else(|| Error::Precondition(format!("{v:?} not in S_N")))?,
        );
        let mut coeffs: Vec<(usize, LaurentPoly)> = Vec::new();
        for &t in &order {
            let mut r = &table[ku][t] * &table[kv][t];
            for (s, c) in &coeffs {
                r = &r - &(c * &table[*s][t]);
            }
            if r.is_zero() {
                continue;
            }
            let c = r.divide_exact(&table[t][t]).map_err(|e| {
                Error::Invariant(format!(
                    "oracle elimination failed at {:?}: {e}",
                    self.perms[t]
                ))
            })?;
            coeffs.push((t, c));
        }
        Ok(coeffs
            .into_iter()
            .map(|(k, c)| (self.perms[k].clone(), c))
            .collect())
    }
}

/// `ε_i` in fundamental-weight coordinates of `A_n`.
fn epsilon(n: usize, i: usize) -> Weight {
    let mut w = Weight::zero(n);
    if i < n {
        w.set(i, 1);
    }
    if i > 0 {
        w.set(i - 1, -1);
    }
    w
}

/// The permutation `σ` with `w(ε_i) = ε_{σ(i)}`.
pub fn permutation_of(group: &WeylGroup, w: ElementId) -> Result<Vec<usize>> {
    let rs = group.root_system();
    if rs.cartan_type() != CartanType::A {
        return Err(Error::Precondition(format!(
            "oracle needs type A, got {}",
            rs.name()
        )));
    }
    let n = rs.rank();
    (0..=n)
        .map(|i| {
            let image = group.act(w, &epsilon(n, i));
            (0..=n)
                .find(|&j| epsilon(n, j) == image)
                .ok_or_else(|| Error::Invariant("ε_i not permuted by the Weyl group".into()))
        })
        .collect()
}

pub fn double_grothendieck(
    oracle: &GrothendieckOracle,
    group: &WeylGroup,
    w: ElementId,
) -> Result<DoubleGrothendieck> {
    let perm = permutation_of(group, w)?;
    oracle
        .double_grothendieck(&perm)
        .ok_or_else(|| Error::Precondition("group rank differs from oracle rank".into()))
}

/// The oracle's `c_{uv}^w`, indexed by the group's elements.
pub fn oracle_structure_constants(
    oracle: &GrothendieckOracle,
    group: &WeylGroup,
    u: ElementId,
    v: ElementId,
) -> Result<Expansion> {
    if group.rank() != oracle.rank() {
        return Err(Error::Precondition(
            "group rank differs from oracle rank".into(),
        ));
    }
    let by_perm: HashMap<Vec<usize>, ElementId> = group
        .ids()
        .map(|w| permutation_of(group, w).map(|p| (p, w)))
        .collect::<Result<_>>()?;
    let terms =
        oracle.structure_constants(&permutation_of(group, u)?, &permutation_of(group, v)?)?;
    let mut coefficients = vec![LaurentPoly::zero(group.rank()); group.order()];
    for (perm, c) in terms {
        coefficients[by_perm[&perm].index()] = c;
    }
    Ok(Expansion {
        basis: BasisTag::OUpper,
        coefficients,
    })
}

/// Embeds a polynomial for `S_N` into the variables of `S_{N+1}`.
pub fn embed_polynomial(p: &LaurentPoly, size: usize) -> LaurentPoly {
    let nvars = 2 * (size + 1);
    p.map_exponents(nvars, |e| {
        let mut out = Weight::zero(nvars);
        for i in 0..size {
            out.set(i, e.get(i));
            out.set(size + 1 + i, e.get(size + i));
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::RootSystem;
    use num_traits::One;

    #[test]
    fn identity_polynomial_is_one() {
        for n in 1..=3 {
            let o = GrothendieckOracle::new(n).unwrap();
            let id: Vec<usize> = (0..=n).collect();
            assert!(o.polynomial(&id).unwrap().is_one());
            assert_eq!(o.permutations().len(), (2..=n + 1).product::<usize>());
        }
    }

    #[test]
    fn a1_top_polynomial() {
        let o = GrothendieckOracle::new(1).unwrap();
        // 1 − b_1/x_1
        let expected = LaurentPoly::one_minus_exp(Weight::from_slice(&[-1, 0, 1, 0]));
        assert_eq!(o.polynomial(&[1, 0]).unwrap(), &expected);
    }

    #[test]
    fn divided_difference_is_idempotent() {
        let p = LaurentPoly::from_terms(
            4,
            [
                (Weight::from_slice(&[2, -1, 1, 0]), 3.into()),
                (Weight::from_slice(&[0, 1, 0, -2]), (-5).into()),
                (Weight::from_slice(&[-1, -1, 0, 0]), 1.into()),
            ],
        );
        let once = isobaric_divided_difference(&p, 0);
        assert_eq!(isobaric_divided_difference(&once, 0), once);
        assert!(isobaric_divided_difference(&LaurentPoly::one(4), 0).is_one());
    }

    #[test]
    fn permutation_dictionary_is_a_bijection() {
        let rs = RootSystem::new(CartanType::A, 3).unwrap();
        let g = WeylGroup::generate(&rs).unwrap();
        let mut seen = std::collections::HashSet::new();
        for w in g.ids() {
            let p = permutation_of(&g, w).unwrap();
            assert_eq!(inversions(&p), g.length(w));
            assert!(seen.insert(p));
        }
        let b2 = WeylGroup::generate(&RootSystem::new(CartanType::B, 2).unwrap()).unwrap();
        assert!(permutation_of(&b2, b2.longest()).is_err());
    }

    #[test]
    fn identity_product_is_delta() {
        let o = GrothendieckOracle::new(2).unwrap();
        let id = [0, 1, 2];
        for perm in o.permutations() {
            let c = o.structure_constants(&id, perm).unwrap();
            assert_eq!(c.len(), 1);
            assert_eq!(&c[0].0, perm);
            assert_eq!(c[0].1, LaurentPoly::constant(2, num_bigint::BigInt::one()));
        }
    }

    #[test]
    fn rank_limits() {
        assert!(GrothendieckOracle::new(0).is_err());
        assert!(GrothendieckOracle::new(MAX_ORACLE_RANK + 1).is_err());
    }
}
