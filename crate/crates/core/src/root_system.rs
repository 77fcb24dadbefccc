//! Finite crystallographic root systems of types A–G.
//!
//! Weights are stored in fundamental-weight coordinates: the `i`-th
//! coordinate of `λ` is the pairing `⟨λ, α_i^∨⟩`. In these coordinates the
//! simple root `α_j` is the `j`-th column of the Cartan matrix and `ρ` is the
//! all-ones vector. Simple indices are 0-based throughout the library.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest exponent-vector length supported by [`Weight`].
///
/// Root systems are capped at rank 6; the extra room is used by the
/// type-A oracle, which works in `2(n+1)` variables.
pub const MAX_VARS: usize = 8;

/// Largest rank accepted by [`RootSystem::new`].
pub const MAX_RANK: usize = 6;

/// An integer vector of fixed small length.
///
/// Used both for weights of a root system and for exponent vectors of
/// Laurent polynomials in an arbitrary number (≤ [`MAX_VARS`]) of variables.
/// Ordering is lexicographic on the coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight {
    coords: [i32; MAX_VARS],
    len: u8,
}

impl Weight {
    pub fn zero(len: usize) -> Self {
        assert!(len <= MAX_VARS, "weight length {len} exceeds {MAX_VARS}");
        Weight {
            coords: [0; MAX_VARS],
            len: len as u8,
        }
    }

    pub fn from_slice(coords: &[i32]) -> Self {
        let mut w = Weight::zero(coords.len());
        w.coords[..coords.len()].copy_from_slice(coords);
        w
    }

    /// The `i`-th standard basis vector of length `len`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut w = Weight::zero(len);
        w.coords[i] = 1;
        w
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coords(&self) -> &[i32] {
        &self.coords[..self.len as usize]
    }

    pub fn get(&self, i: usize) -> i32 {
        self.coords()[i]
    }

    pub fn set(&mut self, i: usize, value: i32) {
        assert!(i < self.len());
        self.coords[i] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i32) -> Self {
        let mut out = *self;
        for c in &mut out.coords[..self.len as usize] {
            *c *= k;
        }
        out
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(mut self, rhs: Weight) -> Weight {
        self += rhs;
        self
    }
}

impl AddAssign for Weight {
    fn add_assign(&mut self, rhs: Weight) {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..self.len as usize {
            self.coords[i] += rhs.coords[i];
        }
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(mut self, rhs: Weight) -> Weight {
        self -= rhs;
        self
    }
}

impl SubAssign for Weight {
    fn sub_assign(&mut self, rhs: Weight) {
        debug_assert_eq!(self.len, rhs.len);
        for i in 0..self.len as usize {
            self.coords[i] -= rhs.coords[i];
        }
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        self.scaled(-1)
    }
}

impl Mul<Weight> for i32 {
    type Output = Weight;
    fn mul(self, rhs: Weight) -> Weight {
        rhs.scaled(self)
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coords())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coords().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for Weight {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v: Vec<i32> = Vec::deserialize(d)?;
        if v.len() > MAX_VARS {
            return Err(serde::de::Error::custom("weight too long"));
        }
        Ok(Weight::from_slice(&v))
    }
}

/// Simple Cartan types.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    pub fn letter(self) -> char {
        match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::E => 'E',
            CartanType::F => 'F',
            CartanType::G => 'G',
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl std::str::FromStr for CartanType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CartanType::A),
            "B" => Ok(CartanType::B),
            "C" => Ok(CartanType::C),
            "D" => Ok(CartanType::D),
            "E" => Ok(CartanType::E),
            "F" => Ok(CartanType::F),
            "G" => Ok(CartanType::G),
            other => Err(Error::Config(format!("unknown Cartan type {other:?}"))),
        }
    }
}

/// A root system together with its weight-lattice arithmetic.
#[derive(Debug, Clone)]
pub struct RootSystem {
    cartan_type: CartanType,
    rank: usize,
    /// `cartan[i][j] = ⟨α_j, α_i^∨⟩`.
    cartan: Vec<Vec<i32>>,
    simple_roots: Vec<Weight>,
    positive_roots: Vec<Weight>,
    /// Half squared lengths `(α_i, α_i)/2`, normalised so the short roots have 1.
    half_norms: Vec<i64>,
    /// `det(C) · C^{-1}`, used to pass to root coordinates.
    adjugate: Vec<Vec<i64>>,
    determinant: i64,
}

fn cartan_matrix(t: CartanType, n: usize) -> Result<Vec<Vec<i32>>> {
    let valid = match t {
        CartanType::A => n >= 1,
        CartanType::B | CartanType::C => n >= 2,
        CartanType::D => n >= 4,
        CartanType::E => (6..=8).contains(&n),
        CartanType::F => n == 4,
        CartanType::G => n == 2,
    };
    if !valid {
        return Err(Error::Config(format!("{t}{n} is not a valid simple type")));
    }
    if n > MAX_RANK {
        return Err(Error::Config(format!(
            "rank {n} exceeds the supported maximum {MAX_RANK}"
        )));
    }
    let mut c = vec![vec![0i32; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match t {
        CartanType::A | CartanType::B | CartanType::C | CartanType::F | CartanType::G => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        CartanType::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        CartanType::E => {
            for &(i, j) in &[(0, 2), (2, 3), (3, 4), (1, 3)] {
                link(i, j);
            }
            for i in 4..n - 1 {
                link(i, i + 1);
            }
        }
    }
    match t {
        // α_n short
        CartanType::B => c[n - 1][n - 2] = -2,
        // α_n long
        CartanType::C => c[n - 2][n - 1] = -2,
        // α_1, α_2 long; α_3, α_4 short
        CartanType::F => c[2][1] = -2,
        // α_1 short, α_2 long
        CartanType::G => c[0][1] = -3,
        _ => {}
    }
    Ok(c)
}

fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    if n == 1 {
        return m[0][0];
    }
    let mut total = 0;
    for j in 0..n {
        if m[0][j] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][j] * determinant(&minor);
    }
    total
}

#[allow(clippy::needless_range_loop)]
fn adjugate(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let mut adj = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = m
                .iter()
                .enumerate()
                .filter(|&(r, _)| r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            // transpose of the cofactor matrix
            adj[j][i] = sign * determinant(&minor);
        }
    }
    adj
}

impl RootSystem {
    /// Builds the root system of the given type and rank.
    ///
    /// Positive roots are found by closing the simple roots under simple
    /// reflections (`s_i` permutes `R^+ \ {α_i}`).
    pub fn new(cartan_type: CartanType, rank: usize) -> Result<Self> {
        let cartan = cartan_matrix(cartan_type, rank)?;
        let n = rank;
        let simple_roots: Vec<Weight> = (0..n)
            .map(|j| Weight::from_slice(&(0..n).map(|i| cartan[i][j]).collect::<Vec<_>>()))
            .collect();

        // (α_i,α_i)/2 from r_i C_ij = r_j C_ji along the (connected) diagram;
        // seeding with 6 keeps every ratio integral before normalising.
        let mut half_norms = vec![0i64; n];
        half_norms[0] = 6;
        let mut stack = vec![0usize];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && cartan[i][j] != 0 && half_norms[j] == 0 {
                    half_norms[j] = half_norms[i] * cartan[i][j] as i64 / cartan[j][i] as i64;
                    stack.push(j);
                }
            }
        }
        let g = half_norms
            .iter()
            .fold(0i64, |acc, &x| num_integer::gcd(acc, x));
        for r in &mut half_norms {
            *r /= g;
        }

        let cartan64: Vec<Vec<i64>> = cartan
            .iter()
            .map(|row| row.iter().map(|&x| x as i64).collect())
            .collect();
        let det = determinant(&cartan64);
        let adj = adjugate(&cartan64);

        let mut rs = RootSystem {
            cartan_type,
            rank,
            cartan,
            simple_roots,
            positive_roots: Vec::new(),
            half_norms,
            adjugate: adj,
            determinant: det,
        };
        rs.positive_roots = rs.enumerate_positive_roots();
        Ok(rs)
    }

    fn enumerate_positive_roots(&self) -> Vec<Weight> {
        let mut seen: std::collections::BTreeSet<Weight> =
            self.simple_roots.iter().copied().collect();
        let mut roots: Vec<Weight> = self.simple_roots.clone();
        let mut frontier = roots.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for beta in &frontier {
                for i in 0..self.rank {
                    if *beta == self.simple_roots[i] {
                        continue;
                    }
                    let image = self.reflect_unchecked(i, *beta);
                    if seen.insert(image) {
                        roots.push(image);
                        next.push(image);
                    }
                }
            }
            frontier = next;
        }
        // order by height, then lexicographically in root coordinates
        roots.sort_by_key(|r| {
            let m = self.root_coords(r).expect("root in root lattice");
            let height: i32 = m.coords().iter().sum();
            (height, m)
        });
        roots
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// `⟨α_j, α_i^∨⟩`, indexed `[i][j]`.
    pub fn cartan_matrix(&self) -> &[Vec<i32>] {
        &self.cartan
    }

    pub fn simple_roots(&self) -> &[Weight] {
        &self.simple_roots
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        self.simple_roots[i]
    }

    pub fn positive_roots(&self) -> &[Weight] {
        &self.positive_roots
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.cartan_type, self.rank)
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.rank {
            Err(Error::IndexOutOfRange {
                index: i,
                rank: self.rank,
            })
        } else {
            Ok(())
        }
    }

    /// `s_i(λ) = λ − ⟨λ, α_i^∨⟩ α_i`.
    pub fn reflect(&self, i: usize, lambda: Weight) -> Result<Weight> {
        self.check_index(i)?;
        if lambda.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: lambda.len(),
            });
        }
        Ok(self.reflect_unchecked(i, lambda))
    }

    pub(crate) fn reflect_unchecked(&self, i: usize, lambda: Weight) -> Weight {
        let c = lambda.get(i);
        lambda - self.simple_roots[i].scaled(c)
    }

    /// Half-sum of the positive roots; `(1, …, 1)` in these coordinates.
    pub fn rho(&self) -> Weight {
        Weight::from_slice(&vec![1; self.rank])
    }

    pub fn zero_weight(&self) -> Weight {
        Weight::zero(self.rank)
    }

    /// Expresses `λ` in the basis of simple roots, if it lies in the root lattice.
    pub fn root_coords(&self, lambda: &Weight) -> Option<Weight> {
        let n = self.rank;
        let mut out = Weight::zero(n);
        for i in 0..n {
            let num: i64 = (0..n)
                .map(|j| self.adjugate[i][j] * lambda.get(j) as i64)
                .sum();
            if num % self.determinant != 0 {
                return None;
            }
            out.set(i, (num / self.determinant) as i32);
        }
        Some(out)
    }

    /// Inverse of [`RootSystem::root_coords`].
    pub fn from_root_coords(&self, m: &Weight) -> Weight {
        let mut out = Weight::zero(self.rank);
        for (j, &mj) in m.coords().iter().enumerate() {
            out += self.simple_roots[j].scaled(mj);
        }
        out
    }

    /// W-invariant form `(λ, μ)` for `μ` in the root lattice, with short roots of squared length 2.
    pub fn inner_product_with_root(&self, lambda: &Weight, root: &Weight) -> Option<i64> {
        let m = self.root_coords(root)?;
        Some(
            (0..self.rank)
                .map(|j| m.get(j) as i64 * lambda.get(j) as i64 * self.half_norms[j])
                .sum(),
        )
    }

    /// `⟨λ, μ^∨⟩ = 2(λ, μ)/(μ, μ)` for a root `μ`.
    pub fn coroot_pairing(&self, lambda: &Weight, root: &Weight) -> Option<i64> {
        let num = 2 * self.inner_product_with_root(lambda, root)?;
        let den = self.inner_product_with_root(root, root)?;
        if den == 0 || num % den != 0 {
            return None;
        }
        Some(num / den)
    }

    /// Whether `λ` is a root (positive or negative).
    pub fn is_root(&self, lambda: &Weight) -> bool {
        self.positive_roots.contains(lambda) || self.positive_roots.contains(&-*lambda)
    }

    pub fn is_positive_root(&self, lambda: &Weight) -> bool {
        self.positive_roots.contains(lambda)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(t: CartanType, n: usize) -> usize {
        RootSystem::new(t, n).unwrap().positive_roots().len()
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(count(CartanType::A, 1), 1);
        assert_eq!(count(CartanType::A, 3), 6);
        for n in 1..=6 {
            assert_eq!(count(CartanType::A, n), n * (n + 1) / 2);
        }
        for n in 2..=6 {
            assert_eq!(count(CartanType::B, n), n * n);
            assert_eq!(count(CartanType::C, n), n * n);
        }
        for n in 4..=6 {
            assert_eq!(count(CartanType::D, n), n * (n - 1));
        }
        assert_eq!(count(CartanType::E, 6), 36);
        assert_eq!(count(CartanType::F, 4), 24);
        assert_eq!(count(CartanType::G, 2), 6);
    }

    #[test]
    fn invalid_types_are_rejected() {
        assert!(RootSystem::new(CartanType::A, 0).is_err());
        assert!(RootSystem::new(CartanType::B, 1).is_err());
        assert!(RootSystem::new(CartanType::D, 3).is_err());
        assert!(RootSystem::new(CartanType::G, 3).is_err());
        assert!(RootSystem::new(CartanType::F, 3).is_err());
        assert!(RootSystem::new(CartanType::E, 7).is_err());
        assert!(RootSystem::new(CartanType::A, 7).is_err());
    }

    #[test]
    fn reflection_examples() {
        let a1 = RootSystem::new(CartanType::A, 1).unwrap();
        let alpha = a1.simple_root(0);
        assert_eq!(a1.reflect(0, alpha).unwrap(), -alpha);

        let a2 = RootSystem::new(CartanType::A, 2).unwrap();
        let (a, b) = (a2.simple_root(0), a2.simple_root(1));
        assert_eq!(a2.reflect(0, b).unwrap(), a + b);
        assert!(a2.reflect(2, b).is_err());
    }

    #[test]
    fn rho_is_half_sum_of_positive_roots() {
        for (t, n) in [
            (CartanType::A, 1),
            (CartanType::A, 2),
            (CartanType::B, 3),
            (CartanType::C, 3),
            (CartanType::D, 4),
            (CartanType::E, 6),
            (CartanType::F, 4),
            (CartanType::G, 2),
        ] {
            let rs = RootSystem::new(t, n).unwrap();
            let mut sum = rs.zero_weight();
            for r in rs.positive_roots() {
                sum += *r;
            }
            assert_eq!(sum, rs.rho().scaled(2), "{t}{n}");
        }
    }

    #[test]
    fn g2_two_rho_in_root_coordinates() {
        let g2 = RootSystem::new(CartanType::G, 2).unwrap();
        assert_eq!(g2.rho(), Weight::from_slice(&[1, 1]));
        // 2ρ = 10α₁ + 6α₂ for G2 with α₁ short
        let m = g2.root_coords(&g2.rho().scaled(2)).unwrap();
        assert_eq!(m.coords(), &[10, 6]);
    }

    #[test]
    fn simple_reflections_permute_other_positive_roots() {
        let rs = RootSystem::new(CartanType::B, 3).unwrap();
        for alpha in rs.positive_roots() {
            for i in 0..rs.rank() {
                let image = rs.reflect(i, *alpha).unwrap();
                assert!(rs.is_root(&image));
                if *alpha == rs.simple_root(i) {
                    assert_eq!(image, -*alpha);
                } else {
                    assert!(rs.is_positive_root(&image));
                }
            }
        }
    }

    #[test]
    fn reflections_preserve_coroot_pairing() {
        for (t, n) in [(CartanType::B, 2), (CartanType::G, 2), (CartanType::C, 3)] {
            let rs = RootSystem::new(t, n).unwrap();
            let lambda = Weight::from_slice(&(0..n as i32).map(|k| 3 - 2 * k).collect::<Vec<_>>());
            for mu in rs.positive_roots() {
                let before = rs.coroot_pairing(&lambda, mu).unwrap();
                for i in 0..n {
                    let sl = rs.reflect(i, lambda).unwrap();
                    let sm = rs.reflect(i, *mu).unwrap();
                    assert_eq!(rs.coroot_pairing(&sl, &sm).unwrap(), before);
                }
            }
        }
    }

    #[test]
    fn root_coordinates_round_trip() {
        let rs = RootSystem::new(CartanType::D, 4).unwrap();
        for r in rs.positive_roots() {
            let m = rs.root_coords(r).unwrap();
            assert!(m.coords().iter().all(|&c| c >= 0));
            assert_eq!(rs.from_root_coords(&m), *r);
        }
        let a1 = RootSystem::new(CartanType::A, 1).unwrap();
        assert!(a1.root_coords(&a1.rho()).is_none());
    }
}
