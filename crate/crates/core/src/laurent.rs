//! Exact arithmetic in the group ring `ℤ[Λ]` of a lattice.
//!
//! A [`LaurentPoly`] is a finitely supported map from exponent vectors to
//! nonzero arbitrary-precision integers. Terms are kept sorted ascending in
//! lexicographic order on exponents, which doubles as the monomial order used
//! by exact division (the leading term is the last one).
//!
//! [`YPolynomial`] holds the expansion of an element of `ℤ[x_1^{±1}, …]` as an
//! honest polynomial in the shifted variables `y_i = x_i − 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::root_system::{RootSystem, Weight};
use crate::weyl_group::{ElementId, WeylGroup};

/// Sparse integer Laurent polynomial `Σ c_λ e^λ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    nvars: usize,
    terms: Vec<(Weight, BigInt)>,
}

/// `p` is not divisible by `d`; carries the remainder at the point the
/// greedy division stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotDivisible {
    pub remainder: LaurentPoly,
}

impl fmt::Display for NotDivisible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not divisible; remainder {}", self.remainder)
    }
}

impl std::error::Error for NotDivisible {}

impl LaurentPoly {
    pub fn zero(nvars: usize) -> Self {
        LaurentPoly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self::monomial(Weight::zero(nvars), BigInt::one())
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::monomial(Weight::zero(nvars), c.into())
    }

    /// `c · e^λ`
    pub fn monomial(exponent: Weight, coeff: impl Into<BigInt>) -> Self {
        let coeff = coeff.into();
        let nvars = exponent.len();
        if coeff.is_zero() {
            return Self::zero(nvars);
        }
        LaurentPoly {
            nvars,
            terms: vec![(exponent, coeff)],
        }
    }

    /// `e^λ`
    pub fn exp(exponent: Weight) -> Self {
        Self::monomial(exponent, BigInt::one())
    }

    /// `1 − e^λ`
    pub fn one_minus_exp(exponent: Weight) -> Self {
        &Self::one(exponent.len()) - &Self::exp(exponent)
    }

    /// Builds a polynomial from arbitrary (unsorted, possibly repeated) terms.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Weight, BigInt)>) -> Self {
        let mut terms: Vec<(Weight, BigInt)> = terms.into_iter().collect();
        for (e, _) in &terms {
            assert_eq!(e.len(), nvars, "exponent length mismatch");
        }
        normalize(&mut terms);
        LaurentPoly { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(Weight, BigInt)] {
        &self.terms
    }

    pub fn coeff(&self, exponent: &Weight) -> BigInt {
        self.terms
            .binary_search_by(|(e, _)| e.cmp(exponent))
            .map(|k| self.terms[k].1.clone())
            .unwrap_or_default()
    }

    /// Largest term in lexicographic order.
    pub fn leading_term(&self) -> Option<&(Weight, BigInt)> {
        self.terms.last()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Value at `e^λ = 1` for every `λ`: the sum of the coefficients.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|(_, c)| c).sum()
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect(),
        }
    }

    /// Multiplication by `e^λ`.
    pub fn shift(&self, lambda: &Weight) -> Self {
        LaurentPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e + *lambda, c.clone()))
                .collect(),
        }
    }

    /// Applies a map on exponents, summing coefficients that collide.
    pub fn map_exponents(&self, nvars: usize, f: impl Fn(&Weight) -> Weight) -> Self {
        Self::from_terms(nvars, self.terms.iter().map(|(e, c)| (f(e), c.clone())))
    }

    /// The duality involution `e^λ ↦ e^{−λ}`.
    pub fn dual(&self) -> Self {
        self.map_exponents(self.nvars, |e| -*e)
    }

    /// Sets the variable `var` to 1, i.e. drops the `var`-th exponent.
    pub fn specialize_var_at_one(&self, var: usize) -> Self {
        self.map_exponents(self.nvars, |e| {
            let mut e = *e;
            e.set(var, 0);
            e
        })
    }

    /// Exact quotient `self / d`, or [`NotDivisible`].
    ///
    /// Greedy leading-term division. Any quotient term must lie in the box
    /// `[min(p) − min(d), max(p) − max(d)]` coordinatewise, which bounds the
    /// loop when `d` does not divide `self`.
    pub fn divide_exact(&self, d: &LaurentPoly) -> std::result::Result<LaurentPoly, NotDivisible> {
        assert!(!d.is_zero(), "division by zero polynomial");
        assert_eq!(self.nvars, d.nvars, "lattice rank mismatch");
        if self.is_zero() {
            return Ok(Self::zero(self.nvars));
        }
        if d.is_monomial() {
            let (de, dc) = &d.terms[0];
            let mut terms = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return Err(NotDivisible {
                        remainder: self.clone(),
                    });
                }
                terms.push((*e - *de, q));
            }
            return Ok(LaurentPoly {
                nvars: self.nvars,
                terms,
            });
        }

        let n = self.nvars;
        let (lo, hi) = {
            let (pmin, pmax) = self.exponent_box();
            let (dmin, dmax) = d.exponent_box();
            let lo: Vec<i32> = (0..n).map(|k| pmin[k] - dmin[k]).collect();
            let hi: Vec<i32> = (0..n).map(|k| pmax[k] - dmax[k]).collect();
            (lo, hi)
        };
        let (dl, dc) = d.terms.last().expect("nonzero divisor").clone();
        let mut rem: BTreeMap<Weight, BigInt> = self.terms.iter().cloned().collect();
        let mut quotient: Vec<(Weight, BigInt)> = Vec::new();
        while let Some((re, rc)) = rem.last_key_value() {
            let (t, r) = rc.div_rem(&dc);
            let e = *re - dl;
            let in_box = (0..n).all(|k| lo[k] <= e.get(k) && e.get(k) <= hi[k]);
            if !r.is_zero() || !in_box {
                return Err(NotDivisible {
                    remainder: LaurentPoly::from_terms(n, rem),
                });
            }
            for (de, c) in &d.terms {
                let key = e + *de;
                let entry = rem.entry(key).or_insert_with(BigInt::zero);
                *entry -= &t * c;
                if entry.is_zero() {
                    rem.remove(&key);
                }
            }
            quotient.push((e, t));
        }
        quotient.reverse();
        Ok(LaurentPoly {
            nvars: n,
            terms: quotient,
        })
    }

    fn exponent_box(&self) -> (Vec<i32>, Vec<i32>) {
        let n = self.nvars;
        let mut lo = vec![i32::MAX; n];
        let mut hi = vec![i32::MIN; n];
        for (e, _) in &self.terms {
            for k in 0..n {
                lo[k] = lo[k].min(e.get(k));
                hi[k] = hi[k].max(e.get(k));
            }
        }
        (lo, hi)
    }

    /// Canonical term list `[[exponent], coefficient]`.
    pub fn to_term_list(&self) -> Vec<(Vec<i32>, JsonInt)> {
        self.terms
            .iter()
            .map(|(e, c)| (e.coords().to_vec(), JsonInt(c.clone())))
            .collect()
    }

    pub fn from_term_list(nvars: usize, list: &[(Vec<i32>, JsonInt)]) -> Result<Self> {
        let mut terms = Vec::with_capacity(list.len());
        for (e, c) in list {
            if e.len() != nvars {
                return Err(Error::DimensionMismatch {
                    expected: nvars,
                    got: e.len(),
                });
            }
            terms.push((Weight::from_slice(e), c.0.clone()));
        }
        Ok(Self::from_terms(nvars, terms))
    }
}

fn normalize(terms: &mut Vec<(Weight, BigInt)>) {
    terms.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(Weight, BigInt)> = Vec::with_capacity(terms.len());
    for (e, c) in terms.drain(..) {
        match out.last_mut() {
            Some((le, lc)) if *le == e => *lc += c,
            _ => {
                if let Some((_, lc)) = out.last() {
                    if lc.is_zero() {
                        out.pop();
                    }
                }
                out.push((e, c));
            }
        }
    }
    if let Some((_, lc)) = out.last() {
        if lc.is_zero() {
            out.pop();
        }
    }
    *terms = out;
}

fn merge(a: &LaurentPoly, b: &LaurentPoly, negate_b: bool) -> LaurentPoly {
    assert_eq!(a.nvars, b.nvars, "lattice rank mismatch");
    let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
    let (mut i, mut j) = (0, 0);
    let sign = |c: &BigInt| if negate_b { -c } else { c.clone() };
    while i < a.terms.len() && j < b.terms.len() {
        let (ea, ca) = &a.terms[i];
        let (eb, cb) = &b.terms[j];
        match ea.cmp(eb) {
            std::cmp::Ordering::Less => {
                out.push((*ea, ca.clone()));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((*eb, sign(cb)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b { ca - cb } else { ca + cb };
                if !c.is_zero() {
                    out.push((*ea, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a.terms[i..].iter().cloned());
    out.extend(b.terms[j..].iter().map(|(e, c)| (*e, sign(c))));
    LaurentPoly {
        nvars: a.nvars,
        terms: out,
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(self, rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        merge(self, rhs, true)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        assert_eq!(self.nvars, rhs.nvars, "lattice rank mismatch");
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero(self.nvars);
        }
        if rhs.is_monomial() && rhs.terms[0].0.is_zero() {
            return self.scale(&rhs.terms[0].1);
        }
        if self.is_monomial() && self.terms[0].0.is_zero() {
            return rhs.scale(&self.terms[0].1);
        }
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                terms.push((*ea + *eb, ca * cb));
            }
        }
        normalize(&mut terms);
        LaurentPoly {
            nvars: self.nvars,
            terms,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            if e.is_zero() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "e^{e}")?;
            } else {
                write!(f, "{a}·e^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_term_list().serialize(s)
    }
}

/// Integer that serializes as a JSON number when it fits in `i64` and as a
/// decimal string otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JsonInt(pub BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(JsonInt(BigInt::from(v))),
            Repr::Str(s) => s
                .parse::<BigInt>()
                .map(JsonInt)
                .map_err(serde::de::Error::custom),
        }
    }
}

/// `e^λ ↦ e^{wλ}`
pub fn weyl_act(group: &WeylGroup, w: ElementId, p: &LaurentPoly) -> LaurentPoly {
    if w == group.identity() {
        return p.clone();
    }
    p.map_exponents(p.nvars(), |e| group.act(w, e))
}

/// Ring map `ℤ[ℤ^n] → ℤ[ℤ^r]` induced by the `r × n` integer matrix `m`:
/// `e^λ ↦ e^{mλ}`.
pub fn restrict_to_subtorus(p: &LaurentPoly, m: &[Vec<i32>]) -> Result<LaurentPoly> {
    let r = m.len();
    for row in m {
        if row.len() != p.nvars() {
            return Err(Error::DimensionMismatch {
                expected: p.nvars(),
                got: row.len(),
            });
        }
    }
    if r > crate::root_system::MAX_VARS {
        return Err(Error::Config(format!("subtorus rank {r} too large")));
    }
    Ok(p.map_exponents(r, |e| {
        let coords: Vec<i32> = m
            .iter()
            .map(|row| row.iter().zip(e.coords()).map(|(a, b)| a * b).sum())
            .collect();
        Weight::from_slice(&coords)
    }))
}

/// A polynomial `Σ c_J y^J` with `y_i = x_i − 1`.
#[derive(Clone, PartialEq, Eq)]
pub struct YPolynomial {
    nvars: usize,
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl Serialize for YPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.terms
            .iter()
            .map(|(j, c)| (j, JsonInt(c.clone())))
            .collect::<Vec<_>>()
            .serialize(s)
    }
}

impl YPolynomial {
    pub fn zero(nvars: usize) -> Self {
        YPolynomial {
            nvars,
            terms: Vec::new(),
        }
    }

    fn from_map(nvars: usize, map: BTreeMap<Vec<u32>, BigInt>) -> Self {
        YPolynomial {
            nvars,
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms `(J, c_J)` in lexicographic order of `J`.
    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(j, c)| (j.as_slice(), c))
    }

    pub fn coeff(&self, multi_index: &[u32]) -> BigInt {
        self.terms
            .iter()
            .find(|(j, _)| j.as_slice() == multi_index)
            .map(|(_, c)| c.clone())
            .unwrap_or_default()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(j, _)| j.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn negated(&self) -> Self {
        YPolynomial {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(j, c)| (j.clone(), -c)).collect(),
        }
    }

    /// Terms whose coefficient is negative.
    pub fn negative_terms(&self) -> Vec<(Vec<u32>, BigInt)> {
        self.terms
            .iter()
            .filter(|(_, c)| c.is_negative())
            .map(|(j, c)| (j.clone(), c.clone()))
            .collect()
    }

    /// Substitutes `y_i = e^{γ_i} − 1`.
    pub fn evaluate(&self, gammas: &[Weight]) -> LaurentPoly {
        assert_eq!(gammas.len(), self.nvars);
        let len = gammas.first().map(|g| g.len()).unwrap_or(0);
        let ys: Vec<LaurentPoly> = gammas
            .iter()
            .map(|g| &LaurentPoly::exp(*g) - &LaurentPoly::one(len))
            .collect();
        let mut total = LaurentPoly::zero(len);
        for (j, c) in &self.terms {
            let mut term = LaurentPoly::constant(len, c.clone());
            for (k, &power) in j.iter().enumerate() {
                for _ in 0..power {
                    term = &term * &ys[k];
                }
            }
            total = &total + &term;
        }
        total
    }
}

impl fmt::Display for YPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (j, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            for (i, &p) in j.iter().enumerate() {
                match p {
                    0 => {}
                    1 => write!(f, "·y{}", i + 1)?,
                    _ => write!(f, "·y{}^{}", i + 1, p)?,
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for YPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "YPolynomial({self})")
    }
}

/// Why a Laurent polynomial has no expansion in the `y` variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NonMembership {
    /// An exponent is outside the root lattice.
    NotInRootLattice { exponent: Weight },
    /// Iterated differences did not vanish within the degree cap.
    DegreeCap {
        cap: u32,
        multi_index: Vec<u32>,
        residual: LaurentPoly,
    },
}

impl fmt::Display for NonMembership {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NonMembership::NotInRootLattice { exponent } => {
                write!(f, "exponent {exponent} not in the root lattice")
            }
            NonMembership::DegreeCap {
                cap,
                multi_index,
                residual,
            } => write!(
                f,
                "residual {residual} nonzero at y-degree cap {cap} (index {multi_index:?})"
            ),
        }
    }
}

impl std::error::Error for NonMembership {}

/// Which shifted variables a coefficient is expanded in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum YVariables {
    /// `y_i = e^{−α_i} − 1`
    NegativeSimpleRoots,
    /// `y_i = e^{α_i} − 1`
    PositiveSimpleRoots,
}

/// Expands `p ∈ ℤ[Λ]` in `y_i = e^{∓α_i} − 1`.
///
/// Exponents are first rewritten in root coordinates; an exponent outside the
/// root lattice fails immediately.
pub fn expand_in_y(
    p: &LaurentPoly,
    rs: &RootSystem,
    variables: YVariables,
    degree_cap: u32,
) -> std::result::Result<YPolynomial, NonMembership> {
    let n = rs.rank();
    let mut terms = Vec::with_capacity(p.num_terms());
    for (e, c) in p.terms() {
        let m = rs
            .root_coords(e)
            .ok_or(NonMembership::NotInRootLattice { exponent: *e })?;
        // e^λ = ∏ x_i^{-m_i} with x_i = e^{-α_i}
        let x = match variables {
            YVariables::NegativeSimpleRoots => -m,
            YVariables::PositiveSimpleRoots => m,
        };
        terms.push((x, c.clone()));
    }
    expand_in_shifted_variables(&LaurentPoly::from_terms(n, terms), degree_cap)
}

/// Expands a Laurent polynomial in `x_1, …, x_n` as a polynomial in
/// `y_i = x_i − 1`.
///
/// Coefficients come from iterated exact differences
/// `Δ_i q = (q − q|_{x_i=1}) / (x_i − 1)`: `c_J = (Δ^J q)|_{x=1}`. The
/// recursion in each variable stops once the difference vanishes; a nonzero
/// difference past `degree_cap` (total degree) is reported with its residual.
pub fn expand_in_shifted_variables(
    q: &LaurentPoly,
    degree_cap: u32,
) -> std::result::Result<YPolynomial, NonMembership> {
    let n = q.nvars();
    let mut out = BTreeMap::new();
    let mut prefix = Vec::with_capacity(n);
    expand_rec(q, 0, 0, degree_cap, &mut prefix, &mut out)?;
    Ok(YPolynomial::from_map(n, out))
}

fn expand_rec(
    q: &LaurentPoly,
    var: usize,
    degree: u32,
    cap: u32,
    prefix: &mut Vec<u32>,
    out: &mut BTreeMap<Vec<u32>, BigInt>,
) -> std::result::Result<(), NonMembership> {
    let n = q.nvars();
    if q.is_zero() {
        return Ok(());
    }
    if var == n {
        debug_assert!(q.num_terms() == 1 && q.terms()[0].0.is_zero());
        let mut index = prefix.clone();
        index.resize(n, 0);
        *out.entry(index).or_insert_with(BigInt::zero) += q.eval_at_one();
        return Ok(());
    }
    let divisor = &LaurentPoly::exp(Weight::unit(n, var)) - &LaurentPoly::one(n);
    let mut current = q.clone();
    let mut j = 0u32;
    while !current.is_zero() {
        if degree + j > cap {
            let mut index = prefix.clone();
            index.push(j);
            index.resize(n, 0);
            return Err(NonMembership::DegreeCap {
                cap,
                multi_index: index,
                residual: current,
            });
        }
        let at_one = current.specialize_var_at_one(var);
        prefix.push(j);
        let res = expand_rec(&at_one, var + 1, degree + j, cap, prefix, out);
        prefix.pop();
        res?;
        current = (&current - &at_one)
            .divide_exact(&divisor)
            .expect("q − q|_{x=1} is divisible by x − 1");
        j += 1;
    }
    Ok(())
}
