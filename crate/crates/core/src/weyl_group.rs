//! Finite Weyl groups: enumeration, length, Bruhat order, Demazure products
//! and minimal coset representatives.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::root_system::{RootSystem, Weight};

/// Default cap on the group order accepted by [`WeylGroup::generate`].
pub const DEFAULT_ORDER_CAP: usize = 2000;

/// Bruhat order is stored as a dense relation up to this group order.
const BRUHAT_PRECOMPUTE_LIMIT: usize = 1200;

/// Index of an element inside its [`WeylGroup`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(u32);

impl ElementId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(i: usize) -> Self {
        ElementId(i as u32)
    }
}

/// A group element in canonical form: the images `w(α_i)` of the simple roots.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeylElement {
    simple_images: Vec<Weight>,
    length: usize,
}

impl WeylElement {
    pub fn simple_images(&self) -> &[Weight] {
        &self.simple_images
    }

    pub fn length(&self) -> usize {
        self.length
    }
}

#[derive(Clone)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn new(n: usize) -> Self {
        BitSet {
            words: vec![0; n.div_ceil(64)],
        }
    }
    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }
    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }
}

/// The Weyl group of a root system, fully enumerated.
#[derive(Clone)]
pub struct WeylGroup {
    rs: RootSystem,
    elements: Vec<WeylElement>,
    words: Vec<Vec<usize>>,
    /// Row-major `n × n` matrices acting on fundamental-weight coordinates.
    matrices: Vec<Vec<i32>>,
    right_mul: Vec<Vec<ElementId>>,
    left_mul: Vec<Vec<ElementId>>,
    inverses: Vec<ElementId>,
    lookup: HashMap<Vec<Weight>, ElementId>,
    /// `down[w]` = lower Bruhat interval `[e, w]`.
    down: Option<Vec<BitSet>>,
    reflections: Vec<(Weight, ElementId)>,
    longest: ElementId,
}

impl fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylGroup")
            .field("type", &self.rs.name())
            .field("order", &self.elements.len())
            .finish()
    }
}

impl WeylGroup {
    pub fn generate(rs: &RootSystem) -> Result<Self> {
        Self::generate_with_cap(rs, DEFAULT_ORDER_CAP)
    }

    /// Enumerates the group by breadth-first right multiplication by simple
    /// reflections. Each element keeps the first word that reached it, which
    /// is its lexicographically least reduced word.
    pub fn generate_with_cap(rs: &RootSystem, cap: usize) -> Result<Self> {
        let n = rs.rank();
        let mut identity = vec![0i32; n * n];
        for i in 0..n {
            identity[i * n + i] = 1;
        }
        let images_of = |m: &[i32]| -> Vec<Weight> {
            rs.simple_roots()
                .iter()
                .map(|a| apply_matrix(m, n, a))
                .collect()
        };

        let mut elements = vec![WeylElement {
            simple_images: images_of(&identity),
            length: 0,
        }];
        let mut words = vec![Vec::new()];
        let mut matrices = vec![identity];
        let mut lookup = HashMap::new();
        lookup.insert(elements[0].simple_images.clone(), ElementId(0));
        let mut right_mul: Vec<Vec<ElementId>> = Vec::new();

        let mut head = 0;
        while head < elements.len() {
            let mut row = Vec::with_capacity(n);
            for i in 0..n {
                let m = &matrices[head];
                let alpha_image = apply_matrix(m, n, &rs.simple_root(i));
                let mut next = m.clone();
                for r in 0..n {
                    next[r * n + i] -= alpha_image.get(r);
                }
                let key = images_of(&next);
                let id = match lookup.get(&key) {
                    Some(&id) => id,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::Resource(format!(
                                "Weyl group of {} exceeds the order cap {cap}",
                                rs.name()
                            )));
                        }
                        let id = ElementId(elements.len() as u32);
                        let mut word = words[head].clone();
                        word.push(i);
                        elements.push(WeylElement {
                            simple_images: key.clone(),
                            length: elements[head].length + 1,
                        });
                        words.push(word);
                        matrices.push(next);
                        lookup.insert(key, id);
                        id
                    }
                };
                row.push(id);
            }
            right_mul.push(row);
            head += 1;
        }

        let order = elements.len();
        let mut left_mul = vec![Vec::with_capacity(order); n];
        for (i, column) in left_mul.iter_mut().enumerate() {
            for e in &elements {
                let key: Vec<Weight> = e
                    .simple_images
                    .iter()
                    .map(|w| rs.reflect_unchecked(i, *w))
                    .collect();
                column.push(lookup[&key]);
            }
        }

        let mut inverses = Vec::with_capacity(order);
        for word in &words {
            let mut x = ElementId(0);
            for &i in word.iter().rev() {
                x = right_mul[x.index()][i];
            }
            inverses.push(x);
        }

        let longest = ElementId(
            (0..order)
                .max_by_key(|&k| elements[k].length)
                .expect("group is nonempty") as u32,
        );

        let mut group = WeylGroup {
            rs: rs.clone(),
            elements,
            words,
            matrices,
            right_mul,
            left_mul,
            inverses,
            lookup,
            down: None,
            reflections: Vec::new(),
            longest,
        };
        group.reflections = group.compute_reflections();
        if order <= BRUHAT_PRECOMPUTE_LIMIT {
            let down = (0..order)
                .map(|w| group.lower_interval_set(ElementId(w as u32)))
                .collect();
            group.down = Some(down);
        }
        Ok(group)
    }

    fn compute_reflections(&self) -> Vec<(Weight, ElementId)> {
        let mut found: HashMap<Weight, ElementId> = HashMap::new();
        for u in self.ids() {
            for i in 0..self.rank() {
                let root = self.act(u, &self.rs.simple_root(i));
                if self.rs.is_positive_root(&root) && !found.contains_key(&root) {
                    let t = self.multiply(self.right_mul(u, i), self.inverse(u));
                    found.insert(root, t);
                }
            }
        }
        self.rs
            .positive_roots()
            .iter()
            .map(|r| (*r, found[r]))
            .collect()
    }

    /// Subword-closure of the stored reduced word of `w`.
    fn lower_interval_set(&self, w: ElementId) -> BitSet {
        let mut set = BitSet::new(self.order());
        let mut members = vec![ElementId(0)];
        set.insert(0);
        for &i in &self.words[w.index()] {
            let snapshot = members.clone();
            for x in snapshot {
                let y = self.right_mul(x, i);
                if !set.contains(y.index()) {
                    set.insert(y.index());
                    members.push(y);
                }
            }
        }
        set
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank()
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn ids(&self) -> impl Iterator<Item = ElementId> + Clone {
        (0..self.elements.len() as u32).map(ElementId)
    }

    pub fn identity(&self) -> ElementId {
        ElementId(0)
    }

    pub fn longest(&self) -> ElementId {
        self.longest
    }

    pub fn element(&self, w: ElementId) -> &WeylElement {
        &self.elements[w.index()]
    }

    pub fn length(&self, w: ElementId) -> usize {
        self.elements[w.index()].length
    }

    /// The fixed reduced word of `w` (0-based simple indices).
    pub fn reduced_word(&self, w: ElementId) -> &[usize] {
        &self.words[w.index()]
    }

    /// Human-readable word with 1-based indices, `"e"` for the identity.
    pub fn word_label(&self, w: ElementId) -> String {
        let word = self.reduced_word(w);
        if word.is_empty() {
            return "e".to_string();
        }
        word.iter().map(|i| format!("s{}", i + 1)).collect()
    }

    /// Looks an element up by its canonical form.
    pub fn find(&self, element: &WeylElement) -> Option<ElementId> {
        self.lookup.get(&element.simple_images).copied()
    }

    /// Product of a word of simple reflections (0-based), reduced or not.
    pub fn from_word(&self, word: &[usize]) -> Result<ElementId> {
        let mut x = self.identity();
        for &i in word {
            if i >= self.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    rank: self.rank(),
                });
            }
            x = self.right_mul(x, i);
        }
        Ok(x)
    }

    /// `w · s_i`
    pub fn right_mul(&self, w: ElementId, i: usize) -> ElementId {
        self.right_mul[w.index()][i]
    }

    /// `s_i · w`
    pub fn left_mul(&self, i: usize, w: ElementId) -> ElementId {
        self.left_mul[i][w.index()]
    }

    pub fn multiply(&self, a: ElementId, b: ElementId) -> ElementId {
        self.words[b.index()]
            .iter()
            .fold(a, |x, &i| self.right_mul(x, i))
    }

    pub fn inverse(&self, w: ElementId) -> ElementId {
        self.inverses[w.index()]
    }

    /// `w(λ)` for a weight in fundamental coordinates.
    pub fn act(&self, w: ElementId, lambda: &Weight) -> Weight {
        apply_matrix(&self.matrices[w.index()], self.rank(), lambda)
    }

    /// Reflections `s_α` paired with their positive roots, in root-system order.
    pub fn reflections(&self) -> &[(Weight, ElementId)] {
        &self.reflections
    }

    /// Bruhat order `v ≤ w` by the subword criterion on the stored reduced word of `w`.
    pub fn bruhat_leq(&self, v: ElementId, w: ElementId) -> bool {
        match &self.down {
            Some(down) => down[w.index()].contains(v.index()),
            None => {
                if self.length(v) > self.length(w) {
                    return false;
                }
                self.lower_interval_set(w).contains(v.index())
            }
        }
    }

    pub fn lower_interval(&self, w: ElementId) -> Vec<ElementId> {
        self.ids().filter(|&v| self.bruhat_leq(v, w)).collect()
    }

    pub fn upper_interval(&self, w: ElementId) -> Vec<ElementId> {
        self.ids().filter(|&v| self.bruhat_leq(w, v)).collect()
    }

    /// Demazure (0-Hecke) product of a word: `s_i ⋆ s_i = s_i`.
    pub fn demazure_product(&self, word: &[usize]) -> Result<ElementId> {
        let mut w = self.identity();
        for &i in word {
            if i >= self.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    rank: self.rank(),
                });
            }
            let next = self.right_mul(w, i);
            if self.length(next) > self.length(w) {
                w = next;
            }
        }
        Ok(w)
    }

    pub fn validate_parabolic(&self, parabolic: &[usize]) -> Result<()> {
        for &i in parabolic {
            if i >= self.rank() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    rank: self.rank(),
                });
            }
        }
        Ok(())
    }

    /// `W^P`: elements with `ℓ(w s_i) > ℓ(w)` for every `i` in `parabolic`.
    pub fn minimal_coset_reps(&self, parabolic: &[usize]) -> Result<Vec<ElementId>> {
        self.validate_parabolic(parabolic)?;
        Ok(self
            .ids()
            .filter(|&w| self.is_minimal_rep(w, parabolic))
            .collect())
    }

    pub fn is_minimal_rep(&self, w: ElementId, parabolic: &[usize]) -> bool {
        parabolic
            .iter()
            .all(|&i| self.length(self.right_mul(w, i)) > self.length(w))
    }

    /// Elements sorted by length, ties broken by id.
    pub fn ids_by_length(&self) -> Vec<ElementId> {
        let mut ids: Vec<ElementId> = self.ids().collect();
        ids.sort_by_key(|&w| (self.length(w), w));
        ids
    }
}

fn apply_matrix(m: &[i32], n: usize, lambda: &Weight) -> Weight {
    let mut out = Weight::zero(n);
    for r in 0..n {
        let mut acc = 0;
        for c in 0..n {
            acc += m[r * n + c] * lambda.get(c);
        }
        out.set(r, acc);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::root_system::CartanType;

    fn group(t: CartanType, n: usize) -> WeylGroup {
        WeylGroup::generate(&RootSystem::new(t, n).unwrap()).unwrap()
    }

    fn lengths(g: &WeylGroup) -> Vec<usize> {
        let mut l: Vec<usize> = g.ids().map(|w| g.length(w)).collect();
        l.sort();
        l
    }

    #[test]
    fn group_orders() {
        assert_eq!(group(CartanType::A, 1).order(), 2);
        assert_eq!(group(CartanType::A, 2).order(), 6);
        assert_eq!(group(CartanType::B, 2).order(), 8);
        assert_eq!(group(CartanType::G, 2).order(), 12);
        assert_eq!(group(CartanType::A, 3).order(), 24);
        assert_eq!(group(CartanType::B, 3).order(), 48);
        assert_eq!(group(CartanType::D, 4).order(), 192);
        assert_eq!(group(CartanType::F, 4).order(), 1152);
    }

    #[test]
    fn a2_length_multiset() {
        assert_eq!(lengths(&group(CartanType::A, 2)), vec![0, 1, 1, 2, 2, 3]);
    }

    #[test]
    fn longest_element_length() {
        for (t, n) in [(CartanType::B, 2), (CartanType::G, 2), (CartanType::A, 3)] {
            let g = group(t, n);
            assert_eq!(
                g.length(g.longest()),
                g.root_system().positive_roots().len()
            );
            assert_eq!(g.ids().filter(|&w| g.length(w) == 0).count(), 1);
        }
    }

    #[test]
    fn order_cap_is_enforced() {
        let rs = RootSystem::new(CartanType::A, 3).unwrap();
        assert!(matches!(
            WeylGroup::generate_with_cap(&rs, 10),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn length_counts_inversions() {
        let g = group(CartanType::B, 3);
        let rs = g.root_system();
        for w in g.ids() {
            let inversions = rs
                .positive_roots()
                .iter()
                .filter(|a| !rs.is_positive_root(&g.act(w, a)))
                .count();
            assert_eq!(inversions, g.length(w));
        }
    }

    #[test]
    fn reduced_words_are_lexicographically_least() {
        let g = group(CartanType::A, 2);
        let w0 = g.longest();
        assert_eq!(g.reduced_word(w0), &[0, 1, 0]);
        assert_eq!(g.word_label(w0), "s1s2s1");
        assert_eq!(g.word_label(g.identity()), "e");
    }

    #[test]
    fn bruhat_examples() {
        let g = group(CartanType::A, 2);
        let s1 = g.from_word(&[0]).unwrap();
        let s2 = g.from_word(&[1]).unwrap();
        let s1s2 = g.from_word(&[0, 1]).unwrap();
        assert!(g.bruhat_leq(s1, s1s2));
        assert!(!g.bruhat_leq(s1, s2));
        for w in g.ids() {
            assert!(g.bruhat_leq(g.identity(), w));
            assert_eq!(g.bruhat_leq(g.longest(), w), w == g.longest());
        }
    }

    #[test]
    fn demazure_products() {
        let a1 = group(CartanType::A, 1);
        assert_eq!(
            a1.demazure_product(&[0, 0]).unwrap(),
            a1.from_word(&[0]).unwrap()
        );
        assert_eq!(a1.demazure_product(&[]).unwrap(), a1.identity());
        let a2 = group(CartanType::A, 2);
        assert_eq!(a2.demazure_product(&[0, 1, 0, 1]).unwrap(), a2.longest());
        assert!(a2.demazure_product(&[2]).is_err());
    }

    #[test]
    fn demazure_product_of_reduced_word_is_element() {
        let g = group(CartanType::G, 2);
        for w in g.ids() {
            assert_eq!(g.demazure_product(g.reduced_word(w)).unwrap(), w);
        }
    }

    #[test]
    fn coset_representatives() {
        let g = group(CartanType::A, 2);
        assert_eq!(g.minimal_coset_reps(&[]).unwrap().len(), 6);
        assert_eq!(g.minimal_coset_reps(&[0, 1]).unwrap(), vec![g.identity()]);
        let reps = g.minimal_coset_reps(&[1]).unwrap();
        let mut l: Vec<usize> = reps.iter().map(|&w| g.length(w)).collect();
        l.sort();
        assert_eq!(l, vec![0, 1, 2]);
        assert!(g.minimal_coset_reps(&[5]).is_err());
    }

    #[test]
    fn inverse_and_multiply() {
        let g = group(CartanType::B, 3);
        for w in g.ids() {
            assert_eq!(g.multiply(w, g.inverse(w)), g.identity());
            assert_eq!(g.length(w), g.length(g.inverse(w)));
        }
    }

    #[test]
    fn reflections_act_as_root_reflections() {
        let g = group(CartanType::G, 2);
        let rs = g.root_system();
        for (root, t) in g.reflections() {
            assert_eq!(g.act(*t, root), -*root);
            assert_eq!(g.multiply(*t, *t), g.identity());
            for i in 0..rs.rank() {
                let a = rs.simple_root(i);
                let c = rs.coroot_pairing(&a, root).unwrap() as i32;
                assert_eq!(g.act(*t, &a), a - root.scaled(c));
            }
        }
    }

    #[test]
    fn on_demand_bruhat_matches_precomputed() {
        let g = group(CartanType::A, 3);
        for v in g.ids() {
            for w in g.ids() {
                let on_demand =
                    g.length(v) <= g.length(w) && g.lower_interval_set(w).contains(v.index());
                assert_eq!(g.bruhat_leq(v, w), on_demand);
            }
        }
    }
}
