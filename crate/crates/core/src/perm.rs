//! Permutations of block indices and permutation groups on them.
//!
//! Indices are 0-based internally. Composition is `(s . t)(i) = s(t(i))`;
//! the block matrix [`block_perm_matrix`] keeps the arrangement in which
//! the product identity reads `P_t * P_s = P_{s . t}` (that order of the
//! factors is the one the normalizer factorization manipulates, and it is
//! pinned by an exhaustive test).

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use crate::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PermError {
    #[error("images {0:?} are not a bijection")]
    NotABijection(Vec<usize>),
    #[error("the element set is not closed under composition")]
    NotClosed,
    #[error("the group is not transitive")]
    NotTransitive,
    #[error("degree {0} is out of the supported range 1..=7")]
    DegreeOutOfRange(usize),
}

/// A permutation of `{0, .., k-1}`, stored by its image sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(PermError::NotABijection(images));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    /// Convenience constructor from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Self {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                images[cycle[w]] = cycle[(w + 1) % cycle.len()];
            }
        }
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    /// `(self . other)(i) = self(other(i))`
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            images[img] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    pub fn order(&self) -> usize {
        let mut cur = self.clone();
        let mut ord = 1;
        while !cur.is_identity() {
            cur = cur.compose(self);
            ord += 1;
        }
        ord
    }

    /// The moved set: points the permutation does not fix.
    pub fn moved_points(&self) -> BTreeSet<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(i, &img)| i != img)
            .map(|(i, _)| i)
            .collect()
    }
}

/// A finite permutation group, stored as its full element set in canonical
/// order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Permutation>,
}

impl PermGroup {
    pub fn close(degree: usize, generators: &[Permutation]) -> Self {
        let mut set: BTreeSet<Permutation> = BTreeSet::new();
        set.insert(Permutation::identity(degree));
        let mut queue: VecDeque<Permutation> = set.iter().cloned().collect();
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = g.compose(&x);
                if set.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        PermGroup {
            degree,
            elements: set.into_iter().collect(),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup {
            degree,
            elements: vec![Permutation::identity(degree)],
        }
    }

    /// Builds a group from an element set, verifying closure.
    pub fn from_elements(degree: usize, elements: Vec<Permutation>) -> Result<Self, PermError> {
        let set: BTreeSet<Permutation> = elements.into_iter().collect();
        for a in &set {
            for b in &set {
                if !set.contains(&a.compose(b)) {
                    return Err(PermError::NotClosed);
                }
            }
        }
        Ok(PermGroup {
            degree,
            elements: set.into_iter().collect(),
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    /// Orbit of a point under the whole element set.
    pub fn orbit(&self, point: usize) -> BTreeSet<usize> {
        self.elements.iter().map(|p| p.apply(point)).collect()
    }

    /// True iff the orbit of point 0 is everything.
    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| a.compose(b) == b.compose(a)))
    }

    fn conjugacy_class(&self, p: &Permutation) -> BTreeSet<Permutation> {
        self.elements
            .iter()
            .map(|g| g.compose(p).compose(&g.inverse()))
            .collect()
    }

    /// All normal subgroups of exponent dividing 2, including the trivial
    /// one, in canonical order.
    ///
    /// Such a subgroup is generated by the involution classes it contains,
    /// so scanning subsets of involution classes is exhaustive.
    pub fn normal_elementary_abelian_two_subgroups(&self) -> Vec<PermGroup> {
        let involutions: BTreeSet<Permutation> = self
            .elements
            .iter()
            .filter(|p| !p.is_identity() && p.compose(p).is_identity())
            .cloned()
            .collect();
        let mut classes: Vec<Vec<Permutation>> = Vec::new();
        let mut seen: BTreeSet<Permutation> = BTreeSet::new();
        for p in &involutions {
            if seen.contains(p) {
                continue;
            }
            let class = self.conjugacy_class(p);
            seen.extend(class.iter().cloned());
            classes.push(class.into_iter().collect());
        }

        let mut result: BTreeSet<PermGroup> = BTreeSet::new();
        result.insert(PermGroup::trivial(self.degree));
        for mask in 1u32..(1 << classes.len()) {
            let gens: Vec<Permutation> = classes
                .iter()
                .enumerate()
                .filter(|(c, _)| mask & (1 << c) != 0)
                .flat_map(|(_, class)| class.iter().cloned())
                .collect();
            let h = PermGroup::close(self.degree, &gens);
            let exponent_two = h
                .elements
                .iter()
                .all(|p| p.is_identity() || p.compose(p).is_identity());
            if exponent_two {
                result.insert(h);
            }
        }
        result.into_iter().collect()
    }
}

/// Verdict of the odd-degree scan for normal elementary abelian 2-subgroups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaVerdict {
    Holds,
    /// A nontrivial normal elementary abelian 2-subgroup (possible only for
    /// even degree).
    Counterexample(PermGroup),
}

/// For a transitive group of odd degree, asserts that only the trivial
/// normal elementary abelian 2-subgroup exists; for even degree a
/// counterexample may be returned.
pub fn check_odd_degree_lemma(q: &PermGroup) -> Result<LemmaVerdict, PermError> {
    if !q.is_transitive() {
        return Err(PermError::NotTransitive);
    }
    let nontrivial = q
        .normal_elementary_abelian_two_subgroups()
        .into_iter()
        .filter(|h| h.order() > 1)
        .max_by_key(PermGroup::order);
    Ok(match nontrivial {
        None => LemmaVerdict::Holds,
        Some(h) => LemmaVerdict::Counterexample(h),
    })
}

/// Block permutation matrix of degree `k * e`: identity blocks at block
/// positions `(i, j)` with `tau(i) = j`, zero elsewhere.
pub fn block_perm_matrix(tau: &Permutation, block_degree: usize) -> IntMatrix {
    let k = tau.degree();
    let e = block_degree;
    IntMatrix::from_fn(k * e, k * e, |r, c| {
        let (bi, ri) = (r / e, r % e);
        let (bj, rj) = (c / e, c % e);
        if tau.apply(bi) == bj && ri == rj {
            1.into()
        } else {
            0.into()
        }
    })
}

/// Every permutation of `{0..k-1}` in lexicographic order.
pub fn all_permutations(degree: usize) -> Vec<Permutation> {
    let mut result = Vec::new();
    let mut images = Vec::new();
    let mut used = vec![false; degree];
    fn rec(
        degree: usize,
        images: &mut Vec<usize>,
        used: &mut Vec<bool>,
        result: &mut Vec<Permutation>,
    ) {
        if images.len() == degree {
            result.push(Permutation {
                images: images.clone(),
            });
            return;
        }
        for i in 0..degree {
            if !used[i] {
                used[i] = true;
                images.push(i);
                rec(degree, images, used, result);
                images.pop();
                used[i] = false;
            }
        }
    }
    rec(degree, &mut images, &mut used, &mut result);
    result
}

/// All transitive subgroups of the symmetric group on `degree` points,
/// enumerated as closures of generator subsets of size at most two and
/// deduplicated. Exhaustive for the degrees in range: at this scale every
/// transitive subgroup is 2-generated.
///
/// Two reductions keep the largest degrees tractable without changing the
/// enumerated family: the closure of a pair depends only on the cyclic
/// subgroups its members generate, so one representative per cyclic
/// subgroup suffices; and for degree at least 5, a closure that grows past
/// (degree-1)! elements can only be the alternating or the symmetric group
/// (every other proper subgroup has index at least the degree), resolved by
/// the parity of the generators.
pub fn transitive_subgroups(degree: usize) -> Result<Vec<PermGroup>, PermError> {
    if degree == 0 || degree > 7 {
        return Err(PermError::DegreeOutOfRange(degree));
    }
    let all = all_permutations(degree);
    let n = all.len();
    let index: BTreeMap<&Permutation, usize> = all.iter().zip(0..).collect();
    // Index-level composition table; u16 suffices up to degree 7.
    let mut table = vec![0u16; n * n];
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            table[i * n + j] = index[&a.compose(b)] as u16;
        }
    }
    let even: Vec<bool> = all.iter().map(is_even).collect();
    let words = n.div_ceil(64);
    let contains = |bits: &[u64], i: usize| bits[i / 64] & (1 << (i % 64)) != 0;

    let full_bits: Vec<u64> = {
        let mut bits = vec![0u64; words];
        for i in 0..n {
            bits[i / 64] |= 1 << (i % 64);
        }
        bits
    };
    let alternating_bits: Vec<u64> = {
        let mut bits = vec![0u64; words];
        for i in 0..n {
            if even[i] {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        bits
    };
    // Above this size only the alternating and symmetric groups remain.
    let giant_cutoff = if degree >= 5 {
        Some((1..degree).product::<usize>())
    } else {
        None
    };

    let close_pair = |seed: &[usize]| -> Vec<u64> {
        let mut bits = vec![0u64; words];
        let mut queue: Vec<usize> = Vec::new();
        let mut size = 0usize;
        for &s in seed {
            if !contains(&bits, s) {
                bits[s / 64] |= 1 << (s % 64);
                queue.push(s);
                size += 1;
            }
        }
        let mut head = 0;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &g in seed {
                let y = table[x * n + g] as usize;
                if !contains(&bits, y) {
                    bits[y / 64] |= 1 << (y % 64);
                    queue.push(y);
                    size += 1;
                }
            }
            if let Some(cutoff) = giant_cutoff {
                if size > cutoff {
                    return if seed.iter().all(|&s| even[s]) {
                        alternating_bits.clone()
                    } else {
                        full_bits.clone()
                    };
                }
            }
        }
        bits
    };

    // One representative element per distinct cyclic subgroup.
    let mut cyclic_reps: Vec<(usize, Vec<u64>)> = Vec::new();
    {
        let mut seen_cyclic: HashSet<Vec<u64>> = HashSet::new();
        for a in 0..n {
            let bits = close_pair(&[a]);
            if seen_cyclic.insert(bits.clone()) {
                cyclic_reps.push((a, bits));
            }
        }
    }

    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut groups: BTreeSet<PermGroup> = BTreeSet::new();
    let mut consider = |bits: Vec<u64>| {
        if !seen.insert(bits.clone()) {
            return;
        }
        let elements: Vec<Permutation> = (0..n)
            .filter(|&i| contains(&bits, i))
            .map(|i| all[i].clone())
            .collect();
        let orbit: BTreeSet<usize> = elements.iter().map(|p| p.apply(0)).collect();
        if orbit.len() == degree {
            groups.insert(PermGroup { degree, elements });
        }
    };
    for (i, (a, a_bits)) in cyclic_reps.iter().enumerate() {
        consider(a_bits.clone());
        for (b, b_bits) in &cyclic_reps[i + 1..] {
            // A pair inside one cyclic subgroup regenerates it.
            if contains(a_bits, *b) || contains(b_bits, *a) {
                continue;
            }
            consider(close_pair(&[*a, *b]));
        }
    }
    Ok(groups.into_iter().collect())
}

fn is_even(p: &Permutation) -> bool {
    let k = p.degree();
    let mut seen = vec![false; k];
    let mut transpositions = 0;
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut cur = start;
        while !seen[cur] {
            seen[cur] = true;
            cur = p.apply(cur);
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2 == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_convention() {
        // s = (0 1), t = (1 2); (s . t)(1) = s(2) = 2.
        let s = Permutation::from_cycles(3, &[&[0, 1]]);
        let t = Permutation::from_cycles(3, &[&[1, 2]]);
        assert_eq!(s.compose(&t).apply(1), 2);
    }

    #[test]
    fn inverse_and_order() {
        let c = Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]);
        assert_eq!(c.order(), 5);
        assert!(c.compose(&c.inverse()).is_identity());
        assert_eq!(c.moved_points().len(), 5);
    }

    #[test]
    fn from_images_validates() {
        assert!(Permutation::from_images(vec![0, 0]).is_err());
        assert!(Permutation::from_images(vec![1, 0]).is_ok());
    }

    #[test]
    fn transitivity_examples() {
        assert!(PermGroup::trivial(1).is_transitive());
        let c3 = PermGroup::close(3, &[Permutation::from_cycles(3, &[&[0, 1, 2]])]);
        assert!(c3.is_transitive());
        let fix2 = PermGroup::close(3, &[Permutation::from_cycles(3, &[&[0, 1]])]);
        assert!(!fix2.is_transitive());
    }

    #[test]
    fn normal_two_subgroups_of_c3_trivial_only() {
        let c3 = PermGroup::close(3, &[Permutation::from_cycles(3, &[&[0, 1, 2]])]);
        let subs = c3.normal_elementary_abelian_two_subgroups();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].order(), 1);
    }

    #[test]
    fn normal_two_subgroups_of_klein_regular() {
        // Every subgroup of an abelian group is normal: 1, three of order 2,
        // and the whole group.
        let v4 = PermGroup::close(
            4,
            &[
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]),
                Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]),
            ],
        );
        let subs = v4.normal_elementary_abelian_two_subgroups();
        let mut orders: Vec<usize> = subs.iter().map(PermGroup::order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![1, 2, 2, 2, 4]);
    }

    #[test]
    fn normal_two_subgroups_of_s3_trivial_only() {
        let s3 = PermGroup::close(
            3,
            &[
                Permutation::from_cycles(3, &[&[0, 1, 2]]),
                Permutation::from_cycles(3, &[&[0, 1]]),
            ],
        );
        let subs = s3.normal_elementary_abelian_two_subgroups();
        assert_eq!(subs.len(), 1);
    }

    #[test]
    fn lemma_examples() {
        let c3 = PermGroup::close(3, &[Permutation::from_cycles(3, &[&[0, 1, 2]])]);
        assert_eq!(check_odd_degree_lemma(&c3).unwrap(), LemmaVerdict::Holds);

        let v4 = PermGroup::close(
            4,
            &[
                Permutation::from_cycles(4, &[&[0, 1], &[2, 3]]),
                Permutation::from_cycles(4, &[&[0, 2], &[1, 3]]),
            ],
        );
        match check_odd_degree_lemma(&v4).unwrap() {
            LemmaVerdict::Counterexample(h) => assert_eq!(h.order(), 4),
            LemmaVerdict::Holds => panic!("regular Klein group is its own counterexample"),
        }

        let fix2 = PermGroup::close(3, &[Permutation::from_cycles(3, &[&[0, 1]])]);
        assert!(matches!(
            check_odd_degree_lemma(&fix2),
            Err(PermError::NotTransitive)
        ));
    }

    #[test]
    fn block_perm_matrix_examples() {
        let id = Permutation::identity(3);
        assert!(block_perm_matrix(&id, 2).is_identity());

        let swap = Permutation::from_cycles(2, &[&[0, 1]]);
        assert_eq!(
            block_perm_matrix(&swap, 1),
            IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]])
        );

        // tau = 3-cycle with e = 2: identity blocks in cyclic pattern.
        let tau = Permutation::from_cycles(3, &[&[0, 1, 2]]);
        let m = block_perm_matrix(&tau, 2);
        assert_eq!(m.rows(), 6);
        for bi in 0..3 {
            for bj in 0..3 {
                let block = m.submatrix(2 * bi..2 * bi + 2, 2 * bj..2 * bj + 2);
                if tau.apply(bi) == bj {
                    assert!(block.is_identity());
                } else {
                    assert!(block.is_zero());
                }
            }
        }
    }

    #[test]
    fn block_perm_product_matches_composition() {
        // P_t * P_s = P_{s . t}, exhaustively for degrees up to 4 and both
        // block sizes used downstream.
        for k in 1..=4 {
            let perms = all_permutations(k);
            for e in [1, 2] {
                for s in &perms {
                    for t in &perms {
                        let lhs = &block_perm_matrix(t, e) * &block_perm_matrix(s, e);
                        let rhs = block_perm_matrix(&s.compose(t), e);
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn transitive_subgroups_of_s3() {
        let groups = transitive_subgroups(3).unwrap();
        let mut orders: Vec<usize> = groups.iter().map(PermGroup::order).collect();
        orders.sort_unstable();
        assert_eq!(orders, vec![3, 6]);
    }

    #[test]
    fn transitive_subgroups_out_of_range() {
        assert!(transitive_subgroups(8).is_err());
        assert!(transitive_subgroups(0).is_err());
    }
}
