//! Finite subgroups of GL(n,Z).
//!
//! Groups are explicit element sets closed from generators by breadth-first
//! search, kept in canonical (lexicographic) order so every downstream
//! listing is deterministic. Structural computations (normal subgroups,
//! automorphisms, derived series) run on the multiplication table and are
//! guarded by a scan cap; they are exhaustive, not clever, which is the
//! point at desk scale.

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Signed};

use crate::IntMatrix;

/// Default cap on the element count of a closure.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000;

/// Default cap on the group order admitted to structural scans.
pub const DEFAULT_SCAN_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("generator {index} is not square")]
    NonSquareGenerator { index: usize },
    #[error("generator {index} has degree {found}, expected {expected}")]
    DegreeMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("generator {index} has determinant {det}, not +1 or -1")]
    NonUnimodularGenerator { index: usize, det: String },
    #[error("no generators and no degree to close over")]
    EmptyGeneratorList,
    #[error("closure exceeded the cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("group order {order} exceeds the structural scan cap of {cap}")]
    ScanCapExceeded { order: usize, cap: usize },
    #[error("the element set is not closed under multiplication")]
    NotClosed,
    #[error("several maximal normal elementary abelian 2-subgroups exist")]
    AmbiguousMaximalTwoSubgroup,
}

/// A finite matrix group, stored as its full element set.
///
/// Elements are sorted in the canonical matrix order; `elements()[0]` is
/// therefore not the identity in general. Use [`MatrixGroup::identity_index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixGroup {
    degree: usize,
    generators: Vec<IntMatrix>,
    elements: Vec<IntMatrix>,
}

impl MatrixGroup {
    /// Breadth-first closure of a generator list inside GL(n,Z).
    pub fn close(generators: &[IntMatrix], cap: usize) -> Result<Self, GroupError> {
        let first = generators.first().ok_or(GroupError::EmptyGeneratorList)?;
        let degree = first.rows();
        for (index, g) in generators.iter().enumerate() {
            if !g.is_square() {
                return Err(GroupError::NonSquareGenerator { index });
            }
            if g.rows() != degree {
                return Err(GroupError::DegreeMismatch {
                    index,
                    expected: degree,
                    found: g.rows(),
                });
            }
            let det = g.det_bareiss().expect("square by check above");
            if !det.abs().is_one() {
                return Err(GroupError::NonUnimodularGenerator {
                    index,
                    det: det.to_string(),
                });
            }
        }

        let identity = IntMatrix::identity(degree);
        let mut seen: BTreeSet<IntMatrix> = BTreeSet::new();
        seen.insert(identity.clone());
        let mut queue: VecDeque<IntMatrix> = VecDeque::new();
        queue.push_back(identity);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = &x * g;
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(GroupError::ClosureCapExceeded { cap });
                    }
                    queue.push_back(y);
                }
            }
        }

        Ok(MatrixGroup {
            degree,
            generators: generators.to_vec(),
            elements: seen.into_iter().collect(),
        })
    }

    /// The trivial group in a given degree.
    pub fn trivial(degree: usize) -> Self {
        MatrixGroup {
            degree,
            generators: Vec::new(),
            elements: vec![IntMatrix::identity(degree)],
        }
    }

    /// Builds a group from an element set, verifying closure under products.
    ///
    /// Inverses and the identity then come for free since all elements have
    /// finite order. Generators are chosen greedily in canonical order.
    pub fn from_elements(degree: usize, elements: Vec<IntMatrix>) -> Result<Self, GroupError> {
        let set: BTreeSet<IntMatrix> = elements.into_iter().collect();
        if !set.contains(&IntMatrix::identity(degree)) {
            return Err(GroupError::NotClosed);
        }
        for a in &set {
            if a.rows() != degree || a.cols() != degree {
                return Err(GroupError::NotClosed);
            }
            for b in &set {
                if !set.contains(&(a * b)) {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        let mut group = MatrixGroup {
            degree,
            generators: Vec::new(),
            elements: set.into_iter().collect(),
        };
        group.generators = group
            .generating_sequence()
            .iter()
            .map(|&i| group.elements[i].clone())
            .collect();
        Ok(group)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    /// Elements in canonical order.
    pub fn elements(&self) -> &[IntMatrix] {
        &self.elements
    }

    pub fn element(&self, index: usize) -> &IntMatrix {
        &self.elements[index]
    }

    pub fn contains(&self, m: &IntMatrix) -> bool {
        self.element_index(m).is_some()
    }

    pub fn element_index(&self, m: &IntMatrix) -> Option<usize> {
        self.elements.binary_search(m).ok()
    }

    pub fn identity_index(&self) -> usize {
        self.element_index(&IntMatrix::identity(self.degree))
            .expect("groups contain the identity")
    }

    pub fn is_subgroup_of(&self, other: &MatrixGroup) -> bool {
        self.degree == other.degree && self.elements.iter().all(|m| other.contains(m))
    }

    /// Exhaustive normality check of `self` inside `other`.
    pub fn is_normal_in(&self, other: &MatrixGroup) -> bool {
        if !self.is_subgroup_of(other) {
            return false;
        }
        other.elements.iter().all(|x| {
            let xr = x.to_rational();
            let xi = xr.inverse().expect("group elements are invertible");
            self.elements.iter().all(|a| {
                let conj = &(&xr * &a.to_rational()) * &xi;
                let conj_int = conj
                    .to_integer_checked()
                    .expect("conjugates of integral matrices by unimodular ones are integral");
                self.contains(&conj_int)
            })
        })
    }

    /// Index-level multiplication table: `table[i][j]` is the index of
    /// `elements[i] * elements[j]`.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        self.elements
            .iter()
            .map(|a| {
                self.elements
                    .iter()
                    .map(|b| {
                        self.element_index(&(a * b))
                            .expect("element set is closed under products")
                    })
                    .collect()
            })
            .collect()
    }

    pub fn inverse_indices(&self, table: &[Vec<usize>]) -> Vec<usize> {
        let id = self.identity_index();
        (0..self.order())
            .map(|i| {
                (0..self.order())
                    .find(|&j| table[i][j] == id)
                    .expect("finite group elements have inverses")
            })
            .collect()
    }

    pub fn element_order(&self, index: usize, table: &[Vec<usize>]) -> usize {
        let id = self.identity_index();
        let mut cur = index;
        let mut ord = 1;
        while cur != id {
            cur = table[cur][index];
            ord += 1;
        }
        ord
    }

    pub fn is_abelian(&self) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| (a * b) == (b * a)))
    }

    /// Greedy minimal generating sequence over the canonical element order.
    pub fn generating_sequence(&self) -> Vec<usize> {
        let table = self.multiplication_table();
        let id = self.identity_index();
        let mut gens: Vec<usize> = Vec::new();
        let mut closed: BTreeSet<usize> = BTreeSet::new();
        closed.insert(id);
        for i in 0..self.order() {
            if closed.contains(&i) {
                continue;
            }
            gens.push(i);
            closed = close_indices(&table, closed.iter().copied().chain([i]));
            if closed.len() == self.order() {
                break;
            }
        }
        gens
    }

    /// Subgroup on a closed set of element indices.
    pub fn subgroup_from_indices(&self, indices: &BTreeSet<usize>) -> MatrixGroup {
        let elements: Vec<IntMatrix> = indices.iter().map(|&i| self.elements[i].clone()).collect();
        let mut sub = MatrixGroup {
            degree: self.degree,
            generators: Vec::new(),
            elements,
        };
        sub.generators = sub
            .generating_sequence()
            .iter()
            .map(|&i| sub.elements[i].clone())
            .collect();
        sub
    }

    pub fn conjugacy_classes(&self, table: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let inv = self.inverse_indices(table);
        let n = self.order();
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for i in 0..n {
            if assigned[i] {
                continue;
            }
            let mut class: BTreeSet<usize> = BTreeSet::new();
            for g in 0..n {
                class.insert(table[table[g][i]][inv[g]]);
            }
            for &c in &class {
                assigned[c] = true;
            }
            classes.push(class.into_iter().collect());
        }
        classes
    }

    fn check_scan_cap(&self, cap: usize) -> Result<(), GroupError> {
        if self.order() > cap {
            return Err(GroupError::ScanCapExceeded {
                order: self.order(),
                cap,
            });
        }
        Ok(())
    }

    /// All normal subgroups, in canonical order (by order, then element list).
    ///
    /// Every normal subgroup is generated by the conjugacy classes it
    /// contains, so growing known normal subgroups one class at a time
    /// reaches all of them.
    pub fn normal_subgroups(&self, scan_cap: usize) -> Result<Vec<MatrixGroup>, GroupError> {
        self.check_scan_cap(scan_cap)?;
        let table = self.multiplication_table();
        let classes = self.conjugacy_classes(&table);
        let trivial: BTreeSet<usize> = [self.identity_index()].into();

        let mut found: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        found.insert(trivial.clone());
        let mut queue: VecDeque<BTreeSet<usize>> = VecDeque::new();
        queue.push_back(trivial);
        while let Some(current) = queue.pop_front() {
            for class in &classes {
                if class.iter().all(|c| current.contains(c)) {
                    continue;
                }
                let grown =
                    close_indices(&table, current.iter().copied().chain(class.iter().copied()));
                if found.insert(grown.clone()) {
                    queue.push_back(grown);
                }
            }
        }

        let mut subgroups: Vec<MatrixGroup> = found
            .into_iter()
            .map(|indices| self.subgroup_from_indices(&indices))
            .collect();
        subgroups.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.elements.cmp(&b.elements))
        });
        Ok(subgroups)
    }

    /// The unique maximal normal subgroup in which every nontrivial element
    /// has order 2, `None` when only the trivial one exists.
    ///
    /// Outside the hypotheses used downstream the maximal such subgroup need
    /// not be unique; that case is reported as an error instead of guessing.
    pub fn maximal_normal_elementary_abelian_two(
        &self,
        scan_cap: usize,
    ) -> Result<Option<MatrixGroup>, GroupError> {
        let candidates: Vec<MatrixGroup> = self
            .normal_subgroups(scan_cap)?
            .into_iter()
            .filter(|h| {
                h.elements
                    .iter()
                    .all(|m| m.is_identity() || (m * m).is_identity())
            })
            .collect();
        let maximal: Vec<&MatrixGroup> = candidates
            .iter()
            .filter(|h| {
                candidates
                    .iter()
                    .all(|other| other.order() == h.order() || !h.is_subgroup_of(other))
            })
            .collect();
        match maximal.as_slice() {
            [one] if one.order() > 1 => Ok(Some((*one).clone())),
            [one] if one.order() == 1 => Ok(None),
            _ => Err(GroupError::AmbiguousMaximalTwoSubgroup),
        }
    }

    /// All automorphisms, by backtracking over images of a generating
    /// sequence (candidates restricted to elements of equal order) and
    /// validating on the full multiplication table.
    pub fn automorphisms(&self, scan_cap: usize) -> Result<Vec<GroupAutomorphism>, GroupError> {
        self.check_scan_cap(scan_cap)?;
        let table = self.multiplication_table();
        let n = self.order();
        let id = self.identity_index();
        let orders: Vec<usize> = (0..n).map(|i| self.element_order(i, &table)).collect();
        let gens = self.generating_sequence();

        if gens.is_empty() {
            return Ok(vec![GroupAutomorphism {
                images: vec![id; n.max(1)],
            }]);
        }

        // Expression of each element as (parent, generator position), found by
        // BFS from the identity; lets a candidate map extend in one pass.
        let mut expr: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut bfs_order = vec![id];
        let mut visited = vec![false; n];
        visited[id] = true;
        let mut head = 0;
        while head < bfs_order.len() {
            let cur = bfs_order[head];
            head += 1;
            for (pos, &g) in gens.iter().enumerate() {
                let next = table[cur][g];
                if !visited[next] {
                    visited[next] = true;
                    expr[next] = Some((cur, pos));
                    bfs_order.push(next);
                }
            }
        }
        debug_assert_eq!(bfs_order.len(), n);

        let mut result: Vec<GroupAutomorphism> = Vec::new();
        let mut images: Vec<usize> = Vec::new();
        backtrack_automorphisms(
            &table,
            &orders,
            &gens,
            &expr,
            &bfs_order,
            id,
            &mut images,
            &mut result,
        );
        result.sort_by(|a, b| a.images.cmp(&b.images));
        Ok(result)
    }

    /// Derived series `g, [g,g], [[g,g],[g,g]], ...` until stabilization.
    pub fn derived_series(&self, scan_cap: usize) -> Result<Vec<MatrixGroup>, GroupError> {
        self.check_scan_cap(scan_cap)?;
        let table = self.multiplication_table();
        let inv = self.inverse_indices(&table);
        let mut series_sets: Vec<BTreeSet<usize>> = vec![(0..self.order()).collect()];
        loop {
            let current = series_sets.last().expect("series never empty");
            let mut commutators: BTreeSet<usize> = BTreeSet::new();
            commutators.insert(self.identity_index());
            for &x in current {
                for &y in current {
                    commutators.insert(table[table[table[x][y]][inv[x]]][inv[y]]);
                }
            }
            let derived = close_indices(&table, commutators);
            if &derived == current {
                break;
            }
            series_sets.push(derived);
        }
        Ok(series_sets
            .iter()
            .map(|s| self.subgroup_from_indices(s))
            .collect())
    }

    /// Whether the derived series terminates at the trivial group.
    pub fn is_solvable(&self, scan_cap: usize) -> Result<bool, GroupError> {
        Ok(self
            .derived_series(scan_cap)?
            .last()
            .expect("nonempty")
            .order()
            == 1)
    }
}

/// Closure of a set of element indices under table multiplication.
///
/// Nonempty products of seed elements form the generated subsemigroup,
/// which equals the generated subgroup because every element has finite
/// order.
pub(crate) fn close_indices(
    table: &[Vec<usize>],
    seed: impl IntoIterator<Item = usize>,
) -> BTreeSet<usize> {
    let mut set: BTreeSet<usize> = seed.into_iter().collect();
    let mut queue: VecDeque<usize> = set.iter().copied().collect();
    let gens: Vec<usize> = set.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for &g in &gens {
            let y = table[x][g];
            if set.insert(y) {
                queue.push_back(y);
            }
        }
    }
    set
}

#[allow(clippy::too_many_arguments)]
fn backtrack_automorphisms(
    table: &[Vec<usize>],
    orders: &[usize],
    gens: &[usize],
    expr: &[Option<(usize, usize)>],
    bfs_order: &[usize],
    id: usize,
    images: &mut Vec<usize>,
    result: &mut Vec<GroupAutomorphism>,
) {
    let depth = images.len();
    if depth == gens.len() {
        if let Some(phi) = extend_generator_images(table, expr, bfs_order, id, images) {
            result.push(GroupAutomorphism { images: phi });
        }
        return;
    }
    let n = table.len();
    for candidate in 0..n {
        if orders[candidate] != orders[gens[depth]] {
            continue;
        }
        // Partial consistency: products of already-chosen generator images
        // must have the right orders.
        let consistent = images.iter().enumerate().all(|(t, &img)| {
            let expected = orders[table[gens[t]][gens[depth]]];
            orders[table[img][candidate]] == expected
        });
        if !consistent {
            continue;
        }
        images.push(candidate);
        backtrack_automorphisms(table, orders, gens, expr, bfs_order, id, images, result);
        images.pop();
    }
}

/// Extends generator images to a full map via stored expressions, then
/// validates multiplicativity and bijectivity.
fn extend_generator_images(
    table: &[Vec<usize>],
    expr: &[Option<(usize, usize)>],
    bfs_order: &[usize],
    id: usize,
    gen_images: &[usize],
) -> Option<Vec<usize>> {
    let n = table.len();
    let mut phi = vec![usize::MAX; n];
    phi[id] = id;
    for &e in bfs_order.iter().skip(1) {
        let (parent, pos) = expr[e].expect("non-identity elements have expressions");
        phi[e] = table[phi[parent]][gen_images[pos]];
    }
    // Bijectivity.
    let mut seen = vec![false; n];
    for &img in &phi {
        if img == usize::MAX || seen[img] {
            return None;
        }
        seen[img] = true;
    }
    // Full homomorphism check.
    for x in 0..n {
        for y in 0..n {
            if phi[table[x][y]] != table[phi[x]][phi[y]] {
                return None;
            }
        }
    }
    Some(phi)
}

/// An automorphism of a [`MatrixGroup`], stored as the image map on element
/// indices in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroupAutomorphism {
    images: Vec<usize>,
}

impl GroupAutomorphism {
    pub fn identity(order: usize) -> Self {
        GroupAutomorphism {
            images: (0..order).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        GroupAutomorphism { images }
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, index: usize) -> usize {
        self.images[index]
    }

    /// `(self . other)(x) = self(other(x))`
    pub fn compose(&self, other: &Self) -> Self {
        GroupAutomorphism {
            images: other.images.iter().map(|&i| self.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.images.len()];
        for (i, &img) in self.images.iter().enumerate() {
            inv[img] = i;
        }
        GroupAutomorphism { images: inv }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// Validates multiplicativity and bijectivity against a group's table.
    pub fn is_automorphism_of(&self, table: &[Vec<usize>]) -> bool {
        let n = table.len();
        if self.images.len() != n {
            return false;
        }
        let mut seen = vec![false; n];
        for &img in &self.images {
            if img >= n || seen[img] {
                return false;
            }
            seen[img] = true;
        }
        (0..n).all(|x| {
            (0..n).all(|y| self.images[table[x][y]] == table[self.images[x]][self.images[y]])
        })
    }
}
