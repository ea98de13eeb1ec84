//! Block decomposition of a matrix group restricted to a normal elementary
//! abelian 2-subgroup.
//!
//! The elements of such a subgroup A are commuting involutions, so the
//! ambient space splits into simultaneous (+1/-1)-eigenspaces indexed by
//! characters of A. The ambient group permutes the character blocks; the
//! kernel of that permutation action acts block-diagonally and the image is
//! a permutation group on block indices. Everything here is verified at
//! construction time: equal multiplicities, nontrivial pairwise distinct
//! characters, and exact diagonalization of A in the new basis.

use std::collections::BTreeSet;
use std::ops::Range;

use num_traits::Zero;

use crate::group::MatrixGroup;
use crate::perm::{PermGroup, Permutation};
use crate::{IntMatrix, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CliffordError {
    #[error("the designated subgroup is not a subgroup of the ambient group")]
    NotASubgroup,
    #[error("the designated subgroup is not normal in the ambient group")]
    NotNormal,
    #[error("the subgroup contains an element of order greater than 2")]
    ElementOfOrderGreaterThanTwo,
    #[error("block {block} carries the trivial character; the ambient representation cannot be both faithful and block-transitive")]
    TrivialCharacter { block: usize },
    #[error("character blocks have unequal dimensions {dims:?}; equal multiplicity fails for this input")]
    UnequalMultiplicities { dims: Vec<usize> },
    #[error("matrix does not permute the decomposition blocks")]
    BlocksNotPermuted,
    #[error("subgroup element is not scalar on a block of its own eigenspace decomposition")]
    NotDiagonalized,
}

/// Simultaneous eigenspace decomposition of the ambient space under a
/// normal elementary abelian 2-subgroup, with the induced permutation
/// action on blocks.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    group: MatrixGroup,
    subgroup: MatrixGroup,
    basis_change: RatMatrix,
    basis_change_inv: RatMatrix,
    block_count: usize,
    multiplicity: usize,
    block_spans: Vec<Range<usize>>,
    /// `characters[block][i]` is the sign of block `block` under element `i`
    /// of the subgroup (canonical element order).
    characters: Vec<Vec<i8>>,
    /// Block permutation of each ambient group element, in canonical order.
    block_actions: Vec<Permutation>,
    kernel: MatrixGroup,
    image: PermGroup,
}

/// Splits the restriction of the ambient group to `a` into character blocks.
///
/// Blocks are ordered canonically by their sign pattern on the canonical
/// generating sequence of `a` (sign -1 sorts first), and each block basis is
/// column-echelonized, so the output is deterministic.
pub fn decompose_restriction(
    g: &MatrixGroup,
    a: &MatrixGroup,
) -> Result<BlockDecomposition, CliffordError> {
    if !a.is_subgroup_of(g) {
        return Err(CliffordError::NotASubgroup);
    }
    if !a.is_normal_in(g) {
        return Err(CliffordError::NotNormal);
    }
    if a.elements()
        .iter()
        .any(|m| !m.is_identity() && !(m * m).is_identity())
    {
        return Err(CliffordError::ElementOfOrderGreaterThanTwo);
    }

    let n = g.degree();
    let gen_indices = a.generating_sequence();

    // Iterated splitting into simultaneous eigenspaces of the generators.
    let mut blocks: Vec<(Vec<i8>, RatMatrix)> = vec![(Vec::new(), RatMatrix::identity(n))];
    for &gi in &gen_indices {
        let s = a.element(gi).to_rational();
        let mut next: Vec<(Vec<i8>, RatMatrix)> = Vec::new();
        for (sig, basis) in blocks {
            let image = &s * &basis;
            for sign in [-1i8, 1i8] {
                let shifted = if sign == 1 {
                    &image - &basis
                } else {
                    &image + &basis
                };
                let kernel = shifted.nullspace();
                if kernel.is_empty() {
                    continue;
                }
                let mut combined = kernel[0].clone();
                for col in &kernel[1..] {
                    combined = combined.hstack(col);
                }
                let sub_basis = (&basis * &combined).column_echelon();
                let mut new_sig = sig.clone();
                new_sig.push(sign);
                next.push((new_sig, sub_basis));
            }
        }
        blocks = next;
    }

    // Canonical block order: -1 before +1, lexicographically on the
    // generator signature.
    blocks.sort_by_key(|(sig, _)| {
        sig.iter()
            .map(|&s| if s == -1 { 0u8 } else { 1u8 })
            .collect::<Vec<_>>()
    });

    let dims: Vec<usize> = blocks.iter().map(|(_, b)| b.cols()).collect();
    let block_count = blocks.len();
    let multiplicity = dims[0];
    if dims.iter().any(|&d| d != multiplicity) {
        return Err(CliffordError::UnequalMultiplicities { dims });
    }
    debug_assert_eq!(block_count * multiplicity, n);

    let mut basis_change = blocks[0].1.clone();
    for (_, b) in &blocks[1..] {
        basis_change = basis_change.hstack(b);
    }
    let basis_change_inv = basis_change
        .inverse()
        .expect("eigenspace bases of commuting involutions span the space");

    let block_spans: Vec<Range<usize>> = (0..block_count)
        .map(|i| i * multiplicity..(i + 1) * multiplicity)
        .collect();

    // Full characters, with the diagonalization verified element by element.
    let mut characters: Vec<Vec<i8>> = vec![Vec::new(); block_count];
    for elem in a.elements() {
        let conj = &(&basis_change_inv * &elem.to_rational()) * &basis_change;
        for (block, span) in block_spans.iter().enumerate() {
            let sub = conj.submatrix(span.clone(), span.clone());
            let sign = if sub.is_identity() {
                1i8
            } else if (-&sub).is_identity() {
                -1i8
            } else {
                return Err(CliffordError::NotDiagonalized);
            };
            characters[block].push(sign);
        }
        // Off-block entries must vanish.
        for (bi, si) in block_spans.iter().enumerate() {
            for (bj, sj) in block_spans.iter().enumerate() {
                if bi != bj && !conj.submatrix(si.clone(), sj.clone()).is_zero() {
                    return Err(CliffordError::NotDiagonalized);
                }
            }
        }
    }

    for (block, character) in characters.iter().enumerate() {
        if character.iter().all(|&s| s == 1) {
            return Err(CliffordError::TrivialCharacter { block });
        }
    }
    let distinct: BTreeSet<&Vec<i8>> = characters.iter().collect();
    debug_assert_eq!(
        distinct.len(),
        block_count,
        "characters must be pairwise distinct"
    );

    // Induced permutation of blocks for every ambient element.
    let mut block_actions = Vec::with_capacity(g.order());
    for elem in g.elements() {
        let action = block_permutation_in_basis(
            &(&(&basis_change_inv * &elem.to_rational()) * &basis_change),
            &block_spans,
        )?;
        block_actions.push(action);
    }

    let kernel_indices: BTreeSet<usize> = (0..g.order())
        .filter(|&i| block_actions[i].is_identity())
        .collect();
    let kernel = g.subgroup_from_indices(&kernel_indices);
    let image = PermGroup::from_elements(
        block_count,
        block_actions
            .iter()
            .cloned()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect(),
    )
    .expect("homomorphic images are closed");
    debug_assert_eq!(kernel.order() * image.order(), g.order());

    Ok(BlockDecomposition {
        group: g.clone(),
        subgroup: a.clone(),
        basis_change,
        basis_change_inv,
        block_count,
        multiplicity,
        block_spans,
        characters,
        block_actions,
        kernel,
        image,
    })
}

/// Block permutation of a matrix already written in the decomposition
/// basis: block column j is carried onto block row `pi(j)`.
fn block_permutation_in_basis(
    m: &RatMatrix,
    spans: &[Range<usize>],
) -> Result<Permutation, CliffordError> {
    let mut images = Vec::with_capacity(spans.len());
    for span_j in spans {
        let mut target: Option<usize> = None;
        for (i, span_i) in spans.iter().enumerate() {
            let sub = m.submatrix(span_i.clone(), span_j.clone());
            if sub.is_zero() {
                continue;
            }
            if target.is_some() {
                return Err(CliffordError::BlocksNotPermuted);
            }
            target = Some(i);
        }
        images.push(target.ok_or(CliffordError::BlocksNotPermuted)?);
    }
    Permutation::from_images(images).map_err(|_| CliffordError::BlocksNotPermuted)
}

impl BlockDecomposition {
    pub fn group(&self) -> &MatrixGroup {
        &self.group
    }

    pub fn subgroup_a(&self) -> &MatrixGroup {
        &self.subgroup
    }

    pub fn basis_change(&self) -> &RatMatrix {
        &self.basis_change
    }

    pub fn basis_change_inv(&self) -> &RatMatrix {
        &self.basis_change_inv
    }

    pub fn block_count(&self) -> usize {
        self.block_count
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn block_spans(&self) -> &[Range<usize>] {
        &self.block_spans
    }

    pub fn characters(&self) -> &[Vec<i8>] {
        &self.characters
    }

    /// Sign of block `block` under subgroup element `a_index`.
    pub fn character_value(&self, block: usize, a_index: usize) -> i8 {
        self.characters[block][a_index]
    }

    pub fn kernel(&self) -> &MatrixGroup {
        &self.kernel
    }

    pub fn image(&self) -> &PermGroup {
        &self.image
    }

    /// Conjugates a matrix into the decomposition basis.
    pub fn to_decomposition_basis(&self, m: &RatMatrix) -> RatMatrix {
        &(&self.basis_change_inv * m) * &self.basis_change
    }

    /// Block permutation of an arbitrary rational matrix (not necessarily a
    /// group element), or an error if it does not permute the blocks.
    pub fn block_permutation(&self, m: &RatMatrix) -> Result<Permutation, CliffordError> {
        block_permutation_in_basis(&self.to_decomposition_basis(m), &self.block_spans)
    }

    /// Block permutation of an ambient group element.
    pub fn block_action_of(&self, m: &IntMatrix) -> Result<Permutation, CliffordError> {
        if let Some(i) = self.group.element_index(m) {
            return Ok(self.block_actions[i].clone());
        }
        self.block_permutation(&m.to_rational())
    }

    /// Precomputed block permutations, parallel to the ambient element list.
    pub fn block_actions(&self) -> &[Permutation] {
        &self.block_actions
    }

    /// Restriction of the kernel's generators to one diagonal block.
    pub fn block_restriction(&self, block: usize) -> Vec<RatMatrix> {
        let span = self.block_spans[block].clone();
        self.kernel
            .generators()
            .iter()
            .map(|m| {
                self.to_decomposition_basis(&m.to_rational())
                    .submatrix(span.clone(), span.clone())
            })
            .collect()
    }
}

/// Dimension over Q of the algebra of matrices commuting with every listed
/// matrix, by solving the stacked linear system on the generators.
pub fn commutant_dimension_of(mats: &[RatMatrix], degree: usize) -> usize {
    if mats.is_empty() {
        return degree * degree;
    }
    let n = degree;
    let unknowns = n * n;
    let system = RatMatrix::from_fn(mats.len() * unknowns, unknowns, |row, col| {
        let (m_idx, rest) = (row / unknowns, row % unknowns);
        let (i, j) = (rest / n, rest % n);
        let (p, q) = (col / n, col % n);
        let m = &mats[m_idx];
        // Equation (i,j) of X*M - M*X = 0, coefficient of x_{p,q}.
        let mut coeff = Rational::zero();
        if p == i {
            coeff += m[(q, j)].clone();
        }
        if q == j {
            coeff -= m[(i, p)].clone();
        }
        coeff
    });
    system.nullspace().len()
}

/// Dimension of the commutant of a matrix group, computed on its generators.
pub fn commutant_dimension(g: &MatrixGroup) -> usize {
    let mats: Vec<RatMatrix> = g.generators().iter().map(IntMatrix::to_rational).collect();
    commutant_dimension_of(&mats, g.degree())
}

/// Schur test: a representation is irreducible over C exactly when its
/// commutant over Q is one-dimensional.
pub fn is_absolutely_irreducible(g: &MatrixGroup) -> bool {
    commutant_dimension(g) == 1
}
