//! Centralizer structure and the integral normalizer of an absolutely
//! irreducible matrix group.
//!
//! The normalizer inside GL(n,Z) is computed by the automorphism loop: for
//! every automorphism of the group, the rational intertwiner space is at
//! most one-dimensional (Schur), and its primitive integral representative
//! lands in GL(n,Z) exactly when its determinant is +1 or -1. Automorphisms
//! without an integral realization are recorded, not dropped silently.
//! Every element is factored through the block decomposition as a block
//! permutation times an invertible block-diagonal part.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::clifford::{commutant_dimension, BlockDecomposition};
use crate::group::{GroupAutomorphism, GroupError, MatrixGroup};
use crate::perm::{block_perm_matrix, PermGroup, Permutation};
use crate::{IntMatrix, RatMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NormalizerError {
    #[error("representation is not absolutely irreducible (commutant dimension {dimension})")]
    NotAbsolutelyIrreducible { dimension: usize },
    #[error("intertwiner space has dimension {dimension}, contradicting Schur for an absolutely irreducible representation")]
    SchurViolation { dimension: usize },
    #[error(
        "normalizer element {index} does not factor as block permutation times block diagonal"
    )]
    FactorizationFailed { index: usize },
    #[error("collected normalizer elements are not closed under multiplication")]
    ClosureFailure,
    #[error("the group is not contained in its computed normalizer")]
    MissingInnerElement,
    #[error("singular matrix")]
    SingularInput,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Membership test for the centralizer of the decomposed subgroup: block
/// diagonal with invertible blocks in the decomposition basis.
///
/// Equivalent to commuting with the whole of the subgroup's image, which is
/// checked exhaustively in the test suite.
pub fn centralizer_membership(
    bd: &BlockDecomposition,
    m: &RatMatrix,
) -> Result<bool, NormalizerError> {
    if !m.is_square()
        || m.det()
            .map_err(|_| NormalizerError::SingularInput)?
            .is_zero()
    {
        return Err(NormalizerError::SingularInput);
    }
    let mp = bd.to_decomposition_basis(m);
    let spans = bd.block_spans();
    for (i, si) in spans.iter().enumerate() {
        for (j, sj) in spans.iter().enumerate() {
            let sub = mp.submatrix(si.clone(), sj.clone());
            if i == j {
                if sub.det().expect("blocks are square").is_zero() {
                    return Ok(false);
                }
            } else if !sub.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A normalizer element in factored form: `matrix` equals
/// `P_sigma * diag(blocks)` in the decomposition basis.
#[derive(Debug, Clone)]
pub struct NormalizerElement {
    pub matrix: IntMatrix,
    pub sigma: Permutation,
    pub blocks: Vec<RatMatrix>,
    /// The group automorphism induced by conjugation.
    pub automorphism: GroupAutomorphism,
}

/// Why an automorphism has no representative in GL(n,Z).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnrealizedReason {
    /// The rational intertwiner space is zero.
    NoRationalIntertwiner,
    /// The primitive integral intertwiner has determinant of absolute value
    /// other than one.
    NonUnimodular,
}

#[derive(Debug, Clone)]
pub struct UnrealizedAutomorphism {
    pub automorphism: GroupAutomorphism,
    pub reason: UnrealizedReason,
}

/// The normalizer of a matrix group inside GL(n,Z), with factored elements.
#[derive(Debug, Clone)]
pub struct NormalizerGroup {
    degree: usize,
    elements: Vec<NormalizerElement>,
    unrealized: Vec<UnrealizedAutomorphism>,
}

impl NormalizerGroup {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in canonical matrix order.
    pub fn elements(&self) -> &[NormalizerElement] {
        &self.elements
    }

    pub fn matrices(&self) -> Vec<IntMatrix> {
        self.elements.iter().map(|e| e.matrix.clone()).collect()
    }

    pub fn unrealized(&self) -> &[UnrealizedAutomorphism] {
        &self.unrealized
    }

    pub fn to_matrix_group(&self) -> Result<MatrixGroup, GroupError> {
        MatrixGroup::from_elements(self.degree, self.matrices())
    }
}

/// Computes the integral normalizer of an absolutely irreducible group via
/// the automorphism-intertwiner loop, factoring every element through the
/// given block decomposition.
pub fn compute_normalizer(
    g: &MatrixGroup,
    bd: &BlockDecomposition,
    scan_cap: usize,
) -> Result<NormalizerGroup, NormalizerError> {
    let dimension = commutant_dimension(g);
    if dimension != 1 {
        return Err(NormalizerError::NotAbsolutelyIrreducible { dimension });
    }
    let n = g.degree();
    let automorphisms = g.automorphisms(scan_cap)?;
    let generators: Vec<(usize, RatMatrix)> = g
        .generators()
        .iter()
        .map(|m| {
            let idx = g.element_index(m).expect("generators are elements");
            (idx, m.to_rational())
        })
        .collect();

    let mut collected: BTreeMap<IntMatrix, GroupAutomorphism> = BTreeMap::new();
    let mut unrealized = Vec::new();
    for phi in &automorphisms {
        let solutions = intertwiner_space(n, &generators, g, phi);
        match solutions.len() {
            0 => unrealized.push(UnrealizedAutomorphism {
                automorphism: phi.clone(),
                reason: UnrealizedReason::NoRationalIntertwiner,
            }),
            1 => {
                let primitive = solutions[0]
                    .primitive_integer_scale()
                    .expect("kernel basis vectors are nonzero");
                if primitive.is_unimodular() {
                    collected.insert(-&primitive, phi.clone());
                    collected.insert(primitive, phi.clone());
                } else {
                    unrealized.push(UnrealizedAutomorphism {
                        automorphism: phi.clone(),
                        reason: UnrealizedReason::NonUnimodular,
                    });
                }
            }
            dimension => return Err(NormalizerError::SchurViolation { dimension }),
        }
    }

    // The group itself realizes its inner automorphisms.
    if !g.elements().iter().all(|m| collected.contains_key(m)) {
        return Err(NormalizerError::MissingInnerElement);
    }
    // Closure under multiplication.
    for a in collected.keys() {
        for b in collected.keys() {
            if !collected.contains_key(&(a * b)) {
                return Err(NormalizerError::ClosureFailure);
            }
        }
    }

    let mut elements = Vec::with_capacity(collected.len());
    for (index, (matrix, automorphism)) in collected.into_iter().enumerate() {
        let (sigma, blocks) = factor_in_decomposition(bd, &matrix.to_rational())
            .ok_or(NormalizerError::FactorizationFailed { index })?;
        elements.push(NormalizerElement {
            matrix,
            sigma,
            blocks,
            automorphism,
        });
    }

    Ok(NormalizerGroup {
        degree: n,
        elements,
        unrealized,
    })
}

/// Basis of the solution space of `D * rho(m) = rho(phi(m)) * D` over the
/// generators, as matrices.
fn intertwiner_space(
    n: usize,
    generators: &[(usize, RatMatrix)],
    g: &MatrixGroup,
    phi: &GroupAutomorphism,
) -> Vec<RatMatrix> {
    let unknowns = n * n;
    let images: Vec<RatMatrix> = generators
        .iter()
        .map(|(idx, _)| g.element(phi.apply(*idx)).to_rational())
        .collect();
    let system = RatMatrix::from_fn(generators.len() * unknowns, unknowns, |row, col| {
        let (g_idx, rest) = (row / unknowns, row % unknowns);
        let (i, j) = (rest / n, rest % n);
        let (p, q) = (col / n, col % n);
        let m = &generators[g_idx].1;
        let phi_m = &images[g_idx];
        // Equation (i,j) of D*m - phi(m)*D = 0, coefficient of d_{p,q}.
        let mut coeff = Rational::zero();
        if p == i {
            coeff += m[(q, j)].clone();
        }
        if q == j {
            coeff -= phi_m[(i, p)].clone();
        }
        coeff
    });
    system
        .nullspace()
        .into_iter()
        .map(|v| RatMatrix::from_fn(n, n, |p, q| v[(p * n + q, 0)].clone()))
        .collect()
}

/// Factors a matrix (in original coordinates) as `P_sigma * diag(blocks)` in
/// the decomposition basis; `None` when the shape is violated.
pub fn factor_in_decomposition(
    bd: &BlockDecomposition,
    m: &RatMatrix,
) -> Option<(Permutation, Vec<RatMatrix>)> {
    let mp = bd.to_decomposition_basis(m);
    let spans = bd.block_spans();
    let k = bd.block_count();
    let mut sigma_images = vec![usize::MAX; k];
    let mut blocks: Vec<Option<RatMatrix>> = vec![None; k];
    for (i, si) in spans.iter().enumerate() {
        let mut found = None;
        for (j, sj) in spans.iter().enumerate() {
            let sub = mp.submatrix(si.clone(), sj.clone());
            if sub.is_zero() {
                continue;
            }
            if found.is_some() {
                return None;
            }
            found = Some((j, sub));
        }
        let (j, sub) = found?;
        if sub.det().ok()?.is_zero() {
            return None;
        }
        sigma_images[i] = j;
        blocks[j] = Some(sub);
    }
    let sigma = Permutation::from_images(sigma_images).ok()?;
    let blocks: Vec<RatMatrix> = blocks.into_iter().collect::<Option<_>>()?;
    // Round trip: the factored form must reproduce the matrix exactly.
    let reconstructed =
        &block_perm_matrix(&sigma, bd.multiplicity()).to_rational() * &diag_blocks(&blocks);
    if reconstructed != mp {
        return None;
    }
    Some((sigma, blocks))
}

/// Block diagonal matrix assembled from equally sized square blocks.
pub fn diag_blocks(blocks: &[RatMatrix]) -> RatMatrix {
    let e = blocks.first().map_or(0, RatMatrix::rows);
    let n = e * blocks.len();
    RatMatrix::from_fn(n, n, |i, j| {
        let (bi, bj) = (i / e, j / e);
        if bi == bj {
            blocks[bi][(i % e, j % e)].clone()
        } else {
            Rational::zero()
        }
    })
}

/// Outcome of re-deriving the wreath-product structure of a normalizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WreathVerdict {
    /// Every element factors, the arising permutations form a subgroup, and
    /// the diagonal parts lie in the centralizer.
    Holds { sigma_group: PermGroup },
    Violation {
        element_index: usize,
        reason: String,
    },
}

/// Re-derives the factored structure of every normalizer element from its
/// matrix alone and checks the wreath-product shape.
pub fn verify_wreath_structure(bd: &BlockDecomposition, n: &NormalizerGroup) -> WreathVerdict {
    let mut sigmas = Vec::new();
    for (index, elem) in n.elements().iter().enumerate() {
        let Some((sigma, blocks)) = factor_in_decomposition(bd, &elem.matrix.to_rational()) else {
            return WreathVerdict::Violation {
                element_index: index,
                reason: "factorization failed".to_string(),
            };
        };
        let diag = diag_blocks(&blocks);
        let original = &(bd.basis_change() * &diag) * bd.basis_change_inv();
        match centralizer_membership(bd, &original) {
            Ok(true) => {}
            _ => {
                return WreathVerdict::Violation {
                    element_index: index,
                    reason: "diagonal part is outside the centralizer".to_string(),
                }
            }
        }
        sigmas.push(sigma);
    }
    let sigma_group = match PermGroup::from_elements(bd.block_count(), sigmas) {
        Ok(group) => group,
        Err(_) => {
            return WreathVerdict::Violation {
                element_index: 0,
                reason: "induced permutations are not closed under composition".to_string(),
            }
        }
    };
    WreathVerdict::Holds { sigma_group }
}

/// Outcome of the exhaustive check that every normalizer element of the
/// group also normalizes the designated subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CorollaryVerdict {
    Holds,
    Violation { element_index: usize },
}

pub fn verify_corollary_subgroup(a: &MatrixGroup, n: &NormalizerGroup) -> CorollaryVerdict {
    for (index, elem) in n.elements().iter().enumerate() {
        let d = elem.matrix.to_rational();
        let d_inv = d.inverse().expect("normalizer elements are unimodular");
        for sub in a.elements() {
            let conj = &(&d * &sub.to_rational()) * &d_inv;
            let as_int = conj.to_integer_checked();
            let inside = as_int.map(|m| a.contains(&m)).unwrap_or(false);
            if !inside {
                return CorollaryVerdict::Violation {
                    element_index: index,
                };
            }
        }
    }
    CorollaryVerdict::Holds
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::decompose_restriction;
    use crate::fixtures;
    use crate::group::DEFAULT_SCAN_CAP;

    fn tetra() -> (MatrixGroup, BlockDecomposition, NormalizerGroup) {
        let g = fixtures::tetrahedral();
        let a = g
            .maximal_normal_elementary_abelian_two(DEFAULT_SCAN_CAP)
            .unwrap()
            .unwrap();
        let bd = decompose_restriction(&g, &a).unwrap();
        let n = compute_normalizer(&g, &bd, DEFAULT_SCAN_CAP).unwrap();
        (g, bd, n)
    }

    #[test]
    fn sign_group_normalizer() {
        let g = fixtures::sign_c2();
        let bd = decompose_restriction(&g, &g).unwrap();
        let n = compute_normalizer(&g, &bd, DEFAULT_SCAN_CAP).unwrap();
        assert_eq!(n.order(), 2);
        assert!(n.unrealized().is_empty());
    }

    #[test]
    fn tetrahedral_normalizer_order_48() {
        let (g, _, n) = tetra();
        assert_eq!(n.order(), 48);
        assert!(n.unrealized().is_empty());
        // Schur bound: at most two elements per automorphism.
        let auts = g.automorphisms(DEFAULT_SCAN_CAP).unwrap();
        assert!(n.order() <= 2 * auts.len());
        // Contains the group and minus identity.
        for m in g.elements() {
            assert!(n.matrices().contains(m));
        }
        let minus_id = (-&IntMatrix::identity(3).to_rational())
            .to_integer_checked()
            .unwrap();
        assert!(n.matrices().contains(&minus_id));
    }

    #[test]
    fn normalizer_rejects_not_absolutely_irreducible() {
        let z3 = fixtures::z3_gl2();
        let g = fixtures::sign_c2();
        let bd = decompose_restriction(&g, &g).unwrap();
        assert!(matches!(
            compute_normalizer(&z3, &bd, DEFAULT_SCAN_CAP),
            Err(NormalizerError::NotAbsolutelyIrreducible { dimension: 2 })
        ));
    }

    #[test]
    fn conjugation_induces_recorded_automorphism() {
        let (g, _, n) = tetra();
        for elem in n.elements() {
            let d = elem.matrix.to_rational();
            let d_inv = d.inverse().unwrap();
            for (idx, m) in g.elements().iter().enumerate() {
                let conj = &(&d * &m.to_rational()) * &d_inv;
                let conj_int = conj.to_integer_checked().unwrap();
                assert_eq!(
                    g.element_index(&conj_int),
                    Some(elem.automorphism.apply(idx))
                );
            }
        }
    }

    #[test]
    fn factorization_round_trip() {
        let (_, bd, n) = tetra();
        for elem in n.elements() {
            let reconstructed = &block_perm_matrix(&elem.sigma, bd.multiplicity()).to_rational()
                * &diag_blocks(&elem.blocks);
            assert_eq!(
                reconstructed,
                bd.to_decomposition_basis(&elem.matrix.to_rational())
            );
        }
    }

    #[test]
    fn wreath_structure_of_tetrahedral() {
        let (_, bd, n) = tetra();
        match verify_wreath_structure(&bd, &n) {
            WreathVerdict::Holds { sigma_group } => {
                // Signed permutation matrices induce all of S3 on blocks.
                assert_eq!(sigma_group.order(), 6);
            }
            WreathVerdict::Violation { reason, .. } => panic!("wreath violation: {reason}"),
        }
    }

    #[test]
    fn wreath_structure_of_sign_group() {
        let g = fixtures::sign_c2();
        let bd = decompose_restriction(&g, &g).unwrap();
        let n = compute_normalizer(&g, &bd, DEFAULT_SCAN_CAP).unwrap();
        match verify_wreath_structure(&bd, &n) {
            WreathVerdict::Holds { sigma_group } => assert_eq!(sigma_group.order(), 1),
            WreathVerdict::Violation { reason, .. } => panic!("wreath violation: {reason}"),
        }
    }

    #[test]
    fn corollary_subgroup_holds_for_tetrahedral() {
        let (_, bd, n) = tetra();
        assert_eq!(
            verify_corollary_subgroup(bd.subgroup_a(), &n),
            CorollaryVerdict::Holds
        );
    }

    #[test]
    fn factorization_with_multiplicity_two_blocks() {
        // A decomposition with e = 2, factored against a matrix that swaps
        // the two planes with distinct invertible block contents.
        let d1 = IntMatrix::diagonal(&[(-1).into(), (-1).into(), 1.into(), 1.into()]);
        let d2 = IntMatrix::diagonal(&[1.into(), 1.into(), (-1).into(), (-1).into()]);
        let a = MatrixGroup::close(&[d1, d2], 10).unwrap();
        let bd = decompose_restriction(&a, &a).unwrap();
        assert_eq!(bd.multiplicity(), 2);

        let m = RatMatrix::from_fn(4, 4, |i, j| match (i, j) {
            (0, 2) => RatMatrix::rational(1, 1),
            (0, 3) => RatMatrix::rational(2, 1),
            (1, 3) => RatMatrix::rational(1, 1),
            (2, 0) => RatMatrix::rational(0, 1),
            (3, 0) => RatMatrix::rational(1, 1),
            (2, 1) => RatMatrix::rational(-1, 1),
            _ => RatMatrix::rational(0, 1),
        });
        let (sigma, blocks) = factor_in_decomposition(&bd, &m).expect("block swap factors");
        assert_eq!(sigma.images(), &[1, 0]);
        assert_eq!(blocks.len(), 2);
        let reconstructed = &block_perm_matrix(&sigma, 2).to_rational() * &diag_blocks(&blocks);
        assert_eq!(reconstructed, bd.to_decomposition_basis(&m));
        // A matrix mixing the planes does not factor.
        let mixed = RatMatrix::identity(4);
        let mut mixed = mixed;
        mixed[(0, 2)] = RatMatrix::rational(1, 1);
        assert!(factor_in_decomposition(&bd, &mixed).is_none());
    }

    #[test]
    fn centralizer_membership_examples() {
        let (_, bd, _) = tetra();
        assert!(centralizer_membership(&bd, &RatMatrix::identity(3)).unwrap());
        let diag = RatMatrix::diagonal(&[
            RatMatrix::rational(2, 1),
            RatMatrix::rational(3, 1),
            RatMatrix::rational(5, 1),
        ]);
        assert!(centralizer_membership(&bd, &diag).unwrap());
        let swap = fixtures::permutation_matrix(&[1, 0, 2]).to_rational();
        assert!(!centralizer_membership(&bd, &swap).unwrap());
        assert!(matches!(
            centralizer_membership(&bd, &RatMatrix::zero(3, 3)),
            Err(NormalizerError::SingularInput)
        ));
    }

    #[test]
    fn centralizer_membership_matches_commutation() {
        let (_, bd, n) = tetra();
        // On a spread of normalizer elements and diagonal matrices, the shape
        // test agrees with commuting against the whole subgroup image.
        let mut candidates: Vec<RatMatrix> = n.matrices().iter().map(|m| m.to_rational()).collect();
        candidates.push(RatMatrix::diagonal(&[
            RatMatrix::rational(1, 2),
            RatMatrix::rational(3, 1),
            RatMatrix::rational(7, 5),
        ]));
        for m in candidates {
            let commutes = bd
                .subgroup_a()
                .elements()
                .iter()
                .all(|a| (&m * &a.to_rational()) == (&a.to_rational() * &m));
            assert_eq!(centralizer_membership(&bd, &m).unwrap(), commutes);
        }
    }
}
