//! Eigenvalue-1 witnesses for normalizer elements.
//!
//! For an absolutely irreducible group of odd degree with transitive block
//! action, every normalizer element D admits a group element g such that
//! `rho(g) * D` fixes a nonzero vector. Two independent routes are
//! implemented: the constructive one walks the factored form of D (pick a
//! lift whose block action sends the leading block home, then the leading
//! block has a real eigenvalue, which sign-correction by an involution turns
//! into +1), and the brute-force one scans the whole group with exact
//! determinant tests. They are cross-checked against each other everywhere.

use num_traits::Zero;

use crate::clifford::BlockDecomposition;
use crate::group::MatrixGroup;
use crate::normalizer::{NormalizerElement, NormalizerGroup};
use crate::{IntMatrix, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WitnessError {
    #[error("degree {0} is even; the leading-block argument requires odd degree")]
    EvenDegree(usize),
    #[error("the block action is not transitive")]
    NotTransitive,
    #[error(
        "leading block has neither eigenvalue 1 nor -1; finite order of the normalizer is violated"
    )]
    NoRealEigenvalue,
    #[error("no subgroup element carries character -1 on the leading block")]
    NoSignFlip,
    #[error("product of factored forms is not block-aligned")]
    StructureViolation,
    #[error("constructed witness failed the exact determinant verification")]
    VerificationFailed,
}

/// How a witness was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessPath {
    /// A lift of a block permutation alone suffices.
    PureTau,
    /// A lift multiplied by an involution correcting the leading sign.
    InvolutionTau,
    /// Exhaustive scan.
    BruteForce,
}

impl WitnessPath {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessPath::PureTau => "pure_tau",
            WitnessPath::InvolutionTau => "involution_tau",
            WitnessPath::BruteForce => "brute_force",
        }
    }
}

/// One verified witness pair: `det(rho(witness) * d - I) = 0` exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessEntry {
    pub d: IntMatrix,
    pub witness: IntMatrix,
    pub path: WitnessPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WitnessTable {
    pub entries: Vec<WitnessEntry>,
}

/// Outcome of the exhaustive scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BruteForceOutcome {
    Complete(WitnessTable),
    /// First normalizer element, in canonical order, with no witness.
    Counterexample(IntMatrix),
}

/// Constructive witness for one factored normalizer element.
///
/// Chooses the first group element (canonical order) whose block action
/// carries block `sigma^{-1}(0)` to block 0; the product then fixes the
/// leading block, whose odd degree and finite-order context force a real
/// eigenvalue of absolute value one. A leading eigenvalue of -1 is repaired
/// by an involution acting as -1 on the leading block. The result is
/// post-verified by the exact determinant test in the original basis.
pub fn constructive_witness(
    g: &MatrixGroup,
    bd: &BlockDecomposition,
    d: &NormalizerElement,
) -> Result<WitnessEntry, WitnessError> {
    let n = g.degree();
    if n.is_multiple_of(2) {
        return Err(WitnessError::EvenDegree(n));
    }
    if !bd.image().is_transitive() {
        return Err(WitnessError::NotTransitive);
    }

    let target = d.sigma.inverse().apply(0);
    let lift_index = (0..g.order())
        .find(|&i| bd.block_actions()[i].apply(target) == 0)
        .ok_or(WitnessError::NotTransitive)?;
    let lift = g.element(lift_index).clone();

    let e = bd.multiplicity();
    let product = bd.to_decomposition_basis(&(&lift * &d.matrix).to_rational());
    // The leading block row and column must be clear outside the corner.
    if !product.submatrix(0..e, e..n).is_zero() || !product.submatrix(e..n, 0..e).is_zero() {
        return Err(WitnessError::StructureViolation);
    }
    let leading = product.submatrix(0..e, 0..e);
    let identity = RatMatrix::identity(e);

    let (witness, path) = if (&leading - &identity)
        .det()
        .expect("leading block is square")
        .is_zero()
    {
        (lift, WitnessPath::PureTau)
    } else if (&leading + &identity)
        .det()
        .expect("leading block is square")
        .is_zero()
    {
        let a = bd.subgroup_a();
        let flip_index = (0..a.order())
            .find(|&i| bd.character_value(0, i) == -1)
            .ok_or(WitnessError::NoSignFlip)?;
        (
            &a.element(flip_index).clone() * &lift,
            WitnessPath::InvolutionTau,
        )
    } else {
        return Err(WitnessError::NoRealEigenvalue);
    };

    let entry = WitnessEntry {
        d: d.matrix.clone(),
        witness,
        path,
    };
    verify_entry(g, &entry)?;
    Ok(entry)
}

/// Constructive witnesses for every element of a normalizer, in canonical
/// order.
pub fn constructive_table(
    g: &MatrixGroup,
    bd: &BlockDecomposition,
    n: &NormalizerGroup,
) -> Result<WitnessTable, WitnessError> {
    let entries = n
        .elements()
        .iter()
        .map(|d| constructive_witness(g, bd, d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WitnessTable { entries })
}

/// Exhaustive witness scan over all pairs: the independent oracle for the
/// constructive route.
pub fn brute_force_table(g: &MatrixGroup, normalizer_matrices: &[IntMatrix]) -> BruteForceOutcome {
    let mut sorted = normalizer_matrices.to_vec();
    sorted.sort();
    let mut entries = Vec::with_capacity(sorted.len());
    for d in sorted {
        let witness = g.elements().iter().find(|m| {
            (*m * &d)
                .has_eigenvalue_one_int()
                .expect("group and normalizer matrices are square")
        });
        match witness {
            Some(w) => entries.push(WitnessEntry {
                d,
                witness: w.clone(),
                path: WitnessPath::BruteForce,
            }),
            None => return BruteForceOutcome::Counterexample(d),
        }
    }
    BruteForceOutcome::Complete(WitnessTable { entries })
}

/// Exact determinant verification of a witness pair.
pub fn verify_entry(g: &MatrixGroup, entry: &WitnessEntry) -> Result<(), WitnessError> {
    if !g.contains(&entry.witness) {
        return Err(WitnessError::VerificationFailed);
    }
    let product = &entry.witness * &entry.d;
    if product
        .has_eigenvalue_one_int()
        .map_err(|_| WitnessError::VerificationFailed)?
    {
        Ok(())
    } else {
        Err(WitnessError::VerificationFailed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::decompose_restriction;
    use crate::fixtures;
    use crate::group::DEFAULT_SCAN_CAP;
    use crate::normalizer::compute_normalizer;

    fn pipeline(g: &MatrixGroup) -> (BlockDecomposition, NormalizerGroup) {
        let a = g
            .maximal_normal_elementary_abelian_two(DEFAULT_SCAN_CAP)
            .unwrap()
            .unwrap();
        let bd = decompose_restriction(g, &a).unwrap();
        let n = compute_normalizer(g, &bd, DEFAULT_SCAN_CAP).unwrap();
        (bd, n)
    }

    #[test]
    fn sign_group_witnesses() {
        let g = fixtures::sign_c2();
        let (bd, n) = pipeline(&g);
        let minus_one = IntMatrix::from_i64_rows(&[&[-1]]);
        let d = n.elements().iter().find(|e| e.matrix == minus_one).unwrap();
        let entry = constructive_witness(&g, &bd, d).unwrap();
        // rho(-1) * (-1) = 1, so the lift alone suffices.
        assert_eq!(entry.witness, minus_one);
        assert_eq!(entry.path, WitnessPath::PureTau);

        let table = constructive_table(&g, &bd, &n).unwrap();
        assert_eq!(table.entries.len(), 2);
        for entry in &table.entries {
            verify_entry(&g, entry).unwrap();
        }
    }

    #[test]
    fn tetrahedral_constructive_covers_all_48() {
        let g = fixtures::tetrahedral();
        let (bd, n) = pipeline(&g);
        assert_eq!(n.order(), 48);
        let table = constructive_table(&g, &bd, &n).unwrap();
        assert_eq!(table.entries.len(), 48);
        for entry in &table.entries {
            verify_entry(&g, entry).unwrap();
        }
    }

    #[test]
    fn tetrahedral_minus_identity_has_diagonal_witness() {
        let g = fixtures::tetrahedral();
        let (bd, n) = pipeline(&g);
        let minus_id = (-&IntMatrix::identity(3).to_rational())
            .to_integer_checked()
            .unwrap();
        let d = n.elements().iter().find(|e| e.matrix == minus_id).unwrap();
        let entry = constructive_witness(&g, &bd, d).unwrap();
        // rho(w) * (-I) = -rho(w) must fix a vector; the witness is one of
        // the diagonal involutions.
        verify_entry(&g, &entry).unwrap();
        let product = &entry.witness * &entry.d;
        assert!(product.has_eigenvalue_one_int().unwrap());
    }

    #[test]
    fn brute_force_agrees_with_constructive() {
        for g in [fixtures::sign_c2(), fixtures::tetrahedral()] {
            let (bd, n) = pipeline(&g);
            let constructive = constructive_table(&g, &bd, &n).unwrap();
            match brute_force_table(&g, &n.matrices()) {
                BruteForceOutcome::Complete(brute) => {
                    assert_eq!(brute.entries.len(), constructive.entries.len());
                    for (b, c) in brute.entries.iter().zip(&constructive.entries) {
                        assert_eq!(b.d, c.d);
                        verify_entry(&g, b).unwrap();
                        verify_entry(&g, c).unwrap();
                    }
                }
                BruteForceOutcome::Counterexample(d) => {
                    panic!("unexpected counterexample {d:?}")
                }
            }
        }
    }

    #[test]
    fn even_degree_counterexample() {
        // Z3 in GL(2,Z) with the normalizer fragment {I, -I}: -I admits no
        // witness, demonstrating that odd degree is necessary.
        let g = fixtures::z3_gl2();
        let id = IntMatrix::identity(2);
        let minus_id = (-&id.to_rational()).to_integer_checked().unwrap();
        match brute_force_table(&g, &[id, minus_id.clone()]) {
            BruteForceOutcome::Counterexample(d) => assert_eq!(d, minus_id),
            BruteForceOutcome::Complete(_) => {
                panic!("even-degree control unexpectedly satisfied")
            }
        }
    }

    #[test]
    fn constructive_rejects_even_degree() {
        let g = fixtures::sign_c2();
        let (bd, n) = pipeline(&g);
        let d = n.elements()[0].clone();
        let z4 = fixtures::z4_gl2();
        assert!(matches!(
            constructive_witness(&z4, &bd, &d),
            Err(WitnessError::EvenDegree(2))
        ));
    }

    #[test]
    fn constructive_rejects_intransitive_block_action() {
        use crate::group::GroupAutomorphism;
        use crate::perm::Permutation;

        let v = fixtures::klein_diagonal();
        let bd = decompose_restriction(&v, &v).unwrap();
        assert!(!bd.image().is_transitive());
        let d = NormalizerElement {
            matrix: IntMatrix::identity(3),
            sigma: Permutation::identity(3),
            blocks: vec![RatMatrix::identity(1); 3],
            automorphism: GroupAutomorphism::identity(v.order()),
        };
        assert!(matches!(
            constructive_witness(&v, &bd, &d),
            Err(WitnessError::NotTransitive)
        ));
    }
}
