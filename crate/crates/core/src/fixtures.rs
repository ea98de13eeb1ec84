//! Named example groups used across the test and acceptance suites.
//!
//! Each fixture is a small, fully understood subgroup of GL(n,Z). Where a
//! fixture is declared R-irreducible the fact is known by construction (the
//! rotation groups of the tetrahedron and cube act irreducibly on R^3); the
//! declaration is carried as an assumption, never re-derived.

use crate::group::{MatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::IntMatrix;

/// A named group together with its declared facts.
pub struct Fixture {
    pub name: &'static str,
    pub group: MatrixGroup,
    pub declared_r_irreducible: bool,
}

fn close(gens: &[IntMatrix]) -> MatrixGroup {
    MatrixGroup::close(gens, DEFAULT_CLOSURE_CAP).expect("fixture generators close")
}

/// The 3-cycle permutation matrix sending e1 -> e2 -> e3 -> e1.
pub fn three_cycle_matrix() -> IntMatrix {
    IntMatrix::from_i64_rows(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])
}

/// `{+1, -1}` in degree 1.
pub fn sign_c2() -> MatrixGroup {
    close(&[IntMatrix::from_i64_rows(&[&[-1]])])
}

/// Rotation group of the tetrahedron in GL(3,Z): order 12, isomorphic to A4.
pub fn tetrahedral() -> MatrixGroup {
    close(&[
        IntMatrix::from_i64_rows(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]),
        three_cycle_matrix(),
    ])
}

/// Rotation group of the cube in GL(3,Z): order 24, isomorphic to S4.
pub fn octahedral() -> MatrixGroup {
    close(&[
        IntMatrix::from_i64_rows(&[&[0, -1, 0], &[1, 0, 0], &[0, 0, 1]]),
        three_cycle_matrix(),
    ])
}

/// Klein four-group of diagonal sign matrices in GL(3,Z).
pub fn klein_diagonal() -> MatrixGroup {
    close(&[
        IntMatrix::from_i64_rows(&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]]),
        IntMatrix::from_i64_rows(&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]]),
    ])
}

/// S3 as 3x3 permutation matrices (reducible: fixes the all-ones vector).
pub fn s3_permutation() -> MatrixGroup {
    close(&[
        three_cycle_matrix(),
        IntMatrix::from_i64_rows(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]),
    ])
}

/// S4 as 4x4 permutation matrices.
pub fn s4_permutation() -> MatrixGroup {
    close(&[
        permutation_matrix(&[1, 2, 3, 0]),
        permutation_matrix(&[1, 0, 2, 3]),
    ])
}

/// A5 as 5x5 permutation matrices: order 60, simple.
pub fn a5_permutation() -> MatrixGroup {
    close(&[
        permutation_matrix(&[1, 2, 3, 4, 0]),
        permutation_matrix(&[1, 2, 0, 3, 4]),
    ])
}

/// Order-3 rotation in GL(2,Z); its rational group algebra is a quadratic
/// field, so the representation is irreducible over Q but not over C.
pub fn z3_gl2() -> MatrixGroup {
    close(&[IntMatrix::from_i64_rows(&[&[0, -1], &[1, -1]])])
}

/// Order-4 rotation in GL(2,Z), same behaviour as [`z3_gl2`].
pub fn z4_gl2() -> MatrixGroup {
    close(&[IntMatrix::from_i64_rows(&[&[0, -1], &[1, 0]])])
}

/// Permutation matrix with `m[images[j], j] = 1`: column j maps e_j to
/// e_{images[j]}.
pub fn permutation_matrix(images: &[usize]) -> IntMatrix {
    let n = images.len();
    IntMatrix::from_fn(
        n,
        n,
        |i, j| {
            if images[j] == i {
                1.into()
            } else {
                0.into()
            }
        },
    )
}

/// The fixture set: every named group with its declared facts.
pub fn all() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "sign_c2",
            group: sign_c2(),
            declared_r_irreducible: true,
        },
        Fixture {
            name: "tetrahedral",
            group: tetrahedral(),
            declared_r_irreducible: true,
        },
        Fixture {
            name: "octahedral",
            group: octahedral(),
            declared_r_irreducible: true,
        },
        Fixture {
            name: "klein_diagonal",
            group: klein_diagonal(),
            declared_r_irreducible: false,
        },
        Fixture {
            name: "s3_permutation",
            group: s3_permutation(),
            declared_r_irreducible: false,
        },
        Fixture {
            name: "s4_permutation",
            group: s4_permutation(),
            declared_r_irreducible: false,
        },
        Fixture {
            name: "z3_gl2",
            group: z3_gl2(),
            declared_r_irreducible: false,
        },
        Fixture {
            name: "z4_gl2",
            group: z4_gl2(),
            declared_r_irreducible: false,
        },
        Fixture {
            name: "a5_permutation",
            group: a5_permutation(),
            declared_r_irreducible: false,
        },
    ]
}
