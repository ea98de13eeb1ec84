//! Twisted conjugacy class counts.
//!
//! For a finite group, the number of classes of the action
//! `alpha -> gamma * alpha * phi(gamma)^{-1}` is computed by direct orbit
//! enumeration and cross-checked against the Burnside count; the two
//! routes stay independent. For the torus case the count is
//! `|det(f - I)|` when nonzero, cross-checked against the product of the
//! Smith invariant factors of `f - I`.

use num_traits::{Signed, Zero};

use crate::group::MatrixGroup;
use crate::matrix::LinalgError;
use crate::{IntMatrix, Integer};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReidemeisterError {
    #[error("multiplication table is not square")]
    MalformedTable,
    #[error("table entry {entry} is out of range for order {order}")]
    EntryOutOfRange { entry: usize, order: usize },
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {index} has no inverse")]
    NoInverse { index: usize },
    #[error("table is not associative at ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },
    #[error("the map is not an automorphism of the table")]
    NotAnAutomorphism,
    #[error("orbit count {orbits} disagrees with Burnside count {burnside}")]
    RouteDisagreement { orbits: usize, burnside: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// An abstract finite group given by its multiplication table.
#[derive(Debug, Clone)]
pub struct FiniteGroupTable {
    order: usize,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverses: Vec<usize>,
}

impl FiniteGroupTable {
    /// Validates identity, inverses and full associativity.
    pub fn new(table: Vec<Vec<usize>>) -> Result<Self, ReidemeisterError> {
        let order = table.len();
        if order == 0 || table.iter().any(|row| row.len() != order) {
            return Err(ReidemeisterError::MalformedTable);
        }
        for row in &table {
            for &entry in row {
                if entry >= order {
                    return Err(ReidemeisterError::EntryOutOfRange { entry, order });
                }
            }
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or(ReidemeisterError::NoIdentity)?;
        let inverses = (0..order)
            .map(|i| {
                (0..order)
                    .find(|&j| table[i][j] == identity && table[j][i] == identity)
                    .ok_or(ReidemeisterError::NoInverse { index: i })
            })
            .collect::<Result<Vec<_>, _>>()?;
        for i in 0..order {
            for j in 0..order {
                for k in 0..order {
                    if table[table[i][j]][k] != table[i][table[j][k]] {
                        return Err(ReidemeisterError::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(FiniteGroupTable {
            order,
            table,
            identity,
            inverses,
        })
    }

    pub fn from_matrix_group(g: &MatrixGroup) -> Self {
        let table = g.multiplication_table();
        Self::new(table).expect("matrix groups give valid tables")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.table[i][j]
    }

    pub fn inverse(&self, i: usize) -> usize {
        self.inverses[i]
    }

    pub fn is_automorphism(&self, images: &[usize]) -> bool {
        if images.len() != self.order {
            return false;
        }
        let mut seen = vec![false; self.order];
        for &img in images {
            if img >= self.order || seen[img] {
                return false;
            }
            seen[img] = true;
        }
        (0..self.order).all(|x| {
            (0..self.order).all(|y| images[self.table[x][y]] == self.table[images[x]][images[y]])
        })
    }

    /// The inversion map, an automorphism exactly when the group is abelian.
    pub fn inversion_map(&self) -> Vec<usize> {
        self.inverses.clone()
    }
}

/// Twisted conjugacy class count by orbit enumeration, cross-checked against
/// the Burnside average of fixed points.
pub fn reidemeister_finite(
    t: &FiniteGroupTable,
    phi: &[usize],
) -> Result<usize, ReidemeisterError> {
    if !t.is_automorphism(phi) {
        return Err(ReidemeisterError::NotAnAutomorphism);
    }
    let n = t.order();
    let twist = |gamma: usize, alpha: usize| t.mul(t.mul(gamma, alpha), t.inverse(phi[gamma]));

    let mut visited = vec![false; n];
    let mut orbits = 0;
    for start in 0..n {
        if visited[start] {
            continue;
        }
        orbits += 1;
        let mut stack = vec![start];
        visited[start] = true;
        while let Some(alpha) = stack.pop() {
            for gamma in 0..n {
                let next = twist(gamma, alpha);
                if !visited[next] {
                    visited[next] = true;
                    stack.push(next);
                }
            }
        }
    }

    let fixed_sum: usize = (0..n)
        .map(|gamma| (0..n).filter(|&alpha| twist(gamma, alpha) == alpha).count())
        .sum();
    debug_assert_eq!(fixed_sum % n, 0);
    let burnside = fixed_sum / n;
    if orbits != burnside {
        return Err(ReidemeisterError::RouteDisagreement { orbits, burnside });
    }
    Ok(orbits)
}

/// Twisted conjugacy count on the torus side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TorusCount {
    Finite(Integer),
    Infinite,
}

/// `|det(f - I)|` when nonzero, `Infinite` otherwise, with the Smith
/// invariant factor product of `f - I` as an independent cross-check.
pub fn reidemeister_torus(f: &IntMatrix) -> Result<TorusCount, ReidemeisterError> {
    if !f.is_square() {
        return Err(ReidemeisterError::Linalg(LinalgError::NonSquare {
            rows: f.rows(),
            cols: f.cols(),
        }));
    }
    let shifted = f - &IntMatrix::identity(f.rows());
    let det = shifted.det_bareiss()?;
    if det.is_zero() {
        return Ok(TorusCount::Infinite);
    }
    let count = det.abs();
    let snf = shifted.smith_normal_form();
    let product = snf
        .factors
        .iter()
        .fold(Integer::from(1), |acc, v| acc * v.clone());
    if product != count {
        // Two exact routes to the same lattice index cannot disagree.
        return Err(ReidemeisterError::RouteDisagreement {
            orbits: 0,
            burnside: 0,
        });
    }
    Ok(TorusCount::Finite(count))
}
