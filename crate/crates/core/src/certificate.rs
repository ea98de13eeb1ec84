//! Machine-checkable certificates for the R-infinity property.
//!
//! [`certify_rinf`] runs the full hypothesis checklist (odd degree, solvable
//! with a nontrivial normal abelian subgroup, the maximal normal elementary
//! abelian 2-subgroup, absolute irreducibility, block decomposition and
//! transitivity, the integral normalizer, and the complete witness table
//! with its brute-force cross-check) and emits a JSON document recording
//! every hypothesis verdict and every witness. Hypothesis failures are
//! verdicts, never exceptions; only resource caps and serialization issues
//! are errors.
//!
//! [`replay`] re-validates a document from its serialized content alone:
//! the group is re-closed, the subgroup re-verified, the basis change
//! re-applied, every normalizer element re-checked and every witness pair
//! re-tested with exact determinants.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::clifford::{commutant_dimension, decompose_restriction};
use crate::group::{GroupError, MatrixGroup};
use crate::normalizer::{compute_normalizer, UnrealizedReason};
use crate::perm::Permutation;
use crate::witness::{brute_force_table, constructive_table, BruteForceOutcome, WitnessTable};
use crate::{IntMatrix, RatMatrix};

pub const CERTIFICATE_FORMAT: &str = "rinf-certificate/1";
pub const VERDICT_CERTIFIED: &str = "r_infinity_certified";
pub const VERDICT_INAPPLICABLE: &str = "inapplicable";
pub const MODE_FULL_REPRESENTATION: &str = "full_representation";

pub const STATUS_PASS: &str = "pass";
pub const STATUS_FAIL: &str = "fail";
pub const STATUS_SKIPPED: &str = "skipped";

/// Fixed order of the hypothesis checklist.
pub const CHECK_NAMES: [&str; 12] = [
    "finite_group",
    "faithful_inclusion",
    "odd_degree",
    "solvable_with_normal_abelian_subgroup",
    "maximal_normal_elementary_abelian_two_subgroup",
    "absolutely_irreducible",
    "clifford_decomposition",
    "block_action_transitive",
    "multiplicity_one_mode",
    "integral_normalizer",
    "witnesses_constructive",
    "witnesses_brute_force",
];

#[derive(Debug, thiserror::Error)]
pub enum CertificateError {
    #[error("matrix entry does not fit the JSON integer range")]
    EntryOutOfRange,
    #[error("invalid certificate document: {0}")]
    InvalidDocument(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Group(#[from] GroupError),
}

type JsonMatrix = Vec<Vec<i64>>;

fn matrix_to_json(m: &IntMatrix) -> Result<JsonMatrix, CertificateError> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| m[(i, j)].to_i64().ok_or(CertificateError::EntryOutOfRange))
                .collect()
        })
        .collect()
}

fn matrix_from_json(rows: &JsonMatrix) -> Result<IntMatrix, CertificateError> {
    let c = rows.first().map_or(0, Vec::len);
    if rows.is_empty() || rows.iter().any(|r| r.len() != c) {
        return Err(CertificateError::InvalidDocument(
            "matrix rows are empty or ragged".to_string(),
        ));
    }
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Ok(IntMatrix::from_i64_rows(&refs))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckSection {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSection {
    pub degree: usize,
    pub order: usize,
    pub generators: Vec<JsonMatrix>,
    pub elements: Vec<JsonMatrix>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionSection {
    /// Basis change scaled to a primitive integer matrix (the scale factor
    /// is irrelevant to every conjugation it is used for).
    pub basis_change_primitive: JsonMatrix,
    pub block_count: usize,
    pub multiplicity: usize,
    /// Sign of each block under each subgroup element, canonical orders.
    pub characters: Vec<Vec<i8>>,
    pub kernel_order: usize,
    pub image_order: usize,
    pub image_transitive: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizerElementSection {
    pub matrix: JsonMatrix,
    /// Image sequence of the block permutation in the factored form, 0-based.
    pub sigma: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizerSection {
    pub order: usize,
    pub elements: Vec<NormalizerElementSection>,
    /// Automorphisms without an integral realization, as reason strings.
    pub unrealized: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessRow {
    pub d: JsonMatrix,
    pub witness: JsonMatrix,
    pub path: String,
}

/// The serialized certificate. Field order is fixed, maps are ordered and
/// every listing uses a canonical order, so serialization is deterministic.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub format: String,
    pub verdict: String,
    pub mode: String,
    pub assumptions: BTreeMap<String, String>,
    pub group: GroupSection,
    pub checks: Vec<CheckSection>,
    pub derived_series_orders: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subgroup_a: Option<Vec<JsonMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub normalizer: Option<NormalizerSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_table: Option<Vec<WitnessRow>>,
}

impl CertificateDocument {
    pub fn is_certified(&self) -> bool {
        self.verdict == VERDICT_CERTIFIED
    }

    pub fn to_json_string(&self) -> Result<String, CertificateError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json_str(s: &str) -> Result<Self, CertificateError> {
        Ok(serde_json::from_str(s)?)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub scan_cap: usize,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            scan_cap: crate::group::DEFAULT_SCAN_CAP,
        }
    }
}

struct Checklist {
    checks: Vec<CheckSection>,
}

impl Checklist {
    fn new() -> Self {
        Checklist { checks: Vec::new() }
    }

    fn push(&mut self, name: &str, status: &str, detail: impl Into<String>) {
        self.checks.push(CheckSection {
            name: name.to_string(),
            status: status.to_string(),
            detail: detail.into(),
        });
    }

    fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.status == STATUS_PASS)
    }
}

/// Runs the hypothesis checklist and assembles the certificate.
pub fn certify_rinf(
    g: &MatrixGroup,
    assumptions: &BTreeMap<String, String>,
    options: CertifyOptions,
) -> Result<CertificateDocument, CertificateError> {
    let scan_cap = options.scan_cap;
    let degree = g.degree();
    let mut checks = Checklist::new();

    checks.push(
        "finite_group",
        STATUS_PASS,
        format!("closure has order {} in degree {}", g.order(), degree),
    );
    checks.push(
        "faithful_inclusion",
        STATUS_PASS,
        "the group is given by its inclusion in GL(n,Z)",
    );

    let odd = degree % 2 == 1;
    checks.push(
        "odd_degree",
        if odd { STATUS_PASS } else { STATUS_FAIL },
        format!("degree {degree}"),
    );

    let series = g.derived_series(scan_cap)?;
    let series_orders: Vec<usize> = series.iter().map(MatrixGroup::order).collect();
    let solvable = series.last().expect("series is nonempty").order() == 1;
    let has_nontrivial_abelian = solvable && g.order() > 1;
    checks.push(
        "solvable_with_normal_abelian_subgroup",
        if has_nontrivial_abelian {
            STATUS_PASS
        } else {
            STATUS_FAIL
        },
        if has_nontrivial_abelian {
            format!(
                "derived series orders {series_orders:?}; last nontrivial term is a normal abelian subgroup"
            )
        } else if !solvable {
            format!("derived series stabilizes at order {} without reaching the trivial group", series_orders.last().unwrap())
        } else {
            "the trivial group has no nontrivial normal abelian subgroup".to_string()
        },
    );

    let subgroup_a = match g.maximal_normal_elementary_abelian_two(scan_cap) {
        Ok(Some(a)) => {
            checks.push(
                "maximal_normal_elementary_abelian_two_subgroup",
                STATUS_PASS,
                format!("order {}", a.order()),
            );
            Some(a)
        }
        Ok(None) => {
            checks.push(
                "maximal_normal_elementary_abelian_two_subgroup",
                STATUS_FAIL,
                "only the trivial normal elementary abelian 2-subgroup exists",
            );
            None
        }
        Err(GroupError::AmbiguousMaximalTwoSubgroup) => {
            checks.push(
                "maximal_normal_elementary_abelian_two_subgroup",
                STATUS_FAIL,
                GroupError::AmbiguousMaximalTwoSubgroup.to_string(),
            );
            None
        }
        Err(e) => return Err(e.into()),
    };

    let commutant = commutant_dimension(g);
    let absolutely_irreducible = commutant == 1;
    checks.push(
        "absolutely_irreducible",
        if absolutely_irreducible {
            STATUS_PASS
        } else {
            STATUS_FAIL
        },
        format!("commutant dimension {commutant}"),
    );

    let decomposition = match &subgroup_a {
        None => {
            checks.push(
                "clifford_decomposition",
                STATUS_SKIPPED,
                "requires the normal elementary abelian 2-subgroup",
            );
            None
        }
        Some(a) => match decompose_restriction(g, a) {
            Ok(bd) => {
                checks.push(
                    "clifford_decomposition",
                    STATUS_PASS,
                    format!(
                        "{} blocks of multiplicity {}",
                        bd.block_count(),
                        bd.multiplicity()
                    ),
                );
                Some(bd)
            }
            Err(e) => {
                checks.push("clifford_decomposition", STATUS_FAIL, e.to_string());
                None
            }
        },
    };

    let transitive = decomposition.as_ref().map(|bd| bd.image().is_transitive());
    match (&decomposition, transitive) {
        (Some(bd), Some(t)) => checks.push(
            "block_action_transitive",
            if t { STATUS_PASS } else { STATUS_FAIL },
            format!("block action image has order {}", bd.image().order()),
        ),
        _ => checks.push(
            "block_action_transitive",
            STATUS_SKIPPED,
            "requires the block decomposition",
        ),
    }

    checks.push(
        "multiplicity_one_mode",
        STATUS_PASS,
        "the whole representation is the designated subrepresentation; the non-conjugacy hypothesis is vacuous",
    );

    let normalizer = match (&decomposition, absolutely_irreducible) {
        (Some(bd), true) => match compute_normalizer(g, bd, scan_cap) {
            Ok(n) => {
                checks.push(
                    "integral_normalizer",
                    STATUS_PASS,
                    format!(
                        "order {} with {} unrealized automorphisms",
                        n.order(),
                        n.unrealized().len()
                    ),
                );
                Some(n)
            }
            Err(crate::normalizer::NormalizerError::Group(e)) => return Err(e.into()),
            Err(e) => {
                checks.push("integral_normalizer", STATUS_FAIL, e.to_string());
                None
            }
        },
        _ => {
            checks.push(
                "integral_normalizer",
                STATUS_SKIPPED,
                "requires absolute irreducibility and the block decomposition",
            );
            None
        }
    };

    let constructive = match (&decomposition, &normalizer, odd, transitive) {
        (Some(bd), Some(n), true, Some(true)) => match constructive_table(g, bd, n) {
            Ok(table) => {
                checks.push(
                    "witnesses_constructive",
                    STATUS_PASS,
                    format!(
                        "{} witnesses constructed and determinant-verified",
                        table.entries.len()
                    ),
                );
                Some(table)
            }
            Err(e) => {
                checks.push("witnesses_constructive", STATUS_FAIL, e.to_string());
                None
            }
        },
        _ => {
            checks.push(
                "witnesses_constructive",
                STATUS_SKIPPED,
                "requires odd degree, transitivity and the normalizer",
            );
            None
        }
    };

    let brute = match &normalizer {
        Some(n) => match brute_force_table(g, &n.matrices()) {
            BruteForceOutcome::Complete(table) => {
                let agreement = match &constructive {
                    Some(c) if c.entries.len() == table.entries.len() => {
                        "agrees with the constructive table"
                    }
                    Some(_) => "row count differs from the constructive table",
                    None => "constructive table unavailable",
                };
                let complete_and_agreeing = constructive
                    .as_ref()
                    .map(|c| c.entries.len() == table.entries.len())
                    .unwrap_or(false);
                checks.push(
                    "witnesses_brute_force",
                    if complete_and_agreeing {
                        STATUS_PASS
                    } else {
                        STATUS_FAIL
                    },
                    format!("{} rows; {}", table.entries.len(), agreement),
                );
                Some(table)
            }
            BruteForceOutcome::Counterexample(d) => {
                checks.push(
                    "witnesses_brute_force",
                    STATUS_FAIL,
                    format!("no witness exists for {d:?}"),
                );
                None
            }
        },
        None => {
            checks.push(
                "witnesses_brute_force",
                STATUS_SKIPPED,
                "requires the normalizer",
            );
            None
        }
    };

    let verdict = if checks.all_pass() {
        VERDICT_CERTIFIED
    } else {
        VERDICT_INAPPLICABLE
    };

    let group_section = GroupSection {
        degree,
        order: g.order(),
        generators: g
            .generators()
            .iter()
            .map(matrix_to_json)
            .collect::<Result<_, _>>()?,
        elements: g
            .elements()
            .iter()
            .map(matrix_to_json)
            .collect::<Result<_, _>>()?,
    };

    let subgroup_section = subgroup_a
        .as_ref()
        .map(|a| {
            a.elements()
                .iter()
                .map(matrix_to_json)
                .collect::<Result<Vec<_>, _>>()
        })
        .transpose()?;

    let decomposition_section = decomposition
        .as_ref()
        .map(|bd| -> Result<DecompositionSection, CertificateError> {
            let primitive = bd
                .basis_change()
                .primitive_integer_scale()
                .expect("basis changes are nonzero");
            Ok(DecompositionSection {
                basis_change_primitive: matrix_to_json(&primitive)?,
                block_count: bd.block_count(),
                multiplicity: bd.multiplicity(),
                characters: bd.characters().to_vec(),
                kernel_order: bd.kernel().order(),
                image_order: bd.image().order(),
                image_transitive: bd.image().is_transitive(),
            })
        })
        .transpose()?;

    let normalizer_section = normalizer
        .as_ref()
        .map(|n| -> Result<NormalizerSection, CertificateError> {
            Ok(NormalizerSection {
                order: n.order(),
                elements: n
                    .elements()
                    .iter()
                    .map(|e| {
                        Ok(NormalizerElementSection {
                            matrix: matrix_to_json(&e.matrix)?,
                            sigma: e.sigma.images().to_vec(),
                        })
                    })
                    .collect::<Result<_, CertificateError>>()?,
                unrealized: n
                    .unrealized()
                    .iter()
                    .map(|u| {
                        match u.reason {
                            UnrealizedReason::NoRationalIntertwiner => "no_rational_intertwiner",
                            UnrealizedReason::NonUnimodular => "non_unimodular",
                        }
                        .to_string()
                    })
                    .collect(),
            })
        })
        .transpose()?;

    // Serialize the constructive table when available; the brute-force table
    // doubles as the fallback record.
    let table_for_doc: Option<&WitnessTable> = constructive.as_ref().or(brute.as_ref());
    let witness_section = table_for_doc
        .map(|t| -> Result<Vec<WitnessRow>, CertificateError> {
            t.entries
                .iter()
                .map(|e| {
                    Ok(WitnessRow {
                        d: matrix_to_json(&e.d)?,
                        witness: matrix_to_json(&e.witness)?,
                        path: e.path.as_str().to_string(),
                    })
                })
                .collect()
        })
        .transpose()?;

    Ok(CertificateDocument {
        format: CERTIFICATE_FORMAT.to_string(),
        verdict: verdict.to_string(),
        mode: MODE_FULL_REPRESENTATION.to_string(),
        assumptions: assumptions.clone(),
        group: group_section,
        checks: checks.checks,
        derived_series_orders: series_orders,
        subgroup_a: subgroup_section,
        decomposition: decomposition_section,
        normalizer: normalizer_section,
        witness_table: witness_section,
    })
}

/// Result of replaying a serialized certificate.
#[derive(Debug, Clone, Default)]
pub struct ReplayReport {
    pub failures: Vec<String>,
}

impl ReplayReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, condition: bool, message: impl Into<String>) {
        if !condition {
            self.failures.push(message.into());
        }
    }
}

/// Re-validates a certificate from the serialized document alone.
///
/// For a certified document every checklist predicate is re-evaluated from
/// the recorded data: the group is re-closed from its generators, the
/// subgroup and decomposition re-verified, every normalizer element
/// re-checked against both the group and the subgroup, and every witness
/// pair re-tested with an exact determinant.
pub fn replay(doc: &CertificateDocument) -> Result<ReplayReport, CertificateError> {
    let mut report = ReplayReport::default();
    report.expect(
        doc.format == CERTIFICATE_FORMAT,
        format!("unknown format {:?}", doc.format),
    );

    let generators: Vec<IntMatrix> = doc
        .group
        .generators
        .iter()
        .map(matrix_from_json)
        .collect::<Result<_, _>>()?;
    let elements: Vec<IntMatrix> = doc
        .group
        .elements
        .iter()
        .map(matrix_from_json)
        .collect::<Result<_, _>>()?;
    let degree = doc.group.degree;

    let group = match MatrixGroup::from_elements(degree, elements.clone()) {
        Ok(g) => g,
        Err(e) => {
            report
                .failures
                .push(format!("recorded element set is not a group: {e}"));
            return Ok(report);
        }
    };
    report.expect(
        group.order() == doc.group.order,
        "recorded order differs from the element count",
    );
    let reclosed = MatrixGroup::close(&generators, group.order())
        .map_err(|e| CertificateError::InvalidDocument(e.to_string()))?;
    report.expect(
        reclosed.elements() == group.elements(),
        "generators do not regenerate the recorded element set",
    );

    let recomputed_series: Vec<usize> = group
        .derived_series(group.order())
        .map_err(|e| CertificateError::InvalidDocument(e.to_string()))?
        .iter()
        .map(MatrixGroup::order)
        .collect();
    report.expect(
        recomputed_series == doc.derived_series_orders,
        "derived series orders do not replay",
    );

    if !doc.is_certified() {
        report.expect(
            doc.verdict == VERDICT_INAPPLICABLE,
            format!("unknown verdict {:?}", doc.verdict),
        );
        report.expect(
            doc.checks.iter().any(|c| c.status == STATUS_FAIL),
            "inapplicable verdict with no failed check",
        );
        replay_recomputable_failures(doc, &group, &mut report);
        return Ok(report);
    }

    report.expect(
        doc.checks.iter().all(|c| c.status == STATUS_PASS)
            && doc.checks.len() == CHECK_NAMES.len()
            && doc
                .checks
                .iter()
                .zip(CHECK_NAMES)
                .all(|(c, name)| c.name == name),
        "certified verdict requires every named check to pass",
    );
    report.expect(degree % 2 == 1, "degree is even");
    report.expect(
        recomputed_series.last() == Some(&1) && group.order() > 1,
        "group is not solvable or is trivial",
    );
    report.expect(
        commutant_dimension(&group) == 1,
        "commutant dimension is not 1",
    );

    let Some(a_rows) = &doc.subgroup_a else {
        report
            .failures
            .push("certified without a subgroup record".into());
        return Ok(report);
    };
    let a_elements: Vec<IntMatrix> = a_rows
        .iter()
        .map(matrix_from_json)
        .collect::<Result<_, _>>()?;
    let subgroup = match MatrixGroup::from_elements(degree, a_elements) {
        Ok(a) => a,
        Err(e) => {
            report
                .failures
                .push(format!("recorded subgroup is not a group: {e}"));
            return Ok(report);
        }
    };
    report.expect(subgroup.order() > 1, "recorded subgroup is trivial");
    report.expect(
        subgroup.is_normal_in(&group),
        "recorded subgroup is not normal",
    );
    report.expect(
        subgroup
            .elements()
            .iter()
            .all(|m| m.is_identity() || (m * m).is_identity()),
        "recorded subgroup has an element of order above 2",
    );

    let Some(dec) = &doc.decomposition else {
        report
            .failures
            .push("certified without a decomposition".into());
        return Ok(report);
    };
    let basis = matrix_from_json(&dec.basis_change_primitive)?.to_rational();
    let spans: Vec<Range<usize>> = (0..dec.block_count)
        .map(|i| i * dec.multiplicity..(i + 1) * dec.multiplicity)
        .collect();
    report.expect(
        dec.block_count * dec.multiplicity == degree,
        "block count times multiplicity is not the degree",
    );
    let basis_inv = match basis.inverse() {
        Ok(inv) => inv,
        Err(_) => {
            report.failures.push("basis change is singular".into());
            return Ok(report);
        }
    };
    let conj = |m: &RatMatrix| -> RatMatrix { &(&basis_inv * m) * &basis };

    // The subgroup must diagonalize blockwise with the recorded characters.
    report.expect(
        dec.characters.len() == dec.block_count
            && dec.characters.iter().all(|c| c.len() == subgroup.order()),
        "character table has the wrong shape",
    );
    if report.ok() {
        for (a_idx, a_elem) in subgroup.elements().iter().enumerate() {
            let m = conj(&a_elem.to_rational());
            for (block, span) in spans.iter().enumerate() {
                let sub = m.submatrix(span.clone(), span.clone());
                let expected = dec.characters[block][a_idx];
                let matches_sign = match expected {
                    1 => sub.is_identity(),
                    -1 => (-&sub).is_identity(),
                    _ => false,
                };
                report.expect(
                    matches_sign,
                    format!(
                        "block {block} is not scalar {expected} under subgroup element {a_idx}"
                    ),
                );
            }
            for (bi, si) in spans.iter().enumerate() {
                for (bj, sj) in spans.iter().enumerate() {
                    if bi != bj {
                        report.expect(
                            m.submatrix(si.clone(), sj.clone()).is_zero(),
                            "subgroup element is not block diagonal",
                        );
                    }
                }
            }
            if !report.ok() {
                return Ok(report);
            }
        }
        let distinct: BTreeSet<&Vec<i8>> = dec.characters.iter().collect();
        report.expect(
            distinct.len() == dec.block_count,
            "characters are not pairwise distinct",
        );
        report.expect(
            dec.characters.iter().all(|c| c.contains(&-1)),
            "a character is trivial",
        );
    }

    // Block actions of the whole group: well defined, transitive image and
    // the recorded kernel/image orders.
    let mut actions: Vec<Permutation> = Vec::with_capacity(group.order());
    for m in group.elements() {
        match block_permutation_of(&conj(&m.to_rational()), &spans) {
            Some(p) => actions.push(p),
            None => {
                report
                    .failures
                    .push("a group element does not permute the blocks".into());
                return Ok(report);
            }
        }
    }
    let kernel_count = actions.iter().filter(|p| p.is_identity()).count();
    let image: BTreeSet<&Permutation> = actions.iter().collect();
    let orbit: BTreeSet<usize> = image.iter().map(|p| p.apply(0)).collect();
    report.expect(
        kernel_count == dec.kernel_order && image.len() == dec.image_order,
        "kernel or image order does not replay",
    );
    report.expect(
        kernel_count * image.len() == group.order(),
        "kernel times image is not the group order",
    );
    report.expect(
        dec.image_transitive && orbit.len() == dec.block_count,
        "block action is not transitive",
    );

    let Some(norm) = &doc.normalizer else {
        report
            .failures
            .push("certified without a normalizer".into());
        return Ok(report);
    };
    let norm_matrices: Vec<IntMatrix> = norm
        .elements
        .iter()
        .map(|e| matrix_from_json(&e.matrix))
        .collect::<Result<_, _>>()?;
    report.expect(
        norm.order == norm_matrices.len(),
        "normalizer order disagrees with its element list",
    );
    let norm_set: BTreeSet<IntMatrix> = norm_matrices.iter().cloned().collect();
    report.expect(
        norm_set.len() == norm_matrices.len(),
        "normalizer listing has duplicates",
    );
    for m in group.elements() {
        report.expect(
            norm_set.contains(m),
            "normalizer does not contain the group",
        );
    }
    for (idx, d) in norm_matrices.iter().enumerate() {
        report.expect(
            d.is_unimodular(),
            format!("normalizer element {idx} is not unimodular"),
        );
        let d_rat = d.to_rational();
        let d_inv = match d_rat.inverse() {
            Ok(inv) => inv,
            Err(_) => {
                report
                    .failures
                    .push(format!("normalizer element {idx} is singular"));
                return Ok(report);
            }
        };
        let conj_preserves = |h: &MatrixGroup| {
            h.elements().iter().all(|m| {
                (&(&d_rat * &m.to_rational()) * &d_inv)
                    .to_integer_checked()
                    .map(|c| h.contains(&c))
                    .unwrap_or(false)
            })
        };
        report.expect(
            conj_preserves(&group),
            format!("element {idx} does not normalize the group"),
        );
        report.expect(
            conj_preserves(&subgroup),
            format!("element {idx} does not normalize the subgroup"),
        );
        // Factored block permutation must match the recorded sigma.
        match block_structure_sigma(&conj(&d_rat), &spans) {
            Some(sigma) => report.expect(
                sigma.images() == norm.elements[idx].sigma.as_slice(),
                format!("recorded sigma of element {idx} does not replay"),
            ),
            None => report
                .failures
                .push(format!("element {idx} does not factor through the blocks")),
        }
    }
    for a in &norm_set {
        for b in &norm_set {
            if !norm_set.contains(&(a * b)) {
                report
                    .failures
                    .push("normalizer listing is not closed under products".into());
                return Ok(report);
            }
        }
    }

    let Some(rows) = &doc.witness_table else {
        report
            .failures
            .push("certified without a witness table".into());
        return Ok(report);
    };
    let mut covered: BTreeSet<IntMatrix> = BTreeSet::new();
    for (idx, row) in rows.iter().enumerate() {
        let d = matrix_from_json(&row.d)?;
        let w = matrix_from_json(&row.witness)?;
        report.expect(
            norm_set.contains(&d),
            format!("witness row {idx} references a matrix outside the normalizer"),
        );
        report.expect(
            covered.insert(d.clone()),
            format!("witness row {idx} duplicates a normalizer element"),
        );
        report.expect(
            group.contains(&w),
            format!("witness {idx} is outside the group"),
        );
        let fixes = (&w * &d)
            .has_eigenvalue_one_int()
            .map_err(|e| CertificateError::InvalidDocument(e.to_string()))?;
        report.expect(
            fixes,
            format!("witness row {idx} fails the determinant test"),
        );
    }
    report.expect(
        covered.len() == norm_set.len(),
        "witness table does not cover the whole normalizer",
    );

    Ok(report)
}

/// For inapplicable documents, re-verify the failures that are recomputable
/// from the group alone.
fn replay_recomputable_failures(
    doc: &CertificateDocument,
    group: &MatrixGroup,
    report: &mut ReplayReport,
) {
    for check in &doc.checks {
        if check.status != STATUS_FAIL {
            continue;
        }
        match check.name.as_str() {
            "odd_degree" => report.expect(
                group.degree().is_multiple_of(2),
                "odd_degree marked failed but the degree is odd",
            ),
            "absolutely_irreducible" => report.expect(
                commutant_dimension(group) != 1,
                "absolute irreducibility marked failed but the commutant is one-dimensional",
            ),
            "solvable_with_normal_abelian_subgroup" => {
                let solvable = doc
                    .derived_series_orders
                    .last()
                    .map(|&o| o == 1)
                    .unwrap_or(false);
                report.expect(
                    !solvable || group.order() == 1,
                    "solvability marked failed but the replayed series reaches the trivial group",
                );
            }
            "maximal_normal_elementary_abelian_two_subgroup" => {
                if let Ok(found) = group.maximal_normal_elementary_abelian_two(group.order()) {
                    report.expect(
                        found.is_none(),
                        "subgroup search marked failed but a candidate exists",
                    );
                }
            }
            _ => {}
        }
    }
}

fn block_permutation_of(m: &RatMatrix, spans: &[Range<usize>]) -> Option<Permutation> {
    let mut images = Vec::with_capacity(spans.len());
    for span_j in spans {
        let mut target = None;
        for (i, span_i) in spans.iter().enumerate() {
            if m.submatrix(span_i.clone(), span_j.clone()).is_zero() {
                continue;
            }
            if target.is_some() {
                return None;
            }
            target = Some(i);
        }
        images.push(target?);
    }
    Permutation::from_images(images).ok()
}

/// The factored-form sigma: row block i has its unique nonzero block at
/// column sigma(i).
fn block_structure_sigma(m: &RatMatrix, spans: &[Range<usize>]) -> Option<Permutation> {
    let mut images = Vec::with_capacity(spans.len());
    for span_i in spans {
        let mut target = None;
        for (j, span_j) in spans.iter().enumerate() {
            if m.submatrix(span_i.clone(), span_j.clone()).is_zero() {
                continue;
            }
            if target.is_some() {
                return None;
            }
            target = Some(j);
        }
        images.push(target?);
    }
    Permutation::from_images(images).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn certify(g: &MatrixGroup) -> CertificateDocument {
        certify_rinf(g, &BTreeMap::new(), CertifyOptions::default()).unwrap()
    }

    #[test]
    fn tetrahedral_is_certified() {
        let doc = certify(&fixtures::tetrahedral());
        assert!(doc.is_certified());
        assert_eq!(doc.witness_table.as_ref().unwrap().len(), 48);
        assert!(doc.checks.iter().all(|c| c.status == STATUS_PASS));
    }

    #[test]
    fn octahedral_is_certified() {
        let doc = certify(&fixtures::octahedral());
        assert!(doc.is_certified());
        assert_eq!(doc.normalizer.as_ref().unwrap().order, 48);
    }

    #[test]
    fn z3_gl2_is_inapplicable() {
        let doc = certify(&fixtures::z3_gl2());
        assert!(!doc.is_certified());
        let failed: Vec<&str> = doc
            .checks
            .iter()
            .filter(|c| c.status == STATUS_FAIL)
            .map(|c| c.name.as_str())
            .collect();
        assert!(failed.contains(&"odd_degree"));
        assert!(failed.contains(&"absolutely_irreducible"));
    }

    #[test]
    fn a5_is_inapplicable() {
        let doc = certify(&fixtures::a5_permutation());
        assert!(!doc.is_certified());
        let failed: Vec<&str> = doc
            .checks
            .iter()
            .filter(|c| c.status == STATUS_FAIL)
            .map(|c| c.name.as_str())
            .collect();
        assert!(failed.contains(&"solvable_with_normal_abelian_subgroup"));
        assert!(failed.contains(&"maximal_normal_elementary_abelian_two_subgroup"));
        assert!(failed.contains(&"absolutely_irreducible"));
    }

    #[test]
    fn klein_diagonal_fails_transitivity() {
        let doc = certify(&fixtures::klein_diagonal());
        assert!(!doc.is_certified());
        let transitive = doc
            .checks
            .iter()
            .find(|c| c.name == "block_action_transitive")
            .unwrap();
        assert_eq!(transitive.status, STATUS_FAIL);
    }

    #[test]
    fn serialization_round_trip_and_replay() {
        let doc = certify(&fixtures::tetrahedral());
        let json = doc.to_json_string().unwrap();
        let parsed = CertificateDocument::from_json_str(&json).unwrap();
        let report = replay(&parsed).unwrap();
        assert!(report.ok(), "replay failures: {:?}", report.failures);
    }

    #[test]
    fn serialization_is_deterministic() {
        let a = certify(&fixtures::tetrahedral()).to_json_string().unwrap();
        let b = certify(&fixtures::tetrahedral()).to_json_string().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn replay_rejects_tampered_witness() {
        let mut doc = certify(&fixtures::tetrahedral());
        let rows = doc.witness_table.as_mut().unwrap();
        // det(I * (-I) - I) = -8, so the identity is a wrong witness for -I.
        let minus_id = vec![vec![-1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]];
        let identity = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let row = rows.iter_mut().find(|r| r.d == minus_id).unwrap();
        row.witness = identity;
        let report = replay(&doc).unwrap();
        assert!(!report.ok());
    }

    #[test]
    fn replay_rejects_witness_outside_group() {
        let mut doc = certify(&fixtures::tetrahedral());
        let rows = doc.witness_table.as_mut().unwrap();
        // An odd permutation matrix is outside the rotation group.
        rows[0].witness = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]];
        let report = replay(&doc).unwrap();
        assert!(!report.ok());
    }

    #[test]
    fn replay_validates_inapplicable_documents() {
        let doc = certify(&fixtures::z3_gl2());
        let report = replay(&doc).unwrap();
        assert!(report.ok(), "replay failures: {:?}", report.failures);
    }
}
