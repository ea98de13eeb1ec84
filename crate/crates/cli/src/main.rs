//! Command line frontend: group closure, block decomposition, integral
//! normalizers, eigenvalue-1 witness tables, R-infinity certificates,
//! the odd-degree permutation scan, and twisted conjugacy counts.
//!
//! Exit codes are a stable contract: 0 success or certified, 1 mathematical
//! negative (inapplicable, counterexample, lemma failure), 2 input error,
//! 3 resource cap exceeded. Output is byte-deterministic for identical
//! inputs; there is no randomness anywhere (the RINF_SEED variable is
//! deliberately unused).

mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rinf_core::certificate::{certify_rinf, CertifyOptions};
use rinf_core::clifford::decompose_restriction;
use rinf_core::group::{GroupError, MatrixGroup};
use rinf_core::normalizer::{compute_normalizer, NormalizerError};
use rinf_core::perm::{check_odd_degree_lemma, transitive_subgroups, LemmaVerdict};
use rinf_core::reidemeister::{
    reidemeister_finite, reidemeister_torus, FiniteGroupTable, TorusCount,
};
use rinf_core::witness::{brute_force_table, constructive_table, BruteForceOutcome};
use rinf_core::{IntMatrix, Integer};

use input::{read_json, FiniteInputFile, GroupInputFile, TorusInputFile};

const EXIT_OK: u8 = 0;
const EXIT_NEGATIVE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "rinf",
    version,
    about = "Exact R-infinity certificates for integral holonomy representations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Close a generator list into a finite subgroup of GL(n,Z)
    Close(GroupArgs),
    /// Block decomposition over the maximal normal elementary abelian 2-subgroup
    Decompose(GroupArgs),
    /// Integral normalizer via the automorphism-intertwiner loop
    Normalizer(GroupArgs),
    /// Run the full hypothesis checklist and emit a certificate
    Certify(GroupArgs),
    /// Eigenvalue-1 witness table, constructive and brute force
    #[command(name = "theorem-a")]
    TheoremA(GroupArgs),
    /// Scan all transitive permutation groups of a degree for normal
    /// elementary abelian 2-subgroups
    PermLemma(PermLemmaArgs),
    /// Twisted conjugacy class counts
    Reidemeister(ReidemeisterArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// Group input file (JSON)
    #[arg(long)]
    input: PathBuf,
    /// Write the result here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Cap on the closure size
    #[arg(long, default_value_t = rinf_core::group::DEFAULT_CLOSURE_CAP)]
    max_order: usize,
    /// Cap on the group order admitted to structural scans
    #[arg(long, default_value_t = rinf_core::group::DEFAULT_SCAN_CAP)]
    max_subgroup_scan: usize,
    /// Emit JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct PermLemmaArgs {
    /// Degree of the symmetric group to scan (2 to 7)
    degree: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReidemeisterMode {
    Torus,
    Finite,
}

#[derive(Args)]
struct ReidemeisterArgs {
    /// torus: |det(f - I)| of an integer matrix; finite: orbit count on a
    /// multiplication table with a twisting automorphism
    #[arg(value_enum)]
    mode: ReidemeisterMode,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

/// Failures that terminate a command, with their exit codes.
enum CliError {
    Input(String),
    Cap(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Cap(_) => EXIT_CAP,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Cap(m) => m,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        match e {
            GroupError::ClosureCapExceeded { .. } | GroupError::ScanCapExceeded { .. } => {
                CliError::Cap(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Close(args) => cmd_close(&args),
        Command::Decompose(args) => cmd_decompose(&args),
        Command::Normalizer(args) => cmd_normalizer(&args),
        Command::Certify(args) => cmd_certify(&args),
        Command::TheoremA(args) => cmd_theorem_a(&args),
        Command::PermLemma(args) => cmd_perm_lemma(&args),
        Command::Reidemeister(args) => cmd_reidemeister(&args),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn emit(output: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(output: &Option<PathBuf>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Input(format!("serialization failed: {e}")))?;
    text.push('\n');
    emit(output, &text)
}

fn load_group(args: &GroupArgs) -> Result<(MatrixGroup, GroupInputFile), CliError> {
    let file: GroupInputFile = read_json(&args.input).map_err(CliError::Input)?;
    let generators = file.generator_matrices().map_err(CliError::Input)?;
    let group = MatrixGroup::close(&generators, args.max_order)?;
    Ok((group, file))
}

fn matrix_rows(m: &IntMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)].to_string()).collect())
        .collect()
}

fn cmd_close(args: &GroupArgs) -> Result<u8, CliError> {
    let (group, _) = load_group(args)?;

    #[derive(Serialize)]
    struct CloseDoc {
        degree: usize,
        order: usize,
        generator_count: usize,
        elements: Vec<Vec<Vec<String>>>,
    }
    let doc = CloseDoc {
        degree: group.degree(),
        order: group.order(),
        generator_count: group.generators().len(),
        elements: group.elements().iter().map(matrix_rows).collect(),
    };
    if args.json {
        emit_json(&args.output, &doc)?;
    } else {
        let text = format!(
            "order {} (degree {}, {} generators)\n",
            doc.order, doc.degree, doc.generator_count
        );
        emit(&args.output, &text)?;
    }
    Ok(EXIT_OK)
}

fn cmd_decompose(args: &GroupArgs) -> Result<u8, CliError> {
    let (group, _) = load_group(args)?;
    let subgroup = match group.maximal_normal_elementary_abelian_two(args.max_subgroup_scan) {
        Ok(Some(a)) => a,
        Ok(None) => {
            emit(
                &args.output,
                "inapplicable: only the trivial normal elementary abelian 2-subgroup exists\n",
            )?;
            return Ok(EXIT_NEGATIVE);
        }
        Err(GroupError::AmbiguousMaximalTwoSubgroup) => {
            emit(
                &args.output,
                "inapplicable: the maximal normal elementary abelian 2-subgroup is not unique\n",
            )?;
            return Ok(EXIT_NEGATIVE);
        }
        Err(e) => return Err(e.into()),
    };
    let bd = match decompose_restriction(&group, &subgroup) {
        Ok(bd) => bd,
        Err(e) => {
            emit(&args.output, &format!("inapplicable: {e}\n"))?;
            return Ok(EXIT_NEGATIVE);
        }
    };

    #[derive(Serialize)]
    struct DecomposeDoc {
        degree: usize,
        order: usize,
        subgroup_order: usize,
        block_count: usize,
        multiplicity: usize,
        characters: Vec<Vec<i8>>,
        kernel_order: usize,
        image_order: usize,
        image_transitive: bool,
        basis_change_primitive: Vec<Vec<String>>,
    }
    let doc = DecomposeDoc {
        degree: group.degree(),
        order: group.order(),
        subgroup_order: subgroup.order(),
        block_count: bd.block_count(),
        multiplicity: bd.multiplicity(),
        characters: bd.characters().to_vec(),
        kernel_order: bd.kernel().order(),
        image_order: bd.image().order(),
        image_transitive: bd.image().is_transitive(),
        basis_change_primitive: matrix_rows(
            &bd.basis_change()
                .primitive_integer_scale()
                .expect("basis changes are nonzero"),
        ),
    };
    if args.json {
        emit_json(&args.output, &doc)?;
    } else {
        let text = format!(
            "{} blocks of multiplicity {} over a subgroup of order {}; kernel {}, image {} ({})\n",
            doc.block_count,
            doc.multiplicity,
            doc.subgroup_order,
            doc.kernel_order,
            doc.image_order,
            if doc.image_transitive {
                "transitive"
            } else {
                "not transitive"
            }
        );
        emit(&args.output, &text)?;
    }
    Ok(EXIT_OK)
}

/// Shared pipeline: subgroup, decomposition, normalizer. The outer error is
/// terminal (input or cap); the inner one is a mathematical negative.
#[allow(clippy::type_complexity)]
fn pipeline(
    args: &GroupArgs,
    group: &MatrixGroup,
) -> Result<Result<(rinf_core::BlockDecomposition, rinf_core::NormalizerGroup), String>, CliError> {
    let subgroup = match group.maximal_normal_elementary_abelian_two(args.max_subgroup_scan) {
        Ok(Some(a)) => a,
        Ok(None) => {
            return Ok(Err(
                "only the trivial normal elementary abelian 2-subgroup exists".to_string(),
            ))
        }
        Err(GroupError::AmbiguousMaximalTwoSubgroup) => {
            return Ok(Err(GroupError::AmbiguousMaximalTwoSubgroup.to_string()))
        }
        Err(e) => return Err(e.into()),
    };
    let bd = match decompose_restriction(group, &subgroup) {
        Ok(bd) => bd,
        Err(e) => return Ok(Err(e.to_string())),
    };
    match compute_normalizer(group, &bd, args.max_subgroup_scan) {
        Ok(n) => Ok(Ok((bd, n))),
        Err(NormalizerError::Group(e)) => Err(e.into()),
        Err(e) => Ok(Err(e.to_string())),
    }
}

fn cmd_normalizer(args: &GroupArgs) -> Result<u8, CliError> {
    let (group, _) = load_group(args)?;
    let (_, normalizer) = match pipeline(args, &group)? {
        Ok(products) => products,
        Err(reason) => {
            emit(&args.output, &format!("inapplicable: {reason}\n"))?;
            return Ok(EXIT_NEGATIVE);
        }
    };

    #[derive(Serialize)]
    struct NormalizerElementDoc {
        matrix: Vec<Vec<String>>,
        sigma: Vec<usize>,
    }
    #[derive(Serialize)]
    struct NormalizerDoc {
        order: usize,
        unrealized_automorphisms: usize,
        elements: Vec<NormalizerElementDoc>,
    }
    let doc = NormalizerDoc {
        order: normalizer.order(),
        unrealized_automorphisms: normalizer.unrealized().len(),
        elements: normalizer
            .elements()
            .iter()
            .map(|e| NormalizerElementDoc {
                matrix: matrix_rows(&e.matrix),
                sigma: e.sigma.images().to_vec(),
            })
            .collect(),
    };
    if args.json {
        emit_json(&args.output, &doc)?;
    } else {
        emit(
            &args.output,
            &format!(
                "normalizer order {} ({} automorphisms without integral realization)\n",
                doc.order, doc.unrealized_automorphisms
            ),
        )?;
    }
    Ok(EXIT_OK)
}

fn cmd_certify(args: &GroupArgs) -> Result<u8, CliError> {
    let (group, file) = load_group(args)?;
    let options = CertifyOptions {
        scan_cap: args.max_subgroup_scan,
    };
    let certificate = certify_rinf(&group, &file.assumptions(), options).map_err(|e| match e {
        rinf_core::certificate::CertificateError::Group(g) => CliError::from(g),
        other => CliError::Input(other.to_string()),
    })?;
    let json = certificate
        .to_json_string()
        .map_err(|e| CliError::Input(e.to_string()))?;
    emit(&args.output, &json)?;
    Ok(if certificate.is_certified() {
        EXIT_OK
    } else {
        EXIT_NEGATIVE
    })
}

fn cmd_theorem_a(args: &GroupArgs) -> Result<u8, CliError> {
    let (group, _) = load_group(args)?;
    let (bd, normalizer) = match pipeline(args, &group)? {
        Ok(products) => products,
        Err(reason) => {
            emit(&args.output, &format!("inapplicable: {reason}\n"))?;
            return Ok(EXIT_NEGATIVE);
        }
    };

    #[derive(Serialize)]
    struct WitnessRowDoc {
        d: Vec<Vec<String>>,
        witness: Vec<Vec<String>>,
        path: String,
    }
    #[derive(Serialize)]
    struct TheoremADoc {
        status: String,
        normalizer_order: usize,
        rows: Vec<WitnessRowDoc>,
        counterexample: Option<Vec<Vec<String>>>,
    }

    let brute = brute_force_table(&group, &normalizer.matrices());
    let constructive = constructive_table(&group, &bd, &normalizer);
    let (status, rows, counterexample, code) = match (&brute, &constructive) {
        (BruteForceOutcome::Complete(_), Ok(table)) => (
            "complete",
            table
                .entries
                .iter()
                .map(|e| WitnessRowDoc {
                    d: matrix_rows(&e.d),
                    witness: matrix_rows(&e.witness),
                    path: e.path.as_str().to_string(),
                })
                .collect(),
            None,
            EXIT_OK,
        ),
        (BruteForceOutcome::Counterexample(d), _) => (
            "counterexample",
            Vec::new(),
            Some(matrix_rows(d)),
            EXIT_NEGATIVE,
        ),
        (BruteForceOutcome::Complete(_), Err(_)) => {
            ("constructive_failure", Vec::new(), None, EXIT_NEGATIVE)
        }
    };
    let doc = TheoremADoc {
        status: status.to_string(),
        normalizer_order: normalizer.order(),
        rows,
        counterexample,
    };
    if args.json {
        emit_json(&args.output, &doc)?;
    } else {
        let mut text = format!(
            "{} (normalizer order {})\n",
            doc.status, doc.normalizer_order
        );
        if let Some(cex) = &doc.counterexample {
            text.push_str(&format!("counterexample: {cex:?}\n"));
        } else {
            for row in &doc.rows {
                text.push_str(&format!(
                    "{} witness for {:?}: {:?}\n",
                    row.path, row.d, row.witness
                ));
            }
        }
        emit(&args.output, &text)?;
    }
    Ok(code)
}

fn cmd_perm_lemma(args: &PermLemmaArgs) -> Result<u8, CliError> {
    if !(2..=7).contains(&args.degree) {
        return Err(CliError::Input(format!(
            "degree {} is outside the supported range 2..=7",
            args.degree
        )));
    }
    let groups = transitive_subgroups(args.degree).map_err(|e| CliError::Input(e.to_string()))?;

    #[derive(Serialize)]
    struct GroupReport {
        order: usize,
        verdict: String,
        counterexample_order: Option<usize>,
    }
    #[derive(Serialize)]
    struct LemmaDoc {
        degree: usize,
        transitive_group_count: usize,
        groups: Vec<GroupReport>,
        all_hold: bool,
    }

    let mut reports = Vec::new();
    let mut all_hold = true;
    for q in &groups {
        let verdict = check_odd_degree_lemma(q).expect("enumerated groups are transitive");
        let report = match verdict {
            LemmaVerdict::Holds => GroupReport {
                order: q.order(),
                verdict: "holds".to_string(),
                counterexample_order: None,
            },
            LemmaVerdict::Counterexample(h) => {
                all_hold = false;
                GroupReport {
                    order: q.order(),
                    verdict: "counterexample".to_string(),
                    counterexample_order: Some(h.order()),
                }
            }
        };
        reports.push(report);
    }
    reports.sort_by(|a, b| {
        a.order
            .cmp(&b.order)
            .then_with(|| a.counterexample_order.cmp(&b.counterexample_order))
    });
    let doc = LemmaDoc {
        degree: args.degree,
        transitive_group_count: groups.len(),
        groups: reports,
        all_hold,
    };
    if args.json {
        emit_json(&args.output, &doc)?;
    } else {
        let mut text = format!(
            "degree {}: {} transitive groups\n",
            doc.degree, doc.transitive_group_count
        );
        for r in &doc.groups {
            match r.counterexample_order {
                None => text.push_str(&format!("order {}: holds\n", r.order)),
                Some(c) => text.push_str(&format!(
                    "order {}: counterexample of order {}\n",
                    r.order, c
                )),
            }
        }
        emit(&args.output, &text)?;
    }
    Ok(if all_hold { EXIT_OK } else { EXIT_NEGATIVE })
}

fn cmd_reidemeister(args: &ReidemeisterArgs) -> Result<u8, CliError> {
    #[derive(Serialize)]
    struct ReidemeisterDoc {
        mode: String,
        count: Option<String>,
        infinite: bool,
    }
    let doc = match args.mode {
        ReidemeisterMode::Torus => {
            let file: TorusInputFile = read_json(&args.input).map_err(CliError::Input)?;
            let matrix = input::parse_matrix(&file.matrix).map_err(CliError::Input)?;
            match reidemeister_torus(&matrix).map_err(|e| CliError::Input(e.to_string()))? {
                TorusCount::Infinite => ReidemeisterDoc {
                    mode: "torus".to_string(),
                    count: None,
                    infinite: true,
                },
                TorusCount::Finite(count) => ReidemeisterDoc {
                    mode: "torus".to_string(),
                    count: Some(count.to_string()),
                    infinite: false,
                },
            }
        }
        ReidemeisterMode::Finite => {
            let file: FiniteInputFile = read_json(&args.input).map_err(CliError::Input)?;
            let table =
                FiniteGroupTable::new(file.table).map_err(|e| CliError::Input(e.to_string()))?;
            let count = reidemeister_finite(&table, &file.automorphism)
                .map_err(|e| CliError::Input(e.to_string()))?;
            ReidemeisterDoc {
                mode: "finite".to_string(),
                count: Some(Integer::from(count).to_string()),
                infinite: false,
            }
        }
    };
    if args.json {
        emit_json(&args.output, &doc)?;
    } else {
        let text = match &doc.count {
            Some(c) => format!("{c}\n"),
            None => "infinite\n".to_string(),
        };
        emit(&args.output, &text)?;
    }
    Ok(EXIT_OK)
}
