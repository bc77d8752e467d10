//! Runs the construction and every check, and assembles the report.

use serde::Serialize;
use thiserror::Error;
use wellorder_core::compare::{compare_regular, Relation};
use wellorder_core::oracle::{maximality_check, OracleRun, RejectionTally};
use wellorder_core::regular::SUBFAMILY_SAMPLE_SEED;
use wellorder_core::wellorder::{
    check_injective, check_surjective, verify_wellorder, InjectivityReport, SurjectivityReport,
    WellOrderReport,
};
use wellorder_core::{
    build_chain, family_union, induced_order, verify_regular, ChoiceSpec, Error as CoreError,
    RegularityReport, Subset, SubsetFamily, WellOrder,
};

use crate::spec::{ProblemInput, ProblemSpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_INPUT_ERROR: i32 = 1;
pub const EXIT_CHECK_FAILURE: i32 = 2;

#[derive(Debug, Error)]
pub enum RunError {
    /// The choice function turned out to be defective during the run.
    #[error("{0}")]
    Input(CoreError),
    /// A construction step failed an internal consistency check.
    #[error("{0}")]
    Check(CoreError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => EXIT_INPUT_ERROR,
            RunError::Check(_) => EXIT_CHECK_FAILURE,
        }
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        if e.is_choice_error() {
            RunError::Input(e)
        } else {
            RunError::Check(e)
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ToolInfo {
    pub name: &'static str,
    pub version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Seeds {
    pub choice_seed: Option<u64>,
    pub sample_seed: u64,
    pub subfamily_sample_seed: u64,
}

#[derive(Debug, Serialize)]
pub struct Bijectivity {
    pub injective: InjectivityReport,
    pub surjective: SurjectivityReport,
}

#[derive(Debug, Serialize)]
pub struct QCrossCheck {
    pub equals_chain: bool,
    pub regular: bool,
    pub covers_ground: bool,
    pub maximal: bool,
}

#[derive(Debug, Default, Serialize)]
pub struct ComparabilitySummary {
    pub pairs: usize,
    pub equal: usize,
    pub left_initial_segment: usize,
    pub right_initial_segment: usize,
    pub violations: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct OracleSection {
    pub candidate_count: u64,
    pub regular_family_count: usize,
    pub rejections: RejectionTally,
    pub regular_families: Vec<SubsetFamily>,
    pub q: SubsetFamily,
    pub prefix_theorem: bool,
    pub q_cross_check: QCrossCheck,
    pub comparability: ComparabilitySummary,
}

impl OracleSection {
    fn passed(&self) -> bool {
        let q = &self.q_cross_check;
        self.prefix_theorem
            && q.equals_chain
            && q.regular
            && q.covers_ground
            && q.maximal
            && self.comparability.violations.is_empty()
    }
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool: ToolInfo,
    pub input: ProblemInput,
    pub seeds: Seeds,
    pub chain: Vec<Subset>,
    pub order: WellOrder,
    pub regularity: RegularityReport,
    pub bijectivity: Bijectivity,
    pub wellorder: WellOrderReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    pub passed: bool,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_CHECK_FAILURE
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// Builds the chain and runs every check the problem asks for.
pub fn run(spec: &ProblemSpec) -> Result<RunReport, RunError> {
    let ground = &spec.ground;
    let phi = &spec.phi;

    let chain = build_chain(ground, phi)?;
    let q = chain.to_family();
    let regularity = verify_regular(&q, phi)?;
    let order = induced_order(ground, phi)?;
    let bijectivity = Bijectivity {
        injective: check_injective(&q, phi)?,
        surjective: check_surjective(&q, phi)?,
    };
    let wellorder = verify_wellorder(&order, spec.verify)?;

    let oracle = if spec.input.options.oracle {
        Some(oracle_section(spec, &chain)?)
    } else {
        None
    };

    let passed = regularity.overall
        && bijectivity.injective.pass
        && bijectivity.surjective.pass
        && wellorder.pass
        && oracle.as_ref().is_none_or(OracleSection::passed);

    Ok(RunReport {
        tool: ToolInfo { name: "wellorder", version: env!("CARGO_PKG_VERSION") },
        input: spec.input.clone(),
        seeds: Seeds {
            choice_seed: match spec.input.choice {
                ChoiceSpec::Seeded { seed } => Some(seed),
                _ => None,
            },
            sample_seed: spec.sample_seed,
            subfamily_sample_seed: SUBFAMILY_SAMPLE_SEED,
        },
        chain: chain.stages().collect(),
        order,
        regularity,
        bijectivity,
        wellorder,
        oracle,
        passed,
    })
}

fn oracle_section(spec: &ProblemSpec, chain: &wellorder_core::Chain) -> Result<OracleSection, RunError> {
    let phi = &spec.phi;
    let run = OracleRun::execute(&spec.ground, phi)?;
    let q = run.q_union.clone();

    let mut comparability = ComparabilitySummary::default();
    for p1 in &run.regular_families {
        for p2 in &run.regular_families {
            comparability.pairs += 1;
            match compare_regular(p1, p2, phi) {
                Ok(v) => match v.relation {
                    Relation::Equal => comparability.equal += 1,
                    Relation::LeftIsInitialSegmentOfRight => comparability.left_initial_segment += 1,
                    Relation::RightIsInitialSegmentOfLeft => comparability.right_initial_segment += 1,
                },
                Err(e @ CoreError::TheoremViolation(_)) => comparability.violations.push(e.to_string()),
                Err(e) => return Err(e.into()),
            }
        }
    }

    let q_cross_check = QCrossCheck {
        equals_chain: q == chain.to_family(),
        regular: verify_regular(&q, phi)?.overall,
        covers_ground: family_union(&q).is_full(),
        maximal: maximality_check(&q, phi).map(|m| m.is_maximal()).unwrap_or(false),
    };

    Ok(OracleSection {
        candidate_count: run.candidate_count,
        regular_family_count: run.regular_family_count,
        rejections: run.rejections.clone(),
        prefix_theorem: run.matches_chain_prefixes(chain),
        regular_families: run.regular_families,
        q,
        q_cross_check,
        comparability,
    })
}

/// Aligned plain-text rendering of a report.
pub fn render_text(report: &RunReport) -> String {
    let mut rows: Vec<(String, String)> = Vec::new();
    let mut row = |k: &str, v: String| rows.push((k.to_string(), v));
    let verdict = |ok: bool| if ok { "pass" } else { "FAIL" }.to_string();

    row("tool", format!("{} {}", report.tool.name, report.tool.version));
    row("atoms", report.input.atoms.join(" "));
    row("choice", choice_summary(&report.input.choice));
    row("sample seed", report.seeds.sample_seed.to_string());
    row(
        "chain",
        report.chain.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "),
    );
    row("order", report.order.labels().join(" < "));
    let reg = &report.regularity;
    row(
        "regularity",
        format!(
            "{} (cond1 {}, cond2 {}, cond3 {}, cond4 {})",
            verdict(reg.overall),
            verdict(reg.cond1.pass),
            verdict(reg.cond2.pass),
            verdict(reg.cond3.pass),
            verdict(reg.cond4.pass)
        ),
    );
    let inj = &report.bijectivity.injective;
    row("injective", format!("{} ({} pairs)", verdict(inj.pass), inj.pairs_checked));
    let surj = &report.bijectivity.surjective;
    row(
        "surjective",
        format!("{} ({}/{} atoms)", verdict(surj.pass), surj.atoms_witnessed, surj.atoms_total),
    );
    let wo = &report.wellorder;
    row(
        "well-order",
        format!("{} ({} {}/{} subsets)", verdict(wo.pass), wo.mode, wo.subsets_passed, wo.subsets_checked),
    );
    if let Some(o) = &report.oracle {
        row(
            "oracle families",
            format!("{} regular of {} candidates", o.regular_family_count, o.candidate_count),
        );
        row("prefix theorem", verdict(o.prefix_theorem));
        let qc = &o.q_cross_check;
        row(
            "Q cross-check",
            verdict(qc.equals_chain && qc.regular && qc.covers_ground && qc.maximal),
        );
        let c = &o.comparability;
        row(
            "comparability",
            format!(
                "{} ({} pairs: {} equal, {} left<right, {} right<left)",
                verdict(c.violations.is_empty()),
                c.pairs,
                c.equal,
                c.left_initial_segment,
                c.right_initial_segment
            ),
        );
    }
    row("result", verdict(report.passed));

    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    rows.iter()
        .map(|(k, v)| format!("{k:<width$}  {v}\n"))
        .collect()
}

fn choice_summary(choice: &ChoiceSpec) -> String {
    match choice {
        ChoiceSpec::Min {} => "min".into(),
        ChoiceSpec::Seeded { seed } => format!("seeded (seed {seed})"),
        ChoiceSpec::Table { entries } => format!("table ({} entries)", entries.len()),
    }
}
