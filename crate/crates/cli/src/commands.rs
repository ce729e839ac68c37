//! One function per subcommand. Each takes already-parsed arguments and
//! returns a [`Report`]; nothing here prints or exits.

use std::path::Path;

use serde_json::Value;
use sha2::{Digest, Sha256};

use probaccept_core::acceptance::{
    enumerate_extensions, lehrer_accept, lehrer_cascade, sequential_accept, teng_accept,
    threshold_accept, AcceptanceLevel, AcceptedSet, OrderedPolicy,
};
use probaccept_core::closure::{conjunction_support, consequence_level, contradiction_bound};
use probaccept_core::logic::{self, has_strong_inconsistency, is_satisfiable};
use probaccept_core::paraconsistency::degree_of_inconsistency;
use probaccept_core::stat_tests::{
    binomial_rejection_region, combine_tests, rejection_to_acceptance, run_test,
    AcceptedRejection, BinomialTestSpec, TestOutcome,
};
use probaccept_core::world::{biased_lottery, fair_lottery, independent_lottery, ProbabilityBound};
use probaccept_core::rational::int;
use probaccept_core::{parse, BeliefBase, Error, FormulaSet, Rational};

use crate::error::CliError;
use crate::format::{parse_base, write_base};
pub use crate::report::Report;
use crate::report::{optional, rational, Record};

/// Flags shared by every command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Globals {
    pub strict: bool,
    pub seed: u64,
    pub max_candidates: usize,
}

impl Default for Globals {
    fn default() -> Self {
        Globals {
            strict: false,
            seed: probaccept_core::acceptance::DEFAULT_SEED,
            max_candidates: logic::DEFAULT_CAP,
        }
    }
}

impl Globals {
    fn level(&self, epsilon: &Rational) -> Result<AcceptanceLevel, CliError> {
        Ok(AcceptanceLevel::new(epsilon.clone())?.with_strict(self.strict))
    }

    fn provenance(&self, digest: Option<&str>) -> Record {
        Record::new()
            .with("input_digest", optional(digest))
            .with("seed", self.seed)
            .with("strictness", if self.strict { "strict" } else { "non-strict" })
    }
}

/// A parsed belief-base file and the digest of its bytes.
#[derive(Debug, Clone)]
pub struct Input {
    pub base: BeliefBase,
    pub digest: String,
}

impl Input {
    pub fn load(path: &Path) -> Result<Input, CliError> {
        let bytes = std::fs::read(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })?;
        let text = std::str::from_utf8(&bytes)
            .map_err(|e| CliError::Format { line: 0, message: format!("not UTF-8: {e}") })?;
        Ok(Input {
            base: parse_base(text)?,
            digest: format!("sha256:{}", hex::encode(Sha256::digest(&bytes))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AcceptPolicy {
    Threshold,
    Lehrer,
    Cascade,
    Sequential,
    Teng,
}

impl AcceptPolicy {
    fn is_ordered(self) -> bool {
        matches!(self, AcceptPolicy::Sequential | AcceptPolicy::Teng)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Order {
    Natural,
    Reverse,
    Labels(Vec<String>),
}

impl Order {
    /// `natural`, `reverse`, or a comma-separated list of every label.
    pub fn parse(text: &str) -> Order {
        match text {
            "natural" => Order::Natural,
            "reverse" => Order::Reverse,
            _ => Order::Labels(text.split(',').map(|l| l.trim().to_owned()).collect()),
        }
    }

    fn labels(&self, base: &BeliefBase) -> Vec<String> {
        match self {
            Order::Natural => base.labels().to_vec(),
            Order::Reverse => base.labels().iter().rev().cloned().collect(),
            Order::Labels(labels) => labels.clone(),
        }
    }
}

fn formulas(texts: impl IntoIterator<Item = impl ToString>) -> Value {
    Value::Array(texts.into_iter().map(|t| Value::String(t.to_string())).collect())
}

fn labels_value<'a>(labels: impl IntoIterator<Item = &'a str>) -> Value {
    Value::Array(labels.into_iter().map(Value::from).collect())
}

fn accepted_records(base: &BeliefBase, set: &AcceptedSet) -> Result<Value, CliError> {
    set.accepted
        .iter()
        .map(|a| {
            Ok(Record::new()
                .with("label", a.label.as_str())
                .with("formula", a.formula.to_string())
                .with("probability", rational(&base.model().probability(&a.formula)?))
                .with("justified_by", rational(&a.probability))
                .into())
        })
        .collect::<Result<Vec<Value>, CliError>>()
        .map(Value::Array)
}

/// Subset diagnostics of `statements` against the background. Enumeration
/// is skipped (fields left `none`) when there are more statements than the
/// cap, unless `require` is set, in which case that is an error.
fn diagnostics(
    base: &BeliefBase,
    statements: &FormulaSet,
    globals: &Globals,
    require: bool,
) -> Result<Record, CliError> {
    let all = base.background().union(statements);
    let mut record = Record::new()
        .with("weakly_consistent", is_satisfiable(&all))
        .with("strong_inconsistency", has_strong_inconsistency(&all));
    let cap = globals.max_candidates;
    if statements.len() > cap && !require {
        return Ok(record
            .with("mus_min_size", Value::Null)
            .with("mus_count", Value::Null)
            .with("mcs_count", Value::Null)
            .with("degree", Value::Null)
            .with(
                "enumeration",
                format!("skipped: {} statements exceed --max-candidates {cap}", statements.len()),
            ));
    }
    let families = logic::subset_families(statements, base.background(), cap)?;
    let degree = match degree_of_inconsistency(statements, base.background(), cap) {
        Ok(d) => Value::from(d),
        Err(Error::InconsistentCandidate(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    record
        .put("mus_min_size", optional(families.smallest_core()))
        .put("mus_count", families.unsat_cores.len())
        .put("mcs_count", families.maximal_consistent.len())
        .put("degree", degree)
        .put("enumeration", "complete");
    Ok(record)
}

pub fn accept(
    input: &Input,
    policy: AcceptPolicy,
    epsilon: &Rational,
    order: Option<&Order>,
    globals: &Globals,
) -> Result<Report, CliError> {
    let base = &input.base;
    let level = globals.level(epsilon)?;
    let order = match (policy.is_ordered(), order) {
        (true, Some(order)) => Some(order.labels(base)),
        (true, None) => return Err(CliError::Usage("this policy needs --order".into())),
        (false, Some(_)) => {
            return Err(CliError::Usage("--order applies only to sequential and teng".into()))
        }
        (false, None) => None,
    };
    let set = match (policy, &order) {
        (AcceptPolicy::Threshold, _) => threshold_accept(base, &level)?,
        (AcceptPolicy::Lehrer, _) => lehrer_accept(base, &level)?,
        (AcceptPolicy::Cascade, _) => lehrer_cascade(base, &level)?,
        (AcceptPolicy::Sequential, Some(order)) => sequential_accept(base, order, &level)?,
        (AcceptPolicy::Teng, Some(order)) => teng_accept(base, order, &level)?,
        _ => unreachable!("order checked above"),
    };
    let policy_name = match policy {
        AcceptPolicy::Cascade => "lehrer-cascade",
        _ => set.policy.as_str(),
    };
    let mut report = Report::new("accept");
    report
        .put("policy", policy_name)
        .put("epsilon", rational(level.epsilon()))
        .put("level", rational(&level.threshold()))
        .put("order", optional(order.as_ref().map(|o| labels_value(o.iter().map(String::as_str)))))
        .put("candidate_count", base.candidates().len())
        .put("accepted_count", set.accepted.len())
        .put("accepted", accepted_records(base, &set)?)
        .put("diagnostics", diagnostics(base, &set.accepted_formulas(), globals, false)?)
        .put("provenance", globals.provenance(Some(&input.digest)));
    Ok(report)
}

pub fn extensions(
    input: &Input,
    policy: OrderedPolicy,
    epsilon: &Rational,
    max_permutations: usize,
    globals: &Globals,
) -> Result<Report, CliError> {
    let base = &input.base;
    let level = globals.level(epsilon)?;
    let ext = enumerate_extensions(base, policy, &level, max_permutations, globals.seed)?;
    let in_extension = |set: &AcceptedSet, label: &str| set.accepted.iter().any(|a| a.label == label);
    let union: Vec<&str> = base
        .labels()
        .iter()
        .map(String::as_str)
        .filter(|l| ext.extensions.iter().any(|e| in_extension(e, l)))
        .collect();
    let common: Vec<&str> = base
        .labels()
        .iter()
        .map(String::as_str)
        .filter(|l| ext.extensions.iter().all(|e| in_extension(e, l)))
        .collect();
    let listed: Vec<Value> = ext
        .extensions
        .iter()
        .map(|e| {
            Record::new()
                .with("labels", labels_value(e.order()))
                .with("weakly_consistent", e.weakly_consistent)
                .into()
        })
        .collect();
    let mut report = Report::new("extensions");
    report
        .put("policy", ext.policy.as_str())
        .put("epsilon", rational(level.epsilon()))
        .put("level", rational(&level.threshold()))
        .put("permutations_run", ext.permutations_run)
        .put("exhaustive", ext.exhaustive)
        .put("extension_count", ext.extensions.len())
        .put("extensions", listed)
        .put(
            "conjunctive",
            Record::new()
                .with("labels", labels_value(union))
                .with("consistent", ext.conjunctive_consistent),
        )
        .put(
            "disjunctive",
            Record::new()
                .with("labels", labels_value(common))
                .with("statements", formulas(ext.disjunctive.iter())),
        )
        .put("provenance", globals.provenance(Some(&input.digest)));
    Ok(report)
}

pub fn diagnose(input: &Input, epsilon: &Rational, globals: &Globals) -> Result<Report, CliError> {
    let base = &input.base;
    let level = globals.level(epsilon)?;
    let set = threshold_accept(base, &level)?;
    let accepted = set.accepted_formulas();
    let diag = diagnostics(base, &accepted, globals, true)?;
    let bound = contradiction_bound(&level);
    let respected = match diag.get("mus_min_size") {
        Some(Value::Number(n)) => Value::Bool(n.as_u64().is_some_and(|m| bound <= m.into())),
        _ => Value::Null,
    };
    let mut report = Report::new("diagnose");
    report
        .put("epsilon", rational(level.epsilon()))
        .put("level", rational(&level.threshold()))
        .put("candidate_count", base.candidates().len())
        .put("accepted_count", accepted.len())
        .put("accepted_labels", labels_value(set.order()))
        .put("diagnostics", diag)
        .put("contradiction_bound", bound.to_string())
        .put("contradiction_bound_respected", respected)
        .put("provenance", globals.provenance(Some(&input.digest)));
    Ok(report)
}

pub fn closure(
    input: &Input,
    epsilon: &Rational,
    premises: &[String],
    conclusion: Option<&str>,
    globals: &Globals,
) -> Result<Report, CliError> {
    let base = &input.base;
    let level = globals.level(epsilon)?;
    let mut set = FormulaSet::new();
    for label in premises {
        let i = base
            .index_of(label)
            .ok_or_else(|| CliError::Usage(format!("no candidate labelled `{label}`")))?;
        set.insert(base.candidate(i).clone());
    }
    let leveled = match conclusion {
        None => conjunction_support(base.model(), &set, &level)?,
        Some(text) => {
            let conclusion = parse(text)?;
            if set.is_empty() {
                return Err(CliError::Usage("a conclusion needs at least one premise".into()));
            }
            consequence_level(base.model(), base.background(), &set, &conclusion, &level)?
        }
    };
    let mut report = Report::new("closure");
    report
        .put("epsilon", rational(level.epsilon()))
        .put("level", rational(&level.threshold()))
        .put("premises", labels_value(premises.iter().map(String::as_str)))
        .put("premise_count", leveled.premise_count)
        .put("statement", leveled.statement.to_string())
        .put("support_lower_bound", rational(&leveled.support_lower_bound))
        .put("exact_probability", optional(leveled.exact_probability.as_ref().map(rational)))
        .put("contradiction_bound", contradiction_bound(&level).to_string())
        .put("provenance", globals.provenance(Some(&input.digest)));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LotteryKind {
    Fair { n: usize },
    Biased { weights: Vec<Rational> },
    Independent { n: usize, p: Rational },
}

/// The generated belief base in the file format.
pub fn lottery(kind: &LotteryKind) -> Result<String, CliError> {
    let (base, comment) = match kind {
        LotteryKind::Fair { n } => (fair_lottery(*n)?, format!("fair lottery, {n} tickets")),
        LotteryKind::Biased { weights } => {
            let listed: Vec<String> = weights.iter().map(Rational::to_string).collect();
            (biased_lottery(weights)?, format!("biased lottery, weights {}", listed.join(",")))
        }
        LotteryKind::Independent { n, p } => (
            independent_lottery(*n, p)?,
            format!("independent lottery, {n} tickets, each winning with probability {p}"),
        ),
    };
    Ok(write_base(&base, Some(&comment)))
}

/// Summary printed when a generated lottery goes to a file.
pub fn lottery_written(path: &Path, text: &str, globals: &Globals) -> Result<Report, CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })?;
    let base = parse_base(text)?;
    let digest = format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())));
    let mut report = Report::new("lottery");
    report
        .put("path", path.display().to_string())
        .put("atom_count", base.model().atoms().len())
        .put("world_count", base.model().worlds().len())
        .put("candidate_count", base.candidates().len())
        .put("provenance", globals.provenance(Some(&digest)));
    Ok(report)
}

const REFERENCE_CLASS_NOTE: &str = "the support holds for the event that a sample falls in the \
    rejection region; whether that is the right reference class for this sample is not checked";

pub fn stat_binom(
    spec: &BinomialTestSpec,
    observed: i64,
    globals: &Globals,
) -> Result<Report, CliError> {
    let region = binomial_rejection_region(spec);
    let outcome = run_test(&region, observed)?;
    let accepted = match outcome {
        TestOutcome::Reject => {
            let a = rejection_to_acceptance(spec, &region, outcome)?;
            Record::new()
                .with("statement", a.statement.as_str())
                .with("formula", a.formula.to_string())
                .with("directional", a.directional)
                .with("support_lower_bound", rational(a.support.lower()))
                .into()
        }
        TestOutcome::FailToReject => Value::Null,
    };
    let mut report = Report::new("stat binom");
    report
        .put("hypothesis", format!("{}: p = {}", spec.hypothesis(), spec.p0()))
        .put("n", spec.n())
        .put("p0", rational(spec.p0()))
        .put("epsilon", rational(spec.epsilon()))
        .put("sided", spec.sidedness().as_str())
        .put(
            "region",
            Record::new()
                .with("lower_cutoff", optional(region.lower_cutoff()))
                .with("upper_cutoff", optional(region.upper_cutoff()))
                .with("rejected_count", region.rejected_counts().len())
                .with("achieved_size", rational(region.achieved_size())),
        )
        .put("observed", observed)
        .put(
            "outcome",
            match outcome {
                TestOutcome::Reject => "reject",
                TestOutcome::FailToReject => "fail-to-reject",
            },
        )
        .put("accepted", accepted)
        .put(
            "note",
            match outcome {
                TestOutcome::Reject => REFERENCE_CLASS_NOTE,
                TestOutcome::FailToReject => "failing to reject licenses no acceptance",
            },
        )
        .put("provenance", globals.provenance(None));
    Ok(report)
}

/// Combines rejections at the given levels, each of hypothesis `H<i>`.
pub fn stat_combine(epsilons: &[Rational], globals: &Globals) -> Result<Report, CliError> {
    let mut rejections = Vec::with_capacity(epsilons.len());
    for (i, eps) in epsilons.iter().enumerate() {
        if *eps <= int(0) || *eps > int(1) {
            return Err(Error::InvalidTest(format!("epsilon {eps} outside (0, 1]")).into());
        }
        let name = format!("H{}", i + 1);
        rejections.push(AcceptedRejection {
            statement: format!("¬{name}"),
            formula: parse(&format!("~{name}"))?,
            directional: false,
            alternative: None,
            support: ProbabilityBound::new(int(1) - eps, int(1))?,
            epsilon: eps.clone(),
            achieved_size: eps.clone(),
        });
    }
    let dependent = combine_tests(&rejections, false)?;
    let independent = combine_tests(&rejections, true)?;
    let mut report = Report::new("stat combine");
    report
        .put("epsilons", formulas(epsilons.iter()))
        .put("statement", dependent.statement.to_string())
        .put("test_count", dependent.premise_count)
        .put("dependent_bound", rational(&dependent.support_lower_bound))
        .put("independent_bound", rational(&independent.support_lower_bound))
        .put("provenance", globals.provenance(None));
    Ok(report)
}
