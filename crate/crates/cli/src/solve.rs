//! `solve`, `audit` and `export-milp`: single-instance commands.

use std::path::Path;
use std::time::Instant;

use fair_alloc::algorithms::{Algorithm, AllocationResult, Status};
use fair_alloc::fairness::{audit, eq1_exists, Eq1Existence, FairnessVerdict};
use fair_alloc::instance::{is_feasible_allocation, Violation};
use fair_alloc::io::{allocation_json, read_allocation};
use fair_alloc::metrics::{evaluate, write_report, ReportRow};
use fair_alloc::milp::{build_nashmax_model, lp_string, read_solution, scale_utilities};
use fair_alloc::{Allocation, CardinalityBounds};
use serde::Serialize;

use crate::error::{CliError, CliResult};
use crate::source::Loaded;
use crate::{create_dir, dedup, emit, write_text, AuditArgs, ExportArgs, SolveArgs};

/// One algorithm run on one instance.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub algorithm: Algorithm,
    pub result: AllocationResult,
    pub row: ReportRow,
}

pub fn solve_one(
    loaded: &Loaded,
    bounds: &CardinalityBounds,
    algorithm: Algorithm,
    oracle_budget: u64,
    timing: bool,
) -> SolveOutcome {
    let start = Instant::now();
    let result = algorithm.run(&loaded.instance, bounds, oracle_budget);
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let row = ReportRow {
        instance_id: loaded.id.clone(),
        algorithm: algorithm.name().to_string(),
        metrics: evaluate(&loaded.instance, &result.allocation, bounds),
        runtime_ms: timing.then_some(elapsed),
        seed: loaded.seed,
    };
    SolveOutcome { algorithm, result, row }
}

fn report_csv(rows: &[ReportRow]) -> CliResult<String> {
    let mut buf = Vec::new();
    write_report(&mut buf, rows)?;
    Ok(String::from_utf8(buf).expect("report is UTF-8"))
}

fn trace_text(result: &AllocationResult) -> String {
    format!("phase,reseller,product,utility_after\n{}", result.trace_lines())
}

/// The most severe failure among the runs, if any.
fn worst_status(outcomes: &[SolveOutcome]) -> Option<Status> {
    let statuses: Vec<Status> = outcomes.iter().map(|o| o.result.status).collect();
    [Status::InfeasibleInput, Status::RepairIncomplete].into_iter().find(|s| statuses.contains(s))
}

pub fn cmd_solve(args: &SolveArgs) -> CliResult<()> {
    let loaded = args.source.load(args.seed)?;
    let bounds = args.bounds.one_for(&loaded)?;
    let outcomes: Vec<SolveOutcome> = dedup(&args.algo)
        .into_iter()
        .map(|a| solve_one(&loaded, &bounds, a, args.oracle_budget, args.timing))
        .collect();
    let rows: Vec<ReportRow> = outcomes.iter().map(|o| o.row.clone()).collect();
    let report = report_csv(&rows)?;

    match &args.out {
        Some(dir) => {
            create_dir(dir)?;
            let stem = loaded.file_stem();
            for o in &outcomes {
                let name = o.algorithm.name();
                write_text(
                    &dir.join(format!("{stem}.{name}.allocation.json")),
                    &allocation_json(&o.result.allocation),
                )?;
                if args.trace {
                    write_text(&dir.join(format!("{stem}.{name}.trace.txt")), &trace_text(&o.result))?;
                }
            }
            write_text(&dir.join(format!("{stem}.report.csv")), &report)?;
        }
        None => {
            if let [only] = &outcomes[..] {
                emit(&format!("{}\n{report}", allocation_json(&only.result.allocation)))?;
            } else {
                emit(&report)?;
            }
            if args.trace {
                for o in &outcomes {
                    eprint!("# {}\n{}", o.algorithm, trace_text(&o.result));
                }
            }
        }
    }
    match worst_status(&outcomes) {
        Some(status) => Err(CliError::Status(status)),
        None => Ok(()),
    }
}

#[derive(Debug, Serialize)]
pub struct FeasibilityDoc {
    pub feasible: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Serialize)]
pub struct Eq1SearchDoc {
    /// `exists`, `not-exists` or `budget-exhausted`.
    pub outcome: &'static str,
    pub witness: Option<Vec<Vec<usize>>>,
    pub nodes_expanded: u64,
}

#[derive(Debug, Serialize)]
pub struct AllocationAudit {
    pub allocation: Vec<Vec<usize>>,
    /// Present when bounds are known.
    pub feasibility: Option<FeasibilityDoc>,
    pub utilities: Vec<f64>,
    pub ef1: FairnessVerdict,
    pub eq1: FairnessVerdict,
}

/// Machine-readable verdicts for one instance.
#[derive(Debug, Serialize)]
pub struct AuditDocument {
    pub instance_id: String,
    pub bounds: Option<CardinalityBounds>,
    pub audit: Option<AllocationAudit>,
    pub eq1_search: Option<Eq1SearchDoc>,
}

pub fn audit_allocation(loaded: &Loaded, bounds: Option<&CardinalityBounds>, alloc: &Allocation) -> AllocationAudit {
    let verdicts = audit(&loaded.instance, alloc);
    AllocationAudit {
        allocation: alloc.to_vecs(),
        feasibility: bounds.map(|b| {
            let v = is_feasible_allocation(&loaded.instance, alloc, b);
            FeasibilityDoc { feasible: v.is_feasible(), violations: v.violations }
        }),
        utilities: verdicts.utilities,
        ef1: verdicts.ef1,
        eq1: verdicts.eq1,
    }
}

pub fn eq1_search_doc(loaded: &Loaded, bounds: &CardinalityBounds, budget: u64) -> Eq1SearchDoc {
    let search = eq1_exists(&loaded.instance, bounds, budget);
    let (outcome, witness) = match search.outcome {
        Eq1Existence::Exists(a) => ("exists", Some(a.to_vecs())),
        Eq1Existence::NotExists => ("not-exists", None),
        Eq1Existence::BudgetExhausted => ("budget-exhausted", None),
    };
    Eq1SearchDoc { outcome, witness, nodes_expanded: search.nodes_expanded }
}

fn load_allocation(path: &Path, loaded: &Loaded) -> CliResult<Allocation> {
    let alloc = read_allocation(path, loaded.instance.products()).map_err(|e| match e {
        fair_alloc::Error::Io { .. } => CliError::Core(e),
        other => CliError::Parse(other),
    })?;
    if alloc.len() != loaded.instance.resellers() {
        return Err(CliError::Parse(fair_alloc::Error::Dimension(format!(
            "{}: {} bundles for {} re-sellers",
            path.display(),
            alloc.len(),
            loaded.instance.resellers()
        ))));
    }
    Ok(alloc)
}

pub fn cmd_audit(args: &AuditArgs) -> CliResult<()> {
    let loaded = args.source.load(args.seed)?;
    let needs_bounds = args.algo.is_some() || args.solution.is_some() || args.eq1_search;
    let bounds = if needs_bounds || args.bounds.bounds.is_some() || args.bounds.grid.is_some() {
        Some(args.bounds.one_for(&loaded)?)
    } else {
        loaded.bounds
    };
    let alloc = match (&args.allocation, args.algo) {
        (Some(path), _) => Some(load_allocation(path, &loaded)?),
        (None, _) if args.solution.is_some() => {
            let b = bounds.expect("bounds resolved for --solution");
            let model = build_nashmax_model(&scale_utilities(&loaded.instance)?, &b);
            let path = args.solution.as_deref().expect("checked above");
            Some(read_solution(path, &model).map_err(|e| match e {
                fair_alloc::Error::Io { .. } => CliError::Core(e),
                other => CliError::Parse(other),
            })?)
        }
        (None, Some(algo)) => {
            let b = bounds.expect("bounds resolved for --algo");
            let result = algo.run(&loaded.instance, &b, args.oracle_budget);
            if !result.is_success() {
                return Err(CliError::Status(result.status));
            }
            Some(result.allocation)
        }
        (None, None) if args.eq1_search => None,
        (None, None) => {
            return Err(CliError::Usage("audit needs --allocation, --solution, --algo or --eq1-search".into()));
        }
    };
    let doc = AuditDocument {
        instance_id: loaded.id.clone(),
        bounds,
        audit: alloc.as_ref().map(|a| audit_allocation(&loaded, bounds.as_ref(), a)),
        eq1_search: args
            .eq1_search
            .then(|| eq1_search_doc(&loaded, &bounds.expect("bounds resolved for --eq1-search"), args.oracle_budget)),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("audit documents serialise");
    text.push('\n');
    match &args.out {
        Some(dir) => {
            create_dir(dir)?;
            write_text(&dir.join(format!("{}.audit.json", loaded.file_stem())), &text)
        }
        None => emit(&text),
    }
}

pub fn cmd_export_milp(args: &ExportArgs) -> CliResult<()> {
    let loaded = args.source.load(args.seed)?;
    let bounds = args.bounds.one_for(&loaded)?;
    let model = build_nashmax_model(&scale_utilities(&loaded.instance)?, &bounds);
    let text = lp_string(&model);
    match &args.out {
        Some(dir) => {
            create_dir(dir)?;
            write_text(&dir.join(format!("{}.lp", loaded.file_stem())), &text)
        }
        None => emit(&text),
    }
}
