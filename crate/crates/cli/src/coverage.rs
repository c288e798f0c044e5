use serde::Serialize;

use pbci::coverage::{coverage_at, validate_region, ThreePointConfig, VIOLATION_TOL};
use pbci::distributions::PVector;
use pbci::document::RegionDocument;
use pbci::ConfidenceRegion;

use crate::args::CoverageArgs;
use crate::interval::build;
use crate::{CliError, Outcome};

#[derive(Serialize)]
struct AuditOutput {
    n: usize,
    beta: f64,
    kind: String,
    effective_level: f64,
    violated: bool,
    mean: f64,
    witness: ThreePointConfig,
    witness_vector: Vec<f64>,
    grid_resolution: Option<f64>,
    grid_endpoints: usize,
    grid_points: usize,
}

#[derive(Serialize)]
struct PointOutput {
    n: usize,
    beta: f64,
    kind: String,
    p: Vec<f64>,
    mean: f64,
    coverage: f64,
    violated: bool,
}

fn load(args: &CoverageArgs) -> Result<ConfidenceRegion, CliError> {
    if let Some(path) = &args.region {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        return Ok(RegionDocument::from_json(&text)?.to_region()?);
    }
    let kind = args
        .kind
        .ok_or_else(|| CliError::Usage("give --kind or --region".into()))?;
    let n = match (args.n, &args.p) {
        (Some(n), _) => n,
        (None, Some(p)) => p.len(),
        (None, None) => return Err(CliError::Usage("--kind needs --n".into())),
    };
    let beta = args
        .beta
        .ok_or_else(|| CliError::Usage("--kind needs --beta".into()))?;
    build(kind, n, beta)
}

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Numeric(e.to_string()))?;
    println!("{text}");
    Ok(())
}

pub fn run(args: &CoverageArgs) -> Result<Outcome, CliError> {
    let region = load(args)?;
    let beta = args.beta.unwrap_or(region.beta());

    if let Some(p) = &args.p {
        let pv = PVector::new(p.clone())?;
        let coverage = coverage_at(&region, &pv)?;
        let violated = coverage < beta - VIOLATION_TOL;
        print_json(&PointOutput {
            n: region.n(),
            beta,
            kind: region.kind().to_string(),
            p: p.clone(),
            mean: pv.mean(),
            coverage,
            violated,
        })?;
        return Ok(if violated {
            Outcome::Violation
        } else {
            Outcome::Ok
        });
    }

    let report = validate_region(&region, beta, args.grid)?;
    print_json(&AuditOutput {
        n: region.n(),
        beta,
        kind: region.kind().to_string(),
        effective_level: report.min_coverage,
        violated: report.violated,
        mean: report.mean,
        witness: report.witness,
        witness_vector: report.witness.to_pvector()?.as_slice().to_vec(),
        grid_resolution: report.grid.resolution,
        grid_endpoints: report.grid.endpoints,
        grid_points: report.grid.points,
    })?;
    Ok(if report.violated {
        Outcome::Violation
    } else {
        Outcome::Ok
    })
}
