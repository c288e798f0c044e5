use std::fmt::Write;

use pbci::document::RegionDocument;
use pbci::intervals::{
    agnew_upray, optimal_downray, optimal_upray, sterne_interval, two_sided_cp, two_sided_optimal,
};
use pbci::inverse::{cp_downray, cp_upray};
use pbci::ConfidenceRegion;

use crate::args::{Format, IntervalArgs, Kind};
use crate::{CliError, Outcome};

pub fn build(kind: Kind, n: usize, beta: f64) -> Result<ConfidenceRegion, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    let region = match kind {
        Kind::OptimalLower => optimal_upray(n, beta)?.region,
        Kind::OptimalUpper => optimal_downray(n, beta)?,
        Kind::CpLower => cp_upray(n, beta)?,
        Kind::CpUpper => cp_downray(n, beta)?,
        Kind::TwoSidedCp => two_sided_cp(n, beta)?,
        Kind::TwoSidedOptimal => two_sided_optimal(n, beta)?,
        Kind::Agnew => agnew_upray(n, beta)?,
        Kind::Sterne => sterne_interval(n, beta)?,
    };
    Ok(region)
}

/// One row per `x`; endpoints in shortest round-trip form.
pub fn table(region: &ConfidenceRegion) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# n = {}, beta = {}, kind = {}",
        region.n(),
        region.beta(),
        region.kind()
    );
    let _ = writeln!(out, "x\tregion");
    for (x, v) in region.values().iter().enumerate() {
        let _ = writeln!(out, "{x}\t{v}");
    }
    out
}

pub fn run(args: &IntervalArgs) -> Result<Outcome, CliError> {
    let region = build(args.kind, args.n, args.beta)?;
    match args.format {
        Format::Table => print!("{}", table(&region)),
        Format::Json => println!("{}", RegionDocument::from_region(&region).to_json()),
    }
    Ok(Outcome::Ok)
}
