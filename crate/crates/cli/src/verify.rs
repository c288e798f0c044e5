use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use pbci::coverage::{
    cp_hypergeom_coverage_exact, effective_level, hypergeom_coverage, remark8_counterexample,
    validate_region,
};
use pbci::distributions::{beta_threshold, HypergeomParams};
use pbci::intervals::{kstar_example, optimal_lower_endpoint, sterne_interval, two_sided_cp};
use pbci::inverse::{cp_upray, g_inverse};
use pbci::IntervalSet;

use crate::args::{Check, VerifyArgs};
use crate::{CliError, Outcome};

struct Line {
    check: &'static str,
    what: String,
    pass: bool,
}

impl Line {
    fn new(check: &'static str, what: String, pass: bool) -> Self {
        Self { check, what, pass }
    }
}

type Lines = Result<Vec<Line>, CliError>;

/// Effective level of the CP upray equals `γ_n = 1 - n(1 - β^{1/n})`.
fn r3(grid: f64) -> Lines {
    let beta: f64 = 0.9;
    let mut out = Vec::new();
    for n in 2..=10 {
        let gamma = 1.0 - n as f64 * (1.0 - beta.powf(1.0 / n as f64));
        let level = effective_level(&cp_upray(n, beta)?, grid)?.min_coverage;
        let pass = (level - gamma).abs() <= 1e-6 && gamma > 1.0 + beta.ln() && gamma < beta;
        out.push(Line::new(
            "r3",
            format!("n = {n}: expected γ_n = {gamma:.12}, computed {level:.12}"),
            pass,
        ));
    }
    Ok(out)
}

/// At `β = β_n - 0.001`, `g(2) = g_n(2)` up to `n = 123` and `g(2) < g_n(2)` from 124.
fn r4(full: bool) -> Lines {
    let ns: Vec<usize> = if full {
        (2..=3000).collect()
    } else {
        vec![123, 124]
    };
    let rows: Vec<Result<(usize, f64), CliError>> = ns
        .par_iter()
        .map(|&n| {
            let beta = beta_threshold(n)? - 0.001;
            let (g, _) = optimal_lower_endpoint(n, 2, beta)?;
            Ok((n, g_inverse(n, 2, beta)? - g))
        })
        .collect();
    let mut bad = Vec::new();
    let mut shown = Vec::new();
    for row in rows {
        let (n, gap) = row?;
        let pass = if n <= 123 {
            gap.abs() <= 1e-11
        } else {
            gap > 1e-13
        };
        if !pass {
            bad.push(n);
        }
        if !full || n == 123 || n == 124 || n == 3000 {
            let expect = if n <= 123 {
                "g(2) = g_n(2)"
            } else {
                "g(2) < g_n(2)"
            };
            shown.push(Line::new(
                "r4",
                format!("n = {n}: expected {expect}, g_n(2) - g(2) = {gap:e}"),
                pass,
            ));
        }
    }
    if full {
        shown.push(Line::new(
            "r4",
            format!("sweep n = 2..=3000: {} disagreements {:?}", bad.len(), bad),
            bad.is_empty(),
        ));
    }
    Ok(shown)
}

/// `K*` keeps level `β` while `K*(0) ⊊ [0, 1]`.
fn r6(grid: f64) -> Lines {
    let beta = 0.9;
    let mut out = Vec::new();
    for n in 1..=5 {
        let k = kstar_example(n, beta)?;
        let report = validate_region(&k, beta, grid)?;
        let shrunk = k.value(0).is_proper_subset(&IntervalSet::unit());
        out.push(Line::new(
            "r6",
            format!(
                "n = {n}: K*(0) = {}, expected level >= {beta}, computed {:.12}",
                k.value(0),
                report.min_coverage
            ),
            shrunk && !report.violated,
        ));
    }
    Ok(out)
}

/// The one-sided CP test exceeds its size at `p = (r - ε, r + ε)`.
fn r8() -> Lines {
    let mut out = Vec::new();
    for &(beta, eps) in &[(0.9, 0.01), (0.75, 0.05)] {
        let o = remark8_counterexample(beta, eps)?;
        let expected = 1.0 - beta + eps * eps;
        out.push(Line::new(
            "r8",
            format!(
                "β = {beta}, ε = {eps}: expected size 1 - β + ε² = {expected:.15}, computed {:.15} > {}",
                o.attained, o.level_bound
            ),
            (o.attained - expected).abs() <= 1e-14 && o.attained > o.level_bound,
        ));
    }
    Ok(out)
}

/// Hypergeometric sampling breaks the CP upray: N = 10, n = 3, p = 0.1.
fn r9() -> Lines {
    let params = HypergeomParams::new(10, 3, 1)?;
    let beta = BigRational::new(BigInt::from(729), BigInt::from(1000));
    let exact = cp_hypergeom_coverage_exact(params, &beta)?;
    let want = BigRational::new(BigInt::from(7), BigInt::from(10));
    let float = hypergeom_coverage(&cp_upray(3, 0.729)?, params)?;
    Ok(vec![
        Line::new(
            "r9",
            format!("exact coverage: expected 84/120 = 7/10 < 729/1000, computed {exact}"),
            exact == want && exact < beta,
        ),
        Line::new(
            "r9",
            format!("floating-point coverage {float} (p = 0.1 sits on the endpoint g_3(1) = 0.1)"),
            true,
        ),
    ])
}

/// Closed forms of the Sterne region at n = 2 and its invalidity.
fn sterne(grid: f64) -> Lines {
    let beta: f64 = 0.9;
    let k = sterne_interval(2, beta)?;
    let g1 = g_inverse(2, 1, beta)?;
    let g2 = g_inverse(2, 2, beta)?;
    let expected = [
        (0.0, true, 1.0 - g2, false),
        (g1, false, 1.0 - g1, false),
        (g2, false, 1.0, true),
    ];
    let mut out = Vec::new();
    for (x, &(a, ac, b, bc)) in expected.iter().enumerate() {
        let v = k.value(x);
        let pass = v.parts().len() == 1 && {
            let iv = v.parts()[0];
            (iv.lower().value() - a).abs() <= 1e-8
                && (iv.upper().value() - b).abs() <= 1e-8
                && iv.lower().is_closed() == ac
                && iv.upper().is_closed() == bc
        };
        out.push(Line::new(
            "sterne",
            format!("K_S(x = {x}): computed {v}"),
            pass,
        ));
    }
    let r = validate_region(&k, beta, grid)?;
    out.push(Line::new(
        "sterne",
        format!(
            "validity: expected coverage < {} near mean g_2(1) = {g1:.10}, computed {:.10} at mean {:.10}",
            beta - 1e-6,
            r.min_coverage,
            r.mean
        ),
        r.violated && r.min_coverage < beta - 1e-6 && (r.mean - g1).abs() < 1e-6,
    ));
    Ok(out)
}

/// Two-sided CP regions keep their level for the chain model.
fn thm3(grid: f64) -> Lines {
    let mut out = Vec::new();
    for &beta in &[0.8, 0.9, 0.95] {
        let mut worst = (f64::INFINITY, 0);
        let mut ok = true;
        for n in 1..=10 {
            let r = validate_region(&two_sided_cp(n, beta)?, beta, grid)?;
            ok &= !r.violated;
            if r.min_coverage < worst.0 {
                worst = (r.min_coverage, n);
            }
        }
        out.push(Line::new(
            "thm3",
            format!(
                "β = {beta}, n = 1..=10: expected level >= {beta}, lowest {:.12} at n = {}",
                worst.0, worst.1
            ),
            ok,
        ));
    }
    Ok(out)
}

pub fn run(args: &VerifyArgs) -> Result<Outcome, CliError> {
    if !(args.grid > 0.0 && args.grid <= 1.0) {
        return Err(CliError::Usage(format!(
            "grid resolution {} is not in ]0, 1]",
            args.grid
        )));
    }
    let checks: Vec<Check> = match args.check {
        Check::All => vec![
            Check::R3,
            Check::R4,
            Check::R6,
            Check::R8,
            Check::R9,
            Check::Sterne,
            Check::Thm3,
        ],
        c => vec![c],
    };
    let mut all_pass = true;
    for c in checks {
        let lines = match c {
            Check::R3 => r3(args.grid)?,
            Check::R4 => r4(args.full)?,
            Check::R6 => r6(args.grid)?,
            Check::R8 => r8()?,
            Check::R9 => r9()?,
            Check::Sterne => sterne(args.grid)?,
            Check::Thm3 => thm3(args.grid)?,
            Check::All => unreachable!(),
        };
        for l in lines {
            all_pass &= l.pass;
            println!(
                "{} {}: {}",
                if l.pass { "PASS" } else { "FAIL" },
                l.check,
                l.what
            );
        }
    }
    Ok(if all_pass {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}
