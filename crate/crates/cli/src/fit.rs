use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{CliError, CliResult};

/// Least-squares fit of `ln(value) = a' + b·d`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub a_prime: f64,
    pub b: f64,
}

pub fn fit_decay(points: &[(usize, f64)]) -> CliResult<DecayFit> {
    let mut ds: Vec<usize> = points.iter().map(|p| p.0).collect();
    ds.sort_unstable();
    ds.dedup();
    if ds.len() < 3 {
        return Err(CliError::InsufficientData(ds.len()));
    }
    if let Some(&(d, value)) = points.iter().find(|p| p.1.is_nan() || p.1 <= 0.0) {
        return Err(CliError::NonpositiveValues { d, value });
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0 as f64).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let sxy: f64 = points
        .iter()
        .map(|p| (p.0 as f64 - mx) * (p.1.ln() - my))
        .sum();
    let sxx: f64 = points.iter().map(|p| (p.0 as f64 - mx).powi(2)).sum();
    let b = sxy / sxx;
    Ok(DecayFit {
        a_prime: my - b * mx,
        b,
    })
}

/// Fits every `(bound, kind, q)` group of a sweep CSV and prints one line each.
pub fn run(csv_path: &Path) -> CliResult<()> {
    let mut rd = csv::Reader::from_path(csv_path)?;
    let headers = rd.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Usage(format!("missing column `{name}`")))
    };
    let (cd, cq, ck, cb, cv) = (
        col("d")?,
        col("q")?,
        col("kind")?,
        col("bound")?,
        col("value")?,
    );
    let mut groups: BTreeMap<(String, String, String), Vec<(usize, f64)>> = BTreeMap::new();
    for rec in rd.records() {
        let rec = rec?;
        let parse_err = |f: &str| CliError::Usage(format!("unparsable field `{f}`"));
        let d: usize = rec[cd].parse().map_err(|_| parse_err(&rec[cd]))?;
        let v: f64 = rec[cv].parse().map_err(|_| parse_err(&rec[cv]))?;
        groups
            .entry((
                rec[cb].to_string(),
                rec[ck].to_string(),
                rec[cq].to_string(),
            ))
            .or_default()
            .push((d, v));
    }
    if groups.is_empty() {
        return Err(CliError::InsufficientData(0));
    }
    println!("bound,kind,q,a_prime,b,slope");
    for ((bound, kind, q), pts) in groups {
        let f = fit_decay(&pts)?;
        let slope = if f.b < 0.0 {
            "negative"
        } else if f.b > 0.0 {
            "positive"
        } else {
            "zero"
        };
        println!(
            "{bound},{kind},{q},{},{},{slope}",
            crate::sweep::format_sig(f.a_prime),
            crate::sweep::format_sig(f.b)
        );
    }
    Ok(())
}
