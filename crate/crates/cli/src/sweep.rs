use std::io::Write;
use std::path::Path;

use locent::codes::{
    assign_controls_geometric, build_square_hexagonal, bulk_pair, convert_logical_plus,
    witness_plaquette_paths, ColorCodeLattice,
};
use locent::le::{alc_samples, direct_link_samples, wlb};
use locent::noise::{standard_channel, NoiseKind};
use locent::stab::GraphConversionResult;
use rayon::prelude::*;

use crate::commands::zero_based;
use crate::error::{CliError, CliResult};
use crate::{Bound, StrategyArg};

pub const HEADER: [&str; 11] = [
    "d",
    "q",
    "kind",
    "bound",
    "value",
    "n_x",
    "n_z",
    "n_min",
    "n_lc_mean",
    "n_samples",
    "seed",
];

pub struct SweepArgs {
    pub bound: Bound,
    pub distance: usize,
    /// 1-based explicit pair.
    pub pair: Option<(usize, usize)>,
    pub d_list: Vec<usize>,
    pub kind: NoiseKind,
    pub q_list: Vec<f64>,
    pub n_samples: usize,
    pub strategy: StrategyArg,
    pub seed: Option<u64>,
}

/// One CSV line; fields that do not apply to the bound stay `None`.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub d: usize,
    pub q: f64,
    pub kind: NoiseKind,
    pub bound: Bound,
    pub value: f64,
    pub n_x: Option<usize>,
    pub n_z: Option<usize>,
    pub n_min: Option<usize>,
    pub n_lc_mean: Option<f64>,
    pub n_samples: Option<usize>,
    pub seed: Option<u64>,
}

impl SweepRow {
    pub fn record(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        vec![
            self.d.to_string(),
            format_sig(self.q),
            self.kind.to_string(),
            self.bound.name().to_string(),
            format_sig(self.value),
            opt(self.n_x.map(|v| v.to_string())),
            opt(self.n_z.map(|v| v.to_string())),
            opt(self.n_min.map(|v| v.to_string())),
            opt(self.n_lc_mean.map(format_sig)),
            opt(self.n_samples.map(|v| v.to_string())),
            opt(self.seed.map(|v| v.to_string())),
        ]
    }
}

/// Shortest decimal rendering with 12 significant digits.
pub fn format_sig(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { "0".into() } else { v.to_string() };
    }
    let exp = v.abs().log10().floor() as i32;
    let trim = |s: String| {
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    };
    if (-5..12).contains(&exp) {
        let s = trim(format!("{:.*}", (11 - exp).max(0) as usize, v));
        if s == "-0" {
            "0".into()
        } else {
            s
        }
    } else {
        let s = format!("{:.11e}", v);
        let (m, e) = s.split_once('e').expect("exponent");
        format!("{}e{}", trim(m.to_string()), e)
    }
}

fn pairs(l: &ColorCodeLattice, args: &SweepArgs) -> CliResult<Vec<(usize, usize, usize)>> {
    match args.pair {
        Some((a, b)) => {
            let (a, b) = (zero_based(a)?, zero_based(b)?);
            if a.max(b) >= l.n_qubits() || a == b {
                return Err(CliError::Usage(format!(
                    "pair must hold two qubits in 1..={}",
                    l.n_qubits()
                )));
            }
            let d = l
                .lattice_distance(a, b)
                .ok_or_else(|| CliError::Usage("pair is disconnected".into()))?;
            Ok(vec![(d, a, b)])
        }
        None => {
            if args.d_list.is_empty() {
                return Err(CliError::Usage("give --d or --pair".into()));
            }
            args.d_list
                .iter()
                .map(|&d| {
                    let (a, b) = bulk_pair(l, d)?;
                    Ok((d, a, b))
                })
                .collect()
        }
    }
}

fn cell(
    l: &ColorCodeLattice,
    args: &SweepArgs,
    alc_conv: Option<&GraphConversionResult>,
    (d, a, b): (usize, usize, usize),
    q: f64,
) -> CliResult<SweepRow> {
    let m = standard_channel(args.kind, q, l.n_qubits())?;
    let mut row = SweepRow {
        d,
        q,
        kind: args.kind,
        bound: args.bound,
        value: 0.0,
        n_x: None,
        n_z: None,
        n_min: None,
        n_lc_mean: None,
        n_samples: None,
        seed: args.seed,
    };
    match args.bound {
        Bound::Wlb => {
            let w = witness_plaquette_paths(l, a, b)?;
            row.value = wlb(&w, &m)?;
            row.n_x = Some(w.n_x);
            row.n_z = Some(w.n_z);
        }
        Bound::Mlb => {
            let seed = args
                .seed
                .ok_or_else(|| CliError::Usage("--seed is required for mlb".into()))?;
            let s = match alc_conv {
                Some(conv) => alc_samples(conv, a, b, &m, args.n_samples, seed)?,
                None => direct_link_samples(a, b, &m, args.n_samples, seed, |s| {
                    let asg = assign_controls_geometric(l, Some(s), Some((a, b)))?;
                    convert_logical_plus(l, &asg.controls)
                })?,
            };
            row.value = s.best.value;
            row.n_min = Some(s.n_min);
            row.n_lc_mean = Some(s.n_lc_mean);
            row.n_samples = Some(s.n_samples);
        }
    }
    Ok(row)
}

pub fn sweep_rows(args: &SweepArgs) -> CliResult<Vec<SweepRow>> {
    if args.bound == Bound::Mlb && args.seed.is_none() {
        return Err(CliError::Usage("--seed is required for mlb".into()));
    }
    let l = build_square_hexagonal(args.distance)?;
    let pairs = pairs(&l, args)?;
    let alc_conv = match (args.bound, args.strategy) {
        (Bound::Mlb, StrategyArg::Alc) => {
            let asg = assign_controls_geometric(&l, None, None)?;
            Some(convert_logical_plus(&l, &asg.controls)?)
        }
        _ => None,
    };
    let cells: Vec<_> = pairs
        .iter()
        .flat_map(|&p| args.q_list.iter().map(move |&q| (p, q)))
        .collect();
    let mut rows = cells
        .into_par_iter()
        .map(|(p, q)| cell(&l, args, alc_conv.as_ref(), p, q))
        .collect::<CliResult<Vec<_>>>()?;
    rows.sort_by(|x, y| x.d.cmp(&y.d).then(x.q.total_cmp(&y.q)));
    Ok(rows)
}

pub fn write_rows<W: Write>(rows: &[SweepRow], w: W) -> CliResult<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(HEADER)?;
    for r in rows {
        wr.write_record(r.record())?;
    }
    wr.flush()?;
    Ok(())
}

pub fn run(args: &SweepArgs, out: Option<&Path>) -> CliResult<()> {
    let rows = sweep_rows(args)?;
    match out {
        Some(p) => write_rows(&rows, std::fs::File::create(p)?),
        None => write_rows(&rows, std::io::stdout().lock()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(0.01), "0.01");
        assert_eq!(format_sig(0.1 + 0.2), "0.3");
        assert_eq!(format_sig(2.0 / 3.0), "0.666666666667");
        assert_eq!(format_sig(123456.0), "123456");
        assert_eq!(format_sig(1.5e-7), "1.5e-7");
        assert_eq!(format_sig(0.0), "0");
    }

    #[test]
    fn wlb_rows_follow_closed_form() {
        let args = SweepArgs {
            bound: Bound::Wlb,
            distance: 12,
            pair: None,
            d_list: vec![5, 3],
            kind: NoiseKind::PF,
            q_list: vec![0.01, 0.0],
            n_samples: 1,
            strategy: StrategyArg::Alc,
            seed: None,
        };
        let rows = sweep_rows(&args).unwrap();
        assert_eq!(
            rows.iter().map(|r| (r.d, r.q)).collect::<Vec<_>>(),
            [(3, 0.0), (3, 0.01), (5, 0.0), (5, 0.01)]
        );
        for r in rows {
            let expect = (1.0 - r.q).powi(r.n_x.unwrap() as i32);
            assert!((r.value - expect).abs() < 1e-12);
        }
    }
}
