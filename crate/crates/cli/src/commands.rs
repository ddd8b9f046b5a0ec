use std::path::Path;

use locent::codes::{
    assign_controls_geometric, build_seven_qubit, build_square_hexagonal, convert_logical_plus,
};
use locent::graph::{alc_create_link, random_simple_path, Graph, GraphJson, Path as GraphPath};
use locent::stab::{
    stab_to_graph, Clifford1, ControlChoice, GraphConversionResult, StabilizerTableau, TableauJson,
};
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

/// Converts a 1-based label to an index.
pub fn zero_based(label: usize) -> CliResult<usize> {
    label
        .checked_sub(1)
        .ok_or_else(|| CliError::Usage("labels are 1-based".into()))
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

/// Writes `doc` to `out`, or to stdout when absent. Returns whether stdout is free
/// for the summary.
fn emit(doc: &Value, out: Option<&Path>) -> CliResult<bool> {
    let text = serde_json::to_string_pretty(doc)? + "\n";
    match out {
        Some(p) => {
            std::fs::write(p, text)?;
            Ok(true)
        }
        None => {
            print!("{text}");
            Ok(false)
        }
    }
}

fn summary(to_stdout: bool, lines: &[String]) {
    for l in lines {
        if to_stdout {
            println!("{l}");
        } else {
            eprintln!("{l}");
        }
    }
}

pub fn code(distance: usize, out: Option<&Path>) -> CliResult<()> {
    let l = build_square_hexagonal(distance)?;
    let free = emit(&serde_json::to_value(l.to_json())?, out)?;
    summary(
        free,
        &[format!(
            "N={} N_p={} k={}",
            l.n_qubits(),
            l.n_plaquettes(),
            l.n_logical()
        )],
    );
    Ok(())
}

/// Short name of a single-qubit Clifford: products of H and S = sqrt(Z).
pub fn clifford_label(c: Clifford1) -> &'static str {
    const NAMES: [&str; 6] = ["I", "H", "S", "HS", "SH", "HSH"];
    let idx = Clifford1::all()
        .iter()
        .position(|&x| x == c)
        .expect("six phase-free Cliffords");
    NAMES[idx]
}

fn conversion_doc(conv: &GraphConversionResult) -> CliResult<Value> {
    let g = conv.graph();
    let labels: Vec<&str> = conv
        .unitary
        .ops()
        .iter()
        .map(|&c| clifford_label(c))
        .collect();
    Ok(json!({
        "graph": serde_json::to_value(g.to_json())?,
        "controls": one_based(&conv.controls),
        "targets": one_based(&conv.targets),
        "unitary": labels,
    }))
}

pub fn stab2graph(
    tableau: Option<&Path>,
    seven_qubit: bool,
    seed: Option<u64>,
    force_pair: Option<(usize, usize)>,
    out: Option<&Path>,
) -> CliResult<()> {
    let pair = force_pair
        .map(|(a, b)| Ok::<_, CliError>((zero_based(a)?, zero_based(b)?)))
        .transpose()?;
    let conv = if seven_qubit {
        let l = build_seven_qubit();
        let asg = assign_controls_geometric(&l, seed, pair)?;
        convert_logical_plus(&l, &asg.controls)?
    } else {
        let path =
            tableau.ok_or_else(|| CliError::Usage("--tableau or --seven-qubit required".into()))?;
        let j: TableauJson = serde_json::from_str(&std::fs::read_to_string(path)?)?;
        let t = StabilizerTableau::from_json(&j)?;
        let choice = match (pair, seed) {
            (Some((control, target)), Some(seed)) => ControlChoice::ForcedPair {
                control,
                target,
                seed,
            },
            (None, Some(seed)) => ControlChoice::Seeded(seed),
            _ => ControlChoice::Greedy,
        };
        stab_to_graph(&t, &choice)?
    };
    let free = emit(&conversion_doc(&conv)?, out)?;
    let g = conv.graph();
    let mut lines = vec![
        format!("controls={:?}", one_based(&conv.controls)),
        format!("edges={}", g.edge_count()),
        format!("unitary_identity={}", conv.unitary.is_identity()),
    ];
    if let Some((a, b)) = pair {
        lines.push(format!("pair_linked={}", g.has_edge(a, b)));
    }
    summary(free, &lines);
    Ok(())
}

fn parse_path(s: &str) -> CliResult<GraphPath> {
    let nodes = s
        .split(',')
        .map(|t| {
            let v: usize = t
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad path entry `{t}`")))?;
            zero_based(v)
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(GraphPath(nodes))
}

pub fn alc(
    graph: &Path,
    a: usize,
    b: usize,
    seed: Option<u64>,
    path: Option<&str>,
    out: Option<&Path>,
) -> CliResult<()> {
    let j: Value = serde_json::from_str(&std::fs::read_to_string(graph)?)?;
    // accepts a bare graph or the output of stab2graph
    let gj: GraphJson = serde_json::from_value(j.get("graph").cloned().unwrap_or(j))?;
    let g = Graph::from_json(&gj)?;
    let (a, b) = (zero_based(a)?, zero_based(b)?);
    let p = match (path, seed) {
        (Some(s), _) => parse_path(s)?,
        (None, Some(seed)) => random_simple_path(&g, a, b, seed)?,
        (None, None) => return Err(CliError::Usage("--seed or --path required".into())),
    };
    let (g2, rec) = alc_create_link(&g, a, b, &p)?;
    let labels: Vec<&str> = rec
        .unitary
        .ops()
        .iter()
        .map(|&c| clifford_label(c))
        .collect();
    let doc = json!({
        "graph": serde_json::to_value(g2.to_json())?,
        "path": one_based(&p.0),
        "sequence": one_based(&rec.sequence),
        "unitary": labels,
    });
    let free = emit(&doc, out)?;
    summary(
        free,
        &[
            format!("n_lc={}", rec.sequence.len()),
            format!("link_operations={}", rec.link_operations),
            format!("sequence={:?}", one_based(&rec.sequence)),
        ],
    );
    Ok(())
}
