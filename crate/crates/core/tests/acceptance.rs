//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run with `cargo test -p pls --test acceptance`.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use pls::builder::fill_symbols;
use pls::feasibility::dominance_check;
use pls::format::SpecDocument;
use pls::matching::{merge_matchings, saturating_matching, BipartiteGraph, Side, Vertex};
use pls::oracle::Budget;
use pls::realization::realize_degree_matrix;
use pls::square::{validate, CellSet};
use pls::sweep::{
    compare, row_param_instances, size_instances, theorem_instances, Instance, SweepOutcome,
};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed_1a71;

/// Outcome of one criterion: `Err` carries the reason for failure.
type Verdict = Result<String, String>;

fn budget() -> Budget {
    Budget {
        max_volume: 12,
        max_dim: 10,
    }
}

fn sweep(instances: Vec<Instance>, limit: Duration, feasible: &mut Vec<Instance>) -> Verdict {
    let start = Instant::now();
    let SweepOutcome {
        checked,
        feasible: found,
        mismatches,
    } = compare(&instances, budget()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let summary = format!(
        "{checked} instances, {} feasible, {:.1?}",
        found.len(),
        elapsed
    );
    feasible.extend(found);
    if let Some(m) = mismatches.first() {
        return Err(format!(
            "{} mismatches, first: {m} ({summary})",
            mismatches.len()
        ));
    }
    if elapsed > limit {
        return Err(format!("took longer than {limit:?} ({summary})"));
    }
    Ok(summary)
}

fn builder_soundness(feasible: &[Instance]) -> Verdict {
    for inst in feasible {
        let square = inst.build().map_err(|e| format!("{inst}: {e}"))?;
        validate(square.iter().copied()).map_err(|e| format!("{inst}: output invalid: {e}"))?;
        if !inst.is_met_by(&square) {
            return Err(format!(
                "{inst}: output has parameters {:?}",
                square.parameters()
            ));
        }
    }
    Ok(format!("{} constructions", feasible.len()))
}

/// At least one edge, every degree at most 4.
fn random_graph(rng: &mut impl Rng) -> BipartiteGraph {
    loop {
        let g = random_graph_maybe_empty(rng);
        if g.edge_count() > 0 {
            return g;
        }
    }
}

fn random_graph_maybe_empty(rng: &mut impl Rng) -> BipartiteGraph {
    let (l, r) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
    let mut pairs: Vec<(usize, usize)> = (0..l).flat_map(|i| (0..r).map(move |j| (i, j))).collect();
    pairs.shuffle(rng);
    let density = rng.gen_range(0.1..0.9);
    let (mut dl, mut dr) = (vec![0; l], vec![0; r]);
    let mut edges = Vec::new();
    for (i, j) in pairs {
        if rng.gen_bool(density) && dl[i] < 4 && dr[j] < 4 {
            dl[i] += 1;
            dr[j] += 1;
            edges.push((i, j));
        }
    }
    BipartiteGraph::new(l, r, edges).expect("distinct in-range edges")
}

fn random_subset(rng: &mut impl Rng, xs: Vec<usize>) -> Vec<usize> {
    xs.into_iter().filter(|_| rng.gen_bool(0.7)).collect()
}

fn merge_on_random_graphs() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = Instant::now();
    let mut edges_total = 0;
    for trial in 0..10_000 {
        let g = random_graph(&mut rng);
        let d = g.max_degree();
        let x1 = random_subset(&mut rng, g.vertices_of_degree(Side::Left, d));
        let y1 = random_subset(&mut rng, g.vertices_of_degree(Side::Right, d));
        let fail = |e: pls::matching::MatchingError| format!("trial {trial}: {e}");
        let m = saturating_matching(&g, Side::Left, &x1).map_err(fail)?;
        let n = saturating_matching(&g, Side::Right, &y1).map_err(fail)?;
        let k = merge_matchings(&g, &m, &n, &x1, &y1).map_err(fail)?;
        let covered = x1
            .iter()
            .map(|&i| Vertex {
                side: Side::Left,
                index: i,
            })
            .chain(y1.iter().map(|&j| Vertex {
                side: Side::Right,
                index: j,
            }))
            .all(|v| k.covers(v));
        let inside = k.iter().all(|e| m.contains(e) || n.contains(e));
        if !inside || !covered {
            return Err(format!(
                "trial {trial}: result does not cover X1 ∪ Y1 within M ∪ N"
            ));
        }
        edges_total += k.len();
    }
    let elapsed = start.elapsed();
    if elapsed > Duration::from_secs(30) {
        return Err(format!("took {elapsed:.1?}, limit 30s"));
    }
    Ok(format!(
        "10000 graphs, {edges_total} matched edges, {elapsed:.1?}"
    ))
}

fn random_cells(rng: &mut impl Rng, max: usize) -> CellSet {
    loop {
        let (r, c) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
        let p = rng.gen_range(0.05..1.0);
        let cells: Vec<(usize, usize)> = (1..=r)
            .flat_map(|i| (1..=c).map(move |j| (i, j)))
            .filter(|_| rng.gen_bool(p))
            .collect();
        if let Ok(b) = CellSet::new(r, c, cells) {
            return b;
        }
    }
}

fn fill_on_random_cells() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    for trial in 0..10_000 {
        let b = random_cells(&mut rng, 6);
        let p = fill_symbols(&b).map_err(|e| format!("trial {trial}: {e}"))?;
        let support: BTreeSet<(usize, usize)> =
            p.iter().map(|t| (t.row as usize, t.col as usize)).collect();
        if support != *b.cells() {
            return Err(format!("trial {trial}: support differs from the input"));
        }
        if p.parameters().s() != b.max_line() {
            return Err(format!(
                "trial {trial}: {} symbols, largest line {}",
                p.parameters().s(),
                b.max_line()
            ));
        }
    }
    Ok("10000 cell sets".into())
}

/// Sums over every pair of row and column subsets.
fn dominance_brute(n: &[usize], m: &[usize]) -> bool {
    let v: usize = n.iter().sum();
    (0u32..1 << n.len()).all(|rows| {
        (0u32..1 << m.len()).all(|cols| {
            let pick = |xs: &[usize], mask: u32| {
                xs.iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &x)| x)
                    .sum::<usize>()
            };
            let (k, l) = (rows.count_ones() as usize, cols.count_ones() as usize);
            pick(n, rows) + pick(m, cols) <= v + k * l
        })
    })
}

fn dominance_against_brute_force() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut violated = 0;
    let mut tried = 0;
    while tried < 1000 {
        let (r, c) = (rng.gen_range(1..=5), rng.gen_range(1..=5));
        let n: Vec<usize> = (0..r).map(|_| rng.gen_range(1..=c)).collect();
        let sum: usize = n.iter().sum();
        if sum < c || sum > r * c {
            continue;
        }
        // Random composition of `sum` into `c` parts in 1..=r.
        let mut m = vec![1; c];
        let mut left = sum - c;
        while left > 0 {
            let j = rng.gen_range(0..c);
            if m[j] < r {
                m[j] += 1;
                left -= 1;
            }
        }
        tried += 1;
        let fast = dominance_check(&n, &m).map_err(|e| e.to_string())?;
        if fast.holds() != dominance_brute(&n, &m) {
            return Err(format!("n={n:?} m={m:?}: prefix check says {fast:?}"));
        }
        violated += usize::from(!fast.holds());
    }
    Ok(format!("1000 pairs, {violated} violate dominance"))
}

fn realization_on_random_matrices() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut done = 0;
    while done < 1000 {
        let b = random_cells(&mut rng, 6);
        let (n, m) = (b.row_counts(), b.col_counts());
        if n.contains(&0) || m.contains(&0) {
            continue;
        }
        done += 1;
        let out = realize_degree_matrix(&n, &m).map_err(|e| format!("n={n:?} m={m:?}: {e}"))?;
        if out.row_counts() != n || out.col_counts() != m {
            return Err(format!("n={n:?} m={m:?}: wrong line sums"));
        }
        if realize_degree_matrix(&n, &m).ok() != Some(out) {
            return Err(format!("n={n:?} m={m:?}: not deterministic"));
        }
    }
    Ok("1000 realizable pairs".into())
}

fn pls(args: &[&str], stdin: &str) -> Result<(i32, String, String), String> {
    let mut child = Command::new(env!("CARGO_BIN_EXE_pls"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .map_err(|e| format!("cannot run pls: {e}"))?;
    child
        .stdin
        .take()
        .expect("piped")
        .write_all(stdin.as_bytes())
        .map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    Ok((
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    ))
}

fn spec_of(inst: &Instance) -> SpecDocument {
    let mut doc = SpecDocument {
        version: Some("1".into()),
        ..Default::default()
    };
    match inst.clone() {
        Instance::Theorem { rows, cols, s } => {
            doc.rows = Some(rows);
            doc.cols = Some(cols);
            doc.s = Some(s);
        }
        Instance::RowParams { rows, c, s } => {
            doc.rows = Some(rows);
            doc.c = Some(c);
            doc.s = Some(s);
        }
        Instance::Sizes { r, c, s, v } => {
            doc.r = Some(r);
            doc.c = Some(c);
            doc.s = Some(s);
            doc.v = Some(v);
        }
    }
    doc
}

/// Whether the profile printed by `verify --json` is the one requested.
fn reports_request(inst: &Instance, profile: &serde_json::Value) -> bool {
    let list = |key: &str| -> Vec<usize> {
        serde_json::from_value(profile[key].clone()).unwrap_or_default()
    };
    let (rows, cols, syms) = (list("row_params"), list("col_params"), list("sym_params"));
    let volume = profile["volume"].as_u64().map(|v| v as usize);
    match inst {
        Instance::Theorem {
            rows: n,
            cols: m,
            s,
        } => rows == *n && cols == *m && syms.len() == *s,
        Instance::RowParams { rows: n, c, s } => rows == *n && cols.len() == *c && syms.len() == *s,
        Instance::Sizes { r, c, s, v } => {
            rows.len() == *r && cols.len() == *c && syms.len() == *s && volume == Some(*v)
        }
    }
}

fn cli_round_trip() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 4);
    let mut pool = theorem_instances(3, 3, 9);
    pool.extend(row_param_instances(3, 3, 4, 4));
    pool.extend(size_instances(5, 20));
    pool.shuffle(&mut rng);
    let (feasible, infeasible): (Vec<Instance>, Vec<Instance>) =
        pool.into_iter().partition(Instance::predicate);

    for inst in feasible.iter().take(50) {
        let spec = serde_json::to_string(&spec_of(inst)).expect("serializes");
        let (code, out, err) = pls(&["build", "spec", "-"], &spec)?;
        if code != 0 {
            return Err(format!("build {spec} exited {code}: {err}"));
        }
        let (code, verified, err) = pls(&["verify", "-"], &out)?;
        if code != 0 || !verified.starts_with("valid\n") {
            return Err(format!("verify of {out} exited {code}: {err}"));
        }
        let (_, reported, _) = pls(&["verify", "-", "--json"], &out)?;
        let reported: serde_json::Value =
            serde_json::from_str(&reported).map_err(|e| e.to_string())?;
        if !reports_request(inst, &reported) {
            return Err(format!("{inst}: verify reported {reported}"));
        }
    }

    let (code, out, err) = pls(
        &[
            "build", "sizes", "--r", "2", "--c", "2", "--s", "2", "--v", "5",
        ],
        "",
    )?;
    if code != 1 || !out.is_empty() || !err.contains("v ≤ rc") {
        return Err(format!("infeasible sizes: exit {code}, stderr {err:?}"));
    }
    for inst in infeasible.iter().take(50) {
        let spec = serde_json::to_string(&spec_of(inst)).expect("serializes");
        let (code, _, err) = pls(&["build", "spec", "-"], &spec)?;
        let report = match inst {
            Instance::Theorem { rows, cols, s } => {
                pls::feasibility::check_construction(rows, cols, *s)
            }
            Instance::RowParams { rows, c, s } => pls::feasibility::check_row_params(rows, *c, *s),
            Instance::Sizes { r, c, s, v } => pls::feasibility::check_sizes(*r, *c, *s, *v),
        };
        let named = report.violated().all(|cond| err.contains(cond.statement));
        if code != 1 || !named {
            return Err(format!("infeasible {spec}: exit {code}, stderr {err:?}"));
        }
    }
    Ok("50 feasible round trips, 51 infeasible requests rejected".into())
}

fn main() {
    let mut feasible = Vec::new();
    // Evaluated in order: criterion 4 reuses the feasible instances of 1-3.
    let results: Vec<(&str, Verdict)> = vec![
        (
            "1 theorem sweep matches the oracle",
            sweep(
                theorem_instances(3, 3, 9),
                Duration::from_secs(120),
                &mut feasible,
            ),
        ),
        (
            "2 row-parameter sweep matches the oracle",
            sweep(
                row_param_instances(3, 3, 3, 3),
                Duration::from_secs(120),
                &mut feasible,
            ),
        ),
        (
            "3 size sweep matches the oracle",
            sweep(
                size_instances(3, 9),
                Duration::from_secs(120),
                &mut feasible,
            ),
        ),
        (
            "4 builders are sound on every feasible instance",
            builder_soundness(&feasible),
        ),
        (
            "5 saturate-then-merge covers X1 ∪ Y1",
            merge_on_random_graphs(),
        ),
        (
            "6 fill_symbols uses exactly max-line symbols",
            fill_on_random_cells(),
        ),
        (
            "7 prefix dominance agrees with brute force",
            dominance_against_brute_force(),
        ),
        (
            "8 greedy realization reproduces line sums",
            realization_on_random_matrices(),
        ),
        ("9 CLI build/verify round trip", cli_round_trip()),
    ];

    let mut failed = 0;
    for (name, verdict) in &results {
        match verdict {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(reason) => {
                failed += 1;
                println!("FAIL {name}: {reason}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
