//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use disttv::centrality::{probe_matrix, recover_centrality};
use disttv::generate::{
    random_connected_graph, random_discrete_set, random_explicit_eta, random_pmf, random_tree,
    seeded_rng,
};
use disttv::graph::{
    count_spanning_trees, count_spanning_trees_with_edge, enumerate_spanning_trees,
    enumerate_subtrees, DEFAULT_ENUMERATION_LIMIT,
};
use disttv::marginals::{discrete_metric_cost, w2_oracle};
use disttv::oracles::{lp_min_tv_marginals, DEFAULT_LP_GUARD};
use disttv::tv::{tree_coupling, DiscreteMetric};
use disttv::*;
use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

const IDENTITY_TOL: f64 = 1e-9;
const COUPLING_TOL: f64 = 1e-9;
const W2_TOL: f64 = 1e-9;
const GAUSSIAN_REL_TOL: f64 = 2e-2;
const GAUSSIAN_N: usize = 10_000;
const CENTRALITY_TOL: f64 = 1e-12;
const PROBE_RETRIES: usize = 32;
const RECOVERY_TOL: f64 = 1e-9;
const LOWER_BOUND_SLACK: f64 = 1e-12;

type Rng8 = ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: String) -> Verdict {
    Verdict { passed, detail }
}

fn connected(rng: &mut Rng8, lo: usize, hi: usize) -> Graph {
    let n = rng.random_range(lo..=hi);
    random_connected_graph(n, rng).unwrap()
}

fn tv_identity() -> Verdict {
    let mut rng = seeded_rng(1);
    let mut worst = 0.0f64;
    let mut pairs = 0;
    for _ in 0..20 {
        let g = connected(&mut rng, 3, 6);
        let subtrees = enumerate_subtrees(&g, DEFAULT_ENUMERATION_LIMIT).unwrap();
        for _ in 0..100 {
            let eta: ExplicitEta<f64> = random_explicit_eta(&g, &subtrees, 8, &mut rng).unwrap();
            let support = rng.random_range(2..=4);
            let ns: MarginalSet<f64> =
                random_discrete_set(g.node_count(), support, 1 << 20, &mut rng).unwrap();
            let lhs = tv_eta(&g, &centrality_from_eta(&g, &eta), &ns).unwrap();
            let rhs = tv_eta_direct(&g, &eta, &ns, false).unwrap();
            worst = worst.max((lhs - rhs).abs());
            pairs += 1;
        }
    }
    verdict(
        worst <= IDENTITY_TOL,
        format!("{pairs} pairs on 20 graphs, max |tv_eta - tv_eta_direct| = {worst:.1e} (tol {IDENTITY_TOL:.0e})"),
    )
}

struct TreeOutcome {
    exact_mismatches: usize,
    coupling_worst: f64,
    bound_violations: usize,
    tree_equalities: usize,
    tree_instances: usize,
    instances: usize,
}

fn tree_claim_and_lower_bound() -> TreeOutcome {
    let mut rng = seeded_rng(2);
    let mut out = TreeOutcome {
        exact_mismatches: 0,
        coupling_worst: 0.0,
        bound_violations: 0,
        tree_equalities: 0,
        tree_instances: 0,
        instances: 0,
    };
    let slack = Rational::lit(LOWER_BOUND_SLACK);
    let lower_bound = |g: &Graph, ns: &MarginalSet<Rational>, out: &mut TreeOutcome| {
        let (value, _) = lp_min_tv_marginals(g, ns, DEFAULT_LP_GUARD).unwrap();
        let bound: Rational = wasserstein_edge_vector(g, ns)
            .unwrap()
            .into_values()
            .into_iter()
            .sum();
        out.instances += 1;
        if value < bound.clone() - slack.clone() {
            out.bound_violations += 1;
        }
        if g.is_tree() {
            out.tree_instances += 1;
            if value == bound {
                out.tree_equalities += 1;
            }
        }
    };
    for _ in 0..50 {
        let n = rng.random_range(2..=5);
        let t = random_tree(n, &mut rng).unwrap();
        let support = rng.random_range(1..=3);
        let ns: MarginalSet<Rational> = random_discrete_set(n, support, 12, &mut rng).unwrap();
        let closed = tv_tree_marginals(&t, &ns).unwrap();
        let (lp, _) = lp_min_tv_marginals(&t, &ns, DEFAULT_LP_GUARD).unwrap();
        if lp != closed {
            out.exact_mismatches += 1;
        }
        let float_ns: MarginalSet<f64> = ns.convert();
        let joint = tree_coupling(&t, rng.random_range(0..n), &float_ns).unwrap();
        let attained = tv_joint_discrete(&t, &joint, &DiscreteMetric).unwrap();
        out.coupling_worst = out
            .coupling_worst
            .max((attained - closed.to_f64_lossy()).abs());
        lower_bound(&t, &ns, &mut out);
    }
    // non-tree instances for the lower bound
    for _ in 0..50 {
        let g = connected(&mut rng, 3, 5);
        let support = rng.random_range(2..=3);
        let ns: MarginalSet<Rational> =
            random_discrete_set(g.node_count(), support, 12, &mut rng).unwrap();
        lower_bound(&g, &ns, &mut out);
    }
    out
}

fn closed_form_wasserstein() -> Verdict {
    let mut rng = seeded_rng(3);
    let (mut emp, mut disc) = (0.0f64, 0.0f64);
    for _ in 0..200 {
        let n = rng.random_range(1..=6);
        let a: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let b: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let closed = w2_empirical(
            &EmpiricalMarginal::new(a.clone()).unwrap(),
            &EmpiricalMarginal::new(b.clone()).unwrap(),
        )
        .unwrap();
        emp = emp.max((closed - assignment_oracle_empirical(&a, &b).unwrap()).abs());
    }
    for _ in 0..200 {
        let size = rng.random_range(1..=6);
        let p: Vec<f64> = random_pmf(size, 1 << 20, &mut rng);
        let q: Vec<f64> = random_pmf(size, 1 << 20, &mut rng);
        let closed = w2_discrete(
            &DiscreteMarginal::new(p.clone()).unwrap(),
            &DiscreteMarginal::new(q.clone()).unwrap(),
        )
        .unwrap();
        let (lp, _) = w2_oracle(&p, &q, &discrete_metric_cost(size)).unwrap();
        disc = disc.max((closed - lp).abs());
    }
    let gauss = gaussian_quantile_error();
    verdict(
        emp <= W2_TOL && disc <= W2_TOL && gauss <= GAUSSIAN_REL_TOL,
        format!(
            "empirical vs permutations {emp:.1e}, discrete vs LP {disc:.1e} (200 each, tol {W2_TOL:.0e}); \
             gaussian quantile N=1e4 rel err {gauss:.1e} (tol {GAUSSIAN_REL_TOL:.0e})"
        ),
    )
}

fn gaussian_quantile_error() -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    let quantiles = |m: f64, s: f64| -> Vec<f64> {
        let d = Normal::new(m, s).unwrap();
        (0..GAUSSIAN_N)
            .map(|k| d.inverse_cdf((k as f64 + 0.5) / GAUSSIAN_N as f64))
            .collect()
    };
    let mut worst = 0.0f64;
    for &(m1, s1, m2, s2) in &[
        (0.0, 1.0, 1.0, 2.0),
        (-2.0, 0.5, 3.0, 0.5),
        (0.0, 1.0, 0.0, 3.0),
    ] {
        let exact = w2_gaussian(
            &GaussianMarginal::new(m1, s1).unwrap(),
            &GaussianMarginal::new(m2, s2).unwrap(),
        );
        let a = EmpiricalMarginal::new(quantiles(m1, s1)).unwrap();
        let b = EmpiricalMarginal::new(quantiles(m2, s2)).unwrap();
        worst = worst.max((w2_empirical(&a, &b).unwrap() - exact).abs() / exact);
    }
    worst
}

/// Every shortest path by exhaustive DFS over simple paths.
fn brute_geodesics(g: &Graph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn walk(
        g: &Graph,
        v: usize,
        t: usize,
        seen: &mut Vec<bool>,
        path: &mut Vec<usize>,
        all: &mut Vec<Vec<usize>>,
    ) {
        if v == t {
            all.push(path.clone());
            return;
        }
        for &(w, e) in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                path.push(e);
                walk(g, w, t, seen, path, all);
                path.pop();
                seen[w] = false;
            }
        }
    }
    let mut all = Vec::new();
    let mut seen = vec![false; g.node_count()];
    seen[s] = true;
    walk(g, s, t, &mut seen, &mut Vec::new(), &mut all);
    let best = all.iter().map(Vec::len).min().unwrap();
    all.retain(|p| p.len() == best);
    all
}

fn centrality_correctness() -> Verdict {
    let mut graphs = vec![
        Graph::path(3).unwrap(),
        Graph::cycle(3).unwrap(),
        Graph::cycle(4).unwrap(),
        Graph::complete(4).unwrap(),
        Graph::complete(5).unwrap(),
        Graph::complete(6).unwrap(),
    ];
    let mut rng = seeded_rng(4);
    graphs.extend((0..20).map(|_| connected(&mut rng, 2, 6)));

    let mut count_mismatches = 0;
    let mut betweenness_worst = 0.0f64;
    let mut family_worst = 0.0f64;
    for g in &graphs {
        let trees = enumerate_spanning_trees(g, DEFAULT_ENUMERATION_LIMIT).unwrap();
        if BigUint::from(trees.len()) != count_spanning_trees(g) {
            count_mismatches += 1;
        }
        let exact: EdgeCentrality<Rational> = spanning_tree_centrality(g);
        for e in 0..g.edge_count() {
            let containing = trees.iter().filter(|t| t.contains(e)).count();
            if BigUint::from(containing) != count_spanning_trees_with_edge(g, e)
                || exact.values()[e]
                    != Rational::from_ratio(containing as u128, trees.len() as u128)
            {
                count_mismatches += 1;
            }
        }

        let n = g.node_count();
        let mut brute = vec![0.0f64; g.edge_count()];
        for s in 0..n {
            for t in s + 1..n {
                let paths = brute_geodesics(g, s, t);
                for p in &paths {
                    for &e in p {
                        brute[e] += 1.0 / paths.len() as f64;
                    }
                }
            }
        }
        let pairs = (n * (n - 1) / 2) as f64;
        let fast: EdgeCentrality<f64> = betweenness_centrality(g).unwrap();
        for (b, f) in brute.iter().zip(fast.values()) {
            betweenness_worst = betweenness_worst.max((b / pairs - f).abs());
        }

        for family in Family::ALL {
            let direct: EdgeCentrality<f64> = family.centrality(g).unwrap();
            let eta: ExplicitEta<f64> =
                eta_for_family(g, family, DEFAULT_ENUMERATION_LIMIT).unwrap();
            family_worst = family_worst.max(
                centrality_from_eta(g, &eta)
                    .as_vector()
                    .max_abs_diff(direct.as_vector()),
            );
        }
    }

    let q = |n: u128, d: u128| Rational::from_ratio(n, d);
    let all_equal = |c: EdgeCentrality<Rational>, v: Rational| c.values().iter().all(|x| *x == v);
    let specific = all_equal(spanning_tree_centrality(&Graph::cycle(3).unwrap()), q(2, 3))
        && all_equal(
            spanning_tree_centrality(&Graph::complete(4).unwrap()),
            q(1, 2),
        )
        && all_equal(
            betweenness_centrality(&Graph::path(3).unwrap()).unwrap(),
            q(2, 3),
        );

    verdict(
        count_mismatches == 0 && betweenness_worst <= CENTRALITY_TOL && family_worst <= CENTRALITY_TOL && specific,
        format!(
            "{} graphs: {count_mismatches} count mismatches, betweenness vs path enumeration {betweenness_worst:.1e}, \
             family consistency {family_worst:.1e} (tol {CENTRALITY_TOL:.0e}); C3=2/3, K4=1/2, P3 betweenness=2/3: {}",
            graphs.len(),
            if specific { "ok" } else { "wrong" }
        ),
    )
}

fn uniqueness_construction() -> Verdict {
    let mut rng = seeded_rng(5);
    let mut failures = 0;
    let mut max_draws = 0;
    let mut worst = 0.0f64;
    for k in 0..100u64 {
        let g = connected(&mut rng, 2, 8);
        let probes = match probe_matrix::<f64>(&g, 1000 + k) {
            Ok(p) => p,
            Err(_) => {
                failures += 1;
                continue;
            }
        };
        max_draws = max_draws.max(probes.draws());
        let c = EdgeCentrality::from_values(
            &g,
            (0..g.edge_count()).map(|_| rng.random::<f64>()).collect(),
        )
        .unwrap();
        let t = probes.forward(c.as_vector()).unwrap();
        let back = recover_centrality(&g, &probes, &t).unwrap();
        worst = worst.max(back.as_vector().max_abs_diff(c.as_vector()));
    }
    verdict(
        failures == 0 && max_draws <= PROBE_RETRIES && worst <= RECOVERY_TOL,
        format!(
            "100 graphs n<=8: {failures} probe failures, max draws {max_draws} (budget {PROBE_RETRIES}), \
             round-trip error {worst:.1e} (tol {RECOVERY_TOL:.0e})"
        ),
    )
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_disttv")
}

fn run_cli(args: &[&str], threads: usize, dir: &Path) -> (Vec<u8>, Option<i32>) {
    let out = Command::new(bin())
        .args(args)
        .current_dir(dir)
        .env("DISTTV_THREADS", threads.to_string())
        .output()
        .expect("spawn disttv");
    (out.stdout, out.status.code())
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("disttv-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn determinism() -> Verdict {
    let dir = scratch_dir();
    let setup: &[&[&str]] = &[
        &[
            "gen",
            "--family",
            "erdos-renyi",
            "--n",
            "6",
            "--p",
            "0.6",
            "--seed",
            "11",
            "--graph-out",
            "g.g",
        ],
        &[
            "gen",
            "--n",
            "6",
            "--marginals",
            "discrete",
            "--support",
            "3",
            "--seed",
            "12",
            "--marginals-out",
            "d.json",
        ],
        &[
            "gen",
            "--n",
            "6",
            "--marginals",
            "gaussian",
            "--seed",
            "13",
            "--marginals-out",
            "n.json",
        ],
        &[
            "gen",
            "--n",
            "6",
            "--marginals",
            "empirical",
            "--samples",
            "5",
            "--seed",
            "14",
            "--marginals-out",
            "e.json",
        ],
    ];
    for args in setup {
        let (_, code) = run_cli(args, 1, &dir);
        assert_eq!(code, Some(0), "setup {args:?}");
    }
    let invocations: &[&[&str]] = &[
        &[
            "gen",
            "--family",
            "erdos-renyi",
            "--n",
            "7",
            "--p",
            "0.4",
            "--seed",
            "3",
            "--marginals",
            "discrete",
            "--support",
            "3",
        ],
        &["gen", "--n", "5", "--marginals", "gaussian", "--seed", "9"],
        &["centrality", "--graph", "g.g", "--family", "constant"],
        &[
            "centrality",
            "--graph",
            "g.g",
            "--family",
            "betweenness",
            "--format",
            "csv",
        ],
        &[
            "centrality",
            "--graph",
            "g.g",
            "--family",
            "spanning-tree",
            "--format",
            "jsonl",
        ],
        &[
            "wasserstein",
            "--graph",
            "g.g",
            "--marginals",
            "d.json",
            "--format",
            "csv",
        ],
        &["wasserstein", "--graph", "g.g", "--marginals", "e.json"],
        &[
            "tv",
            "--graph",
            "g.g",
            "--marginals",
            "n.json",
            "--family",
            "spanning-tree",
            "--format",
            "jsonl",
        ],
        &[
            "tv",
            "--graph",
            "g.g",
            "--marginals",
            "d.json",
            "--family",
            "betweenness",
        ],
        &["verify", "--graph", "g.g", "--trials", "5", "--seed", "7"],
    ];
    let mut differing = Vec::new();
    for args in invocations {
        let (reference, code) = run_cli(args, 1, &dir);
        if code != Some(0) || reference.is_empty() {
            differing.push(format!("{} (exit {code:?})", args.join(" ")));
            continue;
        }
        for threads in [1, 2, 8] {
            if run_cli(args, threads, &dir).0 != reference {
                differing.push(format!("{} @ {threads} threads", args.join(" ")));
            }
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    verdict(
        differing.is_empty(),
        format!(
            "{} invocations x threads {{1, 2, 8}} plus a repeat: {}",
            invocations.len(),
            if differing.is_empty() {
                "byte-identical".to_string()
            } else {
                differing.join("; ")
            }
        ),
    )
}

fn main() {
    let mut failed = 0;
    let mut report = |id: &str, name: &str, f: &dyn Fn() -> Verdict| {
        let start = Instant::now();
        let v = f();
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} {name}: {status} ({}; {:.1} s)",
            v.detail,
            start.elapsed().as_secs_f64()
        );
        if !v.passed {
            failed += 1;
        }
    };

    report("1", "tv identity", &tv_identity);

    let start = Instant::now();
    let trees = tree_claim_and_lower_bound();
    let elapsed = start.elapsed().as_secs_f64();
    report("2", "tree claim", &|| {
        verdict(
            trees.exact_mismatches == 0 && trees.coupling_worst <= COUPLING_TOL,
            format!(
                "50 trees n<=5, supports<=3: {} exact LP/closed-form mismatches, coupling deviation {:.1e} (tol {COUPLING_TOL:.0e}); {elapsed:.1} s shared with 6",
                trees.exact_mismatches, trees.coupling_worst
            ),
        )
    });

    report("3", "closed-form wasserstein", &closed_form_wasserstein);
    report("4", "centrality correctness", &centrality_correctness);
    report("5", "uniqueness construction", &uniqueness_construction);

    report("6", "lower-bound law", &|| {
        verdict(
            trees.bound_violations == 0 && trees.tree_equalities == trees.tree_instances,
            format!(
                "{} instances: {} below sum of W2 - {LOWER_BOUND_SLACK:.0e}; exact equality on {}/{} tree instances",
                trees.instances, trees.bound_violations, trees.tree_equalities, trees.tree_instances
            ),
        )
    });

    report("7", "determinism", &determinism);

    if failed > 0 {
        println!("acceptance: {failed} criteria failed");
        std::process::exit(1);
    }
    println!("acceptance: all 7 criteria passed");
}
