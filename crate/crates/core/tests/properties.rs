use proptest::prelude::*;

use sweepcover::graph::{normalize, validate_pathset, BscInstance, MetricGraph, Path, PathSet};
use sweepcover::kminwp::{split_path, trim};
use sweepcover::mop::{alpha_star, heaviest_subpath, solve_mop, vertex_positions, MopParams};
use sweepcover::oracle::{build_path_cover_table, opt_kminwp, opt_mop};
use sweepcover::pc::{solve_pcf, solve_pcp, tree_to_path, Penalties, Tree};
use sweepcover::sweep::{richest_blocks, verify_schedule, BscParams, solve_bsc};
use sweepcover::TOL;

fn points(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<[f64; 2]>> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..1.0).prop_map(|(x, y)| [x, y]), n)
}

fn graph(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = MetricGraph> {
    points(n).prop_map(|p| MetricGraph::from_points(&p).unwrap())
}

/// A graph with a random ordering of its vertices.
fn graph_and_order(n: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (MetricGraph, Vec<usize>)> {
    graph(n).prop_flat_map(|g| {
        let order: Vec<usize> = (0..g.n()).collect();
        (Just(g), Just(order).prop_shuffle())
    })
}

/// Cuts `order` into `m` nonempty consecutive pieces at the given cut points.
fn cut_into(order: &[usize], cuts: &[usize]) -> Vec<Vec<usize>> {
    let mut bounds: Vec<usize> = cuts.to_vec();
    bounds.sort_unstable();
    bounds.dedup();
    let mut out = Vec::new();
    let mut start = 0;
    for b in bounds.into_iter().chain(std::iter::once(order.len())) {
        if b > start {
            out.push(order[start..b].to_vec());
            start = b;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closure_satisfies_triangle_inequality(
        n in 2usize..12,
        raw in prop::collection::vec((0usize..12, 0usize..12, 0.0f64..5.0), 0..40),
    ) {
        let mut edges: Vec<(usize, usize, f64)> = (1..n).map(|v| (v - 1, v, 3.0)).collect();
        edges.extend(raw.into_iter().filter(|e| e.0 < n && e.1 < n));
        let g = MetricGraph::metric_closure(n, &edges).unwrap();
        prop_assert_eq!(g.triangle_violation(), None);
        for u in 0..n {
            prop_assert_eq!(g.dist(u, u), 0.0);
            for v in 0..n {
                prop_assert_eq!(g.dist(u, v), g.dist(v, u));
            }
        }
    }

    #[test]
    fn path_weight_is_reversal_invariant((g, order) in graph_and_order(1..=15)) {
        let fwd = g.path_weight(&order).unwrap();
        let rev: Vec<usize> = order.iter().rev().copied().collect();
        prop_assert!((fwd - g.path_weight(&rev).unwrap()).abs() <= TOL);
    }

    #[test]
    fn normalize_keeps_budget_ratios(
        (pts, order) in points(2..=10).prop_flat_map(|p| {
            let n = p.len();
            (Just(p), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
        }),
        stretch in 1.0f64..50.0,
        sensors in 1usize..4,
        speed in 0.1f64..3.0,
        period in 0.1f64..3.0,
    ) {
        let scaled: Vec<[f64; 2]> = pts.iter().map(|p| [p[0] * stretch, p[1] * stretch]).collect();
        let inst = BscInstance::new(MetricGraph::from_points(&scaled).unwrap(), sensors, speed, period).unwrap();
        let norm = normalize(&inst);
        prop_assert!(norm.instance.graph.is_normalized());
        let before = inst.graph.path_weight(&order).unwrap() / inst.budget();
        let after = norm.instance.graph.path_weight(&order).unwrap() / norm.instance.budget();
        prop_assert!((before - after).abs() <= 1e-9 * before.max(1.0));
    }

    #[test]
    fn tree_to_path_at_most_doubles(
        g in graph(1..=20),
        parents in prop::collection::vec(any::<prop::sample::Index>(), 20),
    ) {
        let n = g.n();
        let edges: Vec<(usize, usize)> = (1..n).map(|v| (parents[v].index(v), v)).collect();
        let tree = Tree { vertices: (0..n).collect(), edges };
        let p = tree_to_path(&g, &tree).unwrap();
        let mut vs = p.vertices.clone();
        vs.sort_unstable();
        prop_assert_eq!(vs, (0..n).collect::<Vec<_>>());
        prop_assert!(p.weight <= 2.0 * tree.weight(&g) + TOL);
    }

    #[test]
    fn pcf_and_pcp_shapes(g in graph(1..=12), m_raw in 1usize..4, pen in prop::collection::vec(0.0f64..1.0, 12)) {
        let n = g.n();
        let m = m_raw.min(n);
        let pi = Penalties::new(pen[..n].to_vec()).unwrap();
        let f = solve_pcf(&g, &pi, m).unwrap();
        prop_assert_eq!(f.components(), m);
        let mut seen = vec![false; n];
        for t in &f.trees {
            prop_assert_eq!(t.edges.len() + 1, t.vertices.len());
            for &v in &t.vertices {
                prop_assert!(!seen[v]);
                seen[v] = true;
            }
        }
        let (ps, cert) = solve_pcp(&g, &pi, m).unwrap();
        prop_assert_eq!(ps.m(), m);
        prop_assert!(validate_pathset(&g, &ps).is_ok());
        prop_assert_eq!(cert.factor, 4.0);
        prop_assert!(ps.cost <= 2.0 * f.cost + TOL);
    }

    #[test]
    fn split_discards_at_least_average_ratio((g, order) in graph_and_order(2..=15)) {
        let p = Path::new(&g, order).unwrap();
        let s = split_path(&g, &p).unwrap();
        prop_assert_eq!(s.left.len(), s.right.len());
        prop_assert_eq!(s.left.len(), p.len() / 2);
        let worst = (s.left_charge / s.left.len() as f64).max(s.right_charge / s.right.len() as f64);
        prop_assert!(worst >= p.weight / p.len() as f64 - TOL);
        let mid_edge = s.left_charge + s.right_charge - s.left.weight - s.right.weight;
        if p.len() % 2 == 0 {
            prop_assert!((s.left_charge + s.right_charge - p.weight - mid_edge / 2.0).abs() <= 1e-9);
        } else {
            prop_assert!((s.left_charge + s.right_charge - p.weight).abs() <= 1e-9);
        }
    }

    #[test]
    fn trimming_invariants(
        (g, order) in graph_and_order(5..=40),
        cuts in prop::collection::vec(1usize..40, 0..4),
        k_raw in any::<prop::sample::Index>(),
    ) {
        let cuts: Vec<usize> = cuts.into_iter().filter(|&c| c < order.len()).collect();
        let ps = PathSet::from_vertex_lists(&g, cut_into(&order, &cuts)).unwrap();
        let p = ps.spanned;
        let m = ps.m();
        // Any k with m ≤ 2k and 2k < p.
        let lo = m.div_ceil(2).max(1);
        let hi = (p - 1) / 2;
        prop_assume!(lo <= hi);
        let k = lo + k_raw.index(hi - lo + 1);
        let out = trim(&g, &ps, k).unwrap();
        let q = out.pathset.spanned;
        prop_assert!(k < q && q <= 2 * k);
        prop_assert!(out.pathset.cost <= 2.0 * (q as f64 / p as f64) * ps.cost + TOL);
        prop_assert!(validate_pathset(&g, &out.pathset).is_ok());
        for (i, (before, after)) in ps.paths.iter().zip(&out.pathset.paths).enumerate() {
            let mut expect = before.len();
            for _ in 0..out.trims[i] {
                expect = expect.div_ceil(2);
            }
            prop_assert_eq!(after.len(), expect);
            let window = before.vertices.windows(after.len()).any(|w| w == after.vertices.as_slice());
            prop_assert!(window || after.len() == 1);
        }
    }

    #[test]
    fn heaviest_subpath_pigeonhole((g, order) in graph_and_order(1..=20), ls in 1usize..30) {
        let p = Path::new(&g, order).unwrap();
        let h = heaviest_subpath(&g, &p, ls).unwrap();
        prop_assert!(h.len() >= p.len().div_ceil(ls));
        prop_assert!(h.weight <= p.weight / ls as f64 + TOL);
        let pos = vertex_positions(&g, &p);
        prop_assert!((pos.last().unwrap() - p.weight).abs() <= TOL);
    }

    #[test]
    fn mop_respects_budget(g in graph(1..=9), m_raw in 1usize..4, budget in 0.0f64..3.0, literal in any::<bool>()) {
        let m = m_raw.min(g.n());
        let mut params = MopParams::new(m, budget);
        params.fit_windows = !literal;
        let sol = solve_mop(&g, &params).unwrap();
        prop_assert!(sol.pathset.cost <= budget + TOL);
        prop_assert_eq!(sol.pathset.m(), m);
        prop_assert!(validate_pathset(&g, &sol.pathset).is_ok());
        let table = build_path_cover_table(&g, m).unwrap();
        prop_assert!(sol.pathset.spanned <= opt_mop(&table, m, budget).unwrap());
    }

    #[test]
    fn oracle_monotonicity(g in graph(1..=8), budget in 0.0f64..2.0, extra in 0.0f64..1.0) {
        let n = g.n();
        let table = build_path_cover_table(&g, n.min(3)).unwrap();
        for m in 1..=n.min(3) {
            let a = opt_mop(&table, m, budget).unwrap();
            prop_assert!(a <= opt_mop(&table, m, budget + extra).unwrap());
            if m < n.min(3) {
                prop_assert!(a <= opt_mop(&table, m + 1, budget).unwrap());
            }
            for k in m..n {
                prop_assert!(opt_kminwp(&table, m, k).unwrap() <= opt_kminwp(&table, m, k + 1).unwrap() + TOL);
                if m + 1 <= k && m < n.min(3) {
                    prop_assert!(opt_kminwp(&table, m + 1, k).unwrap() <= opt_kminwp(&table, m, k).unwrap() + TOL);
                }
            }
        }
    }

    #[test]
    fn oracle_witnesses_are_valid(g in graph(1..=8), set_raw in any::<usize>(), p_raw in 1usize..4) {
        let n = g.n();
        let table = build_path_cover_table(&g, n.min(3)).unwrap();
        let set = (set_raw % ((1 << n) - 1)) + 1;
        let p = p_raw.min(n.min(3)).min(set.count_ones() as usize);
        let w = table.witness(&g, set, p).unwrap();
        prop_assert!(validate_pathset(&g, &w).is_ok());
        prop_assert_eq!(w.m(), p);
        prop_assert!((w.cost - table.value(set, p)).abs() <= 1e-9);
        let mask: usize = w.vertex_lists().iter().flatten().map(|v| 1 << v).sum();
        prop_assert_eq!(mask, set);
    }

    #[test]
    fn blocks_cover_a_third(
        (g, order) in graph_and_order(1..=25),
        cuts in prop::collection::vec(1usize..25, 0..5),
        sensors_raw in 1usize..7,
        speed in 0.2f64..2.0,
    ) {
        let cuts: Vec<usize> = cuts.into_iter().filter(|&c| c < order.len()).collect();
        let ps = PathSet::from_vertex_lists(&g, cut_into(&order, &cuts)).unwrap();
        let sensors = sensors_raw.max(ps.m());
        // Tightest period that still affords the path set.
        let period = (ps.cost / (sensors as f64 * speed)).max(1e-3);
        let inst = BscInstance::new(g.clone(), sensors, speed, period).unwrap();
        let b = richest_blocks(&g, &ps, sensors, speed, period).unwrap();
        prop_assert!(b.total_blocks <= 3 * sensors);
        let report = verify_schedule(&inst, &ps, &b.schedule);
        prop_assert!(report.is_valid(), "{:?}", report.violations);
        prop_assert!(3 * report.covered >= ps.spanned);
    }

    #[test]
    fn bsc_schedules_verify(
        g in graph(1..=9),
        sensors in 1usize..5,
        speed in 0.1f64..1.5,
        period in 0.1f64..2.0,
    ) {
        let inst = BscInstance::new(g, sensors, speed, period).unwrap();
        let sol = solve_bsc(&inst, &BscParams::default()).unwrap();
        prop_assert!(sol.report.is_valid(), "{:?}", sol.report.violations);
        prop_assert!(sol.allocation_covered >= sol.blocks_covered);
        prop_assert!(sol.pathset.cost <= inst.budget() + 1e-9 * inst.budget().max(1.0));
        prop_assert!(3 * sol.report.covered >= sol.pathset.spanned);
        prop_assert!(sol.allocation.iter().sum::<usize>() <= sensors);
    }
}

#[test]
fn closure_matches_dijkstra() {
    use petgraph::algo::dijkstra;
    use petgraph::graph::{NodeIndex, UnGraph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let n: usize = rng.gen_range(2..=30);
        let mut edges: Vec<(usize, usize, f64)> = (1..n).map(|v| (rng.gen_range(0..v), v, rng.gen_range(0.0..4.0))).collect();
        for _ in 0..n {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            edges.push((u, v, rng.gen_range(0.0..4.0)));
        }
        let g = MetricGraph::metric_closure(n, &edges).unwrap();
        let pg = UnGraph::<(), f64>::from_edges(edges.iter().map(|&(u, v, w)| (u as u32, v as u32, w)));
        for s in 0..n {
            let d = dijkstra(&pg, NodeIndex::new(s), None, |e| *e.weight());
            for t in 0..n {
                assert!((d[&NodeIndex::new(t)] - g.dist(s, t)).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn disconnected_input_rejected() {
    let err = MetricGraph::metric_closure(3, &[(0, 1, 1.0)]).unwrap_err();
    assert_eq!(err.to_string(), "graph not connected");
}

#[test]
fn mop_default_alpha_is_alpha_star() {
    assert_eq!(MopParams::new(1, 0.0).alpha, alpha_star());
}
