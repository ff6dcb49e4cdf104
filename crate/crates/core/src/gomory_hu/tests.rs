use super::*;
use crate::exact::{all_pairs_min_cut, verify_gh_tree};
use crate::graph::{generate, Family, Graph};

fn scheme(n: usize, s: u64) -> PerturbationScheme {
    PerturbationScheme::new(Seed(s).derive("perturb"), n).unwrap()
}

fn run(g: &Graph, s: u64) -> (GomoryHuOutcome, CutOracle) {
    let o = CutOracle::new(g);
    let out = gomory_hu(&o, &scheme(g.n(), s), &GomoryHuConfig::default(), Seed(s)).unwrap();
    (out, o)
}

#[test]
fn path_and_cycle() {
    let (out, o) = run(&generate(Family::Path, 5, Seed(0)).unwrap(), 1);
    assert!(o.queries() > 0);
    for &(u, v, w) in out.tree.edges() {
        assert_eq!(u.abs_diff(v), 1);
        assert_eq!(w, o.unit());
    }
    let (out, o) = run(&generate(Family::Cycle, 6, Seed(0)).unwrap(), 2);
    assert!(out.tree.edges().iter().all(|&(_, _, w)| w == 2 * o.unit()));
}

#[test]
fn partial_tree_examples() {
    let path = generate(Family::Path, 8, Seed(0)).unwrap();
    let o = CutOracle::new(&path);
    let t = partial_k_tree(&o, 2, &scheme(8, 0), Seed(1)).unwrap();
    t.validate().unwrap();
    assert_eq!(t.groups.len(), 8);
    assert!(t.edges.iter().all(|&(_, _, w)| w / o.unit() == 1));

    let k9 = generate(Family::Clique, 9, Seed(0)).unwrap();
    let t = partial_k_tree(&CutOracle::new(&k9), 3, &scheme(9, 0), Seed(1)).unwrap();
    assert_eq!(t.groups, vec![(0..9).collect::<Vec<_>>()]);
    assert!(t.edges.is_empty());
}

#[test]
fn partial_tree_certifies_small_cuts() {
    for seed in 0..6u64 {
        let g = generate(Family::Gnp(0.25), 16, Seed(seed)).unwrap();
        let o = CutOracle::new(&g);
        let k = 4;
        let t = partial_k_tree(&o, k, &scheme(16, seed), Seed(seed)).unwrap();
        t.validate().unwrap();
        let lambda = all_pairs_min_cut(&g.to_weighted(1));
        let group = t.group_of();
        for a in 0..16 {
            for b in a + 1..16 {
                if group[a] == group[b] {
                    assert!(lambda[a][b] > k as Scaled);
                }
            }
        }
        for &(x, y, w) in &t.edges {
            let value = w / o.unit();
            assert!(value <= k as Scaled);
            let realized = t.groups[x].iter().any(|&a| t.groups[y].iter().any(|&b| lambda[a][b] == value));
            assert!(realized);
        }
    }
}

#[test]
fn random_graphs_verify() {
    let mut failures = 0;
    for n in [8usize, 10, 12] {
        for seed in 0..8u64 {
            let g = generate(Family::Gnp(0.5), n, Seed(seed)).unwrap();
            let (out, o) = run(&g, seed);
            let ok = verify_gh_tree(&g.to_weighted(o.unit()), &out.tree).unwrap().is_ok();
            if !ok {
                failures += 1;
                assert!(!out.anomalies.is_empty(), "n={n} seed={seed} failed without a logged anomaly");
            }
            assert!(o.queries() as f64 <= GomoryHuConfig::default().budget(n));
            assert_eq!(o.ledger().per_phase().values().sum::<u64>(), o.queries());
        }
    }
    assert!(failures <= 1);
}

#[test]
fn edges_carry_exact_pair_values() {
    let g = generate(Family::TwoCliquesBridge(2), 12, Seed(0)).unwrap();
    let (out, o) = run(&g, 5);
    let lambda = all_pairs_min_cut(&g.to_weighted(o.unit()));
    for &(u, v, w) in out.tree.edges() {
        assert_eq!(lambda[u][v], w);
    }
    let perturbed = perturb(&g.to_weighted(o.unit()), &scheme(12, 5), None).unwrap();
    let exact = all_pairs_min_cut(&perturbed);
    for (&(u, v, _), &w) in out.tree.edges().iter().zip(&out.exact_weights) {
        assert_eq!(exact[u][v], w);
    }
}

#[test]
fn largest_covering_prefers_size_then_index() {
    let members = [0, 1, 2, 3, 4, 5];
    let good = vec![
        (1, CutSet::new(vec![1]), 1),
        (2, CutSet::new(vec![1, 2]), 1),
        (4, CutSet::new(vec![4]), 1),
        (5, CutSet::new(vec![5]), 1),
    ];
    let chosen = largest_covering(&good, &members);
    let sides: Vec<Vec<usize>> = chosen.into_iter().map(|(c, _)| c.into_vec()).collect();
    assert_eq!(sides, vec![vec![1, 2], vec![4], vec![5]]);
}

#[test]
fn refinement_reattaches_subtrees() {
    // Groups {0,1,2,3} - {4} - {5}; split off {3, 4, 5}'s side through the cut {3,4,5}.
    let mut t = PartitionTree { n: 6, groups: vec![vec![0, 1, 2, 3], vec![4], vec![5]], edges: vec![(0, 1, 7), (1, 2, 9)] };
    let straddled = t.refine(0, &[(CutSet::new(vec![3, 4, 5]), 5)]);
    assert_eq!(straddled, 0);
    t.validate().unwrap();
    assert_eq!(t.groups[3], vec![3]);
    assert!(t.edges.contains(&(3, 1, 7)));
    assert!(t.edges.contains(&(0, 3, 5)));
}
