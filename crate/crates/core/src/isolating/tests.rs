use super::*;
use crate::graph::{generate, Family, Graph};
use crate::testkit::{brute_min_cut, mask_members};
use proptest::prelude::{any, prop_assert_eq, proptest, ProptestConfig};

fn scheme(n: usize, s: u64) -> PerturbationScheme {
    PerturbationScheme::new(Seed(s).derive("perturb"), n).unwrap()
}

/// Forces the star branch on small graphs.
fn high_branch() -> IsolatingConfig {
    IsolatingConfig {
        degree_factor: 0.3,
        tau_factor: 0.8,
        repetitions: 3.0,
        star: StarConfig { p_const: 0.5, ..StarConfig::default() },
        ..IsolatingConfig::default()
    }
}

struct Reference {
    /// Perturbed minimizer of each terminal's isolating cut.
    minimizer: BTreeMap<usize, Vec<usize>>,
    value: BTreeMap<usize, Scaled>,
    /// Terminals whose isolating cut is also a minimum cut to another terminal.
    certified: Vec<usize>,
}

fn reference(g: &Graph, r: &[usize], scheme: &PerturbationScheme) -> Reference {
    let unit = scheme.unit();
    let plain = g.to_weighted(unit);
    let tilde = perturb(&plain, scheme, None).unwrap();
    let mut out = Reference { minimizer: BTreeMap::new(), value: BTreeMap::new(), certified: Vec::new() };
    for &v in r {
        let others: Vec<usize> = r.iter().copied().filter(|&u| u != v).collect();
        let (value, minimizers) = brute_min_cut(&tilde, &[v], &others);
        assert_eq!(minimizers.len(), 1);
        out.minimizer.insert(v, mask_members(minimizers[0], g.n()));
        out.value.insert(v, value);
        let iso = brute_min_cut(&plain, &[v], &others).0;
        if others.iter().any(|&u| brute_min_cut(&plain, &[v], &[u]).0 == iso) {
            out.certified.push(v);
        }
    }
    out
}

fn check_sound(g: &Graph, r: &[usize], scheme: &PerturbationScheme, got: &IsolatingCutsResult, want: &Reference) {
    let unit = scheme.unit();
    for &v in r {
        let cut = &got.cuts[&v];
        assert!(cut.contains(v));
        assert!(r.iter().all(|&u| u == v || !cut.contains(u)));
        let recount = g.cut_size(&cut.mask(g.n())) as Scaled * unit + perturbation_cut_weight(scheme, cut, None).unwrap();
        assert_eq!(got.values[&v], recount);
        assert!(got.values[&v] >= want.value[&v]);
    }
}

#[test]
fn path_and_star_examples() {
    let path = Graph::new(3, [(0, 1), (1, 2)]).unwrap();
    let s = scheme(3, 1);
    let res = weak_isolating_cuts(&CutOracle::new(&path), &[0, 2], &s, None, &IsolatingConfig::default(), Seed(1)).unwrap();
    for v in [0, 2] {
        assert_eq!(res.values[&v] / res.unit, 1);
    }
    assert!(res.cuts[&0].contains(0) && !res.cuts[&2].contains(0));

    let star = generate(Family::Star, 7, Seed(0)).unwrap();
    let s = scheme(7, 2);
    let res = weak_isolating_cuts(&CutOracle::new(&star), &[1, 2, 3], &s, None, &IsolatingConfig::default(), Seed(2)).unwrap();
    for v in [1, 2, 3] {
        assert_eq!(res.cuts[&v], CutSet::singleton(v));
        assert_eq!(res.values[&v] / res.unit, 1);
    }
    assert_eq!(res.branch, Branch::LowDegree);
}

#[test]
fn too_few_terminals() {
    let g = generate(Family::Path, 4, Seed(0)).unwrap();
    let err = weak_isolating_cuts(&CutOracle::new(&g), &[1, 1], &scheme(4, 0), None, &IsolatingConfig::default(), Seed(0));
    assert_eq!(err.unwrap_err(), Error::TooFewTerminals(1));
}

fn completeness_rate(config: &IsolatingConfig, with_bundle: bool) -> (usize, usize) {
    let (mut hits, mut total) = (0, 0);
    for seed in 0..40u64 {
        let g = generate(Family::Gnp(0.5), 12, Seed(seed)).unwrap();
        let mut rng = Seed(seed).derive("terminals").rng();
        let mut r: Vec<usize> = (0..12).collect();
        rand::seq::SliceRandom::shuffle(r.as_mut_slice(), &mut rng);
        r.truncate(3 + (seed % 2) as usize);
        let s = scheme(12, seed);
        let o = CutOracle::new(&g);
        let bundle = with_bundle.then(|| PrecomputedBundle::build(&o, config, Seed(seed)).unwrap());
        let before = o.queries();
        let got = weak_isolating_cuts(&o, &r, &s, bundle.as_ref(), config, Seed(seed)).unwrap();
        let spent = (o.queries() - before) as f64;
        let d = g.degrees().iter().copied().max().unwrap();
        assert!(spent <= config.standalone_budget(12, d));
        if with_bundle {
            assert!(spent <= config.bundle_budget(12, r.len()));
        }
        if config.degree_factor < 1.0 {
            assert_eq!(got.branch, Branch::HighDegree);
        }
        let want = reference(&g, &r, &s);
        check_sound(&g, &r, &s, &got, &want);
        for &v in &want.certified {
            total += 1;
            if got.cuts[&v].members() == want.minimizer[&v].as_slice() {
                hits += 1;
            }
        }
    }
    (hits, total)
}

#[test]
fn weak_completeness_default_branch() {
    let (hits, total) = completeness_rate(&IsolatingConfig::default(), false);
    assert!(total > 0);
    assert!(hits as f64 >= 0.95 * total as f64, "{hits}/{total}");
}

#[test]
fn weak_completeness_star_branch() {
    let (hits, total) = completeness_rate(&high_branch(), false);
    assert!(hits as f64 >= 0.95 * total as f64, "{hits}/{total}");
}

#[test]
fn weak_completeness_with_bundle() {
    for config in [IsolatingConfig::default(), high_branch()] {
        let (hits, total) = completeness_rate(&config, true);
        assert!(hits as f64 >= 0.95 * total as f64, "{hits}/{total}");
    }
}

#[test]
fn complete_bundle_is_query_free() {
    let g = generate(Family::Gnp(0.5), 10, Seed(3)).unwrap();
    let o = CutOracle::new(&g);
    let bundle = PrecomputedBundle::build(&o, &IsolatingConfig::default(), Seed(1)).unwrap();
    assert!(bundle.complete);
    let before = o.queries();
    let res = weak_isolating_cuts(&o, &[0, 4, 7], &scheme(10, 3), Some(&bundle), &IsolatingConfig::default(), Seed(2)).unwrap();
    assert_eq!(o.queries(), before);
    assert_eq!(res.branch, Branch::Known);
}

#[test]
fn star_candidates_drop_terminal_edges_only() {
    let g = generate(Family::Gnp(0.6), 12, Seed(9)).unwrap();
    let o = CutOracle::new(&g);
    let config = high_branch();
    let r = [0, 5, 9];
    let star = star_contract(&o, config.tau(12), &r, None, &config.star, Seed(4)).unwrap();
    let got = contracted_without_terminal_edges(&o, &star.map, &star.centres, &r, &[]).unwrap();
    let mut want = crate::graph::contract(&g.to_weighted(o.unit()), &star.map).unwrap();
    let terminal_blocks: Vec<usize> = r.iter().map(|&v| star.map.block_of(v)).collect();
    let mut kept = WeightedGraph::new(want.n(), o.unit());
    for (a, b, w) in want.edges() {
        if !(terminal_blocks.contains(&a) && terminal_blocks.contains(&b)) {
            kept.add_edge(a, b, w).unwrap();
        }
    }
    want = kept;
    assert_eq!(got, want);
    let low: Vec<(usize, usize)> = g.edges().to_vec();
    assert_eq!(contracted_without_terminal_edges(&o, &star.map, &star.centres, &r, &low).unwrap(), want);
}

#[test]
fn json_shape() {
    let g = generate(Family::Cycle, 6, Seed(0)).unwrap();
    let res = weak_isolating_cuts(&CutOracle::new(&g), &[0, 3], &scheme(6, 1), None, &IsolatingConfig::default(), Seed(0)).unwrap();
    let json = res.to_json();
    assert!(json["0"]["cut"].as_array().unwrap().contains(&serde_json::json!(0)));
    assert_eq!(json["3"]["value_den"], serde_json::json!(res.unit.to_string()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn terminal_edges_do_not_move_minimizers(n in 4usize..=10, seed in any::<u64>(), pick in any::<u16>()) {
        let g = generate(Family::Gnp(0.5), n, Seed(seed)).unwrap();
        let mut r: Vec<usize> = (0..n).filter(|&v| pick >> v & 1 == 1).collect();
        if r.len() < 2 {
            r = vec![0, n - 1];
        }
        let s = scheme(n, seed);
        let full = perturb(&g.to_weighted(s.unit()), &s, None).unwrap();
        let reduced_edges = g.edges().iter().copied().filter(|&(a, b)| !(r.contains(&a) && r.contains(&b)));
        let reduced = perturb(&Graph::new(n, reduced_edges).unwrap().to_weighted(s.unit()), &s, None).unwrap();
        for &v in &r {
            let others: Vec<usize> = r.iter().copied().filter(|&u| u != v).collect();
            prop_assert_eq!(brute_min_cut(&full, &[v], &others).1, brute_min_cut(&reduced, &[v], &others).1);
        }
    }
}
