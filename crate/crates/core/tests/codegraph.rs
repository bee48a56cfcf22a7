use gmacwt::codegraph::construct_graph;
use gmacwt::ensembles::{presets, Ensemble};

fn presets() -> [Ensemble; 3] {
    [presets::equal_power_mother(), presets::unequal_power_mother_user1(), presets::unequal_power_mother_user2()]
}

#[test]
fn degree_histograms_follow_the_node_perspective() {
    for ens in presets() {
        for n in [1000, 2503] {
            let g = construct_graph(&ens, n, 2).unwrap();
            let hist = g.var_degree_histogram();
            for (&d, &frac) in &ens.node_perspective() {
                let got = hist.get(&d).copied().unwrap_or(0) as f64 / n as f64;
                assert!((got - frac).abs() <= 2.0 / n as f64, "degree {d} at n {n}: {got} vs {frac}");
            }
            assert!(hist.keys().all(|d| ens.lambda().contains_key(d)));
        }
    }
}

#[test]
fn low_degree_nodes_see_no_four_cycles() {
    for ens in presets() {
        let g = construct_graph(&ens, 3000, 4).unwrap();
        for (d, vars) in g.vars_by_degree() {
            if d <= 16 {
                assert!(g.girth_over(vars.iter().copied()).is_none_or(|x| x >= 6), "degree {d}");
            }
        }
    }
}

#[test]
fn different_seeds_give_different_graphs() {
    let ens = presets::equal_power_mother();
    assert_ne!(construct_graph(&ens, 500, 1).unwrap().edges(), construct_graph(&ens, 500, 2).unwrap().edges());
}
