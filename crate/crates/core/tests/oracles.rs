mod common;

use std::collections::{BTreeSet, HashSet};

use backbone_core::backbone::{
    disparity_filter, disparity_significance, enforce_size, prune_low_weight_edges, tune_alpha, Backbone,
    BackboneParams, Method, PrunePolicy, ALPHA_RESOLUTION,
};
use backbone_core::betweenness::betweenness;
use backbone_core::community::{detect_communities, overlap_neighborhood, overlapping_nodes, Listening, SlpaParams};
use backbone_core::graph::NodeId;
use backbone_core::io::{read_edge_list, write_edge_list_file};
use backbone_core::metrics::{
    effectiveness_summary, kendall_tau, pearson, rank_biased_overlap, rank_nodes, top_preservation,
};
use backbone_core::structure::{articulation_points, bridges, component_count};
use common::*;
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn weighted_degree_matches_edge_scan() {
    let mut r = rng(11);
    for _ in 0..20 {
        let g = random_graph(&mut r, 30, 70, Weights::Real);
        for v in g.nodes() {
            let scan: f64 = g
                .edges()
                .iter()
                .filter(|e| e.src == v || e.dst == v)
                .map(|e| e.weight)
                .sum();
            assert!(close(g.weighted_degree(v).unwrap(), scan, 1e-12));
        }
    }
}

#[test]
fn bridges_match_component_recount() {
    let mut r = rng(12);
    for _ in 0..40 {
        let n = r.random_range(2..40);
        let m = r.random_range(0..60);
        let g = random_graph(&mut r, n, m, Weights::Coarse);
        let base = components_by_search(&g, None);
        assert_eq!(component_count(&g), base);
        for (i, &is_bridge) in bridges(&g).iter().enumerate() {
            assert_eq!(is_bridge, components_by_search(&g, Some(i)) == base + 1, "edge {i}");
        }
    }
}

#[test]
fn betweenness_matches_path_enumeration_on_20_nodes() {
    let mut r = rng(13);
    for _ in 0..10 {
        let g = random_graph(&mut r, 20, 35, Weights::Coarse);
        let fast = betweenness(&g);
        let slow = brute_betweenness(&g);
        for (a, b) in fast.iter().zip(&slow) {
            assert!(close(*a, *b, 1e-9), "{a} vs {b}");
        }
    }
}

#[test]
fn betweenness_on_karate_matches_path_enumeration() {
    let g = karate();
    for (a, b) in betweenness(&g).iter().zip(brute_betweenness(&g)) {
        assert!(close(*a, b, 1e-9));
    }
}

#[test]
fn skip_bridges_prune_is_a_maximum_spanning_forest() {
    let mut r = rng(14);
    for _ in 0..30 {
        let n = r.random_range(2..20);
        let m = r.random_range(0..50);
        let g = random_graph(&mut r, n, m, Weights::Coarse);
        let pruned = prune_low_weight_edges(&g, PrunePolicy::SkipBridges);
        let kept: BTreeSet<usize> = pruned
            .edges()
            .iter()
            .map(|e| g.find_edge(e.src, e.dst).unwrap().0)
            .collect();
        assert_eq!(kept, kruskal_max_forest(&g));
    }
}

#[test]
fn star_significance_matches_null_model_integral() {
    for k in 2..=30usize {
        let leaves: Vec<String> = (0..k).map(|i| format!("l{i}")).collect();
        let g = backbone_core::graph::from_edges(leaves.iter().map(|l| ("c", l.as_str(), 1.0))).unwrap();
        let closed = (1.0 - 1.0 / k as f64).powi(k as i32 - 1);
        let integral = null_model_alpha(1.0 / k as f64, k);
        for s in disparity_significance(&g) {
            assert_eq!(s.from_src, closed);
            assert!(close(s.from_src, integral, 1e-9));
        }
    }
}

#[test]
fn rbo_matches_naive_sum_on_15_element_lists() {
    let mut r = rng(15);
    for _ in 0..100 {
        let x = random_list(&mut r, 25, 15);
        let y = random_list(&mut r, 25, 15);
        let fast = rank_biased_overlap(&x, &y, 0.7).unwrap();
        assert!(close(fast, naive_rbo(&x, &y, 0.7), 1e-12));
    }
}

#[test]
fn pearson_matches_textbook_formula() {
    let mut r = rng(16);
    for _ in 0..100 {
        let n = r.random_range(2..60);
        let x: Vec<f64> = (0..n).map(|_| r.random_range(-50.0..50.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| r.random_range(0.0..5.0)).collect();
        assert!(close(pearson(&x, &y).unwrap(), direct_pearson(&x, &y), 1e-12));
    }
}

#[test]
fn kendall_matches_pair_classification_with_ties() {
    let mut r = rng(17);
    for _ in 0..100 {
        let n = r.random_range(2..40);
        let x: Vec<f64> = (0..n).map(|_| r.random_range(1..6) as f64).collect();
        let y: Vec<f64> = (0..n).map(|_| r.random_range(1..6) as f64).collect();
        assert_eq!(kendall_tau(&x, &y).unwrap(), brute_kendall(&x, &y));
    }
}

#[test]
fn rank_nodes_matches_comparison_sort() {
    let mut r = rng(18);
    for _ in 0..20 {
        let g = random_graph(&mut r, 40, 80, Weights::Coarse);
        let mut nodes: Vec<NodeId> = g.nodes().collect();
        nodes.shuffle(&mut r);
        nodes.truncate(25);
        let ranked = rank_nodes(&g, &nodes).unwrap();
        let mut expect: Vec<(f64, usize)> = nodes.iter().map(|&v| (g.weighted_degree(v).unwrap(), v.0)).collect();
        expect.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let got: Vec<(f64, usize)> = ranked.entries.iter().map(|e| (e.weighted_degree, e.node.0)).collect();
        assert_eq!(got, expect);
        let mut distinct: Vec<f64> = expect.iter().map(|e| e.0).collect();
        distinct.dedup();
        for e in &ranked.entries {
            assert_eq!(distinct[e.rank - 1], e.weighted_degree);
        }
    }
}

#[test]
fn top_preservation_matches_set_intersection() {
    let mut r = rng(19);
    for _ in 0..20 {
        let g = random_graph(&mut r, 50, 120, Weights::Real);
        let mut half: Vec<NodeId> = g.nodes().collect();
        half.shuffle(&mut r);
        half.truncate(25);
        half.sort_unstable();
        let b = Backbone {
            graph: g.induced_subgraph(&half).unwrap(),
            method: Method::Ego,
            params: BackboneParams::default(),
            source_nodes: half.clone(),
            pre_prune_components: None,
        };
        let got = top_preservation(&g, &b, 0.1).unwrap();
        let t = 5;
        let mut all: Vec<NodeId> = g.nodes().collect();
        all.sort_by(|a, b| g.weighted_degree(*b).unwrap().partial_cmp(&g.weighted_degree(*a).unwrap()).unwrap().then(a.cmp(b)));
        let top: HashSet<NodeId> = all[..t].iter().copied().collect();
        let mut sub = half.clone();
        sub.sort_by(|a, b| g.weighted_degree(*b).unwrap().partial_cmp(&g.weighted_degree(*a).unwrap()).unwrap().then(a.cmp(b)));
        let hit = sub[..t].iter().filter(|v| top.contains(v)).count();
        assert_eq!(got.t, t);
        assert_eq!(got.value, hit as f64 / t as f64);

        let whole = Backbone {
            graph: g.clone(),
            source_nodes: g.nodes().collect(),
            ..b
        };
        assert_eq!(top_preservation(&g, &whole, 0.1).unwrap().value, 1.0);
    }
}

#[test]
fn effectiveness_recomputed_from_exported_file() {
    let dir = tempfile::tempdir().unwrap();
    let g = karate();
    let alpha = 0.2;
    let b = disparity_filter(&g, alpha).unwrap();
    let path = dir.path().join("b.txt");
    write_edge_list_file(&b.graph, &path).unwrap();
    let (h, _) = read_edge_list(&path, 1.0).unwrap();
    let s = effectiveness_summary(&b.graph).unwrap();

    let n = h.node_count() as f64;
    let total: f64 = h.edges().iter().map(|e| e.weight).sum();
    assert!(close(s.avg_link_weight, total / h.edge_count() as f64, 1e-12));
    assert!(close(s.avg_weighted_degree, 2.0 * total / n, 1e-12));
    let beta: f64 = brute_betweenness(&h).iter().sum::<f64>() / n;
    assert!(close(s.avg_betweenness, beta, 1e-9));
}

#[test]
fn karate_tuning_lands_within_jump_of_target() {
    let g = karate();
    let sig: Vec<f64> = disparity_significance(&g).iter().map(|s| s.best()).collect();
    // exhaustive sweep: node count when every edge at or below each level is kept
    let mut levels: Vec<f64> = sig.iter().copied().filter(|&x| x < 1.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let count_at = |level: f64| {
        let mut nodes = HashSet::new();
        for (e, &s) in g.edges().iter().zip(&sig) {
            if s <= level {
                nodes.insert(e.src);
                nodes.insert(e.dst);
            }
        }
        nodes.len()
    };
    let oracle = levels.iter().map(|&l| count_at(l)).find(|&c| c >= 10).unwrap();

    let t = tune_alpha(&g, 10).unwrap();
    assert_eq!(t.backbone.node_count(), oracle);
    assert!((10..=12).contains(&t.backbone.node_count()));
    assert_eq!(t.gap, t.backbone.node_count() - 10);
    let below = disparity_filter(&g, t.alpha - ALPHA_RESOLUTION).unwrap();
    assert!(below.node_count() < 10);
}

#[test]
fn karate_ego_subnetwork_shrinks_to_ten_when_possible() {
    let g = karate();
    let params = SlpaParams {
        iterations: 20,
        threshold: 0.1,
        seed: 0,
        listening: Listening::Weighted,
    };
    let mut checked = 0;
    for seed in 0..10 {
        let cover = detect_communities(&g, params.with_seed(seed)).unwrap();
        let overlapping = overlapping_nodes(&cover);
        if overlapping.is_empty() {
            continue;
        }
        let sets = overlap_neighborhood(&g, &overlapping).unwrap();
        let sub = g.induced_subgraph(&sets.union()).unwrap();
        let pruned = prune_low_weight_edges(&sub, PrunePolicy::HaltOnBridge);
        let out = enforce_size(&pruned, 0.3, 34).unwrap();
        if out.node_count() > 10 {
            assert!(articulation_points(&out).iter().all(|&a| a));
        } else {
            assert_eq!(out.node_count(), pruned.node_count().min(10));
        }
        checked += 1;
    }
    assert!(checked > 0);
}
