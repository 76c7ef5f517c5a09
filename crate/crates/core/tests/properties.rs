use std::collections::BTreeMap;

use proptest::prelude::*;
use torcontent_core::graph::{
    betweenness, closeness, eigenvector, modularity, per_community_modularity, robustness_coefficient,
    strongly_connected_components, summary_stats, weakly_connected_components, DomainGraph, DomainGraphBuilder,
    Measure,
};
use torcontent_core::html::extract_text;
use torcontent_core::powerlaw::{fit_power_law, ks_statistic};
use torcontent_core::text::{is_stopword, tokenize};
use torcontent_core::topics::{fit_lda, LdaConfig};

fn graph_strategy() -> impl Strategy<Value = DomainGraph> {
    (2usize..12)
        .prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec((0..n, 0..n), 0..40),
                prop::collection::vec(0..3usize, n),
            )
        })
        .prop_map(|(n, edges, labels)| {
            let mut b = DomainGraphBuilder::new();
            for i in 0..n {
                b.add_vertex(&format!("d{i:02}"));
            }
            for (x, y) in edges {
                b.add_edge(&format!("d{x:02}"), &format!("d{y:02}"));
            }
            let labels: BTreeMap<String, String> =
                labels.iter().enumerate().map(|(i, l)| (format!("d{i:02}"), format!("L{l}"))).collect();
            b.build(&labels)
        })
}

fn partition(n: usize, parts: &[Vec<usize>]) -> bool {
    let mut all: Vec<usize> = parts.iter().flatten().copied().collect();
    all.sort_unstable();
    all == (0..n).collect::<Vec<_>>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extraction_is_total_and_collapsed(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        let t = extract_text(&bytes);
        prop_assert!(!t.contains("  "));
        prop_assert_eq!(t.trim(), t.as_str());
    }

    #[test]
    fn extraction_of_markup_soup(parts in prop::collection::vec(
        prop::sample::select(vec!["<p>", "</p>", "<b>", "</b>", "word", " ", "<script>", "</script>", "&amp;", "<!--", "-->", "<", ">", "x"]), 0..40)) {
        let t = extract_text(parts.concat().as_bytes());
        prop_assert!(!t.contains("  "));
    }

    #[test]
    fn tokens_are_clean(text in "[a-zA-Z0-9 .,;!?'-]{0,200}") {
        for t in tokenize(&text) {
            prop_assert!(t.chars().count() >= 2);
            prop_assert_eq!(t.to_lowercase(), t.clone());
            prop_assert!(!is_stopword(&t));
            prop_assert!(!t.chars().all(|c| c.is_numeric()));
        }
    }

    #[test]
    fn components_partition(g in graph_strategy()) {
        let w = weakly_connected_components(&g);
        let s = strongly_connected_components(&g);
        prop_assert!(partition(g.len(), &w));
        prop_assert!(partition(g.len(), &s));
        prop_assert!(s.len() >= w.len());
        let st = summary_stats(&g);
        prop_assert_eq!(st.wcc_count, w.len());
        prop_assert!(st.max_scc <= st.max_wcc);
    }

    #[test]
    fn centralities_bounded(g in graph_strategy()) {
        for b in betweenness(&g) { prop_assert!((0.0..=1.0 + 1e-12).contains(&b)); }
        for c in closeness(&g) { prop_assert!((0.0..=1.0 + 1e-12).contains(&c)); }
        let e = eigenvector(&g);
        prop_assert!(e.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
        prop_assert!(e.iter().any(|&x| (x - 1.0).abs() < 1e-12));
    }

    #[test]
    fn robustness_in_unit_interval(g in graph_strategy()) {
        for m in Measure::ALL {
            let r = robustness_coefficient(&g, m).unwrap();
            prop_assert!(r > 0.0 && r <= 1.0 + 1e-12, "{:?}: {}", m, r);
        }
    }

    #[test]
    fn modularity_decomposes(g in graph_strategy()) {
        prop_assume!(g.edge_count() > 0);
        let total = modularity(&g).unwrap();
        let sum: f64 = per_community_modularity(&g).unwrap().iter().map(|(_, m)| m).sum();
        prop_assert!((total - sum).abs() < 1e-12);
        prop_assert!(total <= 1.0);
    }

    #[test]
    fn power_law_fit_is_sane(data in prop::collection::vec(1u64..200, 60..300)) {
        if let Ok(fit) = fit_power_law(&data) {
            prop_assert!(fit.alpha > 1.0);
            prop_assert!((0.0..=1.0).contains(&fit.ks));
            prop_assert!(data.contains(&fit.xmin));
            let ks = ks_statistic(&data, fit.alpha, fit.xmin);
            prop_assert!((ks - fit.ks).abs() < 1e-12);
            prop_assert_eq!(fit_power_law(&data).unwrap(), fit);
        }
    }

    #[test]
    fn lda_rows_are_distributions(
        docs in prop::collection::vec(prop::collection::vec(0u32..8, 1..20), 1..8),
        seed in any::<u64>(),
    ) {
        let present: std::collections::BTreeSet<u32> = docs.iter().flatten().copied().collect();
        prop_assume!(present.len() == 8);
        let m = fit_lda(&docs, 8, &LdaConfig::new(3, seed).with_iterations(5)).unwrap();
        for d in 0..docs.len() {
            prop_assert!((m.theta(d).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        for t in 0..3 {
            prop_assert!((m.phi(t).iter().sum::<f64>() - 1.0).abs() < 1e-9);
        }
        let again = fit_lda(&docs, 8, &LdaConfig::new(3, seed).with_iterations(5)).unwrap();
        prop_assert_eq!(m.assignments(), again.assignments());
    }
}
