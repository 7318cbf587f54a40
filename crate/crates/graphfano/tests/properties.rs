//! Property tests over randomly generated labeled graphs.

use proptest::prelude::*;

use graphfano::building::{Budget, BuildingSet};
use graphfano::census::graph_from_edge_mask;
use graphfano::fan::Fan;
use graphfano::graph::{node_bit, Graph};

fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    assert!(max_n * (max_n - 1) / 2 < 64); // edge masks are u64
    (1..=max_n).prop_flat_map(|n| {
        let bits = n * (n - 1) / 2;
        (Just(n), 0u64..(1u64 << bits)).prop_map(|(n, mask)| graph_from_edge_mask(n, mask))
    })
}

fn arb_connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    arb_graph(max_n).prop_filter("connected", |g| g.is_connected())
}

proptest! {
    #[test]
    fn graph6_roundtrip(g in arb_graph(11)) {
        let encoded = g.to_graph6();
        prop_assert_eq!(Graph::parse_graph6(&encoded).unwrap(), g);
    }

    #[test]
    fn induced_full_subgraph_is_identity(g in arb_graph(8)) {
        prop_assert_eq!(g.induced_subgraph(g.full_mask()).unwrap(), g.clone());
    }

    #[test]
    fn components_partition_and_are_maximal(g in arb_graph(8)) {
        let comps = g.connected_components();
        let mut union = 0u64;
        for &c in &comps {
            prop_assert_eq!(union & c, 0);
            union |= c;
            prop_assert!(g.is_connected_subset(c));
            // Adding any outside node breaks connectivity.
            let mut outside = g.full_mask() & !c;
            while outside != 0 {
                let v = outside.trailing_zeros() as usize + 1;
                outside &= outside - 1;
                prop_assert!(!g.is_connected_subset(c | node_bit(v)));
            }
        }
        prop_assert_eq!(union, g.full_mask());
    }

    #[test]
    fn extension_order_prefixes_connected(g in arb_connected_graph(8), seed_node in 1usize..=8) {
        let seed = [(seed_node - 1) % g.node_count() + 1];
        let order = g.connected_extension_order(&seed).unwrap();
        let mut prefix = 0u64;
        for &v in &order {
            prefix |= node_bit(v);
            prop_assert!(g.is_connected_subset(prefix));
        }
        prop_assert_eq!(prefix, g.full_mask());
    }

    #[test]
    fn enumerated_nested_sets_satisfy_conditions(g in arb_connected_graph(6)) {
        let b = BuildingSet::new(&g, Budget::default()).unwrap();
        for size in [g.node_count() - 1, g.node_count()] {
            for nested in b.nested_sets_of_size(size, Budget::default()).unwrap() {
                prop_assert!(b.is_nested_set(&nested).unwrap());
            }
        }
    }

    #[test]
    fn random_points_locate_in_the_fan(g in arb_connected_graph(5), coords in prop::collection::vec(-50i64..=50, 4)) {
        let fan = Fan::build(&g, Budget::default()).unwrap();
        let x: Vec<i64> = coords[..fan.dim].to_vec();
        let loc = fan.locate(&x);
        prop_assert!(!loc.containing.is_empty());
        prop_assert!(loc.interior.len() <= 1);
    }
}
