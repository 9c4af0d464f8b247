use proptest::prelude::*;

use snakeplan::graph::{Graph, GridGraph};
use snakeplan::io::{parse_certificate, parse_grid, parse_instance, parse_route, write_certificate, write_grid, write_instance, write_route};
use snakeplan::snake::{all_configurations, solve_bfs_oracle, Instance, OracleOptions};
use snakeplan::wall::{elementary_wall, WallCertificate};

fn arb_instance() -> impl Strategy<Value = Instance> {
    (3usize..8, 2usize..4, any::<u64>(), proptest::collection::vec(any::<bool>(), 28)).prop_filter_map(
        "needs a configuration",
        |(n, k, pick, bits)| {
            let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
            let mut es = Vec::new();
            let mut b = bits.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    if b.next().unwrap_or(false) {
                        es.push((names[i].clone(), names[j].clone()));
                    }
                }
            }
            let g = Graph::from_edges(&names, &es).unwrap();
            let confs = all_configurations(&g, k);
            if confs.is_empty() {
                return None;
            }
            let a = confs[(pick % confs.len() as u64) as usize].clone();
            let f = confs[((pick >> 32) % confs.len() as u64) as usize].clone();
            Some(Instance::new(g, k, a, f).unwrap())
        },
    )
}

fn arb_grid() -> impl Strategy<Value = GridGraph> {
    proptest::collection::btree_set((0u32..4, 0u32..4), 2..12).prop_map(GridGraph::from_cells)
}

proptest! {
    #[test]
    fn instance_round_trip(inst in arb_instance()) {
        let text = write_instance(&inst, &["generated".into()]);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back, &["generated".into()]), text);
    }

    #[test]
    fn emitted_routes_round_trip(inst in arb_instance()) {
        let sol = solve_bfs_oracle(&inst, &OracleOptions::default()).unwrap();
        if let Some(route) = sol.route {
            let back = parse_route(&write_route(&route, &inst.graph), &inst.graph).unwrap();
            prop_assert!(back.check(&inst).is_ok());
            prop_assert_eq!(back, route);
        }
    }

    #[test]
    fn grid_round_trip(g in arb_grid()) {
        prop_assert_eq!(parse_grid(&write_grid(&g)).unwrap(), g);
    }
}

#[test]
fn grid_instances_use_grid_mode() {
    let g = GridGraph::rectangle(0, 0, 2, 3).into_graph();
    let inst = Instance::from_names(g, &["1,0", "0,0"], &["1,2", "1,1"]).unwrap();
    let text = write_instance(&inst, &[]);
    assert!(text.contains("vertices: grid\n"));
    assert!(!text.contains("edges:"));
    // The same graph written explicitly normalizes to grid mode.
    let explicit = "snake-instance v1\nk: 2\nvertices:\n0,0\n0,1\n0,2\n1,0\n1,1\n1,2\nedges:\n0,0 0,1\n0,1 0,2\n1,0 1,1\n1,1 1,2\n0,0 1,0\n0,1 1,1\n0,2 1,2\ninit: 1,0 0,0\nfin: 1,2 1,1\n";
    assert_eq!(write_instance(&parse_instance(explicit).unwrap(), &[]), text);
    // Dropping one lattice edge leaves a coordinate-named graph that is not a grid graph.
    let holey = explicit.replace("0,1 1,1\n", "");
    let back = write_instance(&parse_instance(&holey).unwrap(), &[]);
    assert!(back.contains("vertices:\n") && back.contains("edges:\n"));
}

#[test]
fn subdivided_certificates_round_trip() {
    let w = elementary_wall(3).unwrap();
    let mut cert = WallCertificate::identity(3).unwrap();
    let key = *cert.paths.keys().next().unwrap();
    let (a, b) = (cert.branch[&key.0].clone(), cert.branch[&key.1].clone());
    let mut names: Vec<String> = w.names().to_vec();
    names.push("mid".into());
    let mut es: Vec<(String, String)> =
        w.edge_names().filter(|&(x, y)| !(x == a && y == b || x == b && y == a)).map(|(x, y)| (x.into(), y.into())).collect();
    es.push((a.clone(), "mid".into()));
    es.push(("mid".into(), b.clone()));
    let g = Graph::from_edges(&names, &es).unwrap();
    cert.paths.insert(key, vec![a, "mid".into(), b]);
    assert_eq!(cert.check(&g), Ok(()));
    let back = parse_certificate(&write_certificate(&cert)).unwrap();
    assert_eq!(back, cert);
    assert_eq!(back.check(&g), Ok(()));
}
