use std::fs;
use std::path::Path;
use std::process::Command;

use snakeplan::cli::{run_cli, EXIT_BUDGET, EXIT_NO, EXIT_USAGE, EXIT_YES};
use snakeplan::io::parse_instance;
use snakeplan::snake::{all_configurations, solve_bfs_oracle, OracleOptions};
use snakeplan::wall::{wall_instance, WallLayout};
use tempfile::TempDir;

const SINGLE_EDGE: &str = "snake-instance v1\nk: 2\nvertices: grid\n0,0\n0,1\ninit: 0,1 0,0\nfin: 0,0 0,1\n";
const PATH4: &str = "snake-instance v1\nk: 2\nvertices: grid\n0,0\n0,1\n0,2\n0,3\ninit: 0,1 0,0\nfin: 0,3 0,2\n";

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run_cli(std::iter::once("snakeplan").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn put(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn at(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

#[test]
fn single_edge_is_one_move() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "edge.snake", SINGLE_EDGE);
    assert_eq!(run(&["solve", "--algo", "oracle", "--instance", &inst]), (EXIT_YES, "YES 1\n".into(), String::new()));
    let (code, out, err) = run(&["solve", "--algo", "fpt", "--backend", "exhaustive", "--instance", &inst]);
    assert_eq!((code, out.as_str()), (EXIT_YES, "YES 1\n"));
    assert!(err.contains("fpt backend exhaustive\n"));
    assert!(err.contains("fpt deviations "));
}

#[test]
fn binary_exit_codes() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "edge.snake", SINGLE_EDGE);
    let bin = env!("CARGO_BIN_EXE_snakeplan");
    let out = Command::new(bin).args(["solve", "--instance", &inst]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_YES));
    assert_eq!(out.stdout, b"YES 1\n");
    let bad = put(&dir, "bad.snake", "snake-instance v1\nk: 1\n");
    let out = Command::new(bin).args(["solve", "--instance", &bad]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    let out = Command::new(bin).arg("--version").output().unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("deviation terminal-node-incoming-arcs"));
}

#[test]
fn emitted_routes_verify_and_corruption_is_located() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "p4.snake", PATH4);
    let route = at(&dir, "p4.route");
    assert_eq!(run(&["solve", "--instance", &inst, "--emit-route", &route]).0, EXIT_YES);
    let text = fs::read_to_string(&route).unwrap();
    assert_eq!(text, "snake-route v1\nstart: 0,1 0,0\nheads:\n0,2\n0,3\n");
    assert_eq!(run(&["verify-route", "--instance", &inst, "--route", &route]), (EXIT_YES, "OK 2\n".into(), String::new()));
    let bad = put(&dir, "bad.route", &text.replace("0,3\n", "0,0\n"));
    let (code, out, _) = run(&["verify-route", "--instance", &inst, "--route", &bad]);
    assert_eq!(code, EXIT_NO);
    assert_eq!(out, "FAIL step 2: `0,0` is not adjacent to the head `0,2`\n");
    let unknown = put(&dir, "unknown.route", &text.replace("0,3\n", "9,9\n"));
    assert_eq!(run(&["verify-route", "--instance", &inst, "--route", &unknown]).0, EXIT_USAGE);
}

#[test]
fn every_fpt_yes_route_verifies() {
    let dir = TempDir::new().unwrap();
    let base = parse_instance(
        "snake-instance v1\nk: 3\nvertices: grid\n0,0\n0,1\n0,2\n1,0\n1,1\n1,2\ninit: 0,0 0,1 0,2\nfin: 0,0 0,1 0,2\n",
    )
    .unwrap();
    let confs = all_configurations(&base.graph, 3);
    for (i, fin) in confs.iter().enumerate().step_by(5) {
        let inst = snakeplan::snake::Instance::new(base.graph.clone(), 3, confs[0].clone(), fin.clone()).unwrap();
        let path = put(&dir, &format!("i{i}.snake"), &snakeplan::io::write_instance(&inst, &[]));
        let route = at(&dir, &format!("i{i}.route"));
        let oracle = solve_bfs_oracle(&inst, &OracleOptions::default()).unwrap();
        let (code, out, _) = run(&["solve", "--algo", "fpt", "--backend", "exhaustive", "--instance", &path, "--emit-route", &route]);
        let expected = match oracle.shortest_length {
            Some(len) => (EXIT_YES, format!("YES {len}\n")),
            None => (EXIT_NO, "NO\n".to_string()),
        };
        assert_eq!((code, out), expected);
        if code == EXIT_YES {
            assert_eq!(run(&["verify-route", "--instance", &path, "--route", &route]).0, EXIT_YES);
        }
    }
}

#[test]
fn output_is_identical_across_workers() {
    let dir = TempDir::new().unwrap();
    let wall = at(&dir, "w.snake");
    assert_eq!(run(&["gen", "wall", "--r", "3", "--k", "3", "--layout", "return", "--out", &wall]).0, EXIT_YES);
    let mut seen = Vec::new();
    for workers in ["1", "2", "3"] {
        let route = at(&dir, &format!("w{workers}.route"));
        let args = ["solve", "--algo", "fpt", "--backend", "montecarlo", "--seed", "11", "--instance", &wall];
        let (code, out, err) = run(&[&args[..], &["--workers", workers, "--emit-route", &route]].concat());
        let route_text = fs::read_to_string(&route).unwrap_or_default();
        seen.push((code, out, err, route_text));
    }
    assert!(seen.windows(2).all(|w| w[0] == w[1]), "{seen:?}");
}

#[test]
fn generators_write_parseable_instances() {
    let dir = TempDir::new().unwrap();
    for layout in WallLayout::ALL {
        let out = at(&dir, &format!("{}.snake", layout.name()));
        assert_eq!(run(&["gen", "wall", "--r", "4", "--k", "3", "--layout", layout.name(), "--out", &out]).0, EXIT_YES);
        let text = fs::read_to_string(&out).unwrap();
        assert!(text.contains(&format!("# gen wall: r 4 k 3 layout {}\n", layout.name())));
        assert_eq!(parse_instance(&text).unwrap(), wall_instance(4, 3, layout).unwrap());
    }
    let through = at(&dir, "through.snake");
    let detached = at(&dir, "detached.snake");
    assert_eq!(run(&["solve", "--instance", &through]).0, EXIT_YES);
    assert_eq!(run(&["solve", "--instance", &detached]), (EXIT_NO, "NO\n".into(), String::new()));
    assert_eq!(run(&["gen", "wall", "--r", "1", "--k", "3", "--out", &through]).0, EXIT_USAGE);

    let square = put(&dir, "sq.grid", "snake-grid v1\n0,0\n0,1\n1,0\n1,1\n");
    let path = put(&dir, "path.grid", "snake-grid v1\n5,5\n5,6\n5,7\n5,8\n");
    let composed = at(&dir, "c.snake");
    let report = at(&dir, "c.report");
    let (code, out, _) = run(&["gen", "hamtosna", "--inputs", &path, &square, "--out", &composed, "--report", &report]);
    assert_eq!((code, out.as_str()), (EXIT_YES, "vertices 24 edges 24\n"));
    let text = fs::read_to_string(&composed).unwrap();
    let sq_digest = snakeplan::io::digest(b"snake-grid v1\n0,0\n0,1\n1,0\n1,1\n");
    assert!(text.contains(&format!("# input 2 sha256 {sq_digest} column 10\n")), "{text}");
    assert!(text.contains("vertices: grid\n"));
    assert_eq!(run(&["solve", "--instance", &composed]).0, EXIT_YES);
    let rep = fs::read_to_string(&report).unwrap();
    assert!(rep.ends_with("composed yes\nagreement true\n"), "{rep}");
    assert!(rep.starts_with("input 1 hamiltonian=no column=5 checkpoint=no\n"), "{rep}");
    let tiny = put(&dir, "tiny.grid", "snake-grid v1\n0,0\n0,1\n");
    assert_eq!(run(&["gen", "hamtosna", "--inputs", &tiny, "--out", &composed]).0, EXIT_USAGE);
}

#[test]
fn reduce_tw_contracts_and_reports() {
    let dir = TempDir::new().unwrap();
    let wall = at(&dir, "w14.snake");
    assert_eq!(run(&["gen", "wall", "--r", "14", "--k", "2", "--layout", "detached", "--out", &wall]).0, EXIT_YES);
    let reduced = at(&dir, "reduced.snake");
    let report = at(&dir, "reduced.report");
    let (code, out, _) = run(&["reduce-tw", "--in", &wall, "--out", &reduced, "--report", &report]);
    assert_eq!(code, EXIT_YES);
    assert!(out.starts_with("contractions "));
    let rep = fs::read_to_string(&report).unwrap();
    assert!(rep.starts_with("k 2\nwall-size 14\nsubwall-size 5\n"), "{rep}");
    assert!(rep.contains("step 1 contract "));
    assert!(rep.trim_end().lines().last().unwrap().starts_with("termination "));
    let before = parse_instance(&fs::read_to_string(&wall).unwrap()).unwrap();
    let after = parse_instance(&fs::read_to_string(&reduced).unwrap()).unwrap();
    assert!(after.graph.n() < before.graph.n());
    assert_eq!(run(&["solve", "--instance", &reduced]).0, EXIT_NO);

    let budget = run(&["reduce-tw", "--in", &wall, "--out", &reduced, "--report", &report, "--strategy", "brute-force", "--budget", "5"]);
    assert_eq!(budget.0, EXIT_BUDGET);
    assert_eq!(run(&["reduce-tw", "--in", &wall, "--out", &reduced, "--report", &report, "--strategy", "external"]).0, EXIT_USAGE);
}

#[test]
fn reduce_tw_with_external_certificate() {
    let dir = TempDir::new().unwrap();
    let wall = at(&dir, "w14.snake");
    assert_eq!(run(&["gen", "wall", "--r", "14", "--k", "2", "--out", &wall]).0, EXIT_YES);
    let cert = snakeplan::wall::WallCertificate::identity(14).unwrap();
    let cert_path = put(&dir, "w14.cert", &snakeplan::io::write_certificate(&cert));
    let reduced = at(&dir, "r.snake");
    let report = at(&dir, "r.report");
    let args = ["reduce-tw", "--in", &wall, "--out", &reduced, "--report", &report, "--strategy", "external", "--certificate", &cert_path];
    let (code, out, _) = run(&args);
    assert_eq!((code, out.as_str()), (EXIT_YES, format!("contractions 1 vertices {}\n", 2 * 14 * 14 - 2 + 4 - 1).as_str()));
}

#[test]
fn render_writes_one_frame_per_configuration() {
    let dir = TempDir::new().unwrap();
    let inst = put(&dir, "p4.snake", PATH4);
    let route = at(&dir, "p4.route");
    assert_eq!(run(&["solve", "--instance", &inst, "--emit-route", &route]).0, EXIT_YES);
    let frames = at(&dir, "frames");
    assert_eq!(run(&["render", "--instance", &inst, "--route", &route, "--out", &frames]), (EXIT_YES, "frames 3\n".into(), String::new()));
    let first = fs::read_to_string(Path::new(&frames).join("frame_0000.txt")).unwrap();
    assert_eq!(first, "oH..\n");
    let last = fs::read_to_string(Path::new(&frames).join("frame_0002.txt")).unwrap();
    assert_eq!(last, "..oH\n");
    let svg = at(&dir, "svg");
    assert_eq!(run(&["render", "--instance", &inst, "--route", &route, "--format", "svg", "--out", &svg]).0, EXIT_YES);
    assert!(Path::new(&svg).join("frame_0001.svg").exists());

    let wall = at(&dir, "w.snake");
    assert_eq!(run(&["gen", "wall", "--r", "3", "--k", "2", "--out", &wall]).0, EXIT_YES);
    let wroute = at(&dir, "w.route");
    assert_eq!(run(&["solve", "--instance", &wall, "--emit-route", &wroute]).0, EXIT_YES);
    assert_eq!(run(&["render", "--instance", &wall, "--route", &wroute, "--out", &frames]).0, EXIT_USAGE);
}
