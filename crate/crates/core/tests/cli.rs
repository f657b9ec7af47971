use std::path::Path;
use std::process::{Command, Output};

fn geocast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geocast"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn fermat_reports_every_method() {
    let o = geocast(&[
        "fermat", "--source", "0,0", "--dest", "10,0", "--dest", "5,0.5", "--step", "0.1",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines[0], "method,x,y,total_distance_m,note");
    assert!(lines[1].starts_with("grid_minima,"));
    assert_eq!(lines[2], "weiszfeld,5,0.5,10.0499,");
    assert_eq!(lines[3], "torricelli,5,0.5,10.0499,");
    assert_eq!(
        text,
        stdout(&geocast(&[
            "fermat", "--source", "0,0", "--dest", "10,0", "--dest", "5,0.5", "--step", "0.1"
        ]))
    );

    let o = geocast(&[
        "fermat", "--source", "0,0", "--dest", "10,0", "--dest", "3,0",
    ]);
    assert!(stdout(&o).contains("torricelli,3,0,10,degenerate"));
}

#[test]
fn fermat_reads_anchor_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "a.txt", "# square\n0,0\n4,0\n0,4\n4,4\n");
    let o = geocast(&["fermat", "--anchors", &f]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("grid_minima,2,2,"));
    assert!(!stdout(&o).contains("torricelli"));
}

#[test]
fn route_on_loaded_topology() {
    let dir = tempfile::tempdir().unwrap();
    let topo = write(
        dir.path(),
        "t.csv",
        "id,x,y\n0,150,150\n1,0,50\n2,8,50\n3,9.5,50\n",
    );
    let svg = dir.path().join("r.svg");
    let run = |scheme: &str| {
        geocast(&[
            "route",
            "--scheme",
            scheme,
            "--topology",
            &topo,
            "--arena",
            "200x200",
            "--radius",
            "10",
            "--source",
            "1",
            "--destination",
            "2",
            "--svg",
            svg.to_str().unwrap(),
        ])
    };
    let g = run("greedy");
    assert!(g.status.success());
    assert_eq!(
        stdout(&g),
        "leg,seq,node_id,x,y,hop_distance_m\n0,0,1,0,50,0\n0,1,3,9.5,50,9.5\n0,2,1,0,50,9.5\n"
    );
    assert!(String::from_utf8_lossy(&g.stderr).contains("status=loop_detected hops=2"));
    let i = run("imin");
    assert_eq!(
        stdout(&i),
        "leg,seq,node_id,x,y,hop_distance_m\n0,0,1,0,50,0\n0,1,2,8,50,8\n"
    );
    assert!(std::fs::read_to_string(&svg).unwrap().contains("<polyline"));
}

#[test]
fn route_is_reproducible() {
    let args = [
        "route",
        "--nodes",
        "150",
        "--seed",
        "4",
        "--source",
        "0",
        "--destination",
        "7",
    ];
    let (a, b) = (geocast(&args), geocast(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn simulate_is_byte_identical_and_mode_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "e.conf",
        "seeds = 4\ngrid.step = 4\nregions = \"1500,900; 1650,250\"\n",
    );
    let a = geocast(&["simulate", &cfg]);
    let b = geocast(&["simulate", &cfg, "--sequential"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 1 + 4 * 3);

    let out = dir.path().join("m.csv");
    let svg = dir.path().join("svg");
    let c = geocast(&[
        "simulate",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--svg",
        svg.to_str().unwrap(),
    ]);
    assert!(c.status.success());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
    for seed in 1..=4 {
        assert!(svg.join(format!("seed_{seed}.svg")).exists());
    }
}

#[test]
fn sweep_prints_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "e.conf",
        "seeds = 2\ngrid.step = 8\nregions = \"1500,900\"\n",
    );
    let o = geocast(&["sweep", &cfg, "--max-regions", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("scheme,region_count,runs,delivered,"));
    assert_eq!(text.lines().count(), 1 + 2 * 3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(geocast(&["--help"]).status.code(), Some(0));
    assert_eq!(geocast(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(geocast(&["fermat"]).status.code(), Some(1));
    assert_eq!(
        geocast(&["fermat", "--source", "0,nan", "--dest", "1,1"])
            .status
            .code(),
        Some(1)
    );

    let bad = write(
        dir.path(),
        "bad.conf",
        "nodes.count = 0\nregions = \"1,1\"\n",
    );
    let o = geocast(&["simulate", &bad]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("nodes.count"));
    assert_eq!(
        geocast(&["simulate", "/nonexistent/e.conf"]).status.code(),
        Some(1)
    );
    assert_eq!(
        geocast(&["route", "--source", "0", "--destination", "999"])
            .status
            .code(),
        Some(1)
    );

    let ok = write(
        dir.path(),
        "ok.conf",
        "seeds = 1\ngrid.step = 8\nregions = \"1500,900; 1650,250\"\n",
    );
    let o = geocast(&["simulate", &ok, "--out", "/nonexistent/dir/m.csv"]);
    assert_eq!(o.status.code(), Some(2));
}
