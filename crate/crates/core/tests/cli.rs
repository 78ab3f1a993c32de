use std::fs;
use std::process::{Command, Output};

use ncmult::mc::read_mc_csv;

fn ncmult(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncmult"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn delta_exact_prints_the_fraction() {
    let o = ncmult(&["delta-exact", "--group", "dihedral:6", "--F", "indices:6", "--V", "indices:0,1,5,7"]);
    assert_eq!(o.status.code(), Some(0));
    let last: serde_json::Value = serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    assert_eq!(last["delta"], "3/4");
    assert_eq!(last["numerator"], 3);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(ncmult(&[]).status.code(), Some(2));
    assert_eq!(ncmult(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(ncmult(&["delta-exact", "--group", "dihedral:6"]).status.code(), Some(2));
    assert_eq!(ncmult(&["group", "--group", "tetrahedral:4"]).status.code(), Some(2));
    assert_eq!(ncmult(&["suite", "everything"]).status.code(), Some(2));
    assert_eq!(ncmult(&["key-lemma", "--samples", "many"]).status.code(), Some(2));
}

#[test]
fn help_exits_zero() {
    let o = ncmult(&["--help"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("key-lemma"));
}

#[test]
fn failed_checks_exit_one() {
    let o = ncmult(&["transference", "--alpha", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let o = ncmult(&["transference", "--alpha", "8,16,32", "--seed", "13"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn config_file_precedence_and_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "command = delta-exact\ngroup = dihedral:6\nF = indices:6\nV = all\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let a = ncmult(&["delta-exact", "--config", cfg]);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).contains("\"V\":\"all\""));
    let b = ncmult(&["delta-exact", "--config", cfg, "--V", "indices:0,1,5,7"]);
    assert!(stdout(&b).contains("\"3/4\""));

    let bad = dir.path().join("bad.cfg");
    fs::write(&bad, "group = dihedral:6\nradius = 3\n").unwrap();
    assert_eq!(ncmult(&["delta-exact", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    let wrong = dir.path().join("wrong.cfg");
    fs::write(&wrong, "command = norm\n").unwrap();
    assert_eq!(ncmult(&["delta-exact", "--config", wrong.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn key_lemma_csv_round_trips_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kl.csv");
    let args = ["key-lemma", "--rho", "2", "--samples", "50000", "--seed", "42", "--output", out.to_str().unwrap()];
    let first = ncmult(&args);
    assert_eq!(first.status.code(), Some(0));
    let written = fs::read(&out).unwrap();
    assert_eq!(written, first.stdout);
    let rows = read_mc_csv(&written[..]).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r.seed == 42 && r.samples == 50_000 && r.rho == Some(2.0)));
    assert_eq!(rows.iter().map(|r| r.eps.unwrap()).collect::<Vec<_>>(), [0.1, 0.05, 0.025]);

    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(format!("{}.meta.json", out.display())).unwrap()).unwrap();
    assert_eq!(meta["command"], "key-lemma");
    assert_eq!(meta["params"]["seed"], "42");
    assert_eq!(meta["params"]["R"], "0.5");

    let second = ncmult(&args);
    assert_eq!(second.stdout, first.stdout);
}

#[test]
fn delta_mc_modes() {
    let fin = ncmult(&["delta-mc", "--group", "dihedral:6", "--F", "indices:6", "--V", "indices:0,1,5,7", "--samples", "20000", "--seed", "5"]);
    assert_eq!(fin.status.code(), Some(0));
    let rows = read_mc_csv(&fin.stdout[..]).unwrap();
    assert!((rows[0].estimate - 0.75).abs() < 5.0 * rows[0].stderr);

    let lie = ncmult(&["delta-mc", "--model", "sl:2", "--F", "1,0,0,1", "--W", "tube:0.05,0.5", "--samples", "10000"]);
    assert_eq!(lie.status.code(), Some(0));
    assert_eq!(read_mc_csv(&lie.stdout[..]).unwrap()[0].estimate, 1.0);

    let b = ncmult(&["delta-mc", "--model", "sl:2", "--F", "random:3", "--rho", "2", "--samples", "10000", "--seed", "2"]);
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(read_mc_csv(&b.stdout[..]).unwrap().len(), 3);

    assert_eq!(ncmult(&["delta-mc", "--F", "all"]).status.code(), Some(2));
    assert_eq!(ncmult(&["delta-mc", "--model", "sl:2", "--F", "1,0,0,1", "--W", "disc:1"]).status.code(), Some(2));
}

#[test]
fn symbol_files_are_read() {
    use std::sync::Arc;
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let g = Arc::new(ncmult::group::FiniteGroup::parse("cyclic:6").unwrap());
    let m = ncmult::multiplier::Symbol::family(&g, 1, "random:4").unwrap();
    m.write_csv(fs::File::create(&path).unwrap()).unwrap();
    let spec = format!("file:{}", path.display());
    let o = ncmult(&["norm", "--group", "cyclic:6", "--symbol", &spec, "--p", "2", "--restarts", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let last: serde_json::Value = serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    let value = last["estimate"]["value"].as_f64().unwrap();
    approx::assert_abs_diff_eq!(value, m.sup_norm(), epsilon = 1e-10);
}

#[test]
fn lattice_count_and_other_commands() {
    let o = ncmult(&["lattice-count", "--rho", "3,10,40"]);
    assert_eq!(o.status.code(), Some(0));
    let mut expected = String::from("rho,count\n");
    for r in [3.0, 10.0, 40.0] {
        expected += &format!("{r},{}\n", ncmult::mc::sl2z_count(r).unwrap());
    }
    assert_eq!(stdout(&o), expected);
    for args in [
        vec!["group", "--group", "heisenberg:2", "--table", "true"],
        vec!["identity-check", "--group", "dihedral:3", "--trials", "3"],
        vec!["periodize", "--group", "cyclic:8", "--normal", "indices:0,4", "--p", "3,6", "--trials", "3"],
        vec!["restrict", "--group", "dihedral:4", "--sub", "indices:0,4", "--p", "4", "--restarts", "4"],
        vec!["lattice-maps", "--group", "cyclic:32", "--step", "4,2,1", "--trials", "1"],
        vec!["orbit-dim", "--model", "sl:3", "--samples", "5"],
        vec!["density", "--model", "sl:2", "--points", "20"],
    ] {
        assert_eq!(ncmult(&args).status.code(), Some(0), "{args:?}");
    }
}
