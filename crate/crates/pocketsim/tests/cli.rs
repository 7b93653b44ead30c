use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn pocketsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pocketsim"))
        .args(args)
        .env_remove("POCKETSIM_CONFIG")
        .output()
        .expect("binary runs")
}

fn table_one(dir: &Path, extra: &str) -> String {
    let path = dir.join("table_one.conf");
    let text = "users=100\nd_sim_days=100\nd_day_s=86400\nmu_day_s=43200\nsigma_day_s=50\n\
                granularity_s=300\nT_s=6030\ngamma_a=0.19\ngamma_b=0.072\nT_e=5.79e-7\nvariant=piecewise\n";
    fs::write(&path, format!("{text}{extra}")).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn help_exits_cleanly() {
    let out = pocketsim(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    for cmd in ["generate", "analyze", "compare", "epidemic", "centrality", "blacklist", "start-times", "validate"] {
        assert!(text.contains(cmd), "{cmd} missing from help");
    }
    assert!(pocketsim(&["generate", "--help"]).status.success());
}

#[test]
fn missing_files_fail_with_a_message() {
    for args in [
        vec!["analyze", "--trace", "/no/such/trace.csv"],
        vec!["validate", "--trace", "/no/such/trace.csv"],
        vec!["generate", "--config", "/no/such.conf", "--out", "/tmp/x.csv"],
        vec!["centrality", "--trace", "/no/such/trace.csv"],
    ] {
        let out = pocketsim(&args);
        assert!(!out.status.success(), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such"), "{args:?}");
    }
}

#[test]
fn repeated_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = table_one(dir.path(), "");
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let r = pocketsim(&["generate", "--config", &config, "--seed", "12", "--out", out.to_str().unwrap()]);
        assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
        assert!(String::from_utf8_lossy(&r.stdout).contains("seed 12"));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn config_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = table_one(dir.path(), "seed=5\n");
    let out = dir.path().join("t.csv");
    let r = Command::new(env!("CARGO_BIN_EXE_pocketsim"))
        .args(["generate", "--out", out.to_str().unwrap()])
        .env("POCKETSIM_CONFIG", &config)
        .output()
        .unwrap();
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(fs::read_to_string(out).unwrap().contains("#seed=5\n"));
}

#[test]
fn silent_population_gives_an_empty_trace() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("silent.conf");
    fs::write(
        &config,
        "users=2\nd_sim_days=1\nd_day_s=86400\nmu_day_s=43200\nsigma_day_s=50\ngranularity_s=300\n\
         T_s=6030\ngamma_a=1\ngamma_b=1e12\nT_e=5.79e-7\nvariant=piecewise\nseed=1\n",
    )
    .unwrap();
    let out = dir.path().join("t.csv");
    let r = pocketsim(&["generate", "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.ends_with("i,j,start,end\n"), "{text}");
    assert!(pocketsim(&["validate", "--trace", out.to_str().unwrap()]).status.success());
}

#[test]
fn analysis_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let config = table_one(dir.path(), "seed=3\n");
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let ok = |args: &[&str]| {
        let r = pocketsim(args);
        assert!(r.status.success(), "{args:?}: {}", String::from_utf8_lossy(&r.stderr));
        String::from_utf8_lossy(&r.stdout).into_owned()
    };
    ok(&["generate", "--config", &config, "--out", &p("t.csv")]);
    ok(&["generate", "--config", &config, "--out", &p("e.csv"), "--variant", "exponential-pairwise"]);
    let summary = ok(&["analyze", "--trace", &p("t.csv"), "--out", &p("ccdf.csv")]);
    assert!(summary.contains("events:") && summary.contains("periodicity score:"), "{summary}");
    assert!(fs::read_to_string(p("ccdf.csv")).unwrap().starts_with("t_seconds,ccdf\n"));

    let same = ok(&["compare", "--trace", &p("t.csv"), "--reference-ccdf", &p("ccdf.csv"), "--format", "jsonl"]);
    let row: serde_json::Value = serde_json::from_str(same.lines().next().unwrap()).unwrap();
    assert_eq!(row["avg_rel_error"], 0.0);
    let diff = ok(&["compare", "--trace", &p("e.csv"), "--reference", &p("t.csv")]);
    assert!(diff.starts_with("metric,avg_rel_error,max_rel_error,max_error_location\nccdf,"), "{diff}");
    assert!(diff.contains("\ncontact_count,"));

    let cent = ok(&["centrality", "--trace", &p("t.csv")]);
    assert_eq!(cent.lines().count(), 101);
    let curve = ok(&["epidemic", "--trace", &p("t.csv"), "--runs", "20", "--seed", "1", "--time-of-day", "6:00"]);
    assert!(curve.starts_with("t_seconds,fraction\n0,"));
    ok(&["blacklist", "--trace", &p("t.csv"), "--k", "10", "--runs", "20", "--seed", "1",
        "--out-centrality", &p("bc.csv"), "--out-random", &p("br.csv")]);
    ok(&["start-times", "--trace", &p("t.csv"), "--times", "06:00,18:00", "--runs", "20", "--seed", "1",
        "--out-dir", &p("st")]);
    assert!(Path::new(&p("st/start_0600.csv")).exists() && Path::new(&p("st/start_1800.csv")).exists());
}

#[test]
fn validation_reports_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    fs::write(
        &path,
        "#n_users=3\n#D_sim=1\n#D_day=86400\n#granularity=300\n#seed=none\n#variant=imported\n\
         #version=0.1.0\ni,j,start,end\n0,1,600,300\n0,2,900,1200\n",
    )
    .unwrap();
    let r = pocketsim(&["validate", "--trace", path.to_str().unwrap()]);
    assert!(!r.status.success());
    assert!(String::from_utf8_lossy(&r.stdout).contains("line 9:"));
}

#[test]
fn import_command() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("raw.csv");
    fs::write(&input, "a,b,t0,t1\n0,1,100,200\n1,0,150,300\n").unwrap();
    let out = dir.path().join("t.csv");
    let r = pocketsim(&[
        "import", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(),
        "--granularity", "50", "--columns", "a,b,t0,t1",
    ]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    assert!(fs::read_to_string(out).unwrap().ends_with("i,j,start,end\n0,1,100,300\n"));
}
