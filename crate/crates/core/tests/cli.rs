use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_lazyplan");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN).current_dir(dir).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn gen_plan_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = run(d, &["gen", "generator", "--tanks", "2", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    assert!(d.join("generator-2-domain.pddl").exists() && d.join("generator-2-problem.pddl").exists());

    let o = run(d, &["plan", "generator-2-domain.pddl", "generator-2-problem.pddl", "--stats", "stats.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::write(d.join("plan.txt"), &o.stdout).unwrap();
    let stats: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("stats.json")).unwrap()).unwrap();
    for key in ["plan_happenings", "states_expanded", "lp_runs", "lp_time_ms", "stn_checks", "total_time_ms", "status"] {
        assert!(stats.get(key).is_some(), "missing {key}");
    }
    assert_eq!(stats["status"], "solved");
    assert_eq!(stats["plan_happenings"], 6);

    let o = run(d, &["validate", "generator-2-domain.pddl", "generator-2-problem.pddl", "plan.txt"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn always_lp_runs_at_least_as_many_lps() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["gen", "carpool", "--trips", "1", "--cars", "1", "--locations", "100", "--seed", "7"]);
    let lp = |strategy: &str| {
        let o = run(d, &["plan", "carpool-1-domain.pddl", "carpool-1-problem.pddl", "--strategy", strategy, "--stats", "s.json"]);
        assert_eq!(code(&o), 0);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("s.json")).unwrap()).unwrap();
        v["lp_runs"].as_u64().unwrap()
    };
    assert!(lp("always-lp") >= lp("lazy"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["gen", "generator", "--capped"]);
    let o = run(d, &["plan", "generator-1-domain.pddl", "generator-1-problem.pddl"]);
    assert_eq!(code(&o), 1);

    std::fs::write(d.join("bad.txt"), "0: (generate gen) [26]\n").unwrap();
    assert_eq!(code(&run(d, &["validate", "generator-1-domain.pddl", "generator-1-problem.pddl", "bad.txt"])), 1);
    std::fs::write(d.join("junk.txt"), "at zero do things\n").unwrap();
    assert_eq!(code(&run(d, &["validate", "generator-1-domain.pddl", "generator-1-problem.pddl", "junk.txt"])), 2);
    std::fs::write(d.join("ghost.txt"), "0: (fly gen) [2]\n").unwrap();
    assert_eq!(code(&run(d, &["validate", "generator-1-domain.pddl", "generator-1-problem.pddl", "ghost.txt"])), 2);

    assert_eq!(code(&run(d, &["plan", "generator-1-problem.pddl", "generator-1-domain.pddl"])), 2);
    assert_eq!(code(&run(d, &["plan"])), 2);
    assert_eq!(code(&run(d, &["plan", "a", "b", "--strategy", "sometimes"])), 2);

    run(d, &["gen", "carpool", "--instance", "4", "--seed", "1"]);
    let o = run(d, &["plan", "carpool-4-domain.pddl", "carpool-4-problem.pddl", "--timeout", "0"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn bench_csv_shape() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["bench", "generator", "--from", "1", "--to", "3"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "instance,plan_happenings,lp_runs,lp_time_ms,total_time_ms");
    assert_eq!(lines.len(), 4);
    for (k, l) in lines[1..].iter().enumerate() {
        let cols: Vec<&str> = l.split(',').collect();
        assert_eq!(cols.len(), 5);
        assert_eq!(cols[0], format!("generator-{}", k + 1));
        assert_eq!(cols[1].parse::<usize>().unwrap(), 2 * (k + 1) + 2);
        for c in &cols[2..] {
            c.parse::<f64>().unwrap();
        }
    }
}

#[test]
fn dumps_are_written() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    run(d, &["gen", "generator", "--tanks", "1"]);
    let o = run(d, &["plan", "generator-1-domain.pddl", "generator-1-problem.pddl", "--dump-lp", "lps", "--dump-stn", "stn.dot"]);
    assert_eq!(code(&o), 0);
    let lps: Vec<_> = std::fs::read_dir(d.join("lps")).unwrap().collect();
    assert!(!lps.is_empty());
    assert!(std::fs::read_to_string(d.join("stn.dot")).unwrap().starts_with("digraph"));
}
