use std::{path::PathBuf, thread, time::Duration};

use steiner_bench::{
    read_best_known,
    record::{read_records, records_from_csv, records_to_csv},
    report::{aggregate, emit_plots, histogram_csv, scatter_csv, solved_counts_csv, write_aggregate, Column},
    run_one, run_suite,
    runner::run_solver,
    Algo, AlgoSpec, BestKnown, RunRecord, Status, SuiteConfig,
};
use steiner_core::{fixtures::star3, Edge, Error, SteinerTree};

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/fixtures")
}

fn best3() -> BestKnown {
    BestKnown { cost: 3, class: "Fx".into() }
}

const LONG: Duration = Duration::from_secs(60);

#[test]
fn exact_on_a_known_optimum_has_ratio_one() {
    let r = run_one(&star3(), Some(&best3()), &AlgoSpec::new(Algo::Dw), LONG);
    assert_eq!(r.status, Status::Ok);
    assert_eq!(r.cost, Some(3));
    assert_eq!(r.ratio, Some(1.0));
    assert_eq!(r.class, "Fx");
}

#[test]
fn greedy_on_the_star_is_optimal() {
    // The terminal distance network has weight 4, but its paths share the
    // spoke into the centre and the recorded tree costs 3.
    let r = run_one(&star3(), Some(&best3()), &AlgoSpec::new(Algo::Greedy), LONG);
    assert_eq!((r.cost, r.ratio), (Some(3), Some(1.0)));
}

#[test]
fn every_algorithm_records_a_valid_tree() {
    for spec in [
        AlgoSpec::new(Algo::Greedy),
        AlgoSpec::new(Algo::Zel),
        AlgoSpec::new(Algo::Dw),
        AlgoSpec::ir(2, 1),
        AlgoSpec::ir(3, 1),
        AlgoSpec { ir_cache: false, ..AlgoSpec::ir(3, 1) },
        AlgoSpec { restarts: 4, ..AlgoSpec::new(Algo::Msls) },
    ] {
        let r = run_one(&star3(), Some(&best3()), &spec, LONG);
        assert_eq!(r.status, Status::Ok, "{}", spec.label());
        assert!(r.ratio.unwrap() >= 1.0);
    }
    assert_eq!(AlgoSpec { ir_cache: false, ..AlgoSpec::ir(5, 0) }.label(), "ir-k5-nocache");
}

#[test]
fn sleeping_solver_times_out() {
    let r = run_solver(&star3(), None, "sleepy", Duration::from_millis(20), |_, _| {
        thread::sleep(Duration::from_millis(80));
        Ok(SteinerTree::empty())
    });
    assert_eq!(r.status, Status::Timeout);
    assert_eq!(r.cost, None);

    let polite = run_solver(&star3(), None, "polite", Duration::from_millis(20), |_, d| loop {
        d.check()?;
        thread::sleep(Duration::from_millis(1));
    });
    assert_eq!(polite.status, Status::Timeout);
}

#[test]
fn invalid_trees_are_errors() {
    let r = run_solver(&star3(), Some(&best3()), "liar", LONG, |_, _| {
        Ok(SteinerTree::from_edges(vec![Edge::new(0, 3, 1), Edge::new(1, 3, 1)]))
    });
    assert_eq!(r.status, Status::Error);
    assert!(r.message.unwrap().contains("INVALID TREE"));
    let failed = run_solver(&star3(), None, "broken", LONG, |_, _| Err(Error::InvalidState("boom".into())));
    assert_eq!(failed.status, Status::Error);
}

#[test]
fn suite_runs_every_pair_in_order() {
    let table = read_best_known(&fixtures().join("fixtures.best.csv")).unwrap();
    let specs = [AlgoSpec::new(Algo::Zel), AlgoSpec::new(Algo::Greedy), AlgoSpec::ir(3, 7)];
    let config = SuiteConfig { timeout: LONG, jobs: 3, isolate: None };
    let records = run_suite(&fixtures(), &table, &specs, &config).unwrap();
    let keys: Vec<(&str, &str)> = records.iter().map(|r| (r.instance.as_str(), r.algorithm.as_str())).collect();
    assert_eq!(
        keys,
        vec![
            ("path3", "greedy"),
            ("path3", "ir-k3"),
            ("path3", "zel"),
            ("star3", "greedy"),
            ("star3", "ir-k3"),
            ("star3", "zel")
        ]
    );
    assert!(records.iter().all(|r| r.status == Status::Ok && r.ratio == Some(1.0)));

    let again = run_suite(&fixtures(), &table, &specs, &SuiteConfig { jobs: 1, ..config }).unwrap();
    let strip = |rs: &[RunRecord]| rs.iter().map(|r| RunRecord { seconds: 0.0, ..r.clone() }).collect::<Vec<_>>();
    assert_eq!(strip(&records), strip(&again));
    assert_eq!(histogram_csv(&records, &["greedy", "zel"]), histogram_csv(&again, &["greedy", "zel"]));
}

#[test]
fn unparsable_instances_become_error_records() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.stp"), "not an stp file\n").unwrap();
    let config = SuiteConfig { timeout: LONG, jobs: 1, isolate: None };
    let records = run_suite(dir.path(), &Default::default(), &[AlgoSpec::new(Algo::Greedy)], &config).unwrap();
    assert_eq!(records.len(), 1);
    assert_eq!(records[0].status, Status::Error);
    assert!(records[0].message.as_deref().unwrap().contains("line 1"));
}

fn rec(instance: &str, class: &str, algo: &str, ratio: f64, seconds: f64) -> RunRecord {
    let mut r = RunRecord::new(instance, class, algo);
    r.ratio = Some(ratio);
    r.cost = Some(1);
    r.seconds = seconds;
    r
}

#[test]
fn single_record_aggregate_is_that_record() {
    let records = [rec("a", "Ls", "greedy", 1.25, 0.5)];
    let agg = aggregate(&records, &[Column::new("greedy")]);
    assert_eq!(agg.rows.len(), 1);
    assert_eq!(agg.rows[0].means, vec![(1.25, 0.5)]);
    assert_eq!(agg.to_csv(), "class,greedy_ratio,greedy_time\nLs,1.250,0.500\nAverage,1.250,0.500\n");
}

#[test]
fn aggregate_uses_the_common_solved_set() {
    let mut timeout = RunRecord::new("b", "Ls", "zel");
    timeout.status = Status::Timeout;
    let records = vec![
        rec("a", "Ls", "greedy", 1.2, 1.0),
        rec("a", "Ls", "zel", 1.1, 2.0),
        rec("b", "Ls", "greedy", 2.0, 1.0),
        timeout,
        rec("c", "Pm", "greedy", 1.0, 3.0),
        rec("c", "Pm", "zel", 1.0, 5.0),
    ];
    let agg = aggregate(&records, &[Column::new("greedy"), Column::new("zel").ratio_only()]);
    assert_eq!(agg.to_csv(), "class,greedy_ratio,greedy_time,zel_ratio\nLs,1.200,1.000,1.100\nPm,1.000,3.000,1.000\nAverage,1.100,2.000,1.050\n");
    assert_eq!(solved_counts_csv(&records, &[Column::new("greedy"), Column::new("zel")]), "Algorithm,Solved cases,Percent\ngreedy,3,100%\nzel,2,67%\n");
}

#[test]
fn plot_data() {
    let pair = [rec("a", "Ls", "greedy", 1.0, 0.0), rec("a", "Ls", "zel", 1.05, 0.0)];
    assert_eq!(scatter_csv(&pair, "greedy", "zel", &[]), "instance,greedy,zel\na,1.000,1.050\n");

    let ones: Vec<RunRecord> =
        ["a", "b", "c"].iter().flat_map(|i| [rec(i, "Ls", "x", 1.0, 0.0), rec(i, "Ls", "y", 1.0, 0.0)]).collect();
    assert_eq!(histogram_csv(&ones, &["x", "y"]), "bin,x,y\n1.00,3,3\n");

    let spread = [rec("a", "Ls", "x", 1.15, 0.0), rec("b", "Ls", "x", 1.13, 0.0)];
    assert_eq!(histogram_csv(&spread, &["x"]), "bin,x\n1.13,1\n1.14,0\n1.15,1\n");
}

#[test]
fn files_round_trip_and_emit() {
    let dir = tempfile::tempdir().unwrap();
    let mut records: Vec<RunRecord> = Vec::new();
    for (i, k) in [2usize, 3, 4, 5].iter().enumerate() {
        let mut r = rec("a", "Ls", &format!("ir-k{k}"), 1.0 + i as f64 / 100.0, 0.1);
        r.k = Some(*k);
        records.push(r);
    }
    let csv = records_to_csv(&records).unwrap();
    assert_eq!(records_from_csv(&csv).unwrap(), records);
    let json_path = dir.path().join("r.json");
    std::fs::write(&json_path, serde_json::to_string(&records).unwrap()).unwrap();
    assert_eq!(read_records(&json_path).unwrap(), records);

    let tables = write_aggregate(&records, dir.path()).unwrap();
    assert_eq!(tables.len(), 3);
    let t3 = std::fs::read_to_string(dir.path().join("table3.csv")).unwrap();
    assert!(t3.starts_with("class,ir-k2_ratio,ir-k2_time,ir-k3_ratio"));
    let plots = emit_plots(&records, dir.path()).unwrap();
    // one histogram and six scatter files for four values of k
    assert_eq!(plots.len(), 7);
}

#[test]
fn multistart_is_reported_as_ms_naive() {
    let dir = tempfile::tempdir().unwrap();
    let records = [rec("a", "Ls", "zel-two-largest", 1.0, 0.1), rec("a", "Ls", "msls", 1.0, 0.2)];
    write_aggregate(&records, dir.path()).unwrap();
    let t1 = std::fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert_eq!(t1, "Algorithm,Solved cases,Percent\nzel-two-largest,1,100%\nMS-naive,1,100%\n");
    let t2 = std::fs::read_to_string(dir.path().join("table2.csv")).unwrap();
    assert!(t2.starts_with("class,zel-two-largest_ratio,zel-two-largest_time,MS-naive_ratio"));
    assert_eq!(AlgoSpec { zel_two_largest: true, ..AlgoSpec::new(Algo::Zel) }.label(), "zel-two-largest");
}
