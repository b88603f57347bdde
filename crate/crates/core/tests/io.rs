use chebyshev_core::io::{
    execute, golden, parse_instance, parse_str, run, RunOptions, Task, EXIT_CERTIFIED, EXIT_ERROR,
    EXIT_UNCERTIFIED, FIGURE_FILE, GOLDEN, RECORD_FILE, TABLE_FILE,
};
use chebyshev_core::Error;

fn record(name: &str) -> toml::Table {
    let inst = parse_str(golden(name).unwrap()).unwrap();
    toml::from_str(&execute(&inst, RunOptions::default()).record).unwrap()
}

fn num(t: &toml::Table, section: &str, key: &str) -> f64 {
    t[section][key].as_float().unwrap()
}

#[test]
fn golden_instances_round_trip_through_toml() {
    for (name, text) in GOLDEN {
        let inst = parse_str(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let again = parse_str(&inst.to_toml()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(inst, again, "{name}");
    }
}

#[test]
fn golden_exit_codes() {
    for (name, text) in GOLDEN {
        let out = execute(&parse_str(text).unwrap(), RunOptions::default());
        let expected = if name == "triangle-oracle" {
            EXIT_UNCERTIFIED
        } else {
            EXIT_CERTIFIED
        };
        assert_eq!(out.exit_code, expected, "{name}: {}", out.record);
        let parsed: toml::Table = toml::from_str(&out.record).unwrap();
        assert_eq!(parsed["exit-code"].as_integer(), Some(i64::from(expected)));
    }
}

#[test]
fn golden_values() {
    let sq = record("square-corners");
    assert!((num(&sq, "result", "radius") - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

    let net = record("square-two-net");
    assert_eq!(num(&net, "result", "covering-radius"), 0.5);

    let fermat = record("triangle-fermat");
    assert!((num(&fermat, "result", "radius") - 3f64.sqrt()).abs() < 1e-9);

    let gap = record("line-gap");
    let centers = gap["result"]["new-centers"].as_array().unwrap();
    let flat: Vec<f64> = centers
        .iter()
        .map(|c| c.as_array().unwrap()[0].as_float().unwrap())
        .collect();
    assert_eq!(flat, vec![-2.0, 6.0]);

    let eq = record("equilateral-intersect");
    let depth = num(&eq, "result", "depth");
    assert!((depth - (2.0 / 3f64.sqrt() - 1.05)).abs() < 1e-9);
}

#[test]
fn run_writes_record_table_and_figure() {
    let dir = tempfile::tempdir().unwrap();
    for (name, text) in GOLDEN {
        let out_dir = dir.path().join(name);
        let inst = parse_str(text).unwrap();
        let out = run(&inst, &out_dir, RunOptions { svg: true }).unwrap();
        let written = std::fs::read_to_string(out_dir.join(RECORD_FILE)).unwrap();
        assert_eq!(written, out.record);
        let table = std::fs::read_to_string(out_dir.join(TABLE_FILE)).unwrap();
        let mut reader = csv::Reader::from_reader(table.as_bytes());
        let width = reader.headers().unwrap().len();
        let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
        assert!(!rows.is_empty(), "{name}");
        assert!(rows.iter().all(|r| r.len() == width), "{name}");
        let planar = inst.space().is_some_and(|s| s.dim() == 2);
        if planar || matches!(inst.task, Task::Sweep { .. }) {
            let svg = std::fs::read_to_string(out_dir.join(FIGURE_FILE)).unwrap();
            assert!(
                svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"),
                "{name}"
            );
        }
    }
}

#[test]
fn parse_instance_reads_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("case.toml");
    std::fs::write(&path, golden("square-corners").unwrap()).unwrap();
    assert_eq!(parse_instance(&path).unwrap().task_name(), "center");
    assert!(matches!(
        parse_instance(dir.path().join("missing.toml")),
        Err(Error::Io(_))
    ));
}

#[test]
fn schema_errors() {
    let cases = [
        "task = \"center\"\npoints = [[0.0]]\nbogus = 1\n[space]\ndim = 1\nnorm = \"l2\"\n",
        "task = \"center\"\npoints = [[0.0]]\n",
        "task = \"center\"\npoints = [[0.0]]\n[space]\ndim = 1\nnorm = \"l7\"\n",
        "task = \"center\"\npoints = [[0.0]]\nr = 2.0\n[space]\ndim = 1\nnorm = \"l2\"\n",
        "task = \"center\"\npoints = [[0.0, 1.0]]\n[space]\ndim = 1\nnorm = \"l2\"\n",
        "task = \"sweep\"\nvariant = \"x-space\"\nseed = [[0.0, 0.0]]\ndims = [4, 2]\n",
        "task = \"sweep\"\nvariant = \"z-space\"\nseed = [[0.0, 0.0]]\ndims = [2]\n",
        "task = \"nnet\"\npoints = [[0.0]]\nn = 0\n[space]\ndim = 1\nnorm = \"l2\"\n",
        "task = \"f-center\"\npoints = [[0.0]]\naggregator = { oracle = \"nope\" }\n[space]\ndim = 1\nnorm = \"l2\"\n",
        "task = \"f-center\"\npoints = [[0.0]]\naggregator = { power-sum = 0.5 }\n[space]\ndim = 1\nnorm = \"l2\"\n",
        "task = \"intersect\"\nballs = [{ center = [0.0], radius = -1.0 }]\n[space]\ndim = 1\nnorm = \"l2\"\n",
    ];
    for text in cases {
        assert!(parse_str(text).is_err(), "accepted:\n{text}");
    }
}

#[test]
fn solver_errors_exit_with_one() {
    let text = "task = \"equalize\"\nr = 0.5\nballs = [{ center = [0.0], radius = 1.0 }, { center = [5.0], radius = 1.0 }]\n[space]\ndim = 1\nnorm = \"l2\"\n";
    let out = execute(&parse_str(text).unwrap(), RunOptions::default());
    assert_eq!(out.exit_code, EXIT_ERROR);
    assert!(matches!(out.error, Some(Error::PreconditionRadius { .. })));
    let parsed: toml::Table = toml::from_str(&out.record).unwrap();
    assert_eq!(parsed["status"].as_str(), Some("error"));
}

#[test]
fn tolerance_override() {
    let inst = parse_str(golden("square-corners").unwrap()).unwrap();
    let loose = inst.clone().with_tolerance(1e-4).unwrap();
    assert_eq!(loose.tolerances.center, 1e-4);
    assert_eq!(loose.tolerances.margin, inst.tolerances.margin);
    assert!(inst.with_tolerance(-1.0).is_err());
}
