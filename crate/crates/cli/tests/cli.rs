use std::path::Path;
use std::process::{Command, Output};

fn mdca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mdca")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).unwrap()
}

#[test]
fn curvature_csv_has_one_row_per_edge() {
    let trace = json(&mdca(&["trace", "--shape", "ellipse", "--h", "0.25"]));
    let n = trace["length"].as_u64().unwrap() as usize;
    assert_eq!(trace["edges"].as_array().unwrap().len(), n);

    let text = stdout(&mdca(&["curvature", "--shape", "ellipse", "--h", "0.25", "--method", "lambda-mdca", "--format", "csv"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,mid_x,mid_y,lambda_mdca"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), n);
    for (k, row) in rows.iter().enumerate() {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 4);
        assert_eq!(cols[0], k.to_string());
        let v: f64 = cols[3].parse().unwrap();
        assert!(v.is_finite() && v >= 0.0);
    }
}

#[test]
fn curvature_defaults_to_both_estimators() {
    let v = json(&mdca(&["curvature", "--shape", "disk:5"]));
    let edges = v["edges"].as_array().unwrap();
    assert_eq!(edges.len(), 44);
    for e in edges {
        assert_eq!(e["mdca"], 0.2);
        assert_eq!(e["lambda_mdca"], 0.2);
    }
}

#[test]
fn hourglass_convergence_report() {
    let v = json(&mdca(&["convergence", "--shape", "hourglass", "--method", "mdca"]));
    assert_eq!(v["method"], "mdca");
    assert_eq!(v["rows"].as_array().unwrap().len(), 7);
    let slope = v["slope_max"].as_f64().unwrap();
    assert!((slope - 0.36).abs() <= 0.15, "slope_max {slope}");
}

#[test]
fn convergence_csv_lists_both_methods() {
    let text = stdout(&mdca(&["convergence", "--shape", "ellipse", "--resolutions", "1,0.5,0.25", "--format", "csv"]));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "shape,method,h,avg,max,edges,arcs,excluded,slope_avg,slope_max");
    assert_eq!(lines.len(), 7);
    assert!(lines[1].starts_with("ellipse,mdca,1,"));
    assert!(lines[6].starts_with("ellipse,lambda-mdca,0.25,"));
}

fn write_pbm(dir: &Path, body: &str) -> String {
    let path = dir.join("blob.pbm");
    std::fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn single_pixel_image_rasterizes_to_one_entry() {
    let dir = tempfile::tempdir().unwrap();
    let img = write_pbm(dir.path(), "P1\n3 3\n0 0 0\n0 1 0\n0 0 0\n");
    let out = dir.path().join("pixels.json");
    let status = mdca(&["rasterize", "--image", &img, "--h", "1", "--output", out.to_str().unwrap()]);
    assert!(status.status.success());
    assert!(status.stdout.is_empty(), "data must go to the output file only");
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(v["count"], 1);
    assert_eq!(v["pixels"], serde_json::json!([[1, 1]]));
}

#[test]
fn single_pixel_boundary_is_one_point_circle() {
    let dir = tempfile::tempdir().unwrap();
    let img = write_pbm(dir.path(), "P1\n3 3\n0 0 0\n0 1 0\n0 0 0\n");
    let v = json(&mdca(&["mdca", "--image", &img]));
    assert_eq!(v["curve_length"], 4);
    let arcs = v["arcs"].as_array().unwrap();
    assert_eq!(arcs.len(), 1);
    assert_eq!(arcs[0]["radius"], 0.0);
    // infinite curvature has no JSON number
    assert!(arcs[0]["k_h"].is_null());
    let text = stdout(&mdca(&["mdca", "--image", &img, "--format", "csv"]));
    assert_eq!(text.lines().nth(1), Some("0,0,3,4,1.5,1.5,0,inf,inner"));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["mdca", "--shape", "gummybear", "--h", "0.5"][..],
        &["curvature", "--shape", "rhombus", "--h", "0.5", "--format", "csv"][..],
        &["convergence", "--shape", "hourglass", "--resolutions", "1,0.5,0.25,0.125"][..],
    ] {
        let a = stdout(&mdca(args));
        let b = stdout(&mdca(args));
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn floats_have_at_most_twelve_significant_digits() {
    let text = stdout(&mdca(&["mdca", "--shape", "ellipse", "--format", "csv"]));
    for field in text.lines().skip(1).flat_map(|l| l.split(',')) {
        if field.contains('.') {
            let digits = field.split('e').next().unwrap().chars().filter(char::is_ascii_digit).count();
            let leading = field.trim_start_matches('-').trim_start_matches(['0', '.']).len();
            assert!(digits.min(leading) <= 12, "{field}");
        }
    }
}

#[test]
fn config_file_supplies_a_polynomial_shape() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{
            "shape": {
                "name": "unit-circle-x4",
                "terms": [{"coef": 1, "px": 2, "py": 0}, {"coef": 1, "px": 0, "py": 2}, {"coef": -16, "px": 0, "py": 0}],
                "bounds": {"min": {"x": -4.5, "y": -4.5}, "max": {"x": 4.5, "y": 4.5}}
            },
            "h": 0.5,
            "method": "mdca",
            "format": "csv"
        }"#,
    )
    .unwrap();
    let text = stdout(&mdca(&["curvature", "--config", cfg.to_str().unwrap()]));
    assert!(text.starts_with("index,mid_x,mid_y,mdca\n"));
    for row in text.lines().skip(1) {
        assert_eq!(row.rsplit(',').next(), Some("0.25"));
    }
    // flags override the config
    let v = json(&mdca(&["trace", "--config", cfg.to_str().unwrap(), "--shape", "disk:3", "--format", "json"]));
    assert_eq!(v["source"], "disk(r=3)");
}

#[test]
fn usage_errors_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_cfg = dir.path().join("bad.json");
    std::fs::write(&bad_cfg, r#"{"shape": "ellipse", "colour": "red"}"#).unwrap();
    let img = write_pbm(dir.path(), "P1\n1 1\n1\n");
    for args in [
        &["curvature"][..],
        &["trace", "--shape", "ellipse", "--image", &img][..],
        &["trace", "--shape", "pentagon"][..],
        &["trace", "--shape", "ellipse", "--h=0"][..],
        &["trace", "--shape", "ellipse", "--h=-1"][..],
        &["convergence", "--image", &img][..],
        &["convergence", "--shape", "ellipse", "--resolutions=1,-0.5"][..],
        &["curvature", "--shape", "ellipse", "--method", "median"][..],
        &["trace", "--config", bad_cfg.to_str().unwrap()][..],
        &["frobnicate"][..],
    ] {
        let out = mdca(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn pipeline_errors_exit_with_1_and_name_the_stage() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write_pbm(dir.path(), "P1\n2 2\n0 0\n0 0\n");
    let out = mdca(&["trace", "--image", &empty]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace failed"));

    let broken = write_pbm(dir.path(), "P7\n");
    let out = mdca(&["rasterize", "--image", &broken]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rasterize failed"));

    let out = mdca(&["convergence", "--shape", "ellipse", "--resolutions", "1,0.5"]);
    assert_eq!(out.status.code(), Some(0), "two rows give rows without a fit");

    let missing = dir.path().join("no/such/dir/out.json");
    let out = mdca(&["rasterize", "--shape", "disk:2", "--output", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("output failed"));
}
