use std::process::{Command, Output};
use std::sync::Arc;

use abelian_pci::exactalg::AlgebraElement;
use abelian_pci::groupcore::AbelianGroup;
use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_abelian-pci")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

/// Re-parse the printed coefficients and check the defining identities exactly.
fn round_trip(group: &str) {
    let out = cli(&["pci", "--group", group]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let g = Arc::new(AbelianGroup::new(group.parse().unwrap(), 4096).unwrap());
    assert_eq!(v["order"].as_u64(), Some(g.order() as u64));
    assert_eq!(v["elements"].as_array().unwrap().len(), g.order());

    let pcis: Vec<AlgebraElement> = v["pcis"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let coeffs: Vec<String> =
                e["coeffs"].as_array().unwrap().iter().map(|c| c.as_str().unwrap().to_string()).collect();
            AlgebraElement::from_coeff_strings(&g, &coeffs).unwrap()
        })
        .collect();
    let mut dim = 0;
    for (e, entry) in pcis.iter().zip(v["pcis"].as_array().unwrap()) {
        assert!(e.is_idempotent());
        dim += entry["dimension"].as_u64().unwrap();
    }
    assert_eq!(dim, g.order() as u64);
    for i in 0..pcis.len() {
        for j in i + 1..pcis.len() {
            assert!(pcis[i].are_orthogonal(&pcis[j]).unwrap());
        }
    }
    assert_eq!(AlgebraElement::sum(&g, &pcis).unwrap(), AlgebraElement::one(&g));
}

#[test]
fn pci_output_round_trips() {
    for group in ["2:[3]", "2:[2,1]", "3:[1,1]", "2:[1];3:[1];5:[1]", "2:[1,1];3:[2]"] {
        round_trip(group);
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        ["pci", "--group", "2:[2,2]"],
        ["diagram", "--group", "3:[2,1]"],
        ["split", "--group", "2:[3]"],
        ["verify", "--group", "5:[1,1]"],
    ] {
        let a = cli(&args);
        let b = cli(&args);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_passes_and_reports_every_check() {
    let out = cli(&["verify", "--group", "2:[2,1];3:[1]", "--alternate-order"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] != "fail"));
    assert!(checks.iter().any(|c| c["name"] == "alternate_order" && c["status"] == "pass"));
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        vec!["pci", "--group", "4:[1]"],
        vec!["pci", "--group", "2:[1"],
        vec!["pci", "--group", "2:[13]"],
        vec!["pci", "--group", "2:[3]", "--max-order", "4"],
        vec!["diagram", "--group", "2:[2,1]", "--order", "9,9,9"],
        vec!["frobnicate", "--group", "2:[1]"],
    ] {
        let out = cli(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn explicit_order_changes_the_diagram_not_the_set() {
    let default = json(&cli(&["pci", "--group", "2:[2,1]"]));
    let reordered = cli(&["pci", "--group", "2:[2,1]", "--order", "1,1,1;2,1,1;2,1,2"]);
    assert_eq!(reordered.status.code(), Some(0), "{}", String::from_utf8_lossy(&reordered.stderr));
    let coeff_set = |v: &Value| {
        let mut s: Vec<String> = v["pcis"].as_array().unwrap().iter().map(|e| e["coeffs"].to_string()).collect();
        s.sort();
        s
    };
    assert_eq!(coeff_set(&default), coeff_set(&json(&reordered)));
}

#[test]
fn text_and_dot_formats_render() {
    let text = cli(&["wedderburn", "--group", "2:[2]", "--format", "text"]);
    assert_eq!(text.status.code(), Some(0));
    assert!(!text.stdout.is_empty());
    let dot = String::from_utf8(cli(&["diagram", "--group", "2:[1];3:[1]", "--format", "dot"]).stdout).unwrap();
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("cluster_p2") && dot.contains("cluster_p3"));
}
