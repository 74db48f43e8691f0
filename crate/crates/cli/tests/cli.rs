use std::path::PathBuf;

use lieclass::run_args;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares with the stored file; `LIECLASS_BLESS=1` rewrites it.
fn assert_golden(name: &str, args: &[&str]) {
    let out = run_args(std::iter::once("lieclass").chain(args.iter().copied()));
    let path = golden(name);
    if std::env::var("LIECLASS_BLESS").is_ok_and(|v| v == "1") {
        std::fs::write(&path, &out.text).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {}", path.display(), e));
    assert_eq!(out.text, want, "{} drifted from its golden file", name);
}

#[test]
fn golden_brackets() {
    assert_golden("brackets.json", &["brackets", "--format", "json"]);
}

#[test]
fn golden_adjoint() {
    assert_golden("adjoint.json", &["adjoint", "--format", "json"]);
}

#[test]
fn golden_optsys() {
    assert_golden("optsys.json", &["optsys", "--format", "json"]);
}

#[test]
fn golden_classify() {
    assert_golden("classify.json", &["classify", "--format", "json"]);
}

#[test]
fn exit_codes() {
    let run = |a: &[&str]| run_args(std::iter::once("lieclass").chain(a.iter().copied())).code;
    assert_eq!(run(&["brackets"]), 0);
    assert_eq!(run(&["brackets", "--printed-Y5"]), 2);
    assert_eq!(run(&["adjoint", "--printed-Y5"]), 2);
    assert_eq!(run(&["frobnicate"]), 1);
    assert_eq!(run(&["optsys", "--samples", "0"]), 1);
    assert_eq!(run(&["check", "--field", "d_q"]), 3);
    assert_eq!(run(&["check", "--field", "d_t"]), 0);
    assert_eq!(run(&["check", "--field", "d_x"]), 2);
    assert_eq!(run(&["check", "--field=-d_y", "--f", "Phi(u)"]), 0);
    assert_eq!(run(&["classify"]), 2);
}

#[test]
fn printed_basis_names_the_witness() {
    let out = run_args(["lieclass", "brackets", "--printed-Y5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out.text).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["closed"], false);
    assert_eq!(v["witnesses"][0]["i"], 1);
    assert_eq!(v["witnesses"][0]["j"], 5);
}

#[test]
fn abelian_basis_gives_zero_table() {
    let dir = std::env::temp_dir().join(format!("lieclass-abelian-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("abelian.lsf");
    std::fs::write(&p, "chart { vars x y t; dep u; class f; }\nfield A = d_x;\nfield B = d_y;\nfield C = d_t;\n").unwrap();
    let out = run_args(["lieclass", "brackets", "--format", "csv", "--basis", p.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert_eq!(out.text, "\"[Yi, Yj]\",A,B,C\nA,0,0,0\nB,0,0,0\nC,0,0,0\n");
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for fmt in ["json", "csv", "md"] {
        let a = run_args(["lieclass", "optsys", "--samples", "50", "--seed", "7", "--format", fmt]);
        let b = run_args(["lieclass", "optsys", "--samples", "50", "--seed", "7", "--format", fmt]);
        assert_eq!(a.text, b.text);
    }
}
