//! Reports compared against checked-in files with timings removed.
//! Set `UPDATE_GOLDEN=1` to rewrite the files.

use std::path::PathBuf;

use schinzel_cli::{masked, run};

const CASES: &[(&str, &[&str])] = &[
    ("fixdiv_example", &["fixdiv", "--poly", "(T^2-T)*Y + T^2 - T - 2", "--params", "T", "--vars", "Y"]),
    ("irred_sharpness", &["irred", "--poly", "T*(T-1)*(T-Y)*(T-Y-1)+2", "--vars", "T,Y"]),
    ("hilbert_first", &["hilbert", "--polys", "Y^2 - T", "--params", "T", "--vars", "Y", "--limit", "3"]),
    ("progression_ty2", &["progression", "--poly", "T*Y+2", "--params", "T", "--vars", "Y", "--N", "3"]),
    ("schinzel_square", &["schinzel", "--poly", "Y^2-T", "--params", "T", "--vars", "Y", "--d", "1"]),
    ("schinzel_refused", &["schinzel", "--poly", "T^2-T+2", "--params", "T", "--vars", "Y", "--d", "0"]),
    ("strong_pair", &["strong", "--poly", "T^2+1", "--poly", "T^2+T+1", "--params", "T", "--vars", "Y", "--d", "1"]),
    ("compose_two_stages", &["compose", "--poly", "T^2+1", "--params", "T", "--vars", "Y", "--d", "1,2"]),
    ("counterexample_d1", &["counterexample", "--d", "1", "--samples", "100", "--seed", "1"]),
    ("coprime_pair", &["coprime", "--poly", "T1*T2+1", "--poly", "T1+T2", "--params", "T1,T2"]),
    ("density_square", &["density", "--poly", "Y^2-T", "--params", "T", "--vars", "Y", "--N", "30"]),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

#[test]
fn reports_match_golden_files() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut mismatches = Vec::new();
    for (name, argv) in CASES {
        let inv = run(std::iter::once("schinzel").chain(argv.iter().copied()));
        let report = inv.report.unwrap_or_else(|| panic!("{name}: no report ({})", inv.message));
        let text = serde_json::to_string_pretty(&masked(&report)).unwrap() + "\n";
        let path = golden_dir().join(format!("{name}.json"));
        if update {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &text).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        if expected != text {
            mismatches.push(*name);
        }
    }
    assert!(mismatches.is_empty(), "reports differ from golden files: {mismatches:?}");
}
