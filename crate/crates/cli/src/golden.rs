//! The golden invocation suite: fixed command lines whose reports, minus
//! timing, are stored under `tests/golden/`. Regenerate with
//! `UPDATE_GOLDEN=1 cargo test -p towergroup-cli golden`.

use std::path::PathBuf;

/// `(golden name, arguments, expected exit code)`.
pub const CASES: &[(&str, &[&str], i32)] = &[
    ("analyze_q8", &["analyze", "q8"], 0),
    ("analyze_abelian_6", &["analyze", "abelian: 6"], 0),
    ("analyze_pgl_3_2", &["analyze", "pgl(3,2)"], 0),
    ("analyze_perm", &["analyze", "perm: (0 1 2)(3 4); (0 1)"], 0),
    ("analyze_wreath", &["analyze", "wreath(cyc(2),cyc(2))"], 0),
    ("analyze_sylow_sym6", &["analyze", "sylow(sym(6),2)"], 0),
    ("analyze_u_3_2", &["analyze", "u(3,2)"], 0),
    ("analyze_psl_2_7", &["analyze", "psl(2,7)"], 0),
    ("special_d8", &["special", "d8"], 0),
    ("special_q8", &["special", "q8"], 0),
    ("special_heis_3", &["--verify", "special", "heis(3)"], 0),
    ("special_sym5", &["special", "sym(5)"], 0),
    ("special_inconclusive", &["--iso-limit", "4", "special", "sym(4)"], 3),
    ("tower_sym4", &["--verify", "tower", "sym(4)"], 0),
    ("tower_q8", &["tower", "q8"], 0),
    ("untwist_q8", &["--verify", "untwist", "q8"], 0),
    ("untwist_heis_3", &["untwist", "heis(3)"], 0),
    ("untwist_abelian", &["untwist", "abelian: 2,4"], 0),
    ("untwist_sym3", &["untwist", "sym(3)"], 2),
    ("fc_2_2", &["fc", "2,2"], 0),
    ("fc_2_4", &["fc", "2,4"], 0),
    ("fc_zero", &["fc", "0"], 2),
    ("isoclinic_fc_d8", &["--verify", "isoclinic", "fc(2,2)", "d8"], 0),
    ("isoclinic_q8_sym3", &["isoclinic", "q8", "sym(3)"], 0),
    ("sylow_pgl_3_2", &["--verify", "sylow", "pgl(3,2)", "2"], 0),
    ("sylow_sym4_3", &["sylow", "sym(4)", "3"], 0),
    ("sylow_not_prime", &["sylow", "sym(4)", "4"], 2),
    ("monomial", &["monomial"], 0),
    ("parse_error", &["analyze", "perm: (0 1"], 2),
    ("limit_sym9", &["analyze", "sym(9)"], 3),
    ("limit_max_order", &["--max-order", "10", "special", "sym(4)"], 3),
];

/// A report without its timing member, pretty-printed with a trailing newline.
pub fn payload(stdout: &str) -> Option<String> {
    let mut v: serde_json::Value = serde_json::from_str(stdout).ok()?;
    v.as_object_mut()?.remove("timing");
    let mut s = serde_json::to_string_pretty(&v).ok()?;
    s.push('\n');
    Some(s)
}

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"))
}

pub fn schema_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report.schema.json")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{run, Output};
    use jsonschema::JSONSchema;
    use serde_json::Value;

    fn invoke(args: &[&str]) -> Output {
        run(std::iter::once("towergroup").chain(args.iter().copied()))
    }

    fn schema() -> JSONSchema {
        let text = std::fs::read_to_string(schema_path()).unwrap();
        JSONSchema::compile(&serde_json::from_str(&text).unwrap()).expect("schema compiles")
    }

    #[test]
    fn reports_match_goldens() {
        let update = std::env::var_os("UPDATE_GOLDEN").is_some();
        let mut mismatches = Vec::new();
        for &(name, args, code) in CASES {
            let r = invoke(args);
            assert_eq!(r.code, code, "{name}: exit code\n{}", r.stderr);
            let got = payload(&r.stdout).expect("stdout is a JSON report");
            let path = golden_path(name);
            if update {
                std::fs::write(&path, &got).unwrap();
                continue;
            }
            let want = std::fs::read_to_string(&path)
                .unwrap_or_else(|_| panic!("missing golden {}", path.display()));
            if got != want {
                mismatches.push(name);
            }
        }
        assert!(mismatches.is_empty(), "payloads differ from goldens: {mismatches:?}");
    }

    #[test]
    fn every_report_validates_against_the_schema() {
        let compiled = schema();
        for &(name, args, _) in CASES {
            let doc: Value = serde_json::from_str(&invoke(args).stdout).unwrap();
            let msgs: Vec<String> = match compiled.validate(&doc) {
                Ok(()) => continue,
                Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
            };
            panic!("{name}: {msgs:#?}");
        }
    }

    #[test]
    fn schema_rejects_malformed_reports() {
        let compiled = schema();
        let good: Value = serde_json::from_str(&invoke(&["special", "d8"]).stdout).unwrap();
        assert!(compiled.is_valid(&good));
        let mut missing = good.clone();
        missing.as_object_mut().unwrap().remove("limits");
        assert!(!compiled.is_valid(&missing));
        let mut wrong_version = good.clone();
        wrong_version["schema_version"] = 2.into();
        assert!(!compiled.is_valid(&wrong_version));
        let mut both = good.clone();
        both["result"]["failure"] = serde_json::json!({
            "exhaustive": true, "explored_chain_count": 0, "limits_hit": [], "reason": "x"
        });
        assert!(!compiled.is_valid(&both));
        let mut bad_verdict = good.clone();
        bad_verdict["verdict"] = "maybe".into();
        assert!(!compiled.is_valid(&bad_verdict));
        let mut analyze: Value = serde_json::from_str(&invoke(&["analyze", "q8"]).stdout).unwrap();
        analyze["result"].as_object_mut().unwrap().remove("order");
        assert!(!compiled.is_valid(&analyze));
    }

    #[test]
    fn errors_go_to_stderr_and_the_report() {
        let r = invoke(&["analyze", "perm: (0 1"]);
        assert!(r.stderr.starts_with("error: parse error at position 10"));
        let doc: Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(doc["error"]["position"], 10);
        assert!(doc["result"].is_null());
    }

    #[test]
    fn usage_errors_exit_2() {
        for args in [&["frobnicate"][..], &[], &["special"], &["--json", "--text", "analyze", "q8"]] {
            assert_eq!(invoke(args).code, 2, "{args:?}");
        }
        assert_eq!(invoke(&["--help"]).code, 0);
    }

    #[test]
    fn text_mode_renders_the_same_report() {
        let r = invoke(&["--text", "special", "d8"]);
        assert_eq!(r.code, 0);
        assert!(r.stdout.contains("verdict: special"));
        assert!(r.stdout.contains("chain_orders: 8, 4, 1"));
        assert!(serde_json::from_str::<Value>(&r.stdout).is_err());
    }
}
