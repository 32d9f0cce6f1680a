use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn gbke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbke"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn script(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scripts", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn paper_demo_lists_five_keys() {
    let out = gbke(&["--paper-demo"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for bits in [
        "10000010010100",
        "100000101010100001001",
        "101010010000010001001",
        "01000100010100",
        "01000100001001",
    ] {
        assert!(text.contains(bits), "{bits} missing");
    }
}

#[test]
fn unknown_flag_exits_one() {
    assert_eq!(gbke(&["--nope"]).status.code(), Some(1));
    assert_eq!(gbke(&["keygen", "--wat"]).status.code(), Some(1));
}

#[test]
fn end_to_end_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let msg = d.join("msg.txt");
    std::fs::write(&msg, b"meet me by the toric variety").unwrap();
    for tau in ["off", "on"] {
        let p = d.join(format!("p-{tau}"));
        let init = gbke(&["proto-init", "--script", &script("two_squares.json"), "--tau", tau, "--out", s(&p)]);
        assert!(init.status.success(), "{}", String::from_utf8_lossy(&init.stderr));
        let session = d.join("session.json");
        let ct = d.join("c.bin");
        let pubf = p.join("pub.json");
        let privf = p.join("priv.json");
        assert!(gbke(&["keygen", "--pub", s(&pubf), "--seed", "7", "--out", s(&session)]).status.success());
        let enc = gbke(&["encrypt", "--pub", s(&pubf), "--session", s(&session), "--in", s(&msg), "--seed", "1", "--out", s(&ct)]);
        assert!(enc.status.success());
        let dec = gbke(&["decrypt", "--priv", s(&privf), "--ct", s(&ct)]);
        assert!(dec.status.success());
        assert_eq!(dec.stdout, b"meet me by the toric variety");
        let err = String::from_utf8(dec.stderr).unwrap();
        if tau == "on" {
            assert!(err.contains("attempts: 1"));
        } else {
            assert!(err.contains("attempts: "));
        }

        // flip a marker byte so no key matches
        let mut bytes = std::fs::read(&ct).unwrap();
        let payload_start = bytes.len() - (b"meet me by the toric variety".len() + 8);
        bytes[payload_start] ^= 1;
        let bad = d.join("bad.bin");
        std::fs::write(&bad, &bytes).unwrap();
        assert_eq!(gbke(&["decrypt", "--priv", s(&privf), "--ct", s(&bad)]).status.code(), Some(3));
    }
}

#[test]
fn keys_enumerate_exact_gives_five() {
    let dir = tempfile::tempdir().unwrap();
    let u = dir.path().join("u.json");
    assert!(gbke(&["graph-build", "--script", &script("two_squares.json"), "--out", s(&u)]).status.success());
    let out = gbke(&["keys-enumerate", "--ugb", s(&u), "--mode", "exact"]);
    assert!(out.status.success());
    let keys: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(keys.as_array().unwrap().len(), 5);
    assert!(keys[0]["witness_w"].is_array());
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let u = d.join(format!("u{run}.json"));
        let p = d.join(format!("p{run}"));
        let sess = d.join(format!("s{run}.json"));
        let ct = d.join(format!("c{run}.bin"));
        assert!(gbke(&["graph-build", "--seed", "11", "--steps", "5", "--out", s(&u)]).status.success());
        assert!(gbke(&["proto-init", "--ugb", s(&u), "--field", "q", "--out", s(&p)]).status.success());
        assert!(gbke(&["keygen", "--pub", s(&p.join("pub.json")), "--seed", "3", "--out", s(&sess)]).status.success());
        let msg = d.join("m");
        std::fs::write(&msg, b"x").unwrap();
        assert!(gbke(&["encrypt", "--pub", s(&p.join("pub.json")), "--session", s(&sess), "--in", s(&msg), "--seed", "9", "--out", s(&ct)]).status.success());
        outputs.push(
            [u, p.join("pub.json"), p.join("priv.json"), sess, ct]
                .iter()
                .map(|f| std::fs::read(f).unwrap())
                .collect::<Vec<_>>(),
        );
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn attack_bounds_on_two_squares() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p");
    assert!(gbke(&["proto-init", "--script", &script("two_squares.json"), "--out", s(&p)]).status.success());
    let out = gbke(&["attack-bounds", "--pub", s(&p.join("pub.json")), "--priv", s(&p.join("priv.json"))]);
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["key_bound"], "8");
    assert_eq!(r["measured_keys"], 5);
}

#[test]
fn ugb_verify_against_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let u = dir.path().join("u.json");
    let g = dir.path().join("g.json");
    assert!(gbke(&["graph-build", "--script", &script("c4.json"), "--out", s(&u), "--graph-out", s(&g)]).status.success());
    let out = gbke(&["ugb-verify", "--ugb", s(&u), "--graph", s(&g), "--orders", "5"]);
    assert!(out.status.success());
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["matches_primitive_oracle"], true);
    // a missing file is a domain-class failure
    assert_eq!(gbke(&["ugb-verify", "--ugb", "/nonexistent.json"]).status.code(), Some(1));
}

#[test]
fn oversized_enumeration_exits_two() {
    let n = 48;
    let vars: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let polys: Vec<serde_json::Value> = (0..n / 2)
        .map(|i| {
            let mut a = vec![0; n];
            let mut b = vec![0; n];
            a[2 * i] = 1;
            b[2 * i + 1] = 1;
            serde_json::json!([["1", a], ["-1", b]])
        })
        .collect();
    let basis = serde_json::json!({
        "ring": {"n": n, "field": "q", "vars": vars},
        "polynomials": polys,
    });
    let dir = tempfile::tempdir().unwrap();
    let u = dir.path().join("u.json");
    std::fs::write(&u, basis.to_string()).unwrap();
    let out = gbke(&["keys-enumerate", "--ugb", s(&u), "--mode", "exact"]);
    assert_eq!(out.status.code(), Some(2));
    let sampled = gbke(&["keys-enumerate", "--ugb", s(&u), "--mode", "sample:4"]);
    assert!(sampled.status.success());
}
