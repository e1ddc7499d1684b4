use std::path::Path;
use std::process::Command;

fn conrep(args: &[&str], dir: &Path) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_conrep")).args(args).current_dir(dir).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

const C3XC2: &str = r#"{"name": "D", "elements": ["0", "a", "b", "c", "d", "1"],
  "cover": [["0", "a"], ["a", "b"], ["0", "c"], ["a", "d"], ["c", "d"], ["d", "1"], ["b", "1"]]}"#;
const GRID: &str = r#"{"name": "G", "elements": ["00", "01", "02", "10", "11", "12", "20", "21", "22"],
  "cover": [["00", "01"], ["01", "02"], ["10", "11"], ["11", "12"], ["20", "21"], ["21", "22"],
            ["00", "10"], ["10", "20"], ["01", "11"], ["11", "21"], ["02", "12"], ["12", "22"]]}"#;
const C3: &str = r#"{"name": "C3", "elements": ["0", "1", "2"], "cover": [["0", "1"], ["1", "2"]]}"#;
const M3: &str = r#"{"name": "M3", "elements": ["0", "a", "b", "c", "1"],
  "cover": [["0", "a"], ["0", "b"], ["0", "c"], ["a", "1"], ["b", "1"], ["c", "1"]]}"#;

#[test]
fn construct_verify_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("d.json"), C3XC2).unwrap();
    std::fs::write(p.join("m3.json"), M3).unwrap();
    let (code, out) = conrep(&["check", "d.json"], p);
    assert_eq!(code, 0);
    assert!(out.contains("\"holds\": true"));
    let (code, _) = conrep(&["construct", "d.json", "--q", "0,a,b,c,d,1", "-o", "l.json", "--cert", "cert.json"], p);
    assert_eq!(code, 0);
    let (code, out) = conrep(&["verify", "cert.json"], p);
    assert_eq!(code, 0, "{out}");
    let (code, dot) = conrep(&["dot", "l.json"], p);
    assert_eq!(code, 0);
    assert!(dot.starts_with("digraph"));
    let (code, _) = conrep(&["--seed", "7", "construct", "d.json", "--aut-gadget", "m3.json", "-o", "g.json"], p);
    assert_eq!(code, 0);
}

#[test]
fn outputs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("c3.json"), C3).unwrap();
    conrep(&["construct", "c3.json", "-o", "a.json", "--rigid"], p);
    conrep(&["--seed", "99", "construct", "c3.json", "-o", "b.json", "--rigid"], p);
    let (a, b) = (std::fs::read(p.join("a.json")).unwrap(), std::fs::read(p.join("b.json")).unwrap());
    assert_eq!(a, b);
    let (code, out) = conrep(&["chain", "c3.json"], p);
    assert_eq!(code, 0);
    assert!(!out.trim().is_empty());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    std::fs::write(p.join("g.json"), GRID).unwrap();
    std::fs::write(p.join("bad.json"), "{").unwrap();
    std::fs::write(p.join("d.json"), C3XC2).unwrap();
    assert_eq!(conrep(&["construct", "g.json", "-o", "l.json"], p).0, 1);
    assert_eq!(conrep(&["check", "g.json"], p).0, 1);
    assert_eq!(conrep(&["check", "bad.json"], p).0, 2);
    assert_eq!(conrep(&["check", "missing.json"], p).0, 2);
    assert_eq!(conrep(&["construct", "d.json", "--q", "0,1", "-o", "l.json"], p).0, 1);
    assert_eq!(conrep(&["frobnicate"], p).0, 2);
    conrep(&["construct", "d.json", "-o", "l.json", "--cert", "cert.json"], p);
    let text = std::fs::read_to_string(p.join("cert.json")).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let phi = v["phi"].as_array_mut().unwrap();
    let (i, j) = (1, phi.len() - 2);
    let (x, y) = (phi[i]["image"].clone(), phi[j]["image"].clone());
    phi[i]["image"] = y;
    phi[j]["image"] = x;
    std::fs::write(p.join("tampered.json"), serde_json::to_string(&v).unwrap()).unwrap();
    let (code, out) = conrep(&["verify", "tampered.json"], p);
    assert_eq!(code, 1, "{out}");
}

#[test]
fn enumerate_small() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out) = conrep(&["enumerate", "--max-j", "3", "--all-q"], dir.path());
    assert_eq!(code, 0);
    assert!(out.contains("failed: 0"));
}
