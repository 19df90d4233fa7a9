//! Drives the `cbsig` binary end to end.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Run {
    dir: TempDir,
}

impl Run {
    fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("msg"), b"attack at dawn").unwrap();
        std::fs::write(dir.path().join("other"), b"attack at dusk").unwrap();
        Run { dir }
    }

    fn p(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn cmd(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_cbsig"))
            .args(args)
            .current_dir(self.dir.path())
            .env_remove("CBSG_ATTEMPT_BUDGET")
            .output()
            .unwrap()
    }

    fn code(&self, args: &[&str]) -> i32 {
        let out = self.cmd(args);
        out.status.code().unwrap()
    }

    fn ok(&self, args: &[&str]) {
        let out = self.cmd(args);
        assert!(
            out.status.success(),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

fn read(p: &Path) -> Vec<u8> {
    std::fs::read(p).unwrap()
}

#[test]
fn cfs_sign_verify_and_reject() {
    let r = Run::new();
    r.ok(&["--seed", "1", "keygen", "--scheme", "cfs", "--out", "a"]);
    r.ok(&["--seed", "2", "sign", "--key", "a.sec", "--msg", "msg", "--out", "a.sig"]);
    assert_eq!(r.code(&["verify", "--key", "a.pub", "--msg", "msg", "--sig", "a.sig"]), 0);
    assert_eq!(r.code(&["verify", "--key", "a.pub", "--msg", "other", "--sig", "a.sig"]), 1);
    // a flipped byte in the file is caught by the envelope
    let mut bytes = read(&r.p("a.sig"));
    bytes[20] ^= 4;
    std::fs::write(r.p("bad.sig"), bytes).unwrap();
    assert_eq!(r.code(&["verify", "--key", "a.pub", "--msg", "msg", "--sig", "bad.sig"]), 2);
}

#[test]
fn seed_determines_every_byte() {
    let r = Run::new();
    for name in ["x", "y"] {
        r.ok(&["--seed", "9", "keygen", "--scheme", "stern", "--out", name]);
        r.ok(&["--seed", "10", "sign", "--key", &format!("{name}.sec"), "--msg", "msg", "--out", &format!("{name}.sig")]);
    }
    assert_eq!(read(&r.p("x.pub")), read(&r.p("y.pub")));
    assert_eq!(read(&r.p("x.sec")), read(&r.p("y.sec")));
    assert_eq!(read(&r.p("x.sig")), read(&r.p("y.sig")));
}

#[test]
fn usage_and_budget_codes() {
    let r = Run::new();
    assert_eq!(r.code(&["frobnicate"]), 2);
    assert_eq!(r.code(&["verify", "--key", "nope", "--msg", "msg", "--sig", "nope"]), 2);
    assert_eq!(r.code(&["keygen", "--scheme", "cfs", "--params", "m=1", "--out", "z"]), 2);
    r.ok(&["--seed", "1", "keygen", "--scheme", "cfs", "--out", "a"]);
    let out = Command::new(env!("CARGO_BIN_EXE_cbsig"))
        .args(["--seed", "1", "sign", "--key", "a.sec", "--msg", "msg", "--out", "s"])
        .current_dir(r.dir.path())
        .env("CBSG_ATTEMPT_BUDGET", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(r.code(&["--help"]), 0);
}

#[cfg(unix)]
#[test]
fn secret_files_are_private() {
    use std::os::unix::fs::PermissionsExt;
    let r = Run::new();
    let out = r.cmd(&["--seed", "1", "keygen", "--scheme", "kks", "--out", "k"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("NOT encrypted"));
    let mode = std::fs::metadata(r.p("k.sec")).unwrap().permissions().mode();
    assert_eq!(mode & 0o777, 0o600);
}

#[test]
fn ring_and_threshold_flows() {
    let r = Run::new();
    for (i, seed) in ["11", "12", "13"].iter().enumerate() {
        r.ok(&["--seed", seed, "keygen", "--scheme", "zlc", "--out", &format!("z{i}")]);
        r.ok(&["--seed", seed, "keygen", "--scheme", "acg", "--out", &format!("g{i}")]);
    }
    r.ok(&["--seed", "1", "ring-sign", "--ring", "z0.pub", "z1.pub", "z2.pub", "--key", "z1.sec", "--msg", "msg", "--out", "z.sig"]);
    // member order on the command line does not matter
    assert_eq!(r.code(&["ring-verify", "--ring", "z2.pub", "z0.pub", "z1.pub", "--msg", "msg", "--sig", "z.sig"]), 0);
    assert_eq!(r.code(&["ring-verify", "--ring", "z2.pub", "z0.pub", "z1.pub", "--msg", "other", "--sig", "z.sig"]), 1);
    r.ok(&["--seed", "2", "threshold-sign", "--ring", "z0.pub", "z1.pub", "z2.pub", "--keys", "z0.sec", "z2.sec", "--msg", "msg", "--out", "d.sig"]);
    assert_eq!(r.code(&["threshold-verify", "--ring", "z0.pub", "z1.pub", "z2.pub", "--msg", "msg", "--sig", "d.sig"]), 0);
    assert_eq!(r.code(&["threshold-verify", "--ring", "z0.pub", "z1.pub", "z2.pub", "--msg", "other", "--sig", "d.sig"]), 1);
    r.ok(&["--seed", "3", "threshold-sign", "--ring", "g0.pub", "g1.pub", "g2.pub", "--keys", "g1.sec", "--msg", "msg", "--out", "g.sig", "--params", "rounds=40"]);
    assert_eq!(r.code(&["threshold-verify", "--ring", "g0.pub", "g1.pub", "g2.pub", "--msg", "msg", "--sig", "g.sig"]), 0);
    assert_eq!(r.code(&["threshold-verify", "--ring", "g0.pub", "g1.pub", "g2.pub", "--msg", "other", "--sig", "g.sig"]), 1);
    // a key outside the ring
    r.ok(&["--seed", "99", "keygen", "--scheme", "zlc", "--out", "stranger"]);
    assert_eq!(r.code(&["ring-sign", "--ring", "z0.pub", "z1.pub", "--key", "stranger.sec", "--msg", "msg", "--out", "x"]), 2);
}

#[test]
fn blind_flow() {
    let r = Run::new();
    r.ok(&["--seed", "30", "keygen", "--scheme", "blind", "--out", "b"]);
    let mut done = false;
    for seed in 0..50 {
        let s = seed.to_string();
        r.ok(&["--seed", &s, "blind", "--key", "b.pub", "--msg", "msg", "--state", "st", "--request", "rq"]);
        if r.code(&["sign", "--key", "b.sec", "--request", "rq", "--out", "rs"]) != 0 {
            continue;
        }
        match r.code(&["unblind", "--key", "b.pub", "--state", "st", "--response", "rs", "--out", "b.sig"]) {
            0 => {
                done = true;
                break;
            }
            1 => continue,
            c => panic!("unblind exit {c}"),
        }
    }
    assert!(done);
    assert_eq!(r.code(&["blind-verify", "--key", "b.pub", "--msg", "msg", "--sig", "b.sig"]), 0);
    assert_eq!(r.code(&["blind-verify", "--key", "b.pub", "--msg", "other", "--sig", "b.sig"]), 1);
}

#[test]
fn ibs_flow() {
    let r = Run::new();
    r.ok(&["--seed", "40", "keygen", "--scheme", "ibs", "--out", "kgc"]);
    r.ok(&["--seed", "41", "extract", "--key", "kgc.sec", "--identity", "alice", "--out", "alice.cred"]);
    assert_eq!(r.code(&["--seed", "1", "ibs-identify", "--key", "kgc.pub", "--credential", "alice.cred"]), 0);
    assert_eq!(
        r.code(&["--seed", "1", "ibs-identify", "--key", "kgc.pub", "--identity", "mallory", "--adversary", "optimal-cheater", "--rounds", "40"]),
        1
    );
}

#[test]
fn cost_and_bench_json() {
    let r = Run::new();
    let out = r.cmd(&["--json", "cost"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 15);
    let zlc_pk = v["cells"].as_array().unwrap().iter().find(|c| c["scheme"] == "ZLC" && c["cell"] == "pk").unwrap();
    assert_eq!(zlc_pk["exact"], "5898240");

    let out = r.cmd(&["--json", "--seed", "5", "bench", "--protocol", "stern", "--adversary", "honest", "--rounds", "10", "--trials", "100", "--log", "log.jsonl"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["full_protocol"]["rate"], 1.0);
    assert_eq!(std::fs::read_to_string(r.p("log.jsonl")).unwrap().lines().count(), 1000);
}
