use std::process::{Command, Output};

use fpa_core::{BoundsReport, ExperimentReport, PrivacyEstimate, RetrievalTranscript};
use serde_json::Value;

fn fpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpa"))
        .args(args)
        .output()
        .expect("run fpa")
}

fn stdout(args: &[&str]) -> String {
    let out = fpa(args);
    assert!(
        out.status.success(),
        "fpa {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut args = args.to_vec();
    args.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&args)).expect("valid json")
}

fn code(args: &[&str]) -> (i32, String) {
    let out = fpa(args);
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn encode_examples() {
    assert_eq!(
        stdout(&["encode", "--lambda", "2", "--n", "6", "--message", "10"]),
        "3,1,1,2,2,3\n"
    );
    assert_eq!(
        stdout(&["encode", "--lambda", "2", "--n", "6", "--message", "00"]),
        "1,1,2,2,3,3\n"
    );
    let (status, err) = code(&["encode", "--lambda", "2", "--n", "6", "--message", "11111"]);
    assert_eq!(status, 2);
    assert!(err.contains("n < k+lambda"), "{err}");
}

#[test]
fn decode_examples() {
    assert_eq!(
        stdout(&[
            "decode",
            "--lambda",
            "2",
            "--k",
            "2",
            "--word",
            "3,1,1,2,2,3"
        ]),
        "10\n"
    );
    assert_eq!(
        stdout(&[
            "decode",
            "--lambda",
            "2",
            "--k",
            "2",
            "--word",
            "1,1,2,2,3,3"
        ]),
        "00\n"
    );
    let (status, err) = code(&[
        "decode",
        "--lambda",
        "2",
        "--k",
        "2",
        "--word",
        "1,1,1,2,2,3",
    ]);
    assert_eq!(status, 2);
    assert!(err.contains("multiplicity"), "{err}");
}

#[test]
fn encode_output_pipes_into_decode() {
    for (lambda, n, k) in [(2, 8, 4), (3, 9, 3), (1, 8, 6)] {
        let (l, n_s, k_s) = (lambda.to_string(), n.to_string(), k.to_string());
        for v in 0..1u32 << k {
            let msg: String = (0..k)
                .map(|b| if v >> (k - 1 - b) & 1 == 1 { '1' } else { '0' })
                .collect();
            let word = stdout(&["encode", "--lambda", &l, "--n", &n_s, "--message", &msg]);
            let back = stdout(&["decode", "--lambda", &l, "--k", &k_s, "--word", word.trim()]);
            assert_eq!(back.trim(), msg);
        }
    }
}

#[test]
fn local_is_reproducible_with_seed() {
    let args = [
        "local",
        "--lambda",
        "2",
        "--k",
        "2",
        "--word",
        "3,1,1,2,2,3",
        "--i",
        "1",
        "--seed",
        "7",
    ];
    let a = json(&args);
    assert_eq!(a, json(&args));
    assert_eq!(a["bit"], 1);
    assert_eq!(a["seed"], 7);
    assert!(a["symbols_read"].as_u64().unwrap() <= 3);
    assert_eq!(a["read_positions"][0], 1);
}

#[test]
fn generated_seed_is_reported_and_replays() {
    let out = fpa(&[
        "local",
        "--lambda",
        "3",
        "--k",
        "3",
        "--word",
        "3,1,1,1,2,2,2,3,3",
        "--i",
        "2",
    ]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    let seed = err
        .trim()
        .strip_prefix("fpa: seed ")
        .expect("seed on stderr");
    let plain = String::from_utf8(out.stdout).unwrap();
    assert!(plain.contains(&format!("seed: {seed}")));
    let replay = stdout(&[
        "local",
        "--lambda",
        "3",
        "--k",
        "3",
        "--word",
        "3,1,1,1,2,2,2,3,3",
        "--i",
        "2",
        "--seed",
        seed,
    ]);
    assert_eq!(plain, replay);
}

#[test]
fn bounds_report_json() {
    let v = json(&["bounds", "--lambda", "1", "--m", "5", "--d", "3"]);
    assert_eq!(v["gilbert_lower_num"], "120");
    assert_eq!(v["gilbert_lower_den"], "31");
    assert_eq!(v["packing_upper_num"], "15");
    assert_eq!(v["packing_upper_den"], "1");
    assert_eq!(v["exact"], true);
    let report: BoundsReport = serde_json::from_value(v).unwrap();
    assert_eq!(report.packing_floor().unwrap(), 15u32.into());

    let v = json(&[
        "bounds",
        "--lambda",
        "1",
        "--m",
        "30",
        "--d",
        "3",
        "--exact-cap",
        "20",
    ]);
    assert_eq!(v["exact"], false);
    assert!(v["gilbert_lower_num"].is_null());
    assert!(v["asym_upper_log"].as_f64().unwrap() > 0.0);
}

#[test]
fn ball_perm_greedy() {
    assert_eq!(
        stdout(&["ball", "--lambda", "1", "--n", "5", "--d", "2"]),
        "31\n"
    );
    assert_eq!(
        stdout(&["ball", "--lambda", "1", "--n", "5", "--d", "1", "--method", "brute"]),
        "8\n"
    );
    assert_eq!(
        stdout(&["perm", "--lambda", "1", "--n", "5", "--d", "2"]),
        "31\n"
    );
    assert_eq!(stdout(&["perm", "--rows", "11,11"]), "2\n");
    assert_eq!(
        stdout(&["perm", "--rows", "110,011,101", "--method", "naive"]),
        "2\n"
    );
    assert_eq!(
        stdout(&["greedy", "--lambda", "1", "--n", "3", "--d", "2", "--list"]),
        "size: 3\n1,2,3\n2,3,1\n3,1,2\n"
    );
    let g = json(&["greedy", "--lambda", "2", "--n", "6", "--d", "2"]);
    assert_eq!(
        g["size"].as_u64().unwrap() as usize,
        g["words"].as_array().unwrap().len()
    );
}

#[test]
fn capability_guards_exit_3() {
    assert_eq!(
        code(&["ball", "--lambda", "1", "--n", "40", "--d", "3"]).0,
        3
    );
    assert_eq!(
        code(&["perm", "--lambda", "1", "--n", "12", "--d", "1", "--method", "naive"]).0,
        3
    );
    assert_eq!(
        code(&["greedy", "--lambda", "1", "--n", "14", "--d", "2"]).0,
        3
    );
}

#[test]
fn user_errors_exit_2() {
    assert_eq!(
        code(&["bounds", "--lambda", "1", "--m", "5", "--d", "0"]).0,
        2
    );
    assert_eq!(
        code(&[
            "local",
            "--lambda",
            "2",
            "--k",
            "2",
            "--word",
            "3,1,1,2,2,3",
            "--i",
            "3",
            "--seed",
            "1"
        ])
        .0,
        2
    );
    assert_eq!(
        code(&["encode", "--lambda", "2", "--n", "6", "--message", "1x"]).0,
        2
    );
    assert_eq!(
        code(&[
            "channel", "--lambda", "2", "--n", "6", "--k", "2", "--delta", "1", "--trials", "0",
            "--seed", "1"
        ])
        .0,
        2
    );
    assert_eq!(code(&["nonsense"]).0, 2);
}

#[test]
fn channel_report_json() {
    let args = [
        "channel", "--lambda", "2", "--n", "12", "--k", "2", "--delta", "2", "--trials", "2000",
        "--seed", "11",
    ];
    let v = json(&args);
    for key in [
        "trials",
        "delta",
        "d",
        "uds_rate",
        "lfi_error_rate",
        "lfi_bound",
        "mean_reads",
        "seed",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let report: ExperimentReport = serde_json::from_value(v.clone()).unwrap();
    assert_eq!(report.uds_rate, 1.0);
    assert_eq!(report.seed, 11);
    assert_eq!(v, json(&args));
}

#[test]
fn perturb_respects_radius() {
    for mode in ["exact-uniform", "swap-walk"] {
        let v = json(&[
            "perturb",
            "--lambda",
            "2",
            "--word",
            "3,1,1,2,2,3",
            "--delta",
            "1",
            "--mode",
            mode,
            "--seed",
            "3",
        ]);
        assert!(v["distance"].as_u64().unwrap() <= 1);
        assert_eq!(v["word"].as_array().unwrap().len(), 6);
    }
}

#[test]
fn pir_commands() {
    let t = json(&[
        "pir",
        "retrieve",
        "--lambda",
        "2",
        "--n",
        "6",
        "--message",
        "10",
        "--i",
        "1",
        "--seed",
        "5",
    ]);
    let transcript: RetrievalTranscript = serde_json::from_value(t).unwrap();
    assert_eq!(transcript.bit, 1);
    assert_eq!(transcript.queries.len(), 3);

    let p = json(&[
        "pir",
        "privacy",
        "--lambda",
        "2",
        "--n",
        "6",
        "--message",
        "10",
    ]);
    for key in ["p_estimate", "mode", "trials", "seed"] {
        assert!(p.get(key).is_some(), "missing {key}");
    }
    let est: PrivacyEstimate = serde_json::from_value(p).unwrap();
    assert!(est.p_estimate > 0.0 && est.p_estimate <= 1.0);

    let p = json(&[
        "pir",
        "privacy",
        "--lambda",
        "2",
        "--n",
        "6",
        "--message",
        "1",
        "--mode",
        "monte-carlo",
        "--trials",
        "100",
        "--seed",
        "1",
    ]);
    assert_eq!(p["p_estimate"], 0.0);
    assert_eq!(p["mode"], "monte-carlo");

    let r = json(&[
        "pir",
        "retrievability",
        "--lambda",
        "2",
        "--n",
        "8",
        "--message",
        "1011",
        "--trials",
        "300",
        "--seed",
        "2",
    ]);
    assert_eq!(r["retrievability"], 1.0);
}

#[test]
fn golden_encodings_and_shell_pipe() {
    let golden = include_str!("golden/encode_2_8_4.txt");
    for line in golden.lines() {
        let (msg, word) = line.split_once(' ').unwrap();
        assert_eq!(
            stdout(&["encode", "--lambda", "2", "--n", "8", "--message", msg]).trim(),
            word
        );
        let piped = Command::new("sh")
            .arg("-c")
            .arg(r#""$0" encode --lambda 2 --n 8 --message "$1" | xargs "$0" decode --lambda 2 --k 4 --word"#)
            .arg(env!("CARGO_BIN_EXE_fpa"))
            .arg(msg)
            .output()
            .expect("run sh");
        assert!(
            piped.status.success(),
            "{}",
            String::from_utf8_lossy(&piped.stderr)
        );
        assert_eq!(String::from_utf8(piped.stdout).unwrap(), format!("{msg}\n"));
    }
}
