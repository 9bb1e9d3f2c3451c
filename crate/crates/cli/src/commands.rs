use std::collections::hash_map::RandomState;
use std::fmt::Write as _;
use std::hash::{BuildHasher, Hasher};

use fpa_core::combinatorics::{
    ball_size_bruteforce, ball_size_exact, bounds_report, build_matrix, greedy_construct,
    permanent_naive, permanent_ryser, BinaryMatrix,
};
use fpa_core::{
    encode, estimate_privacy, local_decode, perturb, pir_retrieve, pir_setup, run_experiment,
    unique_decode, ChannelConfig, ChannelMode, CodeParams, Error, FreqPerm, Message, PrivacyMode,
    RandomSource, Result,
};
use serde::Serialize;
use serde_json::json;

use super::{
    BallMethod, Command, FarmArgs, Format, NoiseArgs, NoiseMode, PermArgs, PermMethod, PirCommand,
    PrivacyArg,
};

/// Runs one command and returns its stdout text.
pub(crate) fn run(command: Command, format: Format) -> Result<String> {
    let out = Output(format);
    match command {
        Command::Encode { lambda, n, message } => {
            let msg: Message = message.parse()?;
            let params = CodeParams::new(lambda, n, msg.len())?;
            let word = encode(&msg, &params)?;
            out.emit(
                &json!({ "lambda": lambda, "n": n, "k": msg.len(), "message": msg.to_string(), "word": word.as_slice() }),
                || format!("{word}\n"),
            )
        }
        Command::Decode { lambda, k, word } => {
            let word = FreqPerm::parse(&word, lambda)?;
            let params = CodeParams::new(lambda, word.len(), k)?;
            let msg = unique_decode(&word, &params)?;
            out.emit(
                &json!({ "word": word.as_slice(), "message": msg.to_string() }),
                || format!("{msg}\n"),
            )
        }
        Command::Local {
            lambda,
            k,
            word,
            i,
            seed,
        } => {
            let word = FreqPerm::parse(&word, lambda)?;
            let params = CodeParams::new(lambda, word.len(), k)?;
            let mut rng = source(seed);
            let r = local_decode(&word, i, &params, &mut rng)?;
            out.emit(
                &json!({
                    "bit": r.bit,
                    "iterations": r.iterations,
                    "symbols_read": r.symbols_read,
                    "read_positions": r.read_positions,
                    "seed": rng.seed(),
                }),
                || {
                    format!(
                        "bit: {}\niterations: {}\nsymbols_read: {}\nread_positions: {}\nseed: {}\n",
                        r.bit,
                        r.iterations,
                        r.symbols_read,
                        join(&r.read_positions),
                        rng.seed()
                    )
                },
            )
        }
        Command::Bounds {
            lambda,
            m,
            d,
            exact_cap,
        } => {
            let report = bounds_report(lambda, m, d, exact_cap)?;
            out.emit(&report, || {
                let show = |v: Option<String>| v.unwrap_or_else(|| "n/a (above exact cap)".into());
                let mut s = String::new();
                let _ = writeln!(
                    s,
                    "lambda: {}\nm: {}\nn: {}\nd: {}",
                    report.lambda, report.m, report.n, report.d
                );
                let _ = writeln!(s, "space: {}", report.space);
                let _ = writeln!(
                    s,
                    "ball_dminus1: {}",
                    show(report.ball_dminus1.as_ref().map(|v| v.to_string()))
                );
                let _ = writeln!(
                    s,
                    "ball_half: {}",
                    show(report.ball_half.as_ref().map(|v| v.to_string()))
                );
                let _ = writeln!(
                    s,
                    "gilbert_lower: {}",
                    show(report.gilbert_lower.as_ref().map(|v| {
                        format!("{v} (ceil {})", report.gilbert_ceil().expect("exact"))
                    }))
                );
                let _ = writeln!(
                    s,
                    "packing_upper: {}",
                    show(report.packing_upper.as_ref().map(|v| {
                        format!("{v} (floor {})", report.packing_floor().expect("exact"))
                    }))
                );
                let _ = writeln!(s, "asym_lower_log: {:.6}", report.asym_lower_log);
                let _ = writeln!(s, "asym_upper_log: {:.6}", report.asym_upper_log);
                let _ = writeln!(s, "exact: {}", report.exact());
                s
            })
        }
        Command::Ball {
            lambda,
            n,
            d,
            method,
        } => {
            let volume = match method {
                BallMethod::Exact => ball_size_exact(lambda, n, d)?,
                BallMethod::Brute => ball_size_bruteforce(lambda, n, d)?,
            };
            out.emit(
                &json!({ "lambda": lambda, "n": n, "d": d, "volume": volume.to_string() }),
                || format!("{volume}\n"),
            )
        }
        Command::Perm(args) => perm(args, out),
        Command::Greedy { lambda, n, d, list } => {
            let code = greedy_construct(lambda, n, d)?;
            let words: Vec<&[usize]> = code.iter().map(FreqPerm::as_slice).collect();
            out.emit(
                &json!({ "lambda": lambda, "n": n, "d": d, "size": code.len(), "words": words }),
                || {
                    let mut s = format!("size: {}\n", code.len());
                    if list {
                        for w in &code {
                            let _ = writeln!(s, "{w}");
                        }
                    }
                    s
                },
            )
        }
        Command::Channel {
            lambda,
            n,
            k,
            delta,
            trials,
            noise,
            seed,
        } => {
            let params = CodeParams::new(lambda, n, k)?;
            let rng = source(seed);
            let report = run_experiment(&params, &channel(delta, &noise), trials, &rng)?;
            out.emit(&report, || {
                format!(
                    "trials: {}\ndelta: {}\nd: {}\nuds_rate: {}\nlfi_error_rate: {}\nlfi_bound: {}\nlocal_error_rate: {}\nmean_reads: {}\nseed: {}\n",
                    report.trials,
                    report.delta,
                    report.d,
                    report.uds_rate,
                    report.lfi_error_rate,
                    report.lfi_bound,
                    report.local_error_rate,
                    report.mean_reads,
                    report.seed
                )
            })
        }
        Command::Perturb {
            lambda,
            word,
            delta,
            noise,
            seed,
        } => {
            let word = FreqPerm::parse(&word, lambda)?;
            let mut rng = source(seed);
            let noisy = perturb(&word, &channel(delta, &noise), &mut rng)?;
            let distance = noisy.distance(&word)?;
            out.emit(
                &json!({ "word": noisy.as_slice(), "distance": distance, "seed": rng.seed() }),
                || format!("{noisy}\n"),
            )
        }
        Command::Pir { command } => pir(command, out),
    }
}

fn perm(args: PermArgs, out: Output) -> Result<String> {
    let matrix = match (&args.rows, args.lambda, args.n, args.d) {
        (Some(rows), ..) => parse_rows(rows)?,
        (None, Some(lambda), Some(n), Some(d)) => build_matrix(lambda, n, d)?,
        _ => {
            return Err(Error::InvalidParams(
                "give either --rows or all of --lambda, --n, --d".into(),
            ))
        }
    };
    let per = match args.method {
        PermMethod::Ryser => permanent_ryser(&matrix)?,
        PermMethod::Naive => permanent_naive(&matrix)?,
    };
    out.emit(
        &json!({ "order": matrix.order(), "permanent": per.to_string() }),
        || {
            if args.show_matrix {
                format!("{matrix}{per}\n")
            } else {
                format!("{per}\n")
            }
        },
    )
}

fn parse_rows(text: &str) -> Result<BinaryMatrix> {
    let rows = text
        .split(',')
        .map(|row| {
            row.trim()
                .chars()
                .map(|c| match c {
                    '0' => Ok(0u8),
                    '1' => Ok(1u8),
                    _ => Err(Error::Parse(format!("matrix entry {c:?} is not 0 or 1"))),
                })
                .collect::<Result<Vec<u8>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    BinaryMatrix::from_rows(&rows)
}

fn pir(command: PirCommand, out: Output) -> Result<String> {
    match command {
        PirCommand::Retrieve { farm, i, seed } => {
            let (params, msg) = farm_params(&farm)?;
            let mut servers = pir_setup(&msg, &params)?;
            let mut rng = source(seed);
            let t = pir_retrieve(&mut servers, i, &mut rng)?;
            out.emit(&t, || {
                let mut s = format!("target: {}\nbit: {}\n", t.target, t.bit);
                for q in &t.queries {
                    let _ = writeln!(s, "server {}: position {}", q.server, q.position);
                }
                s
            })
        }
        PirCommand::Privacy {
            farm,
            mode,
            trials,
            seed,
        } => {
            let (params, msg) = farm_params(&farm)?;
            // Exact mode draws no randomness.
            let (mode, mut rng) = match mode {
                PrivacyArg::Exact => (PrivacyMode::Exact, RandomSource::new(seed.unwrap_or(0))),
                PrivacyArg::MonteCarlo => (PrivacyMode::MonteCarlo, source(seed)),
            };
            let e = estimate_privacy(&params, &msg, mode, trials, &mut rng)?;
            out.emit(&e, || {
                let mut s = format!("p_estimate: {}\n", e.p_estimate);
                if e.mode == PrivacyMode::MonteCarlo {
                    let _ = writeln!(s, "std_error: {}\ntrials: {}", e.std_error, e.trials);
                }
                let _ = writeln!(s, "seed: {}", e.seed);
                s
            })
        }
        PirCommand::Retrievability {
            farm,
            trials,
            corrupt_delta,
            seed,
        } => {
            let (params, msg) = farm_params(&farm)?;
            let mut servers = pir_setup(&msg, &params)?;
            let mut rng = source(seed);
            if let Some(delta) = corrupt_delta {
                let noisy = perturb(
                    servers.servers()[0].replica(),
                    &ChannelConfig::swap_walk(delta),
                    &mut rng,
                )?;
                servers.replace_replica(0, noisy)?;
            }
            let r = servers.retrievability(&msg, trials, &mut rng)?;
            out.emit(
                &json!({ "retrievability": r, "trials": trials, "seed": rng.seed() }),
                || format!("retrievability: {r}\nseed: {}\n", rng.seed()),
            )
        }
    }
}

fn farm_params(farm: &FarmArgs) -> Result<(CodeParams, Message)> {
    let msg: Message = farm.message.parse()?;
    Ok((CodeParams::new(farm.lambda, farm.n, msg.len())?, msg))
}

fn channel(delta: usize, noise: &NoiseArgs) -> ChannelConfig {
    ChannelConfig {
        delta,
        mode: match noise.mode {
            NoiseMode::ExactUniform => ChannelMode::ExactUniform,
            NoiseMode::SwapWalk => ChannelMode::SwapWalk,
        },
        walk_steps: noise.walk_steps,
    }
}

/// The given seed, or a fresh one reported on stderr so the run can be
/// replayed.
fn source(seed: Option<u64>) -> RandomSource {
    let seed = seed.unwrap_or_else(|| {
        let seed = RandomState::new().build_hasher().finish();
        eprintln!("fpa: seed {seed}");
        seed
    });
    RandomSource::new(seed)
}

fn join(values: &[usize]) -> String {
    values
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Clone, Copy)]
struct Output(Format);

impl Output {
    fn emit<T: Serialize>(self, value: &T, plain: impl FnOnce() -> String) -> Result<String> {
        match self.0 {
            Format::Plain => Ok(plain()),
            Format::Json => serde_json::to_string_pretty(value)
                .map(|s| s + "\n")
                .map_err(|e| Error::Parse(e.to_string())),
        }
    }
}
