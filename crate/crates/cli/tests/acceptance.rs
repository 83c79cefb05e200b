// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use srlnc_core::fec_model::{
    correctable_bits, fec_filter, hamming_distance_min, residual_ber, residual_ser, CorrectionBudget, FecParams,
};
use srlnc_core::gf256::{gf_inv, gf_mul, Gf256};
use srlnc_core::planner::{
    aux_delay, aux_feasibility, aux_rate, code_rate, main_delay, max_aux_distance, plan_link, Channel,
    ChannelProfile, LinkConfig, Modulation, RedundancyMode,
};
use srlnc_core::simulator::{run_simulation, ErrorMode, SimConfig};
use srlnc_core::srlnc::{
    decode_generation, encode_generation, reassemble, segment_stream, CodedSymbol, Generation, Symbol,
};
use srlnc_core::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(value: f64, target: f64, rel: f64) -> bool {
    ((value - target) / target).abs() <= rel
}

fn fec_anchors() -> Outcome {
    let delta = hamming_distance_min(100, 8, 0.73).map_err(|e| e.to_string())?;
    let t = correctable_bits(delta);
    check(delta == 296 && t == 147, || format!("delta_min={delta}, t_k={t}"))?;
    Ok(format!("delta_min={delta}, t_k={t}"))
}

fn code_rate_anchors() -> Outcome {
    let anchors = [(41, 0.71), (10, 0.91), (50, 0.67), (88, 0.53), (25, 0.80), (0, 1.00)];
    let mut worst = 0.0f64;
    for (r, expected) in anchors {
        let rl = code_rate(100, r as f64);
        worst = worst.max((rl - expected).abs());
        check((rl - expected).abs() <= 0.005, || format!("R={r}: R_L={rl:.4}, expected {expected}"))?;
    }
    Ok(format!("max |R_L - anchor| = {worst:.4}"))
}

fn aux_rate_anchors() -> Outcome {
    // (channel, modulation, d_main, d_aux, R, reported bps)
    let anchors = [
        (Channel::B, Modulation::Psk16, 1150.0, 500.0, 50, 2.453e10),
        (Channel::C, Modulation::Psk16, 500.0, 500.0, 10, 3.111e11),
        (Channel::B, Modulation::Psk16, 1500.0, 1500.0, 50, 1.577e12),
        (Channel::C, Modulation::Psk8, 2000.0, 2000.0, 88, 1.400e12),
    ];
    let mut notes = Vec::new();
    for (channel, m, d_main, d_aux, r, reported) in anchors {
        let cfg = LinkConfig::baseline(m, d_main, d_aux);
        let c_aux = aux_rate(&cfg, r as f64).map_err(|e| e.to_string())?;
        check(within(c_aux, reported, 0.03), || {
            format!("{m} {d_main}/{d_aux} cm R={r}: {c_aux:.4e} vs {reported:.4e}")
        })?;
        // the shipped profile must land on the same redundancy
        let plan = plan_link(&ChannelProfile::builtin(channel), &cfg, RedundancyMode::Integer)
            .map_err(|e| e.to_string())?;
        check(plan.r == r && plan.c_aux_bps == c_aux, || {
            format!("profile {channel} {m} at {d_main} cm plans R={} (expected {r})", plan.r)
        })?;
        notes.push(format!("{:+.2}%", (c_aux / reported - 1.0) * 100.0));
    }
    Ok(format!("deviations {}", notes.join(", ")))
}

fn delay_equality() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let m = Modulation::ALL[rng.random_range(0..4)];
        let mut cfg = LinkConfig::baseline(m, rng.random_range(50.0..3000.0), 0.0);
        cfg.k = rng.random_range(1..=256);
        cfg.symbol_bits = [8, 16, 32][rng.random_range(0..3)];
        cfg.fec_rate = rng.random_range(0.2..=1.0);
        cfg.d_aux_cm = rng.random_range(0.0..0.999) * max_aux_distance(&cfg);
        let r = rng.random_range(1..=cfg.k) as f64;
        let c_aux = aux_rate(&cfg, r).map_err(|e| e.to_string())?;
        let (t_main, t_aux) = (main_delay(&cfg), aux_delay(&cfg, r, c_aux));
        let rel = ((t_aux - t_main) / t_main).abs();
        worst = worst.max(rel);
        check(rel <= 1e-12, || format!("{cfg:?} R={r}: relative gap {rel:e}"))?;
    }
    Ok(format!("1000 configs, max relative gap {worst:.2e}"))
}

fn feasibility_table() -> Outcome {
    let expected = [
        (Channel::B, [100.0, 200.0, 400.0, 600.0]),
        (Channel::C, [50.0, 150.0, 300.0, 450.0]),
    ];
    let order = [Modulation::Psk16, Modulation::Psk8, Modulation::Qpsk, Modulation::Bpsk];
    for (channel, row) in expected {
        for (m, d) in order.into_iter().zip(row) {
            let got = aux_feasibility(channel, m);
            check(got == d, || format!("{channel} {m}: {got} cm, expected {d}"))?;
        }
    }
    Ok("8 entries exact".into())
}

fn random_generation(rng: &mut ChaCha8Rng, k: usize, sym_len: usize) -> Generation {
    let symbols = (0..k)
        .map(|_| {
            let mut s = vec![0u8; sym_len];
            rng.fill_bytes(&mut s);
            s
        })
        .collect();
    Generation::new(0, sym_len * 8, symbols).expect("valid generation")
}

/// Shift-and-add multiply reduced by x^8 + x^4 + x^3 + x^2 + 1.
fn naive_mul(mut a: u8, mut b: u8) -> u8 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 != 0 {
            acc ^= a;
        }
        a = (a << 1) ^ if a & 0x80 != 0 { 0x1D } else { 0 };
        b >>= 1;
    }
    acc
}

/// Determinant by cofactor expansion with the naive multiply.
fn naive_det(m: &[Vec<u8>]) -> u8 {
    if m.len() == 1 {
        return m[0][0];
    }
    (0..m.len()).fold(0, |acc, col| {
        let minor: Vec<Vec<u8>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != col).map(|(_, &v)| v).collect())
            .collect();
        acc ^ naive_mul(m[0][col], naive_det(&minor))
    })
}

fn codec_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);

    // systematic invariance
    for _ in 0..1000 {
        let k = rng.random_range(1..=100);
        let sym_len = rng.random_range(1..=8);
        let gen = random_generation(&mut rng, k, sym_len);
        let r = rng.random_range(0..=50);
        let coded = encode_generation(&gen, r, rng.random());
        let same = coded.native.iter().zip(gen.symbols()).all(|(c, s)| &c.payload == s);
        check(same && coded.native.len() == k, || "native symbol altered by encoding".into())?;
    }

    // every K-subset of N symbols
    let mut full_rank = 0;
    let mut singular = 0;
    for k in 1..=6 {
        for n in k..=10 {
            let gen = random_generation(&mut rng, k, 4);
            let coded = encode_generation(&gen, n - k, rng.random());
            let all: Vec<&CodedSymbol> = coded.symbols().collect();
            for mask in 0u32..1 << n {
                if mask.count_ones() as usize != k {
                    continue;
                }
                let picked: Vec<CodedSymbol> =
                    (0..n).filter(|i| mask & (1 << i) != 0).map(|i| all[i].clone()).collect();
                let matrix: Vec<Vec<u8>> =
                    picked.iter().map(|s| s.coefficients.iter().map(|c| c.value()).collect()).collect();
                let invertible = naive_det(&matrix) != 0;
                match decode_generation(&picked, k) {
                    Ok(out) if invertible && out == gen.symbols() => full_rank += 1,
                    Err(Error::RankDeficient { .. }) if !invertible => singular += 1,
                    other => return Err(format!("K={k} N={n} mask={mask:b}: {:?}", other.map(|_| "decoded"))),
                }
            }
        }
    }

    // stream round trip with padding
    let mut lengths: Vec<usize> = (0..60).map(|_| rng.random_range(0..=10_240)).collect();
    lengths.extend([0, 1, 99, 100, 101, 10_240]);
    for len in &lengths {
        let mut data = vec![0u8; *len];
        rng.fill_bytes(&mut data);
        let seg = segment_stream(&data, 8, 100).map_err(|e| e.to_string())?;
        let mut decoded: Vec<Vec<Symbol>> = Vec::new();
        for gen in &seg.generations {
            let r = 40;
            let coded = encode_generation(gen, r, rng.random());
            let mut pool: Vec<CodedSymbol> = coded.symbols().cloned().collect();
            for _ in 0..rng.random_range(0..=r) {
                let victim = rng.random_range(0..pool.len());
                pool.swap_remove(victim);
            }
            let out = match decode_generation(&pool, 100) {
                Err(Error::RankDeficient { .. }) => {
                    pool.extend(coded.native.iter().cloned());
                    decode_generation(&pool, 100)
                }
                other => other,
            };
            decoded.push(out.map_err(|e| e.to_string())?);
        }
        let back = reassemble(&seg.layout, &decoded).map_err(|e| e.to_string())?;
        check(back == data, || format!("round trip of {len} bytes differs"))?;
    }
    Ok(format!(
        "1000 generations systematic; {full_rank} full-rank + {singular} singular subsets; {} streams",
        lengths.len()
    ))
}

fn field_suite() -> Outcome {
    for a in 0..=255u8 {
        for b in 0..=255u8 {
            let got = gf_mul(Gf256(a), Gf256(b)).value();
            check(got == naive_mul(a, b), || format!("{a}·{b}: {got} vs {}", naive_mul(a, b)))?;
        }
    }
    for a in 1..=255u8 {
        let inv = gf_inv(Gf256(a)).map_err(|e| e.to_string())?.value();
        let by_search = (1..=255u8).find(|&b| naive_mul(a, b) == 1).expect("inverse exists");
        check(inv == by_search, || format!("inverse of {a}: {inv} vs {by_search}"))?;
    }
    check(gf_inv(Gf256(0)).is_err(), || "zero inverted".into())?;
    Ok("65536 products, 255 inverses".into())
}

/// `P(Binomial(n, p) > r)` by summing the pmf.
fn binomial_tail(n: usize, p: f64, r: usize) -> f64 {
    let mut pmf = (1.0 - p).powi(n as i32);
    let mut below = 0.0;
    for k in 0..=n.min(r) {
        below += pmf;
        pmf *= (n - k) as f64 / (k + 1) as f64 * p / (1.0 - p);
    }
    (1.0 - below).max(0.0)
}

fn failure_rate_oracle() -> Outcome {
    let n = 10_000;
    let mut notes = Vec::new();
    for (p_s, k, r) in [(0.42, 100, 43), (0.42, 100, 30), (0.10, 100, 15)] {
        let mut link = LinkConfig::baseline(Modulation::Psk16, 1150.0, 500.0);
        link.k = k;
        let mut cfg = SimConfig::new(link, n, ErrorMode::Symbol, 8);
        cfg.symbol_error_rate = Some(p_s);
        cfg.redundancy = Some(r);
        let rep = run_simulation(&cfg, None).map_err(|e| e.to_string())?;
        let observed = rep.summary.loss_rate;
        let expected = binomial_tail(k, p_s, r);
        let se = (expected * (1.0 - expected) / n as f64).sqrt();
        let z = (observed - expected) / se;
        check(z.abs() <= 3.0, || format!("P_s={p_s} R={r}: {observed} vs {expected:.5} (z={z:.2})"))?;
        notes.push(format!("R={r}: {observed:.4} vs {expected:.4} (z={z:+.2})"));
    }
    Ok(notes.join("; "))
}

fn fec_filter_consistency() -> Outcome {
    let fec = FecParams::new(100, 8, 0.73).map_err(|e| e.to_string())?;
    let expected = residual_ser(residual_ber(0.2, &fec).map_err(|e| e.to_string())?, 8);
    let generations = 1000;
    let symbols = generations * fec.k;
    let mut erased = 0usize;
    for g in 0..generations {
        let flags = fec_filter(&fec, 0.2, CorrectionBudget::Bits(fec.t_k()), g as u64).map_err(|e| e.to_string())?;
        erased += flags.iter().filter(|&&ok| !ok).count();
    }
    let rate = erased as f64 / symbols as f64;
    let sigma = (expected * (1.0 - expected) / symbols as f64).sqrt();
    let z = (rate - expected) / sigma;
    check(z.abs() <= 3.0, || format!("rate {rate:.5} vs {expected:.5} (z={z:.2})"))?;
    Ok(format!("rate {rate:.5} vs {expected:.5} over {symbols} symbols (z={z:+.2})"))
}

fn srlnc_bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_srlnc"))
}

fn run_ok(cmd: &mut Command) -> Result<(), String> {
    let out = cmd.output().map_err(|e| e.to_string())?;
    check(out.status.success(), || {
        format!("{:?} failed: {}", cmd, String::from_utf8_lossy(&out.stderr))
    })
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let read = |name: &str| std::fs::read(dir.path().join(name)).map_err(|e| e.to_string());
    for mode in ["symbol", "bit"] {
        for name in ["a.toml", "b.toml"] {
            run_ok(
                srlnc_bin()
                    .args(["simulate", "--records", "--generations", "300", "--seed", "99", "--mode", mode])
                    .arg("--config")
                    .arg(configs.join("channel_b_16psk.toml"))
                    .arg("--out")
                    .arg(dir.path().join(name)),
            )?;
        }
        check(read("a.toml")? == read("b.toml")?, || format!("simulate ({mode}) outputs differ"))?;
    }
    for name in ["a.csv", "b.csv"] {
        run_ok(
            srlnc_bin()
                .args(["sweep", "--channel", "C", "--daux", "equal", "--r-mode", "frac", "--out"])
                .arg(dir.path().join(name)),
        )?;
    }
    check(read("a.csv")? == read("b.csv")?, || "sweep outputs differ".into())?;
    Ok("simulate (symbol, bit) and sweep byte-identical".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("FEC distance and correction anchors", fec_anchors),
        ("code-rate anchors", code_rate_anchors),
        ("auxiliary-rate anchors", aux_rate_anchors),
        ("planned rate equalizes delays", delay_equality),
        ("THz feasibility table", feasibility_table),
        ("codec property suite", codec_suite),
        ("GF(256) field suite", field_suite),
        ("simulated failure rate vs binomial tail", failure_rate_oracle),
        ("FEC stub erasure rate", fec_filter_consistency),
        ("seeded output determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{secs:.2}s]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{secs:.2}s]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
