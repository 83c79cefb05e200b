// SPDX-License-Identifier: Apache-2.0

//! Discrete-event Monte Carlo of the dual-channel chain.
//!
//! Each generation is encoded, its natives are sent on the main channel and
//! its redundancy on the auxiliary channel. Both channels start a generation
//! together, once both are free, so on the slower channel generations go out
//! back to back. Symbols arrive one by one after serialization and
//! propagation; main-channel natives may be erased by the FEC layer, while
//! redundancy arrives intact unless auxiliary erasures are switched on.
//!
//! The receiver buffers every symbol of a generation until it can decode,
//! then releases them. A generation that is still undecodable once its last
//! symbol is due is dropped and classified as insufficient or rank-deficient.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fec_model::{fec_filter_with, CorrectionBudget, ResidualErrorModel};
use crate::planner::{self, lookup_ber, ChannelProfile, LinkConfig};
use crate::fec_model::FecParams;
use crate::srlnc::{
    decode_generation, encode_generation, generation_seed, CodedGeneration, CodedSymbol, Generation, Symbol, SymbolKind,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorMode {
    /// Natives erased i.i.d. with the residual symbol error rate.
    #[default]
    Symbol,
    /// Natives erased by the bit-level FEC stub.
    Bit,
}

impl std::str::FromStr for ErrorMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "symbol" => Ok(Self::Symbol),
            "bit" => Ok(Self::Bit),
            other => Err(Error::config(format!("unknown error mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub link: LinkConfig,
    pub generations: usize,
    #[serde(default)]
    pub mode: ErrorMode,
    #[serde(default)]
    pub seed: u64,
    /// Main-channel BER; looked up in the profile when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ber: Option<f64>,
    /// Symbol mode only: use this residual symbol error rate directly.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symbol_error_rate: Option<f64>,
    /// Redundant symbols per generation; planned `⌈P_s·K⌉` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub redundancy: Option<usize>,
    /// Auxiliary rate in bps; the planned equal-arrival rate when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_rate_bps: Option<f64>,
    /// Erasure probability for redundant symbols. Zero by default.
    #[serde(default)]
    pub aux_erasure_rate: f64,
}

impl SimConfig {
    pub fn new(link: LinkConfig, generations: usize, mode: ErrorMode, seed: u64) -> Self {
        Self {
            link,
            generations,
            mode,
            seed,
            ber: None,
            symbol_error_rate: None,
            redundancy: None,
            aux_rate_bps: None,
            aux_erasure_rate: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecodeOutcome {
    Success,
    Insufficient,
    RankDeficient,
}

/// Scheduled timing of one generation, seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationTiming {
    pub launch: f64,
    /// Arrival of the last native symbol.
    pub main_arrival: f64,
    /// Arrival of the last redundant symbol (propagation only when `R = 0`).
    pub aux_arrival: f64,
}

impl GenerationTiming {
    pub fn t_main(&self) -> f64 {
        self.main_arrival - self.launch
    }

    pub fn t_aux(&self) -> f64 {
        self.aux_arrival - self.launch
    }

    pub fn close(&self) -> f64 {
        self.main_arrival.max(self.aux_arrival)
    }
}

/// Per-channel serialization and propagation times of one generation.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ChannelTiming {
    k: usize,
    r: usize,
    tx_main: f64,
    prop_main: f64,
    tx_aux: f64,
    prop_aux: f64,
}

impl ChannelTiming {
    fn new(link: &LinkConfig, r: usize, c_aux: f64) -> Self {
        let bits = |symbols: usize| (symbols * link.symbol_bits) as f64 / link.fec_rate;
        Self {
            k: link.k,
            r,
            tx_main: bits(link.k) / link.c_main(),
            prop_main: link.d_main_cm / 100.0 / link.propagation_speed,
            tx_aux: if r == 0 { 0.0 } else { bits(r) / c_aux },
            prop_aux: link.d_aux_cm / 100.0 / link.propagation_speed,
        }
    }

    fn period(&self) -> f64 {
        self.tx_main.max(self.tx_aux)
    }

    fn native_arrival(&self, launch: f64, pos: usize) -> f64 {
        if pos + 1 == self.k {
            return launch + (self.tx_main + self.prop_main);
        }
        launch + (pos + 1) as f64 * self.tx_main / self.k as f64 + self.prop_main
    }

    fn redundant_arrival(&self, launch: f64, idx: usize) -> f64 {
        if idx + 1 == self.r {
            return launch + (self.tx_aux + self.prop_aux);
        }
        launch + (idx + 1) as f64 * self.tx_aux / self.r as f64 + self.prop_aux
    }

    fn timing(&self, launch: f64) -> GenerationTiming {
        GenerationTiming {
            launch,
            main_arrival: launch + (self.tx_main + self.prop_main),
            aux_arrival: launch + (self.tx_aux + self.prop_aux),
        }
    }
}

/// Arrival schedule for `n` generations with `r` redundant symbols each
/// sent at `c_aux` bps. Generation `g + 1` launches when both channels have
/// finished serializing generation `g`.
pub fn compute_arrival_times(link: &LinkConfig, r: usize, c_aux: f64, n: usize) -> Vec<GenerationTiming> {
    let ch = ChannelTiming::new(link, r, c_aux);
    (0..n).map(|g| ch.timing(g as f64 * ch.period())).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub index: u64,
    pub outcome: DecodeOutcome,
    pub natives_delivered: usize,
    pub natives_erased: usize,
    pub redundant_delivered: usize,
    pub launch_s: f64,
    pub t_main_s: f64,
    pub t_aux_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoded_at_s: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub seed: u64,
    pub mode: ErrorMode,
    pub generations: usize,
    pub k: usize,
    pub symbol_bits: usize,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_e: Option<f64>,
    pub p_s: f64,
    pub c_main_bps: f64,
    pub c_aux_bps: f64,
    pub decoded: usize,
    pub insufficient: usize,
    pub rank_deficient: usize,
    /// Fraction of generations not decoded.
    pub loss_rate: f64,
    /// Erased natives over all natives sent.
    pub symbol_erasure_rate: f64,
    pub max_buffer_symbols: usize,
    /// Time-averaged receiver buffer occupancy.
    pub mean_buffer_symbols: f64,
    pub t_main_s: f64,
    pub t_aux_s: f64,
    /// Largest `|T_main − T_aux|` over generations.
    pub max_skew_s: f64,
    pub duration_s: f64,
    /// Decoded native payload bits per simulated second.
    pub goodput_bps: f64,
    /// Decoded generations whose payload differs from the source; always 0
    /// unless the codec is broken.
    pub payload_mismatches: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub summary: SimSummary,
    #[serde(default, rename = "generation", skip_serializing_if = "Vec::is_empty")]
    pub records: Vec<GenerationRecord>,
}

impl SimReport {
    /// TOML rendering; per-generation records only when `with_records`.
    pub fn to_toml(&self, with_records: bool) -> String {
        if with_records {
            toml::to_string(self).expect("report serializes")
        } else {
            let summary_only = SimReport {
                summary: self.summary.clone(),
                records: Vec::new(),
            };
            toml::to_string(&summary_only).expect("report serializes")
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config(e.message().to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum EventKind {
    Arrival,
    Close,
}

#[derive(Debug, Clone, Copy)]
struct Event {
    time: f64,
    kind: EventKind,
    generation: usize,
    /// Index into the generation's pending symbols; unused for `Close`.
    slot: usize,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    // arrivals before closes at equal times, then FIFO by generation/slot
    fn cmp(&self, other: &Self) -> Ordering {
        self.time
            .total_cmp(&other.time)
            .then_with(|| (self.kind as u8).cmp(&(other.kind as u8)))
            .then_with(|| self.generation.cmp(&other.generation))
            .then_with(|| self.slot.cmp(&other.slot))
    }
}

struct InFlight {
    original: Vec<Symbol>,
    pending: Vec<Option<CodedSymbol>>,
    buffer: Vec<CodedSymbol>,
    decoded_at: Option<f64>,
    natives_delivered: usize,
    natives_erased: usize,
    redundant_delivered: usize,
    timing: GenerationTiming,
}

/// Resolved inputs of a run.
struct Plan {
    p_e: Option<f64>,
    p_s: f64,
    t_k: u64,
    r: usize,
    c_aux: f64,
}

fn resolve(config: &SimConfig, profile: Option<&ChannelProfile>) -> Result<Plan> {
    let link = &config.link;
    link.validate()?;
    if config.generations == 0 {
        return Err(Error::config("at least one generation must be simulated"));
    }
    if !(0.0..=1.0).contains(&config.aux_erasure_rate) {
        return Err(Error::config("aux_erasure_rate must be in [0, 1]"));
    }
    let fec = link.fec()?;
    let lookup = || -> Result<f64> {
        match (config.ber, profile) {
            (Some(ber), _) => Ok(ber),
            (None, Some(profile)) => lookup_ber(profile, link.modulation, link.d_main_cm),
            (None, None) => Err(Error::config("no channel BER: set `ber` or supply a profile")),
        }
    };

    let (p_e, p_s) = match (config.mode, config.symbol_error_rate) {
        (ErrorMode::Symbol, Some(p_s)) => {
            if !(0.0..=1.0).contains(&p_s) {
                return Err(Error::config(format!("symbol_error_rate must be in [0, 1], got {p_s}")));
            }
            (None, p_s)
        }
        (ErrorMode::Bit, Some(_)) => {
            return Err(Error::config("symbol_error_rate applies to symbol mode only"));
        }
        (_, None) => {
            let p_e = lookup()?;
            (Some(p_e), ResidualErrorModel::evaluate(p_e, &fec)?.p_s)
        }
    };

    let r = match config.redundancy {
        Some(r) => r,
        None => planner::required_redundancy(p_s, link.k)?.1,
    };
    let c_aux = match config.aux_rate_bps {
        Some(c) if r > 0 && !(c.is_finite() && c > 0.0) => {
            return Err(Error::config(format!("auxiliary rate must be positive, got {c}")));
        }
        Some(c) => c,
        None => planner::aux_rate(link, r as f64)?,
    };
    Ok(Plan {
        p_e,
        p_s,
        t_k: fec.t_k(),
        r,
        c_aux,
    })
}

/// Runs the whole chain. `profile` is consulted only when the BER is not
/// given in the config.
pub fn run_simulation(config: &SimConfig, profile: Option<&ChannelProfile>) -> Result<SimReport> {
    let plan = resolve(config, profile)?;
    let link = &config.link;
    let fec = link.fec()?;
    let k = link.k;
    let sym_len = link.symbol_bits.div_ceil(8);
    if !link.symbol_bits.is_multiple_of(8) {
        return Err(Error::config("simulation needs symbol sizes in whole bytes"));
    }
    let ch = ChannelTiming::new(link, plan.r, plan.c_aux);
    let n = config.generations;

    let mut heap: BinaryHeap<Reverse<Event>> = BinaryHeap::new();
    let mut in_flight: BTreeMap<usize, InFlight> = BTreeMap::new();
    let mut records: Vec<Option<GenerationRecord>> = vec![None; n];
    let mut next_gen = 0usize;
    let earliest_offset = ch.prop_main.min(ch.prop_aux);

    let mut occupancy = 0usize;
    let mut max_occupancy = 0usize;
    let mut area = 0.0f64;
    let mut now = 0.0f64;
    let mut erased_total = 0usize;
    let mut mismatches = 0usize;

    loop {
        // materialize generations whose first symbol could be due
        while next_gen < n {
            let launch = next_gen as f64 * ch.period();
            let due = heap.peek().map(|Reverse(e)| e.time);
            if due.is_some_and(|t| launch + earliest_offset > t) {
                break;
            }
            let state = launch_generation(config, &plan, &fec, &ch, next_gen, launch, sym_len)?;
            erased_total += state.natives_erased;
            for (slot, sym) in state.pending.iter().enumerate() {
                let Some(sym) = sym else { continue };
                let time = match sym.kind {
                    SymbolKind::Native(pos) => ch.native_arrival(launch, pos),
                    SymbolKind::Redundant(idx) => ch.redundant_arrival(launch, idx),
                };
                heap.push(Reverse(Event {
                    time,
                    kind: EventKind::Arrival,
                    generation: next_gen,
                    slot,
                }));
            }
            heap.push(Reverse(Event {
                time: state.timing.close(),
                kind: EventKind::Close,
                generation: next_gen,
                slot: 0,
            }));
            in_flight.insert(next_gen, state);
            next_gen += 1;
        }

        let Some(Reverse(event)) = heap.pop() else { break };
        area += occupancy as f64 * (event.time - now);
        now = event.time;
        let state = in_flight.get_mut(&event.generation).expect("generation in flight");

        match event.kind {
            EventKind::Arrival => {
                let sym = state.pending[event.slot].take().expect("symbol delivered once");
                if state.decoded_at.is_some() {
                    continue;
                }
                state.buffer.push(sym);
                occupancy += 1;
                max_occupancy = max_occupancy.max(occupancy);
                if state.buffer.len() >= k {
                    if let Ok(decoded) = decode_generation(&state.buffer, k) {
                        if decoded != state.original {
                            mismatches += 1;
                        }
                        occupancy -= state.buffer.len();
                        state.buffer = Vec::new();
                        state.decoded_at = Some(now);
                    }
                }
            }
            EventKind::Close => {
                let state = in_flight.remove(&event.generation).expect("generation in flight");
                let outcome = match state.decoded_at {
                    Some(_) => DecodeOutcome::Success,
                    None => {
                        occupancy -= state.buffer.len();
                        match decode_generation(&state.buffer, k) {
                            Err(Error::RankDeficient { .. }) => DecodeOutcome::RankDeficient,
                            _ => DecodeOutcome::Insufficient,
                        }
                    }
                };
                records[event.generation] = Some(GenerationRecord {
                    index: event.generation as u64,
                    outcome,
                    natives_delivered: state.natives_delivered,
                    natives_erased: state.natives_erased,
                    redundant_delivered: state.redundant_delivered,
                    launch_s: state.timing.launch,
                    t_main_s: state.timing.t_main(),
                    t_aux_s: state.timing.t_aux(),
                    decoded_at_s: state.decoded_at,
                });
            }
        }
    }

    let records: Vec<GenerationRecord> = records.into_iter().map(|r| r.expect("every generation closes")).collect();
    let count = |o: DecodeOutcome| records.iter().filter(|r| r.outcome == o).count();
    let decoded = count(DecodeOutcome::Success);
    let duration = now;
    let first = &records[0];
    let summary = SimSummary {
        seed: config.seed,
        mode: config.mode,
        generations: n,
        k,
        symbol_bits: link.symbol_bits,
        r: plan.r,
        p_e: plan.p_e,
        p_s: plan.p_s,
        c_main_bps: link.c_main(),
        c_aux_bps: plan.c_aux,
        decoded,
        insufficient: count(DecodeOutcome::Insufficient),
        rank_deficient: count(DecodeOutcome::RankDeficient),
        loss_rate: (n - decoded) as f64 / n as f64,
        symbol_erasure_rate: erased_total as f64 / (n * k) as f64,
        max_buffer_symbols: max_occupancy,
        mean_buffer_symbols: if duration > 0.0 { area / duration } else { 0.0 },
        t_main_s: first.t_main_s,
        t_aux_s: first.t_aux_s,
        max_skew_s: records
            .iter()
            .map(|r| (r.t_main_s - r.t_aux_s).abs())
            .fold(0.0, f64::max),
        duration_s: duration,
        goodput_bps: if duration > 0.0 {
            (decoded * k * link.symbol_bits) as f64 / duration
        } else {
            0.0
        },
        payload_mismatches: mismatches,
    };
    Ok(SimReport { summary, records })
}

fn launch_generation(
    config: &SimConfig,
    plan: &Plan,
    fec: &FecParams,
    ch: &ChannelTiming,
    index: usize,
    launch: f64,
    sym_len: usize,
) -> Result<InFlight> {
    let k = config.link.k;
    let mut rng = ChaCha8Rng::seed_from_u64(generation_seed(config.seed, index as u64));
    let coef_seed = rng.next_u64();
    let symbols: Vec<Symbol> = (0..k)
        .map(|_| {
            let mut s = vec![0u8; sym_len];
            rng.fill_bytes(&mut s);
            s
        })
        .collect();
    let generation = Generation::new(index as u64, config.link.symbol_bits, symbols)?;
    let coded = encode_generation(&generation, plan.r, coef_seed);

    let survived: Vec<bool> = match config.mode {
        ErrorMode::Symbol => (0..k).map(|_| !rng.random_bool(plan.p_s)).collect(),
        ErrorMode::Bit => {
            let p_e = plan.p_e.expect("bit mode resolves a BER");
            fec_filter_with(fec, p_e, CorrectionBudget::Bits(plan.t_k), &mut rng)?
        }
    };
    let aux_ok: Vec<bool> = (0..plan.r)
        .map(|_| config.aux_erasure_rate == 0.0 || !rng.random_bool(config.aux_erasure_rate))
        .collect();

    let natives_delivered = survived.iter().filter(|&&s| s).count();
    let redundant_delivered = aux_ok.iter().filter(|&&s| s).count();
    let CodedGeneration { native, redundant, .. } = coded;
    let pending = native
        .into_iter()
        .zip(&survived)
        .map(|(s, &ok)| ok.then_some(s))
        .chain(redundant.into_iter().zip(&aux_ok).map(|(s, &ok)| ok.then_some(s)))
        .collect();

    Ok(InFlight {
        original: generation.into_symbols(),
        pending,
        buffer: Vec::with_capacity(k),
        decoded_at: None,
        natives_delivered,
        natives_erased: k - natives_delivered,
        redundant_delivered,
        timing: ch.timing(launch),
    })
}
