// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;

use srlnc_core::planner::{plan_link, plan_with_ber, PlanResult};

use crate::config::LoadedRun;
use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PlanFormat {
    Text,
    Toml,
}

pub fn plan(run: &LoadedRun, profile: Option<&std::path::Path>) -> Result<PlanResult> {
    let link = run.link();
    let mode = run.file.r_mode;
    if let Some(ber) = run.file.ber {
        return Ok(plan_with_ber(&link, ber, mode)?);
    }
    match run.profile(profile)? {
        Some(p) => Ok(plan_link(&p, &link, mode)?),
        None => Err(CliError::config(
            "no BER source: set `ber`, `channel` or `profile` in the config, or pass --profile",
        )),
    }
}

pub fn render(plan: &PlanResult, format: PlanFormat) -> String {
    match format {
        PlanFormat::Toml => toml::to_string(plan).expect("plan serializes"),
        PlanFormat::Text => render_text(plan),
    }
}

fn render_text(p: &PlanResult) -> String {
    let rows: [(&str, String, &str); 15] = [
        ("p_e", p.p_e.to_string(), ""),
        ("P_b", p.p_b.to_string(), ""),
        ("P_s", p.p_s.to_string(), ""),
        ("delta_min", p.delta_min.to_string(), "bits"),
        ("t_k", p.t_k.to_string(), "bits"),
        ("R_exact", p.r_exact.to_string(), "symbols"),
        ("R", p.r.to_string(), "symbols"),
        ("R_mode", mode_name(p), ""),
        ("R_L", p.r_l.to_string(), ""),
        ("C_main", p.c_main_bps.to_string(), "bps"),
        ("C_aux", p.c_aux_bps.to_string(), "bps"),
        ("d_aux_limit", p.d_aux_limit_cm.to_string(), "cm"),
        ("T_main", p.t_main_s.to_string(), "s"),
        ("T_aux", p.t_aux_s.to_string(), "s"),
        ("redundancy_used", p.redundancy().to_string(), "symbols"),
    ];
    let mut out = String::new();
    for (name, value, unit) in rows {
        let line = format!("{name:<16}{value} {unit}");
        writeln!(out, "{}", line.trim_end()).unwrap();
    }
    if let Some(w) = &p.aux_warning {
        writeln!(out, "warning: {w}").unwrap();
    }
    out
}

fn mode_name(p: &PlanResult) -> String {
    match p.mode {
        srlnc_core::planner::RedundancyMode::Integer => "int".into(),
        srlnc_core::planner::RedundancyMode::Fractional => "frac".into(),
    }
}
