// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use srlnc_core::planner::{
    aux_delay, aux_rate, delays, main_delay, max_aux_distance, plan_link, plan_with_ber, Channel, ChannelProfile,
    LinkConfig, Modulation, RedundancyMode,
};
use srlnc_core::Error;

fn modulation() -> impl Strategy<Value = Modulation> {
    prop::sample::select(Modulation::ALL.to_vec())
}

/// Random config with `d_aux` strictly inside the feasible region.
fn feasible_config() -> impl Strategy<Value = (LinkConfig, f64)> {
    (
        modulation(),
        1usize..=200,
        prop::sample::select(vec![8usize, 16, 32]),
        0.3f64..=1.0,
        100.0f64..=3000.0,
        0.0f64..0.999,
        1.0f64..=200.0,
    )
        .prop_map(|(m, k, s, rf, d_main, frac, r)| {
            let mut cfg = LinkConfig::baseline(m, d_main, 0.0);
            cfg.k = k;
            cfg.symbol_bits = s;
            cfg.fec_rate = rf;
            let limit = max_aux_distance(&cfg);
            cfg.d_aux_cm = frac * limit;
            (cfg, r)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn planned_rate_equalizes_delays((cfg, r) in feasible_config()) {
        let c_aux = aux_rate(&cfg, r).unwrap();
        prop_assert!(c_aux > 0.0);
        let t_main = main_delay(&cfg);
        let t_aux = aux_delay(&cfg, r, c_aux);
        prop_assert!(((t_aux - t_main) / t_main).abs() <= 1e-12, "{} vs {}", t_aux, t_main);
    }

    #[test]
    fn rate_errors_exactly_past_the_bound(
        (cfg, _) in feasible_config(),
        over in 0.0f64..500.0,
        integer_r in 1usize..=100,
    ) {
        let limit = max_aux_distance(&cfg);
        let mut past = cfg.clone();
        past.d_aux_cm = limit + over;
        let infeasible = matches!(aux_rate(&past, integer_r as f64), Err(Error::InfeasibleDistance { .. }));
        prop_assert!(infeasible);
        prop_assert!(aux_rate(&cfg, integer_r as f64).is_ok());
    }

    #[test]
    fn redundancy_monotone_in_ber(m in modulation(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let cfg = LinkConfig::baseline(m, 1000.0, 1000.0);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let plo = plan_with_ber(&cfg, lo, RedundancyMode::Integer).unwrap();
        let phi = plan_with_ber(&cfg, hi, RedundancyMode::Integer).unwrap();
        prop_assert!(plo.r <= phi.r);
        prop_assert!(plo.r_exact <= phi.r_exact);
    }

    #[test]
    fn equal_distances_collapse(m in modulation(), d in 1.0f64..5000.0, r in 0usize..=300) {
        let cfg = LinkConfig::baseline(m, d, d);
        let c_aux = aux_rate(&cfg, r as f64).unwrap();
        let expected = r as f64 * cfg.c_main() / cfg.k as f64;
        prop_assert!((c_aux - expected).abs() <= 1e-12 * expected.max(1.0));
    }

    #[test]
    fn plan_invariants_hold(m in modulation(), p_e in 0.0f64..=1.0, frac in 0.0f64..0.999) {
        let mut cfg = LinkConfig::baseline(m, 1200.0, 0.0);
        cfg.d_aux_cm = frac * max_aux_distance(&cfg);
        let plan = plan_with_ber(&cfg, p_e, RedundancyMode::Integer).unwrap();
        prop_assert!(plan.r as f64 >= plan.r_exact);
        prop_assert!(plan.r_l > 0.0 && plan.r_l <= 1.0);
        prop_assert!(plan.c_aux_bps >= 0.0);
        prop_assert!((0.0..=1.0).contains(&plan.p_s) && plan.p_b <= plan.p_s);
        if plan.r > 0 {
            prop_assert!(((plan.t_aux_s - plan.t_main_s) / plan.t_main_s).abs() <= 1e-12);
        }
    }
}

#[test]
fn zero_redundancy_needs_no_aux_channel() {
    let cfg = LinkConfig::baseline(Modulation::Bpsk, 1000.0, 400.0);
    let plan = plan_with_ber(&cfg, 0.05, RedundancyMode::Integer).unwrap();
    assert_eq!((plan.r, plan.r_l, plan.c_aux_bps), (0, 1.0, 0.0));
    let d = delays(&cfg, 0.0).unwrap();
    assert_eq!(d.t_aux, 4.0 / 3e8);
}

#[test]
fn aux_rate_grows_with_modulation_on_builtin_profiles() {
    for channel in [Channel::B, Channel::C] {
        let profile = ChannelProfile::builtin(channel);
        let mut checked = 0;
        for d_aux in [None, Some(50.0), Some(500.0)] {
            let mut d = 200.0;
            while d <= 2000.0 {
                let rates: Vec<f64> = Modulation::ALL
                    .iter()
                    .map(|&m| {
                        let cfg = LinkConfig::baseline(m, d, d_aux.unwrap_or(d));
                        plan_link(&profile, &cfg, RedundancyMode::Integer).unwrap().c_aux_bps
                    })
                    .collect();
                assert!(
                    rates.windows(2).all(|w| w[0] <= w[1]),
                    "{channel:?} d_main={d} d_aux={d_aux:?}: {rates:?}"
                );
                checked += 1;
                d += 50.0;
            }
        }
        assert_eq!(checked, 3 * 37);
    }
}

#[test]
fn builtin_profiles_cover_the_sweep_grid() {
    for channel in [Channel::B, Channel::C] {
        let profile = ChannelProfile::builtin(channel);
        for m in Modulation::ALL {
            let (lo, hi) = profile.coverage(m).unwrap();
            assert!(lo <= 200.0 && hi >= 2000.0, "{channel:?} {m}");
        }
        let text = profile.to_toml_string();
        assert_eq!(ChannelProfile::from_toml_str(&text).unwrap(), profile);
    }
}
