// SPDX-License-Identifier: Apache-2.0

use super::{Channel, Modulation};

/// Longest THz auxiliary link (cm) that still reaches BER→0, per channel and
/// modulation.
pub const AUX_FEASIBILITY_TABLE: [(Channel, Modulation, f64); 8] = [
    (Channel::B, Modulation::Psk16, 100.0),
    (Channel::B, Modulation::Psk8, 200.0),
    (Channel::B, Modulation::Qpsk, 400.0),
    (Channel::B, Modulation::Bpsk, 600.0),
    (Channel::C, Modulation::Psk16, 50.0),
    (Channel::C, Modulation::Psk8, 150.0),
    (Channel::C, Modulation::Qpsk, 300.0),
    (Channel::C, Modulation::Bpsk, 450.0),
];

/// Maximum auxiliary distance in cm for a THz auxiliary channel.
pub fn aux_feasibility(channel: Channel, modulation: Modulation) -> f64 {
    AUX_FEASIBILITY_TABLE
        .iter()
        .find(|(c, m, _)| *c == channel && *m == modulation)
        .map(|&(_, _, d)| d)
        .expect("table covers every channel and modulation")
}
