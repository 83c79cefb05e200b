// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// PSK format of the main channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Modulation {
    #[serde(rename = "BPSK")]
    Bpsk,
    #[serde(rename = "QPSK")]
    Qpsk,
    #[serde(rename = "8PSK")]
    Psk8,
    #[serde(rename = "16PSK")]
    Psk16,
}

impl Modulation {
    pub const ALL: [Modulation; 4] = [Self::Bpsk, Self::Qpsk, Self::Psk8, Self::Psk16];

    pub fn bits_per_symbol(self) -> u32 {
        match self {
            Self::Bpsk => 1,
            Self::Qpsk => 2,
            Self::Psk8 => 3,
            Self::Psk16 => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Bpsk => "BPSK",
            Self::Qpsk => "QPSK",
            Self::Psk8 => "8PSK",
            Self::Psk16 => "16PSK",
        }
    }
}

impl fmt::Display for Modulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Modulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "BPSK" | "2PSK" => Ok(Self::Bpsk),
            "QPSK" | "4PSK" => Ok(Self::Qpsk),
            "8PSK" => Ok(Self::Psk8),
            "16PSK" => Ok(Self::Psk16),
            other => Err(Error::config(format!("unknown modulation `{other}`"))),
        }
    }
}

/// The two THz bands with tabulated behavior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    /// 660–695 GHz.
    B,
    /// 855–890 GHz.
    C,
}

impl Channel {
    pub fn name(self) -> &'static str {
        match self {
            Self::B => "B",
            Self::C => "C",
        }
    }

    pub fn band_ghz(self) -> [f64; 2] {
        match self {
            Self::B => [660.0, 695.0],
            Self::C => [855.0, 890.0],
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "B" => Ok(Self::B),
            "C" => Ok(Self::C),
            other => Err(Error::config(format!("unknown channel `{other}` (expected B or C)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub modulation: Modulation,
    pub distance_cm: f64,
    pub ber: f64,
}

/// Expected main-channel BER as a function of modulation and distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelProfile {
    pub channel_id: Channel,
    pub band_ghz: [f64; 2],
    pub entries: Vec<ProfileEntry>,
}

const BUILTIN_B: &str = include_str!("../../profiles/channel_b.toml");
const BUILTIN_C: &str = include_str!("../../profiles/channel_c.toml");

impl ChannelProfile {
    pub fn new(channel_id: Channel, band_ghz: [f64; 2], entries: Vec<ProfileEntry>) -> Result<Self> {
        let profile = Self {
            channel_id,
            band_ghz,
            entries,
        };
        profile.validate()?;
        Ok(profile)
    }

    /// Parses and validates the TOML profile format.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let profile: Self = toml::from_str(text).map_err(|e| Error::profile(e.message().to_owned()))?;
        profile.validate()?;
        Ok(profile)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("profile serializes")
    }

    /// Reconstructed example profile shipped with the crate.
    pub fn builtin(channel: Channel) -> Self {
        let text = match channel {
            Channel::B => BUILTIN_B,
            Channel::C => BUILTIN_C,
        };
        Self::from_toml_str(text).expect("bundled profile is valid")
    }

    /// File name under which a profile for `channel` is searched.
    pub fn file_name(channel: Channel) -> String {
        format!("channel_{}.toml", channel.name().to_ascii_lowercase())
    }

    fn validate(&self) -> Result<()> {
        let mut last: BTreeMap<Modulation, f64> = BTreeMap::new();
        for e in &self.entries {
            if !(0.0..=1.0).contains(&e.ber) {
                return Err(Error::profile(format!(
                    "{} at {} cm: BER {} outside [0, 1]",
                    e.modulation, e.distance_cm, e.ber
                )));
            }
            if !(e.distance_cm.is_finite() && e.distance_cm > 0.0) {
                return Err(Error::profile(format!(
                    "{}: distance {} cm must be positive",
                    e.modulation, e.distance_cm
                )));
            }
            if let Some(prev) = last.insert(e.modulation, e.distance_cm) {
                if e.distance_cm <= prev {
                    return Err(Error::profile(format!(
                        "{}: distances must be strictly increasing ({} after {})",
                        e.modulation, e.distance_cm, prev
                    )));
                }
            }
        }
        Ok(())
    }

    /// Grid points for one modulation, in increasing distance.
    pub fn grid(&self, modulation: Modulation) -> impl Iterator<Item = &ProfileEntry> {
        self.entries.iter().filter(move |e| e.modulation == modulation)
    }

    /// Covered distance range for `modulation`, if any.
    pub fn coverage(&self, modulation: Modulation) -> Option<(f64, f64)> {
        let mut grid = self.grid(modulation);
        let first = grid.next()?.distance_cm;
        let last = grid.last().map_or(first, |e| e.distance_cm);
        Some((first, last))
    }

    pub fn lookup_ber(&self, modulation: Modulation, distance_cm: f64) -> Result<f64> {
        lookup_ber(self, modulation, distance_cm)
    }
}

/// Expected BER at `distance_cm`: the stored value on a grid point, linear
/// interpolation between neighbours, and an error outside the grid.
pub fn lookup_ber(profile: &ChannelProfile, modulation: Modulation, distance_cm: f64) -> Result<f64> {
    let out_of_range = |min_cm, max_cm| Error::OutOfRange {
        modulation: modulation.to_string(),
        distance_cm,
        min_cm,
        max_cm,
    };
    let grid: Vec<&ProfileEntry> = profile.grid(modulation).collect();
    let (Some(first), Some(last)) = (grid.first(), grid.last()) else {
        return Err(out_of_range(f64::NAN, f64::NAN));
    };
    if !(distance_cm >= first.distance_cm && distance_cm <= last.distance_cm) {
        return Err(out_of_range(first.distance_cm, last.distance_cm));
    }
    let upper = grid.partition_point(|e| e.distance_cm < distance_cm);
    let hi = grid[upper];
    if hi.distance_cm == distance_cm {
        return Ok(hi.ber);
    }
    let lo = grid[upper - 1];
    let t = (distance_cm - lo.distance_cm) / (hi.distance_cm - lo.distance_cm);
    Ok(lo.ber + t * (hi.ber - lo.ber))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ChannelProfile {
        let e = |modulation, distance_cm, ber| ProfileEntry {
            modulation,
            distance_cm,
            ber,
        };
        ChannelProfile::new(
            Channel::B,
            Channel::B.band_ghz(),
            vec![
                e(Modulation::Psk8, 1300.0, 0.10),
                e(Modulation::Psk8, 1400.0, 0.20),
                e(Modulation::Psk8, 1500.0, 0.25),
            ],
        )
        .unwrap()
    }

    #[test]
    fn exact_hit_and_interpolation() {
        let p = small();
        assert_eq!(p.lookup_ber(Modulation::Psk8, 1400.0).unwrap(), 0.20);
        assert_eq!(p.lookup_ber(Modulation::Psk8, 1300.0).unwrap(), 0.10);
        assert_eq!(p.lookup_ber(Modulation::Psk8, 1500.0).unwrap(), 0.25);
        assert!((p.lookup_ber(Modulation::Psk8, 1350.0).unwrap() - 0.15).abs() < 1e-15);
    }

    #[test]
    fn out_of_range() {
        let p = small();
        assert!(matches!(p.lookup_ber(Modulation::Psk8, 10.0), Err(Error::OutOfRange { .. })));
        assert!(matches!(p.lookup_ber(Modulation::Psk8, 1500.1), Err(Error::OutOfRange { .. })));
        assert!(matches!(p.lookup_ber(Modulation::Bpsk, 1400.0), Err(Error::OutOfRange { .. })));
        assert!(p.lookup_ber(Modulation::Psk8, f64::NAN).is_err());
    }

    #[test]
    fn builtin_grid_hit() {
        let b = ChannelProfile::builtin(Channel::B);
        let stored = b
            .grid(Modulation::Psk8)
            .find(|e| e.distance_cm == 1400.0)
            .unwrap()
            .ber;
        assert_eq!(b.lookup_ber(Modulation::Psk8, 1400.0).unwrap(), stored);
        assert_eq!(b.coverage(Modulation::Psk16), Some((200.0, 2000.0)));
        assert_eq!(ChannelProfile::builtin(Channel::C).channel_id, Channel::C);
    }

    #[test]
    fn rejects_bad_profiles() {
        let text = r#"
channel_id = "B"
band_ghz = [660.0, 695.0]
[[entries]]
modulation = "QPSK"
distance_cm = 300.0
ber = 0.1
[[entries]]
modulation = "QPSK"
distance_cm = 200.0
ber = 0.1
"#;
        assert!(matches!(ChannelProfile::from_toml_str(text), Err(Error::Profile(_))));
        let bad_ber = text.replace("300.0", "100.0").replace("ber = 0.1\n[[", "ber = 1.5\n[[");
        assert!(matches!(ChannelProfile::from_toml_str(&bad_ber), Err(Error::Profile(_))));
        assert!(matches!(ChannelProfile::from_toml_str("channel_id = 3"), Err(Error::Profile(_))));
        assert!(matches!(
            ChannelProfile::from_toml_str(&text.replace("\"QPSK\"", "\"64QAM\"")),
            Err(Error::Profile(_))
        ));
    }

    #[test]
    fn round_trips_through_toml() {
        let p = small();
        assert_eq!(ChannelProfile::from_toml_str(&p.to_toml_string()).unwrap(), p);
    }

    #[test]
    fn parses_names() {
        assert_eq!("16psk".parse::<Modulation>().unwrap(), Modulation::Psk16);
        assert_eq!(" c ".parse::<Channel>().unwrap(), Channel::C);
        assert!("D".parse::<Channel>().is_err());
        assert!("64QAM".parse::<Modulation>().is_err());
    }
}
