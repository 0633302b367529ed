//! Public setting labels, the concrete measurements behind them, and the
//! sifting tables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bell::{Inequality, Party};
use crate::error::{Error, Result};
use crate::tritter::{product_setting, MeasurementSetting, PhaseTriple};

/// The six pairs `ij` a party can choose from in h3DEB.
pub const H3DEB_PAIRS: [(u8, u8); 6] = [(0, 0), (0, 2), (2, 2), (1, 1), (1, 3), (3, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProtocolVariant {
    /// Four single-tritter settings per party, CHSH-3 checks.
    #[serde(rename = "3deb")]
    ThreeDeb,
    /// Six product settings per party, hCHSH-3 checks.
    #[serde(rename = "h3deb")]
    HThreeDeb,
}

impl ProtocolVariant {
    pub fn name(self) -> &'static str {
        match self {
            ProtocolVariant::ThreeDeb => "3deb",
            ProtocolVariant::HThreeDeb => "h3deb",
        }
    }

    pub fn inequality(self) -> Inequality {
        match self {
            ProtocolVariant::ThreeDeb => Inequality::Chsh3,
            ProtocolVariant::HThreeDeb => Inequality::Hchsh3,
        }
    }

    /// Labels each party draws from, in table order.
    pub fn labels(self) -> Vec<SettingLabel> {
        match self {
            ProtocolVariant::ThreeDeb => (0..4).map(SettingLabel::Single).collect(),
            ProtocolVariant::HThreeDeb => H3DEB_PAIRS
                .iter()
                .map(|&(i, j)| SettingLabel::Pair(i, j))
                .collect(),
        }
    }

    pub fn setting(self, party: Party, label: SettingLabel) -> Result<MeasurementSetting> {
        match (self, label, party) {
            (ProtocolVariant::ThreeDeb, SettingLabel::Single(a), Party::Alice) => {
                alice_setting_3deb(a)
            }
            (ProtocolVariant::ThreeDeb, SettingLabel::Single(b), Party::Bob) => bob_setting_3deb(b),
            (ProtocolVariant::HThreeDeb, SettingLabel::Pair(i, j), party) => {
                setting_h3deb(party, (i, j))
            }
            _ => Err(Error::WrongVariant(label.to_string(), self.name())),
        }
    }

    pub fn sift(self, alice: SettingLabel, bob: SettingLabel) -> Result<SiftClass> {
        match (self, alice, bob) {
            (ProtocolVariant::ThreeDeb, SettingLabel::Single(a), SettingLabel::Single(b)) => {
                sift_3deb(a, b)
            }
            (ProtocolVariant::HThreeDeb, SettingLabel::Pair(i, j), SettingLabel::Pair(k, l)) => {
                sift_h3deb((i, j), (k, l))
            }
            _ => Err(Error::WrongVariant(format!("{alice}/{bob}"), self.name())),
        }
    }
}

impl fmt::Display for ProtocolVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProtocolVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "3deb" => Ok(ProtocolVariant::ThreeDeb),
            "h3deb" => Ok(ProtocolVariant::HThreeDeb),
            other => Err(format!(
                "unknown variant `{other}` (expected 3deb or h3deb)"
            )),
        }
    }
}

/// A publicly announced setting choice: `a` for 3DEB, `ij` for h3DEB.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SettingLabel {
    Single(u8),
    Pair(u8, u8),
}

impl fmt::Display for SettingLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SettingLabel::Single(a) => write!(f, "{a}"),
            SettingLabel::Pair(i, j) => write!(f, "{i}{j}"),
        }
    }
}

impl FromStr for SettingLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let digits: Vec<u8> = s
            .chars()
            .map(|ch| ch.to_digit(10).map(|d| d as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Transcript(format!("bad setting label `{s}`")))?;
        match digits[..] {
            [a] if a < 4 => Ok(SettingLabel::Single(a)),
            [i, j] if H3DEB_PAIRS.contains(&(i, j)) => Ok(SettingLabel::Pair(i, j)),
            _ => Err(Error::Transcript(format!("bad setting label `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SiftClass {
    Key,
    Check1,
    Check2,
    Discard,
}

impl SiftClass {
    pub fn name(self) -> &'static str {
        match self {
            SiftClass::Key => "key",
            SiftClass::Check1 => "check1",
            SiftClass::Check2 => "check2",
            SiftClass::Discard => "discard",
        }
    }

    pub fn is_check(self) -> bool {
        matches!(self, SiftClass::Check1 | SiftClass::Check2)
    }
}

impl fmt::Display for SiftClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SiftClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "key" => Ok(SiftClass::Key),
            "check1" => Ok(SiftClass::Check1),
            "check2" => Ok(SiftClass::Check2),
            "discard" => Ok(SiftClass::Discard),
            other => Err(Error::Transcript(format!("bad sift class `{other}`"))),
        }
    }
}

fn check_index(i: u8) -> Result<()> {
    if i > 3 {
        return Err(Error::SettingIndex(i));
    }
    Ok(())
}

fn alice_triple(a: u8) -> PhaseTriple {
    PhaseTriple::zeta_geometric(a as i64)
}

fn bob_triple(b: u8) -> PhaseTriple {
    PhaseTriple::zeta_geometric(-(b as i64))
}

/// Alice's `A_a`: tritter `(1, ζᵃ, ζ²ᵃ)`, standard detectors.
pub fn alice_setting_3deb(a: u8) -> Result<MeasurementSetting> {
    check_index(a)?;
    Ok(MeasurementSetting::standard(
        alice_triple(a),
        format!("A{a}"),
    ))
}

/// Bob's `B_b`: tritter `(1, ζ⁻ᵇ, ζ⁻²ᵇ)`, standard detectors.
pub fn bob_setting_3deb(b: u8) -> Result<MeasurementSetting> {
    check_index(b)?;
    Ok(MeasurementSetting::standard(bob_triple(b), format!("B{b}")))
}

/// The product observable `X_i X_j` for a pair in the h3DEB set, as one
/// tritter with permuted detectors.
pub fn setting_h3deb(party: Party, (i, j): (u8, u8)) -> Result<MeasurementSetting> {
    if !H3DEB_PAIRS.contains(&(i, j)) {
        return Err(Error::PairNotInSet(i, j));
    }
    let (first, second, prefix) = match party {
        Party::Alice => (alice_triple(i), alice_triple(j), 'A'),
        Party::Bob => (bob_triple(i), bob_triple(j), 'B'),
    };
    Ok(product_setting(&first, &second).with_label(format!("{prefix}{i}{j}")))
}

/// 3DEB sifting table.
pub fn sift_3deb(a: u8, b: u8) -> Result<SiftClass> {
    check_index(a)?;
    check_index(b)?;
    Ok(match (a, b) {
        _ if a == b => SiftClass::Key,
        (0 | 2, 1 | 3) => SiftClass::Check1,
        (1 | 3, 0 | 2) => SiftClass::Check2,
        _ => SiftClass::Discard,
    })
}

/// h3DEB sifting table.
pub fn sift_h3deb(alice: (u8, u8), bob: (u8, u8)) -> Result<SiftClass> {
    for (i, j) in [alice, bob] {
        if !H3DEB_PAIRS.contains(&(i, j)) {
            return Err(Error::PairNotInSet(i, j));
        }
    }
    let even = |(i, _): (u8, u8)| i % 2 == 0;
    Ok(match (even(alice), even(bob)) {
        _ if alice == bob => SiftClass::Key,
        (true, false) => SiftClass::Check1,
        (false, true) => SiftClass::Check2,
        _ => SiftClass::Discard,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{zeta_pow, EPS};
    use crate::tritter::{observable, DetectorKind};

    #[test]
    fn alice_3deb_settings() {
        assert!(alice_setting_3deb(0)
            .unwrap()
            .phases
            .approx_eq(&PhaseTriple::unit(), EPS));
        let a2 = PhaseTriple::new(1.0.into(), zeta_pow(2), zeta_pow(4)).unwrap();
        assert!(alice_setting_3deb(2).unwrap().phases.approx_eq(&a2, EPS));
        let a3 = PhaseTriple::new(1.0.into(), zeta_pow(3), zeta_pow(6)).unwrap();
        assert!(alice_setting_3deb(3).unwrap().phases.approx_eq(&a3, EPS));
        assert!(matches!(alice_setting_3deb(4), Err(Error::SettingIndex(4))));
    }

    #[test]
    fn bob_3deb_settings() {
        assert!(bob_setting_3deb(0)
            .unwrap()
            .phases
            .approx_eq(&PhaseTriple::unit(), EPS));
        let b1 = PhaseTriple::new(1.0.into(), zeta_pow(-1), zeta_pow(-2)).unwrap();
        assert!(bob_setting_3deb(1).unwrap().phases.approx_eq(&b1, EPS));
        for b in 0..4 {
            let bob = bob_setting_3deb(b).unwrap();
            assert_eq!(bob.detector, DetectorKind::StandardZ);
            assert!(bob
                .phases
                .approx_eq(&alice_setting_3deb(b).unwrap().phases.conj(), EPS));
        }
        assert!(bob_setting_3deb(9).is_err());
    }

    #[test]
    fn h3deb_settings() {
        let a00 = setting_h3deb(Party::Alice, (0, 0)).unwrap();
        assert!(a00.phases.approx_eq(&PhaseTriple::unit(), EPS));
        assert_eq!(a00.detector, DetectorKind::ConjugateZ);

        let a02 = setting_h3deb(Party::Alice, (0, 2)).unwrap();
        let direct = observable(&alice_setting_3deb(0).unwrap())
            * observable(&alice_setting_3deb(2).unwrap());
        assert!(observable(&a02).approx_eq(&direct, 1e-12));

        for pair in H3DEB_PAIRS {
            let a = setting_h3deb(Party::Alice, pair).unwrap();
            let b = setting_h3deb(Party::Bob, pair).unwrap();
            assert!(b.phases.approx_eq(&a.phases.conj(), 1e-12), "{pair:?}");
        }
        assert!(matches!(
            setting_h3deb(Party::Bob, (2, 0)),
            Err(Error::PairNotInSet(2, 0))
        ));
    }

    #[test]
    fn table_3deb() {
        assert_eq!(sift_3deb(2, 2).unwrap(), SiftClass::Key);
        assert_eq!(sift_3deb(0, 3).unwrap(), SiftClass::Check1);
        assert_eq!(sift_3deb(0, 2).unwrap(), SiftClass::Discard);
        assert_eq!(sift_3deb(3, 2).unwrap(), SiftClass::Check2);
        assert!(sift_3deb(0, 4).is_err());

        // row by row against the published table
        let rows = [
            [
                SiftClass::Key,
                SiftClass::Check1,
                SiftClass::Discard,
                SiftClass::Check1,
            ],
            [
                SiftClass::Check2,
                SiftClass::Key,
                SiftClass::Check2,
                SiftClass::Discard,
            ],
            [
                SiftClass::Discard,
                SiftClass::Check1,
                SiftClass::Key,
                SiftClass::Check1,
            ],
            [
                SiftClass::Check2,
                SiftClass::Discard,
                SiftClass::Check2,
                SiftClass::Key,
            ],
        ];
        for a in 0..4u8 {
            for b in 0..4u8 {
                assert_eq!(sift_3deb(a, b).unwrap(), rows[a as usize][b as usize]);
            }
        }
    }

    #[test]
    fn table_h3deb() {
        assert_eq!(sift_h3deb((1, 3), (1, 3)).unwrap(), SiftClass::Key);
        assert_eq!(sift_h3deb((0, 2), (3, 3)).unwrap(), SiftClass::Check1);
        assert_eq!(sift_h3deb((0, 0), (2, 2)).unwrap(), SiftClass::Discard);
        assert_eq!(sift_h3deb((1, 1), (0, 2)).unwrap(), SiftClass::Check2);
        assert!(sift_h3deb((0, 1), (0, 0)).is_err());

        let mut counts = std::collections::HashMap::new();
        for a in H3DEB_PAIRS {
            for b in H3DEB_PAIRS {
                *counts.entry(sift_h3deb(a, b).unwrap()).or_insert(0) += 1;
            }
        }
        assert_eq!(counts[&SiftClass::Key], 6);
        assert_eq!(counts[&SiftClass::Check1], 9);
        assert_eq!(counts[&SiftClass::Check2], 9);
        assert_eq!(counts[&SiftClass::Discard], 12);
    }

    #[test]
    fn labels_parse_and_print() {
        for v in [ProtocolVariant::ThreeDeb, ProtocolVariant::HThreeDeb] {
            for l in v.labels() {
                assert_eq!(l.to_string().parse::<SettingLabel>().unwrap(), l);
            }
        }
        assert!("4".parse::<SettingLabel>().is_err());
        assert!("20".parse::<SettingLabel>().is_err());
        assert!("x".parse::<SettingLabel>().is_err());
    }

    #[test]
    fn variant_dispatch_rejects_mismatch() {
        let v = ProtocolVariant::ThreeDeb;
        assert!(v.setting(Party::Alice, SettingLabel::Pair(0, 0)).is_err());
        assert!(v
            .sift(SettingLabel::Single(0), SettingLabel::Pair(0, 2))
            .is_err());
        assert_eq!(
            "H3DEB".parse::<ProtocolVariant>().unwrap(),
            ProtocolVariant::HThreeDeb
        );
    }
}
