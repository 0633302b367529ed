//! Correlation functions and the two qutrit Bell inequalities.
//!
//! Correlators are `E(XY) = Σ P(X=x, Y=y) · x·y` over outcomes in `{1, ω, ω²}`.
//! CHSH-3 is evaluated as `S ≤ 2`, hCHSH-3 as `−2 Re(T₁) ≤ 9`.

mod config;
mod local;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use config::{
    chsh3_optimal_configuration, hchsh3_optimal_configuration, BellConfiguration, BoundElement,
    Party, Relabel,
};
pub use local::{enumerate_local_models, LocalModelSummary};

use crate::error::{Error, Result};
use crate::linalg::{omega_pow, Complex64, CubeRoot, EPS};
use crate::states::TwoQutritDensity;
use crate::tritter::{measurement_context, MeasurementSetting};

/// Element of an inequality: a single observable, its square, or a product.
///
/// `A*` elements belong to the inequality's first party, `B*` to the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Element {
    A1,
    A2,
    B1,
    B2,
    A1Sq,
    A1A2,
    A2Sq,
    B1Sq,
    B1B2,
    B2Sq,
}

impl Element {
    pub const ALL: [Element; 10] = [
        Element::A1,
        Element::A2,
        Element::B1,
        Element::B2,
        Element::A1Sq,
        Element::A1A2,
        Element::A2Sq,
        Element::B1Sq,
        Element::B1B2,
        Element::B2Sq,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Element::A1 => "A1",
            Element::A2 => "A2",
            Element::B1 => "B1",
            Element::B2 => "B2",
            Element::A1Sq => "A1^2",
            Element::A1A2 => "A1A2",
            Element::A2Sq => "A2^2",
            Element::B1Sq => "B1^2",
            Element::B1B2 => "B1B2",
            Element::B2Sq => "B2^2",
        }
    }

    pub fn is_first_party(self) -> bool {
        matches!(
            self,
            Element::A1 | Element::A2 | Element::A1Sq | Element::A1A2 | Element::A2Sq
        )
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Element {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Element::ALL
            .into_iter()
            .find(|e| e.label() == s)
            .ok_or_else(|| format!("unknown inequality element `{s}`"))
    }
}

/// Correlators keyed by (first-party element, second-party element).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CorrelatorSet {
    entries: BTreeMap<(Element, Element), Complex64>,
}

impl CorrelatorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, first: Element, second: Element, value: Complex64) -> Result<()> {
        if value.norm() > 1.0 + EPS {
            return Err(Error::CorrelatorOutOfRange(first, second, value.norm()));
        }
        self.entries.insert((first, second), value);
        Ok(())
    }

    pub fn get(&self, first: Element, second: Element) -> Result<Complex64> {
        self.entries
            .get(&(first, second))
            .copied()
            .ok_or(Error::MissingCorrelator(first, second))
    }

    pub fn iter(&self) -> impl Iterator<Item = (Element, Element, Complex64)> + '_ {
        self.entries.iter().map(|(&(a, b), &v)| (a, b, v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `U = E(A₁B₁) − E(A₂B₁) + E(A₂B₂)`.
    pub fn u(&self) -> Result<Complex64> {
        use Element::*;
        Ok(self.get(A1, B1)? - self.get(A2, B1)? + self.get(A2, B2)?)
    }

    /// `V = E(A₁B₂)`.
    pub fn v(&self) -> Result<Complex64> {
        self.get(Element::A1, Element::B2)
    }
}

/// The two inequalities this crate evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Inequality {
    Chsh3,
    Hchsh3,
}

impl Inequality {
    pub fn classical_bound(self) -> f64 {
        match self {
            Inequality::Chsh3 => 2.0,
            Inequality::Hchsh3 => 9.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Inequality::Chsh3 => "chsh3",
            Inequality::Hchsh3 => "hchsh3",
        }
    }

    pub fn first_elements(self) -> &'static [Element] {
        match self {
            Inequality::Chsh3 => &[Element::A1, Element::A2],
            Inequality::Hchsh3 => &[Element::A1Sq, Element::A1A2, Element::A2Sq],
        }
    }

    pub fn second_elements(self) -> &'static [Element] {
        match self {
            Inequality::Chsh3 => &[Element::B1, Element::B2],
            Inequality::Hchsh3 => &[Element::B1Sq, Element::B1B2, Element::B2Sq],
        }
    }

    /// Every (first, second) pair whose correlator the value depends on.
    pub fn required_pairs(self) -> Vec<(Element, Element)> {
        let mut pairs = Vec::new();
        for &a in self.first_elements() {
            for &b in self.second_elements() {
                pairs.push((a, b));
            }
        }
        pairs
    }

    /// `S` for CHSH-3, `−2 Re(T₁)` for hCHSH-3.
    pub fn value(self, c: &CorrelatorSet) -> Result<f64> {
        match self {
            Inequality::Chsh3 => chsh3_s(c),
            Inequality::Hchsh3 => Ok(-2.0 * hchsh3_t1(c)?.re),
        }
    }

    /// Coefficients `κ` with `value = Re Σ κ_xy E_xy`.
    ///
    /// Read off the value functional itself, one probe per pair.
    pub fn linear_coefficients(self) -> Vec<((Element, Element), Complex64)> {
        let pairs = self.required_pairs();
        let probe = |hot: (Element, Element), z: Complex64| {
            let mut c = CorrelatorSet::new();
            for &(a, b) in &pairs {
                let v = if (a, b) == hot { z } else { 0.0.into() };
                c.insert(a, b, v).expect("probe values have unit modulus");
            }
            self.value(&c).expect("all pairs present")
        };
        pairs
            .iter()
            .map(|&p| {
                // Re(κ·1) = Re κ and Re(κ·i) = −Im κ
                let re = probe(p, 1.0.into());
                let im = -probe(p, Complex64::i());
                (p, Complex64::new(re, im))
            })
            .collect()
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Inequality {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "chsh3" | "chsh-3" => Ok(Inequality::Chsh3),
            "hchsh3" | "hchsh-3" => Ok(Inequality::Hchsh3),
            other => Err(format!(
                "unknown inequality `{other}` (expected chsh3 or hchsh3)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub name: Inequality,
    pub value: f64,
    pub classical_bound: f64,
    pub violation_factor: f64,
    pub noise_threshold: f64,
}

impl InequalityReport {
    pub fn violates(&self) -> bool {
        self.violation_factor > 1.0
    }
}

/// Violation factor `v = value / bound` and white-noise threshold `1 − 1/v`.
pub fn violation_report(name: Inequality, value: f64, bound: f64) -> Result<InequalityReport> {
    if bound.is_nan() || bound <= 0.0 {
        return Err(Error::NonPositiveBound(bound));
    }
    let violation_factor = value / bound;
    let noise_threshold = if violation_factor > 1.0 {
        1.0 - 1.0 / violation_factor
    } else {
        0.0
    };
    Ok(InequalityReport {
        name,
        value,
        classical_bound: bound,
        violation_factor,
        noise_threshold,
    })
}

/// CHSH-3 value `S` from the four `E(AᵢBⱼ)`.
pub fn chsh3_s(c: &CorrelatorSet) -> Result<f64> {
    use Element::*;
    let e11 = c.get(A1, B1)?;
    let e12 = c.get(A1, B2)?;
    let e21 = c.get(A2, B1)?;
    let e22 = c.get(A2, B2)?;
    Ok((e11 + e12 - e21 + e22).re + (e11 - e12 - e21 + e22).im / 3f64.sqrt())
}

/// `T = 3[(ω²−1)E(A₁²B₁²) + (ω−1)E(A₁²B₂²) + (1−ω²)E(A₂²B₁²) + (ω²−1)E(A₂²B₂²)]`,
/// with `S = −(2/9) Re(T)`.
pub fn chsh3_t(c: &CorrelatorSet) -> Result<Complex64> {
    use Element::*;
    let one = Complex64::new(1.0, 0.0);
    let w = omega_pow(1);
    let w2 = omega_pow(2);
    Ok(((w2 - one) * c.get(A1Sq, B1Sq)?
        + (w - one) * c.get(A1Sq, B2Sq)?
        + (one - w2) * c.get(A2Sq, B1Sq)?
        + (w2 - one) * c.get(A2Sq, B2Sq)?)
        * 3.0)
}

/// hCHSH-3 polynomial `T₁`; the inequality reads `−2 Re(T₁) ≤ 9`.
pub fn hchsh3_t1(c: &CorrelatorSet) -> Result<Complex64> {
    use Element::*;
    let w = omega_pow(1);
    let k = |re: f64, w_coef: f64| Complex64::from(re) + w * w_coef;
    let terms = [
        (k(2.0, 4.0), A1Sq, B1Sq),
        (k(-1.0, 1.0), A1Sq, B1B2),
        (k(-1.0, 4.0), A1Sq, B2Sq),
        (k(-1.0, -2.0), A1A2, B1Sq),
        (k(-1.0, 1.0), A1A2, B1B2),
        (k(2.0, 1.0), A1A2, B2Sq),
        (k(5.0, 1.0), A2Sq, B1Sq),
        (k(-1.0, 1.0), A2Sq, B1B2),
        (k(-4.0, -2.0), A2Sq, B2Sq),
    ];
    terms
        .into_iter()
        .map(|(coef, a, b)| Ok(coef * c.get(a, b)?))
        .sum()
}

/// Born-rule joint distribution of two tritter measurements on a shared pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JointDistribution {
    /// `probabilities[3k + l] = P(Alice detector k, Bob detector l)`.
    pub probabilities: [f64; 9],
    pub alice_outcomes: [CubeRoot; 3],
    pub bob_outcomes: [CubeRoot; 3],
}

impl JointDistribution {
    pub fn new(
        rho: &TwoQutritDensity,
        alice: &MeasurementSetting,
        bob: &MeasurementSetting,
    ) -> Result<Self> {
        let ca = measurement_context(alice);
        let cb = measurement_context(bob);
        let mut probabilities = [0.0; 9];
        for k in 0..3 {
            for l in 0..3 {
                let p = crate::linalg::expectation(
                    rho.matrix(),
                    &ca.projectors[k].kron(&cb.projectors[l]),
                );
                if p.re < -EPS {
                    return Err(Error::NegativeProbability(p.re));
                }
                probabilities[3 * k + l] = p.re.max(0.0);
            }
        }
        Ok(Self {
            probabilities,
            alice_outcomes: ca.outcomes,
            bob_outcomes: cb.outcomes,
        })
    }

    /// Outcomes for the joint detector cell `3k + l`.
    pub fn outcomes(&self, cell: usize) -> (CubeRoot, CubeRoot) {
        (self.alice_outcomes[cell / 3], self.bob_outcomes[cell % 3])
    }

    pub fn correlator(&self) -> Complex64 {
        self.correlator_relabelled(Relabel::IDENTITY, Relabel::IDENTITY)
    }

    /// Correlator after relabelling each party's outcomes.
    pub fn correlator_relabelled(&self, alice: Relabel, bob: Relabel) -> Complex64 {
        (0..9)
            .map(|cell| {
                let (a, b) = self.outcomes(cell);
                (alice.apply(a) * bob.apply(b)).value() * self.probabilities[cell]
            })
            .sum()
    }
}

/// Exact `E(AB) = Σₖₗ pₖₗ · aₖ · bₗ`.
pub fn correlator_exact(
    rho: &TwoQutritDensity,
    alice: &MeasurementSetting,
    bob: &MeasurementSetting,
) -> Result<Complex64> {
    Ok(JointDistribution::new(rho, alice, bob)?.correlator())
}

/// Sample mean of `a · b`.
pub fn correlator_estimate<I>(samples: I) -> Result<Complex64>
where
    I: IntoIterator<Item = (Complex64, Complex64)>,
{
    let mut n = 0usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for (a, b) in samples {
        acc += a * b;
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptySample);
    }
    Ok(acc / n as f64)
}
