use serde::{Deserialize, Serialize};

use super::{
    violation_report, CorrelatorSet, Element, Inequality, InequalityReport, JointDistribution,
};
use crate::error::{Error, Result};
use crate::linalg::{omega_pow, CubeRoot, Matrix3};
use crate::states::TwoQutritDensity;
use crate::tritter::{observable, product_setting, MeasurementSetting, PhaseTriple};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }
}

/// Outcome relabelling `o ↦ ω^phase · o` (or `ω^phase · o*` when conjugating).
///
/// Both maps permute `{1, ω, ω²}`: a detector permutation, not a new
/// measurement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Relabel {
    pub conjugate: bool,
    pub phase: u8,
}

impl Relabel {
    pub const IDENTITY: Relabel = Relabel {
        conjugate: false,
        phase: 0,
    };

    pub fn new(conjugate: bool, phase: u8) -> Self {
        Self {
            conjugate,
            phase: phase % 3,
        }
    }

    pub fn apply(self, o: CubeRoot) -> CubeRoot {
        let base = if self.conjugate { o.conj() } else { o };
        base * CubeRoot::from_exponent(self.phase as i64)
    }

    /// The observable whose outcomes are the relabelled ones.
    pub fn apply_observable(self, o: &Matrix3) -> Matrix3 {
        let base = if self.conjugate { o.dagger() } else { *o };
        base.scale(omega_pow(self.phase as i64))
    }
}

/// An inequality element realised by one concrete measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundElement {
    pub element: Element,
    pub setting: MeasurementSetting,
    pub relabel: Relabel,
}

impl BoundElement {
    pub fn new(element: Element, setting: MeasurementSetting) -> Self {
        Self {
            element,
            setting,
            relabel: Relabel::IDENTITY,
        }
    }

    pub fn relabelled(mut self, relabel: Relabel) -> Self {
        self.relabel = relabel;
        self
    }

    pub fn observable(&self) -> Matrix3 {
        self.relabel.apply_observable(&observable(&self.setting))
    }
}

/// Concrete measurements for every element of an inequality.
///
/// `first` fills the inequality's `A` slots and is measured by `first_party`;
/// `second` fills the `B` slots and is measured by the other party.
#[derive(Clone, Debug, PartialEq)]
pub struct BellConfiguration {
    pub inequality: Inequality,
    pub first_party: Party,
    pub first: Vec<BoundElement>,
    pub second: Vec<BoundElement>,
}

impl BellConfiguration {
    pub fn new(
        inequality: Inequality,
        first_party: Party,
        first: Vec<BoundElement>,
        second: Vec<BoundElement>,
    ) -> Result<Self> {
        let cfg = Self {
            inequality,
            first_party,
            first,
            second,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let covers = |bound: &[BoundElement], want: &[Element]| {
            bound.len() == want.len() && want.iter().all(|w| bound.iter().any(|b| b.element == *w))
        };
        if !covers(&self.first, self.inequality.first_elements())
            || !covers(&self.second, self.inequality.second_elements())
        {
            return Err(Error::Config(format!(
                "configuration does not cover exactly the elements of {}",
                self.inequality
            )));
        }
        Ok(())
    }

    pub fn element(&self, element: Element) -> Option<&BoundElement> {
        self.first
            .iter()
            .chain(&self.second)
            .find(|b| b.element == element)
    }

    pub fn alice_elements(&self) -> &[BoundElement] {
        match self.first_party {
            Party::Alice => &self.first,
            Party::Bob => &self.second,
        }
    }

    pub fn bob_elements(&self) -> &[BoundElement] {
        match self.first_party {
            Party::Alice => &self.second,
            Party::Bob => &self.first,
        }
    }

    /// Joint distribution and outcome maps for one (first, second) pair.
    pub fn pair_distribution(
        &self,
        rho: &TwoQutritDensity,
        first: &BoundElement,
        second: &BoundElement,
    ) -> Result<(JointDistribution, Relabel, Relabel)> {
        let (alice, bob) = match self.first_party {
            Party::Alice => (first, second),
            Party::Bob => (second, first),
        };
        let dist = JointDistribution::new(rho, &alice.setting, &bob.setting)?;
        Ok((dist, alice.relabel, bob.relabel))
    }

    pub fn exact_correlators(&self, rho: &TwoQutritDensity) -> Result<CorrelatorSet> {
        let mut set = CorrelatorSet::new();
        for a in &self.first {
            for b in &self.second {
                let (dist, ra, rb) = self.pair_distribution(rho, a, b)?;
                set.insert(a.element, b.element, dist.correlator_relabelled(ra, rb))?;
            }
        }
        Ok(set)
    }

    pub fn evaluate(&self, rho: &TwoQutritDensity) -> Result<InequalityReport> {
        let value = self.inequality.value(&self.exact_correlators(rho)?)?;
        violation_report(self.inequality, value, self.inequality.classical_bound())
    }
}

/// Alice's pair of optimal bases: `(1,1,1)` and `(1,ζ²,ζ⁴)`.
pub(crate) fn optimal_alice_triples() -> [PhaseTriple; 2] {
    [PhaseTriple::unit(), PhaseTriple::zeta_geometric(2)]
}

/// Bob's pair of optimal bases: `(1,ζ,ζ²)` and `(1,ζ⁻¹,ζ⁻²)`.
pub(crate) fn optimal_bob_triples() -> [PhaseTriple; 2] {
    [
        PhaseTriple::zeta_geometric(1),
        PhaseTriple::zeta_geometric(-1),
    ]
}

/// The four optimal CHSH-3 bases.
pub fn chsh3_optimal_configuration() -> BellConfiguration {
    let [a1, a2] = optimal_alice_triples();
    let [b1, b2] = optimal_bob_triples();
    let bind = |e: Element, p: PhaseTriple| {
        BoundElement::new(e, MeasurementSetting::standard(p, e.label()))
    };
    BellConfiguration::new(
        Inequality::Chsh3,
        Party::Alice,
        vec![bind(Element::A1, a1), bind(Element::A2, a2)],
        vec![bind(Element::B1, b1), bind(Element::B2, b2)],
    )
    .expect("covers CHSH-3")
}

/// hCHSH-3 from the optimal bases: each party measures `X₁²`, `X₁X₂` and
/// `X₂²`, every one of them a single product tritter.
pub fn hchsh3_optimal_configuration() -> BellConfiguration {
    let products = |[p1, p2]: [PhaseTriple; 2], labels: [Element; 3]| {
        [(p1, p1), (p1, p2), (p2, p2)]
            .into_iter()
            .zip(labels)
            .map(|((x, y), e)| BoundElement::new(e, product_setting(&x, &y).with_label(e.label())))
            .collect::<Vec<_>>()
    };
    BellConfiguration::new(
        Inequality::Hchsh3,
        Party::Alice,
        products(
            optimal_alice_triples(),
            [Element::A1Sq, Element::A1A2, Element::A2Sq],
        ),
        products(
            optimal_bob_triples(),
            [Element::B1Sq, Element::B1B2, Element::B2Sq],
        ),
    )
    .expect("covers hCHSH-3")
}
