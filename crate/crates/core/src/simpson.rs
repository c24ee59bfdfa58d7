//! Simpson stability of pure one-dimensional sheaves on the relative
//! Jacobian.
//!
//! A [`TorsionSheafModel`] is a line bundle on a reduced nodal curve
//! `D = Σ Cᵢ`, recorded by the class and degree of its restriction to each
//! component. Its Hilbert polynomial against `ℓ` is `(ℓ·D) n + χ`, with
//!
//! ```text
//! χ = Σᵢ (dᵢ - Cᵢ²/2) - Σ_{i<j} Cᵢ·Cⱼ
//! ```
//!
//! For such a sheaf the saturated subsheaves are indexed by subcurves
//! `C' ⊂ D`: the restriction to `C'` twisted down by the nodes where `C'`
//! meets the rest. Comparing their reduced polynomials against that of the
//! whole sheaf decides stability exactly.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::chern_fm::ChernTriple;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

/// Subcurve enumeration is exponential; beyond this it is refused.
pub const MAX_COMPONENTS: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafComponent {
    pub class: DivisorClass,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionSheafModel {
    pub surface: SurfaceModel,
    pub components: Vec<SheafComponent>,
    /// Pairwise intersection numbers; the diagonal is not read.
    pub incidence: Vec<Vec<i64>>,
    pub reduced: bool,
}

impl TorsionSheafModel {
    /// Model with incidence taken from the lattice.
    pub fn from_components(surface: SurfaceModel, components: Vec<SheafComponent>) -> Self {
        let classes: Vec<_> = components.iter().map(|c| c.class).collect();
        TorsionSheafModel {
            surface,
            incidence: crate::spectral::incidence_matrix(&surface, &classes),
            components,
            reduced: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.components.len();
        if n == 0 {
            return Err(Error::InvalidModel("no components".into()));
        }
        if n > MAX_COMPONENTS {
            return Err(Error::InvalidModel(format!(
                "{n} components exceed the limit of {MAX_COMPONENTS}"
            )));
        }
        for c in &self.components {
            if !self.surface.is_effective_model(c.class) {
                return Err(Error::NotEffective(c.class));
            }
        }
        if self.incidence.len() != n || self.incidence.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidModel(format!("incidence must be {n}x{n}")));
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (ij, ji) = (self.incidence[i][j], self.incidence[j][i]);
                let lattice = self
                    .surface
                    .intersect(self.components[i].class, self.components[j].class);
                if ij != ji {
                    return Err(Error::InvalidModel(format!(
                        "incidence not symmetric at ({i}, {j})"
                    )));
                }
                if ij != lattice {
                    return Err(Error::InvalidModel(format!(
                        "incidence ({i}, {j}) = {ij} but the classes meet in {lattice}"
                    )));
                }
                if ij < 0 {
                    return Err(Error::InvalidModel(format!(
                        "components {i} and {j} meet negatively; not distinct curves"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn support(&self) -> DivisorClass {
        self.components.iter().map(|c| c.class).sum()
    }

    fn full_mask(&self) -> u32 {
        ((1u64 << self.components.len()) - 1) as u32
    }

    /// χ of the restriction of the line bundle to the subcurve `mask`.
    fn restricted_chi(&self, mask: u32) -> i64 {
        let n = self.components.len();
        let mut chi = 0;
        for i in (0..n).filter(|i| mask >> i & 1 == 1) {
            let c = &self.components[i];
            chi += c.degree - self.surface.square(c.class) / 2;
            for j in ((i + 1)..n).filter(|j| mask >> j & 1 == 1) {
                chi -= self.incidence[i][j];
            }
        }
        chi
    }

    fn crossing(&self, mask: u32) -> i64 {
        let n = self.components.len();
        let mut nodes = 0;
        for i in (0..n).filter(|i| mask >> i & 1 == 1) {
            for j in (0..n).filter(|j| mask >> j & 1 == 0) {
                nodes += self.incidence[i][j];
            }
        }
        nodes
    }

    fn class_of(&self, mask: u32) -> DivisorClass {
        self.components
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, c)| c.class)
            .sum()
    }

    /// Euler characteristic, cross-checked against `Σ dᵢ - p_a(D) + 1`.
    pub fn chi(&self) -> i64 {
        let by_components = self.restricted_chi(self.full_mask());
        let degree: i64 = self.components.iter().map(|c| c.degree).sum();
        let by_genus = degree - self.surface.arithmetic_genus(self.support()) + 1;
        assert_eq!(
            by_components, by_genus,
            "incidence inconsistent with the lattice"
        );
        by_components
    }

    pub fn hilbert_polynomial(&self, l: DivisorClass) -> Result<HilbertPolynomial> {
        self.validate()?;
        if !self.surface.is_ample_model(l) {
            return Err(Error::NotAmple(l));
        }
        let leading = self.surface.intersect(l, self.support());
        debug_assert!(leading > 0);
        Ok(HilbertPolynomial {
            leading,
            constant: self.chi(),
        })
    }

    /// Every proper nonempty subcurve with the χ of its saturated subsheaf
    /// and of the complementary quotient, in increasing bitmask order.
    pub fn subsheaf_candidates(&self) -> Result<Vec<SubcurveCandidate>> {
        self.validate()?;
        if !self.reduced {
            return Err(Error::NotReduced);
        }
        let full = self.full_mask();
        Ok((1..full)
            .map(|mask| {
                let chi_sub = self.restricted_chi(mask) - self.crossing(mask);
                let chi_quotient = self.restricted_chi(full & !mask);
                SubcurveCandidate {
                    components: (0..self.components.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .collect(),
                    class: self.class_of(mask),
                    chi_sub,
                    chi_quotient,
                }
            })
            .collect())
    }

    /// A sheaf on an irreducible curve is stable for every polarisation.
    pub fn irreducible_shortcut(&self) -> Option<StabilityVerdict> {
        (self.components.len() == 1).then(|| StabilityVerdict {
            verdict: Verdict::Stable,
            witness: None,
            wit0: self.wit0_model(),
        })
    }

    /// Model form of the criterion `Hom(L, P_x) = 0 ∀x`: a nonzero map to a
    /// degree-0 sheaf on a fibre factors through the restriction to a
    /// vertical component, which therefore must have `χ <= 0`.
    pub fn wit0_model(&self) -> bool {
        (0..self.components.len())
            .all(|i| !self.components[i].class.is_vertical() || self.restricted_chi(1 << i) > 0)
    }

    pub fn stability_verdict(&self, l: DivisorClass) -> Result<StabilityVerdict> {
        let poly = self.hilbert_polynomial(l)?;
        if !self.reduced {
            return Ok(StabilityVerdict {
                verdict: Verdict::Invalid,
                witness: None,
                wit0: false,
            });
        }
        if let Some(v) = self.irreducible_shortcut() {
            return Ok(v);
        }
        let total = self.support();
        let mut destabilising = None;
        let mut equalities = Vec::new();
        for cand in self.subsheaf_candidates()? {
            let sub_leading = self.surface.intersect(l, cand.class);
            let quot_leading = poly.leading - sub_leading;
            // p(M) vs p(L): χ_sub/(ℓ·C') against χ/(ℓ·D).
            let sub_cmp = (cand.chi_sub * poly.leading).cmp(&(poly.constant * sub_leading));
            let quot_cmp = (poly.constant * quot_leading).cmp(&(cand.chi_quotient * poly.leading));
            assert_eq!(sub_cmp, quot_cmp, "subsheaf and quotient disagree");
            match sub_cmp {
                std::cmp::Ordering::Greater => {
                    destabilising.get_or_insert(cand);
                }
                std::cmp::Ordering::Equal => equalities.push(cand),
                std::cmp::Ordering::Less => {}
            }
        }
        let wit0 = self.wit0_model();
        if let Some(c) = destabilising {
            return Ok(StabilityVerdict {
                verdict: Verdict::Unstable,
                witness: Some(c.into()),
                wit0,
            });
        }
        let Some(first) = equalities.first() else {
            return Ok(StabilityVerdict {
                verdict: Verdict::Stable,
                witness: None,
                wit0,
            });
        };
        let fibre_only = equalities.iter().all(|c| {
            let quotient = total - c.class;
            quotient.is_vertical()
                && (0..self.components.len())
                    .filter(|i| !c.components.contains(i))
                    .all(|i| self.components[i].class.is_vertical())
        });
        Ok(StabilityVerdict {
            verdict: if fibre_only {
                Verdict::SemistableFibreOnly
            } else {
                Verdict::SemistableOther
            },
            witness: Some(first.clone().into()),
            wit0,
        })
    }
}

/// `leading · n + constant`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertPolynomial {
    pub leading: i64,
    pub constant: i64,
}

impl HilbertPolynomial {
    /// Riemann-Roch for a rank-0 character `(0, D, ch2)` on a surface with
    /// trivial canonical class: `χ(E(nℓ)) = (ℓ·D) n + ch2`.
    pub fn of_torsion_character(
        e: &ChernTriple,
        l: DivisorClass,
        surface: &SurfaceModel,
    ) -> Result<Self> {
        e.validate(surface)?;
        if e.rank != 0 {
            return Err(Error::UnsupportedShape(format!("rank {} is not 0", e.rank)));
        }
        if !surface.is_ample_model(l) {
            return Err(Error::NotAmple(l));
        }
        let leading = surface.intersect(l, e.c1);
        if leading <= 0 || e.ch2_times_2 % 2 != 0 {
            return Err(Error::UnsupportedShape(
                "not the character of a pure one-dimensional sheaf".into(),
            ));
        }
        Ok(HilbertPolynomial {
            leading,
            constant: e.ch2_times_2 / 2,
        })
    }

    /// Constant term of the reduced polynomial `n + constant/leading`.
    pub fn reduced_constant(&self) -> Ratio<i64> {
        Ratio::new(self.constant, self.leading)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubcurveCandidate {
    pub components: Vec<usize>,
    pub class: DivisorClass,
    pub chi_sub: i64,
    pub chi_quotient: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    SemistableFibreOnly,
    SemistableOther,
    Unstable,
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub components: Vec<usize>,
    pub chi_sub: i64,
}

impl From<SubcurveCandidate> for Witness {
    fn from(c: SubcurveCandidate) -> Self {
        Witness {
            components: c.components,
            chi_sub: c.chi_sub,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityVerdict {
    pub verdict: Verdict,
    /// First destabilising (or, if none, first equality) subcurve.
    pub witness: Option<Witness>,
    /// No map to a degree-0 sheaf on a fibre; a semistable sheaf failing
    /// this is not WIT₀.
    pub wit0: bool,
}

#[derive(Serialize, Deserialize)]
struct VerdictJson {
    verdict: Verdict,
    witness: Option<Vec<usize>>,
    chi_sub: Option<i64>,
    wit0: bool,
}

impl Serialize for StabilityVerdict {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VerdictJson {
            verdict: self.verdict,
            witness: self.witness.as_ref().map(|w| w.components.clone()),
            chi_sub: self.witness.as_ref().map(|w| w.chi_sub),
            wit0: self.wit0,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StabilityVerdict {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = VerdictJson::deserialize(d)?;
        let witness = match (j.witness, j.chi_sub) {
            (Some(components), Some(chi_sub)) => Some(Witness {
                components,
                chi_sub,
            }),
            (None, None) => None,
            _ => return Err(serde::de::Error::custom("witness and chi_sub go together")),
        };
        Ok(StabilityVerdict {
            verdict: j.verdict,
            witness,
            wit0: j.wit0,
        })
    }
}

/// What a verdict on `L` says about `E`, its inverse transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TransformClass {
    MuStableLocallyFree,
    MuStableTorsionFreeNotLocallyFree,
    ProperlyMuSemistable,
    NoSemistablePreimage,
    Unclassified,
}

impl TransformClass {
    pub fn describe(&self) -> &'static str {
        match self {
            TransformClass::MuStableLocallyFree => "E is mu-stable and locally free",
            TransformClass::MuStableTorsionFreeNotLocallyFree => {
                "E is mu-stable, torsion-free, not locally free"
            }
            TransformClass::ProperlyMuSemistable => "E is properly mu-semistable",
            TransformClass::NoSemistablePreimage => "no mu-semistable preimage",
            TransformClass::Unclassified => "model outside the decidable range",
        }
    }
}

pub fn transform_classification(v: &StabilityVerdict) -> TransformClass {
    match v.verdict {
        Verdict::Stable => TransformClass::MuStableLocallyFree,
        Verdict::SemistableFibreOnly => TransformClass::MuStableTorsionFreeNotLocallyFree,
        Verdict::SemistableOther => TransformClass::ProperlyMuSemistable,
        Verdict::Unstable => TransformClass::NoSemistablePreimage,
        Verdict::Invalid => TransformClass::Unclassified,
    }
}
