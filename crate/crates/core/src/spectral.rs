//! Spectral divisors and the constructed direction of the spectral
//! correspondence.
//!
//! On a product `V × W` with a fibrewise-constant bundle class, the jump
//! locus `{p : h¹(E(p)) ≠ 0}` is a union of horizontal curves `V × {ŵ}`
//! and is computed by an exhaustive scan of the dual fibre. Conversely,
//! [`construct_from_spectral`] turns a nodal spectral curve plus marked
//! points into a torsion-sheaf model for the stability engine.

use serde::{Deserialize, Serialize};

use crate::chern_fm::ChernTriple;
use crate::elliptic_fibre::{CurvePoint, EllipticCurve, FibreBundleClass};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::simpson::{SheafComponent, TorsionSheafModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCurves {
    pub base: EllipticCurve,
    pub fibre: EllipticCurve,
}

/// Bundle on `V × W` whose restriction to every fibre `{v} × W` has the
/// same Atiyah type.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFamily {
    pub curves: ProductCurves,
    pub blocks: FibreBundleClass,
}

impl ProductFamily {
    pub fn new(base: EllipticCurve, fibre: EllipticCurve, blocks: FibreBundleClass) -> Self {
        ProductFamily {
            curves: ProductCurves { base, fibre },
            blocks,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.blocks.validate(&self.curves.fibre)
    }

    /// A constant family of rank `r` has character `(r, 0, 0)`.
    pub fn chern_triple(&self) -> ChernTriple {
        ChernTriple::new(self.blocks.rank() as i64, DivisorClass::ZERO, 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HorizontalComponent {
    pub w_hat: CurvePoint,
    pub mult: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerticalComponent {
    pub v: CurvePoint,
    pub mult: u32,
}

/// `Σ mᵢ (V × {ŵᵢ}) + Σ nⱼ ({vⱼ} × Ŵ)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralDivisor {
    pub horizontal: Vec<HorizontalComponent>,
    pub vertical: Vec<VerticalComponent>,
}

impl SpectralDivisor {
    /// `r σ̂ + (Σ nⱼ) f̂` with `r` the total horizontal multiplicity.
    pub fn class(&self) -> DivisorClass {
        DivisorClass::new(
            self.horizontal.iter().map(|h| h.mult as i64).sum(),
            self.vertical.iter().map(|v| v.mult as i64).sum(),
        )
    }
}

/// Jump locus of `h¹` over the dual fibre, weighted by Jordan-Hölder length.
pub fn spectral_divisor(family: &ProductFamily) -> Result<SpectralDivisor> {
    family.validate()?;
    let curve = &family.curves.fibre;
    let mut horizontal = Vec::new();
    for w_hat in curve.points() {
        let (_, h1) = family.blocks.h0_h1(&w_hat, curve)?;
        if h1 == 0 {
            continue;
        }
        let mult = family.blocks.jordan_holder_multiplicity(&curve.neg(&w_hat));
        debug_assert!(mult > 0);
        horizontal.push(HorizontalComponent { w_hat, mult });
    }
    Ok(SpectralDivisor {
        horizontal,
        vertical: Vec::new(),
    })
}

/// What is known about a sheaf when asking for its WIT index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum SheafDescription {
    /// `O_x`.
    Skyscraper,
    /// `O_X`.
    StructureSheaf,
    Other {
        torsion_free: bool,
        has_semistable_fibre_restriction: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WitClass {
    Wit0,
    Wit1,
    /// Not enough information to decide.
    Refused,
}

pub fn wit_classify(e: &SheafDescription) -> WitClass {
    match *e {
        SheafDescription::Skyscraper => WitClass::Wit0,
        SheafDescription::StructureSheaf => WitClass::Wit1,
        SheafDescription::Other {
            torsion_free: true,
            has_semistable_fibre_restriction: true,
        } => WitClass::Wit1,
        SheafDescription::Other { .. } => WitClass::Refused,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedComponent {
    pub class: DivisorClass,
    pub genus: i64,
}

/// A reduced nodal spectral curve with a line bundle built from marked
/// points and an extension class in `Ext¹(O_Z, O_S)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkedConstruction {
    pub surface: SurfaceModel,
    pub components: Vec<MarkedComponent>,
    /// Off-diagonal entries are `Cᵢ·Cⱼ`; the diagonal is ignored.
    pub incidence: Vec<Vec<i64>>,
    pub degrees: Vec<i64>,
    pub marked_points_valid: bool,
    pub nonzero_on_each_factor: bool,
}

impl MarkedConstruction {
    /// Incidence computed from the lattice classes.
    pub fn from_classes(
        surface: SurfaceModel,
        classes: &[DivisorClass],
        degrees: Vec<i64>,
    ) -> Self {
        let components = classes
            .iter()
            .map(|&class| MarkedComponent {
                class,
                genus: surface.arithmetic_genus(class),
            })
            .collect();
        MarkedConstruction {
            surface,
            components,
            incidence: incidence_matrix(&surface, classes),
            degrees,
            marked_points_valid: true,
            nonzero_on_each_factor: true,
        }
    }

    pub fn total_class(&self) -> DivisorClass {
        self.components.iter().map(|c| c.class).sum()
    }

    /// Arithmetic genus of the whole curve.
    pub fn genus(&self) -> i64 {
        self.surface.arithmetic_genus(self.total_class())
    }
}

pub fn incidence_matrix(surface: &SurfaceModel, classes: &[DivisorClass]) -> Vec<Vec<i64>> {
    classes
        .iter()
        .map(|&ci| {
            classes
                .iter()
                .map(|&cj| surface.intersect(ci, cj))
                .collect()
        })
        .collect()
}

/// Builds the torsion sheaf determined by the spectral data.
///
/// The degree vector must total `g(S) - 1`, so the result has `χ = 0`.
pub fn construct_from_spectral(m: &MarkedConstruction) -> Result<TorsionSheafModel> {
    if !m.nonzero_on_each_factor {
        return Err(Error::ZeroExtensionComponent);
    }
    if !m.marked_points_valid {
        return Err(Error::MarkedPointOnNode);
    }
    if m.degrees.len() != m.components.len() {
        return Err(Error::InvalidModel(format!(
            "{} degrees for {} components",
            m.degrees.len(),
            m.components.len()
        )));
    }
    for (index, c) in m.components.iter().enumerate() {
        let expected = m.surface.arithmetic_genus(c.class);
        if c.genus != expected {
            return Err(Error::GenusMismatch {
                index,
                expected,
                got: c.genus,
            });
        }
    }
    if let Some((index, &degree)) = m.degrees.iter().enumerate().find(|(_, &d)| d < 0) {
        return Err(Error::NegativeDegree { index, degree });
    }
    let expected = m.genus() - 1;
    let got: i64 = m.degrees.iter().sum();
    if got != expected {
        return Err(Error::DegreeSum { expected, got });
    }
    let model = TorsionSheafModel {
        surface: m.surface,
        components: m
            .components
            .iter()
            .zip(&m.degrees)
            .map(|(c, &degree)| SheafComponent {
                class: c.class,
                degree,
            })
            .collect(),
        incidence: m.incidence.clone(),
        reduced: true,
    };
    model.validate()?;
    debug_assert_eq!(model.chi(), 0);
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chern_fm::fm_transform_ch;
    use crate::elliptic_fibre::AtiyahBlock;

    fn curves() -> (EllipticCurve, EllipticCurve) {
        (
            EllipticCurve::new(7, 1, 1).unwrap(),
            EllipticCurve::new(5, 1, 1).unwrap(),
        )
    }

    fn two_sections_three_fibres(degrees: Vec<i64>) -> MarkedConstruction {
        let s = DivisorClass::SIGMA;
        let f = DivisorClass::FIBRE;
        MarkedConstruction::from_classes(SurfaceModel::ABELIAN, &[s, s, f, f, f], degrees)
    }

    #[test]
    fn distinct_blocks() {
        let (v, w) = curves();
        let pts = w.points();
        let (q1, q2) = (pts[1], pts[3]);
        let fam = ProductFamily::new(v, w, FibreBundleClass::from_pairs(&[(q1, 1), (q2, 1)]));
        let div = spectral_divisor(&fam).unwrap();
        let mut got: Vec<_> = div.horizontal.iter().map(|h| (h.w_hat, h.mult)).collect();
        got.sort();
        let mut want = vec![(w.neg(&q1), 1), (w.neg(&q2), 1)];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(div.class(), DivisorClass::new(2, 0));
    }

    #[test]
    fn atiyah_block_doubles() {
        let (v, w) = curves();
        let q = w.points()[2];
        let fam = ProductFamily::new(v, w, FibreBundleClass::from_pairs(&[(q, 2)]));
        let div = spectral_divisor(&fam).unwrap();
        assert_eq!(
            div.horizontal,
            vec![HorizontalComponent {
                w_hat: w.neg(&q),
                mult: 2
            }]
        );
    }

    #[test]
    fn trivial_line_bundle() {
        let (v, w) = curves();
        let fam = ProductFamily::new(
            v,
            w,
            FibreBundleClass::new(vec![AtiyahBlock {
                q: CurvePoint::Infinity,
                m: 1,
            }]),
        );
        let div = spectral_divisor(&fam).unwrap();
        assert_eq!(div.class(), DivisorClass::SIGMA);
        assert_eq!(div.horizontal[0].w_hat, CurvePoint::Infinity);
        let t = fm_transform_ch(&fam.chern_triple(), &SurfaceModel::ABELIAN).unwrap();
        assert_eq!(t.triple.c1, div.class());
    }

    #[test]
    fn wit_indices() {
        let tf = SheafDescription::Other {
            torsion_free: true,
            has_semistable_fibre_restriction: true,
        };
        assert_eq!(wit_classify(&tf), WitClass::Wit1);
        assert_eq!(wit_classify(&SheafDescription::Skyscraper), WitClass::Wit0);
        assert_eq!(
            wit_classify(&SheafDescription::StructureSheaf),
            WitClass::Wit1
        );
        let unknown = SheafDescription::Other {
            torsion_free: true,
            has_semistable_fibre_restriction: false,
        };
        assert_eq!(wit_classify(&unknown), WitClass::Refused);
    }

    #[test]
    fn construct_example() {
        let m = two_sections_three_fibres(vec![2, 1, 1, 1, 1]);
        assert_eq!(m.genus(), 7);
        let model = construct_from_spectral(&m).unwrap();
        assert_eq!(model.chi(), 0);
    }

    #[test]
    fn construct_errors() {
        let m = two_sections_three_fibres(vec![1, 1, 1, 1, 1]);
        assert_eq!(
            construct_from_spectral(&m),
            Err(Error::DegreeSum {
                expected: 6,
                got: 5
            })
        );
        let mut m = two_sections_three_fibres(vec![2, 1, 1, 1, 1]);
        m.nonzero_on_each_factor = false;
        assert_eq!(
            construct_from_spectral(&m),
            Err(Error::ZeroExtensionComponent)
        );
        let mut m = two_sections_three_fibres(vec![2, 1, 1, 1, 1]);
        m.marked_points_valid = false;
        assert_eq!(construct_from_spectral(&m), Err(Error::MarkedPointOnNode));
        let mut m = two_sections_three_fibres(vec![2, 1, 1, 1, 1]);
        m.components[0].genus = 0;
        assert!(matches!(
            construct_from_spectral(&m),
            Err(Error::GenusMismatch { index: 0, .. })
        ));
        let m = two_sections_three_fibres(vec![7, -1, 0, 0, 0]);
        assert_eq!(
            construct_from_spectral(&m),
            Err(Error::NegativeDegree {
                index: 1,
                degree: -1
            })
        );
    }
}
