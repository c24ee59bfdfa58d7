//! Dimension bookkeeping for `M_X(r, k)` and its spectral fibration
//! `M → B`, whose fibre over a curve `S` sits in `Jac_{g(S)-1}(S)`.

use serde::{Deserialize, Serialize};

use crate::chern_fm::{mukai_nahm_ch, ChernTriple};
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceKind, SurfaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliDescriptor {
    pub surface: SurfaceModel,
    pub r: i64,
    pub k: i64,
}

impl ModuliDescriptor {
    /// Both `r` and `k` must be at least 2 for the moduli space to be nonempty.
    pub fn new(surface: SurfaceModel, r: i64, k: i64) -> Result<Self> {
        if r < 2 || k < 2 {
            return Err(Error::OutOfRange { r, k });
        }
        Ok(ModuliDescriptor { surface, r, k })
    }

    /// `k f̂ + r σ̂`.
    pub fn spectral_class(&self) -> DivisorClass {
        DivisorClass::new(self.r, self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationDimensions {
    pub base_dim: i64,
    pub fibre_dim: i64,
    pub genus: i64,
    pub total_dim: i64,
    /// Whether `k f̂ + r σ̂` is nef in the model. Otherwise the figures are
    /// Riemann-Roch expectations and may be non-positive.
    pub nef: bool,
}

pub fn fibration_dimensions(m: &ModuliDescriptor) -> FibrationDimensions {
    let class = m.spectral_class();
    let genus = m.surface.arithmetic_genus(class);
    let base_dim = m.surface.expected_linear_system(class).base_dim;
    FibrationDimensions {
        base_dim,
        fibre_dim: genus,
        genus,
        total_dim: base_dim + genus,
        nef: m.surface.is_nef_model(class),
    }
}

/// Closed forms for the moduli dimension, independent of the fibration.
pub fn closed_form_total_dim(m: &ModuliDescriptor) -> i64 {
    let (r, k) = (m.r, m.k);
    match m.surface.kind {
        SurfaceKind::K3WithSection => 2 * (r * k - r * r + 1),
        SurfaceKind::AbelianProduct => 2 * r * k + 2,
    }
}

/// Fibres are half-dimensional: `base_dim = fibre_dim`.
pub fn lagrangian_check(m: &ModuliDescriptor) -> bool {
    let d = fibration_dimensions(m);
    d.base_dim == d.fibre_dim && d.total_dim == 2 * d.fibre_dim
}

/// `dim M(r, k) = dim M(k, r)` on the torus, and the character swap is an
/// involution.
pub fn nahm_bijection_check(m: &ModuliDescriptor) -> Result<bool> {
    if !m.surface.is_abelian() {
        return Err(Error::RequiresAbelian);
    }
    let dual = ModuliDescriptor::new(m.surface, m.k, m.r)?;
    let e = ChernTriple::instanton(m.r, m.k);
    let swapped = mukai_nahm_ch(&e)?;
    let involution = mukai_nahm_ch(&swapped)? == e && swapped == ChernTriple::instanton(m.k, m.r);
    Ok(fibration_dimensions(m).total_dim == fibration_dimensions(&dual).total_dim && involution)
}

/// The bases `B` (class `k f + r σ̂`) and `B̂` (class `k f̂ + r σ`) of the two
/// fibrations of the product torus have equal dimension.
pub fn double_fibration_check(m: &ModuliDescriptor) -> Result<bool> {
    let (first, second) = double_fibration_bases(m)?;
    Ok(first == second)
}

pub fn double_fibration_bases(m: &ModuliDescriptor) -> Result<(i64, i64)> {
    if !m.surface.is_abelian() {
        return Err(Error::RequiresAbelian);
    }
    let first = m.surface.linear_system_dim(m.spectral_class())?.base_dim;
    // The second projection exchanges which elliptic factor supplies the
    // section and which the fibre.
    let swapped = DivisorClass::new(m.k, m.r);
    let second = m.surface.linear_system_dim(swapped)?.base_dim;
    Ok((first, second))
}

/// Everything about one `(surface, r, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuliReport {
    pub surface: SurfaceModel,
    pub r: i64,
    pub k: i64,
    pub base_dim: i64,
    pub fibre_dim: i64,
    pub genus: i64,
    pub total_dim: i64,
    pub nef: bool,
    pub lagrangian: bool,
    pub nahm: Option<bool>,
    pub double_fibration: Option<bool>,
}

pub fn report(m: &ModuliDescriptor) -> ModuliReport {
    let d = fibration_dimensions(m);
    ModuliReport {
        surface: m.surface,
        r: m.r,
        k: m.k,
        base_dim: d.base_dim,
        fibre_dim: d.fibre_dim,
        genus: d.genus,
        total_dim: d.total_dim,
        nef: d.nef,
        lagrangian: lagrangian_check(m),
        nahm: nahm_bijection_check(m).ok(),
        double_fibration: double_fibration_check(m).ok(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(s: SurfaceModel, r: i64, k: i64) -> ModuliDescriptor {
        ModuliDescriptor::new(s, r, k).unwrap()
    }

    fn dims(m: &ModuliDescriptor) -> (i64, i64, i64, i64) {
        let d = fibration_dimensions(m);
        (d.base_dim, d.fibre_dim, d.genus, d.total_dim)
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dims(&md(SurfaceModel::K3, 2, 3)), (3, 3, 3, 6));
        assert_eq!(dims(&md(SurfaceModel::ABELIAN, 2, 3)), (7, 7, 7, 14));
        assert_eq!(dims(&md(SurfaceModel::K3, 2, 2)), (1, 1, 1, 2));
        assert_eq!(
            fibration_dimensions(&md(SurfaceModel::ABELIAN, 3, 4)).genus,
            13
        );
    }

    #[test]
    fn descriptor_range() {
        assert_eq!(
            ModuliDescriptor::new(SurfaceModel::K3, 1, 3),
            Err(Error::OutOfRange { r: 1, k: 3 })
        );
    }

    #[test]
    fn lagrangian() {
        assert!(lagrangian_check(&md(SurfaceModel::K3, 2, 3)));
        assert!(lagrangian_check(&md(SurfaceModel::ABELIAN, 2, 3)));
        assert!(lagrangian_check(&md(SurfaceModel::ABELIAN, 3, 4)));
    }

    #[test]
    fn k3_non_nef_is_flagged() {
        let d = fibration_dimensions(&md(SurfaceModel::K3, 3, 2));
        assert!(!d.nef);
        assert_eq!(d.genus, -2);
        assert!(!fibration_dimensions(&md(SurfaceModel::K3, 2, 3)).nef);
        assert!(fibration_dimensions(&md(SurfaceModel::K3, 2, 4)).nef);
        assert!(fibration_dimensions(&md(SurfaceModel::ABELIAN, 3, 2)).nef);
    }

    #[test]
    fn nahm_and_double() {
        let ab = md(SurfaceModel::ABELIAN, 2, 3);
        assert!(nahm_bijection_check(&ab).unwrap());
        assert!(nahm_bijection_check(&md(SurfaceModel::ABELIAN, 2, 2)).unwrap());
        assert_eq!(
            nahm_bijection_check(&md(SurfaceModel::K3, 2, 3)),
            Err(Error::RequiresAbelian)
        );
        assert_eq!(double_fibration_bases(&ab).unwrap(), (7, 7));
        assert_eq!(
            double_fibration_bases(&md(SurfaceModel::ABELIAN, 4, 5)).unwrap(),
            (21, 21)
        );
        assert_eq!(
            double_fibration_bases(&md(SurfaceModel::ABELIAN, 2, 2)).unwrap(),
            (5, 5)
        );
        assert!(double_fibration_check(&md(SurfaceModel::K3, 2, 3)).is_err());
    }

    #[test]
    fn report_fields() {
        let r = report(&md(SurfaceModel::K3, 2, 3));
        assert_eq!(r.nahm, None);
        assert!(r.lagrangian);
        let r = report(&md(SurfaceModel::ABELIAN, 2, 3));
        assert_eq!(r.nahm, Some(true));
        assert_eq!(r.double_fibration, Some(true));
    }
}
