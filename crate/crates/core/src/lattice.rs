//! Intersection arithmetic on the rank-2 lattice `Zσ ⊕ Zf`.
//!
//! The lattice is spanned by the class of the chosen section `σ` and of a
//! fibre `f`, with `σ·f = 1`, `f² = 0` and `σ² = -2` (elliptic K3) or `0`
//! (product of two elliptic curves). The relative Jacobian carries the same
//! Gram matrix on `(σ̂, f̂)`, so one type serves both surfaces.
//!
//! Besides the form itself this module knows the wall set `Ξ(c)` of even
//! negative classes with `-4c <= ξ² < 0`, and checks whether a polarisation
//! is `c`-suitable: it must avoid every wall `ξ^⊥` and lie on the same side
//! of it as the fibre class.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceKind {
    #[serde(rename = "k3")]
    K3WithSection,
    #[serde(rename = "abelian")]
    AbelianProduct,
}

/// An elliptic surface with section, seen through its `(σ, f)` lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceModel {
    pub kind: SurfaceKind,
}

impl SurfaceModel {
    pub const K3: SurfaceModel = SurfaceModel {
        kind: SurfaceKind::K3WithSection,
    };
    pub const ABELIAN: SurfaceModel = SurfaceModel {
        kind: SurfaceKind::AbelianProduct,
    };

    pub fn new(kind: SurfaceKind) -> Self {
        SurfaceModel { kind }
    }

    pub fn is_abelian(&self) -> bool {
        self.kind == SurfaceKind::AbelianProduct
    }

    /// `σ²`.
    pub fn sigma_self(&self) -> i64 {
        match self.kind {
            SurfaceKind::K3WithSection => -2,
            SurfaceKind::AbelianProduct => 0,
        }
    }

    /// `χ(O_X)`.
    pub fn holomorphic_euler_characteristic(&self) -> i64 {
        match self.kind {
            SurfaceKind::K3WithSection => 2,
            SurfaceKind::AbelianProduct => 0,
        }
    }

    pub fn gram(&self) -> [[i64; 2]; 2] {
        [[self.sigma_self(), 1], [1, 0]]
    }

    pub fn intersect(&self, d1: DivisorClass, d2: DivisorClass) -> i64 {
        d1.a * d2.a * self.sigma_self() + d1.a * d2.b + d2.a * d1.b
    }

    pub fn square(&self, d: DivisorClass) -> i64 {
        self.intersect(d, d)
    }

    /// Arithmetic genus by adjunction with trivial canonical class.
    pub fn arithmetic_genus(&self, d: DivisorClass) -> i64 {
        let sq = self.square(d);
        debug_assert!(sq % 2 == 0, "even lattice");
        sq / 2 + 1
    }

    /// Model cone of effective classes: non-negative combinations of `σ`
    /// and `f`, not both zero.
    pub fn is_effective_model(&self, d: DivisorClass) -> bool {
        d.a >= 0 && d.b >= 0 && !d.is_zero()
    }

    /// `D·σ >= 0` and `D·f >= 0`; on these classes Riemann-Roch computes
    /// `dim |D|` without fixed components.
    pub fn is_nef_model(&self, d: DivisorClass) -> bool {
        self.intersect(d, DivisorClass::SIGMA) >= 0 && self.intersect(d, DivisorClass::FIBRE) >= 0
    }

    /// Model ample cone: `L² > 0`, `L·f > 0` and `L·σ > 0`.
    ///
    /// This approximates true ampleness for the generic surface of each kind.
    pub fn is_ample_model(&self, l: DivisorClass) -> bool {
        self.square(l) > 0
            && self.intersect(l, DivisorClass::FIBRE) > 0
            && self.intersect(l, DivisorClass::SIGMA) > 0
    }

    /// Dimension data of the linear system `|D|`, or of the spectral base
    /// on the abelian surface.
    pub fn linear_system_dim(&self, d: DivisorClass) -> Result<LinearSystem> {
        if !self.is_effective_model(d) {
            return Err(Error::NotEffective(d));
        }
        if self.is_abelian() && self.square(d) <= 0 {
            // h⁰ = D²/2 only holds for ample classes on the torus.
            return Err(Error::NotEffective(d));
        }
        Ok(self.expected_linear_system(d))
    }

    /// Riemann-Roch values of [`linear_system_dim`](Self::linear_system_dim)
    /// without the effectivity check. Values may be non-positive outside the
    /// model cone.
    pub fn expected_linear_system(&self, d: DivisorClass) -> LinearSystem {
        let half = self.square(d) / 2;
        match self.kind {
            SurfaceKind::K3WithSection => LinearSystem {
                h0: half + 2,
                projective_dim: half + 1,
                base_dim: half + 1,
            },
            // B̂ is a projective bundle over the abelian surface: fibre
            // P(H⁰) plus two base dimensions.
            SurfaceKind::AbelianProduct => LinearSystem {
                h0: half,
                projective_dim: half - 1,
                base_dim: half + 1,
            },
        }
    }

    /// The wall set `Ξ(c)`, one representative per `±` pair (normalised to
    /// positive `σ`-coefficient), sorted.
    pub fn wall_set(&self, c: i64) -> Result<WallSet> {
        if c < 1 {
            return Err(Error::NonPositiveBound(c));
        }
        let mut walls = Vec::new();
        // f·ξ = a for both kinds, and a = 0 would force ξ² >= 0.
        for a in (2..=c).step_by(2) {
            match self.kind {
                // ξ² = 2a(b - a), so a(a - b) = a·m ranges over (0, 2c].
                SurfaceKind::K3WithSection => {
                    for m in (2..=2 * c / a).step_by(2) {
                        walls.push(DivisorClass::new(a, a - m));
                    }
                }
                // ξ² = 2ab, so 0 < -ab <= 2c.
                SurfaceKind::AbelianProduct => {
                    for nb in (2..=2 * c / a).step_by(2) {
                        walls.push(DivisorClass::new(a, -nb));
                    }
                }
            }
        }
        walls.sort();
        debug_assert!(walls.iter().all(|&w| {
            let sq = self.square(w);
            (-4 * c..0).contains(&sq) && w.a % 2 == 0 && w.b % 2 == 0
        }));
        Ok(WallSet { c, walls })
    }

    /// Checks `c`-suitability of an ample class; on failure reports the first
    /// violating wall in sorted order.
    pub fn is_suitable(&self, l: DivisorClass, c: i64) -> Result<Suitability> {
        if !self.is_ample_model(l) {
            return Err(Error::NotAmple(l));
        }
        let walls = self.wall_set(c)?;
        Ok(self.check_walls(l, &walls.walls))
    }

    pub(crate) fn check_walls(&self, l: DivisorClass, walls: &[DivisorClass]) -> Suitability {
        for &xi in walls {
            let fibre_side = self.intersect(DivisorClass::FIBRE, xi).signum();
            assert!(fibre_side != 0, "wall {xi} is orthogonal to the fibre");
            let side = self.intersect(l, xi).signum();
            if side == 0 || side != fibre_side {
                return Suitability {
                    suitable: false,
                    wall: Some(xi),
                };
            }
        }
        Suitability {
            suitable: true,
            wall: None,
        }
    }

    /// Smallest `σ + N f` that is ample in the model and `c`-suitable.
    pub fn find_suitable(&self, c: i64) -> Result<DivisorClass> {
        let walls = self.wall_set(c)?;
        let mut n = 1;
        loop {
            let l = DivisorClass::new(1, n);
            if self.is_ample_model(l) && self.check_walls(l, &walls.walls).suitable {
                return Ok(l);
            }
            n += 1;
        }
    }
}

/// `a σ + b f`.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct DivisorClass {
    pub a: i64,
    pub b: i64,
}

impl DivisorClass {
    pub const ZERO: DivisorClass = DivisorClass { a: 0, b: 0 };
    pub const SIGMA: DivisorClass = DivisorClass { a: 1, b: 0 };
    pub const FIBRE: DivisorClass = DivisorClass { a: 0, b: 1 };

    pub const fn new(a: i64, b: i64) -> Self {
        DivisorClass { a, b }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// Proportional to the fibre class.
    pub fn is_vertical(&self) -> bool {
        self.a == 0 && self.b != 0
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn coeff(c: i64) -> String {
            match c {
                1 => String::new(),
                -1 => "-".into(),
                c => c.to_string(),
            }
        }
        match (self.a, self.b) {
            (0, 0) => write!(f, "0"),
            (a, 0) => write!(f, "{}σ", coeff(a)),
            (0, b) => write!(f, "{}f", coeff(b)),
            (a, b) if b < 0 => write!(f, "{}σ{}f", coeff(a), coeff(b)),
            (a, b) => write!(f, "{}σ+{}f", coeff(a), coeff(b)),
        }
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, o: DivisorClass) -> DivisorClass {
        DivisorClass::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass::new(-self.a, -self.b)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, d: DivisorClass) -> DivisorClass {
        DivisorClass::new(self * d.a, self * d.b)
    }
}

impl std::iter::Sum for DivisorClass {
    fn sum<I: Iterator<Item = DivisorClass>>(iter: I) -> DivisorClass {
        iter.fold(DivisorClass::ZERO, Add::add)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearSystem {
    pub h0: i64,
    pub projective_dim: i64,
    pub base_dim: i64,
}

/// `Ξ(c)` up to sign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallSet {
    pub c: i64,
    pub walls: Vec<DivisorClass>,
}

impl WallSet {
    pub fn contains(&self, xi: DivisorClass) -> bool {
        self.walls.contains(&xi) || self.walls.contains(&-xi)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Suitability {
    pub suitable: bool,
    pub wall: Option<DivisorClass>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const K3: SurfaceModel = SurfaceModel::K3;
    const AB: SurfaceModel = SurfaceModel::ABELIAN;

    fn d(a: i64, b: i64) -> DivisorClass {
        DivisorClass::new(a, b)
    }

    #[test]
    fn intersections() {
        for s in [K3, AB] {
            assert_eq!(s.intersect(DivisorClass::FIBRE, DivisorClass::FIBRE), 0);
        }
        assert_eq!(K3.intersect(d(1, 3), DivisorClass::FIBRE), 1);
        assert_eq!(K3.square(d(2, 3)), 4);
        assert_eq!(AB.square(d(2, 3)), 12);
    }

    #[test]
    fn genus() {
        assert_eq!(K3.arithmetic_genus(DivisorClass::FIBRE), 1);
        assert_eq!(AB.arithmetic_genus(DivisorClass::FIBRE), 1);
        assert_eq!(K3.arithmetic_genus(DivisorClass::SIGMA), 0);
        assert_eq!(K3.arithmetic_genus(d(2, 3)), 3);
    }

    #[test]
    fn linear_systems() {
        assert_eq!(K3.linear_system_dim(d(2, 3)).unwrap().base_dim, 3);
        let ab = AB.linear_system_dim(d(2, 3)).unwrap();
        assert_eq!((ab.h0, ab.projective_dim, ab.base_dim), (6, 5, 7));
        assert_eq!(
            K3.linear_system_dim(DivisorClass::FIBRE).unwrap().base_dim,
            1
        );
        assert_eq!(
            K3.linear_system_dim(d(-1, 5)),
            Err(Error::NotEffective(d(-1, 5)))
        );
        assert!(AB.linear_system_dim(DivisorClass::FIBRE).is_err());
        assert!(K3.linear_system_dim(DivisorClass::ZERO).is_err());
    }

    #[test]
    fn ample_cone() {
        assert!(!K3.is_ample_model(DivisorClass::FIBRE));
        assert!(!K3.is_ample_model(d(1, 2)));
        assert!(K3.is_ample_model(d(1, 3)));
        assert!(AB.is_ample_model(d(1, 1)));
    }

    #[test]
    fn wall_sets_small() {
        assert!(K3.wall_set(1).unwrap().walls.is_empty());
        assert_eq!(K3.wall_set(2).unwrap().walls, vec![d(2, 0)]);
        assert_eq!(
            K3.wall_set(4).unwrap().walls,
            vec![d(2, -2), d(2, 0), d(4, 2)]
        );
        assert_eq!(AB.wall_set(2).unwrap().walls, vec![d(2, -2)]);
        assert_eq!(K3.wall_set(0), Err(Error::NonPositiveBound(0)));
    }

    #[test]
    fn suitability() {
        let s = K3.is_suitable(d(1, 3), 4).unwrap();
        assert!(!s.suitable);
        assert_eq!(s.wall, Some(d(2, -2)));
        assert!(K3.is_suitable(d(1, 4), 4).unwrap().suitable);
        assert!(K3.is_suitable(d(1, 6), 8).unwrap().suitable);
        assert_eq!(K3.is_suitable(d(1, 2), 4), Err(Error::NotAmple(d(1, 2))));
    }

    #[test]
    fn min_pairing_over_eight_walls() {
        let l = d(1, 6);
        let min = K3
            .wall_set(8)
            .unwrap()
            .walls
            .iter()
            .map(|&w| K3.intersect(l, w))
            .min()
            .unwrap();
        // Wall classes are even, so pairings are even.
        assert_eq!(min, 2);
    }

    #[test]
    fn find_suitable_values() {
        assert_eq!(K3.find_suitable(1).unwrap(), d(1, 3));
        assert_eq!(K3.find_suitable(4).unwrap(), d(1, 4));
        // σ + f lies on the wall ξ = 2σ - 2f of Ξ(2).
        assert_eq!(AB.find_suitable(2).unwrap(), d(1, 2));
        assert_eq!(AB.find_suitable(1).unwrap(), d(1, 1));
    }

    #[test]
    fn extension_example_walls() {
        for dd in 1..=5 {
            let xi = 2 * d(-1, dd);
            for c in 1..=20 {
                assert_eq!(K3.wall_set(c).unwrap().contains(xi), c >= 2 + 2 * dd);
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(d(2, -2).to_string(), "2σ-2f");
        assert_eq!(d(1, 3).to_string(), "σ+3f");
        assert_eq!(d(-1, 1).to_string(), "-σ+f");
        assert_eq!(d(0, 0).to_string(), "0");
    }
}
