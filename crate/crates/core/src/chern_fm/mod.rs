//! Chern characters and the action of the relative Fourier-Mukai transform
//! on them.
//!
//! Characters are triples `(rank, c1, ch2)` with `ch2 = c1²/2 - c2`. To stay
//! in integers `ch2` is carried doubled.
//!
//! The relative transform `Φ` along the fibres is only evaluated on the
//! family `(r, 0, -k)` it is known on, together with its two generators
//! `ch(O_X) = (1, 0, 0)` and `ch(O_x) = (0, 0, 1)`. Outside that family we
//! refuse rather than extrapolate.

pub mod diagram;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ChernTriple {
    pub rank: i64,
    pub c1: DivisorClass,
    pub ch2_times_2: i64,
}

impl ChernTriple {
    pub const fn new(rank: i64, c1: DivisorClass, ch2_times_2: i64) -> Self {
        ChernTriple {
            rank,
            c1,
            ch2_times_2,
        }
    }

    /// `(r, 0, -k)`: rank `r`, trivial determinant, `c2 = k`.
    pub const fn instanton(r: i64, k: i64) -> Self {
        ChernTriple::new(r, DivisorClass::ZERO, -2 * k)
    }

    pub fn ch2(&self) -> Ratio<i64> {
        Ratio::new(self.ch2_times_2, 2)
    }

    /// Rank must be non-negative and `c1²/2 - ch2` integral.
    pub fn validate(&self, surface: &SurfaceModel) -> Result<()> {
        if self.rank < 0 {
            return Err(Error::NegativeRank(self.rank));
        }
        let twice_c2 = surface.square(self.c1) - self.ch2_times_2;
        if twice_c2 % 2 != 0 {
            return Err(Error::Ch2Parity(twice_c2));
        }
        Ok(())
    }

    pub fn c2(&self, surface: &SurfaceModel) -> Result<i64> {
        self.validate(surface)?;
        Ok((surface.square(self.c1) - self.ch2_times_2) / 2)
    }

    /// `ch(O(D)) = (1, D, D²/2)`.
    pub fn line_bundle(d: DivisorClass, surface: &SurfaceModel) -> Self {
        ChernTriple::new(1, d, surface.square(d))
    }

    pub fn scale(&self, m: i64) -> Self {
        ChernTriple::new(m * self.rank, m * self.c1, m * self.ch2_times_2)
    }
}

impl std::ops::Add for ChernTriple {
    type Output = ChernTriple;
    fn add(self, o: ChernTriple) -> ChernTriple {
        ChernTriple::new(
            self.rank + o.rank,
            self.c1 + o.c1,
            self.ch2_times_2 + o.ch2_times_2,
        )
    }
}

impl std::ops::Neg for ChernTriple {
    type Output = ChernTriple;
    fn neg(self) -> ChernTriple {
        self.scale(-1)
    }
}

/// `μ(E) = c1(E)·ℓ / rank(E)`.
pub fn slope(e: &ChernTriple, l: DivisorClass, surface: &SurfaceModel) -> Result<Ratio<i64>> {
    if e.rank <= 0 {
        return Err(Error::ZeroRank);
    }
    if !surface.is_ample_model(l) {
        return Err(Error::NotAmple(l));
    }
    Ok(Ratio::new(surface.intersect(e.c1, l), e.rank))
}

/// Output of [`fm_transform_ch`]: the character of the single non-vanishing
/// cohomology sheaf and the degree it sits in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transformed {
    pub triple: ChernTriple,
    pub wit_index: u8,
}

/// Signed action of the derived transform on the two generators. Sign
/// records the cohomological shift, so this map is genuinely linear.
fn derived_image(rank: i64, skyscraper_count: i64) -> ChernTriple {
    // ch Φ(O_X) = -ch O_σ̂ (WIT₁), ch Φ(O_x) = +ch P̂_x (WIT₀); ch2 of both
    // images is fixed at 0.
    let from_structure = ChernTriple::new(0, -DivisorClass::SIGMA, 0);
    let from_point = ChernTriple::new(0, DivisorClass::FIBRE, 0);
    from_structure.scale(rank) + from_point.scale(skyscraper_count)
}

/// Character of `Φ(E)` for `E` in the supported family.
///
/// `(r, 0, -k)` with `r, k >= 0` is WIT₁ and maps to `(0, k f̂ + r σ̂, 0)`;
/// the skyscraper character `(0, 0, 1)` is WIT₀ and maps to `(0, f̂, 0)`.
pub fn fm_transform_ch(e: &ChernTriple, surface: &SurfaceModel) -> Result<Transformed> {
    e.validate(surface)?;
    if !e.c1.is_zero() {
        return Err(Error::UnsupportedShape(format!(
            "c1 = {} is nonzero; only (r, 0, -k) is supported",
            e.c1
        )));
    }
    if e.ch2_times_2 % 2 != 0 {
        return Err(Error::UnsupportedShape("ch2 is not integral".into()));
    }
    let ch2 = e.ch2_times_2 / 2;
    let image = derived_image(e.rank, ch2);
    if e.rank == 0 && ch2 == 1 {
        return Ok(Transformed {
            triple: image,
            wit_index: 0,
        });
    }
    let k = -ch2;
    if k < 0 || (e.rank == 0 && k == 0) {
        return Err(Error::UnsupportedShape(format!(
            "(rank {}, ch2 {}) is outside the family (r, 0, -k), r, k >= 0",
            e.rank, ch2
        )));
    }
    Ok(Transformed {
        triple: -image,
        wit_index: 1,
    })
}

/// `(rank, fibre degree)` of a sheaf on an elliptic fibre.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FibrePair {
    pub rank: i64,
    pub fibre_degree: i64,
}

impl FibrePair {
    pub const fn new(rank: i64, fibre_degree: i64) -> Self {
        FibrePair { rank, fibre_degree }
    }

    /// `r₁d₂ - r₂d₁`.
    pub fn symplectic(&self, other: &FibrePair) -> i64 {
        self.rank * other.fibre_degree - other.rank * self.fibre_degree
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Inverse,
}

/// Action of the fibrewise transform on `(rank, degree)`: the matrix
/// `(0 1; -1 0)` and its inverse.
pub fn fibre_pair_transform(v: FibrePair, direction: Direction) -> FibrePair {
    match direction {
        Direction::Forward => FibrePair::new(v.fibre_degree, -v.rank),
        Direction::Inverse => FibrePair::new(-v.fibre_degree, v.rank),
    }
}

/// The Mukai/Nahm swap `(r, 0, -k) ↦ (k, 0, -r)` on the product torus.
pub fn mukai_nahm_ch(e: &ChernTriple) -> Result<ChernTriple> {
    if !e.c1.is_zero() || e.ch2_times_2 % 2 != 0 {
        return Err(Error::UnsupportedShape(
            "Nahm numerology needs c1 = 0 and integral ch2".into(),
        ));
    }
    let (r, k) = (e.rank, -e.ch2_times_2 / 2);
    if r < 2 || k < 2 {
        return Err(Error::OutOfRange { r, k });
    }
    Ok(ChernTriple::instanton(k, r))
}
