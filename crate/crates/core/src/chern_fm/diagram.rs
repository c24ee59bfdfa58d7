//! Symbolic check that the two relative transforms on a product torus
//! `T = V × W` compose to the Mukai transform, in either order.
//!
//! Objects are external products `A ⊠ B` of degree-0 sheaves on the two
//! elliptic factors. On an elliptic curve, with Poincaré bundles normalised
//! at the origin, the transform acts as
//!
//! ```text
//!   O_x  ↦ P_x        (WIT₀)
//!   P_x  ↦ O_{-x}     (WIT₁)
//! ```
//!
//! and `O = P_0`. The relative transforms act on one factor at a time and
//! the shifts add. The direct Mukai transform `F` on `T` is given by its own
//! table so the comparison is not circular.

use serde::{Deserialize, Serialize};

use super::{fibre_pair_transform, Direction, FibrePair};

/// Point label in the group of an elliptic factor; `0` is the origin.
pub type PointLabel = i64;

/// Sheaf on a single elliptic factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorSheaf {
    Skyscraper(PointLabel),
    Flat(PointLabel),
}

impl FactorSheaf {
    pub const TRIVIAL: FactorSheaf = FactorSheaf::Flat(0);

    pub fn fibre_pair(&self) -> FibrePair {
        match self {
            FactorSheaf::Skyscraper(_) => FibrePair::new(0, 1),
            FactorSheaf::Flat(_) => FibrePair::new(1, 0),
        }
    }

    /// One-dimensional transform: image and shift.
    pub fn transform(&self) -> (FactorSheaf, u8) {
        match *self {
            FactorSheaf::Skyscraper(x) => (FactorSheaf::Flat(x), 0),
            FactorSheaf::Flat(x) => (FactorSheaf::Skyscraper(-x), 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorTag {
    StructureSheaf,
    SkyscraperPoint,
    FlatLineBundle,
    FlatOnFibre,
    SectionSheaf,
}

/// `v ⊠ w` placed in cohomological degree `wit_index`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorObject {
    pub tag: GeneratorTag,
    pub wit_index: Option<u8>,
    pub v: FactorSheaf,
    pub w: FactorSheaf,
}

impl GeneratorObject {
    pub fn new(v: FactorSheaf, w: FactorSheaf, wit_index: Option<u8>) -> Self {
        GeneratorObject {
            tag: classify(v, w),
            wit_index,
            v,
            w,
        }
    }

    pub fn structure_sheaf() -> Self {
        Self::new(FactorSheaf::TRIVIAL, FactorSheaf::TRIVIAL, None)
    }

    pub fn skyscraper(x: (PointLabel, PointLabel)) -> Self {
        Self::new(
            FactorSheaf::Skyscraper(x.0),
            FactorSheaf::Skyscraper(x.1),
            None,
        )
    }

    pub fn flat(x: (PointLabel, PointLabel)) -> Self {
        Self::new(FactorSheaf::Flat(x.0), FactorSheaf::Flat(x.1), None)
    }

    /// The Mukai vector restricted to product classes:
    /// `(r_v r_w, r_v d_w, d_v r_w, d_v d_w)`.
    pub fn product_vector(&self) -> [i64; 4] {
        let (p, q) = (self.v.fibre_pair(), self.w.fibre_pair());
        [
            p.rank * q.rank,
            p.rank * q.fibre_degree,
            p.fibre_degree * q.rank,
            p.fibre_degree * q.fibre_degree,
        ]
    }
}

fn classify(v: FactorSheaf, w: FactorSheaf) -> GeneratorTag {
    use FactorSheaf::*;
    match (v, w) {
        (Flat(0), Flat(0)) => GeneratorTag::StructureSheaf,
        (Flat(_), Flat(_)) => GeneratorTag::FlatLineBundle,
        (Skyscraper(_), Skyscraper(_)) => GeneratorTag::SkyscraperPoint,
        (Flat(0), Skyscraper(_)) => GeneratorTag::SectionSheaf,
        _ => GeneratorTag::FlatOnFibre,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    V,
    W,
}

/// Relative transform along one factor; shifts accumulate.
pub fn relative(obj: &GeneratorObject, along: Factor) -> GeneratorObject {
    let shift = obj.wit_index.unwrap_or(0);
    match along {
        Factor::V => {
            let (v, s) = obj.v.transform();
            GeneratorObject::new(v, obj.w, Some(shift + s))
        }
        Factor::W => {
            let (w, s) = obj.w.transform();
            GeneratorObject::new(obj.v, w, Some(shift + s))
        }
    }
}

/// `Φ`: along the fibres of `V × W → V`, landing on `V × Ŵ`.
pub fn phi(obj: &GeneratorObject) -> GeneratorObject {
    relative(obj, Factor::W)
}

/// `Ψ`: along `V`, from `V × Ŵ` to `V̂ × Ŵ`.
pub fn psi(obj: &GeneratorObject) -> GeneratorObject {
    relative(obj, Factor::V)
}

/// `Υ`: along `V`, from `V × W` to `V̂ × W`.
pub fn upsilon(obj: &GeneratorObject) -> GeneratorObject {
    relative(obj, Factor::V)
}

/// `Ξ`: along `W`, from `V̂ × W` to `V̂ × Ŵ`.
pub fn xi(obj: &GeneratorObject) -> GeneratorObject {
    relative(obj, Factor::W)
}

/// The Mukai transform of `T`, tabulated on its generators.
pub fn mukai_direct(obj: &GeneratorObject) -> Option<GeneratorObject> {
    use FactorSheaf::*;
    match (obj.v, obj.w) {
        (Skyscraper(a), Skyscraper(b)) => Some(GeneratorObject::flat((a, b)).with_wit(0)),
        (Flat(a), Flat(b)) => Some(GeneratorObject::skyscraper((-a, -b)).with_wit(2)),
        _ => None,
    }
}

impl GeneratorObject {
    fn with_wit(mut self, wit: u8) -> Self {
        self.wit_index = Some(wit);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramCheck {
    pub generator: GeneratorTag,
    /// `Φ(E)`, the intermediate object on `V × Ŵ`.
    pub via_phi: GeneratorObject,
    /// `Ψ∘Φ(E)`.
    pub path_a: GeneratorObject,
    /// `Ξ∘Υ(E)`.
    pub path_b: GeneratorObject,
    /// `F(E)`.
    pub direct: Option<GeneratorObject>,
    #[serde(rename = "match")]
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramReport {
    pub checks: Vec<DiagramCheck>,
    /// Factor table agrees with the fibre-pair matrix, and the two orders of
    /// Kronecker composition equal the declared Mukai matrix.
    pub matrix_consistent: bool,
}

impl DiagramReport {
    pub fn all_match(&self) -> bool {
        self.matrix_consistent && self.checks.iter().all(|c| c.matches)
    }
}

type Mat4 = [[i64; 4]; 4];

const FIBRE_MATRIX: [[i64; 2]; 2] = [[0, 1], [-1, 0]];
const IDENTITY2: [[i64; 2]; 2] = [[1, 0], [0, 1]];

/// Mukai transform on product classes, ordered as in
/// [`GeneratorObject::product_vector`].
pub const DECLARED_MUKAI: Mat4 = [[0, 0, 0, 1], [0, 0, -1, 0], [0, -1, 0, 0], [1, 0, 0, 0]];

fn kron(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> Mat4 {
    let mut out = [[0; 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + j][2 * k + l] = a[i][k] * b[j][l];
                }
            }
        }
    }
    out
}

fn matmul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut out = [[0; 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

fn apply(m: &Mat4, v: [i64; 4]) -> [i64; 4] {
    let mut out = [0; 4];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|k| m[i][k] * v[k]).sum();
    }
    out
}

fn sign(shift: u8) -> i64 {
    if shift.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn matrix_consistent(generators: &[GeneratorObject]) -> bool {
    // Factor table vs (0 1; -1 0), with the shift carried as a sign.
    let factor_ok = [
        FactorSheaf::Skyscraper(3),
        FactorSheaf::Flat(5),
        FactorSheaf::TRIVIAL,
    ]
    .iter()
    .all(|s| {
        let (img, shift) = s.transform();
        let mapped = fibre_pair_transform(s.fibre_pair(), Direction::Forward);
        let expect = img.fibre_pair();
        mapped == FibrePair::new(sign(shift) * expect.rank, sign(shift) * expect.fibre_degree)
    });
    let along_v = kron(FIBRE_MATRIX, IDENTITY2);
    let along_w = kron(IDENTITY2, FIBRE_MATRIX);
    let orders_ok = matmul(&along_v, &along_w) == DECLARED_MUKAI
        && matmul(&along_w, &along_v) == DECLARED_MUKAI;
    let characters_ok = generators.iter().all(|g| match mukai_direct(g) {
        Some(img) => {
            let s = sign(img.wit_index.unwrap_or(0));
            apply(&DECLARED_MUKAI, g.product_vector()) == img.product_vector().map(|x| s * x)
        }
        None => false,
    });
    factor_ok && orders_ok && characters_ok
}

/// Runs `Ψ∘Φ`, `Ξ∘Υ` and `F` on `O_T`, `O_x` and `P_x` for a generic point.
pub fn verify_diagram_generators() -> DiagramReport {
    let x = (3, 5);
    let generators = [
        GeneratorObject::skyscraper(x),
        GeneratorObject::structure_sheaf(),
        GeneratorObject::flat(x),
    ];
    let checks = generators
        .iter()
        .map(|g| {
            let via_phi = phi(g);
            let path_a = psi(&via_phi);
            let path_b = xi(&upsilon(g));
            let direct = mukai_direct(g);
            DiagramCheck {
                generator: g.tag,
                via_phi,
                path_a,
                path_b,
                direct,
                matches: path_a == path_b && Some(path_a) == direct,
            }
        })
        .collect();
    DiagramReport {
        checks,
        matrix_consistent: matrix_consistent(&generators),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn skyscraper_path() {
        let g = GeneratorObject::skyscraper((3, 5));
        let step = phi(&g);
        assert_eq!(step.tag, GeneratorTag::FlatOnFibre);
        assert_eq!(step.wit_index, Some(0));
        let end = psi(&step);
        assert_eq!(end.tag, GeneratorTag::FlatLineBundle);
        assert_eq!(end.wit_index, Some(0));
        assert_eq!(mukai_direct(&g).unwrap().tag, GeneratorTag::FlatLineBundle);
    }

    #[test]
    fn structure_path() {
        let g = GeneratorObject::structure_sheaf();
        let step = phi(&g);
        assert_eq!(step.tag, GeneratorTag::SectionSheaf);
        assert_eq!(step.wit_index, Some(1));
        let end = psi(&step);
        assert_eq!(end, GeneratorObject::skyscraper((0, 0)).with_wit(2));
    }

    #[test]
    fn flat_path() {
        let g = GeneratorObject::flat((3, 5));
        let step = phi(&g);
        assert_eq!(step.tag, GeneratorTag::FlatOnFibre);
        assert_eq!(step.wit_index, Some(1));
        assert_eq!(
            psi(&step),
            GeneratorObject::skyscraper((-3, -5)).with_wit(2)
        );
    }

    #[test]
    fn report_all_match() {
        let report = verify_diagram_generators();
        assert_eq!(report.checks.len(), 3);
        assert!(report.matrix_consistent);
        assert!(report.all_match());
    }

    #[test]
    fn wrong_normalisation_is_caught() {
        // F(P_x) is O_{-x}; an unsigned label must not compare equal.
        let g = GeneratorObject::flat((3, 5));
        let wrong = GeneratorObject::skyscraper((3, 5)).with_wit(2);
        assert_ne!(Some(wrong), mukai_direct(&g));
    }
}
