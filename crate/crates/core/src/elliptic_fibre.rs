//! Exact elliptic curves over prime fields and the cohomology of
//! semistable degree-0 bundles on them.
//!
//! A fibre is a short Weierstrass curve `y² = x³ + ax + b` over `F_p`,
//! `p > 3`. The curve is identified with its dual through the origin, a
//! point `q` standing for the flat line bundle `O(q - O)`.
//!
//! Semistable degree-0 bundles are stored only by their Atiyah type: a
//! multiset of blocks `F_m ⊗ L_q`. Each block has exactly one section (and,
//! by Riemann-Roch, one `H¹`) after twisting by `P_t` precisely when
//! `q + t = O`, and none otherwise.

use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CurveSpec", into = "CurveSpec")]
pub struct EllipticCurve {
    p: u64,
    a: u64,
    b: u64,
}

/// Unvalidated JSON form of a curve.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct CurveSpec {
    p: u64,
    a: i64,
    b: i64,
}

impl TryFrom<CurveSpec> for EllipticCurve {
    type Error = Error;
    fn try_from(c: CurveSpec) -> Result<Self> {
        EllipticCurve::new(c.p, c.a, c.b)
    }
}

impl From<EllipticCurve> for CurveSpec {
    fn from(c: EllipticCurve) -> Self {
        CurveSpec {
            p: c.p,
            a: c.a as i64,
            b: c.b as i64,
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl EllipticCurve {
    /// Fails for composite or small characteristic and for singular curves.
    pub fn new(p: u64, a: i64, b: i64) -> Result<Self> {
        if p <= 3 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::BadCharacteristic(p));
        }
        let reduce = |v: i64| v.rem_euclid(p as i64) as u64;
        let curve = EllipticCurve {
            p,
            a: reduce(a),
            b: reduce(b),
        };
        let a3 = curve.mul(curve.mul(curve.a, curve.a), curve.a);
        let b2 = curve.mul(curve.b, curve.b);
        if curve.add(curve.mul(4, a3), curve.mul(27, b2)) == 0 {
            return Err(Error::SingularCurve(p));
        }
        Ok(curve)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    fn add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.p
    }

    fn sub(&self, x: u64, y: u64) -> u64 {
        (x + self.p - y) % self.p
    }

    fn mul(&self, x: u64, y: u64) -> u64 {
        x * y % self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    fn inv(&self, x: u64) -> u64 {
        debug_assert!(!x.is_multiple_of(self.p));
        self.pow(x, self.p - 2)
    }

    /// `x³ + ax + b`.
    pub fn rhs(&self, x: u64) -> u64 {
        let x2 = self.mul(x, x);
        self.add(self.add(self.mul(x2, x), self.mul(self.a, x)), self.b)
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match *pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => {
                x < self.p && y < self.p && self.mul(y, y) == self.rhs(x)
            }
        }
    }

    pub fn check(&self, pt: &CurvePoint) -> Result<()> {
        match *pt {
            CurvePoint::Affine { x, y } if !self.contains(pt) => Err(Error::OffCurve { x, y }),
            _ => Ok(()),
        }
    }

    pub fn neg(&self, pt: &CurvePoint) -> CurvePoint {
        match *pt {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::Affine {
                x,
                y: self.sub(0, y),
            },
        }
    }

    /// Chord-and-tangent addition; `O` is the identity.
    pub fn add_points(&self, p: &CurvePoint, q: &CurvePoint) -> Result<CurvePoint> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    fn add_unchecked(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (*p, *q) {
            (CurvePoint::Infinity, r) | (r, CurvePoint::Infinity) => return r,
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let lambda = if x1 == x2 {
            if self.add(y1, y2) == 0 {
                return CurvePoint::Infinity;
            }
            let num = self.add(self.mul(3, self.mul(x1, x1)), self.a);
            self.mul(num, self.inv(self.mul(2, y1)))
        } else {
            self.mul(self.sub(y2, y1), self.inv(self.sub(x2, x1)))
        };
        let x3 = self.sub(self.sub(self.mul(lambda, lambda), x1), x2);
        let y3 = self.sub(self.mul(lambda, self.sub(x1, x3)), y1);
        CurvePoint::Affine { x: x3, y: y3 }
    }

    /// `n·P` by double-and-add; negative `n` multiplies `-P`.
    pub fn mul_point(&self, pt: &CurvePoint, n: i64) -> Result<CurvePoint> {
        self.check(pt)?;
        let mut base = if n < 0 { self.neg(pt) } else { *pt };
        let mut k = n.unsigned_abs();
        let mut acc = CurvePoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.add_unchecked(&base, &base);
            k >>= 1;
        }
        Ok(acc)
    }

    /// Every rational point, `O` first, then affine points by `(x, y)`.
    pub fn points(&self) -> Vec<CurvePoint> {
        let p = self.p;
        let mut roots: Vec<Vec<u64>> = vec![Vec::new(); p as usize];
        for y in 0..p {
            roots[self.mul(y, y) as usize].push(y);
        }
        let mut out = vec![CurvePoint::Infinity];
        for x in 0..p {
            for &y in &roots[self.rhs(x) as usize] {
                out.push(CurvePoint::Affine { x, y });
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.points().len()
    }
}

/// A rational point, or the point at infinity `O`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CurvePoint {
    Infinity,
    Affine { x: u64, y: u64 },
}

impl CurvePoint {
    pub fn affine(x: u64, y: u64) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }
}

impl fmt::Display for CurvePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurvePoint::Infinity => write!(f, "O"),
            CurvePoint::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

// JSON: "O" or {"x": .., "y": ..}.
impl Serialize for CurvePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Xy {
            x: u64,
            y: u64,
        }
        match *self {
            CurvePoint::Infinity => s.serialize_str("O"),
            CurvePoint::Affine { x, y } => Xy { x, y }.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for CurvePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Marker(String),
            Xy { x: u64, y: u64 },
        }
        match Repr::deserialize(d)? {
            Repr::Marker(m) if m == "O" => Ok(CurvePoint::Infinity),
            Repr::Marker(m) => Err(de::Error::custom(format!(
                "expected \"O\" or {{x, y}}, got {m:?}"
            ))),
            Repr::Xy { x, y } => Ok(CurvePoint::Affine { x, y }),
        }
    }
}

/// Atiyah block `F_m ⊗ L_q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtiyahBlock {
    pub q: CurvePoint,
    pub m: u32,
}

/// Semistable degree-0 bundle on a fibre, up to its Atiyah decomposition.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FibreBundleClass {
    pub blocks: Vec<AtiyahBlock>,
}

impl FibreBundleClass {
    pub fn new(blocks: Vec<AtiyahBlock>) -> Self {
        FibreBundleClass { blocks }
    }

    pub fn from_pairs(pairs: &[(CurvePoint, u32)]) -> Self {
        FibreBundleClass::new(pairs.iter().map(|&(q, m)| AtiyahBlock { q, m }).collect())
    }

    pub fn validate(&self, curve: &EllipticCurve) -> Result<()> {
        if self.blocks.is_empty() {
            return Err(Error::EmptyBundle);
        }
        for block in &self.blocks {
            if block.m == 0 {
                return Err(Error::ZeroBlockRank);
            }
            curve.check(&block.q)?;
        }
        Ok(())
    }

    pub fn rank(&self) -> u32 {
        self.blocks.iter().map(|b| b.m).sum()
    }

    /// Pairwise distinct block points; then `h⁰(V ⊗ P_t) <= 1` for every `t`.
    pub fn is_regular(&self) -> bool {
        let mut pts: Vec<_> = self.blocks.iter().map(|b| b.q).collect();
        pts.sort();
        pts.windows(2).all(|w| w[0] != w[1])
    }

    pub fn jordan_holder_multiplicity(&self, at: &CurvePoint) -> u32 {
        self.blocks.iter().filter(|b| b.q == *at).map(|b| b.m).sum()
    }

    /// `(h⁰, h¹)` of `V ⊗ P_twist`.
    pub fn h0_h1(&self, twist: &CurvePoint, curve: &EllipticCurve) -> Result<(u32, u32)> {
        self.validate(curve)?;
        curve.check(twist)?;
        let h0 = self
            .blocks
            .iter()
            .filter(|b| curve.add_unchecked(&b.q, twist).is_identity())
            .count() as u32;
        // χ = deg = 0 on a genus-1 curve.
        Ok((h0, h0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> EllipticCurve {
        EllipticCurve::new(5, 1, 1).unwrap()
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            EllipticCurve::new(9, 1, 1),
            Err(Error::BadCharacteristic(9))
        );
        assert_eq!(
            EllipticCurve::new(3, 1, 1),
            Err(Error::BadCharacteristic(3))
        );
        // 4·(-3)³ + 27·2² = 0 over any field.
        assert_eq!(EllipticCurve::new(7, -3, 2), Err(Error::SingularCurve(7)));
    }

    #[test]
    fn doubling_on_f5() {
        let c = f5();
        let p = CurvePoint::affine(0, 1);
        assert_eq!(c.add_points(&p, &p).unwrap(), CurvePoint::affine(4, 2));
        assert_eq!(c.add_points(&p, &CurvePoint::Infinity).unwrap(), p);
        assert_eq!(c.add_points(&p, &c.neg(&p)).unwrap(), CurvePoint::Infinity);
    }

    #[test]
    fn group_order_f5() {
        let c = f5();
        let pts = c.points();
        assert_eq!(pts.len(), 9);
        for p in &pts {
            assert!(c.contains(p));
            assert!(c.mul_point(p, 9).unwrap().is_identity());
        }
    }

    #[test]
    fn off_curve_rejected() {
        let c = f5();
        let bad = CurvePoint::affine(0, 2);
        assert_eq!(
            c.add_points(&bad, &CurvePoint::Infinity),
            Err(Error::OffCurve { x: 0, y: 2 })
        );
    }

    #[test]
    fn cohomology_table() {
        let c = f5();
        let q = CurvePoint::affine(0, 1);
        let trivial = FibreBundleClass::from_pairs(&[(CurvePoint::Infinity, 1)]);
        assert_eq!(trivial.h0_h1(&CurvePoint::Infinity, &c).unwrap(), (1, 1));
        let block = FibreBundleClass::from_pairs(&[(q, 2)]);
        assert_eq!(block.h0_h1(&c.neg(&q), &c).unwrap(), (1, 1));
        assert_eq!(block.h0_h1(&q, &c).unwrap(), (0, 0));
        let pts = c.points();
        let three = FibreBundleClass::from_pairs(&[(pts[1], 1), (pts[2], 1), (pts[3], 1)]);
        let generic = pts
            .iter()
            .find(|t| {
                pts[1..4]
                    .iter()
                    .all(|q| c.add_points(q, t).unwrap() != CurvePoint::Infinity)
            })
            .unwrap();
        assert_eq!(three.h0_h1(generic, &c).unwrap(), (0, 0));
    }

    #[test]
    fn regularity_and_multiplicity() {
        let c = f5();
        let pts = c.points();
        let (q, q2) = (pts[1], pts[2]);
        assert!(FibreBundleClass::from_pairs(&[(q, 3)]).is_regular());
        let doubled = FibreBundleClass::from_pairs(&[(q, 1), (q, 1)]);
        assert!(!doubled.is_regular());
        assert_eq!(doubled.h0_h1(&c.neg(&q), &c).unwrap(), (2, 2));
        assert!(FibreBundleClass::from_pairs(&[(q, 1), (q2, 2)]).is_regular());

        let v = FibreBundleClass::from_pairs(&[(q, 2), (q, 1)]);
        assert_eq!(v.jordan_holder_multiplicity(&q), 3);
        assert_eq!(
            FibreBundleClass::from_pairs(&[(q, 2)]).jordan_holder_multiplicity(&q),
            2
        );
        assert_eq!(
            FibreBundleClass::from_pairs(&[(q, 2)]).jordan_holder_multiplicity(&q2),
            0
        );
    }

    #[test]
    fn bundle_validation() {
        let c = f5();
        assert_eq!(
            FibreBundleClass::new(vec![]).validate(&c),
            Err(Error::EmptyBundle)
        );
        assert_eq!(
            FibreBundleClass::from_pairs(&[(CurvePoint::Infinity, 0)]).validate(&c),
            Err(Error::ZeroBlockRank)
        );
    }

    #[test]
    fn point_json() {
        let o = serde_json::to_string(&CurvePoint::Infinity).unwrap();
        assert_eq!(o, "\"O\"");
        let p: CurvePoint = serde_json::from_str(r#"{"x": 4, "y": 2}"#).unwrap();
        assert_eq!(p, CurvePoint::affine(4, 2));
        assert!(serde_json::from_str::<CurvePoint>("\"P\"").is_err());
    }
}
