//! Brute-force references used by the self-check suite and the tests.
//!
//! Each function here reaches its answer by a different route from the
//! production code: window enumeration instead of closed-form bounds,
//! projective coordinates instead of affine chord-and-tangent, linear
//! algebra on `L(2O)` instead of the group law, and the genus of summed
//! classes instead of pairwise incidence numbers.

use crate::elliptic_fibre::{CurvePoint, EllipticCurve, FibreBundleClass};
use crate::lattice::{DivisorClass, SurfaceModel};
use crate::simpson::{TorsionSheafModel, Verdict};

fn gram_square(surface: &SurfaceModel, a: i64, b: i64) -> i64 {
    let g = surface.gram();
    a * a * g[0][0] + 2 * a * b * g[0][1] + b * b * g[1][1]
}

/// `Ξ(c)` by scanning `|a|, |b| <= 4c + 4`.
pub fn walls_brute_force(surface: &SurfaceModel, c: i64) -> Vec<DivisorClass> {
    let w = 4 * c + 4;
    let mut out = Vec::new();
    for a in -w..=w {
        for b in -w..=w {
            let sq = gram_square(surface, a, b);
            if a % 2 != 0 || b % 2 != 0 || sq >= 0 || sq < -4 * c {
                continue;
            }
            // keep the representative with positive σ-coefficient
            let rep = if a > 0 || (a == 0 && b > 0) {
                DivisorClass::new(a, b)
            } else {
                DivisorClass::new(-a, -b)
            };
            out.push(rep);
        }
    }
    out.sort();
    out.dedup();
    out
}

struct Fp(u64);

impl Fp {
    fn add(&self, x: u64, y: u64) -> u64 {
        (x + y) % self.0
    }
    fn sub(&self, x: u64, y: u64) -> u64 {
        (x + self.0 - y % self.0) % self.0
    }
    fn mul(&self, x: u64, y: u64) -> u64 {
        x * y % self.0
    }
    fn inv(&self, x: u64) -> u64 {
        let (mut base, mut e, mut acc) = (x % self.0, self.0 - 2, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

type Projective = (u64, u64, u64);

fn to_projective(p: &CurvePoint) -> Projective {
    match *p {
        CurvePoint::Infinity => (0, 1, 0),
        CurvePoint::Affine { x, y } => (x, y, 1),
    }
}

fn from_projective(f: &Fp, (x, y, z): Projective) -> CurvePoint {
    if z == 0 {
        return CurvePoint::Infinity;
    }
    let zi = f.inv(z);
    CurvePoint::affine(f.mul(x, zi), f.mul(y, zi))
}

/// Group law in homogeneous coordinates.
pub fn add_projective(curve: &EllipticCurve, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
    let f = Fp(curve.p());
    let (x1, y1, z1) = to_projective(p);
    let (x2, y2, z2) = to_projective(q);
    if z1 == 0 {
        return *q;
    }
    if z2 == 0 {
        return *p;
    }
    let u = f.sub(f.mul(y2, z1), f.mul(y1, z2));
    let v = f.sub(f.mul(x2, z1), f.mul(x1, z2));
    if v == 0 {
        if u != 0 || y1 == 0 {
            return CurvePoint::Infinity;
        }
        // doubling
        let w = f.add(f.mul(curve.a(), f.mul(z1, z1)), f.mul(3, f.mul(x1, x1)));
        let s = f.mul(y1, z1);
        let big_b = f.mul(f.mul(x1, y1), s);
        let h = f.sub(f.mul(w, w), f.mul(8, big_b));
        let x3 = f.mul(2, f.mul(h, s));
        let y3 = f.sub(
            f.mul(w, f.sub(f.mul(4, big_b), h)),
            f.mul(8, f.mul(f.mul(y1, y1), f.mul(s, s))),
        );
        let z3 = f.mul(8, f.mul(s, f.mul(s, s)));
        return from_projective(&f, (x3, y3, z3));
    }
    let v2 = f.mul(v, v);
    let v3 = f.mul(v2, v);
    let z1z2 = f.mul(z1, z2);
    let a = f.sub(
        f.sub(f.mul(f.mul(u, u), z1z2), v3),
        f.mul(2, f.mul(v2, f.mul(x1, z2))),
    );
    let x3 = f.mul(v, a);
    let y3 = f.sub(
        f.mul(u, f.sub(f.mul(v2, f.mul(x1, z2)), a)),
        f.mul(v3, f.mul(y1, z2)),
    );
    let z3 = f.mul(v3, z1z2);
    from_projective(&f, (x3, y3, z3))
}

fn rank_2x2(f: &Fp, rows: &[[u64; 2]]) -> usize {
    let nonzero: Vec<_> = rows.iter().filter(|r| r[0] != 0 || r[1] != 0).collect();
    if nonzero.is_empty() {
        return 0;
    }
    let r0 = nonzero[0];
    let independent = nonzero[1..]
        .iter()
        .any(|r| f.sub(f.mul(r0[0], r[1]), f.mul(r0[1], r[0])) != 0);
    if independent {
        2
    } else {
        1
    }
}

/// `h⁰(O([q] + [t] - 2[O]))` by linear algebra. For a degree-0 divisor
/// this equals `dim L(2[O] - [q] - [t])`, computed on the basis `{1, x}`.
pub fn line_bundle_h0(curve: &EllipticCurve, q: &CurvePoint, t: &CurvePoint) -> u32 {
    let f = Fp(curve.p());
    match (*q, *t) {
        (CurvePoint::Infinity, CurvePoint::Infinity) => 1,
        // L([O] - [P]) consists of constants vanishing at P.
        (CurvePoint::Infinity, _) | (_, CurvePoint::Infinity) => 0,
        (CurvePoint::Affine { x: xq, y: yq }, CurvePoint::Affine { x: xt, .. }) => {
            let mut rows = vec![[1, xq]];
            if q == t {
                // Second-order vanishing at q. Where y ≠ 0, x is a local
                // parameter and d(α + βx)/dx = β; at 2-torsion y is the
                // parameter and x - x_q already vanishes to order 2.
                rows.push(if yq != 0 { [0, 1] } else { [0, 0] });
            } else {
                rows.push([1, xt]);
            }
            (2 - rank_2x2(&f, &rows)) as u32
        }
    }
}

/// `(h⁰, h¹)` of `V ⊗ P_t`, one line bundle per Atiyah block, with `h¹`
/// from Riemann-Roch in genus 1.
pub fn fibre_cohomology(curve: &EllipticCurve, v: &FibreBundleClass, t: &CurvePoint) -> (u32, u32) {
    let h0: u32 = v
        .blocks
        .iter()
        .map(|b| line_bundle_h0(curve, &b.q, t))
        .sum();
    let degree = 0;
    let genus = 1;
    let h1 = (h0 as i64 - degree - 1 + genus) as u32;
    (h0, h1)
}

fn subset_class(model: &TorsionSheafModel, mask: u32) -> DivisorClass {
    model
        .components
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, c)| c.class)
        .sum()
}

/// χ of the saturated subsheaf on `mask`: `Σ dᵢ - p_a(C') + 1 - C'·(D - C')`.
pub fn subsheaf_chi(model: &TorsionSheafModel, mask: u32) -> i64 {
    let s = &model.surface;
    let sub = subset_class(model, mask);
    let rest = model.support() - sub;
    let degree: i64 = model
        .components
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, c)| c.degree)
        .sum();
    degree - s.arithmetic_genus(sub) + 1 - s.intersect(sub, rest)
}

/// Verdict from exhaustive subcurve enumeration.
pub fn brute_force_verdict(model: &TorsionSheafModel, l: DivisorClass) -> Verdict {
    let n = model.components.len();
    let full = (1u32 << n) - 1;
    let s = &model.surface;
    let total = model.support();
    let chi = subsheaf_chi(model, full);
    let total_deg = s.intersect(l, total);
    let mut unstable = false;
    let mut any_equal = false;
    let mut all_fibre = true;
    for mask in 1..full {
        let sub = subset_class(model, mask);
        let lhs = subsheaf_chi(model, mask) * total_deg;
        let rhs = chi * s.intersect(l, sub);
        if lhs > rhs {
            unstable = true;
        } else if lhs == rhs {
            any_equal = true;
            let quotient_vertical = (0..n)
                .filter(|i| mask >> i & 1 == 0)
                .all(|i| model.components[i].class.a == 0);
            all_fibre &= quotient_vertical;
        }
    }
    match (unstable, any_equal, all_fibre) {
        (true, _, _) => Verdict::Unstable,
        (false, false, _) => Verdict::Stable,
        (false, true, true) => Verdict::SemistableFibreOnly,
        (false, true, false) => Verdict::SemistableOther,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_matches_affine_doubling() {
        let c = EllipticCurve::new(5, 1, 1).unwrap();
        let p = CurvePoint::affine(0, 1);
        assert_eq!(add_projective(&c, &p, &p), CurvePoint::affine(4, 2));
    }

    #[test]
    fn h0_of_inverse_pair() {
        let c = EllipticCurve::new(5, 1, 1).unwrap();
        let p = CurvePoint::affine(0, 1);
        assert_eq!(line_bundle_h0(&c, &p, &CurvePoint::affine(0, 4)), 1);
        assert_eq!(line_bundle_h0(&c, &p, &p), 0);
        assert_eq!(line_bundle_h0(&c, &p, &CurvePoint::Infinity), 0);
    }

    #[test]
    fn two_torsion_self_pair() {
        // y² = x³ - x over F_7 has the 2-torsion point (0, 0).
        let c = EllipticCurve::new(7, -1, 0).unwrap();
        let t = CurvePoint::affine(0, 0);
        assert_eq!(line_bundle_h0(&c, &t, &t), 1);
    }
}
