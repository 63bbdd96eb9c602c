//! Unimodular toric base changes attached to one-dimensional face pairs.
//!
//! For a face Γ of a pair A with dim Γ = 1, the transform sends the
//! primitive face direction ẽ1 to (1,0) and a completion ẽ2 to (0,1), so
//! that exponents transform by `u = [ẽ1|ẽ2]⁻¹` and supporting vectors by
//! the dual action `[ẽ1|ẽ2]ᵀ`. Under the cone condition the transformed
//! face becomes horizontal and its supporting vector becomes (0,1).

use crate::lattice::{FacePair, Pt, SupportPair};
use crate::polyring::{Poly, PolyMap};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ToricError {
    #[error("transform requires a one-dimensional face")]
    FaceNotOneDimensional,
}

/// 2×2 integer matrix, row-major.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Mat2 {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };

    pub fn from_columns(c1: Pt, c2: Pt) -> Mat2 {
        Mat2 {
            a: c1.x,
            b: c2.x,
            c: c1.y,
            d: c2.y,
        }
    }

    pub fn det(&self) -> i64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul_vec(&self, p: Pt) -> Pt {
        Pt::new(self.a * p.x + self.b * p.y, self.c * p.x + self.d * p.y)
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2 {
            a: self.a,
            b: self.c,
            c: self.b,
            d: self.d,
        }
    }

    /// Inverse of a matrix with determinant ±1.
    pub fn inverse_unimodular(&self) -> Mat2 {
        let det = self.det();
        assert!(det == 1 || det == -1, "matrix is not unimodular");
        Mat2 {
            a: self.d / det,
            b: -self.b / det,
            c: -self.c / det,
            d: self.a / det,
        }
    }
}

/// Extended gcd: returns (g, x, y) with a·x + b·y = g and g ≥ 0.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// The toric base change built from a one-dimensional face Γ ≺ A.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularTransform {
    /// Exponent action: maps e1 to (1,0) and e2 to (0,1).
    pub u: Mat2,
    /// Primitive face direction, oriented away from the base point.
    pub e1: Pt,
    /// Completion making (e1, e2) a lattice basis that spans A1+A2−base
    /// positively.
    pub e2: Pt,
    /// Lattice point of Γ1+Γ2 closest to the origin.
    pub base: Pt,
    /// Primitive supporting vector of the face used to build the transform.
    pub normal: Pt,
}

/// Result of applying a transform to a pair and clearing denominators.
#[derive(Clone, Debug)]
pub struct ClearedPair {
    pub p1: Poly,
    pub p2: Poly,
    pub r1: Pt,
    pub r2: Pt,
}

/// Build the transform for a one-dimensional face of the pair.
///
/// e2 is the extended-gcd solution of `normal·x = 1` shifted by the largest
/// integer multiple of e1 for which the cone condition still holds; the
/// choice is deterministic and any other valid shift yields the same
/// downstream face data.
pub fn build_transform(
    pair: &SupportPair,
    face: &FacePair,
) -> Result<UnimodularTransform, ToricError> {
    if face.dim != 1 {
        return Err(ToricError::FaceNotOneDimensional);
    }
    let fsum = face.sum();
    let hull = fsum.hull();
    debug_assert_eq!(hull.len(), 2);
    let (p0, p1) = (hull[0], hull[1]);
    let base = match p0.norm2().cmp(&p1.norm2()) {
        std::cmp::Ordering::Less => p0,
        std::cmp::Ordering::Greater => p1,
        std::cmp::Ordering::Equal => {
            if p1.sub(p0).is_lex_positive() {
                p0
            } else {
                p1
            }
        }
    };
    let other = if base == p0 { p1 } else { p0 };
    let e1 = other.sub(base).primitive();
    let alpha = face.normal;
    debug_assert_eq!(alpha.dot(e1), 0, "face normal must annihilate e1");

    // Base completion with alpha·e2 = 1; all completions are e2 + k·e1.
    let (g, x, y) = ext_gcd(alpha.x, alpha.y);
    debug_assert_eq!(g, 1, "face normals are primitive");
    let e2_base = Pt::new(x, y);
    debug_assert_eq!(alpha.dot(e2_base), 1);

    // Cone condition: every w in A1+A2−base needs non-negative coordinates
    // in basis (e1, e2). The e2-coordinate is alpha·w, fixed; the
    // e1-coordinate decreases with k, so k is capped by min ⌊b1/b2⌋.
    let e0 = Mat2::from_columns(e1, e2_base);
    let inv0 = e0.inverse_unimodular();
    let mut k_max: Option<i64> = None;
    for w in pair.sum().points() {
        let w = w.sub(base);
        let b = inv0.mul_vec(w);
        debug_assert_eq!(b.y, alpha.dot(w));
        debug_assert!(b.y >= 0, "face must minimize alpha over the pair");
        if b.y > 0 {
            let q = b.x.div_euclid(b.y);
            k_max = Some(k_max.map_or(q, |m| m.min(q)));
        } else {
            debug_assert!(b.x >= 0, "face points must sit on the e1 ray");
        }
    }
    let k = k_max.unwrap_or(0);
    let e2 = e2_base.add(e1.scale(k));
    let e = Mat2::from_columns(e1, e2);
    let u = e.inverse_unimodular();
    debug_assert_eq!(u.mul_vec(e1), Pt::new(1, 0));
    debug_assert_eq!(u.mul_vec(e2), Pt::new(0, 1));
    Ok(UnimodularTransform {
        u,
        e1,
        e2,
        base,
        normal: alpha,
    })
}

impl UnimodularTransform {
    /// Image of a supporting vector under the base change (the dual
    /// action). For the face the transform was built from this is (0,1).
    pub fn normal_image(&self, alpha: Pt) -> Pt {
        Mat2::from_columns(self.e1, self.e2)
            .transpose()
            .mul_vec(alpha)
    }

    /// Transform the exponents of one polynomial and clear denominators
    /// with the minimal monomial shift.
    pub fn apply_poly(&self, p: &Poly) -> (Poly, Pt) {
        let mapped = Poly::from_terms(p.terms().map(|(e, c)| (self.u.mul_vec(*e), c.clone())));
        if mapped.is_zero() {
            return (mapped, Pt::new(0, 0));
        }
        let m = mapped.min_exp();
        let r = Pt::new(m.x.min(0).abs(), m.y.min(0).abs());
        (mapped.shift_exponents(r), r)
    }

    /// Transform both components of a map.
    pub fn apply_map(&self, f: &PolyMap) -> ClearedPair {
        let (p1, r1) = self.apply_poly(&f.f1);
        let (p2, r2) = self.apply_poly(&f.f2);
        ClearedPair { p1, p2, r1, r2 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Support;
    use crate::polyring::gr;

    fn sup(pts: &[(i64, i64)]) -> Support {
        Support::new(pts.iter().map(|&(x, y)| Pt::new(x, y))).unwrap()
    }

    fn poly(terms: &[(i64, i64, i64)]) -> Poly {
        Poly::from_terms(terms.iter().map(|&(x, y, c)| (Pt::new(x, y), gr(c))))
    }

    /// Figure-1 pair: A1 = supp(1+2uv²+3u²v⁴+4uv³+5u²v⁵),
    /// A2 = {(0,0),(1,0),(1,1),(2,2)}.
    fn fig1_pair() -> SupportPair {
        SupportPair::new(
            sup(&[(0, 0), (1, 2), (2, 4), (1, 3), (2, 5)]),
            sup(&[(0, 0), (1, 0), (1, 1), (2, 2)]),
        )
    }

    #[test]
    fn fig1_gamma_delta_transform() {
        let pair = fig1_pair();
        // (γ,δ) is supported by (−2,1).
        let face = pair.face_for_normal(Pt::new(-2, 1));
        assert_eq!(face.g1, sup(&[(0, 0), (1, 2), (2, 4)]));
        assert_eq!(face.g2, sup(&[(1, 0), (2, 2)]));
        let t = build_transform(&pair, &face).unwrap();
        assert_eq!(t.base, Pt::new(1, 0));
        assert_eq!(t.e1, Pt::new(1, 2));
        assert_eq!(t.e2, Pt::new(-1, -1));
        assert_eq!(t.normal_image(Pt::new(-2, 1)), Pt::new(0, 1));
    }

    #[test]
    fn map14_diagonal_face_transform() {
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 1)]),
            sup(&[(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (1, 3)]),
        );
        let face = pair.face_for_normal(Pt::new(-1, 1));
        assert_eq!(face.g1, sup(&[(0, 0), (1, 1)]));
        assert_eq!(face.g2, sup(&[(0, 0), (1, 1)]));
        let t = build_transform(&pair, &face).unwrap();
        assert_eq!(t.e1, Pt::new(1, 1));
        assert_eq!(t.normal_image(Pt::new(-1, 1)), Pt::new(0, 1));
        assert_eq!(t.u.mul_vec(t.e1), Pt::new(1, 0));
        assert_eq!(t.u.mul_vec(t.e2), Pt::new(0, 1));
    }

    #[test]
    fn axis_parallel_face_gives_identity() {
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 0), (0, 1)]),
            sup(&[(0, 0), (1, 0), (0, 2)]),
        );
        let face = pair.face_for_normal(Pt::new(0, 1));
        let t = build_transform(&pair, &face).unwrap();
        assert_eq!(t.e1, Pt::new(1, 0));
        assert_eq!(t.e2, Pt::new(0, 1));
        assert_eq!(t.u, Mat2::IDENTITY);
        assert_eq!(t.normal_image(Pt::new(0, 1)), Pt::new(0, 1));
    }

    #[test]
    fn example_3_4_bit_exact() {
        let pair = fig1_pair();
        let face = pair.face_for_normal(Pt::new(-2, 1));
        let t = build_transform(&pair, &face).unwrap();
        let phi = PolyMap::new(
            poly(&[(0, 0, 1), (1, 2, 2), (2, 4, 3), (1, 3, 4), (2, 5, 5)]),
            poly(&[(0, 0, -1), (1, 0, -2), (2, 2, -3)]),
        );
        let cleared = t.apply_map(&phi);
        // First component verbatim: 1 + 2s + 3s² + 4s²t + 5s³t.
        assert_eq!(
            cleared.p1,
            poly(&[(0, 0, 1), (1, 0, 2), (2, 0, 3), (2, 1, 4), (3, 1, 5)])
        );
        assert_eq!(cleared.r1, Pt::new(0, 0));
        assert_eq!(cleared.r2, Pt::new(1, 2));
    }

    #[test]
    fn identity_transform_leaves_input() {
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 0), (0, 1)]),
            sup(&[(0, 0), (1, 0), (0, 2)]),
        );
        let face = pair.face_for_normal(Pt::new(0, 1));
        let t = build_transform(&pair, &face).unwrap();
        let f = PolyMap::new(poly(&[(1, 0, 2), (0, 1, 3)]), poly(&[(0, 0, 1), (1, 0, 1)]));
        let cleared = t.apply_map(&f);
        assert_eq!(cleared.p1, f.f1);
        assert_eq!(cleared.p2, f.f2);
        assert_eq!(cleared.r1, Pt::new(0, 0));
        assert_eq!(cleared.r2, Pt::new(0, 0));
    }

    #[test]
    fn monomial_under_shear_matrix() {
        // uv under u = [[1,0],[−1,1]] → s (exponent (1,1) ↦ (1,0)).
        let m = Mat2 {
            a: 1,
            b: 0,
            c: -1,
            d: 1,
        };
        assert_eq!(m.mul_vec(Pt::new(1, 1)), Pt::new(1, 0));
    }

    #[test]
    fn cone_condition_holds_after_build() {
        let pair = fig1_pair();
        for face in pair.enumerate_face_pairs() {
            if face.dim != 1 {
                continue;
            }
            let t = build_transform(&pair, &face).unwrap();
            for w in pair.sum().points() {
                let b = t.u.mul_vec(w.sub(t.base));
                assert!(b.x >= 0 && b.y >= 0, "cone condition violated at {:?}", w);
            }
            assert_eq!(t.normal_image(face.normal), Pt::new(0, 1));
        }
    }
}
