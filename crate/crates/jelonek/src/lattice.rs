//! Exact lattice geometry on Z²: convex hulls, Minkowski sums, mixed
//! volumes, integer lengths, and face-pair enumeration for support pairs.
//!
//! Everything here is integer/rational arithmetic; no floating point.
//! Faces follow the minimizing convention: a vector `α` supports a face
//! when the face is exactly the set of points minimizing `α·x`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("support must be non-empty")]
    EmptySupport,
    #[error("operation requires a one-dimensional support (a segment)")]
    NotASegment,
    #[error("support pair is dependent (mixed volume zero)")]
    DependentPair,
}

/// A point of the exponent lattice Z².
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Pt {
    pub x: i64,
    pub y: i64,
}

impl fmt::Debug for Pt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

pub const ORIGIN: Pt = Pt { x: 0, y: 0 };

impl Pt {
    pub const fn new(x: i64, y: i64) -> Self {
        Pt { x, y }
    }

    pub fn add(self, o: Pt) -> Pt {
        Pt::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Pt) -> Pt {
        Pt::new(self.x - o.x, self.y - o.y)
    }

    pub fn neg(self) -> Pt {
        Pt::new(-self.x, -self.y)
    }

    pub fn scale(self, k: i64) -> Pt {
        Pt::new(self.x * k, self.y * k)
    }

    pub fn dot(self, o: Pt) -> i64 {
        self.x * o.x + self.y * o.y
    }

    pub fn norm2(self) -> i64 {
        self.dot(self)
    }

    pub fn is_origin(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// Divide out the gcd of the coordinates, keeping orientation.
    pub fn primitive(self) -> Pt {
        if self.is_origin() {
            return self;
        }
        let g = self.x.abs().gcd(&self.y.abs());
        Pt::new(self.x / g, self.y / g)
    }

    /// Rotate by 90° counterclockwise.
    pub fn rot90(self) -> Pt {
        Pt::new(-self.y, self.x)
    }

    /// Lexicographically positive: first coordinate positive, or zero first
    /// coordinate and positive second.
    pub fn is_lex_positive(self) -> bool {
        self.x > 0 || (self.x == 0 && self.y > 0)
    }
}

/// cross(a, b) = a.x·b.y − a.y·b.x.
pub fn cross(a: Pt, b: Pt) -> i64 {
    a.x * b.y - a.y * b.x
}

/// Counterclockwise convex hull (Andrew monotone chain), consecutive
/// collinear points removed. A single point or a segment come back
/// degenerately with 1 or 2 vertices.
pub fn convex_hull(points: &BTreeSet<Pt>) -> Vec<Pt> {
    let pts: Vec<Pt> = points.iter().copied().collect();
    if pts.len() <= 1 {
        return pts;
    }
    let build = |iter: &mut dyn Iterator<Item = Pt>| {
        let mut chain: Vec<Pt> = Vec::new();
        for p in iter {
            while chain.len() >= 2
                && cross(
                    chain[chain.len() - 1].sub(chain[chain.len() - 2]),
                    p.sub(chain[chain.len() - 1]),
                ) <= 0
            {
                chain.pop();
            }
            chain.push(p);
        }
        chain
    };
    // BTreeSet iteration is already sorted lexicographically.
    let lower = build(&mut pts.iter().copied());
    let upper = build(&mut pts.iter().rev().copied());
    let mut hull = lower;
    hull.pop();
    hull.extend(upper.iter().take(upper.len().saturating_sub(1)));
    hull
}

/// A finite subset of Z² with its cached counterclockwise hull.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Support {
    points: BTreeSet<Pt>,
    hull: Vec<Pt>,
}

impl Support {
    pub fn new<I: IntoIterator<Item = Pt>>(points: I) -> Result<Self, LatticeError> {
        let points: BTreeSet<Pt> = points.into_iter().collect();
        if points.is_empty() {
            return Err(LatticeError::EmptySupport);
        }
        let hull = convex_hull(&points);
        Ok(Support { points, hull })
    }

    pub fn singleton(p: Pt) -> Self {
        Support::new([p]).unwrap()
    }

    pub fn points(&self) -> impl Iterator<Item = Pt> + '_ {
        self.points.iter().copied()
    }

    pub fn point_set(&self) -> &BTreeSet<Pt> {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn contains(&self, p: Pt) -> bool {
        self.points.contains(&p)
    }

    pub fn contains_origin(&self) -> bool {
        self.contains(ORIGIN)
    }

    /// Hull vertices in counterclockwise order (1 or 2 entries when
    /// degenerate).
    pub fn hull(&self) -> &[Pt] {
        &self.hull
    }

    /// Dimension of the convex hull: 0, 1 or 2.
    pub fn dim(&self) -> usize {
        match self.hull.len() {
            1 => 0,
            2 => 1,
            _ => 2,
        }
    }

    pub fn insert(&self, p: Pt) -> Support {
        let mut points = self.points.clone();
        points.insert(p);
        Support::new(points).unwrap()
    }

    pub fn translate(&self, d: Pt) -> Support {
        Support::new(self.points.iter().map(|p| p.add(d))).unwrap()
    }

    /// Twice the area of the hull (integer shoelace).
    pub fn area2(&self) -> BigInt {
        let h = &self.hull;
        if h.len() < 3 {
            return BigInt::zero();
        }
        let mut acc: i128 = 0;
        for i in 0..h.len() {
            let a = h[i];
            let b = h[(i + 1) % h.len()];
            acc += a.x as i128 * b.y as i128 - b.x as i128 * a.y as i128;
        }
        BigInt::from(acc)
    }

    /// Exact area of the hull.
    pub fn area(&self) -> BigRational {
        BigRational::new(self.area2(), BigInt::from(2))
    }

    /// Minkowski sum {p+q} with recomputed hull.
    pub fn minkowski_sum(&self, other: &Support) -> Support {
        let mut pts = BTreeSet::new();
        for p in &self.points {
            for q in &other.points {
                pts.insert(p.add(*q));
            }
        }
        Support::new(pts).unwrap()
    }

    /// Number of lattice points of the segment hull minus one.
    pub fn integer_length(&self) -> Result<i64, LatticeError> {
        if self.dim() != 1 {
            return Err(LatticeError::NotASegment);
        }
        let d = self.hull[1].sub(self.hull[0]);
        Ok(d.x.abs().gcd(&d.y.abs()))
    }

    /// Subset of points minimizing `α·x` (the face of the support in the
    /// minimizing convention).
    pub fn face_points(&self, alpha: Pt) -> Support {
        let m = self.points.iter().map(|p| alpha.dot(*p)).min().unwrap();
        Support::new(self.points.iter().copied().filter(|p| alpha.dot(*p) == m)).unwrap()
    }

    /// Minimum of `α·x` over the support.
    pub fn min_value(&self, alpha: Pt) -> i64 {
        self.points.iter().map(|p| alpha.dot(*p)).min().unwrap()
    }
}

/// The support pair A = (A1, A2) of a planar map.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SupportPair {
    pub a1: Support,
    pub a2: Support,
}

/// A face pair Γ = (Γ1, Γ2) of a support pair, together with a primitive
/// supporting vector and the dimension of conv(Γ1+Γ2).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FacePair {
    pub g1: Support,
    pub g2: Support,
    /// Primitive supporting (minimizing) vector. For vertex face pairs this
    /// is the deterministic representative of the open normal cone.
    pub normal: Pt,
    pub dim: usize,
}

impl FacePair {
    pub fn sum(&self) -> Support {
        self.g1.minkowski_sum(&self.g2)
    }
}

impl SupportPair {
    pub fn new(a1: Support, a2: Support) -> Self {
        SupportPair { a1, a2 }
    }

    pub fn sum(&self) -> Support {
        self.a1.minkowski_sum(&self.a2)
    }

    /// V(A) = Area(A1+A2) − Area(A1) − Area(A2), exact.
    pub fn mixed_volume(&self) -> BigRational {
        self.sum().area() - self.a1.area() - self.a2.area()
    }

    pub fn is_independent(&self) -> bool {
        !self.mixed_volume().is_zero()
    }

    /// The face pair cut out by minimizing `alpha` on both members.
    pub fn face_for_normal(&self, alpha: Pt) -> FacePair {
        debug_assert!(!alpha.is_origin());
        let g1 = self.a1.face_points(alpha);
        let g2 = self.a2.face_points(alpha);
        let dim = g1.minkowski_sum(&g2).dim();
        FacePair {
            g1,
            g2,
            normal: alpha.primitive(),
            dim,
        }
    }

    /// All non-trivial face pairs: one per edge and one per vertex of
    /// hull(A1+A2). Vertex faces carry the primitive representative of
    /// smallest ∞-norm (then lexicographic) strictly inside their normal
    /// cone.
    pub fn enumerate_face_pairs(&self) -> Vec<FacePair> {
        let sum = self.sum();
        let hull = sum.hull();
        let mut out = Vec::new();
        match hull.len() {
            1 => {}
            2 => {
                // Segment: two endpoint vertex faces. The two perpendicular
                // directions support the whole pair, which is trivial by
                // convention and skipped.
                for &v in hull {
                    let alpha = vertex_representative(&sum, v);
                    out.push(self.face_for_normal(alpha));
                }
            }
            n => {
                for i in 0..n {
                    let a = hull[i];
                    let b = hull[(i + 1) % n];
                    let d = b.sub(a);
                    // Inward-minimizing normal of a CCW edge.
                    let alpha = Pt::new(d.y, -d.x).neg().primitive();
                    debug_assert_eq!(sum.face_points(alpha).hull().len(), 2);
                    out.push(self.face_for_normal(alpha));
                    let alpha_v = vertex_representative(&sum, a);
                    out.push(self.face_for_normal(alpha_v));
                }
            }
        }
        out
    }
}

/// Primitive vector of smallest ∞-norm (ties broken lexicographically)
/// whose minimum over `sum` is attained exactly at the vertex `v`.
fn vertex_representative(sum: &Support, v: Pt) -> Pt {
    for r in 1..=64i64 {
        for x in -r..=r {
            for y in -r..=r {
                if x.abs().max(y.abs()) != r {
                    continue;
                }
                let alpha = Pt::new(x, y);
                if alpha.primitive() != alpha {
                    continue;
                }
                let face = sum.face_points(alpha);
                if face.len() == 1 && face.contains(v) {
                    return alpha;
                }
            }
        }
    }
    unreachable!("no vertex representative within ∞-norm 64");
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sup(pts: &[(i64, i64)]) -> Support {
        Support::new(pts.iter().map(|&(x, y)| Pt::new(x, y))).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn hull_collinear_degenerates_to_segment() {
        let s = sup(&[(0, 0), (1, 2), (2, 4)]);
        assert_eq!(s.hull(), &[Pt::new(0, 0), Pt::new(2, 4)]);
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn hull_of_example_4_9_first_member() {
        let s = sup(&[(0, 0), (1, 1), (1, 2)]);
        assert_eq!(s.hull().len(), 3);
        assert_eq!(s.dim(), 2);
        let verts: BTreeSet<Pt> = s.hull().iter().copied().collect();
        assert_eq!(verts, s.point_set().clone());
    }

    #[test]
    fn hull_single_point() {
        let s = sup(&[(0, 0)]);
        assert_eq!(s.hull(), &[ORIGIN]);
        assert_eq!(s.dim(), 0);
    }

    #[test]
    fn empty_support_rejected() {
        assert_eq!(Support::new([]), Err(LatticeError::EmptySupport));
    }

    #[test]
    fn minkowski_point_translation() {
        let s = sup(&[(0, 0)]).minkowski_sum(&sup(&[(1, 1)]));
        assert_eq!(s.point_set().iter().copied().collect::<Vec<_>>(), vec![Pt::new(1, 1)]);
    }

    #[test]
    fn minkowski_example_4_9_hull() {
        let a = sup(&[(0, 0), (1, 1), (1, 2)]);
        let b = sup(&[(0, 0), (1, 0), (1, 1)]);
        let s = a.minkowski_sum(&b);
        // Brute-force pairwise sums, then hull.
        assert_eq!(
            s.hull(),
            &[
                Pt::new(0, 0),
                Pt::new(1, 0),
                Pt::new(2, 1),
                Pt::new(2, 3),
                Pt::new(1, 2)
            ]
        );
    }

    #[test]
    fn minkowski_segments_make_unit_square() {
        let a = sup(&[(0, 0), (1, 0)]);
        let b = sup(&[(0, 0), (0, 1)]);
        let s = a.minkowski_sum(&b);
        assert_eq!(
            s.hull(),
            &[Pt::new(0, 0), Pt::new(1, 0), Pt::new(1, 1), Pt::new(0, 1)]
        );
    }

    #[test]
    fn mixed_volume_example_4_9() {
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 1), (1, 2)]),
            sup(&[(0, 0), (1, 0), (1, 1)]),
        );
        // Shoelace oracle: areas 3 − 1/2 − 1/2.
        assert_eq!(pair.sum().area(), rat(3, 1));
        assert_eq!(pair.a1.area(), rat(1, 2));
        assert_eq!(pair.a2.area(), rat(1, 2));
        assert_eq!(pair.mixed_volume(), rat(2, 1));
        assert!(pair.is_independent());
    }

    #[test]
    fn mixed_volume_lemma_2_3_k2_supports() {
        // supp(f1−y1), supp(f2−y2) for map (1.2); components 11/2 − 1 − 3/2.
        let pair = SupportPair::new(
            sup(&[(0, 0), (2, 2), (2, 3)]),
            sup(&[(0, 0), (1, 1), (3, 3), (3, 4)]),
        );
        assert_eq!(pair.sum().area(), rat(11, 2));
        assert_eq!(pair.a1.area(), rat(1, 1));
        assert_eq!(pair.a2.area(), rat(3, 2));
        assert_eq!(pair.mixed_volume(), rat(3, 1));
    }

    #[test]
    fn mixed_volume_parallel_segments_is_zero() {
        let pair = SupportPair::new(sup(&[(0, 0), (1, 1)]), sup(&[(0, 0), (2, 2)]));
        assert!(pair.mixed_volume().is_zero());
        assert!(!pair.is_independent());
    }

    #[test]
    fn point_member_is_dependent() {
        let pair = SupportPair::new(sup(&[(3, 5)]), sup(&[(0, 0), (1, 0), (0, 1)]));
        assert!(!pair.is_independent());
    }

    #[test]
    fn integer_length_examples() {
        assert_eq!(sup(&[(0, 0), (2, 4)]).integer_length(), Ok(2));
        assert_eq!(sup(&[(0, 0), (1, 1)]).integer_length(), Ok(1));
        // Theorem 1.4 family (n=2), top edge of supp f2.
        assert_eq!(sup(&[(0, 2), (2, 4)]).integer_length(), Ok(2));
        assert_eq!(
            sup(&[(0, 0), (1, 1), (1, 2)]).integer_length(),
            Err(LatticeError::NotASegment)
        );
    }

    #[test]
    fn face_pairs_example_4_9() {
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 1), (1, 2)]),
            sup(&[(0, 0), (1, 0), (1, 1)]),
        );
        let faces = pair.enumerate_face_pairs();
        // Face supported by (2,−1): ({(0,0),(1,2)}, {(0,0)}).
        let f = faces
            .iter()
            .find(|f| f.normal == Pt::new(2, -1))
            .expect("(2,-1) face present");
        assert_eq!(f.g1, sup(&[(0, 0), (1, 2)]));
        assert_eq!(f.g2, sup(&[(0, 0)]));
        assert_eq!(f.dim, 1);
        // Face supported by (−1,0): ({(1,1),(1,2)}, {(1,0),(1,1)}).
        let f = faces
            .iter()
            .find(|f| f.normal == Pt::new(-1, 0))
            .expect("(-1,0) face present");
        assert_eq!(f.g1, sup(&[(1, 1), (1, 2)]));
        assert_eq!(f.g2, sup(&[(1, 0), (1, 1)]));
    }

    #[test]
    fn face_pairs_of_two_points_empty() {
        let pair = SupportPair::new(sup(&[(1, 1)]), sup(&[(0, 2)]));
        assert!(pair.enumerate_face_pairs().is_empty());
    }

    #[test]
    fn face_normals_minimize_exactly() {
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 1), (1, 2), (3, 0)]),
            sup(&[(0, 0), (1, 0), (1, 1), (0, 3)]),
        );
        for f in pair.enumerate_face_pairs() {
            assert_eq!(pair.a1.face_points(f.normal), f.g1);
            assert_eq!(pair.a2.face_points(f.normal), f.g2);
            let sum_face = pair.sum().face_points(f.normal);
            assert_eq!(sum_face, f.sum());
        }
    }

    #[test]
    fn vertex_faces_enumerated_once_per_vertex() {
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 0), (0, 1)]),
            sup(&[(0, 0), (1, 0), (0, 1)]),
        );
        let faces = pair.enumerate_face_pairs();
        let edges = faces.iter().filter(|f| f.sum().dim() == 1).count();
        let verts = faces.iter().filter(|f| f.sum().dim() == 0).count();
        assert_eq!(edges, 3);
        assert_eq!(verts, 3);
    }
}
