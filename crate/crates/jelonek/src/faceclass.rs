//! Classification of face pairs: semi-origin / origin / half-origin,
//! coordinate, relevant, long/short and left/right.
//!
//! Relevance is what singles out the faces able to witness non-properness.
//! For one-dimensional faces the classification reads off the single
//! supporting normal. A vertex face can only be relevant when both members
//! are the origin itself; that corner is relevant exactly when a coordinate
//! direction supports it alone, i.e. when one of the coordinate axes is
//! mapped to f(0,0) by every map with this support.

use crate::lattice::{FacePair, Pt, SupportPair, ORIGIN};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FaceClassError {
    #[error("support pair is dependent")]
    DependentPair,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
    None,
}

/// Classification flags of a face pair.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct FaceClass {
    pub semi_origin: bool,
    pub origin: bool,
    pub half_origin: bool,
    pub coordinate: bool,
    pub relevant: bool,
    /// dim Γ1 = dim Γ2 = 1.
    pub long: bool,
    pub side: Side,
}

fn is_coordinate_pattern(alpha: Pt) -> bool {
    (alpha.x > 0 && alpha.y == 0) || (alpha.x == 0 && alpha.y > 0)
}

/// Classify a non-trivial face of the pair.
pub fn classify_face(pair: &SupportPair, face: &FacePair) -> FaceClass {
    let in1 = face.g1.contains_origin();
    let in2 = face.g2.contains_origin();
    let semi_origin = in1 || in2;
    let origin = in1 && in2;
    let half_origin = semi_origin && !origin;

    // A face of dimension one has a unique supporting ray; a vertex face has
    // a two-dimensional cone of supporting vectors, which always contains
    // directions with two nonzero coordinates.
    let coordinate = face.dim == 1 && is_coordinate_pattern(face.normal);

    let member_ok = |g: &crate::lattice::Support| g.dim() >= 1 || g.contains(ORIGIN);
    let mut relevant = semi_origin && !coordinate && member_ok(&face.g1) && member_ok(&face.g2);
    if relevant && face.dim == 0 {
        // The origin corner is relevant only when an axis collapses: some
        // coordinate direction must support exactly this face.
        let sum = pair.sum();
        relevant = [Pt::new(1, 0), Pt::new(0, 1)].iter().any(|&axis| {
            let f = sum.face_points(axis);
            f.len() == 1 && f.contains(face.g1.hull()[0].add(face.g2.hull()[0]))
        });
    }

    let long = face.g1.dim() == 1 && face.g2.dim() == 1;
    let side = if relevant && face.dim == 1 {
        if face.normal.x > 0 {
            Side::Left
        } else if face.normal.x < 0 {
            Side::Right
        } else {
            Side::None
        }
    } else {
        Side::None
    };

    FaceClass {
        semi_origin,
        origin,
        half_origin,
        coordinate,
        relevant,
        long,
        side,
    }
}

/// All relevant faces of an independent pair with their classifications,
/// plus the counts of long left and long right relevant faces.
#[derive(Clone, Debug)]
pub struct RelevantFaces {
    pub faces: Vec<(FacePair, FaceClass)>,
    pub long_left: usize,
    pub long_right: usize,
}

pub fn relevant_faces(pair: &SupportPair) -> Result<RelevantFaces, FaceClassError> {
    if !pair.is_independent() {
        return Err(FaceClassError::DependentPair);
    }
    let mut faces = Vec::new();
    let mut long_left = 0;
    let mut long_right = 0;
    for face in pair.enumerate_face_pairs() {
        let class = classify_face(pair, &face);
        if class.relevant {
            if class.long {
                match class.side {
                    Side::Left => long_left += 1,
                    Side::Right => long_right += 1,
                    Side::None => {}
                }
            }
            faces.push((face, class));
        }
    }
    Ok(RelevantFaces {
        faces,
        long_left,
        long_right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Support;

    fn sup(pts: &[(i64, i64)]) -> Support {
        Support::new(pts.iter().map(|&(x, y)| Pt::new(x, y))).unwrap()
    }

    fn ex49() -> SupportPair {
        SupportPair::new(
            sup(&[(0, 0), (1, 1), (1, 2)]),
            sup(&[(0, 0), (1, 0), (1, 1)]),
        )
    }

    #[test]
    fn example_4_9_relevant_face() {
        let pair = ex49();
        let face = pair.face_for_normal(Pt::new(2, -1));
        assert_eq!(face.g1, sup(&[(0, 0), (1, 2)]));
        assert_eq!(face.g2, sup(&[(0, 0)]));
        let class = classify_face(&pair, &face);
        assert!(class.origin);
        assert!(class.relevant);
        assert!(!class.long);
        assert_eq!(class.side, Side::Left);
    }

    #[test]
    fn example_4_9_irrelevant_face() {
        let pair = ex49();
        let face = pair.face_for_normal(Pt::new(-1, 0));
        let class = classify_face(&pair, &face);
        assert!(!class.semi_origin);
        assert!(!class.relevant);
    }

    #[test]
    fn map14_origin_long_face_is_right() {
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 1)]),
            sup(&[(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (1, 3)]),
        );
        let face = pair.face_for_normal(Pt::new(-1, 1));
        let class = classify_face(&pair, &face);
        assert!(class.origin);
        assert!(class.relevant);
        assert!(class.long);
        assert_eq!(class.side, Side::Right);
    }

    #[test]
    fn map14_exactly_two_long_relevant_faces() {
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 1)]),
            sup(&[(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (1, 3)]),
        );
        let rel = relevant_faces(&pair).unwrap();
        let long: Vec<_> = rel.faces.iter().filter(|(_, c)| c.long).collect();
        assert_eq!(long.len(), 2);
        assert_eq!(rel.long_left + rel.long_right, 2);
        let origin_face = long.iter().find(|(f, _)| f.normal == Pt::new(-1, 1)).unwrap();
        assert!(origin_face.1.origin);
        let half = long.iter().find(|(f, _)| f.normal == Pt::new(1, -1)).unwrap();
        assert!(half.1.half_origin);
        assert_eq!(half.0.g2, sup(&[(0, 2), (1, 3)]));
    }

    #[test]
    fn example_4_9_has_relevant_faces() {
        let rel = relevant_faces(&ex49()).unwrap();
        assert!(rel
            .faces
            .iter()
            .any(|(f, _)| f.normal == Pt::new(2, -1)));
    }

    #[test]
    fn standard_simplices_have_no_relevant_faces() {
        let simplex = sup(&[(0, 0), (1, 0), (0, 1)]);
        let pair = SupportPair::new(simplex.clone(), simplex);
        let rel = relevant_faces(&pair).unwrap();
        assert!(rel.faces.is_empty(), "got {:?}", rel.faces);
    }

    #[test]
    fn figure_1_reproduces_example_4_2_classification() {
        // Fig. 1 pair. The paper's lists: 3 origin faces, half-origin
        // including (b,■), (▲,■), (▲,c), (γ,δ), (★,∘), 1 coordinate face
        // (★,d), 4 relevant faces (a,■), (b,■), (★,■), (γ,δ). Exhaustive
        // enumeration finds one more half-origin vertex face,
        // ({(1,3)},{(0,0)}), of the same non-relevant kind as (▲,c).
        let pair = SupportPair::new(
            sup(&[(0, 0), (1, 2), (2, 4), (1, 3), (2, 5)]),
            sup(&[(0, 0), (1, 0), (1, 1), (2, 2)]),
        );
        let faces = pair.enumerate_face_pairs();
        let classes: Vec<(FacePair, FaceClass)> = faces
            .iter()
            .map(|f| (f.clone(), classify_face(&pair, f)))
            .collect();
        let count = |pred: &dyn Fn(&FaceClass) -> bool| classes.iter().filter(|(_, c)| pred(c)).count();
        assert_eq!(count(&|c| c.origin), 3);
        assert_eq!(count(&|c| c.half_origin), 6);
        assert_eq!(count(&|c| c.coordinate), 1);
        assert_eq!(count(&|c| c.relevant), 4);

        // The five half-origin faces listed in the paper are all present.
        let half: Vec<&FacePair> = classes
            .iter()
            .filter(|(_, c)| c.half_origin)
            .map(|(f, _)| f)
            .collect();
        let expect = [
            (sup(&[(1, 3), (2, 5)]), sup(&[(0, 0)])),             // (b,■)
            (sup(&[(2, 5)]), sup(&[(0, 0)])),                     // (▲,■)
            (sup(&[(2, 5)]), sup(&[(0, 0), (1, 1), (2, 2)])),     // (▲,c)
            (sup(&[(0, 0), (1, 2), (2, 4)]), sup(&[(1, 0), (2, 2)])), // (γ,δ)
            (sup(&[(0, 0)]), sup(&[(1, 0)])),                     // (★,∘)
        ];
        for (g1, g2) in &expect {
            assert!(
                half.iter().any(|f| &f.g1 == g1 && &f.g2 == g2),
                "missing half-origin face ({:?},{:?})",
                g1,
                g2
            );
        }

        // Relevant: (a,■), (b,■), (★,■), (γ,δ), matched by members.
        let rel: Vec<&FacePair> = classes
            .iter()
            .filter(|(_, c)| c.relevant)
            .map(|(f, _)| f)
            .collect();
        let expect_rel = [
            (sup(&[(0, 0), (1, 3)]), sup(&[(0, 0)])),             // (a,■)
            (sup(&[(1, 3), (2, 5)]), sup(&[(0, 0)])),             // (b,■)
            (sup(&[(0, 0)]), sup(&[(0, 0)])),                     // (★,■)
            (sup(&[(0, 0), (1, 2), (2, 4)]), sup(&[(1, 0), (2, 2)])), // (γ,δ)
        ];
        for (g1, g2) in &expect_rel {
            assert!(
                rel.iter().any(|f| &f.g1 == g1 && &f.g2 == g2),
                "missing relevant face ({:?},{:?})",
                g1,
                g2
            );
        }
        // (a,■)/(b,■) are left and short, (γ,δ) is right and long.
        let gamma_delta = classes
            .iter()
            .find(|(f, _)| f.g2 == sup(&[(1, 0), (2, 2)]))
            .unwrap();
        assert_eq!(gamma_delta.1.side, Side::Right);
        assert!(gamma_delta.1.long);
        let a_face = classes
            .iter()
            .find(|(f, _)| f.g1 == sup(&[(0, 0), (1, 3)]))
            .unwrap();
        assert_eq!(a_face.1.side, Side::Left);
        assert!(!a_face.1.long);
    }

    #[test]
    fn dependent_pair_rejected() {
        let pair = SupportPair::new(sup(&[(0, 0), (1, 1)]), sup(&[(0, 0), (2, 2)]));
        assert!(matches!(
            relevant_faces(&pair),
            Err(FaceClassError::DependentPair)
        ));
    }
}
