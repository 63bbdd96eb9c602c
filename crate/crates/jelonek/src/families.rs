//! Constructors for the extremal and universality families, and the three
//! fixed example maps.

use crate::lattice::Pt;
use crate::polyring::{gr, grq, GaussRat, Poly, PolyMap, UPoly};
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("root lists must have length n and consist of nonzero values")]
    BadRoots,
    #[error("P and Q must have disjoint root lists (gcd(P,Q) = 1)")]
    SharedRoot,
    #[error("P must have degree k with P(0) ≠ 0")]
    BadCoefficients,
    #[error("unknown fixture id (expected 1.2, 1.3 or 1.4)")]
    UnknownFixture,
}

/// Monic polynomial with the given roots.
fn monic_from_roots(roots: &[BigRational]) -> UPoly {
    roots.iter().fold(UPoly::one(), |acc, r| {
        acc.mul(&UPoly::linear_root(&grq(r.clone())))
    })
}

/// P(uv): place s^k on the diagonal exponent (k, k).
fn at_uv(p: &UPoly) -> Poly {
    Poly::from_terms(
        p.coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| (Pt::new(k as i64, k as i64), c.clone())),
    )
}

/// The degree-(2n+2) family with 2n missing points:
/// (u,v) ↦ (uv, v²·P(uv) + v·Q(uv) + uv) with P, Q monic of degree n,
/// disjoint nonzero root lists.
pub fn make_thm14(
    n: usize,
    p_roots: &[BigRational],
    q_roots: &[BigRational],
) -> Result<PolyMap, FamilyError> {
    if p_roots.len() != n || q_roots.len() != n || n == 0 {
        return Err(FamilyError::BadRoots);
    }
    if p_roots.iter().chain(q_roots).any(|r| r.is_zero()) {
        return Err(FamilyError::BadRoots);
    }
    for p in p_roots {
        if q_roots.contains(p) {
            return Err(FamilyError::SharedRoot);
        }
    }
    let p = at_uv(&monic_from_roots(p_roots)).shift_exponents(Pt::new(0, 2));
    let q = at_uv(&monic_from_roots(q_roots)).shift_exponents(Pt::new(0, 1));
    let uv = Poly::monomial(Pt::new(1, 1), gr(1));
    Ok(PolyMap::new(uv.clone(), p.add(&q).add(&uv)))
}

/// The universality family with μ_f = k+1 and (0,1) among the missing
/// points: (u,v) ↦ (P(uv) + u^k v^{k+1}, 1 + uv·P(uv) + 2u^{k+1}v^{k+2}),
/// deg P = k, P(0) ≠ 0.
pub fn make_lemma23(k: usize, p_coeffs: &[GaussRat]) -> Result<PolyMap, FamilyError> {
    if k == 0 || p_coeffs.len() != k + 1 {
        return Err(FamilyError::BadCoefficients);
    }
    if p_coeffs[0].is_zero() || p_coeffs[k].is_zero() {
        return Err(FamilyError::BadCoefficients);
    }
    let p = UPoly::new(p_coeffs.to_vec());
    let f1 = at_uv(&p).add(&Poly::monomial(Pt::new(k as i64, k as i64 + 1), gr(1)));
    let f2 = Poly::one()
        .add(&at_uv(&p).shift_exponents(Pt::new(1, 1)))
        .add(&Poly::monomial(Pt::new(k as i64 + 1, k as i64 + 2), gr(2)));
    Ok(PolyMap::new(f1, f2))
}

/// Exact transcriptions of the three example maps.
pub fn fixture(id: &str) -> Result<PolyMap, FamilyError> {
    let poly = |terms: &[(i64, i64, i64)]| {
        Poly::from_terms(terms.iter().map(|&(x, y, c)| (Pt::new(x, y), gr(c))))
    };
    match id {
        // (1 − u²v² + u²v³, 1 + uv − u³v³ + 2u³v⁴)
        "1.2" => Ok(PolyMap::new(
            poly(&[(0, 0, 1), (2, 2, -1), (2, 3, 1)]),
            poly(&[(0, 0, 1), (1, 1, 1), (3, 3, -1), (3, 4, 2)]),
        )),
        // ((1 − uv)², 1 + v + uv(1 − uv)²)
        "1.3" => Ok(PolyMap::new(
            poly(&[(0, 0, 1), (1, 1, -2), (2, 2, 1)]),
            poly(&[(0, 0, 1), (0, 1, 1), (1, 1, 1), (2, 2, -2), (3, 3, 1)]),
        )),
        // (uv, v² − uv³ + 2v − uv² + uv)
        "1.4" => Ok(PolyMap::new(
            poly(&[(1, 1, 1)]),
            poly(&[(0, 2, 1), (1, 3, -1), (0, 1, 2), (1, 2, -1), (1, 1, 1)]),
        )),
        _ => Err(FamilyError::UnknownFixture),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::rat_i64;

    #[test]
    fn lemma23_k2_is_fixture_12() {
        // P = 1 − s².
        let p = [gr(1), gr(0), gr(-1)];
        let f = make_lemma23(2, &p).unwrap();
        assert_eq!(f, fixture("1.2").unwrap());
    }

    #[test]
    fn thm14_n1_matches_map14_up_to_sign() {
        // P = s − 1, Q = s − 2: the same supports as map (1.4), coefficient
        // signs flipped on the P, Q parts; missing set is unchanged.
        let f = make_thm14(1, &[rat_i64(1)], &[rat_i64(2)]).unwrap();
        let m14 = fixture("1.4").unwrap();
        assert_eq!(f.f1, m14.f1);
        assert_eq!(
            f.support_pair(true).unwrap(),
            m14.support_pair(true).unwrap()
        );
        // Same supports; the P/Q coefficient signs differ (the fixture uses
        // 1 − s and 2 − s where the monic family uses s − 1 and s − 2).
        assert_eq!(
            f.f2.coeff(Pt::new(1, 3)),
            m14.f2.coeff(Pt::new(1, 3)).clone() * gr(-1)
        );
    }

    #[test]
    fn thm14_degree_is_2n_plus_2() {
        for n in 1..=3usize {
            let p: Vec<BigRational> = (1..=n).map(|i| rat_i64(i as i64)).collect();
            let q: Vec<BigRational> = (1..=n).map(|i| rat_i64(-(i as i64))).collect();
            let f = make_thm14(n, &p, &q).unwrap();
            assert_eq!(f.degrees().2, 2 * n as i64 + 2);
        }
    }

    #[test]
    fn invalid_inputs_rejected() {
        assert_eq!(
            make_thm14(2, &[rat_i64(0), rat_i64(1)], &[rat_i64(2), rat_i64(3)]),
            Err(FamilyError::BadRoots)
        );
        assert_eq!(
            make_thm14(1, &[rat_i64(1)], &[rat_i64(1)]),
            Err(FamilyError::SharedRoot)
        );
        assert_eq!(
            make_lemma23(2, &[gr(0), gr(1), gr(1)]),
            Err(FamilyError::BadCoefficients)
        );
        assert!(fixture("7.7").is_err());
    }
}
