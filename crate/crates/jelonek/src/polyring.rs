//! Exact bivariate polynomial arithmetic over Gaussian rationals.
//!
//! `Poly` is a sparse exponent map (the objects of interest are sparse by
//! design); `UPoly` is a dense univariate polynomial used for elimination,
//! gcd and squarefree work. Coefficients are `Complex<BigRational>`:
//! every fixture of the analysis lives in `Q(i)` and admits exact gcd and
//! resultant arithmetic there.

use crate::lattice::{Pt, Support, SupportPair, ORIGIN};
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

pub type GaussRat = Complex<BigRational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("zero polynomial has no support")]
    ZeroPolynomial,
    #[error("polynomial is not univariate in the requested variable")]
    NotUnivariate,
    #[error("exponents must be non-negative here")]
    NegativeExponent,
}

/// The two source variables of a map.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    U,
    V,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::U => Var::V,
            Var::V => Var::U,
        }
    }
}

pub fn rat_i64(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gr(n: i64) -> GaussRat {
    Complex::new(rat_i64(n), BigRational::zero())
}

pub fn grq(re: BigRational) -> GaussRat {
    Complex::new(re, BigRational::zero())
}

pub fn gri(re: BigRational, im: BigRational) -> GaussRat {
    Complex::new(re, im)
}

/// Multiplicative inverse in Q(i).
pub fn ginv(z: &GaussRat) -> GaussRat {
    let n = z.norm_sqr();
    Complex::new(z.re.clone() / n.clone(), -z.im.clone() / n)
}

pub fn gpow(z: &GaussRat, e: u32) -> GaussRat {
    let mut acc: GaussRat = Complex::one();
    for _ in 0..e {
        acc = acc * z.clone();
    }
    acc
}

/// Exact square root of a non-negative rational, when it exists.
pub fn rat_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let nu = r.numer().magnitude().clone();
    let de = r.denom().magnitude().clone();
    let sn = nu.sqrt();
    let sd = de.sqrt();
    if &sn * &sn == nu && &sd * &sd == de {
        Some(BigRational::new(
            BigInt::from(sn),
            BigInt::from(sd),
        ))
    } else {
        None
    }
}

/// Exact square root in Q(i), when it exists.
pub fn gauss_sqrt(z: &GaussRat) -> Option<GaussRat> {
    if z.im.is_zero() {
        if let Some(s) = rat_sqrt(&z.re) {
            return Some(grq(s));
        }
        let neg = -z.re.clone();
        return rat_sqrt(&neg).map(|s| gri(BigRational::zero(), s));
    }
    // x² − y² = a, 2xy = b; x² = (a + √(a²+b²)) / 2.
    let n = z.norm_sqr();
    let r = rat_sqrt(&n)?;
    let two = rat_i64(2);
    let x2 = (z.re.clone() + r) / two.clone();
    let x = rat_sqrt(&x2)?;
    if x.is_zero() {
        return None;
    }
    let y = z.im.clone() / (two * x.clone());
    let cand = gri(x, y);
    if cand.clone() * cand.clone() == *z {
        Some(cand)
    } else {
        None
    }
}

pub fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn fmt_gauss(z: &GaussRat) -> String {
    if z.im.is_zero() {
        fmt_rat(&z.re)
    } else if z.re.is_zero() {
        format!("{}i", fmt_rat(&z.im))
    } else if z.im.is_negative() {
        format!("({}{}i)", fmt_rat(&z.re), fmt_rat(&z.im))
    } else {
        format!("({}+{}i)", fmt_rat(&z.re), fmt_rat(&z.im))
    }
}

/// Sparse bivariate polynomial, exponent → nonzero coefficient.
///
/// Exponents are allowed to be negative while a toric substitution is in
/// flight; all entry points that need honest polynomials check for that.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Pt, GaussRat>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display("u", "v"))
    }
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: GaussRat) -> Poly {
        Poly::monomial(ORIGIN, c)
    }

    pub fn one() -> Poly {
        Poly::constant(gr(1))
    }

    pub fn monomial(e: Pt, c: GaussRat) -> Poly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        Poly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (Pt, GaussRat)>>(it: I) -> Poly {
        let mut p = Poly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Pt, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(GaussRat::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Pt, &GaussRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: Pt) -> GaussRat {
        self.terms.get(&e).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.terms {
            r.add_term(*e, c.clone());
        }
        r
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, -c.clone()))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term(e1.add(*e2), c1.clone() * c2.clone());
            }
        }
        r
    }

    pub fn scale(&self, c: &GaussRat) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, k)| (*e, k.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative.
    pub fn derivative(&self, var: Var) -> Poly {
        let mut r = Poly::zero();
        for (e, c) in &self.terms {
            let (k, e2) = match var {
                Var::U => (e.x, Pt::new(e.x - 1, e.y)),
                Var::V => (e.y, Pt::new(e.x, e.y - 1)),
            };
            if k != 0 {
                r.add_term(e2, c.clone() * gr(k));
            }
        }
        r
    }

    pub fn support(&self) -> Result<Support, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial);
        }
        Ok(Support::new(self.terms.keys().copied()).unwrap())
    }

    /// Restriction to the terms whose exponents lie in `g`.
    pub fn restrict(&self, g: &Support) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| g.contains(**e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    pub fn total_deg(&self) -> i64 {
        self.terms.keys().map(|e| e.x + e.y).max().unwrap_or(0)
    }

    pub fn deg_in(&self, var: Var) -> i64 {
        self.terms
            .keys()
            .map(|e| match var {
                Var::U => e.x,
                Var::V => e.y,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn min_exp(&self) -> Pt {
        let mx = self.terms.keys().map(|e| e.x).min().unwrap_or(0);
        let my = self.terms.keys().map(|e| e.y).min().unwrap_or(0);
        Pt::new(mx, my)
    }

    pub fn shift_exponents(&self, d: Pt) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.add(d), c.clone()))
                .collect(),
        }
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.keys().any(|e| e.x < 0 || e.y < 0)
    }

    /// Exact evaluation; exponents must be non-negative.
    pub fn eval_exact(&self, u: &GaussRat, v: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for (e, c) in &self.terms {
            debug_assert!(e.x >= 0 && e.y >= 0);
            acc = acc + c.clone() * gpow(u, e.x as u32) * gpow(v, e.y as u32);
        }
        acc
    }

    /// Substitute `var + lambda * other` for `var` (a unimodular shear).
    pub fn shear(&self, var: Var, lambda: i64) -> Poly {
        if lambda == 0 {
            return self.clone();
        }
        let mut r = Poly::zero();
        for (e, c) in &self.terms {
            let (a, b) = (e.x, e.y);
            match var {
                Var::U => {
                    // u^a v^b with u -> u + λv
                    let mut binom = BigInt::one();
                    for k in 0..=a {
                        let coeff = c.clone()
                            * grq(BigRational::from(
                                binom.clone() * BigInt::from(lambda).pow(k as u32),
                            ));
                        r.add_term(Pt::new(a - k, b + k), coeff);
                        binom = binom * BigInt::from(a - k) / BigInt::from(k + 1);
                    }
                }
                Var::V => {
                    let mut binom = BigInt::one();
                    for k in 0..=b {
                        let coeff = c.clone()
                            * grq(BigRational::from(
                                binom.clone() * BigInt::from(lambda).pow(k as u32),
                            ));
                        r.add_term(Pt::new(a + k, b - k), coeff);
                        binom = binom * BigInt::from(b - k) / BigInt::from(k + 1);
                    }
                }
            }
        }
        r
    }

    /// Coefficient polynomials with respect to `var`: entry `k` is the
    /// coefficient of `var^k`, a polynomial in the other variable.
    pub fn coeffs_in(&self, var: Var) -> Vec<Poly> {
        let d = self.deg_in(var);
        let mut out = vec![Poly::zero(); (d + 1) as usize];
        for (e, c) in &self.terms {
            let (k, rest) = match var {
                Var::U => (e.x, Pt::new(0, e.y)),
                Var::V => (e.y, Pt::new(e.x, 0)),
            };
            debug_assert!(k >= 0);
            out[k as usize].add_term(rest, c.clone());
        }
        out
    }

    /// The polynomial as univariate in `var`, if the other variable is
    /// absent.
    pub fn as_univariate(&self, var: Var) -> Result<UPoly, PolyError> {
        let mut coeffs = vec![GaussRat::zero(); (self.deg_in(var) + 1) as usize];
        for (e, c) in &self.terms {
            let (k, other) = match var {
                Var::U => (e.x, e.y),
                Var::V => (e.y, e.x),
            };
            if other != 0 {
                return Err(PolyError::NotUnivariate);
            }
            if k < 0 {
                return Err(PolyError::NegativeExponent);
            }
            coeffs[k as usize] = c.clone();
        }
        Ok(UPoly::new(coeffs))
    }

    /// Build from a univariate polynomial placed on `var`.
    pub fn from_univariate(p: &UPoly, var: Var) -> Poly {
        Poly::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let e = match var {
                Var::U => Pt::new(k as i64, 0),
                Var::V => Pt::new(0, k as i64),
            };
            (e, c.clone())
        }))
    }

    /// Divide by the coefficient of the lexicographically smallest exponent,
    /// producing a scalar-normalized representative.
    pub fn normalized(&self) -> Poly {
        match self.terms.iter().next() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&ginv(c)),
        }
    }

    /// Equality up to a nonzero scalar factor.
    pub fn proportional_to(&self, o: &Poly) -> bool {
        self.normalized() == o.normalized()
    }

    pub fn display(&self, x: &str, y: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mono = |e: &Pt| -> String {
            let mut s = String::new();
            if e.x != 0 {
                s.push_str(x);
                if e.x != 1 {
                    s.push_str(&format!("^{}", e.x));
                }
            }
            if e.y != 0 {
                if !s.is_empty() {
                    s.push('*');
                }
                s.push_str(y);
                if e.y != 1 {
                    s.push_str(&format!("^{}", e.y));
                }
            }
            s
        };
        let mut out = String::new();
        for (e, c) in &self.terms {
            let m = mono(e);
            let (sign, mag) = if c.im.is_zero() && c.re.is_negative() {
                ("-", fmt_gauss(&-c.clone()))
            } else if c.im.is_zero() || !c.re.is_zero() {
                ("+", fmt_gauss(c))
            } else if c.im.is_negative() {
                ("-", fmt_gauss(&-c.clone()))
            } else {
                ("+", fmt_gauss(c))
            };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(if sign == "-" { " - " } else { " + " });
            }
            let coeff_is_one = mag == "1";
            if m.is_empty() {
                out.push_str(&mag);
            } else if coeff_is_one {
                out.push_str(&m);
            } else {
                out.push_str(&mag);
                out.push('*');
                out.push_str(&m);
            }
        }
        out
    }
}

/// Pair of polynomials forming a map C² → C².
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMap {
    pub f1: Poly,
    pub f2: Poly,
}

/// Jacobian determinant of a map with its support Σ.
#[derive(Clone, Debug)]
pub struct JacobianData {
    pub det: Poly,
    pub sigma: Option<Support>,
}

impl PolyMap {
    pub fn new(f1: Poly, f2: Poly) -> Self {
        PolyMap { f1, f2 }
    }

    /// Supports of the two components; with `augment`, the origin is
    /// adjoined to each member (the support of f − y for generic y).
    pub fn support_pair(&self, augment: bool) -> Result<SupportPair, PolyError> {
        let mut a1 = self.f1.support()?;
        let mut a2 = self.f2.support()?;
        if augment {
            a1 = a1.insert(ORIGIN);
            a2 = a2.insert(ORIGIN);
        }
        Ok(SupportPair::new(a1, a2))
    }

    /// ∂f1/∂u·∂f2/∂v − ∂f1/∂v·∂f2/∂u, exactly.
    pub fn jacobian(&self) -> JacobianData {
        let det = self
            .f1
            .derivative(Var::U)
            .mul(&self.f2.derivative(Var::V))
            .sub(&self.f1.derivative(Var::V).mul(&self.f2.derivative(Var::U)));
        let sigma = det.support().ok();
        JacobianData { det, sigma }
    }

    pub fn translate(&self, c: &(GaussRat, GaussRat)) -> PolyMap {
        PolyMap {
            f1: self.f1.add(&Poly::constant(c.0.clone())),
            f2: self.f2.add(&Poly::constant(c.1.clone())),
        }
    }

    /// (deg f1, deg f2, deg f).
    pub fn degrees(&self) -> (i64, i64, i64) {
        let d1 = self.f1.total_deg();
        let d2 = self.f2.total_deg();
        (d1, d2, d1.max(d2))
    }

    pub fn value_at_origin(&self) -> (GaussRat, GaussRat) {
        (self.f1.coeff(ORIGIN), self.f2.coeff(ORIGIN))
    }
}

/// Dense univariate polynomial over Q(i), coefficients ascending.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct UPoly {
    coeffs: Vec<GaussRat>,
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("{}*s^{}", fmt_gauss(c), k))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl UPoly {
    pub fn new(mut coeffs: Vec<GaussRat>) -> UPoly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> UPoly {
        UPoly::default()
    }

    pub fn constant(c: GaussRat) -> UPoly {
        UPoly::new(vec![c])
    }

    pub fn one() -> UPoly {
        UPoly::constant(gr(1))
    }

    /// x - r
    pub fn linear_root(r: &GaussRat) -> UPoly {
        UPoly::new(vec![-r.clone(), gr(1)])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn coeffs(&self) -> &[GaussRat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussRat {
        self.coeffs.get(k).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn lc(&self) -> GaussRat {
        self.coeffs.last().cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = vec![GaussRat::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c.clone();
        }
        for (i, c) in o.coeffs.iter().enumerate() {
            out[i] = out[i].clone() + c.clone();
        }
        UPoly::new(out)
    }

    pub fn neg(&self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![GaussRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        UPoly::new(out)
    }

    pub fn scale(&self, c: &GaussRat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|k| k.clone() * c.clone()).collect())
    }

    pub fn shift_up(&self, k: usize) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut coeffs = vec![GaussRat::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly::new(coeffs)
    }

    pub fn derivative(&self) -> UPoly {
        if self.coeffs.len() <= 1 {
            return UPoly::zero();
        }
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * gr(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &GaussRat) -> GaussRat {
        let mut acc = GaussRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        self.scale(&ginv(&self.lc()))
    }

    pub fn div_rem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.deg() < d.deg() {
            return (UPoly::zero(), self.clone());
        }
        let mut rem = self.coeffs.clone();
        let dd = d.deg() as usize;
        let lead_inv = ginv(&d.lc());
        let mut quot = vec![GaussRat::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let q = rem[k].clone() * lead_inv.clone();
            if q.is_zero() {
                continue;
            }
            quot[k - dd] = q.clone();
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[k - dd + j] = rem[k - dd + j].clone() - q.clone() * dc.clone();
            }
        }
        (UPoly::new(quot), UPoly::new(rem[..dd].to_vec()))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.div_rem(d).1
    }

    /// Exact quotient; panics if the division is inexact.
    pub fn div_exact(&self, d: &UPoly) -> UPoly {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b).monic();
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun squarefree decomposition: returns monic factors with their
    /// multiplicities; the product of factor^mult recovers `self` up to the
    /// leading coefficient.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, usize)> {
        let f = self.monic();
        if f.deg() <= 0 {
            return Vec::new();
        }
        let fp = f.derivative();
        let g = f.gcd(&fp);
        if g.deg() == 0 {
            return vec![(f, 1)];
        }
        let mut out = Vec::new();
        let mut c = f.div_exact(&g);
        let mut d = fp.div_exact(&g).sub(&c.derivative());
        let mut i = 1usize;
        while c.deg() > 0 {
            let a = c.gcd(&d);
            if a.deg() > 0 {
                out.push((a.clone(), i));
            }
            c = c.div_exact(&a);
            d = d.div_exact(&a).sub(&c.derivative());
            i += 1;
        }
        out
    }

    /// Squarefree part (product of distinct factors).
    pub fn squarefree_part(&self) -> UPoly {
        self.squarefree_decomposition()
            .into_iter()
            .fold(UPoly::one(), |acc, (f, _)| acc.mul(&f))
    }
}

/// Textbook resultant via the Euclidean remainder identity.
fn res_std(p: &UPoly, q: &UPoly) -> GaussRat {
    if p.is_zero() || q.is_zero() {
        return GaussRat::zero();
    }
    if q.deg() == 0 {
        return gpow(&q.lc(), p.deg() as u32);
    }
    if p.deg() == 0 {
        return gpow(&p.lc(), q.deg() as u32);
    }
    let r = p.rem(q);
    if r.is_zero() {
        return GaussRat::zero();
    }
    let sign = if (p.deg() * q.deg()) % 2 == 1 {
        gr(-1)
    } else {
        gr(1)
    };
    sign * gpow(&q.lc(), (p.deg() - r.deg()) as u32) * res_std(q, &r)
}

/// Resultant of two univariate polynomials.
///
/// Sign convention: `res(p, q) = (−1)^{deg p · deg q} · det Syl(p, q)`, so
/// that `Res_v(uv − 1, v − 2) = 2u − 1` after specialization.
pub fn resultant_univ(p: &UPoly, q: &UPoly) -> GaussRat {
    let base = res_std(p, q);
    if !p.is_zero() && !q.is_zero() && (p.deg() * q.deg()) % 2 == 1 {
        -base
    } else {
        base
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Pt;

    fn p(terms: &[(i64, i64, i64)]) -> Poly {
        Poly::from_terms(terms.iter().map(|&(x, y, c)| (Pt::new(x, y), gr(c))))
    }

    /// The map (1.4): (uv, v² − uv³ + 2v − uv² + uv).
    fn map14() -> PolyMap {
        PolyMap::new(
            p(&[(1, 1, 1)]),
            p(&[(0, 2, 1), (1, 3, -1), (0, 1, 2), (1, 2, -1), (1, 1, 1)]),
        )
    }

    #[test]
    fn support_pair_map14_augmented() {
        let sp = map14().support_pair(true).unwrap();
        let a1: Vec<Pt> = sp.a1.points().collect();
        assert_eq!(a1, vec![Pt::new(0, 0), Pt::new(1, 1)]);
        let a2: Vec<Pt> = sp.a2.points().collect();
        assert_eq!(
            a2,
            vec![
                Pt::new(0, 0),
                Pt::new(0, 1),
                Pt::new(0, 2),
                Pt::new(1, 1),
                Pt::new(1, 2),
                Pt::new(1, 3)
            ]
        );
    }

    #[test]
    fn support_pair_example_4_9() {
        let f = PolyMap::new(
            p(&[(0, 0, 3), (1, 1, 5), (1, 2, 7)]),
            p(&[(0, 0, 2), (1, 0, -1), (1, 1, 4)]),
        );
        let sp = f.support_pair(false).unwrap();
        assert_eq!(
            sp.a1.points().collect::<Vec<_>>(),
            vec![Pt::new(0, 0), Pt::new(1, 1), Pt::new(1, 2)]
        );
        assert_eq!(
            sp.a2.points().collect::<Vec<_>>(),
            vec![Pt::new(0, 0), Pt::new(1, 0), Pt::new(1, 1)]
        );
    }

    #[test]
    fn support_pair_constants() {
        let f = PolyMap::new(p(&[(0, 0, 1)]), p(&[(0, 0, 1)]));
        let sp = f.support_pair(false).unwrap();
        assert_eq!(sp.a1.points().collect::<Vec<_>>(), vec![Pt::new(0, 0)]);
        assert_eq!(sp.a2.points().collect::<Vec<_>>(), vec![Pt::new(0, 0)]);
        assert!(PolyMap::new(Poly::zero(), Poly::one())
            .support_pair(false)
            .is_err());
    }

    #[test]
    fn restrict_example_3_4() {
        // f1 of Example 3.4 restricted to {(0,0),(1,2),(2,4)}.
        let f1 = p(&[(0, 0, 1), (1, 2, 2), (2, 4, 3), (1, 3, 4), (2, 5, 5)]);
        let g = Support::new([Pt::new(0, 0), Pt::new(1, 2), Pt::new(2, 4)]).unwrap();
        assert_eq!(f1.restrict(&g), p(&[(0, 0, 1), (1, 2, 2), (2, 4, 3)]));
    }

    #[test]
    fn restrict_identity_and_missing_terms() {
        let q = p(&[(1, 1, 3), (2, 0, -2)]);
        assert_eq!(q.restrict(&q.support().unwrap()), q);
        let origin_only = Support::new([Pt::new(0, 0)]).unwrap();
        assert!(q.restrict(&origin_only).is_zero());
    }

    #[test]
    fn jacobian_identity_map() {
        let f = PolyMap::new(p(&[(1, 0, 1)]), p(&[(0, 1, 1)]));
        let j = f.jacobian();
        assert_eq!(j.det, Poly::one());
        assert_eq!(
            j.sigma.unwrap().points().collect::<Vec<_>>(),
            vec![Pt::new(0, 0)]
        );
    }

    #[test]
    fn jacobian_uv_v() {
        let f = PolyMap::new(p(&[(1, 1, 1)]), p(&[(0, 1, 1)]));
        let j = f.jacobian();
        assert_eq!(j.det, p(&[(0, 1, 1)]));
    }

    #[test]
    fn jacobian_map14_frozen() {
        // Hand-computed: |Jac| = 2v + 2v² − uv² − 2uv³.
        let j = map14().jacobian();
        assert_eq!(
            j.det,
            p(&[(0, 1, 2), (0, 2, 2), (1, 2, -1), (1, 3, -2)])
        );
    }

    #[test]
    fn eval_examples() {
        let uv = p(&[(1, 1, 1)]);
        assert_eq!(uv.eval_exact(&gr(2), &gr(3)), gr(6));
        // f2 of map (1.4) at (0,1) → 3.
        assert_eq!(map14().f2.eval_exact(&gr(0), &gr(1)), gr(3));
        assert_eq!(Poly::zero().eval_exact(&gr(17), &gr(-4)), gr(0));
    }

    #[test]
    fn shear_is_ring_morphism() {
        let q = p(&[(2, 1, 3), (0, 2, -1), (1, 0, 2)]);
        let r = p(&[(1, 1, 1), (0, 0, 5)]);
        let s = q.mul(&r).shear(Var::U, 3);
        assert_eq!(s, q.shear(Var::U, 3).mul(&r.shear(Var::U, 3)));
        // Substitution check at a point: p(u+3v, v) at (1,2) = p(7,2).
        assert_eq!(
            q.shear(Var::U, 3).eval_exact(&gr(1), &gr(2)),
            q.eval_exact(&gr(7), &gr(2))
        );
    }

    #[test]
    fn upoly_div_gcd_squarefree() {
        // (t−1)²(t−2)
        let f = UPoly::linear_root(&gr(1))
            .mul(&UPoly::linear_root(&gr(1)))
            .mul(&UPoly::linear_root(&gr(2)));
        let sq = f.squarefree_decomposition();
        assert_eq!(sq.len(), 2);
        assert_eq!(sq[0], (UPoly::linear_root(&gr(2)), 1));
        assert_eq!(sq[1], (UPoly::linear_root(&gr(1)), 2));
        let g = f.gcd(&f.derivative());
        assert_eq!(g, UPoly::linear_root(&gr(1)));
    }

    #[test]
    fn resultant_univ_convention() {
        // Res_v(uv − 1, v − 2) viewed after specializing u: at u = a the
        // resultant must equal 2a − 1.
        for a in [-3i64, 0, 1, 5] {
            let pu = UPoly::new(vec![gr(-1), gr(a)]);
            let qu = UPoly::new(vec![gr(-2), gr(1)]);
            assert_eq!(resultant_univ(&pu, &qu), gr(2 * a - 1));
        }
    }

    #[test]
    fn gauss_sqrt_works() {
        assert_eq!(gauss_sqrt(&gr(4)), Some(gr(2)));
        assert_eq!(gauss_sqrt(&gr(-4)), Some(gri(rat_i64(0), rat_i64(2))));
        // sqrt(2i) = 1 + i
        let z = gri(rat_i64(0), rat_i64(2));
        assert_eq!(gauss_sqrt(&z), Some(gri(rat_i64(1), rat_i64(1))));
        assert_eq!(gauss_sqrt(&gr(2)), None);
    }

    #[test]
    fn translation_support_matches_augmented() {
        let f = map14();
        let translated = f.translate(&(gr(3), gr(7)));
        assert_eq!(
            translated.support_pair(false).unwrap(),
            f.support_pair(true).unwrap()
        );
    }
}
