//! Hybrid exact/numeric solving.
//!
//! Multiplicities, resultants, gcds and fiber-emptiness verdicts are exact
//! over Q(i); the numeric tier (Aberth–Ehrlich simultaneous iteration at
//! 128-bit precision, escalating to 512) only locates roots of squarefree
//! factors. Systems are solved by resultant elimination after a unimodular
//! shear that makes both leading coefficients constant, so the eliminant
//! degree counts affine solutions with multiplicity.

use crate::config::NumericConfig;
use crate::lattice::{FacePair, Pt};
use crate::polyring::{
    ginv, gpow, gr, resultant_univ, GaussRat, Poly, PolyMap, UPoly, Var,
};
use crate::toric::build_transform;
use num_bigint::BigInt;
use num_integer::Integer as _;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::ops::CompleteRound;
use rug::{Complex as RComplex, Float, Rational as RugRat};
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum SolverError {
    #[error("root finding did not converge at {0} bits")]
    NonConvergence(u32),
    #[error("zero polynomial input")]
    ZeroPolynomial,
    #[error("both inputs are constant in the eliminated variable")]
    BothConstant,
    #[error("solution set is positive-dimensional")]
    PositiveDimensional,
    #[error("degenerate face: the sliced system vanishes identically at t = 0")]
    DegenerateFace,
    #[error("numeric tier inconsistency: {0}")]
    Inconsistent(String),
}

// ---------------------------------------------------------------------------
// Exact <-> numeric conversions
// ---------------------------------------------------------------------------

fn bigint_to_rug(x: &BigInt) -> rug::Integer {
    rug::Integer::from_str_radix(&x.to_str_radix(16), 16).unwrap()
}

fn rug_to_bigint(x: &rug::Integer) -> BigInt {
    BigInt::parse_bytes(x.to_string_radix(16).as_bytes(), 16).unwrap()
}

pub fn rugrat_to_bigrational(r: &RugRat) -> BigRational {
    BigRational::new(rug_to_bigint(r.numer()), rug_to_bigint(r.denom()))
}

pub fn rat_to_float(r: &BigRational, prec: u32) -> Float {
    let q = RugRat::from((bigint_to_rug(r.numer()), bigint_to_rug(r.denom())));
    Float::with_val(prec, q)
}

pub fn gauss_to_complex(z: &GaussRat, prec: u32) -> RComplex {
    RComplex::with_val(prec, (rat_to_float(&z.re, prec), rat_to_float(&z.im, prec)))
}

pub fn cabs(z: &RComplex) -> Float {
    let re = z.real();
    let im = z.imag();
    (re.clone().square() + im.clone().square()).sqrt()
}

pub fn complex_to_f64(z: &RComplex) -> (f64, f64) {
    (z.real().to_f64(), z.imag().to_f64())
}

/// Continued-fraction reconstruction of a rational from a float; the result
/// is a candidate only and must be verified exactly by the caller.
pub fn reconstruct_rational(x: &Float, max_den: u64) -> Option<BigRational> {
    let r = x.to_rational()?;
    let mut num = rug_to_bigint(r.numer());
    let mut den = rug_to_bigint(r.denom());
    // CF convergents with bounded denominator.
    let (mut h0, mut k0) = (BigInt::zero(), BigInt::one());
    let (mut h1, mut k1) = (BigInt::one(), BigInt::zero());
    let bound = BigInt::from(max_den);
    while !den.is_zero() {
        let a = num.div_floor(&den);
        let r2 = num - &a * &den;
        num = std::mem::replace(&mut den, r2);
        let h2 = &a * &h1 + &h0;
        let k2 = &a * &k1 + &k0;
        if k2.abs() > bound {
            break;
        }
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
    }
    if k1.is_zero() {
        return None;
    }
    let cand = BigRational::new(h1, k1);
    // Accept only close candidates.
    let back = rat_to_float(&cand, x.prec());
    let diff = (x.clone() - back).abs();
    let scale = Float::with_val(x.prec(), 1u32) + x.clone().abs();
    if diff < scale * Float::with_val(x.prec(), 1e-24) {
        Some(cand)
    } else {
        None
    }
}

pub fn reconstruct_gauss(z: &RComplex, max_den: u64) -> Option<GaussRat> {
    let re = reconstruct_rational(z.real(), max_den)?;
    let im = reconstruct_rational(z.imag(), max_den)?;
    Some(GaussRat::new(re, im))
}

// ---------------------------------------------------------------------------
// Aberth–Ehrlich
// ---------------------------------------------------------------------------

fn horner(coeffs: &[RComplex], z: &RComplex) -> RComplex {
    let prec = z.prec().0;
    let mut acc = RComplex::with_val(prec, (0, 0));
    for c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Σ |a_j|·|z|^j, the natural backward-error scale at z.
fn residual_scale(coeffs: &[RComplex], z: &RComplex) -> Float {
    let prec = z.prec().0;
    let az = cabs(z);
    let mut pow = Float::with_val(prec, 1);
    let mut acc = Float::with_val(prec, 0);
    for c in coeffs {
        acc += cabs(c) * pow.clone();
        pow *= az.clone();
    }
    acc
}

/// All roots of a squarefree polynomial by simultaneous Aberth–Ehrlich
/// iteration. `coeffs` ascending, degree ≥ 1, nonzero leading coefficient.
fn aberth(coeffs: &[RComplex], prec: u32, residual: f64) -> Result<Vec<RComplex>, SolverError> {
    let n = coeffs.len() - 1;
    let lc = coeffs.last().unwrap();
    if n == 1 {
        return Ok(vec![(-coeffs[0].clone() / lc.clone()).into()]);
    }
    // Cauchy-style radius.
    let mut radius = Float::with_val(prec, 0);
    for c in &coeffs[..n] {
        let m = cabs(&(c.clone() / lc.clone()));
        if m > radius {
            radius = m;
        }
    }
    let radius = radius + Float::with_val(prec, 1);
    let deriv: Vec<RComplex> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * RComplex::with_val(prec, (k as u32, 0)))
        .collect();

    let pi = Float::with_val(prec, rug::float::Constant::Pi);
    let mut z: Vec<RComplex> = (0..n)
        .map(|k| {
            let theta: Float =
                pi.clone() * 2u32 * Float::with_val(prec, k as u32) / Float::with_val(prec, n as u32)
                    + Float::with_val(prec, 0.4);
            let dir = RComplex::with_val(prec, (theta.clone().cos(), theta.sin()));
            dir * radius.clone() * Float::with_val(prec, 0.7)
        })
        .collect();

    let tol = Float::with_val(prec, residual);
    let tiny = Float::with_val(prec, 1e-60);
    let max_iter = 60 + 30 * n;
    for _ in 0..max_iter {
        let mut all_done = true;
        let mut next = z.clone();
        for k in 0..n {
            let pz = horner(coeffs, &z[k]);
            let scale = residual_scale(coeffs, &z[k]);
            if cabs(&pz) <= tol.clone() * scale {
                continue;
            }
            all_done = false;
            let dz = horner(&deriv, &z[k]);
            let w = if cabs(&dz) < tiny {
                RComplex::with_val(prec, (1e-20, 1e-20))
            } else {
                pz / dz
            };
            let mut s = RComplex::with_val(prec, (0, 0));
            for j in 0..n {
                if j == k {
                    continue;
                }
                let d = (&z[k] - &z[j]).complete((prec, prec));
                if cabs(&d) < tiny {
                    continue;
                }
                s += d.recip();
            }
            let denom = RComplex::with_val(prec, (1, 0)) - w.clone() * s;
            let corr = if cabs(&denom) < tiny {
                w.clone()
            } else {
                w / denom
            };
            next[k] = z[k].clone() - corr;
        }
        z = next;
        if all_done {
            return Ok(z);
        }
    }
    // Final check: accept if every root meets the residual even though the
    // loop ran out (the flag may be stale by one sweep).
    if z.iter().all(|zk| {
        let pz = horner(coeffs, zk);
        cabs(&pz) <= tol.clone() * residual_scale(coeffs, zk)
    }) {
        Ok(z)
    } else {
        Err(SolverError::NonConvergence(prec))
    }
}

/// A located root with its exactly-certified multiplicity.
#[derive(Clone, Debug)]
pub struct RootCluster {
    pub value: RComplex,
    pub multiplicity: usize,
    /// True when the multiplicity comes from exact squarefree
    /// decomposition (always the case on this path).
    pub certified: bool,
}

/// Roots with multiplicities: exact Yun decomposition first, then
/// Aberth–Ehrlich on each squarefree factor, escalating precision on
/// non-convergence.
pub fn univariate_roots(p: &UPoly, cfg: &NumericConfig) -> Result<Vec<RootCluster>, SolverError> {
    if p.is_zero() {
        return Err(SolverError::ZeroPolynomial);
    }
    if p.deg() == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        if factor.deg() == 0 {
            continue;
        }
        let mut prec = cfg.precision_bits;
        let roots = loop {
            let coeffs: Vec<RComplex> = factor
                .coeffs()
                .iter()
                .map(|c| gauss_to_complex(c, prec))
                .collect();
            match aberth(&coeffs, prec, cfg.root_residual) {
                Ok(r) => break r,
                Err(e) => {
                    prec *= 2;
                    if prec > cfg.max_precision_bits {
                        return Err(e);
                    }
                }
            }
        };
        // Merge clusters closer than cluster_eps (defensive: factors are
        // squarefree, so genuine collisions do not occur).
        let mut merged: Vec<(RComplex, usize)> = Vec::new();
        'outer: for r in roots {
            for (m, count) in merged.iter_mut() {
                let d = cabs(&(m.clone() - r.clone()));
                if d < Float::with_val(prec, cfg.cluster_eps) {
                    *count += 1;
                    continue 'outer;
                }
            }
            merged.push((r, 1));
        }
        for (value, count) in merged {
            out.push(RootCluster {
                value,
                multiplicity: mult * count,
                certified: true,
            });
        }
    }
    debug_assert_eq!(
        out.iter().map(|r| r.multiplicity).sum::<usize>() as i64,
        p.deg()
    );
    Ok(out)
}

// ---------------------------------------------------------------------------
// Bivariate resultants
// ---------------------------------------------------------------------------

/// Top form of p evaluated at (x, 1): the coefficient of v^(total degree)
/// after the shear u -> u + x·v.
fn top_form_at(p: &Poly, x: i64) -> GaussRat {
    let d = p.total_deg();
    let mut acc = GaussRat::zero();
    for (e, c) in p.terms() {
        if e.x + e.y == d {
            acc = acc + c.clone() * gpow(&gr(x), e.x as u32);
        }
    }
    acc
}

/// Exact Lagrange interpolation through (node, value) pairs.
/// Exact polynomial interpolation (Newton divided differences).
fn interpolate(samples: &[(i64, GaussRat)]) -> UPoly {
    let n = samples.len();
    let mut coef: Vec<GaussRat> = samples.iter().map(|(_, y)| y.clone()).collect();
    for j in 1..n {
        for i in (j..n).rev() {
            let dx = gr(samples[i].0 - samples[i - j].0);
            coef[i] = (coef[i].clone() - coef[i - 1].clone()) * ginv(&dx);
        }
    }
    let mut acc = UPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        acc = acc.mul(&UPoly::new(vec![gr(-samples[i].0), gr(1)]));
        acc = acc.add(&UPoly::constant(coef[i].clone()));
    }
    acc
}

/// Resultant of two bivariate polynomials eliminating `eliminate`,
/// computed by evaluation/interpolation in the surviving variable.
///
/// Conventions: if one input has degree 0 in the eliminated variable, the
/// result is that input (as a polynomial in the survivor) raised to the
/// other's degree; if both do, that is an error.
pub fn resultant(p: &Poly, q: &Poly, eliminate: Var) -> Result<UPoly, SolverError> {
    if p.is_zero() || q.is_zero() {
        return Err(SolverError::ZeroPolynomial);
    }
    let survive = eliminate.other();
    let dp = p.deg_in(eliminate);
    let dq = q.deg_in(eliminate);
    if dp == 0 && dq == 0 {
        return Err(SolverError::BothConstant);
    }
    if dp == 0 {
        let base = p.as_univariate(survive).map_err(|_| SolverError::Inconsistent(
            "constant-in-eliminated input still involves the eliminated variable".into(),
        ))?;
        let mut acc = UPoly::one();
        for _ in 0..dq {
            acc = acc.mul(&base);
        }
        return Ok(acc);
    }
    if dq == 0 {
        let base = q.as_univariate(survive).map_err(|_| SolverError::Inconsistent(
            "constant-in-eliminated input still involves the eliminated variable".into(),
        ))?;
        let mut acc = UPoly::one();
        for _ in 0..dp {
            acc = acc.mul(&base);
        }
        return Ok(acc);
    }

    let pc = p.coeffs_in(eliminate);
    let qc = q.coeffs_in(eliminate);
    let lc_p = pc.last().unwrap();
    let lc_q = qc.last().unwrap();
    let eval_coeffs = |cs: &[Poly], x: &GaussRat| -> UPoly {
        UPoly::new(
            cs.iter()
                .map(|c| match survive {
                    Var::U => c.eval_exact(x, &GaussRat::zero()),
                    Var::V => c.eval_exact(&GaussRat::zero(), x),
                })
                .collect(),
        )
    };
    let eval_one = |c: &Poly, x: &GaussRat| -> GaussRat {
        match survive {
            Var::U => c.eval_exact(x, &GaussRat::zero()),
            Var::V => c.eval_exact(&GaussRat::zero(), x),
        }
    };

    let bound = (p.deg_in(survive) * dq + q.deg_in(survive) * dp) as usize;
    let mut samples: Vec<(i64, GaussRat)> = Vec::with_capacity(bound + 1);
    let mut x: i64 = 0;
    while samples.len() < bound + 1 {
        let node = x;
        x = if x > 0 { -x } else { -x + 1 };
        let nx = gr(node);
        if eval_one(lc_p, &nx).is_zero() || eval_one(lc_q, &nx).is_zero() {
            continue;
        }
        let pu = eval_coeffs(&pc, &nx);
        let qu = eval_coeffs(&qc, &nx);
        debug_assert_eq!(pu.deg(), dp);
        debug_assert_eq!(qu.deg(), dq);
        samples.push((node, resultant_univ(&pu, &qu)));
    }
    Ok(interpolate(&samples))
}

// ---------------------------------------------------------------------------
// System solving
// ---------------------------------------------------------------------------

/// Isolated solutions of a square system with multiplicities.
#[derive(Clone, Debug)]
pub struct SolutionSet {
    /// De-sheared numeric solutions with multiplicities.
    pub solutions: Vec<((RComplex, RComplex), usize)>,
    pub count_all: i64,
    pub count_torus: i64,
    /// False when the numeric axis classification disagreed with the exact
    /// axis recount.
    pub axis_check_ok: bool,
}

#[derive(Clone, Debug)]
pub enum SolveOutcome {
    Finite(SolutionSet),
    PositiveDimensional,
}

fn empty_solutions() -> SolveOutcome {
    SolveOutcome::Finite(SolutionSet {
        solutions: Vec::new(),
        count_all: 0,
        count_torus: 0,
        axis_check_ok: true,
    })
}

/// Distinct roots forced onto the axis u = 0 (or v = 0 when `var` is V),
/// counted exactly from the restricted univariate system.
fn exact_axis_root_count(p: &Poly, q: &Poly, var: Var) -> Option<i64> {
    let restrict = |f: &Poly| -> UPoly {
        let kept = Poly::from_terms(f.terms().filter_map(|(e, c)| {
            let (on_axis, other) = match var {
                Var::U => (e.x == 0, Pt::new(0, e.y)),
                Var::V => (e.y == 0, Pt::new(e.x, 0)),
            };
            if on_axis {
                Some((other, c.clone()))
            } else {
                None
            }
        }));
        kept.as_univariate(var.other()).unwrap()
    };
    let pa = restrict(p);
    let qa = restrict(q);
    if pa.is_zero() && qa.is_zero() {
        return None; // axis contained in the zero set
    }
    let g = if pa.is_zero() {
        qa
    } else if qa.is_zero() {
        pa
    } else {
        pa.gcd(&qa)
    };
    Some(g.squarefree_part().deg())
}

/// Solve p = q = 0: random unimodular shear, resultant elimination,
/// back-substitution pairing, exact multiplicities from the eliminant,
/// torus classification in the original coordinates.
pub fn solve_system(
    p: &Poly,
    q: &Poly,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> Result<SolveOutcome, SolverError> {
    let p_const = p.total_deg() == 0;
    let q_const = q.total_deg() == 0;
    if p.is_zero() && q.is_zero() {
        return Ok(SolveOutcome::PositiveDimensional);
    }
    if p.is_zero() || q.is_zero() {
        let other = if p.is_zero() { q } else { p };
        return if other.total_deg() == 0 {
            Ok(empty_solutions())
        } else {
            Ok(SolveOutcome::PositiveDimensional)
        };
    }
    if p_const || q_const {
        return Ok(empty_solutions());
    }

    let mut attempts = 0;
    'shear: loop {
        attempts += 1;
        if attempts > 12 {
            return Err(SolverError::Inconsistent(
                "shear retries exhausted in solve_system".into(),
            ));
        }
        let lambda = loop {
            let l = rng.gen_range(-9i64..=9);
            if l != 0 && !top_form_at(p, l).is_zero() && !top_form_at(q, l).is_zero() {
                break l;
            }
        };
        let ps = p.shear(Var::U, lambda);
        let qs = q.shear(Var::U, lambda);
        let r = resultant(&ps, &qs, Var::V)?;
        if r.is_zero() {
            return Ok(SolveOutcome::PositiveDimensional);
        }
        let count_all = r.deg();
        if count_all == 0 {
            return Ok(empty_solutions());
        }
        let roots = univariate_roots(&r, cfg)?;
        let prec = cfg.precision_bits;
        let ps_coeffs = ps.coeffs_in(Var::V);
        let qs_coeffs = qs.coeffs_in(Var::V);
        let eval_cs = |cs: &[Poly], u0: &RComplex| -> Vec<RComplex> {
            cs.iter()
                .map(|c| {
                    let up = c.as_univariate(Var::U).unwrap();
                    let cc: Vec<RComplex> =
                        up.coeffs().iter().map(|k| gauss_to_complex(k, prec)).collect();
                    if cc.is_empty() {
                        RComplex::with_val(prec, (0, 0))
                    } else {
                        horner(&cc, u0)
                    }
                })
                .collect()
        };

        let mut solutions: Vec<((RComplex, RComplex), usize)> = Vec::new();
        for root in &roots {
            let u0 = &root.value;
            let pv = eval_cs(&ps_coeffs, u0);
            let qv = eval_cs(&qs_coeffs, u0);
            // v-leading coefficient is a nonzero constant after the shear.
            let vroots = match aberth(&pv, prec, cfg.root_residual) {
                Ok(r) => r,
                Err(_) => continue 'shear,
            };
            let mut best: Option<(RComplex, Float)> = None;
            for v in vroots {
                let resid = cabs(&horner(&qv, &v));
                let scale = residual_scale(&qv, &v) + Float::with_val(prec, 1e-30);
                let rel = resid / scale;
                if best.as_ref().map_or(true, |(_, b)| rel < *b) {
                    best = Some((v, rel));
                }
            }
            let Some((v, rel)) = best else {
                continue 'shear;
            };
            if rel > Float::with_val(prec, 1e-9) {
                // Pairing failed; try a different shear.
                continue 'shear;
            }
            let u = u0.clone() + RComplex::with_val(prec, lambda) * v.clone();
            solutions.push(((u, v), root.multiplicity));
        }

        let thr = Float::with_val(prec, cfg.zero_threshold);
        let mut count_torus = 0i64;
        let mut numeric_u_axis = 0i64;
        let mut numeric_v_axis = 0i64;
        for ((u, v), m) in &solutions {
            let on_u = cabs(u) <= thr;
            let on_v = cabs(v) <= thr;
            if on_u {
                numeric_u_axis += 1;
            }
            if on_v {
                numeric_v_axis += 1;
            }
            if !on_u && !on_v {
                count_torus += *m as i64;
            }
        }
        let axis_u = exact_axis_root_count(p, q, Var::U);
        let axis_v = exact_axis_root_count(p, q, Var::V);
        let axis_check_ok = axis_u.map_or(true, |n| n == numeric_u_axis)
            && axis_v.map_or(true, |n| n == numeric_v_axis);

        return Ok(SolveOutcome::Finite(SolutionSet {
            solutions,
            count_all,
            count_torus,
            axis_check_ok,
        }));
    }
}

/// One-variable restriction of a bivariate polynomial to a coordinate
/// axis.
fn axis_restriction(p: &Poly, axis: Var) -> UPoly {
    let kept = Poly::from_terms(p.terms().filter_map(|(e, c)| {
        let (on_axis, other) = match axis {
            Var::U => (e.x == 0, Pt::new(0, e.y)),
            Var::V => (e.y == 0, Pt::new(e.x, 0)),
        };
        if on_axis {
            Some((other, c.clone()))
        } else {
            None
        }
    }));
    kept.as_univariate(axis.other()).unwrap()
}

/// Total multiplicity of the roots of `r` that are also roots of `g`.
fn ord_mass(r: &UPoly, g: &UPoly) -> i64 {
    let g_sf = g.squarefree_part();
    if g_sf.deg() <= 0 {
        return 0;
    }
    let mut rest = r.clone();
    let mut total = 0i64;
    loop {
        let c = rest.gcd(&g_sf);
        if c.deg() <= 0 {
            return total;
        }
        total += c.deg();
        rest = rest.div_exact(&c);
    }
}

/// Affine solution count with multiplicity: the eliminant degree after a
/// shear that makes both leading coefficients constant.
pub fn count_affine_solutions(
    p: &Poly,
    q: &Poly,
    rng: &mut ChaCha8Rng,
) -> Result<i64, SolverError> {
    if p.is_zero() && q.is_zero() {
        return Err(SolverError::PositiveDimensional);
    }
    if p.is_zero() || q.is_zero() {
        let other = if p.is_zero() { q } else { p };
        return if other.total_deg() == 0 {
            Ok(0)
        } else {
            Err(SolverError::PositiveDimensional)
        };
    }
    if p.total_deg() == 0 || q.total_deg() == 0 {
        return Ok(0);
    }
    let lambda = loop {
        let l = rng.gen_range(-9i64..=9);
        if l != 0 && !top_form_at(p, l).is_zero() && !top_form_at(q, l).is_zero() {
            break l;
        }
    };
    let r = resultant(&p.shear(Var::U, lambda), &q.shear(Var::U, lambda), Var::V)?;
    if r.is_zero() {
        return Err(SolverError::PositiveDimensional);
    }
    Ok(r.deg())
}

/// Torus solution count with multiplicity, computed exactly.
///
/// After the shear u → u + λv the eliminant factors over the affine
/// solutions with their intersection multiplicities, the axis {v = 0} keeps
/// its u-coordinates, and {u = 0} lands on u = −λ·v. The torus count is the
/// eliminant degree minus the multiplicity mass sitting over the exactly
/// computed axis roots (inclusion–exclusion at the origin). Two shears must
/// agree, which rules out accidental collisions.
pub fn count_torus_solutions(
    p: &Poly,
    q: &Poly,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> Result<i64, SolverError> {
    let _ = cfg;
    // Common monomial factors carry no torus zeros.
    let strip = |f: &Poly| -> Poly {
        if f.is_zero() {
            return f.clone();
        }
        let m = f.min_exp();
        f.shift_exponents(Pt::new(-m.x.max(0), -m.y.max(0)))
    };
    let p = strip(p);
    let q = strip(q);
    if p.is_zero() || q.is_zero() {
        return Err(SolverError::PositiveDimensional);
    }
    if p.total_deg() == 0 || q.total_deg() == 0 {
        return Ok(0);
    }

    // Axis roots, exactly.
    let pu = axis_restriction(&p, Var::U);
    let qu = axis_restriction(&q, Var::U);
    let pv = axis_restriction(&p, Var::V);
    let qv = axis_restriction(&q, Var::V);
    if (pu.is_zero() && qu.is_zero()) || (pv.is_zero() && qv.is_zero()) {
        return Err(SolverError::PositiveDimensional);
    }
    let gcd_or = |a: &UPoly, b: &UPoly| -> UPoly {
        if a.is_zero() {
            b.clone()
        } else if b.is_zero() {
            a.clone()
        } else {
            a.gcd(b)
        }
    };
    let h_u = gcd_or(&pu, &qu); // roots are the v-coordinates on {u = 0}
    let h_v = gcd_or(&pv, &qv); // roots are the u-coordinates on {v = 0}
    let origin_common =
        p.coeff(Pt::new(0, 0)).is_zero() && q.coeff(Pt::new(0, 0)).is_zero();

    let mut compute = |lambda: i64| -> Result<i64, SolverError> {
        let r = resultant(&p.shear(Var::U, lambda), &q.shear(Var::U, lambda), Var::V)?;
        if r.is_zero() {
            return Err(SolverError::PositiveDimensional);
        }
        let n = r.deg();
        // {u = 0} roots v0 land at u' = −λ·v0: substitute x → −x/λ.
        let h_u_mapped = UPoly::new(
            h_u.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let scale = gpow(&(gr(-1) * ginv(&gr(lambda))), k as u32);
                    c.clone() * scale
                })
                .collect(),
        );
        let t_u = ord_mass(&r, &h_u_mapped);
        let t_v = ord_mass(&r, &h_v);
        let t_00 = if origin_common {
            r.coeffs().iter().take_while(|c| c.is_zero()).count() as i64
        } else {
            0
        };
        Ok(n - t_u - t_v + t_00)
    };
    let mut lambdas = Vec::new();
    while lambdas.len() < 2 {
        let l = rng.gen_range(-9i64..=9);
        if l != 0
            && !lambdas.contains(&l)
            && !top_form_at(&p, l).is_zero()
            && !top_form_at(&q, l).is_zero()
        {
            lambdas.push(l);
        }
    }
    let c1 = compute(lambdas[0])?;
    let c2 = compute(lambdas[1])?;
    if c1 == c2 {
        return Ok(c1);
    }
    let mut l3 = rng.gen_range(-19i64..=19);
    loop {
        if l3 != 0
            && !lambdas.contains(&l3)
            && !top_form_at(&p, l3).is_zero()
            && !top_form_at(&q, l3).is_zero()
        {
            break;
        }
        l3 = rng.gen_range(-19i64..=19);
    }
    let c3 = compute(l3)?;
    if c3 == c1 || c3 == c2 {
        Ok(c3)
    } else {
        Err(SolverError::Inconsistent(
            "torus count disagrees across shears".into(),
        ))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Emptiness {
    Empty,
    NonEmpty,
}

/// Exact decision: does p = q = 0 have any solution in C²?
///
/// After a shear making both leading coefficients constant, the system is
/// empty iff the eliminant is a nonzero constant; an identically zero
/// eliminant means a common curve (nonempty).
pub fn fiber_is_empty_exact(
    p: &Poly,
    q: &Poly,
    rng: &mut ChaCha8Rng,
) -> Result<Emptiness, SolverError> {
    if p.is_zero() && q.is_zero() {
        return Ok(Emptiness::NonEmpty);
    }
    if p.is_zero() || q.is_zero() {
        let other = if p.is_zero() { q } else { p };
        return Ok(if other.total_deg() == 0 {
            Emptiness::Empty
        } else {
            Emptiness::NonEmpty
        });
    }
    if p.total_deg() == 0 || q.total_deg() == 0 {
        return Ok(Emptiness::Empty);
    }
    let lambda = loop {
        let l = rng.gen_range(-9i64..=9);
        if l != 0 && !top_form_at(p, l).is_zero() && !top_form_at(q, l).is_zero() {
            break l;
        }
    };
    let r = resultant(&p.shear(Var::U, lambda), &q.shear(Var::U, lambda), Var::V)?;
    Ok(if r.is_zero() {
        Emptiness::NonEmpty
    } else if r.deg() == 0 {
        Emptiness::Empty
    } else {
        Emptiness::NonEmpty
    })
}

// ---------------------------------------------------------------------------
// Bernstein deficiencies (Eq. 3.3)
// ---------------------------------------------------------------------------

/// Total intersection multiplicity of the transformed pair along the line
/// t = 0, restricted to s in C*.
///
/// Computed exactly: after an s-shear with constant t-leading forms, the
/// eliminant Res_t factors over the affine roots with their intersection
/// multiplicities; the t=0 portion is split off with gcds against the
/// t⁰-slice system.
pub fn slice_multiplicity(
    g1: &Poly,
    g2: &Poly,
    rng: &mut ChaCha8Rng,
) -> Result<i64, SolverError> {
    if g1.is_zero() || g2.is_zero() {
        return Err(SolverError::ZeroPolynomial);
    }
    let slice0 = |g: &Poly| -> UPoly {
        let cs = g.coeffs_in(Var::V);
        cs[0].as_univariate(Var::U).unwrap()
    };
    let s1 = slice0(g1);
    let s2 = slice0(g2);
    if s1.is_zero() && s2.is_zero() {
        return Err(SolverError::DegenerateFace);
    }
    let w = if s1.is_zero() {
        s2.clone()
    } else if s2.is_zero() {
        s1.clone()
    } else {
        s1.gcd(&s2)
    };
    // Strip the root at s = 0: only C* roots count.
    let strip_zero = |f: &UPoly| -> UPoly {
        let mut c = f.coeffs().to_vec();
        let k = c.iter().take_while(|x| x.is_zero()).count();
        UPoly::new(c.split_off(k))
    };
    let w = strip_zero(&w).squarefree_part();
    if w.deg() <= 0 {
        return Ok(0);
    }

    let compute = |gamma: i64| -> Result<i64, SolverError> {
        let a = g1.shear(Var::U, gamma);
        let b = g2.shear(Var::U, gamma);
        let r = resultant(&a, &b, Var::V)?;
        if r.is_zero() {
            return Err(SolverError::PositiveDimensional);
        }
        let mut m = 0i64;
        for (factor, mult) in r.squarefree_decomposition() {
            let common = strip_zero(&factor.gcd(&w));
            m += mult as i64 * common.deg().max(0);
        }
        Ok(m)
    };
    let pick_gamma = |rng: &mut ChaCha8Rng| loop {
        let g = rng.gen_range(-9i64..=9);
        if g != 0 && !top_form_at(g1, g).is_zero() && !top_form_at(g2, g).is_zero() {
            break g;
        }
    };
    let gamma1 = pick_gamma(rng);
    let m1 = compute(gamma1)?;
    let mut gamma2 = pick_gamma(rng);
    while gamma2 == gamma1 {
        gamma2 = pick_gamma(rng);
    }
    let m2 = compute(gamma2)?;
    if m1 == m2 {
        return Ok(m1);
    }
    let mut gamma3 = pick_gamma(rng);
    while gamma3 == gamma1 || gamma3 == gamma2 {
        gamma3 = pick_gamma(rng);
    }
    let m3 = compute(gamma3)?;
    if m3 == m1 || m3 == m2 {
        Ok(m3)
    } else {
        Err(SolverError::Inconsistent(
            "slice multiplicity disagrees across shears".into(),
        ))
    }
}

/// Per-face escape multiplicities of the system (f1−y1, f2−y2): the m_Γ of
/// the torus-count identity  #V° = V(supp) − Σ m_Γ.
pub fn bernstein_deficiency(
    f: &PolyMap,
    y: &(GaussRat, GaussRat),
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(FacePair, i64)>, SolverError> {
    let _ = cfg;
    let p1 = f.f1.sub(&Poly::constant(y.0.clone()));
    let p2 = f.f2.sub(&Poly::constant(y.1.clone()));
    if p1.is_zero() || p2.is_zero() {
        return Err(SolverError::ZeroPolynomial);
    }
    let pair = PolyMap::new(p1.clone(), p2.clone())
        .support_pair(false)
        .map_err(|_| SolverError::ZeroPolynomial)?;
    // The escape count lives on the content-free transforms: monomial
    // factors are invisible on the torus, and a leftover t-power would
    // put the whole t = 0 line into the zero set.
    let strip = |g: &Poly| -> Poly {
        let m = g.min_exp();
        g.shift_exponents(Pt::new(-m.x, -m.y))
    };
    let mut out = Vec::new();
    for face in pair.enumerate_face_pairs() {
        if face.dim != 1 {
            continue;
        }
        let t = build_transform(&pair, &face).expect("dim-1 face");
        let (g1, _) = t.apply_poly(&p1);
        let (g2, _) = t.apply_poly(&p2);
        let m = slice_multiplicity(&strip(&g1), &strip(&g2), rng)?;
        if m > 0 {
            out.push((face, m));
        }
    }
    Ok(out)
}

/// Exact root extraction for low-degree factors; keeps K_f points and line
/// positions in Q(i) whenever the algebra allows it.
pub fn exact_roots(p: &UPoly) -> Option<Vec<(GaussRat, usize)>> {
    let mut out = Vec::new();
    for (factor, mult) in p.squarefree_decomposition() {
        match factor.deg() {
            0 => {}
            1 => {
                let root = -factor.coeff(0) * ginv(&factor.coeff(1));
                out.push((root, mult));
            }
            2 => {
                let a = factor.coeff(2);
                let b = factor.coeff(1);
                let c = factor.coeff(0);
                let disc = b.clone() * b.clone() - gr(4) * a.clone() * c;
                let s = crate::polyring::gauss_sqrt(&disc)?;
                let inv2a = ginv(&(gr(2) * a));
                out.push(((-b.clone() + s.clone()) * inv2a.clone(), mult));
                out.push(((-b - s) * inv2a, mult));
            }
            _ => return None,
        }
    }
    Some(out)
}

/// Root extraction that prefers the exact tier and falls back to numerics
/// with rational reconstruction attempts.
#[derive(Clone, Debug)]
pub enum Located {
    Exact(GaussRat, usize),
    Numeric(RComplex, usize),
}

pub fn locate_roots(p: &UPoly, cfg: &NumericConfig) -> Result<Vec<Located>, SolverError> {
    if let Some(exact) = exact_roots(p) {
        return Ok(exact
            .into_iter()
            .map(|(z, m)| Located::Exact(z, m))
            .collect());
    }
    let mut out = Vec::new();
    for cluster in univariate_roots(p, cfg)? {
        if let Some(z) = reconstruct_gauss(&cluster.value, 1_000_000) {
            // Verified exact root?
            if p.eval(&z).is_zero() {
                out.push(Located::Exact(z, cluster.multiplicity));
                continue;
            }
        }
        out.push(Located::Numeric(cluster.value, cluster.multiplicity));
    }
    Ok(out)
}

pub fn located_is_nonzero(root: &Located, cfg: &NumericConfig) -> bool {
    match root {
        Located::Exact(z, _) => !z.is_zero(),
        Located::Numeric(z, _) => cabs(z).to_f64() > cfg.zero_threshold,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{grq, rat, rat_i64};
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    fn poly(terms: &[(i64, i64, i64)]) -> Poly {
        Poly::from_terms(terms.iter().map(|&(x, y, c)| (Pt::new(x, y), gr(c))))
    }

    fn map14() -> PolyMap {
        PolyMap::new(
            poly(&[(1, 1, 1)]),
            poly(&[(0, 2, 1), (1, 3, -1), (0, 1, 2), (1, 2, -1), (1, 1, 1)]),
        )
    }

    #[test]
    fn roots_with_multiplicity() {
        // (t−1)²(t−2)
        let f = UPoly::linear_root(&gr(1))
            .mul(&UPoly::linear_root(&gr(1)))
            .mul(&UPoly::linear_root(&gr(2)));
        let cfg = NumericConfig::default();
        let mut roots = univariate_roots(&f, &cfg).unwrap();
        roots.sort_by(|a, b| a.multiplicity.cmp(&b.multiplicity));
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].multiplicity, 1);
        assert_eq!(roots[1].multiplicity, 2);
        let near = |z: &RComplex, x: f64| (complex_to_f64(z).0 - x).abs() < 1e-25;
        assert!(near(&roots[0].value, 2.0));
        assert!(near(&roots[1].value, 1.0));
        assert!(roots.iter().all(|r| r.certified));
    }

    #[test]
    fn roots_of_eq_2_2_cubic() {
        // s(P(s) − 2y1) + y2 − 1 at P = 1 − s², y = 0: s − s³ − 1.
        let f = UPoly::new(vec![gr(-1), gr(1), gr(0), gr(-1)]);
        let cfg = NumericConfig::default();
        let roots = univariate_roots(&f, &cfg).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots.iter().all(|r| r.multiplicity == 1));
        for r in &roots {
            let z = &r.value;
            let resid = cabs(&horner(
                &f.coeffs()
                    .iter()
                    .map(|c| gauss_to_complex(c, 128))
                    .collect::<Vec<_>>(),
                z,
            ));
            assert!(resid.to_f64() < 1e-25);
        }
    }

    #[test]
    fn constant_has_no_roots() {
        let cfg = NumericConfig::default();
        assert!(univariate_roots(&UPoly::constant(gr(5)), &cfg)
            .unwrap()
            .is_empty());
        assert!(matches!(
            univariate_roots(&UPoly::zero(), &cfg),
            Err(SolverError::ZeroPolynomial)
        ));
    }

    #[test]
    fn resultant_spec_example() {
        // Res_v(uv − 1, v − 2) = 2u − 1.
        let p = poly(&[(1, 1, 1), (0, 0, -1)]);
        let q = poly(&[(0, 1, 1), (0, 0, -2)]);
        let r = resultant(&p, &q, Var::V).unwrap();
        assert_eq!(r, UPoly::new(vec![gr(-1), gr(2)]));
    }

    #[test]
    fn resultant_constant_in_var_convention() {
        // p free of u: Res_u(p, q) = p^{deg_u q}.
        let p = poly(&[(0, 2, 1), (0, 0, -3)]); // v² − 3
        let q = poly(&[(2, 1, 1), (1, 0, 1), (0, 0, 1)]); // u²v + u + 1
        let r = resultant(&p, &q, Var::U).unwrap();
        let base = p.as_univariate(Var::V).unwrap();
        assert_eq!(r, base.mul(&base));
        assert!(matches!(
            resultant(&poly(&[(0, 1, 1)]), &poly(&[(0, 2, 1)]), Var::U),
            Err(SolverError::BothConstant)
        ));
    }

    #[test]
    fn solve_simple_system() {
        // (uv − 1, v − 2) → one solution (1/2, 2), torus count 1.
        let p = poly(&[(1, 1, 1), (0, 0, -1)]);
        let q = poly(&[(0, 1, 1), (0, 0, -2)]);
        let cfg = NumericConfig::default();
        match solve_system(&p, &q, &cfg, &mut rng()).unwrap() {
            SolveOutcome::Finite(s) => {
                assert_eq!(s.count_all, 1);
                assert_eq!(s.count_torus, 1);
                assert_eq!(s.solutions.len(), 1);
                let ((u, v), m) = &s.solutions[0];
                assert_eq!(*m, 1);
                assert!((complex_to_f64(u).0 - 0.5).abs() < 1e-20);
                assert!((complex_to_f64(v).0 - 2.0).abs() < 1e-20);
            }
            _ => panic!("expected finite"),
        }
    }

    #[test]
    fn map14_missing_fiber_is_empty() {
        // f − (1,1) has no solutions in C².
        let f = map14();
        let p = f.f1.sub(&Poly::one());
        let q = f.f2.sub(&Poly::one());
        let cfg = NumericConfig::default();
        match solve_system(&p, &q, &cfg, &mut rng()).unwrap() {
            SolveOutcome::Finite(s) => assert_eq!(s.count_all, 0),
            _ => panic!("expected finite"),
        }
        assert_eq!(
            fiber_is_empty_exact(&p, &q, &mut rng()).unwrap(),
            Emptiness::Empty
        );
    }

    #[test]
    fn map14_attained_fiber_nonempty() {
        // (3,3): P(3)Q(3) ≠ 0, attained.
        let f = map14();
        let p = f.f1.sub(&Poly::constant(gr(3)));
        let q = f.f2.sub(&Poly::constant(gr(3)));
        assert_eq!(
            fiber_is_empty_exact(&p, &q, &mut rng()).unwrap(),
            Emptiness::NonEmpty
        );
    }

    #[test]
    fn torus_count_simple() {
        // (u − 1, v − 1) → 1.
        let p = poly(&[(1, 0, 1), (0, 0, -1)]);
        let q = poly(&[(0, 1, 1), (0, 0, -1)]);
        let cfg = NumericConfig::default();
        assert_eq!(count_torus_solutions(&p, &q, &cfg, &mut rng()).unwrap(), 1);
    }

    #[test]
    fn torus_count_generic_example_4_9() {
        // Generic coefficients on the Example 4.9 supports give V(A) = 2.
        let p = poly(&[(0, 0, 3), (1, 1, 5), (1, 2, 7)]);
        let q = poly(&[(0, 0, 2), (1, 0, -1), (1, 1, 4)]);
        let cfg = NumericConfig::default();
        assert_eq!(count_torus_solutions(&p, &q, &cfg, &mut rng()).unwrap(), 2);
    }

    #[test]
    fn torus_count_face_obstruction() {
        // Example 4.9 with a1b2 − b1a2 = 0: a face system gains a torus
        // root, so the count drops below V(A) = 2.
        let p = poly(&[(0, 0, 3), (1, 1, 2), (1, 2, 4)]);
        let q = poly(&[(0, 0, 2), (1, 0, 1), (1, 1, 2)]);
        let cfg = NumericConfig::default();
        let n = count_torus_solutions(&p, &q, &cfg, &mut rng()).unwrap();
        assert!(n < 2, "expected deficiency, got {n}");
    }

    #[test]
    fn bernstein_identity_map14_at_missing_point() {
        // map (1.4), y = (1,1): all V(A) = 2 torus solutions escape.
        let f = map14();
        let cfg = NumericConfig::default();
        let ms = bernstein_deficiency(&f, &(gr(1), gr(1)), &cfg, &mut rng()).unwrap();
        let total: i64 = ms.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn bernstein_identity_map14_at_kf_point() {
        // y = (2,2): the diagonal face carries a double escape.
        let f = map14();
        let cfg = NumericConfig::default();
        let ms = bernstein_deficiency(&f, &(gr(2), gr(2)), &cfg, &mut rng()).unwrap();
        let total: i64 = ms.iter().map(|(_, m)| m).sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn bernstein_generic_point_no_escapes() {
        let f = map14();
        let cfg = NumericConfig::default();
        let y = (grq(rat(5, 7)), grq(rat(3, 11)));
        let ms = bernstein_deficiency(&f, &y, &cfg, &mut rng()).unwrap();
        assert!(ms.is_empty(), "generic target should have m_Γ = 0: {ms:?}");
    }

    #[test]
    fn bernstein_identity_random_check() {
        // #V° + Σ m_Γ = V(supp) on the map (1.4) fiber system at y=(1,1).
        let f = map14();
        let cfg = NumericConfig::default();
        let y = (gr(1), gr(1));
        let p = f.f1.sub(&Poly::constant(y.0.clone()));
        let q = f.f2.sub(&Poly::constant(y.1.clone()));
        let v = PolyMap::new(p.clone(), q.clone())
            .support_pair(false)
            .unwrap()
            .mixed_volume();
        let torus = count_torus_solutions(&p, &q, &cfg, &mut rng()).unwrap();
        let ms = bernstein_deficiency(&f, &y, &cfg, &mut rng()).unwrap();
        let total: i64 = ms.iter().map(|(_, m)| m).sum();
        assert_eq!(grq(BigRational::from(BigInt::from(torus + total))), grq(v));
    }

    #[test]
    fn identity_map_has_no_face_roots() {
        let f = PolyMap::new(poly(&[(1, 0, 1)]), poly(&[(0, 1, 1)]));
        let cfg = NumericConfig::default();
        let ms = bernstein_deficiency(&f, &(gr(3), gr(4)), &cfg, &mut rng()).unwrap();
        assert!(ms.is_empty());
    }

    #[test]
    fn exact_roots_quadratic_gaussian() {
        // 1 + s² has roots ±i.
        let p = UPoly::new(vec![gr(1), gr(0), gr(1)]);
        let roots = exact_roots(&p).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots
            .iter()
            .any(|(z, _)| z.re.is_zero() && z.im == rat_i64(1)));
        assert!(roots
            .iter()
            .any(|(z, _)| z.re.is_zero() && z.im == rat_i64(-1)));
    }

    #[test]
    fn rational_reconstruction_round_trip() {
        let x = rat_to_float(&rat(22, 7), 128);
        assert_eq!(reconstruct_rational(&x, 1000).unwrap(), rat(22, 7));
    }
}
