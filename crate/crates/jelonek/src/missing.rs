//! Isolated missing points: candidate generation from nodes, cross
//! sections and cusps, exact verification, and the linear bound checks.
//!
//! Candidate generation is a superset strategy; soundness comes entirely
//! from the verification step, which decides fiber emptiness exactly over
//! rational targets. Isolation is certified relationally: a verified empty
//! fiber is isolated when sampled neighbors on every incident Jelonek
//! component are attained.

use crate::analysis::{
    points_close, upoly_eval_cval, CPoint, CVal, ComponentKind, JelonekComponent, KfPoint,
    Prepared, Verdict,
};
use crate::config::NumericConfig;
use crate::lattice::Pt;
use crate::polyring::{ginv, gpow, GaussRat, Poly, UPoly, Var};
use crate::solver::{
    self, cabs, fiber_is_empty_exact, gauss_to_complex, locate_roots, reconstruct_gauss,
    Emptiness, SolveOutcome,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rug::Complex as RComplex;
use serde::Serialize;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateSource {
    Node,
    Cross,
    Cusp,
    ComponentIntersection,
}

/// A potential isolated missing point, before verification.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub point: CPoint,
    pub source: CandidateSource,
    pub face_normals: Vec<Pt>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyVerdict {
    Attained,
    MissingIsolated,
    MissingNonisolated,
    Inconclusive,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Exact,
    Numeric,
}

#[derive(Clone, Debug)]
pub struct VerifiedPoint {
    pub point: CPoint,
    pub tier: Tier,
    pub sources: Vec<CandidateSource>,
    pub in_kf: bool,
    pub on_cross: bool,
}

#[derive(Clone, Debug)]
pub struct RejectedCandidate {
    pub candidate: Candidate,
    pub reason: String,
}

/// The Theorem 1.1 / Props. 2.2–2.5 bound table.
#[derive(Clone, Debug)]
pub struct BoundsTable {
    pub deg_f1: i64,
    pub deg_f2: i64,
    pub deg_f: i64,
    pub mu: Option<i64>,
    pub six_deg: i64,
    /// deg f1·deg f2/(μ(μ−1)) + 2(deg f1 + deg f2); undefined for μ ≤ 1.
    pub formula_11: Option<BigRational>,
    pub prop22: i64,
    pub prop24: i64,
    /// 3·deg f1·deg f2/(4μ(μ−1)); undefined for μ ≤ 1.
    pub prop25a: Option<BigRational>,
    pub prop25b: i64,
    pub count_total: i64,
    pub count_kf: i64,
    pub count_cross: i64,
    pub count_interior: i64,
    pub six_deg_ok: bool,
    pub formula_11_ok: bool,
    pub prop22_ok: bool,
    pub prop24_ok: bool,
    pub prop25_ok: bool,
}

#[derive(Clone, Debug)]
pub struct MissingReport {
    pub verified: Vec<VerifiedPoint>,
    pub rejected: Vec<RejectedCandidate>,
    pub bounds: BoundsTable,
    /// True when the genericity verdict passed, so the candidate sources
    /// are exhaustive; otherwise the report is best-effort diagnostics.
    pub complete: bool,
}

// ---------------------------------------------------------------------------
// Candidate generation
// ---------------------------------------------------------------------------

/// (g(r) − g(s)) / (r − s) as a polynomial in (r, s) = (U, V).
fn difference_quotient(g: &UPoly) -> Poly {
    let mut out = Poly::zero();
    for (k, c) in g.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for a in 0..k {
            let b = k - 1 - a;
            out.add_term(Pt::new(a as i64, b as i64), c.clone());
        }
    }
    out
}

fn cval_from_rug(z: RComplex) -> CVal {
    match reconstruct_gauss(&z, 1_000_000) {
        Some(g) => CVal::Exact(g),
        None => CVal::Approx(z),
    }
}

fn detranslate(p: CPoint, shift: &(GaussRat, GaussRat), prec: u32) -> CPoint {
    let fix = |v: CVal, c: &GaussRat| {
        let shifted = match v {
            CVal::Exact(z) => CVal::Exact(z - c.clone()),
            CVal::Approx(z) => CVal::Approx(z - gauss_to_complex(c, prec)),
        };
        crate::analysis::normalize_cval(shifted)
    };
    (fix(p.0, &shift.0), fix(p.1, &shift.1))
}

struct FaceLocus<'a> {
    ctx: &'a crate::analysis::FaceCtx,
    /// None for origin faces; Some(j) when member j is origin-free.
    missing: Option<usize>,
    g10: UPoly,
    g20: UPoly,
}

fn locus<'a>(ctx: &'a crate::analysis::FaceCtx) -> FaceLocus<'a> {
    let missing = if ctx.class.origin {
        None
    } else if ctx.face.g1.contains_origin() {
        Some(2)
    } else {
        Some(1)
    };
    FaceLocus {
        ctx,
        missing,
        g10: ctx.slice(1, 0),
        g20: ctx.slice(2, 0),
    }
}

impl FaceLocus<'_> {
    fn slice0(&self, member: usize) -> &UPoly {
        if member == 1 {
            &self.g10
        } else {
            &self.g20
        }
    }

    /// Exponent of s on the y-monomial of an origin-carrying member.
    fn v_of(&self, member: usize) -> i64 {
        self.ctx.y_monomial(member).x
    }
}

/// Evaluate the sweeping coordinate of a face locus at a parameter value:
/// g_{i,0}(s)/s^{v_i}, in translated coordinates.
fn sweep_value(l: &FaceLocus<'_>, member: usize, s: &CVal, prec: u32) -> CVal {
    let g = l.slice0(member);
    let v = l.v_of(member);
    match s {
        CVal::Exact(z) => CVal::Exact(g.eval(z) * ginv(&gpow(z, v as u32))),
        CVal::Approx(z) => {
            let gv = match upoly_eval_cval(g, s, prec) {
                CVal::Approx(x) => x,
                CVal::Exact(_) => unreachable!(),
            };
            let mut d = RComplex::with_val(prec, (1, 0));
            for _ in 0..v {
                d *= z.clone();
            }
            CVal::Approx(gv / d)
        }
    }
}

/// Node and component-intersection candidates from the long relevant faces.
pub fn node_candidates(
    prep: &Prepared,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<Candidate> {
    let mut out = Vec::new();
    let prec = cfg.precision_bits;
    let long: Vec<FaceLocus<'_>> = prep
        .relevant
        .iter()
        .filter(|c| c.class.long)
        .map(locus)
        .collect();

    // Self-intersections of the rational curve from each long origin face.
    for l in long.iter().filter(|l| l.missing.is_none()) {
        let p = difference_quotient(&l.g10);
        let q = difference_quotient(&l.g20);
        if p.is_zero() || q.is_zero() {
            continue; // a linear parametrization has no nodes
        }
        if let Ok(SolveOutcome::Finite(sol)) = solver::solve_system(&p, &q, cfg, rng) {
            for ((r, s), _) in &sol.solutions {
                let thr = cfg.zero_threshold;
                if cabs(r).to_f64() <= thr || cabs(s).to_f64() <= thr {
                    continue;
                }
                if cabs(&(r.clone() - s.clone())).to_f64() <= thr {
                    continue; // Claim 1: isolated node pairs have r ≠ s
                }
                let rv = cval_from_rug(r.clone());
                let y1 = sweep_value(l, 1, &rv, prec);
                let y2 = sweep_value(l, 2, &rv, prec);
                out.push(Candidate {
                    point: detranslate((y1, y2), &prep.shift, prec),
                    source: CandidateSource::Node,
                    face_normals: vec![l.ctx.face.normal],
                });
            }
        }
    }

    // Pairwise intersections of the loci of two long relevant faces.
    for i in 0..long.len() {
        for j in (i + 1)..long.len() {
            let (a, b) = (&long[i], &long[j]);
            let normals = vec![a.ctx.face.normal, b.ctx.face.normal];
            match (a.missing, b.missing) {
                (None, None) => {
                    // Curve ∩ curve: g_a(s) = g_b(u).
                    let p = Poly::from_univariate(&a.g10, Var::U)
                        .sub(&Poly::from_univariate(&b.g10, Var::V));
                    let q = Poly::from_univariate(&a.g20, Var::U)
                        .sub(&Poly::from_univariate(&b.g20, Var::V));
                    intersection_candidates(&p, &q, a, &normals, prep, cfg, rng, &mut out);
                }
                (None, Some(m)) | (Some(m), None) => {
                    // Curve ∩ line family. The pinned face contributes the
                    // root equation; matching happens on the swept
                    // coordinate.
                    let (curve, lines) = if a.missing.is_none() { (a, b) } else { (b, a) };
                    let swept = if m == 1 { 2 } else { 1 };
                    let pin = Poly::from_univariate(lines.slice0(m), Var::V);
                    let v = lines.v_of(swept);
                    let match_eq = Poly::from_univariate(curve.slice0(swept), Var::U)
                        .mul(&Poly::monomial(Pt::new(0, v), crate::polyring::gr(1)))
                        .sub(&Poly::from_univariate(lines.slice0(swept), Var::V));
                    intersection_candidates(
                        &pin, &match_eq, curve, &normals, prep, cfg, rng, &mut out,
                    );
                }
                (Some(m1), Some(m2)) => {
                    if m1 == m2 {
                        continue; // parallel line families
                    }
                    // Vertical × horizontal: one point per root pair.
                    let pa = position_values(a, cfg);
                    let pb = position_values(b, cfg);
                    for va in &pa {
                        for vb in &pb {
                            // a sweeps coordinate other(m1).
                            let (y1, y2) = if m1 == 2 {
                                (va.clone(), vb.clone())
                            } else {
                                (vb.clone(), va.clone())
                            };
                            out.push(Candidate {
                                point: detranslate((y1, y2), &prep.shift, cfg.precision_bits),
                                source: CandidateSource::ComponentIntersection,
                                face_normals: normals.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Swept-coordinate positions of a half-origin line family (translated
/// coordinates).
fn position_values(l: &FaceLocus<'_>, cfg: &NumericConfig) -> Vec<CVal> {
    let m = l.missing.unwrap();
    let swept = if m == 1 { 2 } else { 1 };
    let mut out = Vec::new();
    if let Ok(roots) = locate_roots(l.slice0(m), cfg) {
        for r in roots {
            if !solver::located_is_nonzero(&r, cfg) {
                continue;
            }
            let s = match r {
                solver::Located::Exact(z, _) => CVal::Exact(z),
                solver::Located::Numeric(z, _) => CVal::Approx(z),
            };
            out.push(sweep_value(l, swept, &s, cfg.precision_bits));
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn intersection_candidates(
    p: &Poly,
    q: &Poly,
    param_face: &FaceLocus<'_>,
    normals: &[Pt],
    prep: &Prepared,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Candidate>,
) {
    if p.is_zero() || q.is_zero() {
        return;
    }
    if let Ok(SolveOutcome::Finite(sol)) = solver::solve_system(p, q, cfg, rng) {
        for ((s, u), _) in &sol.solutions {
            let thr = cfg.zero_threshold;
            if cabs(s).to_f64() <= thr || cabs(u).to_f64() <= thr {
                continue;
            }
            let sv = cval_from_rug(s.clone());
            let y1 = sweep_value(param_face, 1, &sv, cfg.precision_bits);
            let y2 = sweep_value(param_face, 2, &sv, cfg.precision_bits);
            out.push(Candidate {
                point: detranslate((y1, y2), &prep.shift, cfg.precision_bits),
                source: CandidateSource::ComponentIntersection,
                face_normals: normals.to_vec(),
            });
        }
    }
}

/// Candidates on the cross: fix one coordinate at f_i(0,0) and solve the
/// triangular restricted system of each long relevant face.
pub fn cross_candidates(prep: &Prepared, cfg: &NumericConfig) -> Vec<Candidate> {
    let mut out = Vec::new();
    let prec = cfg.precision_bits;
    // Constant terms of the translated map = translated cross center.
    let cc = (
        prep.map.f1.coeff(crate::lattice::ORIGIN),
        prep.map.f2.coeff(crate::lattice::ORIGIN),
    );
    for ctx in prep.relevant.iter().filter(|c| c.class.long) {
        let l = locus(ctx);
        for fixed in [1usize, 2usize] {
            let other = 3 - fixed;
            // The swept coordinate must be determined.
            if l.missing == Some(other) {
                continue;
            }
            let mut constraints: Vec<UPoly> = Vec::new();
            if l.missing == Some(fixed) {
                constraints.push(l.slice0(fixed).clone());
            } else {
                // g_{fixed,0}(s) − cc_fixed·s^{v} = 0.
                let cfix = if fixed == 1 { cc.0.clone() } else { cc.1.clone() };
                let v = l.v_of(fixed) as usize;
                let mono = UPoly::new(
                    std::iter::repeat(GaussRat::zero())
                        .take(v)
                        .chain([cfix])
                        .collect(),
                );
                constraints.push(l.slice0(fixed).sub(&mono));
            }
            if l.missing == Some(other) {
                constraints.push(l.slice0(other).clone());
            }
            let eq = if constraints.len() == 1 {
                constraints[0].clone()
            } else {
                constraints[0].gcd(&constraints[1])
            };
            if eq.is_zero() || eq.deg() <= 0 {
                continue;
            }
            if let Ok(roots) = locate_roots(&eq, cfg) {
                for r in roots {
                    if !solver::located_is_nonzero(&r, cfg) {
                        continue;
                    }
                    let s = match r {
                        solver::Located::Exact(z, _) => CVal::Exact(z),
                        solver::Located::Numeric(z, _) => CVal::Approx(z),
                    };
                    let yother = sweep_value(&l, other, &s, prec);
                    let yfixed = CVal::Exact(if fixed == 1 { cc.0.clone() } else { cc.1.clone() });
                    let point = if fixed == 1 {
                        (yfixed, yother)
                    } else {
                        (yother, yfixed)
                    };
                    out.push(Candidate {
                        point: detranslate(point, &prep.shift, prec),
                        source: CandidateSource::Cross,
                        face_normals: vec![ctx.face.normal],
                    });
                }
            }
        }
    }
    out
}

/// K_f points wrapped as candidates.
pub fn cusp_candidates(kf: &[KfPoint]) -> Vec<Candidate> {
    kf.iter()
        .filter(|k| !k.degenerate_face)
        .map(|k| Candidate {
            point: k.point.clone(),
            source: CandidateSource::Cusp,
            face_normals: vec![k.face_normal],
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

fn fiber_polys(prep: &Prepared, y: &(GaussRat, GaussRat)) -> (Poly, Poly) {
    (
        prep.original.f1.sub(&Poly::constant(y.0.clone())),
        prep.original.f2.sub(&Poly::constant(y.1.clone())),
    )
}

/// Attainedness of an exact rational target, decided exactly.
fn exact_attained(
    prep: &Prepared,
    y: &(GaussRat, GaussRat),
    rng: &mut ChaCha8Rng,
) -> Option<bool> {
    let (p, q) = fiber_polys(prep, y);
    match fiber_is_empty_exact(&p, &q, rng) {
        Ok(Emptiness::Empty) => Some(false),
        Ok(Emptiness::NonEmpty) => Some(true),
        Err(_) => None,
    }
}

/// Attainedness of a numeric target: exact solve at a dyadic rationalization
/// and residual screening against the true coordinates.
fn numeric_attained(
    prep: &Prepared,
    y: &CPoint,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> Option<bool> {
    let prec = cfg.precision_bits;
    // Truncate to 64-bit dyadics: the surrogate target stays within 2^-60
    // of the true one while keeping the exact elimination cheap.
    let dyadic = |v: &CVal| -> Option<GaussRat> {
        match v {
            CVal::Exact(z) => Some(z.clone()),
            CVal::Approx(z) => {
                let re = rug::Float::with_val(64, z.real()).to_rational()?;
                let im = rug::Float::with_val(64, z.imag()).to_rational()?;
                Some(GaussRat::new(
                    crate::solver::rugrat_to_bigrational(&re),
                    crate::solver::rugrat_to_bigrational(&im),
                ))
            }
        }
    };
    let y1 = dyadic(&y.0)?;
    let y2 = dyadic(&y.1)?;
    let (p, q) = fiber_polys(prep, &(y1, y2));
    match solver::solve_system(&p, &q, cfg, rng).ok()? {
        SolveOutcome::PositiveDimensional => Some(true),
        SolveOutcome::Finite(sol) => {
            if sol.solutions.is_empty() {
                return Some(false);
            }
            // Residual of the best preimage against the true target.
            let ty1 = to_complex(&y.0, prec);
            let ty2 = to_complex(&y.1, prec);
            let mut best = f64::INFINITY;
            for ((u, v), _) in &sol.solutions {
                let f1 = eval_poly_numeric(&prep.original.f1, u, v, prec);
                let f2 = eval_poly_numeric(&prep.original.f2, u, v, prec);
                let r = cabs(&(f1 - ty1.clone()))
                    .to_f64()
                    .max(cabs(&(f2 - ty2.clone())).to_f64());
                best = best.min(r);
            }
            Some(best <= cfg.verify_residual)
        }
    }
}

fn to_complex(v: &CVal, prec: u32) -> RComplex {
    match v {
        CVal::Exact(z) => gauss_to_complex(z, prec),
        CVal::Approx(z) => z.clone(),
    }
}

pub(crate) fn eval_poly_numeric(p: &Poly, u: &RComplex, v: &RComplex, prec: u32) -> RComplex {
    let mut acc = RComplex::with_val(prec, (0, 0));
    for (e, c) in p.terms() {
        let mut t = gauss_to_complex(c, prec);
        for _ in 0..e.x {
            t *= u.clone();
        }
        for _ in 0..e.y {
            t *= v.clone();
        }
        acc += t;
    }
    acc
}

fn dyadic64(v: &CVal) -> Option<GaussRat> {
    match v {
        CVal::Exact(z) => Some(z.clone()),
        CVal::Approx(z) => {
            let re = rug::Float::with_val(64, z.real()).to_rational()?;
            let im = rug::Float::with_val(64, z.imag()).to_rational()?;
            Some(GaussRat::new(
                crate::solver::rugrat_to_bigrational(&re),
                crate::solver::rugrat_to_bigrational(&im),
            ))
        }
    }
}

/// Attainedness for neighbor samples: an exact emptiness verdict over a
/// 64-bit dyadic surrogate of the point. No root extraction involved.
fn neighbor_attained(prep: &Prepared, y: &CPoint, rng: &mut ChaCha8Rng) -> Option<bool> {
    let y1 = dyadic64(&y.0)?;
    let y2 = dyadic64(&y.1)?;
    let (p, q) = fiber_polys(prep, &(y1, y2));
    match fiber_is_empty_exact(&p, &q, rng).ok()? {
        Emptiness::Empty => Some(false),
        Emptiness::NonEmpty => Some(true),
    }
}

fn attained(
    prep: &Prepared,
    y: &CPoint,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> (Option<bool>, Tier) {
    match (&y.0, &y.1) {
        (CVal::Exact(a), CVal::Exact(b)) => (
            exact_attained(prep, &(a.clone(), b.clone()), rng),
            Tier::Exact,
        ),
        _ => (numeric_attained(prep, y, cfg, rng), Tier::Numeric),
    }
}

/// Sample points near `y` on a component through it.
fn component_neighbors(
    comp: &JelonekComponent,
    y: &CPoint,
    cfg: &NumericConfig,
) -> Vec<CPoint> {
    let deltas: [(i64, i64); 5] = [(1, 101), (-1, 101), (2, 101), (-2, 101), (3, 101)];
    let mut out = Vec::new();
    match comp.kind {
        ComponentKind::VerticalLine => {
            for (n, d) in deltas {
                let delta = CVal::Exact(crate::polyring::grq(BigRational::new(
                    BigInt::from(n),
                    BigInt::from(d),
                )));
                let pos = comp.position.clone().unwrap_or_else(|| y.0.clone());
                out.push((pos, add_cval(&y.1, &delta, cfg.precision_bits)));
            }
        }
        ComponentKind::HorizontalLine => {
            for (n, d) in deltas {
                let delta = CVal::Exact(crate::polyring::grq(BigRational::new(
                    BigInt::from(n),
                    BigInt::from(d),
                )));
                let pos = comp.position.clone().unwrap_or_else(|| y.1.clone());
                out.push((add_cval(&y.0, &delta, cfg.precision_bits), pos));
            }
        }
        ComponentKind::RationalCurve => {
            let Some((p1, p2)) = &comp.param else {
                return out;
            };
            // Parameters of y on the curve: roots of p1 − y1 close to the
            // second coordinate as well.
            let p1_shift = match &y.0 {
                CVal::Exact(z) => p1.sub(&UPoly::constant(z.clone())),
                CVal::Approx(_) => return out,
            };
            let Ok(roots) = locate_roots(&p1_shift, cfg) else {
                return out;
            };
            for r in roots {
                let s = match r {
                    solver::Located::Exact(z, _) => CVal::Exact(z),
                    solver::Located::Numeric(z, _) => CVal::Approx(z),
                };
                let y2v = upoly_eval_cval(p2, &s, cfg.precision_bits);
                if !y2v.eq_val(&y.1, cfg.component_residual) {
                    continue;
                }
                for (n, d) in deltas {
                    let delta = CVal::Exact(crate::polyring::grq(BigRational::new(
                        BigInt::from(n),
                        BigInt::from(d),
                    )));
                    let sd = add_cval(&s, &delta, cfg.precision_bits);
                    out.push((
                        upoly_eval_cval(p1, &sd, cfg.precision_bits),
                        upoly_eval_cval(p2, &sd, cfg.precision_bits),
                    ));
                }
                if !out.is_empty() {
                    break;
                }
            }
        }
    }
    out.truncate(5);
    out
}

fn add_cval(a: &CVal, b: &CVal, prec: u32) -> CVal {
    match (a, b) {
        (CVal::Exact(x), CVal::Exact(y)) => CVal::Exact(x.clone() + y.clone()),
        _ => CVal::Approx(to_complex(a, prec) + to_complex(b, prec)),
    }
}

/// Full verification of one candidate.
pub fn verify_candidate(
    prep: &Prepared,
    components: &[JelonekComponent],
    y: &CPoint,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> (VerifyVerdict, Tier) {
    let (att, tier) = attained(prep, y, cfg, rng);
    match att {
        None => (VerifyVerdict::Inconclusive, tier),
        Some(true) => (VerifyVerdict::Attained, tier),
        Some(false) => {
            // Empty fiber: certify isolation against incident components.
            let incident: Vec<&JelonekComponent> = components
                .iter()
                .filter(|c| c.contains_point(y, cfg.component_residual))
                .collect();
            let mut nonisolated = false;
            let mut inconclusive = false;
            for comp in incident {
                let neighbors = component_neighbors(comp, y, cfg);
                if neighbors.is_empty() {
                    inconclusive = true;
                    continue;
                }
                let mut all_empty = true;
                for n in &neighbors {
                    match neighbor_attained(prep, n, rng) {
                        Some(true) => {
                            all_empty = false;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            inconclusive = true;
                            all_empty = false;
                            break;
                        }
                    }
                }
                if all_empty {
                    nonisolated = true;
                }
            }
            if nonisolated {
                (VerifyVerdict::MissingNonisolated, tier)
            } else if inconclusive {
                (VerifyVerdict::Inconclusive, tier)
            } else {
                (VerifyVerdict::MissingIsolated, tier)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The report
// ---------------------------------------------------------------------------

fn point_sort_key(p: &CPoint) -> (bool, i64, i64, i64, i64) {
    let (a, b) = p.0.to_f64();
    let (c, d) = p.1.to_f64();
    let s = 1e9;
    (
        !p.0.is_exact() || !p.1.is_exact(),
        (a * s) as i64,
        (b * s) as i64,
        (c * s) as i64,
        (d * s) as i64,
    )
}

/// Aggregate candidates, verify them, and assemble the bound table.
pub fn missing_points(
    prep: &Prepared,
    components: &[JelonekComponent],
    kf: &[KfPoint],
    mu: Option<i64>,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> MissingReport {
    let mut candidates = Vec::new();
    candidates.extend(node_candidates(prep, cfg, rng));
    candidates.extend(cross_candidates(prep, cfg));
    candidates.extend(cusp_candidates(kf));

    // Deduplicate, merging sources.
    let mut merged: Vec<(CPoint, Vec<CandidateSource>, Vec<Pt>)> = Vec::new();
    'cand: for c in candidates {
        for (p, sources, normals) in merged.iter_mut() {
            if points_close(p, &c.point, cfg.zero_threshold) {
                if c.point.0.is_exact() && c.point.1.is_exact() && !(p.0.is_exact() && p.1.is_exact())
                {
                    *p = c.point.clone();
                }
                if !sources.contains(&c.source) {
                    sources.push(c.source);
                }
                for n in &c.face_normals {
                    if !normals.contains(n) {
                        normals.push(*n);
                    }
                }
                continue 'cand;
            }
        }
        merged.push((c.point, vec![c.source], c.face_normals));
    }
    merged.sort_by_key(|(p, _, _)| point_sort_key(p));

    let mut verified = Vec::new();
    let mut rejected = Vec::new();
    for (point, sources, normals) in merged {
        let (verdict, tier) = verify_candidate(prep, components, &point, cfg, rng);
        match verdict {
            VerifyVerdict::MissingIsolated => {
                let in_kf = kf
                    .iter()
                    .any(|k| points_close(&k.point, &point, cfg.zero_threshold));
                let on_cross = on_cross(prep, &point, cfg);
                verified.push(VerifiedPoint {
                    point,
                    tier,
                    sources,
                    in_kf,
                    on_cross,
                });
            }
            v => {
                let reason = match v {
                    VerifyVerdict::Attained => "fiber is non-empty".to_string(),
                    VerifyVerdict::MissingNonisolated => {
                        "missing but lies on a one-dimensional missing locus".to_string()
                    }
                    VerifyVerdict::Inconclusive => "numeric tier inconclusive".to_string(),
                    VerifyVerdict::MissingIsolated => unreachable!(),
                };
                rejected.push(RejectedCandidate {
                    candidate: Candidate {
                        point,
                        source: sources[0],
                        face_normals: normals,
                    },
                    reason,
                });
            }
        }
    }

    let bounds = bounds_table(prep, &verified, mu);
    MissingReport {
        verified,
        rejected,
        bounds,
        complete: prep.verdict.verdict == Verdict::GenericallyNonproper,
    }
}

fn on_cross(prep: &Prepared, y: &CPoint, cfg: &NumericConfig) -> bool {
    let (c1, c2) = prep.original.value_at_origin();
    y.0.eq_val(&CVal::Exact(c1), cfg.zero_threshold) || y.1.eq_val(&CVal::Exact(c2), cfg.zero_threshold)
}

fn bounds_table(prep: &Prepared, verified: &[VerifiedPoint], mu: Option<i64>) -> BoundsTable {
    let (d1, d2, d) = prep.original.degrees();
    let total = verified.len() as i64;
    let count_kf = verified.iter().filter(|v| v.in_kf).count() as i64;
    let count_cross = verified.iter().filter(|v| !v.in_kf && v.on_cross).count() as i64;
    let count_interior = total - count_kf - count_cross;
    let six_deg = 6 * d;
    let big = |x: i64| BigRational::from(BigInt::from(x));
    let formula_11 = mu.filter(|&m| m >= 2).map(|m| {
        big(d1 * d2) / big(m * (m - 1)) + big(2 * (d1 + d2))
    });
    let prop25a = mu
        .filter(|&m| m >= 2)
        .map(|m| big(3 * d1 * d2) / big(4 * m * (m - 1)));
    let prop22 = d1 + d2;
    let prop24 = d1 + d2;
    let prop25b = 2 * d1.max(d2);
    let le_rat = |n: i64, b: &Option<BigRational>| b.as_ref().map_or(true, |b| &big(n) <= b);
    BoundsTable {
        deg_f1: d1,
        deg_f2: d2,
        deg_f: d,
        mu,
        six_deg,
        formula_11: formula_11.clone(),
        prop22,
        prop24,
        prop25a: prop25a.clone(),
        prop25b,
        count_total: total,
        count_kf,
        count_cross,
        count_interior,
        six_deg_ok: total <= six_deg,
        formula_11_ok: le_rat(total, &formula_11),
        prop22_ok: count_kf <= prop22,
        prop24_ok: count_cross <= prop24,
        prop25_ok: le_rat(count_interior, &prop25a) && count_interior <= prop25b,
    }
}
