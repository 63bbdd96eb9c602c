//! Map-level analysis: dominance, topological degree, the generic
//! non-properness verdict, Jelonek components and critical values at
//! infinity.
//!
//! Analysis works on the translated map f + c with f(0,0) + c in the torus
//! (c = 0 whenever possible); every reported point, parametrization and
//! implicit polynomial is translated back to the original target
//! coordinates.

use crate::config::NumericConfig;
use crate::faceclass::{classify_face, relevant_faces, FaceClass, RelevantFaces};
use crate::lattice::{FacePair, Pt, SupportPair, ORIGIN};
use crate::polyring::{
    ginv, gpow, gr, grq, rat, GaussRat, JacobianData, Poly, PolyMap, UPoly, Var,
};
use crate::solver::{
    self, cabs, complex_to_f64, gauss_to_complex, locate_roots, Located, SolveOutcome,
    SolverError,
};
use crate::toric::{build_transform, UnimodularTransform};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rug::Complex as RComplex;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone)]
pub enum AnalysisError {
    #[error("component polynomial is zero")]
    ZeroComponent,
    #[error(transparent)]
    Solver(#[from] SolverError),
}

// ---------------------------------------------------------------------------
// Values that are exact when the algebra allows it
// ---------------------------------------------------------------------------

/// A complex value carried either exactly (Gaussian rational) or as a
/// high-precision approximation.
#[derive(Clone, Debug)]
pub enum CVal {
    Exact(GaussRat),
    Approx(RComplex),
}

impl CVal {
    pub fn zero() -> CVal {
        CVal::Exact(GaussRat::zero())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CVal::Exact(_))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        match self {
            CVal::Exact(z) => (rat_f64(&z.re), rat_f64(&z.im)),
            CVal::Approx(z) => complex_to_f64(z),
        }
    }

    pub fn dist_f64(&self, o: &CVal) -> f64 {
        let (a, b) = self.to_f64();
        let (c, d) = o.to_f64();
        ((a - c).powi(2) + (b - d).powi(2)).sqrt()
    }

    pub fn eq_val(&self, o: &CVal, tol: f64) -> bool {
        match (self, o) {
            (CVal::Exact(a), CVal::Exact(b)) => a == b,
            _ => self.dist_f64(o) < tol,
        }
    }
}

pub fn rat_f64(r: &BigRational) -> f64 {
    let prec = 64;
    crate::solver::rat_to_float(r, prec).to_f64()
}

/// Snap a numeric value to the unique nearby small rational when one
/// exists; exact values pass through. Downstream verification is exact, so
/// a snap can only ever be confirmed, never silently trusted.
pub fn normalize_cval(v: CVal) -> CVal {
    match v {
        CVal::Exact(z) => CVal::Exact(z),
        CVal::Approx(z) => match crate::solver::reconstruct_gauss(&z, 1_000_000) {
            Some(g) => CVal::Exact(g),
            None => CVal::Approx(z),
        },
    }
}

/// A target-plane point.
pub type CPoint = (CVal, CVal);

pub fn point_key(p: &CPoint) -> (i64, i64, i64, i64) {
    let scale = 1e12;
    let (a, b) = p.0.to_f64();
    let (c, d) = p.1.to_f64();
    (
        (a * scale).round() as i64,
        (b * scale).round() as i64,
        (c * scale).round() as i64,
        (d * scale).round() as i64,
    )
}

pub fn points_close(a: &CPoint, b: &CPoint, tol: f64) -> bool {
    a.0.eq_val(&b.0, tol) && a.1.eq_val(&b.1, tol)
}

// ---------------------------------------------------------------------------
// Genericity
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    GenericallyNonproper,
    ProperCandidate,
    Degenerate(String),
}

/// Outcome of the Def.-2.1 check: one entry per clause.
#[derive(Clone, Debug)]
pub struct GenericityVerdict {
    pub dominant: bool,
    pub origin_in_torus: bool,
    pub nonproper: bool,
    /// f1 = f2 = 0 against V(A).
    pub sys_f1f2: SysCheck,
    /// f1 = |Jac f| = 0 against V(A1, Σ).
    pub sys_f1j: SysCheck,
    /// f2 = |Jac f| = 0 against V(A2, Σ).
    pub sys_f2j: SysCheck,
    pub verdict: Verdict,
}

/// One auxiliary-system clause of the genericity check.
///
/// The pass criterion is maximality with respect to the support: the map's
/// torus count must match the count attained by generic coefficient draws
/// on the same support pair. The Bernstein mixed volume is reported
/// alongside; for Jacobian systems it can exceed every achievable count,
/// since the Jacobian's coefficients are not free.
#[derive(Clone, Debug)]
pub struct SysCheck {
    pub count: Option<i64>,
    /// Family-generic count (the target).
    pub target: Option<i64>,
    /// The raw Bernstein bound V(·,·).
    pub bernstein: BigRational,
}

impl SysCheck {
    pub fn passes(&self) -> bool {
        matches!((self.count, self.target), (Some(a), Some(b)) if a == b)
    }
}

/// Random map supported exactly on the given pair.
fn random_map_on_support(pair: &SupportPair, rng: &mut ChaCha8Rng) -> PolyMap {
    let draw = |s: &crate::lattice::Support, rng: &mut ChaCha8Rng| {
        Poly::from_terms(s.points().map(|p| (p, random_gauss(rng))))
    };
    PolyMap::new(draw(&pair.a1, rng), draw(&pair.a2, rng))
}

/// Torus counts of the three genericity systems for generic coefficients
/// on the given support pair: the first agreeing pair of draws wins.
fn family_generic_counts(
    pair: &SupportPair,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> (Option<i64>, Option<i64>, Option<i64>) {
    let mut seen: Vec<(Option<i64>, Option<i64>, Option<i64>)> = Vec::new();
    for _ in 0..5 {
        let g = random_map_on_support(pair, rng);
        let jac = g.jacobian();
        if jac.det.is_zero() {
            continue;
        }
        let triple = (
            count_or_none(&g.f1, &g.f2, cfg, rng),
            count_or_none(&g.f1, &jac.det, cfg, rng),
            count_or_none(&g.f2, &jac.det, cfg, rng),
        );
        if triple.0.is_none() || triple.1.is_none() || triple.2.is_none() {
            continue;
        }
        if seen.contains(&triple) {
            return triple;
        }
        seen.push(triple);
    }
    (None, None, None)
}

/// Everything the face-level pipeline needs about one relevant
/// one-dimensional face of the translated map.
#[derive(Clone, Debug)]
pub struct FaceCtx {
    pub face: FacePair,
    pub class: FaceClass,
    pub transform: UnimodularTransform,
    /// Cleared transforms of the translated components (no y terms).
    pub g1: Poly,
    pub g2: Poly,
    /// Clearing shifts; the y_i monomial in the transformed system is
    /// s^{r_i.x} t^{r_i.y}.
    pub r1: Pt,
    pub r2: Pt,
}

impl FaceCtx {
    pub fn slice(&self, member: usize, level: i64) -> UPoly {
        let g = if member == 1 { &self.g1 } else { &self.g2 };
        let cs = g.coeffs_in(Var::V);
        if level as usize >= cs.len() {
            return UPoly::zero();
        }
        cs[level as usize].as_univariate(Var::U).unwrap()
    }

    /// Does the y-term of the given member survive at t = 0?
    pub fn y_in_slice0(&self, member: usize) -> bool {
        let r = if member == 1 { self.r1 } else { self.r2 };
        r.y == 0
    }

    pub fn y_monomial(&self, member: usize) -> Pt {
        if member == 1 {
            self.r1
        } else {
            self.r2
        }
    }
}

/// Normalized analysis context for one map.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub original: PolyMap,
    /// The translated map f + shift.
    pub map: PolyMap,
    pub shift: (GaussRat, GaussRat),
    pub support: SupportPair,
    pub jacobian: JacobianData,
    pub mixed_volume: BigRational,
    pub verdict: GenericityVerdict,
    /// Every non-trivial face with its classification.
    pub faces: Vec<(FacePair, FaceClass)>,
    /// Relevant one-dimensional faces with their transforms.
    pub relevant: Vec<FaceCtx>,
    pub corner_relevant: bool,
    pub long_left: usize,
    pub long_right: usize,
}

pub fn is_dominant(f: &PolyMap) -> bool {
    !f.jacobian().det.is_zero()
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    loop {
        let n = rng.gen_range(-24i64..=24);
        let d = rng.gen_range(1i64..=6);
        if n != 0 {
            return rat(n, d);
        }
    }
}

fn random_gauss(rng: &mut ChaCha8Rng) -> GaussRat {
    grq(random_rational(rng))
}

/// Fibre cardinality over a generic target: count_all of f − y at three
/// agreeing random rational targets.
pub fn topological_degree(
    f: &PolyMap,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> Result<i64, AnalysisError> {
    let mut counts: Vec<i64> = Vec::new();
    for _ in 0..30 {
        let y1 = random_gauss(rng);
        let y2 = random_gauss(rng);
        let p = f.f1.sub(&Poly::constant(y1));
        let q = f.f2.sub(&Poly::constant(y2));
        match solver::count_affine_solutions(&p, &q, rng) {
            Ok(n) => counts.push(n),
            Err(SolverError::PositiveDimensional) => continue,
            Err(SolverError::NonConvergence(_)) => continue,
            Err(e) => return Err(e.into()),
        }
        if counts.len() >= 3 {
            let last3 = &counts[counts.len() - 3..];
            if last3[0] == last3[1] && last3[1] == last3[2] {
                return Ok(last3[0]);
            }
        }
    }
    Err(AnalysisError::Solver(SolverError::Inconsistent(
        "topological degree did not stabilize over random targets".into(),
    )))
}

fn count_or_none(
    p: &Poly,
    q: &Poly,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> Option<i64> {
    solver::count_torus_solutions(p, q, cfg, rng).ok()
}

/// Build the translated analysis context, drawing translations until the
/// genericity clauses pass (or reporting how they fail).
pub fn prepare(
    f: &PolyMap,
    cfg: &NumericConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Prepared, AnalysisError> {
    if f.f1.is_zero() || f.f2.is_zero() {
        return Err(AnalysisError::ZeroComponent);
    }
    let jacobian = f.jacobian();
    let dominant = !jacobian.det.is_zero();

    // Candidate translations: prefer c = 0 when f(0,0) is already in the
    // torus, then seeded random small shifts.
    let (c1, c2) = f.value_at_origin();
    let mut shifts: Vec<(GaussRat, GaussRat)> = Vec::new();
    if !c1.is_zero() && !c2.is_zero() {
        shifts.push((GaussRat::zero(), GaussRat::zero()));
    }
    for _ in 0..6 {
        let s1 = random_gauss(rng);
        let s2 = random_gauss(rng);
        if (c1.clone() + s1.clone()).is_zero() || (c2.clone() + s2.clone()).is_zero() {
            continue;
        }
        shifts.push((s1, s2));
    }

    let mut best: Option<Prepared> = None;
    for shift in shifts {
        let map = f.translate(&shift);
        let support = map.support_pair(false).map_err(|_| AnalysisError::ZeroComponent)?;
        let mixed_volume = support.mixed_volume();
        let independent = !mixed_volume.is_zero();

        let rel = if independent {
            relevant_faces(&support).ok()
        } else {
            None
        };
        let nonproper = rel.as_ref().is_some_and(|r| !r.faces.is_empty());

        let v_a = mixed_volume.clone();
        let (v1j, v2j) = match &jacobian.sigma {
            Some(sigma) => (
                SupportPair::new(support.a1.clone(), sigma.clone()).mixed_volume(),
                SupportPair::new(support.a2.clone(), sigma.clone()).mixed_volume(),
            ),
            None => (BigRational::zero(), BigRational::zero()),
        };

        let mut verdict = GenericityVerdict {
            dominant,
            origin_in_torus: true,
            nonproper,
            sys_f1f2: SysCheck {
                count: None,
                target: None,
                bernstein: v_a.clone(),
            },
            sys_f1j: SysCheck {
                count: None,
                target: None,
                bernstein: v1j.clone(),
            },
            sys_f2j: SysCheck {
                count: None,
                target: None,
                bernstein: v2j.clone(),
            },
            verdict: Verdict::Degenerate("unevaluated".into()),
        };

        let mut failure: Option<String> = None;
        if !dominant {
            failure = Some("map is not dominant".into());
        } else if !independent {
            failure = Some("support pair is dependent".into());
        }

        if failure.is_none() {
            let (t_ff, t_1j, t_2j) = family_generic_counts(&support, cfg, rng);
            verdict.sys_f1f2.count = count_or_none(&map.f1, &map.f2, cfg, rng);
            verdict.sys_f1f2.target = t_ff;
            verdict.sys_f1j.count = count_or_none(&map.f1, &jacobian.det, cfg, rng);
            verdict.sys_f1j.target = t_1j;
            verdict.sys_f2j.count = count_or_none(&map.f2, &jacobian.det, cfg, rng);
            verdict.sys_f2j.target = t_2j;
            if !verdict.sys_f1f2.passes() {
                failure = Some(format!(
                    "f1 = f2 = 0 attains {:?} torus solutions, support-generic count {:?}, V(A) = {}",
                    verdict.sys_f1f2.count, verdict.sys_f1f2.target, v_a
                ));
            } else if !verdict.sys_f1j.passes() {
                failure = Some(format!(
                    "f1 = |Jac f| = 0 attains {:?} torus solutions, support-generic count {:?}, V(A1,Σ) = {}",
                    verdict.sys_f1j.count, verdict.sys_f1j.target, v1j
                ));
            } else if !verdict.sys_f2j.passes() {
                failure = Some(format!(
                    "f2 = |Jac f| = 0 attains {:?} torus solutions, support-generic count {:?}, V(A2,Σ) = {}",
                    verdict.sys_f2j.count, verdict.sys_f2j.target, v2j
                ));
            }
        }

        verdict.verdict = match failure {
            None if nonproper => Verdict::GenericallyNonproper,
            None => Verdict::ProperCandidate,
            Some(msg) => Verdict::Degenerate(msg),
        };

        let faces: Vec<(FacePair, FaceClass)> = if independent {
            support
                .enumerate_face_pairs()
                .into_iter()
                .map(|fp| {
                    let class = classify_face(&support, &fp);
                    (fp, class)
                })
                .collect()
        } else {
            Vec::new()
        };

        let (relevant, corner_relevant, long_left, long_right) = match &rel {
            Some(RelevantFaces {
                faces: rf,
                long_left,
                long_right,
            }) => {
                let mut ctxs = Vec::new();
                let mut corner = false;
                for (fp, class) in rf {
                    if fp.dim == 0 {
                        corner = true;
                        continue;
                    }
                    let transform = build_transform(&support, fp).expect("dim-1 face");
                    let (g1, r1) = transform.apply_poly(&map.f1);
                    let (g2, r2) = transform.apply_poly(&map.f2);
                    ctxs.push(FaceCtx {
                        face: fp.clone(),
                        class: *class,
                        transform,
                        g1,
                        g2,
                        r1,
                        r2,
                    });
                }
                (ctxs, corner, *long_left, *long_right)
            }
            None => (Vec::new(), false, 0, 0),
        };

        let prepared = Prepared {
            original: f.clone(),
            map,
            shift,
            support,
            jacobian: jacobian.clone(),
            mixed_volume,
            verdict,
            faces,
            relevant,
            corner_relevant,
            long_left,
            long_right,
        };
        let ok = matches!(
            prepared.verdict.verdict,
            Verdict::GenericallyNonproper | Verdict::ProperCandidate
        );
        if ok {
            return Ok(prepared);
        }
        best = Some(prepared);
    }
    Ok(best.expect("at least one translation attempted"))
}

/// Def. 2.1 as a standalone check.
pub fn genericity_check(
    f: &PolyMap,
    cfg: &NumericConfig,
) -> Result<GenericityVerdict, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    Ok(prepare(f, cfg, &mut rng)?.verdict)
}

// ---------------------------------------------------------------------------
// Jelonek components
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    RationalCurve,
    VerticalLine,
    HorizontalLine,
}

/// One component of the Jelonek set, in original target coordinates.
#[derive(Clone, Debug)]
pub struct JelonekComponent {
    pub kind: ComponentKind,
    pub face_normal: Pt,
    /// s ↦ (p1(s), p2(s)) for rational curves.
    pub param: Option<(UPoly, UPoly)>,
    /// Fixed-coordinate value for lines.
    pub position: Option<CVal>,
    /// Exact implicit polynomial in (y1, y2); for a numeric line position
    /// this is the exact defining factor of the whole line family.
    pub implicit: Poly,
}

impl JelonekComponent {
    /// Residual of a point against the component.
    pub fn contains_point(&self, p: &CPoint, tol: f64) -> bool {
        match (&p.0, &p.1) {
            (CVal::Exact(a), CVal::Exact(b)) => self.implicit.eval_exact(a, b).is_zero(),
            _ => {
                let (a, b) = (p.0.to_f64(), p.1.to_f64());
                let prec = 128;
                let za = RComplex::with_val(prec, (a.0, a.1));
                let zb = RComplex::with_val(prec, (b.0, b.1));
                let mut acc = RComplex::with_val(prec, (0, 0));
                for (e, c) in self.implicit.terms() {
                    let mut term = gauss_to_complex(c, prec);
                    for _ in 0..e.x {
                        term *= za.clone();
                    }
                    for _ in 0..e.y {
                        term *= zb.clone();
                    }
                    acc += term;
                }
                cabs(&acc).to_f64() < tol
            }
        }
    }
}

/// Exact implicitization of s ↦ (p1(s), p2(s)) by resultant elimination of
/// the parameter, with content normalization.
pub fn implicitize_curve(p1: &UPoly, p2: &UPoly) -> Poly {
    let d1 = p2.deg().max(0) as usize; // degree in y1
    let nodes: Vec<i64> = (0..=d1 as i64).collect();
    let mut samples: Vec<(i64, UPoly)> = Vec::new();
    let mut max_len = 0usize;
    for &a in &nodes {
        let pa = Poly::from_univariate(&p1.sub(&UPoly::constant(gr(a))), Var::U);
        let qa = Poly::from_univariate(p2, Var::U).sub(&Poly::monomial(Pt::new(0, 1), gr(1)));
        let r = solver::resultant(&pa, &qa, Var::U).expect("parameter elimination");
        max_len = max_len.max(r.coeffs().len());
        samples.push((a, r));
    }
    // Coefficient-wise Lagrange interpolation over the y1 grid.
    let mut implicit = Poly::zero();
    for k in 0..max_len {
        let pts: Vec<(i64, GaussRat)> = samples.iter().map(|(a, r)| (*a, r.coeff(k))).collect();
        let coeff_poly = lagrange(&pts);
        for (j, c) in coeff_poly.coeffs().iter().enumerate() {
            implicit.add_term(Pt::new(j as i64, k as i64), c.clone());
        }
    }
    integer_normalize(&implicit)
}

fn lagrange(samples: &[(i64, GaussRat)]) -> UPoly {
    let mut acc = UPoly::zero();
    for (i, (xi, yi)) in samples.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut basis = UPoly::one();
        let mut denom = GaussRat::from(gr(1));
        for (j, (xj, _)) in samples.iter().enumerate() {
            if i != j {
                basis = basis.mul(&UPoly::new(vec![gr(-*xj), gr(1)]));
                denom = denom * gr(*xi - *xj);
            }
        }
        acc = acc.add(&basis.scale(&(yi.clone() * ginv(&denom))));
    }
    acc
}

/// Clear denominators and divide by the integer content; fix the sign of
/// the lexicographically smallest term to be positive real when possible.
pub fn integer_normalize(p: &Poly) -> Poly {
    use num_bigint::BigInt;
    use num_integer::Integer as _;
    if p.is_zero() {
        return p.clone();
    }
    let mut lcm = BigInt::from(1);
    for (_, c) in p.terms() {
        lcm = lcm.lcm(c.re.denom());
        lcm = lcm.lcm(c.im.denom());
    }
    let scaled = p.scale(&grq(BigRational::from(lcm)));
    let mut gcd = BigInt::zero();
    for (_, c) in scaled.terms() {
        gcd = gcd.gcd(c.re.numer());
        gcd = gcd.gcd(c.im.numer());
    }
    if gcd.is_zero() {
        return scaled;
    }
    let out = scaled.scale(&ginv(&grq(BigRational::from(gcd))));
    let neg = out
        .terms()
        .next()
        .map(|(_, c)| {
            if c.re.is_zero() {
                c.im.is_negative()
            } else {
                c.re.is_negative()
            }
        })
        .unwrap_or(false);
    if neg {
        out.neg()
    } else {
        out
    }
}

fn upoly_sub_const(p: &UPoly, c: &GaussRat) -> UPoly {
    p.sub(&UPoly::constant(c.clone()))
}

/// Evaluate a polynomial at a located (exact or numeric) value.
pub fn upoly_eval_cval(p: &UPoly, x: &CVal, prec: u32) -> CVal {
    match x {
        CVal::Exact(z) => CVal::Exact(p.eval(z)),
        CVal::Approx(z) => {
            let coeffs: Vec<RComplex> = p
                .coeffs()
                .iter()
                .map(|c| gauss_to_complex(c, prec))
                .collect();
            let mut acc = RComplex::with_val(prec, (0, 0));
            for c in coeffs.iter().rev() {
                acc = acc * z + c;
            }
            CVal::Approx(acc)
        }
    }
}

fn located_to_cval(l: &Located) -> CVal {
    match l {
        Located::Exact(z, _) => CVal::Exact(z.clone()),
        Located::Numeric(z, _) => CVal::Approx(z.clone()),
    }
}

/// The Jelonek components contributed by one relevant one-dimensional face.
fn components_for_face(
    ctx: &FaceCtx,
    shift: &(GaussRat, GaussRat),
    map: &PolyMap,
    cfg: &NumericConfig,
) -> Result<Vec<JelonekComponent>, AnalysisError> {
    let mut out = Vec::new();
    let g10 = ctx.slice(1, 0);
    let g20 = ctx.slice(2, 0);
    if ctx.class.origin && ctx.class.long {
        // Rational curve y = (g10(s), g20(s)); de-translate.
        // Origin faces clear with r = 0, so the parametrizations are
        // honest polynomials in s.
        debug_assert_eq!(ctx.r1, ORIGIN);
        debug_assert_eq!(ctx.r2, ORIGIN);
        let p1 = upoly_sub_const(&g10, &shift.0);
        let p2 = upoly_sub_const(&g20, &shift.1);
        let implicit = implicitize_curve(&p1, &p2);
        out.push(JelonekComponent {
            kind: ComponentKind::RationalCurve,
            face_normal: ctx.face.normal,
            param: Some((p1, p2)),
            position: None,
            implicit,
        });
    } else if ctx.class.half_origin && ctx.class.long {
        // One member is origin-free: its slice is y-free and pins the
        // parameter; the other sweeps a line per root.
        let missing = if ctx.face.g1.contains_origin() { 2 } else { 1 };
        let (pin, sweep, v_sweep, cshift, kind) = if missing == 2 {
            (
                &g20,
                &g10,
                ctx.y_monomial(1).x,
                &shift.0,
                ComponentKind::VerticalLine,
            )
        } else {
            (
                &g10,
                &g20,
                ctx.y_monomial(2).x,
                &shift.1,
                ComponentKind::HorizontalLine,
            )
        };
        for root in locate_roots(pin, cfg)? {
            if !solver::located_is_nonzero(&root, cfg) {
                continue;
            }
            let s = located_to_cval(&root);
            // position = sweep(s)/s^v − shift.
            let position = match &s {
                CVal::Exact(z) => {
                    let val = sweep.eval(z) * ginv(&gpow(z, v_sweep as u32)) - cshift.clone();
                    CVal::Exact(val)
                }
                CVal::Approx(z) => {
                    let prec = cfg.precision_bits;
                    let sv = match upoly_eval_cval(sweep, &s, prec) {
                        CVal::Approx(v) => v,
                        CVal::Exact(_) => unreachable!(),
                    };
                    let mut denom = RComplex::with_val(prec, (1, 0));
                    for _ in 0..v_sweep {
                        denom *= z.clone();
                    }
                    CVal::Approx(sv / denom - gauss_to_complex(cshift, prec))
                }
            };
            let position = normalize_cval(position);
            let implicit = match &position {
                CVal::Exact(pos) => {
                    let var = if kind == ComponentKind::VerticalLine {
                        Pt::new(1, 0)
                    } else {
                        Pt::new(0, 1)
                    };
                    Poly::from_terms([(var, gr(1)), (ORIGIN, -pos.clone())])
                }
                CVal::Approx(_) => line_family_implicit(pin, sweep, v_sweep, cshift, kind),
            };
            out.push(JelonekComponent {
                kind,
                face_normal: ctx.face.normal,
                param: None,
                position: Some(position),
                implicit,
            });
        }
    } else if ctx.class.relevant {
        // Short relevant face: the member equal to {(0,0)} pins its target
        // coordinate at the cross value.
        let point_member = if ctx.face.g1.hull() == [ORIGIN] {
            1
        } else if ctx.face.g2.hull() == [ORIGIN] {
            2
        } else {
            return Ok(out);
        };
        let (c_orig, kind, var) = if point_member == 1 {
            (
                map.f1.coeff(ORIGIN) - shift.0.clone(),
                ComponentKind::VerticalLine,
                Pt::new(1, 0),
            )
        } else {
            (
                map.f2.coeff(ORIGIN) - shift.1.clone(),
                ComponentKind::HorizontalLine,
                Pt::new(0, 1),
            )
        };
        let implicit = Poly::from_terms([(var, gr(1)), (ORIGIN, -c_orig.clone())]);
        out.push(JelonekComponent {
            kind,
            face_normal: ctx.face.normal,
            param: None,
            position: Some(CVal::Exact(c_orig)),
            implicit,
        });
    }
    Ok(out)
}

/// Exact product polynomial of a whole family of lines from one face:
/// Res_s(pin(s), (y + c)·s^v − sweep(s)).
fn line_family_implicit(
    pin: &UPoly,
    sweep: &UPoly,
    v: i64,
    cshift: &GaussRat,
    kind: ComponentKind,
) -> Poly {
    let yvar = if kind == ComponentKind::VerticalLine {
        Var::U
    } else {
        Var::V
    };
    // Build in (s = U, y = V) then rename.
    let p = Poly::from_univariate(pin, Var::U);
    let mut q = Poly::monomial(Pt::new(v, 1), gr(1));
    q = q.add(&Poly::monomial(Pt::new(v, 0), cshift.clone()));
    q = q.sub(&Poly::from_univariate(sweep, Var::U));
    let r = solver::resultant(&p, &q, Var::U).expect("line family eliminant");
    let out = Poly::from_univariate(&r, Var::V);
    let renamed = match yvar {
        Var::U => Poly::from_terms(out.terms().map(|(e, c)| (Pt::new(e.y, e.x), c.clone()))),
        Var::V => out,
    };
    integer_normalize(&renamed)
}

/// The Jelonek set as explicit components, deduplicated by implicit
/// polynomial.
pub fn jelonek_components(
    prep: &Prepared,
    cfg: &NumericConfig,
) -> Result<Vec<JelonekComponent>, AnalysisError> {
    let mut out: Vec<JelonekComponent> = Vec::new();
    for ctx in &prep.relevant {
        for comp in components_for_face(ctx, &prep.shift, &prep.map, cfg)? {
            let dup = out.iter().any(|c| {
                c.kind == comp.kind && c.implicit.proportional_to(&comp.implicit)
            });
            if !dup {
                out.push(comp);
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Critical values at infinity
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct KfPoint {
    pub point: CPoint,
    pub face_normal: Pt,
    /// True when the face data degenerated (a line of double roots instead
    /// of finitely many); such faces contribute no certified points.
    pub degenerate_face: bool,
}

/// K_f from the transformed double-root systems, face by face.
pub fn kf_points(prep: &Prepared, cfg: &NumericConfig) -> Result<Vec<KfPoint>, AnalysisError> {
    let mut out: Vec<KfPoint> = Vec::new();
    for ctx in &prep.relevant {
        for p in kf_for_face(ctx, &prep.shift, cfg)? {
            let dup = out
                .iter()
                .any(|q| points_close(&q.point, &p.point, cfg.zero_threshold));
            if !dup {
                out.push(p);
            }
        }
    }
    Ok(out)
}

fn cval_nonzero(v: &CVal, cfg: &NumericConfig) -> bool {
    match v {
        CVal::Exact(z) => !z.is_zero(),
        CVal::Approx(z) => cabs(z).to_f64() > cfg.zero_threshold,
    }
}

fn kf_for_face(
    ctx: &FaceCtx,
    shift: &(GaussRat, GaussRat),
    cfg: &NumericConfig,
) -> Result<Vec<KfPoint>, AnalysisError> {
    let mut out = Vec::new();
    let g10 = ctx.slice(1, 0);
    let g20 = ctx.slice(2, 0);
    let g11 = ctx.slice(1, 1);
    let g21 = ctx.slice(2, 1);
    if ctx.class.origin {
        // Both y's sit in the t⁰ slice with r = 0: the critical system is
        // triangular with D y-free.
        let d = g11.mul(&g20.derivative()).sub(&g21.mul(&g10.derivative()));
        if d.is_zero() {
            out.push(KfPoint {
                point: (CVal::zero(), CVal::zero()),
                face_normal: ctx.face.normal,
                degenerate_face: true,
            });
            return Ok(out);
        }
        if d.deg() == 0 {
            return Ok(out);
        }
        for root in locate_roots(&d, cfg)? {
            if !solver::located_is_nonzero(&root, cfg) {
                continue;
            }
            let s = located_to_cval(&root);
            let y1 = sub_shift(&upoly_eval_cval(&g10, &s, cfg.precision_bits), &shift.0);
            let y2 = sub_shift(&upoly_eval_cval(&g20, &s, cfg.precision_bits), &shift.1);
            out.push(KfPoint {
                point: (y1, y2),
                face_normal: ctx.face.normal,
                degenerate_face: false,
            });
        }
    } else if ctx.class.half_origin && ctx.class.relevant {
        // One member is origin-free; its slice pins the parameter. The
        // other target coordinate comes from the Jacobian condition, which
        // involves y only when the origin-free member's y-monomial sits at
        // t-degree 1.
        let missing = if ctx.face.g1.contains_origin() { 2 } else { 1 };
        let (pin, pin1, own, own1, rj, v_own, cs_own, cs_pin) = if missing == 2 {
            (
                &g20,
                &g21,
                &g10,
                &g11,
                ctx.r2,
                ctx.r1.x,
                &shift.0,
                &shift.1,
            )
        } else {
            (
                &g10,
                &g11,
                &g20,
                &g21,
                ctx.r1,
                ctx.r2.x,
                &shift.1,
                &shift.0,
            )
        };
        debug_assert!(rj.y >= 1);
        for root in locate_roots(pin, cfg)? {
            if !solver::located_is_nonzero(&root, cfg) {
                continue;
            }
            let s = located_to_cval(&root);
            match kf_half_origin_point(
                &s, pin, pin1, own, own1, rj, v_own, cs_own, cs_pin, cfg,
            ) {
                Some((y_own, y_pin, degenerate)) => {
                    let point = if missing == 2 {
                        (y_own, y_pin)
                    } else {
                        (y_pin, y_own)
                    };
                    out.push(KfPoint {
                        point,
                        face_normal: ctx.face.normal,
                        degenerate_face: degenerate,
                    });
                }
                None => {}
            }
        }
    }
    Ok(out)
}

fn sub_shift(v: &CVal, c: &GaussRat) -> CVal {
    normalize_cval(match v {
        CVal::Exact(z) => CVal::Exact(z.clone() - c.clone()),
        CVal::Approx(z) => CVal::Approx(z.clone() - gauss_to_complex(c, z.prec().0)),
    })
}

/// Solve the half-origin critical system at one pinned parameter root.
/// Returns (y_own, y_pin, degenerate).
#[allow(clippy::too_many_arguments)]
fn kf_half_origin_point(
    s: &CVal,
    pin: &UPoly,
    pin1: &UPoly,
    own: &UPoly,
    own1: &UPoly,
    rj: Pt,
    v_own: i64,
    cs_own: &GaussRat,
    cs_pin: &GaussRat,
    cfg: &NumericConfig,
) -> Option<(CVal, CVal, bool)> {
    let prec = cfg.precision_bits;
    // y_own = own(s)/s^{v_own} − shift.
    let own_at = upoly_eval_cval(own, s, prec);
    let e11 = {
        // ∂s of (own − y_own s^{v_own}) at t=0 evaluated at s — with
        // y_own substituted this is own' − v·own/s.
        let d = upoly_eval_cval(&own.derivative(), s, prec);
        if v_own == 0 {
            d
        } else {
            match (&d, &own_at, s) {
                (CVal::Exact(dv), CVal::Exact(ov), CVal::Exact(sv)) => CVal::Exact(
                    dv.clone() - gr(v_own) * ov.clone() * ginv(sv),
                ),
                _ => {
                    let dv = to_approx(&d, prec);
                    let ov = to_approx(&own_at, prec);
                    let sv = to_approx(&cval_clone(s), prec);
                    CVal::Approx(dv - RComplex::with_val(prec, (v_own as i32, 0)) * ov / sv)
                }
            }
        }
    };
    let e12 = upoly_eval_cval(own1, s, prec);
    let e21 = upoly_eval_cval(&pin.derivative(), s, prec);
    let e22_const = upoly_eval_cval(pin1, s, prec);
    // D = e11·(e22_const − y_pin·w·s^{v_pin}·[w=1]) − e12·e21.
    let w = rj.y;
    let acc = cval_sub(&cval_mul(&e11, &e22_const, prec), &cval_mul(&e12, &e21, prec), prec);
    if w == 1 {
        // coefficient of y_pin: −e11·s^{v_pin}
        let sv = cval_pow(s, rj.x as u32, prec);
        let coeff = cval_mul(&e11, &sv, prec);
        if !cval_nonzero(&coeff, cfg) {
            return if cval_nonzero(&acc, cfg) {
                None
            } else {
                Some((CVal::zero(), CVal::zero(), true))
            };
        }
        let y_pin_translated = cval_div(&acc, &coeff, prec);
        let y_own_translated = if v_own == 0 {
            own_at
        } else {
            cval_div(&own_at, &cval_pow(s, v_own as u32, prec), prec)
        };
        Some((
            sub_shift(&y_own_translated, cs_own),
            sub_shift(&y_pin_translated, cs_pin),
            false,
        ))
    } else {
        // D is y-free: a common root would produce a whole line inside K_f.
        if cval_nonzero(&acc, cfg) {
            None
        } else {
            Some((CVal::zero(), CVal::zero(), true))
        }
    }
}

/// Check that the Jelonek components do not depend on the choice of the
/// transform inside the face's family: rebuild every face context with the
/// alternate completion e2 − e1 (also valid for the cone condition) and
/// compare the resulting implicit polynomials up to scalar.
pub fn transform_choice_independent(
    prep: &Prepared,
    cfg: &NumericConfig,
) -> Result<bool, AnalysisError> {
    use crate::toric::Mat2;
    let reference = jelonek_components(prep, cfg)?;
    let mut alt_prep = prep.clone();
    for ctx in &mut alt_prep.relevant {
        let e2 = ctx.transform.e2.sub(ctx.transform.e1);
        let e = Mat2::from_columns(ctx.transform.e1, e2);
        let u = e.inverse_unimodular();
        let alt = UnimodularTransform {
            u,
            e1: ctx.transform.e1,
            e2,
            base: ctx.transform.base,
            normal: ctx.transform.normal,
        };
        let (g1, r1) = alt.apply_poly(&prep.map.f1);
        let (g2, r2) = alt.apply_poly(&prep.map.f2);
        *ctx = FaceCtx {
            face: ctx.face.clone(),
            class: ctx.class,
            transform: alt,
            g1,
            g2,
            r1,
            r2,
        };
    }
    let alternate = jelonek_components(&alt_prep, cfg)?;
    if reference.len() != alternate.len() {
        return Ok(false);
    }
    let components_match = reference.iter().all(|c| {
        alternate
            .iter()
            .any(|d| d.kind == c.kind && d.implicit.proportional_to(&c.implicit))
    });
    // The double-root systems see the t¹ slices, which do change with the
    // completion; the resulting points must not.
    let kf_ref = kf_points(prep, cfg)?;
    let kf_alt = kf_points(&alt_prep, cfg)?;
    let kf_match = kf_ref.len() == kf_alt.len()
        && kf_ref.iter().all(|k| {
            kf_alt
                .iter()
                .any(|l| points_close(&l.point, &k.point, cfg.zero_threshold))
        });
    Ok(components_match && kf_match)
}

// ---------------------------------------------------------------------------
// Full pipeline
// ---------------------------------------------------------------------------

/// Complete analysis of one map.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub prepared: Prepared,
    pub mu: Option<i64>,
    /// Lemma 4.4 check μ = V(A) when the verdict passed.
    pub mu_matches_mixed_volume: Option<bool>,
    pub components: Vec<JelonekComponent>,
    pub kf: Vec<KfPoint>,
    pub missing: crate::missing::MissingReport,
}

/// Run the whole pipeline: normalize, classify, build the Jelonek set and
/// K_f, then generate and verify missing-point candidates.
pub fn analyze(f: &PolyMap, cfg: &NumericConfig) -> Result<Analysis, AnalysisError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let prepared = prepare(f, cfg, &mut rng)?;
    let mu = if prepared.verdict.dominant {
        topological_degree(f, cfg, &mut rng).ok()
    } else {
        None
    };
    let green = prepared.verdict.verdict == Verdict::GenericallyNonproper;
    let mu_matches_mixed_volume = if green {
        mu.map(|m| BigRational::from(num_bigint::BigInt::from(m)) == prepared.mixed_volume)
    } else {
        None
    };
    let components = if green {
        jelonek_components(&prepared, cfg)?
    } else {
        Vec::new()
    };
    let kf = if green {
        kf_points(&prepared, cfg)?
    } else {
        Vec::new()
    };
    let missing = crate::missing::missing_points(&prepared, &components, &kf, mu, cfg, &mut rng);
    Ok(Analysis {
        prepared,
        mu,
        mu_matches_mixed_volume,
        components,
        kf,
        missing,
    })
}

fn cval_clone(v: &CVal) -> CVal {
    v.clone()
}

fn to_approx(v: &CVal, prec: u32) -> RComplex {
    match v {
        CVal::Exact(z) => gauss_to_complex(z, prec),
        CVal::Approx(z) => z.clone(),
    }
}

fn cval_mul(a: &CVal, b: &CVal, prec: u32) -> CVal {
    match (a, b) {
        (CVal::Exact(x), CVal::Exact(y)) => CVal::Exact(x.clone() * y.clone()),
        _ => CVal::Approx(to_approx(a, prec) * to_approx(b, prec)),
    }
}

fn cval_sub(a: &CVal, b: &CVal, prec: u32) -> CVal {
    match (a, b) {
        (CVal::Exact(x), CVal::Exact(y)) => CVal::Exact(x.clone() - y.clone()),
        _ => CVal::Approx(to_approx(a, prec) - to_approx(b, prec)),
    }
}

fn cval_div(a: &CVal, b: &CVal, prec: u32) -> CVal {
    match (a, b) {
        (CVal::Exact(x), CVal::Exact(y)) => CVal::Exact(x.clone() * ginv(y)),
        _ => CVal::Approx(to_approx(a, prec) / to_approx(b, prec)),
    }
}

fn cval_pow(a: &CVal, e: u32, prec: u32) -> CVal {
    match a {
        CVal::Exact(x) => CVal::Exact(gpow(x, e)),
        CVal::Approx(x) => {
            let mut acc = RComplex::with_val(prec, (1, 0));
            for _ in 0..e {
                acc *= x.clone();
            }
            CVal::Approx(acc)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{gri, rat_i64};

    fn poly(terms: &[(i64, i64, i64)]) -> Poly {
        Poly::from_terms(terms.iter().map(|&(x, y, c)| (Pt::new(x, y), gr(c))))
    }

    fn map14() -> PolyMap {
        PolyMap::new(
            poly(&[(1, 1, 1)]),
            poly(&[(0, 2, 1), (1, 3, -1), (0, 1, 2), (1, 2, -1), (1, 1, 1)]),
        )
    }

    fn map13() -> PolyMap {
        // ((1−uv)², 1 + v + uv(1−uv)²)
        PolyMap::new(
            poly(&[(0, 0, 1), (1, 1, -2), (2, 2, 1)]),
            poly(&[(0, 0, 1), (0, 1, 1), (1, 1, 1), (2, 2, -2), (3, 3, 1)]),
        )
    }

    fn map12() -> PolyMap {
        // (1 − u²v² + u²v³, 1 + uv − u³v³ + 2u³v⁴)
        PolyMap::new(
            poly(&[(0, 0, 1), (2, 2, -1), (2, 3, 1)]),
            poly(&[(0, 0, 1), (1, 1, 1), (3, 3, -1), (3, 4, 2)]),
        )
    }

    fn cfg() -> NumericConfig {
        NumericConfig::default()
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0)
    }

    #[test]
    fn dominance_examples() {
        assert!(is_dominant(&map14()));
        assert!(is_dominant(&PolyMap::new(poly(&[(1, 0, 1)]), poly(&[(0, 1, 1)]))));
        // f = (u, u²) is rank one.
        assert!(!is_dominant(&PolyMap::new(
            poly(&[(1, 0, 1)]),
            poly(&[(2, 0, 1)])
        )));
    }

    #[test]
    fn degree_of_identity_and_map14() {
        let cfg = cfg();
        let mut r = rng();
        assert_eq!(
            topological_degree(&PolyMap::new(poly(&[(1, 0, 1)]), poly(&[(0, 1, 1)])), &cfg, &mut r)
                .unwrap(),
            1
        );
        assert_eq!(topological_degree(&map14(), &cfg, &mut r).unwrap(), 2);
    }

    #[test]
    fn degree_of_map12_is_three() {
        let cfg = cfg();
        let mut r = rng();
        assert_eq!(topological_degree(&map12(), &cfg, &mut r).unwrap(), 3);
    }

    #[test]
    fn genericity_of_fixtures() {
        let cfg = cfg();
        let v = genericity_check(&map14(), &cfg).unwrap();
        assert_eq!(v.verdict, Verdict::GenericallyNonproper, "{:?}", v);
        let v = genericity_check(&map13(), &cfg).unwrap();
        assert_eq!(v.verdict, Verdict::GenericallyNonproper, "{:?}", v);
        let v = genericity_check(&map12(), &cfg).unwrap();
        assert_eq!(v.verdict, Verdict::GenericallyNonproper, "{:?}", v);
    }

    #[test]
    fn identity_map_is_proper_candidate() {
        let cfg = cfg();
        let v = genericity_check(&PolyMap::new(poly(&[(1, 0, 1)]), poly(&[(0, 1, 1)])), &cfg)
            .unwrap();
        assert_eq!(v.verdict, Verdict::ProperCandidate, "{:?}", v);
        assert!(!v.nonproper);
    }

    #[test]
    fn example_4_9_dichotomy() {
        let cfg = cfg();
        // a1·b2 − b1·a2 = 3·5 − 2·1 ≠ 0 with units a0, b0.
        let good = PolyMap::new(
            poly(&[(0, 0, 1), (1, 1, 3), (1, 2, 1)]),
            poly(&[(0, 0, 1), (1, 0, 2), (1, 1, 5)]),
        );
        assert_eq!(
            genericity_check(&good, &cfg).unwrap().verdict,
            Verdict::GenericallyNonproper
        );
        // a1·b2 − b1·a2 = 0.
        let bad = PolyMap::new(
            poly(&[(0, 0, 1), (1, 1, 2), (1, 2, 4)]),
            poly(&[(0, 0, 1), (1, 0, 1), (1, 1, 2)]),
        );
        match genericity_check(&bad, &cfg).unwrap().verdict {
            Verdict::Degenerate(_) => {}
            v => panic!("expected degenerate, got {:?}", v),
        }
    }

    #[test]
    fn jelonek_of_map14() {
        let cfg = cfg();
        let mut r = rng();
        let prep = prepare(&map14(), &cfg, &mut r).unwrap();
        assert_eq!(prep.verdict.verdict, Verdict::GenericallyNonproper);
        let comps = jelonek_components(&prep, &cfg).unwrap();
        assert_eq!(comps.len(), 2, "{:?}", comps);
        // {y1 = y2} and {y1 = 1}.
        let diag = Poly::from_terms([(Pt::new(1, 0), gr(1)), (Pt::new(0, 1), gr(-1))]);
        assert!(comps
            .iter()
            .any(|c| c.kind == ComponentKind::RationalCurve && c.implicit.proportional_to(&diag)));
        let vline = Poly::from_terms([(Pt::new(1, 0), gr(1)), (ORIGIN, gr(-1))]);
        assert!(comps
            .iter()
            .any(|c| c.kind == ComponentKind::VerticalLine && c.implicit.proportional_to(&vline)));
    }

    #[test]
    fn jelonek_of_map13_is_the_cubic() {
        let cfg = cfg();
        let mut r = rng();
        let prep = prepare(&map13(), &cfg, &mut r).unwrap();
        let comps = jelonek_components(&prep, &cfg).unwrap();
        assert_eq!(comps.len(), 1);
        // Eliminating s from y1 = (1−s)², y2 = 1 + s(1−s)² gives
        // (y1 − y2 + 1)² = y1³: 1 + 2s − 2t + t² + s² − 2st − s³.
        let cubic = Poly::from_terms([
            (ORIGIN, gr(1)),
            (Pt::new(1, 0), gr(2)),
            (Pt::new(0, 1), gr(-2)),
            (Pt::new(0, 2), gr(1)),
            (Pt::new(2, 0), gr(1)),
            (Pt::new(1, 1), gr(-2)),
            (Pt::new(3, 0), gr(-1)),
        ]);
        assert!(
            comps[0].implicit.proportional_to(&cubic),
            "got {:?}",
            comps[0].implicit
        );
    }

    #[test]
    fn jelonek_of_map12_line_and_node_curve() {
        let cfg = cfg();
        let mut r = rng();
        let prep = prepare(&map12(), &cfg, &mut r).unwrap();
        let comps = jelonek_components(&prep, &cfg).unwrap();
        // Horizontal line {y2 = 1} and the cubic 1 − 2t + t² − s² + s³.
        assert_eq!(comps.len(), 2, "{:?}", comps);
        let hline = Poly::from_terms([(Pt::new(0, 1), gr(1)), (ORIGIN, gr(-1))]);
        assert!(comps
            .iter()
            .any(|c| c.kind == ComponentKind::HorizontalLine && c.implicit.proportional_to(&hline)));
        let cubic = Poly::from_terms([
            (ORIGIN, gr(1)),
            (Pt::new(0, 1), gr(-2)),
            (Pt::new(0, 2), gr(1)),
            (Pt::new(1, 0), gr(0)),
            (Pt::new(2, 0), gr(-1)),
            (Pt::new(3, 0), gr(1)),
        ]);
        let curve = comps
            .iter()
            .find(|c| c.kind == ComponentKind::RationalCurve)
            .unwrap();
        assert!(curve.implicit.proportional_to(&cubic), "got {:?}", curve.implicit);
        // The node (0,1) lies on the curve.
        assert!(curve.contains_point(&(CVal::Exact(gr(0)), CVal::Exact(gr(1))), 1e-9));
    }

    #[test]
    fn kf_of_fixtures() {
        let cfg = cfg();
        let mut r = rng();
        let prep = prepare(&map14(), &cfg, &mut r).unwrap();
        let kf = kf_points(&prep, &cfg).unwrap();
        assert_eq!(kf.len(), 1, "{:?}", kf);
        assert!(points_close(
            &kf[0].point,
            &(CVal::Exact(gr(2)), CVal::Exact(gr(2))),
            1e-9
        ));
        assert!(kf[0].point.0.is_exact());

        let prep = prepare(&map13(), &cfg, &mut r).unwrap();
        let kf = kf_points(&prep, &cfg).unwrap();
        assert_eq!(kf.len(), 1, "{:?}", kf);
        assert!(points_close(
            &kf[0].point,
            &(CVal::Exact(gr(0)), CVal::Exact(gr(1))),
            1e-9
        ));
    }

    #[test]
    fn kf_of_map12_honest_values() {
        // Lemma 4.7 yields (2, 1±2i) from the long face and (1/2, 1) from
        // the short left face.
        let cfg = cfg();
        let mut r = rng();
        let prep = prepare(&map12(), &cfg, &mut r).unwrap();
        let kf = kf_points(&prep, &cfg).unwrap();
        assert_eq!(kf.len(), 3, "{:?}", kf);
        let expect = [
            (gr(2), gri(rat_i64(1), rat_i64(2))),
            (gr(2), gri(rat_i64(1), rat_i64(-2))),
            (gri(rat(1, 2), rat_i64(0)), gr(1)),
        ];
        for (a, b) in expect {
            assert!(
                kf.iter().any(|k| points_close(
                    &k.point,
                    &(CVal::Exact(a.clone()), CVal::Exact(b.clone())),
                    1e-9
                )),
                "missing K_f point ({:?},{:?})",
                a,
                b
            );
        }
    }

    #[test]
    fn kf_points_lie_on_jelonek_components() {
        let cfg = cfg();
        for m in [map14(), map13(), map12()] {
            let mut r = rng();
            let prep = prepare(&m, &cfg, &mut r).unwrap();
            let comps = jelonek_components(&prep, &cfg).unwrap();
            for k in kf_points(&prep, &cfg).unwrap() {
                assert!(
                    comps.iter().any(|c| c.contains_point(&k.point, 1e-8)),
                    "K_f point {:?} off the Jelonek set",
                    k
                );
            }
        }
    }

    #[test]
    fn no_relevant_faces_no_kf() {
        let cfg = cfg();
        let mut r = rng();
        let prep = prepare(
            &PolyMap::new(poly(&[(1, 0, 1)]), poly(&[(0, 1, 1)])),
            &cfg,
            &mut r,
        )
        .unwrap();
        assert!(kf_points(&prep, &cfg).unwrap().is_empty());
        assert!(jelonek_components(&prep, &cfg).unwrap().is_empty());
    }
}
