//! JSON report emission.
//!
//! Field order is fixed by the struct declarations and all maps are sorted,
//! so the same seed produces byte-identical output. Rational values are
//! emitted as "num/den" strings, complex values as {"re": …, "im": …}.

use crate::analysis::{Analysis, CVal, ComponentKind, Verdict};
use crate::config::NumericConfig;
use crate::faceclass::Side;
use crate::lattice::Pt;
use crate::missing::{CandidateSource, Tier};
use crate::parse::print_poly;
use crate::polyring::{fmt_rat, GaussRat, Poly, UPoly};
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Serialize)]
pub struct ReportJson {
    pub schema_version: u32,
    pub seed: u64,
    pub precision_bits: u32,
    pub map: MapJson,
    pub supports: SupportsJson,
    pub mixed_volume: String,
    pub mu: Option<i64>,
    pub mu_matches_mixed_volume: Option<bool>,
    pub genericity: GenericityJson,
    pub faces: Vec<FaceJson>,
    pub jelonek: Vec<ComponentJson>,
    pub kf_points: Vec<PointJson>,
    pub missing: MissingJson,
}

#[derive(Serialize)]
pub struct MapJson {
    pub f1: String,
    pub f2: String,
    pub deg_f1: i64,
    pub deg_f2: i64,
    pub deg_f: i64,
    pub shift: ValueJson,
    pub shift2: ValueJson,
}

#[derive(Serialize)]
pub struct SupportsJson {
    pub a1: Vec<[i64; 2]>,
    pub a2: Vec<[i64; 2]>,
}

#[derive(Serialize)]
pub struct GenericityJson {
    pub dominant: bool,
    pub origin_in_torus: bool,
    pub nonproper: bool,
    pub verdict: String,
    pub sys_f1f2: SysJson,
    pub sys_f1j: SysJson,
    pub sys_f2j: SysJson,
}

#[derive(Serialize)]
pub struct SysJson {
    pub count: Option<i64>,
    pub target: Option<i64>,
    pub bernstein: String,
}

#[derive(Serialize)]
pub struct FaceJson {
    pub normal: [i64; 2],
    pub dim: usize,
    pub g1: Vec<[i64; 2]>,
    pub g2: Vec<[i64; 2]>,
    pub semi_origin: bool,
    pub origin: bool,
    pub half_origin: bool,
    pub coordinate: bool,
    pub relevant: bool,
    pub long: bool,
    pub side: Side,
}

#[derive(Serialize)]
pub struct ComponentJson {
    pub kind: ComponentKind,
    pub face_normal: [i64; 2],
    /// Implicit polynomial as sorted (exponent, coefficient) terms.
    pub implicit: Vec<TermJson>,
    pub param: Option<[Vec<ValueJson>; 2]>,
    pub position: Option<ValueJson>,
}

#[derive(Serialize)]
pub struct TermJson {
    pub exp: [i64; 2],
    pub coeff: ValueJson,
}

#[derive(Serialize, Clone)]
pub struct ValueJson {
    pub re: String,
    pub im: String,
    pub exact: bool,
}

#[derive(Serialize)]
pub struct PointJson {
    pub y1: ValueJson,
    pub y2: ValueJson,
}

#[derive(Serialize)]
pub struct MissingJson {
    pub complete: bool,
    pub verified: Vec<VerifiedJson>,
    pub rejected: Vec<RejectedJson>,
    pub bounds: BoundsJson,
}

#[derive(Serialize)]
pub struct VerifiedJson {
    pub point: PointJson,
    pub tier: Tier,
    pub sources: Vec<CandidateSource>,
    pub region: String,
}

#[derive(Serialize)]
pub struct RejectedJson {
    pub point: PointJson,
    pub reason: String,
}

#[derive(Serialize)]
pub struct BoundsJson {
    pub deg_f1: i64,
    pub deg_f2: i64,
    pub deg_f: i64,
    pub mu: Option<i64>,
    pub six_deg: i64,
    pub formula_11: Option<String>,
    pub prop22: i64,
    pub prop24: i64,
    pub prop25a: Option<String>,
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

fn rat_str(r: &BigRational) -> String {
    fmt_rat(r)
}

fn gauss_value(z: &GaussRat) -> ValueJson {
    ValueJson {
        re: rat_str(&z.re),
        im: rat_str(&z.im),
        exact: true,
    }
}

fn cval_value(v: &CVal) -> ValueJson {
    match v {
        CVal::Exact(z) => gauss_value(z),
        CVal::Approx(z) => {
            let (re, im) = crate::solver::complex_to_f64(z);
            ValueJson {
                re: format!("{re:.15e}"),
                im: format!("{im:.15e}"),
                exact: false,
            }
        }
    }
}

fn poly_terms(p: &Poly) -> Vec<TermJson> {
    p.terms()
        .map(|(e, c)| TermJson {
            exp: [e.x, e.y],
            coeff: gauss_value(c),
        })
        .collect()
}

fn upoly_values(p: &UPoly) -> Vec<ValueJson> {
    p.coeffs().iter().map(gauss_value).collect()
}

fn pts(points: impl Iterator<Item = Pt>) -> Vec<[i64; 2]> {
    points.map(|p| [p.x, p.y]).collect()
}

pub fn build_report(a: &Analysis, cfg: &NumericConfig) -> ReportJson {
    let prep = &a.prepared;
    let (d1, d2, d) = prep.original.degrees();
    let verdict_str = match &prep.verdict.verdict {
        Verdict::GenericallyNonproper => "generically_nonproper".to_string(),
        Verdict::ProperCandidate => "proper_candidate".to_string(),
        Verdict::Degenerate(msg) => format!("degenerate: {msg}"),
    };
    let sys = |s: &crate::analysis::SysCheck| SysJson {
        count: s.count,
        target: s.target,
        bernstein: rat_str(&s.bernstein),
    };
    ReportJson {
        schema_version: SCHEMA_VERSION,
        seed: cfg.seed,
        precision_bits: cfg.precision_bits,
        map: MapJson {
            f1: print_poly(&prep.original.f1),
            f2: print_poly(&prep.original.f2),
            deg_f1: d1,
            deg_f2: d2,
            deg_f: d,
            shift: gauss_value(&prep.shift.0),
            shift2: gauss_value(&prep.shift.1),
        },
        supports: SupportsJson {
            a1: pts(prep.support.a1.points()),
            a2: pts(prep.support.a2.points()),
        },
        mixed_volume: rat_str(&prep.mixed_volume),
        mu: a.mu,
        mu_matches_mixed_volume: a.mu_matches_mixed_volume,
        genericity: GenericityJson {
            dominant: prep.verdict.dominant,
            origin_in_torus: prep.verdict.origin_in_torus,
            nonproper: prep.verdict.nonproper,
            verdict: verdict_str,
            sys_f1f2: sys(&prep.verdict.sys_f1f2),
            sys_f1j: sys(&prep.verdict.sys_f1j),
            sys_f2j: sys(&prep.verdict.sys_f2j),
        },
        faces: prep
            .faces
            .iter()
            .map(|(f, c)| FaceJson {
                normal: [f.normal.x, f.normal.y],
                dim: f.dim,
                g1: pts(f.g1.points()),
                g2: pts(f.g2.points()),
                semi_origin: c.semi_origin,
                origin: c.origin,
                half_origin: c.half_origin,
                coordinate: c.coordinate,
                relevant: c.relevant,
                long: c.long,
                side: c.side,
            })
            .collect(),
        jelonek: a
            .components
            .iter()
            .map(|c| ComponentJson {
                kind: c.kind,
                face_normal: [c.face_normal.x, c.face_normal.y],
                implicit: poly_terms(&c.implicit),
                param: c
                    .param
                    .as_ref()
                    .map(|(p1, p2)| [upoly_values(p1), upoly_values(p2)]),
                position: c.position.as_ref().map(cval_value),
            })
            .collect(),
        kf_points: a
            .kf
            .iter()
            .filter(|k| !k.degenerate_face)
            .map(|k| PointJson {
                y1: cval_value(&k.point.0),
                y2: cval_value(&k.point.1),
            })
            .collect(),
        missing: MissingJson {
            complete: a.missing.complete,
            verified: a
                .missing
                .verified
                .iter()
                .map(|v| VerifiedJson {
                    point: PointJson {
                        y1: cval_value(&v.point.0),
                        y2: cval_value(&v.point.1),
                    },
                    tier: v.tier,
                    sources: v.sources.clone(),
                    region: if v.in_kf {
                        "kf".to_string()
                    } else if v.on_cross {
                        "cross".to_string()
                    } else {
                        "interior".to_string()
                    },
                })
                .collect(),
            rejected: a
                .missing
                .rejected
                .iter()
                .map(|r| RejectedJson {
                    point: PointJson {
                        y1: cval_value(&r.candidate.point.0),
                        y2: cval_value(&r.candidate.point.1),
                    },
                    reason: r.reason.clone(),
                })
                .collect(),
            bounds: BoundsJson {
                deg_f1: a.missing.bounds.deg_f1,
                deg_f2: a.missing.bounds.deg_f2,
                deg_f: a.missing.bounds.deg_f,
                mu: a.missing.bounds.mu,
                six_deg: a.missing.bounds.six_deg,
                formula_11: a.missing.bounds.formula_11.as_ref().map(rat_str),
                prop22: a.missing.bounds.prop22,
                prop24: a.missing.bounds.prop24,
                prop25a: a.missing.bounds.prop25a.as_ref().map(rat_str),
                prop25b: a.missing.bounds.prop25b,
                count_total: a.missing.bounds.count_total,
                count_kf: a.missing.bounds.count_kf,
                count_cross: a.missing.bounds.count_cross,
                count_interior: a.missing.bounds.count_interior,
                six_deg_ok: a.missing.bounds.six_deg_ok,
                formula_11_ok: a.missing.bounds.formula_11_ok,
                prop22_ok: a.missing.bounds.prop22_ok,
                prop24_ok: a.missing.bounds.prop24_ok,
                prop25_ok: a.missing.bounds.prop25_ok,
            },
        },
    }
}

pub fn to_json_string(r: &ReportJson) -> String {
    serde_json::to_string_pretty(r).expect("report serialization")
}

/// Human-readable summary (target coordinates printed as s, t).
pub fn human_summary(a: &Analysis) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let prep = &a.prepared;
    let (d1, d2, d) = prep.original.degrees();
    let _ = writeln!(out, "deg f1 = {d1}, deg f2 = {d2}, deg f = {d}");
    let _ = writeln!(out, "mixed volume V(A) = {}", rat_str(&prep.mixed_volume));
    if let Some(mu) = a.mu {
        let _ = writeln!(out, "topological degree mu = {mu}");
    }
    let verdict = match &prep.verdict.verdict {
        Verdict::GenericallyNonproper => "generically non-proper".to_string(),
        Verdict::ProperCandidate => "proper candidate (no relevant faces)".to_string(),
        Verdict::Degenerate(m) => format!("degenerate ({m})"),
    };
    let _ = writeln!(out, "verdict: {verdict}");
    if !a.components.is_empty() {
        let _ = writeln!(out, "Jelonek components:");
        for c in &a.components {
            let desc = match c.kind {
                ComponentKind::RationalCurve => {
                    format!("rational curve: {} = 0", poly_st(&c.implicit))
                }
                ComponentKind::VerticalLine => format!("vertical line: {} = 0", poly_st(&c.implicit)),
                ComponentKind::HorizontalLine => {
                    format!("horizontal line: {} = 0", poly_st(&c.implicit))
                }
            };
            let _ = writeln!(out, "  - {desc}");
        }
    }
    if !a.kf.is_empty() {
        let _ = writeln!(out, "K_f points:");
        for k in &a.kf {
            if k.degenerate_face {
                let _ = writeln!(out, "  - degenerate face {:?}", k.face_normal);
            } else {
                let _ = writeln!(out, "  - {}", point_str(&k.point));
            }
        }
    }
    let _ = writeln!(
        out,
        "missing points ({}; {}):",
        a.missing.verified.len(),
        if a.missing.complete {
            "complete"
        } else {
            "best-effort"
        }
    );
    for v in &a.missing.verified {
        let region = if v.in_kf {
            "in K_f"
        } else if v.on_cross {
            "on the cross"
        } else {
            "interior"
        };
        let _ = writeln!(
            out,
            "  - {} [{}, {}]",
            point_str(&v.point),
            match v.tier {
                Tier::Exact => "exact",
                Tier::Numeric => "numeric",
            },
            region
        );
    }
    let b = &a.missing.bounds;
    let _ = writeln!(
        out,
        "bounds: |E| = {} <= 6*deg f = {} ({}), Eq.(1.1) = {} ({})",
        b.count_total,
        b.six_deg,
        if b.six_deg_ok { "ok" } else { "VIOLATED" },
        b.formula_11
            .as_ref()
            .map(rat_str)
            .unwrap_or_else(|| "undefined".into()),
        if b.formula_11_ok { "ok" } else { "VIOLATED" },
    );
    out
}

fn poly_st(p: &Poly) -> String {
    p.display("s", "t")
}

fn point_str(p: &crate::analysis::CPoint) -> String {
    let f = |v: &CVal| match v {
        CVal::Exact(z) => {
            if z.im.is_zero() {
                rat_str(&z.re)
            } else {
                format!("{}+{}i", rat_str(&z.re), rat_str(&z.im))
            }
        }
        CVal::Approx(z) => {
            let (re, im) = crate::solver::complex_to_f64(z);
            if im.abs() < 1e-12 {
                format!("{re:.6}")
            } else {
                format!("{re:.6}+{im:.6}i")
            }
        }
    };
    format!("({}, {})", f(&p.0), f(&p.1))
}
