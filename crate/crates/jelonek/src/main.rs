//! Command-line front end: analyze map files, query individual stages, and
//! generate family instances.

use clap::{Args, Parser, Subcommand};
use jelonek::analysis::{self, CVal, Verdict};
use jelonek::config::NumericConfig;
use jelonek::families;
use jelonek::missing::VerifyVerdict;
use jelonek::parse::{parse_map, print_map};
use jelonek::polyring::{fmt_rat, gri, GaussRat, PolyMap};
use jelonek::report;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::Read;
use std::process::ExitCode;
use std::str::FromStr;

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_DEGENERATE: u8 = 2;
const EXIT_NOT_GENERIC: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "jelonek",
    about = "Analyzer for non-properness and isolated missing points of polynomial maps C^2 -> C^2"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Map file, or '-' for stdin.
    input: String,
    /// Emit JSON instead of a text summary.
    #[arg(long)]
    json: bool,
    /// Seed for every randomized choice.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Working precision in bits for the numeric tier.
    #[arg(long, default_value_t = 128)]
    precision: u32,
    /// Override the torus/axis zero threshold.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Exit with status 3 if the genericity verdict fails.
    #[arg(long)]
    require_generic: bool,
    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Full,
    Faces,
    MixedVolume,
    Jelonek,
    Missing,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report.
    Analyze(CommonOpts),
    /// Face pairs of the support with classifications.
    Faces(CommonOpts),
    /// Mixed volume of the (augmented) support pair.
    MixedVolume(CommonOpts),
    /// Jelonek components.
    Jelonek(CommonOpts),
    /// Verified isolated missing points with bound checks.
    Missing(CommonOpts),
    /// Check one target point: attained or missing.
    Verify {
        #[command(flatten)]
        common: CommonOpts,
        /// Target point "a,b" with rational (or a+bi Gaussian) coordinates.
        #[arg(long)]
        point: String,
    },
    /// Emit a map file for a family instance.
    Generate {
        /// thm14 | lemma23 | fixture
        family: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Fixture id: 1.2, 1.3 or 1.4.
        #[arg(long)]
        id: Option<String>,
        /// Comma-separated rational roots of P (thm14).
        #[arg(long)]
        p_roots: Option<String>,
        /// Comma-separated rational roots of Q (thm14).
        #[arg(long)]
        q_roots: Option<String>,
        /// Comma-separated rational coefficients of P, ascending (lemma23).
        #[arg(long)]
        p_coeffs: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("stdin: {e}"))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn write_output(out: &Option<String>, content: &str) -> Result<(), String> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content).map_err(|e| format!("{path}: {e}")),
    }
}

fn config_from(opts: &CommonOpts) -> NumericConfig {
    let mut cfg = NumericConfig::with_seed(opts.seed);
    cfg.precision_bits = opts.precision;
    if let Some(t) = opts.tolerance {
        cfg.zero_threshold = t;
    }
    cfg
}

fn load_map(opts: &CommonOpts) -> Result<PolyMap, u8> {
    let src = read_input(&opts.input).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })?;
    parse_map(&src).map_err(|e| {
        eprintln!("error: {e}");
        EXIT_USAGE
    })
}

fn run_section(opts: &CommonOpts, section: Section) -> u8 {
    let map = match load_map(opts) {
        Ok(m) => m,
        Err(c) => return c,
    };
    let cfg = config_from(opts);
    let a = match analysis::analyze(&map, &cfg) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_DEGENERATE;
        }
    };
    if let Verdict::Degenerate(msg) = &a.prepared.verdict.verdict {
        if !a.prepared.verdict.dominant || a.prepared.mixed_volume.is_zero() {
            eprintln!("error: degenerate map: {msg}");
            return EXIT_DEGENERATE;
        }
    }
    if opts.require_generic && a.prepared.verdict.verdict != Verdict::GenericallyNonproper {
        eprintln!("error: genericity verdict failed");
        return EXIT_NOT_GENERIC;
    }
    let full = report::build_report(&a, &cfg);
    let content = if opts.json {
        let json = match section {
            Section::Full => serde_json::to_value(&full),
            Section::Faces => serde_json::to_value(&full.faces),
            Section::MixedVolume => serde_json::to_value(&full.mixed_volume),
            Section::Jelonek => serde_json::to_value(&full.jelonek),
            Section::Missing => serde_json::to_value(&full.missing),
        }
        .expect("serialization");
        serde_json::to_string_pretty(&json).expect("serialization") + "\n"
    } else {
        match section {
            Section::MixedVolume => format!("{}\n", fmt_rat(&a.prepared.mixed_volume)),
            _ => report::human_summary(&a),
        }
    };
    match write_output(&opts.out, &content) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    BigRational::from_str(s.trim()).map_err(|e| format!("bad rational '{s}': {e}"))
}

fn parse_gauss_coord(s: &str) -> Result<GaussRat, String> {
    let t = s.trim();
    if let Some(stripped) = t.strip_suffix('i') {
        // Split a+bi / a-bi at the last top-level sign.
        let chars: Vec<char> = stripped.chars().collect();
        for idx in (1..chars.len()).rev() {
            if chars[idx] == '+' || chars[idx] == '-' {
                let re: String = chars[..idx].iter().collect();
                let im_mag: String = chars[idx + 1..].iter().collect();
                let sign = BigRational::from_integer(if chars[idx] == '-' {
                    (-1).into()
                } else {
                    1.into()
                });
                let im = if im_mag.is_empty() {
                    BigRational::from_integer(1.into())
                } else {
                    parse_rational(&im_mag)?
                };
                return Ok(gri(parse_rational(&re)?, im * sign));
            }
        }
        let im = if stripped.is_empty() {
            BigRational::from_integer(1.into())
        } else {
            parse_rational(stripped)?
        };
        return Ok(gri(BigRational::zero(), im));
    }
    Ok(gri(parse_rational(t)?, BigRational::zero()))
}

fn parse_point(s: &str) -> Result<(GaussRat, GaussRat), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected 'a,b'".into());
    }
    Ok((parse_gauss_coord(parts[0])?, parse_gauss_coord(parts[1])?))
}

fn parse_rational_list(s: &str) -> Result<Vec<BigRational>, String> {
    s.split(',').map(parse_rational).collect()
}

fn cmd_verify(common: &CommonOpts, point: &str) -> u8 {
    let map = match load_map(common) {
        Ok(m) => m,
        Err(c) => return c,
    };
    let cfg = config_from(common);
    let target = match parse_point(point) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    match analysis::analyze(&map, &cfg) {
        Ok(a) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x9e37_79b9);
            let (verdict, _) = jelonek::missing::verify_candidate(
                &a.prepared,
                &a.components,
                &(CVal::Exact(target.0), CVal::Exact(target.1)),
                &cfg,
                &mut rng,
            );
            let text = match verdict {
                VerifyVerdict::Attained => "attained",
                VerifyVerdict::MissingIsolated => "missing (isolated)",
                VerifyVerdict::MissingNonisolated => "missing (non-isolated)",
                VerifyVerdict::Inconclusive => "inconclusive",
            };
            println!("{text}");
            if verdict == VerifyVerdict::Inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_DEGENERATE
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    family: &str,
    n: Option<usize>,
    k: Option<usize>,
    id: Option<String>,
    p_roots: Option<String>,
    q_roots: Option<String>,
    p_coeffs: Option<String>,
    seed: u64,
    out: Option<String>,
) -> u8 {
    let fail = |e: String| {
        eprintln!("error: {e}");
        EXIT_USAGE
    };
    let map = match family {
        "fixture" => {
            let Some(id) = id else {
                return fail("fixture requires --id".into());
            };
            match families::fixture(&id) {
                Ok(m) => m,
                Err(e) => return fail(e.to_string()),
            }
        }
        "thm14" => {
            let n = n.unwrap_or(1);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut taken: Vec<BigRational> = Vec::new();
            let mut draw_list = |given: Option<String>| -> Result<Vec<BigRational>, String> {
                match given {
                    Some(s) => parse_rational_list(&s),
                    None => {
                        let mut roots = Vec::new();
                        while roots.len() < n {
                            let r = BigRational::new(
                                rng.gen_range(1i64..=9).into(),
                                rng.gen_range(1i64..=3).into(),
                            );
                            if !taken.contains(&r) && !roots.contains(&r) {
                                roots.push(r);
                            }
                        }
                        taken.extend(roots.iter().cloned());
                        Ok(roots)
                    }
                }
            };
            let pr = match draw_list(p_roots) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            let qr = match draw_list(q_roots) {
                Ok(v) => v,
                Err(e) => return fail(e),
            };
            match families::make_thm14(n, &pr, &qr) {
                Ok(m) => m,
                Err(e) => return fail(e.to_string()),
            }
        }
        "lemma23" => {
            let k = k.unwrap_or(1);
            let coeffs: Vec<GaussRat> = match p_coeffs {
                Some(s) => match parse_rational_list(&s) {
                    Ok(v) => v.into_iter().map(|r| gri(r, BigRational::zero())).collect(),
                    Err(e) => return fail(e),
                },
                None => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..=k)
                        .map(|_| gri(BigRational::from_integer(rng.gen_range(1i64..=5).into()), BigRational::zero()))
                        .collect()
                }
            };
            match families::make_lemma23(k, &coeffs) {
                Ok(m) => m,
                Err(e) => return fail(e.to_string()),
            }
        }
        other => return fail(format!("unknown family '{other}' (thm14 | lemma23 | fixture)")),
    };
    match write_output(&out, &print_map(&map)) {
        Ok(()) => EXIT_OK,
        Err(e) => fail(e),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Analyze(opts) => run_section(&opts, Section::Full),
        Command::Faces(opts) => run_section(&opts, Section::Faces),
        Command::MixedVolume(opts) => run_section(&opts, Section::MixedVolume),
        Command::Jelonek(opts) => run_section(&opts, Section::Jelonek),
        Command::Missing(opts) => run_section(&opts, Section::Missing),
        Command::Verify { common, point } => cmd_verify(&common, &point),
        Command::Generate {
            family,
            n,
            k,
            id,
            p_roots,
            q_roots,
            p_coeffs,
            seed,
            out,
        } => cmd_generate(&family, n, k, id, p_roots, q_roots, p_coeffs, seed, out),
    };
    ExitCode::from(code)
}
