//! `sdl`: command-line front end.
//!
//! Exit codes: 0 success, 2 solver failure, 3 invalid input. Errors go to stderr as one JSON object.

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use schwarz_lab::coding::{rational_from_code, AngleCode, RationalAngle, RhoAngle, E_inverse};
use schwarz_lab::export::{scan_csv, to_json, write_png, write_sidecar, write_text};
use schwarz_lab::lamination::parameter_lamination;
use schwarz_lab::point::Finite;
use schwarz_lab::render::{self, Overlay, RenderJob, Target, Window};
use schwarz_lab::schwarz::{self, SchwarzMap};
use schwarz_lab::straightening::{chi_center, chi_inverse_center, index_experiment};
use schwarz_lab::tolerances::Tolerances;
use schwarz_lab::tricorn::{self, AntiPolynomial};
use schwarz_lab::Error;
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "sdl", version, about = "Schwarz reflections, the Tricorn and their straightening")]
struct Cli {
    /// Output file (PNG for renders, JSON/CSV otherwise; stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key=value file whose keys mirror the long flags.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (SDL_THREADS when absent).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, default_value_t = 200)]
    max_iter: usize,
    /// default, strict or coarse.
    #[arg(long, global = true, default_value = "default")]
    tol_profile: String,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Debug, Serialize)]
struct View {
    /// Window center RE,IM.
    #[arg(long, allow_hyphen_values = true)]
    center: Option<String>,
    /// Window width in plane units (square window unless --height).
    #[arg(long)]
    width: Option<f64>,
    #[arg(long)]
    height: Option<f64>,
    /// Pixels per side.
    #[arg(long, default_value_t = 800)]
    resolution: usize,
}

#[derive(Copy, Clone, Debug, ValueEnum, Serialize)]
enum Family {
    S,
    T,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Which {
    Cs,
    L,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Connectedness locus of the Schwarz family, coloured by tile address.
    RenderCs {
        #[command(flatten)]
        view: View,
        /// Also write the per-pixel scan as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Dynamical plane of F_a.
    RenderDyn {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[command(flatten)]
        view: View,
        /// Dynamical rays to overlay, as itineraries or vertex codes.
        #[arg(long, value_delimiter = ';')]
        rays: Vec<String>,
    },
    /// Tricorn parameter plane, with optional parameter rays.
    RenderTricorn {
        #[command(flatten)]
        view: View,
        /// Parameter rays to overlay, as p/q.
        #[arg(long, value_delimiter = ',')]
        rays: Vec<String>,
    },
    /// Real basilica limb with the 1/3 and 2/3 parameter rays.
    RenderLimb {
        #[command(flatten)]
        view: View,
    },
    /// Trace one ray; for the Tricorn without --param, a parameter ray.
    Ray {
        #[arg(long)]
        family: Family,
        /// p/q or an itinerary such as |213 or 2@1/3.
        #[arg(long)]
        angle: String,
        #[arg(long, default_value_t = 40)]
        depth: usize,
        /// Parameter of the dynamical plane, RE,IM.
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
    },
    /// Center of a hyperbolic component by Newton from a seed.
    Center {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        period: usize,
        #[arg(long, allow_hyphen_values = true)]
        seed: String,
    },
    /// Straightening of a center: χ(a), or χ⁻¹(c) with --c.
    Chi {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<String>,
    },
    /// Parabolic indices on the real period-3 components of both families.
    IndexExp,
    /// Parameter lamination of the Schwarz (cs) or Tricorn (l) model.
    Lamination {
        #[arg(long)]
        which: Which,
        #[arg(long, default_value_t = 6)]
        max_period: usize,
        /// Also draw the disk as SVG.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Parameter scan as CSV over RE0,IM0,RE1,IM1,N.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
    },
}

struct Ctx {
    out: Option<PathBuf>,
    max_iter: usize,
    tol: Tolerances,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn parse_complex(s: &str) -> Result<Complex64, Error> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|_| bad(format!("bad number {t:?}")));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(bad(format!("expected RE,IM, got {s:?}"))),
    }
}

/// Up to 12 decimals with trailing zeros removed.
fn fmt_real(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn fmt_complex(z: Complex64) -> String {
    if z.im.abs() < 1e-13 {
        fmt_real(z.re)
    } else {
        format!("{},{}", fmt_real(z.re), fmt_real(z.im))
    }
}

/// Stdout line; a closed pipe is not an error.
fn say(text: &str) {
    use std::io::Write;
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit(ctx: &Ctx, text: &str) -> Result<(), Error> {
    match &ctx.out {
        Some(p) => write_text(text, p),
        None => {
            say(text);
            Ok(())
        }
    }
}

fn job(ctx: &Ctx, target: Target, view: &View) -> Result<RenderJob, Error> {
    let mut job = RenderJob::standard(target, view.resolution);
    if let Some(c) = &view.center {
        job.window.center = parse_complex(c)?;
    }
    if let Some(w) = view.width {
        job.window = Window::new(job.window.center, w, view.height.unwrap_or(w));
    } else if let Some(h) = view.height {
        job.window.height = h;
    }
    job.max_iter = ctx.max_iter;
    job.tolerances = ctx.tol;
    job.validate()?;
    Ok(job)
}

fn save_image(ctx: &Ctx, img: &render::Image, job: &RenderJob, default: &str) -> Result<(), Error> {
    let path = ctx.out.clone().unwrap_or_else(|| PathBuf::from(default));
    write_png(img, &path)?;
    write_sidecar(&path, job)?;
    #[derive(Serialize)]
    struct Done {
        path: String,
        width: usize,
        height: usize,
    }
    say(&to_json("render", &Done { path: path.display().to_string(), width: img.width, height: img.height })?);
    Ok(())
}

fn rational_or_code(text: &str) -> Result<(RationalAngle, AngleCode), Error> {
    if text.contains('/') && !text.contains('@') {
        let t = RationalAngle::parse(text)?;
        let code = E_inverse(&t).code;
        Ok((t, code))
    } else {
        let code = AngleCode::parse(text)?;
        Ok((rational_from_code(&code)?, code))
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let tol = Tolerances::profile(&cli.tol_profile).ok_or_else(|| bad(format!("unknown tolerance profile {:?}", cli.tol_profile)))?;
    let ctx = Ctx { out: cli.out, max_iter: cli.max_iter, tol };
    match cli.cmd {
        Cmd::RenderCs { view, csv } => {
            let job = job(&ctx, Target::CsLocus, &view)?;
            let (img, scan) = render::render_cs_locus(&job)?;
            if let Some(p) = csv {
                write_text(&scan_csv(&scan), &p)?;
            }
            save_image(&ctx, &img, &job, "cs_locus.png")
        }
        Cmd::RenderDyn { a, view, rays } => {
            let a = parse_complex(&a)?;
            let mut job = job(&ctx, Target::DynPlane(a), &view)?;
            for r in rays {
                job.overlays.push(Overlay::DynamicalRay(rational_or_code(&r)?.1));
            }
            let img = render::render_dynamical_plane(a, &job)?;
            save_image(&ctx, &img, &job, "dyn_plane.png")
        }
        Cmd::RenderTricorn { view, rays } => {
            let mut job = job(&ctx, Target::Tricorn, &view)?;
            for r in rays {
                job.overlays.push(Overlay::ParameterRay(RationalAngle::parse(&r)?));
            }
            let img = render::render_tricorn(&job)?;
            save_image(&ctx, &img, &job, "tricorn.png")
        }
        Cmd::RenderLimb { view } => {
            let job = job(&ctx, Target::BasilicaLimb, &view)?;
            let img = render::render_basilica_limb(&job)?;
            save_image(&ctx, &img, &job, "basilica_limb.png")
        }
        Cmd::Ray { family, angle, depth, param } => {
            let (theta, code) = rational_or_code(&angle)?;
            let text = match family {
                Family::S => {
                    let a = param.as_deref().map(parse_complex).transpose()?.unwrap_or(Complex64::new(0.1875, 0.0));
                    let map = SchwarzMap::with_tolerances(Finite(a), ctx.tol)?;
                    to_json("schwarz-ray", &schwarz::trace_dynamical_ray(&map, &code, depth)?)?
                }
                Family::T => match param {
                    Some(c) => {
                        let poly = AntiPolynomial::new(parse_complex(&c)?);
                        to_json("tricorn-ray", &tricorn::trace_dynamical_ray(&poly, &theta, depth)?)?
                    }
                    None => to_json("tricorn-parameter-ray", &tricorn::trace_parameter_ray(&theta, depth)?)?,
                },
            };
            emit(&ctx, &text)
        }
        Cmd::Center { family, period, seed } => {
            let seed = parse_complex(&seed)?;
            let (name, z) = match family {
                Family::S => ("a", schwarz::find_center(period, Finite(seed))?.finite().ok_or_else(|| bad("center at ∞"))?),
                Family::T => ("c", tricorn::find_center(period, seed)?),
            };
            say(&format!("{name}={}", fmt_complex(z)));
            if ctx.out.is_some() {
                #[derive(Serialize)]
                struct C {
                    family: Family,
                    period: usize,
                    center: Complex64,
                }
                emit(&ctx, &to_json("center", &C { family, period, center: z })?)?;
            }
            Ok(())
        }
        Cmd::Chi { a, c } => {
            let r = match (a, c) {
                (Some(a), None) => chi_center(parse_complex(&a)?)?,
                (None, Some(c)) => chi_inverse_center(parse_complex(&c)?)?,
                _ => return Err(bad("give exactly one of --a and --c")),
            };
            say(&format!("a={} c={}", fmt_complex(r.a), fmt_complex(r.c)));
            if ctx.out.is_some() {
                emit(&ctx, &to_json("straightening", &r)?)?;
            }
            Ok(())
        }
        Cmd::IndexExp => emit(&ctx, &to_json("index-experiment", &index_experiment()?)?),
        Cmd::Lamination { which, max_period, svg } => {
            let (text, drawing) = match which {
                Which::Cs => {
                    let lam = parameter_lamination::<RhoAngle>(max_period);
                    (to_json("lamination-cs", &lam)?, render::lamination_svg(&lam, 800.0))
                }
                Which::L => {
                    let lam = parameter_lamination::<RationalAngle>(max_period);
                    (to_json("lamination-l", &lam)?, render::lamination_svg(&lam, 800.0))
                }
            };
            if let Some(p) = svg {
                write_text(&drawing, &p)?;
            }
            emit(&ctx, &text)
        }
        Cmd::Scan { grid } => {
            let v: Vec<f64> = grid.split(',').map(|t| t.trim().parse::<f64>()).collect::<Result<_, _>>().map_err(|_| bad(format!("bad grid {grid:?}")))?;
            let [re0, im0, re1, im1, n] = v.as_slice() else {
                return Err(bad("grid is RE0,IM0,RE1,IM1,N"));
            };
            if *n < 1.0 || n.fract() != 0.0 {
                return Err(bad("grid size must be a positive integer"));
            }
            let n = *n as usize;
            let center = Complex64::new((re0 + re1) / 2.0, (im0 + im1) / 2.0);
            let mut job = RenderJob::new(Target::CsLocus, Window::new(center, (re1 - re0).abs(), (im1 - im0).abs()), (n, n));
            job.max_iter = ctx.max_iter;
            job.tolerances = ctx.tol;
            let (_, rows) = render::render_cs_locus(&job)?;
            emit(&ctx, scan_csv(&rows).trim_end())
        }
    }
}

/// Reads key=value lines; blank lines and lines starting with # are skipped.
fn read_config(path: &str) -> Result<Vec<(String, String)>, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| bad(format!("config {path}: {e}")))?;
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| bad(format!("config {path}:{}: expected key=value", n + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

/// Splice config entries in right after the subcommand name, so flags given on the command line
/// (which come later) take precedence. Keys the subcommand does not know are ignored.
fn with_config(args: Vec<String>) -> Result<Vec<String>, Error> {
    let pos = args.iter().position(|a| a == "--config" || a.starts_with("--config="));
    let Some(pos) = pos else { return Ok(args) };
    let path = match args[pos].split_once('=') {
        Some((_, p)) => p.to_string(),
        None => args.get(pos + 1).cloned().ok_or_else(|| bad("--config needs a file"))?,
    };
    let entries = read_config(&path)?;
    let cmd = Cli::command();
    let sub_at = args.iter().position(|a| cmd.find_subcommand(a).is_some());
    let Some(sub_at) = sub_at else { return Ok(args) };
    let sub = cmd.find_subcommand(&args[sub_at]).unwrap();
    let known: Vec<String> = cmd.get_arguments().chain(sub.get_arguments()).filter_map(|a| a.get_long().map(String::from)).collect();
    let mut spliced: Vec<String> = args[..=sub_at].to_vec();
    for (k, v) in entries {
        if k != "config" && known.contains(&k) {
            spliced.push(format!("--{k}={v}"));
        }
    }
    spliced.extend_from_slice(&args[sub_at + 1..]);
    Ok(spliced)
}

fn fail(kind: &str, message: &str, code: u8) -> ExitCode {
    let msg = serde_json::json!({ "error": kind, "message": message });
    eprintln!("{msg}");
    ExitCode::from(code)
}

fn error_exit(e: &Error) -> ExitCode {
    let code = if e.is_solver_failure() { 2 } else { 3 };
    fail(if code == 2 { "solver_failure" } else { "invalid_input" }, &e.to_string(), code)
}

fn main() -> ExitCode {
    let args = match with_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => return error_exit(&e),
    };
    let matches = Cli::command().args_override_self(true).mut_subcommands(|s| s.args_override_self(true)).try_get_matches_from(args);
    let cli = match matches.and_then(|m| Cli::from_arg_matches(&m)) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            return fail("usage", e.to_string().trim(), 3);
        }
    };
    let threads = cli.threads.or_else(|| std::env::var("SDL_THREADS").ok().and_then(|s| s.parse().ok()));
    if let Some(n) = threads {
        if n == 0 {
            return error_exit(&bad("thread count must be positive"));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => error_exit(&e),
    }
}
