//! The `qps` command-line tool.
//!
//! Exit codes: 0 success or verified, 1 a verification came out negative,
//! 2 usage error, 3 input/output or file-format error.

pub mod io;
pub mod report;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qps_core::census::{self, CensusResult};
use qps_core::forms::{self, Family, Form, PointClass, PolarKind};
use qps_core::gf::Elem;
use qps_core::pg::{Flat, PointSet, ProjSpace};
use qps_core::spectra::{self, HyperplaneType};
use qps_core::surgery::{self, SurgeryRecord};
use qps_core::Error;

use report::Report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qps", version, about = "Quasi-polar spaces over small finite fields")]
struct Cli {
    /// Worker threads; output does not depend on it.
    #[arg(long, global = true, env = "QPS_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write a point set to a file.
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
    /// Hyperplane spectrum of a set, checked against a polar kind.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        kind: Family,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check properties of a point set
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Switching and pivoting constructions; the result is verified
    Surgery {
        #[command(subcommand)]
        op: SurgeryOp,
    },
    /// Exhaustive censuses over small spaces
    Census {
        #[command(subcommand)]
        which: CensusKind,
    },
    /// Roots of the cardinality quadratic for a kind.
    Roots(KindArgs),
}

#[derive(Debug, Subcommand)]
enum Construct {
    /// The canonical polar space of a kind.
    Canonical {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Verify {
    /// Nucleus conditions of a set in PG(2n,q); fails if an implication between them breaks.
    Conditions {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct KindArgs {
    #[arg(long)]
    kind: Family,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    q: usize,
}

impl KindArgs {
    fn resolve(&self) -> Result<(ProjSpace, PolarKind), Failure> {
        let kind = PolarKind::new(self.kind, self.m, self.q)?;
        Ok((ProjSpace::of(self.m, self.q)?, kind))
    }
}

#[derive(Debug, Clone, Args)]
struct SpaceArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    q: usize,
}

#[derive(Debug, Clone, Args)]
struct SurgeryIo {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReplacementClass {
    Internal,
    External,
}

#[derive(Debug, Subcommand)]
enum SurgeryOp {
    /// Replace the base of a singular section.
    Pivot {
        #[command(flatten)]
        io: SurgeryIo,
        #[arg(long)]
        kind: Family,
        /// Dual coordinates of a singular hyperplane; the least one by default.
        #[arg(long)]
        hyperplane: Option<String>,
        /// File with the new base; otherwise a collineation image of the old one.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Which collineation image of the base to use, from 1.
        #[arg(long, default_value_t = 1)]
        variant: usize,
    },
    /// Cone swap in a singular hyperplane of a parabolic set, q even.
    ConeSwap {
        #[command(flatten)]
        io: SurgeryIo,
        #[arg(long)]
        hyperplane: Option<String>,
    },
    /// Pivot every cone along a line of the polar space.
    RepeatedPivot {
        #[command(flatten)]
        io: SurgeryIo,
        #[arg(long)]
        kind: Family,
        #[arg(long)]
        p: Option<String>,
        #[arg(long)]
        r: Option<String>,
        /// Collineation image used at the cone of `p`; 0 keeps every base.
        #[arg(long, default_value_t = 1)]
        variant: usize,
    },
    /// Q⁺(2n+1,2) to a quasi-elliptic set.
    AffineSwitch {
        #[command(flatten)]
        io: SurgeryIo,
    },
    /// Replace a non-singular section of Q(2n,2).
    Q2Switch {
        #[command(flatten)]
        io: SurgeryIo,
        #[arg(long)]
        hyperplane: String,
        #[arg(long)]
        section: PathBuf,
    },
    /// Replace the points of Q(2n,3) in a hyperplane, off a singular sub-hyperplane.
    Q3Switch {
        #[command(flatten)]
        io: SurgeryIo,
        #[arg(long)]
        hyperplane: String,
        /// Second hyperplane cutting the sub-hyperplane; a tangent one by default.
        #[arg(long)]
        pi: Option<String>,
        #[arg(long, value_enum, default_value = "internal")]
        class: ReplacementClass,
    },
    /// Swap the tangency point of an oval for its nucleus.
    OvalSwap {
        #[command(flatten)]
        io: SurgeryIo,
        #[arg(long)]
        hyperplane: String,
    },
    /// Pivot through the nucleus so that the nucleus is lost.
    ShiftedNucleus {
        #[command(flatten)]
        io: SurgeryIo,
        #[arg(long)]
        hyperplane: Option<String>,
    },
}

#[derive(Debug, Clone, Args)]
struct CensusOut {
    #[arg(long)]
    json: Option<PathBuf>,
    /// Also write the breakdown as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum CensusKind {
    /// Replacements of a non-singular section of Q(4,2), and whether the nucleus survives
    NucleusPivot {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        out: CensusOut,
    },
    /// Every replacement of a singular section of Q(4,2), classified by shape
    SingularSwitch {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        out: CensusOut,
    },
    /// Quasi-polar sets among the non-degenerate forms of a kind
    Quadrics {
        #[command(flatten)]
        kind: KindArgs,
        #[command(flatten)]
        out: CensusOut,
    },
    /// Intersection numbers of a quadric with every flat, by flat type
    ClassicalDist {
        #[command(flatten)]
        kind: KindArgs,
        #[command(flatten)]
        out: CensusOut,
    },
    /// 2-secants through each point off a parabolic quadric, q even
    TwoSecants {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        out: CensusOut,
    },
    /// Replacements of one non-singular section by other sections of the same kind
    NonsingularSwitch {
        #[command(flatten)]
        kind: KindArgs,
        #[arg(long)]
        hyperplane: Option<String>,
        #[command(flatten)]
        out: CensusOut,
    },
    /// Single-point swaps of every oval in PG(2,q)
    OvalSwitch {
        #[arg(long)]
        q: usize,
        #[command(flatten)]
        out: CensusOut,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::ParseError(..) | Error::DuplicatePoint(_) | Error::BadHeader(_) | Error::IoError(_) => EXIT_IO,
            _ => EXIT_USAGE,
        };
        Failure { code, message: e.to_string() }
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(Failure::usage("--threads must be at least 1")),
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(cli.command)),
            Err(e) => Err(Failure::usage(e.to_string())),
        },
        None => dispatch(cli.command),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("qps: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Construct { what: Construct::Canonical { kind, out } } => {
            let (space, k) = kind.resolve()?;
            let s = Form::canonical(k, &space)?.point_set(&space);
            io::save_pointset(&space, &s, &out)?;
            println!("wrote {} points of {k} to {}", s.count(), out.display());
            Ok(EXIT_OK)
        }
        Command::Spectrum { input, kind, json } => {
            let (space, s) = io::load_pointset(&input)?;
            let k = PolarKind::new(kind, space.dim(), space.q())?;
            let rep = Report::for_set(&space, &s, k)?;
            emit(&rep, json.as_deref())?;
            Ok(if rep.is_quasi_polar() { EXIT_OK } else { EXIT_NEGATIVE })
        }
        Command::Verify { what: Verify::Conditions { input, json } } => {
            let (space, s) = io::load_pointset(&input)?;
            let k = PolarKind::parabolic(space.dim(), space.q())?;
            let cond = spectra::nucleus_conditions(&space, &s)?;
            let mut rep = Report::for_set(&space, &s, k)?;
            rep.conditions = Some((&cond).into());
            emit(&rep, json.as_deref())?;
            let broken: Vec<&str> = cond
                .implications(space.q(), space.dim() / 2, s.count() as u64)
                .into_iter()
                .filter(|(_, ok)| !ok)
                .map(|(name, _)| name)
                .collect();
            if broken.is_empty() {
                Ok(EXIT_OK)
            } else {
                eprintln!("qps: implications violated: {}", broken.join(", "));
                Ok(EXIT_NEGATIVE)
            }
        }
        Command::Surgery { op } => run_surgery(op),
        Command::Census { which } => run_census(which),
        Command::Roots(args) => {
            let (_, k) = args.resolve()?;
            let roots = spectra::cardinality_roots(k)?;
            #[derive(Serialize)]
            struct Roots {
                format: &'static str,
                kind: Family,
                m: usize,
                q: usize,
                classical: u64,
                other: String,
                integral: bool,
            }
            let (num, den) = roots.root_other;
            let out = Roots {
                format: "qps-roots/1",
                kind: k.family,
                m: k.m,
                q: k.q,
                classical: roots.root_classical,
                other: if den == 1 { num.to_string() } else { format!("{num}/{den}") },
                integral: roots.integral,
            };
            println!("{}", serde_json::to_string(&out).expect("roots serialize"));
            Ok(EXIT_OK)
        }
    }
}

/// Writes the report to `json`, or to stdout when no path is given.
fn emit(rep: &Report, json: Option<&Path>) -> Result<(), Failure> {
    match json {
        Some(path) => {
            std::fs::write(path, rep.to_json()).map_err(|e| Error::IoError(format!("{}: {e}", path.display())))?;
            println!("{} ({} points): {}", rep.verdict, rep.size, path.display());
        }
        None => print!("{}", rep.to_json()),
    }
    Ok(())
}

fn parse_coords(space: &ProjSpace, text: &str) -> Result<usize, Failure> {
    let coords: Vec<Elem> = text
        .split(',')
        .map(|w| match w.trim().parse::<usize>() {
            Ok(x) if x < space.q() => Ok(x as Elem),
            _ => Err(Failure::usage(format!("{w:?} is not an element of GF({})", space.q()))),
        })
        .collect::<Result<_, _>>()?;
    if coords.len() != space.dim() + 1 {
        return Err(Error::BadLength { expected: space.dim() + 1, got: coords.len() }.into());
    }
    Ok(space.normalize_point(&coords)?)
}

fn hyperplane_or(space: &ProjSpace, text: Option<&str>, default: impl FnOnce() -> Option<usize>) -> Result<usize, Failure> {
    match text {
        Some(t) => parse_coords(space, t),
        None => default().ok_or_else(|| Failure::usage("no suitable hyperplane; pass --hyperplane")),
    }
}

fn least_singular(space: &ProjSpace, s: &PointSet, kind: PolarKind) -> Option<usize> {
    spectra::singular_hyperplanes(space, s, kind).ok()?.first().copied()
}

fn recovered_form(space: &ProjSpace, family: Family, s: &PointSet) -> Result<Form, Failure> {
    forms::recover_form(space, family, s)
        .ok_or_else(|| Failure::usage(format!("the input is not a classical {family} polar space")))
}

fn run_surgery(op: SurgeryOp) -> Outcome {
    let (io, out, rec, kind, space) = match op {
        SurgeryOp::Pivot { io, kind, hyperplane, base, variant } => {
            let (space, s) = io::load_pointset(&io.input)?;
            let k = PolarKind::new(kind, space.dim(), space.q())?;
            let pi = hyperplane_or(&space, hyperplane.as_deref(), || least_singular(&space, &s, k))?;
            let new_base = match base {
                Some(path) => {
                    let (bs, b) = io::load_pointset(&path)?;
                    if bs.dim() != space.dim() || bs.q() != space.q() {
                        return Err(Failure::usage("the base file lives in a different space"));
                    }
                    b
                }
                None => {
                    let dec = surgery::cone_decomposition(&space, &s, pi)?;
                    pick_variant(&space, &dec.carrier, &dec.base, None, variant)?
                }
            };
            let (out, rec) = surgery::pivot(&space, &s, k, pi, &new_base)?;
            (io, out, rec, k, space)
        }
        SurgeryOp::ConeSwap { io, hyperplane } => {
            let (space, s) = io::load_pointset(&io.input)?;
            let k = PolarKind::parabolic(space.dim(), space.q())?;
            let pi = hyperplane_or(&space, hyperplane.as_deref(), || least_singular(&space, &s, k))?;
            let (out, rec) = surgery::cone_swap(&space, &s, pi)?;
            (io, out, rec, k, space)
        }
        SurgeryOp::ShiftedNucleus { io, hyperplane } => {
            let (space, s) = io::load_pointset(&io.input)?;
            let k = PolarKind::parabolic(space.dim(), space.q())?;
            let nucleus = spectra::find_line_nucleus(&space, &s);
            let pi = hyperplane_or(&space, hyperplane.as_deref(), || {
                let n = nucleus?;
                spectra::singular_hyperplanes(&space, &s, k).ok()?.into_iter().find(|&h| space.incident(h, n))
            })?;
            let (out, rec) = surgery::shifted_nucleus_pivot(&space, &s, pi)?;
            (io, out, rec, k, space)
        }
        SurgeryOp::RepeatedPivot { io, kind, p, r, variant } => {
            let (space, s) = io::load_pointset(&io.input)?;
            let form = recovered_form(&space, kind, &s)?;
            let k = form.kind();
            let p = match p {
                Some(t) => parse_coords(&space, &t)?,
                None => s.first().ok_or_else(|| Failure::usage("empty set"))?,
            };
            let r = match r {
                Some(t) => parse_coords(&space, &t)?,
                None => s
                    .iter()
                    .find(|&x| x != p && space.line_through(p, x).is_ok_and(|l| l.is_subset(&s)))
                    .ok_or_else(|| Failure::usage("no line of the set through p"))?,
            };
            let (_, slots) = surgery::repeated_pivot_slots(&space, &form, p, r)?;
            let mut choices = BTreeMap::new();
            if variant > 0 {
                let slot = slots.iter().find(|sl| sl.point == p).expect("p is on the line");
                let b = pick_variant(&space, &slot.carrier, &slot.base, slot.axis.as_ref(), variant)?;
                choices.insert(p, b);
            }
            let (out, rec) = surgery::repeated_pivot(&space, &form, p, r, &choices)?;
            (io, out, rec, k, space)
        }
        SurgeryOp::AffineSwitch { io } => {
            let (space, s) = io::load_pointset(&io.input)?;
            let (out, rec) = surgery::affine_switch(&space, &s)?;
            let k = PolarKind::elliptic(space.dim(), space.q())?;
            (io, out, rec, k, space)
        }
        SurgeryOp::Q2Switch { io, hyperplane, section } => {
            let (space, s) = io::load_pointset(&io.input)?;
            let pi = parse_coords(&space, &hyperplane)?;
            let (ss, new_section) = io::load_pointset(&section)?;
            if ss.dim() != space.dim() || ss.q() != space.q() {
                return Err(Failure::usage("the section file lives in a different space"));
            }
            let (out, rec) = surgery::nonsingular_switch_q2(&space, &s, pi, &new_section)?;
            let k = PolarKind::parabolic(space.dim(), space.q())?;
            (io, out, rec, k, space)
        }
        SurgeryOp::Q3Switch { io, hyperplane, pi, class } => {
            let (space, s) = io::load_pointset(&io.input)?;
            let form = recovered_form(&space, Family::Parabolic, &s)?;
            let xi = parse_coords(&space, &hyperplane)?;
            let sub = match pi {
                Some(t) => {
                    let h = parse_coords(&space, &t)?;
                    Flat::hyperplane(&space, xi)
                        .meet(&space, &Flat::hyperplane(&space, h))
                        .ok_or_else(|| Failure::usage("--pi must differ from --hyperplane"))?
                }
                None => surgery::tangent_subspace(&space, &form, xi)?,
            };
            let class = match class {
                ReplacementClass::Internal => PointClass::Internal,
                ReplacementClass::External => PointClass::External,
            };
            let (out, rec) = surgery::class_switch_q3(&space, &form, xi, &sub, class)?;
            (io, out, rec, form.kind(), space)
        }
        SurgeryOp::OvalSwap { io, hyperplane } => {
            let (space, s) = io::load_pointset(&io.input)?;
            let line = parse_coords(&space, &hyperplane)?;
            let (out, rec) = surgery::oval_nucleus_swap(&space, &s, line)?;
            let k = PolarKind::parabolic(space.dim(), space.q())?;
            (io, out, rec, k, space)
        }
    };
    finish_surgery(&io, &space, &out, &rec, kind)
}

fn pick_variant(
    space: &ProjSpace,
    carrier: &Flat,
    base: &PointSet,
    fixed: Option<&Flat>,
    variant: usize,
) -> Result<PointSet, Failure> {
    if variant == 0 {
        return Ok(base.clone());
    }
    let variants = surgery::base_variants(space, carrier, base, fixed, variant)?;
    variants
        .get(variant - 1)
        .cloned()
        .ok_or_else(|| Failure::usage(format!("only {} base variants exist", variants.len())))
}

fn finish_surgery(io: &SurgeryIo, space: &ProjSpace, out: &PointSet, rec: &SurgeryRecord, kind: PolarKind) -> Outcome {
    if let Some(path) = &io.out {
        io::save_pointset(space, out, path)?;
    }
    let rep = Report::for_set(space, out, kind)?.with_surgery(space, rec);
    emit(&rep, io.json.as_deref())?;
    Ok(if rep.is_quasi_polar() { EXIT_OK } else { EXIT_NEGATIVE })
}

fn run_census(which: CensusKind) -> Outcome {
    let (space, subject_kind, res, out) = match which {
        CensusKind::NucleusPivot { space, out } => {
            let ps = ProjSpace::of(space.m, space.q)?;
            let res = census::nucleus_pivot_census(&ps)?;
            (ps, PolarKind::parabolic(space.m, space.q)?, res, out)
        }
        CensusKind::SingularSwitch { space, out } => {
            let ps = ProjSpace::of(space.m, space.q)?;
            let res = census::singular_switch_census(&ps)?;
            (ps, PolarKind::parabolic(space.m, space.q)?, res, out)
        }
        CensusKind::Quadrics { kind, out } => {
            let (ps, k) = kind.resolve()?;
            let res = census::quadrics_census(&ps, k)?;
            (ps, k, res, out)
        }
        CensusKind::ClassicalDist { kind, out } => {
            let (ps, k) = kind.resolve()?;
            let res = census::classical_distribution_census(&ps, &Form::canonical(k, &ps)?)?;
            (ps, k, res, out)
        }
        CensusKind::TwoSecants { space, out } => {
            let ps = ProjSpace::of(space.m, space.q)?;
            let k = PolarKind::parabolic(space.m, space.q)?;
            let res = census::two_secant_census(&ps, &Form::canonical(k, &ps)?)?;
            (ps, k, res, out)
        }
        CensusKind::NonsingularSwitch { kind, hyperplane, out } => {
            let (ps, k) = kind.resolve()?;
            let s = Form::canonical(k, &ps)?.point_set(&ps);
            let prof = spectra::profile(k);
            let pi = hyperplane_or(&ps, hyperplane.as_deref(), || {
                ps.section_sizes(&s).iter().position(|&x| {
                    !matches!(prof.type_of(x as u64), HyperplaneType::Singular | HyperplaneType::Inadmissible)
                })
            })?;
            let res = census::nonsingular_switch_census(&ps, &s, k, pi)?;
            (ps, k, res, out)
        }
        CensusKind::OvalSwitch { q, out } => {
            let ps = ProjSpace::of(2, q)?;
            let res = census::oval_switch_census(&ps)?;
            (ps, PolarKind::parabolic(2, q)?, res, out)
        }
    };
    write_census(&space, subject_kind, &res, &out)?;
    Ok(EXIT_OK)
}

fn write_census(space: &ProjSpace, kind: PolarKind, res: &CensusResult, out: &CensusOut) -> Result<(), Failure> {
    let subject = Form::canonical(kind, space)?.point_set(space);
    let rep = Report::for_set(space, &subject, kind)?.with_census(space, res);
    emit(&rep, out.json.as_deref())?;
    if let Some(path) = &out.csv {
        std::fs::write(path, report::census_csv(res)).map_err(|e| Error::IoError(format!("{}: {e}", path.display())))?;
    }
    Ok(())
}
