use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use emk_core::algebra::rational::{format_rational, parse_rational, Rational};
use emk_core::algebra::Polynomial;
use emk_core::asymptotics::{
    ehrhart, ehrhart_eval, evaluate_expansion, expansion_terms, normal_form, riemann_sum_oracle, Expansion,
    ExpansionTerm, TClass,
};
use emk_core::genfun::s_affine_cone;
use emk_core::hyperfrac::ScalarProduct;
use emk_core::io;
use emk_core::mu::local_eml;
use emk_core::polyhedra::{AffineCone, Cone, Polyhedron};

/// Local Euler-Maclaurin expansions of Riemann sums over rational polyhedra.
#[derive(Parser, Debug)]
#[command(name = "emk", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// μ-functions of the transverse cones of every face.
    Mu(Common),
    /// Terms of the asymptotic expansion up to the given order.
    Expand(Common),
    /// Compare the expansion with brute-force Riemann sums.
    Verify(VerifyArgs),
    /// Ehrhart polynomial of a lattice polytope.
    Ehrhart(Common),
    /// Face-by-face decomposition of the generating function of an affine cone.
    LocalEml(Common),
}

#[derive(clap::Args, Debug)]
struct Common {
    #[arg(long)]
    polyhedron: PathBuf,
    #[arg(long = "scalar-product")]
    scalar_product: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    order: Option<i64>,
    /// Dilation parameters, space or comma separated.
    #[arg(long, num_args = 1.., value_delimiter = ',', allow_negative_numbers = true)]
    t: Vec<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long, value_enum, default_value_t = Mode::Integer)]
    mode: Mode,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    /// Test function, e.g. `x1^2*x2 - 1/2*x1 + 3`, or `one`.
    #[arg(long, default_value = "one", allow_hyphen_values = true)]
    h: String,
    /// Previously written output of `expand` to evaluate instead of recomputing.
    #[arg(long)]
    expansion: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Integer,
    RationalT,
}

impl From<Mode> for TClass {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Integer => TClass::IntegerLattice,
            Mode::RationalT => TClass::RationalT,
        }
    }
}

/// A parsed and validated job.
struct JobSpec {
    polyhedron: Polyhedron,
    scalar_product: ScalarProduct,
    order: Option<u32>,
    t_values: Vec<Rational>,
    mode: Mode,
}

enum Failure {
    Validation(String),
}

impl From<emk_core::Error> for Failure {
    fn from(e: emk_core::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

struct Report {
    json: Value,
    table: String,
    ok: bool,
}

fn job(c: &Common) -> Result<JobSpec, Failure> {
    let polyhedron = io::read_polyhedron(&c.polyhedron)?;
    let d = polyhedron.dim_ambient();
    let scalar_product = match &c.scalar_product {
        Some(p) => io::read_scalar_product(p)?,
        None => ScalarProduct::identity(d),
    };
    if scalar_product.dim() != d {
        return Err(Failure::Validation(format!("scalar product has dimension {}, polyhedron {d}", scalar_product.dim())));
    }
    let order = match c.order {
        Some(k) if k < 0 => return Err(Failure::Validation(format!("order must be non-negative, got {k}"))),
        Some(k) => Some(k as u32),
        None => None,
    };
    let mut t_values = Vec::new();
    for s in &c.t {
        let t = parse_rational(s)?;
        if t <= Rational::from_integer(0.into()) {
            return Err(Failure::Validation(format!("t values must be positive, got {s}")));
        }
        t_values.push(t);
    }
    Ok(JobSpec { polyhedron, scalar_product, order, t_values, mode: c.mode })
}

fn t_list(spec: &JobSpec) -> Vec<Rational> {
    if spec.t_values.is_empty() {
        vec![Rational::from_integer(1.into())]
    } else {
        spec.t_values.clone()
    }
}

fn face_label(p: &Polyhedron, t: &ExpansionTerm) -> String {
    let vs: Vec<String> = t
        .face
        .vertices
        .iter()
        .map(|&i| format!("({})", p.vertices()[i].iter().map(format_rational).collect::<Vec<_>>().join(",")))
        .collect();
    format!("{:?} dim {} {}", t.face.active, t.face.dim, vs.join(" "))
}

fn terms_report(e: &Expansion, terms: &[ExpansionTerm], table: &mut String) -> Value {
    let p = &e.polyhedron;
    let _ = writeln!(table, "{:>3} {:>3}  {:<40} operator", "k", "m", "face");
    Value::Array(
        terms
            .iter()
            .map(|t| {
                let mut v = io::term_json(p, t);
                let mut shown = t.operator.to_string_with("d");
                if let Some((c, u)) = normal_form(e, t) {
                    v["normal_form"] = json!({"coefficient": format_rational(&c), "direction": io::qvec_json(&u)});
                    if t.m > 0 {
                        let dir = u.iter().map(format_rational).collect::<Vec<_>>().join(",");
                        shown = format!("{} * d_({dir})^{}", format_rational(&c), t.m);
                    }
                } else if t.m == 0 {
                    v["coefficient"] = json!(format_rational(&t.operator.constant_term()));
                }
                let _ = writeln!(table, "{:>3} {:>3}  {:<40} {shown}", t.k, t.m, face_label(p, t));
                v
            })
            .collect(),
    )
}

fn run_expand(spec: &JobSpec) -> Result<Report, Failure> {
    let order = spec.order.unwrap_or(spec.polyhedron.dimension() as u32);
    let e = expansion_terms(&spec.polyhedron, &spec.scalar_product, order, spec.mode.into())?;
    let mut table = String::new();
    let mut out = json!({
        "command": "expand",
        "order": order,
        "mode": mode_name(spec.mode),
        "polyhedron": io::polyhedron_to_json(&spec.polyhedron),
        "scalar_product": io::scalar_product_to_json(&spec.scalar_product),
    });
    match spec.mode {
        Mode::Integer => {
            out["terms"] = terms_report(&e, &e.terms, &mut table);
        }
        Mode::RationalT => {
            let mut blocks = Vec::new();
            for t in t_list(spec) {
                let _ = writeln!(table, "t = {}", format_rational(&t));
                let terms = e.terms_at(&t)?;
                blocks.push(json!({"t": format_rational(&t), "terms": terms_report(&e, &terms, &mut table)}));
            }
            out["terms_at"] = Value::Array(blocks);
        }
    }
    Ok(Report { json: out, table, ok: true })
}

fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Integer => "integer",
        Mode::RationalT => "rational-t",
    }
}

fn run_mu(spec: &JobSpec) -> Result<Report, Failure> {
    let order = spec.order.unwrap_or(spec.polyhedron.dimension() as u32);
    let e = expansion_terms(&spec.polyhedron, &spec.scalar_product, order, spec.mode.into())?;
    let p = &e.polyhedron;
    let ts = match spec.mode {
        Mode::Integer => vec![Rational::from_integer(1.into())],
        Mode::RationalT => t_list(spec),
    };
    let mut table = String::new();
    let mut blocks = Vec::new();
    for t in &ts {
        let _ = writeln!(table, "t = {}", format_rational(t));
        let mut faces = Vec::new();
        for (fi, fd) in e.faces.iter().enumerate() {
            let mu = e.mu_at(fi, t)?;
            let _ = writeln!(table, "face {:?} (dim {})", fd.face.active, fd.face.dim);
            for (m, c) in mu.components.iter().enumerate() {
                let _ = writeln!(table, "  mu[{m}] = {}", c.to_string_with("d"));
            }
            faces.push(json!({
                "face": io::face_json(p, &fd.face),
                "transverse_cone": {
                    "vertex": io::qvec_json(&fd.transverse.vertex),
                    "rays": fd.transverse.cone.rays_q().iter().map(|r| io::qvec_json(r)).collect::<Vec<_>>(),
                },
                "mu": io::mu_json(&mu),
            }));
        }
        blocks.push(json!({"t": format_rational(t), "faces": faces}));
    }
    Ok(Report { json: json!({"command": "mu", "order": order, "mode": mode_name(spec.mode), "results": blocks}), table, ok: true })
}

fn run_verify(spec: &JobSpec, h_spec: &str, expansion: Option<&PathBuf>) -> Result<Report, Failure> {
    let d = spec.polyhedron.dim_ambient();
    let h = Polynomial::parse(h_spec, d)?;
    let ts = t_list(spec);
    let mut table = String::new();
    let mut results = Vec::new();
    let mut ok = true;
    // terms per t, either recomputed or read back
    let (p, source): (Polyhedron, Box<dyn Fn(&Rational) -> Result<Vec<ExpansionTerm>, Failure>>) = match expansion {
        Some(path) => {
            let doc = io::read_json(path)?;
            let p = match doc.get("polyhedron") {
                Some(pv) => io::polyhedron_from_json(pv)?,
                None => spec.polyhedron.clone(),
            };
            let p2 = p.clone();
            let f = move |t: &Rational| -> Result<Vec<ExpansionTerm>, Failure> {
                if let Some(terms) = doc.get("terms") {
                    if !t.is_integer() {
                        return Err(Failure::Validation(format!("expansion is for integer t, got {t}")));
                    }
                    return Ok(io::terms_from_json(&p2, terms)?);
                }
                let blocks = doc.get("terms_at").and_then(Value::as_array).ok_or_else(|| {
                    Failure::Validation("expansion file has neither `terms` nor `terms_at`".into())
                })?;
                for b in blocks {
                    if b.get("t").map(io::json_rational).transpose()?.as_ref() == Some(t) {
                        return Ok(io::terms_from_json(&p2, &b["terms"])?);
                    }
                }
                Err(Failure::Validation(format!("expansion file has no terms for t = {}", format_rational(t))))
            };
            (p, Box::new(f))
        }
        None => {
            let order = spec.order.unwrap_or(h.degree().unwrap_or(0) + spec.polyhedron.dimension() as u32);
            let e = expansion_terms(&spec.polyhedron, &spec.scalar_product, order, spec.mode.into())?;
            let p = e.polyhedron.clone();
            (p, Box::new(move |t: &Rational| Ok(e.terms_at(t)?)))
        }
    };
    for t in &ts {
        let terms = source(t)?;
        let value = evaluate_expansion(&p, &terms, &h, t)?;
        let oracle = riemann_sum_oracle(&p, &h, t, None)?;
        let matched = value == oracle.value;
        ok &= matched;
        let verdict = if matched { "exact match" } else { "MISMATCH" };
        let _ = writeln!(
            table,
            "t = {:<6} expansion = {:<16} oracle = {:<16} points = {:<6} {verdict}",
            format_rational(t),
            format_rational(&value),
            format_rational(&oracle.value),
            oracle.point_count
        );
        results.push(json!({
            "t": format_rational(t),
            "expansion": format_rational(&value),
            "oracle": format_rational(&oracle.value),
            "point_count": oracle.point_count,
            "result": verdict,
        }));
    }
    Ok(Report { json: json!({"command": "verify", "h": h.to_string(), "results": results, "all_match": ok}), table, ok })
}

fn run_ehrhart(spec: &JobSpec) -> Result<Report, Failure> {
    let p = &spec.polyhedron;
    let coeffs = ehrhart(p, &spec.scalar_product)?;
    let ell = p.dimension() as u32;
    let mut table = String::new();
    let terms: Vec<String> = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| format!("{}*t^{}", format_rational(c), ell - k as u32))
        .collect();
    let _ = writeln!(table, "L(t) = {}", terms.join(" + "));
    let checks_t: Vec<Rational> = if spec.t_values.is_empty() {
        (1..=(ell as i64 + 1)).map(|t| Rational::from_integer(t.into())).collect()
    } else {
        spec.t_values.clone()
    };
    let one = Polynomial::one(p.dim_ambient());
    let mut ok = true;
    let mut checks = Vec::new();
    for t in &checks_t {
        if !t.is_integer() {
            return Err(Failure::Validation(format!("Ehrhart checks need integer t, got {}", format_rational(t))));
        }
        let count = riemann_sum_oracle(p, &one, t, None)?.point_count;
        let poly = ehrhart_eval(&coeffs, t);
        let matched = poly == Rational::from_integer(count.into());
        ok &= matched;
        let _ = writeln!(table, "t = {:<4} count = {:<8} L(t) = {:<8} {}", format_rational(t), count, format_rational(&poly), if matched { "ok" } else { "MISMATCH" });
        checks.push(json!({"t": format_rational(t), "count": count, "polynomial": format_rational(&poly), "match": matched}));
    }
    Ok(Report {
        json: json!({
            "command": "ehrhart",
            "degree": ell,
            "coefficients": coeffs.iter().map(format_rational).collect::<Vec<_>>(),
            "checks": checks,
        }),
        table,
        ok,
    })
}

fn run_local_eml(spec: &JobSpec) -> Result<Report, Failure> {
    let p = &spec.polyhedron;
    if p.vertices().len() != 1 || !p.lines().is_empty() {
        return Err(Failure::Validation("local-eml needs a pointed affine cone (one vertex, no lines)".into()));
    }
    let a = AffineCone::new(p.vertices()[0].clone(), Cone::from_extreme_rays(p.dim_ambient(), p.rays().to_vec()));
    let depth = spec.order.unwrap_or(0);
    let dec = local_eml(&a, &spec.scalar_product, depth)?;
    let s = s_affine_cone(&a, depth)?;
    let mut table = String::new();
    let mut faces = Vec::new();
    for ft in &dec.per_face {
        let _ = writeln!(table, "face {:?} (dim {}): I = {:?}", ft.face.active, ft.face.dim, ft.integral);
        for (m, c) in ft.mu.components.iter().enumerate() {
            let _ = writeln!(table, "  mu[{m}] = {}", c.to_string_with("d"));
        }
        faces.push(json!({
            "face": io::face_json(&dec.polyhedron, &ft.face),
            "mu": io::mu_json(&ft.mu),
            "integral": io::hyperfraction_json(&ft.integral),
        }));
    }
    let ell = a.cone.dimension() as i64;
    let mut comps = Vec::new();
    let mut ok = true;
    for m in -ell..=depth as i64 {
        let rec = dec.reconstruct(m);
        let matched = rec.value_eq(&s.component(m)?);
        ok &= matched;
        let _ = writeln!(table, "S[{m}] = {:?}  {}", rec.reduce(), if matched { "matches S" } else { "MISMATCH" });
        comps.push(json!({"degree": m, "component": io::hyperfraction_json(&rec.reduce()), "matches": matched}));
    }
    Ok(Report { json: json!({"command": "local-eml", "depth": depth, "faces": faces, "components": comps}), table, ok })
}

fn configure_threads() {
    if let Ok(v) = std::env::var("EMK_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn execute(cli: &Cli) -> Result<(Report, Format, Option<PathBuf>), Failure> {
    let (common, report) = match &cli.command {
        Command::Mu(c) => (c, run_mu(&job(c)?)?),
        Command::Expand(c) => (c, run_expand(&job(c)?)?),
        Command::Verify(v) => (&v.common, run_verify(&job(&v.common)?, &v.h, v.expansion.as_ref())?),
        Command::Ehrhart(c) => (c, run_ehrhart(&job(c)?)?),
        Command::LocalEml(c) => (c, run_local_eml(&job(c)?)?),
    };
    Ok((report, common.format, common.output.clone()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let (report, format, output) = match execute(&cli) {
        Ok(r) => r,
        Err(Failure::Validation(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&report.json).expect("report serializes") + "\n",
        Format::Table => report.table,
    };
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(3)
    }
}
