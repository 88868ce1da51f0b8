use std::collections::BTreeMap;
use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use harmonic_range::catalog::{Catalog, CatalogEntry, CatalogItem};
use harmonic_range::expr::{format_complex, parse_complex};
use harmonic_range::lewis::{
    estimate_rho, i_alpha_unrotated, lewis_disc_search, rescaled_range_check, rescaled_sequence,
    RescaledCheckConfig, CERTIFY_GRID,
};
use harmonic_range::range::{
    antipodal_gap_alpha, antipodal_pairs, cone_avoidance_normalize, default_radius, estimate_directions,
    fit_i_alpha, phi_profile, phi_sublinearity_check, sample_range, DirectionConfig, DirectionEstimate, RangeSample,
    DEFAULT_N_GRID, DEFAULT_PHI_BINS,
};
use harmonic_range::theorems::{
    check_antipodal_theorem, check_cor_alpha, check_halfplane_theorem, check_lewis_region, check_log2_inequalities,
    check_murdoch_kuran, log2_samples,
};
use harmonic_range::verdict::TheoremVerdict;
use harmonic_range::zero_sets::{
    cleaning_check, detect_dependence, local_structure, trace_zero_set, tract_report, tract_report_stabilized, Rect,
};
use harmonic_range::{io, ArcSet, Error, HarmonicComponent, HarmonicMap};

const THREADS_ENV: &str = "HARMONIC_RANGE_THREADS";

#[derive(Parser, Debug)]
#[command(name = "harmonic-range", version, about = "Ranges, asymptotic directions and zero sets of entire harmonic maps")]
struct Cli {
    /// key=value file whose entries are appended as `--key value` flags
    /// unless given on the command line.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Alternative catalog data file.
    #[arg(long, global = true, value_name = "PATH")]
    catalog_file: Option<PathBuf>,
    /// Print the JSON schema of the command's output and exit.
    #[arg(long, global = true)]
    schema: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Evaluate a map at one or more points.
    Eval(EvalArgs),
    /// Sample the range on a disc.
    Sample(SampleArgs),
    /// Estimate the set of asymptotic directions.
    Directions(DirectionsArgs),
    /// Antipodal pairs and the antipodal gap of a direction set.
    Antipodal(ArcArgs),
    /// Rotate a direction set into cone-avoidance normal form.
    Normalize(ArcArgs),
    /// Search for a Lewis disc of `u`.
    LewisDiscs(LewisArgs),
    /// Build and certify a rescaled sequence.
    Rescale(RescaleArgs),
    /// Trace the zero set of a component.
    Zeros(ZerosArgs),
    /// Multiplicity and ray angles of a zero.
    LocalStructure(LocalArgs),
    /// Sign changes of a polynomial component on a large circle.
    Tracts(TractArgs),
    /// Detect a linear relation `u = b v` outside a disc.
    Dependence(DependenceArgs),
    /// Upper envelope of `v` over slabs of `u`.
    Phi(PhiArgs),
    /// Run theorem checkers and report verdicts.
    Check(CheckArgs),
    /// List or show the built-in catalog.
    Catalog(CatalogArgs),
    /// Write an SVG figure.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Clone, Default)]
struct MapSource {
    /// Map literal, e.g. "u=re(z); v=im(exp(z))".
    #[arg(long, conflicts_with_all = ["catalog", "file"])]
    map: Option<String>,
    /// Catalog entry name.
    #[arg(long, conflicts_with = "file")]
    catalog: Option<String>,
    /// File containing a map literal (`#` starts a comment).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
struct SampleOpts {
    /// Sampling radius R [default: 30 for maps with exponentials, 100 for polynomials].
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_N_GRID)]
    n_grid: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct EvalArgs {
    #[command(flatten)]
    src: MapSource,
    /// Point(s) to evaluate, e.g. `1+2*i`.
    #[arg(long, required_unless_present = "schema", allow_hyphen_values = true)]
    z: Vec<String>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[command(flatten)]
    src: MapSource,
    #[command(flatten)]
    sample: SampleOpts,
    /// CSV output (z_re, z_im, w_re, w_im).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DirectionsArgs {
    #[command(flatten)]
    src: MapSource,
    #[command(flatten)]
    sample: SampleOpts,
    #[arg(long, default_value_t = 720)]
    bins: usize,
    /// Reach growth factor between scales R/4 and R.
    #[arg(long, default_value_t = 2.0)]
    growth: f64,
    /// Hausdorff tolerance (degrees) against catalog expectations.
    #[arg(long, default_value_t = 2.0)]
    match_tol_deg: f64,
}

#[derive(Args, Debug)]
struct ArcArgs {
    #[command(flatten)]
    src: MapSource,
    #[command(flatten)]
    sample: SampleOpts,
    /// Direction set in degrees, `lo,hi;lo,hi;...` (a point is `t,t`).
    #[arg(long, allow_hyphen_values = true)]
    arcs_deg: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    tol_deg: f64,
}

#[derive(Args, Debug)]
struct LewisArgs {
    #[command(flatten)]
    src: MapSource,
    /// Outer radius R.
    #[arg(long, default_value_t = 8.0)]
    radius: f64,
    #[arg(long, default_value_t = 100.0)]
    budget: f64,
}

#[derive(Args, Debug)]
struct RescaleArgs {
    #[command(flatten)]
    src: MapSource,
    /// Increasing radii, comma separated.
    #[arg(long, default_value = "4,8,16,32")]
    schedule: String,
    #[arg(long, default_value_t = 100.0)]
    budget: f64,
    #[arg(long, default_value_t = CERTIFY_GRID)]
    grid: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Component {
    U,
    V,
}

#[derive(Args, Debug)]
struct ZerosArgs {
    #[command(flatten)]
    src: MapSource,
    #[arg(long, value_enum, default_value_t = Component::U)]
    component: Component,
    /// Box `x0,x1,y0,y1`.
    #[arg(long, default_value = "-4,4,-4,4", allow_hyphen_values = true)]
    rect: String,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    /// CSV output (curve, x, y).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct LocalArgs {
    #[command(flatten)]
    src: MapSource,
    #[arg(long, value_enum, default_value_t = Component::U)]
    component: Component,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    z: String,
}

#[derive(Args, Debug)]
struct TractArgs {
    #[command(flatten)]
    src: MapSource,
    #[arg(long, value_enum, default_value_t = Component::U)]
    component: Component,
    #[arg(long, default_value_t = 10.0)]
    radius: f64,
    /// Double R until the count agrees at R and 2R.
    #[arg(long)]
    stabilize: bool,
}

#[derive(Args, Debug)]
struct DependenceArgs {
    #[command(flatten)]
    src: MapSource,
    #[command(flatten)]
    sample: SampleOpts,
    /// Cone constant in `|u| ≤ a|v|`.
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Samples with `|z| ≤` this are ignored.
    #[arg(long, default_value_t = 1.0)]
    r_out: f64,
}

#[derive(Args, Debug)]
struct PhiArgs {
    #[command(flatten)]
    src: MapSource,
    #[command(flatten)]
    sample: SampleOpts,
    #[arg(long, default_value_t = DEFAULT_PHI_BINS)]
    bins: usize,
    /// CSV output of the finest-scale profile (u, phi).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
enum TheoremArg {
    Log2,
    Lewis,
    Antipodal,
    Halfplane,
    CorAlpha,
    MurdochKuran,
    Rescaled,
    Cleaning,
    Phi,
    /// lewis, antipodal, halfplane, cor-alpha and murdoch-kuran.
    Suite,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[command(flatten)]
    src: MapSource,
    #[command(flatten)]
    sample: SampleOpts,
    #[arg(long, value_enum, required_unless_present = "schema")]
    theorem: Vec<TheoremArg>,
    /// Number of points for log2.
    #[arg(long, default_value_t = 1_000_000)]
    n: usize,
    /// Disc radius for log2 points.
    #[arg(long, default_value_t = 100.0)]
    log2_radius: f64,
    /// Lewis constant C.
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Half-plane axis in degrees.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    alpha_deg: f64,
    /// Angular tolerance in degrees.
    #[arg(long, default_value_t = 2.0)]
    tol_deg: f64,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Exponent in `v ≤ a|u|^exponent + b`.
    #[arg(long, default_value_t = 0.5)]
    exponent: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    r_out: f64,
    #[arg(long, default_value = "4,8,16,32")]
    schedule: String,
    #[arg(long, default_value_t = 100.0)]
    budget: f64,
    #[arg(long, default_value_t = CERTIFY_GRID)]
    grid: usize,
    /// Disc radius for the cleaning check.
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    #[arg(long, default_value_t = 1e-3)]
    zero_tol: f64,
}

#[derive(Args, Debug)]
struct CatalogArgs {
    /// Show a single entry.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum PlotKind {
    Range,
    Zeros,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[command(flatten)]
    src: MapSource,
    #[command(flatten)]
    sample: SampleOpts,
    #[arg(long, value_enum, default_value_t = PlotKind::Range)]
    kind: PlotKind,
    #[arg(long, default_value = "-4,4,-4,4", allow_hyphen_values = true)]
    rect: String,
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    #[arg(long, value_enum, default_value_t = Component::U)]
    component: Component,
    #[arg(long, default_value_t = 720)]
    bins: usize,
    /// SVG output path.
    #[arg(long, required_unless_present = "schema")]
    out: Option<PathBuf>,
}

/// Outcome of a command: the JSON document and whether every verdict agreed
/// with the theorems.
struct Report {
    doc: Value,
    consistent: bool,
}

impl Report {
    fn ok(doc: Value) -> Self {
        Self { doc, consistent: true }
    }
}

type CmdResult = Result<Report, Error>;

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn deg(x: f64) -> f64 {
    // round so JSON stays readable; estimates carry full precision elsewhere
    (x.to_degrees() * 1e6).round() / 1e6
}

fn arcs_deg(a: &ArcSet) -> Value {
    Value::Array(a.arcs().into_iter().map(|(lo, hi)| json!([deg(lo), deg(hi)])).collect())
}

fn parse_arcs_deg(s: &str) -> Result<ArcSet, Error> {
    let mut arcs = Vec::new();
    for piece in s.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let nums: Vec<f64> = piece
            .split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad arc '{piece}'"))))
            .collect::<Result<_, _>>()?;
        match nums.as_slice() {
            [t] => arcs.push((t.to_radians(), t.to_radians())),
            [lo, hi] => arcs.push((lo.to_radians(), hi.to_radians())),
            _ => return Err(Error::InvalidArgument(format!("bad arc '{piece}'"))),
        }
    }
    Ok(ArcSet::from_arcs(arcs))
}

fn parse_schedule(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::InvalidArgument(format!("bad radius '{t}' in schedule"))))
        .collect()
}

struct Ctx {
    catalog_file: Option<PathBuf>,
}

impl Ctx {
    fn catalog(&self) -> Result<Catalog, Error> {
        match &self.catalog_file {
            Some(p) => Catalog::load(p),
            None => Catalog::builtin(),
        }
    }

    fn entry(&self, name: &str) -> Result<CatalogEntry, Error> {
        Ok(self.catalog()?.get(name)?.clone())
    }

    fn map(&self, src: &MapSource) -> Result<HarmonicMap, Error> {
        if let Some(lit) = &src.map {
            return HarmonicMap::parse(lit);
        }
        if let Some(name) = &src.catalog {
            return self.entry(name)?.map();
        }
        if let Some(path) = &src.file {
            return read_map_file(path);
        }
        Err(Error::InvalidArgument("one of --map, --catalog or --file is required".into()))
    }
}

fn read_map_file(path: &Path) -> Result<HarmonicMap, Error> {
    let text = std::fs::read_to_string(path)?;
    let lit: Vec<&str> = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty()).collect();
    HarmonicMap::parse(&lit.join("; "))
}

fn component<'a>(f: &'a HarmonicMap, c: Component) -> &'a HarmonicComponent {
    match c {
        Component::U => &f.u,
        Component::V => &f.v,
    }
}

fn sample(f: &HarmonicMap, o: &SampleOpts) -> Result<RangeSample, Error> {
    sample_range(f, o.radius.unwrap_or_else(|| default_radius(f)), o.n_grid, o.seed)
}

fn directions_of(f: &HarmonicMap, o: &SampleOpts, bins: usize, growth: f64) -> Result<DirectionEstimate, Error> {
    estimate_directions(&sample(f, o)?, &DirectionConfig { bins, growth })
}

fn map_doc(f: &HarmonicMap) -> Value {
    json!({ "name": f.name, "literal": f.literal() })
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    Ok(BufWriter::new(File::create(path)?))
}

fn cmd_eval(ctx: &Ctx, a: &EvalArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let mut values = Vec::new();
    for zs in &a.z {
        let z = parse_complex(zs)?;
        let w = f.eval(z);
        values.push(json!({ "z": format_complex(z), "w": format_complex(w), "u": w.re, "v": w.im }));
    }
    Ok(Report::ok(json!({ "command": "eval", "map": map_doc(&f), "values": values })))
}

fn cmd_sample(ctx: &Ctx, a: &SampleArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let s = sample(&f, &a.sample)?;
    if let Some(p) = &a.out {
        io::write_samples_csv(create(p)?, &s)?;
    }
    let (mut umin, mut umax, mut vmin, mut vmax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in &s.points {
        umin = umin.min(p.w.re);
        umax = umax.max(p.w.re);
        vmin = vmin.min(p.w.im);
        vmax = vmax.max(p.w.im);
    }
    Ok(Report::ok(json!({
        "command": "sample",
        "map": map_doc(&f),
        "meta": to_value(&s.meta),
        "points": s.len(),
        "u_range": [umin, umax],
        "v_range": [vmin, vmax],
        "out": a.out,
    })))
}

fn cmd_directions(ctx: &Ctx, a: &DirectionsArgs) -> CmdResult {
    let entry = a.src.catalog.as_deref().map(|n| ctx.entry(n)).transpose()?;
    let (arcs, estimate, map) = match entry.as_ref().map(|e| e.item()).transpose()? {
        Some(CatalogItem::Arcs(arcs)) => (arcs, None, Value::Null),
        _ => {
            let f = ctx.map(&a.src)?;
            let est = directions_of(&f, &a.sample, a.bins, a.growth)?;
            (est.arcs.clone(), Some(est), map_doc(&f))
        }
    };
    let mut doc = json!({
        "command": "directions",
        "map": map,
        "arcs": to_value(&arcs),
        "arcs_deg": arcs_deg(&arcs),
        "estimate": estimate.as_ref().map(to_value),
    });
    let mut consistent = true;
    if let Some(expected) = entry.as_ref().and_then(|e| e.expected.directions()) {
        let h = arcs.hausdorff(&expected).to_degrees();
        let matches = h <= a.match_tol_deg;
        consistent = matches;
        doc["expected"] = json!({
            "basis": entry.as_ref().map(|e| e.expected.basis.clone()),
            "arcs_deg": arcs_deg(&expected),
            "hausdorff_deg": (h * 1e6).round() / 1e6,
            "tol_deg": a.match_tol_deg,
            "matches": matches,
        });
    }
    Ok(Report { doc, consistent })
}

fn arcs_for(ctx: &Ctx, a: &ArcArgs) -> Result<(ArcSet, Value), Error> {
    if let Some(s) = &a.arcs_deg {
        return Ok((parse_arcs_deg(s)?, json!({ "arcs_deg": s })));
    }
    if let Some(name) = &a.src.catalog {
        if let CatalogItem::Arcs(arcs) = ctx.entry(name)?.item()? {
            return Ok((arcs, json!({ "catalog": name })));
        }
    }
    let f = ctx.map(&a.src)?;
    let est = directions_of(&f, &a.sample, 720, 2.0)?;
    Ok((est.arcs, map_doc(&f)))
}

fn cmd_antipodal(ctx: &Ctx, a: &ArcArgs) -> CmdResult {
    let (arcs, source) = arcs_for(ctx, a)?;
    let tol = a.tol_deg.to_radians();
    let pairs = antipodal_pairs(&arcs, tol);
    let gap = antipodal_gap_alpha(&arcs, tol);
    Ok(Report::ok(json!({
        "command": "antipodal",
        "source": source,
        "arcs_deg": arcs_deg(&arcs),
        "tol_deg": a.tol_deg,
        "pairs": to_value(&pairs),
        "pairs_deg": arcs_deg(&pairs),
        "has_antipodal_pair": !pairs.is_empty(),
        "gap_alpha": gap,
        "gap_alpha_deg": gap.map(deg),
    })))
}

fn cmd_normalize(ctx: &Ctx, a: &ArcArgs) -> CmdResult {
    let (arcs, source) = arcs_for(ctx, a)?;
    let tol = a.tol_deg.to_radians();
    let norm = cone_avoidance_normalize(&arcs, tol);
    let fit = fit_i_alpha(&arcs, tol);
    Ok(Report::ok(json!({
        "command": "normalize",
        "source": source,
        "arcs_deg": arcs_deg(&arcs),
        "tol_deg": a.tol_deg,
        "normalization": norm.as_ref().map(to_value),
        "rotation_deg": norm.as_ref().map(|n| deg(n.rotation)),
        "rotated_arcs_deg": norm.as_ref().map(|n| arcs_deg(&n.rotated_arcs)),
        "i_alpha_fit": fit.as_ref().map(to_value),
    })))
}

fn cmd_lewis(ctx: &Ctx, a: &LewisArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let disc = lewis_disc_search(&f.u, a.radius, a.budget)?;
    Ok(Report { consistent: disc.within_budget, doc: json!({ "command": "lewis-discs", "map": map_doc(&f), "disc": to_value(&disc) }) })
}

fn cmd_rescale(ctx: &Ctx, a: &RescaleArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let seq = rescaled_sequence(&f, &parse_schedule(&a.schedule)?, a.budget)?;
    let mut all = true;
    let members: Vec<Value> = seq
        .iter()
        .map(|rm| {
            let cert = rm.certify(a.grid);
            all &= cert.holds();
            json!({ "disc": to_value(&rm.disc), "certificate": to_value(&cert), "holds": cert.holds() })
        })
        .collect();
    Ok(Report { consistent: all, doc: json!({ "command": "rescale", "map": map_doc(&f), "grid": a.grid, "members": members, "all_hold": all }) })
}

fn cmd_zeros(ctx: &Ctx, a: &ZerosArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let rect = Rect::parse(&a.rect)?;
    let curves = trace_zero_set(component(&f, a.component), rect, a.step)?;
    if let Some(p) = &a.out {
        io::write_curves_csv(create(p)?, &curves)?;
    }
    let summary: Vec<Value> = curves
        .iter()
        .map(|c| json!({ "id": c.id, "points": c.points.len(), "length": c.length, "closed": c.closed }))
        .collect();
    Ok(Report::ok(json!({
        "command": "zeros",
        "map": map_doc(&f),
        "component": a.component,
        "rect": to_value(&rect),
        "step": a.step,
        "curves": summary,
        "out": a.out,
    })))
}

fn cmd_local(ctx: &Ctx, a: &LocalArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let z = parse_complex(&a.z)?;
    let ls = local_structure(component(&f, a.component), z)?;
    Ok(Report::ok(json!({
        "command": "local-structure",
        "map": map_doc(&f),
        "component": a.component,
        "structure": to_value(&ls),
        "ray_angles_deg": ls.ray_angles.iter().map(|t| deg(*t)).collect::<Vec<_>>(),
    })))
}

fn cmd_tracts(ctx: &Ctx, a: &TractArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let u = component(&f, a.component);
    let rep = if a.stabilize { tract_report_stabilized(u, a.radius)? } else { tract_report(u, a.radius)? };
    let expected = 2 * rep.degree;
    Ok(Report {
        consistent: rep.sign_changes == expected,
        doc: json!({
            "command": "tracts",
            "map": map_doc(&f),
            "component": a.component,
            "report": to_value(&rep),
            "expected_sign_changes": expected,
        }),
    })
}

fn cmd_dependence(ctx: &Ctx, a: &DependenceArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let s = sample(&f, &a.sample)?;
    let rep = detect_dependence(&f, &s, a.a, a.r_out)?;
    Ok(Report::ok(json!({ "command": "dependence", "map": map_doc(&f), "report": to_value(&rep), "sampling": to_value(&s.meta) })))
}

fn cmd_phi(ctx: &Ctx, a: &PhiArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let s = sample(&f, &a.sample)?;
    let prof = phi_profile(&s, a.bins)?;
    if let Some(p) = &a.out {
        let mut wr = csv::Writer::from_writer(create(p)?);
        wr.write_record(["u", "phi"]).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        for (u, phi) in prof.bin_centers().iter().zip(prof.phi()) {
            let cell = phi.map(|x| x.to_string()).unwrap_or_default();
            wr.write_record([u.to_string(), cell]).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        }
        wr.flush()?;
    }
    let verdict = phi_sublinearity_check(&prof);
    let verdict_doc = match &verdict {
        Ok(v) => to_value(v),
        Err(e) => json!({ "error": e.to_string() }),
    };
    Ok(Report::ok(json!({
        "command": "phi",
        "map": map_doc(&f),
        "bins": a.bins,
        "u_extent": prof.u_extent,
        "empty_bins": prof.empty_bins,
        "scales": prof.scales,
        "sublinearity": verdict_doc,
        "out": a.out,
    })))
}

fn cmd_check(ctx: &Ctx, a: &CheckArgs) -> CmdResult {
    let mut wanted: Vec<TheoremArg> = Vec::new();
    for t in &a.theorem {
        if *t == TheoremArg::Suite {
            wanted.extend([TheoremArg::Lewis, TheoremArg::Antipodal, TheoremArg::Halfplane, TheoremArg::CorAlpha, TheoremArg::MurdochKuran]);
        } else {
            wanted.push(*t);
        }
    }
    wanted.sort();
    wanted.dedup();

    let needs_map = wanted.iter().any(|t| *t != TheoremArg::Log2);
    let f = if needs_map { Some(ctx.map(&a.src)?) } else { None };
    let mut samples: Option<RangeSample> = None;
    let mut est: Option<DirectionEstimate> = None;
    let tol = a.tol_deg.to_radians();
    let mut verdicts: Vec<TheoremVerdict> = Vec::new();
    let mut extra = BTreeMap::new();

    for t in wanted {
        if t == TheoremArg::Log2 {
            verdicts.push(check_log2_inequalities(&log2_samples(a.n, a.log2_radius, a.sample.seed))?.sampled("seed", a.sample.seed));
            continue;
        }
        let f = f.as_ref().expect("map loaded");
        if samples.is_none() && matches!(t, TheoremArg::Lewis | TheoremArg::CorAlpha | TheoremArg::MurdochKuran | TheoremArg::Phi | TheoremArg::Antipodal | TheoremArg::Halfplane | TheoremArg::Rescaled) {
            samples = Some(sample(f, &a.sample)?);
        }
        if est.is_none() && matches!(t, TheoremArg::Antipodal | TheoremArg::Halfplane | TheoremArg::Rescaled) {
            est = Some(estimate_directions(samples.as_ref().unwrap(), &DirectionConfig::default())?);
        }
        match t {
            TheoremArg::Lewis => verdicts.push(check_lewis_region(f, a.c, samples.as_ref().unwrap())),
            TheoremArg::Antipodal => verdicts.push(check_antipodal_theorem(f, est.as_ref().unwrap(), tol)),
            TheoremArg::Halfplane => verdicts.push(check_halfplane_theorem(f, a.alpha_deg.to_radians(), est.as_ref().unwrap(), tol)),
            TheoremArg::CorAlpha => verdicts.push(check_cor_alpha(f, a.a, a.exponent, a.b, samples.as_ref().unwrap())?),
            TheoremArg::MurdochKuran => verdicts.push(check_murdoch_kuran(f, a.a, a.r_out, samples.as_ref().unwrap())?),
            TheoremArg::Phi => verdicts.push(phi_sublinearity_check(&phi_profile(samples.as_ref().unwrap(), DEFAULT_PHI_BINS)?)?),
            TheoremArg::Cleaning => verdicts.push(cleaning_check(f, a.r, a.zero_tol)?),
            TheoremArg::Rescaled => {
                let d_f = &est.as_ref().unwrap().arcs;
                let seq = rescaled_sequence(f, &parse_schedule(&a.schedule)?, a.budget)?;
                let mut cfg = RescaledCheckConfig { zero_tol: a.zero_tol, ..RescaledCheckConfig::default() };
                if let Some(alpha) = i_alpha_unrotated(d_f, cfg.angle_tol) {
                    let rho = estimate_rho(f, alpha)?;
                    cfg.rho = Some(rho);
                    extra.insert("rescaled_rho".to_string(), json!(rho));
                }
                for rm in &seq {
                    verdicts.push(rescaled_range_check(rm, d_f, a.grid, &cfg)?);
                }
            }
            TheoremArg::Log2 | TheoremArg::Suite => unreachable!(),
        }
    }
    verdicts.sort_by_key(|v| v.theorem);
    let consistent = verdicts.iter().all(TheoremVerdict::consistent);
    let summary: Vec<Value> = verdicts
        .iter()
        .map(|v| json!({ "theorem": v.theorem, "applicable": v.applicable, "hypothesis": v.hypothesis.holds, "conclusion": v.conclusion.holds, "consistent": v.consistent() }))
        .collect();
    Ok(Report {
        consistent,
        doc: json!({
            "command": "check",
            "map": f.as_ref().map(map_doc),
            "consistent": consistent,
            "summary": summary,
            "verdicts": to_value(&verdicts),
            "extra": extra,
        }),
    })
}

fn cmd_catalog(ctx: &Ctx, a: &CatalogArgs) -> CmdResult {
    let cat = ctx.catalog()?;
    let show = |e: &CatalogEntry| {
        json!({
            "name": e.name,
            "kind": to_value(&e.kind),
            "literal": e.literal,
            "arcs_deg": e.arcs_deg,
            "description": e.description,
            "expected": to_value(&e.expected),
            "sha256": e.sha256,
            "verified": e.verify().is_ok(),
        })
    };
    let doc = match &a.name {
        Some(n) => json!({ "command": "catalog", "version": cat.version, "entry": show(cat.get(n)?) }),
        None => json!({ "command": "catalog", "version": cat.version, "entries": cat.entries.iter().map(show).collect::<Vec<_>>() }),
    };
    Ok(Report::ok(doc))
}

fn cmd_plot(ctx: &Ctx, a: &PlotArgs) -> CmdResult {
    let f = ctx.map(&a.src)?;
    let out = a.out.as_ref().ok_or_else(|| Error::InvalidArgument("--out is required".into()))?;
    let title = f.name.clone().unwrap_or_else(|| f.literal());
    let mut doc = json!({ "command": "plot", "map": map_doc(&f), "kind": a.kind, "out": out });
    let svg = match a.kind {
        PlotKind::Range => {
            let s = sample(&f, &a.sample)?;
            let est = estimate_directions(&s, &DirectionConfig { bins: a.bins, growth: 2.0 })?;
            doc["arcs_deg"] = arcs_deg(&est.arcs);
            doc["points"] = json!(s.len());
            io::range_svg(&s, Some(&est.arcs), &title)
        }
        PlotKind::Zeros => {
            let rect = Rect::parse(&a.rect)?;
            let curves = trace_zero_set(component(&f, a.component), rect, a.step)?;
            doc["curves"] = json!(curves.len());
            io::curves_svg(&curves, rect, &title)
        }
    };
    std::fs::write(out, svg)?;
    Ok(Report::ok(doc))
}

fn num() -> Value {
    json!({ "type": "number" })
}

fn int() -> Value {
    json!({ "type": "integer" })
}

fn string() -> Value {
    json!({ "type": "string" })
}

fn boolean() -> Value {
    json!({ "type": "boolean" })
}

fn array(items: Value) -> Value {
    json!({ "type": "array", "items": items })
}

fn nullable(t: Value) -> Value {
    json!({ "anyOf": [t, { "type": "null" }] })
}

fn object(props: &[(&str, Value)]) -> Value {
    let required: Vec<&str> = props.iter().map(|(k, _)| *k).collect();
    let map: serde_json::Map<String, Value> = props.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
    json!({ "type": "object", "properties": map, "required": required })
}

fn complex_schema() -> Value {
    json!({ "type": "array", "items": { "type": "number" }, "minItems": 2, "maxItems": 2 })
}

fn arcs_schema() -> Value {
    array(json!({ "type": "array", "items": { "type": "number" }, "minItems": 2, "maxItems": 2 }))
}

fn check_schema() -> Value {
    object(&[("holds", boolean()), ("witnesses", array(json!({ "type": "object" })))])
}

fn verdict_schema() -> Value {
    object(&[
        ("theorem", string()),
        ("applicable", boolean()),
        ("hypothesis", check_schema()),
        ("conclusion", check_schema()),
        ("params", json!({ "type": "object" })),
        ("sampling", json!({ "type": "object" })),
    ])
}

fn map_schema() -> Value {
    object(&[("name", nullable(string())), ("literal", string())])
}

fn schema(cmd: &Cmd) -> Value {
    let (name, body) = match cmd {
        Cmd::Eval(_) => (
            "eval",
            object(&[
                ("command", string()),
                ("map", map_schema()),
                ("values", array(object(&[("z", string()), ("w", string()), ("u", num()), ("v", num())]))),
            ]),
        ),
        Cmd::Sample(_) => (
            "sample",
            object(&[
                ("command", string()),
                ("map", map_schema()),
                ("meta", json!({ "type": "object" })),
                ("points", int()),
                ("u_range", array(num())),
                ("v_range", array(num())),
                ("out", nullable(string())),
            ]),
        ),
        Cmd::Directions(_) => (
            "directions",
            object(&[
                ("command", string()),
                ("map", nullable(map_schema())),
                ("arcs", arcs_schema()),
                ("arcs_deg", arcs_schema()),
                ("estimate", nullable(json!({ "type": "object" }))),
            ]),
        ),
        Cmd::Antipodal(_) => (
            "antipodal",
            object(&[
                ("command", string()),
                ("source", json!({ "type": "object" })),
                ("arcs_deg", arcs_schema()),
                ("tol_deg", num()),
                ("pairs", arcs_schema()),
                ("pairs_deg", arcs_schema()),
                ("has_antipodal_pair", boolean()),
                ("gap_alpha", nullable(num())),
                ("gap_alpha_deg", nullable(num())),
            ]),
        ),
        Cmd::Normalize(_) => (
            "normalize",
            object(&[
                ("command", string()),
                ("source", json!({ "type": "object" })),
                ("arcs_deg", arcs_schema()),
                ("tol_deg", num()),
                ("normalization", nullable(json!({ "type": "object" }))),
                ("rotation_deg", nullable(num())),
                ("rotated_arcs_deg", nullable(arcs_schema())),
                ("i_alpha_fit", nullable(json!({ "type": "object" }))),
            ]),
        ),
        Cmd::LewisDiscs(_) => (
            "lewis-discs",
            object(&[
                ("command", string()),
                ("map", map_schema()),
                (
                    "disc",
                    object(&[
                        ("center", complex_schema()),
                        ("radius", num()),
                        ("m_n", num()),
                        ("growth_ratio", num()),
                        ("doubling_ratio", num()),
                        ("c0", num()),
                        ("within_budget", boolean()),
                    ]),
                ),
            ]),
        ),
        Cmd::Rescale(_) => (
            "rescale",
            object(&[
                ("command", string()),
                ("map", map_schema()),
                ("grid", int()),
                ("members", array(object(&[("disc", json!({ "type": "object" })), ("certificate", json!({ "type": "object" })), ("holds", boolean())]))),
                ("all_hold", boolean()),
            ]),
        ),
        Cmd::Zeros(_) => (
            "zeros",
            object(&[
                ("command", string()),
                ("map", map_schema()),
                ("component", string()),
                ("rect", json!({ "type": "object" })),
                ("step", num()),
                ("curves", array(object(&[("id", int()), ("points", int()), ("length", num()), ("closed", boolean())]))),
                ("out", nullable(string())),
            ]),
        ),
        Cmd::LocalStructure(_) => (
            "local-structure",
            object(&[
                ("command", string()),
                ("map", map_schema()),
                ("component", string()),
                ("structure", object(&[("center", complex_schema()), ("multiplicity", int()), ("ray_angles", array(num())), ("sector_signs", array(int()))])),
                ("ray_angles_deg", array(num())),
            ]),
        ),
        Cmd::Tracts(_) => (
            "tracts",
            object(&[
                ("command", string()),
                ("map", map_schema()),
                ("component", string()),
                ("report", object(&[("degree", int()), ("radius", num()), ("sign_changes", int()), ("components", int())])),
                ("expected_sign_changes", int()),
            ]),
        ),
        Cmd::Dependence(_) => (
            "dependence",
            object(&[
                ("command", string()),
                ("map", map_schema()),
                ("report", object(&[("b", num()), ("residual", num()), ("dependent", boolean()), ("cone_hypothesis", boolean())])),
                ("sampling", json!({ "type": "object" })),
            ]),
        ),
        Cmd::Phi(_) => (
            "phi",
            object(&[
                ("command", string()),
                ("map", map_schema()),
                ("bins", int()),
                ("u_extent", array(num())),
                ("empty_bins", int()),
                ("scales", array(num())),
                ("sublinearity", json!({ "anyOf": [verdict_schema(), object(&[("error", string())])] })),
                ("out", nullable(string())),
            ]),
        ),
        Cmd::Check(_) => (
            "check",
            object(&[
                ("command", string()),
                ("map", nullable(map_schema())),
                ("consistent", boolean()),
                ("summary", array(object(&[("theorem", string()), ("applicable", boolean()), ("hypothesis", boolean()), ("conclusion", boolean()), ("consistent", boolean())]))),
                ("verdicts", array(verdict_schema())),
                ("extra", json!({ "type": "object" })),
            ]),
        ),
        Cmd::Catalog(_) => (
            "catalog",
            object(&[
                ("command", string()),
                ("version", int()),
                (
                    "entries",
                    array(object(&[
                        ("name", string()),
                        ("kind", json!({ "enum": ["map", "arcs"] })),
                        ("literal", nullable(string())),
                        ("arcs_deg", nullable(arcs_schema())),
                        ("description", string()),
                        ("expected", json!({ "type": "object" })),
                        ("sha256", string()),
                        ("verified", boolean()),
                    ])),
                ),
            ]),
        ),
        Cmd::Plot(_) => (
            "plot",
            object(&[("command", string()), ("map", map_schema()), ("kind", json!({ "enum": ["range", "zeros"] })), ("out", string())]),
        ),
    };
    let mut body = body;
    body["$schema"] = json!("https://json-schema.org/draft/2020-12/schema");
    body["title"] = json!(format!("harmonic-range {name} output"));
    body
}

/// Appends `--key value` for each `key=value` line of the config file whose
/// flag is not already on the command line.
fn apply_config(mut argv: Vec<String>) -> Result<Vec<String>, String> {
    let Some(pos) = argv.iter().position(|a| a == "--config" || a.starts_with("--config=")) else {
        return Ok(argv);
    };
    let path = match argv[pos].strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => argv.get(pos + 1).cloned().ok_or("--config needs a path")?,
    };
    let text = std::fs::read_to_string(&path).map_err(|e| format!("config {path}: {e}"))?;
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| format!("config {path}:{}: expected key=value", i + 1))?;
        let flag = format!("--{}", k.trim().trim_start_matches("--"));
        let given = argv.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match v.trim() {
            "true" => argv.push(flag),
            "false" => {}
            v => argv.push(format!("{flag}={v}")),
        }
    }
    Ok(argv)
}

fn init_threads() -> Result<(), String> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v.trim().parse().map_err(|_| format!("{THREADS_ENV} must be a positive integer, got '{v}'"))?;
        if n == 0 {
            return Err(format!("{THREADS_ENV} must be positive"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    Ok(())
}

fn print_json(v: &Value) {
    use std::io::Write;
    // a closed pipe downstream is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    print_json(&json!({ "error": msg }));
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let argv = match apply_config(std::env::args().collect()) {
        Ok(a) => a,
        Err(e) => return usage_error(&e),
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.schema {
        print_json(&schema(&cli.cmd));
        return ExitCode::SUCCESS;
    }
    if let Err(e) = init_threads() {
        return usage_error(&e);
    }
    let ctx = Ctx { catalog_file: cli.catalog_file.clone() };
    let result = match &cli.cmd {
        Cmd::Eval(a) => cmd_eval(&ctx, a),
        Cmd::Sample(a) => cmd_sample(&ctx, a),
        Cmd::Directions(a) => cmd_directions(&ctx, a),
        Cmd::Antipodal(a) => cmd_antipodal(&ctx, a),
        Cmd::Normalize(a) => cmd_normalize(&ctx, a),
        Cmd::LewisDiscs(a) => cmd_lewis(&ctx, a),
        Cmd::Rescale(a) => cmd_rescale(&ctx, a),
        Cmd::Zeros(a) => cmd_zeros(&ctx, a),
        Cmd::LocalStructure(a) => cmd_local(&ctx, a),
        Cmd::Tracts(a) => cmd_tracts(&ctx, a),
        Cmd::Dependence(a) => cmd_dependence(&ctx, a),
        Cmd::Phi(a) => cmd_phi(&ctx, a),
        Cmd::Check(a) => cmd_check(&ctx, a),
        Cmd::Catalog(a) => cmd_catalog(&ctx, a),
        Cmd::Plot(a) => cmd_plot(&ctx, a),
    };
    match result {
        Ok(r) => {
            print_json(&r.doc);
            if r.consistent {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => usage_error(&e.to_string()),
    }
}
