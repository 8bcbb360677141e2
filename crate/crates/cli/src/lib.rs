//! Command line front end: instance files in, JSON reports and SVG out.

pub mod generate;
pub mod pts;
pub mod report;
pub mod svg;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};
use thiserror::Error;

use steiner_core::analysis::{
    ball_profile, check_main_bound, coarea_audit, count_segments_in_ball, exchange_audit, main_bound,
    planar_branched_components_audit, segment_count_bound, sphere_competitor, AnalysisError,
};
use steiner_core::geometry::{clip_to_ball, Ball};
use steiner_core::pathology::{
    accumulation_report, run_construction, EpsSchedule, PathologyError, PathologyOptions, MAX_STAGES,
};
use steiner_core::solver::{validate_solution, InstanceError};
use steiner_core::spanning::{hypercube_instance, prim_mst};
use steiner_core::sphere_connect::{c_min, connect_on_sphere, length_constant};
use steiner_core::topology::ABSOLUTE_N_MAX;
use steiner_core::{Forest64, Instance64, Point64, Solution64, SolveOptions, VertexKind};

use report::{digest, num, nums, Relation, RunReport, VerdictLine};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "steiner", version, about = "Exact Euclidean Steiner trees and their audits")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the report or instance here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Record wall time in the report (makes reports differ between runs).
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an instance exactly.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Render the tree (planar instances only).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Solve, then audit the length of the tree in a terminal-free ball.
    Analyze {
        file: PathBuf,
        /// Comma-separated coordinates of the ball center.
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        /// Ball radius.
        #[arg(long)]
        s: f64,
        /// Inner radius ratio in (0, 1).
        #[arg(long)]
        rho: f64,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Build the accumulating tree stage by stage.
    Pathology {
        /// Last stage index.
        #[arg(long, default_value_t = 5)]
        stages: usize,
        #[arg(long, default_value_t = 1e-3)]
        eps1: f64,
        /// Recorded only; the construction is deterministic.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest stage solved exactly.
        #[arg(long, default_value_t = steiner_core::topology::DEFAULT_N_MAX)]
        n_max: usize,
        /// Also cap each shift by the squared gap estimate over 64.
        #[arg(long)]
        use_delta: bool,
        /// Directory for one SVG per stage.
        #[arg(long)]
        svg_dir: Option<PathBuf>,
    },
    /// Write a seeded instance file.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
    },
    /// Connect random points on the unit sphere.
    SphereConnect {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum GenerateKind {
    /// Corners of {-1, 1}^d.
    Hypercube {
        #[arg(long)]
        d: usize,
    },
    /// Points on a circle with at most one gap longer than the radius.
    Cocircular {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Uniform points in the unit ball.
    RandomBall {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Uniform points on the unit sphere.
    Sphere {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct SolverArgs {
    /// Largest terminal count accepted.
    #[arg(long, default_value_t = steiner_core::topology::DEFAULT_N_MAX)]
    pub n_max: usize,
    /// Minimize every topology instead of pruning by lower bounds.
    #[arg(long)]
    pub no_prune: bool,
    /// Keep the numerical winner instead of Melzak's reconstruction.
    #[arg(long)]
    pub no_melzak: bool,
}

impl SolverArgs {
    fn options(&self) -> SolveOptions {
        SolveOptions {
            n_max: self.n_max,
            prune: !self.no_prune,
            melzak: !self.no_melzak,
            ..SolveOptions::default()
        }
    }
}

/// What a command produced: the main output text and side files.
#[derive(Debug)]
pub struct Output {
    pub text: String,
    pub files: Vec<(PathBuf, String)>,
    /// Every verdict passed.
    pub pass: bool,
}

fn read_instance(path: &Path) -> Result<(Instance64, String), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::Parse(format!("{}: not UTF-8", path.display())))?;
    let points = pts::parse_pts(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let inst = Instance64::new(points).map_err(|e| match e {
        InstanceError::Geometry(g) => CliError::Parse(g.to_string()),
        other => CliError::Precondition(other.to_string()),
    })?;
    Ok((inst, digest(&bytes)))
}

fn solve_checked(inst: &Instance64, args: &SolverArgs) -> Result<Solution64, CliError> {
    if args.n_max > ABSOLUTE_N_MAX {
        return Err(CliError::Unsupported(format!("--n-max above {ABSOLUTE_N_MAX}")));
    }
    if inst.n() > args.n_max {
        return Err(CliError::Precondition(format!(
            "{} terminals exceed n_max = {}",
            inst.n(),
            args.n_max
        )));
    }
    steiner_core::solve(inst, &args.options()).map_err(|e| CliError::Failed(e.to_string()))
}

fn point_json(p: &Point64) -> Value {
    nums(p.coords())
}

fn forest_json(f: &Forest64) -> Value {
    let kinds: Vec<Value> = (0..f.vertex_count())
        .map(|i| {
            match f.kind(i) {
                VertexKind::Terminal => "terminal",
                VertexKind::Branch => "branch",
                VertexKind::Boundary => "boundary",
            }
            .into()
        })
        .collect();
    json!({
        "vertices": f.vertices().iter().map(point_json).collect::<Vec<_>>(),
        "kinds": kinds,
        "edges": f.edges().iter().map(|&(u, v)| json!([u, v])).collect::<Vec<_>>(),
    })
}

fn solution_json(sol: &Solution64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("length".into(), num(sol.length));
    m.insert("topology_code".into(), sol.code.clone().into());
    m.insert("steiner_points".into(), sol.steiner_point_count().into());
    m.insert("melzak_exact".into(), sol.melzak_exact.into());
    m.insert("topologies".into(), sol.audit.len().into());
    m.insert("pruned".into(), sol.pruned_count().into());
    m.insert("tied_codes".into(), sol.tied_codes.clone().into());
    m.insert("tree".into(), forest_json(&sol.tree));
    m
}

fn solution_verdicts(r: &mut RunReport, sol: &Solution64, inst: &Instance64) {
    let v = validate_solution(&sol.tree, inst);
    r.verdict(VerdictLine::flag("connected", v.connected));
    r.verdict(VerdictLine::flag("acyclic", v.acyclic));
    r.verdict(VerdictLine::flag("spans_terminals", v.spans_terminals));
    r.verdict(VerdictLine::flag("degrees", v.degrees_ok));
    let hull_tol = steiner_core::TOL_GEOM * (1.0 + inst.diameter());
    r.verdict(VerdictLine::at_most("hull_excess", v.hull_excess, hull_tol, v.in_hull));
    r.verdict(VerdictLine::flag("local_minimality", v.local_minimality));
    if let Some((res, imag)) = v.maxwell {
        r.verdict(VerdictLine::at_most("maxwell_residual", res.max(imag), 1e-9, v.maxwell_ok));
    }
    let ratio = prim_mst(inst.terminals()).length / sol.length;
    r.verdict(VerdictLine::at_least("steiner_ratio_min", ratio, 1.0, ratio >= 1.0 - 1e-9));
    r.verdict(VerdictLine::at_most("steiner_ratio_max", ratio, 3f64.sqrt(), ratio <= 3f64.sqrt() + 1e-9));
}

fn svg_file(path: &Option<PathBuf>, tree: &Forest64, circles: &[svg::Circle], title: &str) -> Result<Vec<(PathBuf, String)>, CliError> {
    match path {
        None => Ok(Vec::new()),
        Some(p) => svg::render(tree, circles, title)
            .map(|s| vec![(p.clone(), s)])
            .ok_or_else(|| CliError::Unsupported("SVG output needs a planar instance".into())),
    }
}

fn finish(mut r: RunReport, files: Vec<(PathBuf, String)>, start: Instant, timing: bool) -> Output {
    if timing {
        r.wall_time = Some(start.elapsed().as_secs_f64());
    }
    Output {
        text: r.render(),
        files,
        pass: r.pass(),
    }
}

pub fn cmd_solve(file: &Path, solver: &SolverArgs, svg_out: &Option<PathBuf>) -> Result<(RunReport, Vec<(PathBuf, String)>), CliError> {
    let (inst, dig) = read_instance(file)?;
    let sol = solve_checked(&inst, solver)?;
    let mut r = RunReport::new("solve");
    r.input_digest = Some(dig);
    r.put("instance", json!({ "d": inst.dim(), "n": inst.n() }));
    for (k, v) in solution_json(&sol) {
        r.put(&k, v);
    }
    solution_verdicts(&mut r, &sol, &inst);
    let files = svg_file(svg_out, &sol.tree, &[], &format!("length {:.12}", sol.length))?;
    Ok((r, files))
}

fn parse_center(s: &str, d: usize) -> Result<Point64, CliError> {
    let coords = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| CliError::Parse(format!("bad center coordinate {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() != d {
        return Err(CliError::Precondition(format!("center has {} coordinates, instance has {d}", coords.len())));
    }
    Point64::new(coords).map_err(|e| CliError::Parse(e.to_string()))
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_analyze(
    file: &Path,
    center: &str,
    s: f64,
    rho: f64,
    samples: usize,
    solver: &SolverArgs,
    svg_out: &Option<PathBuf>,
) -> Result<(RunReport, Vec<(PathBuf, String)>), CliError> {
    let (inst, dig) = read_instance(file)?;
    let d = inst.dim();
    let x = parse_center(center, d)?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(CliError::Precondition(format!("s must be positive, got {s}")));
    }
    if !(rho > 0.0 && rho < 1.0) {
        return Err(CliError::Precondition(format!("rho must lie in (0, 1), got {rho}")));
    }
    if let Some(i) = inst
        .terminals()
        .iter()
        .position(|p| steiner_core::geometry::distance(p, &x).unwrap_or(f64::INFINITY) < s - steiner_core::TOL_GEOM)
    {
        return Err(CliError::Precondition(format!("terminal {i} lies inside the ball")));
    }
    let sol = solve_checked(&inst, solver)?;
    let tree = &sol.tree;
    let precondition = |e: AnalysisError| match e {
        AnalysisError::TerminalInBall(_) => CliError::Precondition(e.to_string()),
        other => CliError::Failed(other.to_string()),
    };
    let profile = ball_profile(tree, &inst, &x, s, samples).map_err(precondition)?;
    let r_in = rho * s;
    let mut r = RunReport::new("analyze");
    r.input_digest = Some(dig);
    r.put("instance", json!({ "d": d, "n": inst.n() }));
    r.put("length", num(sol.length));
    r.put("topology_code", sol.code.clone());
    r.put(
        "ball",
        json!({ "center": point_json(&x), "s": num(s), "rho": num(rho), "r": num(r_in) }),
    );
    r.put(
        "profile",
        json!({
            "radii": nums(&profile.radii),
            "lengths": nums(&profile.lengths),
            "crossings": profile.crossings,
            "monotone": profile.monotone,
            "coarea_defect": num(profile.coarea_defect),
        }),
    );
    let main = check_main_bound(&profile, d, rho);
    r.put("main_bound", num(if d > 2 { main_bound(d, rho) } else { 2.0 * PI * r_in }));
    r.verdict(VerdictLine::from_core("", &main, Relation::AtMost));
    r.verdict(VerdictLine::flag("profile_monotone", profile.monotone));
    r.verdict(VerdictLine::at_most(
        "coarea_differential",
        profile.coarea_defect,
        steiner_core::TOL_LEN * (1.0 + s),
        profile.differential_inequality_holds(),
    ));
    let ball = Ball::new(x.clone(), s).map_err(|e| CliError::Failed(e.to_string()))?;
    let inside = clip_to_ball(tree, &ball);
    r.verdict(VerdictLine::from_core("ball", &coarea_audit(&inside, &x), Relation::AtLeast));
    if d > 2 {
        let count = count_segments_in_ball(tree, &x, r_in) as f64;
        let bound = segment_count_bound(d, rho);
        r.put("segments_in_inner_ball", count as usize);
        r.verdict(VerdictLine::at_most("segment_count", count, bound, count <= bound));
    }
    let (clipped, competitor) = sphere_competitor(tree, &x, r_in).map_err(precondition)?;
    match exchange_audit(tree, &inst, &clipped, &competitor) {
        Ok(v) => r.verdict(VerdictLine::from_core("", &v, Relation::AtMost)),
        Err(AnalysisError::Disconnected) => r.verdict(VerdictLine::flag("exchange_connects", false)),
        Err(e) => return Err(CliError::Failed(e.to_string())),
    }
    if d == 2 {
        let b = planar_branched_components_audit(tree, &inst, &x, r_in).map_err(precondition)?;
        r.put("branched_components", b.components.len());
        r.verdict(VerdictLine::from_core("", &b.count, Relation::AtMost));
        r.verdict(VerdictLine::from_core("", &b.length, Relation::AtMost));
        r.verdict(VerdictLine::from_core("", &b.floor, Relation::AtLeast));
    }
    let circles = [
        svg::Circle { center: x.clone(), radius: s },
        svg::Circle { center: x.clone(), radius: r_in },
    ];
    let files = svg_file(svg_out, tree, &circles, "ball audit")?;
    Ok((r, files))
}

pub fn cmd_pathology(
    stages: usize,
    eps1: f64,
    seed: u64,
    n_max: usize,
    use_delta: bool,
    svg_dir: &Option<PathBuf>,
) -> Result<(RunReport, Vec<(PathBuf, String)>), CliError> {
    if stages > MAX_STAGES {
        return Err(CliError::Unsupported(format!("at most {MAX_STAGES} stages, asked for {stages}")));
    }
    let opts = PathologyOptions::default();
    if !(eps1 > 0.0 && eps1 <= opts.eps_cap) {
        return Err(CliError::Unsupported(format!("eps1 must lie in (0, {}], got {eps1}", opts.eps_cap)));
    }
    let schedule = EpsSchedule {
        first: eps1,
        use_delta,
        ..EpsSchedule::default()
    };
    let solve_opts = SolveOptions {
        n_max,
        ..SolveOptions::default()
    };
    let built = run_construction::<f64>(stages, &schedule, &opts, &solve_opts).map_err(|e| match e {
        PathologyError::TooManyStages(_) | PathologyError::ShiftTooLarge { .. } | PathologyError::NonPositiveShift => {
            CliError::Unsupported(e.to_string())
        }
        other => CliError::Failed(other.to_string()),
    })?;
    let mut r = RunReport::new("pathology");
    r.seed = Some(seed);
    r.put(
        "schedule",
        json!({ "eps1": num(eps1), "ratio": num(schedule.ratio), "use_delta": use_delta }),
    );
    let mut stage_json = Vec::new();
    let mut files = Vec::new();
    let mut prev_len: Option<f64> = None;
    for (st, cert) in &built {
        let j = st.j;
        let mut m = Map::new();
        m.insert("j".into(), j.into());
        m.insert("terminals".into(), st.terminals.len().into());
        m.insert("branch_points".into(), st.branch_count().into());
        m.insert("length".into(), num(st.length));
        m.insert("eps".into(), num(st.eps));
        m.insert(
            "delta".into(),
            st.delta.as_ref().map_or(Value::Null, |d| {
                json!({ "value": num(d.value), "exact": d.exact, "lower_bound": d.lower_bound })
            }),
        );
        m.insert("certification".into(), (if cert.exact { "exact" } else { "heuristic" }).into());
        m.insert("optimal".into(), cert.optimal.map_or(Value::Null, Value::from));
        m.insert("solver_length".into(), cert.solver_length.map_or(Value::Null, num));
        m.insert("rigidity".into(), num(cert.rigidity));
        m.insert("parallel_deviation".into(), num(st.parallel_deviation));
        m.insert(
            "eps_below_delta_sq_over_64".into(),
            st.gap_condition.map_or(Value::Null, Value::from),
        );
        m.insert(
            "shifts".into(),
            st.corners
                .iter()
                .map(|c| format!("{:?}", c.direction).to_lowercase())
                .collect::<Vec<_>>()
                .into(),
        );
        m.insert("tree".into(), forest_json(&st.tree));
        stage_json.push(Value::Object(m));

        let p = format!("stage{j}");
        r.verdict(VerdictLine::flag(format!("{p}.full"), cert.full));
        r.verdict(VerdictLine::flag(format!("{p}.counts"), cert.counts_ok));
        r.verdict(VerdictLine::flag(format!("{p}.on_circle"), cert.on_circle));
        r.verdict(VerdictLine::flag(format!("{p}.local_minimality"), cert.local_minimality));
        r.verdict(VerdictLine::at_most(format!("{p}.rigidity"), cert.rigidity, opts.rigidity_tol, cert.rigidity_ok));
        if let Some(opt) = cert.optimal {
            r.verdict(VerdictLine::flag(format!("{p}.solver_optimal"), opt));
            if let Some(d) = &st.delta {
                r.verdict(VerdictLine::at_least(format!("{p}.delta_positive"), d.value, 0.0, d.value > 0.0));
            }
        }
        if let Some(prev) = prev_len {
            let inc = st.length - prev;
            let bound = 4.0 * (2.0 * st.eps).sqrt();
            r.verdict(VerdictLine::at_most(format!("{p}.length_increment"), inc, bound, inc > 0.0 && inc < bound));
        }
        prev_len = Some(st.length);
        if let Some(dir) = svg_dir {
            let s = svg::render(&st.tree, &[svg::Circle { center: Point64::xy(0.0, 0.0), radius: 1.0 }], &p)
                .expect("stages are planar");
            files.push((dir.join(format!("{p}.svg")), s));
        }
    }
    r.put("stages", stage_json);
    if built.len() >= 3 {
        let stages: Vec<_> = built.into_iter().map(|(s, _)| s).collect();
        let acc = accumulation_report(&stages).map_err(|e| CliError::Failed(e.to_string()))?;
        r.put(
            "accumulation",
            json!({
                "limits": acc.limits.iter().map(point_json).collect::<Vec<_>>(),
                "sixth_power_residuals": nums(&acc.sixth_power_residuals),
                "cluster_sizes": acc.cluster_sizes,
                "unclustered": acc.unclustered,
                "radii": acc.radii.iter().map(|v| nums(v)).collect::<Vec<_>>(),
                "radius_bounds": nums(&acc.radius_bounds),
            }),
        );
        r.verdict(VerdictLine::at_least("accumulation.clusters", acc.clusters as f64, 4.0, acc.clusters == 4));
        let worst = acc.sixth_power_residuals.iter().fold(0.0f64, |m, &x| m.max(x));
        r.verdict(VerdictLine::at_most("accumulation.sixth_power", worst, 1e-6, worst <= 1e-6));
        r.verdict(VerdictLine::flag("accumulation.radii_within_bounds", acc.radii_within_bounds));
        r.verdict(VerdictLine::flag("accumulation.shrinking", acc.shrinking));
    }
    Ok((r, files))
}

pub fn cmd_sphere_connect(d: usize, t: usize, seed: u64) -> Result<RunReport, CliError> {
    if d < 3 {
        return Err(CliError::Unsupported(format!("the sphere connector needs d >= 3, got {d}")));
    }
    let points = generate::sphere(d, t, seed);
    let c = connect_on_sphere(&points, d, seed).map_err(|e| CliError::Failed(e.to_string()))?;
    let mut r = RunReport::new("sphere-connect");
    r.seed = Some(seed);
    r.put("d", d);
    r.put("t", t);
    r.put("c_min", num(c_min::<f64>(d)));
    r.put("length_constant", num(length_constant::<f64>(d)));
    r.put("length", num(c.length));
    r.put("vertices", c.forest.vertex_count());
    r.put("edges", c.forest.edge_count());
    r.verdict(VerdictLine::flag("connected", c.connected));
    r.verdict(VerdictLine::from_core("", &c.length_bound, Relation::AtMost));
    r.verdict(VerdictLine::from_core("", &c.attachment, Relation::AtMost));
    if let Some(p) = &c.packing {
        r.put("eps", num(p.eps));
        r.put("caps", p.k());
        r.put("min_separation", num(p.min_separation()));
        r.verdict(VerdictLine::from_core("caps", &p.k_bound, Relation::AtMost));
    }
    if let Some(p) = &c.prim {
        r.put("prim_step_max", num(p.max_step));
        r.put("prim_step_literal_sin4phi", json!({ "bound": num(p.literal_bound), "held": p.literal_held }));
        r.verdict(VerdictLine::at_most("prim_step_chord", p.max_step, p.chord_bound, p.chord_held));
        r.verdict(VerdictLine::at_most("prim_step_linear", p.max_step, p.linear_bound, p.linear_held));
    }
    Ok(r)
}

pub fn cmd_generate(kind: &GenerateKind) -> Result<String, CliError> {
    let bad = |m: String| Err(CliError::Unsupported(m));
    match *kind {
        GenerateKind::Hypercube { d } => {
            if !(2..=16).contains(&d) {
                return bad(format!("hypercube dimension must lie in 2..=16, got {d}"));
            }
            let (inst, _) = hypercube_instance::<f64>(d).map_err(|e| CliError::Failed(e.to_string()))?;
            Ok(pts::write_pts(inst.terminals(), &format!("hypercube {{-1,1}}^{d}")))
        }
        GenerateKind::Cocircular { n, r, seed } => {
            if n < 2 || !(r > 0.0 && r.is_finite()) {
                return bad(format!("cocircular needs n >= 2 and r > 0, got n = {n}, r = {r}"));
            }
            let p = generate::cocircular(n, r, seed);
            let long = generate::long_gap_count(&p, &Point64::xy(0.0, 0.0), r);
            if long > 1 {
                return Err(CliError::Failed(format!("{long} gaps exceed the radius")));
            }
            Ok(pts::write_pts(&p, &format!("cocircular n={n} r={r} seed={seed}, long gaps: {long}")))
        }
        GenerateKind::RandomBall { d, n, seed } => {
            if d < 2 {
                return bad(format!("dimension must be at least 2, got {d}"));
            }
            Ok(pts::write_pts(&generate::random_ball(d, n, seed), &format!("random-ball d={d} n={n} seed={seed}")))
        }
        GenerateKind::Sphere { d, t, seed } => {
            if d < 2 {
                return bad(format!("dimension must be at least 2, got {d}"));
            }
            Ok(pts::write_pts(&generate::sphere(d, t, seed), &format!("sphere d={d} t={t} seed={seed}")))
        }
    }
}

/// Runs a parsed command without touching the filesystem for output.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let start = Instant::now();
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Unsupported("--threads must be positive".into()));
        }
        // Only the first call in a process can size the global pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let (report, files) = match &cli.command {
        Command::Solve { file, solver, svg } => cmd_solve(file, solver, svg)?,
        Command::Analyze {
            file,
            center,
            s,
            rho,
            samples,
            solver,
            svg,
        } => cmd_analyze(file, center, *s, *rho, *samples, solver, svg)?,
        Command::Pathology {
            stages,
            eps1,
            seed,
            n_max,
            use_delta,
            svg_dir,
        } => cmd_pathology(*stages, *eps1, *seed, *n_max, *use_delta, svg_dir)?,
        Command::SphereConnect { d, t, seed } => (cmd_sphere_connect(*d, *t, *seed)?, Vec::new()),
        Command::Generate { kind } => {
            return Ok(Output {
                text: cmd_generate(kind)?,
                files: Vec::new(),
                pass: true,
            })
        }
    };
    Ok(finish(report, files, start, cli.timing))
}

/// Parses `args`, runs, writes outputs, and returns the exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            for (path, body) in &out.files {
                if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                    if let Err(e) = std::fs::create_dir_all(dir) {
                        eprintln!("error: {}: {e}", dir.display());
                        return 3;
                    }
                }
                if let Err(e) = std::fs::write(path, body) {
                    eprintln!("error: {}: {e}", path.display());
                    return 3;
                }
            }
            match &cli.out {
                Some(p) => {
                    if let Err(e) = std::fs::write(p, &out.text) {
                        eprintln!("error: {}: {e}", p.display());
                        return 3;
                    }
                }
                None => print!("{}", out.text),
            }
            if out.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
