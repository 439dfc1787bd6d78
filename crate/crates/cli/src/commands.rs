use crate::json::{float, Json, Obj};
use crate::{Failure, Kind};
use besselext::corpus::{parse_trial, ProblemConfig, Trial};
use besselext::extensions::{classify as classify_problem, det2, krein_closed_form_q0, krein_data, positivity_lower_bound};
use besselext::extensions::{EndpointKind, ExtensionSpec, KreinData, KreinMode};
use besselext::hardy::{hardy_report, muckenhoupt as muckenhoupt_constant, Constant, MuckenhouptKind, Variant};
use besselext::numerics::Tolerance;
use besselext::spectra::{eigenvalues, lowest_eigenvalue, resolve};
use besselext::BesselProblem;

pub struct Context<'a> {
    pub config: &'a ProblemConfig,
    pub problem: &'a BesselProblem,
    pub tol: Tolerance,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn header(command: &str, ctx: &Context) -> Obj {
    let c = ctx.config;
    let problem = Obj::new().with("a", c.a).with("b", c.b).with("sa", c.sa).with("sb", c.sb).with("q", c.q.as_str());
    Obj::new().with("schema", 1usize).with("command", command).with("problem", problem)
}

fn kind_name(k: EndpointKind) -> &'static str {
    match k {
        EndpointKind::LimitCircle => "LC",
        EndpointKind::LimitPoint => "LP",
    }
}

pub fn classify(ctx: &Context) -> Json {
    let c = classify_problem(ctx.problem);
    header("classify", ctx).with("at_a", kind_name(c.at_a)).with("at_b", kind_name(c.at_b)).with("n", c.deficiency).into()
}

fn numbers(text: &str, n: usize, what: &str) -> Result<Vec<Option<f64>>, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(usage(format!("{what} needs {n} comma-separated values, got {text:?}")));
    }
    parts
        .iter()
        .map(|p| match *p {
            "-" | "lp" => Ok(None),
            _ => p.parse::<f64>().map(Some).map_err(|_| usage(format!("{what}: {p:?} is not a number"))),
        })
        .collect()
}

pub fn parse_extension(text: &str) -> Result<ExtensionSpec, Failure> {
    let text = text.trim();
    match text {
        "friedrichs" => return Ok(ExtensionSpec::Friedrichs),
        "krein" => return Ok(ExtensionSpec::KreinVonNeumann),
        _ => {}
    }
    if let Some(rest) = text.strip_prefix("separated:") {
        let v = numbers(rest, 2, "separated")?;
        return Ok(ExtensionSpec::Separated { alpha: v[0], beta: v[1] });
    }
    if let Some(rest) = text.strip_prefix("coupled:") {
        let v = numbers(rest, 5, "coupled")?;
        let v: Vec<f64> = v.into_iter().map(|x| x.ok_or_else(|| usage("coupled entries must all be numbers"))).collect::<Result<_, _>>()?;
        return Ok(ExtensionSpec::Coupled { phi: v[0], r: [[v[1], v[2]], [v[3], v[4]]] });
    }
    Err(usage(format!("--ext {text:?}: expected friedrichs, krein, separated:<α,β> or coupled:<φ,r11,r12,r21,r22>")))
}

fn matrix(r: [[f64; 2]; 2]) -> Json {
    Json::Arr(vec![vec![r[0][0], r[0][1]].into(), vec![r[1][0], r[1][1]].into()])
}

fn extension_json(spec: &ExtensionSpec) -> Json {
    match *spec {
        ExtensionSpec::Separated { alpha, beta } => Obj::new().with("type", "separated").with("alpha", alpha).with("beta", beta).into(),
        ExtensionSpec::Coupled { phi, r } => Obj::new().with("type", "coupled").with("phi", phi).with("r", matrix(r)).into(),
        ExtensionSpec::Friedrichs => Obj::new().with("type", "friedrichs").into(),
        ExtensionSpec::KreinVonNeumann => Obj::new().with("type", "krein").into(),
    }
}

/// The report and the CSV table of the eigenvalues.
pub fn spectrum(ctx: &Context, ext: &str, lmin: Option<f64>, lmax: Option<f64>) -> Result<(Json, String), Failure> {
    let requested = parse_extension(ext)?;
    let spec = resolve(ctx.problem, &requested, &ctx.tol)?;
    let l = ctx.problem.length();
    let floor = -ctx.problem.q_bound() - 50.0 / (l * l);
    let (lo, hi) = match (lmin, lmax) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            let bottom = lowest_eigenvalue(ctx.problem, &spec, &ctx.tol)?;
            let lo = lmin.unwrap_or(if bottom >= floor { floor } else { bottom - 1.0 / (l * l) });
            (lo, lmax.unwrap_or(bottom + 400.0 / (l * l)))
        }
    };
    if !(lo < hi) {
        return Err(usage(format!("empty eigenvalue window [{lo}, {hi}]")));
    }
    let s = eigenvalues(ctx.problem, &spec, (lo, hi), &ctx.tol)?;
    let mut table = String::from("lambda,multiplicity,residual\n");
    let rows: Vec<Json> = s
        .eigenvalues
        .iter()
        .map(|e| {
            table += &format!("{},{},{}\n", float(e.lambda), e.multiplicity, float(e.residual));
            Obj::new().with("lambda", e.lambda).with("multiplicity", e.multiplicity as usize).with("residual", e.residual).into()
        })
        .collect();
    let report = header("spectrum", ctx)
        .with("requested", ext.trim())
        .with("extension", extension_json(&spec))
        .with("range", vec![lo, hi])
        .with("eigenvalues", Json::Arr(rows));
    Ok((report.into(), table))
}

fn krein_json(d: &KreinData) -> Json {
    let mode = match d.mode {
        KreinMode::AngleAtA => "angle_at_a",
        KreinMode::AngleAtB => "angle_at_b",
        KreinMode::Matrix => "matrix",
        KreinMode::Trivial => "trivial",
    };
    let o = Obj::new().with("mode", mode);
    match d.mode {
        KreinMode::AngleAtA => o.with("cot_alpha", d.cot_value).with("alpha", d.angle),
        KreinMode::AngleAtB => o.with("cot_beta", d.cot_value).with("beta", d.angle),
        KreinMode::Matrix => {
            let r = d.r_k.expect("matrix mode carries R_K");
            o.with("r", matrix(r)).with("det", det2(&r))
        }
        KreinMode::Trivial => o,
    }
    .into()
}

fn discrepancy(x: &KreinData, y: &KreinData) -> Option<f64> {
    match (x.r_k, y.r_k, x.cot_value, y.cot_value) {
        (Some(r), Some(s), _, _) => Some((0..4).map(|k| (r[k / 2][k % 2] - s[k / 2][k % 2]).abs()).fold(0.0, f64::max)),
        (_, _, Some(c), Some(d)) => Some((c - d).abs()),
        _ if x.mode == KreinMode::Trivial && y.mode == KreinMode::Trivial => Some(0.0),
        _ => None,
    }
}

pub fn krein(ctx: &Context) -> Result<Json, Failure> {
    let pos = positivity_lower_bound(ctx.problem, &ctx.tol)?;
    if !pos.available {
        return Err(Failure::Unavailable(format!(
            "the Krein–von Neumann extension needs a strictly positive minimal operator, but the lowest Friedrichs eigenvalue is {:e} (threshold {:e})",
            pos.epsilon, pos.threshold
        )));
    }
    let numeric = krein_data(ctx.problem, &ctx.tol)?;
    let closed = if ctx.problem.q.is_zero() { Some(krein_closed_form_q0(ctx.problem)?) } else { None };
    let gap = closed.as_ref().and_then(|c| discrepancy(&numeric, c));
    let report = header("krein", ctx)
        .with("epsilon", pos.epsilon)
        .with("threshold", pos.threshold)
        .with("numeric", krein_json(&numeric))
        .with("closed_form", closed.as_ref().map_or(Json::Null, krein_json))
        .with("discrepancy", gap)
        .with("agree", gap.map(|g| g <= 1e-6));
    Ok(report.into())
}

pub struct LogOptions {
    pub r0: Option<f64>,
    pub r1: Option<f64>,
    pub s: Option<f64>,
    pub big_r: Option<f64>,
}

fn load_trial(spec: &str, lo: f64, hi: f64) -> Result<Trial, Failure> {
    let path = std::path::Path::new(spec);
    let text = if path.is_file() {
        let body = std::fs::read_to_string(path).map_err(|e| usage(format!("{spec}: {e}")))?;
        body.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
            .find(|l| !l.is_empty())
            .ok_or_else(|| usage(format!("{spec}: no trial spec in file")))?
    } else {
        spec.to_string()
    };
    Ok(parse_trial(&text, lo, hi)?)
}

pub fn hardy(ctx: &Context, variant: &str, trial: &str, log: LogOptions) -> Result<Json, Failure> {
    let p = ctx.problem;
    let (a, b) = (p.a, p.b);
    let (variant, lo, hi) = match variant {
        "power" => (Variant::Power, a, b),
        "distance" => (Variant::Distance, a, b),
        "sine" => (Variant::Sine, a, b),
        "halfline" => (Variant::HalfLine, a, b),
        "log-refined" => {
            let r0 = log.r0.unwrap_or(a + 0.1 * (b - a));
            let r1 = log.r1.unwrap_or(b);
            let big_r = log.big_r.unwrap_or(2.0 * (b - a));
            (Variant::LogRefined { a, s: log.s.unwrap_or(p.s_a), big_r }, r0, r1)
        }
        other => return Err(usage(format!("--variant {other:?}: expected power, distance, sine, halfline or log-refined"))),
    };
    let f = load_trial(trial, lo, hi)?;
    let r = hardy_report(|x| f.eval(x), variant, lo, hi, &ctx.tol)?;
    let report = header("hardy", ctx)
        .with("variant", variant.name())
        .with("trial", f.name.as_str())
        .with("interval", vec![lo, hi])
        .with("lhs", r.lhs)
        .with("rhs", r.rhs)
        .with("ratio", r.ratio)
        .with("constant", r.constant)
        .with("satisfied", r.satisfied);
    Ok(report.into())
}

/// Weight functions on `(a, b)`.
pub fn parse_weight(spec: &str, a: f64, b: f64) -> Result<Box<dyn Fn(f64) -> f64>, Failure> {
    let (name, arg) = spec.split_once(':').ok_or_else(|| usage(format!("weight {spec:?}: expected <kind>:<number>")))?;
    let v: f64 = arg.trim().parse().ok().filter(|v: &f64| v.is_finite()).ok_or_else(|| usage(format!("weight {spec:?}: bad number")))?;
    Ok(match name.trim() {
        "const" if v > 0.0 => Box::new(move |_| v),
        "pow" => Box::new(move |x: f64| (x - a).powf(v)),
        "rpow" => Box::new(move |x: f64| (b - x).powf(v)),
        "dist" => Box::new(move |x: f64| (x - a).min(b - x).powf(v)),
        "const" => return Err(usage(format!("weight {spec:?}: constant must be positive"))),
        other => return Err(usage(format!("weight kind {other:?}: expected const, pow, rpow or dist"))),
    })
}

pub fn muckenhoupt(ctx: &Context, kind: Kind, u: &str, v: &str, p: f64) -> Result<Json, Failure> {
    let (a, b) = (ctx.problem.a, ctx.problem.b);
    let (uf, vf) = (parse_weight(u, a, b)?, parse_weight(v, a, b)?);
    let k = match kind {
        Kind::A => MuckenhouptKind::AForm,
        Kind::B => MuckenhouptKind::BForm,
    };
    let r = muckenhoupt_constant(k, uf, vf, p, a, b, &ctx.tol)?;
    let value = match r.value {
        Constant::Finite(c) => Json::Num(c),
        Constant::Infinite => Json::Str("infinite".into()),
    };
    let report = header("muckenhoupt", ctx)
        .with("kind", if kind == Kind::A { "A" } else { "B" })
        .with("u", u)
        .with("v", v)
        .with("p", p)
        .with("value", value)
        .with("bracket", r.bracket.map(|(l, h)| vec![l, h]))
        .with("sup_location", r.sup_location);
    Ok(report.into())
}
