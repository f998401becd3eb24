//! Subcommand implementations. Each resolves its defaults into the
//! configuration first, so the echoed configuration reproduces the run.

use std::f64::consts::PI;

use einstein_core::approx_metric::{einstein_error_on, error_sup_norm, ErrorWeight, ERROR_SAMPLES};
use einstein_core::bounds_audit::bound_chain;
use einstein_core::clifford::suite::{run_suite, SuiteConfig};
use einstein_core::einstein_solver::{
    coercivity_estimate, family_fit, newton_solve, GridScheme, NewtonConfig, RadialGrid,
};
use einstein_core::model_geometry::{
    cone_coefficient, curvature_components, greens_bound, largest_root, potential_derivatives,
    potential_v, ricci_residual, sec_max, solve_cone_angle, tube_distance, ModelError, ModelParams,
    TubePoint,
};
use einstein_core::numerics::FdOrder;
use einstein_core::profile::RadialProfile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{Command, Params, RunConfig};
use crate::error::CliError;
use crate::output::{Cell, Report};

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn nonempty<T>(name: &str, v: &Option<Vec<T>>) -> Result<(), CliError> {
    match v {
        Some(xs) if xs.is_empty() => Err(invalid(format!("{name} must not be empty"))),
        _ => Ok(()),
    }
}

fn positive(name: &str, x: Option<f64>) -> Result<(), CliError> {
    match x {
        Some(v) if !(v > 0.0 && v.is_finite()) => {
            Err(invalid(format!("{name} must be positive, got {v}")))
        }
        _ => Ok(()),
    }
}

fn scheme(p: &Params) -> Result<GridScheme, CliError> {
    p.scheme
        .as_deref()
        .unwrap_or("log")
        .parse()
        .map_err(invalid)
}

/// Fills command-specific defaults and checks parameter ranges that the
/// core operations do not already reject.
pub fn resolve(command: Command, given: &Params) -> Result<Params, CliError> {
    fn set<T>(slot: &mut Option<T>, v: T) {
        if slot.is_none() {
            *slot = Some(v);
        }
    }
    let mut p = given.clone();
    match command {
        Command::ConeSolve => {
            set(&mut p.n, 4);
            set(&mut p.l, vec![2]);
        }
        Command::ModelTable => {
            set(&mut p.n, 4);
            if p.a.is_none() {
                set(&mut p.l, vec![2]);
            }
            set(&mut p.u_max, vec![20.0]);
            set(&mut p.nodes, vec![201]);
            set(&mut p.scheme, "log".to_string());
            set(&mut p.guard, 1e-3);
        }
        Command::InterpError => {
            set(&mut p.n, 4);
            set(&mut p.l, vec![2]);
            set(&mut p.u, vec![10.0, 20.0, 40.0, 80.0]);
            set(&mut p.alpha, 0.2);
            let top =
                p.u.as_ref()
                    .and_then(|u| u.iter().cloned().reduce(f64::max))
                    .unwrap_or(80.0);
            set(&mut p.u_max, vec![2.0 * top]);
            set(&mut p.nodes, vec![ERROR_SAMPLES]);
            set(&mut p.grid, false);
        }
        Command::Newton => {
            set(&mut p.n, 4);
            set(&mut p.l, vec![2]);
            set(&mut p.u, vec![10.0]);
            set(&mut p.u_max, vec![40.0]);
            set(&mut p.nodes, vec![2000]);
            set(&mut p.scheme, "log".to_string());
            set(&mut p.guard, 1e-3);
            set(&mut p.tol, 1e-10);
        }
        Command::Coercivity => {
            set(&mut p.n, 4);
            set(&mut p.u_max, vec![50.0]);
            set(&mut p.nodes, vec![4000]);
            set(&mut p.scheme, "log".to_string());
            set(&mut p.guard, 5e-4);
            set(&mut p.tol, 1e-8);
        }
        Command::SpinVerify => {
            set(&mut p.n, 4);
            set(&mut p.cases, 500);
            set(&mut p.spin_cases, 100);
            set(&mut p.seed, 0);
        }
        Command::Bounds => {
            set(&mut p.n, 4);
            set(&mut p.i_m, 10.0);
            set(&mut p.big_a, 1.0);
            set(&mut p.a1, 1.0);
            set(&mut p.a2, 1.0);
        }
        Command::Distance => {
            set(&mut p.l, vec![2]);
            set(&mut p.pairs, 100);
            set(&mut p.seed, 0);
            set(&mut p.cutoff, 1.0);
        }
    }
    nonempty("l", &p.l)?;
    nonempty("U", &p.u)?;
    nonempty("U_max", &p.u_max)?;
    nonempty("nodes", &p.nodes)?;
    for u in p.u.iter().flatten().chain(p.u_max.iter().flatten()) {
        positive("U", Some(*u))?;
    }
    positive("guard", p.guard)?;
    positive("tol", p.tol)?;
    positive("cutoff", p.cutoff)?;
    if let Some(alpha) = p.alpha {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(invalid(format!("alpha must be non-negative, got {alpha}")));
        }
    }
    if p.scheme.is_some() {
        scheme(&p)?;
    }
    Ok(p)
}

pub fn execute(cfg: &RunConfig) -> Result<Report, CliError> {
    let params = resolve(cfg.command, &cfg.params)?;
    let config = RunConfig {
        params,
        ..cfg.clone()
    };
    let p = &config.params;
    let (columns, rows, summary) = match cfg.command {
        Command::ConeSolve => cone_solve(p)?,
        Command::ModelTable => model_table(p)?,
        Command::InterpError => interp_error(p)?,
        Command::Newton => newton(p)?,
        Command::Coercivity => coercivity(p)?,
        Command::SpinVerify => spin_verify(p)?,
        Command::Bounds => bounds(p)?,
        Command::Distance => distance(p)?,
    };
    Ok(Report {
        config,
        columns,
        rows,
        summary,
    })
}

type Table = (Vec<&'static str>, Vec<Vec<Cell>>, Vec<(&'static str, Cell)>);

fn req<T: Clone>(x: &Option<T>) -> T {
    x.clone().expect("filled by resolve")
}

fn first<T: Copy>(x: &Option<Vec<T>>) -> T {
    x.as_ref().expect("filled by resolve")[0]
}

fn model_params(p: &Params) -> Result<ModelParams, CliError> {
    let n = req(&p.n);
    match p.a {
        Some(a) => Ok(ModelParams::new(n, a)?),
        None => Ok(solve_cone_angle(n, first(&p.l))?),
    }
}

fn cone_solve(p: &Params) -> Result<Table, CliError> {
    let n = req(&p.n);
    let mut rows = Vec::new();
    for &l in p.l.as_ref().expect("filled by resolve") {
        let m = solve_cone_angle(n, l)?;
        let cone = cone_coefficient(&m)?;
        rows.push(vec![
            n.into(),
            l.into(),
            m.a.into(),
            cone.u_a.into(),
            cone.c_a.into(),
            cone.cone_angle.into(),
            sec_max(&m)?.into(),
        ]);
    }
    Ok((
        vec!["n", "l", "a", "u_a", "c_a", "cone_angle", "sec_max"],
        rows,
        Vec::new(),
    ))
}

fn model_table(p: &Params) -> Result<Table, CliError> {
    let m = model_params(p)?;
    let u_a = largest_root(&m)?;
    let grid = RadialGrid::new(
        u_a * (1.0 + req(&p.guard)),
        first(&p.u_max),
        first(&p.nodes),
        scheme(p)?,
    )?;
    let profile = RadialProfile::exact_model(&m, grid)?;
    let res = ricci_residual(&profile, FdOrder::Fourth)?;
    let mut rows = Vec::with_capacity(res.u.len());
    for (k, &u) in res.u.iter().enumerate() {
        let (v, dv, ddv) = potential_derivatives(u, &m)?;
        let f = curvature_components(u, &m)?;
        rows.push(vec![
            u.into(),
            v.into(),
            dv.into(),
            ddv.into(),
            f.tangential.into(),
            f.mixed.into(),
            f.normal.into(),
            res.f[k].into(),
            res.g[k].into(),
        ]);
    }
    let summary = vec![
        ("n", m.n.into()),
        ("a", m.a.into()),
        ("u_a", u_a.into()),
        ("sec_max", sec_max(&m)?.into()),
        ("residual_sup", res.sup().into()),
    ];
    let columns = vec![
        "u", "V", "dV", "d2V", "K_axis", "K_mixed", "K_normal", "F", "G",
    ];
    Ok((columns, rows, summary))
}

fn interp_error(p: &Params) -> Result<Table, CliError> {
    let m = model_params(p)?;
    let n = m.n;
    let samples = first(&p.nodes);
    let glues = p.u.as_ref().expect("filled by resolve");
    if req(&p.grid) {
        let mut rows = Vec::new();
        for &u_glue in glues {
            let grid = RadialGrid::new(0.5 * u_glue, u_glue, samples, GridScheme::Uniform)?;
            let e = einstein_error_on(&grid, m.a, n, u_glue);
            for k in 0..e.u.len() {
                rows.push(vec![
                    u_glue.into(),
                    e.u[k].into(),
                    e.f[k].into(),
                    e.g[k].into(),
                ]);
            }
        }
        return Ok((vec!["U", "u", "F", "G"], rows, vec![("a", m.a.into())]));
    }
    let weight = ErrorWeight {
        alpha: req(&p.alpha),
        u_max: first(&p.u_max),
    };
    let mut rows = Vec::new();
    let mut prev: Option<(f64, f64, f64)> = None;
    for &u_glue in glues {
        let plain = error_sup_norm(m.a, n, u_glue, None, samples)?;
        let weighted = error_sup_norm(m.a, n, u_glue, Some(weight), samples)?;
        let (ratio, rate, wratio, wrate) = match prev {
            Some((u0, e0, w0)) => {
                let span = (u_glue / u0).ln();
                (
                    Some(plain / e0),
                    Some((plain / e0).ln() / span),
                    Some(weighted / w0),
                    Some((weighted / w0).ln() / span),
                )
            }
            None => (None, None, None, None),
        };
        rows.push(vec![
            u_glue.into(),
            plain.into(),
            ratio.into(),
            rate.into(),
            weighted.into(),
            wratio.into(),
            wrate.into(),
        ]);
        prev = Some((u_glue, plain, weighted));
    }
    let columns = vec![
        "U",
        "sup_error",
        "ratio",
        "rate",
        "weighted_sup_error",
        "weighted_ratio",
        "weighted_rate",
    ];
    let summary = vec![
        ("n", n.into()),
        ("a", m.a.into()),
        ("alpha", weight.alpha.into()),
        ("U_max", weight.u_max.into()),
    ];
    Ok((columns, rows, summary))
}

fn newton(p: &Params) -> Result<Table, CliError> {
    let m = model_params(p)?;
    let u_a = largest_root(&m)?;
    let grid = RadialGrid::new(
        u_a * (1.0 + req(&p.guard)),
        first(&p.u_max),
        first(&p.nodes),
        scheme(p)?,
    )?;
    let initial = RadialProfile::interpolated(m.n, m.a, first(&p.u), grid)?;
    let left = potential_v(initial.grid.u_min(), &m)?;
    let exact = RadialProfile::exact_model(&m, initial.grid.clone())?;
    let deviation = initial
        .v
        .iter()
        .zip(&exact.v)
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
    let cfg = NewtonConfig {
        tolerance: req(&p.tol),
        ..NewtonConfig::default()
    };
    let report = newton_solve(&initial, left, &cfg)?;
    let fit = family_fit(&report.profile);
    let rows = report
        .history
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let contraction = (k > 0).then(|| r / (report.history[k - 1] * report.history[k - 1]));
            vec![k.into(), r.into(), contraction.into()]
        })
        .collect();
    let summary = vec![
        ("n", m.n.into()),
        ("a", m.a.into()),
        ("fitted_a", fit.a.into()),
        ("a_error", (fit.a - m.a).abs().into()),
        ("fit_residual", fit.residual.into()),
        ("initial_deviation", deviation.into()),
        ("iterations", report.iterations.into()),
        ("g_residual", report.g_residual.into()),
    ];
    Ok((vec!["iteration", "residual", "contraction"], rows, summary))
}

fn coercivity(p: &Params) -> Result<Table, CliError> {
    let n = req(&p.n);
    let guard = req(&p.guard);
    let tol = req(&p.tol);
    let grid_scheme = scheme(p)?;
    let backgrounds: Vec<(String, Option<ModelParams>)> = match &p.l {
        None => vec![("hyperbolic".to_string(), None)],
        Some(ls) => ls
            .iter()
            .map(|&l| Ok((format!("model-l{l}"), Some(solve_cone_angle(n, l)?))))
            .collect::<Result<_, ModelError>>()?,
    };
    let mut rows = Vec::new();
    for (label, model) in &backgrounds {
        let u_min = match model {
            None => 1.0 + guard,
            Some(m) => largest_root(m)? * (1.0 + guard),
        };
        for &u_max in p.u_max.as_ref().expect("filled by resolve") {
            for &nodes in p.nodes.as_ref().expect("filled by resolve") {
                let grid = RadialGrid::new(u_min, u_max, nodes, grid_scheme)?;
                let profile = match model {
                    None => RadialProfile::hyperbolic(n, grid)?,
                    Some(m) => RadialProfile::exact_model(m, grid)?,
                };
                let rep = coercivity_estimate(&profile, tol)?;
                rows.push(vec![
                    label.as_str().into(),
                    n.into(),
                    rep.u_min.into(),
                    rep.u_max.into(),
                    nodes.into(),
                    rep.unknowns.into(),
                    rep.smallest_eigenvalue.into(),
                ]);
            }
        }
    }
    let columns = vec![
        "background",
        "n",
        "u_min",
        "u_max",
        "nodes",
        "unknowns",
        "smallest_eigenvalue",
    ];
    Ok((
        columns,
        rows,
        vec![("hyperbolic_infimum", (9.0 / 8.0).into())],
    ))
}

fn spin_verify(p: &Params) -> Result<Table, CliError> {
    let n = req(&p.n);
    if !(1..=7).contains(&n) {
        return Err(invalid(format!("spin-verify needs 1 <= n <= 7, got {n}")));
    }
    let cfg = SuiteConfig {
        generators: n + 1,
        cases: req(&p.cases),
        spin_cases: req(&p.spin_cases),
        max_table_n: 6,
        seed: req(&p.seed),
    };
    let rep = run_suite(&cfg)?;
    let rows = rep
        .checks
        .iter()
        .map(|c| {
            vec![
                c.name.into(),
                c.cases.into(),
                c.failures.into(),
                c.max_error.into(),
                c.passed().into(),
            ]
        })
        .collect();
    let summary = vec![
        ("generators", cfg.generators.into()),
        ("seed", cfg.seed.into()),
        ("passed", rep.passed().into()),
    ];
    Ok((
        vec!["check", "cases", "failures", "max_error", "passed"],
        rows,
        summary,
    ))
}

fn bounds(p: &Params) -> Result<Table, CliError> {
    let rep = bound_chain(
        req(&p.n),
        req(&p.i_m),
        req(&p.big_a),
        req(&p.a1),
        req(&p.a2),
    )?;
    let form = rep.u_max_form;
    let row = vec![
        rep.n.into(),
        rep.i_m.into(),
        rep.murillo_rate.to_string().into(),
        rep.tube_rate.to_string().into(),
        rep.sigma_rate.to_string().into(),
        rep.identity_holds.into(),
        rep.ln_murillo.into(),
        rep.ln_hypersurface.into(),
        rep.ln_codim2.into(),
        rep.ln_sigma.into(),
        form.map(|f| f.u_max).into(),
        form.map(|f| f.ln_u_max_fifth).into(),
        form.map_or(Cell::Empty, |f| f.rate_consistent.into()),
    ];
    let columns = vec![
        "n",
        "i_M",
        "murillo_rate",
        "tube_rate",
        "sigma_rate",
        "identity_holds",
        "ln_murillo_bound",
        "ln_hypersurface_bound",
        "ln_codim2_bound",
        "ln_sigma_bound",
        "U_max",
        "ln_U_max_fifth",
        "U_max_rate_consistent",
    ];
    Ok((columns, vec![row], Vec::new()))
}

fn random_point(rng: &mut ChaCha8Rng, l: u32) -> Result<TubePoint, ModelError> {
    let r: f64 = rng.gen_range(0.0..10.0);
    TubePoint::new(
        r.cosh(),
        rng.gen_range(0.0..2.0 * PI / l as f64),
        rng.gen_range(0.0..5.0),
        rng.gen_range(0.0..2.0 * PI),
    )
}

fn distance(p: &Params) -> Result<Table, CliError> {
    let l = first(&p.l);
    if l == 0 {
        return Err(invalid("l must be positive"));
    }
    let cutoff = req(&p.cutoff);
    let mut rng = ChaCha8Rng::seed_from_u64(req(&p.seed));
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for k in 0..req(&p.pairs) {
        let x = random_point(&mut rng, l)?;
        let y = random_point(&mut rng, l)?;
        let d = tube_distance(&x, &y);
        let lifted = tube_distance(&x.lifted(l), &y.lifted(l));
        let ratio = greens_bound(&x, &y, l, cutoff)
            .ok()
            .map(|g| g * (3.0 * lifted).exp());
        if let Some(r) = ratio {
            worst = worst.max(r);
        }
        rows.push(vec![
            k.into(),
            x.u.into(),
            x.theta.into(),
            x.s.into(),
            x.phi.into(),
            y.u.into(),
            y.theta.into(),
            y.s.into(),
            y.phi.into(),
            d.into(),
            lifted.into(),
            ratio.into(),
        ]);
    }
    let columns = vec![
        "pair",
        "u_x",
        "theta_x",
        "s_x",
        "phi_x",
        "u_y",
        "theta_y",
        "s_y",
        "phi_y",
        "distance",
        "lifted_distance",
        "greens_ratio",
    ];
    let summary = vec![
        ("l", l.into()),
        ("cutoff", cutoff.into()),
        ("max_greens_ratio", worst.into()),
    ];
    Ok((columns, rows, summary))
}
