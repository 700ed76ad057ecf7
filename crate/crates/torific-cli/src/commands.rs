//! The four subcommands: classify, verify, reduce, equiv.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use torific::classify::{classify, Classification, ClassifyOptions};
use torific::expfam::FamilySpec;
use torific::hessian::MetricCurve;
use torific::kahlerfn::{basis_for, lattice_invariance_residual, pde_residual};
use torific::reduce::{binomial_equiv, check_psi_identity, equivalent, reduce};
use torific::spaceform::{
    deck, distance, equivariance_residual, model_metric, pullback_residual, tau, Lattice,
    TangentPoint,
};
use torific::{FiniteExpFam, Interval};

use crate::input::{resolve_inputs, ResolvedInput};
use crate::report::{ClassificationReport, InputReport, Report, ResidualRow};
use crate::{CliError, CommonArgs, VerifyArgs, EXIT_CERTIFICATION, EXIT_NUMERIC, EXIT_OK};

/// Deck and equivariance identities hold to rounding; their tolerance is
/// fixed rather than configurable.
const DECK_TOL: f64 = 1e-12;
const EQUIVARIANCE_TOL: f64 = 1e-12;
const LATTICE_TOL: f64 = 1e-12;
const LATTICE_STEP_TOL: f64 = 1e-10;

fn options(args: &CommonArgs) -> ClassifyOptions {
    ClassifyOptions {
        grid: args.grid,
        constancy_tol: args.tol_constancy,
        fit_tol: args.tol_fit,
    }
}

fn classification_rows(args: &CommonArgs, cls: &Classification) -> Vec<ResidualRow> {
    let mut rows = vec![
        ResidualRow::new(
            "constancy",
            cls.c,
            "max |S - lambda|",
            cls.max_s_deviation,
            args.tol_constancy,
        ),
        ResidualRow::new(
            "form_fit",
            cls.c,
            cls.form.tag(),
            cls.fit_residual,
            args.tol_fit,
        ),
    ];
    if let Some(r) = cls.pullback_residual {
        rows.push(ResidualRow::new(
            "model_pullback",
            cls.c,
            "h = h_c(phi) phi'^2",
            r,
            args.tol_fit,
        ));
    }
    rows
}

fn classify_input(args: &CommonArgs, input: &ResolvedInput) -> (InputReport, Option<Classification>) {
    let opts = options(args);
    match classify(&input.metric(), &opts) {
        Ok(cls) => {
            let binomial_p = input
                .finite()
                .and_then(|f| binomial_equiv(f).ok().flatten())
                .map(|(p, _)| p);
            let rows = classification_rows(args, &cls);
            let report = InputReport {
                input: input.label.clone(),
                classification: Some(ClassificationReport::from_classification(&cls, binomial_p)),
                error: None,
                residuals: rows,
            };
            (report, Some(cls))
        }
        Err(torific::Error::NotConstantCurvature {
            lambda,
            deviation,
            tol,
        }) => {
            let block = InputReport {
                input: input.label.clone(),
                classification: Some(ClassificationReport::non_constant(lambda, deviation)),
                error: Some(format!(
                    "curvature is not constant (max deviation {deviation:.3e} > {tol:.1e})"
                )),
                residuals: vec![ResidualRow::new(
                    "constancy",
                    f64::NAN,
                    "max |S - lambda|",
                    deviation,
                    tol,
                )],
            };
            (block, None)
        }
        Err(e) => (
            InputReport {
                input: input.label.clone(),
                classification: None,
                error: Some(e.to_string()),
                residuals: Vec::new(),
            },
            None,
        ),
    }
}

pub fn cmd_classify(args: &CommonArgs) -> Result<i32, CliError> {
    let inputs = resolve_inputs(args)?;
    let mut report = Report::default();
    let mut all_ok = true;
    for input in &inputs {
        let (block, cls) = classify_input(args, input);
        all_ok &= cls.is_some();
        report.inputs.push(block);
    }
    print!("{}", report.render(args.format));
    Ok(if all_ok { EXIT_OK } else { EXIT_NUMERIC })
}

/// Base/fiber grid of tangent points for the space-form checks, kept inside
/// both the classified and the target model domains.
fn tangent_grid(
    args: &CommonArgs,
    c_classified: f64,
    c_target: f64,
    n_base: usize,
    n_fiber: usize,
) -> Result<Vec<TangentPoint>, CliError> {
    let domain = if c_classified < 0.0 || c_target < 0.0 {
        Interval::NEGATIVE
    } else {
        Interval::ALL
    };
    let base = domain
        .grid(args.grid.lo.max(-5.0), args.grid.hi.min(5.0), n_base)
        .map_err(|e| CliError::from_lib("tangent grid", e))?;
    let mut pts = Vec::with_capacity(n_base * n_fiber);
    for &x in &base {
        for j in 0..n_fiber {
            let y = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * j as f64 / (n_fiber - 1) as f64;
            pts.push(TangentPoint::new(x, y));
        }
    }
    Ok(pts)
}

fn metric_samples(
    m: &MetricCurve,
    args: &CommonArgs,
    n: usize,
    seed: u64,
) -> Result<Vec<(f64, f64)>, CliError> {
    let base = m
        .domain()
        .grid(args.grid.lo, args.grid.hi, 2)
        .map_err(|e| CliError::from_lib("sample window", e))?;
    let (lo, hi) = (base[0], base[1]);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| (rng.random_range(lo..hi), rng.random_range(-3.0..3.0)))
        .collect())
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let mut inputs = resolve_inputs_for_verify(args)?;
    let mut report = Report::default();
    let mut all_pass = true;
    let mut numeric_failure = false;

    for input in inputs.drain(..) {
        let (mut block, cls) = classify_input(&args.common, &input);
        let Some(cls) = cls else {
            numeric_failure = true;
            report.inputs.push(block);
            continue;
        };
        if !cls.toric {
            block.error = Some("input is not toric; nothing to certify".into());
            all_pass = false;
            report.inputs.push(block);
            continue;
        }

        let c_cls = cls.c;
        let c_target = args.c.unwrap_or(c_cls);
        let hc = model_metric(c_cls);

        // Pullback isometry of the covering map against the model metric.
        let grid = tangent_grid(&args.common, c_cls, c_target, 20, 20)?;
        match pullback_residual(c_target, &hc, &grid) {
            Ok(r) => block.residuals.push(ResidualRow::new(
                "pullback",
                c_target,
                "20x20 grid",
                r,
                args.common.tol_pullback,
            )),
            Err(e) => {
                block.residuals.push(ResidualRow::new(
                    "pullback",
                    c_target,
                    format!("failed: {e}"),
                    f64::INFINITY,
                    args.common.tol_pullback,
                ));
            }
        }

        // Deck invariance on a coarser grid.
        let coarse = tangent_grid(&args.common, c_cls, c_target, 8, 8)?;
        let mut deck_max = 0.0_f64;
        let mut equi_max = 0.0_f64;
        for &z in &coarse {
            for k in -3..=3 {
                let moved = tau(c_target, deck(c_target, k, z))
                    .and_then(|a| tau(c_target, z).map(|b| distance(&a, &b)));
                match moved {
                    Ok(d) => deck_max = deck_max.max(d),
                    Err(_) => deck_max = f64::INFINITY,
                }
            }
            for t in [0.1, 0.25, 0.7] {
                match equivariance_residual(c_target, t, z) {
                    Ok(d) => equi_max = equi_max.max(d),
                    Err(_) => equi_max = f64::INFINITY,
                }
            }
        }
        block.residuals.push(ResidualRow::new(
            "deck",
            c_target,
            "k in [-3,3]",
            deck_max,
            DECK_TOL,
        ));
        block.residuals.push(ResidualRow::new(
            "equivariance",
            c_target,
            "t in {0.1,0.25,0.7}",
            equi_max,
            EQUIVARIANCE_TOL,
        ));

        // Kähler basis of the fitted form against the input metric.
        let m = input.metric();
        let basis = basis_for(&cls.form);
        let samples = metric_samples(&m, &args.common, 100, args.common.seed)?;
        for (i, f) in basis.functions.iter().enumerate() {
            let mut max = 0.0_f64;
            for &(x, xd) in &samples {
                match pde_residual(f, &m, x, xd) {
                    Ok((r1, r2)) => max = max.max(r1.abs()).max(r2.abs()),
                    Err(_) => max = f64::INFINITY,
                }
            }
            block.residuals.push(ResidualRow::new(
                "kahler_pde",
                c_cls,
                format!("{}/f{i}", cls.form.tag()),
                max,
                args.common.tol_pde,
            ));
        }

        // Fiber lattice: invariance at the period, and the period transported
        // through the model map must be the lattice step 2*pi*eps(c).
        let period = basis.fiber_period.expect("toric forms carry a period");
        block.residuals.push(ResidualRow::new(
            "lattice_invariance",
            c_cls,
            format!("T = {period:.9}"),
            lattice_invariance_residual(&basis.functions, period, &samples),
            LATTICE_TOL,
        ));
        let alpha = cls.phi.expect("toric").alpha;
        let step_err = (alpha.abs() * period - Lattice::new(c_cls).step()).abs();
        block.residuals.push(ResidualRow::new(
            "lattice_step",
            c_cls,
            "|phi'| T = 2 pi eps(c)",
            step_err,
            LATTICE_STEP_TOL,
        ));

        all_pass &= block.residuals.iter().all(|r| r.pass);
        report.inputs.push(block);
    }

    print!("{}", report.render(args.common.format));
    Ok(if numeric_failure {
        EXIT_NUMERIC
    } else if all_pass {
        EXIT_OK
    } else {
        EXIT_CERTIFICATION
    })
}

fn resolve_inputs_for_verify(args: &VerifyArgs) -> Result<Vec<ResolvedInput>, CliError> {
    let mut inputs = Vec::new();
    if let Some(c) = args.metric_c {
        if !c.is_finite() {
            return Err(CliError::Parse(format!("bad model constant {c}")));
        }
        inputs.push(ResolvedInput {
            label: format!("model-metric:c={c}"),
            kind: crate::input::InputKind::Metric(model_metric(c)),
        });
    }
    // Remaining inputs come from the shared flags; absence is fine when
    // --metric-c was given.
    if !(args.common.builtins.is_empty()
        && args.common.metrics.is_empty()
        && args.common.files.is_empty())
    {
        inputs.extend(resolve_inputs(&args.common)?);
    }
    if inputs.is_empty() {
        return Err(CliError::Parse(
            "no inputs: pass FILES, --builtin, --metric or --metric-c".into(),
        ));
    }
    Ok(inputs)
}

fn finite_inputs(inputs: &[ResolvedInput]) -> Result<Vec<&FiniteExpFam>, CliError> {
    inputs
        .iter()
        .map(|i| {
            i.finite().ok_or_else(|| {
                CliError::Parse(format!("{}: needs a finite family (value table)", i.label))
            })
        })
        .collect()
}

pub fn cmd_reduce(args: &CommonArgs) -> Result<i32, CliError> {
    let inputs = resolve_inputs(args)?;
    if inputs.len() != 1 {
        return Err(CliError::Parse("reduce takes exactly one input".into()));
    }
    let fam = finite_inputs(&inputs)?[0];
    let red = reduce(fam).map_err(|e| CliError::from_lib(&inputs[0].label, e))?;
    let spec = FamilySpec::from_family(&red.base);
    match args.format {
        crate::Format::Text => {
            println!(
                "# reduced {} atoms -> {} groups",
                fam.len(),
                red.base.len()
            );
            println!("{}", spec.to_json());
        }
        _ => println!("{}", spec.to_json()),
    }
    Ok(EXIT_OK)
}

pub fn cmd_equiv(args: &CommonArgs) -> Result<i32, CliError> {
    let inputs = resolve_inputs(args)?;
    if inputs.len() != 2 {
        return Err(CliError::Parse("equiv takes exactly two inputs".into()));
    }
    let fams = finite_inputs(&inputs)?;
    let grid: Vec<f64> = (0..21).map(|i| -5.0 + 0.5 * i as f64).collect();
    match equivalent(fams[0], fams[1]) {
        Some(g) => {
            let residual = check_psi_identity(fams[0], fams[1], &g, &grid);
            match args.format {
                crate::Format::Json => println!(
                    "{}",
                    serde_json::json!({
                        "equivalent": true,
                        "a": g.a, "b": g.b, "c": g.c, "d": g.d,
                        "psi_residual": residual,
                    })
                ),
                _ => {
                    println!("equivalent: yes");
                    println!("witness: a = {}, b = {}, c = {}, d = {}", g.a, g.b, g.c, g.d);
                    println!("psi identity residual: {residual:.3e}");
                }
            }
        }
        None => match args.format {
            crate::Format::Json => {
                println!("{}", serde_json::json!({ "equivalent": false }))
            }
            _ => println!("not equivalent"),
        },
    }
    Ok(EXIT_OK)
}
