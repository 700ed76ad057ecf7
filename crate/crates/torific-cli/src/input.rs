//! Resolution of command-line inputs (builtins, synthetic metrics, spec
//! files) into labeled classification inputs.

use std::path::Path;

use torific::classify::{CanonicalForm, FormKind, Sign};
use torific::expfam::{FamilyInput, FamilySpec};
use torific::hessian::{HasMetric, MetricCurve};

use crate::{CliError, CommonArgs};

/// One resolved input: a label for reports plus the object to classify.
pub struct ResolvedInput {
    pub label: String,
    pub kind: InputKind,
}

pub enum InputKind {
    Family(FamilyInput),
    Metric(MetricCurve),
}

impl ResolvedInput {
    pub fn metric(&self) -> MetricCurve {
        match &self.kind {
            InputKind::Family(f) => f.metric_curve(),
            InputKind::Metric(m) => m.clone(),
        }
    }

    pub fn finite(&self) -> Option<&torific::FiniteExpFam> {
        match &self.kind {
            InputKind::Family(FamilyInput::Finite(f)) => Some(f),
            _ => None,
        }
    }
}

/// Parse `NAME[:PARAM]` into a family spec and build it.
pub fn parse_builtin(text: &str) -> Result<FamilyInput, CliError> {
    let (name, param) = match text.split_once(':') {
        Some((n, p)) => (n, Some(p)),
        None => (text, None),
    };
    let wants_int = |p: Option<&str>| -> Result<Option<u32>, CliError> {
        p.map(|p| {
            p.parse::<u32>()
                .map_err(|_| CliError::Parse(format!("builtin `{name}`: bad integer parameter `{p}`")))
        })
        .transpose()
    };
    let spec = match name {
        "binomial" => FamilySpec::Builtin {
            builtin: name.into(),
            n: wants_int(param)?,
            r: None,
            c: None,
        },
        "negative_binomial" => FamilySpec::Builtin {
            builtin: name.into(),
            n: None,
            r: wants_int(param)?,
            c: None,
        },
        "model" => FamilySpec::Builtin {
            builtin: name.into(),
            n: None,
            r: None,
            c: param
                .map(|p| {
                    p.parse::<f64>().map_err(|_| {
                        CliError::Parse(format!("builtin `model`: bad parameter `{p}`"))
                    })
                })
                .transpose()?,
        },
        "poisson" | "categorical2" => FamilySpec::Builtin {
            builtin: name.into(),
            n: None,
            r: None,
            c: None,
        },
        other => return Err(CliError::Parse(format!("unknown builtin `{other}`"))),
    };
    spec.build()
        .map_err(|e| CliError::from_lib(&format!("builtin `{text}`"), e))
}

/// Parse a synthetic metric descriptor into a canonical form.
///
/// Grammar (colon-separated): `const[:B]`, `exp[:A[:B]]`,
/// `cos_sq:A:B:LAMBDA`, `sinh_sq:A:B:LAMBDA[:EPS]`, `inv_sq:B:LAMBDA`,
/// `cosh_sq:A:B:LAMBDA`.
pub fn parse_metric(text: &str) -> Result<CanonicalForm, CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let num = |i: usize, default: Option<f64>| -> Result<f64, CliError> {
        match parts.get(i) {
            Some(p) => p
                .parse::<f64>()
                .map_err(|_| CliError::Parse(format!("metric `{text}`: bad number `{p}`"))),
            None => default
                .ok_or_else(|| CliError::Parse(format!("metric `{text}`: missing parameter"))),
        }
    };
    let form = match parts[0] {
        "const" => CanonicalForm {
            kind: FormKind::Const { b: num(1, Some(0.0))? },
            lambda: 0.0,
        },
        "exp" => CanonicalForm {
            kind: FormKind::Exp {
                a: num(1, Some(1.0))?,
                b: num(2, Some(0.0))?,
            },
            lambda: 0.0,
        },
        "cos_sq" => CanonicalForm {
            kind: FormKind::CosSq {
                a: num(1, None)?,
                b: num(2, None)?,
            },
            lambda: num(3, None)?,
        },
        "sinh_sq" => {
            let eps = match num(4, Some(1.0))? {
                e if e > 0.0 => Sign::Plus,
                _ => Sign::Minus,
            };
            CanonicalForm {
                kind: FormKind::SinhSq {
                    a: num(1, None)?,
                    b: num(2, None)?,
                    eps,
                },
                lambda: num(3, None)?,
            }
        }
        "inv_sq" => CanonicalForm {
            kind: FormKind::InvSq { b: num(1, None)? },
            lambda: num(2, None)?,
        },
        "cosh_sq" => CanonicalForm {
            kind: FormKind::CoshSq {
                a: num(1, None)?,
                b: num(2, None)?,
            },
            lambda: num(3, None)?,
        },
        other => return Err(CliError::Parse(format!("unknown metric form `{other}`"))),
    };
    validate_form(&form, text)?;
    Ok(form)
}

fn validate_form(form: &CanonicalForm, text: &str) -> Result<(), CliError> {
    let bad = |msg: &str| Err(CliError::Parse(format!("metric `{text}`: {msg}")));
    match form.kind {
        FormKind::Exp { a, .. } => {
            if a == 0.0 {
                return bad("exp needs a != 0");
            }
        }
        FormKind::CosSq { a, .. } | FormKind::SinhSq { a, .. } => {
            if !(a > 0.0) {
                return bad("a must be positive");
            }
            if !(form.lambda > 0.0) {
                return bad("lambda must be positive for this form");
            }
        }
        FormKind::InvSq { .. } => {
            if !(form.lambda > 0.0) {
                return bad("lambda must be positive for this form");
            }
        }
        FormKind::CoshSq { a, .. } => {
            if !(a > 0.0) {
                return bad("a must be positive");
            }
            if !(form.lambda < 0.0) {
                return bad("lambda must be negative");
            }
        }
        FormKind::Const { .. } => {}
    }
    Ok(())
}

fn load_file(path: &Path) -> Result<FamilyInput, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    let spec = FamilySpec::from_json(&text)
        .map_err(|e| CliError::from_lib(&path.display().to_string(), e))?;
    spec.build()
        .map_err(|e| CliError::from_lib(&path.display().to_string(), e))
}

/// Resolve all inputs of a command, in argument order: builtins, synthetic
/// metrics, then files.
pub fn resolve_inputs(args: &CommonArgs) -> Result<Vec<ResolvedInput>, CliError> {
    let mut out = Vec::new();
    for b in &args.builtins {
        out.push(ResolvedInput {
            label: format!("builtin:{b}"),
            kind: InputKind::Family(parse_builtin(b)?),
        });
    }
    for m in &args.metrics {
        let form = parse_metric(m)?;
        out.push(ResolvedInput {
            label: format!("metric:{m}"),
            kind: InputKind::Metric(form.metric()),
        });
    }
    for f in &args.files {
        out.push(ResolvedInput {
            label: f.display().to_string(),
            kind: InputKind::Family(load_file(f)?),
        });
    }
    if out.is_empty() {
        return Err(CliError::Parse(
            "no inputs: pass FILES, --builtin or --metric".into(),
        ));
    }
    Ok(out)
}
