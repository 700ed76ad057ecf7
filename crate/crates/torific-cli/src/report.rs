//! Report model and the text/json/csv renderers.
//!
//! Machine-readable output is deterministic for a fixed config and seed:
//! rows are emitted in input order and floats are serialized by value.

use serde::Serialize;

use torific::classify::{Classification, FormKind, Sign};

use crate::Format;

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub check: String,
    pub c: f64,
    pub param: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualRow {
    pub fn new(check: &str, c: f64, param: impl Into<String>, max: f64, tol: f64) -> Self {
        ResidualRow {
            check: check.into(),
            c,
            param: param.into(),
            max_residual: max,
            tolerance: tol,
            pass: max < tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub constant: bool,
    pub lambda: f64,
    pub max_s_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<i8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub toric: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi_beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binomial_p: Option<u32>,
}

impl ClassificationReport {
    pub fn from_classification(cls: &Classification, binomial_p: Option<u32>) -> Self {
        let (a, b, eps) = match cls.form.kind {
            FormKind::Exp { a, b } => (Some(a), Some(b), None),
            FormKind::Const { b } => (None, Some(b), None),
            FormKind::CosSq { a, b } | FormKind::CoshSq { a, b } => (Some(a), Some(b), None),
            FormKind::SinhSq { a, b, eps } => (
                Some(a),
                Some(b),
                Some(if eps == Sign::Plus { 1 } else { -1 }),
            ),
            FormKind::InvSq { b } => (None, Some(b), None),
        };
        ClassificationReport {
            constant: true,
            lambda: cls.lambda,
            max_s_deviation: cls.max_s_deviation,
            c: Some(cls.c),
            form: Some(cls.form.tag().into()),
            a,
            b,
            eps,
            toric: Some(cls.toric),
            phi_alpha: cls.phi.map(|p| p.alpha),
            phi_beta: cls.phi.map(|p| p.beta),
            binomial_p,
        }
    }

    /// Deviation report for an input whose curvature failed the constancy
    /// decision; no form or model fields exist in that case.
    pub fn non_constant(lambda: f64, max_s_deviation: f64) -> Self {
        ClassificationReport {
            constant: false,
            lambda,
            max_s_deviation,
            c: None,
            form: None,
            a: None,
            b: None,
            eps: None,
            toric: None,
            phi_alpha: None,
            phi_beta: None,
            binomial_p: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InputReport {
    pub input: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub residuals: Vec<ResidualRow>,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Report {
    pub inputs: Vec<InputReport>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s =
                    serde_json::to_string_pretty(self).expect("report serialization cannot fail");
                s.push('\n');
                s
            }
            Format::Csv => {
                let mut s = String::from("check,c,param,max_residual,tolerance,pass\n");
                for input in &self.inputs {
                    for r in &input.residuals {
                        s.push_str(&format!(
                            "{},{},{},{:e},{:e},{}\n",
                            r.check, r.c, r.param, r.max_residual, r.tolerance, r.pass
                        ));
                    }
                }
                s
            }
            Format::Text => {
                let mut s = String::new();
                for input in &self.inputs {
                    s.push_str(&format!("== {}\n", input.input));
                    if let Some(err) = &input.error {
                        s.push_str(&format!("  error: {err}\n"));
                    }
                    if let Some(c) = &input.classification {
                        if c.constant {
                            s.push_str(&format!(
                                "  constant curvature: lambda = {:.9}, max |S - lambda| = {:.3e}\n",
                                c.lambda, c.max_s_deviation
                            ));
                        } else {
                            s.push_str(&format!(
                                "  curvature NOT constant: median S = {:.9}, max deviation = {:.3e}\n",
                                c.lambda, c.max_s_deviation
                            ));
                        }
                        if let Some(form) = &c.form {
                            s.push_str(&format!("  form: {form}"));
                            if let Some(a) = c.a {
                                s.push_str(&format!(", a = {a:.9}"));
                            }
                            if let Some(b) = c.b {
                                s.push_str(&format!(", b = {b:.9}"));
                            }
                            if let Some(e) = c.eps {
                                s.push_str(&format!(", eps = {e:+}"));
                            }
                            s.push('\n');
                        }
                        if let (Some(toric), Some(cval)) = (c.toric, c.c) {
                            s.push_str(&format!("  toric: {toric}, c = {cval:.9}\n"));
                        }
                        if let (Some(alpha), Some(beta)) = (c.phi_alpha, c.phi_beta) {
                            s.push_str(&format!(
                                "  model map: phi(x) = {alpha:.9}*x + {beta:.9}\n"
                            ));
                        }
                        if let Some(p) = c.binomial_p {
                            s.push_str(&format!("  binomial equivalent: p = {p}\n"));
                        }
                    }
                    for r in &input.residuals {
                        s.push_str(&format!(
                            "  [{}] {} ({}): {:.3e} vs {:.1e}\n",
                            if r.pass { "pass" } else { "FAIL" },
                            r.check,
                            r.param,
                            r.max_residual,
                            r.tolerance
                        ));
                    }
                }
                s
            }
        }
    }
}
