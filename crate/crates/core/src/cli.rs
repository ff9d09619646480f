//! Batch front end: a JSON problem description in, a JSON report out.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::charpoly::CharpolyError;
use crate::expansion::{
    expand_with_frame, prepare, required_matrix_order, ExpandOptions, ExpansionError,
    PuiseuxExpansion,
};
use crate::frame::{FrameError, JordanFrame};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Complex64, GaussianRational, Scalar, ScalarError, ToleranceConfig};
use crate::series::MatrixSeries;
use crate::validation::{convergence_check, default_grid, ConvergenceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoGrid {
    Auto,
}

/// `"auto"` or an explicit grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValidateSpec {
    Auto(AutoGrid),
    Grid { eps_grid: Vec<f64> },
}

/// Input document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub n: usize,
    pub mode: Mode,
    /// `A_0, ..., A_K`, each `n x n`. Entries are rational strings, numbers
    /// or `{"re": .., "im": ..}` objects.
    pub matrices: Vec<Vec<Vec<Value>>>,
    pub lambda0: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    pub order: usize,
    #[serde(default)]
    pub root_branch: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub validate: Option<ValidateSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceConfig>,
    /// Optional frame `U` used instead of the constructed one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frame_u: Option<Vec<Vec<Value>>>,
}

impl ProblemSpec {
    pub fn from_json_str(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError {
            kind: ErrorKind::Input,
            location: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn sha256(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("spec serializes");
        hex::encode(Sha256::digest(bytes))
    }
}

/// Switches that the command line layers over the spec.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    pub verbose_frame: bool,
    pub mode: Option<Mode>,
    pub order: Option<usize>,
    pub branch: Option<usize>,
    /// Validate on the default grid when the spec does not ask for it.
    pub validate: bool,
}

impl RunOptions {
    pub fn apply(&self, spec: &ProblemSpec) -> ProblemSpec {
        let mut spec = spec.clone();
        if let Some(mode) = self.mode {
            spec.mode = mode;
        }
        if let Some(order) = self.order {
            spec.order = order;
        }
        if let Some(branch) = self.branch {
            spec.root_branch = branch;
        }
        if self.validate && spec.validate.is_none() {
            spec.validate = Some(ValidateSpec::Auto(AutoGrid::Auto));
        }
        spec
    }
}

/// Environment variables that override `tolerances`.
pub const ENV_OVERRIDES: [&str; 3] = [
    "PERTURB_ZERO_THRESHOLD",
    "PERTURB_RANK_REL_THRESHOLD",
    "PERTURB_ROUTE_REL_THRESHOLD",
];

/// Applies the `PERTURB_*` overrides found by `lookup` to `tol`.
pub fn apply_env_overrides(
    tol: &mut ToleranceConfig,
    lookup: impl Fn(&str) -> Option<String>,
) -> Result<(), CliError> {
    for name in ENV_OVERRIDES {
        let Some(raw) = lookup(name) else { continue };
        let value: f64 = raw.trim().parse().map_err(|_| CliError {
            kind: ErrorKind::Input,
            location: format!("environment variable {name}"),
            message: format!("'{raw}' is not a number"),
        })?;
        match name {
            "PERTURB_ZERO_THRESHOLD" => tol.zero_threshold = value,
            "PERTURB_RANK_REL_THRESHOLD" => tol.rank_rel_threshold = value,
            _ => tol.route_rel_threshold = value,
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Input,
    GenericConditionFails,
    NotSingleBlock,
    InsufficientOrder,
    Numerical,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::GenericConditionFails => 2,
            ErrorKind::NotSingleBlock => 3,
            ErrorKind::InsufficientOrder => 4,
            ErrorKind::Input | ErrorKind::Numerical => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Error)]
#[error("{location}: {message}")]
pub struct CliError {
    pub kind: ErrorKind,
    /// Where in the input the problem was detected.
    pub location: String,
    pub message: String,
}

impl CliError {
    fn input(location: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Input,
            location: location.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.kind.exit_code()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericConditionReport {
    /// `-f_eps / ((1/m!) d^m f / d lambda^m)`
    pub charpoly_value: Value,
    /// `(v_m, A_1 u_1)`
    pub a_m1_value: Value,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchTerm {
    /// Power of `eps^(1/m)`.
    pub power: usize,
    /// Power of `zeta = exp(2 pi i / m)`.
    pub zeta_power: usize,
    pub coefficient: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchReport {
    pub h: usize,
    pub eigenvalue_terms: Vec<BranchTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Checks {
    /// Largest norm of the order-by-order eigen-equation residual.
    pub eigen_equation_max_residual: f64,
    /// `(v_1, beta_0) = 1` and `(v_1, beta_s) = 0` for `s >= 1`.
    pub normalization_holds: bool,
}

/// The frame used for this run. It is one valid choice among many.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrameWitness {
    pub note: &'static str,
    pub u: Vec<Vec<Value>>,
    pub u_inv: Vec<Vec<Value>>,
    pub chain: Vec<Vec<Value>>,
    pub left_vectors: Vec<Vec<Value>>,
    pub lambda: Vec<Vec<Value>>,
}

/// Output document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub input: ProblemSpec,
    pub input_sha256: String,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generic_condition: Option<GenericConditionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<Vec<Value>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub branches: Option<Vec<BranchReport>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub checks: Option<Checks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frame: Option<FrameWitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ConvergenceReport>,
    /// Wall-clock milliseconds; float mode only, so exact reports stay
    /// byte-identical between runs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<CliError>,
}

impl Report {
    fn empty(spec: &ProblemSpec) -> Self {
        Self {
            input: spec.clone(),
            input_sha256: spec.sha256(),
            mode: spec.mode,
            notes: Vec::new(),
            m: None,
            generic_condition: None,
            alphas: None,
            betas: None,
            branches: None,
            checks: None,
            frame: None,
            validation: None,
            timing_ms: None,
            error: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.error.as_ref().map_or(0, CliError::exit_code)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs the whole pipeline. Problems found after the input has been read
/// are recorded in `Report::error`; the report carries whatever was
/// computed before them.
pub fn run(spec: &ProblemSpec, options: &RunOptions) -> Report {
    let spec = options.apply(spec);
    match spec.mode {
        Mode::Exact => {
            let report = run_in::<GaussianRational>(&spec, options);
            if matches!(&report.error, Some(e) if e.location == ALPHA1_LOCATION && e.kind == ErrorKind::Numerical)
            {
                let mut float_spec = spec.clone();
                float_spec.mode = Mode::Float;
                let mut fallback = run_in::<Complex64>(&float_spec, options);
                fallback.input = spec.clone();
                fallback.input_sha256 = spec.sha256();
                fallback.notes.insert(
                    0,
                    format!(
                        "alpha_1 is not a Gaussian rational for root branch {}; computed in float mode",
                        spec.root_branch
                    ),
                );
                return fallback;
            }
            report
        }
        Mode::Float => run_in::<Complex64>(&spec, options),
    }
}

const ALPHA1_LOCATION: &str = "matrices[1] (alpha_1 root)";

fn parse_matrix<S: Scalar>(
    rows: &[Vec<Value>],
    n: usize,
    location: &str,
) -> Result<Matrix<S>, CliError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(CliError::input(
            location,
            format!("expected a {n}x{n} matrix"),
        ));
    }
    let data = rows
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| {
                    S::from_json(v).map_err(|e| {
                        CliError::input(format!("{location}[{i}][{j}]"), e.to_string())
                    })
                })
                .collect::<Result<Vec<S>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(data).map_err(|e| CliError::input(location, e.to_string()))
}

fn matrix_json<S: Scalar>(m: &Matrix<S>) -> Vec<Vec<Value>> {
    m.to_rows()
        .iter()
        .map(|row| row.iter().map(S::to_json).collect())
        .collect()
}

fn vector_json<S: Scalar>(v: &Vector<S>) -> Vec<Value> {
    v.iter().map(S::to_json).collect()
}

fn classify(e: ExpansionError) -> CliError {
    let message = e.to_string();
    let (kind, location) = match &e {
        ExpansionError::GenericConditionFails { .. } => {
            (ErrorKind::GenericConditionFails, "matrices[1]")
        }
        ExpansionError::NotSingleBlock { .. } => (ErrorKind::NotSingleBlock, "matrices[0]"),
        ExpansionError::MissingMatrixCoefficient { .. } => {
            (ErrorKind::InsufficientOrder, "matrices")
        }
        ExpansionError::RouteDisagreement { .. } => (ErrorKind::Numerical, "matrices[1]"),
        ExpansionError::ZeroOrder => (ErrorKind::Input, "order"),
        ExpansionError::BranchOutOfRange { .. } => (ErrorKind::Input, "root_branch"),
        ExpansionError::Charpoly(c) => match c {
            CharpolyError::NotAnEigenvalue { .. } => (ErrorKind::Input, "lambda0"),
            CharpolyError::MultiplicityMismatch { .. } => (ErrorKind::Input, "m"),
            CharpolyError::InsufficientOrder { .. } => (ErrorKind::InsufficientOrder, "matrices"),
            CharpolyError::LambdaDegreeTooSmall { .. } => (ErrorKind::Numerical, "matrices[0]"),
        },
        ExpansionError::Frame(FrameError::InvalidPinnedFrame(_)) => (ErrorKind::Input, "frame_u"),
        ExpansionError::Frame(_) => (ErrorKind::Numerical, "matrices[0]"),
        ExpansionError::Scalar(ScalarError::BranchOutOfRange { .. }) => {
            (ErrorKind::Input, "root_branch")
        }
        ExpansionError::Scalar(ScalarError::ExactRootNotRepresentable { .. }) => {
            (ErrorKind::Numerical, ALPHA1_LOCATION)
        }
        ExpansionError::Scalar(_)
        | ExpansionError::Combinatorics(_)
        | ExpansionError::Linalg(_)
        | ExpansionError::ExactEvaluationUnavailable { .. } => (ErrorKind::Numerical, "matrices"),
    };
    CliError {
        kind,
        location: location.into(),
        message,
    }
}

fn run_in<S: Scalar>(spec: &ProblemSpec, options: &RunOptions) -> Report {
    let start = Instant::now();
    let mut report = Report::empty(spec);
    if let Err(e) = pipeline::<S>(spec, options, &mut report) {
        report.error = Some(e);
    }
    if !S::EXACT {
        report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report
}

fn pipeline<S: Scalar>(
    spec: &ProblemSpec,
    options: &RunOptions,
    report: &mut Report,
) -> Result<(), CliError> {
    let mut tol = spec.tolerances.unwrap_or_default();
    apply_env_overrides(&mut tol, |k| std::env::var(k).ok())?;
    tol.validate()
        .map_err(|e| CliError::input("tolerances", e))?;
    if spec.matrices.len() < 2 {
        return Err(CliError {
            kind: ErrorKind::InsufficientOrder,
            location: "matrices".into(),
            message: "at least A_0 and A_1 are required".into(),
        });
    }
    let n = spec.n;
    let matrices = spec
        .matrices
        .iter()
        .enumerate()
        .map(|(k, rows)| parse_matrix::<S>(rows, n, &format!("matrices[{k}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let series =
        MatrixSeries::new(matrices).map_err(|e| CliError::input("matrices", e.to_string()))?;
    let lambda0 =
        S::from_json(&spec.lambda0).map_err(|e| CliError::input("lambda0", e.to_string()))?;
    let pinned_frame = spec
        .frame_u
        .as_ref()
        .map(|rows| parse_matrix::<S>(rows, n, "frame_u"))
        .transpose()?;
    let expand_options = ExpandOptions {
        pinned_m: spec.m,
        pinned_frame,
        tol,
    };
    let (_, frame, routes) = prepare(&series, &lambda0, &expand_options).map_err(classify)?;
    let m = frame.m();
    report.m = Some(m);
    report.generic_condition = Some(GenericConditionReport {
        charpoly_value: routes.charpoly_value.to_json(),
        a_m1_value: routes.a_m1_value.to_json(),
        holds: routes.holds(),
    });
    if options.verbose_frame {
        report.frame = Some(witness(&frame));
    }
    if !routes.agree(&tol) {
        return Err(classify(ExpansionError::RouteDisagreement {
            charpoly_value: routes.charpoly_value.to_string(),
            a_m1_value: routes.a_m1_value.to_string(),
        }));
    }
    if !routes.holds() {
        return Err(classify(ExpansionError::GenericConditionFails {
            charpoly_value: routes.charpoly_value.to_string(),
            a_m1_value: routes.a_m1_value.to_string(),
        }));
    }
    if spec.order == 0 {
        return Err(classify(ExpansionError::ZeroOrder));
    }
    let needed = required_matrix_order(m, spec.order);
    if needed > series.order() {
        return Err(CliError {
            kind: ErrorKind::InsufficientOrder,
            location: "matrices".into(),
            message: format!(
                "order {} with m = {m} needs A_0..A_{needed}; only A_0..A_{} given (write zero matrices explicitly)",
                spec.order,
                series.order()
            ),
        });
    }
    if spec.root_branch >= m {
        return Err(CliError::input(
            "root_branch",
            format!("branch {} is out of range for m = {m}", spec.root_branch),
        ));
    }
    let expansion =
        expand_with_frame(&series, frame, spec.order, spec.root_branch, &tol).map_err(classify)?;
    fill_expansion(report, &expansion, &series)?;
    if let Some(validate) = &spec.validate {
        let grid = match validate {
            ValidateSpec::Auto(_) => default_grid(),
            ValidateSpec::Grid { eps_grid } => eps_grid.clone(),
        };
        let conv = convergence_check(&expansion, &series, &grid).map_err(|e| CliError {
            kind: ErrorKind::Numerical,
            location: "validate".into(),
            message: e.to_string(),
        })?;
        report.validation = Some(conv);
    }
    Ok(())
}

fn fill_expansion<S: Scalar>(
    report: &mut Report,
    expansion: &PuiseuxExpansion<S>,
    series: &MatrixSeries<S>,
) -> Result<(), CliError> {
    report.alphas = Some(expansion.alphas.iter().map(S::to_json).collect());
    report.betas = Some(expansion.betas.iter().map(vector_json).collect());
    report.branches = Some(
        (0..expansion.m)
            .map(|h| BranchReport {
                h,
                eigenvalue_terms: expansion
                    .branch_terms(h)
                    .into_iter()
                    .enumerate()
                    .map(|(i, (zeta_power, c))| BranchTerm {
                        power: i + 1,
                        zeta_power,
                        coefficient: c.to_json(),
                    })
                    .collect(),
            })
            .collect(),
    );
    let residual = expansion
        .max_eigen_equation_residual(series)
        .map_err(classify)?;
    let norms = expansion.normalization_values();
    let tol = ToleranceConfig::default();
    let normalization_holds = norms[0].approx_eq(&S::one(), 1e-9)
        && norms[1..].iter().all(|v| {
            if S::EXACT {
                v.is_exact_zero()
            } else {
                v.is_negligible(&tol)
            }
        });
    report.checks = Some(Checks {
        eigen_equation_max_residual: residual,
        normalization_holds,
    });
    Ok(())
}

fn witness<S: Scalar>(frame: &JordanFrame<S>) -> FrameWitness {
    FrameWitness {
        note: "one valid frame among many; not part of the result",
        u: matrix_json(frame.u_matrix()),
        u_inv: matrix_json(frame.u_inv()),
        chain: frame.chain().iter().map(vector_json).collect(),
        left_vectors: frame.left_vectors().iter().map(vector_json).collect(),
        lambda: matrix_json(frame.lambda_matrix()),
    }
}

/// Parses `text`, runs it, and returns the report.
pub fn run_str(text: &str, options: &RunOptions) -> Result<Report, CliError> {
    let spec = ProblemSpec::from_json_str(text)?;
    Ok(run(&spec, options))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    const DEMO: &str = r#"{
        "n": 3,
        "mode": "exact",
        "matrices": [
            [["-1/2", "1", "1/2"], ["1/2", "0", "-1/2"], ["-1", "1", "1"]],
            [["2", "0", "-1"], ["2", "0", "-1"], ["1", "0", "0"]]
        ],
        "lambda0": "0",
        "m": 2,
        "order": 2,
        "frame_u": [["1", "1", "1"], ["0", "1", "1"], ["1", "1", "0"]]
    }"#;

    fn strings(v: &[Value]) -> Vec<&str> {
        v.iter().map(|x| x.as_str().unwrap()).collect()
    }

    #[test]
    fn demo_report() {
        let report = run_str(DEMO, &RunOptions::default()).unwrap();
        assert_eq!(report.exit_code(), 0, "{:?}", report.error);
        assert_eq!(strings(report.alphas.as_ref().unwrap()), ["1", "1/2"]);
        let betas: Vec<Vec<&str>> = report
            .betas
            .as_ref()
            .unwrap()
            .iter()
            .map(|b| strings(b))
            .collect();
        assert_eq!(
            betas,
            [["1", "0", "1"], ["1", "1", "1"], ["1/2", "1/2", "1/2"]]
        );
        assert!(report.timing_ms.is_none());
        let again = run_str(DEMO, &RunOptions::default()).unwrap();
        assert_eq!(report.to_json_pretty(), again.to_json_pretty());
        let echoed: ProblemSpec =
            serde_json::from_value(serde_json::to_value(&report.input).unwrap()).unwrap();
        assert_eq!(echoed, ProblemSpec::from_json_str(DEMO).unwrap());
    }

    #[test]
    fn exit_codes() {
        let mut spec = ProblemSpec::from_json_str(DEMO).unwrap();
        spec.frame_u = None;
        let zero = Value::String("0".into());
        let mut zeroed = spec.clone();
        zeroed.matrices[1] = vec![vec![zero.clone(); 3]; 3];
        let r = run(&zeroed, &RunOptions::default());
        assert_eq!(r.exit_code(), 2);
        assert!(!r.generic_condition.unwrap().holds);
        let mut deep = spec.clone();
        deep.order = 5;
        assert_eq!(run(&deep, &RunOptions::default()).exit_code(), 4);
        deep.matrices.push(vec![vec![zero.clone(); 3]; 3]);
        deep.matrices.push(vec![vec![zero.clone(); 3]; 3]);
        let r = run(&deep, &RunOptions::default());
        assert_eq!(r.exit_code(), 0);
        assert_eq!(
            strings(r.alphas.as_ref().unwrap()),
            ["1", "1/2", "1/8", "0", "-1/128"]
        );
        let derogatory = ProblemSpec {
            n: 2,
            matrices: vec![
                vec![vec![zero.clone(); 2]; 2],
                vec![vec![json!("1"), json!("2")], vec![json!("3"), json!("4")]],
            ],
            m: None,
            order: 1,
            ..spec.clone()
        };
        assert_eq!(run(&derogatory, &RunOptions::default()).exit_code(), 3);
        let mut bad = spec;
        bad.matrices[0][2][1] = json!("x/y");
        let r = run(&bad, &RunOptions::default());
        assert_eq!(r.exit_code(), 1);
        assert_eq!(r.error.unwrap().location, "matrices[0][2][1]");
    }

    #[test]
    fn exact_falls_back_to_float_for_irrational_roots() {
        let spec = ProblemSpec {
            n: 2,
            mode: Mode::Exact,
            matrices: vec![
                vec![vec![json!("0"), json!("1")], vec![json!("0"), json!("0")]],
                vec![vec![json!("0"), json!("0")], vec![json!("2"), json!("0")]],
            ],
            lambda0: json!("0"),
            m: None,
            order: 1,
            root_branch: 0,
            validate: None,
            tolerances: None,
            frame_u: None,
        };
        let r = run(&spec, &RunOptions::default());
        assert_eq!(r.exit_code(), 0);
        assert_eq!(r.mode, Mode::Float);
        assert!(!r.notes.is_empty());
        let a1 = r.alphas.unwrap()[0].as_f64().unwrap();
        assert!((a1 - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn env_overrides() {
        let mut tol = ToleranceConfig::default();
        apply_env_overrides(&mut tol, |k| {
            (k == "PERTURB_ZERO_THRESHOLD").then(|| "1e-6".to_string())
        })
        .unwrap();
        assert_eq!(tol.zero_threshold, 1e-6);
        assert_eq!(
            tol.rank_rel_threshold,
            ToleranceConfig::default().rank_rel_threshold
        );
        let err = apply_env_overrides(&mut tol, |_| Some("abc".into())).unwrap_err();
        assert_eq!(err.location, "environment variable PERTURB_ZERO_THRESHOLD");
    }

    #[test]
    fn float_mode_with_validation() {
        let options = RunOptions {
            mode: Some(Mode::Float),
            validate: true,
            verbose_frame: true,
            ..Default::default()
        };
        let report = run_str(DEMO, &options).unwrap();
        assert_eq!(report.exit_code(), 0, "{:?}", report.error);
        assert!(report.validation.as_ref().unwrap().passed);
        assert!(report.timing_ms.is_some());
        assert!(report.frame.is_some());
    }
}
