//! One function per subcommand. Each returns its rendered report together
//! with an optional failure that sets a nonzero exit status after the
//! report has been printed.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use quiver_si::flag::{build_flag_quiver, verify_translation, FlagProblem, FlagQuiverSpec, TranslationCheck};
use quiver_si::generic::{check_ext_descent, is_generically_semistable};
use quiver_si::lab::{
    check_fulton, check_ktt, check_polynomial_consistency, check_saturation, search_ktt_witnesses, SearchBounds,
    SearchReport, StretchVerdict,
};
use quiver_si::lr::stretched_lr;
use quiver_si::quiver::{evaluate_weight, sigma_beta};
use quiver_si::si::{si_dim_eval_oracle, stretch_function, OracleConfig, OracleMode, StretchTable, WeightSpaceQuery};
use quiver_si::{DimensionVector, Partition, QuiverSpec, Weight};
use serde::Serialize;

use crate::input::{load_quiver, read_json, VectorArg};
use crate::output::{keyed, render, Format, Report};
use crate::Failure;

pub struct Outcome {
    pub stdout: String,
    pub failure: Option<Failure>,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, failure: None }
    }
}

#[derive(Serialize)]
struct LrReport {
    lambda: Partition,
    mu: Partition,
    nu: Partition,
    n: usize,
    value: u64,
}

impl Report for LrReport {
    fn headers(&self) -> Vec<&'static str> {
        vec!["lambda", "mu", "nu", "n", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        vec![vec![
            self.lambda.to_string(),
            self.mu.to_string(),
            self.nu.to_string(),
            self.n.to_string(),
            self.value.to_string(),
        ]]
    }

    fn table(&self) -> Option<String> {
        Some(format!("{}\n", self.value))
    }
}

pub fn lr(lambda: Partition, mu: Partition, nu: Partition, n: usize, format: Format) -> Result<Outcome> {
    let value = stretched_lr(&lambda, &mu, &nu, n);
    let report = LrReport {
        lambda,
        mu,
        nu,
        n,
        value,
    };
    Ok(Outcome::ok(render(&report, format)?))
}

#[derive(Serialize)]
struct SiRow {
    n: usize,
    dim: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    stabilized: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

#[derive(Serialize)]
struct SiReport {
    quiver: QuiverSpec,
    alpha: BTreeMap<String, i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<BTreeMap<String, i64>>,
    sigma: BTreeMap<String, i64>,
    rows: Vec<SiRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    checks: Vec<StretchVerdict>,
}

impl Report for SiReport {
    fn headers(&self) -> Vec<&'static str> {
        if self.rows.iter().any(|r| r.oracle.is_some()) {
            vec!["n", "dim", "oracle", "stabilized", "agree"]
        } else {
            vec!["n", "dim"]
        }
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let opt = |x: Option<String>| x.unwrap_or_default();
        self.rows
            .iter()
            .map(|r| {
                let mut row = vec![r.n.to_string(), r.dim.to_string()];
                if r.oracle.is_some() {
                    row.push(opt(r.oracle.map(|x| x.to_string())));
                    row.push(opt(r.stabilized.map(|x| x.to_string())));
                    row.push(opt(r.agree.map(|x| x.to_string())));
                }
                row
            })
            .collect()
    }

    fn preamble(&self) -> Vec<String> {
        let order = &self.quiver.vertices;
        let mut lines = vec![format!("alpha = {}", keyed(&self.alpha, order))];
        if let Some(beta) = &self.beta {
            lines.push(format!("beta  = {}", keyed(beta, order)));
        }
        lines.push(format!("sigma = {}", keyed(&self.sigma, order)));
        for check in &self.checks {
            lines.push(format!(
                "{} = {}",
                serde_json::to_string(&check.behavior)
                    .unwrap_or_default()
                    .trim_matches('"'),
                verdict_text(check)
            ));
        }
        lines
    }
}

fn verdict_text(v: &StretchVerdict) -> String {
    use quiver_si::lab::VerdictDetails;
    match &v.details {
        VerdictDetails::Vacuous => "vacuous".into(),
        VerdictDetails::Confirmed => "confirmed".into(),
        VerdictDetails::Polynomial { coefficients } => {
            format!("consistent, coefficients [{}]", coefficients.join(", "))
        }
        VerdictDetails::Counterexample { n, value, expected } => {
            format!("fails at n = {n}: got {value}, expected {expected}")
        }
    }
}

pub struct SiArgs<'a> {
    pub quiver: &'a Path,
    pub alpha: Option<VectorArg>,
    pub beta: Option<VectorArg>,
    pub sigma: Option<VectorArg>,
    pub stretch: usize,
    pub oracle: bool,
    pub exact: Option<i64>,
    pub check: bool,
    pub seed: u64,
}

pub fn si(args: SiArgs<'_>, format: Format) -> Result<Outcome> {
    let loaded = load_quiver(args.quiver)?;
    let q = &loaded.quiver;
    let alpha = DimensionVector::new(q, loaded.require("alpha", args.alpha.as_ref())?)?;
    let beta = loaded
        .vector("beta", args.beta.as_ref())?
        .map(|b| DimensionVector::new(q, b))
        .transpose()?;
    let sigma_given = loaded.vector("sigma", args.sigma.as_ref())?;

    let (sigma, values) = match &beta {
        Some(beta) => {
            let sigma = sigma_beta(q, beta)?;
            if sigma_given.as_deref().is_some_and(|s| s != sigma.as_slice()) {
                eprintln!("warning: sigma ignored, using sigma_beta derived from beta");
            }
            let table = stretch_function(q, &alpha, beta, args.stretch, None)?;
            (sigma, table.values)
        }
        None => {
            let Some(sigma) = sigma_given else {
                return Err(quiver_si::Error::InvalidArgument("pass --beta or --sigma".into()).into());
            };
            if args.oracle {
                return Err(quiver_si::Error::InvalidArgument("--oracle needs beta, not sigma".into()).into());
            }
            let sigma = Weight::new(q, sigma)?;
            let total = evaluate_weight(&sigma, &alpha)?;
            if total != 0 {
                eprintln!("note: sigma(alpha) = {total}, so every weight space is zero");
            }
            let values = (1..=args.stretch)
                .map(|n| {
                    WeightSpaceQuery::new(q.clone(), alpha.clone(), sigma.scale(n as i64))?
                        .dim()
                        .map(|c| c.dim)
                })
                .collect::<quiver_si::Result<Vec<_>>>()?;
            (sigma, values)
        }
    };

    let mut rows: Vec<SiRow> = values
        .iter()
        .enumerate()
        .map(|(i, &dim)| SiRow {
            n: i + 1,
            dim,
            oracle: None,
            stabilized: None,
            agree: None,
        })
        .collect();
    let mut failure = None;
    if let (true, Some(beta)) = (args.oracle, &beta) {
        let mut config = OracleConfig::with_seed(args.seed);
        if let Some(bound) = args.exact {
            config.mode = OracleMode::Exact { bound };
        }
        for row in &mut rows {
            let result = si_dim_eval_oracle(q, &alpha, &beta.scale(row.n as i64), &config)?;
            if !result.stabilized {
                eprintln!("warning: oracle rank did not stabilize at n = {}", row.n);
            }
            row.oracle = Some(result.dim);
            row.stabilized = Some(result.stabilized);
            row.agree = Some(result.dim == row.dim);
        }
        if let Some(bad) = rows.iter().find(|r| r.agree == Some(false)) {
            failure = Some(Failure::new(
                4,
                format!(
                    "oracle value {} disagrees with the Cauchy count {} at n = {}",
                    bad.oracle.unwrap_or_default(),
                    bad.dim,
                    bad.n
                ),
            ));
        }
    }

    let mut checks = Vec::new();
    if args.check {
        let table = StretchTable::from_values(values.clone());
        checks.push(check_saturation(&table));
        checks.push(check_fulton(&table));
        checks.push(check_ktt(&table));
        let degree = q.rep_dimension(&alpha);
        match check_polynomial_consistency(&table, degree) {
            Ok(v) => checks.push(v),
            Err(e) => eprintln!("note: polynomial check skipped ({e})"),
        }
    }

    let report = SiReport {
        quiver: q.to_spec(),
        alpha: alpha.to_map(q),
        beta: beta.as_ref().map(|b| b.to_map(q)),
        sigma: sigma.to_map(q),
        rows,
        checks,
    };
    Ok(Outcome {
        stdout: render(&report, format)?,
        failure,
    })
}

#[derive(Serialize)]
struct TranslateReport {
    problem: FlagProblem,
    flag_quiver: FlagQuiverSpec,
    checks: Vec<TranslationCheck>,
}

impl Report for TranslateReport {
    fn headers(&self) -> Vec<&'static str> {
        vec!["n", "quiver_dim", "tensor_dim", "equal"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.checks
            .iter()
            .map(|c| {
                vec![
                    c.n.to_string(),
                    c.quiver_dim.to_string(),
                    c.tensor_dim.to_string(),
                    c.equal.to_string(),
                ]
            })
            .collect()
    }

    fn preamble(&self) -> Vec<String> {
        let fq = &self.flag_quiver;
        let q = &fq.quiver;
        let order = q.vertices();
        vec![
            format!("flag quiver: {} vertices, {} arrows", q.vertex_count(), q.arrow_count()),
            format!("alpha = {}", keyed(&fq.alpha.to_map(q), order)),
            format!("beta  = {}", keyed(&fq.beta.to_map(q), order)),
            format!("sigma = {}", keyed(&fq.sigma.to_map(q), order)),
        ]
    }
}

pub fn translate(problem: &Path, stretches: Vec<usize>, format: Format) -> Result<Outcome> {
    let problem: FlagProblem = read_json(problem)?;
    problem.validate()?;
    let flag_quiver = build_flag_quiver(&problem)?;
    let checks = stretches
        .into_iter()
        .map(|n| verify_translation(&problem, n))
        .collect::<quiver_si::Result<Vec<_>>>()?;
    let failure = checks.iter().find(|c| !c.equal).map(|c| {
        Failure::new(
            4,
            format!(
                "translation identity fails at n = {}: quiver side {}, tensor side {}",
                c.n, c.quiver_dim, c.tensor_dim
            ),
        )
    });
    let report = TranslateReport {
        problem,
        flag_quiver,
        checks,
    };
    Ok(Outcome {
        stdout: render(&report, format)?,
        failure,
    })
}

#[derive(Serialize)]
struct SearchOutput(SearchReport);

impl Report for SearchOutput {
    fn headers(&self) -> Vec<&'static str> {
        vec!["arrows", "alpha", "beta", "values", "ktt"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        self.0
            .findings
            .iter()
            .map(|f| {
                let order = &f.quiver.vertices;
                let arrows: Vec<String> = f
                    .quiver
                    .arrows
                    .iter()
                    .map(|a| format!("{}->{}", a.tail, a.head))
                    .collect();
                let values: Vec<String> = f.table.values.iter().map(ToString::to_string).collect();
                vec![
                    arrows.join(" "),
                    keyed(&f.alpha, order),
                    keyed(&f.beta, order),
                    values.join(" "),
                    verdict_text(&f.verdict),
                ]
            })
            .collect()
    }

    fn json(&self) -> Result<String> {
        Ok(self.0.to_json_lines())
    }
}

pub fn search(bounds: SearchBounds, oracle: bool, seed: u64, format: Format) -> Result<Outcome> {
    let config = oracle.then(|| OracleConfig::with_seed(seed));
    let report = search_ktt_witnesses(&bounds, config.as_ref())?;
    eprintln!(
        "checked {} instances, {} with first value 2, {} violations",
        report.instances_checked,
        report.findings.len(),
        report.violations
    );
    let failure = (report.violations > 0).then(|| {
        Failure::new(
            4,
            format!(
                "CRITICAL: {} stretch tables contradict the KTT prediction",
                report.violations
            ),
        )
    });
    Ok(Outcome {
        stdout: render(&SearchOutput(report), format)?,
        failure,
    })
}

/// `field, value` rows for single-record reports.
fn field_rows(fields: Vec<(&str, String)>) -> Vec<Vec<String>> {
    fields.into_iter().map(|(k, v)| vec![k.to_string(), v]).collect()
}

#[derive(Serialize)]
struct ExtDescentOutput {
    #[serde(skip)]
    order: Vec<String>,
    alpha: BTreeMap<String, i64>,
    beta: BTreeMap<String, i64>,
    hom_vw: usize,
    ext_vw: usize,
    ext_sw: usize,
    gamma: BTreeMap<String, i64>,
    kernel_dim: BTreeMap<String, i64>,
    trivial: bool,
    generic: bool,
    equal: bool,
}

impl Report for ExtDescentOutput {
    fn headers(&self) -> Vec<&'static str> {
        vec!["field", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let o = &self.order;
        field_rows(vec![
            ("alpha", keyed(&self.alpha, o)),
            ("beta", keyed(&self.beta, o)),
            ("hom_vw", self.hom_vw.to_string()),
            ("ext_vw", self.ext_vw.to_string()),
            ("ext_sw", self.ext_sw.to_string()),
            ("gamma", keyed(&self.gamma, o)),
            ("kernel_dim", keyed(&self.kernel_dim, o)),
            ("trivial", self.trivial.to_string()),
            ("generic", self.generic.to_string()),
            ("equal", self.equal.to_string()),
        ])
    }
}

pub fn ext_descent(
    quiver: &Path,
    alpha: Option<VectorArg>,
    beta: Option<VectorArg>,
    trials: usize,
    seed: u64,
    format: Format,
) -> Result<Outcome> {
    let loaded = load_quiver(quiver)?;
    let q = &loaded.quiver;
    let alpha = DimensionVector::new(q, loaded.require("alpha", alpha.as_ref())?)?;
    let beta = DimensionVector::new(q, loaded.require("beta", beta.as_ref())?)?;
    let r = check_ext_descent(q, &alpha, &beta, trials, seed)?;
    if !r.generic {
        eprintln!("warning: no sampled morphism attained the maximal rank vector");
    }
    let report = ExtDescentOutput {
        order: q.vertices().to_vec(),
        alpha: q.values_to_map(&r.alpha),
        beta: q.values_to_map(&r.beta),
        hom_vw: r.hom_vw,
        ext_vw: r.ext_vw,
        ext_sw: r.ext_sw,
        gamma: q.values_to_map(&r.gamma),
        kernel_dim: q.values_to_map(&r.kernel_dim),
        trivial: r.trivial,
        generic: r.generic,
        equal: r.equal,
    };
    Ok(Outcome::ok(render(&report, format)?))
}

#[derive(Serialize)]
struct SemistableOutput {
    #[serde(skip)]
    order: Vec<String>,
    alpha: BTreeMap<String, i64>,
    sigma: BTreeMap<String, i64>,
    semistable: bool,
    stable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    destabilizing: Option<BTreeMap<String, i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    strictly_semistable_witness: Option<BTreeMap<String, i64>>,
}

impl Report for SemistableOutput {
    fn headers(&self) -> Vec<&'static str> {
        vec!["field", "value"]
    }

    fn rows(&self) -> Vec<Vec<String>> {
        let o = &self.order;
        let opt = |m: &Option<BTreeMap<String, i64>>| m.as_ref().map(|m| keyed(m, o)).unwrap_or_default();
        field_rows(vec![
            ("alpha", keyed(&self.alpha, o)),
            ("sigma", keyed(&self.sigma, o)),
            ("semistable", self.semistable.to_string()),
            ("stable", self.stable.to_string()),
            ("destabilizing", opt(&self.destabilizing)),
            ("strictly_semistable_witness", opt(&self.strictly_semistable_witness)),
        ])
    }
}

pub fn semistable(
    quiver: &Path,
    alpha: Option<VectorArg>,
    beta: Option<VectorArg>,
    sigma: Option<VectorArg>,
    trials: usize,
    seed: u64,
    format: Format,
) -> Result<Outcome> {
    let loaded = load_quiver(quiver)?;
    let q = &loaded.quiver;
    let alpha = DimensionVector::new(q, loaded.require("alpha", alpha.as_ref())?)?;
    let sigma = match loaded.vector("beta", beta.as_ref())? {
        Some(b) => sigma_beta(q, &DimensionVector::new(q, b)?)?,
        None => Weight::new(q, loaded.require("sigma", sigma.as_ref())?)?,
    };
    let v = is_generically_semistable(q, &alpha, &sigma, trials, seed)?;
    let report = SemistableOutput {
        order: q.vertices().to_vec(),
        alpha: alpha.to_map(q),
        sigma: sigma.to_map(q),
        semistable: v.semistable,
        stable: v.stable,
        destabilizing: v.destabilizing.map(|d| q.values_to_map(&d)),
        strictly_semistable_witness: v.strictly_semistable_witness.map(|d| q.values_to_map(&d)),
    };
    Ok(Outcome::ok(render(&report, format)?))
}
