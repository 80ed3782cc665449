use nalgebra::Vector3;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{Format, RunConfig};
use super::output::{fmt_num, json_document, round_sig, CsvDoc};
use super::CliError;
use crate::fock::{build_fock, docs_vector, eigenrelation_residual};
use crate::grid::{Grid3, DEFAULT_HALF_SPAN};
use crate::observables::{coherent_moments, energy_mean, energy_variance};
use crate::spectral::{lambda_reconstruction, numerical_eigenvalue_residual, unit_decomposition};
use crate::states::{aocs_coefficients, phi_z, CoherentLabel};
use crate::trap::{characteristic_coefficients, StabilityVerdict, TrapParams};
use crate::{hamiltonian_residual, Complex64, Trap};

/// Grid samples per standard deviation for the default wavefunction grid.
const DEFAULT_SAMPLES_PER_WIDTH: f64 = 2.0;

/// Refuse to emit more rows than this.
const MAX_GRID_POINTS: usize = 20_000_000;

fn stable_trap(params: TrapParams) -> Result<Trap, CliError> {
    if let StabilityVerdict::Unstable(why) = params.validate() {
        return Err(CliError::Domain(format!(
            "unstable trap parameters b={} v={}: {why}",
            params.b, params.v
        )));
    }
    Ok(Trap::new(params)?)
}

fn config_value(cfg: &RunConfig) -> Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn v3(v: &Vector3<f64>) -> Value {
    json!([v[0], v[1], v[2]])
}

fn max_abs(it: impl IntoIterator<Item = Complex64>) -> f64 {
    it.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub(super) fn spectrum(cfg: &RunConfig) -> Result<String, CliError> {
    let trap = stable_trap(cfg.params)?;
    let w = trap.freqs;
    let signs: Vec<i32> = trap.modes.signs.iter().map(|s| s.value() as i32).collect();
    let mut fields = vec![
        ("verdict", json!("stable")),
        ("omega1", json!(w.omega1)),
        ("omega2", json!(w.omega2)),
        ("omega3", json!(w.omega3)),
        ("ground_energy", json!(w.ground_energy())),
        ("mode_signs", json!(signs)),
        (
            "characteristic_polynomial",
            json!(characteristic_coefficients(cfg.params)),
        ),
    ];
    if cfg.check {
        let identity = nalgebra::Matrix6::<Complex64>::identity();
        let lambda_c = trap.lambda.as_matrix().map(Complex64::from);
        let numeric_poly = trap.lambda.characteristic_polynomial();
        let poly_residual = numeric_poly
            .iter()
            .zip(characteristic_coefficients(cfg.params))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let check = json!({
            "eigenvalue_residual": numerical_eigenvalue_residual(&trap.lambda, &w),
            "eigen_equation_residual": trap.pairs.eigen_residual(&trap.lambda),
            "duality_residual": trap.pairs.duality_residual(),
            "unit_decomposition_residual": max_abs((unit_decomposition(&trap.pairs) - identity).iter().copied()),
            "lambda_reconstruction_residual": max_abs((lambda_reconstruction(&trap.pairs) - lambda_c).iter().copied()),
            "characteristic_polynomial_residual": poly_residual,
            "ladder_commutator_residual": trap.modes.commutator_residual(),
            "hamiltonian_residual": hamiltonian_residual(&trap.modes, cfg.params),
        });
        fields.push(("check", check));
    }

    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("command".into(), json!("spectrum"));
            doc.insert("config".into(), config_value(cfg));
            for (k, v) in fields {
                doc.insert(k.into(), v);
            }
            Ok(json_document(Value::Object(doc)))
        }
        Format::Csv => {
            let mut csv = CsvDoc::default();
            csv.comment("command", json!("spectrum"));
            csv.comment("config", config_value(cfg));
            csv.row(["quantity", "value"]);
            for (k, v) in fields {
                flatten_rows(&mut csv, k, &v);
            }
            Ok(csv.finish())
        }
    }
}

fn flatten_rows(csv: &mut CsvDoc, key: &str, v: &Value) {
    match v {
        Value::Number(n) => csv.row([key.to_string(), fmt_num(n.as_f64().unwrap_or(f64::NAN))]),
        Value::String(s) => csv.row([key, s.as_str()]),
        Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                flatten_rows(csv, &format!("{key}[{i}]"), item);
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                flatten_rows(csv, &format!("{key}.{k}"), item);
            }
        }
        Value::Bool(b) => csv.row([key.to_string(), b.to_string()]),
        Value::Null => csv.row([key, ""]),
    }
}

fn labels(trap: &Trap, cfg: &RunConfig) -> Result<Vec<CoherentLabel>, CliError> {
    let inputs = if cfg.z_labels.is_empty() {
        vec![Default::default()]
    } else {
        cfg.z_labels.clone()
    };
    inputs
        .iter()
        .map(|z| Ok(trap.label(z.to_complex())?))
        .collect()
}

fn label_value(label: &CoherentLabel) -> Value {
    json!({
        "z": label.z.iter().map(|z| c(*z)).collect::<Vec<_>>(),
        "gamma": v3(&label.gamma),
        "sigma": v3(&label.sigma),
        "phase": c(label.phase),
    })
}

pub(super) fn wavefunction(cfg: &RunConfig) -> Result<String, CliError> {
    let trap = stable_trap(cfg.params)?;
    let label = labels(&trap, cfg)?[0];
    let grid = match cfg.grid {
        Some(axes) => Grid3::new(axes),
        None => Grid3::around(
            label.gamma,
            trap.ground.widths(),
            DEFAULT_HALF_SPAN,
            DEFAULT_SAMPLES_PER_WIDTH,
        ),
    };
    let axis_lens = grid.axes.map(|a| a.len());
    let total = axis_lens
        .iter()
        .try_fold(1usize, |acc, n| acc.checked_mul(*n));
    if total.is_none_or(|n| n > MAX_GRID_POINTS) {
        return Err(CliError::Resource(format!(
            "grid of {axis_lens:?} points exceeds the limit of {MAX_GRID_POINTS}"
        )));
    }
    let points = grid.points();
    let values: Vec<Complex64> = points
        .par_iter()
        .map(|r| phi_z(&trap.ground, &label, r))
        .collect();

    let mut state = label_value(&label);
    state["norm_const"] = json!(trap.ground.norm_const);
    state["params"] = json!({"b": cfg.params.b, "v": cfg.params.v});
    let grid_value = serde_json::to_value(grid.axes).expect("axes serialize");

    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = CsvDoc::default();
            csv.comment("command", json!("wavefunction"));
            csv.comment("config", config_value(cfg));
            csv.comment("state", state);
            csv.comment("grid", grid_value);
            csv.row(["x", "y", "z", "re_phi", "im_phi", "abs_phi_sq"]);
            for (r, phi) in points.iter().zip(&values) {
                csv.row([r[0], r[1], r[2], phi.re, phi.im, phi.norm_sqr()].map(fmt_num));
            }
            Ok(csv.finish())
        }
        Format::Json => {
            let rows: Vec<Value> = points
                .iter()
                .zip(&values)
                .map(|(r, phi)| json!([r[0], r[1], r[2], phi.re, phi.im, phi.norm_sqr()]))
                .collect();
            Ok(json_document(json!({
                "command": "wavefunction",
                "config": config_value(cfg),
                "state": state,
                "grid": grid_value,
                "columns": ["x", "y", "z", "re_phi", "im_phi", "abs_phi_sq"],
                "rows": rows,
            })))
        }
    }
}

struct AuditRow {
    label: CoherentLabel,
    moments: crate::MomentReport,
    energy_mean: f64,
    energy_variance: f64,
    oracle: Option<OracleRow>,
}

struct OracleRow {
    energy_mean: f64,
    energy_variance: f64,
    aocs_docs_delta: f64,
    eigenrelation_residual: f64,
    norm_deficit: f64,
}

impl OracleRow {
    fn max_delta(&self, row: &AuditRow) -> f64 {
        (self.energy_mean - row.energy_mean)
            .abs()
            .max((self.energy_variance - row.energy_variance).abs())
            .max(self.aocs_docs_delta)
    }
}

pub(super) fn audit(cfg: &RunConfig) -> Result<String, CliError> {
    let trap = stable_trap(cfg.params)?;
    let fock = if cfg.oracle {
        Some(build_fock(&trap.freqs, cfg.fock_cutoff)?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for label in labels(&trap, cfg)? {
        let moments = coherent_moments(cfg.params, &label)?;
        let e_mean = energy_mean(&trap.freqs, &label);
        let e_var = energy_variance(cfg.params, &label)?;
        let oracle = match &fock {
            Some(ops) => {
                let n = cfg.fock_cutoff;
                let table = aocs_coefficients(&label, n)?;
                let docs = docs_vector(&label, n)?;
                let (mean, var) = ops.energy_statistics(&docs);
                let delta = table
                    .as_slice()
                    .iter()
                    .zip(docs.iter())
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max);
                Some(OracleRow {
                    energy_mean: mean,
                    energy_variance: var,
                    aocs_docs_delta: delta,
                    eigenrelation_residual: eigenrelation_residual(&label, n)?,
                    norm_deficit: table.norm_deficit(),
                })
            }
            None => None,
        };
        rows.push(AuditRow {
            label,
            moments,
            energy_mean: e_mean,
            energy_variance: e_var,
            oracle,
        });
    }
    let max_delta = rows
        .iter()
        .filter_map(|r| r.oracle.as_ref().map(|o| o.max_delta(r)))
        .fold(None, |acc: Option<f64>, d| {
            Some(acc.map_or(d, |a| a.max(d)))
        });

    match cfg.format.unwrap_or(Format::Json) {
        Format::Json => {
            let entries: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let m = &r.moments;
                    let mut e = label_value(&r.label);
                    e["moments"] = json!({
                        "mean_r": m.mean_r,
                        "mean_p": m.mean_p,
                        "var_r": m.var_r,
                        "var_p": m.var_p,
                        "cross": m.cross.iter().map(|z| c(*z)).collect::<Vec<_>>(),
                        "uncertainty_products": m.uncertainty_products,
                    });
                    e["energy_mean"] = json!(r.energy_mean);
                    e["energy_variance"] = json!(r.energy_variance);
                    if let Some(o) = &r.oracle {
                        e["oracle"] = json!({
                            "energy_mean": o.energy_mean,
                            "energy_variance": o.energy_variance,
                            "energy_mean_delta": (o.energy_mean - r.energy_mean).abs(),
                            "energy_variance_delta": (o.energy_variance - r.energy_variance).abs(),
                            "aocs_docs_delta": o.aocs_docs_delta,
                            "eigenrelation_residual": o.eigenrelation_residual,
                            "norm_deficit": o.norm_deficit,
                        });
                    }
                    e
                })
                .collect();
            let mut doc = json!({
                "command": "audit",
                "config": config_value(cfg),
                "ground_energy": trap.freqs.ground_energy(),
                "labels": entries,
            });
            if let Some(d) = max_delta {
                doc["max_oracle_delta"] = json!(d);
            }
            Ok(json_document(doc))
        }
        Format::Csv => {
            let mut csv = CsvDoc::default();
            csv.comment("command", json!("audit"));
            csv.comment("config", config_value(cfg));
            if let Some(d) = max_delta {
                csv.comment("max_oracle_delta", json!(d));
            }
            let mut header: Vec<String> = [
                "z1_re",
                "z1_im",
                "z2_re",
                "z2_im",
                "z3_re",
                "z3_im",
                "mean_x",
                "mean_y",
                "mean_z",
                "mean_px",
                "mean_py",
                "mean_pz",
                "var_x",
                "var_y",
                "var_z",
                "var_px",
                "var_py",
                "var_pz",
                "dx_dpx",
                "dy_dpy",
                "dz_dpz",
                "energy_mean",
                "energy_variance",
            ]
            .map(String::from)
            .to_vec();
            if cfg.oracle {
                header.extend(
                    [
                        "oracle_energy_mean_delta",
                        "oracle_energy_variance_delta",
                        "oracle_aocs_docs_delta",
                        "oracle_eigenrelation_residual",
                    ]
                    .map(String::from),
                );
            }
            csv.row(&header);
            for r in &rows {
                let m = &r.moments;
                let mut cells: Vec<f64> = r.label.z.iter().flat_map(|z| [z.re, z.im]).collect();
                for arr in [m.mean_r, m.mean_p, m.var_r, m.var_p, m.uncertainty_products] {
                    cells.extend(arr);
                }
                cells.extend([r.energy_mean, r.energy_variance]);
                if let Some(o) = &r.oracle {
                    cells.extend([
                        (o.energy_mean - r.energy_mean).abs(),
                        (o.energy_variance - r.energy_variance).abs(),
                        o.aocs_docs_delta,
                        o.eigenrelation_residual,
                    ]);
                }
                csv.row(cells.into_iter().map(fmt_num));
            }
            Ok(csv.finish())
        }
    }
}

pub(super) fn scan(cfg: &RunConfig) -> Result<String, CliError> {
    // Snap grid values to 12 significant digits so that decimal inputs such
    // as 0.1 + 9 * 0.1 land on 1.0 exactly.
    let bs: Vec<f64> = cfg.b_range.points().map(round_sig).collect();
    let vs: Vec<f64> = cfg.v_range.points().map(round_sig).collect();
    let cells: Vec<(f64, f64)> = bs
        .iter()
        .flat_map(|&b| vs.iter().map(move |&v| (b, v)))
        .collect();
    let rows: Vec<(f64, f64, String, Option<[f64; 3]>)> = cells
        .par_iter()
        .map(|&(b, v)| {
            let p = TrapParams::new(b, v);
            match p.validate() {
                StabilityVerdict::Stable => {
                    let w = crate::frequencies(p).expect("stable parameters have frequencies");
                    (b, v, "stable".to_string(), Some(w.as_array()))
                }
                StabilityVerdict::Unstable(why) => {
                    (b, v, format!("unstable:{}", why.as_str()), None)
                }
            }
        })
        .collect();

    match cfg.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut csv = CsvDoc::default();
            csv.comment("command", json!("scan"));
            csv.comment("config", config_value(cfg));
            csv.row(["b", "v", "verdict", "omega1", "omega2", "omega3"]);
            for (b, v, verdict, w) in &rows {
                let freqs = w.map_or([String::new(), String::new(), String::new()], |w| {
                    w.map(fmt_num)
                });
                let [w1, w2, w3] = freqs;
                csv.row([fmt_num(*b), fmt_num(*v), verdict.clone(), w1, w2, w3]);
            }
            Ok(csv.finish())
        }
        Format::Json => {
            let entries: Vec<Value> = rows
                .iter()
                .map(|(b, v, verdict, w)| {
                    json!({"b": b, "v": v, "verdict": verdict, "frequencies": w})
                })
                .collect();
            Ok(json_document(json!({
                "command": "scan",
                "config": config_value(cfg),
                "rows": entries,
            })))
        }
    }
}
