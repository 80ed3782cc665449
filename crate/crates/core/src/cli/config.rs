//! Run configuration: a JSON file, command-line flags, or both (flags win).

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use super::CliError;
use crate::grid::Axis;
use crate::trap::TrapParams;
use crate::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// One coherent-state label as `[re, im]` pairs.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ZInput {
    #[serde(default)]
    pub z1: [f64; 2],
    #[serde(default)]
    pub z2: [f64; 2],
    #[serde(default)]
    pub z3: [f64; 2],
}

impl ZInput {
    pub fn to_complex(self) -> [Complex64; 3] {
        [self.z1, self.z2, self.z3].map(|[re, im]| Complex64::new(re, im))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub params: TrapParams,
    pub z_labels: Vec<ZInput>,
    /// `None` picks a default grid around the state.
    pub grid: Option<[Axis; 3]>,
    pub fock_cutoff: usize,
    pub oracle: bool,
    pub check: bool,
    pub b_range: Axis,
    pub v_range: Axis,
    pub format: Option<Format>,
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: TrapParams::new(1.0, -0.5),
            z_labels: vec![ZInput::default()],
            grid: None,
            fock_cutoff: 30,
            oracle: false,
            check: false,
            b_range: Axis::new(0.1, 2.0, 0.1),
            v_range: Axis::new(-1.0, 0.5, 0.1),
            format: None,
            out: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if let Some(axes) = &self.grid {
            for a in axes {
                if !a.is_valid() {
                    return Err(CliError::Usage(format!(
                        "invalid grid axis {}:{}:{}",
                        a.min, a.max, a.step
                    )));
                }
            }
        }
        for (name, a) in [("b-range", &self.b_range), ("v-range", &self.v_range)] {
            if !a.is_valid() {
                return Err(CliError::Usage(format!(
                    "invalid {name} {}:{}:{}",
                    a.min, a.max, a.step
                )));
            }
        }
        if self.fock_cutoff < 1 {
            return Err(CliError::Usage("--cutoff must be at least 1".into()));
        }
        if self
            .z_labels
            .iter()
            .flat_map(|z| [z.z1, z.z2, z.z3])
            .flatten()
            .any(|x| !x.is_finite())
        {
            return Err(CliError::Usage(
                "coherent-state labels must be finite".into(),
            ));
        }
        Ok(())
    }
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// JSON configuration file; flags given alongside override its fields.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Magnetic parameter b.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Quadrupole parameter v.
    #[arg(long, allow_hyphen_values = true)]
    pub v: Option<f64>,
    /// Cyclotron label as "re,im".
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true, value_parser = parse_pair)]
    pub z1: Option<[f64; 2]>,
    /// Magnetron label as "re,im".
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true, value_parser = parse_pair)]
    pub z2: Option<[f64; 2]>,
    /// Axial label as "re,im".
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true, value_parser = parse_pair)]
    pub z3: Option<[f64; 2]>,
    /// Grid axis "min:max:step"; give once for all axes or three times for x, y, z.
    #[arg(long, value_name = "MIN:MAX:STEP", allow_hyphen_values = true, value_parser = parse_axis)]
    pub grid: Vec<Axis>,
    /// Per-mode Fock cutoff N.
    #[arg(long)]
    pub cutoff: Option<usize>,
    /// Cross-check closed forms against the truncated Fock space.
    #[arg(long)]
    pub oracle: bool,
    /// Report eigen-decomposition residuals.
    #[arg(long)]
    pub check: bool,
    /// Scan range for b as "min:max:step".
    #[arg(long, value_name = "MIN:MAX:STEP", allow_hyphen_values = true, value_parser = parse_axis)]
    pub b_range: Option<Axis>,
    /// Scan range for v as "min:max:step".
    #[arg(long, value_name = "MIN:MAX:STEP", allow_hyphen_values = true, value_parser = parse_axis)]
    pub v_range: Option<Axis>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

impl RunArgs {
    /// Loads the config file, if any, and overlays the flags.
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Resource(format!("cannot read {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        if let Some(b) = self.b {
            cfg.params.b = b;
        }
        if let Some(v) = self.v {
            cfg.params.v = v;
        }
        if self.z1.is_some() || self.z2.is_some() || self.z3.is_some() {
            cfg.z_labels = vec![ZInput {
                z1: self.z1.unwrap_or_default(),
                z2: self.z2.unwrap_or_default(),
                z3: self.z3.unwrap_or_default(),
            }];
        }
        match self.grid.as_slice() {
            [] => {}
            [a] => cfg.grid = Some([*a; 3]),
            [x, y, z] => cfg.grid = Some([*x, *y, *z]),
            other => {
                return Err(CliError::Usage(format!(
                    "--grid takes one or three axes, got {}",
                    other.len()
                )));
            }
        }
        if let Some(n) = self.cutoff {
            cfg.fock_cutoff = n;
        }
        cfg.oracle |= self.oracle;
        cfg.check |= self.check;
        if let Some(a) = self.b_range {
            cfg.b_range = a;
        }
        if let Some(a) = self.v_range {
            cfg.v_range = a;
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        if self.out.is_some() {
            cfg.out = self.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn parse_pair(s: &str) -> Result<[f64; 2], String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected \"re,im\", got {s:?}"))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok([p(re)?, p(im)?])
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [min, max, step] = parts.as_slice() else {
        return Err(format!("expected \"min:max:step\", got {s:?}"));
    };
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    let axis = Axis::new(p(min)?, p(max)?, p(step)?);
    if !axis.is_valid() {
        return Err(format!("need finite min <= max and step > 0, got {s:?}"));
    }
    Ok(axis)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_pair("-0.3, 1e-2").unwrap(), [-0.3, 0.01]);
        assert!(parse_pair("1").is_err());
        assert_eq!(parse_axis("-3:3:0.5").unwrap(), Axis::new(-3.0, 3.0, 0.5));
        assert!(parse_axis("0:1:0").is_err());
        assert!(parse_axis("0:1").is_err());
    }

    #[test]
    fn flags_override_file() {
        let dir = std::env::temp_dir().join(format!("penning-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.json");
        std::fs::write(
            &path,
            r#"{"params": {"b": 2.0, "v": -1.0}, "z_labels": [{"z1": [0.5, 0.0]}, {"z3": [0.0, 1.0]}], "fock_cutoff": 12}"#,
        )
        .unwrap();
        let args = RunArgs {
            config: Some(path.clone()),
            v: Some(-0.5),
            ..Default::default()
        };
        let cfg = args.resolve().unwrap();
        assert_eq!(cfg.params, TrapParams::new(2.0, -0.5));
        assert_eq!(cfg.z_labels.len(), 2);
        assert_eq!(cfg.fock_cutoff, 12);

        let args = RunArgs {
            config: Some(path),
            z2: Some([0.0, 1.0]),
            ..Default::default()
        };
        let cfg = args.resolve().unwrap();
        assert_eq!(
            cfg.z_labels,
            vec![ZInput {
                z2: [0.0, 1.0],
                ..Default::default()
            }]
        );
        std::fs::remove_dir_all(dir).ok();
    }

    #[test]
    fn bad_grid_count() {
        let a = Axis::new(0.0, 1.0, 0.5);
        let args = RunArgs {
            grid: vec![a, a],
            ..Default::default()
        };
        assert!(matches!(args.resolve(), Err(CliError::Usage(_))));
    }
}
