//! Run configuration: defaults, JSON config files and command-line overrides.

use std::f64::consts::FRAC_PI_2;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use zorich_core::dynamics::{ChaosParams, GridSpec, OrbitParams};

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitConfig {
    pub n_max: Option<usize>,
    pub escape_threshold: Option<f64>,
    pub window_len: Option<usize>,
    pub attract_tol: Option<f64>,
    pub radius_cap: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    /// Lower corner; defaults to `(-ρ, …, -ρ, -5)`.
    pub lo: Option<Vec<f64>>,
    /// Upper corner; defaults to `(ρ, …, ρ, 5)`.
    pub hi: Option<Vec<f64>>,
    /// Nodes per axis; defaults to 101 in the plane and 41 otherwise.
    pub resolution: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChaosConfig {
    pub n_points: usize,
    pub burn_in: usize,
    pub streams: usize,
}

impl Default for ChaosConfig {
    fn default() -> Self {
        ChaosConfig {
            n_points: 100_000,
            burn_in: 20,
            streams: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub dim: usize,
    /// Half side of the parameter cube; `π/2` in the plane, 1 otherwise.
    pub rho: Option<f64>,
    pub a: f64,
    pub alpha: f64,
    pub samples_per_axis: usize,
    pub lattice_n: Option<u64>,
    pub n_cap: u64,
    pub unit_constants: bool,
    pub seed: u64,
    pub orbit: OrbitConfig,
    pub grid: GridConfig,
    pub chaos: ChaosConfig,
    /// Negative-control hook for `verify`: scales `c₄` before checking.
    pub perturb_c4: Option<f64>,
    /// Output directory; not part of the configuration hash.
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dim: 2,
            rho: None,
            a: 3.0,
            alpha: 0.5,
            samples_per_axis: 64,
            lattice_n: None,
            n_cap: 10_000,
            unit_constants: false,
            seed: 0,
            orbit: OrbitConfig::default(),
            grid: GridConfig::default(),
            chaos: ChaosConfig::default(),
            perturb_c4: None,
            out: PathBuf::from("."),
        }
    }
}

/// Command-line values that override the configuration file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub dim: Option<usize>,
    pub rho: Option<f64>,
    pub a: Option<f64>,
    pub alpha: Option<f64>,
    pub lattice_n: Option<u64>,
    pub n_cap: Option<u64>,
    pub unit_constants: bool,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, overrides: &Overrides) -> Result<Self, String> {
        let mut cfg = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("malformed config {}: {e}", p.display()))?
            }
            None => RunConfig::default(),
        };
        let o = overrides;
        if let Some(v) = o.dim {
            cfg.dim = v;
        }
        if o.rho.is_some() {
            cfg.rho = o.rho;
        }
        if let Some(v) = o.a {
            cfg.a = v;
        }
        if let Some(v) = o.alpha {
            cfg.alpha = v;
        }
        if o.lattice_n.is_some() {
            cfg.lattice_n = o.lattice_n;
        }
        if let Some(v) = o.n_cap {
            cfg.n_cap = v;
        }
        cfg.unit_constants |= o.unit_constants;
        if let Some(v) = o.seed {
            cfg.seed = v;
        }
        if let Some(v) = &o.out {
            cfg.out = v.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn half_side(&self) -> f64 {
        self.rho.unwrap_or(if self.dim == 2 { FRAC_PI_2 } else { 1.0 })
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if self.dim < 2 || self.dim > 8 {
            return Err(format!("dim must lie in 2..=8, got {}", self.dim));
        }
        if !positive(self.half_side()) {
            return Err("rho must be positive".into());
        }
        if !positive(self.a) {
            return Err("a must be positive".into());
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err("alpha must lie in (0, 1)".into());
        }
        if self.samples_per_axis < 8 {
            return Err("samples_per_axis must be at least 8".into());
        }
        if self.n_cap < 1 || self.lattice_n == Some(0) {
            return Err("lattice radius and n_cap must be at least 1".into());
        }
        if self.chaos.n_points < 1 || self.chaos.streams < 1 {
            return Err("chaos n_points and streams must be at least 1".into());
        }
        if let Some(p) = self.perturb_c4 {
            if !positive(p) {
                return Err("perturb_c4 must be positive".into());
            }
        }
        self.orbit_params().validate().map_err(|e| e.to_string())?;
        self.grid_spec().map_err(|e| e.to_string())?;
        Ok(())
    }

    pub fn orbit_params(&self) -> OrbitParams {
        let mut p = OrbitParams::defaults(self.a, self.half_side());
        let o = &self.orbit;
        p.n_max = o.n_max.unwrap_or(p.n_max);
        p.escape_threshold = o.escape_threshold.unwrap_or(p.escape_threshold);
        p.window_len = o.window_len.unwrap_or(p.window_len);
        p.attract_tol = o.attract_tol.unwrap_or(p.attract_tol);
        p.radius_cap = o.radius_cap.unwrap_or(p.radius_cap);
        p
    }

    pub fn grid_spec(&self) -> zorich_core::Result<GridSpec> {
        let d = self.dim;
        let rho = self.half_side();
        let corner = |h: f64, v: f64| (0..d).map(|j| if j + 1 == d { v } else { h }).collect::<Vec<_>>();
        let lo = self.grid.lo.clone().unwrap_or_else(|| corner(-rho, -5.0));
        let hi = self.grid.hi.clone().unwrap_or_else(|| corner(rho, 5.0));
        let res = self
            .grid
            .resolution
            .clone()
            .unwrap_or_else(|| vec![if d == 2 { 101 } else { 41 }; d]);
        GridSpec::new(lo, hi, res)
    }

    pub fn chaos_params(&self) -> ChaosParams {
        ChaosParams {
            n_points: self.chaos.n_points,
            burn_in: self.chaos.burn_in,
            seed: self.seed,
            streams: self.chaos.streams,
        }
    }

    /// SHA-256 of the canonical JSON form with the output directory removed.
    pub fn hash(&self) -> String {
        let mut value = serde_json::to_value(self).expect("config serializes");
        if let Some(map) = value.as_object_mut() {
            map.remove("out");
        }
        let digest = Sha256::digest(value.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.half_side(), FRAC_PI_2);
        let cfg = RunConfig { dim: 3, ..cfg };
        assert_eq!(cfg.half_side(), 1.0);
        assert_eq!(cfg.grid_spec().unwrap().resolution, vec![41; 3]);
    }

    #[test]
    fn hash_ignores_output_directory() {
        let a = RunConfig::default();
        let b = RunConfig {
            out: PathBuf::from("/elsewhere"),
            ..a.clone()
        };
        assert_eq!(a.hash(), b.hash());
        let c = RunConfig { seed: 1, ..a.clone() };
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 64);
    }

    #[test]
    fn partial_json_and_unknown_fields() {
        let cfg: RunConfig = serde_json::from_str(r#"{"dim": 3, "a": 20, "chaos": {"n_points": 10}}"#).unwrap();
        assert_eq!((cfg.dim, cfg.a, cfg.chaos.n_points, cfg.chaos.streams), (3, 20.0, 10, 8));
        assert!(serde_json::from_str::<RunConfig>(r#"{"dimension": 3}"#).is_err());
    }

    #[test]
    fn overrides_win() {
        let o = Overrides {
            a: Some(7.0),
            unit_constants: true,
            ..Overrides::default()
        };
        let cfg = RunConfig::load(None, &o).unwrap();
        assert_eq!(cfg.a, 7.0);
        assert!(cfg.unit_constants);
        let bad = Overrides {
            alpha: Some(1.5),
            ..Overrides::default()
        };
        assert!(RunConfig::load(None, &bad).is_err());
    }
}
