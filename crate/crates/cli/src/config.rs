//! Flat key-value configuration with layered overrides.
//!
//! Settings are resolved as built-in defaults, then the TOML file, then
//! `--set KEY=VALUE` overrides. Frequencies are given in Hz and converted
//! to rad/s; detunings and filter centers are multiples of `ω_m`.

use std::f64::consts::PI;
use std::path::Path;

use optoent::optomech::{
    Detuning, DualConfig, FilterSpec, LaserSpec, MembraneSpec, OptomechConfig, OutputOptions, ThermalKernel,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// How detunings in the configuration are interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetuningMode {
    /// Effective detuning, including the radiation-pressure shift.
    Effective,
    /// Bare cavity detuning; the shift is solved self-consistently.
    Bare,
}

/// Filter shape selected in the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterShapeKey {
    /// Rectangular window of duration `τ = ε/ω_m`.
    Step,
    /// Damped plane wave of bandwidth `γ = ω_m/ε`.
    Exponential,
}

/// Mechanical noise kernel selected in the configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKey {
    /// White thermal noise `γ_m(2n̄ + 1)`.
    Markov,
    /// `γ_m (ω/ω_m) coth(ħω/2k_BT)`.
    Exact,
}

/// Every configuration key with its resolved value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Mechanical frequency `ω_m/2π` in Hz.
    pub omega_m_hz: f64,
    /// Mechanical quality factor.
    #[serde(rename = "Q")]
    pub q: f64,
    /// Mirror mass in kg.
    pub mass_kg: f64,
    /// Cavity length in m.
    pub length_m: f64,
    /// Cavity finesse.
    pub finesse: f64,
    /// Laser wavelength in m (single-laser commands).
    pub wavelength_m: f64,
    /// Laser power in W (single-laser commands).
    pub power_w: f64,
    /// Interpretation of every detuning key.
    pub detuning_mode: DetuningMode,
    /// Detuning `Δ/ω_m` (single-laser commands).
    pub detuning_over_omega_m: f64,
    /// Bath temperature in K.
    pub temperature_k: f64,
    /// Mechanical noise kernel used for steady and output states.
    pub thermal_kernel: KernelKey,
    /// Power of laser A in W.
    pub laser_a_power_w: f64,
    /// Wavelength of laser A in m.
    pub laser_a_wavelength_m: f64,
    /// Detuning `Δ_A/ω_m`.
    pub laser_a_detuning_over_omega_m: f64,
    /// Power of laser B in W.
    pub laser_b_power_w: f64,
    /// Wavelength of laser B in m.
    pub laser_b_wavelength_m: f64,
    /// Detuning `Δ_B/ω_m`.
    pub laser_b_detuning_over_omega_m: f64,
    /// Shape of the output filters.
    pub filter_shape: FilterShapeKey,
    /// Center `Ω/ω_m` of the first filter.
    pub filter_omega_over_omega_m: f64,
    /// Center `Ω/ω_m` of the second filter.
    pub filter_b_omega_over_omega_m: f64,
    /// Inverse bandwidth `ε`.
    pub filter_epsilon: f64,
    /// Half-length of the membrane cavity in m.
    pub membrane_half_length_m: f64,
    /// Rest position of the membrane in m.
    pub membrane_q0_m: f64,
    /// Membrane intensity reflectivity.
    pub membrane_reflectivity: f64,
    /// Cavity mode index.
    pub membrane_mode: u32,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            omega_m_hz: 1e7,
            q: 1e5,
            mass_kg: 50e-12,
            length_m: 1e-3,
            finesse: 2e4,
            wavelength_m: 810e-9,
            power_w: 30e-3,
            detuning_mode: DetuningMode::Effective,
            detuning_over_omega_m: 1.0,
            temperature_k: 0.4,
            thermal_kernel: KernelKey::Markov,
            laser_a_power_w: 15e-3,
            laser_a_wavelength_m: 810e-9,
            laser_a_detuning_over_omega_m: 1.0,
            laser_b_power_w: 13e-3,
            laser_b_wavelength_m: 810e-9,
            laser_b_detuning_over_omega_m: -1.0,
            filter_shape: FilterShapeKey::Step,
            filter_omega_over_omega_m: -1.0,
            filter_b_omega_over_omega_m: 1.0,
            filter_epsilon: 10.0,
            membrane_half_length_m: 1e-2,
            membrane_q0_m: 1e-7,
            membrane_reflectivity: 0.8,
            membrane_mode: 1000,
        }
    }
}

/// Keys accepted as sweep axes: every real-valued key.
pub const NUMERIC_KEYS: &[&str] = &[
    "omega_m_hz",
    "Q",
    "mass_kg",
    "length_m",
    "finesse",
    "wavelength_m",
    "power_w",
    "detuning_over_omega_m",
    "temperature_k",
    "laser_a_power_w",
    "laser_a_wavelength_m",
    "laser_a_detuning_over_omega_m",
    "laser_b_power_w",
    "laser_b_wavelength_m",
    "laser_b_detuning_over_omega_m",
    "filter_omega_over_omega_m",
    "filter_b_omega_over_omega_m",
    "filter_epsilon",
    "membrane_half_length_m",
    "membrane_q0_m",
    "membrane_reflectivity",
];

fn to_table(s: &Settings) -> toml::Table {
    toml::Table::try_from(s).expect("settings serialize to a table")
}

fn from_table(t: toml::Table) -> Result<Settings> {
    Ok(toml::Value::Table(t).try_into()?)
}

/// Overlays `overlay` onto `base`, promoting integers to floats where the
/// base value is a float.
fn merge(base: &mut toml::Table, overlay: toml::Table) {
    for (k, v) in overlay {
        let v = match (base.get(&k), v) {
            (Some(toml::Value::Float(_)), toml::Value::Integer(i)) => toml::Value::Float(i as f64),
            (_, v) => v,
        };
        base.insert(k, v);
    }
}

/// Parses one `KEY=VALUE` override. Bare words are read as strings.
pub fn parse_override(text: &str) -> Result<(String, toml::Value)> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| CliError::ConfigParse(format!("override `{text}` is not KEY=VALUE")))?;
    let key = key.trim();
    let value = value.trim();
    let parsed = format!("v = {value}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(value.to_string()));
    Ok((key.to_string(), parsed))
}

impl Settings {
    /// Resolves defaults, an optional file and `KEY=VALUE` overrides.
    pub fn resolve(file: Option<&Path>, overrides: &[String]) -> Result<Self> {
        let text = match file {
            Some(p) => Some(std::fs::read_to_string(p)?),
            None => None,
        };
        Self::resolve_text(text.as_deref(), overrides)
    }

    /// [`Settings::resolve`] with the file contents given directly.
    pub fn resolve_text(file: Option<&str>, overrides: &[String]) -> Result<Self> {
        let mut table = to_table(&Settings::default());
        if let Some(text) = file {
            merge(&mut table, text.parse::<toml::Table>()?);
        }
        let mut over = toml::Table::new();
        for o in overrides {
            let (k, v) = parse_override(o)?;
            over.insert(k, v);
        }
        merge(&mut table, over);
        let s = from_table(table)?;
        s.validate()?;
        Ok(s)
    }

    /// Checks that every numeric value is finite.
    pub fn validate(&self) -> Result<()> {
        for key in NUMERIC_KEYS {
            let v = self.get(key)?;
            if !v.is_finite() {
                return Err(CliError::ConfigParse(format!("{key} = {v} is not finite")));
            }
        }
        Ok(())
    }

    /// Value of a real-valued key.
    pub fn get(&self, key: &str) -> Result<f64> {
        match to_table(self).get(key) {
            Some(toml::Value::Float(x)) => Ok(*x),
            _ => Err(CliError::ConfigParse(format!("`{key}` is not a numeric configuration key"))),
        }
    }

    /// Copy with one real-valued key replaced.
    pub fn with(&self, key: &str, value: f64) -> Result<Self> {
        if !NUMERIC_KEYS.contains(&key) {
            return Err(CliError::ConfigParse(format!("`{key}` is not a numeric configuration key")));
        }
        let mut t = to_table(self);
        t.insert(key.to_string(), toml::Value::Float(value));
        from_table(t)
    }

    /// `ω_m` in rad/s.
    pub fn omega_m(&self) -> f64 {
        2.0 * PI * self.omega_m_hz
    }

    fn detuning(&self, over_omega_m: f64) -> Detuning {
        let d = over_omega_m * self.omega_m();
        match self.detuning_mode {
            DetuningMode::Effective => Detuning::Effective(d),
            DetuningMode::Bare => Detuning::Bare(d),
        }
    }

    /// Single-laser configuration.
    pub fn optomech(&self) -> OptomechConfig {
        OptomechConfig {
            omega_m: self.omega_m(),
            q_factor: self.q,
            mass: self.mass_kg,
            length: self.length_m,
            finesse: self.finesse,
            wavelength: self.wavelength_m,
            power: self.power_w,
            detuning: self.detuning(self.detuning_over_omega_m),
            temperature: self.temperature_k,
        }
    }

    /// Two-laser configuration.
    pub fn dual(&self) -> DualConfig {
        DualConfig {
            omega_m: self.omega_m(),
            q_factor: self.q,
            mass: self.mass_kg,
            length: self.length_m,
            finesse: self.finesse,
            temperature: self.temperature_k,
            laser_a: LaserSpec {
                power: self.laser_a_power_w,
                wavelength: self.laser_a_wavelength_m,
                detuning: self.detuning(self.laser_a_detuning_over_omega_m),
            },
            laser_b: LaserSpec {
                power: self.laser_b_power_w,
                wavelength: self.laser_b_wavelength_m,
                detuning: self.detuning(self.laser_b_detuning_over_omega_m),
            },
        }
    }

    /// Filter centered at `over_omega_m · ω_m` with the configured shape and `ε`.
    pub fn filter_at(&self, over_omega_m: f64) -> Result<FilterSpec> {
        let wm = self.omega_m();
        let center = over_omega_m * wm;
        Ok(match self.filter_shape {
            FilterShapeKey::Step => FilterSpec::step_eps(center, self.filter_epsilon, wm)?,
            FilterShapeKey::Exponential => FilterSpec::exponential_eps(center, self.filter_epsilon, wm)?,
        })
    }

    /// First filter.
    pub fn filter_a(&self) -> Result<FilterSpec> {
        self.filter_at(self.filter_omega_over_omega_m)
    }

    /// Second filter.
    pub fn filter_b(&self) -> Result<FilterSpec> {
        self.filter_at(self.filter_b_omega_over_omega_m)
    }

    /// Mechanical noise kernel.
    pub fn kernel(&self) -> ThermalKernel {
        match self.thermal_kernel {
            KernelKey::Markov => ThermalKernel::Markov,
            KernelKey::Exact => ThermalKernel::Exact,
        }
    }

    /// Output options with the configured kernel.
    pub fn output_options(&self) -> OutputOptions {
        OutputOptions { kernel: self.kernel(), ..OutputOptions::default() }
    }

    /// Membrane-in-the-middle geometry.
    pub fn membrane(&self) -> MembraneSpec {
        MembraneSpec {
            half_length: self.membrane_half_length_m,
            q0: self.membrane_q0_m,
            reflectivity: self.membrane_reflectivity,
            mode: self.membrane_mode,
        }
    }

    /// Canonical JSON text of the settings.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("settings serialize")
    }

    /// Hex SHA-256 of [`Settings::canonical_json`].
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical_json().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}
