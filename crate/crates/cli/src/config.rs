//! Sectioned key=value configuration.
//!
//! INI-compatible subset: `[section]` headers, `key = value` lines and
//! `#` comments. Unknown sections or keys are rejected outright, units
//! are spelled in the key names, and every key has a documented default
//! so an empty (or absent) file describes the reference setup.

use fluxtrap_magnetics::{CoreState, Vec3};
use fluxtrap_trap::{ConcentratorDims, Particle, TrapConfig};

use std::fmt;
use std::path::Path;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// Coil and core geometry plus drive settings.
#[derive(Clone, Debug)]
pub struct CoilsSection {
    pub dims: ConcentratorDims,
    /// A, drive current for single-coil (ODMR) runs.
    pub current_a: f64,
    pub state: CoreState,
}

impl Default for CoilsSection {
    fn default() -> Self {
        Self {
            dims: ConcentratorDims::default(),
            current_a: 1.0,
            state: CoreState::Superconducting,
        }
    }
}

/// Trap assembly settings.
#[derive(Clone, Debug)]
pub struct TrapSection {
    pub separation_m: f64,
    pub i_top_a: f64,
    pub i_bottom_a: f64,
    pub gravity_m_s2: f64,
    pub particle_radius_m: f64,
    pub particle_density_kg_m3: f64,
}

impl Default for TrapSection {
    fn default() -> Self {
        Self {
            separation_m: 1.2e-3,
            i_top_a: 1.0,
            i_bottom_a: 1.0,
            gravity_m_s2: 9.81,
            particle_radius_m: 25e-6,
            particle_density_kg_m3: 8400.0,
        }
    }
}

/// NV magnetometry settings.
#[derive(Clone, Debug)]
pub struct NvSection {
    pub d_hz: f64,
    pub gamma_hz_per_t: f64,
    pub linewidth_hz: f64,
    pub contrast: f64,
    pub grid_min_hz: f64,
    pub grid_max_hz: f64,
    pub grid_points: usize,
    /// m, sampling height above the concentrator's inner-loop plane,
    /// on the axis.
    pub sample_height_m: f64,
    /// Fractional Gaussian noise added to simulated spectra.
    pub noise_fraction: f64,
}

impl Default for NvSection {
    fn default() -> Self {
        Self {
            d_hz: 2.877e9,
            gamma_hz_per_t: 2.8e10,
            linewidth_hz: 8e6,
            contrast: 0.1,
            grid_min_hz: 2.6e9,
            grid_max_hz: 3.15e9,
            grid_points: 2201,
            sample_height_m: 0.5e-3,
            noise_fraction: 0.0,
        }
    }
}

/// Time-series analysis settings.
#[derive(Clone, Debug)]
pub struct AnalysisSection {
    pub seed: u64,
    pub psd_segment_length: usize,
    pub psd_overlap: f64,
    pub background_percentile: f64,
    pub odmr_dips: usize,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            seed: 1,
            psd_segment_length: 4096,
            psd_overlap: 0.5,
            background_percentile: 50.0,
            odmr_dips: 2,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Config {
    pub coils: CoilsSection,
    pub trap: TrapSection,
    pub nv: NvSection,
    pub analysis: AnalysisSection,
}

impl Config {
    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim().to_string();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError(format!("line {}: unterminated section", lineno + 1)))?;
                section = name.trim().to_string();
                if !matches!(section.as_str(), "coils" | "trap" | "nv" | "analysis") {
                    return Err(ConfigError(format!(
                        "line {}: unknown section [{section}]",
                        lineno + 1
                    )));
                }
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ConfigError(format!("line {}: expected key = value", lineno + 1)))?;
            let key = key.trim();
            let value = value.trim();
            cfg.apply(&section, key, value)
                .map_err(|e| ConfigError(format!("line {}: {}", lineno + 1, e.0)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, section: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        let f = || parse_f64(key, value);
        let u = || parse_usize(key, value);
        match (section, key) {
            ("coils", "core_l1_m") => self.coils.dims.core_l1 = f()?,
            ("coils", "core_l2_m") => self.coils.dims.core_l2 = f()?,
            ("coils", "core_r1_m") => self.coils.dims.core_r1 = f()?,
            ("coils", "core_r2_m") => self.coils.dims.core_r2 = f()?,
            ("coils", "slit_width_m") => self.coils.dims.slit_width = f()?,
            ("coils", "coil_inner_radius_m") => self.coils.dims.coil_inner_radius = f()?,
            ("coils", "coil_outer_radius_m") => self.coils.dims.coil_outer_radius = f()?,
            ("coils", "coil_length_m") => self.coils.dims.coil_length = f()?,
            ("coils", "turns") => self.coils.dims.turns = u()?,
            ("coils", "n_sheet") => self.coils.dims.n_sheet = u()?,
            ("coils", "current_a") => self.coils.current_a = f()?,
            ("coils", "state") => {
                self.coils.state = match value {
                    "superconducting" => CoreState::Superconducting,
                    "normal" => CoreState::Normal,
                    other => {
                        return Err(ConfigError(format!(
                            "state must be 'superconducting' or 'normal', got '{other}'"
                        )))
                    }
                }
            }
            ("trap", "separation_m") => self.trap.separation_m = f()?,
            ("trap", "i_top_a") => self.trap.i_top_a = f()?,
            ("trap", "i_bottom_a") => self.trap.i_bottom_a = f()?,
            ("trap", "gravity_m_s2") => self.trap.gravity_m_s2 = f()?,
            ("trap", "particle_radius_m") => self.trap.particle_radius_m = f()?,
            ("trap", "particle_density_kg_m3") => self.trap.particle_density_kg_m3 = f()?,
            ("nv", "d_hz") => self.nv.d_hz = f()?,
            ("nv", "gamma_hz_per_t") => self.nv.gamma_hz_per_t = f()?,
            ("nv", "linewidth_hz") => self.nv.linewidth_hz = f()?,
            ("nv", "contrast") => self.nv.contrast = f()?,
            ("nv", "grid_min_hz") => self.nv.grid_min_hz = f()?,
            ("nv", "grid_max_hz") => self.nv.grid_max_hz = f()?,
            ("nv", "grid_points") => self.nv.grid_points = u()?,
            ("nv", "sample_height_m") => self.nv.sample_height_m = f()?,
            ("nv", "noise_fraction") => self.nv.noise_fraction = f()?,
            ("analysis", "seed") => {
                self.analysis.seed = value
                    .parse()
                    .map_err(|e| ConfigError(format!("bad value for seed: {e}")))?
            }
            ("analysis", "psd_segment_length") => self.analysis.psd_segment_length = u()?,
            ("analysis", "psd_overlap") => self.analysis.psd_overlap = f()?,
            ("analysis", "background_percentile") => self.analysis.background_percentile = f()?,
            ("analysis", "odmr_dips") => self.analysis.odmr_dips = u()?,
            ("", key) => {
                return Err(ConfigError(format!(
                    "key '{key}' appears before any [section] header"
                )))
            }
            (section, key) => {
                return Err(ConfigError(format!(
                    "unknown key '{key}' in section [{section}]"
                )))
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let d = &self.coils.dims;
        if !(d.core_l1 > d.core_l2 && d.core_l2 > 0.0) {
            return Err(ConfigError("core lengths must satisfy l1 > l2 > 0".into()));
        }
        if !(d.core_r1 > d.core_r2 && d.core_r2 > 0.0) {
            return Err(ConfigError("core radii must satisfy r1 > r2 > 0".into()));
        }
        if self.trap.separation_m <= 0.0 {
            return Err(ConfigError("trap separation must be positive".into()));
        }
        if self.nv.grid_points < 2 || self.nv.grid_max_hz <= self.nv.grid_min_hz {
            return Err(ConfigError("nv grid must ascend with at least 2 points".into()));
        }
        Ok(())
    }

    /// Build the anti-Helmholtz trap described by the `[trap]` section.
    pub fn trap_config(&self) -> Result<TrapConfig, ConfigError> {
        TrapConfig::anti_helmholtz(
            &self.coils.dims,
            self.trap.separation_m,
            self.trap.i_top_a,
            self.trap.i_bottom_a,
            Particle::new(self.trap.particle_radius_m, self.trap.particle_density_kg_m3),
            self.trap.gravity_m_s2,
        )
        .map_err(|e| ConfigError(e.to_string()))
    }

    /// Build the single concentrator described by `[coils]`, centred at
    /// the origin with its axis and slit along +z and +x.
    pub fn single_concentrator(
        &self,
    ) -> Result<fluxtrap_magnetics::FluxConcentratorCoil, ConfigError> {
        self.coils
            .dims
            .place(
                Vec3::ZERO,
                Vec3::Z,
                Vec3::X,
                self.coils.current_a,
                self.coils.state,
            )
            .map_err(|e| ConfigError(e.to_string()))
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_f64(key: &str, value: &str) -> Result<f64, ConfigError> {
    value
        .parse()
        .map_err(|e| ConfigError(format!("bad value for {key}: {e}")))
}

fn parse_usize(key: &str, value: &str) -> Result<usize, ConfigError> {
    value
        .parse()
        .map_err(|e| ConfigError(format!("bad value for {key}: {e}")))
}

/// Parse a field magnitude with a unit suffix: `173.5mT`, `0.1735T`.
pub fn parse_field_with_unit(text: &str) -> Result<f64, ConfigError> {
    let trimmed = text.trim();
    if let Some(v) = trimmed.strip_suffix("mT") {
        return Ok(v.trim().parse::<f64>().map_err(|e| {
            ConfigError(format!("bad field value '{text}': {e}"))
        })? * 1e-3);
    }
    if let Some(v) = trimmed.strip_suffix('T') {
        return v
            .trim()
            .parse::<f64>()
            .map_err(|e| ConfigError(format!("bad field value '{text}': {e}")));
    }
    Err(ConfigError(format!(
        "field value '{text}' needs a T or mT suffix"
    )))
}

/// Parse a `min:max:count` sweep or grid range.
pub fn parse_range(text: &str) -> Result<Vec<f64>, ConfigError> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(ConfigError(format!(
            "range '{text}' must be min:max:count"
        )));
    }
    let min: f64 = parts[0]
        .parse()
        .map_err(|e| ConfigError(format!("bad range start: {e}")))?;
    let max: f64 = parts[1]
        .parse()
        .map_err(|e| ConfigError(format!("bad range end: {e}")))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|e| ConfigError(format!("bad range count: {e}")))?;
    if count < 1 || (count > 1 && max <= min) {
        return Err(ConfigError(format!("range '{text}' must ascend")));
    }
    Ok((0..count)
        .map(|i| {
            if count == 1 {
                min
            } else {
                min + (max - min) * i as f64 / (count - 1) as f64
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_parse_from_empty_text() {
        let cfg = Config::parse("").unwrap();
        assert_eq!(cfg.coils.dims.turns, 180);
        assert!((cfg.trap.separation_m - 1.2e-3).abs() < 1e-15);
    }

    #[test]
    fn unknown_keys_and_sections_are_rejected() {
        assert!(Config::parse("[coils]\nbogus_m = 1\n").is_err());
        assert!(Config::parse("[widgets]\n").is_err());
        assert!(Config::parse("orphan = 1\n").is_err());
    }

    #[test]
    fn values_override_defaults_with_comments() {
        let cfg = Config::parse(
            "# test\n[trap]\nseparation_m = 0.6e-3 # tighter\n[nv]\ncontrast = 0.05\n",
        )
        .unwrap();
        assert!((cfg.trap.separation_m - 0.6e-3).abs() < 1e-15);
        assert!((cfg.nv.contrast - 0.05).abs() < 1e-15);
    }

    #[test]
    fn field_units_parse() {
        assert!((parse_field_with_unit("173.5mT").unwrap() - 0.1735).abs() < 1e-12);
        assert!((parse_field_with_unit("0.35 T").unwrap() - 0.35).abs() < 1e-12);
        assert!(parse_field_with_unit("12").is_err());
    }

    #[test]
    fn ranges_expand_inclusively() {
        let r = parse_range("0.2:1.7:4").unwrap();
        assert_eq!(r.len(), 4);
        assert!((r[0] - 0.2).abs() < 1e-12);
        assert!((r[3] - 1.7).abs() < 1e-12);
        assert!(parse_range("1:0:5").is_err());
    }
}
