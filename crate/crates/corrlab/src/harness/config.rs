//! Scenario configuration: a flat key-value text format with one section per
//! scenario, global defaults above the first section, and `#` comments.
//!
//! Angle parameters are published as log10 of degrees; they are converted to
//! radians exactly once at load time (`x -> 10^x * pi / 180`).

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;

use crate::angular::{AzimuthWrappedGaussian, ClusterAngles, ZenithLaplacian};
use crate::error::{Error, Result};

/// Array topology of a scenario; `iid` skips correlation entirely.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Ura,
    Cylindrical,
    Iid,
}

impl Topology {
    pub fn as_str(&self) -> &'static str {
        match self {
            Topology::Ura => "ura",
            Topology::Cylindrical => "cylindrical",
            Topology::Iid => "iid",
        }
    }
}

/// Correlation engine used to build the transmit correlation matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    ClosedForm,
    Quadrature,
    MonteCarlo,
}

impl Engine {
    pub fn as_str(&self) -> &'static str {
        match self {
            Engine::ClosedForm => "closed_form",
            Engine::Quadrature => "quadrature",
            Engine::MonteCarlo => "monte_carlo",
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "closed_form" => Ok(Engine::ClosedForm),
            "quadrature" => Ok(Engine::Quadrature),
            "monte_carlo" => Ok(Engine::MonteCarlo),
            other => Err(format!(
                "unknown engine `{other}` (expected closed_form, quadrature or monte_carlo)"
            )),
        }
    }
}

/// One validated scenario: dimensions sweep, geometry knobs, cluster
/// parameters (already in radians) and run controls.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub name: String,
    pub topology: Topology,
    pub engine: Engine,
    /// `(M, K)` sweep points.
    pub sweep: Vec<(usize, usize)>,
    /// Vertical element spacing, wavelengths.
    pub d1: f64,
    /// Horizontal element spacing (rectangular array), wavelengths.
    pub d2: f64,
    /// Cylinder radius in wavelengths; `None` picks, per sweep point, the
    /// radius that makes the adjacent same-ring chord spacing 0.5
    /// wavelengths.
    pub radius: Option<f64>,
    /// Mean departure angles, radians (shared by azimuth and zenith).
    pub phi_mean: f64,
    pub theta_mean: f64,
    /// Offset spreads, radians.
    pub sigma_phi: f64,
    pub sigma_theta: f64,
    /// Published x-pol parameter sqrt(delta).
    pub delta_xpol: f64,
    pub rho_d_db: f64,
    pub n_trials: usize,
    pub seed: u64,
    /// Optional override of the zenith factor size; must divide every M.
    pub a_count: Option<usize>,
    /// Draw count for the Monte-Carlo correlation engine.
    pub mc_draws: usize,
    /// Wrap-sum truncation of the azimuth closed form.
    pub n_terms: usize,
    /// Carrier frequency, recorded for provenance; spacings are already in
    /// wavelengths so it affects nothing downstream.
    pub carrier_ghz: f64,
}

/// `x -> 10^x * pi / 180`.
pub fn log10_deg_to_rad(x: f64) -> f64 {
    10f64.powf(x) * PI / 180.0
}

impl ScenarioConfig {
    pub fn cluster(&self) -> Result<ClusterAngles> {
        ClusterAngles::new(
            self.phi_mean,
            self.theta_mean,
            AzimuthWrappedGaussian::new(self.sigma_phi)?,
            ZenithLaplacian::new(self.sigma_theta)?,
        )
    }

    /// Cross-polarization power coupling `delta` (the config stores the
    /// published `sqrt(delta)`).
    pub fn delta(&self) -> f64 {
        self.delta_xpol * self.delta_xpol
    }

    pub fn rho_d_linear(&self) -> f64 {
        10f64.powf(self.rho_d_db / 10.0)
    }

    /// `(A, B)` factorization of `m`: the override if present, otherwise the
    /// most-square split with the zenith axis getting the smaller factor.
    pub fn factorize(&self, m: usize) -> (usize, usize) {
        match self.a_count {
            Some(a) => (a, m / a),
            None => most_square_factorization(m),
        }
    }

    /// Default ring radius for `b` elements: adjacent same-ring chord
    /// spacing of 0.5 wavelengths.
    pub fn radius_for(&self, b_count: usize) -> f64 {
        match self.radius {
            Some(r) => r,
            None => {
                if b_count < 2 {
                    0.5
                } else {
                    0.25 / (PI / b_count as f64).sin()
                }
            }
        }
    }
}

/// Largest divisor of `m` not exceeding its square root, paired with the
/// complement.
pub fn most_square_factorization(m: usize) -> (usize, usize) {
    let mut a = (m as f64).sqrt() as usize;
    while a > 1 && m % a != 0 {
        a -= 1;
    }
    (a.max(1), m / a.max(1))
}

pub fn load_config(path: impl AsRef<Path>) -> Result<Vec<ScenarioConfig>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text)
}

type RawSection = HashMap<String, (String, usize)>;

const KNOWN_KEYS: &[&str] = &[
    "topology",
    "engine",
    "sweep",
    "d1",
    "d2",
    "radius",
    "aod_mean_log10_deg",
    "aod_sd_log10_deg",
    "delta_xpol",
    "rho_d_db",
    "trials",
    "seed",
    "a_count",
    "mc_draws",
    "n_terms",
    "carrier_ghz",
];

/// Parses a full experiment plan; every error carries the offending line or
/// field name.
pub fn parse_config_str(text: &str) -> Result<Vec<ScenarioConfig>> {
    let mut globals: RawSection = HashMap::new();
    let mut sections: Vec<(String, usize, RawSection)> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(pos) => &raw_line[..pos],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }

        if let Some(inner) = line.strip_prefix('[') {
            let name = inner.strip_suffix(']').ok_or_else(|| Error::ConfigParse {
                line: line_no,
                msg: "section header missing closing `]`".into(),
            })?;
            let name = name.trim();
            if name.is_empty()
                || !name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
            {
                return Err(Error::ConfigParse {
                    line: line_no,
                    msg: format!("scenario name `{name}` must be non-empty [A-Za-z0-9_-]"),
                });
            }
            sections.push((name.to_string(), line_no, HashMap::new()));
            continue;
        }

        let (key, value) = line.split_once('=').ok_or_else(|| Error::ConfigParse {
            line: line_no,
            msg: "expected `key = value` or `[section]`".into(),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            return Err(Error::ConfigParse { line: line_no, msg: "empty key".into() });
        }
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(Error::ConfigParse {
                line: line_no,
                msg: format!("unknown key `{key}`"),
            });
        }
        match sections.last_mut() {
            Some((_, _, map)) => map.insert(key, (value, line_no)),
            None => globals.insert(key, (value, line_no)),
        };
    }

    if sections.is_empty() {
        return Err(Error::ConfigValidation {
            field: "scenario".into(),
            msg: "config contains no [scenario] sections".into(),
        });
    }

    let mut out = Vec::with_capacity(sections.len());
    for (name, _line, map) in &sections {
        out.push(build_scenario(name, map, &globals)?);
    }
    Ok(out)
}

fn lookup<'a>(
    key: &str,
    section: &'a RawSection,
    globals: &'a RawSection,
) -> Option<&'a (String, usize)> {
    section.get(key).or_else(|| globals.get(key))
}

fn parse_field<T: std::str::FromStr>(
    key: &'static str,
    section: &RawSection,
    globals: &RawSection,
    default: T,
) -> Result<T> {
    match lookup(key, section, globals) {
        None => Ok(default),
        Some((raw, line)) => raw.parse::<T>().map_err(|_| Error::ConfigParse {
            line: *line,
            msg: format!("malformed value `{raw}` for field `{key}`"),
        }),
    }
}

fn parse_optional<T: std::str::FromStr>(
    key: &'static str,
    section: &RawSection,
    globals: &RawSection,
) -> Result<Option<T>> {
    match lookup(key, section, globals) {
        None => Ok(None),
        Some((raw, line)) => raw
            .parse::<T>()
            .map(Some)
            .map_err(|_| Error::ConfigParse {
                line: *line,
                msg: format!("malformed value `{raw}` for field `{key}`"),
            }),
    }
}

fn build_scenario(name: &str, section: &RawSection, globals: &RawSection) -> Result<ScenarioConfig> {
    let topology = match lookup("topology", section, globals) {
        None => Topology::Ura,
        Some((raw, line)) => match raw.as_str() {
            "ura" => Topology::Ura,
            "cylindrical" => Topology::Cylindrical,
            "iid" => Topology::Iid,
            other => {
                return Err(Error::ConfigParse {
                    line: *line,
                    msg: format!("unknown topology `{other}` (expected ura, cylindrical or iid)"),
                })
            }
        },
    };
    let engine = match lookup("engine", section, globals) {
        None => Engine::ClosedForm,
        Some((raw, line)) => raw.parse().map_err(|msg| Error::ConfigParse { line: *line, msg })?,
    };

    let sweep = match lookup("sweep", section, globals) {
        None => {
            return Err(Error::ConfigValidation {
                field: "sweep".into(),
                msg: format!("scenario `{name}` has no sweep points"),
            })
        }
        Some((raw, line)) => parse_sweep(raw, *line)?,
    };

    let d1: f64 = parse_field("d1", section, globals, 0.5)?;
    let d2: f64 = parse_field("d2", section, globals, 0.5)?;
    let radius: Option<f64> = parse_optional("radius", section, globals)?;
    let aod_mean: f64 = parse_field("aod_mean_log10_deg", section, globals, 0.7)?;
    let aod_sd: f64 = parse_field("aod_sd_log10_deg", section, globals, -0.3)?;
    let delta_xpol: f64 = parse_field("delta_xpol", section, globals, 0.1)?;
    let rho_d_db: f64 = parse_field("rho_d_db", section, globals, 10.0)?;
    let n_trials: usize = parse_field("trials", section, globals, 500)?;
    let seed: u64 = parse_field("seed", section, globals, 1)?;
    let a_count: Option<usize> = parse_optional("a_count", section, globals)?;
    let mc_draws: usize = parse_field("mc_draws", section, globals, 1_000_000)?;
    let n_terms: usize = parse_field("n_terms", section, globals, 5)?;
    let carrier_ghz: f64 = parse_field("carrier_ghz", section, globals, 2.6)?;

    let cfg = ScenarioConfig {
        name: name.to_string(),
        topology,
        engine,
        sweep,
        d1,
        d2,
        radius,
        phi_mean: log10_deg_to_rad(aod_mean),
        theta_mean: log10_deg_to_rad(aod_mean),
        sigma_phi: log10_deg_to_rad(aod_sd),
        sigma_theta: log10_deg_to_rad(aod_sd),
        delta_xpol,
        rho_d_db,
        n_trials,
        seed,
        a_count,
        mc_draws,
        n_terms,
        carrier_ghz,
    };
    validate_scenario(&cfg)?;
    Ok(cfg)
}

fn parse_sweep(raw: &str, line: usize) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for part in raw.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (m, k) = part.split_once(['x', 'X']).ok_or_else(|| Error::ConfigParse {
            line,
            msg: format!("sweep point `{part}` must look like `MxK`"),
        })?;
        let m: usize = m.trim().parse().map_err(|_| Error::ConfigParse {
            line,
            msg: format!("malformed antenna count in sweep point `{part}`"),
        })?;
        let k: usize = k.trim().parse().map_err(|_| Error::ConfigParse {
            line,
            msg: format!("malformed user count in sweep point `{part}`"),
        })?;
        out.push((m, k));
    }
    if out.is_empty() {
        return Err(Error::ConfigParse { line, msg: "sweep has no points".into() });
    }
    Ok(out)
}

fn validate_scenario(cfg: &ScenarioConfig) -> Result<()> {
    let fail = |field: &str, msg: String| -> Result<()> {
        Err(Error::ConfigValidation { field: field.into(), msg })
    };

    for &(m, k) in &cfg.sweep {
        if k < 1 || m < k {
            return fail("sweep", format!("sweep point {m}x{k} violates M >= K >= 1"));
        }
        if cfg.topology != Topology::Iid {
            if m % 2 != 0 {
                return fail(
                    "sweep",
                    format!("sweep point {m}x{k}: x-pol pairing needs an even antenna count"),
                );
            }
            if let Some(a) = cfg.a_count {
                if a == 0 || m % a != 0 {
                    return fail("a_count", format!("{a} does not divide M={m}"));
                }
            }
        }
    }
    if !(cfg.d1 > 0.0 && cfg.d1.is_finite()) {
        return fail("d1", format!("spacing must be positive, got {}", cfg.d1));
    }
    if !(cfg.d2 > 0.0 && cfg.d2.is_finite()) {
        return fail("d2", format!("spacing must be positive, got {}", cfg.d2));
    }
    if let Some(r) = cfg.radius {
        if !(r > 0.0 && r.is_finite()) {
            return fail("radius", format!("radius must be positive, got {r}"));
        }
    }
    if !(0.0..=1.0).contains(&cfg.delta_xpol) {
        return fail(
            "delta_xpol",
            format!("sqrt(delta) must lie in [0, 1], got {}", cfg.delta_xpol),
        );
    }
    if !cfg.rho_d_db.is_finite() {
        return fail("rho_d_db", "transmit SNR must be finite".into());
    }
    if cfg.n_trials == 0 {
        return fail("trials", "need at least one trial".into());
    }
    if cfg.engine == Engine::MonteCarlo && cfg.mc_draws < 10_000 {
        return fail("mc_draws", format!("need at least 10000 draws, got {}", cfg.mc_draws));
    }
    if !cfg.phi_mean.is_finite() || !cfg.sigma_phi.is_finite() || cfg.sigma_phi <= 0.0 {
        return fail("aod_sd_log10_deg", "angular spread must convert to a positive angle".into());
    }
    if cfg.theta_mean <= 0.0 || cfg.theta_mean >= PI {
        return fail(
            "aod_mean_log10_deg",
            format!("zenith mean must fall in (0, pi) rad, got {}", cfg.theta_mean),
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "
# comment line
seed = 7

[demo]
topology = ura
engine = closed_form
sweep = 100x10, 200x20
";

    #[test]
    fn parses_minimal_plan_with_defaults() {
        let cfgs = parse_config_str(MINIMAL).unwrap();
        assert_eq!(cfgs.len(), 1);
        let cfg = &cfgs[0];
        assert_eq!(cfg.name, "demo");
        assert_eq!(cfg.sweep, vec![(100, 10), (200, 20)]);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.d1, 0.5);
        assert_eq!(cfg.delta_xpol, 0.1);
        assert_eq!(cfg.n_trials, 500);
        assert_eq!(cfg.engine, Engine::ClosedForm);
    }

    #[test]
    fn published_angles_convert_to_radians() {
        let cfgs = parse_config_str(MINIMAL).unwrap();
        let cfg = &cfgs[0];
        // 10^0.7 degrees and 10^-0.3 degrees
        assert!((cfg.theta_mean - 0.08747367395757943).abs() < 1e-15);
        assert!((cfg.sigma_theta - 0.008747367395757943).abs() < 1e-15);
        assert!((cfg.theta_mean.to_degrees() - 5.011872336272722).abs() < 1e-12);
    }

    #[test]
    fn malformed_numeric_names_field_and_line() {
        let text = "[s]\ntopology = ura\nsweep = 8x2\nd1 = not_a_number\n";
        match parse_config_str(text) {
            Err(Error::ConfigParse { line, msg }) => {
                assert_eq!(line, 4);
                assert!(msg.contains("d1"), "message was: {msg}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_key_is_rejected() {
        let text = "[s]\nsweep = 8x2\nbogus = 1\n";
        assert!(matches!(
            parse_config_str(text),
            Err(Error::ConfigParse { line: 3, .. })
        ));
    }

    #[test]
    fn missing_sweep_is_a_validation_error() {
        let text = "[s]\ntopology = iid\n";
        match parse_config_str(text) {
            Err(Error::ConfigValidation { field, .. }) => assert_eq!(field, "sweep"),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn odd_antenna_count_rejected_for_correlated_topologies() {
        let text = "[s]\ntopology = ura\nsweep = 9x3\n";
        assert!(parse_config_str(text).is_err());
        let text = "[s]\ntopology = iid\nsweep = 9x3\n";
        assert!(parse_config_str(text).is_ok());
    }

    #[test]
    fn factorization_is_most_square() {
        assert_eq!(most_square_factorization(100), (10, 10));
        assert_eq!(most_square_factorization(200), (10, 20));
        assert_eq!(most_square_factorization(400), (20, 20));
        assert_eq!(most_square_factorization(64), (8, 8));
        assert_eq!(most_square_factorization(7), (1, 7));
    }

    #[test]
    fn a_count_override_must_divide() {
        let text = "[s]\ntopology = ura\nsweep = 100x10\na_count = 7\n";
        assert!(parse_config_str(text).is_err());
        let text = "[s]\ntopology = ura\nsweep = 100x10\na_count = 4\n";
        let cfg = &parse_config_str(text).unwrap()[0];
        assert_eq!(cfg.factorize(100), (4, 25));
    }

    #[test]
    fn default_radius_sets_chord_spacing() {
        let cfgs = parse_config_str(MINIMAL).unwrap();
        let r = cfgs[0].radius_for(10);
        // chord between adjacent anchors: 2 r sin(pi / B) = 0.5
        assert!((2.0 * r * (PI / 10.0).sin() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn section_header_must_close() {
        assert!(matches!(
            parse_config_str("[oops\n"),
            Err(Error::ConfigParse { line: 1, .. })
        ));
    }

    #[test]
    fn garbage_line_is_rejected() {
        assert!(matches!(
            parse_config_str("[s]\nsweep = 4x2\nthis is not a key value\n"),
            Err(Error::ConfigParse { line: 3, .. })
        ));
    }
}
