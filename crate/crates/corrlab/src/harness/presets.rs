//! Shipped experiment presets, embedded so the binary works from any
//! directory. The same files live under `configs/` for editing.

use crate::error::{Error, Result};
use crate::harness::config::{parse_config_str, ScenarioConfig};

pub const PRESET_NAMES: [&str; 4] = ["fig4", "fig5", "fig6", "fig7"];

/// Raw text of a named preset.
pub fn preset_text(name: &str) -> Result<&'static str> {
    match name {
        "fig4" => Ok(include_str!("../../../../configs/fig4.cfg")),
        "fig5" => Ok(include_str!("../../../../configs/fig5.cfg")),
        "fig6" => Ok(include_str!("../../../../configs/fig6.cfg")),
        "fig7" => Ok(include_str!("../../../../configs/fig7.cfg")),
        other => Err(Error::ConfigValidation {
            field: "preset".into(),
            msg: format!("unknown preset `{other}` (expected one of {PRESET_NAMES:?})"),
        }),
    }
}

/// Parsed scenarios of a named preset.
pub fn preset(name: &str) -> Result<Vec<ScenarioConfig>> {
    parse_config_str(preset_text(name)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_parse_and_validate() {
        for name in PRESET_NAMES {
            let scenarios = preset(name).unwrap();
            assert!(!scenarios.is_empty(), "{name} is empty");
            for s in &scenarios {
                assert!(s.name.starts_with(name), "{} not prefixed by {name}", s.name);
            }
        }
        assert!(preset("fig9").is_err());
    }
}
