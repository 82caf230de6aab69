use crate::error::{Error, Result};

use super::ExperimentConfig;

pub const PRESET_NAMES: [&str; 5] = ["square", "disk", "lshape", "koch2", "koch3"];

pub fn preset_json(name: &str) -> Option<&'static str> {
    Some(match name {
        "square" => include_str!("../../presets/square.json"),
        "disk" => include_str!("../../presets/disk.json"),
        "lshape" => include_str!("../../presets/lshape.json"),
        "koch2" => include_str!("../../presets/koch2.json"),
        "koch3" => include_str!("../../presets/koch3.json"),
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let text = preset_json(name).ok_or_else(|| {
        Error::Config(format!("unknown preset \"{name}\" (known: {})", PRESET_NAMES.join(", ")))
    })?;
    ExperimentConfig::from_json(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for name in PRESET_NAMES {
            let c = preset(name).unwrap();
            assert!(c.k >= 50, "{name}");
            assert_eq!(c.parsed_checks().unwrap().len(), 9);
        }
        assert!(preset("hexagon").is_err());
    }
}
