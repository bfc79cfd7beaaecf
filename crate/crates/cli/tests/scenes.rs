//! The JSON specs under `scenes/` are the presets serialized. Set
//! `DEPTHSEG_BLESS=1` to rewrite them after changing a preset.

use std::path::PathBuf;

use depthseg::synth::{presets, SynthSpec};

const SEED: u64 = 7;

fn bundled() -> Vec<(&'static str, SynthSpec)> {
    vec![
        ("multi_person", SynthSpec::Scene(presets::multi_person(SEED))),
        ("same_depth_pair", SynthSpec::Scene(presets::same_depth_pair(SEED))),
        ("ramp_floor", SynthSpec::Scene(presets::ramp_floor(SEED))),
        ("cabin", SynthSpec::Scene(presets::cabin(SEED))),
        (
            "cabin_with_passenger",
            SynthSpec::Scene(presets::cabin_with_passenger(SEED)),
        ),
        ("empty_cabin", SynthSpec::Scene(presets::empty_cabin(SEED))),
        ("cabin_sequence", SynthSpec::Sequence(presets::reach_sequence(SEED))),
        (
            "static_sequence",
            SynthSpec::Sequence(presets::static_sequence(SEED, 90)),
        ),
    ]
}

fn scenes_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../scenes")
}

#[test]
fn bundled_specs_match_presets() {
    let bless = std::env::var_os("DEPTHSEG_BLESS").is_some();
    for (name, spec) in bundled() {
        let path = scenes_dir().join(format!("{name}.json"));
        let expected = serde_json::to_string_pretty(&spec).unwrap() + "\n";
        if bless {
            std::fs::create_dir_all(scenes_dir()).unwrap();
            std::fs::write(&path, &expected).unwrap();
        }
        let found = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(found, expected, "{name}.json is stale; rerun with DEPTHSEG_BLESS=1");
    }
}
