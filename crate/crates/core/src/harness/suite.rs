use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::pulses::PulseFamily;
use crate::waveforms::{AllocationMode, EqualizeKnob};

use super::engine::{resolve_configs, run, ResultSet};
use super::scenario::{Experiment, Scenario, SeMode, FULL_PSD_FRAMES};

/// Parameter changes of one figure family relative to the base set.
struct Family {
    name: &'static str,
    ser: bool,
    apply: fn(&mut Scenario),
}

const FAMILIES: [Family; 16] = [
    Family { name: "base", ser: true, apply: |_| {} },
    Family { name: "rrc", ser: true, apply: |s| s.pulse = PulseFamily::Rrc },
    Family {
        name: "phydyas",
        ser: true,
        apply: |s| {
            s.pulse = PulseFamily::Phydyas;
            s.slots = 8;
        },
    },
    Family { name: "iota", ser: false, apply: |s| s.pulse = PulseFamily::Iota },
    Family { name: "dirichlet", ser: true, apply: |s| s.pulse = PulseFamily::Dirichlet },
    Family { name: "m5_k128", ser: true, apply: |s| s.slots = 5 },
    Family {
        name: "m5_k64",
        ser: true,
        apply: |s| {
            s.slots = 5;
            s.subcarriers = 64;
            s.guards = 26;
        },
    },
    Family {
        name: "m9_k64",
        ser: true,
        apply: |s| {
            s.subcarriers = 64;
            s.guards = 26;
        },
    },
    Family { name: "window36", ser: true, apply: |s| s.window_len = 36 },
    Family { name: "interp_span41", ser: false, apply: |s| s.interp_span = 41 },
    Family { name: "cp64", ser: true, apply: |s| s.cp_len = 64 },
    Family { name: "interp_rate4", ser: false, apply: |s| s.interp_rate = 4 },
    Family { name: "interp_rate10", ser: false, apply: |s| s.interp_rate = 10 },
    Family { name: "rolloff04", ser: true, apply: |s| s.rolloff = 0.4 },
    Family { name: "qam16", ser: true, apply: |s| s.qam_order = 16 },
    Family {
        name: "non_contiguous",
        ser: false,
        apply: |s| s.allocation = AllocationMode::NonContiguous,
    },
];

const PSD_MODES: [SeMode; 3] = [
    SeMode::Unequal,
    SeMode::Equal(EqualizeKnob::CpLength),
    SeMode::Equal(EqualizeKnob::ActiveSubcarriers),
];

pub fn builtin_families() -> Vec<&'static str> {
    FAMILIES.iter().map(|f| f.name).collect()
}

/// Every figure family: PSD under each feasible spectral-efficiency mode, plus
/// an SER sweep where one exists. `full_scale` raises the PSD frame count and adds
/// the large-K profile.
pub fn builtin_manifest(full_scale: bool) -> Vec<Scenario> {
    let mut out = Vec::new();
    let mut push = |name: &str, ser: bool, apply: &dyn Fn(&mut Scenario)| {
        for mode in PSD_MODES {
            let mut s = Scenario::base(&format!("{name}_psd_{}", mode.name()), Experiment::Psd);
            s.family = name.to_string();
            s.se_mode = mode;
            if full_scale {
                s.n_mc = FULL_PSD_FRAMES;
            }
            apply(&mut s);
            // equal-SE variants whose knob cannot reach the target are left out
            if resolve_configs(&s).is_ok() {
                out.push(s);
            }
        }
        if ser {
            let mut s = Scenario::base(&format!("{name}_ser"), Experiment::Ser);
            s.family = name.to_string();
            apply(&mut s);
            out.push(s);
        }
    };
    for f in &FAMILIES {
        push(f.name, f.ser, &f.apply);
    }
    if full_scale {
        push("k1152", false, &|s: &mut Scenario| {
            s.subcarriers = 1152;
            s.guards = 468;
        });
    }
    out
}

/// Reads a manifest: one scenario file path per line, relative to the
/// manifest's directory, `#` comments allowed.
pub fn load_manifest(path: &Path) -> Result<Vec<Scenario>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ManifestError(format!("{}: {e}", path.display())))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let mut out = Vec::new();
    for line in text.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let file = dir.join(line);
        let body = std::fs::read_to_string(&file)
            .map_err(|e| Error::ManifestError(format!("{}: {e}", file.display())))?;
        out.push(Scenario::parse(&body).map_err(|e| Error::ManifestError(format!("{}: {e}", file.display())))?);
    }
    check_unique(&out)?;
    Ok(out)
}

pub fn check_unique(scenarios: &[Scenario]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for s in scenarios {
        if !seen.insert(s.id.as_str()) {
            return Err(Error::ManifestError(format!("duplicate scenario id `{}`", s.id)));
        }
    }
    Ok(())
}

#[derive(Debug)]
pub struct SuiteOutcome {
    pub id: String,
    pub result: Result<ResultSet>,
}

/// Runs every scenario and writes `out/<id>/`. A failing scenario is
/// reported in its outcome and in `summary.txt`; the rest still run.
pub fn run_suite(scenarios: &[Scenario], out: Option<&Path>) -> Result<Vec<SuiteOutcome>> {
    check_unique(scenarios)?;
    let mut outcomes = Vec::with_capacity(scenarios.len());
    for s in scenarios {
        let mut result = run(s);
        if let (Some(dir), Ok(r)) = (out, &result) {
            if let Err(e) = r.write_to(&dir.join(&s.id)) {
                result = Err(Error::Scenario {
                    id: s.id.clone(),
                    message: e.to_string(),
                });
            }
        }
        outcomes.push(SuiteOutcome {
            id: s.id.clone(),
            result,
        });
    }
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        let mut summary = String::new();
        for o in &outcomes {
            match &o.result {
                Ok(_) => {
                    let _ = writeln!(summary, "{} ok", o.id);
                }
                Err(e) => {
                    let _ = writeln!(summary, "{} failed: {e}", o.id);
                }
            }
        }
        std::fs::write(dir.join("summary.txt"), summary)?;
    }
    Ok(outcomes)
}
