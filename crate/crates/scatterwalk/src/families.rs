//! Name-indexed registry of gadget builders.
//!
//! Every parametric family and hand-entered gadget sits behind the
//! [`GadgetFamily`] trait and is selected at runtime by name, e.g.
//! `path:2,3`, `cycle:4`, `quarter_half_switch`, `approx_switch:37`. The CLI
//! `build` and `catalog` commands are thin wrappers over this registry.

use crate::constructions::{
    approx_switch, basis_change, cycle_gadget, cycle_spec, path_gadget, phase_gadget,
    quarter_half_switch, switch_from_type2, PredictedRt,
};
use crate::error::{Error, Result};
use crate::graph::Gadget;

/// A builder output: the gadget, plus predicted reflection/transmission sets
/// when the family has a closed form for them.
pub struct FamilyBuild {
    pub gadget: Gadget,
    pub predicted: Option<PredictedRt>,
}

/// One registered gadget family or named gadget.
pub trait GadgetFamily: Sync {
    /// Registry key, e.g. `"path"`.
    fn name(&self) -> &'static str;

    /// Parameter syntax, e.g. `"path:<l1>,<l2>"`.
    fn usage(&self) -> &'static str;

    /// One-line description of what the gadget does.
    fn summary(&self) -> &'static str;

    /// Builds an instance; `params` are the integers after the colon.
    fn build(&self, params: &[u64]) -> Result<FamilyBuild>;
}

struct PathFamily;

impl GadgetFamily for PathFamily {
    fn name(&self) -> &'static str {
        "path"
    }
    fn usage(&self) -> &'static str {
        "path:<l1>,<l2>  (l1, l2 >= 2)"
    }
    fn summary(&self) -> &'static str {
        "two-terminal gadget from a path of length l1+l2-2 attached at its l1-th vertex; \
         reflects at -pi j/(l1+l2) with j*l1 not divisible by l1+l2, transmits at -pi j/l1 and -pi j/l2"
    }
    fn build(&self, params: &[u64]) -> Result<FamilyBuild> {
        let [l1, l2] = expect_params(self, params)?;
        let (gadget, predicted) = path_gadget(l1 as usize, l2 as usize)?;
        Ok(FamilyBuild {
            gadget,
            predicted: Some(predicted),
        })
    }
}

struct CycleFamily;

impl GadgetFamily for CycleFamily {
    fn name(&self) -> &'static str {
        "cycle"
    }
    fn usage(&self) -> &'static str {
        "cycle:<r>  (r >= 3)"
    }
    fn summary(&self) -> &'static str {
        "two-terminal gadget from an r-cycle attached at one vertex; reflects at -pi j/r for even j, \
         transmits for odd j"
    }
    fn build(&self, params: &[u64]) -> Result<FamilyBuild> {
        let [r] = expect_params(self, params)?;
        let (gadget, predicted) = cycle_gadget(r as usize)?;
        Ok(FamilyBuild {
            gadget,
            predicted: Some(predicted),
        })
    }
}

struct CycleSwitchFamily;

impl GadgetFamily for CycleSwitchFamily {
    fn name(&self) -> &'static str {
        "cycle_switch"
    }
    fn usage(&self) -> &'static str {
        "cycle_switch:<r>  (r >= 3)"
    }
    fn summary(&self) -> &'static str {
        "three-terminal momentum switch assembled from the r-cycle gadget and its reversal; \
         routes -pi j/r with odd j to terminal 2 and even j to terminal 3"
    }
    fn build(&self, params: &[u64]) -> Result<FamilyBuild> {
        let [r] = expect_params(self, params)?;
        let gadget = switch_from_type2(&cycle_spec(r as usize)?)?
            .with_name(format!("cycle_switch:{r}"));
        Ok(FamilyBuild {
            gadget,
            predicted: None,
        })
    }
}

struct QuarterHalfSwitch;

impl GadgetFamily for QuarterHalfSwitch {
    fn name(&self) -> &'static str {
        "quarter_half_switch"
    }
    fn usage(&self) -> &'static str {
        "quarter_half_switch"
    }
    fn summary(&self) -> &'static str {
        "13-vertex momentum switch routing -pi/2 to terminal 2 and -pi/4 to terminal 3"
    }
    fn build(&self, params: &[u64]) -> Result<FamilyBuild> {
        let [] = expect_params(self, params)?;
        Ok(FamilyBuild {
            gadget: quarter_half_switch(),
            predicted: None,
        })
    }
}

struct BasisChange;

impl GadgetFamily for BasisChange {
    fn name(&self) -> &'static str {
        "basis_change"
    }
    fn usage(&self) -> &'static str {
        "basis_change"
    }
    fn summary(&self) -> &'static str {
        "four-terminal gadget implementing a basis-changing gate at -pi/4 and -3pi/4"
    }
    fn build(&self, params: &[u64]) -> Result<FamilyBuild> {
        let [] = expect_params(self, params)?;
        Ok(FamilyBuild {
            gadget: basis_change(),
            predicted: None,
        })
    }
}

struct PhaseGadget;

impl GadgetFamily for PhaseGadget {
    fn name(&self) -> &'static str {
        "phase_gadget"
    }
    fn usage(&self) -> &'static str {
        "phase_gadget"
    }
    fn summary(&self) -> &'static str {
        "two-terminal gadget transmitting perfectly at -pi/4 and -3pi/4 with coefficients \
         -(2*sqrt2/3 + i/3) and +(2*sqrt2/3 + i/3)"
    }
    fn build(&self, params: &[u64]) -> Result<FamilyBuild> {
        let [] = expect_params(self, params)?;
        Ok(FamilyBuild {
            gadget: phase_gadget(),
            predicted: None,
        })
    }
}

struct ApproxSwitch;

impl GadgetFamily for ApproxSwitch {
    fn name(&self) -> &'static str {
        "approx_switch"
    }
    fn usage(&self) -> &'static str {
        "approx_switch:<m>  (odd m >= 1)"
    }
    fn summary(&self) -> &'static str {
        "four-terminal approximate switch between -pi/4 and -3pi/4 built from m phase gadgets \
         between two basis-change gadgets"
    }
    fn build(&self, params: &[u64]) -> Result<FamilyBuild> {
        let [m] = expect_params(self, params)?;
        Ok(FamilyBuild {
            gadget: approx_switch(m as usize)?,
            predicted: None,
        })
    }
}

fn expect_params<const N: usize>(
    family: &dyn GadgetFamily,
    params: &[u64],
) -> Result<[u64; N]> {
    params.try_into().map_err(|_| {
        Error::Precondition(format!(
            "{} takes {} parameter(s); usage: {}",
            family.name(),
            N,
            family.usage()
        ))
    })
}

/// All registered families, in catalog order.
pub fn registry() -> &'static [&'static dyn GadgetFamily] {
    static REGISTRY: &[&dyn GadgetFamily] = &[
        &PathFamily,
        &CycleFamily,
        &CycleSwitchFamily,
        &QuarterHalfSwitch,
        &BasisChange,
        &PhaseGadget,
        &ApproxSwitch,
    ];
    REGISTRY
}

/// Looks up a family by its registry key.
pub fn lookup(name: &str) -> Option<&'static dyn GadgetFamily> {
    registry().iter().copied().find(|f| f.name() == name)
}

/// Parses and builds a `name` or `name:p1,p2,...` instance specification.
pub fn build_spec(spec: &str) -> Result<FamilyBuild> {
    let (name, params) = match spec.split_once(':') {
        Some((name, rest)) => {
            let params: Vec<u64> = rest
                .split(',')
                .map(|p| {
                    p.trim().parse::<u64>().map_err(|_| {
                        Error::Precondition(format!("bad parameter {p:?} in {spec:?}"))
                    })
                })
                .collect::<Result<_>>()?;
            (name, params)
        }
        None => (spec, Vec::new()),
    };
    let family = lookup(name).ok_or_else(|| {
        Error::Precondition(format!(
            "unknown gadget {name:?}; known: {}",
            registry()
                .iter()
                .map(|f| f.name())
                .collect::<Vec<_>>()
                .join(", ")
        ))
    })?;
    family.build(&params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_builds_all_names() {
        for spec in [
            "path:2,3",
            "cycle:4",
            "cycle_switch:3",
            "quarter_half_switch",
            "basis_change",
            "phase_gadget",
            "approx_switch:3",
        ] {
            let built = build_spec(spec).unwrap_or_else(|e| panic!("{spec}: {e}"));
            assert!(built.gadget.vertex_count() > 0);
        }
    }

    #[test]
    fn bad_specs_are_rejected() {
        assert!(build_spec("unknown_thing").is_err());
        assert!(build_spec("path:2").is_err());
        assert!(build_spec("path:2,x").is_err());
        assert!(build_spec("approx_switch:2").is_err());
        assert!(build_spec("quarter_half_switch:1").is_err());
    }

    #[test]
    fn families_predict_when_they_can() {
        let p = build_spec("path:2,2").unwrap();
        assert!(p.predicted.is_some());
        let s = build_spec("quarter_half_switch").unwrap();
        assert!(s.predicted.is_none());
    }
}
