//! Per-platform invariants available to the simulator and the checker.

use grassroots_core::gc::{ConservationMonitor, Gc};
use grassroots_core::gf::{FederationMonitor, Gf};
use grassroots_core::gsn::{Gsn, SymmetryMonitor};
use grassroots_core::sim::Monitor;
use grassroots_core::Platform;

use crate::control::NosyGsn;

pub trait Tool: Platform + Sync {
    /// Names of the invariants this platform can be monitored for.
    fn invariants(&self) -> &'static [&'static str];

    fn monitor(&self, name: &str) -> Option<Box<dyn Monitor<Self>>>;
}

impl Tool for Gsn {
    fn invariants(&self) -> &'static [&'static str] {
        &["symmetry"]
    }

    fn monitor(&self, name: &str) -> Option<Box<dyn Monitor<Self>>> {
        (name == "symmetry").then(|| Box::new(SymmetryMonitor) as Box<dyn Monitor<Self>>)
    }
}

impl Tool for Gc {
    fn invariants(&self) -> &'static [&'static str] {
        &["conservation"]
    }

    fn monitor(&self, name: &str) -> Option<Box<dyn Monitor<Self>>> {
        (name == "conservation").then(|| Box::new(ConservationMonitor::default()) as Box<dyn Monitor<Self>>)
    }
}

impl Tool for Gf {
    fn invariants(&self) -> &'static [&'static str] {
        &["validity"]
    }

    fn monitor(&self, name: &str) -> Option<Box<dyn Monitor<Self>>> {
        (name == "validity").then(|| Box::new(FederationMonitor::default()) as Box<dyn Monitor<Self>>)
    }
}

impl Tool for NosyGsn {
    fn invariants(&self) -> &'static [&'static str] {
        &[]
    }

    fn monitor(&self, _name: &str) -> Option<Box<dyn Monitor<Self>>> {
        None
    }
}

/// Every invariant name any platform knows.
pub const ALL_INVARIANTS: &[&str] = &["symmetry", "conservation", "validity"];

/// Resolves a comma-separated selection (`all`, `none`, or names) against
/// the platform. Naming an invariant the platform does not have is an
/// error.
pub fn select<P: Tool + ?Sized>(platform: &P, spec: &str) -> Result<Vec<&'static str>, String> {
    let spec = spec.trim();
    if spec == "all" {
        return Ok(platform.invariants().to_vec());
    }
    if spec == "none" || spec.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for name in spec.split(',').map(str::trim) {
        match platform.invariants().iter().find(|n| **n == name) {
            Some(n) if !out.contains(n) => out.push(*n),
            Some(_) => {}
            None if ALL_INVARIANTS.contains(&name) => {
                return Err(format!("invariant {name} does not apply to platform {}", platform.tag()))
            }
            None => return Err(format!("unknown invariant {name:?}")),
        }
    }
    Ok(out)
}

pub fn monitors<P: Tool + ?Sized>(platform: &P, names: &[&str]) -> Vec<Box<dyn Monitor<P>>> {
    names.iter().filter_map(|n| platform.monitor(n)).collect()
}
