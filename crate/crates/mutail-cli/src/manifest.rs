//! Reproducible run manifests.
//!
//! A manifest records everything that determined a run's CSV output (plus
//! wall time and worker count, which are informational: output is worker-
//! independent by construction). Re-running from a manifest with the same
//! zero-table file reproduces the CSV bytes exactly.

use crate::opts::{
    FitArgs, MbArgs, MsumArgs, PsumArgs, ResidueArgs, SieveArgs, VerifyArgs, WatsonArgs,
};
use serde::{Deserialize, Serialize};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize, Deserialize, Clone)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum CommandParams {
    Sieve(SieveArgs),
    Msum(MsumArgs),
    Psum(PsumArgs),
    Mb(MbArgs),
    ResidueApprox(ResidueArgs),
    VerifyIdentities(VerifyArgs),
    Fit(FitArgs),
    Watson(WatsonArgs),
}

impl CommandParams {
    pub fn name(&self) -> &'static str {
        match self {
            CommandParams::Sieve(_) => "sieve",
            CommandParams::Msum(_) => "msum",
            CommandParams::Psum(_) => "psum",
            CommandParams::Mb(_) => "mb",
            CommandParams::ResidueApprox(_) => "residue-approx",
            CommandParams::VerifyIdentities(_) => "verify-identities",
            CommandParams::Fit(_) => "fit",
            CommandParams::Watson(_) => "watson",
        }
    }
}

/// Everything the run depended on, plus wall time.
#[derive(Debug, Serialize, Deserialize, Clone)]
pub struct RunManifest {
    pub artifact: String,
    pub version: String,
    #[serde(flatten)]
    pub params: CommandParams,
    /// "bundled" or a file path.
    pub zeros: String,
    pub capacity: u64,
    pub block_len: usize,
    pub mertens_a: f64,
    pub mertens_theta: f64,
    /// Informational: does not affect output.
    pub workers: usize,
    /// Informational: wall-clock milliseconds of the run.
    pub wall_ms: u128,
}

impl RunManifest {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opts::{ComplexArg, MsumArgs};
    use mutail::Complex;

    #[test]
    fn manifest_round_trips_through_json() {
        let m = RunManifest {
            artifact: "mutail".into(),
            version: ARTIFACT_VERSION.into(),
            params: CommandParams::Msum(MsumArgs {
                s: ComplexArg(Complex::new(1.5, -0.25)),
                x: 100.0,
                tol: 1e-8,
                cutoff: None,
            }),
            zeros: "bundled".into(),
            capacity: 2_000_000_000,
            block_len: 1 << 20,
            mertens_a: 0.6,
            mertens_theta: 0.6,
            workers: 4,
            wall_ms: 17,
        };
        let back = RunManifest::from_json(&m.to_json()).unwrap();
        assert_eq!(back.params.name(), "msum");
        match back.params {
            CommandParams::Msum(args) => {
                assert_eq!(args.s.value(), Complex::new(1.5, -0.25));
                assert_eq!(args.x, 100.0);
            }
            _ => panic!("wrong variant"),
        }
        assert_eq!(back.capacity, 2_000_000_000);
    }
}
