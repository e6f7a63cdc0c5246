//! Command-line surface and environment-variable defaults.
//!
//! Resolution order for shared knobs: explicit flag, then MUTAIL_* variable,
//! then built-in default. Whatever wins is recorded in the run manifest.

use clap::{Args, Parser, Subcommand};
use mutail::Complex;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Parser)]
#[command(
    name = "mutail",
    version,
    about = "Moebius-weighted tail series laboratory",
    disable_help_subcommand = true
)]
pub struct Cli {
    #[command(flatten)]
    pub shared: SharedArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct SharedArgs {
    /// Worker threads for block-parallel subcommands
    /// [env MUTAIL_WORKERS; default: available parallelism]
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    /// Write CSV here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<String>,

    /// Write the run manifest here instead of stderr
    #[arg(long, global = true)]
    pub manifest: Option<String>,

    /// Zero-table file (one ascending ordinate per line, '#' comments)
    /// [env MUTAIL_ZEROS; default: bundled first-100 table]
    #[arg(long, global = true)]
    pub zeros: Option<String>,

    /// Largest n the sieve will serve [env MUTAIL_CAPACITY; default 2e9]
    #[arg(long, global = true)]
    pub capacity: Option<u64>,

    /// Sieve block length [env MUTAIL_BLOCK_LEN; default 2^20]
    #[arg(long, global = true)]
    pub block_len: Option<usize>,

    /// Mertens growth model coefficient A [env MUTAIL_MERTENS_A; default 0.6]
    #[arg(long, global = true)]
    pub mertens_a: Option<f64>,

    /// Mertens growth model exponent theta [env MUTAIL_MERTENS_THETA; default 0.6]
    #[arg(long, global = true)]
    pub mertens_theta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump Moebius blocks or Mertens checkpoints as CSV
    Sieve(SieveArgs),
    /// Moebius tail sum mu(n) (n+x)^(-s) with its error estimate
    Msum(MsumArgs),
    /// Plain tail sum (n+x)^(-s)
    Psum(PsumArgs),
    /// Mellin-Barnes contour evaluation of the Moebius tail
    Mb(MbArgs),
    /// Residue-expansion approximation over zeta zeros
    ResidueApprox(ResidueArgs),
    /// Cross-check every pair of independent routes at one s
    VerifyIdentities(VerifyArgs),
    /// Fit the decay exponent over an x-grid and report the verdict
    Fit(FitArgs),
    /// Ratio of the plain tail to its leading asymptotic term
    Watson(WatsonArgs),
    /// Re-run a recorded manifest (workers may differ; output may not)
    Rerun(RerunArgs),
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct SieveArgs {
    /// First n of the block
    #[arg(long, default_value_t = 1)]
    pub start: u64,
    /// Block length
    #[arg(long, default_value_t = 100)]
    pub len: usize,
    /// Comma-separated checkpoints: emit Mertens values instead of a block
    #[arg(long)]
    pub mertens: Option<String>,
    /// Also write the block to this binary cache file
    #[arg(long)]
    pub cache: Option<String>,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct MsumArgs {
    /// Exponent s (formats: "1.5", "3+1i", "2-0.5i")
    #[arg(long, value_parser = parse_complex_arg)]
    pub s: ComplexArg,
    #[arg(long)]
    pub x: f64,
    /// Target truncation tolerance (Mertens model)
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Explicit cutoff N (overrides the tolerance-solved plan)
    #[arg(long)]
    pub cutoff: Option<u64>,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct PsumArgs {
    #[arg(long, value_parser = parse_complex_arg)]
    pub s: ComplexArg,
    #[arg(long)]
    pub x: f64,
    /// Direct-sum cutoff before the Euler-Maclaurin correction
    #[arg(long, default_value_t = 1000)]
    pub cutoff: u64,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct MbArgs {
    #[arg(long, value_parser = parse_complex_arg)]
    pub s: ComplexArg,
    #[arg(long)]
    pub x: f64,
    /// Contour abscissa (default: centered in the admissible strip)
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct ResidueArgs {
    #[arg(long, value_parser = parse_complex_arg)]
    pub s: ComplexArg,
    #[arg(long)]
    pub x: f64,
    /// Largest n of the Gamma-pole family z = s + n
    #[arg(long, default_value_t = 1)]
    pub nmax: u32,
    #[arg(long, default_value_t = 50)]
    pub zero_pairs: usize,
    /// Also compute the direct Moebius tail at this tolerance for comparison
    #[arg(long)]
    pub compare_tol: Option<f64>,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct VerifyArgs {
    #[arg(long, value_parser = parse_complex_arg)]
    pub s: ComplexArg,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct FitArgs {
    #[arg(long, value_parser = parse_complex_arg)]
    pub s: ComplexArg,
    #[arg(long, default_value_t = 1e2)]
    pub xmin: f64,
    #[arg(long, default_value_t = 1e6)]
    pub xmax: f64,
    #[arg(long, default_value_t = 17)]
    pub points: usize,
    /// Epsilon margin added to the conjectured slope
    #[arg(long, default_value_t = 0.0)]
    pub epsilon: f64,
    /// Resolve the pilot magnitude down by this fraction
    #[arg(long, default_value_t = 1.0 / 30.0)]
    pub resolve_fraction: f64,
    /// Pilot-pass cutoff
    #[arg(long, default_value_t = 1_000_000)]
    pub pilot: u64,
    /// Seed for the synthetic test signal
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Replace the Moebius tail with a synthetic x^slope oscillation
    /// (pipeline self-test mode)
    #[arg(long, allow_negative_numbers = true)]
    pub synthetic_slope: Option<f64>,
    /// Relative noise amplitude of the synthetic signal
    #[arg(long, default_value_t = 0.01)]
    pub synthetic_noise: f64,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
pub struct WatsonArgs {
    #[arg(long, value_parser = parse_complex_arg)]
    pub s: ComplexArg,
    #[arg(long, default_value_t = 1e2)]
    pub xmin: f64,
    #[arg(long, default_value_t = 1e6)]
    pub xmax: f64,
    #[arg(long, default_value_t = 9)]
    pub points: usize,
}

#[derive(Debug, Args, Clone)]
pub struct RerunArgs {
    /// Path of a manifest produced by an earlier run
    #[arg(long)]
    pub path: String,
}

/// Complex flag value that round-trips through serde as a string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexArg(pub Complex);

impl ComplexArg {
    pub fn value(&self) -> Complex {
        self.0
    }
}

impl Serialize for ComplexArg {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&format_complex(self.0))
    }
}

impl<'de> Deserialize<'de> for ComplexArg {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let text = String::deserialize(de)?;
        parse_complex(&text).map(ComplexArg).map_err(serde::de::Error::custom)
    }
}

fn parse_complex_arg(text: &str) -> Result<ComplexArg, String> {
    parse_complex(text).map(ComplexArg)
}

/// Render s so that parse_complex reads back the identical f64 pair.
pub fn format_complex(z: Complex) -> String {
    if z.im == 0.0 {
        format!("{:e}", z.re)
    } else if z.im < 0.0 {
        format!("{:e}{:e}i", z.re, z.im)
    } else {
        format!("{:e}+{:e}i", z.re, z.im)
    }
}

/// Accepts "2.5", "3+1i", "2-0.5i", "1i", "-i", "3+i".
pub fn parse_complex(text: &str) -> Result<Complex, String> {
    let t = text.trim().replace(' ', "");
    if t.is_empty() {
        return Err("empty complex literal".into());
    }
    if let Some(body) = t.strip_suffix('i') {
        // split at the last +/- that is not part of an exponent or leading
        let chars: Vec<char> = body.chars().collect();
        let mut split = None;
        for i in (1..chars.len()).rev() {
            if (chars[i] == '+' || chars[i] == '-')
                && chars[i - 1] != 'e'
                && chars[i - 1] != 'E'
            {
                split = Some(i);
                break;
            }
        }
        let (re_str, im_str) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("0", body),
        };
        let im: f64 = match im_str {
            "" | "+" => 1.0,
            "-" => -1.0,
            other => other.parse().map_err(|e| format!("imaginary part: {e}"))?,
        };
        let re: f64 = if re_str.is_empty() {
            0.0
        } else {
            re_str.parse().map_err(|e| format!("real part: {e}"))?
        };
        Ok(Complex::new(re, im))
    } else {
        t.parse::<f64>()
            .map(|re| Complex::new(re, 0.0))
            .map_err(|e| format!("{e}"))
    }
}

/// Flag, then environment, then default.
pub fn resolve<T: FromStr + Copy>(flag: Option<T>, env_key: &str, default: T) -> T {
    flag.or_else(|| std::env::var(env_key).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(default)
}
