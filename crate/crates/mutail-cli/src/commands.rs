//! Subcommand implementations. Each writes one CSV document into a buffer;
//! nothing here touches the clock or the environment, so identical inputs
//! produce identical bytes.

use crate::csvw::{num, CsvWriter};
use crate::manifest::CommandParams;
use crate::opts::{
    FitArgs, MbArgs, MsumArgs, PsumArgs, ResidueArgs, SieveArgs, VerifyArgs, WatsonArgs,
};
use mutail::analysis::{
    conjecture_report, fit_decay_exponent, log_grid, FitOptions, FitResult, ReportOptions,
    SamplePoint, SampleSeries, Verdict,
};
use mutail::mellin::{inverse_mellin, ContourSpec};
use mutail::moebius::MoebiusSieve;
use mutail::residues::{
    analytic_n_pole_residue, analytic_zero_residue, asymptotic_sum, asymptotic_terms,
    default_radius, pole_contribution, ZeroTable, DEFAULT_CIRCLE_NODES,
};
use mutail::series::{
    moebius_kernel_tail_with, plain_tail, power_series_rhs, bose_laplace_integral, Estimate,
    KernelSpec, MertensModel, SeriesParams, TruncationPlan,
};
use mutail::{Complex, Error, Result};

/// Shared settings after flag/env/default resolution.
pub struct RunContext {
    pub zeros_source: String,
    pub zero_table: ZeroTable,
    pub capacity: u64,
    pub block_len: usize,
    pub model: MertensModel,
}

impl RunContext {
    fn sieve(&self) -> MoebiusSieve {
        MoebiusSieve::new(self.capacity)
    }

    fn moebius_tail(&self, s: Complex, x: f64, plan: &TruncationPlan) -> Result<Estimate> {
        let sieve = self.sieve();
        moebius_kernel_tail_with(&sieve, &KernelSpec::pure_power(s), x, plan, self.block_len)
    }
}

pub fn execute(params: &CommandParams, ctx: &RunContext, out: &mut Vec<u8>) -> Result<bool> {
    let mut csv = CsvWriter::new(out);
    csv.schema(params.name())?;
    match params {
        CommandParams::Sieve(a) => cmd_sieve(a, ctx, &mut csv),
        CommandParams::Msum(a) => cmd_msum(a, ctx, &mut csv),
        CommandParams::Psum(a) => cmd_psum(a, ctx, &mut csv),
        CommandParams::Mb(a) => cmd_mb(a, ctx, &mut csv),
        CommandParams::ResidueApprox(a) => cmd_residue(a, ctx, &mut csv),
        CommandParams::VerifyIdentities(a) => cmd_verify(a, ctx, &mut csv),
        CommandParams::Fit(a) => cmd_fit(a, ctx, &mut csv),
        CommandParams::Watson(a) => cmd_watson(a, ctx, &mut csv),
    }
}

fn cmd_sieve(args: &SieveArgs, ctx: &RunContext, csv: &mut CsvWriter) -> Result<bool> {
    let sieve = ctx.sieve();
    if let Some(list) = &args.mertens {
        let mut checkpoints: Vec<u64> = Vec::new();
        for part in list.split(',') {
            let n: u64 = part.trim().parse().map_err(|_| Error::Invalid {
                msg: format!("bad Mertens checkpoint '{part}'"),
            })?;
            checkpoints.push(n);
        }
        csv.header(&["n", "mertens"])?;
        for n in checkpoints {
            let m = sieve.mertens(n)?;
            csv.row(&[m.n.to_string(), m.value.to_string()])?;
        }
        return Ok(true);
    }
    let block = sieve.sieve_block(args.start, args.len)?;
    if let Some(path) = &args.cache {
        let file = std::fs::File::create(path)?;
        block.write_to(std::io::BufWriter::new(file))?;
    }
    csv.header(&["n", "mu"])?;
    for (n, mu) in block.iter() {
        csv.row(&[n.to_string(), mu.to_string()])?;
    }
    Ok(true)
}

fn estimate_columns() -> [&'static str; 9] {
    [
        "s_re", "s_im", "x", "value_re", "value_im", "abs_value", "error", "error_model",
        "cutoff_n",
    ]
}

fn estimate_row(s: Complex, x: f64, est: &Estimate, cutoff: u64) -> Vec<String> {
    vec![
        num(s.re),
        num(s.im),
        num(x),
        num(est.value.re),
        num(est.value.im),
        num(est.value.norm()),
        num(est.error),
        est.model.to_string(),
        cutoff.to_string(),
    ]
}

fn cmd_msum(args: &MsumArgs, ctx: &RunContext, csv: &mut CsvWriter) -> Result<bool> {
    let s = args.s.value();
    let x = args.x;
    let plan = match args.cutoff {
        Some(n) => {
            let bound = ctx.model.tail_bound(s.re, x, n);
            TruncationPlan::with_cutoff(n, ctx.model, bound * (1.0 + 1e-12), s.re, x)?
        }
        None => TruncationPlan::for_tolerance(s.re, x, args.tol, ctx.model, ctx.capacity)?,
    };
    let est = ctx.moebius_tail(s, x, &plan)?;
    csv.meta(&format!(
        "mertens model: |M(t)| <= {} t^{} (heuristic)",
        ctx.model.coefficient, ctx.model.exponent
    ))?;
    csv.header(&estimate_columns())?;
    csv.row(&estimate_row(s, x, &est, plan.cutoff))?;
    Ok(true)
}

fn cmd_psum(args: &PsumArgs, ctx: &RunContext, csv: &mut CsvWriter) -> Result<bool> {
    let s = args.s.value();
    let x = args.x;
    let bound = ctx.model.tail_bound(s.re, x, args.cutoff.max(64));
    let plan = TruncationPlan {
        cutoff: args.cutoff,
        mertens_coefficient: ctx.model.coefficient,
        mertens_exponent: ctx.model.exponent,
        target_tolerance: bound * (1.0 + 1e-12),
    };
    let params = SeriesParams { s, x, plan };
    let est = plain_tail(&params)?;
    csv.header(&estimate_columns())?;
    csv.row(&estimate_row(s, x, &est, args.cutoff))?;
    Ok(true)
}

fn cmd_mb(args: &MbArgs, _ctx: &RunContext, csv: &mut CsvWriter) -> Result<bool> {
    let s = args.s.value();
    let mut contour = ContourSpec::for_params(s, args.tol)?;
    if let Some(c) = args.c {
        contour.abscissa = c;
    }
    let est = inverse_mellin(s, args.x, &contour, args.tol)?;
    csv.header(&[
        "s_re",
        "s_im",
        "x",
        "abscissa",
        "half_height",
        "panels",
        "value_re",
        "value_im",
        "abs_value",
        "error",
        "error_model",
    ])?;
    csv.row(&[
        num(s.re),
        num(s.im),
        num(args.x),
        num(contour.abscissa),
        num(contour.half_height),
        contour.panels.to_string(),
        num(est.value.re),
        num(est.value.im),
        num(est.value.norm()),
        num(est.error),
        est.model.to_string(),
    ])?;
    Ok(true)
}

fn cmd_residue(args: &ResidueArgs, ctx: &RunContext, csv: &mut CsvWriter) -> Result<bool> {
    let s = args.s.value();
    let x = args.x;
    let terms = asymptotic_terms(s, x, args.nmax, args.zero_pairs, &ctx.zero_table)?;
    let total = asymptotic_sum(s, x, args.nmax, args.zero_pairs, &ctx.zero_table)?;
    csv.meta(&format!("zero table: {}", ctx.zeros_source))?;
    csv.header(&[
        "kind",
        "pole_re",
        "pole_im",
        "exponent_re",
        "exponent_im",
        "coeff_re",
        "coeff_im",
        "log_coeff_re",
        "log_coeff_im",
        "log_degree",
        "value_re",
        "value_im",
        "error",
        "error_model",
    ])?;
    let n_terms = args.nmax as usize + 1;
    for (i, t) in terms.iter().enumerate() {
        let kind = if i < n_terms { "n_pole" } else { "zero_pole" };
        csv.row(&[
            kind.into(),
            num(t.pole.re),
            num(t.pole.im),
            num(t.exponent.re),
            num(t.exponent.im),
            num(t.coefficient.re),
            num(t.coefficient.im),
            num(t.log_coefficient.re),
            num(t.log_coefficient.im),
            t.log_degree.to_string(),
            num(t.value.re),
            num(t.value.im),
            String::new(),
            String::new(),
        ])?;
    }
    csv.row(&[
        "total".into(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        num(total.re),
        num(total.im),
        String::new(),
        String::new(),
    ])?;
    if let Some(tol) = args.compare_tol {
        let plan = TruncationPlan::for_tolerance(s.re, x, tol, ctx.model, ctx.capacity)?;
        let direct = ctx.moebius_tail(s, x, &plan)?;
        csv.row(&[
            "direct".into(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            num(direct.value.re),
            num(direct.value.im),
            num(direct.error),
            direct.model.to_string(),
        ])?;
        let dev = (total - direct.value).norm();
        csv.meta(&format!(
            "deviation: abs={} rel={}",
            num(dev),
            num(dev / direct.value.norm().max(1e-300))
        ))?;
    }
    Ok(true)
}

struct IdentityRow {
    name: &'static str,
    x: f64,
    lhs: Complex,
    rhs: Complex,
    tolerance: f64,
}

impl IdentityRow {
    fn deviation(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
    fn pass(&self) -> bool {
        self.deviation() <= self.tolerance
    }
}

fn cmd_verify(args: &VerifyArgs, ctx: &RunContext, csv: &mut CsvWriter) -> Result<bool> {
    let s = args.s.value();
    if s.re <= 1.0 {
        return Err(Error::NotAbsolutelyConvergent { sigma: s.re });
    }
    let mut rows: Vec<IdentityRow> = Vec::new();

    // power series vs direct sum on 0 <= x < 1
    for x in [0.25, 0.5] {
        let plan = TruncationPlan::for_tolerance(s.re, x, 1e-10, ctx.model, ctx.capacity)?;
        let mt = ctx.moebius_tail(s, x, &plan)?;
        let ps = power_series_rhs(s, x)?;
        rows.push(IdentityRow {
            name: "power-series",
            x,
            lhs: mt.value,
            rhs: ps,
            tolerance: 1e-8 + mt.error,
        });
    }

    // Mellin-Barnes vs the matching series route
    for x in [0.5, 2.0] {
        let contour = ContourSpec::for_params(s, 1e-10)?;
        let mb = inverse_mellin(s, x, &contour, 1e-10)?;
        let (reference, ref_err) = if x < 1.0 {
            (power_series_rhs(s, x)?, 1e-13)
        } else {
            let plan = TruncationPlan::for_tolerance(s.re, x, 1e-11, ctx.model, ctx.capacity)?;
            let mt = ctx.moebius_tail(s, x, &plan)?;
            (mt.value, mt.error)
        };
        rows.push(IdentityRow {
            name: "mellin-barnes",
            x,
            lhs: mb.value,
            rhs: reference,
            tolerance: 1e-6 * reference.norm() + mb.error + ref_err,
        });
    }

    // contour independence inside the admissible strip
    {
        let x = 2.0;
        let strip = s.re - 1.0;
        let mk = |f: f64| ContourSpec {
            abscissa: f * strip,
            half_height: 40.0,
            panels: 20,
        };
        let v1 = inverse_mellin(s, x, &mk(0.4), 1e-12)?;
        let v2 = inverse_mellin(s, x, &mk(0.8), 1e-12)?;
        rows.push(IdentityRow {
            name: "contour-independence",
            x,
            lhs: v1.value,
            rhs: v2.value,
            tolerance: 1e-10,
        });
    }

    // Laplace integral vs plain tail
    for x in [1.0, 10.0] {
        let plan = TruncationPlan::for_tolerance(s.re, x, 1e-3, ctx.model, ctx.capacity)?;
        let pt = plain_tail(&SeriesParams { s, x, plan })?;
        let bl = bose_laplace_integral(s, x)?;
        rows.push(IdentityRow {
            name: "laplace-integral",
            x,
            lhs: bl,
            rhs: pt.value,
            tolerance: 1e-9,
        });
    }

    // circle quadrature vs closed-form residues at simple poles
    for n in [0u32, 1, 3] {
        let z0 = s + n as f64;
        let radius = default_radius(z0, s, &ctx.zero_table);
        let quad = pole_contribution(s, 10.0, z0, radius, DEFAULT_CIRCLE_NODES)?;
        let formula = analytic_n_pole_residue(s, 10.0, n)?;
        rows.push(IdentityRow {
            name: "n-pole-residue",
            x: 10.0,
            lhs: quad,
            rhs: formula,
            tolerance: 1e-9,
        });
    }
    {
        let z0 = s - ctx.zero_table.zero(0);
        let radius = default_radius(z0, s, &ctx.zero_table);
        let quad = pole_contribution(s, 10.0, z0, radius, DEFAULT_CIRCLE_NODES)?;
        let formula = analytic_zero_residue(s, 10.0, ctx.zero_table.ordinates()[0])?;
        rows.push(IdentityRow {
            name: "zero-pole-residue",
            x: 10.0,
            lhs: quad,
            rhs: formula,
            tolerance: 1e-9 * formula.norm().max(1e-18) + 1e-30,
        });
    }

    // residue expansion vs direct sum at moderate x
    {
        let x = 200.0;
        let asym = asymptotic_sum(s, x, 1, 10, &ctx.zero_table)?;
        let plan = TruncationPlan::for_tolerance(s.re, x, 1e-12, ctx.model, ctx.capacity)?;
        let direct = ctx.moebius_tail(s, x, &plan)?;
        rows.push(IdentityRow {
            name: "residue-vs-direct",
            x,
            lhs: asym,
            rhs: direct.value,
            tolerance: 0.05 * direct.value.norm() + direct.error,
        });
    }

    csv.header(&[
        "identity",
        "x",
        "lhs_re",
        "lhs_im",
        "rhs_re",
        "rhs_im",
        "abs_deviation",
        "tolerance",
        "pass",
    ])?;
    let mut all_pass = true;
    for r in &rows {
        all_pass &= r.pass();
        csv.row(&[
            r.name.into(),
            num(r.x),
            num(r.lhs.re),
            num(r.lhs.im),
            num(r.rhs.re),
            num(r.rhs.im),
            num(r.deviation()),
            num(r.tolerance),
            r.pass().to_string(),
        ])?;
    }
    csv.meta(&format!(
        "summary: {} of {} identities pass",
        rows.iter().filter(|r| r.pass()).count(),
        rows.len()
    ))?;
    Ok(all_pass)
}

fn synthetic_series(args: &FitArgs) -> Result<SampleSeries> {
    let slope = args.synthetic_slope.expect("synthetic mode");
    let grid = log_grid(args.xmin, args.xmax, args.points);
    let mut state = args.seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut unit = move || {
        // xorshift64*: deterministic, platform-independent
        state ^= state >> 12;
        state ^= state << 25;
        state ^= state >> 27;
        (state.wrapping_mul(0x2545f4914f6cdd1d) >> 11) as f64 / (1u64 << 53) as f64
    };
    let points = grid
        .iter()
        .map(|&x| {
            let envelope = x.powf(slope);
            let osc = (14.13 * x.ln()).cos().abs().max(1e-3);
            let noise = 1.0 + args.synthetic_noise * (2.0 * unit() - 1.0);
            SamplePoint {
                x,
                value: mutail::real(envelope * osc * noise),
                error: envelope * 1e-6,
            }
        })
        .collect();
    SampleSeries::new(points)
}

#[allow(clippy::too_many_arguments)]
fn write_fit_csv(
    csv: &mut CsvWriter,
    s: Complex,
    samples: &SampleSeries,
    fit: &FitResult,
    conjectured: f64,
    epsilon: f64,
    verdict: Verdict,
    threshold: f64,
) -> Result<()> {
    csv.meta("section: samples")?;
    csv.header(&[
        "x",
        "value_re",
        "value_im",
        "abs_value",
        "error",
        "error_model",
        "admitted",
    ])?;
    for p in samples.points() {
        csv.row(&[
            num(p.x),
            num(p.value.re),
            num(p.value.im),
            num(p.value.norm()),
            num(p.error),
            "mertens-heuristic".into(),
            p.admitted().to_string(),
        ])?;
    }
    csv.meta("section: verdict")?;
    csv.header(&[
        "sigma",
        "fitted_slope",
        "slope_halfwidth",
        "intercept",
        "residual_rms",
        "points_used",
        "conjectured_slope",
        "epsilon",
        "epsilon_slope",
        "sigma_m_estimate",
        "threshold",
        "verdict",
    ])?;
    csv.row(&[
        num(s.re),
        num(fit.slope),
        num(fit.slope_halfwidth),
        num(fit.intercept),
        num(fit.residual_rms),
        fit.points_used.to_string(),
        num(conjectured),
        num(epsilon),
        num(conjectured + epsilon),
        num(fit.sigma_m_estimate),
        num(threshold),
        verdict.to_string(),
    ])?;
    csv.meta(&format!(
        "summary: verdict={verdict} fitted_slope={} conjectured_slope={} sigma_m_estimate={}",
        num(fit.slope),
        num(conjectured),
        num(fit.sigma_m_estimate)
    ))?;
    Ok(())
}

fn cmd_fit(args: &FitArgs, ctx: &RunContext, csv: &mut CsvWriter) -> Result<bool> {
    let s = args.s.value();
    if let Some(planted) = args.synthetic_slope {
        // pipeline self-test on a synthetic power law
        let samples = synthetic_series(args)?;
        let fit = fit_decay_exponent(&samples, s.re, &FitOptions::default())?;
        let conjectured = 0.5 - s.re;
        let threshold = 0.15_f64.max(fit.slope_halfwidth);
        let verdict = if fit.slope_halfwidth > 0.5 {
            Verdict::Inconclusive
        } else if fit.slope <= conjectured + args.epsilon + threshold {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        };
        csv.meta(&format!(
            "synthetic: slope={} noise={} seed={}",
            num(planted),
            num(args.synthetic_noise),
            args.seed
        ))?;
        write_fit_csv(csv, s, &samples, &fit, conjectured, args.epsilon, verdict, threshold)?;
        return Ok(true);
    }

    let sieve = ctx.sieve();
    let grid = log_grid(args.xmin, args.xmax, args.points);
    let opts = ReportOptions {
        resolve_fraction: args.resolve_fraction,
        pilot_cutoff: args.pilot,
        model: ctx.model,
        block_len: ctx.block_len,
        ..ReportOptions::default()
    };
    let report = conjecture_report(&sieve, s, &grid, args.epsilon, &opts)?;
    csv.meta(&format!(
        "mertens model: |M(t)| <= {} t^{} (heuristic); capacity {}",
        ctx.model.coefficient, ctx.model.exponent, ctx.capacity
    ))?;
    write_fit_csv(
        csv,
        s,
        &report.samples,
        &report.fit,
        report.conjectured_slope,
        report.epsilon,
        report.verdict,
        report.threshold,
    )?;
    Ok(true)
}

fn cmd_watson(args: &WatsonArgs, ctx: &RunContext, csv: &mut CsvWriter) -> Result<bool> {
    let s = args.s.value();
    let grid = log_grid(args.xmin, args.xmax, args.points);
    csv.header(&[
        "x",
        "value_re",
        "value_im",
        "error",
        "leading_re",
        "leading_im",
        "ratio_re",
        "ratio_im",
        "abs_ratio_minus_one",
    ])?;
    for &x in &grid {
        let plan = TruncationPlan::for_tolerance(s.re, x, 1e-3, ctx.model, u64::MAX / 2)?;
        let est = plain_tail(&SeriesParams { s, x, plan })?;
        let leading = ((1.0 - s) * x.ln()).exp() / (s - 1.0);
        let ratio = est.value / leading;
        csv.row(&[
            num(x),
            num(est.value.re),
            num(est.value.im),
            num(est.error),
            num(leading.re),
            num(leading.im),
            num(ratio.re),
            num(ratio.im),
            num((ratio - 1.0).norm()),
        ])?;
    }
    Ok(true)
}
