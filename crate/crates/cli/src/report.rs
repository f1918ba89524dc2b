//! The `reproduce-paper` report: the headline numbers as one text table.

use adiasearch_core::{schedule, PriorPartition};
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write;

/// Renders the three headline results at the given epsilon:
/// sqrt(N) scaling of the uniform search, the 80/20 prior speedup, and the
/// constant-time rescaling.
pub fn reproduce_paper(eps: f64) -> anyhow::Result<String> {
    let mut out = String::new();
    writeln!(out, "adiasearch: headline numbers at eps = {eps}")?;

    writeln!(out, "\n[1] uniform search time vs (pi/2eps) sqrt(N)")?;
    writeln!(out, "{:>8} {:>14} {:>14} {:>10}", "N", "T_exact", "(pi/2e)sqrtN", "dev")?;
    for &n in &[64.0f64, 256.0, 1024.0, 4096.0] {
        let exact = schedule::total_time(1.0 / n.sqrt(), eps, 1.0)?;
        let approx = FRAC_PI_2 / eps * n.sqrt();
        writeln!(
            out,
            "{:>8} {:>14.4} {:>14.4} {:>9.2}%",
            n,
            exact,
            approx,
            100.0 * (exact - approx).abs() / approx
        )?;
    }

    writeln!(out, "\n[2] prior knowledge: two halves of N = 1000 with p = 0.8 / 0.2")?;
    let part = PriorPartition::new([(500, 0.8), (500, 0.2)])?;
    let uniform = FRAC_PI_2 / eps * 1000f64.sqrt();
    let favored = schedule::theorem2_time(&part, 0, eps)?;
    let other = schedule::theorem2_time(&part, 1, eps)?;
    let mean = schedule::mean_time(&part, eps)?;
    writeln!(out, "  no-prior time                {uniform:>12.4}")?;
    writeln!(
        out,
        "  marked in favored half       {favored:>12.4}   ratio {:.4}",
        favored / uniform
    )?;
    writeln!(
        out,
        "  marked in other half         {other:>12.4}   ratio {:.4}",
        other / uniform
    )?;
    writeln!(
        out,
        "  mean over the prior          {mean:>12.4}   ratio {:.4}",
        mean / uniform
    )?;
    writeln!(
        out,
        "  (the ~20% speedup is the favored-half conditional ratio sqrt(0.5/0.8); \
         the prior-averaged ratio is {:.4})",
        mean / uniform
    )?;
    let single = PriorPartition::single(1000)?;
    writeln!(
        out,
        "  single-subset prior          {:>12.4}   (no-prior case recovered)",
        schedule::theorem2_time(&single, 0, eps)?
    )?;

    writeln!(out, "\n[3] scale factor c = sqrt(N): constant running time")?;
    writeln!(out, "{:>8} {:>12} {:>14} {:>14}", "N", "c", "T(c)", "T_exact(c)")?;
    for &n in &[64.0f64, 256.0, 1024.0] {
        let c = n.sqrt();
        let a = 1.0 / n.sqrt();
        writeln!(
            out,
            "{:>8} {:>12.2} {:>14.4} {:>14.4}",
            n,
            c,
            schedule::total_time_approx(a, eps, c)?,
            schedule::total_time(a, eps, c)?,
        )?;
    }
    writeln!(out, "  target pi/(2 eps) = {:.4}", FRAC_PI_2 / eps)?;
    Ok(out)
}
