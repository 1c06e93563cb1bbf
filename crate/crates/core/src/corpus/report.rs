use std::io::Write;

use super::evaluate::EvalReport;

fn real(x: f64) -> String {
    format!("{x:.6}")
}

fn prob(p: f64) -> String {
    format!("{p:.6e}")
}

/// One row per scored exercise.
pub fn write_exercises_csv<W: Write>(report: &EvalReport, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["id", "fac", "aa", "avg_difficulty", "avg_arity", "avg_quantifiers"])?;
    for s in &report.exercises {
        out.write_record([
            s.id.clone(),
            real(s.fac),
            real(s.aa),
            real(s.avg_difficulty),
            real(s.avg_arity),
            real(s.avg_quantifiers),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// One row per correlation, dependent-correlation comparison and F-test.
pub fn write_summary_csv<W: Write>(report: &EvalReport, w: W) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["group", "kind", "predictor", "target", "n", "statistic", "df1", "df2", "p"])?;
    for g in &report.groups {
        let n = g.n.to_string();
        for c in &g.correlations {
            out.write_record([
                g.name.as_str(),
                "pearson",
                c.predictor.name(),
                c.target.name(),
                &n,
                &real(c.result.r),
                &(g.n - 2).to_string(),
                "",
                &prob(c.result.p_two_tailed),
            ])?;
        }
        for c in &g.comparisons {
            out.write_record([
                g.name.as_str(),
                "williams",
                &format!("difficulty-vs-{}", c.alternative),
                c.target.name(),
                &n,
                &real(c.result.t),
                &c.result.df.to_string(),
                "",
                &prob(c.result.p_two_tailed),
            ])?;
        }
        for f in &g.f_tests {
            out.write_record([
                g.name.as_str(),
                "f_test",
                "avg_arity",
                f.target.name(),
                &n,
                &real(f.result.f_statistic),
                &f.result.df_numerator.to_string(),
                &f.result.df_denominator.to_string(),
                &prob(f.result.p),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}
