use std::fmt::Write as _;
use std::io::Write;

use super::ols::OlsFit;
use super::stepwise::StepwiseResult;

/// Significance stars at the 10/5/1% levels.
pub fn stars(p: f64) -> &'static str {
    if p < 0.01 {
        "***"
    } else if p < 0.05 {
        "**"
    } else if p < 0.1 {
        "*"
    } else {
        ""
    }
}

fn fmt_prob(p: f64) -> String {
    if p < 1e-4 {
        "<0.0001".to_string()
    } else {
        format!("{p:.4}")
    }
}

/// Four decimals, without a sign on values that round to zero.
fn fmt_coef(x: f64) -> String {
    let s = format!("{x:.4}");
    match s.strip_prefix('-') {
        Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
        _ => s,
    }
}

/// Side-by-side coefficient table: estimate with stars, standard error in
/// parentheses, then fit statistics.
pub fn coefficient_table(models: &[(&str, &OlsFit)]) -> String {
    let mut terms: Vec<&str> = Vec::new();
    for (_, fit) in models {
        for t in &fit.terms {
            if !terms.contains(&t.as_str()) {
                terms.push(t);
            }
        }
    }
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut header = vec![String::new()];
    header.extend(models.iter().map(|(name, _)| name.to_string()));
    rows.push(header);
    for term in &terms {
        let mut row = vec![term.to_string()];
        for (_, fit) in models {
            row.push(match fit.index(term) {
                Some(i) => format!(
                    "{}{} ({:.4})",
                    fmt_coef(fit.beta[i]),
                    stars(fit.p[i]),
                    fit.se[i]
                ),
                None => String::new(),
            });
        }
        rows.push(row);
    }
    let stat = |label: &str, f: &dyn Fn(&OlsFit) -> String| {
        let mut row = vec![label.to_string()];
        row.extend(models.iter().map(|(_, fit)| f(fit)));
        row
    };
    rows.push(stat("Observations", &|f| f.n.to_string()));
    rows.push(stat("R-squared", &|f| format!("{:.4}", f.r2)));
    rows.push(stat("Adjusted R-squared", &|f| format!("{:.4}", f.adj_r2)));
    rows.push(stat("Prob (F-statistic)", &|f| fmt_prob(f.f_p)));
    rows.push(stat("AIC", &|f| format!("{:.1}", f.aic)));

    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(c, (cell, w))| {
                if c == 0 {
                    format!("{cell:<w$}")
                } else {
                    format!("{cell:>w$}")
                }
            })
            .collect();
        let _ = writeln!(out, "{}", line.join("  ").trim_end());
        if i == 0 || i == terms.len() {
            let total: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
            let _ = writeln!(out, "{}", "-".repeat(total));
        }
    }
    out.push_str("Standard errors in parentheses. *, **, *** significant at 10%, 5%, 1%.\n");
    out
}

/// CSV `term,estimate,se,t,p` for one fit.
pub fn write_fit_csv<W: Write>(fit: &OlsFit, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["term", "estimate", "se", "t", "p"])?;
    for i in 0..fit.terms.len() {
        w.write_record([
            fit.terms[i].clone(),
            fit.beta[i].to_string(),
            fit.se[i].to_string(),
            fit.t[i].to_string(),
            fit.p[i].to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// CSV `step,action,name,aic` for a stepwise trace; step 0 is the start.
pub fn write_trace_csv<W: Write>(res: &StepwiseResult, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["step", "action", "name", "aic"])?;
    w.write_record(["0", "start", "", &res.start_aic.to_string()])?;
    for s in &res.trace {
        w.write_record([
            s.step.to_string(),
            s.action.to_string(),
            s.name.clone(),
            s.aic.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
