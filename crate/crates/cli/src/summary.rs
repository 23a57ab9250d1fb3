//! Markdown report assembled from the artifacts in the output directory.

use std::fmt::Write as _;
use std::fs;

use anyhow::Result;
use serde_json::Value;

use crate::artifacts::*;

fn csv_rows(out: &OutDir, name: &str) -> Result<Option<(Vec<String>, Vec<Vec<String>>)>> {
    let path = out.path(name);
    if !path.is_file() {
        return Ok(None);
    }
    let mut rdr = csv::Reader::from_path(&path)?;
    let headers = rdr.headers()?.iter().map(String::from).collect();
    let rows = rdr
        .records()
        .map(|r| r.map(|r| r.iter().map(String::from).collect()))
        .collect::<Result<_, _>>()?;
    Ok(Some((headers, rows)))
}

fn json(out: &OutDir, name: &str) -> Result<Option<Value>> {
    let path = out.path(name);
    if path.is_file() {
        Ok(Some(read_json(&path)?))
    } else {
        Ok(None)
    }
}

fn table(md: &mut String, headers: &[&str], rows: &[Vec<String>]) {
    let _ = writeln!(md, "| {} |", headers.join(" | "));
    let _ = writeln!(md, "|{}", "---|".repeat(headers.len()));
    for r in rows {
        let _ = writeln!(md, "| {} |", r.join(" | "));
    }
    md.push('\n');
}

fn num(v: &Value) -> String {
    match v {
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.4}"),
            _ => n.to_string(),
        },
        Value::Null => "n/a".into(),
        other => other.to_string(),
    }
}

fn percent(s: &str) -> String {
    s.parse::<f64>()
        .map(|x| format!("{:.2}%", 100.0 * x))
        .unwrap_or_else(|_| s.to_string())
}

fn frequency_section(md: &mut String, out: &OutDir, name: &str, title: &str) -> Result<()> {
    if let Some((_, rows)) = csv_rows(out, name)? {
        let _ = writeln!(md, "## {title}\n");
        let rows: Vec<Vec<String>> = rows
            .into_iter()
            .map(|r| vec![r[0].clone(), r[1].clone(), percent(&r[2])])
            .collect();
        table(md, &["Item", "Count", "Share"], &rows);
    }
    Ok(())
}

fn accuracy(v: &Value) -> String {
    num(&v["accuracy"])
}

pub fn render(out: &OutDir) -> Result<String> {
    let mut md = String::from("# Regional sentiment report\n\n");

    if let Some(v) = json(out, INGEST_SUMMARY)? {
        md.push_str("## Corpus\n\n");
        let rows = [
            ("Posts loaded", &v["loaded"]),
            (
                "Records skipped",
                &Value::from(
                    v["skipped"]
                        .as_object()
                        .map(|o| o.values().filter_map(Value::as_u64).sum::<u64>())
                        .unwrap_or(0),
                ),
            ),
            ("Located posts", &v["located"]),
            ("Resolved to a region", &v["resolved"]),
            ("Unresolved", &v["unresolved"]),
            ("Regions with posts", &v["regions"]),
        ]
        .map(|(k, v)| vec![k.to_string(), num(v)]);
        table(&mut md, &["", "Value"], &rows);
    }

    if let Some(v) = json(out, CLEAN_SUMMARY)? {
        md.push_str("## Preprocessing\n\n");
        let r = &v["removed"];
        let rows = [
            ("Posts", &v["posts"]),
            ("Accepted", &v["accepted"]),
            ("Rejected as too short", &v["rejected_too_short"]),
            ("Rejected as misspelled", &v["rejected_misspelled"]),
            ("Links removed", &r["links"]),
            ("Mentions removed", &r["mentions"]),
            ("Hashtags removed", &r["hashtags"]),
            ("Emojis dropped", &r["emojis_dropped"]),
        ]
        .map(|(k, v)| vec![k.to_string(), num(v)]);
        table(&mut md, &["", "Value"], &rows);
        if let Some(list) = v["emoji_whitelist"].as_array() {
            let items: Vec<&str> = list.iter().filter_map(Value::as_str).collect();
            let _ = writeln!(
                md,
                "Emojis kept: {}\n",
                if items.is_empty() {
                    "none".into()
                } else {
                    items.join(" ")
                }
            );
        }
    }

    frequency_section(&mut md, out, HASHTAGS, "Top hashtags")?;
    frequency_section(&mut md, out, EMOJIS, "Top emojis")?;

    if let Some(v) = json(out, TRAINING_SUMMARY)? {
        md.push_str("## Classifier\n\n");
        let _ = writeln!(
            md,
            "Trained on {} labelled examples plus {} pseudo-labelled from a pool of {}; {} held out.\n",
            num(&v["train"]),
            num(&v["pseudo_labeled"]),
            num(&v["pool"]),
            num(&v["held_out"])
        );
        let rows: Vec<Vec<String>> = [
            ("Before pseudo-labelling", &v["base"]),
            ("Final model", &v["model"]),
        ]
        .into_iter()
        .map(|(k, e)| {
            vec![
                k.to_string(),
                accuracy(&e["train"]),
                if e["held_out"].is_null() {
                    "n/a".into()
                } else {
                    accuracy(&e["held_out"])
                },
            ]
        })
        .collect();
        table(
            &mut md,
            &["Model", "Training accuracy", "Held-out accuracy"],
            &rows,
        );
    }

    let dist = match json(out, CLASSIFY_SUMMARY)? {
        Some(v) => Some(v),
        None => json(out, IMPORT_SUMMARY)?,
    };
    if let Some(v) = dist {
        md.push_str("## Sentiment distribution\n\n");
        let d = &v["distribution"];
        let total: u64 = ["negative", "neutral", "positive"]
            .iter()
            .filter_map(|k| d[k].as_u64())
            .sum();
        let rows: Vec<Vec<String>> = ["negative", "neutral", "positive"]
            .iter()
            .map(|k| {
                let n = d[k].as_u64().unwrap_or(0);
                let share = if total > 0 {
                    n as f64 / total as f64
                } else {
                    0.0
                };
                vec![
                    k.to_string(),
                    n.to_string(),
                    format!("{:.2}%", 100.0 * share),
                ]
            })
            .collect();
        table(&mut md, &["Label", "Posts", "Share"], &rows);
    }

    if let Some((_, rows)) = csv_rows(out, REGION_SENTIMENT)? {
        md.push_str("## Regions\n\n");
        let rows: Vec<Vec<String>> = rows
            .into_iter()
            .map(|r| {
                let mean = r[5]
                    .parse::<f64>()
                    .map(|x| format!("{x:.4}"))
                    .unwrap_or_default();
                vec![
                    r[0].clone(),
                    r[1].clone(),
                    r[2].clone(),
                    r[3].clone(),
                    r[4].clone(),
                    mean,
                    r[6].clone(),
                ]
            })
            .collect();
        table(
            &mut md,
            &[
                "Region",
                "Pos. before",
                "Neg. before",
                "Pos. after",
                "Neg. after",
                "Mean sentiment",
                "Included",
            ],
            &rows,
        );
    }

    if let Some(v) = json(out, SHIFT_SUMMARY)? {
        md.push_str("## Shift tests\n\n");
        let g = &v["global"];
        let _ = writeln!(
            md,
            "Pooled test: chi2 = {}, p = {} (alpha = {}).\n",
            num(&g["chi2"]),
            num(&g["p_value"]),
            num(&v["alpha"])
        );
        let sig: Vec<&str> = v["regions"]["significant"]
            .as_array()
            .map(|a| a.iter().filter_map(Value::as_str).collect())
            .unwrap_or_default();
        let _ = writeln!(
            md,
            "Regions tested: {}; significant shift: {}.\n",
            num(&v["regions"]["tested"]),
            if sig.is_empty() {
                "none".into()
            } else {
                sig.join(", ")
            }
        );
        if !v["regression"].is_null() {
            let r = &v["regression"];
            let _ = writeln!(
                md,
                "Dummy regression over {} regions: after-event coefficient {} (p = {}).\n",
                num(&r["regions"]),
                num(&r["flag_coefficient"]),
                num(&r["flag_p"])
            );
        }
    }

    for (name, title) in [
        (REGRESSION_TABLE, "Regional regression"),
        (STEPWISE_TABLE, "Stepwise selection"),
    ] {
        let path = out.path(name);
        if path.is_file() {
            let _ = writeln!(md, "## {title}\n\n```\n{}```\n", fs::read_to_string(path)?);
        }
    }
    Ok(md)
}
