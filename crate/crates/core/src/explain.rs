//! Builds the regional regression design: socio-economic features joined
//! with aggregated sentiment.

use std::collections::HashMap;

use crate::corpus::RegionTable;
use crate::error::{Error, Result};
use crate::regional::RegionSentiment;
use crate::stats::DesignMatrix;

pub const SENTIMENT_FEATURE: &str = "sentiment";

/// Design with `outcome` as response. When `sentiment` is given, only
/// regions included there are kept and their mean sentiment becomes the
/// first predictor. `features` restricts and orders the predictors.
pub fn region_design(
    table: &RegionTable,
    sentiment: Option<&[RegionSentiment]>,
    features: Option<&[String]>,
) -> Result<DesignMatrix> {
    let means: Option<HashMap<&str, f64>> = sentiment.map(|rs| {
        rs.iter()
            .filter(|r| r.included)
            .map(|r| (r.region_id.as_str(), r.mean_sentiment))
            .collect()
    });
    if means.is_some() && table.feature_index(SENTIMENT_FEATURE).is_some() {
        return Err(Error::Config(format!(
            "region table already has a `{SENTIMENT_FEATURE}` column; do not join aggregated sentiment"
        )));
    }

    let mut available: Vec<String> = Vec::new();
    if means.is_some() {
        available.push(SENTIMENT_FEATURE.to_string());
    }
    available.extend(table.feature_names.iter().cloned());
    let names: Vec<String> = match features {
        Some(list) => {
            if let Some(bad) = list.iter().find(|f| !available.contains(f)) {
                return Err(Error::Config(format!("unknown regression feature `{bad}`")));
            }
            list.to_vec()
        }
        None => available,
    };

    let rows: Vec<_> = table
        .rows
        .iter()
        .filter_map(|row| match &means {
            Some(m) => m.get(row.region_id.as_str()).map(|s| (row, Some(*s))),
            None => Some((row, None)),
        })
        .collect();
    let columns = names
        .iter()
        .map(|name| {
            rows.iter()
                .map(|(row, s)| {
                    if name == SENTIMENT_FEATURE && s.is_some() {
                        s.unwrap()
                    } else {
                        row.features[table.feature_index(name).unwrap()]
                    }
                })
                .collect()
        })
        .collect();
    let y = rows.iter().map(|(row, _)| row.outcome).collect();
    DesignMatrix::new(names, columns, y)
}
