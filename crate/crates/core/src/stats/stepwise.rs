use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::design::DesignMatrix;
use super::ols::{ols, OlsFit};
use crate::error::Result;
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Backward,
    Forward,
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    #[default]
    Full,
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Move {
    Add,
    Drop,
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Move::Add => "add",
            Move::Drop => "drop",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceStep {
    pub step: usize,
    pub action: Move,
    pub name: String,
    /// AIC of the model after the move.
    pub aic: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepwiseResult {
    /// Selected predictors in design order.
    pub selected: Vec<String>,
    pub fit: OlsFit,
    pub start_aic: f64,
    pub trace: Vec<TraceStep>,
}

#[derive(Debug, Clone)]
struct Candidate {
    action: Move,
    index: usize,
    aic: f64,
}

fn fit_subset(d: &DesignMatrix, active: &[bool]) -> Result<OlsFit> {
    let idx: Vec<usize> = (0..d.k()).filter(|&i| active[i]).collect();
    ols(&d.select(&idx))
}

/// Greedy AIC search over predictor subsets.
///
/// Each round scores every single add/drop move the direction allows, takes
/// the lowest-AIC move when it strictly improves on the current model, and
/// stops otherwise. Equal AICs resolve to the lexicographically smaller
/// predictor name. Moves that would make the design rank deficient are
/// skipped. The intercept is never a candidate.
pub fn stepwise(d: &DesignMatrix, direction: Direction, start: Start) -> Result<StepwiseResult> {
    let k = d.k();
    let mut active = vec![start == Start::Full; k];
    let mut current = fit_subset(d, &active)?;
    let start_aic = current.aic;
    let mut trace = Vec::new();

    loop {
        let moves: Vec<(Move, usize)> = (0..k)
            .filter_map(|i| match (active[i], direction) {
                (true, Direction::Backward | Direction::Both) => Some((Move::Drop, i)),
                (false, Direction::Forward | Direction::Both) => Some((Move::Add, i)),
                _ => None,
            })
            .collect();

        let scored = par::map(&moves, |&(action, index)| {
            let mut next = active.clone();
            next[index] = !next[index];
            fit_subset(d, &next).ok().map(|fit| Candidate {
                action,
                index,
                aic: fit.aic,
            })
        });

        let best = scored.into_iter().flatten().min_by(|a, b| {
            a.aic
                .total_cmp(&b.aic)
                .then_with(|| d.names()[a.index].cmp(&d.names()[b.index]))
        });

        match best {
            Some(c) if c.aic.partial_cmp(&current.aic) == Some(Ordering::Less) => {
                active[c.index] = !active[c.index];
                current = fit_subset(d, &active)?;
                trace.push(TraceStep {
                    step: trace.len() + 1,
                    action: c.action,
                    name: d.names()[c.index].clone(),
                    aic: current.aic,
                });
            }
            _ => break,
        }
    }

    let selected = (0..k)
        .filter(|&i| active[i])
        .map(|i| d.names()[i].clone())
        .collect();
    Ok(StepwiseResult {
        selected,
        fit: current,
        start_aic,
        trace,
    })
}
