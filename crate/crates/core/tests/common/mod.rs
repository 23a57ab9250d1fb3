//! Independent reference implementations and data generators shared by the
//! integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub mod text;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Gauss-Jordan inverse with partial pivoting.
pub fn invert(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))?;
        if m[p][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, p);
        let d = m[c][c];
        for v in m[c].iter_mut() {
            *v /= d;
        }
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                if f != 0.0 {
                    for j in 0..2 * n {
                        m[r][j] -= f * m[c][j];
                    }
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[derive(Debug, Clone)]
pub struct OracleFit {
    pub beta: Vec<f64>,
    pub se: Vec<f64>,
    pub t: Vec<f64>,
    pub r2: f64,
    pub rss: f64,
    pub residuals: Vec<f64>,
}

/// OLS with an intercept from the normal equations `(X'X) b = X'y`.
pub fn ols_normal(columns: &[Vec<f64>], y: &[f64]) -> OracleFit {
    let n = y.len();
    let mut x: Vec<Vec<f64>> = vec![vec![1.0; n]];
    x.extend(columns.iter().cloned());
    let p = x.len();
    let xtx: Vec<Vec<f64>> = (0..p)
        .map(|i| {
            (0..p)
                .map(|j| (0..n).map(|r| x[i][r] * x[j][r]).sum())
                .collect()
        })
        .collect();
    let xty: Vec<f64> = (0..p)
        .map(|i| (0..n).map(|r| x[i][r] * y[r]).sum())
        .collect();
    let inv = invert(&xtx).expect("singular design");
    let beta: Vec<f64> = (0..p)
        .map(|i| (0..p).map(|j| inv[i][j] * xty[j]).sum())
        .collect();
    let residuals: Vec<f64> = (0..n)
        .map(|r| y[r] - (0..p).map(|i| x[i][r] * beta[i]).sum::<f64>())
        .collect();
    let rss: f64 = residuals.iter().map(|e| e * e).sum();
    let mean = y.iter().sum::<f64>() / n as f64;
    let tss: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let sigma2 = rss / (n - p) as f64;
    let se: Vec<f64> = (0..p).map(|i| (sigma2 * inv[i][i]).sqrt()).collect();
    let t = beta.iter().zip(&se).map(|(b, s)| b / s).collect();
    OracleFit {
        beta,
        se,
        t,
        r2: 1.0 - rss / tss,
        rss,
        residuals,
    }
}

/// Gaussian AIC with `k` slopes plus intercept and variance as parameters.
pub fn aic(rss: f64, n: usize, k: usize) -> f64 {
    let n = n as f64;
    n * (2.0 * std::f64::consts::PI).ln() + n * (rss / n).ln() + n + 2.0 * (k as f64 + 2.0)
}

pub fn subset_aic(columns: &[Vec<f64>], y: &[f64], subset: &[usize]) -> f64 {
    let cols: Vec<Vec<f64>> = subset.iter().map(|&i| columns[i].clone()).collect();
    aic(ols_normal(&cols, y).rss, y.len(), subset.len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleStep {
    pub add: bool,
    pub name: String,
    pub aic: f64,
}

/// Greedy both-direction search from the full model, scoring every single
/// add/drop with [`ols_normal`]. Ties go to the smaller name.
pub fn brute_force_stepwise(
    names: &[String],
    columns: &[Vec<f64>],
    y: &[f64],
) -> (Vec<usize>, Vec<OracleStep>) {
    let k = names.len();
    let mut active = vec![true; k];
    let subset = |a: &[bool]| (0..k).filter(|&i| a[i]).collect::<Vec<_>>();
    let mut current = subset_aic(columns, y, &subset(&active));
    let mut trace = Vec::new();
    loop {
        let mut best: Option<(f64, &str, usize)> = None;
        for i in 0..k {
            let mut cand = active.clone();
            cand[i] = !cand[i];
            let a = subset_aic(columns, y, &subset(&cand));
            let better = match best {
                None => true,
                Some((ba, bn, _)) => a < ba || (a == ba && names[i].as_str() < bn),
            };
            if better {
                best = Some((a, &names[i], i));
            }
        }
        match best {
            Some((a, _, i)) if a < current => {
                active[i] = !active[i];
                trace.push(OracleStep {
                    add: active[i],
                    name: names[i].clone(),
                    aic: a,
                });
                current = a;
            }
            _ => break,
        }
    }
    (subset(&active), trace)
}

/// AIC of every predictor subset, via the centred Gram matrix.
pub fn all_subset_aics(columns: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let n = y.len();
    let k = columns.len();
    let center = |v: &[f64]| {
        let m = v.iter().sum::<f64>() / n as f64;
        v.iter().map(|x| x - m).collect::<Vec<f64>>()
    };
    let xc: Vec<Vec<f64>> = columns.iter().map(|c| center(c)).collect();
    let yc = center(y);
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let g: Vec<Vec<f64>> = (0..k)
        .map(|i| (0..k).map(|j| dot(&xc[i], &xc[j])).collect())
        .collect();
    let gy: Vec<f64> = (0..k).map(|i| dot(&xc[i], &yc)).collect();
    let tss = dot(&yc, &yc);
    (0..1usize << k)
        .map(|mask| {
            let idx: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).collect();
            let rss = if idx.is_empty() {
                tss
            } else {
                let sub: Vec<Vec<f64>> = idx
                    .iter()
                    .map(|&i| idx.iter().map(|&j| g[i][j]).collect())
                    .collect();
                let inv = invert(&sub).expect("singular subset");
                let b: Vec<f64> = (0..idx.len())
                    .map(|r| (0..idx.len()).map(|c| inv[r][c] * gy[idx[c]]).sum())
                    .collect();
                tss - b.iter().zip(&idx).map(|(b, &i)| b * gy[i]).sum::<f64>()
            };
            aic(rss, n, idx.len())
        })
        .collect()
}

/// Random regression instance: `k` correlated predictors with a sparse
/// true coefficient vector.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    n: usize,
    k: usize,
) -> (Vec<String>, Vec<Vec<f64>>, Vec<f64>) {
    let names: Vec<String> = (0..k).map(|i| format!("x{i:02}")).collect();
    let shared: Vec<f64> = (0..n).map(|_| normal(rng)).collect();
    let columns: Vec<Vec<f64>> = (0..k)
        .map(|_| {
            let scale = 10f64.powf(rng.random_range(-1.0..1.0));
            let rho = rng.random_range(0.0..0.5);
            (0..n)
                .map(|r| scale * (rho * shared[r] + normal(rng)))
                .collect()
        })
        .collect();
    let beta: Vec<f64> = (0..k)
        .map(|_| {
            if rng.random_bool(0.5) {
                normal(rng)
            } else {
                0.0
            }
        })
        .collect();
    let noise = rng.random_range(0.5..3.0);
    let y = (0..n)
        .map(|r| {
            1.0 + (0..k).map(|j| beta[j] * columns[j][r] / 3.0).sum::<f64>() + noise * normal(rng)
        })
        .collect();
    (names, columns, y)
}

/// Pearson statistic of a 2x2 table via the two-proportion z test.
pub fn two_proportion_z2(pos_a: f64, neg_a: f64, pos_b: f64, neg_b: f64) -> f64 {
    let (na, nb) = (pos_a + neg_a, pos_b + neg_b);
    let (pa, pb) = (pos_a / na, pos_b / nb);
    let p = (pos_a + pos_b) / (na + nb);
    let z = (pa - pb) / (p * (1.0 - p) * (1.0 / na + 1.0 / nb)).sqrt();
    z * z
}
