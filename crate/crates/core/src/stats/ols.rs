use serde::Serialize;

use super::design::DesignMatrix;
use super::dist::{f_sf, student_t_two_sided};
use crate::error::{Error, Result};

pub const INTERCEPT: &str = "Intercept";

/// Relative tolerance for declaring a column linearly dependent on the
/// columns before it, measured against the largest column norm.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Ordinary least squares fit with classical (homoskedastic) inference.
///
/// Vectors indexed by term start with the intercept, followed by the
/// predictors in design order.
#[derive(Debug, Clone, Serialize)]
pub struct OlsFit {
    pub terms: Vec<String>,
    pub beta: Vec<f64>,
    pub se: Vec<f64>,
    pub t: Vec<f64>,
    pub p: Vec<f64>,
    pub r2: f64,
    pub adj_r2: f64,
    pub f_stat: f64,
    pub f_p: f64,
    pub aic: f64,
    pub log_likelihood: f64,
    pub rss: f64,
    pub tss: f64,
    pub n: usize,
    pub k: usize,
    pub residuals: Vec<f64>,
    pub fitted: Vec<f64>,
    /// Set when the residual sum of squares is exactly zero; AIC and
    /// log-likelihood are then infinite sentinels.
    pub perfect_fit: bool,
}

impl OlsFit {
    pub fn df_resid(&self) -> usize {
        self.n - self.k - 1
    }

    pub fn coefficient(&self, term: &str) -> Option<f64> {
        self.index(term).map(|i| self.beta[i])
    }

    pub fn index(&self, term: &str) -> Option<usize> {
        self.terms.iter().position(|t| t == term)
    }
}

/// Akaike information criterion for a Gaussian linear model with `k`
/// slopes, an intercept and an estimated error variance.
///
/// Returns `-inf` when `rss` is zero.
pub fn aic(rss: f64, n: usize, k: usize) -> f64 {
    let ll = log_likelihood(rss, n);
    if ll.is_infinite() {
        return f64::NEG_INFINITY;
    }
    -2.0 * ll + 2.0 * (k as f64 + 2.0)
}

/// Maximized Gaussian log-likelihood given the residual sum of squares.
pub fn log_likelihood(rss: f64, n: usize) -> f64 {
    if rss <= 0.0 {
        return f64::INFINITY;
    }
    let n = n as f64;
    -0.5 * (n * (2.0 * std::f64::consts::PI).ln() + n * (rss / n).ln() + n)
}

/// Least-squares solution via Householder QR.
struct QrSolution {
    beta: Vec<f64>,
    /// Diagonal of `(X'X)^{-1}`.
    xtx_inv_diag: Vec<f64>,
}

fn qr_solve(columns: &[&[f64]], names: &[&str], y: &[f64]) -> Result<QrSolution> {
    let n = y.len();
    let p = columns.len();
    let mut a: Vec<Vec<f64>> = columns.iter().map(|c| c.to_vec()).collect();
    let mut qty = y.to_vec();
    let max_norm = a
        .iter()
        .map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt())
        .fold(0.0, f64::max);

    let mut v = vec![0.0; n];
    for j in 0..p {
        let norm = a[j][j..].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm <= RANK_TOLERANCE * max_norm {
            return Err(Error::RankDeficient {
                column: names[j].to_string(),
            });
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let len = n - j;
        v[..len].copy_from_slice(&a[j][j..]);
        v[0] -= alpha;
        let vnorm2: f64 = v[..len].iter().map(|x| x * x).sum();
        if vnorm2 > 0.0 {
            let reflect = |col: &mut [f64]| {
                let s: f64 = v[..len].iter().zip(col.iter()).map(|(a, b)| a * b).sum();
                let f = 2.0 * s / vnorm2;
                for (c, vi) in col.iter_mut().zip(&v[..len]) {
                    *c -= f * vi;
                }
            };
            for col in a.iter_mut().skip(j) {
                reflect(&mut col[j..]);
            }
            reflect(&mut qty[j..]);
        }
    }

    // R is stored in the upper triangle: R[i][j] = a[j][i].
    let mut beta = vec![0.0; p];
    for i in (0..p).rev() {
        let mut s = qty[i];
        for j in i + 1..p {
            s -= a[j][i] * beta[j];
        }
        beta[i] = s / a[i][i];
    }

    // rinv rows: rinv[i][j] for j >= i
    let mut rinv = vec![vec![0.0; p]; p];
    for i in (0..p).rev() {
        rinv[i][i] = 1.0 / a[i][i];
        for j in i + 1..p {
            let mut s = 0.0;
            for m in i + 1..=j {
                s += a[m][i] * rinv[m][j];
            }
            rinv[i][j] = -s / a[i][i];
        }
    }
    let xtx_inv_diag = (0..p)
        .map(|i| rinv[i][i..].iter().map(|v| v * v).sum())
        .collect();
    Ok(QrSolution { beta, xtx_inv_diag })
}

/// Fits `y ~ 1 + predictors` by least squares.
pub fn ols(d: &DesignMatrix) -> Result<OlsFit> {
    let n = d.n();
    let k = d.k();
    if n <= k + 1 {
        return Err(Error::Data(format!(
            "{n} observations cannot support {k} predictors plus intercept"
        )));
    }
    let ones = vec![1.0; n];
    let mut cols: Vec<&[f64]> = Vec::with_capacity(k + 1);
    cols.push(&ones);
    cols.extend(d.columns().iter().map(Vec::as_slice));
    let mut names: Vec<&str> = Vec::with_capacity(k + 1);
    names.push(INTERCEPT);
    names.extend(d.names().iter().map(String::as_str));

    let sol = qr_solve(&cols, &names, d.y())?;
    let beta = sol.beta;

    let fitted: Vec<f64> = (0..n)
        .map(|i| cols.iter().zip(&beta).map(|(c, b)| c[i] * b).sum())
        .collect();
    let residuals: Vec<f64> = d.y().iter().zip(&fitted).map(|(y, f)| y - f).collect();
    let rss: f64 = residuals.iter().map(|r| r * r).sum();
    let mean_y = d.y().iter().sum::<f64>() / n as f64;
    let tss: f64 = d.y().iter().map(|y| (y - mean_y).powi(2)).sum();

    let df_resid = (n - k - 1) as f64;
    let sigma2 = rss / df_resid;
    let se: Vec<f64> = sol
        .xtx_inv_diag
        .iter()
        .map(|v| (sigma2 * v).sqrt())
        .collect();
    let t: Vec<f64> = beta
        .iter()
        .zip(&se)
        .map(|(&b, &s)| {
            if s > 0.0 {
                b / s
            } else if b == 0.0 {
                0.0
            } else {
                b.signum() * f64::INFINITY
            }
        })
        .collect();
    let p: Vec<f64> = t
        .iter()
        .map(|&t| student_t_two_sided(t, df_resid))
        .collect();

    let r2 = if tss > 0.0 {
        (1.0 - rss / tss).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let adj_r2 = 1.0 - (1.0 - r2) * (n as f64 - 1.0) / df_resid;
    let (f_stat, f_p) = if k == 0 {
        (0.0, 1.0)
    } else if rss > 0.0 {
        let f = ((tss - rss).max(0.0) / k as f64) / sigma2;
        (f, f_sf(f, k as f64, df_resid))
    } else {
        (f64::INFINITY, 0.0)
    };

    Ok(OlsFit {
        terms: names.iter().map(|s| s.to_string()).collect(),
        beta,
        se,
        t,
        p,
        r2,
        adj_r2,
        f_stat,
        f_p,
        aic: aic(rss, n, k),
        log_likelihood: log_likelihood(rss, n),
        rss,
        tss,
        n,
        k,
        residuals,
        fitted,
        perfect_fit: rss == 0.0,
    })
}
