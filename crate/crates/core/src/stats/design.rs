use crate::error::{Error, Result};

/// Response vector plus named predictor columns. The intercept column is
/// implicit and always present in fits.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    y: Vec<f64>,
}

impl DesignMatrix {
    pub fn new(names: Vec<String>, columns: Vec<Vec<f64>>, y: Vec<f64>) -> Result<Self> {
        if names.len() != columns.len() {
            return Err(Error::Data(format!(
                "{} predictor names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        let n = y.len();
        if let Some((name, col)) = names.iter().zip(&columns).find(|(_, c)| c.len() != n) {
            return Err(Error::Data(format!(
                "column `{name}` has {} rows, response has {n}",
                col.len()
            )));
        }
        if n <= names.len() + 1 {
            return Err(Error::Data(format!(
                "{n} observations cannot support {} predictors plus intercept",
                names.len()
            )));
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::Data("response contains non-finite values".into()));
        }
        for (name, col) in names.iter().zip(&columns) {
            if col.iter().any(|v| !v.is_finite()) {
                return Err(Error::Data(format!(
                    "column `{name}` contains non-finite values"
                )));
            }
            if col.iter().all(|v| *v == col[0]) {
                return Err(Error::RankDeficient {
                    column: name.clone(),
                });
            }
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::Data(format!("duplicate predictor name `{dup}`")));
        }
        Ok(Self { names, columns, y })
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.y.len()
    }

    /// Number of predictors, excluding the intercept.
    pub fn k(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    /// Sub-design keeping the predictors at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> DesignMatrix {
        DesignMatrix {
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            columns: indices.iter().map(|&i| self.columns[i].clone()).collect(),
            y: self.y.clone(),
        }
    }

    /// Sub-design keeping the named predictors, in design order.
    pub fn select_names(&self, keep: &[&str]) -> Result<DesignMatrix> {
        for name in keep {
            if !self.names.iter().any(|n| n == name) {
                return Err(Error::Data(format!("unknown predictor `{name}`")));
            }
        }
        let idx: Vec<usize> = (0..self.k())
            .filter(|&i| keep.contains(&self.names[i].as_str()))
            .collect();
        Ok(self.select(&idx))
    }

    pub(crate) fn from_parts_unchecked(
        names: Vec<String>,
        columns: Vec<Vec<f64>>,
        y: Vec<f64>,
    ) -> Self {
        Self { names, columns, y }
    }
}
