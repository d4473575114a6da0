//! Ordinary least squares by Householder QR.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::table::Table;

/// `response ~ p1 + p2 + …`, with an intercept unless disabled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearModelSpec {
    pub response: String,
    pub predictors: Vec<String>,
    pub include_intercept: bool,
}

impl LinearModelSpec {
    pub fn new(response: impl Into<String>, predictors: &[&str]) -> Self {
        LinearModelSpec {
            response: response.into(),
            predictors: predictors.iter().map(|p| p.to_string()).collect(),
            include_intercept: true,
        }
    }

    pub fn n_coefficients(&self) -> usize {
        self.predictors.len() + usize::from(self.include_intercept)
    }

    /// Coefficient names, intercept first.
    pub fn term_names(&self) -> Vec<String> {
        let mut names = Vec::with_capacity(self.n_coefficients());
        if self.include_intercept {
            names.push("(Intercept)".to_string());
        }
        names.extend(self.predictors.iter().cloned());
        names
    }

    fn validate(&self, table: &Table) -> Result<()> {
        if self.predictors.iter().any(|p| p == &self.response) {
            return Err(Error::Validation(format!("response `{}` also listed as a predictor", self.response)));
        }
        if self.n_coefficients() == 0 {
            return Err(Error::Validation("model has no terms".into()));
        }
        for name in std::iter::once(&self.response).chain(&self.predictors) {
            table.column(name)?.require_f64()?;
        }
        Ok(())
    }
}

impl FromStr for LinearModelSpec {
    type Err = Error;

    /// Parses `Ozone ~ Temp + Wind`; `- 1` or `+ 0` drops the intercept.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation(format!("cannot parse formula `{s}`"));
        let (lhs, rhs) = s.split_once('~').ok_or_else(bad)?;
        let response = lhs.trim();
        if response.is_empty() {
            return Err(bad());
        }
        let mut include_intercept = true;
        let mut predictors = Vec::new();
        let rhs = rhs.trim();
        let (rhs, dropped) = match rhs.strip_suffix("- 1") {
            Some(r) => (r.trim(), true),
            None => (rhs, false),
        };
        if dropped {
            include_intercept = false;
        }
        for term in rhs.split('+').map(str::trim) {
            match term {
                "" => return Err(bad()),
                "0" => include_intercept = false,
                "1" => include_intercept = true,
                name => predictors.push(name.to_string()),
            }
        }
        Ok(LinearModelSpec { response: response.to_string(), predictors, include_intercept })
    }
}

impl fmt::Display for LinearModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ~ ", self.response)?;
        if self.predictors.is_empty() {
            f.write_str(if self.include_intercept { "1" } else { "0" })
        } else {
            write!(f, "{}", self.predictors.join(" + "))?;
            if self.include_intercept {
                Ok(())
            } else {
                f.write_str(" - 1")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub terms: Vec<String>,
    /// Intercept (when present) first, then one per predictor.
    pub coefficients: Vec<f64>,
    pub n_used: usize,
}

impl FitResult {
    /// Prediction for one row of predictor values.
    pub fn predict(&self, predictors: &[f64]) -> f64 {
        let (intercept, slopes) = if self.coefficients.len() > predictors.len() {
            (self.coefficients[0], &self.coefficients[1..])
        } else {
            (0.0, &self.coefficients[..])
        };
        intercept + slopes.iter().zip(predictors).map(|(b, x)| b * x).sum::<f64>()
    }
}

type Design = (Vec<Vec<f64>>, Vec<f64>, Vec<usize>);

/// Rows complete in the response and all predictors, with their design rows.
pub(crate) fn design(table: &Table, spec: &LinearModelSpec) -> Result<Design> {
    spec.validate(table)?;
    let y = table.column(&spec.response)?.require_f64()?;
    let xs = spec.predictors.iter().map(|p| table.column(p)?.require_f64()).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    let mut resp = Vec::new();
    let mut used = Vec::new();
    for r in 0..table.n_rows() {
        let Some(yv) = y[r] else { continue };
        let Some(xv) = xs.iter().map(|x| x[r]).collect::<Option<Vec<f64>>>() else {
            continue;
        };
        let mut row = Vec::with_capacity(spec.n_coefficients());
        if spec.include_intercept {
            row.push(1.0);
        }
        row.extend(xv);
        rows.push(row);
        resp.push(yv);
        used.push(r);
    }
    Ok((rows, resp, used))
}

/// Least-squares coefficients for `x b ≈ y` via Householder QR.
///
/// `names` label the columns of `x` for the rank-deficiency error.
pub fn least_squares(x: &[Vec<f64>], y: &[f64], names: &[String]) -> Result<Vec<f64>> {
    let n = x.len();
    let p = names.len();
    if n < p {
        return Err(Error::Validation(format!("{n} complete rows cannot determine {p} coefficients")));
    }
    // column-major copy of the design
    let mut a: Vec<Vec<f64>> = (0..p).map(|j| x.iter().map(|row| row[j]).collect()).collect();
    let mut b = y.to_vec();
    let scale = a.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt()).fold(0.0, f64::max);
    let tol = scale * (n.max(p) as f64) * f64::EPSILON * 16.0;
    let mut diag = vec![0.0; p];

    for k in 0..p {
        let norm = a[k][k..].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= tol {
            return Err(Error::Singular(format!("`{}` is linearly dependent on earlier terms", names[k])));
        }
        let alpha = if a[k][k] > 0.0 { -norm } else { norm };
        // v = x - alpha e1, stored in place
        let mut v: Vec<f64> = a[k][k..].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        diag[k] = alpha;
        for col in a.iter_mut().skip(k + 1) {
            let dot: f64 = v.iter().zip(&col[k..]).map(|(vi, ci)| vi * ci).sum();
            let f = 2.0 * dot / vnorm2;
            for (ci, vi) in col[k..].iter_mut().zip(&v) {
                *ci -= f * vi;
            }
        }
        let dot: f64 = v.iter().zip(&b[k..]).map(|(vi, bi)| vi * bi).sum();
        let f = 2.0 * dot / vnorm2;
        for (bi, vi) in b[k..].iter_mut().zip(&v) {
            *bi -= f * vi;
        }
    }

    // back substitution on R (upper triangle of `a`, diagonal in `diag`)
    let mut coef = vec![0.0; p];
    for k in (0..p).rev() {
        let s: f64 = (k + 1..p).map(|j| a[j][k] * coef[j]).sum();
        coef[k] = (b[k] - s) / diag[k];
    }
    if coef.iter().any(|c| !c.is_finite()) {
        return Err(Error::Singular("non-finite coefficients".into()));
    }
    Ok(coef)
}

/// Fit `spec` on the rows complete in the response and every predictor.
pub fn fit_ols(table: &Table, spec: &LinearModelSpec) -> Result<FitResult> {
    let (x, y, used) = design(table, spec)?;
    let terms = spec.term_names();
    let coefficients = least_squares(&x, &y, &terms)?;
    Ok(FitResult { terms, coefficients, n_used: used.len() })
}
