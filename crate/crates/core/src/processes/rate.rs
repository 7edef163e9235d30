use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Exponents tried when fitting `d_n = c·exp(−b·n^γ)`.
pub const GAMMA_GRID: [f64; 8] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];

/// Geometric mixing envelope `d_n = c·exp(−b·n^γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixingRate {
    pub c: f64,
    pub b: f64,
    pub gamma: f64,
}

impl MixingRate {
    pub fn new(c: f64, b: f64, gamma: f64) -> Result<Self> {
        let r = Self { c, b, gamma };
        r.validate()?;
        Ok(r)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c >= 0.0 && self.c.is_finite()) {
            return domain(format!("rate constant c = {} must be >= 0", self.c));
        }
        if !(self.b > 0.0 && self.b.is_finite()) {
            return domain(format!("rate constant b = {} must be > 0", self.b));
        }
        if !(self.gamma > 0.0) {
            return domain(format!("rate exponent gamma = {} must be > 0", self.gamma));
        }
        Ok(())
    }

    pub fn d(&self, n: u64) -> f64 {
        self.c * (-self.b * (n as f64).powf(self.gamma)).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub rate: MixingRate,
    /// Residual sum of squares of `log|cor|` at the chosen exponent.
    pub residual: f64,
    /// Number of lags that survived the positivity filter.
    pub used: usize,
}

/// Fits a geometric envelope to `(lag, |cor|)` pairs.
///
/// For each γ on [`GAMMA_GRID`] regresses `log|cor|` on `(1, −n^γ)` and keeps
/// the exponent with the smallest residual sum of squares among fits with
/// `b > 0`. Ties go to the smaller γ. Pairs with `|cor| = 0` or non-finite
/// values are dropped.
pub fn fit_geometric_rate(correlations: &[(u64, f64)]) -> Result<RateFit> {
    let pts: Vec<(f64, f64)> = correlations
        .iter()
        .filter(|(_, c)| c.is_finite() && c.abs() > 0.0)
        .map(|&(n, c)| (n as f64, c.abs().ln()))
        .collect();
    if pts.len() < 3 {
        return Err(Error::Fit(format!(
            "need at least 3 lags with nonzero correlation, got {}",
            pts.len()
        )));
    }
    let mut best: Option<RateFit> = None;
    for &gamma in &GAMMA_GRID {
        let xs: Vec<f64> = pts.iter().map(|(n, _)| -n.powf(gamma)).collect();
        let Some((intercept, slope)) = least_squares_line(&xs, pts.iter().map(|p| p.1)) else {
            continue;
        };
        if !(slope > 0.0) {
            continue;
        }
        let rss: f64 = xs
            .iter()
            .zip(&pts)
            .map(|(x, (_, y))| {
                let r = y - (intercept + slope * x);
                r * r
            })
            .sum();
        if best.as_ref().map_or(true, |b| rss < b.residual) {
            best = Some(RateFit {
                rate: MixingRate {
                    c: intercept.exp(),
                    b: slope,
                    gamma,
                },
                residual: rss,
                used: pts.len(),
            });
        }
    }
    best.ok_or_else(|| Error::Fit("no exponent on the grid gives a decaying fit".into()))
}

/// Ordinary least squares `y ≈ a + b x`; `None` if the design is degenerate.
fn least_squares_line(xs: &[f64], ys: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let ys: Vec<f64> = ys.collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 || !sxx.is_finite() {
        return None;
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let b = sxy / sxx;
    Some((my - b * mx, b))
}

/// Parses a CSV with `lag` and `cor` columns (any order, extra columns
/// ignored, `#` comment lines skipped).
pub fn parse_correlation_csv(text: &str) -> Result<Vec<(u64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(false)
        .from_reader(text.as_bytes());
    let headers = reader
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Parse(format!("missing `{name}` column")))
    };
    let (lag_col, cor_col) = (col("lag")?, col("cor")?);
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        let field = |c: usize| rec.get(c).unwrap_or("");
        let lag: u64 = field(lag_col)
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad lag `{}`", i + 1, field(lag_col))))?;
        let cor: f64 = field(cor_col)
            .parse()
            .map_err(|_| Error::Parse(format!("row {}: bad cor `{}`", i + 1, field(cor_col))))?;
        if !cor.is_finite() {
            return Err(Error::Parse(format!(
                "row {}: non-finite correlation",
                i + 1
            )));
        }
        out.push((lag, cor));
    }
    Ok(out)
}
