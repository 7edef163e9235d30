use super::trajectory::Trajectory;
use crate::error::{domain, Result};
use crate::mc::Estimate;

/// Number of batches used for the batch-means standard error.
pub const CORRELATION_BATCHES: usize = 50;

/// Plug-in estimate of `cor_{T,n}(h, g) = ∫ h·(g∘T^n) dμ − ∫h dμ ∫g dμ`.
///
/// Averages `h(Z_k) g(Z_{k+lag})` over `k < N - lag` and subtracts the product
/// of the full-path means of `h` and `g`. No bias correction is applied.
pub fn empirical_correlation<H, G>(t: &Trajectory, h: H, g: G, lag: usize) -> Result<f64>
where
    H: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> f64,
{
    let (hv, gv) = evaluate(t, h, g, lag)?;
    Ok(plug_in(&hv, &gv, lag))
}

/// [`empirical_correlation`] together with a batch-means standard error that
/// accounts for the serial dependence of the path.
pub fn empirical_correlation_with_se<H, G>(
    t: &Trajectory,
    h: H,
    g: G,
    lag: usize,
) -> Result<Estimate>
where
    H: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> f64,
{
    let (hv, gv) = evaluate(t, h, g, lag)?;
    let mean = plug_in(&hv, &gv, lag);
    let pairs = hv.len() - lag;
    let batch = pairs / CORRELATION_BATCHES;
    if batch < 2 {
        return Ok(Estimate { mean, se: f64::NAN });
    }
    let estimates: Vec<f64> = (0..CORRELATION_BATCHES)
        .map(|b| {
            let (lo, hi) = (b * batch, (b + 1) * batch);
            let n = (hi - lo) as f64;
            let mh = hv[lo..hi].iter().sum::<f64>() / n;
            let mg = gv[lo + lag..hi + lag].iter().sum::<f64>() / n;
            let cross = (lo..hi).map(|k| hv[k] * gv[k + lag]).sum::<f64>() / n;
            cross - mh * mg
        })
        .collect();
    let b = CORRELATION_BATCHES as f64;
    let m = estimates.iter().sum::<f64>() / b;
    let var = estimates.iter().map(|e| (e - m) * (e - m)).sum::<f64>() / (b - 1.0);
    Ok(Estimate {
        mean,
        se: (var / b).sqrt(),
    })
}

fn evaluate<H, G>(t: &Trajectory, h: H, g: G, lag: usize) -> Result<(Vec<f64>, Vec<f64>)>
where
    H: Fn(&[f64]) -> f64,
    G: Fn(&[f64]) -> f64,
{
    if lag >= t.len() {
        return domain(format!(
            "lag {lag} must be below the path length {}",
            t.len()
        ));
    }
    let hv: Vec<f64> = t.iter().map(&h).collect();
    let gv: Vec<f64> = t.iter().map(&g).collect();
    Ok((hv, gv))
}

fn plug_in(hv: &[f64], gv: &[f64], lag: usize) -> f64 {
    let n = hv.len() as f64;
    let mh = hv.iter().sum::<f64>() / n;
    let mg = gv.iter().sum::<f64>() / n;
    let pairs = hv.len() - lag;
    let cross = (0..pairs).map(|k| hv[k] * gv[k + lag]).sum::<f64>() / pairs as f64;
    cross - mh * mg
}
