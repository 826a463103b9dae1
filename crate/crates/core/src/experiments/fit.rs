use crate::error::{Error, Result};

/// `y = prefactor * x^exponent`, fitted by least squares on `(ln x, ln y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub r_squared: f64,
    /// Points that entered the fit.
    pub points: Vec<(f64, f64)>,
    /// Points dropped for a non-positive or non-finite coordinate.
    pub excluded: Vec<(f64, f64)>,
    pub warnings: Vec<String>,
}

pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    let mut used = Vec::new();
    let mut excluded = Vec::new();
    let mut warnings = Vec::new();
    for &(x, y) in points {
        if x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite() {
            used.push((x, y));
        } else {
            warnings.push(format!("excluded ({x}, {y}): log-log fit needs x > 0 and y > 0"));
            excluded.push((x, y));
        }
    }
    if used.len() < 3 {
        return Err(Error::Fit(format!(
            "a power-law fit needs at least 3 positive points, got {}",
            used.len()
        )));
    }
    let lx: Vec<f64> = used.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = used.iter().map(|p| p.1.ln()).collect();
    let k = used.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all x values coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let ss_tot: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    // A constant series is fitted perfectly by slope 0.
    let r_squared = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(PowerLawFit {
        exponent: slope,
        prefactor: intercept.exp(),
        r_squared,
        points: used,
        excluded,
        warnings,
    })
}

/// Pearson correlation coefficient; `None` when either series is constant
/// or fewer than two points are given.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return None;
    }
    let mx = xs[..n].iter().sum::<f64>() / n as f64;
    let my = ys[..n].iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}
