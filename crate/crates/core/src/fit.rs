//! Small least-squares helpers for log-log slope extraction.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Ordinary least squares for `y = intercept + slope * x`.
/// Returns `(slope, intercept, rms_residual)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::DegenerateFitWindow {
            points: xs.len().min(ys.len()),
            needed: 2,
        });
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFitWindow {
            points: xs.len(),
            needed: 2,
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let e = y - intercept - slope * x;
            e * e
        })
        .sum();
    Ok((slope, intercept, (rss / n).sqrt()))
}

/// Least squares for `y = c + a*u + b*v` over rows `(u_i, v_i, y_i)`.
/// Returns `(c, a, b, rms_residual)`.
pub fn bilinear_fit(us: &[f64], vs: &[f64], ys: &[f64]) -> Result<(f64, f64, f64, f64)> {
    let n = ys.len();
    if us.len() != n || vs.len() != n || n < 4 {
        return Err(Error::DegenerateFitWindow {
            points: n.min(us.len()).min(vs.len()),
            needed: 4,
        });
    }
    let mut design = DMatrix::zeros(n, 3);
    for i in 0..n {
        design[(i, 0)] = 1.0;
        design[(i, 1)] = us[i];
        design[(i, 2)] = vs[i];
    }
    let rhs = DVector::from_column_slice(ys);
    let svd = design.clone().svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|_| Error::DegenerateFitWindow { points: n, needed: 4 })?;
    let resid = (&design * &sol - &rhs).norm() / (n as f64).sqrt();
    Ok((sol[0], sol[1], sol[2], resid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_recovers_exact_line() {
        let xs = [1.0, 2.0, 3.0, 4.0];
        let ys: Vec<f64> = xs.iter().map(|x| 2.5 - 0.7 * x).collect();
        let (s, i, r) = linear_fit(&xs, &ys).unwrap();
        assert!((s + 0.7).abs() < 1e-12);
        assert!((i - 2.5).abs() < 1e-12);
        assert!(r < 1e-12);
    }

    #[test]
    fn linear_rejects_degenerate() {
        assert!(linear_fit(&[1.0], &[2.0]).is_err());
        assert!(linear_fit(&[1.0, 1.0], &[2.0, 3.0]).is_err());
    }

    #[test]
    fn bilinear_recovers_exact_plane() {
        let us = [1.0, 2.0, 3.0, 4.0, 5.0];
        let vs = [0.0, 0.7, 1.1, 1.4, 1.6];
        let ys: Vec<f64> = us
            .iter()
            .zip(&vs)
            .map(|(u, v)| 1.0 - 0.5 * u + 2.0 * v)
            .collect();
        let (c, a, b, r) = bilinear_fit(&us, &vs, &ys).unwrap();
        assert!((c - 1.0).abs() < 1e-9);
        assert!((a + 0.5).abs() < 1e-9);
        assert!((b - 2.0).abs() < 1e-9);
        assert!(r < 1e-9);
    }

    #[test]
    fn bilinear_needs_four_points() {
        assert!(bilinear_fit(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).is_err());
    }
}
