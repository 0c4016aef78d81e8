//! Central finite differences of matrix-valued functions on ℝᵐ.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Per-coordinate steps `step·max(1, |xᵢ|)`.
pub fn scaled_steps(x: &[f64], step: f64) -> Vec<f64> {
    x.iter().map(|xi| step * xi.abs().max(1.0)).collect()
}

/// Checks that `x ± reach·hᵢ·eᵢ` is valid for every coordinate.
pub fn check_stencil<V>(x: &[f64], steps: &[f64], reach: f64, valid: V) -> Result<()>
where
    V: Fn(&[f64]) -> bool,
{
    let mut y = x.to_vec();
    for (i, h) in steps.iter().enumerate() {
        for sign in [-1.0, 1.0] {
            y[i] = x[i] + sign * reach * h;
            if !valid(&y) {
                return Err(Error::StencilOutOfChart { coordinate: i, step: *h });
            }
        }
        y[i] = x[i];
    }
    Ok(())
}

fn central<F>(f: &F, x: &[f64], i: usize, h: f64) -> DMatrix<f64>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    let mut y = x.to_vec();
    y[i] = x[i] + h;
    let plus = f(&y);
    y[i] = x[i] - h;
    let minus = f(&y);
    (plus - minus) / (2.0 * h)
}

/// `∂ᵢf(x)` for every coordinate, by central differences refined with
/// `levels` rounds of Richardson extrapolation (halving the step each round).
pub fn partials<F>(f: F, x: &[f64], steps: &[f64], levels: usize) -> Vec<DMatrix<f64>>
where
    F: Fn(&[f64]) -> DMatrix<f64>,
{
    (0..x.len())
        .map(|i| {
            let mut table: Vec<DMatrix<f64>> = Vec::with_capacity(levels + 1);
            for j in 0..=levels {
                let h = steps[i] / f64::powi(2.0, j as i32);
                let mut current = central(&f, x, i, h);
                let mut factor = 1.0;
                for prev in table.iter_mut() {
                    factor *= 4.0;
                    let next = (&current * factor - &*prev) / (factor - 1.0);
                    *prev = current;
                    current = next;
                }
                table.push(current);
            }
            table.pop().expect("at least one level")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(x: &[f64]) -> DMatrix<f64> {
        DMatrix::from_row_slice(1, 2, &[x[0].powi(3) * x[1], (x[0] * x[1]).sin()])
    }

    #[test]
    fn central_difference_accuracy() {
        let x = [0.7, -1.3];
        let d = partials(cubic, &x, &scaled_steps(&x, 1e-3), 0);
        let exact0 = [3.0 * 0.49 * -1.3, -1.3 * (0.7f64 * -1.3).cos()];
        assert!((d[0][(0, 0)] - exact0[0]).abs() < 1e-5);
        assert!((d[0][(0, 1)] - exact0[1]).abs() < 1e-5);
    }

    #[test]
    fn richardson_improves_accuracy() {
        let f = |x: &[f64]| DMatrix::from_element(1, 1, (5.0 * x[0]).exp());
        let x = [0.3];
        let exact = 5.0 * 1.5f64.exp();
        let plain = partials(f, &x, &[1e-2], 0)[0][(0, 0)];
        let refined = partials(f, &x, &[1e-2], 2)[0][(0, 0)];
        assert!((refined - exact).abs() < (plain - exact).abs() * 1e-3);
        assert!((refined - exact).abs() / exact < 1e-10);
    }

    #[test]
    fn stencil_rejection() {
        let err = check_stencil(&[0.5, 0.001], &[1e-3, 1e-3], 2.0, |y| y[1] > 0.0);
        assert_eq!(err, Err(Error::StencilOutOfChart { coordinate: 1, step: 1e-3 }));
        assert!(check_stencil(&[0.5, 0.1], &[1e-3, 1e-3], 2.0, |y| y[1] > 0.0).is_ok());
    }
}
