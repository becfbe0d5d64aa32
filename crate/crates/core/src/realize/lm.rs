//! Small dense Levenberg-Marquardt solver with a finite-difference Jacobian.

#[derive(Clone, Copy, Debug)]
pub struct LmOptions {
    pub max_iters: usize,
    /// Stop once the largest residual is below this.
    pub target: f64,
    /// Stop once a step changes `x` by less than this (relative).
    pub step_tol: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        LmOptions {
            max_iters: 400,
            target: 1e-14,
            step_tol: 1e-15,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LmResult {
    pub x: Vec<f64>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

impl LmResult {
    pub fn max_abs(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

fn sq(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum()
}

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
/// Returns `None` for a numerically singular matrix.
pub fn solve_dense(a: &mut [Vec<f64>], b: &mut [f64]) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}

/// Minimizes `sum f(x)_i^2`. `f` writes its residuals into the slice it is
/// given and returns `false` if `x` is outside its domain.
pub fn levenberg_marquardt<F>(f: F, x0: &[f64], m: usize, opts: &LmOptions) -> Option<LmResult>
where
    F: Fn(&[f64], &mut [f64]) -> bool,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = vec![0.0; m];
    if !f(&x, &mut r) {
        return None;
    }
    let mut cost = sq(&r);
    let mut lambda = 1e-3;
    let mut jac = vec![vec![0.0; n]; m];
    let (mut rp, mut rm) = (vec![0.0; m], vec![0.0; m]);
    let mut iterations = 0;

    while iterations < opts.max_iters {
        if r.iter().all(|v| v.abs() < opts.target) {
            break;
        }
        iterations += 1;
        for j in 0..n {
            let h = 1e-7 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            xp[j] += h;
            let mut xm = x.clone();
            xm[j] -= h;
            if !(f(&xp, &mut rp) && f(&xm, &mut rm)) {
                return Some(LmResult { x, residuals: r, iterations });
            }
            for i in 0..m {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let mut jtj = vec![vec![0.0; n]; n];
        let mut jtr = vec![0.0; n];
        for i in 0..m {
            for a in 0..n {
                jtr[a] += jac[i][a] * r[i];
                for b in a..n {
                    jtj[a][b] += jac[i][a] * jac[i][b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                jtj[a][b] = jtj[b][a];
            }
        }

        let mut improved = false;
        for _ in 0..30 {
            let mut lhs = jtj.clone();
            for (a, row) in lhs.iter_mut().enumerate() {
                row[a] += lambda * (jtj[a][a] + 1e-12);
            }
            let mut rhs: Vec<f64> = jtr.iter().map(|v| -v).collect();
            let Some(delta) = solve_dense(&mut lhs, &mut rhs) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = x.iter().zip(&delta).map(|(a, d)| a + d).collect();
            let mut rt = vec![0.0; m];
            if f(&trial, &mut rt) && sq(&rt) < cost {
                let step = delta.iter().fold(0.0f64, |s, d| s.max(d.abs()));
                let scale = x.iter().fold(1.0f64, |s, v| s.max(v.abs()));
                x = trial;
                r = rt;
                cost = sq(&r);
                lambda = (lambda / 3.0).max(1e-15);
                improved = step > opts.step_tol * scale;
                if !improved {
                    return Some(LmResult { x, residuals: r, iterations });
                }
                break;
            }
            lambda *= 4.0;
        }
        if !improved {
            break;
        }
    }
    Some(LmResult { x, residuals: r, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_linear_system() {
        let mut a = vec![vec![2.0, 1.0], vec![1.0, 3.0]];
        let mut b = vec![3.0, 5.0];
        let x = solve_dense(&mut a, &mut b).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-14 && (x[1] - 1.4).abs() < 1e-14);
        let mut s = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_dense(&mut s, &mut [1.0, 2.0]).is_none());
    }

    #[test]
    fn fits_rosenbrock() {
        let f = |x: &[f64], r: &mut [f64]| {
            r[0] = 10.0 * (x[1] - x[0] * x[0]);
            r[1] = 1.0 - x[0];
            true
        };
        let res = levenberg_marquardt(f, &[-1.2, 1.0], 2, &LmOptions::default()).unwrap();
        assert!((res.x[0] - 1.0).abs() < 1e-8 && (res.x[1] - 1.0).abs() < 1e-8);
    }

    #[test]
    fn finds_circle_line_intersection() {
        let f = |x: &[f64], r: &mut [f64]| {
            r[0] = x[0] * x[0] + x[1] * x[1] - 1.0;
            r[1] = x[0] - x[1];
            true
        };
        let res = levenberg_marquardt(f, &[2.0, 0.5], 2, &LmOptions::default()).unwrap();
        assert!(res.max_abs() < 1e-12);
        assert!((res.x[0] - 0.5f64.sqrt()).abs() < 1e-10);
    }
}
