use crate::error::{Error, Result};
use crate::numerics::HPComplex;

/// Least-squares solution of `M x ≈ b`.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub x: Vec<HPComplex>,
    /// `‖M x − b‖₂`.
    pub residual: f64,
    /// `log10` of `max |R_ii| / min |R_ii|` after scaling columns to unit norm.
    pub condition_log10: f64,
}

fn norm(v: &[HPComplex]) -> f64 {
    v.iter().map(|z| z.abs_f64().powi(2)).sum::<f64>().sqrt()
}

/// Householder QR on column-equilibrated `rows`. Needs at least as many rows as columns.
pub fn least_squares(rows: &[Vec<HPComplex>], b: &[HPComplex]) -> Result<LeastSquares> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    if n == 0 {
        return Ok(LeastSquares {
            x: Vec::new(),
            residual: norm(b),
            condition_log10: 0.0,
        });
    }
    if m < n || b.len() != m {
        return Err(Error::Unsupported(format!("{m} equations for {n} unknowns")));
    }
    let bits = b[0].prec();
    let mut a: Vec<Vec<HPComplex>> = (0..n).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    let mut scales = Vec::with_capacity(n);
    for col in a.iter_mut() {
        let s = norm(col);
        if s == 0.0 {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        let inv = HPComplex::from_f64(bits, 1.0 / s, 0.0);
        for z in col.iter_mut() {
            *z = &*z * &inv;
        }
        scales.push(inv);
    }
    let mut rhs = b.to_vec();

    for k in 0..n {
        let xnorm = {
            let mut acc = rug::Float::with_val(bits, 0);
            for z in &a[k][k..] {
                acc += z.abs().square();
            }
            acc.sqrt()
        };
        if xnorm.is_zero() {
            return Err(Error::IllConditioned(f64::INFINITY));
        }
        let x0 = a[k][k].clone();
        let phase = if x0.is_zero() {
            HPComplex::one(bits)
        } else {
            x0.checked_div(&HPComplex::from_real(&x0.abs()))?
        };
        let alpha = -&phase.mul_real(&xnorm);
        let mut v: Vec<HPComplex> = a[k][k..].to_vec();
        v[0] = &v[0] - &alpha;
        let vv: rug::Float = v
            .iter()
            .fold(rug::Float::with_val(bits, 0), |acc, z| acc + z.abs().square());
        if vv.is_zero() {
            continue;
        }
        let apply = |col: &mut [HPComplex]| {
            let mut dot = HPComplex::zero(bits);
            for (vi, ci) in v.iter().zip(col.iter()) {
                dot = &dot + &(&vi.conj() * ci);
            }
            let f = dot.mul_real(&rug::Float::with_val(bits, 2 / &vv));
            for (vi, ci) in v.iter().zip(col.iter_mut()) {
                *ci = &*ci - &(vi * &f);
            }
        };
        for col in a.iter_mut().skip(k) {
            apply(&mut col[k..]);
        }
        apply(&mut rhs[k..]);
    }

    let diag: Vec<f64> = (0..n).map(|k| a[k][k].abs_f64()).collect();
    let dmax = diag.iter().cloned().fold(0.0, f64::max);
    let dmin = diag.iter().cloned().fold(f64::INFINITY, f64::min);
    let condition_log10 = if dmin == 0.0 {
        f64::INFINITY
    } else {
        (dmax / dmin).log10()
    };
    if !condition_log10.is_finite() {
        return Err(Error::IllConditioned(condition_log10));
    }

    let mut y = vec![HPComplex::zero(bits); n];
    for k in (0..n).rev() {
        let mut acc = rhs[k].clone();
        for j in k + 1..n {
            acc = &acc - &(&a[j][k] * &y[j]);
        }
        y[k] = acc.checked_div(&a[k][k])?;
    }
    let x = y.iter().zip(&scales).map(|(v, s)| v * s).collect();
    Ok(LeastSquares {
        x,
        residual: norm(&rhs[n..]),
        condition_log10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overdetermined_exact() {
        let bits = 200;
        let c = |re: f64, im: f64| HPComplex::from_f64(bits, re, im);
        // x = (2 − i, 0.5)
        let rows = vec![
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 1.0), c(2.0, 0.0)],
            vec![c(0.0, 1.0), c(-3.0, 0.0)],
            vec![c(5.0, 0.0), c(0.0, 2.0)],
        ];
        let x = [c(2.0, -1.0), c(0.5, 0.0)];
        let b: Vec<HPComplex> = rows.iter().map(|r| &(&r[0] * &x[0]) + &(&r[1] * &x[1])).collect();
        let sol = least_squares(&rows, &b).unwrap();
        for (got, want) in sol.x.iter().zip(&x) {
            assert!((got - want).log10_abs() < -55.0);
        }
        assert!(sol.residual < 1e-50);
    }

    #[test]
    fn inconsistent_system_reports_residual() {
        let bits = 128;
        let c = |v: f64| HPComplex::from_f64(bits, v, 0.0);
        let rows = vec![vec![c(1.0)], vec![c(1.0)]];
        let sol = least_squares(&rows, &[c(0.0), c(2.0)]).unwrap();
        assert!((sol.x[0].to_f64().0 - 1.0).abs() < 1e-30);
        assert!((sol.residual - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn dependent_columns() {
        let bits = 128;
        let c = |v: f64| HPComplex::from_f64(bits, v, 0.0);
        let rows = vec![vec![c(1.0), c(2.0)], vec![c(2.0), c(4.0)], vec![c(3.0), c(6.0)]];
        let r = least_squares(&rows, &[c(1.0), c(2.0), c(3.0)]);
        match r {
            Err(Error::IllConditioned(_)) => {}
            Ok(s) => assert!(s.condition_log10 > 20.0),
            Err(e) => panic!("{e}"),
        }
    }
}
