//! Small dense linear algebra on scalars and on jets.

use crate::jets::{Jet, JetError};
use crate::scalar::Scalar;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn jacobi_eigenvalues<S: Scalar>(m: &[Vec<S>]) -> Vec<S> {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m.to_vec();
    let two = S::lit(2.0);
    for _sweep in 0..100 {
        let off: S = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        let diag: S = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= S::epsilon() * S::epsilon() * (diag + S::min_positive_value()) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q] == S::zero() {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (two * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + S::one()).sqrt());
                let c = S::one() / (t * t + S::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<S> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    ev
}

/// Solves `m x = b` by Gaussian elimination with partial pivoting; `None` if singular.
pub fn solve_dense<S: Scalar>(m: &[Vec<S>], b: &[S]) -> Option<Vec<S>> {
    let n = m.len();
    let mut a: Vec<Vec<S>> = m
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let norm = m
        .iter()
        .flatten()
        .fold(S::zero(), |acc, v| acc.max(v.abs()));
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| {
            a[i][col]
                .abs()
                .partial_cmp(&a[j][col].abs())
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if !(a[piv][col].abs() > S::lit(1e-12) * norm) {
            return None;
        }
        a.swap(col, piv);
        for r in (col + 1)..n {
            let f = a[r][col] / a[col][col];
            for c in col..=n {
                let v = a[col][c];
                a[r][c] = a[r][c] - f * v;
            }
        }
    }
    let mut x = vec![S::zero(); n];
    for r in (0..n).rev() {
        let s: S = ((r + 1)..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][n] - s) / a[r][r];
    }
    Some(x)
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InverseError {
    #[error("matrix is singular: pivot {pivot:e} below 1e-12 * {norm:e}")]
    Singular { pivot: f64, norm: f64 },
    #[error(transparent)]
    Jet(#[from] JetError),
}

/// Inverse of a row-major `n × n` jet matrix by Gauss-Jordan elimination. Pivots are
/// chosen on constant terms; a pivot below `1e-12 · max|m_ij|` is rejected.
pub fn jet_inverse<S: Scalar>(m: &[Jet<S>], n: usize) -> Result<Vec<Jet<S>>, InverseError> {
    assert_eq!(m.len(), n * n);
    let mut a: Vec<Vec<Jet<S>>> = (0..n).map(|i| m[i * n..(i + 1) * n].to_vec()).collect();
    let one = m[0].lift(S::one());
    let zero = m[0].zero_like();
    let mut inv: Vec<Vec<Jet<S>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    let norm = m.iter().fold(S::zero(), |acc, v| acc.max(v.value().abs()));
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| {
                a[i][col]
                    .value()
                    .abs()
                    .partial_cmp(&a[j][col].value().abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(col);
        let pv = a[piv][col].value().abs();
        if !(pv > S::lit(1e-12) * norm) {
            return Err(InverseError::Singular {
                pivot: pv.as_f64(),
                norm: norm.as_f64(),
            });
        }
        a.swap(col, piv);
        inv.swap(col, piv);
        let r = a[col][col].try_recip()?;
        for c in 0..n {
            a[col][c] = &a[col][c] * &r;
            inv[col][c] = &inv[col][c] * &r;
        }
        for row in 0..n {
            if row == col {
                continue;
            }
            let f = a[row][col].clone();
            if f.is_zero() {
                continue;
            }
            for c in 0..n {
                a[row][c] = &a[row][c] - &(&f * &a[col][c]);
                inv[row][c] = &inv[row][c] - &(&f * &inv[col][c]);
            }
        }
    }
    Ok(inv.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jets::seed_variables;

    #[test]
    fn eigenvalues_of_known_matrix() {
        let m: Vec<Vec<f64>> = vec![vec![2.0, 1.0, 0.0], vec![1.0, 2.0, 0.0], vec![0.0, 0.0, 5.0]];
        let ev = jacobi_eigenvalues(&m);
        for (a, b) in ev.iter().zip([1.0, 3.0, 5.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn solve_and_singular() {
        let m: Vec<Vec<f64>> = vec![vec![4.0, 1.0], vec![1.0, 3.0]];
        let x = solve_dense(&m, &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-15);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-15);
        assert!(solve_dense(&[vec![1.0, 2.0], vec![2.0, 4.0]], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn jet_inverse_times_matrix_is_identity() {
        let v: Vec<Jet<f64>> = seed_variables(&[0.3, -0.2], &[1.1, 0.4], 3);
        let m = vec![
            &v[0] * &v[0] + v[0].lift(2.0),
            v[1].sin(),
            v[1].sin(),
            v[2].exp() + &v[3] * &v[3],
        ];
        let inv = jet_inverse(&m, 2).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let p = &(&m[i * 2] * &inv[j]) + &(&m[i * 2 + 1] * &inv[2 + j]);
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((p.value() - target).abs() < 1e-14);
                for c in &p.coeffs()[1..] {
                    assert!(c.abs() < 1e-13);
                }
            }
        }
        let z = v[0].zero_like();
        assert!(matches!(
            jet_inverse(&[z.clone(), z.clone(), z.clone(), z], 2),
            Err(InverseError::Singular { .. })
        ));
    }
}
