//! Small dense linear algebra over [`Scalar`].

use crate::scalars::Scalar;

pub type Matrix = Vec<Vec<Scalar>>;

/// Determinant by cofactor expansion (matrices here are at most 4×4).
pub fn det(m: &[Vec<Scalar>]) -> Scalar {
    match m.len() {
        0 => Scalar::one(),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        k => {
            let mut acc = Scalar::zero();
            for j in 0..k {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Matrix = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let t = &m[0][j] * &det(&minor);
                acc = if j % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            acc
        }
    }
}

pub fn transpose(m: &[Vec<Scalar>]) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

/// `m - c·I`.
pub fn shift_diag(m: &[Vec<Scalar>], c: &Scalar) -> Matrix {
    m.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| if i == j { v - c } else { v.clone() })
                .collect()
        })
        .collect()
}

/// Reduced row echelon form; returns the pivot columns.
fn rref(m: &mut Matrix) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for v in m[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

/// A basis of `{v : m v = 0}`.
pub fn nullspace(m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let mut a: Matrix = m.to_vec();
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let pivots = rref(&mut a);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Scalar::zero(); cols];
        v[free] = Scalar::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `m v = b`, or `None` when inconsistent.
pub fn solve(m: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut a: Matrix = m
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut a);
    if pivots.contains(&cols) {
        return None;
    }
    let mut v = vec![Scalar::zero(); cols];
    for (r, &pc) in pivots.iter().enumerate() {
        v[pc] = a[r][cols].clone();
    }
    Some(v)
}

/// Sum of the principal 2×2 minors.
pub fn principal_minors_2(m: &[Vec<Scalar>]) -> Scalar {
    let k = m.len();
    let mut acc = Scalar::zero();
    for i in 0..k {
        for j in i + 1..k {
            acc = &acc + &(&(&m[i][i] * &m[j][j]) - &(&m[i][j] * &m[j][i]));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect())
            .collect()
    }

    #[test]
    fn det_and_kernel() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(det(&a), Scalar::from_int(-3));
        let b = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ns = nullspace(&b);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let s = &(&v[0] + &(&v[1] * &Scalar::from_int(2))) + &(&v[2] * &Scalar::from_int(3));
            assert!(s.is_zero());
        }
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = m(&[&[1, 1], &[1, -1], &[2, 0]]);
        let b: Vec<Scalar> = [3, 1, 4].iter().map(|&v| Scalar::from_int(v)).collect();
        assert_eq!(
            solve(&a, &b).unwrap(),
            vec![Scalar::from_int(2), Scalar::from_int(1)]
        );
        let b: Vec<Scalar> = [3, 1, 5].iter().map(|&v| Scalar::from_int(v)).collect();
        assert!(solve(&a, &b).is_none());
    }
}
