//! Exact linear algebra over rational functions and over Q.

use ppst_expr::{BigRational, RationalExpr};

type Matrix = Vec<Vec<RationalExpr>>;

/// Inverse by Gauss-Jordan elimination; `None` when singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut inv: Matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { RationalExpr::one() } else { RationalExpr::zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        // Prefer constant pivots: they keep intermediate expressions small.
        let pivot = (col..n)
            .filter(|&r| !a[r][col].is_zero())
            .min_by_key(|&r| !a[r][col].is_constant())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].recip().expect("pivot is non-zero");
        for j in 0..n {
            a[col][j] = &a[col][j] * &p;
            inv[col][j] = &inv[col][j] * &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - t;
                let t = &f * &inv[col][j];
                inv[r][j] = &inv[r][j] - t;
            }
        }
    }
    Some(inv)
}

pub fn determinant(m: &Matrix) -> RationalExpr {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut det = RationalExpr::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return RationalExpr::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det = &det * &a[col][col];
        let p = a[col][col].recip().expect("pivot is non-zero");
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &p;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - t;
            }
        }
    }
    det
}

pub fn rank_q(m: &[Vec<BigRational>]) -> usize {
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][col] != BigRational::from_integer(0.into())) else {
            continue;
        };
        a.swap(rank, p);
        let pv = a[rank][col].clone();
        for r in 0..rows {
            if r != rank && a[r][col] != BigRational::from_integer(0.into()) {
                let f = &a[r][col] / &pv;
                for j in col..cols {
                    let t = &f * &a[rank][j];
                    a[r][j] -= t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Inertia `(positive, negative, zero)` of a symmetric rational matrix,
/// by symmetric elimination (congruence preserves inertia).
pub fn inertia_q(m: &[Vec<BigRational>]) -> (usize, usize, usize) {
    let zero = BigRational::from_integer(0.into());
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let (mut pos, mut neg) = (0, 0);
    let mut n = a.len();
    while n > 0 {
        if let Some(i) = (0..n).find(|&i| a[i][i] != zero) {
            let d = a[i][i].clone();
            if d > zero {
                pos += 1;
            } else {
                neg += 1;
            }
            let row = a[i].clone();
            let mut next = Vec::with_capacity(n - 1);
            for r in (0..n).filter(|&r| r != i) {
                let f = &row[r] / &d;
                next.push(
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| &a[r][c] - &f * &row[c])
                        .collect(),
                );
            }
            a = next;
            n -= 1;
        } else if let Some((i, j)) = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .find(|&(i, j)| a[i][j] != zero)
        {
            // Zero diagonal: e_i <- e_i + e_j makes the (i, i) entry 2 a_ij.
            for c in 0..n {
                let t = a[j][c].clone();
                a[i][c] += t;
            }
            for r in 0..n {
                let t = a[r][j].clone();
                a[r][i] += t;
            }
        } else {
            break;
        }
    }
    (pos, neg, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use ppst_expr::parse_expr;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn symbolic_inverse_round_trips() {
        let vars = ["y", "z"];
        let p = |s: &str| parse_expr(s, &vars).unwrap();
        let g = vec![
            vec![p("1"), p("0"), p("-4*y/z")],
            vec![p("0"), p("-1"), p("0")],
            vec![p("-4*y/z"), p("0"), p("(1+16*y^2)/z^2")],
        ];
        let inv = inverse(&g).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let prod: RationalExpr = (0..3).map(|k| &g[i][k] * &inv[k][j]).sum();
                let want = if i == j { RationalExpr::one() } else { RationalExpr::zero() };
                assert_eq!(prod, want);
            }
        }
        assert_eq!(determinant(&g), p("-1/z^2"));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let r = RationalExpr::from_int;
        assert!(inverse(&vec![vec![r(1), r(2)], vec![r(2), r(4)]]).is_none());
    }

    #[test]
    fn inertia_handles_zero_diagonal() {
        let m = vec![vec![q(0), q(1), q(0)], vec![q(1), q(0), q(0)], vec![q(0), q(0), q(3)]];
        assert_eq!(inertia_q(&m), (2, 1, 0));
        let d = vec![vec![q(1), q(0)], vec![q(0), q(0)]];
        assert_eq!(inertia_q(&d), (1, 0, 1));
        assert_eq!(rank_q(&d), 1);
    }
}
