//! Stand-alone calculator for left-invariant structures on a Lie algebra
//! with an orthonormal basis `X_1..X_n, phi X_1..phi X_n, xi`, written
//! directly on `Rational64` arrays and sharing no code with the library.

#![allow(dead_code)]

use num_rational::Rational64;

pub type Q = Rational64;

pub fn q(n: i64) -> Q {
    Q::from_integer(n)
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(n, d)
}

pub struct Frame {
    pub dim: usize,
    /// `c[i][j][k]`: coefficient of `E_k` in `[E_i, E_j]`.
    pub c: Vec<Vec<Vec<Q>>>,
}

impl Frame {
    pub fn new(dim: usize, entries: &[(usize, usize, usize, Q)]) -> Frame {
        let mut c = vec![vec![vec![q(0); dim]; dim]; dim];
        for &(i, j, k, v) in entries {
            c[i][j][k] = v;
            c[j][i][k] = -v;
        }
        Frame { dim, c }
    }

    fn half(&self) -> usize {
        (self.dim - 1) / 2
    }

    pub fn eps(&self, i: usize) -> Q {
        let n = self.half();
        if i >= n && i < 2 * n {
            q(-1)
        } else {
            q(1)
        }
    }

    pub fn xi(&self) -> usize {
        self.dim - 1
    }

    /// Index of `phi E_i`, or `None` for `xi`.
    pub fn phi_index(&self, i: usize) -> Option<usize> {
        let n = self.half();
        if i < n {
            Some(i + n)
        } else if i < 2 * n {
            Some(i - n)
        } else {
            None
        }
    }

    pub fn phi_vec(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![q(0); self.dim];
        for (i, x) in v.iter().enumerate() {
            if let Some(j) = self.phi_index(i) {
                out[j] += *x;
            }
        }
        out
    }

    pub fn g(&self, u: &[Q], v: &[Q]) -> Q {
        (0..self.dim).map(|i| self.eps(i) * u[i] * v[i]).sum()
    }

    pub fn bracket(&self, u: &[Q], v: &[Q]) -> Vec<Q> {
        let mut out = vec![q(0); self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let w = u[i] * v[j];
                if w != q(0) {
                    for k in 0..self.dim {
                        out[k] += w * self.c[i][j][k];
                    }
                }
            }
        }
        out
    }

    pub fn e(&self, i: usize) -> Vec<Q> {
        let mut v = vec![q(0); self.dim];
        v[i] = q(1);
        v
    }

    pub fn jacobi_holds(&self) -> bool {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut s = q(0);
                        for m in 0..n {
                            s += self.c[i][j][m] * self.c[m][k][l]
                                + self.c[j][k][m] * self.c[m][i][l]
                                + self.c[k][i][m] * self.c[m][j][l];
                        }
                        if s != q(0) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `gamma[i][j][k]`: coefficient of `E_k` in `nabla_{E_i} E_j`, from
    /// `2 g(nabla_X Y, Z) = g([X,Y],Z) - g([Y,Z],X) + g([Z,X],Y)` for a
    /// constant metric.
    pub fn connection(&self) -> Vec<Vec<Vec<Q>>> {
        let n = self.dim;
        let mut gamma = vec![vec![vec![q(0); n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = self.c[i][j][k] * self.eps(k) - self.c[j][k][i] * self.eps(i)
                        + self.c[k][i][j] * self.eps(j);
                    gamma[i][j][k] = v * qr(1, 2) * self.eps(k);
                }
            }
        }
        gamma
    }

    pub fn nabla(&self, gamma: &[Vec<Vec<Q>>], u: &[Q], v: &[Q]) -> Vec<Q> {
        let mut out = vec![q(0); self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let w = u[i] * v[j];
                if w != q(0) {
                    for k in 0..self.dim {
                        out[k] += w * gamma[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// `R(E_i,E_j)E_k` as `r[i][j][k][l]`.
    pub fn riemann(&self) -> Vec<Vec<Vec<Vec<Q>>>> {
        let n = self.dim;
        let gamma = self.connection();
        let mut r = vec![vec![vec![vec![q(0); n]; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let (ei, ej, ek) = (self.e(i), self.e(j), self.e(k));
                    let a = self.nabla(&gamma, &ei, &self.nabla(&gamma, &ej, &ek));
                    let b = self.nabla(&gamma, &ej, &self.nabla(&gamma, &ei, &ek));
                    let c = self.nabla(&gamma, &self.bracket(&ei, &ej), &ek);
                    for l in 0..n {
                        r[i][j][k][l] = a[l] - b[l] - c[l];
                    }
                }
            }
        }
        r
    }

    pub fn ricci(&self, r: &[Vec<Vec<Vec<Q>>>], x: usize, y: usize) -> Q {
        (0..self.dim).map(|i| self.eps(i) * r[i][x][y][i] * self.eps(i)).sum()
    }

    pub fn scalar(&self, r: &[Vec<Vec<Vec<Q>>>]) -> Q {
        (0..self.dim).map(|i| self.eps(i) * self.ricci(r, i, i)).sum()
    }

    /// `sum eps_i g(R(e_i,X) phi Y, phi e_i)`.
    pub fn star_ricci(&self, r: &[Vec<Vec<Vec<Q>>>], x: usize, y: usize) -> Q {
        let Some(py) = self.phi_index(y) else { return q(0) };
        (0..self.dim)
            .filter_map(|i| self.phi_index(i).map(|pi| self.eps(i) * r[i][x][py][pi] * self.eps(pi)))
            .sum()
    }

    pub fn star_scalar(&self, r: &[Vec<Vec<Vec<Q>>>]) -> Q {
        (0..self.dim).map(|i| self.eps(i) * self.star_ricci(r, i, i)).sum()
    }

    /// `A E_i = nabla_{E_i} xi` as columns.
    pub fn tensor_a(&self) -> Vec<Vec<Q>> {
        let gamma = self.connection();
        (0..self.dim).map(|i| gamma[i][self.xi()].clone()).collect()
    }

    /// `tr(phi A)`.
    pub fn trace_phi_a(&self) -> Q {
        let a = self.tensor_a();
        (0..self.dim).map(|i| self.phi_vec(&a[i])[i]).sum()
    }

    /// `d eta(E_i,E_j) = -1/2 eta([E_i,E_j])` for constant `eta`.
    pub fn d_eta(&self, i: usize, j: usize) -> Q {
        -qr(1, 2) * self.c[i][j][self.xi()]
    }

    pub fn fundamental(&self, i: usize, j: usize) -> Q {
        self.g(&self.e(i), &self.phi_vec(&self.e(j)))
    }

    pub fn d_fundamental_vanishes(&self) -> bool {
        let n = self.dim;
        let phi_of = |u: &[Q], k: usize| -> Q {
            (0..n).map(|a| u[a] * self.fundamental(a, k)).sum()
        };
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let s = phi_of(&self.c[i][j], k) + phi_of(&self.c[j][k], i) + phi_of(&self.c[k][i], j);
                    if s != q(0) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn n1(&self, i: usize, j: usize) -> Vec<Q> {
        let (x, y) = (self.e(i), self.e(j));
        let (px, py) = (self.phi_vec(&x), self.phi_vec(&y));
        let mut v = self.phi_vec(&self.phi_vec(&self.bracket(&x, &y)));
        let t = self.bracket(&px, &py);
        let u = self.phi_vec(&self.bracket(&px, &y));
        let w = self.phi_vec(&self.bracket(&x, &py));
        for k in 0..self.dim {
            v[k] += t[k] - u[k] - w[k];
        }
        v[self.xi()] -= q(2) * self.d_eta(i, j);
        v
    }

    pub fn is_normal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.n1(i, j).iter().all(|c| *c == q(0))))
    }

    pub fn is_quasi_para_sasakian(&self) -> bool {
        self.is_normal() && self.d_fundamental_vanishes()
    }

    /// `K` with `R(X,Y)Z = K(g(Y,Z)X - g(X,Z)Y)`, if any.
    pub fn constant_curvature(&self) -> Option<Q> {
        let n = self.dim;
        let r = self.riemann();
        let mut k: Option<Q> = None;
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                // R(E_i,E_j)E_j = K eps_j E_i
                let cand = r[i][j][j][i] / self.eps(j);
                match k {
                    None => k = Some(cand),
                    Some(prev) if prev != cand => return None,
                    _ => {}
                }
            }
        }
        let k = k.unwrap_or(q(0));
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let mut want = q(0);
                        if m == i && l == j {
                            want += k * self.eps(j);
                        }
                        if m == j && l == i {
                            want -= k * self.eps(i);
                        }
                        if r[i][j][l][m] != want {
                            return None;
                        }
                    }
                }
            }
        }
        Some(k)
    }
}
