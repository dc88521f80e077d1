//! Riemann, Ricci and star-Ricci curvature.
//!
//! `R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y]`, stored as a (1,3) tensor
//! with index order `[l, k, i, j]` for the `E_l` component of `R(E_i,E_j)E_k`.

use ppst_expr::RationalExpr;

use crate::connection::{inverse_metric, ConnectionData};
use crate::error::GeometryError;
use crate::model::ManifoldModel;
use crate::tensor::vec::Vector;
use crate::tensor::Tensor;

#[derive(Clone, Debug, PartialEq)]
pub struct CurvatureData {
    pub riemann: Tensor,
    pub ricci: Tensor,
    pub scalar: RationalExpr,
    /// Present when an endomorphism `phi` was supplied.
    pub star_ricci: Option<Tensor>,
    pub star_scalar: Option<RationalExpr>,
}

impl CurvatureData {
    /// `R(X,Y)Z` for arbitrary component vectors.
    pub fn apply(&self, x: &[RationalExpr], y: &[RationalExpr], z: &[RationalExpr]) -> Vector {
        apply_riemann(&self.riemann, x, y, z)
    }
}

pub fn riemann(model: &ManifoldModel, conn: &ConnectionData) -> Tensor {
    let n = model.dim();
    let brackets: Vec<Vec<Vector>> = (0..n)
        .map(|i| (0..n).map(|j| model.bracket(i, j)).collect())
        .collect();
    let mut out = Tensor::zeros(n, 1, 3);
    for i in 0..n {
        for j in (i + 1)..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = model.derive(i, conn.coefficient(l, j, k))
                        - model.derive(j, conn.coefficient(l, i, k));
                    for m in 0..n {
                        let a = conn.coefficient(m, j, k);
                        if !a.is_zero() {
                            v = v + a * conn.coefficient(l, i, m);
                        }
                        let b = conn.coefficient(m, i, k);
                        if !b.is_zero() {
                            v = v - b * conn.coefficient(l, j, m);
                        }
                        let c = &brackets[i][j][m];
                        if !c.is_zero() {
                            v = v - c * conn.coefficient(l, m, k);
                        }
                    }
                    out.set(&[l, k, j, i], -&v);
                    out.set(&[l, k, i, j], v);
                }
            }
        }
    }
    out
}

pub fn apply_riemann(r: &Tensor, x: &[RationalExpr], y: &[RationalExpr], z: &[RationalExpr]) -> Vector {
    let n = r.dim();
    let mut out = vec![RationalExpr::zero(); n];
    for i in (0..n).filter(|&i| !x[i].is_zero()) {
        for j in (0..n).filter(|&j| !y[j].is_zero()) {
            for k in (0..n).filter(|&k| !z[k].is_zero()) {
                let w = &x[i] * &y[j] * &z[k];
                for (l, slot) in out.iter_mut().enumerate() {
                    let c = r.get(&[l, k, i, j]);
                    if !c.is_zero() {
                        *slot = &*slot + c * &w;
                    }
                }
            }
        }
    }
    out
}

/// `g(R(E_a,E_b)E_c, E_d)` with index order `[a, b, c, d]`.
pub fn lowered_riemann(r: &Tensor, g: &Tensor) -> Tensor {
    let n = r.dim();
    Tensor::from_fn(n, 0, 4, |ix| {
        let (a, b, c, d) = (ix[0], ix[1], ix[2], ix[3]);
        (0..n)
            .filter(|&l| !g.get(&[l, d]).is_zero())
            .map(|l| r.get(&[l, c, a, b]) * g.get(&[l, d]))
            .sum()
    })
}

/// `S(X,Y)`: trace of `Z -> R(Z,X)Y`, equal to the signature-weighted sum
/// over any orthonormal basis.
pub fn ricci(r: &Tensor) -> Tensor {
    let n = r.dim();
    Tensor::from_fn(n, 0, 2, |ix| (0..n).map(|a| r.get(&[a, ix[1], a, ix[0]]).clone()).sum())
}

/// Metric trace of a (0,2) tensor.
pub fn metric_trace(ginv: &Tensor, b: &Tensor) -> RationalExpr {
    let n = b.dim();
    let mut acc = RationalExpr::zero();
    for i in 0..n {
        for j in 0..n {
            let gi = ginv.get(&[i, j]);
            if !gi.is_zero() {
                acc = acc + gi * b.get(&[i, j]);
            }
        }
    }
    acc
}

/// `S*(X,Y) = sum_i eps_i g(R(e_i,X)phi Y, phi e_i)`, written with `g^{-1}`
/// in place of the orthonormal sum.
pub fn star_ricci(r: &Tensor, g: &Tensor, ginv: &Tensor, phi: &Tensor) -> Tensor {
    let n = r.dim();
    let rl = lowered_riemann(r, g);
    // w[a][d] = sum_b g^{ab} phi^d_b.
    let w: Vec<Vec<RationalExpr>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|d| (0..n).map(|b| ginv.get(&[a, b]) * phi.get(&[d, b])).sum())
                .collect()
        })
        .collect();
    Tensor::from_fn(n, 0, 2, |ix| {
        let (x, y) = (ix[0], ix[1]);
        let mut acc = RationalExpr::zero();
        for c in (0..n).filter(|&c| !phi.get(&[c, y]).is_zero()) {
            let pc = phi.get(&[c, y]);
            for a in 0..n {
                for d in (0..n).filter(|&d| !w[a][d].is_zero()) {
                    let v = rl.get(&[a, x, c, d]);
                    if !v.is_zero() {
                        acc = acc + &w[a][d] * pc * v;
                    }
                }
            }
        }
        acc
    })
}

/// Full curvature data; the star part is filled when `phi` is given.
pub fn curvature(
    model: &ManifoldModel,
    conn: &ConnectionData,
    g: &Tensor,
    phi: Option<&Tensor>,
) -> Result<CurvatureData, GeometryError> {
    let ginv = inverse_metric(model, g)?;
    let riemann = riemann(model, conn);
    let ricci = ricci(&riemann);
    let scalar = metric_trace(&ginv, &ricci);
    let (star_ricci, star_scalar) = match phi {
        Some(phi) => {
            let s = star_ricci(&riemann, g, &ginv, phi);
            let t = metric_trace(&ginv, &s);
            (Some(s), Some(t))
        }
        None => (None, None),
    };
    Ok(CurvatureData {
        riemann,
        ricci,
        scalar,
        star_ricci,
        star_scalar,
    })
}

/// `R(X,Y)Z + R(Y,X)Z`.
pub fn antisymmetry_residual(r: &Tensor) -> Tensor {
    Tensor::from_fn(r.dim(), 1, 3, |ix| {
        r.get(ix) + r.get(&[ix[0], ix[1], ix[3], ix[2]])
    })
}

/// `R(X,Y)Z + R(Y,Z)X + R(Z,X)Y` with index order `[l, x, y, z]`.
pub fn first_bianchi_residual(r: &Tensor) -> Tensor {
    Tensor::from_fn(r.dim(), 1, 3, |ix| {
        let (l, x, y, z) = (ix[0], ix[1], ix[2], ix[3]);
        r.get(&[l, z, x, y]) + r.get(&[l, x, y, z]) + r.get(&[l, y, z, x])
    })
}

/// `g(R(X,Y)Z,W) + g(R(X,Y)W,Z)`.
pub fn pair_antisymmetry_residual(r: &Tensor, g: &Tensor) -> Tensor {
    let rl = lowered_riemann(r, g);
    Tensor::from_fn(r.dim(), 0, 4, |ix| {
        rl.get(ix) + rl.get(&[ix[0], ix[1], ix[3], ix[2]])
    })
}
