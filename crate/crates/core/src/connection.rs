//! Levi-Civita connection and covariant differentiation.

use ppst_expr::RationalExpr;

use crate::error::GeometryError;
use crate::linalg;
use crate::model::ManifoldModel;
use crate::tensor::vec::Vector;
use crate::tensor::{index_tuples, Tensor};

/// Connection coefficients `nabla_{E_i} E_j = sum_k gamma[k, i, j] E_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionData {
    pub gamma: Tensor,
}

impl ConnectionData {
    pub fn dim(&self) -> usize {
        self.gamma.dim()
    }

    pub fn coefficient(&self, k: usize, i: usize, j: usize) -> &RationalExpr {
        self.gamma.get(&[k, i, j])
    }

    /// `nabla_{E_i} E_j` as a component vector.
    pub fn basis_derivative(&self, i: usize, j: usize) -> Vector {
        (0..self.dim()).map(|k| self.coefficient(k, i, j).clone()).collect()
    }

    /// `nabla_X Y` for arbitrary vector fields.
    pub fn nabla(&self, model: &ManifoldModel, x: &[RationalExpr], y: &[RationalExpr]) -> Vector {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut acc = RationalExpr::zero();
                for a in 0..n {
                    if x[a].is_zero() {
                        continue;
                    }
                    let mut inner = model.derive(a, &y[k]);
                    for b in 0..n {
                        if !y[b].is_zero() {
                            inner = inner + self.coefficient(k, a, b) * &y[b];
                        }
                    }
                    acc = acc + &x[a] * inner;
                }
                acc
            })
            .collect()
    }
}

pub(crate) fn check_metric(model: &ManifoldModel, g: &Tensor) -> Result<Vec<Vec<RationalExpr>>, GeometryError> {
    if g.valence() != (0, 2) || g.dim() != model.dim() {
        return Err(GeometryError::Shape(format!(
            "metric must be a (0,2) tensor of dimension {}",
            model.dim()
        )));
    }
    let n = g.dim();
    for i in 0..n {
        for j in i + 1..n {
            if g.get(&[i, j]) != g.get(&[j, i]) {
                return Err(GeometryError::AsymmetricMetric(i, j));
            }
        }
    }
    linalg::inverse(&g.to_matrix()).ok_or(GeometryError::DegenerateMetric)
}

/// Inverse metric `g^{ij}`.
pub fn inverse_metric(model: &ManifoldModel, g: &Tensor) -> Result<Tensor, GeometryError> {
    let inv = check_metric(model, g)?;
    Ok(Tensor::from_fn(g.dim(), 2, 0, |ix| inv[ix[0]][ix[1]].clone()))
}

/// Levi-Civita connection of `g`: Christoffel symbols on a chart, the
/// Koszul formula with bracket terms on a frame.
pub fn levi_civita(model: &ManifoldModel, g: &Tensor) -> Result<ConnectionData, GeometryError> {
    let ginv = check_metric(model, g)?;
    let n = model.dim();
    let half = RationalExpr::from_ratio(1, 2);
    let lowered: Tensor = if model.is_chart() {
        // Christoffel symbols of the first kind.
        let dg = Tensor::from_fn(n, 0, 3, |ix| model.derive(ix[2], g.get(&[ix[0], ix[1]])));
        Tensor::from_fn(n, 0, 3, |ix| {
            let (i, j, l) = (ix[0], ix[1], ix[2]);
            &half * (dg.get(&[j, l, i]) + dg.get(&[i, l, j]) - dg.get(&[i, j, l]))
        })
    } else {
        let gb = |u: &[RationalExpr], c: usize| -> RationalExpr {
            (0..n).map(|a| &u[a] * g.get(&[a, c])).sum()
        };
        Tensor::from_fn(n, 0, 3, |ix| {
            let (i, j, l) = (ix[0], ix[1], ix[2]);
            let t = model.derive(i, g.get(&[j, l])) + model.derive(j, g.get(&[i, l]))
                - model.derive(l, g.get(&[i, j]))
                + gb(&model.bracket(i, j), l)
                - gb(&model.bracket(i, l), j)
                - gb(&model.bracket(j, l), i);
            &half * t
        })
    };
    let gamma = Tensor::from_fn(n, 1, 2, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        (0..n)
            .filter(|&l| !ginv[k][l].is_zero())
            .map(|l| &ginv[k][l] * lowered.get(&[i, j, l]))
            .sum()
    });
    Ok(ConnectionData { gamma })
}

/// Covariant derivative `nabla T`, with the differentiation slot appended
/// as the last covariant index: `(nabla T)(..., X) = (nabla_X T)(...)`.
pub fn covariant_derivative(model: &ManifoldModel, conn: &ConnectionData, t: &Tensor) -> Tensor {
    let n = model.dim();
    let (up, lo) = t.valence();
    Tensor::from_fn(n, up, lo + 1, |ix| {
        let a = ix[up + lo];
        let base = &ix[..up + lo];
        let mut acc = model.derive(a, t.get(base));
        let mut idx = base.to_vec();
        for p in 0..up {
            let orig = idx[p];
            for m in 0..n {
                let c = conn.coefficient(orig, a, m);
                if c.is_zero() {
                    continue;
                }
                idx[p] = m;
                acc = acc + c * t.get(&idx);
            }
            idx[p] = orig;
        }
        for q in up..up + lo {
            let orig = idx[q];
            for m in 0..n {
                let c = conn.coefficient(m, a, orig);
                if c.is_zero() {
                    continue;
                }
                idx[q] = m;
                acc = acc - c * t.get(&idx);
            }
            idx[q] = orig;
        }
        acc
    })
}

/// `nabla_{E_i} E_j - nabla_{E_j} E_i - [E_i, E_j]` as a (1,2) tensor `[k, i, j]`.
pub fn torsion(model: &ManifoldModel, conn: &ConnectionData) -> Tensor {
    let n = model.dim();
    let brackets: Vec<Vec<Vector>> = (0..n)
        .map(|i| (0..n).map(|j| model.bracket(i, j)).collect())
        .collect();
    Tensor::from_fn(n, 1, 2, |ix| {
        let (k, i, j) = (ix[0], ix[1], ix[2]);
        conn.coefficient(k, i, j) - conn.coefficient(k, j, i) - &brackets[i][j][k]
    })
}

/// `nabla g`, which vanishes for a metric connection.
pub fn metric_compatibility(model: &ManifoldModel, conn: &ConnectionData, g: &Tensor) -> Tensor {
    covariant_derivative(model, conn, g)
}

/// Labelled non-zero entries `nabla_{E_i} E_j = ...` for reports.
pub fn connection_table(model: &ManifoldModel, conn: &ConnectionData) -> Vec<(String, String, Vector)> {
    let labels = model.basis_labels();
    index_tuples(model.dim(), 2)
        .map(|ix| {
            (
                labels[ix[0]].clone(),
                labels[ix[1]].clone(),
                conn.basis_derivative(ix[0], ix[1]),
            )
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ppst_expr::parse_expr;

    #[test]
    fn flat_pseudo_euclidean_metric_has_no_christoffels() {
        let m = ManifoldModel::chart(vec!["x".into(), "y".into(), "z".into()], vec![]).unwrap();
        let r = RationalExpr::from_int;
        let g = Tensor::bilinear(&[
            vec![r(1), r(0), r(0)],
            vec![r(0), r(-1), r(0)],
            vec![r(0), r(0), r(1)],
        ]);
        let conn = levi_civita(&m, &g).unwrap();
        assert!(conn.gamma.is_zero());
    }

    #[test]
    fn polar_like_chart_is_torsion_free_and_metric() {
        let vars = ["r", "t", "s"];
        let m = ManifoldModel::chart(vars.iter().map(|v| v.to_string()).collect(), vec![]).unwrap();
        let p = |s: &str| parse_expr(s, &vars).unwrap();
        let g = Tensor::bilinear(&[
            vec![p("1"), p("0"), p("0")],
            vec![p("0"), p("r^2"), p("t")],
            vec![p("0"), p("t"), p("-1")],
        ]);
        let conn = levi_civita(&m, &g).unwrap();
        assert!(torsion(&m, &conn).is_zero());
        assert!(metric_compatibility(&m, &conn, &g).is_zero());
    }

    #[test]
    fn degenerate_and_asymmetric_metrics_rejected() {
        let m = ManifoldModel::chart(vec!["x".into(), "y".into(), "z".into()], vec![]).unwrap();
        let r = RationalExpr::from_int;
        let deg = Tensor::bilinear(&[
            vec![r(1), r(1), r(0)],
            vec![r(1), r(1), r(0)],
            vec![r(0), r(0), r(1)],
        ]);
        assert_eq!(levi_civita(&m, &deg), Err(GeometryError::DegenerateMetric));
        let asym = Tensor::bilinear(&[
            vec![r(1), r(2), r(0)],
            vec![r(0), r(1), r(0)],
            vec![r(0), r(0), r(1)],
        ]);
        assert_eq!(levi_civita(&m, &asym), Err(GeometryError::AsymmetricMetric(0, 1)));
    }
}
