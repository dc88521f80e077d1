//! Manifold models: a coordinate chart, or a frame given by its bracket table.

use std::collections::HashMap;

use ppst_expr::{BigRational, DomainConstraint, RationalExpr};

use crate::error::GeometryError;
use crate::linalg;
use crate::tensor::vec::Vector;

/// Frame vectors expressed in the coordinate fields of a chart.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameRealization {
    pub coordinates: Vec<String>,
    pub constraints: Vec<DomainConstraint>,
    /// `vectors[a][i]` is the `d/dx^i` component of `e_a`.
    pub vectors: Vec<Vector>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ModelKind {
    /// Coordinate basis `d/dx^i` of a chart.
    Chart {
        coordinates: Vec<String>,
        constraints: Vec<DomainConstraint>,
    },
    /// Frame `e_a` with `[e_a, e_b] = sum_c brackets[a][b][c] e_c`.
    Frame {
        labels: Vec<String>,
        brackets: Vec<Vec<Vector>>,
        realization: Option<FrameRealization>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldModel {
    kind: ModelKind,
    sample_point: Option<HashMap<String, BigRational>>,
}

impl ManifoldModel {
    pub fn chart(
        coordinates: Vec<String>,
        constraints: Vec<DomainConstraint>,
    ) -> Result<Self, GeometryError> {
        check_odd(coordinates.len())?;
        check_names(&coordinates)?;
        Ok(ManifoldModel {
            kind: ModelKind::Chart {
                coordinates,
                constraints,
            },
            sample_point: None,
        })
    }

    /// Frame model from constant structure constants. Only brackets for
    /// `a < b` or `a > b` need to be listed; the table is completed by
    /// antisymmetry and conflicting entries are rejected.
    pub fn frame(
        labels: Vec<String>,
        brackets: &[((usize, usize), Vector)],
    ) -> Result<Self, GeometryError> {
        let dim = labels.len();
        check_odd(dim)?;
        check_names(&labels)?;
        let mut table: Vec<Vec<Option<Vector>>> = vec![vec![None; dim]; dim];
        for ((a, b), coeffs) in brackets {
            let (a, b) = (*a, *b);
            if a >= dim || b >= dim || coeffs.len() != dim {
                return Err(GeometryError::Shape(format!(
                    "bracket [{a},{b}] does not fit a {dim}-dimensional frame"
                )));
            }
            if let Some(c) = coeffs.iter().find(|c| !c.is_constant()) {
                return Err(GeometryError::NonConstantFrameData(c.to_string()));
            }
            if a == b {
                if coeffs.iter().any(|c| !c.is_zero()) {
                    return Err(GeometryError::BracketNotAntisymmetric(labels[a].clone(), labels[b].clone()));
                }
                continue;
            }
            let neg: Vector = coeffs.iter().map(|c| -c).collect();
            for (slot, val) in [((a, b), coeffs.clone()), ((b, a), neg)] {
                match &table[slot.0][slot.1] {
                    Some(existing) if *existing != val => {
                        return Err(GeometryError::BracketNotAntisymmetric(
                            labels[a].clone(),
                            labels[b].clone(),
                        ))
                    }
                    _ => table[slot.0][slot.1] = Some(val),
                }
            }
        }
        let brackets = table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|c| c.unwrap_or_else(|| vec![RationalExpr::zero(); dim]))
                    .collect()
            })
            .collect();
        Ok(ManifoldModel {
            kind: ModelKind::Frame {
                labels,
                brackets,
                realization: None,
            },
            sample_point: None,
        })
    }

    /// Frame realized by vector fields on a chart; brackets are computed.
    pub fn realized_frame(
        chart: &ManifoldModel,
        labels: Vec<String>,
        vectors: Vec<Vector>,
    ) -> Result<Self, GeometryError> {
        let ModelKind::Chart {
            coordinates,
            constraints,
        } = &chart.kind
        else {
            return Err(GeometryError::MixedModels(
                "a frame can only be realized on a chart".into(),
            ));
        };
        let dim = coordinates.len();
        if labels.len() != dim || vectors.iter().any(|v| v.len() != dim) || vectors.len() != dim {
            return Err(GeometryError::Shape("frame vectors must form a square matrix".into()));
        }
        check_names(&labels)?;
        // Columns of `frame` are the frame vectors in chart components.
        let frame: Vec<Vector> = (0..dim)
            .map(|i| (0..dim).map(|a| vectors[a][i].clone()).collect())
            .collect();
        let inverse = linalg::inverse(&frame).ok_or_else(|| {
            GeometryError::DegenerateFrame("frame vectors are linearly dependent".into())
        })?;
        let mut brackets = vec![vec![vec![RationalExpr::zero(); dim]; dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                if a == b {
                    continue;
                }
                let chart_bracket = crate::calculus::lie_bracket(chart, &vectors[a], &vectors[b])?;
                brackets[a][b] = (0..dim)
                    .map(|c| (0..dim).map(|i| &inverse[c][i] * &chart_bracket[i]).sum())
                    .collect();
            }
        }
        Ok(ManifoldModel {
            kind: ModelKind::Frame {
                labels,
                brackets,
                realization: Some(FrameRealization {
                    coordinates: coordinates.clone(),
                    constraints: constraints.clone(),
                    vectors,
                }),
            },
            sample_point: chart.sample_point.clone(),
        })
    }

    pub fn with_sample_point(mut self, point: HashMap<String, BigRational>) -> Result<Self, GeometryError> {
        for v in self.variables() {
            if !point.contains_key(&v) {
                return Err(GeometryError::SamplePoint(format!("no value for `{v}`")));
            }
        }
        for c in self.constraints() {
            if !c.holds_at(&point)? {
                return Err(GeometryError::SamplePoint(format!("violates `{c}`")));
            }
        }
        self.sample_point = Some(point);
        Ok(self)
    }

    pub fn kind(&self) -> &ModelKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            ModelKind::Chart { coordinates, .. } => coordinates.len(),
            ModelKind::Frame { labels, .. } => labels.len(),
        }
    }

    /// `n` in `dim = 2n + 1`.
    pub fn half_dim(&self) -> usize {
        self.dim() / 2
    }

    pub fn is_chart(&self) -> bool {
        matches!(self.kind, ModelKind::Chart { .. })
    }

    /// Labels of the basis vectors: `d_x` for chart fields, frame labels otherwise.
    pub fn basis_labels(&self) -> Vec<String> {
        match &self.kind {
            ModelKind::Chart { coordinates, .. } => {
                coordinates.iter().map(|c| format!("d_{c}")).collect()
            }
            ModelKind::Frame { labels, .. } => labels.clone(),
        }
    }

    /// Names that may appear in component expressions.
    pub fn variables(&self) -> Vec<String> {
        match &self.kind {
            ModelKind::Chart { coordinates, .. } => coordinates.clone(),
            ModelKind::Frame {
                realization: Some(r),
                ..
            } => r.coordinates.clone(),
            ModelKind::Frame { .. } => Vec::new(),
        }
    }

    pub fn constraints(&self) -> &[DomainConstraint] {
        match &self.kind {
            ModelKind::Chart { constraints, .. } => constraints,
            ModelKind::Frame {
                realization: Some(r),
                ..
            } => &r.constraints,
            ModelKind::Frame { .. } => &[],
        }
    }

    /// Directional derivative `E_a(f)` along basis vector `a`.
    pub fn derive(&self, a: usize, f: &RationalExpr) -> RationalExpr {
        if f.is_constant() {
            return RationalExpr::zero();
        }
        match &self.kind {
            ModelKind::Chart { coordinates, .. } => f.derivative(&coordinates[a]),
            ModelKind::Frame {
                realization: Some(r),
                ..
            } => r
                .coordinates
                .iter()
                .zip(&r.vectors[a])
                .filter(|(_, c)| !c.is_zero())
                .map(|(x, c)| c * f.derivative(x))
                .sum(),
            ModelKind::Frame { .. } => {
                debug_assert!(false, "non-constant component on an unrealized frame");
                RationalExpr::zero()
            }
        }
    }

    /// Coefficients of `[E_a, E_b]` in the model basis.
    pub fn bracket(&self, a: usize, b: usize) -> Vector {
        match &self.kind {
            ModelKind::Chart { coordinates, .. } => vec![RationalExpr::zero(); coordinates.len()],
            ModelKind::Frame { brackets, .. } => brackets[a][b].clone(),
        }
    }

    pub fn is_holonomic(&self) -> bool {
        match &self.kind {
            ModelKind::Chart { .. } => true,
            ModelKind::Frame { brackets, .. } => brackets
                .iter()
                .flatten()
                .all(|c| c.iter().all(RationalExpr::is_zero)),
        }
    }

    /// Rejects expressions the model cannot differentiate.
    pub fn admits(&self, e: &RationalExpr) -> Result<(), GeometryError> {
        let allowed = self.variables();
        for v in e.variables() {
            if !allowed.iter().any(|a| **a == *v) {
                return Err(if allowed.is_empty() {
                    GeometryError::NonConstantFrameData(e.to_string())
                } else {
                    GeometryError::Shape(format!("`{e}` uses unknown variable `{v}`"))
                });
            }
        }
        Ok(())
    }

    /// A rational point inside the domain: the user-supplied one, or the
    /// first of a few small candidates satisfying every constraint.
    pub fn sample_point(&self) -> Result<HashMap<String, BigRational>, GeometryError> {
        if let Some(p) = &self.sample_point {
            return Ok(p.clone());
        }
        let vars = self.variables();
        let pool: Vec<BigRational> = [(1, 1), (2, 1), (3, 1), (1, 2), (-1, 1), (5, 3), (7, 2)]
            .iter()
            .map(|&(n, d)| BigRational::new(n.into(), d.into()))
            .collect();
        for shift in 0..pool.len() {
            let point: HashMap<String, BigRational> = vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), pool[(i + shift) % pool.len()].clone()))
                .collect();
            let mut ok = true;
            for c in self.constraints() {
                ok &= c.holds_at(&point)?;
            }
            if ok {
                return Ok(point);
            }
        }
        Err(GeometryError::SamplePoint(
            "no default sample point satisfies the domain constraints".into(),
        ))
    }

    pub fn user_sample_point(&self) -> Option<&HashMap<String, BigRational>> {
        self.sample_point.as_ref()
    }
}

fn check_odd(dim: usize) -> Result<(), GeometryError> {
    if dim % 2 == 1 {
        Ok(())
    } else {
        Err(GeometryError::EvenDimension(dim))
    }
}

fn check_names(names: &[String]) -> Result<(), GeometryError> {
    for (i, n) in names.iter().enumerate() {
        if !ppst_expr::is_identifier(n) {
            return Err(GeometryError::Shape(format!("`{n}` is not a valid name")));
        }
        if names[..i].contains(n) {
            return Err(GeometryError::Shape(format!("duplicate name `{n}`")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> RationalExpr {
        RationalExpr::from_int(n)
    }

    #[test]
    fn bracket_table_completed_by_antisymmetry() {
        let m = ManifoldModel::frame(
            vec!["e1".into(), "e2".into(), "xi".into()],
            &[((0, 1), vec![r(0), r(0), r(4)])],
        )
        .unwrap();
        assert_eq!(m.bracket(0, 1), vec![r(0), r(0), r(4)]);
        assert_eq!(m.bracket(1, 0), vec![r(0), r(0), r(-4)]);
        assert_eq!(m.bracket(0, 2), vec![r(0), r(0), r(0)]);
    }

    #[test]
    fn conflicting_brackets_rejected() {
        let err = ManifoldModel::frame(
            vec!["a".into(), "b".into(), "c".into()],
            &[((0, 1), vec![r(1), r(0), r(0)]), ((1, 0), vec![r(1), r(0), r(0)])],
        );
        assert!(matches!(err, Err(GeometryError::BracketNotAntisymmetric(..))));
    }

    #[test]
    fn even_dimension_rejected() {
        assert!(matches!(
            ManifoldModel::chart(vec!["x".into(), "y".into()], vec![]),
            Err(GeometryError::EvenDimension(2))
        ));
    }

    #[test]
    fn default_sample_point_respects_constraints() {
        let z = RationalExpr::var("z");
        let c = DomainConstraint::nonzero(z - RationalExpr::one());
        let m = ManifoldModel::chart(vec!["x".into(), "y".into(), "z".into()], vec![c.clone()]).unwrap();
        let p = m.sample_point().unwrap();
        assert!(c.holds_at(&p).unwrap());
    }
}
