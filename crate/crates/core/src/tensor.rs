//! Component arrays of tensor fields over a model basis.
//!
//! Components are stored row-major with all contravariant (upper) slots
//! first, then the covariant (lower) slots. A (1,1) tensor `T` is indexed
//! `[i, j]` with `T(E_j) = sum_i T[i, j] E_i`, so the matrix columns are
//! the images of the basis vectors.

use std::fmt;

use ppst_expr::RationalExpr;

/// Variance of one tensor slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Contravariant,
    Covariant,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor {
    dim: usize,
    upper: usize,
    lower: usize,
    comps: Vec<RationalExpr>,
}

impl Tensor {
    pub fn zeros(dim: usize, upper: usize, lower: usize) -> Self {
        let n = dim.pow((upper + lower) as u32);
        Tensor {
            dim,
            upper,
            lower,
            comps: vec![RationalExpr::zero(); n],
        }
    }

    /// Builds a tensor by evaluating `f` on every index tuple.
    pub fn from_fn(
        dim: usize,
        upper: usize,
        lower: usize,
        mut f: impl FnMut(&[usize]) -> RationalExpr,
    ) -> Self {
        let rank = upper + lower;
        let n = dim.pow(rank as u32);
        let mut comps = Vec::with_capacity(n);
        let mut idx = vec![0usize; rank];
        for flat in 0..n {
            unflatten(flat, dim, &mut idx);
            comps.push(f(&idx));
        }
        Tensor {
            dim,
            upper,
            lower,
            comps,
        }
    }

    pub fn vector(components: Vec<RationalExpr>) -> Self {
        Tensor {
            dim: components.len(),
            upper: 1,
            lower: 0,
            comps: components,
        }
    }

    pub fn covector(components: Vec<RationalExpr>) -> Self {
        Tensor {
            dim: components.len(),
            upper: 0,
            lower: 1,
            comps: components,
        }
    }

    pub fn scalar(value: RationalExpr) -> Self {
        Tensor {
            dim: 0,
            upper: 0,
            lower: 0,
            comps: vec![value],
        }
    }

    /// (1,1) tensor from a matrix whose column `j` is the image of `E_j`.
    pub fn endomorphism(rows: &[Vec<RationalExpr>]) -> Self {
        let dim = rows.len();
        Tensor::from_fn(dim, 1, 1, |ix| rows[ix[0]][ix[1]].clone())
    }

    /// (0,2) tensor from its Gram matrix.
    pub fn bilinear(rows: &[Vec<RationalExpr>]) -> Self {
        let dim = rows.len();
        Tensor::from_fn(dim, 0, 2, |ix| rows[ix[0]][ix[1]].clone())
    }

    pub fn identity(dim: usize) -> Self {
        Tensor::from_fn(dim, 1, 1, |ix| {
            if ix[0] == ix[1] {
                RationalExpr::one()
            } else {
                RationalExpr::zero()
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn valence(&self) -> (usize, usize) {
        (self.upper, self.lower)
    }

    pub fn rank(&self) -> usize {
        self.upper + self.lower
    }

    pub fn variances(&self) -> Vec<Variance> {
        std::iter::repeat(Variance::Contravariant)
            .take(self.upper)
            .chain(std::iter::repeat(Variance::Covariant).take(self.lower))
            .collect()
    }

    pub fn components(&self) -> &[RationalExpr] {
        &self.comps
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.rank());
        idx.iter().fold(0, |acc, &i| {
            debug_assert!(i < self.dim);
            acc * self.dim + i
        })
    }

    pub fn get(&self, idx: &[usize]) -> &RationalExpr {
        &self.comps[self.flat(idx)]
    }

    pub fn set(&mut self, idx: &[usize], value: RationalExpr) {
        let k = self.flat(idx);
        self.comps[k] = value;
    }

    /// Matrix view of a rank-2 tensor.
    pub fn to_matrix(&self) -> Vec<Vec<RationalExpr>> {
        assert_eq!(self.rank(), 2, "matrix view needs a rank-2 tensor");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(&[i, j]).clone()).collect())
            .collect()
    }

    /// Components of a rank-1 tensor.
    pub fn to_vec(&self) -> Vec<RationalExpr> {
        assert_eq!(self.rank(), 1, "vector view needs a rank-1 tensor");
        self.comps.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(RationalExpr::is_zero)
    }

    pub fn is_constant(&self) -> bool {
        self.comps.iter().all(RationalExpr::is_constant)
    }

    /// All index tuples with non-zero components, in storage order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (Vec<usize>, &RationalExpr)> + '_ {
        let rank = self.rank();
        let dim = self.dim;
        self.comps.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| {
            let mut idx = vec![0; rank];
            unflatten(k, dim, &mut idx);
            (idx, c)
        })
    }

    pub fn first_nonzero(&self) -> Option<(Vec<usize>, RationalExpr)> {
        self.nonzero_entries().next().map(|(i, c)| (i, c.clone()))
    }

    pub fn map(&self, f: impl Fn(&RationalExpr) -> RationalExpr) -> Tensor {
        Tensor {
            dim: self.dim,
            upper: self.upper,
            lower: self.lower,
            comps: self.comps.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Tensor, f: impl Fn(&RationalExpr, &RationalExpr) -> RationalExpr) -> Tensor {
        assert_eq!(
            (self.dim, self.upper, self.lower),
            (other.dim, other.upper, other.lower),
            "tensor shapes differ"
        );
        Tensor {
            dim: self.dim,
            upper: self.upper,
            lower: self.lower,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &RationalExpr) -> Tensor {
        self.map(|a| a * c)
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})[", self.upper, self.lower)?;
        for (k, c) in self.comps.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("]")
    }
}

fn unflatten(mut flat: usize, dim: usize, idx: &mut [usize]) {
    for slot in idx.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}

/// Iterates over all index tuples of length `rank` with entries below `dim`.
pub fn index_tuples(dim: usize, rank: usize) -> impl Iterator<Item = Vec<usize>> {
    let n = dim.pow(rank as u32);
    (0..n).map(move |flat| {
        let mut idx = vec![0; rank];
        unflatten(flat, dim, &mut idx);
        idx
    })
}

/// Plain component vectors and the contractions used throughout.
pub mod vec {
    use super::Tensor;
    use ppst_expr::RationalExpr;

    pub type Vector = Vec<RationalExpr>;

    pub fn basis(dim: usize, a: usize) -> Vector {
        (0..dim)
            .map(|i| if i == a { RationalExpr::one() } else { RationalExpr::zero() })
            .collect()
    }

    pub fn zero(dim: usize) -> Vector {
        vec![RationalExpr::zero(); dim]
    }

    pub fn add(u: &[RationalExpr], v: &[RationalExpr]) -> Vector {
        u.iter().zip(v).map(|(a, b)| a + b).collect()
    }

    pub fn sub(u: &[RationalExpr], v: &[RationalExpr]) -> Vector {
        u.iter().zip(v).map(|(a, b)| a - b).collect()
    }

    pub fn scale(c: &RationalExpr, v: &[RationalExpr]) -> Vector {
        v.iter().map(|a| c * a).collect()
    }

    pub fn is_zero(v: &[RationalExpr]) -> bool {
        v.iter().all(RationalExpr::is_zero)
    }

    /// `T(v)` for a (1,1) tensor.
    pub fn apply(t: &Tensor, v: &[RationalExpr]) -> Vector {
        let n = t.dim();
        (0..n)
            .map(|i| (0..n).map(|j| t.get(&[i, j]) * &v[j]).sum())
            .collect()
    }

    /// `omega(v)` for a 1-form.
    pub fn pair(omega: &Tensor, v: &[RationalExpr]) -> RationalExpr {
        omega.components().iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// `b(u, v)` for a (0,2) tensor.
    pub fn bilinear(b: &Tensor, u: &[RationalExpr], v: &[RationalExpr]) -> RationalExpr {
        let n = b.dim();
        let mut acc = RationalExpr::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            let row: RationalExpr = (0..n).map(|j| b.get(&[i, j]) * &v[j]).sum();
            acc = acc + &u[i] * row;
        }
        acc
    }

    /// The 1-form `b(u, .)`.
    pub fn lower(b: &Tensor, u: &[RationalExpr]) -> Vector {
        let n = b.dim();
        (0..n)
            .map(|j| (0..n).map(|i| &u[i] * b.get(&[i, j])).sum())
            .collect()
    }
}
