//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Variables are identified by name. A monomial stores `(name, exponent)`
//! pairs sorted by name with no zero exponents, so no shared variable
//! context is needed when combining polynomials.
//!
//! Terms are ordered graded-lexicographically: total degree first, then
//! lexicographic on exponents with variables compared in name order
//! (the alphabetically first variable is the most significant). The
//! leading term is the last entry of the term map.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Variable name.
pub type Var = Arc<str>;

/// A power product of variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(name: &Var, exp: u32) -> Self {
        if exp == 0 {
            Self::one()
        } else {
            Monomial(vec![(name.clone(), exp)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| *e).sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0
            .iter()
            .find(|(v, _)| &**v == var)
            .map_or(0, |(_, e)| *e)
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `self / other` if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let oe = other.0[j].1;
                j += 1;
                match e.cmp(&oe) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - oe)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Drops `var` from the monomial, returning its former exponent.
    fn split_off(&self, var: &str) -> (u32, Monomial) {
        let mut exp = 0;
        let rest = self
            .0
            .iter()
            .filter(|(v, e)| {
                if &**v == var {
                    exp = *e;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (exp, Monomial(rest))
    }

    fn lex_cmp(&self, other: &Monomial) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    // `self` has a variable `other` lacks at this rank.
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.lex_cmp(other))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial in named variables over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::one(), c);
        }
        Poly { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn var(name: &Var) -> Self {
        Self::term(BigRational::one(), Monomial::var(name, 1))
    }

    pub fn term(c: BigRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// Value of a constant polynomial.
    pub fn constant_value(&self) -> Option<BigRational> {
        if self.is_zero() {
            Some(BigRational::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.leading_term()
            .map_or_else(BigRational::zero, |(_, c)| c.clone())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Sorted, de-duplicated variables that occur.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.keys().map(|m| m.exponent(var)).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut out, rhs) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(mm, cc)| (mm.mul(m), cc * c)).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        Poly {
            terms: self.terms.iter().map(|(m, cc)| (m.clone(), cc * c)).collect(),
        }
    }

    pub fn pow(&self, mut exp: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn derivative(&self, var: &str) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(var);
            if e == 0 {
                continue;
            }
            let v: Var = Arc::from(var);
            let m2 = rest.mul(&Monomial::var(&v, e - 1));
            out.add_term(m2, c * BigRational::from_integer(BigInt::from(e)));
        }
        out
    }

    /// Evaluates with every occurring variable looked up through `value`.
    pub fn eval_with<E>(
        &self,
        mut value: impl FnMut(&str) -> Result<BigRational, E>,
    ) -> Result<BigRational, E> {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = value(v)?;
                t *= num_traits::pow(x, *e as usize);
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Coefficients with respect to `var`: `self = sum_k coeffs[k] * var^k`.
    pub fn coeffs_in(&self, var: &str) -> BTreeMap<u32, Poly> {
        let mut out: BTreeMap<u32, Poly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(var);
            out.entry(e).or_default().add_term(rest, c.clone());
        }
        out
    }

    fn from_coeffs(var: &Var, coeffs: &BTreeMap<u32, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (e, p) in coeffs {
            let m = Monomial::var(var, *e);
            for (mm, c) in &p.terms {
                out.add_term(mm.mul(&m), c.clone());
            }
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (lm, lc) = divisor.leading_term()?;
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        let mut rem = self.clone();
        let mut quot = Poly::zero();
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(lm)?;
            let qc = rc / lc;
            rem = rem.sub(&divisor.mul_term(&qm, &qc));
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// Scales to a monic polynomial (leading coefficient 1). Zero stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.recip()),
            _ => self.clone(),
        }
    }

    /// Greatest common divisor, normalized to be monic. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        if self.is_constant() || other.is_constant() {
            return Poly::one();
        }
        if self == other {
            return self.monic();
        }
        let vars_a = self.variables();
        let vars_b = other.variables();
        let main = match (vars_a.first(), vars_b.first()) {
            (Some(a), Some(b)) => a.min(b).clone(),
            _ => unreachable!("non-constant polynomials have variables"),
        };
        let ca = self.coeffs_in(&main);
        let cb = other.coeffs_in(&main);
        // gcd of all coefficients in `main` is the content, computed in fewer variables.
        let mut content = Poly::zero();
        for c in ca.values().chain(cb.values()) {
            content = content.gcd(c);
            if content.is_one() {
                break;
            }
        }
        let cont_a = content_of(&ca);
        let cont_b = content_of(&cb);
        let pa = self.div_exact(&cont_a).expect("content divides");
        let pb = other.div_exact(&cont_b).expect("content divides");
        let g = primitive_prs_gcd(&pa, &pb, &main);
        g.mul(&content).monic()
    }

    /// Exact square root when `self` is the square of a polynomial.
    ///
    /// The root is returned with a positive leading coefficient.
    pub fn sqrt_exact(&self) -> Option<Poly> {
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let (lm, lc) = self.leading_term()?;
        let root_c = rational_sqrt(lc)?;
        let mut root_m = Vec::with_capacity(lm.0.len());
        for (v, e) in &lm.0 {
            if e % 2 != 0 {
                return None;
            }
            root_m.push((v.clone(), e / 2));
        }
        let lead = Poly::term(root_c.clone(), Monomial(root_m.clone()));
        let lead_m = Monomial(root_m);
        let two_lc = root_c * BigRational::from_integer(BigInt::from(2));
        let mut root = lead;
        // Each step fixes the next term of the root from the leading term of the residual.
        loop {
            let rem = self.sub(&root.mul(&root));
            let Some((rm, rc)) = rem.leading_term() else {
                return Some(root);
            };
            let next_m = rm.div(&lead_m)?;
            if next_m >= lead_m {
                return None;
            }
            if let Some((smallest, _)) = root.terms.iter().next() {
                if next_m >= *smallest {
                    return None;
                }
            }
            root.add_term(next_m, rc / &two_lc);
        }
    }
}

fn content_of(coeffs: &BTreeMap<u32, Poly>) -> Poly {
    let mut g = Poly::zero();
    for c in coeffs.values() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(p: &Poly, var: &str) -> Poly {
    let cont = content_of(&p.coeffs_in(var));
    p.div_exact(&cont).expect("content divides").monic()
}

/// Primitive pseudo-remainder sequence in `var` for polynomials primitive in `var`.
fn primitive_prs_gcd(a: &Poly, b: &Poly, var: &Var) -> Poly {
    let (mut a, mut b) = if a.degree_in(var) >= b.degree_in(var) {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    };
    loop {
        if b.degree_in(var) == 0 {
            // b is primitive and free of `var`: a unit.
            return Poly::one();
        }
        let r = pseudo_remainder(&a, &b, var);
        if r.is_zero() {
            return b.monic();
        }
        a = b;
        b = primitive_part(&r, var);
    }
}

fn pseudo_remainder(a: &Poly, b: &Poly, var: &Var) -> Poly {
    let db = b.degree_in(var);
    let cb = b.coeffs_in(var);
    let lb = cb.get(&db).cloned().unwrap_or_default();
    let mut r = a.clone();
    loop {
        let dr = r.degree_in(var);
        if r.is_zero() || dr < db {
            return r;
        }
        let lr = r.coeffs_in(var).remove(&dr).unwrap_or_default();
        let mut shift = BTreeMap::new();
        shift.insert(dr - db, lr);
        let t = Poly::from_coeffs(var, &shift);
        r = r.mul(&lb).sub(&t.mul(b));
    }
}

fn rational_sqrt(c: &BigRational) -> Option<BigRational> {
    if c.is_negative() {
        return None;
    }
    let n = c.numer().sqrt();
    let d = c.denom().sqrt();
    if &(&n * &n) == c.numer() && &(&d * &d) == c.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub(crate) fn fmt_rational_factor(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("({}/{})", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                f.write_str(&fmt_rational_factor(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational_factor(&abs))?;
            }
        }
        Ok(())
    }
}
