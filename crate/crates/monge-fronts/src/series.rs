//! Truncated power series in one and two variables.
//!
//! [`Series2`] is the computational substrate of the whole crate: a bivariate
//! Taylor polynomial in `(u, v)` truncated at a total degree `N`, stored as a
//! dense triangular coefficient array. Arithmetic between series of different
//! orders truncates to the smaller order, so a value of order `N` always
//! represents a germ known modulo degree `N + 1`.
//!
//! [`Series1`] holds univariate initial data and [`ComplexSeries1`] a
//! holomorphic germ `h(w)` through its real and imaginary coefficient parts.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{binomial, Backend, Scalar};

/// One of the two series variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    U,
    V,
}

/// Bivariate Taylor polynomial truncated at total degree `order`.
///
/// Only coefficients `c_{ij}` with `i + j <= order` are stored.
#[derive(Clone, PartialEq)]
pub struct Series2<K: Scalar> {
    order: usize,
    coeffs: Vec<K>,
}

fn tri_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

impl<K: Scalar> Series2<K> {
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + j <= self.order);
        i * (self.order + 1) - i * (i.saturating_sub(1)) / 2 + j
    }

    pub fn zero(order: usize) -> Self {
        Series2 {
            order,
            coeffs: vec![K::zero(); tri_len(order)],
        }
    }

    pub fn constant(c: K, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The coordinate series `u` or `v`.
    pub fn var(var: Var, order: usize) -> Self {
        match var {
            Var::U => Self::monomial(1, 0, K::one(), order),
            Var::V => Self::monomial(0, 1, K::one(), order),
        }
    }

    pub fn monomial(i: usize, j: usize, c: K, order: usize) -> Self {
        assert!(i + j <= order, "monomial degree exceeds order");
        let mut s = Self::zero(order);
        let at = s.idx(i, j);
        s.coeffs[at] = c;
        s
    }

    pub fn from_terms(order: usize, terms: &[(usize, usize, K)]) -> Self {
        let mut s = Self::zero(order);
        for (i, j, c) in terms {
            assert!(i + j <= order, "term degree exceeds order");
            let at = s.idx(*i, *j);
            s.coeffs[at] = c.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `u^i v^j`; zero beyond the stored triangle.
    pub fn coeff(&self, i: usize, j: usize) -> K {
        if i + j > self.order {
            K::zero()
        } else {
            self.coeffs[self.idx(i, j)].clone()
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, c: K) {
        assert!(i + j <= self.order, "coefficient outside triangle");
        let at = self.idx(i, j);
        self.coeffs[at] = c;
    }

    /// Iterates stored coefficients as `(i, j, &c)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &K)> {
        let order = self.order;
        (0..=order).flat_map(move |i| {
            (0..=order - i).map(move |j| (i, j, &self.coeffs[self.idx(i, j)]))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| c.magnitude())
            .fold(0.0, f64::max)
    }

    pub fn truncated(&self, order: usize) -> Self {
        let order = order.min(self.order);
        let mut out = Self::zero(order);
        for i in 0..=order {
            for j in 0..=order - i {
                out.set_coeff(i, j, self.coeff(i, j));
            }
        }
        out
    }

    pub fn to_float(&self) -> Series2<f64> {
        Series2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.to_f64()).collect(),
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        Series2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(K, K) -> K) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(order);
        for i in 0..=order {
            for j in 0..=order - i {
                out.set_coeff(i, j, f(self.coeff(i, j), other.coeff(i, j)));
            }
        }
        out
    }

    /// Product truncated to the smaller order.
    pub fn mul_series(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(order);
        for (i1, j1, c1) in self.iter() {
            if c1.is_zero() || i1 + j1 > order {
                continue;
            }
            for (i2, j2, c2) in other.iter() {
                let (i, j) = (i1 + i2, j1 + j2);
                if i + j > order || c2.is_zero() {
                    continue;
                }
                let at = out.idx(i, j);
                out.coeffs[at] = out.coeffs[at].clone() + c1.clone() * c2.clone();
            }
        }
        out
    }

    /// Partial derivative; drops the order by one.
    pub fn differentiate(&self, var: Var) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::ZeroOrder);
        }
        let order = self.order - 1;
        let mut out = Self::zero(order);
        for i in 0..=order {
            for j in 0..=order - i {
                let c = match var {
                    Var::U => self.coeff(i + 1, j) * K::from_i64((i + 1) as i64),
                    Var::V => self.coeff(i, j + 1) * K::from_i64((j + 1) as i64),
                };
                out.set_coeff(i, j, c);
            }
        }
        Ok(out)
    }

    /// Antiderivative from the origin; raises the order by one.
    pub fn integrate(&self, var: Var) -> Self {
        let order = self.order + 1;
        let mut out = Self::zero(order);
        for (i, j, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            match var {
                Var::U => {
                    let d = c.clone() / K::from_i64((i + 1) as i64);
                    out.set_coeff(i + 1, j, d);
                }
                Var::V => {
                    let d = c.clone() / K::from_i64((j + 1) as i64);
                    out.set_coeff(i, j + 1, d);
                }
            }
        }
        out
    }

    /// Taylor recentering: returns `s(u + u0, v + v0)` at the same order.
    pub fn compose_shift(&self, u0: &K, v0: &K) -> Self {
        let n = self.order;
        let mut upow = Vec::with_capacity(n + 1);
        let mut vpow = Vec::with_capacity(n + 1);
        upow.push(K::one());
        vpow.push(K::one());
        for k in 1..=n {
            upow.push(upow[k - 1].clone() * u0.clone());
            vpow.push(vpow[k - 1].clone() * v0.clone());
        }
        let mut out = Self::zero(n);
        for (i, j, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            for a in 0..=i {
                let bi: K = binomial(i, a);
                let cu = c.clone() * bi * upow[i - a].clone();
                for b in 0..=j {
                    let bj: K = binomial(j, b);
                    let term = cu.clone() * bj * vpow[j - b].clone();
                    let at = out.idx(a, b);
                    out.coeffs[at] = out.coeffs[at].clone() + term;
                }
            }
        }
        out
    }

    /// Substitution `s(a(u,v), b(u,v))` for inner series with zero constant
    /// term. The result order is the smallest of the three orders.
    pub fn compose(&self, a: &Self, b: &Self) -> Result<Self> {
        if !a.coeff(0, 0).is_zero() {
            return Err(Error::NonzeroConstantTerm {
                what: "first substituted series",
            });
        }
        if !b.coeff(0, 0).is_zero() {
            return Err(Error::NonzeroConstantTerm {
                what: "second substituted series",
            });
        }
        let order = self.order.min(a.order).min(b.order);
        let a = a.truncated(order);
        let b = b.truncated(order);
        let mut apow: Vec<Series2<K>> = vec![Series2::constant(K::one(), order)];
        let mut bpow: Vec<Series2<K>> = vec![Series2::constant(K::one(), order)];
        for k in 1..=order {
            apow.push(apow[k - 1].mul_series(&a));
            bpow.push(bpow[k - 1].mul_series(&b));
        }
        let mut out = Self::zero(order);
        for (i, j, c) in self.iter() {
            if c.is_zero() || i + j > order {
                continue;
            }
            out = &out + &apow[i].mul_series(&bpow[j]).scale(c);
        }
        Ok(out)
    }

    /// Horner evaluation, outer loop over powers of `v`.
    pub fn evaluate(&self, u: &K, v: &K) -> K {
        let mut acc = K::zero();
        for j in (0..=self.order).rev() {
            let mut row = K::zero();
            for i in (0..=self.order - j).rev() {
                row = row * u.clone() + self.coeff(i, j);
            }
            acc = acc * v.clone() + row;
        }
        acc
    }
}

/// Reconstructs `Z` with `dZ = P du + Q dv` and `Z(0,0) = 0`, integrating
/// along the axis path `(0,0) -> (u,0) -> (u,v)`. The 1-form must be closed;
/// closure is checked coefficientwise (exactly on the rational backend,
/// within `tol` on floats) and violations are rejected.
pub fn path_integrate<K: Scalar>(
    p: &Series2<K>,
    q: &Series2<K>,
    tol: f64,
) -> Result<Series2<K>> {
    let order = p.order().min(q.order());
    let p = p.truncated(order);
    let q = q.truncated(order);
    if order >= 1 {
        let closure = &p.differentiate(Var::V)? - &q.differentiate(Var::U)?;
        let worst = closure.max_abs();
        let closed = match K::BACKEND {
            Backend::Rational => closure.is_zero(),
            Backend::Float => worst <= tol,
        };
        if !closed {
            return Err(Error::NotClosed { max_abs: worst });
        }
    }
    // P restricted to the u-axis, integrated in u, plus Q integrated in v.
    let mut p_axis = Series2::zero(order);
    for i in 0..=order {
        p_axis.set_coeff(i, 0, p.coeff(i, 0));
    }
    Ok(&p_axis.integrate(Var::U) + &q.integrate(Var::V))
}

impl<K: Scalar> Add for &Series2<K> {
    type Output = Series2<K>;
    fn add(self, rhs: Self) -> Series2<K> {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl<K: Scalar> Sub for &Series2<K> {
    type Output = Series2<K>;
    fn sub(self, rhs: Self) -> Series2<K> {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl<K: Scalar> Mul for &Series2<K> {
    type Output = Series2<K>;
    fn mul(self, rhs: Self) -> Series2<K> {
        self.mul_series(rhs)
    }
}

impl<K: Scalar> Neg for &Series2<K> {
    type Output = Series2<K>;
    fn neg(self) -> Series2<K> {
        Series2 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl<K: Scalar> fmt::Debug for Series2<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series2[N={}]({})", self.order, self)
    }
}

impl<K: Scalar> fmt::Display for Series2<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, c) in self.iter() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, j) {
                (0, 0) => write!(f, "{c}")?,
                _ => {
                    write!(f, "({c})")?;
                    if i == 1 {
                        write!(f, "*u")?;
                    } else if i > 1 {
                        write!(f, "*u^{i}")?;
                    }
                    if j == 1 {
                        write!(f, "*v")?;
                    } else if j > 1 {
                        write!(f, "*v^{j}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct Series2Repr {
    order: usize,
    backend: Backend,
    coeffs: Vec<(usize, usize, Value)>,
}

impl<K: Scalar> Serialize for Series2<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .iter()
            .filter(|(_, _, c)| !c.is_zero())
            .map(|(i, j, c)| (i, j, c.coeff_to_json()))
            .collect();
        Series2Repr {
            order: self.order,
            backend: K::BACKEND,
            coeffs,
        }
        .serialize(serializer)
    }
}

impl<'de, K: Scalar> Deserialize<'de> for Series2<K> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = Series2Repr::deserialize(deserializer)?;
        if repr.backend != K::BACKEND {
            return Err(D::Error::custom(Error::BackendMismatch {
                expected: K::BACKEND,
                found: repr.backend,
            }));
        }
        let mut out = Series2::zero(repr.order);
        for (i, j, value) in &repr.coeffs {
            if i + j > repr.order {
                return Err(D::Error::custom(format!(
                    "coefficient ({i}, {j}) exceeds order {}",
                    repr.order
                )));
            }
            let c = K::coeff_from_json(value).map_err(D::Error::custom)?;
            out.set_coeff(*i, *j, c);
        }
        Ok(out)
    }
}

/// Univariate Taylor polynomial truncated at degree `order`.
#[derive(Clone, PartialEq)]
pub struct Series1<K: Scalar> {
    order: usize,
    coeffs: Vec<K>,
}

impl<K: Scalar> Series1<K> {
    pub fn zero(order: usize) -> Self {
        Series1 {
            order,
            coeffs: vec![K::zero(); order + 1],
        }
    }

    /// Builds from `coeffs[k]` = coefficient of `t^k`; the order is
    /// `coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<K>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least order 0");
        Series1 {
            order: coeffs.len() - 1,
            coeffs,
        }
    }

    pub fn from_terms(order: usize, terms: &[(usize, K)]) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in terms {
            assert!(*k <= order, "term degree exceeds order");
            s.coeffs[*k] = c.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> K {
        if k > self.order {
            K::zero()
        } else {
            self.coeffs[k].clone()
        }
    }

    pub fn set_coeff(&mut self, k: usize, c: K) {
        assert!(k <= self.order, "coefficient outside order");
        self.coeffs[k] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn derivative(&self) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::ZeroOrder);
        }
        let coeffs = (0..self.order)
            .map(|k| self.coeffs[k + 1].clone() * K::from_i64((k + 1) as i64))
            .collect();
        Ok(Series1 {
            order: self.order - 1,
            coeffs,
        })
    }

    pub fn evaluate(&self, t: &K) -> K {
        let mut acc = K::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t.clone() + c.clone();
        }
        acc
    }

    pub fn to_float(&self) -> Series1<f64> {
        Series1 {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.to_f64()).collect(),
        }
    }

    /// The composite `phi(cu * u + cv * v)` as a bivariate series of the
    /// given order.
    pub fn compose_linear(&self, cu: &K, cv: &K, order: usize) -> Series2<K> {
        let mut cupow = vec![K::one()];
        let mut cvpow = vec![K::one()];
        for k in 1..=order {
            cupow.push(cupow[k - 1].clone() * cu.clone());
            cvpow.push(cvpow[k - 1].clone() * cv.clone());
        }
        let mut out = Series2::zero(order);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() || k > order {
                continue;
            }
            for a in 0..=k {
                let b = k - a;
                let w: K = binomial(k, a);
                let term = c.clone() * w * cupow[a].clone() * cvpow[b].clone();
                let prev = out.coeff(a, b);
                out.set_coeff(a, b, prev + term);
            }
        }
        out
    }

    /// Embeds the series as a bivariate series in the chosen variable.
    pub fn in_var(&self, var: Var, order: usize) -> Series2<K> {
        match var {
            Var::U => self.compose_linear(&K::one(), &K::zero(), order),
            Var::V => self.compose_linear(&K::zero(), &K::one(), order),
        }
    }
}

impl<K: Scalar> Add for &Series1<K> {
    type Output = Series1<K>;
    fn add(self, rhs: Self) -> Series1<K> {
        let order = self.order.min(rhs.order);
        Series1 {
            order,
            coeffs: (0..=order).map(|k| self.coeff(k) + rhs.coeff(k)).collect(),
        }
    }
}

impl<K: Scalar> fmt::Debug for Series1<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series1[N={}]{:?}", self.order, self.coeffs)
    }
}

#[derive(Serialize, Deserialize)]
struct Series1Repr {
    order: usize,
    backend: Backend,
    coeffs: Vec<(usize, Value)>,
}

impl<K: Scalar> Serialize for Series1<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (k, c.coeff_to_json()))
            .collect();
        Series1Repr {
            order: self.order,
            backend: K::BACKEND,
            coeffs,
        }
        .serialize(serializer)
    }
}

impl<'de, K: Scalar> Deserialize<'de> for Series1<K> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = Series1Repr::deserialize(deserializer)?;
        if repr.backend != K::BACKEND {
            return Err(D::Error::custom(Error::BackendMismatch {
                expected: K::BACKEND,
                found: repr.backend,
            }));
        }
        let mut out = Series1::zero(repr.order);
        for (k, value) in &repr.coeffs {
            if *k > repr.order {
                return Err(D::Error::custom(format!(
                    "coefficient {k} exceeds order {}",
                    repr.order
                )));
            }
            out.set_coeff(*k, K::coeff_from_json(value).map_err(D::Error::custom)?);
        }
        Ok(out)
    }
}

/// A holomorphic germ `h(w) = sum (re_k + i im_k) w^k` through its real and
/// imaginary coefficient series. Both parts share order and backend.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexSeries1<K: Scalar> {
    re: Series1<K>,
    im: Series1<K>,
}

impl<K: Scalar> ComplexSeries1<K> {
    pub fn new(re: Series1<K>, im: Series1<K>) -> Result<Self> {
        if re.order() != im.order() {
            return Err(Error::OrderMismatch {
                left: re.order(),
                right: im.order(),
            });
        }
        Ok(ComplexSeries1 { re, im })
    }

    pub fn re(&self) -> &Series1<K> {
        &self.re
    }

    pub fn im(&self) -> &Series1<K> {
        &self.im
    }

    pub fn order(&self) -> usize {
        self.re.order()
    }

    pub fn to_float(&self) -> ComplexSeries1<f64> {
        ComplexSeries1 {
            re: self.re.to_float(),
            im: self.im.to_float(),
        }
    }

    /// Evaluates `h(u + i v)` as a pair of bivariate series
    /// `(Re h, Im h)` of the given order.
    pub fn realize(&self, order: usize) -> (Series2<K>, Series2<K>) {
        let mut re_out = Series2::zero(order);
        let mut im_out = Series2::zero(order);
        // Running power w^k of w = u + i v.
        let mut wr = Series2::constant(K::one(), order);
        let mut wi = Series2::zero(order);
        let u = Series2::var(Var::U, order);
        let v = Series2::var(Var::V, order);
        for k in 0..=self.order().min(order) {
            let (a, b) = (self.re.coeff(k), self.im.coeff(k));
            if !a.is_zero() || !b.is_zero() {
                re_out = &re_out + &(&wr.scale(&a) - &wi.scale(&b));
                im_out = &im_out + &(&wi.scale(&a) + &wr.scale(&b));
            }
            let next_r = &wr.mul_series(&u) - &wi.mul_series(&v);
            let next_i = &wr.mul_series(&v) + &wi.mul_series(&u);
            wr = next_r;
            wi = next_i;
        }
        (re_out, im_out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use num_traits::Zero;
    use proptest::prelude::*;

    fn s2(order: usize, terms: &[(usize, usize, i64, i64)]) -> Series2<Rational> {
        let terms: Vec<_> = terms
            .iter()
            .map(|&(i, j, n, d)| (i, j, rat(n, d)))
            .collect();
        Series2::from_terms(order, &terms)
    }

    #[test]
    fn difference_of_squares_at_order_two() {
        let one_plus_u = s2(2, &[(0, 0, 1, 1), (1, 0, 1, 1)]);
        let one_minus_u = s2(2, &[(0, 0, 1, 1), (1, 0, -1, 1)]);
        let expect = s2(2, &[(0, 0, 1, 1), (2, 0, -1, 1)]);
        assert_eq!(one_plus_u.mul_series(&one_minus_u), expect);
    }

    #[test]
    fn binomial_square() {
        let upv = s2(2, &[(1, 0, 1, 1), (0, 1, 1, 1)]);
        let sq = upv.mul_series(&upv);
        let expect = s2(2, &[(2, 0, 1, 1), (1, 1, 2, 1), (0, 2, 1, 1)]);
        assert_eq!(sq, expect);
    }

    #[test]
    fn cube_truncates_to_zero_at_order_two() {
        let upv = s2(2, &[(1, 0, 1, 1), (0, 1, 1, 1)]);
        let cube = upv.mul_series(&upv).mul_series(&upv);
        assert!(cube.is_zero());
    }

    #[test]
    fn derivative_of_2uv_in_v() {
        let a = s2(3, &[(1, 1, 2, 1)]);
        let d = a.differentiate(Var::V).unwrap();
        assert_eq!(d, s2(2, &[(1, 0, 2, 1)]));
    }

    #[test]
    fn derivative_of_z_component_in_u() {
        // d/du (u^3/3 + u v^2) = u^2 + v^2
        let a = s2(3, &[(3, 0, 1, 3), (1, 2, 1, 1)]);
        let d = a.differentiate(Var::U).unwrap();
        assert_eq!(d, s2(2, &[(2, 0, 1, 1), (0, 2, 1, 1)]));
    }

    #[test]
    fn derivative_of_swallowtail_y() {
        // d/dv (v^3 + uv) = 3 v^2 + u
        let a = s2(3, &[(0, 3, 1, 1), (1, 1, 1, 1)]);
        let d = a.differentiate(Var::V).unwrap();
        assert_eq!(d, s2(2, &[(0, 2, 3, 1), (1, 0, 1, 1)]));
    }

    #[test]
    fn derivative_of_order_zero_fails() {
        let a = Series2::<Rational>::constant(rat(1, 1), 0);
        assert!(matches!(a.differentiate(Var::U), Err(Error::ZeroOrder)));
    }

    #[test]
    fn shift_v_squared() {
        let a = s2(2, &[(0, 2, 1, 1)]);
        let shifted = a.compose_shift(&rat(0, 1), &rat(1, 1));
        let expect = s2(2, &[(0, 0, 1, 1), (0, 1, 2, 1), (0, 2, 1, 1)]);
        assert_eq!(shifted, expect);
    }

    #[test]
    fn shift_linear() {
        let a = s2(3, &[(1, 0, 1, 1)]);
        let shifted = a.compose_shift(&rat(5, 7), &rat(-2, 3));
        let expect = s2(3, &[(0, 0, 5, 7), (1, 0, 1, 1)]);
        assert_eq!(shifted, expect);
    }

    #[test]
    fn swallowtail_locus_stays_on_locus_under_shift() {
        // Delta = 3 v^2 + u vanishes along (u, v) = (-3 t^2, t); recentering
        // at any such point must leave a zero constant term.
        let delta = s2(4, &[(0, 2, 3, 1), (1, 0, 1, 1)]);
        for (tn, td) in [(1i64, 2i64), (-2, 3), (7, 5), (0, 1)] {
            let t = rat(tn, td);
            let u0 = rat(-3, 1) * t.clone() * t.clone();
            let shifted = delta.compose_shift(&u0, &t);
            assert!(shifted.coeff(0, 0).is_zero(), "t = {tn}/{td}");
        }
    }

    #[test]
    fn path_integral_recovers_printed_z() {
        // P = u^2 + v^2, Q = 2uv integrates to u^3/3 + u v^2.
        let p = s2(2, &[(2, 0, 1, 1), (0, 2, 1, 1)]);
        let q = s2(2, &[(1, 1, 2, 1)]);
        let z = path_integrate(&p, &q, 1e-9).unwrap();
        assert_eq!(z, s2(3, &[(3, 0, 1, 3), (1, 2, 1, 1)]));
    }

    #[test]
    fn path_integral_of_zero() {
        let zero = Series2::<Rational>::zero(3);
        let z = path_integrate(&zero, &zero, 1e-9).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn path_integral_wave_expansion() {
        // From phi = t^2, psi = 0: P = -(u+v)^2 + 2v(u+v), Q = 2v(u+v),
        // giving z = (-u^3 + 3uv^2 + 2v^3) / 3.
        let p = s2(
            2,
            &[(2, 0, -1, 1), (0, 2, 1, 1)], // -(u+v)^2 + 2v(u+v) = -u^2 + v^2
        );
        let q = s2(2, &[(1, 1, 2, 1), (0, 2, 2, 1)]);
        let z = path_integrate(&p, &q, 1e-9).unwrap();
        let expect = s2(3, &[(3, 0, -1, 3), (1, 2, 1, 1), (0, 3, 2, 3)]);
        assert_eq!(z, expect);
    }

    #[test]
    fn path_integral_rejects_non_closed_forms() {
        // P = v, Q = -u has P_v - Q_u = 2.
        let p = s2(2, &[(0, 1, 1, 1)]);
        let q = s2(2, &[(1, 0, -1, 1)]);
        match path_integrate(&p, &q, 1e-9) {
            Err(Error::NotClosed { max_abs }) => assert!(max_abs > 1.0),
            other => panic!("expected NotClosed, got {other:?}"),
        }
    }

    #[test]
    fn holomorphic_square_realizes_to_known_parts() {
        // h = w^2: Re = u^2 - v^2, Im = 2uv.
        let h = ComplexSeries1::new(
            Series1::from_terms(2, &[(2, rat(1, 1))]),
            Series1::zero(2),
        )
        .unwrap();
        let (re, im) = h.realize(4);
        assert_eq!(re, s2(4, &[(2, 0, 1, 1), (0, 2, -1, 1)]));
        assert_eq!(im, s2(4, &[(1, 1, 2, 1)]));
    }

    #[test]
    fn series2_json_round_trip() {
        let a = s2(3, &[(0, 0, 1, 2), (2, 1, -4, 3)]);
        let json = serde_json::to_string(&a).unwrap();
        assert!(json.contains("\"backend\":\"rational\""));
        let b: Series2<Rational> = serde_json::from_str(&json).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn series2_json_backend_mismatch() {
        let a = s2(2, &[(1, 0, 1, 2)]);
        let json = serde_json::to_string(&a).unwrap();
        let b: std::result::Result<Series2<f64>, _> = serde_json::from_str(&json);
        assert!(b.is_err());
    }

    #[test]
    fn compose_linear_expands_binomially() {
        // phi(t) = t^2 evaluated at t = u + v.
        let phi = Series1::from_terms(2, &[(2, rat(1, 1))]);
        let got = phi.compose_linear(&rat(1, 1), &rat(1, 1), 4);
        assert_eq!(got, s2(4, &[(2, 0, 1, 1), (1, 1, 2, 1), (0, 2, 1, 1)]));
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-40i64..=40, 1i64..=6).prop_map(|(n, d)| rat(n, d))
    }

    fn rational_series(order: usize) -> impl Strategy<Value = Series2<Rational>> {
        proptest::collection::vec(small_rational(), tri_len(order)).prop_map(move |coeffs| {
            Series2 { order, coeffs }
        })
    }

    proptest! {
        #[test]
        fn ring_identities_hold_exactly(
            a in rational_series(8),
            b in rational_series(8),
            c in rational_series(8),
        ) {
            let left = a.mul_series(&b.mul_series(&c));
            let right = a.mul_series(&b).mul_series(&c);
            prop_assert_eq!(left, right);
            let distl = a.mul_series(&(&b + &c));
            let distr = &a.mul_series(&b) + &a.mul_series(&c);
            prop_assert_eq!(distl, distr);
            prop_assert_eq!(a.mul_series(&b), b.mul_series(&a));
        }

        #[test]
        fn derivatives_recover_path_integral_inputs(
            zsrc in rational_series(8),
        ) {
            // Build a closed pair from an arbitrary potential.
            let p = zsrc.differentiate(Var::U).unwrap();
            let q = zsrc.differentiate(Var::V).unwrap();
            let z = path_integrate(&p, &q, 1e-9).unwrap();
            let pu = z.differentiate(Var::U).unwrap();
            let qv = z.differentiate(Var::V).unwrap();
            prop_assert_eq!(pu.truncated(6), p.truncated(6));
            prop_assert_eq!(qv.truncated(6), q.truncated(6));
        }

        #[test]
        fn zero_shift_is_identity(a in rational_series(6)) {
            prop_assert_eq!(a.compose_shift(&rat(0, 1), &rat(0, 1)), a);
        }

        #[test]
        fn shifts_compose_additively(
            a in rational_series(6),
            u1 in (-5i64..=5, 1i64..=3), v1 in (-5i64..=5, 1i64..=3),
            u2 in (-5i64..=5, 1i64..=3), v2 in (-5i64..=5, 1i64..=3),
        ) {
            let (u1, v1) = (rat(u1.0, u1.1), rat(v1.0, v1.1));
            let (u2, v2) = (rat(u2.0, u2.1), rat(v2.0, v2.1));
            let twice = a
                .compose_shift(&u1, &v1)
                .compose_shift(&u2, &v2);
            let direct = a.compose_shift(&(u1 + u2), &(v1 + v2));
            prop_assert_eq!(twice, direct);
        }

        #[test]
        fn evaluation_matches_naive_sum(
            a in rational_series(5),
            pt in ((-9i64..=9, 1i64..=4), (-9i64..=9, 1i64..=4)),
        ) {
            let (u, v) = (rat(pt.0.0, pt.0.1), rat(pt.1.0, pt.1.1));
            let mut naive = rat(0, 1);
            for (i, j, c) in a.iter() {
                let mut term = c.clone();
                for _ in 0..i { term = term * u.clone(); }
                for _ in 0..j { term = term * v.clone(); }
                naive = naive + term;
            }
            prop_assert_eq!(a.evaluate(&u, &v), naive);
        }
    }
}
