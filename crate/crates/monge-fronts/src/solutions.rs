//! Construction of geometric-solution jets for each equation family.
//!
//! A [`LegendrianJet`] is a five-component series map `(x, y, z, p, q)` on
//! the `(u, v)` parameter plane. Every constructor here produces jets in the
//! adapted chart `x = u`, `q = v` and asserts the contact identity
//! `f*(dz - p dx - q dy) = 0` coefficientwise before returning, together
//! with the 2-form identity of the equation it solves:
//!
//! * `Hess = 1`  — Cauchy-Riemann data `h = p + i y` holomorphic in `u + i v`;
//! * `Hess = -1` — d'Alembert data `y = phi(u+v) + psi(u-v)`;
//! * `K = c`     — Cauchy-Kovalevskaya prolongation of
//!   `Z_uu + c (1 + Z_u^2 + v^2)^2 Z_vv = 0` in the partial-Legendre chart;
//! * `Hess = 0`  — developable data `(phi(v), psi(v))` with `p_u = 0`.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};
use crate::series::{path_integrate, ComplexSeries1, Series1, Series2, Var};

/// Absolute tolerance for identity checks on the float backend. The rational
/// backend always checks exact equality.
pub const IDENTITY_TOL: f64 = 1e-9;

/// Chart normalization of a jet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Chart {
    /// `x = u` and `q = v` hold exactly.
    #[serde(rename = "adapted")]
    Adapted,
    #[serde(rename = "general")]
    General,
}

/// Which Monge-Ampere equation a system encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EquationFamily {
    /// `Hess = c`: omega = c dx^dy - dp^dq.
    #[serde(rename = "hess")]
    Hess,
    /// `K = c` in the chart at the base point:
    /// omega = c (1 + p^2 + q^2)^2 dx^dy - dp^dq.
    #[serde(rename = "gauss")]
    Gauss,
}

/// A Monge-Ampere system: the equation family plus its constant.
#[derive(Debug, Clone, PartialEq)]
pub struct MongeAmpereSystem<K: Scalar> {
    pub family: EquationFamily,
    pub c: K,
}

impl<K: Scalar> MongeAmpereSystem<K> {
    pub fn hess(c: K) -> Self {
        MongeAmpereSystem {
            family: EquationFamily::Hess,
            c,
        }
    }

    pub fn gauss(c: K) -> Self {
        MongeAmpereSystem {
            family: EquationFamily::Gauss,
            c,
        }
    }
}

/// A five-component series map `(x, y, z, p, q)` representing a
/// geometric-solution germ (or a deliberately non-Legendrian test map).
#[derive(Debug, Clone, PartialEq)]
pub struct LegendrianJet<K: Scalar> {
    x: Series2<K>,
    y: Series2<K>,
    z: Series2<K>,
    p: Series2<K>,
    q: Series2<K>,
    chart: Chart,
}

impl<K: Scalar> LegendrianJet<K> {
    /// Assembles a jet from raw components, truncating everything to the
    /// smallest order. No contact check is performed here; the named
    /// constructors assert their identities and `verify` reports on
    /// everything else.
    pub fn from_components(
        x: Series2<K>,
        y: Series2<K>,
        z: Series2<K>,
        p: Series2<K>,
        q: Series2<K>,
    ) -> Self {
        let order = x
            .order()
            .min(y.order())
            .min(z.order())
            .min(p.order())
            .min(q.order());
        let x = x.truncated(order);
        let y = y.truncated(order);
        let z = z.truncated(order);
        let p = p.truncated(order);
        let q = q.truncated(order);
        let chart = if x == Series2::var(Var::U, order) && q == Series2::var(Var::V, order) {
            Chart::Adapted
        } else {
            Chart::General
        };
        LegendrianJet { x, y, z, p, q, chart }
    }

    pub fn x(&self) -> &Series2<K> {
        &self.x
    }
    pub fn y(&self) -> &Series2<K> {
        &self.y
    }
    pub fn z(&self) -> &Series2<K> {
        &self.z
    }
    pub fn p(&self) -> &Series2<K> {
        &self.p
    }
    pub fn q(&self) -> &Series2<K> {
        &self.q
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn order(&self) -> usize {
        self.x.order()
    }

    pub fn components(&self) -> [&Series2<K>; 5] {
        [&self.x, &self.y, &self.z, &self.p, &self.q]
    }

    pub fn to_float(&self) -> LegendrianJet<f64> {
        LegendrianJet {
            x: self.x.to_float(),
            y: self.y.to_float(),
            z: self.z.to_float(),
            p: self.p.to_float(),
            q: self.q.to_float(),
            chart: self.chart,
        }
    }

    /// Recenters the germ at `(u0, v0)` and translates the image back to the
    /// origin of the contact space. The translation is the contact one
    /// (the `z` component absorbs `p0 x + q0 y`), so `f*theta` is preserved
    /// exactly; the adapted chart survives recentering.
    pub fn recenter(&self, u0: &K, v0: &K) -> Self {
        let shift = |s: &Series2<K>| {
            let mut moved = s.compose_shift(u0, v0);
            moved.set_coeff(0, 0, K::zero());
            moved
        };
        let p0 = self.p.evaluate(u0, v0);
        let q0 = self.q.evaluate(u0, v0);
        let x = shift(&self.x);
        let y = shift(&self.y);
        let z = &(&shift(&self.z) - &x.scale(&p0)) - &y.scale(&q0);
        LegendrianJet {
            x,
            y,
            z,
            p: shift(&self.p),
            q: shift(&self.q),
            chart: self.chart,
        }
    }

    /// Pullback of the contact form `dz - p dx - q dy` as its `du` and `dv`
    /// coefficient series.
    pub fn theta_pullback(&self) -> Result<(Series2<K>, Series2<K>)> {
        let du = &(&self.z.differentiate(Var::U)?
            - &self.p.mul_series(&self.x.differentiate(Var::U)?))
            - &self.q.mul_series(&self.y.differentiate(Var::U)?);
        let dv = &(&self.z.differentiate(Var::V)?
            - &self.p.mul_series(&self.x.differentiate(Var::V)?))
            - &self.q.mul_series(&self.y.differentiate(Var::V)?);
        Ok((du, dv))
    }

    /// `du^dv` coefficient of the pullback of `da ^ db` for two components.
    pub fn wedge_pullback(a: &Series2<K>, b: &Series2<K>) -> Result<Series2<K>> {
        let au = a.differentiate(Var::U)?;
        let av = a.differentiate(Var::V)?;
        let bu = b.differentiate(Var::U)?;
        let bv = b.differentiate(Var::V)?;
        Ok(&au.mul_series(&bv) - &av.mul_series(&bu))
    }

    /// `du^dv` coefficient of `f*omega` for the given system.
    pub fn omega_pullback(&self, sys: &MongeAmpereSystem<K>) -> Result<Series2<K>> {
        let dxdy = Self::wedge_pullback(&self.x, &self.y)?;
        let dpdq = Self::wedge_pullback(&self.p, &self.q)?;
        match sys.family {
            EquationFamily::Hess => Ok(&dxdy.scale(&sys.c) - &dpdq),
            EquationFamily::Gauss => {
                let one = Series2::constant(K::one(), self.order());
                let w = &(&one + &self.p.mul_series(&self.p)) + &self.q.mul_series(&self.q);
                let w2 = w.mul_series(&w);
                Ok(&w2.mul_series(&dxdy).scale(&sys.c) - &dpdq)
            }
        }
    }

    /// Rank of the differential of the jet itself at the origin.
    pub fn differential_rank_at_origin(&self) -> Result<usize> {
        let mut rows: Vec<(f64, f64)> = Vec::with_capacity(5);
        for comp in self.components() {
            let cu = comp.differentiate(Var::U)?.coeff(0, 0).to_f64();
            let cv = comp.differentiate(Var::V)?.coeff(0, 0).to_f64();
            rows.push((cu, cv));
        }
        let tol = IDENTITY_TOL;
        let any_nonzero = rows.iter().any(|(a, b)| a.abs() > tol || b.abs() > tol);
        if !any_nonzero {
            return Ok(0);
        }
        let full = rows.iter().enumerate().any(|(i, (a1, b1))| {
            rows[i + 1..]
                .iter()
                .any(|(a2, b2)| (a1 * b2 - b1 * a2).abs() > tol)
        });
        Ok(if full { 2 } else { 1 })
    }
}

fn check_identity<K: Scalar>(series: &Series2<K>, what: &str) {
    let ok = match K::BACKEND {
        Backend::Rational => series.is_zero(),
        Backend::Float => series.max_abs() <= IDENTITY_TOL,
    };
    assert!(
        ok,
        "construction identity violated: {what} has residual {:e}",
        series.max_abs()
    );
}

fn assert_contact<K: Scalar>(jet: &LegendrianJet<K>, ctx: &str) {
    let (du, dv) = jet
        .theta_pullback()
        .expect("jet order too small for a contact check");
    check_identity(&du, &format!("{ctx}: theta du-component"));
    check_identity(&dv, &format!("{ctx}: theta dv-component"));
}

fn assert_omega<K: Scalar>(jet: &LegendrianJet<K>, sys: &MongeAmpereSystem<K>, ctx: &str) {
    let omega = jet
        .omega_pullback(sys)
        .expect("jet order too small for an omega check");
    check_identity(&omega, &format!("{ctx}: omega pullback"));
}

fn require_zero_constant<K: Scalar>(s: &Series1<K>, what: &'static str) -> Result<()> {
    if s.coeff(0).is_zero() {
        Ok(())
    } else {
        Err(Error::NonzeroConstantTerm { what })
    }
}

/// Geometric solution of `Hess = 1` from a holomorphic germ `h = p + i y`
/// of `u + i v`: sets `x = u`, `q = v` and recovers `z` from the line
/// integral of `p du + q dy`.
pub fn build_hess_positive<K: Scalar>(
    h: &ComplexSeries1<K>,
    order: usize,
) -> Result<LegendrianJet<K>> {
    require_zero_constant(h.re(), "Re h")?;
    require_zero_constant(h.im(), "Im h")?;
    let (p, y) = h.realize(order);
    let x = Series2::var(Var::U, order);
    let q = Series2::var(Var::V, order);
    let v = q.clone();
    let big_p = &p + &v.mul_series(&y.differentiate(Var::U)?);
    let big_q = v.mul_series(&y.differentiate(Var::V)?);
    let z = path_integrate(&big_p, &big_q, IDENTITY_TOL)?;
    let jet = LegendrianJet::from_components(x, y, z, p, q);
    assert_contact(&jet, "build_hess_positive");
    assert_omega(
        &jet,
        &MongeAmpereSystem::hess(K::one()),
        "build_hess_positive",
    );
    Ok(jet)
}

/// Geometric solution of `Hess = -1` from d'Alembert data:
/// `y = phi(u+v) + psi(u-v)`, `p = -phi(u+v) + psi(u-v)`.
pub fn build_hess_negative<K: Scalar>(
    phi: &Series1<K>,
    psi: &Series1<K>,
    order: usize,
) -> Result<LegendrianJet<K>> {
    require_zero_constant(phi, "phi")?;
    require_zero_constant(psi, "psi")?;
    let one = K::one();
    let phi_upv = phi.compose_linear(&one, &one, order);
    let psi_umv = psi.compose_linear(&one, &(-K::one()), order);
    let y = &phi_upv + &psi_umv;
    let p = &psi_umv - &phi_upv;
    let x = Series2::var(Var::U, order);
    let q = Series2::var(Var::V, order);
    let v = q.clone();
    let big_p = &p + &v.mul_series(&y.differentiate(Var::U)?);
    let big_q = v.mul_series(&y.differentiate(Var::V)?);
    let z = path_integrate(&big_p, &big_q, IDENTITY_TOL)?;
    let jet = LegendrianJet::from_components(x, y, z, p, q);
    assert_contact(&jet, "build_hess_negative");
    assert_omega(
        &jet,
        &MongeAmpereSystem::hess(-K::one()),
        "build_hess_negative",
    );
    Ok(jet)
}

/// Formal solution of `Z_uu + c (1 + Z_u^2 + v^2)^2 Z_vv = 0` with initial
/// data `Z(0, v) = z0(v)`, `Z_u(0, v) = z1(v)`, by prolongation: each
/// u-column of degree `k + 2` is solved from the `u^k` column of the
/// equation. The recursion divides only by the integers `(k+1)(k+2)`.
pub fn solve_gauss_ck<K: Scalar>(
    c: &K,
    z0: &Series1<K>,
    z1: &Series1<K>,
    order: usize,
) -> Result<Series2<K>> {
    if c.is_zero() {
        return Err(Error::ZeroGaussCurvature);
    }
    require_zero_constant(z0, "Z(0, v)")?;
    require_zero_constant(z1, "Z_u(0, v)")?;
    if !z0.coeff(1).is_zero() {
        return Err(Error::NonzeroLinearTerm { what: "Z(0, v)" });
    }
    assert!(order >= 2, "the prolongation needs order >= 2");

    let mut z = Series2::zero(order);
    for j in 0..=order {
        z.set_coeff(0, j, z0.coeff(j));
    }
    for j in 0..order {
        z.set_coeff(1, j, z1.coeff(j));
    }

    for k in 0..=order - 2 {
        // The u^k column of (1 + Z_u^2 + v^2)^2 Z_vv depends only on columns
        // of Z up to k + 1, which are already determined.
        let nonlinear = gauss_nonlinear_term(&z)?;
        let scale = K::from_i64(((k + 1) * (k + 2)) as i64);
        for j in 0..=order - k - 2 {
            let coeff = -(c.clone() * nonlinear.coeff(k, j)) / scale.clone();
            z.set_coeff(k + 2, j, coeff);
        }
    }

    let residual = &z.differentiate(Var::U)?.differentiate(Var::U)?
        + &gauss_nonlinear_term(&z)?.scale(c);
    check_identity(&residual, "solve_gauss_ck: prolongation residual");
    Ok(z)
}

/// `(1 + Z_u^2 + v^2)^2 Z_vv` at order `N - 2`.
fn gauss_nonlinear_term<K: Scalar>(z: &Series2<K>) -> Result<Series2<K>> {
    let zu = z.differentiate(Var::U)?;
    let zvv = z.differentiate(Var::V)?.differentiate(Var::V)?;
    let order = z.order();
    let v = Series2::var(Var::V, order);
    let w = &(&Series2::constant(K::one(), order) + &zu.mul_series(&zu)) + &v.mul_series(&v);
    Ok(w.mul_series(&w).mul_series(&zvv))
}

/// Inverse partial Legendre transform of a solution `Z` of the reduced
/// equation: `f = (u, -Z_v, Z - v Z_v, Z_u, v)`, a geometric solution of
/// `K = c` in the chart. The jet order is one less than the order of `Z`.
pub fn lift_gauss<K: Scalar>(z: &Series2<K>, c: &K) -> Result<LegendrianJet<K>> {
    let zu = z.differentiate(Var::U)?;
    let zv = z.differentiate(Var::V)?;
    let order = z.order() - 1;
    let x = Series2::var(Var::U, order);
    let q = Series2::var(Var::V, order);
    let v = q.clone();
    let y = -&zv;
    let z_comp = &z.truncated(order) - &v.mul_series(&zv);
    let jet = LegendrianJet::from_components(x, y, z_comp, zu, q);
    assert_contact(&jet, "lift_gauss");
    assert_omega(&jet, &MongeAmpereSystem::gauss(c.clone()), "lift_gauss");
    Ok(jet)
}

/// Geometric solution of `Hess = 0` from a pair `(phi(v), psi(v))`:
/// `f = (u, psi - phi_v u, z, phi, v)` with `z` recovered from
/// `(phi - v phi_v) du + v (psi_v - u phi_vv) dv`.
pub fn build_developable<K: Scalar>(
    phi: &Series1<K>,
    psi: &Series1<K>,
    order: usize,
) -> Result<LegendrianJet<K>> {
    require_zero_constant(phi, "phi")?;
    require_zero_constant(psi, "psi")?;
    assert!(order >= 2, "developable construction needs order >= 2");
    // Initial data are polynomials; pad so the derivatives below exist.
    let pad = |s: &Series1<K>| {
        let mut out = Series1::zero(order + 2);
        for k in 0..=s.order().min(order + 2) {
            out.set_coeff(k, s.coeff(k));
        }
        out
    };
    let phi = pad(phi);
    let psi = pad(psi);
    let phi_v = phi.derivative()?;
    let phi_vv = phi_v.derivative()?;
    let psi_v = psi.derivative()?;

    let u = Series2::var(Var::U, order);
    let v = Series2::var(Var::V, order);
    let x = u.clone();
    let q = v.clone();
    let p = phi.in_var(Var::V, order);
    let y = &psi.in_var(Var::V, order) - &phi_v.in_var(Var::V, order).mul_series(&u);
    let big_p = &p - &v.mul_series(&phi_v.in_var(Var::V, order));
    let big_q = v.mul_series(
        &(&psi_v.in_var(Var::V, order) - &phi_vv.in_var(Var::V, order).mul_series(&u)),
    );
    let z = path_integrate(&big_p, &big_q, IDENTITY_TOL)?;
    let jet = LegendrianJet::from_components(x, y, z, p, q);
    assert_contact(&jet, "build_developable");
    let dpdq = LegendrianJet::wedge_pullback(jet.p(), jet.q())?;
    check_identity(&dpdq, "build_developable: dp^dq pullback");
    Ok(jet)
}

/// The partial Legendre transformation
/// `L(x, y, z, p, q) = (x, q, z - yq, p, -y)`, a contactomorphism.
pub fn partial_legendre<K: Scalar>(f: &LegendrianJet<K>) -> LegendrianJet<K> {
    LegendrianJet::from_components(
        f.x().clone(),
        f.q().clone(),
        &f.z().clone() - &f.y().mul_series(f.q()),
        f.p().clone(),
        -f.y(),
    )
}

/// Inverse of [`partial_legendre`]: `(x, -q, z - yq, p, y)`.
pub fn partial_legendre_inverse<K: Scalar>(f: &LegendrianJet<K>) -> LegendrianJet<K> {
    LegendrianJet::from_components(
        f.x().clone(),
        -f.q(),
        &f.z().clone() - &f.y().mul_series(f.q()),
        f.p().clone(),
        f.y().clone(),
    )
}

/// The open umbrella `(u, v^2, u v^3, v^3, (3/2) u v)`: an integral map of
/// rank 1 at the origin which is not an immersion, and not a geometric
/// solution of any system with `c != 0`.
pub fn open_umbrella<K: Scalar>(order: usize) -> LegendrianJet<K> {
    assert!(order >= 4, "open umbrella needs order >= 4");
    let jet = LegendrianJet::from_components(
        Series2::var(Var::U, order),
        Series2::monomial(0, 2, K::one(), order),
        Series2::monomial(1, 3, K::one(), order),
        Series2::monomial(0, 3, K::one(), order),
        Series2::monomial(1, 1, K::from_ratio(3, 2), order),
    );
    assert_contact(&jet, "open_umbrella");
    jet
}

/// The cuspidal-edge normal form `(u, v^2, (2/3) v^3, 0, v)`.
pub fn cuspidal_edge_normal_form<K: Scalar>(order: usize) -> LegendrianJet<K> {
    assert!(order >= 3, "cuspidal edge normal form needs order >= 3");
    let jet = LegendrianJet::from_components(
        Series2::var(Var::U, order),
        Series2::monomial(0, 2, K::one(), order),
        Series2::monomial(0, 3, K::from_ratio(2, 3), order),
        Series2::zero(order),
        Series2::var(Var::V, order),
    );
    assert_contact(&jet, "cuspidal_edge_normal_form");
    jet
}

/// The swallowtail normal form
/// `(u, v^3 + uv, (3/4) v^4 + (1/2) u v^2, -(1/2) v^2, v)`.
pub fn swallowtail_normal_form<K: Scalar>(order: usize) -> LegendrianJet<K> {
    assert!(order >= 4, "swallowtail normal form needs order >= 4");
    let jet = LegendrianJet::from_components(
        Series2::var(Var::U, order),
        Series2::from_terms(order, &[(0, 3, K::one()), (1, 1, K::one())]),
        Series2::from_terms(
            order,
            &[(0, 4, K::from_ratio(3, 4)), (1, 2, K::from_ratio(1, 2))],
        ),
        Series2::monomial(0, 2, K::from_ratio(-1, 2), order),
        Series2::var(Var::V, order),
    );
    assert_contact(&jet, "swallowtail_normal_form");
    jet
}

/// The six chart components `(x1, x2, x3; y1, y2, y3)` of a `K = c` solution
/// on `R^3 x S^2`, inverted from the chart with the positive `y1` branch:
/// `y1 = (1 + p^2 + q^2)^{-1/2}`, `y2 = -p y1`, `y3 = -q y1`,
/// `(x1, x2, x3) = (z, x, y)`.
#[derive(Debug, Clone)]
pub struct SphereChart<K: Scalar> {
    pub x: [Series2<K>; 3],
    pub y: [Series2<K>; 3],
}

pub fn gauss_chart_to_sphere<K: Scalar>(f: &LegendrianJet<K>) -> Result<SphereChart<K>> {
    if !f.p().coeff(0, 0).approx_zero(IDENTITY_TOL) {
        return Err(Error::NonzeroConstantTerm { what: "p" });
    }
    if !f.q().coeff(0, 0).approx_zero(IDENTITY_TOL) {
        return Err(Error::NonzeroConstantTerm { what: "q" });
    }
    let order = f.order();
    let s = &f.p().mul_series(f.p()) + &f.q().mul_series(f.q());
    // (1 + s)^{-1/2} = sum_k (-1)^k C(2k, k) / 4^k s^k; s has valuation 2,
    // so k runs to order / 2.
    let mut y1 = Series2::zero(order);
    let mut spow = Series2::constant(K::one(), order);
    let mut coeff = K::one();
    for k in 0..=order / 2 {
        if k > 0 {
            // binom(-1/2, k) / binom(-1/2, k - 1) = -(2k - 1) / (2k)
            coeff = coeff.clone() * K::from_ratio(-(2 * k as i64 - 1), 2 * k as i64);
            spow = spow.mul_series(&s);
        }
        y1 = &y1 + &spow.scale(&coeff);
    }
    let y2 = -&f.p().mul_series(&y1);
    let y3 = -&f.q().mul_series(&y1);
    Ok(SphereChart {
        x: [f.z().clone(), f.x().clone(), f.y().clone()],
        y: [y1, y2, y3],
    })
}

/// Initial data selecting one of the construction families.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialData<K: Scalar> {
    Holomorphic { h: ComplexSeries1<K> },
    DAlembert { phi: Series1<K>, psi: Series1<K> },
    Cauchy { z0: Series1<K>, z1: Series1<K>, c: K },
    Developable { phi: Series1<K>, psi: Series1<K> },
}

impl<K: Scalar> InitialData<K> {
    pub fn variant_name(&self) -> &'static str {
        match self {
            InitialData::Holomorphic { .. } => "holomorphic",
            InitialData::DAlembert { .. } => "dalembert",
            InitialData::Cauchy { .. } => "cauchy",
            InitialData::Developable { .. } => "developable",
        }
    }

    /// Checks the germ normalization: zero constant terms everywhere, zero
    /// linear term of `Z(0, v)` and `c != 0` for Cauchy data.
    pub fn validate(&self) -> Result<()> {
        match self {
            InitialData::Holomorphic { h } => {
                require_zero_constant(h.re(), "Re h")?;
                require_zero_constant(h.im(), "Im h")
            }
            InitialData::DAlembert { phi, psi } | InitialData::Developable { phi, psi } => {
                require_zero_constant(phi, "phi")?;
                require_zero_constant(psi, "psi")
            }
            InitialData::Cauchy { z0, z1, c } => {
                if c.is_zero() {
                    return Err(Error::ZeroGaussCurvature);
                }
                require_zero_constant(z0, "Z(0, v)")?;
                require_zero_constant(z1, "Z_u(0, v)")?;
                if z0.coeff(1).is_zero() {
                    Ok(())
                } else {
                    Err(Error::NonzeroLinearTerm { what: "Z(0, v)" })
                }
            }
        }
    }

    pub fn to_float(&self) -> InitialData<f64> {
        match self {
            InitialData::Holomorphic { h } => InitialData::Holomorphic { h: h.to_float() },
            InitialData::DAlembert { phi, psi } => InitialData::DAlembert {
                phi: phi.to_float(),
                psi: psi.to_float(),
            },
            InitialData::Cauchy { z0, z1, c } => InitialData::Cauchy {
                z0: z0.to_float(),
                z1: z1.to_float(),
                c: c.to_f64(),
            },
            InitialData::Developable { phi, psi } => InitialData::Developable {
                phi: phi.to_float(),
                psi: psi.to_float(),
            },
        }
    }

    /// The system this data solves by construction.
    pub fn system(&self) -> MongeAmpereSystem<K> {
        match self {
            InitialData::Holomorphic { .. } => MongeAmpereSystem::hess(K::one()),
            InitialData::DAlembert { .. } => MongeAmpereSystem::hess(-K::one()),
            InitialData::Cauchy { c, .. } => MongeAmpereSystem::gauss(c.clone()),
            InitialData::Developable { .. } => MongeAmpereSystem::hess(K::zero()),
        }
    }

    /// Builds the geometric solution jet for this data at the given order.
    pub fn build(&self, order: usize) -> Result<LegendrianJet<K>> {
        self.validate()?;
        match self {
            InitialData::Holomorphic { h } => build_hess_positive(h, order),
            InitialData::DAlembert { phi, psi } => build_hess_negative(phi, psi, order),
            InitialData::Cauchy { z0, z1, c } => {
                let z = solve_gauss_ck(c, z0, z1, order + 1)?;
                lift_gauss(&z, c)
            }
            InitialData::Developable { phi, psi } => build_developable(phi, psi, order),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct InitialDataRepr {
    variant: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    c: Option<Value>,
    series: Value,
}

impl<K: Scalar> Serialize for InitialData<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let to_value = |s: &Series1<K>| serde_json::to_value(s).expect("series serializes");
        let repr = match self {
            InitialData::Holomorphic { h } => InitialDataRepr {
                variant: "holomorphic".into(),
                c: None,
                series: serde_json::json!({"re": to_value(h.re()), "im": to_value(h.im())}),
            },
            InitialData::DAlembert { phi, psi } => InitialDataRepr {
                variant: "dalembert".into(),
                c: None,
                series: serde_json::json!({"phi": to_value(phi), "psi": to_value(psi)}),
            },
            InitialData::Cauchy { z0, z1, c } => InitialDataRepr {
                variant: "cauchy".into(),
                c: Some(c.coeff_to_json()),
                series: serde_json::json!({"z0": to_value(z0), "z1": to_value(z1)}),
            },
            InitialData::Developable { phi, psi } => InitialDataRepr {
                variant: "developable".into(),
                c: None,
                series: serde_json::json!({"phi": to_value(phi), "psi": to_value(psi)}),
            },
        };
        repr.serialize(serializer)
    }
}

impl<'de, K: Scalar> Deserialize<'de> for InitialData<K> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = InitialDataRepr::deserialize(deserializer)?;
        let field = |name: &str| -> std::result::Result<Series1<K>, D::Error> {
            let v = repr
                .series
                .get(name)
                .ok_or_else(|| D::Error::custom(format!("missing series field {name:?}")))?;
            serde_json::from_value(v.clone()).map_err(D::Error::custom)
        };
        let data = match repr.variant.as_str() {
            "holomorphic" => InitialData::Holomorphic {
                h: ComplexSeries1::new(field("re")?, field("im")?).map_err(D::Error::custom)?,
            },
            "dalembert" => InitialData::DAlembert {
                phi: field("phi")?,
                psi: field("psi")?,
            },
            "cauchy" => {
                let c_value = repr
                    .c
                    .as_ref()
                    .ok_or_else(|| D::Error::custom("cauchy data requires the field \"c\""))?;
                InitialData::Cauchy {
                    z0: field("z0")?,
                    z1: field("z1")?,
                    c: K::coeff_from_json(c_value).map_err(D::Error::custom)?,
                }
            }
            "developable" => InitialData::Developable {
                phi: field("phi")?,
                psi: field("psi")?,
            },
            other => return Err(D::Error::custom(format!("unknown variant {other:?}"))),
        };
        data.validate().map_err(D::Error::custom)?;
        Ok(data)
    }
}

#[derive(Serialize, Deserialize)]
struct JetRepr<K: Scalar> {
    chart: Chart,
    #[serde(bound = "")]
    x: Series2<K>,
    #[serde(bound = "")]
    y: Series2<K>,
    #[serde(bound = "")]
    z: Series2<K>,
    #[serde(bound = "")]
    p: Series2<K>,
    #[serde(bound = "")]
    q: Series2<K>,
}

impl<K: Scalar> Serialize for LegendrianJet<K> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        JetRepr {
            chart: self.chart,
            x: self.x.clone(),
            y: self.y.clone(),
            z: self.z.clone(),
            p: self.p.clone(),
            q: self.q.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de, K: Scalar> Deserialize<'de> for LegendrianJet<K> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = JetRepr::<K>::deserialize(deserializer)?;
        // The chart tag is informational; recompute it from the components.
        Ok(LegendrianJet::from_components(
            repr.x, repr.y, repr.z, repr.p, repr.q,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use num_traits::Zero;

    fn s2(order: usize, terms: &[(usize, usize, i64, i64)]) -> Series2<Rational> {
        let terms: Vec<_> = terms
            .iter()
            .map(|&(i, j, n, d)| (i, j, rat(n, d)))
            .collect();
        Series2::from_terms(order, &terms)
    }

    fn s1(order: usize, terms: &[(usize, i64, i64)]) -> Series1<Rational> {
        let terms: Vec<_> = terms.iter().map(|&(k, n, d)| (k, rat(n, d))).collect();
        Series1::from_terms(order, &terms)
    }

    fn holomorphic(
        terms_re: &[(usize, i64, i64)],
        terms_im: &[(usize, i64, i64)],
        order: usize,
    ) -> ComplexSeries1<Rational> {
        ComplexSeries1::new(s1(order, terms_re), s1(order, terms_im)).unwrap()
    }

    #[test]
    fn hess_positive_from_w_squared() {
        // h = w^2 gives (u, 2uv, u^3/3 + u v^2, u^2 - v^2, v).
        let h = holomorphic(&[(2, 1, 1)], &[], 2);
        let f = build_hess_positive(&h, 4).unwrap();
        assert_eq!(f.y(), &s2(4, &[(1, 1, 2, 1)]));
        assert_eq!(f.z(), &s2(4, &[(3, 0, 1, 3), (1, 2, 1, 1)]));
        assert_eq!(f.p(), &s2(4, &[(2, 0, 1, 1), (0, 2, -1, 1)]));
        assert_eq!(f.chart(), Chart::Adapted);
    }

    #[test]
    fn hess_positive_from_i_w_squared() {
        // h = i w^2 gives (u, u^2 - v^2, -(2/3) v^3, -2uv, v).
        let h = holomorphic(&[], &[(2, 1, 1)], 2);
        let f = build_hess_positive(&h, 4).unwrap();
        assert_eq!(f.y(), &s2(4, &[(2, 0, 1, 1), (0, 2, -1, 1)]));
        assert_eq!(f.z(), &s2(4, &[(0, 3, -2, 3)]));
        assert_eq!(f.p(), &s2(4, &[(1, 1, -2, 1)]));
    }

    #[test]
    fn hess_positive_golden_example() {
        // h = w^2 + w^3.
        let h = holomorphic(&[(2, 1, 1), (3, 1, 1)], &[], 3);
        let f = build_hess_positive(&h, 4).unwrap();
        assert_eq!(f.y(), &s2(4, &[(1, 1, 2, 1), (2, 1, 3, 1), (0, 3, -1, 1)]));
        assert_eq!(
            f.z(),
            &s2(
                4,
                &[
                    (3, 0, 1, 3),
                    (1, 2, 1, 1),
                    (4, 0, 1, 4),
                    (2, 2, 3, 2),
                    (0, 4, -3, 4),
                ]
            )
        );
        assert_eq!(
            f.p(),
            &s2(4, &[(2, 0, 1, 1), (0, 2, -1, 1), (3, 0, 1, 1), (1, 2, -3, 1)])
        );
    }

    #[test]
    fn hess_positive_satisfies_cauchy_riemann() {
        let h = holomorphic(
            &[(1, 2, 3), (2, -1, 2), (3, 5, 7)],
            &[(1, 1, 4), (3, -2, 5)],
            3,
        );
        let f = build_hess_positive(&h, 6).unwrap();
        let pu = f.p().differentiate(Var::U).unwrap();
        let pv = f.p().differentiate(Var::V).unwrap();
        let yu = f.y().differentiate(Var::U).unwrap();
        let yv = f.y().differentiate(Var::V).unwrap();
        assert_eq!(pu, yv);
        assert!((&pv + &yu).is_zero());
    }

    #[test]
    fn hess_negative_linear_data() {
        // phi = t: y = u + v, p = -(u + v), z = (v^2 - u^2) / 2.
        let phi = s1(1, &[(1, 1, 1)]);
        let psi = Series1::zero(1);
        let f = build_hess_negative(&phi, &psi, 4).unwrap();
        assert_eq!(f.y(), &s2(4, &[(1, 0, 1, 1), (0, 1, 1, 1)]));
        assert_eq!(f.p(), &s2(4, &[(1, 0, -1, 1), (0, 1, -1, 1)]));
        assert_eq!(f.z(), &s2(4, &[(2, 0, -1, 2), (0, 2, 1, 2)]));
    }

    #[test]
    fn hess_negative_quadratic_data() {
        // phi = t^2: z = (-u^3 + 3uv^2 + 2v^3) / 3.
        let phi = s1(2, &[(2, 1, 1)]);
        let psi = Series1::zero(2);
        let f = build_hess_negative(&phi, &psi, 4).unwrap();
        assert_eq!(f.z(), &s2(4, &[(3, 0, -1, 3), (1, 2, 1, 1), (0, 3, 2, 3)]));
    }

    #[test]
    fn hess_negative_zero_data() {
        let zero = Series1::<Rational>::zero(2);
        let f = build_hess_negative(&zero, &zero, 4).unwrap();
        assert!(f.y().is_zero());
        assert!(f.z().is_zero());
        assert!(f.p().is_zero());
        assert_eq!(f.chart(), Chart::Adapted);
    }

    #[test]
    fn hess_negative_satisfies_wave_relations() {
        let phi = s1(3, &[(1, 1, 2), (2, -2, 3), (3, 1, 5)]);
        let psi = s1(3, &[(1, -1, 3), (2, 1, 7), (3, 2, 9)]);
        let f = build_hess_negative(&phi, &psi, 6).unwrap();
        let pu = f.p().differentiate(Var::U).unwrap();
        let pv = f.p().differentiate(Var::V).unwrap();
        let yu = f.y().differentiate(Var::U).unwrap();
        let yv = f.y().differentiate(Var::V).unwrap();
        assert!((&pv + &yu).is_zero());
        assert!((&pu + &yv).is_zero());
    }

    #[test]
    fn gauss_ck_reference_solution() {
        // c = 1, Z0 = v^2/2, Z1 = 0: Z = -u^2/2 + v^2/2 - u^2 v^2 + O(5).
        let z0 = s1(2, &[(2, 1, 2)]);
        let z1 = Series1::zero(2);
        let z = solve_gauss_ck(&rat(1, 1), &z0, &z1, 4).unwrap();
        assert_eq!(z.coeff(2, 0), rat(-1, 2));
        assert_eq!(z.coeff(0, 2), rat(1, 2));
        assert_eq!(z.coeff(2, 2), rat(-1, 1));
        assert_eq!(z.coeff(4, 0), rat(0, 1));
        assert_eq!(z.coeff(3, 0), rat(0, 1));
        assert_eq!(z.coeff(3, 1), rat(0, 1));
    }

    #[test]
    fn gauss_ck_zero_data_gives_zero() {
        let z = solve_gauss_ck(&rat(-3, 2), &Series1::zero(3), &Series1::zero(3), 6).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn gauss_ck_b_only_data() {
        // c = 1, Z1 = v (B = 1), Z0 = 0: Z = uv exactly.
        let z1 = s1(1, &[(1, 1, 1)]);
        let z = solve_gauss_ck(&rat(1, 1), &Series1::zero(2), &z1, 6).unwrap();
        assert_eq!(z, s2(6, &[(1, 1, 1, 1)]));
    }

    #[test]
    fn gauss_ck_rejects_zero_c() {
        let r = solve_gauss_ck(&rat(0, 1), &Series1::zero(2), &Series1::zero(2), 4);
        assert!(matches!(r, Err(Error::ZeroGaussCurvature)));
    }

    #[test]
    fn gauss_ck_printed_relations() {
        // Degree <= 4 coefficients agree with the closed forms
        // A = -cC, D = -cF, E = -cG, I = 4c^2 BC^2 - cK,
        // J = -4c(B^2+1)C - cL, H = -4c^3 C^3 + 4c^2 (B^2+1) C + c^2 L.
        let tuples = [
            (rat(1, 1), rat(1, 2), rat(-1, 3), rat(2, 1), rat(1, 5), rat(-3, 2), rat(1, 7)),
            (rat(-2, 3), rat(-1, 4), rat(5, 6), rat(0, 1), rat(2, 7), rat(1, 2), rat(-4, 5)),
            (rat(3, 1), rat(2, 9), rat(1, 8), rat(-1, 2), rat(0, 1), rat(2, 3), rat(5, 4)),
        ];
        for (c, b, cc, f, g, kk, l) in tuples {
            let z0 = Series1::from_terms(
                4,
                &[
                    (2, cc.clone() / rat(2, 1)),
                    (3, g.clone() / rat(6, 1)),
                    (4, l.clone() / rat(24, 1)),
                ],
            );
            let z1 = Series1::from_terms(
                3,
                &[
                    (1, b.clone()),
                    (2, f.clone() / rat(2, 1)),
                    (3, kk.clone() / rat(6, 1)),
                ],
            );
            let z = solve_gauss_ck(&c, &z0, &z1, 5).unwrap();
            let a_coeff = z.coeff(2, 0) * rat(2, 1);
            let d_coeff = z.coeff(3, 0) * rat(6, 1);
            let e_coeff = z.coeff(2, 1) * rat(2, 1);
            let h_coeff = z.coeff(4, 0) * rat(24, 1);
            let i_coeff = z.coeff(3, 1) * rat(6, 1);
            let j_coeff = z.coeff(2, 2) * rat(4, 1);
            let c2 = c.clone() * c.clone();
            let c3 = c2.clone() * c.clone();
            let b2p1 = b.clone() * b.clone() + rat(1, 1);
            assert_eq!(a_coeff, -(c.clone() * cc.clone()));
            assert_eq!(d_coeff, -(c.clone() * f.clone()));
            assert_eq!(e_coeff, -(c.clone() * g.clone()));
            assert_eq!(
                i_coeff,
                rat(4, 1) * c2.clone() * b.clone() * cc.clone() * cc.clone()
                    - c.clone() * kk.clone()
            );
            assert_eq!(
                j_coeff,
                rat(-4, 1) * c.clone() * b2p1.clone() * cc.clone() - c.clone() * l.clone()
            );
            assert_eq!(
                h_coeff,
                rat(-4, 1) * c3 * cc.clone() * cc.clone() * cc.clone()
                    + rat(4, 1) * c2.clone() * b2p1 * cc.clone()
                    + c2 * l.clone()
            );
        }
    }

    #[test]
    fn lift_gauss_zero_solution() {
        let z = Series2::<Rational>::zero(5);
        let f = lift_gauss(&z, &rat(1, 1)).unwrap();
        assert!(f.y().is_zero());
        assert!(f.z().is_zero());
        assert!(f.p().is_zero());
        assert_eq!(f.chart(), Chart::Adapted);
    }

    #[test]
    fn lift_gauss_reference_derivatives() {
        let z0 = s1(2, &[(2, 1, 2)]);
        let z = solve_gauss_ck(&rat(1, 1), &z0, &Series1::zero(2), 5).unwrap();
        let f = lift_gauss(&z, &rat(1, 1)).unwrap();
        // y = -Z_v = -(v - 2u^2 v + ...), p = Z_u = -u - 2uv^2 + ...
        assert_eq!(f.y().coeff(0, 1), rat(-1, 1));
        assert_eq!(f.y().coeff(2, 1), rat(2, 1));
        assert_eq!(f.p().coeff(1, 0), rat(-1, 1));
        assert_eq!(f.p().coeff(1, 2), rat(-2, 1));
    }

    #[test]
    fn lift_gauss_of_uv_is_contact() {
        let z = s2(5, &[(1, 1, 1, 1)]);
        let f = lift_gauss(&z, &rat(2, 1)).unwrap();
        assert_eq!(f.y(), &s2(4, &[(1, 0, -1, 1)]));
        assert!(f.z().is_zero());
        assert_eq!(f.p(), &s2(4, &[(0, 1, 1, 1)]));
        let (du, dv) = f.theta_pullback().unwrap();
        assert!(du.is_zero() && dv.is_zero());
    }

    #[test]
    fn developable_linear_psi() {
        // phi = 0, psi = v: (u, v, v^2/2, 0, v).
        let f = build_developable(&Series1::<Rational>::zero(2), &s1(1, &[(1, 1, 1)]), 4).unwrap();
        assert_eq!(f.y(), &s2(4, &[(0, 1, 1, 1)]));
        assert_eq!(f.z(), &s2(4, &[(0, 2, 1, 2)]));
        assert!(f.p().is_zero());
    }

    #[test]
    fn developable_case_iii_data() {
        // phi = v^2/2, psi = v^3/6 realizes (Bt, Ct, C, Dt)(0,0) = (0, 0, 1, 1).
        let phi = s1(2, &[(2, 1, 2)]);
        let psi = s1(3, &[(3, 1, 6)]);
        let f = build_developable(&phi, &psi, 5).unwrap();
        let yv = f.y().differentiate(Var::V).unwrap();
        let b_t = yv.coeff(0, 0);
        let c_t = yv.coeff(0, 1); // psi_vv(0)
        let c_big = -yv.coeff(1, 0); // phi_vv(0)
        let d_t = yv.coeff(0, 2) * rat(2, 1); // psi_vvv(0)
        assert_eq!(b_t, rat(0, 1));
        assert_eq!(c_t, rat(0, 1));
        assert_eq!(c_big, rat(1, 1));
        assert_eq!(d_t, rat(1, 1));
    }

    #[test]
    fn developable_zero_data() {
        let zero = Series1::<Rational>::zero(2);
        let f = build_developable(&zero, &zero, 4).unwrap();
        assert!(f.y().is_zero() && f.z().is_zero() && f.p().is_zero());
    }

    #[test]
    fn developable_dpdq_vanishes_identically() {
        let phi = s1(4, &[(1, 1, 3), (2, -2, 5), (3, 1, 2), (4, 3, 7)]);
        let psi = s1(4, &[(1, 2, 9), (2, 1, 6), (3, -1, 4)]);
        let f = build_developable(&phi, &psi, 8).unwrap();
        assert!(f.p().differentiate(Var::U).unwrap().is_zero());
        let dpdq = LegendrianJet::wedge_pullback(f.p(), f.q()).unwrap();
        assert!(dpdq.is_zero());
    }

    #[test]
    fn partial_legendre_componentwise() {
        let h = holomorphic(&[(2, 1, 1)], &[], 2);
        let f = build_hess_positive(&h, 4).unwrap();
        let lf = partial_legendre(&f);
        assert_eq!(lf.x(), &s2(4, &[(1, 0, 1, 1)]));
        assert_eq!(lf.y(), &s2(4, &[(0, 1, 1, 1)]));
        // z - yq = u^3/3 + uv^2 - 2uv^2
        assert_eq!(lf.z(), &s2(4, &[(3, 0, 1, 3), (1, 2, -1, 1)]));
        assert_eq!(lf.p(), f.p());
        assert_eq!(lf.q(), &s2(4, &[(1, 1, -2, 1)]));
        assert_eq!(lf.chart(), Chart::General);
    }

    #[test]
    fn partial_legendre_inverse_is_inverse() {
        let h = holomorphic(&[(2, 1, 1), (3, 1, 1)], &[], 3);
        let f = build_hess_positive(&h, 5).unwrap();
        assert_eq!(partial_legendre_inverse(&partial_legendre(&f)), f);
    }

    #[test]
    fn partial_legendre_of_flat_strip() {
        let f = LegendrianJet::from_components(
            Series2::<Rational>::var(Var::U, 4),
            Series2::zero(4),
            Series2::zero(4),
            Series2::zero(4),
            Series2::var(Var::V, 4),
        );
        let lf = partial_legendre(&f);
        assert_eq!(lf.x(), &s2(4, &[(1, 0, 1, 1)]));
        assert_eq!(lf.y(), &s2(4, &[(0, 1, 1, 1)]));
        assert!(lf.z().is_zero() && lf.p().is_zero() && lf.q().is_zero());
    }

    #[test]
    fn partial_legendre_preserves_contact_exactly() {
        let phi = s1(3, &[(1, 1, 2), (3, -1, 3)]);
        let psi = s1(3, &[(2, 2, 5)]);
        let f = build_hess_negative(&phi, &psi, 6).unwrap();
        let (du, dv) = partial_legendre(&f).theta_pullback().unwrap();
        assert!(du.is_zero() && dv.is_zero());
    }

    #[test]
    fn open_umbrella_identities() {
        let f = open_umbrella::<Rational>(6);
        let (du, dv) = f.theta_pullback().unwrap();
        assert!(du.is_zero() && dv.is_zero());
        assert_eq!(f.differential_rank_at_origin().unwrap(), 1);
        // Hess omega residual is 2cv + (9/2) v^3 for every c.
        for c in [rat(1, 1), rat(-1, 1), rat(17, 5)] {
            let omega = f
                .omega_pullback(&MongeAmpereSystem::hess(c.clone()))
                .unwrap();
            let expect =
                Series2::from_terms(5, &[(0, 1, rat(2, 1) * c), (0, 3, rat(9, 2))]);
            assert_eq!(omega, expect);
        }
    }

    #[test]
    fn sphere_chart_of_flat_strip() {
        let f = LegendrianJet::from_components(
            Series2::<Rational>::var(Var::U, 6),
            Series2::zero(6),
            Series2::zero(6),
            Series2::zero(6),
            Series2::var(Var::V, 6),
        );
        let chart = gauss_chart_to_sphere(&f).unwrap();
        // y1 = (1 + v^2)^{-1/2} = 1 - v^2/2 + 3v^4/8 - 5v^6/16
        let expect_y1 = s2(
            6,
            &[(0, 0, 1, 1), (0, 2, -1, 2), (0, 4, 3, 8), (0, 6, -5, 16)],
        );
        assert_eq!(chart.y[0], expect_y1);
        assert!(chart.y[1].is_zero());
        assert_eq!(
            chart.y[2],
            -&Series2::var(Var::V, 6).mul_series(&expect_y1)
        );
        // Base point: (y1, y2, y3)(0) = (1, 0, 0).
        assert_eq!(chart.y[0].coeff(0, 0), rat(1, 1));
        assert!(chart.y[1].coeff(0, 0).is_zero());
        assert!(chart.y[2].coeff(0, 0).is_zero());
    }

    #[test]
    fn sphere_chart_normalization_and_contact() {
        let z0 = s1(4, &[(2, 1, 3), (3, -1, 5), (4, 1, 7)]);
        let z1 = s1(3, &[(1, 2, 5), (2, 1, 4), (3, -1, 6)]);
        let z = solve_gauss_ck(&rat(-1, 1), &z0, &z1, 7).unwrap();
        let f = lift_gauss(&z, &rat(-1, 1)).unwrap();
        let chart = gauss_chart_to_sphere(&f).unwrap();
        let norm = &(&chart.y[0].mul_series(&chart.y[0])
            + &chart.y[1].mul_series(&chart.y[1]))
            + &chart.y[2].mul_series(&chart.y[2]);
        let res = &norm - &Series2::constant(rat(1, 1), norm.order());
        assert!(res.is_zero(), "|y|^2 - 1 = {res}");
        // sum y_i dx_i pulls back to zero.
        let mut du_total = Series2::zero(f.order() - 1);
        let mut dv_total = Series2::zero(f.order() - 1);
        for i in 0..3 {
            du_total = &du_total
                + &chart.y[i].mul_series(&chart.x[i].differentiate(Var::U).unwrap());
            dv_total = &dv_total
                + &chart.y[i].mul_series(&chart.x[i].differentiate(Var::V).unwrap());
        }
        assert!(du_total.is_zero() && dv_total.is_zero());
    }

    #[test]
    fn initial_data_json_round_trip() {
        let data: InitialData<Rational> = InitialData::Cauchy {
            z0: s1(3, &[(2, 1, 2), (3, -2, 3)]),
            z1: s1(2, &[(1, 1, 1)]),
            c: rat(-1, 1),
        };
        let json = serde_json::to_string(&data).unwrap();
        assert!(json.contains("\"variant\":\"cauchy\""));
        let back: InitialData<Rational> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, data);
    }

    #[test]
    fn initial_data_rejects_bad_germs() {
        let bad: std::result::Result<InitialData<Rational>, _> = serde_json::from_str(
            r#"{"variant":"dalembert","series":{
                "phi":{"order":2,"backend":"rational","coeffs":[[0,"1/1"]]},
                "psi":{"order":2,"backend":"rational","coeffs":[]}}}"#,
        );
        assert!(bad.is_err());
        let zero_c: std::result::Result<InitialData<Rational>, _> = serde_json::from_str(
            r#"{"variant":"cauchy","c":"0/1","series":{
                "z0":{"order":2,"backend":"rational","coeffs":[]},
                "z1":{"order":2,"backend":"rational","coeffs":[]}}}"#,
        );
        assert!(zero_c.is_err());
    }

    #[test]
    fn jet_json_round_trip() {
        let h = holomorphic(&[(2, 1, 1), (3, 1, 1)], &[], 3);
        let f = build_hess_positive(&h, 4).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: LegendrianJet<Rational> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.chart(), Chart::Adapted);
    }

    #[test]
    fn recenter_keeps_adapted_chart_and_contact() {
        let h = holomorphic(&[(2, 1, 1), (3, 1, 1)], &[], 3);
        let f = build_hess_positive(&h, 5).unwrap();
        let g = f.recenter(&rat(1, 4), &rat(-1, 3));
        assert_eq!(g.chart(), Chart::Adapted);
        for comp in g.components() {
            assert!(comp.coeff(0, 0).is_zero());
        }
        let (du, dv) = g.theta_pullback().unwrap();
        assert!(du.is_zero() && dv.is_zero());
    }
}
