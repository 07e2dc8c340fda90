//! Singularity detection and classification of the projections.
//!
//! A non-degenerate singular point of `g = pi o f` is a cuspidal edge iff
//! `det(gamma'(0), eta(0)) != 0` for a parametrization `gamma` of the
//! singular locus `{Delta = 0}` and a kernel field `eta` of `dg`; it is a
//! swallowtail iff that determinant vanishes at `0` and its `t`-derivative
//! does not.
//!
//! In the adapted chart `x = u, q = v` the locus function is `Delta = y_v`
//! for `pi1` and `Delta = p_u` for `pi2`, the kernel directions are `(0, 1)`
//! and `(1, 0)`, and the criterion reduces to partial derivatives of
//! `Delta`, evaluated exactly. On the float backend the same quantities are
//! measured independently by tracing the locus with pseudo-arclength
//! continuation and central finite differences; the two paths cross-check
//! each other.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};
use crate::series::{Series2, Var};
use crate::solutions::{Chart, LegendrianJet};

/// Projection leg of the double fibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum Leg {
    #[serde(rename = "pi1")]
    Pi1,
    #[serde(rename = "pi2")]
    Pi2,
}

/// Classification outcome at one parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub enum Verdict {
    Immersion,
    CuspidalEdge,
    Swallowtail,
    /// `|grad Delta| <= tol`: the criterion does not apply.
    Degenerate,
    /// Both criterion quantities below tolerance; never guessed.
    Unresolved,
}

/// Diagnostics of one classification, converted to `f64` for reporting.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct SingularityReport {
    pub point: [f64; 2],
    pub leg: Leg,
    pub verdict: Verdict,
    pub delta: f64,
    pub grad_delta: [f64; 2],
    pub det0: Option<f64>,
    pub det_derivative: Option<f64>,
}

/// Exact-arithmetic classification result.
#[derive(Debug, Clone)]
pub struct Classification<K: Scalar> {
    pub verdict: Verdict,
    pub delta: K,
    pub grad_delta: (K, K),
    /// `det(gamma'(0), eta(0))` for the coordinate parametrization of the
    /// locus (`gamma = (t, v(t))` for `pi1`, `(u(t), t)` for `pi2`).
    pub det0: Option<K>,
    pub det_derivative: Option<K>,
}

impl<K: Scalar> Classification<K> {
    pub fn report(&self, point: [f64; 2], leg: Leg) -> SingularityReport {
        SingularityReport {
            point,
            leg,
            verdict: self.verdict,
            delta: self.delta.to_f64(),
            grad_delta: [self.grad_delta.0.to_f64(), self.grad_delta.1.to_f64()],
            det0: self.det0.as_ref().map(Scalar::to_f64),
            det_derivative: self.det_derivative.as_ref().map(Scalar::to_f64),
        }
    }
}

/// Inverts a parameter map `(a(u,v), b(u,v))` with invertible linear part
/// around the origin: returns `(U, V)` with `a(U, V) = s`, `b(U, V) = t`
/// to the shared order.
pub fn invert_map<K: Scalar>(
    a: &Series2<K>,
    b: &Series2<K>,
) -> Result<(Series2<K>, Series2<K>)> {
    if !a.coeff(0, 0).is_zero() || !b.coeff(0, 0).is_zero() {
        return Err(Error::NonzeroConstantTerm {
            what: "invertible parameter map",
        });
    }
    let order = a.order().min(b.order());
    let (a10, a01) = (a.coeff(1, 0), a.coeff(0, 1));
    let (b10, b01) = (b.coeff(1, 0), b.coeff(0, 1));
    let det = a10.clone() * b01.clone() - a01.clone() * b10.clone();
    if det.approx_zero(1e-12) {
        return Err(Error::NotAdaptable);
    }
    let i11 = b01 / det.clone();
    let i12 = -(a01 / det.clone());
    let i21 = -(b10 / det.clone());
    let i22 = a10 / det;
    let s = Series2::var(Var::U, order);
    let t = Series2::var(Var::V, order);
    let lin = |r: &Series2<K>, w: &Series2<K>, c1: &K, c2: &K| &r.scale(c1) + &w.scale(c2);
    // Splitting a = L_a + h_a, the inverse satisfies
    // (U, V) = M^{-1} (s - h_a(U, V), t - h_b(U, V)); iterate to the order.
    let strip_linear = |f: &Series2<K>| {
        let mut h = f.clone();
        h.set_coeff(1, 0, K::zero());
        h.set_coeff(0, 1, K::zero());
        h
    };
    let ha = strip_linear(a);
    let hb = strip_linear(b);
    let mut big_u = lin(&s, &t, &i11, &i12);
    let mut big_v = lin(&s, &t, &i21, &i22);
    for _ in 0..order {
        let ra = &s - &ha.compose(&big_u, &big_v)?;
        let rb = &t - &hb.compose(&big_u, &big_v)?;
        big_u = lin(&ra, &rb, &i11, &i12);
        big_v = lin(&ra, &rb, &i21, &i22);
    }
    let check_a = &a.compose(&big_u, &big_v)? - &s;
    let check_b = &b.compose(&big_u, &big_v)? - &t;
    let ok = match K::BACKEND {
        Backend::Rational => check_a.is_zero() && check_b.is_zero(),
        Backend::Float => check_a.max_abs() <= 1e-9 && check_b.max_abs() <= 1e-9,
    };
    if !ok {
        return Err(Error::NotAdaptable);
    }
    Ok((big_u, big_v))
}

/// The system isomorphism `(x, y, z, p, q) -> (y, x, z, q, p)` swapping the
/// roles of the two coordinate pairs.
pub fn swap_isomorphism<K: Scalar>(f: &LegendrianJet<K>) -> LegendrianJet<K> {
    LegendrianJet::from_components(
        f.y().clone(),
        f.x().clone(),
        f.z().clone(),
        f.q().clone(),
        f.p().clone(),
    )
}

/// Brings a jet into the adapted chart `x = u, q = v` by reparametrizing
/// with the inverse of `(x, q)`, or of `(y, p)` after the swap isomorphism.
/// The pair with the larger Jacobian determinant at the origin wins; if
/// neither is invertible the jet cannot be adapted.
pub fn adapt_chart<K: Scalar>(f: &LegendrianJet<K>) -> Result<LegendrianJet<K>> {
    if f.chart() == Chart::Adapted {
        return Ok(f.clone());
    }
    let f = if f.components().iter().all(|c| c.coeff(0, 0).is_zero()) {
        f.clone()
    } else {
        f.recenter(&K::zero(), &K::zero())
    };
    let lin_det = |a: &Series2<K>, b: &Series2<K>| {
        (a.coeff(1, 0) * b.coeff(0, 1) - a.coeff(0, 1) * b.coeff(1, 0)).magnitude()
    };
    let det_xq = lin_det(f.x(), f.q());
    let det_yp = lin_det(f.y(), f.p());
    let candidate = if det_xq >= det_yp {
        f.clone()
    } else {
        swap_isomorphism(&f)
    };
    let best = lin_det(candidate.x(), candidate.q());
    if best <= 1e-12 {
        return Err(Error::NotAdaptable);
    }
    let (inv_u, inv_v) = invert_map(candidate.x(), candidate.q())?;
    let order = inv_u.order();
    let reparam = |c: &Series2<K>| c.compose(&inv_u, &inv_v);
    let y = reparam(candidate.y())?;
    let z = reparam(candidate.z())?;
    let p = reparam(candidate.p())?;
    // x and q become the coordinates exactly; snap them to kill float dust.
    Ok(LegendrianJet::from_components(
        Series2::var(Var::U, order),
        y,
        z,
        p,
        Series2::var(Var::V, order),
    ))
}

/// Locus function of the projection in the adapted chart: `y_v` for `pi1`
/// (since `x = u`) and `p_u` for `pi2` (since `q = v`). Non-adapted jets
/// are re-adapted first.
pub fn delta_series<K: Scalar>(f: &LegendrianJet<K>, leg: Leg) -> Result<Series2<K>> {
    let adapted;
    let jet = if f.chart() == Chart::Adapted {
        f
    } else {
        adapted = adapt_chart(f)?;
        &adapted
    };
    match leg {
        Leg::Pi1 => jet.y().differentiate(Var::V),
        Leg::Pi2 => jet.p().differentiate(Var::U),
    }
}

/// Classifies one point with the exact implicit-derivative form of the
/// criterion. In the adapted chart, with `eta = (0,1)` for `pi1`:
/// cuspidal edge iff `Delta_v != 0` (then `det(gamma'(0), eta(0)) = 1` for
/// `gamma = (t, v(t))`); swallowtail iff `Delta_v = 0 != Delta_u` and the
/// derivative `-Delta_vv / Delta_u` of the determinant does not vanish.
/// The `pi2` case swaps the roles of `u` and `v`.
pub fn classify_point<K: Scalar>(
    f: &LegendrianJet<K>,
    leg: Leg,
    point: (&K, &K),
    tol: f64,
) -> Result<Classification<K>> {
    let recentered = f.recenter(point.0, point.1);
    let adapted = adapt_chart(&recentered)?;
    let delta = delta_series(&adapted, leg)?;
    let delta0 = delta.coeff(0, 0);
    let du = delta.coeff(1, 0);
    let dv = delta.coeff(0, 1);
    if !delta0.approx_zero(tol) {
        return Ok(Classification {
            verdict: Verdict::Immersion,
            delta: delta0,
            grad_delta: (du, dv),
            det0: None,
            det_derivative: None,
        });
    }
    if du.approx_zero(tol) && dv.approx_zero(tol) {
        return Ok(Classification {
            verdict: Verdict::Degenerate,
            delta: delta0,
            grad_delta: (du, dv),
            det0: None,
            det_derivative: None,
        });
    }
    // Derivative of Delta along the kernel direction decides the edge; the
    // second derivative along the kernel over the transverse slope decides
    // the swallowtail.
    let (along, transverse, second) = match leg {
        Leg::Pi1 => (dv.clone(), du.clone(), delta.coeff(0, 2) * K::from_i64(2)),
        Leg::Pi2 => (du.clone(), dv.clone(), delta.coeff(2, 0) * K::from_i64(2)),
    };
    if !along.approx_zero(tol) {
        let det0 = match leg {
            Leg::Pi1 => K::one(),
            Leg::Pi2 => -K::one(),
        };
        return Ok(Classification {
            verdict: Verdict::CuspidalEdge,
            delta: delta0,
            grad_delta: (du, dv),
            det0: Some(det0),
            det_derivative: None,
        });
    }
    let derivative = match leg {
        Leg::Pi1 => -(second / transverse),
        Leg::Pi2 => second / transverse,
    };
    let verdict = if derivative.approx_zero(tol) {
        Verdict::Unresolved
    } else {
        Verdict::Swallowtail
    };
    Ok(Classification {
        verdict,
        delta: delta0,
        grad_delta: (du, dv),
        det0: Some(K::zero()),
        det_derivative: Some(derivative),
    })
}

/// Continuation parameters for locus tracing and the finite-difference
/// classification path.
#[derive(Debug, Clone)]
pub struct TraceParams {
    /// Arclength spacing of traced polyline points.
    pub step: f64,
    /// Convergence threshold of the Newton corrector.
    pub newton_tol: f64,
    pub max_corrector: usize,
    /// Maximum polyline points per direction.
    pub max_steps: usize,
    /// `|Delta(seed)|` must not exceed this for a trace to start.
    pub seed_tol: f64,
    /// Decision threshold for the measured `det(gamma'(0), eta(0))`.
    pub det_tol: f64,
    /// Decision threshold for the measured determinant derivative; the
    /// central-difference resolution is about `fd_step^2`.
    pub deriv_tol: f64,
    /// Short step used for the local finite differences around a point.
    pub fd_step: f64,
    /// Tracing stops outside `[u_min, u_max] x [v_min, v_max]`.
    pub bounds: [f64; 4],
}

impl Default for TraceParams {
    fn default() -> Self {
        TraceParams {
            step: 1e-2,
            newton_tol: 1e-12,
            max_corrector: 50,
            max_steps: 400,
            seed_tol: 1e-6,
            det_tol: 1e-3,
            deriv_tol: 1e-5,
            fd_step: 1e-4,
            bounds: [-1.5, 1.5, -1.5, 1.5],
        }
    }
}

/// Float-backend locus machinery: the locus function, its gradient and its
/// second partials.
pub struct LocusTracer {
    leg: Leg,
    delta: Series2<f64>,
    delta_u: Series2<f64>,
    delta_v: Series2<f64>,
    delta_uu: Series2<f64>,
    delta_uv: Series2<f64>,
    delta_vv: Series2<f64>,
}

impl LocusTracer {
    pub fn new(f: &LegendrianJet<f64>, leg: Leg) -> Result<Self> {
        let delta = delta_series(f, leg)?;
        let delta_u = delta.differentiate(Var::U)?;
        let delta_v = delta.differentiate(Var::V)?;
        let delta_uu = delta_u.differentiate(Var::U)?;
        let delta_uv = delta_u.differentiate(Var::V)?;
        let delta_vv = delta_v.differentiate(Var::V)?;
        Ok(LocusTracer {
            leg,
            delta,
            delta_u,
            delta_v,
            delta_uu,
            delta_uv,
            delta_vv,
        })
    }

    pub fn leg(&self) -> Leg {
        self.leg
    }

    pub fn delta(&self) -> &Series2<f64> {
        &self.delta
    }

    /// Derivative of `Delta` along the kernel direction of this leg.
    pub fn eta_derivative(&self, pt: [f64; 2]) -> f64 {
        match self.leg {
            Leg::Pi1 => self.delta_v.evaluate(&pt[0], &pt[1]),
            Leg::Pi2 => self.delta_u.evaluate(&pt[0], &pt[1]),
        }
    }

    fn eta_gradient(&self, pt: [f64; 2]) -> [f64; 2] {
        match self.leg {
            Leg::Pi1 => [
                self.delta_uv.evaluate(&pt[0], &pt[1]),
                self.delta_vv.evaluate(&pt[0], &pt[1]),
            ],
            Leg::Pi2 => [
                self.delta_uu.evaluate(&pt[0], &pt[1]),
                self.delta_uv.evaluate(&pt[0], &pt[1]),
            ],
        }
    }

    fn second_along_eta(&self, pt: [f64; 2]) -> f64 {
        match self.leg {
            Leg::Pi1 => self.delta_vv.evaluate(&pt[0], &pt[1]),
            Leg::Pi2 => self.delta_uu.evaluate(&pt[0], &pt[1]),
        }
    }

    fn transverse_derivative(&self, pt: [f64; 2]) -> f64 {
        match self.leg {
            Leg::Pi1 => self.delta_u.evaluate(&pt[0], &pt[1]),
            Leg::Pi2 => self.delta_v.evaluate(&pt[0], &pt[1]),
        }
    }

    pub fn value(&self, pt: [f64; 2]) -> f64 {
        self.delta.evaluate(&pt[0], &pt[1])
    }

    pub fn grad(&self, pt: [f64; 2]) -> [f64; 2] {
        [
            self.delta_u.evaluate(&pt[0], &pt[1]),
            self.delta_v.evaluate(&pt[0], &pt[1]),
        ]
    }

    /// Unit tangent of the locus: the gradient rotated by -90 degrees.
    fn tangent(&self, pt: [f64; 2]) -> [f64; 2] {
        let g = self.grad(pt);
        let n = (g[0] * g[0] + g[1] * g[1]).sqrt();
        [g[1] / n, -g[0] / n]
    }

    /// Newton projection onto the locus along the gradient.
    pub fn correct(&self, mut pt: [f64; 2], params: &TraceParams) -> Result<[f64; 2]> {
        for _ in 0..params.max_corrector {
            let val = self.value(pt);
            if val.abs() <= params.newton_tol {
                return Ok(pt);
            }
            let g = self.grad(pt);
            let n2 = g[0] * g[0] + g[1] * g[1];
            if n2 <= params.newton_tol {
                break;
            }
            pt = [pt[0] - val * g[0] / n2, pt[1] - val * g[1] / n2];
        }
        Err(Error::NewtonDiverged {
            iters: params.max_corrector,
            u: pt[0],
            v: pt[1],
        })
    }

    /// One pseudo-arclength step of size `h` in the direction aligning with
    /// `dir`: tangent predictor plus a Newton corrector constrained to the
    /// hyperplane orthogonal to the tangent.
    fn step_from(&self, pt: [f64; 2], dir: [f64; 2], h: f64, params: &TraceParams) -> Result<[f64; 2]> {
        let mut t = self.tangent(pt);
        if t[0] * dir[0] + t[1] * dir[1] < 0.0 {
            t = [-t[0], -t[1]];
        }
        let pred = [pt[0] + h * t[0], pt[1] + h * t[1]];
        let mut cur = pred;
        for _ in 0..params.max_corrector {
            let r1 = self.value(cur);
            let r2 = t[0] * (cur[0] - pred[0]) + t[1] * (cur[1] - pred[1]);
            if r1.abs() <= params.newton_tol && r2.abs() <= params.newton_tol {
                return Ok(cur);
            }
            let g = self.grad(cur);
            let det = g[0] * t[1] - g[1] * t[0];
            if det.abs() < 1e-15 {
                break;
            }
            // Solve [g; t] d = -(r1, r2).
            let d0 = (-r1 * t[1] + r2 * g[1]) / det;
            let d1 = (-r2 * g[0] + r1 * t[0]) / det;
            cur = [cur[0] + d0, cur[1] + d1];
        }
        Err(Error::NewtonDiverged {
            iters: params.max_corrector,
            u: pred[0],
            v: pred[1],
        })
    }

    fn inside(&self, pt: [f64; 2], b: &[f64; 4]) -> bool {
        pt[0] >= b[0] && pt[0] <= b[1] && pt[1] >= b[2] && pt[1] <= b[3]
    }

    /// Traces the locus through `seed` in both directions. The seed must be
    /// near-singular and non-degenerate. Points are returned in curve order
    /// with the corrected seed in the middle.
    pub fn trace(&self, seed: [f64; 2], params: &TraceParams) -> Result<Vec<[f64; 2]>> {
        let value = self.value(seed);
        let g = self.grad(seed);
        let gn = (g[0] * g[0] + g[1] * g[1]).sqrt();
        if value.abs() > params.seed_tol || gn <= params.seed_tol {
            return Err(Error::DegenerateSeed {
                u: seed[0],
                v: seed[1],
                delta: value.abs(),
                grad: gn,
            });
        }
        let seed = self.correct(seed, params)?;
        let half = params.max_steps / 2;
        let dir0 = self.tangent(seed);
        let mut forward = Vec::new();
        let mut dir = dir0;
        let mut cur = seed;
        for _ in 0..half {
            match self.step_from(cur, dir, params.step, params) {
                Ok(next) => {
                    if !self.inside(next, &params.bounds) {
                        break;
                    }
                    dir = [next[0] - cur[0], next[1] - cur[1]];
                    cur = next;
                    forward.push(next);
                }
                Err(_) => break,
            }
        }
        let mut backward = Vec::new();
        let mut dir = [-dir0[0], -dir0[1]];
        let mut cur = seed;
        for _ in 0..half {
            match self.step_from(cur, dir, params.step, params) {
                Ok(next) => {
                    if !self.inside(next, &params.bounds) {
                        break;
                    }
                    dir = [next[0] - cur[0], next[1] - cur[1]];
                    cur = next;
                    backward.push(next);
                }
                Err(_) => break,
            }
        }
        backward.reverse();
        backward.push(seed);
        backward.extend(forward);
        Ok(backward)
    }
}

/// Traces the singular locus of `pi o f` from a seed; see
/// [`LocusTracer::trace`].
pub fn trace_singular_locus(
    f: &LegendrianJet<f64>,
    leg: Leg,
    seed: [f64; 2],
    params: &TraceParams,
) -> Result<Vec<[f64; 2]>> {
    LocusTracer::new(f, leg)?.trace(seed, params)
}

/// Kernel field of `d(pi o f)` along a list of locus points: the null
/// direction of the rank-1 Jacobian, sign-continuous along the list.
pub fn kernel_field(
    f: &LegendrianJet<f64>,
    leg: Leg,
    gamma: &[[f64; 2]],
) -> Result<Vec<[f64; 2]>> {
    let comps: Vec<&Series2<f64>> = match leg {
        Leg::Pi1 => vec![f.x(), f.y(), f.z()],
        Leg::Pi2 => {
            // Kernel directions ignore the component order, so the Hess
            // ordering (p, q, px + qy - z) serves both families.
            vec![f.p(), f.q(), f.z()]
        }
    };
    // For pi2 the third row is d(px + qy - z); build it explicitly.
    let dual_z = &(&f.p().mul_series(f.x()) + &f.q().mul_series(f.y())) - f.z();
    let rows_src: Vec<Series2<f64>> = match leg {
        Leg::Pi1 => comps.into_iter().cloned().collect(),
        Leg::Pi2 => vec![f.p().clone(), f.q().clone(), dual_z],
    };
    let mut row_derivs = Vec::new();
    for r in &rows_src {
        row_derivs.push((r.differentiate(Var::U)?, r.differentiate(Var::V)?));
    }
    let tol = 1e-7;
    let mut out: Vec<[f64; 2]> = Vec::with_capacity(gamma.len());
    for pt in gamma {
        let rows: Vec<[f64; 2]> = row_derivs
            .iter()
            .map(|(ru, rv)| [ru.evaluate(&pt[0], &pt[1]), rv.evaluate(&pt[0], &pt[1])])
            .collect();
        let scale = rows
            .iter()
            .map(|r| r[0].abs().max(r[1].abs()))
            .fold(0.0, f64::max);
        if scale <= tol {
            return Err(Error::RankNotOne {
                rank: 0,
                u: pt[0],
                v: pt[1],
            });
        }
        for a in 0..3 {
            for b in a + 1..3 {
                let minor = rows[a][0] * rows[b][1] - rows[a][1] * rows[b][0];
                if minor.abs() > tol * scale.max(1.0) * scale.max(1.0) {
                    return Err(Error::RankNotOne {
                        rank: 2,
                        u: pt[0],
                        v: pt[1],
                    });
                }
            }
        }
        let best = rows
            .iter()
            .max_by(|a, b| {
                let na = a[0].abs().max(a[1].abs());
                let nb = b[0].abs().max(b[1].abs());
                na.partial_cmp(&nb).expect("finite rows")
            })
            .expect("three rows");
        let n = (best[0] * best[0] + best[1] * best[1]).sqrt();
        let mut eta = [-best[1] / n, best[0] / n];
        if let Some(prev) = out.last() {
            if eta[0] * prev[0] + eta[1] * prev[1] < 0.0 {
                eta = [-eta[0], -eta[1]];
            }
        }
        out.push(eta);
    }
    Ok(out)
}

/// Float-path classification: measures `det(gamma'(t), eta)` by central
/// finite differences over a locally traced polyline with spacing
/// `params.fd_step` and applies the criterion with `params.det_tol`.
pub fn classify_point_traced(
    f: &LegendrianJet<f64>,
    leg: Leg,
    point: [f64; 2],
    tol: f64,
    params: &TraceParams,
) -> Result<SingularityReport> {
    let tracer = LocusTracer::new(f, leg)?;
    classify_traced_with(&tracer, point, tol, params)
}

/// [`classify_point_traced`] against a prepared tracer.
pub fn classify_traced_with(
    tracer: &LocusTracer,
    point: [f64; 2],
    tol: f64,
    params: &TraceParams,
) -> Result<SingularityReport> {
    let leg = tracer.leg();
    let delta0 = tracer.value(point);
    let grad = tracer.grad(point);
    let report = |verdict, det0, det_derivative| SingularityReport {
        point,
        leg,
        verdict,
        delta: delta0,
        grad_delta: grad,
        det0,
        det_derivative,
    };
    if delta0.abs() > tol {
        return Ok(report(Verdict::Immersion, None, None));
    }
    let gn = (grad[0] * grad[0] + grad[1] * grad[1]).sqrt();
    if gn <= tol {
        return Ok(report(Verdict::Degenerate, None, None));
    }
    let dets = det_profile(tracer, point, 2, params)?;
    let det0 = dets[2];
    let h = params.fd_step;
    let det_derivative = (dets[3] - dets[1]) / (2.0 * h);
    let verdict = if det0.abs() > params.det_tol {
        Verdict::CuspidalEdge
    } else if det_derivative.abs() > params.deriv_tol {
        Verdict::Swallowtail
    } else {
        Verdict::Unresolved
    };
    Ok(report(verdict, Some(det0), Some(det_derivative)))
}

/// Fast float classification from evaluated partials of `Delta` at the
/// point, without recentering or tracing: the same implicit-derivative
/// formulas as [`classify_point`]. `det(gamma', eta)` vanishes along the
/// locus exactly where the kernel-direction derivative of `Delta` does, so
/// the criterion reads off `Delta_eta` and `Delta_eta_eta / Delta_transverse`.
pub fn classify_point_local(
    tracer: &LocusTracer,
    point: [f64; 2],
    tol: f64,
) -> SingularityReport {
    let leg = tracer.leg();
    let delta0 = tracer.value(point);
    let grad = tracer.grad(point);
    let report = |verdict, det0, det_derivative| SingularityReport {
        point,
        leg,
        verdict,
        delta: delta0,
        grad_delta: grad,
        det0,
        det_derivative,
    };
    if delta0.abs() > tol {
        return report(Verdict::Immersion, None, None);
    }
    if grad[0].abs() <= tol && grad[1].abs() <= tol {
        return report(Verdict::Degenerate, None, None);
    }
    let along = tracer.eta_derivative(point);
    if along.abs() > tol {
        let det0 = match leg {
            Leg::Pi1 => 1.0,
            Leg::Pi2 => -1.0,
        };
        return report(Verdict::CuspidalEdge, Some(det0), None);
    }
    let transverse = tracer.transverse_derivative(point);
    let derivative = match leg {
        Leg::Pi1 => -tracer.second_along_eta(point) / transverse,
        Leg::Pi2 => tracer.second_along_eta(point) / transverse,
    };
    let verdict = if derivative.abs() > tol {
        Verdict::Swallowtail
    } else {
        Verdict::Unresolved
    };
    report(verdict, Some(0.0), Some(derivative))
}

/// `det(gamma'(t), eta)` at `2k + 1` equally spaced polyline points around
/// `point`, with `eta` the adapted-chart kernel direction.
fn det_profile(
    tracer: &LocusTracer,
    point: [f64; 2],
    k: usize,
    params: &TraceParams,
) -> Result<Vec<f64>> {
    let leg = tracer.leg();
    let h = params.fd_step;
    let n = 2 * k + 2;
    let center = tracer.correct(point, params)?;
    let dir0 = tracer.tangent(center);
    // Build the local polyline gamma(-k-1 .. k+1) with spacing h.
    let mut pts = std::collections::VecDeque::with_capacity(2 * n + 1);
    pts.push_back(center);
    let mut cur = center;
    let mut dir = dir0;
    for _ in 0..n {
        let next = tracer.step_from(cur, dir, h, params)?;
        dir = [next[0] - cur[0], next[1] - cur[1]];
        cur = next;
        pts.push_back(next);
    }
    cur = center;
    dir = [-dir0[0], -dir0[1]];
    for _ in 0..n {
        let next = tracer.step_from(cur, dir, h, params)?;
        dir = [next[0] - cur[0], next[1] - cur[1]];
        cur = next;
        pts.push_front(next);
    }
    let pts: Vec<[f64; 2]> = pts.into_iter().collect();
    // eta is constant in the adapted chart. The sign of det depends on the
    // trace orientation, but the derivative along the locus does not;
    // verdicts only use magnitudes.
    let eta = match leg {
        Leg::Pi1 => [0.0, 1.0],
        Leg::Pi2 => [1.0, 0.0],
    };
    let center_idx = n;
    let mut dets = Vec::with_capacity(2 * k + 1);
    for i in center_idx - k..=center_idx + k {
        let prev = pts[i - 1];
        let next = pts[i + 1];
        let gp = [(next[0] - prev[0]) / (2.0 * h), (next[1] - prev[1]) / (2.0 * h)];
        dets.push(gp[0] * eta[1] - gp[1] * eta[0]);
    }
    Ok(dets)
}

/// Seeds for singular-locus searches: sign changes of `Delta` on a
/// `grid x grid` lattice over the domain, Newton-corrected and deduplicated.
pub fn seed_singular_points(
    tracer: &LocusTracer,
    domain: [f64; 4],
    grid: usize,
    params: &TraceParams,
) -> Vec<[f64; 2]> {
    assert!(grid >= 2, "grid needs at least 2 points per side");
    let [u0, u1, v0, v1] = domain;
    let nu = grid;
    let nv = grid;
    let du = (u1 - u0) / (nu - 1) as f64;
    let dv = (v1 - v0) / (nv - 1) as f64;
    let at = |i: usize, j: usize| [u0 + i as f64 * du, v0 + j as f64 * dv];
    let mut values = vec![0.0; nu * nv];
    for i in 0..nu {
        for j in 0..nv {
            let pt = at(i, j);
            values[i * nv + j] = tracer.value(pt);
        }
    }
    let mut seeds: Vec<[f64; 2]> = Vec::new();
    let mut push = |pt: [f64; 2]| {
        let min_sep = (du.min(dv) * 0.5).max(params.step * 0.5);
        if seeds
            .iter()
            .all(|s| (s[0] - pt[0]).hypot(s[1] - pt[1]) > min_sep)
        {
            seeds.push(pt);
        }
    };
    for i in 0..nu {
        for j in 0..nv {
            let a = values[i * nv + j];
            if i + 1 < nu {
                let b = values[(i + 1) * nv + j];
                if a == 0.0 || a.signum() != b.signum() {
                    let pa = at(i, j);
                    let pb = at(i + 1, j);
                    let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
                    if let Ok(c) = tracer.correct(mid, params) {
                        push(c);
                    }
                }
            }
            if j + 1 < nv {
                let b = values[i * nv + j + 1];
                if a == 0.0 || a.signum() != b.signum() {
                    let pa = at(i, j);
                    let pb = at(i, j + 1);
                    let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
                    if let Ok(c) = tracer.correct(mid, params) {
                        push(c);
                    }
                }
            }
        }
    }
    seeds
}

/// Finds swallowtail candidates along a traced polyline. Along the locus
/// the criterion determinant vanishes exactly where the kernel-direction
/// derivative of `Delta` does, so sign changes of `Delta_eta` between
/// consecutive vertices are sharpened by a 2D Newton iteration on the
/// square system `Delta = 0, Delta_eta = 0`.
pub fn find_det_crossings(
    tracer: &LocusTracer,
    polyline: &[[f64; 2]],
    params: &TraceParams,
) -> Vec<[f64; 2]> {
    if polyline.len() < 2 {
        return Vec::new();
    }
    let mut crossings = Vec::new();
    let mut prev_pt = polyline[0];
    let mut prev_s = tracer.eta_derivative(prev_pt);
    for pt in &polyline[1..] {
        let s = tracer.eta_derivative(*pt);
        if prev_s.signum() != s.signum() {
            let mid = [(prev_pt[0] + pt[0]) / 2.0, (prev_pt[1] + pt[1]) / 2.0];
            if let Some(root) = newton_delta_eta(tracer, mid, params) {
                crossings.push(root);
            }
        }
        prev_pt = *pt;
        prev_s = s;
    }
    crossings
}

fn newton_delta_eta(
    tracer: &LocusTracer,
    start: [f64; 2],
    params: &TraceParams,
) -> Option<[f64; 2]> {
    let mut pt = start;
    for _ in 0..params.max_corrector {
        let f1 = tracer.value(pt);
        let f2 = tracer.eta_derivative(pt);
        if f1.abs() <= params.newton_tol && f2.abs() <= params.newton_tol {
            return Some(pt);
        }
        let g1 = tracer.grad(pt);
        let g2 = tracer.eta_gradient(pt);
        let det = g1[0] * g2[1] - g1[1] * g2[0];
        if det.abs() < 1e-14 {
            return None;
        }
        let d0 = (f1 * g2[1] - f2 * g1[1]) / det;
        let d1 = (f2 * g1[0] - f1 * g2[0]) / det;
        pt = [pt[0] - d0, pt[1] - d1];
    }
    None
}

/// A coefficient condition defining part of a stratum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cond {
    #[serde(rename = "zero")]
    Zero,
    #[serde(rename = "nonzero")]
    Nonzero,
}

/// Equation family a stratum table belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StratumFamily {
    Hess1,
    Gauss,
    Developable,
}

/// One stratum of a coefficient stratification, with the verdicts the
/// classification predicts strictly inside it.
#[derive(Debug, Clone, Serialize)]
pub struct Stratum {
    pub family: StratumFamily,
    pub label: &'static str,
    pub conditions: Vec<(&'static str, Cond)>,
    pub predicted_pi1: Option<Verdict>,
    pub predicted_pi2: Option<Verdict>,
}

impl Stratum {
    fn new(
        family: StratumFamily,
        label: &'static str,
        conditions: Vec<(&'static str, Cond)>,
        pi1: Option<Verdict>,
        pi2: Option<Verdict>,
    ) -> Self {
        Stratum {
            family,
            label,
            conditions,
            predicted_pi1: pi1,
            predicted_pi2: pi2,
        }
    }
}

/// Stratification of cubic holomorphic data `h = sum (a_k + i b_k) w^k`:
/// case (i) `a1 != 0` (both legs immersive), (ii) `a1 = 0, a2 != 0, b2 != 0`
/// (both cuspidal edges), (iii) `a1 = 0, a2 != 0, b2 = 0, a3 != 0`
/// (swallowtail over cuspidal edge), (iv) `a1 = 0, a2 = 0, b2 != 0, a3 != 0`
/// (cuspidal edge over swallowtail). Anything deeper is outside the generic
/// list.
#[allow(clippy::too_many_arguments)]
pub fn stratify_hess1<K: Scalar>(
    a1: &K,
    _b1: &K,
    a2: &K,
    b2: &K,
    a3: &K,
    _b3: &K,
    tol: f64,
) -> Stratum {
    use Verdict::*;
    let f = StratumFamily::Hess1;
    if !a1.approx_zero(tol) {
        return Stratum::new(
            f,
            "i",
            vec![("a1", Cond::Nonzero)],
            Some(Immersion),
            Some(Immersion),
        );
    }
    let a2_nz = !a2.approx_zero(tol);
    let b2_nz = !b2.approx_zero(tol);
    let a3_nz = !a3.approx_zero(tol);
    if a2_nz && b2_nz {
        return Stratum::new(
            f,
            "ii",
            vec![("a1", Cond::Zero), ("a2", Cond::Nonzero), ("b2", Cond::Nonzero)],
            Some(CuspidalEdge),
            Some(CuspidalEdge),
        );
    }
    if a2_nz && !b2_nz && a3_nz {
        return Stratum::new(
            f,
            "iii",
            vec![
                ("a1", Cond::Zero),
                ("a2", Cond::Nonzero),
                ("b2", Cond::Zero),
                ("a3", Cond::Nonzero),
            ],
            Some(Swallowtail),
            Some(CuspidalEdge),
        );
    }
    if !a2_nz && b2_nz && a3_nz {
        return Stratum::new(
            f,
            "iv",
            vec![
                ("a1", Cond::Zero),
                ("a2", Cond::Zero),
                ("b2", Cond::Nonzero),
                ("a3", Cond::Nonzero),
            ],
            Some(CuspidalEdge),
            Some(Swallowtail),
        );
    }
    Stratum::new(f, "outside", vec![("a1", Cond::Zero)], None, None)
}

/// Stratification of Cauchy data coefficients `(B, C, F, G, K, L)`. The
/// W-strata refine the case list: `W0 = {C != 0}` (case (i), both legs
/// immersive), `W1 = {C = 0, F != 0, G != 0}` (case (ii), both cuspidal
/// edges), `W2_2 = {C = 0, F = 0, G != 0, L != 0}` (case (iii): `pi2` is the
/// swallowtail, `pi1` the cuspidal edge), `W1_2 = {C = 0, F != 0, G = 0,
/// L != 0}` (case (iv): `pi1` is the swallowtail, `pi2` the cuspidal edge).
/// The codimension >= 3 strata `W1_3, W2_3, W3_3, W4` carry no verdicts.
pub fn stratify_gauss<K: Scalar>(
    _b: &K,
    c: &K,
    f: &K,
    g: &K,
    _k: &K,
    l: &K,
    tol: f64,
) -> Stratum {
    use Verdict::*;
    let fam = StratumFamily::Gauss;
    if !c.approx_zero(tol) {
        return Stratum::new(
            fam,
            "W0/i",
            vec![("C", Cond::Nonzero)],
            Some(Immersion),
            Some(Immersion),
        );
    }
    let f_nz = !f.approx_zero(tol);
    let g_nz = !g.approx_zero(tol);
    let l_nz = !l.approx_zero(tol);
    match (f_nz, g_nz, l_nz) {
        (true, true, _) => Stratum::new(
            fam,
            "W1/ii",
            vec![("C", Cond::Zero), ("F", Cond::Nonzero), ("G", Cond::Nonzero)],
            Some(CuspidalEdge),
            Some(CuspidalEdge),
        ),
        (false, true, true) => Stratum::new(
            fam,
            "W2_2/iii",
            vec![
                ("C", Cond::Zero),
                ("F", Cond::Zero),
                ("G", Cond::Nonzero),
                ("L", Cond::Nonzero),
            ],
            Some(CuspidalEdge),
            Some(Swallowtail),
        ),
        (true, false, true) => Stratum::new(
            fam,
            "W1_2/iv",
            vec![
                ("C", Cond::Zero),
                ("F", Cond::Nonzero),
                ("G", Cond::Zero),
                ("L", Cond::Nonzero),
            ],
            Some(Swallowtail),
            Some(CuspidalEdge),
        ),
        (false, false, true) => {
            Stratum::new(fam, "W1_3", vec![("C", Cond::Zero)], None, None)
        }
        (false, true, false) => {
            Stratum::new(fam, "W2_3", vec![("C", Cond::Zero)], None, None)
        }
        (true, false, false) => {
            Stratum::new(fam, "W3_3", vec![("C", Cond::Zero)], None, None)
        }
        (false, false, false) => {
            Stratum::new(fam, "W4", vec![("C", Cond::Zero)], None, None)
        }
    }
}

/// Stratification of developable data `(Bt, Ct, C, Dt)`: case (i)
/// `Bt != 0` (immersion), (ii) `Bt = 0, Ct != 0, C != 0` (cuspidal edge),
/// (iii) `Bt = 0, Ct = 0, C != 0, Dt != 0` (swallowtail). Only the `pi1`
/// leg classifies; `pi2` collapses to a curve.
pub fn stratify_developable<K: Scalar>(
    b_tilde: &K,
    c_tilde: &K,
    c: &K,
    d_tilde: &K,
    tol: f64,
) -> Stratum {
    use Verdict::*;
    let fam = StratumFamily::Developable;
    if !b_tilde.approx_zero(tol) {
        return Stratum::new(fam, "i", vec![("Bt", Cond::Nonzero)], Some(Immersion), None);
    }
    let ct_nz = !c_tilde.approx_zero(tol);
    let c_nz = !c.approx_zero(tol);
    let dt_nz = !d_tilde.approx_zero(tol);
    if ct_nz && c_nz {
        return Stratum::new(
            fam,
            "ii",
            vec![("Bt", Cond::Zero), ("Ct", Cond::Nonzero), ("C", Cond::Nonzero)],
            Some(CuspidalEdge),
            None,
        );
    }
    if !ct_nz && c_nz && dt_nz {
        return Stratum::new(
            fam,
            "iii",
            vec![
                ("Bt", Cond::Zero),
                ("Ct", Cond::Zero),
                ("C", Cond::Nonzero),
                ("Dt", Cond::Nonzero),
            ],
            Some(Swallowtail),
            None,
        );
    }
    Stratum::new(fam, "outside", vec![("Bt", Cond::Zero)], None, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use crate::series::{ComplexSeries1, Series1};
    use crate::solutions::{
        build_hess_positive, cuspidal_edge_normal_form, swallowtail_normal_form,
    };

    fn golden_jet(order: usize) -> LegendrianJet<Rational> {
        let h = ComplexSeries1::new(
            Series1::from_terms(3, &[(2, rat(1, 1)), (3, rat(1, 1))]),
            Series1::zero(3),
        )
        .unwrap();
        build_hess_positive(&h, order).unwrap()
    }

    #[test]
    fn delta_of_cuspidal_edge_form() {
        let f = cuspidal_edge_normal_form::<Rational>(4);
        let delta = delta_series(&f, Leg::Pi1).unwrap();
        assert_eq!(delta, Series2::monomial(0, 1, rat(2, 1), 3));
    }

    #[test]
    fn delta_of_swallowtail_form() {
        let f = swallowtail_normal_form::<Rational>(4);
        let delta = delta_series(&f, Leg::Pi1).unwrap();
        let expect = Series2::from_terms(3, &[(0, 2, rat(3, 1)), (1, 0, rat(1, 1))]);
        assert_eq!(delta, expect);
    }

    #[test]
    fn delta_of_golden_example_pi1() {
        // y_v = 2u + 3u^2 - 3v^2.
        let delta = delta_series(&golden_jet(4), Leg::Pi1).unwrap();
        let expect = Series2::from_terms(
            3,
            &[(1, 0, rat(2, 1)), (2, 0, rat(3, 1)), (0, 2, rat(-3, 1))],
        );
        assert_eq!(delta, expect);
    }

    #[test]
    fn deltas_of_both_legs_coincide_for_hess1() {
        let f = golden_jet(5);
        let d1 = delta_series(&f, Leg::Pi1).unwrap();
        let d2 = delta_series(&f, Leg::Pi2).unwrap();
        assert_eq!(d1, d2);
    }

    #[test]
    fn classify_cuspidal_edge_normal_form() {
        let f = cuspidal_edge_normal_form::<Rational>(4);
        let c = classify_point(&f, Leg::Pi1, (&rat(0, 1), &rat(0, 1)), 1e-9).unwrap();
        assert_eq!(c.verdict, Verdict::CuspidalEdge);
        assert_eq!(c.det0, Some(rat(1, 1)));
    }

    #[test]
    fn classify_swallowtail_normal_form() {
        let f = swallowtail_normal_form::<Rational>(5);
        let c = classify_point(&f, Leg::Pi1, (&rat(0, 1), &rat(0, 1)), 1e-9).unwrap();
        assert_eq!(c.verdict, Verdict::Swallowtail);
        assert_eq!(c.det0, Some(rat(0, 1)));
        // u'' = -Delta_vv / Delta_u = -6 for Delta = 3v^2 + u.
        assert_eq!(c.det_derivative, Some(rat(-6, 1)));
    }

    #[test]
    fn classify_golden_example_both_legs() {
        let f = golden_jet(5);
        let zero = (rat(0, 1), rat(0, 1));
        let c1 = classify_point(&f, Leg::Pi1, (&zero.0, &zero.1), 1e-9).unwrap();
        let c2 = classify_point(&f, Leg::Pi2, (&zero.0, &zero.1), 1e-9).unwrap();
        assert_eq!(c1.verdict, Verdict::Swallowtail);
        assert_eq!(c2.verdict, Verdict::CuspidalEdge);
    }

    #[test]
    fn classify_away_from_locus_is_immersion() {
        let f = golden_jet(5);
        let c = classify_point(&f, Leg::Pi1, (&rat(1, 4), &rat(0, 1)), 1e-9).unwrap();
        assert_eq!(c.verdict, Verdict::Immersion);
    }

    #[test]
    fn classify_degenerate_point() {
        // h = w^3 has a1 = a2 = b2 = 0: grad Delta = 0 at the origin.
        let h = ComplexSeries1::new(
            Series1::from_terms(3, &[(3, rat(1, 1))]),
            Series1::zero(3),
        )
        .unwrap();
        let f = build_hess_positive(&h, 5).unwrap();
        let c = classify_point(&f, Leg::Pi1, (&rat(0, 1), &rat(0, 1)), 1e-9).unwrap();
        assert_eq!(c.verdict, Verdict::Degenerate);
    }

    #[test]
    fn trace_swallowtail_locus() {
        let f = swallowtail_normal_form::<f64>(5);
        let params = TraceParams::default();
        let pts = trace_singular_locus(&f, Leg::Pi1, [0.0, 0.0], &params).unwrap();
        assert!(pts.len() > 20);
        for pt in &pts {
            assert!((3.0 * pt[1] * pt[1] + pt[0]).abs() < 1e-8, "{pt:?}");
        }
        // Spacing between consecutive points is about the step.
        for w in pts.windows(2) {
            let d = (w[0][0] - w[1][0]).hypot(w[0][1] - w[1][1]);
            assert!((d - params.step).abs() < params.step * 0.5, "spacing {d}");
        }
    }

    #[test]
    fn trace_cuspidal_locus_is_u_axis() {
        let f = cuspidal_edge_normal_form::<f64>(4);
        let pts =
            trace_singular_locus(&f, Leg::Pi1, [0.0, 0.0], &TraceParams::default()).unwrap();
        for pt in &pts {
            assert!(pt[1].abs() < 1e-10);
        }
    }

    #[test]
    fn trace_golden_locus_parabola() {
        // 2u + 3u^2 - 3v^2 = 0 gives u = (3/2) v^2 + O(v^4) near 0.
        let f = golden_jet(5).to_float();
        let pts =
            trace_singular_locus(&f, Leg::Pi1, [0.0, 0.0], &TraceParams::default()).unwrap();
        for pt in pts.iter().filter(|p| p[1].abs() < 0.2) {
            // Next correction term is -(27/8) v^4.
            let v2 = pt[1] * pt[1];
            assert!((pt[0] - 1.5 * v2).abs() < 4.0 * v2 * v2 + 1e-9, "{pt:?}");
        }
    }

    #[test]
    fn trace_rejects_degenerate_seed() {
        let h = ComplexSeries1::new(
            Series1::from_terms(3, &[(3, 1.0f64)]),
            Series1::zero(3),
        )
        .unwrap();
        let f = build_hess_positive(&h, 5).unwrap();
        let r = trace_singular_locus(&f, Leg::Pi1, [0.0, 0.0], &TraceParams::default());
        assert!(matches!(r, Err(Error::DegenerateSeed { .. })));
    }

    #[test]
    fn kernel_of_cuspidal_edge_form() {
        let f = cuspidal_edge_normal_form::<f64>(4);
        let etas = kernel_field(&f, Leg::Pi1, &[[0.0, 0.0], [0.1, 0.0]]).unwrap();
        for eta in etas {
            assert!(eta[0].abs() < 1e-9);
            assert!((eta[1].abs() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn kernel_of_pi2_is_u_direction() {
        let f = golden_jet(5).to_float();
        // Points on the pi2 locus p_u = 0 near 0: u = (3/2)v^2 + ...
        let tracer = LocusTracer::new(&f, Leg::Pi2).unwrap();
        let pt = tracer
            .correct([0.0, 0.05], &TraceParams::default())
            .unwrap();
        let etas = kernel_field(&f, Leg::Pi2, &[pt]).unwrap();
        assert!((etas[0][0].abs() - 1.0).abs() < 1e-6, "{:?}", etas[0]);
    }

    #[test]
    fn kernel_rejects_full_rank_points() {
        let f = cuspidal_edge_normal_form::<f64>(4);
        let r = kernel_field(&f, Leg::Pi1, &[[0.0, 0.4]]);
        assert!(matches!(r, Err(Error::RankNotOne { .. })));
    }

    #[test]
    fn traced_path_agrees_on_normal_forms() {
        let params = TraceParams::default();
        let ce = cuspidal_edge_normal_form::<f64>(5);
        let r = classify_point_traced(&ce, Leg::Pi1, [0.0, 0.0], 1e-9, &params).unwrap();
        assert_eq!(r.verdict, Verdict::CuspidalEdge);
        assert!((r.det0.unwrap().abs() - 1.0).abs() < 1e-3);

        let st = swallowtail_normal_form::<f64>(5);
        let r = classify_point_traced(&st, Leg::Pi1, [0.0, 0.0], 1e-9, &params).unwrap();
        assert_eq!(r.verdict, Verdict::Swallowtail);
        assert!(r.det0.unwrap().abs() < 1e-4);
        // |d/dt det| = 6 v'(0)^2 with unit parameter speed.
        assert!((r.det_derivative.unwrap().abs() - 6.0).abs() < 1e-2, "{r:?}");
    }

    #[test]
    fn traced_path_agrees_on_golden_example() {
        let f = golden_jet(6).to_float();
        let params = TraceParams::default();
        let r1 = classify_point_traced(&f, Leg::Pi1, [0.0, 0.0], 1e-9, &params).unwrap();
        let r2 = classify_point_traced(&f, Leg::Pi2, [0.0, 0.0], 1e-9, &params).unwrap();
        assert_eq!(r1.verdict, Verdict::Swallowtail);
        assert_eq!(r2.verdict, Verdict::CuspidalEdge);
    }

    #[test]
    fn seeds_find_the_locus() {
        let f = golden_jet(5).to_float();
        let tracer = LocusTracer::new(&f, Leg::Pi1).unwrap();
        let params = TraceParams::default();
        let seeds = seed_singular_points(&tracer, [-1.0, 1.0, -1.0, 1.0], 21, &params);
        assert!(!seeds.is_empty());
        for s in &seeds {
            assert!(tracer.value(*s).abs() <= params.newton_tol * 10.0);
        }
    }

    #[test]
    fn det_crossing_refinement_finds_swallowtail_point() {
        let f = golden_jet(6).to_float();
        let tracer = LocusTracer::new(&f, Leg::Pi1).unwrap();
        let params = TraceParams::default();
        let seed = tracer.correct([0.1, 0.3], &params).unwrap();
        let polyline = tracer.trace(seed, &params).unwrap();
        let crossings = find_det_crossings(&tracer, &polyline, &params);
        assert_eq!(crossings.len(), 1, "{crossings:?}");
        let c = crossings[0];
        assert!(c[0].abs() < 1e-9 && c[1].abs() < 1e-9, "{c:?}");
        // The sharpened point classifies as a swallowtail on both paths.
        let local = classify_point_local(&tracer, c, 1e-9);
        let traced = classify_traced_with(&tracer, c, 1e-9, &params).unwrap();
        assert_eq!(local.verdict, Verdict::Swallowtail);
        assert_eq!(traced.verdict, Verdict::Swallowtail);
    }

    #[test]
    fn adapt_chart_reparametrizes_scaled_jet() {
        // Reparametrize the golden jet by (u, v) -> (u + v/2, v) to leave
        // the adapted chart, then recover it.
        let f = golden_jet(5);
        let u_new = Series2::from_terms(5, &[(1, 0, rat(1, 1)), (0, 1, rat(1, 2))]);
        let v_new = Series2::var(Var::V, 5);
        let reparam = |c: &Series2<Rational>| c.compose(&u_new, &v_new).unwrap();
        let g = LegendrianJet::from_components(
            reparam(f.x()),
            reparam(f.y()),
            reparam(f.z()),
            reparam(f.p()),
            reparam(f.q()),
        );
        assert_eq!(g.chart(), Chart::General);
        let back = adapt_chart(&g).unwrap();
        assert_eq!(back.chart(), Chart::Adapted);
        assert_eq!(back.y(), f.y());
        assert_eq!(back.z(), f.z());
        assert_eq!(back.p(), f.p());
    }

    #[test]
    fn adapt_chart_uses_swap_when_needed() {
        // (y, p) invertible but (x, q) not: f = (0, u, 0, v, 0) is a
        // Legendrian plane with x = q = 0.
        let f = LegendrianJet::from_components(
            Series2::<Rational>::zero(4),
            Series2::var(Var::U, 4),
            Series2::zero(4),
            Series2::var(Var::V, 4),
            Series2::zero(4),
        );
        let adapted = adapt_chart(&f).unwrap();
        assert_eq!(adapted.chart(), Chart::Adapted);
    }

    #[test]
    fn stratify_hess1_cases() {
        let z = rat(0, 1);
        let one = rat(1, 1);
        let s = stratify_hess1(&z, &z, &one, &z, &one, &z, 1e-9);
        assert_eq!(s.label, "iii");
        assert_eq!(s.predicted_pi1, Some(Verdict::Swallowtail));
        assert_eq!(s.predicted_pi2, Some(Verdict::CuspidalEdge));
        let s = stratify_hess1(&one, &z, &z, &z, &z, &z, 1e-9);
        assert_eq!(s.label, "i");
        let s = stratify_hess1(&z, &z, &one, &one, &z, &z, 1e-9);
        assert_eq!(s.label, "ii");
        assert_eq!(s.predicted_pi1, Some(Verdict::CuspidalEdge));
        let s = stratify_hess1(&z, &z, &z, &one, &one, &z, 1e-9);
        assert_eq!(s.label, "iv");
        assert_eq!(s.predicted_pi2, Some(Verdict::Swallowtail));
        let s = stratify_hess1(&z, &z, &z, &z, &one, &z, 1e-9);
        assert_eq!(s.label, "outside");
    }

    #[test]
    fn stratify_gauss_cases() {
        let z = rat(0, 1);
        let one = rat(1, 1);
        let s = stratify_gauss(&z, &one, &z, &z, &z, &z, 1e-9);
        assert_eq!(s.label, "W0/i");
        assert_eq!(s.predicted_pi1, Some(Verdict::Immersion));
        let s = stratify_gauss(&z, &z, &one, &one, &z, &z, 1e-9);
        assert_eq!(s.label, "W1/ii");
        let s = stratify_gauss(&z, &z, &z, &one, &z, &one, 1e-9);
        assert_eq!(s.label, "W2_2/iii");
        assert_eq!(s.predicted_pi1, Some(Verdict::CuspidalEdge));
        assert_eq!(s.predicted_pi2, Some(Verdict::Swallowtail));
        let s = stratify_gauss(&z, &z, &one, &z, &z, &one, 1e-9);
        assert_eq!(s.label, "W1_2/iv");
        assert_eq!(s.predicted_pi1, Some(Verdict::Swallowtail));
        let s = stratify_gauss(&z, &z, &z, &z, &z, &one, 1e-9);
        assert_eq!(s.label, "W1_3");
        assert_eq!(s.predicted_pi1, None);
        let s = stratify_gauss(&z, &z, &z, &z, &z, &z, 1e-9);
        assert_eq!(s.label, "W4");
    }

    #[test]
    fn stratify_developable_cases() {
        let z = rat(0, 1);
        let one = rat(1, 1);
        let s = stratify_developable(&one, &z, &z, &z, 1e-9);
        assert_eq!(s.label, "i");
        assert_eq!(s.predicted_pi1, Some(Verdict::Immersion));
        assert_eq!(s.predicted_pi2, None);
        let s = stratify_developable(&z, &one, &one, &z, 1e-9);
        assert_eq!(s.label, "ii");
        assert_eq!(s.predicted_pi1, Some(Verdict::CuspidalEdge));
        let s = stratify_developable(&z, &z, &one, &one, 1e-9);
        assert_eq!(s.label, "iii");
        assert_eq!(s.predicted_pi1, Some(Verdict::Swallowtail));
        let s = stratify_developable(&z, &z, &z, &one, 1e-9);
        assert_eq!(s.label, "outside");
    }

    #[test]
    fn exact_and_traced_paths_cross_check() {
        // A case-(ii) jet: both legs cuspidal edges at 0.
        let h = ComplexSeries1::new(
            Series1::from_terms(3, &[(2, 0.7f64), (3, 0.3)]),
            Series1::from_terms(3, &[(2, -0.4)]),
        )
        .unwrap();
        let f = build_hess_positive(&h, 6).unwrap();
        let exact = classify_point(&f, Leg::Pi1, (&0.0, &0.0), 1e-9).unwrap();
        let traced =
            classify_point_traced(&f, Leg::Pi1, [0.0, 0.0], 1e-9, &TraceParams::default())
                .unwrap();
        assert_eq!(exact.verdict, Verdict::CuspidalEdge);
        assert_eq!(traced.verdict, exact.verdict);
    }
}
