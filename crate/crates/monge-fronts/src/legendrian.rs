//! Residual verification, the two Legendrian projections, the
//! hyperbolic/elliptic factorization identity and the formal-fullness check.
//!
//! The factorization works in the quadratic extension `K[s] / (s^2 + c)`,
//! so both signs of `c` (real and imaginary `sqrt(-c)`) are handled by the
//! same exact arithmetic: a residual is zero iff both its `1`-part and its
//! `s`-part vanish.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{Backend, Scalar};
use crate::series::{Series2, Var};
use crate::solutions::{EquationFamily, LegendrianJet, MongeAmpereSystem};

/// Which identity a report verifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FormKind {
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "omega")]
    Omega,
    #[serde(rename = "factorization-left")]
    FactorizationLeft,
    #[serde(rename = "factorization-right")]
    FactorizationRight,
    #[serde(rename = "normalization")]
    Normalization,
}

/// Residual of one pulled-back form, kept per coefficient for audit.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport<K: Scalar> {
    pub form: FormKind,
    /// One series for 2-forms; the `du`/`dv` components for 1-forms; the
    /// `1`/`s` parts for factorization residuals.
    #[serde(bound = "")]
    pub residuals: Vec<Series2<K>>,
    pub max_abs: f64,
    pub exact_zero: bool,
}

impl<K: Scalar> ResidualReport<K> {
    fn new(form: FormKind, residuals: Vec<Series2<K>>) -> Self {
        let max_abs = residuals.iter().map(Series2::max_abs).fold(0.0, f64::max);
        let exact_zero = residuals.iter().all(Series2::is_zero);
        ResidualReport {
            form,
            residuals,
            max_abs,
            exact_zero,
        }
    }

    /// Pass criterion: exact zero on the rational backend, `max_abs <= tol`
    /// on floats.
    pub fn passes(&self, tol: f64) -> bool {
        match K::BACKEND {
            Backend::Rational => self.exact_zero,
            Backend::Float => self.max_abs <= tol,
        }
    }
}

/// Pullback of the contact form `theta = dz - p dx - q dy`.
pub fn contact_residual<K: Scalar>(f: &LegendrianJet<K>) -> Result<ResidualReport<K>> {
    let (du, dv) = f.theta_pullback()?;
    Ok(ResidualReport::new(FormKind::Theta, vec![du, dv]))
}

/// `du^dv` coefficient of `f*omega` for the system.
pub fn ma_residual<K: Scalar>(
    f: &LegendrianJet<K>,
    sys: &MongeAmpereSystem<K>,
) -> Result<ResidualReport<K>> {
    let omega = f.omega_pullback(sys)?;
    Ok(ResidualReport::new(FormKind::Omega, vec![omega]))
}

/// First projection `pi1 = (x, y, z)` of the double fibration.
pub fn project_pi1<K: Scalar>(f: &LegendrianJet<K>) -> [Series2<K>; 3] {
    [f.x().clone(), f.y().clone(), f.z().clone()]
}

/// Second projection: `(p, q, px + qy - z)` for `Hess = c`, and
/// `(xp + yq - z, p, q)` in the `K = c` chart.
pub fn project_pi2<K: Scalar>(
    f: &LegendrianJet<K>,
    sys: &MongeAmpereSystem<K>,
) -> [Series2<K>; 3] {
    let dual_z = &(&f.p().mul_series(f.x()) + &f.q().mul_series(f.y())) - f.z();
    match sys.family {
        EquationFamily::Hess => [f.p().clone(), f.q().clone(), dual_z],
        EquationFamily::Gauss => [dual_z, f.p().clone(), f.q().clone()],
    }
}

/// An element `a + b s` of `K[s] / (s^2 + c)` with series entries.
#[derive(Clone)]
struct Ext<K: Scalar> {
    a: Series2<K>,
    b: Series2<K>,
}

impl<K: Scalar> Ext<K> {
    fn mul(&self, rhs: &Ext<K>, c: &K) -> Ext<K> {
        // (a1 + b1 s)(a2 + b2 s) = a1 a2 - c b1 b2 + (a1 b2 + a2 b1) s
        Ext {
            a: &self.a.mul_series(&rhs.a) - &self.b.mul_series(&rhs.b).scale(c),
            b: &self.a.mul_series(&rhs.b) + &self.b.mul_series(&rhs.a),
        }
    }

    fn sub(&self, rhs: &Ext<K>) -> Ext<K> {
        Ext {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

/// Pullbacks of the two decompositions
/// `(s X dx + dq) ^ (s X dy - dp)` and `(s X dx - dq) ^ (s X dy + dp)`
/// with `s^2 = -c` and `X = 1` (Hess) or `X = 1 + p^2 + q^2` (Gauss).
/// For a geometric solution both vanish, since they equal
/// `-f*omega (+/-) s f*(d theta)`.
pub fn factorization_residual<K: Scalar>(
    f: &LegendrianJet<K>,
    sys: &MongeAmpereSystem<K>,
) -> Result<(ResidualReport<K>, ResidualReport<K>)> {
    if sys.c.is_zero() {
        return Err(Error::ZeroFactorizationConstant);
    }
    let c = &sys.c;
    let order = f.order();
    let scale = match sys.family {
        EquationFamily::Hess => Series2::constant(K::one(), order),
        EquationFamily::Gauss => {
            let one = Series2::constant(K::one(), order);
            &(&one + &f.p().mul_series(f.p())) + &f.q().mul_series(f.q())
        }
    };
    let d = |comp: &Series2<K>, var| comp.differentiate(var);
    // Components of the pulled-back 1-forms along du and dv.
    let one_form = |sign_q: i64, var: Var| -> Result<Ext<K>> {
        Ok(Ext {
            a: d(f.q(), var)?.scale(&K::from_i64(sign_q)),
            b: scale.mul_series(&d(f.x(), var)?),
        })
    };
    let other_form = |sign_p: i64, var: Var| -> Result<Ext<K>> {
        Ok(Ext {
            a: d(f.p(), var)?.scale(&K::from_i64(sign_p)),
            b: scale.mul_series(&d(f.y(), var)?),
        })
    };
    let mut reports = Vec::with_capacity(2);
    for (sign, kind) in [
        (1i64, FormKind::FactorizationLeft),
        (-1i64, FormKind::FactorizationRight),
    ] {
        let alpha_u = one_form(sign, Var::U)?;
        let alpha_v = one_form(sign, Var::V)?;
        let beta_u = other_form(-sign, Var::U)?;
        let beta_v = other_form(-sign, Var::V)?;
        let wedge = alpha_u.mul(&beta_v, c).sub(&alpha_v.mul(&beta_u, c));
        reports.push(ResidualReport::new(kind, vec![wedge.a, wedge.b]));
    }
    let right = reports.pop().expect("two reports");
    let left = reports.pop().expect("two reports");
    Ok((left, right))
}

/// Admissible linear parts `(A, B, C, D, E)` of formal functions
/// `H = Ax + By + Cz + Dp + Eq + (higher order)` with `H o f = 0` modulo
/// total degree `deg + 1`.
#[derive(Debug, Clone)]
pub struct FullnessReport<K: Scalar> {
    pub degree: usize,
    pub admissible_dim: usize,
    /// Reduced row-echelon basis of the admissible subspace of the linear
    /// parts, each as `[A, B, C, D, E]`.
    pub basis: Vec<[K; 5]>,
}

impl<K: Scalar> Serialize for FullnessReport<K> {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("FullnessReport", 3)?;
        st.serialize_field("degree", &self.degree)?;
        st.serialize_field("admissible_dim", &self.admissible_dim)?;
        let basis: Vec<Vec<serde_json::Value>> = self
            .basis
            .iter()
            .map(|row| row.iter().map(|c| c.coeff_to_json()).collect())
            .collect();
        st.serialize_field("basis", &basis)?;
        st.end()
    }
}

impl<K: Scalar> FullnessReport<K> {
    /// True when the admissible space is exactly the `z`-direction, i.e.
    /// the kernel of every admissible differential is the contact plane.
    pub fn is_contact_axis(&self) -> bool {
        self.basis.len() == 1 && {
            let b = &self.basis[0];
            b[0].is_zero()
                && b[1].is_zero()
                && b[2] == K::one()
                && b[3].is_zero()
                && b[4].is_zero()
        }
    }
}

fn pivot_ok<K: Scalar>(x: &K) -> bool {
    match K::BACKEND {
        Backend::Rational => !x.is_zero(),
        Backend::Float => x.magnitude() > 1e-12,
    }
}

/// Searches all formal functions vanishing on the image of `f` up to total
/// degree `deg` and reports the admissible linear parts. Requires
/// `deg <= order(f)`.
pub fn fullness_check<K: Scalar>(f: &LegendrianJet<K>, deg: usize) -> Result<FullnessReport<K>> {
    assert!(deg >= 1, "fullness check needs degree >= 1");
    assert!(
        deg <= f.order(),
        "fullness degree {deg} exceeds jet order {}",
        f.order()
    );
    let comps: Vec<Series2<K>> = f
        .components()
        .iter()
        .map(|s| s.truncated(deg))
        .collect();

    // Composed series for every ambient monomial of total degree <= deg,
    // built one multiplication at a time along the graded order.
    let indices = ambient_monomials(deg);
    let mut composed: Vec<Series2<K>> = Vec::with_capacity(indices.len());
    let mut lookup = std::collections::HashMap::new();
    for (n, alpha) in indices.iter().enumerate() {
        let series = match alpha.iter().position(|&e| e > 0) {
            None => Series2::constant(K::one(), deg),
            Some(slot) => {
                let mut parent = *alpha;
                parent[slot] -= 1;
                let parent_series: &Series2<K> = &composed[lookup[&parent]];
                parent_series.mul_series(&comps[slot])
            }
        };
        lookup.insert(*alpha, n);
        composed.push(series);
    }

    // Column layout: the 5 linear parts first, then every monomial of
    // degree >= 2. Rows are the (u, v) monomials of degree 1..=deg.
    let mut columns: Vec<&Series2<K>> = Vec::new();
    for var in 0..5 {
        let mut alpha = [0u8; 5];
        alpha[var] = 1;
        columns.push(&composed[lookup[&alpha]]);
    }
    let f_start = columns.len();
    for (n, alpha) in indices.iter().enumerate() {
        if alpha.iter().map(|&e| e as usize).sum::<usize>() >= 2 {
            columns.push(&composed[n]);
        }
    }

    let mut rows: Vec<Vec<K>> = Vec::new();
    for i in 0..=deg {
        for j in 0..=deg - i {
            if i + j == 0 {
                continue;
            }
            rows.push(columns.iter().map(|s| s.coeff(i, j)).collect());
        }
    }

    // Row-reduce with pivots preferentially in the higher-order block; rows
    // left without such a pivot are linear constraints on (A..E).
    let ncols = columns.len();
    let mut used = vec![false; rows.len()];
    for col in f_start..ncols {
        let Some(r) = (0..rows.len()).find(|&r| !used[r] && pivot_ok(&rows[r][col])) else {
            continue;
        };
        used[r] = true;
        let pivot = rows[r][col].clone();
        for rr in 0..rows.len() {
            if rr == r || !pivot_ok(&rows[rr][col]) {
                continue;
            }
            let factor = rows[rr][col].clone() / pivot.clone();
            for cc in 0..ncols {
                let delta = factor.clone() * rows[r][cc].clone();
                rows[rr][cc] = rows[rr][cc].clone() - delta;
            }
        }
    }
    let constraints: Vec<[K; 5]> = rows
        .iter()
        .zip(&used)
        .filter(|(_, &u)| !u)
        .map(|(row, _)| {
            [
                row[0].clone(),
                row[1].clone(),
                row[2].clone(),
                row[3].clone(),
                row[4].clone(),
            ]
        })
        .collect();

    let basis = nullspace5(&constraints);
    Ok(FullnessReport {
        degree: deg,
        admissible_dim: basis.len(),
        basis,
    })
}

fn ambient_monomials(deg: usize) -> Vec<[u8; 5]> {
    let mut out = Vec::new();
    let d = deg as u8;
    for total in 0..=d {
        for a in 0..=total {
            for b in 0..=total - a {
                for c in 0..=total - a - b {
                    for e in 0..=total - a - b - c {
                        let g = total - a - b - c - e;
                        out.push([a, b, c, e, g]);
                    }
                }
            }
        }
    }
    out
}

/// Reduced row-echelon basis of the null space of a stack of 5-column rows.
fn nullspace5<K: Scalar>(constraints: &[[K; 5]]) -> Vec<[K; 5]> {
    let mut rows: Vec<[K; 5]> = constraints.to_vec();
    let mut pivots: Vec<usize> = Vec::new();
    let mut rank = 0usize;
    for col in 0..5 {
        let Some(r) = (rank..rows.len()).find(|&r| pivot_ok(&rows[r][col])) else {
            continue;
        };
        rows.swap(rank, r);
        let pivot = rows[rank][col].clone();
        for cc in 0..5 {
            rows[rank][cc] = rows[rank][cc].clone() / pivot.clone();
        }
        for rr in 0..rows.len() {
            if rr != rank && pivot_ok(&rows[rr][col]) {
                let factor = rows[rr][col].clone();
                for cc in 0..5 {
                    let delta = factor.clone() * rows[rank][cc].clone();
                    rows[rr][cc] = rows[rr][cc].clone() - delta;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..5).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut vec: [K; 5] = [
            K::zero(),
            K::zero(),
            K::zero(),
            K::zero(),
            K::zero(),
        ];
        vec[fc] = K::one();
        for (r, &pc) in pivots.iter().enumerate() {
            vec[pc] = -rows[r][fc].clone();
        }
        basis.push(vec);
    }
    basis
}
