//! Statistical stand-in for the transversality arguments: perturb initial
//! data randomly, detect every singular point on a grid-seeded locus search,
//! classify each one on both projection legs and tally which strata occur.
//!
//! Deep strata (codimension >= 3) correspond to Degenerate verdicts, and
//! points where the criterion quantities both vanish to Unresolved ones;
//! generic perturbations are expected to hit neither.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{
    classify_point_local, classify_traced_with, find_det_crossings, seed_singular_points, Leg,
    LocusTracer, TraceParams, Verdict,
};
use crate::error::Result;
use crate::series::Series1;
use crate::solutions::InitialData;

/// Sweep parameters. The random generator is ChaCha8 seeded per sample from
/// `seed`, so identical configurations reproduce identical tallies.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepConfig {
    pub magnitude: f64,
    pub samples: u32,
    /// Lattice resolution of the sign-change seeding.
    pub grid: usize,
    pub seed: u64,
    pub order: usize,
    /// Zero tolerance of the classification.
    pub tol: f64,
    /// Search domain `[u_min, u_max, v_min, v_max]`.
    pub domain: [f64; 4],
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            magnitude: 0.5,
            samples: 200,
            grid: 21,
            seed: 0,
            order: 8,
            tol: 1e-9,
            domain: [-1.0, 1.0, -1.0, 1.0],
        }
    }
}

/// Tally of classification outcomes over a sweep. Every classified point
/// lands in exactly one bucket, so
/// `sum(per_stratum) + unresolved + deep_hits == points`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumTally {
    pub family: String,
    pub samples: u32,
    pub seed: u64,
    pub points: u64,
    /// Case labels of the family's stratification, keyed deterministically.
    pub per_stratum: BTreeMap<String, u64>,
    pub unresolved: u64,
    /// Degenerate verdicts: codimension >= 3 coincidences.
    pub deep_hits: u64,
}

impl StratumTally {
    fn empty(family: String, samples: u32, seed: u64) -> Self {
        StratumTally {
            family,
            samples,
            seed,
            points: 0,
            per_stratum: BTreeMap::new(),
            unresolved: 0,
            deep_hits: 0,
        }
    }

    fn merge(mut self, other: StratumTally) -> StratumTally {
        self.points += other.points;
        self.unresolved += other.unresolved;
        self.deep_hits += other.deep_hits;
        for (k, v) in other.per_stratum {
            *self.per_stratum.entry(k).or_insert(0) += v;
        }
        self
    }

    fn record(&mut self, label: Option<String>, verdicts: &[Verdict]) {
        self.points += 1;
        if verdicts.iter().any(|v| *v == Verdict::Degenerate) {
            self.deep_hits += 1;
        } else if verdicts.iter().any(|v| *v == Verdict::Unresolved) || label.is_none() {
            self.unresolved += 1;
        } else {
            *self
                .per_stratum
                .entry(label.expect("labeled"))
                .or_insert(0) += 1;
        }
    }

    /// Flat CSV rendering: one row per bucket plus the totals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("family,label,count\n");
        for (label, count) in &self.per_stratum {
            out.push_str(&format!("{},{},{}\n", self.family, label, count));
        }
        out.push_str(&format!("{},unresolved,{}\n", self.family, self.unresolved));
        out.push_str(&format!("{},deep,{}\n", self.family, self.deep_hits));
        out.push_str(&format!("{},points,{}\n", self.family, self.points));
        out.push_str(&format!("{},samples,{}\n", self.family, self.samples));
        out
    }
}

fn family_name(base: &InitialData<f64>) -> String {
    match base {
        InitialData::Holomorphic { .. } => "hess+1".into(),
        InitialData::DAlembert { .. } => "hess-1".into(),
        InitialData::Cauchy { c, .. } => format!("gauss(c={c})"),
        InitialData::Developable { .. } => "developable".into(),
    }
}

/// Uniform perturbation of the six low-degree dials of the family, in the
/// spirit of `h + alpha w + beta w^2 + gamma w^3`.
fn perturb(base: &InitialData<f64>, rng: &mut ChaCha8Rng, magnitude: f64) -> InitialData<f64> {
    let mut draw = || -> f64 {
        if magnitude == 0.0 {
            // Keep the stream advancing so tallies stay comparable.
            let _ = rng.gen_range(-1.0..1.0);
            0.0
        } else {
            rng.gen_range(-magnitude..magnitude)
        }
    };
    let bump = |s: &Series1<f64>, deltas: &[(usize, f64)]| {
        let top = deltas.iter().map(|(k, _)| *k).max().unwrap_or(0);
        let order = s.order().max(top);
        let mut out = Series1::zero(order);
        for k in 0..=s.order() {
            out.set_coeff(k, s.coeff(k));
        }
        for (k, d) in deltas {
            out.set_coeff(*k, out.coeff(*k) + d);
        }
        out
    };
    match base {
        InitialData::Holomorphic { h } => {
            let re = bump(h.re(), &[(1, draw()), (2, draw()), (3, draw())]);
            let im = bump(h.im(), &[(1, draw()), (2, draw()), (3, draw())]);
            InitialData::Holomorphic {
                h: crate::series::ComplexSeries1::new(re, im).expect("orders match"),
            }
        }
        InitialData::DAlembert { phi, psi } => InitialData::DAlembert {
            phi: bump(phi, &[(1, draw()), (2, draw()), (3, draw())]),
            psi: bump(psi, &[(1, draw()), (2, draw()), (3, draw())]),
        },
        InitialData::Developable { phi, psi } => InitialData::Developable {
            phi: bump(phi, &[(1, draw()), (2, draw()), (3, draw())]),
            psi: bump(psi, &[(1, draw()), (2, draw()), (3, draw())]),
        },
        InitialData::Cauchy { z0, z1, c } => InitialData::Cauchy {
            z0: bump(
                z0,
                &[(2, draw() / 2.0), (3, draw() / 6.0), (4, draw() / 24.0)],
            ),
            z1: bump(z1, &[(1, draw()), (2, draw() / 2.0), (3, draw() / 6.0)]),
            c: *c,
        },
    }
}

fn case_label(base: &InitialData<f64>, v1: Verdict, v2: Option<Verdict>) -> Option<String> {
    use Verdict::*;
    let label = match base {
        InitialData::Holomorphic { .. } | InitialData::DAlembert { .. } => {
            match (v1, v2?) {
                (Immersion, Immersion) => "i",
                (CuspidalEdge, CuspidalEdge) => "ii",
                (Swallowtail, CuspidalEdge) => "iii",
                (CuspidalEdge, Swallowtail) => "iv",
                _ => return None,
            }
        }
        InitialData::Cauchy { .. } => match (v1, v2?) {
            (Immersion, Immersion) => "W0/i",
            (CuspidalEdge, CuspidalEdge) => "W1/ii",
            (CuspidalEdge, Swallowtail) => "W2_2/iii",
            (Swallowtail, CuspidalEdge) => "W1_2/iv",
            _ => return None,
        },
        InitialData::Developable { .. } => match v1 {
            Immersion => "i",
            CuspidalEdge => "ii",
            Swallowtail => "iii",
            _ => return None,
        },
    };
    Some(label.to_string())
}

/// Every detected singular point of one sample: the traced locus vertices
/// plus, per leg, the Newton-sharpened points where the criterion
/// determinant crosses zero (swallowtail candidates). The second entry
/// records which leg's crossing produced the point.
fn detect_points(
    tracers: &[LocusTracer],
    config: &SweepConfig,
    trace: &TraceParams,
) -> Result<Vec<([f64; 2], Option<usize>)>> {
    // All families here share their singular locus between the two legs, so
    // the first leg's locus function drives the search.
    let seeds = seed_singular_points(&tracers[0], config.domain, config.grid, trace);
    let mut polylines: Vec<Vec<[f64; 2]>> = Vec::new();
    let mut visited: Vec<[f64; 2]> = Vec::new();
    for seed in seeds {
        if visited
            .iter()
            .any(|p| (p[0] - seed[0]).hypot(p[1] - seed[1]) < trace.step * 0.75)
        {
            continue;
        }
        let Ok(polyline) = tracers[0].trace(seed, trace) else {
            continue;
        };
        visited.extend(polyline.iter().copied());
        polylines.push(polyline);
    }
    let mut points: Vec<([f64; 2], Option<usize>)> = Vec::new();
    for polyline in &polylines {
        points.extend(polyline.iter().map(|pt| (*pt, None)));
        for (li, tracer) in tracers.iter().enumerate() {
            points.extend(
                find_det_crossings(tracer, polyline, trace)
                    .into_iter()
                    .map(|pt| (pt, Some(li))),
            );
        }
    }
    Ok(points)
}

/// Runs the sweep: `samples` independent perturbations of `base`, each
/// classified at every detected singular point. Deterministic for a fixed
/// seed; samples may evaluate in parallel and merge in index order.
pub fn sample_and_tally(base: &InitialData<f64>, config: &SweepConfig) -> Result<StratumTally> {
    base.validate()?;
    assert!(config.samples >= 1, "sweep needs at least one sample");
    let debug = std::env::var("MF_SWEEP_DEBUG").is_ok();
    let trace = TraceParams {
        bounds: [
            config.domain[0] - 0.2,
            config.domain[1] + 0.2,
            config.domain[2] - 0.2,
            config.domain[3] + 0.2,
        ],
        ..TraceParams::default()
    };
    let legs: &[Leg] = match base {
        InitialData::Developable { .. } => &[Leg::Pi1],
        _ => &[Leg::Pi1, Leg::Pi2],
    };
    let fragments: Vec<StratumTally> = (0..config.samples)
        .into_par_iter()
        .map(|i| -> Result<StratumTally> {
            let mut tally = StratumTally::empty(family_name(base), config.samples, config.seed);
            let mut rng = ChaCha8Rng::seed_from_u64(
                config.seed ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15),
            );
            let data = perturb(base, &mut rng, config.magnitude);
            let jet = data.build(config.order)?;
            let tracers: Vec<LocusTracer> = legs
                .iter()
                .map(|&leg| LocusTracer::new(&jet, leg))
                .collect::<Result<_>>()?;
            let points = detect_points(&tracers, config, &trace)?;
            for (pt, crossing_leg) in points {
                let mut verdicts = Vec::with_capacity(2);
                for (li, tracer) in tracers.iter().enumerate() {
                    let local = classify_point_local(tracer, pt, config.tol);
                    let verdict = if crossing_leg == Some(li) {
                        // Swallowtail candidates get the independent
                        // finite-difference measurement; disagreement
                        // between the two paths is never papered over.
                        match classify_traced_with(tracer, pt, config.tol, &trace) {
                            Ok(traced) if traced.verdict == local.verdict => local.verdict,
                            Ok(_) | Err(_) => Verdict::Unresolved,
                        }
                    } else {
                        local.verdict
                    };
                    verdicts.push(verdict);
                }
                let label = case_label(&data, verdicts[0], verdicts.get(1).copied());
                if debug && (label.is_none() || verdicts.contains(&Verdict::Unresolved)) {
                    eprintln!(
                        "sweep debug: sample {i} pt {pt:?} crossing {crossing_leg:?} verdicts {verdicts:?}"
                    );
                    if let Some(li) = crossing_leg {
                        let local = classify_point_local(&tracers[li], pt, config.tol);
                        let traced = classify_traced_with(&tracers[li], pt, config.tol, &trace);
                        eprintln!("  local: {local:?}");
                        eprintln!("  traced: {traced:?}");
                    }
                }
                tally.record(label, &verdicts);
            }
            Ok(tally)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut total = StratumTally::empty(family_name(base), config.samples, config.seed);
    for fragment in fragments {
        total = total.merge(fragment);
    }
    Ok(total)
}
