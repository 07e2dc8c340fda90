//! Grid evaluation of projected jets and export to OBJ, CSV and JSON.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::{seed_singular_points, Leg, LocusTracer, TraceParams};
use crate::error::Result;
use crate::legendrian::{project_pi1, project_pi2};
use crate::series::Series2;
use crate::solutions::{LegendrianJet, MongeAmpereSystem};

/// Evaluated image of one projection leg over a parameter rectangle, with
/// the singular locus traced and embedded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceMesh {
    pub leg: Leg,
    pub grid: usize,
    pub u_range: [f64; 2],
    pub v_range: [f64; 2],
    /// Lattice parameters, u-major: index `iu * grid + iv`.
    pub params: Vec<[f64; 2]>,
    pub vertices: Vec<[f64; 3]>,
    /// Quad connectivity, 0-based lattice indices.
    pub faces: Vec<[u32; 4]>,
    /// `|Delta| <= tol` flag per lattice vertex.
    pub singular: Vec<bool>,
    pub tol: f64,
    /// Singular-locus polylines in parameter space and their 3D images.
    pub locus_params: Vec<Vec<[f64; 2]>>,
    pub locus_vertices: Vec<Vec<[f64; 3]>>,
}

/// Evaluates `pi o f` on a `grid x grid` lattice with bivariate Horner
/// evaluation and traces the singular locus inside the rectangle.
pub fn evaluate_mesh(
    f: &LegendrianJet<f64>,
    leg: Leg,
    sys: &MongeAmpereSystem<f64>,
    u_range: [f64; 2],
    v_range: [f64; 2],
    grid: usize,
    tol: f64,
) -> Result<SurfaceMesh> {
    assert!(grid >= 2, "mesh needs at least a 2x2 grid");
    let proj: [Series2<f64>; 3] = match leg {
        Leg::Pi1 => project_pi1(f),
        Leg::Pi2 => project_pi2(f, sys),
    };
    let tracer = LocusTracer::new(f, leg)?;
    let mut params = Vec::with_capacity(grid * grid);
    let mut vertices = Vec::with_capacity(grid * grid);
    let mut singular = Vec::with_capacity(grid * grid);
    let du = (u_range[1] - u_range[0]) / (grid - 1) as f64;
    let dv = (v_range[1] - v_range[0]) / (grid - 1) as f64;
    for iu in 0..grid {
        for iv in 0..grid {
            let u = u_range[0] + iu as f64 * du;
            let v = v_range[0] + iv as f64 * dv;
            params.push([u, v]);
            vertices.push([
                proj[0].evaluate(&u, &v),
                proj[1].evaluate(&u, &v),
                proj[2].evaluate(&u, &v),
            ]);
            singular.push(tracer.value([u, v]).abs() <= tol);
        }
    }
    let mut faces = Vec::with_capacity((grid - 1) * (grid - 1));
    for iu in 0..grid - 1 {
        for iv in 0..grid - 1 {
            let a = (iu * grid + iv) as u32;
            let b = ((iu + 1) * grid + iv) as u32;
            let c = ((iu + 1) * grid + iv + 1) as u32;
            let d = (iu * grid + iv + 1) as u32;
            faces.push([a, b, c, d]);
        }
    }
    let domain = [u_range[0], u_range[1], v_range[0], v_range[1]];
    let trace = TraceParams {
        bounds: domain,
        ..TraceParams::default()
    };
    let mut locus_params: Vec<Vec<[f64; 2]>> = Vec::new();
    let mut locus_vertices: Vec<Vec<[f64; 3]>> = Vec::new();
    let mut visited: Vec<[f64; 2]> = Vec::new();
    let inside = |pt: &[f64; 2]| {
        pt[0] >= domain[0] && pt[0] <= domain[1] && pt[1] >= domain[2] && pt[1] <= domain[3]
    };
    for seed in seed_singular_points(&tracer, domain, grid.min(41), &trace) {
        if visited
            .iter()
            .any(|p| (p[0] - seed[0]).hypot(p[1] - seed[1]) < trace.step * 0.75)
        {
            continue;
        }
        let Ok(mut polyline) = tracer.trace(seed, &trace) else {
            continue;
        };
        // Corrected seeds may drift just past the rectangle.
        polyline.retain(|pt| inside(pt));
        if polyline.len() < 2 {
            continue;
        }
        visited.extend(polyline.iter().copied());
        locus_vertices.push(
            polyline
                .iter()
                .map(|pt| {
                    [
                        proj[0].evaluate(&pt[0], &pt[1]),
                        proj[1].evaluate(&pt[0], &pt[1]),
                        proj[2].evaluate(&pt[0], &pt[1]),
                    ]
                })
                .collect(),
        );
        locus_params.push(polyline);
    }
    Ok(SurfaceMesh {
        leg,
        grid,
        u_range,
        v_range,
        params,
        vertices,
        faces,
        singular,
        tol,
        locus_params,
        locus_vertices,
    })
}

/// Export formats of a [`SurfaceMesh`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MeshFormat {
    #[serde(rename = "obj")]
    Obj,
    #[serde(rename = "csv")]
    Csv,
    #[serde(rename = "json")]
    Json,
}

/// Renders the mesh in the requested format.
pub fn render(mesh: &SurfaceMesh, format: MeshFormat) -> String {
    match format {
        MeshFormat::Obj => render_obj(mesh),
        MeshFormat::Csv => render_csv(mesh),
        MeshFormat::Json => serde_json::to_string(mesh).expect("mesh serializes"),
    }
}

/// Writes the mesh to `path` in the requested format.
pub fn export(mesh: &SurfaceMesh, format: MeshFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render(mesh, format))?;
    Ok(())
}

fn render_obj(mesh: &SurfaceMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# surface mesh, leg {:?}, grid {}", mesh.leg, mesh.grid);
    for v in &mesh.vertices {
        let _ = writeln!(out, "v {} {} {}", v[0], v[1], v[2]);
    }
    for polyline in &mesh.locus_vertices {
        for v in polyline {
            let _ = writeln!(out, "v {} {} {}", v[0], v[1], v[2]);
        }
    }
    for f in &mesh.faces {
        let _ = writeln!(out, "f {} {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1, f[3] + 1);
    }
    let mut offset = mesh.vertices.len();
    for polyline in &mesh.locus_vertices {
        let ids: Vec<String> = (0..polyline.len())
            .map(|k| (offset + k + 1).to_string())
            .collect();
        let _ = writeln!(out, "l {}", ids.join(" "));
        offset += polyline.len();
    }
    out
}

fn render_csv(mesh: &SurfaceMesh) -> String {
    let mut out = String::from("u,v,x,y,z,is_singular\n");
    for (pt, (vert, sing)) in mesh
        .params
        .iter()
        .zip(mesh.vertices.iter().zip(mesh.singular.iter()))
    {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            pt[0],
            pt[1],
            vert[0],
            vert[1],
            vert[2],
            u8::from(*sing)
        );
    }
    out
}
