//! Slicing a hypersurface into 2-surfaces, projecting them to 3-space and
//! writing meshes.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::Var;
use crate::family::FamilySpec;
use crate::interval::Interval;
use crate::vec4::Vec4;

/// Parallel projection R⁴ → R³ that deletes one coordinate axis (1..=4).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Projection {
    axis: u8,
}

impl Projection {
    pub fn drop_axis(axis: u8) -> Result<Self, String> {
        if (1..=4).contains(&axis) {
            Ok(Projection { axis })
        } else {
            Err(format!("projection axis {axis} is not in 1..=4"))
        }
    }

    pub fn axis(&self) -> u8 {
        self.axis
    }

    pub fn project(&self, p: Vec4) -> [f64; 3] {
        let skip = usize::from(self.axis - 1);
        let mut out = [0.0; 3];
        let mut k = 0;
        for (i, c) in p.0.iter().enumerate() {
            if i != skip {
                out[k] = *c;
                k += 1;
            }
        }
        out
    }
}

impl fmt::Display for Projection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "drop:{}", self.axis)
    }
}

impl FromStr for Projection {
    type Err = String;

    /// Parses `drop:AXIS`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let axis = text
            .strip_prefix("drop:")
            .ok_or_else(|| format!("expected `drop:AXIS`, got `{text}`"))?;
        let axis: u8 = axis.parse().map_err(|_| format!("bad projection axis `{axis}`"))?;
        Projection::drop_axis(axis)
    }
}

impl TryFrom<String> for Projection {
    type Error = String;

    fn try_from(text: String) -> Result<Self, Self::Error> {
        text.parse()
    }
}

impl From<Projection> for String {
    fn from(p: Projection) -> String {
        p.to_string()
    }
}

/// A parameter held fixed while slicing, e.g. `q=0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct FixedParam {
    pub var: Var,
    pub value: f64,
}

impl FromStr for FixedParam {
    type Err = String;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let (name, value) =
            text.split_once('=').ok_or_else(|| format!("expected `NAME=VALUE`, got `{text}`"))?;
        let var: Var = name.trim().parse()?;
        let value = crate::expr::parse(value.trim())
            .and_then(|e| e.eval_const())
            .map_err(|e| format!("bad value in `{text}`: {e}"))?;
        Ok(FixedParam { var, value })
    }
}

impl fmt::Display for FixedParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.var, self.value)
    }
}

impl TryFrom<String> for FixedParam {
    type Error = String;

    fn try_from(text: String) -> Result<Self, Self::Error> {
        text.parse()
    }
}

impl From<FixedParam> for String {
    fn from(p: FixedParam) -> String {
        p.to_string()
    }
}

/// Quad mesh over a parameter grid plus polylines drawn over it.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    /// parameter values (a, b) for each vertex
    pub params: Vec<(f64, f64)>,
    /// names of the two free parameters
    pub param_names: [&'static str; 2],
    pub quads: Vec<[usize; 4]>,
    pub polylines: Vec<Vec<[f64; 3]>>,
}

impl Mesh {
    /// Row-major grid of `n_a × n_b` vertices with quad connectivity.
    pub fn grid(
        n_a: usize,
        n_b: usize,
        mut vertex: impl FnMut(usize, usize) -> Result<([f64; 3], (f64, f64))>,
    ) -> Result<Mesh> {
        let mut mesh = Mesh::default();
        for i in 0..n_a {
            for j in 0..n_b {
                let (v, p) = vertex(i, j)?;
                mesh.vertices.push(v);
                mesh.params.push(p);
            }
        }
        for i in 0..n_a.saturating_sub(1) {
            for j in 0..n_b.saturating_sub(1) {
                let k = i * n_b + j;
                mesh.quads.push([k, k + n_b, k + n_b + 1, k + 1]);
            }
        }
        Ok(mesh)
    }

    /// Wavefront OBJ text.
    ///
    /// Grid vertices come first, followed by polyline vertices; faces and
    /// `l` chains use 1-based indices. Coordinates carry 9 significant
    /// digits.
    pub fn write_obj<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "# {} vertices, {} quads, {} polylines", self.vertices.len(), self.quads.len(), self.polylines.len())?;
        let write_v = |out: &mut W, v: &[f64; 3]| {
            writeln!(out, "v {} {} {}", fmt_sig(v[0], 9), fmt_sig(v[1], 9), fmt_sig(v[2], 9))
        };
        for v in &self.vertices {
            write_v(&mut out, v)?;
        }
        for line in &self.polylines {
            for v in line {
                write_v(&mut out, v)?;
            }
        }
        for q in &self.quads {
            writeln!(out, "f {} {} {} {}", q[0] + 1, q[1] + 1, q[2] + 1, q[3] + 1)?;
        }
        let mut base = self.vertices.len();
        for line in &self.polylines {
            if line.len() >= 2 {
                write!(out, "l")?;
                for k in 0..line.len() {
                    write!(out, " {}", base + k + 1)?;
                }
                writeln!(out)?;
            }
            base += line.len();
        }
        Ok(())
    }

    pub fn to_obj_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_obj(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("OBJ output is ASCII")
    }

    /// CSV with one row per grid vertex: the two free parameters, then x, y, z.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{},{},x,y,z", self.param_names[0], self.param_names[1])?;
        for (v, (a, b)) in self.vertices.iter().zip(self.params.iter()) {
            writeln!(
                out,
                "{},{},{},{},{}",
                fmt_sig(*a, 9),
                fmt_sig(*b, 9),
                fmt_sig(v[0], 9),
                fmt_sig(v[1], 9),
                fmt_sig(v[2], 9)
            )?;
        }
        Ok(())
    }
}

/// Write `mesh` as OBJ to `path`.
pub fn export_mesh(mesh: &Mesh, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    mesh.write_obj(&mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

/// Write the per-vertex CSV dump of `mesh` to `path`.
pub fn export_csv(mesh: &Mesh, path: &Path) -> Result<()> {
    let io_err = |source| Error::Io { path: path.to_path_buf(), source };
    let file = File::create(path).map_err(io_err)?;
    let mut out = BufWriter::new(file);
    mesh.write_csv(&mut out).map_err(io_err)?;
    out.flush().map_err(io_err)
}

/// Format with `digits` significant digits, `%g` style.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let exp = x.abs().log10().floor() as i32;
    let s = if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(format!("{x:.decimals$}"))
    } else {
        let s = format!("{:.*e}", digits - 1, x);
        match s.split_once('e') {
            Some((mantissa, e)) => format!("{}e{e}", trim_fraction(mantissa.to_string())),
            None => s,
        }
    };
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

fn trim_fraction(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// The two free parameters and their boxes when `fixed` is held.
fn free_params(f: &FamilySpec, fixed: Var) -> [(Var, Interval); 2] {
    let s_box = f.curve().interval();
    let (t_box, q_box) = (f.scale().t_box, f.scale().q_box);
    match fixed {
        Var::S => [(Var::T, t_box), (Var::Q, q_box)],
        Var::T => [(Var::S, s_box), (Var::Q, q_box)],
        Var::Q => [(Var::S, s_box), (Var::T, t_box)],
    }
}

fn param_box(f: &FamilySpec, var: Var) -> Interval {
    match var {
        Var::S => f.curve().interval(),
        Var::T => f.scale().t_box,
        Var::Q => f.scale().q_box,
    }
}

/// Tessellate the 2-surface obtained by holding one parameter fixed,
/// projected to 3-space, with the projected curve r(s) as a polyline.
///
/// Vertices are laid out row-major: index `i * n_b + j` belongs to the
/// i-th sample of the first free parameter and the j-th of the second
/// (parameters ordered s, t, q). The curve polyline is sampled on the same
/// s-grid as the mesh (or with `n_a` samples when s is the fixed one).
pub fn slice_surface(
    f: &FamilySpec,
    fixed: FixedParam,
    grid: (usize, usize),
    proj: Projection,
) -> Result<Mesh> {
    let (n_a, n_b) = grid;
    assert!(n_a >= 2 && n_b >= 2, "slice grid must be at least 2×2");
    let fixed_box = param_box(f, fixed.var);
    if !fixed_box.closure_contains(fixed.value) {
        return Err(Error::OutOfDomain {
            what: "fixed parameter",
            value: fixed.value,
            lo: fixed_box.lo,
            hi: fixed_box.hi,
        });
    }
    let [(var_a, box_a), (var_b, box_b)] = free_params(f, fixed.var);
    let a_samples = box_a.samples(n_a);
    let b_samples = box_b.samples(n_b);

    let point = |a: f64, b: f64| {
        let mut stq = [0.0; 3];
        for (var, value) in [(var_a, a), (var_b, b), (fixed.var, fixed.value)] {
            stq[var as usize] = value;
        }
        f.eval_surface(stq[0], stq[1], stq[2])
    };

    let mut mesh = Mesh::grid(n_a, n_b, |i, j| {
        let (a, b) = (a_samples[i], b_samples[j]);
        Ok((proj.project(point(a, b)?), (a, b)))
    })?;
    mesh.param_names = [var_a.name(), var_b.name()];

    let s_samples =
        if var_a == Var::S { a_samples } else { f.curve().interval().samples(n_a) };
    let curve = s_samples
        .iter()
        .map(|&s| f.curve().point(s).map(|p| proj.project(p)))
        .collect::<Result<Vec<_>>>()?;
    mesh.polylines.push(curve);
    Ok(mesh)
}
