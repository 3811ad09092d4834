//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Panels are bisected in order of decreasing error estimate until the summed
//! estimate meets the tolerance. The panel tree depends only on the integrand
//! values, and the final sum runs left to right over panels, so results are
//! reproducible bit for bit.

use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;

use crate::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-8;
pub const MIN_REL_TOL: f64 = 1e-12;
pub const MAX_REL_TOL: f64 = 1e-2;
pub const DEFAULT_MAX_PANELS: usize = 10_000;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
/// Gauss weights for the Kronrod nodes with odd index (and the centre).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Requested accuracy: stop once the error estimate is at most
/// `max(rel · |value|, abs)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_panels: usize,
}

impl Tolerance {
    pub fn new(rel: f64) -> Result<Self> {
        check_rel_tol(rel)?;
        Ok(Tolerance { rel, abs: 0.0, max_panels: DEFAULT_MAX_PANELS })
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: DEFAULT_REL_TOL, abs: 0.0, max_panels: DEFAULT_MAX_PANELS }
    }
}

pub fn check_rel_tol(rel: f64) -> Result<()> {
    if !(MIN_REL_TOL..=MAX_REL_TOL).contains(&rel) {
        return Err(Error::Domain(format!("rel_tol {rel:e} outside [{MIN_REL_TOL:e}, {MAX_REL_TOL:e}]")));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    pub abs_error: f64,
    pub panels: usize,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    splittable: bool,
}

fn gk15(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<Panel> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre)?;
    let mut resk = fc * WGK[7];
    let mut resg = fc * WG[3];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx)?;
        let f2 = f(centre + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * resk;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * half;
    let resabs = resabs * half.abs();
    let resasc = resasc * half.abs();
    let mut error = ((resk - resg) * half).abs();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * resabs);
    }
    if !value.is_finite() || !error.is_finite() {
        return Err(Error::Domain(format!("integrand is not finite on [{a}, {b}]")));
    }
    let splittable = (b - a).abs() > 64.0 * f64::EPSILON * a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
    Ok(Panel { a, b, value, error, splittable })
}

/// Integrates `f` over `[points[0], points[last]]`, using every entry of
/// `points` (ascending) as an initial panel boundary.
pub fn integrate(mut f: impl FnMut(f64) -> Result<f64>, points: &[f64], tol: Tolerance) -> Result<Quadrature> {
    let mut panels: Vec<Panel> = Vec::new();
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            panels.push(gk15(&mut f, w[0], w[1])?);
            evaluations += 15;
        }
    }
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= (tol.rel * value.abs()).max(tol.abs) {
            return Ok(Quadrature { value, abs_error: error, panels: panels.len(), evaluations });
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .fold(None, |best: Option<(usize, f64)>, (i, p)| match best {
                Some((_, e)) if e >= p.error => best,
                _ => Some((i, p.error)),
            });
        let Some((i, _)) = worst else {
            return Err(Error::Quadrature { estimate: value, error, panels: panels.len() });
        };
        if panels.len() >= tol.max_panels {
            return Err(Error::Quadrature { estimate: value, error, panels: panels.len() });
        }
        let p = panels[i];
        let mid = 0.5 * (p.a + p.b);
        let left = gk15(&mut f, p.a, mid)?;
        let right = gk15(&mut f, mid, p.b)?;
        evaluations += 30;
        panels[i] = left;
        panels.insert(i + 1, right);
    }
}
