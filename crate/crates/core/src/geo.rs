// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Spherical geometry of triangle subgraphs: great-circle distances, areas by
//! spherical excess, centers, and Gaussian kernel density estimates of the
//! area distribution.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::census::{classes, enumerate_instances, Mode};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Mean Earth radius (6371 km) in nautical miles.
pub const EARTH_RADIUS_NMI: f64 = 3440.065;
/// Mean Earth radius in statute miles.
pub const EARTH_RADIUS_MI: f64 = 3958.7613;

pub const KDE_GRID: usize = 512;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

impl GeoPoint {
    /// Longitude `-180` is stored as `180`.
    pub fn new(lat: f64, lon: f64) -> Result<GeoPoint> {
        if !(-90.0..=90.0).contains(&lat) {
            return Err(Error::InvalidArgument(format!(
                "latitude {lat} outside [-90, 90]"
            )));
        }
        if !(-180.0..=180.0).contains(&lon) {
            return Err(Error::InvalidArgument(format!(
                "longitude {lon} outside (-180, 180]"
            )));
        }
        Ok(GeoPoint {
            lat,
            lon: if lon == -180.0 { 180.0 } else { lon },
        })
    }

    fn unit_vector(self) -> [f64; 3] {
        let (phi, lam) = (self.lat.to_radians(), self.lon.to_radians());
        [phi.cos() * lam.cos(), phi.cos() * lam.sin(), phi.sin()]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sphere {
    pub radius: f64,
}

impl Default for Sphere {
    fn default() -> Self {
        Sphere {
            radius: EARTH_RADIUS_NMI,
        }
    }
}

impl Sphere {
    pub fn statute_miles() -> Sphere {
        Sphere {
            radius: EARTH_RADIUS_MI,
        }
    }
}

/// How a triangle's center is placed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CenterMethod {
    /// Mean latitude and mean (unwrapped) longitude.
    #[default]
    CoordinateMean,
    /// Normalized mean of the unit position vectors.
    VectorMean,
}

/// Central angle in radians, by the haversine formula.
pub fn central_angle(p: GeoPoint, q: GeoPoint) -> f64 {
    let (p1, p2) = (p.lat.to_radians(), q.lat.to_radians());
    let dphi = p2 - p1;
    let dlam = (q.lon - p.lon).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dlam / 2.0).sin().powi(2);
    2.0 * h.clamp(0.0, 1.0).sqrt().asin()
}

pub fn gc_distance(p: GeoPoint, q: GeoPoint, sphere: Sphere) -> f64 {
    central_angle(p, q) * sphere.radius
}

/// Spherical excess from the three side angles, by L'Huilier's theorem.
pub fn spherical_excess(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(f64::total_cmp);
    let half = (s[0] + s[1] + s[2]) / 2.0;
    let t = |x: f64| (x.max(0.0) / 2.0).tan();
    let prod = t(half) * t(half - s[0]) * t(half - s[1]) * t(half - s[2]);
    4.0 * prod.max(0.0).sqrt().atan()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangleGeometry {
    pub labels: [String; 3],
    pub area: f64,
    pub center: GeoPoint,
}

fn wrap_lon(x: f64) -> f64 {
    let mut y = (x + 180.0).rem_euclid(360.0) - 180.0;
    if y == -180.0 {
        y = 180.0;
    }
    y
}

fn center(pts: [GeoPoint; 3], method: CenterMethod) -> Result<GeoPoint> {
    match method {
        CenterMethod::CoordinateMean => {
            let lat = pts.iter().map(|p| p.lat).sum::<f64>() / 3.0;
            let base = pts[0].lon;
            let offset = pts.iter().map(|p| wrap_lon(p.lon - base)).sum::<f64>() / 3.0;
            Ok(GeoPoint {
                lat,
                lon: wrap_lon(base + offset),
            })
        }
        CenterMethod::VectorMean => {
            let mut v = [0.0; 3];
            for p in pts {
                let u = p.unit_vector();
                for k in 0..3 {
                    v[k] += u[k] / 3.0;
                }
            }
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if norm < 1e-12 {
                return Err(Error::DegenerateTriangle);
            }
            Ok(GeoPoint {
                lat: (v[2] / norm).clamp(-1.0, 1.0).asin().to_degrees(),
                lon: wrap_lon(v[1].atan2(v[0]).to_degrees()),
            })
        }
    }
}

/// Area and center of the spherical triangle on `p`, `q`, `r`.
pub fn triangle_geometry(
    p: GeoPoint,
    q: GeoPoint,
    r: GeoPoint,
    sphere: Sphere,
    method: CenterMethod,
) -> Result<(f64, GeoPoint)> {
    let e = spherical_excess(
        central_angle(q, r),
        central_angle(p, r),
        central_angle(p, q),
    );
    Ok((
        e * sphere.radius * sphere.radius,
        center([p, q, r], method)?,
    ))
}

/// Geometry of every triangle in `g`, in instance order.
pub fn spatial_census(
    g: &Graph,
    coords: &BTreeMap<String, GeoPoint>,
    sphere: Sphere,
    method: CenterMethod,
) -> Result<Vec<TriangleGeometry>> {
    let tris = enumerate_instances(g, &classes::triangle(), Mode::Nested)?;
    let mut missing: Vec<String> = tris
        .iter()
        .flat_map(|t| t.nodes.iter())
        .map(|&v| g.label(v))
        .filter(|l| !coords.contains_key(*l))
        .map(str::to_string)
        .collect();
    missing.sort();
    missing.dedup();
    if !missing.is_empty() {
        return Err(Error::MissingCoordinates(missing));
    }
    tris.par_iter()
        .map(|t| {
            let labels = [0, 1, 2].map(|k| g.label(t.nodes[k]).to_string());
            let [p, q, r] = [0, 1, 2].map(|k| coords[&labels[k]]);
            let (area, center) = triangle_geometry(p, q, r, sphere, method)?;
            Ok(TriangleGeometry {
                labels,
                area,
                center,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kde {
    pub bandwidth: f64,
    /// `(x, f(x))` on an even grid.
    pub grid: Vec<(f64, f64)>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Silverman's rule `0.9 min(sd, IQR/1.34) n^(-1/5)`, using the standard
/// deviation alone when the IQR is zero.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::InvalidArgument(
            "bandwidth needs at least 2 values".into(),
        ));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    if sd == 0.0 {
        return Err(Error::ZeroVariance);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * n.powf(-0.2))
}

/// Gaussian kernel density on `KDE_GRID` points spanning the data range
/// padded by three bandwidths.
pub fn kde(values: &[f64], bandwidth: Option<f64>) -> Result<Kde> {
    if values.is_empty() || (bandwidth.is_none() && values.len() < 2) {
        return Err(Error::InvalidArgument(
            "density estimate needs at least 2 values".into(),
        ));
    }
    let h = match bandwidth {
        Some(h) if h > 0.0 && h.is_finite() => h,
        Some(h) => {
            return Err(Error::InvalidArgument(format!(
                "bandwidth {h} must be positive"
            )))
        }
        None => silverman_bandwidth(values)?,
    };
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
    let norm = 1.0 / (values.len() as f64 * h * (2.0 * PI).sqrt());
    let grid = (0..KDE_GRID)
        .map(|k| {
            let x = lo + (hi - lo) * k as f64 / (KDE_GRID - 1) as f64;
            let f = values
                .iter()
                .map(|v| (-0.5 * ((x - v) / h).powi(2)).exp())
                .sum::<f64>()
                * norm;
            (x, f)
        })
        .collect();
    Ok(Kde { bandwidth: h, grid })
}
