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

//! Writes a [`RunBundle`] to disk: a JSON manifest, one JSON report per
//! period, CSV time series and optional SVG log-log plots.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::pipeline::{PeriodError, PipelineConfig, RunBundle, ScalingRow};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub seed_generated: bool,
    pub config: PipelineConfig,
    pub periods: Vec<String>,
    pub errors: Vec<PeriodError>,
    /// Paths relative to the output directory.
    pub files: Vec<String>,
    pub generated_unix: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EmitOptions {
    pub svg: bool,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn safe_name(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || "-_.".contains(c) {
                c
            } else {
                '_'
            }
        })
        .collect()
}

struct Out<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Out<'_> {
    fn csv(&mut self, name: &str, header: &[&str], rows: Vec<Vec<String>>) -> Result<()> {
        let mut w = csv::Writer::from_path(self.dir.join(name))?;
        w.write_record(header)?;
        for r in rows {
            w.write_record(&r)?;
        }
        w.flush()?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn text(&mut self, name: &str, body: &str) -> Result<()> {
        let path = self.dir.join(name);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        fs::write(path, body)?;
        self.files.push(name.to_string());
        Ok(())
    }
}

/// Write every output file; returns the manifest path.
pub fn emit_reports(bundle: &RunBundle, out_dir: &Path, options: EmitOptions) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)?;
    let mut out = Out {
        dir: out_dir,
        files: Vec::new(),
    };

    for (i, p) in bundle.periods.iter().enumerate() {
        let name = format!("periods/{i:03}_{}.json", safe_name(&p.period));
        out.text(&name, &serde_json::to_string_pretty(p)?)?;
    }

    let metrics = bundle
        .periods
        .iter()
        .map(|p| {
            let m = &p.metrics;
            vec![
                p.period.clone(),
                m.n.to_string(),
                m.m.to_string(),
                m.density.to_string(),
                m.diameter.to_string(),
                m.average_path_length.to_string(),
                m.clustering_overall.to_string(),
                m.clustering_average.to_string(),
                m.connected.to_string(),
                m.largest_component.to_string(),
                opt(p.cliques.as_ref().map(|c| c.clique_number)),
                opt(p.churn.and_then(|c| c.added_pct)),
                opt(p.churn.and_then(|c| c.lost_pct)),
            ]
        })
        .collect();
    out.csv(
        "metrics.csv",
        &[
            "period",
            "n",
            "m",
            "density",
            "diameter",
            "average_path_length",
            "clustering_overall",
            "clustering_average",
            "connected",
            "largest_component",
            "clique_number",
            "edges_added_pct",
            "edges_lost_pct",
        ],
        metrics,
    )?;

    let keys: Vec<String> = bundle
        .periods
        .first()
        .map(|p| p.census.record().into_iter().map(|(k, _)| k).collect())
        .unwrap_or_default();
    let mut header = vec!["period", "n", "m"];
    header.extend(keys.iter().map(String::as_str));
    let census = bundle
        .periods
        .iter()
        .map(|p| {
            let mut row = vec![
                p.period.clone(),
                p.census.n.to_string(),
                p.census.m.to_string(),
            ];
            row.extend(p.census.record().into_iter().map(|(_, v)| v.to_string()));
            row
        })
        .collect();
    out.csv("census.csv", &header, census)?;

    if !bundle.config.nulls.is_empty() {
        let mut rows = Vec::new();
        for p in &bundle.periods {
            for z in &p.zscores {
                for r in &z.rows {
                    rows.push(vec![
                        p.period.clone(),
                        z.ensemble.name().to_string(),
                        z.seed.to_string(),
                        r.class.clone(),
                        r.observed.to_string(),
                        r.mu.to_string(),
                        r.sigma.to_string(),
                        opt(r.z),
                        opt(r.p_emp),
                        opt(r.p_boot.map(|b| b.median)),
                        opt(r.p_boot.map(|b| b.lower)),
                        opt(r.p_boot.map(|b| b.upper)),
                        r.verdict.name().to_string(),
                        z.retained.to_string(),
                    ]);
                }
            }
        }
        out.csv(
            "zscores.csv",
            &[
                "period",
                "ensemble",
                "seed",
                "class",
                "observed",
                "mu",
                "sigma",
                "z",
                "p_emp",
                "p_boot_median",
                "p_boot_lo",
                "p_boot_hi",
                "verdict",
                "replications_kept",
            ],
            rows,
        )?;
    }

    let scaling = bundle
        .scaling
        .iter()
        .map(|s| {
            let f = s.fit.as_ref();
            vec![
                s.class.clone(),
                opt(f.map(|f| f.a())),
                opt(f.map(|f| f.beta)),
                opt(f.map(|f| f.r2)),
                opt(f.map(|f| f.n_points)),
                opt(f.map(|f| f.excluded)),
                s.error.clone().unwrap_or_default(),
            ]
        })
        .collect();
    out.csv(
        "scaling.csv",
        &["class", "A", "beta", "R2", "n_points", "excluded", "error"],
        scaling,
    )?;
    let points = bundle
        .scaling
        .iter()
        .flat_map(|s| {
            s.points
                .iter()
                .map(|(p, m, c)| vec![p.clone(), s.class.clone(), m.to_string(), c.to_string()])
        })
        .collect();
    out.csv(
        "scaling_points.csv",
        &["period", "class", "m", "count"],
        points,
    )?;

    if bundle.config.centrality {
        let mut values = Vec::new();
        let mut ranks = Vec::new();
        for p in &bundle.periods {
            let Some(c) = &p.centrality else { continue };
            for v in &c.vectors {
                for (label, x) in c.labels.iter().zip(&v.values) {
                    values.push(vec![
                        p.period.clone(),
                        v.measure.clone(),
                        label.clone(),
                        x.to_string(),
                    ]);
                }
            }
            for r in &c.ranking.top {
                ranks.push(vec![
                    p.period.clone(),
                    r.rank.to_string(),
                    r.measure.clone(),
                    r.label.clone(),
                    r.value.to_string(),
                ]);
            }
        }
        out.csv(
            "centrality.csv",
            &["period", "measure", "label", "value"],
            values,
        )?;
        out.csv(
            "rankings.csv",
            &["period", "rank", "measure", "label", "value"],
            ranks,
        )?;
    }

    if bundle.periods.iter().any(|p| p.spatial.is_some()) {
        let mut tris = Vec::new();
        let mut dens = Vec::new();
        for p in &bundle.periods {
            let Some(s) = &p.spatial else { continue };
            for t in &s.triangles {
                tris.push(vec![
                    p.period.clone(),
                    t.labels[0].clone(),
                    t.labels[1].clone(),
                    t.labels[2].clone(),
                    t.center.lat.to_string(),
                    t.center.lon.to_string(),
                    t.area.to_string(),
                ]);
            }
            if let Some(k) = &s.area_density {
                for (x, f) in &k.grid {
                    dens.push(vec![p.period.clone(), x.to_string(), f.to_string()]);
                }
            }
        }
        out.csv(
            "triangles_geo.csv",
            &[
                "period",
                "label1",
                "label2",
                "label3",
                "lat",
                "lon",
                "area_sqmi",
            ],
            tris,
        )?;
        out.csv("kde_area.csv", &["period", "x", "f"], dens)?;
    }

    if options.svg {
        for s in &bundle.scaling {
            if let Some(svg) = loglog_svg(s) {
                out.text(&format!("plots/{}.svg", safe_name(&s.class)), &svg)?;
            }
        }
    }

    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed: bundle.config.seed,
        seed_generated: bundle.config.seed_generated,
        config: bundle.config.clone(),
        periods: bundle.periods.iter().map(|p| p.period.clone()).collect(),
        errors: bundle.errors.clone(),
        files: out.files,
        generated_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
    };
    let path = out_dir.join("manifest.json");
    fs::write(&path, serde_json::to_string_pretty(&manifest)?)?;
    Ok(path)
}

/// Scatter of `(ln m, ln count)` with the fitted line.
pub fn loglog_svg(row: &ScalingRow) -> Option<String> {
    let fit = row.fit.as_ref()?;
    let pts: Vec<(f64, f64)> = row
        .points
        .iter()
        .filter(|p| p.1 > 0 && p.2 > 0)
        .map(|p| ((p.1 as f64).ln(), (p.2 as f64).ln()))
        .collect();
    let (w, h, pad) = (480.0, 360.0, 48.0);
    let fold = |f: fn(f64, f64) -> f64, init: f64, k: usize| {
        pts.iter()
            .map(|p| if k == 0 { p.0 } else { p.1 })
            .fold(init, f)
    };
    let (x0, x1) = (
        fold(f64::min, f64::INFINITY, 0),
        fold(f64::max, f64::NEG_INFINITY, 0),
    );
    let (mut y0, mut y1) = (
        fold(f64::min, f64::INFINITY, 1),
        fold(f64::max, f64::NEG_INFINITY, 1),
    );
    if y1 - y0 < 1e-9 {
        y0 -= 1.0;
        y1 += 1.0;
    }
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{pad}" y="24" font-family="sans-serif" font-size="14">{}: beta = {:.3}, R2 = {:.3}</text>"#,
        row.class, fit.beta, fit.r2
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">ln m</text>"#,
        w / 2.0,
        h - 12.0
    );
    let _ = writeln!(
        s,
        r#"<line x1="{pad}" y1="{}" x2="{}" y2="{}" stroke="black"/><line x1="{pad}" y1="{pad}" x2="{pad}" y2="{}" stroke="black"/>"#,
        h - pad,
        w - pad,
        h - pad,
        h - pad
    );
    for (x, y) in &pts {
        let _ = writeln!(
            s,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#,
            sx(*x),
            sy(*y)
        );
    }
    let line = |x: f64| fit.alpha + fit.beta * x;
    let _ = writeln!(
        s,
        r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="firebrick" stroke-width="1.5"/>"#,
        sx(x0),
        sy(line(x0)),
        sx(x1),
        sy(line(x1))
    );
    s.push_str("</svg>\n");
    Some(s)
}
