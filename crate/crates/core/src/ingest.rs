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

//! CSV ingestion of period-stamped edge lists and airport coordinates.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geo::GeoPoint;
use crate::graph::Graph;

pub const EDGE_HEADER: [&str; 3] = ["period", "src", "dst"];
pub const AIRPORT_HEADER: [&str; 3] = ["label", "lat_deg", "lon_deg"];

/// Graphs in order of first appearance of their period label.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PeriodSeries {
    pub periods: Vec<(String, Graph)>,
    pub coords: Option<BTreeMap<String, GeoPoint>>,
}

impl PeriodSeries {
    pub fn single(label: &str, g: Graph) -> PeriodSeries {
        PeriodSeries {
            periods: vec![(label.to_string(), g)],
            coords: None,
        }
    }

    pub fn get(&self, period: &str) -> Option<&Graph> {
        self.periods
            .iter()
            .find(|(p, _)| p == period)
            .map(|(_, g)| g)
    }
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(r)
}

/// Records with their 1-based line numbers, after checking the header.
fn records<R: Read>(r: R, expected: [&str; 3]) -> Result<Vec<(u64, Vec<String>)>> {
    let mut rdr = reader(r);
    let mut rows = Vec::new();
    let mut header_seen = false;
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.iter().all(str::is_empty) {
            continue;
        }
        let fields: Vec<String> = rec.iter().map(str::to_string).collect();
        if !header_seen {
            let found = fields.join(",");
            if !fields
                .iter()
                .map(|f| f.to_ascii_lowercase())
                .eq(expected.iter().map(|s| s.to_string()))
            {
                return Err(Error::Header {
                    found,
                    expected: expected.join(","),
                });
            }
            header_seen = true;
            continue;
        }
        if fields.len() != 3 {
            return Err(Error::Parse {
                line,
                message: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        rows.push((line, fields));
    }
    if rows.is_empty() {
        return Err(Error::NoData);
    }
    Ok(rows)
}

pub fn parse_edges_from<R: Read>(r: R) -> Result<PeriodSeries> {
    let mut order: Vec<String> = Vec::new();
    let mut pairs: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    for (line, f) in records(r, EDGE_HEADER)? {
        if let Some(k) = f.iter().position(String::is_empty) {
            return Err(Error::Parse {
                line,
                message: format!("empty `{}` field", EDGE_HEADER[k]),
            });
        }
        let [period, src, dst] = [&f[0], &f[1], &f[2]];
        if src == dst {
            return Err(Error::Parse {
                line,
                message: format!("self-loop on `{src}`"),
            });
        }
        if !pairs.contains_key(period) {
            order.push(period.clone());
        }
        pairs
            .entry(period.clone())
            .or_default()
            .push((src.clone(), dst.clone()));
    }
    let periods = order
        .into_iter()
        .map(|p| {
            let g = Graph::from_edges(&pairs[&p])?;
            Ok((p, g))
        })
        .collect::<Result<_>>()?;
    Ok(PeriodSeries {
        periods,
        coords: None,
    })
}

pub fn parse_edges(path: &Path) -> Result<PeriodSeries> {
    parse_edges_from(std::fs::File::open(path)?)
}

pub fn parse_airports_from<R: Read>(r: R) -> Result<BTreeMap<String, GeoPoint>> {
    let mut out: BTreeMap<String, GeoPoint> = BTreeMap::new();
    for (line, f) in records(r, AIRPORT_HEADER)? {
        let err = |message: String| Error::Parse { line, message };
        if f[0].is_empty() {
            return Err(err("empty label".into()));
        }
        let num = |k: usize| {
            f[k].parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| {
                    err(format!(
                        "`{}` is not a number for {}",
                        f[k], AIRPORT_HEADER[k]
                    ))
                })
        };
        let p = GeoPoint::new(num(1)?, num(2)?).map_err(|e| err(e.to_string()))?;
        match out.get(&f[0]) {
            Some(q) if *q != p => {
                return Err(err(format!("conflicting coordinates for `{}`", f[0])));
            }
            _ => {
                out.insert(f[0].clone(), p);
            }
        }
    }
    Ok(out)
}

pub fn parse_airports(path: &Path) -> Result<BTreeMap<String, GeoPoint>> {
    parse_airports_from(std::fs::File::open(path)?)
}
