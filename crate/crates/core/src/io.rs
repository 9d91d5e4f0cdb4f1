//! CSV and JSON formats for sections, reports, arrays and tables.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::bivariate::IntertwiningArray;
use crate::error::{LejaError, Result};
use crate::flip::LebesgueReport;
use crate::leja::{CompactTag, LejaSection};
use crate::math::ComplexPoint;
use crate::transport::{ExteriorMap, TransportedSection};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexPoint> for Point {
    fn from(z: ComplexPoint) -> Self {
        Point { re: z.re, im: z.im }
    }
}

impl From<Point> for ComplexPoint {
    fn from(p: Point) -> Self {
        ComplexPoint::new(p.re, p.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionJson {
    pub n: usize,
    pub points: Vec<Point>,
    pub compact_tag: CompactTag,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<ExteriorMap>,
}

fn csv_err(e: csv::Error) -> LejaError {
    LejaError::Invalid(format!("csv: {e}"))
}

fn json_err(e: serde_json::Error) -> LejaError {
    LejaError::Invalid(format!("json: {e}"))
}

fn io_err(e: std::io::Error) -> LejaError {
    LejaError::Invalid(format!("io: {e}"))
}

pub fn section_to_json(section: &LejaSection) -> SectionJson {
    SectionJson {
        n: section.len(),
        points: section.points().iter().map(|&z| z.into()).collect(),
        compact_tag: section.compact_tag(),
        map: None,
    }
}

pub fn transported_to_json(ts: &TransportedSection) -> SectionJson {
    SectionJson {
        n: ts.len(),
        points: ts.images.iter().map(|&z| z.into()).collect(),
        compact_tag: CompactTag::SampledCompact,
        map: Some(ts.map),
    }
}

pub fn write_section_json<W: Write>(section: &LejaSection, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &section_to_json(section)).map_err(json_err)
}

pub fn read_section_json<R: Read>(input: R) -> Result<LejaSection> {
    let doc: SectionJson = serde_json::from_reader(input).map_err(json_err)?;
    if doc.n != doc.points.len() {
        return Err(LejaError::Invalid(format!(
            "n = {} but {} points",
            doc.n,
            doc.points.len()
        )));
    }
    LejaSection::from_points(doc.points.into_iter().map(Into::into).collect(), doc.compact_tag)
}

fn write_points_csv<W: Write>(points: &[ComplexPoint], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "re", "im"]).map_err(csv_err)?;
    for (i, z) in points.iter().enumerate() {
        w.write_record([(i + 1).to_string(), z.re.to_string(), z.im.to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

/// Rows `(index, re, im)` with a 1-based index.
pub fn write_section_csv<W: Write>(section: &LejaSection, out: W) -> Result<()> {
    write_points_csv(section.points(), out)
}

pub fn read_section_csv<R: Read>(input: R, tag: CompactTag) -> Result<LejaSection> {
    let mut r = csv::Reader::from_reader(input);
    let mut points = Vec::new();
    for row in r.records() {
        let row = row.map_err(csv_err)?;
        let field = |i: usize| row.get(i).unwrap_or("").trim().to_string();
        let bad = |what: &str| LejaError::Invalid(format!("bad {what} in row {:?}", row));
        let index: usize = field(0).parse().map_err(|_| bad("index"))?;
        if index != points.len() + 1 {
            return Err(LejaError::Invalid(format!("unexpected index {index}")));
        }
        let re: f64 = field(1).parse().map_err(|_| bad("re"))?;
        let im: f64 = field(2).parse().map_err(|_| bad("im"))?;
        points.push(ComplexPoint::new(re, im));
    }
    LejaSection::from_points(points, tag)
}

pub fn write_transported_json<W: Write>(ts: &TransportedSection, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &transported_to_json(ts)).map_err(json_err)
}

/// Rows `(index, re, im, map)`; the map column holds the map as JSON.
pub fn write_transported_csv<W: Write>(ts: &TransportedSection, out: W) -> Result<()> {
    let map = serde_json::to_string(&ts.map).map_err(json_err)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["index", "re", "im", "map"]).map_err(csv_err)?;
    for (i, z) in ts.images.iter().enumerate() {
        w.write_record([
            (i + 1).to_string(),
            z.re.to_string(),
            z.im.to_string(),
            map.clone(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn write_lebesgue_json<W: Write>(report: &LebesgueReport, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, report).map_err(json_err)
}

/// Rows `(k, sup_k)`.
pub fn write_lebesgue_csv<W: Write>(report: &LebesgueReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "sup_k"]).map_err(csv_err)?;
    for (k, s) in report.per_node_sup.iter().enumerate() {
        w.write_record([(k + 1).to_string(), s.to_string()])
            .map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayNode {
    pub z: Point,
    pub w: Point,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayJson {
    #[serde(rename = "N")]
    pub total: usize,
    pub n: usize,
    pub m: usize,
    pub nodes: Vec<ArrayNode>,
}

pub fn array_to_json(array: &IntertwiningArray) -> ArrayJson {
    let (n, m) = array.shape();
    ArrayJson {
        total: array.len(),
        n,
        m,
        nodes: array
            .nodes()
            .into_iter()
            .map(|(z, w)| ArrayNode {
                z: z.into(),
                w: w.into(),
            })
            .collect(),
    }
}

pub fn write_array_json<W: Write>(array: &IntertwiningArray, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, &array_to_json(array)).map_err(json_err)
}

/// One row of an `(n, N, value)` table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    #[serde(rename = "N")]
    pub total: usize,
    pub value: f64,
}

pub fn write_table_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

/// Any serializable record list as CSV with a header from the field names.
pub fn write_records_csv<W: Write, T: Serialize>(rows: &[T], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(io_err)
}

pub fn write_json<W: Write, T: Serialize + ?Sized>(value: &T, out: W) -> Result<()> {
    serde_json::to_writer_pretty(out, value).map_err(json_err)
}
