//! CSV data for the region and curve figures.

use super::curves::{thm14_curve, thm16_curve, sobolev_from_alpha};
use super::{above_below_form, classify_above_below, dim_f, in_domain_d, Constraint, ParamPoint, Region};
use crate::csvout::{fmt_f64, CsvTable};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitKind {
    Thm14,
    Thm16 { m: u32 },
    Regions,
    DimensionSurface,
}

impl EmitKind {
    /// `thm14`, `thm16` (needs `m`), `regions` or `dimension-surface`.
    pub fn parse(s: &str, m: Option<u32>) -> Result<Self> {
        match s {
            "thm14" => Ok(EmitKind::Thm14),
            "thm16" => m
                .map(|m| EmitKind::Thm16 { m })
                .ok_or_else(|| Error::Precondition("thm16 needs the saddle index m".into())),
            "regions" => Ok(EmitKind::Regions),
            "dimension-surface" => Ok(EmitKind::DimensionSurface),
            _ => Err(Error::Parse(format!("unknown curve kind '{s}'"))),
        }
    }
}

/// Edge label of a polygon side: the constraint it lies on, or the
/// above/below boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Edge {
    Constraint(Constraint),
    AboveBelow,
}

impl Edge {
    pub fn name(self) -> &'static str {
        match self {
            Edge::Constraint(c) => c.name(),
            Edge::AboveBelow => "above-below",
        }
    }
}

type Poly = Vec<((f64, f64), Edge)>;

fn clip<F: Fn(f64, f64) -> f64>(poly: &Poly, slack: F, label: Edge) -> Poly {
    let mut out: Poly = Vec::new();
    let len = poly.len();
    for i in 0..len {
        let ((x0, y0), lab) = poly[i];
        let ((x1, y1), _) = poly[(i + 1) % len];
        let (s0, s1) = (slack(x0, y0), slack(x1, y1));
        let (in0, in1) = (s0 >= 0.0, s1 >= 0.0);
        let cut = || {
            let t = s0 / (s0 - s1);
            (x0 + t * (x1 - x0), y0 + t * (y1 - y0))
        };
        match (in0, in1) {
            (true, true) => out.push(((x0, y0), lab)),
            (true, false) => {
                out.push(((x0, y0), lab));
                out.push((cut(), label));
            }
            (false, true) => out.push((cut(), lab)),
            (false, false) => {}
        }
    }
    // A repeated vertex bounds a zero-length edge; keep the label of the edge
    // that actually leaves it.
    let same = |a: (f64, f64), b: (f64, f64)| (a.0 - b.0).abs() < 1e-14 && (a.1 - b.1).abs() < 1e-14;
    let mut dedup: Poly = Vec::with_capacity(out.len());
    for v in out {
        match dedup.last_mut() {
            Some(last) if same(last.0, v.0) => *last = v,
            _ => dedup.push(v),
        }
    }
    let mut out = dedup;
    while out.len() > 1 {
        let (f, l) = (out[0].0, out[out.len() - 1].0);
        if (f.0 - l.0).abs() < 1e-14 && (f.1 - l.1).abs() < 1e-14 {
            out.pop();
        } else {
            break;
        }
    }
    out
}

/// Vertices of the closure of `𝒟`, counterclockwise; each vertex carries
/// the label of the edge leaving it.
pub fn domain_polygon(k: u32, n: u32) -> Vec<((f64, f64), Edge)> {
    let u1 = Edge::Constraint(Constraint::U1Range);
    let u2 = Edge::Constraint(Constraint::U2Range);
    let mut poly: Poly = vec![((0.0, 0.5), u2), ((0.5, 0.5), u1), ((0.5, 1.0), u2), ((0.0, 1.0), u1)];
    for c in [Constraint::QAtLeastOne, Constraint::ShrinkingCell, Constraint::Disjointness] {
        poly = clip(&poly, |a, b| c.slack(&ParamPoint::new(a, b, k, n)), Edge::Constraint(c));
    }
    poly
}

fn region_piece(k: u32, n: u32, region: Region) -> Poly {
    let sign = if region == Region::Above { 1.0 } else { -1.0 };
    let limit = n as f64 - 2.5;
    clip(
        &domain_polygon(k, n),
        |a, b| sign * (limit - above_below_form(&ParamPoint::new(a, b, k, n))),
        Edge::AboveBelow,
    )
}

/// CSV rows for the requested figure data.
pub fn curve_emit(k: u32, n: u32, what: EmitKind) -> Result<CsvTable> {
    match what {
        EmitKind::Thm14 => {
            let curve = thm14_curve(k, n)?;
            let mut t = CsvTable::new(["alpha", "s", "branch", "u1", "u2", "trivial"]);
            for (a, s, label) in curve.sample(41) {
                let p = sobolev_from_alpha(k, n, a)?;
                t.push(vec![
                    fmt_f64(a),
                    fmt_f64(s),
                    label.to_string(),
                    fmt_f64(p.u1),
                    fmt_f64(p.u2),
                    fmt_f64((n as f64 - a) / 2.0),
                ]);
            }
            Ok(t)
        }
        EmitKind::Thm16 { m } => {
            let curve = thm16_curve(n, m)?;
            let mut t = CsvTable::new(["alpha", "s", "branch", "trivial", "non_dispersive"]);
            for (a, s, label) in curve.sample(41) {
                let nf = n as f64;
                t.push(vec![
                    fmt_f64(a),
                    fmt_f64(s),
                    label.to_string(),
                    fmt_f64((nf - a) / 2.0),
                    fmt_f64((nf - a + 1.0) / 2.0),
                ]);
            }
            Ok(t)
        }
        EmitKind::Regions => {
            if k < 2 || n < 1 {
                return Err(Error::Precondition(format!("need k >= 2, n >= 1, got k = {k}, n = {n}")));
            }
            let mut t = CsvTable::new(["piece", "index", "u1", "u2", "edge"]);
            let pieces = [
                ("domain", domain_polygon(k, n)),
                ("above", region_piece(k, n, Region::Above)),
                ("below", region_piece(k, n, Region::Below)),
            ];
            for (name, poly) in pieces {
                for (i, ((a, b), e)) in poly.iter().enumerate() {
                    t.push(vec![name.into(), i.to_string(), fmt_f64(*a), fmt_f64(*b), e.name().into()]);
                }
            }
            Ok(t)
        }
        EmitKind::DimensionSurface => {
            if k < 2 || n < 1 {
                return Err(Error::Precondition(format!("need k >= 2, n >= 1, got k = {k}, n = {n}")));
            }
            let mut t = CsvTable::new(["u1", "u2", "region", "dim"]);
            let steps = 60;
            for i in 0..=steps {
                for j in 0..=steps {
                    let p = ParamPoint::new(0.5 * i as f64 / steps as f64, 0.5 + 0.5 * j as f64 / steps as f64, k, n);
                    if !in_domain_d(&p).inside {
                        continue;
                    }
                    let region = match classify_above_below(&p)? {
                        Region::Above => "above",
                        Region::Below => "below",
                    };
                    t.push(vec![fmt_f64(p.u1), fmt_f64(p.u2), region.into(), fmt_f64(dim_f(&p)?)]);
                }
            }
            Ok(t)
        }
    }
}
