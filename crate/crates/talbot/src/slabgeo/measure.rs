//! Union measures and overlap counts.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Domain, Slab, SlabFamily};
use crate::error::{Error, Result};

/// Samples per Monte Carlo stratum.
const CHUNK: u64 = 1 << 16;

/// Failure probability behind the Monte Carlo error bar.
pub const MC_DELTA: f64 = 0.05;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MeasureMethod {
    /// Coordinate sweep, `n ≤ 2`.
    ExactSweep,
    /// Stratified sampling; fails if the error bar exceeds `max_error`.
    MonteCarlo { samples: u64, seed: u64, max_error: Option<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureReport {
    pub measure: f64,
    /// `0` for the sweep; otherwise a bound holding with probability `1 − MC_DELTA`.
    pub error: f64,
    pub samples: u64,
}

/// Pieces of one closed interval inside the domain along one axis.
fn axis_pieces(lo: f64, hi: f64, axis: usize, domain: &Domain) -> Vec<(f64, f64)> {
    match domain {
        Domain::Plane => vec![(lo, hi)],
        Domain::Window(w) => {
            let (a, b) = (lo.max(w[axis].0), hi.min(w[axis].1));
            if a < b {
                vec![(a, b)]
            } else {
                vec![]
            }
        }
        Domain::Torus(p) => {
            let p = p[axis];
            if hi - lo >= p {
                return vec![(0.0, p)];
            }
            let a = lo.rem_euclid(p);
            let b = a + (hi - lo);
            if b <= p {
                vec![(a, b)]
            } else {
                vec![(a, p), (0.0, b - p)]
            }
        }
    }
}

/// Boxes of the family as pieces inside the domain.
fn domain_boxes(family: &SlabFamily) -> Vec<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    for s in &family.slabs {
        let per_axis: Vec<Vec<(f64, f64)>> = (0..s.center.len())
            .map(|i| axis_pieces(s.center[i] - s.radii[i], s.center[i] + s.radii[i], i, &family.domain))
            .collect();
        let mut acc: Vec<Vec<(f64, f64)>> = vec![vec![]];
        for pieces in per_axis {
            acc = acc
                .into_iter()
                .flat_map(|b| {
                    pieces.iter().map(move |&p| {
                        let mut b = b.clone();
                        b.push(p);
                        b
                    })
                })
                .collect();
        }
        out.extend(acc);
    }
    out
}

fn interval_union(mut iv: Vec<(f64, f64)>) -> f64 {
    iv.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in iv {
        match cur {
            Some((c, d)) if a <= d => cur = Some((c, d.max(b))),
            Some((c, d)) => {
                total += d - c;
                cur = Some((a, b));
            }
            None => cur = Some((a, b)),
        }
    }
    if let Some((c, d)) = cur {
        total += d - c;
    }
    total
}

/// Segment tree over compressed coordinates storing cover counts.
struct CoverTree {
    ys: Vec<f64>,
    count: Vec<u32>,
    len: Vec<f64>,
}

impl CoverTree {
    fn new(ys: Vec<f64>) -> Self {
        let m = ys.len().max(2);
        CoverTree { ys, count: vec![0; 4 * m], len: vec![0.0; 4 * m] }
    }

    fn update(&mut self, node: usize, l: usize, r: usize, a: usize, b: usize, delta: i32) {
        if b <= l || r <= a {
            return;
        }
        if a <= l && r <= b {
            self.count[node] = (self.count[node] as i32 + delta) as u32;
        } else {
            let mid = (l + r) / 2;
            self.update(2 * node, l, mid, a, b, delta);
            self.update(2 * node + 1, mid, r, a, b, delta);
        }
        self.len[node] = if self.count[node] > 0 {
            self.ys[r] - self.ys[l]
        } else if r - l == 1 {
            0.0
        } else {
            self.len[2 * node] + self.len[2 * node + 1]
        };
    }
}

/// Area of a union of rectangles `[x₀, x₁] × [y₀, y₁]`.
pub(crate) fn rect_union_area(rects: &[[f64; 4]]) -> f64 {
    if rects.is_empty() {
        return 0.0;
    }
    let mut ys: Vec<f64> = rects.iter().flat_map(|r| [r[2], r[3]]).collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let idx = |y: f64| ys.binary_search_by(|v| v.total_cmp(&y)).expect("compressed coordinate");
    let mut events: Vec<(f64, i32, usize, usize)> = Vec::with_capacity(2 * rects.len());
    for r in rects {
        if r[0] < r[1] && r[2] < r[3] {
            let (a, b) = (idx(r[2]), idx(r[3]));
            events.push((r[0], 1, a, b));
            events.push((r[1], -1, a, b));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let segs = ys.len() - 1;
    if segs == 0 {
        return 0.0;
    }
    let mut tree = CoverTree::new(ys);
    let mut area = 0.0;
    let mut last = events.first().map_or(0.0, |e| e.0);
    for (x, delta, a, b) in events {
        area += tree.len[1] * (x - last);
        last = x;
        tree.update(1, 0, segs, a, b, delta);
    }
    area
}

/// Lebesgue measure of the union of the family's boxes inside its domain.
pub fn union_measure(family: &SlabFamily, method: MeasureMethod) -> Result<MeasureReport> {
    match method {
        MeasureMethod::ExactSweep => {
            let boxes = domain_boxes(family);
            let measure = match family.dim() {
                1 => interval_union(boxes.iter().map(|b| b[0]).collect()),
                2 => {
                    let rects: Vec<[f64; 4]> = boxes.iter().map(|b| [b[0].0, b[0].1, b[1].0, b[1].1]).collect();
                    rect_union_area(&rects)
                }
                n => return Err(Error::Precondition(format!("exact sweep needs n <= 2, got n = {n}"))),
            };
            Ok(MeasureReport { measure, error: 0.0, samples: 0 })
        }
        MeasureMethod::MonteCarlo { samples, seed, max_error } => monte_carlo(family, samples, seed, max_error),
    }
}

fn sample_region(family: &SlabFamily) -> Vec<(f64, f64)> {
    match &family.domain {
        Domain::Torus(p) => p.iter().map(|&p| (0.0, p)).collect(),
        Domain::Window(w) => w.clone(),
        Domain::Plane => (0..family.dim())
            .map(|i| {
                family.slabs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), s| {
                    (a.min(s.center[i] - s.radii[i]), b.max(s.center[i] + s.radii[i]))
                })
            })
            .collect(),
    }
}

fn monte_carlo(family: &SlabFamily, samples: u64, seed: u64, max_error: Option<f64>) -> Result<MeasureReport> {
    if samples == 0 {
        return Err(Error::Precondition("Monte Carlo needs at least one sample".into()));
    }
    if family.is_empty() {
        return Ok(MeasureReport { measure: 0.0, error: 0.0, samples });
    }
    let region = sample_region(family);
    let vol: f64 = region.iter().map(|(a, b)| b - a).product();
    let strata = samples.div_ceil(CHUNK);
    let per = samples.div_ceil(strata);
    let total = strata * per;
    let error = vol * (0.25 / (total as f64 * MC_DELTA)).sqrt();
    if let Some(target) = max_error {
        if error > target {
            return Err(Error::Precondition(format!(
                "{total} samples give error {error:.3e}, above the requested {target:.3e}"
            )));
        }
    }
    let loc = Locator::new(family);
    let hits: Vec<u64> = (0..strata)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let w0 = (region[0].1 - region[0].0) / strata as f64;
            let lo0 = region[0].0 + s as f64 * w0;
            let mut x = vec![0.0; region.len()];
            let mut h = 0;
            for _ in 0..per {
                x[0] = lo0 + w0 * rng.gen::<f64>();
                for (i, (a, b)) in region.iter().enumerate().skip(1) {
                    x[i] = a + (b - a) * rng.gen::<f64>();
                }
                if loc.covers(&x) {
                    h += 1;
                }
            }
            h
        })
        .collect();
    let frac = hits.iter().sum::<u64>() as f64 / total as f64;
    Ok(MeasureReport { measure: vol * frac, error, samples: total })
}

/// Uniform grid hash of the boxes.
struct Locator<'a> {
    slabs: &'a [Slab],
    side: Vec<f64>,
    /// Cells per axis on a torus.
    wrap: Option<Vec<i64>>,
    period: Vec<f64>,
    cells: HashMap<Vec<i64>, Vec<u32>>,
    keys: Vec<Vec<Vec<i64>>>,
}

impl<'a> Locator<'a> {
    fn new(family: &'a SlabFamily) -> Self {
        let n = family.dim();
        let max_r: Vec<f64> = (0..n)
            .map(|i| family.slabs.iter().map(|s| s.radii[i]).fold(0.0, f64::max).max(f64::MIN_POSITIVE))
            .collect();
        let (side, wrap, period) = match &family.domain {
            Domain::Torus(p) => {
                let counts: Vec<i64> = (0..n).map(|i| ((p[i] / (2.0 * max_r[i])).floor() as i64).clamp(1, 1 << 20)).collect();
                let side = (0..n).map(|i| p[i] / counts[i] as f64).collect();
                (side, Some(counts), p.clone())
            }
            _ => (max_r.iter().map(|r| 2.0 * r).collect(), None, vec![f64::INFINITY; n]),
        };
        let mut loc = Locator { slabs: &family.slabs, side, wrap, period, cells: HashMap::new(), keys: Vec::new() };
        for (id, s) in family.slabs.iter().enumerate() {
            let keys = loc.box_keys(s);
            for k in &keys {
                loc.cells.entry(k.clone()).or_default().push(id as u32);
            }
            loc.keys.push(keys);
        }
        loc
    }

    fn index(&self, axis: usize, j: i64) -> i64 {
        match &self.wrap {
            Some(c) => j.rem_euclid(c[axis]),
            None => j,
        }
    }

    fn box_keys(&self, s: &Slab) -> Vec<Vec<i64>> {
        let mut keys: Vec<Vec<i64>> = vec![vec![]];
        for i in 0..s.center.len() {
            let lo = ((s.center[i] - s.radii[i]) / self.side[i] - 1e-9).floor() as i64;
            let hi = ((s.center[i] + s.radii[i]) / self.side[i] + 1e-9).floor() as i64;
            let mut js: Vec<i64> = (lo..=hi).map(|j| self.index(i, j)).collect();
            js.sort_unstable();
            js.dedup();
            keys = keys
                .into_iter()
                .flat_map(|k| {
                    js.iter().map(move |&j| {
                        let mut k = k.clone();
                        k.push(j);
                        k
                    })
                })
                .collect();
        }
        keys.sort();
        keys
    }

    /// Signed offset `b − a`, reduced to the nearest image on a torus.
    fn offset(&self, axis: usize, a: f64, b: f64) -> f64 {
        let d = b - a;
        let p = self.period[axis];
        if p.is_finite() {
            d - p * (d / p).round()
        } else {
            d
        }
    }

    fn covers(&self, x: &[f64]) -> bool {
        let key: Vec<i64> = x.iter().enumerate().map(|(i, &v)| self.index(i, (v / self.side[i]).floor() as i64)).collect();
        self.cells.get(&key).is_some_and(|ids| {
            ids.iter().any(|&id| {
                let s = &self.slabs[id as usize];
                (0..x.len()).all(|i| self.offset(i, s.center[i], x[i]).abs() < s.radii[i])
            })
        })
    }

    fn intersect(&self, a: &Slab, b: &Slab) -> bool {
        (0..a.center.len()).all(|i| self.offset(i, a.center[i], b.center[i]).abs() <= a.radii[i] + b.radii[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapReport {
    pub boxes: usize,
    /// Ordered pairs `(j, j′)` with `I_j ∩ I_{j′} ≠ ∅`, diagonal included.
    pub pairs: u64,
    /// `pairs / boxes`.
    pub ratio: f64,
}

/// Intersecting ordered pairs of closed boxes, with torus images on a torus.
pub fn overlap_pair_count(family: &SlabFamily) -> OverlapReport {
    let n = family.len();
    if n == 0 {
        return OverlapReport { boxes: 0, pairs: 0, ratio: 0.0 };
    }
    let loc = Locator::new(family);
    let unordered: u64 = loc
        .cells
        .par_iter()
        .map(|(key, ids)| {
            let mut c = 0u64;
            for (x, &i) in ids.iter().enumerate() {
                for &j in &ids[x + 1..] {
                    // Count each pair in the first cell both boxes share.
                    let (ki, kj) = (&loc.keys[i as usize], &loc.keys[j as usize]);
                    let first = ki.iter().find(|k| kj.binary_search(k).is_ok());
                    if first == Some(key) && loc.intersect(&loc.slabs[i as usize], &loc.slabs[j as usize]) {
                        c += 1;
                    }
                }
            }
            c
        })
        .sum();
    let pairs = n as u64 + 2 * unordered;
    OverlapReport { boxes: n, pairs, ratio: pairs as f64 / n as f64 }
}
