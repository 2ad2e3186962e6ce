//! Grid covers and log-log slopes.

use std::collections::HashSet;

use super::measure::rect_union_area;
use super::{for_each_in_box, SlabFamily, FAMILY_BUDGET};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoverStrategy {
    /// Cubes of radius `1/R`.
    FineBalls,
    /// Cubes of radius `R^{−1/2}`.
    Sheets,
}

impl CoverStrategy {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fine-balls" => Ok(CoverStrategy::FineBalls),
            "sheets" => Ok(CoverStrategy::Sheets),
            _ => Err(Error::Parse(format!("unknown cover strategy '{s}'"))),
        }
    }

    pub fn radius(self, r: f64) -> f64 {
        match self {
            CoverStrategy::FineBalls => 1.0 / r,
            CoverStrategy::Sheets => r.powf(-0.5),
        }
    }
}

/// Boundary contact below this fraction of a cell does not count.
const TANGENT_TOL: f64 = 1e-9;

/// Grid shift in units of `ρ`. Slab centers sit on dyadic rationals at some
/// scales and not at others; a shift by an irrational multiple keeps every
/// scale in general position, so the count does not jump between scales.
pub const GRID_SHIFT: f64 = 0.618_033_988_749_894_8;

/// Number of grid cubes `∏ [2ρjᵢ − ρ + θρ, 2ρjᵢ + ρ + θρ)` meeting some box
/// of the family, with `ρ` the strategy's radius for the family's `R` and
/// `θ = GRID_SHIFT`.
pub fn covering_count(family: &SlabFamily, radius: f64, strategy: CoverStrategy) -> Result<u64> {
    let rho = strategy.radius(family.params.r);
    if !((radius - rho).abs() <= 1e-12 * rho) {
        return Err(Error::Precondition(format!(
            "radius {radius} is not the {strategy:?} radius {rho} for R = {}",
            family.params.r
        )));
    }
    let n = family.dim();
    let ranges: Vec<(Vec<i64>, Vec<i64>)> = family
        .slabs
        .iter()
        .map(|s| {
            let lo = s.center.iter().zip(&s.radii).map(|(c, r)| ((c - r + rho - GRID_SHIFT * rho) / (2.0 * rho) + TANGENT_TOL).floor() as i64);
            let hi = s.center.iter().zip(&s.radii).map(|(c, r)| ((c + r + rho - GRID_SHIFT * rho) / (2.0 * rho) - TANGENT_TOL).ceil() as i64 - 1);
            (lo.collect(), hi.collect())
        })
        .collect();
    match n {
        1 => {
            let rects: Vec<[f64; 4]> = ranges.iter().map(|(l, h)| [l[0] as f64, (h[0] + 1) as f64, 0.0, 1.0]).collect();
            Ok(rect_union_area(&rects).round() as u64)
        }
        2 => {
            let rects: Vec<[f64; 4]> = ranges
                .iter()
                .map(|(l, h)| [l[0] as f64, (h[0] + 1) as f64, l[1] as f64, (h[1] + 1) as f64])
                .collect();
            Ok(rect_union_area(&rects).round() as u64)
        }
        _ => {
            let total: f64 = ranges
                .iter()
                .map(|(l, h)| l.iter().zip(h).map(|(a, b)| (b - a + 1) as f64).product::<f64>())
                .sum();
            if total > FAMILY_BUDGET {
                return Err(Error::Budget { estimate: total, limit: FAMILY_BUDGET });
            }
            let mut cells = HashSet::new();
            for (l, h) in &ranges {
                for_each_in_box(l, h, |c| {
                    cells.insert(c.to_vec());
                });
            }
            Ok(cells.len() as u64)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
}

/// Least-squares slope of `log count` against `log(1/radius)`.
pub fn dim_slope_estimate(points: &[(f64, f64)]) -> Result<SlopeFit> {
    if points.len() < 4 {
        return Err(Error::Precondition(format!("slope fit needs at least 4 scales, got {}", points.len())));
    }
    if points.iter().any(|&(r, c)| !(r > 0.0) || !(c > 0.0)) {
        return Err(Error::Precondition("radii and counts must be positive".into()));
    }
    let xs: Vec<f64> = points.iter().map(|p| -p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Precondition("slope fit needs distinct radii".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    let stderr = (rss / (m - 2.0) / sxx).sqrt();
    Ok(SlopeFit { slope, stderr, intercept })
}
