use std::cmp::Ordering;
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::GeometryError;

/// CSV header shared by every frontier writer.
pub const CSV_HEADER: &str = "r1_bits,r2_bits";

/// A rate pair in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Self {
        Self {
            r1: r1.max(0.0),
            r2: r2.max(0.0),
        }
    }
}

/// A rate region stored as the Pareto frontier of finitely many
/// achievable points; the region is their downward-closed hull.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateRegion {
    boundary: Vec<RatePair>,
    provenance: String,
}

impl RateRegion {
    pub fn from_points(points: Vec<RatePair>, provenance: impl Into<String>) -> Self {
        Self {
            boundary: pareto_frontier(points),
            provenance: provenance.into(),
        }
    }

    /// Boundary points sorted by r1 ascending, r2 strictly decreasing.
    pub fn boundary(&self) -> &[RatePair] {
        &self.boundary
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    /// Maximum of w1·r1 + w2·r2 over the stored frontier.
    pub fn support(&self, w: SupportQuery) -> Result<f64, GeometryError> {
        support(self, w)
    }

    /// Union with another region, re-pruned.
    pub fn merged(&self, other: &RateRegion) -> RateRegion {
        let mut points = self.boundary.clone();
        points.extend_from_slice(&other.boundary);
        RateRegion::from_points(points, self.provenance.clone())
    }

    pub fn max_r1(&self) -> Option<f64> {
        self.boundary.last().map(|p| p.r1)
    }

    pub fn max_r2(&self) -> Option<f64> {
        self.boundary.first().map(|p| p.r2)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(24 * (self.boundary.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for p in &self.boundary {
            let _ = writeln!(out, "{},{}", format_sig(p.r1), format_sig(p.r2));
        }
        out
    }

    pub fn from_csv(text: &str, provenance: impl Into<String>) -> Result<Self, GeometryError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        match lines.next() {
            Some(h) if h.trim() == CSV_HEADER => {}
            other => {
                return Err(GeometryError::Csv(format!(
                    "expected header {CSV_HEADER:?}, found {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let mut points = Vec::new();
        for (n, line) in lines.enumerate() {
            let mut fields = line.split(',').map(str::trim);
            let mut next = || -> Result<f64, GeometryError> {
                let raw = fields
                    .next()
                    .ok_or_else(|| GeometryError::Csv(format!("row {} too short", n + 2)))?;
                let v: f64 = raw
                    .parse()
                    .map_err(|_| GeometryError::Csv(format!("row {}: bad number {raw:?}", n + 2)))?;
                if !v.is_finite() || v < 0.0 {
                    return Err(GeometryError::Csv(format!(
                        "row {}: rate {raw} must be finite and nonnegative",
                        n + 2
                    )));
                }
                Ok(v)
            };
            let r1 = next()?;
            let r2 = next()?;
            points.push(RatePair { r1, r2 });
        }
        Ok(Self::from_points(points, provenance))
    }
}

/// Formats with nine significant digits in fixed notation.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0.00000000".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (8 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

fn by_r1_then_r2(a: &RatePair, b: &RatePair) -> Ordering {
    a.r1.total_cmp(&b.r1).then(a.r2.total_cmp(&b.r2))
}

/// Removes dominated points. The output is independent of input order.
pub fn pareto_frontier(mut points: Vec<RatePair>) -> Vec<RatePair> {
    points.sort_unstable_by(|a, b| by_r1_then_r2(b, a));
    let mut frontier: Vec<RatePair> = Vec::new();
    let mut best = f64::NEG_INFINITY;
    for p in points {
        if p.r2 > best {
            best = p.r2;
            frontier.push(p);
        }
    }
    frontier.reverse();
    frontier
}

/// Nonnegative weight vector for a support-function query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportQuery {
    w1: f64,
    w2: f64,
}

impl SupportQuery {
    pub fn new(w1: f64, w2: f64) -> Result<Self, GeometryError> {
        if !(w1 >= 0.0 && w2 >= 0.0) || (w1 == 0.0 && w2 == 0.0) {
            return Err(GeometryError::BadWeights { w1, w2 });
        }
        Ok(Self { w1, w2 })
    }

    /// Unit vector at angle `phi` in [0, π/2].
    pub fn at_angle(phi: f64) -> Self {
        Self {
            w1: phi.cos().max(0.0),
            w2: phi.sin().max(0.0),
        }
    }

    /// `count` unit directions spread evenly over the closed quarter circle.
    pub fn quarter_circle(count: usize) -> Vec<Self> {
        match count {
            0 => Vec::new(),
            1 => vec![Self::at_angle(FRAC_PI_2 / 2.0)],
            _ => (0..count)
                .map(|k| Self::at_angle(FRAC_PI_2 * k as f64 / (count - 1) as f64))
                .collect(),
        }
    }

    pub fn weights(&self) -> (f64, f64) {
        (self.w1, self.w2)
    }
}

pub fn support(region: &RateRegion, w: SupportQuery) -> Result<f64, GeometryError> {
    region
        .boundary
        .iter()
        .map(|p| w.w1 * p.r1 + w.w2 * p.r2)
        .max_by(f64::total_cmp)
        .ok_or(GeometryError::EmptyRegion)
}

/// Outcome of a support-function subset test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SubsetReport {
    pub holds: bool,
    /// max over directions of support(a) − support(b); ≤ 0 when a sits inside b.
    pub max_violation: f64,
    pub directions: usize,
}

/// Checks a ⊆ b by comparing support functions along `directions`
/// unit weights on the nonnegative quarter circle.
pub fn subset_check(
    a: &RateRegion,
    b: &RateRegion,
    directions: usize,
    tol: f64,
) -> Result<SubsetReport, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::EmptyRegion);
    }
    let mut max_violation = f64::NEG_INFINITY;
    for w in SupportQuery::quarter_circle(directions) {
        let gap = support(a, w)? - support(b, w)?;
        max_violation = max_violation.max(gap);
    }
    Ok(SubsetReport {
        holds: max_violation <= tol,
        max_violation,
        directions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pts(raw: &[(f64, f64)]) -> Vec<RatePair> {
        raw.iter().map(|&(a, b)| RatePair::new(a, b)).collect()
    }

    fn region(raw: &[(f64, f64)]) -> RateRegion {
        RateRegion::from_points(pts(raw), "test")
    }

    #[test]
    fn pareto_prunes_dominated_and_sorts() {
        let f = pareto_frontier(pts(&[(0.5, 0.5), (1.0, 0.0), (0.0, 1.0), (0.4, 0.4), (0.5, 0.2)]));
        assert_eq!(f, pts(&[(0.0, 1.0), (0.5, 0.5), (1.0, 0.0)]));
        assert!(pareto_frontier(Vec::new()).is_empty());
    }

    #[test]
    fn pareto_collapses_duplicates() {
        let f = pareto_frontier(pts(&[(0.3, 0.3), (0.3, 0.3), (0.3, 0.1)]));
        assert_eq!(f, pts(&[(0.3, 0.3)]));
    }

    #[test]
    fn support_examples() {
        // {R1 ≤ 1, R2 ≤ 1, R1 + R2 ≤ 1.5}
        let r = region(&[(0.0, 1.0), (0.5, 1.0), (1.0, 0.5), (1.0, 0.0)]);
        assert_eq!(r.support(SupportQuery::new(1.0, 1.0).unwrap()).unwrap(), 1.5);
        assert_eq!(r.support(SupportQuery::new(1.0, 0.0).unwrap()).unwrap(), 1.0);
        assert!(SupportQuery::new(0.0, 0.0).is_err());
        assert!(SupportQuery::new(-1.0, 1.0).is_err());
        assert_eq!(
            region(&[]).support(SupportQuery::new(1.0, 1.0).unwrap()),
            Err(GeometryError::EmptyRegion)
        );
    }

    #[test]
    fn subset_examples() {
        let tri = region(&[(1.0, 0.0), (0.0, 1.0)]);
        let square = region(&[(1.0, 1.0)]);
        let same = subset_check(&tri, &tri, 64, 0.0).unwrap();
        assert!(same.holds);
        assert!(same.max_violation <= 0.0);

        assert!(subset_check(&tri, &square, 64, 1e-12).unwrap().holds);
        let rev = subset_check(&square, &tri, 64, 1e-12).unwrap();
        assert!(!rev.holds);
        // Worst direction is the diagonal: √2 − 1/√2.
        assert_abs_diff_eq!(rev.max_violation, 0.5 * 2f64.sqrt(), epsilon = 1e-2);
    }

    #[test]
    fn quarter_circle_includes_axes() {
        let dirs = SupportQuery::quarter_circle(64);
        assert_eq!(dirs.len(), 64);
        assert_eq!(dirs[0].weights(), (1.0, 0.0));
        let (w1, w2) = dirs[63].weights();
        assert!(w1 < 1e-15 && (w2 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn csv_round_trip_and_format() {
        let r = region(&[(0.79248125036057815, 0.20751874963942185), (0.0, 1.0)]);
        let csv = r.to_csv();
        assert_eq!(csv, "r1_bits,r2_bits\n0.00000000,1.00000000\n0.792481250,0.207518750\n");
        let back = RateRegion::from_csv(&csv, "csv").unwrap();
        assert_eq!(back.boundary().len(), 2);
        assert!(RateRegion::from_csv("a,b\n1,2\n", "x").is_err());
        assert!(RateRegion::from_csv("r1_bits,r2_bits\n1,-2\n", "x").is_err());
        assert_eq!(format_sig(1.160964047), "1.16096405");
        assert_eq!(format_sig(12.5), "12.5000000");
    }
}
