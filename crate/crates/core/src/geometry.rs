//! Fermat point (geometric median) location for a source plus geocast-region
//! centers.
//!
//! Three independent solvers are provided:
//!
//! * [`minima_fermat_point`]: exhaustive grid scan of the anchors' bounding box,
//!   returning the grid point with the smallest total path distance. This is
//!   the locator the routing schemes use.
//! * [`weiszfeld_fermat_point`]: iteratively reweighted centroid, used as an
//!   oracle for the grid scan.
//! * [`torricelli_triangle`]: the classical ruler-and-compass construction for
//!   three anchors.
//!
//! The objective is always the full source → point → destinations distance,
//! so the source is an anchor like any destination.

use std::fmt;

use crate::exec::Execution;

/// Distance below which a candidate is treated as sitting on an anchor.
pub const COINCIDENCE_EPSILON: f64 = 1e-9;

/// Step taken away from a non-optimal anchor when a Weiszfeld iterate lands on it.
const WEISZFELD_PERTURBATION: f64 = 1e-6;
/// Multiplier on the Weiszfeld step; anything in (1, 2) still descends and it
/// shortens the crawl toward optima lying close to an anchor.
const WEISZFELD_RELAXATION: f64 = 1.8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GeometryError {
    #[error("anchor set needs at least one destination")]
    NoDestinations,
    #[error("non-finite coordinate ({x}, {y})")]
    NonFinite { x: f64, y: f64 },
    #[error("candidate coincides with anchor {index} at ({x}, {y})")]
    CoincidentAnchor { index: usize, x: f64, y: f64 },
    #[error("search grid contains no scan points")]
    EmptyGrid,
    #[error("search bounds do not enclose anchor {index}")]
    BoundsExcludeAnchor { index: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
    #[error("no convergence after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("collinear triangle, middle vertex ({}, {}) used as fallback", fallback.point.x, fallback.point.y)]
    DegenerateTriangle { fallback: FermatResult },
}

pub type Result<T> = std::result::Result<T, GeometryError>;

/// A position in the plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance(self, other: Point2D) -> f64 {
        let (dx, dy) = (self.x - other.x, self.y - other.y);
        (dx * dx + dy * dy).sqrt()
    }

    pub fn dot(self, other: Point2D) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, other: Point2D) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn scale(self, k: f64) -> Self {
        Self::new(self.x * k, self.y * k)
    }

    fn checked(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(GeometryError::NonFinite {
                x: self.x,
                y: self.y,
            })
        }
    }
}

impl std::ops::Add for Point2D {
    type Output = Point2D;
    fn add(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point2D {
    type Output = Point2D;
    fn sub(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl fmt::Display for Point2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The source plus one or more destination (geocast region) centers.
#[derive(Debug, Clone, PartialEq)]
pub struct AnchorSet {
    source: Point2D,
    destinations: Vec<Point2D>,
}

impl AnchorSet {
    pub fn new(source: Point2D, destinations: Vec<Point2D>) -> Result<Self> {
        if destinations.is_empty() {
            return Err(GeometryError::NoDestinations);
        }
        source.checked()?;
        for d in &destinations {
            d.checked()?;
        }
        Ok(Self {
            source,
            destinations,
        })
    }

    pub fn source(&self) -> Point2D {
        self.source
    }

    pub fn destinations(&self) -> &[Point2D] {
        &self.destinations
    }

    /// Number of anchors, source included.
    pub fn len(&self) -> usize {
        self.destinations.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// All anchors, source first.
    pub fn iter(&self) -> impl Iterator<Item = Point2D> + '_ {
        std::iter::once(self.source).chain(self.destinations.iter().copied())
    }

    pub fn centroid(&self) -> Point2D {
        let n = self.len() as f64;
        let sum = self.iter().fold(Point2D::default(), |acc, p| acc + p);
        sum.scale(1.0 / n)
    }
}

/// Rectangle scanned by the grid locator, with its resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchBounds {
    pub min_x: f64,
    pub max_x: f64,
    pub min_y: f64,
    pub max_y: f64,
    pub step: f64,
}

impl SearchBounds {
    /// Bounding box of the anchors, scanned at `step` meters.
    pub fn enclosing(anchors: &AnchorSet, step: f64) -> Self {
        let mut b = SearchBounds {
            min_x: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            min_y: f64::INFINITY,
            max_y: f64::NEG_INFINITY,
            step,
        };
        for p in anchors.iter() {
            b.min_x = b.min_x.min(p.x);
            b.max_x = b.max_x.max(p.x);
            b.min_y = b.min_y.min(p.y);
            b.max_y = b.max_y.max(p.y);
        }
        b
    }

    pub fn contains(&self, p: Point2D) -> bool {
        p.x >= self.min_x && p.x <= self.max_x && p.y >= self.min_y && p.y <= self.max_y
    }

    /// Number of scan positions along each axis, both ends inclusive.
    fn axis_counts(&self) -> Option<(usize, usize)> {
        let finite = [self.min_x, self.max_x, self.min_y, self.max_y, self.step]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.step <= 0.0 || self.min_x > self.max_x || self.min_y > self.max_y {
            return None;
        }
        // slack absorbs spans that are a whole number of steps up to rounding
        let count = |lo: f64, hi: f64| ((hi - lo) / self.step + 1e-9).floor() as usize + 1;
        Some((count(self.min_x, self.max_x), count(self.min_y, self.max_y)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FermatMethod {
    GridMinima,
    Weiszfeld,
    Torricelli,
}

impl FermatMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FermatMethod::GridMinima => "grid_minima",
            FermatMethod::Weiszfeld => "weiszfeld",
            FermatMethod::Torricelli => "torricelli",
        }
    }
}

impl fmt::Display for FermatMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A located Fermat point and the total path distance through it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FermatResult {
    pub point: Point2D,
    pub total_distance: f64,
    pub method: FermatMethod,
}

impl FermatResult {
    fn at(anchors: &AnchorSet, point: Point2D, method: FermatMethod) -> Self {
        Self {
            point,
            total_distance: total_path_distance(anchors, point),
            method,
        }
    }
}

/// Length of the path source → `candidate` → each destination, taken individually.
pub fn total_path_distance(anchors: &AnchorSet, candidate: Point2D) -> f64 {
    anchors.iter().map(|a| a.distance(candidate)).sum()
}

/// Which anchors contribute to [`gradient_terms_scoped`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientScope {
    /// Source and destinations; the gradient of [`total_path_distance`].
    #[default]
    AllAnchors,
    /// Destinations only, leaving the source out of the sum.
    DestinationsOnly,
}

/// Partial derivatives of [`total_path_distance`] at `candidate`.
pub fn gradient_terms(anchors: &AnchorSet, candidate: Point2D) -> Result<(f64, f64)> {
    gradient_terms_scoped(anchors, candidate, GradientScope::AllAnchors)
}

pub fn gradient_terms_scoped(
    anchors: &AnchorSet,
    candidate: Point2D,
    scope: GradientScope,
) -> Result<(f64, f64)> {
    let skip = match scope {
        GradientScope::AllAnchors => 0,
        GradientScope::DestinationsOnly => 1,
    };
    let mut dx = 0.0;
    let mut dy = 0.0;
    for (index, a) in anchors.iter().enumerate().skip(skip) {
        let r = candidate.distance(a);
        if r <= COINCIDENCE_EPSILON {
            return Err(GeometryError::CoincidentAnchor {
                index,
                x: a.x,
                y: a.y,
            });
        }
        dx += (candidate.x - a.x) / r;
        dy += (candidate.y - a.y) / r;
    }
    Ok((dx, dy))
}

/// Grid-scan Fermat locator using the default [`Execution`].
pub fn minima_fermat_point(anchors: &AnchorSet, bounds: &SearchBounds) -> Result<FermatResult> {
    minima_fermat_point_with(anchors, bounds, Execution::default())
}

/// Scans every grid point of `bounds` (x outer, y inner) and returns the one
/// with the smallest total path distance. Ties go to the first point in scan
/// order, independent of `exec`.
pub fn minima_fermat_point_with(
    anchors: &AnchorSet,
    bounds: &SearchBounds,
    exec: Execution,
) -> Result<FermatResult> {
    let (nx, ny) = bounds.axis_counts().ok_or(GeometryError::EmptyGrid)?;
    if let Some(index) = anchors.iter().position(|a| !bounds.contains(a)) {
        return Err(GeometryError::BoundsExcludeAnchor { index });
    }
    let at = |i: usize, j: usize| {
        Point2D::new(
            bounds.min_x + i as f64 * bounds.step,
            bounds.min_y + j as f64 * bounds.step,
        )
    };

    let rows = exec.map_indexed(nx, |i| {
        let mut best = (f64::INFINITY, 0usize);
        for j in 0..ny {
            let d = total_path_distance(anchors, at(i, j));
            if d < best.0 {
                best = (d, j);
            }
        }
        best
    });

    let mut best: Option<(f64, usize, usize)> = None;
    for (i, &(d, j)) in rows.iter().enumerate() {
        if best.is_none_or(|(bd, _, _)| d < bd) {
            best = Some((d, i, j));
        }
    }
    let (total_distance, i, j) = best.ok_or(GeometryError::EmptyGrid)?;
    Ok(FermatResult {
        point: at(i, j),
        total_distance,
        method: FermatMethod::GridMinima,
    })
}

/// Optimality test for an anchor location: it is the geometric median iff
/// the resultant of unit vectors toward every other anchor is no longer than
/// the number of anchors stacked at that location. Returns the resultant
/// when the anchor is not optimal.
fn anchor_descent(anchors: &[Point2D], at: Point2D) -> Option<Point2D> {
    let mut multiplicity = 0.0;
    let mut pull = Point2D::default();
    for &b in anchors {
        let r = b.distance(at);
        if r <= COINCIDENCE_EPSILON {
            multiplicity += 1.0;
        } else {
            pull = pull + (b - at).scale(1.0 / r);
        }
    }
    if pull.norm() <= multiplicity {
        None
    } else {
        Some(pull)
    }
}

/// Weiszfeld iteration from the anchor centroid.
///
/// Anchors satisfying the optimality test are returned before iterating.
/// Stops once successive iterates move less than `tolerance`. An iterate
/// within `tolerance` of an anchor triggers the anchor optimality test: an
/// optimal anchor is returned exactly, otherwise the iterate is pushed
/// 1e-6 m off it along the descent direction.
pub fn weiszfeld_fermat_point(
    anchors: &AnchorSet,
    tolerance: f64,
    max_iterations: usize,
) -> Result<FermatResult> {
    if !(tolerance > 0.0 && tolerance.is_finite()) {
        return Err(GeometryError::InvalidParameter(
            "tolerance must be positive",
        ));
    }
    if max_iterations == 0 {
        return Err(GeometryError::InvalidParameter(
            "max_iterations must be at least 1",
        ));
    }
    let points: Vec<Point2D> = anchors.iter().collect();
    let snap = tolerance.max(COINCIDENCE_EPSILON);
    let done = |p: Point2D| Ok(FermatResult::at(anchors, p, FermatMethod::Weiszfeld));

    let near_anchor = |x: Point2D| {
        points
            .iter()
            .copied()
            .map(|a| (a.distance(x), a))
            .filter(|&(r, _)| r < snap)
            .min_by(|l, r| l.0.total_cmp(&r.0))
            .map(|(_, a)| a)
    };

    // An optimal anchor is a fixed point the iteration only creeps toward,
    // so certify anchors up front.
    for &a in &points {
        if anchor_descent(&points, a).is_none() {
            return done(a);
        }
    }

    let mut x = anchors.centroid();
    let mut just_perturbed = false;
    for _ in 0..max_iterations {
        if !just_perturbed {
            if let Some(a) = near_anchor(x) {
                match anchor_descent(&points, a) {
                    None => return done(a),
                    Some(pull) => {
                        x = a + pull.scale(WEISZFELD_PERTURBATION / pull.norm());
                        just_perturbed = true;
                        continue;
                    }
                }
            }
        }
        just_perturbed = false;

        let mut num = Point2D::default();
        let mut den = 0.0;
        for &a in &points {
            let w = 1.0 / a.distance(x).max(COINCIDENCE_EPSILON);
            num = num + a.scale(w);
            den += w;
        }
        // Overrelaxed step, kept only while it beats the plain one.
        let plain = num.scale(1.0 / den);
        let relaxed = x + (plain - x).scale(WEISZFELD_RELAXATION);
        let next = if total_path_distance(anchors, relaxed) < total_path_distance(anchors, plain) {
            relaxed
        } else {
            plain
        };
        let moved = next.distance(x);
        x = next;
        if moved < tolerance {
            if let Some(a) = near_anchor(x) {
                if anchor_descent(&points, a).is_none() {
                    return done(a);
                }
            }
            return done(x);
        }
    }
    Err(GeometryError::NoConvergence {
        iterations: max_iterations,
    })
}

/// Fermat point of the triangle `a`, `b`, `c` by the Torricelli construction.
///
/// A vertex whose interior angle is at least 120° is returned as-is.
/// Otherwise equilateral triangles are erected outward on two sides and the
/// lines from each opposite vertex to the new apex are intersected.
/// Collinear (or coincident) vertices yield [`GeometryError::DegenerateTriangle`]
/// carrying the middle vertex as a fallback result.
pub fn torricelli_triangle(a: Point2D, b: Point2D, c: Point2D) -> Result<FermatResult> {
    let anchors = AnchorSet::new(a, vec![b, c])?;
    let result = |p: Point2D| FermatResult::at(&anchors, p, FermatMethod::Torricelli);

    let ab = b - a;
    let ac = c - a;
    let scale = ab.norm() * ac.norm();
    if scale == 0.0 || ab.cross(ac).abs() <= 1e-12 * scale {
        let middle = middle_of_collinear(a, b, c);
        return Err(GeometryError::DegenerateTriangle {
            fallback: result(middle),
        });
    }

    for (v, p, q) in [(a, b, c), (b, c, a), (c, a, b)] {
        let (u, w) = (p - v, q - v);
        if u.dot(w) / (u.norm() * w.norm()) <= -0.5 {
            return Ok(result(v));
        }
    }

    let apex_a = outward_apex(b, c, a);
    let apex_b = outward_apex(c, a, b);
    let da = apex_a - a;
    let db = apex_b - b;
    let denom = da.cross(db);
    let t = (b - a).cross(db) / denom;
    Ok(result(a + da.scale(t)))
}

/// Apex of the equilateral triangle on side `p`-`q`, on the far side from `opposite`.
fn outward_apex(p: Point2D, q: Point2D, opposite: Point2D) -> Point2D {
    let side = q - p;
    let mid = (p + q).scale(0.5);
    let normal = Point2D::new(-side.y, side.x).scale(3f64.sqrt() / 2.0);
    let candidate = mid + normal;
    if side.cross(candidate - p).signum() == side.cross(opposite - p).signum() {
        mid - normal
    } else {
        candidate
    }
}

/// The vertex not belonging to the farthest-apart pair.
fn middle_of_collinear(a: Point2D, b: Point2D, c: Point2D) -> Point2D {
    let pairs = [(a.distance(b), c), (b.distance(c), a), (a.distance(c), b)];
    pairs
        .iter()
        .fold(pairs[0], |best, &p| if p.0 > best.0 { p } else { best })
        .1
}
