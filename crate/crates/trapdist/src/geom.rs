//! The unit trapezoid, its reflected neighbors, and uniform point sampling.

use rand::{Rng, RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{CaseId, SQRT_3};

/// A point in the plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        debug_assert!(x.is_finite() && y.is_finite());
        Point2 { x, y }
    }

    /// Euclidean distance to `other`.
    pub fn distance_to(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// An isosceles trapezoid with long base 2, short base 1, and legs 1.
///
/// Vertices are stored counter-clockwise starting at the left end of the
/// long base, so splitting the long base at its midpoint always cuts the
/// trapezoid into three triangles of equal area.
#[derive(Clone, Debug, PartialEq)]
pub struct Trapezoid {
    verts: [Point2; 4],
}

impl Trapezoid {
    /// The canonical placement: long base from (0, 0) to (2, 0), short base
    /// at height sqrt(3)/2.
    pub fn canonical() -> Self {
        Trapezoid {
            verts: [
                Point2::new(0.0, 0.0),
                Point2::new(2.0, 0.0),
                Point2::new(1.5, SQRT_3 / 2.0),
                Point2::new(0.5, SQRT_3 / 2.0),
            ],
        }
    }

    pub fn vertices(&self) -> &[Point2; 4] {
        &self.verts
    }

    /// Signed area by the shoelace formula; positive for the stored
    /// counter-clockwise orientation.
    pub fn area(&self) -> f64 {
        let v = &self.verts;
        let mut twice = 0.0;
        for i in 0..4 {
            let j = (i + 1) % 4;
            twice += v[i].x * v[j].y - v[j].x * v[i].y;
        }
        0.5 * twice
    }

    /// Whether `p` lies inside or on the boundary, with a small tolerance so
    /// that points produced by [`Trapezoid::sample_point`] never test
    /// outside due to rounding.
    pub fn contains(&self, p: Point2) -> bool {
        let v = &self.verts;
        for i in 0..4 {
            let j = (i + 1) % 4;
            let cross = (v[j].x - v[i].x) * (p.y - v[i].y) - (v[j].y - v[i].y) * (p.x - v[i].x);
            if cross < -1e-12 {
                return false;
            }
        }
        true
    }

    /// Draws a point uniformly from the trapezoid.
    ///
    /// The trapezoid is split at the midpoint of the long base into three
    /// equal-area triangles; one is chosen uniformly and a point is drawn in
    /// it by folding two uniforms into barycentric coordinates.
    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Point2 {
        let [a, b, c] = self.triangles()[rng.random_range(0..3)];
        let (mut u, mut v) = (rng.random::<f64>(), rng.random::<f64>());
        if u + v > 1.0 {
            u = 1.0 - u;
            v = 1.0 - v;
        }
        Point2::new(
            a.x + u * (b.x - a.x) + v * (c.x - a.x),
            a.y + u * (b.y - a.y) + v * (c.y - a.y),
        )
    }

    /// The three equal-area triangles obtained by joining the midpoint of
    /// the long base to the short-base vertices.
    fn triangles(&self) -> [[Point2; 3]; 3] {
        let [a, b, c, d] = self.verts;
        let m = Point2::new(0.5 * (a.x + b.x), 0.5 * (a.y + b.y));
        [[a, m, d], [m, c, d], [m, b, c]]
    }

    /// Reflects every vertex across the line through `p` and `q`, then
    /// restores counter-clockwise order (reflection flips orientation).
    fn reflected_across(&self, p: Point2, q: Point2) -> Self {
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        let len2 = dx * dx + dy * dy;
        debug_assert!(len2 > 0.0);
        let verts = self.verts.map(|v| {
            let t = ((v.x - p.x) * dx + (v.y - p.y) * dy) / len2;
            let (fx, fy) = (p.x + t * dx, p.y + t * dy);
            Point2::new(2.0 * fx - v.x, 2.0 * fy - v.y)
        });
        // Reading the reflected cycle backwards restores ccw; starting it
        // at the image of v1 keeps the long base on edge 0-1.
        Trapezoid {
            verts: [verts[1], verts[0], verts[3], verts[2]],
        }
    }
}

/// A source/target polygon pair for one endpoint placement.
///
/// The first endpoint of a random pair is drawn from `source`, the second
/// from `target`. For [`CaseId::Ab`] the two coincide; for the other cases
/// the target is the source reflected across one of its sides.
#[derive(Clone, Debug)]
pub struct Arrangement {
    case: CaseId,
    source: Trapezoid,
    target: Trapezoid,
}

/// Builds the polygon pair for `case`, with the source in canonical
/// placement.
pub fn make_arrangement(case: CaseId) -> Arrangement {
    let source = Trapezoid::canonical();
    let [a, b, c, d] = *source.vertices();
    let target = match case {
        CaseId::Ab => source.clone(),
        CaseId::Cd => source.reflected_across(a, b),
        CaseId::Ef => source.reflected_across(a, d),
        CaseId::Gh => source.reflected_across(d, c),
    };
    Arrangement {
        case,
        source,
        target,
    }
}

impl Arrangement {
    pub fn case(&self) -> CaseId {
        self.case
    }

    pub fn source(&self) -> &Trapezoid {
        &self.source
    }

    pub fn target(&self) -> &Trapezoid {
        &self.target
    }

    /// Largest distance between any point of the source and any point of
    /// the target. Both polygons are convex, so the maximum is attained at
    /// a vertex pair.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for &s in self.source.vertices() {
            for &t in self.target.vertices() {
                best = best.max(s.distance_to(t));
            }
        }
        best
    }

    /// Draws one endpoint pair: first from the source, second from the
    /// target.
    pub fn sample_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (Point2, Point2) {
        (self.source.sample_point(rng), self.target.sample_point(rng))
    }

    /// Draws one endpoint pair and returns the distance between them.
    pub fn sample_distance<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let (p, q) = self.sample_pair(rng);
        p.distance_to(q)
    }
}

/// The deterministic generator used by every simulation entry point.
///
/// ChaCha8 seeded via `seed_from_u64`; a given seed reproduces the same
/// stream on every platform and release.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
