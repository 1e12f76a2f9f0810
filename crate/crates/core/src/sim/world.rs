//! Segment-obstacle world and ray queries.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 2];

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1]]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        let d = sub(self.b, self.a);
        d[0].hypot(d[1])
    }

    /// Euclidean distance from `p` to the closest point of the segment.
    pub fn distance_to(&self, p: Point) -> f64 {
        let e = sub(self.b, self.a);
        let len2 = dot(e, e);
        let t = if len2 > 0.0 { (dot(sub(p, self.a), e) / len2).clamp(0.0, 1.0) } else { 0.0 };
        let q = [self.a[0] + t * e[0], self.a[1] + t * e[1]];
        (p[0] - q[0]).hypot(p[1] - q[1])
    }

    /// Distance along the half-line `origin + t·dir` (unit `dir`, `t >= 0`) to
    /// the segment, if it is hit.
    pub fn ray_hit(&self, origin: Point, dir: Point) -> Option<f64> {
        let e = sub(self.b, self.a);
        let ao = sub(self.a, origin);
        let denom = cross(dir, e);
        if denom.abs() <= 1e-12 * self.length().max(1.0) {
            // parallel; only a collinear segment can be hit
            if cross(ao, dir).abs() > 1e-12 {
                return None;
            }
            let ta = dot(ao, dir);
            let tb = dot(sub(self.b, origin), dir);
            let (lo, hi) = if ta <= tb { (ta, tb) } else { (tb, ta) };
            return if hi < 0.0 { None } else { Some(lo.max(0.0)) };
        }
        let t = cross(ao, e) / denom;
        let s = cross(ao, dir) / denom;
        (t >= 0.0 && (0.0..=1.0).contains(&s)).then_some(t)
    }
}

/// On-disk world description.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WorldFile {
    pub description: String,
    /// `[[x_min, y_min], [x_max, y_max]]`; used for plotting.
    pub bounds: Option<[Point; 2]>,
    /// Closed polygons, listed as vertex chains.
    pub polygons: Vec<Vec<Point>>,
    /// Open polylines (walls).
    pub walls: Vec<Vec<Point>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct World {
    pub description: String,
    segments: Vec<Segment>,
    bounds: [Point; 2],
}

impl World {
    pub fn empty() -> Self {
        World { description: String::new(), segments: Vec::new(), bounds: [[-1.0, -1.0], [1.0, 1.0]] }
    }

    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        for s in &segments {
            if !s.a.iter().chain(&s.b).all(|v| v.is_finite()) || s.length() <= 0.0 {
                return Err(Error::config(format!("degenerate obstacle segment {s:?}")));
            }
        }
        let bounds = bounding_box(&segments);
        Ok(World { description: String::new(), segments, bounds })
    }

    pub fn from_file(file: &WorldFile) -> Result<Self> {
        let mut segments = Vec::new();
        for poly in &file.polygons {
            if poly.len() < 3 {
                return Err(Error::config("polygon needs at least 3 vertices"));
            }
            for i in 0..poly.len() {
                segments.push(Segment::new(poly[i], poly[(i + 1) % poly.len()]));
            }
        }
        for wall in &file.walls {
            if wall.len() < 2 {
                return Err(Error::config("wall needs at least 2 vertices"));
            }
            segments.extend(wall.windows(2).map(|w| Segment::new(w[0], w[1])));
        }
        let mut world = World::from_segments(segments)?;
        world.description = file.description.clone();
        if let Some(bounds) = file.bounds {
            world.bounds = bounds;
        }
        Ok(world)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: WorldFile =
            serde_json::from_str(text).map_err(|e| Error::config(format!("world file: {e}")))?;
        World::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.into(), source })?;
        let file: WorldFile =
            serde_json::from_str(&text).map_err(|source| Error::Parse { path: path.into(), source })?;
        World::from_file(&file)
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn bounds(&self) -> [Point; 2] {
        self.bounds
    }

    /// Distance from `p` to the nearest obstacle, or infinity in an empty world.
    pub fn clearance(&self, p: Point) -> f64 {
        self.segments
            .iter()
            .map(|s| s.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Whether a disc of `radius` centered at `p` touches an obstacle.
    pub fn collides(&self, p: Point, radius: f64) -> bool {
        self.clearance(p) < radius
    }
}

fn bounding_box(segments: &[Segment]) -> [Point; 2] {
    if segments.is_empty() {
        return [[-1.0, -1.0], [1.0, 1.0]];
    }
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for p in segments.iter().flat_map(|s| [s.a, s.b]) {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    [lo, hi]
}

/// Distance to the nearest obstacle along a ray, capped at `max_range`.
pub fn raycast(world: &World, origin: Point, direction: f64, max_range: f64) -> f64 {
    let dir = [direction.cos(), direction.sin()];
    world
        .segments
        .iter()
        .filter_map(|s| s.ray_hit(origin, dir))
        .fold(max_range, f64::min)
}
