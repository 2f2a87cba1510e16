//! Rectangle primitives for screen-coordinate layout analysis.
//!
//! Coordinates are integer pixels with the origin at the top-left corner.
//! Rectangles that merely share an edge do not intersect: adjacent
//! banner/content layouts must not count as overlap.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Axis-aligned rectangle as (left, top, right, bottom), origin top-left.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub left: i64,
    pub top: i64,
    pub right: i64,
    pub bottom: i64,
}

impl Bounds {
    pub fn new(left: i64, top: i64, right: i64, bottom: i64) -> Self {
        Self {
            left,
            top,
            right,
            bottom,
        }
    }

    /// left <= right, top <= bottom, all coordinates non-negative.
    pub fn is_valid(&self) -> bool {
        self.left >= 0 && self.top >= 0 && self.left <= self.right && self.top <= self.bottom
    }

    pub fn width(&self) -> i64 {
        self.right - self.left
    }

    pub fn height(&self) -> i64 {
        self.bottom - self.top
    }

    pub fn area(&self) -> i64 {
        self.width() * self.height()
    }

    /// Horizontal center as a floating-point pixel coordinate.
    pub fn center_x(&self) -> f64 {
        (self.left + self.right) as f64 / 2.0
    }

    /// Clamp to a (0, 0, width, height) screen rectangle.
    pub fn clamped_to(&self, width: i64, height: i64) -> Bounds {
        Bounds {
            left: self.left.clamp(0, width),
            top: self.top.clamp(0, height),
            right: self.right.clamp(0, width),
            bottom: self.bottom.clamp(0, height),
        }
    }
}

/// True iff the two rectangles share interior area. Touching edges
/// (zero-area contact) do not intersect.
pub fn intersects(a: &Bounds, b: &Bounds) -> bool {
    intersection_area(a, b) > 0
}

/// Area of the shared region in pixels squared; 0 when disjoint.
pub fn intersection_area(a: &Bounds, b: &Bounds) -> i64 {
    let w = a.right.min(b.right) - a.left.max(b.left);
    let h = a.bottom.min(b.bottom) - a.top.max(b.top);
    if w > 0 && h > 0 {
        w * h
    } else {
        0
    }
}

/// Area of the union of a set of rectangles, counting overlapping regions
/// once. Plane sweep over x with interval union over y.
pub fn union_area(rects: &[Bounds]) -> i64 {
    let mut xs: Vec<i64> = Vec::with_capacity(rects.len() * 2);
    for r in rects {
        if r.area() > 0 {
            xs.push(r.left);
            xs.push(r.right);
        }
    }
    xs.sort_unstable();
    xs.dedup();

    let mut total = 0i64;
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let mut spans: Vec<(i64, i64)> = rects
            .iter()
            .filter(|r| r.left <= x0 && r.right >= x1 && r.area() > 0)
            .map(|r| (r.top, r.bottom))
            .collect();
        spans.sort_unstable();
        let mut covered = 0i64;
        let mut cur: Option<(i64, i64)> = None;
        for (top, bottom) in spans {
            match cur {
                Some((_, ref mut end)) if top <= *end => {
                    *end = (*end).max(bottom);
                }
                _ => {
                    if let Some((s, e)) = cur {
                        covered += e - s;
                    }
                    cur = Some((top, bottom));
                }
            }
        }
        if let Some((s, e)) = cur {
            covered += e - s;
        }
        total += covered * (x1 - x0);
    }
    total
}

// Bounds travel as a fixed [left, top, right, bottom] JSON array.
impl Serialize for Bounds {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        [self.left, self.top, self.right, self.bottom].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Bounds {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = <[i64; 4]>::deserialize(deserializer)?;
        let b = Bounds::new(raw[0], raw[1], raw[2], raw[3]);
        if !b.is_valid() {
            return Err(D::Error::custom(format!(
                "bounds [{}, {}, {}, {}] violate left<=right, top<=bottom, >=0",
                raw[0], raw[1], raw[2], raw[3]
            )));
        }
        Ok(b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_bounds_intersect_with_full_area() {
        let a = Bounds::new(0, 0, 100, 100);
        assert!(intersects(&a, &a));
        assert_eq!(intersection_area(&a, &a), 10_000);
    }

    #[test]
    fn shared_edge_does_not_intersect() {
        let a = Bounds::new(0, 0, 100, 100);
        let b = Bounds::new(100, 0, 200, 100);
        assert!(!intersects(&a, &b));
        assert_eq!(intersection_area(&a, &b), 0);
    }

    #[test]
    fn partial_overlap_area() {
        let a = Bounds::new(0, 0, 200, 100);
        let b = Bounds::new(50, 0, 250, 100);
        assert!(intersects(&a, &b));
        assert_eq!(intersection_area(&a, &b), 150 * 100);
    }

    #[test]
    fn zero_area_bounds_never_intersect() {
        let line = Bounds::new(10, 10, 10, 50);
        let big = Bounds::new(0, 0, 100, 100);
        assert!(!intersects(&line, &big));
    }

    #[test]
    fn union_area_counts_overlap_once() {
        let a = Bounds::new(0, 0, 100, 100);
        let b = Bounds::new(50, 0, 150, 100);
        assert_eq!(union_area(&[a, b]), 15_000);
        // Disjoint rectangles sum exactly.
        let c = Bounds::new(200, 200, 300, 300);
        assert_eq!(union_area(&[a, c]), 20_000);
        assert_eq!(union_area(&[]), 0);
    }

    #[test]
    fn union_area_matches_rasterization_on_small_grid() {
        // Independent oracle: per-pixel membership on a 64x64 grid.
        use rand::Rng;
        use rand_chacha::rand_core::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let rects: Vec<Bounds> = (0..4)
                .map(|_| {
                    let l = rng.random_range(0..64);
                    let t = rng.random_range(0..64);
                    let r = rng.random_range(l..=64);
                    let b = rng.random_range(t..=64);
                    Bounds::new(l, t, r, b)
                })
                .collect();
            let mut pixels = 0i64;
            for x in 0..64 {
                for y in 0..64 {
                    if rects
                        .iter()
                        .any(|r| r.left <= x && x < r.right && r.top <= y && y < r.bottom)
                    {
                        pixels += 1;
                    }
                }
            }
            assert_eq!(union_area(&rects), pixels);
        }
    }

    #[test]
    fn bounds_serde_round_trip_and_rejects_inverted() {
        let b = Bounds::new(135, 520, 945, 1330);
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, "[135,520,945,1330]");
        let back: Bounds = serde_json::from_str(&json).unwrap();
        assert_eq!(b, back);
        assert!(serde_json::from_str::<Bounds>("[10,0,5,5]").is_err());
        assert!(serde_json::from_str::<Bounds>("[-1,0,5,5]").is_err());
    }
}
