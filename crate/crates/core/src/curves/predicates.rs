use crate::geometry::{Circle, Point};

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection, touching included.
pub(crate) fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
        return true;
    }
    (d1 == 0.0 && on_segment(q1, q2, p1))
        || (d2 == 0.0 && on_segment(q1, q2, p2))
        || (d3 == 0.0 && on_segment(p1, p2, q1))
        || (d4 == 0.0 && on_segment(p1, p2, q2))
}

pub(crate) fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

struct Seg {
    a: Point,
    b: Point,
    lo: f64,
    hi: f64,
    owner: usize,
    index: usize,
}

fn segments(v: &[Point], owner: usize) -> Vec<Seg> {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % n]);
            Seg {
                a,
                b,
                lo: a.x.min(b.x),
                hi: a.x.max(b.x),
                owner,
                index: i,
            }
        })
        .collect()
}

/// Sweep over x-intervals; calls `hit` for every pair whose x-ranges and
/// y-ranges overlap, stopping at the first `true`.
fn sweep(mut segs: Vec<Seg>, mut hit: impl FnMut(&Seg, &Seg) -> bool) -> bool {
    segs.sort_by(|s, t| s.lo.total_cmp(&t.lo));
    let mut active: Vec<usize> = Vec::new();
    for k in 0..segs.len() {
        let s = &segs[k];
        active.retain(|&j| segs[j].hi >= s.lo);
        for &j in &active {
            let t = &segs[j];
            if s.a.y.max(s.b.y) < t.a.y.min(t.b.y) || t.a.y.max(t.b.y) < s.a.y.min(s.b.y) {
                continue;
            }
            if hit(s, t) {
                return true;
            }
        }
        active.push(k);
    }
    false
}

pub(crate) fn polygon_is_simple(v: &[Point]) -> bool {
    let n = v.len();
    if (0..n).any(|i| v[i] == v[(i + 1) % n]) {
        return false;
    }
    !sweep(segments(v, 0), |s, t| {
        let (i, j) = (s.index.min(t.index), s.index.max(t.index));
        let adjacent = j == i + 1 || (i == 0 && j == n - 1);
        if !adjacent {
            return segments_intersect(s.a, s.b, t.a, t.b);
        }
        // Adjacent edges share one vertex; they may not fold back onto
        // each other.
        let (first, second) = if j == i + 1 { (i, j) } else { (j, i) };
        let (a, shared, c) = (v[first], v[second], v[(second + 1) % n]);
        orient(a, shared, c) == 0.0 && (c - shared).dot(a - shared) > 0.0
    })
}

pub(crate) fn polygons_meet(p: &[Point], q: &[Point]) -> bool {
    let mut segs = segments(p, 0);
    segs.extend(segments(q, 1));
    sweep(segs, |s, t| {
        s.owner != t.owner && segments_intersect(s.a, s.b, t.a, t.b)
    })
}

/// Whether the circle meets the closed polyline, with the same relative
/// tangency margin used for circle pairs.
pub(crate) fn circle_meets_polygon(c: &Circle, v: &[Point]) -> bool {
    let center = c.center();
    let margin = crate::geometry::DEFAULT_EPS * c.r;
    let n = v.len();
    (0..n).any(|i| {
        let (a, b) = (v[i], v[(i + 1) % n]);
        let near = point_segment_distance(center, a, b);
        let far = center.dist(a).max(center.dist(b));
        near <= c.r + margin && far >= c.r - margin
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn segment_cases() {
        assert!(segments_intersect(p(0., 0.), p(2., 2.), p(0., 2.), p(2., 0.)));
        assert!(segments_intersect(p(0., 0.), p(2., 0.), p(1., 0.), p(1., 1.)));
        assert!(!segments_intersect(p(0., 0.), p(1., 0.), p(2., 0.), p(3., 0.)));
        assert!(segments_intersect(p(0., 0.), p(2., 0.), p(1., 0.), p(3., 0.)));
    }

    #[test]
    fn simplicity() {
        let sq = [p(0., 0.), p(1., 0.), p(1., 1.), p(0., 1.)];
        assert!(polygon_is_simple(&sq));
        let bow = [p(0., 0.), p(1., 1.), p(1., 0.), p(0., 1.)];
        assert!(!polygon_is_simple(&bow));
        let spike = [p(0., 0.), p(2., 0.), p(1., 0.), p(1., 1.)];
        assert!(!polygon_is_simple(&spike));
        let dup = [p(0., 0.), p(1., 0.), p(1., 0.), p(0., 1.)];
        assert!(!polygon_is_simple(&dup));
        let collinear = [p(0., 0.), p(1., 0.), p(2., 0.), p(1., 1.)];
        assert!(polygon_is_simple(&collinear));
    }
}
