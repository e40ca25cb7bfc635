//! Independent oracles and random generators shared by the integration
//! tests. Nothing here calls the library code it is used to check.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use jck_core::curves::{Curve, JordanConfiguration};
use jck_core::geometry::{Circle, CircleConfiguration, Point, Similarity};
use rand::Rng;

// ---------------------------------------------------------------- trees

/// Whether `parents` (1-based vertices, 0 = root) is acyclic.
pub fn is_forest(parents: &[usize]) -> bool {
    let n = parents.len();
    (1..=n).all(|v| {
        let mut a = v;
        for _ in 0..=n {
            if a == 0 {
                return true;
            }
            a = parents[a - 1];
        }
        false
    })
}

/// Every parent array on `n` vertices whose parent pointers reach the root.
pub fn all_parent_arrays(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p = vec![0usize; n];
    loop {
        if (0..n).all(|i| p[i] != i + 1) && is_forest(&p) {
            out.push(p.clone());
        }
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            p[i] += 1;
            if p[i] <= n {
                break;
            }
            p[i] = 0;
            i += 1;
        }
    }
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Parent array after moving vertex `v` to `perm[v-1] + 1`.
pub fn relabel(parents: &[usize], perm: &[usize]) -> Vec<usize> {
    let mut q = vec![0; parents.len()];
    for (i, &p) in parents.iter().enumerate() {
        q[perm[i]] = if p == 0 { 0 } else { perm[p - 1] + 1 };
    }
    q
}

/// Number of isomorphism classes of rooted forests on `n` vertices, by
/// taking the lexicographically least relabeling of every parent array.
pub fn brute_force_tree_count(n: usize) -> usize {
    let perms = permutations(n);
    let classes: BTreeSet<Vec<usize>> = all_parent_arrays(n)
        .into_iter()
        .map(|p| perms.iter().map(|s| relabel(&p, s)).min().expect("n! >= 1"))
        .collect();
    classes.len()
}

/// Number of vertex permutations fixing the root that preserve parents.
pub fn brute_force_aut_count(parents: &[usize]) -> usize {
    permutations(parents.len())
        .iter()
        .filter(|s| relabel(parents, s) == parents)
        .count()
}

// -------------------------------------------------------------- circles

/// Strict containment of `b` in `a`.
pub fn circle_contains(a: &Circle, b: &Circle) -> bool {
    let d = ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt();
    a.r > b.r && d + b.r < a.r
}

/// Parent map of the containment order's transitive reduction, O(n³).
pub fn nesting_oracle(circles: &[Circle]) -> Vec<usize> {
    let n = circles.len();
    let inside: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && circle_contains(&circles[i], &circles[j])).collect())
        .collect();
    (0..n)
        .map(|j| {
            (0..n)
                .find(|&i| inside[i][j] && !(0..n).any(|k| inside[i][k] && inside[k][j]))
                .map_or(0, |i| i + 1)
        })
        .collect()
}

/// Circles added one at a time with rejection, kept well away from
/// tangency so both sides agree on which pairs nest.
pub fn random_circles<R: Rng>(n: usize, rng: &mut R) -> CircleConfiguration {
    let mut circles: Vec<Circle> = Vec::new();
    while circles.len() < n {
        let c = Circle {
            x: rng.gen_range(-10.0..10.0),
            y: rng.gen_range(-10.0..10.0),
            r: 10f64.powf(rng.gen_range(-1.0..1.0)),
        };
        let clear = circles.iter().all(|o| {
            let d = ((o.x - c.x).powi(2) + (o.y - c.y).powi(2)).sqrt();
            let margin = 1e-6 * (o.r + c.r);
            d > o.r + c.r + margin || d + o.r.min(c.r) < o.r.max(c.r) - margin
        });
        if clear {
            circles.push(c);
        }
    }
    CircleConfiguration::new(circles)
}

// --------------------------------------------------------------- curves

/// Random parent array on `n` vertices with every depth below `max_depth`.
pub fn random_shallow_tree<R: Rng>(n: usize, max_depth: usize, rng: &mut R) -> Vec<usize> {
    let mut parents = Vec::with_capacity(n);
    let mut depth: Vec<usize> = Vec::with_capacity(n);
    for _ in 0..n {
        let candidates: Vec<usize> = std::iter::once(0)
            .chain((1..=parents.len()).filter(|&v| depth[v - 1] + 1 < max_depth))
            .collect();
        let p = candidates[rng.gen_range(0..candidates.len())];
        depth.push(if p == 0 { 0 } else { depth[p - 1] + 1 });
        parents.push(p);
    }
    parents
}

/// Which outline to draw inside a placement disk.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// Inscribed in a random ellipse; contains the disk of radius `0.3 r`.
    Convex,
    /// Star-shaped about the center with jittered angles; contains the
    /// disk of radius `0.4 r`. Radial jumps between neighbors are bounded
    /// so spikes stay thick enough for a double-precision disk map.
    Star,
}

const SAFE_FRACTION: f64 = 0.3;

/// Random angles in `[0, 2π)` with every gap at most `max_gap`.
fn spread_angles<R: Rng>(k: usize, max_gap: f64, rng: &mut R) -> Vec<f64> {
    loop {
        let mut a: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..TAU)).collect();
        a.sort_by(f64::total_cmp);
        let ok = a.windows(2).all(|w| w[1] - w[0] <= max_gap && w[1] - w[0] > 1e-3)
            && a[0] + TAU - a[k - 1] <= max_gap;
        if ok {
            return a;
        }
    }
}

fn outline<R: Rng>(shape: Shape, c: Point, r: f64, max_vertices: usize, rng: &mut R) -> Curve {
    match shape {
        Shape::Convex => {
            let k = rng.gen_range(4..=max_vertices.min(12));
            let s = rng.gen_range(0.6..1.0);
            let rot = rng.gen_range(0.0..TAU);
            let (sr, cr) = rot.sin_cos();
            let v = spread_angles(k, TAU / 3.0, rng)
                .into_iter()
                .map(|a| {
                    let (x, y) = (r * a.cos(), s * r * a.sin());
                    Point::new(c.x + cr * x - sr * y, c.y + sr * x + cr * y)
                })
                .collect();
            Curve::polygon(v).expect("inscribed polygon")
        }
        Shape::Star => {
            let k = rng.gen_range(7..=max_vertices);
            let step = TAU / k as f64;
            let phase = rng.gen_range(0.0..TAU);
            let mut rad = rng.gen_range(0.5..1.0);
            let v = (0..k)
                .map(|i| {
                    let a = phase + (i as f64 + rng.gen_range(-0.3..0.3)) * step;
                    let jump = step;
                    rad = (rad + rng.gen_range(-jump..jump)).clamp(0.5, 1.0);
                    Point::new(c.x + r * rad * a.cos(), c.y + r * rad * a.sin())
                })
                .collect();
            Curve::polygon(v).expect("star polygon")
        }
    }
}

/// Configuration realizing `parents`: each curve lies in its placement
/// disk, children's disks sit in the parent's safe disk of radius `0.3 r`.
/// With probability `round_prob` a curve is an exact circle.
pub fn realize_curves<R: Rng>(
    parents: &[usize],
    shape: Shape,
    max_vertices: usize,
    round_prob: f64,
    rng: &mut R,
) -> JordanConfiguration {
    let n = parents.len();
    let mut disks = vec![(Point::new(0.0, 0.0), 0.0); n];
    let mut stack = vec![(0usize, Point::new(0.0, 0.0), 20.0)];
    while let Some((v, c, r)) = stack.pop() {
        let kids: Vec<usize> = (1..=n).filter(|&k| parents[k - 1] == v).collect();
        let safe = if v == 0 { r } else { SAFE_FRACTION * r };
        let centers: Vec<Point> = loop {
            let pts: Vec<Point> = kids
                .iter()
                .map(|_| {
                    let rad = 0.6 * safe * rng.gen::<f64>().sqrt();
                    let a = rng.gen_range(0.0..TAU);
                    Point::new(c.x + rad * a.cos(), c.y + rad * a.sin())
                })
                .collect();
            if pts
                .iter()
                .enumerate()
                .all(|(i, p)| pts[..i].iter().all(|q| p.dist(*q) > 0.1 * safe))
            {
                break pts;
            }
        };
        for (i, (&k, &p)) in kids.iter().zip(&centers).enumerate() {
            let room = centers
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| p.dist(*q) / 2.0)
                .fold(safe - p.dist(c), f64::min);
            let rho = room * rng.gen_range(0.5..0.9);
            disks[k - 1] = (p, rho);
            stack.push((k, p, rho));
        }
    }
    let curves = disks
        .iter()
        .map(|&(c, r)| {
            if rng.gen::<f64>() < round_prob {
                Curve::circle(c.x, c.y, r * rng.gen_range(0.5..1.0)).expect("positive radius")
            } else {
                outline(shape, c, r, max_vertices, rng)
            }
        })
        .collect();
    JordanConfiguration::new(curves)
}

pub fn random_similarity<R: Rng>(rng: &mut R) -> Similarity {
    Similarity::new(
        10f64.powf(rng.gen_range(-1.0..1.0)),
        rng.gen_range(0.0..TAU),
        Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)),
    )
}

/// Points of a curve for distance comparisons.
pub fn sample_curve(c: &Curve) -> Vec<Point> {
    match c {
        Curve::Round(_) => c.outline(256),
        Curve::Polygon(p) => {
            let v = p.vertices();
            let mut out = Vec::new();
            for i in 0..v.len() {
                let (a, b) = (v[i], v[(i + 1) % v.len()]);
                for s in 0..8 {
                    out.push(a.lerp(b, s as f64 / 8.0));
                }
            }
            out
        }
    }
}

/// Hausdorff distance between two point sets.
pub fn hausdorff(a: &[Point], b: &[Point]) -> f64 {
    let one_way = |x: &[Point], y: &[Point]| {
        x.iter()
            .map(|p| y.iter().map(|q| p.dist(*q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

// --------------------------------------------------------------- braids

/// Freely reduced word in `x_1..x_m`; `-i` is `x_i^{-1}`.
fn push_reduced(w: &mut Vec<i32>, g: i32) {
    if w.last() == Some(&-g) {
        w.pop();
    } else {
        w.push(g);
    }
}

fn substitute(word: &[i32], images: &[Vec<i32>]) -> Vec<i32> {
    let mut out = Vec::new();
    for &g in word {
        let img = &images[g.unsigned_abs() as usize - 1];
        if g > 0 {
            for &h in img {
                push_reduced(&mut out, h);
            }
        } else {
            for &h in img.iter().rev() {
                push_reduced(&mut out, -h);
            }
        }
    }
    out
}

/// Artin's faithful action on the free group of rank `strands`: a word is
/// trivial iff every generator is fixed.
pub fn artin_action_is_trivial(strands: usize, word: &[i32]) -> bool {
    let mut images: Vec<Vec<i32>> = (1..=strands as i32).map(|i| vec![i]).collect();
    for &g in word {
        let i = g.unsigned_abs() as usize;
        let (xi, xj) = (i as i32, i as i32 + 1);
        let gen: Vec<Vec<i32>> = (1..=strands as i32)
            .map(|k| {
                if g > 0 && k == xi {
                    vec![xi, xj, -xi]
                } else if g > 0 && k == xj {
                    vec![xi]
                } else if g < 0 && k == xi {
                    vec![xj]
                } else if g < 0 && k == xj {
                    vec![-xj, xi, xj]
                } else {
                    vec![k]
                }
            })
            .collect();
        images = images.iter().map(|w| substitute(w, &gen)).collect();
    }
    images
        .iter()
        .enumerate()
        .all(|(k, w)| w.as_slice() == [k as i32 + 1])
}

/// Random word, half the time built from braid relators so it is trivial.
pub fn random_braid_word<R: Rng>(strands: usize, max_len: usize, rng: &mut R) -> Vec<i32> {
    let m = strands as i32 - 1;
    let letter = |rng: &mut R| {
        let g = rng.gen_range(1..=m);
        if rng.gen() {
            g
        } else {
            -g
        }
    };
    if rng.gen() {
        let len = rng.gen_range(0..=max_len);
        return (0..len).map(|_| letter(rng)).collect();
    }
    let mut w: Vec<i32> = Vec::new();
    loop {
        let i = rng.gen_range(1..=m);
        let rel: Vec<i32> = match rng.gen_range(0..3) {
            0 => vec![i, -i],
            1 if i < m => vec![i, i + 1, i, -(i + 1), -i, -(i + 1)],
            2 if i + 2 <= m || i >= 3 => {
                let j = loop {
                    let j = rng.gen_range(1..=m);
                    if (j - i).abs() >= 2 {
                        break j;
                    }
                };
                vec![i, j, -i, -j]
            }
            _ => vec![-i, i],
        };
        let rel: Vec<i32> = if rng.gen() {
            rel.iter().rev().map(|g| -g).collect()
        } else {
            rel
        };
        if w.len() + rel.len() > max_len {
            return w;
        }
        let at = rng.gen_range(0..=w.len());
        w.splice(at..at, rel);
    }
}
