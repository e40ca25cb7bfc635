use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::geometry::{Circle, CircleConfiguration, Point};
use crate::trees::{enumerate_trees, RootedTree};

/// Radius of the disk standing in for the unbounded root region.
const ROOT_RADIUS: f64 = 10.0;
/// Minimum center separation, relative to the parent radius.
const MIN_SEPARATION: f64 = 0.05;

/// Circles realizing `t`: circle `v - 1` has parent circle `parent(v) - 1`.
pub fn realize_tree<R: Rng + ?Sized>(t: &RootedTree, rng: &mut R) -> CircleConfiguration {
    let mut circles = vec![Circle { x: 0.0, y: 0.0, r: 0.0 }; t.len()];
    let mut stack = vec![(0usize, Point::new(0.0, 0.0), ROOT_RADIUS)];
    while let Some((v, c, r)) = stack.pop() {
        let kids = t.children(v);
        let centers = scatter(kids.len(), c, r, rng);
        for (i, (&k, &p)) in kids.iter().zip(&centers).enumerate() {
            let gap = centers
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &q)| p.dist(q))
                .fold(r - p.dist(c), f64::min);
            let rho = gap / 3.0;
            circles[k - 1] = Circle { x: p.x, y: p.y, r: rho };
            stack.push((k, p, rho));
        }
    }
    CircleConfiguration::new(circles)
}

/// `k` points in the disk of radius `0.7 r`, pairwise at least
/// `MIN_SEPARATION * r` apart.
fn scatter<R: Rng + ?Sized>(k: usize, c: Point, r: f64, rng: &mut R) -> Vec<Point> {
    loop {
        let pts: Vec<Point> = (0..k)
            .map(|_| {
                let rad = 0.7 * r * rng.gen::<f64>().sqrt();
                let ang = rng.gen::<f64>() * std::f64::consts::TAU;
                Point::new(c.x + rad * ang.cos(), c.y + rad * ang.sin())
            })
            .collect();
        let spread = pts
            .iter()
            .enumerate()
            .all(|(i, p)| pts[..i].iter().all(|q| p.dist(*q) >= MIN_SEPARATION * r));
        if spread {
            return pts;
        }
    }
}

/// A configuration of `n` circles whose nesting tree is drawn uniformly
/// from the isomorphism classes of trees on `n` non-root vertices, with the
/// circles listed in random order.
pub fn random_configuration<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<CircleConfiguration> {
    let codes = enumerate_trees(n)?;
    let tree = codes
        .choose(rng)
        .expect("at least one tree")
        .to_tree()?;
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let placed = realize_tree(&tree, rng);
    let mut circles = placed.circles.clone();
    for (i, &p) in perm.iter().enumerate() {
        circles[p] = placed.circles[i];
    }
    Ok(CircleConfiguration::new(circles))
}
