//! Delaunay edges for the small point sets of one team (at most a few
//! dozen players).
//!
//! Points are inserted in lexicographic order with a hull sweep, which gives
//! an arbitrary triangulation, and then Lawson edge flips make it Delaunay.
//! Cocircular quads are resolved toward the lexicographically smallest
//! diagonal, and exact duplicates are nudged by 1 mm, so the result is
//! deterministic.

use std::collections::{BTreeSet, HashMap};

use super::vec2::{orient, Vec2};

/// Duplicate points are moved by this much, m.
pub const DUPLICATE_JITTER: f64 = 1e-3;

pub type Edge = (usize, usize);

/// Delaunay edge set as index pairs `(i, j)` with `i < j`.
///
/// Fewer than three points, or all points on one line, give the chain of
/// consecutive points along the line.
pub fn delaunay_neighbors(points: &[Vec2]) -> BTreeSet<Edge> {
    let n = points.len();
    let mut edges = BTreeSet::new();
    if n < 2 {
        return edges;
    }
    let pts = dedup_jitter(points);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        pts[a]
            .x
            .total_cmp(&pts[b].x)
            .then(pts[a].y.total_cmp(&pts[b].y))
            .then(a.cmp(&b))
    });
    let tol = Tolerance::new(&pts);

    let first_off_line = (2..n).find(|&k| {
        orient(pts[order[0]], pts[order[1]], pts[order[k]]).abs() > tol.orient
    });
    let Some(k) = first_off_line else {
        for w in order.windows(2) {
            edges.insert(ordered(w[0], w[1]));
        }
        return edges;
    };

    let mut tris = sweep(&pts, &order, k, &tol);
    legalize(&pts, &mut tris, &tol);
    for t in &tris {
        for e in 0..3 {
            edges.insert(ordered(t[e], t[(e + 1) % 3]));
        }
    }
    edges
}

struct Tolerance {
    orient: f64,
    incircle: f64,
}

impl Tolerance {
    fn new(pts: &[Vec2]) -> Self {
        let (mut lo, mut hi) = (pts[0], pts[0]);
        for p in pts {
            lo = Vec2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Vec2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        let extent = (hi.x - lo.x).max(hi.y - lo.y).max(1e-9);
        Tolerance {
            orient: 1e-12 * extent * extent,
            incircle: 1e-10 * extent.powi(4),
        }
    }
}

fn ordered(a: usize, b: usize) -> Edge {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn dedup_jitter(points: &[Vec2]) -> Vec<Vec2> {
    let mut out: Vec<Vec2> = Vec::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        let mut q = p;
        let mut bump = 0;
        while out.iter().any(|o| *o == q) {
            bump += 1;
            let angle = (i * 7 + bump) as f64;
            q = p + Vec2::new(angle.cos(), angle.sin()) * (DUPLICATE_JITTER * bump as f64);
        }
        out.push(q);
    }
    out
}

/// Positive when `d` lies inside the circumcircle of the CCW triangle abc.
pub fn incircle(a: Vec2, b: Vec2, c: Vec2, d: Vec2) -> f64 {
    let (ad, bd, cd) = (a - d, b - d, c - d);
    let (al, bl, cl) = (ad.dot(ad), bd.dot(bd), cd.dot(cd));
    al * bd.cross(cd) + bl * cd.cross(ad) + cl * ad.cross(bd)
}

/// Sweep triangulation: seed with the fan over the initial collinear run,
/// then attach each new point to every hull edge it can see.
fn sweep(pts: &[Vec2], order: &[usize], k: usize, tol: &Tolerance) -> Vec<[usize; 3]> {
    let apex = order[k];
    let mut tris = Vec::new();
    let left = orient(pts[order[0]], pts[order[1]], pts[apex]) > 0.0;
    for i in 0..k - 1 {
        let (a, b) = (order[i], order[i + 1]);
        tris.push(if left { [a, b, apex] } else { [b, a, apex] });
    }
    // Hull in CCW order.
    let mut hull: Vec<usize> = if left {
        order[..=k].to_vec()
    } else {
        let mut h = vec![order[0], apex];
        h.extend(order[1..k].iter().rev());
        h
    };
    // Points between order[1] and order[k] that were skipped as collinear
    // are all in the initial chain, so the remaining points start at k+1.
    for &q in &order[k + 1..] {
        let m = hull.len();
        let visible_with = |strict: f64| -> Vec<bool> {
            (0..m)
                .map(|i| orient(pts[hull[i]], pts[hull[(i + 1) % m]], pts[q]) < -strict)
                .collect()
        };
        let mut vis = visible_with(tol.orient);
        if !vis.iter().any(|&v| v) {
            vis = visible_with(0.0);
        }
        if !vis.iter().any(|&v| v) {
            continue;
        }
        let start = (0..m)
            .find(|&i| vis[i] && !vis[(i + m - 1) % m])
            .unwrap_or(0);
        let mut count = 0;
        while count < m && vis[(start + count) % m] {
            let a = hull[(start + count) % m];
            let b = hull[(start + count + 1) % m];
            tris.push([a, q, b]);
            count += 1;
        }
        let mut rotated: Vec<usize> = hull[start..].iter().chain(&hull[..start]).copied().collect();
        let tail = rotated.split_off(count.min(rotated.len()));
        hull = vec![rotated[0], q];
        hull.extend(tail);
    }
    tris
}

/// Rotates a triangle so that `a -> b` is one of its CCW edges.
fn opposite(t: &[usize; 3], a: usize, b: usize) -> Option<usize> {
    (0..3).find_map(|i| (t[i] == a && t[(i + 1) % 3] == b).then(|| t[(i + 2) % 3]))
}

/// Lawson flips until every edge is locally Delaunay, then flips cocircular
/// quads toward the smaller diagonal.
fn legalize(pts: &[Vec2], tris: &mut [[usize; 3]], tol: &Tolerance) {
    let n = pts.len();
    let max_rounds = 4 * n * n + 16;
    for pass in 0..2 {
        for _ in 0..max_rounds {
            let mut by_edge: HashMap<Edge, Vec<usize>> = HashMap::new();
            for (ti, t) in tris.iter().enumerate() {
                for e in 0..3 {
                    by_edge.entry(ordered(t[e], t[(e + 1) % 3])).or_default().push(ti);
                }
            }
            let mut keys: Vec<&Edge> = by_edge.keys().collect();
            keys.sort();
            let mut flipped = false;
            for key in keys {
                let ts = &by_edge[key];
                if ts.len() != 2 {
                    continue;
                }
                let (t1, t2) = (ts[0], ts[1]);
                let (mut a, mut b) = *key;
                let c = match opposite(&tris[t1], a, b) {
                    Some(c) => c,
                    None => {
                        std::mem::swap(&mut a, &mut b);
                        match opposite(&tris[t1], a, b) {
                            Some(c) => c,
                            None => continue,
                        }
                    }
                };
                let Some(d) = opposite(&tris[t2], b, a) else {
                    continue;
                };
                let score = incircle(pts[a], pts[b], pts[c], pts[d]);
                let convex = orient(pts[a], pts[d], pts[c]) > 0.0 && orient(pts[d], pts[b], pts[c]) > 0.0;
                let flip = if pass == 0 {
                    score > tol.incircle && convex
                } else {
                    score.abs() <= tol.incircle && convex && ordered(c, d) < ordered(a, b)
                };
                if flip {
                    tris[t1] = [a, d, c];
                    tris[t2] = [d, b, c];
                    flipped = true;
                    break;
                }
            }
            if !flipped {
                break;
            }
        }
    }
}
