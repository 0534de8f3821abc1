//! Naive oracles written without the library's linear algebra.

#![allow(dead_code)]

use std::collections::BTreeSet;

use flatspan::{BiArrangement, Point, Rational};
use num_traits::Zero;

/// Rank of a list of vectors by plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = &rows[i][c] / &rows[r][c];
                let pivot = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot) {
                    *x -= &factor * y;
                }
            }
        }
        r += 1;
    }
    r
}

fn diffs(points: &[&Point]) -> Vec<Vec<Rational>> {
    let base = points[0].coords();
    points[1..]
        .iter()
        .map(|p| p.coords().iter().zip(base).map(|(a, b)| a - b).collect())
        .collect()
}

pub fn affine_rank(points: &[&Point]) -> usize {
    if points.len() < 2 {
        return 0;
    }
    rank(diffs(points))
}

fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(n, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, size, 0, &mut Vec::new(), &mut out);
    out
}

/// Member sets of the spanned f-flats: every (f+1)-subset of distinct points
/// of full affine rank, closed under "adding this point keeps the rank".
pub fn spanned_member_sets(points: &[Point], f: usize) -> BTreeSet<Vec<usize>> {
    let mut distinct: Vec<usize> = Vec::new();
    for i in 0..points.len() {
        if !distinct.iter().any(|&j| points[j] == points[i]) {
            distinct.push(i);
        }
    }
    let mut out = BTreeSet::new();
    for s in subsets(distinct.len(), f + 1) {
        let chosen: Vec<&Point> = s.iter().map(|&i| &points[distinct[i]]).collect();
        if affine_rank(&chosen) != f {
            continue;
        }
        let members: Vec<usize> = distinct
            .iter()
            .copied()
            .filter(|&q| {
                let mut with = chosen.clone();
                with.push(&points[q]);
                affine_rank(&with) == f
            })
            .collect();
        out.insert(members);
    }
    out
}

/// Does `p` satisfy `a·x = b` for the row `[a | b]`?
pub fn on_row(row: &[Rational], p: &Point) -> bool {
    let d = p.dim();
    let lhs: Rational = row[..d].iter().zip(p.coords()).map(|(a, x)| a * x).sum();
    lhs == row[d]
}

/// (red incidences, total incidences) by the double loop.
pub fn naive_incidences(a: &BiArrangement) -> (u64, u64) {
    let mut red = 0;
    let mut total = 0;
    for v in a.vertices() {
        for h in a.red() {
            if on_row(&h.constraints()[0], v) {
                red += 1;
                total += 1;
            }
        }
        for h in a.blue() {
            if on_row(&h.constraints()[0], v) {
                total += 1;
            }
        }
    }
    (red, total)
}
