//! Checked `i128` fast path for subset enumeration.
//!
//! Scaling every point by the common denominator is an affine map, so the
//! spanned flats of the scaled integer points have the same member sets.
//! Every operation is checked; `None` means "fall back to exact rationals".

use std::collections::HashSet;

use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::kernel::Point;

const COORD_LIMIT: i128 = 1 << 24;

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Integer coordinates for `points`, or `None` if they would be too large.
pub(crate) fn scaled(points: &[&Point]) -> Option<Vec<Vec<i128>>> {
    let mut lcm: i128 = 1;
    for p in points {
        for x in p.coords() {
            let den = x.denom().to_i128()?;
            lcm = lcm.checked_mul(den / gcd(lcm, den))?;
            if lcm > COORD_LIMIT {
                return None;
            }
        }
    }
    points
        .iter()
        .map(|p| {
            p.coords()
                .iter()
                .map(|x| {
                    let v = (x.numer().to_i128()?).checked_mul(lcm / x.denom().to_i128()?)?;
                    (v.abs() <= COORD_LIMIT).then_some(v)
                })
                .collect()
        })
        .collect()
}

#[derive(Clone, Default)]
struct IntSpan {
    rows: Vec<(usize, Vec<i128>)>,
}

impl IntSpan {
    fn reduce(&self, v: &mut [i128]) -> Option<()> {
        for (pc, row) in &self.rows {
            let b = v[*pc];
            if b == 0 {
                continue;
            }
            let a = row[*pc];
            let mut g = 0;
            for (x, r) in v.iter_mut().zip(row) {
                *x = a.checked_mul(*x)?.checked_sub(b.checked_mul(*r)?)?;
                g = gcd(g, *x);
            }
            if g > 1 {
                v.iter_mut().for_each(|x| *x /= g);
            }
        }
        Some(())
    }

    /// `Some(None)` when `v` is already in the span.
    fn with(&self, mut v: Vec<i128>) -> Option<Option<Self>> {
        self.reduce(&mut v)?;
        let Some(pc) = v.iter().position(|&x| x != 0) else {
            return Some(None);
        };
        if v[pc] < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        let mut next = self.clone();
        next.rows.push((pc, v));
        Some(Some(next))
    }

    fn contains(&self, mut v: Vec<i128>) -> Option<bool> {
        self.reduce(&mut v)?;
        Some(v.iter().all(|&x| x == 0))
    }
}

fn offset(p: &[i128], base: &[i128]) -> Option<Vec<i128>> {
    p.iter().zip(base).map(|(a, b)| a.checked_sub(*b)).collect()
}

fn grow(
    pts: &[Vec<i128>],
    size: usize,
    span: &IntSpan,
    chosen: &mut Vec<usize>,
    out: &mut HashSet<Vec<usize>>,
) -> Option<()> {
    let base = &pts[chosen[0]];
    if chosen.len() == size {
        let mut members = Vec::new();
        for (j, p) in pts.iter().enumerate() {
            if span.contains(offset(p, base)?)? {
                members.push(j);
            }
        }
        out.insert(members);
        return Some(());
    }
    let last = *chosen.last().expect("seeded with a first index");
    let needed = size - chosen.len();
    for j in (last + 1)..=(pts.len() - needed) {
        if let Some(next) = span.with(offset(&pts[j], base)?)? {
            chosen.push(j);
            grow(pts, size, &next, chosen, out)?;
            chosen.pop();
        }
    }
    Some(())
}

/// Member index sets of the flats spanned by affinely independent
/// `size`-subsets of `pts`.
pub(crate) fn member_sets(pts: &[Vec<i128>], size: usize) -> Option<HashSet<Vec<usize>>> {
    if size == 0 || pts.len() < size {
        return Some(HashSet::new());
    }
    (0..=pts.len() - size)
        .into_par_iter()
        .map(|first| {
            let mut out = HashSet::new();
            grow(pts, size, &IntSpan::default(), &mut vec![first], &mut out)?;
            Some(out)
        })
        .try_reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return Some(b.into_iter().chain(a).collect());
            }
            a.extend(b);
            Some(a)
        })
}
