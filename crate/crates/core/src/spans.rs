//! Enumeration of spanned flats, arrangement vertices and small covers.
//!
//! Everything here is exhaustive: subsets are scanned, hulls are computed
//! exactly and deduplicated through the canonical form of [`Flat`]. Output
//! order never depends on how the scan was split across threads.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intspan::{member_sets, scaled};
use crate::kernel::{
    affine_hull, complement_direction, line_through, DirectionSpan, Flat, Point, Rational,
};

/// Point sets handled by the cover searches are tracked as bitmasks.
pub const MAX_COVER_POINTS: usize = 128;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpannedFlat {
    pub flat: Flat,
    /// Indices (into the caller's point list) of every point on the flat.
    pub point_indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpannedSet {
    pub f: usize,
    pub flats: Vec<SpannedFlat>,
}

impl SpannedSet {
    pub fn count(&self) -> usize {
        self.flats.len()
    }

    pub fn to_export(&self) -> SpannedSetExport {
        SpannedSetExport {
            f: self.f,
            count: self.count(),
            flats: self
                .flats
                .iter()
                .map(|s| SpannedFlatExport {
                    constraints: s.flat.constraint_strings(),
                    point_indices: s.point_indices.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpannedFlatExport {
    pub constraints: Vec<String>,
    pub point_indices: Vec<usize>,
}

/// JSON form: `{f, count, flats: [{constraints, point_indices}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpannedSetExport {
    pub f: usize,
    pub count: usize,
    pub flats: Vec<SpannedFlatExport>,
}

/// A set of flats of nonzero dimension covering some of the input points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverCertificate {
    pub flats: Vec<Flat>,
    pub covered_count: usize,
    pub dims_sum: usize,
}

impl CoverCertificate {
    fn new(flats: Vec<Flat>, points: &[Point]) -> Self {
        let covered_count = points
            .iter()
            .filter(|p| flats.iter().any(|f| f.contains_unchecked(p)))
            .count();
        let dims_sum = flats.iter().map(Flat::dim).sum();
        Self {
            flats,
            covered_count,
            dims_sum,
        }
    }

    pub fn rank_sum(&self) -> usize {
        self.flats.iter().map(Flat::rank).sum()
    }
}

fn ambient_dim(points: &[Point]) -> Result<usize> {
    let d = points.first().ok_or(Error::EmptyHull)?.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: p.dim(),
        });
    }
    Ok(d)
}

/// Indices of the first occurrence of each distinct point, in input order.
pub fn distinct_indices(points: &[Point]) -> Vec<usize> {
    let mut seen = HashSet::new();
    (0..points.len())
        .filter(|&i| seen.insert(&points[i]))
        .collect()
}

fn grow_independent(
    points: &[&Point],
    size: usize,
    span: &DirectionSpan,
    chosen: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]),
) {
    if chosen.len() == size {
        visit(chosen);
        return;
    }
    let last = *chosen.last().expect("seeded with a first index");
    let needed = size - chosen.len();
    if points.len() < needed {
        return;
    }
    let base = points[chosen[0]];
    for j in (last + 1)..=(points.len() - needed) {
        if let Some(next) = span.with_offset(points[j], base) {
            chosen.push(j);
            grow_independent(points, size, &next, chosen, visit);
            chosen.pop();
        }
    }
}

/// Visits every affinely independent `size`-subset of `points` (as sorted
/// index tuples), splitting the scan across rayon workers by first index,
/// and folds the visits into per-worker hash sets.
fn collect_independent<T, F>(points: &[&Point], size: usize, make: F) -> HashSet<T>
where
    T: Eq + std::hash::Hash + Send,
    F: Fn(&[usize]) -> T + Sync,
{
    if size == 0 || points.len() < size {
        return HashSet::new();
    }
    (0..=points.len() - size)
        .into_par_iter()
        .fold(HashSet::new, |mut acc, first| {
            let mut chosen = vec![first];
            grow_independent(
                points,
                size,
                &DirectionSpan::default(),
                &mut chosen,
                &mut |idx| {
                    acc.insert(make(idx));
                },
            );
            acc
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return merge(b, a);
            }
            a.extend(b);
            a
        })
}

fn merge<T: Eq + std::hash::Hash>(mut a: HashSet<T>, b: HashSet<T>) -> HashSet<T> {
    a.extend(b);
    a
}

/// All `f`-dimensional flats that are the affine hull of some `f + 1` of
/// the points, each listed with every input point it contains.
///
/// Duplicate points are ignored; indices refer to the first occurrence.
pub fn spanned_flats(points: &[Point], f: usize) -> Result<SpannedSet> {
    let d = ambient_dim(points)?;
    if f >= d {
        return Err(Error::FlatDimOutOfRange { f, d });
    }
    let distinct = distinct_indices(points);
    let refs: Vec<&Point> = distinct.iter().map(|&i| &points[i]).collect();
    if let Some(sets) = scaled(&refs).and_then(|pts| member_sets(&pts, f + 1)) {
        let mut flats: Vec<SpannedFlat> = sets
            .into_par_iter()
            .map(|members| {
                let on: Vec<Point> = members.iter().map(|&j| refs[j].clone()).collect();
                SpannedFlat {
                    flat: affine_hull(&on).expect("nonempty member set"),
                    point_indices: members.into_iter().map(|j| distinct[j]).collect(),
                }
            })
            .collect();
        flats.sort_by(|a, b| a.point_indices.cmp(&b.point_indices));
        return Ok(SpannedSet { f, flats });
    }
    Ok(spanned_flats_exact(points, &distinct, f))
}

fn spanned_flats_exact(points: &[Point], distinct: &[usize], f: usize) -> SpannedSet {
    let refs: Vec<&Point> = distinct.iter().map(|&i| &points[i]).collect();
    let flats = collect_independent(&refs, f + 1, |idx| {
        let chosen: Vec<Point> = idx.iter().map(|&i| refs[i].clone()).collect();
        affine_hull(&chosen).expect("nonempty subset of equal-dimension points")
    });
    let mut flats: Vec<SpannedFlat> = flats
        .into_par_iter()
        .map(|flat| {
            let point_indices = distinct
                .iter()
                .copied()
                .filter(|&i| flat.contains_unchecked(&points[i]))
                .collect();
            SpannedFlat {
                flat,
                point_indices,
            }
        })
        .collect();
    flats.sort_by(|a, b| a.point_indices.cmp(&b.point_indices));
    SpannedSet { f, flats }
}

pub fn spanned_hyperplane_count(points: &[Point]) -> Result<usize> {
    let d = ambient_dim(points)?;
    Ok(spanned_flats(points, d - 1)?.count())
}

pub fn spanned_codim2_count(points: &[Point]) -> Result<usize> {
    let d = ambient_dim(points)?;
    if d < 2 {
        return Err(Error::FlatDimOutOfRange { f: 0, d });
    }
    Ok(spanned_flats(points, d - 2)?.count())
}

fn check_hyperplanes(hyperplanes: &[Flat]) -> Result<usize> {
    let d = hyperplanes.first().ok_or(Error::EmptyHull)?.ambient_dim();
    for (index, h) in hyperplanes.iter().enumerate() {
        if h.ambient_dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: h.ambient_dim(),
            });
        }
        if !h.is_hyperplane() {
            return Err(Error::NotHyperplane {
                index,
                dim: h.dim(),
                ambient: d,
            });
        }
    }
    Ok(d)
}

/// Points that are the 0-dimensional meet of some `d` input hyperplanes,
/// sorted and deduplicated. An empty input has no vertices.
pub fn arrangement_vertices(hyperplanes: &[Flat]) -> Result<Vec<Point>> {
    if hyperplanes.is_empty() {
        return Ok(Vec::new());
    }
    let d = check_hyperplanes(hyperplanes)?;
    let distinct: Vec<&Flat> = hyperplanes
        .iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    // Enumerate independent normal tuples the same way as point tuples: the
    // normals, offset from an origin pseudo-point, play the role of points.
    let origin = Point::origin(d);
    let normals: Vec<Point> = distinct
        .iter()
        .map(|h| Point::new(h.normal().expect("checked hyperplane").to_vec()))
        .collect();
    let mut with_origin: Vec<&Point> = vec![&origin];
    with_origin.extend(normals.iter());
    // Tuples must start at the origin, so only the first-index slice 0 is
    // used; the remaining indices select d independent normals.
    let mut found = BTreeSet::new();
    let tuples: Vec<Vec<usize>> = {
        let mut out = Vec::new();
        let mut chosen = vec![0];
        grow_independent(
            &with_origin,
            d + 1,
            &DirectionSpan::default(),
            &mut chosen,
            &mut |idx| out.push(idx[1..].iter().map(|i| i - 1).collect()),
        );
        out
    };
    let points: Vec<Point> = tuples
        .par_iter()
        .map(|idx| {
            let rows = idx
                .iter()
                .flat_map(|&i| distinct[i].constraints().iter().cloned())
                .collect();
            Flat::from_constraints(d, rows)
                .expect("independent normals always meet")
                .base_point()
        })
        .collect();
    found.extend(points);
    Ok(found.into_iter().collect())
}

/// True when the hyperplanes through `p` have normals spanning R^d, i.e.
/// `p` is a vertex of the arrangement.
pub fn is_arrangement_vertex(hyperplanes: &[Flat], p: &Point) -> bool {
    let d = p.dim();
    let mut span = DirectionSpan::default();
    for h in hyperplanes {
        if h.ambient_dim() != d || !h.contains_unchecked(p) {
            continue;
        }
        if let Some(normal) = h.normal() {
            if let Some(next) = span.with(normal.to_vec()) {
                span = next;
                if span.rank() == d {
                    return true;
                }
            }
        }
    }
    false
}

/// Size of the largest collinear subset of the distinct points.
pub fn max_collinear(points: &[Point]) -> Result<usize> {
    let d = ambient_dim(points)?;
    let n = distinct_indices(points).len();
    if n <= 2 || d < 2 {
        return Ok(n);
    }
    Ok(spanned_flats(points, 1)?
        .flats
        .iter()
        .map(|s| s.point_indices.len())
        .max()
        .unwrap_or(1))
}

#[derive(Clone, Debug)]
struct Candidate {
    flat: Flat,
    mask: u128,
    cost: usize,
}

fn mask_of(indices: &[usize], position: &[Option<usize>]) -> u128 {
    indices
        .iter()
        .filter_map(|&i| position[i])
        .fold(0u128, |m, bit| m | (1u128 << bit))
}

/// Distinct points plus a map from input index to bit position.
fn bit_positions(points: &[Point]) -> Result<(Vec<usize>, Vec<Option<usize>>)> {
    let distinct = distinct_indices(points);
    if distinct.len() > MAX_COVER_POINTS {
        return Err(Error::TooLarge(format!(
            "cover search supports at most {MAX_COVER_POINTS} distinct points, got {}",
            distinct.len()
        )));
    }
    let mut position = vec![None; points.len()];
    for (bit, &i) in distinct.iter().enumerate() {
        position[i] = Some(bit);
    }
    Ok((distinct, position))
}

/// Spanned flats of every dimension in `dims`, as cover candidates.
fn hull_candidates(
    points: &[Point],
    dims: std::ops::RangeInclusive<usize>,
    position: &[Option<usize>],
    cost: impl Fn(usize) -> usize,
) -> Result<Vec<Candidate>> {
    let mut out = Vec::new();
    for f in dims {
        for s in spanned_flats(points, f)?.flats {
            out.push(Candidate {
                mask: mask_of(&s.point_indices, position),
                cost: cost(f),
                flat: s.flat,
            });
        }
    }
    Ok(out)
}

/// Lines through single points, for covers that may use a line meeting
/// only one input point.
fn singleton_lines(points: &[Point], distinct: &[usize]) -> Vec<Candidate> {
    let d = points[distinct[0]].dim();
    let mut e = vec![Rational::from_integer(0.into()); d];
    e[0] = Rational::from_integer(1.into());
    distinct
        .iter()
        .enumerate()
        .map(|(bit, &i)| Candidate {
            flat: line_through(&points[i], &e),
            mask: 1u128 << bit,
            cost: 1,
        })
        .collect()
}

/// Drops candidates whose points are a subset of a no-more-expensive
/// candidate's points.
fn prune_dominated(mut cands: Vec<Candidate>) -> Vec<Candidate> {
    cands.sort_by(|a, b| {
        b.mask
            .count_ones()
            .cmp(&a.mask.count_ones())
            .then(a.cost.cmp(&b.cost))
    });
    let mut kept: Vec<Candidate> = Vec::new();
    for c in cands {
        let dominated = kept
            .iter()
            .any(|k| k.cost <= c.cost && c.mask & !k.mask == 0);
        if !dominated {
            kept.push(c);
        }
    }
    kept
}

struct CoverSearch<'a> {
    cands: &'a [Candidate],
    by_point: Vec<Vec<usize>>,
    /// Best points-per-cost ratio among candidates, as (points, cost).
    density: (u32, usize),
    failed: HashSet<(u128, usize)>,
}

impl<'a> CoverSearch<'a> {
    fn new(n: usize, cands: &'a [Candidate]) -> Self {
        let mut by_point = vec![Vec::new(); n];
        for (ci, c) in cands.iter().enumerate() {
            for (bit, list) in by_point.iter_mut().enumerate() {
                if c.mask >> bit & 1 == 1 {
                    list.push(ci);
                }
            }
        }
        for list in &mut by_point {
            list.sort_by(|&a, &b| {
                cands[b]
                    .mask
                    .count_ones()
                    .cmp(&cands[a].mask.count_ones())
                    .then(cands[a].cost.cmp(&cands[b].cost))
            });
        }
        let density = cands
            .iter()
            .map(|c| (c.mask.count_ones(), c.cost.max(1)))
            .max_by(|a, b| (a.0 as usize * b.1).cmp(&(b.0 as usize * a.1)))
            .unwrap_or((0, 1));
        Self {
            cands,
            by_point,
            density,
            failed: HashSet::new(),
        }
    }

    fn search(&mut self, uncovered: u128, budget: usize, chosen: &mut Vec<usize>) -> bool {
        if uncovered == 0 {
            return true;
        }
        let (pts, cost) = self.density;
        if uncovered.count_ones() as usize * cost > pts as usize * budget {
            return false;
        }
        if self.failed.contains(&(uncovered, budget)) {
            return false;
        }
        let first = uncovered.trailing_zeros() as usize;
        for k in 0..self.by_point[first].len() {
            let ci = self.by_point[first][k];
            let c = &self.cands[ci];
            if c.cost > budget {
                continue;
            }
            chosen.push(ci);
            if self.search(uncovered & !c.mask, budget - c.cost, chosen) {
                return true;
            }
            chosen.pop();
        }
        self.failed.insert((uncovered, budget));
        false
    }
}

fn full_mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Searches for a cover of every distinct point by candidates with total
/// cost at most `budget`.
fn find_cover(
    points: &[Point],
    n: usize,
    cands: Vec<Candidate>,
    budget: usize,
) -> Option<CoverCertificate> {
    let cands = prune_dominated(cands);
    let mut search = CoverSearch::new(n, &cands);
    let mut chosen = Vec::new();
    search.search(full_mask(n), budget, &mut chosen).then(|| {
        CoverCertificate::new(
            chosen.iter().map(|&i| cands[i].flat.clone()).collect(),
            points,
        )
    })
}

/// Whether the points can be covered by flats of nonzero dimension whose
/// dimensions sum to less than `r`, with a witnessing cover when they can.
///
/// Candidate flats are hulls of point subsets (a covering flat can always be
/// shrunk to the hull of what it covers), plus a line through any single
/// point.
pub fn is_r_degenerate(points: &[Point], r: usize) -> Result<(bool, Option<CoverCertificate>)> {
    if r == 0 {
        return Err(Error::InvalidParams("r must be at least 1".into()));
    }
    if points.is_empty() {
        return Ok((true, Some(CoverCertificate::new(Vec::new(), points))));
    }
    let d = ambient_dim(points)?;
    let (distinct, position) = bit_positions(points)?;
    let budget = r - 1;
    if budget == 0 {
        return Ok((false, None));
    }
    let top = budget.min(d - 1);
    let mut cands = hull_candidates(points, 1..=top, &position, |f| f)?;
    cands.extend(singleton_lines(points, &distinct));
    let cover = find_cover(points, distinct.len(), cands, budget);
    Ok((cover.is_some(), cover))
}

/// A cover by proper flats (points allowed) whose ranks sum to at most
/// `max_rank`, if one exists.
pub fn rank_cover(points: &[Point], max_rank: usize) -> Result<Option<CoverCertificate>> {
    if points.is_empty() {
        return Ok(Some(CoverCertificate::new(Vec::new(), points)));
    }
    let d = ambient_dim(points)?;
    let (distinct, position) = bit_positions(points)?;
    let top = max_rank.saturating_sub(1).min(d - 1);
    let cands = hull_candidates(points, 0..=top, &position, |f| f + 1)?;
    Ok(find_cover(points, distinct.len(), cands, max_rank))
}

/// Largest number of points covered by flats of nonzero dimension with
/// dimensions summing to less than `r`: the size of the largest
/// `r`-degenerate subset.
pub fn max_degenerate_subset(points: &[Point], r: usize) -> Result<(usize, CoverCertificate)> {
    if r == 0 {
        return Err(Error::InvalidParams("r must be at least 1".into()));
    }
    let d = ambient_dim(points)?;
    let (distinct, position) = bit_positions(points)?;
    let budget = r - 1;
    if budget == 0 {
        return Ok((0, CoverCertificate::new(Vec::new(), points)));
    }
    let top = budget.min(d - 1);
    let mut cands = hull_candidates(points, 1..=top, &position, |f| f)?;
    cands.extend(singleton_lines(points, &distinct));
    let cands = prune_dominated(cands);

    fn best(
        cands: &[Candidate],
        start: usize,
        covered: u128,
        budget: usize,
        chosen: &mut Vec<usize>,
        record: &mut (u32, Vec<usize>),
    ) {
        if covered.count_ones() > record.0 {
            *record = (covered.count_ones(), chosen.clone());
        }
        for i in start..cands.len() {
            let c = &cands[i];
            if c.cost > budget || c.mask & !covered == 0 {
                continue;
            }
            chosen.push(i);
            best(
                cands,
                i + 1,
                covered | c.mask,
                budget - c.cost,
                chosen,
                record,
            );
            chosen.pop();
        }
    }

    let mut record = (0, Vec::new());
    best(&cands, 0, 0, budget, &mut Vec::new(), &mut record);
    let flats = record.1.iter().map(|&i| cands[i].flat.clone()).collect();
    let cert = CoverCertificate::new(flats, points);
    Ok((cert.covered_count, cert))
}

/// Best covers of a point set in E^3 by one plane, by two lines, and by two
/// skew lines.
#[derive(Clone, Debug)]
pub struct PlaneOrLinesCover {
    pub plane: CoverCertificate,
    pub line_pair: CoverCertificate,
    pub skew_pair: CoverCertificate,
}

impl PlaneOrLinesCover {
    /// Max points on a plane or on a pair of skew lines.
    pub fn max_plane_or_skew_lines(&self) -> usize {
        self.plane.covered_count.max(self.skew_pair.covered_count)
    }

    /// Max points on a plane or on any pair of lines.
    pub fn max_plane_or_two_lines(&self) -> usize {
        self.plane.covered_count.max(self.line_pair.covered_count)
    }

    pub fn best(&self) -> (usize, &CoverCertificate) {
        if self.plane.covered_count >= self.line_pair.covered_count {
            (self.plane.covered_count, &self.plane)
        } else {
            (self.line_pair.covered_count, &self.line_pair)
        }
    }
}

#[derive(Clone, Debug)]
enum LineCand {
    Spanned {
        flat: Flat,
        mask: u128,
        two: [usize; 2],
    },
    Single {
        bit: usize,
    },
}

impl LineCand {
    fn mask(&self) -> u128 {
        match self {
            LineCand::Spanned { mask, .. } => *mask,
            LineCand::Single { bit } => 1u128 << bit,
        }
    }
}

/// Max points covered by a single plane, by a pair of lines, and by a pair
/// of skew lines, each with a witnessing certificate.
pub fn max_cover_plane_or_two_lines(points: &[Point]) -> Result<PlaneOrLinesCover> {
    let d = ambient_dim(points).or_else(|e| match e {
        Error::EmptyHull => Ok(3),
        e => Err(e),
    })?;
    if d != 3 {
        return Err(Error::DimensionMismatch {
            expected: 3,
            found: d,
        });
    }
    let (distinct, position) = bit_positions(points)?;
    let pts: Vec<&Point> = distinct.iter().map(|&i| &points[i]).collect();
    let n = pts.len();
    if n < 2 {
        let flats: Vec<Flat> = pts
            .first()
            .map(|p| Flat::point(p).extend_to(1))
            .into_iter()
            .collect();
        let cert = CoverCertificate::new(flats, points);
        return Ok(PlaneOrLinesCover {
            plane: CoverCertificate::new(
                pts.first()
                    .map(|p| Flat::point(p).extend_to(2))
                    .into_iter()
                    .collect(),
                points,
            ),
            line_pair: cert.clone(),
            skew_pair: cert,
        });
    }

    let planes = spanned_flats(points, 2)?;
    let plane = match planes.flats.iter().max_by(|a, b| {
        a.point_indices
            .len()
            .cmp(&b.point_indices.len())
            .then(b.point_indices.cmp(&a.point_indices))
    }) {
        Some(s) => s.flat.clone(),
        // All points collinear: any plane through their line.
        None => affine_hull(&pts.iter().map(|&p| p.clone()).collect::<Vec<_>>())?.extend_to(2),
    };

    let mut lines: Vec<LineCand> = spanned_flats(points, 1)?
        .flats
        .into_iter()
        .map(|s| {
            let bits: Vec<usize> = s
                .point_indices
                .iter()
                .filter_map(|&i| position[i])
                .collect();
            LineCand::Spanned {
                mask: mask_of(&s.point_indices, &position),
                flat: s.flat,
                two: [bits[0], bits[1]],
            }
        })
        .collect();
    lines.extend((0..n).map(|bit| LineCand::Single { bit }));
    lines.sort_by_key(|l| std::cmp::Reverse(l.mask().count_ones()));

    let is_skew = |a: &LineCand, b: &LineCand| -> bool {
        match (a, b) {
            (LineCand::Spanned { two: ta, .. }, LineCand::Spanned { two: tb, .. }) => {
                let four: Vec<Point> = ta.iter().chain(tb).map(|&i| pts[i].clone()).collect();
                affine_hull(&four).map(|f| f.dim() == 3).unwrap_or(false)
            }
            _ => a.mask() & b.mask() == 0,
        }
    };

    let best_pair = |skew_only: bool| -> Option<(usize, usize)> {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in 0..lines.len() {
            let ci = lines[i].mask().count_ones();
            let bound = best.map_or(0, |b| b.0);
            if i + 1 < lines.len() && ci + lines[i + 1].mask().count_ones() <= bound {
                break;
            }
            for j in (i + 1)..lines.len() {
                let cj = lines[j].mask().count_ones();
                let bound = best.map_or(0, |b| b.0);
                if ci + cj <= bound {
                    break;
                }
                let union = (lines[i].mask() | lines[j].mask()).count_ones();
                if union <= bound {
                    continue;
                }
                if skew_only && !is_skew(&lines[i], &lines[j]) {
                    continue;
                }
                best = Some((union, i, j));
            }
        }
        best.map(|(_, i, j)| (i, j))
    };

    let realize = |i: usize, j: usize, skew: bool| -> Vec<Flat> {
        match (&lines[i], &lines[j]) {
            (LineCand::Spanned { flat: a, .. }, LineCand::Spanned { flat: b, .. }) => {
                vec![a.clone(), b.clone()]
            }
            (LineCand::Spanned { flat, .. }, LineCand::Single { bit })
            | (LineCand::Single { bit }, LineCand::Spanned { flat, .. }) => {
                let p = pts[*bit];
                let q = flat.base_point();
                let mut span = flat.direction_basis();
                if skew {
                    span.push(
                        p.coords()
                            .iter()
                            .zip(q.coords())
                            .map(|(a, b)| a - b)
                            .collect(),
                    );
                }
                let v = complement_direction(3, &span).expect("span of at most two vectors in R^3");
                vec![flat.clone(), line_through(p, &v)]
            }
            (LineCand::Single { bit: a }, LineCand::Single { bit: b }) => {
                let (p, q) = (pts[*a], pts[*b]);
                let pq: Vec<Rational> = q
                    .coords()
                    .iter()
                    .zip(p.coords())
                    .map(|(x, y)| x - y)
                    .collect();
                let u = complement_direction(3, std::slice::from_ref(&pq)).expect("one vector");
                let w = complement_direction(3, &[pq, u.clone()]).expect("two vectors");
                vec![line_through(p, &u), line_through(q, &w)]
            }
        }
    };

    let line_pair = best_pair(false)
        .map(|(i, j)| realize(i, j, false))
        .unwrap_or_default();
    let skew_pair = best_pair(true)
        .map(|(i, j)| realize(i, j, true))
        .unwrap_or_default();

    Ok(PlaneOrLinesCover {
        plane: CoverCertificate::new(vec![plane], points),
        line_pair: CoverCertificate::new(line_pair, points),
        skew_pair: CoverCertificate::new(skew_pair, points),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::int;

    fn pts(rows: &[&[i64]]) -> Vec<Point> {
        rows.iter().map(|r| Point::from_ints(r)).collect()
    }

    proptest::proptest! {
        #[test]
        fn integer_path_matches_exact(
            raw in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 3), 1..9),
            den in 1i64..4,
            f in 0usize..3,
        ) {
            let points: Vec<Point> = raw
                .iter()
                .map(|r| Point::new(r.iter().map(|&x| crate::kernel::rational(x, den)).collect()))
                .collect();
            let fast = spanned_flats(&points, f).unwrap();
            let exact = spanned_flats_exact(&points, &distinct_indices(&points), f);
            proptest::prop_assert_eq!(fast, exact);
        }
    }

    fn generic5() -> Vec<Point> {
        pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 2, 3]])
    }

    #[test]
    fn four_generic_points_span_four_planes() {
        let p = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(spanned_flats(&p, 2).unwrap().count(), 4);
    }

    #[test]
    fn collinear_points_span_no_planes() {
        let p = pts(&[&[0, 0, 0], &[1, 1, 1], &[2, 2, 2], &[3, 3, 3]]);
        assert_eq!(spanned_flats(&p, 2).unwrap().count(), 0);
        assert_eq!(spanned_flats(&p, 1).unwrap().count(), 1);
    }

    #[test]
    fn lines_through_three_on_axis_and_one_off() {
        let p = pts(&[&[0, 0], &[1, 0], &[2, 0], &[0, 1]]);
        let set = spanned_flats(&p, 1).unwrap();
        assert_eq!(set.count(), 4);
        assert_eq!(set.flats[0].point_indices, vec![0, 1, 2]);
    }

    #[test]
    fn five_generic_points_span_ten_planes() {
        assert_eq!(spanned_hyperplane_count(&generic5()).unwrap(), 10);
    }

    #[test]
    fn flat_dim_out_of_range() {
        assert!(matches!(
            spanned_flats(&generic5(), 3),
            Err(Error::FlatDimOutOfRange { f: 3, d: 3 })
        ));
        assert!(matches!(spanned_flats(&[], 0), Err(Error::EmptyHull)));
    }

    #[test]
    fn duplicates_are_ignored() {
        let mut p = generic5();
        p.push(p[0].clone());
        let set = spanned_flats(&p, 2).unwrap();
        assert_eq!(set.count(), 10);
        assert!(set.flats.iter().all(|s| !s.point_indices.contains(&5)));
    }

    fn hyperplane(coeffs: &[i64], b: i64) -> Flat {
        Flat::hyperplane(coeffs.iter().map(|&c| int(c)).collect(), int(b)).unwrap()
    }

    #[test]
    fn coordinate_planes_meet_at_origin() {
        let hs = vec![
            hyperplane(&[1, 0, 0], 0),
            hyperplane(&[0, 1, 0], 0),
            hyperplane(&[0, 0, 1], 0),
        ];
        assert_eq!(arrangement_vertices(&hs).unwrap(), vec![Point::origin(3)]);
    }

    #[test]
    fn triangle_of_lines_has_three_vertices() {
        let hs = vec![
            hyperplane(&[0, 1], 0),
            hyperplane(&[1, 0], 0),
            hyperplane(&[1, 1], 1),
        ];
        assert_eq!(arrangement_vertices(&hs).unwrap().len(), 3);
    }

    #[test]
    fn four_line_grid_vertices() {
        // y = 0, y = 1, y = x, y = x + 1
        let hs = vec![
            hyperplane(&[0, 1], 0),
            hyperplane(&[0, 1], 1),
            hyperplane(&[-1, 1], 0),
            hyperplane(&[-1, 1], 1),
        ];
        let expected: BTreeSet<Point> = pts(&[&[0, 0], &[-1, 0], &[1, 1], &[0, 1]])
            .into_iter()
            .collect();
        let got: BTreeSet<Point> = arrangement_vertices(&hs).unwrap().into_iter().collect();
        assert_eq!(got, expected);
        for v in &expected {
            assert!(is_arrangement_vertex(&hs, v));
        }
        assert!(!is_arrangement_vertex(&hs, &Point::from_ints(&[5, 0])));
    }

    #[test]
    fn arrangement_rejects_non_hyperplanes() {
        let line = affine_hull(&pts(&[&[0, 0, 0], &[1, 0, 0]])).unwrap();
        assert!(matches!(
            arrangement_vertices(&[hyperplane(&[1, 0, 0], 0), line]),
            Err(Error::NotHyperplane { index: 1, .. })
        ));
    }

    #[test]
    fn plane_or_lines_two_skew_lines() {
        let p = pts(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[2, 0, 0],
            &[0, 1, 1],
            &[0, 2, 1],
            &[0, 3, 1],
        ]);
        let cover = max_cover_plane_or_two_lines(&p).unwrap();
        assert_eq!(cover.skew_pair.covered_count, 6);
        assert_eq!(cover.max_plane_or_two_lines(), 6);
        assert_eq!(cover.plane.covered_count, 4);
    }

    #[test]
    fn plane_or_lines_generic_five() {
        let cover = max_cover_plane_or_two_lines(&generic5()).unwrap();
        assert_eq!(cover.plane.covered_count, 3);
        assert_eq!(cover.line_pair.covered_count, 4);
        assert_eq!(cover.skew_pair.covered_count, 4);
        assert_eq!(cover.best().0, 4);
        assert_eq!(cover.skew_pair.flats.len(), 2);
        let (a, b) = (&cover.skew_pair.flats[0], &cover.skew_pair.flats[1]);
        assert_eq!(a.meet(b).unwrap(), None);
    }

    #[test]
    fn plane_or_lines_coplanar() {
        let p = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[3, 5, 0], &[7, 1, 0]]);
        let cover = max_cover_plane_or_two_lines(&p).unwrap();
        assert_eq!(cover.best().0, 5);
    }

    #[test]
    fn plane_or_lines_tiny_inputs() {
        let one = pts(&[&[1, 2, 3]]);
        let cover = max_cover_plane_or_two_lines(&one).unwrap();
        assert_eq!(cover.best().0, 1);
        let empty: Vec<Point> = Vec::new();
        assert_eq!(max_cover_plane_or_two_lines(&empty).unwrap().best().0, 0);
        let two = pts(&[&[1, 2, 3], &[0, 0, 0]]);
        let cover = max_cover_plane_or_two_lines(&two).unwrap();
        assert_eq!(cover.skew_pair.covered_count, 2);
        assert!(max_cover_plane_or_two_lines(&pts(&[&[0, 0], &[1, 1]])).is_err());
    }

    #[test]
    fn degeneracy_examples() {
        let coplanar = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[3, 5, 0]]);
        let (yes, cert) = is_r_degenerate(&coplanar, 3).unwrap();
        assert!(yes);
        let cert = cert.unwrap();
        assert!(cert.dims_sum < 3);
        assert_eq!(cert.covered_count, 4);

        let skew = pts(&[
            &[0, 0, 0],
            &[1, 0, 0],
            &[2, 0, 0],
            &[0, 1, 1],
            &[0, 2, 1],
            &[0, 3, 1],
        ]);
        let (yes, cert) = is_r_degenerate(&skew, 3).unwrap();
        assert!(yes);
        assert_eq!(cert.unwrap().dims_sum, 2);

        assert!(!is_r_degenerate(&generic5(), 3).unwrap().0);
        assert!(is_r_degenerate(&generic5(), 4).unwrap().0);
        assert!(is_r_degenerate(&generic5(), 0).is_err());
    }

    #[test]
    fn max_degenerate_subset_generic() {
        let (size, cert) = max_degenerate_subset(&generic5(), 3).unwrap();
        assert_eq!(size, 4);
        assert!(cert.dims_sum < 3);
    }

    #[test]
    fn rank_cover_of_square() {
        let p = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        let cert = rank_cover(&p, 3).unwrap().unwrap();
        assert_eq!(cert.rank_sum(), 3);
        assert!(rank_cover(&p, 2).unwrap().is_none());
    }

    #[test]
    fn collinear_counts() {
        let p = pts(&[&[0, 0], &[1, 1], &[2, 2], &[3, 3], &[0, 1]]);
        assert_eq!(max_collinear(&p).unwrap(), 4);
        let tri = pts(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(max_collinear(&tri).unwrap(), 2);
        assert_eq!(max_collinear(&pts(&[&[4, 4]])).unwrap(), 1);
    }
}
