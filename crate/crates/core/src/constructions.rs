//! Deterministic generators for the extremal configurations.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::incidence::BiArrangement;
use crate::kernel::{affine_hull, int, Flat, Point, Rational};
use crate::sampling::{rng, RationalSampler};

/// Retry budget for the seeded general-position generators.
pub const MAX_ATTEMPTS: usize = 64;

/// The hyperplane `v - a·u = b` in E^d, where `(u, v)` are the last two
/// coordinates. For `d = 2` this is the line `y = a·x + b`.
fn lifted_line(d: usize, slope: i64, intercept: i64) -> Flat {
    let mut normal = vec![Rational::zero(); d];
    normal[d - 2] = int(-slope);
    normal[d - 1] = Rational::one();
    Flat::hyperplane(normal, int(intercept)).expect("normal has a unit entry")
}

/// Integer points with `|x| <= window` lying on at least two of the lines
/// `y = a·x + b`, with their degrees, in `(x, y)` order.
fn integer_vertices(lines: &[(i64, i64)], window: i64) -> Vec<((i64, i64), usize)> {
    let mut degree: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for x in -window..=window {
        for &(a, b) in lines {
            *degree.entry((x, a * x + b)).or_default() += 1;
        }
    }
    degree.into_iter().filter(|&(_, c)| c >= 2).collect()
}

/// Slope/intercept grid `{y = a·x + b : 0 <= a < r, 0 <= b < s}` together
/// with its integer-coordinate vertices in the strip `|x| <= ⌈s/r⌉`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErdosGrid {
    pub r: u32,
    pub s: u32,
    pub lines: Vec<Flat>,
    pub vertices: Vec<Point>,
    pub vertex_degrees: Vec<usize>,
    pub incidences: u64,
}

impl ErdosGrid {
    pub fn to_arrangement(&self) -> BiArrangement {
        BiArrangement::new(2, self.lines.clone(), Vec::new(), self.vertices.clone())
            .expect("grid lines are distinct hyperplanes of E^2")
    }
}

pub fn erdos_grid_2d(r: u32, s: u32) -> Result<ErdosGrid> {
    if r == 0 || s == 0 {
        return Err(Error::InvalidParams("r and s must be at least 1".into()));
    }
    let slopes: Vec<(i64, i64)> = (0..r as i64)
        .flat_map(|a| (0..s as i64).map(move |b| (a, b)))
        .collect();
    let window = (s as i64 + r as i64 - 1) / r as i64;
    let verts = integer_vertices(&slopes, window);
    Ok(ErdosGrid {
        r,
        s,
        lines: slopes.iter().map(|&(a, b)| lifted_line(2, a, b)).collect(),
        vertices: verts
            .iter()
            .map(|&((x, y), _)| Point::from_ints(&[x, y]))
            .collect(),
        vertex_degrees: verts.iter().map(|&(_, c)| c).collect(),
        incidences: verts.iter().map(|&(_, c)| c as u64).sum(),
    })
}

/// Lines as `(slope, intercept)`; vertices as `((x, y), degree)`.
type PlanarConfiguration = (Vec<(i64, i64)>, Vec<((i64, i64), usize)>);

/// `k` lines of the smallest slope/intercept grid with `r^3 >= k`, and the
/// `p` richest of their integer vertices (ties by coordinates).
fn planar_configuration(k: usize, p: usize) -> Result<PlanarConfiguration> {
    let r = (1..)
        .find(|r: &usize| r.pow(3) >= k)
        .expect("unbounded search") as i64;
    let s = (k as i64 + r - 1) / r;
    let lines: Vec<(i64, i64)> = (0..r)
        .flat_map(|a| (0..s).map(move |b| (a, b)))
        .take(k)
        .collect();
    let window = (s + r - 1) / r;
    let mut verts = integer_vertices(&lines, window);
    if verts.len() < p {
        return Err(Error::InvalidParams(format!(
            "planar configuration of {k} lines has {} vertices, {p} requested",
            verts.len()
        )));
    }
    verts.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    verts.truncate(p);
    Ok((lines, verts))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BichromaticParams {
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub m: u64,
    /// Multiplier linking the planar vertex count to m: p = c0·⌊m/n^(d-2)⌋.
    pub c0: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BichromaticConstruction {
    pub arrangement: BiArrangement,
    /// Vertices taken from the planar configuration.
    pub p: usize,
    /// Blue hyperplanes per parallel family.
    pub family_size: usize,
    pub planar_incidences: u64,
    pub expected_red_incidences: u64,
}

/// Red hyperplanes normal to the plane `x_1 = ... = x_{d-2} = 0`, lifted from
/// a planar line configuration, plus d-2 families of parallel blue
/// hyperplanes `x_i = j`. Vertices are the planar vertices copied into every
/// plane cut out by one blue hyperplane from each family.
pub fn bichromatic_lower_construction(
    params: &BichromaticParams,
) -> Result<BichromaticConstruction> {
    let BichromaticParams { d, n, k, m, c0 } = *params;
    if d < 3 {
        return Err(Error::InvalidParams(format!("d = {d}: d >= 3 required")));
    }
    if k == 0 || k >= n {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    let n_pow = (n as u64)
        .checked_pow((d - 2) as u32)
        .ok_or(Error::Overflow("n^(d-2)"))?;
    let p = c0.saturating_mul(m / n_pow) as usize;
    if p == 0 {
        return Err(Error::InvalidParams(format!(
            "p = c0·⌊m/n^(d-2)⌋ = 0 for m = {m}, n = {n}, d = {d}"
        )));
    }
    let family_size = (n - k) / (d - 2);
    if family_size == 0 {
        return Err(Error::InvalidParams(format!(
            "n - k = {} leaves no blue hyperplanes for {} families",
            n - k,
            d - 2
        )));
    }
    let (lines, planar) = planar_configuration(k, p)?;
    let planar_incidences: u64 = planar.iter().map(|&(_, c)| c as u64).sum();

    let red = lines.iter().map(|&(a, b)| lifted_line(d, a, b)).collect();
    let mut blue = Vec::with_capacity(family_size * (d - 2));
    for axis in 0..d - 2 {
        for j in 0..family_size {
            let mut normal = vec![Rational::zero(); d];
            normal[axis] = Rational::one();
            blue.push(Flat::hyperplane(normal, int(j as i64))?);
        }
    }
    let meets = (family_size as u64).pow((d - 2) as u32);
    let mut vertices = Vec::with_capacity(meets as usize * planar.len());
    let mut index = vec![0i64; d - 2];
    loop {
        for &((x, y), _) in &planar {
            let mut coords = index.clone();
            coords.extend([x, y]);
            vertices.push(Point::from_ints(&coords));
        }
        // odometer over the blue families
        let mut axis = d - 2;
        loop {
            if axis == 0 {
                let arrangement = BiArrangement::new(d, red, blue, vertices)?;
                return Ok(BichromaticConstruction {
                    arrangement,
                    p,
                    family_size,
                    planar_incidences,
                    expected_red_incidences: planar_incidences * meets,
                });
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < family_size as i64 {
                break;
            }
            index[axis] = 0;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaMkConstruction {
    pub arrangement: BiArrangement,
    /// Side of the vertex grid; there are p^(d-2) vertices.
    pub p: usize,
    /// Hyperplanes containing the whole vertex grid.
    pub bundle_size: usize,
    /// Vertex degree of every input hyperplane, in construction order.
    pub degrees: Vec<usize>,
    /// Indices (construction order) of the hyperplanes colored red.
    pub red_indices: Vec<usize>,
    pub expected_red_incidences: u64,
}

/// Grid-plus-bundle arrangement with Θ(mn) incidences, with the k
/// hyperplanes of largest vertex degree colored red.
///
/// Hyperplanes `x_a = b` (1 <= a <= d-2, 0 <= b < p) cut out a grid of p^(d-2)
/// vertices on the flat `x_{d-1} = x_d = 0`; the remaining hyperplanes
/// `x_{d-1} + i·x_d = 0` all contain that flat.
pub fn theta_mk_construction(d: usize, n: usize, k: usize, m: u64) -> Result<ThetaMkConstruction> {
    if d < 2 {
        return Err(Error::InvalidParams(format!("d = {d}: d >= 2 required")));
    }
    if k > n {
        return Err(Error::InvalidParams(format!("k = {k} exceeds n = {n}")));
    }
    let p = if d == 2 {
        1
    } else {
        let root = integer_root(m, (d - 2) as u32);
        root.min((n / (2 * (d - 2))) as u64) as usize
    };
    if p == 0 {
        return Err(Error::InvalidParams(format!(
            "grid side is 0 for m = {m}, n = {n}, d = {d}"
        )));
    }
    let pencil = (d - 2) * p;
    let bundle_size = n.saturating_sub(pencil);
    if bundle_size < 2 {
        return Err(Error::InvalidParams(format!(
            "n = {n} leaves {bundle_size} bundle hyperplanes; at least 2 needed"
        )));
    }
    let mut hyperplanes = Vec::with_capacity(n);
    for axis in 0..d - 2 {
        for b in 0..p {
            let mut normal = vec![Rational::zero(); d];
            normal[axis] = Rational::one();
            hyperplanes.push(Flat::hyperplane(normal, int(b as i64))?);
        }
    }
    for i in pencil..n {
        let mut normal = vec![Rational::zero(); d];
        normal[d - 2] = Rational::one();
        normal[d - 1] = int(i as i64);
        hyperplanes.push(Flat::hyperplane(normal, Rational::zero())?);
    }

    let mut vertices = Vec::new();
    let mut index = vec![0i64; d - 2];
    'grid: loop {
        let mut coords = index.clone();
        coords.extend([0, 0]);
        vertices.push(Point::from_ints(&coords));
        let mut axis = d - 2;
        loop {
            if axis == 0 {
                break 'grid;
            }
            axis -= 1;
            index[axis] += 1;
            if index[axis] < p as i64 {
                break;
            }
            index[axis] = 0;
        }
    }

    let degrees: Vec<usize> = hyperplanes
        .iter()
        .map(|h| vertices.iter().filter(|v| h.contains_unchecked(v)).count())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| degrees[b].cmp(&degrees[a]).then(a.cmp(&b)));
    let mut red_indices: Vec<usize> = order[..k].to_vec();
    red_indices.sort_unstable();

    // Bundle hyperplanes meet all p^(d-2) vertices, grid hyperplanes p^(d-3).
    let grid = (p as u64).pow((d - 2) as u32);
    let expected_red_incidences = if d == 2 {
        k as u64
    } else {
        let slice = (p as u64).pow((d - 3) as u32);
        let from_bundle = k.min(bundle_size) as u64;
        let from_grid = k.saturating_sub(bundle_size) as u64;
        from_bundle * grid + from_grid * slice
    };

    let red_set: BTreeSet<usize> = red_indices.iter().copied().collect();
    let (mut red, mut blue) = (Vec::new(), Vec::new());
    for (i, h) in hyperplanes.into_iter().enumerate() {
        if red_set.contains(&i) {
            red.push(h);
        } else {
            blue.push(h);
        }
    }
    Ok(ThetaMkConstruction {
        arrangement: BiArrangement::new(d, red, blue, vertices)?,
        p,
        bundle_size,
        degrees,
        red_indices,
        expected_red_incidences,
    })
}

/// ⌊m^(1/e)⌋
fn integer_root(m: u64, e: u32) -> u64 {
    let mut r = (m as f64).powf(1.0 / e as f64).round() as u64;
    while r > 0 && r.checked_pow(e).is_none_or(|v| v > m) {
        r -= 1;
    }
    while (r + 1).checked_pow(e).is_some_and(|v| v <= m) {
        r += 1;
    }
    r
}

/// k points on each of d-1 covering lines in general position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurdyConfiguration {
    pub d: usize,
    pub k: usize,
    pub seed: u64,
    pub attempts: usize,
    pub lines: Vec<Flat>,
    /// Line-major: points `A_i + t·B_i` for t = 1..=k on line i.
    pub points: Vec<Point>,
}

fn along(anchor: &[Rational], dir: &[Rational], t: i64) -> Point {
    let t = int(t);
    Point::new(anchor.iter().zip(dir).map(|(a, b)| a + b * &t).collect())
}

/// Name of the first violated general-position predicate, if any.
fn purdy_violation(
    d: usize,
    k: usize,
    anchors: &[Vec<Rational>],
    dirs: &[Vec<Rational>],
) -> Option<&'static str> {
    let lines = d - 1;
    if dirs.iter().any(|v| v.iter().all(Zero::is_zero)) {
        return Some("nonzero directions");
    }
    // Every subset of s lines spans a flat of rank min(2s, d+1). In
    // particular no flat of rank 2j holds j+1 lines and no hyperplane holds
    // more than ⌊d/2⌋ lines.
    for subset in 1u32..(1 << lines) {
        let mut pts = Vec::new();
        for i in (0..lines).filter(|i| subset >> i & 1 == 1) {
            pts.push(along(&anchors[i], &dirs[i], 0));
            pts.push(along(&anchors[i], &dirs[i], 1));
        }
        let s = subset.count_ones() as usize;
        let rank = affine_hull(&pts).expect("nonempty").rank();
        if rank != (2 * s).min(d + 1) {
            return Some(if s == d / 2 + 1 {
                "no hyperplane contains more than ⌊d/2⌋ covering lines"
            } else {
                "no flat of rank 2j covers more than j covering lines"
            });
        }
    }
    // Every transversal (one point per line) is affinely independent.
    let mut choice = vec![1i64; lines];
    loop {
        let pts: Vec<Point> = (0..lines)
            .map(|i| along(&anchors[i], &dirs[i], choice[i]))
            .collect();
        if affine_hull(&pts).expect("nonempty").dim() != lines - 1 {
            return Some("transversal points are affinely independent");
        }
        let mut i = 0;
        loop {
            if i == lines {
                return None;
            }
            choice[i] += 1;
            if choice[i] <= k as i64 {
                break;
            }
            choice[i] = 1;
            i += 1;
        }
    }
}

pub fn purdy_counterexample(d: usize, k: usize, seed: u64) -> Result<PurdyConfiguration> {
    if d < 4 {
        return Err(Error::InvalidParams(format!("d = {d}: d >= 4 required")));
    }
    if k < 2 {
        return Err(Error::InvalidParams(format!("k = {k}: k >= 2 required")));
    }
    let sampler = RationalSampler::default();
    let mut rng = rng(seed);
    let mut failed = "";
    for attempt in 1..=MAX_ATTEMPTS {
        let anchors: Vec<Vec<Rational>> = (0..d - 1).map(|_| sampler.vector(&mut rng, d)).collect();
        let dirs: Vec<Vec<Rational>> = (0..d - 1).map(|_| sampler.vector(&mut rng, d)).collect();
        match purdy_violation(d, k, &anchors, &dirs) {
            Some(p) => failed = p,
            None => {
                let lines = anchors
                    .iter()
                    .zip(&dirs)
                    .map(|(a, v)| affine_hull(&[along(a, v, 0), along(a, v, 1)]))
                    .collect::<Result<_>>()?;
                let points = anchors
                    .iter()
                    .zip(&dirs)
                    .flat_map(|(a, v)| (1..=k as i64).map(move |t| along(a, v, t)))
                    .collect();
                return Ok(PurdyConfiguration {
                    d,
                    k,
                    seed,
                    attempts: attempt,
                    lines,
                    points,
                });
            }
        }
    }
    Err(Error::GeneratorExhausted {
        predicate: failed.to_string(),
        attempts: MAX_ATTEMPTS,
    })
}

/// How the n-k non-generic points of a planted instance are placed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlantKind {
    Plane,
    SkewLines,
}

impl PlantKind {
    pub fn name(self) -> &'static str {
        match self {
            PlantKind::Plane => "plane",
            PlantKind::SkewLines => "skew-lines",
        }
    }
}

impl std::str::FromStr for PlantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plane" => Ok(PlantKind::Plane),
            "skew-lines" | "skew" => Ok(PlantKind::SkewLines),
            _ => Err(Error::Parse(format!("unknown plant kind `{s}`"))),
        }
    }
}

fn combine(base: &Point, dirs: &[&[Rational]], coeffs: &[Rational]) -> Point {
    let mut coords = base.coords().to_vec();
    for (dir, c) in dirs.iter().zip(coeffs) {
        for (x, v) in coords.iter_mut().zip(dir.iter()) {
            *x += v * c;
        }
    }
    Point::new(coords)
}

/// n points in E^3: n-k on a random plane (or split across two random skew
/// lines) and k sampled freely. The caller checks the resulting hypothesis.
pub fn planted_instance(n: usize, k: usize, kind: PlantKind, seed: u64) -> Result<Vec<Point>> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParams(format!(
            "need 1 <= k < n, got k = {k}, n = {n}"
        )));
    }
    let sampler = RationalSampler::default();
    let mut rng = rng(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    let mut push = |p: Point, out: &mut Vec<Point>| {
        if seen.insert(p.clone()) {
            out.push(p);
            true
        } else {
            false
        }
    };
    let planted = n - k;
    match kind {
        PlantKind::Plane => {
            let (base, u, v) = loop {
                let base = sampler.point(&mut rng, 3);
                let u = sampler.vector(&mut rng, 3);
                let v = sampler.vector(&mut rng, 3);
                let probe = [
                    base.clone(),
                    combine(&base, &[&u], &[int(1)]),
                    combine(&base, &[&v], &[int(1)]),
                ];
                if affine_hull(&probe)?.dim() == 2 {
                    break (base, u, v);
                }
            };
            while out.len() < planted {
                let coeffs = [sampler.rational(&mut rng), sampler.rational(&mut rng)];
                push(combine(&base, &[&u, &v], &coeffs), &mut out);
            }
        }
        PlantKind::SkewLines => {
            let lines = loop {
                let a = sampler.point(&mut rng, 3);
                let u = sampler.vector(&mut rng, 3);
                let b = sampler.point(&mut rng, 3);
                let v = sampler.vector(&mut rng, 3);
                let probe = [
                    a.clone(),
                    combine(&a, &[&u], &[int(1)]),
                    b.clone(),
                    combine(&b, &[&v], &[int(1)]),
                ];
                if affine_hull(&probe)?.dim() == 3 {
                    break [(a, u), (b, v)];
                }
            };
            let mut which = 0;
            while out.len() < planted {
                let (base, dir) = &lines[which];
                let t = sampler.rational(&mut rng);
                if push(combine(base, &[dir], &[t]), &mut out) {
                    which = 1 - which;
                }
            }
        }
    }
    while out.len() < n {
        let p = sampler.point(&mut rng, 3);
        push(p, &mut out);
    }
    Ok(out)
}

/// Uniform seeded rational point set, used by the conjecture harness.
pub fn random_points(
    d: usize,
    n: usize,
    sampler: &RationalSampler,
    rng: &mut impl Rng,
) -> Vec<Point> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = sampler.point(rng, d);
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

/// Integer points with coordinates in `[0, side)`, sampled without
/// replacement; small sides make coincidences (and degeneracy) likely.
pub fn random_grid_points(d: usize, n: usize, side: i64, rng: &mut impl Rng) -> Result<Vec<Point>> {
    let capacity = (side.max(0) as u128)
        .checked_pow(d as u32)
        .unwrap_or(u128::MAX);
    if (n as u128) > capacity {
        return Err(Error::InvalidParams(format!(
            "cannot place {n} distinct points in a grid of side {side} in E^{d}"
        )));
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let coords: Vec<Rational> = (0..d)
            .map(|_| Rational::from_integer(BigInt::from(rng.random_range(0..side))))
            .collect();
        let p = Point::new(coords);
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::{count_bichromatic, validate_vertices};
    use crate::spans::{max_collinear, spanned_flats};

    #[test]
    fn grid_two_by_two() {
        let g = erdos_grid_2d(2, 2).unwrap();
        assert_eq!(g.lines.len(), 4);
        let expected: BTreeSet<Point> = [[0, 0], [-1, 0], [1, 1], [0, 1]]
            .iter()
            .map(|c| Point::from_ints(c))
            .collect();
        assert_eq!(
            g.vertices.iter().cloned().collect::<BTreeSet<_>>(),
            expected
        );
        assert_eq!(g.incidences, 8);
        let report = count_bichromatic(&g.to_arrangement()).unwrap();
        assert_eq!(report.red_incidences, 8);
    }

    #[test]
    fn grid_parallel_pencil() {
        let g = erdos_grid_2d(1, 5).unwrap();
        assert_eq!(g.lines.len(), 5);
        assert!(g.vertices.is_empty());
        assert_eq!(g.incidences, 0);
        assert!(erdos_grid_2d(0, 3).is_err());
    }

    #[test]
    fn bichromatic_d3_k4() {
        let c = bichromatic_lower_construction(&BichromaticParams {
            d: 3,
            n: 8,
            k: 4,
            m: 32,
            c0: 1,
        })
        .unwrap();
        assert_eq!(c.p, 4);
        assert_eq!(c.family_size, 4);
        assert_eq!(c.planar_incidences, 8);
        assert_eq!(c.expected_red_incidences, 32);
        let a = &c.arrangement;
        assert_eq!((a.k(), a.n(), a.m()), (4, 8, 16));
        assert_eq!(count_bichromatic(a).unwrap().red_incidences, 32);
        let v = validate_vertices(a);
        assert!(v.all_vertices && v.all_red_incident);
    }

    #[test]
    fn bichromatic_d4_k4() {
        let c = bichromatic_lower_construction(&BichromaticParams {
            d: 4,
            n: 10,
            k: 4,
            m: 400,
            c0: 1,
        })
        .unwrap();
        assert_eq!(c.family_size, 3);
        assert_eq!(c.expected_red_incidences, c.planar_incidences * 9);
        assert_eq!(
            count_bichromatic(&c.arrangement).unwrap().red_incidences,
            c.expected_red_incidences
        );
    }

    #[test]
    fn bichromatic_infeasible() {
        let base = BichromaticParams {
            d: 3,
            n: 8,
            k: 1,
            m: 32,
            c0: 1,
        };
        assert!(bichromatic_lower_construction(&base).is_err());
        assert!(bichromatic_lower_construction(&BichromaticParams {
            m: 3,
            k: 4,
            ..base.clone()
        })
        .is_err());
        assert!(bichromatic_lower_construction(&BichromaticParams {
            d: 4,
            n: 5,
            k: 4,
            ..base
        })
        .is_err());
    }

    #[test]
    fn theta_mk_examples() {
        let c = theta_mk_construction(3, 6, 2, 2).unwrap();
        assert_eq!((c.p, c.bundle_size), (2, 4));
        assert_eq!(c.arrangement.m(), 2);
        assert_eq!(count_bichromatic(&c.arrangement).unwrap().red_incidences, 4);
        assert_eq!(c.expected_red_incidences, 4);
        let c = theta_mk_construction(3, 6, 4, 2).unwrap();
        assert_eq!(count_bichromatic(&c.arrangement).unwrap().red_incidences, 8);
        let all = theta_mk_construction(3, 6, 6, 2).unwrap();
        let r = count_bichromatic(&all.arrangement).unwrap();
        assert_eq!(r.red_incidences, r.total_incidences);
    }

    #[test]
    fn theta_mk_higher_dimension() {
        let c = theta_mk_construction(4, 12, 3, 9).unwrap();
        assert_eq!(c.p, 3);
        assert_eq!(c.arrangement.m(), 9);
        assert!(validate_vertices(&c.arrangement).all_vertices);
        assert_eq!(
            count_bichromatic(&c.arrangement).unwrap().red_incidences,
            c.expected_red_incidences
        );
        assert_eq!(c.expected_red_incidences, 27);
    }

    #[test]
    fn theta_mk_plane() {
        let c = theta_mk_construction(2, 5, 3, 10).unwrap();
        assert_eq!(c.arrangement.m(), 1);
        assert_eq!(count_bichromatic(&c.arrangement).unwrap().red_incidences, 3);
    }

    #[test]
    fn integer_roots() {
        assert_eq!(integer_root(8, 3), 2);
        assert_eq!(integer_root(26, 3), 2);
        assert_eq!(integer_root(27, 3), 3);
        assert_eq!(integer_root(5, 1), 5);
    }

    #[test]
    fn purdy_is_deterministic() {
        let a = purdy_counterexample(4, 2, 11).unwrap();
        let b = purdy_counterexample(4, 2, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.points.len(), 6);
        assert!(purdy_counterexample(3, 2, 1).is_err());
        assert!(purdy_counterexample(4, 1, 1).is_err());
    }

    #[test]
    fn purdy_d4_k3_collinearity() {
        let c = purdy_counterexample(4, 3, 5).unwrap();
        assert_eq!(max_collinear(&c.points).unwrap(), 3);
        for (i, line) in c.lines.iter().enumerate() {
            for p in &c.points[i * 3..(i + 1) * 3] {
                assert!(line.contains(p).unwrap());
            }
        }
    }

    #[test]
    fn planted_instances() {
        let p = planted_instance(12, 3, PlantKind::Plane, 1).unwrap();
        assert_eq!(p.len(), 12);
        let planes = spanned_flats(&p, 2).unwrap();
        assert!(planes.flats.iter().any(|s| s.point_indices.len() == 9));
        let s = planted_instance(12, 2, PlantKind::SkewLines, 1).unwrap();
        let lines = spanned_flats(&s, 1).unwrap();
        assert_eq!(
            lines
                .flats
                .iter()
                .filter(|l| l.point_indices.len() == 5)
                .count(),
            2
        );
        assert!(planted_instance(5, 0, PlantKind::Plane, 1).is_err());
    }
}
