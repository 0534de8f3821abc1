//! Exact affine algebra over the rationals.
//!
//! Flats are stored as constraint systems `A·x = b` kept in reduced
//! row-echelon form with unit pivots, so two flats are equal exactly when
//! their stored rows are identical. That makes `Flat` usable as a hash key
//! for deduplication during enumeration.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parses `"p/q"` or `"p"`. Surrounding whitespace is ignored.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))?;
    let den: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical text form: `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

fn join_rationals(values: &[Rational]) -> String {
    values
        .iter()
        .map(format_rational)
        .collect::<Vec<_>>()
        .join(",")
}

fn split_rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',').map(parse_rational).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    coords: Vec<Rational>,
}

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn origin(d: usize) -> Self {
        Self::new(vec![Rational::zero(); d])
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    fn offset(&self, other: &Point) -> Vec<Rational> {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect()
    }

    fn translated(&self, direction: &[Rational]) -> Point {
        Point::new(
            self.coords
                .iter()
                .zip(direction)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join_rationals(&self.coords))
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = split_rationals(s)?;
        if coords.is_empty() {
            return Err(Error::Parse("empty point".into()));
        }
        Ok(Point::new(coords))
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Brings `rows` into reduced row-echelon form with unit pivots, looking for
/// pivots only among the first `pivot_cols` columns. Returns the pivot
/// columns; rows past `pivots.len()` are zero within the pivot columns.
pub(crate) fn rref(rows: &mut [Vec<Rational>], pivot_cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        if !inv.is_one() {
            for x in rows[r][c..].iter_mut() {
                *x *= &inv;
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, tail) = tail.split_first_mut().expect("pivot row exists");
        for row in head.iter_mut().chain(tail.iter_mut()) {
            if row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                if !p.is_zero() {
                    *x -= p * &factor;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{v : rows·v = 0}` where `rows` is in RREF over `ncols` columns.
fn null_space(rows: &[Vec<Rational>], pivots: &[usize], ncols: usize) -> Vec<Vec<Rational>> {
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &pc) in rows.iter().zip(pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// An affine subspace of E^d, stored as canonical constraints.
///
/// Each row has `d + 1` entries `[a_1 .. a_d | b]` encoding `a·x = b`.
/// The ambient space itself is the flat with no rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Flat {
    ambient_dim: usize,
    rows: Vec<Vec<Rational>>,
}

impl Flat {
    /// Builds a flat from an arbitrary (possibly redundant) constraint
    /// system. Fails with [`Error::Infeasible`] when the system has no
    /// solution.
    pub fn from_constraints(ambient_dim: usize, mut rows: Vec<Vec<Rational>>) -> Result<Self> {
        for row in &rows {
            if row.len() != ambient_dim + 1 {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim + 1,
                    found: row.len(),
                });
            }
        }
        let pivots = rref(&mut rows, ambient_dim);
        if rows[pivots.len()..]
            .iter()
            .any(|row| !row[ambient_dim].is_zero())
        {
            return Err(Error::Infeasible);
        }
        rows.truncate(pivots.len());
        Ok(Self { ambient_dim, rows })
    }

    /// The hyperplane `normal·x = offset`.
    pub fn hyperplane(normal: Vec<Rational>, offset: Rational) -> Result<Self> {
        let d = normal.len();
        if normal.iter().all(Zero::is_zero) {
            return Err(Error::InvalidParams("hyperplane normal is zero".into()));
        }
        let mut row = normal;
        row.push(offset);
        Self::from_constraints(d, vec![row])
    }

    pub fn whole_space(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            rows: Vec::new(),
        }
    }

    pub fn point(p: &Point) -> Self {
        let d = p.dim();
        let rows = (0..d)
            .map(|i| {
                let mut row = vec![Rational::zero(); d + 1];
                row[i] = Rational::one();
                row[d] = p.coords[i].clone();
                row
            })
            .collect();
        Self {
            ambient_dim: d,
            rows,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.ambient_dim - self.rows.len()
    }

    /// Rank of a flat is one more than its dimension.
    pub fn rank(&self) -> usize {
        self.dim() + 1
    }

    pub fn is_hyperplane(&self) -> bool {
        self.rows.len() == 1
    }

    pub fn constraints(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    /// Normal vector of a hyperplane (the unique constraint row without
    /// its right-hand side).
    pub fn normal(&self) -> Option<&[Rational]> {
        self.is_hyperplane()
            .then(|| &self.rows[0][..self.ambient_dim])
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if self.ambient_dim != d {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: d,
            });
        }
        Ok(())
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        self.check_dim(p.dim())?;
        Ok(self.contains_unchecked(p))
    }

    pub(crate) fn contains_unchecked(&self, p: &Point) -> bool {
        let d = self.ambient_dim;
        self.rows
            .iter()
            .all(|row| dot(&row[..d], &p.coords) == row[d])
    }

    /// `self ∩ other`, or `None` when the intersection is empty.
    pub fn meet(&self, other: &Flat) -> Result<Option<Flat>> {
        self.check_dim(other.ambient_dim)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        match Flat::from_constraints(self.ambient_dim, rows) {
            Ok(f) => Ok(Some(f)),
            Err(Error::Infeasible) => Ok(None),
            Err(e) => Err(e),
        }
    }

    /// True when `other` is a subset of `self`.
    pub fn contains_flat(&self, other: &Flat) -> Result<bool> {
        self.check_dim(other.ambient_dim)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        let base = other.base_point();
        if !self.contains_unchecked(&base) {
            return Ok(false);
        }
        Ok(other.direction_basis().iter().all(|v| {
            self.rows
                .iter()
                .all(|row| dot(&row[..self.ambient_dim], v).is_zero())
        }))
    }

    /// A point of the flat: the solution with every free coordinate zero.
    pub fn base_point(&self) -> Point {
        let d = self.ambient_dim;
        let mut coords = vec![Rational::zero(); d];
        for row in &self.rows {
            let pivot = row[..d]
                .iter()
                .position(|x| !x.is_zero())
                .expect("canonical rows are nonzero");
            coords[pivot] = row[d].clone();
        }
        Point::new(coords)
    }

    /// Basis of the direction space (the linear part of the flat).
    pub fn direction_basis(&self) -> Vec<Vec<Rational>> {
        let d = self.ambient_dim;
        let pivots: Vec<usize> = self
            .rows
            .iter()
            .map(|row| {
                row[..d]
                    .iter()
                    .position(|x| !x.is_zero())
                    .expect("canonical rows are nonzero")
            })
            .collect();
        null_space(&self.rows, &pivots, d)
    }

    /// Smallest flat of dimension at least `dim` containing `self`, built by
    /// adding standard basis directions in index order.
    pub fn extend_to(&self, dim: usize) -> Flat {
        let d = self.ambient_dim;
        let target = dim.min(d);
        let base = self.base_point();
        let mut points = vec![base.clone()];
        points.extend(self.direction_basis().iter().map(|v| base.translated(v)));
        let mut hull = self.clone();
        for axis in 0..d {
            if hull.dim() >= target {
                break;
            }
            let mut e = vec![Rational::zero(); d];
            e[axis] = Rational::one();
            let candidate = base.translated(&e);
            if hull.contains_unchecked(&candidate) {
                continue;
            }
            points.push(candidate);
            hull = affine_hull(&points).expect("nonempty, equal dimensions");
        }
        hull
    }

    /// Serializes each constraint row as `"a_1,...,a_d,b"`.
    pub fn constraint_strings(&self) -> Vec<String> {
        self.rows.iter().map(|row| join_rationals(row)).collect()
    }

    pub fn from_constraint_strings(ambient_dim: usize, rows: &[String]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| split_rationals(r))
            .collect::<Result<Vec<_>>>()?;
        Self::from_constraints(ambient_dim, rows)
    }
}

impl fmt::Display for Flat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}-flat in E^{} [{}]",
            self.dim(),
            self.ambient_dim,
            self.constraint_strings().join("; ")
        )
    }
}

fn common_dim<'a>(points: impl IntoIterator<Item = &'a Point>) -> Result<usize> {
    let mut iter = points.into_iter();
    let d = iter.next().ok_or(Error::EmptyHull)?.dim();
    for p in iter {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
    }
    Ok(d)
}

/// Smallest flat containing every input point. Duplicates are harmless.
pub fn affine_hull(points: &[Point]) -> Result<Flat> {
    let d = common_dim(points)?;
    let base = &points[0];
    let mut diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.offset(base)).collect();
    let pivots = rref(&mut diffs, d);
    let normals = null_space(&diffs[..pivots.len()], &pivots, d);
    let rows = normals
        .into_iter()
        .map(|mut a| {
            let b = dot(&a, &base.coords);
            a.push(b);
            a
        })
        .collect();
    Flat::from_constraints(d, rows)
}

/// Dimension of the affine hull, without building the canonical flat.
pub fn hull_dim(points: &[&Point]) -> Result<usize> {
    let d = common_dim(points.iter().copied())?;
    let base = points[0];
    let mut diffs: Vec<Vec<Rational>> = points[1..].iter().map(|p| p.offset(base)).collect();
    Ok(rref(&mut diffs, d).len())
}

/// Incrementally maintained span of direction vectors, used to prune
/// subset enumeration to affinely independent tuples.
#[derive(Clone, Debug, Default)]
pub(crate) struct DirectionSpan {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl DirectionSpan {
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Returns the enlarged span if `v` is independent of `self`.
    pub(crate) fn with(&self, mut v: Vec<Rational>) -> Option<Self> {
        for (pc, row) in &self.rows {
            if v[*pc].is_zero() {
                continue;
            }
            let factor = v[*pc].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= r * &factor;
                }
            }
        }
        let pc = v.iter().position(|x| !x.is_zero())?;
        let inv = v[pc].recip();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        let mut next = self.clone();
        next.rows.push((pc, v));
        Some(next)
    }

    pub(crate) fn with_offset(&self, p: &Point, base: &Point) -> Option<Self> {
        self.with(p.offset(base))
    }
}

/// A direction not lying in the span of `vectors`: the first standard basis
/// vector that is independent of them.
pub(crate) fn complement_direction(d: usize, vectors: &[Vec<Rational>]) -> Option<Vec<Rational>> {
    let mut span = DirectionSpan::default();
    for v in vectors {
        if let Some(next) = span.with(v.clone()) {
            span = next;
        }
    }
    (0..d).find_map(|axis| {
        let mut e = vec![Rational::zero(); d];
        e[axis] = Rational::one();
        span.with(e.clone()).map(|_| e)
    })
}

/// The line through `p` with direction `v`.
pub(crate) fn line_through(p: &Point, v: &[Rational]) -> Flat {
    affine_hull(&[p.clone(), p.translated(v)]).expect("two points of equal dimension")
}
