//! Table-producing experiment drivers shared by the CLI and the test suites.
//!
//! Rows are computed independently (in parallel) and returned in parameter
//! order, so a given configuration and seed always yields the same table.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::constructions::{
    bichromatic_lower_construction, planted_instance, purdy_counterexample, random_grid_points,
    random_points, theta_mk_construction, BichromaticParams, PlantKind,
};
use crate::error::{Error, Result};
use crate::formulas::purdy_counts;
use crate::incidence::{bound_envelope, count_bichromatic, BiArrangement, Regime};
use crate::kernel::Point;
use crate::sampling::{derive_seed, rng, RationalSampler};
use crate::spans::{
    is_r_degenerate, max_cover_plane_or_two_lines, max_degenerate_subset, rank_cover, spanned_flats,
};

pub const SCHEMA_VERSION: u32 = 1;

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    })
}

fn min_max(values: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    values.fold(None, |acc, x| match acc {
        None => Some((x, x)),
        Some((lo, hi)) => Some((lo.min(x), hi.max(x))),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PurdyRow {
    pub d: usize,
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub attempts: usize,
    pub h_formula: u64,
    pub h_enumerated: u64,
    pub g_formula: u64,
    pub g_enumerated: u64,
    pub h_match: bool,
    pub g_match: bool,
    pub g_exceeds_h: bool,
    /// No cover by proper flats with ranks summing to at most d+1.
    pub rank_cover_exceeds: bool,
    pub error: String,
}

impl PurdyRow {
    pub fn ok(&self) -> bool {
        self.error.is_empty() && self.h_match && self.g_match
    }
}

fn purdy_row(d: usize, k: usize, base_seed: u64) -> PurdyRow {
    let seed = derive_seed(base_seed, &[d as u64, k as u64]);
    let mut row = PurdyRow {
        d,
        k,
        n: k * (d - 1),
        seed,
        attempts: 0,
        h_formula: 0,
        h_enumerated: 0,
        g_formula: 0,
        g_enumerated: 0,
        h_match: false,
        g_match: false,
        g_exceeds_h: false,
        rank_cover_exceeds: false,
        error: String::new(),
    };
    let result = (|| -> Result<()> {
        let counts = purdy_counts(d, k)?;
        row.h_formula = counts.h_total;
        row.g_formula = counts.g_total;
        let config = purdy_counterexample(d, k, seed)?;
        row.attempts = config.attempts;
        row.h_enumerated = spanned_flats(&config.points, d - 1)?.count() as u64;
        row.g_enumerated = spanned_flats(&config.points, d - 2)?.count() as u64;
        row.rank_cover_exceeds = rank_cover(&config.points, d + 1)?.is_none();
        Ok(())
    })();
    if let Err(e) = result {
        row.error = e.to_string();
    }
    row.h_match = row.error.is_empty() && row.h_formula == row.h_enumerated;
    row.g_match = row.error.is_empty() && row.g_formula == row.g_enumerated;
    row.g_exceeds_h = row.g_enumerated > row.h_enumerated;
    row
}

/// Formula versus enumeration for every (d, k) cell.
pub fn verify_purdy(ds: &[usize], ks: &[usize], seed: u64) -> Result<Vec<PurdyRow>> {
    if let Some(&d) = ds.iter().find(|&&d| d < 4) {
        return Err(Error::InvalidParams(format!("d = {d}: d >= 4 required")));
    }
    if let Some(&k) = ks.iter().find(|&&k| k < 2) {
        return Err(Error::InvalidParams(format!("k = {k}: k >= 2 required")));
    }
    let cells: Vec<(usize, usize)> = ds
        .iter()
        .flat_map(|&d| ks.iter().map(move |&k| (d, k)))
        .collect();
    Ok(cells
        .par_iter()
        .map(|&(d, k)| purdy_row(d, k, seed))
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepConstruction {
    Bichromatic,
    ThetaMk,
}

impl std::str::FromStr for SweepConstruction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bichromatic" => Ok(Self::Bichromatic),
            "thetamk" | "theta-mk" => Ok(Self::ThetaMk),
            _ => Err(Error::Parse(format!("unknown construction `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSweepConfig {
    pub construction: SweepConstruction,
    pub d: usize,
    /// Strictly increasing n values.
    pub n_ladder: Vec<usize>,
    /// k = ⌊n·k_num/k_den⌋ (at least 1).
    pub k_num: usize,
    pub k_den: usize,
    /// Bichromatic only: planar vertices p = ⌈k·p_num/p_den⌉, and
    /// m = p·n^(d-2).
    pub p_num: usize,
    pub p_den: usize,
}

impl EnvelopeSweepConfig {
    /// n = n0, 2·n0, ... (`steps` values).
    pub fn doubling(construction: SweepConstruction, d: usize, n0: usize, steps: usize) -> Self {
        Self {
            construction,
            d,
            n_ladder: (0..steps).map(|i| n0 << i).collect(),
            k_num: 1,
            k_den: 2,
            p_num: 1,
            p_den: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeRow {
    pub construction: SweepConstruction,
    pub step: usize,
    pub d: usize,
    pub n: usize,
    pub k: usize,
    pub m: usize,
    pub requested_m: u64,
    pub red_incidences: u64,
    pub total_incidences: u64,
    pub expected_red_incidences: u64,
    pub mk: u64,
    pub mixed_term: f64,
    pub kn_term: f64,
    pub linear_term: f64,
    pub envelope: f64,
    pub ratio: f64,
    pub regime: Option<Regime>,
    /// Nonempty when the step was infeasible and skipped.
    pub warning: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSweep {
    pub rows: Vec<EnvelopeRow>,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

fn envelope_row(config: &EnvelopeSweepConfig, step: usize, n: usize) -> EnvelopeRow {
    let d = config.d;
    let k = ((n * config.k_num) / config.k_den.max(1)).max(1);
    let mut row = EnvelopeRow {
        construction: config.construction,
        step,
        d,
        n,
        k,
        m: 0,
        requested_m: 0,
        red_incidences: 0,
        total_incidences: 0,
        expected_red_incidences: 0,
        mk: 0,
        mixed_term: 0.0,
        kn_term: 0.0,
        linear_term: 0.0,
        envelope: 0.0,
        ratio: 0.0,
        regime: None,
        warning: String::new(),
    };
    let built: Result<(BiArrangement, u64)> = (|| match config.construction {
        SweepConstruction::Bichromatic => {
            let p = (k * config.p_num).div_ceil(config.p_den.max(1)) as u64;
            let n_pow = (n as u64)
                .checked_pow(d.saturating_sub(2) as u32)
                .ok_or(Error::Overflow("n^(d-2)"))?;
            row.requested_m = p * n_pow;
            let c = bichromatic_lower_construction(&BichromaticParams {
                d,
                n,
                k,
                m: row.requested_m,
                c0: 1,
            })?;
            Ok((c.arrangement, c.expected_red_incidences))
        }
        SweepConstruction::ThetaMk => {
            let side = if d > 2 { n / (2 * (d - 2)) } else { 1 };
            row.requested_m = (side as u64).pow(d.saturating_sub(2) as u32);
            let c = theta_mk_construction(d, n, k, row.requested_m)?;
            Ok((c.arrangement, c.expected_red_incidences))
        }
    })();
    let result = built.and_then(|(a, expected)| {
        let report = count_bichromatic(&a)?;
        row.n = a.n();
        row.k = a.k();
        row.m = a.m();
        row.expected_red_incidences = expected;
        row.red_incidences = report.red_incidences;
        row.total_incidences = report.total_incidences;
        row.mk = (row.m * row.k) as u64;
        let e = bound_envelope(row.m as u64, row.k as u64, row.n as u64, d)?;
        row.mixed_term = e.mixed;
        row.kn_term = e.kn;
        row.linear_term = e.linear;
        row.envelope = e.sum;
        row.regime = Some(e.regime);
        row.ratio = row.red_incidences as f64 / e.sum;
        Ok(())
    });
    if let Err(e) = result {
        row.warning = format!("skipped: {e}");
    }
    row
}

pub fn envelope_sweep(config: &EnvelopeSweepConfig) -> Result<EnvelopeSweep> {
    if config.n_ladder.is_empty() {
        return Err(Error::InvalidParams("empty n ladder".into()));
    }
    if config.n_ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParams(
            "n ladder must be strictly increasing".into(),
        ));
    }
    if config.k_num == 0 || config.k_den == 0 || config.p_den == 0 {
        return Err(Error::InvalidParams(
            "k and p fractions must be positive".into(),
        ));
    }
    let rows: Vec<EnvelopeRow> = config
        .n_ladder
        .par_iter()
        .enumerate()
        .map(|(step, &n)| envelope_row(config, step, n))
        .collect();
    let ratios = || {
        rows.iter()
            .filter(|r| r.warning.is_empty())
            .map(|r| r.ratio)
    };
    let mm = min_max(ratios());
    Ok(EnvelopeSweep {
        min_ratio: mm.map(|m| m.0),
        max_ratio: mm.map(|m| m.1),
        rows,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Beck3Config {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub seeds_per_cell: usize,
    pub base_seed: u64,
    pub kind: PlantKind,
    pub max_retries: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Beck3Row {
    pub n: usize,
    pub k: usize,
    pub kind: String,
    pub replicate: usize,
    pub seed: u64,
    pub attempts: usize,
    pub max_plane: usize,
    pub max_line_pair: usize,
    pub max_skew_pair: usize,
    pub hypothesis_holds: bool,
    pub spanned_planes: usize,
    pub ratio: f64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Beck3Report {
    pub rows: Vec<Beck3Row>,
    pub min_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub all_hypotheses_hold: bool,
}

impl Serialize for PlantKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for PlantKind {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn beck3_row(config: &Beck3Config, n: usize, k: usize, replicate: usize) -> Beck3Row {
    let mut row = Beck3Row {
        n,
        k,
        kind: config.kind.name().to_string(),
        replicate,
        seed: 0,
        attempts: 0,
        max_plane: 0,
        max_line_pair: 0,
        max_skew_pair: 0,
        hypothesis_holds: false,
        spanned_planes: 0,
        ratio: 0.0,
        error: String::new(),
    };
    let result = (|| -> Result<()> {
        for attempt in 0..config.max_retries.max(1) {
            let seed = derive_seed(
                config.base_seed,
                &[n as u64, k as u64, replicate as u64, attempt as u64],
            );
            let points = planted_instance(n, k, config.kind, seed)?;
            let cover = max_cover_plane_or_two_lines(&points)?;
            row.seed = seed;
            row.attempts = attempt + 1;
            row.max_plane = cover.plane.covered_count;
            row.max_line_pair = cover.line_pair.covered_count;
            row.max_skew_pair = cover.skew_pair.covered_count;
            row.hypothesis_holds = cover.max_plane_or_skew_lines() <= n - k;
            if row.hypothesis_holds {
                row.spanned_planes = spanned_flats(&points, 2)?.count();
                row.ratio = row.spanned_planes as f64 / (n * k * k) as f64;
                return Ok(());
            }
        }
        Err(Error::GeneratorExhausted {
            predicate: "at most n-k points on a plane or two skew lines".into(),
            attempts: config.max_retries,
        })
    })();
    if let Err(e) = result {
        row.error = e.to_string();
    }
    row
}

/// Planted instances: spanned planes against n·k² under the hypothesis that
/// no plane or pair of skew lines holds more than n-k points.
pub fn beck3(config: &Beck3Config) -> Result<Beck3Report> {
    if let Some(&k) = config.ks.iter().find(|&&k| k == 0) {
        return Err(Error::InvalidParams(format!("k = {k}: k >= 1 required")));
    }
    if let Some((&n, &k)) = config
        .ns
        .iter()
        .flat_map(|n| config.ks.iter().map(move |k| (n, k)))
        .find(|&(&n, &k)| k >= n)
    {
        return Err(Error::InvalidParams(format!(
            "k = {k} must be below n = {n}"
        )));
    }
    let cells: Vec<(usize, usize, usize)> = config
        .ns
        .iter()
        .flat_map(|&n| {
            config
                .ks
                .iter()
                .flat_map(move |&k| (0..config.seeds_per_cell).map(move |r| (n, k, r)))
        })
        .collect();
    let rows: Vec<Beck3Row> = cells
        .par_iter()
        .map(|&(n, k, r)| beck3_row(config, n, k, r))
        .collect();
    let ratios: Vec<f64> = rows
        .iter()
        .filter(|r| r.error.is_empty())
        .map(|r| r.ratio)
        .collect();
    let mm = min_max(ratios.iter().copied());
    Ok(Beck3Report {
        all_hypotheses_hold: rows
            .iter()
            .all(|r| r.error.is_empty() && r.hypothesis_holds),
        min_ratio: mm.map(|m| m.0),
        max_ratio: mm.map(|m| m.1),
        median_ratio: median(&ratios),
        rows,
    })
}

/// How random point sets are drawn for the conjecture harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointDistribution {
    /// Coordinates from [`RationalSampler::default`].
    UniformRational,
    /// Integer coordinates in `[0, side)`.
    Grid { side: i64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureConfig {
    pub d: usize,
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    pub distribution: PointDistribution,
    /// Rows with either ratio below this value are flagged.
    pub floor: f64,
}

/// Measurements for the two degeneracy-based conjectures on one point set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureRow {
    pub sample: usize,
    pub seed: u64,
    pub d: usize,
    pub n: usize,
    pub degenerate: bool,
    pub hyperplanes: usize,
    pub codim2_flats: usize,
    pub max_point_degree: usize,
    /// max point hyperplane-degree / number of (d-2)-flats
    pub conj1_ratio: Option<f64>,
    pub max_degenerate_subset: usize,
    /// n minus the largest d-degenerate subset
    pub k: usize,
    /// hyperplanes / (n·k^(d-1))
    pub conj2_ratio: Option<f64>,
    pub flagged: bool,
}

pub fn conjecture_measurements(points: &[Point], floor: f64) -> Result<ConjectureRow> {
    let d = points.first().ok_or(Error::EmptyHull)?.dim();
    if d < 3 {
        return Err(Error::InvalidParams(format!("d = {d}: d >= 3 required")));
    }
    let n = crate::spans::distinct_indices(points).len();
    let (degenerate, _) = is_r_degenerate(points, d)?;
    let hyperplanes = spanned_flats(points, d - 1)?;
    let codim2 = spanned_flats(points, d - 2)?.count();
    let mut degree = vec![0usize; points.len()];
    for s in &hyperplanes.flats {
        for &i in &s.point_indices {
            degree[i] += 1;
        }
    }
    let max_point_degree = degree.into_iter().max().unwrap_or(0);
    let (largest, _) = max_degenerate_subset(points, d)?;
    let k = n - largest;
    let conj1_ratio = (codim2 > 0).then(|| max_point_degree as f64 / codim2 as f64);
    let conj2_ratio =
        (k > 0).then(|| hyperplanes.count() as f64 / (n as f64 * (k as f64).powi(d as i32 - 1)));
    let flagged = !degenerate
        && (conj1_ratio.is_some_and(|r| r < floor) || conj2_ratio.is_some_and(|r| r < floor));
    Ok(ConjectureRow {
        sample: 0,
        seed: 0,
        d,
        n,
        degenerate,
        hyperplanes: hyperplanes.count(),
        codim2_flats: codim2,
        max_point_degree,
        conj1_ratio,
        max_degenerate_subset: largest,
        k,
        conj2_ratio,
        flagged,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjectureReport {
    pub rows: Vec<ConjectureRow>,
    pub kept: usize,
    pub filtered_degenerate: usize,
    pub flagged: usize,
    pub conj1_min: Option<f64>,
    pub conj1_median: Option<f64>,
    pub conj2_min: Option<f64>,
    pub conj2_median: Option<f64>,
}

/// Samples point sets, drops d-degenerate ones from the statistics and
/// records both conjecture ratios. Flags are for inspection only.
pub fn conjecture_search(config: &ConjectureConfig) -> Result<ConjectureReport> {
    if config.d < 3 {
        return Err(Error::InvalidParams(format!(
            "d = {}: d >= 3 required",
            config.d
        )));
    }
    if config.n < config.d {
        return Err(Error::InvalidParams(format!(
            "n = {} is too small to span E^{}",
            config.n, config.d
        )));
    }
    let rows = (0..config.samples)
        .into_par_iter()
        .map(|sample| {
            let seed = derive_seed(config.seed, &[sample as u64]);
            let mut rng = rng(seed);
            let points = match config.distribution {
                PointDistribution::UniformRational => {
                    random_points(config.d, config.n, &RationalSampler::default(), &mut rng)
                }
                PointDistribution::Grid { side } => {
                    random_grid_points(config.d, config.n, side, &mut rng)?
                }
            };
            let mut row = conjecture_measurements(&points, config.floor)?;
            row.sample = sample;
            row.seed = seed;
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let kept: Vec<&ConjectureRow> = rows.iter().filter(|r| !r.degenerate).collect();
    let c1: Vec<f64> = kept.iter().filter_map(|r| r.conj1_ratio).collect();
    let c2: Vec<f64> = kept.iter().filter_map(|r| r.conj2_ratio).collect();
    Ok(ConjectureReport {
        kept: kept.len(),
        filtered_degenerate: rows.len() - kept.len(),
        flagged: rows.iter().filter(|r| r.flagged).count(),
        conj1_min: min_max(c1.iter().copied()).map(|m| m.0),
        conj1_median: median(&c1),
        conj2_min: min_max(c2.iter().copied()).map(|m| m.0),
        conj2_median: median(&c2),
        rows,
    })
}
