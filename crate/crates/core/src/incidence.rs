//! Bichromatic point-hyperplane incidence counting.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{Flat, Point};
use crate::spans::is_arrangement_vertex;

/// Red and blue hyperplanes in E^d together with a chosen set of vertices
/// of their combined arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiArrangement {
    d: usize,
    red: Vec<Flat>,
    blue: Vec<Flat>,
    vertices: Vec<Point>,
}

impl BiArrangement {
    /// Checks dimensions, that every input is a hyperplane and that no
    /// hyperplane is both red and blue. Vertex membership is left to
    /// [`validate_vertices`] and [`count_bichromatic`].
    pub fn new(d: usize, red: Vec<Flat>, blue: Vec<Flat>, vertices: Vec<Point>) -> Result<Self> {
        for (index, h) in red.iter().chain(&blue).enumerate() {
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
        if let Some(v) = vertices.iter().find(|v| v.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: v.dim(),
            });
        }
        let red_set: HashSet<&Flat> = red.iter().collect();
        if let Some(j) = blue.iter().position(|h| red_set.contains(h)) {
            return Err(Error::Invariant(format!(
                "blue hyperplane {j} ({}) is also red",
                blue[j]
            )));
        }
        Ok(Self {
            d,
            red,
            blue,
            vertices,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn red(&self) -> &[Flat] {
        &self.red
    }

    pub fn blue(&self) -> &[Flat] {
        &self.blue
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Number of red hyperplanes.
    pub fn k(&self) -> usize {
        self.red.len()
    }

    /// Number of hyperplanes of either color.
    pub fn n(&self) -> usize {
        self.red.len() + self.blue.len()
    }

    /// Number of vertices.
    pub fn m(&self) -> usize {
        self.vertices.len()
    }

    fn all_hyperplanes(&self) -> Vec<Flat> {
        self.red.iter().chain(&self.blue).cloned().collect()
    }

    pub fn to_file(&self) -> BiArrangementFile {
        BiArrangementFile {
            d: self.d,
            red: self.red.iter().map(row_string).collect(),
            blue: self.blue.iter().map(row_string).collect(),
            vertices: self.vertices.iter().map(Point::to_string).collect(),
        }
    }

    pub fn from_file(file: &BiArrangementFile) -> Result<Self> {
        let parse_hyperplanes = |rows: &[String]| -> Result<Vec<Flat>> {
            rows.iter()
                .map(|r| Flat::from_constraint_strings(file.d, std::slice::from_ref(r)))
                .collect()
        };
        let vertices = file
            .vertices
            .iter()
            .map(|s| s.parse())
            .collect::<Result<Vec<Point>>>()?;
        Self::new(
            file.d,
            parse_hyperplanes(&file.red)?,
            parse_hyperplanes(&file.blue)?,
            vertices,
        )
    }
}

fn row_string(h: &Flat) -> String {
    h.constraint_strings()
        .into_iter()
        .next()
        .expect("hyperplanes have one row")
}

/// On-disk form: each hyperplane is one constraint row `"a_1,...,a_d,b"`
/// (meaning `a·x = b`) and each vertex a comma-separated point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiArrangementFile {
    pub d: usize,
    pub red: Vec<String>,
    pub blue: Vec<String>,
    pub vertices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub red_incidences: u64,
    pub total_incidences: u64,
    pub per_point_red_degree: Vec<usize>,
    pub red_incident_vertex_count: usize,
}

/// Counts incidences between the vertices and the red hyperplanes (and,
/// for `total_incidences`, all hyperplanes) by exact predicate evaluation.
///
/// Fails if a listed point is not a vertex of the combined arrangement.
pub fn count_bichromatic(a: &BiArrangement) -> Result<CountReport> {
    let all = a.all_hyperplanes();
    let degrees: Vec<(usize, usize)> = a
        .vertices
        .par_iter()
        .enumerate()
        .map(|(i, v)| {
            if !is_arrangement_vertex(&all, v) {
                return Err(Error::Invariant(format!(
                    "vertex {i} ({v}) is not a vertex of the arrangement"
                )));
            }
            let red = a.red.iter().filter(|h| h.contains_unchecked(v)).count();
            let blue = a.blue.iter().filter(|h| h.contains_unchecked(v)).count();
            Ok((red, red + blue))
        })
        .collect::<Result<_>>()?;
    Ok(CountReport {
        red_incidences: degrees.iter().map(|&(r, _)| r as u64).sum(),
        total_incidences: degrees.iter().map(|&(_, t)| t as u64).sum(),
        red_incident_vertex_count: degrees.iter().filter(|&&(r, _)| r > 0).count(),
        per_point_red_degree: degrees.into_iter().map(|(r, _)| r).collect(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexValidation {
    /// Every listed point is a vertex of the combined arrangement.
    pub all_vertices: bool,
    /// Every listed point lies on at least one red hyperplane.
    pub all_red_incident: bool,
}

pub fn validate_vertices(a: &BiArrangement) -> VertexValidation {
    let all = a.all_hyperplanes();
    VertexValidation {
        all_vertices: a
            .vertices
            .par_iter()
            .all(|v| is_arrangement_vertex(&all, v)),
        all_red_incident: a
            .vertices
            .par_iter()
            .all(|v| a.red.iter().any(|h| h.contains_unchecked(v))),
    }
}

/// Which of the three envelope terms dominates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `m^{2/3} k^{2/3} n^{(d-2)/3}` dominates.
    Mixed,
    /// `m <= k^{1/2} n^{d-2}`: the `k n^{d-2}` term dominates.
    KnTerm,
    /// `m >= k^2 n^{d-2}`: the linear `m` term dominates.
    Linear,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub mixed: f64,
    pub kn: f64,
    pub linear: f64,
    pub sum: f64,
    pub regime: Regime,
}

/// `m^{2/3} k^{2/3} n^{(d-2)/3} + k n^{d-2} + m`, term by term.
///
/// Integer parts are formed exactly; the only rounding is the final cube
/// root of `m^2 k^2 n^{d-2}`. The regime is decided by exact comparison.
pub fn bound_envelope(m: u64, k: u64, n: u64, d: usize) -> Result<Envelope> {
    if m == 0 || k == 0 || n == 0 {
        return Err(Error::InvalidParams("m, k and n must be positive".into()));
    }
    if k > n {
        return Err(Error::InvalidParams(format!("k = {k} exceeds n = {n}")));
    }
    if d < 2 {
        return Err(Error::InvalidParams(format!("d = {d} must be at least 2")));
    }
    let (m, k, n) = (BigUint::from(m), BigUint::from(k), BigUint::from(n));
    let n_pow = num_traits::pow(n.clone(), d - 2);
    let cube = &m * &m * &k * &k * &n_pow;
    let kn = &k * &n_pow;
    let to_f64 = |x: &BigUint| x.to_f64().unwrap_or(f64::INFINITY);
    let mixed = integer_cbrt_f64(&cube);
    let regime = if m >= &k * &k * &n_pow {
        Regime::Linear
    } else if &m * &m <= &k * &n_pow * &n_pow {
        Regime::KnTerm
    } else {
        Regime::Mixed
    };
    let (kn, linear) = (to_f64(&kn), to_f64(&m));
    Ok(Envelope {
        mixed,
        kn,
        linear,
        sum: mixed + kn + linear,
        regime,
    })
}

/// Cube root of a big integer, exact when it is a perfect cube.
fn integer_cbrt_f64(x: &BigUint) -> f64 {
    let root = x.cbrt();
    if &root * &root * &root == *x {
        return root.to_f64().unwrap_or(f64::INFINITY);
    }
    x.to_f64().unwrap_or(f64::INFINITY).cbrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::int;

    fn hyperplane(coeffs: &[i64], b: i64) -> Flat {
        Flat::hyperplane(coeffs.iter().map(|&c| int(c)).collect(), int(b)).unwrap()
    }

    fn axes() -> Vec<Flat> {
        vec![
            hyperplane(&[1, 0, 0], 0),
            hyperplane(&[0, 1, 0], 0),
            hyperplane(&[0, 0, 1], 0),
        ]
    }

    #[test]
    fn all_red_axes() {
        let a = BiArrangement::new(3, axes(), vec![], vec![Point::origin(3)]).unwrap();
        let r = count_bichromatic(&a).unwrap();
        assert_eq!(r.red_incidences, 3);
        assert_eq!(r.total_incidences, 3);
        assert_eq!(r.per_point_red_degree, vec![3]);
        assert_eq!(r.red_incident_vertex_count, 1);
        assert_eq!(
            validate_vertices(&a),
            VertexValidation {
                all_vertices: true,
                all_red_incident: true
            }
        );
    }

    #[test]
    fn one_red_two_blue() {
        let mut hs = axes();
        let red = vec![hs.pop().unwrap()];
        let a = BiArrangement::new(3, red, hs, vec![Point::origin(3)]).unwrap();
        let r = count_bichromatic(&a).unwrap();
        assert_eq!(r.red_incidences, 1);
        assert_eq!(r.total_incidences, 3);
    }

    #[test]
    fn non_vertex_is_rejected() {
        let a = BiArrangement::new(
            3,
            axes(),
            vec![],
            vec![Point::origin(3), Point::from_ints(&[0, 0, 1])],
        )
        .unwrap();
        assert!(!validate_vertices(&a).all_vertices);
        let err = count_bichromatic(&a).unwrap_err();
        assert!(err.to_string().contains("vertex 1"));
    }

    #[test]
    fn colors_must_be_disjoint() {
        let err = BiArrangement::new(3, axes(), vec![hyperplane(&[2, 0, 0], 0)], vec![]);
        assert!(matches!(err, Err(Error::Invariant(_))));
    }

    #[test]
    fn vertex_not_on_red() {
        let mut hs = axes();
        let red = vec![hyperplane(&[1, 1, 1], 5)];
        hs.push(hyperplane(&[1, 0, 0], 5));
        let a = BiArrangement::new(3, red, hs, vec![Point::origin(3)]).unwrap();
        let v = validate_vertices(&a);
        assert!(v.all_vertices);
        assert!(!v.all_red_incident);
        assert_eq!(count_bichromatic(&a).unwrap().red_incident_vertex_count, 0);
    }

    #[test]
    fn file_round_trip() {
        let a = BiArrangement::new(3, axes(), vec![], vec![Point::origin(3)]).unwrap();
        let file = a.to_file();
        assert_eq!(file.red[0], "1,0,0,0");
        let json = serde_json::to_string(&file).unwrap();
        let back: BiArrangementFile = serde_json::from_str(&json).unwrap();
        assert_eq!(BiArrangement::from_file(&back).unwrap(), a);
    }

    #[test]
    fn envelope_unit() {
        let e = bound_envelope(1, 1, 1, 2).unwrap();
        assert_eq!((e.mixed, e.kn, e.linear, e.sum), (1.0, 1.0, 1.0, 3.0));
    }

    #[test]
    fn envelope_hand_computed() {
        let e = bound_envelope(8, 4, 4, 3).unwrap();
        assert!((e.mixed - 16.0).abs() < 1e-12);
        assert_eq!(e.kn, 16.0);
        assert_eq!(e.linear, 8.0);
        assert_eq!(e.regime, Regime::KnTerm);
    }

    #[test]
    fn envelope_regimes() {
        // m = k^2 n^{d-2}: the linear term takes over.
        let (k, n, d) = (3u64, 5u64, 4usize);
        let m = k * k * n.pow(d as u32 - 2);
        assert_eq!(bound_envelope(m, k, n, d).unwrap().regime, Regime::Linear);
        assert_eq!(
            bound_envelope(m - 1, k, n, d).unwrap().regime,
            Regime::Mixed
        );
        assert_eq!(bound_envelope(1, k, n, d).unwrap().regime, Regime::KnTerm);
    }

    #[test]
    fn envelope_irrational_root() {
        let e = bound_envelope(2, 1, 1, 2).unwrap();
        assert!((e.mixed - 4f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn envelope_errors() {
        assert!(bound_envelope(1, 5, 4, 3).is_err());
        assert!(bound_envelope(0, 1, 4, 3).is_err());
        assert!(bound_envelope(1, 1, 4, 1).is_err());
    }
}
