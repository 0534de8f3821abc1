//! Closed-form counts for the covering-lines configuration and the
//! modified pigeonhole principle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::Rational;

/// Binomial coefficient by the multiplicative formula.
pub fn binomial(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step.
        acc = acc.checked_mul(n - i).ok_or(Error::Overflow("binomial"))? / (i + 1);
    }
    Ok(acc)
}

fn pow(base: u64, exp: u64) -> Result<u64> {
    base.checked_pow(exp.try_into().map_err(|_| Error::Overflow("power"))?)
        .ok_or(Error::Overflow("power"))
}

/// Hyperplane and (d-2)-flat counts for k points on each of d-1 covering
/// lines in general position, split by how many covering lines the flat
/// contains.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PurdyCounts {
    pub d: usize,
    pub k: usize,
    #[serde(rename = "h")]
    pub h_by_j: BTreeMap<usize, u64>,
    #[serde(rename = "g")]
    pub g_by_j: BTreeMap<usize, u64>,
    pub h_total: u64,
    pub g_total: u64,
}

pub fn purdy_counts(d: usize, k: usize) -> Result<PurdyCounts> {
    if d < 4 {
        return Err(Error::InvalidParams(format!("d = {d}: d >= 4 required")));
    }
    if k < 2 {
        return Err(Error::InvalidParams(format!("k = {k}: k >= 2 required")));
    }
    let (dd, kk) = (d as u64, k as u64);
    let lines = dd - 1;
    let mut h_by_j = BTreeMap::new();
    for j in 1..=dd / 2 {
        // j lines inside, one point from each of d-2j others.
        let singles = dd - 2 * j;
        let v = binomial(lines, j)?
            .checked_mul(binomial(lines - j, singles)?)
            .and_then(|x| x.checked_mul(pow(kk, singles).ok()?))
            .ok_or(Error::Overflow("h_j"))?;
        h_by_j.insert(j as usize, v);
    }
    let mut g_by_j = BTreeMap::new();
    for j in 0..=(dd - 1) / 2 {
        let singles = dd - 1 - 2 * j;
        let v = binomial(lines, j)?
            .checked_mul(binomial(lines - j, singles)?)
            .and_then(|x| x.checked_mul(pow(kk, singles).ok()?))
            .ok_or(Error::Overflow("g_j"))?;
        g_by_j.insert(j as usize, v);
    }
    let sum = |m: &BTreeMap<usize, u64>, what| {
        m.values()
            .try_fold(0u64, |acc, &v| acc.checked_add(v))
            .ok_or(Error::Overflow(what))
    };
    Ok(PurdyCounts {
        d,
        k,
        h_total: sum(&h_by_j, "h_total")?,
        g_total: sum(&g_by_j, "g_total")?,
        h_by_j,
        g_by_j,
    })
}

/// Smallest k >= 2 for which the configuration spans more (d-2)-flats than
/// hyperplanes.
pub fn purdy_crossover(d: usize) -> Result<usize> {
    let mut k = 2;
    loop {
        let c = purdy_counts(d, k)?;
        if c.g_total > c.h_total {
            return Ok(k);
        }
        k += 1;
    }
}

/// Integer thresholds of the pigeonhole lemma for `k` containers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PigeonholeThresholds {
    pub k: u64,
    /// ⌈c·k^a⌉
    pub objects_required: u64,
    /// ⌊k^(a-1)⌋, the largest legal container load.
    pub container_cap: u64,
    /// ⌊c·k^(a-1)/2⌋
    pub min_load: u64,
}

/// `x^q` compared against `k^p` for a rational exponent `p/q`, done exactly.
fn pow_rational(x: &Rational, q: u32) -> Rational {
    num_traits::pow(x.clone(), q as usize)
}

fn k_pow(k: u64, p: &BigInt) -> Rational {
    let base = Rational::from_integer(BigInt::from(k));
    let e = p.abs().to_usize().expect("small exponent");
    let v = num_traits::pow(base, e);
    if p.is_negative() {
        v.recip()
    } else {
        v
    }
}

/// Smallest integer N >= 0 with N >= scale·k^(p/q).
fn ceil_scaled_root(scale: &Rational, k: u64, p: &BigInt, q: u32) -> u64 {
    let target = k_pow(k, p);
    let ok = |n: u64| pow_rational(&(Rational::from_integer(n.into()) / scale), q) >= target;
    let est = scale.to_f64().unwrap_or(0.0) * (k as f64).powf(p.to_f64().unwrap() / q as f64);
    let mut n = est.max(0.0).floor() as u64;
    while !ok(n) {
        n += 1;
    }
    while n > 0 && ok(n - 1) {
        n -= 1;
    }
    n
}

/// Largest integer F >= 0 with F <= scale·k^(p/q).
fn floor_scaled_root(scale: &Rational, k: u64, p: &BigInt, q: u32) -> u64 {
    let target = k_pow(k, p);
    let ok = |f: u64| pow_rational(&(Rational::from_integer(f.into()) / scale), q) <= target;
    let est = scale.to_f64().unwrap_or(0.0) * (k as f64).powf(p.to_f64().unwrap() / q as f64);
    let mut f = est.max(0.0).floor() as u64;
    while f > 0 && !ok(f) {
        f -= 1;
    }
    while ok(f + 1) {
        f += 1;
    }
    f
}

fn check_pigeonhole_params(k: usize, c: &Rational, a: &Rational) -> Result<(BigInt, u32)> {
    if k == 0 {
        return Err(Error::Precondition("no containers".into()));
    }
    if !c.is_positive() || *c > Rational::one() {
        return Err(Error::Precondition(format!("c = {c} outside (0, 1]")));
    }
    if !a.is_positive() {
        return Err(Error::Precondition(format!("a = {a} must be positive")));
    }
    let q =
        a.denom().to_u32().filter(|&q| q <= 64).ok_or_else(|| {
            Error::Precondition(format!("exponent {a} has too large a denominator"))
        })?;
    Ok((a.numer().clone(), q))
}

pub fn pigeonhole_thresholds(k: usize, c: &Rational, a: &Rational) -> Result<PigeonholeThresholds> {
    let (p, q) = check_pigeonhole_params(k, c, a)?;
    let kk = k as u64;
    let p_minus_q = &p - BigInt::from(q);
    let half_c = c / Rational::from_integer(2.into());
    Ok(PigeonholeThresholds {
        k: kk,
        objects_required: ceil_scaled_root(c, kk, &p, q),
        container_cap: floor_scaled_root(&Rational::one(), kk, &p_minus_q, q),
        min_load: floor_scaled_root(&half_c, kk, &p_minus_q, q),
    })
}

/// Checks the conclusion of the modified pigeonhole principle: at least
/// `c·k/2` of the `k` containers hold at least `⌊c·k^(a-1)/2⌋` objects.
///
/// Fails with [`Error::Precondition`] when the allocation does not satisfy
/// the lemma's hypotheses (too few objects, or an overfull container).
pub fn pigeonhole_check(allocation: &[u64], c: &Rational, a: &Rational) -> Result<bool> {
    let t = pigeonhole_thresholds(allocation.len(), c, a)?;
    let total: u64 = allocation.iter().sum();
    if total < t.objects_required {
        return Err(Error::Precondition(format!(
            "{total} objects, at least {} required",
            t.objects_required
        )));
    }
    if let Some(i) = allocation.iter().position(|&x| x > t.container_cap) {
        return Err(Error::Precondition(format!(
            "container {i} holds {} > cap {}",
            allocation[i], t.container_cap
        )));
    }
    let full = allocation.iter().filter(|&&x| x >= t.min_load).count();
    // full >= c·k/2
    Ok(Rational::from_integer((2 * full).into()) >= c * Rational::from_integer(t.k.into()))
}

/// Number of points in the configuration: k on each of d-1 lines.
pub fn purdy_point_count(d: usize, k: usize) -> usize {
    k * (d - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{int, rational};

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2).unwrap(), 10);
        assert_eq!(binomial(3, 4).unwrap(), 0);
        assert_eq!(binomial(0, 0).unwrap(), 1);
        assert_eq!(binomial(60, 30).unwrap(), 118264581564861424);
    }

    #[test]
    fn counts_d4_k2() {
        let c = purdy_counts(4, 2).unwrap();
        assert_eq!(c.h_by_j, BTreeMap::from([(1, 12), (2, 3)]));
        assert_eq!(c.g_by_j, BTreeMap::from([(0, 8), (1, 12)]));
        assert_eq!((c.h_total, c.g_total), (15, 20));
    }

    #[test]
    fn counts_d4_k3() {
        let c = purdy_counts(4, 3).unwrap();
        assert_eq!(c.h_by_j, BTreeMap::from([(1, 27), (2, 3)]));
        assert_eq!(c.g_by_j, BTreeMap::from([(0, 27), (1, 18)]));
        assert_eq!((c.h_total, c.g_total), (30, 45));
    }

    #[test]
    fn counts_d5_k2() {
        let c = purdy_counts(5, 2).unwrap();
        assert_eq!(c.h_by_j, BTreeMap::from([(1, 32), (2, 24)]));
        assert_eq!(c.g_by_j, BTreeMap::from([(0, 16), (1, 48), (2, 6)]));
        assert_eq!((c.h_total, c.g_total), (56, 70));
    }

    #[test]
    fn counts_reject_small_parameters() {
        assert!(purdy_counts(3, 2).is_err());
        assert!(purdy_counts(4, 1)
            .unwrap_err()
            .to_string()
            .contains("k >= 2"));
    }

    #[test]
    fn counts_json_shape() {
        let v = serde_json::to_value(purdy_counts(4, 2).unwrap()).unwrap();
        assert_eq!(v["h"]["1"], 12);
        assert_eq!(v["g"]["0"], 8);
        assert_eq!(v["h_total"], 15);
    }

    #[test]
    fn crossover() {
        assert_eq!(purdy_crossover(4).unwrap(), 2);
        assert_eq!(purdy_crossover(5).unwrap(), 2);
        for d in 4..=9 {
            let k = purdy_crossover(d).unwrap();
            let c = purdy_counts(d, k).unwrap();
            assert!(c.g_total > c.h_total);
            if k > 2 {
                let prev = purdy_counts(d, k - 1).unwrap();
                assert!(prev.g_total <= prev.h_total);
            }
        }
    }

    #[test]
    fn thresholds_integer_exponent() {
        let t = pigeonhole_thresholds(4, &int(1), &int(2)).unwrap();
        assert_eq!(
            (t.objects_required, t.container_cap, t.min_load),
            (16, 4, 2)
        );
        let t = pigeonhole_thresholds(4, &rational(1, 2), &int(2)).unwrap();
        assert_eq!((t.objects_required, t.container_cap, t.min_load), (8, 4, 1));
    }

    #[test]
    fn thresholds_fractional_exponent() {
        // 5^1.5 = 11.18..., 5^0.5 = 2.236...
        let t = pigeonhole_thresholds(5, &int(1), &rational(3, 2)).unwrap();
        assert_eq!(
            (t.objects_required, t.container_cap, t.min_load),
            (12, 2, 1)
        );
        // 4^1.5 = 8 exactly.
        let t = pigeonhole_thresholds(4, &rational(1, 4), &rational(3, 2)).unwrap();
        assert_eq!((t.objects_required, t.container_cap, t.min_load), (2, 2, 0));
    }

    #[test]
    fn pigeonhole_examples() {
        assert!(pigeonhole_check(&[4, 4, 4, 4], &int(1), &int(2)).unwrap());
        assert!(pigeonhole_check(&[4, 4, 0, 0], &rational(1, 2), &int(2)).unwrap());
    }

    #[test]
    fn pigeonhole_preconditions() {
        assert!(matches!(
            pigeonhole_check(&[1, 1, 1, 1], &int(1), &int(2)),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            pigeonhole_check(&[16, 0, 0, 0], &int(1), &int(2)),
            Err(Error::Precondition(_))
        ));
        assert!(pigeonhole_check(&[4], &int(2), &int(2)).is_err());
        assert!(pigeonhole_check(&[], &int(1), &int(2)).is_err());
    }
}
