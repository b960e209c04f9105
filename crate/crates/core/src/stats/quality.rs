//! Depth-based quality index and the two-sample homogeneity test built on it.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use statrs::function::erf::erfc;

use crate::error::{DepthError, Result};
use crate::functional::DepthFunctional;
use crate::sample::{check_dim, QueryPoint, SampleSet};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityIndexResult {
    /// Fraction of pairs `(i, j)` with `depths_f[i] <= depths_g[j]`.
    pub q: f64,
    pub n: usize,
    pub m: usize,
    /// `(q - 1/2) / sqrt((1/n + 1/m) / 12)`.
    pub z_stat: f64,
    /// Two-sided standard-normal tail of `z_stat`.
    pub p_value: f64,
    /// Pairs with exactly equal depth (counted as satisfying `<=`).
    pub tie_pairs: u64,
}

fn sorted_finite(values: &[f64], what: &'static str) -> Result<Vec<f64>> {
    if values.is_empty() {
        return Err(DepthError::Empty(what));
    }
    if let Some(i) = values.iter().position(|v| v.is_nan()) {
        return Err(DepthError::InvalidParameter(format!("{what}: NaN at index {i}")));
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Number of elements of the sorted slice that are `< y` and `<= y`.
pub(crate) fn rank_bounds(sorted: &[f64], y: f64) -> (usize, usize) {
    (sorted.partition_point(|&v| v < y), sorted.partition_point(|&v| v <= y))
}

pub fn null_standard_error(n: usize, m: usize) -> f64 {
    ((1.0 / n as f64 + 1.0 / m as f64) / 12.0).sqrt()
}

/// Two-sided p-value of a standard-normal statistic.
pub fn two_sided_p_value(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

/// Empirical quality index from depths of the reference sample (`depths_f`)
/// and the comparison sample (`depths_g`), both measured against the
/// reference distribution.
pub fn quality_index(depths_f: &[f64], depths_g: &[f64]) -> Result<QualityIndexResult> {
    let f = sorted_finite(depths_f, "reference depths")?;
    sorted_finite(depths_g, "comparison depths")?;
    let (n, m) = (f.len(), depths_g.len());
    let mut satisfied: u64 = 0;
    let mut tie_pairs: u64 = 0;
    for &y in depths_g {
        let (below, at_most) = rank_bounds(&f, y);
        satisfied += at_most as u64;
        tie_pairs += (at_most - below) as u64;
    }
    let q = satisfied as f64 / (n as f64 * m as f64);
    let z_stat = (q - 0.5) / null_standard_error(n, m);
    Ok(QualityIndexResult {
        q,
        n,
        m,
        z_stat,
        p_value: two_sided_p_value(z_stat),
        tie_pairs,
    })
}

/// Two-sided critical value `Phi^{-1}(1 - level/2)`.
pub fn critical_value(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(DepthError::InvalidParameter(format!("level must lie in (0, 1), got {level}")));
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(1.0 - level / 2.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityOutcome {
    pub quality: QualityIndexResult,
    pub critical_value: f64,
    pub reject: bool,
}

/// Depth of every row, evaluated in parallel and returned in row order.
pub fn depths_of<D>(depth: &D, points: &SampleSet) -> Result<Vec<f64>>
where
    D: DepthFunctional + ?Sized,
{
    (0..points.n())
        .into_par_iter()
        .map(|i| {
            let z = QueryPoint::new(points.row(i).to_vec())?;
            depth.depth(&z).map_err(|e| DepthError::AtPoint {
                index: i,
                source: Box::new(e),
            })
        })
        .collect()
}

/// Tests whether `x` and `y` come from the same distribution. `depth` must be
/// fitted on `x`; both samples are scored against it and the quality index is
/// compared with 1/2 at the given two-sided level.
pub fn homogeneity_test<D>(x: &SampleSet, y: &SampleSet, depth: &D, level: f64) -> Result<HomogeneityOutcome>
where
    D: DepthFunctional + ?Sized,
{
    check_dim(x.d(), y.d())?;
    let critical = critical_value(level)?;
    let depths_x = depths_of(depth, x)?;
    let depths_y = depths_of(depth, y)?;
    let quality = quality_index(&depths_x, &depths_y)?;
    Ok(HomogeneityOutcome {
        reject: quality.z_stat.abs() > critical,
        critical_value: critical,
        quality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_examples() {
        assert_eq!(quality_index(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap().q, 1.0);
        assert_eq!(quality_index(&[1.0, 2.0, 3.0], &[0.0, 0.0, 0.0]).unwrap().q, 0.0);
        let r = quality_index(&[1.0, 2.0], &[1.0, 3.0]).unwrap();
        assert_eq!(r.q, 0.75);
        assert_eq!(r.tie_pairs, 1);
        assert!(quality_index(&[], &[1.0]).is_err());
        assert!(quality_index(&[1.0], &[]).is_err());
    }

    #[test]
    fn statistic_scaling() {
        let r = quality_index(&[1.0, 4.0], &[2.0, 3.0]).unwrap();
        assert_eq!(r.q, 0.5);
        assert_eq!(r.z_stat, 0.0);
        assert_eq!(r.p_value, 1.0);
        let se = null_standard_error(600, 600);
        assert!((se - 1.0 / 60.0).abs() < 1e-15);
        assert!(((0.6 - 0.5) / se - 6.0).abs() < 1e-12);
    }

    #[test]
    fn self_comparison_counts_self_ties() {
        for k in 1..=10 {
            let v: Vec<f64> = (0..k).map(|i| (i * 7 % 11) as f64).collect();
            let r = quality_index(&v, &v).unwrap();
            assert_eq!(r.q, (k as f64 + 1.0) / (2.0 * k as f64));
            assert_eq!(r.tie_pairs, k as u64);
        }
    }

    #[test]
    fn critical_values() {
        assert!((critical_value(0.05).unwrap() - 1.959963984540054).abs() < 1e-9);
        assert!(critical_value(0.0).is_err());
        assert!(critical_value(1.0).is_err());
        let p = two_sided_p_value(1.959963984540054);
        assert!((p - 0.05).abs() < 1e-10, "{p}");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn depths() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec((0i32..12).prop_map(|v| v as f64 / 12.0), 1..25)
    }

    proptest! {
        #[test]
        fn swapping_samples(f in depths(), g in depths()) {
            let fg = quality_index(&f, &g).unwrap();
            let gf = quality_index(&g, &f).unwrap();
            let pairs = (f.len() * g.len()) as f64;
            prop_assert_eq!(fg.tie_pairs, gf.tie_pairs);
            // Every pair satisfies one ordering, ties satisfy both.
            let total = (fg.q * pairs).round() + (gf.q * pairs).round();
            prop_assert_eq!(total, pairs + fg.tie_pairs as f64);
            if fg.tie_pairs == 0 {
                prop_assert!((fg.z_stat + gf.z_stat).abs() < 1e-9);
                prop_assert!((fg.p_value - gf.p_value).abs() < 1e-12);
            }
        }

        #[test]
        fn invariant_under_increasing_maps(f in depths(), g in depths()) {
            let map = |v: &[f64]| v.iter().map(|x| x.sqrt() * 3.0 - 1.0).collect::<Vec<_>>();
            prop_assert_eq!(quality_index(&f, &g).unwrap(), quality_index(&map(&f), &map(&g)).unwrap());
        }
    }
}
