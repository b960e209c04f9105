//! Spearman and Kendall (tau-b) rank correlations with tie handling.
//!
//! Ranks are kept doubled so every intermediate quantity is an integer held
//! exactly in an `f64`; results therefore do not depend on summation order.

use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};
use crate::sample::check_dim;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RankCorrelationResult {
    pub spearman: f64,
    pub kendall_tau: f64,
}

fn check_pair(a: &[f64], b: &[f64]) -> Result<()> {
    check_dim(a.len(), b.len())?;
    if a.len() < 2 {
        return Err(DepthError::InvalidParameter(format!(
            "rank correlation needs at least 2 observations, got {}",
            a.len()
        )));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(DepthError::InvalidParameter("rank correlation input contains NaN".into()));
    }
    Ok(())
}

/// Twice the average (1-based) rank of every element.
pub(crate) fn doubled_ranks(values: &[f64]) -> Vec<u64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0u64; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end share the rank (start + 1 + end) / 2.
        let doubled = (start + 1 + end) as u64;
        for &i in &order[start..end] {
            ranks[i] = doubled;
        }
        start = end;
    }
    ranks
}

/// Pearson correlation of average ranks.
pub fn spearman(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b)?;
    let n = a.len() as i64;
    let ra = doubled_ranks(a);
    let rb = doubled_ranks(b);
    // Centred doubled ranks: 2 r - (n + 1).
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (&x, &y) in ra.iter().zip(&rb) {
        let cx = (x as i64 - (n + 1)) as f64;
        let cy = (y as i64 - (n + 1)) as f64;
        sab += cx * cy;
        saa += cx * cx;
        sbb += cy * cy;
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(DepthError::ConstantData("rank variance is zero".into()));
    }
    Ok((sab / (saa * sbb).sqrt()).clamp(-1.0, 1.0))
}

/// Kendall tau-b: `(C - D) / sqrt(P_a P_b)` where `P_a`, `P_b` count pairs
/// untied in each argument.
pub fn kendall_tau(a: &[f64], b: &[f64]) -> Result<f64> {
    check_pair(a, b)?;
    let n = a.len();
    let (mut concordant, mut discordant) = (0i64, 0i64);
    let (mut untied_a, mut untied_b) = (0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let da = a[i].total_cmp(&a[j]) as i64;
            let db = b[i].total_cmp(&b[j]) as i64;
            let (da, db) = (if a[i] == a[j] { 0 } else { da }, if b[i] == b[j] { 0 } else { db });
            untied_a += (da != 0) as i64;
            untied_b += (db != 0) as i64;
            match da * db {
                1 => concordant += 1,
                -1 => discordant += 1,
                _ => {}
            }
        }
    }
    if untied_a == 0 || untied_b == 0 {
        return Err(DepthError::ConstantData("all pairs tied".into()));
    }
    let tau = (concordant - discordant) as f64 / ((untied_a as f64) * (untied_b as f64)).sqrt();
    Ok(tau.clamp(-1.0, 1.0))
}

pub fn rank_correlations(a: &[f64], b: &[f64]) -> Result<RankCorrelationResult> {
    Ok(RankCorrelationResult {
        spearman: spearman(a, b)?,
        kendall_tau: kendall_tau(a, b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_examples() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [1.0, 3.0, 2.0, 4.0];
        assert_eq!(spearman(&a, &b).unwrap(), 0.8);
        assert!((kendall_tau(&a, &b).unwrap() - 4.0 / 6.0).abs() < 1e-15);
        let rev = [4.0, 3.0, 2.0, 1.0];
        assert_eq!(spearman(&a, &rev).unwrap(), -1.0);
        assert_eq!(kendall_tau(&a, &rev).unwrap(), -1.0);
        let r = rank_correlations(&[0.3, -1.2, 8.0, 2.5], &[0.3, -1.2, 8.0, 2.5]).unwrap();
        assert_eq!((r.spearman, r.kendall_tau), (1.0, 1.0));
    }

    #[test]
    fn average_ranks_for_ties() {
        assert_eq!(doubled_ranks(&[10.0, 20.0, 10.0, 5.0]), vec![5, 8, 5, 2]);
    }

    #[test]
    fn error_paths() {
        assert!(spearman(&[1.0, 2.0], &[1.0]).is_err());
        assert!(spearman(&[1.0], &[1.0]).is_err());
        assert!(matches!(spearman(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(DepthError::ConstantData(_))));
        assert!(kendall_tau(&[1.0, 2.0, 3.0], &[2.0, 2.0, 2.0]).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn pairs() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
        (2usize..30).prop_flat_map(|n| {
            (
                proptest::collection::vec((-20i32..20).prop_map(|v| v as f64 * 0.5), n),
                proptest::collection::vec((-20i32..20).prop_map(|v| v as f64 * 0.5), n),
            )
        })
    }

    proptest! {
        #[test]
        fn invariant_under_increasing_maps((a, b) in pairs()) {
            let mapped: Vec<f64> = a.iter().map(|v| v.powi(3) + 2.0 * v).collect();
            prop_assert_eq!(spearman(&a, &b).ok(), spearman(&mapped, &b).ok());
            prop_assert_eq!(kendall_tau(&a, &b).ok(), kendall_tau(&mapped, &b).ok());
        }

        #[test]
        fn negation_flips_sign((a, b) in pairs()) {
            let neg: Vec<f64> = a.iter().map(|v| -v).collect();
            if let (Ok(s), Ok(t)) = (spearman(&a, &b), spearman(&neg, &b)) {
                prop_assert!((s + t).abs() < 1e-12);
            }
            if let (Ok(s), Ok(t)) = (kendall_tau(&a, &b), kendall_tau(&neg, &b)) {
                prop_assert!((s + t).abs() < 1e-12);
            }
        }

        #[test]
        fn symmetric_and_bounded((a, b) in pairs()) {
            if let Ok(s) = spearman(&a, &b) {
                prop_assert_eq!(Ok(s), spearman(&b, &a).map_err(|_| ()));
                prop_assert!((-1.0..=1.0).contains(&s));
            }
            if let Ok(t) = kendall_tau(&a, &b) {
                prop_assert_eq!(Ok(t), kendall_tau(&b, &a).map_err(|_| ()));
            }
        }
    }
}
