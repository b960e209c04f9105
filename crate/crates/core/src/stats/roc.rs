use serde::{Deserialize, Serialize};

use crate::error::{DepthError, Result};
use crate::sample::check_dim;

use super::quality::rank_bounds;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocResult {
    pub auroc: f64,
    pub positives: usize,
    pub negatives: usize,
}

/// Area under the ROC curve in Mann-Whitney form:
/// `P(score_pos > score_neg) + P(score_pos == score_neg) / 2`.
/// Label `1` marks a positive (anomaly).
pub fn auroc(scores: &[f64], labels: &[u8]) -> Result<RocResult> {
    check_dim(scores.len(), labels.len())?;
    if let Some(i) = labels.iter().position(|&l| l > 1) {
        return Err(DepthError::InvalidParameter(format!("label at index {i} is not 0 or 1")));
    }
    if let Some(i) = scores.iter().position(|s| s.is_nan()) {
        return Err(DepthError::InvalidParameter(format!("score at index {i} is NaN")));
    }
    let mut negatives: Vec<f64> = scores.iter().zip(labels).filter(|(_, &l)| l == 0).map(|(s, _)| *s).collect();
    let positives: Vec<f64> = scores.iter().zip(labels).filter(|(_, &l)| l == 1).map(|(s, _)| *s).collect();
    if positives.is_empty() || negatives.is_empty() {
        return Err(DepthError::SingleClass {
            positives: positives.len(),
            negatives: negatives.len(),
        });
    }
    negatives.sort_by(f64::total_cmp);
    // Twice the Mann-Whitney count, an exact integer.
    let mut doubled: u64 = 0;
    for &p in &positives {
        let (below, at_most) = rank_bounds(&negatives, p);
        doubled += 2 * below as u64 + (at_most - below) as u64;
    }
    let pairs = positives.len() as f64 * negatives.len() as f64;
    Ok(RocResult {
        auroc: doubled as f64 / (2.0 * pairs),
        positives: positives.len(),
        negatives: negatives.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_examples() {
        assert_eq!(auroc(&[0.9, 0.8, 0.1, 0.2], &[1, 1, 0, 0]).unwrap().auroc, 1.0);
        assert_eq!(auroc(&[0.5; 5], &[1, 0, 1, 0, 0]).unwrap().auroc, 0.5);
        let r = auroc(&[0.9, 0.8, 0.7, 0.6], &[1, 0, 1, 0]).unwrap();
        assert_eq!(r.auroc, 0.75);
        assert_eq!((r.positives, r.negatives), (2, 2));
    }

    #[test]
    fn error_paths() {
        assert!(matches!(auroc(&[0.1, 0.2], &[1, 1]), Err(DepthError::SingleClass { .. })));
        assert!(auroc(&[0.1, 0.2], &[1, 2]).is_err());
        assert!(auroc(&[0.1], &[1, 0]).is_err());
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn scored() -> impl Strategy<Value = (Vec<f64>, Vec<u8>)> {
        (2usize..40).prop_flat_map(|n| {
            (
                proptest::collection::vec((0i32..10).prop_map(f64::from), n),
                proptest::collection::vec(0u8..2, n),
            )
        })
    }

    proptest! {
        #[test]
        fn monotone_maps_and_label_flip((scores, labels) in scored()) {
            let Ok(base) = auroc(&scores, &labels) else { return Ok(()); };
            let mapped: Vec<f64> = scores.iter().map(|s| (s * 0.3).exp()).collect();
            prop_assert_eq!(base.auroc, auroc(&mapped, &labels).unwrap().auroc);
            let flipped: Vec<u8> = labels.iter().map(|l| 1 - l).collect();
            let other = auroc(&scores, &flipped).unwrap().auroc;
            prop_assert!((base.auroc + other - 1.0).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&base.auroc));
        }
    }
}
