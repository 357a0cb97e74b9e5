use num_traits::ToPrimitive;

use crate::asymptotics::{IndexSequence, SampleOptions};
use crate::error::{Error, Result};
use crate::nset::SymbolicSet;
use crate::perm::{
    image_prefix_counts, levy_defect_profile, levy_witness_set, preimage_reach, Classification, DefectMode,
    PermutationRule, Thresholds,
};
use crate::{ratio, Nat, Rat};

/// Evidence that some density measure is not invariant under π: a set A and
/// points `n_k` along which `(A(n) − (πA)(n))/n` stays at least `gap`.
#[derive(Clone, Debug, PartialEq)]
pub struct ViolationCertificate {
    pub permutation: PermutationRule,
    /// `{k : π(k) > k}`, enumerable up to the largest preimage of the horizon.
    pub witness: SymbolicSet,
    /// Strict local maxima of the defect, the last few before the horizon.
    pub subsequence: IndexSequence,
    /// `(A(n) − (πA)(n))/n` at each subsequence point; equal to the defect there.
    pub profile: Vec<Rat>,
    /// Smallest value of `profile`.
    pub gap: Rat,
    pub horizon: u64,
}

/// Number of defect peaks kept in a certificate.
const PEAKS: usize = 3;

/// Builds a violation certificate for a permutation classified NonLevyLikely
/// on `[1, horizon]`.
pub fn find_invariance_violation(
    pi: &PermutationRule,
    horizon: u64,
    thresholds: &Thresholds,
    opts: &SampleOptions,
) -> Result<ViolationCertificate> {
    let seq = IndexSequence::all(horizon)?;
    let profile = levy_defect_profile(pi, &seq, DefectMode::Downward, thresholds, opts)?;
    if profile.classification != Classification::NonLevyLikely {
        return Err(Error::NoViolationFound { tail_max: profile.tail_max.to_string() });
    }
    let d = &profile.defects;
    let mut peaks: Vec<usize> = (1..d.len().saturating_sub(1))
        .filter(|&i| d[i] > d[i - 1] && d[i] >= d[i + 1] && d[i] >= thresholds.non_levy)
        .collect();
    if peaks.len() < PEAKS {
        return Err(Error::NoViolationFound { tail_max: profile.tail_max.to_string() });
    }
    let peaks = peaks.split_off(peaks.len() - PEAKS);
    let points: Vec<Nat> = peaks.iter().map(|&i| profile.points[i].clone()).collect();
    let cap = preimage_reach(pi, horizon, &opts.eval)?;
    let witness = levy_witness_set(pi, cap, &opts.eval)?;
    let top = points.last().expect("nonempty").to_u64().expect("within horizon");
    let images = image_prefix_counts(pi, &witness, top, &opts.eval)?;
    let mut values = Vec::with_capacity(points.len());
    for (n, &i) in points.iter().zip(&peaks) {
        let k = n.to_usize().expect("within horizon");
        let c = witness.count_with(n, opts.eval.enumeration_budget)?;
        let shift = c - Nat::from(images[k]);
        if shift != profile.counts[i] {
            return Err(Error::InvalidPermutation(format!(
                "witness displacement {shift} differs from defect {} at {n}; the rule is not a bijection",
                profile.counts[i]
            )));
        }
        values.push(ratio(&shift, n));
    }
    let gap = values.iter().min().cloned().expect("nonempty");
    Ok(ViolationCertificate {
        permutation: pi.clone(),
        witness,
        subsequence: IndexSequence::explicit(points)?,
        profile: values,
        gap,
        horizon,
    })
}

/// Largest `max(m, π⁻¹(m))` over `m ≤ horizon`.
impl ViolationCertificate {
    /// Recounts `A(n)` and `(πA)(n)` by direct scans at every subsequence
    /// point and checks them against the stored profile and gap.
    pub fn verify(&self) -> Result<bool> {
        let points = self.subsequence.points()?;
        let mut values = Vec::with_capacity(points.len());
        for n in &points {
            let top = n.to_u64().ok_or_else(|| Error::InvalidArgument("point beyond u64".into()))?;
            let mut in_set = 0u64;
            let mut in_image = 0u64;
            let mut defect = 0u64;
            for k in 1..=top {
                let x = Nat::from(k);
                let up = self.permutation.apply(&x)?;
                in_set += (up > x) as u64;
                defect += (up > *n) as u64;
                in_image += self.witness.contains(&self.permutation.invert(&x)?)? as u64;
            }
            if in_set < in_image || in_set - in_image != defect {
                return Ok(false);
            }
            values.push(ratio(&Nat::from(in_set - in_image), n));
        }
        Ok(values == self.profile && values.iter().min() == Some(&self.gap))
    }
}
