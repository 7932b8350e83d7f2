//! SU_q(2) and O_N⁺ truncated to the irreps `0..=level`.
//!
//! Both share the SU(2) fusion rules `N^c_{ab} = 1` iff `|a−b| ≤ c ≤ a+b`
//! and `a+b+c` even; entries with `a+b > level` are flagged incomplete.

use std::collections::BTreeMap;

use crate::fusion_data::{FusionEntry, FusionTable, IrrepInfo, IrrepLabel, QuantumGroupData, DEFAULT_TOLERANCE};
use crate::{Error, Result};

fn label(k: usize) -> IrrepLabel {
    IrrepLabel::from(k.to_string())
}

fn clebsch_gordan_fusion(level: usize) -> FusionTable {
    let mut fusion = FusionTable::new();
    for a in 0..=level {
        for b in 0..=level {
            let lo = a.abs_diff(b);
            let hi = (a + b).min(level);
            let decomp: BTreeMap<IrrepLabel, u32> = (lo..=hi).step_by(2).map(|c| (label(c), 1)).collect();
            fusion.insert(
                label(a),
                label(b),
                FusionEntry {
                    decomp,
                    complete: a + b <= level,
                },
            );
        }
    }
    fusion
}

/// `(q^{−k}, q^{−k+2}, …, q^{k})`.
pub fn suq2_eigenvalues(q: f64, k: usize) -> Vec<f64> {
    (0..=k).map(|j| q.powi(2 * j as i32 - k as i32)).collect()
}

/// `[k+1]_q = (q^{k+1} − q^{−(k+1)})/(q − q^{−1})`, and `k+1` at `q = 1`.
pub fn q_integer(q: f64, k: usize) -> f64 {
    if q == 1.0 {
        return (k + 1) as f64;
    }
    let n = (k + 1) as i32;
    (q.powi(n) - q.powi(-n)) / (q - 1.0 / q)
}

/// SU_q(2) for `0 < q ≤ 1`, irreps `"0"…"level"` with `dim(k) = k+1`,
/// self-conjugate with index reversal as `σ`.
pub fn suq2_truncated(q: f64, level: usize) -> Result<QuantumGroupData> {
    if !(q.is_finite() && q > 0.0 && q <= 1.0) {
        return Err(Error::InvalidParameter(format!("q must lie in (0, 1], got {q}")));
    }
    let irreps = (0..=level)
        .map(|k| {
            (
                label(k),
                IrrepInfo {
                    dim: k + 1,
                    f_eigenvalues: suq2_eigenvalues(q, k),
                    conjugate: label(k),
                    conj_index_map: (0..=k).rev().collect(),
                },
            )
        })
        .collect();
    QuantumGroupData::new(
        format!("suq2(q={q},L={level})"),
        irreps,
        clebsch_gordan_fusion(level),
        DEFAULT_TOLERANCE,
    )
}

/// Dimensions `1, N, N²−1, …` from `n_{k+1} = N n_k − n_{k−1}`.
pub fn on_plus_dimensions(n: usize, level: usize) -> Result<Vec<usize>> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("O_N+ needs N >= 2, got {n}")));
    }
    let mut dims = vec![1usize];
    if level >= 1 {
        dims.push(n);
    }
    while dims.len() <= level {
        let k = dims.len();
        let next = n
            .checked_mul(dims[k - 1])
            .and_then(|x| x.checked_sub(dims[k - 2]))
            .ok_or_else(|| Error::InvalidParameter("irrep dimensions overflow".into()))?;
        dims.push(next);
    }
    Ok(dims)
}

/// O_N⁺ (Kac type, all eigenvalues 1, self-conjugate with `σ = id`).
pub fn on_plus_truncated(n: usize, level: usize) -> Result<QuantumGroupData> {
    let dims = on_plus_dimensions(n, level)?;
    let irreps = dims
        .iter()
        .enumerate()
        .map(|(k, &dim)| {
            (
                label(k),
                IrrepInfo {
                    dim,
                    f_eigenvalues: vec![1.0; dim],
                    conjugate: label(k),
                    conj_index_map: (0..dim).collect(),
                },
            )
        })
        .collect();
    QuantumGroupData::new(
        format!("onplus(N={n},L={level})"),
        irreps,
        clebsch_gordan_fusion(level),
        DEFAULT_TOLERANCE,
    )
}
