//! Hartigan's dip test of unimodality with Monte Carlo calibration under the
//! uniform null.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest sample the dip test accepts.
pub const MIN_SAMPLE: usize = 4;
/// Bootstrap replicates used when no count is given.
pub const DEFAULT_BOOTSTRAP: usize = 100;

/// Finite observations stored in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    values: Vec<f64>,
}

impl Sample {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("sample is empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("sample contains a non-finite value"));
        }
        values.sort_by(f64::total_cmp);
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModalityVerdict {
    /// Dip of the observed sample.
    pub statistic: f64,
    /// `(1 + #{replicate dip ≥ statistic}) / (n_boot + 1)`.
    pub p_value: f64,
    pub n_boot: usize,
    pub seed: u64,
}

/// Dip of a sorted sample: the sup-distance between its empirical CDF and
/// the nearest unimodal CDF, in `[1/(2n), 1/4]`.
pub fn dip_statistic(sample: &Sample) -> Result<f64> {
    let n = sample.len();
    if n < MIN_SAMPLE {
        return Err(Error::domain(format!(
            "dip test needs at least {MIN_SAMPLE} values, got {n}"
        )));
    }
    Ok(dip_sorted(&sample.values))
}

/// Hartigan & Hartigan's sweep over greatest convex minorant and least
/// concave majorant fits. Distances are tracked in units of `1/(2n)` until
/// the final division. Index 0 of the work arrays is unused.
fn dip_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    let mut x = Vec::with_capacity(n + 1);
    x.push(0.0);
    x.extend_from_slice(sorted);

    let mut dip = 1.0;
    if n < 2 || x[n] == x[1] {
        return dip / (2 * n) as f64;
    }

    // Predecessors on the convex minorant.
    let mut mn = vec![0usize; n + 1];
    mn[1] = 1;
    for j in 2..=n {
        mn[j] = j - 1;
        loop {
            let mnj = mn[j];
            let mnmnj = mn[mnj];
            let lhs = (x[j] - x[mnj]) * (mnj as f64 - mnmnj as f64);
            let rhs = (x[mnj] - x[mnmnj]) * (j as f64 - mnj as f64);
            if mnj == 1 || lhs < rhs {
                break;
            }
            mn[j] = mnmnj;
        }
    }

    // Successors on the concave majorant.
    let mut mj = vec![0usize; n + 1];
    mj[n] = n;
    for k in (1..n).rev() {
        mj[k] = k + 1;
        loop {
            let mjk = mj[k];
            let mjmjk = mj[mjk];
            let lhs = (x[k] - x[mjk]) * (mjk as f64 - mjmjk as f64);
            let rhs = (x[mjk] - x[mjmjk]) * (k as f64 - mjk as f64);
            if mjk == n || lhs < rhs {
                break;
            }
            mj[k] = mjmjk;
        }
    }

    let mut gcm = vec![0usize; n + 2];
    let mut lcm = vec![0usize; n + 2];
    let mut low = 1usize;
    let mut high = n;

    loop {
        // Convex minorant knots from high down to low.
        let mut ic = 1;
        gcm[1] = high;
        while gcm[ic] > low {
            gcm[ic + 1] = mn[gcm[ic]];
            ic += 1;
        }
        let l_gcm = ic;
        let mut ix = ic - 1;
        let mut ig = l_gcm;

        // Concave majorant knots from low up to high.
        ic = 1;
        lcm[1] = low;
        while lcm[ic] < high {
            lcm[ic + 1] = mj[lcm[ic]];
            ic += 1;
        }
        let l_lcm = ic;
        let mut iv = 1;
        let mut ih = l_lcm;

        // Largest vertical gap between the two fits over [low, high].
        let mut d = 0.0;
        if l_gcm != 2 || l_lcm != 2 {
            loop {
                let gcmix = gcm[ix];
                let lcmiv = lcm[iv];
                if gcmix > lcmiv {
                    let gcmi1 = gcm[ix + 1];
                    let dx = (lcmiv as f64 - gcmi1 as f64 + 1.0)
                        - (x[lcmiv] - x[gcmi1]) * (gcmix - gcmi1) as f64 / (x[gcmix] - x[gcmi1]);
                    iv += 1;
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv - 1;
                    }
                } else {
                    let lcmiv1 = lcm[iv - 1];
                    let dx = (x[gcmix] - x[lcmiv1]) * (lcmiv - lcmiv1) as f64 / (x[lcmiv] - x[lcmiv1])
                        - (gcmix as f64 - lcmiv1 as f64 - 1.0);
                    ix -= 1;
                    if dx >= d {
                        d = dx;
                        ig = ix + 1;
                        ih = iv;
                    }
                }
                if ix < 1 {
                    ix = 1;
                }
                if iv > l_lcm {
                    iv = l_lcm;
                }
                if gcm[ix] == lcm[iv] {
                    break;
                }
            }
        } else {
            d = 1.0;
        }

        if d < dip {
            break;
        }

        // Dip of the convex minorant on the left of the modal interval.
        let mut dip_l: f64 = 0.0;
        for j in ig..l_gcm {
            let mut max_t: f64 = 1.0;
            let (jb, je) = (gcm[j + 1], gcm[j]);
            if je - jb > 1 && x[je] != x[jb] {
                let slope = (je - jb) as f64 / (x[je] - x[jb]);
                for jj in jb..=je {
                    let t = (jj - jb + 1) as f64 - (x[jj] - x[jb]) * slope;
                    max_t = max_t.max(t);
                }
            }
            dip_l = dip_l.max(max_t);
        }

        // Dip of the concave majorant on the right.
        let mut dip_u: f64 = 0.0;
        for j in ih..l_lcm {
            let mut max_t: f64 = 1.0;
            let (jb, je) = (lcm[j], lcm[j + 1]);
            if je - jb > 1 && x[je] != x[jb] {
                let slope = (je - jb) as f64 / (x[je] - x[jb]);
                for jj in jb..=je {
                    let t = (x[jj] - x[jb]) * slope - (jj as f64 - jb as f64 - 1.0);
                    max_t = max_t.max(t);
                }
            }
            dip_u = dip_u.max(max_t);
        }

        dip = dip.max(dip_l.max(dip_u));

        if low == gcm[ig] && high == lcm[ih] {
            break;
        }
        low = gcm[ig];
        high = lcm[ih];
    }

    dip / (2 * n) as f64
}

/// Dip of a uniform sample of size `n` drawn from stream `replicate` of `seed`.
fn null_replicate(n: usize, seed: u64, replicate: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    let mut draws: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    draws.sort_by(f64::total_cmp);
    dip_sorted(&draws)
}

/// Dip test calibrated by `n_boot` uniform-null replicates.
///
/// Replicate `b` uses ChaCha8 stream `b` of `seed`, so the verdict does not
/// depend on how replicates are scheduled across threads.
pub fn modality_pvalue(sample: &Sample, n_boot: usize, seed: u64) -> Result<ModalityVerdict> {
    if n_boot == 0 {
        return Err(Error::domain("n_boot must be at least 1"));
    }
    let statistic = dip_statistic(sample)?;
    let n = sample.len();
    let exceed = (0..n_boot as u64)
        .into_par_iter()
        .filter(|&b| null_replicate(n, seed, b) >= statistic)
        .count();
    Ok(ModalityVerdict {
        statistic,
        p_value: (1 + exceed) as f64 / (n_boot + 1) as f64,
        n_boot,
        seed,
    })
}
