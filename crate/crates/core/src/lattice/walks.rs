use std::fmt;
use std::str::FromStr;

use super::{LatticeError, MomentVariant, MomentVector};

/// Constraint classes of ±1 walks started at height zero.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
#[serde(rename_all = "kebab-case")]
pub enum WalkModel {
    /// No constraint.
    Bernoulli,
    /// Never below zero.
    Meander,
    /// Never below zero and ends at zero.
    Dyck,
    /// Ends at zero.
    BilateralDyck,
}

impl WalkModel {
    pub const ALL: [WalkModel; 4] = [
        WalkModel::Dyck,
        WalkModel::BilateralDyck,
        WalkModel::Meander,
        WalkModel::Bernoulli,
    ];

    pub fn admits(self, walk: &Walk) -> bool {
        let mut h = 0i64;
        let mut min = 0i64;
        for &up in &walk.steps {
            h += if up { 1 } else { -1 };
            min = min.min(h);
        }
        match self {
            WalkModel::Bernoulli => true,
            WalkModel::Meander => min >= 0,
            WalkModel::Dyck => min >= 0 && h == 0,
            WalkModel::BilateralDyck => h == 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            WalkModel::Bernoulli => "bernoulli",
            WalkModel::Meander => "meander",
            WalkModel::Dyck => "dyck",
            WalkModel::BilateralDyck => "bilateral-dyck",
        }
    }
}

/// A walk with unit steps `u = +1`, `d = -1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Walk {
    steps: Vec<bool>,
}

impl Walk {
    pub fn new(steps: Vec<bool>) -> Self {
        Self { steps }
    }

    pub fn steps(&self) -> &[bool] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Heights at positions `0..=len`.
    pub fn heights(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        let mut h = 0i64;
        out.push(h);
        for &up in &self.steps {
            h += if up { 1 } else { -1 };
            out.push(h);
        }
        out
    }

    /// `values[0]` is the length; `values[k] = Σ_{s=0..=len} |h(s)|^k` for `k ≥ 1`.
    pub fn height_moments(&self, kmax: usize) -> MomentVector {
        let mut values = vec![0u64; kmax + 1];
        values[0] = self.len() as u64;
        for h in self.heights() {
            let a = h.unsigned_abs();
            let mut p = a;
            for v in values.iter_mut().skip(1) {
                *v += p;
                p *= a;
            }
        }
        MomentVector::new(MomentVariant::Exact, values)
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &up in &self.steps {
            f.write_str(if up { "u" } else { "d" })?;
        }
        Ok(())
    }
}

impl FromStr for Walk {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                'u' => Ok(true),
                'd' => Ok(false),
                other => Err(LatticeError::InvalidStep(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Walk::new)
    }
}

/// A walk that stays non-negative and returns to zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyckPath(Walk);

impl DyckPath {
    pub fn new(steps: Vec<bool>) -> Result<Self, LatticeError> {
        let w = Walk::new(steps);
        if WalkModel::Dyck.admits(&w) {
            Ok(DyckPath(w))
        } else {
            Err(LatticeError::InvalidDyck)
        }
    }

    pub(crate) fn new_unchecked(steps: Vec<bool>) -> Self {
        let w = Walk::new(steps);
        debug_assert!(WalkModel::Dyck.admits(&w));
        DyckPath(w)
    }

    pub fn walk(&self) -> &Walk {
        &self.0
    }

    pub fn semilength(&self) -> usize {
        self.0.len() / 2
    }

    /// Heights of the peaks and of the valleys between consecutive peaks.
    pub fn peaks_and_valleys(&self) -> (Vec<u32>, Vec<u32>) {
        let s = self.0.steps();
        let mut peaks = Vec::new();
        let mut valleys = Vec::new();
        let mut h = 0u32;
        for i in 0..s.len() {
            if s[i] {
                h += 1;
            } else {
                h -= 1;
            }
            if let Some(&next) = s.get(i + 1) {
                if s[i] && !next {
                    peaks.push(h);
                } else if !s[i] && next {
                    valleys.push(h);
                }
            } else if s[i] {
                peaks.push(h);
            }
        }
        (peaks, valleys)
    }
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for DyckPath {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let w: Walk = s.parse()?;
        DyckPath::new(w.steps)
    }
}
