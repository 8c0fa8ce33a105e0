use std::collections::BTreeMap;

use super::polygon::{LatticePolygon, Step};
use super::walks::DyckPath;
use super::{power_sums, LatticeError, MomentVariant, MomentVector};

/// Region between two up/right lattice paths that meet only at their ends.
///
/// `upper` starts with `U`, `lower` starts with `R`; both have length equal to
/// the half-perimeter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StaircasePolygon {
    upper: Vec<Step>,
    lower: Vec<Step>,
}

impl StaircasePolygon {
    pub fn new(upper: Vec<Step>, lower: Vec<Step>) -> Result<Self, LatticeError> {
        if upper.len() != lower.len() {
            return Err(LatticeError::InvalidStaircase("paths differ in length"));
        }
        if upper.len() < 2 {
            return Err(LatticeError::InvalidStaircase("half-perimeter below 2"));
        }
        if upper
            .iter()
            .chain(&lower)
            .any(|s| !matches!(s, Step::R | Step::U))
        {
            return Err(LatticeError::InvalidStaircase(
                "paths must use R and U only",
            ));
        }
        let (mut xu, mut xl) = (0i32, 0i32);
        let n = upper.len();
        for t in 0..n {
            xu += (upper[t] == Step::R) as i32;
            xl += (lower[t] == Step::R) as i32;
            let last = t + 1 == n;
            if (!last && xu >= xl) || (last && xu != xl) {
                return Err(LatticeError::InvalidStaircase("paths touch or cross"));
            }
        }
        Ok(Self { upper, lower })
    }

    pub(crate) fn from_paths_unchecked(upper: Vec<Step>, lower: Vec<Step>) -> Self {
        Self { upper, lower }
    }

    pub fn upper(&self) -> &[Step] {
        &self.upper
    }

    pub fn lower(&self) -> &[Step] {
        &self.lower
    }

    pub fn half_perimeter(&self) -> usize {
        self.upper.len()
    }

    pub fn width(&self) -> usize {
        self.upper.iter().filter(|&&s| s == Step::R).count()
    }

    pub fn height(&self) -> usize {
        self.half_perimeter() - self.width()
    }

    /// Half-open row intervals `[bottom, top)` of the columns, left to right.
    pub fn columns(&self) -> Vec<(u32, u32)> {
        fn levels(path: &[Step]) -> Vec<u32> {
            let mut y = 0;
            let mut out = Vec::new();
            for s in path {
                match s {
                    Step::U => y += 1,
                    _ => out.push(y),
                }
            }
            out
        }
        levels(&self.lower)
            .into_iter()
            .zip(levels(&self.upper))
            .collect()
    }

    /// Enclosed unit squares (lower-left corners).
    pub fn cells(&self) -> Vec<(u32, u32)> {
        self.columns()
            .into_iter()
            .enumerate()
            .flat_map(|(x, (b, t))| (b..t).map(move |y| (x as u32, y)))
            .collect()
    }

    pub fn area(&self) -> u64 {
        self.columns().iter().map(|(b, t)| (t - b) as u64).sum()
    }

    /// Number of squares on each negative diagonal `x + y = const`, in increasing order.
    pub fn diagonal_lengths(&self) -> Vec<u64> {
        let mut layers: BTreeMap<u32, u64> = BTreeMap::new();
        for (x, y) in self.cells() {
            *layers.entry(x + y).or_default() += 1;
        }
        layers.into_values().collect()
    }

    /// Boundary as a canonical lattice polygon: the lower path, then the upper path backwards.
    pub fn to_lattice_polygon(&self) -> LatticePolygon {
        let steps = self
            .lower
            .iter()
            .copied()
            .chain(self.upper.iter().rev().map(|s| s.reverse()))
            .collect();
        LatticePolygon::from_canonical(steps)
    }

    /// Mirror image in the line `y = x`.
    pub fn transpose(&self) -> StaircasePolygon {
        let swap = |p: &[Step]| -> Vec<Step> {
            p.iter()
                .map(|s| if *s == Step::R { Step::U } else { Step::R })
                .collect()
        };
        StaircasePolygon {
            upper: swap(&self.lower),
            lower: swap(&self.upper),
        }
    }

    /// Inverse of [`staircase_to_dyck`].
    pub fn from_dyck(path: &DyckPath) -> Result<StaircasePolygon, LatticeError> {
        let (peaks, valleys) = path.peaks_and_valleys();
        if peaks.is_empty() {
            return Err(LatticeError::InvalidDyck);
        }
        let mut columns = Vec::with_capacity(peaks.len());
        let (mut bottom, mut top) = (0u32, peaks[0]);
        columns.push((bottom, top));
        for (i, &v) in valleys.iter().enumerate() {
            bottom = top - v - 1;
            top = bottom + peaks[i + 1];
            columns.push((bottom, top));
        }
        Ok(Self::from_columns(&columns))
    }

    /// Builds the polygon whose columns have the given `[bottom, top)` intervals.
    /// The intervals must describe a staircase polygon.
    fn from_columns(columns: &[(u32, u32)]) -> StaircasePolygon {
        let mut upper = Vec::new();
        let mut lower = Vec::new();
        let (mut yu, mut yl) = (0u32, 0u32);
        for &(b, t) in columns {
            upper.extend(std::iter::repeat_n(Step::U, (t - yu) as usize));
            upper.push(Step::R);
            yu = t;
            lower.extend(std::iter::repeat_n(Step::U, (b - yl) as usize));
            lower.push(Step::R);
            yl = b;
        }
        lower.extend(std::iter::repeat_n(Step::U, (yu - yl) as usize));
        StaircasePolygon { upper, lower }
    }
}

/// `n_0 = ` number of negative diagonals, `n_k = Σ l(d)^k` over them.
pub fn diagonal_moments(p: &StaircasePolygon, kmax: usize) -> MomentVector {
    MomentVector::new(MomentVariant::Exact, power_sums(p.diagonal_lengths(), kmax))
}

/// Width, height and column height moments of a staircase polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMoments {
    pub width: usize,
    pub height: usize,
    /// `m_0 = width`, `m_k = Σ l(c)^k`.
    pub moments: MomentVector,
}

pub fn column_moments(p: &StaircasePolygon, kmax: usize) -> ColumnMoments {
    let heights = p.columns().into_iter().map(|(b, t)| (t - b) as u64);
    ColumnMoments {
        width: p.width(),
        height: p.height(),
        moments: MomentVector::new(MomentVariant::Exact, power_sums(heights, kmax)),
    }
}

/// Maps a staircase polygon to the Dyck path whose peak heights are its column
/// heights and whose valley heights are the column overlaps minus one.
pub fn staircase_to_dyck(p: &StaircasePolygon) -> DyckPath {
    let cols = p.columns();
    let mut steps = Vec::with_capacity(2 * (p.half_perimeter() - 1));
    let mut h = 0u32;
    for (i, &(b, t)) in cols.iter().enumerate() {
        let peak = t - b;
        steps.extend(std::iter::repeat_n(true, (peak - h) as usize));
        let valley = match cols.get(i + 1) {
            Some(&(next_b, _)) => t - next_b - 1,
            None => 0,
        };
        steps.extend(std::iter::repeat_n(false, (peak - valley) as usize));
        h = valley;
    }
    DyckPath::new_unchecked(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Step::*;

    fn unit() -> StaircasePolygon {
        StaircasePolygon::new(vec![U, R], vec![R, U]).unwrap()
    }

    #[test]
    fn unit_square_moments() {
        let p = unit();
        assert_eq!(diagonal_moments(&p, 2).values, vec![1, 1, 1]);
        let c = column_moments(&p, 3);
        assert_eq!((c.width, c.height), (1, 1));
        assert_eq!(c.moments.values, vec![1, 1, 1, 1]);
        assert_eq!(p.to_lattice_polygon().to_string(), "RULD");
    }

    #[test]
    fn vertical_domino() {
        let p = StaircasePolygon::new(vec![U, U, R], vec![R, U, U]).unwrap();
        let c = column_moments(&p, 4);
        assert_eq!((c.width, c.height), (1, 2));
        assert_eq!(c.moments.values, vec![1, 2, 4, 8, 16]);
        assert_eq!(diagonal_moments(&p, 1).values, vec![2, 2]);
    }

    #[test]
    fn rejects_touching_paths() {
        // paths meet at (1,1)
        assert!(StaircasePolygon::new(vec![U, R, U, R], vec![R, U, R, U]).is_err());
        assert!(StaircasePolygon::new(vec![R, U], vec![U, R]).is_err());
        assert!(StaircasePolygon::new(vec![U], vec![R]).is_err());
        assert!(StaircasePolygon::new(vec![U, R], vec![R, U, U]).is_err());
    }

    #[test]
    fn dyck_of_unit_square() {
        let d = staircase_to_dyck(&unit());
        assert_eq!(d.to_string(), "ud");
        assert_eq!(StaircasePolygon::from_dyck(&d).unwrap(), unit());
    }

    #[test]
    fn transpose_is_involution() {
        let p = StaircasePolygon::new(vec![U, U, R, R], vec![R, U, R, U]).unwrap();
        assert_eq!(p.transpose().transpose(), p);
        assert!(StaircasePolygon::new(
            p.transpose().upper().to_vec(),
            p.transpose().lower().to_vec()
        )
        .is_ok());
    }
}
