use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use super::LatticeError;

/// A unit move on the square lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    R,
    L,
    U,
    D,
}

impl Step {
    pub const ALL: [Step; 4] = [Step::R, Step::L, Step::U, Step::D];

    #[inline]
    pub fn delta(self) -> (i32, i32) {
        match self {
            Step::R => (1, 0),
            Step::L => (-1, 0),
            Step::U => (0, 1),
            Step::D => (0, -1),
        }
    }

    #[inline]
    pub fn reverse(self) -> Step {
        match self {
            Step::R => Step::L,
            Step::L => Step::R,
            Step::U => Step::D,
            Step::D => Step::U,
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Step::R | Step::L)
    }

    pub fn to_char(self) -> char {
        match self {
            Step::R => 'R',
            Step::L => 'L',
            Step::U => 'U',
            Step::D => 'D',
        }
    }

    pub fn from_char(c: char) -> Result<Step, LatticeError> {
        match c {
            'R' => Ok(Step::R),
            'L' => Ok(Step::L),
            'U' => Ok(Step::U),
            'D' => Ok(Step::D),
            other => Err(LatticeError::InvalidStep(other)),
        }
    }
}

/// A self-avoiding polygon on the square lattice, identified up to translation.
///
/// The stored step sequence is canonical: it starts at the lexicographically
/// smallest vertex `(min x, then min y)`, which is placed at the origin, and runs
/// counter-clockwise (so the first step is always `R` and the last is `D`).
/// Two polygons are equal as sets of edges iff their canonical sequences agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePolygon {
    steps: Vec<Step>,
}

/// Validates a closed self-avoiding step sequence and returns its canonical form.
pub fn validate_polygon(steps: &[Step]) -> Result<LatticePolygon, LatticeError> {
    if steps.is_empty() {
        return Err(LatticeError::Empty);
    }
    if steps.len() % 2 == 1 {
        return Err(LatticeError::OddLength(steps.len()));
    }
    let (mut x, mut y) = (0i32, 0i32);
    let mut seen = HashSet::with_capacity(steps.len());
    let mut repeated = false;
    for &s in steps {
        if !seen.insert((x, y)) {
            repeated = true;
        }
        let (dx, dy) = s.delta();
        x += dx;
        y += dy;
    }
    if (x, y) != (0, 0) {
        return Err(LatticeError::NotClosed);
    }
    // Length 2 is a back-track; it never has four distinct vertices.
    if repeated || steps.len() < 4 {
        return Err(LatticeError::SelfIntersecting);
    }
    Ok(LatticePolygon {
        steps: canonical_steps(steps),
    })
}

/// Rotates and, if needed, reverses a closed self-avoiding step sequence so that it
/// starts at its lexicographically smallest vertex and runs counter-clockwise.
pub(crate) fn canonical_steps(steps: &[Step]) -> Vec<Step> {
    let n = steps.len();
    let (mut x, mut y) = (0i32, 0i32);
    let mut best = (0i32, 0i32);
    let mut best_idx = 0usize;
    for (i, &s) in steps.iter().enumerate() {
        if (x, y) < best {
            best = (x, y);
            best_idx = i;
        }
        let (dx, dy) = s.delta();
        x += dx;
        y += dy;
    }
    let mut out: Vec<Step> = (0..n).map(|i| steps[(best_idx + i) % n]).collect();
    // The smallest vertex only has an R and a U neighbour; starting with U means
    // the sequence runs clockwise.
    if out[0] != Step::R {
        out = out.iter().rev().map(|s| s.reverse()).collect();
    }
    out
}

impl LatticePolygon {
    /// Wraps a step sequence that is already known to be canonical.
    pub(crate) fn from_canonical(steps: Vec<Step>) -> Self {
        debug_assert_eq!(canonical_steps(&steps), steps);
        Self { steps }
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn perimeter(&self) -> usize {
        self.steps.len()
    }

    pub fn half_perimeter(&self) -> usize {
        self.steps.len() / 2
    }

    /// Vertices in traversal order, starting at the origin (the closing vertex is not repeated).
    pub fn vertices(&self) -> Vec<(i32, i32)> {
        let mut out = Vec::with_capacity(self.steps.len());
        let (mut x, mut y) = (0, 0);
        for s in &self.steps {
            out.push((x, y));
            let (dx, dy) = s.delta();
            x += dx;
            y += dy;
        }
        out
    }

    /// Enclosed area from the shoelace formula.
    pub fn area(&self) -> u64 {
        let (mut x, mut y) = (0i64, 0i64);
        let mut twice = 0i64;
        for s in &self.steps {
            let (dx, dy) = s.delta();
            let (nx, ny) = (x + dx as i64, y + dy as i64);
            twice += x * ny - nx * y;
            x = nx;
            y = ny;
        }
        (twice.abs() / 2) as u64
    }

    /// Unit squares `(x, y)` (lower-left corners) enclosed by the polygon,
    /// sorted by row and then column.
    pub fn interior_cells(&self) -> Vec<(i32, i32)> {
        // Each row y is crossed by the vertical edges spanning [y, y+1]; the
        // cells between consecutive crossings alternate between inside and outside.
        let mut crossings: Vec<(i32, i32)> = Vec::new();
        let (mut x, mut y) = (0i32, 0i32);
        for s in &self.steps {
            match s {
                Step::U => crossings.push((y, x)),
                Step::D => crossings.push((y - 1, x)),
                _ => {}
            }
            let (dx, dy) = s.delta();
            x += dx;
            y += dy;
        }
        crossings.sort_unstable();
        let mut cells = Vec::new();
        for pair in crossings.chunks(2) {
            let (row, x0) = pair[0];
            let (_, x1) = pair[1];
            cells.extend((x0..x1).map(|cx| (cx, row)));
        }
        cells
    }

    /// Bounding box `(width, height)`.
    pub fn extent(&self) -> (u32, u32) {
        let v = self.vertices();
        let (xmin, xmax) = v
            .iter()
            .fold((0, 0), |(a, b), &(x, _)| (a.min(x), b.max(x)));
        let (ymin, ymax) = v
            .iter()
            .fold((0, 0), |(a, b), &(_, y)| (a.min(y), b.max(y)));
        ((xmax - xmin) as u32, (ymax - ymin) as u32)
    }
}

impl fmt::Display for LatticePolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", s.to_char())?;
        }
        Ok(())
    }
}

impl FromStr for LatticePolygon {
    type Err = LatticeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let steps = s
            .trim()
            .chars()
            .map(Step::from_char)
            .collect::<Result<Vec<_>, _>>()?;
        validate_polygon(&steps)
    }
}
