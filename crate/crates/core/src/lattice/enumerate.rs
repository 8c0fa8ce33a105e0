//! Exhaustive enumerators. They are deliberately naive: their job is to be
//! obviously correct oracles for the generating-function code.

use super::polygon::{LatticePolygon, Step};
use super::staircase::StaircasePolygon;
use super::walks::{Walk, WalkModel};
use super::LatticeError;

pub const MAX_STAIRCASE_HALF_PERIMETER: usize = 14;
pub const MAX_SAP_PERIMETER: usize = 16;
pub const MAX_WALK_LENGTH: usize = 22;

// (upper step, lower step) pairs in lexicographic order, R < U.
const PAIRS: [(Step, Step); 4] = [
    (Step::R, Step::R),
    (Step::R, Step::U),
    (Step::U, Step::R),
    (Step::U, Step::U),
];

fn pair_delta(c: u8) -> i32 {
    match PAIRS[c as usize] {
        (Step::R, Step::U) => -1,
        (Step::U, Step::R) => 1,
        _ => 0,
    }
}

/// All staircase polygons of the given half-perimeter.
///
/// Both boundary paths are grown one step at a time; after `t` steps they sit
/// on the anti-diagonal `x + y = t` and the gap `d = x_lower - x_upper` must
/// stay positive until the final step closes it.
pub fn enumerate_staircase(half_perimeter: usize) -> Result<StaircaseIter, LatticeError> {
    if half_perimeter < 2 {
        return Err(LatticeError::SizeTooSmall {
            size: half_perimeter,
            min: 2,
        });
    }
    if half_perimeter > MAX_STAIRCASE_HALF_PERIMETER {
        return Err(LatticeError::SizeLimitExceeded {
            size: half_perimeter,
            limit: MAX_STAIRCASE_HALF_PERIMETER,
        });
    }
    let middle = half_perimeter - 2;
    let mut it = StaircaseIter {
        middle,
        choices: vec![0; middle],
        gaps: vec![1; middle + 1],
        state: IterState::Fresh,
    };
    it.fill(0);
    Ok(it)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum IterState {
    Fresh,
    Running,
    Done,
}

#[derive(Debug, Clone)]
pub struct StaircaseIter {
    middle: usize,
    choices: Vec<u8>,
    gaps: Vec<i32>,
    state: IterState,
}

impl StaircaseIter {
    fn step_ok(&self, t: usize, c: u8) -> Option<i32> {
        let d = self.gaps[t] + pair_delta(c);
        let remaining = (self.middle - t - 1) as i32;
        (d >= 1 && d - 1 <= remaining).then_some(d)
    }

    fn fill(&mut self, from: usize) {
        for t in from..self.middle {
            let (c, d) = (0..4u8)
                .find_map(|c| self.step_ok(t, c).map(|d| (c, d)))
                .expect("a feasible continuation always exists");
            self.choices[t] = c;
            self.gaps[t + 1] = d;
        }
    }

    fn advance(&mut self) -> bool {
        for t in (0..self.middle).rev() {
            for c in self.choices[t] + 1..4 {
                if let Some(d) = self.step_ok(t, c) {
                    self.choices[t] = c;
                    self.gaps[t + 1] = d;
                    self.fill(t + 1);
                    return true;
                }
            }
        }
        false
    }

    fn current(&self) -> StaircasePolygon {
        let n = self.middle + 2;
        let mut upper = Vec::with_capacity(n);
        let mut lower = Vec::with_capacity(n);
        upper.push(Step::U);
        lower.push(Step::R);
        for &c in &self.choices {
            let (u, l) = PAIRS[c as usize];
            upper.push(u);
            lower.push(l);
        }
        upper.push(Step::R);
        lower.push(Step::U);
        StaircasePolygon::from_paths_unchecked(upper, lower)
    }
}

impl Iterator for StaircaseIter {
    type Item = StaircasePolygon;

    fn next(&mut self) -> Option<StaircasePolygon> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => self.state = IterState::Running,
            IterState::Running => {
                if !self.advance() {
                    self.state = IterState::Done;
                    return None;
                }
            }
        }
        Some(self.current())
    }
}

/// All self-avoiding polygons with the given perimeter, each once up to translation.
pub fn enumerate_sap(perimeter: usize) -> Result<SapIter, LatticeError> {
    if perimeter % 2 == 1 {
        return Err(LatticeError::OddPerimeter(perimeter));
    }
    if perimeter < 4 {
        return Err(LatticeError::SizeTooSmall {
            size: perimeter,
            min: 4,
        });
    }
    if perimeter > MAX_SAP_PERIMETER {
        return Err(LatticeError::SizeLimitExceeded {
            size: perimeter,
            limit: MAX_SAP_PERIMETER,
        });
    }
    let mut search = SapSearch::new(perimeter);
    search.steps.push(Step::R);
    search.mark((1, 0), true);
    search.extend((1, 0));
    Ok(SapIter {
        inner: search.found.into_iter(),
    })
}

#[derive(Debug)]
pub struct SapIter {
    inner: std::vec::IntoIter<LatticePolygon>,
}

impl Iterator for SapIter {
    type Item = LatticePolygon;

    fn next(&mut self) -> Option<LatticePolygon> {
        self.inner.next()
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        self.inner.size_hint()
    }
}

impl ExactSizeIterator for SapIter {}

// Rooted at the lexicographically smallest vertex, first step R: every polygon
// is generated exactly once, already in canonical form.
struct SapSearch {
    perimeter: usize,
    side: i32,
    occupied: Vec<bool>,
    steps: Vec<Step>,
    found: Vec<LatticePolygon>,
}

impl SapSearch {
    fn new(perimeter: usize) -> Self {
        let side = 2 * perimeter as i32 + 1;
        Self {
            perimeter,
            side,
            occupied: vec![false; (side * side) as usize],
            steps: Vec::with_capacity(perimeter),
            found: Vec::new(),
        }
    }

    fn index(&self, (x, y): (i32, i32)) -> usize {
        let half = self.perimeter as i32;
        ((y + half) * self.side + (x + half)) as usize
    }

    fn mark(&mut self, v: (i32, i32), on: bool) {
        let i = self.index(v);
        self.occupied[i] = on;
    }

    fn extend(&mut self, at: (i32, i32)) {
        let remaining = (self.perimeter - self.steps.len()) as i32;
        for s in Step::ALL {
            let (dx, dy) = s.delta();
            let next = (at.0 + dx, at.1 + dy);
            if next == (0, 0) {
                if remaining == 1 {
                    self.steps.push(s);
                    self.found
                        .push(LatticePolygon::from_canonical(self.steps.clone()));
                    self.steps.pop();
                }
                continue;
            }
            if next < (0, 0)
                || next.0.abs() + next.1.abs() > remaining - 1
                || self.occupied[self.index(next)]
            {
                continue;
            }
            self.steps.push(s);
            self.mark(next, true);
            self.extend(next);
            self.mark(next, false);
            self.steps.pop();
        }
    }
}

/// All walks of the given model and length, in lexicographic order with `d < u`.
pub fn enumerate_walks(model: WalkModel, length: usize) -> Result<WalkIter, LatticeError> {
    if length > MAX_WALK_LENGTH {
        return Err(LatticeError::SizeLimitExceeded {
            size: length,
            limit: MAX_WALK_LENGTH,
        });
    }
    Ok(WalkIter {
        model,
        length,
        next: 0,
        end: 1u64 << length,
    })
}

#[derive(Debug, Clone)]
pub struct WalkIter {
    model: WalkModel,
    length: usize,
    next: u64,
    end: u64,
}

impl Iterator for WalkIter {
    type Item = Walk;

    fn next(&mut self) -> Option<Walk> {
        while self.next < self.end {
            let bits = self.next;
            self.next += 1;
            let steps = (0..self.length)
                .map(|j| bits >> (self.length - 1 - j) & 1 == 1)
                .collect();
            let w = Walk::new(steps);
            if self.model.admits(&w) {
                return Some(w);
            }
        }
        None
    }
}
