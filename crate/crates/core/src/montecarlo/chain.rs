use rand::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::lattice::{validate_polygon, LatticePolygon, Step};

/// Which transformation a move applies to the chosen subwalk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// Point reflection through the midpoint of the two pivots (reverses the step order).
    Inversion,
    /// Mirror image across the line through the two pivots.
    Reflection,
    /// Mirror image across the perpendicular bisector of the two pivots,
    /// traversed backwards so that both pivots stay in place.
    BisectorReflection,
}

/// Markov chain on self-avoiding polygons of fixed perimeter.
///
/// Vertices are kept at fixed indices; a move picks two of them and
/// transforms the shorter of the two arcs between them. Occupancy lives in a
/// `W × W` torus grid with `W = P/2 + 1`, which is injective on the vertex set
/// of any closed walk of length `P`, so a proposal is checked in time
/// proportional to the length of the moved arc.
#[derive(Debug, Clone)]
pub struct SapChain {
    pos: Vec<(i32, i32)>,
    grid: Vec<u32>,
    w: i32,
    scratch: Vec<(i32, i32)>,
    rng: Xoshiro256PlusPlus,
    reflections: bool,
    proposed: u64,
    accepted: u64,
}

impl SapChain {
    pub fn new(start: &LatticePolygon, seed: u64) -> Self {
        let pos = start.vertices();
        let w = pos.len() as i32 / 2 + 1;
        let mut chain = Self {
            grid: vec![0; (w * w) as usize],
            w,
            pos,
            scratch: Vec::new(),
            rng: Xoshiro256PlusPlus::seed_from_u64(seed),
            reflections: true,
            proposed: 0,
            accepted: 0,
        };
        for i in 0..chain.pos.len() {
            let c = chain.cell(chain.pos[i]);
            chain.grid[c] = i as u32 + 1;
        }
        chain
    }

    /// Rectangle as close to a square as the half-perimeter allows.
    pub fn rectangle_start(half_perimeter: usize) -> LatticePolygon {
        assert!(half_perimeter >= 2);
        let height = half_perimeter / 2;
        let width = half_perimeter - height;
        let mut steps = vec![Step::R; width];
        steps.extend(std::iter::repeat_n(Step::U, height));
        steps.extend(std::iter::repeat_n(Step::L, width));
        steps.extend(std::iter::repeat_n(Step::D, height));
        validate_polygon(&steps).expect("rectangle is a polygon")
    }

    /// Turns reflections off, leaving inversions only.
    pub fn without_reflections(mut self) -> Self {
        self.reflections = false;
        self
    }

    pub fn perimeter(&self) -> usize {
        self.pos.len()
    }

    pub fn positions(&self) -> &[(i32, i32)] {
        &self.pos
    }

    pub fn proposed(&self) -> u64 {
        self.proposed
    }

    pub fn accepted(&self) -> u64 {
        self.accepted
    }

    pub fn polygon(&self) -> LatticePolygon {
        validate_polygon(&self.steps()).expect("chain state is a polygon")
    }

    fn steps(&self) -> Vec<Step> {
        let p = self.pos.len();
        (0..p)
            .map(|i| {
                let (a, b) = (self.pos[i], self.pos[(i + 1) % p]);
                match (b.0 - a.0, b.1 - a.1) {
                    (1, 0) => Step::R,
                    (-1, 0) => Step::L,
                    (0, 1) => Step::U,
                    (0, -1) => Step::D,
                    d => panic!("non-unit step {d:?}"),
                }
            })
            .collect()
    }

    #[inline]
    fn cell(&self, q: (i32, i32)) -> usize {
        (q.0.rem_euclid(self.w) * self.w + q.1.rem_euclid(self.w)) as usize
    }

    /// Full consistency check of positions and occupancy.
    pub fn check(&self) {
        let poly = validate_polygon(&self.steps()).expect("chain left the set of polygons");
        assert_eq!(poly.perimeter(), self.pos.len());
        for (i, &q) in self.pos.iter().enumerate() {
            assert_eq!(
                self.grid[self.cell(q)],
                i as u32 + 1,
                "occupancy out of sync at vertex {i}"
            );
        }
        assert_eq!(
            self.grid.iter().filter(|&&g| g != 0).count(),
            self.pos.len()
        );
    }

    /// One proposed move; returns whether the polygon changed.
    pub fn step(&mut self) -> bool {
        let p = self.pos.len();
        self.proposed += 1;
        let i = self.rng.gen_range(0..p);
        let mut j = self.rng.gen_range(0..p - 1);
        if j >= i {
            j += 1;
        }
        let kind = match (self.reflections, self.rng.gen_range(0..3u8)) {
            (true, 1) => MoveKind::Reflection,
            (true, 2) => MoveKind::BisectorReflection,
            _ => MoveKind::Inversion,
        };
        let (a, b) = (i.min(j), i.max(j));
        // Arc from pivot s to pivot e (in index order, wrapping), interior length len - 1.
        let (s, len) = if b - a <= p - (b - a) {
            (a, b - a)
        } else {
            (b, p - (b - a))
        };
        if self.propose(s, len, kind) {
            self.accepted += 1;
            if cfg!(debug_assertions) || self.proposed.is_multiple_of(10_000) {
                self.check();
            }
            true
        } else {
            false
        }
    }

    fn propose(&mut self, s: usize, len: usize, kind: MoveKind) -> bool {
        if len < 2 {
            return false;
        }
        let p = self.pos.len();
        let e = (s + len) % p;
        let (ps, pe) = (self.pos[s], self.pos[e]);
        let (dx, dy) = (pe.0 - ps.0, pe.1 - ps.1);
        let aligned = dx == 0 || dy == 0 || dx.abs() == dy.abs();
        let kind = if aligned { kind } else { MoveKind::Inversion };
        // Reflection across the line through `ps` parallel to the pivot axis.
        let mirror = |v: (i32, i32)| {
            let (rx, ry) = (v.0 - ps.0, v.1 - ps.1);
            if dy == 0 {
                (rx, -ry)
            } else if dx == 0 {
                (-rx, ry)
            } else if dx == dy {
                (ry, rx)
            } else {
                (-ry, -rx)
            }
        };
        let pos = &self.pos;
        let vertex = |t: usize| pos[(s + t) % p];
        let scratch = &mut self.scratch;
        scratch.clear();
        for t in 1..len {
            let q = match kind {
                MoveKind::Inversion => {
                    let v = vertex(len - t);
                    (ps.0 + pe.0 - v.0, ps.1 + pe.1 - v.1)
                }
                MoveKind::Reflection => {
                    let (nx, ny) = mirror(vertex(t));
                    (ps.0 + nx, ps.1 + ny)
                }
                MoveKind::BisectorReflection => {
                    let (nx, ny) = mirror(vertex(len - t));
                    (pe.0 - nx, pe.1 - ny)
                }
            };
            scratch.push(q);
        }
        if scratch.iter().enumerate().all(|(t, &q)| q == vertex(t + 1)) {
            return false;
        }
        // The moved arc is an isometric image of a self-avoiding arc, so only
        // clashes with the fixed part matter. Those are most likely next to
        // the pivots, so scan from both ends inwards.
        let n = self.scratch.len();
        let moving = |idx: usize| (idx + p - s) % p < len && idx != s;
        for m in 0..n {
            let t = if m % 2 == 0 { m / 2 } else { n - 1 - m / 2 };
            let occ = self.grid[self.cell(self.scratch[t])];
            if occ != 0 && !moving(occ as usize - 1) {
                return false;
            }
        }
        for t in 1..len {
            let c = self.cell(self.pos[(s + t) % p]);
            self.grid[c] = 0;
        }
        for t in 1..len {
            let idx = (s + t) % p;
            let q = self.scratch[t - 1];
            self.pos[idx] = q;
            let c = self.cell(q);
            self.grid[c] = idx as u32 + 1;
        }
        true
    }

    pub fn run(&mut self, moves: u64) {
        for _ in 0..moves {
            self.step();
        }
    }
}

/// A single move applied to `p`; returns `p` unchanged when rejected.
pub fn mc_move<R: Rng>(p: &LatticePolygon, rng: &mut R) -> LatticePolygon {
    let mut chain = SapChain::new(p, rng.gen());
    if chain.step() {
        chain.polygon()
    } else {
        p.clone()
    }
}
