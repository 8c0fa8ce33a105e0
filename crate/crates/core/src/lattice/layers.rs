//! Layer moments of self-avoiding polygons.
//!
//! A layer is the set of enclosed squares on one negative diagonal
//! (`x + y = const`) or in one column (`x = const`). Inside a general polygon a
//! layer splits into maximal runs of adjacent squares ("segments"). Variant `a`
//! sums `(Σ_segments l)^k` over layers, variant `b` sums `Σ_segments l^k`.

use super::polygon::{LatticePolygon, Step};
use super::{power_sums, MomentVariant, MomentVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LayerFamily {
    /// Negative diagonals `x + y = const`.
    Diagonal,
    /// Columns `x = const`.
    Vertical,
}

impl LayerFamily {
    pub fn name(self) -> &'static str {
        match self {
            LayerFamily::Diagonal => "diagonal-layer",
            LayerFamily::Vertical => "vertical-layer",
        }
    }
}

// Quadrants around a vertex, counter-clockwise.
const NE: usize = 0;
const NW: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

/// Reusable buffers for measuring layer segments in time linear in the perimeter.
#[derive(Debug, Default, Clone)]
pub struct LayerScratch {
    // (layer, position, +1 start / -1 end)
    events: Vec<(i32, i32, i8)>,
    layer_totals: Vec<u64>,
    segment_lengths: Vec<u64>,
}

impl LayerScratch {
    pub fn new() -> Self {
        Self::default()
    }

    /// Measures both layer-moment variants of the closed walk through `pos`
    /// (vertex `i` to vertex `i+1`, wrapping around). The walk may run in
    /// either orientation.
    pub fn measure(
        &mut self,
        pos: &[(i32, i32)],
        family: LayerFamily,
        kmax: usize,
    ) -> (MomentVector, MomentVector) {
        self.collect_events(pos, family);
        self.events.sort_unstable();
        self.layer_totals.clear();
        self.segment_lengths.clear();

        let mut current_layer = None;
        let mut open_at = 0i32;
        for &(layer, p, kind) in &self.events {
            if current_layer != Some(layer) {
                current_layer = Some(layer);
                self.layer_totals.push(0);
            }
            if kind > 0 {
                open_at = p;
            } else {
                let l = (p - open_at) as u64;
                self.segment_lengths.push(l);
                *self.layer_totals.last_mut().expect("layer opened") += l;
            }
        }
        let a = power_sums(self.layer_totals.iter().copied(), kmax);
        let mut b = power_sums(self.segment_lengths.iter().copied(), kmax);
        // n_0 counts layers for both variants.
        b[0] = a[0];
        (
            MomentVector::new(MomentVariant::A, a),
            MomentVector::new(MomentVariant::B, b),
        )
    }

    fn collect_events(&mut self, pos: &[(i32, i32)], family: LayerFamily) {
        self.events.clear();
        let n = pos.len();
        let ccw = signed_area2(pos) > 0;
        for i in 0..n {
            let v = pos[i];
            let next = pos[(i + 1) % n];
            let out_step = step_between(v, next);
            match family {
                LayerFamily::Vertical => {
                    // Horizontal edges toggle the column they bound.
                    let (x, y) = v;
                    match (out_step, ccw) {
                        (Step::R, true) | (Step::L, false) => {
                            let col = if out_step == Step::R { x } else { x - 1 };
                            self.events.push((col, y, 1));
                        }
                        (Step::R, false) | (Step::L, true) => {
                            let col = if out_step == Step::R { x } else { x - 1 };
                            self.events.push((col, y, -1));
                        }
                        _ => {}
                    }
                }
                LayerFamily::Diagonal => {
                    let prev = pos[(i + n - 1) % n];
                    let in_step = step_between(prev, v);
                    let q = quadrant_status(in_step, out_step, ccw);
                    let (x, y) = v;
                    let layer = x + y - 1;
                    match (q[NW], q[SE]) {
                        (false, true) => self.events.push((layer, x, 1)),
                        (true, false) => self.events.push((layer, x, -1)),
                        _ => {}
                    }
                }
            }
        }
    }
}

fn signed_area2(pos: &[(i32, i32)]) -> i64 {
    let n = pos.len();
    (0..n)
        .map(|i| {
            let (x0, y0) = pos[i];
            let (x1, y1) = pos[(i + 1) % n];
            x0 as i64 * y1 as i64 - x1 as i64 * y0 as i64
        })
        .sum()
}

#[inline]
fn step_between(a: (i32, i32), b: (i32, i32)) -> Step {
    match (b.0 - a.0, b.1 - a.1) {
        (1, 0) => Step::R,
        (-1, 0) => Step::L,
        (0, 1) => Step::U,
        (0, -1) => Step::D,
        d => panic!("non-unit step {d:?} in closed walk"),
    }
}

/// Inside/outside status of the four squares meeting at a boundary vertex,
/// given the arriving and leaving steps. Interior lies to the left of a
/// counter-clockwise walk.
fn quadrant_status(incoming: Step, outgoing: Step, ccw: bool) -> [bool; 4] {
    let mut q: [Option<bool>; 4] = [None; 4];
    let (left_in, right_in) = match incoming {
        Step::R => (NW, SW),
        Step::L => (SE, NE),
        Step::U => (SW, SE),
        Step::D => (NE, NW),
    };
    let (left_out, right_out) = match outgoing {
        Step::R => (NE, SE),
        Step::L => (SW, NW),
        Step::U => (NW, NE),
        Step::D => (SE, SW),
    };
    for (left, right) in [(left_in, right_in), (left_out, right_out)] {
        q[left] = Some(ccw);
        q[right] = Some(!ccw);
    }
    let mut out = [false; 4];
    for i in 0..4 {
        out[i] = match q[i] {
            Some(s) => s,
            // A quadrant untouched by either edge sits between two quadrants of
            // the same region.
            None => q[(i + 1) % 4].expect("turn covers both neighbours"),
        };
    }
    out
}

/// Layer moments `(variant a, variant b)` of a polygon.
pub fn layer_moments(
    p: &LatticePolygon,
    kmax: usize,
    family: LayerFamily,
) -> (MomentVector, MomentVector) {
    LayerScratch::new().measure(&p.vertices(), family, kmax)
}

/// Reference implementation working from the explicit set of enclosed squares.
pub fn layer_moments_from_cells(
    p: &LatticePolygon,
    kmax: usize,
    family: LayerFamily,
) -> (MomentVector, MomentVector) {
    let mut keyed: Vec<(i32, i32)> = p
        .interior_cells()
        .into_iter()
        .map(|(x, y)| match family {
            LayerFamily::Diagonal => (x + y, x),
            LayerFamily::Vertical => (x, y),
        })
        .collect();
    keyed.sort_unstable();
    let mut layers: Vec<Vec<u64>> = Vec::new();
    let mut prev: Option<(i32, i32)> = None;
    for &(layer, at) in &keyed {
        match prev {
            Some((pl, pa)) if pl == layer && pa + 1 == at => {
                *layers.last_mut().unwrap().last_mut().unwrap() += 1
            }
            Some((pl, _)) if pl == layer => layers.last_mut().unwrap().push(1),
            _ => layers.push(vec![1]),
        }
        prev = Some((layer, at));
    }
    let mut a = power_sums(layers.iter().map(|segs| segs.iter().sum::<u64>()), kmax);
    let mut b = power_sums(layers.iter().flatten().copied(), kmax);
    a[0] = layers.len() as u64;
    b[0] = layers.len() as u64;
    (
        MomentVector::new(MomentVariant::A, a),
        MomentVector::new(MomentVariant::B, b),
    )
}
