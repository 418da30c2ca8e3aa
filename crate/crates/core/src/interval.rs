//! Set-valued functions on [0,1] whose graph is a finite union of closed
//! line segments and isolated points, handled in exact rational arithmetic.
//!
//! The vertical slice at every x must be non-empty (images are non-empty
//! compact sets); this is validated at construction by sweeping the
//! x-projections of the pieces. Graphs are kept canonical: collinear
//! overlapping segments merged, degenerate segments turned into points,
//! points absorbed by segments that contain them.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::num::{rat_int, rat_to_f64, rat_to_string, Rat};
use crate::relation::FiniteRelation;
use crate::space::MetricPointSet;

/// A closed segment with rational endpoints, stored with the
/// lexicographically smaller endpoint first. Never degenerate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Segment {
    pub x1: Rat,
    pub y1: Rat,
    pub x2: Rat,
    pub y2: Rat,
}

impl Segment {
    fn ordered(x1: Rat, y1: Rat, x2: Rat, y2: Rat) -> Self {
        if (&x1, &y1) <= (&x2, &y2) {
            Segment { x1, y1, x2, y2 }
        } else {
            Segment {
                x1: x2,
                y1: y2,
                x2: x1,
                y2: y1,
            }
        }
    }

    pub fn is_vertical(&self) -> bool {
        self.x1 == self.x2
    }

    /// Slope of a non-vertical segment.
    fn slope(&self) -> Rat {
        (&self.y2 - &self.y1) / (&self.x2 - &self.x1)
    }

    /// y at x for a non-vertical segment (x must be within range).
    fn value_at(&self, x: &Rat) -> Rat {
        &self.y1 + (x - &self.x1) * self.slope()
    }

    fn contains_point(&self, px: &Rat, py: &Rat) -> bool {
        if self.is_vertical() {
            return px == &self.x1 && *py >= self.y1 && *py <= self.y2;
        }
        if *px < self.x1 || *px > self.x2 {
            return false;
        }
        (py - &self.y1) * (&self.x2 - &self.x1) == (px - &self.x1) * (&self.y2 - &self.y1)
    }
}

/// A finite union of closed intervals on the line, sorted and disjoint;
/// degenerate intervals are points. The canonical slice representation.
pub type IntervalUnion = Vec<(Rat, Rat)>;

fn merge_intervals(mut intervals: Vec<(Rat, Rat)>) -> IntervalUnion {
    intervals.sort();
    let mut out: IntervalUnion = Vec::new();
    for (lo, hi) in intervals {
        match out.last_mut() {
            Some(last) if lo <= last.1 => {
                if hi > last.1 {
                    last.1 = hi;
                }
            }
            _ => out.push((lo, hi)),
        }
    }
    out
}

/// per-line key for canonical merging
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
enum LineKey {
    Vertical(Rat),
    /// slope, intercept
    Sloped(Rat, Rat),
}

/// Upper semi-continuous set-valued function on [0,1] with piecewise-linear
/// graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSvf {
    segments: Vec<Segment>,
    points: Vec<(Rat, Rat)>,
}

impl IntervalSvf {
    /// Build and validate: all coordinates in [0,1], non-empty slices over
    /// the whole interval.
    pub fn new(segments: Vec<((Rat, Rat), (Rat, Rat))>, points: Vec<(Rat, Rat)>) -> Result<Self> {
        let zero = rat_int(0);
        let one = rat_int(1);
        let in_unit = |r: &Rat| *r >= zero && *r <= one;
        for ((x1, y1), (x2, y2)) in &segments {
            for c in [x1, y1, x2, y2] {
                if !in_unit(c) {
                    return Err(Error::BadSpec(format!(
                        "segment coordinate {} outside [0,1]",
                        rat_to_string(c)
                    )));
                }
            }
        }
        for (x, y) in &points {
            if !in_unit(x) || !in_unit(y) {
                return Err(Error::BadSpec(format!(
                    "point ({}, {}) outside [0,1]",
                    rat_to_string(x),
                    rat_to_string(y)
                )));
            }
        }
        let svf = Self::canonicalize(segments, points);
        svf.validate_slices()?;
        Ok(svf)
    }

    fn canonicalize(
        segments: Vec<((Rat, Rat), (Rat, Rat))>,
        points: Vec<(Rat, Rat)>,
    ) -> IntervalSvf {
        let mut loose_points: Vec<(Rat, Rat)> = points;
        // group non-degenerate segments by supporting line
        let mut lines: BTreeMap<LineKey, Vec<(Rat, Rat)>> = BTreeMap::new();
        for ((x1, y1), (x2, y2)) in segments {
            if x1 == x2 && y1 == y2 {
                loose_points.push((x1, y1));
                continue;
            }
            let seg = Segment::ordered(x1, y1, x2, y2);
            if seg.is_vertical() {
                lines
                    .entry(LineKey::Vertical(seg.x1.clone()))
                    .or_default()
                    .push((seg.y1, seg.y2));
            } else {
                let slope = seg.slope();
                let intercept = &seg.y1 - &slope * &seg.x1;
                lines
                    .entry(LineKey::Sloped(slope, intercept))
                    .or_default()
                    .push((seg.x1, seg.x2));
            }
        }
        let mut segs: Vec<Segment> = Vec::new();
        for (key, ranges) in lines {
            let merged = merge_intervals(ranges);
            match key {
                LineKey::Vertical(x) => {
                    for (lo, hi) in merged {
                        if lo == hi {
                            loose_points.push((x.clone(), lo));
                        } else {
                            segs.push(Segment::ordered(x.clone(), lo, x.clone(), hi));
                        }
                    }
                }
                LineKey::Sloped(slope, intercept) => {
                    for (lo, hi) in merged {
                        let y_lo = &slope * &lo + &intercept;
                        let y_hi = &slope * &hi + &intercept;
                        if lo == hi {
                            loose_points.push((lo, y_lo));
                        } else {
                            segs.push(Segment::ordered(lo, y_lo, hi, y_hi));
                        }
                    }
                }
            }
        }
        segs.sort();
        loose_points.sort();
        loose_points.dedup();
        loose_points.retain(|(px, py)| !segs.iter().any(|s| s.contains_point(px, py)));
        IntervalSvf {
            segments: segs,
            points: loose_points,
        }
    }

    fn validate_slices(&self) -> Result<()> {
        let mut proj: Vec<(Rat, Rat)> = Vec::new();
        for s in &self.segments {
            proj.push((s.x1.clone(), s.x2.clone()));
        }
        for (px, _) in &self.points {
            proj.push((px.clone(), px.clone()));
        }
        if proj.is_empty() {
            return Err(Error::SliceGap {
                lo: "0".into(),
                hi: "1".into(),
            });
        }
        let merged = merge_intervals(proj);
        let zero = rat_int(0);
        let one = rat_int(1);
        let mut cursor = zero;
        for (lo, hi) in &merged {
            if *lo > cursor {
                return Err(Error::SliceGap {
                    lo: rat_to_string(&cursor),
                    hi: rat_to_string(lo),
                });
            }
            if *hi > cursor {
                cursor = hi.clone();
            }
        }
        if cursor < one {
            return Err(Error::SliceGap {
                lo: rat_to_string(&cursor),
                hi: "1".into(),
            });
        }
        Ok(())
    }

    /// The identity mapping's graph, the diagonal.
    pub fn identity_graph() -> IntervalSvf {
        IntervalSvf {
            segments: vec![Segment::ordered(rat_int(0), rat_int(0), rat_int(1), rat_int(1))],
            points: Vec::new(),
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn points(&self) -> &[(Rat, Rat)] {
        &self.points
    }

    /// F(x): the vertical slice of the graph at x, as a sorted disjoint union
    /// of closed intervals and points.
    pub fn evaluate(&self, x: &Rat) -> Result<IntervalUnion> {
        if *x < rat_int(0) || *x > rat_int(1) {
            return Err(Error::OutOfDomain(rat_to_f64(x)));
        }
        let mut pieces: Vec<(Rat, Rat)> = Vec::new();
        for s in &self.segments {
            if s.is_vertical() {
                if &s.x1 == x {
                    pieces.push((s.y1.clone(), s.y2.clone()));
                }
            } else if *x >= s.x1 && *x <= s.x2 {
                let y = s.value_at(x);
                pieces.push((y.clone(), y));
            }
        }
        for (px, py) in &self.points {
            if px == x {
                pieces.push((py.clone(), py.clone()));
            }
        }
        Ok(merge_intervals(pieces))
    }

    /// Union of F(x) over a closed x-interval, merged.
    fn image_over_interval(&self, lo: &Rat, hi: &Rat) -> IntervalUnion {
        let mut pieces: Vec<(Rat, Rat)> = Vec::new();
        for s in &self.segments {
            if s.is_vertical() {
                if s.x1 >= *lo && s.x1 <= *hi {
                    pieces.push((s.y1.clone(), s.y2.clone()));
                }
            } else {
                let u = s.x1.clone().max(lo.clone());
                let v = s.x2.clone().min(hi.clone());
                if u <= v {
                    let a = s.value_at(&u);
                    let b = s.value_at(&v);
                    let (a, b) = if a <= b { (a, b) } else { (b, a) };
                    pieces.push((a, b));
                }
            }
        }
        for (px, py) in &self.points {
            if px >= lo && px <= hi {
                pieces.push((py.clone(), py.clone()));
            }
        }
        merge_intervals(pieces)
    }

    /// G∘F where `self` is G: the graph of x -> union of G(y) over y in F(x).
    /// Piecewise-linear graphs stay piecewise linear except when a horizontal
    /// piece of F feeds a vertical piece of G at the same height; that
    /// produces a solid rectangle and is reported as an error.
    pub fn compose(&self, f: &IntervalSvf) -> Result<IntervalSvf> {
        let g = self;
        let mut segs: Vec<((Rat, Rat), (Rat, Rat))> = Vec::new();
        let mut pts: Vec<(Rat, Rat)> = Vec::new();
        let mut emit = |lo_x: Rat, lo_y: Rat, hi_x: Rat, hi_y: Rat| {
            if lo_x == hi_x && lo_y == hi_y {
                pts.push((lo_x, lo_y));
            } else {
                segs.push(((lo_x, lo_y), (hi_x, hi_y)));
            }
        };

        // point pieces of F
        for (px, py) in &f.points {
            for (zlo, zhi) in g.evaluate(py)? {
                emit(px.clone(), zlo, px.clone(), zhi);
            }
        }
        for s in &f.segments {
            if s.is_vertical() {
                // {a} x G([y1, y2])
                for (zlo, zhi) in g.image_over_interval(&s.y1, &s.y2) {
                    emit(s.x1.clone(), zlo, s.x1.clone(), zhi);
                }
                continue;
            }
            let slope = s.slope();
            if slope.is_zero() {
                // horizontal at height c over [x1, x2]
                let c = s.y1.clone();
                for t in &g.segments {
                    if t.is_vertical() {
                        if t.x1 == c {
                            return Err(Error::NotRepresentable {
                                x_lo: rat_to_string(&s.x1),
                                x_hi: rat_to_string(&s.x2),
                                y: rat_to_string(&c),
                                z_lo: rat_to_string(&t.y1),
                                z_hi: rat_to_string(&t.y2),
                            });
                        }
                    } else if c >= t.x1 && c <= t.x2 {
                        let z = t.value_at(&c);
                        emit(s.x1.clone(), z.clone(), s.x2.clone(), z);
                    }
                }
                for (qy, qz) in &g.points {
                    if *qy == c {
                        emit(s.x1.clone(), qz.clone(), s.x2.clone(), qz.clone());
                    }
                }
                continue;
            }
            // strictly monotone piece: y = f(x) over [x1, x2]
            let x_at = |y: &Rat| -> Rat { &s.x1 + (y - &s.y1) / &slope };
            for t in &g.segments {
                if t.is_vertical() {
                    // f(x) = t.x1 at a single x
                    let x = x_at(&t.x1);
                    if x >= s.x1 && x <= s.x2 {
                        emit(x.clone(), t.y1.clone(), x, t.y2.clone());
                    }
                } else {
                    // f(x) in [t.x1, t.x2] over a closed x-interval
                    let xa = x_at(&t.x1);
                    let xb = x_at(&t.x2);
                    let (mut lo, mut hi) = if xa <= xb { (xa, xb) } else { (xb, xa) };
                    if lo < s.x1 {
                        lo = s.x1.clone();
                    }
                    if hi > s.x2 {
                        hi = s.x2.clone();
                    }
                    if lo > hi {
                        continue;
                    }
                    let z_lo = t.value_at(&s.value_at(&lo));
                    let z_hi = t.value_at(&s.value_at(&hi));
                    emit(lo, z_lo, hi, z_hi);
                }
            }
            for (qy, qz) in &g.points {
                let x = x_at(qy);
                if x >= s.x1 && x <= s.x2 {
                    emit(x.clone(), qz.clone(), x, qz.clone());
                }
            }
        }
        IntervalSvf::new(segs, pts)
    }

    /// F^k; F^0 is the identity graph.
    pub fn iterate(&self, k: usize) -> Result<IntervalSvf> {
        let mut acc = IntervalSvf::identity_graph();
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    /// Graph reflected across the diagonal. Requires surjectivity (the
    /// y-projections must cover [0,1]); the error names a gap point.
    pub fn inverse(&self) -> Result<IntervalSvf> {
        let reflected_segments: Vec<((Rat, Rat), (Rat, Rat))> = self
            .segments
            .iter()
            .map(|s| {
                (
                    (s.y1.clone(), s.x1.clone()),
                    (s.y2.clone(), s.x2.clone()),
                )
            })
            .collect();
        let reflected_points: Vec<(Rat, Rat)> = self
            .points
            .iter()
            .map(|(x, y)| (y.clone(), x.clone()))
            .collect();
        match IntervalSvf::new(reflected_segments, reflected_points) {
            Ok(v) => Ok(v),
            Err(Error::SliceGap { lo, hi }) => Err(Error::NotSurjective(format!(
                "no preimage over ({lo}, {hi})"
            ))),
            Err(e) => Err(e),
        }
    }

    /// The conjugated graph {(phi(x), phi(y))} for a piecewise-linear
    /// homeomorphism phi of [0,1]; equals phi∘F∘phi^{-1}.
    pub fn transform(&self, phi: &PlMap) -> Result<IntervalSvf> {
        let mut segs: Vec<((Rat, Rat), (Rat, Rat))> = Vec::new();
        let mut pts: Vec<(Rat, Rat)> = Vec::new();
        for (px, py) in &self.points {
            pts.push((phi.eval(px), phi.eval(py)));
        }
        for s in &self.segments {
            // split the parameter [0,1] along the segment wherever either
            // coordinate crosses a breakpoint of phi
            let dx = &s.x2 - &s.x1;
            let dy = &s.y2 - &s.y1;
            let mut params: Vec<Rat> = vec![rat_int(0), rat_int(1)];
            for (bx, _) in &phi.breakpoints {
                if !dx.is_zero() {
                    let t = (bx - &s.x1) / &dx;
                    if t > rat_int(0) && t < rat_int(1) {
                        params.push(t);
                    }
                }
                if !dy.is_zero() {
                    let t = (bx - &s.y1) / &dy;
                    if t > rat_int(0) && t < rat_int(1) {
                        params.push(t);
                    }
                }
            }
            params.sort();
            params.dedup();
            let point_at = |t: &Rat| -> (Rat, Rat) {
                let x = &s.x1 + t * &dx;
                let y = &s.y1 + t * &dy;
                (phi.eval(&x), phi.eval(&y))
            };
            for w in params.windows(2) {
                let (ax, ay) = point_at(&w[0]);
                let (bx, by) = point_at(&w[1]);
                segs.push(((ax, ay), (bx, by)));
            }
        }
        IntervalSvf::new(segs, pts)
    }

    /// Outer discretization on the uniform N-point grid: cell (i, j) is
    /// marked when the graph meets it in more than a single corner point
    /// (segments must cross with a positive-length chord; isolated points
    /// mark every closed cell containing them). Grid pairs (x_i, y_j) lying
    /// on the graph are always marked.
    pub fn discretize(&self, n: usize) -> Result<FiniteRelation> {
        if n < 2 {
            return Err(Error::GridTooSmall(n, 2));
        }
        let space = Arc::new(MetricPointSet::unit_grid(n)?);
        let h = Rat::new(1.into(), ((n - 1) as i64).into());
        let half = &h / rat_int(2);
        let mut adj = vec![vec![false; n]; n];

        let clamp_idx = |r: &Rat| -> i64 {
            let v = r.to_integer();
            let v: i64 = v.try_into().unwrap_or(i64::MAX);
            v.clamp(0, (n - 1) as i64)
        };
        // smallest i with x_i + h/2 >= v  (i.e. ceil(v/h - 1/2))
        let lo_idx = |v: &Rat| clamp_idx(&(v / &h - &half / &h).ceil());
        // largest i with x_i - h/2 <= v  (i.e. floor(v/h + 1/2))
        let hi_idx = |v: &Rat| clamp_idx(&(v / &h + &half / &h).floor());

        for (px, py) in &self.points {
            for i in lo_idx(px)..=hi_idx(px) {
                for j in lo_idx(py)..=hi_idx(py) {
                    adj[i as usize][j as usize] = true;
                }
            }
        }
        for s in &self.segments {
            if s.is_vertical() {
                for i in lo_idx(&s.x1)..=hi_idx(&s.x1) {
                    for j in lo_idx(&s.y1)..=hi_idx(&s.y2) {
                        let cell_lo = Rat::new((j).into(), ((n - 1) as i64).into()) - &half;
                        let cell_hi = &cell_lo + &h;
                        let olo = s.y1.clone().max(cell_lo);
                        let ohi = s.y2.clone().min(cell_hi);
                        if ohi > olo {
                            adj[i as usize][j as usize] = true;
                        }
                    }
                }
                continue;
            }
            let slope = s.slope();
            for i in lo_idx(&s.x1)..=hi_idx(&s.x2) {
                let col_lo = Rat::new((i).into(), ((n - 1) as i64).into()) - &half;
                let col_hi = &col_lo + &h;
                let u = s.x1.clone().max(col_lo);
                let v = s.x2.clone().min(col_hi);
                if u >= v {
                    // at most a corner touch in this column
                    continue;
                }
                if slope.is_zero() {
                    let c = &s.y1;
                    for j in lo_idx(c)..=hi_idx(c) {
                        adj[i as usize][j as usize] = true;
                    }
                } else {
                    let a = s.value_at(&u);
                    let b = s.value_at(&v);
                    let (ylo, yhi) = if a <= b { (a, b) } else { (b, a) };
                    for j in lo_idx(&ylo)..=hi_idx(&yhi) {
                        let cell_lo = Rat::new((j).into(), ((n - 1) as i64).into()) - &half;
                        let cell_hi = &cell_lo + &h;
                        let olo = ylo.clone().max(cell_lo);
                        let ohi = yhi.clone().min(cell_hi);
                        if ohi > olo {
                            adj[i as usize][j as usize] = true;
                        }
                    }
                }
            }
        }
        FiniteRelation::new(space, adj)
    }

    /// Hausdorff distance between two interval unions on the line.
    pub fn hausdorff_union_distance(a: &IntervalUnion, b: &IntervalUnion) -> Result<Rat> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(directed_union_distance(a, b).max(directed_union_distance(b, a)))
    }

    /// Slice-to-slice continuity scan: computes H(F(x_k), F(x_{k+1})) on the
    /// N-point grid and flags jumps exceeding delta as discontinuity
    /// witnesses.
    pub fn check_hausdorff_continuity(&self, n: usize, delta: f64) -> Result<ContinuityReport> {
        if n < 3 {
            return Err(Error::GridTooSmall(n, 3));
        }
        let delta_rat = Rat::from_float(delta)
            .ok_or_else(|| Error::BadSpec("delta must be finite".into()))?;
        let slices: Vec<IntervalUnion> = (0..n)
            .map(|i| {
                let x = Rat::new((i as i64).into(), ((n - 1) as i64).into());
                self.evaluate(&x)
            })
            .collect::<Result<_>>()?;
        let mut jumps = Vec::with_capacity(n - 1);
        let mut flagged = Vec::new();
        for k in 0..(n - 1) {
            let hd = Self::hausdorff_union_distance(&slices[k], &slices[k + 1])?;
            if hd > delta_rat {
                flagged.push(k);
            }
            jumps.push(rat_to_f64(&hd));
        }
        Ok(ContinuityReport {
            grid: n,
            delta,
            jumps,
            flagged,
        })
    }
}

/// max over a of dist(a, B): attained at endpoints of A's intervals or at
/// gap midpoints of B lying inside A.
fn directed_union_distance(a: &IntervalUnion, b: &IntervalUnion) -> Rat {
    let mut candidates: Vec<Rat> = Vec::new();
    for (lo, hi) in a {
        candidates.push(lo.clone());
        candidates.push(hi.clone());
    }
    for w in b.windows(2) {
        let mid = (&w[0].1 + &w[1].0) / rat_int(2);
        if a.iter().any(|(lo, hi)| mid >= *lo && mid <= *hi) {
            candidates.push(mid);
        }
    }
    let dist_to_b = |p: &Rat| -> Rat {
        b.iter()
            .map(|(lo, hi)| {
                if p < lo {
                    lo - p
                } else if p > hi {
                    p - hi
                } else {
                    rat_int(0)
                }
            })
            .min()
            .unwrap()
    };
    candidates
        .iter()
        .map(dist_to_b)
        .max()
        .unwrap_or_else(|| rat_int(0))
}

#[derive(Debug, Clone)]
pub struct ContinuityReport {
    pub grid: usize,
    pub delta: f64,
    /// H(F(x_k), F(x_{k+1})) for k = 0..grid-2
    pub jumps: Vec<f64>,
    /// left indices of adjacent pairs whose jump exceeds delta
    pub flagged: Vec<usize>,
}

/// A strictly monotone piecewise-linear homeomorphism of [0,1], given by its
/// breakpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct PlMap {
    /// (x, phi(x)) with x strictly increasing from 0 to 1
    pub breakpoints: Vec<(Rat, Rat)>,
}

impl PlMap {
    pub fn new(breakpoints: Vec<(Rat, Rat)>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::BadHomeomorphism("need at least two breakpoints".into()));
        }
        let zero = rat_int(0);
        let one = rat_int(1);
        if breakpoints.first().unwrap().0 != zero || breakpoints.last().unwrap().0 != one {
            return Err(Error::BadHomeomorphism("x must run from 0 to 1".into()));
        }
        for w in breakpoints.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::BadHomeomorphism(
                    "x breakpoints must strictly increase".into(),
                ));
            }
        }
        let increasing = breakpoints.last().unwrap().1 > breakpoints.first().unwrap().1;
        for w in breakpoints.windows(2) {
            let ok = if increasing {
                w[1].1 > w[0].1
            } else {
                w[1].1 < w[0].1
            };
            if !ok {
                return Err(Error::BadHomeomorphism(
                    "y values must be strictly monotone".into(),
                ));
            }
        }
        let (first_y, last_y) = (
            breakpoints.first().unwrap().1.clone(),
            breakpoints.last().unwrap().1.clone(),
        );
        let covers = (first_y == zero && last_y == one) || (first_y == one && last_y == zero);
        if !covers {
            return Err(Error::BadHomeomorphism(
                "endpoints must map onto {0, 1}".into(),
            ));
        }
        Ok(PlMap { breakpoints })
    }

    /// The reflection phi(x) = 1 - x.
    pub fn reflection() -> PlMap {
        PlMap {
            breakpoints: vec![(rat_int(0), rat_int(1)), (rat_int(1), rat_int(0))],
        }
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let bps = &self.breakpoints;
        for w in bps.windows(2) {
            if *x >= w[0].0 && *x <= w[1].0 {
                let t = (x - &w[0].0) / (&w[1].0 - &w[0].0);
                return &w[0].1 + t * (&w[1].1 - &w[0].1);
            }
        }
        // callers keep x inside [0,1]; clamp to the nearest endpoint
        if *x < bps[0].0 {
            bps[0].1.clone()
        } else {
            bps.last().unwrap().1.clone()
        }
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;
    use crate::num::rat;

    /// Example 5.7: F(x) = {x + 1/2, 1/2 - x} for x <= 1/2 and
    /// {x - 1/2, 3/2 - x} for x >= 1/2.
    pub fn diamond() -> IntervalSvf {
        IntervalSvf::new(
            vec![
                ((rat(0, 1), rat(1, 2)), (rat(1, 2), rat(1, 1))),
                ((rat(0, 1), rat(1, 2)), (rat(1, 2), rat(0, 1))),
                ((rat(1, 2), rat(0, 1)), (rat(1, 1), rat(1, 2))),
                ((rat(1, 2), rat(1, 1)), (rat(1, 1), rat(1, 2))),
            ],
            vec![],
        )
        .unwrap()
    }

    /// Example 6.3: F(x) = {x} for 0 < x < 1, F(0) = F(1) = {0, 1}.
    pub fn corner_identity() -> IntervalSvf {
        IntervalSvf::new(
            vec![((rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1)))],
            vec![(rat(0, 1), rat(1, 1)), (rat(1, 1), rat(0, 1))],
        )
        .unwrap()
    }

    /// Example 7.4: F(x) = [0, x]; the filled triangle is the three edges
    /// plus vertical fill slices at multiples of 1/slices.
    pub fn lower_triangle(slices: usize) -> IntervalSvf {
        let mut segs = vec![
            ((rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))),
            ((rat(0, 1), rat(0, 1)), (rat(1, 1), rat(0, 1))),
            ((rat(1, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))),
        ];
        for k in 1..slices {
            let x = rat(k as i64, slices as i64);
            segs.push(((x.clone(), rat(0, 1)), (x.clone(), x.clone())));
        }
        IntervalSvf::new(segs, vec![]).unwrap()
    }

    /// The full square graph F(x) = [0, 1], as boundary plus fill slices.
    pub fn full_square(slices: usize) -> IntervalSvf {
        let mut segs = vec![
            ((rat(0, 1), rat(0, 1)), (rat(1, 1), rat(0, 1))),
            ((rat(0, 1), rat(1, 1)), (rat(1, 1), rat(1, 1))),
            ((rat(0, 1), rat(0, 1)), (rat(0, 1), rat(1, 1))),
            ((rat(1, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))),
        ];
        for k in 1..slices {
            let x = rat(k as i64, slices as i64);
            segs.push(((x.clone(), rat(0, 1)), (x.clone(), rat(1, 1))));
        }
        IntervalSvf::new(segs, vec![]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::num::rat;

    #[test]
    fn evaluate_diamond_slices() {
        let f = diamond();
        // F(1/4) = {3/4, 1/4}
        let slice = f.evaluate(&rat(1, 4)).unwrap();
        assert_eq!(slice, vec![(rat(1, 4), rat(1, 4)), (rat(3, 4), rat(3, 4))]);
        // F(0) = {1/2}
        assert_eq!(f.evaluate(&rat(0, 1)).unwrap(), vec![(rat(1, 2), rat(1, 2))]);
        assert!(f.evaluate(&rat(3, 2)).is_err());
        // identity: F(x) = {x}
        let id = IntervalSvf::identity_graph();
        assert_eq!(
            id.evaluate(&rat(1, 3)).unwrap(),
            vec![(rat(1, 3), rat(1, 3))]
        );
    }

    #[test]
    fn slice_gap_is_a_load_error() {
        // graph only over [0, 1/2]
        let err = IntervalSvf::new(
            vec![((rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 2)))],
            vec![],
        )
        .unwrap_err();
        match err {
            Error::SliceGap { lo, hi } => {
                assert_eq!(lo, "1/2");
                assert_eq!(hi, "1");
            }
            other => panic!("expected slice gap, got {other:?}"),
        }
    }

    #[test]
    fn compose_diamond_gives_both_diagonals() {
        let f = diamond();
        let f2 = f.compose(&f).unwrap();
        let expect = IntervalSvf::new(
            vec![
                ((rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))),
                ((rat(0, 1), rat(1, 1)), (rat(1, 1), rat(0, 1))),
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(f2, expect);
        // F^2(x) = {x, 1-x}
        let slice = f2.evaluate(&rat(1, 4)).unwrap();
        assert_eq!(slice, vec![(rat(1, 4), rat(1, 4)), (rat(3, 4), rat(3, 4))]);
        // compose with identity is identity on graphs
        let id = IntervalSvf::identity_graph();
        assert_eq!(f.compose(&id).unwrap(), f);
        assert_eq!(id.compose(&f).unwrap(), f);
        // iterate(F, 0) = identity
        assert_eq!(f.iterate(0).unwrap(), id);
        assert_eq!(f.iterate(2).unwrap(), expect);
    }

    #[test]
    fn lower_triangle_composes_to_itself() {
        let f = lower_triangle(4);
        let f2 = f.compose(&f).unwrap();
        // F(x) = [0,x] satisfies F^2 = F; fill slices at the same positions
        assert_eq!(f2, f);
    }

    #[test]
    fn rectangle_composition_is_rejected() {
        // F has a horizontal piece at height 1/2; G has a vertical piece at
        // x = 1/2, so G∘F contains a solid rectangle.
        let f = IntervalSvf::new(
            vec![((rat(0, 1), rat(1, 2)), (rat(1, 1), rat(1, 2)))],
            vec![],
        )
        .unwrap();
        let g = IntervalSvf::new(
            vec![
                ((rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))),
                ((rat(1, 2), rat(0, 1)), (rat(1, 2), rat(1, 1))),
            ],
            vec![],
        )
        .unwrap();
        assert!(matches!(
            g.compose(&f),
            Err(Error::NotRepresentable { .. })
        ));
    }

    #[test]
    fn inverse_examples() {
        // diamond is symmetric under reflection across the diagonal
        let f = diamond();
        assert_eq!(f.inverse().unwrap(), f);
        // identity too
        let id = IntervalSvf::identity_graph();
        assert_eq!(id.inverse().unwrap(), id);
        // non-surjective graph: constant map F(x) = {0}
        let c = IntervalSvf::new(
            vec![((rat(0, 1), rat(0, 1)), (rat(1, 1), rat(0, 1)))],
            vec![],
        )
        .unwrap();
        assert!(matches!(c.inverse(), Err(Error::NotSurjective(_))));
        // involution on a surjective graph
        let tri = lower_triangle(4);
        assert_eq!(tri.inverse().unwrap().inverse().unwrap(), tri);
    }

    #[test]
    fn discretize_identity_is_diagonal_band() {
        let id = IntervalSvf::identity_graph();
        let rel = id.discretize(5).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                assert_eq!(rel.contains(i, j), i == j, "cell ({i},{j})");
            }
        }
    }

    #[test]
    fn discretize_triangle_is_lower_triangular() {
        let tri = lower_triangle(2);
        let rel = tri.discretize(3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(rel.contains(i, j), j <= i, "cell ({i},{j})");
            }
        }
    }

    #[test]
    fn discretize_diamond_rows_have_exactly_the_branch_cells() {
        let f = diamond();
        let rel = f.discretize(5).unwrap();
        // rows 0 and 4: both branches land on the same cell (1/2)
        assert_eq!(rel.successors(0), vec![2]);
        assert_eq!(rel.successors(4), vec![2]);
        // row 1 (x = 1/4): cells {1/4, 3/4}; row 2 (x = 1/2): cells {0, 1}
        assert_eq!(rel.successors(1), vec![1, 3]);
        assert_eq!(rel.successors(2), vec![0, 4]);
        assert_eq!(rel.successors(3), vec![1, 3]);
    }

    #[test]
    fn discretize_marks_exact_grid_pairs() {
        // over-approximation: grid-aligned graph pairs are always marked
        let f = diamond();
        let n = 9;
        let rel = f.discretize(n).unwrap();
        for i in 0..n {
            let x = rat(i as i64, (n - 1) as i64);
            for (lo, hi) in f.evaluate(&x).unwrap() {
                assert_eq!(lo, hi);
                let num = lo.numer().clone();
                let den = lo.denom().clone();
                // y = num/den lands on the grid iff den divides n-1
                let scaled = num * num_bigint::BigInt::from((n - 1) as i64);
                let j_rat = Rat::new(scaled, den);
                if j_rat.is_integer() {
                    let j: i64 = j_rat.to_integer().try_into().unwrap();
                    assert!(rel.contains(i, j as usize), "({i},{j}) must be marked");
                }
            }
        }
    }

    #[test]
    fn continuity_scan_examples() {
        // diamond: continuous selections, no flags at delta = 0.1, N = 101
        let f = diamond();
        let r = f.check_hausdorff_continuity(101, 0.1).unwrap();
        assert!(r.flagged.is_empty());
        // corner identity: flags at x = 0 and x = 1 with jump about 1
        let g = corner_identity();
        let r = g.check_hausdorff_continuity(101, 0.1).unwrap();
        assert_eq!(r.flagged, vec![0, 99]);
        assert!((r.jumps[0] - 0.99).abs() < 1e-12);
        assert!((r.jumps[99] - 0.99).abs() < 1e-12);
        // identity: no flags
        let id = IntervalSvf::identity_graph();
        let r = id.check_hausdorff_continuity(101, 0.1).unwrap();
        assert!(r.flagged.is_empty());
    }

    #[test]
    fn hausdorff_union_distance_cases() {
        let a = vec![(rat(0, 1), rat(0, 1))];
        let b = vec![(rat(1, 1), rat(1, 1))];
        assert_eq!(
            IntervalSvf::hausdorff_union_distance(&a, &b).unwrap(),
            rat(1, 1)
        );
        let ab = vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))];
        assert_eq!(
            IntervalSvf::hausdorff_union_distance(&ab, &a).unwrap(),
            rat(1, 1)
        );
        assert_eq!(
            IntervalSvf::hausdorff_union_distance(&ab, &ab).unwrap(),
            rat(0, 1)
        );
        // gap midpoint matters: A = [0,1], B = {0} u {1}: H = 1/2
        let full = vec![(rat(0, 1), rat(1, 1))];
        assert_eq!(
            IntervalSvf::hausdorff_union_distance(&full, &ab).unwrap(),
            rat(1, 2)
        );
        assert!(IntervalSvf::hausdorff_union_distance(&vec![], &a).is_err());
    }

    #[test]
    fn transform_by_reflection_fixes_the_diamond() {
        let f = diamond();
        let phi = PlMap::reflection();
        assert_eq!(f.transform(&phi).unwrap(), f);
        // the triangle's boundary maps to the upper triangle's boundary: the
        // hypotenuse stays the diagonal, the bottom edge becomes the top one,
        // so the slice at 1/4 picks up the diagonal point and 1
        let tri = lower_triangle(2);
        let t = tri.transform(&phi).unwrap();
        let slice = t.evaluate(&rat(1, 4)).unwrap();
        assert_eq!(slice, vec![(rat(1, 4), rat(1, 4)), (rat(1, 1), rat(1, 1))]);
        // the fill slice at 1/2 maps to {1/2} x [1/2, 1]
        let slice = t.evaluate(&rat(1, 2)).unwrap();
        assert_eq!(slice, vec![(rat(1, 2), rat(1, 1))]);
    }

    #[test]
    fn plmap_validation() {
        assert!(PlMap::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 1))]).is_ok());
        assert!(PlMap::new(vec![(rat(0, 1), rat(1, 1)), (rat(1, 1), rat(0, 1))]).is_ok());
        // not monotone
        assert!(PlMap::new(vec![
            (rat(0, 1), rat(0, 1)),
            (rat(1, 2), rat(3, 4)),
            (rat(1, 1), rat(1, 2)),
        ])
        .is_err());
        // endpoints must land on {0,1}
        assert!(PlMap::new(vec![(rat(0, 1), rat(0, 1)), (rat(1, 1), rat(1, 2))]).is_err());
    }

    #[test]
    fn canonicalization_merges_collinear_pieces() {
        // diagonal in two halves plus a point on it
        let f = IntervalSvf::new(
            vec![
                ((rat(0, 1), rat(0, 1)), (rat(1, 2), rat(1, 2))),
                ((rat(1, 2), rat(1, 2)), (rat(1, 1), rat(1, 1))),
            ],
            vec![(rat(1, 4), rat(1, 4))],
        )
        .unwrap();
        assert_eq!(f, IntervalSvf::identity_graph());
    }
}
