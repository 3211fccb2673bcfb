//! Negative gradient flow of `E` with event bookkeeping, and the maps
//! `D̂` and `D`.

use nalgebra::{Matrix2, Vector2};
use num_bigint::BigInt;
use serde::Serialize;

use crate::config::{Scaled, Tolerances};
use crate::curve::{KnotCurve, Vec3};
use crate::energy::{energy, gradient, hessian, CordPoint, CriticalPoint};
use crate::error::{CordError, Result};
use crate::framing::Framing;
use crate::incidence::{
    closest_on_chord, framing_angle, swept_hits, Endpoint, EventKind, KnotIndex,
};
use crate::ring::{AlgebraElement, Monomial};

/// Orientation constants of the event exponents. Each is `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    /// A start-point framing crossing with increasing angle multiplies on the
    /// left by `μ^framing`; an end-point crossing with increasing angle
    /// multiplies on the right by `μ^-framing`.
    pub framing: i32,
    /// The start point moving forward through the basepoint multiplies on the
    /// left by `λ^basepoint`; the end point on the right by `λ^-basepoint`.
    pub basepoint: i32,
    pub split: i32,
    /// Side of the plane through the chord and the knot tangent at the hit
    /// on which the framing ray needs no correction; `0` disables it.
    pub product_side: i32,
    /// Exponent of the correction per unit of the second child's start angle
    /// sign.
    pub correction: i32,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            framing: 1,
            basepoint: 1,
            split: -1,
            product_side: 1,
            correction: 1,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    /// `+1` when the event function increases through its zero.
    pub direction: i32,
    pub s: f64,
    pub t: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hit: Option<(f64, f64)>,
    /// Monomials accumulated after applying this event.
    pub left: Monomial,
    pub right: Monomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "type", content = "label")]
pub enum Terminal {
    Generator(String),
    Contractible,
}

#[derive(Clone, Debug, Serialize)]
pub struct Split {
    pub event: usize,
    pub sign: i32,
    /// Framing correction `μ^ε` between the two factors.
    pub middle: i32,
    /// Side of the plane spanned by the chord and the knot tangent that the
    /// framing ray at the hit lies on, and the start angle of the second
    /// child; these decide `middle`.
    pub framing_side: i32,
    pub second_angle: f64,
    pub left: Monomial,
    pub right: Monomial,
    pub parent_length: f64,
    pub first: Box<FlowTrace>,
    pub second: Box<FlowTrace>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowTrace {
    pub initial: CordPoint,
    pub events: Vec<Event>,
    pub terminal: Terminal,
    pub left: Monomial,
    pub right: Monomial,
    pub splits: Vec<Split>,
    /// Energy after every accepted step, starting with the initial value.
    #[serde(skip)]
    pub energies: Vec<f64>,
    pub steps: usize,
    pub flow_time: f64,
}

impl FlowTrace {
    /// `∂`: the terminal value wrapped in the accumulated monomials.
    pub fn boundary_part(&self) -> AlgebraElement {
        let core = match &self.terminal {
            Terminal::Contractible => AlgebraElement::contractible(),
            Terminal::Generator(g) => AlgebraElement::generator(g.as_str()),
        };
        core.sandwich(self.left, self.right)
    }

    /// `δ`: signed products of the split children.
    pub fn split_part(&self) -> AlgebraElement {
        let mut acc = AlgebraElement::zero();
        for sp in &self.splits {
            let prod =
                &sp.first.value().right_mul(Monomial::mu_pow(sp.middle)) * &sp.second.value();
            let term = prod
                .sandwich(sp.left, sp.right)
                .scale(&BigInt::from(sp.sign));
            acc += &term;
        }
        acc
    }

    /// `D̂ = ∂ + δ`.
    pub fn value(&self) -> AlgebraElement {
        &self.boundary_part() + &self.split_part()
    }

    /// Total number of splits including descendants.
    pub fn split_count(&self) -> usize {
        self.splits
            .iter()
            .map(|s| 1 + s.first.split_count() + s.second.split_count())
            .sum()
    }

    /// Visits this trace and every descendant.
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a FlowTrace)) {
        f(self);
        for s in &self.splits {
            s.first.walk(f);
            s.second.walk(f);
        }
    }
}

/// Everything the flow needs about one knot.
pub struct FlowContext<'a> {
    pub curve: &'a KnotCurve,
    pub framing: &'a Framing,
    pub tol: Tolerances,
    pub sc: Scaled,
    pub index: KnotIndex,
    pub critical: &'a [CriticalPoint],
    /// Certified basin radius of each index-0 point (0 for other indices).
    pub basins: Vec<f64>,
    pub conventions: Conventions,
}

type V2 = Vector2<f64>;

struct Pending {
    lambda: f64,
    kind: EventKind,
    direction: i32,
    hit: Option<f64>,
}

impl<'a> FlowContext<'a> {
    pub fn new(
        curve: &'a KnotCurve,
        framing: &'a Framing,
        critical: &'a [CriticalPoint],
        tol: &Tolerances,
        conventions: Conventions,
    ) -> Self {
        let sc = tol.scaled(curve.length());
        let mut ctx = FlowContext {
            curve,
            framing,
            tol: *tol,
            sc,
            index: KnotIndex::new(curve),
            critical,
            basins: vec![0.0; critical.len()],
            conventions,
        };
        ctx.basins = critical
            .iter()
            .map(|c| {
                if c.index == 0 {
                    ctx.certified_basin(c)
                } else {
                    0.0
                }
            })
            .collect();
        ctx
    }

    /// Largest radius up to `basin_tol` on which the Hessian stays positive
    /// definite and no framing or basepoint event function changes sign.
    fn certified_basin(&self, c: &CriticalPoint) -> f64 {
        let mut r = self.sc.basin;
        let center = c.cord;
        'shrink: while r > 1e-6 * self.sc.length {
            let a0 = [Endpoint::Start, Endpoint::End]
                .map(|e| framing_angle(self.curve, self.framing, center.s, center.t, e));
            for k in 0..32 {
                let phi = std::f64::consts::TAU * k as f64 / 32.0;
                for frac in [0.5, 1.0] {
                    let s = center.s + frac * r * phi.cos();
                    let t = center.t + frac * r * phi.sin();
                    let h = hessian(self.curve, s, t);
                    if h[(0, 0)] <= 0.0 || h.determinant() <= 0.0 {
                        r *= 0.5;
                        continue 'shrink;
                    }
                    for (i, e) in [Endpoint::Start, Endpoint::End].into_iter().enumerate() {
                        let a = framing_angle(self.curve, self.framing, s, t, e);
                        let changed = match (a0[i], a) {
                            (Some(x), Some(y)) => x.signum() != y.signum() && x.cos() > 0.0,
                            _ => true,
                        };
                        if changed {
                            r *= 0.5;
                            continue 'shrink;
                        }
                    }
                    let l = self.sc.length;
                    if (s / l).floor() != (center.s / l).floor()
                        || (t / l).floor() != (center.t / l).floor()
                    {
                        r *= 0.5;
                        continue 'shrink;
                    }
                }
            }
            return r;
        }
        r
    }

    fn grad(&self, x: V2) -> V2 {
        gradient(self.curve, x[0], x[1])
    }

    fn energy_at(&self, x: V2) -> f64 {
        energy(self.curve, x[0], x[1])
    }

    fn implicit_step(&self, x: V2, h: f64) -> V2 {
        let g = self.grad(x);
        let hm = hessian(self.curve, x[0], x[1]);
        let a = Matrix2::identity() + hm * h;
        match a.lu().solve(&(-g * h)) {
            Some(d) => d,
            None => -g * h,
        }
    }

    fn angles(&self, x: V2) -> [Option<f64>; 2] {
        [Endpoint::Start, Endpoint::End]
            .map(|e| framing_angle(self.curve, self.framing, x[0], x[1], e))
    }

    fn chord_ends(&self, x: V2) -> (Vec3, Vec3) {
        (self.curve.point(x[0]), self.curve.point(x[1]))
    }

    fn terminal_at(&self, x: V2) -> Result<Option<Terminal>> {
        let gap = self.curve.circular_delta(x[0], x[1]);
        if gap.abs() < self.sc.diag_tube {
            let mid = x[0] + 0.5 * gap;
            if self.curve.circular_delta(mid, 0.0).abs() < self.sc.event {
                return Err(CordError::GenericityViolation(format!(
                    "flow collapses onto the diagonal at the basepoint (s = {:.6})",
                    self.curve.wrap(mid)
                )));
            }
            return Ok(Some(Terminal::Contractible));
        }
        let c = CordPoint::new(self.curve, x[0], x[1]);
        for (k, r) in self.critical.iter().zip(&self.basins) {
            if k.index == 0 && k.cord.distance(&c, self.curve) < *r {
                return Ok(Some(Terminal::Generator(k.label.clone())));
            }
        }
        Ok(None)
    }

    fn near_saddle(&self, x: V2, skip: Option<usize>) -> Option<&CriticalPoint> {
        let c = CordPoint::new(self.curve, x[0], x[1]);
        self.critical.iter().enumerate().find_map(|(i, k)| {
            (k.index == 1
                && Some(i) != skip
                && k.cord.distance(&c, self.curve) < self.sc.trajectory)
                .then_some(k)
        })
    }

    /// Signed offset of the knot near `u` from the chord line at `x`.
    fn s_function(&self, x: V2, u: f64) -> (f64, f64, f64) {
        let (p, q) = self.chord_ends(x);
        let (u2, tau, r) = closest_on_chord(self.curve, p, q, u, 0.5);
        let n = (q - p).cross(&self.curve.tangent(u2));
        (r.dot(&n.normalize()), u2, tau)
    }

    fn locate_events(
        &self,
        x0: V2,
        x1: V2,
        a0: &[Option<f64>; 2],
        a1: &[Option<f64>; 2],
    ) -> Result<Vec<Pending>> {
        let mut out = Vec::new();
        let l = self.sc.length;
        let dx = x1 - x0;
        for (k, kind) in [(0, EventKind::BStart), (1, EventKind::BEnd)] {
            let (f0, f1) = ((x0[k] / l).floor(), (x1[k] / l).floor());
            if f0 != f1 {
                let boundary = f0.max(f1) * l;
                out.push(Pending {
                    lambda: (boundary - x0[k]) / dx[k],
                    kind,
                    direction: if dx[k] > 0.0 { 1 } else { -1 },
                    hit: None,
                });
            }
        }
        let tol_lambda = (self.sc.event / dx.norm().max(1e-300)).min(1e-3);
        for (k, kind, e) in [
            (0, EventKind::FStart, Endpoint::Start),
            (1, EventKind::FEnd, Endpoint::End),
        ] {
            let (Some(p0), Some(p1)) = (a0[k], a1[k]) else {
                continue;
            };
            if p0.signum() == p1.signum() || p0.cos() <= 0.0 || p1.cos() <= 0.0 {
                continue;
            }
            let (mut lo, mut hi) = (0.0, 1.0);
            while hi - lo > tol_lambda {
                let mid = 0.5 * (lo + hi);
                let xm = x0 + dx * mid;
                let pm =
                    framing_angle(self.curve, self.framing, xm[0], xm[1], e).ok_or_else(|| {
                        CordError::GenericityViolation(
                            "flow passes through the tangency set".into(),
                        )
                    })?;
                if pm.signum() == p0.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(Pending {
                lambda: 0.5 * (lo + hi),
                kind,
                direction: if p1 > p0 { 1 } else { -1 },
                hit: None,
            });
        }
        let margin = self.sc.endpoint_margin + dx.abs().max() + 2.0 * self.curve.spacing();
        let hits = swept_hits(
            self.curve,
            &self.index,
            self.chord_ends(x0),
            self.chord_ends(x1),
            &[x0[0], x0[1], x1[0], x1[1]],
            margin,
        );
        let mut seen: Vec<f64> = Vec::new();
        for u in hits {
            if seen
                .iter()
                .any(|&v| self.curve.circular_delta(u, v).abs() < 4.0 * self.curve.spacing())
            {
                continue;
            }
            seen.push(u);
            let (f0, _, _) = self.s_function(x0, u);
            let (f1, _, _) = self.s_function(x1, u);
            if f0.signum() == f1.signum() {
                continue;
            }
            let (mut lo, mut hi) = (0.0, 1.0);
            while hi - lo > tol_lambda {
                let mid = 0.5 * (lo + hi);
                let (fm, _, _) = self.s_function(x0 + dx * mid, u);
                if fm.signum() == f0.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(Pending {
                lambda: 0.5 * (lo + hi),
                kind: EventKind::S,
                direction: 0,
                hit: Some(u),
            });
        }
        out.sort_by(|a, b| a.lambda.total_cmp(&b.lambda));
        for w in out.windows(2) {
            let close = (w[1].lambda - w[0].lambda) * dx.norm() < self.sc.event;
            let frames = matches!(
                (w[0].kind, w[1].kind),
                (EventKind::FStart, EventKind::FEnd) | (EventKind::FEnd, EventKind::FStart)
            );
            if close && !frames {
                return Err(CordError::GenericityViolation(format!(
                    "simultaneous {:?} and {:?} events",
                    w[0].kind, w[1].kind
                )));
            }
        }
        Ok(out)
    }

    /// Flows `c` to its terminal and records events and splits.
    pub fn integrate(&self, c: CordPoint) -> Result<FlowTrace> {
        let mut budget = self.tol.max_splits;
        self.integrate_inner(V2::new(c.s, c.t), None, &mut budget)
    }

    fn integrate_inner(
        &self,
        start: V2,
        origin: Option<usize>,
        budget: &mut usize,
    ) -> Result<FlowTrace> {
        let curve = self.curve;
        let initial = CordPoint::new(curve, start[0], start[1]);
        let mut trace = FlowTrace {
            initial,
            events: Vec::new(),
            terminal: Terminal::Contractible,
            left: Monomial::ONE,
            right: Monomial::ONE,
            splits: Vec::new(),
            energies: vec![initial.energy()],
            steps: 0,
            flow_time: 0.0,
        };
        let mut x = V2::new(initial.s, initial.t);
        let mut e = self.energy_at(x);
        let mut angles = self.angles(x);
        if angles.iter().any(Option::is_none) {
            return Err(CordError::GenericityViolation(
                "initial cord is tangent to the knot".into(),
            ));
        }
        let mut h: f64 = 0.05;
        let atol = 1e-7 * self.sc.length;
        let h_min = 1e-12;
        loop {
            if let Some(term) = self.terminal_at(x)? {
                if term == Terminal::Contractible {
                    self.collapse(x, &mut trace);
                }
                trace.terminal = term;
                return Ok(trace);
            }
            if trace.steps > 200_000 {
                return Err(CordError::StepCollapse(x[0], x[1]));
            }
            // one trial step with step-doubling error control
            let (x1, a1, e1) = loop {
                if h < h_min {
                    return Err(CordError::StepCollapse(x[0], x[1]));
                }
                let full = x + self.implicit_step(x, h);
                let half = x + self.implicit_step(x, 0.5 * h);
                let two = half + self.implicit_step(half, 0.5 * h);
                let err = (full - two).norm();
                let disp = (two - x).norm();
                if err > atol || disp > self.sc.max_step {
                    h *= 0.5;
                    continue;
                }
                let e1 = self.energy_at(two);
                if e1 >= e {
                    h *= 0.5;
                    continue;
                }
                let a1 = self.angles(two);
                let too_fast = angles.iter().zip(&a1).any(|(p, q)| match (p, q) {
                    (Some(p), Some(q)) => {
                        let d = (q - p + std::f64::consts::PI).rem_euclid(std::f64::consts::TAU)
                            - std::f64::consts::PI;
                        d.abs() > 0.5
                    }
                    _ => true,
                });
                if too_fast {
                    if h < 1e-9 {
                        return Err(CordError::GenericityViolation(
                            "flow passes through the tangency set".into(),
                        ));
                    }
                    h *= 0.5;
                    continue;
                }
                if err < 0.1 * atol {
                    h *= 2.0;
                }
                break (two, a1, e1);
            };
            let pending = self.locate_events(x, x1, &angles, &a1)?;
            for p in pending {
                let xe = x + (x1 - x) * p.lambda;
                let (s, t) = (curve.wrap(xe[0]), curve.wrap(xe[1]));
                let mut hit = None;
                let conv = self.conventions;
                match p.kind {
                    EventKind::BStart => {
                        trace.left = trace.left * Monomial::lambda_pow(conv.basepoint * p.direction)
                    }
                    EventKind::BEnd => {
                        trace.right =
                            trace.right * Monomial::lambda_pow(-conv.basepoint * p.direction)
                    }
                    EventKind::FStart => {
                        trace.left = trace.left * Monomial::mu_pow(conv.framing * p.direction)
                    }
                    EventKind::FEnd => {
                        trace.right = trace.right * Monomial::mu_pow(-conv.framing * p.direction)
                    }
                    EventKind::S => {
                        let split =
                            self.split(xe, p.hit.unwrap(), trace.events.len(), &trace, budget)?;
                        hit = Some((
                            split.first.initial.t,
                            split.first.initial.length / (split.parent_length),
                        ));
                        trace.splits.push(split);
                    }
                }
                trace.events.push(Event {
                    time: trace.flow_time + p.lambda * h,
                    kind: p.kind,
                    direction: p.direction,
                    s,
                    t,
                    hit,
                    left: trace.left,
                    right: trace.right,
                });
            }
            if let Some(k) = self.near_saddle(x1, origin) {
                return Err(CordError::GenericityViolation(format!(
                    "trajectory passes within {:.1e} of the index-1 cord {}",
                    self.sc.trajectory, k.label
                )));
            }
            x = x1;
            e = e1;
            angles = a1;
            trace.steps += 1;
            trace.flow_time += h;
            trace.energies.push(e);
        }
    }

    /// Slides both endpoints of a cord inside the diagonal tube to their
    /// midpoint, recording the basepoint crossings on the way.
    fn collapse(&self, x: V2, trace: &mut FlowTrace) {
        let l = self.sc.length;
        let gap = self.curve.circular_delta(x[0], x[1]);
        let target = [x[0] + 0.5 * gap, x[1] - 0.5 * gap];
        let conv = self.conventions;
        for (k, kind) in [(0, EventKind::BStart), (1, EventKind::BEnd)] {
            let crossings = (target[k] / l).floor() - (x[k] / l).floor();
            if crossings == 0.0 {
                continue;
            }
            let direction = crossings.signum() as i32;
            match kind {
                EventKind::BStart => {
                    trace.left = trace.left * Monomial::lambda_pow(conv.basepoint * direction)
                }
                _ => trace.right = trace.right * Monomial::lambda_pow(-conv.basepoint * direction),
            }
            trace.events.push(Event {
                time: trace.flow_time,
                kind,
                direction,
                s: self.curve.wrap(target[0]),
                t: self.curve.wrap(target[1]),
                hit: None,
                left: trace.left,
                right: trace.right,
            });
        }
    }

    /// Relation (iv) at a transverse interior hit near knot parameter `u`.
    fn split(
        &self,
        xe: V2,
        u: f64,
        event: usize,
        parent: &FlowTrace,
        budget: &mut usize,
    ) -> Result<Split> {
        if *budget == 0 {
            return Err(CordError::MaxSplits(self.tol.max_splits));
        }
        *budget -= 1;
        let curve = self.curve;
        let (p, q) = self.chord_ends(xe);
        let (u, tau, r) = closest_on_chord(curve, p, q, u, 0.5);
        if r.norm() > 1e3 * self.sc.intersect
            || tau <= self.tol.tau_floor
            || tau >= 1.0 - self.tol.tau_floor
        {
            return Err(CordError::GenericityViolation(format!(
                "interior hit at u = {u:.6} is not transverse (τ = {tau:.4})"
            )));
        }
        let w = q - p;
        let d = w.normalize();
        let vel = -self.grad(xe);
        let js = curve.tangent(xe[0]);
        let jt = curve.tangent(xe[1]);
        let v = js * ((1.0 - tau) * vel[0]) + jt * (tau * vel[1]);
        let tu = curve.tangent(u).normalize();
        let n = d.cross(&tu);
        let conv = self.conventions;
        let sign = conv.split * (tu.dot(&d.cross(&v))).signum() as i32;
        let side = self.framing.nu(curve, u).dot(&n).signum() as i32;
        let psi = framing_angle(curve, self.framing, u, xe[1], Endpoint::Start).unwrap_or(0.0);
        let middle = if conv.product_side == 0 || side == conv.product_side {
            0
        } else {
            conv.correction * psi.signum() as i32
        };
        let parent_length = w.norm();
        let first = CordPoint::new(curve, xe[0], u);
        let second = CordPoint::new(curve, u, xe[1]);
        for child in [&first, &second] {
            if child.length > parent_length - self.sc.min_split_decrease
                || child.length < 2.0 * self.sc.endpoint_margin
            {
                return Err(CordError::ShortChild);
            }
        }
        let first = self.integrate_inner(V2::new(first.s, first.t), None, budget)?;
        let second = self.integrate_inner(V2::new(second.s, second.t), None, budget)?;
        Ok(Split {
            event,
            sign,
            middle,
            framing_side: side,
            second_angle: psi,
            left: parent.left,
            right: parent.right,
            parent_length,
            first: Box::new(first),
            second: Box::new(second),
        })
    }

    /// Points on both sides of an index-1 cord along its unstable direction;
    /// `k₊` moves the start point forward along the knot. The flag reports a
    /// vertical unstable direction, where the side labeling is conventional.
    pub fn select_k_pm(&self, k: &CriticalPoint) -> Result<(CordPoint, CordPoint, bool)> {
        let mut e = k.unstable_direction();
        let vertical = e[0].abs() < 1e-9;
        if e[0] < 0.0 || (vertical && e[1] < 0.0) {
            e = -e;
        }
        let x = V2::new(k.cord.s, k.cord.t);
        let mut h = 10.0 * self.sc.trajectory;
        let a0 = self.angles(x);
        loop {
            let plus = x + e * h;
            let minus = x - e * h;
            let clean = [plus, minus].iter().all(|&y| {
                let a1 = self.angles(y);
                self.locate_events(x, y, &a0, &a1)
                    .map(|v| v.is_empty())
                    .unwrap_or(false)
            });
            if clean {
                return Ok((
                    CordPoint::new(self.curve, plus[0], plus[1]),
                    CordPoint::new(self.curve, minus[0], minus[1]),
                    vertical,
                ));
            }
            h *= 0.5;
            if h < 1e-3 * self.sc.trajectory {
                return Err(CordError::GenericityViolation(format!(
                    "index-1 cord {} lies on an event set",
                    k.label
                )));
            }
        }
    }

    /// Flows from both sides of an index-1 cord.
    pub fn boundary_traces(&self, k: &CriticalPoint) -> Result<(FlowTrace, FlowTrace)> {
        let (plus, minus, _) = self.select_k_pm(k)?;
        let origin = self.critical.iter().position(|c| std::ptr::eq(c, k));
        let mut b1 = self.tol.max_splits;
        let mut b2 = self.tol.max_splits;
        let tp = self.integrate_inner(V2::new(plus.s, plus.t), origin, &mut b1)?;
        let tm = self.integrate_inner(V2::new(minus.s, minus.t), origin, &mut b2)?;
        Ok((tp, tm))
    }

    /// `D(k) = D̂(k₊) − D̂(k₋)`.
    pub fn boundary(&self, k: &CriticalPoint) -> Result<AlgebraElement> {
        let (tp, tm) = self.boundary_traces(k)?;
        Ok(&tp.value() - &tm.value())
    }

    /// `D̂(c)`.
    pub fn dhat(&self, c: CordPoint) -> Result<AlgebraElement> {
        Ok(self.integrate(c)?.value())
    }
}
