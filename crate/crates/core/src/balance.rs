//! Integral balance laws `d/dt ∫_Ω Ψ dA + ∮_∂Ω P^α n_α ds = 0` over
//! axis-aligned rectangles, including rectangles crossed by a front.
//!
//! Straight fronts are handled exactly: each crossed cell is clipped into the
//! ahead and behind polygons and each is integrated with its own branch.
//! Other fronts fall back to choosing the branch node by node from the sign
//! of `γ`, which only converges at first order in the cell size.

use crate::conservation::{density_flux, Law};
use crate::error::{Error, Result};
use crate::fields::Point;
use crate::jumps::{balance_jump_residual, extract_jumps, JumpResidual};
use crate::quadrature::{clip_half_plane, polygon_area, Rule};
use crate::solutions::{Branch, PiecewiseField};
use crate::wavefront::LevelSet;

/// Default Gauss–Legendre order per cell and direction.
pub const DEFAULT_ORDER: usize = 8;
/// Default number of cells per direction.
pub const DEFAULT_CELLS: usize = 4;

/// `[a₁, b₁] × [a₂, b₂]` with its quadrature grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    a1: f64,
    b1: f64,
    a2: f64,
    b2: f64,
    order: usize,
    cells: usize,
}

impl Region {
    pub fn new(a1: f64, b1: f64, a2: f64, b2: f64) -> Result<Self> {
        Self::with_grid(a1, b1, a2, b2, DEFAULT_ORDER, DEFAULT_CELLS)
    }

    pub fn with_grid(a1: f64, b1: f64, a2: f64, b2: f64, order: usize, cells: usize) -> Result<Self> {
        for (field, v) in [("a1", a1), ("b1", b1), ("a2", a2), ("b2", b2)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    field,
                    value: v,
                    reason: "corner coordinates must be finite",
                });
            }
        }
        if a1 >= b1 {
            return Err(Error::InvalidParameter {
                field: "b1",
                value: b1,
                reason: "must exceed a1",
            });
        }
        if a2 >= b2 {
            return Err(Error::InvalidParameter {
                field: "b2",
                value: b2,
                reason: "must exceed a2",
            });
        }
        if order < 4 {
            return Err(Error::InvalidParameter {
                field: "order",
                value: order as f64,
                reason: "quadrature order must be at least 4",
            });
        }
        if cells == 0 {
            return Err(Error::InvalidParameter {
                field: "cells",
                value: 0.0,
                reason: "need at least one cell per direction",
            });
        }
        Ok(Region {
            a1,
            b1,
            a2,
            b2,
            order,
            cells,
        })
    }

    pub fn x1_range(&self) -> [f64; 2] {
        [self.a1, self.b1]
    }

    pub fn x2_range(&self) -> [f64; 2] {
        [self.a2, self.b2]
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Same rectangle with a different quadrature order.
    pub fn with_order(&self, order: usize) -> Result<Self> {
        Self::with_grid(self.a1, self.b1, self.a2, self.b2, order, self.cells)
    }

    pub fn area(&self) -> f64 {
        (self.b1 - self.a1) * (self.b2 - self.a2)
    }

    /// Counter-clockwise corners.
    pub fn corners(&self) -> [[f64; 2]; 4] {
        [
            [self.a1, self.a2],
            [self.b1, self.a2],
            [self.b1, self.b2],
            [self.a1, self.b2],
        ]
    }

    /// Whether the front passes through the open rectangle at time `t`.
    pub fn is_crossed(&self, front: &dyn LevelSet, t: f64) -> bool {
        let mut pos = false;
        let mut neg = false;
        for c in self.corners() {
            let g = front.value(Point::new(c[0], c[1], t));
            pos |= g > 0.0;
            neg |= g < 0.0;
        }
        pos && neg
    }

    fn cell(&self, i: usize, j: usize) -> ([f64; 2], [f64; 2]) {
        let n = self.cells as f64;
        let dx = (self.b1 - self.a1) / n;
        let dy = (self.b2 - self.a2) / n;
        (
            [self.a1 + dx * i as f64, self.a1 + dx * (i + 1) as f64],
            [self.a2 + dy * j as f64, self.a2 + dy * (j + 1) as f64],
        )
    }
}

/// Integral of the balance law over a rectangle at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport {
    pub law: Law,
    pub time: f64,
    /// `∫_Ω Ψ dA` at `time`
    pub density_integral: f64,
    /// `∮ P^α n_α ds` at `time`
    pub flux_integral: f64,
    /// central-difference estimate of `d/dt ∫_Ω Ψ dA`
    pub time_derivative: f64,
    /// `time_derivative + flux_integral`
    pub residual: f64,
    /// change of the residual terms when the quadrature order is doubled
    pub quadrature_error: f64,
    /// `|time_derivative| + ∮|P^α n_α| ds`
    pub scale: f64,
}

impl BalanceReport {
    /// `|residual| / max(scale, 1)`
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.scale.max(1.0)
    }
}

fn branch_at(front: Option<&dyn LevelSet>, p: Point) -> Branch {
    match front {
        Some(f) if f.value(p) < 0.0 => Branch::Behind,
        _ => Branch::Ahead,
    }
}

/// Runs `f` inside a quadrature closure and keeps the first error.
struct Guard<'a> {
    err: Option<Error>,
    f: &'a dyn Fn(Branch, Point) -> Result<f64>,
}

impl Guard<'_> {
    fn eval(&mut self, branch: Branch, p: Point) -> f64 {
        if self.err.is_some() {
            return 0.0;
        }
        match (self.f)(branch, p) {
            Ok(v) => v,
            Err(e) => {
                self.err = Some(e);
                0.0
            }
        }
    }

    fn finish(self, v: f64) -> Result<f64> {
        match self.err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

fn integrate_area(
    field: &dyn PiecewiseField,
    region: &Region,
    t: f64,
    f: &dyn Fn(Branch, Point) -> Result<f64>,
) -> Result<f64> {
    let rule = Rule::new(region.order);
    let front = field.front();
    let line = front.and_then(|f| f.as_line());
    let mut g = Guard { err: None, f };
    let mut total = 0.0;
    for i in 0..region.cells {
        for j in 0..region.cells {
            let (x, y) = region.cell(i, j);
            let rect = [[x[0], y[0]], [x[1], y[0]], [x[1], y[1]], [x[0], y[1]]];
            total += match (front, line) {
                (None, _) => rule.rectangle(x, y, |a, b| g.eval(Branch::Ahead, Point::new(a, b, t))),
                (Some(_), Some(l)) => {
                    let off = l.offset(t);
                    let ahead = clip_half_plane(&rect, l.a1, l.a2, off);
                    let behind = clip_half_plane(&rect, -l.a1, -l.a2, -off);
                    let cell_area = (x[1] - x[0]) * (y[1] - y[0]);
                    let tiny = 1e-14 * cell_area;
                    if polygon_area(&behind).abs() <= tiny {
                        rule.rectangle(x, y, |a, b| g.eval(Branch::Ahead, Point::new(a, b, t)))
                    } else if polygon_area(&ahead).abs() <= tiny {
                        rule.rectangle(x, y, |a, b| g.eval(Branch::Behind, Point::new(a, b, t)))
                    } else {
                        rule.convex_polygon(&ahead, |a, b| g.eval(Branch::Ahead, Point::new(a, b, t)))
                            + rule.convex_polygon(&behind, |a, b| g.eval(Branch::Behind, Point::new(a, b, t)))
                    }
                }
                (Some(fr), None) => rule.rectangle(x, y, |a, b| {
                    let p = Point::new(a, b, t);
                    g.eval(branch_at(Some(fr), p), p)
                }),
            };
        }
    }
    g.finish(total)
}

/// Sub-segments of `[p, q]` on a single side of the front with their branch.
fn split_segment(front: Option<&dyn LevelSet>, p: [f64; 2], q: [f64; 2], t: f64) -> Vec<([f64; 2], [f64; 2], Option<Branch>)> {
    match front.and_then(|f| f.as_line()) {
        Some(l) => {
            let gp = l.a1 * p[0] + l.a2 * p[1] + l.offset(t);
            let gq = l.a1 * q[0] + l.a2 * q[1] + l.offset(t);
            let side = |g: f64| if g < 0.0 { Branch::Behind } else { Branch::Ahead };
            if gp * gq < 0.0 {
                let s = gp / (gp - gq);
                let m = [p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])];
                vec![(p, m, Some(side(gp))), (m, q, Some(side(gq)))]
            } else {
                // Endpoint on the line: the other endpoint decides.
                let g = if gp == 0.0 { gq } else { gp };
                vec![(p, q, Some(side(g)))]
            }
        }
        None if front.is_none() => vec![(p, q, Some(Branch::Ahead))],
        None => vec![(p, q, None)],
    }
}

fn integrate_boundary(
    field: &dyn PiecewiseField,
    region: &Region,
    t: f64,
    f: &dyn Fn(Branch, Point, [f64; 2]) -> Result<f64>,
) -> Result<f64> {
    let rule = Rule::new(region.order);
    let front = field.front();
    let corners = region.corners();
    let normals = [[0.0, -1.0], [1.0, 0.0], [0.0, 1.0], [-1.0, 0.0]];
    let mut err = None;
    let mut total = 0.0;
    for (k, n) in normals.iter().enumerate() {
        let (a, b) = (corners[k], corners[(k + 1) % 4]);
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        for c in 0..region.cells {
            let s0 = c as f64 / region.cells as f64;
            let s1 = (c + 1) as f64 / region.cells as f64;
            let p = [a[0] + s0 * (b[0] - a[0]), a[1] + s0 * (b[1] - a[1])];
            let q = [a[0] + s1 * (b[0] - a[0]), a[1] + s1 * (b[1] - a[1])];
            for (u, v, branch) in split_segment(front, p, q, t) {
                let seg = (v[0] - u[0]).hypot(v[1] - u[1]);
                if seg <= 1e-15 * len {
                    continue;
                }
                total += rule.interval(0.0, seg, |s| {
                    if err.is_some() {
                        return 0.0;
                    }
                    let x = Point::new(u[0] + s / seg * (v[0] - u[0]), u[1] + s / seg * (v[1] - u[1]), t);
                    let br = branch.unwrap_or_else(|| branch_at(front, x));
                    f(br, x, *n).unwrap_or_else(|e| {
                        err = Some(e);
                        0.0
                    })
                });
            }
        }
    }
    match err {
        Some(e) => Err(e),
        None => Ok(total),
    }
}

/// `∫_Ω Ψ₍ⱼ₎ dA` at time `t`.
pub fn density_integral(field: &dyn PiecewiseField, law: Law, region: &Region, t: f64) -> Result<f64> {
    let p = field.params();
    integrate_area(field, region, t, &|br, x| {
        Ok(density_flux(law, &field.branch_jet(br, x)?, p).density)
    })
}

/// `∮ P₍ⱼ₎^α n_α ds` over the boundary of `region` at time `t`.
pub fn boundary_flux_integral(field: &dyn PiecewiseField, law: Law, region: &Region, t: f64) -> Result<f64> {
    let p = field.params();
    integrate_boundary(field, region, t, &|br, x, n| {
        Ok(density_flux(law, &field.branch_jet(br, x)?, p).normal_flux(n))
    })
}

fn boundary_flux_magnitude(field: &dyn PiecewiseField, law: Law, region: &Region, t: f64) -> Result<f64> {
    let p = field.params();
    integrate_boundary(field, region, t, &|br, x, n| {
        Ok(density_flux(law, &field.branch_jet(br, x)?, p).normal_flux(n).abs())
    })
}

/// Default time step of [`balance_residual`] at time `t`.
pub fn default_time_step(t: f64) -> f64 {
    1e-4 * (1.0 + t.abs())
}

fn central_rate(field: &dyn PiecewiseField, law: Law, region: &Region, t: f64, dt: f64) -> Result<f64> {
    let plus = density_integral(field, law, region, t + dt)?;
    let minus = density_integral(field, law, region, t - dt)?;
    Ok((plus - minus) / (2.0 * dt))
}

/// Balance residual `d/dt ∫_Ω Ψ + ∮ P^α n_α` at time `t`.
///
/// The time derivative is a central difference extrapolated once in `dt`.
/// A front crossing the rectangle at `t` must still cross it at `t ± dt`.
pub fn balance_residual(field: &dyn PiecewiseField, law: Law, region: &Region, t: f64, dt: f64) -> Result<BalanceReport> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter {
            field: "dt",
            value: dt,
            reason: "must be finite and > 0",
        });
    }
    if !t.is_finite() {
        return Err(Error::InvalidParameter {
            field: "t",
            value: t,
            reason: "must be finite",
        });
    }
    if let Some(front) = field.front() {
        if region.is_crossed(front, t) && !(region.is_crossed(front, t - dt) && region.is_crossed(front, t + dt)) {
            return Err(Error::FrontLeavesRegion);
        }
    }
    let density = density_integral(field, law, region, t)?;
    let flux = boundary_flux_integral(field, law, region, t)?;
    let coarse = central_rate(field, law, region, t, dt)?;
    let fine = central_rate(field, law, region, t, 0.5 * dt)?;
    let rate = (4.0 * fine - coarse) / 3.0;

    let doubled = region.with_order(2 * region.order)?;
    let flux_hi = boundary_flux_integral(field, law, &doubled, t)?;
    let coarse_hi = central_rate(field, law, &doubled, t, dt)?;
    let quadrature_error = (flux_hi - flux).abs() + (coarse_hi - coarse).abs();

    let scale = rate.abs() + boundary_flux_magnitude(field, law, region, t)?;
    Ok(BalanceReport {
        law,
        time: t,
        density_integral: density,
        flux_integral: flux,
        time_derivative: rate,
        residual: rate + flux,
        quadrature_error,
        scale,
    })
}

/// Reports for the transversal momentum and compatibility laws, the two
/// balances every discontinuity solution must satisfy.
pub fn fundamental_balances(
    field: &dyn PiecewiseField,
    region: &Region,
    t: f64,
    dt: f64,
) -> Result<(BalanceReport, BalanceReport)> {
    Ok((
        balance_residual(field, Law::TransversalMomentum, region, t, dt)?,
        balance_residual(field, Law::Compatibility, region, t, dt)?,
    ))
}

/// Portion `[s₀, s₁]` of the line `x = base + s·dir` inside the rectangle.
fn clip_line(region: &Region, base: [f64; 2], dir: [f64; 2]) -> Option<(f64, f64)> {
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for (k, range) in [region.x1_range(), region.x2_range()].iter().enumerate() {
        if dir[k] == 0.0 {
            if base[k] < range[0] || base[k] > range[1] {
                return None;
            }
        } else {
            let s0 = (range[0] - base[k]) / dir[k];
            let s1 = (range[1] - base[k]) / dir[k];
            lo = lo.max(s0.min(s1));
            hi = hi.min(s0.max(s1));
        }
    }
    (hi > lo).then_some((lo, hi))
}

/// `∫_{Γ∩Ω} (C[Ψ₍ⱼ₎] − [P₍ⱼ₎^α]n_α) ds` at time `t`, by Gauss quadrature of the
/// pointwise jump residual along a straight front.
///
/// With `n` pointing ahead, the regional residual of [`balance_residual`]
/// equals this integral.
pub fn front_jump_integral(field: &dyn PiecewiseField, law: Law, region: &Region, t: f64) -> Result<JumpResidual> {
    let front = field.front().ok_or(Error::NoFront)?;
    let line = front.as_line().ok_or(Error::InvalidParameter {
        field: "front",
        value: f64::NAN,
        reason: "line integrals along the front need a straight front",
    })?;
    let g2 = line.a1 * line.a1 + line.a2 * line.a2;
    let g = g2.sqrt();
    let off = line.offset(t);
    let base = [-off * line.a1 / g2, -off * line.a2 / g2];
    let dir = [-line.a2 / g, line.a1 / g];
    let Some((s0, s1)) = clip_line(region, base, dir) else {
        return Ok(JumpResidual::default());
    };
    let rule = Rule::new(region.order);
    let p = field.params();
    let mut out = JumpResidual::default();
    let pieces = region.cells;
    for k in 0..pieces {
        let a = s0 + (s1 - s0) * k as f64 / pieces as f64;
        let b = s0 + (s1 - s0) * (k + 1) as f64 / pieces as f64;
        let half = 0.5 * (b - a);
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let s = 0.5 * (a + b) + half * x;
            let pt = Point::new(base[0] + s * dir[0], base[1] + s * dir[1], t);
            let rec = extract_jumps(field, pt)?;
            let r = balance_jump_residual(law, &rec, p);
            out.value += w * half * r.value;
            out.scale += w * half * r.scale;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{shear_force, FieldJet, PlateParams, Unknown};
    use crate::solutions::{AccelerationWave, InvariantSolution};
    use crate::wavefront::LineFront;

    fn unit_params() -> PlateParams {
        PlateParams::new(1.0, 0.3, 1.0, 1.0).unwrap()
    }

    /// Polynomial fields given by their non-zero Taylor coefficients about the origin.
    struct Poly {
        params: PlateParams,
        front: Option<LineFront>,
        ahead: Vec<(Unknown, [u8; 3], f64)>,
        behind: Vec<(Unknown, [u8; 3], f64)>,
    }

    fn monomial_derivative(exps: [u8; 3], d: [u8; 3], p: Point) -> f64 {
        let mut v = 1.0;
        for k in 0..3 {
            if d[k] > exps[k] {
                return 0.0;
            }
            let mut c = 1.0;
            for m in 0..d[k] {
                c *= (exps[k] - m) as f64;
            }
            v *= c * p.0[k].powi((exps[k] - d[k]) as i32);
        }
        v
    }

    impl Poly {
        fn terms(&self, b: Branch) -> &[(Unknown, [u8; 3], f64)] {
            match b {
                Branch::Ahead => &self.ahead,
                Branch::Behind => &self.behind,
            }
        }
    }

    impl PiecewiseField for Poly {
        fn params(&self) -> &PlateParams {
            &self.params
        }

        fn front(&self) -> Option<&dyn LevelSet> {
            self.front.as_ref().map(|f| f as &dyn LevelSet)
        }

        fn branch_values(&self, b: Branch, p: Point) -> (f64, f64) {
            let j = self.branch_jet(b, p).unwrap();
            (j.w(&[]), j.phi(&[]))
        }

        fn branch_jet(&self, b: Branch, p: Point) -> Result<FieldJet> {
            FieldJet::from_fn(p, |u, d| {
                self.terms(b)
                    .iter()
                    .filter(|(uu, _, _)| *uu == u)
                    .map(|(_, e, c)| c * monomial_derivative(*e, d, p))
                    .sum()
            })
        }
    }

    fn smooth(terms: Vec<(Unknown, [u8; 3], f64)>, params: PlateParams) -> Poly {
        Poly {
            params,
            front: None,
            ahead: terms.clone(),
            behind: terms,
        }
    }

    fn unit_square() -> Region {
        Region::new(0.0, 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn region_validation() {
        assert!(Region::new(1.0, 0.0, 0.0, 1.0).is_err());
        assert!(Region::new(0.0, 1.0, 0.0, 0.0).is_err());
        assert!(Region::with_grid(0.0, 1.0, 0.0, 1.0, 3, 4).is_err());
        assert!(Region::with_grid(0.0, 1.0, 0.0, 1.0, 4, 0).is_err());
        assert!(Region::new(0.0, f64::NAN, 0.0, 1.0).is_err());
    }

    #[test]
    fn zero_field_integrals_vanish() {
        let f = smooth(vec![], unit_params());
        for law in Law::ALL {
            assert_eq!(density_integral(&f, law, &unit_square(), 0.3).unwrap(), 0.0);
            assert_eq!(boundary_flux_integral(&f, law, &unit_square(), 0.3).unwrap(), 0.0);
        }
    }

    #[test]
    fn momentum_density_of_w_equal_to_time() {
        let f = smooth(vec![(Unknown::W, [0, 0, 1], 1.0)], unit_params());
        let v = density_integral(&f, Law::TransversalMomentum, &unit_square(), 0.0).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn compatibility_density_is_zero() {
        let wave = InvariantSolution::new([0.1, 0.2, 0.3, 0.4], [0.5, 0.0, 0.2, 0.0], 1.3, unit_params()).unwrap();
        let v = density_integral(&wave, Law::Compatibility, &unit_square(), 0.2).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn hand_computed_compatibility_fluxes() {
        let p = PlateParams::new(2.0, 0.0, 1.0, 1.0).unwrap();
        let eh = p.membrane_stiffness();
        let r = Region::new(-0.5, 1.5, 0.0, 3.0).unwrap();
        // Φ = k x₁³/6 gives the constant flux F = (k/Eh, 0); the two side edges cancel.
        let k = 0.7;
        let f = smooth(vec![(Unknown::Phi, [3, 0, 0], k / 6.0)], p);
        let v = boundary_flux_integral(&f, Law::Compatibility, &r, 0.0).unwrap();
        assert!(v.abs() < 1e-14);
        // Φ = k x₁⁴/24 gives F¹ = k x₁/Eh; the net outflow is k·(b₁−a₁)(b₂−a₂)/Eh.
        let f = smooth(vec![(Unknown::Phi, [4, 0, 0], k / 24.0)], p);
        let v = boundary_flux_integral(&f, Law::Compatibility, &r, 0.0).unwrap();
        assert!((v - k * r.area() / eh).abs() < 1e-13, "{v}");
    }

    #[test]
    fn momentum_flux_is_minus_shear_force() {
        let wave = InvariantSolution::new([0.1, -0.2, 0.3, 0.4], [0.5, 0.1, 0.2, 0.0], 1.3, unit_params()).unwrap();
        let jet = wave.jet(Point::new(0.3, -0.4, 0.2)).unwrap();
        let df = density_flux(Law::TransversalMomentum, &jet, wave.params());
        let q = shear_force(&jet, wave.params());
        assert_eq!(df.flux.v1, -q.v1);
        assert_eq!(df.flux.v2, -q.v2);
    }

    #[test]
    fn additivity_over_split_rectangles() {
        let wave = InvariantSolution::new([0.1, -0.2, 0.3, 0.4], [0.5, 0.1, 0.2, 0.0], 1.3, unit_params()).unwrap();
        let whole = Region::new(0.0, 2.0, -1.0, 1.0).unwrap();
        let left = Region::new(0.0, 0.7, -1.0, 1.0).unwrap();
        let right = Region::new(0.7, 2.0, -1.0, 1.0).unwrap();
        for law in [Law::Energy, Law::Scaling, Law::AngularMomentumX1] {
            let d = density_integral(&wave, law, &whole, 0.1).unwrap();
            let ds = density_integral(&wave, law, &left, 0.1).unwrap() + density_integral(&wave, law, &right, 0.1).unwrap();
            assert!((d - ds).abs() < 1e-10 * (1.0 + d.abs()), "{law}: {d} vs {ds}");
            let f = boundary_flux_integral(&wave, law, &whole, 0.1).unwrap();
            let fs = boundary_flux_integral(&wave, law, &left, 0.1).unwrap()
                + boundary_flux_integral(&wave, law, &right, 0.1).unwrap();
            assert!((f - fs).abs() < 1e-10 * (1.0 + f.abs()), "{law}: {f} vs {fs}");
        }
    }

    #[test]
    fn smooth_balances_hold_for_every_law() {
        let wave = InvariantSolution::new([0.1, -0.2, 0.3, 0.4], [0.5, 0.1, 0.2, 0.0], 1.3, unit_params()).unwrap();
        let r = Region::new(-1.0, 1.0, -0.5, 0.5).unwrap();
        for law in Law::ALL {
            let rep = balance_residual(&wave, law, &r, 0.25, default_time_step(0.25)).unwrap();
            assert!(rep.residual.abs() < 1e-6 * rep.scale.max(1.0), "{law}: {rep:?}");
        }
    }

    #[test]
    fn invariant_of_report() {
        let wave = InvariantSolution::new([0.1, -0.2, 0.3, 0.4], [0.5, 0.1, 0.2, 0.0], 1.3, unit_params()).unwrap();
        let rep = balance_residual(&wave, Law::Energy, &unit_square(), 0.0, 1e-3).unwrap();
        assert_eq!(rep.residual, rep.time_derivative + rep.flux_integral);
        assert!(balance_residual(&wave, Law::Energy, &unit_square(), 0.0, 0.0).is_err());
    }

    #[test]
    fn jump_in_time_derivative_breaks_momentum_balance() {
        // behind: w = k(x₁ − c t); ahead: w = 0. [w] = 0 on the front but [w,3] = −kc.
        let (k, c) = (0.8, 1.5);
        let params = unit_params();
        let f = Poly {
            params,
            front: Some(LineFront::new(1.0, 0.0, -c, 0.0).unwrap()),
            ahead: vec![],
            behind: vec![(Unknown::W, [1, 0, 0], k), (Unknown::W, [0, 0, 1], -k * c)],
        };
        let r = Region::new(-1.0, 1.0, 0.0, 2.0).unwrap();
        let t = 0.1;
        let (mom, compat) = fundamental_balances(&f, &r, t, default_time_step(t)).unwrap();
        // C[ρ w,3] · length = c · (−ρkc) · 2
        let expected = c * (-params.areal_density() * k * c) * 2.0;
        assert!((mom.residual - expected).abs() < 1e-8, "{mom:?}");
        assert!(compat.residual.abs() < 1e-12);
        let line = front_jump_integral(&f, Law::TransversalMomentum, &r, t).unwrap();
        assert!((line.value - expected).abs() < 1e-12, "{line:?}");
    }

    #[test]
    fn acceleration_wave_fundamental_balances() {
        let ahead = InvariantSolution::new([0.2, 0.1, -0.1, 0.3], [0.0, 0.1, 0.4, 0.0], 1.1, unit_params()).unwrap();
        let wave = AccelerationWave::new(ahead, 0.7, -0.3).unwrap();
        let r = Region::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let (a, b) = fundamental_balances(&wave, &r, 0.2, default_time_step(0.2)).unwrap();
        assert!(a.relative() < 1e-5, "{a:?}");
        assert!(b.relative() < 1e-5, "{b:?}");
    }

    #[test]
    fn front_leaving_the_region_is_rejected() {
        let ahead = InvariantSolution::zero(1.0, unit_params()).unwrap();
        let wave = AccelerationWave::new(ahead, 0.7, 0.0).unwrap();
        let r = Region::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        // the front x₁ = t sits on the right edge at t = 1
        let e = balance_residual(&wave, Law::Energy, &r, 1.0 - 1e-5, 1e-4).unwrap_err();
        assert_eq!(e, Error::FrontLeavesRegion);
    }

    #[test]
    fn quadrature_converges_on_smooth_fields() {
        let wave = InvariantSolution::new([0.1, -0.2, 0.3, 0.4], [0.5, 0.1, 0.2, 0.0], 1.3, unit_params()).unwrap();
        let r = Region::new(-1.0, 1.0, -0.5, 0.5).unwrap();
        let r2 = r.with_order(16).unwrap();
        for law in Law::ALL {
            let a = density_integral(&wave, law, &r, 0.3).unwrap();
            let b = density_integral(&wave, law, &r2, 0.3).unwrap();
            assert!((a - b).abs() <= 1e-10 * a.abs().max(1.0), "{law}");
        }
    }
}
