//! Exact travelling-wave solutions, the acceleration waves glued from them,
//! residuals of the field equations, and a finite-difference jet oracle.

use crate::error::{Error, Result};
use crate::fields::{cross_contract, FieldJet, PlateParams, Point, SymTensor2, Unknown, JET_ORDER, T, X1, X2};
use crate::wavefront::{LevelSet, LineFront};

/// `Σ poly[k]·ξᵏ + sin_coef·sin(ωξ) + cos_coef·cos(ωξ)`
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Profile {
    pub poly: [f64; 4],
    pub sin_coef: f64,
    pub cos_coef: f64,
    pub omega: f64,
}

impl Profile {
    pub fn polynomial(poly: [f64; 4]) -> Self {
        Profile {
            poly,
            ..Profile::default()
        }
    }

    /// `order`-th derivative at `xi`.
    pub fn derivative(&self, order: usize, xi: f64) -> f64 {
        let mut s = 0.0;
        for (k, &a) in self.poly.iter().enumerate().skip(order) {
            let falling: f64 = ((k - order + 1)..=k).map(|j| j as f64).product();
            s += a * falling * xi.powi((k - order) as i32);
        }
        if self.sin_coef != 0.0 || self.cos_coef != 0.0 {
            let (sn, cs) = (self.omega * xi).sin_cos();
            // d/dξ cycles sin → cos → −sin → −cos
            let (ds, dc) = match order % 4 {
                0 => (sn, cs),
                1 => (cs, -sn),
                2 => (-sn, -cs),
                _ => (-cs, sn),
            };
            s += self.omega.powi(order as i32) * (self.sin_coef * ds + self.cos_coef * dc);
        }
        s
    }

    pub fn value(&self, xi: f64) -> f64 {
        self.derivative(0, xi)
    }
}

/// Jet of `(w, Φ) = (u(ξ), φ(ξ))` with `ξ = n·x − c·x³`.
pub fn plane_wave_jet(point: Point, direction: [f64; 2], speed: f64, u: &Profile, phi: &Profile) -> Result<FieldJet> {
    let xi = direction[0] * point.x1() + direction[1] * point.x2() - speed * point.t();
    let mut du = [0.0; JET_ORDER + 1];
    let mut dphi = [0.0; JET_ORDER + 1];
    for m in 0..=JET_ORDER {
        du[m] = u.derivative(m, xi);
        dphi[m] = phi.derivative(m, xi);
    }
    FieldJet::from_fn(point, |unknown, e| {
        let m = (e[0] + e[1] + e[2]) as usize;
        let chain = direction[0].powi(e[0] as i32) * direction[1].powi(e[1] as i32) * (-speed).powi(e[2] as i32);
        chain
            * match unknown {
                Unknown::W => du[m],
                Unknown::Phi => dphi[m],
            }
    })
}

/// Solution branch on one side of a front.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Ahead,
    Behind,
}

/// Side requested when evaluating a piecewise field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Ahead,
    Behind,
    /// Pick the branch from the sign of the level set (`γ > 0` is ahead).
    Auto,
}

/// Two analytic branches glued along an optional moving front.
///
/// Fields without a front are smooth and return the same data for both
/// branches.
pub trait PiecewiseField: Send + Sync {
    fn params(&self) -> &PlateParams;

    fn front(&self) -> Option<&dyn LevelSet>;

    /// `(w, Φ)` of the analytic continuation of `branch` at `p`.
    fn branch_values(&self, branch: Branch, p: Point) -> (f64, f64);

    /// Jet of the analytic continuation of `branch` at `p`.
    fn branch_jet(&self, branch: Branch, p: Point) -> Result<FieldJet>;

    /// Branch occupying `p` for `side`.
    fn resolve(&self, p: Point, side: Side) -> Result<Branch> {
        match side {
            Side::Ahead => Ok(Branch::Ahead),
            Side::Behind => Ok(Branch::Behind),
            Side::Auto => match self.front() {
                None => Ok(Branch::Ahead),
                Some(front) => {
                    let g = front.value(p);
                    if g > 0.0 {
                        Ok(Branch::Ahead)
                    } else if g < 0.0 {
                        Ok(Branch::Behind)
                    } else {
                        Err(Error::AmbiguousSide { point: p.0 })
                    }
                }
            },
        }
    }
}

/// Analytic jet of `field` at `point` on `side`.
pub fn eval_jet(field: &dyn PiecewiseField, point: Point, side: Side) -> Result<FieldJet> {
    let branch = field.resolve(point, side)?;
    field.branch_jet(branch, point)
}

/// Values `(w, Φ)` of `field` at `point` on `side`.
pub fn eval_values(field: &dyn PiecewiseField, point: Point, side: Side) -> Result<(f64, f64)> {
    let branch = field.resolve(point, side)?;
    Ok(field.branch_values(branch, point))
}

/// Solutions depending only on `ξ = x¹ − c·x³`:
/// `w = u₀ + u₁ξ + u₂ sin ωξ + u₃ cos ωξ`, `Φ = φ₀ + φ₁ξ + φ₂ξ² + φ₃ξ³`,
/// with `ω = c·√(ρ/D)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantSolution {
    u: [f64; 4],
    phi: [f64; 4],
    speed: f64,
    omega: f64,
    params: PlateParams,
}

impl InvariantSolution {
    pub fn new(u: [f64; 4], phi: [f64; 4], speed: f64, params: PlateParams) -> Result<Self> {
        if !speed.is_finite() || speed == 0.0 {
            return Err(Error::InvalidParameter {
                field: "wave_speed",
                value: speed,
                reason: "must be finite and non-zero",
            });
        }
        for (i, v) in u.iter().chain(phi.iter()).enumerate() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    field: if i < 4 { "u" } else { "phi" },
                    value: *v,
                    reason: "coefficients must be finite",
                });
            }
        }
        let omega = speed * (params.areal_density() / params.bending_rigidity()).sqrt();
        Ok(InvariantSolution {
            u,
            phi,
            speed,
            omega,
            params,
        })
    }

    /// The identically vanishing solution.
    pub fn zero(speed: f64, params: PlateParams) -> Result<Self> {
        Self::new([0.0; 4], [0.0; 4], speed, params)
    }

    pub fn u(&self) -> [f64; 4] {
        self.u
    }

    pub fn phi(&self) -> [f64; 4] {
        self.phi
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn xi(&self, p: Point) -> f64 {
        p.x1() - self.speed * p.t()
    }

    pub fn w_profile(&self) -> Profile {
        Profile {
            poly: [self.u[0], self.u[1], 0.0, 0.0],
            sin_coef: self.u[2],
            cos_coef: self.u[3],
            omega: self.omega,
        }
    }

    pub fn phi_profile(&self) -> Profile {
        Profile::polynomial(self.phi)
    }

    pub fn jet(&self, p: Point) -> Result<FieldJet> {
        plane_wave_jet(p, [1.0, 0.0], self.speed, &self.w_profile(), &self.phi_profile())
    }
}

impl PiecewiseField for InvariantSolution {
    fn params(&self) -> &PlateParams {
        &self.params
    }

    fn front(&self) -> Option<&dyn LevelSet> {
        None
    }

    fn branch_values(&self, _branch: Branch, p: Point) -> (f64, f64) {
        let xi = self.xi(p);
        (self.w_profile().value(xi), self.phi_profile().value(xi))
    }

    fn branch_jet(&self, _branch: Branch, p: Point) -> Result<FieldJet> {
        self.jet(p)
    }
}

/// Acceleration wave running into an invariant solution along `ξ = 0`.
///
/// Ahead (`ξ > 0`) the field is `(u⁺, φ⁺)`; behind (`ξ < 0`) it is
/// `(u⁺ + c₁(1 − cos ωξ), φ⁺ + c₂ξ²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AccelerationWave {
    ahead: InvariantSolution,
    c1: f64,
    c2: f64,
    front: LineFront,
}

impl AccelerationWave {
    pub fn new(ahead: InvariantSolution, c1: f64, c2: f64) -> Result<Self> {
        if !c1.is_finite() || c1 == 0.0 {
            return Err(Error::InvalidParameter {
                field: "c1",
                value: c1,
                reason: "an acceleration wave needs c1 != 0 so that [w,33] does not vanish",
            });
        }
        if !c2.is_finite() {
            return Err(Error::InvalidParameter {
                field: "c2",
                value: c2,
                reason: "must be finite",
            });
        }
        let front = LineFront::new(1.0, 0.0, -ahead.speed(), 0.0)?;
        Ok(AccelerationWave { ahead, c1, c2, front })
    }

    pub fn ahead(&self) -> &InvariantSolution {
        &self.ahead
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn line(&self) -> LineFront {
        self.front
    }

    fn profiles(&self, branch: Branch) -> (Profile, Profile) {
        let mut w = self.ahead.w_profile();
        let mut phi = self.ahead.phi_profile();
        if branch == Branch::Behind {
            w.poly[0] += self.c1;
            w.cos_coef -= self.c1;
            phi.poly[2] += self.c2;
        }
        (w, phi)
    }
}

impl PiecewiseField for AccelerationWave {
    fn params(&self) -> &PlateParams {
        &self.ahead.params
    }

    fn front(&self) -> Option<&dyn LevelSet> {
        Some(&self.front)
    }

    fn branch_values(&self, branch: Branch, p: Point) -> (f64, f64) {
        let (w, phi) = self.profiles(branch);
        let xi = self.ahead.xi(p);
        (w.value(xi), phi.value(xi))
    }

    fn branch_jet(&self, branch: Branch, p: Point) -> Result<FieldJet> {
        let (w, phi) = self.profiles(branch);
        plane_wave_jet(p, [1.0, 0.0], self.ahead.speed(), &w, &phi)
    }
}

/// A smooth field viewed across an arbitrary front: both branches coincide.
#[derive(Debug)]
pub struct SmoothAcross<F, L> {
    pub field: F,
    pub front: L,
}

impl<F: PiecewiseField, L: LevelSet> PiecewiseField for SmoothAcross<F, L> {
    fn params(&self) -> &PlateParams {
        self.field.params()
    }

    fn front(&self) -> Option<&dyn LevelSet> {
        Some(&self.front)
    }

    fn branch_values(&self, branch: Branch, p: Point) -> (f64, f64) {
        self.field.branch_values(branch, p)
    }

    fn branch_jet(&self, branch: Branch, p: Point) -> Result<FieldJet> {
        self.field.branch_jet(branch, p)
    }
}

/// Residuals of both field equations at one point, with the magnitude of
/// their largest contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeResidual {
    /// `DΔ²w − ε^{αμ}ε^{βν}w_{,αβ}Φ_{,μν} + ρw_{,33}`
    pub r1: f64,
    /// `(1/Eh)Δ²Φ + ½ε^{αμ}ε^{βν}w_{,αβ}w_{,μν}`
    pub r2: f64,
    pub scale1: f64,
    pub scale2: f64,
}

impl PdeResidual {
    /// Largest residual relative to its term scale (floored at 1).
    pub fn relative(&self) -> f64 {
        (self.r1.abs() / self.scale1.max(1.0)).max(self.r2.abs() / self.scale2.max(1.0))
    }
}

fn bilaplacian(jet: &FieldJet, unknown: Unknown) -> f64 {
    let g = |e: [u8; 3]| jet.get(unknown, e);
    g([4, 0, 0]) + 2.0 * g([2, 2, 0]) + g([0, 4, 0])
}

pub fn pde_residual(jet: &FieldJet, p: &PlateParams) -> PdeResidual {
    let k = SymTensor2::from_fn(|a, b| jet.w(&[a, b]));
    let f = SymTensor2::from_fn(|a, b| jet.phi(&[a, b]));
    let bending = p.bending_rigidity() * bilaplacian(jet, Unknown::W);
    let coupling = cross_contract(&k, &f);
    let inertia = p.areal_density() * jet.w(&[T, T]);
    let compat = bilaplacian(jet, Unknown::Phi) / p.membrane_stiffness();
    let gauss = 0.5 * cross_contract(&k, &k);
    PdeResidual {
        r1: bending - coupling + inertia,
        r2: compat + gauss,
        scale1: bending.abs() + coupling.abs() + inertia.abs(),
        scale2: compat.abs() + gauss.abs(),
    }
}

/// Initial step multiplier by total derivative order; higher orders start
/// wider so that roundoff (≈ ε/hᵏ) stays small in the first tableau rows.
const ORDER_STEP_SCALE: [f64; JET_ORDER + 1] = [1.0, 1.0, 2.0, 3.0, 4.0];

/// Step reduction per tableau row.
const RIDDERS_SHRINK: f64 = 1.4;
/// Maximum number of tableau rows.
const RIDDERS_ROWS: usize = 10;

/// `(offset, weight)` pairs of the second-order central stencil for the
/// `order`-th derivative on a unit grid.
fn central_stencil(order: u8) -> &'static [(f64, f64)] {
    match order {
        0 => &[(0.0, 1.0)],
        1 => &[(-1.0, -0.5), (1.0, 0.5)],
        2 => &[(-1.0, 1.0), (0.0, -2.0), (1.0, 1.0)],
        3 => &[(-2.0, -0.5), (-1.0, 1.0), (1.0, -1.0), (2.0, 0.5)],
        _ => &[(-2.0, 1.0), (-1.0, -4.0), (0.0, 6.0), (1.0, -4.0), (2.0, 1.0)],
    }
}

fn tensor_difference(
    eval: &dyn Fn(Point) -> (f64, f64),
    point: Point,
    exps: [u8; 3],
    steps: [f64; 3],
) -> (f64, f64) {
    let (mut w, mut phi) = (0.0, 0.0);
    for &(o1, c1) in central_stencil(exps[0]) {
        for &(o2, c2) in central_stencil(exps[1]) {
            for &(o3, c3) in central_stencil(exps[2]) {
                let q = Point::new(
                    point.x1() + o1 * steps[0],
                    point.x2() + o2 * steps[1],
                    point.t() + o3 * steps[2],
                );
                let (vw, vphi) = eval(q);
                let c = c1 * c2 * c3;
                w += c * vw;
                phi += c * vphi;
            }
        }
    }
    let denom: f64 = (0..3).map(|i| steps[i].powi(exps[i] as i32)).product();
    (w / denom, phi / denom)
}

/// Finite-difference estimate of the full jet of `(w, Φ)` at `point`.
///
/// Each derivative uses a tensor product of second-order central stencils
/// whose steps shrink by 1.4 per row of a Ridders extrapolation tableau; the
/// entry with the smallest estimated error is kept, separately for `w` and
/// `Φ`. The first step along axis `i` for a derivative of total order `k` is
/// `h·s_k·(1 + |xᵢ|)` with `s = [1, 1, 2, 3, 4]`.
pub fn fd_jet_oracle(eval: &dyn Fn(Point) -> (f64, f64), point: Point, h: f64) -> Result<FieldJet> {
    if !(h.is_finite() && h > 0.0) {
        return Err(Error::InvalidParameter {
            field: "step",
            value: h,
            reason: "must be finite and > 0",
        });
    }
    let mut out = FieldJet::zero(point);
    for e in crate::fields::multi_indices() {
        let k = (e[0] + e[1] + e[2]) as usize;
        if k == 0 {
            let (w, phi) = eval(point);
            out.set(Unknown::W, e, w);
            out.set(Unknown::Phi, e, phi);
            continue;
        }
        let first = [X1, X2, T].map(|axis| h * ORDER_STEP_SCALE[k] * (1.0 + point.coord(axis).abs()));
        let (w, phi) = ridders(|scale| tensor_difference(eval, point, e, first.map(|s| s * scale)));
        out.set(Unknown::W, e, w);
        out.set(Unknown::Phi, e, phi);
    }
    out.validate()?;
    Ok(out)
}

/// Ridders' polynomial extrapolation to zero step of a central difference
/// `d(scale)` whose error is even in the step, for two outputs at once.
fn ridders(d: impl Fn(f64) -> (f64, f64)) -> (f64, f64) {
    let mut best = [(f64::INFINITY, 0.0); 2];
    let mut done = [false; 2];
    let mut prev: Vec<(f64, f64)> = vec![d(1.0)];
    let mut scale = 1.0;
    for _ in 1..RIDDERS_ROWS {
        scale /= RIDDERS_SHRINK;
        let mut row = vec![d(scale)];
        let mut fac = RIDDERS_SHRINK * RIDDERS_SHRINK;
        for j in 1..=prev.len() {
            let pick = |v: (f64, f64), c: usize| if c == 0 { v.0 } else { v.1 };
            let mut next = (0.0, 0.0);
            for c in 0..2 {
                let a = pick(row[j - 1], c);
                let b = pick(prev[j - 1], c);
                let x = (a * fac - b) / (fac - 1.0);
                let err = (x - a).abs().max((x - b).abs());
                if !done[c] && err <= best[c].0 {
                    best[c] = (err, x);
                }
                if c == 0 {
                    next.0 = x;
                } else {
                    next.1 = x;
                }
            }
            row.push(next);
            fac *= RIDDERS_SHRINK * RIDDERS_SHRINK;
        }
        // stop a component once its diagonal starts to diverge
        let n = row.len() - 1;
        for c in 0..2 {
            let (a, b) = if c == 0 { (row[n].0, prev[n - 1].0) } else { (row[n].1, prev[n - 1].1) };
            if (a - b).abs() >= 2.0 * best[c].0 {
                done[c] = true;
            }
        }
        if done[0] && done[1] {
            break;
        }
        prev = row;
    }
    (best[0].1, best[1].1)
}

/// Default first step of [`fd_jet_oracle`].
pub const DEFAULT_FD_STEP: f64 = 0.05;
