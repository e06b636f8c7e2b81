//! Geometry of a moving singular curve `Γ: γ(x¹, x², x³) = 0` and the
//! kinematic compatibility kernels for jumps of second and third derivatives.
//!
//! The unit normal is `n = ∇γ/|∇γ|` (spatial gradient), so it points toward
//! increasing `γ`. By convention the region `γ > 0` is the one *ahead* of the
//! front, the region `γ < 0` lies *behind* it. The tangent is `t = (−n₂, n₁)`.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::fields::{Point, SymTensor2, Vector2, T, X1, X2};

/// A front given implicitly as the zero set of a `C¹` level-set function.
pub trait LevelSet: Debug + Send + Sync {
    fn value(&self, p: Point) -> f64;

    /// `(∂γ/∂x¹, ∂γ/∂x², ∂γ/∂x³)`
    fn gradient(&self, p: Point) -> [f64; 3];

    /// Arc-length coordinate of a point of `Γ`, increasing along the tangent.
    fn arc_parameter(&self, p: Point) -> f64;

    /// Closed-form `a = t_α ∂n^α/∂s`, when the geometry admits one.
    fn exact_arc_rate(&self, _p: Point) -> Option<f64> {
        None
    }

    /// The front as a straight line, if it is one.
    fn as_line(&self) -> Option<LineFront> {
        None
    }
}

/// `γ = a₁x¹ + a₂x² + a₃x³ + a₀`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFront {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a0: f64,
}

impl LineFront {
    pub fn new(a1: f64, a2: f64, a3: f64, a0: f64) -> Result<Self> {
        if !(a1.is_finite() && a2.is_finite() && a3.is_finite() && a0.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "line",
                value: f64::NAN,
                reason: "coefficients must be finite",
            });
        }
        if a1 == 0.0 && a2 == 0.0 {
            return Err(Error::InvalidParameter {
                field: "line",
                value: 0.0,
                reason: "spatial coefficients a1, a2 must not both vanish",
            });
        }
        Ok(LineFront { a1, a2, a3, a0 })
    }

    /// Constant term of the in-plane line `a₁x¹ + a₂x² + offset(t) = 0` at time `t`.
    pub fn offset(&self, t: f64) -> f64 {
        self.a3 * t + self.a0
    }
}

impl LevelSet for LineFront {
    fn value(&self, p: Point) -> f64 {
        self.a1 * p.x1() + self.a2 * p.x2() + self.offset(p.t())
    }

    fn gradient(&self, _p: Point) -> [f64; 3] {
        [self.a1, self.a2, self.a3]
    }

    fn arc_parameter(&self, p: Point) -> f64 {
        let g = self.a1.hypot(self.a2);
        (-self.a2 * p.x1() + self.a1 * p.x2()) / g
    }

    fn exact_arc_rate(&self, _p: Point) -> Option<f64> {
        Some(0.0)
    }

    fn as_line(&self) -> Option<LineFront> {
        Some(*self)
    }
}

/// Circle `|x − center| = radius + radial_speed·x³`; outward normal, so the
/// exterior is ahead for an expanding circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircleFront {
    pub center: [f64; 2],
    pub radius: f64,
    pub radial_speed: f64,
}

impl CircleFront {
    pub fn new(center: [f64; 2], radius: f64, radial_speed: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidParameter {
                field: "radius",
                value: radius,
                reason: "must be finite and > 0",
            });
        }
        Ok(CircleFront {
            center,
            radius,
            radial_speed,
        })
    }

    fn radius_at(&self, t: f64) -> f64 {
        self.radius + self.radial_speed * t
    }
}

impl LevelSet for CircleFront {
    fn value(&self, p: Point) -> f64 {
        (p.x1() - self.center[0]).hypot(p.x2() - self.center[1]) - self.radius_at(p.t())
    }

    fn gradient(&self, p: Point) -> [f64; 3] {
        let dx = p.x1() - self.center[0];
        let dy = p.x2() - self.center[1];
        let r = dx.hypot(dy);
        if r == 0.0 {
            return [0.0, 0.0, -self.radial_speed];
        }
        [dx / r, dy / r, -self.radial_speed]
    }

    fn arc_parameter(&self, p: Point) -> f64 {
        let theta = (p.x2() - self.center[1]).atan2(p.x1() - self.center[0]);
        self.radius_at(p.t()) * theta
    }

    fn exact_arc_rate(&self, p: Point) -> Option<f64> {
        Some(1.0 / self.radius_at(p.t()))
    }
}

fn spatial_normal(front: &dyn LevelSet, p: Point) -> Result<([f64; 2], f64)> {
    let g = front.gradient(p);
    let norm = g[X1].hypot(g[X2]);
    if !(norm > 1e-12) {
        return Err(Error::SingularFront { point: p.0, norm });
    }
    Ok(([g[X1] / norm, g[X2] / norm], norm))
}

/// Moves `p` onto `γ = 0` at fixed time by Newton steps along the spatial gradient.
pub fn project_to_front(front: &dyn LevelSet, p: Point) -> Result<Point> {
    let mut q = p;
    for _ in 0..50 {
        let v = front.value(q);
        let g = front.gradient(q);
        let g2 = g[X1] * g[X1] + g[X2] * g[X2];
        if !(g2 > 1e-24) {
            return Err(Error::SingularFront {
                point: q.0,
                norm: g2.sqrt(),
            });
        }
        q.0[X1] -= v * g[X1] / g2;
        q.0[X2] -= v * g[X2] / g2;
        if v.abs() <= 1e-15 * (1.0 + q.norm()) {
            break;
        }
    }
    Ok(q)
}

/// Local kinematics of the front at one of its points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontGeometry {
    /// Speed of displacement `C = −|∇γ|⁻¹ ∂γ/∂x³`.
    pub speed: f64,
    pub normal: [f64; 2],
    pub tangent: [f64; 2],
    /// `a = t_α ∂n^α/∂s`
    pub arc_rate: f64,
    pub arc_param: f64,
}

impl FrontGeometry {
    /// Geometry of a straight front with the given speed and normal.
    pub fn straight(speed: f64, normal: [f64; 2]) -> Self {
        let len = normal[0].hypot(normal[1]);
        let n = [normal[0] / len, normal[1] / len];
        FrontGeometry {
            speed,
            normal: n,
            tangent: [-n[1], n[0]],
            arc_rate: 0.0,
            arc_param: 0.0,
        }
    }
}

/// `t_α ∂n^α/∂s` by central differences along `tangent`.
fn arc_rate_along(front: &dyn LevelSet, p: Point, tangent: [f64; 2]) -> Result<f64> {
    let ds = 1e-4 * (1.0 + p.x1().hypot(p.x2()));
    let along = |sign: f64| -> Result<(Point, [f64; 2])> {
        let q = Point::new(p.x1() + sign * ds * tangent[0], p.x2() + sign * ds * tangent[1], p.t());
        let q = project_to_front(front, q)?;
        Ok((q, spatial_normal(front, q)?.0))
    };
    let (qp, np) = along(1.0)?;
    let (qm, nm) = along(-1.0)?;
    // chord length rather than 2·ds, since projection moves the points
    let chord = (qp.x1() - qm.x1()).hypot(qp.x2() - qm.x2());
    Ok((tangent[0] * (np[0] - nm[0]) + tangent[1] * (np[1] - nm[1])) / chord)
}

/// Computes `C`, `n`, `t` and the arc rate `a` at `p`.
///
/// `a` is obtained by central differences of `n` along the tangent with step
/// `1e-4·(1+|x|)`; the shifted points are projected back onto `Γ`.
pub fn front_geometry(front: &dyn LevelSet, p: Point) -> Result<FrontGeometry> {
    let (n, norm) = spatial_normal(front, p)?;
    let speed = -front.gradient(p)[T] / norm;
    let tangent = [-n[1], n[0]];

    let arc_rate = arc_rate_along(front, p, tangent)?;

    Ok(FrontGeometry {
        speed,
        normal: n,
        tangent,
        arc_rate,
        arc_param: front.arc_parameter(p),
    })
}

/// Fully symmetric third-rank in-plane tensor stored as `(111, 112, 122, 222)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor3 {
    pub c: [f64; 4],
}

impl SymTensor3 {
    pub fn from_fn(mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        SymTensor3 {
            c: [f(0, 0, 0), f(0, 0, 1), f(0, 1, 1), f(1, 1, 1)],
        }
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.c[a + b + c]
    }

    pub fn contract(&self, u: [f64; 2], v: [f64; 2], w: [f64; 2]) -> f64 {
        let mut s = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    s += self.get(a, b, c) * u[a] * v[b] * w[c];
                }
            }
        }
        s
    }

    pub fn max_abs(&self) -> f64 {
        self.c.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Second-order jumps of one unknown: `[f_{,αβ}]`, `[f_{,α3}]`, `[f_{,33}]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SecondJumps {
    pub spatial: SymTensor2,
    pub mixed: Vector2,
    pub temporal: f64,
}

/// Compatibility kernels evaluated for both unknowns, with their amplitudes.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JumpTensors {
    pub w_second: SecondJumps,
    pub w_third: SymTensor3,
    pub phi_second: SecondJumps,
    pub phi_third: SymTensor3,
    /// `λ`, `λ*`
    pub lambda: f64,
    pub lambda_star: f64,
    /// `μ`, `μ*`
    pub mu: f64,
    pub mu_star: f64,
}

impl JumpTensors {
    pub fn new(lambda: f64, lambda_star: f64, d_lambda_ds: f64, mu: f64, mu_star: f64, d_mu_ds: f64, geo: &FrontGeometry) -> Self {
        JumpTensors {
            w_second: second_jumps(lambda, geo),
            w_third: third_jumps(lambda_star, lambda, d_lambda_ds, geo),
            phi_second: second_jumps(mu, geo),
            phi_third: third_jumps(mu_star, mu, d_mu_ds, geo),
            lambda,
            lambda_star,
            mu,
            mu_star,
        }
    }
}

pub(crate) fn second_jumps(amplitude: f64, geo: &FrontGeometry) -> SecondJumps {
    let n = geo.normal;
    let c = geo.speed;
    SecondJumps {
        spatial: SymTensor2::from_fn(|a, b| amplitude * n[a] * n[b]),
        mixed: Vector2::new(-amplitude * c * n[0], -amplitude * c * n[1]),
        temporal: amplitude * c * c,
    }
}

pub(crate) fn third_jumps(normal_amp: f64, amplitude: f64, d_amp_ds: f64, geo: &FrontGeometry) -> SymTensor3 {
    let n = geo.normal;
    let t = geo.tangent;
    let a = geo.arc_rate;
    SymTensor3::from_fn(|i, j, k| {
        normal_amp * n[i] * n[j] * n[k]
            + d_amp_ds * (n[i] * n[j] * t[k] + n[i] * t[j] * n[k] + t[i] * n[j] * n[k])
            + amplitude * a * (t[i] * t[j] * n[k] + t[i] * n[j] * t[k] + n[i] * t[j] * t[k])
    })
}

/// Admissible jumps of the second derivatives of `w` for amplitude `λ`:
/// `[w_{,αβ}] = λn_αn_β`, `[w_{,α3}] = −λCn_α`, `[w_{,33}] = λC²`.
pub fn second_jumps_w(lambda: f64, geo: &FrontGeometry) -> SecondJumps {
    second_jumps(lambda, geo)
}

/// Admissible jumps of the third spatial derivatives of `w`.
pub fn third_jumps_w(lambda_star: f64, lambda: f64, d_lambda_ds: f64, geo: &FrontGeometry) -> SymTensor3 {
    third_jumps(lambda_star, lambda, d_lambda_ds, geo)
}

/// The `Φ` analogue of [`second_jumps_w`] with amplitude `μ`.
pub fn second_jumps_phi(mu: f64, geo: &FrontGeometry) -> SecondJumps {
    second_jumps(mu, geo)
}

/// The `Φ` analogue of [`third_jumps_w`].
pub fn third_jumps_phi(mu_star: f64, mu: f64, d_mu_ds: f64, geo: &FrontGeometry) -> SymTensor3 {
    third_jumps(mu_star, mu, d_mu_ds, geo)
}

/// Value `−amplitude·a` that the third-order normal amplitude must take on an
/// acceleration wave whose third derivatives jump.
pub fn required_normal_amplitude(amplitude: f64, geo: &FrontGeometry) -> f64 {
    -amplitude * geo.arc_rate
}
