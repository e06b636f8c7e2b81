//! Jumps `[f] = f(behind) − f(ahead)` across a front and the pointwise jump
//! conditions built on them: acceleration-wave admissibility, the dynamic
//! conditions of the two field equations, the generic balance condition
//! `C[Ψ] − [P^α]n_α = 0`, its closed forms for the energy, wave momentum,
//! moment and scaling laws, and the scalar relations they reduce to for
//! waves running into a travelling-wave state.

use crate::conservation::{density_flux, Law};
use crate::error::{Error, Result};
use crate::fields::{
    epsilon, f_vector, shear_force, FieldJet, PlateParams, Point, SymTensor2, Unknown, T, X1, X2,
};
use crate::solutions::{AccelerationWave, Branch, PiecewiseField};
use crate::wavefront::{front_geometry, project_to_front, second_jumps, third_jumps, FrontGeometry, LevelSet, SymTensor3};

/// A scalar jump residual together with the magnitude of its terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct JumpResidual {
    pub value: f64,
    pub scale: f64,
}

impl JumpResidual {
    /// `|value| / max(scale, 1)`
    pub fn relative(&self) -> f64 {
        self.value.abs() / self.scale.max(1.0)
    }
}

/// Both one-sided jets at a point of the front and everything derived from them.
#[derive(Debug, Clone, PartialEq)]
pub struct JumpRecord {
    pub point: Point,
    pub geometry: FrontGeometry,
    pub ahead: FieldJet,
    pub behind: FieldJet,
    /// `behind − ahead`
    pub jump: FieldJet,
    /// `λ = [w_{,αβ}]n^αn^β`
    pub lambda: f64,
    /// `μ = [Φ_{,αβ}]n^αn^β`
    pub mu: f64,
    /// `λ* = [w_{,αβγ}]n^αn^βn^γ`
    pub lambda_star: f64,
    /// `μ* = [Φ_{,αβγ}]n^αn^βn^γ`
    pub mu_star: f64,
    /// `∂λ/∂s`, `∂μ/∂s` along the front.
    pub d_lambda_ds: f64,
    pub d_mu_ds: f64,
}

fn hessian(jet: &FieldJet, u: Unknown) -> SymTensor2 {
    SymTensor2::from_fn(|a, b| jet.get(u, crate::fields::exponents(&[a, b])))
}

fn third(jet: &FieldJet, u: Unknown) -> SymTensor3 {
    SymTensor3::from_fn(|a, b, c| jet.get(u, crate::fields::exponents(&[a, b, c])))
}

fn normal_amplitudes(jump: &FieldJet, n: [f64; 2]) -> (f64, f64, f64, f64) {
    (
        hessian(jump, Unknown::W).contract(n, n),
        hessian(jump, Unknown::Phi).contract(n, n),
        third(jump, Unknown::W).contract(n, n, n),
        third(jump, Unknown::Phi).contract(n, n, n),
    )
}

fn on_front(front: &dyn LevelSet, point: Point) -> Result<()> {
    let g = front.gradient(point);
    let level = front.value(point);
    if level.abs() > 1e-9 * g[0].hypot(g[1]) * (1.0 + point.norm()) {
        return Err(Error::NotOnFront {
            point: point.0,
            level,
        });
    }
    Ok(())
}

fn one_sided(field: &dyn PiecewiseField, point: Point) -> Result<(FieldJet, FieldJet)> {
    Ok((
        field.branch_jet(Branch::Ahead, point)?,
        field.branch_jet(Branch::Behind, point)?,
    ))
}

/// Evaluates both one-sided jets at a point of the front and extracts the
/// jumps and their amplitudes.
pub fn extract_jumps(field: &dyn PiecewiseField, point: Point) -> Result<JumpRecord> {
    let front = field.front().ok_or(Error::NoFront)?;
    on_front(front, point)?;
    let geometry = front_geometry(front, point)?;
    let (ahead, behind) = one_sided(field, point)?;
    let jump = behind.difference(&ahead);
    let n = geometry.normal;
    let (lambda, mu, lambda_star, mu_star) = normal_amplitudes(&jump, n);

    // amplitudes at neighbouring front points, each with its own normal
    let ds = 1e-4 * (1.0 + point.x1().hypot(point.x2()));
    let t = geometry.tangent;
    let side = |sign: f64| -> Result<(Point, f64, f64)> {
        let q = Point::new(point.x1() + sign * ds * t[0], point.x2() + sign * ds * t[1], point.t());
        let q = project_to_front(front, q)?;
        let nq = front_geometry(front, q)?.normal;
        let (a, b) = one_sided(field, q)?;
        let (l, m, _, _) = normal_amplitudes(&b.difference(&a), nq);
        Ok((q, l, m))
    };
    let (qp, lp, mp) = side(1.0)?;
    let (qm, lm, mm) = side(-1.0)?;
    let chord = ((qp.x1() - qm.x1()) * t[0] + (qp.x2() - qm.x2()) * t[1]).abs().max(f64::MIN_POSITIVE);

    Ok(JumpRecord {
        point,
        geometry,
        ahead,
        behind,
        jump,
        lambda,
        mu,
        lambda_star,
        mu_star,
        d_lambda_ds: (lp - lm) / chord,
        d_mu_ds: (mp - mm) / chord,
    })
}

impl JumpRecord {
    /// Largest deviation of the second- and third-order jumps from the
    /// compatibility kernels built from the extracted amplitudes.
    pub fn compatibility_defect(&self) -> f64 {
        let geo = &self.geometry;
        let mut worst: f64 = 0.0;
        for (u, amp, amp_star, d_amp) in [
            (Unknown::W, self.lambda, self.lambda_star, self.d_lambda_ds),
            (Unknown::Phi, self.mu, self.mu_star, self.d_mu_ds),
        ] {
            let k = second_jumps(amp, geo);
            let j = &self.jump;
            let mixed = [j.get(u, [1, 0, 1]), j.get(u, [0, 1, 1])];
            worst = worst
                .max((hessian(j, u) - k.spatial).max_abs())
                .max((mixed[0] - k.mixed.v1).abs())
                .max((mixed[1] - k.mixed.v2).abs())
                .max((j.get(u, [0, 0, 2]) - k.temporal).abs());
            let k3 = third_jumps(amp_star, amp, d_amp, geo);
            let j3 = third(j, u);
            for i in 0..4 {
                worst = worst.max((j3.c[i] - k3.c[i]).abs());
            }
        }
        worst
    }

    /// Jumps of `w`, `Φ` and their first derivatives, labelled.
    pub fn low_order_jumps(&self) -> [(&'static str, f64); 8] {
        let j = &self.jump;
        [
            ("[w]", j.w(&[])),
            ("[Phi]", j.phi(&[])),
            ("[w,1]", j.w(&[X1])),
            ("[w,2]", j.w(&[X2])),
            ("[w,3]", j.w(&[T])),
            ("[Phi,1]", j.phi(&[X1])),
            ("[Phi,2]", j.phi(&[X2])),
            ("[Phi,3]", j.phi(&[T])),
        ]
    }
}

/// Outcome of an admissibility check.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub pass: bool,
    pub reasons: Vec<String>,
}

/// Passes iff `w`, `Φ` and all their first derivatives are continuous (jumps
/// below `tol`) while `|[w_{,33}]| > tol`.
pub fn check_acceleration_wave(rec: &JumpRecord, tol: f64) -> Verdict {
    let mut reasons: Vec<String> = rec
        .low_order_jumps()
        .iter()
        .filter(|(_, v)| !(v.abs() < tol))
        .map(|(name, v)| format!("{name}!=0 ({v:e})"))
        .collect();
    let w33 = rec.jump.w(&[T, T]);
    if !(w33.abs() > tol) {
        reasons.push(format!("[w,33]=0 ({w33:e})"));
    }
    Verdict {
        pass: reasons.is_empty(),
        reasons,
    }
}

fn continuity_scale(rec: &JumpRecord) -> f64 {
    1.0 + rec.ahead.max_abs().max(rec.behind.max_abs())
}

fn require_continuity(rec: &JumpRecord) -> Result<()> {
    let tol = 1e-9 * continuity_scale(rec);
    let bad: Vec<String> = rec
        .low_order_jumps()
        .iter()
        .filter(|(_, v)| !(v.abs() < tol))
        .map(|(name, v)| format!("{name}={v:e}"))
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::NotAdmissible {
            reason: bad.join(", "),
        })
    }
}

/// Residuals of `C[ρw_{,3}] + [Q^α]n_α = 0` and `[F^α]n_α = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DynamicResiduals {
    pub momentum: JumpResidual,
    pub compatibility: JumpResidual,
}

pub fn dynamic_jump_residuals(rec: &JumpRecord, p: &PlateParams) -> DynamicResiduals {
    let n = rec.geometry.normal;
    let c = rec.geometry.speed;
    let rho = p.areal_density();
    let (qa, qb) = (shear_force(&rec.ahead, p).dot(n), shear_force(&rec.behind, p).dot(n));
    let (fa, fb) = (f_vector(&rec.ahead, p).dot(n), f_vector(&rec.behind, p).dot(n));
    let (va, vb) = (c * rho * rec.ahead.w(&[T]), c * rho * rec.behind.w(&[T]));
    DynamicResiduals {
        momentum: JumpResidual {
            value: (vb - va) + (qb - qa),
            scale: va.abs() + vb.abs() + qa.abs() + qb.abs(),
        },
        compatibility: JumpResidual {
            value: fb - fa,
            scale: fa.abs() + fb.abs(),
        },
    }
}

/// `C[Ψ₍ⱼ₎] − [P₍ⱼ₎^α]n_α`, evaluated from the two one-sided jets.
pub fn balance_jump_residual(law: Law, rec: &JumpRecord, p: &PlateParams) -> JumpResidual {
    let n = rec.geometry.normal;
    let c = rec.geometry.speed;
    let a = density_flux(law, &rec.ahead, p);
    let b = density_flux(law, &rec.behind, p);
    let (pa, pb) = (a.normal_flux(n), b.normal_flux(n));
    JumpResidual {
        value: c * (b.density - a.density) - (pb - pa),
        scale: c.abs() * (a.density.abs() + b.density.abs()) + pa.abs() + pb.abs(),
    }
}

/// Laws with a closed-form jump condition for acceleration waves.
pub const CLOSED_FORM_LAWS: [Law; 5] = [
    Law::WaveMomentumX1,
    Law::WaveMomentumX2,
    Law::Energy,
    Law::Scaling,
    Law::WaveMomentumMoment,
];

/// The generator of `law` applied to `f_{,β}` on the ahead jet.
fn generator_on_gradient(law: Law, jet: &FieldJet, u: Unknown, beta: usize) -> f64 {
    let d = |axis: usize| jet.get(u, crate::fields::exponents(&[beta, axis]));
    let x = jet.point();
    match law {
        Law::WaveMomentumX1 => d(X1),
        Law::WaveMomentumX2 => d(X2),
        Law::Energy => d(T),
        Law::Scaling => x.x1() * d(X1) + x.x2() * d(X2) + 2.0 * x.t() * d(T),
        Law::WaveMomentumMoment => x.x2() * d(X1) - x.x1() * d(X2),
        _ => unreachable!("generator requested for law without closed form"),
    }
}

/// LHS − RHS of the closed-form jump condition of `law` (one of
/// [`CLOSED_FORM_LAWS`]). Generators act on the ahead jet; the undecorated
/// `w_{,β}`, `Φ_{,β}` of the scaling and moment rows are read from the ahead
/// side, where they equal the behind values by continuity.
pub fn table2_residual(law: Law, rec: &JumpRecord, p: &PlateParams) -> Result<JumpResidual> {
    if !CLOSED_FORM_LAWS.contains(&law) {
        return Err(Error::NoClosedForm(law.index()));
    }
    require_continuity(rec)?;

    let d = p.bending_rigidity();
    let eh = p.membrane_stiffness();
    let (lambda, mu) = (rec.lambda, rec.mu);
    let n = rec.geometry.normal;
    let c = rec.geometry.speed;
    let jet = &rec.ahead;
    let x = rec.point;
    let bend = d * lambda * lambda;
    let stretch = mu * mu / eh;

    // Σ_β (Dλ·A_β − (μ/Eh)·B_β) n^β, with scale
    let contract = |extra: &dyn Fn(Unknown, usize) -> f64| -> (f64, f64) {
        let (mut v, mut s) = (0.0, 0.0);
        for beta in 0..2 {
            let wa = generator_on_gradient(law, jet, Unknown::W, beta) + extra(Unknown::W, beta);
            let pa = generator_on_gradient(law, jet, Unknown::Phi, beta) + extra(Unknown::Phi, beta);
            let tw = d * lambda * wa * n[beta];
            let tp = mu / eh * pa * n[beta];
            v += tw - tp;
            s += tw.abs() + tp.abs();
        }
        (v, s)
    };
    let none = |_: Unknown, _: usize| 0.0;

    let (factor, rhs, rhs_scale) = match law {
        Law::Energy => {
            let (v, s) = contract(&none);
            (0.5 * c, v, s)
        }
        Law::WaveMomentumX1 | Law::WaveMomentumX2 => {
            let k = if law == Law::WaveMomentumX1 { 0 } else { 1 };
            let (v, s) = contract(&none);
            (0.5 * n[k], -v, s)
        }
        Law::WaveMomentumMoment => {
            let rotated = |u: Unknown, beta: usize| {
                (0..2)
                    .map(|al| epsilon(al, beta) * jet.get(u, crate::fields::exponents(&[al])))
                    .sum::<f64>()
            };
            let (v, s) = contract(&rotated);
            let mut lever = 0.0;
            for al in 0..2 {
                for beta in 0..2 {
                    lever += epsilon(al, beta) * n[al] * x.coord(beta);
                }
            }
            (0.5 * lever, -v, s)
        }
        Law::Scaling => {
            let gradient = |u: Unknown, beta: usize| jet.get(u, crate::fields::exponents(&[beta]));
            let (v, s) = contract(&gradient);
            let lever = x.x1() * n[0] + x.x2() * n[1] - 2.0 * c * x.t();
            (0.5 * lever, -v, s)
        }
        _ => unreachable!(),
    };
    Ok(JumpResidual {
        value: factor * (bend - stretch) - rhs,
        scale: factor.abs() * (bend.abs() + stretch.abs()) + rhs_scale,
    })
}

/// The two scalar relations the closed-form conditions reduce to for an
/// [`AccelerationWave`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveRelations {
    /// `DEhω⁴c₁(c₁ − 2u₃⁺) − 4c₂(c₂ + 2φ₂⁺)`
    pub energy: JumpResidual,
    /// `DEhω²c₁(u₁⁺ + ωu₂⁺) − 2c₂φ₁⁺`
    pub scaling: JumpResidual,
}

pub fn ej_oj_residuals(wave: &AccelerationWave) -> WaveRelations {
    let ahead = wave.ahead();
    let p = wave.params();
    let k = p.bending_rigidity() * p.membrane_stiffness();
    let om = ahead.omega();
    let (u, phi) = (ahead.u(), ahead.phi());
    let (c1, c2) = (wave.c1(), wave.c2());

    let e = [
        k * om.powi(4) * c1 * c1,
        -2.0 * k * om.powi(4) * c1 * u[3],
        -4.0 * c2 * c2,
        -8.0 * c2 * phi[2],
    ];
    let o = [k * om * om * c1 * u[1], k * om.powi(3) * c1 * u[2], -2.0 * c2 * phi[1]];
    WaveRelations {
        energy: JumpResidual {
            value: e.iter().sum(),
            scale: e.iter().map(|v| v.abs()).sum(),
        },
        scaling: JumpResidual {
            value: o.iter().sum(),
            scale: o.iter().map(|v| v.abs()).sum(),
        },
    }
}
