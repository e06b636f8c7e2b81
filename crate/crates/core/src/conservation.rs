//! The fourteen basic conservation laws `∂Ψ/∂x³ + ∂P^μ/∂x^μ = 0` of the von
//! Kármán equations, one per variational symmetry, in executable form.
//!
//! Composite laws are assembled from the rows they are built on, so that
//! e.g. `Ψ₍₆₎ = x²Ψ₍₂₎ − x¹Ψ₍₃₎` holds exactly.

use std::fmt;

use crate::error::{Error, Result};
use crate::fields::{
    epsilon, f_vector, g_tensor, kinetic_energy_density, moment_tensor, shear_force,
    strain_energy_density, FieldJet, PlateParams, Point, SymTensor2, Vector2, T, X1, X2,
};
use crate::solutions::{PiecewiseField, Side};

/// Index of a basic conservation law, `1..=14`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Law {
    /// `∂/∂w`: transversal linear momentum.
    TransversalMomentum = 1,
    /// `∂/∂x¹`
    WaveMomentumX1 = 2,
    /// `∂/∂x²`
    WaveMomentumX2 = 3,
    /// `∂/∂x³`
    Energy = 4,
    /// `x^μ∂/∂x^μ + 2x³∂/∂x³`
    Scaling = 5,
    /// `x²∂/∂x¹ − x¹∂/∂x²`
    WaveMomentumMoment = 6,
    /// `x¹∂/∂w`
    AngularMomentumX1 = 7,
    /// `x²∂/∂w`
    AngularMomentumX2 = 8,
    /// `x³∂/∂w`: Galilean boost.
    CenterOfMass = 9,
    /// `x¹x³∂/∂w`
    GalileanX1 = 10,
    /// `x²x³∂/∂w`
    GalileanX2 = 11,
    /// `x¹∂/∂Φ`
    StressLinearX1 = 12,
    /// `x²∂/∂Φ`
    StressLinearX2 = 13,
    /// `∂/∂Φ`: compatibility condition.
    Compatibility = 14,
}

impl Law {
    pub const ALL: [Law; 14] = [
        Law::TransversalMomentum,
        Law::WaveMomentumX1,
        Law::WaveMomentumX2,
        Law::Energy,
        Law::Scaling,
        Law::WaveMomentumMoment,
        Law::AngularMomentumX1,
        Law::AngularMomentumX2,
        Law::CenterOfMass,
        Law::GalileanX1,
        Law::GalileanX2,
        Law::StressLinearX1,
        Law::StressLinearX2,
        Law::Compatibility,
    ];

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn from_index(j: u8) -> Option<Law> {
        Law::ALL.get((j as usize).wrapping_sub(1)).copied()
    }

    /// Name used in scenario files.
    pub fn name(self) -> &'static str {
        match self {
            Law::TransversalMomentum => "transversal_momentum",
            Law::WaveMomentumX1 => "wave_momentum_x1",
            Law::WaveMomentumX2 => "wave_momentum_x2",
            Law::Energy => "energy",
            Law::Scaling => "scaling",
            Law::WaveMomentumMoment => "wave_momentum_moment",
            Law::AngularMomentumX1 => "angular_momentum_x1",
            Law::AngularMomentumX2 => "angular_momentum_x2",
            Law::CenterOfMass => "center_of_mass",
            Law::GalileanX1 => "galilean_x1",
            Law::GalileanX2 => "galilean_x2",
            Law::StressLinearX1 => "stress_linear_x1",
            Law::StressLinearX2 => "stress_linear_x2",
            Law::Compatibility => "compatibility",
        }
    }

    pub fn from_name(name: &str) -> Result<Law> {
        Law::ALL
            .iter()
            .copied()
            .find(|l| l.name() == name)
            .ok_or_else(|| Error::UnknownLaw {
                name: name.to_string(),
                valid: Law::ALL.map(|l| l.name()).join(", "),
            })
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.index(), self.name())
    }
}

/// Density `Ψ` and flux `(P¹, P²)` of one law at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DensityFlux {
    pub density: f64,
    pub flux: Vector2,
}

impl DensityFlux {
    fn new(density: f64, p1: f64, p2: f64) -> Self {
        DensityFlux {
            density,
            flux: Vector2::new(p1, p2),
        }
    }

    fn combine(terms: &[(f64, DensityFlux)]) -> Self {
        let mut out = DensityFlux::default();
        for (c, df) in terms {
            out.density += c * df.density;
            out.flux.v1 += c * df.flux.v1;
            out.flux.v2 += c * df.flux.v2;
        }
        out
    }

    /// `P^α n_α`
    pub fn normal_flux(&self, n: [f64; 2]) -> f64 {
        self.flux.dot(n)
    }
}

/// Tensors shared by all rows at one jet.
struct Ingredients<'a> {
    jet: &'a FieldJet,
    x: Point,
    rho: f64,
    q: Vector2,
    f: Vector2,
    m: SymTensor2,
    g: SymTensor2,
    lagrangian: f64,
    energy: f64,
}

impl<'a> Ingredients<'a> {
    fn new(jet: &'a FieldJet, p: &PlateParams) -> Self {
        let kinetic = kinetic_energy_density(jet, p);
        let strain = strain_energy_density(jet, p);
        Ingredients {
            jet,
            x: jet.point(),
            rho: p.areal_density(),
            q: shear_force(jet, p),
            f: f_vector(jet, p),
            m: moment_tensor(jet, p),
            g: g_tensor(jet, p),
            lagrangian: kinetic - strain,
            energy: kinetic + strain,
        }
    }

    /// Rows 2 and 3: `δ^{αk}L + w_{,k}Q^α + Φ_{,k}F^α − w_{,kβ}M^{αβ} − Φ_{,kβ}G^{αβ}`.
    fn wave_momentum(&self, k: usize) -> DensityFlux {
        let j = self.jet;
        let comp = |al: usize| {
            let mut s = if al == k { self.lagrangian } else { 0.0 };
            s += j.w(&[k]) * self.q.get(al) + j.phi(&[k]) * self.f.get(al);
            for be in 0..2 {
                s -= j.w(&[k, be]) * self.m.get(al, be) + j.phi(&[k, be]) * self.g.get(al, be);
            }
            s
        };
        DensityFlux::new(-self.rho * j.w(&[k]) * j.w(&[T]), comp(0), comp(1))
    }

    fn energy(&self) -> DensityFlux {
        let j = self.jet;
        let comp = |al: usize| {
            let mut s = -j.w(&[T]) * self.q.get(al) - j.phi(&[T]) * self.f.get(al);
            for be in 0..2 {
                s += j.w(&[T, be]) * self.m.get(al, be) + j.phi(&[T, be]) * self.g.get(al, be);
            }
            s
        };
        DensityFlux::new(self.energy, comp(0), comp(1))
    }

    fn row(&self, law: Law) -> DensityFlux {
        let j = self.jet;
        let (x1, x2, x3) = (self.x.x1(), self.x.x2(), self.x.t());
        let (q, f) = (self.q, self.f);
        match law {
            Law::TransversalMomentum => DensityFlux::new(self.rho * j.w(&[T]), -q.v1, -q.v2),
            Law::Compatibility => DensityFlux::new(0.0, f.v1, f.v2),
            Law::Energy => self.energy(),
            Law::WaveMomentumX1 => self.wave_momentum(X1),
            Law::WaveMomentumX2 => self.wave_momentum(X2),
            Law::WaveMomentumMoment => {
                // x²P₍₂₎ − x¹P₍₃₎ + ε_ν^μ w_{,μ}M^{αν} + ε_ν^μ Φ_{,μ}G^{αν}
                let mut out = DensityFlux::combine(&[
                    (x2, self.row(Law::WaveMomentumX1)),
                    (-x1, self.row(Law::WaveMomentumX2)),
                ]);
                for nu in 0..2 {
                    for mu in 0..2 {
                        let e = epsilon(nu, mu);
                        out.flux.v1 += e * (j.w(&[mu]) * self.m.get(0, nu) + j.phi(&[mu]) * self.g.get(0, nu));
                        out.flux.v2 += e * (j.w(&[mu]) * self.m.get(1, nu) + j.phi(&[mu]) * self.g.get(1, nu));
                    }
                }
                out
            }
            Law::AngularMomentumX1 => {
                let comp = |al: usize| {
                    let mut s = self.m.get(al, X1) - x1 * q.get(al);
                    for nu in 0..2 {
                        s += j.w(&[]) * epsilon(al, nu) * j.phi(&[nu, X2]);
                    }
                    s
                };
                DensityFlux::new(self.rho * x1 * j.w(&[T]), comp(0), comp(1))
            }
            Law::AngularMomentumX2 => {
                let comp = |al: usize| {
                    let mut s = self.m.get(al, X2) - x2 * q.get(al);
                    for nu in 0..2 {
                        s += j.w(&[]) * epsilon(nu, al) * j.phi(&[nu, X1]);
                    }
                    s
                };
                DensityFlux::new(self.rho * x2 * j.w(&[T]), comp(0), comp(1))
            }
            Law::Scaling => {
                // x¹P₍₂₎ + x²P₍₃₎ − 2x³P₍₄₎ − w_{,β}M^{αβ} − Φ_{,β}G^{αβ}
                let mut out = DensityFlux::combine(&[
                    (x1, self.row(Law::WaveMomentumX1)),
                    (x2, self.row(Law::WaveMomentumX2)),
                    (-2.0 * x3, self.row(Law::Energy)),
                ]);
                for be in 0..2 {
                    out.flux.v1 -= j.w(&[be]) * self.m.get(0, be) + j.phi(&[be]) * self.g.get(0, be);
                    out.flux.v2 -= j.w(&[be]) * self.m.get(1, be) + j.phi(&[be]) * self.g.get(1, be);
                }
                out
            }
            Law::CenterOfMass => DensityFlux::new(
                self.rho * (x3 * j.w(&[T]) - j.w(&[])),
                -x3 * q.v1,
                -x3 * q.v2,
            ),
            Law::GalileanX1 => {
                let base = self.row(Law::AngularMomentumX1);
                let com = self.row(Law::CenterOfMass);
                DensityFlux {
                    density: x1 * com.density,
                    flux: Vector2::new(x3 * base.flux.v1, x3 * base.flux.v2),
                }
            }
            Law::GalileanX2 => {
                let base = self.row(Law::AngularMomentumX2);
                let com = self.row(Law::CenterOfMass);
                DensityFlux {
                    density: x2 * com.density,
                    flux: Vector2::new(x3 * base.flux.v1, x3 * base.flux.v2),
                }
            }
            Law::StressLinearX1 => {
                DensityFlux::new(0.0, x1 * f.v1 - self.g.get(0, X1), x1 * f.v2 - self.g.get(1, X1))
            }
            Law::StressLinearX2 => {
                DensityFlux::new(0.0, x2 * f.v1 - self.g.get(0, X2), x2 * f.v2 - self.g.get(1, X2))
            }
        }
    }
}

/// Density and flux of `law` evaluated on `jet`; the jet's point supplies the
/// explicit coordinates that appear in rows 5–13.
pub fn density_flux(law: Law, jet: &FieldJet, p: &PlateParams) -> DensityFlux {
    Ingredients::new(jet, p).row(law)
}

/// Densities and fluxes of all fourteen laws, sharing one set of ingredients.
pub fn all_density_fluxes(jet: &FieldJet, p: &PlateParams) -> [DensityFlux; 14] {
    let ing = Ingredients::new(jet, p);
    Law::ALL.map(|l| ing.row(l))
}

/// Finite-difference divergence `∂₃Ψ + ∂₁P¹ + ∂₂P²` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawResidual {
    pub residual: f64,
    /// `|∂₃Ψ| + |∂₁P¹| + |∂₂P²|`
    pub scale: f64,
}

impl LawResidual {
    /// `|residual| / max(scale, 1)`
    pub fn relative(&self) -> f64 {
        self.residual.abs() / self.scale.max(1.0)
    }
}

/// Default coordinate step of [`conservation_residual`].
pub const DEFAULT_DIVERGENCE_STEP: f64 = 1e-3;

fn divergence_terms(field: &dyn PiecewiseField, law: Law, point: Point, h: f64) -> Result<[f64; 3]> {
    let branch = field.resolve(point, Side::Auto)?;
    let p = field.params();
    let mut terms = [0.0; 3];
    for axis in [X1, X2, T] {
        let plus = density_flux(law, &field.branch_jet(branch, point.shifted(axis, h))?, p);
        let minus = density_flux(law, &field.branch_jet(branch, point.shifted(axis, -h))?, p);
        let pick = |df: &DensityFlux| match axis {
            X1 => df.flux.v1,
            X2 => df.flux.v2,
            _ => df.density,
        };
        terms[axis] = (pick(&plus) - pick(&minus)) / (2.0 * h);
    }
    Ok(terms)
}

fn check_clearance(field: &dyn PiecewiseField, point: Point, reach: f64) -> Result<()> {
    if let Some(front) = field.front() {
        let g = front.gradient(point);
        let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
        let distance = front.value(point).abs() / norm;
        if distance <= reach {
            return Err(Error::TooCloseToFront {
                point: point.0,
                distance,
                reach,
            });
        }
    }
    Ok(())
}

/// Plain second-order central estimate of the divergence with step `h`.
pub fn conservation_residual_central(
    field: &dyn PiecewiseField,
    law: Law,
    point: Point,
    h: f64,
) -> Result<LawResidual> {
    validate_step(h)?;
    check_clearance(field, point, 4.0 * h)?;
    let t = divergence_terms(field, law, point, h)?;
    Ok(LawResidual {
        residual: t.iter().sum(),
        scale: t.iter().map(|v| v.abs()).sum(),
    })
}

/// Divergence of the assembled density and flux, central differences
/// extrapolated once in `h`. The point must be further than `4h` (in
/// space-time) from any front.
pub fn conservation_residual(field: &dyn PiecewiseField, law: Law, point: Point, h: f64) -> Result<LawResidual> {
    validate_step(h)?;
    check_clearance(field, point, 4.0 * h)?;
    let coarse = divergence_terms(field, law, point, h)?;
    let fine = divergence_terms(field, law, point, 0.5 * h)?;
    let t: Vec<f64> = (0..3).map(|i| (4.0 * fine[i] - coarse[i]) / 3.0).collect();
    Ok(LawResidual {
        residual: t.iter().sum(),
        scale: t.iter().map(|v| v.abs()).sum(),
    })
}

fn validate_step(h: f64) -> Result<()> {
    if h.is_finite() && h > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            field: "step",
            value: h,
            reason: "must be finite and > 0",
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{exponents, Unknown};
    use crate::solutions::{AccelerationWave, InvariantSolution};

    fn params(e: f64, nu: f64, rho: f64) -> PlateParams {
        PlateParams::new(e, nu, 1.0, rho).unwrap()
    }

    #[test]
    fn law_names_round_trip() {
        for law in Law::ALL {
            assert_eq!(Law::from_name(law.name()).unwrap(), law);
            assert_eq!(Law::from_index(law.index()), Some(law));
        }
        assert_eq!(Law::from_index(0), None);
        assert_eq!(Law::from_index(15), None);
        match Law::from_name("momentum") {
            Err(Error::UnknownLaw { valid, .. }) => assert!(valid.contains("center_of_mass")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn row_examples() {
        let p = params(1.0, 0.2, 2.0);
        let mut jet = FieldJet::zero(Point::new(0.3, -0.4, 5.0));
        jet.set(Unknown::Phi, exponents(&[X1, X1, X1]), 1.5);
        jet.set(Unknown::W, exponents(&[X1]), 0.5);
        let df = density_flux(Law::Compatibility, &jet, &p);
        assert_eq!(df.density, 0.0);
        assert_eq!(df.flux, f_vector(&jet, &p));

        // w = x³ at x³ = 5
        let mut jet = FieldJet::zero(Point::new(0.0, 0.0, 5.0));
        jet.set(Unknown::W, [0, 0, 0], 5.0);
        jet.set(Unknown::W, exponents(&[T]), 1.0);
        let df = density_flux(Law::TransversalMomentum, &jet, &p);
        assert_eq!((df.density, df.flux), (2.0, Vector2::default()));
        let df = density_flux(Law::CenterOfMass, &jet, &params(1.0, 0.2, 1.0));
        assert_eq!(df.density, 0.0);
    }

    #[test]
    fn zero_field_has_zero_residual() {
        let zero = InvariantSolution::zero(1.0, params(3.0, 0.3, 1.0)).unwrap();
        for law in Law::ALL {
            let r = conservation_residual(&zero, law, Point::new(0.2, 0.1, 0.4), 1e-3).unwrap();
            assert_eq!(r.residual, 0.0, "{law}");
        }
    }

    #[test]
    fn first_law_is_first_field_equation() {
        let p = params(7.0, 0.25, 1.3);
        let s = InvariantSolution::new([0.3, -0.7, 1.1, 0.4], [0.2, -0.5, 0.9, 0.3], 1.2, p).unwrap();
        let r = conservation_residual(&s, Law::TransversalMomentum, Point::new(0.4, 0.2, 0.3), 1e-3).unwrap();
        assert!(r.relative() < 1e-6, "{r:?}");
    }

    #[test]
    fn stencil_may_not_straddle_front() {
        let p = params(12.0, 0.0, 1.0);
        let wave = AccelerationWave::new(InvariantSolution::zero(1.0, p).unwrap(), 1.0, 0.5).unwrap();
        let err = conservation_residual(&wave, Law::Energy, Point::new(1.002, 0.0, 1.0), 1e-3).unwrap_err();
        assert!(matches!(err, Error::TooCloseToFront { .. }));
        assert!(conservation_residual(&wave, Law::Energy, Point::new(1.1, 0.0, 1.0), 1e-3).is_ok());
    }
}
