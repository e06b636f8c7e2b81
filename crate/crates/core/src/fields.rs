//! Plate constants, derivative jets of the deflection `w` and the Airy stress
//! function `Φ`, and every tensor and energy density built from them.
//!
//! Indices follow the usual Cartesian conventions: axis `X1`, `X2` are the
//! middle-plane coordinates and `T` is time. The metric is the Kronecker
//! delta, so co- and contravariant components coincide numerically.

use crate::error::{Error, Result};

pub const X1: usize = 0;
pub const X2: usize = 1;
pub const T: usize = 2;

/// Highest total derivative order stored in a [`FieldJet`].
pub const JET_ORDER: usize = 4;
/// Number of sorted multi-indices of total order `<= JET_ORDER` in three variables.
pub const JET_LEN: usize = 35;

/// A point `(x¹, x², x³)` of the plate middle-plane at time `x³`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point(pub [f64; 3]);

impl Point {
    pub fn new(x1: f64, x2: f64, t: f64) -> Self {
        Point([x1, x2, t])
    }

    pub fn x1(&self) -> f64 {
        self.0[X1]
    }

    pub fn x2(&self) -> f64 {
        self.0[X2]
    }

    pub fn t(&self) -> f64 {
        self.0[T]
    }

    /// Coordinate along `axis`.
    pub fn coord(&self, axis: usize) -> f64 {
        self.0[axis]
    }

    pub fn shifted(&self, axis: usize, by: f64) -> Self {
        let mut p = *self;
        p.0[axis] += by;
        p
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Isotropic plate constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlateParams {
    youngs_modulus: f64,
    poisson_ratio: f64,
    thickness: f64,
    areal_density: f64,
    bending_rigidity: f64,
    membrane_stiffness: f64,
}

impl PlateParams {
    /// Validates the material constants and derives `D = Eh³/12(1−ν²)` and `Eh`.
    pub fn new(
        youngs_modulus: f64,
        poisson_ratio: f64,
        thickness: f64,
        areal_density: f64,
    ) -> Result<Self> {
        fn positive(field: &'static str, value: f64) -> Result<()> {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter {
                    field,
                    value,
                    reason: "must be finite and > 0",
                })
            }
        }
        positive("youngs_modulus", youngs_modulus)?;
        positive("thickness", thickness)?;
        positive("areal_density", areal_density)?;
        if !(poisson_ratio.is_finite() && poisson_ratio > -1.0 && poisson_ratio < 0.5) {
            return Err(Error::InvalidParameter {
                field: "poisson_ratio",
                value: poisson_ratio,
                reason: "must satisfy -1 < nu < 0.5",
            });
        }
        let bending_rigidity = youngs_modulus * thickness.powi(3)
            / (12.0 * (1.0 - poisson_ratio * poisson_ratio));
        Ok(PlateParams {
            youngs_modulus,
            poisson_ratio,
            thickness,
            areal_density,
            bending_rigidity,
            membrane_stiffness: youngs_modulus * thickness,
        })
    }

    pub fn youngs_modulus(&self) -> f64 {
        self.youngs_modulus
    }

    pub fn poisson_ratio(&self) -> f64 {
        self.poisson_ratio
    }

    pub fn thickness(&self) -> f64 {
        self.thickness
    }

    pub fn areal_density(&self) -> f64 {
        self.areal_density
    }

    /// `D`
    pub fn bending_rigidity(&self) -> f64 {
        self.bending_rigidity
    }

    /// `Eh`
    pub fn membrane_stiffness(&self) -> f64 {
        self.membrane_stiffness
    }
}

/// Kronecker delta on the in-plane indices.
pub fn delta(a: usize, b: usize) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Two-dimensional alternating symbol, `ε¹² = 1`.
pub fn epsilon(a: usize, b: usize) -> f64 {
    match (a, b) {
        (0, 1) => 1.0,
        (1, 0) => -1.0,
        _ => 0.0,
    }
}

/// Symmetric in-plane second-rank tensor.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SymTensor2 {
    pub t11: f64,
    pub t12: f64,
    pub t22: f64,
}

impl SymTensor2 {
    pub fn new(t11: f64, t12: f64, t22: f64) -> Self {
        SymTensor2 { t11, t12, t22 }
    }

    /// Builds from a component function evaluated on `(0,0)`, `(0,1)`, `(1,1)`.
    pub fn from_fn(mut f: impl FnMut(usize, usize) -> f64) -> Self {
        SymTensor2 {
            t11: f(0, 0),
            t12: f(0, 1),
            t22: f(1, 1),
        }
    }

    pub fn get(&self, a: usize, b: usize) -> f64 {
        match (a, b) {
            (0, 0) => self.t11,
            (1, 1) => self.t22,
            _ => self.t12,
        }
    }

    pub fn trace(&self) -> f64 {
        self.t11 + self.t22
    }

    /// `A_{αβ} u^α v^β`
    pub fn contract(&self, u: [f64; 2], v: [f64; 2]) -> f64 {
        let mut s = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                s += self.get(a, b) * u[a] * v[b];
            }
        }
        s
    }

    /// `A^{αβ} n_β`
    pub fn dot(&self, n: [f64; 2]) -> Vector2 {
        Vector2::new(
            self.t11 * n[0] + self.t12 * n[1],
            self.t12 * n[0] + self.t22 * n[1],
        )
    }

    pub fn max_abs(&self) -> f64 {
        self.t11.abs().max(self.t12.abs()).max(self.t22.abs())
    }
}

impl std::ops::Sub for SymTensor2 {
    type Output = SymTensor2;
    fn sub(self, o: SymTensor2) -> SymTensor2 {
        SymTensor2::new(self.t11 - o.t11, self.t12 - o.t12, self.t22 - o.t22)
    }
}

/// In-plane vector.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vector2 {
    pub v1: f64,
    pub v2: f64,
}

impl Vector2 {
    pub fn new(v1: f64, v2: f64) -> Self {
        Vector2 { v1, v2 }
    }

    pub fn get(&self, a: usize) -> f64 {
        if a == 0 {
            self.v1
        } else {
            self.v2
        }
    }

    pub fn dot(&self, n: [f64; 2]) -> f64 {
        self.v1 * n[0] + self.v2 * n[1]
    }

    pub fn as_array(&self) -> [f64; 2] {
        [self.v1, self.v2]
    }
}

impl std::ops::Sub for Vector2 {
    type Output = Vector2;
    fn sub(self, o: Vector2) -> Vector2 {
        Vector2::new(self.v1 - o.v1, self.v2 - o.v2)
    }
}

/// `ε^{αμ} ε^{βν} A_{αβ} B_{μν}`; equals `2 det A` when `A = B`.
pub fn cross_contract(a: &SymTensor2, b: &SymTensor2) -> f64 {
    let mut s = 0.0;
    for al in 0..2 {
        for mu in 0..2 {
            for be in 0..2 {
                for nu in 0..2 {
                    s += epsilon(al, mu) * epsilon(be, nu) * a.get(al, be) * b.get(mu, nu);
                }
            }
        }
    }
    s
}

/// Which of the two unknowns a jet entry belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unknown {
    W,
    Phi,
}

/// Storage slot of the sorted multi-index with exponents `(a, b, c)` along
/// `(x¹, x², x³)`. Slots are grouped by total order.
pub const fn slot(exps: [u8; 3]) -> usize {
    let a = exps[0] as usize;
    let b = exps[1] as usize;
    let k = a + b + exps[2] as usize;
    let r = k - a;
    k * (k + 1) * (k + 2) / 6 + r * (r + 1) / 2 + (r - b)
}

/// Exponents of the derivative named by a list of axes, e.g. `[X1, X1, T]`.
pub fn exponents(axes: &[usize]) -> [u8; 3] {
    let mut e = [0u8; 3];
    for &a in axes {
        e[a] += 1;
    }
    e
}

/// All multi-indices of total order `<= JET_ORDER`, in slot order.
pub fn multi_indices() -> impl Iterator<Item = [u8; 3]> {
    (0..=JET_ORDER as u8).flat_map(|k| {
        (0..=k).rev().flat_map(move |a| {
            let r = k - a;
            (0..=r).rev().map(move |b| [a, b, r - b])
        })
    })
}

/// Every partial derivative of `w` and `Φ` up to total order four at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldJet {
    point: Point,
    w: [f64; JET_LEN],
    phi: [f64; JET_LEN],
}

impl FieldJet {
    pub fn zero(point: Point) -> Self {
        FieldJet {
            point,
            w: [0.0; JET_LEN],
            phi: [0.0; JET_LEN],
        }
    }

    /// Fills every entry from `f(unknown, exponents)` and rejects non-finite values.
    pub fn from_fn(point: Point, mut f: impl FnMut(Unknown, [u8; 3]) -> f64) -> Result<Self> {
        let mut jet = FieldJet::zero(point);
        for e in multi_indices() {
            jet.w[slot(e)] = f(Unknown::W, e);
            jet.phi[slot(e)] = f(Unknown::Phi, e);
        }
        jet.validate()?;
        Ok(jet)
    }

    pub fn validate(&self) -> Result<()> {
        for e in multi_indices() {
            for (field, store) in [("w", &self.w), ("phi", &self.phi)] {
                let value = store[slot(e)];
                if !value.is_finite() {
                    return Err(Error::NonFiniteJet {
                        field,
                        index: e,
                        value,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn point(&self) -> Point {
        self.point
    }

    /// `w_{,axes}`; an empty slice gives `w` itself.
    pub fn w(&self, axes: &[usize]) -> f64 {
        self.w[slot(exponents(axes))]
    }

    /// `Φ_{,axes}`
    pub fn phi(&self, axes: &[usize]) -> f64 {
        self.phi[slot(exponents(axes))]
    }

    pub fn get(&self, unknown: Unknown, exps: [u8; 3]) -> f64 {
        match unknown {
            Unknown::W => self.w[slot(exps)],
            Unknown::Phi => self.phi[slot(exps)],
        }
    }

    pub fn set(&mut self, unknown: Unknown, exps: [u8; 3], value: f64) {
        match unknown {
            Unknown::W => self.w[slot(exps)] = value,
            Unknown::Phi => self.phi[slot(exps)] = value,
        }
    }

    /// Componentwise `self − other`, located at `self`'s point.
    pub fn difference(&self, other: &FieldJet) -> FieldJet {
        let mut out = self.clone();
        for i in 0..JET_LEN {
            out.w[i] -= other.w[i];
            out.phi[i] -= other.phi[i];
        }
        out
    }

    /// Largest absolute entry over both unknowns.
    pub fn max_abs(&self) -> f64 {
        self.w
            .iter()
            .chain(self.phi.iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Spatial Hessian of `w`, i.e. `K_{αβ}`.
    fn w_hessian(&self) -> SymTensor2 {
        SymTensor2::from_fn(|a, b| self.w(&[a, b]))
    }

    fn phi_hessian(&self) -> SymTensor2 {
        SymTensor2::from_fn(|a, b| self.phi(&[a, b]))
    }

    fn w_gradient(&self) -> [f64; 2] {
        [self.w(&[X1]), self.w(&[X2])]
    }
}

/// `N^{αβ} = ε^{αμ} ε^{βν} Φ_{,μν}`
pub fn membrane_stress(jet: &FieldJet) -> SymTensor2 {
    SymTensor2::from_fn(|al, be| {
        let mut s = 0.0;
        for mu in 0..2 {
            for nu in 0..2 {
                s += epsilon(al, mu) * epsilon(be, nu) * jet.phi(&[mu, nu]);
            }
        }
        s
    })
}

/// `M^{αβ} = −D{(1−ν)δ^{αμ}δ^{βν} + νδ^{αβ}δ^{μν}} w_{,μν}`
pub fn moment_tensor(jet: &FieldJet, p: &PlateParams) -> SymTensor2 {
    let nu = p.poisson_ratio();
    let d = p.bending_rigidity();
    SymTensor2::from_fn(|al, be| {
        let mut s = 0.0;
        for mu in 0..2 {
            for ga in 0..2 {
                let c = (1.0 - nu) * delta(al, mu) * delta(be, ga)
                    + nu * delta(al, be) * delta(mu, ga);
                s += c * jet.w(&[mu, ga]);
            }
        }
        -d * s
    })
}

/// `M^{αβ}_{,γ}`, differentiating the constitutive law once more.
fn moment_gradient(jet: &FieldJet, p: &PlateParams, axis: usize) -> SymTensor2 {
    let nu = p.poisson_ratio();
    let d = p.bending_rigidity();
    let lap = jet.w(&[X1, X1, axis]) + jet.w(&[X2, X2, axis]);
    SymTensor2::from_fn(|al, be| -d * ((1.0 - nu) * jet.w(&[al, be, axis]) + nu * delta(al, be) * lap))
}

/// `Q^α = M^{αμ}_{,μ} + N^{αμ} w_{,μ}`
pub fn shear_force(jet: &FieldJet, p: &PlateParams) -> Vector2 {
    let n = membrane_stress(jet);
    let grads = [moment_gradient(jet, p, X1), moment_gradient(jet, p, X2)];
    let dw = jet.w_gradient();
    let comp = |al: usize| {
        let mut s = 0.0;
        for mu in 0..2 {
            s += grads[mu].get(al, mu) + n.get(al, mu) * dw[mu];
        }
        s
    };
    Vector2::new(comp(0), comp(1))
}

/// Membrane strain `E^{αβ} = (1/Eh){(1+ν)ε^{αμ}ε^{βν} − νδ^{αβ}δ^{μν}} Φ_{,μν}`.
pub fn membrane_strain(jet: &FieldJet, p: &PlateParams) -> SymTensor2 {
    let nu = p.poisson_ratio();
    let eh = p.membrane_stiffness();
    SymTensor2::from_fn(|al, be| {
        let mut s = 0.0;
        for mu in 0..2 {
            for ga in 0..2 {
                let c = (1.0 + nu) * epsilon(al, mu) * epsilon(be, ga)
                    - nu * delta(al, be) * delta(mu, ga);
                s += c * jet.phi(&[mu, ga]);
            }
        }
        s / eh
    })
}

/// `K_{αβ} = w_{,αβ}`
pub fn bending_tensor(jet: &FieldJet) -> SymTensor2 {
    jet.w_hessian()
}

/// `G^{αβ} = (1/Eh){(1+ν)δ^{αμ}δ^{βν} − νδ^{αβ}δ^{μν}}Φ_{,μν} − ½ε^{αμ}ε^{βν}w_{,μ}w_{,ν}`
pub fn g_tensor(jet: &FieldJet, p: &PlateParams) -> SymTensor2 {
    let nu = p.poisson_ratio();
    let eh = p.membrane_stiffness();
    let dw = jet.w_gradient();
    SymTensor2::from_fn(|al, be| {
        let mut elastic = 0.0;
        let mut geometric = 0.0;
        for mu in 0..2 {
            for ga in 0..2 {
                let c = (1.0 + nu) * delta(al, mu) * delta(be, ga)
                    - nu * delta(al, be) * delta(mu, ga);
                elastic += c * jet.phi(&[mu, ga]);
                geometric += epsilon(al, mu) * epsilon(be, ga) * dw[mu] * dw[ga];
            }
        }
        elastic / eh - 0.5 * geometric
    })
}

/// `G^{αβ}_{,λ}`
fn g_gradient(jet: &FieldJet, p: &PlateParams, axis: usize) -> SymTensor2 {
    let nu = p.poisson_ratio();
    let eh = p.membrane_stiffness();
    SymTensor2::from_fn(|al, be| {
        let mut elastic = 0.0;
        let mut geometric = 0.0;
        for mu in 0..2 {
            for ga in 0..2 {
                let c = (1.0 + nu) * delta(al, mu) * delta(be, ga)
                    - nu * delta(al, be) * delta(mu, ga);
                elastic += c * jet.phi(&[mu, ga, axis]);
                // product rule on w_{,μ} w_{,ν}
                geometric += epsilon(al, mu)
                    * epsilon(be, ga)
                    * (jet.w(&[mu, axis]) * jet.w(&[ga]) + jet.w(&[mu]) * jet.w(&[ga, axis]));
            }
        }
        elastic / eh - 0.5 * geometric
    })
}

/// `F^α = G^{αν}_{,ν}`
pub fn f_vector(jet: &FieldJet, p: &PlateParams) -> Vector2 {
    let grads = [g_gradient(jet, p, X1), g_gradient(jet, p, X2)];
    let comp = |al: usize| grads[0].get(al, 0) + grads[1].get(al, 1);
    Vector2::new(comp(0), comp(1))
}

/// Strain energy per unit middle-plane area, `Π`.
pub fn strain_energy_density(jet: &FieldJet, p: &PlateParams) -> f64 {
    let d = p.bending_rigidity();
    let eh = p.membrane_stiffness();
    let nu = p.poisson_ratio();
    let k = jet.w_hessian();
    let f = jet.phi_hessian();
    let dw = jet.w_gradient();

    let bending = 0.5 * d * (k.trace().powi(2) - (1.0 - nu) * cross_contract(&k, &k));
    let membrane = (f.trace().powi(2) - (1.0 + nu) * cross_contract(&f, &f)) / (2.0 * eh);
    let mut coupling = 0.0;
    for al in 0..2 {
        for mu in 0..2 {
            for be in 0..2 {
                for nu_ in 0..2 {
                    coupling += epsilon(al, mu) * epsilon(be, nu_) * f.get(al, be) * dw[mu] * dw[nu_];
                }
            }
        }
    }
    bending - membrane + 0.5 * coupling
}

/// `T = (ρ/2)(w_{,3})²`
pub fn kinetic_energy_density(jet: &FieldJet, p: &PlateParams) -> f64 {
    0.5 * p.areal_density() * jet.w(&[T]).powi(2)
}

/// `L = T − Π`
pub fn lagrangian_density(jet: &FieldJet, p: &PlateParams) -> f64 {
    kinetic_energy_density(jet, p) - strain_energy_density(jet, p)
}
