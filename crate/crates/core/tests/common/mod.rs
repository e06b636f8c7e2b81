#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use vkwave_core::fields::{FieldJet, PlateParams, Point, Unknown};
use vkwave_core::solutions::{plane_wave_jet, AccelerationWave, Branch, InvariantSolution, PiecewiseField, Profile};
use vkwave_core::wavefront::{LevelSet, LineFront};
use vkwave_core::Result;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_params(r: &mut ChaCha8Rng) -> PlateParams {
    PlateParams::new(r.gen_range(6.0..24.0), r.gen_range(0.0..0.4), 1.0, r.gen_range(0.5..2.0)).unwrap()
}

pub fn coefs(r: &mut ChaCha8Rng) -> [f64; 4] {
    [(); 4].map(|_| r.gen_range(-2.0..2.0))
}

pub fn random_invariant(r: &mut ChaCha8Rng) -> InvariantSolution {
    let p = random_params(r);
    let c = r.gen_range(0.5..2.0) * if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    InvariantSolution::new(coefs(r), coefs(r), c, p).unwrap()
}

pub fn random_point(r: &mut ChaCha8Rng) -> Point {
    Point::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0))
}

fn nonzero(r: &mut ChaCha8Rng) -> f64 {
    loop {
        let v: f64 = r.gen_range(-2.0..2.0);
        if v.abs() > 0.1 {
            return v;
        }
    }
}

/// Which of the two wave relations a draw is built to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relations {
    Neither,
    Energy,
    Scaling,
    Both,
}

/// `c₁` solving `DEhω⁴c₁(c₁ − 2u₃) = 4c₂² + 8φ₂c₂`, if a non-zero real root exists.
fn energy_root(k: f64, u3: f64, c2: f64, phi2: f64, r: &mut ChaCha8Rng) -> Option<f64> {
    let rhs = (4.0 * c2 * c2 + 8.0 * phi2 * c2) / k;
    let disc = u3 * u3 + rhs;
    if disc < 0.0 {
        return None;
    }
    let sign = if r.gen_bool(0.5) { 1.0 } else { -1.0 };
    let c1 = u3 + sign * disc.sqrt();
    (c1.abs() > 1e-2).then_some(c1)
}

/// A random acceleration wave built to satisfy the requested relations.
pub fn random_wave(r: &mut ChaCha8Rng, want: Relations) -> AccelerationWave {
    loop {
        let p = random_params(r);
        let c = r.gen_range(0.5..2.0);
        let (u, mut phi) = (coefs(r), coefs(r));
        let omega = c * (p.areal_density() / p.bending_rigidity()).sqrt();
        let k = p.bending_rigidity() * p.membrane_stiffness();
        let c2 = nonzero(r);
        let c1 = match want {
            Relations::Energy | Relations::Both => match energy_root(k * omega.powi(4), u[3], c2, phi[2], r) {
                Some(c1) => c1,
                None => continue,
            },
            _ => nonzero(r),
        };
        if matches!(want, Relations::Scaling | Relations::Both) {
            phi[1] = k * omega * omega * c1 * (u[1] + omega * u[2]) / (2.0 * c2);
        }
        let ahead = InvariantSolution::new(u, phi, c, p).unwrap();
        return AccelerationWave::new(ahead, c1, c2).unwrap();
    }
}

/// Points of the front `ξ = 0` of a wave, spread in `x²` and time.
pub fn front_points(wave: &AccelerationWave, r: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let c = wave.ahead().speed();
    (0..n)
        .map(|_| {
            let t = r.gen_range(-2.0..2.0);
            Point::new(c * t, r.gen_range(-2.0..2.0), t)
        })
        .collect()
}

/// Plane wave along an arbitrary direction `n`, with an optional acceleration
/// wave glued along `n·x = ct` and a smooth shear term `k(τ·x)(n·x)` added to
/// `Φ` on both sides. Every branch is an exact solution.
#[derive(Debug, Clone)]
pub struct RotatedWave {
    pub params: PlateParams,
    pub n: [f64; 2],
    pub speed: f64,
    pub w: Profile,
    pub phi: Profile,
    pub shear: f64,
    pub jump: Option<(f64, f64)>,
    pub front: LineFront,
}

impl RotatedWave {
    pub fn new(params: PlateParams, angle: f64, speed: f64, u: [f64; 4], phi: [f64; 4], shear: f64, jump: Option<(f64, f64)>) -> Self {
        let n = [angle.cos(), angle.sin()];
        let omega = speed * (params.areal_density() / params.bending_rigidity()).sqrt();
        RotatedWave {
            params,
            n,
            speed,
            w: Profile {
                poly: [u[0], u[1], 0.0, 0.0],
                sin_coef: u[2],
                cos_coef: u[3],
                omega,
            },
            phi: Profile::polynomial(phi),
            shear,
            jump,
            front: LineFront::new(n[0], n[1], -speed, 0.0).unwrap(),
        }
    }

    pub fn random(r: &mut ChaCha8Rng, with_jump: bool) -> Self {
        let p = random_params(r);
        let jump = with_jump.then(|| (nonzero(r), r.gen_range(-2.0..2.0)));
        Self::new(p, r.gen_range(0.0..std::f64::consts::TAU), r.gen_range(0.5..2.0), coefs(r), coefs(r), r.gen_range(-2.0..2.0), jump)
    }

    fn profiles(&self, b: Branch) -> (Profile, Profile) {
        let (mut w, mut phi) = (self.w, self.phi);
        if let (Branch::Behind, Some((c1, c2))) = (b, self.jump) {
            w.poly[0] += c1;
            w.cos_coef -= c1;
            phi.poly[2] += c2;
        }
        (w, phi)
    }

    fn shear_term(&self, p: Point, e: [u8; 3]) -> f64 {
        let (n, tau) = (self.n, [-self.n[1], self.n[0]]);
        let s = |v: [f64; 2]| v[0] * p.x1() + v[1] * p.x2();
        let k = self.shear;
        match e {
            [0, 0, 0] => k * s(tau) * s(n),
            [1, 0, 0] => k * (tau[0] * s(n) + n[0] * s(tau)),
            [0, 1, 0] => k * (tau[1] * s(n) + n[1] * s(tau)),
            [2, 0, 0] => 2.0 * k * tau[0] * n[0],
            [0, 2, 0] => 2.0 * k * tau[1] * n[1],
            [1, 1, 0] => k * (tau[0] * n[1] + n[0] * tau[1]),
            _ => 0.0,
        }
    }
}

impl PiecewiseField for RotatedWave {
    fn params(&self) -> &PlateParams {
        &self.params
    }

    fn front(&self) -> Option<&dyn LevelSet> {
        self.jump.map(|_| &self.front as &dyn LevelSet)
    }

    fn branch_values(&self, b: Branch, p: Point) -> (f64, f64) {
        let (w, phi) = self.profiles(b);
        let xi = self.n[0] * p.x1() + self.n[1] * p.x2() - self.speed * p.t();
        (w.value(xi), phi.value(xi) + self.shear_term(p, [0, 0, 0]))
    }

    fn branch_jet(&self, b: Branch, p: Point) -> Result<FieldJet> {
        let (w, phi) = self.profiles(b);
        let mut jet = plane_wave_jet(p, self.n, self.speed, &w, &phi)?;
        for e in vkwave_core::fields::multi_indices() {
            let s = self.shear_term(p, e);
            if s != 0.0 {
                jet.set(Unknown::Phi, e, jet.get(Unknown::Phi, e) + s);
            }
        }
        Ok(jet)
    }
}

/// `Σ c·x₁^a x₂^b x₃^d`
#[derive(Debug, Clone, Default)]
pub struct Polynomial(pub Vec<(f64, [u8; 3])>);

impl Polynomial {
    pub fn derivative(&self, d: [u8; 3], p: Point) -> f64 {
        self.0
            .iter()
            .map(|(c, e)| {
                let mut v = *c;
                for k in 0..3 {
                    if d[k] > e[k] {
                        return 0.0;
                    }
                    let falling: f64 = ((e[k] - d[k] + 1)..=e[k]).map(f64::from).product();
                    v *= falling * p.0[k].powi(i32::from(e[k] - d[k]));
                }
                v
            })
            .sum()
    }

    /// `Re (x₁ + i x₂)ⁿ` times `x₁^lift`.
    pub fn real_power(n: u8, lift: u8, scale: f64) -> Self {
        let mut terms = Vec::new();
        let mut binom = 1.0;
        for k in 0..=n {
            if k % 2 == 0 {
                let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
                terms.push((scale * sign * binom, [n - k + lift, k, 0]));
            }
            binom = binom * f64::from(n - k) / f64::from(k + 1);
        }
        Polynomial(terms)
    }
}

/// Smooth exact solution with a rigid deflection `w = a₀ + a₁x¹ + a₂x² + a₃x³`
/// and a biharmonic stress function `Φ = k·x¹ Re z⁶ + m·Re z⁵`, so both
/// brackets of the field equations vanish.
#[derive(Debug, Clone)]
pub struct StressField {
    pub params: PlateParams,
    pub w: Polynomial,
    pub phi: Polynomial,
}

impl StressField {
    pub fn random(r: &mut ChaCha8Rng) -> Self {
        let a = coefs(r);
        let w = Polynomial(vec![(a[0], [0, 0, 0]), (a[1], [1, 0, 0]), (a[2], [0, 1, 0]), (a[3], [0, 0, 1])]);
        let mut phi = Polynomial::real_power(6, 1, r.gen_range(-0.2..0.2));
        phi.0.extend(Polynomial::real_power(5, 0, r.gen_range(-0.2..0.2)).0);
        StressField {
            params: random_params(r),
            w,
            phi,
        }
    }
}

impl PiecewiseField for StressField {
    fn params(&self) -> &PlateParams {
        &self.params
    }

    fn front(&self) -> Option<&dyn LevelSet> {
        None
    }

    fn branch_values(&self, _b: Branch, p: Point) -> (f64, f64) {
        (self.w.derivative([0; 3], p), self.phi.derivative([0; 3], p))
    }

    fn branch_jet(&self, _b: Branch, p: Point) -> Result<FieldJet> {
        FieldJet::from_fn(p, |u, e| match u {
            Unknown::W => self.w.derivative(e, p),
            Unknown::Phi => self.phi.derivative(e, p),
        })
    }
}
