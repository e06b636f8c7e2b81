//! Gauss–Legendre rules on intervals, rectangles and triangles, and clipping
//! of convex polygons by a half-plane.

use std::f64::consts::PI;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..(n + 1) / 2 {
        // Tricomi initial guess, then Newton on P_n
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A rule with nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Rule { nodes, weights }
    }

    /// `∫_a^b f`
    pub fn interval(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x);
        }
        s * half
    }

    /// `∫∫ f` over `[x0, x1] × [y0, y1]`.
    pub fn rectangle(&self, x: [f64; 2], y: [f64; 2], mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        let (hx, mx) = (0.5 * (x[1] - x[0]), 0.5 * (x[0] + x[1]));
        let (hy, my) = (0.5 * (y[1] - y[0]), 0.5 * (y[0] + y[1]));
        let mut s = 0.0;
        for (u, wu) in self.nodes.iter().zip(&self.weights) {
            for (v, wv) in self.nodes.iter().zip(&self.weights) {
                s += wu * wv * f(mx + hx * u, my + hy * v);
            }
        }
        s * hx * hy
    }

    /// `∫∫ f` over a triangle, via the collapsed (Duffy) map of the unit square.
    pub fn triangle(&self, v: [[f64; 2]; 3], mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        let e1 = [v[1][0] - v[0][0], v[1][1] - v[0][1]];
        let e2 = [v[2][0] - v[0][0], v[2][1] - v[0][1]];
        let jac = (e1[0] * e2[1] - e1[1] * e2[0]).abs();
        let mut s = 0.0;
        for (a, wa) in self.nodes.iter().zip(&self.weights) {
            let u = 0.5 * (a + 1.0);
            for (b, wb) in self.nodes.iter().zip(&self.weights) {
                let r = 0.5 * (b + 1.0);
                // (u, r) ∈ [0,1]² ↦ (u, (1−u)r) in the reference triangle
                let (p, q) = (u, (1.0 - u) * r);
                let x = v[0][0] + p * e1[0] + q * e2[0];
                let y = v[0][1] + p * e1[1] + q * e2[1];
                s += wa * wb * 0.25 * (1.0 - u) * f(x, y);
            }
        }
        s * jac
    }

    /// `∫∫ f` over a convex polygon by fan triangulation.
    pub fn convex_polygon(&self, poly: &[[f64; 2]], mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        if poly.len() < 3 {
            return 0.0;
        }
        (1..poly.len() - 1)
            .map(|i| self.triangle([poly[0], poly[i], poly[i + 1]], &mut f))
            .sum()
    }
}

/// Part of the convex polygon `poly` where `a·x + b·y + c >= 0`
/// (single-plane Sutherland–Hodgman).
pub fn clip_half_plane(poly: &[[f64; 2]], a: f64, b: f64, c: f64) -> Vec<[f64; 2]> {
    let side = |p: &[f64; 2]| a * p[0] + b * p[1] + c;
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let cur = poly[i];
        let next = poly[(i + 1) % poly.len()];
        let (sc, sn) = (side(&cur), side(&next));
        if sc >= 0.0 {
            out.push(cur);
        }
        if (sc >= 0.0) != (sn >= 0.0) {
            let t = sc / (sc - sn);
            out.push([cur[0] + t * (next[0] - cur[0]), cur[1] + t * (next[1] - cur[1])]);
        }
    }
    out
}

/// Shoelace area, positive for counter-clockwise vertex order.
pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| {
            let (p, q) = (poly[i], poly[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
        * 0.5
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_rules_are_exact_for_polynomials() {
        for n in 1..=12 {
            let rule = Rule::new(n);
            assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for k in 0..2 * n {
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                let got = rule.interval(-1.0, 1.0, |x| x.powi(k as i32));
                assert!((got - exact).abs() < 1e-13, "n={n} k={k}: {got} vs {exact}");
            }
        }
    }

    #[test]
    fn known_two_point_rule() {
        let (x, w) = gauss_legendre(2);
        let r = 1.0 / 3.0_f64.sqrt();
        assert!((x[0] + r).abs() < 1e-15 && (x[1] - r).abs() < 1e-15);
        assert!((w[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn triangle_moments() {
        let rule = Rule::new(6);
        let tri = [[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]];
        assert!((rule.triangle(tri, |_, _| 1.0) - 1.0).abs() < 1e-14);
        // ∫ x dA = area · centroid_x
        assert!((rule.triangle(tri, |x, _| x) - 2.0 / 3.0).abs() < 1e-14);
        // ∫ x y over the triangle = 2²·1²/24 = 1/6
        assert!((rule.triangle(tri, |x, y| x * y) - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn clipping_a_square() {
        let sq = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        // x − 0.25 ≥ 0
        let right = clip_half_plane(&sq, 1.0, 0.0, -0.25);
        assert!((polygon_area(&right) - 0.75).abs() < 1e-15);
        let left = clip_half_plane(&sq, -1.0, 0.0, 0.25);
        assert!((polygon_area(&left) - 0.25).abs() < 1e-15);
        // diagonal cut: y ≥ x
        let upper = clip_half_plane(&sq, -1.0, 1.0, 0.0);
        assert!((polygon_area(&upper) - 0.5).abs() < 1e-15);
        let rule = Rule::new(4);
        assert!((rule.convex_polygon(&upper, |x, _| x) - 1.0 / 6.0).abs() < 1e-14);
        assert!(clip_half_plane(&sq, 1.0, 0.0, -2.0).is_empty());
    }
}
