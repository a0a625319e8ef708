//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Closed-form radial mode `sin(nπr)/(√(2π) r)`, written out independently of
/// the library.
pub fn mode(n: usize, r: f64) -> f64 {
    let k = n as f64 * PI;
    if r == 0.0 {
        k / (2.0 * PI).sqrt()
    } else {
        (k * r).sin() / ((2.0 * PI).sqrt() * r)
    }
}

/// Real field `Σ a_n e_n(r)`.
pub fn field(coeffs: &[f64], r: f64) -> f64 {
    coeffs.iter().enumerate().map(|(i, a)| a * mode(i + 1, r)).sum()
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

fn adapt(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (k, err) = kronrod(f, a, b);
    if err <= tol || depth == 0 {
        return k;
    }
    let m = 0.5 * (a + b);
    adapt(f, a, m, 0.5 * tol, depth - 1) + adapt(f, m, b, 0.5 * tol, depth - 1)
}

/// Adaptive 7/15-point Gauss–Kronrod quadrature of `f` on `[a, b]`.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    adapt(&f, a, b, tol, 40)
}

/// `4π ∫₀¹ g(r) r² dr`, the integral of a radial function over the unit ball.
pub fn ball_integral(g: impl Fn(f64) -> f64, tol: f64) -> f64 {
    4.0 * PI * integrate(|r| g(r) * r * r, 0.0, 1.0, tol)
}

/// Gauss–Hermite nodes and weights for `∫ f(x) e^{-x²} dx`.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    let pim4 = PI.powf(-0.25);
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut z: f64 = 0.0;
    for i in 0..n.div_ceil(2) {
        z = match i {
            0 => (2.0 * n as f64 + 1.0).sqrt() - 1.855_75 * (2.0 * n as f64 + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * (n as f64).powf(0.426) / z,
            2 => 1.86 * z - 0.86 * x[0],
            3 => 1.91 * z - 0.91 * x[1],
            _ => 2.0 * z - x[i - 2],
        };
        let mut pp = 0.0;
        for _ in 0..200 {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = z * (2.0 / (j as f64 + 1.0)).sqrt() * p2 - (j as f64 / (j as f64 + 1.0)).sqrt() * p3;
            }
            pp = (2.0 * n as f64).sqrt() * p2;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-14 {
                break;
            }
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = 2.0 / (pp * pp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// `E[f(a)]` for `a ~ Normal(0, 1/2)`.
pub fn gaussian_half_expectation(f: impl Fn(f64) -> f64, nodes: usize) -> f64 {
    let (x, w) = gauss_hermite(nodes);
    x.iter().zip(&w).map(|(x, w)| w * f(*x)).sum::<f64>() / PI.sqrt()
}

#[test]
fn oracles_self_check() {
    let v = integrate(|x| x.sin(), 0.0, PI, 1e-14);
    assert!((v - 2.0).abs() < 1e-13);
    let m2 = gaussian_half_expectation(|a| a * a, 40);
    assert!((m2 - 0.5).abs() < 1e-13);
    let m4 = gaussian_half_expectation(|a| a.powi(4), 40);
    assert!((m4 - 0.75).abs() < 1e-13);
    let norm = ball_integral(|r| mode(3, r).powi(2), 1e-13);
    assert!((norm - 1.0).abs() < 1e-12);
}
