//! Gauss–Legendre quadrature, fixed-order and adaptive by bisection.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Points per segment for curvature-energy line integrals.
pub const ENERGY_ORDER: usize = 16;

/// Nodes and weights on `[-1, 1]` for an `n`-point rule, from Newton
/// iteration on the Legendre polynomial roots.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
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
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// The rule used for energy integrals, mapped to `[0, 1]`.
pub fn energy_rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let (x, w) = gauss_legendre(ENERGY_ORDER);
        (x.iter().map(|x| 0.5 * (x + 1.0)).collect(), w.iter().map(|w| 0.5 * w).collect())
    })
}

/// Agreement required between a panel and its halves, relative to the
/// integral of the caller-supplied magnitude.
pub const ADAPTIVE_TOL: f64 = 1e-13;
const MAX_DEPTH: u32 = 12;

fn panel(f: &dyn Fn(f64) -> (f64, f64), a: f64, b: f64) -> (f64, f64) {
    let (x, w) = energy_rule();
    let len = b - a;
    let mut sum = 0.0;
    let mut abs = 0.0;
    for (x, w) in x.iter().zip(w) {
        let (v, mag) = f(a + x * len);
        sum += w * v;
        abs += w * mag.max(v.abs());
    }
    (sum * len, abs * len.abs())
}

fn refine(f: &dyn Fn(f64) -> (f64, f64), a: f64, b: f64, whole: f64, depth: u32) -> f64 {
    let mid = 0.5 * (a + b);
    let (left, left_abs) = panel(f, a, mid);
    let (right, right_abs) = panel(f, mid, b);
    let halves = left + right;
    if depth >= MAX_DEPTH || (halves - whole).abs() <= ADAPTIVE_TOL * (left_abs + right_abs) {
        return halves;
    }
    refine(f, a, mid, left, depth + 1) + refine(f, mid, b, right, depth + 1)
}

/// `∫_a^b f` with [`ENERGY_ORDER`]-point panels, bisected until each panel
/// agrees with the sum of its halves. `f` returns the integrand and a
/// magnitude bounding its rounding scale (at least `|value|`), so that
/// integrands computed by cancellation do not force endless refinement.
pub fn integrate_adaptive(f: &dyn Fn(f64) -> (f64, f64), a: f64, b: f64) -> f64 {
    let (whole, _) = panel(f, a, b);
    refine(f, a, b, whole, 0)
}
