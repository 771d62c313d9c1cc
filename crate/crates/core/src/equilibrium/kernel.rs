//! Exact cell integrals of the logarithmic kernel.

/// Antiderivative of `log|u|` twice: `G'' = log|u|`, `G(0) = 0`.
fn g2(u: f64) -> f64 {
    if u == 0.0 {
        0.0
    } else {
        u * u * (u.abs().ln() / 2.0 - 0.75)
    }
}

/// `int_a^b int_c^d -log|x - y| dy dx`.
pub(crate) fn cell_pair(a: f64, b: f64, c: f64, d: f64) -> f64 {
    -(g2(b - c) - g2(a - c) - g2(b - d) + g2(a - d))
}

/// `int_a^b log|x - z| dx` for complex `z = (u, v)`.
pub(crate) fn log_segment(a: f64, b: f64, z: (f64, f64)) -> f64 {
    let (u, v) = z;
    let prim = |x: f64| {
        let s = x - u;
        let r = s.hypot(v);
        let lg = if r == 0.0 { 0.0 } else { s * r.ln() };
        let at = if v == 0.0 { 0.0 } else { v * (s / v).atan() };
        lg - s + at
    };
    prim(b) - prim(a)
}

const GL5: [(f64, f64); 5] = [
    (0.0, 0.568_888_888_888_888_9),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
    (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
    (0.906_179_845_938_664, 0.236_926_885_056_189_1),
];

/// Average of `f` over `[a, b]` by five-point Gauss–Legendre.
pub(crate) fn cell_average<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (m, h) = ((a + b) / 2.0, (b - a) / 2.0);
    GL5.iter().map(|&(t, w)| w * f(m + h * t)).sum::<f64>() / 2.0
}
