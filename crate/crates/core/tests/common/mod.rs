//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

/// Neumann eigenvalues of `-(f u')' = mu f u` on `[a, b]` by shooting:
/// integrate `u' = w / f`, `w' = -mu f u` with RK4 from `u(a) = 1, w(a) = 0`
/// and locate sign changes of `w(b; mu)` on a scan, refined by bisection.
pub fn shooting_neumann(f: impl Fn(f64) -> f64, a: f64, b: f64, count: usize, mu_max: f64) -> Vec<f64> {
    let end_flux = |mu: f64| {
        let steps = 4000;
        let h = (b - a) / steps as f64;
        let rhs = |x: f64, u: f64, w: f64| (w / f(x), -mu * f(x) * u);
        let (mut u, mut w) = (1.0, 0.0);
        for i in 0..steps {
            let x = a + i as f64 * h;
            let (k1u, k1w) = rhs(x, u, w);
            let (k2u, k2w) = rhs(x + h / 2.0, u + h / 2.0 * k1u, w + h / 2.0 * k1w);
            let (k3u, k3w) = rhs(x + h / 2.0, u + h / 2.0 * k2u, w + h / 2.0 * k2w);
            let (k4u, k4w) = rhs(x + h, u + h * k3u, w + h * k3w);
            u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
            w += h / 6.0 * (k1w + 2.0 * k2w + 2.0 * k3w + k4w);
        }
        w
    };
    let mut roots = vec![0.0];
    let scan = 2000;
    let mut lo = 1e-9 * mu_max;
    let mut f_lo = end_flux(lo);
    for i in 1..=scan {
        if roots.len() == count {
            break;
        }
        let hi = mu_max * i as f64 / scan as f64;
        let f_hi = end_flux(hi);
        if f_lo.signum() != f_hi.signum() {
            let (mut l, mut r, mut fl) = (lo, hi, f_lo);
            for _ in 0..80 {
                let m = 0.5 * (l + r);
                let fm = end_flux(m);
                if fm.signum() == fl.signum() {
                    l = m;
                    fl = fm;
                } else {
                    r = m;
                }
            }
            roots.push(0.5 * (l + r));
        }
        lo = hi;
        f_lo = f_hi;
    }
    roots
}

/// Roots of the characteristic equation of `u'' - u' + mu u = 0` with
/// Neumann ends on `[0, 1]`: `u = e^{x/2}(A cos wx + B sin wx)`,
/// `u'(0) = 0` gives `A = -2 w B`, and `u'(1) = 0` reduces to
/// `(w^2 + 1/4) sin w = 0`, so `mu = w^2 + 1/4` with `w = k pi`.
pub fn linear_phi_characteristic(k: usize) -> f64 {
    let w = k as f64 * std::f64::consts::PI;
    w * w + 0.25
}
