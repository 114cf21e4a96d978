//! Small numerical kernels: bracketed root finding and Gauss–Legendre nodes.

/// Root of `f` in `[a, b]` given a sign change. Alternates a regula falsi
/// step with a bisection step, so the bracket at least halves every two
/// iterations, and runs until the bracket cannot shrink further.
pub fn bracket_root<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64) -> Option<f64> {
    let (mut a, mut b) = (a, b);
    let (mut fa, mut fb) = (f(a), f(b));
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return None;
    }
    for it in 0..400 {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        let x = if it % 2 == 0 {
            let s = b - fb * (b - a) / (fb - fa);
            if s > a.min(b) && s < a.max(b) {
                s
            } else {
                mid
            }
        } else {
            mid
        };
        let fx = f(x);
        if fx == 0.0 {
            return Some(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
    }
    Some(if fa.abs() < fb.abs() { a } else { b })
}

/// Nodes and weights of the 8-point Gauss–Legendre rule on `[-1, 1]`.
pub const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

/// Composite 8-node Gauss–Legendre over `[a, b]` with `panels` equal panels.
pub fn gauss_legendre<T, F>(mut f: F, a: f64, b: f64, panels: usize, zero: T) -> T
where
    F: FnMut(f64) -> T,
    T: std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut acc = zero;
    for k in 0..panels {
        let lo = a + h * k as f64;
        let c = lo + 0.5 * h;
        for &(x, w) in GL8.iter() {
            acc = acc + f(c + 0.5 * h * x) * (0.5 * h * w);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roots() {
        let r = bracket_root(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        let r = bracket_root(|x| x.cos() - x, 1.0, 0.0).unwrap();
        assert!((r.cos() - r).abs() < 1e-15);
        assert!(bracket_root(|x| x * x + 1.0, -1.0, 1.0).is_none());
    }

    #[test]
    fn quadrature_is_exact_to_degree_15() {
        let i = gauss_legendre(|x: f64| x.powi(15) + x.powi(14), 0.0, 1.0, 1, 0.0);
        assert!((i - (1.0 / 16.0 + 1.0 / 15.0)).abs() < 1e-15);
        let w: f64 = GL8.iter().map(|p| p.1).sum();
        assert!((w - 2.0).abs() < 1e-15);
        let i = gauss_legendre(f64::sin, 0.0, std::f64::consts::PI, 3, 0.0);
        assert!((i - 2.0).abs() < 1e-14);
    }
}
