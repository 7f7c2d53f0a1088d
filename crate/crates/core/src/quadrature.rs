//! Adaptive Gauss-Kronrod (7/15) quadrature.
//!
//! Used to turn closed-form densities into CDFs and by the test suites to
//! check normalisation and moments independently of the closed forms.

/// Default absolute tolerance.
pub const ABS_TOL: f64 = 1e-10;

/// Tails are truncated once `exp(-decay * (x - a))` drops below this.
pub const TAIL_ENVELOPE: f64 = 1e-16;

const MAX_DEPTH: u32 = 48;
const MAX_TAIL_SEGMENTS: usize = 256;

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
    0.209_482_141_084_727_8,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kron += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kron * half, ((kron - gauss) * half).abs())
}

fn adapt<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = kronrod(f, a, b);
    if err <= tol || depth == 0 || (b - a).abs() <= f64::EPSILON * a.abs().max(b.abs()) {
        return value;
    }
    let mid = 0.5 * (a + b);
    adapt(f, a, mid, 0.5 * tol, depth - 1) + adapt(f, mid, b, 0.5 * tol, depth - 1)
}

/// Integral of `f` over `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    adapt(&f, a, b, tol, MAX_DEPTH)
}

/// Integral over `[points[0], points[last]]`, split at every interior point.
/// Put kinks and discontinuities of `f` in `points`.
pub fn integrate_pieces<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: f64) -> f64 {
    let mut sorted: Vec<f64> = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let pieces = sorted.len().saturating_sub(1).max(1) as f64;
    sorted
        .windows(2)
        .map(|w| adapt(&f, w[0], w[1], tol / pieces, MAX_DEPTH))
        .sum()
}

/// Integral of `f` over `[a, inf)` for an integrand whose tail decays at
/// least like `exp(-decay * x)` times a polynomial.
///
/// The tail is integrated in segments of one envelope length
/// (`-ln(TAIL_ENVELOPE) / decay`) until the envelope is below
/// [`TAIL_ENVELOPE`] and the last segment contributed less than `tol`.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: F, a: f64, decay: f64, tol: f64) -> f64 {
    assert!(decay > 0.0, "tail decay rate must be positive");
    let step = -TAIL_ENVELOPE.ln() / decay;
    // Shorter first segments resolve the bulk of the mass.
    let mut total = 0.0;
    let mut lo = a;
    let mut width = step / 8.0;
    for _ in 0..MAX_TAIL_SEGMENTS {
        let hi = lo + width;
        let piece = adapt(&f, lo, hi, tol / 8.0, MAX_DEPTH);
        total += piece;
        lo = hi;
        width = (width * 2.0).min(step);
        let envelope = (-decay * (lo - a)).exp();
        if envelope < TAIL_ENVELOPE && piece.abs() < tol {
            break;
        }
    }
    total
}

/// [`integrate_tail`] with breakpoints: `points` (all `>= a`) are honoured
/// as split points before the tail begins at the largest of them.
pub fn integrate_tail_pieces<F: Fn(f64) -> f64>(f: F, points: &[f64], decay: f64, tol: f64) -> f64 {
    let mut sorted: Vec<f64> = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();
    let last = *sorted.last().expect("at least one point");
    let head = if sorted.len() > 1 {
        integrate_pieces(&f, &sorted, tol / 2.0)
    } else {
        0.0
    };
    head + integrate_tail(&f, last, decay, tol / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomials_are_exact() {
        let v = integrate(|x| 3.0 * x * x + 1.0, 0.0, 2.0, ABS_TOL);
        assert_abs_diff_eq!(v, 10.0, epsilon = 1e-13);
    }

    #[test]
    fn smooth_functions() {
        let v = integrate(f64::sin, 0.0, std::f64::consts::PI, ABS_TOL);
        assert_abs_diff_eq!(v, 2.0, epsilon = 1e-12);
        let v = integrate(|x| 1.0 / x, 1.0, 100.0, ABS_TOL);
        assert_abs_diff_eq!(v, 100f64.ln(), epsilon = 1e-10);
    }

    #[test]
    fn exponential_tails() {
        for rate in [0.05, 1.0, 7.0] {
            let v = integrate_tail(|x| rate * (-rate * x).exp(), 0.0, rate, ABS_TOL);
            assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
            let m2 = integrate_tail(|x| x * x * rate * (-rate * x).exp(), 0.0, rate, ABS_TOL);
            assert_abs_diff_eq!(m2, 2.0 / (rate * rate), epsilon = 1e-8 / (rate * rate));
        }
    }

    #[test]
    fn kinks_split() {
        let v = integrate_pieces(|x: f64| x.abs(), &[-1.0, 0.0, 2.0], ABS_TOL);
        assert_abs_diff_eq!(v, 2.5, epsilon = 1e-13);
        let step = |x: f64| if x < 1.0 { 0.0 } else { (-(x - 1.0)).exp() };
        let v = integrate_tail_pieces(step, &[0.0, 1.0], 1.0, ABS_TOL);
        assert_abs_diff_eq!(v, 1.0, epsilon = 1e-10);
    }
}
