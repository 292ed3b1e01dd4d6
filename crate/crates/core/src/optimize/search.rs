//! Golden-section minimization of a one-dimensional function on an interval.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Best point seen while narrowing `[lo, hi]` down to width `tol`.
///
/// The function may be non-unimodal (it is an LP optimum as a function of a
/// constraint's right-hand side); the returned point is the smallest value
/// over every evaluation, never just the final bracket midpoint.
pub fn golden_section<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64, max_iters: usize) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let mut best = (f64::NAN, f64::INFINITY);
    let note = |x: f64, y: f64, best: &mut (f64, f64)| {
        if y < best.1 || best.0.is_nan() {
            *best = (x, y);
        }
    };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    note(x1, f1, &mut best);
    note(x2, f2, &mut best);
    for _ in 0..max_iters {
        if hi - lo <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
            note(x1, f1, &mut best);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
            note(x2, f2, &mut best);
        }
    }
    best
}
