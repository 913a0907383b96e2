//! Bounded scalar maximization: a uniform grid scan to find the basin,
//! then golden-section refinement inside the neighbouring grid cells.

/// `(sqrt(5) - 1) / 2`
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Result of a bounded maximization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

/// Golden-section search for a maximum of `f` on `[lo, hi]`, stopping once the
/// bracket is narrower than `rel_tol * |x|` (or `rel_tol` near zero).
pub fn golden_section_max<F>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs().max(f64::MIN_POSITIVE) {
            break;
        }
        // ties move left so the smaller argument survives
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        Maximum { x: x1, value: f1 }
    } else {
        Maximum { x: x2, value: f2 }
    }
}

/// Scans `points` evenly spaced abscissae `hi * k / points` (`k = 1..=points`)
/// and returns the first grid maximum, i.e. the smallest `x` among equal
/// values. Returns `None` for an empty grid.
pub fn grid_max<F>(f: &F, hi: f64, points: usize) -> Option<(usize, Maximum)>
where
    F: Fn(f64) -> f64,
{
    let step = hi / points as f64;
    let mut best: Option<(usize, Maximum)> = None;
    for k in 1..=points {
        let x = step * k as f64;
        let value = f(x);
        match best {
            Some((_, m)) if !(value > m.value) => {}
            _ => best = Some((k, Maximum { x, value })),
        }
    }
    best
}

/// Grid scan over `(0, hi]` followed by golden-section refinement between the
/// neighbours of the best grid point. The refined point is kept only when it
/// does not fall below the grid value.
pub fn maximize_on_interval<F>(f: F, hi: f64, points: usize, rel_tol: f64) -> Option<Maximum>
where
    F: Fn(f64) -> f64,
{
    let (k, coarse) = grid_max(&f, hi, points)?;
    Some(refine_grid_max(&f, hi, points, k, coarse, rel_tol))
}

/// Abscissae `hi * k / points` for `k = 1..=points`.
pub fn grid(hi: f64, points: usize) -> Vec<f64> {
    let step = hi / points as f64;
    (1..=points).map(|k| step * k as f64).collect()
}

/// First maximum of precomputed values on [`grid`], as `(k, Maximum)` with
/// 1-based `k`.
pub fn first_max(xs: &[f64], values: &[f64]) -> Option<(usize, Maximum)> {
    let mut best: Option<(usize, Maximum)> = None;
    for (i, (&x, &value)) in xs.iter().zip(values).enumerate() {
        match best {
            Some((_, m)) if !(value > m.value) => {}
            _ => best = Some((i + 1, Maximum { x, value })),
        }
    }
    best
}

/// Golden-section refinement of grid maximum `coarse` (grid index `k`)
/// between its neighbours.
pub fn refine_grid_max<F>(f: &F, hi: f64, points: usize, k: usize, coarse: Maximum, rel_tol: f64) -> Maximum
where
    F: Fn(f64) -> f64,
{
    let step = hi / points as f64;
    let lo = step * (k as f64 - 1.0);
    let up = (step * (k as f64 + 1.0)).min(hi);
    let fine = golden_section_max(f, lo.max(0.0), up, rel_tol);
    if fine.value >= coarse.value {
        fine
    } else {
        coarse
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_on_parabola() {
        let m = golden_section_max(|x| -(x - 1.3) * (x - 1.3) + 2.0, 0.0, 4.0, 1e-10);
        // a quadratic peak resolves x only to about sqrt(machine epsilon)
        assert!((m.x - 1.3).abs() < 1e-7);
        assert!((m.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn grid_picks_first_of_equal_maxima() {
        // peaks of |sin| at pi/2 and 3 pi/2 have equal height
        let f = |x: f64| (x.sin()).abs().min(0.9);
        let (_, m) = grid_max(&f, 6.0, 600).unwrap();
        assert!(m.x < std::f64::consts::PI);
        assert!(grid_max(&f, 1.0, 0).is_none());
    }

    #[test]
    fn refinement_improves_on_grid() {
        let f = |x: f64| (-(x - 0.123_456).powi(2)).exp();
        let m = maximize_on_interval(f, 1.0, 20, 1e-9).unwrap();
        assert!((m.x - 0.123_456).abs() < 1e-6);
    }

    #[test]
    fn refinement_stays_in_winning_basin() {
        let f = |x: f64| (-(x - 0.2).powi(2) * 400.0).exp() + 0.9999 * (-(x - 0.7).powi(2) * 400.0).exp();
        let m = maximize_on_interval(f, 1.0, 2000, 1e-9).unwrap();
        assert!((m.x - 0.2).abs() < 1e-4, "{}", m.x);
    }
}
