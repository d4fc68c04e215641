//! Bracketing root finders and a golden-section minimiser.

/// Outcome of a bracketed bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracketed {
    pub root: f64,
    /// Final bracket, `lo <= root <= hi`.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// How the next trial point is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Midpoint {
    Arithmetic,
    /// Geometric mean while the bracket spans more than a factor of four.
    /// Both ends must be positive.
    Geometric,
}

/// Bisection on `[lo, hi]` given `f(lo)` and `f(hi)` of opposite sign
/// (either may be exactly zero). Stops once `hi − lo <= xtol`, the bracket
/// can no longer be split in floating point, or `max_iter` is hit.
pub fn bisect<E, F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    f_hi: f64,
    xtol: f64,
    midpoint: Midpoint,
    max_iter: usize,
) -> Result<Bracketed, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    debug_assert!(lo <= hi);
    if f_lo == 0.0 {
        return Ok(Bracketed {
            root: lo,
            bracket: (lo, lo),
            iterations: 0,
        });
    }
    if f_hi == 0.0 {
        return Ok(Bracketed {
            root: hi,
            bracket: (hi, hi),
            iterations: 0,
        });
    }
    let mut iterations = 0;
    while iterations < max_iter && hi - lo > xtol {
        let mid = match midpoint {
            Midpoint::Geometric if lo > 0.0 && hi > 4.0 * lo => (lo * hi).sqrt(),
            _ => lo + 0.5 * (hi - lo),
        };
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(Bracketed {
                root: mid,
                bracket: (mid, mid),
                iterations,
            });
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(Bracketed {
        root: lo + 0.5 * (hi - lo),
        bracket: (lo, hi),
        iterations,
    })
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
/// Returns `(x_min, f(x_min), iterations)`.
pub fn golden_min<E, F>(
    mut f: F,
    mut a: f64,
    mut b: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<(f64, f64, usize), E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    let mut iterations = 0;
    while iterations < max_iter && (b - a).abs() > xtol {
        iterations += 1;
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd {
        (c, fc, iterations)
    } else {
        (d, fd, iterations)
    })
}
