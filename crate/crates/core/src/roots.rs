//! Bracketed scalar root finding and one-dimensional maximization.

use crate::error::{Error, Result};

/// Bisection on `[lo, hi]`; `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect<F, E>(mut f: F, lo: f64, hi: f64, xtol: f64) -> std::result::Result<f64, E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
    E: From<Error>,
{
    let (mut a, mut b) = (lo, hi);
    let mut fa = f(a)?;
    let fb = f(b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::search(format!(
            "no sign change on [{lo:e}, {hi:e}]: f = {fa:e}, {fb:e}"
        ))
        .into());
    }
    // Enough halvings to reach machine resolution from any finite bracket.
    for _ in 0..2200 {
        let m = 0.5 * (a + b);
        if (b - a).abs() <= xtol || m == a || m == b {
            return Ok(m);
        }
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Bisection on a boolean predicate: `pred(lo)` is true, `pred(hi)` false.
/// Returns the final bracket.
pub fn bisect_predicate<F, E>(
    mut pred: F,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> std::result::Result<(f64, f64), E>
where
    F: FnMut(f64) -> std::result::Result<bool, E>,
{
    let (mut a, mut b) = (lo, hi);
    while (b - a).abs() > xtol {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if pred(m)? {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((a, b))
}

/// Golden-section search for a local maximum of `f` inside `[lo, hi]`.
/// Returns `(x, f(x))`.
pub fn golden_max<F, E>(mut f: F, lo: f64, hi: f64, xtol: f64) -> std::result::Result<(f64, f64), E>
where
    F: FnMut(f64) -> std::result::Result<f64, E>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > xtol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
        if c == d {
            break;
        }
    }
    Ok(if fc > fd { (c, fc) } else { (d, fd) })
}

/// Indices `i` with a sign change between `values[i]` and `values[i + 1]`.
pub fn sign_changes(values: &[f64]) -> Vec<usize> {
    values
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[0].signum() != w[1].signum())
        .map(|(i, _)| i)
        .collect()
}

/// `n` points log-spaced between `lo` and `hi` inclusive.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

/// `n` points evenly spaced between `lo` and `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

pub(crate) fn ok<T>(v: T) -> Result<T> {
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisect_finds_sqrt2() {
        let r: Result<f64> = bisect(|x| ok(x * x - 2.0), 0.0, 2.0, 1e-14);
        assert!((r.unwrap() - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn bisect_requires_bracket() {
        let r: Result<f64> = bisect(|x| ok(x * x + 1.0), 0.0, 2.0, 1e-14);
        assert!(matches!(r, Err(Error::Search(_))));
    }

    #[test]
    fn golden_locates_parabola_peak() {
        let (x, fx) = golden_max::<_, Error>(|x| ok(-(x - 0.3) * (x - 0.3) + 2.0), 0.0, 1.0, 1e-10).unwrap();
        assert!((x - 0.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn predicate_bisection_brackets_threshold() {
        let (a, b) = bisect_predicate::<_, Error>(|x| Ok(x < 0.625), 0.0, 1.0, 1e-9).unwrap();
        assert!(a < 0.625 && b >= 0.625 && b - a <= 1e-9);
    }

    #[test]
    fn grids() {
        let g = logspace(1e-4, 1e-2, 3);
        assert!((g[1] - 1e-3).abs() < 1e-15);
        assert_eq!(linspace(0.0, 1.0, 5)[2], 0.5);
        assert_eq!(sign_changes(&[-1.0, -0.5, 0.5, 1.0, -2.0]), vec![1, 3]);
    }
}
