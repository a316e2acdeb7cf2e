//! The two independent routes to `erfc(-iz)` and hence `w(z)`.

use astro_float::BigFloat;
use faddeeva::Complex64;

use crate::big::{BigComplex, Ctx};
use crate::OracleError;

const LOG2_E: f64 = std::f64::consts::LOG2_E;
const LOG2_10: f64 = std::f64::consts::LOG2_10;
const MAX_SERIES_TERMS: u64 = 1_000_000;
const MAX_CF_DEPTH: u64 = 1 << 15;

pub(crate) fn target_bits(digits: u32) -> usize {
    (digits as f64 * LOG2_10).ceil() as usize + 16
}

fn mag_exponent(v: &BigComplex) -> Option<i64> {
    let e = |b: &BigFloat| if b.is_zero() { None } else { b.exponent().map(|e| e as i64) };
    match (e(&v.re), e(&v.im)) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

/// `w(z) = exp(-z^2) erfc(zeta)`, `zeta = -iz`, with the Maclaurin series
///
/// ```text
/// erfc(zeta) = 1 - (2 zeta / sqrt(pi)) sum_k (z^2)^k / (k! (2k+1))
/// ```
///
/// The terms peak near `exp(|z|^2)`; the working precision carries enough
/// guard bits for the cancellation in the upper half-plane.
pub(crate) fn w_series(z: Complex64, digits: u32, extra_bits: usize) -> Result<BigComplex, OracleError> {
    let r = z.norm();
    let guard = 2.0 * z.im * z.im * LOG2_E + 2.0 * (2.0 + r).log2() + 32.0;
    let bits = target_bits(digits) + extra_bits + guard.ceil() as usize;
    let mut ctx = Ctx::new(bits);

    let zb = ctx.from_c64(z);
    let z2 = ctx.cmul(&zb, &zb);
    let mut term = ctx.c(1.0, 0.0);
    let mut sum = term.clone();
    let min_k = (2.0 * r * r) as u64 + 4;
    let mut k = 0u64;
    loop {
        k += 1;
        if k > MAX_SERIES_TERMS {
            return Err(OracleError::NonConvergence {
                re: z.re,
                im: z.im,
                detail: "power series did not terminate".into(),
            });
        }
        term = ctx.cdiv_real(&ctx.cmul(&term, &z2), &ctx.int(k));
        let contrib = ctx.cdiv_real(&term, &ctx.int(2 * k + 1));
        sum = ctx.cadd(&sum, &contrib);
        if k < min_k {
            continue;
        }
        match (mag_exponent(&contrib), mag_exponent(&sum)) {
            (None, _) => break,
            (Some(c), Some(s)) if c < s - bits as i64 => break,
            _ => {}
        }
    }

    let zeta = ctx.c(z.im, -z.re);
    let sqrt_pi = ctx.sqrt_pi();
    let two_over_sqrt_pi = ctx.div(&ctx.int(2), &sqrt_pi);
    let erf_part = ctx.cscale(&ctx.cmul(&zeta, &sum), &two_over_sqrt_pi);
    let erfc = ctx.csub(&ctx.c(1.0, 0.0), &erf_part);
    let e = ctx.cexp(&z2.neg());
    Ok(ctx.cmul(&e, &erfc))
}

/// Laplace continued fraction for `Re zeta >= 0`:
///
/// ```text
/// erfc(zeta) = exp(-zeta^2)/sqrt(pi) * 1/(zeta + (1/2)/(zeta + (2/2)/(zeta + ...)))
/// ```
///
/// Since `zeta^2 = -z^2` the exponential factors cancel and w is the bare
/// fraction over `sqrt(pi)`. Evaluated backward, doubling the depth until
/// two consecutive depths agree.
pub(crate) fn w_continued_fraction(z: Complex64, digits: u32, extra_bits: usize) -> Result<BigComplex, OracleError> {
    if !(z.im >= 0.0) || z == Complex64::new(0.0, 0.0) {
        return Err(OracleError::NonConvergence {
            re: z.re,
            im: z.im,
            detail: "continued fraction needs Im z >= 0, z != 0".into(),
        });
    }
    let bits = target_bits(digits) + extra_bits + 32;
    let mut ctx = Ctx::new(bits);
    let zeta = ctx.c(z.im, -z.re);
    let inv_sqrt_pi = {
        let s = ctx.sqrt_pi();
        ctx.div(&ctx.int(1), &s)
    };
    let tol = 10f64.powi(-(digits as i32) - 2);

    let eval = |ctx: &Ctx, depth: u64| -> BigComplex {
        let mut tail = ctx.c(0.0, 0.0);
        for k in (1..=depth).rev() {
            let half_k = ctx.div(&ctx.int(k), &ctx.int(2));
            tail = ctx.creal_div(&half_k, &ctx.cadd(&zeta, &tail));
        }
        ctx.creal_div(&inv_sqrt_pi, &ctx.cadd(&zeta, &tail))
    };

    let mut depth = 32;
    let mut prev = eval(&ctx, depth);
    while depth < MAX_CF_DEPTH {
        depth *= 2;
        let cur = eval(&ctx, depth);
        if ctx.rel_diff(&cur, &prev) < tol {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(OracleError::NonConvergence {
        re: z.re,
        im: z.im,
        detail: format!("continued fraction unconverged at depth {depth}"),
    })
}

/// `2 exp(-z^2) - w(-z)` for the lower half-plane.
pub(crate) fn reflect(z: Complex64, w_neg: &BigComplex, bits: usize) -> BigComplex {
    let mut ctx = Ctx::new(bits);
    let zb = ctx.from_c64(z);
    let e = ctx.cexp(&ctx.cmul(&zb, &zb).neg());
    let two_e = ctx.cscale(&e, &ctx.int(2));
    ctx.csub(&two_e, w_neg)
}
