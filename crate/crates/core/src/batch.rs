//! Array evaluation with the three work arrays
//!
//! ```text
//! A := tau_m z      (written over the consumed input)
//! B := exp(i A)     (the only transcendental pass)
//! C := A * A        (overwritten by the result)
//! ```
//!
//! `B` and `C` are processed block by block along `A`, which receives the
//! results. Each pass is public so that instrumentation can time them
//! separately; [`eval_batch_owned`] is exactly their composition. Every element is
//! combined by the same routine as [`eval_w`](crate::eval_w), so batch and
//! scalar results agree bit for bit.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::Result;
use crate::kernel::{check_finite, cis_exp4, combine4, reflect};
use crate::params::ApproxParams;
use crate::scalar::Real;

/// Lower half-plane inputs, kept for the final reflection step.
pub type Reflected<T> = Vec<(usize, Complex<T>)>;

/// Length of the `B` and `C` scratch blocks.
pub const BLOCK: usize = 1024;

/// Elements per task in [`eval_batch_par`].
pub const PAR_CHUNK: usize = 1 << 14;

/// Replaces each `z` by `A = tau_m z` (or `tau_m (-z)` below the real
/// axis) and returns the original lower half-plane points.
pub fn scale_pass<T: Real>(zs: &mut [Complex<T>], p: &ApproxParams<T>) -> Result<Reflected<T>> {
    let tau = p.tau_m();
    let mut reflected = Vec::new();
    for (i, z) in zs.iter_mut().enumerate() {
        check_finite(*z).map_err(|e| e.at(i))?;
        if z.im < T::zero() {
            reflected.push((i, *z));
            *z = (-*z).scale(tau);
        } else {
            *z = z.scale(tau);
        }
    }
    Ok(reflected)
}

/// `B = exp(i A)`.
pub fn exp_pass<T: Real>(a: &[Complex<T>], b: &mut [Complex<T>]) {
    assert_eq!(a.len(), b.len());
    let mut bc = b.chunks_exact_mut(4);
    let mut ac = a.chunks_exact(4);
    for (bq, aq) in (&mut bc).zip(&mut ac) {
        bq.copy_from_slice(&cis_exp4([aq[0], aq[1], aq[2], aq[3]]));
    }
    let (br, ar) = (bc.into_remainder(), ac.remainder());
    if !ar.is_empty() {
        let mut lanes = [Complex::new(T::zero(), T::zero()); 4];
        lanes[..ar.len()].copy_from_slice(ar);
        br.copy_from_slice(&cis_exp4(lanes)[..ar.len()]);
    }
}

/// `C = A * A`.
pub fn square_pass<T: Real>(a: &[Complex<T>], c: &mut [Complex<T>]) {
    assert_eq!(a.len(), c.len());
    for (ci, &ai) in c.iter_mut().zip(a) {
        *ci = ai * ai;
    }
}

/// Overwrites `C` with the upper half-plane values w(z).
pub fn combine_pass<T: Real>(
    a: &[Complex<T>],
    b: &[Complex<T>],
    c: &mut [Complex<T>],
    p: &ApproxParams<T>,
) {
    assert!(a.len() == b.len() && a.len() == c.len());
    let quad = |s: &[Complex<T>]| [s[0], s[1], s[2], s[3]];
    let mut cc = c.chunks_exact_mut(4);
    for ((cq, aq), bq) in (&mut cc).zip(a.chunks_exact(4)).zip(b.chunks_exact(4)) {
        cq.copy_from_slice(&combine4(quad(aq), quad(bq), quad(cq), p));
    }
    let cr = cc.into_remainder();
    let tail = a.len() - cr.len();
    if !cr.is_empty() {
        let pad = Complex::new(T::one(), T::one());
        let mut lanes = [[pad; 4]; 3];
        lanes[0][..cr.len()].copy_from_slice(&a[tail..]);
        lanes[1][..cr.len()].copy_from_slice(&b[tail..]);
        lanes[2][..cr.len()].copy_from_slice(cr);
        let n = cr.len();
        cr.copy_from_slice(&combine4(lanes[0], lanes[1], lanes[2], p)[..n]);
    }
}

/// Applies `w(z) = 2 exp(-z^2) - w(-z)` to the reflected elements.
pub fn reflect_pass<T: Real>(w: &mut [Complex<T>], reflected: &[(usize, Complex<T>)]) -> Result<()> {
    for &(i, z) in reflected {
        w[i] = reflect(z, w[i]).map_err(|e| e.at(i))?;
    }
    Ok(())
}

/// Batch evaluation consuming the input, which becomes the `A` array and
/// finally holds the result. `B` and `C` are strip-mined: two scratch
/// blocks of [`BLOCK`] elements are reused along `A`, so extra memory does
/// not grow with the input.
pub fn eval_batch_owned<T: Real>(mut zs: Vec<Complex<T>>, p: &ApproxParams<T>) -> Result<Vec<Complex<T>>> {
    let reflected = scale_pass(&mut zs, p)?;
    let zero = Complex::new(T::zero(), T::zero());
    let m = BLOCK.min(zs.len());
    let mut b = vec![zero; m];
    let mut c = vec![zero; m];
    for a in zs.chunks_mut(BLOCK) {
        let (b, c) = (&mut b[..a.len()], &mut c[..a.len()]);
        exp_pass(a, b);
        square_pass(a, c);
        combine_pass(a, b, c, p);
        a.copy_from_slice(c);
    }
    reflect_pass(&mut zs, &reflected)?;
    Ok(zs)
}

/// Batch evaluation of [`eval_w`](crate::eval_w) over `zs`, order preserved.
pub fn eval_batch<T: Real>(zs: &[Complex<T>], p: &ApproxParams<T>) -> Result<Vec<Complex<T>>> {
    eval_batch_owned(zs.to_vec(), p)
}

/// Data-parallel [`eval_batch`]: fixed-size chunks run the same three-pass
/// scheme independently, so the output does not depend on the thread count.
pub fn eval_batch_par<T: Real>(zs: &[Complex<T>], p: &ApproxParams<T>) -> Result<Vec<Complex<T>>> {
    let parts: Vec<Result<Vec<Complex<T>>>> = zs
        .par_chunks(PAR_CHUNK)
        .enumerate()
        .map(|(k, chunk)| {
            eval_batch(chunk, p).map_err(|e| match e {
                crate::FaddeevaError::AtIndex { index, source } => crate::FaddeevaError::AtIndex {
                    index: index + k * PAR_CHUNK,
                    source,
                },
                other => other,
            })
        })
        .collect();
    let mut out = Vec::with_capacity(zs.len());
    for part in parts {
        out.extend(part?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eval_w;
    use crate::params::Preset;
    use crate::FaddeevaError;

    type C = Complex<f64>;

    fn same_bits(a: &[C], b: &[C]) -> bool {
        a.len() == b.len()
            && a.iter().zip(b).all(|(x, y)| {
                x.re.to_bits() == y.re.to_bits() && x.im.to_bits() == y.im.to_bits()
            })
    }

    #[test]
    fn two_points_match_scalar() {
        let p = Preset::High.params();
        let zs = [C::new(1.0, 1.0), C::new(2.0, 0.5)];
        let out = eval_batch(&zs, &p).unwrap();
        let scalar: Vec<C> = zs.iter().map(|&z| eval_w(z, &p).unwrap()).collect();
        assert!(same_bits(&out, &scalar));
    }

    #[test]
    fn empty_input() {
        let p = Preset::High.params::<f64>();
        assert!(eval_batch(&[], &p).unwrap().is_empty());
        assert!(eval_batch_par(&[], &p).unwrap().is_empty());
    }

    #[test]
    fn mixed_half_planes_and_singular_points() {
        let p = Preset::High.params();
        let pi = std::f64::consts::PI;
        let zs = [
            C::new(0.0, 0.0),
            C::new(7.0 * pi / 12.0, 0.0),
            C::new(-1.0, -1.0),
            C::new(3.0, -0.2),
            C::new(1e80, 1e80),
            C::new(-4.0, 0.001),
        ];
        let out = eval_batch(&zs, &p).unwrap();
        let scalar: Vec<C> = zs.iter().map(|&z| eval_w(z, &p).unwrap()).collect();
        assert!(same_bits(&out, &scalar));
    }

    #[test]
    fn error_carries_index() {
        let p = Preset::High.params();
        let zs = [C::new(1.0, 1.0), C::new(f64::NAN, 0.0)];
        assert_eq!(eval_batch(&zs, &p).unwrap_err().index(), Some(1));
        let zs = [C::new(1.0, 1.0), C::new(1.0, 2.0), C::new(0.0, -40.0)];
        let err = eval_batch(&zs, &p).unwrap_err();
        assert_eq!(err.index(), Some(2));
        assert!(matches!(err, FaddeevaError::AtIndex { ref source, .. } if matches!(**source, FaddeevaError::Overflow { .. })));
    }

    #[test]
    fn parallel_error_index_is_global() {
        let p = Preset::High.params();
        let mut zs = vec![C::new(0.5, 0.5); PAR_CHUNK * 2 + 10];
        zs[PAR_CHUNK + 3] = C::new(f64::INFINITY, 1.0);
        assert_eq!(eval_batch_par(&zs, &p).unwrap_err().index(), Some(PAR_CHUNK + 3));
    }

    #[test]
    fn passes_compose_to_eval_batch() {
        let p = Preset::Fast.params();
        let zs: Vec<C> = (0..100).map(|k| C::new(k as f64 * 0.13 - 6.0, (k % 7) as f64 - 2.0)).collect();
        let mut a = zs.clone();
        let refl = scale_pass(&mut a, &p).unwrap();
        let mut b = vec![C::new(0.0, 0.0); a.len()];
        let mut c = b.clone();
        exp_pass(&a, &mut b);
        square_pass(&a, &mut c);
        combine_pass(&a, &b, &mut c, &p);
        reflect_pass(&mut c, &refl).unwrap();
        assert!(same_bits(&c, &eval_batch(&zs, &p).unwrap()));
    }
}
