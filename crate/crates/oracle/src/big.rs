//! Minimal complex arithmetic over `astro_float::BigFloat`.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word};
use faddeeva::Complex64;

const RM: RoundingMode = RoundingMode::ToEven;

/// Working precision in bits together with the constant cache the
/// transcendental functions need.
pub struct Ctx {
    pub bits: usize,
    consts: Consts,
}

impl Ctx {
    pub fn new(bits: usize) -> Self {
        Self { bits, consts: Consts::new().expect("constant cache allocation") }
    }

    pub fn with_bits(&self, bits: usize) -> Self {
        Self::new(bits)
    }

    pub fn real(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.bits)
    }

    pub fn int(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.bits)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.bits, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.bits, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.bits, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.bits, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.bits, RM)
    }

    pub fn exp(&mut self, a: &BigFloat) -> BigFloat {
        a.exp(self.bits, RM, &mut self.consts)
    }

    pub fn pi(&mut self) -> BigFloat {
        self.consts.pi(self.bits, RM)
    }

    pub fn sqrt_pi(&mut self) -> BigFloat {
        let pi = self.pi();
        self.sqrt(&pi)
    }

    pub fn c(&self, re: f64, im: f64) -> BigComplex {
        BigComplex { re: self.real(re), im: self.real(im) }
    }

    pub fn from_c64(&self, z: Complex64) -> BigComplex {
        self.c(z.re, z.im)
    }

    pub fn cadd(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        BigComplex { re: self.add(&a.re, &b.re), im: self.add(&a.im, &b.im) }
    }

    pub fn csub(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        BigComplex { re: self.sub(&a.re, &b.re), im: self.sub(&a.im, &b.im) }
    }

    pub fn cmul(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        let re = self.sub(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.add(&self.mul(&a.re, &b.im), &self.mul(&a.im, &b.re));
        BigComplex { re, im }
    }

    pub fn cscale(&self, a: &BigComplex, s: &BigFloat) -> BigComplex {
        BigComplex { re: self.mul(&a.re, s), im: self.mul(&a.im, s) }
    }

    pub fn cdiv_real(&self, a: &BigComplex, s: &BigFloat) -> BigComplex {
        BigComplex { re: self.div(&a.re, s), im: self.div(&a.im, s) }
    }

    pub fn cdiv(&self, a: &BigComplex, b: &BigComplex) -> BigComplex {
        let den = self.add(&self.mul(&b.re, &b.re), &self.mul(&b.im, &b.im));
        let re = self.add(&self.mul(&a.re, &b.re), &self.mul(&a.im, &b.im));
        let im = self.sub(&self.mul(&a.im, &b.re), &self.mul(&a.re, &b.im));
        BigComplex { re: self.div(&re, &den), im: self.div(&im, &den) }
    }

    /// Reciprocal `s / b` of a complex number scaled by a real.
    pub fn creal_div(&self, s: &BigFloat, b: &BigComplex) -> BigComplex {
        let den = self.add(&self.mul(&b.re, &b.re), &self.mul(&b.im, &b.im));
        let f = self.div(s, &den);
        BigComplex { re: self.mul(&b.re, &f), im: self.mul(&b.im, &f).neg() }
    }

    pub fn cexp(&mut self, a: &BigComplex) -> BigComplex {
        let m = self.exp(&a.re);
        let cos = a.im.cos(self.bits, RM, &mut self.consts);
        let sin = a.im.sin(self.bits, RM, &mut self.consts);
        BigComplex { re: self.mul(&m, &cos), im: self.mul(&m, &sin) }
    }

    pub fn norm(&self, a: &BigComplex) -> BigFloat {
        self.sqrt(&self.add(&self.mul(&a.re, &a.re), &self.mul(&a.im, &a.im)))
    }

    /// `|a - b| / |b|` as f64 (infinite when `b` is zero and `a` is not).
    pub fn rel_diff(&self, a: &BigComplex, b: &BigComplex) -> f64 {
        let d = self.norm(&self.csub(a, b));
        let n = self.norm(b);
        if n.is_zero() {
            return if d.is_zero() { 0.0 } else { f64::INFINITY };
        }
        to_f64(&self.div(&d, &n))
    }
}

/// Complex number with arbitrary-precision parts.
#[derive(Debug, Clone)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplex {
    pub fn neg(&self) -> Self {
        Self { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: self.im.neg() }
    }

    /// Nearest binary64 value of each part.
    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }
}

/// Nearest binary64 value (ties to even, sticky bit from the discarded
/// words).
pub fn to_f64(v: &BigFloat) -> f64 {
    if v.is_nan() {
        return f64::NAN;
    }
    if v.is_inf_pos() {
        return f64::INFINITY;
    }
    if v.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if v.is_zero() {
        return 0.0;
    }
    let (words, _, sign, exponent, _) = v.as_raw_parts().expect("finite value");
    let (&top, rest) = words.split_last().expect("non-empty mantissa");
    let sticky = rest.iter().any(|&w: &Word| w != 0);
    // |v| = 0.top... * 2^exponent with the leading bit of `top` set
    let e = exponent as i64 - Word::BITS as i64;
    // below this the quantum is 2^-1074 and rounding must happen once, here
    let shift = -1074 - e;
    let mag = if shift > 0 {
        if shift > 64 {
            0.0
        } else {
            let kept = if shift == 64 { 0 } else { top >> shift };
            let dropped = if shift == 64 { top } else { top << (64 - shift) };
            let half = 1u64 << 63;
            let up = dropped > half || (dropped == half && (sticky || kept & 1 == 1));
            ldexp((kept + up as u64) as f64, -1074)
        }
    } else {
        ldexp((top | sticky as u64) as f64, e)
    };
    if sign == Sign::Neg {
        -mag
    } else {
        mag
    }
}

fn ldexp(mut v: f64, mut k: i64) -> f64 {
    while k > 1000 {
        v *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        v *= 2f64.powi(-1000);
        k += 1000;
    }
    v * 2f64.powi(k as i32)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip() {
        let ctx = Ctx::new(128);
        for v in [1.0, -1.0, 0.1, 3.5e-200, -7.25e300, std::f64::consts::PI, f64::MIN_POSITIVE, 0.0] {
            assert_eq!(to_f64(&ctx.real(v)), v);
        }
    }

    #[test]
    fn rounds_to_nearest() {
        let ctx = Ctx::new(256);
        let third = ctx.div(&ctx.int(1), &ctx.int(3));
        assert_eq!(to_f64(&third), 1.0 / 3.0);
        let mut ctx = ctx;
        assert_eq!(to_f64(&ctx.pi()), std::f64::consts::PI);
        let e = ctx.exp(&ctx.real(1.0));
        assert_eq!(to_f64(&e), std::f64::consts::E);
    }

    #[test]
    fn subnormal_results_round_once() {
        let ctx = Ctx::new(128);
        let big = ctx.real(2f64.powi(1000));
        let tiny = |num: u64, den: u64| {
            let q = ctx.div(&ctx.div(&ctx.int(num), &ctx.int(den)), &big);
            to_f64(&ctx.div(&q, &ctx.real(2f64.powi(74))))
        };
        let q = 2f64.powi(-1000) * 2f64.powi(-74);
        assert_eq!(tiny(3, 1), 3.0 * q);
        // 2.5 and 3.5 quanta tie to even
        assert_eq!(tiny(5, 2), 2.0 * q);
        assert_eq!(tiny(7, 2), 4.0 * q);
        assert_eq!(tiny(1, 3), 0.0);
        assert_eq!(tiny(2, 3), q);
    }

    #[test]
    fn complex_ops() {
        let mut ctx = Ctx::new(192);
        let a = ctx.c(1.0, 2.0);
        let b = ctx.c(-3.0, 0.5);
        let q = ctx.cdiv(&ctx.cmul(&a, &b), &b);
        assert!(ctx.rel_diff(&q, &a) < 1e-50);
        let e = ctx.cexp(&ctx.c(0.0, std::f64::consts::PI));
        assert!((e.to_c64() - Complex64::new(-1.0, 0.0)).norm() < 1e-15);
        let r = ctx.creal_div(&ctx.real(2.0), &b);
        assert!(ctx.rel_diff(&ctx.cmul(&r, &b), &ctx.c(2.0, 0.0)) < 1e-50);
    }
}
