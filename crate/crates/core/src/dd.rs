//! Minimal double-double arithmetic (~31 significant digits) for the
//! Gaver-Stehfest ladder, whose alternating weights wipe out half of f64.
//! Algorithms follow the classic error-free transformations (two_sum /
//! two_prod with fused multiply-add).

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };
    /// ln 2 to double-double precision.
    pub const LN2: Dd = Dd {
        hi: 0.693_147_180_559_945_3,
        lo: 2.319_046_813_846_299_6e-17,
    };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact conversion of up to 106-bit integers.
    pub fn from_u128(x: u128) -> Dd {
        let hi = x as f64;
        let lo = if hi.is_finite() && hi >= 0.0 && (hi as u128) <= x {
            (x - hi as u128) as f64
        } else {
            // hi rounded up past x
            -((hi as u128 - x) as f64)
        };
        Dd::norm(hi, lo)
    }

    #[inline]
    fn norm(hi: f64, lo: f64) -> Dd {
        let (s, e) = quick_two_sum(hi, lo);
        Dd { hi: s, lo: e }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let (s1, s2) = quick_two_sum(s1, s2 + t1);
        Dd::norm(s1, s2 + t2)
    }

    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        Dd::norm(p1, p2 + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul_f64(q1));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul_f64(q2));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd::norm(s, e + q3)
    }

    #[inline]
    pub fn mul_f64(self, f: f64) -> Dd {
        let (p1, p2) = two_prod(self.hi, f);
        Dd::norm(p1, p2 + self.lo * f)
    }

    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 {
            return Dd::ZERO;
        }
        // one Newton step on the f64 seed doubles the precision
        let x = 1.0 / self.hi.sqrt();
        let y = self.hi * x;
        let y_dd = Dd::from_f64(y);
        let resid = self.sub(y_dd.mul(y_dd));
        y_dd.add(Dd::from_f64(resid.hi * x * 0.5))
    }

    pub fn recip(self) -> Dd {
        Dd::ONE.div(self)
    }

    /// e^self via range reduction against LN2 and a double-double Taylor tail.
    pub fn exp(self) -> Dd {
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::ZERO;
        }
        let k = (self.hi / std::f64::consts::LN_2).round();
        let r = self.sub(Dd::LN2.mul_f64(k));
        // Taylor sum of e^r for |r| <= ln2/2
        let mut term = Dd::ONE;
        let mut sum = Dd::ONE;
        for n in 1..=24 {
            term = term.mul(r).mul_f64(1.0 / n as f64);
            sum = sum.add(term);
            if term.hi.abs() < 1e-34 * sum.hi.abs() {
                break;
            }
        }
        let scale = 2f64.powi(k as i32);
        Dd {
            hi: sum.hi * scale,
            lo: sum.lo * scale,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_beats_f64() {
        // (1 + 1e-20) - 1 survives in double-double
        let a = Dd::ONE.add(Dd::from_f64(1e-20));
        let d = a.sub(Dd::ONE);
        assert!((d.to_f64() - 1e-20).abs() < 1e-33);
    }

    #[test]
    fn division_and_sqrt() {
        let x = Dd::from_f64(2.0);
        let r = x.sqrt();
        let back = r.mul(r).sub(x);
        assert!(back.to_f64().abs() < 1e-30);
        let q = Dd::ONE.div(Dd::from_f64(3.0));
        let resid = q.mul_f64(3.0).sub(Dd::ONE);
        assert!(resid.to_f64().abs() < 1e-30);
    }

    #[test]
    fn exp_matches_known_digits() {
        // e to 32 digits: 2.7182818284590452353602874713527
        let e = Dd::ONE.exp();
        assert!((e.hi - 2.718_281_828_459_045_2).abs() < 1e-15);
        assert!((e.to_f64() - 2.718_281_828_459_045_235_36).abs() < 1e-15);
        // e^{-10} against f64 libm (agreement to f64 precision, with slack
        // for the libm rounding itself)
        let v = Dd::from_f64(-10.0).exp().to_f64();
        assert!((v - (-10.0f64).exp()).abs() < 1e-20);
    }

    #[test]
    fn u128_conversion_is_faithful() {
        let n: u128 = 620_448_401_733_239_439_360_000; // 24!
        let d = Dd::from_u128(n);
        // round-trip through division by 2^20
        let scaled = d.mul_f64(1.0 / 1048576.0).mul_f64(1048576.0);
        assert_eq!(scaled.hi, d.hi);
    }
}
