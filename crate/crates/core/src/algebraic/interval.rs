//! Rational interval arithmetic and complex boxes with dyadic outward rounding.

use crate::exact::rational::{dyadic_ceil, dyadic_floor, sqrt_lower, sqrt_upper, Rational};
use crate::exact::QPoly;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Interval {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: Rational) -> Interval {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Interval {
        Interval::point(Rational::zero())
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(2.into())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.hi.is_negative()
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn sub(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo - &o.hi, &self.hi - &o.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, c: &Rational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Interval::new(a, b)
        } else {
            Interval::new(b, a)
        }
    }

    pub fn square(&self) -> Interval {
        if self.contains_zero() {
            let m = self.lo.abs().max(self.hi.abs());
            Interval::new(Rational::zero(), &m * &m)
        } else {
            let (a, b) = (&self.lo * &self.lo, &self.hi * &self.hi);
            Interval::new(a.clone().min(b.clone()), a.max(b))
        }
    }

    /// Reciprocal; `None` when the interval contains zero.
    pub fn recip(&self) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        Some(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn abs_upper(&self) -> Rational {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn abs(&self) -> Interval {
        if self.contains_zero() {
            Interval::new(Rational::zero(), self.abs_upper())
        } else if self.lo.is_positive() {
            self.clone()
        } else {
            self.neg()
        }
    }

    pub fn sqrt(&self, bits: u32) -> Interval {
        let lo = if self.lo.is_positive() {
            sqrt_lower(&self.lo, bits)
        } else {
            Rational::zero()
        };
        let hi = if self.hi.is_positive() {
            sqrt_upper(&self.hi, bits)
        } else {
            Rational::zero()
        };
        Interval::new(lo, hi)
    }

    /// Outward rounding of both ends to multiples of `2^-bits`.
    pub fn round(&self, bits: u32) -> Interval {
        Interval::new(dyadic_floor(&self.lo, bits), dyadic_ceil(&self.hi, bits))
    }

    pub fn eval_poly(p: &QPoly, x: &Interval, bits: u32) -> Interval {
        let mut acc = Interval::zero();
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(x).add(&Interval::point(c.clone())).round(bits);
        }
        acc
    }
}

/// Axis-aligned box in the complex plane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBox {
    pub re: Interval,
    pub im: Interval,
}

impl CBox {
    pub fn new(re: Interval, im: Interval) -> CBox {
        CBox { re, im }
    }

    pub fn real(re: Interval) -> CBox {
        CBox {
            re,
            im: Interval::zero(),
        }
    }

    pub fn point(re: Rational, im: Rational) -> CBox {
        CBox::new(Interval::point(re), Interval::point(im))
    }

    pub fn from_rational(x: &Rational) -> CBox {
        CBox::point(x.clone(), Rational::zero())
    }

    pub fn disc_hull(center_re: &Rational, center_im: &Rational, radius: &Rational) -> CBox {
        CBox::new(
            Interval::new(center_re - radius, center_re + radius),
            Interval::new(center_im - radius, center_im + radius),
        )
    }

    pub fn add(&self, o: &CBox) -> CBox {
        CBox::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &CBox) -> CBox {
        CBox::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> CBox {
        CBox::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> CBox {
        CBox::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &CBox) -> CBox {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        CBox::new(re, im)
    }

    pub fn scale(&self, c: &Rational) -> CBox {
        CBox::new(self.re.scale(c), self.im.scale(c))
    }

    pub fn abs_sq(&self) -> Interval {
        self.re.square().add(&self.im.square())
    }

    /// Reciprocal `conj(z)/|z|²`; `None` if the box may contain zero.
    pub fn recip(&self) -> Option<CBox> {
        let inv = self.abs_sq().recip()?;
        Some(CBox::new(self.re.mul(&inv), self.im.neg().mul(&inv)))
    }

    pub fn div(&self, o: &CBox) -> Option<CBox> {
        Some(self.mul(&o.recip()?))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn intersects(&self, o: &CBox) -> bool {
        self.re.intersects(&o.re) && self.im.intersects(&o.im)
    }

    pub fn width(&self) -> Rational {
        self.re.width().max(self.im.width())
    }

    pub fn round(&self, bits: u32) -> CBox {
        CBox::new(self.re.round(bits), self.im.round(bits))
    }

    pub fn mid(&self) -> (Rational, Rational) {
        (self.re.mid(), self.im.mid())
    }

    pub fn pow(&self, n: u64, bits: u32) -> CBox {
        let mut result = CBox::from_rational(&Rational::one());
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base).round(bits);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).round(bits);
            }
        }
        result
    }

    /// Horner evaluation of a rational polynomial, rounding after each step.
    pub fn eval_poly(p: &QPoly, z: &CBox, bits: u32) -> CBox {
        let mut acc = CBox::from_rational(&Rational::zero());
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(z).add(&CBox::from_rational(c)).round(bits);
        }
        acc
    }
}
