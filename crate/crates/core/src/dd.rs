//! Double-double arithmetic: a value carried as an unevaluated sum of two
//! doubles, giving about 32 significant digits.

use num_complex::Complex64;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    pub fn two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        let bb = s - a;
        let err = (a - (s - bb)) + (b - bb);
        Self { hi: s, lo: err }
    }

    pub fn quick_two_sum(a: f64, b: f64) -> Self {
        let s = a + b;
        Self {
            hi: s,
            lo: b - (s - a),
        }
    }

    pub fn add(self, other: Self) -> Self {
        let s = Self::two_sum(self.hi, other.hi);
        let t = Self::two_sum(self.lo, other.lo);
        let r = Self::quick_two_sum(s.hi, s.lo + t.hi);
        Self::quick_two_sum(r.hi, r.lo + t.lo)
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let p = self.hi * b;
        let err = self.hi.mul_add(b, -p);
        Self::quick_two_sum(p, err + self.lo * b)
    }

    pub fn mul(self, other: Self) -> Self {
        let p = self.hi * other.hi;
        let err = self.hi.mul_add(other.hi, -p);
        Self::quick_two_sum(p, err + (self.hi * other.lo + self.lo * other.hi))
    }

    pub fn div_f64(self, b: f64) -> Self {
        let q1 = self.hi / b;
        // remainder self - q1 * b, exactly up to the low part
        let p = DoubleDouble::from_f64(q1).mul_f64(b);
        let r = self.add(p.neg());
        let q2 = r.hi / b;
        Self::quick_two_sum(q1, q2)
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}

/// `pi / 2` as a double-double.
const FRAC_PI_2: DoubleDouble = DoubleDouble {
    hi: 1.5707963267948966,
    lo: 6.123233995736766e-17,
};

/// `(sin r, cos r)` for `|r| <= pi/4` by nested Taylor series.
fn sincos_reduced(r: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let one = DoubleDouble::from_f64(1.0);
    let r2 = r.mul(r);
    let (mut s, mut c) = (one, one);
    for k in (1..=13u32).rev() {
        let k = k as f64;
        s = one.add(r2.mul(s).div_f64(2.0 * k * (2.0 * k + 1.0)).neg());
        c = one.add(r2.mul(c).div_f64((2.0 * k - 1.0) * 2.0 * k).neg());
    }
    (r.mul(s), c)
}

/// `(cos, sin)` of `2 pi j / m` to double-double accuracy. The quadrant is
/// split off in integer arithmetic, so quarter turns are exact.
pub(crate) fn unit_root_dd(j: usize, m: usize) -> (DoubleDouble, DoubleDouble) {
    let four_j = 4 * (j % m) as u128;
    let m128 = m as u128;
    let q = (four_j + m128 / 2) / m128;
    let num = four_j as i128 - (q * m128) as i128;
    let r = FRAC_PI_2.mul_f64(num as f64).div_f64(m as f64);
    let (s, c) = sincos_reduced(r);
    match q % 4 {
        0 => (c, s),
        1 => (s.neg(), c),
        2 => (c.neg(), s.neg()),
        _ => (s, c.neg()),
    }
}

/// Complex number with double-double parts.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ComplexDD {
    pub re: DoubleDouble,
    pub im: DoubleDouble,
}

impl ComplexDD {
    pub const ZERO: Self = Self {
        re: DoubleDouble::ZERO,
        im: DoubleDouble::ZERO,
    };

    pub fn sub(self, o: Self) -> Self {
        Self {
            re: self.re.add(o.re.neg()),
            im: self.im.add(o.im.neg()),
        }
    }

    pub fn add_f64(self, v: f64) -> Self {
        Self {
            re: self.re.add(DoubleDouble::from_f64(v)),
            im: self.im,
        }
    }

    pub fn new(re: DoubleDouble, im: DoubleDouble) -> Self {
        Self { re, im }
    }

    pub fn mul(self, o: Self) -> Self {
        Self {
            re: self.re.mul(o.re).add(self.im.mul(o.im).neg()),
            im: self.re.mul(o.im).add(self.im.mul(o.re)),
        }
    }

    pub fn scale(self, k: f64) -> Self {
        Self {
            re: self.re.mul_f64(k),
            im: self.im.mul_f64(k),
        }
    }

    /// Product with a double-precision complex number.
    pub fn mul_c64(self, z: Complex64) -> Self {
        Self {
            re: self.re.mul_f64(z.re).add(self.im.mul_f64(z.im).neg()),
            im: self.re.mul_f64(z.im).add(self.im.mul_f64(z.re)),
        }
    }

    /// Exact product of two double-precision complex numbers, accumulated.
    pub fn add_product(self, a: Complex64, b: Complex64) -> Self {
        let ar = DoubleDouble::from_f64(a.re);
        let ai = DoubleDouble::from_f64(a.im);
        Self {
            re: self.re.add(ar.mul_f64(b.re)).add(ai.mul_f64(b.im).neg()),
            im: self.im.add(ar.mul_f64(b.im)).add(ai.mul_f64(b.re)),
        }
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}
