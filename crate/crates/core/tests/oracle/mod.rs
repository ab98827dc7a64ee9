//! Reference values in 320-bit binary fixed point, computed straight from
//! the logarithmic closed forms and the infinite product. Shares no code
//! with the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const BITS: u32 = 320;

/// `n / 2^BITS`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(pub BigInt);

fn unit() -> BigInt {
    BigInt::one() << BITS
}

impl Fixed {
    pub fn int(n: i64) -> Fixed {
        Fixed(BigInt::from(n) << BITS)
    }

    pub fn ratio(r: &BigRational) -> Fixed {
        Fixed((r.numer() << BITS) / r.denom())
    }

    pub fn f64(x: f64) -> Fixed {
        Fixed::ratio(&BigRational::from_float(x).expect("finite"))
    }

    pub fn to_f64(&self) -> f64 {
        BigRational::new(self.0.clone(), unit()).to_f64().unwrap()
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 * &o.0) >> BITS)
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed((&self.0 << BITS) / &o.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn sqrt(&self) -> Fixed {
        Fixed((&self.0 << BITS).sqrt())
    }
}

/// `2 atanh(z) = ln((1+z)/(1-z))` for `0 <= z <= 1/3`.
fn two_atanh(z: &Fixed) -> Fixed {
    let z2 = z.mul(z);
    let mut pow = z.clone();
    let mut sum = Fixed(BigInt::zero());
    let mut k = 1i64;
    while !pow.is_zero() {
        sum = sum.add(&Fixed(&pow.0 / k));
        pow = pow.mul(&z2);
        k += 2;
    }
    Fixed(sum.0 * 2)
}

fn ln2() -> Fixed {
    two_atanh(&Fixed::int(1).div(&Fixed::int(3)))
}

pub fn ln(x: &Fixed) -> Fixed {
    assert!(x.0.is_positive(), "ln of non-positive value");
    // x = m 2^e with m in [1, 2)
    let e = x.0.bits() as i64 - BITS as i64 - 1;
    let m = if e >= 0 {
        Fixed(&x.0 >> e as u32)
    } else {
        Fixed(&x.0 << (-e) as u32)
    };
    let one = Fixed::int(1);
    let z = m.sub(&one).div(&m.add(&one));
    two_atanh(&z).add(&Fixed(ln2().0 * e))
}

pub fn exp(x: &Fixed) -> Fixed {
    let l2 = ln2();
    let n = (&x.0 + (&l2.0 >> 1u32)).div_floor_fixed(&l2.0);
    let r = x.sub(&Fixed(&l2.0 * &n));
    let mut term = Fixed::int(1);
    let mut sum = Fixed::int(1);
    let mut k = 1i64;
    while !term.is_zero() {
        term = Fixed(term.mul(&r).0 / k);
        sum = sum.add(&term);
        k += 1;
    }
    let n = n.to_i64().unwrap();
    if n >= 0 {
        Fixed(sum.0 << n as u32)
    } else {
        Fixed(sum.0 >> (-n) as u32)
    }
}

trait DivFloor {
    fn div_floor_fixed(&self, d: &BigInt) -> BigInt;
}

impl DivFloor for BigInt {
    fn div_floor_fixed(&self, d: &BigInt) -> BigInt {
        num_integer::Integer::div_floor(self, d)
    }
}

/// `prod_{k>=0} (1 + lambda p^k)`, stopping once `lambda p^k` vanishes at
/// this precision.
pub fn q_product(lambda: f64, p: f64) -> Fixed {
    let l = Fixed::f64(lambda);
    let p = Fixed::f64(p);
    let one = Fixed::int(1);
    let mut term = l.clone();
    let mut prod = one.clone();
    while !term.is_zero() {
        prod = prod.mul(&one.add(&term));
        term = term.mul(&p);
    }
    prod
}

/// `prod_{k=0}^{m} (1 + lambda p^k)`.
pub fn q_product_truncated(lambda: f64, p: f64, m: u32) -> Fixed {
    let l = Fixed::f64(lambda);
    let p = Fixed::f64(p);
    let one = Fixed::int(1);
    let mut term = l.clone();
    let mut prod = one.clone();
    for _ in 0..=m {
        prod = prod.mul(&one.add(&term));
        term = term.mul(&p);
    }
    prod
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap()
}

fn rint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `(f - 1) / lambda`.
pub fn mean_no_dispersion(lambda: f64, p: f64) -> Fixed {
    q_product(lambda, p)
        .sub(&Fixed::int(1))
        .div(&Fixed::f64(lambda))
}

/// Binary tree, `p < 2/(lambda+2)`.
pub fn mean_tree2(lambda: f64, p: f64) -> Fixed {
    let (l, p) = (rat(lambda), rat(p));
    let lp = &l * &p;
    let one = rint(1);
    let two = rint(2);
    let prefactor = (&lp + &one) * (&lp + &two) / (&lp * &p * (&l + &one));
    let num = (&one - &p) * (&lp + &two);
    let den = &num - &lp * &p * (&l + &one);
    assert!(den.is_positive());
    Fixed::ratio(&prefactor).mul(&ln(&Fixed::ratio(&(num / den))))
}

/// Squared auxiliary function as an exact rational.
pub fn g_squared(lambda: f64, p: f64) -> BigRational {
    let (l, p) = (rat(lambda), rat(p));
    let lp = &l * &p;
    let one = rint(1);
    &lp * &lp * &p * (&l + &one) * (rint(6) + &lp - rint(3) * &p) / ((&lp + rint(3)) * (&lp + &one))
}

/// Ternary tree, `p < 3/(2 lambda + 3)`.
pub fn mean_tree3(lambda: f64, p: f64) -> Fixed {
    let g = Fixed::ratio(&g_squared(lambda, p)).sqrt();
    let (l, p) = (rat(lambda), rat(p));
    let lp = &l * &p;
    let a = Fixed::ratio(&(rint(3) - rint(3) * &p - &lp));
    let pre = Fixed::ratio(&(rint(2) * &lp + rint(3))).div(&Fixed(&g.0 * 2));
    pre.mul(&ln(&a.add(&g).div(&a.sub(&g))))
}

/// Free dispersion, `p < 1/(lambda+1)`.
pub fn mean_free(lambda: f64, p: f64) -> Fixed {
    let (l, p) = (rat(lambda), rat(p));
    let one = rint(1);
    let arg = &one - &l * &p / (&one - &p);
    let factor = (&l + &one) / &l;
    Fixed::int(1).sub(&Fixed::ratio(&factor).mul(&ln(&Fixed::ratio(&arg))))
}
