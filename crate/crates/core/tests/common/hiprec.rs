//! Fixed-point decimal arithmetic on `BigInt` with 60 fractional digits,
//! enough to evaluate the closed-form thresholds independently of `f64`.

use num_bigint::BigInt;

const DIGITS: u32 = 60;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(BigInt);

fn scale() -> BigInt {
    BigInt::from(10u32).pow(DIGITS)
}

impl Fixed {
    pub fn int(k: i64) -> Self {
        Fixed(BigInt::from(k) * scale())
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Fixed(BigInt::from(p) * scale() / BigInt::from(q))
    }

    pub fn from_bigint(k: &BigInt) -> Self {
        Fixed(k * scale())
    }

    pub fn add(&self, o: &Self) -> Self {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Self) -> Self {
        Fixed(&self.0 * &o.0 / scale())
    }

    pub fn div(&self, o: &Self) -> Self {
        Fixed(&self.0 * scale() / &o.0)
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Fixed(&self.0 * BigInt::from(k))
    }

    pub fn div_int(&self, k: i64) -> Self {
        Fixed(&self.0 / BigInt::from(k))
    }

    pub fn max(self, o: Self) -> Self {
        if self >= o {
            self
        } else {
            o
        }
    }

    fn is_negligible(&self) -> bool {
        self.0.magnitude().bits() <= 1
    }

    pub fn to_f64(&self) -> f64 {
        let s = scale();
        let int = &self.0 / &s;
        let frac = (&self.0 % &s).to_string();
        let frac = frac.trim_start_matches('-');
        let digits = format!("{:0>width$}", frac, width = DIGITS as usize);
        let sign = if self.0 < BigInt::from(0) && int == BigInt::from(0) { "-" } else { "" };
        format!("{sign}{int}.{digits}").parse().unwrap()
    }
}

/// `atanh(1/k)` for an integer `k ≥ 2`.
fn atanh_inv(k: i64) -> Fixed {
    let mut sum = Fixed::int(0);
    let mut power = Fixed::ratio(1, k);
    let k2 = k * k;
    let mut j = 1;
    loop {
        let term = power.div_int(j);
        if term.is_negligible() {
            return sum;
        }
        sum = sum.add(&term);
        power = power.div_int(k2);
        j += 2;
    }
}

/// `atan(1/k)`.
fn atan_inv(k: i64) -> Fixed {
    let mut sum = Fixed::int(0);
    let mut power = Fixed::ratio(1, k);
    let k2 = k * k;
    let mut j = 1;
    let mut sign = 1;
    loop {
        let term = power.div_int(j);
        if term.is_negligible() {
            return sum;
        }
        sum = if sign > 0 { sum.add(&term) } else { sum.sub(&term) };
        power = power.div_int(k2);
        j += 2;
        sign = -sign;
    }
}

pub fn pi() -> Fixed {
    atan_inv(5).mul_int(16).sub(&atan_inv(239).mul_int(4))
}

pub fn ln2() -> Fixed {
    atanh_inv(3).mul_int(2)
}

/// Natural logarithm of a positive fixed-point value.
pub fn ln(x: &Fixed) -> Fixed {
    assert!(x.0 > BigInt::from(0));
    let one = Fixed::int(1);
    let two = Fixed::int(2);
    let mut m = x.clone();
    let mut k = 0i64;
    while m >= two {
        m = m.div_int(2);
        k += 1;
    }
    while m < one {
        m = m.mul_int(2);
        k -= 1;
    }
    // ln m = 2·atanh(y), y = (m − 1)/(m + 1) ∈ [0, 1/3).
    let y = m.sub(&one).div(&m.add(&one));
    let y2 = y.mul(&y);
    let mut sum = Fixed::int(0);
    let mut power = y;
    let mut j = 1;
    loop {
        let term = power.div_int(j);
        if term.is_negligible() {
            break;
        }
        sum = sum.add(&term);
        power = power.mul(&y2);
        j += 2;
    }
    sum.mul_int(2).add(&ln2().mul_int(k))
}

/// `eˣ` by argument halving and a Taylor series.
pub fn exp(x: &Fixed) -> Fixed {
    let mut r = x.clone();
    let mut halvings = 0;
    let small = scale() / BigInt::from(1000);
    while r.0.magnitude() > small.magnitude() {
        r = r.div_int(2);
        halvings += 1;
    }
    let mut sum = Fixed::int(1);
    let mut term = Fixed::int(1);
    let mut j = 1;
    loop {
        term = term.mul(&r).div_int(j);
        if term.is_negligible() {
            break;
        }
        sum = sum.add(&term);
        j += 1;
    }
    for _ in 0..halvings {
        sum = sum.mul(&sum);
    }
    sum
}

pub fn pow_int(x: &Fixed, k: u32) -> Fixed {
    (0..k).fold(Fixed::int(1), |acc, _| acc.mul(x))
}

pub fn factorial(n: u64) -> BigInt {
    (2..=n).fold(BigInt::from(1), |acc, k| acc * k)
}

pub fn sqrt(x: &Fixed) -> Fixed {
    Fixed((&x.0 * scale()).sqrt())
}

impl Fixed {
    /// `|self − other| < 10^{−digits}`.
    pub fn close_to(&self, other: &Self, digits: u32) -> bool {
        let diff = (&self.0 - &other.0).magnitude().clone();
        diff * BigInt::from(10u32).pow(digits).magnitude() < scale().magnitude().clone()
    }
}
