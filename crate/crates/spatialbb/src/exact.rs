//! Exact arithmetic underpinning the phase calculus: rational multiples of
//! pi, Gaussian integers, and a vanishing-sum test for roots of unity.
//!
//! Control phases in this crate are always rational multiples of pi, so
//! every cancellation question ("does this sum of unit phases vanish?") has
//! an exact yes/no answer. Quarter-turn angles reduce to Gaussian-integer
//! sums; general rational angles go through cyclotomic-polynomial reduction.

use num_rational::Ratio;
use std::collections::HashMap;
use std::fmt;

/// An angle `q * pi` with `q` an exact rational, stored reduced modulo 2
/// (i.e. the angle is kept in `[0, 2pi)`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct RationalAngle(Ratio<i64>);

impl RationalAngle {
    /// Angle `(num/den) * pi`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "angle denominator must be nonzero");
        Self(Ratio::new(num, den)).reduced()
    }

    pub fn zero() -> Self {
        Self(Ratio::new(0, 1))
    }

    fn reduced(self) -> Self {
        // Ratio::new keeps the fraction reduced; fold into [0, 2).
        let two = Ratio::new(2, 1);
        let mut q = self.0 % two;
        if q < Ratio::new(0, 1) {
            q += two;
        }
        Self(q)
    }

    pub fn is_zero(&self) -> bool {
        self.0.numer() == &0
    }

    /// Numerator of the reduced fraction (angle = numer/denom * pi).
    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    /// Denominator of the reduced fraction, always >= 1.
    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    /// The angle in radians.
    pub fn as_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64 * std::f64::consts::PI
    }

    /// Sum modulo 2pi.
    pub fn add(&self, other: &Self) -> Self {
        Self(self.0 + other.0).reduced()
    }

    /// Integer multiple modulo 2pi.
    pub fn times(&self, k: i64) -> Self {
        Self(self.0 * Ratio::new(k, 1)).reduced()
    }

    pub fn neg(&self) -> Self {
        Self(-self.0).reduced()
    }

    /// If the angle is a multiple of pi/2, the multiplier in 0..4.
    pub fn quarter_turns(&self) -> Option<u8> {
        let q = self.0 * Ratio::new(2, 1); // angle / (pi/2)
        if q.denom() == &1 {
            Some((q.numer().rem_euclid(4)) as u8)
        } else {
            None
        }
    }
}

impl fmt::Display for RationalAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else if self.denom() == 1 {
            write!(f, "{}pi", self.numer())
        } else {
            write!(f, "{}pi/{}", self.numer(), self.denom())
        }
    }
}

/// Gaussian integer `re + im*i`; closed under sums of the four quarter-turn
/// phases, so survival weights over quarter-turn sequences live here exactly.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };

    /// `i^q` for q in 0..4.
    pub fn unit(q: u8) -> Self {
        match q % 4 {
            0 => GaussInt { re: 1, im: 0 },
            1 => GaussInt { re: 0, im: 1 },
            2 => GaussInt { re: -1, im: 0 },
            _ => GaussInt { re: 0, im: -1 },
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussInt { re: self.re + o.re, im: self.im + o.im }
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussInt {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    pub fn scale(&self, k: i64) -> Self {
        GaussInt { re: self.re * k, im: self.im * k }
    }

    pub fn conj(&self) -> Self {
        GaussInt { re: self.re, im: -self.im }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = GaussInt::ONE;
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn abs(&self) -> f64 {
        ((self.re * self.re + self.im * self.im) as f64).sqrt()
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re as f64, self.im as f64)
    }
}

/// Exact 2x2 Gaussian-integer matrix, used for quarter-turn two-mode
/// control images.
pub type GaussW = [[GaussInt; 2]; 2];

pub const GAUSS_W_IDENTITY: GaussW =
    [[GaussInt::ONE, GaussInt::ZERO], [GaussInt::ZERO, GaussInt::ONE]];

pub fn gauss_w_mul(a: &GaussW, b: &GaussW) -> GaussW {
    let mut out = [[GaussInt::ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j]));
        }
    }
    out
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0 {
            write!(f, "{}", self.re)
        } else if self.im > 0 {
            write!(f, "{}+{}i", self.re, self.im)
        } else {
            write!(f, "{}{}i", self.re, self.im)
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}

/// Cyclotomic polynomial Phi_n as an integer coefficient vector
/// (low degree first). Computed by dividing x^n - 1 by Phi_d for every
/// proper divisor d of n; results memoized in `cache`.
fn cyclotomic(n: i64, cache: &mut HashMap<i64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = cache.get(&n) {
        return p.clone();
    }
    // x^n - 1
    let mut poly = vec![0i64; n as usize + 1];
    poly[0] = -1;
    poly[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic(d, cache);
            poly = poly_div_exact(&poly, &phi_d);
        }
    }
    cache.insert(n, poly.clone());
    poly
}

/// Exact division of integer polynomials; panics on a nonzero remainder
/// (cannot happen for cyclotomic factors).
fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dn = num.len() - 1;
    let dd = den.len() - 1;
    assert!(dn >= dd && den[dd] == 1, "cyclotomic division is monic");
    let mut rem = num.to_vec();
    let mut quot = vec![0i64; dn - dd + 1];
    for i in (0..=dn - dd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    assert!(rem.iter().all(|&c| c == 0), "exact polynomial division left a remainder");
    quot
}

/// Remainder of `poly` modulo the monic polynomial `modulus`.
fn poly_rem(poly: &[i64], modulus: &[i64]) -> Vec<i64> {
    let dd = modulus.len() - 1;
    let mut rem = poly.to_vec();
    while rem.len() > dd {
        let i = rem.len() - 1;
        let c = rem[i];
        if c != 0 {
            for (j, &d) in modulus.iter().enumerate() {
                rem[i - dd + j] -= c * d;
            }
        }
        rem.pop();
    }
    rem
}

/// Exact test for `sum_j exp(i * angle_j) == 0` over rational angles.
///
/// With n = 2 * lcm(denominators), each term is the n-th root of unity
/// zeta^(numer * n/2 / denom); the sum vanishes iff the corresponding
/// integer polynomial is divisible by Phi_n (the minimal polynomial of
/// zeta_n over the rationals).
pub fn root_sum_is_zero(angles: &[RationalAngle]) -> bool {
    if angles.is_empty() {
        return true;
    }
    let mut l = 1i64;
    for a in angles {
        l = lcm(l, a.denom());
    }
    let n = 2 * l;
    // exponent of zeta_n for angle (p/q) pi: p * (n/2) / q
    let mut counts = vec![0i64; n as usize];
    for a in angles {
        let e = (a.numer() * (n / 2) / a.denom()).rem_euclid(n);
        counts[e as usize] += 1;
    }
    unit_sum_is_zero_from_counts(&counts, n)
}

/// Exact test for `sum_t counts[t] * zeta_n^t == 0` with integer
/// multiplicities (negative entries allowed): the coefficient polynomial
/// must reduce to zero modulo Phi_n.
pub fn unit_sum_is_zero_from_counts(counts: &[i64], n: i64) -> bool {
    assert!(n >= 1 && counts.len() <= n as usize);
    if counts.iter().all(|&c| c == 0) {
        return true;
    }
    let mut cache = HashMap::new();
    let phi = cyclotomic(n, &mut cache);
    let rem = poly_rem(counts, &phi);
    rem.iter().all(|&c| c == 0)
}

/// Float rendering of the same sum, for magnitude reporting.
pub fn root_sum_f64(angles: &[RationalAngle]) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for a in angles {
        let t = a.as_f64();
        re += t.cos();
        im += t.sin();
    }
    (re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_reduce_mod_two_pi() {
        assert_eq!(RationalAngle::new(5, 2), RationalAngle::new(1, 2));
        assert_eq!(RationalAngle::new(-1, 2), RationalAngle::new(3, 2));
        assert_eq!(RationalAngle::new(4, 1), RationalAngle::zero());
        assert_eq!(RationalAngle::new(7, 3).add(&RationalAngle::new(2, 3)), RationalAngle::new(1, 1));
        assert_eq!(RationalAngle::new(1, 2).times(-3), RationalAngle::new(1, 2));
    }

    #[test]
    fn quarter_turn_detection() {
        assert_eq!(RationalAngle::new(1, 2).quarter_turns(), Some(1));
        assert_eq!(RationalAngle::new(3, 2).quarter_turns(), Some(3));
        assert_eq!(RationalAngle::new(1, 1).quarter_turns(), Some(2));
        assert_eq!(RationalAngle::zero().quarter_turns(), Some(0));
        assert_eq!(RationalAngle::new(1, 4).quarter_turns(), None);
        assert_eq!(RationalAngle::new(1, 3).quarter_turns(), None);
    }

    #[test]
    fn gaussian_units() {
        let i = GaussInt::unit(1);
        assert_eq!(i.mul(&i), GaussInt::unit(2));
        assert_eq!(GaussInt::unit(1).add(&GaussInt::unit(3)), GaussInt::ZERO);
        assert_eq!(GaussInt::unit(0).add(&GaussInt::unit(2)), GaussInt::ZERO);
        assert!((GaussInt { re: 3, im: 4 }).abs() == 5.0);
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        let mut cache = HashMap::new();
        assert_eq!(cyclotomic(1, &mut cache), vec![-1, 1]);
        assert_eq!(cyclotomic(2, &mut cache), vec![1, 1]);
        assert_eq!(cyclotomic(4, &mut cache), vec![1, 0, 1]);
        assert_eq!(cyclotomic(6, &mut cache), vec![1, -1, 1]);
        assert_eq!(cyclotomic(8, &mut cache), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic(12, &mut cache), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn vanishing_root_sums() {
        // 1 + e^{i pi} = 0
        assert!(root_sum_is_zero(&[RationalAngle::zero(), RationalAngle::new(1, 1)]));
        // cube roots of unity
        assert!(root_sum_is_zero(&[
            RationalAngle::zero(),
            RationalAngle::new(2, 3),
            RationalAngle::new(4, 3),
        ]));
        // fifth roots of unity
        let fifths: Vec<_> = (0..5).map(|k| RationalAngle::new(2 * k, 5)).collect();
        assert!(root_sum_is_zero(&fifths));
        // mixed: {1, i, -1, -i}
        let quarters: Vec<_> = (0..4).map(|k| RationalAngle::new(k, 2)).collect();
        assert!(root_sum_is_zero(&quarters));
        // empty sum
        assert!(root_sum_is_zero(&[]));
    }

    #[test]
    fn non_vanishing_root_sums() {
        assert!(!root_sum_is_zero(&[RationalAngle::zero(), RationalAngle::new(1, 2)]));
        assert!(!root_sum_is_zero(&[RationalAngle::zero()]));
        // 1 + zeta_3 alone does not vanish
        assert!(!root_sum_is_zero(&[RationalAngle::zero(), RationalAngle::new(2, 3)]));
        // doubled root: 2*e^{i pi/3} + e^{i 4pi/3} is not zero
        assert!(!root_sum_is_zero(&[
            RationalAngle::new(1, 3),
            RationalAngle::new(1, 3),
            RationalAngle::new(4, 3),
        ]));
    }

    #[test]
    fn exact_test_matches_float_sum() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let len = rng.gen_range(1..=8);
            let angles: Vec<_> = (0..len)
                .map(|_| RationalAngle::new(rng.gen_range(-16..16), rng.gen_range(1..=8)))
                .collect();
            let (re, im) = root_sum_f64(&angles);
            let mag = (re * re + im * im).sqrt();
            let exact = root_sum_is_zero(&angles);
            // The float magnitude separates zero from nonzero by many orders
            // of magnitude at these sizes; the exact test must agree.
            assert_eq!(exact, mag < 1e-9, "angles {:?} mag {}", angles, mag);
        }
    }
}
