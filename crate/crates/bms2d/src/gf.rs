//! Exact arithmetic in GF(q), q = p^m, and an extension L = GF(q^s), via
//! discrete-log tables with Zech logarithms for addition.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Largest supported |L|, so full log/antilog tables always fit in memory.
pub const MAX_FIELD_SIZE: u64 = 1 << 20;

const NO_LOG: u32 = u32::MAX;

/// Parameters of the extension tower GF(p) ⊆ GF(q) ⊆ L with q = p^m and
/// L = GF(p^(m*s)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    /// Prime characteristic.
    pub p: u32,
    /// Base-field extension degree: the code alphabet is GF(p^m).
    pub m: u32,
    /// Further extension degree, chosen so that r1 and r2 divide |L| - 1.
    pub s: u32,
    /// Monic polynomial over GF(p) of degree m*s, coefficients low to high.
    /// Its residue class of X must be a multiplicative generator of L; this
    /// forces irreducibility and is checked at construction.
    pub modulus: Vec<u32>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u32),
    #[error("extension degrees must be positive")]
    ZeroDegree,
    #[error("field size {0} exceeds the table cap {MAX_FIELD_SIZE}")]
    TooLarge(u64),
    #[error("modulus must be monic of degree {expected} with coefficients below {p}")]
    BadModulus { expected: u32, p: u32 },
    #[error("modulus is reducible: X^{at} lies in a proper ideal")]
    Reducible { at: u32 },
    #[error("X has multiplicative order {got}, expected {want}; choose a primitive modulus")]
    NotPrimitive { got: u32, want: u32 },
    #[error("{n} does not divide the multiplicative order {order}")]
    OrderNotDividing { n: u32, order: u32 },
}

/// Element of L: zero, or a^k for the primitive element a fixed by the field
/// tables. Exponents are always reduced mod |L| - 1. Elements are meaningful
/// only relative to the `Field` that produced them.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FieldElement {
    Zero,
    Exp(u32),
}

impl FieldElement {
    pub const ONE: FieldElement = FieldElement::Exp(0);

    pub fn is_zero(self) -> bool {
        matches!(self, FieldElement::Zero)
    }

    /// Discrete log of a nonzero element.
    pub fn exponent(self) -> Option<u32> {
        match self {
            FieldElement::Zero => None,
            FieldElement::Exp(k) => Some(k),
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Zero => write!(f, "0"),
            FieldElement::Exp(0) => write!(f, "1"),
            FieldElement::Exp(1) => write!(f, "a"),
            FieldElement::Exp(k) => write!(f, "a^{k}"),
        }
    }
}

/// L = GF(p^(m*s)) with log/antilog tables over the packed polynomial basis
/// and a Zech table for addition. Immutable once built.
#[derive(Debug)]
pub struct Field {
    spec: FieldSpec,
    degree: u32,
    size: u64,
    order: u32,
    q: u64,
    /// exponent -> packed coefficient vector of a^k (digits base p).
    antilog: Vec<u32>,
    /// packed coefficient vector -> exponent; NO_LOG for zero.
    log: Vec<u32>,
    /// zech[k] = log(1 + a^k); NO_LOG when 1 + a^k = 0.
    zech: Vec<u32>,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Field {
    /// Builds the full log/antilog/Zech tables.
    ///
    /// # Errors
    /// Rejects non-prime characteristics, oversized fields, malformed moduli,
    /// and moduli whose residue of X does not generate the whole
    /// multiplicative group (this also rules out reducible moduli).
    pub fn new(spec: FieldSpec) -> Result<Field, FieldError> {
        if !is_prime(spec.p) {
            return Err(FieldError::NotPrime(spec.p));
        }
        if spec.m == 0 || spec.s == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let degree = spec.m * spec.s;
        let mut size: u64 = 1;
        for _ in 0..degree {
            size = size.saturating_mul(spec.p as u64);
            if size > MAX_FIELD_SIZE {
                return Err(FieldError::TooLarge(size));
            }
        }
        if spec.modulus.len() != degree as usize + 1
            || spec.modulus.last() != Some(&1)
            || spec.modulus.iter().any(|&c| c >= spec.p)
        {
            return Err(FieldError::BadModulus {
                expected: degree,
                p: spec.p,
            });
        }
        let order = (size - 1) as u32;
        let q = (spec.p as u64).pow(spec.m);

        let p = spec.p;
        let d = degree as usize;
        let pack = |digits: &[u32]| -> u32 {
            let mut v: u64 = 0;
            for &c in digits.iter().rev() {
                v = v * p as u64 + c as u64;
            }
            v as u32
        };

        let mut antilog = vec![0u32; order as usize];
        let mut log = vec![NO_LOG; size as usize];
        let mut cur = vec![0u32; d];
        cur[0] = 1;
        for k in 0..order {
            let packed = pack(&cur);
            if packed == 0 {
                return Err(FieldError::Reducible { at: k });
            }
            if log[packed as usize] != NO_LOG {
                return Err(FieldError::NotPrimitive {
                    got: k - log[packed as usize],
                    want: order,
                });
            }
            antilog[k as usize] = packed;
            log[packed as usize] = k;
            // cur *= X, reduced by the monic modulus.
            let carry = cur[d - 1];
            for i in (1..d).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if carry != 0 {
                for i in 0..d {
                    let sub = (carry * spec.modulus[i]) % p;
                    cur[i] = (cur[i] + p - sub) % p;
                }
            }
        }
        if pack(&cur) != antilog[0] {
            return Err(FieldError::NotPrimitive { got: order, want: order });
        }

        let add_packed = |x: u32, y: u32| -> u32 {
            if p == 2 {
                return x ^ y;
            }
            let (mut x, mut y, mut out, mut mult) = (x as u64, y as u64, 0u64, 1u64);
            for _ in 0..d {
                out += ((x + y) % p as u64) * mult;
                x /= p as u64;
                y /= p as u64;
                mult *= p as u64;
            }
            out as u32
        };
        let mut zech = vec![NO_LOG; order as usize];
        for k in 0..order as usize {
            let sum = add_packed(antilog[0], antilog[k]);
            zech[k] = if sum == 0 { NO_LOG } else { log[sum as usize] };
        }

        Ok(Field {
            spec,
            degree,
            size,
            order,
            q,
            antilog,
            log,
            zech,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    /// |L| - 1, the order of the multiplicative group.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Size of the base field GF(q) = GF(p^m).
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// a^k for arbitrary k, reduced mod |L| - 1.
    pub fn exp(&self, k: u64) -> FieldElement {
        FieldElement::Exp((k % self.order as u64) as u32)
    }

    pub fn primitive(&self) -> FieldElement {
        self.exp(1)
    }

    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        match (x, y) {
            (FieldElement::Zero, _) => y,
            (_, FieldElement::Zero) => x,
            (FieldElement::Exp(i), FieldElement::Exp(j)) => {
                debug_assert!(i < self.order && j < self.order);
                let d = (j + self.order - i) % self.order;
                match self.zech[d as usize] {
                    NO_LOG => FieldElement::Zero,
                    z => FieldElement::Exp((i + z) % self.order),
                }
            }
        }
    }

    pub fn neg(&self, x: FieldElement) -> FieldElement {
        if self.spec.p == 2 {
            return x;
        }
        match x {
            FieldElement::Zero => FieldElement::Zero,
            FieldElement::Exp(k) => FieldElement::Exp((k + self.order / 2) % self.order),
        }
    }

    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        match (x, y) {
            (FieldElement::Zero, _) | (_, FieldElement::Zero) => FieldElement::Zero,
            (FieldElement::Exp(i), FieldElement::Exp(j)) => {
                debug_assert!(i < self.order && j < self.order);
                FieldElement::Exp((i + j) % self.order)
            }
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self, x: FieldElement) -> FieldElement {
        match x {
            FieldElement::Zero => panic!("inverse of zero"),
            FieldElement::Exp(k) => FieldElement::Exp((self.order - k) % self.order),
        }
    }

    /// x / y; panics when y is zero.
    pub fn div(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.mul(x, self.inv(y))
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        match x {
            FieldElement::Zero => {
                if e == 0 {
                    FieldElement::ONE
                } else {
                    FieldElement::Zero
                }
            }
            FieldElement::Exp(k) => {
                let e = e % self.order as u64;
                FieldElement::Exp(((k as u64 * e) % self.order as u64) as u32)
            }
        }
    }

    /// The canonical element of multiplicative order exactly n: a^((|L|-1)/n).
    ///
    /// # Errors
    /// n must divide |L| - 1.
    pub fn element_of_order(&self, n: u32) -> Result<FieldElement, FieldError> {
        if n == 0 || self.order % n != 0 {
            return Err(FieldError::OrderNotDividing {
                n,
                order: self.order,
            });
        }
        Ok(FieldElement::Exp(self.order / n % self.order))
    }

    /// All elements of order exactly n, sorted by exponent.
    pub fn all_primitive_roots(&self, n: u32) -> Result<Vec<FieldElement>, FieldError> {
        if n == 0 || self.order % n != 0 {
            return Err(FieldError::OrderNotDividing {
                n,
                order: self.order,
            });
        }
        let step = self.order / n;
        let mut out: Vec<FieldElement> = (0..n)
            .filter(|&k| gcd(k, n) == 1)
            .map(|k| FieldElement::Exp((step as u64 * k as u64 % self.order as u64) as u32))
            .collect();
        out.sort_by_key(|e| e.exponent());
        Ok(out)
    }

    /// True iff x lies in the base field GF(q), i.e. x^q = x.
    pub fn base_field_membership(&self, x: FieldElement) -> bool {
        match x {
            FieldElement::Zero => true,
            FieldElement::Exp(k) => {
                let q = self.q % self.order as u64;
                (k as u64 * q) % self.order as u64 == k as u64
            }
        }
    }

    /// Coefficients of x over GF(p) in the polynomial basis, low to high.
    pub fn coeffs(&self, x: FieldElement) -> Vec<u32> {
        let mut packed = match x {
            FieldElement::Zero => 0u64,
            FieldElement::Exp(k) => self.antilog[k as usize] as u64,
        };
        let mut out = Vec::with_capacity(self.degree as usize);
        for _ in 0..self.degree {
            out.push((packed % self.spec.p as u64) as u32);
            packed /= self.spec.p as u64;
        }
        out
    }

    /// Inverse of `coeffs`.
    pub fn element_from_coeffs(&self, digits: &[u32]) -> FieldElement {
        assert_eq!(digits.len(), self.degree as usize);
        let mut packed: u64 = 0;
        for &c in digits.iter().rev() {
            debug_assert!(c < self.spec.p);
            packed = packed * self.spec.p as u64 + c as u64;
        }
        if packed == 0 {
            FieldElement::Zero
        } else {
            FieldElement::Exp(self.log[packed as usize])
        }
    }
}
