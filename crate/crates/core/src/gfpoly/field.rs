use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

struct FieldRepr {
    p: u32,
    e: u32,
    q: u32,
    /// Monic irreducible of degree e over F_p, little-endian, length e+1.
    /// Absent for prime fields.
    reduction: Option<Vec<u32>>,
    /// Discrete log / antilog tables w.r.t. a fixed generator (extension
    /// fields only). `exp` has length 2(q-1) so products of logs need no
    /// reduction.
    log: Vec<u16>,
    exp: Vec<u16>,
    inv: Vec<u16>,
}

/// A finite field F_q, q = p^e <= 2^16. Elements are encoded as integers in
/// 0..q: for extension fields, the code sum(d_i * p^i) stands for
/// sum(d_i * alpha^i) where alpha is a root of the reduction polynomial.
///
/// Cheap to clone; immutable after construction and shareable across threads.
#[derive(Clone)]
pub struct Field(Arc<FieldRepr>);

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// Builds F_{p^e}. When `reduction` is absent and e > 1, the
    /// lexicographically least monic irreducible of degree e (in index
    /// order) is selected. `reduction` is little-endian of length e+1
    /// with coefficients in 0..p.
    pub fn new(p: u64, e: u32, reduction: Option<&[u32]>) -> Result<Field> {
        if e == 0 {
            return Err(Error::InvalidParameter(
                "extension degree must be positive".into(),
            ));
        }
        if !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        let q = (p as u128).checked_pow(e).filter(|&q| q <= MAX_FIELD_SIZE as u128);
        let q = match q {
            Some(q) => q as u64,
            None => {
                return Err(Error::FieldTooLarge {
                    q: p.saturating_pow(e),
                })
            }
        };
        let p32 = p as u32;

        if e == 1 {
            if reduction.is_some() {
                return Err(Error::InvalidReduction(
                    "prime fields take no reduction polynomial".into(),
                ));
            }
            let mut inv = vec![0u16; q as usize];
            for a in 1..p {
                inv[a as usize] = pow_mod_u64(a, p - 2, p) as u16;
            }
            return Ok(Field(Arc::new(FieldRepr {
                p: p32,
                e,
                q: q as u32,
                reduction: None,
                log: Vec::new(),
                exp: Vec::new(),
                inv,
            })));
        }

        let red: Vec<u32> = match reduction {
            Some(r) => {
                if r.len() != e as usize + 1 || r[e as usize] != 1 {
                    return Err(Error::InvalidReduction(format!(
                        "expected a monic polynomial of degree {e}"
                    )));
                }
                if r.iter().any(|&c| c >= p32) {
                    return Err(Error::CoefficientOutOfRange {
                        value: *r.iter().find(|&&c| c >= p32).unwrap() as u64,
                        q: p,
                    });
                }
                if !fp_is_irreducible(r, p) {
                    return Err(Error::NotIrreducible);
                }
                r.to_vec()
            }
            None => default_reduction(p, e as usize)?,
        };

        // Raw non-table multiplication of element codes modulo the reduction.
        let mul_raw = |a: u32, b: u32| -> u32 { mul_noreduce_tables(a, b, p32, e as usize, &red) };

        // Find a generator of the multiplicative group and fill log/exp.
        let group = q - 1;
        let group_factors = prime_factors_u64(group);
        let gen = (2..q as u32)
            .find(|&g| {
                group_factors
                    .iter()
                    .all(|&r| pow_elem(g, group / r, mul_raw) != 1)
            })
            .expect("multiplicative group of a finite field is cyclic");

        let mut log = vec![0u16; q as usize];
        let mut exp = vec![0u16; 2 * group as usize];
        let mut acc = 1u32;
        for i in 0..group {
            exp[i as usize] = acc as u16;
            log[acc as usize] = i as u16;
            acc = mul_raw(acc, gen);
        }
        debug_assert_eq!(acc, 1);
        for i in 0..group {
            exp[(group + i) as usize] = exp[i as usize];
        }
        let mut inv = vec![0u16; q as usize];
        for a in 1..q as usize {
            inv[a] = exp[(group as usize) - log[a] as usize];
        }

        Ok(Field(Arc::new(FieldRepr {
            p: p32,
            e,
            q: q as u32,
            reduction: Some(red),
            log,
            exp,
            inv,
        })))
    }

    /// Builds the field of size q, deriving p and e. Errors when q is not a
    /// prime power.
    pub fn with_size(q: u64) -> Result<Field> {
        if q < 2 {
            return Err(Error::NotPrimePower(q));
        }
        let p = (2..=q).find(|&d| q % d == 0).unwrap();
        let mut e = 0u32;
        let mut rest = q;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        if rest != 1 {
            return Err(Error::NotPrimePower(q));
        }
        Field::new(p, e, None)
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }

    pub fn e(&self) -> u32 {
        self.0.e
    }

    pub fn q(&self) -> u32 {
        self.0.q
    }

    /// Reduction polynomial coefficients (little-endian, length e+1), absent
    /// for prime fields.
    pub fn reduction(&self) -> Option<&[u32]> {
        self.0.reduction.as_deref()
    }

    /// Index of the reduction polynomial among monic degree-e polynomials
    /// over F_p; 0 for prime fields.
    pub fn reduction_index(&self) -> u64 {
        match &self.0.reduction {
            None => 0,
            Some(r) => {
                let p = self.0.p as u64;
                let mut idx = 0u64;
                for i in (0..self.0.e as usize).rev() {
                    idx = idx * p + r[i] as u64;
                }
                idx
            }
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let r = &*self.0;
        debug_assert!(a < r.q && b < r.q);
        if r.e == 1 {
            let s = a + b;
            if s >= r.q {
                s - r.q
            } else {
                s
            }
        } else if r.p == 2 {
            a ^ b
        } else {
            digitwise(a, b, r.p, r.e, |x, y, p| (x + y) % p)
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        let r = &*self.0;
        debug_assert!(a < r.q && b < r.q);
        if r.e == 1 {
            if a >= b {
                a - b
            } else {
                a + r.q - b
            }
        } else if r.p == 2 {
            a ^ b
        } else {
            digitwise(a, b, r.p, r.e, |x, y, p| (x + p - y) % p)
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let r = &*self.0;
        debug_assert!(a < r.q && b < r.q);
        if a == 0 || b == 0 {
            return 0;
        }
        if r.e == 1 {
            ((a as u64 * b as u64) % r.q as u64) as u32
        } else {
            r.exp[r.log[a as usize] as usize + r.log[b as usize] as usize] as u32
        }
    }

    /// Multiplicative inverse; panics on zero.
    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "zero has no inverse");
        self.0.inv[a as usize] as u32
    }

    pub fn pow(&self, a: u32, mut k: u64) -> u32 {
        if k == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let mut base = a;
        let mut acc = 1u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            k >>= 1;
        }
        acc
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.e == other.0.e
                && self.0.reduction == other.0.reduction)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.e == 1 {
            write!(f, "F_{}", self.0.q)
        } else {
            write!(f, "F_{} (= F_{}^{})", self.0.q, self.0.p, self.0.e)
        }
    }
}

#[inline]
fn digitwise(a: u32, b: u32, p: u32, e: u32, op: fn(u32, u32, u32) -> u32) -> u32 {
    let mut out = 0u32;
    let mut scale = 1u32;
    let (mut x, mut y) = (a, b);
    for _ in 0..e {
        out += op(x % p, y % p, p) * scale;
        x /= p;
        y /= p;
        scale *= p;
    }
    out
}

/// Schoolbook multiply-and-reduce on element codes, used only during table
/// construction.
fn mul_noreduce_tables(a: u32, b: u32, p: u32, e: usize, red: &[u32]) -> u32 {
    let pl = p as u64;
    let mut da = [0u64; 17];
    let mut db = [0u64; 17];
    let (mut x, mut y) = (a as u64, b as u64);
    for i in 0..e {
        da[i] = x % pl;
        db[i] = y % pl;
        x /= pl;
        y /= pl;
    }
    let mut prod = [0u64; 33];
    for i in 0..e {
        if da[i] == 0 {
            continue;
        }
        for j in 0..e {
            prod[i + j] = (prod[i + j] + da[i] * db[j]) % pl;
        }
    }
    // X^e = -(red[0] + ... + red[e-1] X^(e-1))
    for k in (e..=2 * e - 2).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for i in 0..e {
            let sub = (c * red[i] as u64) % pl;
            prod[k - e + i] = (prod[k - e + i] + pl - sub) % pl;
        }
    }
    let mut out = 0u64;
    for i in (0..e).rev() {
        out = out * pl + prod[i];
    }
    out as u32
}

fn pow_elem(a: u32, mut k: u64, mul: impl Fn(u32, u32) -> u32) -> u32 {
    let mut base = a;
    let mut acc = 1u32;
    while k > 0 {
        if k & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        k >>= 1;
    }
    acc
}

/// Lexicographically least (by index) monic irreducible of degree e over F_p.
fn default_reduction(p: u64, e: usize) -> Result<Vec<u32>> {
    let count = (p as u128).pow(e as u32);
    let mut cand = vec![0u32; e + 1];
    cand[e] = 1;
    for idx in 0..count {
        let mut v = idx;
        for c in cand.iter_mut().take(e) {
            *c = (v % p as u128) as u32;
            v /= p as u128;
        }
        if fp_is_irreducible(&cand, p) {
            return Ok(cand);
        }
    }
    unreachable!("irreducibles of every degree exist over F_p")
}

/// Trial division against all monic polynomials of degree <= e/2.
fn fp_is_irreducible(poly: &[u32], p: u64) -> bool {
    let e = poly.len() - 1;
    if e == 0 {
        return false;
    }
    if e == 1 {
        return true;
    }
    if poly[0] == 0 {
        return false; // divisible by X
    }
    let mut div = Vec::new();
    for d in 1..=e / 2 {
        let count = (p as u128).pow(d as u32);
        for idx in 0..count {
            div.clear();
            let mut v = idx;
            for _ in 0..d {
                div.push((v % p as u128) as u32);
                v /= p as u128;
            }
            div.push(1);
            if fp_rem_is_zero(poly, &div, p) {
                return false;
            }
        }
    }
    true
}

/// Whether `den` (monic) divides `num`, both over F_p.
fn fp_rem_is_zero(num: &[u32], den: &[u32], p: u64) -> bool {
    let mut rem: Vec<u64> = num.iter().map(|&c| c as u64).collect();
    let dd = den.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let top = rem.len() - 1;
        if lead != 0 {
            for i in 0..dd {
                let sub = (lead * den[i] as u64) % p;
                rem[top - dd + i] = (rem[top - dd + i] + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn prime_factors_u64(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn pow_mod_u64(a: u64, mut k: u64, m: u64) -> u64 {
    let mut base = a % m;
    let mut acc = 1u64;
    while k > 0 {
        if k & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        k >>= 1;
    }
    acc
}
