//! Coefficient fields and their elements.
//!
//! A [`Field`] is a lightweight descriptor; elements ([`Coeff`]) carry enough
//! information to do arithmetic on their own, so polynomial code never needs
//! to thread a field context through inner loops.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A coefficient field.
#[derive(Clone, Debug)]
pub enum Field {
    /// The rational numbers.
    Rational,
    /// The prime field with the given modulus.
    Prime(u64),
    /// A simple algebraic extension `base[a]/(mu(a))`.
    Extension(Arc<ExtensionField>),
}

/// Data of a simple extension `base[a]/(mu(a))` with `mu` monic irreducible.
#[derive(Debug)]
pub struct ExtensionField {
    base: Field,
    generator: String,
    /// Monic minimal polynomial, lowest degree first.
    minpoly: Vec<Coeff>,
}

impl PartialEq for ExtensionField {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base && self.generator == other.generator && self.minpoly == other.minpoly
    }
}

impl Eq for ExtensionField {}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Field::Rational, Field::Rational) => true,
            (Field::Prime(p), Field::Prime(q)) => p == q,
            (Field::Extension(a), Field::Extension(b)) => Arc::ptr_eq(a, b) || a == b,
            _ => false,
        }
    }
}

impl Eq for Field {}

impl ExtensionField {
    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn generator(&self) -> &str {
        &self.generator
    }

    /// Monic minimal polynomial, lowest degree coefficient first.
    pub fn minpoly(&self) -> &[Coeff] {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }
}

impl Field {
    /// Prime field `F_p`; `p` must be prime.
    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime_u64(p) {
            return Err(Error::UnsupportedField(format!("modulus {p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    /// Simple extension `base[generator]/(minpoly)`.
    ///
    /// `minpoly` is given lowest degree first and is normalized to be monic.
    /// Irreducibility is checked: exactly over prime fields, and over the
    /// rationals by a modular shortcut followed by Kronecker trial
    /// factorization up to half the degree.
    pub fn extension(base: Field, generator: &str, minpoly: Vec<Coeff>) -> Result<Field> {
        if matches!(base, Field::Extension(_)) {
            return Err(Error::UnsupportedField("towers of extensions are not supported".into()));
        }
        let mut mu = upoly::trim(minpoly);
        if mu.len() < 2 {
            return Err(Error::UnsupportedField("minimal polynomial must have degree >= 1".into()));
        }
        for c in &mu {
            if c.field_of() != base {
                return Err(Error::Structural("minimal polynomial is not over the base field".into()));
            }
        }
        let lc_inv = mu.last().unwrap().inv().expect("nonzero leading coefficient");
        for c in mu.iter_mut() {
            *c = &*c * &lc_inv;
        }
        if !irreducible::is_irreducible(&base, &mu)? {
            return Err(Error::UnsupportedField(format!(
                "minimal polynomial for `{generator}` is reducible"
            )));
        }
        Ok(Field::Extension(Arc::new(ExtensionField {
            base,
            generator: generator.to_string(),
            minpoly: mu,
        })))
    }

    /// Characteristic; 0 for the rationals.
    pub fn characteristic(&self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => *p,
            Field::Extension(e) => e.base.characteristic(),
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Rational => Coeff::Rational(BigRational::zero()),
            Field::Prime(p) => Coeff::Modular(Modular::new(0, *p)),
            Field::Extension(e) => Coeff::Algebraic(Algebraic {
                field: e.clone(),
                coords: vec![e.base.zero(); e.degree()],
            }),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        self.from_bigint(&BigInt::from(v))
    }

    pub fn from_bigint(&self, v: &BigInt) -> Coeff {
        match self {
            Field::Rational => Coeff::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let m = v.mod_floor(&BigInt::from(*p));
                Coeff::Modular(Modular::new(m.to_u64().unwrap(), *p))
            }
            Field::Extension(e) => self.embed_base(e.base.from_bigint(v)),
        }
    }

    /// Maps a rational number into the field; fails when the denominator
    /// vanishes in positive characteristic.
    pub fn from_rational(&self, q: &BigRational) -> Result<Coeff> {
        let num = self.from_bigint(q.numer());
        let den = self.from_bigint(q.denom());
        num.checked_div(&den)
            .ok_or_else(|| Error::Domain(format!("denominator {} vanishes in characteristic {}", q.denom(), self.characteristic())))
    }

    fn embed_base(&self, c: Coeff) -> Coeff {
        match self {
            Field::Extension(e) => {
                let mut coords = vec![e.base.zero(); e.degree()];
                coords[0] = c;
                Coeff::Algebraic(Algebraic { field: e.clone(), coords })
            }
            _ => c,
        }
    }

    /// The adjoined generator of an extension field.
    pub fn generator(&self) -> Option<Coeff> {
        match self {
            Field::Extension(e) => {
                let mut coords = vec![e.base.zero(); e.degree()];
                if e.degree() == 1 {
                    coords[0] = e.minpoly[0].neg();
                } else {
                    coords[1] = e.base.one();
                }
                Some(Coeff::Algebraic(Algebraic { field: e.clone(), coords }))
            }
            _ => None,
        }
    }

    pub fn generator_name(&self) -> Option<&str> {
        match self {
            Field::Extension(e) => Some(&e.generator),
            _ => None,
        }
    }

    /// Whether elements of `sub` can be mapped into `self` by [`Field::embed`].
    pub fn contains(&self, sub: &Field) -> bool {
        self == sub || matches!(self, Field::Extension(e) if e.base == *sub)
    }

    /// Maps an element of a subfield into this field.
    pub fn embed(&self, c: &Coeff) -> Result<Coeff> {
        let f = c.field_of();
        if f == *self {
            return Ok(c.clone());
        }
        match self {
            Field::Extension(e) if e.base == f => Ok(self.embed_base(c.clone())),
            _ => Err(Error::Structural(format!("cannot embed an element of {f} into {self}"))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F({p})"),
            Field::Extension(e) => {
                write!(f, "{}[{}]/(", e.base, e.generator)?;
                let mut first = true;
                for (i, c) in e.minpoly.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let (neg, abs) = c.sign_split();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    first = false;
                    let g = &e.generator;
                    match i {
                        0 => write!(f, "{abs}")?,
                        _ => {
                            if !abs.is_one() {
                                write!(f, "{abs}*")?;
                            }
                            if i == 1 {
                                write!(f, "{g}")?;
                            } else {
                                write!(f, "{g}^{i}")?;
                            }
                        }
                    }
                }
                write!(f, ")")
            }
        }
    }
}

/// Element of a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Modular {
    value: u64,
    modulus: u64,
}

impl Modular {
    pub fn new(value: u64, modulus: u64) -> Self {
        Modular {
            value: value % modulus,
            modulus,
        }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    fn add(self, o: Self) -> Self {
        let s = (self.value as u128 + o.value as u128) % self.modulus as u128;
        Modular::new(s as u64, self.modulus)
    }

    fn sub(self, o: Self) -> Self {
        let s = (self.value as u128 + self.modulus as u128 - o.value as u128) % self.modulus as u128;
        Modular::new(s as u64, self.modulus)
    }

    fn mul(self, o: Self) -> Self {
        let s = (self.value as u128 * o.value as u128) % self.modulus as u128;
        Modular::new(s as u64, self.modulus)
    }

    fn neg(self) -> Self {
        Modular::new((self.modulus - self.value) % self.modulus, self.modulus)
    }

    fn inv(self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        let (mut a, mut b) = (self.value as i128, self.modulus as i128);
        let (mut x0, mut x1) = (1i128, 0i128);
        while b != 0 {
            let q = a / b;
            (a, b) = (b, a - q * b);
            (x0, x1) = (x1, x0 - q * x1);
        }
        let m = self.modulus as i128;
        Some(Modular::new(x0.rem_euclid(m) as u64, self.modulus))
    }
}

/// Element of a simple extension, stored as coordinates in the power basis.
#[derive(Clone, Debug)]
pub struct Algebraic {
    field: Arc<ExtensionField>,
    coords: Vec<Coeff>,
}

impl Algebraic {
    pub fn coords(&self) -> &[Coeff] {
        &self.coords
    }

    pub fn field(&self) -> &Arc<ExtensionField> {
        &self.field
    }

    /// Builds an element from (possibly too many) power-basis coordinates,
    /// reducing modulo the minimal polynomial.
    pub fn from_coords(field: Arc<ExtensionField>, coords: Vec<Coeff>) -> Self {
        let reduced = upoly::rem(&coords, &field.minpoly, &field.base);
        let mut c = reduced;
        c.resize(field.degree(), field.base.zero());
        Algebraic { field, coords: c }
    }
}

impl PartialEq for Algebraic {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.field, &other.field) || self.field == other.field) && self.coords == other.coords
    }
}

/// A field element.
#[derive(Clone, Debug)]
pub enum Coeff {
    Rational(BigRational),
    Modular(Modular),
    Algebraic(Algebraic),
}

impl PartialEq for Coeff {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => a == b,
            (Coeff::Modular(a), Coeff::Modular(b)) => a == b,
            (Coeff::Algebraic(a), Coeff::Algebraic(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Coeff {}

fn mismatch() -> ! {
    panic!("coefficient field mismatch")
}

impl Coeff {
    pub fn rational(n: i64, d: i64) -> Coeff {
        Coeff::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn field_of(&self) -> Field {
        match self {
            Coeff::Rational(_) => Field::Rational,
            Coeff::Modular(m) => Field::Prime(m.modulus),
            Coeff::Algebraic(a) => Field::Extension(a.field.clone()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_zero(),
            Coeff::Modular(m) => m.value == 0,
            Coeff::Algebraic(a) => a.coords.iter().all(Coeff::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coeff::Rational(q) => q.is_one(),
            Coeff::Modular(m) => m.value == 1 % m.modulus,
            Coeff::Algebraic(a) => a.coords[0].is_one() && a.coords[1..].iter().all(Coeff::is_zero),
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coeff::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn neg(&self) -> Coeff {
        match self {
            Coeff::Rational(q) => Coeff::Rational(-q),
            Coeff::Modular(m) => Coeff::Modular(m.neg()),
            Coeff::Algebraic(a) => Coeff::Algebraic(Algebraic {
                field: a.field.clone(),
                coords: a.coords.iter().map(Coeff::neg).collect(),
            }),
        }
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a + b),
            (Coeff::Modular(a), Coeff::Modular(b)) if a.modulus == b.modulus => Coeff::Modular(a.add(*b)),
            (Coeff::Algebraic(a), Coeff::Algebraic(b)) => Coeff::Algebraic(Algebraic {
                field: a.field.clone(),
                coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x.add(y)).collect(),
            }),
            _ => mismatch(),
        }
    }

    pub fn sub(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a - b),
            (Coeff::Modular(a), Coeff::Modular(b)) if a.modulus == b.modulus => Coeff::Modular(a.sub(*b)),
            (Coeff::Algebraic(a), Coeff::Algebraic(b)) => Coeff::Algebraic(Algebraic {
                field: a.field.clone(),
                coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x.sub(y)).collect(),
            }),
            _ => mismatch(),
        }
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        match (self, o) {
            (Coeff::Rational(a), Coeff::Rational(b)) => Coeff::Rational(a * b),
            (Coeff::Modular(a), Coeff::Modular(b)) if a.modulus == b.modulus => Coeff::Modular(a.mul(*b)),
            (Coeff::Algebraic(a), Coeff::Algebraic(b)) => {
                let prod = upoly::mul(&a.coords, &b.coords, &a.field.base);
                Coeff::Algebraic(Algebraic::from_coords(a.field.clone(), prod))
            }
            _ => mismatch(),
        }
    }

    pub fn inv(&self) -> Option<Coeff> {
        match self {
            Coeff::Rational(q) => (!q.is_zero()).then(|| Coeff::Rational(q.recip())),
            Coeff::Modular(m) => m.inv().map(Coeff::Modular),
            Coeff::Algebraic(a) => {
                if self.is_zero() {
                    return None;
                }
                let base = &a.field.base;
                let (g, s, _) = upoly::ext_gcd(&upoly::trim(a.coords.clone()), &a.field.minpoly, base);
                // mu is irreducible, so the gcd is a nonzero constant
                let ginv = g[0].inv()?;
                let coords = s.iter().map(|c| c.mul(&ginv)).collect();
                Some(Coeff::Algebraic(Algebraic::from_coords(a.field.clone(), coords)))
            }
        }
    }

    pub fn checked_div(&self, o: &Coeff) -> Option<Coeff> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, mut e: u64) -> Coeff {
        let mut base = self.clone();
        let mut acc = self.field_of().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Splits off a printable sign: rationals (and algebraic elements with a
    /// single rational coordinate) report negativity, everything else is
    /// treated as positive.
    pub fn sign_split(&self) -> (bool, Coeff) {
        match self {
            Coeff::Rational(q) if q.is_negative() => (true, Coeff::Rational(-q)),
            Coeff::Algebraic(a) => {
                let nz: Vec<_> = a.coords.iter().filter(|c| !c.is_zero()).collect();
                if nz.len() == 1 && matches!(nz[0], Coeff::Rational(q) if q.is_negative()) {
                    (true, self.neg())
                } else {
                    (false, self.clone())
                }
            }
            _ => (false, self.clone()),
        }
    }

    /// Whether the printed form needs parentheses when used as a factor.
    pub fn needs_parens(&self) -> bool {
        match self {
            Coeff::Algebraic(a) => a.coords.iter().filter(|c| !c.is_zero()).count() > 1,
            _ => false,
        }
    }

    /// Total order used only for deterministic tie-breaking and hashing-free
    /// canonical forms; not compatible with field arithmetic.
    pub fn canonical_cmp(&self, other: &Coeff) -> Ordering {
        match (self, other) {
            (Coeff::Rational(a), Coeff::Rational(b)) => a.cmp(b),
            (Coeff::Modular(a), Coeff::Modular(b)) => a.value.cmp(&b.value),
            (Coeff::Algebraic(a), Coeff::Algebraic(b)) => {
                for (x, y) in a.coords.iter().zip(&b.coords) {
                    let o = x.canonical_cmp(y);
                    if o != Ordering::Equal {
                        return o;
                    }
                }
                Ordering::Equal
            }
            _ => mismatch(),
        }
    }
}

impl std::ops::Add for &Coeff {
    type Output = Coeff;
    fn add(self, o: &Coeff) -> Coeff {
        Coeff::add(self, o)
    }
}

impl std::ops::Sub for &Coeff {
    type Output = Coeff;
    fn sub(self, o: &Coeff) -> Coeff {
        Coeff::sub(self, o)
    }
}

impl std::ops::Mul for &Coeff {
    type Output = Coeff;
    fn mul(self, o: &Coeff) -> Coeff {
        Coeff::mul(self, o)
    }
}

impl std::ops::Neg for &Coeff {
    type Output = Coeff;
    fn neg(self) -> Coeff {
        Coeff::neg(self)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Coeff::Modular(m) => write!(f, "{}", m.value),
            Coeff::Algebraic(a) => {
                let g = &a.field.generator;
                let mut first = true;
                for (i, c) in a.coords.iter().enumerate().rev() {
                    if c.is_zero() {
                        continue;
                    }
                    let (neg, abs) = c.sign_split();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    first = false;
                    if i == 0 {
                        write!(f, "{abs}")?;
                    } else {
                        if !abs.is_one() {
                            write!(f, "{abs}*")?;
                        }
                        if i == 1 {
                            write!(f, "{g}")?;
                        } else {
                            write!(f, "{g}^{i}")?;
                        }
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

/// Deterministic primality for 64-bit integers (Miller-Rabin with a fixed
/// witness set that is exact below 2^64).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in WITNESSES {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Dense univariate polynomials over a base field, lowest degree first.
pub(crate) mod upoly {
    use super::{Coeff, Field};

    pub fn trim(mut p: Vec<Coeff>) -> Vec<Coeff> {
        while p.last().is_some_and(Coeff::is_zero) {
            p.pop();
        }
        p
    }

    pub fn add(a: &[Coeff], b: &[Coeff], field: &Field) -> Vec<Coeff> {
        let n = a.len().max(b.len());
        let z = field.zero();
        trim((0..n)
            .map(|i| a.get(i).unwrap_or(&z).add(b.get(i).unwrap_or(&z)))
            .collect())
    }

    pub fn sub(a: &[Coeff], b: &[Coeff], field: &Field) -> Vec<Coeff> {
        let n = a.len().max(b.len());
        let z = field.zero();
        trim((0..n)
            .map(|i| a.get(i).unwrap_or(&z).sub(b.get(i).unwrap_or(&z)))
            .collect())
    }

    pub fn mul(a: &[Coeff], b: &[Coeff], field: &Field) -> Vec<Coeff> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![field.zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        trim(out)
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(a: &[Coeff], b: &[Coeff], field: &Field) -> (Vec<Coeff>, Vec<Coeff>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lc_inv = b.last().unwrap().inv().expect("division by zero polynomial");
        let mut q = vec![field.zero(); r.len() - b.len() + 1];
        while r.len() >= b.len() && !r.is_empty() {
            let shift = r.len() - b.len();
            let c = r.last().unwrap().mul(&lc_inv);
            for (i, bc) in b.iter().enumerate() {
                r[shift + i] = r[shift + i].sub(&c.mul(bc));
            }
            q[shift] = c;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn rem(a: &[Coeff], b: &[Coeff], field: &Field) -> Vec<Coeff> {
        divrem(a, b, field).1
    }

    pub fn monic(p: Vec<Coeff>) -> Vec<Coeff> {
        match p.last() {
            None => p,
            Some(lc) => {
                let inv = lc.inv().unwrap();
                p.iter().map(|c| c.mul(&inv)).collect()
            }
        }
    }

    /// Extended Euclid: returns `(g, s, t)` with `s*a + t*b = g`.
    pub fn ext_gcd(a: &[Coeff], b: &[Coeff], field: &Field) -> (Vec<Coeff>, Vec<Coeff>, Vec<Coeff>) {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
        let (mut s0, mut s1) = (vec![field.one()], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![field.one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, field);
            let s2 = sub(&s0, &mul(&q, &s1, field), field);
            let t2 = sub(&t0, &mul(&q, &t1, field), field);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        (r0, s0, t0)
    }

    pub fn gcd(a: &[Coeff], b: &[Coeff], field: &Field) -> Vec<Coeff> {
        monic(ext_gcd(a, b, field).0)
    }

    pub fn powmod(base: &[Coeff], mut e: u128, m: &[Coeff], field: &Field) -> Vec<Coeff> {
        let mut acc = vec![field.one()];
        let mut b = rem(base, m, field);
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(&mul(&acc, &b, field), m, field);
            }
            b = rem(&mul(&b, &b, field), m, field);
            e >>= 1;
        }
        acc
    }
}

mod irreducible {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    use super::{upoly, Coeff, Field, Modular};
    use crate::error::{Error, Result};

    const KRONECKER_BUDGET: usize = 200_000;

    pub fn is_irreducible(base: &Field, mu: &[Coeff]) -> Result<bool> {
        let deg = mu.len() - 1;
        if deg == 1 {
            return Ok(true);
        }
        match base {
            Field::Prime(p) => Ok(ben_or(mu, *p, base)),
            Field::Rational => over_rationals(mu),
            Field::Extension(_) => Err(Error::UnsupportedField("towers of extensions".into())),
        }
    }

    /// Ben-Or test: no irreducible factor of degree <= deg/2.
    fn ben_or(mu: &[Coeff], p: u64, field: &Field) -> bool {
        let deg = mu.len() - 1;
        let x = vec![field.zero(), field.one()];
        let mut h = x.clone();
        for _ in 0..deg / 2 {
            h = upoly::powmod(&h, p as u128, mu, field);
            let diff = upoly::sub(&h, &x, field);
            let g = upoly::gcd(mu, &diff, field);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    fn integer_primitive(mu: &[Coeff]) -> Vec<BigInt> {
        let qs: Vec<&BigRational> = mu.iter().map(|c| c.as_rational().unwrap()).collect();
        let lcm = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let ints: Vec<BigInt> = qs.iter().map(|q| (q.numer() * &lcm) / q.denom()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        ints.into_iter().map(|v| v / &g).collect()
    }

    fn eval_int(p: &[BigInt], a: &BigInt) -> BigInt {
        p.iter().rev().fold(BigInt::zero(), |acc, c| acc * a + c)
    }

    fn over_rationals(mu: &[Coeff]) -> Result<bool> {
        let ints = integer_primitive(mu);
        let deg = ints.len() - 1;
        // modular shortcut: irreducible mod p with the same degree implies
        // irreducible over Q
        const SMALL_PRIMES: [u64; 20] = [3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73];
        for p in SMALL_PRIMES {
            let pb = BigInt::from(p);
            if (ints[deg].clone() % &pb).is_zero() {
                continue;
            }
            let field = Field::Prime(p);
            let red: Vec<Coeff> = ints
                .iter()
                .map(|c| Coeff::Modular(Modular::new(c.mod_floor(&pb).to_u64().unwrap(), p)))
                .collect();
            let red = upoly::monic(red);
            let deriv: Vec<Coeff> = red
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&field.from_i64(i as i64)))
                .collect();
            let squarefree = upoly::gcd(&red, &deriv, &field).len() == 1;
            if squarefree && ben_or(&red, p, &field) {
                return Ok(true);
            }
        }
        kronecker(&ints)
    }

    fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
        let n = n.abs();
        let limit = BigInt::from(1u64 << 40);
        if n > limit {
            return Err(Error::UnsupportedField("irreducibility check: value too large to factor".into()));
        }
        let v = n.to_u64().unwrap();
        let mut out = Vec::new();
        let mut d = 1u64;
        while d * d <= v {
            if v.is_multiple_of(d) {
                out.push(BigInt::from(d));
                if d * d != v {
                    out.push(BigInt::from(v / d));
                }
            }
            d += 1;
        }
        Ok(out)
    }

    /// Kronecker's method: search for an integer factor of degree e <= deg/2
    /// by interpolating through divisors of values at e+1 integer points.
    fn kronecker(p: &[BigInt]) -> Result<bool> {
        let deg = p.len() - 1;
        let mut points = Vec::new();
        let mut k: i64 = 0;
        while points.len() < deg / 2 + 1 {
            let a = BigInt::from(k);
            let v = eval_int(p, &a);
            if v.is_zero() {
                return Ok(false);
            }
            points.push((a, v));
            k = if k <= 0 { -k + 1 } else { -k };
        }
        let qp: Vec<Coeff> = p.iter().map(|c| Coeff::Rational(BigRational::from_integer(c.clone()))).collect();
        let mut work = 0usize;
        for e in 1..=deg / 2 {
            let pts = &points[..=e];
            let divs: Vec<Vec<BigInt>> = pts.iter().map(|(_, v)| divisors(v)).collect::<Result<_>>()?;
            let mut idx = vec![0usize; e + 1];
            let mut signs = vec![false; e + 1];
            loop {
                work += 1;
                if work > KRONECKER_BUDGET {
                    return Err(Error::UnsupportedField("irreducibility check exceeded its search budget".into()));
                }
                let values: Vec<BigInt> = (0..=e)
                    .map(|i| if signs[i] { -divs[i][idx[i]].clone() } else { divs[i][idx[i]].clone() })
                    .collect();
                let cand = interpolate(pts, &values);
                if cand.len() == e + 1 {
                    let (_, r) = upoly::divrem(&qp, &cand, &Field::Rational);
                    if r.is_empty() {
                        return Ok(false);
                    }
                }
                // odometer over divisor choices and signs (first sign fixed)
                let mut i = 0;
                loop {
                    if i > e {
                        break;
                    }
                    if i > 0 && !signs[i] {
                        signs[i] = true;
                        break;
                    }
                    signs[i] = false;
                    idx[i] += 1;
                    if idx[i] < divs[i].len() {
                        break;
                    }
                    idx[i] = 0;
                    i += 1;
                }
                if i > e {
                    break;
                }
            }
        }
        Ok(true)
    }

    fn interpolate(pts: &[(BigInt, BigInt)], values: &[BigInt]) -> Vec<Coeff> {
        let field = Field::Rational;
        let mut acc: Vec<Coeff> = Vec::new();
        for (i, (xi, _)) in pts.iter().enumerate() {
            let mut basis = vec![field.one()];
            let mut denom = BigRational::one();
            for (j, (xj, _)) in pts.iter().enumerate() {
                if i == j {
                    continue;
                }
                let lin = vec![Coeff::Rational(BigRational::from_integer(-xj.clone())), field.one()];
                basis = upoly::mul(&basis, &lin, &field);
                denom *= BigRational::from_integer(xi - xj);
            }
            let scale = Coeff::Rational(BigRational::from_integer(values[i].clone()) / denom);
            let term: Vec<Coeff> = basis.iter().map(|c| c.mul(&scale)).collect();
            acc = upoly::add(&acc, &term, &field);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Coeff {
        Field::Rational.from_i64(n)
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = Field::prime(5).unwrap();
        let a = f.from_i64(2);
        let b = f.from_i64(3);
        assert!((&a + &b).is_zero());
        assert_eq!(&a * &b, f.one());
        assert_eq!(a.inv().unwrap(), f.from_i64(3));
        assert!(Field::prime(91).is_err());
    }

    #[test]
    fn rational_to_prime_field() {
        let f = Field::Prime(7);
        let half = f.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        assert_eq!(&half * &f.from_i64(2), f.one());
        assert!(f.from_rational(&BigRational::new(1.into(), 7.into())).is_err());
    }

    #[test]
    fn quadratic_extension() {
        // Q(sqrt 2)
        let k = Field::extension(Field::Rational, "a", vec![q(-2), q(0), q(1)]).unwrap();
        let a = k.generator().unwrap();
        assert_eq!(&a * &a, k.from_i64(2));
        let one_plus_a = &k.one() + &a;
        let inv = one_plus_a.inv().unwrap();
        assert!((&inv * &one_plus_a).is_one());
        assert_eq!(one_plus_a.to_string(), "a + 1");
    }

    #[test]
    fn reducible_minimal_polynomials_rejected() {
        // x^2 - 1, x^4 + 4 = (x^2+2x+2)(x^2-2x+2), x^4 - 4x^2 + 4... (x^2-2)^2
        assert!(Field::extension(Field::Rational, "a", vec![q(-1), q(0), q(1)]).is_err());
        assert!(Field::extension(Field::Rational, "a", vec![q(4), q(0), q(0), q(0), q(1)]).is_err());
        assert!(Field::extension(Field::Rational, "a", vec![q(4), q(0), q(-4), q(0), q(1)]).is_err());
        // x^2 + 1 over F_5 splits, over F_7 it does not
        let f5 = Field::Prime(5);
        assert!(Field::extension(f5.clone(), "i", vec![f5.one(), f5.zero(), f5.one()]).is_err());
        let f7 = Field::Prime(7);
        assert!(Field::extension(f7.clone(), "i", vec![f7.one(), f7.zero(), f7.one()]).is_ok());
    }

    #[test]
    fn irreducible_quartic_without_modular_witness() {
        // x^4 + 1 is reducible modulo every prime but irreducible over Q
        assert!(Field::extension(Field::Rational, "a", vec![q(1), q(0), q(0), q(0), q(1)]).is_ok());
    }

    #[test]
    fn miller_rabin() {
        assert!(is_prime_u64(101));
        assert!(is_prime_u64(18446744073709551557));
        assert!(!is_prime_u64(561));
        assert!(!is_prime_u64(1));
    }
}
