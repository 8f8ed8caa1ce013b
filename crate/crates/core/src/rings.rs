//! Finite commutative local rings with tabulated arithmetic.
//!
//! Three kinds are supported, each named by a `kind:n` descriptor string:
//! * `zmod:n` for Z/nZ with n a prime power,
//! * `gf:q` for the field with q elements,
//! * `dual:q` for F_q[eps] with eps^2 = 0.
//!
//! Elements are dense codes `0..size` (u16). For `zmod` the code is the
//! integer representative; for `gf` it packs the coefficient vector of the
//! element base p; for `dual` it is `a + q * b` for the element a + b eps.
//! All binary operations are table lookups, so hot loops never branch on the
//! ring kind.

use crate::error::{Error, Result};
use crate::roots::Family;
use std::fmt;
use std::str::FromStr;

pub const RING_SIZE_CAP: usize = 1024;

const NO_INV: u16 = u16::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Zmod,
    Gf,
    Dual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingDescriptor {
    pub kind: RingKind,
    pub n: usize,
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            RingKind::Zmod => "zmod",
            RingKind::Gf => "gf",
            RingKind::Dual => "dual",
        };
        write!(f, "{}:{}", kind, self.n)
    }
}

impl FromStr for RingDescriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, num) = s
            .split_once(':')
            .ok_or_else(|| Error::UnsupportedRing(s.to_string(), "expected kind:n".into()))?;
        let kind = match kind {
            "zmod" => RingKind::Zmod,
            "gf" => RingKind::Gf,
            "dual" => RingKind::Dual,
            _ => {
                return Err(Error::UnsupportedRing(
                    s.to_string(),
                    "kind must be zmod, gf, or dual".into(),
                ))
            }
        };
        let n: usize = num
            .parse()
            .map_err(|_| Error::UnsupportedRing(s.to_string(), "bad size".into()))?;
        Ok(RingDescriptor { kind, n })
    }
}

/// Returns (p, k) with n = p^k, or None.
fn prime_power(n: usize) -> Option<(usize, usize)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut m = n;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((n, 1))
}

/// Polynomials over F_p as ascending coefficient vectors, trailing zeros cut.
fn poly_trim(v: &mut Vec<usize>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(num: &[usize], den: &[usize], p: usize) -> Vec<usize> {
    let mut r: Vec<usize> = num.to_vec();
    poly_trim(&mut r);
    let dl = den.len();
    assert!(dl >= 1 && den[dl - 1] != 0);
    let lead_inv = (1..p).find(|&x| x * den[dl - 1] % p == 1).unwrap();
    while r.len() >= dl {
        let c = r[r.len() - 1] * lead_inv % p;
        let shift = r.len() - dl;
        for i in 0..dl {
            let sub = c * den[i] % p;
            let idx = shift + i;
            r[idx] = (r[idx] + p - sub) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn poly_mul(a: &[usize], b: &[usize], p: usize) -> Vec<usize> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0usize; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Monic degree-d poly from lex tuple (c_0, ..., c_{d-1}), c_0 most significant
/// in the enumeration index.
fn modulus_from_index(idx: usize, d: usize, p: usize) -> Vec<usize> {
    let mut coeffs = vec![0usize; d + 1];
    coeffs[d] = 1;
    let mut rest = idx;
    for i in (0..d).rev() {
        coeffs[i] = rest % p;
        rest /= p;
    }
    // rest consumed the digits with c_{d-1} least significant, so the index
    // orders tuples lexicographically by (c_0, ..., c_{d-1}).
    coeffs
}

fn is_irreducible(m: &[usize], p: usize) -> bool {
    let d = m.len() - 1;
    if m[0] == 0 {
        return false;
    }
    // Trial division by every monic polynomial of degree 1..=d/2.
    for deg in 1..=d / 2 {
        for idx in 0..p.pow(deg as u32) {
            let div = modulus_from_index(idx, deg, p);
            if poly_rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// The lexicographically least monic irreducible of degree d over F_p,
/// comparing coefficient tuples (c_0, ..., c_{d-1}).
fn least_irreducible(d: usize, p: usize) -> Vec<usize> {
    for idx in 0..p.pow(d as u32) {
        let m = modulus_from_index(idx, d, p);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("an irreducible of every degree exists");
}

#[derive(Clone)]
pub struct LocalRing {
    pub desc: RingDescriptor,
    pub size: usize,
    /// Residue characteristic.
    pub p: usize,
    /// Size of the residue field.
    pub q: usize,
    add_t: Vec<u16>,
    mul_t: Vec<u16>,
    neg_t: Vec<u16>,
    inv_t: Vec<u16>,
    res_t: Vec<u16>,
    lift_t: Vec<u16>,
    units: Vec<u16>,
    radical: Vec<u16>,
}

impl fmt::Debug for LocalRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalRing({})", self.desc)
    }
}

fn gf_tables(q: usize) -> Result<(Vec<u16>, Vec<u16>, usize)> {
    let (p, d) = prime_power(q).ok_or_else(|| {
        Error::UnsupportedRing(format!("gf:{q}"), "size must be a prime power".into())
    })?;
    let modulus = least_irreducible(d, p);
    let decode = |code: usize| -> Vec<usize> {
        let mut v = Vec::with_capacity(d);
        let mut rest = code;
        for _ in 0..d {
            v.push(rest % p);
            rest /= p;
        }
        poly_trim(&mut v);
        v
    };
    let encode = |poly: &[usize]| -> usize {
        let mut code = 0;
        for i in (0..poly.len()).rev() {
            code = code * p + poly[i];
        }
        code
    };
    let mut add_t = vec![0u16; q * q];
    let mut mul_t = vec![0u16; q * q];
    for a in 0..q {
        let pa = decode(a);
        for b in 0..q {
            let pb = decode(b);
            let mut sum = vec![0usize; d];
            for (i, s) in sum.iter_mut().enumerate() {
                let x = pa.get(i).copied().unwrap_or(0);
                let y = pb.get(i).copied().unwrap_or(0);
                *s = (x + y) % p;
            }
            add_t[a * q + b] = encode(&sum) as u16;
            let prod = poly_rem(&poly_mul(&pa, &pb, p), &modulus, p);
            mul_t[a * q + b] = encode(&prod) as u16;
        }
    }
    Ok((add_t, mul_t, p))
}

fn finish(
    desc: RingDescriptor,
    size: usize,
    p: usize,
    q: usize,
    add_t: Vec<u16>,
    mul_t: Vec<u16>,
    res_t: Vec<u16>,
    lift_t: Vec<u16>,
) -> LocalRing {
    let mut neg_t = vec![0u16; size];
    for a in 0..size {
        neg_t[a] = (0..size)
            .find(|&b| add_t[a * size + b] == 0)
            .expect("additive inverse") as u16;
    }
    let mut inv_t = vec![NO_INV; size];
    let mut units = Vec::new();
    let mut radical = Vec::new();
    for a in 0..size {
        if res_t[a] != 0 {
            let inv = (0..size)
                .find(|&b| mul_t[a * size + b] == 1)
                .expect("nonzero residue must be invertible in a local ring");
            inv_t[a] = inv as u16;
            units.push(a as u16);
        } else {
            radical.push(a as u16);
        }
    }
    LocalRing {
        desc,
        size,
        p,
        q,
        add_t,
        mul_t,
        neg_t,
        inv_t,
        res_t,
        lift_t,
        units,
        radical,
    }
}

impl LocalRing {
    pub fn new(desc: RingDescriptor) -> Result<LocalRing> {
        let n = desc.n;
        match desc.kind {
            RingKind::Zmod => {
                let (p, _k) = prime_power(n).ok_or_else(|| {
                    Error::UnsupportedRing(desc.to_string(), "size must be a prime power".into())
                })?;
                if n > RING_SIZE_CAP {
                    return Err(Error::UnsupportedRing(
                        desc.to_string(),
                        format!("size exceeds cap {RING_SIZE_CAP}"),
                    ));
                }
                let mut add_t = vec![0u16; n * n];
                let mut mul_t = vec![0u16; n * n];
                for a in 0..n {
                    for b in 0..n {
                        add_t[a * n + b] = ((a + b) % n) as u16;
                        mul_t[a * n + b] = ((a * b) % n) as u16;
                    }
                }
                let res_t = (0..n).map(|a| (a % p) as u16).collect();
                let lift_t = (0..p).map(|a| a as u16).collect();
                Ok(finish(desc, n, p, p, add_t, mul_t, res_t, lift_t))
            }
            RingKind::Gf => {
                if n > RING_SIZE_CAP {
                    return Err(Error::UnsupportedRing(
                        desc.to_string(),
                        format!("size exceeds cap {RING_SIZE_CAP}"),
                    ));
                }
                let (add_t, mul_t, p) = gf_tables(n)?;
                let res_t = (0..n).map(|a| a as u16).collect();
                let lift_t = (0..n).map(|a| a as u16).collect();
                Ok(finish(desc, n, p, n, add_t, mul_t, res_t, lift_t))
            }
            RingKind::Dual => {
                let q = n;
                let size = q * q;
                if size > RING_SIZE_CAP {
                    return Err(Error::UnsupportedRing(
                        desc.to_string(),
                        format!("size exceeds cap {RING_SIZE_CAP}"),
                    ));
                }
                let (fa, fm, p) = gf_tables(q)?;
                let mut add_t = vec![0u16; size * size];
                let mut mul_t = vec![0u16; size * size];
                for x in 0..size {
                    let (a, b) = (x % q, x / q);
                    for y in 0..size {
                        let (c, e) = (y % q, y / q);
                        let sa = fa[a * q + c] as usize;
                        let sb = fa[b * q + e] as usize;
                        add_t[x * size + y] = (sa + q * sb) as u16;
                        let pa = fm[a * q + c] as usize;
                        let cross = fa[(fm[a * q + e] as usize) * q + fm[b * q + c] as usize];
                        mul_t[x * size + y] = (pa + q * cross as usize) as u16;
                    }
                }
                let res_t = (0..size).map(|x| (x % q) as u16).collect();
                let lift_t = (0..q).map(|a| a as u16).collect();
                Ok(finish(desc, size, p, q, add_t, mul_t, res_t, lift_t))
            }
        }
    }

    pub fn parse(desc: &str) -> Result<LocalRing> {
        LocalRing::new(desc.parse()?)
    }

    pub fn zero(&self) -> u16 {
        0
    }

    pub fn one(&self) -> u16 {
        1
    }

    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add_t[a as usize * self.size + b as usize]
    }

    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul_t[a as usize * self.size + b as usize]
    }

    pub fn neg(&self, a: u16) -> u16 {
        self.neg_t[a as usize]
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        let v = self.inv_t[a as usize];
        if v == NO_INV {
            Err(Error::NonUnitInverse(format!("{} in {}", a, self.desc)))
        } else {
            Ok(v)
        }
    }

    pub fn is_unit(&self, a: u16) -> bool {
        self.inv_t[a as usize] != NO_INV
    }

    pub fn units(&self) -> &[u16] {
        &self.units
    }

    /// The maximal ideal, i.e. the non-units.
    pub fn radical(&self) -> &[u16] {
        &self.radical
    }

    /// Image of an integer under the unique map from Z.
    pub fn from_int(&self, n: i64) -> u16 {
        match self.desc.kind {
            RingKind::Zmod => n.rem_euclid(self.size as i64) as u16,
            RingKind::Gf | RingKind::Dual => n.rem_euclid(self.p as i64) as u16,
        }
    }

    pub fn pow(&self, a: u16, e: i64) -> Result<u16> {
        let base = if e < 0 { self.inv(a)? } else { a };
        let mut acc = self.one();
        for _ in 0..e.unsigned_abs() {
            acc = self.mul(acc, base);
        }
        Ok(acc)
    }

    /// Residue of an element in the residue field, as a code of that field.
    pub fn residue(&self, a: u16) -> u16 {
        self.res_t[a as usize]
    }

    /// The canonical section of the residue map (radical component zero).
    pub fn lift(&self, r: u16) -> u16 {
        self.lift_t[r as usize]
    }

    pub fn residue_field(&self) -> Result<LocalRing> {
        LocalRing::new(RingDescriptor {
            kind: RingKind::Gf,
            n: self.q,
        })
    }

    pub fn is_field(&self) -> bool {
        self.size == self.q
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.size as u16
    }
}

/// Rejects ring/system combinations whose structure constants demand
/// inverses the ring cannot provide: doubly laced systems need 1/2, G_2
/// needs 1/2 and 1/3.
pub fn check_required_units(family: Family, ring: &LocalRing) -> Result<()> {
    let mut needed: Vec<i64> = Vec::new();
    if family.doubly_laced() || family == Family::G {
        needed.push(2);
    }
    if family == Family::G {
        needed.push(3);
    }
    for n in needed {
        if !ring.is_unit(ring.from_int(n)) {
            return Err(Error::MissingRequiredUnits(format!(
                "{} requires {} to be a unit in {}",
                family.letter(),
                n,
                ring.desc
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zmod4_structure() {
        let r = LocalRing::parse("zmod:4").unwrap();
        assert_eq!(r.size, 4);
        assert_eq!(r.p, 2);
        assert_eq!(r.units(), &[1, 3]);
        assert_eq!(r.radical(), &[0, 2]);
        assert_eq!(r.inv(3).unwrap(), 3);
        assert!(r.inv(2).is_err());
        assert_eq!(r.neg(1), 3);
        assert_eq!(r.residue(3), 1);
        assert_eq!(r.lift(1), 1);
        assert_eq!(r.from_int(-1), 3);
        assert_eq!(r.pow(3, -1).unwrap(), 3);
    }

    #[test]
    fn zmod_rejects_non_prime_powers() {
        assert!(LocalRing::parse("zmod:6").is_err());
        assert!(LocalRing::parse("zmod:1").is_err());
        assert!(LocalRing::parse("zmod:2048").is_err());
    }

    #[test]
    fn gf4_is_the_usual_field() {
        let r = LocalRing::parse("gf:4").unwrap();
        // Codes: 0, 1, x = 2, x + 1 = 3 with x^2 + x + 1 = 0.
        assert_eq!(r.mul(2, 2), 3);
        assert_eq!(r.mul(2, 3), 1);
        assert_eq!(r.inv(2).unwrap(), 3);
        assert_eq!(r.add(2, 3), 1);
        assert!(r.is_field());
        assert_eq!(r.units().len(), 3);
    }

    #[test]
    fn gf8_uses_least_lex_modulus() {
        // First irreducible in lex order on (c0, c1, c2) is x^3 + x^2 + 1.
        let r = LocalRing::parse("gf:8").unwrap();
        // x * x^2 = x^3 = x^2 + 1, i.e. code 2 * code 4 = code 5.
        assert_eq!(r.mul(2, 4), 5);
    }

    #[test]
    fn gf9_uses_x_squared_plus_one() {
        let r = LocalRing::parse("gf:9").unwrap();
        // x = code 3, x^2 = -1 = 2.
        assert_eq!(r.mul(3, 3), 2);
        assert_eq!(r.from_int(-1), 2);
    }

    #[test]
    fn dual_numbers_square_to_zero() {
        let r = LocalRing::parse("dual:2").unwrap();
        assert_eq!(r.size, 4);
        // eps = code 2.
        assert_eq!(r.mul(2, 2), 0);
        assert_eq!(r.units(), &[1, 3]);
        assert_eq!(r.mul(3, 3), 1);
        assert_eq!(r.residue(3), 1);
        assert_eq!(r.lift(1), 1);

        let r3 = LocalRing::parse("dual:3").unwrap();
        // (1 + eps)(1 - eps) = 1; 1 + eps = 1 + 3*1 = 4, 1 - eps = 1 + 3*2 = 7.
        assert_eq!(r3.mul(4, 7), 1);
        assert_eq!(r3.inv(4).unwrap(), 7);
    }

    #[test]
    fn unit_count_matches_local_structure() {
        for desc in ["zmod:8", "zmod:9", "gf:5", "dual:4"] {
            let r = LocalRing::parse(desc).unwrap();
            let expected = r.size / r.q * (r.q - 1);
            assert_eq!(r.units().len(), expected, "{desc}");
            for u in r.elements() {
                assert_eq!(r.is_unit(u), r.residue(u) != 0);
            }
        }
    }

    #[test]
    fn residue_map_is_a_ring_map() {
        for desc in ["zmod:9", "dual:3", "gf:8"] {
            let r = LocalRing::parse(desc).unwrap();
            let k = r.residue_field().unwrap();
            for a in r.elements() {
                for b in r.elements() {
                    assert_eq!(r.residue(r.add(a, b)), k.add(r.residue(a), r.residue(b)));
                    assert_eq!(r.residue(r.mul(a, b)), k.mul(r.residue(a), r.residue(b)));
                }
                assert_eq!(r.residue(r.lift(r.residue(a))), r.residue(a));
            }
        }
    }

    #[test]
    fn required_units_gate() {
        let z4 = LocalRing::parse("zmod:4").unwrap();
        let f3 = LocalRing::parse("gf:3").unwrap();
        let z9 = LocalRing::parse("zmod:9").unwrap();
        let f5 = LocalRing::parse("gf:5").unwrap();
        assert!(check_required_units(Family::A, &z4).is_ok());
        assert!(check_required_units(Family::B, &z4).is_err());
        assert!(check_required_units(Family::B, &f3).is_ok());
        assert!(check_required_units(Family::G, &z9).is_err());
        assert!(check_required_units(Family::G, &f5).is_ok());
        assert!(check_required_units(Family::C, &z4).is_err());
        assert!(check_required_units(Family::F, &f3).is_ok());
        assert!(check_required_units(Family::D, &z4).is_ok());
    }

    #[test]
    fn descriptor_round_trip() {
        for s in ["zmod:4", "gf:9", "dual:2"] {
            let d: RingDescriptor = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("zmood:4".parse::<RingDescriptor>().is_err());
        assert!("gf".parse::<RingDescriptor>().is_err());
        assert!("gf:x".parse::<RingDescriptor>().is_err());
    }
}
