//! Small exact-arithmetic helpers: integer matrices, univariate and bivariate
//! integer polynomials, and matrices over them. Used only while deriving
//! generator templates and commutator constants; evaluation over a finite ring
//! happens elsewhere. All arithmetic is i64 and panics on overflow in debug
//! builds; the magnitudes involved are tiny.

/// Dense square matrix over i64.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IMat {
    pub n: usize,
    pub a: Vec<i64>,
}

impl IMat {
    pub fn zero(n: usize) -> Self {
        IMat { n, a: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zero(n);
        for i in 0..n {
            m.a[i * n + i] = 1;
        }
        m
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> i64 {
        self.a[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &IMat) -> IMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let v = self.at(i, k);
                if v == 0 {
                    continue;
                }
                for j in 0..n {
                    out.a[i * n + j] += v * other.at(k, j);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|&v| v == 0)
    }
}

/// Bivariate polynomial over i64 with a fixed small degree grid.
/// coeff[i][j] is the coefficient of s^i t^j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly2 {
    pub c: Vec<Vec<i64>>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2 { c: vec![vec![0]] }
    }

    pub fn constant(v: i64) -> Self {
        Poly2 { c: vec![vec![v]] }
    }

    /// The monomial c * s^i * t^j.
    pub fn monomial(v: i64, i: usize, j: usize) -> Self {
        let mut c = vec![vec![0i64; j + 1]; i + 1];
        c[i][j] = v;
        Poly2 { c }
    }

    fn trim(mut self) -> Self {
        for row in &mut self.c {
            while row.len() > 1 && *row.last().unwrap() == 0 {
                row.pop();
            }
        }
        while self.c.len() > 1 && self.c.last().unwrap().iter().all(|&v| v == 0) {
            self.c.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|row| row.iter().all(|&v| v == 0))
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let rows = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(rows);
        for i in 0..rows {
            let a = self.c.get(i);
            let b = other.c.get(i);
            let cols = a.map_or(0, |r| r.len()).max(b.map_or(0, |r| r.len()));
            let mut row = vec![0i64; cols];
            if let Some(r) = a {
                for (j, &v) in r.iter().enumerate() {
                    row[j] += v;
                }
            }
            if let Some(r) = b {
                for (j, &v) in r.iter().enumerate() {
                    row[j] += v;
                }
            }
            c.push(row);
        }
        Poly2 { c }.trim()
    }

    pub fn neg(&self) -> Poly2 {
        Poly2 {
            c: self.c.iter().map(|r| r.iter().map(|&v| -v).collect()).collect(),
        }
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        if self.is_zero() || other.is_zero() {
            return Poly2::zero();
        }
        let ra = self.c.len();
        let rb = other.c.len();
        let ca = self.c.iter().map(|r| r.len()).max().unwrap();
        let cb = other.c.iter().map(|r| r.len()).max().unwrap();
        let mut c = vec![vec![0i64; ca + cb - 1]; ra + rb - 1];
        for (i, ar) in self.c.iter().enumerate() {
            for (j, &av) in ar.iter().enumerate() {
                if av == 0 {
                    continue;
                }
                for (k, br) in other.c.iter().enumerate() {
                    for (l, &bv) in br.iter().enumerate() {
                        if bv != 0 {
                            c[i + k][j + l] += av * bv;
                        }
                    }
                }
            }
        }
        Poly2 { c }.trim()
    }

    pub fn scale(&self, v: i64) -> Poly2 {
        Poly2 {
            c: self.c.iter().map(|r| r.iter().map(|&x| x * v).collect()).collect(),
        }
        .trim()
    }

    /// If the polynomial is a single monomial c*s^i*t^j, return (c, i, j).
    pub fn as_monomial(&self) -> Option<(i64, usize, usize)> {
        let mut found = None;
        for (i, row) in self.c.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    if found.is_some() {
                        return None;
                    }
                    found = Some((v, i, j));
                }
            }
        }
        found
    }
}

/// Square matrix with Poly2 entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMat {
    pub n: usize,
    pub a: Vec<Poly2>,
}

impl PMat {
    pub fn identity(n: usize) -> Self {
        let mut a = vec![Poly2::zero(); n * n];
        for i in 0..n {
            a[i * n + i] = Poly2::constant(1);
        }
        PMat { n, a }
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> &Poly2 {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Poly2) {
        self.a[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &PMat) -> PMat {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut a = vec![Poly2::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let v = self.at(i, k);
                if v.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let w = other.at(k, j);
                    if !w.is_zero() {
                        a[i * n + j] = a[i * n + j].add(&v.mul(w));
                    }
                }
            }
        }
        PMat { n, a }
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { Poly2::constant(1) } else { Poly2::zero() };
                if *self.at(i, j) != want {
                    return false;
                }
            }
        }
        true
    }
}

/// Extended gcd. Returns (g, x, y) with a*x + b*y = g.
pub fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Integer coefficients b with sum(b[i]*c[i]) = 1. Panics unless gcd(c) = 1.
pub fn bezout_one(c: &[i64]) -> Vec<i64> {
    assert!(!c.is_empty());
    let mut coeffs = vec![0i64; c.len()];
    let mut g = c[0];
    coeffs[0] = 1;
    for i in 1..c.len() {
        let (g2, x, y) = ext_gcd(g, c[i]);
        for b in coeffs.iter_mut().take(i) {
            *b *= x;
        }
        coeffs[i] = y;
        g = g2;
    }
    assert_eq!(g.abs(), 1, "coroot coefficients are not coprime");
    if g < 0 {
        for b in &mut coeffs {
            *b = -*b;
        }
    }
    debug_assert_eq!(
        coeffs.iter().zip(c).map(|(b, v)| b * v).sum::<i64>(),
        1
    );
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly2_mul_matches_hand_expansion() {
        // (1 + s t) * (s - t) = s - t + s^2 t - s t^2
        let a = Poly2::constant(1).add(&Poly2::monomial(1, 1, 1));
        let b = Poly2::monomial(1, 1, 0).add(&Poly2::monomial(-1, 0, 1));
        let p = a.mul(&b);
        let want = Poly2::monomial(1, 1, 0)
            .add(&Poly2::monomial(-1, 0, 1))
            .add(&Poly2::monomial(1, 2, 1))
            .add(&Poly2::monomial(-1, 1, 2));
        assert_eq!(p, want);
    }

    #[test]
    fn bezout_handles_non_unit_entries() {
        let c = vec![2, 3];
        let b = bezout_one(&c);
        assert_eq!(b[0] * 2 + b[1] * 3, 1);
    }

    #[test]
    fn imat_identity_multiplies() {
        let id = IMat::identity(4);
        let mut m = IMat::zero(4);
        m.set(1, 2, 7);
        m.set(3, 0, -5);
        assert_eq!(id.mul(&m), m);
        assert_eq!(m.mul(&id), m);
    }
}
