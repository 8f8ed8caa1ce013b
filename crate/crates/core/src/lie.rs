//! The integral Chevalley basis of the simple Lie algebra attached to a root
//! system, and the adjoint matrices built from it.
//!
//! Structure constants are fixed by the extraspecial-pair method: order the
//! positive roots, give every extraspecial pair the positive sign, and let
//! the Jacobi identity force everything else. All intermediate arithmetic is
//! exact; divisions assert.
//!
//! The adjoint basis is ordered by weight height (most negative first) with
//! the Cartan generators in the middle, so unipotent elements on positive
//! roots are upper unitriangular and the torus is diagonal.

use crate::error::{Error, Result};
use crate::poly::{bezout_one, IMat, PMat, Poly2};
use crate::roots::{Root, RootSystem};
use std::collections::HashMap;

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Exact rational scratch value for the structure constant recurrences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Rat {
    n: i64,
    d: i64,
}

impl Rat {
    fn new(n: i64, d: i64) -> Rat {
        assert!(d != 0);
        let g = gcd(n, d).max(1);
        let s = if d < 0 { -1 } else { 1 };
        Rat {
            n: s * n / g,
            d: s * d / g,
        }
    }

    fn int(n: i64) -> Rat {
        Rat { n, d: 1 }
    }

    fn add(self, o: Rat) -> Rat {
        Rat::new(self.n * o.d + o.n * self.d, self.d * o.d)
    }

    fn mul(self, o: Rat) -> Rat {
        Rat::new(self.n * o.n, self.d * o.d)
    }

    fn div(self, o: Rat) -> Rat {
        assert!(o.n != 0);
        Rat::new(self.n * o.d, self.d * o.n)
    }

    fn as_int(self) -> i64 {
        assert_eq!(self.d, 1, "expected an integer, got {}/{}", self.n, self.d);
        self.n
    }
}

fn sub(a: &[i64], b: &[i64]) -> Root {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// One factor of a commutator of two root elements:
/// the subgroup of i alpha + j beta with parameter c s^i t^j.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommFactor {
    pub i: usize,
    pub j: usize,
    pub root: Root,
    pub c: i64,
}

pub struct ChevalleyData {
    pub sys: RootSystem,
    /// Dimension of the adjoint module: |Phi| + rank.
    pub dim: usize,
    /// Weight of each basis row; None marks the Cartan rows.
    pub basis_weights: Vec<Option<Root>>,
    /// Basis rows of h_1, ..., h_l (a contiguous block).
    pub cartan_rows: Vec<usize>,
    root_row: HashMap<Root, usize>,
    /// Structure constants indexed by (root index, root index) in sys.roots.
    n_full: Vec<i64>,
    /// Coroot coefficients per root index: h_alpha = sum c_j h_j.
    coroot: Vec<Vec<i64>>,
}

impl ChevalleyData {
    pub fn new(sys: RootSystem) -> ChevalleyData {
        let pos_table = fill_positive_constants(&sys);
        let nroots = sys.roots.len();
        let mut n_full = vec![0i64; nroots * nroots];
        for ai in 0..nroots {
            for bi in 0..nroots {
                let a = &sys.roots[ai];
                let b = &sys.roots[bi];
                let s = RootSystem::add(a, b);
                if sys.is_root(&s) {
                    n_full[ai * nroots + bi] = n_any(&sys, &pos_table, a, b);
                }
            }
        }
        let mut coroot = Vec::with_capacity(nroots);
        for r in &sys.roots {
            let rr = sys.form(r, r);
            let c: Vec<i64> = (0..sys.rank)
                .map(|j| {
                    let sj = sys.simple_root(j);
                    let num = r[j] * sys.form(&sj, &sj);
                    assert_eq!(num % rr, 0, "coroot coefficient not integral");
                    num / rr
                })
                .collect();
            let g = c.iter().fold(0, |acc, &x| gcd(acc, x));
            assert_eq!(g, 1, "coroot coefficients are not coprime: {c:?}");
            coroot.push(c);
        }

        let mut sorted: Vec<Root> = sys.roots.clone();
        sorted.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        let half = nroots / 2;
        let l = sys.rank;
        let mut basis_weights: Vec<Option<Root>> = Vec::with_capacity(nroots + l);
        for r in &sorted[..half] {
            basis_weights.push(Some(r.clone()));
        }
        for _ in 0..l {
            basis_weights.push(None);
        }
        for r in &sorted[half..] {
            basis_weights.push(Some(r.clone()));
        }
        let cartan_rows: Vec<usize> = (half..half + l).collect();
        let root_row: HashMap<Root, usize> = basis_weights
            .iter()
            .enumerate()
            .filter_map(|(i, w)| w.clone().map(|r| (r, i)))
            .collect();

        ChevalleyData {
            dim: nroots + l,
            sys,
            basis_weights,
            cartan_rows,
            root_row,
            n_full,
            coroot,
        }
    }

    /// N_{a,b}; zero when a + b is not a root.
    pub fn n(&self, a: &[i64], b: &[i64]) -> i64 {
        let ai = self.sys.root_index(a).expect("root");
        let bi = self.sys.root_index(b).expect("root");
        self.n_full[ai * self.sys.roots.len() + bi]
    }

    pub fn coroot_coeffs(&self, r: &[i64]) -> &[i64] {
        let i = self.sys.root_index(r).expect("root");
        &self.coroot[i]
    }

    pub fn basis_row(&self, r: &[i64]) -> usize {
        *self.root_row.get(r).expect("root")
    }

    /// [e_i, e_j] on basis elements, as a sparse vector of basis rows.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, i64)> {
        match (&self.basis_weights[i], &self.basis_weights[j]) {
            (Some(a), Some(b)) => {
                let s = RootSystem::add(a, b);
                if RootSystem::is_zero(&s) {
                    let c = self.coroot_coeffs(a);
                    (0..self.sys.rank)
                        .filter(|&k| c[k] != 0)
                        .map(|k| (self.cartan_rows[k], c[k]))
                        .collect()
                } else if self.sys.is_root(&s) {
                    vec![(self.root_row[&s], self.n(a, b))]
                } else {
                    Vec::new()
                }
            }
            (Some(a), None) => {
                let k = j - self.cartan_rows[0];
                let v = -self.sys.pairing(a, &self.sys.simple_root(k));
                if v == 0 {
                    Vec::new()
                } else {
                    vec![(i, v)]
                }
            }
            (None, Some(b)) => {
                let k = i - self.cartan_rows[0];
                let v = self.sys.pairing(b, &self.sys.simple_root(k));
                if v == 0 {
                    Vec::new()
                } else {
                    vec![(j, v)]
                }
            }
            (None, None) => Vec::new(),
        }
    }

    pub fn jacobi_holds(&self, i: usize, j: usize, k: usize) -> bool {
        let mut acc = vec![0i64; self.dim];
        let term = |x: usize, y: usize, z: usize, acc: &mut Vec<i64>| {
            for (b, c) in self.bracket_basis(y, z) {
                for (r, c2) in self.bracket_basis(x, b) {
                    acc[r] += c * c2;
                }
            }
        };
        term(i, j, k, &mut acc);
        term(j, k, i, &mut acc);
        term(k, i, j, &mut acc);
        acc.iter().all(|&v| v == 0)
    }

    /// The matrix of ad e_alpha in the weight basis.
    pub fn ad_matrix(&self, alpha: &[i64]) -> IMat {
        let mut m = IMat::zero(self.dim);
        for col in 0..self.dim {
            for (row, v) in self.bracket_basis(self.basis_row(alpha), col) {
                m.set(row, col, v);
            }
        }
        m
    }

    /// Integral divided powers T_k = (ad e_alpha)^k / k!, so that
    /// x_alpha(t) = sum_k t^k T_k. T_0 is the identity.
    pub fn x_template(&self, alpha: &[i64]) -> Vec<IMat> {
        let ad = self.ad_matrix(alpha);
        let mut out = vec![IMat::identity(self.dim)];
        let mut power = IMat::identity(self.dim);
        let mut fact: i64 = 1;
        for k in 1..=8 {
            power = ad.mul(&power);
            if power.is_zero() {
                return out;
            }
            fact *= k as i64;
            let mut t = IMat::zero(self.dim);
            for r in 0..self.dim {
                for c in 0..self.dim {
                    let v = power.at(r, c);
                    assert_eq!(v % fact, 0, "divided power is not integral");
                    t.set(r, c, v / fact);
                }
            }
            out.push(t);
        }
        panic!("ad e_alpha is not nilpotent of small degree");
    }

    /// Exponent of the torus element h_alpha(t) on each basis row:
    /// t^{<weight, alpha>} on root rows, 1 on Cartan rows.
    pub fn torus_exponents(&self, alpha: &[i64]) -> Vec<i64> {
        self.basis_weights
            .iter()
            .map(|w| match w {
                Some(beta) => self.sys.pairing(beta, alpha),
                None => 0,
            })
            .collect()
    }

    fn template_pmat(&self, alpha: &[i64], var: usize, negate: bool) -> PMat {
        let temps = self.x_template(alpha);
        let mut m = PMat::identity(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut p = Poly2::zero();
                for (k, t) in temps.iter().enumerate() {
                    let mut coeff = t.at(r, c);
                    if negate && k % 2 == 1 {
                        coeff = -coeff;
                    }
                    if coeff != 0 {
                        let (i, j) = if var == 0 { (k, 0) } else { (0, k) };
                        p = p.add(&Poly2::monomial(coeff, i, j));
                    }
                }
                m.set(r, c, p);
            }
        }
        m
    }

    fn template_at_poly(&self, alpha: &[i64], u: &Poly2) -> PMat {
        let temps = self.x_template(alpha);
        let mut pows = vec![Poly2::constant(1)];
        for _ in 1..temps.len() {
            pows.push(pows.last().unwrap().mul(u));
        }
        let mut m = PMat::identity(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                let mut p = Poly2::zero();
                for (k, t) in temps.iter().enumerate() {
                    let coeff = t.at(r, c);
                    if coeff != 0 {
                        p = p.add(&pows[k].scale(coeff));
                    }
                }
                m.set(r, c, p);
            }
        }
        m
    }

    /// Reads the parameter of the leading factor x_gamma(u) off a product
    /// known to lie in the span of factors on gamma and on roots strictly
    /// later in the given order: the Cartan block of (product) e_{-gamma}
    /// is exactly u times the coroot of gamma.
    fn peel_parameter(&self, w: &PMat, gamma: &[i64]) -> Poly2 {
        let col = self.basis_row(&RootSystem::negate(gamma));
        let c = self.coroot_coeffs(gamma);
        let bez = bezout_one(c);
        let mut u = Poly2::zero();
        for (j, &bj) in bez.iter().enumerate() {
            if bj != 0 {
                u = u.add(&w.at(self.cartan_rows[j], col).scale(bj));
            }
        }
        u
    }

    /// Constants C_{ij} of the commutator formula
    /// [x_alpha(s), x_beta(t)] = prod x_{i alpha + j beta}(C_ij s^i t^j),
    /// factors ordered by i + j, then i. The commutator is g h g^-1 h^-1.
    pub fn commutator_constants(&self, alpha: &[i64], beta: &[i64]) -> Result<Vec<CommFactor>> {
        self.sys.root_index(alpha)?;
        self.sys.root_index(beta)?;
        if RootSystem::is_zero(&RootSystem::add(alpha, beta)) {
            return Err(Error::ProportionalRoots);
        }
        let xs = self.template_pmat(alpha, 0, false);
        let xs_inv = self.template_pmat(alpha, 0, true);
        let yt = self.template_pmat(beta, 1, false);
        let yt_inv = self.template_pmat(beta, 1, true);
        let mut w = xs.mul(&yt).mul(&xs_inv).mul(&yt_inv);

        let mut string: Vec<(usize, usize, Root)> = Vec::new();
        for i in 1..=3usize {
            for j in 1..=3usize {
                let r: Root = alpha
                    .iter()
                    .zip(beta)
                    .map(|(a, b)| i as i64 * a + j as i64 * b)
                    .collect();
                if self.sys.is_root(&r) {
                    string.push((i, j, r));
                }
            }
        }
        string.sort_by_key(|(i, j, _)| (i + j, *i));

        let mut factors = Vec::new();
        for (i, j, gamma) in string {
            let u = self.peel_parameter(&w, &gamma);
            if u.is_zero() {
                continue;
            }
            let (c, ui, uj) = u
                .as_monomial()
                .expect("commutator factor parameter is a monomial");
            assert_eq!((ui, uj), (i, j), "factor degree mismatch");
            let xg = self.template_at_poly(&gamma, &u.neg());
            w = xg.mul(&w);
            factors.push(CommFactor { i, j, root: gamma, c });
        }
        assert!(
            w.is_identity(),
            "commutator did not reduce to the identity"
        );
        Ok(factors)
    }
}

/// Largest i with b - i a still a root.
fn p_max(sys: &RootSystem, b: &[i64], a: &[i64]) -> i64 {
    let mut i = 0;
    loop {
        let mut v = b.to_vec();
        for (x, y) in v.iter_mut().zip(a) {
            *x -= (i + 1) * y;
        }
        if sys.is_root(&v) {
            i += 1;
        } else {
            return i;
        }
    }
}

type PosTable = HashMap<(usize, usize), i64>;

fn pos_signed(table: &PosTable, i: usize, j: usize) -> i64 {
    if i < j {
        *table.get(&(i, j)).expect("filled by height")
    } else {
        -*table.get(&(j, i)).expect("filled by height")
    }
}

/// N_{xi, -zeta} for positive xi, zeta with xi - zeta a root, reduced to a
/// stored positive pair of smaller height via a zero-sum triple.
fn n_mixed(sys: &RootSystem, table: &PosTable, pidx: &HashMap<Root, usize>, xi: &[i64], zeta: &[i64]) -> i64 {
    let d = sub(xi, zeta);
    debug_assert!(sys.is_root(&d));
    if sys.is_positive(&d) {
        // xi = zeta + d: N_{xi,-zeta} = -(d,d)/(xi,xi) N_{zeta,d}.
        let n = pos_signed(table, pidx[zeta], pidx[&d]);
        let num = -sys.form(&d, &d) * n;
        let den = sys.form(xi, xi);
        assert_eq!(num % den, 0);
        num / den
    } else {
        // zeta = d' + xi: N_{xi,-zeta} = (d',d')/(zeta,zeta) N_{d',xi}.
        let dp = RootSystem::negate(&d);
        let n = pos_signed(table, pidx[&dp], pidx[xi]);
        let num = sys.form(&dp, &dp) * n;
        let den = sys.form(zeta, zeta);
        assert_eq!(num % den, 0);
        num / den
    }
}

/// Fills N over pairs of positive roots, keyed by positive-order indices
/// (i, j) with i < j, working upward by the height of the sum.
fn fill_positive_constants(sys: &RootSystem) -> PosTable {
    let pos = &sys.positive;
    let pidx: HashMap<Root, usize> = pos.iter().cloned().zip(0..).collect();
    let mut table: PosTable = HashMap::new();
    for gamma in pos {
        let mut specials: Vec<(usize, usize)> = Vec::new();
        for (ai, alpha) in pos.iter().enumerate() {
            let beta = sub(gamma, alpha);
            if let Some(&bi) = pidx.get(&beta) {
                if ai < bi {
                    specials.push((ai, bi));
                }
            }
        }
        if specials.is_empty() {
            continue;
        }
        specials.sort();
        let (ei, hi) = specials[0];
        let (eps, eta) = (&pos[ei], &pos[hi]);
        table.insert((ei, hi), p_max(sys, eta, eps) + 1);
        for &(ai, bi) in &specials[1..] {
            let (alpha, beta) = (&pos[ai], &pos[bi]);
            // Zero-sum quadruple (eps, eta, -alpha, -beta).
            let mut total = Rat::int(0);
            let d_ha = sub(eta, alpha);
            if sys.is_root(&d_ha) {
                let t = Rat::int(n_mixed(sys, &table, &pidx, eta, alpha))
                    .mul(Rat::int(n_mixed(sys, &table, &pidx, eps, beta)))
                    .div(Rat::int(sys.form(&d_ha, &d_ha)));
                total = total.add(t);
            }
            let d_ea = sub(eps, alpha);
            if sys.is_root(&d_ea) {
                let t = Rat::int(-n_mixed(sys, &table, &pidx, eps, alpha))
                    .mul(Rat::int(n_mixed(sys, &table, &pidx, eta, beta)))
                    .div(Rat::int(sys.form(&d_ea, &d_ea)));
                total = total.add(t);
            }
            let n_ab = Rat::int(sys.form(gamma, gamma))
                .mul(total)
                .div(Rat::int(table[&(ei, hi)]))
                .as_int();
            assert!(n_ab != 0, "special pair with vanishing constant");
            table.insert((ai, bi), n_ab);
        }
    }
    table
}

/// N for arbitrary roots a, b with a + b a root.
fn n_any(sys: &RootSystem, table: &PosTable, a: &[i64], b: &[i64]) -> i64 {
    let pidx: HashMap<Root, usize> = sys.positive.iter().cloned().zip(0..).collect();
    match (sys.is_positive(a), sys.is_positive(b)) {
        (true, true) => pos_signed(table, pidx[a], pidx[b]),
        (false, false) => -n_any(
            sys,
            table,
            &RootSystem::negate(a),
            &RootSystem::negate(b),
        ),
        (true, false) => n_mixed(sys, table, &pidx, a, &RootSystem::negate(b)),
        (false, true) => -n_mixed(sys, table, &pidx, b, &RootSystem::negate(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::{build_root_system, Family};

    fn data(f: char, l: usize) -> ChevalleyData {
        ChevalleyData::new(build_root_system(Family::from_char(f).unwrap(), l).unwrap())
    }

    const SMALL: [(char, usize); 9] = [
        ('A', 2),
        ('A', 3),
        ('B', 2),
        ('B', 3),
        ('C', 3),
        ('D', 4),
        ('F', 4),
        ('G', 2),
        ('E', 6),
    ];

    #[test]
    fn a2_signs() {
        let d = data('A', 2);
        assert_eq!(d.n(&[0, 1], &[1, 0]), 1);
        assert_eq!(d.n(&[1, 0], &[0, 1]), -1);
        assert_eq!(d.n(&[1, 0], &[1, 1]), 0);
    }

    #[test]
    fn magnitudes_follow_root_strings() {
        for (f, l) in SMALL {
            let d = data(f, l);
            for a in &d.sys.roots {
                for b in &d.sys.roots {
                    let s = RootSystem::add(a, b);
                    if !d.sys.is_root(&s) {
                        continue;
                    }
                    let expect = p_max(&d.sys, b, a) + 1;
                    assert_eq!(d.n(a, b).abs(), expect, "{f}{l} {a:?} {b:?}");
                }
            }
        }
    }

    #[test]
    fn antisymmetry_and_negation() {
        for (f, l) in SMALL {
            let d = data(f, l);
            for a in &d.sys.roots {
                for b in &d.sys.roots {
                    if !d.sys.is_root(&RootSystem::add(a, b)) {
                        continue;
                    }
                    assert_eq!(d.n(a, b), -d.n(b, a));
                    assert_eq!(
                        d.n(a, b),
                        -d.n(&RootSystem::negate(a), &RootSystem::negate(b))
                    );
                }
            }
        }
    }

    #[test]
    fn jacobi_identity_on_all_basis_triples() {
        for (f, l) in [('A', 2), ('A', 3), ('B', 2), ('B', 3), ('C', 3), ('D', 4), ('F', 4), ('G', 2)] {
            let d = data(f, l);
            for i in 0..d.dim {
                for j in i + 1..d.dim {
                    for k in j + 1..d.dim {
                        assert!(d.jacobi_holds(i, j, k), "{f}{l} triple {i} {j} {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn g2_coroot_of_short_dominant_root() {
        let d = data('G', 2);
        assert_eq!(d.coroot_coeffs(&[2, 1]), &[2, 3]);
        assert_eq!(d.coroot_coeffs(&[3, 2]), &[1, 2]);
        assert_eq!(d.coroot_coeffs(&[-2, -1]), &[-2, -3]);
    }

    #[test]
    fn basis_is_height_sorted_with_cartan_in_middle() {
        let d = data('A', 2);
        assert_eq!(d.dim, 8);
        assert_eq!(d.cartan_rows, vec![3, 4]);
        assert_eq!(d.basis_weights[0], Some(vec![-1, -1]));
        assert_eq!(d.basis_weights[7], Some(vec![1, 1]));
        for i in 0..3 {
            assert!(d.basis_weights[i].as_ref().unwrap().iter().sum::<i64>() < 0);
            assert!(d.basis_weights[7 - i].as_ref().unwrap().iter().sum::<i64>() > 0);
        }
    }

    #[test]
    fn templates_are_nilpotent_exponentials() {
        for (f, l) in [('A', 2), ('B', 2), ('G', 2)] {
            let d = data(f, l);
            for r in &d.sys.roots {
                let t = d.x_template(r);
                assert!(t.len() <= 4, "{f}{l} {r:?} degree {}", t.len());
            }
        }
    }

    #[test]
    fn one_parameter_identity_symbolic() {
        for (f, l) in [('A', 2), ('B', 2), ('G', 2)] {
            let d = data(f, l);
            for r in d.sys.roots.clone() {
                let temps = d.x_template(&r);
                let xs = d.template_pmat(&r, 0, false);
                let xt = d.template_pmat(&r, 1, false);
                let prod = xs.mul(&xt);
                // Expected: sum_k (s + t)^k T_k.
                let st = Poly2::monomial(1, 1, 0).add(&Poly2::monomial(1, 0, 1));
                let mut pows = vec![Poly2::constant(1)];
                for _ in 1..temps.len() {
                    pows.push(pows.last().unwrap().mul(&st));
                }
                for row in 0..d.dim {
                    for col in 0..d.dim {
                        let mut want = Poly2::zero();
                        for (k, tk) in temps.iter().enumerate() {
                            if tk.at(row, col) != 0 {
                                want = want.add(&pows[k].scale(tk.at(row, col)));
                            }
                        }
                        assert_eq!(*prod.at(row, col), want);
                    }
                }
                let inv = d.template_pmat(&r, 0, true);
                assert!(xs.mul(&inv).is_identity());
            }
        }
    }

    #[test]
    fn commutator_constants_a2() {
        let d = data('A', 2);
        let f = d.commutator_constants(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].root, vec![1, 1]);
        assert_eq!((f[0].i, f[0].j), (1, 1));
        assert_eq!(f[0].c, d.n(&[1, 0], &[0, 1]));
        let g = d.commutator_constants(&[0, 1], &[1, 0]).unwrap();
        assert_eq!(g[0].c, d.n(&[0, 1], &[1, 0]));
    }

    #[test]
    fn commutator_constants_b2() {
        let d = data('B', 2);
        let mu = [0i64, 1];
        let nu = [1i64, 0];
        let f = d.commutator_constants(&mu, &nu).unwrap();
        let grades: Vec<(usize, usize, i64)> = f.iter().map(|x| (x.i, x.j, x.c.abs())).collect();
        assert_eq!(grades, vec![(1, 1, 1), (2, 1, 1)]);
        let g = d.commutator_constants(&nu, &mu).unwrap();
        let grades: Vec<(usize, usize, i64)> = g.iter().map(|x| (x.i, x.j, x.c.abs())).collect();
        assert_eq!(grades, vec![(1, 1, 1), (1, 2, 1)]);
    }

    #[test]
    fn commutator_constants_g2() {
        let d = data('G', 2);
        let f = d.commutator_constants(&[1, 0], &[0, 1]).unwrap();
        let grades: Vec<(usize, usize, i64)> = f.iter().map(|x| (x.i, x.j, x.c.abs())).collect();
        assert_eq!(
            grades,
            vec![(1, 1, 1), (2, 1, 1), (3, 1, 1), (3, 2, 2)]
        );
    }

    #[test]
    fn commutator_edge_cases() {
        let d = data('A', 2);
        assert!(matches!(
            d.commutator_constants(&[1, 0], &[-1, 0]),
            Err(Error::ProportionalRoots)
        ));
        let same = d.commutator_constants(&[1, 0], &[1, 0]).unwrap();
        assert!(same.is_empty());
        // Orthogonal-ish pair with no root sum: empty product.
        let disjoint = d.commutator_constants(&[1, 1], &[1, 0]).unwrap();
        assert!(disjoint.is_empty());
    }

    #[test]
    fn torus_exponents_match_pairings() {
        let d = data('B', 2);
        let e = d.torus_exponents(&[0, 1]);
        for (row, w) in d.basis_weights.iter().enumerate() {
            match w {
                Some(beta) => assert_eq!(e[row], d.sys.pairing(beta, &[0, 1])),
                None => assert_eq!(e[row], 0),
            }
        }
    }
}
