//! Reduced irreducible root systems of rank at least 2, represented by
//! integer coordinate vectors over the simple-root basis.
//!
//! The inner product is the symmetrized Cartan form, scaled per family so all
//! values stay integral. Scaling does not affect the pairing
//! `<beta, alpha> = 2 (beta, alpha) / (alpha, alpha)`.
//!
//! Conventions (Bourbaki numbering):
//! * B_l: the last simple root is short.
//! * C_l: the last simple root is long.
//! * D_l: the fork is at the (l-2)nd node.
//! * E_l: node 2 attaches to node 4; the chain is 1-3-4-5-...-l.
//! * F_4: nodes 1, 2 long, nodes 3, 4 short.
//! * G_2: the first simple root is short.

use crate::error::{Error, Result};
use serde::Serialize;
use std::collections::HashMap;

pub type Root = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn from_char(c: char) -> Result<Family> {
        Ok(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            other => return Err(Error::UnknownSystem(other.to_string())),
        })
    }

    pub fn letter(&self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    /// Doubly laced means some pair of roots pairs to +-2; G has a +-3 pair.
    pub fn doubly_laced(&self) -> bool {
        matches!(self, Family::B | Family::C | Family::F)
    }
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    pub family: Family,
    pub rank: usize,
    /// All roots: positive roots in the fixed order, then their negatives in
    /// the matching order.
    pub roots: Vec<Root>,
    /// Positive roots sorted by height, ties broken lexicographically.
    pub positive: Vec<Root>,
    index: HashMap<Root, usize>,
    /// Symmetrized Cartan form on the simple basis, row-major.
    gram: Vec<i64>,
}

fn gram_matrix(family: Family, rank: usize) -> Result<Vec<i64>> {
    let l = rank;
    let admissible = match family {
        Family::A | Family::B | Family::C => l >= 2,
        Family::D => l >= 4,
        Family::E => (6..=8).contains(&l),
        Family::F => l == 4,
        Family::G => l == 2,
    };
    if !admissible {
        return Err(Error::RankTooSmall {
            family: family.letter(),
            rank: l,
        });
    }
    let mut s = vec![0i64; l * l];
    let set = |i: usize, j: usize, v: i64, s: &mut Vec<i64>| {
        s[i * l + j] = v;
        s[j * l + i] = v;
    };
    match family {
        Family::A => {
            for i in 0..l {
                s[i * l + i] = 2;
            }
            for i in 0..l - 1 {
                set(i, i + 1, -1, &mut s);
            }
        }
        Family::B => {
            for i in 0..l {
                s[i * l + i] = if i == l - 1 { 2 } else { 4 };
            }
            for i in 0..l - 1 {
                set(i, i + 1, -2, &mut s);
            }
        }
        Family::C => {
            for i in 0..l {
                s[i * l + i] = if i == l - 1 { 4 } else { 2 };
            }
            for i in 0..l - 2 {
                set(i, i + 1, -1, &mut s);
            }
            set(l - 2, l - 1, -2, &mut s);
        }
        Family::D => {
            for i in 0..l {
                s[i * l + i] = 2;
            }
            for i in 0..l - 2 {
                set(i, i + 1, -1, &mut s);
            }
            set(l - 3, l - 1, -1, &mut s);
        }
        Family::E => {
            for i in 0..l {
                s[i * l + i] = 2;
            }
            // 1-indexed edges 1-3, 3-4, 4-5, ..., plus 2-4.
            set(0, 2, -1, &mut s);
            for i in 2..l - 1 {
                set(i, i + 1, -1, &mut s);
            }
            set(1, 3, -1, &mut s);
        }
        Family::F => {
            let diag = [4, 4, 2, 2];
            for i in 0..4 {
                s[i * 4 + i] = diag[i];
            }
            set(0, 1, -2, &mut s);
            set(1, 2, -2, &mut s);
            set(2, 3, -1, &mut s);
        }
        Family::G => {
            s[0] = 2;
            s[3] = 6;
            set(0, 1, -3, &mut s);
        }
    }
    Ok(s)
}

pub fn build_root_system(family: Family, rank: usize) -> Result<RootSystem> {
    let gram = gram_matrix(family, rank)?;
    let mut sys = RootSystem {
        family,
        rank,
        roots: Vec::new(),
        positive: Vec::new(),
        index: HashMap::new(),
        gram,
    };
    sys.close_under_reflections();
    sys.fix_order();
    Ok(sys)
}

/// Parses a system name like `A2`, `F4` or `E8`.
pub fn parse_system(name: &str) -> Result<RootSystem> {
    let name = name.trim();
    let mut chars = name.chars();
    let c = chars
        .next()
        .ok_or_else(|| Error::UnknownSystem(name.to_string()))?;
    let family = Family::from_char(c)?;
    let rank: usize = chars
        .as_str()
        .parse()
        .map_err(|_| Error::UnknownSystem(name.to_string()))?;
    build_root_system(family, rank)
}

impl RootSystem {
    pub fn name(&self) -> String {
        format!("{}{}", self.family.letter(), self.rank)
    }

    pub fn form(&self, a: &[i64], b: &[i64]) -> i64 {
        let l = self.rank;
        let mut v = 0;
        for i in 0..l {
            if a[i] == 0 {
                continue;
            }
            for j in 0..l {
                v += a[i] * self.gram[i * l + j] * b[j];
            }
        }
        v
    }

    /// The Cartan pairing 2 (beta, alpha) / (alpha, alpha).
    pub fn pairing(&self, beta: &[i64], alpha: &[i64]) -> i64 {
        let num = 2 * self.form(beta, alpha);
        let den = self.form(alpha, alpha);
        assert!(den > 0);
        assert_eq!(num % den, 0, "pairing is not integral");
        let v = num / den;
        debug_assert!(v.abs() <= 3 || beta == alpha || beta.iter().zip(alpha).all(|(x, y)| *x == -*y));
        v
    }

    fn close_under_reflections(&mut self) {
        let l = self.rank;
        let mut seen: HashMap<Root, ()> = HashMap::new();
        let mut queue: Vec<Root> = Vec::new();
        for i in 0..l {
            let mut e = vec![0i64; l];
            e[i] = 1;
            seen.insert(e.clone(), ());
            queue.push(e);
        }
        let simples: Vec<Root> = queue.clone();
        while let Some(beta) = queue.pop() {
            for alpha in &simples {
                let k = self.pairing(&beta, alpha);
                let mut refl = beta.clone();
                for (r, a) in refl.iter_mut().zip(alpha) {
                    *r -= k * a;
                }
                if !seen.contains_key(&refl) {
                    seen.insert(refl.clone(), ());
                    queue.push(refl);
                }
            }
        }
        self.roots = seen.into_keys().collect();
    }

    fn fix_order(&mut self) {
        let mut pos: Vec<Root> = Vec::new();
        for r in &self.roots {
            let h: i64 = r.iter().sum();
            assert!(h != 0, "root of height zero");
            let sign_ok = if h > 0 {
                r.iter().all(|&c| c >= 0)
            } else {
                r.iter().all(|&c| c <= 0)
            };
            assert!(sign_ok, "root with mixed coefficient signs: {r:?}");
            if h > 0 {
                pos.push(r.clone());
            }
        }
        pos.sort_by_key(|r| (r.iter().sum::<i64>(), r.clone()));
        let mut all = pos.clone();
        all.extend(pos.iter().map(|r| r.iter().map(|&c| -c).collect::<Root>()));
        self.positive = pos;
        self.roots = all;
        self.index = self
            .roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
    }

    pub fn is_root(&self, v: &[i64]) -> bool {
        self.index.contains_key(v)
    }

    pub fn root_index(&self, v: &[i64]) -> Result<usize> {
        self.index
            .get(v)
            .copied()
            .ok_or_else(|| Error::NoSuchRoot(v.to_vec()))
    }

    pub fn simple_root(&self, j: usize) -> Root {
        let mut e = vec![0i64; self.rank];
        e[j] = 1;
        e
    }

    pub fn highest_root(&self) -> &Root {
        self.positive.last().unwrap()
    }

    pub fn height(&self, r: &[i64]) -> i64 {
        r.iter().sum()
    }

    pub fn is_positive(&self, r: &[i64]) -> bool {
        self.height(r) > 0
    }

    pub fn negate(r: &[i64]) -> Root {
        r.iter().map(|&c| -c).collect()
    }

    pub fn add(a: &[i64], b: &[i64]) -> Root {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    pub fn is_zero(r: &[i64]) -> bool {
        r.iter().all(|&c| c == 0)
    }

    /// The set B of roots beta with alpha1 + beta outside Phi and nonzero.
    pub fn b_set(&self, alpha1: &[i64]) -> Result<Vec<Root>> {
        self.root_index(alpha1)?;
        Ok(self
            .roots
            .iter()
            .filter(|beta| {
                let s = Self::add(alpha1, beta);
                !Self::is_zero(&s) && !self.is_root(&s)
            })
            .cloned()
            .collect())
    }

    /// The alpha-string through beta: (p, q) with beta - p alpha ... beta + q alpha.
    pub fn root_string(&self, alpha: &[i64], beta: &[i64]) -> Result<(i64, i64)> {
        self.root_index(alpha)?;
        self.root_index(beta)?;
        if beta == alpha || Self::is_zero(&Self::add(alpha, beta)) {
            return Err(Error::ProportionalRoots);
        }
        let walk = |dir: i64| {
            let mut k = 0i64;
            loop {
                let mut v = beta.to_vec();
                for (c, a) in v.iter_mut().zip(alpha) {
                    *c += dir * (k + 1) * a;
                }
                if self.is_root(&v) {
                    k += 1;
                } else {
                    return k;
                }
            }
        };
        let p = walk(-1);
        let q = walk(1);
        debug_assert!(p + q <= 3);
        debug_assert_eq!(p - q, self.pairing(beta, alpha));
        Ok((p, q))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DeletionRule {
    /// Some beta in B has beta + gamma in Phi or zero.
    SumWithB,
    /// Some delta orthogonal to alpha1 has odd pairing <delta, gamma>.
    OddPairing,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeletionStep {
    pub root: Root,
    pub rule: DeletionRule,
    pub witness: Root,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeletionOutcome {
    pub deleted: Vec<DeletionStep>,
    pub survivors: Vec<Root>,
}

impl RootSystem {
    /// Applies the two deletion rules relative to alpha1 to every root.
    /// Rule 2 reflects a torus-conjugation argument that needs 1/2 in the
    /// ring; the group-level requirement is enforced elsewhere, the rule here
    /// is purely combinatorial.
    pub fn deletion_closure(&self, alpha1: &[i64]) -> Result<DeletionOutcome> {
        let b = self.b_set(alpha1)?;
        let mut deleted = Vec::new();
        let mut survivors = Vec::new();
        'outer: for gamma in &self.roots {
            for beta in &b {
                let s = Self::add(beta, gamma);
                if Self::is_zero(&s) || self.is_root(&s) {
                    deleted.push(DeletionStep {
                        root: gamma.clone(),
                        rule: DeletionRule::SumWithB,
                        witness: beta.clone(),
                    });
                    continue 'outer;
                }
            }
            for delta in &self.roots {
                if self.form(delta, alpha1) == 0 && self.pairing(delta, gamma).rem_euclid(2) == 1 {
                    deleted.push(DeletionStep {
                        root: gamma.clone(),
                        rule: DeletionRule::OddPairing,
                        witness: delta.clone(),
                    });
                    continue 'outer;
                }
            }
            survivors.push(gamma.clone());
        }
        Ok(DeletionOutcome { deleted, survivors })
    }
}

pub fn expected_root_count(family: Family, rank: usize) -> usize {
    let l = rank;
    match family {
        Family::A => l * (l + 1),
        Family::B | Family::C => 2 * l * l,
        Family::D => 2 * l * (l - 1),
        Family::E => match l {
            6 => 72,
            7 => 126,
            8 => 240,
            _ => unreachable!(),
        },
        Family::F => 48,
        Family::G => 12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(f: char, l: usize) -> RootSystem {
        build_root_system(Family::from_char(f).unwrap(), l).unwrap()
    }

    #[test]
    fn root_counts_match_closed_forms() {
        let cases = [
            ('A', 2),
            ('A', 6),
            ('B', 2),
            ('B', 6),
            ('C', 3),
            ('C', 6),
            ('D', 4),
            ('D', 6),
            ('E', 6),
            ('E', 7),
            ('E', 8),
            ('F', 4),
            ('G', 2),
        ];
        for (f, l) in cases {
            let s = sys(f, l);
            assert_eq!(
                s.roots.len(),
                expected_root_count(s.family, l),
                "{f}{l} count"
            );
            assert_eq!(s.positive.len() * 2, s.roots.len());
        }
    }

    #[test]
    fn inadmissible_ranks_are_rejected() {
        assert!(build_root_system(Family::A, 1).is_err());
        assert!(build_root_system(Family::D, 3).is_err());
        assert!(build_root_system(Family::E, 5).is_err());
        assert!(build_root_system(Family::F, 3).is_err());
        assert!(build_root_system(Family::G, 3).is_err());
    }

    #[test]
    fn g2_roots_are_the_twelve_expected() {
        let s = sys('G', 2);
        let expect = [
            [1, 0],
            [0, 1],
            [1, 1],
            [2, 1],
            [3, 1],
            [3, 2],
        ];
        for r in expect {
            assert!(s.is_root(&r), "{r:?} missing");
            assert!(s.is_root(&[-r[0], -r[1]]));
        }
        assert_eq!(s.roots.len(), 12);
        assert_eq!(*s.highest_root(), vec![3, 2]);
    }

    #[test]
    fn b2_roots_and_lengths() {
        // mu = second simple root (short), nu = first (long).
        let s = sys('B', 2);
        assert_eq!(s.roots.len(), 8);
        for r in [[1, 0], [0, 1], [1, 1], [1, 2]] {
            assert!(s.is_root(&r));
        }
        let mu = [0i64, 1];
        let nu = [1i64, 0];
        assert!(s.form(&mu, &mu) < s.form(&nu, &nu));
        // mu + nu is short, 2mu + nu is long.
        assert_eq!(s.form(&[1, 1], &[1, 1]), s.form(&mu, &mu));
        assert_eq!(s.form(&[1, 2], &[1, 2]), s.form(&nu, &nu));
    }

    #[test]
    fn pairing_examples() {
        let a2 = sys('A', 2);
        assert_eq!(a2.pairing(&[1, 0], &[0, 1]), -1);
        assert_eq!(a2.pairing(&[1, 0], &[1, 0]), 2);
        let g2 = sys('G', 2);
        assert_eq!(g2.pairing(&[0, 1], &[1, 0]), -3);
        assert_eq!(g2.pairing(&[1, 0], &[0, 1]), -1);
        let b2 = sys('B', 2);
        // <mu+nu, -nu> = -1 for mu short.
        assert_eq!(b2.pairing(&[1, 1], &[-1, 0]), -1);
        // <-nu, mu+nu> = -2: the pairing is not symmetric across lengths.
        assert_eq!(b2.pairing(&[-1, 0], &[1, 1]), -2);
    }

    #[test]
    fn positive_order_is_height_then_lex() {
        let s = sys('A', 2);
        assert_eq!(
            s.positive,
            vec![vec![0, 1], vec![1, 0], vec![1, 1]],
        );
        for l in [2usize, 3, 4] {
            let s = sys('A', l);
            let heights: Vec<i64> = s.positive.iter().map(|r| s.height(r)).collect();
            let mut sorted = heights.clone();
            sorted.sort();
            assert_eq!(heights, sorted);
            assert_eq!(s.height(s.highest_root()), *heights.last().unwrap());
        }
    }

    #[test]
    fn b_set_g2_short_simple() {
        let s = sys('G', 2);
        let b = s.b_set(&[1, 0]).unwrap();
        let mut got: Vec<Root> = b;
        got.sort();
        let mut want = vec![
            vec![1, 0],
            vec![0, -1],
            vec![3, 1],
            vec![3, 2],
            vec![-3, -2],
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn b_set_a2() {
        let s = sys('A', 2);
        let mut got = s.b_set(&[1, 0]).unwrap();
        got.sort();
        let mut want = vec![vec![1, 0], vec![0, -1], vec![1, 1]];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn b_set_contains_alpha1_always() {
        for (f, l) in [('A', 3), ('B', 3), ('C', 3), ('D', 4), ('G', 2), ('F', 4)] {
            let s = sys(f, l);
            for alpha in s.roots.clone() {
                let b = s.b_set(&alpha).unwrap();
                assert!(b.contains(&alpha), "{f}{l} alpha {alpha:?}");
            }
        }
    }

    #[test]
    fn root_string_examples() {
        let a2 = sys('A', 2);
        assert_eq!(a2.root_string(&[1, 0], &[0, 1]).unwrap(), (0, 1));
        let g2 = sys('G', 2);
        assert_eq!(g2.root_string(&[1, 0], &[0, 1]).unwrap(), (0, 3));
        let b2 = sys('B', 2);
        // alpha = nu (long), beta = 2mu + nu: neither sum nor difference is a root.
        assert_eq!(b2.root_string(&[1, 0], &[1, 2]).unwrap(), (0, 0));
        assert!(matches!(
            b2.root_string(&[0, 1], &[0, -1]),
            Err(Error::ProportionalRoots)
        ));
    }

    #[test]
    fn root_strings_are_short() {
        for (f, l) in [('A', 4), ('B', 3), ('C', 4), ('D', 4), ('F', 4), ('G', 2)] {
            let s = sys(f, l);
            for a in &s.roots {
                for b in &s.roots {
                    if b == a || RootSystem::is_zero(&RootSystem::add(a, b)) {
                        continue;
                    }
                    let (p, q) = s.root_string(a, b).unwrap();
                    assert!(p + q <= 3, "{f}{l} string too long");
                }
            }
        }
    }

    #[test]
    fn deletion_g2_uses_rule_one_only() {
        let s = sys('G', 2);
        let out = s.deletion_closure(&[1, 0]).unwrap();
        assert_eq!(out.survivors, vec![vec![1, 0]]);
        assert_eq!(out.deleted.len(), 11);
        assert!(out
            .deleted
            .iter()
            .all(|d| d.rule == DeletionRule::SumWithB));
    }

    #[test]
    fn deletion_b2_needs_rule_two() {
        let s = sys('B', 2);
        let mu = vec![0i64, 1];
        let out = s.deletion_closure(&mu).unwrap();
        assert_eq!(out.survivors, vec![mu.clone()]);
        let rule2: Vec<Root> = out
            .deleted
            .iter()
            .filter(|d| d.rule == DeletionRule::OddPairing)
            .map(|d| d.root.clone())
            .collect();
        let mut got = rule2;
        got.sort();
        // -nu and 2mu + nu survive rule 1 and fall to rule 2.
        let mut want = vec![vec![-1i64, 0], vec![1, 2]];
        want.sort();
        assert_eq!(got, want);
        for d in &out.deleted {
            if d.rule == DeletionRule::OddPairing {
                // The witness is orthogonal to mu; in B2 that forces mu + nu.
                assert!(d.witness == vec![1, 1] || d.witness == vec![-1, -1]);
            }
        }
    }

    #[test]
    fn deletion_covers_every_choice_rank_2_to_8() {
        let mut cases = vec![('E', 6), ('E', 7), ('E', 8), ('F', 4), ('G', 2)];
        for l in 2..=8 {
            cases.push(('A', l));
            cases.push(('B', l));
            cases.push(('C', l));
            if l >= 4 {
                cases.push(('D', l));
            }
        }
        for (f, l) in cases {
            let s = sys(f, l);
            for alpha in s.roots.clone() {
                let out = s.deletion_closure(&alpha).unwrap();
                assert_eq!(
                    out.survivors,
                    vec![alpha.clone()],
                    "{f}{l} alpha {alpha:?}"
                );
            }
        }
    }

    #[test]
    fn negation_stays_in_system() {
        let s = sys('F', 4);
        for r in &s.roots {
            assert!(s.is_root(&RootSystem::negate(r)));
        }
    }
}
