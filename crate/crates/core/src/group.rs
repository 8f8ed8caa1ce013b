//! Chevalley group elements over a finite local ring in the adjoint
//! representation: generators, words, enumeration and relation checks.
//!
//! Elements are dense matrices of ring codes and always carry their
//! inverse, so no matrix inversion over the ring is ever performed.
//! Equality is matrix equality; faithfulness on the instances used is
//! backed by the triviality of the computed centre.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lie::ChevalleyData;
use crate::rings::LocalRing;
use crate::roots::{self, Root, RootSystem};

/// Default cap on group enumeration, in elements.
pub const DEFAULT_CAP: usize = 2_000_000;

/// Dense square matrix of ring codes, row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RMat {
    pub n: usize,
    pub a: Vec<u16>,
}

impl RMat {
    pub fn at(&self, r: usize, c: usize) -> u16 {
        self.a[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u16) {
        self.a[r * self.n + c] = v;
    }
}

/// Group element together with its inverse.
///
/// Equality and hashing use only `mat`; `inv` is determined by it.
#[derive(Clone, Debug)]
pub struct GroupElement {
    pub mat: RMat,
    pub inv: RMat,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}

impl Eq for GroupElement {}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

/// A root system, a local ring, and the cached generator templates
/// needed to evaluate one-parameter subgroups quickly.
pub struct GroupContext {
    pub lie: ChevalleyData,
    pub ring: LocalRing,
    /// Per root index, per divided power k >= 1, the nonzero entries
    /// (position, code) of the k-th template matrix.
    templates: Vec<Vec<Vec<(usize, u16)>>>,
    /// Per root index, the diagonal exponent of each basis row.
    torus_exps: Vec<Vec<i64>>,
}

impl GroupContext {
    pub fn new(sys: RootSystem, ring: LocalRing) -> Result<GroupContext> {
        crate::rings::check_required_units(sys.family, &ring)?;
        let lie = ChevalleyData::new(sys);
        let m = lie.dim;
        let mut templates = Vec::with_capacity(lie.sys.roots.len());
        let mut torus_exps = Vec::with_capacity(lie.sys.roots.len());
        for root in &lie.sys.roots {
            let full = lie.x_template(root);
            let mut sparse = Vec::with_capacity(full.len().saturating_sub(1));
            for t in full.iter().skip(1) {
                let mut entries = Vec::new();
                for r in 0..m {
                    for c in 0..m {
                        let v = t.at(r, c);
                        if v != 0 {
                            entries.push((r * m + c, ring.from_int(v)));
                        }
                    }
                }
                sparse.push(entries);
            }
            templates.push(sparse);
            torus_exps.push(lie.torus_exponents(root));
        }
        Ok(GroupContext {
            lie,
            ring,
            templates,
            torus_exps,
        })
    }

    /// Builds a context from names like `"B2"` and `"zmod:4"`.
    pub fn parse(system: &str, ring: &str) -> Result<GroupContext> {
        let sys = roots::parse_system(system)?;
        let ring = LocalRing::parse(ring)?;
        GroupContext::new(sys, ring)
    }

    pub fn dim(&self) -> usize {
        self.lie.dim
    }

    pub fn name(&self) -> String {
        format!("{} over {}", self.lie.sys.name(), self.ring.desc)
    }

    fn mat_identity(&self) -> RMat {
        let n = self.dim();
        let mut a = vec![0u16; n * n];
        let one = self.ring.one();
        for i in 0..n {
            a[i * n + i] = one;
        }
        RMat { n, a }
    }

    pub fn identity(&self) -> GroupElement {
        let m = self.mat_identity();
        GroupElement {
            mat: m.clone(),
            inv: m,
        }
    }

    pub fn mat_mul(&self, a: &RMat, b: &RMat) -> RMat {
        let n = a.n;
        debug_assert_eq!(n, b.n);
        let r = &self.ring;
        let mut out = vec![0u16; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a.a[i * n + k];
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let bkj = b.a[k * n + j];
                    if bkj == 0 {
                        continue;
                    }
                    let idx = i * n + j;
                    out[idx] = r.add(out[idx], r.mul(aik, bkj));
                }
            }
        }
        RMat { n, a: out }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            mat: self.mat_mul(&a.mat, &b.mat),
            inv: self.mat_mul(&b.inv, &a.inv),
        }
    }

    pub fn inv(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            mat: a.inv.clone(),
            inv: a.mat.clone(),
        }
    }

    /// `conjugate(g, h) = h g h^{-1}`: the second argument conjugates
    /// the first.
    pub fn conjugate(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let m = self.mat_mul(&self.mat_mul(&h.mat, &g.mat), &h.inv);
        let i = self.mat_mul(&self.mat_mul(&h.mat, &g.inv), &h.inv);
        GroupElement { mat: m, inv: i }
    }

    /// `commutator(a, b) = a b a^{-1} b^{-1}`.
    pub fn commutator(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.mul(&self.mul(a, b), &self.mul(&self.inv(a), &self.inv(b)))
    }

    pub fn pow(&self, g: &GroupElement, e: i64) -> GroupElement {
        let base = if e < 0 { self.inv(g) } else { g.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.identity();
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            k >>= 1;
            if k > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    fn eval_x(&self, ri: usize, t: u16) -> RMat {
        let mut m = self.mat_identity();
        let mut tk = self.ring.one();
        for entries in &self.templates[ri] {
            tk = self.ring.mul(tk, t);
            if tk == 0 {
                break;
            }
            for &(pos, code) in entries {
                m.a[pos] = self.ring.add(m.a[pos], self.ring.mul(tk, code));
            }
        }
        m
    }

    /// Root element `x_alpha(t)`.
    pub fn x(&self, alpha: &[i64], t: u16) -> Result<GroupElement> {
        let ri = self.lie.sys.root_index(alpha)?;
        Ok(GroupElement {
            mat: self.eval_x(ri, t),
            inv: self.eval_x(ri, self.ring.neg(t)),
        })
    }

    /// Torus element `h_alpha(t)`, defined for unit `t`.
    pub fn h(&self, alpha: &[i64], t: u16) -> Result<GroupElement> {
        let ri = self.lie.sys.root_index(alpha)?;
        if !self.ring.is_unit(t) {
            return Err(Error::NonUnitInverse(format!(
                "torus parameter {t} in {}",
                self.ring.desc
            )));
        }
        let mut m = self.mat_identity();
        let mut i = self.mat_identity();
        for (r, &e) in self.torus_exps[ri].iter().enumerate() {
            m.set(r, r, self.ring.pow(t, e)?);
            i.set(r, r, self.ring.pow(t, -e)?);
        }
        Ok(GroupElement { mat: m, inv: i })
    }

    /// Weyl element `w_alpha(t) = x_alpha(t) x_{-alpha}(-t^{-1}) x_alpha(t)`,
    /// defined for unit `t`.
    pub fn w(&self, alpha: &[i64], t: u16) -> Result<GroupElement> {
        let ti = self.inv_code(t)?;
        let neg = RootSystem::negate(alpha);
        let a = self.x(alpha, t)?;
        let b = self.x(&neg, self.ring.neg(ti))?;
        Ok(self.mul(&self.mul(&a, &b), &a))
    }

    fn inv_code(&self, t: u16) -> Result<u16> {
        self.ring.inv(t)
    }

    /// The full one-parameter subgroup `{x_alpha(t) : t in R}` in code
    /// order of `t`.
    pub fn x_subgroup(&self, alpha: &[i64]) -> Result<Vec<GroupElement>> {
        let mut out = Vec::with_capacity(self.ring.size);
        for t in self.ring.elements() {
            out.push(self.x(alpha, t)?);
        }
        Ok(out)
    }

    /// Context over the residue field of the same system.
    pub fn reduce_context(&self) -> Result<GroupContext> {
        let sys = roots::build_root_system(self.lie.sys.family, self.lie.sys.rank)?;
        GroupContext::new(sys, self.ring.residue_field()?)
    }

    /// Entrywise reduction along `R -> R/J`; a group homomorphism.
    pub fn reduce_element(&self, g: &GroupElement) -> GroupElement {
        let map = |m: &RMat| RMat {
            n: m.n,
            a: m.a.iter().map(|&c| self.ring.residue(c)).collect(),
        };
        GroupElement {
            mat: map(&g.mat),
            inv: map(&g.inv),
        }
    }
}

/// Generator kind in a word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    X,
    W,
    H,
}

/// One factor of a generator word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordAtom {
    pub kind: GenKind,
    pub root: Root,
    pub param: i64,
}

/// Maps an integer literal to a ring code: values already in
/// `0..size` are taken as codes, anything else goes through the
/// canonical map from the integers.
pub fn param_code(ring: &LocalRing, v: i64) -> u16 {
    if v >= 0 && (v as usize) < ring.size {
        v as u16
    } else {
        ring.from_int(v)
    }
}

fn atom_err(atom: &str, why: &str) -> Error {
    Error::WordParse(atom.to_string(), why.to_string())
}

fn parse_atom(atom: &str) -> Result<WordAtom> {
    let s = atom.trim();
    let mut chars = s.char_indices();
    let kind = match chars.next() {
        Some((_, 'x')) => GenKind::X,
        Some((_, 'w')) => GenKind::W,
        Some((_, 'h')) => GenKind::H,
        Some(_) => return Err(atom_err(s, "expected generator kind x, w or h")),
        None => return Err(atom_err(s, "empty factor")),
    };
    let rest = &s[1..];
    if !rest.starts_with('[') {
        return Err(atom_err(s, "expected `[` after the generator kind"));
    }
    let close = rest
        .find(']')
        .ok_or_else(|| atom_err(s, "unterminated root literal"))?;
    let mut root = Vec::new();
    for part in rest[1..close].split(',') {
        let v: i64 = part
            .trim()
            .parse()
            .map_err(|_| atom_err(s, "bad integer in root literal"))?;
        root.push(v);
    }
    if root.is_empty() {
        return Err(atom_err(s, "empty root literal"));
    }
    let tail = &rest[close + 1..];
    if !tail.starts_with('(') || !tail.ends_with(')') || tail.len() < 3 {
        return Err(atom_err(s, "expected `(<integer>)` parameter"));
    }
    let param: i64 = tail[1..tail.len() - 1]
        .trim()
        .parse()
        .map_err(|_| atom_err(s, "bad integer parameter"))?;
    Ok(WordAtom { kind, root, param })
}

/// Parses a generator word such as `x[1,0](2) * h[0,1](3)`. The empty
/// word denotes the identity.
pub fn parse_word(src: &str) -> Result<Vec<WordAtom>> {
    let src = src.trim();
    if src.is_empty() {
        return Ok(Vec::new());
    }
    src.split('*').map(parse_atom).collect()
}

/// Evaluates a parsed word left to right.
pub fn eval_word(ctx: &GroupContext, atoms: &[WordAtom]) -> Result<GroupElement> {
    let mut acc = ctx.identity();
    for atom in atoms {
        let t = param_code(&ctx.ring, atom.param);
        let g = match atom.kind {
            GenKind::X => ctx.x(&atom.root, t)?,
            GenKind::W => ctx.w(&atom.root, t).map_err(|e| torus_err(e, t))?,
            GenKind::H => ctx.h(&atom.root, t).map_err(|e| torus_err(e, t))?,
        };
        acc = ctx.mul(&acc, &g);
    }
    Ok(acc)
}

fn torus_err(e: Error, t: u16) -> Error {
    match e {
        Error::NonUnitInverse(_) => Error::NonUnitTorusParameter(t.to_string()),
        other => other,
    }
}

/// Enumerated finite group: elements in breadth-first order from the
/// identity, each with the generator step that first produced it.
pub struct FiniteGroupTable {
    pub elems: Vec<GroupElement>,
    pub index: HashMap<RMat, usize>,
    pub inv_idx: Vec<usize>,
    /// `(parent, generator)` with `elems[i] = elems[parent] * gens[generator]`;
    /// `None` exactly for the identity.
    pub provenance: Vec<Option<(usize, usize)>>,
    pub gens: Vec<GroupElement>,
    /// Table index of each generator.
    pub gen_idx: Vec<usize>,
}

impl FiniteGroupTable {
    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn idx_of(&self, g: &GroupElement) -> Option<usize> {
        self.index.get(&g.mat).copied()
    }

    /// Reconstructs the generator word recorded by provenance.
    pub fn generator_word(&self, mut i: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some((parent, gen)) = self.provenance[i] {
            out.push(gen);
            i = parent;
        }
        out.reverse();
        out
    }
}

/// Generators of the elementary subgroup: all `x_alpha(t)`, `t != 0`.
pub fn e_generators(ctx: &GroupContext) -> Result<Vec<GroupElement>> {
    let mut out = Vec::new();
    let roots = ctx.lie.sys.roots.clone();
    for root in &roots {
        for t in ctx.ring.elements().skip(1) {
            out.push(ctx.x(root, t)?);
        }
    }
    Ok(out)
}

/// Generators of the adjoint group: the elementary ones plus all
/// `h_alpha(u)` for units `u`.
pub fn g_generators(ctx: &GroupContext) -> Result<Vec<GroupElement>> {
    let mut out = e_generators(ctx)?;
    let roots = ctx.lie.sys.roots.clone();
    for root in &roots {
        for &u in ctx.ring.units() {
            if u != ctx.ring.one() {
                out.push(ctx.h(root, u)?);
            }
        }
    }
    Ok(out)
}

/// Breadth-first enumeration of the subgroup generated by `gens`.
pub fn enumerate_group(
    ctx: &GroupContext,
    gens: &[GroupElement],
    cap: usize,
) -> Result<FiniteGroupTable> {
    let mut elems = vec![ctx.identity()];
    let mut index = HashMap::new();
    index.insert(elems[0].mat.clone(), 0usize);
    let mut provenance = vec![None];
    let mut i = 0;
    while i < elems.len() {
        for (gi, g) in gens.iter().enumerate() {
            let prod = ctx.mul(&elems[i], g);
            if !index.contains_key(&prod.mat) {
                index.insert(prod.mat.clone(), elems.len());
                elems.push(prod);
                provenance.push(Some((i, gi)));
                if elems.len() > cap {
                    return Err(Error::GroupTooLarge { cap });
                }
            }
        }
        i += 1;
    }
    let inv_idx = elems
        .iter()
        .map(|e| {
            *index
                .get(&e.inv)
                .expect("inverse of an enumerated element is enumerated")
        })
        .collect();
    let gen_idx = gens
        .iter()
        .map(|g| *index.get(&g.mat).expect("generator is enumerated"))
        .collect();
    Ok(FiniteGroupTable {
        elems,
        index,
        inv_idx,
        provenance,
        gens: gens.to_vec(),
        gen_idx,
    })
}

pub fn mul_idx(ctx: &GroupContext, t: &FiniteGroupTable, i: usize, j: usize) -> usize {
    let m = ctx.mat_mul(&t.elems[i].mat, &t.elems[j].mat);
    *t.index.get(&m).expect("product of table elements is in the table")
}

/// Index of `g x g^{-1}` for table indices `g`, `x`.
pub fn conj_idx(ctx: &GroupContext, t: &FiniteGroupTable, g: usize, x: usize) -> usize {
    let m = ctx.mat_mul(
        &ctx.mat_mul(&t.elems[g].mat, &t.elems[x].mat),
        &t.elems[g].inv,
    );
    *t.index.get(&m).expect("conjugate of a table element is in the table")
}

fn commutes(ctx: &GroupContext, a: &GroupElement, b: &GroupElement) -> bool {
    ctx.mat_mul(&a.mat, &b.mat) == ctx.mat_mul(&b.mat, &a.mat)
}

/// Indices of all table elements commuting with `g`.
pub fn centralizer_of(
    ctx: &GroupContext,
    t: &FiniteGroupTable,
    g: &GroupElement,
) -> Vec<usize> {
    (0..t.order())
        .filter(|&i| commutes(ctx, &t.elems[i], g))
        .collect()
}

/// Centre of the table group; trivial on every instance this crate
/// materializes, which certifies faithfulness of the representation.
pub fn center(ctx: &GroupContext, t: &FiniteGroupTable) -> Vec<usize> {
    (0..t.order())
        .filter(|&i| t.gens.iter().all(|g| commutes(ctx, &t.elems[i], g)))
        .collect()
}

/// Conjugacy classes, represented by the first element of each class
/// in table order.
pub struct ConjClasses {
    pub class_of: Vec<usize>,
    pub reps: Vec<usize>,
}

impl ConjClasses {
    pub fn count(&self) -> usize {
        self.reps.len()
    }

    pub fn class_members(&self, cid: usize) -> Vec<usize> {
        self.class_of
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c == cid)
            .map(|(i, _)| i)
            .collect()
    }
}

pub fn conjugacy_classes(ctx: &GroupContext, t: &FiniteGroupTable) -> ConjClasses {
    let n = t.order();
    let mut class_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for start in 0..n {
        if class_of[start] != usize::MAX {
            continue;
        }
        let cid = reps.len();
        reps.push(start);
        class_of[start] = cid;
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            for &g in &t.gen_idx {
                let y = conj_idx(ctx, t, g, x);
                if class_of[y] == usize::MAX {
                    class_of[y] = cid;
                    queue.push(y);
                }
            }
        }
    }
    ConjClasses { class_of, reps }
}

/// Compact index set over table elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxSet {
    words: Vec<u64>,
    count: usize,
}

impl IdxSet {
    pub fn new(n: usize) -> IdxSet {
        IdxSet {
            words: vec![0; n.div_ceil(64)],
            count: 0,
        }
    }

    pub fn insert(&mut self, i: usize) -> bool {
        let w = i / 64;
        let b = 1u64 << (i % 64);
        if self.words[w] & b == 0 {
            self.words[w] |= b;
            self.count += 1;
            true
        } else {
            false
        }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rem = bits;
            std::iter::from_fn(move || {
                if rem == 0 {
                    None
                } else {
                    let b = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }

    pub fn is_subset(&self, other: &IdxSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersect(&self, other: &IdxSet) -> IdxSet {
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| a & b)
            .collect();
        let count = words.iter().map(|w| w.count_ones() as usize).sum();
        IdxSet { words, count }
    }

    pub fn from_indices(n: usize, idxs: &[usize]) -> IdxSet {
        let mut s = IdxSet::new(n);
        for &i in idxs {
            s.insert(i);
        }
        s
    }
}

/// Closure of `seeds` under right multiplication, i.e. the subgroup
/// they generate. Stops early, reporting truncation, once the count
/// exceeds `stop_above`.
pub fn subgroup_closure(
    ctx: &GroupContext,
    t: &FiniteGroupTable,
    seeds: &[usize],
    stop_above: Option<usize>,
) -> (IdxSet, bool) {
    let mut set = IdxSet::new(t.order());
    set.insert(0);
    let mut queue = vec![0usize];
    while let Some(x) = queue.pop() {
        for &s in seeds {
            let y = mul_idx(ctx, t, x, s);
            if set.insert(y) {
                if let Some(cap) = stop_above {
                    if set.count() > cap {
                        return (set, true);
                    }
                }
                queue.push(y);
            }
        }
    }
    (set, false)
}

/// Normal closure of `seeds` in the table group, by growing the
/// generating set with missing conjugates. Stops early, reporting
/// truncation, once the count exceeds `stop_above`.
pub fn normal_closure(
    ctx: &GroupContext,
    t: &FiniteGroupTable,
    seeds: &[usize],
    stop_above: Option<usize>,
) -> (IdxSet, bool) {
    let mut gens: Vec<usize> = seeds.to_vec();
    loop {
        let (set, truncated) = subgroup_closure(ctx, t, &gens, stop_above);
        if truncated {
            return (set, true);
        }
        let mut missing = None;
        'scan: for x in set.iter() {
            for &g in &t.gen_idx {
                let y = conj_idx(ctx, t, g, x);
                if !set.contains(y) {
                    missing = Some(y);
                    break 'scan;
                }
            }
        }
        match missing {
            Some(y) => gens.push(y),
            None => return (set, false),
        }
    }
}

/// Verifies `x_gamma(1) x_{-gamma}(s) x_gamma(1)^{-1} =
/// h_gamma(1/(1-s)) x_gamma(s^2 - s) x_{-gamma}(s/(1-s))`,
/// which requires `1 - s` to be a unit.
pub fn sl2_identity_check(ctx: &GroupContext, gamma: &[i64], s: u16) -> Result<bool> {
    let r = &ctx.ring;
    let om = r.sub(r.one(), s);
    let omi = r.inv(om)?;
    let neg = RootSystem::negate(gamma);
    let a = ctx.x(gamma, r.one())?;
    let lhs = ctx.conjugate(&ctx.x(&neg, s)?, &a);
    let rhs = ctx.mul(
        &ctx.mul(&ctx.h(gamma, omi)?, &ctx.x(gamma, r.sub(r.mul(s, s), s))?),
        &ctx.x(&neg, r.mul(s, omi))?,
    );
    Ok(lhs == rhs)
}

/// Identity counts from a full generator relation sweep.
#[derive(Clone, Copy, Debug, Default)]
pub struct SteinbergCounts {
    pub additivity: usize,
    pub torus: usize,
    pub torus_factorization: usize,
    pub commutator: usize,
}

/// Checks, exhaustively over ring parameters:
/// additivity of each root subgroup, the torus action
/// `h_alpha(t) x_beta(s) h_alpha(t)^{-1} = x_beta(t^{<beta,alpha>} s)`,
/// the factorization `h_alpha(t) = w_alpha(t) w_alpha(1)^{-1}`, and the
/// commutator formula for all non-proportional root pairs.
pub fn check_steinberg(ctx: &GroupContext) -> Result<SteinbergCounts> {
    let mut counts = SteinbergCounts::default();
    let r = &ctx.ring;
    let roots = ctx.lie.sys.roots.clone();
    for alpha in &roots {
        for s in r.elements() {
            let xs = ctx.x(alpha, s)?;
            for t in r.elements() {
                let lhs = ctx.mul(&xs, &ctx.x(alpha, t)?);
                if lhs != ctx.x(alpha, r.add(s, t))? {
                    return Err(Error::IdentityViolated(format!(
                        "additivity at {alpha:?}, s={s}, t={t} in {}",
                        ctx.name()
                    )));
                }
                counts.additivity += 1;
            }
        }
    }
    for alpha in &roots {
        for &t in r.units() {
            let h = ctx.h(alpha, t)?;
            let w = ctx.mul(&ctx.w(alpha, t)?, &ctx.inv(&ctx.w(alpha, r.one())?));
            if h != w {
                return Err(Error::IdentityViolated(format!(
                    "torus factorization at {alpha:?}, t={t} in {}",
                    ctx.name()
                )));
            }
            counts.torus_factorization += 1;
            for beta in &roots {
                let e = ctx.lie.sys.pairing(beta, alpha);
                let te = r.pow(t, e)?;
                for s in r.elements() {
                    let lhs = ctx.conjugate(&ctx.x(beta, s)?, &h);
                    if lhs != ctx.x(beta, r.mul(te, s))? {
                        return Err(Error::IdentityViolated(format!(
                            "torus action at {alpha:?}, {beta:?}, t={t}, s={s} in {}",
                            ctx.name()
                        )));
                    }
                    counts.torus += 1;
                }
            }
        }
    }
    for alpha in &roots {
        for beta in &roots {
            if alpha == beta || *beta == RootSystem::negate(alpha) {
                continue;
            }
            let factors = ctx.lie.commutator_constants(alpha, beta)?;
            for s in r.elements() {
                let xa = ctx.x(alpha, s)?;
                for t in r.elements() {
                    let lhs = ctx.commutator(&xa, &ctx.x(beta, t)?);
                    let mut rhs = ctx.identity();
                    for f in &factors {
                        let c = r.from_int(f.c);
                        let param = r.mul(
                            c,
                            r.mul(r.pow(s, f.i as i64)?, r.pow(t, f.j as i64)?),
                        );
                        rhs = ctx.mul(&rhs, &ctx.x(&f.root, param)?);
                    }
                    if lhs != rhs {
                        return Err(Error::IdentityViolated(format!(
                            "commutator formula at {alpha:?}, {beta:?}, s={s}, t={t} in {}",
                            ctx.name()
                        )));
                    }
                    counts.commutator += 1;
                }
            }
        }
    }
    Ok(counts)
}

/// Result of comparing the derived subgroup of the adjoint group with
/// the elementary subgroup.
#[derive(Clone, Copy, Debug)]
pub struct CommutantReport {
    pub group_order: usize,
    pub elementary_order: usize,
    pub derived_order: usize,
    pub derived_equals_elementary: bool,
    /// Least `w` such that every derived element is a product of `w`
    /// commutators.
    pub width: usize,
}

/// Enumerates the adjoint group, verifies that its derived subgroup is
/// the elementary subgroup, and measures empirical commutator width.
pub fn check_commutant(ctx: &GroupContext, width_cap: usize, cap: usize) -> Result<CommutantReport> {
    let ggens = g_generators(ctx)?;
    let table = enumerate_group(ctx, &ggens, cap)?;
    let egens = e_generators(ctx)?;
    let e_idx: Vec<usize> = egens
        .iter()
        .map(|g| table.idx_of(g).expect("elementary generator lies in the adjoint group"))
        .collect();
    let (e_set, _) = subgroup_closure(ctx, &table, &e_idx, None);

    let mut seed_comms = Vec::new();
    let mut seen = IdxSet::new(table.order());
    for &a in &table.gen_idx {
        for &b in &table.gen_idx {
            let c = table.idx_of(&ctx.commutator(&table.elems[a], &table.elems[b]))
                .expect("commutator lies in the table");
            if seen.insert(c) {
                seed_comms.push(c);
            }
        }
    }
    let (derived, _) = normal_closure(ctx, &table, &seed_comms, None);

    // Full commutator set via class representatives: the set of all
    // commutators is closed under conjugation, and commutators against
    // a fixed representative sweep each class once conjugates are
    // added back.
    let classes = conjugacy_classes(ctx, &table);
    let mut comm_set = IdxSet::new(table.order());
    let mut frontier = Vec::new();
    for &rep in &classes.reps {
        let re = &table.elems[rep];
        for i in 0..table.order() {
            let c = table
                .idx_of(&ctx.commutator(re, &table.elems[i]))
                .expect("commutator lies in the table");
            if comm_set.insert(c) {
                frontier.push(c);
            }
        }
    }
    while let Some(x) = frontier.pop() {
        for &g in &table.gen_idx {
            let y = conj_idx(ctx, &table, g, x);
            if comm_set.insert(y) {
                frontier.push(y);
            }
        }
    }

    let mut width = 1;
    let mut layer = comm_set.clone();
    while !derived.is_subset(&layer) {
        width += 1;
        if width > width_cap {
            return Err(Error::WidthCapExceeded(width_cap));
        }
        let mut next = layer.clone();
        for x in layer.iter() {
            for c in comm_set.iter() {
                next.insert(mul_idx(ctx, &table, x, c));
            }
        }
        if next.count() == layer.count() {
            return Err(Error::WidthCapExceeded(width_cap));
        }
        layer = next;
    }

    Ok(CommutantReport {
        group_order: table.order(),
        elementary_order: e_set.count(),
        derived_order: derived.count(),
        derived_equals_elementary: derived == e_set,
        width,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::LocalRing;

    fn ctx(system: &str, ring: &str) -> GroupContext {
        GroupContext::parse(system, ring).unwrap()
    }

    fn psl3_order(q: usize) -> usize {
        let d = if (q - 1) % 3 == 0 { 3 } else { 1 };
        q * q * q * (q * q * q - 1) * (q * q - 1) / d
    }

    #[test]
    fn x_at_zero_is_identity_and_inverse_negates() {
        let c = ctx("A2", "zmod:4");
        for root in c.lie.sys.roots.clone() {
            assert_eq!(c.x(&root, 0).unwrap(), c.identity());
            for t in c.ring.elements() {
                let g = c.x(&root, t).unwrap();
                assert_eq!(c.mat_mul(&g.mat, &g.inv), c.identity().mat);
                assert_eq!(c.inv(&g), c.x(&root, c.ring.neg(t)).unwrap());
            }
        }
    }

    #[test]
    fn conjugation_convention_is_second_acts_on_first() {
        let c = ctx("A2", "gf:3");
        let g = c.x(&[1, 0], 1).unwrap();
        let h = c.w(&[0, 1], 1).unwrap();
        let conj = c.conjugate(&g, &h);
        let manual = c.mul(&c.mul(&h, &g), &c.inv(&h));
        assert_eq!(conj, manual);
        let a = c.x(&[1, 1], 2).unwrap();
        let comm = c.commutator(&a, &h);
        let manual = c.mul(&c.mul(&a, &h), &c.mul(&c.inv(&a), &c.inv(&h)));
        assert_eq!(comm, manual);
    }

    #[test]
    fn torus_matches_weyl_factorization_across_systems() {
        for (sys, ring) in [("A2", "gf:3"), ("B2", "gf:3"), ("G2", "gf:5"), ("A2", "zmod:4")] {
            let c = ctx(sys, ring);
            for root in c.lie.sys.roots.clone() {
                for &t in c.ring.units() {
                    let h = c.h(&root, t).unwrap();
                    let w = c
                        .mul(&c.w(&root, t).unwrap(), &c.inv(&c.w(&root, 1).unwrap()));
                    assert_eq!(h, w, "{sys}/{ring} at {root:?}, t={t}");
                }
            }
        }
    }

    #[test]
    fn torus_rejects_non_units() {
        let c = ctx("A2", "zmod:4");
        assert!(matches!(c.h(&[1, 0], 2), Err(Error::NonUnitInverse(_))));
        assert!(matches!(c.h(&[1, 0], 0), Err(Error::NonUnitInverse(_))));
    }

    #[test]
    fn steinberg_relations_hold_on_small_instances() {
        for (sys, ring) in [("A2", "gf:2"), ("A2", "zmod:4"), ("B2", "gf:3")] {
            let counts = check_steinberg(&ctx(sys, ring)).unwrap();
            assert!(counts.additivity > 0);
            assert!(counts.torus > 0);
            assert!(counts.commutator > 0);
        }
    }

    #[test]
    fn sl2_identity_exhaustive_on_zmod4() {
        let c = ctx("A2", "zmod:4");
        for root in c.lie.sys.roots.clone() {
            for s in c.ring.elements() {
                let om = c.ring.sub(1, s);
                let got = sl2_identity_check(&c, &root, s);
                if c.ring.is_unit(om) {
                    assert!(got.unwrap(), "root {root:?}, s={s}");
                } else {
                    assert!(matches!(got, Err(Error::NonUnitInverse(_))));
                }
            }
        }
    }

    #[test]
    fn word_parsing_and_evaluation() {
        let c = ctx("A2", "zmod:4");
        let atoms = parse_word("x[1,0](1) * h[0,1](3) * w[1,1](1)").unwrap();
        assert_eq!(atoms.len(), 3);
        assert_eq!(atoms[1].kind, GenKind::H);
        let g = eval_word(&c, &atoms).unwrap();
        let manual = c.mul(
            &c.mul(&c.x(&[1, 0], 1).unwrap(), &c.h(&[0, 1], 3).unwrap()),
            &c.w(&[1, 1], 1).unwrap(),
        );
        assert_eq!(g, manual);

        // Out-of-range literals go through the canonical integer map.
        let lifted = eval_word(&c, &parse_word("x[1,0](5)").unwrap()).unwrap();
        assert_eq!(lifted, c.x(&[1, 0], 1).unwrap());
        let negated = eval_word(&c, &parse_word("x[1,0](-1)").unwrap()).unwrap();
        assert_eq!(negated, c.x(&[1, 0], 3).unwrap());

        assert!(matches!(parse_word("y[1,0](1)"), Err(Error::WordParse(..))));
        assert!(matches!(parse_word("x[1,0]"), Err(Error::WordParse(..))));
        assert_eq!(eval_word(&c, &parse_word("").unwrap()).unwrap(), c.identity());
        assert!(matches!(
            eval_word(&c, &parse_word("h[1,0](0)").unwrap()),
            Err(Error::NonUnitTorusParameter(_))
        ));
        assert!(matches!(
            eval_word(&c, &parse_word("x[2,2](1)").unwrap()),
            Err(Error::NoSuchRoot(_))
        ));
    }

    #[test]
    fn enumerates_psl3_orders_and_trivial_center() {
        let c2 = ctx("A2", "gf:2");
        let t2 = enumerate_group(&c2, &e_generators(&c2).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(t2.order(), 168);
        assert_eq!(t2.order(), psl3_order(2));
        assert_eq!(center(&c2, &t2), vec![0]);

        let c3 = ctx("A2", "gf:3");
        let t3 = enumerate_group(&c3, &e_generators(&c3).unwrap(), DEFAULT_CAP).unwrap();
        assert_eq!(t3.order(), 5616);
        assert_eq!(t3.order(), psl3_order(3));
    }

    #[test]
    fn enumeration_respects_cap() {
        let c = ctx("A2", "gf:3");
        let err = enumerate_group(&c, &e_generators(&c).unwrap(), 100);
        assert!(matches!(err, Err(Error::GroupTooLarge { cap: 100 })));
    }

    #[test]
    fn provenance_words_reevaluate() {
        let c = ctx("A2", "gf:2");
        let gens = e_generators(&c).unwrap();
        let t = enumerate_group(&c, &gens, DEFAULT_CAP).unwrap();
        for i in [0, 1, 10, 100, t.order() - 1] {
            let word = t.generator_word(i);
            let mut acc = c.identity();
            for gi in word {
                acc = c.mul(&acc, &gens[gi]);
            }
            assert_eq!(acc, t.elems[i]);
        }
        for i in 0..t.order() {
            assert_eq!(mul_idx(&c, &t, i, t.inv_idx[i]), 0);
        }
    }

    #[test]
    fn centralizer_of_root_element_in_psl3_f2_has_order_eight() {
        let c = ctx("A2", "gf:2");
        let t = enumerate_group(&c, &e_generators(&c).unwrap(), DEFAULT_CAP).unwrap();
        let alpha1 = c.lie.sys.simple_root(0);
        let g = c.x(&alpha1, 1).unwrap();
        assert_eq!(centralizer_of(&c, &t, &g).len(), 8);
    }

    #[test]
    fn conjugacy_classes_partition_psl3_f2() {
        let c = ctx("A2", "gf:2");
        let t = enumerate_group(&c, &e_generators(&c).unwrap(), DEFAULT_CAP).unwrap();
        let cls = conjugacy_classes(&c, &t);
        assert_eq!(cls.count(), 6);
        let total: usize = (0..cls.count()).map(|cid| cls.class_members(cid).len()).sum();
        assert_eq!(total, t.order());
        assert_eq!(cls.class_of[0], 0);
        assert_eq!(cls.class_members(0), vec![0]);
    }

    #[test]
    fn reduction_is_a_homomorphism_onto_the_residue_instance() {
        let c = ctx("A2", "zmod:4");
        let k = c.reduce_context().unwrap();
        let a = eval_word(&c, &parse_word("x[1,0](3) * w[0,1](1)").unwrap()).unwrap();
        let b = eval_word(&c, &parse_word("h[1,1](3) * x[0,-1](2)").unwrap()).unwrap();
        let red = |g: &GroupElement| c.reduce_element(g);
        assert_eq!(red(&c.mul(&a, &b)).mat, k.mat_mul(&red(&a).mat, &red(&b).mat));
        assert_eq!(red(&c.x(&[1, 0], 2).unwrap()), k.identity());
        assert_eq!(red(&c.h(&[1, 0], 3).unwrap()), k.identity());
    }

    #[test]
    fn subgroup_and_normal_closures() {
        let c = ctx("A2", "gf:2");
        let t = enumerate_group(&c, &e_generators(&c).unwrap(), DEFAULT_CAP).unwrap();
        let alpha1 = c.lie.sys.simple_root(0);
        let xi = t.idx_of(&c.x(&alpha1, 1).unwrap()).unwrap();
        let (h, truncated) = subgroup_closure(&c, &t, &[xi], None);
        assert!(!truncated);
        assert_eq!(h.count(), 2);
        // A simple group: the normal closure of any non-identity
        // element is everything.
        let (nc, _) = normal_closure(&c, &t, &[xi], None);
        assert_eq!(nc.count(), t.order());
        let (_, truncated) = normal_closure(&c, &t, &[xi], Some(84));
        assert!(truncated);
    }

    #[test]
    fn commutant_of_psl3_f2_is_itself_with_width_one() {
        let c = ctx("A2", "gf:2");
        let report = check_commutant(&c, 8, DEFAULT_CAP).unwrap();
        assert_eq!(report.group_order, 168);
        assert_eq!(report.elementary_order, 168);
        assert!(report.derived_equals_elementary);
        assert_eq!(report.width, 1);
    }

    #[test]
    fn required_units_are_enforced_at_construction() {
        assert!(matches!(
            GroupContext::parse("B2", "zmod:4"),
            Err(Error::MissingRequiredUnits(_))
        ));
        assert!(matches!(
            GroupContext::parse("G2", "zmod:9"),
            Err(Error::MissingRequiredUnits(_))
        ));
    }

    #[test]
    fn param_code_literal_rule() {
        let r = LocalRing::parse("gf:4").unwrap();
        assert_eq!(param_code(&r, 2), 2);
        assert_eq!(param_code(&r, 0), 0);
        assert_eq!(param_code(&r, 4), 0);
        assert_eq!(param_code(&r, 5), 1);
        assert_eq!(param_code(&r, -1), 1);
    }
}
