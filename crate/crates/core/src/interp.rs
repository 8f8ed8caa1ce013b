//! The two interpretation codes and their round trips: rebuild the
//! coefficient ring inside the group, rebuild the group from ring
//! tuples, compose the two, and verify the parameter formula that pins
//! down a usable generator tuple.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gauss::{code_eq, code_mul, code_of, decode, CodedElement, Decomposer, GaussForm};
use crate::group::{
    centralizer_of, mul_idx, FiniteGroupTable, GroupContext, GroupElement, IdxSet,
};
use crate::rings::LocalRing;
use crate::roots::Root;

/// Pair of positive roots whose sum stays in the system and whose
/// commutator collapses to a single factor with a unit constant.
#[derive(Clone, Debug)]
pub struct RingPair {
    pub beta1: Root,
    pub beta2: Root,
    pub delta: Root,
    pub n_const: i64,
}

fn lex_sorted(roots: &[Root]) -> Vec<Root> {
    let mut v = roots.to_vec();
    v.sort();
    v
}

/// First pair, in lexicographic order over positive roots, usable for
/// the multiplication pairing.
pub fn select_pair(ctx: &GroupContext) -> Result<RingPair> {
    let positives = lex_sorted(&ctx.lie.sys.positive);
    for b1 in &positives {
        for b2 in &positives {
            if b1 == b2 {
                continue;
            }
            if let Some(pair) = usable_pair(ctx, b1, b2) {
                return Ok(pair);
            }
        }
    }
    Err(Error::NoA2Subsystem(
        "no positive pair with a single-factor unit-constant commutator".into(),
    ))
}

fn usable_pair(ctx: &GroupContext, b1: &[i64], b2: &[i64]) -> Option<RingPair> {
    let sys = &ctx.lie.sys;
    let delta: Root = b1.iter().zip(b2).map(|(a, b)| a + b).collect();
    sys.root_index(&delta).ok()?;
    let factors = ctx.lie.commutator_constants(b1, b2).ok()?;
    if factors.len() != 1 || factors[0].root != delta {
        return None;
    }
    let n = factors[0].c;
    let code = ctx.ring.from_int(n);
    if !ctx.ring.is_unit(code) {
        return None;
    }
    Some(RingPair {
        beta1: b1.to_vec(),
        beta2: b2.to_vec(),
        delta,
        n_const: n,
    })
}

/// Ring structure carried by a root subgroup: addition is the group
/// operation, multiplication is recovered from the commutator pairing
/// `[x_{b1}(s), x_{b2}(t)] = x_delta(N s t)` by taking N-th powers.
pub struct InterpretedRing {
    pub pair: RingPair,
    /// Carrier in ring-code order, so `carrier[t]` is `x_delta(t)`.
    pub carrier: Vec<GroupElement>,
    pub zero: usize,
    pub one: usize,
    pub add: Vec<Vec<usize>>,
    pub mul: Vec<Vec<usize>>,
}

fn position_of(carrier: &[GroupElement], g: &GroupElement) -> Option<usize> {
    carrier.iter().position(|c| c == g)
}

/// Unique `z` in `carrier` with `z^N = target`; `None` when no or
/// several carrier elements qualify.
fn nth_root_in(
    ctx: &GroupContext,
    carrier: &[GroupElement],
    n: i64,
    target: &GroupElement,
) -> Option<usize> {
    let mut found = None;
    for (i, z) in carrier.iter().enumerate() {
        if &ctx.pow(z, n) == target {
            if found.is_some() {
                return None;
            }
            found = Some(i);
        }
    }
    found
}

/// Multiplication through the pairing: all witnesses `(u, w)` with
/// `z1^N = [u, m2]` and `z2^N = [m1, w]` must agree on the product.
fn pairing_product(
    ctx: &GroupContext,
    carrier: &[GroupElement],
    cb1: &[GroupElement],
    cb2: &[GroupElement],
    m1: &GroupElement,
    m2: &GroupElement,
    n: i64,
    z1: &GroupElement,
    z2: &GroupElement,
) -> Option<usize> {
    let p1 = ctx.pow(z1, n);
    let p2 = ctx.pow(z2, n);
    let us: Vec<&GroupElement> = cb1
        .iter()
        .filter(|u| ctx.commutator(u, m2) == p1)
        .collect();
    let ws: Vec<&GroupElement> = cb2
        .iter()
        .filter(|w| ctx.commutator(m1, w) == p2)
        .collect();
    if us.is_empty() || ws.is_empty() {
        return None;
    }
    let mut result = None;
    for u in &us {
        for w in &ws {
            let z3 = nth_root_in(ctx, carrier, n, &ctx.commutator(u, w))?;
            match result {
                None => result = Some(z3),
                Some(r) if r != z3 => return None,
                _ => {}
            }
        }
    }
    result
}

fn check_ring_axioms(add: &[Vec<usize>], mul: &[Vec<usize>], zero: usize, one: usize) -> bool {
    let n = add.len();
    if zero == one {
        return false;
    }
    for a in 0..n {
        if add[a][zero] != a || mul[a][one] != a || mul[a][zero] != zero {
            return false;
        }
        for b in 0..n {
            if add[a][b] != add[b][a] || mul[a][b] != mul[b][a] {
                return false;
            }
            for c in 0..n {
                if add[add[a][b]][c] != add[a][add[b][c]]
                    || mul[mul[a][b]][c] != mul[a][mul[b][c]]
                    || mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]
                {
                    return false;
                }
            }
        }
        if !(0..n).any(|b| add[a][b] == zero) {
            return false;
        }
    }
    true
}

fn units_of(mul: &[Vec<usize>], one: usize) -> Vec<bool> {
    let n = mul.len();
    (0..n)
        .map(|a| (0..n).any(|b| mul[a][b] == one))
        .collect()
}

fn is_local(add: &[Vec<usize>], mul: &[Vec<usize>], one: usize) -> bool {
    let unit = units_of(mul, one);
    let n = add.len();
    for a in 0..n {
        for b in 0..n {
            if !unit[a] && !unit[b] && unit[add[a][b]] {
                return false;
            }
        }
    }
    true
}

/// Reconstructs the coefficient ring on the carrier `X_delta`, checks
/// every ring axiom, locality, and that `t -> x_delta(t)` is a ring
/// isomorphism. Needs no group enumeration.
pub fn ring_from_group(ctx: &GroupContext) -> Result<InterpretedRing> {
    let pair = select_pair(ctx)?;
    let carrier = ctx.x_subgroup(&pair.delta)?;
    let cb1 = ctx.x_subgroup(&pair.beta1)?;
    let cb2 = ctx.x_subgroup(&pair.beta2)?;
    let m1 = ctx.x(&pair.beta1, ctx.ring.one())?;
    let m2 = ctx.x(&pair.beta2, ctx.ring.one())?;
    let size = carrier.len();

    let zero = position_of(&carrier, &ctx.identity())
        .ok_or_else(|| Error::IsomorphismFailure("carrier misses the identity".into()))?;
    let one = nth_root_in(ctx, &carrier, pair.n_const, &ctx.commutator(&m1, &m2))
        .ok_or_else(|| Error::IsomorphismFailure("no unit element in the carrier".into()))?;

    let mut add = vec![vec![0usize; size]; size];
    let mut mul = vec![vec![0usize; size]; size];
    for i in 0..size {
        for j in 0..size {
            add[i][j] = position_of(&carrier, &ctx.mul(&carrier[i], &carrier[j]))
                .ok_or_else(|| Error::IsomorphismFailure("carrier not closed under add".into()))?;
            mul[i][j] = pairing_product(
                ctx,
                &carrier,
                &cb1,
                &cb2,
                &m1,
                &m2,
                pair.n_const,
                &carrier[i],
                &carrier[j],
            )
            .ok_or_else(|| {
                Error::IsomorphismFailure("pairing fails to define multiplication".into())
            })?;
        }
    }

    if !check_ring_axioms(&add, &mul, zero, one) {
        return Err(Error::IsomorphismFailure("ring axioms fail on carrier".into()));
    }
    if !is_local(&add, &mul, one) {
        return Err(Error::IsomorphismFailure("interpreted ring is not local".into()));
    }

    // The carrier is in code order, so the expected isomorphism
    // t -> x_delta(t) is the identity on indices.
    let ring = &ctx.ring;
    if size != ring.size {
        return Err(Error::IsomorphismFailure("carrier size differs from ring".into()));
    }
    if zero != ring.zero() as usize || one != ring.one() as usize {
        return Err(Error::IsomorphismFailure("constants land on wrong codes".into()));
    }
    for s in 0..size as u16 {
        for t in 0..size as u16 {
            if add[s as usize][t as usize] != ring.add(s, t) as usize
                || mul[s as usize][t as usize] != ring.mul(s, t) as usize
            {
                return Err(Error::IsomorphismFailure(format!(
                    "x_delta is not a ring map at ({s}, {t})"
                )));
            }
        }
    }

    Ok(InterpretedRing {
        pair,
        carrier,
        zero,
        one,
        add,
        mul,
    })
}

/// Exhaustive report on the ring round trip.
#[derive(Clone, Debug)]
pub struct RingRoundTrip {
    pub pair: RingPair,
    pub ring_size: usize,
    pub pairs_checked: usize,
    pub units_invertible: usize,
}

pub fn round_trip_ring(ctx: &GroupContext) -> Result<RingRoundTrip> {
    let interp = ring_from_group(ctx)?;
    let ring = &ctx.ring;
    let unit = units_of(&interp.mul, interp.one);
    let mut units_invertible = 0usize;
    for a in 0..ring.size as u16 {
        if ring.is_unit(a) != unit[a as usize] {
            return Err(Error::IsomorphismFailure(format!(
                "unit status disagrees at code {a}"
            )));
        }
        if unit[a as usize] {
            units_invertible += 1;
        }
    }
    Ok(RingRoundTrip {
        pair: interp.pair,
        ring_size: ring.size,
        pairs_checked: ring.size * ring.size,
        units_invertible,
    })
}

/// Counts for the ring-to-group code: total parameter tuples, distinct
/// decoded elements, and the number of codes decoding to the identity.
#[derive(Clone, Debug)]
pub struct CodedGroup {
    pub codes_total: usize,
    pub distinct: usize,
    pub identity_codes: usize,
}

/// Decodes every `(u, t, v, u')` tuple and counts equality classes.
pub fn group_from_ring(ctx: &GroupContext) -> Result<CodedGroup> {
    let n = ctx.lie.sys.positive.len();
    let l = ctx.lie.sys.rank;
    let ring = &ctx.ring;
    let all: Vec<u16> = (0..ring.size as u16).collect();
    let units: Vec<u16> = ring.units().to_vec();
    let mut domains: Vec<&[u16]> = Vec::new();
    for _ in 0..n {
        domains.push(&all);
    }
    for _ in 0..l {
        domains.push(&units);
    }
    for _ in 0..2 * n {
        domains.push(&all);
    }

    let mut total = 1usize;
    for d in &domains {
        total = total.saturating_mul(d.len());
        if total > 50_000_000 {
            return Err(Error::SearchSpaceTooLarge(
                "code space exceeds the decoding budget".into(),
            ));
        }
    }

    let mut seen: HashSet<crate::group::RMat> = HashSet::new();
    let id = ctx.identity();
    let mut identity_codes = 0usize;
    let mut pos = vec![0usize; domains.len()];
    loop {
        let u: Vec<u16> = (0..n).map(|i| domains[i][pos[i]]).collect();
        let t: Vec<u16> = (0..l).map(|i| domains[n + i][pos[n + i]]).collect();
        let v: Vec<u16> = (0..n).map(|i| domains[n + l + i][pos[n + l + i]]).collect();
        let u2: Vec<u16> = (0..n)
            .map(|i| domains[2 * n + l + i][pos[2 * n + l + i]])
            .collect();
        let coded = CodedElement {
            ring: ring.desc,
            form: GaussForm { u, t, v, u2 },
        };
        let g = decode(ctx, &coded)?;
        if g == id {
            identity_codes += 1;
        }
        seen.insert(g.mat);

        let mut k = domains.len();
        loop {
            if k == 0 {
                return Ok(CodedGroup {
                    codes_total: total,
                    distinct: seen.len(),
                    identity_codes,
                });
            }
            k -= 1;
            pos[k] += 1;
            if pos[k] < domains[k].len() {
                break;
            }
            pos[k] = 0;
        }
    }
}

/// Homomorphism evidence for the composed map theta.
#[derive(Clone, Debug)]
pub struct ThetaReport {
    pub elements: usize,
    pub pairs_checked: usize,
    pub exhaustive_pairs: bool,
}

/// theta sends `g` to its Gauss code. Verifies `decode(theta(g)) = g`
/// on every element, which makes theta a bijection onto code classes,
/// then checks the homomorphism law on all pairs or a seeded sample.
pub fn theta_isomorphism(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    dec: &Decomposer,
    exhaustive_pairs: bool,
    sampled_pairs: usize,
    seed: u64,
) -> Result<ThetaReport> {
    let order = table.order();
    let mut codes = Vec::with_capacity(order);
    for g in &table.elems {
        let form = dec.decompose(ctx, g)?;
        let coded = code_of(ctx, form);
        if &decode(ctx, &coded)? != g {
            return Err(Error::IsomorphismFailure(
                "decode does not invert theta".into(),
            ));
        }
        codes.push(coded);
    }

    let check_pair = |i: usize, j: usize| -> Result<()> {
        let product = mul_idx(ctx, table, i, j);
        let lhs = code_mul(ctx, dec, &codes[i], &codes[j])?;
        if !code_eq(ctx, &lhs, &codes[product])? {
            return Err(Error::IsomorphismFailure(format!(
                "theta breaks multiplicativity at pair ({i}, {j})"
            )));
        }
        Ok(())
    };

    let pairs_checked = if exhaustive_pairs {
        for i in 0..order {
            for j in 0..order {
                check_pair(i, j)?;
            }
        }
        order * order
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..sampled_pairs {
            let i = rng.gen_range(0..order);
            let j = rng.gen_range(0..order);
            check_pair(i, j)?;
        }
        sampled_pairs
    };

    Ok(ThetaReport {
        elements: order,
        pairs_checked,
        exhaustive_pairs,
    })
}

/// One table index per root, aligned with the root order of the system.
pub type ParameterTuple = Vec<usize>;

pub fn true_tuple(ctx: &GroupContext, table: &FiniteGroupTable) -> Result<ParameterTuple> {
    ctx.lie
        .sys
        .roots
        .clone()
        .iter()
        .map(|alpha| {
            let g = ctx.x(alpha, ctx.ring.one())?;
            table
                .idx_of(&g)
                .ok_or_else(|| Error::NoSuchRoot(alpha.clone()))
        })
        .collect()
}

/// Outcome of checking the four tuple properties.
#[derive(Clone, Debug)]
pub struct ParamReport {
    pub conjugacy: bool,
    pub relations: bool,
    pub rings: bool,
    /// Roots whose carrier admits the pairing product, out of all roots.
    pub rings_covered: (usize, usize),
    pub product: bool,
    pub accepted: bool,
    /// Longest conjugation witness found, in Weyl generator factors.
    pub witness_max: usize,
}

fn root_norm(ctx: &GroupContext, alpha: &[i64]) -> i64 {
    ctx.lie.sys.form(alpha, alpha)
}

fn centre_of_centralizer_idx(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    g: usize,
) -> Vec<usize> {
    let c_list = centralizer_of(ctx, table, &table.elems[g]);
    let mut z = Vec::new();
    for &cand in &c_list {
        let cm = &table.elems[cand].mat;
        let mut central = true;
        for &h in &c_list {
            let hm = &table.elems[h].mat;
            if ctx.mat_mul(cm, hm) != ctx.mat_mul(hm, cm) {
                central = false;
                break;
            }
        }
        if central {
            z.push(cand);
        }
    }
    z
}

/// Ring tables over a carrier of table indices; `None` entries mean the
/// pairing failed to define the structure.
struct CarrierRing {
    zero: usize,
    one: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
}

fn carrier_ring(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    carrier: &[usize],
    cb1: &[usize],
    cb2: &[usize],
    m1: usize,
    m2: usize,
    n: i64,
) -> Option<CarrierRing> {
    let size = carrier.len();
    let elem = |i: usize| &table.elems[i];
    let pos = |g: &GroupElement| carrier.iter().position(|&c| elem(c) == g);

    let zero = pos(&ctx.identity())?;
    let root_of = |target: &GroupElement| -> Option<usize> {
        let mut found = None;
        for (i, &c) in carrier.iter().enumerate() {
            if &ctx.pow(elem(c), n) == target {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    };
    let one = root_of(&ctx.commutator(elem(m1), elem(m2)))?;

    let mut add = vec![vec![0usize; size]; size];
    let mut mul = vec![vec![0usize; size]; size];
    for i in 0..size {
        for j in 0..size {
            add[i][j] = pos(&ctx.mul(elem(carrier[i]), elem(carrier[j])))?;
            let p1 = ctx.pow(elem(carrier[i]), n);
            let p2 = ctx.pow(elem(carrier[j]), n);
            let us: Vec<usize> = cb1
                .iter()
                .copied()
                .filter(|&u| ctx.commutator(elem(u), elem(m2)) == p1)
                .collect();
            let ws: Vec<usize> = cb2
                .iter()
                .copied()
                .filter(|&w| ctx.commutator(elem(m1), elem(w)) == p2)
                .collect();
            if us.is_empty() || ws.is_empty() {
                return None;
            }
            let mut result = None;
            for &u in &us {
                for &w in &ws {
                    let z3 = root_of(&ctx.commutator(elem(u), elem(w)))?;
                    match result {
                        None => result = Some(z3),
                        Some(r) if r != z3 => return None,
                        _ => {}
                    }
                }
            }
            mul[i][j] = result?;
        }
    }
    if !check_ring_axioms(&add, &mul, zero, one) || !is_local(&add, &mul, one) {
        return None;
    }
    Some(CarrierRing { zero, one, add, mul })
}

/// Backtracking search for a ring isomorphism between two small tables.
fn rings_isomorphic(a: &CarrierRing, b: &CarrierRing) -> bool {
    let n = a.add.len();
    if n != b.add.len() {
        return false;
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    map[a.zero] = b.zero;
    used[b.zero] = true;
    if a.one != a.zero {
        if b.one == b.zero {
            return false;
        }
        map[a.one] = b.one;
        used[b.one] = true;
    }
    fn consistent(a: &CarrierRing, b: &CarrierRing, map: &[usize]) -> bool {
        let n = map.len();
        for x in 0..n {
            if map[x] == usize::MAX {
                continue;
            }
            for y in 0..n {
                if map[y] == usize::MAX {
                    continue;
                }
                let s = a.add[x][y];
                if map[s] != usize::MAX && map[s] != b.add[map[x]][map[y]] {
                    return false;
                }
                let p = a.mul[x][y];
                if map[p] != usize::MAX && map[p] != b.mul[map[x]][map[y]] {
                    return false;
                }
            }
        }
        true
    }
    fn search(a: &CarrierRing, b: &CarrierRing, map: &mut [usize], used: &mut [bool]) -> bool {
        let n = map.len();
        let next = match (0..n).find(|&i| map[i] == usize::MAX) {
            Some(i) => i,
            None => return consistent(a, b, map),
        };
        for img in 0..n {
            if used[img] {
                continue;
            }
            map[next] = img;
            used[img] = true;
            if consistent(a, b, map) && search(a, b, map, used) {
                return true;
            }
            map[next] = usize::MAX;
            used[img] = false;
        }
        false
    }
    search(a, b, &mut map, &mut used)
}

fn product_set(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    left: &[usize],
    right: &[usize],
) -> Vec<usize> {
    let mut seen = IdxSet::new(table.order());
    let mut out = Vec::new();
    for &x in left {
        for &y in right {
            let z = mul_idx(ctx, table, x, y);
            if seen.insert(z) {
                out.push(z);
            }
        }
    }
    out
}

/// Checks the four tuple properties semantically and returns the
/// conjunction with per-property detail.
pub fn verify_parameter_formula(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    tuple: &ParameterTuple,
) -> Result<ParamReport> {
    let sys = ctx.lie.sys.clone();
    let roots = sys.roots.clone();
    if tuple.len() != roots.len() {
        return Err(Error::WordParse("tuple".into(), "one entry per root required".into()));
    }
    let idx_of_root = |alpha: &[i64]| -> usize {
        sys.root_index(alpha).expect("root of the system")
    };

    // Weyl generators built from the candidates alone.
    let mut weyl: Vec<GroupElement> = Vec::new();
    for alpha in &roots {
        let a = &table.elems[tuple[idx_of_root(alpha)]];
        let neg: Root = alpha.iter().map(|c| -c).collect();
        let b = &table.elems[tuple[idx_of_root(&neg)]];
        weyl.push(ctx.mul(&ctx.mul(a, &ctx.inv(b)), a));
    }

    // Property 1: equal-length candidates are conjugate by a short
    // product of candidate Weyl generators.
    let mut conjugacy = true;
    let mut witness_max = 0usize;
    let depth_cap = 2 * roots.len();
    'outer: for (i, ai) in roots.iter().enumerate() {
        for (j, aj) in roots.iter().enumerate() {
            if i >= j || root_norm(ctx, ai) != root_norm(ctx, aj) {
                continue;
            }
            let start = tuple[i];
            let target = tuple[j];
            let mut depth_of = vec![usize::MAX; table.order()];
            depth_of[start] = 0;
            let mut frontier = vec![start];
            let mut found = start == target;
            let mut depth = 0;
            while !found && depth < depth_cap && !frontier.is_empty() {
                depth += 1;
                let mut next = Vec::new();
                for &s in &frontier {
                    for w in &weyl {
                        for conj in [
                            ctx.conjugate(&table.elems[s], w),
                            ctx.mul(&ctx.mul(&ctx.inv(w), &table.elems[s]), w),
                        ] {
                            if let Some(t) = table.idx_of(&conj) {
                                if depth_of[t] == usize::MAX {
                                    depth_of[t] = depth;
                                    next.push(t);
                                    if t == target {
                                        found = true;
                                    }
                                }
                            }
                        }
                    }
                }
                frontier = next;
            }
            if found {
                witness_max = witness_max.max(depth_of[target]);
            } else {
                conjugacy = false;
                break 'outer;
            }
        }
    }

    // Property 2: Chevalley commutator relations with all parameters 1.
    let mut relations = true;
    'rel: for (i, ai) in roots.iter().enumerate() {
        for (j, aj) in roots.iter().enumerate() {
            if i == j {
                continue;
            }
            let factors = match ctx.lie.commutator_constants(ai, aj) {
                Ok(f) => f,
                Err(Error::ProportionalRoots) => continue,
                Err(e) => return Err(e),
            };
            let lhs = ctx.commutator(&table.elems[tuple[i]], &table.elems[tuple[j]]);
            let mut rhs = ctx.identity();
            for f in &factors {
                let base = &table.elems[tuple[idx_of_root(&f.root)]];
                rhs = ctx.mul(&rhs, &ctx.pow(base, f.c));
            }
            if lhs != rhs {
                relations = false;
                break 'rel;
            }
        }
    }

    // Property 3: centre-of-centralizer carriers form pairwise
    // isomorphic local rings wherever a single-factor pairing exists.
    let carriers: Vec<Vec<usize>> = (0..roots.len())
        .map(|i| centre_of_centralizer_idx(ctx, table, tuple[i]))
        .collect();
    let all_roots_lex = lex_sorted(&roots);
    let mut rings = true;
    let mut built: Vec<CarrierRing> = Vec::new();
    let mut covered = 0usize;
    for (i, alpha) in roots.iter().enumerate() {
        // Any pair of roots, mixed signs allowed, with a single-factor
        // unit-constant commutator summing to alpha.
        let mut pair = None;
        'pairs: for b1 in &all_roots_lex {
            for b2 in &all_roots_lex {
                if b1 == b2 {
                    continue;
                }
                let sum: Root = b1.iter().zip(b2).map(|(a, b)| a + b).collect();
                if &sum != alpha {
                    continue;
                }
                if let Some(p) = usable_pair(ctx, b1, b2) {
                    pair = Some(p);
                    break 'pairs;
                }
            }
        }
        let Some(p) = pair else { continue };
        covered += 1;
        let cr = carrier_ring(
            ctx,
            table,
            &carriers[i],
            &carriers[idx_of_root(&p.beta1)],
            &carriers[idx_of_root(&p.beta2)],
            tuple[idx_of_root(&p.beta1)],
            tuple[idx_of_root(&p.beta2)],
            p.n_const,
        );
        match cr {
            Some(r) => {
                if let Some(prev) = built.first() {
                    if !rings_isomorphic(prev, &r) {
                        rings = false;
                    }
                }
                built.push(r);
            }
            None => rings = false,
        }
        if !rings {
            break;
        }
    }
    if covered == 0 {
        rings = false;
    }

    // Property 4: the product set U T V U' over candidate-generated
    // subgroups covers the group.
    let positives = &sys.positive;
    let mut u_set = vec![0usize];
    for alpha in positives {
        u_set = product_set(ctx, table, &u_set, &carriers[idx_of_root(alpha)]);
    }
    let mut v_set = vec![0usize];
    for alpha in positives {
        let neg: Root = alpha.iter().map(|c| -c).collect();
        v_set = product_set(ctx, table, &v_set, &carriers[idx_of_root(&neg)]);
    }
    let mut t_set = vec![0usize];
    for j in 0..sys.rank {
        let beta = sys.simple_root(j);
        let bi = idx_of_root(&beta);
        let neg: Root = beta.iter().map(|c| -c).collect();
        let ni = idx_of_root(&neg);
        let w_one = &weyl[bi];
        // Weyl set: products a b a that conjugate the candidate into
        // the opposite carrier, then translated back by w(1).
        let mut h_set = Vec::new();
        let mut seen = IdxSet::new(table.order());
        for &a in &carriers[bi] {
            for &b in &carriers[ni] {
                let aba = ctx.mul(&ctx.mul(&table.elems[a], &table.elems[b]), &table.elems[a]);
                let image = ctx.conjugate(&table.elems[tuple[bi]], &aba);
                let Some(img_idx) = table.idx_of(&image) else { continue };
                if img_idx == 0 || !carriers[ni].contains(&img_idx) {
                    continue;
                }
                let h = ctx.mul(&aba, &ctx.inv(w_one));
                if let Some(hi) = table.idx_of(&h) {
                    if seen.insert(hi) {
                        h_set.push(hi);
                    }
                }
            }
        }
        t_set = product_set(ctx, table, &t_set, &h_set);
    }

    let utv = product_set(ctx, table, &product_set(ctx, table, &u_set, &t_set), &v_set);
    let full = product_set(ctx, table, &utv, &u_set);
    let product = full.len() == table.order();

    let accepted = conjugacy && relations && rings && product;
    Ok(ParamReport {
        conjugacy,
        relations,
        rings,
        rings_covered: (covered, roots.len()),
        product,
        accepted,
        witness_max,
    })
}

/// Interpreted rings of two accepted tuples, compared up to ring
/// isomorphism on the pairing root delta.
pub fn tuples_give_isomorphic_rings(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    t1: &ParameterTuple,
    t2: &ParameterTuple,
) -> Result<bool> {
    let pair = select_pair(ctx)?;
    let sys = &ctx.lie.sys;
    let di = sys.root_index(&pair.delta).expect("delta is a root");
    let b1 = sys.root_index(&pair.beta1).expect("beta1 is a root");
    let b2 = sys.root_index(&pair.beta2).expect("beta2 is a root");
    let build = |t: &ParameterTuple| -> Option<CarrierRing> {
        let cd = centre_of_centralizer_idx(ctx, table, t[di]);
        let c1 = centre_of_centralizer_idx(ctx, table, t[b1]);
        let c2 = centre_of_centralizer_idx(ctx, table, t[b2]);
        carrier_ring(ctx, table, &cd, &c1, &c2, t[b1], t[b2], pair.n_const)
    };
    match (build(t1), build(t2)) {
        (Some(r1), Some(r2)) => Ok(rings_isomorphic(&r1, &r2)),
        _ => Ok(false),
    }
}

/// Interpreted-ring carrier compared against a reference local ring.
pub fn ring_matches(interp: &InterpretedRing, ring: &LocalRing) -> bool {
    interp.carrier.len() == ring.size
        && interp.zero == ring.zero() as usize
        && interp.one == ring.one() as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{e_generators, enumerate_group, DEFAULT_CAP};

    fn ctx_for(system: &str, ring: &str) -> GroupContext {
        GroupContext::parse(system, ring).unwrap()
    }

    fn table_for(ctx: &GroupContext) -> FiniteGroupTable {
        let gens = e_generators(ctx).unwrap();
        enumerate_group(ctx, &gens, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn pair_selection_matches_hand_checks() {
        let a2 = ctx_for("A2", "gf:3");
        let p = select_pair(&a2).unwrap();
        assert_eq!((p.beta1.as_slice(), p.beta2.as_slice()), (&[0, 1][..], &[1, 0][..]));
        assert_eq!(p.delta, vec![1, 1]);
        assert_eq!(p.n_const.abs(), 1);

        let b2 = ctx_for("B2", "gf:3");
        let p = select_pair(&b2).unwrap();
        assert_eq!((p.beta1.as_slice(), p.beta2.as_slice()), (&[0, 1][..], &[1, 1][..]));
        assert_eq!(p.delta, vec![1, 2]);
        assert_eq!(p.n_const.abs(), 2);

        let g2 = ctx_for("G2", "gf:5");
        let p = select_pair(&g2).unwrap();
        assert_eq!((p.beta1.as_slice(), p.beta2.as_slice()), (&[0, 1][..], &[3, 1][..]));
        assert_eq!(p.delta, vec![3, 2]);
        assert_eq!(p.n_const.abs(), 1);
    }

    #[test]
    fn interpreted_ring_reproduces_f3_arithmetic() {
        let ctx = ctx_for("A2", "gf:3");
        let r = ring_from_group(&ctx).unwrap();
        // 2 * 2 = 4 = 1 in F3, transported through the pairing.
        assert_eq!(r.mul[2][2], 1);
        assert_eq!(r.add[2][2], 1);
        assert_eq!(r.zero, 0);
        assert_eq!(r.one, 1);
    }

    #[test]
    fn ring_round_trips_hold_without_enumeration() {
        for (sys, ring) in [
            ("A2", "gf:2"),
            ("A2", "gf:3"),
            ("A2", "zmod:4"),
            ("A2", "dual:2"),
            ("B2", "gf:3"),
            ("G2", "gf:5"),
        ] {
            let ctx = ctx_for(sys, ring);
            let rt = round_trip_ring(&ctx).unwrap();
            assert_eq!(rt.ring_size, ctx.ring.size, "{sys}/{ring}");
            assert_eq!(rt.units_invertible, ctx.ring.units().len(), "{sys}/{ring}");
        }
    }

    #[test]
    fn coded_group_class_count_is_the_group_order() {
        let ctx = ctx_for("A2", "gf:2");
        let report = group_from_ring(&ctx).unwrap();
        assert_eq!(report.codes_total, 512);
        assert_eq!(report.distinct, 168);
        assert!(report.identity_codes >= 1);
    }

    #[test]
    fn theta_is_an_isomorphism_on_psl3_f2() {
        let ctx = ctx_for("A2", "gf:2");
        let table = table_for(&ctx);
        let dec = Decomposer::new(&ctx).unwrap();
        let rep = theta_isomorphism(&ctx, &table, &dec, true, 0, 0).unwrap();
        assert_eq!(rep.elements, 168);
        assert_eq!(rep.pairs_checked, 168 * 168);
        assert!(rep.exhaustive_pairs);
    }

    #[test]
    fn true_tuple_is_accepted_and_identity_corruption_rejected() {
        let ctx = ctx_for("A2", "gf:2");
        let table = table_for(&ctx);
        let tuple = true_tuple(&ctx, &table).unwrap();
        let rep = verify_parameter_formula(&ctx, &table, &tuple).unwrap();
        assert!(rep.accepted, "{rep:?}");
        assert_eq!(rep.rings_covered, (6, 6));

        let mut bad = tuple.clone();
        bad[0] = 0;
        let rep = verify_parameter_formula(&ctx, &table, &bad).unwrap();
        assert!(!rep.accepted);
    }

    #[test]
    fn conjugated_tuple_is_accepted_with_isomorphic_ring() {
        let ctx = ctx_for("A2", "gf:2");
        let table = table_for(&ctx);
        let tuple = true_tuple(&ctx, &table).unwrap();
        let g = &table.elems[17];
        let conjugated: ParameterTuple = tuple
            .iter()
            .map(|&i| {
                table
                    .idx_of(&ctx.conjugate(&table.elems[i], g))
                    .unwrap()
            })
            .collect();
        let rep = verify_parameter_formula(&ctx, &table, &conjugated).unwrap();
        assert!(rep.accepted, "{rep:?}");
        assert!(tuples_give_isomorphic_rings(&ctx, &table, &tuple, &conjugated).unwrap());
    }

    #[test]
    fn frobenius_fixed_tuple_reaccepted_on_gf4() {
        // The ring automorphism x -> x^2 of gf:4 fixes 1, so the induced
        // group automorphism fixes the true tuple entrywise; property
        // checks must accept it on the gf:4 instance.
        let ctx = ctx_for("A2", "gf:4");
        let table = table_for(&ctx);
        let tuple = true_tuple(&ctx, &table).unwrap();
        let rep = verify_parameter_formula(&ctx, &table, &tuple).unwrap();
        assert!(rep.accepted, "{rep:?}");
    }
}
