//! First-order definable subsets of an enumerated Chevalley group:
//! the congruence kernel recovered from a product formula, and root
//! subgroups recovered from centralizer conditions.
//!
//! `phi_N(A)` asks whether the set `P_N(A)` of products of at most `N`
//! conjugates of `A` and `A^{-1}` is a proper normal subgroup. Two
//! elementary facts drive the implementation: `P_N` is always closed
//! under inverses and conjugation, so it is a subgroup exactly when it
//! equals the normal closure of `A`; and any subgroup exceeding half
//! the group order is the whole group, so a truncated closure already
//! decides properness.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::group::{
    centralizer_of, conj_idx, conjugacy_classes, mul_idx, normal_closure, ConjClasses,
    FiniteGroupTable, GroupContext, IdxSet,
};
use crate::roots::Root;

/// Kernel of entrywise reduction `R -> R/J` on the table.
pub fn reduction_kernel(ctx: &GroupContext, table: &FiniteGroupTable) -> Result<IdxSet> {
    let kctx = ctx.reduce_context()?;
    let id = kctx.identity();
    let mut set = IdxSet::new(table.order());
    for (i, g) in table.elems.iter().enumerate() {
        if ctx.reduce_element(g) == id {
            set.insert(i);
        }
    }
    Ok(set)
}

/// Per-class data deciding `phi_N` for every `N` at once: the depth at
/// which the conjugate products stabilize, or `None` when the normal
/// closure is the full group.
pub struct PhiData {
    pub classes: ConjClasses,
    pub class_depth: Vec<Option<usize>>,
    /// Normal closure of each class with proper closure, by class id.
    pub class_closure: Vec<Option<IdxSet>>,
}

impl PhiData {
    pub fn phi_n(&self, a: usize, n: usize) -> bool {
        match self.class_depth[self.classes.class_of[a]] {
            Some(depth) => depth <= n,
            None => false,
        }
    }

    /// Indices satisfying `phi_N`, in table order.
    pub fn phi_true(&self, table: &FiniteGroupTable, n: usize) -> Vec<usize> {
        (0..table.order()).filter(|&i| self.phi_n(i, n)).collect()
    }
}

fn conjugate_seed(ctx: &GroupContext, table: &FiniteGroupTable, a: usize) -> Vec<usize> {
    // class(A) together with class(A^{-1}), via orbit search.
    let mut set = IdxSet::new(table.order());
    let mut queue = vec![a, table.inv_idx[a]];
    let mut list = Vec::new();
    for &s in &queue {
        if set.insert(s) {
            list.push(s);
        }
    }
    while let Some(x) = queue.pop() {
        if !set.contains(x) {
            set.insert(x);
            list.push(x);
        }
        for &g in &table.gen_idx {
            let y = conj_idx(ctx, table, g, x);
            if set.insert(y) {
                list.push(y);
                queue.push(y);
            }
        }
    }
    list.sort_unstable();
    list
}

/// Depth at which `P_k(A)` stabilizes inside a proper normal closure.
/// Products with a factor outside the previous frontier were already
/// recorded, so each round only extends frontier elements.
fn stabilization_depth(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    seed: &[usize],
) -> usize {
    let mut set = IdxSet::new(table.order());
    let mut frontier = Vec::new();
    for &s in seed {
        if set.insert(s) {
            frontier.push(s);
        }
    }
    let mut depth = 1;
    loop {
        let mut next = Vec::new();
        for &x in &frontier {
            for &c in seed {
                let y = mul_idx(ctx, table, x, c);
                if set.insert(y) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            return depth;
        }
        depth += 1;
        frontier = next;
    }
}

/// Computes `phi` data for every conjugacy class.
pub fn phi_data(ctx: &GroupContext, table: &FiniteGroupTable) -> PhiData {
    let classes = conjugacy_classes(ctx, table);
    let half = table.order() / 2;
    let mut class_depth = Vec::with_capacity(classes.count());
    let mut class_closure = Vec::with_capacity(classes.count());
    for &rep in &classes.reps {
        let (closure, truncated) = normal_closure(ctx, table, &[rep], Some(half));
        if truncated {
            // A subgroup larger than half the order is the whole group,
            // so P_N can never be a proper subgroup.
            class_depth.push(None);
            class_closure.push(None);
            continue;
        }
        let seed = conjugate_seed(ctx, table, rep);
        let depth = stabilization_depth(ctx, table, &seed);
        class_depth.push(Some(depth));
        class_closure.push(Some(closure));
    }
    PhiData {
        classes,
        class_depth,
        class_closure,
    }
}

/// Literal evaluation of `phi_N`: builds `P_N(A)` and tests it for
/// being a proper normal subgroup. Meant for cross-validation on small
/// instances.
pub fn phi_n_direct(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    a: usize,
    n: usize,
) -> bool {
    let seed = conjugate_seed(ctx, table, a);
    let mut set = IdxSet::new(table.order());
    for &s in &seed {
        set.insert(s);
    }
    for _ in 1..n {
        let members: Vec<usize> = set.iter().collect();
        for &x in &members {
            for &c in &seed {
                set.insert(mul_idx(ctx, table, x, c));
            }
        }
    }
    if set.count() == table.order() || !set.contains(0) {
        return false;
    }
    let members: Vec<usize> = set.iter().collect();
    for &x in &members {
        for &y in &members {
            if !set.contains(mul_idx(ctx, table, x, y)) {
                return false;
            }
        }
        if !set.contains(table.inv_idx[x]) {
            return false;
        }
        for &g in &table.gen_idx {
            if !set.contains(conj_idx(ctx, table, g, x)) {
                return false;
            }
        }
    }
    true
}

fn is_normal_subgroup(ctx: &GroupContext, table: &FiniteGroupTable, set: &IdxSet) -> bool {
    if !set.contains(0) {
        return false;
    }
    let members: Vec<usize> = set.iter().collect();
    for &x in &members {
        if !set.contains(table.inv_idx[x]) {
            return false;
        }
        for &y in &members {
            if !set.contains(mul_idx(ctx, table, x, y)) {
                return false;
            }
        }
        for &g in &table.gen_idx {
            if !set.contains(conj_idx(ctx, table, g, x)) {
                return false;
            }
        }
    }
    true
}

/// Products of at most `M` elements satisfying `phi_N`; checked to be
/// a normal subgroup.
pub fn e_j_by_formula(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    data: &PhiData,
    m: usize,
    n: usize,
) -> Result<IdxSet> {
    let s_phi = data.phi_true(table, n);
    let mut set = IdxSet::new(table.order());
    let mut frontier = Vec::new();
    for &s in &s_phi {
        if set.insert(s) {
            frontier.push(s);
        }
    }
    for _ in 1..m {
        let mut next = Vec::new();
        for &x in &frontier {
            for &c in &s_phi {
                let y = mul_idx(ctx, table, x, c);
                if set.insert(y) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    if !is_normal_subgroup(ctx, table, &set) {
        return Err(Error::NotASubgroup(format!(
            "products of at most {m} elements satisfying the degree-{n} formula"
        )));
    }
    Ok(set)
}

/// Least `(N, M)`, ordered by `N` then `M`, whose formula set is a
/// normal subgroup equal to `kernel`.
pub fn find_m_n(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    data: &PhiData,
    kernel: &IdxSet,
    n_cap: usize,
    m_cap: usize,
) -> Result<(usize, usize, IdxSet)> {
    for n in 1..=n_cap {
        let s_phi = data.phi_true(table, n);
        let mut set = IdxSet::new(table.order());
        let mut frontier = Vec::new();
        for &s in &s_phi {
            if set.insert(s) {
                frontier.push(s);
            }
        }
        for m in 1..=m_cap {
            if m > 1 {
                let mut next = Vec::new();
                for &x in &frontier {
                    for &c in &s_phi {
                        let y = mul_idx(ctx, table, x, c);
                        if set.insert(y) {
                            next.push(y);
                        }
                    }
                }
                if next.is_empty() && set.count() != kernel.count() {
                    // Stabilized short of the kernel; larger M cannot help.
                    break;
                }
                frontier = next;
            }
            if set == *kernel && is_normal_subgroup(ctx, table, &set) {
                return Ok((n, m, set));
            }
        }
    }
    Err(Error::NotFound(format!(
        "no (N <= {n_cap}, M <= {m_cap}) recovers the reduction kernel"
    )))
}

/// Centralizer structure around a root element `x_alpha(1)`: the
/// centralizer `C0`, the elements centralizing all of `C0`, and the
/// full centralizer of each such element.
pub struct RootCentralizerData {
    pub c0: IdxSet,
    pub z: Vec<usize>,
    pub cz: Vec<IdxSet>,
}

pub fn root_centralizer_data(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    alpha: &[i64],
) -> Result<RootCentralizerData> {
    let x1 = ctx.x(alpha, ctx.ring.one())?;
    let c0_list = centralizer_of(ctx, table, &x1);
    let c0 = IdxSet::from_indices(table.order(), &c0_list);
    // Anything centralizing all of C0 in particular centralizes
    // x_alpha(1), hence lies in C0 itself.
    let mut z = Vec::new();
    for &cand in &c0_list {
        let cm = &table.elems[cand].mat;
        let mut central = true;
        for &h in &c0_list {
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
    let cz = z
        .iter()
        .map(|&zi| {
            IdxSet::from_indices(
                table.order(),
                &centralizer_of(ctx, table, &table.elems[zi]),
            )
        })
        .collect();
    Ok(RootCentralizerData { c0, z, cz })
}

/// `G_alpha = { g : C(g) = C(x_alpha(1)) }`, in table order.
pub fn g_alpha_set(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    alpha: &[i64],
) -> Result<Vec<usize>> {
    let data = root_centralizer_data(ctx, table, alpha)?;
    Ok(data
        .z
        .iter()
        .zip(&data.cz)
        .filter(|(_, cz)| **cz == data.c0)
        .map(|(&zi, _)| zi)
        .collect())
}

/// Sizes witnessing `X_alpha(R) >= X_alpha(R) E_J n G_alpha >= X_alpha(R*)`.
#[derive(Clone, Debug)]
pub struct SandwichReport {
    pub alpha: Root,
    pub x_full: usize,
    pub middle: usize,
    pub x_units: usize,
    pub g_alpha: usize,
}

pub fn check_sandwich(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    kernel: &IdxSet,
    alpha: &[i64],
) -> Result<SandwichReport> {
    let x_idx: Vec<usize> = ctx
        .x_subgroup(alpha)?
        .iter()
        .map(|g| {
            table
                .idx_of(g)
                .ok_or_else(|| Error::NoSuchRoot(alpha.to_vec()))
        })
        .collect::<Result<_>>()?;
    let x_set = IdxSet::from_indices(table.order(), &x_idx);
    let g_alpha = g_alpha_set(ctx, table, alpha)?;
    let g_set = IdxSet::from_indices(table.order(), &g_alpha);

    let mut product = IdxSet::new(table.order());
    for &x in &x_idx {
        for j in kernel.iter() {
            product.insert(mul_idx(ctx, table, x, j));
        }
    }
    let middle = product.intersect(&g_set);

    if !middle.is_subset(&x_set) {
        return Err(Error::InclusionViolated(format!(
            "X_alpha(R) E_J n G_alpha exceeds X_alpha(R) at {alpha:?}"
        )));
    }
    let mut units = 0usize;
    for &u in ctx.ring.units() {
        let g = ctx.x(alpha, u)?;
        let i = table.idx_of(&g).expect("root element is enumerated");
        if !middle.contains(i) {
            return Err(Error::InclusionViolated(format!(
                "x_alpha({u}) escapes the middle set at {alpha:?}"
            )));
        }
        units += 1;
    }
    Ok(SandwichReport {
        alpha: alpha.to_vec(),
        x_full: x_set.count(),
        middle: middle.count(),
        x_units: units,
        g_alpha: g_alpha.len(),
    })
}

/// The definable set
/// `reduce^{-1}(X_alpha(R/J)) n { AB : C(A) n C(B) = C(x_alpha(1)) }`,
/// which must coincide with the root subgroup `X_alpha(R)`.
pub fn root_subgroup_definable(
    ctx: &GroupContext,
    table: &FiniteGroupTable,
    alpha: &[i64],
) -> Result<IdxSet> {
    let kctx = ctx.reduce_context()?;
    let mut residue_mats = HashMap::new();
    for c in kctx.ring.elements() {
        residue_mats.insert(kctx.x(alpha, c)?.mat, c);
    }
    let mut preimage = IdxSet::new(table.order());
    for (i, g) in table.elems.iter().enumerate() {
        if residue_mats.contains_key(&ctx.reduce_element(g).mat) {
            preimage.insert(i);
        }
    }

    let data = root_centralizer_data(ctx, table, alpha)?;
    let mut pairs = IdxSet::new(table.order());
    for (ai, ca) in data.z.iter().zip(&data.cz) {
        for (bi, cb) in data.z.iter().zip(&data.cz) {
            if ca.intersect(cb) == data.c0 {
                pairs.insert(mul_idx(ctx, table, *ai, *bi));
            }
        }
    }

    let definable = preimage.intersect(&pairs);
    let x_idx: Vec<usize> = ctx
        .x_subgroup(alpha)?
        .iter()
        .map(|g| table.idx_of(g).expect("root element is enumerated"))
        .collect();
    let x_set = IdxSet::from_indices(table.order(), &x_idx);
    if definable != x_set {
        return Err(Error::MismatchWithRootSubgroup(format!(
            "definable set has {} elements, X_alpha(R) has {} at {alpha:?}",
            definable.count(),
            x_set.count()
        )));
    }
    Ok(definable)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{e_generators, enumerate_group, DEFAULT_CAP};

    fn table_for(system: &str, ring: &str) -> (GroupContext, FiniteGroupTable) {
        let ctx = GroupContext::parse(system, ring).unwrap();
        let gens = e_generators(&ctx).unwrap();
        let table = enumerate_group(&ctx, &gens, DEFAULT_CAP).unwrap();
        (ctx, table)
    }

    #[test]
    fn phi_fast_path_matches_direct_evaluation_on_psl3_f2() {
        let (ctx, table) = table_for("A2", "gf:2");
        let data = phi_data(&ctx, &table);
        for n in 1..=3 {
            for a in 0..table.order() {
                assert_eq!(
                    data.phi_n(a, n),
                    phi_n_direct(&ctx, &table, a, n),
                    "a={a}, n={n}"
                );
            }
        }
    }

    #[test]
    fn phi_holds_only_for_the_identity_over_a_field() {
        let (ctx, table) = table_for("A2", "gf:2");
        let data = phi_data(&ctx, &table);
        for n in 1..=4 {
            let s = data.phi_true(&table, n);
            assert_eq!(s, vec![0], "n={n}");
        }
    }

    #[test]
    fn kernel_is_trivial_over_fields_and_formula_recovers_it() {
        let (ctx, table) = table_for("A2", "gf:3");
        let kernel = reduction_kernel(&ctx, &table).unwrap();
        assert_eq!(kernel.count(), 1);
        assert!(kernel.contains(0));
        let data = phi_data(&ctx, &table);
        let (n, m, set) = find_m_n(&ctx, &table, &data, &kernel, 4, 8).unwrap();
        assert_eq!((n, m), (1, 1));
        assert_eq!(set, kernel);
        let direct = e_j_by_formula(&ctx, &table, &data, 1, 1).unwrap();
        assert_eq!(direct, kernel);
    }

    #[test]
    fn proper_closures_sit_inside_the_kernel() {
        let (ctx, table) = table_for("A2", "gf:2");
        let kernel = reduction_kernel(&ctx, &table).unwrap();
        let data = phi_data(&ctx, &table);
        for (cid, closure) in data.class_closure.iter().enumerate() {
            if let Some(c) = closure {
                assert!(
                    c.is_subset(&kernel),
                    "class {cid} has a proper closure outside the kernel"
                );
            }
        }
    }

    #[test]
    fn g_alpha_contains_the_root_element_and_is_equivariant() {
        let (ctx, table) = table_for("A2", "gf:2");
        let sys = ctx.lie.sys.clone();
        let a1 = sys.simple_root(0);
        let a2 = sys.simple_root(1);
        let g1 = g_alpha_set(&ctx, &table, &a1).unwrap();
        let x1 = table.idx_of(&ctx.x(&a1, 1).unwrap()).unwrap();
        assert!(g1.contains(&x1));

        // Conjugating by w_{alpha_2}(1) carries G_{alpha_1} onto
        // G_{s_2(alpha_1)} = G_{alpha_1 + alpha_2}.
        let w = ctx.w(&a2, 1).unwrap();
        let target: Vec<i64> = vec![1, 1];
        let g_target = g_alpha_set(&ctx, &table, &target).unwrap();
        let mut conjugated: Vec<usize> = g1
            .iter()
            .map(|&i| {
                table
                    .idx_of(&ctx.conjugate(&table.elems[i], &w))
                    .unwrap()
            })
            .collect();
        conjugated.sort_unstable();
        assert_eq!(conjugated, g_target);
    }

    #[test]
    fn sandwich_and_root_subgroup_hold_over_small_fields() {
        for (sys, ring) in [("A2", "gf:2"), ("A2", "gf:3")] {
            let (ctx, table) = table_for(sys, ring);
            let kernel = reduction_kernel(&ctx, &table).unwrap();
            let roots = ctx.lie.sys.roots.clone();
            for alpha in &roots {
                let rep = check_sandwich(&ctx, &table, &kernel, alpha).unwrap();
                assert_eq!(rep.x_full, ctx.ring.size);
                assert!(rep.middle >= rep.x_units);
                let def = root_subgroup_definable(&ctx, &table, alpha).unwrap();
                assert_eq!(def.count(), ctx.ring.size, "{sys}/{ring} at {alpha:?}");
            }
        }
    }

    #[test]
    fn formula_set_failure_reports_not_a_subgroup() {
        let (ctx, table) = table_for("A2", "gf:2");
        let data = phi_data(&ctx, &table);
        // With only the identity satisfying phi, single products give
        // the trivial subgroup; that is fine. Force a failure with a
        // synthetic non-closed phi set by checking a hand-built set.
        let mut synthetic = IdxSet::new(table.order());
        synthetic.insert(0);
        synthetic.insert(1);
        assert!(!is_normal_subgroup(&ctx, &table, &synthetic));
        // The real formula set is closed for every (M, N) tried.
        for n in 1..=2 {
            for m in 1..=2 {
                assert!(e_j_by_formula(&ctx, &table, &data, m, n).is_ok());
            }
        }
    }
}
