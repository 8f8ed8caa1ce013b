//! Gauss decomposition `g = u t v u'` over a finite local ring and the
//! coded-element arithmetic built on it.
//!
//! In the weight-sorted adjoint basis positive root elements are unit
//! lower triangular and negative ones unit upper triangular, so the
//! big cell is exactly the set of matrices admitting an LDU
//! factorization with unit pivots. Parameters are then peeled off one
//! root at a time: the leading factor of an ascending product is the
//! only one contributing to the Cartan rows of the column of its
//! opposite root vector, and the coroot coefficients are coprime, so
//! an integer Bezout combination reads the parameter exactly.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GroupContext, GroupElement, RMat};
use crate::poly::bezout_one;
use crate::rings::RingDescriptor;
use crate::roots::{Root, RootSystem};

/// Parameters of `u t v u'`: `u`, `v`, `u2` over positive roots in the
/// fixed order, `t` over simple roots. `t` serializes as `"h"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussForm {
    pub u: Vec<u16>,
    #[serde(rename = "h")]
    pub t: Vec<u16>,
    pub v: Vec<u16>,
    pub u2: Vec<u16>,
}

/// A Gauss form tagged with the ring it codes an element of.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodedElement {
    pub ring: RingDescriptor,
    pub form: GaussForm,
}

fn check_arity(ctx: &GroupContext, f: &GaussForm) -> Result<()> {
    let n = ctx.lie.sys.positive.len();
    let l = ctx.lie.sys.rank;
    if f.u.len() != n || f.v.len() != n || f.u2.len() != n || f.t.len() != l {
        return Err(Error::DecompositionFailed(format!(
            "form arity mismatch: expected {n}+{l}+{n}+{n} parameters"
        )));
    }
    let size = ctx.ring.size as u16;
    if f.u.iter().chain(&f.t).chain(&f.v).chain(&f.u2).any(|&c| c >= size) {
        return Err(Error::DecompositionFailed(format!(
            "parameter code out of range for {}",
            ctx.ring.desc
        )));
    }
    Ok(())
}

/// Evaluates `u t v u'` in the fixed positive-root order.
pub fn evaluate_form(ctx: &GroupContext, f: &GaussForm) -> Result<GroupElement> {
    check_arity(ctx, f)?;
    let positives = ctx.lie.sys.positive.clone();
    let mut acc = ctx.identity();
    for (i, gamma) in positives.iter().enumerate() {
        acc = ctx.mul(&acc, &ctx.x(gamma, f.u[i])?);
    }
    for (j, &xi) in f.t.iter().enumerate() {
        let alpha = ctx.lie.sys.simple_root(j);
        let h = ctx
            .h(&alpha, xi)
            .map_err(|_| Error::NonUnitTorusParameter(xi.to_string()))?;
        acc = ctx.mul(&acc, &h);
    }
    for (i, gamma) in positives.iter().enumerate() {
        acc = ctx.mul(&acc, &ctx.x(&RootSystem::negate(gamma), f.v[i])?);
    }
    for (i, gamma) in positives.iter().enumerate() {
        acc = ctx.mul(&acc, &ctx.x(gamma, f.u2[i])?);
    }
    Ok(acc)
}

/// Reads the parameter of the leading factor of an ascending product
/// of root elements from the Cartan rows of one matrix column.
fn leading_param(ctx: &GroupContext, w: &RMat, gamma: &Root, negative_side: bool) -> u16 {
    let source = if negative_side {
        gamma.clone()
    } else {
        RootSystem::negate(gamma)
    };
    let col = ctx.lie.basis_row(&source);
    let bez = bezout_one(ctx.lie.coroot_coeffs(gamma));
    let r = &ctx.ring;
    let m = w.n;
    let mut acc = 0u16;
    for (j, &row) in ctx.lie.cartan_rows.iter().enumerate() {
        acc = r.add(acc, r.mul(r.from_int(bez[j]), w.a[row * m + col]));
    }
    if negative_side {
        r.neg(acc)
    } else {
        acc
    }
}

/// Strips factors off an ascending unipotent product, returning its
/// parameters in positive-root order.
fn peel_unipotent(ctx: &GroupContext, mat: RMat, negative_side: bool) -> Result<Vec<u16>> {
    let positives = ctx.lie.sys.positive.clone();
    let mut w = mat;
    let mut params = Vec::with_capacity(positives.len());
    for gamma in &positives {
        let t = leading_param(ctx, &w, gamma, negative_side);
        params.push(t);
        let root = if negative_side {
            RootSystem::negate(gamma)
        } else {
            gamma.clone()
        };
        let undo = ctx.x(&root, ctx.ring.neg(t))?;
        w = ctx.mat_mul(&undo.mat, &w);
    }
    if w != ctx.identity().mat {
        return Err(Error::NotInBigCell(
            "unipotent part does not peel to the identity".into(),
        ));
    }
    Ok(params)
}

/// LDU factorization with unit pivots: `a = L * diag * U` with `L`
/// unit lower and `U` unit upper triangular.
fn ldu(ctx: &GroupContext, a: &RMat) -> Result<(RMat, Vec<u16>, RMat)> {
    let n = a.n;
    let r = &ctx.ring;
    let mut m = a.clone();
    let mut l = ctx.identity().mat;
    let mut u = ctx.identity().mat;
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        let piv = m.at(k, k);
        if !r.is_unit(piv) {
            return Err(Error::NotInBigCell(format!("basis row {k}")));
        }
        let pinv = r.inv(piv)?;
        for i in k + 1..n {
            l.set(i, k, r.mul(m.at(i, k), pinv));
        }
        for j in k + 1..n {
            u.set(k, j, r.mul(pinv, m.at(k, j)));
        }
        for i in k + 1..n {
            let lik = l.at(i, k);
            if lik == 0 {
                continue;
            }
            let scaled = r.mul(lik, piv);
            for j in k + 1..n {
                m.set(i, j, r.sub(m.at(i, j), r.mul(scaled, u.at(k, j))));
            }
        }
        diag.push(piv);
    }
    Ok((l, diag, u))
}

/// Finds the lexicographically least unit tuple whose torus element
/// has the given diagonal.
fn torus_params(ctx: &GroupContext, diag: &[u16]) -> Result<Vec<u16>> {
    let l = ctx.lie.sys.rank;
    let r = &ctx.ring;
    let units = r.units().to_vec();
    if units.len().pow(l as u32) > 1_000_000 {
        return Err(Error::SearchSpaceTooLarge(format!(
            "torus search over {} tuples",
            units.len().pow(l as u32)
        )));
    }
    let m = ctx.dim();
    let mut exps = vec![vec![0i64; l]; m];
    for (row, e) in exps.iter_mut().enumerate() {
        if let Some(weight) = ctx.lie.basis_weights[row].clone() {
            for (j, ej) in e.iter_mut().enumerate() {
                *ej = ctx.lie.sys.pairing(&weight, &ctx.lie.sys.simple_root(j));
            }
        }
    }
    let mut pick = vec![0usize; l];
    loop {
        let xi: Vec<u16> = pick.iter().map(|&i| units[i]).collect();
        let mut ok = true;
        for row in 0..m {
            let mut want = r.one();
            for j in 0..l {
                want = r.mul(want, r.pow(xi[j], exps[row][j])?);
            }
            if want != diag[row] {
                ok = false;
                break;
            }
        }
        if ok {
            return Ok(xi);
        }
        let mut j = l;
        loop {
            if j == 0 {
                return Err(Error::NotInBigCell(
                    "diagonal is not a torus element".into(),
                ));
            }
            j -= 1;
            pick[j] += 1;
            if pick[j] < units.len() {
                break;
            }
            pick[j] = 0;
        }
    }
}

/// Factors an element of the big cell as `u t v` (with `u2 = 0`).
pub fn big_cell_factor(ctx: &GroupContext, g: &GroupElement) -> Result<GaussForm> {
    let (lmat, diag, umat) = ldu(ctx, &g.mat)?;
    let u = peel_unipotent(ctx, lmat, false)?;
    let v = peel_unipotent(ctx, umat, true)?;
    let t = torus_params(ctx, &diag)?;
    let n = ctx.lie.sys.positive.len();
    let form = GaussForm {
        u,
        t,
        v,
        u2: vec![0; n],
    };
    let back = evaluate_form(ctx, &form)?;
    if back != *g {
        return Err(Error::NotInBigCell("recomposition mismatch".into()));
    }
    Ok(form)
}

/// Residue-field search data for full Gauss decomposition: every
/// unipotent candidate over the residue field, in lexicographic
/// parameter order.
pub struct Decomposer {
    pub kctx: GroupContext,
    cands: Vec<(Vec<u16>, GroupElement)>,
}

impl Decomposer {
    pub fn new(ctx: &GroupContext) -> Result<Decomposer> {
        let kctx = ctx.reduce_context()?;
        let n = kctx.lie.sys.positive.len();
        let total = (kctx.ring.size as u64).checked_pow(n as u32);
        match total {
            Some(t) if t <= 2_000_000 => {}
            _ => {
                return Err(Error::SearchSpaceTooLarge(format!(
                    "residue search over {}^{n} candidates",
                    kctx.ring.size
                )))
            }
        }
        let mut cands = Vec::new();
        let positives = kctx.lie.sys.positive.clone();
        let mut params = vec![0u16; n];
        fn rec(
            kctx: &GroupContext,
            positives: &[Root],
            params: &mut Vec<u16>,
            i: usize,
            acc: &GroupElement,
            out: &mut Vec<(Vec<u16>, GroupElement)>,
        ) -> Result<()> {
            if i == positives.len() {
                out.push((params.clone(), acc.clone()));
                return Ok(());
            }
            for c in kctx.ring.elements() {
                params[i] = c;
                let next = kctx.mul(acc, &kctx.x(&positives[i], c)?);
                rec(kctx, positives, params, i + 1, &next, out)?;
            }
            Ok(())
        }
        let id = kctx.identity();
        rec(&kctx, &positives, &mut params, 0, &id, &mut cands)?;
        Ok(Decomposer { kctx, cands })
    }

    /// Decomposes any element of `E` as `u t v u'`. The `u'` part is
    /// the first residue candidate, in lexicographic parameter order,
    /// that moves the reduction of `g` into the big cell; its
    /// parameters are lifted coordinatewise.
    pub fn decompose(&self, ctx: &GroupContext, g: &GroupElement) -> Result<GaussForm> {
        let gr = ctx.reduce_element(g);
        let positives = ctx.lie.sys.positive.clone();
        for (params, cand) in &self.cands {
            let trial = self.kctx.mat_mul(&gr.mat, &cand.inv);
            if ldu(&self.kctx, &trial).is_err() {
                continue;
            }
            let lifted: Vec<u16> = params.iter().map(|&c| ctx.ring.lift(c)).collect();
            let mut tail = ctx.identity();
            for (i, gamma) in positives.iter().enumerate() {
                tail = ctx.mul(&tail, &ctx.x(gamma, lifted[i])?);
            }
            let body = ctx.mul(g, &ctx.inv(&tail));
            let mut form = big_cell_factor(ctx, &body)?;
            form.u2 = lifted;
            let back = evaluate_form(ctx, &form)?;
            if back != *g {
                return Err(Error::DecompositionFailed(
                    "recomposition does not return the input".into(),
                ));
            }
            return Ok(form);
        }
        Err(Error::DecompositionFailed(
            "no residue candidate moves the element into the big cell".into(),
        ))
    }
}

/// Attaches the context's ring descriptor to a form.
pub fn code_of(ctx: &GroupContext, form: GaussForm) -> CodedElement {
    CodedElement {
        ring: ctx.ring.desc,
        form,
    }
}

/// Evaluates a coded element over the context's ring.
pub fn decode(ctx: &GroupContext, c: &CodedElement) -> Result<GroupElement> {
    if c.ring != ctx.ring.desc {
        return Err(Error::RingMismatch(
            c.ring.to_string(),
            ctx.ring.desc.to_string(),
        ));
    }
    evaluate_form(ctx, &c.form)
}

/// Equality of coded elements by evaluation.
pub fn code_eq(ctx: &GroupContext, a: &CodedElement, b: &CodedElement) -> Result<bool> {
    Ok(decode(ctx, a)? == decode(ctx, b)?)
}

/// Product of coded elements: evaluate, multiply, decompose.
pub fn code_mul(
    ctx: &GroupContext,
    dec: &Decomposer,
    a: &CodedElement,
    b: &CodedElement,
) -> Result<CodedElement> {
    let p = ctx.mul(&decode(ctx, a)?, &decode(ctx, b)?);
    Ok(code_of(ctx, dec.decompose(ctx, &p)?))
}

/// Exhaustively checks that distinct `(u, t, v)` parameter tuples
/// evaluate to distinct matrices. Returns the number of forms checked.
pub fn check_big_cell_uniqueness(ctx: &GroupContext) -> Result<usize> {
    let n = ctx.lie.sys.positive.len();
    let l = ctx.lie.sys.rank;
    let size = ctx.ring.size as u64;
    let ucount = size.checked_pow(n as u32);
    let tcount = (ctx.ring.units().len() as u64).checked_pow(l as u32);
    let total = match (ucount, tcount) {
        (Some(uc), Some(tc)) => uc.checked_mul(tc).and_then(|x| x.checked_mul(uc)),
        _ => None,
    };
    match total {
        Some(t) if t <= 5_000_000 => {}
        _ => {
            return Err(Error::SearchSpaceTooLarge(
                "big-cell uniqueness sweep".into(),
            ))
        }
    }

    let positives = ctx.lie.sys.positive.clone();
    let mut umats: Vec<RMat> = Vec::new();
    let mut vmats: Vec<RMat> = Vec::new();
    let mut stack: Vec<(usize, GroupElement, GroupElement)> =
        vec![(0, ctx.identity(), ctx.identity())];
    while let Some((i, upos, vneg)) = stack.pop() {
        if i == n {
            umats.push(upos.mat);
            vmats.push(vneg.mat);
            continue;
        }
        // Reverse code order so the stack pops in ascending order.
        for c in (0..ctx.ring.size as u16).rev() {
            let nu = ctx.mul(&upos, &ctx.x(&positives[i], c)?);
            let nv = ctx.mul(&vneg, &ctx.x(&RootSystem::negate(&positives[i]), c)?);
            stack.push((i + 1, nu, nv));
        }
    }
    let mut tmats: Vec<RMat> = Vec::new();
    let units = ctx.ring.units().to_vec();
    let mut pick = vec![0usize; l];
    'outer: loop {
        let mut t = ctx.identity();
        for (j, &pi) in pick.iter().enumerate() {
            t = ctx.mul(&t, &ctx.h(&ctx.lie.sys.simple_root(j), units[pi])?);
        }
        tmats.push(t.mat);
        let mut j = l;
        loop {
            if j == 0 {
                break 'outer;
            }
            j -= 1;
            pick[j] += 1;
            if pick[j] < units.len() {
                break;
            }
            pick[j] = 0;
        }
    }

    let mut seen = std::collections::HashSet::new();
    let mut count = 0usize;
    for um in &umats {
        for tm in &tmats {
            let ut = ctx.mat_mul(um, tm);
            for vm in &vmats {
                let w = ctx.mat_mul(&ut, vm);
                if !seen.insert(w) {
                    return Err(Error::IdentityViolated(format!(
                        "two big-cell forms coincide in {}",
                        ctx.name()
                    )));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(system: &str, ring: &str) -> GroupContext {
        GroupContext::parse(system, ring).unwrap()
    }

    fn random_word(c: &GroupContext, rng: &mut ChaCha8Rng, len: usize) -> GroupElement {
        let roots = c.lie.sys.roots.clone();
        let units = c.ring.units().to_vec();
        let mut acc = c.identity();
        for _ in 0..len {
            let root = &roots[rng.gen_range(0..roots.len())];
            let g = match rng.gen_range(0..5) {
                0 => c.w(root, units[rng.gen_range(0..units.len())]).unwrap(),
                1 => c.h(root, units[rng.gen_range(0..units.len())]).unwrap(),
                _ => c.x(root, rng.gen_range(0..c.ring.size) as u16).unwrap(),
            };
            acc = c.mul(&acc, &g);
        }
        acc
    }

    #[test]
    fn identity_decomposes_to_zero_parameters() {
        let c = ctx("A2", "zmod:4");
        let dec = Decomposer::new(&c).unwrap();
        let f = dec.decompose(&c, &c.identity()).unwrap();
        assert_eq!(f.u, vec![0, 0, 0]);
        assert_eq!(f.t, vec![1, 1]);
        assert_eq!(f.v, vec![0, 0, 0]);
        assert_eq!(f.u2, vec![0, 0, 0]);
    }

    #[test]
    fn big_cell_parameters_round_trip_exactly() {
        let c = ctx("A2", "zmod:4");
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let units = c.ring.units().to_vec();
        for _ in 0..200 {
            let form = GaussForm {
                u: (0..3).map(|_| rng.gen_range(0..4) as u16).collect(),
                t: (0..2).map(|_| units[rng.gen_range(0..2)]).collect(),
                v: (0..3).map(|_| rng.gen_range(0..4) as u16).collect(),
                u2: vec![0, 0, 0],
            };
            let g = evaluate_form(&c, &form).unwrap();
            let back = big_cell_factor(&c, &g).unwrap();
            assert_eq!(back, form);
        }
    }

    #[test]
    fn weyl_element_is_outside_the_big_cell_but_decomposes() {
        let c = ctx("A2", "gf:3");
        let alpha1 = c.lie.sys.simple_root(0);
        let w = c.w(&alpha1, 1).unwrap();
        assert!(matches!(
            big_cell_factor(&c, &w),
            Err(Error::NotInBigCell(_))
        ));
        let dec = Decomposer::new(&c).unwrap();
        let f = dec.decompose(&c, &w).unwrap();
        assert_ne!(f.u2, vec![0, 0, 0]);
        assert_eq!(evaluate_form(&c, &f).unwrap(), w);
    }

    #[test]
    fn uniqueness_is_exhaustive_on_small_fields() {
        let c2 = ctx("A2", "gf:2");
        assert_eq!(check_big_cell_uniqueness(&c2).unwrap(), 8 * 1 * 8);
        let c3 = ctx("A2", "gf:3");
        assert_eq!(check_big_cell_uniqueness(&c3).unwrap(), 27 * 4 * 27);
    }

    #[test]
    fn random_words_decompose_and_recompose() {
        for (sys, ring) in [("A2", "zmod:4"), ("A2", "dual:2"), ("B2", "gf:3")] {
            let c = ctx(sys, ring);
            let dec = Decomposer::new(&c).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(23);
            for i in 0..100 {
                let g = random_word(&c, &mut rng, 1 + i % 6);
                let f = dec.decompose(&c, &g).unwrap();
                assert_eq!(evaluate_form(&c, &f).unwrap(), g, "{sys}/{ring}");
            }
        }
    }

    #[test]
    fn decomposition_is_deterministic() {
        let c = ctx("A2", "gf:3");
        let dec = Decomposer::new(&c).unwrap();
        let w = c.w(&c.lie.sys.simple_root(1), 2).unwrap();
        assert_eq!(dec.decompose(&c, &w).unwrap(), dec.decompose(&c, &w).unwrap());
    }

    #[test]
    fn adjoint_torus_kernel_is_resolved_lexicographically() {
        // Over gf:4 the tuple (omega, omega^2) acts trivially, so the
        // torus parameters are not unique; decomposition picks the
        // lexicographically least tuple.
        let c = ctx("A2", "gf:4");
        let trivial = GaussForm {
            u: vec![0, 0, 0],
            t: vec![2, 3],
            v: vec![0, 0, 0],
            u2: vec![0, 0, 0],
        };
        assert_eq!(evaluate_form(&c, &trivial).unwrap(), c.identity());
        let dec = Decomposer::new(&c).unwrap();
        assert_eq!(dec.decompose(&c, &c.identity()).unwrap().t, vec![1, 1]);
    }

    #[test]
    fn coded_arithmetic_matches_group_arithmetic() {
        let c = ctx("A2", "zmod:4");
        let dec = Decomposer::new(&c).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let a = random_word(&c, &mut rng, 4);
            let b = random_word(&c, &mut rng, 4);
            let ca = code_of(&c, dec.decompose(&c, &a).unwrap());
            let cb = code_of(&c, dec.decompose(&c, &b).unwrap());
            let cab = code_mul(&c, &dec, &ca, &cb).unwrap();
            assert_eq!(decode(&c, &cab).unwrap(), c.mul(&a, &b));
            let direct = code_of(&c, dec.decompose(&c, &c.mul(&a, &b)).unwrap());
            assert!(code_eq(&c, &cab, &direct).unwrap());
            assert_eq!(cab, direct);
        }
    }

    #[test]
    fn ring_mismatch_is_rejected() {
        let c4 = ctx("A2", "zmod:4");
        let c2 = ctx("A2", "gf:2");
        let dec = Decomposer::new(&c4).unwrap();
        let f = dec.decompose(&c4, &c4.identity()).unwrap();
        let coded = code_of(&c4, f);
        assert!(matches!(
            decode(&c2, &coded),
            Err(Error::RingMismatch(..))
        ));
    }

    #[test]
    fn form_arity_and_range_are_validated() {
        let c = ctx("A2", "gf:3");
        let bad = GaussForm {
            u: vec![0, 0],
            t: vec![1, 1],
            v: vec![0, 0, 0],
            u2: vec![0, 0, 0],
        };
        assert!(matches!(
            evaluate_form(&c, &bad),
            Err(Error::DecompositionFailed(_))
        ));
        let oob = GaussForm {
            u: vec![0, 0, 3],
            t: vec![1, 1],
            v: vec![0, 0, 0],
            u2: vec![0, 0, 0],
        };
        assert!(matches!(
            evaluate_form(&c, &oob),
            Err(Error::DecompositionFailed(_))
        ));
        let nonunit_torus = GaussForm {
            u: vec![0, 0, 0],
            t: vec![0, 1],
            v: vec![0, 0, 0],
            u2: vec![0, 0, 0],
        };
        assert!(matches!(
            evaluate_form(&c, &nonunit_torus),
            Err(Error::NonUnitTorusParameter(_))
        ));
    }

    #[test]
    fn json_round_trip_uses_h_for_the_torus() {
        let f = GaussForm {
            u: vec![1, 0, 2],
            t: vec![3, 1],
            v: vec![0, 0, 0],
            u2: vec![2, 0, 0],
        };
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.contains("\"h\":[3,1]"), "{s}");
        let back: GaussForm = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
