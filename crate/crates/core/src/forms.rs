//! The exterior algebra on `d*`, its operators, the wedge-by-omega map and
//! its image/kernel subspaces, and the symplectic Lie algebra `sp(d)` with
//! its fundamental representations realized on those subspaces.
//!
//! Forms use subset-indexed coordinates with the determinant evaluation
//! normalization, so a basis form `x^K` evaluated on the basis tuple `d_K`
//! gives 1.

use crate::algebra::Algebra;
use crate::linalg::{kernel_basis, solve_dense, sparse_from_dense, Echelon, Mat};
use crate::rat::{rone, rzero, Rat};
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Sorted index subset naming a basis form `x^{k_1} ^ ... ^ x^{k_n}`.
pub type Subset = Vec<u8>;

/// Sparse exterior form of a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormElement {
    pub nvars: usize,
    pub degree: usize,
    pub terms: BTreeMap<Subset, Rat>,
}

impl FormElement {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        FormElement {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(nvars: usize, subset: &[u8]) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(subset.to_vec(), rone());
        FormElement {
            nvars,
            degree: subset.len(),
            terms,
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut f = FormElement::zero(nvars, 0);
        if !c.is_zero() {
            f.terms.insert(vec![], c);
        }
        f
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, subset: Subset, coeff: &Rat) {
        if coeff.is_zero() {
            return;
        }
        debug_assert_eq!(subset.len(), self.degree);
        match self.terms.entry(subset) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &FormElement) -> FormElement {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c);
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> FormElement {
        if s.is_zero() {
            return FormElement::zero(self.nvars, self.degree);
        }
        FormElement {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.clone(), v * s))
                .collect(),
        }
    }

    /// Evaluate on a tuple of basis indices (not necessarily sorted).
    pub fn eval_indices(&self, indices: &[u8]) -> Rat {
        let Some((sign, sorted)) = sort_with_sign(indices) else {
            return rzero();
        };
        match self.terms.get(&sorted) {
            Some(c) => {
                if sign > 0 {
                    c.clone()
                } else {
                    -c.clone()
                }
            }
            None => rzero(),
        }
    }

    /// Dense coordinates against the lexicographic subset basis.
    pub fn to_dense(&self, basis: &[Subset]) -> Vec<Rat> {
        basis
            .iter()
            .map(|s| self.terms.get(s).cloned().unwrap_or_else(rzero))
            .collect()
    }

    pub fn from_dense(nvars: usize, basis: &[Subset], v: &[Rat]) -> FormElement {
        let degree = basis.first().map(|s| s.len()).unwrap_or(0);
        let mut f = FormElement::zero(nvars, degree);
        for (s, c) in basis.iter().zip(v) {
            f.add_term(s.clone(), c);
        }
        f
    }
}

/// Sort indices, returning the permutation sign; `None` on a repeat.
fn sort_with_sign(indices: &[u8]) -> Option<(i32, Subset)> {
    let mut v = indices.to_vec();
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((sign, v))
}

/// Sorted `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Subset> {
    let mut out = Vec::new();
    let mut cur: Subset = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Subset, out: &mut Vec<Subset>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i as u8);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut cur, &mut out);
    }
    out
}

/// Wedge product of basis forms with the determinant normalization:
/// disjoint subsets merge with the shuffle sign.
pub fn wedge(a: &FormElement, b: &FormElement) -> FormElement {
    let mut out = FormElement::zero(a.nvars, a.degree + b.degree);
    for (sa, ca) in &a.terms {
        for (sb, cb) in &b.terms {
            let mut merged: Vec<u8> = sa.iter().chain(sb.iter()).copied().collect();
            let Some((sign, sorted)) = sort_with_sign(&merged) else {
                continue;
            };
            merged.clear();
            let c = if sign > 0 { ca * cb } else { -(ca * cb) };
            out.add_term(sorted, &c);
        }
    }
    out
}

/// Chevalley-Eilenberg differential with trivial coefficients.
pub fn d0(alg: &Algebra, a: &FormElement) -> FormElement {
    let n = a.degree;
    let nv = a.nvars;
    let mut out = FormElement::zero(nv, n + 1);
    if n == 0 {
        return out;
    }
    for subset in subsets(nv, n + 1) {
        let mut total = rzero();
        for p in 0..subset.len() {
            for q in (p + 1)..subset.len() {
                // (-1)^{(p+1)+(q+1)} a([d_p, d_q] ^ rest)
                let rest: Vec<u8> = subset
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != p && *t != q)
                    .map(|(_, &x)| x)
                    .collect();
                let i = subset[p] as usize;
                let j = subset[q] as usize;
                let mut val = rzero();
                for k in 0..nv {
                    let c = &alg.spec.c[i][j][k];
                    if c.is_zero() {
                        continue;
                    }
                    let mut tuple = vec![k as u8];
                    tuple.extend_from_slice(&rest);
                    val += c * a.eval_indices(&tuple);
                }
                if (p + q) % 2 == 0 {
                    // (p+1)+(q+1) even <=> p+q even
                    total += val;
                } else {
                    total -= val;
                }
            }
        }
        out.add_term(subset, &total);
    }
    out
}

/// Contraction with a coordinate vector.
pub fn contract(a: &FormElement, v: &[Rat]) -> FormElement {
    let nv = a.nvars;
    if a.degree == 0 {
        return FormElement::zero(nv, 0);
    }
    let mut out = FormElement::zero(nv, a.degree - 1);
    for subset in subsets(nv, a.degree - 1) {
        let mut val = rzero();
        for k in 0..nv {
            if v[k].is_zero() {
                continue;
            }
            let mut tuple = vec![k as u8];
            tuple.extend_from_slice(&subset);
            val += &v[k] * a.eval_indices(&tuple);
        }
        out.add_term(subset, &val);
    }
    out
}

/// Dual action of a matrix on forms:
/// `(A . a)(d_1 ^ ... ^ d_n) = sum_i (-1)^i a(A d_i ^ ... omit i ...)`.
pub fn gl_act(alg_dim: usize, m: &Mat, a: &FormElement) -> FormElement {
    let nv = alg_dim;
    let mut out = FormElement::zero(nv, a.degree);
    if a.degree == 0 {
        return out;
    }
    for subset in subsets(nv, a.degree) {
        let mut total = rzero();
        for (pos, &idx) in subset.iter().enumerate() {
            let rest: Vec<u8> = subset
                .iter()
                .enumerate()
                .filter(|(t, _)| *t != pos)
                .map(|(_, &x)| x)
                .collect();
            let mut val = rzero();
            for k in 0..nv {
                let e = m.at(k, idx as usize);
                if e.is_zero() {
                    continue;
                }
                let mut tuple = vec![k as u8];
                tuple.extend_from_slice(&rest);
                val += e * a.eval_indices(&tuple);
            }
            if pos % 2 == 0 {
                // 1-based position sign (-1)^{pos+1}
                total -= val;
            } else {
                total += val;
            }
        }
        out.add_term(subset, &total);
    }
    out
}

/// The 2-form with `omega(d_i ^ d_j)` matching the algebra's omega matrix.
pub fn omega_form(alg: &Algebra) -> FormElement {
    let nv = alg.dim();
    let mut f = FormElement::zero(nv, 2);
    for i in 0..nv {
        for j in (i + 1)..nv {
            f.add_term(vec![i as u8, j as u8], alg.spec.omega.at(i, j));
        }
    }
    f
}

/// Wedge multiplication by omega.
pub fn psi(alg: &Algebra, a: &FormElement) -> FormElement {
    wedge(&omega_form(alg), a)
}

/// Matrix of an operator `Lambda^from -> Lambda^to` given its action.
fn operator_matrix(
    nvars: usize,
    from_deg: usize,
    to_deg: usize,
    f: impl Fn(&FormElement) -> FormElement,
) -> Mat {
    let from = subsets(nvars, from_deg);
    let to = subsets(nvars, to_deg);
    let mut m = Mat::zeros(to.len(), from.len());
    for (c, s) in from.iter().enumerate() {
        let img = f(&FormElement::basis(nvars, s));
        let dense = img.to_dense(&to);
        for (r, val) in dense.into_iter().enumerate() {
            *m.at_mut(r, c) = val;
        }
    }
    m
}

/// Matrix of `psi: Lambda^n -> Lambda^{n+2}`.
pub fn psi_matrix(alg: &Algebra, n: usize) -> Mat {
    operator_matrix(alg.dim(), n, n + 2, |a| psi(alg, a))
}

/// Matrix of the action of `m` on `Lambda^deg`.
pub fn gl_act_matrix(alg: &Algebra, m: &Mat, deg: usize) -> Mat {
    operator_matrix(alg.dim(), deg, deg, |a| gl_act(alg.dim(), m, a))
}

/// Basis of the image of `psi` on `Lambda^{n-2}` inside `Lambda^n`
/// (dense coordinates, graded-lex pivoted, deterministic).
pub fn subspace_i(alg: &Algebra, n: usize) -> Vec<Vec<Rat>> {
    let dim_n = subsets(alg.dim(), n).len();
    if n < 2 {
        return Vec::new();
    }
    let m = psi_matrix(alg, n - 2);
    let mut ech = Echelon::new();
    let mut out = Vec::new();
    for c in 0..m.cols {
        let col = m.col(c);
        if ech.insert(sparse_from_dense(&col)) {
            out.push(col);
        }
    }
    debug_assert!(out.iter().all(|v| v.len() == dim_n));
    out
}

/// Basis of the kernel of `psi` on `Lambda^n` (dense coordinates).
pub fn subspace_j(alg: &Algebra, n: usize) -> Vec<Vec<Rat>> {
    let m = psi_matrix(alg, n);
    let rows: Vec<_> = (0..m.rows)
        .map(|r| sparse_from_dense(m.row(r)))
        .collect();
    kernel_basis(rows, m.cols)
}

/// Matrix of `psi^m : Lambda^{N-m} -> Lambda^{N+m}`; invertible for
/// `0 <= m <= N` by nondegeneracy of omega.
pub fn psi_power_iso(alg: &Algebra, m: usize) -> Mat {
    let nn = alg.half_dim();
    assert!(m <= nn);
    let mut acc = Mat::identity(subsets(alg.dim(), nn - m).len());
    for step in 0..m {
        let deg = nn - m + 2 * step;
        acc = psi_matrix(alg, deg).mul(&acc);
    }
    acc
}

/// A finite-dimensional `sp(d)`-module presented by its generator matrices.
#[derive(Clone, Debug)]
pub struct SpRepresentation {
    pub dim: usize,
    /// Action of `f^{ij}` for `i <= j`.
    pub f_act: BTreeMap<(usize, usize), Mat>,
    /// Reported label: highest weights with multiplicities.
    pub label: Vec<(Vec<i64>, usize)>,
    pub name: String,
}

impl SpRepresentation {
    pub fn trivial(alg: &Algebra) -> Self {
        let nv = alg.dim();
        let mut f_act = BTreeMap::new();
        for i in 0..nv {
            for j in i..nv {
                f_act.insert((i, j), Mat::zeros(1, 1));
            }
        }
        SpRepresentation {
            dim: 1,
            f_act,
            label: vec![(vec![0; alg.half_dim()], 1)],
            name: "R(pi_0)".to_string(),
        }
    }

    pub fn act_f(&self, i: usize, j: usize) -> &Mat {
        if i <= j {
            &self.f_act[&(i, j)]
        } else {
            &self.f_act[&(j, i)]
        }
    }

    /// Action of an arbitrary `X in sp(d)` written in the `f` basis.
    pub fn act_sp(&self, alg: &Algebra, x: &Mat) -> Mat {
        let coeffs = sp_in_f_basis(alg, x);
        let mut out = Mat::zeros(self.dim, self.dim);
        for ((i, j), c) in coeffs {
            if !c.is_zero() {
                out = out.add(&self.act_f(i, j).scale(&c));
            }
        }
        out
    }
}

/// The matrix of `f^{ij} = -(e^{ij} + e^{ji})/2` in the chosen basis, where
/// `e^{ij}` has column `j` equal to the dual basis vector `d^i`.
pub fn f_matrix(alg: &Algebra, i: usize, j: usize) -> Mat {
    let nv = alg.dim();
    let mut m = Mat::zeros(nv, nv);
    let half = crate::rat::rat(-1, 2);
    for a in 0..nv {
        *m.at_mut(a, j) += &half * &alg.derived.dual_basis[i][a];
        *m.at_mut(a, i) += &half * &alg.derived.dual_basis[j][a];
    }
    m
}

/// Express `X in sp(d)` in the `f^{ij}` basis (`i <= j`).
/// Uses the index-lowering `a = -omega X`, which is symmetric exactly on `sp`.
pub fn sp_in_f_basis(alg: &Algebra, x: &Mat) -> BTreeMap<(usize, usize), Rat> {
    let nv = alg.dim();
    let a = alg.spec.omega.mul(x).scale(&-rone());
    debug_assert_eq!(a, a.transpose(), "matrix is not in sp(d)");
    let mut out = BTreeMap::new();
    for i in 0..nv {
        for j in i..nv {
            let c = if i == j {
                -a.at(i, i).clone()
            } else {
                crate::rat::rint(-2) * a.at(i, j)
            };
            if !c.is_zero() {
                out.insert((i, j), c);
            }
        }
    }
    out
}

/// `sp(d)` membership: `X^T omega + omega X = 0`.
pub fn is_sp(alg: &Algebra, x: &Mat) -> bool {
    x.transpose()
        .mul(&alg.spec.omega)
        .add(&alg.spec.omega.mul(x))
        .is_zero()
}

/// Fundamental representation `R(pi_n)` realized on the kernel subspace
/// `J^{2N-n}` of wedge-by-omega, with the dual action of `sp(d)`.
pub fn build_fundamental_rep(alg: &Algebra, n: usize) -> SpRepresentation {
    let nn = alg.half_dim();
    assert!(n <= nn, "fundamental index out of range");
    if n == 0 {
        return SpRepresentation::trivial(alg);
    }
    let deg = 2 * nn - n;
    let basis = subspace_j(alg, deg);
    let dim = basis.len();
    let amb = subsets(alg.dim(), deg);
    let nv = alg.dim();

    // matrix columns of the subspace basis, for solving coordinates
    let mut bmat = Mat::zeros(amb.len(), dim);
    for (c, v) in basis.iter().enumerate() {
        for (r, x) in v.iter().enumerate() {
            *bmat.at_mut(r, c) = x.clone();
        }
    }

    let mut f_act = BTreeMap::new();
    for i in 0..nv {
        for j in i..nv {
            let fm = f_matrix(alg, i, j);
            let action = gl_act_matrix(alg, &fm, deg);
            let mut rep = Mat::zeros(dim, dim);
            for (c, v) in basis.iter().enumerate() {
                let img = action.mul_vec(v);
                let coords = solve_dense(&bmat, &img)
                    .expect("sp action must preserve the kernel subspace");
                for (r, x) in coords.into_iter().enumerate() {
                    *rep.at_mut(r, c) = x;
                }
            }
            f_act.insert((i, j), rep);
        }
    }

    let mut rep = SpRepresentation {
        dim,
        f_act,
        label: Vec::new(),
        name: format!("R(pi_{n})"),
    };
    rep.label = highest_weights(alg, &rep);
    rep
}

/// The symplectic part of `ad u + u (x) chi` for an arbitrary coordinate
/// vector `u`, extended linearly from the stored dual-basis images.
pub fn adsp_matrix(alg: &Algebra, u: &[Rat]) -> Mat {
    let nv = alg.dim();
    // u = sum_k omega(u ^ d^k)... express u over the dual basis: u = sum_k c_k d^k
    // with c_k = omega(u ^ d_k) since omega(d^k ^ d_j) = delta.
    let mut out = Mat::zeros(nv, nv);
    for k in 0..nv {
        let mut ek = vec![rzero(); nv];
        ek[k] = rone();
        let c = alg.spec.omega_of(u, &ek);
        if !c.is_zero() {
            out = out.add(&alg.derived.ad_sp[k].scale(&c));
        }
    }
    out
}

/// The adjoint representation of `sp(d)` on itself in the `f^{ij}` basis.
pub fn adjoint_rep(alg: &Algebra) -> SpRepresentation {
    let nv = alg.dim();
    let pairs: Vec<(usize, usize)> = (0..nv)
        .flat_map(|i| (i..nv).map(move |j| (i, j)))
        .collect();
    let dim = pairs.len();
    let mut f_act = BTreeMap::new();
    for &(i, j) in &pairs {
        let fij = f_matrix(alg, i, j);
        let mut rep = Mat::zeros(dim, dim);
        for (c, &(k, l)) in pairs.iter().enumerate() {
            let br = fij.commutator(&f_matrix(alg, k, l));
            let coords = sp_in_f_basis(alg, &br);
            for ((a, b), v) in coords {
                let r = pairs.iter().position(|&p| p == (a, b)).unwrap();
                *rep.at_mut(r, c) = v;
            }
        }
        f_act.insert((i, j), rep);
    }
    let mut rep = SpRepresentation {
        dim,
        f_act,
        label: Vec::new(),
        name: "R(2pi_1)".to_string(),
    };
    rep.label = highest_weights(alg, &rep);
    rep
}

/// A symplectic basis `u_1..u_N, v_1..v_N` with `omega(u_i ^ v_i) = 1` and
/// all other pairings zero, as the columns of the returned matrix.
pub fn symplectic_basis(alg: &Algebra) -> Mat {
    let nv = alg.dim();
    let nn = alg.half_dim();
    let om = |u: &[Rat], v: &[Rat]| alg.spec.omega_of(u, v);
    let mut pool: Vec<Vec<Rat>> = (0..nv)
        .map(|i| {
            let mut e = vec![rzero(); nv];
            e[i] = rone();
            e
        })
        .collect();
    let mut us: Vec<Vec<Rat>> = Vec::new();
    let mut vs: Vec<Vec<Rat>> = Vec::new();
    while us.len() < nn {
        let u = pool[0].clone();
        let vpos = (1..pool.len())
            .find(|&p| !om(&u, &pool[p]).is_zero())
            .expect("omega nondegenerate on the complement");
        let pairing = om(&u, &pool[vpos]);
        let v: Vec<Rat> = pool[vpos].iter().map(|x| x / &pairing).collect();
        // project the rest onto the symplectic complement of span{u, v}
        let mut next_pool = Vec::new();
        for (p, w) in pool.iter().enumerate() {
            if p == 0 || p == vpos {
                continue;
            }
            let a = om(&v, w);
            let b = om(&u, w);
            let mut w2 = w.clone();
            for t in 0..nv {
                w2[t] = &w2[t] + &a * &u[t] - &b * &v[t];
            }
            if w2.iter().any(|x| !x.is_zero()) {
                next_pool.push(w2);
            }
        }
        us.push(u);
        vs.push(v);
        pool = next_pool;
    }
    let mut p = Mat::zeros(nv, nv);
    for (c, u) in us.iter().enumerate() {
        for r in 0..nv {
            *p.at_mut(r, c) = u[r].clone();
        }
    }
    for (c, v) in vs.iter().enumerate() {
        for r in 0..nv {
            *p.at_mut(r, nn + c) = v[r].clone();
        }
    }
    p
}

/// Cartan generators and positive-root raising operators of `sp(d)` in the
/// original basis, built from an internal symplectic basis.
pub fn cartan_and_raisers(alg: &Algebra) -> (Vec<Mat>, Vec<Mat>) {
    let nv = alg.dim();
    let nn = alg.half_dim();
    let p = symplectic_basis(alg);
    let pinv = p.inverse().expect("basis change invertible");
    let conj = |m: Mat| p.mul(&m).mul(&pinv);
    let unit = |r: usize, c: usize| {
        let mut m = Mat::zeros(nv, nv);
        *m.at_mut(r, c) = rone();
        m
    };
    let mut cartans = Vec::new();
    for t in 0..nn {
        cartans.push(conj(unit(t, t).sub(&unit(nn + t, nn + t))));
    }
    let mut raisers = Vec::new();
    for i in 0..nn {
        for j in (i + 1)..nn {
            raisers.push(conj(unit(i, j).sub(&unit(nn + j, nn + i))));
            raisers.push(conj(unit(i, nn + j).add(&unit(j, nn + i))));
        }
        raisers.push(conj(unit(i, nn + i)));
    }
    (cartans, raisers)
}

fn integer_eigenvalue_bound(m: &Mat) -> i64 {
    let mut best = rzero();
    for r in 0..m.rows {
        let mut s = rzero();
        for c in 0..m.cols {
            s += m.at(r, c).abs();
        }
        if s > best {
            best = s;
        }
    }
    (best.numer().to_i64().unwrap_or(i64::MAX) / best.denom().to_i64().unwrap_or(1).max(1)) + 1
}

/// Joint integer eigenspace decomposition of commuting operators restricted
/// to a subspace; returns `(weight, basis)` pairs sorted by weight.
pub fn weight_spaces(ops: &[Mat], space: Vec<Vec<Rat>>) -> Vec<(Vec<i64>, Vec<Vec<Rat>>)> {
    let mut layers: Vec<(Vec<i64>, Vec<Vec<Rat>>)> = vec![(vec![], space)];
    for op in ops {
        let bound = integer_eigenvalue_bound(op);
        let mut next = Vec::new();
        for (weights, basis) in layers {
            if basis.is_empty() {
                continue;
            }
            let dim = basis[0].len();
            let mut bmat = Mat::zeros(dim, basis.len());
            for (c, v) in basis.iter().enumerate() {
                for (r, x) in v.iter().enumerate() {
                    *bmat.at_mut(r, c) = x.clone();
                }
            }
            // restrict op to the subspace
            let mut restricted = Mat::zeros(basis.len(), basis.len());
            for (c, v) in basis.iter().enumerate() {
                let img = op.mul_vec(v);
                let coords = solve_dense(&bmat, &img)
                    .expect("operator must preserve the weight layer");
                for (r, x) in coords.into_iter().enumerate() {
                    *restricted.at_mut(r, c) = x;
                }
            }
            let mut found = 0;
            for ev in -bound..=bound {
                let mut shifted = restricted.clone();
                for t in 0..shifted.rows {
                    *shifted.at_mut(t, t) -= crate::rat::rint(ev);
                }
                let rows: Vec<_> = (0..shifted.rows)
                    .map(|r| sparse_from_dense(shifted.row(r)))
                    .collect();
                let ker = kernel_basis(rows, shifted.cols);
                if ker.is_empty() {
                    continue;
                }
                found += ker.len();
                let sub: Vec<Vec<Rat>> = ker
                    .into_iter()
                    .map(|coords| {
                        let mut v = vec![rzero(); dim];
                        for (i, c) in coords.iter().enumerate() {
                            if !c.is_zero() {
                                for t in 0..dim {
                                    v[t] += c * &basis[i][t];
                                }
                            }
                        }
                        v
                    })
                    .collect();
                let mut w = weights.clone();
                w.push(ev);
                next.push((w, sub));
            }
            assert_eq!(
                found,
                basis.len(),
                "non-integral or non-diagonalizable weight operator"
            );
        }
        layers = next;
    }
    layers.sort_by(|a, b| b.0.cmp(&a.0));
    layers
}

/// Highest weights (with multiplicities) of an `sp(d)`-module given by its
/// `f^{ij}` matrices: the Cartan spectrum on the joint kernel of the raising
/// operators.
pub fn highest_weights(alg: &Algebra, rep: &SpRepresentation) -> Vec<(Vec<i64>, usize)> {
    let (cartans, raisers) = cartan_and_raisers(alg);
    let mut rows = Vec::new();
    for r in &raisers {
        let m = rep.act_sp(alg, r);
        for row in 0..m.rows {
            let sv = sparse_from_dense(m.row(row));
            if !sv.is_empty() {
                rows.push(sv);
            }
        }
    }
    let joint = kernel_basis(rows, rep.dim);
    let cartan_reps: Vec<Mat> = cartans.iter().map(|h| rep.act_sp(alg, h)).collect();
    let spaces = weight_spaces(&cartan_reps, joint);
    spaces
        .into_iter()
        .map(|(w, basis)| (w, basis.len()))
        .collect()
}

/// The fundamental weight `pi_n` as a Cartan eigenvalue tuple.
pub fn fundamental_weight(half_dim: usize, n: usize) -> Vec<i64> {
    (0..half_dim).map(|t| if t < n { 1 } else { 0 }).collect()
}
