//! The input Lie algebra `d` with trace form `chi` and conformally symplectic
//! form `omega`, its validation, and all derived invariants.

use crate::linalg::{kernel_basis, solve_dense, sparse_from_dense, Mat};
use crate::rat::{fmt_rat, rat, rzero, Rat};
use num_traits::Zero;

/// Raw input data: a `2N`-dimensional Lie algebra with structure constants
/// `c[i][j][k]` (so `[d_i, d_j] = sum_k c[i][j][k] d_k`), a covector `chi`,
/// and a skew bilinear form `omega` with entries `omega(d_i ^ d_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebraSpec {
    pub dim: usize,
    pub c: Vec<Vec<Vec<Rat>>>,
    pub chi: Vec<Rat>,
    pub omega: Mat,
}

impl LieAlgebraSpec {
    pub fn abelian(dim: usize, chi: Vec<Rat>, omega: Mat) -> Self {
        let c = vec![vec![vec![rzero(); dim]; dim]; dim];
        LieAlgebraSpec { dim, c, chi, omega }
    }

    /// `[u, v]` for coordinate vectors.
    pub fn bracket_vec(&self, u: &[Rat], v: &[Rat]) -> Vec<Rat> {
        let mut out = vec![rzero(); self.dim];
        for i in 0..self.dim {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                if v[j].is_zero() {
                    continue;
                }
                let f = &u[i] * &v[j];
                for k in 0..self.dim {
                    if !self.c[i][j][k].is_zero() {
                        out[k] += &f * &self.c[i][j][k];
                    }
                }
            }
        }
        out
    }

    /// Matrix of `ad u` in the chosen basis (columns are images of basis vectors).
    pub fn ad_matrix(&self, u: &[Rat]) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            let mut ej = vec![rzero(); self.dim];
            ej[j] = rat(1, 1);
            let col = self.bracket_vec(u, &ej);
            for k in 0..self.dim {
                *m.at_mut(k, j) = col[k].clone();
            }
        }
        m
    }

    pub fn chi_of(&self, u: &[Rat]) -> Rat {
        let mut s = rzero();
        for i in 0..self.dim {
            if !u[i].is_zero() {
                s += &u[i] * &self.chi[i];
            }
        }
        s
    }

    /// `omega(u ^ v)`.
    pub fn omega_of(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let mut s = rzero();
        for a in 0..self.dim {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..self.dim {
                if !v[b].is_zero() && !self.omega.at(a, b).is_zero() {
                    s += &u[a] * &v[b] * self.omega.at(a, b);
                }
            }
        }
        s
    }
}

/// One named invariant check with an optional first-failure witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

/// Outcome of validating a spec or module: one entry per invariant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn push_ok(&mut self, name: &str) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass: true,
            witness: None,
        });
    }

    pub fn push_fail(&mut self, name: &str, witness: String) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            pass: false,
            witness: Some(witness),
        });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// Check every admissibility invariant of the spec. Each check records its
/// first failing witness; the spec is admissible iff all checks pass.
pub fn validate_spec(spec: &LieAlgebraSpec) -> ValidationReport {
    let n = spec.dim;
    let mut rep = ValidationReport::default();

    if n == 0 || !n.is_multiple_of(2) {
        rep.push_fail("dimension even and positive", format!("dim = {n}"));
        return rep;
    }
    rep.push_ok("dimension even and positive");

    let mut shape_ok = spec.chi.len() == n && spec.omega.rows == n && spec.omega.cols == n;
    shape_ok &= spec.c.len() == n && spec.c.iter().all(|ci| ci.len() == n && ci.iter().all(|cij| cij.len() == n));
    if !shape_ok {
        rep.push_fail("field shapes", "chi / omega / brackets sized to dim".to_string());
        return rep;
    }
    rep.push_ok("field shapes");

    // antisymmetry of the bracket
    let mut anti = None;
    'anti: for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if &spec.c[i][j][k] + &spec.c[j][i][k] != rzero() {
                    anti = Some(format!("c[{}][{}][{}] + c[{}][{}][{}] != 0", i + 1, j + 1, k + 1, j + 1, i + 1, k + 1));
                    break 'anti;
                }
            }
        }
    }
    match anti {
        None => rep.push_ok("bracket antisymmetry"),
        Some(w) => rep.push_fail("bracket antisymmetry", w),
    }

    // Jacobi identity on basis triples
    let mut jac = None;
    'jac: for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1).max(i + 1)..n {
                let mut ei = vec![rzero(); n];
                ei[i] = rat(1, 1);
                let mut ej = vec![rzero(); n];
                ej[j] = rat(1, 1);
                let mut ek = vec![rzero(); n];
                ek[k] = rat(1, 1);
                let t1 = spec.bracket_vec(&ei, &spec.bracket_vec(&ej, &ek));
                let t2 = spec.bracket_vec(&ej, &spec.bracket_vec(&ek, &ei));
                let t3 = spec.bracket_vec(&ek, &spec.bracket_vec(&ei, &ej));
                for l in 0..n {
                    if &(&t1[l] + &t2[l]) + &t3[l] != rzero() {
                        jac = Some(format!("triple ({},{},{})", i + 1, j + 1, k + 1));
                        break 'jac;
                    }
                }
            }
        }
    }
    match jac {
        None => rep.push_ok("Jacobi identity"),
        Some(w) => rep.push_fail("Jacobi identity", w),
    }

    // trace form: chi([d_i, d_j]) = 0
    let mut tr = None;
    'tr: for i in 0..n {
        for j in 0..n {
            let mut s = rzero();
            for k in 0..n {
                s += &spec.c[i][j][k] * &spec.chi[k];
            }
            if !s.is_zero() {
                tr = Some(format!("chi([d_{},d_{}]) = {}", i + 1, j + 1, fmt_rat(&s)));
                break 'tr;
            }
        }
    }
    match tr {
        None => rep.push_ok("trace form"),
        Some(w) => rep.push_fail("trace form", w),
    }

    // omega skew
    let mut skew = None;
    'skew: for i in 0..n {
        for j in 0..n {
            if (spec.omega.at(i, j) + spec.omega.at(j, i)) != rzero() {
                skew = Some(format!("omega[{}][{}] + omega[{}][{}] != 0", i + 1, j + 1, j + 1, i + 1));
                break 'skew;
            }
        }
    }
    match skew {
        None => rep.push_ok("omega skew"),
        Some(w) => rep.push_fail("omega skew", w),
    }

    // omega invertible
    match spec.omega.inverse() {
        Some(_) => rep.push_ok("omega nondegenerate"),
        None => rep.push_fail("omega nondegenerate", "omega is singular".to_string()),
    }

    // compatibility: (omega([a1,a2] ^ a3) - chi(a1) omega(a2 ^ a3)) + cyclic = 0
    let mut comp = None;
    'comp: for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let term = |a: usize, b: usize, c: usize| -> Rat {
                    let mut s = rzero();
                    for l in 0..n {
                        s += &spec.c[a][b][l] * spec.omega.at(l, c);
                    }
                    s - &spec.chi[a] * spec.omega.at(b, c)
                };
                let total = term(i, j, k) + term(j, k, i) + term(k, i, j);
                if !total.is_zero() {
                    comp = Some(format!("triple ({},{},{}): residue {}", i + 1, j + 1, k + 1, fmt_rat(&total)));
                    break 'comp;
                }
            }
        }
    }
    match comp {
        None => rep.push_ok("omega-chi compatibility"),
        Some(w) => rep.push_fail("omega-chi compatibility", w),
    }

    rep
}

/// Everything derived from an admissible spec: the inverse form, dual basis,
/// the distinguished vector `s` and element `rho`, the trace form `phi`, and
/// the symplectic parts of `ad` of the dual basis vectors.
#[derive(Clone, Debug)]
pub struct DerivedData {
    /// `r[i][j]` with `sum_k r[i][k] omega[k][j] = delta_ij`.
    pub r: Mat,
    /// Dual basis coordinates: row `i` is `d^i = sum_k r[i][k] d_k`.
    pub dual_basis: Vec<Vec<Rat>>,
    /// `s` with `chi(a) = omega(s ^ a)`.
    pub s: Vec<Rat>,
    /// `rho = (1/2) sum_i [d_i, d^i]`.
    pub rho: Vec<Rat>,
    /// `phi = omega((rho - s) ^ .)` as a covector.
    pub phi: Vec<Rat>,
    /// `ad_sp[k]` is the symplectic part of `ad d^k + d^k (x) chi`.
    pub ad_sp: Vec<Mat>,
}

/// Compute all derived invariants. Call only on validated specs.
pub fn derive_invariants(spec: &LieAlgebraSpec) -> DerivedData {
    let n = spec.dim;
    let r = spec
        .omega
        .inverse()
        .expect("omega must be invertible (validate first)");
    let dual_basis: Vec<Vec<Rat>> = (0..n).map(|i| r.row(i).to_vec()).collect();

    let mut s = vec![rzero(); n];
    for i in 0..n {
        if spec.chi[i].is_zero() {
            continue;
        }
        for k in 0..n {
            s[k] += &spec.chi[i] * &dual_basis[i][k];
        }
    }

    let mut rho = vec![rzero(); n];
    for i in 0..n {
        let mut ei = vec![rzero(); n];
        ei[i] = rat(1, 1);
        let br = spec.bracket_vec(&ei, &dual_basis[i]);
        for k in 0..n {
            rho[k] += rat(1, 2) * &br[k];
        }
    }

    let mut diff = vec![rzero(); n];
    for k in 0..n {
        diff[k] = &rho[k] - &s[k];
    }
    let mut phi = vec![rzero(); n];
    for k in 0..n {
        let mut ek = vec![rzero(); n];
        ek[k] = rat(1, 1);
        phi[k] = spec.omega_of(&diff, &ek);
    }

    let mut ad_sp = Vec::with_capacity(n);
    for k in 0..n {
        let dk = &dual_basis[k];
        let mut m = spec.ad_matrix(dk);
        // + d^k (x) chi
        for b in 0..n {
            if spec.chi[b].is_zero() {
                continue;
            }
            for a in 0..n {
                *m.at_mut(a, b) += &dk[a] * &spec.chi[b];
            }
        }
        // + (1/2) sum_{ij} c_{ij}^k e^{ij}, where e^{ij} has column j equal to d^i
        for i in 0..n {
            for j in 0..n {
                if spec.c[i][j][k].is_zero() {
                    continue;
                }
                let f = rat(1, 2) * &spec.c[i][j][k];
                for a in 0..n {
                    *m.at_mut(a, j) += &f * &dual_basis[i][a];
                }
            }
        }
        // - (1/2) chi(d^k) I
        let chidk = spec.chi_of(dk);
        if !chidk.is_zero() {
            let half = rat(1, 2) * chidk;
            for a in 0..n {
                *m.at_mut(a, a) -= &half;
            }
        }
        ad_sp.push(m);
    }

    DerivedData {
        r,
        dual_basis,
        s,
        rho,
        phi,
        ad_sp,
    }
}

/// An admissible algebra with its derived data; the shared context for all
/// downstream constructions.
#[derive(Clone, Debug)]
pub struct Algebra {
    pub spec: LieAlgebraSpec,
    pub derived: DerivedData,
}

impl Algebra {
    /// Validate and enrich. Returns the failing report on inadmissible input.
    pub fn new(spec: LieAlgebraSpec) -> Result<Algebra, ValidationReport> {
        let rep = validate_spec(&spec);
        if !rep.all_pass() {
            return Err(rep);
        }
        let derived = derive_invariants(&spec);
        Ok(Algebra { spec, derived })
    }

    pub fn dim(&self) -> usize {
        self.spec.dim
    }

    pub fn half_dim(&self) -> usize {
        self.spec.dim / 2
    }

    pub fn chi_is_zero(&self) -> bool {
        self.spec.chi.iter().all(|x| x.is_zero())
    }

    /// `chi(d^k)` for the dual basis vector.
    pub fn chi_dual(&self, k: usize) -> Rat {
        self.spec.chi_of(&self.derived.dual_basis[k])
    }
}

/// Outcome of looking for a potential `zeta` with `-zeta([d_i,d_j]) = omega_ij`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Splitting {
    /// A solution; `unique` is false when the linear system had a kernel, in
    /// which case the lexicographically minimal pivot solution is returned
    /// (free coefficients set to zero) and flagged.
    Found { zeta: Vec<Rat>, unique: bool },
    /// `omega` is not exact; nonzero central actions are inadmissible.
    NotExact,
    /// The splitting construction requires `chi = 0`.
    ChiNonzero,
}

/// Solve `-zeta([d_i, d_j]) = omega_ij` for a covector `zeta`.
pub fn solve_frobenius_splitting(alg: &Algebra) -> Splitting {
    if !alg.chi_is_zero() {
        return Splitting::ChiNonzero;
    }
    let n = alg.dim();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut row = vec![rzero(); n];
            for k in 0..n {
                row[k] = -alg.spec.c[i][j][k].clone();
            }
            rows.push(row);
            rhs.push(alg.spec.omega.at(i, j).clone());
        }
    }
    let m = Mat::from_rows(rows.clone());
    let Some(zeta) = solve_dense(&m, &rhs) else {
        return Splitting::NotExact;
    };
    let ker = kernel_basis(rows.iter().map(|r| sparse_from_dense(r)), n);
    Splitting::Found {
        zeta,
        unique: ker.is_empty(),
    }
}

/// A finite-dimensional module over the central extension `d' = d + k c`:
/// matrices for the lifted basis vectors and the scalar action of `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DPrimeModule {
    pub dim: usize,
    /// `act[i]` is the action of the lift of `d_i`.
    pub act: Vec<Mat>,
    /// Scalar action of the central element.
    pub lambda: Rat,
}

impl DPrimeModule {
    /// Trivial one-dimensional module.
    pub fn trivial(alg: &Algebra) -> Self {
        DPrimeModule {
            dim: 1,
            act: vec![Mat::zeros(1, 1); alg.dim()],
            lambda: rzero(),
        }
    }

    /// Lift a plain `d`-module through the projection (central element acts by 0).
    pub fn from_d_module(act: Vec<Mat>) -> Self {
        let dim = if act.is_empty() { 1 } else { act[0].rows };
        DPrimeModule {
            dim,
            act,
            lambda: rzero(),
        }
    }

    /// Module built on the splitting: `act_i = rho(d_i) + zeta(d_i) lambda`.
    pub fn on_splitting(rho: Vec<Mat>, zeta: &[Rat], lambda: Rat) -> Self {
        let dim = if rho.is_empty() { 1 } else { rho[0].rows };
        let mut act = rho;
        for (i, m) in act.iter_mut().enumerate() {
            if !zeta[i].is_zero() && !lambda.is_zero() {
                let s = &zeta[i] * &lambda;
                for a in 0..dim {
                    *m.at_mut(a, a) += &s;
                }
            }
        }
        DPrimeModule { dim, act, lambda }
    }

    /// Tensor with the one-dimensional module of a trace form: shifts each
    /// generator action by `psi(d_i)`.
    pub fn shift_by_traceform(&self, psi: &[Rat]) -> Self {
        let mut out = self.clone();
        for (i, m) in out.act.iter_mut().enumerate() {
            if psi[i].is_zero() {
                continue;
            }
            for a in 0..self.dim {
                *m.at_mut(a, a) += &psi[i];
            }
        }
        out
    }

    /// Action of a coordinate vector `u in d'` lifted from `d`.
    pub fn act_vec(&self, u: &[Rat]) -> Mat {
        let mut m = Mat::zeros(self.dim, self.dim);
        for (i, mi) in self.act.iter().enumerate() {
            if u[i].is_zero() {
                continue;
            }
            m = m.add(&mi.scale(&u[i]));
        }
        m
    }
}

/// Check the abelian-extension bracket relations of a `d'`-module.
pub fn validate_dprime_module(alg: &Algebra, module: &DPrimeModule) -> ValidationReport {
    let n = alg.dim();
    let mut rep = ValidationReport::default();

    if module.act.len() != n || module.act.iter().any(|m| m.rows != module.dim || m.cols != module.dim) {
        rep.push_fail("module shapes", "need one dim x dim matrix per basis vector".to_string());
        return rep;
    }
    rep.push_ok("module shapes");

    if !module.lambda.is_zero() && !alg.chi_is_zero() {
        rep.push_fail(
            "central compatibility",
            "lambda != 0 requires chi = 0".to_string(),
        );
    } else {
        rep.push_ok("central compatibility");
    }

    let mut bad = None;
    'outer: for i in 0..n {
        for j in (i + 1)..n {
            let lhs = module.act[i].commutator(&module.act[j]);
            let mut rhs = Mat::zeros(module.dim, module.dim);
            for k in 0..n {
                if !alg.spec.c[i][j][k].is_zero() {
                    rhs = rhs.add(&module.act[k].scale(&alg.spec.c[i][j][k]));
                }
            }
            let central = alg.spec.omega.at(i, j) * &module.lambda;
            if !central.is_zero() {
                for a in 0..module.dim {
                    *rhs.at_mut(a, a) += &central;
                }
            }
            if lhs != rhs {
                bad = Some(format!("bracket relation fails at pair ({},{})", i + 1, j + 1));
                break 'outer;
            }
        }
    }
    match bad {
        None => rep.push_ok("bracket relations"),
        Some(w) => rep.push_fail("bracket relations", w),
    }

    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::battery;
    use crate::rat::rint;

    #[test]
    fn abelian_2d_all_pass() {
        let alg = battery::a2();
        assert!(validate_spec(&alg.spec).all_pass());
    }

    #[test]
    fn frobenius_with_trace_chi_passes() {
        // [d1,d2] = d1, chi = x^2: chi([d1,d2]) = chi(d1) = 0.
        let alg = battery::x2();
        assert!(validate_spec(&alg.spec).all_pass());
    }

    #[test]
    fn bad_trace_form_fails_with_witness() {
        // chi = x^1 on the nonabelian algebra: chi([d1,d2]) = 1.
        let mut spec = battery::f2().spec;
        spec.chi = vec![rint(1), rint(0)];
        let rep = validate_spec(&spec);
        assert!(!rep.all_pass());
        let fail = rep.first_failure().unwrap();
        assert_eq!(fail.name, "trace form");
    }

    #[test]
    fn non_jacobi_constants_fail() {
        // dim 4 with [d1,d2]=d3, [d1,d3]=-d2, [d2,d3]=d2 breaks Jacobi.
        let mut spec = LieAlgebraSpec::abelian(4, vec![rzero(); 4], battery::standard_omega(4));
        let set = |spec: &mut LieAlgebraSpec, i: usize, j: usize, k: usize, v: i64| {
            spec.c[i][j][k] = rint(v);
            spec.c[j][i][k] = rint(-v);
        };
        set(&mut spec, 0, 1, 2, 1);
        set(&mut spec, 0, 2, 1, -1);
        set(&mut spec, 1, 2, 1, 1);
        let rep = validate_spec(&spec);
        assert!(!rep.all_pass());
        assert!(rep.checks.iter().any(|c| c.name == "Jacobi identity" && !c.pass));
    }

    #[test]
    fn derived_r_is_inverse_of_omega() {
        let alg = battery::a2();
        let d = &alg.derived;
        assert_eq!(*d.r.at(0, 1), rint(-1));
        assert_eq!(*d.r.at(1, 0), rint(1));
        let prod = d.r.mul(&alg.spec.omega);
        assert_eq!(prod, Mat::identity(2));
        // d^1 = -d_2, d^2 = d_1
        assert_eq!(d.dual_basis[0], vec![rint(0), rint(-1)]);
        assert_eq!(d.dual_basis[1], vec![rint(1), rint(0)]);
    }

    #[test]
    fn abelian_derived_invariants() {
        let mut spec = battery::a2().spec;
        spec.chi = vec![rzero(), rzero()];
        let alg = Algebra::new(spec).unwrap();
        assert!(alg.derived.rho.iter().all(|x| x.is_zero()));
        assert!(alg.derived.phi.iter().all(|x| x.is_zero()));
        for m in &alg.derived.ad_sp {
            assert!(m.is_zero());
        }
    }

    #[test]
    fn phi_equals_minus_n_chi_plus_trace_ad() {
        for alg in [battery::f2(), battery::x2(), battery::f4()] {
            let nn = alg.half_dim() as i64;
            for k in 0..alg.dim() {
                let mut ek = vec![rzero(); alg.dim()];
                ek[k] = rint(1);
                let tr = alg.spec.ad_matrix(&ek).trace();
                let expected = rint(-nn) * &alg.spec.chi[k] + tr;
                assert_eq!(alg.derived.phi[k], expected, "phi mismatch at {k}");
            }
        }
    }

    #[test]
    fn ad_sp_lands_in_sp() {
        for alg in [battery::f2(), battery::x2(), battery::a4(), battery::f4()] {
            for m in &alg.derived.ad_sp {
                // omega(A a ^ b) + omega(a ^ A b) = 0  <=>  A^T W + W A = 0
                let w = &alg.spec.omega;
                let lhs = m.transpose().mul(w).add(&w.mul(m));
                assert!(lhs.is_zero());
            }
        }
    }

    #[test]
    fn splitting_on_frobenius_algebra() {
        let alg = battery::f2();
        match solve_frobenius_splitting(&alg) {
            Splitting::Found { zeta, unique } => {
                assert_eq!(zeta, vec![rint(-1), rint(0)]);
                assert!(!unique); // zeta(d_2) is unconstrained in 2 dimensions
            }
            other => panic!("expected solution, got {other:?}"),
        }
    }

    #[test]
    fn splitting_absent_on_abelian() {
        let alg = battery::a2();
        assert_eq!(solve_frobenius_splitting(&alg), Splitting::NotExact);
    }

    #[test]
    fn splitting_blockwise_on_f4() {
        let alg = battery::f4();
        match solve_frobenius_splitting(&alg) {
            Splitting::Found { zeta, .. } => {
                assert_eq!(zeta, vec![rint(-1), rint(0), rint(-1), rint(0)]);
            }
            other => panic!("expected solution, got {other:?}"),
        }
    }

    #[test]
    fn dprime_trivial_lift_passes() {
        let alg = battery::f2();
        let m = DPrimeModule::trivial(&alg);
        assert!(validate_dprime_module(&alg, &m).all_pass());
    }

    #[test]
    fn dprime_scalar_lambda_needs_zeta_correction() {
        let alg = battery::f2();
        // act = 0 with lambda = 5 violates the bracket relation ...
        let bad = DPrimeModule {
            dim: 1,
            act: vec![Mat::zeros(1, 1); 2],
            lambda: rint(5),
        };
        assert!(!validate_dprime_module(&alg, &bad).all_pass());
        // ... but the splitting-corrected action passes: act_1 = -5, act_2 = 0.
        let Splitting::Found { zeta, .. } = solve_frobenius_splitting(&alg) else {
            panic!("f2 is Frobenius");
        };
        let good = DPrimeModule::on_splitting(vec![Mat::zeros(1, 1); 2], &zeta, rint(5));
        assert_eq!(*good.act[0].at(0, 0), rint(-5));
        assert_eq!(*good.act[1].at(0, 0), rint(0));
        assert!(validate_dprime_module(&alg, &good).all_pass());
    }

    #[test]
    fn permuted_basis_yields_conjugated_data() {
        // swap the two basis vectors of f2 and compare conjugated invariants
        let alg = battery::f2();
        let mut spec = LieAlgebraSpec::abelian(2, vec![rzero(); 2], Mat::zeros(2, 2));
        let p = [1usize, 0usize]; // new index -> old index
        for i in 0..2 {
            for j in 0..2 {
                *spec.omega.at_mut(i, j) = alg.spec.omega.at(p[i], p[j]).clone();
                for k in 0..2 {
                    spec.c[i][j][k] = alg.spec.c[p[i]][p[j]][p[k]].clone();
                }
            }
            spec.chi[i] = alg.spec.chi[p[i]].clone();
        }
        let permuted = Algebra::new(spec).unwrap();
        // r conjugates: r'[i][j] = r[p(i)][p(j)]
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(permuted.derived.r.at(i, j), alg.derived.r.at(p[i], p[j]));
            }
        }
        for k in 0..2 {
            assert_eq!(permuted.derived.phi[k], alg.derived.phi[p[k]]);
        }
    }
}
