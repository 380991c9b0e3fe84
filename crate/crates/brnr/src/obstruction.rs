//! The obstruction pipeline. From the commutator map gamma of a
//! presentation it computes, inside the exterior algebra of U and U*:
//!
//! * K2 = image of gamma*, and K3 = K2 ^ U*;
//! * S2 and S3, their annihilators under the degree-2 and degree-3 pairing;
//! * S2_dec and S3_dec, the spans of the elements of S2 and S3 that factor
//!   as u' ^ u (found by a sweep over the projective points of U: w ^ u = 0
//!   detects a factor u);
//! * K2_max and K3_max, the annihilators of the decomposable spans.
//!
//! dim K2_max/K2 is the F_p-dimension of the unramified Brauer group of
//! the associated quotient field, and dim K3_max/K3 is a lower bound for
//! the degree-three unramified cohomology. Two brute-force oracles,
//! independent of the sweep, re-derive the decomposable spans by direct
//! enumeration for cross-checking.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{binomial, subspace_multivectors, MultiVector, Side};
use crate::field::PrimeField;
use crate::group::{
    build_gamma, check_center_minimal, check_commutator_full, k2_space, CentralExtensionSpec,
    GammaMap,
};
use crate::linalg::{annihilator_std, Matrix, Subspace};
use crate::render;

/// K3 = K2 ^ U*: the span of f ^ u_j* over a basis f of K2 and all j.
pub fn k3_space(k2: &Subspace, n: usize) -> Result<Subspace> {
    let field = k2.field();
    let mut vectors = Vec::with_capacity(k2.dim() * n);
    for f in subspace_multivectors(k2, n, 2, Side::Dual)? {
        for j in 1..=n {
            let e = MultiVector::basis_term(field, n, Side::Dual, &[j])?;
            vectors.push(f.wedge(&e)?.coords().to_vec());
        }
    }
    Subspace::span(field, binomial(n, 3), &vectors)
}

/// S = the annihilator of K on the primal side (the pairing gram is the
/// identity, so this is a kernel computation).
pub fn s_space(k: &Subspace) -> Subspace {
    annihilator_std(k)
}

/// K_max = the annihilator of S_dec back on the dual side.
pub fn kmax_space(s_dec: &Subspace) -> Subspace {
    annihilator_std(s_dec)
}

/// Projective points of F_p^n, one representative each with the first
/// nonzero coordinate equal to 1, enumerated by growing support size so
/// that sparse points come first (the accumulating sweep usually
/// terminates long before dense points would be reached).
pub(crate) struct ProjectivePoints {
    field: PrimeField,
    n: usize,
    size: usize,
    support: Vec<usize>,
    odometer: Vec<u32>, // values in 1..p for support positions after the first
    done: bool,
}

impl ProjectivePoints {
    pub fn new(field: PrimeField, n: usize) -> Self {
        ProjectivePoints {
            field,
            n,
            size: 1,
            support: if n == 0 { vec![] } else { vec![0] },
            odometer: vec![],
            done: n == 0,
        }
    }

    fn advance_support(&mut self) -> bool {
        // next lexicographic size-subset of {0, .., n-1}
        let k = self.size;
        let s = &mut self.support;
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if s[i] < self.n - (k - i) {
                s[i] += 1;
                for j in i + 1..k {
                    s[j] = s[j - 1] + 1;
                }
                return true;
            }
        }
    }
}

impl Iterator for ProjectivePoints {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let mut point = vec![0u32; self.n];
        point[self.support[0]] = 1;
        for (slot, &v) in self.odometer.iter().enumerate() {
            point[self.support[slot + 1]] = v;
        }

        // advance: odometer first, then support set, then support size
        let p = self.field.p();
        let mut slot = 0;
        loop {
            if slot == self.odometer.len() {
                if !self.advance_support() {
                    self.size += 1;
                    if self.size > self.n {
                        self.done = true;
                    } else {
                        self.support = (0..self.size).collect();
                        self.odometer = vec![1; self.size - 1];
                    }
                }
                break;
            }
            if self.odometer[slot] + 1 < p {
                self.odometer[slot] += 1;
                break;
            }
            self.odometer[slot] = 1;
            slot += 1;
        }
        Some(point)
    }
}

/// The span of all elements of `s` (inside wedge^d of an n-dimensional
/// space) that factor as u' ^ u with u in U. For each projective point
/// [u], the elements of `s` killed by wedging with u are exactly those
/// with a factor u; their union over all points spans the result. The
/// sweep stops early once the accumulated span reaches dim s.
pub fn decomposable_span(s: &Subspace, n: usize, d: usize) -> Result<Subspace> {
    if d < 1 {
        return Err(Error::validation("degree must be at least 1"));
    }
    if s.ambient_dim() != binomial(n, d) {
        return Err(Error::validation("subspace does not live in the expected wedge power"));
    }
    let field = s.field();
    let mut acc = Subspace::zero(field, s.ambient_dim());
    // covers d > n as well: the ambient space is zero then
    if s.dim() == 0 {
        return Ok(acc);
    }
    let basis = subspace_multivectors(s, n, d, Side::Primal)?;
    let r = basis.len();
    for point in ProjectivePoints::new(field, n) {
        let u = MultiVector::from_coords(field, n, 1, Side::Primal, point)?;
        let images: Vec<MultiVector> =
            basis.iter().map(|b| b.wedge(&u)).collect::<Result<_>>()?;
        // Coefficients x with (sum_k x_k basis_k) ^ u = 0 are the kernel of
        // the matrix whose k-th column is images[k]. Row-reduce that matrix
        // incrementally and bail out as soon as it reaches full rank, which
        // is the common case (the point contributes nothing).
        for coeffs in column_kernel(field, &images, r) {
            let v = s.basis().left_apply(&coeffs)?;
            acc.insert(&v)?;
        }
        if acc.dim() == s.dim() {
            break;
        }
    }
    Ok(acc)
}

/// Kernel coefficient vectors of the matrix whose columns are the given
/// multivectors, returned empty as soon as full column rank is detected.
fn column_kernel(field: PrimeField, columns: &[MultiVector], r: usize) -> Vec<Vec<u32>> {
    debug_assert_eq!(columns.len(), r);
    let nrows = columns.first().map_or(0, |c| c.coords().len());
    // small RREF accumulator over the row space
    let mut rows: Vec<Vec<u32>> = Vec::with_capacity(r);
    let mut pivots: Vec<usize> = Vec::with_capacity(r);
    let mut row = vec![0u32; r];
    for c in 0..nrows {
        let mut nonzero = false;
        for (k, col) in columns.iter().enumerate() {
            row[k] = col.coords()[c];
            nonzero |= row[k] != 0;
        }
        if !nonzero {
            continue;
        }
        for (i, &pv) in pivots.iter().enumerate() {
            let f = row[pv];
            if f != 0 {
                for (x, &b) in row.iter_mut().zip(rows[i].iter()) {
                    *x = field.sub(*x, field.mul(f, b));
                }
            }
        }
        let Some(lead) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        let inv = field.inv(row[lead]).expect("lead entry nonzero");
        if inv != 1 {
            for x in row.iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        for (i, existing) in rows.iter_mut().enumerate() {
            let f = existing[lead];
            if f != 0 && pivots[i] != lead {
                for (x, &b) in existing.iter_mut().zip(row.iter()) {
                    *x = field.sub(*x, field.mul(f, b));
                }
            }
        }
        let at = pivots.partition_point(|&p| p < lead);
        pivots.insert(at, lead);
        rows.insert(at, row.clone());
        if rows.len() == r {
            return Vec::new(); // full rank, zero kernel
        }
        row = vec![0u32; r];
    }
    // read the kernel off the accumulated RREF
    let mut kernel = Vec::with_capacity(r - rows.len());
    let mut is_pivot = vec![false; r];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for free in 0..r {
        if is_pivot[free] {
            continue;
        }
        let mut v = vec![0u32; r];
        v[free] = 1;
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = field.neg(rows[i][free]);
        }
        kernel.push(v);
    }
    kernel
}

/// Everything the pipeline computes for one presentation, with the spaces
/// kept as canonical subspaces for further queries.
#[derive(Debug, Clone)]
pub struct Obstructions {
    pub spec: CentralExtensionSpec,
    pub gamma: GammaMap,
    pub center_minimal: bool,
    pub k2: Subspace,
    pub s2: Subspace,
    pub s2_dec: Subspace,
    pub k2_max: Subspace,
    pub k3: Subspace,
    pub s3: Subspace,
    pub s3_dec: Subspace,
    pub k3_max: Subspace,
    /// Canonical-basis vectors of S3 completing S3_dec to S3; they span
    /// S3/S3_dec and are empty exactly when the quotient is zero.
    pub s3_witnesses: Vec<Vec<u32>>,
}

/// Runs the full pipeline. Fails with a validation error when gamma is
/// not surjective (the presented center must be the commutator subgroup);
/// a center strictly larger than the commutator subgroup is reported as a
/// flag, not an error.
pub fn analyze(spec: &CentralExtensionSpec) -> Result<Obstructions> {
    let gamma = build_gamma(spec);
    if !check_commutator_full(&gamma) {
        return Err(Error::validation(
            "gamma is not surjective: the declared center is larger than the commutator subgroup",
        ));
    }
    let n = spec.dim_u();
    let k2 = k2_space(&gamma);
    let k3 = k3_space(&k2, n)?;
    let s2 = s_space(&k2);
    let s3 = s_space(&k3);
    let s2_dec = decomposable_span(&s2, n, 2)?;
    let s3_dec = decomposable_span(&s3, n, 3)?;
    let k2_max = kmax_space(&s2_dec);
    let k3_max = kmax_space(&s3_dec);

    // invariants of the construction; failure here is a bug, not bad input
    let check = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(Error::internal(format!("{what} violated for this presentation")))
        }
    };
    check(s2_dec.dim() <= s2.dim() && s2.contains_subspace(&s2_dec)?, "S2_dec inside S2")?;
    check(s3_dec.dim() <= s3.dim() && s3.contains_subspace(&s3_dec)?, "S3_dec inside S3")?;
    check(k2_max.contains_subspace(&k2)?, "K2 inside K2_max")?;
    check(k3_max.contains_subspace(&k3)?, "K3 inside K3_max")?;
    check(k2_max.dim() - k2.dim() == s2.dim() - s2_dec.dim(), "degree-2 duality bookkeeping")?;
    check(k3_max.dim() - k3.dim() == s3.dim() - s3_dec.dim(), "degree-3 duality bookkeeping")?;

    // deterministic witnesses: canonical basis vectors of S3 that extend S3_dec
    let mut s3_witnesses = Vec::new();
    let mut span = s3_dec.clone();
    for row in s3.basis_rows() {
        if span.insert(row)? {
            s3_witnesses.push(row.to_vec());
        }
    }
    check(s3_witnesses.len() == s3.dim() - s3_dec.dim(), "witness count")?;

    Ok(Obstructions {
        spec: spec.clone(),
        center_minimal: check_center_minimal(&gamma),
        gamma,
        k2,
        s2,
        s2_dec,
        k2_max,
        k3,
        s3,
        s3_dec,
        k3_max,
        s3_witnesses,
    })
}

impl Obstructions {
    /// dim K2_max/K2: the F_p-dimension of the unramified Brauer group.
    pub fn brnr_dim(&self) -> usize {
        self.k2_max.dim() - self.k2.dim()
    }

    /// dim K3_max/K3: a lower bound for the dimension of the degree-three
    /// unramified cohomology (the quotient embeds; equality is not known).
    pub fn h3_lower_dim(&self) -> usize {
        self.k3_max.dim() - self.k3.dim()
    }

    pub fn order_exponent(&self) -> usize {
        self.spec.order_exponent()
    }

    pub fn report(&self) -> ObstructionReport {
        let n = self.spec.dim_u();
        let field = self.spec.field();
        let basis_list = |s: &Subspace, d: usize| -> Vec<BasisVector> {
            subspace_multivectors(s, n, d, Side::Primal)
                .expect("pipeline subspaces have wedge ambient dimensions")
                .iter()
                .map(|mv| BasisVector {
                    coords: mv.coords().to_vec(),
                    text: render::render(mv),
                })
                .collect()
        };
        let witness_list: Vec<BasisVector> = self
            .s3_witnesses
            .iter()
            .map(|coords| {
                let mv = MultiVector::from_coords(field, n, 3, Side::Primal, coords.clone())
                    .expect("witnesses live in wedge^3");
                BasisVector { coords: coords.clone(), text: render::render(&mv) }
            })
            .collect();
        ObstructionReport {
            p: field.p() as u64,
            m: self.spec.dim_v(),
            n,
            order_exponent: self.order_exponent(),
            dim_k2: self.k2.dim(),
            dim_s2: self.s2.dim(),
            dim_s2dec: self.s2_dec.dim(),
            dim_k2max: self.k2_max.dim(),
            brnr_dim: self.brnr_dim(),
            dim_k3: self.k3.dim(),
            dim_s3: self.s3.dim(),
            dim_s3dec: self.s3_dec.dim(),
            dim_k3max: self.k3_max.dim(),
            h3_lower_dim: self.h3_lower_dim(),
            s2_basis: basis_list(&self.s2, 2),
            s2dec_basis: basis_list(&self.s2_dec, 2),
            s3_basis: basis_list(&self.s3, 3),
            s3dec_basis: basis_list(&self.s3_dec, 3),
            s3_witnesses: witness_list,
        }
    }
}

/// A basis vector serialized both as raw coordinates and in the textual
/// tuple notation.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct BasisVector {
    pub coords: Vec<u32>,
    pub text: String,
}

/// Machine-readable snapshot of a pipeline run. Field order is the stable
/// key order of the serialized form.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct ObstructionReport {
    pub p: u64,
    pub m: usize,
    pub n: usize,
    pub order_exponent: usize,
    pub dim_k2: usize,
    pub dim_s2: usize,
    pub dim_s2dec: usize,
    pub dim_k2max: usize,
    pub brnr_dim: usize,
    pub dim_k3: usize,
    pub dim_s3: usize,
    pub dim_s3dec: usize,
    pub dim_k3max: usize,
    pub h3_lower_dim: usize,
    pub s2_basis: Vec<BasisVector>,
    pub s2dec_basis: Vec<BasisVector>,
    pub s3_basis: Vec<BasisVector>,
    pub s3dec_basis: Vec<BasisVector>,
    pub s3_witnesses: Vec<BasisVector>,
}

impl ObstructionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// The eight subspace dimensions in pipeline order, for equality
    /// comparisons between runs.
    pub fn dims(&self) -> [usize; 8] {
        [
            self.dim_k2,
            self.dim_s2,
            self.dim_s2dec,
            self.dim_k2max,
            self.dim_k3,
            self.dim_s3,
            self.dim_s3dec,
            self.dim_k3max,
        ]
    }
}

fn checked_pow(p: u64, e: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc = acc.saturating_mul(p as u128);
    }
    acc
}

/// Odometer over all vectors of F_p^len in lexicographic order (first
/// coordinate fastest), starting from the zero vector.
pub(crate) struct AllVectors {
    p: u32,
    current: Option<Vec<u32>>,
}

impl AllVectors {
    pub fn new(field: PrimeField, len: usize) -> Self {
        AllVectors { p: field.p(), current: Some(vec![0; len]) }
    }
}

impl Iterator for AllVectors {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.current.take()?;
        let mut next = current.clone();
        let mut slot = 0;
        loop {
            if slot == next.len() {
                // wrapped: this was the last vector
                break;
            }
            if next[slot] + 1 < self.p {
                next[slot] += 1;
                self.current = Some(next);
                break;
            }
            next[slot] = 0;
            slot += 1;
        }
        Some(current)
    }
}

/// Brute-force oracle for [`decomposable_span`]: enumerates every pair
/// (u', u) with u' of degree d-1 and u of degree 1, wedges them, and spans
/// those products that land inside `s`. Never reasons about kernels. The
/// full pair count must fit the budget or the oracle refuses.
pub fn sdec_oracle(s: &Subspace, n: usize, d: usize, budget: u128) -> Result<Subspace> {
    if d < 1 {
        return Err(Error::validation("degree must be at least 1"));
    }
    if s.ambient_dim() != binomial(n, d) {
        return Err(Error::validation("subspace does not live in the expected wedge power"));
    }
    if s.dim() == 0 {
        return Ok(Subspace::zero(s.field(), s.ambient_dim()));
    }
    let field = s.field();
    let p = field.p() as u64;
    let work = checked_pow(p, binomial(n, d - 1)).saturating_mul(checked_pow(p, n));
    if work > budget {
        return Err(Error::Budget { work, budget });
    }
    let mut acc = Subspace::zero(field, s.ambient_dim());
    'outer: for uprime in AllVectors::new(field, binomial(n, d - 1)) {
        let uprime = MultiVector::from_coords(field, n, d - 1, Side::Primal, uprime)?;
        if uprime.is_zero() {
            continue;
        }
        for u in AllVectors::new(field, n) {
            let u = MultiVector::from_coords(field, n, 1, Side::Primal, u)?;
            let w = uprime.wedge(&u)?;
            if w.is_zero() || !s.contains(w.coords())? {
                continue;
            }
            acc.insert(w.coords())?;
            if acc.dim() == s.dim() {
                // acc is a span of members of s, so it can grow no further
                break 'outer;
            }
        }
    }
    Ok(acc)
}

/// Second independent oracle, bivector case only: enumerates all of `s`
/// and spans the elements with w ^ w = 0 (the classical criterion for a
/// bivector to be a single wedge of two vectors).
pub fn plucker_oracle_s2(s: &Subspace, n: usize, budget: u128) -> Result<Subspace> {
    if s.ambient_dim() != binomial(n, 2) {
        return Err(Error::validation("subspace does not live in the degree-2 wedge power"));
    }
    let field = s.field();
    let work = checked_pow(field.p() as u64, s.dim());
    if work > budget {
        return Err(Error::Budget { work, budget });
    }
    let mut acc = Subspace::zero(field, s.ambient_dim());
    for coeffs in AllVectors::new(field, s.dim()) {
        let coords = s.basis().left_apply(&coeffs)?;
        let w = MultiVector::from_coords(field, n, 2, Side::Primal, coords)?;
        if w.is_zero() || !w.wedge(&w)?.is_zero() {
            continue;
        }
        acc.insert(w.coords())?;
        if acc.dim() == s.dim() {
            break;
        }
    }
    Ok(acc)
}
