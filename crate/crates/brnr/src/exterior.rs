//! Exterior algebra of an n-dimensional F_p vector space and of its dual:
//! coordinates of degree-d multivectors over lexicographically ordered
//! index tuples, wedge products with merge-counted signs, the
//! primal-times-dual pairing, and the one-vector-factor test
//! (w = u' ^ u for some u iff w ^ u0 = 0 for some nonzero u0).
//!
//! Primal multivectors live in wedge^d U, dual ones in wedge^d U*. The two
//! sides never mix except through [`pairing`].

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{Matrix, Subspace};

/// Binomial coefficient as usize; small arguments only (n <= 64).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Lexicographic rank of a strictly increasing 0-based tuple among all
/// d-subsets of {0, .., n-1}.
pub(crate) fn tuple_rank(n: usize, tuple: &[usize]) -> usize {
    let d = tuple.len();
    let mut rank = 0;
    let mut prev = 0; // next candidate value
    for (i, &t) in tuple.iter().enumerate() {
        for v in prev..t {
            rank += binomial(n - 1 - v, d - 1 - i);
        }
        prev = t + 1;
    }
    rank
}

/// Inverse of [`tuple_rank`].
pub(crate) fn tuple_unrank(n: usize, d: usize, mut rank: usize) -> Vec<usize> {
    let mut tuple = Vec::with_capacity(d);
    let mut v = 0;
    for i in 0..d {
        loop {
            let block = binomial(n - 1 - v, d - 1 - i);
            if rank < block {
                tuple.push(v);
                v += 1;
                break;
            }
            rank -= block;
            v += 1;
        }
    }
    tuple
}

/// All strictly increasing 0-based d-tuples in lexicographic order.
pub(crate) fn tuples(n: usize, d: usize) -> Vec<Vec<usize>> {
    (0..binomial(n, d)).map(|r| tuple_unrank(n, d, r)).collect()
}

/// Sign of merging two strictly increasing tuples: (-1)^inversions, or
/// None when they share an element (the wedge term vanishes).
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            merged.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a
            inversions += a.len() - i;
            merged.push(b[j]);
            j += 1;
        }
    }
    merged.extend_from_slice(&a[i..]);
    merged.extend_from_slice(&b[j..]);
    Some((merged, inversions % 2 == 1))
}

/// Which space a multivector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Primal,
    Dual,
}

/// A degree-d element of wedge^d U (primal) or wedge^d U* (dual), stored as
/// its C(n, d) coordinates over lexicographically ranked index tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiVector {
    field: PrimeField,
    n: usize,
    degree: usize,
    side: Side,
    coords: Vec<u32>,
}

impl MultiVector {
    pub fn zero(field: PrimeField, n: usize, degree: usize, side: Side) -> Self {
        MultiVector { field, n, degree, side, coords: vec![0; binomial(n, degree)] }
    }

    pub fn from_coords(
        field: PrimeField,
        n: usize,
        degree: usize,
        side: Side,
        coords: Vec<u32>,
    ) -> Result<Self> {
        if coords.len() != binomial(n, degree) {
            return Err(Error::validation(format!(
                "expected {} coordinates for degree {} in dimension {}, got {}",
                binomial(n, degree),
                degree,
                n,
                coords.len()
            )));
        }
        if coords.iter().any(|&c| c >= field.p()) {
            return Err(Error::validation("coordinate not reduced mod p"));
        }
        Ok(MultiVector { field, n, degree, side, coords })
    }

    /// The basis multivector for 1-based indices, e.g. `[1, 5, 6]` for
    /// u1 ^ u5 ^ u6. Indices may come unsorted; the sign of the sorting
    /// permutation is applied. Repeated indices give the zero vector.
    pub fn basis_term(field: PrimeField, n: usize, side: Side, indices: &[usize]) -> Result<Self> {
        let d = indices.len();
        let mut mv = Self::zero(field, n, d, side);
        if d > n {
            return Ok(mv);
        }
        for &i in indices {
            if i < 1 || i > n {
                return Err(Error::validation(format!("index {i} out of range 1..={n}")));
            }
        }
        // insertion sort, counting swaps for the sign
        let mut sorted: Vec<usize> = indices.iter().map(|&i| i - 1).collect();
        let mut swaps = 0usize;
        for i in 1..sorted.len() {
            let mut j = i;
            while j > 0 && sorted[j - 1] > sorted[j] {
                sorted.swap(j - 1, j);
                swaps += 1;
                j -= 1;
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Ok(mv); // repeated factor
        }
        let value = if swaps % 2 == 0 { 1 } else { field.neg(1) };
        let rank = tuple_rank(n, &sorted);
        mv.coords[rank] = value;
        Ok(mv)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    /// Coordinate at a strictly increasing 1-based tuple.
    pub fn coefficient(&self, indices: &[usize]) -> Result<u32> {
        if indices.len() != self.degree {
            return Err(Error::validation("tuple length does not match degree"));
        }
        if indices.windows(2).any(|w| w[0] >= w[1]) || indices.iter().any(|&i| i < 1 || i > self.n)
        {
            return Err(Error::validation("tuple must be strictly increasing and in range"));
        }
        let zero_based: Vec<usize> = indices.iter().map(|&i| i - 1).collect();
        Ok(self.coords[tuple_rank(self.n, &zero_based)])
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.field != other.field || self.n != other.n {
            return Err(Error::validation("multivectors live over different spaces"));
        }
        if self.side != other.side {
            return Err(Error::validation("cannot combine primal and dual multivectors"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.degree != other.degree {
            return Err(Error::validation("degree mismatch in multivector sum"));
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(MultiVector { coords, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(self.field.neg(1)))
    }

    pub fn scale(&self, c: u32) -> Self {
        let coords = self.coords.iter().map(|&a| self.field.mul(a, c)).collect();
        MultiVector { coords, ..*self }
    }

    /// Nonzero terms as (0-based tuple, coefficient).
    pub(crate) fn terms(&self) -> impl Iterator<Item = (Vec<usize>, u32)> + '_ {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(move |(r, &c)| (tuple_unrank(self.n, self.degree, r), c))
    }

    /// Wedge product of two same-side multivectors. Degrees above n give
    /// the zero vector of that degree (an empty coordinate vector).
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let d = self.degree + other.degree;
        let mut out = MultiVector::zero(self.field, self.n, d, self.side);
        if d > self.n {
            return Ok(out);
        }
        let f = self.field;
        for (ta, ca) in self.terms() {
            for (tb, cb) in other.terms() {
                if let Some((merged, odd)) = merge_sign(&ta, &tb) {
                    let mut c = f.mul(ca, cb);
                    if odd {
                        c = f.neg(c);
                    }
                    let r = tuple_rank(self.n, &merged);
                    out.coords[r] = f.add(out.coords[r], c);
                }
            }
        }
        Ok(out)
    }
}

/// The pairing of a primal with a dual multivector of equal degree. In the
/// normalization fixed by [`pairing_gram`] (identity on standard bases)
/// this is the coordinate dot product.
pub fn pairing(primal: &MultiVector, dual: &MultiVector) -> Result<u32> {
    if primal.side != Side::Primal || dual.side != Side::Dual {
        return Err(Error::validation("pairing takes a primal and a dual multivector, in that order"));
    }
    if primal.field != dual.field || primal.n != dual.n || primal.degree != dual.degree {
        return Err(Error::validation("pairing requires matching space and degree"));
    }
    let f = primal.field;
    let p = f.p() as u64;
    let mut acc = 0u64;
    for (&a, &b) in primal.coords.iter().zip(&dual.coords) {
        acc = (acc + a as u64 * b as u64) % p;
    }
    Ok(acc as u32)
}

fn for_each_permutation(d: usize, f: &mut impl FnMut(&[usize], bool)) {
    // Heap's algorithm; each step is one transposition, so parity alternates.
    let mut perm: Vec<usize> = (0..d).collect();
    let mut c = vec![0usize; d];
    let mut odd = false;
    f(&perm, odd);
    let mut i = 0;
    while i < d {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            odd = !odd;
            f(&perm, odd);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Gram matrix of the degree-d pairing on standard bases, computed from
/// the defining signed sum over permutations: entry (I, J) is
/// sum over tau in S_d of sign(tau) * prod_a delta(J_a, I_tau(a)).
/// This is the independent route; it must equal the identity matrix,
/// which is what justifies the dot-product fast path in [`pairing`].
pub fn pairing_gram(field: PrimeField, n: usize, d: usize) -> Matrix {
    let ts = tuples(n, d);
    let dim = ts.len();
    let mut gram = Matrix::zeros(field, dim, dim);
    for (ri, primal) in ts.iter().enumerate() {
        for (rj, dual) in ts.iter().enumerate() {
            let mut acc = 0u32;
            for_each_permutation(d, &mut |perm, odd| {
                let prod: u32 =
                    if (0..d).all(|a| dual[a] == primal[perm[a]]) { 1 } else { 0 };
                if prod != 0 {
                    acc = if odd { field.sub(acc, prod) } else { field.add(acc, prod) };
                }
            });
            gram.set(ri, rj, acc);
        }
    }
    gram
}

/// Matrix of the map induced on wedge^d by a linear map g on U: column T
/// holds the coordinates of g(e_{T_1}) ^ .. ^ g(e_{T_d}).
pub fn induced_wedge_matrix(g: &Matrix, d: usize) -> Result<Matrix> {
    if g.rows() != g.cols() {
        return Err(Error::validation("induced wedge matrix needs a square matrix"));
    }
    let n = g.rows();
    let field = g.field();
    let columns: Vec<MultiVector> = (0..n)
        .map(|i| {
            let coords: Vec<u32> = (0..n).map(|r| g.get(r, i)).collect();
            MultiVector::from_coords(field, n, 1, Side::Primal, coords)
        })
        .collect::<Result<_>>()?;
    let dim = binomial(n, d);
    let mut out = Matrix::zeros(field, dim, dim);
    for (col, t) in tuples(n, d).iter().enumerate() {
        let mut acc = MultiVector::basis_term(field, n, Side::Primal, &[])?;
        for &i in t {
            acc = acc.wedge(&columns[i])?;
        }
        for (r, &c) in acc.coords().iter().enumerate() {
            out.set(r, col, c);
        }
    }
    Ok(out)
}

/// Matrix of the linear map u -> w ^ u from U to wedge^(d+1) U, in standard
/// coordinates: n columns, C(n, d+1) rows.
pub fn wedge_vector_map(w: &MultiVector) -> Matrix {
    let n = w.n;
    let rows = binomial(n, w.degree + 1);
    let mut m = Matrix::zeros(w.field, rows, n);
    for j in 0..n {
        let e = MultiVector::basis_term(w.field, n, w.side, &[j + 1]).expect("index in range");
        let col = w.wedge(&e).expect("same side");
        for (r, &c) in col.coords().iter().enumerate() {
            m.set(r, j, c);
        }
    }
    m
}

/// A nonzero u0 with w ^ u0 = 0, if one exists. Such a u0 exists exactly
/// when w factors as u' ^ u0 with u' of degree d-1, so this is the
/// membership test for the partially decomposable locus. Returns the first
/// RREF kernel basis vector so output is deterministic.
pub fn partial_decomposability_witness(w: &MultiVector) -> Result<Option<Vec<u32>>> {
    if w.is_zero() {
        return Err(Error::validation("decomposability test requires a nonzero multivector"));
    }
    let kernel = wedge_vector_map(w).kernel();
    if kernel.dim() == 0 {
        Ok(None)
    } else {
        Ok(Some(kernel.basis().row(0).to_vec()))
    }
}

/// Reads the rows of a subspace of wedge^d (dimension C(n, d)) back as
/// multivectors.
pub fn subspace_multivectors(s: &Subspace, n: usize, d: usize, side: Side) -> Result<Vec<MultiVector>> {
    if s.ambient_dim() != binomial(n, d) {
        return Err(Error::validation(format!(
            "subspace of ambient dimension {} is not inside a degree-{} component (C({}, {}) = {})",
            s.ambient_dim(),
            d,
            n,
            d,
            binomial(n, d)
        )));
    }
    Ok(s.basis_rows()
        .map(|row| {
            MultiVector::from_coords(s.field(), n, d, side, row.to_vec())
                .expect("subspace rows have the right length")
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn tuple_rank_bijection() {
        for n in 0..=8 {
            for d in 0..=n {
                let all = tuples(n, d);
                assert_eq!(all.len(), binomial(n, d));
                for (r, t) in all.iter().enumerate() {
                    assert_eq!(tuple_rank(n, t), r);
                    assert_eq!(tuple_unrank(n, d, r), *t);
                }
                // lexicographic order
                for w in all.windows(2) {
                    assert!(w[0] < w[1]);
                }
            }
        }
    }

    #[test]
    fn repeated_factor_vanishes() {
        let field = f(5);
        let u1 = MultiVector::basis_term(field, 4, Side::Primal, &[1]).unwrap();
        assert!(u1.wedge(&u1).unwrap().is_zero());
        let z = MultiVector::basis_term(field, 4, Side::Primal, &[1, 1]).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn transposition_sign() {
        let field = f(7);
        // (u2 ^ u1) ^ u3 = -u1 ^ u2 ^ u3
        let u21 = MultiVector::basis_term(field, 3, Side::Primal, &[2, 1]).unwrap();
        let u3 = MultiVector::basis_term(field, 3, Side::Primal, &[3]).unwrap();
        let w = u21.wedge(&u3).unwrap();
        assert_eq!(w.coefficient(&[1, 2, 3]).unwrap(), field.neg(1));
    }

    #[test]
    fn golden_expansion() {
        // (u1 + u4) ^ (u2 + u3) = (1,2) + (1,3) - (2,4) - (3,4)
        let field = f(5);
        let term = |idx: &[usize]| MultiVector::basis_term(field, 6, Side::Primal, idx).unwrap();
        let a = term(&[1]).add(&term(&[4])).unwrap();
        let b = term(&[2]).add(&term(&[3])).unwrap();
        let w = a.wedge(&b).unwrap();
        let expected = term(&[1, 2])
            .add(&term(&[1, 3]))
            .unwrap()
            .sub(&term(&[2, 4]))
            .unwrap()
            .sub(&term(&[3, 4]))
            .unwrap();
        assert_eq!(w, expected);
    }

    #[test]
    fn wedge_beyond_top_degree_is_zero() {
        let field = f(3);
        let a = MultiVector::basis_term(field, 3, Side::Primal, &[1, 2]).unwrap();
        let b = MultiVector::basis_term(field, 3, Side::Primal, &[2, 3]).unwrap();
        let w = a.wedge(&b).unwrap();
        assert_eq!(w.degree(), 4);
        assert!(w.is_zero());
        assert!(w.coords().is_empty());
    }

    #[test]
    fn pairing_on_basis_terms() {
        let field = f(5);
        let s = MultiVector::basis_term(field, 6, Side::Primal, &[1, 2]).unwrap();
        let matching = MultiVector::basis_term(field, 6, Side::Dual, &[1, 2]).unwrap();
        let other = MultiVector::basis_term(field, 6, Side::Dual, &[1, 3]).unwrap();
        assert_eq!(pairing(&s, &matching).unwrap(), 1);
        assert_eq!(pairing(&s, &other).unwrap(), 0);
        assert!(pairing(&matching, &s).is_err()); // sides swapped
        assert!(s.add(&matching).is_err()); // sides never mix additively
    }

    #[test]
    fn gram_is_identity() {
        for p in [3u64, 5] {
            let field = f(p);
            for n in 0..=7 {
                for d in 0..=n {
                    let gram = pairing_gram(field, n, d);
                    assert_eq!(
                        gram,
                        Matrix::identity(field, binomial(n, d)),
                        "gram differs from identity at p={p}, n={n}, d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn wedge_map_of_zero_and_of_simple_bivector() {
        let field = f(5);
        let zero = MultiVector::zero(field, 3, 2, Side::Primal);
        assert!(wedge_vector_map(&zero).is_zero());

        let w = MultiVector::basis_term(field, 3, Side::Primal, &[1, 2]).unwrap();
        let kernel = wedge_vector_map(&w).kernel();
        let expected = Subspace::span(field, 3, &[vec![1, 0, 0], vec![0, 1, 0]]).unwrap();
        assert_eq!(kernel, expected);
    }

    #[test]
    fn witness_for_factored_trivector() {
        let field = f(7);
        let w = MultiVector::basis_term(field, 6, Side::Primal, &[1, 5, 6]).unwrap();
        let u0 = partial_decomposability_witness(&w).unwrap().expect("factored input");
        // the witness annihilates w
        let u0_mv = MultiVector::from_coords(field, 6, 1, Side::Primal, u0).unwrap();
        assert!(w.wedge(&u0_mv).unwrap().is_zero());
    }

    #[test]
    fn witness_rejects_zero() {
        let field = f(3);
        let zero = MultiVector::zero(field, 4, 2, Side::Primal);
        assert!(partial_decomposability_witness(&zero).is_err());
    }

    #[test]
    fn top_degree_is_always_factored() {
        let field = f(3);
        let w = MultiVector::basis_term(field, 3, Side::Primal, &[1, 2, 3]).unwrap();
        assert!(partial_decomposability_witness(&w).unwrap().is_some());
    }
}
