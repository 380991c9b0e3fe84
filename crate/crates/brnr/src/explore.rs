//! Search machinery for building new presentations from a target
//! trivector w. X_w is the space of dual bivectors x such that the
//! pairing of w against x ^ y vanishes for every dual vector y; whenever
//! K2 is chosen inside X_w, the trivector w is forced into S3 of the
//! derived group. Candidates are subspaces of wedge^2 U*, turned into
//! presentations by reading their canonical bases as commutator tables,
//! then pushed through the obstruction pipeline and classified.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exterior::{binomial, pairing, tuples, MultiVector, Side};
use crate::group::{
    build_gamma, check_center_minimal, check_commutator_full, spec_from_gamma,
    CentralExtensionSpec,
};
use crate::linalg::{Matrix, Subspace};
use crate::obstruction::{analyze, AllVectors, Obstructions};

/// X_w = { x in wedge^2 U* : <<w, x ^ y>> = 0 for all y in U* }, the
/// kernel of an n x C(n, 2) coordinate matrix.
pub fn xw_space(w: &MultiVector) -> Result<Subspace> {
    if w.side() != Side::Primal || w.degree() != 3 {
        return Err(Error::validation("the search target must be a primal trivector"));
    }
    if w.is_zero() {
        return Err(Error::validation("the search target w must be nonzero"));
    }
    let field = w.field();
    let n = w.n();
    let mut m = Matrix::zeros(field, n, binomial(n, 2));
    for (col, pair) in tuples(n, 2).iter().enumerate() {
        let x = MultiVector::basis_term(field, n, Side::Dual, &[pair[0] + 1, pair[1] + 1])?;
        for j in 1..=n {
            let y = MultiVector::basis_term(field, n, Side::Dual, &[j])?;
            m.set(j - 1, col, pairing(w, &x.wedge(&y)?)?);
        }
    }
    Ok(m.kernel())
}

/// A candidate K2 subspace together with the presentation it induces:
/// dim V = dim K2, and the exponent of v_k in [u_i, u_j] is the (i, j)
/// coordinate of the k-th canonical basis vector of K2.
#[derive(Debug, Clone)]
pub struct CandidateK2 {
    pub generators: Vec<MultiVector>,
    pub k2: Subspace,
    pub spec: CentralExtensionSpec,
    pub commutator_full: bool,
    pub center_minimal: bool,
}

pub fn derive_candidate(n: usize, generators: &[MultiVector]) -> Result<CandidateK2> {
    if generators.is_empty() {
        return Err(Error::validation("a candidate needs at least one generator"));
    }
    for g in generators {
        if g.side() != Side::Dual || g.degree() != 2 || g.n() != n {
            return Err(Error::validation(
                "candidate generators must be dual bivectors over the same space",
            ));
        }
    }
    let field = generators[0].field();
    let rows: Vec<Vec<u32>> = generators.iter().map(|g| g.coords().to_vec()).collect();
    let k2 = Subspace::span(field, binomial(n, 2), &rows)?;
    if k2.dim() == 0 {
        return Err(Error::validation("candidate generators span the zero subspace"));
    }
    // the canonical basis matrix of K2 is exactly the gamma matrix
    let spec = spec_from_gamma(k2.basis(), n)?;
    let gamma = build_gamma(&spec);
    Ok(CandidateK2 {
        generators: generators.to_vec(),
        k2,
        commutator_full: check_commutator_full(&gamma),
        center_minimal: check_center_minimal(&gamma),
        spec,
    })
}

/// What a pipeline run says about a candidate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Trivial Brauer obstruction but nontrivial degree-three obstruction:
    /// the groups the search is after.
    Harmful,
    /// Nontrivial Brauer obstruction.
    BrauerObstructed,
    /// Both obstructions vanish.
    Clean,
}

impl Classification {
    pub fn of(obs: &Obstructions) -> Self {
        match (obs.brnr_dim(), obs.h3_lower_dim()) {
            (0, 0) => Classification::Clean,
            (0, _) => Classification::Harmful,
            _ => Classification::BrauerObstructed,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Classification::Harmful => "harmful",
            Classification::BrauerObstructed => "brauer-obstructed",
            Classification::Clean => "clean",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub ordinal: usize,
    pub candidate: CandidateK2,
    pub obstructions: Obstructions,
    pub classification: Classification,
}

/// Runs the pipeline on a candidate. When a target w is supplied and the
/// candidate lies inside X_w, the defining property of X_w is asserted:
/// w must land in the computed S3.
pub fn evaluate_candidate(
    candidate: &CandidateK2,
    target: Option<&MultiVector>,
) -> Result<SearchOutcome> {
    let obstructions = analyze(&candidate.spec)?;
    if let Some(w) = target {
        let xw = xw_space(w)?;
        if xw.contains_subspace(&candidate.k2)? && !obstructions.s3.contains(w.coords())? {
            return Err(Error::internal(
                "candidate K2 lies inside X_w but the target w is not in S3",
            ));
        }
    }
    let classification = Classification::of(&obstructions);
    Ok(SearchOutcome { ordinal: 0, candidate: candidate.clone(), obstructions, classification })
}

/// How to pick candidate subspaces of X_w.
#[derive(Debug, Clone)]
pub enum Strategy {
    /// User-supplied generator sets, evaluated in order.
    Explicit(Vec<Vec<MultiVector>>),
    /// `count` subspaces of the given dimension spanned by uniformly
    /// sampled independent vectors of X_w; deterministic per seed.
    Random { dim: usize, count: usize, seed: u64 },
    /// Every subspace of X_w of the given dimension, via canonical RREF
    /// profile enumeration; refuses up front if the subspace count
    /// exceeds the ceiling.
    Exhaustive { dim: usize, ceiling: u128 },
}

/// Number of k-dimensional subspaces of an N-dimensional space over F_p
/// (the Gaussian binomial), saturating at u128::MAX.
pub fn subspace_count(p: u64, ambient: usize, k: usize) -> u128 {
    if k > ambient {
        return 0;
    }
    let mut total: u128 = 0;
    for pivots in tuples(ambient, k) {
        let mut free = 0usize;
        for (r, &pc) in pivots.iter().enumerate() {
            // columns right of the pivot that are not pivots themselves
            free += ambient - pc - 1 - (k - r - 1);
        }
        let mut term: u128 = 1;
        for _ in 0..free {
            term = term.saturating_mul(p as u128);
        }
        total = total.saturating_add(term);
    }
    total
}

/// Runs a search against the target trivector w, invoking `emit` for each
/// outcome in enumeration order. Returns the number of candidates
/// evaluated.
pub fn search(
    w: &MultiVector,
    strategy: &Strategy,
    mut emit: impl FnMut(&SearchOutcome),
) -> Result<usize> {
    let field = w.field();
    let n = w.n();
    let xw = xw_space(w)?;
    let mut ordinal = 0usize;
    let mut run = |generators: &[MultiVector], emit: &mut dyn FnMut(&SearchOutcome)| -> Result<()> {
        let candidate = derive_candidate(n, generators)?;
        let mut outcome = evaluate_candidate(&candidate, Some(w))?;
        outcome.ordinal = ordinal;
        ordinal += 1;
        emit(&outcome);
        Ok(())
    };

    match strategy {
        Strategy::Explicit(sets) => {
            for generators in sets {
                run(generators, &mut emit)?;
            }
        }
        Strategy::Random { dim, count, seed } => {
            if *dim < 1 || *dim > xw.dim() {
                return Err(Error::validation(format!(
                    "requested dimension {} out of range 1..={} (dim X_w)",
                    dim,
                    xw.dim()
                )));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let p = field.p();
            for _ in 0..*count {
                // rejection-sample until the generators are independent
                let generators = loop {
                    let mut gens = Vec::with_capacity(*dim);
                    let mut span = Subspace::zero(field, xw.ambient_dim());
                    for _ in 0..*dim {
                        let coeffs: Vec<u32> =
                            (0..xw.dim()).map(|_| rng.gen_range(0..p)).collect();
                        let coords = xw.basis().left_apply(&coeffs)?;
                        span.insert(&coords)?;
                        gens.push(MultiVector::from_coords(field, n, 2, Side::Dual, coords)?);
                    }
                    if span.dim() == *dim {
                        break gens;
                    }
                };
                run(&generators, &mut emit)?;
            }
        }
        Strategy::Exhaustive { dim, ceiling } => {
            if *dim < 1 || *dim > xw.dim() {
                return Err(Error::validation(format!(
                    "requested dimension {} out of range 1..={} (dim X_w)",
                    dim,
                    xw.dim()
                )));
            }
            let count = subspace_count(field.p() as u64, xw.dim(), *dim);
            if count > *ceiling {
                return Err(Error::Budget { work: count, budget: *ceiling });
            }
            // every k-dim subspace exactly once, as a canonical RREF
            // profile in X_w coordinates
            for pivots in tuples(xw.dim(), *dim) {
                let mut free: Vec<(usize, usize)> = Vec::new();
                for (r, &pc) in pivots.iter().enumerate() {
                    for c in pc + 1..xw.dim() {
                        if !pivots.contains(&c) {
                            free.push((r, c));
                        }
                    }
                }
                for assignment in AllVectors::new(field, free.len()) {
                    let mut gens = Vec::with_capacity(*dim);
                    for r in 0..*dim {
                        let mut coeffs = vec![0u32; xw.dim()];
                        coeffs[pivots[r]] = 1;
                        for (slot, &(fr, fc)) in free.iter().enumerate() {
                            if fr == r {
                                coeffs[fc] = assignment[slot];
                            }
                        }
                        let coords = xw.basis().left_apply(&coeffs)?;
                        gens.push(MultiVector::from_coords(field, n, 2, Side::Dual, coords)?);
                    }
                    run(&gens, &mut emit)?;
                }
            }
        }
    }
    Ok(ordinal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::render::{parse, render};

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn dual_space(field: PrimeField, n: usize, gens: &[&str]) -> Subspace {
        let rows: Vec<Vec<u32>> =
            gens.iter().map(|g| parse(field, n, g).unwrap().coords().to_vec()).collect();
        Subspace::span(field, binomial(n, 2), &rows).unwrap()
    }

    const CASE1_W: &str = "(1,2,3)+(3,4,5)+(5,6,1)";
    const CASE1_XW: [&str; 9] = [
        "[1,2]-[4,5]",
        "[2,3]-[5,6]",
        "[1,4]",
        "[2,5]",
        "[3,6]",
        "[4,6]",
        "[3,4]+[1,6]",
        "[2,4]",
        "[2,6]",
    ];

    #[test]
    fn xw_of_cyclic_target() {
        for p in [3u64, 5, 7] {
            let field = f(p);
            let w = parse(field, 6, CASE1_W).unwrap();
            let xw = xw_space(&w).unwrap();
            assert_eq!(xw.dim(), 9);
            assert_eq!(xw, dual_space(field, 6, &CASE1_XW));
        }
    }

    #[test]
    fn xw_of_split_target() {
        let field = f(5);
        let w = parse(field, 6, "(1,2,3)+(4,5,6)").unwrap();
        let xw = xw_space(&w).unwrap();
        let expected: Vec<String> = (1..=3)
            .flat_map(|i| (4..=6).map(move |j| format!("[{i},{j}]")))
            .collect();
        let refs: Vec<&str> = expected.iter().map(String::as_str).collect();
        assert_eq!(xw.dim(), 9);
        assert_eq!(xw, dual_space(field, 6, &refs));
    }

    #[test]
    fn xw_of_single_term() {
        let field = f(3);
        let w = parse(field, 6, "(1,2,3)").unwrap();
        let xw = xw_space(&w).unwrap();
        assert_eq!(xw.dim(), 12);
        // exactly the pairs meeting {1,2,3} in at most one index
        let gens: Vec<String> = tuples(6, 2)
            .iter()
            .filter(|t| t[1] >= 3)
            .map(|t| format!("[{},{}]", t[0] + 1, t[1] + 1))
            .collect();
        let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
        assert_eq!(xw, dual_space(field, 6, &refs));
    }

    #[test]
    fn xw_rejects_zero_and_wrong_shape() {
        let field = f(3);
        let zero = MultiVector::zero(field, 6, 3, Side::Primal);
        assert!(xw_space(&zero).is_err());
        let bivector = parse(field, 6, "(1,2)").unwrap();
        assert!(xw_space(&bivector).is_err());
        let dual = parse(field, 6, "[1,2,3]").unwrap();
        assert!(xw_space(&dual).is_err());
    }

    #[test]
    fn derive_candidate_round_trip() {
        let field = f(5);
        let gens: Vec<MultiVector> =
            CASE1_XW[..6].iter().map(|g| parse(field, 6, g).unwrap()).collect();
        let candidate = derive_candidate(6, &gens).unwrap();
        assert_eq!(candidate.k2.dim(), 6);
        assert!(candidate.commutator_full);
        // the derived spec reproduces the span exactly
        let gamma = build_gamma(&candidate.spec);
        assert_eq!(crate::group::k2_space(&gamma), candidate.k2);
        assert_eq!(candidate.spec.dim_v(), 6);
        assert_eq!(candidate.spec.order_exponent(), 12);
    }

    #[test]
    fn derive_candidate_rejects_degenerate_input() {
        let field = f(5);
        assert!(derive_candidate(6, &[]).is_err());
        let zero = MultiVector::zero(field, 6, 2, Side::Dual);
        assert!(derive_candidate(6, &[zero]).is_err());
        let primal = parse(field, 6, "(1,2)").unwrap();
        assert!(derive_candidate(6, &[primal]).is_err());
    }

    #[test]
    fn case1_full_xw_degree_three_structure() {
        // Taking all of X_w as K2 gives the order p^15 group: S3 = <w, (1,3,5)>
        // with S3_dec = <(1,3,5)>, so the degree-three obstruction is 1.
        // The Brauer side does NOT vanish: the classes of (1,2)+(4,5),
        // (2,3)+(5,6), (3,4)-(1,6) in S2 contain no decomposables (their
        // squares have nonzero (1,2,4,5), (2,3,5,6), (1,3,4,6) coefficients),
        // so S2_dec = <(1,3),(1,5),(3,5)> and the Brauer quotient has
        // dimension 3 at every odd p.
        for p in [3u64, 5, 7] {
            let field = f(p);
            let w = parse(field, 6, CASE1_W).unwrap();
            let gens: Vec<MultiVector> =
                CASE1_XW.iter().map(|g| parse(field, 6, g).unwrap()).collect();
            let candidate = derive_candidate(6, &gens).unwrap();
            let outcome = evaluate_candidate(&candidate, Some(&w)).unwrap();
            assert_eq!(outcome.classification, Classification::BrauerObstructed);
            let obs = &outcome.obstructions;
            assert_eq!(obs.order_exponent(), 15);
            assert_eq!(obs.brnr_dim(), 3);
            assert_eq!(obs.h3_lower_dim(), 1);
            let s2dec_rows: Vec<Vec<u32>> = ["(1,3)", "(1,5)", "(3,5)"]
                .iter()
                .map(|s| parse(field, 6, s).unwrap().coords().to_vec())
                .collect();
            assert_eq!(
                obs.s2_dec,
                Subspace::span(field, binomial(6, 2), &s2dec_rows).unwrap()
            );
            // S3 = <w, (1,3,5)> and S3_dec = <(1,3,5)>
            let wprime = parse(field, 6, "(1,3,5)").unwrap();
            assert_eq!(obs.s3.dim(), 2);
            assert!(obs.s3.contains(w.coords()).unwrap());
            assert!(obs.s3.contains(wprime.coords()).unwrap());
            assert_eq!(obs.s3_dec.dim(), 1);
            assert!(obs.s3_dec.contains(wprime.coords()).unwrap());
        }
    }

    #[test]
    fn case2_full_xw_is_clean() {
        let field = f(5);
        let w = parse(field, 6, "(1,2,3)+(4,5,6)").unwrap();
        let xw = xw_space(&w).unwrap();
        let gens: Vec<MultiVector> =
            crate::exterior::subspace_multivectors(&xw, 6, 2, Side::Dual).unwrap();
        let candidate = derive_candidate(6, &gens).unwrap();
        let outcome = evaluate_candidate(&candidate, Some(&w)).unwrap();
        assert_eq!(outcome.classification, Classification::Clean);
        let obs = &outcome.obstructions;
        assert_eq!(obs.s3.dim(), 2);
        assert!(obs.s3.contains(parse(field, 6, "(1,2,3)").unwrap().coords()).unwrap());
        assert!(obs.s3.contains(parse(field, 6, "(4,5,6)").unwrap().coords()).unwrap());
        assert_eq!(obs.s3_dec, obs.s3);
        assert_eq!(obs.s2_dec, obs.s2);
    }

    #[test]
    fn search_explicit_order_and_ordinals() {
        let field = f(3);
        let w = parse(field, 6, CASE1_W).unwrap();
        let sets: Vec<Vec<MultiVector>> = vec![
            CASE1_XW[..6].iter().map(|g| parse(field, 6, g).unwrap()).collect(),
            CASE1_XW.iter().map(|g| parse(field, 6, g).unwrap()).collect(),
        ];
        let mut seen = Vec::new();
        let count = search(&w, &Strategy::Explicit(sets), |o| {
            seen.push((o.ordinal, o.obstructions.order_exponent()));
        })
        .unwrap();
        assert_eq!(count, 2);
        assert_eq!(seen, vec![(0, 12), (1, 15)]);
    }

    #[test]
    fn search_random_is_deterministic() {
        let field = f(3);
        let w = parse(field, 6, CASE1_W).unwrap();
        let strategy = Strategy::Random { dim: 3, count: 5, seed: 42 };
        let collect = || {
            let mut rows = Vec::new();
            search(&w, &strategy, |o| {
                let gens: Vec<String> = o.candidate.generators.iter().map(render).collect();
                rows.push((gens, o.classification.label()));
            })
            .unwrap();
            rows
        };
        let a = collect();
        let b = collect();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5);
    }

    #[test]
    fn search_exhaustive_counts_lines() {
        // Any trivector over a 4-dimensional space factors, and its X_w has
        // dimension exactly 3, so the smallest exhaustive search sweeps the
        // 13 lines of a 3-dimensional space over F_3. (A 2-dimensional X_w
        // would give the textbook 4-line count, but no trivector produces
        // one: the defining map always has corank >= 3 at n = 4.)
        assert_eq!(subspace_count(3, 2, 1), 4);
        assert_eq!(subspace_count(3, 3, 1), 13);
        let field = f(3);
        let w = parse(field, 4, "(1,2,3)+(1,2,4)+(1,3,4)+(2,3,4)").unwrap();
        let xw = xw_space(&w).unwrap();
        assert_eq!(xw.dim(), 3);
        let mut outcomes = Vec::new();
        let n = search(&w, &Strategy::Exhaustive { dim: 1, ceiling: 1_000_000 }, |o| {
            outcomes.push(o.candidate.k2.clone());
        })
        .unwrap();
        assert_eq!(n, 13);
        assert_eq!(outcomes.len(), 13);
        // all distinct subspaces, each inside X_w
        for (i, a) in outcomes.iter().enumerate() {
            assert!(xw.contains_subspace(a).unwrap());
            for b in &outcomes[..i] {
                assert_ne!(a, b);
            }
        }
    }

    #[test]
    fn search_exhaustive_refuses_over_ceiling() {
        let field = f(5);
        let w = parse(field, 6, CASE1_W).unwrap();
        // dim X_w = 9, so dim-4 subspaces are plentiful over F_5
        let err = search(&w, &Strategy::Exhaustive { dim: 4, ceiling: 1000 }, |_| {}).unwrap_err();
        match err {
            Error::Budget { work, budget } => {
                assert_eq!(budget, 1000);
                assert_eq!(work, subspace_count(5, 9, 4));
            }
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn subspace_count_small_cases() {
        // lines in F_3^2: (9 - 1) / (3 - 1) = 4
        assert_eq!(subspace_count(3, 2, 1), 4);
        // lines in F_3^3: 13; planes: 13 by duality
        assert_eq!(subspace_count(3, 3, 1), 13);
        assert_eq!(subspace_count(3, 3, 2), 13);
        assert_eq!(subspace_count(3, 3, 0), 1);
        assert_eq!(subspace_count(3, 3, 3), 1);
        // [4 choose 2]_7 = (7^2 + 1)(7^2 + 7 + 1)
        assert_eq!(subspace_count(7, 4, 2), 50 * 57);
    }
}
