//! Presentations of exponent-p central extensions 0 -> V -> G -> U -> 0
//! with V and U elementary abelian: the commutator table [u_i, u_j] =
//! prod_k v_k^e_k determines an alternating map gamma from wedge^2 U to V,
//! and gamma is the only input the obstruction pipeline ever needs. This
//! module builds gamma and its dual, runs the structural checks (gamma
//! surjective, center no larger than the commutator subgroup), provides
//! the catalog of named example groups, and reads/writes the line-oriented
//! presentation file format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exterior::{binomial, tuple_rank, tuple_unrank, MultiVector, Side};
use crate::field::PrimeField;
use crate::linalg::{Matrix, Subspace};

/// One commutator relation [u_i, u_j] = prod_k v_k^exponents[k], with
/// 1-based generator indices and i < j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub i: usize,
    pub j: usize,
    pub exponents: Vec<u32>,
}

/// A presentation: p, dim V, dim U, and the commutator table. Unlisted
/// pairs commute. Stored normalized: duplicate (i, j) entries are combined
/// additively, zero rows dropped, entries sorted by (i, j).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralExtensionSpec {
    field: PrimeField,
    dim_v: usize,
    dim_u: usize,
    relations: Vec<Relation>,
}

impl CentralExtensionSpec {
    pub fn new(
        field: PrimeField,
        dim_v: usize,
        dim_u: usize,
        entries: &[(usize, usize, Vec<i64>)],
    ) -> Result<Self> {
        if dim_u == 0 {
            return Err(Error::validation("the quotient U must have at least one generator"));
        }
        let mut combined: BTreeMap<(usize, usize), Vec<u32>> = BTreeMap::new();
        for &(i, j, ref exps) in entries {
            if i < 1 || j > dim_u || i >= j {
                return Err(Error::validation(format!(
                    "relation indices (u{i}, u{j}) must satisfy 1 <= i < j <= {dim_u}"
                )));
            }
            if exps.len() != dim_v {
                return Err(Error::validation(format!(
                    "relation (u{i}, u{j}) has {} exponents, expected dim V = {dim_v}",
                    exps.len()
                )));
            }
            let slot = combined.entry((i, j)).or_insert_with(|| vec![0; dim_v]);
            for (s, &e) in slot.iter_mut().zip(exps.iter()) {
                *s = field.add(*s, field.reduce(e));
            }
        }
        let relations = combined
            .into_iter()
            .filter(|(_, e)| e.iter().any(|&x| x != 0))
            .map(|((i, j), exponents)| Relation { i, j, exponents })
            .collect();
        Ok(CentralExtensionSpec { field, dim_v, dim_u, relations })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_u(&self) -> usize {
        self.dim_u
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// |G| = p^(dim V + dim U).
    pub fn order_exponent(&self) -> usize {
        self.dim_v + self.dim_u
    }
}

/// The commutator map gamma: wedge^2 U -> V as an (dim V) x C(n, 2)
/// matrix, column (i, j) holding the exponent vector of [u_i, u_j].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaMap {
    field: PrimeField,
    dim_v: usize,
    dim_u: usize,
    matrix: Matrix,
}

impl GammaMap {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim_v(&self) -> usize {
        self.dim_v
    }

    pub fn dim_u(&self) -> usize {
        self.dim_u
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The dual map V* -> wedge^2 U*: the transpose of gamma under the
    /// standard bases and the identity-gram pairing.
    pub fn dual_matrix(&self) -> Matrix {
        self.matrix.transpose()
    }

    /// gamma*(v_k*) as a dual bivector (1-based k).
    pub fn dual_image(&self, k: usize) -> Result<MultiVector> {
        if k < 1 || k > self.dim_v {
            return Err(Error::validation(format!("index v{k} out of range 1..={}", self.dim_v)));
        }
        MultiVector::from_coords(
            self.field,
            self.dim_u,
            2,
            Side::Dual,
            self.matrix.row(k - 1).to_vec(),
        )
    }
}

/// Builds gamma from the commutator table.
pub fn build_gamma(spec: &CentralExtensionSpec) -> GammaMap {
    let n = spec.dim_u;
    let mut matrix = Matrix::zeros(spec.field, spec.dim_v, binomial(n, 2));
    for rel in &spec.relations {
        let col = tuple_rank(n, &[rel.i - 1, rel.j - 1]);
        for (k, &e) in rel.exponents.iter().enumerate() {
            matrix.set(k, col, e);
        }
    }
    GammaMap { field: spec.field, dim_v: spec.dim_v, dim_u: spec.dim_u, matrix }
}

/// Reads a gamma matrix back into a presentation (the inverse of
/// [`build_gamma`] up to duplicate combination).
pub fn spec_from_gamma(gamma: &Matrix, dim_u: usize) -> Result<CentralExtensionSpec> {
    if gamma.cols() != binomial(dim_u, 2) {
        return Err(Error::validation(format!(
            "gamma has {} columns, expected C({}, 2) = {}",
            gamma.cols(),
            dim_u,
            binomial(dim_u, 2)
        )));
    }
    let mut entries = Vec::new();
    for col in 0..gamma.cols() {
        let exps: Vec<i64> = (0..gamma.rows()).map(|k| gamma.get(k, col) as i64).collect();
        if exps.iter().any(|&e| e != 0) {
            let t = tuple_unrank(dim_u, 2, col);
            entries.push((t[0] + 1, t[1] + 1, exps));
        }
    }
    CentralExtensionSpec::new(gamma.field(), gamma.rows(), dim_u, &entries)
}

/// True iff gamma is surjective, i.e. the presented V is exactly the
/// commutator subgroup.
pub fn check_commutator_full(gamma: &GammaMap) -> bool {
    gamma.matrix.rank() == gamma.dim_v
}

/// True iff no nonzero u in U commutes with all of U, i.e. the radical of
/// the V-valued alternating form is zero. This is the linear form of
/// "the center equals the commutator subgroup".
pub fn check_center_minimal(gamma: &GammaMap) -> bool {
    let n = gamma.dim_u;
    let f = gamma.field;
    // stack the alternating form matrices of all V-coordinates
    let mut stacked = Matrix::zeros(f, gamma.dim_v * n, n);
    for k in 0..gamma.dim_v {
        for col in 0..gamma.matrix.cols() {
            let e = gamma.matrix.get(k, col);
            if e == 0 {
                continue;
            }
            let t = tuple_unrank(n, 2, col);
            stacked.set(k * n + t[0], t[1], e);
            stacked.set(k * n + t[1], t[0], f.neg(e));
        }
    }
    stacked.kernel().dim() == 0
}

/// The extraspecial group of order p^(2n+1): one central generator, the n
/// symplectic pairs [u_{2i-1}, u_{2i}] = v.
pub fn extraspecial(field: PrimeField, n: usize) -> Result<CentralExtensionSpec> {
    if n == 0 {
        return Err(Error::validation("extraspecial requires n >= 1"));
    }
    let entries: Vec<(usize, usize, Vec<i64>)> =
        (1..=n).map(|i| (2 * i - 1, 2 * i, vec![1])).collect();
    CentralExtensionSpec::new(field, 1, 2 * n, &entries)
}

/// Which sign convention to use for the thm3.4 catalog entry; see
/// [`builtin`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Thm34Variant {
    /// [u1, u6] = v7, the convention consistent with the X_w construction.
    #[default]
    Sec3,
    /// [u1, u6]^-1 = v7 as printed in the source presentation.
    Printed,
}

/// Optional parameters for [`builtin`].
#[derive(Debug, Clone, Copy, Default)]
pub struct BuiltinParams {
    pub t: Option<i64>,
    pub a: Option<i64>,
    pub b: Option<i64>,
    pub n: Option<usize>,
    pub variant: Thm34Variant,
}

pub const BUILTIN_NAMES: &[&str] =
    &["thm2.4", "thm2.6", "thm2.7", "prop3.2", "prop3.3", "thm3.4", "peyre-p12", "extraspecial"];

/// The catalog of named example groups. Parameter domains are validated
/// here: `t` must be nonzero for thm2.6, X^2+aX+b must be irreducible for
/// prop3.3, and extraspecial needs `n >= 1`.
pub fn builtin(field: PrimeField, name: &str, params: &BuiltinParams) -> Result<CentralExtensionSpec> {
    let e3 = |k: usize, v: i64| -> Vec<i64> {
        let mut e = vec![0i64; 3];
        e[k - 1] = v;
        e
    };
    match name {
        "thm2.4" => CentralExtensionSpec::new(
            field,
            3,
            6,
            &[
                (1, 2, e3(1, 1)),
                (3, 4, e3(1, 1)),
                (1, 4, e3(2, 1)),
                (2, 5, e3(2, 1)),
                (3, 6, e3(2, 1)),
                (3, 5, e3(3, 1)),
                (4, 6, e3(3, 1)),
            ],
        ),
        "thm2.6" => {
            let t = params.t.ok_or_else(|| Error::validation("thm2.6 requires parameter t"))?;
            let t = field.reduce(t);
            if t == 0 {
                return Err(Error::validation("t must be nonzero"));
            }
            // The (1,5) exponent is -t so that the dual image of v3* is
            // [3,6] - t[1,5] - [2,4]; with +t the square/non-square
            // dichotomy would come out inverted whenever -1 is not a
            // square mod p.
            CentralExtensionSpec::new(
                field,
                3,
                6,
                &[
                    (1, 2, e3(1, 1)),
                    (4, 5, e3(1, -1)),
                    (2, 3, e3(2, 1)),
                    (5, 6, e3(2, -1)),
                    (1, 4, e3(2, 1)),
                    (3, 6, e3(3, 1)),
                    (2, 4, e3(3, -1)),
                    (1, 5, e3(3, -(t as i64))),
                ],
            )
        }
        "thm2.7" => CentralExtensionSpec::new(
            field,
            3,
            6,
            &[
                (1, 2, e3(1, 1)),
                (4, 5, e3(1, -1)),
                (2, 3, e3(2, 1)),
                (5, 6, e3(2, -1)),
                (1, 4, e3(2, 1)),
                (3, 6, e3(3, 1)),
                (2, 4, e3(3, -1)),
            ],
        ),
        "prop3.2" => CentralExtensionSpec::new(
            field,
            3,
            4,
            &[(1, 2, e3(1, 1)), (1, 3, e3(2, 1)), (2, 4, e3(2, 1)), (1, 4, e3(3, 1))],
        ),
        "prop3.3" => {
            let a = params
                .a
                .ok_or_else(|| Error::validation("prop3.3 requires parameters a and b"))?;
            let b = params
                .b
                .ok_or_else(|| Error::validation("prop3.3 requires parameters a and b"))?;
            let (ra, rb) = (field.reduce(a), field.reduce(b));
            let has_root = (0..field.p()).any(|x| {
                field.add(field.add(field.mul(x, x), field.mul(ra, x)), rb) == 0
            });
            if has_root {
                return Err(Error::validation(format!(
                    "X^2+aX+b must be irreducible, but X^2+{ra}X+{rb} has a root mod {}",
                    field.p()
                )));
            }
            // (u2, u4) carries v2 and v3^-a combined in one exponent vector.
            CentralExtensionSpec::new(
                field,
                3,
                4,
                &[
                    (1, 2, e3(1, 1)),
                    (1, 3, e3(2, 1)),
                    (2, 4, vec![0, 1, -a]),
                    (2, 3, e3(3, 1)),
                    (1, 4, e3(3, -b)),
                ],
            )
        }
        "thm3.4" => {
            let e9 = |k: usize, v: i64| -> Vec<i64> {
                let mut e = vec![0i64; 9];
                e[k - 1] = v;
                e
            };
            let u1u6 = match params.variant {
                Thm34Variant::Sec3 => 1,
                Thm34Variant::Printed => -1,
            };
            CentralExtensionSpec::new(
                field,
                9,
                6,
                &[
                    (1, 2, e9(1, 1)),
                    (4, 5, e9(1, -1)),
                    (2, 3, e9(2, 1)),
                    (5, 6, e9(2, -1)),
                    (1, 4, e9(3, 1)),
                    (2, 5, e9(4, 1)),
                    (3, 6, e9(5, 1)),
                    (4, 6, e9(6, 1)),
                    (3, 4, e9(7, 1)),
                    (1, 6, e9(7, u1u6)),
                    (2, 4, e9(8, 1)),
                    (2, 6, e9(9, 1)),
                ],
            )
        }
        "peyre-p12" => {
            let e6 = |k: usize, v: i64| -> Vec<i64> {
                let mut e = vec![0i64; 6];
                e[k - 1] = v;
                e
            };
            CentralExtensionSpec::new(
                field,
                6,
                6,
                &[
                    (1, 2, e6(1, 1)),
                    (4, 5, e6(1, -1)),
                    (2, 3, e6(2, 1)),
                    (5, 6, e6(2, -1)),
                    (1, 4, e6(3, 1)),
                    (2, 5, e6(4, 1)),
                    (3, 6, e6(5, 1)),
                    (4, 6, e6(6, 1)),
                ],
            )
        }
        "extraspecial" => {
            let n = params
                .n
                .ok_or_else(|| Error::validation("extraspecial requires parameter n"))?;
            extraspecial(field, n)
        }
        _ => Err(Error::validation(format!(
            "unknown builtin {name:?}; available: {}",
            BUILTIN_NAMES.join(", ")
        ))),
    }
}

/// K2 = the image of gamma*, i.e. the row space of the gamma matrix,
/// as a canonical subspace of wedge^2 U*.
pub fn k2_space(gamma: &GammaMap) -> Subspace {
    Subspace::from_matrix(gamma.matrix())
}

// ---------------------------------------------------------------------------
// presentation file format
// ---------------------------------------------------------------------------

/// Parses the line-oriented presentation format:
///
/// ```text
/// p = 7
/// center = 3
/// generators = 6
/// rel [u1, u2] = v1
/// rel [u1, u5] = v3^-2
/// ```
///
/// `#` starts a comment, blank lines are ignored, exponents default to 1,
/// and negative exponents are allowed. The three header directives must
/// all appear before the first `rel`.
pub fn parse_presentation(text: &str) -> Result<CentralExtensionSpec> {
    let mut p: Option<(u64, usize)> = None;
    let mut center: Option<usize> = None;
    let mut generators: Option<usize> = None;
    let mut entries: Vec<(usize, usize, Vec<i64>)> = Vec::new();
    let mut saw_rel = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("rel") {
            if !rest.starts_with([' ', '\t', '[']) {
                return Err(Error::parse_at(lineno, format!("unknown directive {line:?}")));
            }
            if p.is_none() || center.is_none() || generators.is_none() {
                return Err(Error::parse_at(
                    lineno,
                    "rel before the p/center/generators header".to_string(),
                ));
            }
            saw_rel = true;
            let (field_p, _) = p.unwrap();
            let field = PrimeField::new(field_p)
                .map_err(|e| Error::parse_at(lineno, e.to_string()))?;
            entries.push(parse_rel(
                rest.trim(),
                lineno,
                generators.unwrap(),
                center.unwrap(),
                field,
            )?);
        } else if let Some((key, value)) = line.split_once('=') {
            let key = key.trim();
            let value = value.trim();
            if saw_rel {
                return Err(Error::parse_at(
                    lineno,
                    format!("directive {key:?} after the first rel"),
                ));
            }
            match key {
                "p" => {
                    if p.is_some() {
                        return Err(Error::parse_at(lineno, "duplicate directive p"));
                    }
                    let v: u64 = value.parse().map_err(|_| {
                        Error::parse_at(lineno, format!("p must be an integer, got {value:?}"))
                    })?;
                    PrimeField::new(v).map_err(|e| Error::parse_at(lineno, e.to_string()))?;
                    p = Some((v, lineno));
                }
                "center" => {
                    if center.is_some() {
                        return Err(Error::parse_at(lineno, "duplicate directive center"));
                    }
                    center = Some(value.parse().map_err(|_| {
                        Error::parse_at(lineno, format!("center must be an integer, got {value:?}"))
                    })?);
                }
                "generators" => {
                    if generators.is_some() {
                        return Err(Error::parse_at(lineno, "duplicate directive generators"));
                    }
                    let g: usize = value.parse().map_err(|_| {
                        Error::parse_at(
                            lineno,
                            format!("generators must be an integer, got {value:?}"),
                        )
                    })?;
                    if g == 0 {
                        return Err(Error::parse_at(lineno, "generators must be at least 1"));
                    }
                    generators = Some(g);
                }
                other => {
                    return Err(Error::parse_at(lineno, format!("unknown directive {other:?}")));
                }
            }
        } else {
            return Err(Error::parse_at(lineno, format!("unknown directive {line:?}")));
        }
    }

    let (p, _) = p.ok_or_else(|| Error::parse("missing directive: p = <odd prime>"))?;
    let center = center.ok_or_else(|| Error::parse("missing directive: center = <m>"))?;
    let generators =
        generators.ok_or_else(|| Error::parse("missing directive: generators = <n>"))?;
    let field = PrimeField::new(p)?;
    CentralExtensionSpec::new(field, center, generators, &entries)
}

fn parse_rel(
    rest: &str,
    lineno: usize,
    dim_u: usize,
    dim_v: usize,
    field: PrimeField,
) -> Result<(usize, usize, Vec<i64>)> {
    let bad = |msg: String| Error::parse_at(lineno, msg);
    let (pair, rhs) = rest
        .split_once('=')
        .ok_or_else(|| bad(format!("expected rel [u<i>, u<j>] = ..., got {rest:?}")))?;
    let pair = pair.trim();
    let inner = pair
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| bad(format!("expected [u<i>, u<j>], got {pair:?}")))?;
    let mut parts = inner.split(',').map(str::trim);
    let (ui, uj) = match (parts.next(), parts.next(), parts.next()) {
        (Some(a), Some(b), None) => (a, b),
        _ => return Err(bad(format!("expected two generators in {pair:?}"))),
    };
    let gen_index = |s: &str| -> Result<usize> {
        let num = s
            .strip_prefix('u')
            .ok_or_else(|| bad(format!("generator {s:?} must look like u<index>")))?;
        let v: usize =
            num.parse().map_err(|_| bad(format!("bad generator index in {s:?}")))?;
        if v < 1 || v > dim_u {
            return Err(bad(format!("generator u{v} out of range 1..={dim_u}")));
        }
        Ok(v)
    };
    let i = gen_index(ui)?;
    let j = gen_index(uj)?;
    if i >= j {
        return Err(bad(format!("relation [u{i}, u{j}] violates i < j")));
    }
    let mut exponents = vec![0i64; dim_v];
    let mut any = false;
    for factor in rhs.split_whitespace() {
        any = true;
        let (vpart, epart) = match factor.split_once('^') {
            Some((v, e)) => (v, Some(e)),
            None => (factor, None),
        };
        let knum = vpart
            .strip_prefix('v')
            .ok_or_else(|| bad(format!("central factor {factor:?} must look like v<k>[^e]")))?;
        let k: usize = knum.parse().map_err(|_| bad(format!("bad central index in {factor:?}")))?;
        if k < 1 || k > dim_v {
            return Err(bad(format!("central generator v{k} out of range 1..={dim_v}")));
        }
        let e: i64 = match epart {
            None => 1,
            Some(e) => e.parse().map_err(|_| bad(format!("bad exponent in {factor:?}")))?,
        };
        exponents[k - 1] += field.reduce(e) as i64;
    }
    if !any {
        return Err(bad("relation has an empty right-hand side".to_string()));
    }
    Ok((i, j, exponents))
}

/// Writes a spec back in the presentation format; the output re-parses to
/// an equal spec.
pub fn format_presentation(spec: &CentralExtensionSpec) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p = {}", spec.p());
    let _ = writeln!(out, "center = {}", spec.dim_v());
    let _ = writeln!(out, "generators = {}", spec.dim_u());
    for rel in spec.relations() {
        let factors: Vec<String> = rel
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(k, &e)| {
                let b = spec.field().balanced(e);
                if b == 1 {
                    format!("v{}", k + 1)
                } else {
                    format!("v{}^{}", k + 1, b)
                }
            })
            .collect();
        let _ = writeln!(out, "rel [u{}, u{}] = {}", rel.i, rel.j, factors.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::render::render;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn gamma_dual_images_thm24() {
        let spec = builtin(f(5), "thm2.4", &BuiltinParams::default()).unwrap();
        let gamma = build_gamma(&spec);
        assert_eq!(render(&gamma.dual_image(1).unwrap()), "[1,2]+[3,4]");
        assert_eq!(render(&gamma.dual_image(2).unwrap()), "[1,4]+[2,5]+[3,6]");
        assert_eq!(render(&gamma.dual_image(3).unwrap()), "[3,5]+[4,6]");
    }

    #[test]
    fn gamma_dual_images_thm26() {
        let spec =
            builtin(f(7), "thm2.6", &BuiltinParams { t: Some(3), ..Default::default() }).unwrap();
        let gamma = build_gamma(&spec);
        assert_eq!(render(&gamma.dual_image(1).unwrap()), "[1,2]-[4,5]");
        assert_eq!(render(&gamma.dual_image(2).unwrap()), "[1,4]+[2,3]-[5,6]");
        assert_eq!(render(&gamma.dual_image(3).unwrap()), "-3[1,5]-[2,4]+[3,6]");
    }

    #[test]
    fn empty_relations_give_zero_gamma() {
        let spec = CentralExtensionSpec::new(f(3), 2, 4, &[]).unwrap();
        let gamma = build_gamma(&spec);
        assert!(gamma.matrix().is_zero());
        assert!(!check_commutator_full(&gamma));
    }

    #[test]
    fn structural_checks() {
        let field = f(5);
        let spec = builtin(field, "thm2.4", &BuiltinParams::default()).unwrap();
        let gamma = build_gamma(&spec);
        assert!(check_commutator_full(&gamma));
        assert!(check_center_minimal(&gamma));

        let es = extraspecial(field, 3).unwrap();
        let gamma = build_gamma(&es);
        assert!(check_commutator_full(&gamma));
        assert!(check_center_minimal(&gamma));

        // an unused generator u4 is central but not in the image of V
        let dangling =
            CentralExtensionSpec::new(field, 1, 4, &[(1, 2, vec![1]), (2, 3, vec![1])]).unwrap();
        let gamma = build_gamma(&dangling);
        assert!(check_commutator_full(&gamma));
        assert!(!check_center_minimal(&gamma));

        let t27 = builtin(field, "thm2.7", &BuiltinParams::default()).unwrap();
        assert!(check_center_minimal(&build_gamma(&t27)));
    }

    #[test]
    fn extraspecial_shape() {
        let spec = extraspecial(f(3), 1).unwrap();
        assert_eq!(spec.dim_u(), 2);
        assert_eq!(spec.relations(), &[Relation { i: 1, j: 2, exponents: vec![1] }]);

        let spec = extraspecial(f(7), 2).unwrap();
        assert_eq!(
            spec.relations(),
            &[
                Relation { i: 1, j: 2, exponents: vec![1] },
                Relation { i: 3, j: 4, exponents: vec![1] }
            ]
        );

        for n in 1..=5 {
            let spec = extraspecial(f(5), n).unwrap();
            assert_eq!(spec.relations().len(), n);
            assert_eq!(spec.order_exponent(), 2 * n + 1);
            assert!(spec.relations().iter().all(|r| r.exponents == vec![1]));
        }
        assert!(extraspecial(f(5), 0).is_err());
    }

    #[test]
    fn builtin_orders() {
        let field = f(3);
        let params = BuiltinParams { t: Some(1), a: Some(0), b: Some(1), n: Some(2), ..Default::default() };
        for (name, expected) in [
            ("thm2.4", 9),
            ("thm2.6", 9),
            ("thm2.7", 9),
            ("prop3.2", 7),
            ("prop3.3", 7),
            ("thm3.4", 15),
            ("peyre-p12", 12),
            ("extraspecial", 5),
        ] {
            let spec = builtin(field, name, &params).unwrap();
            assert_eq!(spec.order_exponent(), expected, "order of {name}");
        }
    }

    #[test]
    fn builtin_thm24_has_seven_entries() {
        let spec = builtin(f(11), "thm2.4", &BuiltinParams::default()).unwrap();
        assert_eq!(spec.relations().len(), 7);
    }

    #[test]
    fn builtin_param_domains() {
        let field = f(7);
        let err = builtin(field, "thm2.6", &BuiltinParams { t: Some(0), ..Default::default() })
            .unwrap_err();
        assert!(err.to_string().contains("t must be nonzero"));
        assert!(builtin(field, "thm2.6", &BuiltinParams::default()).is_err());

        // X^2 + 1 factors mod 5 (2^2 = -1), so (a, b) = (0, 1) is invalid there
        let err = builtin(
            f(5),
            "prop3.3",
            &BuiltinParams { a: Some(0), b: Some(1), ..Default::default() },
        )
        .unwrap_err();
        assert!(err.to_string().contains("irreducible"));
        assert!(builtin(
            f(5),
            "prop3.3",
            &BuiltinParams { a: Some(1), b: Some(1), ..Default::default() }
        )
        .is_ok());

        assert!(builtin(field, "nosuch", &BuiltinParams::default()).is_err());
    }

    #[test]
    fn prop33_combines_duplicate_pair() {
        // X^2 + 2X + 2 is irreducible mod 7 (discriminant -4 = 3, a non-square)
        let field = f(7);
        let spec = builtin(
            field,
            "prop3.3",
            &BuiltinParams { a: Some(2), b: Some(2), ..Default::default() },
        )
        .unwrap();
        let rel = spec.relations().iter().find(|r| (r.i, r.j) == (2, 4)).unwrap();
        assert_eq!(rel.exponents, vec![0, 1, field.reduce(-2)]);
    }

    #[test]
    fn thm34_variants_differ_only_at_u1_u6() {
        let field = f(5);
        let sec3 = builtin(field, "thm3.4", &BuiltinParams::default()).unwrap();
        let printed = builtin(
            field,
            "thm3.4",
            &BuiltinParams { variant: Thm34Variant::Printed, ..Default::default() },
        )
        .unwrap();
        let g1 = build_gamma(&sec3);
        let g2 = build_gamma(&printed);
        assert_eq!(render(&g1.dual_image(7).unwrap()), "[1,6]+[3,4]");
        assert_eq!(render(&g2.dual_image(7).unwrap()), "-[1,6]+[3,4]");
        for k in (1..=9).filter(|&k| k != 7) {
            assert_eq!(g1.dual_image(k).unwrap(), g2.dual_image(k).unwrap());
        }
    }

    #[test]
    fn gamma_round_trip() {
        let field = f(7);
        for name in ["thm2.4", "thm2.7", "prop3.2", "peyre-p12", "thm3.4"] {
            let spec = builtin(field, name, &BuiltinParams::default()).unwrap();
            let gamma = build_gamma(&spec);
            let back = spec_from_gamma(gamma.matrix(), spec.dim_u()).unwrap();
            assert_eq!(back, spec, "round trip of {name}");
        }
    }

    #[test]
    fn presentation_round_trip() {
        let spec =
            builtin(f(7), "thm2.6", &BuiltinParams { t: Some(3), ..Default::default() }).unwrap();
        let text = format_presentation(&spec);
        let back = parse_presentation(&text).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn presentation_parses_comments_and_exponents() {
        let text = "\
# an order p^5 example
p = 5
center = 2
generators = 3

rel [u1, u2] = v1 v2^-1   # combined center factors
rel [u1, u3] = v2^2
";
        let spec = parse_presentation(text).unwrap();
        assert_eq!(spec.p(), 5);
        assert_eq!(spec.dim_v(), 2);
        assert_eq!(spec.dim_u(), 3);
        assert_eq!(
            spec.relations(),
            &[
                Relation { i: 1, j: 2, exponents: vec![1, 4] },
                Relation { i: 1, j: 3, exponents: vec![0, 2] },
            ]
        );
    }

    #[test]
    fn presentation_duplicate_rel_combines() {
        let text = "p = 3\ncenter = 2\ngenerators = 2\nrel [u1, u2] = v1\nrel [u1, u2] = v2\n";
        let spec = parse_presentation(text).unwrap();
        assert_eq!(spec.relations(), &[Relation { i: 1, j: 2, exponents: vec![1, 1] }]);
    }

    #[test]
    fn presentation_errors_carry_line_numbers() {
        let check = |text: &str, line: usize, needle: &str| {
            let err = parse_presentation(text).unwrap_err();
            match err {
                Error::Parse { line: Some(l), msg } => {
                    assert_eq!(l, line, "line for {text:?}");
                    assert!(msg.contains(needle), "message {msg:?} lacks {needle:?}");
                }
                other => panic!("expected a parse error with line, got {other:?}"),
            }
        };
        check("p = 3\ncenter = 1\ngenerators = 2\nrel [u2, u1] = v1\n", 4, "i < j");
        check("p = 3\ncenter = 1\ngenerators = 2\nfrobnicate = 1\n", 4, "unknown directive");
        check("p = 4\ncenter = 1\ngenerators = 2\n", 1, "odd prime");
        check("p = 3\ncenter = 1\ngenerators = 2\nrel [u1, u2] = v3\n", 4, "out of range");
        check("p = 3\ncenter = 1\ngenerators = 2\nrel [u1, u2] = v1^x\n", 4, "bad exponent");
        check("rel [u1, u2] = v1\n", 1, "header");
    }

    #[test]
    fn presentation_missing_header_is_error() {
        assert!(parse_presentation("p = 3\ncenter = 1\n").is_err());
        assert!(parse_presentation("").is_err());
    }
}
