//! Arrangement data model: hyperplanes as lines in the dual space V*, flats
//! as canonical row spaces, and the constructions that produce new
//! arrangements from old (restriction, quotient, cone, direct sum) plus the
//! builtin catalog.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::field::{FieldDesc, FieldElement};
use crate::matrix::{self, Matrix, Row};

/// A subspace X ⊆ V* in reduced-echelon canonical form. Two flats are equal
/// iff their matrices are identical.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Flat {
    basis: Matrix,
}

impl Flat {
    pub fn from_rows(rows: Vec<Row>, ambient: usize) -> Flat {
        let mut m = Matrix::new(rows, ambient);
        m.rref();
        Flat { basis: m }
    }

    pub fn zero(ambient: usize) -> Flat {
        Flat { basis: Matrix::zero_rows(ambient) }
    }

    pub fn full(ambient: usize) -> Flat {
        Flat { basis: Matrix::identity(ambient) }
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn contains_vector(&self, v: &Row) -> bool {
        self.basis.express_in_rows(v).is_some()
    }

    /// Coordinates of v in the canonical basis rows, if v ∈ X.
    pub fn coordinates_of(&self, v: &Row) -> Option<Row> {
        self.basis.express_in_rows(v)
    }

    pub fn contains_flat(&self, other: &Flat) -> bool {
        other.basis.rows.iter().all(|r| self.contains_vector(r))
    }

    pub fn sum(&self, other: &Flat) -> Flat {
        let mut rows = self.basis.rows.clone();
        rows.extend(other.basis.rows.iter().cloned());
        Flat::from_rows(rows, self.ambient())
    }

    pub fn intersect(&self, other: &Flat) -> Flat {
        // Solutions of x·[Aᵀ | −Bᵀ] = 0 pair coefficients of rows of A with
        // rows of B describing one common vector.
        let ra = self.dim();
        let rb = other.dim();
        if ra == 0 || rb == 0 {
            return Flat::zero(self.ambient());
        }
        let n = self.ambient();
        let mut stacked = Vec::with_capacity(n);
        for c in 0..n {
            let mut row: Row = Vec::with_capacity(ra + rb);
            for r in 0..ra {
                row.push(self.basis.rows[r][c].clone());
            }
            for r in 0..rb {
                row.push(other.basis.rows[r][c].neg());
            }
            stacked.push(row);
        }
        let kernel = Matrix::new(stacked, ra + rb).nullspace();
        let mut rows = Vec::with_capacity(kernel.nrows());
        for k in &kernel.rows {
            let mut v = matrix::zero_row(n);
            for (r, coeff) in k[..ra].iter().enumerate() {
                if !coeff.is_zero() {
                    let scaled = matrix::scale_row(&self.basis.rows[r], coeff);
                    v = matrix::add_rows(&v, &scaled);
                }
            }
            rows.push(v);
        }
        Flat::from_rows(rows, n)
    }

    /// Deterministic sort key: (dim, entry list in canonical order).
    pub fn sort_key(&self) -> (usize, Vec<FieldElement>) {
        let flat: Vec<FieldElement> = self.basis.rows.iter().flatten().cloned().collect();
        (self.dim(), flat)
    }
}

impl Serialize for Flat {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("dim", &self.dim())?;
        m.serialize_entry("basis", &self.basis.rows)?;
        m.end()
    }
}

fn canonicalize_covector(mut v: Row) -> Result<Row, ()> {
    let lead = v.iter().position(|c| !c.is_zero()).ok_or(())?;
    let inv = v[lead].inv().map_err(|_| ())?;
    for c in v.iter_mut() {
        *c = c.mul(&inv).unwrap();
    }
    Ok(v)
}

/// A hyperplane arrangement: distinct lines in V*, covectors canonicalized
/// to leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    pub dim: usize,
    pub hyperplanes: Vec<Row>,
    pub field: FieldDesc,
}

impl Arrangement {
    pub fn new(dim: usize, covectors: Vec<Row>, field: FieldDesc) -> Result<Arrangement, Error> {
        let mut hyperplanes: Vec<Row> = Vec::with_capacity(covectors.len());
        for (i, v) in covectors.into_iter().enumerate() {
            if v.len() != dim {
                return Err(Error::BadParams(format!(
                    "covector {} has length {}, expected {}",
                    i,
                    v.len(),
                    dim
                )));
            }
            let canon = canonicalize_covector(v).map_err(|_| Error::ZeroCovector(i))?;
            if let Some(j) = hyperplanes.iter().position(|h| *h == canon) {
                return Err(Error::DuplicateHyperplane(j, i));
            }
            hyperplanes.push(canon);
        }
        Ok(Arrangement { dim, hyperplanes, field })
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn hyperplane_flat(&self, i: usize) -> Flat {
        Flat::from_rows(vec![self.hyperplanes[i].clone()], self.dim)
    }

    /// Index of the hyperplane equal to the line spanned by v, if any.
    pub fn hyperplane_index(&self, v: &Row) -> Option<usize> {
        let canon = canonicalize_covector(v.clone()).ok()?;
        self.hyperplanes.iter().position(|h| *h == canon)
    }

    pub fn full_flat(&self) -> Flat {
        Flat::full(self.dim)
    }

    /// Span of all covectors.
    pub fn span(&self) -> Flat {
        Flat::from_rows(self.hyperplanes.clone(), self.dim)
    }

    pub fn is_essential(&self) -> bool {
        self.span().dim() == self.dim
    }

    /// Induced essential arrangement on the span of the covectors.
    /// Idempotent: an essential arrangement maps to itself.
    pub fn essentialize(&self) -> Arrangement {
        let span = self.span();
        if span.dim() == self.dim {
            return self.clone();
        }
        let rank = span.dim();
        let covectors = self
            .hyperplanes
            .iter()
            .map(|h| span.coordinates_of(h).expect("covector lies in the span"))
            .collect();
        Arrangement::new(rank, covectors, self.field).expect("essentialization is valid")
    }

    /// The cone: every covector gains a zero last coordinate and one new
    /// hyperplane L* (the new coordinate line) is added.
    pub fn cone(&self) -> Arrangement {
        let dim = self.dim + 1;
        let mut covectors: Vec<Row> = self
            .hyperplanes
            .iter()
            .map(|h| {
                let mut v = h.clone();
                v.push(FieldElement::zero());
                v
            })
            .collect();
        let mut lstar = matrix::zero_row(dim);
        lstar[dim - 1] = FieldElement::one();
        covectors.push(lstar);
        Arrangement::new(dim, covectors, self.field).expect("cone is valid")
    }

    /// The line L* of the cone, in cone coordinates.
    pub fn cone_line(&self) -> Flat {
        let dim = self.dim + 1;
        let mut lstar = matrix::zero_row(dim);
        lstar[dim - 1] = FieldElement::one();
        Flat::from_rows(vec![lstar], dim)
    }

    /// Block sum (V₁⊕V₂, A₁⊔A₂).
    pub fn direct_sum(&self, other: &Arrangement) -> Result<Arrangement, Error> {
        let field = match (self.field, other.field) {
            (FieldDesc::Rational, f) | (f, FieldDesc::Rational) => f,
            (FieldDesc::Cyclotomic { order: a }, FieldDesc::Cyclotomic { order: b }) => {
                if a == b {
                    FieldDesc::Cyclotomic { order: a }
                } else {
                    return Err(Error::FieldMismatch(format!(
                        "cannot sum arrangements over ℚ(ζ_{}) and ℚ(ζ_{})",
                        a, b
                    )));
                }
            }
        };
        let dim = self.dim + other.dim;
        let mut covectors = Vec::with_capacity(self.len() + other.len());
        for h in &self.hyperplanes {
            let mut v = h.clone();
            v.extend(matrix::zero_row(other.dim));
            covectors.push(v);
        }
        for h in &other.hyperplanes {
            let mut v = matrix::zero_row(self.dim);
            v.extend(h.iter().cloned());
            covectors.push(v);
        }
        Arrangement::new(dim, covectors, field)
    }

    /// Cheap lattice membership: X ∈ L(A) iff X equals the span of the
    /// hyperplanes it contains (with 0 ∈ L(A) by convention).
    pub fn flat_in_lattice(&self, x: &Flat) -> bool {
        if x.ambient() != self.dim {
            return false;
        }
        if x.is_zero() {
            return true;
        }
        let inside: Vec<Row> = self
            .hyperplanes
            .iter()
            .filter(|h| x.contains_vector(h))
            .cloned()
            .collect();
        Flat::from_rows(inside, self.dim) == *x
    }

    /// Hyperplane indices contained in X.
    pub fn hyperplanes_in(&self, x: &Flat) -> Vec<usize> {
        (0..self.len()).filter(|&i| x.contains_vector(&self.hyperplanes[i])).collect()
    }

    /// Restriction (X^⊥, A/X): the arrangement induced on V*/X. A concrete
    /// complement of X (the non-pivot coordinates of its echelon form) is
    /// recorded so quotient covectors are explicit.
    pub fn restriction(&self, x: &Flat) -> Result<RestrictionData, Error> {
        if !self.flat_in_lattice(x) {
            return Err(Error::FlatNotInLattice);
        }
        let mut xm = x.basis().clone();
        let pivots = xm.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let complement: Vec<usize> =
            (0..self.dim).filter(|c| !pivot_set.contains(c)).collect();
        let dim = complement.len();
        let mut image_covectors: Vec<Row> = Vec::new();
        let mut class_of: Vec<Option<usize>> = Vec::with_capacity(self.len());
        for h in &self.hyperplanes {
            match reduce_mod_flat(h, x, &complement) {
                None => class_of.push(None),
                Some(v) => {
                    let canon = canonicalize_covector(v).expect("nonzero image");
                    let idx = image_covectors.iter().position(|u| *u == canon).unwrap_or_else(|| {
                        image_covectors.push(canon.clone());
                        image_covectors.len() - 1
                    });
                    class_of.push(Some(idx));
                }
            }
        }
        let arrangement = Arrangement::new(dim, image_covectors, self.field)?;
        Ok(RestrictionData { arrangement, x: x.clone(), complement, class_of, ambient: self.dim })
    }

    /// Quotient (V/X^⊥, A|_X): hyperplanes contained in X, expressed in the
    /// canonical basis of X.
    pub fn quotient(&self, x: &Flat) -> Result<QuotientData, Error> {
        if !self.flat_in_lattice(x) {
            return Err(Error::FlatNotInLattice);
        }
        let kept: Vec<usize> = self.hyperplanes_in(x);
        let covectors: Vec<Row> = kept
            .iter()
            .map(|&i| x.coordinates_of(&self.hyperplanes[i]).expect("hyperplane lies in X"))
            .collect();
        let arrangement = Arrangement::new(x.dim(), covectors, self.field)?;
        Ok(QuotientData { arrangement, x: x.clone(), kept })
    }
}

/// Projection of v modulo X onto the recorded complement coordinates;
/// None when v ∈ X.
fn reduce_mod_flat(v: &Row, x: &Flat, complement: &[usize]) -> Option<Row> {
    // Subtract X-rows to kill the pivot coordinates of v.
    let mut w = v.clone();
    let xb = x.basis();
    let mut col = 0;
    for r in 0..xb.nrows() {
        // Pivot column of row r is the first nonzero entry.
        while col < xb.cols && xb.rows[r][col].is_zero() {
            col += 1;
        }
        let c = w[col].clone();
        if !c.is_zero() {
            let scaled = matrix::scale_row(&xb.rows[r], &c);
            w = matrix::sub_rows(&w, &scaled);
        }
    }
    let out: Row = complement.iter().map(|&c| w[c].clone()).collect();
    if matrix::is_zero_row(&out) {
        None
    } else {
        Some(out)
    }
}

/// Result of restriction, carrying the identification of (X^⊥)* with V*/X.
#[derive(Clone, Debug)]
pub struct RestrictionData {
    pub arrangement: Arrangement,
    pub x: Flat,
    /// Complement coordinates of V* chosen to represent V*/X.
    pub complement: Vec<usize>,
    /// For each hyperplane of the source, its image index (None when H ⊆ X).
    pub class_of: Vec<Option<usize>>,
    pub ambient: usize,
}

impl RestrictionData {
    /// Image (Y+X)/X of a flat of the source.
    pub fn map_flat(&self, y: &Flat) -> Flat {
        let rows: Vec<Row> = y
            .basis()
            .rows
            .iter()
            .filter_map(|r| reduce_mod_flat(r, &self.x, &self.complement))
            .collect();
        Flat::from_rows(rows, self.complement.len())
    }

    /// Image of a covector (not canonicalized); None if it lies in X.
    pub fn map_covector(&self, v: &Row) -> Option<Row> {
        reduce_mod_flat(v, &self.x, &self.complement)
    }

    /// Hyperplane indices of the source in the class of quotient hyperplane j.
    pub fn class_members(&self, j: usize) -> Vec<usize> {
        self.class_of
            .iter()
            .enumerate()
            .filter_map(|(i, c)| (*c == Some(j)).then_some(i))
            .collect()
    }
}

/// Result of a quotient, carrying the basis of X used for coordinates.
#[derive(Clone, Debug)]
pub struct QuotientData {
    pub arrangement: Arrangement,
    pub x: Flat,
    /// Source hyperplane index of each quotient hyperplane, in order.
    pub kept: Vec<usize>,
}

impl QuotientData {
    /// A flat Y ⊆ X of the source expressed in X-coordinates.
    pub fn map_flat(&self, y: &Flat) -> Flat {
        let rows: Vec<Row> = y
            .basis()
            .rows
            .iter()
            .map(|r| self.x.coordinates_of(r).expect("flat lies inside X"))
            .collect();
        Flat::from_rows(rows, self.x.dim())
    }

    pub fn map_covector(&self, v: &Row) -> Option<Row> {
        self.x.coordinates_of(v)
    }
}

/// Builtin catalog.
///
/// `braid(l)` is the differences-only braid arrangement, essentialized;
/// `monomial(l, 1)` is its coordinate-augmented variant (covectors x_i and
/// x_i − x_j), which carries the maximal chain of modular coordinate flats.
pub fn builtin(name: &str, params: &[u32]) -> Result<Arrangement, Error> {
    let fe = FieldElement::integer;
    match name {
        "braid" => {
            let l = *params.first().ok_or_else(|| Error::BadParams("braid needs l".into()))?;
            if l < 1 {
                return Err(Error::BadParams("braid needs l ≥ 1".into()));
            }
            let n = (l + 1) as usize;
            let mut covectors = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    let mut v = matrix::zero_row(n);
                    v[i] = fe(1);
                    v[j] = fe(-1);
                    covectors.push(v);
                }
            }
            let arr = Arrangement::new(n, covectors, FieldDesc::Rational)?;
            Ok(arr.essentialize())
        }
        "monomial" => {
            let &[l, q] = params else {
                return Err(Error::BadParams("monomial needs l and q".into()));
            };
            if l < 1 || q < 1 {
                return Err(Error::BadParams("monomial needs l ≥ 1 and q ≥ 1".into()));
            }
            let n = (l + 1) as usize;
            let field = if q <= 2 { FieldDesc::Rational } else { FieldDesc::Cyclotomic { order: q } };
            let mut covectors = Vec::new();
            for i in 0..n {
                let mut v = matrix::zero_row(n);
                v[i] = fe(1);
                covectors.push(v);
            }
            for i in 0..n {
                for j in (i + 1)..n {
                    for m in 1..=q {
                        let mut v = matrix::zero_row(n);
                        v[i] = fe(1);
                        v[j] = FieldElement::zeta_power(q, m as i64)?.neg();
                        covectors.push(v);
                    }
                }
            }
            Arrangement::new(n, covectors, field)
        }
        "ex_irred" => {
            let rows = vec![
                vec![fe(1), fe(0), fe(0)],
                vec![fe(0), fe(1), fe(0)],
                vec![fe(0), fe(0), fe(1)],
                vec![fe(1), fe(1), fe(0)],
                vec![fe(1), fe(0), fe(1)],
            ];
            Arrangement::new(3, rows, FieldDesc::Rational)
        }
        "ex_ss_not_enough" => {
            let rows = vec![
                vec![fe(1), fe(0), fe(0)],
                vec![fe(0), fe(1), fe(0)],
                vec![fe(0), fe(0), fe(1)],
                vec![fe(1), fe(1), fe(-1)],
                vec![fe(0), fe(1), fe(-1)],
            ];
            Arrangement::new(3, rows, FieldDesc::Rational)
        }
        "ex_only_one_modular" => {
            let rows = vec![
                vec![fe(1), fe(0), fe(0)],
                vec![fe(0), fe(1), fe(0)],
                vec![fe(0), fe(0), fe(1)],
                vec![fe(1), fe(0), fe(1)],
                vec![fe(0), fe(1), fe(-1)],
                vec![fe(0), fe(2), fe(-1)],
                vec![fe(0), fe(1), fe(-2)],
                vec![fe(1), fe(1), fe(-1)],
                vec![fe(1), fe(-2), fe(2)],
            ];
            Arrangement::new(3, rows, FieldDesc::Rational)
        }
        "ex_pred3" => {
            let mut rows = Vec::new();
            for i in 0..4 {
                let mut v = matrix::zero_row(4);
                v[i] = fe(1);
                rows.push(v);
            }
            for i in 0..3 {
                let mut v = matrix::zero_row(4);
                v[i] = fe(1);
                v[3] = fe(-1);
                rows.push(v);
            }
            Arrangement::new(4, rows, FieldDesc::Rational)
        }
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

pub const BUILTIN_NAMES: &[&str] = &[
    "braid",
    "monomial",
    "ex_irred",
    "ex_ss_not_enough",
    "ex_only_one_modular",
    "ex_pred3",
];

#[derive(Serialize, Deserialize)]
struct ArrangementJson {
    field: FieldDesc,
    dim: usize,
    hyperplanes: Vec<Vec<FieldElement>>,
}

impl Serialize for Arrangement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ArrangementJson {
            field: self.field,
            dim: self.dim,
            hyperplanes: self.hyperplanes.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Arrangement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = ArrangementJson::deserialize(d)?;
        Arrangement::new(raw.dim, raw.hyperplanes, raw.field).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(n: i64) -> FieldElement {
        FieldElement::integer(n)
    }

    #[test]
    fn duplicate_hyperplanes_rejected() {
        let err = Arrangement::new(
            2,
            vec![vec![fe(1), fe(0)], vec![fe(2), fe(0)]],
            FieldDesc::Rational,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateHyperplane(0, 1)));
    }

    #[test]
    fn one_hyperplane_line_is_valid() {
        let a = Arrangement::new(1, vec![vec![fe(1)]], FieldDesc::Rational).unwrap();
        assert!(a.is_essential());
    }

    #[test]
    fn ex_irred_has_five_hyperplanes() {
        let a = builtin("ex_irred", &[]).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a.dim, 3);
    }

    #[test]
    fn essentialize_braid() {
        let coords = Arrangement::new(
            3,
            vec![vec![fe(1), fe(0), fe(0)], vec![fe(0), fe(1), fe(0)]],
            FieldDesc::Rational,
        )
        .unwrap();
        assert!(!coords.is_essential());
        assert_eq!(coords.essentialize().dim, 2);

        let braid = builtin("braid", &[2]).unwrap();
        assert_eq!(braid.dim, 2);
        assert_eq!(braid.len(), 3);
        let again = braid.essentialize();
        assert_eq!(again, braid);
    }

    #[test]
    fn cone_counts() {
        let a = builtin("ex_irred", &[]).unwrap();
        let c = a.cone();
        assert_eq!(c.dim, 4);
        assert_eq!(c.len(), 6);
        let one = Arrangement::new(1, vec![vec![fe(1)]], FieldDesc::Rational).unwrap();
        let c1 = one.cone();
        assert_eq!((c1.dim, c1.len()), (2, 2));
    }

    #[test]
    fn cone_is_sum_with_point() {
        let a = builtin("ex_irred", &[]).unwrap();
        let point = Arrangement::new(1, vec![vec![fe(1)]], FieldDesc::Rational).unwrap();
        assert_eq!(a.cone(), a.direct_sum(&point).unwrap());
    }

    #[test]
    fn monomial_1_2_hyperplanes() {
        let a = builtin("monomial", &[1, 2]).unwrap();
        assert_eq!(a.dim, 2);
        // x1, x2, x1−x2, x1+x2 (ζ2 = −1).
        assert_eq!(a.len(), 4);
        let expect = [
            vec![fe(1), fe(0)],
            vec![fe(0), fe(1)],
            vec![fe(1), fe(1)],
            vec![fe(1), fe(-1)],
        ];
        for v in &expect {
            assert!(a.hyperplane_index(v).is_some(), "missing covector {:?}", v);
        }
    }

    #[test]
    fn builtin_sizes() {
        assert_eq!(builtin("ex_pred3", &[]).unwrap().len(), 7);
        assert_eq!(builtin("ex_only_one_modular", &[]).unwrap().len(), 9);
        assert!(builtin("nope", &[]).is_err());
        assert!(builtin("monomial", &[0, 1]).is_err());
    }

    #[test]
    fn restriction_of_ex_irred_at_x() {
        let a = builtin("ex_irred", &[]).unwrap();
        let x = a.hyperplane_flat(0); // ⟨x⟩
        let r = a.restriction(&x).unwrap();
        // Two lines survive: the images of ⟨x,y⟩-members and ⟨x,z⟩-members.
        assert_eq!(r.arrangement.len(), 2);
        assert_eq!(r.arrangement.dim, 2);
        // x itself maps to zero.
        assert_eq!(r.class_of[0], None);
        // y and x+y fall in one class, z and x+z in the other.
        assert_eq!(r.class_of[1], r.class_of[3]);
        assert_eq!(r.class_of[2], r.class_of[4]);
        assert_ne!(r.class_of[1], r.class_of[2]);
    }

    #[test]
    fn restriction_at_zero_is_identity() {
        let a = builtin("ex_irred", &[]).unwrap();
        let r = a.restriction(&Flat::zero(3)).unwrap();
        assert_eq!(r.arrangement, a);
    }

    #[test]
    fn quotient_of_ex_irred_at_xy() {
        let a = builtin("ex_irred", &[]).unwrap();
        let xy = Flat::from_rows(
            vec![vec![fe(1), fe(0), fe(0)], vec![fe(0), fe(1), fe(0)]],
            3,
        );
        let q = a.quotient(&xy).unwrap();
        assert_eq!(q.arrangement.len(), 3); // x, y, x+y
        assert_eq!(q.arrangement.dim, 2);
        let full = a.quotient(&Flat::full(3)).unwrap();
        assert_eq!(full.arrangement, a);
        let h = a.quotient(&a.hyperplane_flat(0)).unwrap();
        assert_eq!((h.arrangement.dim, h.arrangement.len()), (1, 1));
    }

    #[test]
    fn braid_restriction_collapses_to_one_line() {
        // In the essentialized braid arrangement on three strands the other
        // two covectors become proportional modulo any hyperplane.
        let a = builtin("braid", &[2]).unwrap();
        for i in 0..a.len() {
            let r = a.restriction(&a.hyperplane_flat(i)).unwrap();
            assert_eq!(r.arrangement.len(), 1, "restriction at hyperplane {i}");
            assert_eq!(r.arrangement.dim, 1);
        }
    }

    #[test]
    fn quotient_restriction_dims_add() {
        let a = builtin("ex_pred3", &[]).unwrap();
        let x = Flat::from_rows(vec![vec![fe(1), fe(0), fe(0), fe(0)]], 4);
        let r = a.restriction(&x).unwrap();
        let q = a.quotient(&x).unwrap();
        assert_eq!(r.arrangement.dim + q.arrangement.dim, a.dim);
    }

    #[test]
    fn direct_sum_counts() {
        let x = Arrangement::new(1, vec![vec![fe(1)]], FieldDesc::Rational).unwrap();
        let s = x.direct_sum(&x).unwrap();
        assert_eq!((s.dim, s.len()), (2, 2));
    }

    #[test]
    fn arrangement_json_round_trip() {
        let a = builtin("monomial", &[1, 3]).unwrap();
        let s = serde_json::to_string(&a).unwrap();
        let b: Arrangement = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
