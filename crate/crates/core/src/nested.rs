//! G-nested sets, maximal nested sets, adapted bases, their restriction and
//! quotient, and predecessor analysis.

use crate::arrangement::{Arrangement, Flat};
use crate::error::Error;
use crate::lattice::{BuildingSet, IntersectionLattice};
use crate::matrix::{Matrix, Row};

/// A G-nested family of flats, kept in canonical (dim, matrix) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedSet {
    flats: Vec<Flat>,
}

impl NestedSet {
    pub fn from_flats(mut flats: Vec<Flat>) -> NestedSet {
        flats.sort_by_key(|a| a.sort_key());
        flats.dedup();
        NestedSet { flats }
    }

    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn contains(&self, f: &Flat) -> bool {
        self.flats.iter().any(|g| g == f)
    }

    pub fn position(&self, f: &Flat) -> Option<usize> {
        self.flats.iter().position(|g| g == f)
    }

    /// Two maximal nested sets are adjacent when they differ in one element.
    pub fn adjacent(&self, other: &NestedSet) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let common = self.flats.iter().filter(|f| other.contains(f)).count();
        common + 1 == self.len()
    }
}

/// Every antichain of size ≥ 2 must sum outside G.
pub fn is_nested(subset: &[Flat], g: &BuildingSet) -> bool {
    let n = subset.len();
    // DFS over antichains in index order.
    fn rec(subset: &[Flat], g: &BuildingSet, start: usize, chosen: &mut Vec<usize>) -> bool {
        if chosen.len() >= 2 {
            let mut sum = subset[chosen[0]].clone();
            for &i in &chosen[1..] {
                sum = sum.sum(&subset[i]);
            }
            if g.contains(&sum) {
                return false;
            }
        }
        for next in start..subset.len() {
            let incomparable = chosen.iter().all(|&i| {
                !subset[i].contains_flat(&subset[next]) && !subset[next].contains_flat(&subset[i])
            });
            if incomparable {
                chosen.push(next);
                if !rec(subset, g, next + 1, chosen) {
                    return false;
                }
                chosen.pop();
            }
        }
        true
    }
    let mut chosen = Vec::with_capacity(n);
    rec(subset, g, 0, &mut chosen)
}

/// All maximal G-nested sets of an essential arrangement, in a deterministic
/// order. Each has cardinality dim V*.
pub fn maximal_nested_sets(lattice: &IntersectionLattice, g: &BuildingSet) -> Vec<NestedSet> {
    let dim = lattice.arrangement.dim;
    let elements: Vec<Flat> = g.flats().to_vec();
    let mut out: Vec<Vec<Flat>> = Vec::new();
    let mut current: Vec<Flat> = Vec::new();
    fn extend(
        elements: &[Flat],
        g: &BuildingSet,
        dim: usize,
        start: usize,
        current: &mut Vec<Flat>,
        out: &mut Vec<Vec<Flat>>,
    ) {
        if current.len() == dim {
            out.push(current.clone());
            return;
        }
        if current.len() + (elements.len() - start) < dim {
            return;
        }
        for i in start..elements.len() {
            current.push(elements[i].clone());
            if is_nested(current, g) {
                extend(elements, g, dim, i + 1, current, out);
            }
            current.pop();
        }
    }
    extend(&elements, g, dim, 0, &mut current, &mut out);
    let mut sets: Vec<NestedSet> = out.into_iter().map(NestedSet::from_flats).collect();
    sets.sort_by(|a, b| {
        let ka: Vec<_> = a.flats().iter().map(|f| f.sort_key()).collect();
        let kb: Vec<_> = b.flats().iter().map(|f| f.sort_key()).collect();
        ka.cmp(&kb)
    });
    sets.dedup();
    sets
}

/// p_S(v): the minimal element of {Y ∈ S : v ∈ Y} ∪ {V*}. The set is
/// asserted to be a chain.
pub fn p_in_nested(v: &Row, s: &NestedSet, ambient: usize) -> Result<Flat, Error> {
    let mut containing: Vec<&Flat> = s.flats().iter().filter(|f| f.contains_vector(v)).collect();
    let full = Flat::full(ambient);
    if !containing.iter().any(|f| **f == full) {
        // V* joins the chain by convention.
    }
    containing.sort_by_key(|f| f.dim());
    for w in containing.windows(2) {
        if !w[1].contains_flat(w[0]) {
            return Err(Error::Internal("flats containing v do not form a chain".into()));
        }
    }
    Ok(containing.first().map(|f| (*f).clone()).unwrap_or(full))
}

/// X⁺: the minimal element of {Y ∈ S : X ⊊ Y}.
pub fn successor(s: &NestedSet, x: &Flat) -> Result<Flat, Error> {
    let mut above: Vec<&Flat> = s
        .flats()
        .iter()
        .filter(|f| f.dim() > x.dim() && f.contains_flat(x))
        .collect();
    above.sort_by_key(|f| f.dim());
    for w in above.windows(2) {
        if !w[1].contains_flat(w[0]) {
            return Err(Error::Internal("flats above X do not form a chain".into()));
        }
    }
    above
        .first()
        .map(|f| (*f).clone())
        .ok_or_else(|| Error::BadParams("X has no successor in S".into()))
}

/// P(X) = {Y ∈ S : Y⁺ = X}.
pub fn predecessors(s: &NestedSet, x: &Flat) -> Result<Vec<Flat>, Error> {
    let mut out = Vec::new();
    for y in s.flats() {
        if y == x {
            continue;
        }
        if x.contains_flat(y) && successor(s, y)? == *x {
            out.push(y.clone());
        }
    }
    Ok(out)
}

/// An adapted basis: one hyperplane index per element of S (in S's canonical
/// order) such that {β(Y) : Y ⊆ X} is a basis of X for every X ∈ S.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedBasis {
    pub assignment: Vec<usize>,
}

impl AdaptedBasis {
    pub fn hyperplane_for(&self, s: &NestedSet, x: &Flat) -> Option<usize> {
        s.position(x).map(|i| self.assignment[i])
    }
}

/// All adapted bases of a maximal nested set, enumerated deterministically.
/// Candidates for X are hyperplanes with p_S = X; the per-prefix basis
/// condition prunes the search.
pub fn adapted_bases(arr: &Arrangement, s: &NestedSet) -> Result<Vec<AdaptedBasis>, Error> {
    let n = s.len();
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    for x in s.flats() {
        let mut c = Vec::new();
        for (h, cov) in arr.hyperplanes.iter().enumerate() {
            if p_in_nested(cov, s, arr.dim)? == *x {
                c.push(h);
            }
        }
        candidates.push(c);
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    fn rec(
        arr: &Arrangement,
        s: &NestedSet,
        candidates: &[Vec<usize>],
        pos: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<AdaptedBasis>,
    ) {
        if pos == candidates.len() {
            out.push(AdaptedBasis { assignment: chosen.clone() });
            return;
        }
        for &h in &candidates[pos] {
            chosen.push(h);
            // Basis condition for the flat just assigned: the covectors of
            // members contained in it must span it.
            let x = &s.flats()[pos];
            let rows: Vec<Row> = (0..=pos)
                .filter(|&i| x.contains_flat(&s.flats()[i]))
                .map(|i| arr.hyperplanes[chosen[i]].clone())
                .collect();
            let ok = rows.len() == x.dim() && Matrix::new(rows, arr.dim).rank() == x.dim();
            if ok {
                rec(arr, s, candidates, pos + 1, chosen, out);
            }
            chosen.pop();
        }
    }
    rec(arr, s, &candidates, 0, &mut chosen, &mut out);
    if out.is_empty() {
        return Err(Error::Internal("maximal nested set without an adapted basis".into()));
    }
    // Invariant p_S(β(X)) = X holds by construction of the candidate lists.
    Ok(out)
}

pub fn first_adapted_basis(arr: &Arrangement, s: &NestedSet) -> Result<AdaptedBasis, Error> {
    Ok(adapted_bases(arr, s)?.remove(0))
}

/// Check the adapted-basis invariants for an arbitrary assignment.
pub fn is_adapted(arr: &Arrangement, s: &NestedSet, beta: &AdaptedBasis) -> bool {
    if beta.assignment.len() != s.len() {
        return false;
    }
    for x in s.flats() {
        let rows: Vec<Row> = (0..s.len())
            .filter(|&i| x.contains_flat(&s.flats()[i]))
            .map(|i| arr.hyperplanes[beta.assignment[i]].clone())
            .collect();
        if rows.len() != x.dim() || Matrix::new(rows, arr.dim).rank() != x.dim() {
            return false;
        }
    }
    for (i, x) in s.flats().iter().enumerate() {
        match p_in_nested(&arr.hyperplanes[beta.assignment[i]], s, arr.dim) {
            Ok(p) if p == *x => {}
            _ => return false,
        }
    }
    true
}

/// S|_X in the coordinates of A|_X, with the induced adapted basis.
pub fn nested_restrict(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    s: &NestedSet,
    beta: &AdaptedBasis,
    x: &Flat,
) -> Result<(IntersectionLattice, BuildingSet, NestedSet, AdaptedBasis), Error> {
    let (sub_lattice, sub_g) = crate::lattice::building_restrict(lattice, g, x)?;
    let q = lattice.arrangement.quotient(x)?;
    let mut flats = Vec::new();
    let mut assignment = Vec::new();
    let mut pairs: Vec<(Flat, usize)> = Vec::new();
    for (i, y) in s.flats().iter().enumerate() {
        if x.contains_flat(y) {
            let image = q.map_flat(y);
            let source_h = beta.assignment[i];
            let image_h = q
                .kept
                .iter()
                .position(|&k| k == source_h)
                .ok_or_else(|| Error::Internal("adapted hyperplane missing from quotient".into()))?;
            pairs.push((image, image_h));
        }
    }
    pairs.sort_by_key(|a| a.0.sort_key());
    for (f, h) in pairs {
        flats.push(f);
        assignment.push(h);
    }
    let nested = NestedSet { flats };
    let adapted = AdaptedBasis { assignment };
    if nested.len() != x.dim() || !is_nested(nested.flats(), &sub_g) {
        return Err(Error::Internal("restricted nested set is not maximal nested".into()));
    }
    if !is_adapted(&q.arrangement, &nested, &adapted) {
        return Err(Error::Internal("induced basis on S|_X is not adapted".into()));
    }
    Ok((sub_lattice, sub_g, nested, adapted))
}

/// S/X in the coordinates of A/X, with the induced adapted basis.
pub fn nested_quotient(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    s: &NestedSet,
    beta: &AdaptedBasis,
    x: &Flat,
) -> Result<(IntersectionLattice, BuildingSet, NestedSet, AdaptedBasis), Error> {
    let (sub_lattice, sub_g) = crate::lattice::building_quotient(lattice, g, x)?;
    let r = lattice.arrangement.restriction(x)?;
    let mut pairs: Vec<(Flat, usize)> = Vec::new();
    for (i, y) in s.flats().iter().enumerate() {
        if !x.contains_flat(y) {
            let image = r.map_flat(y);
            let source_h = beta.assignment[i];
            let image_h = r.class_of[source_h]
                .ok_or_else(|| Error::Internal("adapted hyperplane collapses into X".into()))?;
            pairs.push((image, image_h));
        }
    }
    pairs.sort_by_key(|a| a.0.sort_key());
    let mut flats = Vec::new();
    let mut assignment = Vec::new();
    for (f, h) in pairs {
        flats.push(f);
        assignment.push(h);
    }
    let nested = NestedSet { flats };
    let adapted = AdaptedBasis { assignment };
    let expect = lattice.arrangement.dim - x.dim();
    if nested.len() != expect || !is_nested(nested.flats(), &sub_g) {
        return Err(Error::Internal("quotient nested set is not maximal nested".into()));
    }
    if !is_adapted(&r.arrangement, &nested, &adapted) {
        return Err(Error::Internal("induced basis on S/X is not adapted".into()));
    }
    Ok((sub_lattice, sub_g, nested, adapted))
}
