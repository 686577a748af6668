//! Intersection lattice L(A) (all sums of lines of A, plus 0), decompositions
//! and irreducible flats, and the building-set calculus on top of them.

use std::collections::{HashMap, HashSet};

use crate::arrangement::{Arrangement, Flat};
use crate::error::Error;

/// L(A) with covers and a join table. Flats are sorted by (dim, canonical
/// matrix), so index 0 is the zero subspace and indexing is deterministic.
#[derive(Clone, Debug)]
pub struct IntersectionLattice {
    pub arrangement: Arrangement,
    pub flats: Vec<Flat>,
    pub covers: Vec<(usize, usize)>,
    pub join: Vec<Vec<usize>>,
    index: HashMap<Flat, usize>,
}

impl IntersectionLattice {
    /// Closure of A ∪ {0} under pairwise join. Every sum of lines arises by
    /// repeatedly joining single hyperplanes, so saturating joins with lines
    /// is enough.
    pub fn build(arrangement: &Arrangement) -> IntersectionLattice {
        let mut seen: HashSet<Flat> = HashSet::new();
        let mut queue: Vec<Flat> = Vec::new();
        let zero = Flat::zero(arrangement.dim);
        seen.insert(zero.clone());
        queue.push(zero);
        for i in 0..arrangement.len() {
            let h = arrangement.hyperplane_flat(i);
            if seen.insert(h.clone()) {
                queue.push(h);
            }
        }
        let lines: Vec<Flat> = (0..arrangement.len()).map(|i| arrangement.hyperplane_flat(i)).collect();
        let mut cursor = 0;
        while cursor < queue.len() {
            let current = queue[cursor].clone();
            cursor += 1;
            for line in &lines {
                let sum = current.sum(line);
                if seen.insert(sum.clone()) {
                    queue.push(sum);
                }
            }
        }
        let mut flats: Vec<Flat> = seen.into_iter().collect();
        flats.sort_by_key(|a| a.sort_key());
        let index: HashMap<Flat, usize> =
            flats.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect();

        let n = flats.len();
        let mut contains = vec![vec![false; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i != j && flats[i].dim() < flats[j].dim() && flats[j].contains_flat(&flats[i]) {
                    contains[j][i] = true;
                }
            }
        }
        let mut covers = Vec::new();
        for i in 0..n {
            'outer: for j in 0..n {
                if contains[j][i] {
                    for k in 0..n {
                        if contains[k][i] && contains[j][k] {
                            continue 'outer;
                        }
                    }
                    covers.push((i, j));
                }
            }
        }
        let mut join = vec![vec![0usize; n]; n];
        for i in 0..n {
            for j in i..n {
                let s = flats[i].sum(&flats[j]);
                let k = index[&s];
                join[i][j] = k;
                join[j][i] = k;
            }
        }
        IntersectionLattice { arrangement: arrangement.clone(), flats, covers, join, index }
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn index_of(&self, f: &Flat) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn require(&self, f: &Flat) -> Result<usize, Error> {
        self.index_of(f).ok_or(Error::FlatNotInLattice)
    }

    pub fn zero_index(&self) -> usize {
        0
    }

    /// The top flat (V* when the arrangement is essential).
    pub fn top(&self) -> &Flat {
        self.flats.last().expect("lattice is nonempty")
    }

    pub fn sub_flats(&self, x: &Flat) -> Vec<usize> {
        (0..self.len()).filter(|&i| x.contains_flat(&self.flats[i])).collect()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &Flat> {
        self.flats.iter().filter(|f| !f.is_zero())
    }
}

/// Is `parts` a decomposition of X: X = ⊕ parts, and every sub-flat Y ⊆ X
/// splits as Y = ⊕ (Y ∩ part) inside L(A)?
pub fn is_decomposition(
    lattice: &IntersectionLattice,
    x: &Flat,
    parts: &[Flat],
) -> Result<bool, Error> {
    lattice.require(x)?;
    for p in parts {
        let i = lattice.require(p)?;
        if i == lattice.zero_index() {
            return Err(Error::BadParams("decomposition parts must be nonzero".into()));
        }
    }
    let total: usize = parts.iter().map(|p| p.dim()).sum();
    let mut sum = Flat::zero(x.ambient());
    for p in parts {
        sum = sum.sum(p);
    }
    if sum != *x || total != x.dim() {
        return Ok(false);
    }
    for y in &lattice.flats {
        if y.is_zero() || !x.contains_flat(y) {
            continue;
        }
        let mut dims = 0;
        for p in parts {
            let meet = y.intersect(p);
            if lattice.index_of(&meet).is_none() {
                return Ok(false);
            }
            dims += meet.dim();
        }
        if dims != y.dim() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The unique decomposition of X into irreducibles, computed as the finest
/// partition of the hyperplanes inside X whose spans are independent.
/// Minimal dependent groups are merged until the dimensions add up.
pub fn irreducible_decomposition(
    lattice: &IntersectionLattice,
    x: &Flat,
) -> Result<Vec<Flat>, Error> {
    let idx = lattice.require(x)?;
    if idx == lattice.zero_index() {
        return Err(Error::BadParams("the zero flat has no decomposition".into()));
    }
    let arr = &lattice.arrangement;
    let members = arr.hyperplanes_in(x);
    let mut parts: Vec<Vec<usize>> = members.iter().map(|&h| vec![h]).collect();
    let span_of = |group: &[usize]| -> Flat {
        Flat::from_rows(group.iter().map(|&h| arr.hyperplanes[h].clone()).collect(), arr.dim)
    };
    loop {
        let spans: Vec<Flat> = parts.iter().map(|g| span_of(g)).collect();
        let total: usize = spans.iter().map(|s| s.dim()).sum();
        if total == x.dim() {
            let mut out = spans;
            out.sort_by_key(|a| a.sort_key());
            debug_assert!(is_decomposition(lattice, x, &out).unwrap_or(false));
            return Ok(out);
        }
        // Find a minimal dependent sub-collection and merge it.
        let merge = find_minimal_dependent(&spans);
        let mut merged: Vec<usize> = Vec::new();
        let mut rest: Vec<Vec<usize>> = Vec::new();
        for (i, g) in parts.into_iter().enumerate() {
            if merge.contains(&i) {
                merged.extend(g);
            } else {
                rest.push(g);
            }
        }
        merged.sort_unstable();
        rest.push(merged);
        parts = rest;
    }
}

/// Smallest (by size, then lexicographic) set of indices whose spans fail to
/// be independent. Caller guarantees one exists.
fn find_minimal_dependent(spans: &[Flat]) -> Vec<usize> {
    let n = spans.len();
    for size in 2..=n {
        let mut combo: Vec<usize> = (0..size).collect();
        loop {
            let total: usize = combo.iter().map(|&i| spans[i].dim()).sum();
            let mut sum = Flat::zero(spans[0].ambient());
            for &i in &combo {
                sum = sum.sum(&spans[i]);
            }
            if sum.dim() < total {
                return combo;
            }
            // next combination
            let mut k = size;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                if combo[k] != k + n - size {
                    combo[k] += 1;
                    for j in k + 1..size {
                        combo[j] = combo[j - 1] + 1;
                    }
                    break;
                }
                if k == 0 {
                    combo.clear();
                    break;
                }
            }
            if combo.is_empty() {
                break;
            }
        }
    }
    unreachable!("a dependent sub-collection must exist")
}

pub fn is_irreducible(lattice: &IntersectionLattice, x: &Flat) -> Result<bool, Error> {
    Ok(irreducible_decomposition(lattice, x)?.len() == 1)
}

/// F(A): all irreducible flats, sorted canonically.
pub fn irreducibles(lattice: &IntersectionLattice) -> Vec<Flat> {
    lattice
        .nonzero()
        .filter(|f| is_irreducible(lattice, f).expect("lattice member"))
        .cloned()
        .collect()
}

/// A building set, stored as a canonical sorted list of flats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuildingSet {
    flats: Vec<Flat>,
}

impl BuildingSet {
    pub fn from_flats(mut flats: Vec<Flat>) -> BuildingSet {
        flats.sort_by_key(|a| a.sort_key());
        flats.dedup();
        BuildingSet { flats }
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
        self.flats.binary_search_by(|g| g.sort_key().cmp(&f.sort_key())).is_ok()
    }
}

/// The family of irreducibles, always a building set.
pub fn minimal_building(lattice: &IntersectionLattice) -> BuildingSet {
    BuildingSet::from_flats(irreducibles(lattice))
}

/// F(A) ∪ {V*}: the default building set for chart-level constructions,
/// which assume the full space is a member.
pub fn minimal_building_with_top(lattice: &IntersectionLattice) -> BuildingSet {
    let mut flats = irreducibles(lattice);
    flats.push(lattice.top().clone());
    BuildingSet::from_flats(flats)
}

/// L(A)∖{0}, the maximal building set.
pub fn maximal_building(lattice: &IntersectionLattice) -> BuildingSet {
    BuildingSet::from_flats(lattice.nonzero().cloned().collect())
}

/// Checks both defining conditions and the equivalent "direct sum of maximal
/// members" characterization; disagreement is an internal error.
pub fn is_building_set(lattice: &IntersectionLattice, g: &BuildingSet) -> Result<bool, Error> {
    for f in g.flats() {
        let i = lattice.require(f)?;
        if i == lattice.zero_index() {
            return Err(Error::BadParams("building sets exclude the zero flat".into()));
        }
    }
    let mut by_conditions = irreducibles(lattice).iter().all(|f| g.contains(f));
    if by_conditions {
        'pairs: for (i, x) in g.flats().iter().enumerate() {
            for y in &g.flats()[i + 1..] {
                let sum = x.sum(y);
                if lattice.index_of(&sum).is_some() && !g.contains(&sum)
                    && !is_decomposition(lattice, &sum, &[x.clone(), y.clone()])? {
                        by_conditions = false;
                        break 'pairs;
                    }
            }
        }
    }
    let by_maximal = building_by_maximal_elements(lattice, g)?;
    if by_conditions != by_maximal {
        return Err(Error::Internal(format!(
            "building-set characterizations disagree (conditions: {}, maximal-elements: {})",
            by_conditions, by_maximal
        )));
    }
    Ok(by_conditions)
}

/// Direct verification: every nonzero flat is the direct sum of the maximal
/// members of G it contains, and that sum is a decomposition.
pub fn building_by_maximal_elements(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
) -> Result<bool, Error> {
    for x in lattice.nonzero() {
        let parts = maximal_members_in(g, x);
        if parts.is_empty() {
            return Ok(false);
        }
        if !is_decomposition(lattice, x, &parts)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn maximal_members_in(g: &BuildingSet, x: &Flat) -> Vec<Flat> {
    let inside: Vec<&Flat> = g.flats().iter().filter(|f| x.contains_flat(f)).collect();
    inside
        .iter()
        .filter(|f| !inside.iter().any(|h| h != *f && h.contains_flat(f)))
        .map(|f| (*f).clone())
        .collect()
}

/// Maximal members of G contained in X; asserted to be a decomposition.
pub fn g_decomposition(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    x: &Flat,
) -> Result<Vec<Flat>, Error> {
    let i = lattice.require(x)?;
    if i == lattice.zero_index() {
        return Err(Error::BadParams("the zero flat has no decomposition".into()));
    }
    let parts = maximal_members_in(g, x);
    if !is_decomposition(lattice, x, &parts)? {
        return Err(Error::NotABuildingSet);
    }
    Ok(parts)
}

/// Smallest building set containing S, by closure: while some pair X, Y in
/// the set has X+Y outside it and {X, Y} is not a decomposition of X+Y, add
/// X+Y. Validated after the fixpoint.
pub fn minimal_building_set(
    lattice: &IntersectionLattice,
    seed: &[Flat],
) -> Result<BuildingSet, Error> {
    for f in seed {
        let i = lattice.require(f)?;
        if i == lattice.zero_index() {
            return Err(Error::BadParams("seed flats must be nonzero".into()));
        }
    }
    let mut current: Vec<Flat> = irreducibles(lattice);
    current.extend(seed.iter().cloned());
    current.sort_by_key(|a| a.sort_key());
    current.dedup();
    loop {
        let mut added = false;
        let snapshot = current.clone();
        for (i, x) in snapshot.iter().enumerate() {
            for y in &snapshot[i + 1..] {
                let sum = x.sum(y);
                if lattice.index_of(&sum).is_none() {
                    continue;
                }
                if current.contains(&sum) {
                    continue;
                }
                if !is_decomposition(lattice, &sum, &[x.clone(), y.clone()])? {
                    current.push(sum);
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
        current.sort_by_key(|a| a.sort_key());
        current.dedup();
    }
    let result = BuildingSet::from_flats(current);
    if !is_building_set(lattice, &result)? {
        return Err(Error::ClosureFailed);
    }
    Ok(result)
}

/// G|_X = {Y ∈ G : Y ⊆ X} as a building set for L(A|_X), in X-coordinates.
/// When G = F(A), the result is asserted to equal F(A|_X).
pub fn building_restrict(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    x: &Flat,
) -> Result<(IntersectionLattice, BuildingSet), Error> {
    if !g.contains(x) {
        return Err(Error::FlatNotInBuildingSet);
    }
    let q = lattice.arrangement.quotient(x)?;
    let flats: Vec<Flat> = g
        .flats()
        .iter()
        .filter(|y| x.contains_flat(y))
        .map(|y| q.map_flat(y))
        .collect();
    let sub = IntersectionLattice::build(&q.arrangement);
    let result = BuildingSet::from_flats(flats);
    if !is_building_set(&sub, &result)? {
        return Err(Error::Internal("restricted building set failed validation".into()));
    }
    if *g == minimal_building(lattice) && result != minimal_building(&sub) {
        return Err(Error::Internal("F(A)|_X differs from F(A|_X)".into()));
    }
    Ok((sub, result))
}

/// G/X = {(Y+X)/X : Y ∈ G} ∖ {0} as a building set for L(A/X).
pub fn building_quotient(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    x: &Flat,
) -> Result<(IntersectionLattice, BuildingSet), Error> {
    if !g.contains(x) {
        return Err(Error::FlatNotInBuildingSet);
    }
    let r = lattice.arrangement.restriction(x)?;
    let flats: Vec<Flat> = g
        .flats()
        .iter()
        .map(|y| r.map_flat(y))
        .filter(|f| !f.is_zero())
        .collect();
    let sub = IntersectionLattice::build(&r.arrangement);
    let result = BuildingSet::from_flats(flats);
    if !is_building_set(&sub, &result)? {
        return Err(Error::Internal("quotient building set failed validation".into()));
    }
    Ok((sub, result))
}

/// Extend a flat of A to the cone by appending a zero coordinate.
pub fn cone_flat(f: &Flat) -> Flat {
    let rows = f
        .basis()
        .rows
        .iter()
        .map(|r| {
            let mut v = r.clone();
            v.push(crate::field::FieldElement::zero());
            v
        })
        .collect();
    Flat::from_rows(rows, f.ambient() + 1)
}

/// G̃ = G ∪ {X + L* : X ∈ G} ∪ {L*} on the cone, and the cone's irreducibles
/// are asserted to be F(A) ∪ {L*}.
///
/// When G contains incomparable X, Y with X+Y ∉ G, the literal set above
/// fails condition (2) on the pair (X+L*, Y+L*), whose members overlap in
/// L* while X+Y+L* is missing. In that case the set is completed by the
/// building-set closure, so the result is always a validated building set
/// containing the literal one.
pub fn cone_building(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
) -> Result<(IntersectionLattice, BuildingSet), Error> {
    let cone = lattice.arrangement.cone();
    let lstar = lattice.arrangement.cone_line();
    let mut flats: Vec<Flat> = Vec::with_capacity(2 * g.len() + 1);
    for f in g.flats() {
        let lifted = cone_flat(f);
        flats.push(lifted.clone());
        flats.push(lifted.sum(&lstar));
    }
    flats.push(lstar.clone());
    let cone_lattice = IntersectionLattice::build(&cone);
    let mut result = BuildingSet::from_flats(flats);
    if !is_building_set(&cone_lattice, &result)? {
        result = minimal_building_set(&cone_lattice, result.flats())?;
    }
    let mut expect: Vec<Flat> = irreducibles(lattice).iter().map(cone_flat).collect();
    expect.push(lstar);
    if BuildingSet::from_flats(expect) != minimal_building(&cone_lattice) {
        return Err(Error::Internal("cone irreducibles differ from F(A) ∪ {L*}".into()));
    }
    Ok((cone_lattice, result))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::builtin;
    use crate::field::{FieldDesc, FieldElement};

    fn fe(n: i64) -> FieldElement {
        FieldElement::integer(n)
    }

    fn flat(rows: Vec<Vec<i64>>, ambient: usize) -> Flat {
        Flat::from_rows(
            rows.into_iter().map(|r| r.into_iter().map(fe).collect()).collect(),
            ambient,
        )
    }

    #[test]
    fn single_hyperplane_lattice() {
        let a = Arrangement::new(1, vec![vec![fe(1)]], FieldDesc::Rational).unwrap();
        let l = IntersectionLattice::build(&a);
        assert_eq!(l.len(), 2);
    }

    #[test]
    fn ex_irred_rank_two_irreducibles() {
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let xy = flat(vec![vec![1, 0, 0], vec![0, 1, 0]], 3);
        let xz = flat(vec![vec![1, 0, 0], vec![0, 0, 1]], 3);
        // Both planes hold three distinct lines of A.
        assert_eq!(a.hyperplanes_in(&xy).len(), 3);
        assert_eq!(a.hyperplanes_in(&xz).len(), 3);
        let irr = irreducibles(&l);
        let rank2: Vec<&Flat> = irr.iter().filter(|f| f.dim() == 2).collect();
        assert_eq!(rank2.len(), 2);
        assert!(rank2.contains(&&xy) && rank2.contains(&&xz));
        assert!(is_irreducible(&l, l.top()).unwrap());
    }

    #[test]
    fn every_hyperplane_is_irreducible() {
        let a = builtin("ex_pred3", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        for i in 0..a.len() {
            assert!(is_irreducible(&l, &a.hyperplane_flat(i)).unwrap());
        }
    }

    #[test]
    fn ex_pred3_irreducibles() {
        let a = builtin("ex_pred3", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let irr = irreducibles(&l);
        let dim2: Vec<&Flat> = irr.iter().filter(|f| f.dim() == 2).collect();
        let expect2 = [
            flat(vec![vec![1, 0, 0, 0], vec![0, 0, 0, 1]], 4),
            flat(vec![vec![0, 1, 0, 0], vec![0, 0, 0, 1]], 4),
            flat(vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]], 4),
        ];
        assert_eq!(dim2.len(), 3);
        for e in &expect2 {
            assert!(dim2.contains(&e));
        }
        let dim3: Vec<&Flat> = irr.iter().filter(|f| f.dim() == 3).collect();
        assert_eq!(dim3.len(), 3);
        for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let mut rows = vec![vec![0i64; 4]; 3];
            rows[0][i] = 1;
            rows[1][j] = 1;
            rows[2][3] = 1;
            assert!(dim3.contains(&&flat(rows, 4)));
        }
    }

    #[test]
    fn lattice_matches_subset_span_enumeration() {
        // Brute-force oracle: spans of all 2^|A| subsets.
        let a = builtin("ex_pred3", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let mut seen = std::collections::HashSet::new();
        for mask in 0u32..(1 << a.len()) {
            let rows: Vec<_> = (0..a.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| a.hyperplanes[i].clone())
                .collect();
            seen.insert(Flat::from_rows(rows, a.dim));
        }
        assert_eq!(seen.len(), l.len());
        for f in &seen {
            assert!(l.index_of(f).is_some());
        }
    }

    #[test]
    fn ex_irred_bad_decomposition() {
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let xy = flat(vec![vec![1, 0, 0], vec![0, 1, 0]], 3);
        let z = flat(vec![vec![0, 0, 1]], 3);
        // Intersecting with ⟨x+z⟩ breaks the splitting.
        assert!(!is_decomposition(&l, l.top(), &[xy, z]).unwrap());
    }

    #[test]
    fn singleton_is_a_decomposition() {
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        for f in l.nonzero() {
            assert!(is_decomposition(&l, f, std::slice::from_ref(f)).unwrap());
        }
    }

    #[test]
    fn two_coordinate_lines_decompose_plane() {
        let a = Arrangement::new(
            2,
            vec![vec![fe(1), fe(0)], vec![fe(0), fe(1)]],
            FieldDesc::Rational,
        )
        .unwrap();
        let l = IntersectionLattice::build(&a);
        let x = flat(vec![vec![1, 0]], 2);
        let y = flat(vec![vec![0, 1]], 2);
        assert!(is_decomposition(&l, l.top(), &[x, y]).unwrap());
    }

    #[test]
    fn f_and_l_are_building_sets() {
        for name in ["ex_irred", "ex_ss_not_enough", "ex_pred3"] {
            let a = builtin(name, &[]).unwrap();
            let l = IntersectionLattice::build(&a);
            assert!(is_building_set(&l, &minimal_building(&l)).unwrap(), "{name}");
            assert!(is_building_set(&l, &maximal_building(&l)).unwrap(), "{name}");
        }
    }

    #[test]
    fn dropping_an_irreducible_is_not_building() {
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let xy = flat(vec![vec![1, 0, 0], vec![0, 1, 0]], 3);
        let flats: Vec<Flat> =
            minimal_building(&l).flats().iter().filter(|f| **f != xy).cloned().collect();
        assert!(!is_building_set(&l, &BuildingSet::from_flats(flats)).unwrap());
    }

    #[test]
    fn g_decomposition_examples() {
        let a = builtin("ex_pred3", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let f = minimal_building(&l);
        // X ∈ G decomposes as itself.
        for x in f.flats().iter().take(4) {
            assert_eq!(g_decomposition(&l, &f, x).unwrap(), vec![x.clone()]);
        }
        // ⟨x1,x2⟩ contains no dim-2 irreducible.
        let x12 = flat(vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]], 4);
        let parts = g_decomposition(&l, &f, &x12).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.dim() == 1));

        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let f = minimal_building(&l);
        let yz = flat(vec![vec![0, 1, 0], vec![0, 0, 1]], 3);
        let parts = g_decomposition(&l, &f, &yz).unwrap();
        assert_eq!(
            parts,
            vec![flat(vec![vec![0, 0, 1]], 3), flat(vec![vec![0, 1, 0]], 3)]
        );
    }

    #[test]
    fn minimal_building_set_closure() {
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        // Empty seed gives F(A).
        assert_eq!(minimal_building_set(&l, &[]).unwrap(), minimal_building(&l));
        // Full seed gives L(A)∖{0}.
        let all: Vec<Flat> = l.nonzero().cloned().collect();
        assert_eq!(minimal_building_set(&l, &all).unwrap(), maximal_building(&l));
        // Seeding ⟨y,z⟩: validated closure.
        let yz = flat(vec![vec![0, 1, 0], vec![0, 0, 1]], 3);
        let closed = minimal_building_set(&l, std::slice::from_ref(&yz)).unwrap();
        assert!(closed.contains(&yz));
        assert!(is_building_set(&l, &closed).unwrap());
    }

    #[test]
    fn minimal_building_set_is_minimal_by_brute_force() {
        // Every building set contains F(A), so it suffices to enumerate the
        // subsets of L(A)∖{0} lying between F(A) ∪ seed and L(A)∖{0}, and
        // intersect the building ones.
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let yz = flat(vec![vec![0, 1, 0], vec![0, 0, 1]], 3);
        let closed = minimal_building_set(&l, std::slice::from_ref(&yz)).unwrap();
        let mut mandatory = irreducibles(&l);
        mandatory.push(yz.clone());
        let mandatory = BuildingSet::from_flats(mandatory);
        let optional: Vec<Flat> =
            l.nonzero().filter(|f| !mandatory.contains(f)).cloned().collect();
        let n = optional.len();
        assert!(n <= 8, "brute force only at desk scale");
        let mut meet: Option<Vec<Flat>> = None;
        for mask in 0u32..(1 << n) {
            let mut subset: Vec<Flat> = mandatory.flats().to_vec();
            subset.extend((0..n).filter(|i| mask & (1 << i) != 0).map(|i| optional[i].clone()));
            let bs = BuildingSet::from_flats(subset);
            if is_building_set(&l, &bs).unwrap() {
                meet = Some(match meet {
                    None => bs.flats().to_vec(),
                    Some(prev) => {
                        prev.into_iter().filter(|f| bs.contains(f)).collect()
                    }
                });
            }
        }
        assert_eq!(BuildingSet::from_flats(meet.unwrap()), closed);
    }

    #[test]
    fn restrict_and_quotient_building_sets() {
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let f = minimal_building(&l);
        let x = a.hyperplane_flat(0); // ⟨x⟩
        // G/⟨x⟩ is the whole quotient lattice while F(A/⟨x⟩) is smaller.
        let (sub, gq) = building_quotient(&l, &f, &x).unwrap();
        assert_eq!(gq, maximal_building(&sub));
        assert!(minimal_building(&sub).len() < gq.len());
        // G|_{V*} = G (up to the coordinate change, which is trivial here).
        let (_, gr) = building_restrict(&l, &f, l.top()).unwrap();
        assert_eq!(gr.len(), f.len());
        // G|_H for a hyperplane is {H}.
        let (_, gh) = building_restrict(&l, &f, &x).unwrap();
        assert_eq!(gh.len(), 1);
    }

    #[test]
    fn cone_building_set() {
        // Dimension-2 arrangement: the literal lifted set validates as is,
        // with no collisions, so |G̃| = 2|G| + 1.
        let a = builtin("monomial", &[1, 2]).unwrap();
        let l = IntersectionLattice::build(&a);
        let g = minimal_building(&l);
        let (cl, gt) = cone_building(&l, &g).unwrap();
        assert_eq!(gt.len(), 2 * g.len() + 1);
        assert!(is_building_set(&cl, &gt).unwrap());

        let one = Arrangement::new(1, vec![vec![fe(1)]], FieldDesc::Rational).unwrap();
        let l1 = IntersectionLattice::build(&one);
        let g1 = minimal_building(&l1);
        let (_, gt1) = cone_building(&l1, &g1).unwrap();
        assert_eq!(gt1.len(), 3); // H, L*, H+L*
    }

    #[test]
    fn cone_building_closes_when_literal_set_is_not_building() {
        // F(ex_irred) has incomparable ⟨y⟩, ⟨z⟩ with ⟨y,z⟩ ∉ F; the lifted
        // pair (⟨y⟩+L*, ⟨z⟩+L*) overlaps in L*, so the literal set needs
        // closure. The result still contains it and validates.
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let g = minimal_building(&l);
        let (cl, gt) = cone_building(&l, &g).unwrap();
        assert!(gt.len() > 2 * g.len() + 1);
        assert!(is_building_set(&cl, &gt).unwrap());
        for f in g.flats() {
            let lifted = cone_flat(f);
            assert!(gt.contains(&lifted));
            assert!(gt.contains(&lifted.sum(&a.cone_line())));
        }
        // The cone's irreducibles are F(A) ∪ {L*} either way.
        let mut expect: Vec<Flat> = irreducibles(&l).iter().map(cone_flat).collect();
        expect.push(a.cone_line());
        assert_eq!(BuildingSet::from_flats(expect), minimal_building(&cl));
    }

    #[test]
    fn intersection_of_building_sets_is_building() {
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let yz = flat(vec![vec![0, 1, 0], vec![0, 0, 1]], 3);
        let zxplusy = flat(vec![vec![0, 0, 1], vec![1, 1, 0]], 3);
        let g1 = minimal_building_set(&l, &[yz]).unwrap();
        let g2 = minimal_building_set(&l, &[zxplusy]).unwrap();
        let meet: Vec<Flat> =
            g1.flats().iter().filter(|f| g2.contains(f)).cloned().collect();
        assert!(is_building_set(&l, &BuildingSet::from_flats(meet)).unwrap());
    }
}
