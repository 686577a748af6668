//! Modular and G-modular flats, "enough" tests with witnesses, modular
//! complements, the restriction↔quotient isomorphism, and supersolvability.

use serde::Serialize;

use crate::arrangement::{builtin, Flat};
use crate::error::Error;
use crate::lattice::{
    building_quotient, building_restrict, cone_building, BuildingSet,
    IntersectionLattice,
};
use crate::matrix::{Matrix, Row};

/// Witness against modularity: a flat Y with X ∩ Y ∉ L(A).
#[derive(Clone, Debug, Serialize)]
pub struct ModularityWitness {
    pub flat: Flat,
    pub other: Flat,
    pub intersection: Flat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModularityReport {
    /// Modular flats grouped by codimension (index 0 = codim 0).
    pub modular_by_codim: Vec<Vec<Flat>>,
    pub g_modular: Vec<Flat>,
    pub has_enough_modular: bool,
    pub has_enough_g_modular: bool,
    pub supersolvable_chain: Option<Vec<Flat>>,
    /// Hyperplanes contained in every codim-1 modular flat.
    pub failing_hyperplanes: Vec<usize>,
    pub witnesses: Vec<ModularityWitness>,
}

/// X is modular iff X ∩ Y ∈ L(A) for every flat Y. On failure the first
/// witness in canonical order is returned.
pub fn is_modular(
    lattice: &IntersectionLattice,
    x: &Flat,
) -> Result<(bool, Option<ModularityWitness>), Error> {
    lattice.require(x)?;
    for y in &lattice.flats {
        let meet = x.intersect(y);
        if lattice.index_of(&meet).is_none() {
            return Ok((
                false,
                Some(ModularityWitness { flat: x.clone(), other: y.clone(), intersection: meet }),
            ));
        }
    }
    Ok((true, None))
}

/// Confirm a specific witness pair: X ∩ Y must be outside L(A) and equal to
/// the expected flat.
pub fn confirm_witness(
    lattice: &IntersectionLattice,
    x: &Flat,
    y: &Flat,
    expected: &Flat,
) -> Result<bool, Error> {
    lattice.require(x)?;
    lattice.require(y)?;
    let meet = x.intersect(y);
    Ok(meet == *expected && lattice.index_of(&meet).is_none())
}

pub fn modular_flats(lattice: &IntersectionLattice) -> Result<Vec<Flat>, Error> {
    let mut out = Vec::new();
    for f in &lattice.flats {
        if is_modular(lattice, f)?.0 {
            out.push(f.clone());
        }
    }
    Ok(out)
}

/// M ∈ G is G-modular when it is modular and X ∩ M ∈ G ∪ {0} for all X ∈ G.
pub fn is_g_modular(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    m: &Flat,
) -> Result<bool, Error> {
    if !g.contains(m) {
        return Ok(false);
    }
    if !is_modular(lattice, m)?.0 {
        return Ok(false);
    }
    for x in g.flats() {
        let meet = x.intersect(m);
        if !meet.is_zero() && !g.contains(&meet) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn g_modular_flats(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
) -> Result<Vec<Flat>, Error> {
    let mut out = Vec::new();
    for f in g.flats() {
        if is_g_modular(lattice, g, f)? {
            out.push(f.clone());
        }
    }
    Ok(out)
}

/// Codimension-1 G-modular flats. For the degenerate ambient dimension 1 the
/// zero flat (always modular) is the sole codim-1 subspace and is admitted.
fn codim1_g_modular(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
) -> Result<Vec<Flat>, Error> {
    let dim = lattice.arrangement.dim;
    if dim == 1 {
        return Ok(vec![Flat::zero(1)]);
    }
    Ok(g_modular_flats(lattice, g)?.into_iter().filter(|f| f.dim() == dim - 1).collect())
}

fn codim1_modular(lattice: &IntersectionLattice) -> Result<Vec<Flat>, Error> {
    let dim = lattice.arrangement.dim;
    if dim == 1 {
        return Ok(vec![Flat::zero(1)]);
    }
    Ok(modular_flats(lattice)?.into_iter().filter(|f| f.dim() == dim - 1).collect())
}

/// Every hyperplane must be avoided by some codim-1 modular flat.
/// Equivalently: no hyperplane lies inside the intersection of all of them.
pub fn has_enough_modular(lattice: &IntersectionLattice) -> Result<bool, Error> {
    enough_from_candidates(lattice, &codim1_modular(lattice)?)
}

pub fn has_enough_g_modular(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
) -> Result<bool, Error> {
    enough_from_candidates(lattice, &codim1_g_modular(lattice, g)?)
}

fn enough_from_candidates(
    lattice: &IntersectionLattice,
    candidates: &[Flat],
) -> Result<bool, Error> {
    let arr = &lattice.arrangement;
    for h in 0..arr.len() {
        let hv = &arr.hyperplanes[h];
        if !candidates.iter().any(|m| !m.contains_vector(hv)) {
            return Ok(false);
        }
    }
    Ok(!candidates.is_empty() || arr.is_empty())
}

/// Hyperplanes contained in every codim-1 modular flat (the obstruction list).
pub fn failing_hyperplanes(lattice: &IntersectionLattice) -> Result<Vec<usize>, Error> {
    let candidates = codim1_modular(lattice)?;
    let arr = &lattice.arrangement;
    Ok((0..arr.len())
        .filter(|&h| candidates.iter().all(|m| m.contains_vector(&arr.hyperplanes[h])))
        .collect())
}

/// A G-modular complement M with V* = X ⊕ M, built by the inductive
/// intersection of codim-1 G-modular flats. Ties are broken by the
/// lexicographically smallest canonical matrix.
pub fn modular_complement(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    x: &Flat,
) -> Result<Flat, Error> {
    if !has_enough_g_modular(lattice, g)? {
        return Err(Error::NotEnoughGModular);
    }
    lattice.require(x)?;
    let dim = lattice.arrangement.dim;
    if x.is_zero() {
        return Ok(Flat::full(dim));
    }
    if x.dim() == dim {
        return Ok(Flat::zero(dim));
    }
    let arr = &lattice.arrangement;
    // Greedy line decomposition of X by hyperplane index.
    let mut lines: Vec<usize> = Vec::new();
    let mut span = Flat::zero(dim);
    for h in 0..arr.len() {
        if x.contains_vector(&arr.hyperplanes[h]) {
            let bigger = span.sum(&arr.hyperplane_flat(h));
            if bigger.dim() > span.dim() {
                span = bigger;
                lines.push(h);
                if span.dim() == x.dim() {
                    break;
                }
            }
        }
    }
    if span != *x {
        return Err(Error::FlatNotInLattice);
    }
    let candidates = codim1_g_modular(lattice, g)?;
    let pick_avoiding = |line: &Row| -> Result<Flat, Error> {
        candidates
            .iter()
            .filter(|m| !m.contains_vector(line))
            .min_by(|a, b| a.sort_key().cmp(&b.sort_key()))
            .cloned()
            .ok_or(Error::NoComplement)
    };
    // Base: a codim-1 G-modular flat avoiding the first line.
    let mut m = pick_avoiding(&arr.hyperplanes[lines[0]])?;
    let mut current = arr.hyperplane_flat(lines[0]);
    for &h in &lines[1..] {
        current = current.sum(&arr.hyperplane_flat(h));
        // The line L = X_partial ∩ M is a hyperplane of A; intersect M with a
        // codim-1 G-modular flat avoiding it.
        let line_flat = current.intersect(&m);
        if line_flat.dim() != 1 {
            return Err(Error::NoComplement);
        }
        let line = line_flat.basis().rows[0].clone();
        let n = pick_avoiding(&line)?;
        m = m.intersect(&n);
    }
    // Postconditions: G-modular complement.
    if m.dim() + x.dim() != dim || !x.intersect(&m).is_zero() {
        return Err(Error::NoComplement);
    }
    if !m.is_zero() && !is_g_modular(lattice, g, &m)? {
        return Err(Error::NoComplement);
    }
    Ok(m)
}

/// The arrangement isomorphism (X^⊥, A/X) ≅ (V/M^⊥, A|_M) realized as an
/// explicit matrix from V*/X-coordinates into M, together with the lattice
/// bijection (Y+X)/X ↦ (Y+X) ∩ M.
pub struct RestrictionQuotientIso {
    /// Rows: image in V* of each complement coordinate of V*/X.
    pub map: Matrix,
    /// Pairs (flat of L(A/X), corresponding flat of L(A|_M)).
    pub flat_pairs: Vec<(Flat, Flat)>,
}

pub fn restriction_quotient_iso(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    x: &Flat,
    m: &Flat,
) -> Result<RestrictionQuotientIso, Error> {
    let dim = lattice.arrangement.dim;
    if x.dim() + m.dim() != dim || !x.intersect(m).is_zero() {
        return Err(Error::NotAComplement);
    }
    if x.dim() == dim {
        // X = V*, M = 0: both sides are the empty arrangement.
        return Ok(RestrictionQuotientIso {
            map: crate::matrix::Matrix::zero_rows(dim),
            flat_pairs: vec![(Flat::zero(0), Flat::zero(0))],
        });
    }
    let r = lattice.arrangement.restriction(x)?;
    let q = lattice.arrangement.quotient(m)?;
    // For each complement coordinate e_c of V*/X, the unique m-part of
    // e_c = x + m with x ∈ X, m ∈ M.
    let mut stacked_rows = x.basis().rows.clone();
    stacked_rows.extend(m.basis().rows.iter().cloned());
    let stacked = Matrix::new(stacked_rows, dim);
    let mut map_rows = Vec::with_capacity(r.complement.len());
    for &c in &r.complement {
        let mut e = crate::matrix::zero_row(dim);
        e[c] = crate::field::FieldElement::one();
        let coords = stacked.express_in_rows(&e).ok_or(Error::NotAComplement)?;
        let mut mv = crate::matrix::zero_row(dim);
        for (k, coeff) in coords[x.dim()..].iter().enumerate() {
            if !coeff.is_zero() {
                let scaled = crate::matrix::scale_row(&m.basis().rows[k], coeff);
                mv = crate::matrix::add_rows(&mv, &scaled);
            }
        }
        map_rows.push(mv);
    }
    let map = Matrix::new(map_rows, dim);

    // Transport a flat of L(A/X) (complement coordinates) into V* and then
    // into M-coordinates of A|_M.
    let transport = |z: &Flat| -> Flat {
        let rows: Vec<Row> = z
            .basis()
            .rows
            .iter()
            .map(|zr| {
                let mut v = crate::matrix::zero_row(dim);
                for (j, coeff) in zr.iter().enumerate() {
                    if !coeff.is_zero() {
                        let scaled = crate::matrix::scale_row(&map.rows[j], coeff);
                        v = crate::matrix::add_rows(&v, &scaled);
                    }
                }
                v
            })
            .collect();
        let in_vstar = Flat::from_rows(rows, dim);
        q.map_flat(&in_vstar)
    };

    // Hyperplane counts must match.
    if r.arrangement.len() != q.arrangement.len() {
        return Err(Error::NotAComplement);
    }
    let quot_lattice = IntersectionLattice::build(&r.arrangement);
    let m_lattice = IntersectionLattice::build(&q.arrangement);
    let mut flat_pairs = Vec::with_capacity(quot_lattice.len());
    let mut seen = std::collections::HashSet::new();
    for z in &quot_lattice.flats {
        let image = transport(z);
        if m_lattice.index_of(&image).is_none() || !seen.insert(image.clone()) {
            return Err(Error::Internal("lattice bijection failed".into()));
        }
        flat_pairs.push((z.clone(), image));
    }
    if flat_pairs.len() != m_lattice.len() {
        return Err(Error::Internal("lattice bijection is not onto".into()));
    }
    // Order preservation both ways.
    for (z1, w1) in &flat_pairs {
        for (z2, w2) in &flat_pairs {
            if z1.contains_flat(z2) != w1.contains_flat(w2) {
                return Err(Error::Internal("lattice bijection is not a poset map".into()));
            }
        }
    }
    // The building set G/X must map onto G|_M. At X = 0 both sides are G
    // itself, transported through the (identity) coordinate changes.
    let gq = if x.is_zero() {
        BuildingSet::from_flats(g.flats().iter().map(|f| r.map_flat(f)).collect())
    } else {
        building_quotient(lattice, g, x)?.1
    };
    let gm = if m.dim() == dim {
        BuildingSet::from_flats(g.flats().iter().map(|f| q.map_flat(f)).collect())
    } else {
        building_restrict(lattice, g, m)?.1
    };
    let image: Vec<Flat> = flat_pairs
        .iter()
        .filter(|(z, _)| gq.contains(z))
        .map(|(_, w)| w.clone())
        .collect();
    if BuildingSet::from_flats(image) != gm {
        return Err(Error::Internal("G/X does not map onto G|_M".into()));
    }
    Ok(RestrictionQuotientIso { map, flat_pairs })
}

/// Witness chain for supersolvability: a maximal chain of modular flats with
/// dimension steps of one.
pub fn is_supersolvable(lattice: &IntersectionLattice) -> Result<Option<Vec<Flat>>, Error> {
    let dim = lattice.arrangement.dim;
    let modular = modular_flats(lattice)?;
    // Backtracking from the zero flat upward.
    fn extend(modular: &[Flat], chain: &mut Vec<Flat>, dim: usize) -> bool {
        let last = chain.last().unwrap().clone();
        if last.dim() == dim {
            return true;
        }
        let want = last.dim() + 1;
        for f in modular {
            if f.dim() == want && f.contains_flat(&last) {
                chain.push(f.clone());
                if extend(modular, chain, dim) {
                    return true;
                }
                chain.pop();
            }
        }
        false
    }
    let mut chain = vec![Flat::zero(dim)];
    if extend(&modular, &mut chain, dim) {
        Ok(Some(chain))
    } else {
        Ok(None)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PreservationCase {
    pub case: String,
    pub pass: bool,
}

/// Checks that "enough G-modular elements" survives quotients and
/// restrictions at every member of G, direct sums with a catalog arrangement,
/// and the cone with its extended building set.
pub fn preservation_suite(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
) -> Result<Vec<PreservationCase>, Error> {
    if !has_enough_g_modular(lattice, g)? {
        return Err(Error::NotEnoughGModular);
    }
    let mut cases = Vec::new();
    for (i, x) in g.flats().iter().enumerate() {
        let (sub, gr) = building_restrict(lattice, g, x)?;
        cases.push(PreservationCase {
            case: format!("quotient at G[{}] (dim {})", i, x.dim()),
            pass: has_enough_g_modular(&sub, &gr)?,
        });
        let (sub, gq) = building_quotient(lattice, g, x)?;
        if !sub.arrangement.is_empty() {
            cases.push(PreservationCase {
                case: format!("restriction at G[{}] (dim {})", i, x.dim()),
                pass: has_enough_g_modular(&sub, &gq)?,
            });
        }
    }
    // Direct sum with a small catalog partner; the sum statement concerns
    // plain modular elements.
    let partner = builtin("monomial", &[1, 1]).expect("catalog arrangement");
    if let Ok(sum) = lattice.arrangement.direct_sum(&partner) {
        let sum_lattice = IntersectionLattice::build(&sum);
        cases.push(PreservationCase {
            case: "direct sum with monomial(1,1)".into(),
            pass: has_enough_modular(&sum_lattice)?,
        });
    }
    let (cone_lattice, cone_g) = cone_building(lattice, g)?;
    cases.push(PreservationCase {
        case: "cone with extended building set".into(),
        pass: has_enough_g_modular(&cone_lattice, &cone_g)?,
    });
    Ok(cases)
}

/// The full report emitted by the CLI.
pub fn modularity_report(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
) -> Result<ModularityReport, Error> {
    let dim = lattice.arrangement.dim;
    let mut modular_by_codim = vec![Vec::new(); dim + 1];
    let mut witnesses = Vec::new();
    for f in &lattice.flats {
        let (ok, witness) = is_modular(lattice, f)?;
        if ok {
            modular_by_codim[dim - f.dim()].push(f.clone());
        } else if let Some(w) = witness {
            witnesses.push(w);
        }
    }
    Ok(ModularityReport {
        modular_by_codim,
        g_modular: g_modular_flats(lattice, g)?,
        has_enough_modular: has_enough_modular(lattice)?,
        has_enough_g_modular: has_enough_g_modular(lattice, g)?,
        supersolvable_chain: is_supersolvable(lattice)?,
        failing_hyperplanes: failing_hyperplanes(lattice)?,
        witnesses,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::{builtin, Arrangement};
    use crate::field::{FieldDesc, FieldElement};
    use crate::lattice::minimal_building;

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
    fn zero_top_and_lines_are_modular() {
        let a = builtin("ex_ss_not_enough", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        assert!(is_modular(&l, &Flat::zero(3)).unwrap().0);
        assert!(is_modular(&l, l.top()).unwrap().0);
        for i in 0..a.len() {
            assert!(is_modular(&l, &a.hyperplane_flat(i)).unwrap().0);
        }
    }

    #[test]
    fn ss_not_enough_witnesses() {
        let a = builtin("ex_ss_not_enough", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        // ⟨x1,x2⟩ ∩ ⟨x3, x1+x2−x3⟩ = ⟨x1+x2⟩ ∉ L(A).
        let x12 = flat(vec![vec![1, 0, 0], vec![0, 1, 0]], 3);
        let other = flat(vec![vec![0, 0, 1], vec![1, 1, -1]], 3);
        let expected = flat(vec![vec![1, 1, 0]], 3);
        assert!(confirm_witness(&l, &x12, &other, &expected).unwrap());
        assert!(!is_modular(&l, &x12).unwrap().0);
        // ⟨x1,x3⟩ ∩ ⟨x2, x1+x2−x3⟩ = ⟨x1−x3⟩ ∉ L(A).
        let x13 = flat(vec![vec![1, 0, 0], vec![0, 0, 1]], 3);
        let other = flat(vec![vec![0, 1, 0], vec![1, 1, -1]], 3);
        let expected = flat(vec![vec![1, 0, -1]], 3);
        assert!(confirm_witness(&l, &x13, &other, &expected).unwrap());
    }

    #[test]
    fn ss_not_enough_codim1_modular_exactly_two() {
        let a = builtin("ex_ss_not_enough", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let codim1: Vec<Flat> = modular_flats(&l)
            .unwrap()
            .into_iter()
            .filter(|f| f.dim() == 2)
            .collect();
        let m1 = flat(vec![vec![0, 1, 0], vec![0, 0, 1]], 3);
        let m2 = flat(vec![vec![1, 0, 0], vec![0, 1, -1]], 3); // ⟨x1, x1+x2−x3⟩
        assert_eq!(codim1.len(), 2);
        assert!(codim1.contains(&m1) && codim1.contains(&m2));
        assert!(!has_enough_modular(&l).unwrap());
        assert!(is_supersolvable(&l).unwrap().is_some());
    }

    #[test]
    fn only_one_modular_example() {
        let a = builtin("ex_only_one_modular", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let codim1: Vec<Flat> = modular_flats(&l)
            .unwrap()
            .into_iter()
            .filter(|f| f.dim() == 2)
            .collect();
        assert_eq!(codim1.len(), 1);
        assert_eq!(codim1[0], flat(vec![vec![0, 1, 0], vec![0, 0, 1]], 3));
    }

    #[test]
    fn not_supersolvable_example() {
        let a = Arrangement::new(
            3,
            vec![
                vec![fe(1), fe(0), fe(0)],
                vec![fe(0), fe(1), fe(0)],
                vec![fe(0), fe(0), fe(1)],
                vec![fe(1), fe(1), fe(-1)],
            ],
            FieldDesc::Rational,
        )
        .unwrap();
        let l = IntersectionLattice::build(&a);
        assert!(is_supersolvable(&l).unwrap().is_none());
    }

    #[test]
    fn enough_modular_implies_supersolvable() {
        for (name, params) in [("monomial", vec![1u32, 2]), ("monomial", vec![2, 1]), ("braid", vec![3])] {
            let a = builtin(name, &params).unwrap();
            let l = IntersectionLattice::build(&a);
            if has_enough_modular(&l).unwrap() {
                assert!(is_supersolvable(&l).unwrap().is_some(), "{name:?} {params:?}");
            }
        }
    }

    #[test]
    fn monomial_q2_codim1_modular_are_coordinate_planes() {
        // For q ≥ 2, the only codim-1 modular flats of the full monomial
        // arrangement are the coordinate planes ⟨x_i : i ≠ j⟩.
        let a = builtin("monomial", &[2, 2]).unwrap();
        let l = IntersectionLattice::build(&a);
        let codim1: Vec<Flat> =
            modular_flats(&l).unwrap().into_iter().filter(|f| f.dim() == 2).collect();
        assert_eq!(codim1.len(), 3);
        for j in 0..3 {
            let rows: Vec<Vec<FieldElement>> = (0..3)
                .filter(|&i| i != j)
                .map(|i| {
                    let mut v = vec![FieldElement::integer(0); 3];
                    v[i] = FieldElement::integer(1);
                    v
                })
                .collect();
            assert!(codim1.contains(&Flat::from_rows(rows, 3)), "missing plane without x{j}");
        }
    }

    #[test]
    fn monomial_has_enough_g_modular() {
        for params in [[1u32, 1], [1, 2], [2, 1]] {
            let a = builtin("monomial", &params).unwrap();
            let l = IntersectionLattice::build(&a);
            let f = minimal_building(&l);
            assert!(has_enough_g_modular(&l, &f).unwrap(), "monomial({},{})", params[0], params[1]);
        }
    }

    #[test]
    fn pred3_not_enough_g_modular() {
        let a = builtin("ex_pred3", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let f = minimal_building(&l);
        assert!(!has_enough_g_modular(&l, &f).unwrap());
        // Every codim-1 irreducible is modular but contains ⟨x4⟩.
        let x4 = flat(vec![vec![0, 0, 0, 1]], 4);
        for m in f.flats().iter().filter(|m| m.dim() == 3) {
            assert!(is_modular(&l, m).unwrap().0);
            assert!(m.contains_flat(&x4));
        }
    }

    #[test]
    fn g_modular_at_maximal_building_equals_modular() {
        let a = builtin("ex_ss_not_enough", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let all = crate::lattice::maximal_building(&l);
        let gm = g_modular_flats(&l, &all).unwrap();
        let m: Vec<Flat> =
            modular_flats(&l).unwrap().into_iter().filter(|f| !f.is_zero()).collect();
        assert_eq!(gm, m);
    }

    #[test]
    fn modular_intersections_stay_modular() {
        let a = builtin("ex_ss_not_enough", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let modular = modular_flats(&l).unwrap();
        for x in &modular {
            for y in &modular {
                let meet = x.intersect(y);
                assert!(l.index_of(&meet).is_some());
                assert!(is_modular(&l, &meet).unwrap().0);
            }
        }
    }

    #[test]
    fn g_modular_intersections_stay_g_modular() {
        let a = builtin("monomial", &[2, 1]).unwrap();
        let l = IntersectionLattice::build(&a);
        let f = minimal_building(&l);
        let gm = g_modular_flats(&l, &f).unwrap();
        for x in &gm {
            for y in &gm {
                let meet = x.intersect(y);
                if !meet.is_zero() {
                    assert!(f.contains(&meet));
                    assert!(is_g_modular(&l, &f, &meet).unwrap());
                }
            }
        }
    }

    #[test]
    fn modular_complement_monomial() {
        let a = builtin("monomial", &[1, 2]).unwrap();
        let l = IntersectionLattice::build(&a);
        let f = minimal_building(&l);
        let x1 = flat(vec![vec![1, 0]], 2);
        let m = modular_complement(&l, &f, &x1).unwrap();
        assert_eq!(m, flat(vec![vec![0, 1]], 2));
        assert!(is_g_modular(&l, &f, &m).unwrap());
        // Degenerate ends.
        assert_eq!(modular_complement(&l, &f, &Flat::zero(2)).unwrap(), Flat::full(2));
        assert_eq!(modular_complement(&l, &f, &Flat::full(2)).unwrap(), Flat::zero(2));
    }

    #[test]
    fn iso_maps_lattices() {
        let a = builtin("monomial", &[2, 1]).unwrap();
        let l = IntersectionLattice::build(&a);
        let f = minimal_building(&l);
        let x = flat(vec![vec![1, 0, 0]], 3);
        let m = modular_complement(&l, &f, &x).unwrap();
        let iso = restriction_quotient_iso(&l, &f, &x, &m).unwrap();
        // For Y ⊆ M, (Y+X) ∩ M = Y: the pair list restricted to images is onto.
        assert_eq!(iso.flat_pairs.len(), IntersectionLattice::build(&a.restriction(&x).unwrap().arrangement).len());
        // Identity case.
        let id = restriction_quotient_iso(&l, &f, &Flat::zero(3), &Flat::full(3)).unwrap();
        assert!(!id.flat_pairs.is_empty());
    }

    #[test]
    fn preservation_suite_monomial() {
        let a = builtin("monomial", &[1, 2]).unwrap();
        let l = IntersectionLattice::build(&a);
        let f = minimal_building(&l);
        let cases = preservation_suite(&l, &f).unwrap();
        assert!(!cases.is_empty());
        for c in &cases {
            assert!(c.pass, "{}", c.case);
        }
    }

    #[test]
    fn preservation_suite_monomial_rank_three() {
        // With G = F the cone case genuinely fails in rank ≥ 3: building-set
        // condition (2) forces the closure of the lifted set to contain
        // every lifted flat, after which only V* could be the codim-1 member
        // avoiding L*, and V* is G̃-modular only when G is maximal. All
        // restriction/quotient/sum cases still pass.
        let a = builtin("monomial", &[2, 1]).unwrap();
        let l = IntersectionLattice::build(&a);
        let f = minimal_building(&l);
        let cases = preservation_suite(&l, &f).unwrap();
        for c in &cases {
            if c.case.starts_with("cone") {
                assert!(!c.pass, "cone case unexpectedly passes for G = F");
            } else {
                assert!(c.pass, "{}", c.case);
            }
        }
        // With the maximal building set the cone preserves the property.
        let all = crate::lattice::maximal_building(&l);
        let cases = preservation_suite(&l, &all).unwrap();
        for c in &cases {
            assert!(c.pass, "{}", c.case);
        }
    }
}
