//! The reduced bar complex B(V,A) and its interaction with the holonomy
//! algebra: two independent constructions of B_n (contraction kernels against
//! the degree-2 cohomology, and annihilators of the holonomy relations),
//! shuffle/deconcatenation/antipode, the connection form Ω in chart
//! coordinates, the boundary embeddings i₁/i₂ with left inverse j, truncated
//! holonomy solutions, and one-dimensional primitives.
//!
//! Bar elements are stored over words in the letters ω_H for H ≠ H₀, where
//! H₀ is the hyperplane at infinity (ω_{H₀} = 0).

use std::collections::HashMap;

use crate::arrangement::Flat;
use crate::charts::{BoundaryRestriction, Chart};
use crate::error::Error;
use crate::field::FieldElement;
use crate::holonomy::{
    add_vec, is_zero_vec, relation_generators, scale_vec, sub_vec, HolonomySystem, WordSpace,
};
use crate::lattice::IntersectionLattice;
use crate::matrix::Matrix;
use crate::nested::successor;
use crate::poly::{Poly, RationalFunction};

/// Degree-2 cohomology of the projective complement, presented inside the
/// degree-2 Orlik–Solomon algebra of the affine complement: Λ²(k^A) modulo
/// the Arnold relations e_H∧e_K − e_H∧e_L + e_K∧e_L for triples inside a
/// rank-2 flat.
struct Os2 {
    m: usize,
    /// Echelonized relation rows over pair indices (i < j).
    rows: std::collections::BTreeMap<usize, Vec<(usize, FieldElement)>>,
    npairs: usize,
}

fn pair_index(m: usize, i: usize, j: usize) -> (usize, bool) {
    // Index of e_i ∧ e_j with i<j canonical; bool flags a sign flip.
    debug_assert!(i != j);
    if i < j {
        (i * m + j, false)
    } else {
        (j * m + i, true)
    }
}

impl Os2 {
    fn build(lattice: &IntersectionLattice) -> Os2 {
        let arr = &lattice.arrangement;
        let m = arr.len();
        let mut gens: Vec<Vec<(usize, FieldElement)>> = Vec::new();
        for x in lattice.flats.iter().filter(|f| f.dim() == 2) {
            let members = arr.hyperplanes_in(x);
            for a in 0..members.len() {
                for b in a + 1..members.len() {
                    for c in b + 1..members.len() {
                        let (h, k, l) = (members[a], members[b], members[c]);
                        let mut row = Vec::new();
                        let (hk, _) = pair_index(m, h, k);
                        let (hl, _) = pair_index(m, h, l);
                        let (kl, _) = pair_index(m, k, l);
                        row.push((hk, FieldElement::one()));
                        row.push((hl, FieldElement::integer(-1)));
                        row.push((kl, FieldElement::one()));
                        row.sort_by_key(|(i, _)| *i);
                        gens.push(row);
                    }
                }
            }
        }
        let rows = crate::holonomy::eliminate_rows(gens);
        Os2 { m, rows, npairs: m * m }
    }

    /// Reduce a Λ² vector (over pair indices) modulo the Arnold relations.
    fn reduce(&self, mut v: Vec<FieldElement>) -> Vec<FieldElement> {
        for (&pivot, row) in &self.rows {
            if !v[pivot].is_zero() {
                let c = v[pivot].clone();
                v[pivot] = FieldElement::zero();
                for (idx, coeff) in row {
                    let t = c.mul(coeff).unwrap();
                    v[*idx] = v[*idx].sub(&t).unwrap();
                }
            }
        }
        v
    }

    /// Wedge of two H¹(Y) classes given over bar letters (ω_H − ω_{H₀}
    /// lifted implicitly), reduced into OS² coordinates.
    fn wedge(&self, letters: &[usize], h0: usize, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::zero(); self.npairs];
        let mut add = |i: usize, j: usize, c: FieldElement| {
            if i == j || c.is_zero() {
                return;
            }
            let (idx, flip) = pair_index(self.m, i, j);
            let c = if flip { c.neg() } else { c };
            v[idx] = v[idx].add(&c).unwrap();
        };
        for (ai, ac) in a.iter().enumerate() {
            if ac.is_zero() {
                continue;
            }
            for (bi, bc) in b.iter().enumerate() {
                if bc.is_zero() {
                    continue;
                }
                let c = ac.mul(bc).unwrap();
                let (ha, hb) = (letters[ai], letters[bi]);
                // (e_ha − e_h0) ∧ (e_hb − e_h0)
                add(ha, hb, c.clone());
                add(ha, h0, c.neg());
                add(h0, hb, c.neg());
            }
        }
        self.reduce(v)
    }
}

/// B_n bases for one arrangement, with the matching dual bases in A_n.
pub struct BarDegree {
    pub n: usize,
    /// Basis vectors of B_n over bar words (reduced echelon rows).
    pub basis: Vec<Vec<FieldElement>>,
    /// Dual-basis coordinates in A_n, aligned with `basis`.
    pub dual: Vec<Vec<FieldElement>>,
}

pub struct BarSystem<'a> {
    pub lattice: &'a IntersectionLattice,
    pub system: &'a HolonomySystem,
    /// Hyperplane at infinity.
    pub h0: usize,
    /// Bar letters: hyperplane indices ≠ h0, in order.
    pub letters: Vec<usize>,
    os2: Os2,
    pub degrees: Vec<BarDegree>,
    /// Per weight: (contraction-kernel dimension, relation-annihilator
    /// dimension) before the two routes are identified.
    pub route_dims: Vec<(usize, usize)>,
}

impl<'a> BarSystem<'a> {
    pub fn build(
        lattice: &'a IntersectionLattice,
        system: &'a HolonomySystem,
        h0: usize,
        max_n: usize,
    ) -> Result<BarSystem<'a>, Error> {
        let arr = &lattice.arrangement;
        let letters: Vec<usize> = (0..arr.len()).filter(|&h| h != h0).collect();
        let os2 = Os2::build(lattice);
        let mut bar = BarSystem {
            lattice,
            system,
            h0,
            letters,
            os2,
            degrees: Vec::new(),
            route_dims: Vec::new(),
        };
        for n in 0..=max_n {
            let kernel = bar.kernel_basis(n);
            let dual = bar.dual_basis(n)?;
            // The two routes must span the same subspace.
            let mut mk = Matrix::new(kernel.clone(), bar.word_space(n).size());
            let mut md = Matrix::new(dual.clone(), bar.word_space(n).size());
            mk.rref();
            md.rref();
            bar.route_dims.push((mk.nrows(), md.nrows()));
            if mk != md {
                return Err(Error::Internal(format!(
                    "bar complex routes disagree at weight {} (kernel {}, dual {})",
                    n,
                    mk.nrows(),
                    md.nrows()
                )));
            }
            if md.nrows() != system.dim(n) {
                return Err(Error::Internal("bar dimension differs from holonomy dimension".into()));
            }
            let basis = md.rows.clone();
            let dual_coords = bar.dual_of_basis(n, &basis)?;
            bar.degrees.push(BarDegree { n, basis, dual: dual_coords });
        }
        Ok(bar)
    }

    pub fn word_space(&self, n: usize) -> WordSpace {
        WordSpace { letters: self.letters.len(), len: n }
    }

    pub fn dim(&self, n: usize) -> usize {
        self.degrees[n].basis.len()
    }

    /// Route 1: ∩_j ker of the position-(j, j+1) wedge contraction into OS².
    pub fn kernel_basis(&self, n: usize) -> Vec<Vec<FieldElement>> {
        let ws = self.word_space(n);
        let nwords = ws.size();
        if n < 2 {
            return Matrix::identity(nwords).rows;
        }
        let nb = self.letters.len();
        let mut constraint_rows: Vec<Vec<FieldElement>> = Vec::new();
        for j in 0..n - 1 {
            let left = WordSpace { letters: nb, len: j };
            let right = WordSpace { letters: nb, len: n - j - 2 };
            // Row per (prefix, OS² coordinate, suffix); built by scattering
            // each word's wedge image.
            let mut rows: HashMap<(usize, usize, usize), Vec<FieldElement>> = HashMap::new();
            for w in 0..nwords {
                let word = ws.word(w);
                let li = left.index(&word[..j]);
                let ri = right.index(&word[j + 2..]);
                let mut a = vec![FieldElement::zero(); nb];
                a[word[j]] = FieldElement::one();
                let mut b = vec![FieldElement::zero(); nb];
                b[word[j + 1]] = FieldElement::one();
                let wedge = self.os2.wedge(&self.letters, self.h0, &a, &b);
                for (pi, c) in wedge.iter().enumerate() {
                    if !c.is_zero() {
                        let row = rows
                            .entry((li, pi, ri))
                            .or_insert_with(|| vec![FieldElement::zero(); nwords]);
                        row[w] = row[w].add(c).unwrap();
                    }
                }
            }
            constraint_rows.extend(rows.into_values());
        }
        if constraint_rows.is_empty() {
            return Matrix::identity(nwords).rows;
        }
        Matrix::new(constraint_rows, nwords).nullspace().rows
    }

    /// Route 2: annihilator of R_n inside T_n^∨, restricted to words
    /// avoiding H₀ (the coordinates of the sum-zero presentation).
    pub fn dual_basis(&self, n: usize) -> Result<Vec<Vec<FieldElement>>, Error> {
        let m = self.lattice.arrangement.len();
        let full = WordSpace { letters: m, len: n };
        let gens = relation_generators(self.lattice, n);
        let rows: Vec<Vec<FieldElement>> = gens
            .into_iter()
            .map(|sr| {
                let mut r = vec![FieldElement::zero(); full.size()];
                for (i, c) in sr {
                    r[i] = r[i].add(&c).unwrap();
                }
                r
            })
            .collect();
        let annihilator = if rows.is_empty() {
            Matrix::identity(full.size())
        } else {
            Matrix::new(rows, full.size()).nullspace()
        };
        // Restriction to bar coordinates: drop words containing H₀.
        let ws = self.word_space(n);
        let keep: Vec<usize> = (0..full.size())
            .filter(|&w| full.word(w).iter().all(|&l| l != self.h0))
            .collect();
        debug_assert_eq!(keep.len(), ws.size());
        let out: Vec<Vec<FieldElement>> = annihilator
            .rows
            .iter()
            .map(|r| keep.iter().map(|&w| r[w].clone()).collect())
            .collect();
        Ok(out)
    }

    /// Lifted coordinate of a bar element at a full word over all letters:
    /// (−1)^{#H₀ positions} Σ over the free letters at those positions.
    pub fn lift_at(&self, n: usize, bar_vec: &[FieldElement], full_word: &[usize]) -> FieldElement {
        let ws = self.word_space(n);
        let nb = self.letters.len();
        let h0_positions: Vec<usize> =
            (0..n).filter(|&p| full_word[p] == self.h0).collect();
        let letter_pos: HashMap<usize, usize> =
            self.letters.iter().enumerate().map(|(i, &h)| (h, i)).collect();
        let mut fixed = vec![0usize; n];
        let mut ok = true;
        for (p, &l) in full_word.iter().enumerate() {
            if l != self.h0 {
                match letter_pos.get(&l) {
                    Some(&i) => fixed[p] = i,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
        }
        if !ok {
            return FieldElement::zero();
        }
        let mut acc = FieldElement::zero();
        let count = nb.pow(h0_positions.len() as u32);
        for fill in 0..count {
            let mut idx = fill;
            let mut word = fixed.clone();
            for &p in &h0_positions {
                word[p] = idx % nb;
                idx /= nb;
            }
            acc = acc.add(&bar_vec[ws.index(&word)]).unwrap();
        }
        if h0_positions.len() % 2 == 1 {
            acc.neg()
        } else {
            acc
        }
    }

    /// Dual basis in A_n of a given B_n basis, via the perfect pairing.
    fn dual_of_basis(
        &self,
        n: usize,
        basis: &[Vec<FieldElement>],
    ) -> Result<Vec<Vec<FieldElement>>, Error> {
        let deg = &self.system.degrees[n];
        let full = WordSpace { letters: self.lattice.arrangement.len(), len: n };
        let d = basis.len();
        if d != deg.dim() {
            return Err(Error::Internal("pairing dimensions differ".into()));
        }
        let mut pairing = Vec::with_capacity(d);
        for b in basis {
            let row: Vec<FieldElement> = deg
                .basis_words
                .iter()
                .map(|&w| self.lift_at(n, b, &full.word(w)))
                .collect();
            pairing.push(row);
        }
        let p = Matrix::new(pairing, d);
        let pinv = p.inverse().map_err(|_| Error::Internal("bar/holonomy pairing is singular".into()))?;
        // a_i[j] = (P⁻¹)_{ji}
        Ok((0..d)
            .map(|i| (0..d).map(|j| pinv.rows[j][i].clone()).collect())
            .collect())
    }

    /// Membership certificate for B_n.
    pub fn is_in_bar(&self, n: usize, v: &[FieldElement]) -> bool {
        if n < 2 {
            return true;
        }
        let ws = self.word_space(n);
        let nb = self.letters.len();
        for j in 0..n - 1 {
            let mut out: HashMap<(usize, usize, usize), FieldElement> = HashMap::new();
            for w in 0..ws.size() {
                if v[w].is_zero() {
                    continue;
                }
                let word = ws.word(w);
                let left = WordSpace { letters: nb, len: j };
                let right = WordSpace { letters: nb, len: n - j - 2 };
                let li = left.index(&word[..j]);
                let ri = right.index(&word[j + 2..]);
                let mut a = vec![FieldElement::zero(); nb];
                a[word[j]] = FieldElement::one();
                let mut b = vec![FieldElement::zero(); nb];
                b[word[j + 1]] = FieldElement::one();
                let wedge = self.os2.wedge(&self.letters, self.h0, &a, &b);
                for (pi, c) in wedge.iter().enumerate() {
                    if !c.is_zero() {
                        let e = out.entry((li, pi, ri)).or_insert_with(FieldElement::zero);
                        *e = e.add(&c.mul(&v[w]).unwrap()).unwrap();
                    }
                }
            }
            if out.values().any(|c| !c.is_zero()) {
                return false;
            }
        }
        true
    }
}

/// Sparse bar element of a single weight.
#[derive(Clone, Debug, PartialEq)]
pub struct BarElement {
    pub n: usize,
    pub coords: Vec<FieldElement>,
}

/// Shuffle product of single words, as a list of result words.
fn shuffle_words(u: &[usize], v: &[usize]) -> Vec<Vec<usize>> {
    if u.is_empty() {
        return vec![v.to_vec()];
    }
    if v.is_empty() {
        return vec![u.to_vec()];
    }
    let mut out = Vec::new();
    for mut w in shuffle_words(&u[1..], v) {
        w.insert(0, u[0]);
        out.push(w);
    }
    for mut w in shuffle_words(u, &v[1..]) {
        w.insert(0, v[0]);
        out.push(w);
    }
    out
}

/// Shuffle product of bar elements (in the free shuffle algebra over the bar
/// letters).
pub fn shuffle(bar: &BarSystem, a: &BarElement, b: &BarElement) -> BarElement {
    let n = a.n + b.n;
    let wa = bar.word_space(a.n);
    let wb = bar.word_space(b.n);
    let wn = bar.word_space(n);
    let mut coords = vec![FieldElement::zero(); wn.size()];
    for (i, ca) in a.coords.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.coords.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            let c = ca.mul(cb).unwrap();
            for w in shuffle_words(&wa.word(i), &wb.word(j)) {
                let idx = wn.index(&w);
                coords[idx] = coords[idx].add(&c).unwrap();
            }
        }
    }
    BarElement { n, coords }
}

/// Deconcatenation coproduct: all (prefix, suffix) splits with coefficients.
pub fn deconcat(bar: &BarSystem, a: &BarElement) -> Vec<(BarElement, BarElement, FieldElement)> {
    let ws = bar.word_space(a.n);
    let mut out = Vec::new();
    for (i, c) in a.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let word = ws.word(i);
        for p in 0..=a.n {
            let left = &word[..p];
            let right = &word[p..];
            let wl = bar.word_space(p);
            let wr = bar.word_space(a.n - p);
            let mut lc = vec![FieldElement::zero(); wl.size()];
            lc[wl.index(left)] = FieldElement::one();
            let mut rc = vec![FieldElement::zero(); wr.size()];
            rc[wr.index(right)] = FieldElement::one();
            out.push((
                BarElement { n: p, coords: lc },
                BarElement { n: a.n - p, coords: rc },
                c.clone(),
            ));
        }
    }
    out
}

/// Antipode: reverse every word and multiply by (−1)^n.
pub fn antipode(bar: &BarSystem, a: &BarElement) -> BarElement {
    let ws = bar.word_space(a.n);
    let mut coords = vec![FieldElement::zero(); ws.size()];
    let sign = if a.n % 2 == 1 { FieldElement::integer(-1) } else { FieldElement::one() };
    for (i, c) in a.coords.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut word = ws.word(i);
        word.reverse();
        let idx = ws.index(&word);
        coords[idx] = coords[idx].add(&c.mul(&sign).unwrap()).unwrap();
    }
    BarElement { n: a.n, coords }
}

/// A holonomy-valued algebraic 1-form on a chart: for each chart coordinate,
/// an A_1-coordinate vector of rational functions.
pub struct HolonomyOneForm {
    pub nvars: usize,
    pub dim_a1: usize,
    pub comps: Vec<Vec<RationalFunction>>,
}

impl HolonomyOneForm {
    fn zero(nvars: usize, dim_a1: usize) -> HolonomyOneForm {
        HolonomyOneForm {
            nvars,
            dim_a1,
            comps: (0..nvars)
                .map(|_| (0..dim_a1).map(|_| RationalFunction::zero(nvars)).collect())
                .collect(),
        }
    }

    fn add_term(&mut self, coeff: &[FieldElement], var: usize, dlog_of: &RationalFunction) {
        for (k, c) in coeff.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let scaled = RationalFunction {
                num: dlog_of.num.scale(c),
                den: dlog_of.den.clone(),
            };
            self.comps[var][k] = self.comps[var][k].add(&scaled);
        }
    }

    pub fn equals(&self, other: &HolonomyOneForm) -> bool {
        if self.nvars != other.nvars || self.dim_a1 != other.dim_a1 {
            return false;
        }
        for v in 0..self.nvars {
            for k in 0..self.dim_a1 {
                if !self.comps[v][k].eq_rational(&other.comps[v][k]) {
                    return false;
                }
            }
        }
        true
    }
}

/// One term of Ω in chart coordinates.
pub enum OmegaTerm {
    /// t_Y ⊗ dlog u_Y for a chart coordinate.
    Coordinate { var: usize, coeff: Vec<FieldElement> },
    /// t_H ⊗ dlog P_H^S for a non-unit chart polynomial.
    Polynomial { hyperplane: usize, coeff: Vec<FieldElement>, poly: Poly },
}

/// Expansion Ω = Σ_Y t_Y ⊗ dlog u_Y + Σ_H t_H ⊗ dlog P_H^S with the
/// hyperplane at infinity fixed as β(V*). Terms with P = 1 are omitted, as is
/// the trivial t_{V*}.
pub fn omega_chart(system: &HolonomySystem, chart: &Chart) -> Vec<OmegaTerm> {
    let mut terms = Vec::new();
    for var in 0..chart.nvars() {
        let y = chart.coordinate_flat(var);
        terms.push(OmegaTerm::Coordinate { var, coeff: system.t_flat(y) });
    }
    for (h, p) in chart.polynomials.iter().enumerate() {
        if !p.is_one() {
            terms.push(OmegaTerm::Polynomial {
                hyperplane: h,
                coeff: system.letter(h),
                poly: p.clone(),
            });
        }
    }
    terms
}

/// Integrability Ω ∧ Ω = 0 in A_2 ⊗ (2-forms with rational coefficients):
/// for every variable pair the commutator-weighted wedge of dlogs must vanish
/// exactly.
pub fn omega_integrable(system: &HolonomySystem, chart: &Chart) -> bool {
    let terms = omega_chart(system, chart);
    let n = chart.nvars();
    let dlog = |t: &OmegaTerm| -> RationalFunction {
        match t {
            OmegaTerm::Coordinate { var, .. } => {
                RationalFunction::new(Poly::one(n), Poly::var(n, *var)).unwrap()
            }
            OmegaTerm::Polynomial { poly, .. } => {
                RationalFunction { num: Poly::one(n), den: poly.clone() }
            }
        }
    };
    fn coeff(t: &OmegaTerm) -> &Vec<FieldElement> {
        match t {
            OmegaTerm::Coordinate { coeff, .. } => coeff,
            OmegaTerm::Polynomial { coeff, .. } => coeff,
        }
    }
    let d_num = |t: &OmegaTerm, v: usize| -> Poly {
        match t {
            OmegaTerm::Coordinate { var, .. } => {
                if *var == v {
                    Poly::one(n)
                } else {
                    Poly::zero(n)
                }
            }
            OmegaTerm::Polynomial { poly, .. } => poly.partial_derivative(v),
        }
    };
    let dim2 = system.dim(2);
    for va in 0..n {
        for vb in va + 1..n {
            let mut acc: Vec<RationalFunction> =
                (0..dim2).map(|_| RationalFunction::zero(n)).collect();
            for (i, ti) in terms.iter().enumerate() {
                for tj in &terms[i + 1..] {
                    // [c_i, c_j] ⊗ (dlog f_i ∧ dlog f_j) component at
                    // du_a ∧ du_b.
                    let cij = system.product(1, coeff(ti), 1, coeff(tj));
                    let cji = system.product(1, coeff(tj), 1, coeff(ti));
                    let comm = sub_vec(&cij, &cji);
                    if is_zero_vec(&comm) {
                        continue;
                    }
                    let fi = dlog(ti);
                    let fj = dlog(tj);
                    let part = RationalFunction { num: d_num(ti, va), den: fi.den.clone() }
                        .mul(&RationalFunction { num: d_num(tj, vb), den: fj.den.clone() })
                        .sub(
                            &RationalFunction { num: d_num(ti, vb), den: fi.den.clone() }.mul(
                                &RationalFunction { num: d_num(tj, va), den: fj.den.clone() },
                            ),
                        );
                    if part.is_zero() {
                        continue;
                    }
                    for (k, c) in comm.iter().enumerate() {
                        if !c.is_zero() {
                            let scaled =
                                RationalFunction { num: part.num.scale(c), den: part.den.clone() };
                            acc[k] = acc[k].add(&scaled);
                        }
                    }
                }
            }
            if acc.iter().any(|r| !r.num.is_zero()) {
                return false;
            }
        }
    }
    true
}

/// Letter images of the boundary embeddings at X ∈ S:
/// i₁ on A(A|_X) and i₂ on A(A/X), both landing in dense T_1 vectors of A,
/// plus the left inverse j of i₂.
pub struct BoundaryEmbeddings {
    pub i1: Vec<Vec<FieldElement>>,
    pub i2: Vec<Vec<FieldElement>>,
    /// Per A-letter: the A/X letter it maps to under j (representatives), or
    /// None for letters sent to zero.
    pub j: Vec<Option<usize>>,
}

pub fn boundary_embeddings(
    chart: &Chart,
    x: &Flat,
    q: &crate::arrangement::QuotientData,
    r: &crate::arrangement::RestrictionData,
) -> Result<BoundaryEmbeddings, Error> {
    let arr = &chart.arrangement;
    let m = arr.len();
    let s = &chart.nested;
    let xpos = s.position(x).ok_or_else(|| Error::BadParams("X must lie in S".into()))?;
    let beta_x = chart.beta.assignment[xpos];
    // i₁: letters of A|_X.
    let mut i1 = Vec::with_capacity(q.kept.len());
    for &h in &q.kept {
        let mut v = vec![FieldElement::zero(); m];
        v[h] = FieldElement::one();
        if h == beta_x {
            for k in 0..m {
                if !x.contains_vector(&arr.hyperplanes[k]) {
                    v[k] = v[k].add(&FieldElement::one()).unwrap();
                }
            }
        }
        i1.push(v);
    }
    // i₂: letters of A/X; the class of β(X⁺) picks up t_X.
    let beta_succ_class = if *x == Flat::full(arr.dim) {
        None
    } else {
        let succ = successor(s, x)?;
        let spos = s.position(&succ).unwrap();
        r.class_of[chart.beta.assignment[spos]]
    };
    let nclasses = r.arrangement.len();
    let mut i2 = Vec::with_capacity(nclasses);
    for class in 0..nclasses {
        let mut v = vec![FieldElement::zero(); m];
        for k in r.class_members(class) {
            v[k] = v[k].add(&FieldElement::one()).unwrap();
        }
        if Some(class) == beta_succ_class {
            for k in 0..m {
                if x.contains_vector(&arr.hyperplanes[k]) {
                    v[k] = v[k].add(&FieldElement::one()).unwrap();
                }
            }
        }
        i2.push(v);
    }
    // j: the first member of each class is its representative.
    let mut j = vec![None; m];
    for class in 0..nclasses {
        if let Some(&rep) = r.class_members(class).first() {
            j[rep] = Some(class);
        }
    }
    Ok(BoundaryEmbeddings { i1, i2, j })
}

/// Push a dense source T_n vector through letter images into target A_n
/// coordinates.
pub fn apply_letter_map(
    target: &HolonomySystem,
    source_letters: usize,
    n: usize,
    letter_images: &[Vec<FieldElement>],
    dense: &[FieldElement],
) -> Vec<FieldElement> {
    let tm = target.arr.len();
    let tdeg = &target.degrees[n];
    let sws = WordSpace { letters: source_letters, len: n };
    let mut out = vec![FieldElement::zero(); tdeg.words.size()];
    for (i, c) in dense.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let word = sws.word(i);
        let mut partial: HashMap<usize, FieldElement> = HashMap::new();
        partial.insert(0, c.clone());
        for &l in &word {
            let mut next: HashMap<usize, FieldElement> = HashMap::new();
            for (idx, coeff) in &partial {
                for (t, tc) in letter_images[l].iter().enumerate() {
                    if tc.is_zero() {
                        continue;
                    }
                    let e = next.entry(idx * tm + t).or_insert_with(FieldElement::zero);
                    *e = e.add(&coeff.mul(tc).unwrap()).unwrap();
                }
            }
            partial = next;
        }
        for (idx, coeff) in partial {
            out[idx] = out[idx].add(&coeff).unwrap();
        }
    }
    tdeg.project(out)
}

/// Degree-n matrix of a letter map on sub-algebra coordinates; used for rank
/// (injectivity) checks.
pub fn letter_map_rank(
    target: &HolonomySystem,
    source: &HolonomySystem,
    letter_images: &[Vec<FieldElement>],
    n: usize,
) -> usize {
    let sdeg = &source.degrees[n];
    let rows: Vec<Vec<FieldElement>> = (0..sdeg.dim())
        .map(|i| {
            let mut coords = sdeg.zero();
            coords[i] = FieldElement::one();
            let dense = sdeg.lift(&coords);
            apply_letter_map(target, source.arr.len(), n, letter_images, &dense)
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    Matrix::new(rows, target.dim(n)).rank()
}

/// Images of the source algebra's generating relations must die in A(A):
/// Σ_h t_h at degree 1 and every [t_H, t_X] generator at degree 2.
pub fn letter_map_preserves_relations(
    target: &HolonomySystem,
    source_lattice: &IntersectionLattice,
    letter_images: &[Vec<FieldElement>],
) -> bool {
    let sm = source_lattice.arrangement.len();
    for n in 1..=2usize {
        let gens = relation_generators(source_lattice, n);
        let ws = WordSpace { letters: sm, len: n };
        for g in gens {
            let mut dense = vec![FieldElement::zero(); ws.size()];
            for (i, c) in g {
                dense[i] = dense[i].add(&c).unwrap();
            }
            let image = apply_letter_map(target, sm, n, letter_images, &dense);
            if !is_zero_vec(&image) {
                return false;
            }
        }
    }
    true
}

/// j ∘ i₂ = id on the quotient holonomy algebra, checked on letters.
pub fn j_left_inverts_i2(
    quotient: &HolonomySystem,
    emb: &BoundaryEmbeddings,
) -> bool {
    let nclasses = emb.i2.len();
    for class in 0..nclasses {
        // j applied letterwise to i₂(t_class).
        let mut acc = quotient.degrees[1].zero();
        for (k, c) in emb.i2[class].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if let Some(target) = emb.j[k] {
                acc = add_vec(&acc, &scale_vec(&quotient.letter(target), c));
            }
        }
        if !is_zero_vec(&sub_vec(&acc, &quotient.letter(class))) {
            return false;
        }
    }
    true
}

/// Ω of a sub-arrangement chart pushed into A(A)-coefficients and the big
/// chart's variables.
fn omega_side(
    big: &HolonomySystem,
    sub_system: &HolonomySystem,
    sub_chart: &Chart,
    letter_images: &[Vec<FieldElement>],
    var_map: &[usize],
    big_nvars: usize,
    dim_a1: usize,
) -> HolonomyOneForm {
    let mut form = HolonomyOneForm::zero(big_nvars, dim_a1);
    let sm = sub_system.arr.len();
    let image_of_letter = |h: usize| -> Vec<FieldElement> {
        let mut dense = vec![FieldElement::zero(); sm];
        dense[h] = FieldElement::one();
        apply_letter_map(big, sm, 1, letter_images, &dense)
    };
    for var in 0..sub_chart.nvars() {
        let y = sub_chart.coordinate_flat(var);
        // t_Y of the sub-arrangement, mapped letterwise.
        let mut coeff = big.degrees[1].zero();
        for h in sub_system.arr.hyperplanes_in(y) {
            coeff = add_vec(&coeff, &image_of_letter(h));
        }
        let dlog = RationalFunction::new(Poly::one(big_nvars), Poly::var(big_nvars, var_map[var]))
            .unwrap();
        form.add_term(&coeff, var_map[var], &dlog);
    }
    for (h, p) in sub_chart.polynomials.iter().enumerate() {
        if p.is_one() {
            continue;
        }
        let renamed = p.rename_vars(big_nvars, var_map);
        let coeff = image_of_letter(h);
        for v in 0..big_nvars {
            let dp = renamed.partial_derivative(v);
            if dp.is_zero() {
                continue;
            }
            let dlog = RationalFunction { num: dp, den: renamed.clone() };
            form.add_term(&coeff, v, &dlog);
        }
    }
    form
}

/// The boundary identity Ω₁ + Ω₂ = (Ω − t_X ⊗ dlog u_X)|_{u_X=0}, as exact
/// rational-function equality of A_1-valued 1-forms.
pub fn verify_boundary_omega(
    lattice: &IntersectionLattice,
    system: &HolonomySystem,
    chart: &Chart,
    x: &Flat,
    boundary: &BoundaryRestriction,
) -> Result<bool, Error> {
    let arr = &lattice.arrangement;
    if *x == Flat::full(arr.dim) {
        return Ok(true);
    }
    let n = chart.nvars();
    let dim_a1 = system.dim(1);
    let x_var = chart.var_of_flat(x).ok_or_else(|| Error::BadParams("u_X missing".into()))?;

    // Right side: restrict Ω − t_X dlog u_X to u_X = 0.
    let mut rhs = HolonomyOneForm::zero(n, dim_a1);
    for var in 0..n {
        if var == x_var {
            continue;
        }
        let y = chart.coordinate_flat(var);
        let dlog = RationalFunction::new(Poly::one(n), Poly::var(n, var)).unwrap();
        rhs.add_term(&system.t_flat(y), var, &dlog);
    }
    for (h, p) in chart.polynomials.iter().enumerate() {
        let restricted = p.set_var_zero(x_var);
        if restricted.is_constant() {
            continue;
        }
        let coeff = system.letter(h);
        for v in 0..n {
            if v == x_var {
                continue;
            }
            let dp = restricted.partial_derivative(v);
            if dp.is_zero() {
                continue;
            }
            let dlog = RationalFunction { num: dp, den: restricted.clone() };
            rhs.add_term(&coeff, v, &dlog);
        }
    }

    // Left side: Ω₁ via i₁ and Ω₂ via i₂, variables renamed into U_S.
    let q = arr.quotient(x)?;
    let r = arr.restriction(x)?;
    let emb = boundary_embeddings(chart, x, &q, &r)?;
    let sub_res_lattice = IntersectionLattice::build(&q.arrangement);
    let sub_res_system = HolonomySystem::build(&sub_res_lattice, 1);
    let sub_quo_lattice = IntersectionLattice::build(&r.arrangement);
    let sub_quo_system = HolonomySystem::build(&sub_quo_lattice, 1);

    let mut var_map_res = vec![0usize; boundary.chart_restricted.nvars()];
    for v in 0..boundary.chart_restricted.nvars() {
        let target = boundary.chart_restricted.coordinate_flat(v);
        let source = (0..n)
            .find(|&bv| {
                let y = chart.coordinate_flat(bv);
                x.contains_flat(y) && q.map_flat(y) == *target
            })
            .ok_or_else(|| Error::Internal("missing source var".into()))?;
        var_map_res[v] = source;
    }
    let mut var_map_quo = vec![0usize; boundary.chart_quotient.nvars()];
    for v in 0..boundary.chart_quotient.nvars() {
        let target = boundary.chart_quotient.coordinate_flat(v);
        let source = (0..n)
            .find(|&bv| {
                let y = chart.coordinate_flat(bv);
                !x.contains_flat(y) && r.map_flat(y) == *target
            })
            .ok_or_else(|| Error::Internal("missing source var".into()))?;
        var_map_quo[v] = source;
    }

    let omega1 = omega_side(
        system,
        &sub_res_system,
        &boundary.chart_restricted,
        &emb.i1,
        &var_map_res,
        n,
        dim_a1,
    );
    let omega2 = omega_side(
        system,
        &sub_quo_system,
        &boundary.chart_quotient,
        &emb.i2,
        &var_map_quo,
        n,
        dim_a1,
    );
    let mut lhs = HolonomyOneForm::zero(n, dim_a1);
    for v in 0..n {
        for k in 0..dim_a1 {
            lhs.comps[v][k] = omega1.comps[v][k].add(&omega2.comps[v][k]);
        }
    }
    Ok(lhs.equals(&rhs))
}

/// The truncated holonomy solution: per weight, the tautological element
/// L_n = Σ_i w_i ⊗ w_i^∨ of B_n ⊗ A_n.
pub struct TruncatedSolution<'a> {
    pub bar: &'a BarSystem<'a>,
    pub max_n: usize,
}

impl TruncatedSolution<'_> {
    /// dL_n = Ω L_{n−1} in (1-forms) ⊗ T_{n−1} ⊗ A_n: for each letter H,
    /// peeling H off the bar leg equals left multiplication by t_H on the
    /// holonomy leg.
    pub fn check_differential(&self, n: usize) -> bool {
        let bar = self.bar;
        let sys = bar.system;
        let deg = &bar.degrees[n];
        let prev = &bar.degrees[n - 1];
        let ws = bar.word_space(n);
        let wprev = bar.word_space(n - 1);
        let dim_an = sys.dim(n);
        for (li, &letter_h) in bar.letters.iter().enumerate() {
            // Left side: Σ_i tail_H(w_i) ⊗ a_i.
            let mut lhs = vec![vec![FieldElement::zero(); dim_an]; wprev.size()];
            for (i, w) in deg.basis.iter().enumerate() {
                for (widx, c) in w.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let word = ws.word(widx);
                    if word[0] != li {
                        continue;
                    }
                    let tail = wprev.index(&word[1..]);
                    for (k, a) in deg.dual[i].iter().enumerate() {
                        if !a.is_zero() {
                            lhs[tail][k] = lhs[tail][k].add(&c.mul(a).unwrap()).unwrap();
                        }
                    }
                }
            }
            // Right side: Σ_j w'_j ⊗ (t_H · a'_j).
            let t_h = sys.letter(letter_h);
            let mut rhs = vec![vec![FieldElement::zero(); dim_an]; wprev.size()];
            for (j, wj) in prev.basis.iter().enumerate() {
                let ta = sys.product(1, &t_h, n - 1, &prev.dual[j]);
                for (widx, c) in wj.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    for (k, a) in ta.iter().enumerate() {
                        if !a.is_zero() {
                            rhs[widx][k] = rhs[widx][k].add(&c.mul(a).unwrap()).unwrap();
                        }
                    }
                }
            }
            for w in 0..wprev.size() {
                for k in 0..dim_an {
                    if lhs[w][k] != rhs[w][k] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Group-likeness ΔL = L ⊗ L: for each split p + q = n, deconcatenating
    /// the bar leg of L_n equals the product of the holonomy legs of
    /// L_p ⊗ L_q.
    pub fn check_group_like(&self, n: usize) -> bool {
        let bar = self.bar;
        let sys = bar.system;
        let deg = &bar.degrees[n];
        let ws = bar.word_space(n);
        let dim_an = sys.dim(n);
        for p in 0..=n {
            let q = n - p;
            let wp = bar.word_space(p);
            let wq = bar.word_space(q);
            let mut lhs =
                vec![vec![vec![FieldElement::zero(); dim_an]; wq.size()]; wp.size()];
            for (i, w) in deg.basis.iter().enumerate() {
                for (widx, c) in w.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let word = ws.word(widx);
                    let a = wp.index(&word[..p]);
                    let b = wq.index(&word[p..]);
                    for (k, d) in deg.dual[i].iter().enumerate() {
                        if !d.is_zero() {
                            lhs[a][b][k] = lhs[a][b][k].add(&c.mul(d).unwrap()).unwrap();
                        }
                    }
                }
            }
            let degp = &bar.degrees[p];
            let degq = &bar.degrees[q];
            let mut rhs =
                vec![vec![vec![FieldElement::zero(); dim_an]; wq.size()]; wp.size()];
            for (j, wj) in degp.basis.iter().enumerate() {
                for (k2, wk) in degq.basis.iter().enumerate() {
                    let prod = sys.product(p, &degp.dual[j], q, &degq.dual[k2]);
                    if is_zero_vec(&prod) {
                        continue;
                    }
                    for (a, ca) in wj.iter().enumerate() {
                        if ca.is_zero() {
                            continue;
                        }
                        for (b, cb) in wk.iter().enumerate() {
                            if cb.is_zero() {
                                continue;
                            }
                            let cc = ca.mul(cb).unwrap();
                            for (k, d) in prod.iter().enumerate() {
                                if !d.is_zero() {
                                    rhs[a][b][k] =
                                        rhs[a][b][k].add(&cc.mul(d).unwrap()).unwrap();
                                }
                            }
                        }
                    }
                }
            }
            if lhs != rhs {
                return false;
            }
        }
        true
    }
}

/// A one-dimensional arrangement over the exact field: marked points on the
/// affine line, with the point at infinity as the implicit hyperplane H₀.
#[derive(Clone, Debug)]
pub struct OneDimArrangement {
    pub points: Vec<FieldElement>,
}

/// F = Σ_w f_w(t) dt ⊗ w with rational coefficients and poles only at the
/// marked points.
pub type OneForm1D = Vec<(RationalFunction, Vec<usize>)>;

/// A primitive Σ_w g_w(t) ⊗ w of F (letters prepend as logarithms,
/// everything else integrates inside the rational functions), with
/// weight(G) ≤ weight(F) + 1.
pub fn primitive_1d(arr: &OneDimArrangement, form: &OneForm1D) -> Result<OneForm1D, Error> {
    let mut out: HashMap<Vec<usize>, RationalFunction> = HashMap::new();
    let mut pending: Vec<(RationalFunction, Vec<usize>)> = form.clone();
    let max_weight = form.iter().map(|(_, w)| w.len()).max().unwrap_or(0);
    while let Some((f, word)) = pending.pop() {
        if f.is_zero() {
            continue;
        }
        let parts = partial_fractions(arr, &f)?;
        // Simple poles become prepended letters: ∫ c dlog(t−a) ⊗ w =
        // c ⊗ [ω_a | w].
        for (letter, c) in parts.logs {
            let mut new_word = Vec::with_capacity(word.len() + 1);
            new_word.push(letter);
            new_word.extend(&word);
            add_coeff(&mut out, new_word, &RationalFunction::from_poly(Poly::constant(1, c)));
        }
        // The rest has a rational antiderivative; the bar differential of
        // g ⊗ w sheds g·ω_{head(w)} ⊗ tail(w), which must be integrated in
        // turn.
        if !parts.rational_part.is_zero() {
            let g = parts.rational_part;
            add_coeff(&mut out, word.clone(), &g);
            if !word.is_empty() {
                let head = word[0];
                let tail = word[1..].to_vec();
                let omega_head = RationalFunction::new(
                    Poly::one(1),
                    Poly::var(1, 0).sub(&Poly::constant(1, arr.points[head].clone())),
                )?;
                pending.push((g.mul(&omega_head).neg(), tail));
            }
        }
    }
    let result: OneForm1D =
        out.into_iter().filter(|(_, f)| !f.is_zero()).map(|(w, f)| (f, w)).collect();
    let out_weight = result.iter().map(|(_, w)| w.len()).max().unwrap_or(0);
    if out_weight > max_weight + 1 {
        return Err(Error::Internal("primitive exceeded the weight bound".into()));
    }
    Ok(sorted_form(result))
}

fn sorted_form(mut f: OneForm1D) -> OneForm1D {
    f.sort_by(|a, b| (a.1.len(), &a.1).cmp(&(b.1.len(), &b.1)));
    f
}

fn add_coeff(out: &mut HashMap<Vec<usize>, RationalFunction>, w: Vec<usize>, f: &RationalFunction) {
    match out.remove(&w) {
        None => {
            out.insert(w, f.clone());
        }
        Some(prev) => {
            out.insert(w, prev.add(f));
        }
    }
}

/// d of a 1-dim bar form: Σ_w (g_w' dt ⊗ w + g_w ω_{head(w)} ⊗ tail(w)).
pub fn differential_1d(arr: &OneDimArrangement, g: &OneForm1D) -> OneForm1D {
    let mut out: HashMap<Vec<usize>, RationalFunction> = HashMap::new();
    for (f, word) in g {
        add_coeff(&mut out, word.clone(), &f.partial_derivative(0));
        if !word.is_empty() {
            let head = word[0];
            let tail = word[1..].to_vec();
            let omega = RationalFunction::new(
                Poly::one(1),
                Poly::var(1, 0).sub(&Poly::constant(1, arr.points[head].clone())),
            )
            .unwrap();
            add_coeff(&mut out, tail, &f.mul(&omega));
        }
    }
    sorted_form(out.into_iter().filter(|(_, f)| !f.is_zero()).map(|(w, f)| (f, w)).collect())
}

pub fn forms_equal_1d(a: &OneForm1D, b: &OneForm1D) -> bool {
    let collect = |f: &OneForm1D| -> HashMap<Vec<usize>, RationalFunction> {
        let mut m = HashMap::new();
        for (c, w) in f {
            add_coeff(&mut m, w.clone(), c);
        }
        m
    };
    let ma = collect(a);
    let mb = collect(b);
    for (w, c) in &ma {
        match mb.get(w) {
            Some(d) => {
                if !c.eq_rational(d) {
                    return false;
                }
            }
            None => {
                if !c.is_zero() {
                    return false;
                }
            }
        }
    }
    for (w, d) in &mb {
        if !ma.contains_key(w) && !d.is_zero() {
            return false;
        }
    }
    true
}

struct PartialFractions {
    /// (letter, residue) pairs for the simple-pole part Σ c·dlog(t − a).
    logs: Vec<(usize, FieldElement)>,
    /// Exact antiderivative of everything else (polynomial part and higher
    /// poles).
    rational_part: RationalFunction,
}

fn eval_poly(p: &Poly, t: &FieldElement) -> FieldElement {
    let mut acc = FieldElement::zero();
    for (m, c) in &p.terms {
        let mut term = c.clone();
        for _ in 0..m.0[0] {
            term = term.mul(t).unwrap();
        }
        acc = acc.add(&term).unwrap();
    }
    acc
}

/// Divide a univariate polynomial by (t − a); remainder must vanish.
fn div_linear(p: &Poly, a: &FieldElement) -> Option<Poly> {
    let deg = p.degree_in(0) as usize;
    let mut coeffs = vec![FieldElement::zero(); deg + 1];
    for (m, c) in &p.terms {
        coeffs[m.0[0] as usize] = c.clone();
    }
    // Synthetic division.
    let mut out = vec![FieldElement::zero(); deg];
    let mut carry = FieldElement::zero();
    for k in (0..=deg).rev() {
        let v = coeffs[k].add(&carry).unwrap();
        if k == 0 {
            if !v.is_zero() {
                return None;
            }
        } else {
            out[k - 1] = v.clone();
            carry = v.mul(a).unwrap();
        }
    }
    let mut q = Poly::zero(1);
    for (k, c) in out.into_iter().enumerate() {
        q.add_term(crate::poly::Monomial(vec![k as u16]), c);
    }
    Some(q)
}

fn antiderivative_poly(p: &Poly) -> Poly {
    let mut out = Poly::zero(1);
    for (m, c) in &p.terms {
        let k = m.0[0] as i64;
        let coeff = c.div(&FieldElement::integer(k + 1)).unwrap();
        out.add_term(crate::poly::Monomial(vec![(k + 1) as u16]), coeff);
    }
    out
}

fn partial_fractions(arr: &OneDimArrangement, f: &RationalFunction) -> Result<PartialFractions, Error> {
    // Factor the denominator over the marked points.
    let mut den = f.den.clone();
    let lead = den
        .terms
        .iter()
        .next_back()
        .map(|(_, c)| c.clone())
        .ok_or(Error::DivisionByZero)?;
    let _ = lead;
    let mut mult: Vec<usize> = vec![0; arr.points.len()];
    loop {
        let mut divided = false;
        for (i, a) in arr.points.iter().enumerate() {
            if let Some(q) = div_linear(&den, a) {
                mult[i] += 1;
                den = q;
                divided = true;
                break;
            }
        }
        if !divided {
            break;
        }
    }
    if den.degree_in(0) > 0 {
        return Err(Error::PoleOutsideArrangement(format!("{:?}", den)));
    }
    let unit = den.constant_term();
    let unit_inv = unit.inv()?;
    let mut num = f.num.scale(&unit_inv);

    // Strip pole terms point by point, highest order first.
    let mut logs: Vec<(usize, FieldElement)> = Vec::new();
    let mut rational_part = RationalFunction::zero(1);
    loop {
        let Some(i) = (0..arr.points.len()).find(|&i| mult[i] > 0) else {
            break;
        };
        let a = arr.points[i].clone();
        let k = mult[i];
        // c = num(a) / ∏_{j≠i} (a − a_j)^{mult_j}
        let mut denom_at_a = FieldElement::one();
        for (j, b) in arr.points.iter().enumerate() {
            if j == i {
                continue;
            }
            for _ in 0..mult[j] {
                denom_at_a = denom_at_a.mul(&a.sub(b).unwrap()).unwrap();
            }
        }
        let c = eval_poly(&num, &a).div(&denom_at_a)?;
        if k == 1 {
            if !c.is_zero() {
                logs.push((i, c.clone()));
            }
        } else if !c.is_zero() {
            // ∫ c/(t−a)^k dt = −c/((k−1)(t−a)^{k−1})
            let factor = FieldElement::integer((k - 1) as i64);
            let lin = Poly::var(1, 0).sub(&Poly::constant(1, a.clone()));
            let term = RationalFunction::new(
                Poly::constant(1, c.clone().neg().div(&factor)?),
                lin.pow((k - 1) as u32),
            )?;
            rational_part = rational_part.add(&term);
        }
        // num/den − c/(t−a)^k leaves the numerator divisible by (t−a):
        // num' = (num − c·∏_{j≠i}(t−a_j)^{mult_j}) / (t−a)
        let mut cofactor = Poly::one(1);
        for (j, b) in arr.points.iter().enumerate() {
            if j == i {
                continue;
            }
            let lin = Poly::var(1, 0).sub(&Poly::constant(1, b.clone()));
            for _ in 0..mult[j] {
                cofactor = cofactor.mul(&lin);
            }
        }
        let adjusted = num.sub(&cofactor.scale(&c));
        num = div_linear(&adjusted, &a)
            .ok_or_else(|| Error::Internal("residue subtraction must divide".into()))?;
        mult[i] -= 1;
    }
    // Remaining polynomial integrates directly.
    if !num.is_zero() {
        rational_part = rational_part.add(&RationalFunction::from_poly(antiderivative_poly(&num)));
    }
    Ok(PartialFractions { logs, rational_part })
}
