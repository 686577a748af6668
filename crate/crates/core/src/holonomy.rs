//! The holonomy algebra degree by degree: A_n = T_n/R_n where T_n is spanned
//! by words of length n in the symbols t_H and R_n is generated by
//! u·(Σ_H t_H)·v and u·[t_H, t_X]·v for rank-2 flats X ⊇ H.
//!
//! Elements of A_n are stored as coordinate vectors over the non-pivot words
//! of the echelonized relation space.

use std::collections::HashMap;

use crate::arrangement::{Arrangement, Flat};
use crate::error::Error;
use crate::field::FieldElement;
use crate::lattice::IntersectionLattice;

/// Dense index space of words of a fixed length over `letters` symbols.
#[derive(Clone, Copy, Debug)]
pub struct WordSpace {
    pub letters: usize,
    pub len: usize,
}

impl WordSpace {
    pub fn size(&self) -> usize {
        self.letters.pow(self.len as u32)
    }

    pub fn index(&self, word: &[usize]) -> usize {
        debug_assert_eq!(word.len(), self.len);
        word.iter().fold(0, |acc, &l| acc * self.letters + l)
    }

    pub fn word(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.len];
        for i in (0..self.len).rev() {
            out[i] = idx % self.letters;
            idx /= self.letters;
        }
        out
    }
}

pub type SparseRow = Vec<(usize, FieldElement)>;

/// Echelonized homogeneous piece R_n together with the induced coordinates
/// of A_n = T_n/R_n.
pub struct HolonomyDegree {
    pub n: usize,
    pub words: WordSpace,
    /// Reduced echelon rows keyed by pivot word index.
    rows: std::collections::BTreeMap<usize, SparseRow>,
    /// Non-pivot word indices: the coordinate words of A_n.
    pub basis_words: Vec<usize>,
}

impl HolonomyDegree {
    pub fn dim(&self) -> usize {
        self.basis_words.len()
    }

    /// Reduce a dense T_n vector modulo R_n; the residue is supported on the
    /// basis words and its entries there are the A_n coordinates.
    pub fn project(&self, mut v: Vec<FieldElement>) -> Vec<FieldElement> {
        for (&pivot, row) in &self.rows {
            if !v[pivot].is_zero() {
                let c = v[pivot].clone();
                for (idx, coeff) in row {
                    let t = c.mul(coeff).expect("same field");
                    v[*idx] = v[*idx].sub(&t).expect("same field");
                }
            }
        }
        self.basis_words.iter().map(|&w| v[w].clone()).collect()
    }

    pub fn zero(&self) -> Vec<FieldElement> {
        vec![FieldElement::zero(); self.dim()]
    }

    /// Lift A_n coordinates to the dense representative supported on basis
    /// words.
    pub fn lift(&self, coords: &[FieldElement]) -> Vec<FieldElement> {
        let mut v = vec![FieldElement::zero(); self.words.size()];
        for (i, &w) in self.basis_words.iter().enumerate() {
            v[w] = coords[i].clone();
        }
        v
    }
}

/// Reduced sparse echelonization keyed by pivot index; shared by the
/// holonomy relations and the degree-2 cohomology presentation.
pub fn eliminate_rows(rows_in: Vec<SparseRow>) -> std::collections::BTreeMap<usize, SparseRow> {
    eliminate(rows_in, 0)
}

fn eliminate(rows_in: Vec<SparseRow>, _ncols: usize) -> std::collections::BTreeMap<usize, SparseRow> {
    let mut reduced: std::collections::BTreeMap<usize, SparseRow> = std::collections::BTreeMap::new();
    for row in rows_in {
        let mut current: HashMap<usize, FieldElement> = row.into_iter().collect();
        loop {
            // Leading index = smallest word index with nonzero entry.
            let lead = current
                .iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(&i, _)| i)
                .min();
            let Some(lead) = lead else {
                break;
            };
            if let Some(pr) = reduced.get(&lead) {
                let c = current[&lead].clone();
                current.remove(&lead);
                for (idx, coeff) in pr {
                    let t = c.mul(coeff).expect("same field");
                    let entry = current.entry(*idx).or_insert_with(FieldElement::zero);
                    *entry = entry.sub(&t).expect("same field");
                    if entry.is_zero() {
                        current.remove(idx);
                    }
                }
            } else {
                // Normalize and insert; back-substitute into existing rows.
                let inv = current[&lead].inv().expect("nonzero");
                current.remove(&lead);
                let mut new_row: SparseRow = current
                    .iter()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(&i, c)| (i, c.mul(&inv).expect("same field")))
                    .collect();
                new_row.sort_by_key(|(i, _)| *i);
                let keys: Vec<usize> = reduced.keys().copied().collect();
                for k in keys {
                    let entry_coeff = {
                        let r = &reduced[&k];
                        r.iter().find(|(i, _)| *i == lead).map(|(_, c)| c.clone())
                    };
                    if let Some(c) = entry_coeff {
                        let mut r: HashMap<usize, FieldElement> =
                            reduced[&k].iter().cloned().collect();
                        r.remove(&lead);
                        for (idx, coeff) in &new_row {
                            let t = c.mul(coeff).expect("same field");
                            let e = r.entry(*idx).or_insert_with(FieldElement::zero);
                            *e = e.sub(&t).expect("same field");
                            if e.is_zero() {
                                r.remove(idx);
                            }
                        }
                        let mut rr: SparseRow = r.into_iter().collect();
                        rr.sort_by_key(|(i, _)| *i);
                        reduced.insert(k, rr);
                    }
                }
                reduced.insert(lead, new_row);
                break;
            }
        }
    }
    reduced
}

/// A_0..A_N of one arrangement, with product/coproduct machinery.
pub struct HolonomySystem {
    pub arr: Arrangement,
    pub degrees: Vec<HolonomyDegree>,
    /// Projections of single words, cached per degree.
    word_class: std::cell::RefCell<HashMap<(usize, usize), Vec<FieldElement>>>,
}

/// Generators of R_n as sparse rows over the word basis of T_n:
/// u·(Σ_H t_H)·v (one per prefix/suffix) and u·[t_H, t_X]·v (one per
/// rank-2 flat X, member H, prefix and suffix).
pub fn relation_generators(lattice: &IntersectionLattice, n: usize) -> Vec<SparseRow> {
    let arr = &lattice.arrangement;
    let m = arr.len();
    let sum_all: SparseRow = (0..m).map(|h| (h, FieldElement::one())).collect();
    let mut deg2: Vec<SparseRow> = Vec::new();
    for x in lattice.flats.iter().filter(|f| f.dim() == 2) {
        let members = arr.hyperplanes_in(x);
        for &h in &members {
            // t_H·t_X − t_X·t_H with t_X = Σ_{K ⊆ X} t_K.
            let mut row: HashMap<usize, FieldElement> = HashMap::new();
            for &k in &members {
                let hk = h * m + k;
                let kh = k * m + h;
                let e = row.entry(hk).or_insert_with(FieldElement::zero);
                *e = e.add(&FieldElement::one()).unwrap();
                let e = row.entry(kh).or_insert_with(FieldElement::zero);
                *e = e.sub(&FieldElement::one()).unwrap();
            }
            let mut r: SparseRow = row.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            r.sort_by_key(|(i, _)| *i);
            if !r.is_empty() {
                deg2.push(r);
            }
        }
    }
    let mut gens: Vec<SparseRow> = Vec::new();
    if n >= 1 {
        for pos in 0..n {
            let left = WordSpace { letters: m, len: pos };
            let right = WordSpace { letters: m, len: n - 1 - pos };
            for li in 0..left.size() {
                for ri in 0..right.size() {
                    let row: SparseRow = sum_all
                        .iter()
                        .map(|(h, c)| ((li * m + h) * right.size() + ri, c.clone()))
                        .collect();
                    gens.push(row);
                }
            }
        }
    }
    if n >= 2 {
        for pos in 0..n - 1 {
            let left = WordSpace { letters: m, len: pos };
            let right = WordSpace { letters: m, len: n - 2 - pos };
            for li in 0..left.size() {
                for ri in 0..right.size() {
                    for rel in &deg2 {
                        let row: SparseRow = rel
                            .iter()
                            .map(|(pair, c)| ((li * m * m + pair) * right.size() + ri, c.clone()))
                            .collect();
                        gens.push(row);
                    }
                }
            }
        }
    }
    gens
}

impl HolonomySystem {
    /// Relation generators: the rank-2 flats are read off the lattice.
    pub fn build(lattice: &IntersectionLattice, max_n: usize) -> HolonomySystem {
        let arr = lattice.arrangement.clone();
        let m = arr.len();
        let mut degrees = Vec::with_capacity(max_n + 1);
        for n in 0..=max_n {
            let words = WordSpace { letters: m, len: n };
            let gens = relation_generators(lattice, n);
            let rows = eliminate(gens, words.size());
            let pivots: std::collections::HashSet<usize> = rows.keys().copied().collect();
            let basis_words: Vec<usize> =
                (0..words.size()).filter(|w| !pivots.contains(w)).collect();
            degrees.push(HolonomyDegree { n, words, rows, basis_words });
        }
        HolonomySystem { arr, degrees, word_class: std::cell::RefCell::new(HashMap::new()) }
    }

    pub fn max_weight(&self) -> usize {
        self.degrees.len() - 1
    }

    pub fn dim(&self, n: usize) -> usize {
        self.degrees[n].dim()
    }

    /// A_n coordinates of a single word.
    pub fn class_of_word(&self, n: usize, word_idx: usize) -> Vec<FieldElement> {
        if let Some(c) = self.word_class.borrow().get(&(n, word_idx)) {
            return c.clone();
        }
        let deg = &self.degrees[n];
        let mut v = vec![FieldElement::zero(); deg.words.size()];
        v[word_idx] = FieldElement::one();
        let coords = deg.project(v);
        self.word_class.borrow_mut().insert((n, word_idx), coords.clone());
        coords
    }

    /// Class of the letter t_H in A_1.
    pub fn letter(&self, h: usize) -> Vec<FieldElement> {
        self.class_of_word(1, h)
    }

    /// t_X = Σ_{H ⊆ X} t_H in A_1.
    pub fn t_flat(&self, x: &Flat) -> Vec<FieldElement> {
        let mut acc = self.degrees[1].zero();
        for h in self.arr.hyperplanes_in(x) {
            acc = add_vec(&acc, &self.letter(h));
        }
        acc
    }

    /// Product A_p × A_q → A_{p+q} by concatenation of representatives.
    pub fn product(
        &self,
        p: usize,
        a: &[FieldElement],
        q: usize,
        b: &[FieldElement],
    ) -> Vec<FieldElement> {
        let n = p + q;
        let deg_p = &self.degrees[p];
        let deg_q = &self.degrees[q];
        let size_q = deg_q.words.size();
        let mut acc = self.degrees[n].zero();
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let concat = deg_p.basis_words[i] * size_q + deg_q.basis_words[j];
                let cls = self.class_of_word(n, concat);
                let c = ca.mul(cb).expect("same field");
                for (k, x) in cls.iter().enumerate() {
                    if !x.is_zero() {
                        acc[k] = acc[k].add(&x.mul(&c).unwrap()).unwrap();
                    }
                }
            }
        }
        acc
    }

    /// Coproduct component Δ_{p,q} of an A_n class, as a matrix indexed by
    /// (A_p basis × A_q basis).
    pub fn coproduct_component(
        &self,
        n: usize,
        coords: &[FieldElement],
        p: usize,
    ) -> Vec<Vec<FieldElement>> {
        let q = n - p;
        let deg = &self.degrees[n];
        let deg_p = &self.degrees[p];
        let deg_q = &self.degrees[q];
        let mut out = vec![vec![FieldElement::zero(); deg_q.dim()]; deg_p.dim()];
        // Δ(word) = Σ over position subsets; expand on the lifted
        // representative.
        for (i, &widx) in deg.basis_words.iter().enumerate() {
            if coords[i].is_zero() {
                continue;
            }
            let word = deg.words.word(widx);
            for mask in 0..(1u32 << n) {
                if mask.count_ones() as usize != p {
                    continue;
                }
                let mut left = Vec::with_capacity(p);
                let mut right = Vec::with_capacity(q);
                for (pos, &l) in word.iter().enumerate() {
                    if mask & (1 << pos) != 0 {
                        left.push(l);
                    } else {
                        right.push(l);
                    }
                }
                let lc = self.class_of_word(p, deg_p.words.index(&left));
                let rc = self.class_of_word(q, deg_q.words.index(&right));
                for (a, la) in lc.iter().enumerate() {
                    if la.is_zero() {
                        continue;
                    }
                    for (b, rb) in rc.iter().enumerate() {
                        if rb.is_zero() {
                            continue;
                        }
                        let t = coords[i].mul(la).unwrap().mul(rb).unwrap();
                        out[a][b] = out[a][b].add(&t).unwrap();
                    }
                }
            }
        }
        out
    }
}

pub fn add_vec(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(x, y)| x.add(y).unwrap()).collect()
}

pub fn sub_vec(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    a.iter().zip(b).map(|(x, y)| x.sub(y).unwrap()).collect()
}

pub fn scale_vec(a: &[FieldElement], c: &FieldElement) -> Vec<FieldElement> {
    a.iter().map(|x| x.mul(c).unwrap()).collect()
}

pub fn is_zero_vec(a: &[FieldElement]) -> bool {
    a.iter().all(|x| x.is_zero())
}

/// A linear map between holonomy algebras determined by letter images,
/// extended multiplicatively to words.
pub struct AlgebraMap<'a> {
    pub source: &'a HolonomySystem,
    pub target: &'a HolonomySystem,
    /// Image of each source letter as a degree-1 dense vector over target
    /// letters.
    pub letter_images: Vec<Vec<FieldElement>>,
}

impl AlgebraMap<'_> {
    /// Image of an A_n class of the source in A_n of the target.
    pub fn apply(&self, n: usize, coords: &[FieldElement]) -> Vec<FieldElement> {
        let sdeg = &self.source.degrees[n];
        let tdeg = &self.target.degrees[n];
        let tm = self.target.arr.len();
        let mut acc = tdeg.zero();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let word = sdeg.words.word(sdeg.basis_words[i]);
            // Tensor-expand the letter images.
            let mut dense: HashMap<usize, FieldElement> = HashMap::new();
            dense.insert(0, c.clone());
            for &l in &word {
                let img = &self.letter_images[l];
                let mut next: HashMap<usize, FieldElement> = HashMap::new();
                for (idx, coeff) in &dense {
                    for (t, tc) in img.iter().enumerate() {
                        if tc.is_zero() {
                            continue;
                        }
                        let nidx = idx * tm + t;
                        let v = coeff.mul(tc).unwrap();
                        let e = next.entry(nidx).or_insert_with(FieldElement::zero);
                        *e = e.add(&v).unwrap();
                    }
                }
                dense = next;
            }
            let mut vec = vec![FieldElement::zero(); tdeg.words.size()];
            for (idx, coeff) in dense {
                vec[idx] = vec[idx].add(&coeff).unwrap();
            }
            let cls = tdeg.project(vec);
            acc = add_vec(&acc, &cls);
        }
        acc
    }

    /// Rank of the degree-n component, for injectivity checks.
    pub fn rank_at(&self, n: usize) -> usize {
        let sdim = self.source.dim(n);
        let rows: Vec<Vec<FieldElement>> = (0..sdim)
            .map(|i| {
                let mut e = self.source.degrees[n].zero();
                e[i] = FieldElement::one();
                self.apply(n, &e)
            })
            .collect();
        crate::matrix::Matrix::new(rows, self.target.dim(n)).rank()
    }
}

/// Formal series Σ_n a_n with a_n ∈ A_n ⊗ ℚ\[τ\], truncated at the system's
/// maximum weight. Coefficients are polynomials in the central symbol
/// τ = 2πi.
#[derive(Clone, Debug)]
pub struct TauSeries {
    /// weight → A_n-coordinate vector of τ-polynomials (inner Vec by
    /// τ-degree).
    pub parts: Vec<Vec<Vec<FieldElement>>>,
}

fn tau_add(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut out = vec![FieldElement::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] = out[i].add(x).unwrap();
    }
    for (i, y) in b.iter().enumerate() {
        out[i] = out[i].add(y).unwrap();
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

fn tau_mul(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![FieldElement::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul(y).unwrap()).unwrap();
            }
        }
    }
    out
}

impl TauSeries {
    pub fn one(system: &HolonomySystem) -> TauSeries {
        let mut parts: Vec<Vec<Vec<FieldElement>>> = Vec::new();
        for n in 0..=system.max_weight() {
            parts.push(vec![Vec::new(); system.dim(n)]);
        }
        parts[0][0] = vec![FieldElement::one()];
        TauSeries { parts }
    }

    pub fn weight_truncation(&self) -> usize {
        self.parts.len() - 1
    }

    /// exp(τ·t_X) truncated at the system's maximum weight.
    pub fn exp_tau_flat(system: &HolonomySystem, x: &Flat) -> TauSeries {
        let mut out = TauSeries::one(system);
        let t = system.t_flat(x);
        // Accumulate τ^n t_X^n / n!.
        let mut power: Vec<FieldElement> = t.clone(); // t_X^n in A_n coords
        let mut factorial = FieldElement::one();
        for n in 1..=system.max_weight() {
            factorial = factorial.mul(&FieldElement::integer(n as i64)).unwrap();
            let inv = factorial.inv().unwrap();
            for (i, c) in power.iter().enumerate() {
                if !c.is_zero() {
                    let mut tau_poly = vec![FieldElement::zero(); n + 1];
                    tau_poly[n] = c.mul(&inv).unwrap();
                    out.parts[n][i] = tau_add(&out.parts[n][i], &tau_poly);
                }
            }
            if n < system.max_weight() {
                power = system.product(n, &power, 1, &t);
            }
        }
        out
    }

    pub fn mul(&self, system: &HolonomySystem, other: &TauSeries) -> TauSeries {
        let max = self.weight_truncation();
        let mut parts: Vec<Vec<Vec<FieldElement>>> = Vec::new();
        for n in 0..=max {
            parts.push(vec![Vec::new(); system.dim(n)]);
        }
        for p in 0..=max {
            for q in 0..=(max - p) {
                // Bilinear product over τ-polynomial coordinates.
                for (i, ca) in self.parts[p].iter().enumerate() {
                    if ca.is_empty() {
                        continue;
                    }
                    for (j, cb) in other.parts[q].iter().enumerate() {
                        if cb.is_empty() {
                            continue;
                        }
                        let mut ea = system.degrees[p].zero();
                        ea[i] = FieldElement::one();
                        let mut eb = system.degrees[q].zero();
                        eb[j] = FieldElement::one();
                        let prod = system.product(p, &ea, q, &eb);
                        let tau = tau_mul(ca, cb);
                        for (k, pc) in prod.iter().enumerate() {
                            if !pc.is_zero() {
                                let scaled: Vec<FieldElement> =
                                    tau.iter().map(|t| t.mul(pc).unwrap()).collect();
                                parts[p + q][k] = tau_add(&parts[p + q][k], &scaled);
                            }
                        }
                    }
                }
            }
        }
        TauSeries { parts }
    }

    /// Multiplicative inverse of a series with unit constant term.
    pub fn inverse(&self, system: &HolonomySystem) -> TauSeries {
        let max = self.weight_truncation();
        let mut inv = TauSeries::one(system);
        // inv_n = −Σ_{p=1..n} self_p · inv_{n−p}, computed weight by weight.
        for n in 1..=max {
            let mut acc = vec![Vec::new(); system.dim(n)];
            for p in 1..=n {
                for (i, ca) in self.parts[p].iter().enumerate() {
                    if ca.is_empty() {
                        continue;
                    }
                    for (j, cb) in inv.parts[n - p].iter().enumerate() {
                        if cb.is_empty() {
                            continue;
                        }
                        let mut ea = system.degrees[p].zero();
                        ea[i] = FieldElement::one();
                        let mut eb = system.degrees[n - p].zero();
                        eb[j] = FieldElement::one();
                        let prod = system.product(p, &ea, n - p, &eb);
                        let tau = tau_mul(ca, cb);
                        for (k, pc) in prod.iter().enumerate() {
                            if !pc.is_zero() {
                                let scaled: Vec<FieldElement> =
                                    tau.iter().map(|t| t.mul(pc).unwrap()).collect();
                                acc[k] = tau_add(&acc[k], &scaled);
                            }
                        }
                    }
                }
            }
            for (k, v) in acc.into_iter().enumerate() {
                inv.parts[n][k] = v.iter().map(|c| c.neg()).collect();
            }
        }
        inv
    }

    /// Group-likeness: Δs = s ⊗ s in every bidegree, coefficientwise in τ.
    pub fn is_group_like(&self, system: &HolonomySystem) -> bool {
        let max = self.weight_truncation();
        for n in 0..=max {
            for p in 0..=n {
                let q = n - p;
                // Both sides live in A_p ⊗ A_q with τ-polynomial entries.
                let dim_p = system.dim(p);
                let dim_q = system.dim(q);
                let mut lhs = vec![vec![Vec::new(); dim_q]; dim_p];
                for (i, c) in self.parts[n].iter().enumerate() {
                    if c.is_empty() {
                        continue;
                    }
                    let mut e = system.degrees[n].zero();
                    e[i] = FieldElement::one();
                    let comp = system.coproduct_component(n, &e, p);
                    for (a, row) in comp.iter().enumerate() {
                        for (b, v) in row.iter().enumerate() {
                            if !v.is_zero() {
                                let scaled: Vec<FieldElement> =
                                    c.iter().map(|t| t.mul(v).unwrap()).collect();
                                lhs[a][b] = tau_add(&lhs[a][b], &scaled);
                            }
                        }
                    }
                }
                for a in 0..dim_p {
                    for b in 0..dim_q {
                        let rhs = tau_mul(&self.parts[p][a], &self.parts[q][b]);
                        if tau_add(&lhs[a][b], &rhs.iter().map(|c| c.neg()).collect::<Vec<_>>())
                            .iter()
                            .any(|c| !c.is_zero())
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// exp(τ t_X) truncated at weight N: the local monodromy factor around D_X.
pub fn monodromy_factor(
    system: &HolonomySystem,
    lattice: &IntersectionLattice,
    x: &Flat,
) -> Result<TauSeries, Error> {
    lattice.require(x)?;
    let s = TauSeries::exp_tau_flat(system, x);
    if !s.is_group_like(system) {
        return Err(Error::Internal("exp(τ t_X) is not group-like".into()));
    }
    Ok(s)
}

/// G(S,S′)·e^{τ t_X}·G(S′,S) assembled from a placeholder series g for
/// G(S,S′); its inverse plays G(S′,S).
pub fn conjugated_monodromy(
    system: &HolonomySystem,
    g: &TauSeries,
    exp_part: &TauSeries,
) -> TauSeries {
    g.mul(system, exp_part).mul(system, &g.inverse(system))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::builtin;
    use crate::lattice::IntersectionLattice;

    #[test]
    fn dims_weight_zero_and_one() {
        let a = builtin("ex_irred", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let sys = HolonomySystem::build(&l, 2);
        assert_eq!(sys.dim(0), 1);
        assert_eq!(sys.dim(1), a.len() - 1);
    }

    #[test]
    fn one_dimensional_arrangement_is_free() {
        // ℙ¹ ∖ {0, 1, ∞}: dim A_n = 2^n.
        let a = builtin("monomial", &[1, 1]).unwrap();
        let l = IntersectionLattice::build(&a);
        let sys = HolonomySystem::build(&l, 3);
        assert_eq!(sys.dim(1), 2);
        assert_eq!(sys.dim(2), 4);
        assert_eq!(sys.dim(3), 8);
    }

    #[test]
    fn letters_sum_to_zero() {
        let a = builtin("ex_ss_not_enough", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let sys = HolonomySystem::build(&l, 2);
        let mut acc = sys.degrees[1].zero();
        for h in 0..a.len() {
            acc = add_vec(&acc, &sys.letter(h));
        }
        assert!(is_zero_vec(&acc));
        // t_{V*} = 0 as well.
        assert!(is_zero_vec(&sys.t_flat(&Flat::full(3))));
    }

    #[test]
    fn nested_flats_commute() {
        let a = builtin("ex_pred3", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let sys = HolonomySystem::build(&l, 2);
        let x = Flat::from_rows(vec![a.hyperplanes[0].clone()], 4);
        let f = crate::lattice::minimal_building(&l);
        // {⟨x1⟩, ⟨x2,x4⟩-ish}: find a nested pair and check [t_X, t_Y] = 0.
        for y in f.flats() {
            if y.dim() == 2 && !y.contains_flat(&x) {
                let sum = x.sum(y);
                if !f.contains(&sum) {
                    let tx = sys.t_flat(&x);
                    let ty = sys.t_flat(y);
                    let xy = sys.product(1, &tx, 1, &ty);
                    let yx = sys.product(1, &ty, 1, &tx);
                    assert!(is_zero_vec(&sub_vec(&xy, &yx)), "nested pair should commute");
                }
            }
        }
    }

    #[test]
    fn monodromy_truncations() {
        let a = builtin("monomial", &[1, 1]).unwrap();
        let l = IntersectionLattice::build(&a);
        let sys = HolonomySystem::build(&l, 2);
        let x = Flat::from_rows(vec![a.hyperplanes[0].clone()], 2);
        let m = monodromy_factor(&sys, &l, &x).unwrap();
        // Weight 0 is 1; weight 1 is τ·t_X.
        assert_eq!(m.parts[0][0], vec![FieldElement::one()]);
        let t = sys.t_flat(&x);
        for (i, c) in m.parts[1].iter().enumerate() {
            if t[i].is_zero() {
                assert!(c.is_empty());
            } else {
                assert_eq!(c.len(), 2);
                assert_eq!(c[1], t[i]);
            }
        }
        // Nested pair: factors commute exactly.
        let y = Flat::full(2);
        let my = monodromy_factor(&sys, &l, &y).unwrap();
        let ab = m.mul(&sys, &my);
        let ba = my.mul(&sys, &m);
        for n in 0..=2 {
            for i in 0..sys.dim(n) {
                assert_eq!(ab.parts[n][i], ba.parts[n][i]);
            }
        }
    }

    #[test]
    fn conjugated_monodromy_assembles() {
        let a = builtin("monomial", &[1, 1]).unwrap();
        let l = IntersectionLattice::build(&a);
        let sys = HolonomySystem::build(&l, 3);
        let x = Flat::from_rows(vec![a.hyperplanes[0].clone()], 2);
        let exp = monodromy_factor(&sys, &l, &x).unwrap();
        // Conjugating by a group-like placeholder keeps the weight-0 term
        // and reduces to exp itself when the placeholder is 1.
        let one = TauSeries::one(&sys);
        let same = conjugated_monodromy(&sys, &one, &exp);
        for n in 0..=3 {
            for i in 0..sys.dim(n) {
                assert_eq!(same.parts[n][i], exp.parts[n][i]);
            }
        }
        // A nontrivial placeholder: exp(τ t_Y) for another flat.
        let y = Flat::from_rows(vec![a.hyperplanes[1].clone()], 2);
        let g = TauSeries::exp_tau_flat(&sys, &y);
        let conj = conjugated_monodromy(&sys, &g, &exp);
        assert_eq!(conj.parts[0][0], vec![FieldElement::one()]);
        // Conjugation preserves group-likeness.
        assert!(conj.is_group_like(&sys));
    }

    #[test]
    fn series_inverse() {
        let a = builtin("monomial", &[1, 1]).unwrap();
        let l = IntersectionLattice::build(&a);
        let sys = HolonomySystem::build(&l, 3);
        let x = Flat::from_rows(vec![a.hyperplanes[0].clone()], 2);
        let m = TauSeries::exp_tau_flat(&sys, &x);
        let inv = m.inverse(&sys);
        let prod = m.mul(&sys, &inv);
        let one = TauSeries::one(&sys);
        for n in 0..=3 {
            for i in 0..sys.dim(n) {
                assert_eq!(prod.parts[n][i], one.parts[n][i], "weight {n}");
            }
        }
    }
}
