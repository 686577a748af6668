//! Local charts U_S of the wonderful compactification: chart polynomials
//! P_H^S, the boundary-divisor product decomposition, M-adapted bases,
//! retraction coordinate maps, and Laurent coefficients.
//!
//! A chart is indexed by a maximal nested set S with adapted basis β. Chart
//! coordinates u_Y are indexed by Y ∈ S with u_{V*} excluded. Writing
//! x_H = Σ_Y c_Y x_{β(Y)} (support inside p_S(x_H)), the chart polynomial is
//!
//!   P_H^S = Σ_Y c_Y · ∏_{Z ∈ S, Y ⊆ Z ⊊ p_S(x_H)} u_Z,
//!
//! which has constant term c_{p_S(x_H)} ≠ 0 and P_{β(X)}^S = 1 for X ∈ S.

use std::fmt::Write as _;

use crate::arrangement::{Arrangement, Flat};
use crate::error::Error;
use crate::field::FieldElement;
use crate::lattice::{BuildingSet, IntersectionLattice};
use crate::matrix::{Matrix, Row};
use crate::modularity::{has_enough_g_modular, modular_complement};
use crate::nested::{
    adapted_bases, is_adapted, nested_quotient, nested_restrict, p_in_nested, AdaptedBasis,
    NestedSet,
};
use crate::poly::{Poly, RationalFunction};

/// A local chart: coordinates u_Y for Y ∈ S ∖ {V*} (in S's canonical order)
/// and one chart polynomial per hyperplane.
#[derive(Clone, Debug)]
pub struct Chart {
    pub arrangement: Arrangement,
    pub nested: NestedSet,
    pub beta: AdaptedBasis,
    /// Indices into `nested.flats()` of the coordinate flats (V* excluded).
    pub coordinates: Vec<usize>,
    /// P_H^S per hyperplane, a polynomial in the chart coordinates.
    pub polynomials: Vec<Poly>,
    /// p_S(x_H) per hyperplane, as an index into `nested.flats()`.
    pub anchor: Vec<usize>,
    /// The vector x_H chosen on each hyperplane (the canonical covector for
    /// a fresh chart; the induced image vectors for boundary factors).
    pub vectors: Vec<Row>,
}

impl Chart {
    pub fn nvars(&self) -> usize {
        self.coordinates.len()
    }

    /// Coordinate index of the flat Y, if u_Y is a chart coordinate.
    pub fn var_of_flat(&self, y: &Flat) -> Option<usize> {
        let pos = self.nested.position(y)?;
        self.coordinates.iter().position(|&c| c == pos)
    }

    pub fn coordinate_flat(&self, var: usize) -> &Flat {
        &self.nested.flats()[self.coordinates[var]]
    }

    pub fn variable_names(&self) -> Vec<String> {
        self.coordinates
            .iter()
            .map(|&i| {
                let mut name = String::from("u");
                let f = &self.nested.flats()[i];
                write!(name, "[{}]", flat_label(f)).expect("writing to a string");
                name
            })
            .collect()
    }
}

fn flat_label(f: &Flat) -> String {
    let rows: Vec<String> = f
        .basis()
        .rows
        .iter()
        .map(|r| {
            r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
        })
        .collect();
    rows.join(";")
}

/// Expand x_H in the adapted basis and assemble the chart with the
/// canonical covectors as the chosen hyperplane vectors.
pub fn make_chart(arr: &Arrangement, s: &NestedSet, beta: &AdaptedBasis) -> Result<Chart, Error> {
    make_chart_with_vectors(arr, s, beta, arr.hyperplanes.clone())
}

/// Chart with an explicit vector x_H per hyperplane (each spanning its
/// line). Boundary factors use the images of the parent chart's vectors, so
/// the P-polynomial identities hold on the nose instead of up to scalars.
pub fn make_chart_with_vectors(
    arr: &Arrangement,
    s: &NestedSet,
    beta: &AdaptedBasis,
    vectors: Vec<Row>,
) -> Result<Chart, Error> {
    if s.len() != arr.dim || !is_adapted(arr, s, beta) {
        return Err(Error::NotAdapted);
    }
    for (h, v) in vectors.iter().enumerate() {
        if arr.hyperplane_index(v) != Some(h) {
            return Err(Error::BadParams("vector does not span its hyperplane".into()));
        }
    }
    let full = Flat::full(arr.dim);
    let coordinates: Vec<usize> =
        (0..s.len()).filter(|&i| s.flats()[i] != full).collect();
    let nvars = coordinates.len();
    let basis_rows: Vec<Row> =
        beta.assignment.iter().map(|&h| vectors[h].clone()).collect();
    let basis = Matrix::new(basis_rows, arr.dim);
    let mut polynomials = Vec::with_capacity(arr.len());
    let mut anchor = Vec::with_capacity(arr.len());
    for h in 0..arr.len() {
        let coeffs = basis
            .express_in_rows(&vectors[h])
            .ok_or_else(|| Error::Internal("adapted basis does not span V*".into()))?;
        let p_flat = p_in_nested(&vectors[h], s, arr.dim)?;
        let p_idx = s
            .position(&p_flat)
            .ok_or_else(|| Error::Internal("p_S(x_H) must lie in S".into()))?;
        let mut poly = Poly::zero(nvars);
        for (yi, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let y = &s.flats()[yi];
            if !p_flat.contains_flat(y) {
                return Err(Error::Internal(
                    "expansion support escapes p_S(x_H)".into(),
                ));
            }
            // Monomial ∏ u_Z over the chain segment Y ⊆ Z ⊊ p_S(x_H).
            let mut exps = vec![0u16; nvars];
            for (vi, &ci) in coordinates.iter().enumerate() {
                let z = &s.flats()[ci];
                if z.contains_flat(y) && p_flat.contains_flat(z) && *z != p_flat {
                    exps[vi] += 1;
                }
            }
            poly.add_term(crate::poly::Monomial(exps), c.clone());
        }
        // Constant term must be the coefficient at p_S(x_H), and nonzero.
        if poly.constant_term() != coeffs[p_idx] || coeffs[p_idx].is_zero() {
            return Err(Error::Internal("chart polynomial vanishes at the origin".into()));
        }
        // Support bound: only u_Z with Z ⊊ p_S(x_H) appear.
        for (vi, &ci) in coordinates.iter().enumerate() {
            if poly.uses_var(vi) {
                let z = &s.flats()[ci];
                if !(p_flat.contains_flat(z) && *z != p_flat) {
                    return Err(Error::Internal("chart polynomial support bound violated".into()));
                }
            }
        }
        polynomials.push(poly);
        anchor.push(p_idx);
    }
    // P_{β(X)}^S = 1 for members of S.
    for &h in &beta.assignment {
        if !polynomials[h].is_one() {
            return Err(Error::Internal("P at an adapted hyperplane is not 1".into()));
        }
    }
    Ok(Chart {
        arrangement: arr.clone(),
        nested: s.clone(),
        beta: beta.clone(),
        coordinates,
        polynomials,
        anchor,
        vectors,
    })
}

/// Chart polynomial of an arbitrary vector x (not necessarily one of the
/// canonical covectors): x = β(p_S(x))·P, so scaling x scales P.
pub fn chart_polynomial_of_vector(chart: &Chart, v: &Row) -> Result<Poly, Error> {
    let arr = &chart.arrangement;
    let s = &chart.nested;
    let basis_rows: Vec<Row> =
        chart.beta.assignment.iter().map(|&h| chart.vectors[h].clone()).collect();
    let basis = Matrix::new(basis_rows, arr.dim);
    let coeffs = basis
        .express_in_rows(v)
        .ok_or_else(|| Error::Internal("vector outside the adapted span".into()))?;
    let p_flat = p_in_nested(v, s, arr.dim)?;
    let nvars = chart.nvars();
    let mut poly = Poly::zero(nvars);
    for (yi, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let y = &s.flats()[yi];
        let mut exps = vec![0u16; nvars];
        for (vi, &ci) in chart.coordinates.iter().enumerate() {
            let z = &s.flats()[ci];
            if z.contains_flat(y) && p_flat.contains_flat(z) && *z != p_flat {
                exps[vi] += 1;
            }
        }
        poly.add_term(crate::poly::Monomial(exps), c.clone());
    }
    Ok(poly)
}

/// A polynomial substitution between chart coordinate rings, recorded as the
/// image of each target coordinate in the source variables.
#[derive(Clone, Debug)]
pub struct CoordinateMap {
    pub source_nvars: usize,
    /// images\[j\] = polynomial in source coordinates substituted for target
    /// coordinate j.
    pub images: Vec<Poly>,
}

impl CoordinateMap {
    pub fn identity(nvars: usize) -> CoordinateMap {
        CoordinateMap {
            source_nvars: nvars,
            images: (0..nvars).map(|i| Poly::var(nvars, i)).collect(),
        }
    }

    /// Apply to a polynomial in the target coordinates.
    pub fn apply(&self, p: &Poly) -> Poly {
        p.substitute(&self.images, self.source_nvars)
    }

    /// self ∘ other: first `self` (mapping target→mid), then `other`
    /// (mid→source): images become other.apply(self.images\[j\]).
    pub fn then(&self, other: &CoordinateMap) -> CoordinateMap {
        CoordinateMap {
            source_nvars: other.source_nvars,
            images: self.images.iter().map(|p| other.apply(p)).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.len() == self.source_nvars
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, p)| *p == Poly::var(self.source_nvars, i))
    }
}

/// Boundary decomposition at X ∈ S: charts for (S|_X, β|_X) and (S/X, β/X)
/// with the exact P-polynomial identities of {u_X = 0} ≅ U_{S|_X} × U_{S/X}.
pub struct BoundaryRestriction {
    pub chart_restricted: Chart,
    pub chart_quotient: Chart,
    /// Map from the product chart into {u_X=0} ⊂ U_S: for each source
    /// coordinate of U_S, either 0 (at X) or the corresponding factor
    /// coordinate.
    pub inclusion: CoordinateMap,
    /// Which variables of U_S belong to the restricted factor.
    pub restricted_vars: Vec<usize>,
    pub quotient_vars: Vec<usize>,
}

pub fn boundary_restriction(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    chart: &Chart,
    x: &Flat,
) -> Result<BoundaryRestriction, Error> {
    let arr = &chart.arrangement;
    let s = &chart.nested;
    if !s.contains(x) {
        return Err(Error::BadParams("X must belong to S".into()));
    }
    let q = arr.quotient(x)?;
    let r = arr.restriction(x)?;
    let (_, _, s_res, beta_res) = nested_restrict(lattice, g, s, &chart.beta, x)?;
    let res_vectors: Vec<Row> = q
        .kept
        .iter()
        .map(|&h| {
            q.map_covector(&chart.vectors[h])
                .ok_or_else(|| Error::Internal("hyperplane inside X must map".into()))
        })
        .collect::<Result<_, _>>()?;
    let chart_restricted = make_chart_with_vectors(&q.arrangement, &s_res, &beta_res, res_vectors)?;
    let full = Flat::full(arr.dim);
    let (chart_quotient, s_quo) = if *x == full {
        // Trivial second factor.
        let empty = NestedSet::from_flats(vec![]);
        (
            Chart {
                arrangement: Arrangement {
                    dim: 0,
                    hyperplanes: vec![],
                    field: arr.field,
                },
                nested: empty.clone(),
                beta: AdaptedBasis { assignment: vec![] },
                coordinates: vec![],
                polynomials: vec![],
                anchor: vec![],
                vectors: vec![],
            },
            empty,
        )
    } else {
        let (_, _, s_quo, beta_quo) = nested_quotient(lattice, g, s, &chart.beta, x)?;
        // Induced vectors: classes carrying the induced adapted basis get the
        // image of the parent's β-vector; the rest get their first
        // representative's image.
        let mut quo_vectors: Vec<Row> = (0..r.arrangement.len())
            .map(|class| {
                let rep = r.class_members(class)[0];
                r.map_covector(&chart.vectors[rep])
                    .ok_or_else(|| Error::Internal("class representative must map".into()))
            })
            .collect::<Result<_, _>>()?;
        for (i, y) in s.flats().iter().enumerate() {
            if !x.contains_flat(y) {
                let h = chart.beta.assignment[i];
                let class = r.class_of[h]
                    .ok_or_else(|| Error::Internal("adapted hyperplane collapses into X".into()))?;
                quo_vectors[class] = r
                    .map_covector(&chart.vectors[h])
                    .ok_or_else(|| Error::Internal("adapted hyperplane must map".into()))?;
            }
        }
        (
            make_chart_with_vectors(&r.arrangement, &s_quo, &beta_quo, quo_vectors)?,
            s_quo,
        )
    };

    // Partition of the chart variables.
    let mut restricted_vars = Vec::new();
    let mut quotient_vars = Vec::new();
    for v in 0..chart.nvars() {
        let y = chart.coordinate_flat(v);
        if y == x {
            continue;
        }
        if x.contains_flat(y) {
            restricted_vars.push(v);
        } else {
            quotient_vars.push(v);
        }
    }

    // Variable correspondence u_Y (Y ⊊ X) ↦ u^{S|_X}_Y and
    // u_Y (Y ⊄ X) ↦ u^{S/X}_{(Y+X)/X}.
    let res_var_for = |y: &Flat| -> Result<usize, Error> {
        chart_restricted
            .var_of_flat(&q.map_flat(y))
            .ok_or_else(|| Error::Internal("missing restricted coordinate".into()))
    };
    let quo_var_for = |y: &Flat| -> Result<usize, Error> {
        chart_quotient
            .var_of_flat(&r.map_flat(y))
            .ok_or_else(|| Error::Internal("missing quotient coordinate".into()))
    };

    // Identity (a): H ⊆ X ⇒ P_H^S uses only u_Y with Y ⊊ X and maps to
    // P_H^{S|_X}.
    for (hq, &h) in q.kept.iter().enumerate() {
        let p = &chart.polynomials[h];
        for v in 0..chart.nvars() {
            if p.uses_var(v) && !restricted_vars.contains(&v) {
                return Err(Error::Internal(
                    "P of a hyperplane inside X uses a coordinate outside X".into(),
                ));
            }
        }
        let mut image = vec![0usize; chart.nvars()];
        for &v in &restricted_vars {
            image[v] = res_var_for(chart.coordinate_flat(v))?;
        }
        let renamed = p.rename_vars(chart_restricted.nvars(), &image);
        if renamed != chart_restricted.polynomials[hq] {
            return Err(Error::Internal("restricted P-polynomial identity failed".into()));
        }
    }

    // Identity (b): H ⊄ X ⇒ P_H^S|_{u_X=0} maps to P^{S/X} of the image
    // vector of x_H.
    if *x != full {
        let x_var = chart.var_of_flat(x).ok_or_else(|| Error::Internal("u_X missing".into()))?;
        let mut image = vec![0usize; chart.nvars()];
        for &v in &quotient_vars {
            image[v] = quo_var_for(chart.coordinate_flat(v))?;
        }
        for h in 0..arr.len() {
            if x.contains_vector(&arr.hyperplanes[h]) {
                continue;
            }
            let restricted = chart.polynomials[h].set_var_zero(x_var);
            // Restriction kills every variable u_Y with Y ⊆ X as well: those
            // terms carry u_X in their chain monomials only if Y ⊆ X ⊊ p; a
            // term with support meeting X but missing u_X cannot occur.
            for v in 0..chart.nvars() {
                if restricted.uses_var(v) && !quotient_vars.contains(&v) {
                    return Err(Error::Internal(
                        "restricted P keeps a coordinate from the X side".into(),
                    ));
                }
            }
            let renamed = restricted.rename_vars(chart_quotient.nvars(), &image);
            let image_vector = r
                .map_covector(&chart.vectors[h])
                .ok_or_else(|| Error::Internal("hyperplane collapsed unexpectedly".into()))?;
            let expected = chart_polynomial_of_vector(&chart_quotient, &image_vector)?;
            if renamed != expected {
                return Err(Error::Internal("quotient P-polynomial identity failed".into()));
            }
        }
    }

    // Inclusion of {u_X=0} as a coordinate map from the product into U_S:
    // source variables = (restricted chart, then quotient chart).
    let src_n = chart_restricted.nvars() + chart_quotient.nvars();
    let mut images = Vec::with_capacity(chart.nvars());
    for v in 0..chart.nvars() {
        let y = chart.coordinate_flat(v).clone();
        if y == *x {
            images.push(Poly::zero(src_n));
        } else if x.contains_flat(&y) {
            images.push(Poly::var(src_n, res_var_for(&y)?));
        } else {
            images.push(Poly::var(src_n, chart_restricted.nvars() + quo_var_for(&y)?));
        }
    }
    let _ = s_quo;
    Ok(BoundaryRestriction {
        chart_restricted,
        chart_quotient,
        inclusion: CoordinateMap { source_nvars: src_n, images },
        restricted_vars,
        quotient_vars,
    })
}

/// β is M-adapted at X when β(Y) ⊆ M for every Y ∈ S not contained in X.
/// The per-instance identities (Y+X) ∩ M = Y ∩ M are verified alongside.
pub fn is_m_adapted(
    arr: &Arrangement,
    s: &NestedSet,
    beta: &AdaptedBasis,
    x: &Flat,
    m: &Flat,
) -> Result<bool, Error> {
    if !is_adapted(arr, s, beta) {
        return Err(Error::NotAdapted);
    }
    for (i, y) in s.flats().iter().enumerate() {
        if x.contains_flat(y) {
            continue;
        }
        if !m.contains_vector(&arr.hyperplanes[beta.assignment[i]]) {
            return Ok(false);
        }
    }
    // S_M = {(Y+X) ∩ M} agrees with {Y ∩ M} elementwise.
    for y in s.flats() {
        if x.contains_flat(y) {
            continue;
        }
        if y.sum(x).intersect(m) != y.intersect(m) {
            return Err(Error::Internal("(Y+X) ∩ M differs from Y ∩ M".into()));
        }
    }
    Ok(true)
}

/// First M-adapted basis in the deterministic enumeration.
pub fn find_m_adapted(
    arr: &Arrangement,
    s: &NestedSet,
    x: &Flat,
    m: &Flat,
) -> Result<AdaptedBasis, Error> {
    for beta in adapted_bases(arr, s)? {
        if is_m_adapted(arr, s, &beta, x, m)? {
            return Ok(beta);
        }
    }
    Err(Error::NoMAdaptedBasis)
}

/// The two retraction components at X ∈ S, as coordinate maps into U_S, and
/// the verified identity: composing with the inclusion of {u_X = 0} is the
/// identity on each factor chart.
pub struct Retraction {
    pub chart: Chart,
    pub m: Flat,
    pub boundary: BoundaryRestriction,
    pub pi1: CoordinateMap,
    pub pi2: CoordinateMap,
}

pub fn retraction_maps(
    lattice: &IntersectionLattice,
    g: &BuildingSet,
    s: &NestedSet,
    x: &Flat,
) -> Result<Retraction, Error> {
    if !has_enough_g_modular(lattice, g)? {
        return Err(Error::NotEnoughGModular);
    }
    let arr = &lattice.arrangement;
    let m = modular_complement(lattice, g, x)?;
    let beta = find_m_adapted(arr, s, x, &m)?;
    let chart = make_chart(arr, s, &beta)?;
    let boundary = boundary_restriction(lattice, g, &chart, x)?;

    // π₁*: u^{S|_X}_Y ↦ u^S_Y for Y ⊊ X.
    let n = chart.nvars();
    let mut pi1_images = Vec::with_capacity(boundary.chart_restricted.nvars());
    let q = arr.quotient(x)?;
    for v in 0..boundary.chart_restricted.nvars() {
        let target_flat = boundary.chart_restricted.coordinate_flat(v);
        let source = chart
            .coordinates
            .iter()
            .enumerate()
            .find(|(_, &ci)| q.map_flat(&chart.nested.flats()[ci]) == *target_flat
                && x.contains_flat(&chart.nested.flats()[ci]))
            .map(|(vi, _)| vi)
            .ok_or_else(|| Error::Internal("missing source coordinate for π1".into()))?;
        pi1_images.push(Poly::var(n, source));
    }
    let pi1 = CoordinateMap { source_nvars: n, images: pi1_images };

    // π₂*: u^{S/X}_{(Y+X)/X} ↦ u^S_Y for Y ⊄ X, Y ≠ V*.
    let r = arr.restriction(x)?;
    let mut pi2_images = Vec::with_capacity(boundary.chart_quotient.nvars());
    for v in 0..boundary.chart_quotient.nvars() {
        let target_flat = boundary.chart_quotient.coordinate_flat(v);
        let source = chart
            .coordinates
            .iter()
            .enumerate()
            .find(|(_, &ci)| {
                let y = &chart.nested.flats()[ci];
                !x.contains_flat(y) && r.map_flat(y) == *target_flat
            })
            .map(|(vi, _)| vi)
            .ok_or_else(|| Error::Internal("missing source coordinate for π2".into()))?;
        pi2_images.push(Poly::var(n, source));
    }
    let pi2 = CoordinateMap { source_nvars: n, images: pi2_images };

    // Retraction identity: π_i then the inclusion of {u_X=0} is the identity
    // on each factor's coordinates.
    let comp1 = pi1.then(&boundary.inclusion);
    for (j, img) in comp1.images.iter().enumerate() {
        if *img != Poly::var(boundary.inclusion.source_nvars, j) {
            return Err(Error::Internal("π1 ∘ inclusion is not the identity".into()));
        }
    }
    let comp2 = pi2.then(&boundary.inclusion);
    let offset = boundary.chart_restricted.nvars();
    for (j, img) in comp2.images.iter().enumerate() {
        if *img != Poly::var(boundary.inclusion.source_nvars, offset + j) {
            return Err(Error::Internal("π2 ∘ inclusion is not the identity".into()));
        }
    }
    Ok(Retraction { chart, m, boundary, pi1, pi2 })
}

/// Laurent coefficients a_n of f in u_X around 0, n = −N..N, each a rational
/// function of the remaining chart coordinates. Computed by truncated series
/// inversion of the P-denominators and cross-checked with the derivative
/// formula a_n = ∂^{n+N}((u_X)^N f)/(n+N)! |_{u_X=0}.
pub struct LaurentExpansion {
    /// Coefficients for exponents −N, …, N.
    pub coefficients: Vec<RationalFunction>,
    pub order: usize,
}

pub fn laurent_coefficients(
    chart: &Chart,
    f: &RationalFunction,
    x: &Flat,
    n_max: usize,
) -> Result<LaurentExpansion, Error> {
    let x_var = chart
        .var_of_flat(x)
        .ok_or_else(|| Error::BadParams("X is not a chart coordinate".into()))?;
    let nvars = chart.nvars();
    // u_X-adic valuations; P-polynomials never vanish on {u_X = 0}, so the
    // denominator's valuation is its explicit u_X power.
    let val = |p: &Poly| -> u16 { p.terms.keys().map(|m| m.0[x_var]).min().unwrap_or(0) };
    let pole = val(&f.den) as i64 - val(&f.num) as i64;
    if pole > n_max as i64 {
        return Err(Error::PoleOrderExceeded(n_max));
    }
    let n = n_max as i64;

    // Series route: expand num and 1/den as power series in u_X with
    // polynomial (resp. rational) coefficients in the other variables.
    let order = (2 * n_max + 1).max(1);
    let series_of_poly = |p: &Poly| -> Vec<Poly> {
        (0..=order as u16 + val(&f.den) + val(&f.num)).map(|k| p.coefficient_of(x_var, k)).collect()
    };
    let num_series = series_of_poly(&f.num);
    let den_series = series_of_poly(&f.den);
    let shift_den = val(&f.den) as usize;
    let shift_num = val(&f.num) as usize;
    // Invert Σ_{k≥0} d_{k+shift} t^k with invertible constant term d0.
    let d0 = den_series[shift_den].clone();
    if d0.is_zero() {
        return Err(Error::Internal("denominator valuation miscomputed".into()));
    }
    let terms = order + n_max + 2;
    let mut inv: Vec<RationalFunction> = Vec::with_capacity(terms);
    let d0r = RationalFunction::from_poly(d0.clone());
    inv.push(RationalFunction::new(Poly::one(nvars), d0.clone())?);
    for k in 1..terms {
        // inv_k = −(Σ_{j=1..k} d_j · inv_{k−j}) / d0
        let mut acc = RationalFunction::zero(nvars);
        for j in 1..=k {
            let dj = den_series.get(shift_den + j).cloned().unwrap_or_else(|| Poly::zero(nvars));
            if dj.is_zero() {
                continue;
            }
            acc = acc.add(&RationalFunction::from_poly(dj).mul(&inv[k - j]));
        }
        inv.push(acc.neg().div(&d0r)?);
    }
    // f = u_X^{shift_num − shift_den} · (Σ numₖ t^k)(Σ invₖ t^k).
    let base = shift_num as i64 - shift_den as i64;
    let mut coefficients = Vec::with_capacity(2 * n_max + 1);
    for e in -n..=n {
        let k = e - base;
        let mut acc = RationalFunction::zero(nvars);
        if k >= 0 {
            for j in 0..=(k as usize) {
                let nj =
                    num_series.get(shift_num + j).cloned().unwrap_or_else(|| Poly::zero(nvars));
                if nj.is_zero() {
                    continue;
                }
                acc = acc.add(&RationalFunction::from_poly(nj).mul(&inv[k as usize - j]));
            }
        }
        coefficients.push(acc);
    }

    // Derivative-formula cross-check: a_e = ∂^{e+N}((u_X)^N f)|_0 / (e+N)!.
    let mut shifted = f.clone();
    let ux = Poly::var(nvars, x_var);
    for _ in 0..n_max {
        shifted = shifted.mul(&RationalFunction::from_poly(ux.clone()));
    }
    let mut fact = FieldElement::one();
    for (step, e) in (-n..=n).enumerate() {
        if step > 0 {
            fact = fact.mul(&FieldElement::integer(step as i64)).expect("rational");
            shifted = shifted.partial_derivative(x_var);
        }
        let at_zero = shifted.set_var_zero(x_var)?;
        let scaled = RationalFunction {
            num: at_zero.num,
            den: at_zero.den.scale(&fact),
        };
        if !scaled.eq_rational(&coefficients[(e + n) as usize]) {
            return Err(Error::Internal("Laurent routes disagree".into()));
        }
    }
    Ok(LaurentExpansion { coefficients, order: n_max })
}

/// Regularity of Laurent coefficients over the boundary factors: every
/// coefficient must lie in the subring generated by the two factor charts'
/// coordinates with only the restricted polynomials P_H|_{u_X=0} inverted.
/// Verified by exact division: after cancelling those factors, monomials,
/// and constants from the denominator, nothing may remain.
pub fn laurent_coefficients_factor_regular(
    chart: &Chart,
    expansion: &LaurentExpansion,
    x: &Flat,
) -> bool {
    let x_var = match chart.var_of_flat(x) {
        Some(v) => v,
        None => return false,
    };
    let nvars = chart.nvars();
    let candidates: Vec<Poly> = chart
        .polynomials
        .iter()
        .map(|p| p.set_var_zero(x_var))
        .filter(|p| !p.is_constant())
        .collect();
    for c in &expansion.coefficients {
        if c.num.is_zero() {
            continue;
        }
        if c.num.uses_var(x_var) || c.den.uses_var(x_var) {
            return false;
        }
        let mut den = c.den.clone();
        'peel: loop {
            if den.is_constant() {
                break;
            }
            for cand in &candidates {
                if let Some(q) = den.exact_div(cand) {
                    den = q;
                    continue 'peel;
                }
            }
            for v in 0..nvars {
                if v == x_var {
                    continue;
                }
                if let Some(q) = den.exact_div(&Poly::var(nvars, v)) {
                    den = q;
                    continue 'peel;
                }
            }
            return false;
        }
    }
    true
}

/// The variable-support profile {(H, p_S(x_H))}: invariant under changes of
/// adapted basis even though the P-polynomials are not.
pub fn chart_profile(chart: &Chart) -> Vec<(usize, Flat)> {
    chart
        .anchor
        .iter()
        .enumerate()
        .map(|(h, &p)| (h, chart.nested.flats()[p].clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::builtin;
    use crate::field::FieldElement;
    use crate::lattice::{minimal_building, minimal_building_with_top};
    use crate::nested::maximal_nested_sets;

    fn fe(n: i64) -> FieldElement {
        FieldElement::integer(n)
    }

    fn flat(rows: Vec<Vec<i64>>, ambient: usize) -> Flat {
        Flat::from_rows(
            rows.into_iter().map(|r| r.into_iter().map(fe).collect()).collect(),
            ambient,
        )
    }

    fn pred3_chart() -> (IntersectionLattice, BuildingSet, Chart) {
        let a = builtin("ex_pred3", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let g = minimal_building(&l);
        let s = NestedSet::from_flats(vec![
            flat(vec![vec![1, 0, 0, 0]], 4),
            flat(vec![vec![0, 1, 0, 0]], 4),
            flat(vec![vec![0, 0, 1, 0]], 4),
            Flat::full(4),
        ]);
        // β with β(V*) = x4.
        let beta = adapted_bases(&a, &s)
            .unwrap()
            .into_iter()
            .find(|b| b.assignment[3] == 3)
            .unwrap();
        let chart = make_chart(&a, &s, &beta).unwrap();
        (l, g, chart)
    }

    #[test]
    fn adapted_hyperplanes_have_unit_polynomials() {
        let (_, _, chart) = pred3_chart();
        for &h in &chart.beta.assignment {
            assert!(chart.polynomials[h].is_one());
        }
    }

    #[test]
    fn pred3_difference_polynomials() {
        // x_i − x_4 expands as x_i·u_{⟨x_i⟩}·(chain) − x_4: P = u_{⟨x_i⟩} − 1.
        let (_, _, chart) = pred3_chart();
        let a = &chart.arrangement;
        for i in 0..3 {
            let mut v = vec![fe(0); 4];
            v[i] = fe(1);
            v[3] = fe(-1);
            let h = a.hyperplane_index(&v).unwrap();
            let var = chart
                .var_of_flat(&Flat::from_rows(vec![{
                    let mut e = vec![fe(0); 4];
                    e[i] = fe(1);
                    e
                }], 4))
                .unwrap();
            let expect = Poly::var(chart.nvars(), var).sub(&Poly::one(chart.nvars()));
            assert_eq!(chart.polynomials[h], expect);
            // Constant term is the coefficient at p_S(x_H) = V*.
            assert_eq!(chart.polynomials[h].constant_term(), fe(-1));
        }
    }

    #[test]
    fn chart_polynomial_matches_independent_substitution() {
        // Independent oracle: substitute ρ(β(Y)) = ∏_{Y⊆Z} u_Z into the
        // expansion of x_H and divide by ρ(β(p_S(x_H))).
        let (_, _, chart) = pred3_chart();
        let a = &chart.arrangement;
        let s = &chart.nested;
        let nv = chart.nvars();
        // ρ over all of S needs a u_{V*} slot; add a temporary variable.
        let rho_var = |yi: usize| -> Poly {
            let mut p = Poly::one(nv + 1);
            for (vi, &ci) in chart.coordinates.iter().enumerate() {
                if s.flats()[ci].contains_flat(&s.flats()[yi]) {
                    p = p.mul(&Poly::var(nv + 1, vi));
                }
            }
            // u_{V*} divides every ρ(β(Y)).
            p.mul(&Poly::var(nv + 1, nv))
        };
        let basis_rows: Vec<Row> =
            chart.beta.assignment.iter().map(|&h| a.hyperplanes[h].clone()).collect();
        let basis = Matrix::new(basis_rows, a.dim);
        for h in 0..a.len() {
            let coeffs = basis.express_in_rows(&a.hyperplanes[h]).unwrap();
            let mut rho_x = Poly::zero(nv + 1);
            for (yi, c) in coeffs.iter().enumerate() {
                rho_x = rho_x.add(&rho_var(yi).scale(c));
            }
            let p_idx = chart.anchor[h];
            let quotient = rho_x.exact_div(&rho_var(p_idx)).expect("lemma: exact unit factor");
            // Forget the auxiliary u_{V*} variable.
            let image: Vec<usize> = (0..nv).collect();
            let mut dropped = Poly::zero(nv);
            for (m, c) in &quotient.terms {
                assert_eq!(m.0[nv], 0, "quotient must not involve u_V*");
                dropped.add_term(crate::poly::Monomial(m.0[..nv].to_vec()), c.clone());
            }
            let _ = image;
            assert_eq!(dropped, chart.polynomials[h], "hyperplane {}", h);
        }
    }

    #[test]
    fn boundary_identities_pred3() {
        let (l, g, chart) = pred3_chart();
        let x1 = flat(vec![vec![1, 0, 0, 0]], 4);
        let b = boundary_restriction(&l, &g, &chart, &x1).unwrap();
        // Variable partition: coordinates of the factors cover S ∖ {X}.
        assert_eq!(
            b.restricted_vars.len() + b.quotient_vars.len() + 1,
            chart.nvars()
        );
        // X = V* gives a trivial second factor.
        let top = boundary_restriction(&l, &g, &chart, &Flat::full(4)).unwrap();
        assert_eq!(top.chart_quotient.nvars(), 0);
    }

    #[test]
    fn m_adapted_and_retraction_monomial() {
        let a = builtin("monomial", &[1, 2]).unwrap();
        let l = IntersectionLattice::build(&a);
        let g = minimal_building(&l);
        for s in maximal_nested_sets(&l, &g) {
            for x in s.flats() {
                if *x == Flat::full(2) {
                    continue;
                }
                let ret = retraction_maps(&l, &g, &s, x).unwrap();
                assert!(is_m_adapted(&a, &s, &ret.chart.beta, x, &ret.m).unwrap());
            }
        }
    }

    #[test]
    fn profile_is_basis_independent() {
        let a = builtin("ex_pred3", &[]).unwrap();
        let l = IntersectionLattice::build(&a);
        let g = minimal_building(&l);
        let sets = maximal_nested_sets(&l, &g);
        let s = &sets[0];
        let bases = adapted_bases(&a, s).unwrap();
        let reference = chart_profile(&make_chart(&a, s, &bases[0]).unwrap());
        for b in &bases[1..] {
            let profile = chart_profile(&make_chart(&a, s, b).unwrap());
            assert_eq!(profile, reference);
        }
        let _ = minimal_building_with_top(&l);
    }

    #[test]
    fn laurent_simple_cases() {
        let (_, _, chart) = pred3_chart();
        let x1 = flat(vec![vec![1, 0, 0, 0]], 4);
        let v = chart.var_of_flat(&x1).unwrap();
        let nv = chart.nvars();
        // f = u_X: coefficients (…, 0, 1, 0, …) centered at exponent 1.
        let f = RationalFunction::from_poly(Poly::var(nv, v));
        let e = laurent_coefficients(&chart, &f, &x1, 2).unwrap();
        for (i, c) in e.coefficients.iter().enumerate() {
            let expect_one = i == 3; // exponent +1 at offset N + 1 = 3
            assert_eq!(!c.is_zero(), expect_one);
        }
        // f independent of u_X: a₀ = f, rest 0.
        let other = chart.var_of_flat(&flat(vec![vec![0, 1, 0, 0]], 4)).unwrap();
        let f = RationalFunction::from_poly(Poly::var(nv, other));
        let e = laurent_coefficients(&chart, &f, &x1, 1).unwrap();
        assert!(e.coefficients[0].is_zero());
        assert!(e.coefficients[1].eq_rational(&f));
        assert!(e.coefficients[2].is_zero());
    }

    #[test]
    fn laurent_inverse_p_polynomial() {
        // 1/P for P = u_X − 1: series −1 − u_X − u_X² − …
        let (_, _, chart) = pred3_chart();
        let a = &chart.arrangement;
        let x1 = flat(vec![vec![1, 0, 0, 0]], 4);
        let h = a.hyperplane_index(&vec![fe(1), fe(0), fe(0), fe(-1)]).unwrap();
        let nv = chart.nvars();
        let f = RationalFunction::new(Poly::one(nv), chart.polynomials[h].clone()).unwrap();
        let e = laurent_coefficients(&chart, &f, &x1, 2).unwrap();
        let minus_one = RationalFunction::from_poly(Poly::constant(nv, fe(-1)));
        assert!(e.coefficients[2].eq_rational(&minus_one)); // a₀
        assert!(e.coefficients[3].eq_rational(&minus_one)); // a₁
        assert!(laurent_coefficients_factor_regular(&chart, &e, &x1));
        // Pole order errors are reported.
        let g = RationalFunction::new(Poly::one(nv), Poly::var(nv, chart.var_of_flat(&x1).unwrap()).pow(3)).unwrap();
        assert!(matches!(
            laurent_coefficients(&chart, &g, &x1, 2),
            Err(Error::PoleOrderExceeded(_))
        ));
    }

    #[test]
    fn laurent_coefficients_stay_in_the_factor_subring() {
        // Expand around a coordinate the P-polynomial does not involve: the
        // coefficients keep 1/(u₁ − 1) factors, which the regularity check
        // must recognize as factor-chart data.
        let (_, _, chart) = pred3_chart();
        let a = &chart.arrangement;
        let x2 = flat(vec![vec![0, 1, 0, 0]], 4);
        let x2_var = chart.var_of_flat(&x2).unwrap();
        let h = a.hyperplane_index(&vec![fe(1), fe(0), fe(0), fe(-1)]).unwrap();
        let nv = chart.nvars();
        // f = u₂ / (P_{x₁−x₄} · u₂²): pole of order 1 with 1/(u₁−1) data.
        let num = Poly::var(nv, x2_var);
        let den = chart.polynomials[h].mul(&Poly::var(nv, x2_var).pow(2));
        let f = RationalFunction::new(num, den).unwrap();
        let e = laurent_coefficients(&chart, &f, &x2, 2).unwrap();
        // a₋₁ = 1/P, the rest of the plain orders vanish below it.
        let inv_p =
            RationalFunction::new(Poly::one(nv), chart.polynomials[h].clone()).unwrap();
        assert!(e.coefficients[1].eq_rational(&inv_p));
        assert!(e.coefficients[0].is_zero());
        assert!(laurent_coefficients_factor_regular(&chart, &e, &x2));
    }
}
