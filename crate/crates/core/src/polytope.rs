//! Exact V-representation polytopes.
//!
//! Every predicate reduces to a small feasibility or optimization LP over the
//! vertex list. The only facet-side object is the vertex set of a gauge ball's
//! polar, used for support-function diameters.

use std::cmp::Ordering;

use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, structural, Error, Result};
use crate::exact_lp::{solve_lp, standard_simplex, Direction, LpProblem, Sense, StdOutcome, VarBounds};
use crate::scalar::Field;
use crate::seqspace::{pair, vector_norm, Functional, NormKind, NormValue, SeqVector, SpaceModel};

/// Size limits for combinatorial steps.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Bound on the product of summand vertex counts in a Minkowski combination.
    pub max_sums: u128,
    /// Bound on generator or vertex counts of any single polytope.
    pub max_vertices: usize,
    /// Bound on barycentric grid sizes used for net certification.
    pub max_grid: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            max_sums: 200_000,
            max_vertices: 5_000,
            max_grid: 200_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct VPolytope<F: Field> {
    pub model: SpaceModel<F>,
    pub vertices: Vec<SeqVector<F>>,
    pub canonical: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfSpaceSense {
    Ge,
    Le,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HalfSpace<F: Field> {
    pub functional: Functional<F>,
    #[serde(with = "crate::scalar::serde_exact")]
    pub bound: F,
    pub sense: HalfSpaceSense,
}

impl<F: Field> HalfSpace<F> {
    pub fn new(functional: Functional<F>, sense: HalfSpaceSense, bound: F) -> Result<Self> {
        if functional.is_zero() {
            return Err(structural("half-space functional must be nonzero"));
        }
        Ok(Self {
            functional,
            bound,
            sense,
        })
    }

    pub fn ge(functional: Functional<F>, bound: F) -> Result<Self> {
        Self::new(functional, HalfSpaceSense::Ge, bound)
    }

    pub fn le(functional: Functional<F>, bound: F) -> Result<Self> {
        Self::new(functional, HalfSpaceSense::Le, bound)
    }

    /// Signed slack: non-negative exactly when `x` satisfies the half-space.
    pub fn slack(&self, x: &SeqVector<F>) -> Result<F> {
        let v = pair(&self.functional, x)?;
        Ok(match self.sense {
            HalfSpaceSense::Ge => v - self.bound.clone(),
            HalfSpaceSense::Le => self.bound.clone() - v,
        })
    }

    pub fn holds(&self, x: &SeqVector<F>) -> Result<bool> {
        Ok(!self.slack(x)?.is_negative())
    }
}

impl<F: Field> VPolytope<F> {
    /// Hull of arbitrary generators (not yet canonical).
    pub fn from_points(model: SpaceModel<F>, points: Vec<SeqVector<F>>) -> Result<Self> {
        if points.is_empty() {
            return Err(structural("a polytope needs at least one generator"));
        }
        for p in &points {
            model.check_vector(p)?;
        }
        Ok(Self {
            model,
            vertices: points,
            canonical: false,
        })
    }

    /// The cube `[-1,1]^n` over all flat coordinates (including the limit slot).
    pub fn cube(dim: usize, has_limit: bool) -> Result<Self> {
        let model = if has_limit {
            SpaceModel::c(dim)
        } else {
            SpaceModel::c0(dim)
        };
        let n = model.flat_len();
        if n > 20 {
            return Err(Error::CapExceeded {
                cap: "cube_dimension",
                needed: n as u128,
                limit: 20,
            });
        }
        let vertices = (0..1u64 << n)
            .map(|mask| {
                let flat = (0..n)
                    .map(|t| {
                        if mask >> (n - 1 - t) & 1 == 1 {
                            F::one()
                        } else {
                            -F::one()
                        }
                    })
                    .collect();
                SeqVector::from_flat(flat, dim, has_limit)
            })
            .collect();
        let mut p = Self {
            model,
            vertices,
            canonical: true,
        };
        p.vertices.sort();
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub(crate) fn flats(&self) -> Vec<Vec<F>> {
        self.vertices.iter().map(SeqVector::flat).collect()
    }

    fn rebuild(&self, flats: Vec<Vec<F>>, canonical: bool) -> Self {
        let mut vertices: Vec<SeqVector<F>> = flats
            .into_iter()
            .map(|f| SeqVector::from_flat(f, self.model.dim, self.model.has_limit))
            .collect();
        vertices.sort();
        vertices.dedup();
        Self {
            model: self.model.clone(),
            vertices,
            canonical,
        }
    }

    pub fn scale(&self, t: &F) -> Self {
        let mut vertices: Vec<_> = self.vertices.iter().map(|v| v.scale(t)).collect();
        vertices.sort();
        vertices.dedup();
        Self {
            model: self.model.clone(),
            vertices,
            canonical: self.canonical && !t.is_zero(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    pub fn translate(&self, shift: &SeqVector<F>) -> Result<Self> {
        let vertices = self
            .vertices
            .iter()
            .map(|v| v.add(shift))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            model: self.model.clone(),
            vertices,
            canonical: self.canonical,
        })
    }

    pub fn with_model(mut self, model: SpaceModel<F>) -> Result<Self> {
        if !model.same_space(&self.model) {
            return Err(structural("model change must keep the space"));
        }
        self.model = model;
        Ok(self)
    }
}

/// Weights `λ >= 0`, `Σλ = 1` with `Σ λ_j p_j = x`, if any.
pub(crate) fn hull_weights<F: Field>(points: &[Vec<F>], x: &[F]) -> Option<Vec<F>> {
    if points.is_empty() {
        return None;
    }
    let n = points.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in 0..x.len() {
        let first = &points[0][t];
        if points.iter().all(|p| &p[t] == first) {
            // Every convex combination has this coordinate.
            if first != &x[t] {
                return None;
            }
            continue;
        }
        a.push(points.iter().map(|p| p[t].clone()).collect::<Vec<_>>());
        b.push(x[t].clone());
    }
    a.push(vec![F::one(); n]);
    b.push(F::one());
    match standard_simplex(a, b, None) {
        StdOutcome::Optimal(w) => Some(w),
        _ => None,
    }
}

/// True iff `0` lies in `conv(dirs) + span(line)`.
fn zero_in_hull_plus_line<F: Field>(dirs: &[Vec<F>], line: Option<&[F]>) -> bool {
    if dirs.is_empty() {
        return false;
    }
    let len = dirs[0].len();
    let k = dirs.len();
    let extra = if line.is_some() { 2 } else { 0 };
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in 0..len {
        let line_t = line.map(|l| l[t].clone()).unwrap_or_else(F::zero);
        if line_t.is_zero() && dirs.iter().all(|d| d[t].is_zero()) {
            continue;
        }
        let mut row: Vec<F> = dirs.iter().map(|d| d[t].clone()).collect();
        if line.is_some() {
            row.push(-line_t.clone());
            row.push(line_t);
        }
        a.push(row);
        b.push(F::zero());
    }
    let mut norm = vec![F::one(); k];
    norm.extend((0..extra).map(|_| F::zero()));
    a.push(norm);
    b.push(F::one());
    matches!(standard_simplex(a, b, None), StdOutcome::Optimal(_))
}

fn sub_flat<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() - y.clone()).collect()
}

fn add_flat<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn contains<F: Field>(p: &VPolytope<F>, x: &SeqVector<F>) -> Result<bool> {
    p.model.check_vector(x)?;
    Ok(hull_weights(&p.flats(), &x.flat()).is_some())
}

/// Convex weights over `p.vertices` reproducing `x`, if `x ∈ p`.
pub fn hull_decomposition<F: Field>(p: &VPolytope<F>, x: &SeqVector<F>) -> Result<Option<Vec<F>>> {
    p.model.check_vector(x)?;
    Ok(hull_weights(&p.flats(), &x.flat()))
}

/// Keeps exactly the extreme points: `v` survives iff `v ∉ co(vertices \ {v})`.
pub fn prune<F: Field>(p: &VPolytope<F>) -> VPolytope<F> {
    let mut flats = p.flats();
    flats.sort();
    flats.dedup();
    if flats.len() <= 2 {
        return p.rebuild(flats, true);
    }
    let keep: Vec<bool> = (0..flats.len())
        .into_par_iter()
        .map(|j| {
            let others: Vec<Vec<F>> = flats
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != j)
                .map(|(_, v)| v.clone())
                .collect();
            hull_weights(&others, &flats[j]).is_none()
        })
        .collect();
    let kept = flats
        .into_iter()
        .zip(keep)
        .filter_map(|(v, k)| k.then_some(v))
        .collect();
    p.rebuild(kept, true)
}

fn ensure_canonical<F: Field>(p: &VPolytope<F>) -> std::borrow::Cow<'_, VPolytope<F>> {
    if p.canonical {
        std::borrow::Cow::Borrowed(p)
    } else {
        std::borrow::Cow::Owned(prune(p))
    }
}

fn vertex_index<F: Field>(p: &VPolytope<F>, v: &SeqVector<F>) -> Result<usize> {
    p.vertices
        .iter()
        .position(|u| u == v)
        .ok_or_else(|| precondition("point is not a listed vertex"))
}

fn edge_by_index<F: Field>(flats: &[Vec<F>], i: usize, j: usize) -> bool {
    let dirs: Vec<Vec<F>> = flats
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != i && k != j)
        .map(|(_, u)| sub_flat(&flats[i], u))
        .collect();
    let line = sub_flat(&flats[i], &flats[j]);
    !zero_in_hull_plus_line(&dirs, Some(&line))
}

/// Whether `[v, w]` is an edge of the canonical polytope `p`.
///
/// Decided through the LP dual of the attainment-gap program: the gap is
/// positive iff `0 ∉ conv{v - u : u ≠ v, w} + span{v - w}`.
pub fn is_edge<F: Field>(p: &VPolytope<F>, v: &SeqVector<F>, w: &SeqVector<F>) -> Result<bool> {
    if !p.canonical {
        return Err(precondition("is_edge needs a canonical polytope"));
    }
    if v == w {
        return Err(precondition("is_edge needs two distinct vertices"));
    }
    let i = vertex_index(p, v)?;
    let j = vertex_index(p, w)?;
    Ok(edge_by_index(&p.flats(), i, j))
}

/// The primal attainment-gap LP: maximize `δ` subject to `c(v) = c(w)`,
/// `c(v) - c(u) >= δ` for every other vertex `u`, and `|c_j| <= 1`.
/// Returns the optimal functional and gap when the gap is positive.
pub fn edge_witness<F: Field>(
    p: &VPolytope<F>,
    v: &SeqVector<F>,
    w: &SeqVector<F>,
) -> Result<Option<(Functional<F>, F)>> {
    if !p.canonical {
        return Err(precondition("edge_witness needs a canonical polytope"));
    }
    vertex_index(p, v)?;
    vertex_index(p, w)?;
    let (vf, wf) = (v.flat(), w.flat());
    let n = vf.len();
    let mut objective = vec![F::zero(); n];
    objective.push(F::one());
    let mut bounds: Vec<VarBounds<F>> = (0..n)
        .map(|_| VarBounds::range(-F::one(), F::one()))
        .collect();
    bounds.push(VarBounds::free());
    let mut lp = LpProblem::new(Direction::Maximize, objective).with_bounds(bounds);
    let mut eq = sub_flat(&vf, &wf);
    eq.push(F::zero());
    lp = lp.constrain(eq, Sense::Eq, F::zero());
    for u in &p.vertices {
        if u == v || u == w {
            continue;
        }
        let mut row = sub_flat(&vf, &u.flat());
        row.push(-F::one());
        lp = lp.constrain(row, Sense::Ge, F::zero());
    }
    if lp.matrix.len() == 1 {
        // A segment: no other vertex constrains the gap.
        return Ok(Some((Functional::new(vec![F::zero(); p.model.dim], F::zero()), F::one())));
    }
    let res = solve_lp(&lp)?;
    let Some(x) = res.assignment() else {
        return Err(Error::Invariant("gap LP must be feasible and bounded".into()));
    };
    let gap = x[n].clone();
    if !gap.is_positive() {
        return Ok(None);
    }
    let mut coeffs = x[..n].to_vec();
    let limit_coeff = if p.model.has_limit {
        coeffs.pop().unwrap_or_else(F::zero)
    } else {
        F::zero()
    };
    Ok(Some((Functional::new(coeffs, limit_coeff), gap)))
}

/// `P ∩ H` in V-representation; `None` when the intersection is empty.
pub fn clip<F: Field>(p: &VPolytope<F>, h: &HalfSpace<F>) -> Result<Option<VPolytope<F>>> {
    p.model.check_functional(&h.functional)?;
    let p = ensure_canonical(p);
    let flats = p.flats();
    let slacks = p
        .vertices
        .iter()
        .map(|v| h.slack(v))
        .collect::<Result<Vec<F>>>()?;
    let inside: Vec<usize> = (0..flats.len()).filter(|&i| slacks[i].is_positive()).collect();
    let outside: Vec<usize> = (0..flats.len()).filter(|&i| slacks[i].is_negative()).collect();
    let mut kept: Vec<Vec<F>> = (0..flats.len())
        .filter(|&i| !slacks[i].is_negative())
        .map(|i| flats[i].clone())
        .collect();
    if kept.is_empty() {
        return Ok(None);
    }
    if outside.is_empty() {
        return Ok(Some(p.into_owned()));
    }
    let pairs: Vec<(usize, usize)> = inside
        .iter()
        .flat_map(|&i| outside.iter().map(move |&j| (i, j)))
        .collect();
    let crossings: Vec<Vec<F>> = pairs
        .par_iter()
        .filter(|&&(i, j)| edge_by_index(&flats, i, j))
        .map(|&(i, j)| {
            let t = slacks[i].clone() / (slacks[i].clone() - slacks[j].clone());
            flats[i]
                .iter()
                .zip(&flats[j])
                .map(|(a, b)| a.clone() + t.clone() * (b.clone() - a.clone()))
                .collect()
        })
        .collect();
    kept.extend(crossings);
    let out = p.rebuild(kept, false);
    Ok(Some(prune(&out)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComboMode {
    /// Weights must be non-negative and sum to one.
    Convex,
    /// Any non-negative weights.
    General,
}

/// Whether `u + w` is a vertex of `M + Q` for canonical `M`, `Q`: some direction
/// is uniquely maximized at `u` over `M` and at `w` over `Q`.
fn sum_vertex<F: Field>(m: &[Vec<F>], i: usize, q: &[Vec<F>], j: usize) -> bool {
    let mut dirs: Vec<Vec<F>> = Vec::with_capacity(m.len() + q.len());
    for (k, u) in m.iter().enumerate() {
        if k != i {
            dirs.push(sub_flat(&m[i], u));
        }
    }
    for (k, w) in q.iter().enumerate() {
        if k != j {
            dirs.push(sub_flat(&q[j], w));
        }
    }
    !zero_in_hull_plus_line(&dirs, None)
}

/// Minkowski sum of the canonical `m` and `q`, returned canonical.
fn minkowski_pair<F: Field>(m: &[Vec<F>], q: &[Vec<F>]) -> Vec<Vec<F>> {
    let pairs: Vec<(usize, usize)> = (0..m.len())
        .flat_map(|i| (0..q.len()).map(move |j| (i, j)))
        .collect();
    let mut out: Vec<Vec<F>> = pairs
        .par_iter()
        .filter(|&&(i, j)| sum_vertex(m, i, q, j))
        .map(|&(i, j)| add_flat(&m[i], &q[j]))
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `Σ w_i P_i`, pruned.
///
/// The candidate product `Π|V_i|` must stay under `caps.max_sums`. Sums are
/// built one summand at a time, keeping only vertices of each partial sum.
pub fn minkowski_combo<F: Field>(
    parts: &[(F, VPolytope<F>)],
    mode: ComboMode,
    caps: &Caps,
) -> Result<VPolytope<F>> {
    let Some((_, first)) = parts.first() else {
        return Err(structural("minkowski_combo needs at least one part"));
    };
    let model = first.model.clone();
    for (w, p) in parts {
        if !p.model.same_space(&model) {
            return Err(structural("minkowski_combo parts live in different spaces"));
        }
        if w.is_negative() {
            return Err(precondition(format!("negative weight {w}")));
        }
    }
    if mode == ComboMode::Convex {
        let total = parts.iter().fold(F::zero(), |acc, (w, _)| acc + w.clone());
        if !total.is_one() {
            return Err(precondition(format!(
                "convex combination weights sum to {total}, not 1"
            )));
        }
    }
    let canon: Vec<(F, VPolytope<F>)> = parts
        .iter()
        .map(|(w, p)| (w.clone(), ensure_canonical(p).into_owned()))
        .collect();
    let needed = canon
        .iter()
        .fold(1u128, |acc, (_, p)| acc.saturating_mul(p.len() as u128));
    if needed > caps.max_sums {
        return Err(Error::CapExceeded {
            cap: "max_sums",
            needed,
            limit: caps.max_sums,
        });
    }
    let mut acc: Option<Vec<Vec<F>>> = None;
    for (w, p) in &canon {
        let mut scaled: Vec<Vec<F>> = p.scale(w).flats();
        scaled.sort();
        scaled.dedup();
        acc = Some(match acc {
            None => scaled,
            Some(m) => minkowski_pair(&m, &scaled),
        });
    }
    let flats = acc.unwrap_or_default();
    let out = VPolytope {
        model: model.clone(),
        vertices: Vec::new(),
        canonical: true,
    };
    Ok(out.rebuild(flats, true))
}

fn outside_span<F: Field>(points: &[Vec<F>], x: &[F]) -> bool {
    // Feasibility of Σ (a_j - b_j) p_j = x with a, b >= 0.
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in 0..x.len() {
        let row: Vec<F> = points
            .iter()
            .flat_map(|p| [p[t].clone(), -p[t].clone()])
            .collect();
        a.push(row);
        b.push(x[t].clone());
    }
    !matches!(standard_simplex(a, b, None), StdOutcome::Optimal(_))
}

/// Minkowski functional `min{Σν_j : x = Σ ν_j v_j, ν >= 0}`.
pub fn gauge<F: Field>(p: &VPolytope<F>, x: &SeqVector<F>) -> Result<F> {
    p.model.check_vector(x)?;
    gauge_flat(&p.flats(), &x.flat())
}

pub(crate) fn gauge_flat<F: Field>(points: &[Vec<F>], x: &[F]) -> Result<F> {
    if x.iter().all(Zero::is_zero) {
        return Ok(F::zero());
    }
    let n = points.len();
    let mut a = Vec::new();
    let mut b = Vec::new();
    for t in 0..x.len() {
        if x[t].is_zero() && points.iter().all(|p| p[t].is_zero()) {
            continue;
        }
        a.push(points.iter().map(|p| p[t].clone()).collect::<Vec<_>>());
        b.push(x[t].clone());
    }
    let cost = vec![F::one(); n];
    match standard_simplex(a, b, Some(&cost)) {
        StdOutcome::Optimal(nu) => Ok(nu.into_iter().fold(F::zero(), |acc, v| acc + v)),
        StdOutcome::Unbounded => Err(Error::Invariant("gauge LP cannot be unbounded".into())),
        StdOutcome::Infeasible => {
            if outside_span(points, x) {
                Err(Error::Domain("gauge is unbounded: point outside the span".into()))
            } else {
                Err(precondition("gauge ball does not contain 0 in its interior"))
            }
        }
    }
}

/// Checks the gauge preconditions: canonical, symmetric, 0 interior.
pub fn validate_gauge_ball<F: Field>(p: &VPolytope<F>) -> Result<()> {
    if !p.canonical {
        return Err(precondition("gauge ball must be canonical"));
    }
    let flats = p.flats();
    let n = p.model.flat_len();
    for t in 0..n {
        for sign in [F::one(), -F::one()] {
            let mut e = vec![F::zero(); n];
            e[t] = sign;
            gauge_flat(&flats, &e)
                .map_err(|_| precondition("gauge ball does not contain 0 in its interior"))?;
        }
    }
    for v in &flats {
        let minus: Vec<F> = v.iter().map(|a| -a.clone()).collect();
        if hull_weights(&flats, &minus).is_none() {
            return Err(precondition("gauge ball is not symmetric"));
        }
    }
    Ok(())
}

pub fn support<F: Field>(p: &VPolytope<F>, f: &Functional<F>) -> Result<F> {
    p.model.check_functional(f)?;
    p.vertices
        .iter()
        .map(|v| pair(f, v))
        .collect::<Result<Vec<F>>>()?
        .into_iter()
        .max()
        .ok_or_else(|| structural("support of an empty polytope"))
}

/// Index of a vertex attaining the support (first in vertex order).
pub fn support_vertex<F: Field>(p: &VPolytope<F>, f: &Functional<F>) -> Result<usize> {
    let values = p
        .vertices
        .iter()
        .map(|v| pair(f, v))
        .collect::<Result<Vec<F>>>()?;
    let best = values.iter().max().ok_or_else(|| structural("empty polytope"))?;
    Ok(values.iter().position(|v| v == best).unwrap_or(0))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Diameter<F: Field> {
    pub value: NormValue<F>,
    pub witness: (SeqVector<F>, SeqVector<F>),
}

/// Largest norm distance between vertices; attained at extreme points since
/// the norm is convex.
pub fn diameter<F: Field>(p: &VPolytope<F>, norm_model: &SpaceModel<F>) -> Result<Diameter<F>> {
    if !norm_model.same_space(&p.model) {
        return Err(structural("norm model lives in a different space"));
    }
    let p = ensure_canonical(p);
    let n = p.len();
    if n == 1 {
        let z = norm_model.zero();
        return Ok(Diameter {
            value: vector_norm(norm_model, &z)?,
            witness: (p.vertices[0].clone(), p.vertices[0].clone()),
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    if let NormKind::Gauge { ball } = &norm_model.norm {
        return gauge_diameter(&p, ball, &pairs);
    }
    let values = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = p.vertices[i].sub(&p.vertices[j])?;
            vector_norm(norm_model, &d)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0usize;
    for k in 1..values.len() {
        if values[k].cmp_value(&values[best])? == Ordering::Greater {
            best = k;
        }
    }
    let (i, j) = pairs[best];
    Ok(Diameter {
        value: values[best].clone(),
        witness: (p.vertices[i].clone(), p.vertices[j].clone()),
    })
}

fn gauge_diameter<F: Field>(
    p: &VPolytope<F>,
    ball: &VPolytope<F>,
    pairs: &[(usize, usize)],
) -> Result<Diameter<F>> {
    let bflats = ball.flats();
    let n = ball.model.flat_len();
    // ‖x‖∞ / R <= gauge(x) <= Σ|x_t| g_t with R the ball's sup radius and
    // g_t the gauge of the worse signed basis vector.
    let outer = bflats
        .iter()
        .flat_map(|v| v.iter().map(|a| a.abs()))
        .max()
        .unwrap_or_else(F::one);
    let mut axis = Vec::with_capacity(n);
    for t in 0..n {
        let mut worst = F::zero();
        for sign in [F::one(), -F::one()] {
            let mut e = vec![F::zero(); n];
            e[t] = sign;
            worst = worst.max(gauge_flat(&bflats, &e)?);
        }
        axis.push(worst);
    }
    let flats = p.flats();
    let mut bounded: Vec<(F, F, usize)> = pairs
        .par_iter()
        .enumerate()
        .map(|(k, &(i, j))| {
            let d = sub_flat(&flats[i], &flats[j]);
            let sup = d.iter().map(|a| a.abs()).max().unwrap_or_else(F::zero);
            let upper = d
                .iter()
                .zip(&axis)
                .fold(F::zero(), |acc, (a, g)| acc + a.abs() * g.clone());
            (sup / outer.clone(), upper, k)
        })
        .collect();
    bounded.sort_by(|a, b| b.1.cmp(&a.1).then(a.2.cmp(&b.2)));
    let floor = bounded.iter().map(|b| b.0.clone()).max().unwrap_or_else(F::zero);
    let mut best: Option<(F, usize)> = None;
    // Evaluate in batches in decreasing order of the upper bound.
    let batch = 64;
    let mut start = 0;
    while start < bounded.len() {
        let threshold = best.as_ref().map(|b| b.0.clone()).unwrap_or_else(|| floor.clone());
        if best.is_some() && bounded[start].1 <= threshold {
            break;
        }
        let end = (start + batch).min(bounded.len());
        let evaluated = bounded[start..end]
            .par_iter()
            .filter(|b| best.is_none() || b.1 > threshold)
            .map(|b| {
                let (i, j) = pairs[b.2];
                gauge_flat(&bflats, &sub_flat(&flats[i], &flats[j])).map(|g| (g, b.2))
            })
            .collect::<Result<Vec<_>>>()?;
        for (g, k) in evaluated {
            let better = match &best {
                None => true,
                Some((bg, bk)) => g > *bg || (g == *bg && k < *bk),
            };
            if better {
                best = Some((g, k));
            }
        }
        start = end;
    }
    let (value, k) = best.ok_or_else(|| Error::Invariant("no vertex pairs".into()))?;
    let (i, j) = pairs[k];
    Ok(Diameter {
        value: NormValue::exact(value),
        witness: (p.vertices[i].clone(), p.vertices[j].clone()),
    })
}

/// Extreme points of the dual unit ball, for norms where they are explicit or
/// enumerable.
pub fn dual_extreme_points<F: Field>(model: &SpaceModel<F>) -> Result<Vec<Functional<F>>> {
    let signed = |k: usize, neg: bool| -> Functional<F> {
        let mut f = Functional::new(vec![F::zero(); model.dim], F::zero());
        let one = if neg { -F::one() } else { F::one() };
        if k < model.dim {
            f.coeffs[k] = one;
        } else {
            f.limit_coeff = one;
        }
        f
    };
    match &model.norm {
        NormKind::Sup => Ok((0..model.flat_len())
            .flat_map(|k| [signed(k, false), signed(k, true)])
            .collect()),
        NormKind::L1Sum { split } | NormKind::ProductP { p: 1, split } if !model.has_limit => {
            let mut out = Vec::new();
            for j in 0..*split {
                for k in *split..model.dim {
                    for (sj, sk) in [(false, false), (false, true), (true, false), (true, true)] {
                        let f = signed(j, sj).add(&signed(k, sk))?;
                        out.push(f);
                    }
                }
            }
            Ok(out)
        }
        NormKind::Gauge { ball } => polar_vertices(ball),
        _ => Err(Error::Unsupported(
            "explicit dual extreme points exist only for sup, l1-sum and gauge norms".into(),
        )),
    }
}

/// Vertices of the polar `{φ : φ(v) <= 1 for every vertex v}` of a ball with 0
/// in its interior, by double description on the homogenized cone
/// `{(φ, t) : t >= 0, t - φ(v) >= 0}`.
pub fn polar_vertices<F: Field>(ball: &VPolytope<F>) -> Result<Vec<Functional<F>>> {
    validate_gauge_ball(ball)?;
    let n = ball.model.flat_len();
    let d = n + 1;
    let mut rows: Vec<Vec<F>> = Vec::with_capacity(ball.len() + 1);
    let mut t_row = vec![F::zero(); d];
    t_row[n] = F::one();
    rows.push(t_row);
    for v in ball.flats() {
        let mut r: Vec<F> = v.into_iter().map(|a| -a).collect();
        r.push(F::one());
        rows.push(r);
    }
    let basis = independent_rows(&rows, d);
    if basis.len() < d {
        return Err(Error::Invariant("polar cone is not pointed".into()));
    }
    let square: Vec<Vec<F>> = basis.iter().map(|&i| rows[i].clone()).collect();
    let inverse = invert(&square).ok_or_else(|| Error::Invariant("singular basis".into()))?;
    // Column j of the inverse is tight on every basis row except j.
    let mut rays: Vec<Vec<F>> = (0..d)
        .map(|j| primitive((0..d).map(|i| inverse[i][j].clone()).collect()))
        .collect();
    let mut zeros: Vec<Vec<bool>> = (0..d)
        .map(|j| (0..d).map(|i| i != j).collect())
        .collect();
    for (k, row) in rows.iter().enumerate() {
        if basis.contains(&k) {
            continue;
        }
        let vals: Vec<F> = rays.iter().map(|r| crate::exact_lp::dot(row, r)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut new_rays = Vec::new();
        let mut new_zeros = Vec::new();
        let adjacent: Vec<(usize, usize)> = pos
            .par_iter()
            .flat_map_iter(|&a| neg.iter().map(move |&b| (a, b)))
            .filter(|&(a, b)| {
                let common: Vec<bool> = zeros[a].iter().zip(&zeros[b]).map(|(x, y)| *x && *y).collect();
                if common.iter().filter(|&&z| z).count() + 2 < d {
                    return false;
                }
                !(0..rays.len()).any(|c| {
                    c != a && c != b && common.iter().zip(&zeros[c]).all(|(x, y)| !*x || *y)
                })
            })
            .collect();
        for (a, b) in adjacent {
            let (va, vb) = (vals[a].clone(), vals[b].clone());
            let r: Vec<F> = rays[a]
                .iter()
                .zip(&rays[b])
                .map(|(x, y)| va.clone() * y.clone() - vb.clone() * x.clone())
                .collect();
            let mut z: Vec<bool> = zeros[a].iter().zip(&zeros[b]).map(|(x, y)| *x && *y).collect();
            z.push(true);
            new_rays.push(primitive(r));
            new_zeros.push(z);
        }
        let mut kept_rays = Vec::new();
        let mut kept_zeros = Vec::new();
        for i in 0..rays.len() {
            if !vals[i].is_negative() {
                let mut z = zeros[i].clone();
                z.push(vals[i].is_zero());
                kept_rays.push(rays[i].clone());
                kept_zeros.push(z);
            }
        }
        kept_rays.extend(new_rays);
        kept_zeros.extend(new_zeros);
        rays = kept_rays;
        zeros = kept_zeros;
    }
    let mut out = Vec::with_capacity(rays.len());
    for r in rays {
        if !r[n].is_positive() {
            return Err(Error::Invariant("polar of a bounded ball is unbounded".into()));
        }
        let t = r[n].clone();
        let flat: Vec<F> = r[..n].iter().map(|x| x.clone() / t.clone()).collect();
        let (coeffs, limit) = if ball.model.has_limit {
            (flat[..n - 1].to_vec(), flat[n - 1].clone())
        } else {
            (flat, F::zero())
        };
        out.push(Functional::new(coeffs, limit));
    }
    out.sort_by(|a, b| a.coeffs.cmp(&b.coeffs).then(a.limit_coeff.cmp(&b.limit_coeff)));
    out.dedup();
    Ok(out)
}

fn primitive<F: Field>(r: Vec<F>) -> Vec<F> {
    let s = F::primitive_scale(&r);
    r.into_iter().map(|x| x * s.clone()).collect()
}

fn independent_rows<F: Field>(rows: &[Vec<F>], d: usize) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<F>)> = Vec::new();
    let mut chosen = Vec::new();
    for (k, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (piv, e) in &echelon {
            if !r[*piv].is_zero() {
                let f = r[*piv].clone() / e[*piv].clone();
                for (x, y) in r.iter_mut().zip(e) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        if let Some(piv) = r.iter().position(|x| !x.is_zero()) {
            echelon.push((piv, r));
            chosen.push(k);
            if chosen.len() == d {
                break;
            }
        }
    }
    chosen
}

fn invert<F: Field>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    let mut a: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, p);
        let inv = F::one() / a[c][c].clone();
        for x in a[c].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot) {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Diameter of a Minkowski combination computed through support functions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SumDiameter<F: Field> {
    #[serde(with = "crate::scalar::serde_exact")]
    pub value: F,
    /// Dual-ball extreme point attaining the widest width.
    pub direction: Functional<F>,
    /// Per-summand maximizers and minimizers of `direction`.
    pub upper: Vec<SeqVector<F>>,
    pub lower: Vec<SeqVector<F>>,
    pub witness: (SeqVector<F>, SeqVector<F>),
}

/// Diameter of `Σ w_i P_i` through support functions:
/// `max_φ Σ w_i (h_i(φ) + h_i(-φ))` over dual-ball extreme points `φ`.
/// Never enumerates the sum; the witness pair is built from per-summand extremizers.
pub fn minkowski_diameter<F: Field>(
    parts: &[(F, VPolytope<F>)],
    norm_model: &SpaceModel<F>,
) -> Result<SumDiameter<F>> {
    let duals = dual_extreme_points(norm_model)?;
    if parts.is_empty() {
        return Err(structural("minkowski_diameter needs at least one part"));
    }
    for (w, p) in parts {
        if !p.model.same_space(norm_model) {
            return Err(structural("summand lives in a different space"));
        }
        if w.is_negative() {
            return Err(precondition(format!("negative weight {w}")));
        }
    }
    let scored = duals
        .par_iter()
        .enumerate()
        .map(|(k, phi)| {
            let neg = phi.scale(&-F::one());
            let mut width = F::zero();
            let mut hi = Vec::with_capacity(parts.len());
            let mut lo = Vec::with_capacity(parts.len());
            for (w, p) in parts {
                let a = support_vertex(p, phi)?;
                let b = support_vertex(p, &neg)?;
                width = width
                    + w.clone() * (pair(phi, &p.vertices[a])? - pair(phi, &p.vertices[b])?);
                hi.push(a);
                lo.push(b);
            }
            Ok((width, k, hi, lo))
        })
        .collect::<Result<Vec<_>>>()?;
    let (best, k, hi, lo) = scored
        .into_iter()
        .reduce(|a, b| if b.0 > a.0 { b } else { a })
        .ok_or_else(|| Error::Invariant("no dual extreme points".into()))?;
    let upper: Vec<SeqVector<F>> = parts.iter().zip(&hi).map(|((_, p), &i)| p.vertices[i].clone()).collect();
    let lower: Vec<SeqVector<F>> = parts.iter().zip(&lo).map(|((_, p), &i)| p.vertices[i].clone()).collect();
    let mut u = norm_model.zero();
    let mut v = norm_model.zero();
    for (((w, _), a), b) in parts.iter().zip(&upper).zip(&lower) {
        u = u.axpy(w, a)?;
        v = v.axpy(w, b)?;
    }
    Ok(SumDiameter {
        value: best,
        direction: duals[k].clone(),
        upper,
        lower,
        witness: (u, v),
    })
}

/// Mutual containment of vertex sets.
pub fn hull_equal<F: Field>(a: &VPolytope<F>, b: &VPolytope<F>) -> Result<bool> {
    for v in &a.vertices {
        if !contains(b, v)? {
            return Ok(false);
        }
    }
    for v in &b.vertices {
        if !contains(a, v)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;
    use crate::Scalar;
    use num_traits::Signed;
    use proptest::prelude::*;
    use std::sync::Arc;

    fn s(n: i64, d: i64) -> Scalar {
        big(n, d)
    }

    fn v(c: &[(i64, i64)]) -> SeqVector<Scalar> {
        SeqVector::new(c.iter().map(|&(n, d)| s(n, d)).collect(), None)
    }

    fn vi(c: &[i64]) -> SeqVector<Scalar> {
        SeqVector::new(c.iter().map(|&n| s(n, 1)).collect(), None)
    }

    fn poly(pts: Vec<SeqVector<Scalar>>) -> VPolytope<Scalar> {
        let d = pts[0].dim();
        prune(&VPolytope::from_points(SpaceModel::c0(d), pts).unwrap())
    }

    fn segment() -> VPolytope<Scalar> {
        poly(vec![vi(&[1, 0]), vi(&[1, 1])])
    }

    #[test]
    fn containment_examples() {
        let p = segment();
        assert!(contains(&p, &v(&[(1, 1), (1, 2)])).unwrap());
        assert!(!contains(&p, &vi(&[0, 1])).unwrap());
    }

    #[test]
    fn prune_examples() {
        let p = poly(vec![vi(&[0]), vi(&[1]), v(&[(1, 2)])]);
        assert_eq!(p.vertices, vec![vi(&[0]), vi(&[1])]);
        let p = segment();
        assert_eq!(p.vertices, vec![vi(&[1, 0]), vi(&[1, 1])]);
    }

    #[test]
    fn edge_examples() {
        let sq = VPolytope::<Scalar>::cube(2, false).unwrap();
        assert!(is_edge(&sq, &vi(&[1, 1]), &vi(&[1, -1])).unwrap());
        assert!(!is_edge(&sq, &vi(&[1, 1]), &vi(&[-1, -1])).unwrap());
        let (f, gap) = edge_witness(&sq, &vi(&[1, 1]), &vi(&[1, -1])).unwrap().unwrap();
        assert!(gap > Scalar::zero());
        assert_eq!(pair(&f, &vi(&[1, 1])).unwrap(), pair(&f, &vi(&[1, -1])).unwrap());
        assert!(edge_witness(&sq, &vi(&[1, 1]), &vi(&[-1, -1])).unwrap().is_none());
    }

    #[test]
    fn clip_examples() {
        let sq = VPolytope::<Scalar>::cube(2, false).unwrap();
        let e1 = Functional::coordinate(2, 1).unwrap();
        let half = clip(&sq, &HalfSpace::ge(e1.clone(), s(0, 1)).unwrap()).unwrap().unwrap();
        assert_eq!(
            half.vertices,
            vec![vi(&[0, -1]), vi(&[0, 1]), vi(&[1, -1]), vi(&[1, 1])]
        );
        assert!(clip(&sq, &HalfSpace::ge(e1, s(2, 1)).unwrap()).unwrap().is_none());
        let e2 = Functional::coordinate(2, 2).unwrap();
        let cut = clip(&segment(), &HalfSpace::ge(e2, s(3, 4)).unwrap()).unwrap().unwrap();
        assert_eq!(cut.vertices, vec![v(&[(1, 1), (3, 4)]), vi(&[1, 1])]);
    }

    #[test]
    fn minkowski_examples() {
        let a = poly(vec![vi(&[1, 0])]);
        let b = poly(vec![vi(&[1, 1])]);
        let m = minkowski_combo(
            &[(s(1, 2), a), (s(1, 2), b)],
            ComboMode::Convex,
            &Caps::default(),
        )
        .unwrap();
        assert_eq!(m.vertices, vec![v(&[(1, 1), (1, 2)])]);

        let sq = VPolytope::<Scalar>::cube(2, false).unwrap();
        let m = minkowski_combo(
            &[(s(1, 2), sq.clone()), (s(1, 2), sq.clone())],
            ComboMode::Convex,
            &Caps::default(),
        )
        .unwrap();
        assert_eq!(m.vertices, sq.vertices);

        let bad = minkowski_combo(&[(s(1, 3), sq.clone())], ComboMode::Convex, &Caps::default());
        assert!(matches!(bad, Err(Error::Precondition(_))));
        let capped = minkowski_combo(
            &[(s(1, 2), sq.clone()), (s(1, 2), sq)],
            ComboMode::Convex,
            &Caps {
                max_sums: 15,
                ..Caps::default()
            },
        );
        assert!(matches!(capped, Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn box_sum_matches_grid_oracle() {
        // (3/4)·[-1,1]^3 + (1/4)·([-1,1]^2 x {0}) in the c-model with d = 2.
        let c_box = VPolytope::<Scalar>::cube(2, true).unwrap();
        let c0_box = VPolytope::from_points(
            SpaceModel::c(2),
            VPolytope::<Scalar>::cube(2, false)
                .unwrap()
                .vertices
                .into_iter()
                .map(|x| SeqVector::new(x.coords, Some(s(0, 1))))
                .collect(),
        )
        .unwrap();
        let m = minkowski_combo(
            &[(s(3, 4), c_box), (s(1, 4), prune(&c0_box))],
            ComboMode::Convex,
            &Caps::default(),
        )
        .unwrap();
        assert_eq!(m.len(), 8);
        // Oracle: grid points of mesh 1/8 in [-1,1]^3 are inside iff |L| <= 3/4.
        for a in -8..=8 {
            for c in -8..=8 {
                let x = SeqVector::new(vec![s(a, 8), s(1, 1)], Some(s(c, 8)));
                let want = s(c, 8).abs() <= s(3, 4);
                assert_eq!(contains(&m, &x).unwrap(), want, "{x:?}");
            }
        }
    }

    #[test]
    fn gauge_examples() {
        let sq = VPolytope::<Scalar>::cube(2, false).unwrap();
        assert_eq!(gauge(&sq, &vi(&[2, 0])).unwrap(), s(2, 1));
        assert_eq!(gauge(&sq, &vi(&[1, 1])).unwrap(), s(1, 1));
        validate_gauge_ball(&sq).unwrap();
        let seg = segment();
        assert!(validate_gauge_ball(&seg).is_err());
        let flat = poly(vec![vi(&[1, 0]), vi(&[-1, 0])]);
        assert!(matches!(gauge(&flat, &vi(&[0, 1])), Err(Error::Domain(_))));
    }

    #[test]
    fn support_examples() {
        let f = Functional::coordinate(2, 2).unwrap();
        assert_eq!(support(&segment(), &f).unwrap(), s(1, 1));
        let cube = VPolytope::<Scalar>::cube(3, false).unwrap();
        let ones = Functional::new(vec![s(1, 1); 3], s(0, 1));
        assert_eq!(support(&cube, &ones).unwrap(), s(3, 1));
    }

    #[test]
    fn diameter_examples() {
        let cube = VPolytope::<Scalar>::cube(3, false).unwrap();
        let d = diameter(&cube, &SpaceModel::c0(3)).unwrap();
        assert_eq!(d.value.as_exact(), Some(s(2, 1)));

        let sq = VPolytope::<Scalar>::cube(2, false).unwrap();
        let cut = clip(
            &sq,
            &HalfSpace::ge(Functional::coordinate(2, 1).unwrap(), s(1, 2)).unwrap(),
        )
        .unwrap()
        .unwrap();
        let d = diameter(&cut, &SpaceModel::c0(2)).unwrap();
        assert_eq!(d.value.as_exact(), Some(s(2, 1)));
        let gap = d.witness.0.sub(&d.witness.1).unwrap();
        assert_eq!(gap.sup_norm(), s(2, 1));

        let gm = SpaceModel::new(2, false, NormKind::Gauge { ball: Arc::new(sq.clone()) }).unwrap();
        let d = diameter(&sq, &gm).unwrap();
        assert_eq!(d.value.as_exact(), Some(s(2, 1)));
    }

    #[test]
    fn minkowski_diameter_matches_enumeration() {
        let sq = VPolytope::<Scalar>::cube(2, false).unwrap();
        let tri = poly(vec![vi(&[0, 0]), vi(&[1, 0]), v(&[(1, 2), (1, 1)])]);
        let parts = vec![(s(1, 3), sq), (s(2, 3), tri)];
        let sum = minkowski_combo(&parts, ComboMode::Convex, &Caps::default()).unwrap();
        let model = SpaceModel::c0(2);
        let a = diameter(&sum, &model).unwrap();
        let b = minkowski_diameter(&parts, &model).unwrap();
        assert_eq!(a.value.as_exact(), Some(b.value.clone()));
        let gap = b.witness.0.sub(&b.witness.1).unwrap();
        assert_eq!(vector_norm(&model, &gap).unwrap().as_exact(), Some(b.value));
        let l1 = SpaceModel::new(2, false, NormKind::L1Sum { split: 1 }).unwrap();
        let a = diameter(&sum.clone().with_model(l1.clone()).unwrap(), &l1).unwrap();
        let b = minkowski_diameter(&parts, &l1).unwrap();
        assert_eq!(a.value.as_exact(), Some(b.value));
    }

    #[test]
    fn polar_examples() {
        let sq = VPolytope::<Scalar>::cube(2, false).unwrap();
        let polar = polar_vertices(&sq).unwrap();
        let coord = |k| Functional::<Scalar>::coordinate(2, k).unwrap();
        let mut expected = vec![coord(1), coord(2), coord(1).scale(&s(-1, 1)), coord(2).scale(&s(-1, 1))];
        expected.sort_by(|a, b| a.coeffs.cmp(&b.coeffs));
        assert_eq!(polar, expected);
        let diamond = poly(vec![vi(&[1, 0]), vi(&[-1, 0]), vi(&[0, 1]), vi(&[0, -1])]);
        let polar = polar_vertices(&diamond).unwrap();
        assert_eq!(polar.len(), 4);
        assert!(polar.iter().all(|f| f.coeffs.iter().all(|c| c.abs() == s(1, 1))));
        let cube = VPolytope::<Scalar>::cube(2, true).unwrap();
        assert_eq!(polar_vertices(&cube).unwrap().len(), 6);
    }

    #[test]
    fn gauge_sum_diameter_matches_enumeration() {
        let hex = poly(vec![
            vi(&[2, 0]),
            vi(&[-2, 0]),
            vi(&[1, 1]),
            vi(&[-1, -1]),
            vi(&[1, -2]),
            vi(&[-1, 2]),
        ]);
        let model = SpaceModel::new(2, false, NormKind::Gauge { ball: std::sync::Arc::new(hex) }).unwrap();
        let tri = poly(vec![vi(&[0, 0]), vi(&[1, 0]), v(&[(1, 2), (1, 1)])]).with_model(model.clone()).unwrap();
        let sq = VPolytope::<Scalar>::cube(2, false).unwrap().with_model(model.clone()).unwrap();
        let parts = vec![(s(1, 4), sq), (s(3, 4), tri)];
        let sum = minkowski_combo(&parts, ComboMode::Convex, &Caps::default()).unwrap();
        let a = diameter(&sum, &model).unwrap();
        let b = minkowski_diameter(&parts, &model).unwrap();
        assert_eq!(a.value.as_exact(), Some(b.value));
    }

    fn arb_points(dim: usize, max: usize) -> impl Strategy<Value = Vec<SeqVector<Scalar>>> {
        proptest::collection::vec(
            proptest::collection::vec((-3i64..=3).prop_map(|n| s(n, 2)), dim),
            1..=max,
        )
        .prop_map(|pts| pts.into_iter().map(|c| SeqVector::new(c, None)).collect())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn prune_is_idempotent_and_preserves_hull(pts in arb_points(3, 7), probe in arb_points(3, 3)) {
            let raw = VPolytope::from_points(SpaceModel::c0(3), pts).unwrap();
            let once = prune(&raw);
            let twice = prune(&once);
            prop_assert_eq!(&once.vertices, &twice.vertices);
            for x in probe {
                prop_assert_eq!(contains(&raw, &x).unwrap(), contains(&once, &x).unwrap());
            }
        }

        #[test]
        fn polar_vertices_realize_the_gauge(pts in arb_points(3, 6), probe in arb_points(3, 4)) {
            let mut sym = pts.clone();
            sym.extend(pts.iter().map(|p| p.neg()));
            sym.extend(VPolytope::<Scalar>::cube(3, false).unwrap().vertices.into_iter().map(|v| v.scale(&s(1, 4))));
            let ball = prune(&VPolytope::from_points(SpaceModel::c0(3), sym).unwrap());
            let polar = polar_vertices(&ball).unwrap();
            for x in probe {
                let best = polar.iter().map(|f| pair(f, &x).unwrap()).max().unwrap();
                prop_assert_eq!(best, gauge(&ball, &x).unwrap());
            }
        }

        #[test]
        fn clip_stays_inside(pts in arb_points(3, 7), coeffs in proptest::collection::vec(-2i64..=2, 3), b in -2i64..=2) {
            prop_assume!(coeffs.iter().any(|&c| c != 0));
            let p = prune(&VPolytope::from_points(SpaceModel::c0(3), pts).unwrap());
            let f = Functional::new(coeffs.iter().map(|&c| s(c, 1)).collect(), Scalar::zero());
            let h = HalfSpace::ge(f, s(b, 2)).unwrap();
            if let Some(q) = clip(&p, &h).unwrap() {
                for x in &q.vertices {
                    prop_assert!(contains(&p, x).unwrap());
                    prop_assert!(h.holds(x).unwrap());
                }
            } else {
                for x in &p.vertices {
                    prop_assert!(!h.holds(x).unwrap());
                }
            }
        }

        #[test]
        fn edge_tests_agree_with_gap_lp(pts in arb_points(3, 6)) {
            let p = prune(&VPolytope::from_points(SpaceModel::c0(3), pts).unwrap());
            for i in 0..p.len() {
                for j in (i + 1)..p.len() {
                    let (a, b) = (&p.vertices[i], &p.vertices[j]);
                    let fast = is_edge(&p, a, b).unwrap();
                    let slow = edge_witness(&p, a, b).unwrap();
                    prop_assert_eq!(fast, slow.is_some());
                    if let Some((f, gap)) = slow {
                        let top = pair(&f, a).unwrap();
                        prop_assert_eq!(&top, &pair(&f, b).unwrap());
                        for u in &p.vertices {
                            if u != a && u != b {
                                prop_assert!(top.clone() - pair(&f, u).unwrap() >= gap);
                            }
                        }
                    }
                }
            }
        }

        #[test]
        fn self_combination_is_the_same_body(pts in arb_points(2, 5), w in 1i64..=4) {
            let p = prune(&VPolytope::from_points(SpaceModel::c0(2), pts).unwrap());
            let m = minkowski_combo(
                &[(s(w, 5), p.clone()), (s(5 - w, 5), p.clone())],
                ComboMode::Convex,
                &Caps::default(),
            ).unwrap();
            prop_assert!(hull_equal(&m, &p).unwrap());
        }
    }
}
