//! Builders for the staged set `K_n`, its nets, the renormed ball `B_eps`,
//! and the polyhedral product and l1-sum balls.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{precondition, Error, Result};
use crate::polytope::{self, prune, Caps, VPolytope};
use crate::scalar::Field;
use crate::seqspace::{dual_norm, pair, Functional, NormKind, SeqVector, SpaceModel};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Stage<F: Field> {
    pub n: usize,
    /// `K_n` in the c0 model of dimension `m_n`.
    pub body: VPolytope<F>,
    pub m: usize,
    pub l: usize,
    /// Certified covering radius of `g_1..g_l` over `K_n`.
    #[serde(with = "crate::scalar::serde_exact")]
    pub eps: F,
    /// Running minimum of the radii up to this stage (reporting only).
    #[serde(with = "crate::scalar::serde_exact")]
    pub eps_running_min: F,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct StageLedger<F: Field> {
    pub l2: usize,
    pub mesh_denominator: usize,
    pub stages: Vec<Stage<F>>,
    /// `g_1, g_2, ...`, each in the dimension of the stage that created it.
    pub nets: Vec<SeqVector<F>>,
}

impl<F: Field> StageLedger<F> {
    /// Truncation level `N`.
    pub fn depth(&self) -> usize {
        self.stages.len()
    }

    pub fn stage(&self, n: usize) -> Result<&Stage<F>> {
        n.checked_sub(1)
            .and_then(|i| self.stages.get(i))
            .ok_or_else(|| precondition(format!("stage {n} not built (N = {})", self.depth())))
    }

    pub fn last(&self) -> &Stage<F> {
        self.stages.last().expect("ledger has at least two stages")
    }

    /// `g_i` (1-based), embedded in dimension `dim`.
    pub fn net_point(&self, i: usize, dim: usize) -> Result<SeqVector<F>> {
        let g = i
            .checked_sub(1)
            .and_then(|k| self.nets.get(k))
            .ok_or_else(|| precondition(format!("net point g_{i} does not exist")))?;
        g.embed(dim)
    }

    /// `K_N` in its own dimension `m_N`.
    pub fn top(&self) -> &VPolytope<F> {
        &self.last().body
    }

    /// SHA-256 of the canonical JSON serialization.
    pub fn hash(&self) -> String {
        content_hash(self)
    }
}

/// SHA-256 (hex) of the compact JSON serialization.
pub fn content_hash<T: Serialize>(value: &T) -> String {
    let bytes = serde_json::to_vec(value).expect("artifact serializes");
    hex::encode(Sha256::digest(bytes))
}

/// Parameters of the renorming argument.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct RenormParams<F: Field> {
    #[serde(with = "crate::scalar::serde_exact")]
    pub eps: F,
    #[serde(with = "crate::scalar::serde_exact")]
    pub rho: F,
    #[serde(with = "crate::scalar::serde_exact")]
    pub delta: F,
    #[serde(with = "crate::scalar::serde_exact")]
    pub delta_tilde: F,
    #[serde(with = "crate::scalar::serde_exact")]
    pub gamma: F,
    pub functionals: Vec<Functional<F>>,
    #[serde(with = "crate::scalar::serde_exact::vec")]
    pub weights: Vec<F>,
}

impl<F: Field> RenormParams<F> {
    /// Deterministic schedule: `ρ` from `2ρ < ε` and `(7-2ε)ρ/(1-ε) < γ`,
    /// then `δ = ρ·max‖x*‖/2`, then `δ̃ = ρ·max‖x*‖/2 + 2δ`, each with a
    /// safety factor of one half.
    pub fn solve(eps: F, gamma: F, functionals: Vec<Functional<F>>, model: &SpaceModel<F>) -> Result<Self> {
        check_unit_interval("eps", &eps)?;
        if !gamma.is_positive() {
            return Err(precondition("gamma must be positive"));
        }
        if functionals.is_empty() {
            return Err(precondition("at least one slice functional is needed"));
        }
        let half = F::half();
        let two = F::from_int(2);
        let rho_a = eps.clone() / two.clone();
        let rho_b = gamma.clone() * (F::one() - eps.clone()) / (F::from_int(7) - two.clone() * eps.clone());
        let rho = rho_a.min(rho_b) * half.clone();
        let top = max_dual_norm(&functionals, model)?;
        let delta = rho.clone() * top.clone() / two.clone();
        let delta_tilde = rho.clone() * top / two.clone() + two * delta.clone();
        let n = functionals.len();
        let params = Self {
            eps,
            rho,
            delta,
            delta_tilde,
            gamma,
            weights: vec![F::one() / F::from_int(n as i64); n],
            functionals,
        };
        params.check(model)?;
        Ok(params)
    }

    /// Verifies the four strict inequalities, naming the first violated one.
    pub fn check(&self, model: &SpaceModel<F>) -> Result<()> {
        check_unit_interval("eps", &self.eps)?;
        for (name, v) in [
            ("rho", &self.rho),
            ("delta", &self.delta),
            ("delta_tilde", &self.delta_tilde),
            ("gamma", &self.gamma),
        ] {
            if !v.is_positive() {
                return Err(precondition(format!("{name} must be positive")));
            }
        }
        if self.weights.len() != self.functionals.len() {
            return Err(precondition("one weight per functional is required"));
        }
        let two = F::from_int(2);
        if two.clone() * self.rho.clone() >= self.eps {
            return Err(precondition("violated: 2·rho < eps"));
        }
        let lhs = (F::from_int(7) - two.clone() * self.eps.clone()) * self.rho.clone()
            / (F::one() - self.eps.clone());
        if lhs >= self.gamma {
            return Err(precondition("violated: (7 - 2·eps)·rho/(1 - eps) < gamma"));
        }
        for f in &self.functionals {
            let norm = dual_norm(model, f)?;
            if self.rho.clone() * norm.clone() / two.clone() + self.delta.clone() >= self.delta_tilde {
                return Err(precondition("violated: rho·‖x*‖/2 + delta < delta_tilde"));
            }
            if self.rho.clone() * norm >= F::from_int(4) * self.delta.clone() {
                return Err(precondition("violated: rho·‖x*‖ < 4·delta"));
            }
        }
        Ok(())
    }
}

fn check_unit_interval<F: Field>(name: &str, v: &F) -> Result<()> {
    if !v.is_positive() || *v >= F::one() {
        return Err(precondition(format!("{name} must lie in (0, 1), got {v}")));
    }
    Ok(())
}

fn max_dual_norm<F: Field>(functionals: &[Functional<F>], model: &SpaceModel<F>) -> Result<F> {
    let mut top = F::zero();
    for f in functionals {
        top = top.max(dual_norm(model, f)?);
    }
    Ok(top)
}

fn sup_dist<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x.clone() - y.clone()).abs())
        .max()
        .unwrap_or_else(F::zero)
}

/// Compositions of `q` into `k` non-negative parts, first part descending.
fn compositions(q: usize, k: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let count = binomial(q + k - 1, k - 1);
    if count > cap as u128 {
        return Err(Error::CapExceeded {
            cap: "max_grid",
            needed: count,
            limit: cap as u128,
        });
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut cur = vec![0; k];
    fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos + 1 == cur.len() {
            cur[pos] = left;
            out.push(cur.clone());
            return;
        }
        for v in (0..=left).rev() {
            cur[pos] = v;
            rec(pos + 1, left - v, cur, out);
        }
    }
    rec(0, q, &mut cur, &mut out);
    Ok(out)
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

fn grid_point<F: Field>(verts: &[Vec<F>], weights: &[usize], q: usize) -> Vec<F> {
    let qf = F::from_int(q as i64);
    let mut out = vec![F::zero(); verts[0].len()];
    for (v, &w) in verts.iter().zip(weights) {
        if w == 0 {
            continue;
        }
        let c = F::from_int(w as i64) / qf.clone();
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + c.clone() * x.clone();
        }
    }
    out
}

/// Certified sup-norm covering radius of `net` over `co(verts)`.
///
/// Writing `q·w = f + r` with `f = floor(q·w)` puts every point of the hull in
/// the hull of the grid points `f + 1_S`, `|S| = q - Σf`. On each such cell the
/// distance to a fixed net point is convex, so its maximum sits at a cell
/// vertex; the radius is the largest over cells of the best net point's
/// worst cell vertex.
fn certified_radius<F: Field>(verts: &[Vec<F>], net: &[Vec<F>], q: usize, caps: &Caps) -> Result<F> {
    let k = verts.len();
    if k == 1 {
        return Ok(net.iter().map(|g| sup_dist(g, &verts[0])).min().unwrap_or_else(F::zero));
    }
    let mut cells: Vec<(Vec<usize>, usize)> = Vec::new();
    for r in 1..=(k - 1).min(q) {
        for f in compositions(q - r, k, caps.max_grid)? {
            cells.push((f, r));
        }
        if cells.len() > caps.max_grid {
            return Err(Error::CapExceeded {
                cap: "max_grid",
                needed: cells.len() as u128,
                limit: caps.max_grid as u128,
            });
        }
    }
    let radii = cells
        .par_iter()
        .map(|(f, r)| {
            let points: Vec<Vec<F>> = subsets(k, *r)
                .into_iter()
                .map(|s| {
                    let mut w = f.clone();
                    for j in s {
                        w[j] += 1;
                    }
                    grid_point(verts, &w, q)
                })
                .collect();
            net.iter()
                .map(|g| points.iter().map(|p| sup_dist(p, g)).max().unwrap_or_else(F::zero))
                .min()
                .unwrap_or_else(F::zero)
        })
        .collect::<Vec<F>>();
    Ok(radii.into_iter().max().unwrap_or_else(F::zero))
}

fn subsets(k: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(start: usize, k: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for j in start..k {
            if k - j < r - cur.len() {
                break;
            }
            cur.push(j);
            rec(j + 1, k, r, cur, out);
            cur.pop();
        }
    }
    rec(0, k, r, &mut cur, &mut out);
    out
}

/// Farthest-point selection over the barycentric grid of `p` with
/// denominator `mesh_denominator`, seeded at the first vertex.
pub fn greedy_net<F: Field>(
    p: &VPolytope<F>,
    size: usize,
    mesh_denominator: usize,
    caps: &Caps,
) -> Result<(Vec<SeqVector<F>>, F)> {
    if !p.canonical {
        return Err(precondition("greedy_net needs a canonical polytope"));
    }
    greedy_net_from(p, &[p.vertices[0].clone()], size, mesh_denominator, caps)
}

/// As [`greedy_net`], extending the given seed points.
pub fn greedy_net_from<F: Field>(
    p: &VPolytope<F>,
    seed: &[SeqVector<F>],
    size: usize,
    mesh_denominator: usize,
    caps: &Caps,
) -> Result<(Vec<SeqVector<F>>, F)> {
    if size == 0 || seed.is_empty() || seed.len() > size {
        return Err(precondition("net size must be at least the seed size and positive"));
    }
    if mesh_denominator == 0 {
        return Err(precondition("mesh denominator must be positive"));
    }
    let q = mesh_denominator;
    let verts = p.flats();
    let grid: Vec<Vec<F>> = compositions(q, verts.len(), caps.max_grid)?
        .into_iter()
        .map(|w| grid_point(&verts, &w, q))
        .collect();
    let mut chosen: Vec<Vec<F>> = seed.iter().map(SeqVector::flat).collect();
    let mut gap: Vec<F> = grid
        .par_iter()
        .map(|x| chosen.iter().map(|g| sup_dist(x, g)).min().unwrap_or_else(F::zero))
        .collect();
    while chosen.len() < size {
        let best = gap.iter().max().cloned().unwrap_or_else(F::zero);
        if best.is_zero() {
            return Err(precondition(format!(
                "grid with denominator {q} has too few points for a net of size {size}"
            )));
        }
        let idx = gap.iter().position(|g| *g == best).unwrap_or(0);
        let pick = grid[idx].clone();
        gap.par_iter_mut().zip(&grid).for_each(|(g, x)| {
            let d = sup_dist(x, &pick);
            if d < *g {
                *g = d;
            }
        });
        chosen.push(pick);
    }
    let radius = certified_radius(&verts, &chosen, q, caps)?;
    let points = chosen
        .into_iter()
        .map(|f| SeqVector::from_flat(f, p.model.dim, p.model.has_limit))
        .collect();
    Ok((points, radius))
}

fn unit<F: Field>(dim: usize, k: usize) -> SeqVector<F> {
    SeqVector::unit(dim, false, k).expect("unit index within dimension")
}

/// Builds `K_1, ..., K_N` with their nets and verifies the ledger invariants.
pub fn build_stages<F: Field>(
    depth: usize,
    l2: usize,
    mesh_denominator: usize,
    caps: &Caps,
) -> Result<StageLedger<F>> {
    if depth < 2 {
        return Err(precondition("N must be at least 2"));
    }
    if l2 < 2 {
        return Err(precondition("l2 must be at least 2"));
    }
    let e1 = unit::<F>(1, 1);
    let k1 = VPolytope::from_points(SpaceModel::c0(1), vec![e1.clone()])?;
    let mut stages = vec![Stage {
        n: 1,
        body: prune(&k1),
        m: 1,
        l: 1,
        eps: F::zero(),
        eps_running_min: F::zero(),
    }];
    let k2 = prune(&VPolytope::from_points(
        SpaceModel::c0(2),
        vec![unit(2, 1), unit::<F>(2, 1).add(&unit(2, 2))?],
    )?);
    let (net2, eps2) = greedy_net(&k2, l2, mesh_denominator, caps)?;
    let mut nets = net2;
    stages.push(Stage {
        n: 2,
        body: k2,
        m: 2,
        l: l2,
        eps_running_min: eps2.clone(),
        eps: eps2,
    });
    while stages.len() < depth {
        let prev = stages.last().expect("nonempty");
        let (m, l) = (prev.m, prev.l);
        let dim = m + l;
        let mut gens: Vec<SeqVector<F>> = prev
            .body
            .vertices
            .iter()
            .map(|v| v.embed(dim))
            .collect::<Result<_>>()?;
        let mut bumps = Vec::with_capacity(l);
        for i in 1..=l {
            let g = nets[i - 1].embed(dim)?;
            bumps.push(g.add(&unit(dim, m + i))?);
        }
        gens.extend(bumps.iter().cloned());
        if gens.len() > caps.max_vertices {
            return Err(Error::CapExceeded {
                cap: "max_vertices",
                needed: gens.len() as u128,
                limit: caps.max_vertices as u128,
            });
        }
        let body = prune(&VPolytope::from_points(SpaceModel::c0(dim), gens)?);
        for b in &bumps {
            if !body.vertices.contains(b) {
                return Err(Error::Invariant(format!(
                    "stage {}: bump point is not extreme",
                    stages.len() + 1
                )));
            }
        }
        let seed: Vec<SeqVector<F>> = nets.iter().map(|g| g.embed(dim)).collect::<Result<_>>()?;
        let l_next = m + l;
        let (net, eps) = greedy_net_from(&body, &seed, l_next, mesh_denominator, caps)?;
        nets.extend(net.into_iter().skip(seed.len()));
        let running = prev.eps_running_min.clone().min(eps.clone());
        stages.push(Stage {
            n: stages.len() + 1,
            body,
            m: dim,
            l: l_next,
            eps,
            eps_running_min: running,
        });
    }
    let ledger = StageLedger {
        l2,
        mesh_denominator,
        stages,
        nets,
    };
    verify_ledger(&ledger)?;
    Ok(ledger)
}

/// Re-checks every ledger invariant.
pub fn verify_ledger<F: Field>(ledger: &StageLedger<F>) -> Result<()> {
    for w in ledger.stages.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if b.m != a.m + a.l && a.n >= 2 {
            return Err(Error::Invariant(format!("m_{} != m_{} + l_{}", b.n, a.n, a.n)));
        }
        if a.n >= 2 && b.l != a.m + a.l {
            return Err(Error::Invariant(format!("l_{} != m_{} + l_{}", b.n, a.n, a.n)));
        }
        for v in &a.body.vertices {
            if !polytope::contains(&b.body, &v.embed(b.m)?)? {
                return Err(Error::Invariant(format!("K_{} is not inside K_{}", a.n, b.n)));
            }
        }
    }
    for st in &ledger.stages {
        for v in &st.body.vertices {
            if v.coords.iter().any(|x| x.is_negative() || *x > F::one()) || !v.coords[0].is_one() {
                return Err(Error::Invariant(format!(
                    "K_{} vertex leaves [0,1] or has first coordinate != 1",
                    st.n
                )));
            }
        }
        if ledger.nets.len() < st.l {
            return Err(Error::Invariant(format!("net shorter than l_{}", st.n)));
        }
        for g in &ledger.nets[..st.l] {
            let fits = g.coords.iter().skip(st.m).all(|x| x.is_zero());
            let g = SeqVector::new(g.coords.iter().take(st.m).cloned().collect(), None).embed(st.m)?;
            if !fits || !polytope::contains(&st.body, &g)? {
                return Err(Error::Invariant(format!("net point outside K_{}", st.n)));
            }
        }
    }
    Ok(())
}

/// `A = 2(K_N - 1/2)` in the c model of dimension `m_N`; every vertex has limit -1.
pub fn doubled_stage<F: Field>(ledger: &StageLedger<F>) -> Result<VPolytope<F>> {
    let m = ledger.last().m;
    let two = F::from_int(2);
    let verts = ledger
        .top()
        .vertices
        .iter()
        .map(|v| {
            let coords = v.coords.iter().map(|x| two.clone() * x.clone() - F::one()).collect();
            SeqVector::new(coords, Some(-F::one()))
        })
        .collect();
    Ok(prune(&VPolytope::from_points(SpaceModel::c(m), verts)?))
}

/// `(1-eps)·B_c + eps·B_c0`: the cube with the limit slot squeezed to `1-eps`.
pub fn squeezed_box<F: Field>(dim: usize, eps: &F, caps: &Caps) -> Result<VPolytope<F>> {
    let count = 1u128 << (dim + 1).min(127);
    if count > caps.max_vertices as u128 {
        return Err(Error::CapExceeded {
            cap: "max_vertices",
            needed: count,
            limit: caps.max_vertices as u128,
        });
    }
    let cube = VPolytope::<F>::cube(dim, true)?;
    let s = F::one() - eps.clone();
    let verts = cube
        .vertices
        .into_iter()
        .map(|v| {
            let l = v.limit.expect("c model") * s.clone();
            SeqVector::new(v.coords, Some(l))
        })
        .collect();
    let mut b = VPolytope::from_points(SpaceModel::c(dim), verts)?;
    b.canonical = true;
    b.vertices.sort();
    Ok(b)
}

/// `B_eps = co(A ∪ -A ∪ [(1-eps)B_c + eps·B_c0])` in the c model of dimension `m_N`,
/// returned with its own gauge as the model norm.
pub fn build_b_eps<F: Field>(ledger: &StageLedger<F>, eps: &F, caps: &Caps) -> Result<VPolytope<F>> {
    check_unit_interval("eps", eps)?;
    let m = ledger.last().m;
    let a = doubled_stage(ledger)?;
    let bx = squeezed_box(m, eps, caps)?;
    let mut gens = a.vertices.clone();
    gens.extend(a.neg().vertices);
    gens.extend(bx.vertices);
    let ball = prune(&VPolytope::from_points(SpaceModel::c(m), gens)?);
    let gauge_model = SpaceModel::new(m, true, NormKind::Gauge { ball: Arc::new(ball.clone()) })?;
    ball.with_model(gauge_model)
}

/// Unit ball of `ℓ∞^d ⊕_1 ℓ∞^d`: `co(B_1 × {0} ∪ {0} × B_2)`.
pub fn build_product_ball_p1<F: Field>(d_each: usize) -> Result<VPolytope<F>> {
    if d_each == 0 {
        return Err(precondition("d_each must be at least 1"));
    }
    let cube = VPolytope::<F>::cube(d_each, false)?;
    let model = SpaceModel::new(2 * d_each, false, NormKind::ProductP { p: 1, split: d_each })?;
    let mut verts = Vec::with_capacity(2 * cube.len());
    for v in &cube.vertices {
        let mut left = v.coords.clone();
        left.extend(vec![F::zero(); d_each]);
        verts.push(SeqVector::new(left, None));
        let mut right = vec![F::zero(); d_each];
        right.extend(v.coords.iter().cloned());
        verts.push(SeqVector::new(right, None));
    }
    Ok(prune(&VPolytope::from_points(model, verts)?))
}

/// Two-factor l1-sum ball `co(B1 × {0} ∪ {0} × B2)`.
pub fn build_l1_sum_ball<F: Field>(b1: &VPolytope<F>, b2: &VPolytope<F>) -> Result<VPolytope<F>> {
    if b1.model.has_limit || b2.model.has_limit {
        return Err(precondition("l1-sum factors must be c0 models"));
    }
    polytope::validate_gauge_ball(b1)?;
    polytope::validate_gauge_ball(b2)?;
    let (d1, d2) = (b1.model.dim, b2.model.dim);
    let model = SpaceModel::new(d1 + d2, false, NormKind::L1Sum { split: d1 })?;
    let mut verts = Vec::with_capacity(b1.len() + b2.len());
    for v in &b1.vertices {
        let mut c = v.coords.clone();
        c.extend(vec![F::zero(); d2]);
        verts.push(SeqVector::new(c, None));
    }
    for v in &b2.vertices {
        let mut c = vec![F::zero(); d1];
        c.extend(v.coords.iter().cloned());
        verts.push(SeqVector::new(c, None));
    }
    Ok(prune(&VPolytope::from_points(model, verts)?))
}

/// `(e_1* + e_{m_n+i}*)/s_i` for `i <= l_n`, normalized to support 1 over `K_N`.
pub fn exposing_functionals<F: Field>(ledger: &StageLedger<F>, stage: usize) -> Result<Vec<Functional<F>>> {
    let st = ledger.stage(stage)?;
    if stage >= ledger.depth() {
        return Err(precondition(format!(
            "stage {stage} needs stage {} to be built (N = {})",
            stage + 1,
            ledger.depth()
        )));
    }
    let top = ledger.top();
    let dim = top.model.dim;
    (1..=st.l)
        .map(|i| {
            let f = Functional::coordinate(dim, 1)?.add(&Functional::coordinate(dim, st.m + i)?)?;
            let s = polytope::support(top, &f)?;
            Ok(f.scale(&(F::one() / s)))
        })
        .collect()
}

/// Pairing of a c0 functional with `1/2` in the c model.
pub fn pair_half_ones<F: Field>(f: &Functional<F>, dim: usize) -> Result<F> {
    let half = SeqVector::new(vec![F::half(); dim], Some(F::half()));
    pair(f, &half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::big;
    use crate::Scalar;
    use num_traits::Signed;

    fn s(n: i64, d: i64) -> Scalar {
        big(n, d)
    }

    fn vi(c: &[i64]) -> SeqVector<Scalar> {
        SeqVector::new(c.iter().map(|&n| s(n, 1)).collect(), None)
    }

    #[test]
    fn net_on_segment_in_k2() {
        let k2 = prune(&VPolytope::from_points(SpaceModel::c0(2), vec![vi(&[1, 0]), vi(&[1, 1])]).unwrap());
        let (pts, r) = greedy_net(&k2, 3, 4, &Caps::default()).unwrap();
        assert_eq!(pts[0], vi(&[1, 0]));
        assert!(pts.contains(&vi(&[1, 1])));
        // Oracle: the 5 grid points 0, 1/4, .., 1 in the second coordinate.
        let grid_radius = (0..=4)
            .map(|t| pts.iter().map(|p| (p.coords[1].clone() - s(t, 4)).abs()).min().unwrap())
            .max()
            .unwrap();
        assert!(grid_radius <= r);
        assert!(r <= s(1, 2));
    }

    #[test]
    fn net_on_singleton_and_unit_segment() {
        let single = prune(&VPolytope::from_points(SpaceModel::c0(1), vec![vi(&[1])]).unwrap());
        let (pts, r) = greedy_net(&single, 1, 4, &Caps::default()).unwrap();
        assert_eq!(pts, vec![vi(&[1])]);
        assert_eq!(r, s(0, 1));
        let seg = prune(&VPolytope::from_points(SpaceModel::c0(1), vec![vi(&[0]), vi(&[1])]).unwrap());
        let (_, r) = greedy_net(&seg, 2, 2, &Caps::default()).unwrap();
        assert!(r <= s(1, 2));
    }

    #[test]
    fn stage_two() {
        let ledger = build_stages::<Scalar>(2, 3, 4, &Caps::default()).unwrap();
        assert_eq!(ledger.stage(2).unwrap().body.vertices, vec![vi(&[1, 0]), vi(&[1, 1])]);
        assert_eq!(ledger.stage(2).unwrap().m, 2);
        assert_eq!(ledger.nets[0], vi(&[1]).embed(2).unwrap());
    }

    #[test]
    fn stage_three_shape() {
        let ledger = build_stages::<Scalar>(3, 3, 4, &Caps::default()).unwrap();
        let st = ledger.stage(3).unwrap();
        assert_eq!((st.m, st.l), (5, 5));
        assert_eq!(st.body.len(), 5);
        assert_eq!(ledger.nets.len(), 5);
        // Oracle: K3 is generated by K2 and the three bumps, all extreme.
        let g = &ledger.nets;
        assert_eq!(g[1], vi(&[1, 1]));
        assert_eq!(g[2], SeqVector::new(vec![s(1, 1), s(1, 2)], None));
        let d = polytope::diameter(&st.body, &SpaceModel::c0(5)).unwrap();
        assert_eq!(d.value.as_exact(), Some(s(1, 1)));
    }

    #[test]
    fn renorm_schedule() {
        let ledger = build_stages::<Scalar>(3, 3, 4, &Caps::default()).unwrap();
        let fs = exposing_functionals(&ledger, 2).unwrap();
        let model = SpaceModel::c(5);
        let fs: Vec<_> = fs.into_iter().map(|f| Functional::new(f.coeffs, s(0, 1))).collect();
        let p = RenormParams::solve(s(1, 4), s(1, 8), fs, &model).unwrap();
        assert_eq!(p.rho, s(3, 416));
        assert_eq!(p.delta, s(3, 832));
        assert_eq!(p.delta_tilde, s(9, 832));
        let mut bad = p.clone();
        bad.rho = s(1, 8);
        let err = bad.check(&model).unwrap_err();
        assert!(err.to_string().contains("2·rho < eps"), "{err}");
    }

    #[test]
    fn b_eps_small() {
        let ledger = build_stages::<Scalar>(2, 3, 4, &Caps::default()).unwrap();
        let b = build_b_eps(&ledger, &s(1, 4), &Caps::default()).unwrap();
        let e1 = SeqVector::new(vec![s(1, 1), s(0, 1)], Some(s(0, 1)));
        assert!(polytope::contains(&b, &e1).unwrap());
        assert_eq!(polytope::gauge(&b, &e1).unwrap(), s(1, 1));
        let a1 = SeqVector::new(vec![s(1, 1), s(-1, 1)], Some(s(-1, 1)));
        assert!(b.vertices.contains(&a1));
        for v in &b.vertices {
            assert!(polytope::contains(&b, &v.neg()).unwrap());
        }
        let d = polytope::diameter(&b, &b.model).unwrap();
        assert_eq!(d.value.as_exact(), Some(s(2, 1)));
    }

    #[test]
    fn product_and_sum_balls() {
        let d1 = build_product_ball_p1::<Scalar>(1).unwrap();
        assert_eq!(d1.len(), 4);
        let d2 = build_product_ball_p1::<Scalar>(2).unwrap();
        assert_eq!(d2.len(), 8);
        let f = Functional::coordinate(4, 1).unwrap();
        assert_eq!(polytope::support(&d2, &f).unwrap(), s(1, 1));

        let seg = VPolytope::<Scalar>::cube(1, false).unwrap();
        let diamond = build_l1_sum_ball(&seg, &seg).unwrap();
        assert_eq!(diamond.len(), 4);
        let square = VPolytope::<Scalar>::cube(2, false).unwrap();
        let z = build_l1_sum_ball(&diamond.clone().with_model(SpaceModel::c0(2)).unwrap(), &square).unwrap();
        assert_eq!(z.len(), 8);
        let x = SeqVector::new(vec![s(1, 3), s(1, 6), s(0, 1), s(0, 1)], None);
        let xb = SeqVector::new(vec![s(1, 3), s(1, 6)], None);
        assert_eq!(polytope::gauge(&z, &x).unwrap(), polytope::gauge(&diamond, &xb).unwrap());
    }
}
