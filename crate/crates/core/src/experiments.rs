//! Proof-following verifications. Each operation returns a [`Certificate`]
//! whose payload can be re-verified by [`recheck`] with membership, pairing,
//! norm and gauge evaluations alone.
//!
//! Lower bounds are witnessed by explicit points of the open sets; upper
//! bounds are computed on closed supersets.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::constructions::{doubled_stage, pair_half_ones, squeezed_box, RenormParams, StageLedger};
use crate::error::{precondition, structural, Error, Result};
use crate::exact_lp::PthRoot;
use crate::polytope::{
    self, clip, contains, dual_extreme_points, gauge, hull_decomposition,
    minkowski_diameter, prune, support, Caps, HalfSpace, SumDiameter, VPolytope,
};
use crate::scalar::Field;
use crate::seqspace::{
    bump_sequences, pair, vector_norm, Functional, NormKind, NormValue, SeqVector, SpaceModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    Prop21LowerBound,
    K0OpenDiameter,
    K0SmallCombo,
    ThmComboUpper,
    ThmOpenDiameter,
    Lemma24Equality,
    L1sumInclusion,
}

impl CertificateKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Prop21LowerBound => "prop21_lower_bound",
            Self::K0OpenDiameter => "k0_open_diameter",
            Self::K0SmallCombo => "k0_small_combo",
            Self::ThmComboUpper => "thm_combo_upper",
            Self::ThmOpenDiameter => "thm_open_diameter",
            Self::Lemma24Equality => "lemma24_equality",
            Self::L1sumInclusion => "l1sum_inclusion",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Self::Pass
        } else {
            Self::Fail
        }
    }

    pub fn passed(self) -> bool {
        self == Self::Pass
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Certificate<F: Field> {
    pub kind: CertificateKind,
    /// Truncation level `N` for ledger-based experiments.
    pub truncation: Option<usize>,
    pub parameters: Value,
    pub claimed_bound: Option<NormValue<F>>,
    pub measured: Option<NormValue<F>>,
    pub payload: Payload<F>,
    pub verdict: Verdict,
    pub ledger_hash: Option<String>,
}

/// One slice `{x : f(x) >= threshold}` (or `>` when `strict`) with its weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SliceRecord<F: Field> {
    pub functional: Functional<F>,
    #[serde(with = "crate::scalar::serde_exact")]
    pub threshold: F,
    #[serde(with = "crate::scalar::serde_exact")]
    pub weight: F,
}

impl<F: Field> SliceRecord<F> {
    fn strictly_inside(&self, x: &SeqVector<F>) -> Result<bool> {
        Ok(pair(&self.functional, x)? > self.threshold)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", bound = "")]
pub enum Payload<F: Field> {
    Prop21 {
        p: u32,
        model: SpaceModel<F>,
        slices: Vec<SliceRecord<F>>,
        points: Vec<SeqVector<F>>,
        bump_index: usize,
        plus: Vec<SeqVector<F>>,
        minus: Vec<SeqVector<F>>,
        difference: SeqVector<F>,
    },
    K0Open {
        body: VPolytope<F>,
        center: SeqVector<F>,
        functionals: Vec<Functional<F>>,
        #[serde(with = "crate::scalar::serde_exact")]
        radius: F,
        net_index: usize,
        base: SeqVector<F>,
        bump: SeqVector<F>,
        bump_coordinate: usize,
    },
    K0Combo {
        stage: usize,
        #[serde(with = "crate::scalar::serde_exact")]
        alpha: F,
        slices: Vec<SliceRecord<F>>,
        bodies: Vec<VPolytope<F>>,
        diameter: SumDiameter<F>,
    },
    ThmCombo {
        params: RenormParams<F>,
        ball: VPolytope<F>,
        #[serde(with = "crate::scalar::serde_exact")]
        limit_cap: F,
        #[serde(with = "crate::scalar::serde_exact::vec")]
        thresholds: Vec<F>,
        regions: Vec<VPolytope<F>>,
        nonempty_witnesses: Vec<SeqVector<F>>,
        #[serde(with = "crate::scalar::serde_exact::vec")]
        lambda_min: Vec<F>,
        #[serde(with = "crate::scalar::serde_exact")]
        base_diameter: F,
        /// Support-function diameter of `Σ w_i U_i` over the polar vertices of the ball.
        diameter: SumDiameter<F>,
    },
    ThmOpen {
        ball: VPolytope<F>,
        family_a: VPolytope<F>,
        family_b: VPolytope<F>,
        #[serde(with = "crate::scalar::serde_exact")]
        eps: F,
        functionals: Vec<Functional<F>>,
        center: SeqVector<F>,
        #[serde(with = "crate::scalar::serde_exact")]
        radius: F,
        net_index: usize,
        #[serde(with = "crate::scalar::serde_exact")]
        lambda: F,
        bump_coordinate: usize,
        x0: SeqVector<F>,
        base: SeqVector<F>,
        x: SeqVector<F>,
        y: SeqVector<F>,
        regions: Vec<RegionRecord>,
    },
    Lemma24 {
        a: VPolytope<F>,
        b: VPolytope<F>,
        left: VPolytope<F>,
        left_regions: Vec<RegionRecord>,
        samples: Vec<SeqVector<F>>,
        sample_regions: Vec<RegionRecord>,
        decompositions: Vec<Decomposition<F>>,
    },
    L1Sum {
        factor1: VPolytope<F>,
        factor2: VPolytope<F>,
        functional: Functional<F>,
        #[serde(with = "crate::scalar::serde_exact")]
        alpha: F,
        #[serde(with = "crate::scalar::serde_exact")]
        mu: F,
        slice: VPolytope<F>,
        #[serde(with = "crate::scalar::serde_exact::vec")]
        values: Vec<F>,
        #[serde(with = "crate::scalar::serde_exact::vec")]
        tail_gauges: Vec<F>,
    },
}

/// Which of `co(A ∪ B)` and `co(-A ∪ B)` a point fell into.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub label: String,
    pub in_plus: bool,
    pub in_minus: bool,
}

/// `x = (λ1 - λ2)·a1 + 2λ2·(a1 - a2)/2 + λ3·b`, or
/// `x = (λ2 - λ1)·(-a2) + 2λ1·(a1 - a2)/2 + λ3·b` when `λ2 > λ1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Decomposition<F: Field> {
    pub point: SeqVector<F>,
    #[serde(with = "crate::scalar::serde_exact")]
    pub lambda1: F,
    #[serde(with = "crate::scalar::serde_exact")]
    pub lambda2: F,
    #[serde(with = "crate::scalar::serde_exact")]
    pub lambda3: F,
    pub a1: SeqVector<F>,
    pub a2: SeqVector<F>,
    pub b: SeqVector<F>,
    /// `(a1 - a2)/2`, a point of `B`.
    pub midpoint: SeqVector<F>,
    pub mirrored: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SliceSpec<F: Field> {
    pub functional: Functional<F>,
    #[serde(with = "crate::scalar::serde_exact")]
    pub alpha: F,
    #[serde(with = "crate::scalar::serde_exact")]
    pub weight: F,
}

fn text<F: Field>(x: &F) -> Value {
    Value::String(x.to_string())
}

fn check_weights<F: Field>(weights: impl Iterator<Item = F>) -> Result<()> {
    let mut total = F::zero();
    for w in weights {
        if w.is_negative() {
            return Err(precondition(format!("negative weight {w}")));
        }
        total = total + w;
    }
    if !total.is_one() {
        return Err(precondition(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// Closed slice `{x ∈ B : f(x) >= sup f(B) - alpha}`.
pub fn slice_of<F: Field>(b: &VPolytope<F>, f: &Functional<F>, alpha: &F) -> Result<VPolytope<F>> {
    let sup = support(b, f)?;
    let inf = -support(b, &f.scale(&-F::one()))?;
    if !alpha.is_positive() || *alpha > sup.clone() - inf {
        return Err(precondition(format!(
            "slice depth {alpha} outside (0, width of the body]"
        )));
    }
    let h = HalfSpace::ge(f.clone(), sup - alpha.clone())?;
    clip(b, &h)?.ok_or_else(|| Error::Invariant("slice lost its support vertex".into()))
}

/// `sup (x*, y*)` over the unit ball of `ℓ∞ ⊕_p ℓ∞` given `a = ‖x*‖₁`, `b = ‖y*‖₁`.
fn product_dual_sup<F: Field>(a: &F, b: &F, p: u32) -> Result<F> {
    if p == 1 {
        return Ok(a.clone().max(b.clone()));
    }
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    if p == 2 {
        if let Some(h) = (a.clone() * a.clone() + b.clone() * b.clone()).sqrt_exact() {
            return Ok(h);
        }
    }
    Err(Error::Unsupported(format!(
        "the dual norm of a two-factor functional is irrational for p = {p}"
    )))
}

fn signs<F: Field>(coeffs: &[F], scale: &F) -> Vec<F> {
    coeffs
        .iter()
        .map(|c| match c.cmp(&F::zero()) {
            Ordering::Greater => scale.clone(),
            Ordering::Less => -scale.clone(),
            Ordering::Equal => F::zero(),
        })
        .collect()
}

fn top_index<F: Field>(xs: &[F]) -> usize {
    xs.iter().rposition(|a| !a.is_zero()).map_or(0, |i| i + 1)
}

/// Lower bound `(1 - eps')^{1/p}` for the diameter of `Σλ_i S_i` in
/// the unit ball of `ℓ∞^d ⊕_p ℓ∞^d`.
pub fn prop21_certificate<F: Field>(
    p: u32,
    d_each: usize,
    specs: &[SliceSpec<F>],
    eps_prime: &F,
) -> Result<Certificate<F>> {
    if p == 0 {
        return Err(precondition("p must be a positive integer"));
    }
    if specs.is_empty() {
        return Err(precondition("at least one slice is needed"));
    }
    if !eps_prime.is_positive() || *eps_prime >= F::one() {
        return Err(precondition("eps' must lie in (0, 1)"));
    }
    check_weights(specs.iter().map(|s| s.weight.clone()))?;
    let model = SpaceModel::new(2 * d_each, false, NormKind::ProductP { p, split: d_each })?;
    let alpha = specs.iter().map(|s| s.alpha.clone()).min().expect("nonempty");
    let mut slices = Vec::new();
    let mut points = Vec::new();
    let mut scales = Vec::new();
    let mut k0 = 0;
    for spec in specs {
        model.check_functional(&spec.functional)?;
        let (xs, ys) = spec.functional.coeffs.split_at(d_each);
        let a = xs.iter().fold(F::zero(), |acc, c| acc + c.abs());
        let b = ys.iter().fold(F::zero(), |acc, c| acc + c.abs());
        if a.is_zero() && b.is_zero() {
            return Err(precondition("slice functional is zero"));
        }
        let sup = product_dual_sup(&a, &b, p)?;
        if !spec.alpha.is_positive() || spec.alpha >= sup {
            return Err(precondition(format!("slice depth {} outside (0, sup)", spec.alpha)));
        }
        let (s, t) = if p == 1 {
            if a >= b {
                (F::one(), F::zero())
            } else {
                (F::zero(), F::one())
            }
        } else {
            (a.clone() / sup.clone(), b.clone() / sup.clone())
        };
        let mut coords = signs(xs, &s);
        coords.extend(signs(ys, &t));
        let point = SeqVector::new(coords, None);
        k0 = k0
            .max(top_index(xs))
            .max(top_index(ys))
            .max(top_index(&point.coords[..d_each]))
            .max(top_index(&point.coords[d_each..]));
        slices.push(SliceRecord {
            functional: spec.functional.clone(),
            threshold: sup - alpha.clone(),
            weight: spec.weight.clone(),
        });
        points.push(point);
        scales.push((s, t));
    }
    let one = F::one();
    let mut chosen = None;
    'scan: for k in (k0 + 1)..=d_each {
        let mut plus = Vec::new();
        let mut minus = Vec::new();
        for ((slice, point), (s, t)) in slices.iter().zip(&points).zip(&scales) {
            let mut bump = vec![F::zero(); 2 * d_each];
            bump[k - 1] = s.clone();
            bump[d_each + k - 1] = t.clone();
            let bump = SeqVector::new(bump, None);
            for cand in [point.add(&bump)?, point.sub(&bump)?] {
                let in_ball = vector_norm(&model, &cand)?.cmp_scalar(&one)? != Ordering::Greater;
                if !in_ball || !slice.strictly_inside(&cand)? {
                    continue 'scan;
                }
            }
            plus.push(point.add(&bump)?);
            minus.push(point.sub(&bump)?);
        }
        chosen = Some((k, plus, minus));
        break;
    }
    let Some((k, plus, minus)) = chosen else {
        return Err(Error::TruncationTooSmall(format!(
            "no free coordinate above {k0} within d_each = {d_each}"
        )));
    };
    let mut difference = model.zero();
    for ((slice, a), b) in slices.iter().zip(&plus).zip(&minus) {
        difference = difference.axpy(&slice.weight, &a.sub(b)?)?;
    }
    let measured = vector_norm(&model, &difference)?;
    let floor = F::one() - eps_prime.clone();
    let claimed = if p == 1 {
        NormValue::exact(floor)
    } else {
        NormValue::Root(PthRoot::new(floor, p)?)
    };
    let verdict = Verdict::from_bool(measured.cmp_value(&claimed)? != Ordering::Less);
    Ok(Certificate {
        kind: CertificateKind::Prop21LowerBound,
        truncation: None,
        parameters: json!({
            "p": p,
            "d_each": d_each,
            "eps_prime": text(eps_prime),
            "alpha_min": text(&alpha),
            "slices": specs.len(),
        }),
        claimed_bound: Some(claimed),
        measured: Some(measured),
        payload: Payload::Prop21 {
            p,
            model,
            slices,
            points,
            bump_index: k,
            plus,
            minus,
            difference,
        },
        verdict,
        ledger_hash: None,
    })
}

/// Exact diameter of `Σλ_i S_i` for closed slices of the `p = 1` product ball.
pub fn prop21_exact_p1<F: Field>(specs: &[SliceSpec<F>], d_each: usize) -> Result<SumDiameter<F>> {
    check_weights(specs.iter().map(|s| s.weight.clone()))?;
    let ball = crate::constructions::build_product_ball_p1::<F>(d_each)?;
    let parts = specs
        .iter()
        .map(|s| Ok((s.weight.clone(), slice_of(&ball, &s.functional, &s.alpha)?)))
        .collect::<Result<Vec<_>>>()?;
    minkowski_diameter(&parts, &ball.model)
}

fn in_weak_nbhd<F: Field>(
    functionals: &[Functional<F>],
    center: &SeqVector<F>,
    radius: &F,
    x: &SeqVector<F>,
) -> Result<bool> {
    let d = x.sub(center)?;
    for f in functionals {
        if pair(f, &d)?.abs() >= *radius {
            return Ok(false);
        }
    }
    Ok(true)
}

fn lift_functionals<F: Field>(
    functionals: &[Functional<F>],
    dim: usize,
    top_allowed: usize,
) -> Result<Vec<Functional<F>>> {
    functionals
        .iter()
        .map(|f| {
            if f.support_top() > top_allowed {
                return Err(precondition(format!(
                    "functional reaches coordinate {} but must stay within 1..={top_allowed}",
                    f.support_top()
                )));
            }
            f.embed(dim)
        })
        .collect()
}

/// A net point `g_i ∈ U` and its stage-`N` bump, at sup distance exactly 1.
pub fn k0_open_witness<F: Field>(
    ledger: &StageLedger<F>,
    center_index: usize,
    functionals: &[Functional<F>],
    radius: &F,
) -> Result<Certificate<F>> {
    let n = ledger.depth();
    let prev = ledger.stage(n - 1)?;
    let body = ledger.top().clone();
    let dim = body.model.dim;
    if !radius.is_positive() {
        return Err(precondition("radius must be positive"));
    }
    let fs = lift_functionals(functionals, dim, prev.m)?;
    if fs.iter().any(|f| !f.limit_coeff.is_zero()) {
        return Err(precondition("functionals on K_N act on c0 and carry no limit part"));
    }
    let center = ledger.net_point(center_index, dim)?;
    let order: Vec<usize> = std::iter::once(center_index)
        .filter(|&i| i <= prev.l)
        .chain((1..=prev.l).filter(|&i| i != center_index))
        .collect();
    let mut found = None;
    for i in order {
        let g = ledger.net_point(i, dim)?;
        if in_weak_nbhd(&fs, &center, radius, &g)? {
            found = Some((i, g));
            break;
        }
    }
    let Some((i, base)) = found else {
        return Err(Error::SearchFailed(format!(
            "no net point g_i with i <= {} in the neighborhood",
            prev.l
        )));
    };
    let k = prev.m + i;
    let bump = base.add(&SeqVector::unit(dim, false, k)?)?;
    let gap = bump.sub(&base)?.sup_norm();
    let ok = in_weak_nbhd(&fs, &center, radius, &bump)?
        && contains(&body, &base)?
        && contains(&body, &bump)?
        && gap.is_one();
    let diam = polytope::diameter(&body, &SpaceModel::c0(dim))?;
    let ok = ok && diam.value.as_exact() == Some(F::one());
    Ok(Certificate {
        kind: CertificateKind::K0OpenDiameter,
        truncation: Some(n),
        parameters: json!({
            "N": n,
            "center_index": center_index,
            "functionals": fs.len(),
            "radius": text(radius),
        }),
        claimed_bound: Some(NormValue::exact(F::one())),
        measured: Some(NormValue::exact(gap)),
        payload: Payload::K0Open {
            body,
            center,
            functionals: fs,
            radius: radius.clone(),
            net_index: i,
            base,
            bump,
            bump_coordinate: k,
        },
        verdict: Verdict::from_bool(ok),
        ledger_hash: Some(ledger.hash()),
    })
}

/// Equal-weight average of slices of `K_N` exposing the bumps
/// `g_i + e_{m_n+i}`; records the measured sup-norm diameter.
pub fn k0_small_combo_search<F: Field>(
    ledger: &StageLedger<F>,
    stage: usize,
    alpha: &F,
) -> Result<Certificate<F>> {
    let fs = crate::constructions::exposing_functionals(ledger, stage)?;
    let top = ledger.top();
    let weight = F::one() / F::from_int(fs.len() as i64);
    let mut slices = Vec::new();
    let mut bodies = Vec::new();
    for f in &fs {
        let body = slice_of(top, f, alpha)?;
        slices.push(SliceRecord {
            functional: f.clone(),
            threshold: support(top, f)? - alpha.clone(),
            weight: weight.clone(),
        });
        bodies.push(body);
    }
    let parts: Vec<(F, VPolytope<F>)> =
        bodies.iter().map(|b| (weight.clone(), b.clone())).collect();
    let diameter = minkowski_diameter(&parts, &SpaceModel::c0(top.model.dim))?;
    Ok(Certificate {
        kind: CertificateKind::K0SmallCombo,
        truncation: Some(ledger.depth()),
        parameters: json!({
            "N": ledger.depth(),
            "stage": stage,
            "alpha": text(alpha),
            "slices": fs.len(),
        }),
        claimed_bound: None,
        measured: Some(NormValue::exact(diameter.value.clone())),
        payload: Payload::K0Combo {
            stage,
            alpha: alpha.clone(),
            slices,
            bodies,
            diameter,
        },
        verdict: Verdict::Pass,
        ledger_hash: Some(ledger.hash()),
    })
}

/// Slice functionals of a combo certificate, lifted to the c model.
pub fn c_model_functionals<F: Field>(slices: &Certificate<F>) -> Result<Vec<Functional<F>>> {
    match &slices.payload {
        Payload::K0Combo { slices, .. } => Ok(slices
            .iter()
            .map(|s| Functional::new(s.functional.coeffs.clone(), F::zero()))
            .collect()),
        _ => Err(precondition("expected a k0_small_combo certificate")),
    }
}

fn generator_families<F: Field>(
    ledger: &StageLedger<F>,
    eps: &F,
    caps: &Caps,
) -> Result<(VPolytope<F>, VPolytope<F>)> {
    let a = doubled_stage(ledger)?;
    let b = squeezed_box(ledger.last().m, eps, caps)?;
    Ok((a, b))
}

/// Weight on the `A` family in some decomposition of `x` over `A ∪ -A ∪ box`.
fn family_weight<F: Field>(gens: &VPolytope<F>, a_count: usize, x: &SeqVector<F>) -> Result<F> {
    let w = hull_decomposition(gens, x)?
        .ok_or_else(|| Error::Invariant("point outside B_eps has no decomposition".into()))?;
    Ok(w.into_iter().take(a_count).fold(F::zero(), |acc, v| acc + v))
}

/// Closed `U_i` regions of `B_eps`, their average, and its gauge diameter
/// against `gamma`.
pub fn thm_combo_ui<F: Field>(
    ledger: &StageLedger<F>,
    params: &RenormParams<F>,
    slices: &Certificate<F>,
    ball: &VPolytope<F>,
    caps: &Caps,
) -> Result<Certificate<F>> {
    let m = ledger.last().m;
    let c_model = SpaceModel::c(m);
    if !ball.model.same_space(&c_model) || !matches!(ball.model.norm, NormKind::Gauge { .. }) {
        return Err(precondition("ball must be B_eps over the ledger's top stage"));
    }
    params.check(&c_model)?;
    let Payload::K0Combo { alpha, diameter, .. } = &slices.payload else {
        return Err(precondition("expected a k0_small_combo certificate"));
    };
    if *alpha != params.delta_tilde {
        return Err(precondition(format!(
            "base slices must have depth delta_tilde = {}, got {alpha}",
            params.delta_tilde
        )));
    }
    if c_model_functionals(slices)? != params.functionals {
        return Err(precondition("params functionals differ from the base slices"));
    }
    let budget = (F::one() - params.eps.clone()) * params.gamma.clone() / F::from_int(4);
    if diameter.value >= budget {
        return Err(precondition(format!(
            "base slice average has diameter {} >= (1 - eps)·gamma/4 = {budget}",
            diameter.value
        )));
    }
    let (fam_a, fam_b) = generator_families(ledger, &params.eps, caps)?;
    let mut gens = fam_a.vertices.clone();
    gens.extend(fam_a.neg().vertices);
    gens.extend(fam_b.vertices.clone());
    let gens = VPolytope::from_points(c_model.clone(), gens)?;

    let two = F::from_int(2);
    let limit_cap = -F::one() + params.rho.clone() * params.rho.clone();
    let capped = clip(ball, &HalfSpace::le(Functional::limit(m), limit_cap.clone())?)?
        .ok_or_else(|| Error::Invariant("limit cap empties B_eps".into()))?;
    let mut thresholds = Vec::new();
    let mut regions = Vec::new();
    let mut witnesses = Vec::new();
    let mut lambda_min = Vec::new();
    let mut ok = true;
    let lambda_floor = F::one() - params.rho.clone() / two.clone();
    let candidates: Vec<SeqVector<F>> = ledger
        .nets
        .iter()
        .map(|g| g.embed(m))
        .chain(ledger.top().vertices.iter().map(|v| Ok(v.clone())))
        .collect::<Result<_>>()?;
    for f in &params.functionals {
        let norm = f.l1_norm(true);
        let thr = two.clone() * (F::one() - params.delta.clone() - pair_half_ones(f, m)?)
            + params.rho.clone() * norm / two.clone();
        let region = clip(&capped, &HalfSpace::ge(f.clone(), thr.clone())?)?
            .ok_or_else(|| Error::Invariant("closed U_i is empty".into()))?;
        let mut witness = None;
        for g in &candidates {
            let w = SeqVector::new(
                g.coords.iter().map(|x| two.clone() * x.clone() - F::one()).collect(),
                Some(-F::one()),
            );
            if pair(f, &w)? > thr && contains(ball, &w)? {
                witness = Some(w);
                break;
            }
        }
        let Some(witness) = witness else {
            return Err(Error::SearchFailed("no point of 2(K_N - 1/2) in U_i".into()));
        };
        let mut low: Option<F> = None;
        for v in &region.vertices {
            let l = family_weight(&gens, fam_a.len(), v)?;
            low = Some(low.map_or(l.clone(), |c: F| c.min(l)));
        }
        let low = low.expect("nonempty region");
        ok &= low > lambda_floor;
        thresholds.push(thr);
        regions.push(region);
        witnesses.push(witness);
        lambda_min.push(low);
    }
    let parts: Vec<(F, VPolytope<F>)> = params
        .weights
        .iter()
        .cloned()
        .zip(regions.iter().cloned())
        .collect();
    let d = minkowski_diameter(&parts, &ball.model)?;
    let value = d.value.clone();
    ok &= gauge(ball, &d.witness.0.sub(&d.witness.1)?)? == value;
    ok &= value <= params.gamma;
    Ok(Certificate {
        kind: CertificateKind::ThmComboUpper,
        truncation: Some(ledger.depth()),
        parameters: json!({
            "N": ledger.depth(),
            "eps": text(&params.eps),
            "gamma": text(&params.gamma),
            "rho": text(&params.rho),
            "delta": text(&params.delta),
            "delta_tilde": text(&params.delta_tilde),
            "regions": params.functionals.len(),
        }),
        claimed_bound: Some(NormValue::exact(params.gamma.clone())),
        measured: Some(NormValue::exact(value)),
        payload: Payload::ThmCombo {
            params: params.clone(),
            ball: ball.clone(),
            limit_cap,
            thresholds,
            regions,
            nonempty_witnesses: witnesses,
            lambda_min,
            base_diameter: diameter.value.clone(),
            diameter: d,
        },
        verdict: Verdict::from_bool(ok),
        ledger_hash: Some(ledger.hash()),
    })
}

/// Candidate weights on the `2g_i - 1` part of a base point, tried in order.
const LAMBDA_GRID: [(i64, i64); 5] = [(1, 1), (3, 4), (1, 2), (1, 4), (0, 1)];

/// A pair `x, y` in a weak neighborhood of `B_eps` with `‖x - y‖_eps = 2`.
#[allow(clippy::too_many_arguments)]
pub fn thm_open_witness<F: Field>(
    ledger: &StageLedger<F>,
    ball: &VPolytope<F>,
    eps: &F,
    functionals: &[Functional<F>],
    center: &SeqVector<F>,
    radius: &F,
    caps: &Caps,
) -> Result<Certificate<F>> {
    let n = ledger.depth();
    let prev = ledger.stage(n - 1)?;
    let m = ledger.last().m;
    let c_model = SpaceModel::c(m);
    if !ball.model.same_space(&c_model) {
        return Err(precondition("ball must be B_eps over the ledger's top stage"));
    }
    c_model.check_vector(center)?;
    if !radius.is_positive() {
        return Err(precondition("radius must be positive"));
    }
    let fs = lift_functionals(functionals, m, prev.m)?;
    let (fam_a, fam_b) = generator_families(ledger, eps, caps)?;
    let ones = SeqVector::new(vec![F::one(); m], Some(F::one()));
    let two = F::from_int(2);
    let one_minus_eps = F::one() - eps.clone();

    let mut found = None;
    'search: for (ln, ld) in LAMBDA_GRID {
        let lambda = F::frac(ln, ld);
        for i in 1..=prev.l {
            let g = ledger.net_point(i, m)?;
            let g = SeqVector::new(g.coords, Some(F::zero()));
            let a_i = g.scale(&two).sub(&ones)?;
            let (base, x0) = if lambda.is_one() {
                (a_i.clone(), c_model.zero())
            } else {
                let rest = center.sub(&a_i.scale(&lambda))?;
                let x0 = rest.scale(&(F::one() / ((F::one() - lambda.clone()) * one_minus_eps.clone())));
                (center.clone(), x0)
            };
            if x0.sup_norm() > F::one() || !in_weak_nbhd(&fs, center, radius, &base)? {
                continue;
            }
            found = Some((i, lambda.clone(), g, x0, base));
            break 'search;
        }
    }
    let Some((i, lambda, g, x0, base)) = found else {
        return Err(Error::SearchFailed(
            "no base point λ(2g_i - 1) + (1-λ)(1-eps)x0 in the neighborhood".into(),
        ));
    };
    let k = prev.m + i;
    let e_k = SeqVector::unit(m, true, k)?;
    let (xk, yk) = bump_sequences(&x0, k)?;
    let rest = F::one() - lambda.clone();
    let x = g
        .add(&e_k)?
        .scale(&two)
        .sub(&ones)?
        .scale(&lambda)
        .add(&xk.scale(&one_minus_eps).add(&e_k.scale(eps))?.scale(&rest))?;
    let y = g
        .scale(&two)
        .sub(&ones)?
        .scale(&lambda)
        .add(&yk.scale(&one_minus_eps).sub(&e_k.scale(eps))?.scale(&rest))?;
    let gap = gauge(ball, &x.sub(&y)?)?;
    let plus = union_hull(&fam_a, &fam_b)?;
    let minus = union_hull(&fam_a.neg(), &fam_b)?;
    let mut regions = Vec::new();
    for (label, p) in [("base", &base), ("x", &x), ("y", &y)] {
        regions.push(RegionRecord {
            label: label.into(),
            in_plus: contains(&plus, p)?,
            in_minus: contains(&minus, p)?,
        });
    }
    let ok = in_weak_nbhd(&fs, center, radius, &x)?
        && in_weak_nbhd(&fs, center, radius, &y)?
        && contains(ball, &x)?
        && contains(ball, &y)?
        && x.sub(&y)? == e_k.scale(&two)
        && gap == two
        && regions.iter().all(|r| r.in_plus || r.in_minus);
    Ok(Certificate {
        kind: CertificateKind::ThmOpenDiameter,
        truncation: Some(n),
        parameters: json!({
            "N": n,
            "eps": text(eps),
            "radius": text(radius),
            "functionals": fs.len(),
        }),
        claimed_bound: Some(NormValue::exact(two)),
        measured: Some(NormValue::exact(gap)),
        payload: Payload::ThmOpen {
            ball: ball.clone(),
            family_a: fam_a,
            family_b: fam_b,
            eps: eps.clone(),
            functionals: fs,
            center: center.clone(),
            radius: radius.clone(),
            net_index: i,
            lambda,
            bump_coordinate: k,
            x0,
            base,
            x,
            y,
            regions,
        },
        verdict: Verdict::from_bool(ok),
        ledger_hash: Some(ledger.hash()),
    })
}

fn union_hull<F: Field>(a: &VPolytope<F>, b: &VPolytope<F>) -> Result<VPolytope<F>> {
    if !a.model.same_space(&b.model) {
        return Err(structural("hull of polytopes from different spaces"));
    }
    let mut pts = a.vertices.clone();
    pts.extend(b.vertices.iter().cloned());
    Ok(prune(&VPolytope::from_points(a.model.clone(), pts)?))
}

/// Deterministic sample points of `left`: the centroid and pairwise midpoints.
fn sample_points<F: Field>(left: &VPolytope<F>, limit: usize) -> Result<Vec<SeqVector<F>>> {
    let n = left.len();
    let mut out = Vec::new();
    let mut centroid = left.model.zero();
    let w = F::one() / F::from_int(n as i64);
    for v in &left.vertices {
        centroid = centroid.axpy(&w, v)?;
    }
    out.push(centroid);
    'outer: for i in 0..n {
        for j in (i + 1)..n {
            if out.len() >= limit {
                break 'outer;
            }
            out.push(left.vertices[i].add(&left.vertices[j])?.scale(&F::half()));
        }
    }
    Ok(out)
}

fn weighted_mean<F: Field>(
    points: &[SeqVector<F>],
    weights: &[F],
    fallback: &SeqVector<F>,
) -> Result<(F, SeqVector<F>)> {
    let total = weights.iter().fold(F::zero(), |acc, w| acc + w.clone());
    if total.is_zero() {
        return Ok((total, fallback.clone()));
    }
    let mut acc = fallback.scale(&F::zero());
    for (p, w) in points.iter().zip(weights) {
        acc = acc.axpy(&(w.clone() / total.clone()), p)?;
    }
    Ok((total, acc))
}

/// `co(A ∪ -A ∪ B) = co(A ∪ B) ∪ co(-A ∪ B)` under `(A - A)/2 ⊂ B`.
pub fn lemma24_check<F: Field>(a: &VPolytope<F>, b: &VPolytope<F>) -> Result<Certificate<F>> {
    if !a.model.same_space(&b.model) {
        return Err(structural("A and B live in different spaces"));
    }
    let a = polytope::prune(a);
    let b = polytope::prune(b);
    if !contains(&b, &a.model.zero())? {
        return Err(precondition("hypothesis fails: 0 = (a - a)/2 is not in B"));
    }
    for (i, u) in a.vertices.iter().enumerate() {
        for (j, w) in a.vertices.iter().enumerate() {
            if i != j && !contains(&b, &u.sub(w)?.scale(&F::half()))? {
                return Err(precondition(format!(
                    "hypothesis fails: (a_{} - a_{})/2 is not in B",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let neg_a = a.neg();
    let mut all = a.vertices.clone();
    all.extend(neg_a.vertices.iter().cloned());
    all.extend(b.vertices.iter().cloned());
    let left = prune(&VPolytope::from_points(a.model.clone(), all)?);
    let plus = union_hull(&a, &b)?;
    let minus = union_hull(&neg_a, &b)?;
    let region = |label: String, x: &SeqVector<F>| -> Result<RegionRecord> {
        Ok(RegionRecord {
            label,
            in_plus: contains(&plus, x)?,
            in_minus: contains(&minus, x)?,
        })
    };
    let left_regions = left
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| region(format!("vertex {}", i + 1), v))
        .collect::<Result<Vec<_>>>()?;
    let samples = sample_points(&left, 32)?;
    let sample_regions = samples
        .iter()
        .enumerate()
        .map(|(i, v)| region(format!("sample {}", i + 1), v))
        .collect::<Result<Vec<_>>>()?;
    let mut ok = left_regions.iter().chain(&sample_regions).all(|r| r.in_plus || r.in_minus);
    for v in plus.vertices.iter().chain(&minus.vertices) {
        ok &= contains(&left, v)?;
    }
    let decompositions = samples
        .iter()
        .map(|x| decompose(&a, &neg_a, &b, x))
        .collect::<Result<Vec<_>>>()?;
    for d in &decompositions {
        ok &= check_decomposition(&b, d)?;
    }
    Ok(Certificate {
        kind: CertificateKind::Lemma24Equality,
        truncation: None,
        parameters: json!({
            "dim": a.model.dim,
            "a_vertices": a.len(),
            "b_vertices": b.len(),
        }),
        claimed_bound: None,
        measured: None,
        payload: Payload::Lemma24 {
            a,
            b,
            left,
            left_regions,
            samples,
            sample_regions,
            decompositions,
        },
        verdict: Verdict::from_bool(ok),
        ledger_hash: None,
    })
}

fn decompose<F: Field>(
    a: &VPolytope<F>,
    neg_a: &VPolytope<F>,
    b: &VPolytope<F>,
    x: &SeqVector<F>,
) -> Result<Decomposition<F>> {
    let mut gens = a.vertices.clone();
    gens.extend(neg_a.vertices.iter().cloned());
    gens.extend(b.vertices.iter().cloned());
    let all = VPolytope::from_points(a.model.clone(), gens)?;
    let w = hull_decomposition(&all, x)?
        .ok_or_else(|| precondition("sample point is outside co(A ∪ -A ∪ B)"))?;
    let (na, nb) = (a.len(), b.len());
    let (l1, a1) = weighted_mean(&a.vertices, &w[..na], &a.vertices[0])?;
    // -a2 is the mean of the -A part.
    let (l2, neg_a2) = weighted_mean(&neg_a.vertices, &w[na..2 * na], &neg_a.vertices[0])?;
    let (l3, bb) = weighted_mean(&b.vertices, &w[2 * na..2 * na + nb], &b.vertices[0])?;
    let a2 = neg_a2.neg();
    let mirrored = l2 > l1;
    let midpoint = a1.sub(&a2)?.scale(&F::half());
    Ok(Decomposition {
        point: x.clone(),
        lambda1: l1,
        lambda2: l2,
        lambda3: l3,
        a1,
        a2,
        b: bb,
        midpoint,
        mirrored,
    })
}

fn check_decomposition<F: Field>(b: &VPolytope<F>, d: &Decomposition<F>) -> Result<bool> {
    let two = F::from_int(2);
    let rebuilt = if d.mirrored {
        d.a2
            .neg()
            .scale(&(d.lambda2.clone() - d.lambda1.clone()))
            .add(&d.midpoint.scale(&(two * d.lambda1.clone())))?
            .add(&d.b.scale(&d.lambda3))?
    } else {
        d.a1
            .scale(&(d.lambda1.clone() - d.lambda2.clone()))
            .add(&d.midpoint.scale(&(two * d.lambda2.clone())))?
            .add(&d.b.scale(&d.lambda3))?
    };
    let total = d.lambda1.clone() + d.lambda2.clone() + d.lambda3.clone();
    Ok(rebuilt == d.point && total.is_one() && contains(b, &d.midpoint)?)
}

/// `S(B_Z, (f, 0), μ) ⊂ S(B1, f, α) × μ·B2` on every vertex of the closed slice.
pub fn l1sum_inclusion_check<F: Field>(
    b1: &VPolytope<F>,
    b2: &VPolytope<F>,
    f: &Functional<F>,
    alpha: &F,
    mu: &F,
) -> Result<Certificate<F>> {
    if !mu.is_positive() || mu >= alpha {
        return Err(precondition(format!("need 0 < mu < alpha, got mu = {mu}, alpha = {alpha}")));
    }
    b1.model.check_functional(f)?;
    let sup = support(b1, f)?;
    if !sup.is_one() {
        return Err(precondition(format!("functional must have dual norm 1, has {sup}")));
    }
    let z = crate::constructions::build_l1_sum_ball(b1, b2)?;
    let d1 = b1.model.dim;
    let mut coeffs = f.coeffs.clone();
    coeffs.extend(vec![F::zero(); b2.model.dim]);
    let lifted = Functional::new(coeffs, F::zero());
    let slice = clip(&z, &HalfSpace::ge(lifted, F::one() - mu.clone())?)?
        .ok_or_else(|| Error::Invariant("slice of B_Z is empty".into()))?;
    let mut values = Vec::new();
    let mut tails = Vec::new();
    let mut ok = true;
    for v in &slice.vertices {
        let (x, y) = split(v, d1);
        let fx = pair(f, &x)?;
        let gx = gauge(b1, &x)?;
        let gy = gauge(b2, &y)?;
        ok &= fx > F::one() - alpha.clone() && gx <= F::one() && gy <= *mu;
        values.push(fx);
        tails.push(gy);
    }
    let worst = tails.iter().max().cloned().unwrap_or_else(F::zero);
    Ok(Certificate {
        kind: CertificateKind::L1sumInclusion,
        truncation: None,
        parameters: json!({
            "d1": d1,
            "d2": b2.model.dim,
            "alpha": text(alpha),
            "mu": text(mu),
        }),
        claimed_bound: Some(NormValue::exact(mu.clone())),
        measured: Some(NormValue::exact(worst)),
        payload: Payload::L1Sum {
            factor1: b1.clone(),
            factor2: b2.clone(),
            functional: f.clone(),
            alpha: alpha.clone(),
            mu: mu.clone(),
            slice,
            values,
            tail_gauges: tails,
        },
        verdict: Verdict::from_bool(ok),
        ledger_hash: None,
    })
}

fn split<F: Field>(v: &SeqVector<F>, d1: usize) -> (SeqVector<F>, SeqVector<F>) {
    (
        SeqVector::new(v.coords[..d1].to_vec(), None),
        SeqVector::new(v.coords[d1..].to_vec(), None),
    )
}

/// `max_φ Σ w_i (max φ(P_i) - min φ(P_i))` by direct pairing with vertices.
fn widest_width<F: Field>(parts: &[(F, VPolytope<F>)], duals: &[Functional<F>]) -> Result<F> {
    let mut best = F::zero();
    for phi in duals {
        let mut width = F::zero();
        for (w, body) in parts {
            let vals = body.vertices.iter().map(|v| pair(phi, v)).collect::<Result<Vec<F>>>()?;
            let hi = vals.iter().max().cloned().unwrap_or_else(F::zero);
            let lo = vals.iter().min().cloned().unwrap_or_else(F::zero);
            width = width + w.clone() * (hi - lo);
        }
        best = best.max(width);
    }
    Ok(best)
}

/// Re-evaluates a certificate from its payload alone.
pub fn recheck<F: Field>(cert: &Certificate<F>) -> Result<Verdict> {
    let ok = match &cert.payload {
        Payload::Prop21 {
            model,
            slices,
            plus,
            minus,
            difference,
            ..
        } => {
            let one = F::one();
            let mut ok = plus.len() == slices.len() && minus.len() == slices.len();
            let mut diff = model.zero();
            for ((s, a), b) in slices.iter().zip(plus).zip(minus) {
                for x in [a, b] {
                    ok &= vector_norm(model, x)?.cmp_scalar(&one)? != Ordering::Greater;
                    ok &= s.strictly_inside(x)?;
                }
                diff = diff.axpy(&s.weight, &a.sub(b)?)?;
            }
            ok &= diff == *difference;
            let measured = vector_norm(model, difference)?;
            let claimed = cert.claimed_bound.as_ref().ok_or_else(|| structural("missing bound"))?;
            ok && measured.cmp_value(claimed)? != Ordering::Less
        }
        Payload::K0Open {
            body,
            center,
            functionals,
            radius,
            base,
            bump,
            ..
        } => {
            in_weak_nbhd(functionals, center, radius, base)?
                && in_weak_nbhd(functionals, center, radius, bump)?
                && contains(body, base)?
                && contains(body, bump)?
                && bump.sub(base)?.sup_norm().is_one()
                && polytope::diameter(body, &SpaceModel::c0(body.model.dim))?.value.as_exact()
                    == Some(F::one())
        }
        Payload::K0Combo {
            slices,
            bodies,
            diameter,
            ..
        } => {
            let model = SpaceModel::c0(bodies[0].model.dim);
            let mut ok = true;
            let mut u = model.zero();
            let mut w = model.zero();
            for ((s, body), (hi, lo)) in slices
                .iter()
                .zip(bodies)
                .zip(diameter.upper.iter().zip(&diameter.lower))
            {
                ok &= contains(body, hi)? && contains(body, lo)?;
                ok &= pair(&s.functional, hi)? >= s.threshold && pair(&s.functional, lo)? >= s.threshold;
                u = u.axpy(&s.weight, hi)?;
                w = w.axpy(&s.weight, lo)?;
            }
            ok &= vector_norm(&model, &u.sub(&w)?)?.as_exact() == Some(diameter.value.clone());
            let parts: Vec<(F, VPolytope<F>)> =
                slices.iter().map(|s| s.weight.clone()).zip(bodies.iter().cloned()).collect();
            ok && widest_width(&parts, &dual_extreme_points(&model)?)? == diameter.value
        }
        Payload::ThmCombo {
            params,
            ball,
            limit_cap,
            thresholds,
            regions,
            nonempty_witnesses,
            diameter,
            ..
        } => {
            let m = ball.model.dim;
            let lim = Functional::limit(m);
            let mut ok = true;
            for ((f, thr), (region, w)) in params
                .functionals
                .iter()
                .zip(thresholds)
                .zip(regions.iter().zip(nonempty_witnesses))
            {
                ok &= contains(ball, w)? && pair(f, w)? > *thr && pair(&lim, w)? < *limit_cap;
                for v in &region.vertices {
                    ok &= contains(ball, v)? && pair(f, v)? >= *thr && pair(&lim, v)? <= *limit_cap;
                }
            }
            ok &= diameter.upper.len() == regions.len() && diameter.lower.len() == regions.len();
            for ((region, hi), lo) in regions.iter().zip(&diameter.upper).zip(&diameter.lower) {
                ok &= region.vertices.contains(hi) && region.vertices.contains(lo);
            }
            let (u, w) = &diameter.witness;
            ok &= gauge(ball, &u.sub(w)?)? == diameter.value;
            let parts: Vec<(F, VPolytope<F>)> =
                params.weights.iter().cloned().zip(regions.iter().cloned()).collect();
            ok && widest_width(&parts, &dual_extreme_points(&ball.model)?)? == diameter.value
                && diameter.value <= params.gamma
        }
        Payload::ThmOpen {
            ball,
            family_a,
            family_b,
            functionals,
            center,
            radius,
            base,
            x,
            y,
            ..
        } => {
            let plus = union_hull(family_a, family_b)?;
            let minus = union_hull(&family_a.neg(), family_b)?;
            let mut ok = in_weak_nbhd(functionals, center, radius, base)?
                && in_weak_nbhd(functionals, center, radius, x)?
                && in_weak_nbhd(functionals, center, radius, y)?
                && contains(ball, x)?
                && contains(ball, y)?
                && gauge(ball, &x.sub(y)?)? == F::from_int(2);
            for p in [base, x, y] {
                ok &= contains(&plus, p)? || contains(&minus, p)?;
            }
            ok
        }
        Payload::Lemma24 {
            a,
            b,
            left,
            samples,
            decompositions,
            ..
        } => {
            let plus = union_hull(a, b)?;
            let minus = union_hull(&a.neg(), b)?;
            let mut ok = true;
            for v in left.vertices.iter().chain(samples) {
                ok &= contains(&plus, v)? || contains(&minus, v)?;
            }
            for v in plus.vertices.iter().chain(&minus.vertices) {
                ok &= contains(left, v)?;
            }
            for d in decompositions {
                ok &= check_decomposition(b, d)?;
            }
            ok
        }
        Payload::L1Sum {
            factor1,
            factor2,
            functional,
            alpha,
            mu,
            slice,
            ..
        } => {
            let d1 = factor1.model.dim;
            let mut ok = true;
            for v in &slice.vertices {
                let (x, y) = split(v, d1);
                ok &= pair(functional, &x)? > F::one() - alpha.clone()
                    && gauge(factor1, &x)? <= F::one()
                    && gauge(factor2, &y)? <= *mu;
            }
            ok
        }
    };
    Ok(Verdict::from_bool(ok))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{build_b_eps, build_l1_sum_ball, build_product_ball_p1, build_stages};
    use crate::polytope::{minkowski_combo, ComboMode};
    use crate::scalar::big;
    use crate::Scalar;

    fn s(n: i64, d: i64) -> Scalar {
        big(n, d)
    }

    fn vi(c: &[i64]) -> SeqVector<Scalar> {
        SeqVector::new(c.iter().map(|&n| s(n, 1)).collect(), None)
    }

    fn coord(dim: usize, k: usize) -> Functional<Scalar> {
        Functional::coordinate(dim, k).unwrap()
    }

    #[test]
    fn square_slice() {
        let sq = VPolytope::<Scalar>::cube(2, false).unwrap();
        let sl = slice_of(&sq, &coord(2, 1), &s(1, 2)).unwrap();
        assert_eq!(
            sl.vertices,
            vec![
                SeqVector::new(vec![s(1, 2), s(-1, 1)], None),
                SeqVector::new(vec![s(1, 2), s(1, 1)], None),
                vi(&[1, -1]),
                vi(&[1, 1]),
            ]
        );
        assert!(slice_of(&sq, &coord(2, 1), &s(0, 1)).is_err());
    }

    #[test]
    fn diamond_slice_near_vertex() {
        let seg = VPolytope::<Scalar>::cube(1, false).unwrap();
        let diamond = build_l1_sum_ball(&seg, &seg).unwrap();
        let f = Functional::new(vec![s(1, 1), s(0, 1)], s(0, 1));
        let sl = slice_of(&diamond, &f, &s(1, 10)).unwrap();
        // Oracle: {x1 >= 9/10, |x1| + |x2| <= 1} is the triangle at (1, 0).
        assert_eq!(
            sl.vertices,
            vec![
                SeqVector::new(vec![s(9, 10), s(-1, 10)], None),
                SeqVector::new(vec![s(9, 10), s(1, 10)], None),
                vi(&[1, 0]),
            ]
        );
    }

    fn spec(f: Functional<Scalar>, alpha: Scalar, weight: Scalar) -> SliceSpec<Scalar> {
        SliceSpec {
            functional: f,
            alpha,
            weight,
        }
    }

    #[test]
    fn prop21_single_slice_p1() {
        let specs = vec![spec(coord(4, 1), s(1, 2), s(1, 1))];
        let cert = prop21_certificate(1, 2, &specs, &s(1, 100)).unwrap();
        assert!(cert.verdict.passed());
        assert_eq!(cert.claimed_bound, Some(NormValue::exact(s(99, 100))));
        assert_eq!(recheck(&cert).unwrap(), Verdict::Pass);
        let exact = prop21_exact_p1(&specs, 2).unwrap();
        assert_eq!(exact.value, s(2, 1));
        assert!(cert.measured.unwrap().cmp_scalar(&exact.value).unwrap() != Ordering::Greater);
    }

    #[test]
    fn prop21_two_slices_p2() {
        let specs = vec![
            spec(coord(4, 1), s(1, 2), s(1, 2)),
            spec(coord(4, 3), s(1, 2), s(1, 2)),
        ];
        let cert = prop21_certificate(2, 2, &specs, &s(1, 100)).unwrap();
        assert!(cert.verdict.passed());
        // Oracle: the difference is (e_3, e_3) up to signs, of norm sqrt(1 + 1).
        assert_eq!(
            cert.measured,
            Some(NormValue::Root(PthRoot::new(s(2, 1), 2).unwrap()))
        );
        assert_eq!(recheck(&cert).unwrap(), Verdict::Pass);
    }

    #[test]
    fn prop21_pythagorean_functional() {
        let f = Functional::new(vec![s(3, 5), s(0, 1), s(4, 5), s(0, 1)], s(0, 1));
        let cert = prop21_certificate(2, 2, &[spec(f, s(1, 4), s(1, 1))], &s(1, 100)).unwrap();
        assert!(cert.verdict.passed());
        let f = Functional::new(vec![s(1, 1), s(0, 1), s(1, 1), s(0, 1)], s(0, 1));
        assert!(matches!(
            prop21_certificate(2, 2, &[spec(f, s(1, 4), s(1, 1))], &s(1, 100)),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn prop21_needs_spare_coordinate() {
        let f = Functional::new(vec![s(1, 2), s(1, 2), s(0, 1), s(0, 1)], s(0, 1));
        assert!(matches!(
            prop21_certificate(1, 2, &[spec(f, s(1, 4), s(1, 1))], &s(1, 100)),
            Err(Error::TruncationTooSmall(_))
        ));
    }

    #[test]
    fn prop21_exact_examples() {
        let ball = build_product_ball_p1::<Scalar>(2).unwrap();
        let two_opposing = vec![
            spec(coord(4, 1), s(1, 4), s(1, 2)),
            spec(coord(4, 1).scale(&s(-1, 1)), s(1, 4), s(1, 2)),
        ];
        let d = prop21_exact_p1(&two_opposing, 2).unwrap();
        assert!(d.value >= s(1, 1));
        // Oracle: enumerate the sum and scan vertex pairs.
        let parts: Vec<_> = two_opposing
            .iter()
            .map(|sp| (sp.weight.clone(), slice_of(&ball, &sp.functional, &sp.alpha).unwrap()))
            .collect();
        let sum = minkowski_combo(&parts, ComboMode::Convex, &Caps::default()).unwrap();
        let brute = polytope::diameter(&sum, &ball.model).unwrap();
        assert_eq!(brute.value.as_exact(), Some(d.value.clone()));
        let full = vec![spec(coord(4, 1), s(2, 1), s(1, 1))];
        assert_eq!(prop21_exact_p1(&full, 2).unwrap().value, s(2, 1));
    }

    #[test]
    fn k0_open_examples() {
        let ledger = build_stages::<Scalar>(3, 3, 4, &Caps::default()).unwrap();
        let cert = k0_open_witness(&ledger, 1, &[coord(1, 1)], &s(1, 4)).unwrap();
        assert!(cert.verdict.passed());
        let Payload::K0Open { base, bump, .. } = &cert.payload else { panic!() };
        assert_eq!(base, &vi(&[1, 0, 0, 0, 0]));
        assert_eq!(bump, &vi(&[1, 0, 1, 0, 0]));
        assert_eq!(recheck(&cert).unwrap(), Verdict::Pass);
        let whole = k0_open_witness(&ledger, 2, &[], &s(1, 1)).unwrap();
        assert!(whole.verdict.passed());
        let two = k0_open_witness(&ledger, 3, &[coord(2, 1), coord(2, 2)], &s(1, 8)).unwrap();
        assert!(two.verdict.passed());
        assert!(matches!(
            k0_open_witness(&ledger, 1, &[coord(5, 5)], &s(1, 4)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn k0_combo_stage_two() {
        let ledger = build_stages::<Scalar>(3, 3, 4, &Caps::default()).unwrap();
        let cert = k0_small_combo_search(&ledger, 2, &s(1, 8)).unwrap();
        let measured = cert.measured.clone().unwrap().as_exact().unwrap();
        assert!(measured <= s(1, 2));
        assert_eq!(recheck(&cert).unwrap(), Verdict::Pass);
        // Tiny slices collapse onto the exposed vertices.
        let tiny = k0_small_combo_search(&ledger, 2, &s(1, 1000)).unwrap();
        assert!(tiny.measured.unwrap().as_exact().unwrap() < measured);
    }

    #[test]
    fn lemma24_examples() {
        let a = VPolytope::from_points(SpaceModel::<Scalar>::c0(1), vec![vi(&[1])]).unwrap();
        let b = VPolytope::from_points(SpaceModel::c0(1), vec![vi(&[0])]).unwrap();
        let cert = lemma24_check(&a, &b).unwrap();
        assert!(cert.verdict.passed());
        assert_eq!(recheck(&cert).unwrap(), Verdict::Pass);

        let a = VPolytope::from_points(SpaceModel::c0(2), vec![vi(&[1, 0]), vi(&[1, 1])]).unwrap();
        let b = VPolytope::<Scalar>::cube(2, false).unwrap();
        let cert = lemma24_check(&a, &b).unwrap();
        assert!(cert.verdict.passed());
        assert_eq!(recheck(&cert).unwrap(), Verdict::Pass);

        let tiny = VPolytope::from_points(SpaceModel::c0(2), vec![vi(&[0, 0])]).unwrap();
        assert!(matches!(lemma24_check(&a, &tiny), Err(Error::Precondition(_))));
    }

    #[test]
    fn mirrored_decomposition() {
        let b = VPolytope::<Scalar>::cube(2, false).unwrap();
        let mut d = Decomposition {
            point: SeqVector::new(vec![s(-1, 2), s(-3, 4)], None),
            lambda1: s(1, 4),
            lambda2: s(3, 4),
            lambda3: s(0, 1),
            a1: vi(&[1, 0]),
            a2: vi(&[1, 1]),
            b: vi(&[0, 0]),
            midpoint: SeqVector::new(vec![s(0, 1), s(-1, 2)], None),
            mirrored: true,
        };
        assert!(check_decomposition(&b, &d).unwrap());
        d.midpoint = d.midpoint.neg();
        assert!(!check_decomposition(&b, &d).unwrap());
    }

    #[test]
    fn l1sum_examples() {
        let seg = VPolytope::<Scalar>::cube(1, false).unwrap();
        let cert = l1sum_inclusion_check(&seg, &seg, &coord(1, 1), &s(1, 2), &s(1, 4)).unwrap();
        assert!(cert.verdict.passed());
        assert_eq!(recheck(&cert).unwrap(), Verdict::Pass);
        assert!(matches!(
            l1sum_inclusion_check(&seg, &seg, &coord(1, 1), &s(1, 2), &s(1, 2)),
            Err(Error::Precondition(_))
        ));
        let diamond = build_l1_sum_ball(&seg, &seg)
            .unwrap()
            .with_model(SpaceModel::c0(2))
            .unwrap();
        let square = VPolytope::<Scalar>::cube(2, false).unwrap();
        let cert = l1sum_inclusion_check(&diamond, &square, &coord(2, 1), &s(1, 3), &s(1, 6)).unwrap();
        assert!(cert.verdict.passed());
        let Payload::L1Sum { slice, .. } = &cert.payload else { panic!() };
        assert!(!slice.vertices.is_empty());
    }

    #[test]
    fn thm_open_examples() {
        let caps = Caps::default();
        let ledger = build_stages::<Scalar>(3, 3, 4, &caps).unwrap();
        let eps = s(1, 4);
        let ball = build_b_eps(&ledger, &eps, &caps).unwrap();
        let m = ledger.last().m;
        let a1 = SeqVector::new(vec![s(1, 1), s(-1, 1), s(-1, 1), s(-1, 1), s(-1, 1)], Some(s(-1, 1)));
        let cert =
            thm_open_witness(&ledger, &ball, &eps, &[coord(1, 1)], &a1, &s(1, 2), &caps).unwrap();
        assert!(cert.verdict.passed(), "{cert:?}");
        let Payload::ThmOpen { x, y, lambda, .. } = &cert.payload else { panic!() };
        assert_eq!(lambda, &s(1, 1));
        assert_eq!(x.sub(y).unwrap(), SeqVector::unit(m, true, 3).unwrap().scale(&s(2, 1)));
        assert_eq!(recheck(&cert).unwrap(), Verdict::Pass);

        let origin = SpaceModel::<Scalar>::c(m).zero();
        let whole = thm_open_witness(&ledger, &ball, &eps, &[], &origin, &s(1, 1), &caps).unwrap();
        assert!(whole.verdict.passed());

        // λ = 1/2 with x0 = y0 = 0: the center is (2g_1 - 1)/2.
        let mixed = a1.scale(&s(1, 2));
        let far = Functional::new(vec![s(0, 1), s(1, 1)], s(0, 1));
        let cert = thm_open_witness(&ledger, &ball, &eps, &[far], &mixed, &s(1, 100), &caps).unwrap();
        assert!(cert.verdict.passed());
        let Payload::ThmOpen { x, y, bump_coordinate, .. } = &cert.payload else { panic!() };
        let e = SeqVector::unit(m, true, *bump_coordinate).unwrap();
        assert_eq!(x.sub(y).unwrap(), e.scale(&s(2, 1)));
    }
}
