//! Truncated models of `c0` and `c`, their duals, norms and pairings.
//!
//! An element of `c` is stored as `d` explicit coordinates plus the limit
//! `L`, read as "every coordinate beyond `d` equals `L`". The truncated unit
//! ball of `c` is therefore the box `[-1,1]^(d+1)`, and the unit ball of `c0`
//! is `[-1,1]^d x {0}`. `c0` models carry no limit slot at all.

use std::cmp::Ordering;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, structural, Error, Result};
use crate::exact_lp::{dot, PthRoot};
use crate::polytope::{self, VPolytope};
use crate::scalar::Field;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", bound = "")]
pub enum NormKind<F: Field> {
    Sup,
    /// `(‖x‖∞^p + ‖y‖∞^p)^(1/p)` with factors `x = coords[..split]`, `y = coords[split..]`.
    ProductP { p: u32, split: usize },
    /// `‖x‖∞ + ‖y‖∞`.
    L1Sum { split: usize },
    /// Minkowski functional of a symmetric polytope with 0 in its interior.
    Gauge { ball: Arc<VPolytope<F>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SpaceModel<F: Field> {
    pub dim: usize,
    pub has_limit: bool,
    pub norm: NormKind<F>,
}

impl<F: Field> SpaceModel<F> {
    pub fn new(dim: usize, has_limit: bool, norm: NormKind<F>) -> Result<Self> {
        if dim == 0 {
            return Err(structural("model dimension must be positive"));
        }
        match &norm {
            NormKind::ProductP { p, split } => {
                if *p == 0 {
                    return Err(Error::Domain("product exponent must be positive".into()));
                }
                check_split(*split, dim)?;
            }
            NormKind::L1Sum { split } => check_split(*split, dim)?,
            NormKind::Gauge { ball } => {
                if ball.model.dim != dim || ball.model.has_limit != has_limit {
                    return Err(structural("gauge ball lives in a different space"));
                }
            }
            NormKind::Sup => {}
        }
        Ok(Self {
            dim,
            has_limit,
            norm,
        })
    }

    /// Truncated `c0` with the sup norm.
    pub fn c0(dim: usize) -> Self {
        Self {
            dim: dim.max(1),
            has_limit: false,
            norm: NormKind::Sup,
        }
    }

    /// Truncated `c` with the sup norm.
    pub fn c(dim: usize) -> Self {
        Self {
            dim: dim.max(1),
            has_limit: true,
            norm: NormKind::Sup,
        }
    }

    /// Number of flat coordinates (explicit coordinates plus the limit slot).
    pub fn flat_len(&self) -> usize {
        self.dim + usize::from(self.has_limit)
    }

    pub fn with_norm(&self, norm: NormKind<F>) -> Result<Self> {
        Self::new(self.dim, self.has_limit, norm)
    }

    pub fn same_space(&self, other: &Self) -> bool {
        self.dim == other.dim && self.has_limit == other.has_limit
    }

    pub fn check_vector(&self, x: &SeqVector<F>) -> Result<()> {
        if x.coords.len() != self.dim || x.limit.is_some() != self.has_limit {
            return Err(structural(format!(
                "vector of dim {} (limit: {}) does not belong to model of dim {} (limit: {})",
                x.coords.len(),
                x.limit.is_some(),
                self.dim,
                self.has_limit
            )));
        }
        Ok(())
    }

    pub fn check_functional(&self, f: &Functional<F>) -> Result<()> {
        if f.coeffs.len() != self.dim {
            return Err(structural(format!(
                "functional with {} coefficients on a model of dim {}",
                f.coeffs.len(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn zero(&self) -> SeqVector<F> {
        SeqVector::zeros(self.dim, self.has_limit)
    }

    pub fn unit(&self, k: usize) -> Result<SeqVector<F>> {
        SeqVector::unit(self.dim, self.has_limit, k)
    }
}

fn check_split(split: usize, dim: usize) -> Result<()> {
    if split == 0 || split >= dim {
        return Err(structural(format!(
            "factor split {split} must satisfy 1 <= split < dim = {dim}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct SeqVector<F: Field> {
    #[serde(with = "crate::scalar::serde_exact::vec")]
    pub coords: Vec<F>,
    #[serde(with = "crate::scalar::serde_exact::option")]
    pub limit: Option<F>,
}

impl<F: Field> SeqVector<F> {
    pub fn new(coords: Vec<F>, limit: Option<F>) -> Self {
        Self { coords, limit }
    }

    pub fn zeros(dim: usize, has_limit: bool) -> Self {
        Self {
            coords: vec![F::zero(); dim],
            limit: has_limit.then(F::zero),
        }
    }

    /// The basis vector `e_k` (1-based); its limit is 0.
    pub fn unit(dim: usize, has_limit: bool, k: usize) -> Result<Self> {
        if k == 0 || k > dim {
            return Err(structural(format!("basis index {k} outside 1..={dim}")));
        }
        let mut v = Self::zeros(dim, has_limit);
        v.coords[k - 1] = F::one();
        Ok(v)
    }

    /// The constant sequence 𝟙 of `c`: every coordinate and the limit equal 1.
    pub fn ones(dim: usize) -> Self {
        Self {
            coords: vec![F::one(); dim],
            limit: Some(F::one()),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate `k` (1-based).
    pub fn coord(&self, k: usize) -> &F {
        &self.coords[k - 1]
    }

    pub fn limit_or_zero(&self) -> F {
        self.limit.clone().unwrap_or_else(F::zero)
    }

    pub fn flat(&self) -> Vec<F> {
        let mut v = self.coords.clone();
        if let Some(l) = &self.limit {
            v.push(l.clone());
        }
        v
    }

    pub fn from_flat(mut flat: Vec<F>, dim: usize, has_limit: bool) -> Self {
        let limit = if has_limit { flat.pop() } else { None };
        flat.truncate(dim);
        Self {
            coords: flat,
            limit,
        }
    }

    fn zip_with(&self, other: &Self, op: impl Fn(&F, &F) -> F) -> Result<Self> {
        if self.coords.len() != other.coords.len() || self.limit.is_some() != other.limit.is_some()
        {
            return Err(structural("vector shapes differ"));
        }
        Ok(Self {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| op(a, b))
                .collect(),
            limit: self
                .limit
                .as_ref()
                .zip(other.limit.as_ref())
                .map(|(a, b)| op(a, b)),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + b.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() - b.clone())
    }

    pub fn scale(&self, t: &F) -> Self {
        Self {
            coords: self.coords.iter().map(|a| a.clone() * t.clone()).collect(),
            limit: self.limit.as_ref().map(|a| a.clone() * t.clone()),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-F::one())
    }

    /// `self + t * other`.
    pub fn axpy(&self, t: &F, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a.clone() + t.clone() * b.clone())
    }

    /// Largest absolute entry, including the limit slot.
    pub fn sup_norm(&self) -> F {
        self.coords
            .iter()
            .chain(self.limit.iter())
            .map(|a| a.abs())
            .max()
            .unwrap_or_else(F::zero)
    }

    /// Extends to `dim` explicit coordinates. New coordinates take the value
    /// `L` in `c` (so the element is unchanged) and 0 in `c0`.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(structural("cannot embed into a smaller dimension"));
        }
        let fill = self.limit_or_zero();
        let mut coords = self.coords.clone();
        coords.resize(dim, fill);
        Ok(Self {
            coords,
            limit: self.limit.clone(),
        })
    }

    /// Highest 1-based index carrying a nonzero coordinate (0 if none).
    pub fn support_top(&self) -> usize {
        self.coords
            .iter()
            .rposition(|a| !a.is_zero())
            .map_or(0, |i| i + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct Functional<F: Field> {
    #[serde(with = "crate::scalar::serde_exact::vec")]
    pub coeffs: Vec<F>,
    #[serde(with = "crate::scalar::serde_exact")]
    pub limit_coeff: F,
}

impl<F: Field> Functional<F> {
    pub fn new(coeffs: Vec<F>, limit_coeff: F) -> Self {
        Self {
            coeffs,
            limit_coeff,
        }
    }

    /// Biorthogonal functional `e_k*` (1-based).
    pub fn coordinate(dim: usize, k: usize) -> Result<Self> {
        if k == 0 || k > dim {
            return Err(structural(format!("functional index {k} outside 1..={dim}")));
        }
        let mut coeffs = vec![F::zero(); dim];
        coeffs[k - 1] = F::one();
        Ok(Self::new(coeffs, F::zero()))
    }

    /// `lim_k x(k)`.
    pub fn limit(dim: usize) -> Self {
        Self::new(vec![F::zero(); dim], F::one())
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_zero()) && self.limit_coeff.is_zero()
    }

    pub fn scale(&self, t: &F) -> Self {
        Self::new(
            self.coeffs.iter().map(|a| a.clone() * t.clone()).collect(),
            self.limit_coeff.clone() * t.clone(),
        )
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(structural("functional dimensions differ"));
        }
        Ok(Self::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            self.limit_coeff.clone() + other.limit_coeff.clone(),
        ))
    }

    /// Flat coefficient row matching [`SeqVector::flat`] for the given limit flag.
    pub fn flat(&self, has_limit: bool) -> Vec<F> {
        let mut v = self.coeffs.clone();
        if has_limit {
            v.push(self.limit_coeff.clone());
        }
        v
    }

    /// Highest 1-based coordinate index with a nonzero coefficient (0 if none).
    pub fn support_top(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|a| !a.is_zero())
            .map_or(0, |i| i + 1)
    }

    /// Zero-extends to `dim` coefficients.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim() {
            return Err(structural("cannot embed functional into a smaller dimension"));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(dim, F::zero());
        Ok(Self::new(coeffs, self.limit_coeff.clone()))
    }

    /// `Σ|a_k| + |a∞|`, the dual norm in `c`; `|a∞|` is dropped for `c0`.
    pub fn l1_norm(&self, has_limit: bool) -> F {
        let base = self
            .coeffs
            .iter()
            .fold(F::zero(), |acc, a| acc + a.abs());
        if has_limit {
            base + self.limit_coeff.abs()
        } else {
            base
        }
    }
}

/// `f(x) = Σ a_k x(k) + a∞ L`.
pub fn pair<F: Field>(f: &Functional<F>, x: &SeqVector<F>) -> Result<F> {
    if f.dim() != x.dim() {
        return Err(structural(format!(
            "pairing a functional of dim {} with a vector of dim {}",
            f.dim(),
            x.dim()
        )));
    }
    let mut v = dot(&f.coeffs, &x.coords);
    if let Some(l) = &x.limit {
        v = v + f.limit_coeff.clone() * l.clone();
    }
    Ok(v)
}

/// A norm value: exact, or a p-th root known through its p-th power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case", bound = "")]
pub enum NormValue<F: Field> {
    Exact {
        #[serde(with = "crate::scalar::serde_exact")]
        value: F,
    },
    Root(PthRoot<F>),
}

impl<F: Field> NormValue<F> {
    pub fn exact(value: F) -> Self {
        NormValue::Exact { value }
    }

    pub fn as_exact(&self) -> Option<F> {
        match self {
            NormValue::Exact { value } => Some(value.clone()),
            NormValue::Root(r) => r.exact(),
        }
    }

    pub fn cmp_scalar(&self, b: &F) -> Result<Ordering> {
        match self {
            NormValue::Exact { value } => Ok(value.cmp(b)),
            NormValue::Root(r) => r.cmp_scalar(b),
        }
    }

    pub fn cmp_value(&self, other: &Self) -> Result<Ordering> {
        match (self, other) {
            (NormValue::Exact { value: a }, NormValue::Exact { value: b }) => Ok(a.cmp(b)),
            (NormValue::Root(a), NormValue::Root(b)) => a.cmp_root(b),
            (NormValue::Exact { value }, NormValue::Root(r)) => {
                r.cmp_scalar(value).map(Ordering::reverse)
            }
            (NormValue::Root(r), NormValue::Exact { value }) => r.cmp_scalar(value),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            NormValue::Exact { value } => value.approx(),
            NormValue::Root(r) => r.approx(),
        }
    }
}

fn factor_sups<F: Field>(x: &SeqVector<F>, split: usize) -> (F, F) {
    let sup = |s: &[F]| s.iter().map(|a| a.abs()).max().unwrap_or_else(F::zero);
    (sup(&x.coords[..split]), sup(&x.coords[split..]))
}

pub fn vector_norm<F: Field>(model: &SpaceModel<F>, x: &SeqVector<F>) -> Result<NormValue<F>> {
    model.check_vector(x)?;
    match &model.norm {
        NormKind::Sup => Ok(NormValue::exact(x.sup_norm())),
        NormKind::ProductP { p, split } => {
            let (a, b) = factor_sups(x, *split);
            if *p == 1 {
                Ok(NormValue::exact(a + b))
            } else {
                Ok(NormValue::Root(PthRoot::new(a.powu(*p) + b.powu(*p), *p)?))
            }
        }
        NormKind::L1Sum { split } => {
            let (a, b) = factor_sups(x, *split);
            Ok(NormValue::exact(a + b))
        }
        NormKind::Gauge { ball } => polytope::gauge(ball, x).map(NormValue::exact),
    }
}

pub fn dual_norm<F: Field>(model: &SpaceModel<F>, f: &Functional<F>) -> Result<F> {
    model.check_functional(f)?;
    match &model.norm {
        NormKind::Sup => Ok(f.l1_norm(model.has_limit)),
        NormKind::L1Sum { split } => {
            let l1 = |s: &[F]| s.iter().fold(F::zero(), |acc, a| acc + a.abs());
            Ok(std::cmp::max(
                l1(&f.coeffs[..*split]),
                l1(&f.coeffs[*split..]),
            ))
        }
        NormKind::ProductP { p, .. } => Err(Error::Unsupported(format!(
            "dual norm of the p = {p} product model"
        ))),
        NormKind::Gauge { ball } => polytope::support(ball, f),
    }
}

/// The pair `(x + (1 - x(k)) e_k, x - (1 + x(k)) e_k)` for `x` in the unit ball of `c`.
///
/// Both outputs stay in the ball and differ by exactly `2 e_k`.
pub fn bump_sequences<F: Field>(
    x: &SeqVector<F>,
    k: usize,
) -> Result<(SeqVector<F>, SeqVector<F>)> {
    if k == 0 || k > x.dim() {
        return Err(structural(format!(
            "bump index {k} outside 1..={}",
            x.dim()
        )));
    }
    if x.sup_norm() > F::one() {
        return Err(precondition(format!(
            "bump base must lie in the unit ball, has norm {}",
            x.sup_norm()
        )));
    }
    let alpha = x.coord(k).clone();
    let e = SeqVector::unit(x.dim(), x.limit.is_some(), k)?;
    let up = x.axpy(&(F::one() - alpha.clone()), &e)?;
    let down = x.axpy(&(-(F::one() + alpha)), &e)?;
    Ok((up, down))
}
