use serde::{Deserialize, Serialize};

use super::{metric_d, require_point, LambdaSpec, SelfMap};
use crate::error::Result;
use crate::exact::{checked_square, Rational, Scalar};
use crate::Point;

/// The six weights `(α, β, γ, δ, ε, ζ)` at one pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightVector<S> {
    pub alpha: S,
    pub beta: S,
    pub gamma: S,
    pub delta: S,
    pub epsilon: S,
    pub zeta: S,
}

impl<S: Scalar> WeightVector<S> {
    pub fn new(alpha: S, beta: S, gamma: S, delta: S, epsilon: S, zeta: S) -> Self {
        WeightVector {
            alpha,
            beta,
            gamma,
            delta,
            epsilon,
            zeta,
        }
    }

    pub fn from_array([alpha, beta, gamma, delta, epsilon, zeta]: [S; 6]) -> Self {
        WeightVector::new(alpha, beta, gamma, delta, epsilon, zeta)
    }

    pub fn to_array(&self) -> [S; 6] {
        [self.alpha, self.beta, self.gamma, self.delta, self.epsilon, self.zeta]
    }

    /// Role exchange under `x ↔ y`: β and γ trade places, as do ε and ζ.
    pub fn transposed(&self) -> Self {
        WeightVector::new(self.alpha, self.gamma, self.beta, self.delta, self.zeta, self.epsilon)
    }

    pub fn to_rational(&self) -> WeightVector<Rational> {
        WeightVector::from_array(self.to_array().map(Scalar::to_rational))
    }

    /// Largest `|w|` over the six components.
    pub fn max_abs(&self) -> Result<Rational> {
        self.to_array()
            .into_iter()
            .map(|w| w.to_rational().abs())
            .try_fold(Rational::ZERO, |acc, w| Ok(acc.max(w?)))
    }
}

/// Weights as a function of the pair `(x, y)`.
pub trait WeightFunction: Sync {
    type Scalar: Scalar;

    fn weights(&self, x: Point, y: Point) -> Result<WeightVector<Self::Scalar>>;
}

impl<W: WeightFunction + ?Sized> WeightFunction for &W {
    type Scalar = W::Scalar;

    fn weights(&self, x: Point, y: Point) -> Result<WeightVector<W::Scalar>> {
        (**self).weights(x, y)
    }
}

/// The same six weights at every pair.
#[derive(Debug, Clone, Copy)]
pub struct ConstantWeights<S>(pub WeightVector<S>);

impl<S: Scalar> WeightFunction for ConstantWeights<S> {
    type Scalar = S;

    fn weights(&self, _x: Point, _y: Point) -> Result<WeightVector<S>> {
        Ok(self.0)
    }
}

/// The six squared distances in the order the weights multiply them:
/// `d(Tx,Ty)², d(x,Ty)², d(Tx,y)², d(x,y)², d(x,Tx)², d(y,Ty)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquaredDistances(pub [i128; 6]);

impl SquaredDistances {
    pub fn at<M: SelfMap + ?Sized>(map: &M, x: Point, y: Point) -> Result<Self> {
        require_point(x)?;
        require_point(y)?;
        let (tx, ty) = (map.apply(x)?, map.apply(y)?);
        Ok(SquaredDistances([
            checked_square(metric_d(tx, ty))?,
            checked_square(metric_d(x, ty))?,
            checked_square(metric_d(tx, y))?,
            checked_square(metric_d(x, y))?,
            checked_square(metric_d(x, tx))?,
            checked_square(metric_d(y, ty))?,
        ]))
    }

    /// Distances of the pair `(y, x)`.
    pub fn transposed(&self) -> Self {
        let [a, b, g, d, e, z] = self.0;
        SquaredDistances([a, g, b, d, z, e])
    }

    pub fn weighted_sum<S: Scalar>(&self, w: &WeightVector<S>) -> Result<S> {
        w.to_array()
            .into_iter()
            .zip(self.0)
            .try_fold(S::zero(), |acc, (wi, di)| acc.add(wi.mul(S::from_i128(di))?))
    }
}

/// Left-hand side of the defining inequality at `(x, y)`.
pub fn lhs<W, M>(w: &W, map: &M, x: Point, y: Point) -> Result<W::Scalar>
where
    W: WeightFunction + ?Sized,
    M: SelfMap + ?Sized,
{
    let dist = SquaredDistances::at(map, x, y)?;
    dist.weighted_sum(&w.weights(x, y)?)
}

/// Left-hand side with an explicit weight vector.
pub fn lhs_with<S: Scalar, M: SelfMap + ?Sized>(weights: &WeightVector<S>, map: &M, x: Point, y: Point) -> Result<S> {
    SquaredDistances::at(map, x, y)?.weighted_sum(weights)
}

/// `(1 − λ)·W(x,y) + λ·W(y,x)ᵀ` with `λ = λ(x,y)`, where `ᵀ` swaps β↔γ and ε↔ζ.
pub fn symmetrize<W>(w: &W, lambda: &LambdaSpec, x: Point, y: Point) -> Result<WeightVector<Rational>>
where
    W: WeightFunction + ?Sized,
{
    let l = lambda.at(x, y)?;
    let own = w.weights(x, y)?.to_rational();
    let swapped = w.weights(y, x)?.transposed().to_rational();
    let keep = Rational::ONE.checked_sub(&l)?;
    let mut out = [Rational::ZERO; 6];
    for (slot, (a, b)) in out.iter_mut().zip(own.to_array().into_iter().zip(swapped.to_array())) {
        *slot = keep.checked_mul(&a)?.checked_add(&l.checked_mul(&b)?)?;
    }
    Ok(WeightVector::from_array(out))
}

/// A weight function blended with its transpose through a λ-mapping.
#[derive(Debug, Clone)]
pub struct Symmetrized<W> {
    pub inner: W,
    pub lambda: LambdaSpec,
}

impl<W: WeightFunction> WeightFunction for Symmetrized<W> {
    type Scalar = Rational;

    fn weights(&self, x: Point, y: Point) -> Result<WeightVector<Rational>> {
        symmetrize(&self.inner, &self.lambda, x, y)
    }
}
