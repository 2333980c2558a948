//! Formal X-coordinates and their mutation.
//!
//! An X-coordinate is kept as an expression tree over the initial variables
//! `X_i`; mutation only records exponents, evaluation happens on demand with
//! exact rationals.  Untouched coordinates share their subtree with the
//! previous seed.

use crate::error::{Error, Result};
use crate::root_data::Q;
use crate::seed::Seed;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::sync::Arc;

/// A formal expression in the initial X-coordinates.
#[derive(Debug, PartialEq)]
pub enum XExpr {
    /// The initial coordinate of the vertex with this handle.
    Var(usize),
    /// A product of powers.
    Product(Vec<(Arc<XExpr>, Q)>),
    /// `1 + X`.
    OnePlus(Arc<XExpr>),
}

impl XExpr {
    /// Renders the expression with `X<handle>` for the initial variables.
    pub fn render(&self) -> String {
        match self {
            XExpr::Var(id) => format!("X{id}"),
            XExpr::OnePlus(x) => format!("(1+{})", x.render()),
            XExpr::Product(fs) => fs
                .iter()
                .map(|(x, e)| {
                    if e.is_one() {
                        x.render()
                    } else {
                        format!("{}^{}", x.render(), crate::root_data::fmt_q(e))
                    }
                })
                .collect::<Vec<_>>()
                .join("*"),
        }
    }
}

/// One formal X-coordinate per vertex of a seed, indexed like the seed.
#[derive(Clone, Debug)]
pub struct XCoords {
    exprs: Vec<Arc<XExpr>>,
}

impl XCoords {
    /// The initial coordinates `X_i` of `seed`.
    pub fn initial(seed: &Seed) -> XCoords {
        XCoords {
            exprs: seed.vertices().iter().map(|v| Arc::new(XExpr::Var(v.id))).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.exprs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exprs.is_empty()
    }

    pub fn get(&self, i: usize) -> &Arc<XExpr> {
        &self.exprs[i]
    }

    /// Whether coordinate `i` is literally the same shared expression in both.
    pub fn shares(&self, other: &XCoords, i: usize) -> bool {
        Arc::ptr_eq(&self.exprs[i], &other.exprs[i])
    }

    /// X-mutation at `k` with respect to the exchange matrix of `seed` (the
    /// seed before mutation): `X_k -> X_k^-1` and
    /// `X_i -> X_i X_k^{[b_ik]_+} (1 + X_k)^{-b_ik}`.
    pub fn mutate_x(&self, seed: &Seed, k: usize) -> Result<XCoords> {
        if k >= seed.len() {
            return Err(Error::UnknownVertex(k.to_string()));
        }
        if seed.is_frozen(k) {
            return Err(Error::FrozenVertex(seed.name(k).to_string()));
        }
        let xk = self.exprs[k].clone();
        let one_plus = Arc::new(XExpr::OnePlus(xk.clone()));
        let exprs = (0..seed.len())
            .map(|i| {
                if i == k {
                    return Arc::new(XExpr::Product(vec![(xk.clone(), -Q::one())]));
                }
                let b = seed.b(i, k);
                if b.is_zero() {
                    return self.exprs[i].clone();
                }
                let mut factors = vec![(self.exprs[i].clone(), Q::one())];
                if b.is_positive() {
                    factors.push((xk.clone(), b));
                }
                factors.push((one_plus.clone(), -b));
                Arc::new(XExpr::Product(factors))
            })
            .collect();
        Ok(XCoords { exprs })
    }

    /// Evaluates coordinate `i` with the initial variables set by `initial`
    /// (keyed by vertex handle).  Returns `None` on a zero base with a
    /// negative exponent or a non-integral exponent.
    pub fn evaluate(&self, i: usize, initial: &HashMap<usize, BigRational>) -> Option<BigRational> {
        let mut memo = HashMap::new();
        eval(&self.exprs[i], initial, &mut memo)
    }
}

fn eval(
    x: &Arc<XExpr>,
    initial: &HashMap<usize, BigRational>,
    memo: &mut HashMap<usize, Option<BigRational>>,
) -> Option<BigRational> {
    let key = Arc::as_ptr(x) as usize;
    if let Some(v) = memo.get(&key) {
        return v.clone();
    }
    let v = match &**x {
        XExpr::Var(id) => initial.get(id).cloned(),
        XExpr::OnePlus(y) => eval(y, initial, memo).map(|v| v + BigRational::one()),
        XExpr::Product(fs) => {
            let mut acc = BigRational::one();
            for (y, e) in fs {
                if !e.is_integer() {
                    return None;
                }
                let base = eval(y, initial, memo)?;
                acc *= pow(&base, *e.numer())?;
            }
            Some(acc)
        }
    };
    memo.insert(key, v.clone());
    v
}

/// `base^e` for an integer exponent; `None` for `0` to a negative power.
pub fn pow(base: &BigRational, e: i64) -> Option<BigRational> {
    if e < 0 && base.is_zero() {
        return None;
    }
    let p = num_traits::pow::pow(base.clone(), e.unsigned_abs() as usize);
    Some(if e < 0 { p.recip() } else { p })
}

/// Converts a small rational into an exact big rational.
pub fn big(q: &Q) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::{Vertex, VertexRole, VertexTag};

    fn rank2(b12: i64) -> Seed {
        let v = |id: usize| Vertex {
            id,
            tag: VertexTag::new(format!("v{id}"), VertexRole::Other),
            frozen: false,
            d: 1,
            weights: None,
            label: None,
        };
        Seed::new(vec![v(0), v(1), v(2)], vec![vec![0, 2 * b12, 0], vec![-2 * b12, 0, 0], vec![0, 0, 0]], vec![])
            .unwrap()
    }

    fn values(xs: &[i64]) -> HashMap<usize, BigRational> {
        xs.iter().enumerate().map(|(i, &x)| (i, BigRational::from_integer(x.into()))).collect()
    }

    #[test]
    fn mutated_vertex_is_inverted() {
        let s = rank2(1);
        let x = XCoords::initial(&s).mutate_x(&s, 0).unwrap();
        let v = values(&[5, 7, 11]);
        assert_eq!(x.evaluate(0, &v).unwrap(), BigRational::new(1.into(), 5.into()));
    }

    #[test]
    fn unconnected_vertex_is_shared_and_unchanged() {
        let s = rank2(1);
        let x0 = XCoords::initial(&s);
        let x = x0.mutate_x(&s, 0).unwrap();
        assert!(x.shares(&x0, 2));
        assert_eq!(x.evaluate(2, &values(&[5, 7, 11])).unwrap(), BigRational::from_integer(11.into()));
    }

    #[test]
    fn negative_entry_multiplies_by_one_plus() {
        // b_10 = -1: X_1 -> X_1 (1 + X_0).
        let s = rank2(1);
        assert_eq!(s.b(1, 0), Q::from_integer(-1));
        let x = XCoords::initial(&s).mutate_x(&s, 0).unwrap();
        assert_eq!(x.evaluate(1, &values(&[5, 7, 11])).unwrap(), BigRational::from_integer((7 * 6).into()));
        assert_eq!(x.get(1).render(), "X1*(1+X0)");
    }

    #[test]
    fn positive_entry_follows_the_formula() {
        // b_01 = 1: mutating at 1 sends X_0 to X_0 X_1 (1 + X_1)^-1.
        let s = rank2(1);
        let x = XCoords::initial(&s).mutate_x(&s, 1).unwrap();
        let got = x.evaluate(0, &values(&[5, 7, 11])).unwrap();
        assert_eq!(got, BigRational::new(35.into(), 8.into()));
    }

    #[test]
    fn x_mutation_is_involutive_numerically() {
        let s = rank2(2);
        let x = XCoords::initial(&s).mutate_x(&s, 0).unwrap();
        let s1 = s.mutate(0).unwrap();
        let y = x.mutate_x(&s1, 0).unwrap();
        let v = values(&[3, 4, 9]);
        for i in 0..3 {
            assert_eq!(y.evaluate(i, &v).unwrap(), v[&i]);
        }
    }

    #[test]
    fn frozen_vertex_is_rejected() {
        let mut s = rank2(1);
        s.vertices[2].frozen = true;
        assert!(matches!(XCoords::initial(&s).mutate_x(&s, 2), Err(Error::FrozenVertex(_))));
    }
}
