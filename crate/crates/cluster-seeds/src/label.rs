//! Symbolic identities of cluster variables.
//!
//! A label is either an atomic function (a generalized minor or an edge
//! invariant, tagged with its weight tuple) or the result of an exchange
//! relation `(M+ + M-) / A_k`.  Labels are reference counted so that the
//! exchange trees produced by long mutation sequences share their subtrees.

use crate::root_data::WeightTuple;
use std::collections::HashMap;
use std::sync::Arc;

/// A shared handle on a label node.
#[derive(Clone, Debug)]
pub struct Label(Arc<LabelNode>);

/// A monomial: labels with positive exponents.
pub type Monomial = Vec<(Label, i64)>;

#[derive(Debug, PartialEq)]
pub enum LabelNode {
    Atomic {
        tag: String,
        weights: Option<WeightTuple>,
    },
    Exchange {
        /// Handle of the mutated vertex.
        vertex: usize,
        plus: Monomial,
        minus: Monomial,
        denom: Label,
    },
}

impl PartialEq for Label {
    fn eq(&self, other: &Label) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Label {}

impl Label {
    pub fn atomic(tag: impl Into<String>, weights: Option<WeightTuple>) -> Label {
        Label(Arc::new(LabelNode::Atomic {
            tag: tag.into(),
            weights,
        }))
    }

    /// The label produced by the exchange relation at `vertex`.  If `denom` is
    /// itself the exchange at the same vertex with the same pair of monomials,
    /// the two mutations cancel and the original label is returned.
    pub fn exchange(vertex: usize, plus: Monomial, minus: Monomial, denom: &Label) -> Label {
        if let LabelNode::Exchange {
            vertex: v,
            plus: p,
            minus: m,
            denom: inner,
        } = denom.node()
        {
            if *v == vertex && ((*p == plus && *m == minus) || (*p == minus && *m == plus)) {
                return inner.clone();
            }
        }
        Label(Arc::new(LabelNode::Exchange {
            vertex,
            plus,
            minus,
            denom: denom.clone(),
        }))
    }

    /// An exchange node built as given, without cancellation (used when
    /// reading stored label pools).
    pub fn exchange_raw(vertex: usize, plus: Monomial, minus: Monomial, denom: Label) -> Label {
        Label(Arc::new(LabelNode::Exchange {
            vertex,
            plus,
            minus,
            denom,
        }))
    }

    pub fn node(&self) -> &LabelNode {
        &self.0
    }

    /// Identity of the shared node, usable as a cache key.
    pub fn key(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self.node(), LabelNode::Atomic { .. })
    }

    /// Rebuilds the label tree with every atomic leaf replaced by `f(leaf)`,
    /// preserving sharing.
    pub fn map_atomic(&self, f: &mut dyn FnMut(&Label) -> Label) -> Label {
        let mut memo = HashMap::new();
        self.map_rec(f, &mut memo)
    }

    fn map_rec(&self, f: &mut dyn FnMut(&Label) -> Label, memo: &mut HashMap<usize, Label>) -> Label {
        if let Some(l) = memo.get(&self.key()) {
            return l.clone();
        }
        let out = match self.node() {
            LabelNode::Atomic { .. } => f(self),
            LabelNode::Exchange {
                vertex,
                plus,
                minus,
                denom,
            } => {
                let mut mono = |m: &Monomial, memo: &mut HashMap<usize, Label>| -> Monomial {
                    m.iter().map(|(l, e)| (l.map_rec(f, memo), *e)).collect()
                };
                let plus = mono(plus, memo);
                let minus = mono(minus, memo);
                let denom = denom.map_rec(f, memo);
                Label(Arc::new(LabelNode::Exchange {
                    vertex: *vertex,
                    plus,
                    minus,
                    denom,
                }))
            }
        };
        memo.insert(self.key(), out.clone());
        out
    }

    /// Number of exchange relations stacked on top of the atomic leaves.
    pub fn depth(&self) -> usize {
        match self.node() {
            LabelNode::Atomic { .. } => 0,
            LabelNode::Exchange { denom, .. } => 1 + denom.depth(),
        }
    }

    /// Short human-readable description.
    pub fn describe(&self) -> String {
        match self.node() {
            LabelNode::Atomic { tag, .. } => tag.clone(),
            LabelNode::Exchange { vertex, denom, .. } => {
                format!("mu{}({})", vertex, denom.describe())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn double_exchange_collapses() {
        let a = Label::atomic("a", None);
        let b = Label::atomic("b", None);
        let c = Label::atomic("c", None);
        let once = Label::exchange(0, vec![(b.clone(), 1)], vec![(c.clone(), 1)], &a);
        assert!(!once.is_atomic());
        let twice = Label::exchange(0, vec![(c.clone(), 1)], vec![(b.clone(), 1)], &once);
        assert_eq!(twice.key(), a.key());
        let other = Label::exchange(1, vec![(c, 1)], vec![(b, 1)], &once);
        assert_eq!(other.depth(), 2);
    }

    #[test]
    fn mapping_preserves_sharing() {
        let a = Label::atomic("a", None);
        let b = Label::atomic("b", None);
        let e = Label::exchange(0, vec![(b.clone(), 1)], vec![(b, 2)], &a);
        let mapped = e.map_atomic(&mut |l| Label::atomic(format!("{}'", l.describe()), None));
        match mapped.node() {
            LabelNode::Exchange { plus, minus, .. } => {
                assert_eq!(plus[0].0.key(), minus[0].0.key());
                assert_eq!(plus[0].0.describe(), "b'");
            }
            _ => panic!("expected exchange"),
        }
    }
}
