use std::sync::Arc;

use super::monomial::{MonomialOrder, MAX_VARS};
use crate::error::{Error, Result};
use crate::scalar::Field;

/// Role of a variable in the bigraded ring S = R[T].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    X,
    T,
    Aux,
}

/// Variable names, their roles and grading weights, the coefficient field and
/// the active monomial order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ring {
    names: Vec<String>,
    kinds: Vec<VarKind>,
    weights: Vec<u32>,
    field: Field,
    order: MonomialOrder,
}

fn infer_kind(name: &str) -> VarKind {
    if name == "t" {
        VarKind::Aux
    } else if name.starts_with('T') {
        VarKind::T
    } else {
        VarKind::X
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Ring {
    pub fn new(names: Vec<String>, field: Field) -> Result<Arc<Ring>> {
        if names.len() > MAX_VARS {
            return Err(Error::Input(format!("at most {MAX_VARS} variables are supported")));
        }
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) {
                return Err(Error::Input(format!("invalid variable name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(Error::Input(format!("duplicate variable `{n}`")));
            }
        }
        let kinds = names.iter().map(|n| infer_kind(n)).collect();
        let weights = vec![1; names.len()];
        Ok(Arc::new(Ring { names, kinds, weights, field, order: MonomialOrder::Grevlex }))
    }

    /// k[x1..xd]
    pub fn polynomial(d: usize, field: Field) -> Arc<Ring> {
        Ring::new((1..=d).map(|i| format!("x{i}")).collect(), field).unwrap()
    }

    /// k[x1..xd, T1..T(d+1)]
    pub fn rees(d: usize, field: Field) -> Arc<Ring> {
        Ring::rees_over(&Ring::polynomial(d, field))
    }

    /// The ring R[T1..T(d+1)] over an x-ring R with d variables.
    pub fn rees_over(base: &Ring) -> Arc<Ring> {
        let d = base.nvars();
        let mut names = base.names.clone();
        names.extend((1..=d + 1).map(|i| format!("T{i}")));
        let mut r = Ring::new(names, base.field).unwrap();
        Arc::make_mut(&mut r).order = base.order;
        r
    }

    pub fn with_order(self: &Arc<Ring>, order: MonomialOrder) -> Arc<Ring> {
        if self.order == order {
            return self.clone();
        }
        let mut r = (**self).clone();
        r.order = order;
        Arc::new(r)
    }

    pub fn with_weights(self: &Arc<Ring>, weights: Vec<u32>) -> Arc<Ring> {
        assert_eq!(weights.len(), self.nvars());
        let mut r = (**self).clone();
        r.weights = weights;
        Arc::new(r)
    }

    pub fn with_field(self: &Arc<Ring>, field: Field) -> Arc<Ring> {
        let mut r = (**self).clone();
        r.field = field;
        Arc::new(r)
    }

    /// Same variables listed in a new order: position `i` of the result holds
    /// variable `perm[i]` of `self`.
    pub fn permuted(self: &Arc<Ring>, perm: &[usize]) -> Arc<Ring> {
        let mut r = (**self).clone();
        r.names = perm.iter().map(|&i| self.names[i].clone()).collect();
        r.kinds = perm.iter().map(|&i| self.kinds[i]).collect();
        r.weights = perm.iter().map(|&i| self.weights[i]).collect();
        Arc::new(r)
    }

    /// Append fresh variables.
    pub fn extended(self: &Arc<Ring>, extra: &[&str]) -> Result<Arc<Ring>> {
        let mut names = self.names.clone();
        names.extend(extra.iter().map(|s| s.to_string()));
        let mut r = Ring::new(names, self.field)?;
        let m = Arc::make_mut(&mut r);
        m.order = self.order;
        m.weights[..self.nvars()].copy_from_slice(&self.weights);
        m.kinds[..self.nvars()].copy_from_slice(&self.kinds);
        Ok(r)
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn kind(&self, i: usize) -> VarKind {
        self.kinds[i]
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    fn mask_of(&self, kind: VarKind) -> u32 {
        let mut m = 0;
        for (i, k) in self.kinds.iter().enumerate() {
            if *k == kind {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn x_mask(&self) -> u32 {
        self.mask_of(VarKind::X)
    }

    pub fn t_mask(&self) -> u32 {
        self.mask_of(VarKind::T)
    }

    pub fn aux_mask(&self) -> u32 {
        self.mask_of(VarKind::Aux)
    }

    pub fn x_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.kinds[i] == VarKind::X).collect()
    }

    pub fn t_vars(&self) -> Vec<usize> {
        (0..self.nvars()).filter(|&i| self.kinds[i] == VarKind::T).collect()
    }

    /// Same names, field and order, ignoring weights.
    pub fn same_variables(&self, other: &Ring) -> bool {
        self.names == other.names && self.field == other.field
    }
}
