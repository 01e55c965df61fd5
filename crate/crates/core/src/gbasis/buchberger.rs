use std::sync::Arc;

use super::reduce::{find_divisor, reduce_full, Reducer};
use crate::error::{Error, Result};
use crate::polycore::{Monomial, Poly, Ring};

/// Grading data for a Buchberger run: variable weights come from the ring,
/// `shifts[c]` is the degree of the basis vector of component `c`.
#[derive(Clone, Debug, Default)]
pub struct Grading {
    pub shifts: Vec<u64>,
}

impl Grading {
    pub fn term_degree(&self, ring: &Ring, m: &Monomial) -> u64 {
        let s = self.shifts.get(m.comp() as usize).copied().unwrap_or(0);
        m.weighted_deg(ring.weights()) + s
    }

    pub fn degree(&self, p: &Poly) -> u64 {
        p.terms().iter().map(|t| self.term_degree(p.ring(), &t.m)).max().unwrap_or(0)
    }

    pub fn is_homogeneous(&self, p: &Poly) -> bool {
        let r = p.ring();
        p.terms().windows(2).all(|w| self.term_degree(r, &w[0].m) == self.term_degree(r, &w[1].m))
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    sugar: u64,
}

/// Result of a Buchberger run.
#[derive(Clone, Debug)]
pub struct BuchbergerOutput {
    /// Reduced, monic basis sorted by ascending leading monomial.
    pub basis: Vec<Poly>,
    /// Indices of the inputs that enlarged the basis when they were reached.
    /// For homogeneous input these form a minimal generating set.
    pub survivors: Vec<usize>,
    pub homogeneous: bool,
}

struct State {
    ring: Arc<Ring>,
    grading: Grading,
    module: bool,
    divs: Vec<Reducer>,
    sugar: Vec<u64>,
    active: Vec<bool>,
    pairs: Vec<Pair>,
    max_sugar: Option<u64>,
}

impl State {
    fn add(&mut self, h: Poly, sugar: u64) {
        let r = Reducer::new(h);
        let lm = r.lm;
        let hi = self.divs.len();
        // Gebauer–Möller: first prune old pairs (criterion B).
        {
            let divs = &self.divs;
            self.pairs.retain(|p| {
                if !lm.divides(&p.lcm) {
                    return true;
                }
                let li = divs[p.i].lm.lcm(&lm);
                let lj = divs[p.j].lm.lcm(&lm);
                li == p.lcm || lj == p.lcm
            });
        }
        let mut cand: Vec<(Pair, bool)> = Vec::new();
        for (i, d) in self.divs.iter().enumerate() {
            if !self.active[i] || d.lm.comp() != lm.comp() {
                continue;
            }
            let lcm = d.lm.lcm(&lm);
            let wd = self.ring.weights();
            let s = (self.sugar[i] + d.lm.quotient_of(&lcm).weighted_deg(wd))
                .max(sugar + lm.quotient_of(&lcm).weighted_deg(wd));
            let coprime = !self.module && d.lm.coprime(&lm);
            cand.push((Pair { i, j: hi, lcm, sugar: s }, coprime));
        }
        // Criterion M: drop pairs whose lcm is a proper multiple of another.
        let mut keep = vec![true; cand.len()];
        for a in 0..cand.len() {
            for b in 0..cand.len() {
                if a != b && cand[b].0.lcm.divides(&cand[a].0.lcm) && cand[b].0.lcm != cand[a].0.lcm {
                    keep[a] = false;
                    break;
                }
            }
        }
        // Criterion F plus the product criterion on groups with equal lcm.
        let mut chosen: Vec<Pair> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for a in 0..cand.len() {
            if !keep[a] || seen.contains(&a) {
                continue;
            }
            let group: Vec<usize> =
                (a..cand.len()).filter(|&b| keep[b] && cand[b].0.lcm == cand[a].0.lcm).collect();
            seen.extend(&group);
            if group.iter().any(|&b| cand[b].1) {
                continue;
            }
            chosen.push(cand[a].0.clone());
        }
        for (i, d) in self.divs.iter().enumerate() {
            if self.active[i] && lm.divides(&d.lm) {
                self.active[i] = false;
            }
        }
        self.divs.push(r);
        self.sugar.push(sugar);
        self.active.push(true);
        self.pairs.extend(chosen);
    }

    fn spoly(&self, p: &Pair) -> Poly {
        let a = &self.divs[p.i];
        let b = &self.divs[p.j];
        let qa = a.lm.quotient_of(&p.lcm);
        let qb = b.lm.quotient_of(&p.lcm);
        &a.poly.mul_monomial(&qa) - &b.poly.mul_monomial(&qb)
    }
}

/// Buchberger's algorithm with the sugar strategy. Inputs are consumed lazily
/// in order of degree, after all pairs of the same sugar.
pub fn buchberger(gens: &[Poly], grading: &Grading) -> Result<BuchbergerOutput> {
    run(gens, grading, None)
}

/// Same, but ignore everything above the given sugar (truncated basis).
pub fn buchberger_truncated(gens: &[Poly], grading: &Grading, max_sugar: u64) -> Result<BuchbergerOutput> {
    run(gens, grading, Some(max_sugar))
}

fn run(gens: &[Poly], grading: &Grading, max_sugar: Option<u64>) -> Result<BuchbergerOutput> {
    let ring = match gens.first() {
        Some(g) => g.ring().clone(),
        None => {
            return Ok(BuchbergerOutput { basis: Vec::new(), survivors: Vec::new(), homogeneous: true })
        }
    };
    for g in gens {
        g.check_ring(gens.first().unwrap())?;
    }
    let homogeneous = gens.iter().all(|g| grading.is_homogeneous(g));
    let module = gens.iter().any(|g| g.max_comp().unwrap_or(0) > 0);
    let mut inputs: Vec<(u64, usize)> = gens
        .iter()
        .enumerate()
        .filter(|(_, g)| !g.is_zero())
        .map(|(i, g)| (grading.degree(g), i))
        .collect();
    inputs.sort();
    let mut st = State {
        ring: ring.clone(),
        grading: grading.clone(),
        module,
        divs: Vec::new(),
        sugar: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        max_sugar,
    };
    let mut survivors = Vec::new();
    let mut next_input = 0;
    let order = ring.order();
    loop {
        let ps = st.pairs.iter().map(|p| p.sugar).min();
        let is = inputs.get(next_input).map(|x| x.0);
        let d = match (ps, is) {
            (None, None) => break,
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (Some(a), Some(b)) => a.min(b),
        };
        if st.max_sugar.is_some_and(|m| d > m) {
            break;
        }
        let mut batch: Vec<Pair> = Vec::new();
        st.pairs.retain(|p| {
            if p.sugar == d {
                batch.push(p.clone());
                false
            } else {
                true
            }
        });
        batch.sort_by(|a, b| order.cmp(&a.lcm, &b.lcm).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
        for p in &batch {
            let s = st.spoly(p);
            let h = reduce_full(&s, &st.divs);
            if !h.is_zero() {
                let sugar = if homogeneous { d } else { d.max(st.grading.degree(&h)) };
                st.add(h, sugar);
            }
        }
        while next_input < inputs.len() && inputs[next_input].0 == d {
            let idx = inputs[next_input].1;
            next_input += 1;
            let h = reduce_full(&gens[idx], &st.divs);
            if !h.is_zero() {
                survivors.push(idx);
                let sugar = st.grading.degree(&gens[idx]);
                st.add(h, sugar);
            }
        }
    }
    let basis = interreduce(st.divs.into_iter().map(|r| r.poly).collect());
    Ok(BuchbergerOutput { basis, survivors, homogeneous })
}

/// Reduced form of a Gröbner basis: drop redundant leading monomials,
/// tail-reduce, make monic and sort ascending.
pub fn interreduce(polys: Vec<Poly>) -> Vec<Poly> {
    let mut items: Vec<Reducer> = polys.into_iter().filter(|p| !p.is_zero()).map(Reducer::new).collect();
    let ring = match items.first() {
        Some(r) => r.poly.ring().clone(),
        None => return Vec::new(),
    };
    let order = ring.order();
    items.sort_by(|a, b| order.cmp(&a.lm, &b.lm));
    let mut kept: Vec<Reducer> = Vec::new();
    for it in items {
        if find_divisor(&kept, &it.lm).is_none() {
            kept.push(it);
        }
    }
    // A polynomial's own leading monomial never divides its tail, so every
    // tail can be reduced against the full list.
    let mut out = Vec::with_capacity(kept.len());
    for r in &kept {
        let g = &r.poly;
        let tail = Poly::from_sorted(&ring, g.terms()[1..].to_vec());
        let t = reduce_full(&tail, &kept);
        let mut terms = vec![g.terms()[0].clone()];
        terms.extend(t.into_terms());
        out.push(Poly::from_sorted(&ring, terms));
    }
    out.sort_by(|a, b| order.cmp(&a.lm(), &b.lm()));
    out
}

pub(crate) fn require_same_ring(polys: &[Poly], ring: &Arc<Ring>) -> Result<()> {
    for p in polys {
        if !crate::polycore::poly::same_ring(p.ring(), ring) {
            return Err(Error::RingMismatch);
        }
    }
    Ok(())
}
