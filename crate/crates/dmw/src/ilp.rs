//! Exact integer programs over bounded variables.
//!
//! [`solve`] runs a depth-first branch and bound. Every node tightens the
//! variable intervals by constraint propagation, then bounds the objective
//! with a Lagrangian relaxation whose multipliers come from a floating-point
//! LP. The multipliers are only hints: the bound they give is evaluated in
//! exact integer arithmetic, so rounding error can weaken pruning but never
//! change the answer.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub relation: Relation,
    pub rhs: i64,
}

/// Minimize `objective · x` subject to `constraints` and `lo ≤ x ≤ hi`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IlpInstance {
    pub constraints: Vec<Constraint>,
    pub objective: Vec<i64>,
    pub bounds: Vec<(i64, i64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum IlpResult {
    Infeasible,
    Optimal { assignment: Vec<i64>, value: i64 },
}

impl IlpResult {
    pub fn assignment(&self) -> Option<&[i64]> {
        match self {
            IlpResult::Optimal { assignment, .. } => Some(assignment),
            IlpResult::Infeasible => None,
        }
    }

    pub fn value(&self) -> Option<i64> {
        match self {
            IlpResult::Optimal { value, .. } => Some(*value),
            IlpResult::Infeasible => None,
        }
    }
}

impl IlpInstance {
    /// An instance over `p` variables with zero objective and no constraints.
    pub fn new(bounds: Vec<(i64, i64)>) -> Self {
        let p = bounds.len();
        IlpInstance { constraints: Vec::new(), objective: vec![0; p], bounds }
    }

    pub fn vars(&self) -> usize {
        self.bounds.len()
    }

    pub fn add(&mut self, coeffs: Vec<i64>, relation: Relation, rhs: i64) {
        self.constraints.push(Constraint { coeffs, relation, rhs });
    }

    /// Adds `Σ coef·x_var ⋈ rhs` given as sparse terms.
    pub fn add_sparse(&mut self, terms: &[(usize, i64)], relation: Relation, rhs: i64) {
        let mut coeffs = vec![0; self.vars()];
        for &(j, c) in terms {
            coeffs[j] += c;
        }
        self.add(coeffs, relation, rhs);
    }

    /// True if `x` lies in the bounds and satisfies every constraint.
    pub fn is_feasible(&self, x: &[i64]) -> bool {
        x.len() == self.vars()
            && x.iter().zip(&self.bounds).all(|(&v, &(lo, hi))| lo <= v && v <= hi)
            && self.constraints.iter().all(|c| {
                let lhs: i128 = c.coeffs.iter().zip(x).map(|(&a, &v)| a as i128 * v as i128).sum();
                let rhs = c.rhs as i128;
                match c.relation {
                    Relation::Ge => lhs >= rhs,
                    Relation::Le => lhs <= rhs,
                    Relation::Eq => lhs == rhs,
                }
            })
    }

    pub fn evaluate(&self, x: &[i64]) -> i64 {
        self.objective.iter().zip(x).map(|(&c, &v)| c * v).sum()
    }

    fn validate(&self) -> Result<()> {
        let p = self.vars();
        if p == 0 {
            return Err(Error::InvalidInstance("no variables".into()));
        }
        if self.objective.len() != p {
            return Err(Error::LengthMismatch { expected: p, found: self.objective.len() });
        }
        if let Some(j) = self.bounds.iter().position(|&(lo, hi)| lo > hi) {
            return Err(Error::InvalidInstance(format!("variable {j} has an empty domain")));
        }
        let rows = self.constraints.iter().map(|c| (&c.coeffs, c.rhs)).chain(std::iter::once((&self.objective, 0)));
        for (coeffs, rhs) in rows {
            if coeffs.len() != p {
                return Err(Error::LengthMismatch { expected: p, found: coeffs.len() });
            }
            // every partial activity must fit in an i64
            let mut total = rhs.unsigned_abs() as u128;
            for (&a, &(lo, hi)) in coeffs.iter().zip(&self.bounds) {
                let m = lo.unsigned_abs().max(hi.unsigned_abs()) as u128;
                total += a.unsigned_abs() as u128 * m;
            }
            if total > i64::MAX as u128 {
                return Err(Error::Overflow);
            }
        }
        Ok(())
    }
}

/// Optimal solution or a proof of infeasibility.
///
/// ```
/// use dmw::ilp::{solve, IlpInstance, IlpResult, Relation};
///
/// let mut ilp = IlpInstance::new(vec![(0, 10), (0, 10)]);
/// ilp.objective = vec![1, 1];
/// ilp.add(vec![2, 3], Relation::Ge, 12);
/// assert_eq!(solve(&ilp).unwrap(), IlpResult::Optimal { assignment: vec![0, 4], value: 4 });
/// ```
pub fn solve(inst: &IlpInstance) -> Result<IlpResult> {
    inst.validate()?;
    Ok(BranchAndBound::new(inst, false).run())
}

/// True iff some integer point satisfies every constraint.
pub fn feasible(inst: &IlpInstance) -> Result<bool> {
    inst.validate()?;
    let mut zero = inst.clone();
    zero.objective = vec![0; inst.vars()];
    Ok(BranchAndBound::new(&zero, true).run() != IlpResult::Infeasible)
}

/// Rows in the form `a · x ≤ b`.
struct Row {
    terms: Vec<(usize, i128)>,
    rhs: i128,
}

struct BranchAndBound<'a> {
    inst: &'a IlpInstance,
    rows: Vec<Row>,
    objective: Vec<(usize, i128)>,
    first_only: bool,
    best: Option<(Vec<i64>, i64)>,
    lp: Lp,
}

const PROPAGATION_ROUNDS: usize = 30;
const SCALE_BITS: u32 = 30;

impl<'a> BranchAndBound<'a> {
    fn new(inst: &'a IlpInstance, first_only: bool) -> Self {
        let sparse = |coeffs: &[i64], sign: i128| -> Vec<(usize, i128)> {
            coeffs.iter().enumerate().filter(|(_, &a)| a != 0).map(|(j, &a)| (j, sign * a as i128)).collect()
        };
        let mut rows = Vec::new();
        for c in &inst.constraints {
            if c.relation != Relation::Ge {
                rows.push(Row { terms: sparse(&c.coeffs, 1), rhs: c.rhs as i128 });
            }
            if c.relation != Relation::Le {
                rows.push(Row { terms: sparse(&c.coeffs, -1), rhs: -(c.rhs as i128) });
            }
        }
        BranchAndBound {
            inst,
            rows,
            objective: sparse(&inst.objective, 1),
            first_only,
            best: None,
            lp: Lp::new(inst),
        }
    }

    fn run(mut self) -> IlpResult {
        let start: Vec<(i128, i128)> = self.inst.bounds.iter().map(|&(l, h)| (l as i128, h as i128)).collect();
        let mut stack = vec![start];
        while let Some(mut dom) = stack.pop() {
            if self.first_only && self.best.is_some() {
                break;
            }
            if !self.propagate(&mut dom) {
                continue;
            }
            let Some(j) = dom.iter().position(|&(l, h)| l < h) else {
                let x: Vec<i64> = dom.iter().map(|&(l, _)| l as i64).collect();
                self.offer(x);
                continue;
            };
            match self.lp.bound(self.inst, &dom) {
                LpOutcome::Infeasible => continue,
                LpOutcome::Bound { lower, rounded } => {
                    if let Some(x) = rounded {
                        self.offer(x);
                    }
                    if let (Some(lower), Some((_, best))) = (lower, &self.best) {
                        if lower >= *best as i128 {
                            continue;
                        }
                    }
                }
                LpOutcome::Unknown => {}
            }
            let (l, h) = dom[j];
            let mut right = dom.clone();
            right[j] = (l + 1, h);
            dom[j] = (l, l);
            stack.push(right);
            stack.push(dom);
        }
        match self.best {
            Some((assignment, value)) => IlpResult::Optimal { assignment, value },
            None => IlpResult::Infeasible,
        }
    }

    fn offer(&mut self, x: Vec<i64>) {
        if !self.inst.is_feasible(&x) {
            return;
        }
        let value = self.inst.evaluate(&x);
        if self.best.as_ref().map_or(true, |(_, b)| value < *b) {
            self.best = Some((x, value));
        }
    }

    /// Tightens `dom`; false if some row cannot be satisfied.
    fn propagate(&self, dom: &mut [(i128, i128)]) -> bool {
        let cutoff = self.best.as_ref().map(|(_, b)| Row { terms: self.objective.clone(), rhs: *b as i128 - 1 });
        for _ in 0..PROPAGATION_ROUNDS {
            let mut changed = false;
            for row in self.rows.iter().chain(cutoff.iter()) {
                let min_act: i128 = row.terms.iter().map(|&(j, a)| if a > 0 { a * dom[j].0 } else { a * dom[j].1 }).sum();
                if min_act > row.rhs {
                    return false;
                }
                for &(j, a) in &row.terms {
                    let (lo, hi) = dom[j];
                    let own = if a > 0 { a * lo } else { a * hi };
                    let slack = row.rhs - (min_act - own);
                    if a > 0 {
                        let limit = slack.div_euclid(a);
                        if limit < hi {
                            dom[j].1 = limit;
                            changed = true;
                        }
                    } else {
                        let limit = -slack.div_euclid(-a);
                        if limit > lo {
                            dom[j].0 = limit;
                            changed = true;
                        }
                    }
                    if dom[j].0 > dom[j].1 {
                        return false;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        true
    }
}

enum LpOutcome {
    Infeasible,
    /// `lower` is an exact lower bound on the objective over integer points
    /// of the box; `rounded` is the LP optimum when it is integral.
    Bound { lower: Option<i128>, rounded: Option<Vec<i64>> },
    Unknown,
}

/// Dense bounded-variable primal simplex used to find Lagrange multipliers.
struct Lp {
    m: usize,
    p: usize,
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
    rel: Vec<Relation>,
    a_int: Vec<Vec<i64>>,
    b_int: Vec<i64>,
    c: Vec<f64>,
    /// Rows currently included in the LP; grows over the whole search.
    active: Vec<bool>,
}

const CUT_ROUNDS: usize = 20;
const EPS: f64 = 1e-9;
const MAX_MULTIPLIER: f64 = 1e6;

impl Lp {
    fn new(inst: &IlpInstance) -> Self {
        let m = inst.constraints.len();
        Lp {
            m,
            p: inst.vars(),
            a: inst.constraints.iter().map(|c| c.coeffs.iter().map(|&v| v as f64).collect()).collect(),
            b: inst.constraints.iter().map(|c| c.rhs as f64).collect(),
            rel: inst.constraints.iter().map(|c| c.relation).collect(),
            a_int: inst.constraints.iter().map(|c| c.coeffs.clone()).collect(),
            b_int: inst.constraints.iter().map(|c| c.rhs).collect(),
            c: inst.objective.iter().map(|&v| v as f64).collect(),
            active: initial_rows(inst),
        }
    }

    /// Solves the LP over the active rows, activating rows the LP optimum
    /// violates. Inactive rows get multiplier zero, so every bound stays valid.
    fn bound(&mut self, inst: &IlpInstance, dom: &[(i128, i128)]) -> LpOutcome {
        let mut last = LpOutcome::Unknown;
        for _ in 0..CUT_ROUNDS {
            let rows: Vec<usize> = (0..self.m).filter(|&i| self.active[i]).collect();
            let mut t = Tableau::new(self, &rows, dom);
            let Some(phase1) = t.optimize() else { return last };
            if phase1 > 1e-7 {
                let zero = vec![0; self.p];
                return match self.lagrangian(&t.duals(self.m, &rows), &zero, dom) {
                    Some(l) if l > 0 => LpOutcome::Infeasible,
                    _ => last,
                };
            }
            t.start_phase2(&self.c);
            if t.optimize().is_none() {
                return last;
            }
            let lower = self.lagrangian(&t.duals(self.m, &rows), &inst.objective, dom);
            let x = &t.x[..self.p];
            let rounded = x
                .iter()
                .all(|v| (v - v.round()).abs() < 1e-6)
                .then(|| x.iter().map(|v| v.round() as i64).collect());
            let mut violated: Vec<(f64, usize)> = (0..self.m)
                .filter(|&i| !self.active[i])
                .filter_map(|i| {
                    let lhs: f64 = self.a[i].iter().zip(x).map(|(a, v)| a * v).sum();
                    let gap = match self.rel[i] {
                        Relation::Ge => self.b[i] - lhs,
                        Relation::Le => lhs - self.b[i],
                        Relation::Eq => (lhs - self.b[i]).abs(),
                    };
                    (gap > 1e-6).then_some((gap, i))
                })
                .collect();
            last = LpOutcome::Bound { lower, rounded };
            if violated.is_empty() {
                break;
            }
            violated.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            for &(_, i) in violated.iter().take(self.p.max(8)) {
                self.active[i] = true;
            }
        }
        last
    }

    /// Ceiling of `min over the box of c·x − Σ π_i (a_i·x − b_i)`, computed
    /// exactly with π rounded to multiples of 2^-30 and clamped to valid signs.
    fn lagrangian(&self, pi: &[f64], c: &[i64], dom: &[(i128, i128)]) -> Option<i128> {
        let scale = 1i128 << SCALE_BITS;
        let pis: Vec<i128> = pi
            .iter()
            .zip(&self.rel)
            .map(|(&v, rel)| {
                let v = v.clamp(-MAX_MULTIPLIER, MAX_MULTIPLIER);
                let v = match rel {
                    Relation::Ge => v.max(0.0),
                    Relation::Le => v.min(0.0),
                    Relation::Eq => v,
                };
                (v * scale as f64).round() as i128
            })
            .collect();
        let mut total: i128 = 0;
        for (i, &pi) in pis.iter().enumerate() {
            total = total.checked_add(pi.checked_mul(self.b_int[i] as i128)?)?;
        }
        for (j, &(lo, hi)) in dom.iter().enumerate() {
            let mut red = (c[j] as i128).checked_mul(scale)?;
            for (i, &pi) in pis.iter().enumerate() {
                let a = self.a_int[i][j];
                if a != 0 {
                    red = red.checked_sub(pi.checked_mul(a as i128)?)?;
                }
            }
            let best = red.checked_mul(lo)?.min(red.checked_mul(hi)?);
            total = total.checked_add(best)?;
        }
        Some(-((-total).div_euclid(scale)))
    }
}

/// Equalities plus the first inequalities, up to about twice as many rows as variables.
fn initial_rows(inst: &IlpInstance) -> Vec<bool> {
    let limit = 2 * inst.vars() + 8;
    let mut taken = inst.constraints.iter().filter(|c| c.relation == Relation::Eq).count();
    inst.constraints
        .iter()
        .map(|c| {
            if c.relation == Relation::Eq {
                return true;
            }
            taken += 1;
            taken <= limit
        })
        .collect()
}

struct Tableau {
    m: usize,
    /// columns: structural, slack, artificial
    cols: usize,
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    x: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    cost: Vec<f64>,
    reduced: Vec<f64>,
    slack0: usize,
}

impl Tableau {
    fn new(lp: &Lp, active: &[usize], dom: &[(i128, i128)]) -> Self {
        let (m, p) = (active.len(), lp.p);
        let slack0 = p;
        let art0 = p + m;
        let cols = p + 2 * m;
        let mut lo = vec![0.0; cols];
        let mut hi = vec![f64::INFINITY; cols];
        for (j, &(l, h)) in dom.iter().enumerate() {
            lo[j] = l as f64;
            hi[j] = h as f64;
        }
        for (i, &row) in active.iter().enumerate() {
            let (l, h) = match lp.rel[row] {
                Relation::Le => (0.0, f64::INFINITY),
                Relation::Ge => (f64::NEG_INFINITY, 0.0),
                Relation::Eq => (0.0, 0.0),
            };
            lo[slack0 + i] = l;
            hi[slack0 + i] = h;
        }
        let mut x = vec![0.0; cols];
        x[..p].copy_from_slice(&lo[..p]);
        let mut rows = vec![vec![0.0; cols]; m];
        let mut basis = Vec::with_capacity(m);
        for (i, &row) in active.iter().enumerate() {
            let resid = lp.b[row] - lp.a[row].iter().zip(&x[..p]).map(|(a, v)| a * v).sum::<f64>();
            let sign = if resid >= 0.0 { 1.0 } else { -1.0 };
            rows[i][..p].iter_mut().zip(&lp.a[row]).for_each(|(r, a)| *r = sign * a);
            rows[i][slack0 + i] = sign;
            rows[i][art0 + i] = 1.0;
            x[art0 + i] = resid.abs();
            basis.push(art0 + i);
        }
        let mut cost = vec![0.0; cols];
        cost[art0..].iter_mut().for_each(|c| *c = 1.0);
        let mut t = Tableau { m, cols, rows, basis, x, lo, hi, cost, reduced: vec![0.0; cols], slack0 };
        t.price();
        t
    }

    fn price(&mut self) {
        for j in 0..self.cols {
            let mut d = self.cost[j];
            for i in 0..self.m {
                d -= self.cost[self.basis[i]] * self.rows[i][j];
            }
            self.reduced[j] = d;
        }
    }

    fn start_phase2(&mut self, c: &[f64]) {
        let art0 = self.slack0 + self.m;
        for j in art0..self.cols {
            self.hi[j] = 0.0;
            self.x[j] = self.x[j].min(0.0).max(0.0);
        }
        self.cost = vec![0.0; self.cols];
        self.cost[..c.len()].copy_from_slice(c);
        self.price();
    }

    /// Runs simplex iterations; returns the objective value or `None` when
    /// the iteration budget runs out.
    fn optimize(&mut self) -> Option<f64> {
        let mut is_basic = vec![false; self.cols];
        for &b in &self.basis {
            is_basic[b] = true;
        }
        let budget = 50 * (self.m + self.cols) + 1000;
        let mut degenerate = 0usize;
        for _ in 0..budget {
            // entering variable: Dantzig, Bland after a run of degenerate pivots
            let bland = degenerate > 50;
            let mut enter = None;
            let mut best = EPS;
            for j in 0..self.cols {
                if is_basic[j] || self.hi[j] - self.lo[j] < EPS {
                    continue;
                }
                let d = self.reduced[j];
                let improving = (d < -EPS && self.x[j] < self.hi[j] - EPS) || (d > EPS && self.x[j] > self.lo[j] + EPS);
                if improving && (bland || d.abs() > best) {
                    best = d.abs();
                    enter = Some(j);
                    if bland {
                        break;
                    }
                }
            }
            let Some(j) = enter else {
                return Some((0..self.cols).map(|k| self.cost[k] * self.x[k]).sum());
            };
            let dir = if self.reduced[j] < 0.0 { 1.0 } else { -1.0 };
            let mut step = self.hi[j] - self.lo[j];
            let mut leave = None;
            for i in 0..self.m {
                let alpha = self.rows[i][j] * dir;
                let bv = self.basis[i];
                let limit = if alpha > EPS {
                    (self.x[bv] - self.lo[bv]) / alpha
                } else if alpha < -EPS {
                    (self.hi[bv] - self.x[bv]) / -alpha
                } else {
                    continue;
                };
                let limit = limit.max(0.0);
                if limit < step - EPS || (leave.is_none() && limit < step + EPS && limit < f64::INFINITY) {
                    step = limit;
                    leave = Some(i);
                }
            }
            if step.is_infinite() {
                return None;
            }
            degenerate = if step < EPS { degenerate + 1 } else { 0 };
            for i in 0..self.m {
                let bv = self.basis[i];
                self.x[bv] -= self.rows[i][j] * dir * step;
            }
            self.x[j] += dir * step;
            let Some(r) = leave else { continue };
            let out = self.basis[r];
            // snap the leaving variable onto the bound it reached
            self.x[out] = if self.rows[r][j] * dir > 0.0 { self.lo[out] } else { self.hi[out] };
            let piv = self.rows[r][j];
            let pivot_row: Vec<f64> = self.rows[r].iter().map(|v| v / piv).collect();
            for i in 0..self.m {
                if i != r {
                    let f = self.rows[i][j];
                    if f != 0.0 {
                        self.rows[i].iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
                    }
                }
            }
            let f = self.reduced[j];
            self.reduced.iter_mut().zip(&pivot_row).for_each(|(v, pv)| *v -= f * pv);
            self.rows[r] = pivot_row;
            self.basis[r] = j;
            is_basic[out] = false;
            is_basic[j] = true;
        }
        None
    }

    /// Multipliers for all `m` rows: the reduced cost of slack `i` is `−y_i`
    /// for active rows, inactive rows get zero.
    fn duals(&self, m: usize, active: &[usize]) -> Vec<f64> {
        let mut y = vec![0.0; m];
        for (i, &row) in active.iter().enumerate() {
            y[row] = -self.reduced[self.slack0 + i];
        }
        y
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(rel: Relation, rhs: i64, lo: i64, hi: i64) -> IlpInstance {
        let mut ilp = IlpInstance::new(vec![(lo, hi)]);
        ilp.objective = vec![1];
        ilp.add(vec![1], rel, rhs);
        ilp
    }

    #[test]
    fn single_variable() {
        assert_eq!(solve(&single(Relation::Ge, 3, 0, 10)).unwrap(), IlpResult::Optimal { assignment: vec![3], value: 3 });
        assert!(feasible(&single(Relation::Ge, 3, 0, 10)).unwrap());
        assert!(!feasible(&single(Relation::Ge, 3, 0, 2)).unwrap());
    }

    #[test]
    fn contradiction() {
        let mut ilp = IlpInstance::new(vec![(-10, 10)]);
        ilp.add(vec![1], Relation::Ge, 1);
        ilp.add(vec![-1], Relation::Ge, 0);
        assert_eq!(solve(&ilp).unwrap(), IlpResult::Infeasible);
    }

    #[test]
    fn sum_exceeds_range() {
        let mut ilp = IlpInstance::new(vec![(0, 1); 3]);
        ilp.add(vec![1, 1, 1], Relation::Eq, 5);
        assert!(!feasible(&ilp).unwrap());
    }

    #[test]
    fn parity_needs_branching() {
        // 2x + 2y = 3 has LP solutions but no integer ones
        let mut ilp = IlpInstance::new(vec![(0, 5), (0, 5)]);
        ilp.add(vec![2, 2], Relation::Eq, 3);
        assert_eq!(solve(&ilp).unwrap(), IlpResult::Infeasible);
    }

    #[test]
    fn overflow_is_reported() {
        let mut ilp = IlpInstance::new(vec![(0, i64::MAX / 2)]);
        ilp.add(vec![4], Relation::Le, 1);
        assert_eq!(solve(&ilp), Err(Error::Overflow));
    }

    #[test]
    fn knapsack_cover() {
        let mut ilp = IlpInstance::new(vec![(0, 1); 5]);
        ilp.objective = vec![5, 4, 3, 7, 1];
        ilp.add(vec![3, 2, 2, 5, 1], Relation::Ge, 7);
        let best = (0..32u32)
            .map(|mask| (0..5).map(|j| i64::from(mask >> j & 1)).collect::<Vec<_>>())
            .filter(|x| ilp.is_feasible(x))
            .map(|x| ilp.evaluate(&x))
            .min();
        assert_eq!(solve(&ilp).unwrap().value(), best);
    }
}
