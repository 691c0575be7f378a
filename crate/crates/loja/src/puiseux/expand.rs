//! Newton polygon expansion of the places at infinity of a plane curve.
//!
//! Setting: a squarefree curve h(x, y) = 0 whose leading coefficient in y
//! is constant, so every place at infinity has x -> infinity. After the
//! flip u = 1/x the places become the solutions y(u) of
//! hhat(u, y) = u^(deg_x h) h(1/u, y) as u -> 0, with y allowed to escape
//! to infinity (polygon slopes of either sign). Each polygon edge with
//! slope k/q (lowest terms) contributes classes of solutions
//! y ~ c u^(k/q); the edge polynomial collapses to a polynomial P in
//! rho = c^q, roots rho of P are adjoined to the coefficient tower
//! (rational roots split off first), and the q-th root c itself is adjoined
//! as a *ramified* level t^q - rho which absorbs the reparametrization
//! orbit t -> zeta t and is therefore excluded from conjugacy counts.
//! Substituting s -> s^q, y = s^k (c + eta) and clearing the common power
//! of s descends to a local problem; the recursion bottoms out when the
//! solution through eta = 0 is unique and transverse (regular), after which
//! every further series term follows by one linear solve per term.
//!
//! All zero decisions go through the tower's unit test, so a tower that is
//! secretly a product of fields splits the computation rather than corrupt
//! a degree.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::multipoly::MultiPoly;
use crate::rational::Rational;
use crate::tower::{AlgebraicNumber, FieldTower, Node, NodeMapper, Split, TRes};

/// Bivariate polynomial in (s, eta) with tower coefficients; no canonical
/// zeros are stored. s-exponents are i64 because substitutions pass through
/// Laurent territory before the common power is cleared.
#[derive(Clone, Debug)]
pub(crate) struct TPoly {
    pub terms: BTreeMap<(i64, u32), Node>,
}

impl TPoly {
    fn new() -> Self {
        TPoly {
            terms: BTreeMap::new(),
        }
    }

    fn insert_add(&mut self, tower: &FieldTower, key: (i64, u32), node: Node) {
        if FieldTower::nis_zero(&node) {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(node);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = tower.nadd(e.get(), &node);
                if FieldTower::nis_zero(&sum) {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn map_nodes(&self, new_tower: &Arc<FieldTower>, mapper: &NodeMapper) -> TPoly {
        let mut out = TPoly::new();
        for (k, n) in &self.terms {
            let m = mapper.map(new_tower, n);
            if !FieldTower::nis_zero(&m) {
                out.terms.insert(*k, m);
            }
        }
        out
    }

    fn lift(&self, tower: &Arc<FieldTower>, from_depth: usize) -> TPoly {
        let mut out = TPoly::new();
        for (k, n) in &self.terms {
            out.terms.insert(*k, tower.lift_node(n.clone(), from_depth));
        }
        out
    }
}

/// One place-class of the curve at infinity.
///
/// The parametrization is x = t^p exactly; y(t) is the recorded descending
/// Laurent-Puiseux series with coefficients in the class's tower. The
/// conjugacy size counts the embeddings of the non-ramified tower levels:
/// summing ramification times conjugacy size over all branches recovers
/// deg_y of the defining curve.
#[derive(Clone)]
pub struct Branch {
    pub(crate) tower: Arc<FieldTower>,
    pub(crate) ram: u32,
    /// y = sum of a_i s^{e_i} in the local variable s = 1/t; stored with
    /// strictly increasing e_i. The t-exponent of a term is -e_i.
    pub(crate) acc: Vec<(i64, Node)>,
    pub(crate) exact: bool,
    pub(crate) w: TPoly,
    pub(crate) wexp: i64,
    /// Extra shift-depth the (possibly truncated) state `w` still supports;
    /// `None` means the state is complete. Terms whose relative order
    /// exceeds the budget can only influence series terms beyond it, so
    /// they are dropped during bounded extension and the pristine leaf
    /// state below is kept for rebuilding past the budget.
    pub(crate) budget: Option<i64>,
    pub(crate) leaf: Option<Arc<LeafState>>,
    /// Inverse of the transverse coefficient (the (s^0, eta^1) entry of w),
    /// which substitution reproduces exactly at every regular step.
    pub(crate) e1_inv: Option<Node>,
    pub(crate) conj: usize,
    pub(crate) source: MultiPoly,
    pub(crate) ambient_deg: u32,
}

pub(crate) struct LeafState {
    pub(crate) w: TPoly,
    pub(crate) wexp: i64,
    pub(crate) acc_len: usize,
}

impl Branch {
    /// Ramification index p: the parametrization is x = t^p.
    pub fn ramification(&self) -> u32 {
        self.ram
    }

    pub fn conjugacy_size(&self) -> usize {
        self.conj
    }

    /// The squarefree defining polynomial this branch annihilates.
    pub fn source_factor(&self) -> &MultiPoly {
        &self.source
    }

    pub fn ambient_degree(&self) -> u32 {
        self.ambient_deg
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Series terms of y(t), exponents strictly decreasing.
    pub fn series(&self) -> Vec<(i64, AlgebraicNumber)> {
        self.acc
            .iter()
            .map(|(e, n)| (-e, AlgebraicNumber::from_node(&self.tower, n.clone())))
            .collect()
    }

    /// Terms with exponent strictly above this value are exactly
    /// represented; `None` when the whole series is exact (polynomial).
    pub fn truncation_exponent(&self) -> Option<i64> {
        if self.exact {
            None
        } else {
            Some(-self.wexp - 1)
        }
    }

    /// deg Phi: the top exponent of the parametrization under the
    /// max-of-moduli convention.
    pub fn deg_phi(&self) -> i64 {
        let lead = self.acc.first().map(|(e, _)| -e);
        match lead {
            Some(l) => l.max(self.ram as i64),
            None => self.ram as i64,
        }
    }

    /// Leading series coefficient, when the series is nonempty.
    pub fn leading_coefficient(&self) -> Option<AlgebraicNumber> {
        self.acc
            .first()
            .map(|(_, n)| AlgebraicNumber::from_node(&self.tower, n.clone()))
    }

    /// Same branch with the series guaranteed exact for all exponents
    /// above `target`. No-op if already that deep (or exact).
    pub fn extended_to(&self, target: i64) -> Branch {
        self.extended_with_horizon(target, target)
    }

    /// Like `extended_to`, but prepares the internal state for eventual
    /// extension down to `horizon` (<= target), so a sequence of deepening
    /// calls does not rebuild the state each time.
    pub(crate) fn extended_with_horizon(&self, target: i64, horizon: i64) -> Branch {
        let horizon = horizon.min(target);
        if self.exact || -(self.wexp) - 1 <= target {
            return self.clone();
        }
        let mut b = self.clone();
        let needed = (-target - 1) - b.wexp; // additional shift required
        if b.budget.map_or(false, |have| have < needed) {
            // rebuild from the pristine leaf with a budget for the horizon
            let leaf = b.leaf.clone().expect("truncated state keeps its leaf");
            b.w = leaf.w.clone();
            b.wexp = leaf.wexp;
            b.acc.truncate(leaf.acc_len);
            b.budget = None;
        }
        if b.budget.is_none() {
            // install the truncation window for this run of extensions
            let horizon_shift = (-horizon - 1) - b.wexp + 8;
            b.budget = Some(horizon_shift.max(needed));
            b.drop_beyond_budget();
        }
        while !b.exact && -(b.wexp) - 1 > target {
            if !b.regular_step() {
                break;
            }
        }
        b
    }

    fn drop_beyond_budget(&mut self) {
        if let Some(budget) = self.budget {
            self.w.terms.retain(|(a, _), _| *a <= budget);
        }
    }

    /// One regular Newton step: appends at most one series term.
    /// Returns false when the series terminated exactly (or the truncated
    /// state ran out of budget, which callers prevent by construction).
    fn regular_step(&mut self) -> bool {
        // order of w(s, 0)
        let o0 = self
            .w
            .terms
            .iter()
            .filter(|((_, j), _)| *j == 0)
            .map(|((a, _), _)| *a)
            .min();
        let o0 = match o0 {
            None => {
                if self.budget.is_none() {
                    self.exact = true;
                }
                return false;
            }
            Some(o) => o,
        };
        if let Some(budget) = self.budget {
            if o0 > budget {
                return false; // out of window; a deeper call rebuilds
            }
        }
        debug_assert!(o0 >= 1, "regular state cannot have a unit term at s^0");
        let e0 = self.w.terms.get(&(o0, 0)).unwrap().clone();
        let e1 = self
            .w
            .terms
            .get(&(0, 1))
            .expect("regular leaf has transverse term")
            .clone();
        let e1_inv = self
            .tower
            .ninv(&e1)
            .expect("transversal coefficient was certified invertible");
        let root = self.tower.nneg(&self.tower.nmul(&e0, &e1_inv));
        // substitute eta = s^o0 (root + eta') and divide the equation by
        // s^o0, keeping the transverse term at (0, 1). The root may vanish
        // on part of a product tower, in which case no term is pushed but
        // the shift still applies uniformly.
        let mut w = substitute_eta(&self.tower, &self.w, o0, &root);
        normalize_spoly(&mut w);
        self.w = w;
        if let Some(budget) = self.budget.as_mut() {
            *budget -= o0;
        }
        self.drop_beyond_budget();
        if !FieldTower::nis_zero(&root) {
            self.acc.push((self.wexp + o0, root));
        }
        self.wexp += o0;
        true
    }

    /// Split this branch along a discovered factorization of its tower.
    pub(crate) fn split(&self, split: &Split) -> Vec<Branch> {
        let parts = self.tower.split_at(split);
        parts
            .into_iter()
            .map(|(t, mapper)| {
                let acc = self
                    .acc
                    .iter()
                    .map(|(e, n)| (*e, mapper.map(&t, n)))
                    .filter(|(_, n)| !FieldTower::nis_zero(n))
                    .collect();
                let leaf = self.leaf.as_ref().map(|l| {
                    Arc::new(LeafState {
                        w: l.w.map_nodes(&t, &mapper),
                        wexp: l.wexp,
                        acc_len: l.acc_len,
                    })
                });
                Branch {
                    tower: t.clone(),
                    ram: self.ram,
                    acc,
                    exact: self.exact,
                    w: self.w.map_nodes(&t, &mapper),
                    wexp: self.wexp,
                    budget: self.budget,
                    leaf,
                    e1_inv: self.e1_inv.as_ref().map(|n| mapper.map(&t, n)),
                    conj: t.conjugacy_degree(),
                    source: self.source.clone(),
                    ambient_deg: self.ambient_deg,
                }
            })
            .collect()
    }

    /// Evaluate (x(t), y(t)) as certified balls at an exact rational t,
    /// using the currently recorded series terms.
    pub fn eval_point_ball(
        &self,
        t: &Rational,
        prec: u32,
    ) -> (crate::ball::CBall, crate::ball::CBall) {
        use crate::ball::CBall;
        let mut xpow = Rational::one();
        for _ in 0..self.ram {
            xpow *= t;
        }
        let x = CBall::from_rational(xpow);
        let mut y = CBall::zero();
        for (e, n) in &self.acc {
            let coeff = self.tower.node_enclosure(n, prec);
            // t^(-e)
            let tp = rational_pow(t, -*e);
            y = y.add(&coeff.mul_rational(&tp)).round(prec);
        }
        (x, y)
    }
}

fn rational_pow(t: &Rational, e: i64) -> Rational {
    let mut out = Rational::one();
    let a = e.unsigned_abs();
    for _ in 0..a {
        out *= t;
    }
    if e < 0 {
        Rational::one() / out
    } else {
        out
    }
}

impl std::fmt::Debug for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Branch(p={}, conj={}, deg_phi={}, terms={}, exact={})",
            self.ram,
            self.conj,
            self.deg_phi(),
            self.acc.len(),
            self.exact
        )
    }
}

// ---------------------------------------------------------------------------
// expansion driver

struct State {
    tower: Arc<FieldTower>,
    w: TPoly,
    ram: u32,
    wexp: i64,
    acc: Vec<(i64, Node)>,
    first_level: bool,
    depth_guard: u32,
}

impl State {
    fn mapped(&self, t: &Arc<FieldTower>, mapper: &NodeMapper) -> State {
        State {
            tower: t.clone(),
            w: self.w.map_nodes(t, mapper),
            ram: self.ram,
            wexp: self.wexp,
            acc: self
                .acc
                .iter()
                .map(|(e, n)| (*e, mapper.map(t, n)))
                .filter(|(_, n)| !FieldTower::nis_zero(n))
                .collect(),
            first_level: self.first_level,
            depth_guard: self.depth_guard,
        }
    }
}

/// Expand all places at infinity of `h`.
///
/// Requires `h` nonzero, nonconstant, squarefree, with constant leading
/// coefficient in y (all places then have x -> infinity; a generic linear
/// change of coordinates guarantees this).
pub fn expand_branches(h: &MultiPoly) -> Result<Vec<Branch>> {
    if h.num_vars() != 2 {
        return Err(Error::NotBivariate);
    }
    if h.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if h.is_constant() {
        return Err(Error::BadParameter("curve must be nonconstant".into()));
    }
    let degs = h.degrees();
    let dy = degs.per_var[1].unwrap_or(0);
    // leading y-coefficient must be constant
    if dy > 0 {
        let lead_terms: Vec<_> = h.terms().filter(|(m, _)| m.0[1] == dy).collect();
        if lead_terms.iter().any(|(m, _)| m.0[0] > 0) {
            return Err(Error::VerticalPlaces);
        }
    }
    let dx = degs.per_var[0].unwrap_or(0) as i64;

    let q0 = FieldTower::rationals();
    // flip: hhat(u, y), term x^i y^j -> u^(dx - i) y^j
    let mut w = TPoly::new();
    for (m, c) in h.terms() {
        w.terms
            .insert((dx - m.0[0] as i64, m.0[1]), q0.rat_node(c.clone()));
    }

    let mut out: Vec<Branch> = Vec::new();
    let source = h.clone();
    let ambient = degs.total.unwrap_or(0);

    // y | h: the exact branch y = 0, then continue on the quotient
    let min_j = w.terms.keys().map(|(_, j)| *j).min().unwrap();
    if min_j > 0 {
        debug_assert!(min_j == 1, "squarefree curve cannot have y^2 | h");
        out.push(Branch {
            tower: q0.clone(),
            ram: 1,
            acc: Vec::new(),
            exact: true,
            w: TPoly::new(),
            wexp: 0,
            budget: None,
            leaf: None,
            e1_inv: None,
            conj: 1,
            source: source.clone(),
            ambient_deg: ambient,
        });
        let mut shifted = TPoly::new();
        for ((a, j), n) in &w.terms {
            shifted.terms.insert((*a, j - min_j), n.clone());
        }
        w = shifted;
    }

    if w.terms.keys().all(|(_, j)| *j == 0) {
        // no further y-dependence: no more places
        finish(&mut out, ambient);
        return Ok(out);
    }

    let state = State {
        tower: q0,
        w,
        ram: 1,
        wexp: 0,
        acc: Vec::new(),
        first_level: true,
        depth_guard: 0,
    };
    let branches = resolve(state, &source, ambient);
    out.extend(branches);
    finish(&mut out, ambient);
    Ok(out)
}

fn finish(out: &mut Vec<Branch>, ambient: u32) {
    let _ = ambient;
    // a handful of terms by default; consumers extend lazily
    for b in out.iter_mut() {
        let lead = b.acc.first().map(|(e, _)| -e).unwrap_or(0);
        *b = b.extended_to(lead - 6);
    }
}

/// Self-healing resolution: on a discovered split, redo this state on both
/// quotient towers.
fn resolve(state: State, source: &MultiPoly, ambient: u32) -> Vec<Branch> {
    match resolve_inner(&state, source, ambient) {
        Ok(branches) => branches,
        Err(split) => {
            let parts = state.tower.split_at(&split);
            parts
                .into_iter()
                .flat_map(|(t, mapper)| resolve(state.mapped(&t, &mapper), source, ambient))
                .collect()
        }
    }
}

fn resolve_inner(state: &State, source: &MultiPoly, ambient: u32) -> TRes<Vec<Branch>> {
    assert!(state.depth_guard < 256, "expansion failed to terminate");
    let tower = &state.tower;
    let mut w = state.w.clone();
    let mut out = Vec::new();

    if !state.first_level {
        // exact termination: eta | w means eta = 0 solves exactly
        let min_j = w.terms.keys().map(|(_, j)| *j).min();
        let min_j = match min_j {
            None => return Ok(out), // w vanished entirely (cannot happen for squarefree input)
            Some(m) => m,
        };
        if min_j > 0 {
            out.push(Branch {
                tower: tower.clone(),
                ram: state.ram,
                acc: state.acc.clone(),
                exact: true,
                w: TPoly::new(),
                wexp: state.wexp,
                budget: None,
                leaf: None,
                e1_inv: None,
                conj: tower.conjugacy_degree(),
                source: source.clone(),
                ambient_deg: ambient,
            });
            let mut shifted = TPoly::new();
            for ((a, j), n) in &w.terms {
                shifted.terms.insert((*a, j - min_j), n.clone());
            }
            w = shifted;
        }

        // regular: unique transverse solution through eta = 0
        let has_const = w.terms.keys().any(|(a, j)| *j == 0 && *a == 0);
        if !has_const {
            if let Some(e1) = w.terms.get(&(0, 1)) {
                if tower.unit_test(e1)? {
                    let leaf = Arc::new(LeafState {
                        w: w.clone(),
                        wexp: state.wexp,
                        acc_len: state.acc.len(),
                    });
                    out.push(Branch {
                        tower: tower.clone(),
                        ram: state.ram,
                        acc: state.acc.clone(),
                        exact: false,
                        w,
                        wexp: state.wexp,
                        budget: None,
                        leaf: Some(leaf),
                        e1_inv: None,
                        conj: tower.conjugacy_degree(),
                        source: source.clone(),
                        ambient_deg: ambient,
                    });
                    return Ok(out);
                }
            }
        }
    }

    // Newton polygon: lower hull of (j, min s-order of coeff_j)
    let mut support: BTreeMap<u32, i64> = BTreeMap::new();
    for (a, j) in w.terms.keys() {
        support
            .entry(*j)
            .and_modify(|o| *o = (*o).min(*a))
            .or_insert(*a);
    }
    let pts: Vec<(i64, i64)> = support.iter().map(|(j, o)| (*j as i64, *o)).collect();
    let hull = lower_hull(&pts);

    for win in hull.windows(2) {
        let (j1, o1) = win[0];
        let (j2, o2) = win[1];
        // gamma > 0: eta -> 0; at the first level any slope is a place
        let rise = o1 - o2;
        if !state.first_level && rise <= 0 {
            continue;
        }
        let run = j2 - j1;
        let g = gcd_i64(rise.abs().max(1), run);
        let (k, q) = if rise == 0 {
            (0, 1)
        } else {
            (rise / g, run / g)
        };

        // edge polynomial in c, collapsed to P(rho) with rho = c^q
        let mut p_nodes: Vec<Node> = Vec::new();
        let steps = (run / q) as usize;
        for i in 0..=steps {
            let j = j1 + i as i64 * q;
            let a = o1 - i as i64 * k;
            match w.terms.get(&(a, j as u32)) {
                Some(n) => {
                    // every coefficient entering an edge decision must be a unit
                    if !tower.unit_test(n)? {
                        unreachable!("stored node is canonically nonzero");
                    }
                    p_nodes.push(n.clone());
                }
                None => p_nodes.push(tower.zero_node()),
            }
        }
        // also unit-test interior support points that sit on the edge line
        // at non-multiple-of-q offsets: they cannot exist, since the line
        // only passes through integer orders at multiples of q.

        let classes = root_classes(tower, &p_nodes)?;
        for class in classes {
            let (sub_tower, rho, lift_depth) = match class {
                RootClass::Explicit(node) => (tower.clone(), node, tower.depth()),
                RootClass::Extension(minpoly) => {
                    let (t2, gen) = tower.extend_with(minpoly, false);
                    let d = tower.depth();
                    (t2, gen, d)
                }
            };
            // adjoin c with c^q = rho when the edge is ramified
            let (sub_tower, c_node, lift_depth2) = if q == 1 {
                (sub_tower, rho, lift_depth)
            } else {
                let mut mp = vec![sub_tower.nneg(&rho)];
                for _ in 1..q {
                    mp.push(sub_tower.zero_node());
                }
                mp.push(sub_tower.rat_node(Rational::one()));
                let d = sub_tower.depth();
                let (t3, c) = sub_tower.extend_with(mp, true);
                (t3, c, d)
            };
            let _ = lift_depth2;

            // lift the state into the class tower
            let depth_from = tower.depth();
            let w_lift = w.lift(&sub_tower, depth_from);
            let acc_lift: Vec<(i64, Node)> = state
                .acc
                .iter()
                .map(|(e, n)| (*e, sub_tower.lift_node(n.clone(), depth_from)))
                .collect();

            // s -> s^q on everything, then eta = s^k (c + eta')
            let mut w_scaled = TPoly::new();
            for ((a, j), n) in &w_lift.terms {
                w_scaled.terms.insert((a * q, *j), n.clone());
            }
            let acc_scaled: Vec<(i64, Node)> =
                acc_lift.iter().map(|(e, n)| (e * q, n.clone())).collect();
            let wexp_scaled = state.wexp * q;

            let mut w_sub = substitute_eta(&sub_tower, &w_scaled, k, &c_node);
            normalize_spoly(&mut w_sub);

            let mut acc_new = acc_scaled;
            if !FieldTower::nis_zero(&c_node) {
                acc_new.push((wexp_scaled + k, c_node.clone()));
            }

            let sub_state = State {
                tower: sub_tower,
                w: w_sub,
                ram: state.ram * q as u32,
                wexp: wexp_scaled + k,
                acc: acc_new,
                first_level: false,
                depth_guard: state.depth_guard + 1,
            };
            out.extend(resolve(sub_state, source, ambient));
        }
    }
    Ok(out)
}

/// eta = s^k (c + eta'): expand through binomials. Exponents may dip
/// negative for k < 0; the caller clears the common power afterwards.
fn substitute_eta(tower: &FieldTower, w: &TPoly, k: i64, c: &Node) -> TPoly {
    let max_j = w.terms.keys().map(|(_, j)| *j).max().unwrap_or(0) as usize;
    // powers of c
    let mut cpow: Vec<Node> = Vec::with_capacity(max_j + 1);
    cpow.push(tower.rat_node(Rational::one()));
    for i in 1..=max_j {
        cpow.push(tower.nmul(&cpow[i - 1], c));
    }
    let mut out = TPoly::new();
    for ((a, j), n) in &w.terms {
        let j = *j as usize;
        // (c + eta)^j = sum_i C(j, i) c^(j-i) eta^i
        for i in 0..=j {
            let bin = binomial(j, i);
            let mut coeff = tower.nmul(n, &cpow[j - i]);
            if !bin.is_one() {
                coeff = tower.nmul_rat(&coeff, &Rational::from_integer(bin.clone()));
            }
            out.insert_add(tower, (a + k * j as i64, i as u32), coeff);
        }
    }
    out
}

/// Shift s-exponents so the minimum is zero.
fn normalize_spoly(w: &mut TPoly) {
    let min_a = w.terms.keys().map(|(a, _)| *a).min().unwrap_or(0);
    if min_a != 0 {
        let old = std::mem::take(&mut w.terms);
        for ((a, j), n) in old {
            w.terms.insert((a - min_a, j), n);
        }
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k.min(n - k) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.max(1)
}

/// Lower convex hull of points sorted by x; returns the hull vertices.
fn lower_hull(pts: &[(i64, i64)]) -> Vec<(i64, i64)> {
    if pts.len() <= 1 {
        return pts.to_vec();
    }
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in pts {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // keep b only if it lies strictly below the chord a-p
            let cross = (b.0 - a.0) * (p.1 - a.1) - (p.0 - a.0) * (b.1 - a.1);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull
}

// ---------------------------------------------------------------------------
// root classes of an edge polynomial

enum RootClass {
    /// A root available in the current tower.
    Explicit(Node),
    /// Monic squarefree minimal polynomial for a fresh extension (deg >= 2).
    Extension(Vec<Node>),
}

/// Distinct-root classes of P over the tower: rational roots are split off
/// exactly (verified by exact evaluation), an explicit linear residual is
/// resolved, and whatever remains becomes a single extension class.
fn root_classes(tower: &Arc<FieldTower>, p: &[Node]) -> TRes<Vec<RootClass>> {
    let depth = tower.depth();
    let mut sigma = tower.tu_squarefree(depth, p)?;
    let mut out: Vec<RootClass> = Vec::new();

    // rational roots, found numerically then verified exactly; linear
    // residuals resolve explicitly below without any numerics
    let candidates = if sigma.len() > 2 {
        rational_root_candidates(tower, &sigma)
    } else {
        Vec::new()
    };
    let mut rational_roots: Vec<Rational> = Vec::new();
    for cand in candidates {
        if sigma.len() <= 1 {
            break;
        }
        let cn = tower.rat_node(cand.clone());
        let val = tower.tu_eval(depth, &sigma, &cn);
        if FieldTower::nis_zero(&val) {
            // divide out (x - cand)
            let div = vec![tower.nneg(&cn), tower.rat_node(Rational::one())];
            let (quot, rem) = tower.tu_divrem(depth, &sigma, &div)?;
            debug_assert!(rem.is_empty());
            sigma = quot;
            rational_roots.push(cand);
        }
    }
    rational_roots.sort();
    for r in rational_roots {
        out.push(RootClass::Explicit(tower.rat_node(r)));
    }

    if sigma.len() == 2 {
        // linear residual: explicit root in the tower
        let inv = tower.ninv(&sigma[1])?;
        let root = tower.nneg(&tower.nmul(&sigma[0], &inv));
        out.push(RootClass::Explicit(root));
    } else if sigma.len() > 2 {
        let monic = tower.tu_monic(depth, &sigma)?;
        out.push(RootClass::Extension(monic));
    }
    Ok(out)
}

/// Numeric root sweep producing candidate rationals (small denominators
/// first). Purely an optimization: anything missed stays in the extension
/// class and is handled by dynamic splitting later.
fn rational_root_candidates(tower: &Arc<FieldTower>, sigma: &[Node]) -> Vec<Rational> {
    if sigma.len() <= 1 {
        return Vec::new();
    }
    let prec = 60u32;
    let coeffs: Vec<crate::ball::CBall> = sigma
        .iter()
        .map(|n| tower.node_enclosure(n, prec))
        .collect();
    let roots = match crate::ball::isolate_roots(&coeffs, 40, 120) {
        Some(r) => r,
        None => return Vec::new(),
    };
    let mut cands: Vec<Rational> = Vec::new();
    for r in &roots {
        // a rational root must have imaginary part 0
        let im_lo = &r.im - &r.rad;
        let im_hi = &r.im + &r.rad;
        if im_lo.is_positive() || im_hi.is_negative() {
            continue;
        }
        for c in continued_fraction_candidates(&r.re, &r.rad) {
            if !cands.contains(&c) {
                cands.push(c);
            }
        }
    }
    cands
}

/// Best rational approximations of `x` with error within a few radii.
fn continued_fraction_candidates(x: &Rational, rad: &Rational) -> Vec<Rational> {
    let tol = rad * Rational::from_integer(4.into()) + crate::rational::pow2(-38);
    let mut out = Vec::new();
    // convergents of the continued fraction of x
    let mut a = x.clone();
    let mut h1 = Rational::one();
    let mut h0 = Rational::zero();
    let mut k1 = Rational::zero();
    let mut k0 = Rational::one();
    for _ in 0..24 {
        let ai = a.floor();
        let h = &ai * &h1 + &h0;
        let k = &ai * &k1 + &k0;
        if !k.is_zero() {
            let conv = &h / &k;
            if (&conv - x).abs() <= tol && !out.contains(&conv) {
                out.push(conv);
            }
        }
        let frac = &a - &ai;
        if frac.is_zero() {
            break;
        }
        a = Rational::one() / frac;
        h0 = h1;
        h1 = h;
        k0 = k1;
        k1 = k;
        if h1.numer().bits() > 64 {
            break;
        }
    }
    out
}
