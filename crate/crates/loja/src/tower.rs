//! Algebraic extension towers with exact zero tests.
//!
//! A `FieldTower` is a chain Q = T_0 ⊂ T_1 ⊂ ... where each level adjoins a
//! root of a monic squarefree polynomial over the level below. Minimal
//! polynomials are *not* certified irreducible, so a tower may be a product
//! of fields; arithmetic stays exact regardless, and inversion either
//! succeeds, proves the element zero, or discovers a factorization of some
//! level's minimal polynomial (a `Split`), after which the computation is
//! re-run on the two smaller towers. This is the usual dynamic-evaluation
//! scheme and it is what makes every degree decision downstream exact.
//!
//! Elements are recursive dense polynomials in the generators; the complex
//! embedding used for output picks one root per level, deterministically
//! (lexicographically smallest enclosure center, refined until separated).

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::ball::{isolate_roots, CBall};
use crate::error::{Error, Result};
use crate::rational::{pow2, Rational};

/// Element representation: a rational at depth 0, otherwise a dense
/// polynomial in the top generator with coefficients one level down.
/// Vectors always have length equal to the level degree.
#[derive(Clone, PartialEq, Debug)]
pub(crate) enum Node {
    Rat(Rational),
    Poly(Vec<Node>),
}

/// A discovered factorization of the minimal polynomial at `level`:
/// the computation must be redone over the split towers.
#[derive(Clone, Debug)]
pub(crate) struct Split {
    pub level: usize,
    pub factor: Vec<Node>, // monic, coefficients at depth `level`
}

pub(crate) type TRes<T> = std::result::Result<T, Split>;

#[derive(Debug)]
struct Level {
    name: String,
    minpoly: Vec<Node>, // monic, low degree first, coefficients at the level below
    degree: usize,
    /// Ramified levels adjoin t^q - rho to absorb a reparametrization orbit;
    /// they do not contribute to conjugacy counts.
    ramified: bool,
}

pub struct FieldTower {
    levels: Vec<Level>,
    enclosures: Mutex<BTreeMap<u32, Arc<Vec<CBall>>>>,
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.levels.len() == other.levels.len()
            && self.levels.iter().zip(&other.levels).all(|(a, b)| {
                a.name == b.name && a.minpoly == b.minpoly && a.ramified == b.ramified
            })
    }
}

impl std::fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FieldTower[")?;
        for (i, l) in self.levels.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(
                f,
                "{}: deg {}{}",
                l.name,
                l.degree,
                if l.ramified { " (ram)" } else { "" }
            )?;
        }
        write!(f, "]")
    }
}

impl FieldTower {
    /// The rationals.
    pub fn rationals() -> Arc<FieldTower> {
        Arc::new(FieldTower {
            levels: Vec::new(),
            enclosures: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Product of the level degrees.
    pub fn total_degree(&self) -> usize {
        self.levels.iter().map(|l| l.degree).product()
    }

    /// Product of the degrees of the non-ramified levels: the number of
    /// conjugate embeddings a generic element distinguishes.
    pub fn conjugacy_degree(&self) -> usize {
        self.levels
            .iter()
            .filter(|l| !l.ramified)
            .map(|l| l.degree)
            .product()
    }

    pub fn level_names(&self) -> Vec<String> {
        self.levels.iter().map(|l| l.name.clone()).collect()
    }

    pub fn level_degrees(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.degree).collect()
    }

    // ---- node construction ----

    pub(crate) fn zero_node_at(&self, depth: usize) -> Node {
        if depth == 0 {
            Node::Rat(Rational::zero())
        } else {
            let d = self.levels[depth - 1].degree;
            Node::Poly(vec![self.zero_node_at(depth - 1); d])
        }
    }

    pub(crate) fn zero_node(&self) -> Node {
        self.zero_node_at(self.depth())
    }

    pub(crate) fn rat_node_at(&self, depth: usize, r: Rational) -> Node {
        if depth == 0 {
            Node::Rat(r)
        } else {
            let d = self.levels[depth - 1].degree;
            let mut v = vec![self.zero_node_at(depth - 1); d];
            v[0] = self.rat_node_at(depth - 1, r);
            Node::Poly(v)
        }
    }

    pub(crate) fn rat_node(&self, r: Rational) -> Node {
        self.rat_node_at(self.depth(), r)
    }

    /// Lift a node from `depth` to full height.
    pub(crate) fn lift_node(&self, node: Node, from_depth: usize) -> Node {
        let mut n = node;
        for d in from_depth..self.depth() {
            let deg = self.levels[d].degree;
            let mut v = vec![self.zero_node_at(d); deg];
            v[0] = n;
            n = Node::Poly(v);
        }
        n
    }

    /// The generator of level `level` (0-based) as a full-height node.
    pub(crate) fn gen_node(&self, level: usize) -> Node {
        let deg = self.levels[level].degree;
        let mut v = vec![self.zero_node_at(level); deg];
        if deg >= 2 {
            v[1] = self.rat_node_at(level, Rational::one());
        }
        // degree-1 levels cannot occur; guarded at extension time
        self.lift_node(Node::Poly(v), level + 1)
    }

    // ---- node arithmetic ----

    pub(crate) fn nis_zero(node: &Node) -> bool {
        match node {
            Node::Rat(r) => r.is_zero(),
            Node::Poly(v) => v.iter().all(Self::nis_zero),
        }
    }

    pub(crate) fn nadd(&self, a: &Node, b: &Node) -> Node {
        match (a, b) {
            (Node::Rat(x), Node::Rat(y)) => Node::Rat(x + y),
            (Node::Poly(x), Node::Poly(y)) => {
                Node::Poly(x.iter().zip(y).map(|(p, q)| self.nadd(p, q)).collect())
            }
            _ => panic!("node height mismatch"),
        }
    }

    pub(crate) fn nsub(&self, a: &Node, b: &Node) -> Node {
        self.nadd(a, &self.nneg(b))
    }

    pub(crate) fn nneg(&self, a: &Node) -> Node {
        match a {
            Node::Rat(x) => Node::Rat(-x.clone()),
            Node::Poly(v) => Node::Poly(v.iter().map(|n| self.nneg(n)).collect()),
        }
    }

    pub(crate) fn nmul_rat(&self, a: &Node, c: &Rational) -> Node {
        match a {
            Node::Rat(x) => Node::Rat(x * c),
            Node::Poly(v) => Node::Poly(v.iter().map(|n| self.nmul_rat(n, c)).collect()),
        }
    }

    fn depth_of(node: &Node) -> usize {
        match node {
            Node::Rat(_) => 0,
            Node::Poly(v) => 1 + Self::depth_of(&v[0]),
        }
    }

    pub(crate) fn nmul(&self, a: &Node, b: &Node) -> Node {
        let depth = Self::depth_of(a);
        self.nmul_at(depth, a, b)
    }

    fn nmul_at(&self, depth: usize, a: &Node, b: &Node) -> Node {
        match (a, b) {
            (Node::Rat(x), Node::Rat(y)) => Node::Rat(x * y),
            (Node::Poly(x), Node::Poly(y)) => {
                let d = self.levels[depth - 1].degree;
                let mut conv = vec![self.zero_node_at(depth - 1); 2 * d - 1];
                for (i, xi) in x.iter().enumerate() {
                    if Self::nis_zero(xi) {
                        continue;
                    }
                    for (j, yj) in y.iter().enumerate() {
                        if Self::nis_zero(yj) {
                            continue;
                        }
                        let prod = self.nmul_at(depth - 1, xi, yj);
                        conv[i + j] = self.nadd(&conv[i + j], &prod);
                    }
                }
                Node::Poly(self.reduce_vec(depth, conv))
            }
            _ => panic!("node height mismatch"),
        }
    }

    /// Reduce a coefficient vector modulo the minimal polynomial of
    /// `levels[depth-1]` and pad to the level degree.
    fn reduce_vec(&self, depth: usize, mut v: Vec<Node>) -> Vec<Node> {
        let level = &self.levels[depth - 1];
        let d = level.degree;
        while v.len() > d {
            let top = v.pop().unwrap();
            if Self::nis_zero(&top) {
                continue;
            }
            let k = v.len() - d; // x^(d+k) = -(minpoly tail) * x^k
            for i in 0..d {
                let t = self.nmul_at(depth - 1, &top, &level.minpoly[i]);
                v[k + i] = self.nsub(&v[k + i], &t);
            }
        }
        while v.len() < d {
            v.push(self.zero_node_at(depth - 1));
        }
        v
    }

    /// Inverse of a canonically nonzero node; discovers splits.
    pub(crate) fn ninv(&self, a: &Node) -> TRes<Node> {
        let depth = Self::depth_of(a);
        self.ninv_at(depth, a)
    }

    fn ninv_at(&self, depth: usize, a: &Node) -> TRes<Node> {
        match a {
            Node::Rat(r) => {
                assert!(!r.is_zero(), "inverting canonical zero");
                Ok(Node::Rat(Rational::one() / r.clone()))
            }
            Node::Poly(v) => {
                // extended Euclid of a against the level minimal polynomial
                let level = depth - 1;
                let m = self.levels[level].minpoly.clone();
                let mut r0 = m;
                let mut r1 = v.clone();
                tu_trim(&mut r1);
                assert!(!r1.is_empty(), "inverting canonical zero");
                let mut s0 = vec![];
                let mut s1 = vec![self.rat_node_at(level, Rational::one())];
                while !r1.is_empty() {
                    let (q, r2) = self.tu_divrem(level, &r0, &r1)?;
                    let qs1 = self.tu_mul(level, &q, &s1);
                    let s2 = self.tu_sub(level, &s0, &qs1);
                    r0 = r1;
                    r1 = r2;
                    s0 = s1;
                    s1 = s2;
                }
                if r0.len() == 1 {
                    let c_inv = self.ninv_at(level, &r0[0])?;
                    let inv_vec: Vec<Node> =
                        s0.iter().map(|n| self.nmul_at(level, n, &c_inv)).collect();
                    Ok(Node::Poly(self.reduce_vec(depth, inv_vec)))
                } else {
                    // nontrivial common factor with the minimal polynomial
                    let factor = self.tu_monic(level, &r0)?;
                    Err(Split { level, factor })
                }
            }
        }
    }

    /// Exact zero/unit decision: Ok(false) means zero for every embedding,
    /// Ok(true) means nonzero for every embedding.
    pub(crate) fn unit_test(&self, a: &Node) -> TRes<bool> {
        if Self::nis_zero(a) {
            return Ok(false);
        }
        self.ninv(a).map(|_| true)
    }

    // ---- univariate polynomials over a sub-tower (low degree first) ----

    pub(crate) fn tu_trim_at(v: &mut Vec<Node>) {
        while v.last().map_or(false, Self::nis_zero) {
            v.pop();
        }
    }

    pub(crate) fn tu_add(&self, _depth: usize, a: &[Node], b: &[Node]) -> Vec<Node> {
        let mut out = Vec::with_capacity(a.len().max(b.len()));
        for i in 0..a.len().max(b.len()) {
            let x = a.get(i);
            let y = b.get(i);
            out.push(match (x, y) {
                (Some(x), Some(y)) => self.nadd(x, y),
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => unreachable!(),
            });
        }
        tu_trim(&mut out);
        out
    }

    pub(crate) fn tu_sub(&self, depth: usize, a: &[Node], b: &[Node]) -> Vec<Node> {
        let nb: Vec<Node> = b.iter().map(|n| self.nneg(n)).collect();
        self.tu_add(depth, a, &nb)
    }

    pub(crate) fn tu_mul(&self, depth: usize, a: &[Node], b: &[Node]) -> Vec<Node> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero_node_at(depth); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if Self::nis_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if Self::nis_zero(y) {
                    continue;
                }
                let p = self.nmul_at(depth, x, y);
                out[i + j] = self.nadd(&out[i + j], &p);
            }
        }
        tu_trim(&mut out);
        out
    }

    /// Division with remainder; the divisor's leading coefficient is
    /// inverted (which may discover a split).
    pub(crate) fn tu_divrem(
        &self,
        depth: usize,
        num: &[Node],
        den: &[Node],
    ) -> TRes<(Vec<Node>, Vec<Node>)> {
        let mut den = den.to_vec();
        tu_trim(&mut den);
        assert!(!den.is_empty(), "division by zero polynomial");
        let lead_inv = self.ninv_at(depth, den.last().unwrap())?;
        let mut r = num.to_vec();
        tu_trim(&mut r);
        let db = den.len() - 1;
        if r.len() <= db {
            return Ok((Vec::new(), r));
        }
        let mut q = vec![self.zero_node_at(depth); r.len() - db];
        while r.len() > db {
            let lr = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            let qc = self.nmul_at(depth, &lr, &lead_inv);
            for i in 0..=db {
                let t = self.nmul_at(depth, &den[i], &qc);
                r[shift + i] = self.nsub(&r[shift + i], &t);
            }
            q[shift] = qc;
            tu_trim(&mut r);
            if r.len() <= db {
                break;
            }
        }
        Ok((q, r))
    }

    pub(crate) fn tu_monic(&self, depth: usize, p: &[Node]) -> TRes<Vec<Node>> {
        let mut p = p.to_vec();
        tu_trim(&mut p);
        assert!(!p.is_empty());
        let inv = self.ninv_at(depth, p.last().unwrap())?;
        Ok(p.iter().map(|n| self.nmul_at(depth, n, &inv)).collect())
    }

    /// Monic gcd over the sub-tower at `depth`.
    pub(crate) fn tu_gcd(&self, depth: usize, a: &[Node], b: &[Node]) -> TRes<Vec<Node>> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        tu_trim(&mut x);
        tu_trim(&mut y);
        while !y.is_empty() {
            let (_, r) = self.tu_divrem(depth, &x, &y)?;
            x = y;
            y = r;
        }
        if x.is_empty() {
            return Ok(x);
        }
        self.tu_monic(depth, &x)
    }

    pub(crate) fn tu_derivative(&self, _depth: usize, p: &[Node]) -> Vec<Node> {
        let mut out: Vec<Node> = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| self.nmul_rat(c, &Rational::from_integer(i.into())))
            .collect();
        tu_trim(&mut out);
        out
    }

    /// Squarefree part (monic) of a nonzero polynomial over the sub-tower.
    pub(crate) fn tu_squarefree(&self, depth: usize, p: &[Node]) -> TRes<Vec<Node>> {
        let dp = self.tu_derivative(depth, p);
        if dp.is_empty() {
            return self.tu_monic(depth, p);
        }
        let g = self.tu_gcd(depth, p, &dp)?;
        if g.len() <= 1 {
            return self.tu_monic(depth, p);
        }
        let (q, r) = self.tu_divrem(depth, p, &g)?;
        debug_assert!(r.is_empty());
        self.tu_monic(depth, &q)
    }

    pub(crate) fn tu_eval(&self, depth: usize, p: &[Node], x: &Node) -> Node {
        let mut acc = self.zero_node_at(depth);
        for c in p.iter().rev() {
            acc = self.nadd(&self.nmul_at(depth, &acc, x), c);
        }
        acc
    }

    // ---- extension and splitting ----

    /// Adjoin a root of a monic squarefree polynomial given at full height.
    /// Returns the new tower and the generator node (at the new height).
    pub(crate) fn extend_with(
        self: &Arc<Self>,
        minpoly_monic: Vec<Node>,
        ramified: bool,
    ) -> (Arc<FieldTower>, Node) {
        let deg = minpoly_monic.len() - 1;
        assert!(deg >= 2, "degree-1 extensions are resolved explicitly");
        let name = format!("a{}", self.depth() + 1);
        let mut levels: Vec<Level> = self
            .levels
            .iter()
            .map(|l| Level {
                name: l.name.clone(),
                minpoly: l.minpoly.clone(),
                degree: l.degree,
                ramified: l.ramified,
            })
            .collect();
        levels.push(Level {
            name,
            minpoly: minpoly_monic,
            degree: deg,
            ramified,
        });
        let tower = Arc::new(FieldTower {
            levels,
            enclosures: Mutex::new(BTreeMap::new()),
        });
        let gen = tower.gen_node(tower.depth() - 1);
        (tower, gen)
    }

    /// Split the tower at `level` using a discovered monic factor of that
    /// level's minimal polynomial. Returns both quotient towers together
    /// with node mappers from this tower.
    pub(crate) fn split_at(self: &Arc<Self>, split: &Split) -> Vec<(Arc<FieldTower>, NodeMapper)> {
        let level = split.level;
        let m = &self.levels[level].minpoly;
        let (q, r) = self
            .tu_divrem(level, m, &split.factor)
            .expect("factor is monic; division cannot split");
        assert!(r.is_empty(), "factor must divide the minimal polynomial");
        let mut out = Vec::new();
        for part in [split.factor.clone(), q] {
            let deg = part.len() - 1;
            if deg == 0 {
                continue;
            }
            let mut levels: Vec<Level> = Vec::with_capacity(self.levels.len());
            for (i, l) in self.levels.iter().enumerate() {
                let minpoly = if i == level {
                    part.clone()
                } else {
                    l.minpoly.clone()
                };
                levels.push(Level {
                    name: l.name.clone(),
                    minpoly,
                    degree: if i == level { deg } else { l.degree },
                    ramified: l.ramified,
                });
            }
            // re-reduce the minimal polynomials of the levels above
            let tower = Arc::new(FieldTower {
                levels,
                enclosures: Mutex::new(BTreeMap::new()),
            });
            let mapper = NodeMapper {
                level,
                new_minpoly: part.clone(),
                new_degree: deg,
            };
            let mut fixed = tower;
            for j in level + 1..fixed.depth() {
                let mapped: Vec<Node> = fixed.levels[j]
                    .minpoly
                    .iter()
                    .map(|n| mapper.map_at(&fixed, j, n))
                    .collect();
                // rebuild with the mapped minpoly
                let mut levels: Vec<Level> = fixed
                    .levels
                    .iter()
                    .map(|l| Level {
                        name: l.name.clone(),
                        minpoly: l.minpoly.clone(),
                        degree: l.degree,
                        ramified: l.ramified,
                    })
                    .collect();
                levels[j].minpoly = mapped;
                fixed = Arc::new(FieldTower {
                    levels,
                    enclosures: Mutex::new(BTreeMap::new()),
                });
            }
            out.push((fixed, mapper));
        }
        out
    }

    // ---- embeddings ----

    /// Deterministic complex enclosures of the level generators, refined so
    /// every radius is at most 2^-prec.
    pub(crate) fn gen_enclosures(self: &Arc<Self>, prec: u32) -> Arc<Vec<CBall>> {
        if let Some(hit) = self.enclosures.lock().unwrap().get(&prec) {
            return hit.clone();
        }
        let mut work = (prec + 16).max(48);
        let result = loop {
            match self.try_gen_enclosures(prec, work) {
                Some(g) => break Arc::new(g),
                None => {
                    work *= 2;
                    assert!(work <= 1 << 16, "generator enclosure refinement diverged");
                }
            }
        };
        self.enclosures.lock().unwrap().insert(prec, result.clone());
        result
    }

    fn try_gen_enclosures(&self, prec: u32, work: u32) -> Option<Vec<CBall>> {
        let mut gens: Vec<CBall> = Vec::with_capacity(self.depth());
        for (k, level) in self.levels.iter().enumerate() {
            let coeffs: Vec<CBall> = level
                .minpoly
                .iter()
                .map(|n| self.node_enclosure_raw(k, n, &gens, work))
                .collect();
            let roots = isolate_roots(&coeffs, prec.max(work / 2), work)?;
            let chosen = pick_lex_min(&roots)?;
            gens.push(chosen);
        }
        Some(gens)
    }

    /// Horner evaluation of a node against generator enclosures.
    fn node_enclosure_raw(&self, depth: usize, node: &Node, gens: &[CBall], prec: u32) -> CBall {
        match node {
            Node::Rat(r) => CBall::from_rational(r.clone()),
            Node::Poly(v) => {
                let g = &gens[depth - 1];
                let mut acc = CBall::zero();
                for c in v.iter().rev() {
                    let cv = self.node_enclosure_raw(depth - 1, c, gens, prec);
                    acc = acc.mul(g).add(&cv).round(prec);
                }
                acc
            }
        }
    }

    pub(crate) fn node_enclosure(self: &Arc<Self>, node: &Node, bits: u32) -> CBall {
        let mut work = bits + 16;
        let target = pow2(-(bits as i64));
        loop {
            let gens = self.gen_enclosures(work);
            let v = self.node_enclosure_raw(self.depth(), node, &gens, work);
            if v.rad <= target || work >= 1 << 14 {
                return v;
            }
            work *= 2;
        }
    }
}

fn tu_trim(v: &mut Vec<Node>) {
    FieldTower::tu_trim_at(v)
}

/// Pick the lexicographically (re, im) smallest disc; `None` when any
/// needed comparison is still undecided at this precision.
fn pick_lex_min(roots: &[CBall]) -> Option<CBall> {
    let thresh = pow2(-220);
    let mut best: Option<&CBall> = None;
    for r in roots {
        match best {
            None => best = Some(r),
            Some(b) => {
                let re_lo_r = &r.re - &r.rad;
                let re_hi_r = &r.re + &r.rad;
                let re_lo_b = &b.re - &b.rad;
                let re_hi_b = &b.re + &b.rad;
                if re_hi_r < re_lo_b {
                    best = Some(r);
                } else if re_hi_b < re_lo_r {
                    // keep b
                } else if r.rad <= thresh && b.rad <= thresh {
                    // treat real parts as equal, decide on imaginary parts
                    let im_hi_r = &r.im + &r.rad;
                    let im_lo_b = &b.im - &b.rad;
                    let im_hi_b = &b.im + &b.rad;
                    let im_lo_r = &r.im - &r.rad;
                    if im_hi_r < im_lo_b {
                        best = Some(r);
                    } else if im_hi_b < im_lo_r {
                        // keep b
                    } else {
                        return None;
                    }
                } else {
                    return None;
                }
            }
        }
    }
    best.cloned()
}

// ---------------------------------------------------------------------------

/// Maps nodes from a tower into one of its split quotients.
#[derive(Clone)]
pub(crate) struct NodeMapper {
    level: usize,
    new_minpoly: Vec<Node>,
    new_degree: usize,
}

impl NodeMapper {
    /// Map a node given at `depth` in the old tower into the new tower.
    pub(crate) fn map(&self, new_tower: &Arc<FieldTower>, node: &Node) -> Node {
        self.map_at(new_tower, new_tower.depth(), node)
    }

    fn map_at(&self, new_tower: &Arc<FieldTower>, depth: usize, node: &Node) -> Node {
        match node {
            Node::Rat(_) => node.clone(),
            Node::Poly(v) => {
                if depth == self.level + 1 {
                    // reduce the polynomial in this generator mod the new minpoly
                    let mut coeffs: Vec<Node> = v.clone();
                    tu_trim(&mut coeffs);
                    let reduced = self.rem_new(new_tower, coeffs);
                    Node::Poly(reduced)
                } else {
                    Node::Poly(
                        v.iter()
                            .map(|c| self.map_at(new_tower, depth - 1, c))
                            .collect(),
                    )
                }
            }
        }
    }

    fn rem_new(&self, new_tower: &Arc<FieldTower>, mut v: Vec<Node>) -> Vec<Node> {
        let d = self.new_degree;
        // coefficients live at depth `level` and are unaffected by the split
        while v.len() > d {
            let top = v.pop().unwrap();
            if FieldTower::nis_zero(&top) {
                continue;
            }
            let k = v.len() - d;
            for i in 0..d {
                let t = new_tower.nmul(&top, &self.new_minpoly[i]);
                v[k + i] = new_tower.nsub(&v[k + i], &t);
            }
        }
        while v.len() < d {
            v.push(new_tower.zero_node_at(self.level));
        }
        v
    }
}

// ---------------------------------------------------------------------------

/// An exact algebraic number: an element of an extension tower, with a
/// certified complex enclosure available at any requested precision.
#[derive(Clone)]
pub struct AlgebraicNumber {
    tower: Arc<FieldTower>,
    node: Node,
}

impl AlgebraicNumber {
    pub fn from_rational(tower: &Arc<FieldTower>, r: Rational) -> Self {
        AlgebraicNumber {
            tower: tower.clone(),
            node: tower.rat_node(r),
        }
    }

    pub(crate) fn from_node(tower: &Arc<FieldTower>, node: Node) -> Self {
        AlgebraicNumber {
            tower: tower.clone(),
            node,
        }
    }

    pub(crate) fn node(&self) -> &Node {
        &self.node
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    /// Exact zero test from the coordinates alone.
    pub fn is_zero(&self) -> bool {
        FieldTower::nis_zero(&self.node)
    }

    /// Dense coordinates over the tower basis (products of generator
    /// powers), innermost level varying fastest.
    pub fn coordinates(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.tower.total_degree().max(1));
        flatten(&self.node, &mut out);
        out
    }

    /// A certified disc containing the value, radius at most 2^-bits.
    pub fn enclosure(&self, bits: u32) -> CBall {
        self.tower.node_enclosure(&self.node, bits)
    }

    fn same_tower(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.tower, &other.tower) || *self.tower == *other.tower {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_tower(other)?;
        Ok(Self::from_node(
            &self.tower,
            self.tower.nadd(&self.node, &other.node),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_tower(other)?;
        Ok(Self::from_node(
            &self.tower,
            self.tower.nsub(&self.node, &other.node),
        ))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_tower(other)?;
        Ok(Self::from_node(
            &self.tower,
            self.tower.nmul(&self.node, &other.node),
        ))
    }

    pub fn neg(&self) -> Self {
        Self::from_node(&self.tower, self.tower.nneg(&self.node))
    }

    /// Exact inverse. `Ok(None)` for zero; `Err(ZeroDivisor)` when the tower
    /// is a product of fields and the element vanishes on part of it.
    pub fn try_inv(&self) -> Result<Option<Self>> {
        if self.is_zero() {
            return Ok(None);
        }
        match self.tower.ninv(&self.node) {
            Ok(n) => Ok(Some(Self::from_node(&self.tower, n))),
            Err(_) => Err(Error::ZeroDivisor),
        }
    }
}

impl std::fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let e = self.enclosure(24);
        let c = e.center_f64();
        write!(f, "AlgebraicNumber(~{:.6}{:+.6}i)", c.re, c.im)
    }
}

fn flatten(node: &Node, out: &mut Vec<Rational>) {
    match node {
        Node::Rat(r) => out.push(r.clone()),
        Node::Poly(v) => {
            for n in v {
                flatten(n, out);
            }
        }
    }
}

// ---------------------------------------------------------------------------

/// Univariate polynomial with algebraic-number coefficients, used for the
/// minimal polynomials fed to `tower_extend` and the univariate slices the
/// expansion machinery produces.
#[derive(Clone, Debug)]
pub struct UniPolyExt {
    tower: Arc<FieldTower>,
    coeffs_low: Vec<AlgebraicNumber>, // low degree first, trimmed
}

impl UniPolyExt {
    /// Build from coefficients listed highest degree first.
    pub fn new(tower: &Arc<FieldTower>, coeffs_high_first: Vec<AlgebraicNumber>) -> Self {
        let mut low: Vec<AlgebraicNumber> = coeffs_high_first.into_iter().rev().collect();
        while low.last().map_or(false, |c| c.is_zero()) {
            low.pop();
        }
        UniPolyExt {
            tower: tower.clone(),
            coeffs_low: low,
        }
    }

    pub fn from_rationals(tower: &Arc<FieldTower>, coeffs_high_first: &[Rational]) -> Self {
        Self::new(
            tower,
            coeffs_high_first
                .iter()
                .map(|r| AlgebraicNumber::from_rational(tower, r.clone()))
                .collect(),
        )
    }

    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs_low.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs_low.is_empty() {
            None
        } else {
            Some(self.coeffs_low.len() - 1)
        }
    }

    /// Coefficients, highest degree first.
    pub fn coefficients(&self) -> Vec<AlgebraicNumber> {
        self.coeffs_low.iter().rev().cloned().collect()
    }

    pub(crate) fn nodes_low(&self) -> Vec<Node> {
        self.coeffs_low.iter().map(|c| c.node().clone()).collect()
    }

    pub(crate) fn from_nodes_low(tower: &Arc<FieldTower>, mut nodes: Vec<Node>) -> Self {
        tu_trim(&mut nodes);
        UniPolyExt {
            tower: tower.clone(),
            coeffs_low: nodes
                .into_iter()
                .map(|n| AlgebraicNumber::from_node(tower, n))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let depth = self.tower.depth();
        let s = self
            .tower
            .tu_add(depth, &self.nodes_low(), &other.nodes_low());
        Ok(Self::from_nodes_low(&self.tower, s))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let depth = self.tower.depth();
        let s = self
            .tower
            .tu_sub(depth, &self.nodes_low(), &other.nodes_low());
        Ok(Self::from_nodes_low(&self.tower, s))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let depth = self.tower.depth();
        let s = self
            .tower
            .tu_mul(depth, &self.nodes_low(), &other.nodes_low());
        Ok(Self::from_nodes_low(&self.tower, s))
    }

    pub fn eval(&self, x: &AlgebraicNumber) -> AlgebraicNumber {
        let depth = self.tower.depth();
        let n = self.tower.tu_eval(depth, &self.nodes_low(), x.node());
        AlgebraicNumber::from_node(&self.tower, n)
    }

    /// Certified evaluation at a complex ball.
    pub fn eval_ball(&self, point: &CBall, prec: u32) -> CBall {
        let coeffs: Vec<CBall> = self.coeffs_low.iter().map(|c| c.enclosure(prec)).collect();
        crate::ball::eval_poly_ball(&coeffs, point, prec)
    }
}

/// Adjoin a root of `minpoly` to `tower`.
///
/// Degree-1 polynomials resolve to their explicit root in the same tower.
/// Otherwise the tower is extended by the monic squarefree `minpoly` and
/// the new generator is returned; its enclosure isolates the root that is
/// smallest under the (re, im) lexicographic order of enclosure centers.
pub fn tower_extend(
    tower: &Arc<FieldTower>,
    minpoly: &UniPolyExt,
) -> Result<(Arc<FieldTower>, AlgebraicNumber)> {
    let nodes = minpoly.nodes_low();
    let deg = match nodes.len() {
        0 => return Err(Error::ZeroPolynomial),
        n => n - 1,
    };
    if deg == 0 {
        return Err(Error::BadParameter(
            "minimal polynomial must have degree >= 1".into(),
        ));
    }
    let depth = tower.depth();
    // squarefree check
    let deriv = tower.tu_derivative(depth, &nodes);
    match tower.tu_gcd(depth, &nodes, &deriv) {
        Ok(g) => {
            if g.len() > 1 {
                return Err(Error::NonSquarefree);
            }
        }
        Err(_) => return Err(Error::ZeroDivisor),
    }
    if deg == 1 {
        let inv = match tower.ninv(&nodes[1]) {
            Ok(i) => i,
            Err(_) => return Err(Error::ZeroDivisor),
        };
        let root = tower.nneg(&tower.nmul(&nodes[0], &inv));
        return Ok((tower.clone(), AlgebraicNumber::from_node(tower, root)));
    }
    let monic = match tower.tu_monic(depth, &nodes) {
        Ok(m) => m,
        Err(_) => return Err(Error::ZeroDivisor),
    };
    let (new_tower, gen) = tower.extend_with(monic, false);
    Ok((
        new_tower.clone(),
        AlgebraicNumber::from_node(&new_tower, gen),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_frac};

    #[test]
    fn linear_extension_resolves_explicitly() {
        let q = FieldTower::rationals();
        // t - 2
        let m = UniPolyExt::from_rationals(&q, &[rat(1), rat(-2)]);
        let (t2, root) = tower_extend(&q, &m).unwrap();
        assert_eq!(t2.depth(), 0);
        assert_eq!(root.coordinates(), vec![rat(2)]);
    }

    #[test]
    fn sqrt2_tower() {
        let q = FieldTower::rationals();
        // t^2 - 2
        let m = UniPolyExt::from_rationals(&q, &[rat(1), rat(0), rat(-2)]);
        let (t, gen) = tower_extend(&q, &m).unwrap();
        assert_eq!(t.total_degree(), 2);
        // chosen root is the lexicographically smallest: -sqrt(2)
        let e = gen.enclosure(40);
        let c = e.center_f64();
        assert!((c.re + 1.4142135623730951).abs() < 1e-9, "got {}", c.re);
        assert!(c.im.abs() < 1e-9);
        assert!(e.rad_f64() <= 2f64.powi(-40));

        // gen^2 == 2 exactly
        let sq = gen.mul(&gen).unwrap();
        let two = AlgebraicNumber::from_rational(&t, rat(2));
        assert!(sq.sub(&two).unwrap().is_zero());

        // refine further: radius shrinks
        let e2 = gen.enclosure(120);
        assert!(e2.rad < e.rad);
    }

    #[test]
    fn nested_tower_degree_multiplies() {
        let q = FieldTower::rationals();
        let m1 = UniPolyExt::from_rationals(&q, &[rat(1), rat(0), rat(-2)]);
        let (t1, g1) = tower_extend(&q, &m1).unwrap();
        // t^2 - 3 over Q(sqrt 2)
        let m2 = UniPolyExt::new(
            &t1,
            vec![
                AlgebraicNumber::from_rational(&t1, rat(1)),
                AlgebraicNumber::from_rational(&t1, rat(0)),
                AlgebraicNumber::from_rational(&t1, rat(-3)),
            ],
        );
        let (t2, g2) = tower_extend(&t1, &m2).unwrap();
        assert_eq!(t2.total_degree(), 4);
        // arithmetic across the lifted generator: (sqrt2 * sqrt3)^2 = 6
        let g1_lift = AlgebraicNumber::from_node(&t2, t2.lift_node(g1.node().clone(), 1));
        let prod = g1_lift.mul(&g2).unwrap();
        let six = AlgebraicNumber::from_rational(&t2, rat(6));
        assert!(prod.mul(&prod).unwrap().sub(&six).unwrap().is_zero());
    }

    #[test]
    fn non_squarefree_rejected() {
        let q = FieldTower::rationals();
        // (t-1)^2
        let m = UniPolyExt::from_rationals(&q, &[rat(1), rat(-2), rat(1)]);
        assert_eq!(tower_extend(&q, &m).unwrap_err(), Error::NonSquarefree);
    }

    #[test]
    fn unipoly_ring_ops() {
        let q = FieldTower::rationals();
        let m = UniPolyExt::from_rationals(&q, &[rat(1), rat(0), rat(-2)]);
        let (t, g) = tower_extend(&q, &m).unwrap();
        let one = AlgebraicNumber::from_rational(&t, rat(1));
        // p = x + g, r = x - g over the tower
        let p = UniPolyExt::new(&t, vec![one.clone(), g.clone()]);
        let r = UniPolyExt::new(&t, vec![one.clone(), g.neg()]);
        let prod = p.mul(&r).unwrap();
        // (x + g)(x - g) = x^2 - 2
        assert_eq!(prod.degree(), Some(2));
        let c = prod.coefficients();
        assert!(c[0].sub(&one).unwrap().is_zero());
        assert!(c[1].is_zero());
        assert!(c[2]
            .add(&AlgebraicNumber::from_rational(&t, rat(2)))
            .unwrap()
            .is_zero());
        // p + (-p) = 0
        let z = p.sub(&p).unwrap();
        assert!(z.is_zero());
        // evaluation at the generator: g + g = 2g
        let v = p.eval(&g);
        assert!(v.sub(&g.add(&g).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn zero_divisor_split_discovered() {
        let q = FieldTower::rationals();
        // t^2 - 1 is squarefree but reducible: Q[t]/(t^2-1) = Q x Q
        let m = UniPolyExt::from_rationals(&q, &[rat(1), rat(0), rat(-1)]);
        let (t, gen) = tower_extend(&q, &m).unwrap();
        // gen - 1 is a zero divisor
        let one = AlgebraicNumber::from_rational(&t, rat(1));
        let zd = gen.sub(&one).unwrap();
        assert!(!zd.is_zero());
        assert_eq!(zd.try_inv().unwrap_err(), Error::ZeroDivisor);
        // internal protocol: the split exposes the factor and both quotients work
        let split = match t.ninv(zd.node()) {
            Err(s) => s,
            Ok(_) => panic!("expected split"),
        };
        let parts = t.split_at(&split);
        assert_eq!(parts.len(), 2);
        for (sub, mapper) in parts {
            let mapped = mapper.map(&sub, zd.node());
            // in one factor the element is zero, in the other invertible
            if !FieldTower::nis_zero(&mapped) {
                assert!(sub.ninv(&mapped).is_ok());
            }
        }
    }

    #[test]
    fn eval_ball_at_algebraic_point() {
        // p = x evaluated at an enclosure of sqrt(2): contains the value
        // with radius comfortably below 2^-30 when asked for 64 bits
        let q = FieldTower::rationals();
        let m = UniPolyExt::from_rationals(&q, &[rat(1), rat(0), rat(-2)]);
        let (_t, gen) = tower_extend(&q, &m).unwrap();
        let point = gen.enclosure(64);
        let p = crate::parser::parse_poly("x", &["x"]).unwrap();
        let v = p.eval_ball(&[point], 64);
        let c = v.center_f64();
        assert!((c.re.abs() - 1.4142135623730951).abs() < 1e-12);
        assert!(v.rad_f64() <= 2f64.powi(-30));
    }

    #[test]
    fn zero_test_matches_enclosure() {
        let q = FieldTower::rationals();
        let m = UniPolyExt::from_rationals(&q, &[rat(1), rat(0), rat(-2)]);
        let (t, gen) = tower_extend(&q, &m).unwrap();
        // x = gen^2 - 2 is zero; enclosure of a nonzero element excludes 0
        let two = AlgebraicNumber::from_rational(&t, rat(2));
        let zero = gen.mul(&gen).unwrap().sub(&two).unwrap();
        assert!(zero.is_zero());
        let nz = gen
            .add(&AlgebraicNumber::from_rational(&t, rat_frac(1, 3)))
            .unwrap();
        assert!(!nz.is_zero());
        let e = nz.enclosure(80);
        assert!(!e.contains_zero());
    }
}
