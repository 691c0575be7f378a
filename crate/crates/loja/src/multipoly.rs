//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Terms are kept in a map ordered by graded lexicographic monomial order
//! (total degree first, then the exponent vector with earlier variables
//! weighing more). That order is also the canonical serialization order.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::ball::CBall;
use crate::error::{Error, Result};
use crate::rational::{rational_to_f64, Rational};

/// Exponent vector; length always equals the ambient variable count.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn is_constant(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree / per-variable degrees; `None` encodes -infinity (zero polynomial).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Degrees {
    pub total: Option<u32>,
    pub per_var: Vec<Option<u32>>,
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        MultiPoly {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            terms: BTreeMap::new(),
        }
    }

    pub fn zero_owned(vars: Vec<String>) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial(vec![0; p.vars.len()]), c);
        }
        p
    }

    pub fn one(vars: &[&str]) -> Self {
        Self::constant(vars, Rational::one())
    }

    /// The i-th variable as a polynomial.
    pub fn var(vars: &[&str], i: usize) -> Self {
        let mut p = Self::zero(vars);
        let mut exp = vec![0; p.vars.len()];
        exp[i] = 1;
        p.terms.insert(Monomial(exp), Rational::one());
        p
    }

    pub fn from_terms(
        vars: &[&str],
        terms: impl IntoIterator<Item = (Vec<u32>, Rational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (exp, c) in terms {
            assert_eq!(exp.len(), p.vars.len(), "exponent vector length mismatch");
            p.add_term(Monomial(exp), c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_constant())
    }

    /// Constant term value (zero if absent).
    pub fn constant_value(&self) -> Rational {
        self.terms
            .get(&Monomial(vec![0; self.vars.len()]))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars == other.vars {
            Ok(())
        } else {
            Err(Error::VariableMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero_owned(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let exp: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                out.add_term(Monomial(exp), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn mul_scalar(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero_owned(self.vars.clone());
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut out = Self::constant(
            &self.vars.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
            Rational::one(),
        );
        for _ in 0..e {
            out = out.mul(self).expect("same vars");
        }
        out
    }

    pub fn degrees(&self) -> Degrees {
        if self.is_zero() {
            return Degrees {
                total: None,
                per_var: vec![None; self.vars.len()],
            };
        }
        let total = self.terms.keys().map(|m| m.total_degree()).max();
        let per_var = (0..self.vars.len())
            .map(|i| self.terms.keys().map(|m| m.0[i]).max())
            .collect();
        Degrees { total, per_var }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.degrees().total
    }

    /// Leading term under the graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Scale so the graded-lex leading coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = Rational::one() / c.clone();
                self.mul_scalar(&inv)
            }
        }
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero_owned(self.vars.clone());
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let mut exp = m.0.clone();
            exp[i] -= 1;
            out.add_term(Monomial(exp), c * Rational::from_integer(m.0[i].into()));
        }
        out
    }

    /// Exact division; `None` when the divisor does not divide exactly.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if self.vars != d.vars || d.is_zero() {
            return None;
        }
        let mut rem = self.clone();
        let mut quot = Self::zero_owned(self.vars.clone());
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().map(|(m, c)| (m.clone(), c.clone()))?;
            let mut exp = Vec::with_capacity(rm.0.len());
            for (a, b) in rm.0.iter().zip(&dm.0) {
                if a < b {
                    return None;
                }
                exp.push(a - b);
            }
            let qc = rc / dc.clone();
            let qm = Monomial(exp);
            let mut t = Self::zero_owned(self.vars.clone());
            t.terms.insert(qm.clone(), qc.clone());
            rem = rem.sub(&t.mul(d).unwrap()).unwrap();
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    /// p(M w): substitute each variable by the corresponding row of `m`
    /// applied to the new variables. `m` must be square and invertible.
    pub fn linear_change(&self, m: &[Vec<Rational>]) -> Result<Self> {
        let n = self.vars.len();
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            return Err(Error::BadParameter("matrix dimension mismatch".into()));
        }
        if !matrix_invertible(m) {
            return Err(Error::SingularMatrix);
        }
        let vars_ref: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        // Linear forms replacing each old variable.
        let forms: Vec<MultiPoly> = (0..n)
            .map(|i| {
                let mut f = Self::zero(&vars_ref);
                for (j, c) in m[i].iter().enumerate() {
                    if !c.is_zero() {
                        let mut exp = vec![0; n];
                        exp[j] = 1;
                        f.add_term(Monomial(exp), c.clone());
                    }
                }
                f
            })
            .collect();
        // Cache powers of each form as they come up.
        let mut powers: Vec<Vec<MultiPoly>> = forms
            .iter()
            .map(|f| vec![Self::one(&vars_ref), f.clone()])
            .collect();
        let mut out = Self::zero_owned(self.vars.clone());
        for (mono, c) in &self.terms {
            let mut t = Self::constant(&vars_ref, c.clone());
            for (i, &e) in mono.0.iter().enumerate() {
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&forms[i]).unwrap();
                    powers[i].push(next);
                }
                t = t.mul(&powers[i][e as usize]).unwrap();
            }
            out = out.add(&t).unwrap();
        }
        Ok(out)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rational_to_f64(c), 0.0);
            for (i, &e) in m.0.iter().enumerate() {
                t *= point[i].powu(e);
            }
            acc += t;
        }
        acc
    }

    /// Certified evaluation: the returned ball contains the exact value of
    /// the polynomial over every point of the input balls.
    pub fn eval_ball(&self, point: &[CBall], prec: u32) -> CBall {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = CBall::zero();
        for (m, c) in &self.terms {
            let mut t = CBall::from_rational(c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&point[i]).round(prec);
                }
            }
            acc = acc.add(&t).round(prec);
        }
        acc
    }

    /// Collect the polynomial as a dense univariate polynomial in variable
    /// `which` (low degree first) with the other coordinates fixed.
    pub fn univariate_slice(&self, which: usize, others: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(others.len() + 1, self.vars.len());
        let deg = self
            .terms
            .keys()
            .map(|m| m.0[which] as usize)
            .max()
            .unwrap_or(0);
        let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (m, c) in &self.terms {
            let mut t = Complex64::new(rational_to_f64(c), 0.0);
            let mut oi = 0;
            for (i, &e) in m.0.iter().enumerate() {
                if i == which {
                    continue;
                }
                t *= others[oi].powu(e);
                oi += 1;
            }
            out[m.0[which] as usize] += t;
        }
        out
    }
}

fn matrix_invertible(m: &[Vec<Rational>]) -> bool {
    // Gaussian elimination over Q.
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero());
        let pivot = match pivot {
            Some(p) => p,
            None => return false,
        };
        a.swap(col, pivot);
        let pv = a[col][col].clone();
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let factor = &a[r][col] / &pv;
            for c in col..n {
                let sub = &factor * &a[col][c];
                a[r][c] = &a[r][c] - sub;
            }
        }
    }
    true
}

impl std::fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "MultiPoly({})", self)
    }
}

// Canonical serializer: graded-lex descending, explicit `*` and `^`.
impl std::fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_constant() {
                parts.push(crate::rational::rational_to_string(&abs));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => parts.push(self.vars[i].clone()),
                    _ => parts.push(format!("{}^{}", self.vars[i], e)),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}
