//! Exact linear inequality systems over named rate variables whose
//! right-hand sides are affine combinations of symbolic constants.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use super::GeometryError;

pub type Rational = BigRational;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Σ consts[k]·A_k + constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Affine {
    pub consts: Vec<Rational>,
    pub constant: Rational,
}

impl Affine {
    pub fn zero(n_consts: usize) -> Self {
        Self {
            consts: vec![Rational::zero(); n_consts],
            constant: Rational::zero(),
        }
    }

    /// A single symbol with coefficient one.
    pub fn symbol(n_consts: usize, k: usize) -> Self {
        let mut a = Self::zero(n_consts);
        a.consts[k] = Rational::one();
        a
    }

    fn scaled(&self, s: &Rational) -> Self {
        Self {
            consts: self.consts.iter().map(|c| c * s).collect(),
            constant: &self.constant * s,
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            consts: self
                .consts
                .iter()
                .zip(&other.consts)
                .map(|(a, b)| a + b)
                .collect(),
            constant: &self.constant + &other.constant,
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-Rational::one()))
    }

    /// Numeric value for concrete constant values.
    pub fn eval(&self, values: &[Rational]) -> Rational {
        self.consts
            .iter()
            .zip(values)
            .fold(self.constant.clone(), |acc, (c, v)| acc + c * v)
    }
}

/// coef · vars (≤ or =) rhs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Row {
    pub coef: Vec<Rational>,
    pub rhs: Affine,
}

impl Row {
    fn scaled(&self, s: &Rational) -> Self {
        Self {
            coef: self.coef.iter().map(|c| c * s).collect(),
            rhs: self.rhs.scaled(s),
        }
    }

    fn add(&self, other: &Self) -> Self {
        Self {
            coef: self.coef.iter().zip(&other.coef).map(|(a, b)| a + b).collect(),
            rhs: self.rhs.add(&other.rhs),
        }
    }

    /// Scales by a positive factor so the first nonzero coefficient is ±1.
    fn normalized(&self) -> Self {
        match self.coef.iter().find(|c| !c.is_zero()) {
            Some(lead) => self.scaled(&lead.abs().recip()),
            None => self.clone(),
        }
    }

    fn without(&self, idx: usize) -> Self {
        let mut coef = self.coef.clone();
        coef.remove(idx);
        Self {
            coef,
            rhs: self.rhs.clone(),
        }
    }

    fn is_trivial_lhs(&self) -> bool {
        self.coef.iter().all(Zero::is_zero)
    }

    /// coef·point − rhs(values) for a candidate point.
    pub fn slack(&self, point: &[Rational], values: &[Rational]) -> Rational {
        self.rhs.eval(values)
            - self
                .coef
                .iter()
                .zip(point)
                .fold(Rational::zero(), |acc, (c, x)| acc + c * x)
    }
}

/// Assumed relation `lhs ≤ rhs` between symbolic constants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolFact {
    pub lhs: Affine,
    pub rhs: Affine,
}

impl SymbolFact {
    fn slack(&self) -> Affine {
        self.rhs.sub(&self.lhs)
    }
}

/// A system of `≤` rows and `=` rows over named variables.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub vars: Vec<String>,
    pub consts: Vec<String>,
    pub ineqs: Vec<Row>,
    pub eqs: Vec<Row>,
    /// Variables whose sign constraint is part of the domain and so is
    /// implicit once redundant rows are removed.
    pub nonneg_vars: Vec<String>,
    /// Relations among constants available to [`remove_redundant`].
    pub facts: Vec<SymbolFact>,
}

impl LinearSystem {
    pub fn new(vars: &[&str], consts: &[&str]) -> Self {
        Self {
            vars: vars.iter().map(|s| s.to_string()).collect(),
            consts: consts.iter().map(|s| s.to_string()).collect(),
            ineqs: Vec::new(),
            eqs: Vec::new(),
            nonneg_vars: Vec::new(),
            facts: Vec::new(),
        }
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn const_index(&self, name: &str) -> Option<usize> {
        self.consts.iter().position(|v| v == name)
    }

    /// Builds a row from (name, integer coefficient) lists.
    pub fn row(&self, lhs: &[(&str, i64)], rhs: &[(&str, i64)], constant: i64) -> Row {
        let mut coef = vec![Rational::zero(); self.vars.len()];
        for (name, c) in lhs {
            let i = self.var_index(name).expect("unknown variable in row literal");
            coef[i] += rat(*c);
        }
        let mut r = Affine::zero(self.consts.len());
        for (name, c) in rhs {
            let k = self.const_index(name).expect("unknown constant in row literal");
            r.consts[k] += rat(*c);
        }
        r.constant = rat(constant);
        Row { coef, rhs: r }
    }

    pub fn push_ineq(&mut self, lhs: &[(&str, i64)], rhs: &[(&str, i64)]) {
        let row = self.row(lhs, rhs, 0);
        self.ineqs.push(row);
    }

    pub fn push_eq(&mut self, lhs: &[(&str, i64)], rhs: &[(&str, i64)]) {
        let row = self.row(lhs, rhs, 0);
        self.eqs.push(row);
    }

    pub fn push_fact(&mut self, lhs: &[&str], rhs: &[&str]) {
        let n = self.consts.len();
        let build = |names: &[&str]| {
            names.iter().fold(Affine::zero(n), |acc, name| {
                let k = self.const_index(name).expect("unknown constant in fact");
                acc.add(&Affine::symbol(n, k))
            })
        };
        let fact = SymbolFact {
            lhs: build(lhs),
            rhs: build(rhs),
        };
        self.facts.push(fact);
    }

    /// True if the point satisfies every row for the given constant values.
    pub fn satisfied_by(&self, point: &[Rational], values: &[Rational]) -> bool {
        self.ineqs.iter().all(|r| !r.slack(point, values).is_negative())
            && self.eqs.iter().all(|r| r.slack(point, values).is_zero())
    }

    /// Inequalities in normalized form, sorted, for order-free comparison.
    pub fn canonical_ineqs(&self) -> Vec<String> {
        let mut rows: Vec<String> = self
            .ineqs
            .iter()
            .map(|r| self.render_row(&r.normalized(), "<="))
            .collect();
        rows.sort();
        rows
    }

    fn render_affine(&self, a: &Affine) -> String {
        let mut terms = Vec::new();
        for (c, name) in a.consts.iter().zip(&self.consts) {
            push_term(&mut terms, c, name);
        }
        if !a.constant.is_zero() || terms.is_empty() {
            terms.push(signed_rational(&a.constant, terms.is_empty()));
        }
        terms.concat()
    }

    fn render_row(&self, r: &Row, rel: &str) -> String {
        let mut terms = Vec::new();
        for (c, name) in r.coef.iter().zip(&self.vars) {
            push_term(&mut terms, c, name);
        }
        if terms.is_empty() {
            terms.push("0".into());
        }
        format!("{} {rel} {}", terms.concat(), self.render_affine(&r.rhs))
    }

    pub fn from_json(text: &str) -> Result<Self, GeometryError> {
        let v: Value = serde_json::from_str(text).map_err(|e| GeometryError::Json(e.to_string()))?;
        let strings = |key: &str, required: bool| -> Result<Vec<String>, GeometryError> {
            match v.get(key) {
                None if !required => Ok(Vec::new()),
                None => Err(GeometryError::Json(format!("missing field {key:?}"))),
                Some(Value::Array(items)) => items
                    .iter()
                    .map(|s| {
                        s.as_str()
                            .map(str::to_string)
                            .ok_or_else(|| GeometryError::Json(format!("{key:?} must hold strings")))
                    })
                    .collect(),
                Some(_) => Err(GeometryError::Json(format!("{key:?} must be an array"))),
            }
        };
        let mut sys = LinearSystem {
            vars: strings("vars", true)?,
            consts: strings("consts", false)?,
            ineqs: Vec::new(),
            eqs: Vec::new(),
            nonneg_vars: strings("nonneg", false)?,
            facts: Vec::new(),
        };
        for name in &sys.nonneg_vars {
            if sys.var_index(name).is_none() {
                return Err(GeometryError::UnknownVariable(name.clone()));
            }
        }
        for (key, target) in [("ineqs", 0), ("eqs", 1)] {
            let rows = match v.get(key) {
                None => continue,
                Some(Value::Array(rows)) => rows,
                Some(_) => return Err(GeometryError::Json(format!("{key:?} must be an array"))),
            };
            for row in rows {
                let parsed = sys.parse_row(row)?;
                if target == 0 {
                    sys.ineqs.push(parsed);
                } else {
                    sys.eqs.push(parsed);
                }
            }
        }
        if let Some(facts) = v.get("facts") {
            let facts = facts
                .as_array()
                .ok_or_else(|| GeometryError::Json("\"facts\" must be an array".into()))?;
            for f in facts {
                let side = |k: &str| {
                    f.get(k)
                        .ok_or_else(|| GeometryError::Json(format!("fact missing {k:?}")))
                        .and_then(|a| sys.parse_affine(a))
                };
                let fact = SymbolFact {
                    lhs: side("lhs")?,
                    rhs: side("rhs")?,
                };
                sys.facts.push(fact);
            }
        }
        Ok(sys)
    }

    fn parse_row(&self, row: &Value) -> Result<Row, GeometryError> {
        let coef = row
            .get("coef")
            .and_then(Value::as_array)
            .ok_or_else(|| GeometryError::Json("row needs a \"coef\" array".into()))?;
        if coef.len() != self.vars.len() {
            return Err(GeometryError::Json(format!(
                "row has {} coefficients for {} variables",
                coef.len(),
                self.vars.len()
            )));
        }
        let coef = coef.iter().map(parse_rational).collect::<Result<Vec<_>, _>>()?;
        let rhs = match row.get("rhs") {
            Some(r) => self.parse_affine(r)?,
            None => Affine::zero(self.consts.len()),
        };
        Ok(Row { coef, rhs })
    }

    fn parse_affine(&self, v: &Value) -> Result<Affine, GeometryError> {
        let mut a = Affine::zero(self.consts.len());
        if let Some(map) = v.get("consts") {
            let map = map
                .as_object()
                .ok_or_else(|| GeometryError::Json("\"consts\" must be an object".into()))?;
            for (name, c) in map {
                let k = self
                    .const_index(name)
                    .ok_or_else(|| GeometryError::UnknownConstant(name.clone()))?;
                a.consts[k] += parse_rational(c)?;
            }
        }
        if let Some(r) = v.get("rat") {
            a.constant = parse_rational(r)?;
        }
        Ok(a)
    }

    pub fn to_json(&self) -> Value {
        let affine = |a: &Affine| {
            let mut consts = Map::new();
            for (c, name) in a.consts.iter().zip(&self.consts) {
                if !c.is_zero() {
                    consts.insert(name.clone(), rational_json(c));
                }
            }
            json!({ "consts": consts, "rat": a.constant.to_string() })
        };
        let rows = |rows: &[Row]| -> Vec<Value> {
            rows.iter()
                .map(|r| {
                    json!({
                        "coef": r.coef.iter().map(rational_json).collect::<Vec<_>>(),
                        "rhs": affine(&r.rhs),
                    })
                })
                .collect()
        };
        let mut out = Map::new();
        out.insert("vars".into(), json!(self.vars));
        out.insert("consts".into(), json!(self.consts));
        out.insert("ineqs".into(), Value::Array(rows(&self.ineqs)));
        out.insert("eqs".into(), Value::Array(rows(&self.eqs)));
        if !self.nonneg_vars.is_empty() {
            out.insert("nonneg".into(), json!(self.nonneg_vars));
        }
        if !self.facts.is_empty() {
            let facts: Vec<Value> = self
                .facts
                .iter()
                .map(|f| json!({ "lhs": affine(&f.lhs), "rhs": affine(&f.rhs) }))
                .collect();
            out.insert("facts".into(), Value::Array(facts));
        }
        Value::Object(out)
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.ineqs {
            writeln!(f, "{}", self.render_row(r, "<="))?;
        }
        for r in &self.eqs {
            writeln!(f, "{}", self.render_row(r, "="))?;
        }
        Ok(())
    }
}

fn push_term(terms: &mut Vec<String>, c: &Rational, name: &str) {
    if c.is_zero() {
        return;
    }
    let first = terms.is_empty();
    let sign = match (c.is_negative(), first) {
        (true, true) => "-",
        (true, false) => " - ",
        (false, true) => "",
        (false, false) => " + ",
    };
    let mag = c.abs();
    if mag.is_one() {
        terms.push(format!("{sign}{name}"));
    } else {
        terms.push(format!("{sign}{mag}*{name}"));
    }
}

fn signed_rational(c: &Rational, first: bool) -> String {
    match (c.is_negative(), first) {
        (_, true) => c.to_string(),
        (true, false) => format!(" - {}", c.abs()),
        (false, false) => format!(" + {c}"),
    }
}

fn rational_json(c: &Rational) -> Value {
    if c.is_integer() {
        if let Ok(i) = i64::try_from(c.to_integer()) {
            return json!(i);
        }
    }
    json!(c.to_string())
}

fn parse_rational(v: &Value) -> Result<Rational, GeometryError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(rat)
            .ok_or_else(|| GeometryError::Json(format!("{n} is not an integer; write fractions as \"p/q\""))),
        Value::String(s) => {
            let s = s.trim();
            let parsed = match s.split_once('/') {
                Some((p, q)) => {
                    let p: BigInt = p.trim().parse().map_err(|_| bad_rational(s))?;
                    let q: BigInt = q.trim().parse().map_err(|_| bad_rational(s))?;
                    if q.is_zero() {
                        return Err(bad_rational(s));
                    }
                    Rational::new(p, q)
                }
                None => Rational::from_integer(s.parse().map_err(|_| bad_rational(s))?),
            };
            Ok(parsed)
        }
        other => Err(GeometryError::Json(format!("{other} is not a rational"))),
    }
}

fn bad_rational(s: &str) -> GeometryError {
    GeometryError::Json(format!("{s:?} is not a rational of the form p/q"))
}

/// Projects `var` out of the system.
///
/// An equality containing `var` is used for substitution first; otherwise
/// every upper bound on `var` is paired with every lower bound. Rows come
/// out normalized; nothing else is pruned.
pub fn fm_eliminate(sys: &LinearSystem, var: &str) -> Result<LinearSystem, GeometryError> {
    let idx = sys
        .var_index(var)
        .ok_or_else(|| GeometryError::UnknownVariable(var.to_string()))?;
    let mut out = sys.clone();

    if let Some(pivot_at) = sys.eqs.iter().position(|r| !r.coef[idx].is_zero()) {
        let pivot = out.eqs.remove(pivot_at);
        let lead = pivot.coef[idx].clone();
        let substitute = |r: &Row| -> Row {
            if r.coef[idx].is_zero() {
                return r.clone();
            }
            let factor = -(&r.coef[idx] / &lead);
            r.add(&pivot.scaled(&factor))
        };
        out.ineqs = out.ineqs.iter().map(substitute).map(|r| r.normalized()).collect();
        out.eqs = out.eqs.iter().map(substitute).map(|r| r.normalized()).collect();
    } else {
        let (mut upper, mut lower, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in &sys.ineqs {
            if r.coef[idx].is_positive() {
                upper.push(r);
            } else if r.coef[idx].is_negative() {
                lower.push(r);
            } else {
                rest.push(r.clone());
            }
        }
        for u in &upper {
            for l in &lower {
                let combined = u.scaled(&-l.coef[idx].clone()).add(&l.scaled(&u.coef[idx]));
                debug_assert!(combined.coef[idx].is_zero());
                rest.push(combined.normalized());
            }
        }
        out.ineqs = rest;
    }

    out.ineqs = out.ineqs.iter().map(|r| r.without(idx)).collect();
    out.eqs = out.eqs.iter().map(|r| r.without(idx)).collect();
    out.vars.remove(idx);
    out.nonneg_vars.retain(|v| v != var);
    Ok(out)
}

/// Eliminates several variables in the given order.
pub fn fm_eliminate_all(sys: &LinearSystem, vars: &[&str]) -> Result<LinearSystem, GeometryError> {
    vars.iter().try_fold(sys.clone(), |acc, v| fm_eliminate(&acc, v))
}

/// Drops rows that are implied by another single row (or the sum of two
/// rows) once the system's declared facts are taken into account:
///
/// - every constant is a nonnegative quantity;
/// - variables listed in `nonneg_vars` are nonnegative;
/// - each [`SymbolFact`] may be applied once to close a gap.
///
/// No inequality between constants beyond those facts is used.
pub fn remove_redundant(sys: &LinearSystem) -> LinearSystem {
    let nonneg: Vec<usize> = sys
        .nonneg_vars
        .iter()
        .filter_map(|v| sys.var_index(v))
        .collect();
    let slacks: Vec<Affine> = sys.facts.iter().map(SymbolFact::slack).collect();
    let provably_nonneg = |a: &Affine| -> bool {
        let plain = |a: &Affine| !a.constant.is_negative() && a.consts.iter().all(|c| !c.is_negative());
        plain(a) || slacks.iter().any(|s| plain(&a.sub(s)))
    };

    let mut rows: Vec<Row> = Vec::new();
    for r in sys.ineqs.iter().map(Row::normalized) {
        if !rows.contains(&r) {
            rows.push(r);
        }
    }

    let mut kept = vec![true; rows.len()];
    for j in 0..rows.len() {
        let r = &rows[j];
        // 0 ≤ rhs
        if r.is_trivial_lhs() && provably_nonneg(&r.rhs) {
            kept[j] = false;
            continue;
        }
        // −c·x ≤ rhs with x ≥ 0 in the domain
        let support: Vec<usize> = (0..r.coef.len()).filter(|&i| !r.coef[i].is_zero()).collect();
        if let [only] = support[..] {
            if nonneg.contains(&only) && r.coef[only].is_negative() && provably_nonneg(&r.rhs) {
                kept[j] = false;
                continue;
            }
        }
        let dominated = (0..rows.len()).any(|i| {
            i != j && kept[i] && rows[i].coef == r.coef && provably_nonneg(&r.rhs.sub(&rows[i].rhs))
        });
        if dominated {
            kept[j] = false;
            continue;
        }
        let summed = (0..rows.len()).any(|i| {
            (i + 1..rows.len()).any(|k| {
                i != j
                    && k != j
                    && kept[i]
                    && kept[k]
                    && rows[i].add(&rows[k]).coef == r.coef
                    && provably_nonneg(&r.rhs.sub(&rows[i].rhs.add(&rows[k].rhs)))
            })
        });
        if summed {
            kept[j] = false;
        }
    }

    let mut out = sys.clone();
    out.ineqs = rows
        .into_iter()
        .zip(kept)
        .filter_map(|(r, k)| k.then_some(r))
        .collect();
    out
}

/// Variables of the rate-split system.
pub const SPLIT_VARS: [&str; 4] = ["R1", "R2", "R1p", "R1pp"];

/// Constants of the rate-split system, in order:
/// A1 = I(X;Y3|U,V,X3), A2 = I(X;Y3|V,X3), A3 = I(U,V;Y2),
/// A4 = I(X,X3;Y1), A5 = I(X,X3;Y1|U,V).
pub const SPLIT_CONSTS: [&str; 5] = ["A1", "A2", "A3", "A4", "A5"];

/// The decoding constraints of the Type-I block-Markov scheme with
/// R1 split into R1p (cloud part) and R1pp (relay-forwarded part).
pub fn type1_split_system() -> LinearSystem {
    let mut s = LinearSystem::new(&SPLIT_VARS, &SPLIT_CONSTS);
    s.push_ineq(&[("R1pp", 1)], &[("A1", 1)]);
    s.push_ineq(&[("R1", 1), ("R2", 1)], &[("A2", 1)]);
    s.push_ineq(&[("R1p", 1), ("R2", 1)], &[("A3", 1)]);
    s.push_ineq(&[("R1", 1), ("R2", 1)], &[("A4", 1)]);
    s.push_ineq(&[("R1pp", 1)], &[("A5", 1)]);
    s.push_ineq(&[("R1p", -1)], &[]);
    s.push_ineq(&[("R1pp", -1)], &[]);
    s.push_eq(&[("R1", 1), ("R1p", -1), ("R1pp", -1)], &[]);
    s.nonneg_vars = vec!["R1".into(), "R2".into()];
    s
}

/// I(U,V;Y2) + I(X,X3;Y1|U,V) ≤ I(X,X3;Y1) on Type-I channels, which
/// retires the bare R1 + R2 ≤ A4 row.
pub fn type1_pruning_facts(sys: &mut LinearSystem) {
    sys.push_fact(&["A3", "A5"], &["A4"]);
}

/// Constants of the Type-II system: B1 = I(U,X3;Y2), B2 = I(U;Y3|X3),
/// B3 = I(X;Y1|U,X3), B4 = I(X,X3;Y1).
pub const TYPE2_CONSTS: [&str; 4] = ["B1", "B2", "B3", "B4"];

pub fn type2_system() -> LinearSystem {
    let mut s = LinearSystem::new(&["R1", "R2"], &TYPE2_CONSTS);
    s.push_ineq(&[("R2", 1)], &[("B1", 1)]);
    s.push_ineq(&[("R2", 1)], &[("B2", 1)]);
    s.push_ineq(&[("R1", 1)], &[("B3", 1)]);
    s.push_ineq(&[("R1", 1), ("R2", 1)], &[("B4", 1)]);
    s.nonneg_vars = vec!["R1".into(), "R2".into()];
    s
}

/// I(U,X3;Y2) + I(X;Y1|U,X3) ≤ I(X,X3;Y1), which makes the sum row redundant.
pub fn type2_pruning_facts(sys: &mut LinearSystem) {
    sys.push_fact(&["B1", "B3"], &["B4"]);
}

/// Canonical strings of a list of `(lhs, rhs)` literal rows for comparison.
pub fn canonical_rows(sys: &LinearSystem, rows: &[(&[(&str, i64)], &[(&str, i64)])]) -> Vec<String> {
    let mut probe = sys.clone();
    probe.ineqs = rows.iter().map(|(l, r)| sys.row(l, r, 0)).collect();
    probe.canonical_ineqs()
}

/// Helper used by projection checks: the interval of values `var` may take
/// at `point` (other coordinates fixed), as (max lower, min upper).
pub fn feasible_interval(
    sys: &LinearSystem,
    idx: usize,
    point: &[Rational],
    values: &[Rational],
) -> (Option<Rational>, Option<Rational>, bool) {
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut consistent = true;
    let mut bound = |row: &Row, is_eq: bool| {
        let a = &row.coef[idx];
        let mut rest = point.to_vec();
        rest[idx] = Rational::zero();
        let s = row.slack(&rest, values); // rhs − Σ_{j≠idx} c_j x_j
        if a.is_zero() {
            if s.is_negative() || (is_eq && !s.is_zero()) {
                consistent = false;
            }
            return;
        }
        let b = &s / a;
        let tighten_hi = |hi: &mut Option<Rational>, b: &Rational| {
            if hi.as_ref().is_none_or(|h| b < h) {
                *hi = Some(b.clone());
            }
        };
        let tighten_lo = |lo: &mut Option<Rational>, b: &Rational| {
            if lo.as_ref().is_none_or(|l| b > l) {
                *lo = Some(b.clone());
            }
        };
        if is_eq {
            tighten_hi(&mut hi, &b);
            tighten_lo(&mut lo, &b);
        } else if a.is_positive() {
            tighten_hi(&mut hi, &b);
        } else {
            tighten_lo(&mut lo, &b);
        }
    };
    for r in &sys.ineqs {
        bound(r, false);
    }
    for r in &sys.eqs {
        bound(r, true);
    }
    let nonempty = consistent
        && match (&lo, &hi) {
            (Some(l), Some(h)) => l <= h,
            _ => true,
        };
    (lo, hi, nonempty)
}

/// Rational from a small integer ratio.
pub fn ratio(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}
