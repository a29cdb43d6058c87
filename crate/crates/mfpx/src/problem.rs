//! Elimination problems: point configurations with a projection split.

use std::collections::BTreeSet;

use mfp_core::{LatticePoint, PointConfiguration, ProjectionSplit};
use crate::parse::{ExprParser, ParseError, ParseErrorKind, PolySystem};
use crate::poly::Poly;

#[derive(Debug, thiserror::Error)]
pub enum ProblemError {
    #[error("{sets} polynomials for {elim} eliminated variables; expected {}", elim + 1)]
    Shape { sets: usize, elim: usize },
    #[error("derivative order {order} does not match {vars} state variables")]
    Order { order: usize, vars: usize },
    #[error(transparent)]
    Core(#[from] mfp_core::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Implicitization,
    Ode,
    RawSupports,
}

/// A configuration in `Z^n` whose first `n - k` coordinates are kept.
#[derive(Clone, Debug)]
pub struct EliminationProblem {
    pub config: PointConfiguration,
    pub split: ProjectionSplit,
    pub keep_vars: Vec<String>,
    pub elim_vars: Vec<String>,
    pub provenance: Provenance,
}

fn to_points(support: &[Vec<i64>]) -> Vec<LatticePoint> {
    support.iter().map(|e| LatticePoint::from_i64(e)).collect()
}

impl EliminationProblem {
    pub fn from_supports(
        supports: &[Vec<Vec<i64>>],
        keep_vars: Vec<String>,
        elim_vars: Vec<String>,
        provenance: Provenance,
    ) -> Result<Self, ProblemError> {
        let k = elim_vars.len();
        if supports.len() != k + 1 {
            return Err(ProblemError::Shape { sets: supports.len(), elim: k });
        }
        let split = ProjectionSplit::new(keep_vars.len() + k, k)?;
        let config = PointConfiguration::new(supports.iter().map(|s| to_points(s)).collect())?;
        Ok(Self { config, split, keep_vars, elim_vars, provenance })
    }

    pub fn from_system(system: &PolySystem) -> Result<Self, ProblemError> {
        Self::from_supports(
            &system.supports(),
            system.keep_vars.clone(),
            system.elim_vars.clone(),
            Provenance::Implicitization,
        )
    }

    pub fn from_raw(raw: &crate::parse::RawSupports) -> Result<Self, ProblemError> {
        let kept = raw.dim - raw.split;
        Self::from_supports(
            &raw.sets,
            (0..kept).map(|i| format!("u{i}")).collect(),
            (0..raw.split).map(|i| format!("v{i}")).collect(),
            Provenance::RawSupports,
        )
    }
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

/// Supports of `x_i - h_i` in `Z^{(k+1)+k}`, with `h_i` given by its support
/// in `Z^k`.
fn implicit_supports(h: &[Vec<Vec<i64>>], k: usize) -> Vec<Vec<Vec<i64>>> {
    h.iter()
        .enumerate()
        .map(|(i, s)| {
            let mut set: BTreeSet<Vec<i64>> = BTreeSet::new();
            set.insert(unit(2 * k + 1, i));
            for b in s {
                let mut e = vec![0; k + 1];
                e.extend_from_slice(b);
                set.insert(e);
            }
            set.into_iter().collect()
        })
        .collect()
}

/// The problem `x_i = h_i(y)` for Laurent polynomials `h_0, ..., h_k` in
/// `k` variables.
pub fn implicitization_problem(h: &[Poly]) -> Result<EliminationProblem, ProblemError> {
    let k = h.first().map_or(0, Poly::nvars);
    if h.len() != k + 1 {
        return Err(ProblemError::Shape { sets: h.len(), elim: k });
    }
    let supports: Vec<Vec<Vec<i64>>> = h.iter().map(Poly::support).collect();
    EliminationProblem::from_supports(
        &implicit_supports(&supports, k),
        (0..=k).map(|i| format!("x{i}")).collect(),
        (1..=k).map(|i| format!("y{i}")).collect(),
        Provenance::Implicitization,
    )
}

/// A polynomial dynamical system `x_i' = g_i(x)`.
#[derive(Clone, Debug)]
pub struct OdeSystem {
    pub vars: Vec<String>,
    pub rhs: Vec<Poly>,
}

/// Parses lines `x' = g(x)`; the state variables are the left-hand sides in
/// order of appearance.
pub fn parse_ode(text: &str) -> Result<OdeSystem, ParseError> {
    let mut eqs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let no = i + 1;
        let Some(eq) = line.find('=') else {
            return Err(ParseError { line: no, col: 1, kind: ParseErrorKind::Syntax("expected `x' = polynomial`".into()) });
        };
        let lhs = line[..eq].trim();
        let Some(name) = lhs.strip_suffix('\'') else {
            return Err(ParseError {
                line: no,
                col: 1,
                kind: ParseErrorKind::Syntax(format!("expected a derivative `{lhs}'` on the left")),
            });
        };
        eqs.push((no, line, name.to_string(), eq));
    }
    let vars: Vec<String> = eqs.iter().map(|(_, _, n, _)| n.clone()).collect();
    let mut rhs = Vec::with_capacity(eqs.len());
    for (no, line, name, eq) in &eqs {
        if vars.iter().filter(|v| *v == name).count() > 1 {
            return Err(ParseError { line: *no, col: 1, kind: ParseErrorKind::Syntax(format!("`{name}'` defined twice")) });
        }
        let col = line[..=*eq].chars().count() + 1;
        rhs.push(ExprParser::new(&line[eq + 1..], *no, col, &vars).parse()?);
    }
    if vars.is_empty() {
        return Err(ParseError { line: 1, col: 1, kind: ParseErrorKind::Syntax("no equations".into()) });
    }
    Ok(OdeSystem { vars, rhs })
}

/// Where the right-hand sides come from.
#[derive(Clone, Debug)]
pub enum OdeInput {
    Exact(OdeSystem),
    /// Dense `g_1` of degree `d` and dense `g_2, ..., g_n` of degree `big_d`,
    /// with generic coefficients.
    Template { n: usize, d: usize, big_d: usize },
}

impl OdeInput {
    pub fn num_vars(&self) -> usize {
        match self {
            Self::Exact(s) => s.vars.len(),
            Self::Template { n, .. } => *n,
        }
    }
}

fn dense_support(n: usize, deg: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|e: Vec<i64>| {
                let used: i64 = e.iter().sum();
                (0..=deg as i64 - used).map(move |a| {
                    let mut f = e.clone();
                    f.push(a);
                    f
                })
            })
            .collect();
    }
    out
}

/// How higher derivatives of `x_1` are expressed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Relations {
    /// `x_1^(j+1) = D(P_j)` for the derivation `D(x_1) = x_1'`,
    /// `D(x_1^(m)) = x_1^(m+1)`, `D(x_i) = g_i` (`i > 1`): lower derivatives
    /// of `x_1` stay as kept variables.
    #[default]
    Chained,
    /// `x_1^(j) = L^j(x_1)` in the state variables alone.
    Substituted,
}

/// Coordinates `(y, x_1', ..., x_1^(n), x_1, ..., x_n)`.
struct Layout {
    n: usize,
}

impl Layout {
    fn dim(&self) -> usize {
        2 * self.n + 1
    }

    fn state(&self, i: usize) -> usize {
        self.n + 1 + i
    }

    fn unit(&self, c: usize) -> Vec<i64> {
        unit(self.dim(), c)
    }

    fn state_map(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.state(i)).collect()
    }

    /// `D(v)` for every coordinate `v`, given the right-hand sides.
    fn images<T: Clone>(&self, g: &[T], var: impl Fn(usize) -> T, zero: T, relations: Relations) -> Vec<T> {
        let mut out = vec![zero; self.dim()];
        if relations == Relations::Chained {
            for j in 1..self.n {
                out[j] = var(j + 1);
            }
        }
        out[self.state(0)] = match relations {
            Relations::Chained => var(1),
            Relations::Substituted => g[0].clone(),
        };
        for i in 1..self.n {
            out[self.state(i)] = g[i].clone();
        }
        out
    }
}

/// Support of `D(f)` from supports alone, assuming no cancellation.
fn derive_support(f: &BTreeSet<Vec<i64>>, images: &[Vec<Vec<i64>>]) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for a in f {
        for (i, gi) in images.iter().enumerate() {
            if a[i] == 0 {
                continue;
            }
            for b in gi {
                let mut e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                e[i] -= 1;
                out.insert(e);
            }
        }
    }
    out
}

fn derive_poly(f: &Poly, images: &[Poly]) -> Poly {
    let mut acc = Poly::zero(f.nvars());
    for (i, g) in images.iter().enumerate() {
        if !g.is_zero() {
            acc = acc.add(&f.derivative(i).mul(g));
        }
    }
    acc
}

/// Supports of the right-hand sides `P_0 = x_1`, `P_1 = g_1`, ...,
/// `P_order`, over `(y, x_1', ..., x_1^(n), x_1, ..., x_n)`.
pub fn relation_supports(input: &OdeInput, order: usize, relations: Relations) -> Vec<Vec<Vec<i64>>> {
    let lay = Layout { n: input.num_vars() };
    let dim = lay.dim();
    let map = lay.state_map();
    let mut out = Vec::with_capacity(order + 1);
    match input {
        OdeInput::Exact(sys) => {
            let g: Vec<Poly> = sys.rhs.iter().map(|p| p.embed(dim, &map)).collect();
            let images = lay.images(&g, |c| Poly::var(dim, c), Poly::zero(dim), relations);
            let mut f = Poly::var(dim, lay.state(0));
            for j in 0..=order {
                out.push(f.support());
                f = if j == 0 { g[0].clone() } else { derive_poly(&f, &images) };
            }
        }
        OdeInput::Template { n, d, big_d } => {
            let g: Vec<Vec<Vec<i64>>> = (0..*n)
                .map(|i| {
                    dense_support(*n, if i == 0 { *d } else { *big_d })
                        .into_iter()
                        .map(|e| {
                            let mut f = vec![0; dim];
                            for (t, x) in e.into_iter().enumerate() {
                                f[map[t]] = x;
                            }
                            f
                        })
                        .collect()
                })
                .collect();
            let images = lay.images(&g, |c| vec![lay.unit(c)], Vec::new(), relations);
            let mut f: BTreeSet<Vec<i64>> = [lay.unit(lay.state(0))].into_iter().collect();
            for j in 0..=order {
                out.push(f.iter().cloned().collect());
                f = if j == 0 { g[0].iter().cloned().collect() } else { derive_support(&f, &images) };
            }
        }
    }
    out
}

/// Relations `y = x_1` and `x_1^(j) = P_j` for `j = 1..=n`, keeping
/// `(y, x_1', ..., x_1^(n))` and eliminating the state variables.
pub fn ode_problem(input: &OdeInput, order: usize, relations: Relations) -> Result<EliminationProblem, ProblemError> {
    let n = input.num_vars();
    if order != n {
        return Err(ProblemError::Order { order, vars: n });
    }
    let lay = Layout { n };
    let supports: Vec<Vec<Vec<i64>>> = relation_supports(input, order, relations)
        .into_iter()
        .enumerate()
        .map(|(j, s)| {
            let mut set: BTreeSet<Vec<i64>> = s.into_iter().collect();
            set.insert(lay.unit(j));
            set.into_iter().collect()
        })
        .collect();
    let names: Vec<String> = match input {
        OdeInput::Exact(sys) => sys.vars.clone(),
        OdeInput::Template { .. } => (1..=n).map(|i| format!("x{i}")).collect(),
    };
    let first = &names[0];
    let keep = std::iter::once("y".to_string())
        .chain((1..=n).map(|j| format!("{first}{}", "'".repeat(j))))
        .collect();
    EliminationProblem::from_supports(&supports, keep, names, Provenance::Ode)
}
