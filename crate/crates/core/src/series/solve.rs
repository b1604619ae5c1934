//! Fixed-point equations `S = rhs(S)` solved by coefficient propagation,
//! and the Lagrange coefficient of `M = z·φ(M)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::MarkerPoly;
use super::{rat_int, ExactRational, SeriesError, TruncSeries};

const INF: usize = usize::MAX / 4;

/// Handle to a node of a [`FixedPointSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeId(usize);

#[derive(Clone, Debug)]
enum Node {
    Known(TruncSeries),
    Unknown,
    Lin(Vec<(ExactRational, NodeId)>),
    Product(NodeId, NodeId),
    Shift(NodeId, usize),
    Mark(NodeId, usize, u32),
}

/// The right-hand side of `S = rhs(S)`, built as an expression DAG.
///
/// Builder methods return [`NodeId`]s that can be reused, so shared
/// subexpressions are evaluated once. [`FixedPointSpec::compose`] and
/// [`FixedPointSpec::pow`] expand into chains of binary products.
#[derive(Clone, Debug)]
pub struct FixedPointSpec {
    order: usize,
    markers: Vec<String>,
    nodes: Vec<Node>,
    labels: Vec<String>,
    val: Vec<usize>,
    unknown: Option<(NodeId, usize)>,
    rhs: Option<NodeId>,
}

impl FixedPointSpec {
    pub fn new(order: usize, markers: &[&str]) -> Self {
        FixedPointSpec {
            order,
            markers: markers.iter().map(|s| s.to_string()).collect(),
            nodes: Vec::new(),
            labels: Vec::new(),
            val: Vec::new(),
            unknown: None,
            rhs: None,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    fn push(&mut self, node: Node, label: String, val: usize) -> NodeId {
        self.nodes.push(node);
        self.labels.push(label);
        self.val.push(val);
        NodeId(self.nodes.len() - 1)
    }

    fn zero_poly(&self) -> MarkerPoly {
        MarkerPoly::zero(self.markers.len())
    }

    /// A known series. Its markers must match the spec's.
    pub fn known(&mut self, s: TruncSeries) -> Result<NodeId, SeriesError> {
        if s.markers() != self.markers.as_slice() {
            return Err(SeriesError::MarkerMismatch {
                left: self.markers.clone(),
                right: s.markers().to_vec(),
            });
        }
        let v = s.valuation().unwrap_or(INF);
        let label = format!("known#{}", self.nodes.len());
        Ok(self.push(Node::Known(s), label, v))
    }

    pub fn constant(&mut self, c: ExactRational) -> NodeId {
        let m: Vec<&str> = self.markers.iter().map(String::as_str).collect();
        let s = TruncSeries::constant(self.order, &m, c);
        self.known(s).expect("markers match by construction")
    }

    /// The unknown series, with a lower bound on its valuation that the
    /// solver verifies. Repeated calls return the same node.
    pub fn unknown(&mut self, valuation: usize) -> NodeId {
        if let Some((id, v)) = self.unknown {
            assert_eq!(v, valuation, "unknown declared twice with different valuations");
            return id;
        }
        let id = self.push(Node::Unknown, "unknown".into(), valuation);
        self.unknown = Some((id, valuation));
        id
    }

    /// `Σ c_i · x_i`.
    pub fn lin(&mut self, terms: &[(ExactRational, NodeId)]) -> NodeId {
        let v = terms
            .iter()
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, x)| self.val[x.0])
            .min()
            .unwrap_or(INF);
        let label = format!("sum#{}", self.nodes.len());
        self.push(Node::Lin(terms.to_vec()), label, v)
    }

    pub fn sum(&mut self, xs: &[NodeId]) -> NodeId {
        let terms: Vec<_> = xs.iter().map(|&x| (ExactRational::one(), x)).collect();
        self.lin(&terms)
    }

    pub fn scale(&mut self, c: ExactRational, x: NodeId) -> NodeId {
        self.lin(&[(c, x)])
    }

    /// Product of all factors (the empty product is `1`).
    pub fn product(&mut self, xs: &[NodeId]) -> NodeId {
        match xs {
            [] => self.constant(ExactRational::one()),
            [x] => *x,
            [first, rest @ ..] => {
                let mut acc = *first;
                for &x in rest {
                    let v = self.val[acc.0].saturating_add(self.val[x.0]).min(INF);
                    let label = format!("product#{}", self.nodes.len());
                    acc = self.push(Node::Product(acc, x), label, v);
                }
                acc
            }
        }
    }

    pub fn pow(&mut self, x: NodeId, k: usize) -> NodeId {
        self.product(&vec![x; k])
    }

    /// `z^j · x`.
    pub fn shift(&mut self, x: NodeId, j: usize) -> NodeId {
        let v = self.val[x.0].saturating_add(j).min(INF);
        let label = format!("shift#{}", self.nodes.len());
        self.push(Node::Shift(x, j), label, v)
    }

    /// `marker^power · x`.
    pub fn mark(&mut self, x: NodeId, marker: usize, power: u32) -> NodeId {
        assert!(marker < self.markers.len(), "marker index out of range");
        let v = self.val[x.0];
        let label = format!("mark#{}", self.nodes.len());
        self.push(Node::Mark(x, marker, power), label, v)
    }

    /// `F(inner)` for a univariate `F`; `inner` must have positive valuation.
    pub fn compose(&mut self, f: &TruncSeries, inner: NodeId) -> Result<NodeId, SeriesError> {
        if f.arity() != 0 {
            return Err(SeriesError::Invalid("composition needs a univariate outer series".into()));
        }
        let vi = self.val[inner.0];
        if vi == 0 {
            return Err(SeriesError::CompositionValuation);
        }
        let imax = if vi >= INF { 0 } else { self.order / vi };
        if f.order() < imax {
            return Err(SeriesError::OrderTooLow {
                have: f.order(),
                need: imax,
            });
        }
        let mut terms = Vec::new();
        let f0 = f.coeff(0, &[]);
        if !f0.is_zero() {
            let c = self.constant(f0);
            terms.push((ExactRational::one(), c));
        }
        let mut power = inner;
        for i in 1..=imax {
            if i > 1 {
                power = self.product(&[power, inner]);
            }
            let fi = f.coeff(i, &[]);
            if !fi.is_zero() {
                terms.push((fi, power));
            }
        }
        Ok(self.lin(&terms))
    }

    pub fn set_rhs(&mut self, rhs: NodeId) {
        self.rhs = Some(rhs);
    }

    fn children(&self, i: usize) -> Vec<(NodeId, usize)> {
        match &self.nodes[i] {
            Node::Known(_) | Node::Unknown => vec![],
            Node::Lin(t) => t.iter().filter(|(c, _)| !c.is_zero()).map(|&(_, x)| (x, 0)).collect(),
            Node::Product(a, b) => vec![(*a, self.val[b.0]), (*b, self.val[a.0])],
            Node::Shift(x, j) => vec![(*x, *j)],
            Node::Mark(x, _, _) => vec![(*x, 0)],
        }
    }

    /// Minimal `z`-offset of every node below the root, with the parent
    /// realizing it.
    fn offsets(&self, root: NodeId) -> (Vec<usize>, Vec<Option<usize>>) {
        let mut off = vec![INF; self.nodes.len()];
        let mut via = vec![None; self.nodes.len()];
        off[root.0] = 0;
        for p in (0..=root.0).rev() {
            if off[p] >= INF {
                continue;
            }
            for (c, extra) in self.children(p) {
                let o = off[p].saturating_add(extra).min(INF);
                if o < off[c.0] {
                    off[c.0] = o;
                    via[c.0] = Some(p);
                }
            }
        }
        (off, via)
    }

    /// Structural contraction check: every occurrence of the unknown sits
    /// under at least one power of `z`.
    pub fn check_contraction(&self) -> Result<(), SeriesError> {
        let root = self.rhs.ok_or_else(|| SeriesError::Invalid("no right-hand side set".into()))?;
        let Some((u, _)) = self.unknown else {
            return Ok(());
        };
        let (off, via) = self.offsets(root);
        if off[u.0] == 0 {
            let mut path = vec![self.labels[u.0].clone()];
            let mut cur = u.0;
            while let Some(p) = via[cur] {
                path.push(self.labels[p].clone());
                cur = p;
            }
            path.reverse();
            return Err(SeriesError::Contraction(format!(
                "the unknown enters coefficient n at order n through {}",
                path.join(" -> ")
            )));
        }
        Ok(())
    }

    /// Evaluate `rhs(s)` with whole-series arithmetic (used for residual checks).
    pub fn evaluate(&self, s: &TruncSeries) -> Result<TruncSeries, SeriesError> {
        let root = self.rhs.ok_or_else(|| SeriesError::Invalid("no right-hand side set".into()))?;
        let m: Vec<&str> = self.markers.iter().map(String::as_str).collect();
        let mut vals: Vec<TruncSeries> = Vec::with_capacity(root.0 + 1);
        for i in 0..=root.0 {
            let v = match &self.nodes[i] {
                Node::Known(k) => k.truncate(self.order),
                Node::Unknown => s.truncate(self.order),
                Node::Lin(t) => {
                    let mut acc = TruncSeries::zero(self.order, &m);
                    for (c, x) in t {
                        acc = acc.add(&vals[x.0].scale(c))?;
                    }
                    acc
                }
                Node::Product(a, b) => vals[a.0].mul(&vals[b.0])?,
                Node::Shift(x, j) => {
                    let mut z = TruncSeries::constant(self.order, &m, ExactRational::one());
                    for _ in 0..*j {
                        z = z.mul(&TruncSeries::z(self.order, &m))?;
                    }
                    z.mul(&vals[x.0])?
                }
                Node::Mark(x, marker, power) => {
                    let src = &vals[x.0];
                    let terms = (0..=src.order())
                        .map(|n| src.z_coeff_ref(n).mark(*marker, *power))
                        .collect();
                    TruncSeries::from_parts(src.order(), src.markers().to_vec(), terms)
                }
            };
            vals.push(v);
        }
        Ok(vals.pop().expect("root evaluated"))
    }
}

/// Solve `S = rhs(S)` through the spec's order, one coefficient per pass.
pub fn solve_fixed_point(spec: &FixedPointSpec) -> Result<TruncSeries, SeriesError> {
    spec.check_contraction()?;
    let root = spec.rhs.expect("checked above");
    let (off, _) = spec.offsets(root);
    let n_nodes = root.0 + 1;
    for i in 0..n_nodes {
        if let Node::Known(k) = &spec.nodes[i] {
            if off[i] < INF && k.order() + off[i] < spec.order {
                return Err(SeriesError::OrderTooLow {
                    have: k.order(),
                    need: spec.order - off[i],
                });
            }
        }
    }
    let unknown = spec.unknown.filter(|(u, _)| u.0 < n_nodes);
    let mut coeffs: Vec<Vec<MarkerPoly>> = vec![Vec::new(); n_nodes];
    let val = &spec.val;
    for n in 0..=spec.order {
        for i in 0..n_nodes {
            if off[i] > n {
                continue;
            }
            let target = n - off[i];
            let (lower, upper) = coeffs.split_at_mut(i);
            let mine = &mut upper[0];
            while mine.len() <= target {
                let m = mine.len();
                let c = match &spec.nodes[i] {
                    Node::Known(k) => k.z_coeff(m),
                    Node::Unknown => unreachable!("unknown coefficient {m} requested at step {n}"),
                    Node::Lin(t) => {
                        let parts: Vec<_> = t
                            .iter()
                            .filter(|(c, x)| !c.is_zero() && val[x.0] <= m)
                            .map(|(c, x)| (c, &lower[x.0][m]))
                            .collect();
                        MarkerPoly::linear_combination(&parts, spec.markers.len())
                    }
                    Node::Product(a, b) => {
                        let (va, vb) = (val[a.0], val[b.0]);
                        if va.saturating_add(vb) > m {
                            spec.zero_poly()
                        } else {
                            let pairs: Vec<_> = (va..=m - vb)
                                .map(|j| (&lower[a.0][j], &lower[b.0][m - j]))
                                .collect();
                            MarkerPoly::sum_of_products(&pairs, spec.markers.len())
                        }
                    }
                    Node::Shift(x, j) => {
                        if m < *j || val[x.0] > m - j {
                            spec.zero_poly()
                        } else {
                            lower[x.0][m - j].clone()
                        }
                    }
                    Node::Mark(x, marker, power) => {
                        if val[x.0] > m {
                            spec.zero_poly()
                        } else {
                            lower[x.0][m].mark(*marker, *power)
                        }
                    }
                };
                mine.push(c);
            }
        }
        let next = coeffs[root.0][n].clone();
        if let Some((u, declared)) = unknown {
            if n < declared && !next.is_zero() {
                return Err(SeriesError::Valuation { declared, at: n });
            }
            if u.0 != root.0 {
                coeffs[u.0].push(next);
            }
        }
    }
    let terms = coeffs[root.0].clone();
    let out = TruncSeries::from_parts(spec.order, spec.markers.clone(), terms);
    if !out.marker_bound_holds() {
        let (z, exps, _) = out
            .monomials()
            .into_iter()
            .find(|(z, e, _)| e.iter().any(|&x| x as usize > *z))
            .expect("a violating monomial exists");
        return Err(SeriesError::MarkerBound { z, exps });
    }
    Ok(out)
}

/// `[z^n] M` where `M = z·φ(M)`, i.e. `(1/n)·[ω^{n-1}] φ(ω)^n`.
///
/// The power `φ^n` is expanded with the J. C. P. Miller recurrence, which only
/// needs `φ_0` to be invertible.
pub fn lagrange_coeff(phi: &TruncSeries, n: usize) -> Result<ExactRational, SeriesError> {
    if n == 0 {
        return Err(SeriesError::Invalid("Lagrange coefficient needs n >= 1".into()));
    }
    if phi.arity() != 0 {
        return Err(SeriesError::Invalid("Lagrange coefficient needs a univariate series".into()));
    }
    let phi0 = phi.coeff(0, &[]);
    if phi0.is_zero() {
        return Err(SeriesError::ZeroConstantTerm);
    }
    if phi.order() < n - 1 {
        return Err(SeriesError::OrderTooLow {
            have: phi.order(),
            need: n - 1,
        });
    }
    let f: Vec<ExactRational> = (0..n).map(|j| phi.coeff(j, &[])).collect();
    let p = power_coeffs(&f, n, n - 1);
    Ok(&p[n - 1] / rat_int(n as i64))
}

/// First `kmax + 1` coefficients of `f^e` by Miller's recurrence.
pub(crate) fn power_coeffs(f: &[ExactRational], e: usize, kmax: usize) -> Vec<ExactRational> {
    if f.iter().all(|x| x.is_integer()) {
        let ints: Vec<BigInt> = f.iter().map(|x| x.to_integer()).collect();
        return integer_power_coeffs(&ints, e, kmax)
            .into_iter()
            .map(ExactRational::from_integer)
            .collect();
    }
    let f0_inv = f[0].recip();
    let mut p = Vec::with_capacity(kmax + 1);
    p.push(num_traits::pow(f[0].clone(), e));
    let e1 = rat_int(e as i64 + 1);
    for k in 1..=kmax {
        let mut acc = super::RatAccumulator::new();
        for j in 1..=k.min(f.len() - 1) {
            if f[j].is_zero() {
                continue;
            }
            let w = &e1 * rat_int(j as i64) - rat_int(k as i64);
            acc.add(&(w * &f[j] * &p[k - j]));
        }
        p.push(acc.finish() * &f0_inv / rat_int(k as i64));
    }
    p
}

/// Integer version of [`power_coeffs`]; every division by `k·f_0` is exact
/// because the coefficients of `f^e` are integers.
fn integer_power_coeffs(f: &[BigInt], e: usize, kmax: usize) -> Vec<BigInt> {
    let mut p = Vec::with_capacity(kmax + 1);
    p.push(num_traits::pow(f[0].clone(), e));
    let e1 = BigInt::from(e) + 1;
    for k in 1..=kmax {
        let mut acc = BigInt::zero();
        for j in 1..=k.min(f.len() - 1) {
            if f[j].is_zero() {
                continue;
            }
            let w = &e1 * j - k;
            acc += w * &f[j] * &p[k - j];
        }
        let d = &f[0] * k;
        debug_assert!((&acc % &d).is_zero());
        p.push(acc / d);
    }
    p
}
