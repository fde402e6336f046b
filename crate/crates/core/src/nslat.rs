//! Integer lattices for the Néron-Severi computations: Gram matrices, exact determinants and
//! signatures, the rank-19 lattice from the (−2)-curve graph, sections of height pairing,
//! and orthogonal complements inside U².

use crate::error::{Error, Result};
use crate::rat::{fmt_q, q, qi, Q};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GramLattice {
    pub labels: Vec<String>,
    pub gram: Vec<Vec<i64>>,
}

impl GramLattice {
    pub fn new(gram: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) || labels.len() != n {
            return Err(Error::Integrity("Gram matrix must be square with one label per row".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Integrity(format!("Gram matrix not symmetric at ({i},{j})")));
                }
            }
        }
        Ok(GramLattice { labels, gram })
    }

    pub fn unlabeled(gram: Vec<Vec<i64>>) -> Result<Self> {
        let labels = (0..gram.len()).map(|i| format!("v{i}")).collect();
        GramLattice::new(gram, labels)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> BigInt {
        bareiss_det(&self.gram)
    }

    /// `(positive, negative, zero)` eigenvalue counts.
    pub fn signature(&self) -> (usize, usize, usize) {
        inertia(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn rescale(&self, k: i64) -> GramLattice {
        let gram = self.gram.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
        GramLattice { labels: self.labels.clone(), gram }
    }

    pub fn block(&self, idx: &[usize]) -> GramLattice {
        let gram = idx.iter().map(|&i| idx.iter().map(|&j| self.gram[i][j]).collect()).collect();
        GramLattice { labels: idx.iter().map(|&i| self.labels[i].clone()).collect(), gram }
    }
}

pub fn direct_sum(parts: &[&GramLattice]) -> GramLattice {
    let n: usize = parts.iter().map(|p| p.rank()).sum();
    let mut gram = vec![vec![0; n]; n];
    let mut labels = Vec::with_capacity(n);
    let mut off = 0;
    for p in parts {
        for i in 0..p.rank() {
            for j in 0..p.rank() {
                gram[off + i][off + j] = p.gram[i][j];
            }
        }
        labels.extend(p.labels.iter().cloned());
        off += p.rank();
    }
    GramLattice { labels, gram }
}

fn e8_cartan() -> Vec<Vec<i64>> {
    // chain 0-1-2-3-4-5-6 with node 7 on node 4
    let mut g = vec![vec![0; 8]; 8];
    for i in 0..8 {
        g[i][i] = 2;
    }
    for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)] {
        g[a][b] = -1;
        g[b][a] = -1;
    }
    g
}

/// `E8`, `E8(-1)`, `U`, `A1`, `A1(-1)` or `<n>`.
pub fn standard_lattice(name: &str) -> Result<GramLattice> {
    let g = match name {
        "E8" => e8_cartan(),
        "E8(-1)" => e8_cartan().into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect(),
        "U" => vec![vec![0, 1], vec![1, 0]],
        "A1" => vec![vec![2]],
        "A1(-1)" => vec![vec![-2]],
        _ => {
            let n = name
                .strip_prefix('<')
                .and_then(|s| s.strip_suffix('>'))
                .and_then(|s| s.trim().parse::<i64>().ok())
                .ok_or_else(|| Error::Config(format!("unknown lattice {name}")))?;
            vec![vec![n]]
        }
    };
    let labels = (0..g.len()).map(|i| format!("{name}.{i}")).collect();
    GramLattice::new(g, labels)
}

pub fn bareiss_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else { return BigInt::zero() };
            a.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Sylvester inertia by symmetric elimination over Q.
pub fn inertia(m: &[Vec<i64>]) -> (usize, usize, usize) {
    let mut a: Vec<Vec<Q>> = m.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    while !a.is_empty() {
        let n = a.len();
        let piv = (0..n).find(|&i| !a[i][i].is_zero());
        let p = match piv {
            Some(p) => p,
            None => match (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero()) {
                None => {
                    zero += n;
                    break;
                }
                Some((i, j)) => {
                    // e_i += e_j makes the diagonal entry 2·a_ij nonzero
                    for k in 0..n {
                        let v = a[j][k].clone();
                        a[i][k] += v;
                    }
                    for k in 0..n {
                        let v = a[k][j].clone();
                        a[k][i] += v;
                    }
                    i
                }
            },
        };
        let d = a[p][p].clone();
        if d.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&i| i != p).collect();
        a = rest
            .iter()
            .map(|&i| rest.iter().map(|&j| &a[i][j] - &a[i][p] * &a[p][j] / &d).collect())
            .collect();
    }
    (pos, neg, zero)
}

/// The (−2)-curves and sections of the generic rank-19 fibration, with the intersection graph.
pub struct CurveGraph {
    pub names: Vec<&'static str>,
    pub gram: Vec<Vec<i64>>,
}

pub const NODES: [&str; 22] = [
    "O", "f0", "f1", "f2", "f3", "f4", "f5", "f6", "f7", "e0", "e1", "e2", "e3", "e4", "e5", "e6", "e7", "g0", "g1", "g2",
    "g3", "T",
];

const EDGES: [(&str, &str); 24] = [
    ("O", "f7"),
    ("f7", "f6"),
    ("f6", "f5"),
    ("f5", "f3"),
    ("f3", "f2"),
    ("f2", "f1"),
    ("f1", "f0"),
    ("f0", "T"),
    ("e7", "T"),
    ("e6", "e7"),
    ("e6", "e5"),
    ("e5", "e3"),
    ("e4", "e3"),
    ("e3", "e2"),
    ("e1", "e2"),
    ("e1", "e0"),
    ("e0", "O"),
    ("O", "g0"),
    ("g0", "g1"),
    ("g1", "g3"),
    ("g3", "T"),
    ("g3", "g2"),
    ("g2", "g0"),
    ("f3", "f4"),
];

impl CurveGraph {
    pub fn new() -> Self {
        let n = NODES.len();
        let mut gram = vec![vec![0; n]; n];
        for (i, row) in gram.iter_mut().enumerate() {
            row[i] = -2;
        }
        for (a, b) in EDGES {
            let (i, j) = (node(a), node(b));
            gram[i][j] = 1;
            gram[j][i] = 1;
        }
        // T·O = 0 holds in characteristic zero; no edge joins them.
        CurveGraph { names: NODES.to_vec(), gram }
    }

    pub fn dot(&self, u: &[i64], v: &[i64]) -> i64 {
        let mut s = 0;
        for (i, &a) in u.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in v.iter().enumerate() {
                s += a * b * self.gram[i][j];
            }
        }
        s
    }
}

impl Default for CurveGraph {
    fn default() -> Self {
        CurveGraph::new()
    }
}

fn node(name: &str) -> usize {
    NODES.iter().position(|n| *n == name).unwrap_or_else(|| panic!("unknown node {name}"))
}

fn vec_of(terms: &[(i64, &str)]) -> Vec<i64> {
    let mut v = vec![0; NODES.len()];
    for &(c, n) in terms {
        v[node(n)] += c;
    }
    v
}

fn axpy(a: i64, x: &[i64], y: &[i64]) -> Vec<i64> {
    x.iter().zip(y).map(|(p, q)| a * p + q).collect()
}

/// The 19 basis vectors `f1..f7, O, e1..e7, T, γ3+α, γ2, γ1−2(γ3+α)−γ2` in node coordinates.
pub fn generic_basis() -> Vec<(String, Vec<i64>)> {
    let mut out = Vec::new();
    for i in 1..=7 {
        let n = format!("f{i}");
        out.push((n.clone(), vec_of(&[(1, &n)])));
    }
    out.push(("O".into(), vec_of(&[(1, "O")])));
    for i in 1..=7 {
        let n = format!("e{i}");
        out.push((n.clone(), vec_of(&[(1, &n)])));
    }
    out.push(("T".into(), vec_of(&[(1, "T")])));
    let alpha = vec_of(&[(2, "e1"), (4, "e2"), (6, "e3"), (3, "e4"), (5, "e5"), (4, "e6"), (3, "e7"), (2, "T")]);
    let x = axpy(1, &alpha, &vec_of(&[(1, "g3")]));
    let g2 = vec_of(&[(1, "g2")]);
    let gamma = axpy(-1, &g2, &axpy(-2, &x, &vec_of(&[(1, "g1")])));
    out.push(("g3+alpha".into(), x));
    out.push(("g2".into(), g2));
    out.push(("gamma".into(), gamma));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct NsGeneric {
    pub lattice: GramLattice,
    pub det: String,
    pub signature: (usize, usize, usize),
    pub l1_det: String,
    pub l2_det: String,
    pub u1: Vec<Vec<i64>>,
    pub gamma_sq: i64,
    pub orthogonal: bool,
}

const L1: [usize; 8] = [7, 0, 1, 2, 3, 4, 5, 6];
const L2: [usize; 8] = [8, 9, 10, 11, 12, 13, 14, 15];
const U1: [usize; 2] = [16, 17];
const GAMMA: usize = 18;

fn blocks() -> Vec<Vec<usize>> {
    vec![L1.to_vec(), L2.to_vec(), U1.to_vec(), vec![GAMMA]]
}

/// Gram of the generic Néron-Severi basis, checked against the block decomposition.
pub fn ns_gram_generic() -> Result<NsGeneric> {
    let g = CurveGraph::new();
    let basis = generic_basis();
    let gram: Vec<Vec<i64>> = basis.iter().map(|(_, u)| basis.iter().map(|(_, v)| g.dot(u, v)).collect()).collect();
    let lattice = GramLattice::new(gram, basis.iter().map(|(n, _)| n.clone()).collect())?;
    let bl = blocks();
    let mut orthogonal = true;
    for (a, ba) in bl.iter().enumerate() {
        for bb in &bl[a + 1..] {
            orthogonal &= ba.iter().all(|&i| bb.iter().all(|&j| lattice.gram[i][j] == 0));
        }
    }
    let e8 = standard_lattice("E8(-1)")?;
    let l1 = lattice.block(&L1);
    let l2 = lattice.block(&L2);
    let u1 = lattice.block(&U1).gram;
    let gamma_sq = lattice.gram[GAMMA][GAMMA];
    let ok = orthogonal
        && u1 == vec![vec![0, 1], vec![1, -2]]
        && gamma_sq == -4
        && l1.det() == e8.det()
        && l2.det() == e8.det()
        && l1.signature() == (0, 8, 0)
        && l2.signature() == (0, 8, 0)
        && l1.is_even()
        && l2.is_even();
    if !ok {
        return Err(Error::Integrity("graph Gram does not split as E8(-1)²⊕U⊕<-4>".into()));
    }
    Ok(NsGeneric {
        det: lattice.det().to_string(),
        signature: lattice.signature(),
        l1_det: l1.det().to_string(),
        l2_det: l2.det().to_string(),
        u1,
        gamma_sq,
        orthogonal,
        lattice,
    })
}

/// Intersection numbers of an optimal Mordell-Weil generator P with fiber components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SectionProfile {
    pub p_o: i64,
    pub p_e7: i64,
    pub p_f7: i64,
    /// `P·γ_i`; exactly one entry is 1.
    pub p_g: [i64; 4],
}

impl SectionProfile {
    /// Optimal profile meeting `f7`, `γ_g` and, when `e7`, the component `e7`.
    pub fn optimal(p_o: i64, e7: bool, g: usize) -> Self {
        let mut p_g = [0; 4];
        p_g[g] = 1;
        SectionProfile { p_o, p_e7: e7 as i64, p_f7: 1, p_g }
    }

    pub fn validate(&self) -> Result<()> {
        let bit = |x: i64| x == 0 || x == 1;
        if self.p_o < 0 || !bit(self.p_e7) || !bit(self.p_f7) || !self.p_g.iter().all(|&x| bit(x)) {
            return Err(Error::Domain("intersection bits must be 0 or 1 and P·O ≥ 0".into()));
        }
        if self.p_g.iter().sum::<i64>() != 1 {
            return Err(Error::Domain("a section meets exactly one component of the I4 fiber".into()));
        }
        Ok(())
    }

    fn is_optimal(&self) -> bool {
        self.p_f7 == 1 && self.p_g[1] == 0
    }
}

pub fn height(p: &SectionProfile) -> Result<Q> {
    p.validate()?;
    Ok(qi(4) + qi(2 * p.p_o) - q(3, 2) * qi(p.p_e7) - q(3, 2) * qi(1 - p.p_f7) - q(3, 4) * qi(p.p_g[2]) - qi(p.p_g[3]))
}

/// `P·T` forced by `⟨P,T⟩ = 0`.
pub fn p_t_relation(p: &SectionProfile) -> Q {
    qi(2) + qi(p.p_o) - q(3, 2) * qi(p.p_e7) - (q(1, 2) * qi(p.p_g[2]) + qi(p.p_g[3]))
}

pub fn delta(p: &SectionProfile) -> Q {
    let (e7, g2, g3) = (p.p_e7, p.p_g[2], p.p_g[3]);
    q(8 + 3 * g2 - e7 * (1 + 6 * g2 + 4 * g3) + 4 * p.p_o, 4)
}

/// The expanded form of δ in terms of `p_T` before substituting the relation.
pub fn delta_expanded(p: &SectionProfile) -> Q {
    let pt = p_t_relation(p);
    let (e7, g2, g3, po) = (qi(p.p_e7), qi(p.p_g[2]), qi(p.p_g[3]), qi(p.p_o));
    qi(-2) - &pt * (qi(3) + &pt) + &g2 + &g3 + &e7 * (qi(2) + qi(3) * &po + qi(2) * &g3)
        + &pt * (&pt + &g2 + qi(2) * &g3)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Admissibility {
    pub p_e7: i64,
    pub p_g2: i64,
    pub p_g3: i64,
    pub p_o: i64,
    pub delta: String,
    pub p_t: String,
    pub admissible: bool,
}

/// All optimal bit patterns with `P·O ∈ {0,1,2}` and whether δ and `p_T` are integral.
pub fn delta_enumeration() -> Vec<Admissibility> {
    let mut out = Vec::new();
    for e7 in [false, true] {
        for g in [0, 2, 3] {
            for p_o in 0..=2 {
                let p = SectionProfile::optimal(p_o, e7, g);
                let d = delta(&p);
                let pt = p_t_relation(&p);
                out.push(Admissibility {
                    p_e7: p.p_e7,
                    p_g2: p.p_g[2],
                    p_g3: p.p_g[3],
                    p_o,
                    admissible: d.is_integer() && pt.is_integer(),
                    delta: fmt_q(&d),
                    p_t: fmt_q(&pt),
                });
            }
        }
    }
    out
}

/// Admissible `(p_e7, p_γ2, p_γ3)` triples.
pub fn admissible_triples() -> BTreeSet<(i64, i64, i64)> {
    delta_enumeration().into_iter().filter(|a| a.admissible).map(|a| (a.p_e7, a.p_g2, a.p_g3)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CmGram {
    pub profile: SectionProfile,
    pub class: String,
    pub p_t: i64,
    pub height: String,
    /// Gram in the basis `b1..b19, P`.
    pub lattice: GramLattice,
    pub det: String,
    pub signature: (usize, usize, usize),
    /// Gram of `γ` and the projection of P off `E8(-1)²⊕U`, reduced to `0 ≤ b ≤ 2`.
    pub block: [[i64; 2]; 2],
    /// `[[−4, −2p_e7+3p_γ2+2p_γ3], [·, −2δ]]`.
    pub closed_form: [[i64; 2]; 2],
    pub delta_expanded: String,
    /// `det = −4·⟨P,P⟩`.
    pub det_is_height: bool,
}

impl CmGram {
    pub fn passed(&self) -> bool {
        self.block == self.closed_form && self.det_is_height
    }
}

fn solve_rational(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut m: Vec<Vec<Q>> = a.iter().zip(b).map(|(r, &y)| r.iter().map(|&x| qi(x)).chain([qi(y)]).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        let inv = m[c][c].recip();
        for k in c..=n {
            m[c][k] = &m[c][k] * &inv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for k in c..=n {
                    let v = &m[c][k] * &f;
                    m[r][k] -= v;
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n].clone()).collect())
}

/// The rank-20 lattice spanned by the generic basis and an optimal generator with the given profile.
pub fn ns_cm_gram(p: &SectionProfile) -> Result<CmGram> {
    p.validate()?;
    if !p.is_optimal() {
        return Err(Error::Domain("profile must be optimal (P·f7 = 1, P·γ1 = 0)".into()));
    }
    let pt = p_t_relation(p);
    let d = delta(p);
    if !pt.is_integer() || !d.is_integer() {
        return Err(Error::Domain(format!("inadmissible profile: p_T = {}, δ = {}", fmt_q(&pt), fmt_q(&d))));
    }
    let p_t = pt.to_integer().to_i64().unwrap();
    let g = CurveGraph::new();
    // P·node for every node
    let mut pn = vec![0i64; NODES.len()];
    pn[node("O")] = p.p_o;
    pn[node("f7")] = p.p_f7;
    pn[node("f0")] = 1 - p.p_f7;
    pn[node("e7")] = p.p_e7;
    pn[node("e0")] = 1 - p.p_e7;
    for i in 0..4 {
        pn[node(&format!("g{i}"))] = p.p_g[i];
    }
    pn[node("T")] = p_t;
    let basis = generic_basis();
    let pdot: Vec<i64> = basis.iter().map(|(_, v)| v.iter().zip(&pn).map(|(a, b)| a * b).sum()).collect();
    let mut gram: Vec<Vec<i64>> = basis.iter().map(|(_, u)| basis.iter().map(|(_, v)| g.dot(u, v)).collect()).collect();
    for (i, row) in gram.iter_mut().enumerate() {
        row.push(pdot[i]);
    }
    let mut last = pdot.clone();
    last.push(-2);
    gram.push(last);
    let mut labels: Vec<String> = basis.iter().map(|(n, _)| n.clone()).collect();
    labels.push("P".into());
    let lattice = GramLattice::new(gram, labels)?;

    let sub: Vec<usize> = (0..18).collect();
    let gsub: Vec<Vec<i64>> = sub.iter().map(|&i| sub.iter().map(|&j| lattice.gram[i][j]).collect()).collect();
    let rhs: Vec<i64> = sub.iter().map(|&i| pdot[i]).collect();
    let coef = solve_rational(&gsub, &rhs).ok_or_else(|| Error::Integrity("E8(-1)²⊕U block is singular".into()))?;
    if coef.iter().any(|c| !c.is_integer()) {
        return Err(Error::Integrity("projection of P off E8(-1)²⊕U is not integral".into()));
    }
    let coef: Vec<i64> = coef.iter().map(|c| c.to_integer().to_i64().unwrap()).collect();
    // P~ = P − Σ c_i b_i; P~·γ = P·γ, P~² = P² − Σ c_i (b_i·P)
    let mut b = pdot[GAMMA];
    let mut c = -2 - coef.iter().zip(&rhs).map(|(x, y)| x * y).sum::<i64>();
    // P~ + kγ and ±P~ bring b into 0..=2
    let shift = |b: &mut i64, c: &mut i64, k: i64| {
        *c += 2 * k * *b - 4 * k * k;
        *b -= 4 * k;
    };
    let k = Integer::div_floor(&b, &4);
    shift(&mut b, &mut c, k);
    if b == 3 {
        b = -3;
        shift(&mut b, &mut c, -1);
    }
    let block = [[-4, b], [b, c]];
    let cb = -2 * p.p_e7 + 3 * p.p_g[2] + 2 * p.p_g[3];
    let closed_form = [[-4, cb], [cb, -2 * d.to_integer().to_i64().unwrap()]];
    let class = match (p.p_e7, p.p_g[3]) {
        (0, 0) => "L0",
        (1, 0) => "L1",
        (0, 1) => "L2",
        _ => "?",
    };
    let h = height(p)?;
    let det = lattice.det();
    Ok(CmGram {
        profile: *p,
        class: class.into(),
        p_t,
        height: fmt_q(&h),
        det: det.to_string(),
        det_is_height: Q::from(det) == qi(-4) * h,
        signature: lattice.signature(),
        lattice,
        block,
        closed_form,
        delta_expanded: fmt_q(&delta_expanded(p)),
    })
}

/// Integer kernel of a `r×n` matrix via column Hermite reduction.
fn integer_kernel(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = m.len();
    let n = m[0].len();
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let col_op = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, j: usize, k: usize, f: i64| {
        // column j -= f·column k
        for row in a.iter_mut() {
            row[j] -= f * row[k];
        }
        for row in u.iter_mut() {
            row[j] -= f * row[k];
        }
    };
    let swap = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, j: usize, k: usize| {
        for row in a.iter_mut() {
            row.swap(j, k);
        }
        for row in u.iter_mut() {
            row.swap(j, k);
        }
    };
    let mut piv = 0;
    for i in 0..r {
        if piv == n {
            break;
        }
        loop {
            let nz: Vec<usize> = (piv..n).filter(|&j| a[i][j] != 0).collect();
            if nz.is_empty() {
                break;
            }
            let &best = nz.iter().min_by_key(|&&j| a[i][j].abs()).unwrap();
            swap(&mut a, &mut u, piv, best);
            let mut done = true;
            for j in piv + 1..n {
                if a[i][j] != 0 {
                    let f = Integer::div_floor(&a[i][j], &a[i][piv]);
                    col_op(&mut a, &mut u, j, piv, f);
                    done &= a[i][j] == 0;
                }
            }
            if done {
                piv += 1;
                break;
            }
        }
    }
    (piv..n).map(|j| u.iter().map(|row| row[j]).collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Complement {
    pub gram: [[i64; 2]; 2],
    pub expected: [[i64; 2]; 2],
    /// `α1 − aα0` and `bα0 + cβ0 − β1` lie in and generate the computed kernel.
    pub spans: bool,
    /// Whether `α0 − aα1` and `bα1 + cβ0 − β1` are orthogonal to the embedded lattice.
    pub printed_orthogonal: bool,
}

impl Complement {
    pub fn passed(&self) -> bool {
        self.spans && self.gram == self.expected
    }
}

fn u2() -> Vec<Vec<i64>> {
    // α0, α1, β0, β1
    vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]]
}

fn dot(g: &[Vec<i64>], u: &[i64], v: &[i64]) -> i64 {
    (0..u.len()).map(|i| (0..v.len()).map(|j| u[i] * g[i][j] * v[j]).sum::<i64>()).sum()
}

/// Orthogonal complement in U² of `[[2a,b],[b,2c]]` embedded by `x ↦ aα0+α1+bβ0`, `y ↦ cβ0+β1`.
pub fn u2_complement(a: i64, b: i64, c: i64) -> Result<Complement> {
    let g = u2();
    let x = vec![a, 1, b, 0];
    let y = vec![0, 0, c, 1];
    if [dot(&g, &x, &x), dot(&g, &x, &y), dot(&g, &y, &y)] != [2 * a, b, 2 * c] {
        return Err(Error::Integrity("embedding is not isometric".into()));
    }
    let rows: Vec<Vec<i64>> = [&x, &y].iter().map(|v| (0..4).map(|j| dot(&g, v, &unit(j))).collect()).collect();
    let kernel = integer_kernel(&rows);
    if kernel.len() != 2 {
        return Err(Error::Integrity("complement does not have rank 2".into()));
    }
    let stated = [vec![-a, 1, 0, 0], vec![b, 0, c, -1]];
    let printed = [vec![1, -a, 0, 0], vec![0, b, c, -1]];
    let printed_orthogonal = printed.iter().all(|v| rows.iter().all(|r| r.iter().zip(v).map(|(p, q)| p * q).sum::<i64>() == 0));
    // stated = M · kernel with M integral and det ±1
    let mut m = [[Q::zero(), Q::zero()], [Q::zero(), Q::zero()]];
    let mut spans = true;
    for (i, v) in stated.iter().enumerate() {
        spans &= rows.iter().all(|r| r.iter().zip(v).map(|(p, q)| p * q).sum::<i64>() == 0);
        match least_coords(&kernel, v) {
            Some(c) => m[i] = c,
            None => spans = false,
        }
    }
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    spans &= m.iter().flatten().all(|x| x.is_integer()) && det.abs().is_one();
    let gram = [
        [dot(&g, &stated[0], &stated[0]), dot(&g, &stated[0], &stated[1])],
        [dot(&g, &stated[1], &stated[0]), dot(&g, &stated[1], &stated[1])],
    ];
    Ok(Complement { gram, expected: [[-2 * a, b], [b, -2 * c]], spans, printed_orthogonal })
}

fn unit(j: usize) -> Vec<i64> {
    (0..4).map(|i| (i == j) as i64).collect()
}

/// Coordinates of `v` in the span of two vectors, if it lies there.
fn least_coords(k: &[Vec<i64>], v: &[i64]) -> Option<[Q; 2]> {
    for i in 0..4 {
        for j in i + 1..4 {
            let det = k[0][i] * k[1][j] - k[0][j] * k[1][i];
            if det != 0 {
                let s = q(v[i] * k[1][j] - v[j] * k[1][i], det);
                let t = q(k[0][i] * v[j] - k[0][j] * v[i], det);
                let ok = (0..4).all(|l| &s * qi(k[0][l]) + &t * qi(k[1][l]) == qi(v[l]));
                return ok.then_some([s, t]);
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct T1Lattice {
    /// Gram of `O, F, Q1 − O − 2F`.
    pub gram: Vec<Vec<i64>>,
    /// Gram of `O, F, Q1 − O + 2F`.
    pub printed_gram: Vec<Vec<i64>>,
    pub height: String,
    pub ns_det: String,
    pub transcendental: [[i64; 2]; 2],
}

impl T1Lattice {
    pub fn passed(&self) -> bool {
        self.gram == vec![vec![-2, 1, 0], vec![1, 0, 0], vec![0, 0, -4]]
            && self.height == "4"
            && self.ns_det == "-8"
            && self.transcendental == [[2, 0], [0, 4]]
    }
}

/// The t = 1 lattice from the Inose model: two II*, one I2 and the section Q1 of height 4.
pub fn t1_lattice() -> Result<T1Lattice> {
    // O, F, Q1 with Q1·O = 0 and Q1 meeting every fiber in the component of O
    let g = vec![vec![-2, 1, 0], vec![1, 0, 1], vec![0, 1, -2]];
    let gram_of = |vs: &[[i64; 3]]| -> Vec<Vec<i64>> {
        vs.iter().map(|u| vs.iter().map(|v| dot(&g, u, v)).collect()).collect()
    };
    let gram = gram_of(&[[1, 0, 0], [0, 1, 0], [-1, -2, 1]]);
    let printed_gram = gram_of(&[[1, 0, 0], [0, 1, 0], [-1, 2, 1]]);
    let height = qi(2) * qi(2) + qi(2) * qi(g[0][2]);
    let e8 = standard_lattice("E8(-1)")?;
    let a1 = standard_lattice("A1(-1)")?;
    let ofq = GramLattice::unlabeled(gram.clone())?;
    let ns = direct_sum(&[&e8, &e8, &a1, &ofq]);
    let c = u2_complement(-1, 0, -2)?;
    Ok(T1Lattice {
        gram,
        printed_gram,
        height: fmt_q(&height),
        ns_det: ns.det().to_string(),
        transcendental: c.gram,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table5Row {
    pub t: String,
    pub abc: [i64; 3],
    pub class: String,
    pub p_o: Option<i64>,
    pub transcendental: [[i64; 2]; 2],
    pub passed: bool,
    pub detail: String,
}

/// Checks every rational CM row's rank-2 block against the lattice classes and the section heights.
pub fn verify_table5() -> Result<Vec<Table5Row>> {
    let mut out = Vec::new();
    for r in &crate::cmdata::tables().records {
        let [a, b, c] = r.ns;
        let t = fmt_q(&r.t);
        let comp = u2_complement(a / 2, b, c / 2)?;
        let mut row = Table5Row {
            t,
            abc: r.ns,
            class: String::new(),
            p_o: None,
            transcendental: comp.gram,
            passed: false,
            detail: String::new(),
        };
        if r.ns == [-2, 0, -4] {
            let l4 = t1_lattice()?;
            row.class = "L4".into();
            row.passed = r.t == qi(1) && l4.passed() && comp.passed();
            row.detail = "E8(-1)²⊕U⊕<-2>⊕<-4>".into();
        } else if a == -4 && (b == 0 || b == 2) && (-c - 4) >= 0 && (-c - 4) % 2 == 0 {
            let p_o = (-c - 4) / 2;
            let profile = SectionProfile::optimal(p_o, false, if b == 0 { 0 } else { 3 });
            let g = ns_cm_gram(&profile)?;
            row.class = g.class.clone();
            row.p_o = Some(p_o);
            row.passed = g.passed() && g.block == [[a, b], [b, c]] && comp.passed();
            row.detail = format!("height {}, det {}", g.height, g.det);
        } else {
            row.detail = "block matches no lattice class".into();
        }
        out.push(row);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_dets() {
        assert_eq!(standard_lattice("U").unwrap().det(), BigInt::from(-1));
        let e8 = standard_lattice("E8(-1)").unwrap();
        assert_eq!(e8.det(), BigInt::one());
        assert_eq!(e8.signature(), (0, 8, 0));
        let m4 = standard_lattice("<-4>").unwrap();
        let u = standard_lattice("U").unwrap();
        let l = direct_sum(&[&e8, &e8, &u, &m4]);
        assert_eq!(l.det(), BigInt::from(4));
        assert_eq!(l.signature(), (1, 18, 0));
        assert!(standard_lattice("D4").is_err());
        assert_eq!(u.rescale(2).det(), BigInt::from(-4));
    }

    #[test]
    fn generic_ns() {
        let n = ns_gram_generic().unwrap();
        assert_eq!(n.det, "4");
        assert_eq!(n.signature, (1, 18, 0));
        assert_eq!(n.u1, vec![vec![0, 1], vec![1, -2]]);
        assert_eq!(n.gamma_sq, -4);
        assert!(n.orthogonal);
    }

    #[test]
    fn heights_and_pt() {
        assert_eq!(height(&SectionProfile::optimal(0, false, 0)).unwrap(), qi(4));
        assert_eq!(height(&SectionProfile::optimal(0, false, 3)).unwrap(), qi(3));
        assert_eq!(height(&SectionProfile::optimal(0, true, 2)).unwrap(), q(7, 4));
        assert_eq!(p_t_relation(&SectionProfile::optimal(0, false, 0)), qi(2));
        assert_eq!(p_t_relation(&SectionProfile::optimal(0, true, 2)), qi(0));
        assert_eq!(p_t_relation(&SectionProfile::optimal(0, true, 0)), q(1, 2));
        let bad = SectionProfile { p_o: 0, p_e7: 0, p_f7: 1, p_g: [1, 0, 1, 0] };
        assert!(height(&bad).is_err());
    }

    #[test]
    fn admissible_set() {
        let want: BTreeSet<_> = [(0, 0, 0), (0, 0, 1), (1, 1, 0)].into_iter().collect();
        assert_eq!(admissible_triples(), want);
        for a in delta_enumeration() {
            if (a.p_e7, a.p_g2, a.p_g3) == (0, 0, 0) {
                assert_eq!(a.delta, (2 + a.p_o).to_string());
            }
        }
    }

    #[test]
    fn cm_blocks() {
        for (e7, g, po, block) in [
            (false, 0, 0, [[-4, 0], [0, -4]]),
            (false, 3, 0, [[-4, 2], [2, -4]]),
            (true, 2, 1, [[-4, 1], [1, -4]]),
            (false, 0, 3, [[-4, 0], [0, -10]]),
        ] {
            let c = ns_cm_gram(&SectionProfile::optimal(po, e7, g)).unwrap();
            assert_eq!(c.block, block, "{c:?}");
            assert!(c.passed(), "{c:?}");
            assert_eq!(c.signature, (1, 19, 0));
        }
        assert!(ns_cm_gram(&SectionProfile::optimal(0, true, 0)).is_err());
    }

    #[test]
    fn t1_and_table5() {
        let l = t1_lattice().unwrap();
        assert!(l.passed(), "{l:?}");
        assert_ne!(l.printed_gram, l.gram);
        let rows = verify_table5().unwrap();
        assert_eq!(rows.len(), 15);
        for r in &rows {
            assert!(r.passed, "{r:?}");
        }
        let find = |t: &str| rows.iter().find(|r| r.t == t).unwrap();
        assert_eq!((find("9").class.as_str(), find("9").p_o), ("L0", Some(1)));
        assert_eq!(find("1").class, "L4");
        assert_eq!((find("-777924").class.as_str(), find("-777924").p_o), ("L2", Some(17)));
    }

    #[test]
    fn complements() {
        assert_eq!(u2_complement(-2, 0, -2).unwrap().gram, [[4, 0], [0, 4]]);
        assert_eq!(u2_complement(0, 1, 0).unwrap().gram, [[0, 1], [1, 0]]);
        assert_eq!(u2_complement(-2, 1, -1).unwrap().gram, [[4, 1], [1, 2]]);
        for (a, b, c) in [(-2, 0, -2), (-2, 2, -5), (3, -1, 7), (0, 0, 0), (1, 4, -3), (-1, 0, 2)] {
            let x = u2_complement(a, b, c).unwrap();
            assert!(x.passed(), "{x:?}");
            assert_eq!(x.printed_orthogonal, a * a == 1 && b * (a - 1) == 0);
            let back = u2_complement(-a, b, -c).unwrap();
            assert_eq!(back.gram, [[2 * a, b], [b, 2 * c]]);
        }
        let t = u2_complement(-2, 2, -4).unwrap();
        assert_eq!(GramLattice::unlabeled(t.gram.iter().map(|r| r.to_vec()).collect()).unwrap().signature(), (2, 0, 0));
    }
}
