//! Diagram-level cross-check of four-plat closures through Goeritz matrices.
//!
//! Each summand is drawn from its twist vector as alternating horizontal and
//! vertical twist regions. The white regions of a checkerboard colouring form
//! a series-parallel graph: a horizontal region of `n` crossings adds a path
//! of `|n|` edges, a vertical region adds `|n|` parallel edges between the
//! summand's west and east white regions. The reduced weighted Laplacian of
//! that graph is a Goeritz matrix; `|det|` is the four-plat `p` and the
//! inverse form gives `q` up to sign and squares of units mod `p`.

use serde::Serialize;
use thiserror::Error;

use crate::arith::gcd;
use crate::fourplat::{closure_of_sum, ClosureError, FourPlat};
use crate::fraction::Fraction;
use crate::tangle::{fraction_of, twist_vector_of, TwistVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("empty tangle sum")]
    Empty,
    #[error("determinant {0} leaves no linking form to read")]
    DeterminantTooSmall(u64),
    #[error(transparent)]
    Closure(#[from] ClosureError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Closure {
    Numerator,
    Denominator,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Horizontal,
    Vertical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistRegion {
    pub orientation: Orientation,
    pub count: i64,
}

/// One summand; the infinity tangle has no regions and two separate white
/// regions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SummandDiagram {
    pub fraction: Fraction,
    pub regions: Vec<TwistRegion>,
}

impl SummandDiagram {
    pub fn twist_vector(&self) -> TwistVector {
        TwistVector(self.regions.iter().map(|r| r.count).collect())
    }

    /// Whether the drawing starts from the zero tangle (west and east white
    /// regions joined) rather than the infinity tangle.
    fn starts_shorted(&self) -> bool {
        self.regions
            .first()
            .is_some_and(|r| r.orientation == Orientation::Horizontal)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistRegionDiagram {
    pub summands: Vec<SummandDiagram>,
    pub closure: Closure,
}

impl TwistRegionDiagram {
    pub fn crossings(&self) -> u64 {
        self.summands
            .iter()
            .flat_map(|s| &s.regions)
            .map(|r| r.count.unsigned_abs())
            .sum()
    }
}

pub fn build_diagram(
    summands: &[Fraction],
    closure: Closure,
) -> Result<TwistRegionDiagram, OracleError> {
    if summands.is_empty() {
        return Err(OracleError::Empty);
    }
    let summands = summands
        .iter()
        .map(|&f| {
            let regions = match twist_vector_of(f) {
                Err(_) => Vec::new(),
                Ok(tv) => {
                    let odd = tv.entries().len() % 2 == 1;
                    tv.entries()
                        .iter()
                        .enumerate()
                        .map(|(i, &count)| TwistRegion {
                            orientation: if (i % 2 == 0) == odd {
                                Orientation::Horizontal
                            } else {
                                Orientation::Vertical
                            },
                            count,
                        })
                        .collect()
                }
            };
            let d = SummandDiagram { fraction: f, regions };
            debug_assert!(f.is_infinite() || fraction_of(&d.twist_vector()) == f);
            d
        })
        .collect();
    Ok(TwistRegionDiagram { summands, closure })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a] = b;
    }
}

/// Region graphs of the diagram. White regions carry the Goeritz edges; black
/// regions are only counted, to detect split diagrams.
#[derive(Default)]
struct RegionGraph {
    white: usize,
    black: usize,
    edges: Vec<(usize, usize, i64)>,
    white_joins: Vec<(usize, usize)>,
    black_joins: Vec<(usize, usize)>,
}

struct Ends {
    west: usize,
    east: usize,
    north: usize,
    south: usize,
}

impl RegionGraph {
    fn white(&mut self) -> usize {
        self.white += 1;
        self.white - 1
    }

    fn black(&mut self) -> usize {
        self.black += 1;
        self.black - 1
    }

    /// Draws one summand. Horizontal twists extend the east side, vertical
    /// twists the south side.
    fn summand(&mut self, s: &SummandDiagram) -> Ends {
        let west = self.white();
        let north = self.black();
        let shorted = s.starts_shorted();
        let mut east = if shorted { west } else { self.white() };
        let mut south = if shorted { self.black() } else { north };
        for r in &s.regions {
            let sign = r.count.signum();
            match r.orientation {
                Orientation::Horizontal => {
                    for _ in 0..r.count.abs() {
                        let next = self.white();
                        self.edges.push((east, next, sign));
                        east = next;
                    }
                }
                Orientation::Vertical => {
                    for _ in 0..r.count.abs() {
                        self.edges.push((west, east, sign));
                        south = self.black();
                    }
                }
            }
        }
        Ends { west, east, north, south }
    }
}

fn classes(n: usize, joins: &[(usize, usize)]) -> (UnionFind, Vec<usize>) {
    let mut uf = UnionFind((0..n).collect());
    for &(a, b) in joins {
        uf.union(a, b);
    }
    let mut roots: Vec<usize> = (0..n).map(|v| uf.find(v)).collect();
    roots.sort_unstable();
    roots.dedup();
    (uf, roots)
}

/// Goeritz matrix with the white region containing the first summand's west
/// side deleted, and whether the diagram is split.
fn goeritz_parts(d: &TwistRegionDiagram) -> (Vec<Vec<i64>>, bool) {
    let mut g = RegionGraph::default();
    let ends: Vec<Ends> = d.summands.iter().map(|s| g.summand(s)).collect();
    for w in ends.windows(2) {
        g.white_joins.push((w[0].east, w[1].west));
        g.black_joins.push((w[0].north, w[1].north));
        g.black_joins.push((w[0].south, w[1].south));
    }
    let (first, last) = (&ends[0], &ends[ends.len() - 1]);
    match d.closure {
        Closure::Numerator => g.white_joins.push((first.west, last.east)),
        Closure::Denominator => g.black_joins.push((first.north, first.south)),
    }
    let (mut uf, roots) = classes(g.white, &g.white_joins);
    let (_, black_roots) = classes(g.black, &g.black_joins);
    // faces = crossings + 1 + components for a plane diagram
    let faces = roots.len() + black_roots.len();
    let split = faces as u64 > d.crossings() + 2;
    let unbounded = uf.find(first.west);
    let n = roots.len();
    let mut lap = vec![vec![0i64; n]; n];
    for &(a, b, s) in &g.edges {
        let a = roots.binary_search(&uf.find(a)).expect("root");
        let b = roots.binary_search(&uf.find(b)).expect("root");
        if a == b {
            continue;
        }
        lap[a][b] -= s;
        lap[b][a] -= s;
        lap[a][a] += s;
        lap[b][b] += s;
    }
    let skip = roots.binary_search(&unbounded).expect("root");
    let matrix = (0..n)
        .filter(|&i| i != skip)
        .map(|i| (0..n).filter(|&j| j != skip).map(|j| lap[i][j]).collect())
        .collect();
    (matrix, split)
}

pub fn goeritz_matrix(d: &TwistRegionDiagram) -> Vec<Vec<i64>> {
    goeritz_parts(d).0
}

/// Exact determinant by fraction-free (Bareiss) elimination; 1 for the empty
/// matrix.
pub fn bareiss_determinant(m: &[Vec<i64>]) -> i128 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    if n == 0 {
        1
    } else {
        sign * a[n - 1][n - 1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoeritzData {
    pub matrix: Vec<Vec<i64>>,
    pub determinant: u64,
    /// Self-linking of a generator of the cover's first homology, times the
    /// determinant, reduced mod the determinant. Present when determinant >= 2.
    pub linking_q: Option<i64>,
}

/// `x^T adj(M) x = det(M + x x^T) - det(M)`.
fn adjugate_form(m: &[Vec<i64>], x: &[i64]) -> i128 {
    let bumped: Vec<Vec<i64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().enumerate().map(|(j, &v)| v + x[i] * x[j]).collect())
        .collect();
    bareiss_determinant(&bumped) - bareiss_determinant(m)
}

fn linking_value(m: &[Vec<i64>], p: u64) -> Option<i64> {
    let n = m.len();
    let p128 = p as i128;
    let unit = |v: i128| {
        let r = v.rem_euclid(p128) as i64;
        (gcd(r, p as i64) == 1).then_some(r)
    };
    let basis = |i: usize, j: Option<usize>| {
        let mut x = vec![0i64; n];
        x[i] = 1;
        if let Some(j) = j {
            x[j] += 1;
        }
        x
    };
    (0..n)
        .find_map(|i| unit(adjugate_form(m, &basis(i, None))))
        .or_else(|| {
            (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .find_map(|(i, j)| unit(adjugate_form(m, &basis(i, Some(j)))))
        })
}

pub fn goeritz(d: &TwistRegionDiagram) -> GoeritzData {
    let (matrix, split) = goeritz_parts(d);
    let determinant = if split {
        0
    } else {
        bareiss_determinant(&matrix).unsigned_abs() as u64
    };
    let linking_q = (determinant >= 2).then(|| linking_value(&matrix, determinant)).flatten();
    GoeritzData {
        matrix,
        determinant,
        linking_q,
    }
}

pub fn determinant(d: &TwistRegionDiagram) -> u64 {
    goeritz(d).determinant
}

pub fn linking_invariant(d: &TwistRegionDiagram) -> Result<i64, OracleError> {
    let data = goeritz(d);
    match data.linking_q {
        Some(q) => Ok(q),
        None => Err(OracleError::DeterminantTooSmall(data.determinant)),
    }
}

/// `value ≡ ±s²q (mod p)` for some unit `s`: the square class the linking
/// form can certify. Vacuous for `p < 3`.
pub fn in_linking_class(value: i64, p: i64, q: i64) -> bool {
    if p < 3 {
        return true;
    }
    (1..p)
        .filter(|&s| gcd(s, p) == 1)
        .map(|s| ((s as i128 * s as i128 * q as i128).rem_euclid(p as i128)) as i64)
        .any(|t| (value - t).rem_euclid(p) == 0 || (value + t).rem_euclid(p) == 0)
}

/// The oracle's reading of a closure and whether it matches a four-plat.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub determinant: u64,
    pub linking_q: Option<i64>,
    pub expected: FourPlat,
    pub determinant_matches: bool,
    pub linking_matches: bool,
}

impl OracleCheck {
    pub fn agrees(&self) -> bool {
        self.determinant_matches && self.linking_matches
    }
}

pub fn compare(data: &GoeritzData, expected: &FourPlat) -> OracleCheck {
    let p = expected.p();
    OracleCheck {
        determinant: data.determinant,
        linking_q: data.linking_q,
        expected: *expected,
        determinant_matches: data.determinant == p as u64,
        linking_matches: match data.linking_q {
            Some(v) => in_linking_class(v, p, expected.q()),
            None => p < 2,
        },
    }
}

/// Runs `closure_of_sum` and the oracle on the same summands.
pub fn verify_closure(summands: &[Fraction]) -> Result<OracleCheck, OracleError> {
    let expected = closure_of_sum(summands)?;
    let d = build_diagram(summands, Closure::Numerator)?;
    Ok(compare(&goeritz(&d), &expected))
}
