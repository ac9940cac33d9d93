//! V-to-H conversion over exact rationals.
//!
//! Facets are found with the incremental double description method on the
//! homogenized cone `{(1, x)}`: an inequality `b - a·x >= 0` is a ray
//! `h = (b, -a)` of the dual cone `{h : h·(1, p) >= 0 for every input p}`.
//! Rays are kept as primitive integer vectors so the arithmetic stays small.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::exactnum::{
    format_rat, independent_rows, int, invert, lp_nonneg_feasible, mat_rank, parse_rat, QMatrix,
    Rat,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HullError {
    #[error("a polytope needs at least one point")]
    Empty,
    #[error("point {index} has {got} coordinates, expected {expected}")]
    Arity {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("point {second} duplicates point {first}")]
    Duplicate { first: usize, second: usize },
    #[error("point set has affine dimension {dim} in {ambient}-space; reduce to full dimension first")]
    NotFullDimensional { dim: usize, ambient: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
}

/// A finite point set standing for its convex hull.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    points: Vec<Vec<Rat>>,
    pub label: Option<String>,
}

impl Polytope {
    /// Validates arity and distinctness.
    pub fn new(points: Vec<Vec<Rat>>) -> Result<Self, HullError> {
        let Some(first) = points.first() else {
            return Err(HullError::Empty);
        };
        let ambient = first.len();
        for (index, p) in points.iter().enumerate() {
            if p.len() != ambient {
                return Err(HullError::Arity {
                    index,
                    expected: ambient,
                    got: p.len(),
                });
            }
        }
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| points[a].cmp(&points[b]).then(a.cmp(&b)));
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(HullError::Duplicate {
                    first: w[0].min(w[1]),
                    second: w[0].max(w[1]),
                });
            }
        }
        Ok(Polytope {
            points,
            label: None,
        })
    }

    pub fn from_i64(points: &[Vec<i64>]) -> Result<Self, HullError> {
        Self::new(
            points
                .iter()
                .map(|p| p.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn points(&self) -> &[Vec<Rat>] {
        &self.points
    }

    pub fn ambient_dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn difference_matrix(&self) -> QMatrix {
        let base = &self.points[0];
        let rows: Vec<Vec<Rat>> = self.points[1..]
            .iter()
            .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        if rows.is_empty() {
            QMatrix::zeros(0, self.ambient_dim())
        } else {
            QMatrix::from_rows(&rows)
        }
    }
}

/// Facet inequalities `normal · x <= offset` and the facet × point incidence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetDescription {
    pub inequalities: Vec<(Vec<Rat>, Rat)>,
    /// `incidence[f]` holds the indices of the points tight on facet `f`.
    pub incidence: Vec<BitSet>,
    pub num_points: usize,
}

impl FacetDescription {
    pub fn num_facets(&self) -> usize {
        self.inequalities.len()
    }

    pub fn is_incident(&self, facet: usize, point: usize) -> bool {
        self.incidence[facet].contains(point)
    }
}

/// Dimension of the affine hull of the points.
pub fn affine_dim(p: &Polytope) -> usize {
    mat_rank(&p.difference_matrix())
}

/// Keeps only the extreme points, deciding each by an exact LP: `p` is not
/// extreme iff it is a convex combination of the others.
pub fn vertex_reduce(p: &Polytope) -> Polytope {
    let n = p.len();
    if n == 1 {
        return p.clone();
    }
    let dim = p.ambient_dim();
    let keep: Vec<Vec<Rat>> = (0..n)
        .filter(|&i| {
            let cols: Vec<Vec<Rat>> = (0..n)
                .filter(|&j| j != i)
                .map(|j| lift(&p.points[j]))
                .collect();
            let mut a = QMatrix::zeros(dim + 1, cols.len());
            for (j, c) in cols.iter().enumerate() {
                for (r, v) in c.iter().enumerate() {
                    a[(r, j)] = v.clone();
                }
            }
            lp_nonneg_feasible(&a, &lift(&p.points[i])).is_none()
        })
        .map(|i| p.points[i].clone())
        .collect();
    Polytope {
        points: keep,
        label: p.label.clone(),
    }
}

fn lift(p: &[Rat]) -> Vec<Rat> {
    std::iter::once(Rat::one()).chain(p.iter().cloned()).collect()
}

/// Re-expresses the points in coordinates on their affine hull.
///
/// The coordinates used are the pivot coordinates of the difference vectors:
/// projecting onto them is injective on the affine hull, hence an affine
/// isomorphism onto a full-dimensional polytope with the same face lattice.
pub fn reduce_to_full_dim(p: &Polytope) -> Polytope {
    let diffs = p.difference_matrix();
    let pivots = independent_rows(&diffs.transpose());
    let points = p
        .points
        .iter()
        .map(|x| pivots.iter().map(|&c| x[c].clone()).collect())
        .collect();
    Polytope {
        points,
        label: p.label.clone(),
    }
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|x| x / &g).collect()
}

/// Homogenized point `(1, x)` scaled to a primitive integer vector.
fn integer_lift(p: &[Rat]) -> Vec<BigInt> {
    let lcm = p
        .iter()
        .fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let mut v = Vec::with_capacity(p.len() + 1);
    v.push(lcm.clone());
    v.extend(p.iter().map(|x| x.numer() * (&lcm / x.denom())));
    primitive(v)
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .map(|(x, y)| x * y)
        .sum()
}

struct Ray {
    h: Vec<BigInt>,
    zeros: BitSet,
}

/// Complete irredundant facet list of a full-dimensional point set.
pub fn facet_enum(p: &Polytope) -> Result<FacetDescription, HullError> {
    let ambient = p.ambient_dim();
    let dim = affine_dim(p);
    if dim != ambient {
        return Err(HullError::NotFullDimensional { dim, ambient });
    }
    let n = p.len();
    let cone_dim = ambient + 1;
    let lifted: Vec<Vec<BigInt>> = p.points.iter().map(|x| integer_lift(x)).collect();

    let lifted_rat = QMatrix::from_rows(
        &lifted
            .iter()
            .map(|v| v.iter().map(|x| Rat::from_integer(x.clone())).collect())
            .collect::<Vec<_>>(),
    );
    let initial = independent_rows(&lifted_rat);
    debug_assert_eq!(initial.len(), cone_dim);
    let inv = invert(&lifted_rat.select_rows(&initial)).expect("independent rows are invertible");

    let mut rays: Vec<Ray> = (0..cone_dim)
        .map(|j| {
            let col = inv.col(j);
            let lcm = col.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
            let h = primitive(col.iter().map(|x| x.numer() * (&lcm / x.denom())).collect());
            let zeros = BitSet::from_indices(
                n,
                initial.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &pt)| pt),
            );
            Ray { h, zeros }
        })
        .collect();

    let mut processed = BitSet::from_indices(n, initial.iter().copied());
    for (k, point) in lifted.iter().enumerate() {
        if processed.contains(k) {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(&r.h, point)).collect();
        let (mut pos, mut neg) = (Vec::new(), Vec::new());
        for (i, v) in values.iter().enumerate() {
            if v.is_positive() {
                pos.push(i);
            } else if v.is_negative() {
                neg.push(i);
            }
        }
        let mut fresh = Vec::new();
        if !neg.is_empty() {
            for &i in &pos {
                for &j in &neg {
                    let common = rays[i].zeros.intersect(&rays[j].zeros);
                    if common.len() + 2 < cone_dim {
                        continue;
                    }
                    let adjacent = rays
                        .iter()
                        .enumerate()
                        .all(|(t, r)| t == i || t == j || !common.is_subset(&r.zeros));
                    if !adjacent {
                        continue;
                    }
                    let (vp, vn) = (&values[i], &values[j]);
                    let h: Vec<BigInt> = rays[j]
                        .h
                        .iter()
                        .zip(&rays[i].h)
                        .map(|(hn, hp)| vp * hn - vn * hp)
                        .collect();
                    let mut zeros = common;
                    zeros.insert(k);
                    fresh.push(Ray {
                        h: primitive(h),
                        zeros,
                    });
                }
            }
        }
        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (ray, v) in rays.into_iter().zip(&values) {
            if v.is_negative() {
                continue;
            }
            let mut ray = ray;
            if v.is_zero() {
                ray.zeros.insert(k);
            }
            next.push(ray);
        }
        next.extend(fresh);
        rays = next;
        processed.insert(k);
    }

    rays.sort_by(|a, b| a.h.cmp(&b.h));
    let inequalities = rays
        .iter()
        .map(|r| {
            let normal = r.h[1..]
                .iter()
                .map(|x| Rat::from_integer(-x))
                .collect();
            (normal, Rat::from_integer(r.h[0].clone()))
        })
        .collect();
    let incidence = rays.into_iter().map(|r| r.zeros).collect();
    Ok(FacetDescription {
        inequalities,
        incidence,
        num_points: n,
    })
}

/// Parses the vertex file format: `#` comments, one point per line as
/// whitespace-separated rationals, equal arity on every line.
pub fn parse_vertex_file(text: &str) -> Result<Polytope, HullError> {
    let mut points = Vec::new();
    let mut arity = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords = line
            .split_whitespace()
            .map(parse_rat)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| HullError::Parse {
                line: idx + 1,
                message: e.to_string(),
            })?;
        match arity {
            None => arity = Some(coords.len()),
            Some(a) if a != coords.len() => {
                return Err(HullError::Parse {
                    line: idx + 1,
                    message: format!("expected {a} coordinates, found {}", coords.len()),
                })
            }
            _ => {}
        }
        points.push(coords);
    }
    Polytope::new(points)
}

pub fn read_vertex_file(path: &Path) -> Result<Polytope, HullError> {
    let text = std::fs::read_to_string(path).map_err(|e| HullError::Io(e.to_string()))?;
    parse_vertex_file(&text)
}

pub fn format_vertex_file(p: &Polytope) -> String {
    let mut out = String::new();
    if let Some(label) = &p.label {
        let _ = writeln!(out, "# {label}");
    }
    for pt in &p.points {
        let row: Vec<String> = pt.iter().map(format_rat).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn write_vertex_file(path: &Path, p: &Polytope) -> Result<(), HullError> {
    std::fs::write(path, format_vertex_file(p)).map_err(|e| HullError::Io(e.to_string()))
}

/// Standard test shapes.
pub mod shapes {
    use super::*;

    /// `conv{0, e_1, ..., e_d}`.
    pub fn simplex(d: usize) -> Polytope {
        let mut pts = vec![vec![0; d]];
        for i in 0..d {
            let mut e = vec![0; d];
            e[i] = 1;
            pts.push(e);
        }
        Polytope::from_i64(&pts).unwrap().with_label(format!("simplex{d}"))
    }

    pub fn cube(d: usize) -> Polytope {
        let pts: Vec<Vec<i64>> = (0..1usize << d)
            .map(|v| (0..d).map(|j| (v >> j & 1) as i64).collect())
            .collect();
        Polytope::from_i64(&pts).unwrap().with_label(format!("cube{d}"))
    }

    /// `conv{±e_i}`, for `d >= 1`.
    pub fn cross_polytope(d: usize) -> Polytope {
        let mut pts = Vec::new();
        for i in 0..d {
            for s in [1, -1] {
                let mut e = vec![0; d];
                e[i] = s;
                pts.push(e);
            }
        }
        Polytope::from_i64(&pts).unwrap().with_label(format!("cross{d}"))
    }

    /// Regular-ish `m`-gon with rational vertices: points on the parabola
    /// `y = x^2` are in convex position.
    pub fn polygon(m: usize) -> Polytope {
        let pts: Vec<Vec<i64>> = (0..m as i64).map(|x| vec![x, x * x]).collect();
        Polytope::from_i64(&pts).unwrap().with_label(format!("{m}-gon"))
    }
}

#[cfg(test)]
mod tests {
    use super::shapes::*;
    use super::*;
    use crate::exactnum::rat;

    fn check_valid(p: &Polytope, fd: &FacetDescription) {
        let d = affine_dim(p);
        for (f, (a, b)) in fd.inequalities.iter().enumerate() {
            let mut tight = 0;
            for (i, x) in p.points().iter().enumerate() {
                let lhs: Rat = a.iter().zip(x).map(|(u, v)| u * v).sum();
                assert!(lhs <= *b, "vertex {i} violates facet {f}");
                assert_eq!(lhs == *b, fd.is_incident(f, i));
                tight += (lhs == *b) as usize;
            }
            assert!(tight >= d, "facet {f} tight on only {tight} points");
        }
    }

    #[test]
    fn affine_dim_examples() {
        assert_eq!(affine_dim(&Polytope::from_i64(&[vec![1, 2]]).unwrap()), 0);
        let sq = Polytope::from_i64(&[vec![0, 0, 1], vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 1]])
            .unwrap();
        assert_eq!(affine_dim(&sq), 2);
    }

    #[test]
    fn vertex_reduce_examples() {
        let line = Polytope::from_i64(&[vec![0, 0], vec![1, 1], vec![2, 2]]).unwrap();
        let r = vertex_reduce(&line);
        assert_eq!(r.points(), &[vec![rat(0, 1), rat(0, 1)], vec![rat(2, 1), rat(2, 1)]]);
        assert_eq!(vertex_reduce(&cube(5)).len(), 32);
    }

    #[test]
    fn facet_counts() {
        for d in 1..=5 {
            let s = simplex(d);
            let fd = facet_enum(&s).unwrap();
            assert_eq!(fd.num_facets(), d + 1);
            check_valid(&s, &fd);
        }
        let fd = facet_enum(&cube(3)).unwrap();
        assert_eq!(fd.num_facets(), 6);
        assert!(fd.incidence.iter().all(|s| s.len() == 4));
        let x5 = cross_polytope(5);
        let fd = facet_enum(&x5).unwrap();
        assert_eq!(fd.num_facets(), 32);
        check_valid(&x5, &fd);
    }

    #[test]
    fn polarity_counts_on_cubes() {
        for d in 1..=4 {
            assert_eq!(facet_enum(&cube(d)).unwrap().num_facets(), 2 * d);
            assert_eq!(cross_polytope(d).len(), 2 * d);
            assert_eq!(facet_enum(&cross_polytope(d)).unwrap().num_facets(), 1 << d);
            assert_eq!(cube(d).len(), 1 << d);
        }
    }

    #[test]
    fn rejects_lower_dimensional_input() {
        let sq = Polytope::from_i64(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]])
            .unwrap();
        assert_eq!(
            facet_enum(&sq),
            Err(HullError::NotFullDimensional { dim: 2, ambient: 3 })
        );
        let flat = reduce_to_full_dim(&sq);
        assert_eq!(flat.ambient_dim(), 2);
        assert_eq!(facet_enum(&flat).unwrap().num_facets(), 4);
        let pt = reduce_to_full_dim(&Polytope::from_i64(&[vec![3, 4]]).unwrap());
        assert_eq!(pt.ambient_dim(), 0);
        assert_eq!(affine_dim(&pt), 0);
    }

    #[test]
    fn interior_points_do_not_change_facets() {
        let mut pts: Vec<Vec<Rat>> = cube(3).points().to_vec();
        pts.push(vec![rat(1, 2), rat(1, 2), rat(1, 2)]);
        pts.push(vec![rat(1, 3), rat(0, 1), rat(1, 4)]);
        let p = Polytope::new(pts).unwrap();
        let reduced = vertex_reduce(&p);
        assert_eq!(reduced.len(), 8);
        assert_eq!(
            facet_enum(&p).unwrap().inequalities,
            facet_enum(&reduced).unwrap().inequalities
        );
        check_valid(&p, &facet_enum(&p).unwrap());
    }

    #[test]
    fn rational_coordinates() {
        let p = Polytope::new(vec![
            vec![rat(0, 1), rat(0, 1)],
            vec![rat(3, 2), rat(0, 1)],
            vec![rat(0, 1), rat(2, 3)],
        ])
        .unwrap();
        let fd = facet_enum(&p).unwrap();
        assert_eq!(fd.num_facets(), 3);
        check_valid(&p, &fd);
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(Polytope::new(vec![]), Err(HullError::Empty));
        assert!(matches!(
            Polytope::from_i64(&[vec![0, 1], vec![0]]),
            Err(HullError::Arity { index: 1, .. })
        ));
        assert_eq!(
            Polytope::from_i64(&[vec![0, 1], vec![1, 1], vec![0, 1]]),
            Err(HullError::Duplicate { first: 0, second: 2 })
        );
    }

    #[test]
    fn vertex_file_roundtrip() {
        let text = "# a triangle\n0 0\n3/2 0\n\n0 2\n";
        let p = parse_vertex_file(text).unwrap();
        assert_eq!(p.len(), 3);
        assert_eq!(p.points()[1][0], rat(3, 2));
        assert_eq!(parse_vertex_file(&format_vertex_file(&p)).unwrap(), p);
        assert!(matches!(
            parse_vertex_file("0 0\n1\n"),
            Err(HullError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_vertex_file("0 a\n"),
            Err(HullError::Parse { line: 1, .. })
        ));
    }
}
