//! Small named spaces used by tests, benches and the CLI.

use crate::space::{build_from_maximal_simplices, FiniteSpace};
use crate::stratify::Stratification;

/// Four triangles sharing vertex 0: three around a disc, one fin along `[0,1]`.
pub fn sundial() -> FiniteSpace {
    build_from_maximal_simplices([
        vec![0u32, 1, 3],
        vec![0, 1, 2],
        vec![0, 2, 3],
        vec![0, 1, 4],
    ])
    .expect("valid complex")
}

/// A filled triangle `[0,1,2]` with a path `0 - 3 - 2` attached.
pub fn triangle_with_path() -> FiniteSpace {
    build_from_maximal_simplices([vec![0u32, 1, 2], vec![0, 3], vec![2, 3]])
        .expect("valid complex")
}

/// The homogeneous stratification of [`triangle_with_path`] with only the
/// triangle on top and the whole 1-skeleton below.
pub fn triangle_on_top(x: &FiniteSpace) -> Stratification {
    let top = x.subspace_of(&[&[0, 1, 2]]);
    Stratification::from_strata(x, &[x.empty_subspace(), x.full().difference(&top), top])
        .expect("valid stratification")
}

/// Triangulated torus with one meridian collapsed to a point, plus a disc
/// spanning the equator through the pinch.
#[derive(Clone, Debug)]
pub struct PinchedTorus {
    pub space: FiniteSpace,
    /// Vertex id of the pinch point.
    pub pinch: u32,
    /// Vertex id of the disc center.
    pub disc_center: u32,
    /// Equator vertices after the pinch, in order.
    pub equator: Vec<u32>,
}

/// `columns - 1` rings of `ring` vertices between the two cones at the pinch.
pub fn pinched_torus(columns: u32, ring: u32) -> PinchedTorus {
    assert!(columns >= 3 && ring >= 4);
    let pinch = 0;
    let v = |i: u32, j: u32| 1 + (i - 1) * ring + j % ring;
    let last = columns - 1;
    let disc_center = 1 + last * ring;
    let mut tris = Vec::new();
    for j in 0..ring {
        tris.push(vec![pinch, v(1, j), v(1, j + 1)]);
        tris.push(vec![pinch, v(last, j), v(last, j + 1)]);
        for i in 1..last {
            tris.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1)]);
            tris.push(vec![v(i, j), v(i, j + 1), v(i + 1, j + 1)]);
        }
    }
    let equator: Vec<u32> = (1..=last).map(|i| v(i, 0)).collect();
    let mut loop_vertices = vec![pinch];
    loop_vertices.extend(&equator);
    for k in 0..loop_vertices.len() {
        let a = loop_vertices[k];
        let b = loop_vertices[(k + 1) % loop_vertices.len()];
        tris.push(vec![a, b, disc_center]);
    }
    PinchedTorus {
        space: build_from_maximal_simplices(tris).expect("valid complex"),
        pinch,
        disc_center,
        equator,
    }
}

impl PinchedTorus {
    /// Simplices of the singular circle other than the pinch point.
    pub fn circle_without_pinch(&self) -> crate::space::Subspace {
        let x = &self.space;
        let mut loop_vertices = vec![self.pinch];
        loop_vertices.extend(&self.equator);
        let mut members: Vec<usize> = self.equator.iter().map(|&e| x.element(&[e])).collect();
        for k in 0..loop_vertices.len() {
            let a = loop_vertices[k];
            let b = loop_vertices[(k + 1) % loop_vertices.len()];
            members.push(x.element(&[a, b]));
        }
        x.subspace(members)
    }

    /// Pinch point / singular circle / everything else.
    pub fn circle_stratification(&self) -> Stratification {
        let x = &self.space;
        let s0 = x.subspace([x.element(&[self.pinch])]);
        let s1 = self.circle_without_pinch();
        let s2 = x.full().difference(&s0).difference(&s1);
        Stratification::from_strata(x, &[s0, s1, s2]).expect("valid stratification")
    }

    /// Pinch point alone below a single top stratum.
    pub fn pinch_only_stratification(&self) -> Stratification {
        let x = &self.space;
        let s0 = x.subspace([x.element(&[self.pinch])]);
        let s2 = x.full().difference(&s0);
        Stratification::from_strata(x, &[s0, x.empty_subspace(), s2]).expect("valid stratification")
    }
}


/// Point data and a cover for the vanishing-polynomial examples.
#[derive(Clone, Debug)]
pub struct CoveredCloud {
    pub cloud: crate::geometry::PointCloud,
    pub cover: crate::geometry::Cover,
}

/// Sample for a mapper run: points, the function to pull back along and an
/// interval cover of its range.
#[derive(Clone, Debug)]
pub struct MapperSample {
    pub cloud: crate::geometry::PointCloud,
    pub values: Vec<f64>,
    pub intervals: Vec<(f64, f64)>,
    pub radius: f64,
}

impl MapperSample {
    pub fn cover(&self) -> crate::geometry::Cover {
        crate::geometry::mapper_pullback_cover(&self.cloud, &self.values, &self.intervals, self.radius)
            .expect("valid mapper input")
    }
}

fn named(sets: Vec<(&str, Vec<usize>)>) -> crate::geometry::Cover {
    crate::geometry::Cover::new(sets.into_iter().map(|(n, s)| (n.to_string(), s)).collect())
}

/// 100 evenly spaced points on the unit circle covered by six arcs, each
/// overlapping only its two neighbors.
pub fn circle_six_arcs() -> CoveredCloud {
    let n = 100;
    let angles: Vec<f64> = (1..=n).map(|i| 3.6 * i as f64).collect();
    let points = angles
        .iter()
        .map(|a| vec![a.to_radians().cos(), a.to_radians().sin()])
        .collect();
    let sets = (0..6)
        .map(|k| {
            let center = 60.0 * k as f64;
            let members = (0..n)
                .filter(|&i| {
                    let d = (angles[i] - center).rem_euclid(360.0);
                    d.min(360.0 - d) <= 42.5
                })
                .collect();
            (format!("U{}", k + 1), members)
        })
        .collect();
    CoveredCloud {
        cloud: crate::geometry::PointCloud::new(points).unwrap(),
        cover: crate::geometry::Cover::new(sets),
    }
}

/// Points `(0.1n, 0)` and `(0, 0.1n)` for `n = 0..=20`; index 0 is the origin,
/// `n` the x-axis point and `20 + n` the y-axis point.
pub fn corner() -> CoveredCloud {
    let mut points = vec![vec![0.0, 0.0]];
    points.extend((1..=20).map(|n| vec![0.1 * n as f64, 0.0]));
    points.extend((1..=20).map(|n| vec![0.0, 0.1 * n as f64]));
    let xs = |r: std::ops::RangeInclusive<usize>| r.collect::<Vec<_>>();
    let ys = |r: std::ops::RangeInclusive<usize>| r.map(|n| 20 + n).collect::<Vec<_>>();
    let mut c = vec![0];
    c.extend(xs(1..=6));
    c.extend(ys(1..=8));
    CoveredCloud {
        cloud: crate::geometry::PointCloud::new(points).unwrap(),
        cover: named(vec![
            ("C", c),
            ("X1", xs(4..=14)),
            ("X2", xs(12..=20)),
            ("Y", ys(5..=20)),
        ]),
    }
}

/// Samples of `t ↦ (t^2 - 1, t^3 - t)` on `y^2 = x^3 + x^2`, covered by three
/// bands of the parameter: around the node, the middle of the loop and the far
/// end of the loop. Each band is symmetric under `t ↦ -t`.
pub fn nodal_cubic() -> CoveredCloud {
    let mut ts: Vec<f64> = (-26..=26).map(|i| 0.03 * i as f64).collect();
    for i in -20..=17 {
        let t = 0.01 * i as f64 + 1.0;
        ts.push(t);
        ts.push(-t);
    }
    let points = ts.iter().map(|&t| vec![t * t - 1.0, t * t * t - t]).collect();
    let band = |lo: f64, hi: f64| -> Vec<usize> {
        (0..ts.len())
            .filter(|&i| lo - 1e-9 <= ts[i].abs() && ts[i].abs() <= hi + 1e-9)
            .collect()
    };
    CoveredCloud {
        cloud: crate::geometry::PointCloud::new(points).unwrap(),
        cover: named(vec![
            ("N", band(0.6, 1.17)),
            ("M", band(0.25, 0.9)),
            ("E", band(0.0, 0.55)),
        ]),
    }
}

/// Grid sample of a torus with axis along `y` (radii 1 and 0.5), height `z`.
pub fn torus_mapper() -> MapperSample {
    let (big, small) = (1.0f64, 0.5f64);
    let (nu, nv) = (90, 45);
    let mut points = Vec::with_capacity(nu * nv);
    for i in 0..nu {
        let u = std::f64::consts::TAU * i as f64 / nu as f64;
        for j in 0..nv {
            let v = std::f64::consts::TAU * j as f64 / nv as f64;
            let w = big + small * v.cos();
            points.push(vec![w * u.cos(), small * v.sin(), w * u.sin()]);
        }
    }
    let cloud = crate::geometry::PointCloud::new(points).unwrap();
    let values = cloud.coordinate(2);
    MapperSample {
        cloud,
        values,
        intervals: vec![(-1.6, -0.8), (-1.0, -0.02), (-0.45, 0.45), (0.02, 1.0), (0.8, 1.6)],
        radius: 0.2,
    }
}

/// An ellipse in the `xz`-plane with vertical segments hanging below its
/// lowest point and rising above its highest point; height `z`.
pub fn ellipse_with_branches() -> MapperSample {
    let (a, c, len) = (0.8f64, 1.0f64, 0.6f64);
    let mut points = Vec::new();
    let n = 400;
    for i in 0..n {
        let s = std::f64::consts::TAU * i as f64 / n as f64;
        points.push(vec![a * s.cos(), 0.0, c * s.sin()]);
    }
    let m = 60;
    for i in 1..=m {
        let h = len * i as f64 / m as f64;
        points.push(vec![0.0, 0.0, c + h]);
        points.push(vec![0.0, 0.0, -c - h]);
    }
    let cloud = crate::geometry::PointCloud::new(points).unwrap();
    let values = cloud.coordinate(2);
    MapperSample {
        cloud,
        values,
        intervals: vec![(-1.7, -1.2), (-1.3, -0.02), (-0.9, 0.9), (0.02, 1.3), (1.2, 1.7)],
        radius: 0.1,
    }
}
