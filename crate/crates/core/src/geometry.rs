//! Test domains and their triangulations.
//!
//! Every domain is a polygon, so meshes cover it exactly: element areas sum to
//! the symbolic area up to rounding. Refinement is uniform midpoint ("red")
//! refinement, which keeps element shapes and nests the P1 spaces.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Which closed-form family a domain belongs to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    /// Unit-side rhombus with acute angle `2π/m`.
    Rhombus { m: u32 },
    /// Axis-aligned rectangle `[0, a] × [0, b]`, `a ≥ b`.
    Rectangle { a: f64, b: f64 },
    /// Regular `k`-gon with circumradius `radius`, centred at the origin.
    RegularPolygon { k: u32, radius: f64 },
}

/// A planar domain with its exact geometric descriptors.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec {
    pub kind: DomainKind,
    pub area: f64,
    /// Minimal distance between two parallel supporting lines.
    pub width: f64,
    pub diameter: f64,
    pub centrally_symmetric: bool,
    pub convex: bool,
}

/// Rhombus `Ω_m` with unit sides and acute angle `β_m = 2π/m`.
///
/// The vertex `A` sits at the origin and the long diagonal `AC` runs along the
/// positive x-axis; `B` is below the axis and `D` above it.
pub fn make_rhombus(m: u32) -> Result<DomainSpec> {
    if m < 5 {
        return Err(Error::param(format!("rhombus needs m >= 5, got {m}")));
    }
    let beta = 2.0 * PI / f64::from(m);
    Ok(DomainSpec {
        kind: DomainKind::Rhombus { m },
        area: beta.sin(),
        width: beta.sin(),
        diameter: 2.0 * (0.5 * beta).cos(),
        centrally_symmetric: true,
        convex: true,
    })
}

pub fn make_rectangle(a: f64, b: f64) -> Result<DomainSpec> {
    if !(b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::param(format!(
            "rectangle sides must be positive, got ({a}, {b})"
        )));
    }
    if a < b {
        return Err(Error::param(format!(
            "rectangle expects a >= b, got ({a}, {b})"
        )));
    }
    Ok(DomainSpec {
        kind: DomainKind::Rectangle { a, b },
        area: a * b,
        width: b,
        diameter: a.hypot(b),
        centrally_symmetric: true,
        convex: true,
    })
}

/// Regular `k`-gon. Vertices sit at angles `π/k + 2πi/k`, so `k = 4`,
/// `radius = 1/√2` is the axis-aligned unit square centred at the origin.
pub fn make_regular_polygon(k: u32, radius: f64) -> Result<DomainSpec> {
    if k < 3 {
        return Err(Error::param(format!("polygon needs k >= 3, got {k}")));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::param(format!(
            "polygon radius must be positive, got {radius}"
        )));
    }
    let kf = f64::from(k);
    let half = PI / kf;
    let (width, diameter) = if k.is_multiple_of(2) {
        (2.0 * radius * half.cos(), 2.0 * radius)
    } else {
        (
            radius * (1.0 + half.cos()),
            2.0 * radius * (0.5 * half).cos(),
        )
    };
    Ok(DomainSpec {
        kind: DomainKind::RegularPolygon { k, radius },
        area: 0.5 * kf * radius * radius * (2.0 * half).sin(),
        width,
        diameter,
        centrally_symmetric: k.is_multiple_of(2),
        convex: true,
    })
}

impl DomainSpec {
    pub fn unit_square() -> Self {
        make_rectangle(1.0, 1.0).expect("unit square is valid")
    }

    /// Short label used in reports, e.g. `rhombus_m8` or `rectangle_2x1`.
    pub fn label(&self) -> String {
        match self.kind {
            DomainKind::Rhombus { m } => format!("rhombus_m{m}"),
            DomainKind::Rectangle { a, b } if a == 1.0 && b == 1.0 => String::from("square"),
            DomainKind::Rectangle { a, b } => format!("rectangle_{a}x{b}"),
            DomainKind::RegularPolygon { k, radius } => format!("polygon_k{k}_r{radius}"),
        }
    }

    /// Acute angle `β_m` of a rhombus.
    pub fn rhombus_angle(&self) -> Option<f64> {
        match self.kind {
            DomainKind::Rhombus { m } => Some(2.0 * PI / f64::from(m)),
            _ => None,
        }
    }

    /// Boundary vertices in counterclockwise order.
    pub fn vertices(&self) -> Vec<[f64; 2]> {
        match self.kind {
            DomainKind::Rhombus { m } => {
                let half = PI / f64::from(m);
                let (c, s) = (half.cos(), half.sin());
                vec![[0.0, 0.0], [c, -s], [2.0 * c, 0.0], [c, s]]
            }
            DomainKind::Rectangle { a, b } => vec![[0.0, 0.0], [a, 0.0], [a, b], [0.0, b]],
            DomainKind::RegularPolygon { k, radius } => {
                let kf = f64::from(k);
                (0..k)
                    .map(|i| {
                        let t = PI / kf + 2.0 * PI * f64::from(i) / kf;
                        [radius * t.cos(), radius * t.sin()]
                    })
                    .collect()
            }
        }
    }
}

/// Boundary-edge tag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeTag {
    /// Part of the domain boundary.
    Outer,
    /// Interior chain along the short diagonal `BD` of a rhombus (or the
    /// Dirichlet side of the half-rhombus `T_m`).
    Diagonal,
}

impl EdgeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeTag::Outer => "outer",
            EdgeTag::Diagonal => "diagonal",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "outer" => Some(EdgeTag::Outer),
            "diagonal" => Some(EdgeTag::Diagonal),
            _ => None,
        }
    }
}

/// Conforming triangulation.
#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub nodes: Vec<[f64; 2]>,
    /// Counterclockwise node triples.
    pub elements: Vec<[usize; 3]>,
    /// Tagged edges: the outer boundary plus any interior diagonal chain.
    pub boundary_edges: Vec<([usize; 2], EdgeTag)>,
    pub refinement_level: u32,
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl Mesh {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_elements(&self) -> usize {
        self.elements.len()
    }

    /// Signed area of element `e` (positive for counterclockwise triples).
    pub fn element_area(&self, e: usize) -> f64 {
        let [i, j, k] = self.elements[e];
        signed_area(self.nodes[i], self.nodes[j], self.nodes[k])
    }

    pub fn total_area(&self) -> f64 {
        (0..self.elements.len()).map(|e| self.element_area(e)).sum()
    }

    /// Unique undirected edges with the number of elements sharing them.
    pub fn edge_counts(&self) -> BTreeMap<(usize, usize), u32> {
        let mut counts = BTreeMap::new();
        for el in &self.elements {
            for l in 0..3 {
                *counts.entry(edge_key(el[l], el[(l + 1) % 3])).or_insert(0) += 1;
            }
        }
        counts
    }

    pub fn num_edges(&self) -> usize {
        self.edge_counts().len()
    }

    /// `V − E + F`; equals 1 for a simply connected triangulated polygon.
    pub fn euler_characteristic(&self) -> i64 {
        self.nodes.len() as i64 - self.num_edges() as i64 + self.elements.len() as i64
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edge_counts()
            .keys()
            .map(|&(a, b)| {
                let (p, q) = (self.nodes[a], self.nodes[b]);
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .fold(0.0, f64::max)
    }

    /// Sorted, deduplicated nodes lying on edges with the given tag.
    pub fn tagged_nodes(&self, tag: EdgeTag) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .boundary_edges
            .iter()
            .filter(|(_, t)| *t == tag)
            .flat_map(|(e, _)| e.iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Checks element orientation and conformity, returning the first defect.
    pub fn validate(&self) -> Result<()> {
        for e in 0..self.elements.len() {
            let a = self.element_area(e);
            if !(a > 0.0) {
                return Err(Error::DegenerateElement {
                    element: e,
                    area: a,
                });
            }
        }
        let counts = self.edge_counts();
        let mut tagged = BTreeMap::new();
        for (edge, tag) in &self.boundary_edges {
            let key = edge_key(edge[0], edge[1]);
            match counts.get(&key) {
                None => {
                    return Err(Error::param(format!(
                        "tagged edge {key:?} is not a mesh edge"
                    )));
                }
                Some(&c) if *tag == EdgeTag::Outer && c != 1 => {
                    return Err(Error::param(format!(
                        "outer edge {key:?} shared by {c} elements"
                    )));
                }
                _ => {}
            }
            tagged.insert(key, ());
        }
        for (key, &c) in &counts {
            if c > 2 {
                return Err(Error::param(format!("edge {key:?} shared by {c} elements")));
            }
            if c == 1 && !tagged.contains_key(key) {
                return Err(Error::param(format!(
                    "untagged free edge {key:?} (hanging node?)"
                )));
            }
        }
        Ok(())
    }

    /// Uniform red refinement: each triangle splits into four similar children.
    pub fn refine(&self) -> Mesh {
        let mut nodes = self.nodes.clone();
        let mut midpoints: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut midpoint = |a: usize, b: usize, nodes: &mut Vec<[f64; 2]>| -> usize {
            *midpoints.entry(edge_key(a, b)).or_insert_with(|| {
                let (p, q) = (nodes[a], nodes[b]);
                nodes.push([0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])]);
                nodes.len() - 1
            })
        };
        let mut elements = Vec::with_capacity(4 * self.elements.len());
        for &[a, b, c] in &self.elements {
            let ab = midpoint(a, b, &mut nodes);
            let bc = midpoint(b, c, &mut nodes);
            let ca = midpoint(c, a, &mut nodes);
            elements.push([a, ab, ca]);
            elements.push([ab, b, bc]);
            elements.push([ca, bc, c]);
            elements.push([ab, bc, ca]);
        }
        let mut boundary_edges = Vec::with_capacity(2 * self.boundary_edges.len());
        for &([a, b], tag) in &self.boundary_edges {
            let m = midpoint(a, b, &mut nodes);
            boundary_edges.push(([a, m], tag));
            boundary_edges.push(([m, b], tag));
        }
        Mesh {
            nodes,
            elements,
            boundary_edges,
            refinement_level: self.refinement_level + 1,
        }
    }

    /// Keeps the elements whose centroid satisfies `keep`. Edges that become
    /// free and carry no tag are tagged [`EdgeTag::Outer`].
    pub fn submesh(&self, keep: impl Fn([f64; 2]) -> bool) -> Mesh {
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        let mut elements = Vec::new();
        for el in &self.elements {
            let c = centroid(el.map(|i| self.nodes[i]));
            if !keep(c) {
                continue;
            }
            let mut mapped = [0; 3];
            for (slot, &i) in mapped.iter_mut().zip(el.iter()) {
                if remap[i] == usize::MAX {
                    remap[i] = nodes.len();
                    nodes.push(self.nodes[i]);
                }
                *slot = remap[i];
            }
            elements.push(mapped);
        }
        let mut sub = Mesh {
            nodes,
            elements,
            boundary_edges: Vec::new(),
            refinement_level: self.refinement_level,
        };
        let counts = sub.edge_counts();
        let mut tagged = BTreeMap::new();
        for &([a, b], tag) in &self.boundary_edges {
            let (ra, rb) = (remap[a], remap[b]);
            if ra == usize::MAX || rb == usize::MAX || !counts.contains_key(&edge_key(ra, rb)) {
                continue;
            }
            tagged.insert(edge_key(ra, rb), ());
            sub.boundary_edges.push(([ra, rb], tag));
        }
        for (key, &c) in &counts {
            if c == 1 && !tagged.contains_key(key) {
                sub.boundary_edges.push(([key.0, key.1], EdgeTag::Outer));
            }
        }
        sub
    }

    /// Copy with every coordinate multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Mesh {
        let mut out = self.clone();
        for p in &mut out.nodes {
            p[0] *= factor;
            p[1] *= factor;
        }
        out
    }
}

pub(crate) fn signed_area(p: [f64; 2], q: [f64; 2], r: [f64; 2]) -> f64 {
    0.5 * ((q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0]))
}

fn centroid(p: [[f64; 2]; 3]) -> [f64; 2] {
    [
        (p[0][0] + p[1][0] + p[2][0]) / 3.0,
        (p[0][1] + p[1][1] + p[2][1]) / 3.0,
    ]
}

fn base_mesh(spec: &DomainSpec) -> Mesh {
    let verts = spec.vertices();
    let nv = verts.len();
    let mut boundary_edges: Vec<([usize; 2], EdgeTag)> = (0..nv)
        .map(|i| ([i, (i + 1) % nv], EdgeTag::Outer))
        .collect();
    // Centre node at index nv: rhombus centre lies on both diagonals, so the
    // four-triangle fan contains the short diagonal B–O–D as an edge chain.
    let centre = match spec.kind {
        DomainKind::Rhombus { .. } => [verts[1][0], 0.0],
        DomainKind::Rectangle { a, b } => [0.5 * a, 0.5 * b],
        DomainKind::RegularPolygon { .. } => [0.0, 0.0],
    };
    if let DomainKind::Rhombus { .. } = spec.kind {
        boundary_edges.push(([1, nv], EdgeTag::Diagonal));
        boundary_edges.push(([nv, 3], EdgeTag::Diagonal));
    }
    let mut nodes = verts;
    nodes.push(centre);
    let elements = (0..nv).map(|i| [i, (i + 1) % nv, nv]).collect();
    Mesh {
        nodes,
        elements,
        boundary_edges,
        refinement_level: 0,
    }
}

/// Base fan triangulation refined `level` times.
pub fn triangulate(spec: &DomainSpec, level: u32) -> Mesh {
    let mut mesh = base_mesh(spec);
    for _ in 0..level {
        mesh = mesh.refine();
    }
    mesh
}

/// Mesh of the triangle `T_m = ABD` (the half of the rhombus containing the
/// acute vertex at the origin). The side `BD` carries [`EdgeTag::Diagonal`].
pub fn triangulate_half_rhombus(spec: &DomainSpec, level: u32) -> Result<Mesh> {
    let DomainKind::Rhombus { m } = spec.kind else {
        return Err(Error::param("half-rhombus mesh requires a rhombus"));
    };
    let cx = (PI / f64::from(m)).cos();
    Ok(triangulate(spec, level).submesh(|c| c[0] < cx))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rhombus_descriptors() {
        let r8 = make_rhombus(8).unwrap();
        assert_relative_eq!(
            r8.area,
            core::f64::consts::FRAC_1_SQRT_2,
            max_relative = 1e-15
        );
        let r6 = make_rhombus(6).unwrap();
        assert_relative_eq!(r6.diameter, 3.0f64.sqrt(), max_relative = 1e-15);
        let r100 = make_rhombus(100).unwrap();
        assert_relative_eq!(r100.area, (2.0 * PI / 100.0).sin(), max_relative = 1e-15);
        assert!(matches!(make_rhombus(4), Err(Error::Parameter(_))));
    }

    #[test]
    fn rectangle_descriptors() {
        let sq = make_rectangle(1.0, 1.0).unwrap();
        assert_eq!(sq.area, 1.0);
        assert_relative_eq!(sq.diameter, 2.0f64.sqrt());
        let r = make_rectangle(2.0, 1.0).unwrap();
        assert_eq!(r.width, 1.0);
        assert_relative_eq!(r.diameter, 5.0f64.sqrt());
        assert!(make_rectangle(1.0, 0.0).is_err());
        assert!(make_rectangle(-1.0, -2.0).is_err());
        assert!(make_rectangle(1.0, 2.0).is_err());
    }

    #[test]
    fn polygon_descriptors() {
        let sq = make_regular_polygon(4, core::f64::consts::FRAC_1_SQRT_2).unwrap();
        assert_relative_eq!(sq.area, 1.0, max_relative = 1e-15);
        let v = sq.vertices();
        assert_relative_eq!(v[0][0], 0.5, max_relative = 1e-15);
        assert_relative_eq!(v[0][1], 0.5, max_relative = 1e-15);
        let p64 = make_regular_polygon(64, 1.0).unwrap();
        assert!((p64.area - PI).abs() / PI < 2e-3);
        let tri = make_regular_polygon(3, 1.0).unwrap();
        assert_relative_eq!(tri.area, 3.0 * 3.0f64.sqrt() / 4.0, max_relative = 1e-15);
        assert!(!tri.centrally_symmetric);
        assert!(make_regular_polygon(2, 1.0).is_err());
        assert!(make_regular_polygon(5, 0.0).is_err());
    }

    #[test]
    fn rhombus_base_mesh_splits_along_short_diagonal() {
        let spec = make_rhombus(8).unwrap();
        let mesh = triangulate(&spec, 0);
        assert_eq!(mesh.num_elements(), 4);
        assert_eq!(mesh.tagged_nodes(EdgeTag::Diagonal), vec![1, 3, 4]);
        mesh.validate().unwrap();
    }

    #[test]
    fn refinement_counts_and_edge_lengths() {
        let sq = DomainSpec::unit_square();
        let base = triangulate(&sq, 0);
        let m3 = triangulate(&sq, 3);
        assert_eq!(m3.num_elements(), base.num_elements() * 64);
        let once = base.refine();
        assert_eq!(once.num_elements(), 4 * base.num_elements());
        assert_relative_eq!(
            once.max_edge_length(),
            0.5 * base.max_edge_length(),
            max_relative = 1e-14
        );
        assert_eq!(once.refine().num_elements(), 16 * base.num_elements());
    }

    #[test]
    fn every_mesh_is_valid_and_exact() {
        let specs = [
            DomainSpec::unit_square(),
            make_rectangle(2.0, 1.0).unwrap(),
            make_rhombus(8).unwrap(),
            make_rhombus(64).unwrap(),
            make_regular_polygon(7, 1.3).unwrap(),
        ];
        for spec in &specs {
            for level in 0..4 {
                let mesh = triangulate(spec, level);
                mesh.validate().unwrap();
                assert_eq!(mesh.euler_characteristic(), 1);
                assert_relative_eq!(mesh.total_area(), spec.area, max_relative = 1e-12);
                assert_eq!(mesh.refinement_level, level);
            }
        }
    }

    #[test]
    fn diagonal_chain_survives_refinement() {
        let spec = make_rhombus(16).unwrap();
        let mesh = triangulate(&spec, 3);
        let cx = (PI / 16.0).cos();
        let diag = mesh.tagged_nodes(EdgeTag::Diagonal);
        assert_eq!(diag.len(), 2 * 8 + 1);
        for &i in &diag {
            assert!((mesh.nodes[i][0] - cx).abs() < 1e-14);
        }
    }

    #[test]
    fn half_rhombus_is_the_triangle_abd() {
        let spec = make_rhombus(8).unwrap();
        let half = triangulate_half_rhombus(&spec, 2).unwrap();
        half.validate().unwrap();
        assert_relative_eq!(half.total_area(), 0.5 * spec.area, max_relative = 1e-12);
        assert_eq!(half.euler_characteristic(), 1);
        assert_eq!(half.tagged_nodes(EdgeTag::Diagonal).len(), 9);
        assert!(triangulate_half_rhombus(&DomainSpec::unit_square(), 1).is_err());
    }

    #[test]
    fn validate_rejects_flipped_element() {
        let mut mesh = triangulate(&DomainSpec::unit_square(), 1);
        mesh.elements[3].swap(0, 1);
        assert!(matches!(
            mesh.validate(),
            Err(Error::DegenerateElement { element: 3, .. })
        ));
    }
}
