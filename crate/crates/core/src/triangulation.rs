//! Gluing-level ideal triangulations and their derived combinatorics.
//!
//! A triangulation is a list of tetrahedra whose four corners carry
//! vertex-class labels, plus a pairing of tetrahedron faces. Face `f` of a
//! tetrahedron is the face opposite corner `f`. From the gluing data we derive
//! edge classes (union-find over oriented edge ends), vertex classes, and the
//! combinatorics of every vertex link (the boundary surface around each
//! hyper-ideal vertex).

use std::collections::{BTreeMap, HashMap};

use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The six edges of a tetrahedron as corner pairs. Slot `e` and slot `5 - e`
/// are opposite edges.
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Slot of the edge joining corners `p` and `q`.
pub fn edge_slot(p: usize, q: usize) -> usize {
    let (a, b) = if p < q { (p, q) } else { (q, p) };
    match (a, b) {
        (0, 1) => 0,
        (0, 2) => 1,
        (0, 3) => 2,
        (1, 2) => 3,
        (1, 3) => 4,
        (2, 3) => 5,
        _ => panic!("no edge between corners {p} and {q}"),
    }
}

/// Corners of face `f` in ascending order.
pub fn face_corners(f: usize) -> [usize; 3] {
    match f {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        3 => [0, 1, 2],
        _ => panic!("face index {f} out of range"),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TetSpec {
    pub id: usize,
    /// Dense vertex-class ids of corners `i, j, k, h`.
    pub corners: [usize; 4],
}

/// One face pairing. `map[k]` is the position (in ascending corner order) on
/// face `b` of the image of the `k`-th corner of face `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceGluing {
    pub face_a: (usize, usize),
    pub face_b: (usize, usize),
    pub map: [usize; 3],
}

/// Where a face is glued, with the induced map on all four corners
/// (`corners[f] = partner face`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Partner {
    pub tet: usize,
    pub face: usize,
    pub corners: [usize; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeClass {
    /// Vertex classes at the two ends. Equal entries mean both ends sit at
    /// the same hyper-ideal vertex.
    pub ends: [usize; 2],
    /// `(tet, edge slot)` members.
    pub members: Vec<(usize, usize)>,
}

/// Combinatorics of the link surface around one vertex class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VertexLink {
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
    pub euler_char: i64,
    pub degree: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Simple,
    Explicit,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    mode: Mode,
    tets: Vec<[u64; 4]>,
    #[serde(default)]
    gluings: Option<Vec<GluingRecord>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GluingRecord {
    a: [usize; 2],
    b: [usize; 2],
    map: [usize; 3],
}

/// A validated ideal triangulation with all derived indices.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    tets: Vec<TetSpec>,
    gluings: Vec<FaceGluing>,
    partners: Vec<[Partner; 4]>,
    labels: Vec<u64>,
    edge_classes: Vec<EdgeClass>,
    tet_edges: Vec<[usize; 6]>,
    links: Vec<VertexLink>,
    incident_edges: Vec<Vec<usize>>,
    corners_at: Vec<Vec<(usize, usize)>>,
}

fn end_index(tet: usize, p: usize, q: usize) -> usize {
    tet * 16 + p * 4 + q
}

fn link_edge_index(tet: usize, corner: usize, face: usize) -> usize {
    tet * 16 + corner * 4 + face
}

impl Triangulation {
    /// Parse the JSON document format (`simple` or `explicit` mode).
    pub fn parse(text: &str) -> Result<Self> {
        let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        match doc.mode {
            Mode::Simple => {
                if doc.gluings.is_some() {
                    return Err(Error::Parse(
                        "simple mode infers gluings; remove the \"gluings\" field or use explicit mode".into(),
                    ));
                }
                Self::simple(&doc.tets)
            }
            Mode::Explicit => {
                let records = doc
                    .gluings
                    .ok_or_else(|| Error::Parse("explicit mode requires a \"gluings\" field".into()))?;
                let gluings: Vec<FaceGluing> = records
                    .iter()
                    .map(|g| FaceGluing {
                        face_a: (g.a[0], g.a[1]),
                        face_b: (g.b[0], g.b[1]),
                        map: g.map,
                    })
                    .collect();
                Self::explicit(&doc.tets, &gluings)
            }
        }
    }

    /// Build from corner labels, pairing faces whose label triples match.
    /// Every triple must occur on exactly two faces and corners of a tet must
    /// be distinct.
    pub fn simple(tets: &[[u64; 4]]) -> Result<Self> {
        if tets.is_empty() {
            return Err(Error::Empty);
        }
        for (t, c) in tets.iter().enumerate() {
            for a in 0..4 {
                for b in a + 1..4 {
                    if c[a] == c[b] {
                        return Err(Error::RepeatedCorners { tet: t, corners: *c });
                    }
                }
            }
        }
        let triple = |t: usize, f: usize| {
            let fc = face_corners(f);
            let mut key = [tets[t][fc[0]], tets[t][fc[1]], tets[t][fc[2]]];
            key.sort_unstable();
            key
        };
        let mut faces_by_triple: BTreeMap<[u64; 3], Vec<(usize, usize)>> = BTreeMap::new();
        for t in 0..tets.len() {
            for f in 0..4 {
                faces_by_triple.entry(triple(t, f)).or_default().push((t, f));
            }
        }
        for t in 0..tets.len() {
            for f in 0..4 {
                let key = triple(t, f);
                match faces_by_triple[&key].len() {
                    2 => {}
                    1 => return Err(Error::UngluedFace { tet: t, face: f }),
                    count => return Err(Error::AmbiguousTriple { triple: key, count }),
                }
            }
        }
        let mut gluings = Vec::with_capacity(tets.len() * 2);
        for faces in faces_by_triple.values() {
            let (ta, fa) = faces[0];
            let (tb, fb) = faces[1];
            let ca = face_corners(fa);
            let cb = face_corners(fb);
            let mut map = [0; 3];
            for (k, &p) in ca.iter().enumerate() {
                map[k] = cb
                    .iter()
                    .position(|&q| tets[tb][q] == tets[ta][p])
                    .expect("matching triples share labels");
            }
            gluings.push(FaceGluing { face_a: (ta, fa), face_b: (tb, fb), map });
        }
        Self::explicit(tets, &gluings)
    }

    /// Build from corner labels and an explicit list of face pairings.
    pub fn explicit(tets: &[[u64; 4]], gluings: &[FaceGluing]) -> Result<Self> {
        if tets.is_empty() {
            return Err(Error::Empty);
        }
        let n_tets = tets.len();

        let mut labels: Vec<u64> = tets.iter().flatten().copied().collect();
        labels.sort_unstable();
        labels.dedup();
        let dense: HashMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let specs: Vec<TetSpec> = tets
            .iter()
            .enumerate()
            .map(|(id, c)| TetSpec { id, corners: c.map(|l| dense[&l]) })
            .collect();

        let mut partners: Vec<[Option<Partner>; 4]> = vec![[None; 4]; n_tets];
        for (index, g) in gluings.iter().enumerate() {
            let bad = |reason: String| Error::BadGluing { index, reason };
            let (ta, fa) = g.face_a;
            let (tb, fb) = g.face_b;
            if ta >= n_tets || tb >= n_tets {
                return Err(bad(format!("tet index out of range (have {n_tets} tets)")));
            }
            if fa >= 4 || fb >= 4 {
                return Err(bad("face index must be 0..3".into()));
            }
            let mut seen = [false; 3];
            for &m in &g.map {
                if m >= 3 || seen[m] {
                    return Err(bad(format!("map {:?} is not a permutation of 0,1,2", g.map)));
                }
                seen[m] = true;
            }
            if (ta, fa) == (tb, fb) {
                return Err(bad(format!("tet {ta}, face {fa} is glued to itself")));
            }
            for (t, f) in [(ta, fa), (tb, fb)] {
                if partners[t][f].is_some() {
                    return Err(Error::DoublyGluedFace { tet: t, face: f });
                }
            }
            let ca = face_corners(fa);
            let cb = face_corners(fb);
            let mut fwd = [0; 4];
            let mut back = [0; 4];
            fwd[fa] = fb;
            back[fb] = fa;
            for k in 0..3 {
                let p = ca[k];
                let q = cb[g.map[k]];
                if tets[ta][p] != tets[tb][q] {
                    return Err(Error::VertexClassMismatch {
                        index,
                        tet_a: ta,
                        corner_a: p,
                        class_a: tets[ta][p],
                        tet_b: tb,
                        corner_b: q,
                        class_b: tets[tb][q],
                    });
                }
                fwd[p] = q;
                back[q] = p;
            }
            partners[ta][fa] = Some(Partner { tet: tb, face: fb, corners: fwd });
            partners[tb][fb] = Some(Partner { tet: ta, face: fa, corners: back });
        }
        let mut full = Vec::with_capacity(n_tets);
        for (t, row) in partners.iter().enumerate() {
            let mut out = [Partner { tet: 0, face: 0, corners: [0; 4] }; 4];
            for f in 0..4 {
                out[f] = row[f].ok_or(Error::UngluedFace { tet: t, face: f })?;
            }
            full.push(out);
        }

        let mut canonical = Vec::with_capacity(n_tets * 2);
        for t in 0..n_tets {
            for f in 0..4 {
                let p = full[t][f];
                if (t, f) < (p.tet, p.face) {
                    let cb = face_corners(p.face);
                    let map = face_corners(f)
                        .map(|c| cb.iter().position(|&q| q == p.corners[c]).expect("corner on face"));
                    canonical.push(FaceGluing { face_a: (t, f), face_b: (p.tet, p.face), map });
                }
            }
        }

        let mut tri = Triangulation {
            tets: specs,
            gluings: canonical,
            partners: full,
            labels,
            edge_classes: Vec::new(),
            tet_edges: Vec::new(),
            links: Vec::new(),
            incident_edges: Vec::new(),
            corners_at: Vec::new(),
        };
        tri.derive()?;
        Ok(tri)
    }

    fn derive(&mut self) -> Result<()> {
        let n_tets = self.tets.len();
        let n_verts = self.labels.len();

        // Oriented edge ends (t, p, q): the end at corner p of edge pq.
        let mut ends = UnionFind::<usize>::new(n_tets * 16);
        // Link edges (t, p, f): side of vertex triangle p lying in face f.
        let mut link_sides = UnionFind::<usize>::new(n_tets * 16);
        for t in 0..n_tets {
            for f in 0..4 {
                let partner = self.partners[t][f];
                let fc = face_corners(f);
                for &p in &fc {
                    let p2 = partner.corners[p];
                    link_sides.union(link_edge_index(t, p, f), link_edge_index(partner.tet, p2, partner.face));
                    for &q in &fc {
                        if p != q {
                            ends.union(end_index(t, p, q), end_index(partner.tet, p2, partner.corners[q]));
                        }
                    }
                }
            }
        }

        let mut class_of_pair: HashMap<(usize, usize), usize> = HashMap::new();
        let mut edge_classes: Vec<EdgeClass> = Vec::new();
        let mut tet_edges = vec![[0usize; 6]; n_tets];
        for t in 0..n_tets {
            for (slot, &(p, q)) in EDGES.iter().enumerate() {
                let a = ends.find(end_index(t, p, q));
                let b = ends.find(end_index(t, q, p));
                if a == b {
                    return Err(Error::ReversedEdge { tet: t, p, q });
                }
                let key = (a.min(b), a.max(b));
                let id = *class_of_pair.entry(key).or_insert_with(|| {
                    let corners = self.tets[t].corners;
                    edge_classes.push(EdgeClass { ends: [corners[p], corners[q]], members: Vec::new() });
                    edge_classes.len() - 1
                });
                edge_classes[id].members.push((t, slot));
                tet_edges[t][slot] = id;
            }
        }

        let mut corners_at = vec![Vec::new(); n_verts];
        for tet in &self.tets {
            for (p, &v) in tet.corners.iter().enumerate() {
                corners_at[v].push((tet.id, p));
            }
        }

        let mut links = Vec::with_capacity(n_verts);
        for (v, corners) in corners_at.iter().enumerate() {
            let label = self.labels[v];
            let bad = |reason: String| Error::BadLink { vertex: label, reason };
            let mut side_count: HashMap<usize, usize> = HashMap::new();
            let mut side_owner: HashMap<usize, usize> = HashMap::new();
            let mut end_classes: Vec<usize> = Vec::new();
            let mut components = UnionFind::<usize>::new(corners.len());
            for (idx, &(t, p)) in corners.iter().enumerate() {
                for f in (0..4).filter(|&f| f != p) {
                    let side = link_sides.find(link_edge_index(t, p, f));
                    *side_count.entry(side).or_default() += 1;
                    match side_owner.get(&side) {
                        Some(&other) => {
                            components.union(other, idx);
                        }
                        None => {
                            side_owner.insert(side, idx);
                        }
                    }
                }
                for q in (0..4).filter(|&q| q != p) {
                    end_classes.push(ends.find(end_index(t, p, q)));
                }
            }
            end_classes.sort_unstable();
            end_classes.dedup();
            if let Some((_, &c)) = side_count.iter().find(|(_, &c)| c != 2) {
                return Err(bad(format!("a link edge lies in {c} link triangles")));
            }
            let faces = corners.len();
            let edges = side_count.len();
            let vertices = end_classes.len();
            if 3 * faces != 2 * edges {
                return Err(bad(format!("3F = {} but 2E = {}", 3 * faces, 2 * edges)));
            }
            let roots = {
                let mut r: Vec<usize> = (0..faces).map(|i| components.find(i)).collect();
                r.sort_unstable();
                r.dedup();
                r.len()
            };
            if roots != 1 {
                return Err(bad(format!("link has {roots} connected components")));
            }
            let euler_char = vertices as i64 - edges as i64 + faces as i64;
            if euler_char % 2 != 0 {
                return Err(bad(format!("odd Euler characteristic {euler_char}")));
            }
            if euler_char > 2 {
                return Err(bad(format!("Euler characteristic {euler_char} exceeds 2")));
            }
            links.push(VertexLink { faces, edges, vertices, euler_char, degree: faces });
        }

        let mut incident_edges = vec![Vec::new(); n_verts];
        for (e, class) in edge_classes.iter().enumerate() {
            incident_edges[class.ends[0]].push(e);
            incident_edges[class.ends[1]].push(e);
        }

        self.edge_classes = edge_classes;
        self.tet_edges = tet_edges;
        self.links = links;
        self.incident_edges = incident_edges;
        self.corners_at = corners_at;
        Ok(())
    }

    pub fn num_vertices(&self) -> usize {
        self.labels.len()
    }

    pub fn num_tets(&self) -> usize {
        self.tets.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_classes.len()
    }

    pub fn tets(&self) -> &[TetSpec] {
        &self.tets
    }

    /// Canonical face pairings, one per glued pair, ordered by `face_a`.
    pub fn gluings(&self) -> &[FaceGluing] {
        &self.gluings
    }

    pub fn partner(&self, tet: usize, face: usize) -> Partner {
        self.partners[tet][face]
    }

    /// Original file label of each dense vertex-class id.
    pub fn labels(&self) -> &[u64] {
        &self.labels
    }

    pub fn edge_classes(&self) -> &[EdgeClass] {
        &self.edge_classes
    }

    /// Edge class of each edge slot of `tet`.
    pub fn tet_edge_classes(&self, tet: usize) -> [usize; 6] {
        self.tet_edges[tet]
    }

    /// Edge classes with an end at `vertex`; loops appear twice.
    pub fn incident_edges(&self, vertex: usize) -> &[usize] {
        &self.incident_edges[vertex]
    }

    /// `(tet, corner)` pairs whose corner lies in `vertex`.
    pub fn corners_at(&self, vertex: usize) -> &[(usize, usize)] {
        &self.corners_at[vertex]
    }

    pub fn links(&self) -> &[VertexLink] {
        &self.links
    }

    pub fn vertex_link(&self, vertex: usize) -> Result<VertexLink> {
        self.links.get(vertex).copied().ok_or(Error::UnknownVertex(vertex))
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.links[vertex].degree
    }

    pub fn euler_char(&self, vertex: usize) -> i64 {
        self.links[vertex].euler_char
    }
}
