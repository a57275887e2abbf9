//! Colored planar diagrams: parsing, validation, signs, regions, components.
//!
//! A diagram is given by a colored PD code. Each crossing `X[s1,s2,s3,s4]`
//! lists its four edge ids counterclockwise starting from the incoming
//! under-strand edge, so slot 3 (0-based slot 2) is the outgoing under-strand
//! and the over-strand occupies slots 2 and 4 (0-based 1 and 3). Crossingless
//! circles are written `O[e]`. Colors are positive integers `1..=mu` and every
//! color must be used; the marked edge must have color 1.
//!
//! Regions are the face orbits of the combinatorial map induced by the
//! counterclockwise slot order; no geometric embedding is computed.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};

pub type EdgeId = u32;
pub type Color = usize;

/// One crossing; `edges[0]` is the incoming under-strand edge and the slots
/// proceed counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Crossing {
    pub edges: [EdgeId; 4],
}

/// Region structure of the diagram: face orbits over crossing corners, plus
/// one interior region per crossingless circle, plus a base region when there
/// are no crossings at all.
///
/// Corner `i` of a crossing lies between slots `i` and `i+1 mod 4`.
#[derive(Debug, Clone)]
pub struct RegionMap {
    num_regions: usize,
    corner_region: Vec<[usize; 4]>,
    regions: Vec<Vec<(usize, usize)>>,
    circle_interior: Vec<usize>,
}

impl RegionMap {
    pub fn num_regions(&self) -> usize {
        self.num_regions
    }

    /// Region containing corner `corner` of crossing `v`.
    pub fn region_of_corner(&self, v: usize, corner: usize) -> usize {
        self.corner_region[v][corner]
    }

    /// Corners `(crossing, corner)` of each region; empty for circle
    /// interiors and the base region of a crossingless diagram.
    pub fn corners_of(&self, region: usize) -> &[(usize, usize)] {
        &self.regions[region]
    }

    pub fn circle_interior(&self, circle_idx: usize) -> usize {
        self.circle_interior[circle_idx]
    }
}

/// Frame of a crossing: the four adjacent regions named per the local matrix
/// convention, together with the strand colors `(j, k)`.
///
/// `c` is the corner bounded by both incoming edges, and `b`, `a`, `d` follow
/// counterclockwise; `a` is bounded by both outgoing edges. `j` is the color
/// of the incoming edge bounding `b` and `k` the color of the incoming edge
/// bounding `d` (incoming-left and incoming-right when both strands point
/// upward).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Frame {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
    pub j: Color,
    pub k: Color,
}

/// Validated colored diagram with derived data (signs, regions, components).
/// Immutable after construction.
#[derive(Debug, Clone)]
pub struct ColoredDiagram {
    crossings: Vec<Crossing>,
    circles: Vec<EdgeId>,
    colors: BTreeMap<EdgeId, Color>,
    mark: EdgeId,
    num_colors: usize,
    /// 0-based slot (1 or 3) of the incoming over-strand edge.
    over_in_slot: Vec<usize>,
    signs: Vec<i8>,
    regions: RegionMap,
    /// Link component id per edge (components sorted by least edge id).
    edge_component: BTreeMap<EdgeId, usize>,
    num_link_components: usize,
    component_colors: Vec<Color>,
    num_diagram_components: usize,
}

/// Raw parse result before validation.
#[derive(Debug, Clone, Default)]
pub struct RawDiagram {
    pub crossings: Vec<Crossing>,
    pub circles: Vec<EdgeId>,
    pub explicit_colors: BTreeMap<EdgeId, Color>,
    pub default_color: Option<Color>,
    pub mark: Option<EdgeId>,
}

impl RawDiagram {
    /// Parse a colored PD code, accepting both the text format and its JSON
    /// mirror, without validating. Callers can adjust fields (such as the
    /// marked edge) before building the diagram.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            parse_json(text)
        } else {
            parse_text(text)
        }
    }
}

impl ColoredDiagram {
    /// Parse a colored PD code, accepting both the text format and its JSON
    /// mirror, then validate.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_raw(RawDiagram::parse(text)?)
    }

    pub fn from_raw(raw: RawDiagram) -> Result<Self> {
        let RawDiagram { crossings, circles, explicit_colors, default_color, mark } = raw;

        if crossings.is_empty() && circles.is_empty() {
            return Err(Error::Validation("diagram has no crossings and no circles".into()));
        }

        // Edge occurrence map over crossing slots.
        let mut occurrences: BTreeMap<EdgeId, Vec<(usize, usize)>> = BTreeMap::new();
        for (v, x) in crossings.iter().enumerate() {
            for (s, &e) in x.edges.iter().enumerate() {
                occurrences.entry(e).or_default().push((v, s));
            }
        }
        for (&e, occ) in &occurrences {
            if occ.len() != 2 {
                return Err(Error::Validation(format!(
                    "edge {} appears {} times in crossings (expected 2)",
                    e,
                    occ.len()
                )));
            }
        }
        let mut circle_set = BTreeSet::new();
        for &e in &circles {
            if occurrences.contains_key(&e) {
                return Err(Error::Validation(format!(
                    "edge {} is both a circle and a crossing edge",
                    e
                )));
            }
            if !circle_set.insert(e) {
                return Err(Error::Validation(format!("circle edge {} listed twice", e)));
            }
        }

        let all_edges: Vec<EdgeId> =
            occurrences.keys().copied().chain(circles.iter().copied()).collect();

        // Colors: explicit entries, then the default for the rest.
        let mut colors: BTreeMap<EdgeId, Color> = BTreeMap::new();
        for (&e, &c) in &explicit_colors {
            if !occurrences.contains_key(&e) && !circle_set.contains(&e) {
                return Err(Error::Validation(format!(
                    "color assigned to unknown edge {}",
                    e
                )));
            }
            colors.insert(e, c);
        }
        for &e in &all_edges {
            if let std::collections::btree_map::Entry::Vacant(slot) = colors.entry(e) {
                match default_color {
                    Some(c) => {
                        slot.insert(c);
                    }
                    None => {
                        return Err(Error::Validation(format!(
                            "edge {} has no color and no default is given",
                            e
                        )))
                    }
                }
            }
        }
        let num_colors = *colors.values().max().unwrap();
        for c in 1..=num_colors {
            if !colors.values().any(|&x| x == c) {
                return Err(Error::Validation(format!(
                    "color {} is never used (colors must be 1..={})",
                    c, num_colors
                )));
            }
        }

        let over_in_slot = solve_orientations(&crossings, &occurrences)?;
        let signs: Vec<i8> =
            over_in_slot.iter().map(|&s| if s == 1 { 1 } else { -1 }).collect();

        let regions = compute_regions(&crossings, &occurrences, circles.len());

        // Link components: under and over strands pass straight through.
        let mut uf = UnionFind::new();
        for &e in &all_edges {
            uf.add(e);
        }
        for (v, x) in crossings.iter().enumerate() {
            uf.union(x.edges[0], x.edges[2]);
            let o = over_in_slot[v];
            uf.union(x.edges[o], x.edges[(o + 2) % 4]);
        }
        let (edge_component, num_link_components) = uf.components();
        let mut component_colors = vec![0usize; num_link_components];
        for (&e, &comp) in &edge_component {
            let c = colors[&e];
            if component_colors[comp] == 0 {
                component_colors[comp] = c;
            } else if component_colors[comp] != c {
                return Err(Error::Validation(format!(
                    "component containing edge {} mixes colors {} and {}",
                    e, component_colors[comp], c
                )));
            }
        }

        // Diagram components: crossings linked by shared edges, plus one per
        // circle.
        let mut cuf = UnionFindIdx::new(crossings.len());
        for occ in occurrences.values() {
            cuf.union(occ[0].0, occ[1].0);
        }
        let num_diagram_components = cuf.count() + circles.len();

        // Marked edge: explicit or the least edge of color 1.
        let mark = match mark {
            Some(e) => {
                match colors.get(&e) {
                    None => {
                        return Err(Error::Validation(format!("marked edge {} does not exist", e)))
                    }
                    Some(&c) if c != 1 => {
                        return Err(Error::Validation(format!(
                            "marked edge {} has color {} (must be 1)",
                            e, c
                        )))
                    }
                    _ => e,
                }
            }
            None => *colors
                .iter()
                .find(|(_, &c)| c == 1)
                .map(|(e, _)| e)
                .ok_or_else(|| Error::Validation("no edge of color 1 for the mark".into()))?,
        };

        Ok(ColoredDiagram {
            crossings,
            circles,
            colors,
            mark,
            num_colors,
            over_in_slot,
            signs,
            regions,
            edge_component,
            num_link_components,
            component_colors,
            num_diagram_components,
        })
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn circles(&self) -> &[EdgeId] {
        &self.circles
    }

    pub fn num_edges(&self) -> usize {
        self.colors.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.colors.keys().copied()
    }

    pub fn color(&self, e: EdgeId) -> Color {
        self.colors[&e]
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn mark(&self) -> EdgeId {
        self.mark
    }

    pub fn sign(&self, v: usize) -> i8 {
        self.signs[v]
    }

    pub fn over_in_slot(&self, v: usize) -> usize {
        self.over_in_slot[v]
    }

    pub fn over_in_edge(&self, v: usize) -> EdgeId {
        self.crossings[v].edges[self.over_in_slot[v]]
    }

    pub fn over_out_edge(&self, v: usize) -> EdgeId {
        self.crossings[v].edges[(self.over_in_slot[v] + 2) % 4]
    }

    pub fn under_in_edge(&self, v: usize) -> EdgeId {
        self.crossings[v].edges[0]
    }

    pub fn under_out_edge(&self, v: usize) -> EdgeId {
        self.crossings[v].edges[2]
    }

    pub fn regions(&self) -> &RegionMap {
        &self.regions
    }

    pub fn num_regions(&self) -> usize {
        self.regions.num_regions()
    }

    /// Number of connected pieces of the picture (crossing clusters plus
    /// crossingless circles).
    pub fn num_diagram_components(&self) -> usize {
        self.num_diagram_components
    }

    pub fn is_connected(&self) -> bool {
        self.num_diagram_components == 1
    }

    /// Number of link components (closed strands).
    pub fn num_link_components(&self) -> usize {
        self.num_link_components
    }

    pub fn component_of_edge(&self, e: EdgeId) -> usize {
        self.edge_component[&e]
    }

    pub fn component_color(&self, comp: usize) -> Color {
        self.component_colors[comp]
    }

    /// Colors of the two strands at crossing `v` as `(under, over)`.
    pub fn strand_colors(&self, v: usize) -> (Color, Color) {
        (
            self.colors[&self.under_in_edge(v)],
            self.colors[&self.over_in_edge(v)],
        )
    }

    pub fn is_monochromatic(&self, v: usize) -> bool {
        let (u, o) = self.strand_colors(v);
        u == o
    }

    /// Sum of the signs of all monochromatic crossings.
    pub fn monochromatic_writhe(&self) -> i64 {
        (0..self.num_crossings())
            .filter(|&v| self.is_monochromatic(v))
            .map(|v| self.signs[v] as i64)
            .sum()
    }

    /// Linking number of two distinct link components: half the signed count
    /// of crossings between them.
    pub fn linking_number(&self, comp_a: usize, comp_b: usize) -> Result<i64> {
        if comp_a == comp_b {
            return Err(Error::Domain("linking number needs distinct components".into()));
        }
        let mut sum: i64 = 0;
        for v in 0..self.num_crossings() {
            let cu = self.edge_component[&self.under_in_edge(v)];
            let co = self.edge_component[&self.over_in_edge(v)];
            if (cu, co) == (comp_a, comp_b) || (cu, co) == (comp_b, comp_a) {
                sum += self.signs[v] as i64;
            }
        }
        if sum % 2 != 0 {
            return Err(Error::Inconsistency(
                "odd signed crossing count between two components".into(),
            ));
        }
        Ok(sum / 2)
    }

    /// Sum of linking numbers over all pairs with one component of each color.
    pub fn linking_between_colors(&self, c1: Color, c2: Color) -> Result<i64> {
        if c1 == c2 {
            return Err(Error::Domain("linking sum needs distinct colors".into()));
        }
        let mut sum: i64 = 0;
        for v in 0..self.num_crossings() {
            let (u, o) = self.strand_colors(v);
            if (u, o) == (c1, c2) || (u, o) == (c2, c1) {
                sum += self.signs[v] as i64;
            }
        }
        if sum % 2 != 0 {
            return Err(Error::Inconsistency(
                "odd signed crossing count between two colors".into(),
            ));
        }
        Ok(sum / 2)
    }

    /// Frame of crossing `v`: adjacent regions `(a, b, c, d)` and colors
    /// `(j, k)`. Regions may repeat; builders add repeated contributions.
    pub fn crossing_frame(&self, v: usize) -> Frame {
        let o = self.over_in_slot[v];
        // Corner i sits between slots i and i+1 mod 4. The corner bounded by
        // both incoming edges (slots 0 and o) is corner 0 when the over-strand
        // comes in at slot 1, corner 3 when it comes in at slot 3.
        let (c_corner, j, k) = if o == 1 {
            (0usize, self.colors[&self.crossings[v].edges[1]], self.colors[&self.crossings[v].edges[0]])
        } else {
            (3usize, self.colors[&self.crossings[v].edges[0]], self.colors[&self.crossings[v].edges[3]])
        };
        let r = |corner: usize| self.regions.region_of_corner(v, corner % 4);
        Frame {
            c: r(c_corner),
            b: r(c_corner + 1),
            a: r(c_corner + 2),
            d: r(c_corner + 3),
            j,
            k,
        }
    }

    /// The two regions on either side of an edge. For a crossingless circle
    /// these are its interior and the first region.
    pub fn edge_regions(&self, e: EdgeId) -> (usize, usize) {
        if let Some(i) = self.circles.iter().position(|&x| x == e) {
            return (self.regions.circle_interior(i), 0);
        }
        for (v, x) in self.crossings.iter().enumerate() {
            for (s, &ee) in x.edges.iter().enumerate() {
                if ee == e {
                    return (
                        self.regions.region_of_corner(v, (s + 3) % 4),
                        self.regions.region_of_corner(v, s),
                    );
                }
            }
        }
        unreachable!("edge id validated at construction");
    }

    /// Regions adjacent to the marked edge; these are the rows and columns
    /// removed by the marked deletion. Distinct for any valid diagram.
    pub fn marked_regions(&self) -> Result<(usize, usize)> {
        let (p, q) = self.edge_regions(self.mark);
        if p == q {
            return Err(Error::Validation(
                "marked edge has the same region on both sides".into(),
            ));
        }
        Ok((p, q))
    }

    /// Identify colors `c1` and `c2`; the higher color disappears and colors
    /// above it shift down to stay contiguous.
    pub fn merge_colors(&self, c1: Color, c2: Color) -> Result<ColoredDiagram> {
        if c1 == c2 {
            return Err(Error::Domain("merge needs two distinct colors".into()));
        }
        if c1 == 0 || c2 == 0 || c1 > self.num_colors || c2 > self.num_colors {
            return Err(Error::Domain(format!(
                "colors {} and {} must lie in 1..={}",
                c1, c2, self.num_colors
            )));
        }
        let lo = c1.min(c2);
        let hi = c1.max(c2);
        let remap = |c: Color| {
            if c == hi {
                lo
            } else if c > hi {
                c - 1
            } else {
                c
            }
        };
        let raw = RawDiagram {
            crossings: self.crossings.clone(),
            circles: self.circles.clone(),
            explicit_colors: self.colors.iter().map(|(&e, &c)| (e, remap(c))).collect(),
            default_color: None,
            mark: Some(self.mark),
        };
        ColoredDiagram::from_raw(raw)
    }
}

/// Resolve in/out directions of the over-strand slots by constraint
/// propagation: each edge is incoming exactly once, and each crossing's
/// over-strand enters at exactly one of slots 1 and 3.
///
/// Returns the incoming over slot (1 or 3) per crossing. Components of the
/// constraint graph not touching any under-strand slot are orientable both
/// ways; the least occurrence is then chosen incoming, deterministically.
fn solve_orientations(
    crossings: &[Crossing],
    occurrences: &BTreeMap<EdgeId, Vec<(usize, usize)>>,
) -> Result<Vec<usize>> {
    // Node = (crossing, slot); value = true when the edge points into the
    // crossing there. Slots 0 (under-in) and 2 (under-out) are fixed.
    let n = crossings.len();
    let idx = |v: usize, s: usize| 4 * v + s;
    let mut val: Vec<Option<bool>> = vec![None; 4 * n];
    for v in 0..n {
        val[idx(v, 0)] = Some(true);
        val[idx(v, 2)] = Some(false);
    }
    // Opposite-value constraints.
    let mut opp: Vec<Vec<usize>> = vec![Vec::new(); 4 * n];
    for v in 0..n {
        opp[idx(v, 1)].push(idx(v, 3));
        opp[idx(v, 3)].push(idx(v, 1));
    }
    for occ in occurrences.values() {
        let (a, b) = (idx(occ[0].0, occ[0].1), idx(occ[1].0, occ[1].1));
        opp[a].push(b);
        opp[b].push(a);
    }
    let mut queue: VecDeque<usize> = (0..4 * n).filter(|&i| val[i].is_some()).collect();
    loop {
        while let Some(i) = queue.pop_front() {
            let vi = val[i].unwrap();
            for &j in &opp[i] {
                match val[j] {
                    None => {
                        val[j] = Some(!vi);
                        queue.push_back(j);
                    }
                    Some(vj) if vj == vi => {
                        let (v, s) = (j / 4, j % 4);
                        return Err(Error::Validation(format!(
                            "inconsistent orientation at crossing {}, slot {} (edge {} directed both ways)",
                            v + 1,
                            s + 1,
                            crossings[v].edges[s]
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        // Orient any leftover all-over component: least slot becomes incoming.
        match (0..4 * n).find(|&i| val[i].is_none()) {
            Some(i) => {
                val[i] = Some(true);
                queue.push_back(i);
            }
            None => break,
        }
    }
    let mut result = Vec::with_capacity(n);
    for v in 0..n {
        let s1 = val[idx(v, 1)].unwrap();
        let s3 = val[idx(v, 3)].unwrap();
        debug_assert_ne!(s1, s3);
        result.push(if s1 { 1 } else { 3 });
    }
    Ok(result)
}

/// Face orbits of the combinatorial map. Arriving at a crossing along the
/// edge in slot `s` closes the corner between slots `s` and `s+1` and leaves
/// along slot `s+1`; orbits are started at unvisited corners in order, so the
/// numbering is canonical (regions sorted by their least corner).
fn compute_regions(
    crossings: &[Crossing],
    occurrences: &BTreeMap<EdgeId, Vec<(usize, usize)>>,
    num_circles: usize,
) -> RegionMap {
    let n = crossings.len();
    let other_end = |v: usize, s: usize| -> (usize, usize) {
        let occ = &occurrences[&crossings[v].edges[s]];
        if occ[0] == (v, s) {
            occ[1]
        } else {
            occ[0]
        }
    };
    let mut corner_region = vec![[usize::MAX; 4]; n];
    let mut regions: Vec<Vec<(usize, usize)>> = Vec::new();
    for v0 in 0..n {
        for c0 in 0..4 {
            if corner_region[v0][c0] != usize::MAX {
                continue;
            }
            let id = regions.len();
            let mut corners = Vec::new();
            let (mut v, mut c) = (v0, c0);
            loop {
                corner_region[v][c] = id;
                corners.push((v, c));
                // Depart along slot c+1; arrive at the far occurrence.
                let (nv, ns) = other_end(v, (c + 1) % 4);
                v = nv;
                c = ns;
                if (v, c) == (v0, c0) {
                    break;
                }
            }
            regions.push(corners);
        }
    }
    if n == 0 {
        // Base region for a crossingless diagram.
        regions.push(Vec::new());
    }
    let mut circle_interior = Vec::with_capacity(num_circles);
    for _ in 0..num_circles {
        circle_interior.push(regions.len());
        regions.push(Vec::new());
    }
    RegionMap {
        num_regions: regions.len(),
        corner_region,
        regions,
        circle_interior,
    }
}

struct UnionFind {
    parent: BTreeMap<EdgeId, EdgeId>,
}

impl UnionFind {
    fn new() -> Self {
        UnionFind { parent: BTreeMap::new() }
    }

    fn add(&mut self, e: EdgeId) {
        self.parent.entry(e).or_insert(e);
    }

    fn find(&mut self, e: EdgeId) -> EdgeId {
        let p = self.parent[&e];
        if p == e {
            return e;
        }
        let root = self.find(p);
        self.parent.insert(e, root);
        root
    }

    fn union(&mut self, a: EdgeId, b: EdgeId) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }

    /// Component index per edge, components numbered by least edge id.
    fn components(&mut self) -> (BTreeMap<EdgeId, usize>, usize) {
        let edges: Vec<EdgeId> = self.parent.keys().copied().collect();
        let mut roots: Vec<EdgeId> = Vec::new();
        let mut map = BTreeMap::new();
        for e in edges {
            let r = self.find(e);
            let id = match roots.iter().position(|&x| x == r) {
                Some(i) => i,
                None => {
                    roots.push(r);
                    roots.len() - 1
                }
            };
            map.insert(e, id);
        }
        (map, roots.len())
    }
}

struct UnionFindIdx {
    parent: Vec<usize>,
}

impl UnionFindIdx {
    fn new(n: usize) -> Self {
        UnionFindIdx { parent: (0..n).collect() }
    }

    fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let r = self.find(self.parent[i]);
            self.parent[i] = r;
        }
        self.parent[i]
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }

    fn count(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&i| self.find(i) == i).count()
    }
}

fn parse_text(text: &str) -> Result<RawDiagram> {
    let mut raw = RawDiagram::default();
    for (lineno, line) in text.lines().enumerate() {
        let line = match line.find('#') {
            Some(i) => &line[..i],
            None => line,
        };
        let compact: String = line.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse(format!("line {}: {}", lineno + 1, msg));
        if let Some(rest) = compact.strip_prefix("colors:") {
            for item in rest.split(',').filter(|s| !s.is_empty()) {
                let (lhs, rhs) = item
                    .split_once('=')
                    .ok_or_else(|| err(format!("expected edge=color, got '{}'", item)))?;
                let color: Color = rhs
                    .parse()
                    .ok()
                    .filter(|&c| c >= 1)
                    .ok_or_else(|| err(format!("bad color '{}'", rhs)))?;
                if lhs == "default" {
                    if raw.default_color.replace(color).is_some() {
                        return Err(err("duplicate default color".into()));
                    }
                } else {
                    let e: EdgeId =
                        lhs.parse().map_err(|_| err(format!("bad edge id '{}'", lhs)))?;
                    if let Some(old) = raw.explicit_colors.insert(e, color) {
                        if old != color {
                            return Err(err(format!(
                                "edge {} assigned colors {} and {}",
                                e, old, color
                            )));
                        }
                    }
                }
            }
        } else if let Some(rest) = compact.strip_prefix("mark:") {
            let e: EdgeId =
                rest.parse().map_err(|_| err(format!("bad mark edge '{}'", rest)))?;
            if raw.mark.replace(e).is_some() {
                return Err(err("duplicate mark line".into()));
            }
        } else {
            let mut s = compact.as_str();
            while !s.is_empty() {
                if let Some(rest) = s.strip_prefix("X[") {
                    let end = rest
                        .find(']')
                        .ok_or_else(|| err("unterminated X[...]".into()))?;
                    let nums: Vec<&str> = rest[..end].split(',').collect();
                    if nums.len() != 4 {
                        return Err(err(format!(
                            "X[...] needs 4 edge ids, got {}",
                            nums.len()
                        )));
                    }
                    let mut edges = [0u32; 4];
                    for (i, t) in nums.iter().enumerate() {
                        edges[i] =
                            t.parse().map_err(|_| err(format!("bad edge id '{}'", t)))?;
                    }
                    raw.crossings.push(Crossing { edges });
                    s = &rest[end + 1..];
                } else if let Some(rest) = s.strip_prefix("O[") {
                    let end = rest
                        .find(']')
                        .ok_or_else(|| err("unterminated O[...]".into()))?;
                    let e: EdgeId = rest[..end]
                        .parse()
                        .map_err(|_| err(format!("bad edge id '{}'", &rest[..end])))?;
                    raw.circles.push(e);
                    s = &rest[end + 1..];
                } else {
                    return Err(err(format!("unrecognized token near '{}'", s)));
                }
            }
        }
    }
    Ok(raw)
}

fn parse_json(text: &str) -> Result<RawDiagram> {
    let v: serde_json::Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bad JSON: {}", e)))?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("top-level JSON value must be an object".into()))?;
    let mut raw = RawDiagram::default();
    let crossings = obj
        .get("crossings")
        .and_then(|x| x.as_array())
        .ok_or_else(|| Error::Parse("missing 'crossings' array".into()))?;
    for c in crossings {
        let arr = c
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| Error::Parse("each crossing must be a 4-element array".into()))?;
        let mut edges = [0u32; 4];
        for (i, x) in arr.iter().enumerate() {
            edges[i] = x
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Parse("edge ids must be nonnegative integers".into()))?;
        }
        raw.crossings.push(Crossing { edges });
    }
    if let Some(circles) = obj.get("circles") {
        let arr = circles
            .as_array()
            .ok_or_else(|| Error::Parse("'circles' must be an array".into()))?;
        for x in arr {
            let e = x
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Parse("circle ids must be nonnegative integers".into()))?;
            raw.circles.push(e);
        }
    }
    let colors = obj
        .get("colors")
        .and_then(|x| x.as_object())
        .ok_or_else(|| Error::Parse("missing 'colors' object".into()))?;
    for (k, val) in colors {
        let c = val
            .as_u64()
            .and_then(|n| usize::try_from(n).ok())
            .filter(|&c| c >= 1)
            .ok_or_else(|| Error::Parse(format!("bad color for '{}'", k)))?;
        if k == "default" {
            raw.default_color = Some(c);
        } else {
            let e: EdgeId = k
                .parse()
                .map_err(|_| Error::Parse(format!("bad edge id '{}' in colors", k)))?;
            raw.explicit_colors.insert(e, c);
        }
    }
    if let Some(m) = obj.get("mark") {
        if !m.is_null() {
            let e = m
                .as_u64()
                .and_then(|n| u32::try_from(n).ok())
                .ok_or_else(|| Error::Parse("'mark' must be an edge id".into()))?;
            raw.mark = Some(e);
        }
    }
    Ok(raw)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{HOPF_2COLOR as HOPF2, TREFOIL, TWO_COMPONENT_CURL as FIG1};

    #[test]
    fn trefoil_structure() {
        let d = ColoredDiagram::parse(TREFOIL).unwrap();
        assert_eq!(d.num_crossings(), 3);
        assert_eq!(d.num_edges(), 6);
        assert_eq!(d.num_colors(), 1);
        assert!(d.is_connected());
        assert_eq!(d.num_link_components(), 1);
        assert_eq!(d.num_regions(), 5);
        for v in 0..3 {
            assert_eq!(d.sign(v), 1, "crossing {} sign", v);
        }
        assert_eq!(d.monochromatic_writhe(), 3);
        assert_eq!(d.mark(), 1);
    }

    #[test]
    fn hopf_structure() {
        let d = ColoredDiagram::parse(HOPF2).unwrap();
        assert_eq!(d.num_crossings(), 2);
        assert_eq!(d.num_regions(), 4);
        assert_eq!(d.num_colors(), 2);
        assert_eq!(d.num_link_components(), 2);
        assert!(d.is_connected());
        assert_eq!(d.sign(0), 1);
        assert_eq!(d.sign(1), 1);
        assert_eq!(d.monochromatic_writhe(), 0);
        assert_eq!(d.linking_number(0, 1).unwrap(), 1);
        assert_eq!(d.linking_between_colors(1, 2).unwrap(), 1);
    }

    #[test]
    fn two_component_example_structure() {
        let d = ColoredDiagram::parse(FIG1).unwrap();
        assert_eq!(d.num_crossings(), 5);
        assert_eq!(d.num_regions(), 7);
        assert_eq!(d.num_colors(), 2);
        assert_eq!(d.num_link_components(), 2);
        assert!(d.is_connected());
        let signs: Vec<i8> = (0..5).map(|v| d.sign(v)).collect();
        assert_eq!(signs, vec![1, 1, 1, 1, -1]);
        assert_eq!(d.monochromatic_writhe(), -1);
        assert_eq!(d.linking_between_colors(1, 2).unwrap(), 2);
        assert_eq!(d.mark(), 5);
        let (p, q) = d.marked_regions().unwrap();
        assert_ne!(p, q);
        // The curl bounds a one-corner region on one side.
        let small = d.regions().corners_of(p).len().min(d.regions().corners_of(q).len());
        assert_eq!(small, 1);
    }

    #[test]
    fn unknot_and_split_circles() {
        let d = ColoredDiagram::parse("O[1]\ncolors: 1=1\n").unwrap();
        assert_eq!(d.num_crossings(), 0);
        assert_eq!(d.num_regions(), 2);
        assert!(d.is_connected());
        assert_eq!(d.num_link_components(), 1);
        assert_eq!(d.mark(), 1);
        let (p, q) = d.marked_regions().unwrap();
        assert_ne!(p, q);

        let s = ColoredDiagram::parse("O[1] O[2]\ncolors: 1=1, 2=2\n").unwrap();
        assert_eq!(s.num_regions(), 3);
        assert_eq!(s.num_diagram_components(), 2);
        assert!(!s.is_connected());
        assert_eq!(s.linking_number(0, 1).unwrap(), 0);
    }

    #[test]
    fn json_mirror_matches_text() {
        let d1 = ColoredDiagram::parse(FIG1).unwrap();
        let json = r#"{
            "crossings": [[10,6,7,1],[1,7,2,8],[8,2,9,3],[3,9,4,10],[4,6,5,5]],
            "colors": {"7":2, "8":2, "9":2, "10":2, "default":1},
            "mark": 5
        }"#;
        let d2 = ColoredDiagram::parse(json).unwrap();
        assert_eq!(d1.crossings(), d2.crossings());
        assert_eq!(d1.mark(), d2.mark());
        assert_eq!(d1.num_colors(), d2.num_colors());
        for v in 0..5 {
            assert_eq!(d1.sign(v), d2.sign(v));
            assert_eq!(d1.crossing_frame(v), d2.crossing_frame(v));
        }
    }

    #[test]
    fn validation_failures() {
        // Edge appears three times.
        assert!(matches!(
            ColoredDiagram::parse("X[1,1,2,1]\ncolors: default=1\n"),
            Err(Error::Validation(_))
        ));
        // Edge 3 incoming twice: under-in of two different crossings.
        let twice_in = "X[1,4,2,5] X[3,6,4,1] X[3,2,6,5]\ncolors: default=1\n";
        let e = ColoredDiagram::parse(twice_in).unwrap_err();
        assert!(matches!(e, Error::Validation(_)), "got {:?}", e);
        assert!(e.to_string().contains("orientation"));
        // Missing color for edge 3.
        assert!(ColoredDiagram::parse("O[3]\ncolors: 1=1\n").is_err());
        // Unused color index.
        assert!(matches!(
            ColoredDiagram::parse("O[1]\ncolors: 1=3\n"),
            Err(Error::Validation(_))
        ));
        // Mark on a non-color-1 edge.
        assert!(ColoredDiagram::parse("O[1] O[2]\ncolors: 1=1, 2=2\nmark: 2\n").is_err());
        // Mark on a nonexistent edge.
        assert!(ColoredDiagram::parse("O[1]\ncolors: 1=1\nmark: 9\n").is_err());
        // No color-1 edge at all.
        assert!(ColoredDiagram::parse("O[9]\ncolors: 9=2\n").is_err());
        // Component mixing colors.
        assert!(ColoredDiagram::parse("X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]\ncolors: 1=2, default=1\n").is_err());
        // Empty input.
        assert!(ColoredDiagram::parse("# nothing\n").is_err());
    }

    #[test]
    fn comments_and_whitespace_are_ignored() {
        let spaced =
            "  X[ 1 , 4 ,2,5]   # first\n\tX[3,6,4,1]X[5,2,6,3]\n colors : default = 1\n";
        let d = ColoredDiagram::parse(spaced).unwrap();
        assert_eq!(d.num_crossings(), 3);
        assert_eq!(d.monochromatic_writhe(), 3);
    }

    #[test]
    fn signs_invariant_under_relabeling() {
        let d1 = ColoredDiagram::parse(TREFOIL).unwrap();
        let shifted = "X[11,14,12,15] X[13,16,14,11] X[15,12,16,13]\ncolors: default=1\n";
        let d2 = ColoredDiagram::parse(shifted).unwrap();
        for v in 0..3 {
            assert_eq!(d1.sign(v), d2.sign(v));
        }
        assert_eq!(d1.num_regions(), d2.num_regions());
    }

    #[test]
    fn frames_cover_all_corners() {
        for src in [TREFOIL, HOPF2, FIG1] {
            let d = ColoredDiagram::parse(src).unwrap();
            let mut hits = vec![0usize; d.num_regions()];
            for v in 0..d.num_crossings() {
                let f = d.crossing_frame(v);
                for r in [f.a, f.b, f.c, f.d] {
                    hits[r] += 1;
                }
            }
            let total: usize = hits.iter().sum();
            assert_eq!(total, 4 * d.num_crossings());
            for (r, &h) in hits.iter().enumerate() {
                assert!(h >= 1, "region {} has no corner", r);
            }
        }
    }

    #[test]
    fn frame_c_and_a_are_opposite() {
        // a is the corner bounded by both outgoing edges, diametrically
        // opposite c; with corners numbered from c this means offset 2.
        let d = ColoredDiagram::parse(FIG1).unwrap();
        for v in 0..d.num_crossings() {
            let o = d.over_in_slot(v);
            let c_corner = if o == 1 { 0 } else { 3 };
            let f = d.crossing_frame(v);
            assert_eq!(f.c, d.regions().region_of_corner(v, c_corner));
            assert_eq!(f.a, d.regions().region_of_corner(v, (c_corner + 2) % 4));
        }
    }

    #[test]
    fn merge_colors_preserves_geometry() {
        let d = ColoredDiagram::parse(FIG1).unwrap();
        let m = d.merge_colors(1, 2).unwrap();
        assert_eq!(m.num_colors(), 1);
        assert_eq!(m.num_crossings(), d.num_crossings());
        assert_eq!(m.num_regions(), d.num_regions());
        for v in 0..d.num_crossings() {
            assert_eq!(m.sign(v), d.sign(v));
        }
        // All crossings become monochromatic: w_m = 4 - 1.
        assert_eq!(m.monochromatic_writhe(), 3);
        assert!(d.merge_colors(1, 1).is_err());
        assert!(d.merge_colors(1, 5).is_err());
    }
}
