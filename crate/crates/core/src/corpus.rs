//! Built-in example diagrams and a seeded generator of random connected
//! diagrams via braid closures.

use rand::Rng;

use crate::diagram::{Color, ColoredDiagram, Crossing, EdgeId, RawDiagram};
use crate::error::{Error, Result};

pub const TREFOIL: &str = include_str!("../corpus/trefoil.pd");
pub const FIGURE_EIGHT: &str = include_str!("../corpus/figure_eight.pd");
pub const HOPF_1COLOR: &str = include_str!("../corpus/hopf_1color.pd");
pub const HOPF_2COLOR: &str = include_str!("../corpus/hopf_2color.pd");
pub const TWO_COMPONENT_CURL: &str = include_str!("../corpus/two_component_curl.pd");
pub const UNKNOT: &str = include_str!("../corpus/unknot.pd");
pub const SPLIT_TWO_UNKNOTS: &str = include_str!("../corpus/split_two_unknots.pd");
pub const WHITEHEAD: &str = include_str!("../corpus/whitehead.pd");

/// All built-in diagrams by name, for iteration in tests and `verify`.
pub const ALL: &[(&str, &str)] = &[
    ("trefoil", TREFOIL),
    ("figure_eight", FIGURE_EIGHT),
    ("hopf_1color", HOPF_1COLOR),
    ("hopf_2color", HOPF_2COLOR),
    ("two_component_curl", TWO_COMPONENT_CURL),
    ("unknot", UNKNOT),
    ("split_two_unknots", SPLIT_TWO_UNKNOTS),
    ("whitehead", WHITEHEAD),
];

pub fn load(name: &str) -> Option<ColoredDiagram> {
    ALL.iter()
        .find(|(n, _)| *n == name)
        .map(|(_, src)| ColoredDiagram::parse(src).expect("built-in diagram is valid"))
}

/// Closure of a braid word on `strands` strands. Letters are nonzero
/// integers: `+i` crosses positions `i, i+1` with the left strand passing
/// over, `-i` with the left strand passing under. `component_colors[c]` is
/// the color of link component `c` (components ordered by least edge id).
/// Positions never crossed close up into crossingless circles.
pub fn braid_closure(
    strands: usize,
    word: &[i32],
    component_colors: &[Color],
) -> Result<ColoredDiagram> {
    if strands == 0 {
        return Err(Error::Domain("braid needs at least one strand".into()));
    }
    for &w in word {
        let i = w.unsigned_abs() as usize;
        if w == 0 || i >= strands {
            return Err(Error::Domain(format!(
                "braid letter {} out of range for {} strands",
                w, strands
            )));
        }
    }
    // Bottom edge of position p is p+1; fresh ids follow.
    let mut cur: Vec<EdgeId> = (1..=strands as EdgeId).collect();
    let mut next_id = strands as EdgeId + 1;
    let mut crossings: Vec<Crossing> = Vec::with_capacity(word.len());
    for &w in word {
        let i = w.unsigned_abs() as usize - 1;
        let (llow, rlow) = (cur[i], cur[i + 1]);
        let (ltop, rtop) = (next_id, next_id + 1);
        next_id += 2;
        // Slots counterclockwise from the incoming under-strand edge.
        if w > 0 {
            crossings.push(Crossing { edges: [rlow, llow, ltop, rtop] });
        } else {
            crossings.push(Crossing { edges: [llow, ltop, rtop, rlow] });
        }
        cur[i] = ltop;
        cur[i + 1] = rtop;
    }
    // Close each position: the top edge is identified with the bottom edge.
    let mut circles = Vec::new();
    for p in 0..strands {
        let bottom = p as EdgeId + 1;
        let top = cur[p];
        if top == bottom {
            circles.push(bottom);
        } else {
            for x in crossings.iter_mut() {
                for e in x.edges.iter_mut() {
                    if *e == top {
                        *e = bottom;
                    }
                }
            }
        }
    }
    // Assign colors by walking the strand permutation; then let the full
    // validator recompute everything from scratch.
    let provisional = ColoredDiagram::from_raw(RawDiagram {
        crossings: crossings.clone(),
        circles: circles.clone(),
        explicit_colors: Default::default(),
        default_color: Some(1),
        mark: None,
    })?;
    if component_colors.len() != provisional.num_link_components() {
        return Err(Error::Domain(format!(
            "braid closure has {} components but {} colors were given",
            provisional.num_link_components(),
            component_colors.len()
        )));
    }
    let explicit_colors = provisional
        .edges()
        .map(|e| (e, component_colors[provisional.component_of_edge(e)]))
        .collect();
    ColoredDiagram::from_raw(RawDiagram {
        crossings,
        circles,
        explicit_colors,
        default_color: None,
        mark: None,
    })
}

/// Number of link components of the closure of `word` on `strands` strands.
pub fn braid_closure_components(strands: usize, word: &[i32]) -> usize {
    let mut perm: Vec<usize> = (0..strands).collect();
    for &w in word {
        let i = w.unsigned_abs() as usize - 1;
        perm.swap(i, i + 1);
    }
    // Count cycles of the permutation taking bottom positions to top.
    let mut seen = vec![false; strands];
    let mut cycles = 0;
    for start in 0..strands {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut p = start;
        while !seen[p] {
            seen[p] = true;
            p = perm.iter().position(|&x| x == p).unwrap();
        }
    }
    cycles
}

/// Random connected diagram with exactly `mu` colors, at most `max_crossings`
/// crossings and at least one crossing. Deterministic for a fixed RNG state.
pub fn random_connected_diagram<R: Rng>(
    rng: &mut R,
    mu: usize,
    max_crossings: usize,
) -> ColoredDiagram {
    assert!(mu >= 1);
    let min_strands = (mu + 1).max(2);
    assert!(max_crossings >= min_strands, "too few crossings for {} colors", mu);
    for _ in 0..10_000 {
        let strands = rng.gen_range(min_strands..=min_strands + 1);
        let len = rng.gen_range(strands..=max_crossings.max(strands));
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let i = rng.gen_range(1..strands as i32);
                if rng.gen_bool(0.5) {
                    i
                } else {
                    -i
                }
            })
            .collect();
        // Connectivity: every generator index must occur.
        let all_present =
            (1..strands as i32).all(|i| word.iter().any(|&w| w.abs() == i));
        if !all_present {
            continue;
        }
        let comps = braid_closure_components(strands, &word);
        if comps < mu {
            continue;
        }
        let colors: Vec<Color> = (0..comps).map(|c| (c + 1).min(mu)).collect();
        if let Ok(d) = braid_closure(strands, &word, &colors) {
            if d.is_connected() {
                return d;
            }
        }
    }
    unreachable!("random diagram search failed to converge");
}
