//! Independent Alexander-polynomial oracle via the Wirtinger presentation
//! and Fox calculus.
//!
//! This route never touches the region matrices: it reads the diagram as a
//! group presentation (one generator per arc, one conjugation relation per
//! crossing), differentiates the relators with the free differential
//! calculus, abelianizes, and extracts the first Alexander polynomial from
//! maximal minors. Agreement with the determinant route is therefore a
//! meaningful end-to-end check, not a tautology.

use std::collections::BTreeMap;

use num::{BigRational, One};

use crate::diagram::{Color, ColoredDiagram};
use crate::error::{Error, Result};
use crate::laurent::{bareiss_det, LaurentPoly};

/// Wirtinger presentation of the diagram's link group. Generators are arcs
/// (maximal overpasses); each crossing with sign `e`, over-arc `o`,
/// incoming under-arc `a` and outgoing under-arc `b` contributes the
/// relator `o^e a o^-e b^-1`.
#[derive(Debug, Clone)]
pub struct WirtingerPresentation {
    num_arcs: usize,
    arc_colors: Vec<Color>,
    relations: Vec<[(usize, i8); 4]>,
    num_colors: usize,
}

impl WirtingerPresentation {
    pub fn num_arcs(&self) -> usize {
        self.num_arcs
    }

    pub fn num_relations(&self) -> usize {
        self.relations.len()
    }

    pub fn arc_color(&self, arc: usize) -> Color {
        self.arc_colors[arc]
    }

    /// Build the presentation. Arcs are computed by joining the two
    /// over-strand edges of every crossing; under-strands break.
    pub fn new(d: &ColoredDiagram) -> WirtingerPresentation {
        let mut ids: Vec<u32> = Vec::new();
        for c in d.crossings() {
            ids.extend_from_slice(&c.edges);
        }
        for &e in d.circles() {
            ids.push(e);
        }
        ids.sort_unstable();
        ids.dedup();
        let index: BTreeMap<u32, usize> = ids.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        let mut parent: Vec<usize> = (0..ids.len()).collect();
        fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for c in d.crossings() {
            let a = find(&mut parent, index[&c.edges[1]]);
            let b = find(&mut parent, index[&c.edges[3]]);
            parent[a.max(b)] = a.min(b);
        }

        let mut arc_of_root: BTreeMap<usize, usize> = BTreeMap::new();
        let mut arc_colors: Vec<Color> = Vec::new();
        let mut arc_of_edge_index: Vec<usize> = vec![0; ids.len()];
        for i in 0..ids.len() {
            let r = find(&mut parent, i);
            let arc = *arc_of_root.entry(r).or_insert_with(|| {
                arc_colors.push(d.color(ids[r]));
                arc_colors.len() - 1
            });
            arc_of_edge_index[i] = arc;
        }

        let arc_of = |e: u32| arc_of_edge_index[index[&e]];
        let relations = d
            .crossings()
            .iter()
            .enumerate()
            .map(|(v, c)| {
                let e = d.sign(v);
                let over = arc_of(c.edges[1]);
                let a_in = arc_of(c.edges[0]);
                let a_out = arc_of(c.edges[2]);
                [(over, e), (a_in, 1), (over, -e), (a_out, -1)]
            })
            .collect();

        WirtingerPresentation {
            num_arcs: arc_colors.len(),
            arc_colors,
            relations,
            num_colors: d.num_colors(),
        }
    }

    /// Abelianized Fox-derivative matrix: one row per relator, one column
    /// per generator, entries in the Laurent ring with the generator of
    /// color `c` sent to `t_c`.
    pub fn alexander_matrix(&self) -> Vec<Vec<LaurentPoly>> {
        let nv = self.num_colors;
        self.relations
            .iter()
            .map(|word| {
                let mut row = vec![LaurentPoly::zero(nv); self.num_arcs];
                let mut prefix = vec![0i32; nv];
                for &(g, e) in word {
                    let var = self.arc_colors[g] - 1;
                    if e == 1 {
                        row[g] =
                            &row[g] + &LaurentPoly::monomial(nv, prefix.clone(), BigRational::one());
                        prefix[var] += 2;
                    } else {
                        prefix[var] -= 2;
                        row[g] =
                            &row[g] - &LaurentPoly::monomial(nv, prefix.clone(), BigRational::one());
                    }
                }
                row
            })
            .collect()
    }
}

/// First Alexander polynomial from the Wirtinger presentation, up to sign
/// and monomial factors. Exponent convention matches the rest of the crate:
/// the color-`c` variable `t_c` is the square of the internal variable.
///
/// Method: delete the column of one generator of color `c`, take all maximal
/// minors of the remaining matrix, check they agree up to units, and for
/// more than one color divide the minor by `t_c - 1`. The computation is
/// repeated with a second column choice when one exists and both answers
/// must agree.
pub fn alexander_via_fox(d: &ColoredDiagram) -> Result<LaurentPoly> {
    if !d.is_connected() {
        return Err(Error::Domain(
            "the Wirtinger oracle needs a connected diagram".into(),
        ));
    }
    let pres = WirtingerPresentation::new(d);
    let matrix = pres.alexander_matrix();
    let mut picks: Vec<usize> = Vec::new();
    if let Some(first) = (0..pres.num_arcs()).find(|&a| pres.arc_color(a) == 1) {
        picks.push(first);
    }
    if let Some(last) = (0..pres.num_arcs()).rev().find(|&a| !picks.contains(&a)) {
        picks.push(last);
    }
    if picks.is_empty() {
        return Err(Error::Inconsistency("presentation has no generators".into()));
    }
    let mut answers: Vec<LaurentPoly> = Vec::new();
    for &col in &picks {
        answers.push(alexander_with_column_deleted(&pres, &matrix, col)?);
    }
    for other in &answers[1..] {
        if !answers[0].equals_up_to_unit(other) {
            return Err(Error::Inconsistency(
                "Wirtinger minors disagree between deleted-column choices".into(),
            ));
        }
    }
    Ok(answers[0].with_positive_leading())
}

fn alexander_with_column_deleted(
    pres: &WirtingerPresentation,
    matrix: &[Vec<LaurentPoly>],
    col: usize,
) -> Result<LaurentPoly> {
    let nv = matrix
        .first()
        .map(|r| r[0].num_vars())
        .unwrap_or(pres.num_colors);
    let n = matrix.len();
    let m = pres.num_arcs();
    let kept: Vec<usize> = (0..m).filter(|&j| j != col).collect();
    // The polynomial is the greatest common content of the (m-1)-minors; a
    // presentation with fewer relations than that has only vanishing ones.
    if n + 1 < m {
        return Ok(LaurentPoly::zero(nv));
    }
    let minors: Vec<LaurentPoly> = if n + 1 == m {
        vec![bareiss_det(
            nv,
            matrix.iter().map(|r| kept.iter().map(|&j| r[j].clone()).collect()).collect(),
        )?]
    } else {
        (0..n)
            .map(|skip| {
                bareiss_det(
                    nv,
                    matrix
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, r)| kept.iter().map(|&j| r[j].clone()).collect())
                        .collect(),
                )
            })
            .collect::<Result<_>>()?
    };
    // All maximal minors of a Wirtinger matrix differ by unit factors only;
    // anything else means the construction is broken.
    for w in minors.windows(2) {
        if !w[0].equals_up_to_unit(&w[1]) {
            return Err(Error::Inconsistency(
                "maximal Wirtinger minors are not unit multiples of each other".into(),
            ));
        }
    }
    let minor = minors.into_iter().next().expect("at least one minor");
    if pres.num_colors == 1 || minor.is_zero() {
        return Ok(minor);
    }
    let c = pres.arc_color(col);
    let tc_minus_1 = &LaurentPoly::t_half_pow(pres.num_colors, c - 1, 2)
        - &LaurentPoly::one(pres.num_colors);
    minor.exact_div(&tc_minus_1).map_err(|_| {
        Error::Inconsistency(
            "Wirtinger minor is not divisible by (t_c - 1) for the deleted color".into(),
        )
    })
}
