use std::collections::{HashMap, VecDeque};
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use crate::error::{Error, Result};
use crate::geometry::{dist, DiskPoint, Isometry};

/// Residual above which a vertex-cycle relator is rejected.
pub const RELATOR_TOLERANCE: f64 = 1e-8;
/// Default cap on visited elements for [`FuchsianGroup::orbit_ball`].
pub const DEFAULT_ORBIT_BUDGET: usize = 200_000;
/// Default cap on greedy steps for [`FuchsianGroup::reduce_to_domain`].
pub const DEFAULT_REDUCTION_BUDGET: usize = 10_000;

const DEDUP_TOLERANCE: f64 = 1e-9;
const HASH_CELL: f64 = 1e-7;

/// A word in the generators, read as the product `g[w[0]] g[w[1]] ... g[w[k-1]]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A discrete group of disk isometries given by a symmetric generating set.
#[derive(Clone, Debug)]
pub struct FuchsianGroup {
    generators: Vec<Isometry>,
    inverse_of: Vec<usize>,
    vertex_cycle: Word,
    translation_length: f64,
    cocompact: bool,
}

/// The Dirichlet fundamental domain centered at the origin.
#[derive(Clone, Debug)]
pub struct FundamentalDomain {
    center: DiskPoint,
    /// Hyperbolic distance from the center to each vertex (infinite for non-compact domains).
    vertex_radius: f64,
    inradius: f64,
    vertices: Vec<DiskPoint>,
}

impl FundamentalDomain {
    pub fn center(&self) -> DiskPoint {
        self.center
    }

    pub fn vertex_radius(&self) -> f64 {
        self.vertex_radius
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn vertices(&self) -> &[DiskPoint] {
        &self.vertices
    }

    pub fn side_count(&self) -> usize {
        self.vertices.len()
    }

    /// Opposite vertices lie on a common diameter, so the diameter is twice the vertex radius.
    pub fn diameter(&self) -> f64 {
        2.0 * self.vertex_radius
    }

    pub fn is_compact(&self) -> bool {
        self.vertex_radius.is_finite()
    }
}

impl FuchsianGroup {
    /// Generators `g_0..g_{k-1}`; the set is closed under inverses.
    pub fn generators(&self) -> &[Isometry] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Isometry {
        &self.generators[i]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse_of[i]
    }

    pub fn vertex_cycle(&self) -> &Word {
        &self.vertex_cycle
    }

    pub fn translation_length(&self) -> f64 {
        self.translation_length
    }

    /// False for test fixtures whose quotient is not a closed surface.
    pub fn satisfies_hypotheses(&self) -> bool {
        self.cocompact
    }

    pub fn element(&self, word: &Word) -> Isometry {
        word.0
            .iter()
            .fold(Isometry::IDENTITY, |acc, &i| acc.compose(&self.generators[i]))
    }

    pub fn inverse_word(&self, word: &Word) -> Word {
        Word(word.0.iter().rev().map(|&i| self.inverse_of[i]).collect())
    }

    /// `‖Π vertex_cycle − Id‖` in PSU(1,1).
    pub fn relator_residual(&self) -> f64 {
        self.element(&self.vertex_cycle).identity_residual()
    }

    /// All orbit points `g·p` with `d(g·p, p) <= radius`, deduplicated.
    pub fn orbit_ball(&self, p: &DiskPoint, radius: f64) -> Result<Vec<(DiskPoint, Word)>> {
        self.orbit_ball_with_budget(p, radius, DEFAULT_ORBIT_BUDGET)
    }

    /// Breadth-first enumeration over word length, expanding only tiles `h·D` with
    /// `d(h·center, p) <= radius + vertex_radius + d(p, center)`. Every tile met by a
    /// geodesic from the center to `p` and on to an orbit point inside the ball passes
    /// this test, and consecutive such tiles share a side.
    pub fn orbit_ball_with_budget(
        &self,
        p: &DiskPoint,
        radius: f64,
        budget: usize,
    ) -> Result<Vec<(DiskPoint, Word)>> {
        if !(radius >= 0.0) {
            return Err(Error::InvalidArgument(format!("orbit radius {radius} < 0")));
        }
        let prune = radius + self.prune_slack() + p.radius() + 1e-9;
        let mut seen = ElementSet::default();
        let mut queue = VecDeque::new();
        seen.insert(&Isometry::IDENTITY);
        queue.push_back((Isometry::IDENTITY, Word::identity()));
        let mut found: Vec<(DiskPoint, Word)> = Vec::new();
        let mut found_hash = ElementSet::default();
        while let Some((h, word)) = queue.pop_front() {
            let hp = match h.apply(p) {
                Ok(q) => q,
                Err(_) => continue,
            };
            let d = dist(&hp, p);
            if d <= radius && found_hash.insert_point(&hp) {
                found.push((hp, word.clone()));
            }
            let reach = if self.cocompact {
                h.apply(&DiskPoint::ORIGIN).map_or(f64::INFINITY, |c| dist(&c, p))
            } else {
                d
            };
            if reach > prune {
                continue;
            }
            for (i, g) in self.generators.iter().enumerate() {
                let next = h.compose(g);
                if seen.insert(&next) {
                    if seen.len() > budget {
                        return Err(Error::OrbitBudgetExceeded { budget });
                    }
                    let mut w = word.0.clone();
                    w.push(i);
                    queue.push_back((next, Word(w)));
                }
            }
        }
        Ok(found)
    }

    /// Greedy descent toward the center. Returns `(w·p, w)` where `w·p` satisfies the
    /// Dirichlet inequalities against every generator.
    pub fn reduce_to_domain(&self, p: &DiskPoint) -> Result<(DiskPoint, Word)> {
        self.reduce_to_domain_with_budget(p, DEFAULT_REDUCTION_BUDGET)
    }

    pub fn reduce_to_domain_with_budget(
        &self,
        p: &DiskPoint,
        budget: usize,
    ) -> Result<(DiskPoint, Word)> {
        self.reduce_with_element(p, budget)
            .map(|(q, _, word)| (q, word))
    }

    pub(crate) fn reduce_with_element(
        &self,
        p: &DiskPoint,
        budget: usize,
    ) -> Result<(DiskPoint, Isometry, Word)> {
        let mut current = *p;
        let mut element = Isometry::IDENTITY;
        let mut applied: Vec<usize> = Vec::new();
        for _ in 0..budget {
            let here = current.radius();
            let mut best: Option<(usize, DiskPoint, f64)> = None;
            for (i, g) in self.generators.iter().enumerate() {
                if let Ok(q) = g.apply(&current) {
                    let r = q.radius();
                    if r < here - 1e-12 && best.is_none_or(|(_, _, b)| r < b) {
                        best = Some((i, q, r));
                    }
                }
            }
            match best {
                Some((i, q, _)) => {
                    current = q;
                    element = self.generators[i].compose(&element);
                    applied.push(i);
                }
                None => {
                    applied.reverse();
                    return Ok((current, element, Word(applied)));
                }
            }
        }
        Err(Error::ReductionBudget { budget })
    }

    /// Dirichlet test `d(p, c) <= d(p, g·c) + tol` for every generator.
    pub fn satisfies_dirichlet(&self, p: &DiskPoint, tol: f64) -> bool {
        let r = p.radius();
        self.generators.iter().all(|g| {
            g.apply(&DiskPoint::ORIGIN)
                .map(|gc| r <= dist(p, &gc) + tol)
                .unwrap_or(true)
        })
    }

    fn prune_slack(&self) -> f64 {
        // The cyclic fixture's strip is unbounded; its orbit moves monotonically along
        // one axis, so one translation length of slack suffices there.
        if self.cocompact {
            octagon_metrics().0
        } else {
            self.translation_length
        }
    }
}

/// `(vertex_radius, inradius)` of the regular octagon with interior angle pi/4.
fn octagon_metrics() -> (f64, f64) {
    let cot = 1.0 / FRAC_PI_8.tan();
    // right triangle (center, side midpoint, vertex) with angles pi/8, pi/8
    let vertex_radius = (cot * cot).acosh();
    let inradius = cot.acosh();
    (vertex_radius, inradius)
}

/// The genus-2 surface group: opposite-side pairings of the regular octagon with
/// interior angles pi/4, centered at the origin.
///
/// `g_k` translates along the axis at angle `k pi/4` by twice the inradius, mapping side
/// `k + 4` onto side `k`; `g_{k+4} = g_k^{-1}`.
pub fn build_octagon_group() -> Result<(FuchsianGroup, FundamentalDomain)> {
    let (vertex_radius, inradius) = octagon_metrics();
    let translation_length = 2.0 * inradius;
    let generators: Vec<Isometry> = (0..8)
        .map(|k| Isometry::translation_along(k as f64 * FRAC_PI_4, translation_length))
        .collect();
    let inverse_of: Vec<usize> = (0..8).map(|k| (k + 4) % 8).collect();
    let vertices: Vec<DiskPoint> = (0..8)
        .map(|j| DiskPoint::from_polar(vertex_radius, FRAC_PI_8 + j as f64 * FRAC_PI_4))
        .collect::<Result<_>>()?;
    let vertex_cycle = vertex_cycle_word(&generators, &vertices)?;
    let group = FuchsianGroup {
        generators,
        inverse_of,
        vertex_cycle,
        translation_length,
        cocompact: true,
    };
    let residual = group.relator_residual();
    if residual > RELATOR_TOLERANCE {
        return Err(Error::RelatorResidual { residual });
    }
    let domain = FundamentalDomain {
        center: DiskPoint::ORIGIN,
        vertex_radius,
        inradius,
        vertices,
    };
    Ok((group, domain))
}

/// Walk once around a vertex of the tiling, crossing one side at a time.
///
/// Vertex `j` sits between sides `j` and `j + 1`. Crossing side `s` of tile `hF` enters
/// `h g_s F`, where the vertex is the image of `g_s^{-1} v_j`, a vertex on side `s + 4`.
fn vertex_cycle_word(generators: &[Isometry], vertices: &[DiskPoint]) -> Result<Word> {
    let n = vertices.len();
    let sides_of = |j: usize| [j, (j + 1) % n];
    let start = 0usize;
    let mut vertex = start;
    let mut exit = sides_of(start)[1];
    let mut word = Vec::new();
    for _ in 0..4 * n {
        word.push(exit);
        let pulled = generators[(exit + n / 2) % n].apply(&vertices[vertex])?;
        let (next, _) = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (i, dist(v, &pulled)))
            .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        let entered = (exit + n / 2) % n;
        let [s0, s1] = sides_of(next);
        exit = if s0 == entered { s1 } else { s0 };
        vertex = next;
        if vertex == start && exit == sides_of(start)[1] {
            return Ok(Word(word));
        }
    }
    Err(Error::RelatorResidual {
        residual: f64::INFINITY,
    })
}

/// Test fixture: the cyclic group of one hyperbolic translation along the real axis.
/// Its quotient is a non-compact annulus, so the surface hypotheses do not hold.
pub fn cyclic_test_group(translation_length: f64) -> (FuchsianGroup, FundamentalDomain) {
    let g = Isometry::translation_along(0.0, translation_length);
    let group = FuchsianGroup {
        generators: vec![g, g.inverse()],
        inverse_of: vec![1, 0],
        vertex_cycle: Word(vec![0, 1]),
        translation_length,
        cocompact: false,
    };
    let domain = FundamentalDomain {
        center: DiskPoint::ORIGIN,
        vertex_radius: f64::INFINITY,
        inradius: 0.5 * translation_length,
        vertices: Vec::new(),
    };
    (group, domain)
}

/// Hash of group elements by the image of the origin, with a hyperbolic-distance check
/// inside neighboring cells.
#[derive(Default)]
struct ElementSet {
    cells: HashMap<(i64, i64), Vec<DiskPoint>>,
    count: usize,
}

impl ElementSet {
    fn insert(&mut self, g: &Isometry) -> bool {
        match g.apply(&DiskPoint::ORIGIN) {
            Ok(p) => self.insert_point(&p),
            Err(_) => false,
        }
    }

    fn insert_point(&mut self, p: &DiskPoint) -> bool {
        let key = (
            (p.x() / HASH_CELL).floor() as i64,
            (p.y() / HASH_CELL).floor() as i64,
        );
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(bucket) = self.cells.get(&(key.0 + dx, key.1 + dy)) {
                    if bucket.iter().any(|q| dist(p, q) < DEDUP_TOLERANCE) {
                        return false;
                    }
                }
            }
        }
        self.cells.entry(key).or_default().push(*p);
        self.count += 1;
        true
    }

    fn len(&self) -> usize {
        self.count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn octagon_builds_and_relator_closes() {
        let (g, d) = build_octagon_group().unwrap();
        assert_eq!(g.generators().len(), 8);
        assert_eq!(g.vertex_cycle().len(), 8);
        assert!(g.relator_residual() < RELATOR_TOLERANCE);
        assert_eq!(d.side_count(), 8);
        for gen in g.generators() {
            assert!(gen.trace().abs() > 2.0);
        }
    }

    #[test]
    fn generator_inverses() {
        let (g, _) = build_octagon_group().unwrap();
        for i in 0..8 {
            let r = g.generator(i).compose(g.generator(g.inverse_index(i)));
            assert!(r.identity_residual() < 1e-12);
        }
    }

    #[test]
    fn generators_pair_opposite_sides() {
        let (g, d) = build_octagon_group().unwrap();
        let v = d.vertices();
        // g_0 maps side 4 (vertices 3, 4) onto side 0 (vertices 7, 0)
        let a = g.generator(0).apply(&v[3]).unwrap();
        let b = g.generator(0).apply(&v[4]).unwrap();
        let near = |p: &DiskPoint| v.iter().map(|q| dist(p, q)).fold(f64::INFINITY, f64::min);
        assert!(near(&a) < 1e-10 && near(&b) < 1e-10);
    }

    #[test]
    fn zero_radius_ball_is_the_point() {
        let (g, _) = build_octagon_group().unwrap();
        let p = DiskPoint::new(0.1, 0.05).unwrap();
        let ball = g.orbit_ball(&p, 0.0).unwrap();
        assert_eq!(ball.len(), 1);
        assert!(ball[0].1.is_identity());
    }

    #[test]
    fn reduction_of_interior_point_is_identity() {
        let (g, _) = build_octagon_group().unwrap();
        let p = DiskPoint::new(0.2, -0.1).unwrap();
        let (q, w) = g.reduce_to_domain(&p).unwrap();
        assert_eq!(q, p);
        assert!(w.is_identity());
    }

    #[test]
    fn reduction_undoes_one_generator() {
        let (g, _) = build_octagon_group().unwrap();
        let q = DiskPoint::new(0.15, 0.1).unwrap();
        let p = g.generator(0).apply(&q).unwrap();
        let (r, w) = g.reduce_to_domain(&p).unwrap();
        assert_eq!(w, Word(vec![4]));
        assert!(dist(&r, &q) < 1e-12);
    }

    #[test]
    fn budget_errors() {
        let (g, _) = build_octagon_group().unwrap();
        assert!(matches!(
            g.orbit_ball_with_budget(&DiskPoint::ORIGIN, 8.0, 50),
            Err(Error::OrbitBudgetExceeded { budget: 50 })
        ));
        let far = DiskPoint::from_polar(12.0, 0.3).unwrap();
        assert!(matches!(
            g.reduce_to_domain_with_budget(&far, 1),
            Err(Error::ReductionBudget { budget: 1 })
        ));
    }

    #[test]
    fn cyclic_fixture_is_flagged() {
        let (g, d) = cyclic_test_group(1.5);
        assert!(!g.satisfies_hypotheses());
        assert!(!d.is_compact());
        assert!(g.relator_residual() < 1e-12);
        let p = DiskPoint::from_polar(4.0, 0.0).unwrap();
        let (q, _) = g.reduce_to_domain(&p).unwrap();
        assert!(q.radius() <= 0.75 + 1e-9);
    }
}
