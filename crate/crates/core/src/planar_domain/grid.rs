//! Grid (polyomino) domains and the path-diameter metric on them.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::Point;
use crate::circular_order::{Arc, ArcFamily, Member, OrderError};
use crate::number::ratio;

/// `(row, col)`; row 0 is the top row.
pub type Cell = (usize, usize);

/// Largest domain accepted by [`GridDomain::min_diameter_exact`].
pub const EXACT_CELL_LIMIT: usize = 18;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GridError {
    #[error("cell {0:?} is not an occupied cell of the domain")]
    CellOutsideDomain(Cell),
    #[error("exact diameter needs at most {EXACT_CELL_LIMIT} cells, domain has {0}")]
    TooLarge(usize),
    #[error("domain has no occupied cells")]
    Empty,
    #[error("occupied cells are not edge-connected")]
    NotConnected,
    #[error("complement is not connected (domain has holes)")]
    NotSimplyConnected,
    #[error("invalid grid: {0}")]
    Format(String),
}

/// `{"cell_size": s, "rows": ["..##..", ...], "origin": [x, y]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridJson {
    pub cell_size: f64,
    pub rows: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origin: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridDomain {
    cell_size: f64,
    /// Lower-left corner of the bounding box.
    origin: Point,
    nrows: usize,
    ncols: usize,
    mask: Vec<bool>,
}

impl GridDomain {
    pub fn new(cell_size: f64, origin: Point, mask: Vec<Vec<bool>>) -> Result<Self, GridError> {
        if !(cell_size > 0.0 && cell_size.is_finite()) {
            return Err(GridError::Format(format!("cell size {cell_size}")));
        }
        let nrows = mask.len();
        let ncols = mask.first().map_or(0, Vec::len);
        if mask.iter().any(|r| r.len() != ncols) {
            return Err(GridError::Format("rows have different lengths".into()));
        }
        let g = GridDomain { cell_size, origin, nrows, ncols, mask: mask.into_iter().flatten().collect() };
        g.check()?;
        Ok(g)
    }

    pub fn from_rows(cell_size: f64, rows: &[&str]) -> Result<Self, GridError> {
        Self::from_json(&GridJson { cell_size, rows: rows.iter().map(|s| s.to_string()).collect(), origin: None })
    }

    pub fn from_json(j: &GridJson) -> Result<Self, GridError> {
        let mut mask = Vec::with_capacity(j.rows.len());
        for row in &j.rows {
            let mut r = Vec::with_capacity(row.len());
            for ch in row.chars() {
                match ch {
                    '#' => r.push(true),
                    '.' => r.push(false),
                    other => return Err(GridError::Format(format!("unexpected character {other:?}"))),
                }
            }
            mask.push(r);
        }
        let origin = j.origin.map_or(Point::new(0.0, 0.0), |o| Point::new(o[0], o[1]));
        Self::new(j.cell_size, origin, mask)
    }

    pub fn to_json(&self) -> GridJson {
        let rows = (0..self.nrows)
            .map(|r| (0..self.ncols).map(|c| if self.occupied((r, c)) { '#' } else { '.' }).collect())
            .collect();
        let origin = (self.origin != Point::new(0.0, 0.0)).then_some([self.origin.x, self.origin.y]);
        GridJson { cell_size: self.cell_size, rows, origin }
    }

    fn check(&self) -> Result<(), GridError> {
        let cells = self.cells();
        let Some(&first) = cells.first() else {
            return Err(GridError::Empty);
        };
        if self.component_of(first, |c| self.occupied(c)).len() != cells.len() {
            return Err(GridError::NotConnected);
        }
        // complement inside a one-cell frame around the bounding box
        let (h, w) = (self.nrows + 2, self.ncols + 2);
        let free = |r: usize, c: usize| r == 0 || c == 0 || r == h - 1 || c == w - 1 || !self.occupied((r - 1, c - 1));
        let total = (0..h).flat_map(|r| (0..w).map(move |c| (r, c))).filter(|&(r, c)| free(r, c)).count();
        let mut seen = vec![false; h * w];
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        seen[0] = true;
        let mut count = 0;
        while let Some((r, c)) = queue.pop_front() {
            count += 1;
            let nbrs = [(r.wrapping_sub(1), c), (r + 1, c), (r, c.wrapping_sub(1)), (r, c + 1)];
            for (nr, nc) in nbrs {
                if nr < h && nc < w && !seen[nr * w + nc] && free(nr, nc) {
                    seen[nr * w + nc] = true;
                    queue.push_back((nr, nc));
                }
            }
        }
        if count != total {
            return Err(GridError::NotSimplyConnected);
        }
        Ok(())
    }

    pub fn cell_size(&self) -> f64 {
        self.cell_size
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn occupied(&self, (r, c): Cell) -> bool {
        r < self.nrows && c < self.ncols && self.mask[r * self.ncols + c]
    }

    pub fn index(&self, (r, c): Cell) -> usize {
        r * self.ncols + c
    }

    pub fn cell_at(&self, index: usize) -> Cell {
        (index / self.ncols, index % self.ncols)
    }

    /// Occupied cells in row-major order.
    pub fn cells(&self) -> Vec<Cell> {
        (0..self.mask.len()).filter(|&i| self.mask[i]).map(|i| self.cell_at(i)).collect()
    }

    pub fn cell_count(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn center(&self, (r, c): Cell) -> Point {
        Point::new(
            self.origin.x + (c as f64 + 0.5) * self.cell_size,
            self.origin.y + ((self.nrows - 1 - r) as f64 + 0.5) * self.cell_size,
        )
    }

    pub fn dist(&self, a: Cell, b: Cell) -> f64 {
        self.center(a).dist(self.center(b))
    }

    pub fn neighbors(&self, (r, c): Cell) -> impl Iterator<Item = Cell> + '_ {
        [(r.wrapping_sub(1), c), (r + 1, c), (r, c.wrapping_sub(1)), (r, c + 1)]
            .into_iter()
            .filter(move |&n| self.occupied(n))
    }

    /// Occupied cells 4-connected to `start` through cells accepted by `keep`.
    pub fn component_of(&self, start: Cell, keep: impl Fn(Cell) -> bool) -> Vec<Cell> {
        let mut seen = vec![false; self.mask.len()];
        let mut out = Vec::new();
        if !self.occupied(start) || !keep(start) {
            return out;
        }
        let mut queue = VecDeque::from([start]);
        seen[self.index(start)] = true;
        while let Some(cell) = queue.pop_front() {
            out.push(cell);
            for n in self.neighbors(cell) {
                if !seen[self.index(n)] && keep(n) {
                    seen[self.index(n)] = true;
                    queue.push_back(n);
                }
            }
        }
        out
    }

    fn require(&self, c: Cell) -> Result<(), GridError> {
        if self.occupied(c) {
            Ok(())
        } else {
            Err(GridError::CellOutsideDomain(c))
        }
    }

    /// Least `eps` such that `x` and `y` lie in one component of the occupied
    /// cells within `eps` of both.
    pub fn lens_distance(&self, x: Cell, y: Cell) -> Result<f64, GridError> {
        self.require(x)?;
        self.require(y)?;
        if x == y {
            return Ok(0.0);
        }
        let mut order: Vec<(f64, usize)> = self
            .cells()
            .into_iter()
            .map(|c| (self.dist(c, x).max(self.dist(c, y)), self.index(c)))
            .collect();
        order.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let mut parent: Vec<usize> = (0..self.mask.len()).collect();
        let mut active = vec![false; self.mask.len()];
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        let (xi, yi) = (self.index(x), self.index(y));
        for (eps, i) in order {
            active[i] = true;
            for n in self.neighbors(self.cell_at(i)) {
                let ni = self.index(n);
                if active[ni] {
                    let (a, b) = (find(&mut parent, i), find(&mut parent, ni));
                    parent[a.max(b)] = a.min(b);
                }
            }
            if active[xi] && active[yi] && find(&mut parent, xi) == find(&mut parent, yi) {
                return Ok(eps);
            }
        }
        unreachable!("occupied cells are connected")
    }

    /// Whether `lens_distance(x, y) <= eps`, searching only near `x`.
    pub fn lens_within(&self, x: Cell, y: Cell, eps: f64) -> bool {
        let tol = eps + 1e-9 * self.cell_size;
        if self.dist(x, y) > tol {
            return false;
        }
        let reach = (eps / self.cell_size).ceil() as usize + 1;
        let keep = |c: Cell| {
            c.0 + reach >= x.0 && c.0 <= x.0 + reach && c.1 + reach >= x.1 && c.1 <= x.1 + reach
                && self.dist(c, x) <= tol
                && self.dist(c, y) <= tol
        };
        let mut seen = BTreeMap::new();
        let mut queue = VecDeque::from([x]);
        seen.insert(x, ());
        while let Some(c) = queue.pop_front() {
            if c == y {
                return true;
            }
            for n in self.neighbors(c) {
                if keep(n) && seen.insert(n, ()).is_none() {
                    queue.push_back(n);
                }
            }
        }
        false
    }

    /// Minimum diameter of a connected set of cells containing `x` and `y`,
    /// by exhaustive search.
    pub fn min_diameter_exact(&self, x: Cell, y: Cell) -> Result<f64, GridError> {
        self.require(x)?;
        self.require(y)?;
        let cells = self.cells();
        if cells.len() > EXACT_CELL_LIMIT {
            return Err(GridError::TooLarge(cells.len()));
        }
        if x == y {
            return Ok(0.0);
        }
        let n = cells.len();
        let pos = |c: Cell| cells.iter().position(|&d| d == c).expect("occupied");
        let nbr: Vec<u32> = cells
            .iter()
            .map(|&c| self.neighbors(c).fold(0u32, |m, d| m | 1 << pos(d)))
            .collect();
        let dist: Vec<Vec<f64>> = cells.iter().map(|&a| cells.iter().map(|&b| self.dist(a, b)).collect()).collect();
        struct Search<'a> {
            n: usize,
            nbr: &'a [u32],
            dist: &'a [Vec<f64>],
            target: usize,
            best: f64,
        }
        impl Search<'_> {
            fn grow(&mut self, set: u32, frontier: u32, banned: u32, diam: f64) {
                if diam >= self.best {
                    return;
                }
                if set & (1 << self.target) != 0 {
                    self.best = diam;
                    return;
                }
                if frontier == 0 {
                    return;
                }
                let v = frontier.trailing_zeros() as usize;
                let bit = 1u32 << v;
                let mut d = diam;
                for u in 0..self.n {
                    if set & (1 << u) != 0 {
                        d = d.max(self.dist[u][v]);
                    }
                }
                let new_frontier = (frontier | self.nbr[v]) & !(set | bit) & !banned;
                self.grow(set | bit, new_frontier, banned, d);
                self.grow(set, frontier & !bit, banned | bit, diam);
            }
        }
        let (xi, yi) = (pos(x), pos(y));
        let mut s = Search { n, nbr: &nbr, dist: &dist, target: yi, best: f64::INFINITY };
        s.grow(1 << xi, nbr[xi], 0, 0.0);
        Ok(s.best)
    }

    /// Counterclockwise walk of the unit boundary edges, interior on the left.
    pub fn boundary_walk(&self) -> GridWalk {
        // lattice vertex (X, Y) with Y counted upward from the bottom row
        let h = self.nrows as i64;
        let mut out: BTreeMap<(i64, i64), Vec<(Dir, Cell)>> = BTreeMap::new();
        let mut total = 0;
        for cell @ (r, c) in self.cells() {
            let (x, y) = (c as i64, h - 1 - r as i64);
            let empty = |dr: i64, dc: i64| {
                let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                nr < 0 || nc < 0 || !self.occupied((nr as usize, nc as usize))
            };
            let mut add = |v: (i64, i64), d: Dir| {
                out.entry(v).or_default().push((d, cell));
                total += 1;
            };
            if empty(1, 0) {
                add((x, y), Dir::E);
            }
            if empty(0, 1) {
                add((x + 1, y), Dir::N);
            }
            if empty(-1, 0) {
                add((x + 1, y + 1), Dir::W);
            }
            if empty(0, -1) {
                add((x, y + 1), Dir::S);
            }
        }
        // bottom-most row, left-most cell, its bottom edge
        let start_cell = self.cells().into_iter().max_by_key(|&(r, c)| (r, std::cmp::Reverse(c))).expect("nonempty");
        let mut v = (start_cell.1 as i64, h - 1 - start_cell.0 as i64);
        let mut d = Dir::E;
        let mut steps = Vec::with_capacity(total);
        loop {
            let cell = out[&v].iter().find(|e| e.0 == d).expect("boundary edge").1;
            steps.push(GridStep { cell, dir: d, start: v });
            v = d.advance(v);
            let options = &out[&v];
            d = [d.left(), d, d.right()]
                .into_iter()
                .find(|nd| options.iter().any(|e| e.0 == *nd))
                .expect("boundary is closed");
            if v == steps[0].start && d == Dir::E || steps.len() > total {
                break;
            }
        }
        debug_assert_eq!(steps.len(), total, "simply connected polyomino has one boundary cycle");
        GridWalk { steps }
    }

    /// Clusters of boundary cells at resolution `scale`, one arc of the walk
    /// circle per cluster.
    ///
    /// A boundary cell is pinched when some boundary cell within lens
    /// distance `scale` of it (itself included) lies far away along the walk:
    /// more than `3 * scale + 2 * cell_size`. Pinched cells are grouped by
    /// single linkage under lens distance `scale`; each group spans the
    /// shortest walk arc covering its edges, and groups whose arcs overlap
    /// are merged. The remaining walk runs are spine clusters.
    pub fn boundary_clusters(&self, scale: f64) -> Result<ClusterReport, OrderError> {
        let walk = self.boundary_walk();
        let len = walk.len();
        let mut positions: BTreeMap<Cell, Vec<usize>> = BTreeMap::new();
        for (i, s) in walk.steps.iter().enumerate() {
            positions.entry(s.cell).or_default().push(i);
        }
        let boundary: Vec<Cell> = positions.keys().copied().collect();
        let reach = (scale / self.cell_size).floor() as i64;
        let nearby = |c: Cell| {
            let mut v = Vec::new();
            for dr in -reach..=reach {
                for dc in -reach..=reach {
                    let (r, k) = (c.0 as i64 + dr, c.1 as i64 + dc);
                    if r >= 0 && k >= 0 && positions.contains_key(&(r as usize, k as usize)) {
                        v.push((r as usize, k as usize));
                    }
                }
            }
            v
        };
        let gap = 3.0 * scale + 2.0 * self.cell_size;
        let separation = |a: Cell, b: Cell| {
            let mut best = 0;
            for &i in &positions[&a] {
                for &j in &positions[&b] {
                    let d = i.abs_diff(j);
                    best = best.max(d.min(len - d));
                }
            }
            best as f64 * self.cell_size
        };
        let pinched: Vec<Cell> = boundary
            .iter()
            .copied()
            .filter(|&c| nearby(c).into_iter().any(|o| separation(c, o) > gap && self.lens_within(c, o, scale)))
            .collect();
        let pinched_index: BTreeMap<Cell, usize> = pinched.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut uf = UnionFind::new(pinched.len());
        for (i, &c) in pinched.iter().enumerate() {
            for o in nearby(c) {
                if let Some(&j) = pinched_index.get(&o) {
                    if j > i && self.lens_within(c, o, scale) {
                        uf.union(i, j);
                    }
                }
            }
        }
        // edge owner: pinched group root, then merge groups with overlapping hulls
        let group_of_step: Vec<Option<usize>> =
            walk.steps.iter().map(|s| pinched_index.get(&s.cell).map(|&i| uf.find(i))).collect();
        let mut hull_owner: Vec<Option<usize>>;
        loop {
            let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for (i, g) in group_of_step.iter().enumerate() {
                if let Some(g) = g {
                    members.entry(uf.find(*g)).or_default().push(i);
                }
            }
            hull_owner = vec![None; len];
            let mut merged = false;
            for (&g, steps) in &members {
                for i in cyclic_hull(steps, len) {
                    match hull_owner[i] {
                        Some(o) if o != g => {
                            uf.union(o, g);
                            merged = true;
                        }
                        _ => hull_owner[i] = Some(g),
                    }
                }
            }
            if !merged {
                break;
            }
        }
        // assemble runs of equal owner, free runs become spine clusters
        let mut runs: Vec<(usize, usize, Option<usize>)> = Vec::new();
        let offset = (0..len).find(|&i| hull_owner[i] != hull_owner[(i + len - 1) % len]);
        match offset {
            None => runs.push((0, len, hull_owner[0])),
            Some(o) => {
                let mut s = o;
                for k in 1..=len {
                    let i = (o + k) % len;
                    if k == len || hull_owner[i] != hull_owner[s] {
                        runs.push((s, o + k, hull_owner[s]));
                        s = i;
                    }
                }
            }
        }
        let mut clusters = Vec::new();
        let mut arcs = Vec::new();
        for &(s, e, owner) in &runs {
            let mut cells: Vec<Cell> = (s..e).map(|i| walk.steps[i % len].cell).collect();
            cells.sort();
            cells.dedup();
            let arc = if e - s == len {
                Arc::interval(ratio(s as i64, len as i64), ratio(s as i64, len as i64))
            } else {
                Arc::interval(ratio(s as i64, len as i64), ratio(e as i64, len as i64))
            };
            clusters.push(CellCluster {
                label: String::new(),
                kind: if owner.is_some() { ClusterKind::Pinched } else { ClusterKind::Spine },
                walk_start: s % len,
                walk_end: e % len,
                cells,
            });
            arcs.push(arc);
        }
        // label in counterclockwise order of arc start
        let mut order: Vec<usize> = (0..clusters.len()).collect();
        order.sort_by_key(|&i| clusters[i].walk_start);
        let mut members = Vec::new();
        let mut sorted = Vec::new();
        for (k, &i) in order.iter().enumerate() {
            let mut c = clusters[i].clone();
            c.label = format!("c{k}");
            members.push(Member { label: c.label.clone(), arc: arcs[i].clone() });
            sorted.push(c);
        }
        Ok(ClusterReport { scale, walk_length: len, family: ArcFamily::new(members)?, clusters: sorted })
    }
}

/// Walk positions of the shortest cyclic arc covering `steps` (sorted).
fn cyclic_hull(steps: &[usize], len: usize) -> Vec<usize> {
    let k = steps.len();
    let mut best = (0, 0);
    for i in 0..k {
        let next = if i + 1 < k { steps[i + 1] } else { steps[0] + len };
        let g = next - steps[i];
        if g > best.0 {
            best = (g, (i + 1) % k);
        }
    }
    let start = steps[best.1];
    let span = len - best.0 + 1;
    (0..span.min(len)).map(|d| (start + d) % len).collect()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    /// The smaller root survives, so cluster ids follow cell order.
    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        self.0[a.max(b)] = a.min(b);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Dir {
    E,
    N,
    W,
    S,
}

impl Dir {
    fn left(self) -> Dir {
        match self {
            Dir::E => Dir::N,
            Dir::N => Dir::W,
            Dir::W => Dir::S,
            Dir::S => Dir::E,
        }
    }

    fn right(self) -> Dir {
        self.left().left().left()
    }

    fn advance(self, (x, y): (i64, i64)) -> (i64, i64) {
        match self {
            Dir::E => (x + 1, y),
            Dir::N => (x, y + 1),
            Dir::W => (x - 1, y),
            Dir::S => (x, y - 1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridStep {
    /// The occupied cell on the left of the edge.
    pub cell: Cell,
    pub dir: Dir,
    /// Lattice vertex where the edge starts, `y` counted up from the bottom row.
    pub start: (i64, i64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridWalk {
    pub steps: Vec<GridStep>,
}

impl GridWalk {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClusterKind {
    Pinched,
    Spine,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCluster {
    pub label: String,
    pub kind: ClusterKind,
    /// Walk edges `walk_start .. walk_end` (cyclic) belong to the cluster.
    pub walk_start: usize,
    pub walk_end: usize,
    pub cells: Vec<Cell>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterReport {
    pub scale: f64,
    pub walk_length: usize,
    pub family: ArcFamily,
    pub clusters: Vec<CellCluster>,
}

impl ClusterReport {
    pub fn cluster_of(&self, cell: Cell) -> Option<&CellCluster> {
        self.clusters.iter().find(|c| c.cells.binary_search(&cell).is_ok())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn u_shape() -> GridDomain {
        // two prongs of height 3 joined by a base row, 12 cells
        GridDomain::from_rows(1.0, &["#..#", "#..#", "#..#", "####"]).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let g = u_shape();
        let back = GridDomain::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn rejects_holes_and_disconnection() {
        assert_eq!(GridDomain::from_rows(1.0, &["###", "#.#", "###"]), Err(GridError::NotSimplyConnected));
        assert_eq!(GridDomain::from_rows(1.0, &["#.#"]), Err(GridError::NotConnected));
        assert_eq!(GridDomain::from_rows(1.0, &["..."]), Err(GridError::Empty));
        assert!(matches!(GridDomain::from_rows(1.0, &["#x"]), Err(GridError::Format(_))));
    }

    #[test]
    fn convex_lens_is_euclidean() {
        let g = fixtures::square_grid(10);
        for &(a, b) in &[((0, 0), (9, 9)), ((3, 1), (7, 8)), ((0, 9), (9, 0))] {
            let lens = g.lens_distance(a, b).unwrap();
            assert!((lens - g.dist(a, b)).abs() < 1e-12);
        }
        assert_eq!(g.lens_distance((2, 2), (2, 2)).unwrap(), 0.0);
    }

    #[test]
    fn u_shape_prong_tips() {
        let g = u_shape();
        let (x, y) = ((0, 0), (0, 3));
        let lens = g.lens_distance(x, y).unwrap();
        let exact = g.min_diameter_exact(x, y).unwrap();
        assert!(lens >= g.dist(x, y));
        assert!(lens <= exact + 1e-12 && exact <= 2.0 * lens + 1e-12);
        // the only connecting set is the whole U
        assert!((exact - (9.0f64 + 9.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn forced_paths() {
        let strip = GridDomain::from_rows(0.5, &["#####"]).unwrap();
        assert!((strip.min_diameter_exact((0, 0), (0, 4)).unwrap() - 2.0).abs() < 1e-12);
        let l = GridDomain::from_rows(1.0, &["#..", "#..", "###"]).unwrap();
        let exact = l.min_diameter_exact((0, 0), (2, 2)).unwrap();
        assert!((exact - 8f64.sqrt()).abs() < 1e-12);
        let big = fixtures::square_grid(5);
        assert_eq!(big.min_diameter_exact((0, 0), (1, 1)), Err(GridError::TooLarge(25)));
        assert_eq!(strip.lens_distance((0, 0), (1, 0)), Err(GridError::CellOutsideDomain((1, 0))));
    }

    #[test]
    fn lens_within_agrees_with_lens_distance() {
        let g = u_shape();
        for a in g.cells() {
            for b in g.cells() {
                let lens = g.lens_distance(a, b).unwrap();
                for eps in [0.5, 1.0, 1.5, 2.0, 3.0, 4.5] {
                    assert_eq!(g.lens_within(a, b, eps), lens <= eps + 1e-9, "{a:?} {b:?} {eps}");
                }
            }
        }
    }

    #[test]
    fn walk_covers_every_boundary_edge_once() {
        let g = GridDomain::from_rows(1.0, &["##.", "###", ".##"]).unwrap();
        let w = g.boundary_walk();
        // perimeter of this 7-cell shape
        assert_eq!(w.len(), 12);
        for pair in w.steps.windows(2) {
            assert_eq!(pair[0].dir.advance(pair[0].start), pair[1].start);
        }
        let last = w.steps.last().unwrap();
        assert_eq!(last.dir.advance(last.start), w.steps[0].start);
    }

    #[test]
    fn walk_length_is_perimeter() {
        let g = GridDomain::from_rows(1.0, &["##", "#.", "##", ".#"]).unwrap();
        assert_eq!(g.boundary_walk().len(), 14);
    }

    #[test]
    fn convex_grid_is_one_cluster() {
        let g = fixtures::square_grid(12);
        let r = g.boundary_clusters(2.0 / 12.0).unwrap();
        assert_eq!(r.family.len(), 1);
        let m = &r.family.members()[0];
        assert_eq!(m.arc.start(), m.arc.end());
        assert!(!m.arc.is_point());
    }

    #[test]
    fn comb_clusters_alternate() {
        let g = fixtures::comb(3, 32);
        let r = g.boundary_clusters(2.0 / 32.0).unwrap();
        let kinds: Vec<ClusterKind> = r.clusters.iter().map(|c| c.kind).collect();
        assert_eq!(kinds.len(), 6, "{kinds:?}");
        for pair in kinds.windows(2) {
            assert_ne!(pair[0], pair[1]);
        }
        // every tooth cell belongs to a pinched cluster, one per tooth
        let mut tooth_clusters = Vec::new();
        for col in [4, 14, 24] {
            let top = g.cells().into_iter().find(|c| c.1 == col).unwrap();
            let cl = r.cluster_of(top).unwrap();
            assert_eq!(cl.kind, ClusterKind::Pinched);
            tooth_clusters.push(cl.label.clone());
        }
        tooth_clusters.dedup();
        assert_eq!(tooth_clusters.len(), 3);
    }

    #[test]
    fn warsaw_bar_cluster_is_separate() {
        let n = 32;
        let g = fixtures::warsaw(n);
        let r = g.boundary_clusters(2.0 / n as f64).unwrap();
        let bar = r.cluster_of((0, 0)).expect("bar cell is on the boundary");
        assert_eq!(bar.kind, ClusterKind::Pinched);
        // the widest oscillation sits near x = 1/pi..1 and is resolved
        let far_col = g.ncols() - 2;
        let far = g.cells().into_iter().find(|c| c.1 == far_col).unwrap();
        let far_cluster = r.cluster_of(far).unwrap();
        assert_ne!(far_cluster.label, bar.label);
        assert!(r.family.len() >= 2);
    }
}
