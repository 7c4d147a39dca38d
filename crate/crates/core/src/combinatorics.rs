//! Multipartitions, bipartitions, box contents, standard tableaux counts and
//! the path graph on bipartitions whose edges add or remove one box.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ground::{FieldElem, Params};
use crate::words::{ClassIndex, Dir, Word};

/// Errors from parsing or validating shapes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapeError {
    #[error("component {0} is not a partition: {1:?}")]
    NotPartition(usize, Vec<usize>),
    #[error("expected at most {expected} components, found {found}")]
    TooManyComponents { expected: usize, found: usize },
    #[error("malformed shape: {0}")]
    Parse(String),
}

/// An ℓ-multipartition: `ℓ` partitions, each weakly decreasing with positive
/// parts.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multipartition {
    components: Vec<Vec<usize>>,
}

impl Multipartition {
    pub fn empty(level: usize) -> Self {
        Multipartition { components: vec![Vec::new(); level] }
    }

    /// Validates the components and pads with empty partitions up to `level`.
    pub fn new(mut components: Vec<Vec<usize>>, level: usize) -> Result<Self, ShapeError> {
        if components.len() > level {
            return Err(ShapeError::TooManyComponents { expected: level, found: components.len() });
        }
        for (j, c) in components.iter().enumerate() {
            if c.windows(2).any(|w| w[0] < w[1]) || c.contains(&0) {
                return Err(ShapeError::NotPartition(j + 1, c.clone()));
            }
        }
        components.resize(level, Vec::new());
        Ok(Multipartition { components })
    }

    pub fn level(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    /// Total number of boxes.
    pub fn size(&self) -> usize {
        self.components.iter().flatten().sum()
    }

    /// Addable cells `(component, row, column)`, all 1-based.
    pub fn addable(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (j, c) in self.components.iter().enumerate() {
            for l in 0..=c.len() {
                let len = c.get(l).copied().unwrap_or(0);
                if l == 0 || c[l - 1] > len {
                    out.push((j + 1, l + 1, len + 1));
                }
            }
        }
        out
    }

    /// Removable cells `(component, row, column)`, all 1-based.
    pub fn removable(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (j, c) in self.components.iter().enumerate() {
            for l in 0..c.len() {
                let next = c.get(l + 1).copied().unwrap_or(0);
                if c[l] > next {
                    out.push((j + 1, l + 1, c[l]));
                }
            }
        }
        out
    }

    /// Adds the cell `(j, l, k)`, which must be addable.
    pub fn with_added(&self, j: usize, l: usize) -> Self {
        let mut m = self.clone();
        let c = &mut m.components[j - 1];
        if l > c.len() {
            c.push(1);
        } else {
            c[l - 1] += 1;
        }
        m
    }

    /// Removes the last cell of row `l` in component `j`.
    pub fn with_removed(&self, j: usize, l: usize) -> Self {
        let mut m = self.clone();
        let c = &mut m.components[j - 1];
        c[l - 1] -= 1;
        if c[l - 1] == 0 {
            c.pop();
        }
        m
    }

    /// All cells `(component, row, column)`.
    pub fn cells(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (j, c) in self.components.iter().enumerate() {
            for (l, &len) in c.iter().enumerate() {
                for k in 1..=len {
                    out.push((j + 1, l + 1, k));
                }
            }
        }
        out
    }

    /// All ℓ-multipartitions of `n`, in a fixed order.
    pub fn all_of_size(n: usize, level: usize) -> Vec<Multipartition> {
        fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![Vec::new()];
            }
            let mut out = Vec::new();
            for first in (1..=n.min(max)).rev() {
                for mut rest in partitions(n - first, first) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        fn rec(n: usize, level: usize) -> Vec<Vec<Vec<usize>>> {
            if level == 0 {
                return if n == 0 { vec![Vec::new()] } else { Vec::new() };
            }
            let mut out = Vec::new();
            for k in (0..=n).rev() {
                for p in partitions(k, k) {
                    for mut rest in rec(n - k, level - 1) {
                        rest.insert(0, p.clone());
                        out.push(rest);
                    }
                }
            }
            out
        }
        rec(n, level).into_iter().map(|components| Multipartition { components }).collect()
    }
}

impl fmt::Display for Multipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| format!("({})", c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A pair `(λ↓, λ↑)` of ℓ-multipartitions.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Bipartition {
    pub down: Multipartition,
    pub up: Multipartition,
}

impl Bipartition {
    pub fn empty(level: usize) -> Self {
        Bipartition { down: Multipartition::empty(level), up: Multipartition::empty(level) }
    }

    pub fn new(down: Multipartition, up: Multipartition) -> Self {
        Bipartition { down, up }
    }

    /// `(|λ↓|, |λ↑|)`.
    pub fn class(&self) -> ClassIndex {
        ClassIndex::new(self.down.size(), self.up.size())
    }

    pub fn size(&self) -> usize {
        self.down.size() + self.up.size()
    }

    pub fn side(&self, dir: Dir) -> &Multipartition {
        match dir {
            Dir::Up => &self.up,
            Dir::Down => &self.down,
        }
    }

    fn with_side(&self, dir: Dir, m: Multipartition) -> Self {
        match dir {
            Dir::Up => Bipartition { down: self.down.clone(), up: m },
            Dir::Down => Bipartition { down: m, up: self.up.clone() },
        }
    }

    /// Parses `"empty"` or a JSON pair `[λ↓, λ↑]`, each a list of up to `ℓ`
    /// partitions.
    pub fn parse(s: &str, level: usize) -> Result<Self, ShapeError> {
        let s = s.trim();
        if s == "empty" || s.is_empty() {
            return Ok(Bipartition::empty(level));
        }
        let (down, up): (Vec<Vec<usize>>, Vec<Vec<usize>>) =
            serde_json::from_str(s).map_err(|e| ShapeError::Parse(e.to_string()))?;
        Ok(Bipartition { down: Multipartition::new(down, level)?, up: Multipartition::new(up, level)? })
    }

    /// All bipartitions with `|λ↓| + |λ↑| = n`.
    pub fn all_of_size(n: usize, level: usize) -> Vec<Bipartition> {
        let mut out = Vec::new();
        for r in 0..=n {
            for down in Multipartition::all_of_size(r, level) {
                for up in Multipartition::all_of_size(n - r, level) {
                    out.push(Bipartition { down: down.clone(), up });
                }
            }
        }
        out
    }

    /// All bipartitions with at most `n` boxes.
    pub fn all_up_to(n: usize, level: usize) -> Vec<Bipartition> {
        (0..=n).flat_map(|k| Bipartition::all_of_size(k, level)).collect()
    }

    /// JSON pair `[λ↓, λ↑]`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!([self.down.components, self.up.components])
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};{})", self.down, self.up)
    }
}

/// A cell of `λ↑` or `λ↓`: component `j`, row `l`, column `k`, all 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cell {
    pub side: Dir,
    pub component: usize,
    pub row: usize,
    pub column: usize,
}

impl Cell {
    pub fn new(side: Dir, component: usize, row: usize, column: usize) -> Self {
        Cell { side, component, row, column }
    }
}

/// `u_j + k − l` on the ↑ side, `u'_j − k + l` on the ↓ side.
pub fn content(cell: Cell, params: &Params) -> FieldElem {
    let f = params.field();
    let shift = cell.column as i64 - cell.row as i64;
    let base = &params.charges(cell.side)[cell.component - 1];
    match cell.side {
        Dir::Up => base + &f.int(shift),
        Dir::Down => base - &f.int(shift),
    }
}

/// Cells of a fixed content that can be added to or removed from each side.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AddRemovable {
    pub up_addable: Vec<Cell>,
    pub up_removable: Vec<Cell>,
    pub down_addable: Vec<Cell>,
    pub down_removable: Vec<Cell>,
}

/// The `i`-addable and `i`-removable cells of `λ`.
pub fn addable_removable(lambda: &Bipartition, i: &FieldElem, params: &Params) -> AddRemovable {
    let pick = |side: Dir, cells: Vec<(usize, usize, usize)>| -> Vec<Cell> {
        cells
            .into_iter()
            .map(|(j, l, k)| Cell::new(side, j, l, k))
            .filter(|&c| content(c, params) == *i)
            .collect()
    };
    AddRemovable {
        up_addable: pick(Dir::Up, lambda.up.addable()),
        up_removable: pick(Dir::Up, lambda.up.removable()),
        down_addable: pick(Dir::Down, lambda.down.addable()),
        down_removable: pick(Dir::Down, lambda.down.removable()),
    }
}

/// Adds `cell` to the matching side of `λ`.
pub fn add_cell(lambda: &Bipartition, cell: Cell) -> Bipartition {
    let m = lambda.side(cell.side).with_added(cell.component, cell.row);
    lambda.with_side(cell.side, m)
}

/// Removes `cell` from the matching side of `λ`.
pub fn remove_cell(lambda: &Bipartition, cell: Cell) -> Bipartition {
    let m = lambda.side(cell.side).with_removed(cell.component, cell.row);
    lambda.with_side(cell.side, m)
}

/// Number of standard tableaux of a multipartition shape, counted by
/// removing one corner at a time.
pub fn syt_count(mu: &Multipartition) -> u128 {
    fn rec(mu: &Multipartition, memo: &mut HashMap<Multipartition, u128>) -> u128 {
        if mu.size() == 0 {
            return 1;
        }
        if let Some(&v) = memo.get(mu) {
            return v;
        }
        let v = mu.removable().into_iter().map(|(j, l, _)| rec(&mu.with_removed(j, l), memo)).sum();
        memo.insert(mu.clone(), v);
        v
    }
    rec(mu, &mut HashMap::new())
}

/// One edge of the path graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub add: bool,
    pub cell: Cell,
}

impl Step {
    /// The letter this step contributes to the path type: adding to `λ↑` or
    /// removing from `λ↓` gives ↑, the other two moves give ↓.
    pub fn letter(&self) -> Dir {
        match (self.add, self.cell.side) {
            (true, Dir::Up) | (false, Dir::Down) => Dir::Up,
            _ => Dir::Down,
        }
    }
}

/// A path from `(∅, ∅)` with its type word and colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Path {
    pub steps: Vec<Step>,
    pub word: Word,
    pub colors: Vec<FieldElem>,
}

/// All single steps out of `λ`, with their targets.
pub fn steps_from(lambda: &Bipartition) -> Vec<(Step, Bipartition)> {
    let mut out = Vec::new();
    for side in [Dir::Up, Dir::Down] {
        for (j, l, k) in lambda.side(side).addable() {
            let cell = Cell::new(side, j, l, k);
            out.push((Step { add: true, cell }, add_cell(lambda, cell)));
        }
        for (j, l, k) in lambda.side(side).removable() {
            let cell = Cell::new(side, j, l, k);
            out.push((Step { add: false, cell }, remove_cell(lambda, cell)));
        }
    }
    out
}

/// Number of cells in which two bipartitions differ: a lower bound on the
/// number of steps between them.
fn distance(a: &Bipartition, b: &Bipartition) -> usize {
    let mut d = 0;
    for side in [Dir::Up, Dir::Down] {
        let (x, y) = (a.side(side), b.side(side));
        for (cx, cy) in x.components().iter().zip(y.components()) {
            let rows = cx.len().max(cy.len());
            for l in 0..rows {
                let p = cx.get(l).copied().unwrap_or(0);
                let q = cy.get(l).copied().unwrap_or(0);
                d += p.abs_diff(q);
            }
        }
    }
    d
}

/// Every path with `m` edges from `(∅, ∅)` to `λ`.
pub fn paths_to(lambda: &Bipartition, m: usize, params: &Params) -> Vec<Path> {
    let level = params.level();
    let start = Bipartition::empty(level);
    let mut out = Vec::new();
    if m < lambda.size() || !(m - lambda.size()).is_multiple_of(2) {
        return out;
    }
    let mut steps = Vec::new();
    walk(&start, lambda, m, &mut steps, &mut |s| {
        let word = Word(s.iter().map(Step::letter).collect());
        let colors = s.iter().map(|st| content(st.cell, params)).collect();
        out.push(Path { steps: s.to_vec(), word, colors });
    });
    out
}

fn walk(cur: &Bipartition, target: &Bipartition, left: usize, steps: &mut Vec<Step>, emit: &mut dyn FnMut(&[Step])) {
    if left == 0 {
        if cur == target {
            emit(steps);
        }
        return;
    }
    for (s, next) in steps_from(cur) {
        if distance(&next, target) > left - 1 {
            continue;
        }
        steps.push(s);
        walk(&next, target, left - 1, steps, emit);
        steps.pop();
    }
}

/// A path type: the letter word together with the color sequence.
pub type PathType = (Word, Vec<FieldElem>);

/// Path counts to `λ` grouped by type, over all lengths up to `max_len`.
pub fn character_std(lambda: &Bipartition, max_len: usize, params: &Params) -> BTreeMap<PathType, u64> {
    let mut out = BTreeMap::new();
    for m in 0..=max_len {
        for p in paths_to(lambda, m, params) {
            *out.entry((p.word, p.colors)).or_insert(0) += 1;
        }
    }
    out
}

/// Number of paths to `λ` whose type word is `a`.
pub fn path_count_for_word(lambda: &Bipartition, a: &Word, params: &Params) -> u64 {
    paths_to(lambda, a.len(), params).into_iter().filter(|p| &p.word == a).count() as u64
}
