use std::collections::BTreeMap;
use std::ops::AddAssign;

/// Tables with at most this many cells are stored densely.
pub const DENSE_CELL_LIMIT: u64 = 1 << 24;

/// Per-word table indexed by window rank, dense for small `g^k`.
#[derive(Clone, Debug, PartialEq)]
pub enum WordTable<T> {
    Dense(Vec<T>),
    Sparse(BTreeMap<u64, T>),
}

impl<T> WordTable<T>
where
    T: Copy + Default + PartialEq + AddAssign,
{
    pub fn new(cells: u64) -> Self {
        if cells <= DENSE_CELL_LIMIT {
            WordTable::Dense(vec![T::default(); cells as usize])
        } else {
            WordTable::Sparse(BTreeMap::new())
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, WordTable::Dense(_))
    }

    #[inline]
    pub fn add(&mut self, index: u64, delta: T) {
        match self {
            WordTable::Dense(cells) => cells[index as usize] += delta,
            WordTable::Sparse(map) => {
                let cell = map.entry(index).or_default();
                *cell += delta;
                if *cell == T::default() {
                    map.remove(&index);
                }
            }
        }
    }

    pub fn get(&self, index: u64) -> T {
        match self {
            WordTable::Dense(cells) => cells.get(index as usize).copied().unwrap_or_default(),
            WordTable::Sparse(map) => map.get(&index).copied().unwrap_or_default(),
        }
    }

    /// Cells holding a non-default value, in index order.
    pub fn nonzero(&self) -> Vec<(u64, T)> {
        match self {
            WordTable::Dense(cells) => {
                cells.iter().enumerate().filter(|(_, v)| **v != T::default()).map(|(i, v)| (i as u64, *v)).collect()
            }
            WordTable::Sparse(map) => map.iter().map(|(&i, &v)| (i, v)).collect(),
        }
    }

    pub fn absorb(&mut self, other: &WordTable<T>) {
        for (i, v) in other.nonzero() {
            self.add(i, v);
        }
    }
}
