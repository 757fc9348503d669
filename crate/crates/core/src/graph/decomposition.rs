use super::{Graph, Vertex};

/// A sequence of bags.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PathDecomposition {
    pub bags: Vec<Vec<Vertex>>,
}

impl PathDecomposition {
    pub fn new(bags: Vec<Vec<Vertex>>) -> Self {
        PathDecomposition { bags }
    }

    /// Largest bag size minus one (zero for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(Vec::len)
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PathDecompositionCheck {
    pub valid: bool,
    pub width: usize,
}

/// Checks vertex coverage, edge coverage and that the bags containing any
/// vertex are consecutive. Out-of-range ids make the decomposition invalid.
pub fn check_path_decomposition(g: &Graph, pd: &PathDecomposition) -> PathDecompositionCheck {
    let width = pd.width();
    let n = g.vertex_count();
    let invalid = PathDecompositionCheck { valid: false, width };

    // First and last bag index per vertex plus the number of bags holding it.
    let mut first = vec![usize::MAX; n];
    let mut last = vec![0; n];
    let mut count = vec![0usize; n];
    for (i, bag) in pd.bags.iter().enumerate() {
        let mut sorted = bag.clone();
        sorted.sort_unstable();
        sorted.dedup();
        for &v in &sorted {
            if v >= n {
                return invalid;
            }
            first[v] = first[v].min(i);
            last[v] = i;
            count[v] += 1;
        }
    }
    for v in 0..n {
        if count[v] == 0 || last[v] - first[v] + 1 != count[v] {
            return invalid;
        }
    }
    // With contiguous intervals, an edge is covered iff the intervals overlap
    // in a bag that really holds both endpoints.
    for (u, v) in g.edges() {
        let lo = first[u].max(first[v]);
        let hi = last[u].min(last[v]);
        if lo > hi {
            return invalid;
        }
        let covered = pd.bags[lo..=hi]
            .iter()
            .any(|bag| bag.contains(&u) && bag.contains(&v));
        if !covered {
            return invalid;
        }
    }
    PathDecompositionCheck { valid: true, width }
}
