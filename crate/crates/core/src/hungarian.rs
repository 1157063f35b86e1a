//! Minimum-cost assignment with rows added one at a time.
//!
//! This is the classical potential-based O(n²m) method. Each call to
//! [`Assignment::add_row`] runs one shortest augmenting path phase, so a
//! state built for a set of rows can be cloned and extended by a single
//! extra row in O(nm).

#[derive(Debug, Clone)]
pub struct Assignment {
    cols: usize,
    costs: Vec<Vec<f64>>,
    // 1-indexed potentials and column owners; index 0 is the virtual column.
    u: Vec<f64>,
    v: Vec<f64>,
    owner: Vec<usize>,
}

impl Assignment {
    pub fn new(cols: usize) -> Self {
        Assignment {
            cols,
            costs: Vec::new(),
            u: vec![0.0],
            v: vec![0.0; cols + 1],
            owner: vec![0; cols + 1],
        }
    }

    pub fn rows(&self) -> usize {
        self.costs.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Add a row with the given per-column costs and re-optimize.
    ///
    /// Panics if the row count would exceed the column count.
    pub fn add_row(&mut self, costs: Vec<f64>) {
        assert_eq!(costs.len(), self.cols, "row width mismatch");
        assert!(self.rows() < self.cols, "more rows than columns");
        self.costs.push(costs);
        self.u.push(0.0);
        let i = self.costs.len();
        let m = self.cols;

        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        let mut way = vec![0usize; m + 1];
        self.owner[0] = i;
        let mut j0 = 0;
        loop {
            used[j0] = true;
            let i0 = self.owner[j0];
            let row = &self.costs[i0 - 1];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = row[j - 1] - self.u[i0] - self.v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    self.u[self.owner[j]] += delta;
                    self.v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if self.owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            self.owner[j0] = self.owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    /// Column assigned to each row.
    pub fn row_assignment(&self) -> Vec<usize> {
        let mut out = vec![usize::MAX; self.rows()];
        for j in 1..=self.cols {
            let i = self.owner[j];
            if i != 0 {
                out[i - 1] = j - 1;
            }
        }
        out
    }

    pub fn cost(&self) -> f64 {
        self.row_assignment()
            .iter()
            .enumerate()
            .map(|(i, &j)| self.costs[i][j])
            .sum()
    }
}

/// Solve a full assignment problem in one go.
pub fn solve(costs: &[Vec<f64>], cols: usize) -> Vec<usize> {
    let mut state = Assignment::new(cols);
    for row in costs {
        state.add_row(row.clone());
    }
    state.row_assignment()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(costs: &[Vec<f64>], cols: usize) -> f64 {
        fn go(costs: &[Vec<f64>], row: usize, used: &mut Vec<bool>) -> f64 {
            if row == costs.len() {
                return 0.0;
            }
            let mut best = f64::INFINITY;
            for j in 0..used.len() {
                if !used[j] {
                    used[j] = true;
                    best = best.min(costs[row][j] + go(costs, row + 1, used));
                    used[j] = false;
                }
            }
            best
        }
        go(costs, 0, &mut vec![false; cols])
    }

    #[test]
    fn matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let rows = rng.random_range(1..=5);
            let cols = rng.random_range(rows..=6);
            let costs: Vec<Vec<f64>> = (0..rows)
                .map(|_| (0..cols).map(|_| rng.random_range(-10..10) as f64).collect())
                .collect();
            let mut state = Assignment::new(cols);
            for row in &costs {
                state.add_row(row.clone());
            }
            let assignment = state.row_assignment();
            let mut seen = assignment.clone();
            seen.sort();
            seen.dedup();
            assert_eq!(seen.len(), rows);
            assert_eq!(state.cost(), brute(&costs, cols));
        }
    }

    #[test]
    fn clone_then_extend() {
        let mut base = Assignment::new(3);
        base.add_row(vec![-3.0, -1.0, 0.0]);
        let mut extended = base.clone();
        extended.add_row(vec![-3.0, 0.0, 0.0]);
        assert_eq!(base.cost(), -3.0);
        assert_eq!(extended.cost(), -4.0);
        assert_eq!(extended.row_assignment()[1], 0);
    }
}
