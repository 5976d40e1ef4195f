//! Dense Gaussian elimination.

use alloc::vec::Vec;

use crate::math::abs;

/// Numerical rank of the given rows. Each row is scaled to unit max-norm
/// first; a pivot counts when its magnitude exceeds `pivot_tol`.
pub fn rank(rows: &[Vec<f64>], pivot_tol: f64) -> usize {
    let mut m: Vec<Vec<f64>> = rows
        .iter()
        .filter_map(|r| {
            let scale = r.iter().fold(0.0f64, |a, v| a.max(abs(*v)));
            (scale > 0.0).then(|| r.iter().map(|v| v / scale).collect())
        })
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..cols {
        if rank == m.len() {
            break;
        }
        let (best, mag) = (rank..m.len())
            .map(|i| (i, abs(m[i][col])))
            .fold((rank, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if mag <= pivot_tol {
            continue;
        }
        m.swap(rank, best);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            let factor = row[col] / pivot_row[col];
            if factor != 0.0 {
                for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn small_ranks() {
        assert_eq!(rank(&[], 1e-10), 0);
        assert_eq!(rank(&[vec![0.0, 0.0]], 1e-10), 0);
        assert_eq!(rank(&[vec![1.0, 2.0], vec![2.0, 4.0]], 1e-10), 1);
        assert_eq!(rank(&[vec![1.0, 2.0], vec![2.0, 4.0], vec![0.0, 1.0]], 1e-10), 2);
        let id: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        assert_eq!(rank(&id, 1e-10), 5);
    }

    #[test]
    fn near_dependence_is_rank_deficient() {
        let rows = [vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 1.0], vec![1.0, 2.0, 1.0 + 1e-14]];
        assert_eq!(rank(&rows, 1e-10), 2);
    }
}
