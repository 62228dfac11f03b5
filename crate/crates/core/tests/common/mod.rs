//! Brute-force reference solvers shared by the integration tests.
#![allow(dead_code)]

use sweepcover::TOL;

/// Best count of points covered by at most `sensors` windows of length
/// `window`. Some optimal solution starts each window at a point, so only
/// those placements are enumerated.
pub fn brute_line(positions: &[f64], window: f64, sensors: usize) -> usize {
    fn go(pos: &[f64], window: f64, left: usize, from: usize, covered: &mut Vec<bool>) -> usize {
        let here = covered.iter().filter(|&&c| c).count();
        if left == 0 {
            return here;
        }
        let mut best = here;
        for s in from..pos.len() {
            let before = covered.clone();
            for (i, &p) in pos.iter().enumerate() {
                if pos[s] - TOL <= p && p <= pos[s] + window + TOL {
                    covered[i] = true;
                }
            }
            best = best.max(go(pos, window, left - 1, s + 1, covered));
            *covered = before;
        }
        best
    }
    go(positions, window, sensors, 0, &mut vec![false; positions.len()])
}

/// Best total over all ways to give each path some sensors, at most `total` overall.
pub fn brute_allocation(opt: &[Vec<usize>], total: usize) -> usize {
    fn go(opt: &[Vec<usize>], left: usize) -> usize {
        match opt.split_first() {
            None => 0,
            Some((row, rest)) => (0..=left)
                .map(|j| row[j.min(row.len() - 1)] + go(rest, left - j))
                .max()
                .unwrap_or(0),
        }
    }
    go(opt, total)
}
