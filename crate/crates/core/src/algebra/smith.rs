//! Smith normal form over the integers and the `(n, m)` invariants of finite
//! translation groups of the torus.

use num_integer::Integer;
use num_rational::Ratio;

use super::AlgebraError;

/// Nonzero invariant factors `d_1 | d_2 | ...` of an integer matrix, given row-wise.
#[allow(clippy::needless_range_loop)]
pub fn invariant_factors(matrix: &[Vec<i64>]) -> Vec<i64> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i128>> = matrix
        .iter()
        .map(|r| r.iter().map(|&v| i128::from(v)).collect())
        .collect();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // pivot: smallest nonzero absolute value in the remaining block
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if a[i][j] != 0 && pivot.is_none_or(|(pi, pj): (usize, usize)| a[i][j].abs() < a[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let q = a[i][t] / p;
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                dirty |= a[i][t] != 0;
            }
            for j in t + 1..cols {
                let q = a[t][j] / p;
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                dirty |= a[t][j] != 0;
            }
            if !dirty {
                // pivot must divide the whole remaining block
                let bad = (t + 1..rows)
                    .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                    .find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..rows {
                if a[i][t] != 0 && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..cols {
                if a[t][j] != 0 && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            a.swap(t, best.0);
            for row in a.iter_mut() {
                row.swap(t, best.1);
            }
        }
        diag.push(a[t][t].abs() as i64);
        t += 1;
    }
    diag
}

/// `(n, m)` such that the subgroup of `(Q/Z)^2` generated by `gens` is
/// isomorphic to `Z_n x Z_{n*m}`.
pub fn smith_pair(gens: &[(Ratio<i64>, Ratio<i64>)]) -> Result<(u64, u64), AlgebraError> {
    let mut d: i64 = 1;
    for (x, y) in gens {
        d = d.lcm(x.denom()).lcm(y.denom());
        if d > 1 << 30 {
            return Err(AlgebraError::Overflow("translation denominators too large".into()));
        }
    }
    // The group is L / (D Z^2) where L is spanned by D*g and D*e_1, D*e_2.
    let scale = |r: &Ratio<i64>| r.numer() * (d / r.denom());
    let mut row_x: Vec<i64> = gens.iter().map(|(x, _)| scale(x)).collect();
    let mut row_y: Vec<i64> = gens.iter().map(|(_, y)| scale(y)).collect();
    row_x.extend([d, 0]);
    row_y.extend([0, d]);
    let f = invariant_factors(&[row_x, row_y]);
    let (s1, s2) = (f[0], f[1]);
    let n = d / s2;
    let m = s2 / s1;
    Ok((n as u64, m as u64))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Ratio<i64> {
        Ratio::new(n, d)
    }

    #[test]
    fn diagonal_examples() {
        assert_eq!(
            invariant_factors(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]),
            vec![2, 6, 12]
        );
        assert_eq!(invariant_factors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(invariant_factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(invariant_factors(&[vec![1, 1]]), vec![1]);
    }

    #[test]
    fn smith_pair_examples() {
        assert_eq!(smith_pair(&[(r(1, 2), r(1, 2))]).unwrap(), (1, 2));
        assert_eq!(smith_pair(&[]).unwrap(), (1, 1));
        assert_eq!(smith_pair(&[(r(1, 2), r(0, 1)), (r(0, 1), r(1, 3))]).unwrap(), (1, 6));
        assert_eq!(smith_pair(&[(r(1, 2), r(0, 1)), (r(0, 1), r(1, 2))]).unwrap(), (2, 1));
        assert_eq!(smith_pair(&[(r(1, 2), r(0, 1)), (r(0, 1), r(1, 4))]).unwrap(), (2, 2));
    }
}
