//! Small dense linear solves for the biorthogonal extension step.
//!
//! Systems here have at most a few dozen rows. The solver returns a
//! particular solution supported on the pivot columns only, which is what
//! makes the dual extension minimal-support: scanning columns left to right
//! keeps the support deterministic and as far left as the system allows.

/// Solve `A·w = rhs` for one particular solution, `A` given as rows.
/// Returns `None` when the system is inconsistent. Free columns are set to
/// zero, so the solution's support lies inside the pivot columns.
#[allow(clippy::needless_range_loop)]
pub fn solve_particular(a: &[Vec<f64>], rhs: &[f64]) -> Option<Vec<f64>> {
    let rows = a.len();
    assert_eq!(rows, rhs.len());
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .zip(rhs)
        .map(|(row, &b)| {
            assert_eq!(row.len(), cols);
            let mut r = row.clone();
            r.push(b);
            r
        })
        .collect();

    let scale = m
        .iter()
        .flat_map(|r| r[..cols].iter())
        .fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let pivot_tol = 1e-12 * scale.max(1.0);

    let mut pivot_cols = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let (best_row, best_abs) = (row..rows)
            .map(|r| (r, m[r][col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        if best_abs <= pivot_tol {
            continue;
        }
        m.swap(row, best_row);
        let inv = 1.0 / m[row][col];
        for j in col..=cols {
            m[row][j] *= inv;
        }
        for r in 0..rows {
            if r != row && m[r][col] != 0.0 {
                let factor = m[r][col];
                for j in col..=cols {
                    m[r][j] -= factor * m[row][j];
                }
            }
        }
        pivot_cols.push((row, col));
        row += 1;
    }

    // zero rows must carry zero right-hand sides, otherwise unsolvable
    let rhs_scale = rhs.iter().fold(0.0f64, |acc, &v| acc.max(v.abs()));
    let consistency_tol = 1e-10 * rhs_scale.max(scale).max(1.0);
    for r in row..rows {
        if m[r][cols].abs() > consistency_tol {
            return None;
        }
    }

    let mut w = vec![0.0; cols];
    for &(r, c) in &pivot_cols {
        w[c] = m[r][cols];
    }
    Some(w)
}
