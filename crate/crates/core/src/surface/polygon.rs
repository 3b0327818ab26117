use crate::error::{Error, Result};

/// A diagonal `(i, j)` of a convex polygon with vertices `0..n`, `i < j`.
pub type Diagonal = (usize, usize);

/// All triangulations of a convex `n`-gon, each as a sorted list of its
/// `n − 3` diagonals. The list itself is sorted.
pub fn enumerate_polygon_triangulations(n: usize) -> Result<Vec<Vec<Diagonal>>> {
    if n < 3 {
        return Err(Error::Constraint(format!("polygon needs at least 3 vertices, got {n}")));
    }
    let mut memo = vec![vec![None; n]; n];
    let mut out = triangulate(0, n - 1, n, &mut memo);
    for t in &mut out {
        t.sort_unstable();
    }
    out.sort();
    Ok(out)
}

/// Triangulations of the sub-polygon `i..=j`, listing chords other than `(i, j)`.
fn triangulate(
    i: usize,
    j: usize,
    n: usize,
    memo: &mut Vec<Vec<Option<Vec<Vec<Diagonal>>>>>,
) -> Vec<Vec<Diagonal>> {
    if j - i < 2 {
        return vec![Vec::new()];
    }
    if let Some(done) = &memo[i][j] {
        return done.clone();
    }
    let mut out = Vec::new();
    for k in i + 1..j {
        let left = triangulate(i, k, n, memo);
        let right = triangulate(k, j, n, memo);
        for l in &left {
            for r in &right {
                let mut t = Vec::with_capacity(l.len() + r.len() + 2);
                t.extend_from_slice(l);
                t.extend_from_slice(r);
                for chord in [(i, k), (k, j)] {
                    if chord.1 - chord.0 > 1 && !(chord.0 == 0 && chord.1 == n - 1) {
                        t.push(chord);
                    }
                }
                out.push(t);
            }
        }
    }
    memo[i][j] = Some(out.clone());
    out
}

/// The Catalan number `C_m = binom(2m, m) / (m + 1)`.
pub fn catalan_number(m: u64) -> u128 {
    let mut c: u128 = 1;
    for k in 0..m as u128 {
        c = c * 2 * (2 * k + 1) / (k + 2);
    }
    c
}
