//! Generalized quadrangle axioms for a finite incidence structure.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Checks that `(points, lines)` is a GQ(s, t).
///
/// Lines are given as lists of point labels. Verified exhaustively: every line
/// has `s + 1` points, every point lies on `t + 1` lines, two points share at
/// most one line, and for every non-incident point–line pair there is exactly
/// one point of the line collinear with the point.
pub fn check_gq(points: &[usize], lines: &[Vec<usize>], s: usize, t: usize) -> Result<()> {
    let index: HashMap<usize, usize> = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let n = points.len();
    let mut on_lines = vec![Vec::new(); n];
    for (li, line) in lines.iter().enumerate() {
        if line.len() != s + 1 {
            return Err(Error::Structure(format!(
                "line {li} has {} points, expected {}",
                line.len(),
                s + 1
            )));
        }
        for p in line {
            let &i = index
                .get(p)
                .ok_or_else(|| Error::Structure(format!("line {li} has foreign point {p}")))?;
            on_lines[i].push(li);
        }
    }
    for (i, ls) in on_lines.iter().enumerate() {
        if ls.len() != t + 1 {
            return Err(Error::Structure(format!(
                "point {} lies on {} lines, expected {}",
                points[i],
                ls.len(),
                t + 1
            )));
        }
    }

    let mut collinear = vec![false; n * n];
    for line in lines {
        for a in line {
            for b in line {
                if a == b {
                    continue;
                }
                let (ia, ib) = (index[a], index[b]);
                if collinear[ia * n + ib] {
                    return Err(Error::Structure(format!(
                        "points {a} and {b} lie on more than one line"
                    )));
                }
                collinear[ia * n + ib] = true;
            }
        }
    }

    for (i, &p) in points.iter().enumerate() {
        for (li, line) in lines.iter().enumerate() {
            if line.contains(&p) {
                continue;
            }
            let hits = line.iter().filter(|q| collinear[i * n + index[q]]).count();
            if hits != 1 {
                return Err(Error::Structure(format!(
                    "point {p} is collinear with {hits} points of line {li}"
                )));
            }
        }
    }
    Ok(())
}
