//! Exact point-in-hull test: phase-I simplex over the rationals with Bland's
//! rule, returning convex weights or a Farkas separator.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Q = BigRational;

/// Outcome of [`point_in_hull`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Membership {
    /// `q = sum w_i p_i` with `w_i >= 0`, `sum w_i = 1`; pairs `(i, w_i)`
    /// with nonzero weight.
    Inside(Vec<(usize, Q)>),
    /// `h` with `min_i <h, p_i> > <h, q>`.
    Outside(Vec<Q>),
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Decides whether `q` lies in the convex hull of `points`.
pub fn point_in_hull(points: &[Vec<Q>], q: &[Q]) -> Result<Membership> {
    let dim = q.len();
    if points.is_empty() {
        return Err(Error::Invalid("hull of an empty point set".into()));
    }
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, got: points[0].len() });
    }
    let n = points.len();
    let m = dim + 1;
    // Rows: coordinates, then the convexity row. Columns: points, then one
    // artificial per row, then the right-hand side.
    let mut flip = vec![false; m];
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(m);
    for r in 0..m {
        let mut row = vec![Q::zero(); n + m + 1];
        for (j, p) in points.iter().enumerate() {
            row[j] = if r < dim { p[r].clone() } else { Q::one() };
        }
        let rhs = if r < dim { q[r].clone() } else { Q::one() };
        if rhs.is_negative() {
            flip[r] = true;
            for v in row.iter_mut().take(n) {
                *v = -v.clone();
            }
            row[n + m] = -rhs;
        } else {
            row[n + m] = rhs;
        }
        row[n + r] = Q::one();
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();
    let cost = |j: usize| if j >= n { Q::one() } else { Q::zero() };

    loop {
        // Reduced costs c_j - c_B B^{-1} A_j; Bland: first negative.
        let mut enter = None;
        for j in 0..n + m {
            if basis.contains(&j) {
                continue;
            }
            let mut rc = cost(j);
            for (r, &b) in basis.iter().enumerate() {
                if b >= n {
                    rc -= &t[r][j];
                }
            }
            if rc.is_negative() {
                enter = Some(j);
                break;
            }
        }
        let Some(e) = enter else { break };
        let mut leave: Option<(usize, Q)> = None;
        for r in 0..m {
            if t[r][e].is_positive() {
                let ratio = &t[r][n + m] / &t[r][e];
                let better = match &leave {
                    None => true,
                    Some((lr, lv)) => ratio < *lv || (ratio == *lv && basis[r] < basis[*lr]),
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        // Phase I is bounded below by zero, so a pivot row always exists.
        let (pr, _) = leave.ok_or_else(|| Error::NonConvergence("unbounded phase-I ray".into()))?;
        let piv = t[pr][e].clone();
        for v in t[pr].iter_mut() {
            *v = &*v / &piv;
        }
        let prow = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[e].is_zero() {
                let f = row[e].clone();
                for (v, p) in row.iter_mut().zip(&prow) {
                    *v -= &f * p;
                }
            }
        }
        basis[pr] = e;
    }

    let objective = basis
        .iter()
        .enumerate()
        .filter(|(_, &b)| b >= n)
        .fold(Q::zero(), |acc, (r, _)| acc + &t[r][n + m]);
    if objective.is_zero() {
        let mut w: Vec<(usize, Q)> = basis
            .iter()
            .enumerate()
            .filter(|(r, &b)| b < n && !t[*r][n + m].is_zero())
            .map(|(r, &b)| (b, t[r][n + m].clone()))
            .collect();
        w.sort_by_key(|(i, _)| *i);
        return Ok(Membership::Inside(w));
    }
    // Phase-I duals: y_i = sum_r c_B[r] (B^{-1})[r][i], read off the
    // artificial columns. z = -D y certifies infeasibility.
    let mut y = vec![Q::zero(); m];
    for (r, &b) in basis.iter().enumerate() {
        if b >= n {
            for (i, yi) in y.iter_mut().enumerate() {
                *yi += &t[r][n + i];
            }
        }
    }
    let z: Vec<Q> = y
        .iter()
        .zip(&flip)
        .map(|(v, &f)| if f { v.clone() } else { -v.clone() })
        .collect();
    let h = z[..dim].to_vec();
    let hq = dot(&h, q);
    let min_p = points.iter().map(|p| dot(&h, p)).min().expect("nonempty");
    if min_p <= hq {
        return Err(Error::NonConvergence("separator failed its own check".into()));
    }
    Ok(Membership::Outside(h))
}

/// Re-checks a membership certificate exactly.
pub fn verify_certificate(points: &[Vec<Q>], q: &[Q], cert: &Membership) -> bool {
    match cert {
        Membership::Inside(w) => {
            let mut sum = Q::zero();
            let mut acc = vec![Q::zero(); q.len()];
            for (i, wi) in w {
                if wi.is_negative() || *i >= points.len() {
                    return false;
                }
                sum += wi;
                for (a, p) in acc.iter_mut().zip(&points[*i]) {
                    *a += wi * p;
                }
            }
            sum.is_one() && acc == q
        }
        Membership::Outside(h) => {
            let hq = dot(h, q);
            points.iter().all(|p| dot(h, p) > hq)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn pts(v: &[&[i64]]) -> Vec<Vec<Q>> {
        v.iter().map(|p| p.iter().map(|&x| rat(x, 1)).collect()).collect()
    }

    #[test]
    fn triangle_membership() {
        let p = pts(&[&[0, 0], &[4, 0], &[0, 4]]);
        let inside = vec![rat(1, 1), rat(1, 1)];
        let c = point_in_hull(&p, &inside).unwrap();
        assert!(c.is_inside());
        assert!(verify_certificate(&p, &inside, &c));
        let outside = vec![rat(3, 1), rat(3, 1)];
        let c = point_in_hull(&p, &outside).unwrap();
        assert!(!c.is_inside());
        assert!(verify_certificate(&p, &outside, &c));
    }

    #[test]
    fn negative_coordinates_and_vertices() {
        let p = pts(&[&[-2, -1], &[3, -1], &[0, 5]]);
        for q in &p {
            let c = point_in_hull(&p, q).unwrap();
            assert!(verify_certificate(&p, q, &c));
            assert!(c.is_inside());
        }
        let q = vec![rat(-3, 1), rat(-2, 1)];
        let c = point_in_hull(&p, &q).unwrap();
        assert!(!c.is_inside() && verify_certificate(&p, &q, &c));
    }

    #[test]
    fn segment_barycentric() {
        let p = pts(&[&[0, 2, 0], &[1, 0, 1]]);
        let q = vec![rat(1, 3), rat(4, 3), rat(1, 3)];
        match point_in_hull(&p, &q).unwrap() {
            Membership::Inside(w) => assert_eq!(w, vec![(0, rat(2, 3)), (1, rat(1, 3))]),
            _ => panic!("expected inside"),
        }
    }
}
