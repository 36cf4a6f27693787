//! First integral homology of a finitely presented group, computed from the
//! abelianized relator matrix via an exact Smith normal form over the
//! integers (arbitrary precision — intermediate entries can grow well past
//! machine words even for small inputs).

use crate::presentation::Presentation;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let mut m = IntMatrix::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// The abelianized relator matrix: one row per relator, one column per
/// generator (in presentation order), entries the exponent sums.
pub fn abelianize(p: &Presentation) -> IntMatrix {
    let mut m = IntMatrix::zero(p.relators.len(), p.generators.len());
    let col_of = |s| p.generators.iter().position(|&g| g == s).expect("relator letter not in generator list");
    for (i, r) in p.relators.iter().enumerate() {
        for l in &r.letters {
            let j = col_of(l.sym);
            let e = BigInt::from(l.exp);
            m[(i, j)] += e;
        }
    }
    m
}

/// Diagonal of the Smith normal form: nonnegative `d1 | d2 | ... | dk`, the
/// nonzero invariant factors (trailing zero diagonal entries are dropped).
pub fn smith_normal_form(m: &IntMatrix) -> Vec<BigInt> {
    let mut a = m.clone();
    let mut factors: Vec<BigInt> = Vec::new();
    let mut top = 0usize;

    while top < a.rows && top < a.cols {
        // Pick the nonzero entry of smallest absolute value in the
        // uneliminated block — the classic heuristic holding coefficient
        // growth down.
        let mut pivot: Option<(usize, usize)> = None;
        for i in top..a.rows {
            for j in top..a.cols {
                if !a[(i, j)].is_zero()
                    && pivot.map_or(true, |(pi, pj)| a[(i, j)].abs() < a[(pi, pj)].abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, top, pi);
        swap_cols(&mut a, top, pj);

        // Clear the pivot row and column; a nonzero remainder anywhere
        // becomes the new, strictly smaller pivot on the next sweep.
        loop {
            let mut clean = true;
            for i in (top + 1)..a.rows {
                if !a[(i, top)].is_zero() {
                    let q = div_rounded(&a[(i, top)], &a[(top, top)]);
                    row_axpy(&mut a, i, top, &q);
                    if !a[(i, top)].is_zero() {
                        swap_rows(&mut a, top, i);
                        clean = false;
                    }
                }
            }
            for j in (top + 1)..a.cols {
                if !a[(top, j)].is_zero() {
                    let q = div_rounded(&a[(top, j)], &a[(top, top)]);
                    col_axpy(&mut a, j, top, &q);
                    if !a[(top, j)].is_zero() {
                        swap_cols(&mut a, top, j);
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }

        // Enforce divisibility d_top | a[i][j]: fold a violating entry into
        // the pivot column and redo the elimination for this pivot.
        let mut violator = None;
        'scan: for i in (top + 1)..a.rows {
            for j in (top + 1)..a.cols {
                if !(&a[(i, j)] % &a[(top, top)]).is_zero() {
                    violator = Some(i);
                    break 'scan;
                }
            }
        }
        if let Some(i) = violator {
            // Add row i to row top, reintroducing off-diagonal entries whose
            // gcd with the pivot is strictly smaller.
            for j in top..a.cols {
                let add = a[(i, j)].clone();
                a[(top, j)] += add;
            }
            continue;
        }

        factors.push(a[(top, top)].abs());
        top += 1;
    }

    factors.retain(|d| !d.is_zero());
    factors
}

fn swap_rows(a: &mut IntMatrix, r: usize, s: usize) {
    if r == s {
        return;
    }
    for j in 0..a.cols {
        let x = a[(r, j)].clone();
        a[(r, j)] = a[(s, j)].clone();
        a[(s, j)] = x;
    }
}

fn swap_cols(a: &mut IntMatrix, c: usize, d: usize) {
    if c == d {
        return;
    }
    for i in 0..a.rows {
        let x = a[(i, c)].clone();
        a[(i, c)] = a[(i, d)].clone();
        a[(i, d)] = x;
    }
}

/// `row[i] -= q * row[p]`.
fn row_axpy(a: &mut IntMatrix, i: usize, p: usize, q: &BigInt) {
    for j in 0..a.cols {
        let sub = q * &a[(p, j)];
        a[(i, j)] -= sub;
    }
}

/// `col[j] -= q * col[p]`.
fn col_axpy(a: &mut IntMatrix, j: usize, p: usize, q: &BigInt) {
    for i in 0..a.rows {
        let sub = q * &a[(i, p)];
        a[(i, j)] -= sub;
    }
}

/// Quotient rounded to nearest, so the remainder satisfies `|r| <= |d|/2`.
fn div_rounded(n: &BigInt, d: &BigInt) -> BigInt {
    let (mut q, r) = n.div_rem(d);
    // Round |r| > |d|/2 toward the nearer multiple.
    if &r.abs() * 2 > d.abs() {
        if (r.is_negative()) == (d.is_negative()) {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// First homology of the presented group, as Betti number plus torsion.
/// Serializes with the torsion factors as decimal strings (they are
/// unbounded integers).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Homology {
    /// Rank of the free part of the abelianization.
    pub beta1: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<BigInt>,
}

impl Serialize for Homology {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            beta1: usize,
            torsion: Vec<String>,
        }
        Wire {
            beta1: self.beta1,
            torsion: self.torsion.iter().map(|d| d.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Homology {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            beta1: usize,
            torsion: Vec<String>,
        }
        let wire = Wire::deserialize(d)?;
        let torsion = wire
            .torsion
            .iter()
            .map(|t| t.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Homology { beta1: wire.beta1, torsion })
    }
}

impl Homology {
    /// Minimal number of generators of the abelianization:
    /// `beta1 + #torsion`.
    pub fn minimal_generators(&self) -> usize {
        self.beta1 + self.torsion.len()
    }
}

pub fn homology_of(p: &Presentation) -> Homology {
    let factors = smith_normal_form(&abelianize(p));
    let beta1 = p.generators.len() - factors.len();
    let torsion = factors.into_iter().filter(|d| d > &BigInt::from(1)).collect();
    Homology { beta1, torsion }
}
