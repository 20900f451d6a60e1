use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde_json::Value;

use super::{caps, ElementCodec, FiniteLattice};
use crate::error::{Error, Result};
use crate::lattice::GradedLattice;
use crate::rank::{fmt_q, parse_q, qi, Rank};

/// A subspace of `F_p^n`, stored as its reduced row-echelon basis.
///
/// RREF is unique per subspace, so derived equality is subspace equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    p: u32,
    n: u8,
    rows: Vec<Vec<u32>>,
}

impl Subspace {
    pub fn zero(p: u32, n: u8) -> Self {
        Subspace {
            p,
            n,
            rows: Vec::new(),
        }
    }

    pub fn whole(p: u32, n: u8) -> Self {
        let rows = (0..n as usize).map(|i| unit(n, i)).collect();
        Subspace { p, n, rows }
    }

    /// Span of arbitrary vectors (entries reduced mod `p`).
    pub fn span(p: u32, n: u8, vectors: &[Vec<u32>]) -> Result<Self> {
        for v in vectors {
            if v.len() != n as usize {
                return Err(Error::Mismatch(format!(
                    "vector of length {} in F^{n}",
                    v.len()
                )));
            }
        }
        let rows = vectors
            .iter()
            .map(|v| v.iter().map(|x| x % p).collect())
            .collect();
        Ok(Subspace {
            p,
            n,
            rows: rref(rows, p),
        })
    }

    /// `span(e_{i+1} : i ∈ idx)` for 0-based coordinates.
    pub fn coordinate(p: u32, n: u8, idx: &[usize]) -> Self {
        let vs: Vec<Vec<u32>> = idx.iter().map(|&i| unit(n, i)).collect();
        Subspace {
            p,
            n,
            rows: rref(vs, p),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn canonicalize(&self) -> Self {
        Subspace {
            p: self.p,
            n: self.n,
            rows: rref(self.rows.clone(), self.p),
        }
    }

    /// Membership by rank test: adding `v` does not grow the basis.
    pub fn contains(&self, v: &[u32]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.iter().map(|x| x % self.p).collect());
        rref(rows, self.p).len() == self.rows.len()
    }
}

impl std::fmt::Display for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(u32::to_string).collect::<String>())
            .collect();
        write!(f, "<{}>", rows.join(","))
    }
}

fn unit(n: u8, i: usize) -> Vec<u32> {
    let mut v = vec![0; n as usize];
    v[i] = 1;
    v
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// Reduced row-echelon form over `F_p`, zero rows dropped.
pub(crate) fn rref(mut rows: Vec<Vec<u32>>, p: u32) -> Vec<Vec<u32>> {
    let cols = rows.first().map_or(0, Vec::len);
    let pm = p as u64;
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = inv_mod(rows[r][c], p) as u64;
        for x in rows[r].iter_mut() {
            *x = (*x as u64 * inv % pm) as u32;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c] as u64;
                let pivot = rows[r].clone();
                for (x, &y) in rows[i].iter_mut().zip(&pivot) {
                    let sub = f * y as u64 % pm;
                    *x = ((*x as u64 + pm - sub) % pm) as u32;
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

/// Basis of `{x : M x = 0}` for `M` given by rows of length `cols`.
fn kernel(rows: Vec<Vec<u32>>, cols: usize, p: u32) -> Vec<Vec<u32>> {
    let red = rref(rows, p);
    let pivots: Vec<usize> = red
        .iter()
        .map(|r| {
            r.iter()
                .position(|&x| x != 0)
                .expect("rref rows are nonzero")
        })
        .collect();
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0u32; cols];
            v[free] = 1;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = (p - row[free]) % p;
            }
            v
        })
        .collect()
}

fn is_prime(p: u32) -> bool {
    p >= 2
        && (2..)
            .take_while(|d| d * d <= p)
            .all(|d| !p.is_multiple_of(d))
}

/// The lattice of subspaces of `F_p^n`; meet is intersection, join is sum,
/// rank is dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceLattice {
    p: u32,
    n: u8,
}

impl SubspaceLattice {
    pub fn new(p: u32, n: u8) -> Result<Self> {
        if !is_prime(p) || p > caps::SUBSPACE_PRIME {
            return Err(Error::Mismatch(format!("{p} is not a supported prime")));
        }
        if n as usize > caps::SUBSPACE_DIM {
            return Err(Error::SizeCap {
                what: "subspace ambient dimension".into(),
                limit: caps::SUBSPACE_DIM,
            });
        }
        Ok(SubspaceLattice { p, n })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn span(&self, vectors: &[Vec<u32>]) -> Result<Subspace> {
        Subspace::span(self.p, self.n, vectors)
    }

    /// The coordinate flag `0 ⊂ ⟨e1⟩ ⊂ ⟨e1,e2⟩ ⊂ …`.
    pub fn coordinate_flag(&self) -> Vec<Subspace> {
        (0..=self.n as usize)
            .map(|k| Subspace::coordinate(self.p, self.n, &(0..k).collect::<Vec<_>>()))
            .collect()
    }
}

impl GradedLattice for SubspaceLattice {
    type Elem = Subspace;

    /// Solves `Σ xᵢuᵢ = Σ yⱼwⱼ` through the kernel of the stacked system
    /// `[u₁ … u_a | w₁ … w_b]` and maps kernel vectors back through `U`.
    fn meet(&self, u: &Subspace, w: &Subspace) -> Subspace {
        let (a, b, n) = (u.dim(), w.dim(), self.n as usize);
        if a == 0 || b == 0 {
            return Subspace::zero(self.p, self.n);
        }
        let system: Vec<Vec<u32>> = (0..n)
            .map(|i| u.rows.iter().chain(&w.rows).map(|col| col[i]).collect())
            .collect();
        let p = self.p as u64;
        let vecs: Vec<Vec<u32>> = kernel(system, a + b, self.p)
            .into_iter()
            .map(|k| {
                (0..n)
                    .map(|i| {
                        let s: u64 = (0..a).map(|j| k[j] as u64 * u.rows[j][i] as u64 % p).sum();
                        (s % p) as u32
                    })
                    .collect()
            })
            .collect();
        Subspace {
            p: self.p,
            n: self.n,
            rows: rref(vecs, self.p),
        }
    }

    fn join(&self, u: &Subspace, w: &Subspace) -> Subspace {
        let rows = u.rows.iter().chain(&w.rows).cloned().collect();
        Subspace {
            p: self.p,
            n: self.n,
            rows: rref(rows, self.p),
        }
    }

    fn rank(&self, x: &Subspace) -> Rank {
        Rank::int(x.dim() as i64)
    }

    fn bottom(&self) -> Option<Subspace> {
        Some(Subspace::zero(self.p, self.n))
    }

    fn top(&self) -> Option<Subspace> {
        Some(Subspace::whole(self.p, self.n))
    }

    fn validate(&self, x: &Subspace) -> Result<()> {
        if x.p != self.p || x.n != self.n {
            return Err(Error::Mismatch(format!(
                "subspace of F_{}^{} used in F_{}^{}",
                x.p, x.n, self.p, self.n
            )));
        }
        Ok(())
    }
}

impl FiniteLattice for SubspaceLattice {
    /// Enumerates every RREF matrix: choose pivot columns, then fill the
    /// non-pivot entries to the right of each pivot freely.
    fn elements(&self) -> Result<Vec<Subspace>> {
        let n = self.n as usize;
        let mut out = Vec::new();
        for mask in 0u32..(1 << n) {
            let pivots: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let free: Vec<(usize, usize)> = pivots
                .iter()
                .enumerate()
                .flat_map(|(r, &pc)| {
                    let pivots = &pivots;
                    (pc + 1..n)
                        .filter(move |c| !pivots.contains(c))
                        .map(move |c| (r, c))
                })
                .collect();
            let combos = (self.p as usize)
                .checked_pow(free.len() as u32)
                .unwrap_or(usize::MAX);
            if out.len().saturating_add(combos) > caps::ENUMERATED_ELEMENTS {
                return Err(Error::SizeCap {
                    what: format!("subspaces of F_{}^{}", self.p, n),
                    limit: caps::ENUMERATED_ELEMENTS,
                });
            }
            for mut code in 0..combos {
                let mut rows: Vec<Vec<u32>> = pivots.iter().map(|&pc| unit(self.n, pc)).collect();
                for &(r, c) in &free {
                    rows[r][c] = (code % self.p as usize) as u32;
                    code /= self.p as usize;
                }
                out.push(Subspace {
                    p: self.p,
                    n: self.n,
                    rows,
                });
            }
        }
        Ok(out)
    }
}

impl ElementCodec for SubspaceLattice {
    /// Row-major matrix of `"p/q"` strings (entries are integers in `0..p`).
    fn encode_json(&self, x: &Subspace) -> Value {
        Value::from(
            x.rows
                .iter()
                .map(|r| r.iter().map(|&e| fmt_q(&qi(e as i64))).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        )
    }

    fn decode_json(&self, v: &Value) -> Result<Subspace> {
        let rows: Vec<Vec<String>> = serde_json::from_value(v.clone())?;
        let p = BigInt::from(self.p);
        let vectors = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        let x = parse_q(s)?;
                        let den = x.denom().mod_floor(&p);
                        if den == BigInt::from(0) {
                            return Err(Error::Mismatch(format!(
                                "{s} is undefined mod {}",
                                self.p
                            )));
                        }
                        let num = x.numer().mod_floor(&p).to_u32().unwrap_or(0);
                        let den = den.to_u32().unwrap_or(1);
                        Ok((num as u64 * inv_mod(den, self.p) as u64 % self.p as u64) as u32)
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        self.span(&vectors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| (0..p).map(move |x| [v.clone(), vec![x]].concat()))
                .collect();
        }
        out
    }

    #[test]
    fn gaussian_binomial_counts() {
        // Number of subspaces of F_2^n: 1, 2, 5, 16, 67.
        let counts: Vec<usize> = (0..=4)
            .map(|n| {
                SubspaceLattice::new(2, n)
                    .unwrap()
                    .elements()
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(counts, vec![1, 2, 5, 16, 67]);
        assert_eq!(
            SubspaceLattice::new(3, 2)
                .unwrap()
                .elements()
                .unwrap()
                .len(),
            6
        );
    }

    #[test]
    fn independent_lines_meet_in_zero() {
        let l = SubspaceLattice::new(2, 3).unwrap();
        let e1 = Subspace::coordinate(2, 3, &[0]);
        let e2 = Subspace::coordinate(2, 3, &[1]);
        assert_eq!(l.meet(&e1, &e2), Subspace::zero(2, 3));
        assert_eq!(l.join(&e1, &e2).dim(), 2);
    }

    #[test]
    fn meet_matches_vector_enumeration() {
        // Brute force: U ∩ W is the set of vectors lying in both.
        for (p, n) in [(2u32, 3u8), (3, 2)] {
            let l = SubspaceLattice::new(p, n).unwrap();
            let elems = l.elements().unwrap();
            let vs = all_vectors(p, n as usize);
            for u in &elems {
                for w in &elems {
                    let m = l.meet(u, w);
                    for v in &vs {
                        assert_eq!(m.contains(v), u.contains(v) && w.contains(v), "{u} ∧ {w}");
                    }
                    assert_eq!(m.dim() + l.join(u, w).dim(), u.dim() + w.dim());
                }
            }
        }
    }

    #[test]
    fn rejects_non_primes_and_large_dimensions() {
        assert!(SubspaceLattice::new(4, 2).is_err());
        assert!(SubspaceLattice::new(2, 7).is_err());
        let l = SubspaceLattice::new(2, 2).unwrap();
        assert!(l.validate(&Subspace::zero(3, 2)).is_err());
    }

    #[test]
    fn json_rows_reduce_mod_p() {
        let l = SubspaceLattice::new(3, 2).unwrap();
        let s = l.decode_json(&serde_json::json!([["2/1", "1/2"]])).unwrap();
        // (2, 2) spans the same line as (1, 1).
        assert_eq!(s, l.span(&[vec![1, 1]]).unwrap());
        assert_eq!(l.encode_json(&s), serde_json::json!([["1/1", "1/1"]]));
        assert!(l.decode_json(&serde_json::json!([["1/3", "0/1"]])).is_err());
    }
}
