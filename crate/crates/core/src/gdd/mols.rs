//! Mutually orthogonal Latin squares: cyclic squares, the finite-field
//! construction for prime powers, and the MacNeish direct product.

use super::GddError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    rows: Vec<Vec<usize>>,
}

impl LatinSquare {
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self, GddError> {
        let n = rows.len();
        let ok = rows.iter().all(|r| r.len() == n)
            && (0..n).all(|i| {
                let mut row = vec![false; n];
                let mut col = vec![false; n];
                (0..n).all(|j| {
                    let (a, b) = (rows[i][j], rows[j][i]);
                    a < n
                        && b < n
                        && !std::mem::replace(&mut row[a], true)
                        && !std::mem::replace(&mut col[b], true)
                })
            });
        if !ok {
            return Err(GddError::Internal("not a Latin square".into()));
        }
        Ok(LatinSquare { n, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.rows[i][j]
    }

    /// Cyclic square `(i + j) mod n`.
    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (i + j) % n).collect())
            .collect();
        LatinSquare { n, rows }
    }

    pub fn is_orthogonal_to(&self, other: &LatinSquare) -> bool {
        if self.n != other.n {
            return false;
        }
        let n = self.n;
        let mut seen = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                let key = self.rows[i][j] * n + other.rows[i][j];
                if std::mem::replace(&mut seen[key], true) {
                    return false;
                }
            }
        }
        true
    }
}

/// `count` pairwise orthogonal Latin squares of side `n`.
///
/// One square exists for every `n` (cyclic). For more, prime powers get the
/// finite-field family (up to `q - 1` squares) and composite orders the
/// MacNeish direct product; beyond that the order is unsupported here and
/// callers fall back to exact cover or ingestion.
pub fn mols(n: usize, count: usize) -> Result<Vec<LatinSquare>, GddError> {
    if n == 0 || count == 0 {
        return Err(GddError::Unsupported(format!("mols({n}, {count})")));
    }
    if count == 1 {
        return Ok(vec![LatinSquare::cyclic(n)]);
    }
    if n == 1 {
        return Ok(vec![LatinSquare::cyclic(1); count]);
    }
    if macneish_bound(n) < count {
        return Err(GddError::Unsupported(format!(
            "{count} MOLS of side {n} not constructible here"
        )));
    }
    let squares = mols_unchecked(n, count);
    debug_assert!(
        (0..count).all(|a| (a + 1..count).all(|b| squares[a].is_orthogonal_to(&squares[b])))
    );
    Ok(squares)
}

/// min over prime-power factors q of (q - 1).
fn macneish_bound(n: usize) -> usize {
    factor_prime_powers(n)
        .into_iter()
        .map(|q| q - 1)
        .min()
        .unwrap_or(0)
}

fn factor_prime_powers(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut q = 1;
            while n % p == 0 {
                q *= p;
                n /= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn mols_unchecked(n: usize, count: usize) -> Vec<LatinSquare> {
    let factors = factor_prime_powers(n);
    if factors.len() == 1 {
        return field_mols(n, count);
    }
    // MacNeish product over coprime factors
    let a = factors[0];
    let b = n / a;
    let left = mols_unchecked(a, count);
    let right = mols_unchecked(b, count);
    (0..count)
        .map(|m| {
            let rows = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| {
                            let (i1, i2) = (i / b, i % b);
                            let (j1, j2) = (j / b, j % b);
                            left[m].get(i1, j1) * b + right[m].get(i2, j2)
                        })
                        .collect()
                })
                .collect();
            LatinSquare { n, rows }
        })
        .collect()
}

/// `L_a(i, j) = a*i + j` over GF(q) for the first `count` nonzero `a`.
fn field_mols(q: usize, count: usize) -> Vec<LatinSquare> {
    let f = Field::new(q);
    (1..=count)
        .map(|a| {
            let rows = (0..q)
                .map(|i| (0..q).map(|j| f.add(f.mul(a, i), j)).collect())
                .collect();
            LatinSquare { n: q, rows }
        })
        .collect()
}

/// GF(p^k) with elements encoded as base-p digit strings (polynomial
/// coefficients, least significant first).
struct Field {
    p: usize,
    k: usize,
    q: usize,
    irreducible: Vec<usize>, // monic degree-k polynomial coefficients 0..k
}

impl Field {
    fn new(q: usize) -> Field {
        let p = (2..=q).find(|&p| q % p == 0).expect("q >= 2");
        let mut k = 0;
        let mut m = q;
        while m > 1 {
            assert_eq!(m % p, 0, "{q} is not a prime power");
            m /= p;
            k += 1;
        }
        let irreducible = find_irreducible(p, k);
        Field {
            p,
            k,
            q,
            irreducible,
        }
    }

    fn digits(&self, mut x: usize) -> Vec<usize> {
        let mut d = vec![0; self.k];
        for slot in d.iter_mut() {
            *slot = x % self.p;
            x /= self.p;
        }
        d
    }

    fn pack(&self, d: &[usize]) -> usize {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.pack(&sum)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0usize; 2 * self.k];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        // reduce modulo the irreducible polynomial
        for d in (self.k..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (t, &ic) in self.irreducible.iter().enumerate().take(self.k) {
                let idx = d - self.k + t;
                prod[idx] = (prod[idx] + c * (self.p - ic % self.p)) % self.p;
            }
        }
        prod.truncate(self.k);
        let _ = self.q;
        self.pack(&prod)
    }
}

/// Smallest monic irreducible polynomial of degree k over GF(p), found by
/// checking divisibility by every lower-degree monic polynomial.
fn find_irreducible(p: usize, k: usize) -> Vec<usize> {
    if k == 1 {
        return vec![0]; // x
    }
    let total = p.pow(k as u32);
    'cand: for code in 0..total {
        let mut poly = Vec::with_capacity(k + 1);
        let mut c = code;
        for _ in 0..k {
            poly.push(c % p);
            c /= p;
        }
        poly.push(1); // monic
        for deg in 1..=k / 2 {
            let dtotal = p.pow(deg as u32);
            for dcode in 0..dtotal {
                let mut div = Vec::with_capacity(deg + 1);
                let mut c = dcode;
                for _ in 0..deg {
                    div.push(c % p);
                    c /= p;
                }
                div.push(1);
                if divides(&div, &poly, p) {
                    continue 'cand;
                }
            }
        }
        return poly[..k].to_vec();
    }
    unreachable!("irreducible polynomial exists for every prime power")
}

fn divides(div: &[usize], poly: &[usize], p: usize) -> bool {
    let mut rem: Vec<usize> = poly.to_vec();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        if lead != 0 {
            let shift = rem.len() - 1 - dd;
            for (i, &c) in div.iter().enumerate() {
                let idx = shift + i;
                rem[idx] = (rem[idx] + lead * (p - c % p)) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}
