//! Array and Tanner-style exponent matrices.
//!
//! An array code over prime `q` with shift set `Δ = {Δ_0 < … < Δ_{r0-1}}` has
//! exponent `j·Δ_i mod q` at block `(i, j)`, `0 ≤ j < n0 ≤ q`. It is *proper*
//! when `Δ = {0, 1, …, r0-1}` and *shortened* when `n0 < q`.
//!
//! The Tanner-style construction over modulus `m` uses `a^j·b^i mod m`, where
//! `a` has multiplicative order `n0` and `b` has order `r0`.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::ExponentMatrix;

/// Deterministic trial division; parameters in scope are small.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn pow_mod(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc = 1u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

/// Smallest `t > 0` with `x^t ≡ 1 (mod m)`.
pub fn multiplicative_order(x: u64, m: u64) -> Result<u64> {
    if m == 0 || gcd(x % m, m) != 1 {
        return Err(Error::NotInvertible {
            value: x,
            modulus: m,
        });
    }
    if m == 1 {
        return Ok(1);
    }
    let x = x % m;
    let mut acc = x;
    let mut t = 1;
    while acc != 1 {
        acc = acc * x % m;
        t += 1;
    }
    Ok(t)
}

/// Parameters of an array LDPC code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayCodeSpec {
    pub q: usize,
    pub n0: usize,
    pub delta: Vec<usize>,
}

impl ArrayCodeSpec {
    pub fn new(q: usize, n0: usize, delta: Vec<usize>) -> Result<Self> {
        let spec = Self { q, n0, delta };
        spec.validate()?;
        Ok(spec)
    }

    /// Proper array code: `Δ = {0, 1, …, r0-1}`.
    pub fn proper(q: usize, r0: usize, n0: usize) -> Result<Self> {
        Self::new(q, n0, (0..r0).collect())
    }

    pub fn r0(&self) -> usize {
        self.delta.len()
    }

    pub fn k0(&self) -> usize {
        self.n0 - self.r0()
    }

    /// Asymptotic rate `k0 / n0`.
    pub fn rate(&self) -> f64 {
        self.k0() as f64 / self.n0 as f64
    }

    pub fn is_proper(&self) -> bool {
        self.delta.iter().copied().eq(0..self.r0())
    }

    pub fn is_full_length(&self) -> bool {
        self.n0 == self.q
    }

    pub fn validate(&self) -> Result<()> {
        let r0 = self.r0();
        if !is_prime(self.q as u64) {
            return Err(Error::InvalidSpec(format!("q = {} is not prime", self.q)));
        }
        if !(0 < r0 && r0 < self.n0 && self.n0 <= self.q) {
            return Err(Error::InvalidSpec(format!(
                "need 0 < r0 < n0 <= q, got r0 = {r0}, n0 = {}, q = {}",
                self.n0, self.q
            )));
        }
        if !self.delta.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec(format!(
                "delta {:?} must be strictly increasing",
                self.delta
            )));
        }
        if let Some(&bad) = self.delta.iter().find(|&&d| d >= self.q) {
            return Err(Error::InvalidSpec(format!(
                "delta entry {bad} is not below q = {}",
                self.q
            )));
        }
        Ok(())
    }
}

/// Exponent matrix with entry `(i, j) = j·Δ_i mod q`.
pub fn build_array_exponents(spec: &ArrayCodeSpec) -> Result<ExponentMatrix> {
    spec.validate()?;
    let rows = spec
        .delta
        .iter()
        .map(|&d| (0..spec.n0).map(|j| j * d % spec.q).collect())
        .collect();
    ExponentMatrix::from_values(spec.q, rows)
}

/// Parameters of a Tanner-style quasi-cyclic code.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TannerCodeSpec {
    pub m: usize,
    pub a: usize,
    pub b: usize,
    pub r0: usize,
    pub n0: usize,
}

impl TannerCodeSpec {
    pub fn new(m: usize, a: usize, b: usize, r0: usize, n0: usize) -> Result<Self> {
        let spec = Self { m, a, b, r0, n0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn rate(&self) -> f64 {
        (self.n0 - self.r0) as f64 / self.n0 as f64
    }

    pub fn validate(&self) -> Result<()> {
        let (m, r0, n0) = (self.m, self.r0, self.n0);
        if r0 == 0 || r0 >= n0 {
            return Err(Error::InvalidSpec(format!(
                "need 0 < r0 < n0, got r0 = {r0}, n0 = {n0}"
            )));
        }
        if m <= r0 * n0 {
            return Err(Error::InvalidSpec(format!(
                "modulus {m} must exceed r0·n0 = {}",
                r0 * n0
            )));
        }
        if (m - 1) % r0 != 0 || (m - 1) % n0 != 0 {
            return Err(Error::InvalidSpec(format!(
                "r0 = {r0} and n0 = {n0} must both divide m - 1 = {}",
                m - 1
            )));
        }
        for (element, expected) in [(self.a, n0), (self.b, r0)] {
            let found = multiplicative_order(element as u64, m as u64)?;
            if found != expected as u64 {
                return Err(Error::OrderMismatch {
                    element: element as u64,
                    modulus: m as u64,
                    expected: expected as u64,
                    found,
                });
            }
        }
        Ok(())
    }

    /// Equivalent array-code description: the shift set `{b^i mod m}` sorted
    /// increasingly over the full-length array code with `q = m`, the block
    /// columns `a^j mod m` to keep, and for each Tanner row its row in the
    /// sorted array matrix.
    pub fn as_array_code(&self) -> Result<(ArrayCodeSpec, Vec<usize>, Vec<usize>)> {
        self.validate()?;
        let (m, a, b) = (self.m as u64, self.a as u64, self.b as u64);
        let shifts: Vec<usize> = (0..self.r0)
            .map(|i| pow_mod(b, i as u64, m) as usize)
            .collect();
        let mut delta = shifts.clone();
        delta.sort_unstable();
        let row_of = shifts
            .iter()
            .map(|s| delta.binary_search(s).expect("shift is in delta"))
            .collect();
        let keep = (0..self.n0)
            .map(|j| pow_mod(a, j as u64, m) as usize)
            .collect();
        Ok((ArrayCodeSpec::new(self.m, self.m, delta)?, keep, row_of))
    }
}

/// Exponent matrix with entry `(i, j) = a^j·b^i mod m`.
pub fn build_tanner_exponents(spec: &TannerCodeSpec) -> Result<ExponentMatrix> {
    spec.validate()?;
    let (m, a, b) = (spec.m as u64, spec.a as u64, spec.b as u64);
    let rows = (0..spec.r0)
        .map(|i| {
            let bi = pow_mod(b, i as u64, m);
            (0..spec.n0)
                .map(|j| (pow_mod(a, j as u64, m) * bi % m) as usize)
                .collect()
        })
        .collect();
    ExponentMatrix::from_values(spec.m, rows)
}

/// Keeps the listed block columns in the listed order (reordering and
/// shortening in one step).
pub fn shorten(exp: &ExponentMatrix, keep_blocks: &[usize]) -> Result<ExponentMatrix> {
    exp.select_columns(keep_blocks)
}

/// All shift sets of size `r0` over `Z_q` with `Δ_0 = 0`, in lexicographic order.
///
/// Translating every shift by a constant yields an equivalent code, so the
/// first shift is pinned to zero.
pub fn delta_sets(q: usize, r0: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut current: Option<Vec<usize>> = if r0 == 0 || r0 > q {
        None
    } else {
        Some((0..r0).collect())
    };
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // Advance the tail (positions 1..r0) to the next combination.
        let mut next = out.clone();
        let mut i = r0;
        loop {
            if i <= 1 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < q - (r0 - i) {
                next[i] += 1;
                for k in i + 1..r0 {
                    next[k] = next[k - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// Uniformly random shift set of size `r0` with `Δ_0 = 0`.
pub fn random_delta_set<R: Rng + ?Sized>(q: usize, r0: usize, rng: &mut R) -> Vec<usize> {
    assert!(0 < r0 && r0 <= q, "need 0 < r0 <= q");
    let mut delta: Vec<usize> = std::iter::once(0)
        .chain(sample(rng, q - 1, r0 - 1).into_iter().map(|d| d + 1))
        .collect();
    delta.sort_unstable();
    delta
}

/// JSON code description accepted by the command line tools.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CodeSpec {
    Array {
        q: usize,
        r0: usize,
        n0: usize,
        delta: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        keep_blocks: Option<Vec<usize>>,
    },
    Tanner {
        m: usize,
        r0: usize,
        n0: usize,
        a: usize,
        b: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        keep_blocks: Option<Vec<usize>>,
    },
}

impl CodeSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("code spec serializes")
    }

    /// Builds (and validates) the exponent matrix, applying `keep_blocks`.
    pub fn exponents(&self) -> Result<ExponentMatrix> {
        let (exp, keep) = match self {
            CodeSpec::Array {
                q,
                r0,
                n0,
                delta,
                keep_blocks,
            } => {
                if *r0 != delta.len() {
                    return Err(Error::InvalidSpec(format!(
                        "r0 = {r0} but delta has {} entries",
                        delta.len()
                    )));
                }
                let spec = ArrayCodeSpec::new(*q, *n0, delta.clone())?;
                (build_array_exponents(&spec)?, keep_blocks)
            }
            CodeSpec::Tanner {
                m,
                r0,
                n0,
                a,
                b,
                keep_blocks,
            } => {
                let spec = TannerCodeSpec::new(*m, *a, *b, *r0, *n0)?;
                (build_tanner_exponents(&spec)?, keep_blocks)
            }
        };
        match keep {
            Some(k) => shorten(&exp, k),
            None => Ok(exp),
        }
    }

    pub fn modulus(&self) -> usize {
        match self {
            CodeSpec::Array { q, .. } => *q,
            CodeSpec::Tanner { m, .. } => *m,
        }
    }
}
