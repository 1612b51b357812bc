//! Min-sum subset convolution.
//!
//! `(g * h)(Y) = min { g(Q) + h(R) : Q ∪ R = Y, Q ∩ R = ∅ }` over tables
//! indexed by subsets of a small ground set. The naive route enumerates all
//! `3^m` pairs. The fast route splits each table into one indicator layer
//! per value, runs ranked zeta transforms, multiplies layers pointwise
//! (counting the disjoint pairs that realise every sum), inverts with
//! ranked Möbius transforms and reads off the smallest realised sum.

use thiserror::Error;

/// Table entry: a natural number or [`INFINITY`].
pub type Value = u32;

/// Absorbing sentinel for "no solution".
pub const INFINITY: Value = Value::MAX;

/// Saturating addition on extended naturals: `∞ + v = ∞`.
#[inline]
pub fn add(a: Value, b: Value) -> Value {
    if a == INFINITY || b == INFINITY {
        INFINITY
    } else {
        a.saturating_add(b).min(INFINITY - 1)
    }
}

/// Ground sets of at most this many elements always use the naive route.
pub const NAIVE_CROSSOVER: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvolutionError {
    #[error("tables are over different ground sets")]
    GroundMismatch,
    #[error("expected {expected} values for a ground set of {m} elements, got {got}")]
    BadLength { m: usize, expected: usize, got: usize },
    #[error("value {value} exceeds the declared bound {bound}")]
    ValueAboveBound { value: Value, bound: Value },
}

/// Dense table `2^U -> ℕ ∪ {∞}`, indexed by bitmask over `ground`
/// (bit `i` stands for `ground[i]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinSumTable {
    ground: Vec<usize>,
    values: Vec<Value>,
}

impl MinSumTable {
    pub fn new(ground: Vec<usize>, values: Vec<Value>) -> Result<Self, ConvolutionError> {
        let expected = 1usize << ground.len();
        if values.len() != expected {
            return Err(ConvolutionError::BadLength {
                m: ground.len(),
                expected,
                got: values.len(),
            });
        }
        Ok(Self { ground, values })
    }

    /// Table equal to `value` everywhere.
    pub fn filled(ground: Vec<usize>, value: Value) -> Self {
        let len = 1usize << ground.len();
        Self {
            ground,
            values: vec![value; len],
        }
    }

    /// The neutral element: 0 on the empty set, ∞ elsewhere.
    pub fn identity(ground: Vec<usize>) -> Self {
        let mut t = Self::filled(ground, INFINITY);
        t.values[0] = 0;
        t
    }

    pub fn ground(&self) -> &[usize] {
        &self.ground
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Value> {
        self.values
    }

    pub fn get(&self, mask: usize) -> Value {
        self.values[mask]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

fn same_ground(g: &MinSumTable, h: &MinSumTable) -> Result<(), ConvolutionError> {
    if g.ground != h.ground {
        return Err(ConvolutionError::GroundMismatch);
    }
    Ok(())
}

/// Exact convolution by enumerating every `Q ⊆ Y`; `O(3^m)`.
pub fn convolve_naive(g: &MinSumTable, h: &MinSumTable) -> Result<MinSumTable, ConvolutionError> {
    same_ground(g, h)?;
    let values = (0..g.len())
        .map(|y| {
            let mut best = add(g.values[0], h.values[y]);
            let mut q = y;
            while q != 0 {
                best = best.min(add(g.values[q], h.values[y ^ q]));
                q = (q - 1) & y;
            }
            best
        })
        .collect();
    Ok(MinSumTable {
        ground: g.ground.clone(),
        values,
    })
}

/// Fast convolution for tables whose finite values are at most `bound`.
/// Small ground sets go through [`convolve_naive`]; the output is the same
/// either way.
pub fn convolve_fast(g: &MinSumTable, h: &MinSumTable, bound: Value) -> Result<MinSumTable, ConvolutionError> {
    same_ground(g, h)?;
    check_bound(g, bound)?;
    check_bound(h, bound)?;
    if g.ground.len() <= NAIVE_CROSSOVER {
        return convolve_naive(g, h);
    }
    convolve_layered(g, h, bound)
}

fn check_bound(t: &MinSumTable, bound: Value) -> Result<(), ConvolutionError> {
    match t.values.iter().find(|&&v| v != INFINITY && v > bound) {
        Some(&value) => Err(ConvolutionError::ValueAboveBound { value, bound }),
        None => Ok(()),
    }
}

/// Finite value range `(min, max)` of a table, `None` if all entries are ∞.
fn finite_range(t: &MinSumTable) -> Option<(Value, Value)> {
    t.values
        .iter()
        .filter(|&&v| v != INFINITY)
        .fold(None, |acc, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

/// Ranked zeta transforms of the indicator layers `[t(S) = lo + j]`,
/// indexed `[j][rank][mask]`.
fn value_layers(t: &MinSumTable, lo: Value, hi: Value) -> Vec<Vec<Vec<i64>>> {
    let m = t.ground.len();
    (lo..=hi)
        .map(|value| {
            let layer: Vec<i64> = t.values.iter().map(|&v| i64::from(v == value)).collect();
            zeta_ranked(&layer, m)
        })
        .collect()
}

/// The transform-based route without the small-ground-set shortcut.
///
/// Every finite value is shifted down by the table minimum so the number of
/// layers is the width of the value range, not the bound itself. Sums are
/// kept in full, so the result agrees with [`convolve_naive`] entry for
/// entry.
pub fn convolve_layered(g: &MinSumTable, h: &MinSumTable, bound: Value) -> Result<MinSumTable, ConvolutionError> {
    same_ground(g, h)?;
    check_bound(g, bound)?;
    check_bound(h, bound)?;
    let m = g.ground.len();
    let size = 1usize << m;
    let (Some((g_lo, g_hi)), Some((h_lo, h_hi))) = (finite_range(g), finite_range(h)) else {
        return Ok(MinSumTable::filled(g.ground.clone(), INFINITY));
    };
    let g_layers = value_layers(g, g_lo, g_hi);
    let h_layers = value_layers(h, h_lo, h_hi);
    let popcount: Vec<usize> = (0..size).map(|s: usize| s.count_ones() as usize).collect();
    let mut result = vec![INFINITY; size];
    let sum_span = g_layers.len() + h_layers.len() - 1;
    let mut product = vec![0i64; size];
    // Smallest shifted sum first, so each subset keeps the first value
    // realised for it.
    let mut unresolved = size;
    'sums: for w in 0..sum_span {
        for rank in 0..=m {
            product.iter_mut().for_each(|p| *p = 0);
            let mut touched = false;
            for (j, g_ranked) in g_layers.iter().enumerate() {
                let Some(h_ranked) = w.checked_sub(j).and_then(|l| h_layers.get(l)) else {
                    continue;
                };
                for i in 0..=rank {
                    let (a, b) = (&g_ranked[i], &h_ranked[rank - i]);
                    for s in 0..size {
                        product[s] += a[s] * b[s];
                    }
                    touched = true;
                }
            }
            if !touched {
                continue;
            }
            moebius_in_place(&mut product);
            for s in 0..size {
                if popcount[s] == rank && product[s] != 0 && result[s] == INFINITY {
                    result[s] = g_lo + h_lo + w as Value;
                    unresolved -= 1;
                }
            }
            if unresolved == 0 {
                break 'sums;
            }
        }
    }
    Ok(MinSumTable {
        ground: g.ground.clone(),
        values: result,
    })
}

/// Subset-sum (zeta) transform: `f(S) <- Σ_{T ⊆ S} f(T)`.
pub fn zeta_in_place(values: &mut [i64]) {
    let size = values.len();
    debug_assert!(size.is_power_of_two());
    let mut bit = 1;
    while bit < size {
        for s in 0..size {
            if s & bit != 0 {
                values[s] += values[s ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// Inverse of [`zeta_in_place`].
pub fn moebius_in_place(values: &mut [i64]) {
    let size = values.len();
    debug_assert!(size.is_power_of_two());
    let mut bit = 1;
    while bit < size {
        for s in 0..size {
            if s & bit != 0 {
                values[s] -= values[s ^ bit];
            }
        }
        bit <<= 1;
    }
}

/// Splits `layer` by subset cardinality and zeta-transforms each slice;
/// returns `m + 1` slices indexed by rank.
pub fn zeta_ranked(layer: &[i64], m: usize) -> Vec<Vec<i64>> {
    let size = 1usize << m;
    assert_eq!(layer.len(), size, "layer length must be 2^m");
    (0..=m)
        .map(|rank| {
            let mut slice: Vec<i64> = (0..size)
                .map(|s: usize| if s.count_ones() as usize == rank { layer[s] } else { 0 })
                .collect();
            zeta_in_place(&mut slice);
            slice
        })
        .collect()
}

/// Möbius-transforms every ranked slice; inverts [`zeta_ranked`].
pub fn moebius_ranked(mut ranked: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    for slice in &mut ranked {
        moebius_in_place(slice);
    }
    ranked
}
