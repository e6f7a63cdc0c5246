//! Segmented Moebius sieve and streaming Mertens sums.
//!
//! A base prime table up to sqrt(capacity) is built once; after that,
//! arbitrary blocks [start, start + len) can be sieved independently (and
//! concurrently — the sieve itself is immutable). mu values are stored as
//! one signed byte each, so a full 10^9 sweep streams through memory in
//! block-sized working sets instead of materializing gigabytes.

use crate::{Error, Result};
use std::io::{Read, Write};

/// Default block length, 2^20 entries: L2-cache-scale working set that
/// still amortizes the traversal of the base prime list.
pub const DEFAULT_BLOCK_LEN: usize = 1 << 20;

/// Default largest n the sieve will serve.
pub const DEFAULT_CAPACITY: u64 = 2_000_000_000;

/// A contiguous block of Moebius values: `values[i] = mu(start + i)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoebiusBlock {
    pub start: u64,
    pub values: Vec<i8>,
}

impl MoebiusBlock {
    /// Iterate as (n, mu(n)) pairs.
    pub fn iter(&self) -> impl Iterator<Item = (u64, i8)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (self.start + i as u64, v))
    }

    /// Serialize in the block-cache format: little-endian u64 start,
    /// little-endian u64 len, then len signed bytes.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&self.start.to_le_bytes())?;
        w.write_all(&(self.values.len() as u64).to_le_bytes())?;
        // i8 and u8 share a representation
        let bytes: &[u8] =
            unsafe { std::slice::from_raw_parts(self.values.as_ptr().cast(), self.values.len()) };
        w.write_all(bytes)?;
        Ok(())
    }

    /// Read one block back from the cache format.
    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut buf8 = [0u8; 8];
        r.read_exact(&mut buf8)?;
        let start = u64::from_le_bytes(buf8);
        r.read_exact(&mut buf8)?;
        let len = u64::from_le_bytes(buf8) as usize;
        let mut bytes = vec![0u8; len];
        r.read_exact(&mut bytes)?;
        let values = bytes.into_iter().map(|b| b as i8).collect();
        Ok(Self { start, values })
    }
}

/// A Mertens partial sum M(n) = sum_{k <= n} mu(k).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MertensCheckpoint {
    pub n: u64,
    pub value: i64,
}

/// Immutable sieve context: base primes up to sqrt(capacity).
#[derive(Debug)]
pub struct MoebiusSieve {
    primes: Vec<u32>,
    capacity: u64,
}

impl MoebiusSieve {
    /// Build the base prime table for blocks up to `capacity`.
    ///
    /// Capacities beyond u32 range would force 8-byte residuals per entry;
    /// they are clamped rather than silently accepted.
    pub fn new(capacity: u64) -> Self {
        let capacity = capacity.min(u32::MAX as u64);
        let limit = (capacity as f64).sqrt().ceil() as usize + 1;
        let mut is_composite = vec![false; limit + 1];
        let mut primes = Vec::new();
        for p in 2..=limit {
            if !is_composite[p] {
                primes.push(p as u32);
                let mut q = p * p;
                while q <= limit {
                    is_composite[q] = true;
                    q += p;
                }
            }
        }
        Self { primes, capacity }
    }

    pub fn with_default_capacity() -> Self {
        Self::new(DEFAULT_CAPACITY)
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    /// Exact mu values on [start, start + len).
    ///
    /// For each base prime p: one sign flip and one division per multiple
    /// of p, a zero for every multiple of p^2. Whatever residual factor
    /// remains after all base primes is a single prime > sqrt(end), hence
    /// one more sign flip.
    pub fn sieve_block(&self, start: u64, len: usize) -> Result<MoebiusBlock> {
        assert!(start >= 1 && len > 0, "block must satisfy start >= 1, len > 0");
        let end = start + len as u64; // exclusive
        if end - 1 > self.capacity {
            return Err(Error::SieveCapacity {
                requested: end - 1,
                capacity: self.capacity,
            });
        }
        let mut mu = vec![1i8; len];
        let mut rem: Vec<u32> = (0..len).map(|i| (start + i as u64) as u32).collect();

        let sqrt_end = (end as f64).sqrt() as u64 + 1;
        for &p in &self.primes {
            let p = p as u64;
            if p > sqrt_end {
                break;
            }
            let first = start.div_ceil(p) * p;
            let mut m = first;
            while m < end {
                let i = (m - start) as usize;
                mu[i] = -mu[i];
                rem[i] /= p as u32;
                m += p;
            }
            let p2 = p * p;
            let first = start.div_ceil(p2) * p2;
            let mut m = first;
            while m < end {
                mu[(m - start) as usize] = 0;
                m += p2;
            }
        }
        for i in 0..len {
            if rem[i] > 1 {
                mu[i] = -mu[i];
            }
        }
        Ok(MoebiusBlock { start, values: mu })
    }

    /// Exact M(n) by streaming blocks in ascending order.
    pub fn mertens(&self, n: u64) -> Result<MertensCheckpoint> {
        if n > self.capacity {
            return Err(Error::SieveCapacity {
                requested: n,
                capacity: self.capacity,
            });
        }
        assert!(n >= 1);
        let mut total: i64 = 0;
        let mut start = 1u64;
        while start <= n {
            let len = DEFAULT_BLOCK_LEN.min((n - start + 1) as usize);
            let block = self.sieve_block(start, len)?;
            total += block.values.iter().map(|&v| v as i64).sum::<i64>();
            start += len as u64;
        }
        Ok(MertensCheckpoint { n, value: total })
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_ten_values() {
        let sieve = MoebiusSieve::new(1000);
        let block = sieve.sieve_block(1, 10).unwrap();
        assert_eq!(block.values, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn mu_twelve_is_zero() {
        let sieve = MoebiusSieve::new(1000);
        let block = sieve.sieve_block(12, 1).unwrap();
        assert_eq!(block.values[0], 0);
    }

    #[test]
    fn block_matches_trial_division_at_one_million() {
        let sieve = MoebiusSieve::new(2_000_000);
        let block = sieve.sieve_block(1_000_000, 1000).unwrap();
        for (n, v) in block.iter() {
            assert_eq!(v, oracle::mu(n), "mu({n})");
        }
    }

    #[test]
    fn block_boundaries_do_not_matter() {
        let sieve = MoebiusSieve::new(100_000);
        let whole = sieve.sieve_block(500, 600).unwrap();
        let a = sieve.sieve_block(500, 250).unwrap();
        let b = sieve.sieve_block(750, 350).unwrap();
        let glued: Vec<i8> = a.values.iter().chain(b.values.iter()).copied().collect();
        assert_eq!(whole.values, glued);
    }

    #[test]
    fn moebius_sum_identity() {
        // sum_{d | n} mu(d) is 1 at n = 1 and 0 for n >= 2
        let sieve = MoebiusSieve::new(20_000);
        let block = sieve.sieve_block(1, 10_000).unwrap();
        let mu = |k: u64| block.values[(k - 1) as usize] as i64;
        for n in 1..=10_000u64 {
            let mut s = 0i64;
            for d in 1..=n {
                if n % d == 0 {
                    s += mu(d);
                }
            }
            assert_eq!(s, i64::from(n == 1), "divisor sum at n = {n}");
        }
    }

    #[test]
    fn mertens_small_checkpoints() {
        let sieve = MoebiusSieve::new(20_000);
        assert_eq!(sieve.mertens(1).unwrap().value, 1);
        assert_eq!(sieve.mertens(10).unwrap().value, -1);
        // brute-force oracle over trial division
        let oracle_100: i64 = (1..=100u64).map(|n| oracle::mu(n) as i64).sum();
        assert_eq!(sieve.mertens(100).unwrap().value, oracle_100);
        let oracle_10k: i64 = (1..=10_000u64).map(|n| oracle::mu(n) as i64).sum();
        assert_eq!(sieve.mertens(10_000).unwrap().value, oracle_10k);
        assert!(sieve.mertens(10_000).unwrap().value.unsigned_abs() <= 10_000);
    }

    #[test]
    fn capacity_is_enforced() {
        let sieve = MoebiusSieve::new(1000);
        assert!(matches!(
            sieve.sieve_block(990, 20),
            Err(Error::SieveCapacity { .. })
        ));
        assert!(matches!(
            sieve.mertens(1001),
            Err(Error::SieveCapacity { .. })
        ));
    }

    #[test]
    fn cache_round_trip() {
        let sieve = MoebiusSieve::new(100_000);
        let block = sieve.sieve_block(777, 4321).unwrap();
        let mut buf = Vec::new();
        block.write_to(&mut buf).unwrap();
        assert_eq!(buf.len(), 16 + 4321);
        let back = MoebiusBlock::read_from(buf.as_slice()).unwrap();
        assert_eq!(block, back);
    }
}
