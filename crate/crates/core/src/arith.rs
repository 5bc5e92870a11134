//! Word-sized modular arithmetic and the residue bit set shared by the
//! local-data and sieve layers.

/// All primes `p <= limit`, by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

/// Trial-division primality test. Only used on small moduli.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
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

/// True when no prime square divides `n`.
pub fn is_squarefree(mut n: u64) -> bool {
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return false;
            }
        }
        d += 1;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Legendre symbol (a/p) for an odd prime p via Euler's criterion.
pub fn legendre(a: u64, p: u64) -> i32 {
    debug_assert!(p > 2);
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// A square root of `a` modulo the prime `p`, if one exists (Tonelli–Shanks).
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 || p == 2 {
        return Some(a);
    }
    if legendre(a, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q.is_multiple_of(2) {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while legendre(z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mul_mod(t2, t2, p);
            i += 1;
        }
        let b = pow_mod(c, 1 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}

/// Inverse of a unit `a` modulo the prime `p` (Fermat).
pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Fixed-length bit set over residues `0..len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueSet {
    len: u64,
    words: Vec<u64>,
}

impl ResidueSet {
    pub fn new(len: u64) -> Self {
        ResidueSet {
            len,
            words: vec![0; len.div_ceil(64) as usize],
        }
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, r: u64) -> bool {
        r < self.len && self.words[(r / 64) as usize] >> (r % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, r: u64) {
        assert!(r < self.len, "residue {r} out of range {}", self.len);
        self.words[(r / 64) as usize] |= 1 << (r % 64);
    }

    /// Number of residues in the set.
    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.len).filter(move |&r| self.contains(r))
    }

    /// Little-endian packing: residue `r` is bit `r % 8` of byte `r / 8`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let n = self.len.div_ceil(8) as usize;
        (0..n)
            .map(|i| (self.words[i / 8] >> ((i % 8) * 8)) as u8)
            .collect()
    }

    /// Inverse of [`ResidueSet::to_bytes`]. Rejects wrong lengths and bits set past `len`.
    pub fn from_bytes(len: u64, bytes: &[u8]) -> Option<Self> {
        if bytes.len() as u64 != len.div_ceil(8) {
            return None;
        }
        let mut set = ResidueSet::new(len);
        for (i, &b) in bytes.iter().enumerate() {
            for bit in 0..8 {
                if b >> bit & 1 == 1 {
                    let r = i as u64 * 8 + bit;
                    if r >= len {
                        return None;
                    }
                    set.insert(r);
                }
            }
        }
        Some(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(primes_up_to(10), vec![2, 3, 5, 7]);
        assert_eq!(primes_up_to(30).len(), 10);
        assert!(primes_up_to(1000).iter().all(|&p| is_prime(p)));
    }

    #[test]
    fn squarefree() {
        assert!(is_squarefree(1));
        assert!(is_squarefree(30));
        assert!(!is_squarefree(12));
        assert!(!is_squarefree(49));
    }

    #[test]
    fn sqrt_mod_matches_brute_force() {
        for p in primes_up_to(300) {
            for a in 0..p {
                let brute = (0..p).any(|v| v * v % p == a);
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(r * r % p, a, "p={p} a={a}"),
                    None => assert!(!brute, "p={p} a={a}"),
                }
            }
        }
    }

    #[test]
    fn euler_criterion() {
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(3, 7), -1);
        assert_eq!(legendre(14, 7), 0);
    }

    #[test]
    fn residue_set_bytes() {
        let mut set = ResidueSet::new(10);
        for r in [0, 2, 4, 9] {
            set.insert(r);
        }
        assert_eq!(set.count(), 4);
        assert_eq!(set.to_bytes(), vec![0b0001_0101, 0b0000_0010]);
        assert_eq!(ResidueSet::from_bytes(10, &set.to_bytes()), Some(set));
        assert_eq!(ResidueSet::from_bytes(10, &[0, 0b100]), None);
    }
}
