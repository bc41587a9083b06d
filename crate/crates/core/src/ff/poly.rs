//! Dense polynomials over a prime field, little-endian coefficient vectors.

pub(crate) fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // p is prime, so a^(p-2) is the inverse.
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(base: u32, mut exp: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64 % p64;
    let mut b = base as u64 % p64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p64;
        }
        b = b * b % p64;
        exp >>= 1;
    }
    acc as u32
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo `m` (m nonzero).
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let dm = degree(m).expect("nonzero modulus");
    let lead_inv = inv_mod(m[dm], p) as u64;
    let mut r: Vec<u64> = a.iter().map(|&c| c as u64).collect();
    let p64 = p as u64;
    let mut top = r.len();
    while top > dm {
        top -= 1;
        let c = r[top] % p64;
        if c == 0 {
            continue;
        }
        let factor = c * lead_inv % p64;
        let shift = top - dm;
        for (k, &mk) in m.iter().enumerate().take(dm + 1) {
            let sub = factor * mk as u64 % p64;
            r[shift + k] = (r[shift + k] + p64 - sub) % p64;
        }
    }
    r.truncate(dm);
    trim(r.into_iter().map(|c| (c % p64) as u32).collect())
}

/// Irreducibility of `m` (degree r) by trial division with every monic
/// polynomial of degree 1..=r/2.
pub(crate) fn is_irreducible(m: &[u32], p: u32) -> bool {
    let Some(r) = degree(m) else {
        return false;
    };
    if r == 0 {
        return false;
    }
    for d in 1..=r / 2 {
        let count = (p as u64).pow(d as u32);
        for idx in 0..count {
            // monic divisor: low d coefficients from idx, leading 1
            let mut div = Vec::with_capacity(d + 1);
            let mut rest = idx;
            for _ in 0..d {
                div.push((rest % p as u64) as u32);
                rest /= p as u64;
            }
            div.push(1);
            if rem(m, &div, p).is_empty() {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibility() {
        assert!(is_irreducible(&[1, 1, 1], 2)); // x^2+x+1
        assert!(!is_irreducible(&[1, 0, 1], 2)); // (x+1)^2
        assert!(is_irreducible(&[1, 0, 1], 3)); // x^2+1 over F3
        assert!(!is_irreducible(&[1, 0, 0, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        assert!(is_irreducible(&[0, 1], 5));
    }

    #[test]
    fn remainder_matches_hand_division() {
        // x^3 mod (x^2+x+1) over F2 = 1
        assert_eq!(rem(&[0, 0, 0, 1], &[1, 1, 1], 2), vec![1]);
        // (x^2+2x+1)(x+1) = x^3+3x^2+3x+1 over F5
        let prod = mul(&[1, 2, 1], &[1, 1], 5);
        assert_eq!(prod, vec![1, 3, 3, 1]);
        assert!(rem(&prod, &[1, 1], 5).is_empty());
    }
}
