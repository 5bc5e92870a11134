use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer polynomial in one variable, lowest degree first.
///
/// The coefficient vector never carries trailing zeros; the zero polynomial is
/// the empty vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UnivariatePoly {
    coeffs: Vec<BigInt>,
}

impl UnivariatePoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Sign of the value at `x` as -1, 0 or 1.
    pub fn sign_at(&self, x: &BigInt) -> i8 {
        let v = self.eval(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        Self::new(coeffs)
    }

    /// Multiplicity of 0 as a root, and the cofactor `self / V^k`.
    pub fn split_zero_root(&self) -> (usize, Self) {
        let k = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        (k, Self::new(self.coeffs[k..].to_vec()))
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.leading().unwrap().is_negative() {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    fn scaled(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Pseudo-remainder: `lc(d)^(deg self - deg d + 1) * self mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo-division by zero polynomial");
        let lc = d.leading().unwrap().clone();
        let mut r = self.clone();
        let Some(dr) = r.degree() else {
            return r;
        };
        if dr < dd {
            return r;
        }
        let mut steps = dr - dd + 1;
        while let Some(deg) = r.degree() {
            if deg < dd {
                break;
            }
            let lead = r.leading().unwrap().clone();
            let shift = deg - dd;
            let mut next: Vec<BigInt> = r.coeffs.iter().map(|c| c * &lc).collect();
            for (k, c) in d.coeffs.iter().enumerate() {
                next[k + shift] -= &lead * c;
            }
            r = Self::new(next);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scaled(&num_traits::pow(lc, steps));
        }
        r
    }

    /// Exact quotient `self / d` when `d` divides `self` in `Z[V]`.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        let dd = d.degree()?;
        let lc = d.leading().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return r.iter().all(Zero::is_zero).then(Self::zero);
        }
        let mut q = vec![BigInt::zero(); r.len() - dd];
        for shift in (0..q.len()).rev() {
            let top = &r[shift + dd];
            let (quo, rem) = top.div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            for (k, c) in d.coeffs.iter().enumerate() {
                r[k + shift] -= &quo * c;
            }
            q[shift] = quo;
        }
        r.iter().all(Zero::is_zero).then(|| Self::new(q))
    }

    /// Primitive gcd over `Z[V]` by the primitive remainder sequence.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.primitive();
        let mut b = other.primitive();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive();
            a = b;
            b = r;
        }
        a
    }

    /// The squarefree part `self / gcd(self, self')`, primitive.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive();
        }
        let g = self.gcd(&self.derivative());
        self.primitive()
            .exact_div(&g)
            .expect("gcd divides its argument")
            .primitive()
    }

    /// Cauchy bound `1 + max |a_i| / |a_deg|`, rounded up. All real roots lie
    /// in `[-B, B]`.
    pub fn cauchy_bound(&self) -> BigInt {
        let Some(lead) = self.leading() else {
            return BigInt::zero();
        };
        let lead = lead.abs();
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_default();
        BigInt::one() + Integer::div_ceil(&max, &lead)
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sep = match (first, c.is_negative()) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            f.write_str(sep)?;
            let mag = c.abs();
            match (k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => f.write_str("V")?,
                (1, false) => write!(f, "{mag}*V")?,
                (_, true) => write!(f, "V^{k}")?,
                (_, false) => write!(f, "{mag}*V^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> UnivariatePoly {
        UnivariatePoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(poly(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(poly(&[0, 0]).is_zero());
        assert_eq!(poly(&[0]).degree(), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        // (V-1)^2 (V+2) = V^3 - 3V + 2
        let f = poly(&[2, -3, 0, 1]);
        assert_eq!(f.gcd(&f.derivative()), poly(&[-1, 1]));
        assert_eq!(f.squarefree_part(), poly(&[-2, 1, 1]));
        // 6V^2 - 6 = 6 (V-1)(V+1)
        assert_eq!(poly(&[-6, 0, 6]).squarefree_part(), poly(&[-1, 0, 1]));
        assert_eq!(poly(&[-4]).squarefree_part(), poly(&[1]));
    }

    #[test]
    fn exact_division() {
        let f = poly(&[-2, 1, 1]);
        assert_eq!(f.exact_div(&poly(&[-1, 1])), Some(poly(&[2, 1])));
        assert_eq!(f.exact_div(&poly(&[1, 1])), None);
    }

    #[test]
    fn pseudo_remainder() {
        // 2V^2 + 1 rem (3V + 1), scaled by 3^2: 9*(2V^2+1) = (3V+1)(6V-2) + 11
        assert_eq!(poly(&[1, 0, 2]).pseudo_rem(&poly(&[1, 3])), poly(&[11]));
    }

    #[test]
    fn cauchy() {
        assert_eq!(poly(&[9, 0, -1]).cauchy_bound(), BigInt::from(10));
        assert_eq!(poly(&[7, 0, 2]).cauchy_bound(), BigInt::from(5));
    }

    #[test]
    fn display() {
        assert_eq!(poly(&[9, 0, -1]).to_string(), "-V^2 + 9");
        assert_eq!(poly(&[0, -3, 2]).to_string(), "2*V^2 - 3*V");
    }
}
