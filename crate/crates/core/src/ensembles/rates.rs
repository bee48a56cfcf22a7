use crate::error::{Error, Result};

/// Mother/puncture/secure/design rates together with the matching bit counts.
///
/// `k` secret bits are punctured from a mother codeword of length `n_prime`
/// carrying `l` message bits; `n = n_prime - k` bits are transmitted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    pub r_m: f64,
    pub r_p: f64,
    pub r_s: f64,
    pub r_d: f64,
    pub k: usize,
    pub l: usize,
    pub n: usize,
    pub n_prime: usize,
}

impl RateSet {
    /// Derives every rate and length from the secure rate, the mother-code
    /// rate and the transmitted length.
    ///
    /// `k = round(n r_s)`, `n' = n + k`, `l = round(n' r_m)`.
    pub fn derive(r_s: f64, r_m: f64, n: usize) -> Result<Self> {
        if !(r_s >= 0.0) || !r_s.is_finite() {
            return Err(Error::InfeasibleRates(format!("secure rate {r_s} must be >= 0")));
        }
        if !(r_m > 0.0 && r_m <= 1.0) {
            return Err(Error::InfeasibleRates(format!(
                "mother rate {r_m} must lie in (0, 1]"
            )));
        }
        if n == 0 {
            return Err(Error::InfeasibleRates("transmitted length must be positive".into()));
        }
        let r_p = r_s / (1.0 + r_s);
        let k = (n as f64 * r_s).round() as usize;
        let n_prime = n + k;
        let l = (n_prime as f64 * r_m).round() as usize;
        if k > l {
            return Err(Error::InfeasibleRates(format!(
                "puncturing {k} secret bits exceeds the {l}-bit message (R_p = {r_p:.4} > R_m = {r_m:.4})"
            )));
        }
        Ok(RateSet {
            r_m,
            r_p,
            r_s,
            r_d: r_m / (1.0 - r_p),
            k,
            l,
            n,
            n_prime,
        })
    }

    /// Same as [`RateSet::derive`] but takes the message length from an
    /// actual code (`l` may differ from `round(n' r_m)` after rank repair).
    pub fn with_message_length(mut self, l: usize) -> Result<Self> {
        if self.k > l {
            return Err(Error::InfeasibleRates(format!(
                "puncturing {} secret bits exceeds the {l}-bit message",
                self.k
            )));
        }
        self.l = l;
        self.r_m = l as f64 / self.n_prime as f64;
        self.r_d = l as f64 / self.n as f64;
        Ok(self)
    }

    /// Length of the random message `m'`.
    pub fn random_bits(&self) -> usize {
        self.l - self.k
    }

    /// Number of parity bits.
    pub fn parity_bits(&self) -> usize {
        self.n_prime - self.l
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn no_secret_bits() {
        let r = RateSet::derive(0.0, 0.5, 1000).unwrap();
        assert_eq!(r.r_p, 0.0);
        assert_eq!(r.k, 0);
        assert_eq!(r.n_prime, 1000);
        assert_abs_diff_eq!(r.r_d, r.r_m, epsilon = 1e-15);
    }

    #[test]
    fn puncturing_more_than_message_is_infeasible() {
        assert!(matches!(
            RateSet::derive(0.8, 0.2, 1000),
            Err(Error::InfeasibleRates(_))
        ));
    }

    #[test]
    fn bad_inputs() {
        assert!(RateSet::derive(-0.1, 0.5, 100).is_err());
        assert!(RateSet::derive(0.1, 0.0, 100).is_err());
        assert!(RateSet::derive(0.1, 0.5, 0).is_err());
    }

    #[test]
    fn lengths_are_consistent() {
        let r = RateSet::derive(0.3333, 0.3333, 10_000).unwrap();
        assert_eq!(r.n_prime - r.k, r.n);
        assert_eq!(r.random_bits() + r.k, r.l);
        assert_eq!(r.parity_bits() + r.l, r.n_prime);
    }
}
