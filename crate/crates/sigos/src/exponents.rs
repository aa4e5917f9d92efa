//! Closed-form exponent thresholds in exact rational arithmetic.
//!
//! Everything here is a pure function of small integers; no floating point
//! enters. Piecewise formulas record which branch applied and whether the
//! query sat on a branch boundary (adjacent branches are required to agree
//! exactly there).

use crate::error::{Error, Result};
use crate::rational::{int, rat, ExtRat, Rat};

/// An admissible (ambient dimension, signature) pair: `n >= 2`,
/// `0 <= sigma <= n-1` and `n - 1 - sigma` even.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Signature {
    pub n: i64,
    pub sigma: i64,
}

impl Signature {
    pub fn new(n: i64, sigma: i64) -> Result<Self> {
        if n < 2 {
            return Err(Error::parameter(format!("need n >= 2, got n = {n}")));
        }
        if sigma < 0 || sigma > n - 1 {
            return Err(Error::parameter(format!(
                "signature must satisfy 0 <= sigma <= n-1, got sigma = {sigma} for n = {n}"
            )));
        }
        if (n - 1 - sigma) % 2 != 0 {
            return Err(Error::parameter(format!(
                "signature parity violation: n-1-sigma = {} must be even",
                n - 1 - sigma
            )));
        }
        Ok(Signature { n, sigma })
    }

    /// Smallest admissible signature for this dimension.
    pub fn min_sigma(n: i64) -> i64 {
        if (n - 1) % 2 == 0 {
            0
        } else {
            1
        }
    }

    /// All admissible signatures for dimension `n`, ascending.
    pub fn admissible_sigmas(n: i64) -> Vec<i64> {
        (Self::min_sigma(n)..=n - 1).step_by(2).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    Low,
    Middle,
    High,
    /// Parameter below the formula's stated domain, evaluated by the first
    /// applicable branch (used for the d = 1 decoupling bookkeeping).
    Extended,
}

impl Regime {
    pub fn tag(self) -> &'static str {
        match self {
            Regime::Low => "low",
            Regime::Middle => "middle",
            Regime::High => "high",
            Regime::Extended => "extended",
        }
    }
}

/// Result of evaluating a piecewise exponent formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExponentReport {
    pub value: ExtRat,
    pub regime: Regime,
    /// Set when the query parameter lies on a shared branch boundary; both
    /// branches were evaluated and agree exactly.
    pub boundary: bool,
}

impl ExponentReport {
    fn finite(&self) -> Rat {
        self.value
            .finite()
            .expect("expected a finite exponent value")
    }
}

/// Dimension of the model variety used throughout the sharp examples:
/// `floor((d+2)/2)`.
pub fn variety_dim(d: i64) -> i64 {
    (d + 2).div_euclid(2)
}

/// Threshold exponent of the full linear estimate.
pub fn main_threshold(sig: Signature) -> Rat {
    let Signature { n, sigma } = sig;
    if n % 2 == 1 {
        rat(2 * (sigma + 2 * (n + 1)), sigma + 2 * (n - 1))
    } else {
        rat(2 * (sigma + 2 * n + 3), sigma + 2 * n - 1)
    }
}

/// Threshold at the minimal admissible signature (the classical universal
/// range).
pub fn minimal_signature_threshold(n: i64) -> Rat {
    if n % 2 == 1 {
        rat(2 * (n + 1), n - 1)
    } else {
        rat(2 * (n + 2), n)
    }
}

/// Threshold at maximal signature sigma = n-1.
pub fn maximal_signature_threshold(n: i64) -> Rat {
    if n % 2 == 1 {
        rat(2 * (3 * n + 1), 3 * n - 3)
    } else {
        rat(2 * (3 * n + 2), 3 * n - 2)
    }
}

/// The k-broad threshold, piecewise in k with breaks at `(n+1-sigma)/2` and
/// `(n+1+sigma)/2`.
pub fn kbroad_threshold(sig: Signature, k: i64) -> Result<ExponentReport> {
    let Signature { n, sigma } = sig;
    if k < 1 || k > n {
        return Err(Error::parameter(format!(
            "k must satisfy 1 <= k <= n, got k = {k} for n = {n}"
        )));
    }
    let k1 = (n + 1 - sigma) / 2;
    let k2 = (n + 1 + sigma) / 2;
    let low = rat(2 * (n + 1), n - 1);
    let middle = rat(2 * (n + 2 * k + 1 + sigma), n + 2 * k - 3 + sigma);
    let high = rat(2 * k, k - 1);

    let (value, regime) = if k <= k1 {
        (low, Regime::Low)
    } else if k <= k2 {
        (middle, Regime::Middle)
    } else {
        (high, Regime::High)
    };
    let boundary = (k == k1 && low == middle) || (k == k2 && middle == high);
    if k == k1 {
        debug_assert_eq!(low, middle);
    }
    if k == k2 {
        debug_assert_eq!(middle, high);
    }
    Ok(ExponentReport {
        value: value.into(),
        regime,
        boundary,
    })
}

/// Transverse-equidistribution exponent `max{n-2m+1, (n+1+sigma)/2 - m, 0}`.
pub fn mu(sig: Signature, m: i64) -> Result<ExponentReport> {
    let Signature { n, sigma } = sig;
    if m < 1 || m > n {
        return Err(Error::parameter(format!(
            "m must satisfy 1 <= m <= n, got m = {m} for n = {n}"
        )));
    }
    let a = int(n - 2 * m + 1);
    let b = rat(n + 1 + sigma, 2) - int(m);
    let c = int(0);
    let m1 = rat(n - sigma + 1, 2);
    let m2 = rat(n + sigma + 1, 2);
    let mq = int(m);
    let (value, regime) = if mq <= m1 {
        (a, Regime::Low)
    } else if mq <= m2 {
        (b, Regime::Middle)
    } else {
        (c, Regime::High)
    };
    let boundary = (mq == m1 && a == b) || (mq == m2 && b == c);
    debug_assert_eq!(value, a.max(b).max(c));
    Ok(ExponentReport {
        value: value.into(),
        regime,
        boundary,
    })
}

/// Count bound for near-flat directions of a restricted form:
/// `min{d-1, (n-sigma-1)/2, n-d}`.
pub fn nu(sig: Signature, d: i64) -> Result<Rat> {
    let Signature { n, sigma } = sig;
    if d < 1 || d > n {
        return Err(Error::parameter(format!(
            "d must satisfy 1 <= d <= n, got d = {d} for n = {n}"
        )));
    }
    Ok(int(d - 1).min(rat(n - sigma - 1, 2)).min(int(n - d)))
}

fn dec_branch(sig: Signature, d: i64) -> Result<(Regime, bool, bool)> {
    let Signature { n, sigma } = sig;
    if d < 1 || d > n {
        return Err(Error::parameter(format!(
            "d must satisfy 1 <= d <= n, got d = {d} for n = {n}"
        )));
    }
    let d1 = (n - sigma + 1) / 2;
    let d2 = (n + sigma + 1) / 2;
    let regime = if d <= d1 {
        if d < 2 {
            Regime::Extended
        } else {
            Regime::Low
        }
    } else if d <= d2 {
        Regime::Middle
    } else {
        Regime::High
    };
    Ok((regime, d == d1 && d >= 2, d == d2))
}

/// Decoupling loss exponent `e(n, sigma, d)`. Extended to `d = 1` by the
/// first applicable branch (regime tagged `extended`).
pub fn dec_exponent(sig: Signature, d: i64) -> Result<ExponentReport> {
    let Signature { n, sigma } = sig;
    let (regime, at_d1, at_d2) = dec_branch(sig, d)?;
    let low = int(d - 1);
    let middle = rat(d - 1, 2) + rat(n - 1 - sigma, 4);
    let high = rat(n - 1, 2);
    let value = match regime {
        Regime::Low | Regime::Extended => low,
        Regime::Middle => middle,
        Regime::High => high,
    };
    let boundary = (at_d1 && low == middle) || (at_d2 && middle == high);
    if at_d1 {
        debug_assert_eq!(low, middle);
    }
    if at_d2 {
        debug_assert_eq!(middle, high);
    }
    Ok(ExponentReport {
        value: value.into(),
        regime,
        boundary,
    })
}

/// Admissible Lebesgue range for the slab decoupling inequality,
/// `p_dec(n, sigma, d)`, with infinity on the lowest branch. Extended to
/// `d = 1` as in [`dec_exponent`].
pub fn dec_range(sig: Signature, d: i64) -> Result<ExponentReport> {
    let Signature { n, sigma } = sig;
    let (regime, at_d1, at_d2) = dec_branch(sig, d)?;
    let low = ExtRat::Infinity;
    let middle = ExtRat::ratio_or_inf(2 * (2 * d - n + sigma + 3), 2 * d - n + sigma - 1);
    let high = ExtRat::ratio_or_inf(2 * (2 * d - n + 1), 2 * d - n - 1);
    let value = match regime {
        Regime::Low | Regime::Extended => low,
        Regime::Middle => middle,
        Regime::High => high,
    };
    let boundary = (at_d1 && low == middle) || (at_d2 && middle == high);
    if at_d1 {
        debug_assert_eq!(low, middle);
    }
    if at_d2 {
        debug_assert_eq!(middle, high);
    }
    Ok(ExponentReport {
        value,
        regime,
        boundary,
    })
}

/// Multilinear exponent `q(n, k, l) = 2 (n+k-l+1) / (n+k-l-1)`.
pub fn multilinear_q(n: i64, k: i64, ell: i64) -> Result<Rat> {
    if !(1 <= ell && ell <= k && k <= n) {
        return Err(Error::parameter(format!(
            "need 1 <= l <= k <= n, got (n, k, l) = ({n}, {k}, {ell})"
        )));
    }
    Ok(rat(2 * (n + k - ell + 1), n + k - ell - 1))
}

/// One row of the optimal (l, d) selection table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub ell: i64,
    pub d: i64,
    pub q: Rat,
}

/// Constraints on an (l, d) pair at multilinearity k: d odd,
/// `1 <= d <= n - sigma`, `l <= (d+1)/2` and `k - l + 1 <= n - d + 1`.
pub fn ld_constraints_ok(sig: Signature, k: i64, ell: i64, d: i64) -> bool {
    let Signature { n, sigma } = sig;
    d % 2 == 1
        && 1 <= d
        && d <= n - sigma
        && 1 <= ell
        && ell <= k
        && 2 * ell <= d + 1
        && k - ell + 1 <= n - d + 1
}

/// Optimal (l, d) choice maximizing q subject to the admissibility
/// constraints; matches the k-broad threshold exactly in every regime.
pub fn optimal_ld(sig: Signature, k: i64) -> Result<TableRow> {
    let Signature { n, sigma } = sig;
    if k < 1 || k > n {
        return Err(Error::parameter(format!(
            "k must satisfy 1 <= k <= n, got k = {k} for n = {n}"
        )));
    }
    let (ell, d) = if 2 * k <= n - sigma + 1 {
        (k, n - sigma)
    } else if 2 * k <= n + 1 + sigma {
        ((n - sigma + 1) / 2, n - sigma)
    } else {
        (n - k + 1, 2 * n - 2 * k + 1)
    };
    if !ld_constraints_ok(sig, k, ell, d) {
        return Err(Error::Infeasible(format!(
            "no admissible (l, d) for (n, sigma, k) = ({n}, {sigma}, {k}); candidate ({ell}, {d})"
        )));
    }
    let q = multilinear_q(n, k, ell)?;
    let pbar = kbroad_threshold(sig, k)?.finite();
    if q != pbar {
        return Err(Error::Assertion(format!(
            "table row q = {q} disagrees with k-broad threshold {pbar} at (n, sigma, k) = ({n}, {sigma}, {k})"
        )));
    }
    Ok(TableRow { ell, d, q })
}

/// Exponent interval produced by the broad/narrow passage at level k:
/// `2 (n - e) / (n - 1 - e) <= p <= p_dec` with `e = e(n, sigma, k-1)`.
pub fn bg_interval(sig: Signature, k: i64) -> Result<(Rat, ExtRat)> {
    let n = sig.n;
    if k < 2 || k > n {
        return Err(Error::parameter(format!(
            "k must satisfy 2 <= k <= n, got k = {k} for n = {n}"
        )));
    }
    let e = dec_exponent(sig, k - 1)?.finite();
    let lower = (int(2) * (int(n) - e)) / (int(n - 1) - e);
    let upper = dec_range(sig, k - 1)?.value;
    Ok((lower, upper))
}

/// Optimal multilinearity level for closing the linear estimate.
pub fn k_star(n: i64) -> i64 {
    if n % 2 == 0 {
        (n + 2) / 2
    } else {
        (n + 1) / 2
    }
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub sig: Signature,
    pub k_star: i64,
    pub pbar_at_kstar: Rat,
    pub dec_range_at_prev: ExtRat,
    pub bg_lower: Rat,
    pub linear_range_start: Rat,
    pub main: Rat,
    pub pass: bool,
}

/// Check that the optimal-k choice closes the linear estimate exactly at the
/// main threshold.
pub fn verify_closure(sig: Signature) -> Result<ClosureReport> {
    let ks = k_star(sig.n);
    let pbar = kbroad_threshold(sig, ks)?.finite();
    let (lower, upper) = bg_interval(sig, ks)?;
    let linear_range_start = lower.max(pbar);
    let main = main_threshold(sig);
    let pass = ExtRat::from(pbar) <= upper && linear_range_start == main;
    Ok(ClosureReport {
        sig,
        k_star: ks,
        pbar_at_kstar: pbar,
        dec_range_at_prev: upper,
        bg_lower: lower,
        linear_range_start,
        main,
        pass,
    })
}

/// A lower-bound exponent of the form `growth / p - decay`; non-positive
/// exactly when `p >= growth / decay`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScalingLaw {
    pub decay: Rat,
    pub growth: Rat,
}

impl ScalingLaw {
    pub fn exponent_at(&self, p: Rat) -> Rat {
        self.growth / p - self.decay
    }

    /// Smallest p with non-positive exponent.
    pub fn threshold(&self) -> Rat {
        self.growth / self.decay
    }
}

/// Lambda-exponent of the tensored lower bound: decay
/// `(n-1-sigma)/4 + (sigma + m_{sigma+1} - 1)/4` against growth
/// `(m_{n-sigma} - 1) + (sigma + m_{sigma+1} + 1)/2` per inverse power of p.
pub fn tensor_lower_bound(sig: Signature) -> ScalingLaw {
    let Signature { n, sigma } = sig;
    let m_hyp = variety_dim(n - sigma);
    let m_ell = variety_dim(sigma + 1);
    let decay = rat(n - 1 - sigma, 4) + rat(sigma + m_ell - 1, 4);
    let growth = int(m_hyp - 1) + rat(sigma + m_ell + 1, 2);
    ScalingLaw { decay, growth }
}

/// Lambda-exponent comparison for the multilinear examples at parameters
/// (k, l, d): the left side grows like `growth/p - decay_left`, the right
/// side is constant `-decay_right`; equality of exponents pins the
/// threshold p.
pub fn multilinear_comparison(n: i64, k: i64, ell: i64, d: i64) -> Result<ScalingLaw> {
    if !(1 <= ell && ell <= k && k <= n && 1 <= d && d <= n) {
        return Err(Error::parameter(format!(
            "invalid multilinear parameters (n, k, l, d) = ({n}, {k}, {ell}, {d})"
        )));
    }
    // Left side of the scaling comparison: -(n-1)/2 + [(d-1)/2 + (n+k-d-l+2)/2] / p.
    let growth = rat(d - 1, 2) + rat(n + k - d - ell + 2, 2);
    // Right side: -(d-1)/4 - (n-k-d+l)/4, folded into an effective decay.
    let decay_left = rat(n - 1, 2);
    let decay_right = rat(d - 1, 4) + rat(n - k - d + ell, 4);
    let decay = decay_left - decay_right;
    Ok(ScalingLaw { decay, growth })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(n: i64, sigma: i64) -> Signature {
        Signature::new(n, sigma).unwrap()
    }

    #[test]
    fn main_threshold_quoted_values() {
        assert_eq!(main_threshold(sig(3, 2)), rat(10, 3));
        assert_eq!(main_threshold(sig(3, 0)), int(4));
        assert_eq!(main_threshold(sig(4, 1)), int(3));
    }

    #[test]
    fn main_threshold_extremes() {
        for n in 2..=12 {
            let smin = Signature::min_sigma(n);
            assert_eq!(
                main_threshold(sig(n, smin)),
                minimal_signature_threshold(n),
                "minimal-signature mismatch at n = {n}"
            );
            assert_eq!(
                main_threshold(sig(n, n - 1)),
                maximal_signature_threshold(n),
                "maximal-signature mismatch at n = {n}"
            );
        }
    }

    #[test]
    fn main_threshold_monotone_in_sigma() {
        for n in 2..=12 {
            let sigmas = Signature::admissible_sigmas(n);
            for w in sigmas.windows(2) {
                assert!(main_threshold(sig(n, w[0])) >= main_threshold(sig(n, w[1])));
            }
        }
    }

    #[test]
    fn kbroad_quoted_values() {
        let r = kbroad_threshold(sig(3, 2), 2).unwrap();
        assert_eq!(r.value, ExtRat::Finite(rat(10, 3)));
        assert_eq!(r.regime, Regime::Middle);

        // Boundary case: both the first and middle branches evaluate to 4.
        let first_branch = rat(2 * (3 + 1), 3 - 1);
        let middle_branch = rat(2 * (3 + 2 * 2 + 1 + 0), 3 + 2 * 2 - 3 + 0);
        assert_eq!(first_branch, int(4));
        assert_eq!(middle_branch, int(4));
        let r = kbroad_threshold(sig(3, 0), 2).unwrap();
        assert_eq!(r.value, ExtRat::Finite(int(4)));
        assert!(r.boundary);

        let r = kbroad_threshold(sig(3, 0), 3).unwrap();
        assert_eq!(r.value, ExtRat::Finite(int(3)));
        assert_eq!(r.regime, Regime::High);
    }

    #[test]
    fn kbroad_monotone_in_k() {
        for n in 2..=12 {
            for s in Signature::admissible_sigmas(n) {
                let mut prev: Option<Rat> = None;
                for k in 1..=n {
                    let v = kbroad_threshold(sig(n, s), k).unwrap().finite();
                    if let Some(p) = prev {
                        assert!(v <= p, "p-bar increased in k at (n, sigma) = ({n}, {s})");
                    }
                    prev = Some(v);
                }
            }
        }
    }

    #[test]
    fn mu_quoted_values() {
        // Maximal signature: mu(n, n-1, m) = n - m.
        let r = mu(sig(5, 4), 2).unwrap();
        assert_eq!(r.value, ExtRat::Finite(int(3)));
        for n in 2..=9 {
            for m in 1..=n {
                assert_eq!(
                    mu(sig(n, n - 1), m).unwrap().value,
                    ExtRat::Finite(int(n - m))
                );
            }
        }

        // All three arguments of the max are zero.
        assert_eq!(int(3 - 2 * 2 + 1), int(0));
        assert_eq!(rat(3 + 1 + 0, 2) - int(2), int(0));
        let r = mu(sig(3, 0), 2).unwrap();
        assert_eq!(r.value, ExtRat::Finite(int(0)));

        // Two branches tie at the boundary.
        assert_eq!(int(5 - 2 * 2 + 1), int(2));
        assert_eq!(rat(5 + 1 + 2, 2) - int(2), int(2));
        let r = mu(sig(5, 2), 2).unwrap();
        assert_eq!(r.value, ExtRat::Finite(int(2)));
        assert!(r.boundary);
    }

    #[test]
    fn nu_quoted_values() {
        assert_eq!(nu(sig(5, 0), 3).unwrap(), int(2)); // min{2, 2, 2}
        assert_eq!(nu(sig(7, 2), 4).unwrap(), int(2)); // min{3, 2, 3}
        for n in 2..=12 {
            for d in 1..=n {
                assert_eq!(nu(sig(n, n - 1), d).unwrap(), int(0));
            }
        }
    }

    #[test]
    fn dec_exponent_quoted_values() {
        // Maximal signature identities for 3 <= k <= n.
        for n in 3..=12 {
            for k in 3..=n {
                let e = dec_exponent(sig(n, n - 1), k - 1).unwrap();
                assert_eq!(e.value, ExtRat::Finite(rat(k - 2, 2)));
                let p = dec_range(sig(n, n - 1), k - 1).unwrap();
                assert_eq!(p.value, ExtRat::Finite(rat(2 * k, k - 2)));
            }
        }

        let e = dec_exponent(sig(3, 0), 2).unwrap();
        assert_eq!(e.value, ExtRat::Finite(int(1)));
        let p = dec_range(sig(3, 0), 2).unwrap();
        assert_eq!(p.value, ExtRat::Infinity);

        let e = dec_exponent(sig(5, 2), 4).unwrap();
        assert_eq!(e.value, ExtRat::Finite(rat(5, 2)));
        assert_eq!(e.regime, Regime::High);
    }

    #[test]
    fn dec_d1_extension() {
        let e = dec_exponent(sig(3, 2), 1).unwrap();
        assert_eq!(e.value, ExtRat::Finite(int(0)));
        assert_eq!(e.regime, Regime::Extended);
        let p = dec_range(sig(3, 2), 1).unwrap();
        assert_eq!(p.value, ExtRat::Infinity);
        assert_eq!(p.regime, Regime::Extended);
    }

    #[test]
    fn q_and_table_quoted_values() {
        assert_eq!(multilinear_q(3, 2, 2).unwrap(), int(4));

        for n in 2..=12i64 {
            for s in Signature::admissible_sigmas(n) {
                let sg = sig(n, s);
                for k in 1..=n {
                    let row = optimal_ld(sg, k).unwrap();
                    if 2 * k <= n - s + 1 {
                        assert_eq!((row.ell, row.d), (k, n - s));
                        assert_eq!(row.q, rat(2 * (n + 1), n - 1));
                    }
                    if 2 * k >= n + 1 + s {
                        assert_eq!((row.ell, row.d), (n - k + 1, 2 * n - 2 * k + 1));
                        assert_eq!(row.q, rat(2 * k, k - 1));
                    }
                    assert!(ld_constraints_ok(sg, k, row.ell, row.d));
                }
            }
        }
    }

    #[test]
    fn bg_interval_positive_definite() {
        for n in 3..=12 {
            for k in 3..=n {
                let (lower, upper) = bg_interval(sig(n, n - 1), k).unwrap();
                assert_eq!(lower, rat(2 * (2 * n - k + 2), 2 * n - k));
                assert_eq!(upper, ExtRat::Finite(rat(2 * k, k - 2)));
            }
        }
    }

    #[test]
    fn k_star_values() {
        assert_eq!(k_star(3), 2);
        assert_eq!(k_star(4), 3);
        assert_eq!(k_star(12), 7);
    }

    #[test]
    fn closure_all_small_dimensions() {
        for n in 2..=12 {
            for s in Signature::admissible_sigmas(n) {
                let rep = verify_closure(sig(n, s)).unwrap();
                assert!(
                    rep.pass,
                    "closure failed at (n, sigma) = ({n}, {s}): {rep:?}"
                );
            }
        }
    }

    #[test]
    fn tensor_threshold_matches_main() {
        for n in 2..=12 {
            for s in Signature::admissible_sigmas(n) {
                let sg = sig(n, s);
                let law = tensor_lower_bound(sg);
                assert_eq!(
                    law.threshold(),
                    main_threshold(sg),
                    "tensor necessity mismatch at (n, sigma) = ({n}, {s})"
                );
                // Non-positivity is exactly p >= threshold.
                let t = law.threshold();
                assert!(law.exponent_at(t) == int(0));
                assert!(law.exponent_at(t + rat(1, 7)) < int(0));
                assert!(law.exponent_at(t - rat(1, 97)) > int(0));
            }
        }
    }

    #[test]
    fn multilinear_threshold_matches_q() {
        for n in 2..=12i64 {
            for s in Signature::admissible_sigmas(n) {
                let sg = sig(n, s);
                for k in 1..=n {
                    for ell in 1..=k {
                        for d in (1..=n - s).step_by(2) {
                            if !ld_constraints_ok(sg, k, ell, d) {
                                continue;
                            }
                            let law = multilinear_comparison(n, k, ell, d).unwrap();
                            assert_eq!(
                                law.threshold(),
                                multilinear_q(n, k, ell).unwrap(),
                                "multilinear mismatch at ({n}, {s}, {k}, {ell}, {d})"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn variety_dims() {
        assert_eq!(variety_dim(3), 2);
        assert_eq!(variety_dim(4), 3);
        assert_eq!(variety_dim(5), 3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Signature::new(3, 1).is_err());
        assert!(Signature::new(1, 0).is_err());
        assert!(Signature::new(4, 4).is_err());
        assert!(kbroad_threshold(sig(3, 0), 4).is_err());
        assert!(mu(sig(3, 0), 0).is_err());
        assert!(nu(sig(3, 0), 5).is_err());
        assert!(multilinear_q(3, 4, 1).is_err());
    }
}
