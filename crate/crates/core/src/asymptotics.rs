//! Large-genus behaviour: maximal-gonality parameters, the sign of the index
//! excess under the conjectured count estimates, and the search for a base
//! degree past which `K²/χ` stays within `ε` of 8.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::degeneration::DegenerationCounts;
use crate::error::{Error, Result};
use crate::exact::{self, format_rational, q, q_frac, Q};
use crate::invariants::{self, FamilyParams, IrregularityLabel, IRREGULARITY_LABEL};

/// Maximal-gonality parameters for genus `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "parity", content = "n", rename_all = "lowercase")]
pub enum GonalityCase {
    /// `g = 2n + 1`
    Odd(u64),
    /// `g = 2n`
    Even(u64),
}

impl GonalityCase {
    pub fn n(self) -> u64 {
        match self {
            GonalityCase::Odd(n) | GonalityCase::Even(n) => n,
        }
    }

    pub fn genus(self) -> u64 {
        match self {
            GonalityCase::Odd(n) => 2 * n + 1,
            GonalityCase::Even(n) => 2 * n,
        }
    }

    pub fn k(self) -> u64 {
        match self {
            GonalityCase::Odd(n) => n + 2,
            GonalityCase::Even(n) => n + 1,
        }
    }

    pub fn b(self) -> u64 {
        match self {
            GonalityCase::Odd(n) => 6 * n + 4,
            GonalityCase::Even(n) => 6 * n,
        }
    }

    pub fn parity(self) -> Parity {
        match self {
            GonalityCase::Odd(_) => Parity::Odd,
            GonalityCase::Even(_) => Parity::Even,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    /// Smallest admissible `n`.
    pub fn n_min(self) -> u64 {
        match self {
            Parity::Odd => 1,
            Parity::Even => 2,
        }
    }

    pub fn case(self, n: u64) -> GonalityCase {
        match self {
            Parity::Odd => GonalityCase::Odd(n),
            Parity::Even => GonalityCase::Even(n),
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            _ => Err(Error::Parse(format!("expected odd or even, got {s:?}"))),
        }
    }
}

pub fn maximal_gonality(g: u64) -> Result<GonalityCase> {
    let case = match g {
        g if g < 3 => return Err(Error::Domain(format!("maximal gonality needs g ≥ 3, got {g}"))),
        g if g % 2 == 1 => GonalityCase::Odd((g - 1) / 2),
        4.. => GonalityCase::Even(g / 2),
        _ => unreachable!(),
    };
    let (k, b) = (case.k(), case.b());
    if k != (g + 3) / 2 || b != 2 * g + 2 * k - 2 {
        return Err(Error::invariant_with(
            "maximal gonality pack inconsistent",
            format!("g={g} k={k} b={b}"),
        ));
    }
    Ok(case)
}

/// Dense polynomial in one variable with rational coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Q>);

impl Poly {
    pub fn new(mut coeffs: Vec<Q>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: Q) -> Self {
        Self::new(vec![c])
    }

    pub fn var() -> Self {
        Self::new(vec![Q::zero(), Q::one()])
    }

    pub fn coefficients(&self) -> &[Q] {
        &self.0
    }

    pub fn eval(&self, x: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * x + c)
    }

    /// Least `n` in `lo..=hi` from which the polynomial stays positive through `hi`.
    pub fn positive_from(&self, lo: u64, hi: u64) -> Option<u64> {
        let mut start = None;
        for n in lo..=hi {
            if self.eval(&q(n)).is_positive() {
                start.get_or_insert(n);
            } else {
                start = None;
            }
        }
        start
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        let len = self.0.len().max(rhs.0.len());
        let at = |p: &Poly, i: usize| p.0.get(i).cloned().unwrap_or_else(Q::zero);
        Poly::new((0..len).map(|i| at(&self, i) + at(&rhs, i)).collect())
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly(self.0.into_iter().map(|c| -c).collect())
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        if self.0.is_empty() || rhs.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![Q::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in rhs.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{}", format_rational(&mag))?,
                (_, true) => {}
                _ => write!(f, "{}·", format_rational(&mag))?,
            }
            match i {
                0 => {}
                1 => f.write_str("n")?,
                _ => write!(f, "n^{i}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Count estimates for large maximal gonality, scaled by `Ñ₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjecturedEstimates {
    pub n1: BigInt,
}

impl ConjecturedEstimates {
    pub fn new(n1: impl Into<BigInt>) -> Self {
        Self { n1: n1.into() }
    }

    /// `Ñ₃ = (k-2)Ñ₁`, `Ñ = k(k-1)Ñ₁/2`, `e = 0`; every type-(1) fiber counted as singular.
    pub fn counts(&self, k: u32) -> DegenerationCounts {
        let k = BigInt::from(k);
        let n_tilde = &k * (&k - 1) / 2 * &self.n1;
        let n3 = (&k - 2) * &self.n1;
        DegenerationCounts {
            n22: &n_tilde - &self.n1 - &n3,
            n_tilde,
            n1: self.n1.clone(),
            n3,
            e: BigInt::zero(),
            n_sing: self.n1.clone(),
        }
    }

    pub fn params(&self, case: GonalityCase, c: impl Into<BigInt>, gx: impl Into<BigInt>) -> Result<FamilyParams> {
        let small = |x: u64| u32::try_from(x).map_err(|_| Error::Domain(format!("{x} is too large")));
        let k = small(case.k())?;
        FamilyParams::from_counts(k, small(case.genus())?, small(case.b())?, self.counts(k), c, gx)
    }
}

/// `(b-1)(-1 + (k-2)/9) - k(k-1)/2` as a polynomial in `n`: the coefficient of
/// `Ñ₁` in `α - 8α'` once the estimates are substituted and `e` dropped.
pub fn substituted_polynomial(parity: Parity) -> Poly {
    let n = Poly::var();
    let c = |x: i64| Poly::constant(q(x));
    let (k, b) = match parity {
        Parity::Odd => (n.clone() + c(2), c(6) * n + c(4)),
        Parity::Even => (n.clone() + c(1), c(6) * n),
    };
    let ninth = Poly::constant(q_frac(1, 9));
    let half = Poly::constant(q_frac(1, 2));
    (b - c(1)) * (c(-1) + ninth * (k.clone() - c(2))) - half * k.clone() * (k - c(1))
}

/// The polynomial printed for each parity, with the threshold claimed for it.
pub fn printed_polynomial(parity: Parity) -> (Poly, u64) {
    match parity {
        Parity::Odd => (
            Poly::new(vec![q(-18), q(-43), q(1)].into_iter().map(|c| c / q(6)).collect()),
            44,
        ),
        Parity::Even => (Poly::new(vec![q(20), q(-131), q(3)]), 43),
    }
}

/// Sign analysis of the index excess for maximal gonality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExcessSignReport {
    pub case: Parity,
    pub n_max: u64,
    /// Substituted polynomial, constant term first.
    #[serde(with = "rational_vec")]
    pub polynomial_coefficients: Vec<Q>,
    pub polynomial: String,
    pub first_positive_n: Option<u64>,
    #[serde(with = "rational_vec")]
    pub printed_coefficients: Vec<Q>,
    pub printed_polynomial: String,
    pub printed_first_positive_n: Option<u64>,
    #[serde(rename = "paper_claim")]
    pub claimed_threshold: u64,
    /// The printed polynomial first turns positive exactly at the claimed `n`.
    #[serde(rename = "match")]
    pub matches: bool,
    /// Substituted and printed polynomials agree in sign for every swept `n`.
    pub same_sign_pattern: bool,
    pub notes: Vec<String>,
}

pub fn excess_sign(parity: Parity, n_max: u64) -> ExcessSignReport {
    let derived = substituted_polynomial(parity);
    let (printed, claim) = printed_polynomial(parity);
    let lo = parity.n_min();
    let first = derived.positive_from(lo, n_max);
    let printed_first = printed.positive_from(lo, n_max);
    let same_sign_pattern = (lo..=n_max).all(|n| {
        let x = q(n);
        derived.eval(&x).signum() == printed.eval(&x).signum()
    });
    let mut notes = Vec::new();
    if derived != printed {
        let scale = match (derived.coefficients().last(), printed.coefficients().last()) {
            (Some(a), Some(b)) if !b.is_zero() => Some(a / b),
            _ => None,
        };
        let proportional = scale
            .as_ref()
            .filter(|s| s.is_positive())
            .is_some_and(|s| derived == printed.clone() * Poly::constant(s.clone()));
        if proportional {
            notes.push(format!(
                "substituted polynomial {derived} is {} times the printed {printed}",
                format_rational(scale.as_ref().expect("checked"))
            ));
        } else {
            notes.push(format!(
                "substituted polynomial {derived} differs from printed {printed}"
            ));
        }
    }
    match printed_first {
        Some(n) if n != claim => notes.push(format!(
            "printed polynomial is {} at n = {claim} and first positive at n = {n}, not at the claimed n = {claim}",
            format_rational(&printed.eval(&q(claim))),
        )),
        None => notes.push(format!("printed polynomial not positive by n = {n_max}")),
        _ => {}
    }
    if first != printed_first {
        notes.push(format!(
            "substituted polynomial first positive at {}",
            first.map_or("none".to_string(), |n| n.to_string())
        ));
    }
    ExcessSignReport {
        case: parity,
        n_max,
        polynomial_coefficients: derived.coefficients().to_vec(),
        polynomial: derived.to_string(),
        first_positive_n: first,
        printed_coefficients: printed.coefficients().to_vec(),
        printed_polynomial: printed.to_string(),
        printed_first_positive_n: printed_first,
        claimed_threshold: claim,
        matches: printed_first == Some(claim),
        same_sign_pattern,
        notes,
    }
}

mod rational_vec {
    use super::*;
    use crate::exact::ExactJson;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Q], s: S) -> std::result::Result<S::Ok, S::Error> {
        xs.iter().map(ExactJson::from).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Q>, D::Error> {
        Vec::<ExactJson>::deserialize(d)?
            .into_iter()
            .map(|j| Q::try_from(j).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Smooth plane curve of degree `d` as the base `X`, with `c_i = d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCurveBase {
    pub d: u64,
    #[serde(with = "exact::decimal")]
    pub gx: BigInt,
    #[serde(with = "exact::decimal")]
    pub c: BigInt,
}

impl PlaneCurveBase {
    pub fn new(d: u64, b: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("plane degree must be at least 1".into()));
        }
        let d_big = BigInt::from(d);
        Ok(Self {
            d,
            gx: (&d_big - 1) * (&d_big - 2) / 2,
            c: d_big * b,
        })
    }

    /// Recovers the degree from the genus, if `g(X)` is a plane-curve genus.
    pub fn degree_for_genus(gx: &BigInt) -> Option<u64> {
        let disc: BigInt = gx * 8 + 1;
        let root = disc.sqrt();
        if &root * &root != disc {
            return None;
        }
        u64::try_from((root + 3) / 2).ok()
    }

    /// `8g(X) + 1 = (2d - 3)²`.
    pub fn clebsch_holds(&self) -> bool {
        let r = BigInt::from(2 * self.d as i128 - 3);
        &self.gx * 8 + 1 == &r * &r
    }
}

pub const DEFAULT_WINDOW: u64 = 8;
pub const DEFAULT_CEILING: u64 = 1_000_000;

/// Inequality used to bound the base genus, evaluated at the certified degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SufficientCondition {
    /// `(2g(X)-2)/(3+√(8g(X)+1)) = (g(X)-1)/d`.
    #[serde(with = "exact::rational")]
    pub lhs: Q,
    /// `b·||α-8α'| - εα'| / (ε(g-1))`; absent when `g = 1`.
    #[serde(with = "exact::opt_rational")]
    pub rhs: Option<Q>,
    pub holds: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCertificate {
    pub k: u32,
    pub g: u32,
    pub b: u32,
    #[serde(with = "exact::rational")]
    pub epsilon: Q,
    pub window: u64,
    pub d_min: u64,
    #[serde(with = "exact::decimal")]
    pub gx_min: BigInt,
    #[serde(with = "exact::decimal")]
    pub c: BigInt,
    #[serde(with = "exact::rational")]
    pub ratio: Q,
    /// `(d, K²/χ)` for every degree in the persistence window.
    #[serde(with = "window_ratios")]
    pub window_ratios: Vec<(u64, Q)>,
    #[serde(with = "exact::rational")]
    pub alpha: Q,
    #[serde(with = "exact::rational")]
    pub alpha_prime: Q,
    pub sufficient_condition: SufficientCondition,
}

mod window_ratios {
    use super::*;
    use crate::exact::ExactJson;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Entry {
        d: u64,
        ratio: ExactJson,
    }

    pub fn serialize<S: Serializer>(xs: &[(u64, Q)], s: S) -> std::result::Result<S::Ok, S::Error> {
        xs.iter()
            .map(|(d, r)| Entry { d: *d, ratio: r.into() })
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(u64, Q)>, D::Error> {
        Vec::<Entry>::deserialize(d)?
            .into_iter()
            .map(|e| Ok((e.d, Q::try_from(e.ratio).map_err(serde::de::Error::custom)?)))
            .collect()
    }
}

/// Search settings for [`delta_search`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeltaOptions {
    pub window: u64,
    pub ceiling: u64,
    pub start: u64,
}

impl Default for DeltaOptions {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            ceiling: DEFAULT_CEILING,
            start: 3,
        }
    }
}

/// `K²/χ` along plane-curve bases, using that both are affine in `c` and `g(X)`.
struct RatioAlongDegree {
    alpha: Q,
    alpha_prime: Q,
    base: Q,
    b: Q,
}

impl RatioAlongDegree {
    fn at(&self, d: u64) -> Option<Q> {
        let dq = q(d);
        let c = &self.b * &dq;
        let gx_minus_one = (&dq - q(1)) * (&dq - q(2)) / q(2) - q(1);
        let k2 = &c * &self.alpha + q(8) * &self.base * &gx_minus_one;
        let chi = &c * &self.alpha_prime + &self.base * &gx_minus_one;
        (!chi.is_zero()).then(|| k2 / chi)
    }
}

/// Least plane degree `d ≥ 3` whose ratio, and that of the next `window`
/// degrees, lies within `ε` of 8.
pub fn delta_search(
    g: u32,
    k: u32,
    counts: &DegenerationCounts,
    epsilon: &Q,
    opts: DeltaOptions,
) -> Result<DeltaCertificate> {
    if !epsilon.is_positive() {
        return Err(Error::Domain(format!(
            "ε = {} must be positive",
            format_rational(epsilon)
        )));
    }
    if k < 2 {
        return Err(Error::Domain(format!("k = {k} must be at least 2")));
    }
    let b = 2 * g + 2 * k - 2;
    let template = FamilyParams::from_counts(k, g, b, counts.clone(), 0, 0)?;
    let alpha = invariants::alpha(&template);
    let alpha_prime = invariants::alpha_prime(&template);
    let curve = RatioAlongDegree {
        alpha: alpha.clone(),
        alpha_prime: alpha_prime.clone(),
        base: q(counts.n_tilde.clone()) * (q(g) - q(1)),
        b: q(b),
    };
    let eight = q(8);
    let within = |r: &Option<Q>| r.as_ref().is_some_and(|r| (r - &eight).abs() <= *epsilon);

    let mut trajectory = Vec::new();
    let mut run: Vec<(u64, Q)> = Vec::new();
    let mut d = opts.start.max(1);
    while d <= opts.ceiling {
        let r = curve.at(d);
        if d.is_power_of_two() || d <= opts.start + 16 {
            trajectory.push((d, r.as_ref().map_or("undefined".to_string(), format_rational)));
        }
        if within(&r) {
            run.push((d, r.expect("checked")));
            if run.len() as u64 > opts.window {
                break;
            }
        } else {
            run.clear();
        }
        d += 1;
    }
    if (run.len() as u64) <= opts.window {
        return Err(Error::SearchExhausted {
            ceiling: opts.ceiling,
            trajectory,
        });
    }

    let (d_min, ratio) = run[0].clone();
    let base = PlaneCurveBase::new(d_min, b)?;
    // Re-derive the certified ratio through the full pipeline.
    let full = invariants::ratio_and_slope(&FamilyParams::from_counts(
        k,
        g,
        b,
        counts.clone(),
        base.c.clone(),
        base.gx.clone(),
    )?);
    if let Ok(full) = full {
        if full.ratio.as_ref() != Some(&ratio) {
            return Err(Error::invariant_with(
                "certified ratio disagrees with the full evaluation",
                format!("d = {d_min}"),
            ));
        }
    }

    let lhs = (q(base.gx.clone()) - q(1)) / q(d_min);
    let rhs = (g != 1).then(|| {
        let gap = (&alpha - &eight * &alpha_prime).abs();
        q(b) * (gap - epsilon * &alpha_prime).abs() / (epsilon * (q(g) - q(1)))
    });
    let holds = rhs.as_ref().map(|r| lhs >= *r);
    Ok(DeltaCertificate {
        k,
        g,
        b,
        epsilon: epsilon.clone(),
        window: opts.window,
        d_min,
        gx_min: base.gx,
        c: base.c,
        ratio,
        window_ratios: run,
        alpha,
        alpha_prime,
        sufficient_condition: SufficientCondition { lhs, rhs, holds },
    })
}

/// Sign of `K² - 8χ` with sanity flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub source: String,
    #[serde(with = "exact::rational")]
    pub excess: Q,
    pub positive_index: bool,
    #[serde(with = "exact::rational")]
    pub k2: Q,
    #[serde(with = "exact::rational")]
    pub chi: Q,
    /// `K² > 9χ`.
    pub miyaoka_yau_flag: bool,
    pub q_report: Option<IrregularityLabel>,
    pub notes: Vec<String>,
}

/// Where the counts of a positivity report came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountSource {
    Census,
    Conjectured,
}

pub fn positivity_report(p: &FamilyParams, source: CountSource) -> Result<PositivityReport> {
    let excess = invariants::index_excess(p)?;
    let k2 = invariants::k_squared(p)?;
    let (chi, _) = invariants::chi_f(p)?;
    let mut notes = p.warnings();
    let q_report = match invariants::genus_y(p) {
        Ok(gy) => Some(IrregularityLabel {
            value: q(gy),
            label: IRREGULARITY_LABEL.to_string(),
        }),
        Err(e) => {
            notes.push(format!("no irregularity label: {e}"));
            None
        }
    };
    let miyaoka_yau_flag = k2 > q(9) * &chi;
    if miyaoka_yau_flag {
        notes.push("K² > 9χ: outside the range of surfaces of general type".into());
    }
    Ok(PositivityReport {
        source: match source {
            CountSource::Census => "census",
            CountSource::Conjectured => "conjectured",
        }
        .into(),
        positive_index: excess.is_positive(),
        excess,
        k2,
        chi,
        miyaoka_yau_flag,
        q_report,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degeneration::census;

    #[test]
    fn gonality_examples() {
        let c = maximal_gonality(9).unwrap();
        assert_eq!((c, c.k(), c.b()), (GonalityCase::Odd(4), 6, 28));
        let c = maximal_gonality(8).unwrap();
        assert_eq!((c, c.k(), c.b()), (GonalityCase::Even(4), 5, 24));
        let c = maximal_gonality(7).unwrap();
        assert_eq!((c.k(), c.b()), (5, 22));
        assert!(maximal_gonality(2).is_err());
        assert!(maximal_gonality(3).is_ok());
        for g in 3..200 {
            let c = maximal_gonality(g).unwrap();
            assert_eq!(c.genus(), g);
            assert_eq!(c.b(), 2 * g + 2 * c.k() - 2);
        }
    }

    #[test]
    fn poly_arithmetic() {
        let n = Poly::var();
        let p = (n.clone() + Poly::constant(q(1))) * (n.clone() - Poly::constant(q(1)));
        assert_eq!(p.coefficients(), &[q(-1), q(0), q(1)]);
        assert_eq!(p.eval(&q(3)), q(8));
        assert_eq!(p.to_string(), "n^2 - 1");
        assert_eq!((p.clone() - p).coefficients(), &[] as &[Q]);
    }

    #[test]
    fn substitution_by_hand() {
        // odd: (6n+3)(n-9)/9 - (n+2)(n+1)/2
        let odd = substituted_polynomial(Parity::Odd);
        for n in 1..60 {
            let n = q(n);
            let expect = (q(6) * &n + q(3)) * (&n - q(9)) / q(9) - (&n + q(2)) * (&n + q(1)) / q(2);
            assert_eq!(odd.eval(&n), expect);
        }
        let even = substituted_polynomial(Parity::Even);
        assert_eq!(even.coefficients(), &[q_frac(10, 9), q_frac(-131, 18), q_frac(1, 6)]);
    }

    #[test]
    fn odd_threshold() {
        let r = excess_sign(Parity::Odd, 200);
        assert_eq!(r.printed_first_positive_n, Some(44));
        assert_eq!(r.first_positive_n, Some(44));
        assert!(r.matches);
        let (printed, _) = printed_polynomial(Parity::Odd);
        assert_eq!(printed.eval(&q(43)), q(-3));
        assert_eq!(printed.eval(&q(44)), q_frac(26, 6));
    }

    #[test]
    fn even_threshold_mismatch() {
        let r = excess_sign(Parity::Even, 200);
        let (printed, _) = printed_polynomial(Parity::Even);
        assert_eq!(printed.eval(&q(43)), q(-66));
        assert_eq!(printed.eval(&q(44)), q(64));
        assert_eq!(r.printed_first_positive_n, Some(44));
        assert!(!r.matches);
        assert_eq!(r.first_positive_n, Some(44));
        assert!(r.same_sign_pattern);
        assert!(r.notes.iter().any(|n| n.contains("claimed n = 43")));
    }

    #[test]
    fn plane_curves() {
        for d in 1..200 {
            let pc = PlaneCurveBase::new(d, 4).unwrap();
            assert!(pc.clebsch_holds());
            if d >= 2 {
                assert_eq!(PlaneCurveBase::degree_for_genus(&pc.gx), Some(d));
            }
        }
        assert_eq!(PlaneCurveBase::degree_for_genus(&BigInt::from(2)), None);
        assert!(PlaneCurveBase::new(0, 4).is_err());
    }

    #[test]
    fn toy_delta_is_immediate() {
        let c = census(3, 4, 1).unwrap();
        for eps in [q(1), q_frac(1, 2), q_frac(1, 10)] {
            let cert = delta_search(0, 3, &c.counts, &eps, DeltaOptions::default()).unwrap();
            assert_eq!(cert.d_min, 3);
            assert_eq!(cert.ratio, q(8));
            assert_eq!(cert.window_ratios.len(), 9);
        }
    }

    #[test]
    fn delta_converges_for_nontrivial_pack() {
        let est = ConjecturedEstimates::new(3);
        let case = GonalityCase::Odd(2);
        let counts = est.counts(case.k() as u32);
        let eps = q_frac(1, 10);
        let cert = delta_search(
            case.genus() as u32,
            case.k() as u32,
            &counts,
            &eps,
            DeltaOptions::default(),
        )
        .unwrap();
        assert!((&cert.ratio - q(8)).abs() <= eps);
        assert!(cert.window_ratios.iter().all(|(_, r)| (r - q(8)).abs() <= eps));
        if cert.d_min > 3 {
            let before = cert.d_min - 1;
            let opts = DeltaOptions {
                start: before,
                window: 0,
                ..DeltaOptions::default()
            };
            let again = delta_search(case.genus() as u32, case.k() as u32, &counts, &eps, opts).unwrap();
            assert!(again.d_min >= before);
        }
    }

    #[test]
    fn delta_exhausts_on_constant_ratio() {
        // g = 1: ratio is α/α' for every d.
        let counts = DegenerationCounts {
            n_tilde: 5.into(),
            n1: 2.into(),
            n22: 3.into(),
            n3: 0.into(),
            e: 1.into(),
            n_sing: 1.into(),
        };
        let opts = DeltaOptions {
            ceiling: 200,
            ..DeltaOptions::default()
        };
        match delta_search(1, 3, &counts, &q_frac(1, 100), opts) {
            Err(Error::SearchExhausted { ceiling, trajectory }) => {
                assert_eq!(ceiling, 200);
                assert!(!trajectory.is_empty());
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
        assert!(delta_search(1, 3, &counts, &q(0), opts).is_err());
    }

    #[test]
    fn positivity_toy_and_conjectured() {
        let c = census(3, 4, 1).unwrap();
        let p = FamilyParams::new(&c, 8, 2).unwrap();
        let r = positivity_report(&p, CountSource::Census).unwrap();
        assert_eq!(r.excess, q(0));
        assert!(!r.positive_index);
        assert_eq!(r.q_report.unwrap().value, q(29));

        let case = GonalityCase::Odd(44);
        for (n1, c) in [(1, 1), (7, 1000), (2, 3)] {
            let p = ConjecturedEstimates::new(n1).params(case, c, 5).unwrap();
            let r = positivity_report(&p, CountSource::Conjectured).unwrap();
            assert!(r.positive_index, "n1={n1} c={c}");
        }
        let p = ConjecturedEstimates::new(1)
            .params(GonalityCase::Odd(43), 10, 5)
            .unwrap();
        assert!(!positivity_report(&p, CountSource::Conjectured).unwrap().positive_index);
    }

    #[test]
    fn miyaoka_yau_flag_on_nongeometric_pack() {
        // g = 1, Ñ₃ = 0, e = Ñ₁ makes K² = 12χ.
        let counts = DegenerationCounts {
            n_tilde: 5.into(),
            n1: 2.into(),
            n22: 3.into(),
            n3: 0.into(),
            e: 2.into(),
            n_sing: 0.into(),
        };
        let p = FamilyParams::from_counts(3, 1, 6, counts, 12, 0).unwrap();
        let r = positivity_report(&p, CountSource::Census).unwrap();
        assert!(r.k2 > q(9) * &r.chi);
        assert!(r.miyaoka_yau_flag);
    }

    #[test]
    fn excess_sign_json_shape() {
        let r = excess_sign(Parity::Even, 50);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        for key in [
            "case",
            "polynomial_coefficients",
            "first_positive_n",
            "paper_claim",
            "match",
            "notes",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["case"], "even");
    }
}
