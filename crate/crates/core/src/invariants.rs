//! Numerical invariants of the surface supporting a sweeping family.
//!
//! Inputs are the census counts of `(k, b)`, the aggregate fiber degree `c`
//! of the branch divisor and the genus `g(X)` of the base curve. Everything
//! is evaluated in exact rationals. Where two algebraic routes exist for the
//! same quantity (a closed form and its `α`-form, or a closed form and a
//! direct subtraction) both are evaluated and must agree exactly.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::degeneration::{DegenerationCensus, DegenerationCounts};
use crate::error::{Error, Result};
use crate::exact::{self, as_integer, format_rational, q, q_frac, Q};

/// Parameter pack for one family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyParams {
    pub k: u32,
    pub g: u32,
    pub b: u32,
    /// Total fiber degree `c = Σ c_i` of the branch divisor.
    pub c: BigInt,
    /// Genus of the base curve `X`.
    pub gx: BigInt,
    /// `X` carries a special very ample divisor (suppresses the degree floor warning).
    pub special_base: bool,
    pub counts: DegenerationCounts,
}

impl FamilyParams {
    pub fn new(census: &DegenerationCensus, c: impl Into<BigInt>, gx: impl Into<BigInt>) -> Result<Self> {
        Self::from_counts(census.k, census.g, census.b, census.counts.clone(), c, gx)
    }

    /// Builds a pack from bare counts; used for sweeps and conjectured estimates.
    pub fn from_counts(
        k: u32,
        g: u32,
        b: u32,
        counts: DegenerationCounts,
        c: impl Into<BigInt>,
        gx: impl Into<BigInt>,
    ) -> Result<Self> {
        let (c, gx) = (c.into(), gx.into());
        if k < 2 {
            return Err(Error::Domain(format!("k = {k} must be at least 2")));
        }
        if b != 2 * g + 2 * k - 2 {
            return Err(Error::Domain(format!(
                "b = {b} but 2g + 2k - 2 = {}",
                2 * g + 2 * k - 2
            )));
        }
        if c.is_negative() {
            return Err(Error::Domain(format!("c = {c} must be nonnegative")));
        }
        if gx.is_negative() {
            return Err(Error::Domain(format!("g(X) = {gx} must be nonnegative")));
        }
        Ok(Self {
            k,
            g,
            b,
            c,
            gx,
            special_base: false,
            counts,
        })
    }

    pub fn with_special_base(mut self, special: bool) -> Self {
        self.special_base = special;
        self
    }

    pub fn with_gx(&self, gx: impl Into<BigInt>) -> Self {
        Self {
            gx: gx.into(),
            ..self.clone()
        }
    }

    /// Non-fatal observations about the parameters.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let b = BigInt::from(self.b);
        if self.c.is_zero() {
            out.push("c = 0: degenerate branch divisor, values are formal".to_string());
        } else if self.c < b {
            out.push(format!(
                "c = {} < b = {}: some c_i would vanish, parameters are not geometric",
                self.c, self.b
            ));
        }
        if !self.special_base && self.c < &b * (&self.gx + 3) {
            out.push(format!(
                "c = {} < b·(g(X)+3) = {}: a nonspecial very ample divisor on a general X needs c_i ≥ g(X)+3",
                self.c,
                &b * (&self.gx + 3)
            ));
        }
        if self.k > (self.g + 3) / 2 {
            out.push(format!(
                "k = {} exceeds the maximal gonality {} of genus {}",
                self.k,
                (self.g + 3) / 2,
                self.g
            ));
        }
        out
    }

    fn n(&self) -> Q {
        q(self.counts.n_tilde.clone())
    }
    fn n1(&self) -> Q {
        q(self.counts.n1.clone())
    }
    fn n22(&self) -> Q {
        q(self.counts.n22.clone())
    }
    fn n3(&self) -> Q {
        q(self.counts.n3.clone())
    }
    fn e(&self) -> Q {
        q(self.counts.e.clone())
    }
    fn n_sing(&self) -> Q {
        q(self.counts.n_sing.clone())
    }
    fn cq(&self) -> Q {
        q(self.c.clone())
    }
    fn gxq(&self) -> Q {
        q(self.gx.clone())
    }
    fn bq(&self) -> Q {
        q(self.b)
    }
    fn gq(&self) -> Q {
        q(self.g)
    }
    /// `(b - 1)c`, the number of nodes of the branch divisor.
    fn nodes(&self) -> Q {
        (self.bq() - q(1)) * self.cq()
    }
    /// `Ñ (g(X) - 1)(g - 1)`, shared by `K²` and `χ`.
    fn base_term(&self) -> Q {
        self.n() * (self.gxq() - q(1)) * (self.gq() - q(1))
    }
}

/// Genus of the base `Y` of the fibration.
pub fn genus_y(p: &FamilyParams) -> Result<BigInt> {
    let two_gy_minus_two = p.n() * (q(2) * p.gxq() - q(2)) + q_frac(2, 3) * p.nodes() * p.n3();
    let gy = q(1) + two_gy_minus_two / q(2);
    as_integer(&gy).ok_or_else(|| {
        Error::invariant(format!(
            "g(Y) = {} is not an integer; N3 = {} must be divisible by 3",
            format_rational(&gy),
            p.counts.n3
        ))
    })
}

/// Node and singular-fiber counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeCounts {
    #[serde(with = "exact::rational")]
    pub i_x: Q,
    #[serde(with = "exact::rational")]
    pub i_y: Q,
    /// Number of singular fibers.
    #[serde(with = "exact::rational")]
    pub r: Q,
}

pub fn node_counts(p: &FamilyParams) -> NodeCounts {
    NodeCounts {
        i_x: p.nodes(),
        i_y: (p.n1() + p.n22() + p.n3() / q(3)) * p.nodes(),
        r: p.n_sing() * p.nodes(),
    }
}

/// Topological Euler characteristic `e(F) = 4(g-1)(g(Y)-1) + 2r`.
pub fn euler_f(p: &FamilyParams) -> Result<(BigInt, NodeCounts)> {
    let gy = genus_y(p)?;
    let nodes = node_counts(p);
    let value = q(4) * (p.gq() - q(1)) * (q(gy) - q(1)) + q(2) * &nodes.r;
    let value = as_integer(&value).ok_or_else(|| Error::invariant("e(F) is not integral"))?;
    Ok((value, nodes))
}

/// Coefficient `α` of `c` in `K²_F`; independent of `g(X)`.
pub fn alpha(p: &FamilyParams) -> Q {
    (p.bq() - q(1)) * (q(2) * p.e() + p.n1() + (q(8) * p.gq() - q(7)) * p.n3() / q(3)) - q(3) * p.n()
}

/// Coefficient `α'` of `c` in `χ(O_F)`; independent of `g(X)`.
pub fn alpha_prime(p: &FamilyParams) -> Q {
    ((p.bq() - q(1)) * (q(3) * p.n1() + (q(12) * p.gq() - q(11)) * p.n3() / q(3)) - q(3) * p.n()) / q(12)
}

/// `K²_F`, from the closed form, cross-checked against `cα + 8Ñ(g(X)-1)(g-1)`.
pub fn k_squared(p: &FamilyParams) -> Result<Q> {
    let bracket = (p.bq() - q(1)) * (q(2) * p.e() + p.n1() + (q(8) * p.gq() - q(7)) * (p.n3() / q(3))) - q(3) * p.n();
    let closed = p.cq() * bracket + q(8) * p.n() * (p.gxq() - q(1)) * (p.gq() - q(1));
    let alpha_form = p.cq() * alpha(p) + q(8) * p.base_term();
    if closed != alpha_form {
        return Err(Error::invariant(format!(
            "K² closed form {closed} differs from α-form {alpha_form}"
        )));
    }
    Ok(closed)
}

/// `χ(O_F)` and whether it is integral.
pub fn chi_f(p: &FamilyParams) -> Result<(Q, bool)> {
    let bracket = (p.bq() - q(1)) * (q(3) * p.n1() + (q(12) * p.gq() - q(11)) * (p.n3() / q(3))) - q(3) * p.n();
    let closed = p.cq() / q(12) * bracket + p.n() * (p.gxq() - q(1)) * (p.gq() - q(1));
    let alpha_form = alpha_prime(p) * p.cq() + p.base_term();
    if closed != alpha_form {
        return Err(Error::invariant(format!(
            "χ closed form {closed} differs from α'-form {alpha_form}"
        )));
    }
    let integral = closed.is_integer();
    Ok((closed, integral))
}

/// `K² - 8χ`, from the closed form, asserted equal to the direct subtraction.
pub fn index_excess(p: &FamilyParams) -> Result<Q> {
    let closed = p.cq() * ((p.bq() - q(1)) * (q(2) * p.e() - p.n1() + p.n3() / q(9)) - p.n());
    let direct = k_squared(p)? - q(8) * chi_f(p)?.0;
    if closed != direct {
        return Err(Error::invariant(format!(
            "K² - 8χ closed form {closed} differs from direct subtraction {direct}"
        )));
    }
    Ok(closed)
}

/// `K²/χ` and the slope `K²_{F/Y} / χ_f` of the fibration over `Y`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioSlope {
    #[serde(with = "exact::opt_rational")]
    pub ratio: Option<Q>,
    #[serde(with = "exact::opt_rational")]
    pub slope: Option<Q>,
    pub notes: Vec<String>,
}

pub fn ratio_and_slope(p: &FamilyParams) -> Result<RatioSlope> {
    let k2 = k_squared(p)?;
    let (chi, _) = chi_f(p)?;
    let gy = q(genus_y(p)?);
    let mut notes = Vec::new();
    let ratio = if chi.is_zero() {
        notes.push("χ = 0: ratio K²/χ undefined".to_string());
        None
    } else {
        Some(&k2 / &chi)
    };
    let base = (p.gq() - q(1)) * (gy - q(1));
    let rel_chi = &chi - &base;
    let slope = if rel_chi.is_zero() {
        notes.push("relative χ = 0: slope undefined".to_string());
        None
    } else {
        Some((k2 - q(8) * base) / rel_chi)
    };
    Ok(RatioSlope { ratio, slope, notes })
}

/// Label carried for the irregularity; never derived.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IrregularityLabel {
    #[serde(with = "exact::rational")]
    pub value: Q,
    pub label: String,
}

/// Every invariant of one family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub k: u32,
    pub g: u32,
    pub b: u32,
    #[serde(with = "exact::rational")]
    pub c: Q,
    #[serde(with = "exact::rational")]
    pub gx: Q,
    #[serde(with = "exact::rational")]
    pub gy: Q,
    #[serde(flatten)]
    pub nodes: NodeCounts,
    #[serde(with = "exact::rational")]
    pub e_f: Q,
    #[serde(with = "exact::rational")]
    pub k2: Q,
    #[serde(with = "exact::rational")]
    pub chi: Q,
    pub chi_integral: bool,
    #[serde(with = "exact::rational")]
    pub alpha: Q,
    #[serde(with = "exact::rational")]
    pub alpha_prime: Q,
    #[serde(with = "exact::rational")]
    pub excess: Q,
    #[serde(with = "exact::opt_rational")]
    pub ratio: Option<Q>,
    #[serde(with = "exact::opt_rational")]
    pub slope: Option<Q>,
    pub positive_index: bool,
    /// `12χ = K² + e(F)` held exactly.
    pub noether: bool,
    /// `K² > 9χ`, which no surface of general type satisfies.
    pub miyaoka_yau_exceeded: bool,
    pub q_report: IrregularityLabel,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

pub const IRREGULARITY_LABEL: &str = "q(F) = g(Y) for a general member of the family (reported label, not computed)";

/// Evaluates the whole pack, including the Noether identity check.
pub fn evaluate(p: &FamilyParams) -> Result<SurfaceInvariants> {
    let gy = q(genus_y(p)?);
    let (e_f, nodes) = euler_f(p)?;
    let e_f = q(e_f);
    let k2 = k_squared(p)?;
    let (chi, chi_integral) = chi_f(p)?;
    if q(12) * &chi != &k2 + &e_f {
        return Err(Error::invariant(format!(
            "Noether identity fails: 12χ = {} but K² + e(F) = {}",
            q(12) * &chi,
            &k2 + &e_f
        )));
    }
    let excess = index_excess(p)?;
    let RatioSlope { ratio, slope, notes } = ratio_and_slope(p)?;
    Ok(SurfaceInvariants {
        k: p.k,
        g: p.g,
        b: p.b,
        c: p.cq(),
        gx: p.gxq(),
        q_report: IrregularityLabel {
            value: gy.clone(),
            label: IRREGULARITY_LABEL.to_string(),
        },
        gy,
        nodes,
        positive_index: excess.is_positive(),
        miyaoka_yau_exceeded: k2 > q(9) * &chi,
        e_f,
        k2,
        chi,
        chi_integral,
        alpha: alpha(p),
        alpha_prime: alpha_prime(p),
        excess,
        ratio,
        slope,
        noether: true,
        warnings: p.warnings(),
        notes,
    })
}

/// Divisor class `s·S + f·F + x·E` on the product `Y × P¹` blown up at the
/// type-(1) nodes; `E` is the total exceptional divisor over `n` points.
#[derive(Debug, Clone, PartialEq, Eq)]
struct BlownUpClass {
    s: Q,
    f: Q,
    exc: Q,
}

impl BlownUpClass {
    fn dot(&self, other: &Self, points: &Q) -> Q {
        &self.s * &other.f + &self.f * &other.s - &self.exc * &other.exc * points
    }
}

/// One way of chaining `K²_G → K²_S → K²_F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRoute {
    /// `2R·π*K_A` as used by this route.
    #[serde(with = "exact::rational")]
    pub two_r_pi_ka: Q,
    #[serde(with = "exact::rational")]
    pub kg2: Q,
    #[serde(with = "exact::rational")]
    pub ks2: Q,
    #[serde(with = "exact::rational")]
    pub kf2: Q,
    /// `kf2 - K²_F(closed form)`.
    #[serde(with = "exact::rational")]
    pub discrepancy: Q,
    pub matches_closed_form: bool,
}

/// Step-by-step intersection numbers behind `K²_F`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    #[serde(with = "exact::rational")]
    pub ea2: Q,
    #[serde(with = "exact::rational")]
    pub tau_tilde_sq: Q,
    #[serde(with = "exact::rational")]
    pub r2: Q,
    #[serde(with = "exact::rational")]
    pub r_rtilde: Q,
    /// `E_A²` and `τ̃²` recomputed by intersection calculus on the blow-up.
    #[serde(with = "exact::rational")]
    pub ea2_calculus: Q,
    #[serde(with = "exact::rational")]
    pub tau_tilde_sq_calculus: Q,
    pub closed_forms_consistent: bool,
    /// `(π*K_A)² = k·K_A²`.
    #[serde(with = "exact::rational")]
    pub pi_ka_sq: Q,
    /// Uses the printed intermediate `[2b(g(X)-1) - 2c]Ñ + b(b-1)c·2Ñ₃/3`.
    pub printed_route: ChainRoute,
    /// Uses `2τ̃·K_A` expanded on the blow-up.
    pub first_principles_route: ChainRoute,
    #[serde(with = "exact::rational")]
    pub kf2_closed: Q,
    /// Intersection facts used as constants, not recomputed.
    pub recorded_facts: Vec<String>,
}

/// Recomputes the intersection chain and compares it with the closed form of `K²_F`.
///
/// The four primary numbers are checked against an independent intersection
/// calculation where one exists; the chain routes are diagnostic only.
pub fn audit_chain(p: &FamilyParams) -> Result<AuditReport> {
    let gy = q(genus_y(p)?);
    let k = q(p.k);
    let b = p.bq();
    let nodes = p.nodes();
    let blown_up = &nodes * p.n1();

    let ea2 = -(&nodes * p.n1());
    let tau_tilde_sq = q(2) * &b * p.cq() * p.n() - q(4) * &nodes * p.n1();
    let r2 = (p.n() + (&b - q(1)) * (p.n3() / q(3) - p.n1())) * p.cq();
    let r_rtilde = &nodes * (q(2) * p.n22() + q_frac(4, 3) * p.n3());

    // τ = ν*(b s + c f) = b s + cÑ f; τ̃ = τ - 2E_A; K_A = -2s + (2g(Y)-2) f + E_A.
    let exc = BlownUpClass {
        s: Q::zero(),
        f: Q::zero(),
        exc: Q::one(),
    };
    let tau_tilde = BlownUpClass {
        s: b.clone(),
        f: p.cq() * p.n(),
        exc: q(-2),
    };
    let k_a = BlownUpClass {
        s: q(-2),
        f: q(2) * &gy - q(2),
        exc: Q::one(),
    };
    let ea2_calculus = exc.dot(&exc, &blown_up);
    let tau_tilde_sq_calculus = tau_tilde.dot(&tau_tilde, &blown_up);
    let closed_forms_consistent = ea2_calculus == ea2 && tau_tilde_sq_calculus == tau_tilde_sq;

    let ka_sq = k_a.dot(&k_a, &blown_up);
    let pi_ka_sq = &k * &ka_sq;
    let kf2_closed = k_squared(p)?;

    let printed =
        (q(2) * &b * (p.gxq() - q(1)) - q(2) * p.cq()) * p.n() + &b * (&b - q(1)) * p.cq() * q(2) * p.n3() / q(3);
    let first_principles = q(2) * tau_tilde.dot(&k_a, &blown_up);

    let route = |two_r_pi_ka: Q| -> ChainRoute {
        let kg2 = &r2 + &two_r_pi_ka + &pi_ka_sq;
        let ks2 = &kg2 + (&k - q(2)) * p.n1() * &nodes;
        let kf2 = &ks2 + q(2) * &nodes * p.e();
        let discrepancy = &kf2 - &kf2_closed;
        ChainRoute {
            two_r_pi_ka,
            kg2,
            ks2,
            kf2,
            matches_closed_form: discrepancy.is_zero(),
            discrepancy,
        }
    };

    Ok(AuditReport {
        printed_route: route(printed),
        first_principles_route: route(first_principles),
        ea2,
        tau_tilde_sq,
        r2,
        r_rtilde,
        ea2_calculus,
        tau_tilde_sq_calculus,
        closed_forms_consistent,
        pi_ka_sq,
        kf2_closed,
        recorded_facts: vec![
            "π_*R = τ̃".into(),
            "π*π_*R = 2R + R̃".into(),
            "R·E = 0 and E·R̃ = 2 for each contracted (-1)-curve E".into(),
            "R·E = 2 and E·R̃ = 0 for each (-2)-curve E mapped 2:1 onto an exceptional curve".into(),
        ],
    })
}
