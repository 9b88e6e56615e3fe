//! The Ramsey bound calculus: the smooth step `tau`, the profile `rho`,
//! `phi`, `alpha`, `alpha*`, smoothness certificates, inductive-step
//! hypotheses, degree diagnostics and log-space bound evaluation.

use std::f64::consts::LN_2;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::quasirandomness::InequalityReport;

/// Largest `k + l` for which binomials and `alpha*` are exact big integers.
pub const EXACT_BINOMIAL_CAP: u64 = 2000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundConfig {
    pub r: u32,
    pub epsilon: f64,
    /// Constant in the `2^{C r^2}` prefactor.
    pub c_eps: f64,
    /// Constant in the hypothesis `r <= c log k`.
    pub c_eps_small: f64,
}

impl BoundConfig {
    pub const DEFAULT_C_EPS: f64 = 1.0;
    pub const DEFAULT_C_EPS_SMALL: f64 = 1e-2;

    pub fn new(r: u32, epsilon: f64, c_eps: f64) -> Result<Self> {
        if r < 5 {
            return Err(Error::domain(format!("r = {r} must be at least 5")));
        }
        if !(epsilon > 0.0 && epsilon < 0.5) {
            return Err(Error::domain(format!("epsilon = {epsilon} is not in (0, 1/2)")));
        }
        if !(c_eps >= 0.0 && c_eps.is_finite()) {
            return Err(Error::domain(format!("C_eps = {c_eps} must be nonnegative")));
        }
        Ok(BoundConfig {
            r,
            epsilon,
            c_eps,
            c_eps_small: Self::DEFAULT_C_EPS_SMALL,
        })
    }

    pub fn with_c_eps_small(mut self, c: f64) -> Result<Self> {
        if !(c > 0.0) {
            return Err(Error::domain("c_eps_small must be positive"));
        }
        self.c_eps_small = c;
        Ok(self)
    }

    fn rf(&self) -> f64 {
        self.r as f64
    }

    /// `(r - 4) / 4`, the height of the plateau `rho(1)`.
    fn height(&self) -> f64 {
        (self.rf() - 4.0) / 4.0
    }

    /// `ln 2^{C r^2}`.
    fn log_prefactor(&self) -> f64 {
        self.c_eps * self.rf() * self.rf() * LN_2
    }
}

/// `6x^5 - 15x^4 + 10x^3` on `[0, 1]`.
pub fn tau(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("tau is defined on [0, 1], got {x}")));
    }
    Ok(tau_raw(x))
}

fn tau_raw(x: f64) -> f64 {
    x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
}

/// `30 x^2 (x - 1)^2`.
pub fn tau_prime(x: f64) -> f64 {
    30.0 * x * x * (x - 1.0) * (x - 1.0)
}

/// `60 x (x - 1) (2x - 1)`.
pub fn tau_second(x: f64) -> f64 {
    60.0 * x * (x - 1.0) * (2.0 * x - 1.0)
}

/// `rho` on `[0, 1]`: zero up to `epsilon`, then a rescaled `tau`.
fn rho_unit(cfg: &BoundConfig, x: f64) -> (f64, f64, f64) {
    let eps = cfg.epsilon;
    if x <= eps {
        return (0.0, 0.0, 0.0);
    }
    let s = 1.0 - eps;
    let y = ((x - eps) / s).min(1.0);
    let h = cfg.height();
    (h * tau_raw(y), h * tau_prime(y) / s, h * tau_second(y) / (s * s))
}

/// `(rho, rho', rho'')` at `x >= 0`, reflecting through `x -> 1/x` above 1.
pub fn rho_with_derivatives(cfg: &BoundConfig, x: f64) -> (f64, f64, f64) {
    if x <= 1.0 {
        return rho_unit(cfg, x);
    }
    let t = 1.0 / x;
    let (v, d1, d2) = rho_unit(cfg, t);
    (v, -d1 * t * t, d2 * t.powi(4) + 2.0 * d1 * t.powi(3))
}

pub fn rho(cfg: &BoundConfig, x: f64) -> f64 {
    rho_with_derivatives(cfg, x).0
}

pub fn rho_prime(cfg: &BoundConfig, x: f64) -> f64 {
    rho_with_derivatives(cfg, x).1
}

pub fn rho_second(cfg: &BoundConfig, x: f64) -> f64 {
    rho_with_derivatives(cfg, x).2
}

/// `rho(l/k) log(k + l)`.
pub fn phi(cfg: &BoundConfig, k: u64, l: u64) -> f64 {
    rho(cfg, l as f64 / k as f64) * ((k + l) as f64).ln()
}

/// `phi(k, l) - phi(k', l')` for nearby arguments, avoiding cancellation.
fn phi_drop(cfg: &BoundConfig, k: u64, l: u64, k2: u64, l2: u64) -> f64 {
    let r1 = rho(cfg, l as f64 / k as f64);
    let r2 = rho(cfg, l2 as f64 / k2 as f64);
    let n1 = (k + l) as f64;
    let n2 = (k2 + l2) as f64;
    // ln n1 - ln n2 = -ln(1 - (n1 - n2)/n1)
    let log_gap = -(-(n1 - n2) / n1).ln_1p();
    (r1 - r2) * n1.ln() + r2 * log_gap
}

/// `ln alpha = C r^2 ln 2 - phi`.
pub fn log_alpha(cfg: &BoundConfig, k: u64, l: u64) -> f64 {
    cfg.log_prefactor() - phi(cfg, k, l)
}

pub fn alpha(cfg: &BoundConfig, k: u64, l: u64) -> LogReal {
    LogReal::from_ln(log_alpha(cfg, k, l))
}

/// Sign and natural-log magnitude of a real number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LogReal {
    sign: i8,
    ln_abs: f64,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        sign: 0,
        ln_abs: f64::NEG_INFINITY,
    };

    /// The positive number `exp(ln)`.
    pub fn from_ln(ln: f64) -> Self {
        LogReal { sign: 1, ln_abs: ln }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            LogReal::ZERO
        } else {
            LogReal {
                sign: if x > 0.0 { 1 } else { -1 },
                ln_abs: x.abs().ln(),
            }
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn ln_abs(&self) -> f64 {
        self.ln_abs
    }

    /// Natural log of a positive value.
    pub fn ln(&self) -> f64 {
        debug_assert!(self.sign > 0);
        self.ln_abs
    }

    pub fn to_f64(&self) -> f64 {
        self.sign as f64 * self.ln_abs.exp()
    }

    pub fn mul(self, other: LogReal) -> LogReal {
        if self.sign == 0 || other.sign == 0 {
            return LogReal::ZERO;
        }
        LogReal {
            sign: self.sign * other.sign,
            ln_abs: self.ln_abs + other.ln_abs,
        }
    }

    pub fn div(self, other: LogReal) -> Result<LogReal> {
        if other.sign == 0 {
            return Err(Error::domain("division by zero"));
        }
        Ok(self.mul(LogReal {
            sign: other.sign,
            ln_abs: -other.ln_abs,
        }))
    }

    pub fn neg(self) -> LogReal {
        LogReal {
            sign: -self.sign,
            ln_abs: self.ln_abs,
        }
    }

    /// Sum via a stable log-sum-exp.
    pub fn add(self, other: LogReal) -> LogReal {
        if self.sign == 0 {
            return other;
        }
        if other.sign == 0 {
            return self;
        }
        let (big, small) = if self.ln_abs >= other.ln_abs {
            (self, other)
        } else {
            (other, self)
        };
        let t = (small.ln_abs - big.ln_abs).exp();
        if big.sign == small.sign {
            LogReal {
                sign: big.sign,
                ln_abs: big.ln_abs + t.ln_1p(),
            }
        } else if t == 1.0 {
            LogReal::ZERO
        } else {
            LogReal {
                sign: big.sign,
                ln_abs: big.ln_abs + (-t).ln_1p(),
            }
        }
    }
}

impl fmt::Display for LogReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.ln_abs),
        }
    }
}

/// Natural log of a big unsigned integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits").ln();
    }
    let shift = bits - 64;
    (x >> shift).to_f64().expect("fits").ln() + shift as f64 * LN_2
}

pub fn binomial_exact(n: u64, k: u64) -> Result<BigUint> {
    if k > n {
        return Ok(BigUint::zero());
    }
    if n > EXACT_BINOMIAL_CAP {
        return Err(Error::Size {
            what: "binomial top",
            got: n as usize,
            cap: EXACT_BINOMIAL_CAP as usize,
        });
    }
    Ok(num_integer::binomial(BigUint::from(n), BigUint::from(k)))
}

/// `ln C(n, k)`: exact below the cap, log-gamma above it.
pub fn log_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if n <= EXACT_BINOMIAL_CAP {
        return ln_biguint(&binomial_exact(n, k).expect("below cap"));
    }
    let lg = |x: u64| libm::lgamma(x as f64 + 1.0);
    lg(n) - lg(k) - lg(n - k)
}

/// `alpha` as a 53-bit dyadic `mantissa * 2^exponent`, and the exact
/// `floor(alpha * C(k+l, k))`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaStar {
    pub mantissa: u64,
    pub exponent: i64,
    pub binom: BigUint,
    pub floor: BigUint,
    /// `alpha * binom - floor` divided by `alpha * binom`.
    pub rounding_loss: f64,
}

impl AlphaStar {
    /// `ln alpha*`, or `-inf` when the floor is zero.
    pub fn ln(&self) -> f64 {
        ln_biguint(&self.floor) - ln_biguint(&self.binom)
    }

    pub fn ln_alpha(&self) -> f64 {
        (self.mantissa as f64).ln() + self.exponent as f64 * LN_2
    }
}

fn dyadic_from_ln(ln: f64) -> (u64, i64) {
    let log2 = ln / LN_2;
    let e = log2.floor();
    let mantissa = ((log2 - e).exp2() * (1u64 << 52) as f64).round() as u64;
    (mantissa, e as i64 - 52)
}

pub fn alpha_star(cfg: &BoundConfig, k: u64, l: u64) -> Result<AlphaStar> {
    if k + l > EXACT_BINOMIAL_CAP {
        return Err(Error::Size {
            what: "k + l",
            got: (k + l) as usize,
            cap: EXACT_BINOMIAL_CAP as usize,
        });
    }
    let binom = binomial_exact(k + l, k)?;
    let (mantissa, exponent) = dyadic_from_ln(log_alpha(cfg, k, l));
    let scaled = &binom * BigUint::from(mantissa);
    let (floor, remainder_ratio) = if exponent >= 0 {
        (scaled << exponent as u64, 0.0)
    } else {
        let shift = (-exponent) as u64;
        let floor = &scaled >> shift;
        let rem = &scaled - (&floor << shift);
        let loss = if rem.is_zero() {
            0.0
        } else {
            (ln_biguint(&rem) - ln_biguint(&scaled)).exp()
        };
        (floor, loss)
    };
    Ok(AlphaStar {
        mantissa,
        exponent,
        binom,
        floor,
        rounding_loss: remainder_ratio,
    })
}

/// Lower bound on `ln alpha*(k, l)`: exact below the cap, and
/// `ln alpha + ln(1 - 1/(alpha C(k+l,k)))` above it.
pub fn log_alpha_star_lower(cfg: &BoundConfig, k: u64, l: u64) -> f64 {
    if k + l <= EXACT_BINOMIAL_CAP {
        let a = alpha_star(cfg, k, l).expect("below cap");
        return a.ln_alpha() + (-a.rounding_loss).ln_1p();
    }
    let ln_count = log_alpha(cfg, k, l) + log_binomial(k + l, k);
    if ln_count <= 0.0 {
        return f64::NEG_INFINITY;
    }
    log_alpha(cfg, k, l) + (-(-ln_count).exp()).ln_1p()
}

/// Checks of the shape, derivative bounds and floor of `rho` on a grid.
pub fn rho_properties_check(cfg: &BoundConfig, grid_size: usize) -> Result<Vec<InequalityReport>> {
    if grid_size < 10 {
        return Err(Error::usage("grid size must be at least 10"));
    }
    let r = cfg.rf();
    let unit: Vec<f64> = (0..=grid_size).map(|i| i as f64 / grid_size as f64).collect();
    // Points above 1 are reached through reciprocals.
    let all: Vec<f64> = unit
        .iter()
        .copied()
        .chain(unit.iter().filter(|&&t| t > 0.0).map(|t| 1.0 / t))
        .collect();
    let mut min_rho = f64::INFINITY;
    let mut max_excess = f64::NEG_INFINITY;
    for &x in &unit {
        let v = rho(cfg, x);
        min_rho = min_rho.min(v);
        max_excess = max_excess.max(v - (r - 4.0) * x / 2.0);
    }
    let mut max_d1: f64 = 0.0;
    let mut max_d2: f64 = 0.0;
    for &x in &all {
        let (_, d1, d2) = rho_with_derivatives(cfg, x);
        max_d1 = max_d1.max(d1.abs());
        max_d2 = max_d2.max(d2.abs());
    }
    let half = BoundConfig {
        epsilon: cfg.epsilon / 2.0,
        ..*cfg
    };
    let eps = cfg.epsilon;
    let floor = (r - 4.0) * eps.powi(3) / 32.0;
    let floor_min = (0..=grid_size)
        .map(|i| eps + (1.0 - eps) * i as f64 / grid_size as f64)
        .map(|x| rho(&half, x))
        .fold(f64::INFINITY, f64::min);
    Ok(vec![
        InequalityReport::float("rho >= 0 on [0,1]", -min_rho, 0.0),
        InequalityReport::float("rho <= (r-4)x/2 on [0,1]", max_excess, 0.0),
        InequalityReport::float("|rho'| <= r", max_d1, r),
        InequalityReport::float("|rho''| <= 10r", max_d2, 10.0 * r),
        InequalityReport::float("rho_{r,eps/2} >= (r-4)eps^3/32 on [eps,1]", floor, floor_min),
    ])
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessCertificate {
    pub config: BoundConfig,
    pub k: u64,
    pub l: u64,
    pub b: f64,
    pub c: f64,
    pub beta: f64,
    pub gamma: f64,
    /// One entry per `m` in `{1, 2, r-1}`: the four ratio checks.
    pub per_m: Vec<(u64, Vec<InequalityReport>)>,
    /// `k, l >= 200 r^4 / eps^2`.
    pub size_precondition: bool,
    /// Whether `alpha*(k, l)` was exact rather than a lower bound.
    pub exact_alpha_star: bool,
}

impl SmoothnessCertificate {
    pub fn checks(&self) -> impl Iterator<Item = &InequalityReport> {
        self.per_m.iter().flat_map(|(_, v)| v.iter())
    }

    pub fn valid(&self) -> bool {
        self.checks().all(|c| c.holds)
    }
}

/// `ln(1 + x)` with `-inf` for `x <= -1`.
fn ln1p_or_neg_inf(x: f64) -> f64 {
    if x <= -1.0 {
        f64::NEG_INFINITY
    } else {
        x.ln_1p()
    }
}

pub fn smoothness_certificate(cfg: &BoundConfig, k: u64, l: u64) -> Result<SmoothnessCertificate> {
    let ms = [1u64, 2, cfg.r as u64 - 1];
    let m_max = cfg.r as u64 - 1;
    if k <= m_max || l <= m_max {
        return Err(Error::domain(format!(
            "k = {k} and l = {l} must exceed r - 1 = {m_max}"
        )));
    }
    let (kf, lf) = (k as f64, l as f64);
    let x = lf / kf;
    let (rv, d1, _) = rho_with_derivatives(cfg, x);
    let eps = cfg.epsilon;
    let log_n = (kf + lf).ln();
    let lemma_base = (4.0 * rv + eps) / (4.0 * (kf + lf));
    let def_base = (2.0 * rv + eps) / (2.0 * (kf + lf));
    let k_term = lf * log_n / (kf * kf) * d1;
    let l_term = log_n / kf * d1;
    let (b, c) = (lemma_base - k_term, lemma_base + l_term);
    let (beta, gamma) = (def_base - k_term, def_base + l_term);
    let ln_star = log_alpha_star_lower(cfg, k, l);
    let ln_alpha_kl = log_alpha(cfg, k, l);
    let mut per_m = Vec::new();
    for &m in &ms {
        let mf = m as f64;
        let drop_k = phi_drop(cfg, k, l, k - m, l);
        let drop_l = phi_drop(cfg, k, l, k, l - m);
        // ln alpha(k-m, l) - ln alpha*(k, l) = drop + (ln alpha(k,l) - ln alpha*(k,l)).
        let slack_star = ln_alpha_kl - ln_star;
        per_m.push((
            m,
            vec![
                InequalityReport::float(
                    format!("exp(phi(k,l)-phi(k-{m},l)) <= 1+{m}b"),
                    drop_k,
                    ln1p_or_neg_inf(mf * b),
                ),
                InequalityReport::float(
                    format!("exp(phi(k,l)-phi(k,l-{m})) <= 1+{m}c"),
                    drop_l,
                    ln1p_or_neg_inf(mf * c),
                ),
                InequalityReport::float(
                    format!("alpha(k-{m},l)/alpha*(k,l) <= 1+{m}beta"),
                    drop_k + slack_star,
                    ln1p_or_neg_inf(mf * beta),
                ),
                InequalityReport::float(
                    format!("alpha(k,l-{m})/alpha*(k,l) <= 1+{m}gamma"),
                    drop_l + slack_star,
                    ln1p_or_neg_inf(mf * gamma),
                ),
            ],
        ));
    }
    let threshold = 200.0 * cfg.rf().powi(4) / (eps * eps);
    Ok(SmoothnessCertificate {
        config: *cfg,
        k,
        l,
        b,
        c,
        beta,
        gamma,
        per_m,
        size_precondition: kf >= threshold && lf >= threshold,
        exact_alpha_star: k + l <= EXACT_BINOMIAL_CAP,
    })
}

/// The four hypotheses of the inductive step, evaluated on a certificate.
pub fn inductive_step_preconditions(
    cfg: &BoundConfig,
    cert: &SmoothnessCertificate,
) -> Vec<InequalityReport> {
    let (kf, lf) = (cert.k as f64, cert.l as f64);
    let r = cfg.rf();
    let log_k = kf.ln();
    let x = lf / kf;
    let direct = kf * cert.beta + lf * cert.gamma;
    let identity = rho(cfg, x) + cfg.epsilon / 2.0;
    let identity_ok = (direct - identity).abs() <= 1e-12 * identity.abs().max(1.0);
    let in_range = x >= cfg.epsilon && x <= 1.0;
    vec![
        InequalityReport::float("k beta + l gamma <= (r-3) l / (2k)", direct, (r - 3.0) * x / 2.0)
            .with_precondition("k beta + l gamma = rho(l/k) + eps/2", identity_ok)
            .with_precondition("l/k in [eps, 1]", in_range),
        InequalityReport::float(
            "|beta| + |gamma| <= r (log k)^2 / k",
            cert.beta.abs() + cert.gamma.abs(),
            r * log_k * log_k / kf,
        ),
        InequalityReport::float(
            "alpha(k,l) >= exp(-r (l/k) log k)",
            -log_alpha(cfg, cert.k, cert.l),
            r * x * log_k,
        ),
        InequalityReport::float("r <= c_eps log k", r, cfg.c_eps_small * log_k),
    ]
}

/// `(max(p beta, (1-p) gamma), 2 max(p, 1-p) (p beta + (1-p) gamma) + 1/n)`.
pub fn degree_regularity_bounds(p: f64, beta: f64, gamma: f64, n: u64) -> Result<(f64, f64)> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let q = 1.0 - p;
    Ok((
        (p * beta).max(q * gamma),
        2.0 * p.max(q) * (p * beta + q * gamma) + 1.0 / n as f64,
    ))
}

/// Half-open interval containing every degree of a Ramsey graph on `n`
/// vertices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegreeWindow {
    pub lo: f64,
    pub hi: f64,
}

impl DegreeWindow {
    pub fn is_empty(&self) -> bool {
        self.lo >= self.hi
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo).max(0.0)
    }
}

pub fn degree_window(
    alpha_km1_l: f64,
    alpha_k_lm1: f64,
    alpha_star_kl: f64,
    k: u64,
    l: u64,
    n: u64,
) -> Result<DegreeWindow> {
    if !(alpha_star_kl > 0.0) {
        return Err(Error::domain("alpha*(k, l) must be positive"));
    }
    let total = (k + l) as f64;
    let n = n as f64;
    Ok(DegreeWindow {
        lo: (1.0 - alpha_k_lm1 / alpha_star_kl * l as f64 / total) * n,
        hi: alpha_km1_l / alpha_star_kl * k as f64 / total * n,
    })
}

/// `(#K3(G) + #K3(complement), C(n,3) - sum_v d_v (n-1-d_v) / 2)`.
pub fn goodman(g: &SimpleGraph) -> (u64, u64) {
    let n = g.n() as u64;
    let mono = g.triangle_count() + g.complement().triangle_count();
    let choose3 = if n < 3 { 0 } else { n * (n - 1) * (n - 2) / 6 };
    let mixed: u64 = g
        .degrees()
        .iter()
        .map(|&d| d as u64 * (n - 1 - d as u64))
        .sum();
    (mono, choose3 - mixed / 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// Both hypotheses of the induction hold.
    Induction,
    /// `min(k, l) <= 2^{C r}` or `min(k/l, l/k) < eps`: Erdős–Szekeres covers it.
    EsBase,
    /// The prescribed `r` is below 5; the Erdős–Szekeres bound is returned.
    EsSmallr,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Induction => "induction",
            Regime::EsBase => "es-base",
            Regime::EsSmallr => "es-smallr",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundResult {
    pub k: u64,
    pub l: u64,
    pub r: u32,
    pub epsilon: f64,
    pub c_eps: f64,
    pub regime: Regime,
    pub phi: f64,
    pub log_alpha: f64,
    pub bound_log: LogReal,
    pub es_baseline_log: LogReal,
    pub ratio_log: LogReal,
    /// `floor(alpha C(k+l, k))` when `k + l` is within the exact cap.
    #[serde(serialize_with = "serialize_big")]
    pub exact_value: Option<BigUint>,
    /// `c` with `ratio <= exp(-c (log k)^2)` implied by the `rho` floor.
    pub c_derived: Option<f64>,
}

fn serialize_big<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.serialize_some(&x.to_string()),
        None => s.serialize_none(),
    }
}

impl BoundResult {
    pub fn improves_on_es(&self) -> bool {
        self.ratio_log.ln() < 0.0
    }
}

fn check_sizes(k: u64, l: u64) -> Result<()> {
    if k == 0 || l == 0 {
        return Err(Error::domain("k and l must be positive"));
    }
    Ok(())
}

/// `R(k+1, l+1) <= 2^{C r^2} exp(-phi(k, l)) C(k+l, k)`, in log space.
pub fn ramsey_upper_bound(cfg: &BoundConfig, k: u64, l: u64) -> Result<BoundResult> {
    check_sizes(k, l)?;
    let phi_v = phi(cfg, k, l);
    let log_a = cfg.log_prefactor() - phi_v;
    let log_es = log_binomial(k + l, k);
    let small = (k.min(l) as f64).log2() <= cfg.c_eps * cfg.rf();
    let ratio = (k.min(l) as f64) / (k.max(l) as f64);
    let regime = if small || ratio < cfg.epsilon {
        Regime::EsBase
    } else {
        Regime::Induction
    };
    let exact_value = if k + l <= EXACT_BINOMIAL_CAP {
        Some(alpha_star(cfg, k, l)?.floor)
    } else {
        None
    };
    Ok(BoundResult {
        k,
        l,
        r: cfg.r,
        epsilon: cfg.epsilon,
        c_eps: cfg.c_eps,
        regime,
        phi: phi_v,
        log_alpha: log_a,
        bound_log: LogReal::from_ln(log_a + log_es),
        es_baseline_log: LogReal::from_ln(log_es),
        ratio_log: LogReal::from_ln(log_a),
        exact_value,
        c_derived: None,
    })
}

/// Chooses `r = floor(eps^3 ln k / (64 C))` and evaluates the bound with
/// `rho_{r, eps/2}`; falls back to Erdős–Szekeres when `r < 5`.
pub fn best_bound(k: u64, l: u64, epsilon: f64, c_eps: f64) -> Result<BoundResult> {
    check_sizes(k, l)?;
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::domain(format!("epsilon = {epsilon} is not in (0, 1/2)")));
    }
    if !(c_eps > 0.0) {
        return Err(Error::domain("C_eps must be positive"));
    }
    let log_k = (k.max(l) as f64).ln();
    let r_real = epsilon.powi(3) * log_k / (64.0 * c_eps);
    if r_real < 5.0 {
        let log_es = log_binomial(k + l, k);
        return Ok(BoundResult {
            k,
            l,
            r: r_real.floor() as u32,
            epsilon,
            c_eps,
            regime: Regime::EsSmallr,
            phi: 0.0,
            log_alpha: 0.0,
            bound_log: LogReal::from_ln(log_es),
            es_baseline_log: LogReal::from_ln(log_es),
            ratio_log: LogReal::from_ln(0.0),
            exact_value: if k + l <= EXACT_BINOMIAL_CAP {
                Some(binomial_exact(k + l, k)?)
            } else {
                None
            },
            c_derived: Some(0.0),
        });
    }
    let r = r_real.floor() as u32;
    let cfg = BoundConfig::new(r, epsilon / 2.0, c_eps)?;
    let mut result = ramsey_upper_bound(&cfg, k, l)?;
    result.epsilon = epsilon;
    // ratio <= C r^2 ln 2 - (r - 4) eps^3 ln k / 32 = -c (ln k)^2.
    let exponent = cfg.log_prefactor() - (r as f64 - 4.0) * epsilon.powi(3) * log_k / 32.0;
    result.c_derived = Some(-exponent / (log_k * log_k));
    Ok(result)
}

/// Flat record for bound tables.
#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub k: u64,
    pub l: u64,
    pub r: u32,
    pub epsilon: f64,
    #[serde(rename = "C_eps")]
    pub c_eps: f64,
    pub phi: f64,
    pub log_alpha: f64,
    pub log_bound: f64,
    pub log_es: f64,
    pub log_ratio: f64,
    pub regime: Regime,
}

impl From<&BoundResult> for BoundRow {
    fn from(b: &BoundResult) -> Self {
        BoundRow {
            k: b.k,
            l: b.l,
            r: b.r,
            epsilon: b.epsilon,
            c_eps: b.c_eps,
            phi: b.phi,
            log_alpha: b.log_alpha,
            log_bound: b.bound_log.ln(),
            log_es: b.es_baseline_log.ln(),
            log_ratio: b.ratio_log.ln(),
            regime: b.regime,
        }
    }
}

/// Roughly geometric grid of integers from `lo` to `hi` inclusive.
pub fn log_grid(lo: u64, hi: u64, points: usize) -> Vec<u64> {
    if points <= 1 || lo >= hi {
        return vec![lo];
    }
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut out: Vec<u64> = (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp().round() as u64)
        .collect();
    out.dedup();
    out
}

/// Erdős–Szekeres bound `C(k + l, k)` as an exact integer.
pub fn es_baseline_exact(k: u64, l: u64) -> Result<BigUint> {
    binomial_exact(k + l, k)
}
