//! Explicit functions that defeat Bombieri-Vinogradov style statements at a
//! given `x`, together with exact checks of the identities behind them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::arith::{self, gcd};
use crate::chars::{self, CharacterGroup};
use crate::disc::{self, Samples, Variant};
use crate::error::{domain, Error, Result};
use crate::multfn::{self, MultFn};
use crate::{e, par, C64};

const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionKind {
    LargePrimePair,
    NoBv,
    NoBv2,
    Gauss,
}

impl FromStr for ObstructionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "large-prime-pair" => ObstructionKind::LargePrimePair,
            "nobv" => ObstructionKind::NoBv,
            "nobv2" => ObstructionKind::NoBv2,
            "gauss" => ObstructionKind::Gauss,
            _ => return domain(format!("unknown obstruction kind `{s}`")),
        })
    }
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionKind::LargePrimePair => "large-prime-pair",
            ObstructionKind::NoBv => "nobv",
            ObstructionKind::NoBv2 => "nobv2",
            ObstructionKind::Gauss => "gauss",
        })
    }
}

#[derive(Debug, Clone)]
pub struct ObstructionSpec {
    pub kind: ObstructionKind,
    pub x: u64,
    /// Moduli run over `Q < q ≤ 2Q`.
    pub big_q: f64,
    /// Prime modulus for `gauss`.
    pub q: Option<u64>,
    /// The function `g` that the pair agrees with off `𝒫`.
    pub base: MultFn,
}

impl ObstructionSpec {
    pub fn new(kind: ObstructionKind, x: u64, big_q: f64) -> Self {
        ObstructionSpec { kind, x, big_q, q: None, base: MultFn::unit() }
    }

    /// Integer moduli in `(Q, 2Q]`.
    pub fn moduli(&self) -> std::ops::RangeInclusive<u64> {
        self.big_q.floor() as u64 + 1..=(2.0 * self.big_q).floor() as u64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairRow {
    pub q: u64,
    pub phi: u64,
    pub delta_plus: C64,
    pub delta_minus: C64,
    pub diff: C64,
    /// `−2#𝒫/φ(q)`, the value forced by the construction.
    pub expected: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoBvRow {
    pub q: u64,
    /// `Δ(1_𝒫, x; q, 1)` computed from the progression sums.
    pub delta_indicator: f64,
    /// Primes of `(x/2, x]` in the class `1 mod q`.
    pub pi_star: u64,
    /// `π* − #𝒫/φ(q)`.
    pub expected: f64,
    pub residual: f64,
    pub delta_f: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NoBv2Row {
    pub m: u64,
    /// Least prime of `I` dividing `m`.
    pub ell: u64,
    pub primes_in_class: u64,
    pub all_in_set: bool,
    pub delta_f: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRow {
    pub n: u64,
    /// `Σ_χ g(χ)χ(n)`.
    pub c_q: C64,
    pub expected: C64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verification {
    Pair(Vec<PairRow>),
    NoBv(Vec<NoBvRow>),
    NoBv2 { interval: (f64, f64), rows: Vec<NoBv2Row> },
    Gauss {
        rows: Vec<GaussRow>,
        in_class_c: bool,
        /// `max |f(p^k) − reconstructed|` from `Λ_f`.
        reconstruction_error: f64,
        /// `|g(χ)|` for nonprincipal `χ`, against `√q/(q−1)`.
        gauss_modulus_error: f64,
    },
}

impl Verification {
    /// Largest residual of the exact identity being verified.
    pub fn max_residual(&self) -> f64 {
        match self {
            Verification::Pair(rows) => rows.iter().map(|r| r.residual).fold(0.0, f64::max),
            Verification::NoBv(rows) => rows.iter().map(|r| r.residual).fold(0.0, f64::max),
            Verification::NoBv2 { rows, .. } => {
                if rows.iter().all(|r| r.all_in_set) { 0.0 } else { f64::INFINITY }
            }
            Verification::Gauss { rows, reconstruction_error, gauss_modulus_error, .. } => rows
                .iter()
                .map(|r| r.error)
                .fold(reconstruction_error.max(*gauss_modulus_error), f64::max),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Obstruction {
    pub spec: ObstructionSpec,
    /// `f_+, f_−` for the pair, a single function otherwise.
    pub functions: Vec<MultFn>,
    /// The prime set `𝒫` (empty for `gauss`).
    pub primes: Vec<u64>,
    pub verification: Verification,
    pub warnings: Vec<String>,
}

/// `ℓ³ > x` and `ℓ⁵ ≤ x²`, exactly.
fn in_interval(ell: u64, x: u64) -> bool {
    let (l, x) = (ell as u128, x as u128);
    l * l * l > x && l.pow(5) <= x * x
}

fn top_primes(x: u64) -> Vec<u64> {
    arith::primes_in_range(x / 2, x)
}

fn override_map(primes: &[u64], v: C64) -> BTreeMap<u64, C64> {
    primes.iter().map(|&p| (p, v)).collect()
}

pub fn construct_obstruction(spec: &ObstructionSpec) -> Result<Obstruction> {
    let x = spec.x;
    if spec.kind != ObstructionKind::Gauss {
        arith::check_bound("obstruction x", x, disc::EVAL_BOUND)?;
        if x < 2 || !(spec.big_q >= 1.0) {
            return domain(format!("obstruction: need x ≥ 2 and Q ≥ 1, got x = {x}, Q = {}", spec.big_q));
        }
    }
    let moduli: Vec<u64> = spec.moduli().collect();
    let mut warnings = Vec::new();
    let (functions, primes, verification) = match spec.kind {
        ObstructionKind::LargePrimePair => {
            let (lo, hi) = (*spec.moduli().start(), *spec.moduli().end());
            let set: Vec<u64> = top_primes(x)
                .into_iter()
                .filter(|&p| {
                    arith::factorize(p - 1)
                        .map(|f| !f.divisors().iter().any(|&d| d >= lo && d <= hi))
                        .unwrap_or(false)
                })
                .collect();
            let plus = spec.base.clone().with_overrides(override_map(&set, ONE))?.named(&format!("pair+({})", spec.base.name()));
            let minus = spec.base.clone().with_overrides(override_map(&set, -ONE))?.named(&format!("pair-({})", spec.base.name()));
            let sp = Samples::new(&plus, x)?;
            let sm = Samples::new(&minus, x)?;
            let count = set.len() as f64;
            let rows = par::map(&moduli, |&q| -> Result<PairRow> {
                let dp = disc::delta(&sp, x, q, 1, &Variant::Plain)?;
                let dm = disc::delta(&sm, x, q, 1, &Variant::Plain)?;
                let phi = arith::phi(q)?;
                let expected = -2.0 * count / phi as f64;
                let diff = dp - dm;
                Ok(PairRow { q, phi, delta_plus: dp, delta_minus: dm, diff, expected, residual: (diff - expected).norm() })
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            (vec![plus, minus], set, Verification::Pair(rows))
        }
        ObstructionKind::NoBv => {
            let in_range = |q: u64| moduli.contains(&q);
            let set: Vec<u64> = top_primes(x)
                .into_iter()
                .filter(|&p| arith::factorize(p - 1).map(|f| f.primes().any(in_range)).unwrap_or(false))
                .collect();
            let f = MultFn::unit().with_overrides(override_map(&set, -ONE))?.named("nobv");
            let samples = Samples::new(&f, x)?;
            let mut ind = vec![C64::new(0.0, 0.0); x as usize + 1];
            for &p in &set {
                ind[p as usize] = ONE;
            }
            let ind = Samples::from_values("indicator", ind);
            let top = top_primes(x);
            let primes_q: Vec<u64> = moduli.iter().copied().filter(|&q| arith::is_prime_u64(q)).collect();
            let rows = par::map(&primes_q, |&q| -> Result<NoBvRow> {
                let pi_star = top.iter().filter(|&&p| p % q == 1).count() as u64;
                let expected = pi_star as f64 - set.len() as f64 / (q - 1) as f64;
                let d = disc::delta(&ind, x, q, 1, &Variant::Plain)?;
                Ok(NoBvRow {
                    q,
                    delta_indicator: d.re,
                    pi_star,
                    expected,
                    residual: (d - expected).norm(),
                    delta_f: disc::delta(&samples, x, q, 1, &Variant::Plain)?,
                })
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            (vec![f], set, Verification::NoBv(rows))
        }
        ObstructionKind::NoBv2 => {
            let set: Vec<u64> = top_primes(x)
                .into_iter()
                .filter(|&p| arith::factorize(p - 1).map(|f| f.primes().any(|l| in_interval(l, x))).unwrap_or(false))
                .collect();
            let f = MultFn::unit().with_overrides(override_map(&set, -ONE))?.named("nobv2");
            let samples = Samples::new(&f, x)?;
            let top = top_primes(x);
            let hits: Vec<(u64, u64)> = moduli
                .iter()
                .filter_map(|&m| {
                    let fac = arith::factorize(m).ok()?;
                    let ell = fac.primes().find(|&l| in_interval(l, x))?;
                    Some((m, ell))
                })
                .collect();
            let rows = par::map(&hits, |&(m, ell)| -> Result<NoBv2Row> {
                let in_class: Vec<u64> = top.iter().copied().filter(|&p| p % m == 1).collect();
                Ok(NoBv2Row {
                    m,
                    ell,
                    primes_in_class: in_class.len() as u64,
                    all_in_set: in_class.iter().all(|p| set.binary_search(p).is_ok()),
                    delta_f: disc::delta(&samples, x, m, 1, &Variant::Plain)?,
                })
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let xf = x as f64;
            (vec![f], set, Verification::NoBv2 { interval: (xf.cbrt(), xf.powf(0.4)), rows })
        }
        ObstructionKind::Gauss => {
            let q = spec.q.ok_or_else(|| Error::Domain("gauss obstruction needs a modulus q".into()))?;
            if !arith::is_prime_u64(q) {
                return domain(format!("gauss obstruction: q = {q} is not prime"));
            }
            let f = MultFn::gauss(q)?;
            let group = CharacterGroup::new(q)?;
            let coeffs: Vec<(C64, Vec<C64>)> = group.characters().map(|c| (chars::gauss_g(&c), c.values())).collect();
            let rows = (0..q)
                .map(|n| {
                    let c_q = coeffs.iter().fold(C64::new(0.0, 0.0), |acc, (g, v)| acc + g * v[n as usize]);
                    let expected = if gcd(n, q) == 1 { e(n as f64 / q as f64) } else { C64::new(0.0, 0.0) };
                    GaussRow { n, c_q, expected, error: (c_q - expected).norm() }
                })
                .collect();
            let bound = x.max(q * q).min(1 << 16);
            let table = multfn::lambda_f(&f, bound)?;
            let reconstruction_error = table
                .prime_powers()
                .into_iter()
                .map(|(p, k, _)| (table.reconstruct(p, k) - f.prime_power(p, k)).norm())
                .fold(0.0, f64::max);
            let want = (q as f64).sqrt() / (q - 1) as f64;
            let gauss_modulus_error = group
                .characters()
                .filter(|c| !c.is_principal())
                .map(|c| (chars::gauss_g(&c).norm() - want).abs())
                .fold(0.0, f64::max);
            let in_class_c = multfn::class_c_check(&f, bound)?.in_class;
            if !in_class_c {
                warnings.push(format!("gauss:{q} fails the class-C check up to {bound}"));
            }
            (vec![f], Vec::new(), Verification::Gauss { rows, in_class_c, reconstruction_error, gauss_modulus_error })
        }
    };
    if spec.kind != ObstructionKind::Gauss && primes.is_empty() {
        warnings.push(format!("{}: the prime set is empty at x = {x}", spec.kind));
    }
    Ok(Obstruction { spec: spec.clone(), functions, primes, verification, warnings })
}
