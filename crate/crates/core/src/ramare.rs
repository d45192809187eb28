//! Ramaré's weight, the progression-weight function `F`, and the
//! sieve/bilinear split of `Σ f(n)F(n)`.

use num_rational::Ratio;

use crate::arith::{self, gcd};
use crate::disc::{QRange, Samples};
use crate::error::{domain, Error, Result};
use crate::{par, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// `w(n) = 1/(#{Y ≤ p < Z : p | n} + 1)`, exactly.
pub fn ramare_weight(n: u64, y: f64, z: f64) -> Result<Ratio<u64>> {
    if n == 0 {
        return domain("ramare_weight: n = 0");
    }
    let count = arith::factorize(n)?
        .primes()
        .filter(|&p| p as f64 >= y && (p as f64) < z)
        .count() as u64;
    Ok(Ratio::new(1, count + 1))
}

/// `Σ_{Y≤p<Z, p^k ‖ n} w(n/p^k)`, exactly.
pub fn indicator_sum(n: u64, y: f64, z: f64) -> Result<Ratio<u64>> {
    let fac = arith::factorize(n)?;
    let mut total = Ratio::from_integer(0);
    for &(p, k) in &fac.factors {
        if (p as f64) >= y && (p as f64) < z {
            total += ramare_weight(n / p.pow(k), y, z)?;
        }
    }
    Ok(total)
}

/// First `n ≤ limit` where the indicator sum differs from
/// `1_{some p ∈ [Y,Z) divides n}`, if any.
pub fn indicator_identity_check(limit: u64, y: f64, z: f64) -> Result<Option<u64>> {
    let sieve = arith::sieve_for(limit as usize);
    let in_range = |p: u64| (p as f64) >= y && (p as f64) < z;
    for n in 1..=limit {
        let factors = sieve.factor(n as usize);
        let hits = factors.iter().filter(|&&(p, _)| in_range(p)).count() as u64;
        let mut total = Ratio::<u64>::from_integer(0);
        for &(p, k) in &factors {
            if in_range(p) {
                let m = n / p.pow(k);
                let c = sieve.factor(m as usize).iter().filter(|&&(r, _)| in_range(r)).count() as u64;
                total += Ratio::new(1, c + 1);
            }
        }
        let want = Ratio::from_integer(u64::from(hits > 0));
        if total != want {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamareParams {
    pub y: f64,
    pub z: f64,
    /// Restrict the main sum to `n ≥ Z^9`.
    pub restrict_main: bool,
}

impl RamareParams {
    pub fn new(y: f64, z: f64) -> Result<Self> {
        if !(y >= 2.0 && y < z) {
            return domain(format!("ramare: need 2 ≤ Y < Z, got Y = {y}, Z = {z}"));
        }
        Ok(RamareParams { y, z, restrict_main: true })
    }

    pub fn u_ramare(&self) -> f64 {
        self.z.ln() / self.y.ln()
    }

    /// `P ∈ {Y, 2Y, 4Y, …} ∩ [Y, Z)`.
    pub fn scales(&self) -> Vec<f64> {
        std::iter::successors(Some(self.y), |p| Some(2.0 * p))
            .take_while(|&p| p < self.z)
            .collect()
    }
}

/// One progression term of `F`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FTerm {
    pub q: u64,
    pub xi: C64,
    pub a: i64,
}

/// `F(n) = Σ_q ξ_q (1_{n≡a_q (q)} − q_r^{-1} 1_{n≡a_q (q_s)})`.
#[derive(Debug, Clone, PartialEq)]
pub struct FSpec {
    pub terms: Vec<FTerm>,
    pub w: u64,
    /// Set `F(a) = 0` at this `n`.
    pub zero_at: Option<i64>,
}

fn term_value(sums_q: &[C64], sums_qs: &[C64], a: u64, q_s: u64, q_r: u64) -> C64 {
    sums_q[a as usize] - sums_qs[(a % q_s) as usize] / q_r as f64
}

fn phase_of(v: C64) -> C64 {
    if v.norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        v.conj() / v.norm()
    }
}

impl FSpec {
    /// The choice that turns `Σ f(n)F(n)` into `Σ_q max_a |…|`: for each `q`
    /// the unit `a_q` maximizing `|Σ_{n≡a (q)} f − q_r^{-1} Σ_{n≡a (q_s)} f|`
    /// and `ξ_q` of modulus one making that term real and nonnegative.
    pub fn extremal(f: &Samples, x: u64, range: QRange, w: u64) -> Result<Self> {
        let qs: Vec<u64> = (range.lo + 1..=range.hi).collect();
        let terms = par::map(&qs, |&q| -> Result<FTerm> {
            let split = arith::smooth_rough_split(q, w)?;
            let sq = f.progression_sums(q, x)?;
            let ss = f.progression_sums(split.q_s, x)?;
            let (mut best, mut arg, mut val) = (-1.0, 1u64, ZERO);
            for a in (0..q).filter(|&a| gcd(a, q) == 1) {
                let v = term_value(&sq, &ss, a, split.q_s, split.q_r);
                if v.norm() > best {
                    best = v.norm();
                    arg = a;
                    val = v;
                }
            }
            Ok(FTerm { q, xi: phase_of(val), a: arg as i64 })
        });
        Ok(FSpec { terms: terms.into_iter().collect::<Result<_>>()?, w, zero_at: None })
    }

    /// Every `a_q = a` (moduli not coprime to `a` are skipped) with `F(a) = 0`.
    pub fn fixed_residue(f: &Samples, x: u64, range: QRange, a: i64, w: u64) -> Result<Self> {
        let qs: Vec<u64> = (range.lo + 1..=range.hi)
            .filter(|&q| gcd(a.unsigned_abs(), q) == 1)
            .collect();
        let terms = par::map(&qs, |&q| -> Result<FTerm> {
            let split = arith::smooth_rough_split(q, w)?;
            let sq = f.progression_sums(q, x)?;
            let ss = f.progression_sums(split.q_s, x)?;
            let r = a.rem_euclid(q as i64) as u64;
            Ok(FTerm { q, xi: phase_of(term_value(&sq, &ss, r, split.q_s, split.q_r)), a })
        });
        Ok(FSpec { terms: terms.into_iter().collect::<Result<_>>()?, w, zero_at: Some(a) })
    }

    /// Largest modulus over 2, the `Q` of `q ∼ Q`.
    pub fn big_q(&self) -> f64 {
        self.terms.iter().map(|t| t.q).max().unwrap_or(0) as f64 / 2.0
    }
}

#[derive(Debug, Clone)]
struct BuiltTerm {
    q: u64,
    q_s: u64,
    inv_q_r: f64,
    a_q: u64,
    a_s: u64,
    xi: C64,
}

/// An evaluable `F`.
#[derive(Debug, Clone)]
pub struct BuiltF {
    spec: FSpec,
    terms: Vec<BuiltTerm>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FNorms {
    pub sup: f64,
    pub l1: f64,
    pub l2_squared: f64,
}

/// Validates `spec` and prepares `F` for evaluation.
pub fn build_f(spec: &FSpec) -> Result<BuiltF> {
    if spec.w < 1 {
        return domain("build_f: w must be ≥ 1");
    }
    let mut terms = Vec::with_capacity(spec.terms.len());
    for t in &spec.terms {
        if t.q == 0 || gcd(t.a.unsigned_abs(), t.q) != 1 {
            return domain(format!("build_f: gcd({}, {}) ≠ 1", t.a, t.q));
        }
        let split = arith::smooth_rough_split(t.q, spec.w)?;
        terms.push(BuiltTerm {
            q: t.q,
            q_s: split.q_s,
            inv_q_r: 1.0 / split.q_r as f64,
            a_q: t.a.rem_euclid(t.q as i64) as u64,
            a_s: t.a.rem_euclid(split.q_s as i64) as u64,
            xi: t.xi,
        });
    }
    Ok(BuiltF { spec: spec.clone(), terms })
}

impl BuiltF {
    pub fn spec(&self) -> &FSpec {
        &self.spec
    }

    pub fn eval(&self, n: u64) -> C64 {
        if self.spec.zero_at == Some(n as i64) {
            return ZERO;
        }
        let mut v = ZERO;
        for t in &self.terms {
            if n % t.q == t.a_q {
                v += t.xi;
            }
            if n % t.q_s == t.a_s {
                v -= t.xi * t.inv_q_r;
            }
        }
        v
    }

    /// `F(0..=x)`, accumulated progression by progression.
    pub fn values(&self, x: u64) -> Vec<C64> {
        let mut v = vec![ZERO; x as usize + 1];
        for t in &self.terms {
            let mut n = t.a_q as usize;
            while n <= x as usize {
                v[n] += t.xi;
                n += t.q as usize;
            }
            let mut n = t.a_s as usize;
            let dec = t.xi * t.inv_q_r;
            while n <= x as usize {
                v[n] -= dec;
                n += t.q_s as usize;
            }
        }
        v[0] = self.eval(0);
        if let Some(a) = self.spec.zero_at {
            if a >= 0 && a as u64 <= x {
                v[a as usize] = ZERO;
            }
        }
        v
    }

    /// `sup |F|`, `Σ|F|` and `Σ|F|²` over `1 ≤ n ≤ x`.
    pub fn norms(&self, x: u64) -> FNorms {
        let v = self.values(x);
        v[1..].iter().fold(FNorms { sup: 0.0, l1: 0.0, l2_squared: 0.0 }, |acc, z| FNorms {
            sup: acc.sup.max(z.norm()),
            l1: acc.l1 + z.norm(),
            l2_squared: acc.l2_squared + z.norm_sqr(),
        })
    }

    /// `Σ_{n≤x, d|n} |F(n)|`.
    pub fn divisibility_sum(&self, d: u64, x: u64) -> f64 {
        (1..=x / d).map(|k| self.eval(d * k).norm()).sum()
    }

    /// Pointwise triangle-inequality majorant `Σ_q (1_{n≡a_q (q)} + q_r^{-1} 1_{n≡a_q (q_s)})`.
    pub fn majorant(&self, n: u64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                f64::from(u8::from(n % t.q == t.a_q)) + t.inv_q_r * f64::from(u8::from(n % t.q_s == t.a_s))
            })
            .sum()
    }
}

/// Bilinear data at one dyadic scale `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaleRow {
    pub p_scale: f64,
    pub primes: usize,
    /// `E_{p,p'∼P} |Σ_m F(pm) conj F(p'm)|`.
    pub average: f64,
    /// The `p = p'` part of `average`.
    pub diagonal: f64,
    /// `(P x · average)^{1/2}`.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RamareDecomposition {
    pub params: RamareParams,
    pub x: u64,
    pub main_sum: C64,
    pub t: f64,
    pub e_sieve: f64,
    pub e_bilinear: f64,
    pub scales: Vec<ScaleRow>,
    /// `Σ_{n≤x} |F(n)| 1_{(n, Π p)=1}`, for the sieve-term diagnostic.
    pub sieve_mass: f64,
}

/// Computes the four quantities of the decomposition by direct summation.
pub fn decompose(f: &Samples, big_f: &BuiltF, x: u64, params: RamareParams) -> Result<RamareDecomposition> {
    let z2 = params.z * params.z;
    if z2 > x as f64 {
        return domain(format!("decompose: Z² = {z2} exceeds x = {x}"));
    }
    if x > f.x() {
        return Err(Error::Resource(format!("decompose: x = {x} beyond tabulated f")));
    }
    let fv = f.values();
    let fx = big_f.values(x);
    let start = if params.restrict_main {
        let z9 = params.z.powi(9);
        if z9 > x as f64 { x + 1 } else { z9.ceil() as u64 }
    } else {
        1
    };
    let main_sum = (start.max(1)..=x).fold(ZERO, |acc, n| acc + fv[n as usize] * fx[n as usize]);

    let t = (1..=z2.floor() as u64)
        .map(|d| {
            let s: f64 = (d..=x).step_by(d as usize).map(|n| fx[n as usize].norm()).sum();
            d as f64 * s
        })
        .fold(0.0, f64::max);

    let mut rough = vec![true; x as usize + 1];
    let sieve_primes: Vec<u64> = arith::primes_up_to(params.z.ceil() as u64)
        .into_iter()
        .filter(|&p| (p as f64) >= params.y && (p as f64) < params.z)
        .collect();
    for &p in &sieve_primes {
        for n in (p as usize..=x as usize).step_by(p as usize) {
            rough[n] = false;
        }
    }
    let (mut e_sieve, mut sieve_mass) = (0.0, 0.0);
    for n in 1..=x as usize {
        if rough[n] {
            e_sieve += (fv[n] * fx[n]).norm();
            sieve_mass += fx[n].norm();
        }
    }

    let mut scales = Vec::new();
    for p_scale in params.scales() {
        let primes = arith::primes_in_range(p_scale.floor() as u64, (2.0 * p_scale).floor() as u64);
        if primes.is_empty() {
            return domain(format!("decompose: no primes in ({p_scale}, {}]", 2.0 * p_scale));
        }
        let per_p = par::map(&primes, |&p| {
            let mut off = 0.0;
            let mut diag = 0.0;
            for &pp in &primes {
                let m_max = x / p.max(pp);
                let s = (1..=m_max).fold(ZERO, |acc, m| {
                    acc + fx[(p * m) as usize] * fx[(pp * m) as usize].conj()
                });
                if p == pp {
                    diag += s.norm();
                } else {
                    off += s.norm();
                }
            }
            (off, diag)
        });
        let pairs = (primes.len() * primes.len()) as f64;
        let (off, diag) = per_p.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        let average = (off + diag) / pairs;
        scales.push(ScaleRow {
            p_scale,
            primes: primes.len(),
            average,
            diagonal: diag / pairs,
            value: (p_scale * x as f64 * average).sqrt(),
        });
    }
    let e_bilinear = scales.iter().map(|s| s.value).fold(0.0, f64::max);
    Ok(RamareDecomposition {
        params,
        x,
        main_sum,
        t,
        e_sieve,
        e_bilinear,
        scales,
        sieve_mass,
    })
}

/// Empirical constants relating the decomposition to its bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct RamareDiagnostics {
    /// `|main| / (T/(Y log Y) + E_sieve + E_bilinear)`.
    pub c_envelope: f64,
    /// Sieve mass over `x/u`.
    pub sieve_ratio: f64,
    /// Per scale: `(P, bound, average/bound)` with
    /// `bound = x/P (1/(w log w) + (P^{0.1} + log x)/π(P)) + Q²`.
    pub bilinear: Vec<(f64, f64, f64)>,
}

pub fn diagnostics(d: &RamareDecomposition, big_f: &BuiltF) -> Result<RamareDiagnostics> {
    let w = big_f.spec.w as f64;
    if w < 2.0 {
        return domain("diagnostics: w ≥ 2 needed for 1/(w log w)");
    }
    let x = d.x as f64;
    let y = d.params.y;
    let denom = d.t / (y * y.ln()) + d.e_sieve + d.e_bilinear;
    let c_envelope = if denom == 0.0 { 0.0 } else { d.main_sum.norm() / denom };
    let sieve_ratio = d.sieve_mass / (x / d.params.u_ramare());
    let big_q = big_f.spec.big_q();
    let sieve = arith::shared_sieve();
    let bilinear = d
        .scales
        .iter()
        .map(|s| {
            let pi = sieve.pi(s.p_scale.floor() as usize).max(1) as f64;
            let bound = x / s.p_scale * (1.0 / (w * w.ln()) + (s.p_scale.powf(0.1) + x.ln()) / pi) + big_q * big_q;
            (s.p_scale, bound, s.average / bound)
        })
        .collect();
    Ok(RamareDiagnostics { c_envelope, sieve_ratio, bilinear })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfn::MultFn;

    #[test]
    fn weight_examples() {
        assert_eq!(ramare_weight(12, 2.0, 5.0).unwrap(), Ratio::new(1, 3));
        assert_eq!(ramare_weight(1, 2.0, 5.0).unwrap(), Ratio::from_integer(1));
        assert_eq!(indicator_sum(12, 2.0, 5.0).unwrap(), Ratio::from_integer(1));
        assert_eq!(indicator_sum(49, 2.0, 5.0).unwrap(), Ratio::from_integer(0));
        assert_eq!(indicator_identity_check(100_000, 10.0, 100.0).unwrap(), None);
        for n in 1..3000 {
            let want = Ratio::from_integer(u64::from(
                arith::factorize(n).unwrap().primes().any(|p| (10..100).contains(&p)),
            ));
            assert_eq!(indicator_sum(n, 10.0, 100.0).unwrap(), want);
        }
    }

    #[test]
    fn f_examples() {
        let spec = FSpec { terms: vec![FTerm { q: 101, xi: C64::new(1.0, 0.0), a: 5 }], w: 10, zero_at: None };
        let f = build_f(&spec).unwrap();
        let s: C64 = f.values(10_000)[1..].iter().sum();
        assert!(s.norm() <= 1.0);
        for n in 1..500 {
            let want = f64::from(u8::from(n % 101 == 5)) - 1.0 / 101.0;
            assert!((f.eval(n) - C64::new(want, 0.0)).norm() < 1e-15);
        }
        let bad = FSpec { terms: vec![FTerm { q: 12, xi: C64::new(1.0, 0.0), a: 4 }], w: 3, zero_at: None };
        assert!(build_f(&bad).is_err());
        let g = Samples::new(&MultFn::random_phase(8), 5000).unwrap();
        let spec = FSpec::extremal(&g, 5000, QRange::dyadic(12), 3).unwrap();
        let built = build_f(&spec).unwrap();
        let v = built.values(5000);
        for n in 1..=5000u64 {
            assert!((v[n as usize] - built.eval(n)).norm() < 1e-12);
            assert!(v[n as usize].norm() <= built.majorant(n) + 1e-12);
        }
        let fixed = build_f(&FSpec::fixed_residue(&g, 5000, QRange::dyadic(12), 7, 3).unwrap()).unwrap();
        assert_eq!(fixed.eval(7), ZERO);
        assert_eq!(fixed.values(100)[7], ZERO);
    }

    #[test]
    fn extremal_sum_is_sum_of_maxima() {
        let x = 20_000;
        let g = Samples::new(&MultFn::mobius(), x).unwrap();
        let spec = FSpec::extremal(&g, x, QRange::dyadic(15), 5).unwrap();
        let built = build_f(&spec).unwrap();
        let v = built.values(x);
        let lhs: C64 = (1..=x as usize).map(|n| g.values()[n] * v[n]).sum();
        let mut rhs = 0.0;
        for q in 16..=30u64 {
            let split = arith::smooth_rough_split(q, 5).unwrap();
            let sq = g.progression_sums(q, x).unwrap();
            let ss = g.progression_sums(split.q_s, x).unwrap();
            rhs += (0..q)
                .filter(|&a| gcd(a, q) == 1)
                .map(|a| term_value(&sq, &ss, a, split.q_s, split.q_r).norm())
                .fold(0.0, f64::max);
        }
        assert!(lhs.im.abs() < 1e-9 && (lhs.re - rhs).abs() < 1e-9);
    }

    #[test]
    fn decomposition_basics() {
        let x = 100_000;
        let g = Samples::new(&MultFn::unit(), x).unwrap();
        let mut params = RamareParams::new(10.0, 30.0).unwrap();
        params.restrict_main = false;
        let zero = build_f(&FSpec { terms: vec![], w: 5, zero_at: None }).unwrap();
        let d = decompose(&g, &zero, x, params).unwrap();
        assert_eq!((d.main_sum, d.t, d.e_sieve, d.e_bilinear), (ZERO, 0.0, 0.0, 0.0));
        let one = build_f(&FSpec { terms: vec![FTerm { q: 37, xi: C64::new(1.0, 0.0), a: 2 }], w: 5, zero_at: None }).unwrap();
        let d = decompose(&g, &one, x, params).unwrap();
        let fx = one.values(x);
        for s in &d.scales {
            let primes = arith::primes_in_range(s.p_scale as u64, 2 * s.p_scale as u64);
            let diag: f64 = primes
                .iter()
                .map(|&p| (1..=x / p).map(|m| fx[(p * m) as usize].norm_sqr()).sum::<f64>())
                .sum::<f64>()
                / (primes.len() * primes.len()) as f64;
            assert!(s.diagonal >= 0.0 && (s.diagonal - diag).abs() < 1e-9);
        }
        let diag = diagnostics(&d, &one).unwrap();
        assert!(diag.c_envelope <= 100.0);
        assert!(decompose(&g, &one, 500, params).is_err());
        assert!((params.u_ramare() - 30f64.ln() / 10f64.ln()).abs() < 1e-15);
        assert_eq!(params.scales(), vec![10.0, 20.0]);
    }
}
