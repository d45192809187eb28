//! 1-bounded multiplicative functions.
//!
//! A [`MultFn`] is described by its values at prime powers, optionally wrapped
//! to restrict support to smooth numbers or to override individual values.
//! [`lambda_f`] computes the coefficients of `-F'/F` through the convolution
//! identity `f·log = Λ_f ∗ f`, solved one prime power at a time.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, Sieve};
use crate::chars::{self, CharacterGroup, DirichletCharacter};
use crate::error::{domain, Error, Result};
use crate::{e, C64};

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

/// Slack allowed on `|f(p^k)| ≤ 1` and on `|Λ_f(p^k)| ≤ log p`.
pub const MODULUS_TOL: f64 = 1e-12;

/// Residue-class coefficient `c(n)`, depending on `n mod q`, so that
/// `Λ_f(n) = c(n) Λ(n)`.
#[derive(Debug, Clone)]
pub struct ResidueCoefficient {
    pub q: u64,
    pub values: Vec<C64>,
}

#[derive(Debug, Clone)]
enum Kind {
    Unit,
    Mobius,
    Liouville,
    Character(DirichletCharacter),
    RandomSign(u64),
    RandomPhase(u64),
    /// Completely multiplicative; primes not listed take `default`.
    PrimeValues {
        values: BTreeMap<u64, C64>,
        default: C64,
    },
    /// Values at listed prime powers `p^k`; the rest come from `base`.
    PrimePowerTable {
        table: BTreeMap<u64, C64>,
        base: Box<MultFn>,
    },
    FromLambda(ResidueCoefficient),
    Smooth {
        base: Box<MultFn>,
        y: u64,
    },
    Override {
        base: Box<MultFn>,
        overrides: BTreeMap<u64, C64>,
    },
}

/// A multiplicative function with `|f(n)| ≤ 1`.
#[derive(Debug, Clone)]
pub struct MultFn {
    kind: Kind,
    name: String,
}

fn check_modulus(what: &str, v: C64) -> Result<()> {
    if v.norm() > 1.0 + MODULUS_TOL || !v.re.is_finite() || !v.im.is_finite() {
        return domain(format!("{what}: value {v} has modulus > 1"));
    }
    Ok(())
}

fn chacha_for(seed: u64, p: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p);
    rng
}

impl MultFn {
    pub fn unit() -> Self {
        MultFn { kind: Kind::Unit, name: "unit".into() }
    }

    pub fn mobius() -> Self {
        MultFn { kind: Kind::Mobius, name: "mobius".into() }
    }

    pub fn liouville() -> Self {
        MultFn { kind: Kind::Liouville, name: "liouville".into() }
    }

    /// `n ↦ χ(n)`.
    pub fn character(chi: DirichletCharacter) -> Self {
        let name = format!("char:{}", chi.label());
        MultFn { kind: Kind::Character(chi), name }
    }

    /// The real non-principal character mod 3, as a function.
    pub fn quadratic_mod3() -> Self {
        let chi = chars::CharacterGroup::new(3)
            .and_then(|g| g.character(1))
            .expect("mod 3 group");
        MultFn::character(chi).named("quadratic3")
    }

    /// Completely multiplicative with independent uniform signs `f(p) = ±1`.
    pub fn random_sign(seed: u64) -> Self {
        MultFn { kind: Kind::RandomSign(seed), name: format!("random_sign:{seed}") }
    }

    /// Completely multiplicative with independent uniform phases `f(p) = e(θ_p)`.
    pub fn random_phase(seed: u64) -> Self {
        MultFn { kind: Kind::RandomPhase(seed), name: format!("random_phase:{seed}") }
    }

    /// Completely multiplicative from prime values (others `default`).
    pub fn from_prime_values(values: BTreeMap<u64, C64>, default: C64) -> Result<Self> {
        check_modulus("default prime value", default)?;
        for (&p, &v) in &values {
            if !arith::is_prime_u64(p) {
                return domain(format!("{p} is not prime"));
            }
            check_modulus(&format!("f({p})"), v)?;
        }
        Ok(MultFn { kind: Kind::PrimeValues { values, default }, name: "prime_values".into() })
    }

    /// Values at given prime powers, falling back to `base` elsewhere.
    pub fn from_prime_powers(table: BTreeMap<u64, C64>, base: MultFn) -> Result<Self> {
        for (&pk, &v) in &table {
            let fac = arith::factorize(pk)?;
            if fac.factors.len() != 1 {
                return domain(format!("{pk} is not a prime power"));
            }
            check_modulus(&format!("f({pk})"), v)?;
        }
        let name = format!("table({})", base.name);
        Ok(MultFn { kind: Kind::PrimePowerTable { table, base: Box::new(base) }, name })
    }

    /// The function with `Λ_f(n) = c(n) Λ(n)`.
    pub fn from_lambda_coefficient(coeff: ResidueCoefficient) -> Result<Self> {
        if coeff.q == 0 || coeff.values.len() != coeff.q as usize {
            return domain("coefficient table must have q entries");
        }
        for &v in &coeff.values {
            check_modulus("c(n)", v)?;
        }
        let name = format!("lambda_coeff:{}", coeff.q);
        Ok(MultFn { kind: Kind::FromLambda(coeff), name })
    }

    /// The Gauss-sum function mod `q`: `c_q(n) = Σ_χ g(χ)χ(n)`, which is
    /// `e(n/q)` on units and `0` otherwise.
    pub fn gauss(q: u64) -> Result<Self> {
        let group = CharacterGroup::new(q)?;
        let mut values = vec![ZERO; q as usize];
        for chi in group.characters() {
            let g = chars::gauss_g(&chi);
            for (n, v) in values.iter_mut().enumerate() {
                *v += g * chi.value(n as u64);
            }
        }
        Ok(MultFn::from_lambda_coefficient(ResidueCoefficient { q, values })?
            .named(&format!("gauss:{q}")))
    }

    /// Restricts support to `y`-smooth integers.
    pub fn smooth(self, y: u64) -> Self {
        let name = format!("smooth:{y}:{}", self.name);
        MultFn { kind: Kind::Smooth { base: Box::new(self), y }, name }
    }

    /// Replaces individual values. Multiplicativity is not preserved through
    /// overridden arguments.
    pub fn with_overrides(self, overrides: BTreeMap<u64, C64>) -> Result<Self> {
        for (&n, &v) in &overrides {
            if n == 0 {
                return domain("override at n = 0");
            }
            check_modulus(&format!("override f({n})"), v)?;
        }
        let name = format!("override({})", self.name);
        Ok(MultFn { kind: Kind::Override { base: Box::new(self), overrides }, name })
    }

    pub fn named(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Arguments whose values were set pointwise.
    pub fn overridden(&self) -> Vec<u64> {
        match &self.kind {
            Kind::Override { base, overrides } => {
                let mut v: Vec<u64> = overrides.keys().copied().collect();
                v.extend(base.overridden());
                v.sort_unstable();
                v.dedup();
                v
            }
            Kind::Smooth { base, .. } | Kind::PrimePowerTable { base, .. } => base.overridden(),
            _ => Vec::new(),
        }
    }

    /// `f(p^k)` for prime `p`, `k ≥ 1`.
    pub fn prime_power(&self, p: u64, k: u32) -> C64 {
        match &self.kind {
            Kind::Unit => ONE,
            Kind::Mobius => {
                if k == 1 {
                    -ONE
                } else {
                    ZERO
                }
            }
            Kind::Liouville => {
                if k % 2 == 1 {
                    -ONE
                } else {
                    ONE
                }
            }
            Kind::Character(chi) => chi.value(p).powu(k),
            Kind::RandomSign(seed) => {
                let bit = chacha_for(*seed, p).next_u32() & 1;
                let s = if bit == 1 { -ONE } else { ONE };
                s.powu(k)
            }
            Kind::RandomPhase(seed) => {
                let v = chacha_for(*seed, p).next_u64() >> 11;
                let theta = v as f64 / (1u64 << 53) as f64;
                e((theta * k as f64).fract())
            }
            Kind::PrimeValues { values, default } => {
                values.get(&p).copied().unwrap_or(*default).powu(k)
            }
            Kind::PrimePowerTable { table, base } => match p.checked_pow(k) {
                Some(pk) => table.get(&pk).copied().unwrap_or_else(|| base.prime_power(p, k)),
                None => base.prime_power(p, k),
            },
            Kind::FromLambda(c) => {
                // f(p^k) = k^{-1} Σ_{j=1..k} c(p^j) f(p^{k-j})
                let mut vals = vec![ONE];
                let mut pj = 1u64;
                let mut cs = Vec::with_capacity(k as usize);
                for _ in 0..k {
                    pj = arith::mul_mod(pj, p, c.q);
                    cs.push(c.values[pj as usize]);
                }
                for kk in 1..=k as usize {
                    let s: C64 = (1..=kk).map(|j| cs[j - 1] * vals[kk - j]).sum();
                    vals.push(s / kk as f64);
                }
                vals[k as usize]
            }
            Kind::Smooth { base, y } => {
                if p > *y {
                    ZERO
                } else {
                    base.prime_power(p, k)
                }
            }
            Kind::Override { base, overrides } => match p.checked_pow(k) {
                Some(pk) => overrides.get(&pk).copied().unwrap_or_else(|| base.prime_power(p, k)),
                None => base.prime_power(p, k),
            },
        }
    }

    /// `f(n)` by factorization.
    pub fn eval(&self, n: u64) -> Result<C64> {
        if n == 0 {
            return domain("f(0) is undefined");
        }
        match &self.kind {
            Kind::Override { base, overrides } => match overrides.get(&n) {
                Some(&v) => Ok(v),
                None => base.eval(n),
            },
            Kind::Smooth { base, y } => {
                let fac = arith::factorize(n)?;
                if fac.largest_prime() > *y {
                    Ok(ZERO)
                } else {
                    base.eval(n)
                }
            }
            _ => {
                let fac = arith::factorize(n)?;
                Ok(fac
                    .factors
                    .iter()
                    .map(|&(p, k)| self.prime_power(p, k))
                    .product())
            }
        }
    }

    /// `f(0..=x)` with `f(0) = 0`, by a single pass over a smallest-prime-factor table.
    pub fn values_upto(&self, x: u64) -> Vec<C64> {
        let sieve = arith::sieve_for(x as usize);
        self.values_with(&sieve, x)
    }

    /// Like [`Self::values_upto`] with a caller-supplied sieve covering `x`.
    pub fn values_with(&self, sieve: &Sieve, x: u64) -> Vec<C64> {
        assert!(sieve.limit() as u64 >= x, "sieve too small");
        let x = x as usize;
        match &self.kind {
            Kind::Override { base, overrides } => {
                let mut v = base.values_with(sieve, x as u64);
                for (&n, &val) in overrides.range(..=x as u64) {
                    v[n as usize] = val;
                }
                v
            }
            Kind::Smooth { base, y } => {
                let mut v = base.values_with(sieve, x as u64);
                // largest prime factor via the spf chain
                let mut lpf = vec![0u32; x + 1];
                for n in 2..=x {
                    let p = sieve.spf(n);
                    lpf[n] = p.max(lpf[n / p as usize]);
                    if lpf[n] as u64 > *y {
                        v[n] = ZERO;
                    }
                }
                v
            }
            _ => {
                let mut v = vec![ZERO; x + 1];
                if x >= 1 {
                    v[1] = ONE;
                }
                for n in 2..=x {
                    let (p, k, pk) = sieve.leading_prime_power(n);
                    let rest = n / pk as usize;
                    v[n] = if rest == 1 {
                        self.prime_power(p, k)
                    } else {
                        v[pk as usize] * v[rest]
                    };
                    debug_assert!(v[n].norm() <= 1.0 + 1e-9, "|f({n})| > 1");
                }
                v
            }
        }
    }
}

impl fmt::Display for MultFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Textual constructor description, as used in experiment configs.
///
/// Grammar: `unit | mobius | liouville | quadratic3 | char:<q>:<index> |
/// random_sign:<seed> | random_phase:<seed> | gauss:<q> | smooth:<y>:<spec>`.
/// `random_sign` and `random_phase` without a seed take the run seed.
#[derive(Debug, Clone, PartialEq)]
pub enum FnSpec {
    Unit,
    Mobius,
    Liouville,
    Quadratic3,
    Character { q: u64, index: u64 },
    RandomSign(Option<u64>),
    RandomPhase(Option<u64>),
    Gauss(u64),
    Smooth { y: u64, inner: Box<FnSpec> },
}

impl FromStr for FnSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, rest) = s.split_once(':').map_or((s, None), |(h, r)| (h, Some(r)));
        let num = |t: &str| -> Result<u64> {
            t.trim()
                .parse()
                .map_err(|_| Error::Domain(format!("function spec `{s}`: bad integer `{t}`")))
        };
        Ok(match (head, rest) {
            ("unit" | "one", None) => FnSpec::Unit,
            ("mobius" | "mu", None) => FnSpec::Mobius,
            ("liouville", None) => FnSpec::Liouville,
            ("quadratic3", None) => FnSpec::Quadratic3,
            ("char", Some(r)) => {
                let (q, i) = r
                    .split_once(':')
                    .ok_or_else(|| Error::Domain(format!("function spec `{s}`: want char:<q>:<index>")))?;
                FnSpec::Character { q: num(q)?, index: num(i)? }
            }
            ("random_sign", r) => FnSpec::RandomSign(r.map(num).transpose()?),
            ("random_phase", r) => FnSpec::RandomPhase(r.map(num).transpose()?),
            ("gauss", Some(r)) => FnSpec::Gauss(num(r)?),
            ("smooth", Some(r)) => {
                let (y, inner) = r
                    .split_once(':')
                    .ok_or_else(|| Error::Domain(format!("function spec `{s}`: want smooth:<y>:<spec>")))?;
                FnSpec::Smooth { y: num(y)?, inner: Box::new(inner.parse()?) }
            }
            _ => return domain(format!("unknown function spec `{s}`")),
        })
    }
}

/// Builds a function from its description. `seed` fills unseeded random kinds.
pub fn make(spec: &FnSpec, seed: u64) -> Result<MultFn> {
    Ok(match spec {
        FnSpec::Unit => MultFn::unit(),
        FnSpec::Mobius => MultFn::mobius(),
        FnSpec::Liouville => MultFn::liouville(),
        FnSpec::Quadratic3 => MultFn::quadratic_mod3(),
        FnSpec::Character { q, index } => MultFn::character(CharacterGroup::new(*q)?.character(*index)?),
        FnSpec::RandomSign(s) => MultFn::random_sign(s.unwrap_or(seed)),
        FnSpec::RandomPhase(s) => MultFn::random_phase(s.unwrap_or(seed)),
        FnSpec::Gauss(q) => MultFn::gauss(*q)?,
        FnSpec::Smooth { y, inner } => make(inner, seed)?.smooth(*y),
    })
}

/// `Λ_f(n)` for `n ≤ bound`, zero off prime powers.
#[derive(Debug, Clone)]
pub struct LambdaFTable {
    bound: u64,
    values: Vec<C64>,
}

impl LambdaFTable {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn get(&self, n: u64) -> C64 {
        self.values[n as usize]
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Prime powers `p^k ≤ bound` as `(p, k, p^k)`, ascending in `p^k`.
    pub fn prime_powers(&self) -> Vec<(u64, u32, u64)> {
        let sieve = arith::sieve_for(self.bound as usize);
        (2..=self.bound)
            .filter_map(|n| {
                let (p, k, pk) = sieve.leading_prime_power(n as usize);
                (pk == n).then_some((p, k, pk))
            })
            .collect()
    }

    /// Recovers `f(p^k)` from `Λ_f` via `f(p^k) k log p = Σ_{j≤k} Λ_f(p^j) f(p^{k-j})`.
    pub fn reconstruct(&self, p: u64, k: u32) -> C64 {
        let lp = (p as f64).ln();
        let mut f = vec![ONE];
        for kk in 1..=k as usize {
            let mut s = ZERO;
            let mut pj = 1u64;
            for j in 1..=kk {
                pj *= p;
                s += self.get(pj) * f[kk - j];
            }
            f.push(s / (kk as f64 * lp));
        }
        f[k as usize]
    }
}

/// Tabulates `Λ_f` on prime powers up to `bound` from
/// `Λ_f(p^k) = f(p^k) k log p − Σ_{j<k} Λ_f(p^j) f(p^{k−j})`.
pub fn lambda_f(f: &MultFn, bound: u64) -> Result<LambdaFTable> {
    if bound < 2 {
        return domain("lambda_f: bound < 2");
    }
    let mut values = vec![ZERO; bound as usize + 1];
    for p in arith::primes_up_to(bound) {
        let lp = (p as f64).ln();
        let mut fp = vec![ONE];
        let mut lam = vec![ZERO];
        let mut pk = 1u64;
        let mut k = 0u32;
        while let Some(next) = pk.checked_mul(p).filter(|&v| v <= bound) {
            pk = next;
            k += 1;
            fp.push(f.prime_power(p, k));
            let kk = k as usize;
            let conv: C64 = (1..kk).map(|j| lam[j] * fp[kk - j]).sum();
            let l = fp[kk] * (kk as f64 * lp) - conv;
            lam.push(l);
            values[pk as usize] = l;
        }
    }
    Ok(LambdaFTable { bound, values })
}

/// Result of [`class_c_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct ClassCWitness {
    pub in_class: bool,
    /// Least prime power with `|Λ_f(p^k)| > log p`.
    pub first_violation: Option<u64>,
}

/// Checks `|Λ_f(p^k)| ≤ log p` for all prime powers up to `bound`.
pub fn class_c_check(f: &MultFn, bound: u64) -> Result<ClassCWitness> {
    let table = lambda_f(f, bound)?;
    let first_violation = table
        .prime_powers()
        .into_iter()
        .find(|&(p, _, pk)| table.get(pk).norm() > (p as f64).ln() + MODULUS_TOL)
        .map(|(_, _, pk)| pk);
    Ok(ClassCWitness { in_class: first_violation.is_none(), first_violation })
}

/// `|f(n) log n − Λ_f(n) − Σ_{abm=n, a<n} Λ_f(a)Λ_f(b)f(m)/log(n/a)|`.
pub fn harper_residual(f: &MultFn, table: &LambdaFTable, n: u64) -> Result<f64> {
    if n < 2 {
        return domain("harper_residual: n < 2");
    }
    if n > table.bound() {
        return domain(format!("harper_residual: Λ_f tabulated only to {}", table.bound()));
    }
    let fac = arith::factorize(n)?;
    let divisors = fac.divisors();
    let is_pp = |d: u64| d > 1 && table.get(d) != ZERO;
    let mut rhs = table.get(n);
    for &a in divisors.iter().filter(|&&a| a < n && is_pp(a)) {
        let la = table.get(a);
        let weight = 1.0 / ((n / a) as f64).ln();
        let rest = n / a;
        for &b in divisors.iter().filter(|&&b| rest % b == 0 && is_pp(b)) {
            rhs += la * table.get(b) * f.eval(rest / b)? * weight;
        }
    }
    let lhs = f.eval(n)? * (n as f64).ln();
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builtin_examples() {
        assert_eq!(MultFn::liouville().eval(12).unwrap(), -ONE);
        assert_eq!(MultFn::mobius().eval(12).unwrap(), ZERO);
        assert_eq!(MultFn::unit().smooth(3).eval(10).unwrap(), ZERO);
        assert_eq!(MultFn::unit().smooth(3).eval(12).unwrap(), ONE);
    }

    #[test]
    fn rejects_large_values() {
        let mut m = BTreeMap::new();
        m.insert(2u64, C64::new(1.5, 0.0));
        assert!(matches!(MultFn::from_prime_values(m, ONE), Err(Error::Domain(_))));
    }

    #[test]
    fn lambda_examples() {
        let t = lambda_f(&MultFn::unit(), 1000).unwrap();
        for n in 2..=1000u64 {
            assert!((t.get(n).re - arith::von_mangoldt(n)).abs() < 1e-12);
        }
        let t = lambda_f(&MultFn::mobius(), 1000).unwrap();
        for (p, _, pk) in t.prime_powers() {
            assert!((t.get(pk).re + (p as f64).ln()).abs() < 1e-12, "{pk}");
        }
        let f = MultFn::random_phase(7);
        let t = lambda_f(&f, 5000).unwrap();
        for (p, k, pk) in t.prime_powers() {
            let want = f.prime_power(p, 1).powu(k) * (p as f64).ln();
            assert!((t.get(pk) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn class_c_examples() {
        assert!(class_c_check(&MultFn::mobius(), 10_000).unwrap().in_class);
        // f(2)=1, f(4)=1, f(8)=-1: Λ_f(8) = -3log2 - log2 - log2 = -5 log 2.
        let mut t = BTreeMap::new();
        t.insert(2, ONE);
        t.insert(4, ONE);
        t.insert(8, -ONE);
        let f = MultFn::from_prime_powers(t, MultFn::unit()).unwrap();
        let table = lambda_f(&f, 100).unwrap();
        assert!((table.get(8).re + 5.0 * 2f64.ln()).abs() < 1e-12);
        let w = class_c_check(&f, 100).unwrap();
        assert_eq!(w, ClassCWitness { in_class: false, first_violation: Some(8) });
        let g = MultFn::gauss(7).unwrap();
        assert!(class_c_check(&g, 100_000).unwrap().in_class);
    }

    #[test]
    fn gauss_lambda_is_phase_times_von_mangoldt() {
        let g = MultFn::gauss(7).unwrap();
        let t = lambda_f(&g, 2000).unwrap();
        for (p, _, pk) in t.prime_powers() {
            let want = if p == 7 { ZERO } else { e((pk % 7) as f64 / 7.0) * (p as f64).ln() };
            assert!((t.get(pk) - want).norm() < 1e-12, "{pk}");
        }
    }

    #[test]
    fn harper_examples() {
        let f = MultFn::unit();
        let t = lambda_f(&f, 100).unwrap();
        assert!(harper_residual(&f, &t, 4).unwrap() < 1e-14);
        for p in [2u64, 3, 5, 97] {
            let g = MultFn::random_sign(3);
            let tg = lambda_f(&g, 100).unwrap();
            assert!(harper_residual(&g, &tg, p).unwrap() < 1e-14);
        }
    }

    #[test]
    fn harper_all_builtins() {
        let fs = [
            MultFn::unit(),
            MultFn::mobius(),
            MultFn::liouville(),
            MultFn::random_sign(11),
            MultFn::random_phase(12),
            MultFn::gauss(5).unwrap(),
            MultFn::quadratic_mod3(),
        ];
        for f in &fs {
            let t = lambda_f(f, 5000).unwrap();
            for n in 2..=5000 {
                assert!(harper_residual(f, &t, n).unwrap() < 1e-9, "{f} n={n}");
            }
        }
    }

    #[test]
    fn reconstruction_roundtrip() {
        for f in [MultFn::mobius(), MultFn::random_phase(5), MultFn::gauss(11).unwrap()] {
            let t = lambda_f(&f, 1 << 16).unwrap();
            for (p, k, _) in t.prime_powers() {
                assert!((t.reconstruct(p, k) - f.prime_power(p, k)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn table_matches_pointwise() {
        let fs = [
            MultFn::mobius(),
            MultFn::random_phase(1).smooth(13),
            MultFn::gauss(7).unwrap(),
            MultFn::liouville().with_overrides([(97u64, ONE)].into()).unwrap(),
        ];
        for f in &fs {
            let v = f.values_upto(3000);
            for n in 1..=3000u64 {
                assert!((v[n as usize] - f.eval(n).unwrap()).norm() < 1e-13, "{f} {n}");
                assert!(v[n as usize].norm() <= 1.0 + 1e-12);
            }
        }
    }

    #[test]
    fn spec_parsing() {
        assert_eq!("mobius".parse::<FnSpec>().unwrap(), FnSpec::Mobius);
        assert_eq!(
            "smooth:30:random_sign:4".parse::<FnSpec>().unwrap(),
            FnSpec::Smooth { y: 30, inner: Box::new(FnSpec::RandomSign(Some(4))) }
        );
        assert_eq!("char:12:3".parse::<FnSpec>().unwrap(), FnSpec::Character { q: 12, index: 3 });
        assert!("banana".parse::<FnSpec>().is_err());
        assert!("char:12".parse::<FnSpec>().is_err());
    }

    proptest! {
        #[test]
        fn multiplicative_on_coprime_pairs(m in 1u64..3000, n in 1u64..3000, seed in 0u64..4) {
            prop_assume!(arith::gcd(m, n) == 1);
            for f in [MultFn::random_phase(seed), MultFn::mobius(), MultFn::gauss(7).unwrap(),
                      MultFn::random_sign(seed).smooth(50)] {
                let lhs = f.eval(m * n).unwrap();
                let rhs = f.eval(m).unwrap() * f.eval(n).unwrap();
                prop_assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }
}
