//! Twisted sums `S_f(x,χ)`, discrepancies in progressions, correlation scores
//! and averaged discrepancy reports.

use std::fmt;
use std::sync::Arc;

use crate::arith::{self, gcd};
use crate::chars::{self, CharacterGroup, DirichletCharacter};
use crate::error::{domain, Error, Result};
use crate::multfn::MultFn;
use crate::{par, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Largest `x` for which values of `f` are tabulated.
pub const EVAL_BOUND: u64 = arith::DEFAULT_SIEVE_LIMIT as u64;
/// Largest modulus accepted by [`expansion_check`].
pub const EXPANSION_Q_BOUND: u64 = 500;
/// Slack on the lower-bound certificate, absolute and relative.
pub const CERTIFICATE_SLACK: (f64, f64) = (1e-9, 1e-12);

/// Values `f(0..=x)` with `f(0) = 0`.
#[derive(Debug, Clone)]
pub struct Samples {
    name: String,
    values: Vec<C64>,
}

impl Samples {
    pub fn new(f: &MultFn, x: u64) -> Result<Self> {
        arith::check_bound("evaluation bound", x, EVAL_BOUND)?;
        Ok(Samples {
            name: f.name().to_string(),
            values: f.values_upto(x),
        })
    }

    pub fn from_values(name: &str, values: Vec<C64>) -> Self {
        Samples { name: name.to_string(), values }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn x(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    fn check(&self, x: u64) -> Result<()> {
        if x > self.x() {
            return Err(Error::Resource(format!(
                "x = {x} beyond tabulated range {}",
                self.x()
            )));
        }
        Ok(())
    }

    /// `A[a] = Σ_{n≤x, n≡a (q)} f(n)` for `a = 0..q`.
    pub fn progression_sums(&self, q: u64, x: u64) -> Result<Vec<C64>> {
        self.check(x)?;
        if q == 0 {
            return domain("modulus 0");
        }
        let mut sums = vec![ZERO; q as usize];
        let mut r = 1 % q as usize;
        for v in &self.values[1..=x as usize] {
            sums[r] += v;
            r += 1;
            if r == q as usize {
                r = 0;
            }
        }
        Ok(sums)
    }

    /// `S_f(x,χ)` by direct summation.
    pub fn char_sum(&self, chi: &DirichletCharacter, x: u64) -> Result<C64> {
        self.check(x)?;
        let vals = chi.values();
        let q = chi.modulus() as usize;
        Ok((1..=x as usize).fold(ZERO, |acc, n| acc + self.values[n] * vals[n % q].conj()))
    }
}

/// `S_f(X,χ)` on a grid of points `X`.
#[derive(Debug, Clone)]
pub struct CharSumGrid {
    pub f: String,
    pub chi: DirichletCharacter,
    pub xs: Vec<f64>,
    pub sums: Vec<C64>,
}

/// Partial sums `S_f(X,χ) = Σ_{n≤X} f(n) conj(χ)(n)` at each `X` in `xs`, in one pass.
pub fn char_sum(f: &Samples, chi: &DirichletCharacter, xs: &[f64]) -> Result<CharSumGrid> {
    let mut xs: Vec<f64> = xs.to_vec();
    if xs.iter().any(|x| !x.is_finite()) {
        return domain("char_sum: non-finite evaluation point");
    }
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let top = xs.last().map_or(0, |&x| x.max(0.0).floor() as u64);
    f.check(top)?;
    let vals = chi.values();
    let q = chi.modulus() as usize;
    let mut sums = Vec::with_capacity(xs.len());
    let mut acc = ZERO;
    let mut n = 1usize;
    for &x in &xs {
        let end = x.max(0.0).floor() as usize;
        while n <= end {
            acc += f.values[n] * vals[n % q].conj();
            n += 1;
        }
        sums.push(acc);
    }
    Ok(CharSumGrid { f: f.name.clone(), chi: chi.clone(), xs, sums })
}

/// `σ_f(x,z,ψ) = sup_{x/z < X ≤ x} |S_f(X,ψ)|/X`.
///
/// `S_f` is constant on `[N, N+1)`, so the supremum is a max over integers
/// `N ∈ (x/z, x]` of `|S_f(N)|/N`, together with `|S_f(⌊x/z⌋)|/(x/z)` when
/// `x/z` is not an integer (approached from the right, not attained).
pub fn sigma(f: &Samples, x: f64, z: f64, psi: &DirichletCharacter) -> Result<f64> {
    if !(z > 1.0) {
        return domain(format!("sigma: empty range, z = {z} ≤ 1"));
    }
    if !(z <= x) {
        return domain(format!("sigma: z = {z} > x = {x}"));
    }
    let top = x.floor() as u64;
    f.check(top)?;
    let lo = x / z;
    let lo_floor = lo.floor() as u64;
    let vals = psi.values();
    let q = psi.modulus() as usize;
    let mut acc = ZERO;
    let mut best = 0.0f64;
    for n in 1..=top as usize {
        acc += f.values[n] * vals[n % q].conj();
        let nn = n as u64;
        if nn == lo_floor && (lo_floor as f64) < lo {
            best = best.max(acc.norm() / lo);
        } else if (nn as f64) > lo {
            best = best.max(acc.norm() / nn as f64);
        }
    }
    Ok(best)
}

#[derive(Debug, Clone)]
pub struct ExceptionalEntry {
    pub psi: DirichletCharacter,
    pub conductor: u64,
    pub sigma: f64,
}

/// Primitive characters of small conductor ranked by `σ`.
#[derive(Debug, Clone)]
pub struct ExceptionalSet {
    pub x: f64,
    pub z: f64,
    pub conductor_cutoff: u64,
    pub entries: Vec<ExceptionalEntry>,
}

impl ExceptionalSet {
    /// Entries with `σ ≥ (log x)^{-B}`.
    pub fn xi_threshold(&self, b: f64) -> Vec<&ExceptionalEntry> {
        let bar = self.x.ln().powf(-b);
        self.entries.iter().filter(|e| e.sigma >= bar).collect()
    }

    /// The top `k` characters of the ordering.
    pub fn top(&self, k: usize) -> Vec<DirichletCharacter> {
        self.entries.iter().take(k).map(|e| e.psi.clone()).collect()
    }
}

/// Default conductor cutoff `⌈log x⌉`.
pub fn default_cutoff(x: f64) -> u64 {
    x.ln().ceil().max(1.0) as u64
}

/// Ranks every primitive character of conductor `≤ cutoff` (the trivial one
/// included) by `σ_f(x,z,ψ)`, descending; ties by conductor, then index.
pub fn ordered_exceptionals(f: &Samples, x: f64, cutoff: u64, z: f64) -> Result<ExceptionalSet> {
    if cutoff == 0 {
        return domain("ordered_exceptionals: conductor cutoff must be ≥ 1");
    }
    let mut psis = Vec::new();
    for r in 1..=cutoff {
        psis.extend(chars::primitive_characters(r)?);
    }
    let scores = par::map(&psis, |psi| sigma(f, x, z, psi));
    let mut entries = psis
        .into_iter()
        .zip(scores)
        .map(|(psi, s)| {
            Ok(ExceptionalEntry {
                conductor: psi.modulus(),
                psi,
                sigma: s?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    entries.sort_by(|a, b| {
        b.sigma
            .total_cmp(&a.sigma)
            .then(a.conductor.cmp(&b.conductor))
            .then(a.psi.index().cmp(&b.psi.index()))
    });
    Ok(ExceptionalSet { x, z, conductor_cutoff: cutoff, entries })
}

/// Which main terms are subtracted from the progression sum.
#[derive(Debug, Clone)]
pub enum Variant {
    /// The coprime average (`Ξ = {1}`).
    Plain,
    /// The top `k` characters of an exceptional ordering.
    Top { k: usize, set: Arc<ExceptionalSet> },
    /// A fixed set of primitive characters.
    Xi(Vec<DirichletCharacter>),
}

impl Variant {
    /// The primitive characters `Ξ` whose induced terms are subtracted.
    pub fn characters(&self) -> Result<Vec<DirichletCharacter>> {
        match self {
            Variant::Plain => Ok(vec![CharacterGroup::new(1)?.principal()]),
            Variant::Top { k, set } => Ok(set.top(*k)),
            Variant::Xi(xi) => {
                if let Some(bad) = xi.iter().find(|c| !c.is_primitive()) {
                    return domain(format!("Ξ member {} is not primitive", bad.label()));
                }
                Ok(xi.clone())
            }
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Plain => f.write_str("plain"),
            Variant::Top { k, .. } => write!(f, "top{k}"),
            Variant::Xi(xi) => {
                f.write_str("xi[")?;
                for (i, c) in xi.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    f.write_str(&c.label())?;
                }
                f.write_str("]")
            }
        }
    }
}

/// Per-modulus data shared by [`delta`] and [`bv_average`].
struct ModulusData {
    q: u64,
    phi: u64,
    sums: Vec<C64>,
    /// `(values of χ, S_f(x,χ))` for `χ ∈ Ξ_q`, and their indices.
    xi_q: Vec<(Vec<C64>, C64)>,
    xi_idx: Vec<u64>,
    group: CharacterGroup,
}

impl ModulusData {
    fn new(f: &Samples, x: u64, q: u64, xi: &[DirichletCharacter]) -> Result<Self> {
        let sums = f.progression_sums(q, x)?;
        let group = CharacterGroup::new(q)?;
        let mut xi_q = Vec::new();
        let mut xi_idx = Vec::new();
        for psi in xi.iter().filter(|p| q % p.modulus() == 0) {
            let chi = group.induce(psi)?;
            if xi_idx.contains(&chi.index()) {
                continue;
            }
            let vals = chi.values();
            let s = vals.iter().zip(&sums).fold(ZERO, |acc, (v, a)| acc + v.conj() * a);
            xi_idx.push(chi.index());
            xi_q.push((vals, s));
        }
        Ok(ModulusData { q, phi: group.len(), sums, xi_q, xi_idx, group })
    }

    fn delta(&self, a: u64) -> C64 {
        let a = (a % self.q) as usize;
        let main = self.xi_q.iter().fold(ZERO, |acc, (vals, s)| acc + vals[a] * s);
        self.sums[a] - main / self.phi as f64
    }

    fn units(&self) -> impl Iterator<Item = u64> + '_ {
        (0..self.q).filter(|&a| gcd(a, self.q) == 1)
    }

    /// `max_{χ ∉ Ξ_q} |S_f(x,χ)|/φ(q)`.
    fn certificate(&self) -> f64 {
        self.group
            .transform(&self.sums)
            .iter()
            .enumerate()
            .filter(|(i, _)| !self.xi_idx.contains(&(*i as u64)))
            .map(|(_, s)| s.norm())
            .fold(0.0, f64::max)
            / self.phi as f64
    }
}

/// `Δ_Ξ(f,x;q,a)` for the given variant; plain `Δ` subtracts the coprime average.
pub fn delta(f: &Samples, x: u64, q: u64, a: u64, variant: &Variant) -> Result<C64> {
    if q == 0 || gcd(a, q) != 1 {
        return domain(format!("delta: gcd({a}, {q}) ≠ 1"));
    }
    Ok(ModulusData::new(f, x, q, &variant.characters()?)?.delta(a))
}

/// `max_a |Δ(f,x;q,a) − φ(q)^{-1} Σ_{χ≠χ_0} χ(a) S_f(x,χ)|` over units `a`,
/// with both sides computed independently.
pub fn expansion_check(f: &Samples, x: u64, q: u64) -> Result<f64> {
    arith::check_bound("expansion_check modulus", q, EXPANSION_Q_BOUND)?;
    let d = ModulusData::new(f, x, q, &Variant::Plain.characters()?)?;
    let chis: Vec<DirichletCharacter> = d.group.characters().filter(|c| !c.is_principal()).collect();
    let s: Vec<C64> = chis.iter().map(|c| f.char_sum(c, x)).collect::<Result<_>>()?;
    let phi = d.phi as f64;
    Ok(d.units()
        .map(|a| {
            let rhs = chis.iter().zip(&s).fold(ZERO, |acc, (c, s)| acc + c.value(a) * s) / phi;
            (d.delta(a) - rhs).norm()
        })
        .fold(0.0, f64::max))
}

/// Checks `S_f(x,χ) = Σ_{m≤x} h(m) S_f(x/m,ψ)` for `χ` induced by primitive
/// `ψ`, where `h` lives on prime powers of `p | q`, `p ∤ r`, and
/// `h ∗ (f conj ψ)` vanishes at those prime powers. Returns the absolute error.
pub fn h_convolution_check(f: &Samples, x: u64, chi: &DirichletCharacter) -> Result<f64> {
    f.check(x)?;
    let (r, psi) = chars::conductor_and_primitive(chi)?;
    let q = chi.modulus();
    let primes: Vec<u64> = arith::factorize(q)?.primes().filter(|p| r % p != 0).collect();
    let pv = psi.values();
    let fpsi = |n: u64| f.values[n as usize] * pv[(n % r) as usize].conj();
    // prefix sums S_f(N,ψ)
    let mut prefix = vec![ZERO; x as usize + 1];
    for n in 1..=x as usize {
        prefix[n] = prefix[n - 1] + fpsi(n as u64);
    }
    // h(p^k) per prime, up to p^k ≤ x
    let mut hp: Vec<Vec<C64>> = Vec::new();
    for &p in &primes {
        let mut hs = vec![C64::new(1.0, 0.0)];
        let mut pk = 1u64;
        while pk <= x / p {
            pk *= p;
            let k = hs.len();
            let mut v = ZERO;
            let mut pj = pk;
            for h in hs.iter().take(k) {
                // h(p^j) (f conj ψ)(p^{k-j}), j ascending so p^{k-j} descending
                v -= h * fpsi(pj);
                pj /= p;
            }
            hs.push(v);
        }
        hp.push(hs);
    }
    let mut rhs = ZERO;
    fn walk(m: u64, h: C64, i: usize, primes: &[u64], hp: &[Vec<C64>], x: u64, prefix: &[C64], out: &mut C64) {
        if i == primes.len() {
            *out += h * prefix[(x / m) as usize];
            return;
        }
        let mut mm = m;
        for hk in &hp[i] {
            walk(mm, h * hk, i + 1, primes, hp, x, prefix, out);
            match mm.checked_mul(primes[i]) {
                Some(next) if next <= x => mm = next,
                _ => break,
            }
        }
    }
    walk(1, C64::new(1.0, 0.0), 0, &primes, &hp, x, &prefix, &mut rhs);
    Ok((f.char_sum(chi, x)? - rhs).norm())
}

/// `max_{2≤X≤x} |Δ(f,X;q,a)| log X / X` over integer `X`.
pub fn sw_diagnostic(f: &Samples, x: u64, q: u64, a: u64) -> Result<f64> {
    f.check(x)?;
    if q == 0 || gcd(a, q) != 1 {
        return domain(format!("sw_diagnostic: gcd({a}, {q}) ≠ 1"));
    }
    let phi = arith::phi(q)? as f64;
    let (mut prog, mut coprime) = (ZERO, ZERO);
    let mut best = 0.0f64;
    for n in 1..=x {
        let v = f.values[n as usize];
        if gcd(n, q) == 1 {
            coprime += v;
        }
        if n % q == a % q {
            prog += v;
        }
        if n >= 2 {
            let d = (prog - coprime / phi).norm();
            best = best.max(d * (n as f64).ln() / n as f64);
        }
    }
    Ok(best)
}

/// Moduli `q` with `lo < q ≤ hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QRange {
    pub lo: u64,
    pub hi: u64,
}

impl QRange {
    /// `q ∼ Q`, that is `Q < q ≤ 2Q`.
    pub fn dyadic(big_q: u64) -> Self {
        QRange { lo: big_q, hi: 2 * big_q }
    }
}

/// Restriction on the moduli (or residue) in a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModulusFilter {
    #[default]
    All,
    Primes,
    /// Moduli with every prime factor `≤ w`.
    Smooth(u64),
    /// Moduli divisible by `d`.
    MultipleOf(u64),
    /// A single residue `a` (reduced mod `q`); moduli not coprime to `a` are skipped.
    FixedResidue(i64),
}

impl ModulusFilter {
    fn admits(&self, q: u64) -> Result<bool> {
        Ok(match *self {
            ModulusFilter::All => true,
            ModulusFilter::Primes => arith::is_prime_u64(q),
            ModulusFilter::Smooth(w) => arith::factorize(q)?.largest_prime() <= w,
            ModulusFilter::MultipleOf(d) => d != 0 && q % d == 0,
            ModulusFilter::FixedResidue(a) => gcd(a.unsigned_abs(), q) == 1,
        })
    }
}

impl fmt::Display for ModulusFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModulusFilter::All => f.write_str("all"),
            ModulusFilter::Primes => f.write_str("primes"),
            ModulusFilter::Smooth(w) => write!(f, "smooth:{w}"),
            ModulusFilter::MultipleOf(d) => write!(f, "multiple:{d}"),
            ModulusFilter::FixedResidue(a) => write!(f, "residue:{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscrepancyRow {
    pub q: u64,
    pub q_s: u64,
    pub q_r: u64,
    pub a_argmax: u64,
    /// `max_a |Δ|`, or `|Δ|` at the fixed residue.
    pub abs_delta: f64,
    /// `max_a |Δ|` over all units, also in fixed-residue mode.
    pub max_abs_delta: f64,
    pub certificate: f64,
    pub fixed_residue: bool,
}

#[derive(Debug, Clone)]
pub struct DiscrepancyReport {
    pub variant: String,
    pub filter: ModulusFilter,
    pub x: u64,
    pub rows: Vec<DiscrepancyRow>,
    pub total: f64,
}

fn row_for(f: &Samples, x: u64, q: u64, xi: &[DirichletCharacter], filter: ModulusFilter, w: u64) -> Result<DiscrepancyRow> {
    let d = ModulusData::new(f, x, q, xi)?;
    let (mut arg, mut best) = (0u64, -1.0f64);
    for a in d.units() {
        let v = d.delta(a).norm();
        if v > best {
            best = v;
            arg = a;
        }
    }
    let certificate = d.certificate();
    if best + CERTIFICATE_SLACK.0 + CERTIFICATE_SLACK.1 * best < certificate {
        return Err(Error::Numeric(format!(
            "certificate violated at q = {q}: max |Δ| = {best} < {certificate}"
        )));
    }
    let split = arith::smooth_rough_split(q, w)?;
    let (a_argmax, abs_delta, fixed_residue) = match filter {
        ModulusFilter::FixedResidue(a) => {
            let r = a.rem_euclid(q as i64) as u64;
            (r, d.delta(r).norm(), true)
        }
        _ => (arg, best, false),
    };
    Ok(DiscrepancyRow {
        q,
        q_s: split.q_s,
        q_r: split.q_r,
        a_argmax,
        abs_delta,
        max_abs_delta: best,
        certificate,
        fixed_residue,
    })
}

/// `Σ_{q} max_a |Δ_Ξ(f,x;q,a)|` over admissible `q` in `range`, with the
/// lower-bound certificate checked on every row. `w` sets the `q_s`/`q_r` split.
pub fn bv_average(
    f: &Samples,
    x: u64,
    range: QRange,
    variant: &Variant,
    filter: ModulusFilter,
    w: u64,
) -> Result<DiscrepancyReport> {
    if range.hi <= range.lo {
        return domain(format!("bv_average: empty modulus range ({}, {}]", range.lo, range.hi));
    }
    f.check(x)?;
    let xi = variant.characters()?;
    let mut qs = Vec::new();
    for q in range.lo + 1..=range.hi {
        if filter.admits(q)? {
            qs.push(q);
        }
    }
    let rows = par::map(&qs, |&q| row_for(f, x, q, &xi, filter, w))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let total = rows.iter().map(|r| r.abs_delta).sum();
    Ok(DiscrepancyReport {
        variant: variant.to_string(),
        filter,
        x,
        rows,
        total,
    })
}
