//! Smooth numbers: exact `Ψ(x,y)`, Dickman's function and the saddle point `α(x,y)`.

use std::sync::OnceLock;

use crate::arith;
use crate::error::{domain, Error, Result};

/// Largest `x` accepted by [`psi_exact`].
pub const PSI_BOUND: f64 = 1e9;
/// Largest prime bound enumerated by [`psi_exact`].
pub const PSI_PRIME_BOUND: u64 = 100_000_000;

/// Restriction applied while counting smooth numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SmoothFilter {
    #[default]
    All,
    /// Only `n` coprime to `q` (this is `Ψ_q(x,y)`).
    CoprimeTo(u64),
    /// Only `n ≡ a (mod q)` (this is `Ψ(x,y;q,a)`).
    Progression { q: u64, a: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmoothCount {
    pub x: f64,
    pub y: f64,
    /// `log x / log y`.
    pub u: f64,
    pub value: u64,
    pub filter: SmoothFilter,
}

/// Counts `n ≤ x` whose prime factors are all `≤ y`, subject to `filter`.
///
/// Depth-first over nondecreasing prime sequences. When the only possible
/// extensions of a node are single primes, they are counted in bulk from the
/// prime list (unless a progression filter needs them one by one).
pub fn psi_exact(x: f64, y: f64, filter: SmoothFilter) -> Result<SmoothCount> {
    if !(x >= 1.0) {
        return domain(format!("psi_exact: x = {x} < 1"));
    }
    if !(y >= 2.0) {
        return domain(format!("psi_exact: y = {y} < 2"));
    }
    if x > PSI_BOUND {
        return Err(Error::Resource(format!("psi_exact: x = {x} exceeds {PSI_BOUND}")));
    }
    let xi = x.floor() as u64;
    let yi = (y.floor() as u64).min(xi);
    arith::check_bound("psi_exact prime bound", yi, PSI_PRIME_BOUND)?;
    let u = x.ln() / y.ln();
    let mut primes = arith::primes_up_to(yi);
    let value = match filter {
        SmoothFilter::All => dfs_count(xi, &primes),
        SmoothFilter::CoprimeTo(q) => {
            if q == 0 {
                return domain("psi_exact: modulus 0");
            }
            primes.retain(|&p| q % p != 0);
            dfs_count(xi, &primes)
        }
        SmoothFilter::Progression { q, a } => {
            if q == 0 {
                return domain("psi_exact: modulus 0");
            }
            let mut count = 0;
            dfs_progression(1, 0, xi, &primes, q, a % q, &mut count);
            count
        }
    };
    Ok(SmoothCount { x, y, u, value, filter })
}

fn dfs_count(x: u64, primes: &[u64]) -> u64 {
    fn go(m: u64, start: usize, x: u64, primes: &[u64]) -> u64 {
        let mut count = 1;
        let limit = x / m;
        for j in start..primes.len() {
            let p = primes[j];
            if p > limit {
                break;
            }
            if p > limit / p {
                // every remaining prime p' ≤ x/m contributes exactly m·p'
                let end = primes.partition_point(|&r| r <= limit);
                count += (end - j) as u64;
                break;
            }
            count += go(m * p, j, x, primes);
        }
        count
    }
    go(1, 0, x, primes)
}

fn dfs_progression(m: u64, start: usize, x: u64, primes: &[u64], q: u64, a: u64, count: &mut u64) {
    if m % q == a {
        *count += 1;
    }
    let limit = x / m;
    for j in start..primes.len() {
        let p = primes[j];
        if p > limit {
            break;
        }
        dfs_progression(m * p, j, x, primes, q, a, count);
    }
}

/// `Ψ(x,y)` via Buchstab's recursion `Ψ(x,y) = 1 + Σ_{p≤y} Ψ(x/p, p)`.
/// An independent cross-check for [`psi_exact`], feasible for `x ≤ 10^6`.
pub fn psi_buchstab(x: u64, y: u64) -> u64 {
    fn go(x: u64, y: u64, primes: &[u64]) -> u64 {
        if x == 0 {
            return 0;
        }
        1 + primes
            .iter()
            .take_while(|&&p| p <= y && p <= x)
            .map(|&p| go(x / p, p, primes))
            .sum::<u64>()
    }
    let primes = arith::primes_up_to(y.min(x));
    go(x, y, &primes)
}

/// Dickman's `ρ` tabulated on a uniform grid.
///
/// Nodes solve `u ρ(u) = ∫_{u-1}^{u} ρ` implicitly. The integral is split at
/// the integer inside the window (where `ρ` loses smoothness) and each piece
/// is done with composite Simpson, finishing with a 3/8 panel on odd counts.
/// Between nodes, cubic Lagrange interpolation stays inside one unit interval.
#[derive(Debug, Clone)]
pub struct DickmanInterpolant {
    u_max: f64,
    per_unit: usize,
    samples: Vec<f64>,
}

/// Default nodes per unit of `u`.
pub const DICKMAN_PER_UNIT: usize = 2048;
/// Default range of the shared interpolant.
pub const DICKMAN_U_MAX: f64 = 20.0;

impl DickmanInterpolant {
    pub fn new(u_max: f64, per_unit: usize) -> Result<Self> {
        if !(u_max >= 1.0) || per_unit < 4 {
            return domain("dickman: need u_max ≥ 1 and at least 4 nodes per unit");
        }
        let units = u_max.ceil() as usize;
        let total = units * per_unit;
        let h = 1.0 / per_unit as f64;
        let mut rho = Vec::with_capacity(total + 1);
        // prefix sums by parity: par[s][i] = Σ_{j<i, j≡s} ρ_j
        let mut par = [vec![0.0f64], vec![0.0f64]];
        let push = |rho: &mut Vec<f64>, par: &mut [Vec<f64>; 2], v: f64| {
            let i = rho.len();
            rho.push(v);
            for (s, prefix) in par.iter_mut().enumerate() {
                let last = *prefix.last().unwrap();
                prefix.push(if i % 2 == s { last + v } else { last });
            }
        };
        for _ in 0..=per_unit {
            push(&mut rho, &mut par, 1.0);
        }
        for n in per_unit + 1..=total {
            let start = n - per_unit;
            let un = n as f64 * h;
            let (mut known, mut coef) = (0.0, 0.0);
            let kink = n.div_ceil(per_unit) * per_unit - per_unit;
            let pieces: &[(usize, usize)] = if kink > start && kink < n {
                &[(start, kink), (kink, n)]
            } else {
                &[(start, n)]
            };
            for &(a, b) in pieces {
                let (k, c) = piece(&rho, &par, a, b, n, h);
                known += k;
                coef += c;
            }
            push(&mut rho, &mut par, known / (un - coef));
        }
        Ok(DickmanInterpolant {
            u_max: units as f64,
            per_unit,
            samples: rho,
        })
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn step(&self) -> f64 {
        1.0 / self.per_unit as f64
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn eval(&self, u: f64) -> Result<f64> {
        if !(u >= 0.0) {
            return domain(format!("dickman rho: u = {u} < 0"));
        }
        if u > self.u_max {
            return domain(format!("dickman rho: u = {u} > u_max = {}", self.u_max));
        }
        if u <= 1.0 {
            return Ok(1.0);
        }
        let n = self.per_unit;
        let t = u * n as f64;
        let i = (t.floor() as usize).min(self.samples.len() - 2);
        // nodes i-1..i+2 kept within the unit interval containing [i, i+1]
        let unit_lo = (i / n) * n;
        let unit_hi = unit_lo + n;
        let first = (i.saturating_sub(1)).clamp(unit_lo, unit_hi - 3);
        let mut acc = 0.0;
        for a in first..first + 4 {
            let mut w = 1.0;
            for b in first..first + 4 {
                if a != b {
                    w *= (t - b as f64) / (a as f64 - b as f64);
                }
            }
            acc += w * self.samples[a];
        }
        Ok(acc)
    }
}

/// `(known part, coefficient of ρ_n)` of `∫` over nodes `a..=b`; `ρ_b` is
/// unknown when `b == n`.
fn piece(rho: &[f64], par: &[Vec<f64>; 2], a: usize, b: usize, n: usize, h: f64) -> (f64, f64) {
    let val = |j: usize| if j == n { 0.0 } else { rho[j] };
    let end_coef = |w: f64| if b == n { w } else { 0.0 };
    // Σ_{j ∈ [lo, hi], j ≡ s mod 2} ρ_j, all known
    let psum = |lo: usize, hi: usize, s: usize| par[s][hi + 1] - par[s][lo];
    let simpson = |lo: usize, hi: usize| -> f64 {
        // lo..hi even length ≥ 2, all nodes known
        let odd = psum(lo + 1, hi - 1, (lo + 1) % 2);
        let even = if hi - lo >= 4 { psum(lo + 2, hi - 2, lo % 2) } else { 0.0 };
        h / 3.0 * (rho[lo] + rho[hi] + 4.0 * odd + 2.0 * even)
    };
    let len = b - a;
    match len {
        0 => (0.0, 0.0),
        1 => (h / 2.0 * (rho[a] + val(b)), end_coef(h / 2.0)),
        2 => (h / 3.0 * (rho[a] + 4.0 * rho[a + 1] + val(b)), end_coef(h / 3.0)),
        3 => (
            3.0 * h / 8.0 * (rho[a] + 3.0 * rho[a + 1] + 3.0 * rho[a + 2] + val(b)),
            end_coef(3.0 * h / 8.0),
        ),
        _ if len % 2 == 0 => {
            // Simpson up to b-2, plus the last panel with ρ_b possibly unknown
            let head = if len > 2 { simpson(a, b - 2) } else { 0.0 };
            (
                head + h / 3.0 * (rho[b - 2] + 4.0 * rho[b - 1] + val(b)),
                end_coef(h / 3.0),
            )
        }
        _ => {
            let head = simpson(a, b - 3);
            (
                head + 3.0 * h / 8.0 * (rho[b - 3] + 3.0 * rho[b - 2] + 3.0 * rho[b - 1] + val(b)),
                end_coef(3.0 * h / 8.0),
            )
        }
    }
}

fn shared_dickman() -> &'static DickmanInterpolant {
    static RHO: OnceLock<DickmanInterpolant> = OnceLock::new();
    RHO.get_or_init(|| {
        DickmanInterpolant::new(DICKMAN_U_MAX, DICKMAN_PER_UNIT).expect("valid defaults")
    })
}

/// `ρ(u)` for `0 ≤ u ≤ 20`.
pub fn dickman_rho(u: f64) -> Result<f64> {
    shared_dickman().eval(u)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddlePoint {
    pub x: f64,
    pub y: f64,
    pub alpha: f64,
    /// `Σ_{p≤y} log p/(p^α − 1) − log x` at the returned `α`.
    pub residual: f64,
}

/// `Σ_{p≤y} log p / (p^α − 1)`.
pub fn saddle_sum(primes: &[u64], alpha: f64) -> f64 {
    primes
        .iter()
        .map(|&p| {
            let lp = (p as f64).ln();
            lp / (alpha * lp).exp_m1()
        })
        .sum()
}

/// Bracket used for `α`.
pub const ALPHA_BRACKET: (f64, f64) = (1e-6, 1.999);

/// Solves `Σ_{p≤y} log p/(p^α − 1) = log x` by bisection.
pub fn alpha_saddle(x: f64, y: f64) -> Result<SaddlePoint> {
    if !(y >= 2.0 && y <= x) {
        return domain(format!("alpha_saddle: need 2 ≤ y ≤ x, got x = {x}, y = {y}"));
    }
    arith::check_bound("alpha_saddle prime bound", y as u64, PSI_PRIME_BOUND)?;
    let primes = arith::primes_up_to(y.floor() as u64);
    let target = x.ln();
    let (mut lo, mut hi) = ALPHA_BRACKET;
    let (glo, ghi) = (saddle_sum(&primes, lo), saddle_sum(&primes, hi));
    if !(glo >= target && ghi <= target) {
        return Err(Error::Numeric(format!(
            "alpha_saddle: log x = {target} not bracketed on [{lo}, {hi}] (sums {glo}, {ghi})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if saddle_sum(&primes, mid) > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (rlo, rhi) = (saddle_sum(&primes, lo) - target, saddle_sum(&primes, hi) - target);
    let (alpha, residual) = if rlo.abs() <= rhi.abs() { (lo, rlo) } else { (hi, rhi) };
    Ok(SaddlePoint { x, y, alpha, residual })
}

/// `Σ_{n>Y, P(n)≤w} 1/n`, exactly as `Π_{p≤w} p/(p−1) − Σ_{n≤Y, P(n)≤w} 1/n`.
pub fn smooth_tail_sum(w: u64, big_y: u64) -> f64 {
    let primes = arith::primes_up_to(w);
    let euler: f64 = primes.iter().map(|&p| p as f64 / (p - 1) as f64).product();
    let mut head = 0.0;
    smooth_visit(1, 0, big_y, &primes, &mut |n| head += 1.0 / n as f64);
    euler - head
}

/// Calls `visit` on every `w`-smooth `n ≤ x` (primes given), in DFS order.
pub(crate) fn smooth_visit(m: u64, start: usize, x: u64, primes: &[u64], visit: &mut impl FnMut(u64)) {
    visit(m);
    for j in start..primes.len() {
        match m.checked_mul(primes[j]) {
            Some(next) if next <= x => smooth_visit(next, j, x, primes, visit),
            _ => break,
        }
    }
}

/// One diagnostic value from [`smooth_compare`].
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub quantity: &'static str,
    pub params: String,
    pub value: f64,
}

/// Diagnostics comparing exact smooth counts with their analytic companions:
/// `Ψ(x,y)/(xρ(u))`, `Ψ(x/d,y) d^α / Ψ(x,y)` for each `d`, `y^{1−α}/(u log u)`,
/// and the tail `Σ_{n>Y, P(n)≤w} 1/n`.
pub fn smooth_compare(x: f64, y: f64, ds: &[u64], tail: Option<(u64, u64)>) -> Result<Vec<CompareRow>> {
    let base = psi_exact(x, y, SmoothFilter::All)?;
    let u = base.u;
    let rho = dickman_rho(u)?;
    let saddle = alpha_saddle(x, y)?;
    let params = format!("x={x};y={y}");
    let mut rows = vec![
        CompareRow { quantity: "psi", params: params.clone(), value: base.value as f64 },
        CompareRow { quantity: "rho_u", params: format!("{params};u={u}"), value: rho },
        CompareRow { quantity: "psi_over_x_rho", params: params.clone(), value: base.value as f64 / (x * rho) },
        CompareRow { quantity: "alpha", params: params.clone(), value: saddle.alpha },
        CompareRow { quantity: "alpha_residual", params: params.clone(), value: saddle.residual },
    ];
    if u > 1.0 {
        rows.push(CompareRow {
            quantity: "y_pow_1_minus_alpha_over_u_log_u",
            params: params.clone(),
            value: y.powf(1.0 - saddle.alpha) / (u * u.ln()),
        });
    }
    for &d in ds {
        if d == 0 || d as f64 > x {
            return domain(format!("smooth_compare: d = {d} outside [1, x]"));
        }
        let shifted = psi_exact(x / d as f64, y, SmoothFilter::All)?;
        rows.push(CompareRow {
            quantity: "psi_shift_ratio",
            params: format!("{params};d={d}"),
            value: shifted.value as f64 * (d as f64).powf(saddle.alpha) / base.value as f64,
        });
    }
    if let Some((w, big_y)) = tail {
        rows.push(CompareRow {
            quantity: "smooth_tail_sum",
            params: format!("w={w};Y={big_y}"),
            value: smooth_tail_sum(w, big_y),
        });
    }
    Ok(rows)
}
