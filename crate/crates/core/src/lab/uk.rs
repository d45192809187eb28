//! Gowers `U^k` norms of `n ↦ f(qn+a)` on `[0, Y]`.
//!
//! The interval is embedded in `ℤ_N`, `N` the least prime above `2kY`, which
//! is large enough that no cube with all vertices in `[0, Y]` wraps around.
//! Norms are normalized by the norm of the interval indicator.

use rustfft::FftPlanner;

use crate::arith;
use crate::error::{domain, Error, Result};
use crate::multfn::MultFn;
use crate::C64;

pub const UK_Y_BOUND: u64 = 300;

/// Least prime `> 2kY`.
pub fn cyclic_size(k: u32, y: u64) -> u64 {
    let mut n = 2 * k as u64 * y + 1;
    while !arith::is_prime_u64(n) {
        n += 1;
    }
    n
}

fn check(k: u32, y: u64) -> Result<()> {
    if !(2..=3).contains(&k) {
        return Err(Error::Unsupported(format!("U^{k} norm: only k ∈ {{2, 3}}")));
    }
    if y > UK_Y_BOUND {
        return Err(Error::Resource(format!("U^k norm: Y = {y} > {UK_Y_BOUND}")));
    }
    Ok(())
}

/// `Σ_{x,h ∈ ℤ_N} Π_ω C^{|ω|} g(x + ω·h)` for `g` supported on `[0, Y]`,
/// summing only over cubes whose base vertices lie in the support.
fn cube_sum_u2(g: &[C64]) -> f64 {
    let m = g.len();
    let mut s = C64::new(0.0, 0.0);
    for x in 0..m {
        for y in 0..m {
            let gxy = g[x] * g[y].conj();
            for z in 0..m {
                let w = y + z;
                if w < x || w - x >= m {
                    continue;
                }
                s += gxy * g[z].conj() * g[w - x];
            }
        }
    }
    s.re
}

fn cube_sum_u3(g: &[C64]) -> f64 {
    let m = g.len() as i64;
    let at = |i: i64| if (0..m).contains(&i) { g[i as usize] } else { C64::new(0.0, 0.0) };
    let mut s = C64::new(0.0, 0.0);
    for x in 0..m {
        for h1 in -x..m - x {
            for h2 in -x..m - x {
                let face = at(x) * at(x + h1).conj() * at(x + h2).conj() * at(x + h1 + h2);
                if face == C64::new(0.0, 0.0) {
                    continue;
                }
                for h3 in -x..m - x {
                    s += face
                        * at(x + h3).conj()
                        * at(x + h1 + h3)
                        * at(x + h2 + h3)
                        * at(x + h1 + h2 + h3).conj();
                }
            }
        }
    }
    s.re
}

/// `Σ_ξ |ĝ(ξ)|⁴ / N` on `ℤ_N`, equal to the `U²` cube sum.
fn fourier_u2(g: &[C64], n: usize, planner: &mut FftPlanner<f64>) -> f64 {
    let mut buf = vec![C64::new(0.0, 0.0); n];
    buf[..g.len()].copy_from_slice(g);
    planner.plan_fft_forward(n).process(&mut buf);
    buf.iter().map(|z| z.norm_sqr().powi(2)).sum::<f64>() / n as f64
}

/// `U³` cube sum as `Σ_h ‖g · conj(g(· + h))‖_{U²}⁴`, the inner norm by FFT.
fn derivative_u3(g: &[C64], n: usize) -> f64 {
    let m = g.len() as i64;
    let mut planner = FftPlanner::new();
    let mut total = 0.0;
    for h in -(m - 1)..m {
        let d: Vec<C64> = (0..m)
            .map(|x| if (0..m).contains(&(x + h)) { g[x as usize] * g[(x + h) as usize].conj() } else { C64::new(0.0, 0.0) })
            .collect();
        total += fourier_u2(&d, n, &mut planner);
    }
    total
}

/// How the cube sums are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UkMethod {
    /// Direct cube average (`U²` always; `U³` only for small `Y`).
    Cube,
    /// Fourier fourth moment for `U²`, FFT'd derivatives for `U³`.
    Fourier,
}

fn samples(f: &MultFn, q: u64, a: u64, y: u64) -> Result<Vec<C64>> {
    (0..=y).map(|n| if q * n + a == 0 { Ok(C64::new(0.0, 0.0)) } else { f.eval(q * n + a) }).collect()
}

/// Normalized `U^k` norm of an explicit sequence on `[0, len)`.
pub fn uk_norm_values(g: &[C64], k: u32, method: UkMethod) -> Result<f64> {
    if g.is_empty() {
        return domain("U^k norm of an empty interval");
    }
    let y = g.len() as u64 - 1;
    check(k, y)?;
    let n = cyclic_size(k, y) as usize;
    let ones = vec![C64::new(1.0, 0.0); g.len()];
    let sum = |v: &[C64]| -> Result<f64> {
        Ok(match (k, method) {
            (2, UkMethod::Cube) => cube_sum_u2(v),
            (2, UkMethod::Fourier) => fourier_u2(v, n, &mut FftPlanner::new()),
            (_, UkMethod::Fourier) => derivative_u3(v, n),
            (_, UkMethod::Cube) => {
                if y > 40 {
                    return Err(Error::Resource(format!("direct U³ cube sum limited to Y ≤ 40, got {y}")));
                }
                cube_sum_u3(v)
            }
        })
    };
    let ratio = sum(g)? / sum(&ones)?;
    Ok(ratio.max(0.0).powf(1.0 / f64::from(1u32 << k)))
}

/// `‖n ↦ f(qn+a)‖_{U^k[0,Y]}`, normalized so the constant `1` has norm `1`.
///
/// `U²` is the direct cube average; `U³` uses the derivative form
/// `‖g‖⁸_{U³} = Σ_h ‖Δ_h g‖⁴_{U²}`.
pub fn uk_norm(f: &MultFn, q: u64, a: u64, y: u64, k: u32) -> Result<f64> {
    check(k, y)?;
    if q == 0 {
        return domain("uk_norm: q = 0");
    }
    let g = samples(f, q, a, y)?;
    uk_norm_values(&g, k, if k == 2 { UkMethod::Cube } else { UkMethod::Fourier })
}

/// The `U²` norm from the Fourier fourth moment, for cross-checking.
pub fn u2_fourier(f: &MultFn, q: u64, a: u64, y: u64) -> Result<f64> {
    check(2, y)?;
    uk_norm_values(&samples(f, q, a, y)?, 2, UkMethod::Fourier)
}
