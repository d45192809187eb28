//! A smooth bump, its Fourier transform, and three forms of the lattice-count
//! error `g(q,q')`: direct, Poisson, and the separated main term.

use std::f64::consts::TAU;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, gcd, lcm};
use crate::error::{domain, Error, Result};
use crate::{e, par, quad, C64};

/// 8-point Gauss–Legendre on `[-1, 1]`.
const GL_X: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_W: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Cells in the cumulative table of the mollifier.
const CDF_CELLS: usize = 4096;
/// Trapezoid nodes per unit for the mollifier transform. The rule is
/// spectrally accurate here since every derivative vanishes at `±1`.
const TRAPEZOID_PER_UNIT: usize = 512;
/// Beyond this argument the mollifier transform is below `e^{-√(2s)} ≈ 1e-27`
/// and is returned as zero.
pub const MOLLIFIER_CUTOFF: f64 = 2000.0;
/// Absolute tolerance for oscillatory integrals.
pub const QUAD_TOL: f64 = 1e-12;

fn mollifier_raw(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

fn gauss8(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    h * GL_X
        .iter()
        .zip(&GL_W)
        .map(|(&x, &w)| w * (f(c - h * x) + f(c + h * x)))
        .sum::<f64>()
}

/// `ψ = 1_{[0,1]} ∗ φ_η` with `φ` the normalized `exp(−1/(1−t²))` bump.
///
/// Support `[−η, 1+η]`, equal to 1 on `[η, 1−η]`, unit mass.
#[derive(Debug, Clone)]
pub struct SmoothBump {
    eta: f64,
    cdf: Vec<f64>,
    mass: f64,
    trap: Vec<f64>,
    trap_mass: f64,
}

pub fn build_bump(eta: f64) -> Result<SmoothBump> {
    if !(eta > 0.0 && eta < 0.25) {
        return domain(format!("bump: eta = {eta} outside (0, 1/4)"));
    }
    let width = 2.0 / CDF_CELLS as f64;
    let mut cdf = Vec::with_capacity(CDF_CELLS + 1);
    let mut acc = 0.0;
    cdf.push(0.0);
    for i in 0..CDF_CELLS {
        let a = -1.0 + i as f64 * width;
        acc += gauss8(mollifier_raw, a, a + width);
        cdf.push(acc);
    }
    let dt = 1.0 / TRAPEZOID_PER_UNIT as f64;
    let trap: Vec<f64> = (0..TRAPEZOID_PER_UNIT).map(|k| mollifier_raw(k as f64 * dt)).collect();
    let trap_mass = dt * (trap[0] + 2.0 * trap[1..].iter().sum::<f64>());
    Ok(SmoothBump { eta, cdf, mass: acc, trap, trap_mass })
}

impl SmoothBump {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Cumulative mass of the unit mollifier up to `s`.
    fn mollifier_cdf(&self, s: f64) -> f64 {
        if s <= -1.0 {
            return 0.0;
        }
        if s >= 1.0 {
            return 1.0;
        }
        let width = 2.0 / CDF_CELLS as f64;
        let i = (((s + 1.0) / width) as usize).min(CDF_CELLS - 1);
        let a = -1.0 + i as f64 * width;
        (self.cdf[i] + gauss8(mollifier_raw, a, s)) / self.mass
    }

    /// `ψ(x)`.
    pub fn eval(&self, x: f64) -> f64 {
        let e = self.eta;
        if x <= -e || x >= 1.0 + e {
            return 0.0;
        }
        if x >= e && x <= 1.0 - e {
            return 1.0;
        }
        self.mollifier_cdf(x / e) - self.mollifier_cdf((x - 1.0) / e)
    }

    /// Transform of the unit mollifier, `∫ φ(t) cos(st) dt`.
    pub fn mollifier_hat(&self, s: f64) -> f64 {
        let s = s.abs();
        if s > MOLLIFIER_CUTOFF {
            return 0.0;
        }
        let dt = 1.0 / TRAPEZOID_PER_UNIT as f64;
        let tail: f64 = self.trap[1..]
            .iter()
            .enumerate()
            .map(|(k, &v)| v * (s * (k + 1) as f64 * dt).cos())
            .sum();
        dt * (self.trap[0] + 2.0 * tail) / self.trap_mass
    }

    /// `ψ̂(t) = ∫ ψ(x) e^{−itx} dx = ((1 − e^{−it})/(it)) φ̂(ηt)`.
    pub fn fourier(&self, t: f64) -> C64 {
        let box_part = if t.abs() < 1e-8 {
            // series of (1 − e^{−it})/(it)
            C64::new(1.0 - t * t / 6.0, -t / 2.0)
        } else {
            (C64::new(1.0, 0.0) - C64::new(0.0, -t).exp()) / C64::new(0.0, t)
        };
        box_part * self.mollifier_hat(self.eta * t)
    }

    /// Breakpoints where `ψ` changes smoothness class.
    pub fn kinks(&self) -> [f64; 4] {
        let e = self.eta;
        [-e, e, 1.0 - e, 1.0 + e]
    }

    /// `∫ψ` by adaptive quadrature.
    pub fn mass(&self) -> Result<f64> {
        quad::integrate_pieces(|x| self.eval(x), &self.kinks(), 1e-13)
    }

    /// `max_t |ψ̂(t)| (1+|t|)^A η^{A−1}` over the sample points.
    pub fn decay_constant(&self, a: i32, ts: &[f64]) -> f64 {
        ts.iter()
            .map(|&t| self.fourier(t).norm() * (1.0 + t.abs()).powi(a) * self.eta.powi(a - 1))
            .fold(0.0, f64::max)
    }
}

/// `∫_{|u|≤lim} ψ(ℓu) e(−f u) du` by quadrature, with the plateau done in closed form.
pub fn u_integral(bump: &SmoothBump, ell: f64, freq: f64, lim: f64) -> Result<C64> {
    let k = bump.kinks().map(|v| v / ell);
    let clip = |a: f64, b: f64| (a.max(-lim), b.min(lim));
    let mut total = C64::new(0.0, 0.0);
    // rising and falling edges
    for (a, b) in [clip(k[0], k[1]), clip(k[2], k[3])] {
        if a < b {
            total += quad::integrate_complex(|u| e(-freq * u) * bump.eval(ell * u), a, b, QUAD_TOL)?;
        }
    }
    let (a, b) = clip(k[1], k[2]);
    if a < b {
        total += if freq == 0.0 {
            C64::new(b - a, 0.0)
        } else {
            (e(-freq * b) - e(-freq * a)) / C64::new(0.0, -TAU * freq)
        };
    }
    Ok(total)
}

/// `|ψ̂(2πMh/(dℓℓ')) − ℓ ∫_{|u|≤2/ℓ} ψ(ℓu) e(−Mhu/(dℓ')) du|`.
pub fn fourier_convention_residual(bump: &SmoothBump, m: f64, h: i64, d: u64, ell: u64, ellp: u64) -> Result<f64> {
    let l = (d * ell * ellp) as f64;
    let lhs = bump.fourier(TAU * m * h as f64 / l);
    let rhs = u_integral(bump, ell as f64, m * h as f64 / (d * ellp) as f64, 2.0 / ell as f64)? * ell as f64;
    Ok((lhs - rhs).norm())
}

/// `(v^{-1} mod u)/u + (u^{-1} mod v)/v ≡ 1/(uv) (mod 1)`, in exact rationals.
pub fn reciprocity_check(u: u64, v: u64) -> Result<bool> {
    if u == 0 || v == 0 || gcd(u, v) != 1 {
        return domain(format!("reciprocity: gcd({u}, {v}) ≠ 1"));
    }
    let vi = arith::mod_inverse(v as i64, u).expect("coprime") as i64;
    let ui = arith::mod_inverse(u as i64, v).expect("coprime") as i64;
    let (u, v) = (u as i64, v as i64);
    let diff = Ratio::new(vi, u) + Ratio::new(ui, v) - Ratio::new(1, u * v);
    Ok(diff.is_integer())
}

/// `|e_{pℓ'}(w·inv(p'ℓ)) e_{p'ℓ}(w·inv(pℓ')) − e_{pp'ℓℓ'}(w)|`.
pub fn phase_identity_residual(p: u64, pp: u64, ell: u64, ellp: u64, w: i64) -> Result<f64> {
    let (u, v) = (p * ellp, pp * ell);
    if gcd(u, v) != 1 {
        return domain(format!("phase identity: gcd({u}, {v}) ≠ 1"));
    }
    let lhs = e_frac(w as i128 * arith::mod_inverse(v as i64, u).expect("coprime") as i128, u)
        * e_frac(w as i128 * arith::mod_inverse(u as i64, v).expect("coprime") as i128, v);
    Ok((lhs - e_frac(w as i128, u * v)).norm())
}

/// Random admissible `(p, p', ℓ, ℓ', w)` for the phase identity.
pub fn random_phase_tuples(seed: u64, count: usize) -> Vec<(u64, u64, u64, u64, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = arith::primes_up_to(1000);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = primes[rng.random_range(0..primes.len())];
        let pp = primes[rng.random_range(0..primes.len())];
        let ell = rng.random_range(1..2000u64);
        let ellp = rng.random_range(1..2000u64);
        if gcd(p * ellp, pp * ell) == 1 {
            out.push((p, pp, ell, ellp, rng.random_range(-1_000_000..1_000_000i64)));
        }
    }
    out
}

/// `e(a/m)` with the numerator reduced exactly first.
fn e_frac(a: i128, m: u64) -> C64 {
    e(a.rem_euclid(m as i128) as f64 / m as f64)
}

/// A tuple `(q, q', p, p', a)` with the derived quantities of the lattice count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GQuadruple {
    pub q: u64,
    pub qp: u64,
    pub p: u64,
    pub pp: u64,
    pub a: i64,
    pub d: u64,
    pub ell: u64,
    pub ellp: u64,
    pub m: f64,
    /// `r mod [q,q']` with `pr ≡ a (q)` and `p'r ≡ a (q')`.
    pub r: u64,
}

impl GQuadruple {
    pub fn new(q: u64, qp: u64, p: u64, pp: u64, a: i64, m: f64) -> Result<Self> {
        if q == 0 || qp == 0 || p == 0 || pp == 0 {
            return domain("quadruple: zero entry");
        }
        if !(m >= 1.0) {
            return domain(format!("quadruple: M = {m} < 1"));
        }
        let d = gcd(q, qp);
        let au = a.unsigned_abs();
        if (p as i64 - pp as i64).rem_euclid(d as i64) != 0 {
            return domain(format!("quadruple: p = {p} ≢ p' = {pp} mod {d}"));
        }
        if gcd(au, q) != 1 || gcd(au, qp) != 1 || gcd(p, q) != 1 || gcd(pp, qp) != 1 {
            return domain(format!("quadruple: coprimality fails for (q, q', p, p', a) = ({q}, {qp}, {p}, {pp}, {a})"));
        }
        let (ell, ellp) = (q / d, qp / d);
        let r1 = arith::mul_mod(a.rem_euclid(q as i64) as u64, arith::mod_inverse(p as i64, q).expect("unit"), q);
        let r2 = arith::mul_mod(a.rem_euclid(qp as i64) as u64, arith::mod_inverse(pp as i64, qp).expect("unit"), qp);
        let r = crt(r1, q, r2, qp).ok_or_else(|| Error::Domain("quadruple: congruences inconsistent".into()))?;
        Ok(GQuadruple { q, qp, p, pp, a, d, ell, ellp, m, r })
    }

    pub fn lcm(&self) -> u64 {
        lcm(self.q, self.qp)
    }

    /// `k = (p' − p) a / d`.
    pub fn k(&self) -> i128 {
        (self.pp as i128 - self.p as i128) * self.a as i128 / self.d as i128
    }

    /// `H = x^{2σ} Q² / (d M)`.
    pub fn lemma_h(&self, x: f64, sigma: f64, big_q: f64) -> f64 {
        x.powf(2.0 * sigma) * big_q * big_q / (self.d as f64 * self.m)
    }
}

/// Solution of `n ≡ r1 (m1)`, `n ≡ r2 (m2)` modulo `lcm(m1, m2)`.
fn crt(r1: u64, m1: u64, r2: u64, m2: u64) -> Option<u64> {
    let g = gcd(m1, m2);
    if (r1 as i128 - r2 as i128).rem_euclid(g as i128) != 0 {
        return None;
    }
    let l = (m1 / g) as u128 * m2 as u128;
    let m1g = m1 / g;
    let m2g = m2 / g;
    // n = r1 + m1 t with m1 t ≡ r2 − r1 (m2)  ⇔  (m1/g) t ≡ (r2 − r1)/g (m2/g)
    let rhs = ((r2 as i128 - r1 as i128) / g as i128).rem_euclid(m2g as i128) as u64;
    let inv = arith::mod_inverse(m1g as i64, m2g)?;
    let t = (rhs as u128 * inv as u128) % m2g.max(1) as u128;
    Some(((r1 as u128 + m1 as u128 * t) % l) as u64)
}

/// `g(q,q') = Σ_m ψ(m/M) 1_{m≡r ([q,q'])} − M/[q,q']` by direct summation.
pub fn g_exact(quad: &GQuadruple, bump: &SmoothBump) -> f64 {
    let l = quad.lcm() as i128;
    let lo = (-bump.eta * quad.m).floor() as i128;
    let hi = ((1.0 + bump.eta) * quad.m).ceil() as i128;
    // first m ≥ lo with m ≡ r
    let mut m = lo + (quad.r as i128 - lo).rem_euclid(l);
    let mut s = 0.0;
    while m <= hi {
        s += bump.eval(m as f64 / quad.m);
        m += l;
    }
    s - quad.m / l as f64
}

/// `(M/[q,q']) Σ_{0<|h|≤H} ψ̂(2πMh/[q,q']) e(rh/[q,q'])`.
pub fn g_poisson(quad: &GQuadruple, bump: &SmoothBump, h_max: u64) -> f64 {
    let l = quad.lcm();
    let ml = quad.m / l as f64;
    // ψ real, so the h and −h terms are conjugate
    let s: f64 = (1..=h_max)
        .map(|h| (bump.fourier(TAU * quad.m * h as f64 / l as f64) * e_frac(quad.r as i128 * h as i128, l)).re)
        .sum();
    2.0 * ml * s
}

/// `(M/q') Σ_{0<|h|≤H} e_{p'ℓ}(kh·inv(pℓ')) ∫_{|u|≤2d/Q} ψ(ℓu) e(−Mhu/(dℓ')) du`.
pub fn g_mainterm(quad: &GQuadruple, bump: &SmoothBump, h_max: u64, big_q: f64) -> Result<C64> {
    let (u, v) = (quad.p * quad.ellp, quad.pp * quad.ell);
    if gcd(u, v) != 1 {
        return domain(format!("main term: gcd(pℓ', p'ℓ) = gcd({u}, {v}) ≠ 1"));
    }
    let inv = arith::mod_inverse(u as i64, v).expect("coprime") as i128;
    let k = quad.k();
    let lim = 2.0 * quad.d as f64 / big_q;
    let ell = quad.ell as f64;
    let support_inside = (1.0 + bump.eta) / ell <= lim;
    let freq_unit = quad.m / (quad.d * quad.ellp) as f64;
    let terms = par::map_range(1..h_max as usize + 1, |h| -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for sh in [h as i64, -(h as i64)] {
            let freq = freq_unit * sh as f64;
            // ηt beyond the cutoff: the integral is ψ̂(t)/ℓ and vanishes to double precision
            let t = TAU * freq / ell;
            if support_inside && (bump.eta * t).abs() > MOLLIFIER_CUTOFF {
                continue;
            }
            let phase = e_frac(k * sh as i128 % v as i128 * inv, v);
            acc += phase * u_integral(bump, ell, freq, lim)?;
        }
        Ok(acc)
    });
    let mut sum = C64::new(0.0, 0.0);
    for t in terms {
        sum += t?;
    }
    Ok(sum * (quad.m / quad.qp as f64))
}

/// One comparison of the three forms.
#[derive(Debug, Clone, PartialEq)]
pub struct GComparison {
    pub quad: GQuadruple,
    pub h_poisson: u64,
    pub h_main: u64,
    pub g_exact: f64,
    pub g_poisson: f64,
    pub g_mainterm: C64,
    pub diff_exact_poisson: f64,
    pub diff_exact_main: f64,
    pub diff_poisson_main: f64,
}

pub fn g_compare(quad: &GQuadruple, bump: &SmoothBump, h_poisson: u64, h_main: u64, big_q: f64) -> Result<GComparison> {
    let ge = g_exact(quad, bump);
    let gp = g_poisson(quad, bump, h_poisson);
    let gm = g_mainterm(quad, bump, h_main, big_q)?;
    Ok(GComparison {
        quad: *quad,
        h_poisson,
        h_main,
        g_exact: ge,
        g_poisson: gp,
        g_mainterm: gm,
        diff_exact_poisson: (ge - gp).abs(),
        diff_exact_main: (C64::new(ge, 0.0) - gm).norm(),
        diff_poisson_main: (C64::new(gp, 0.0) - gm).norm(),
    })
}

/// Admissible quadruples with `q, q' ∈ (lo, hi]`, `p, p'` primes in `(P, 2P]`, `a` fixed,
/// `M = x / max(p, p')`, in a deterministic order. At most `count` are returned.
pub fn admissible_quads(lo: u64, hi: u64, big_p: u64, a: i64, x: f64, count: usize) -> Vec<GQuadruple> {
    let primes = arith::primes_in_range(big_p, 2 * big_p);
    let mut out = Vec::new();
    'outer: for q in lo + 1..=hi {
        for qp in q + 1..=hi {
            for &p in &primes {
                for &pp in &primes {
                    if p == pp {
                        continue;
                    }
                    let m = x / p.max(pp) as f64;
                    if let Ok(g) = GQuadruple::new(q, qp, p, pp, a, m) {
                        if gcd(g.p * g.ellp, g.pp * g.ell) == 1 {
                            out.push(g);
                            if out.len() == count {
                                break 'outer;
                            }
                            continue 'outer;
                        }
                    }
                }
            }
        }
    }
    out
}

/// `∫_0^1 e^{−itx} dx`.
pub fn box_transform(t: f64) -> C64 {
    if t == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        C64::new(t.sin() / t, (t.cos() - 1.0) / t)
    }
}
