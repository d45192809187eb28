//! Dirichlet characters.
//!
//! The unit group `(ℤ/qℤ)^×` is decomposed into prime-power components: a
//! cyclic group generated by the least primitive root for odd `p^k`, and
//! `{±1} × ⟨5⟩` for `2^k`, `k ≥ 3`. A character is fixed by its exponent
//! coordinates `(j_1, …, j_r)` on these basis elements, and its canonical index
//! is the mixed-radix number with `j_1` most significant, so index order is
//! lexicographic order of coordinates.
//!
//! Values are stored exactly as exponents `v` with `χ(n) = e(v / L)`, `L` the
//! exponent of the group; complex values are produced on demand.

use std::sync::Arc;

use crate::arith::{self, factorize, gcd};
use crate::error::{domain, Error, Result};
use crate::{e, C64};

/// Largest modulus for which a full character group is materialized.
pub const GROUP_BOUND: u64 = 1_000_000;

const NON_UNIT: u32 = u32::MAX;

/// Full character group modulo `q`, as discrete-log tables.
#[derive(Debug, Clone)]
pub struct CharacterGroup {
    q: u64,
    phi: u64,
    /// Basis elements of the unit group, as residues mod `q`.
    basis: Vec<u64>,
    /// Order of each basis element (the radix of the index).
    orders: Vec<u64>,
    /// Group exponent: lcm of `orders`.
    exponent: u64,
    /// `logs[n * r + i]` = log of `n` on basis element `i`, `NON_UNIT` off units.
    logs: Vec<u32>,
}

struct Component {
    pk: u64,
    gens: Vec<u64>,
    orders: Vec<u64>,
    /// Per residue mod `pk`: coordinates on `gens`, `NON_UNIT` off units.
    logs: Vec<Vec<u32>>,
}

fn least_primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let fac = factorize(p - 1).expect("p - 1 in range");
    (2..p)
        .find(|&g| {
            fac.primes()
                .all(|r| arith::pow_mod(g, (p - 1) / r, p) != 1)
        })
        .expect("primitive root exists")
}

fn odd_component(p: u64, k: u32) -> Component {
    let pk = p.pow(k);
    let mut g = least_primitive_root(p);
    if k >= 2 && arith::pow_mod(g, p - 1, p * p) == 1 {
        g += p;
    }
    let order = pk / p * (p - 1);
    let mut logs = vec![vec![NON_UNIT]; pk as usize];
    let mut x = 1u64;
    for t in 0..order {
        logs[x as usize] = vec![t as u32];
        x = arith::mul_mod(x, g, pk);
    }
    Component {
        pk,
        gens: vec![g],
        orders: vec![order],
        logs,
    }
}

fn two_component(k: u32) -> Component {
    let pk = 1u64 << k;
    let mut logs = vec![Vec::new(); pk as usize];
    match k {
        1 => {
            logs[0] = vec![NON_UNIT];
            logs[1] = vec![];
            Component {
                pk,
                gens: vec![],
                orders: vec![],
                logs,
            }
        }
        2 => {
            logs[0] = vec![NON_UNIT];
            logs[2] = vec![NON_UNIT];
            logs[1] = vec![0];
            logs[3] = vec![1];
            Component {
                pk,
                gens: vec![3],
                orders: vec![2],
                logs,
            }
        }
        _ => {
            let order5 = pk / 4;
            for n in (0..pk).step_by(2) {
                logs[n as usize] = vec![NON_UNIT, NON_UNIT];
            }
            let mut y = 1u64;
            for t in 0..order5 {
                logs[y as usize] = vec![0, t as u32];
                logs[(pk - y) as usize] = vec![1, t as u32];
                y = y * 5 % pk;
            }
            Component {
                pk,
                gens: vec![pk - 1, 5],
                orders: vec![2, order5],
                logs,
            }
        }
    }
}

/// CRT lift: the residue mod `q` that is `g` mod `pk` and `1` mod `q / pk`.
fn lift(g: u64, pk: u64, q: u64) -> u64 {
    let rest = q / pk;
    if rest == 1 {
        return g % q;
    }
    // n = 1 + rest * t with n ≡ g (mod pk)
    let inv = arith::mod_inverse((rest % pk) as i64, pk).expect("coprime components");
    let t = arith::mul_mod((g + pk - 1) % pk, inv, pk);
    (1 + rest * t) % q
}

impl CharacterGroup {
    pub fn new(q: u64) -> Result<Self> {
        if q == 0 {
            return domain("character group modulo 0");
        }
        arith::check_bound("character group modulus", q, GROUP_BOUND)?;
        let fac = factorize(q)?;
        let comps: Vec<Component> = fac
            .factors
            .iter()
            .map(|&(p, k)| if p == 2 { two_component(k) } else { odd_component(p, k) })
            .collect();
        let mut basis = Vec::new();
        let mut orders = Vec::new();
        for c in &comps {
            for (&g, &o) in c.gens.iter().zip(&c.orders) {
                basis.push(lift(g, c.pk, q));
                orders.push(o);
            }
        }
        let r = basis.len();
        let mut logs = vec![NON_UNIT; q as usize * r.max(1)];
        for n in 0..q {
            if gcd(n, q) != 1 {
                continue;
            }
            let mut i = 0;
            for c in &comps {
                for &l in &c.logs[(n % c.pk) as usize] {
                    logs[n as usize * r + i] = l;
                    i += 1;
                }
            }
            if r == 0 {
                logs[n as usize] = 0;
            }
        }
        let exponent = orders.iter().fold(1, |a, &o| arith::lcm(a, o));
        Ok(CharacterGroup {
            q,
            phi: fac.phi,
            basis,
            orders,
            exponent,
            logs,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    /// Number of characters, `φ(q)`.
    pub fn len(&self) -> u64 {
        self.phi
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    fn coords_of(&self, mut index: u64) -> Vec<u64> {
        let mut coords = vec![0; self.orders.len()];
        for i in (0..self.orders.len()).rev() {
            coords[i] = index % self.orders[i];
            index /= self.orders[i];
        }
        coords
    }

    fn index_of(&self, coords: &[u64]) -> u64 {
        coords
            .iter()
            .zip(&self.orders)
            .fold(0, |acc, (&c, &o)| acc * o + c)
    }

    /// Character with the given canonical index `0 ≤ index < φ(q)`.
    pub fn character(&self, index: u64) -> Result<DirichletCharacter> {
        if index >= self.phi {
            return domain(format!("character index {index} ≥ φ({}) = {}", self.q, self.phi));
        }
        Ok(self.build(self.coords_of(index)))
    }

    fn build(&self, coords: Vec<u64>) -> DirichletCharacter {
        let r = self.orders.len();
        let l = self.exponent;
        let weights: Vec<u64> = coords
            .iter()
            .zip(&self.orders)
            .map(|(&c, &o)| c * (l / o) % l)
            .collect();
        let q = self.q as usize;
        let mut exps = vec![NON_UNIT; q];
        for (n, slot) in exps.iter_mut().enumerate() {
            let logs = &self.logs[n * r.max(1)..n * r.max(1) + r.max(1)];
            if logs[0] == NON_UNIT {
                continue;
            }
            let v = if r == 0 {
                0
            } else {
                logs.iter()
                    .zip(&weights)
                    .fold(0u64, |acc, (&lg, &w)| (acc + arith::mul_mod(lg as u64, w, l)) % l)
            };
            *slot = v as u32;
        }
        let conductor = conductor_of(self.q, &exps);
        DirichletCharacter {
            modulus: self.q,
            index: self.index_of(&coords),
            coords,
            order: l,
            exps: exps.into(),
            conductor,
        }
    }

    /// All characters, in canonical index order.
    pub fn characters(&self) -> impl Iterator<Item = DirichletCharacter> + '_ {
        (0..self.phi).map(|i| self.build(self.coords_of(i)))
    }

    /// The principal character (index 0).
    pub fn principal(&self) -> DirichletCharacter {
        self.build(vec![0; self.orders.len()])
    }

    /// Identifies the character of this group whose value at each unit `n` is
    /// `e(value(n))`, with `value` returning the exact fraction `(num, den)`.
    fn from_exponents(&self, value: impl Fn(u64) -> (u64, u64)) -> Result<DirichletCharacter> {
        let mut coords = Vec::with_capacity(self.basis.len());
        for (&b, &o) in self.basis.iter().zip(&self.orders) {
            let (num, den) = value(b);
            let scaled = num as u128 * o as u128;
            if scaled % den as u128 != 0 {
                return Err(Error::Domain(
                    "values are not a character of this group".into(),
                ));
            }
            coords.push((scaled / den as u128) as u64 % o);
        }
        Ok(self.build(coords))
    }

    /// Character mod `q` induced by `psi` (mod `r`, `r | q`).
    pub fn induce(&self, psi: &DirichletCharacter) -> Result<DirichletCharacter> {
        let r = psi.modulus;
        if self.q % r != 0 {
            return domain(format!("cannot induce from modulus {r} to {}", self.q));
        }
        let chi = self.from_exponents(|b| {
            let v = psi.exponent(b).expect("basis element is a unit mod r");
            (v, psi.order)
        })?;
        Ok(chi)
    }
}

impl CharacterGroup {
    /// `Σ_a conj(χ)(a) A[a]` for every character, in canonical index order,
    /// where `a` runs over units mod `q` and `A` is indexed by residue.
    ///
    /// A multidimensional DFT over the exponent coordinates.
    pub fn transform(&self, residues: &[C64]) -> Vec<C64> {
        assert_eq!(residues.len() as u64, self.q, "one value per residue");
        let r = self.orders.len();
        let total = self.phi as usize;
        let mut buf = vec![C64::new(0.0, 0.0); total];
        for (n, &v) in residues.iter().enumerate() {
            let logs = &self.logs[n * r.max(1)..n * r.max(1) + r.max(1)];
            if logs[0] == NON_UNIT {
                continue;
            }
            let idx = logs
                .iter()
                .take(r)
                .zip(&self.orders)
                .fold(0usize, |acc, (&l, &o)| acc * o as usize + l as usize);
            buf[idx] += v;
        }
        let mut planner = rustfft::FftPlanner::<f64>::new();
        // axis i has stride Π_{j>i} orders[j]
        let mut stride = 1usize;
        for i in (0..r).rev() {
            let len = self.orders[i] as usize;
            if len > 1 {
                let fft = planner.plan_fft_forward(len);
                let mut line = vec![C64::new(0.0, 0.0); len];
                let block = stride * len;
                for base in (0..total).step_by(block) {
                    for off in 0..stride {
                        for (t, slot) in line.iter_mut().enumerate() {
                            *slot = buf[base + off + t * stride];
                        }
                        fft.process(&mut line);
                        for (t, &v) in line.iter().enumerate() {
                            buf[base + off + t * stride] = v;
                        }
                    }
                }
            }
            stride *= len;
        }
        buf
    }
}

/// Smallest `d | q` such that `χ` is trivial on units `≡ 1 (mod d)`.
fn conductor_of(q: u64, exps: &[u32]) -> u64 {
    let divisors = factorize(q).expect("q in range").divisors();
    for d in divisors {
        let trivial = (0..q / d)
            .map(|t| (1 + d * t) % q)
            .all(|n| exps[n as usize] == 0 || exps[n as usize] == NON_UNIT);
        if trivial {
            return d;
        }
    }
    q
}

/// A Dirichlet character with exact values.
#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    index: u64,
    coords: Vec<u64>,
    /// Values are `order`-th roots of unity.
    order: u64,
    exps: Arc<[u32]>,
    conductor: u64,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.index == other.index
    }
}

impl Eq for DirichletCharacter {}

impl DirichletCharacter {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn is_principal(&self) -> bool {
        self.conductor == 1
    }

    /// `χ(n) = e(v / order)` for units; see [`Self::exponent`].
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Exact exponent `v` with `χ(n) = e(v/order)`, `None` when `gcd(n, q) > 1`.
    #[inline]
    pub fn exponent(&self, n: u64) -> Option<u64> {
        let v = self.exps[(n % self.modulus) as usize];
        (v != NON_UNIT).then_some(v as u64)
    }

    #[inline]
    pub fn value(&self, n: u64) -> C64 {
        match self.exponent(n) {
            Some(v) => e(v as f64 / self.order as f64),
            None => C64::new(0.0, 0.0),
        }
    }

    /// Values on residues `0..q`.
    pub fn values(&self) -> Vec<C64> {
        let roots: Vec<C64> = (0..self.order)
            .map(|v| e(v as f64 / self.order as f64))
            .collect();
        self.exps
            .iter()
            .map(|&v| {
                if v == NON_UNIT {
                    C64::new(0.0, 0.0)
                } else {
                    roots[v as usize]
                }
            })
            .collect()
    }

    /// Whether every value is real (`χ² = χ_0`).
    pub fn is_real(&self) -> bool {
        self.exps
            .iter()
            .all(|&v| v == NON_UNIT || (2 * v as u64) % self.order == 0)
    }

    /// Label used in CSV output.
    pub fn label(&self) -> String {
        format!("{}:{}", self.modulus, self.index)
    }
}

/// Every character modulo `q`, in canonical order.
pub fn character_group(q: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(CharacterGroup::new(q)?.characters().collect())
}

/// Conductor and the primitive character inducing `chi`.
pub fn conductor_and_primitive(chi: &DirichletCharacter) -> Result<(u64, DirichletCharacter)> {
    let c = chi.conductor;
    let group = CharacterGroup::new(c)?;
    let q = chi.modulus;
    let psi = group.from_exponents(|m| {
        let n = (0..)
            .map(|t| m + c * t)
            .find(|&n| gcd(n, q) == 1)
            .expect("unit lift exists");
        (chi.exponent(n).expect("lift is a unit"), chi.order)
    })?;
    Ok((c, psi))
}

/// Character mod `q` induced by `psi`.
pub fn induce(psi: &DirichletCharacter, q: u64) -> Result<DirichletCharacter> {
    if q % psi.modulus != 0 {
        return domain(format!(
            "modulus {} does not divide {q}",
            psi.modulus
        ));
    }
    CharacterGroup::new(q)?.induce(psi)
}

/// Primitive characters with conductor exactly `r`.
pub fn primitive_characters(r: u64) -> Result<Vec<DirichletCharacter>> {
    Ok(CharacterGroup::new(r)?
        .characters()
        .filter(|c| c.is_primitive())
        .collect())
}

/// `g(χ) = φ(q)^{-1} Σ_a conj(χ)(a) e(a/q)`.
pub fn gauss_g(chi: &DirichletCharacter) -> C64 {
    let q = chi.modulus;
    let mut s = C64::new(0.0, 0.0);
    let mut units = 0u64;
    for a in 0..q {
        if let Some(v) = chi.exponent(a) {
            units += 1;
            s += e(a as f64 / q as f64 - v as f64 / chi.order as f64);
        }
    }
    s / units as f64
}
