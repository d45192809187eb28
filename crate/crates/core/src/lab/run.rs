//! The experiment runner behind the `mfbv` subcommands.

use std::sync::Arc;

use super::config::{ExperimentConfig, QSpec, Subcommand};
use super::csv::{fmt_c64, fmt_f64, Table};
use super::obstruct::{construct_obstruction, ObstructionKind, ObstructionSpec, Verification};
use super::uk::{cyclic_size, u2_fourier, uk_norm};
use crate::barrier::{self, GQuadruple};
use crate::chars::CharacterGroup;
use crate::disc::{self, ModulusFilter, Samples, Variant};
use crate::error::{Error, Result};
use crate::multfn::{self, FnSpec, MultFn};
use crate::ramare::{self, FSpec, RamareParams};
use crate::smooth::{self, SmoothFilter};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Output of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    /// Metadata lines, without the leading `#`.
    pub meta: Vec<String>,
    pub table: Table,
}

impl Artifact {
    pub fn csv(&self) -> String {
        self.table.render(&self.meta)
    }
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

/// `x` values as positive integers.
fn int_xs(cfg: &ExperimentConfig) -> Result<Vec<u64>> {
    cfg.floats("x")
        .unwrap_or_default()
        .iter()
        .map(|&x| {
            if x >= 1.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
                Ok(x as u64)
            } else {
                Err(cfg.error("x", format!("{x} is not a positive integer")))
            }
        })
        .collect()
}

fn function(cfg: &ExperimentConfig, key: &str, seed: u64) -> Result<MultFn> {
    match cfg.parsed::<FnSpec>(key)? {
        Some(spec) => multfn::make(&spec, seed),
        None => Ok(MultFn::unit()),
    }
}

fn default_w(x: u64) -> u64 {
    (x as f64).ln().ceil().max(2.0) as u64
}

fn modulus_filter(cfg: &ExperimentConfig) -> Result<ModulusFilter> {
    let Some(text) = cfg.str("filter") else {
        return Ok(ModulusFilter::All);
    };
    let bad = || cfg.error("filter", format!("`{text}`: want all, primes, smooth:<w>, multiple:<d> or residue:<a>"));
    let (head, arg) = text.split_once(':').map_or((text, None), |(h, a)| (h, Some(a)));
    Ok(match (head, arg) {
        ("all", None) => ModulusFilter::All,
        ("primes", None) => ModulusFilter::Primes,
        ("smooth", Some(w)) => ModulusFilter::Smooth(w.parse().map_err(|_| bad())?),
        ("multiple", Some(d)) => ModulusFilter::MultipleOf(d.parse().map_err(|_| bad())?),
        ("residue", Some(a)) => ModulusFilter::FixedResidue(a.parse().map_err(|_| bad())?),
        _ => return Err(bad()),
    })
}

fn xi_chars(cfg: &ExperimentConfig) -> Result<Vec<crate::chars::DirichletCharacter>> {
    let mut out = Vec::new();
    for label in cfg.strs("xi").unwrap_or_default() {
        let bad = |m: String| cfg.error("xi", format!("`{label}`: {m}"));
        let (q, i) = label.split_once(':').ok_or_else(|| bad("want <q>:<index>".into()))?;
        let q: u64 = q.trim().parse().map_err(|_| bad("bad modulus".into()))?;
        let i: u64 = i.trim().parse().map_err(|_| bad("bad index".into()))?;
        let chi = CharacterGroup::new(q)?.character(i)?;
        if !chi.is_primitive() {
            return Err(bad("not primitive".into()));
        }
        out.push(chi);
    }
    Ok(out)
}

fn bv_scan(cfg: &ExperimentConfig, seed: u64) -> Result<Table> {
    let xs = int_xs(cfg)?;
    let f = function(cfg, "f", seed)?;
    let qspec: QSpec = cfg.parsed("q_spec")?.expect("required key");
    let filter = modulus_filter(cfg)?;
    let kinds: Vec<String> = cfg
        .str("variant")
        .unwrap_or("plain")
        .split(',')
        .map(|v| v.trim().to_string())
        .collect();
    let ks: Vec<usize> = cfg.ints("k").unwrap_or(&[1]).iter().map(|&k| k.max(0) as usize).collect();
    let xi = xi_chars(cfg)?;
    let samples = Samples::new(&f, xs.iter().copied().max().unwrap_or(1))?;
    let mut table = Table::new(&[
        "x", "variant", "filter", "q", "q_s", "q_r", "a", "abs_delta", "max_abs_delta", "certificate",
    ]);
    for &x in &xs {
        let xf = x as f64;
        let mut variants = Vec::new();
        for kind in &kinds {
            match kind.as_str() {
                "plain" => variants.push(Variant::Plain),
                "top" => {
                    let cutoff = cfg.uint("cutoff")?.unwrap_or_else(|| disc::default_cutoff(xf));
                    let z = cfg.float("z").unwrap_or_else(|| xf.ln());
                    let set = Arc::new(disc::ordered_exceptionals(&samples, xf, cutoff, z)?);
                    variants.extend(ks.iter().map(|&k| Variant::Top { k, set: set.clone() }));
                }
                "xi" => variants.push(Variant::Xi(xi.clone())),
                other => return Err(cfg.error("variant", format!("unknown variant `{other}` (want plain, top or xi)"))),
            }
        }
        let range = qspec.range(xf);
        let w = cfg.uint("w")?.unwrap_or_else(|| default_w(x));
        for variant in &variants {
            let report = disc::bv_average(&samples, x, range, variant, filter, w)?;
            for r in &report.rows {
                table.push(vec![
                    s(x),
                    report.variant.clone(),
                    s(filter),
                    s(r.q),
                    s(r.q_s),
                    s(r.q_r),
                    s(r.a_argmax),
                    fmt_f64(r.abs_delta),
                    fmt_f64(r.max_abs_delta),
                    fmt_f64(r.certificate),
                ]);
            }
            table.push(vec![
                s(x),
                report.variant.clone(),
                s(filter),
                "total/x".into(),
                String::new(),
                String::new(),
                String::new(),
                fmt_f64(report.total / xf),
                String::new(),
                String::new(),
            ]);
        }
    }
    Ok(table)
}

fn xi_find(cfg: &ExperimentConfig, seed: u64) -> Result<Table> {
    let xs = int_xs(cfg)?;
    let f = function(cfg, "f", seed)?;
    let samples = Samples::new(&f, xs.iter().copied().max().unwrap_or(1))?;
    let mut table = Table::new(&["x", "rank", "character", "conductor", "sigma", "above_threshold"]);
    for &x in &xs {
        let xf = x as f64;
        let cutoff = cfg.uint("cutoff")?.unwrap_or_else(|| disc::default_cutoff(xf));
        let z = cfg.float("z").unwrap_or_else(|| xf.ln());
        let set = disc::ordered_exceptionals(&samples, xf, cutoff, z)?;
        let bar = cfg.float("b").map(|b| xf.ln().powf(-b));
        for (rank, entry) in set.entries.iter().enumerate() {
            table.push(vec![
                s(x),
                s(rank + 1),
                entry.psi.label(),
                s(entry.conductor),
                fmt_f64(entry.sigma),
                bar.map_or(String::new(), |b| s(entry.sigma >= b)),
            ]);
        }
    }
    Ok(table)
}

fn smooth_filter(cfg: &ExperimentConfig) -> Result<SmoothFilter> {
    let Some(text) = cfg.str("filter") else {
        return Ok(SmoothFilter::All);
    };
    let bad = || cfg.error("filter", format!("`{text}`: want all, coprime:<q> or progression:<q>:<a>"));
    let parts: Vec<&str> = text.split(':').collect();
    let num = |t: &str| t.parse::<u64>().map_err(|_| bad());
    Ok(match parts.as_slice() {
        ["all"] => SmoothFilter::All,
        ["coprime", q] => SmoothFilter::CoprimeTo(num(q)?),
        ["progression", q, a] => SmoothFilter::Progression { q: num(q)?, a: num(a)? },
        _ => return Err(bad()),
    })
}

fn smooth_psi(cfg: &ExperimentConfig) -> Result<Table> {
    let xs = cfg.floats("x").unwrap_or_default();
    let ys = cfg.floats("y").unwrap_or_default();
    let ds: Vec<u64> = cfg
        .ints("d")
        .unwrap_or_default()
        .iter()
        .map(|&d| u64::try_from(d).map_err(|_| cfg.error("d", "must be positive")))
        .collect::<Result<_>>()?;
    let filter = smooth_filter(cfg)?;
    let mut table = Table::new(&["quantity", "params", "value"]);
    for &x in xs {
        for &y in ys {
            for row in smooth::smooth_compare(x, y, &ds, None)? {
                table.push(vec![row.quantity.into(), row.params, fmt_f64(row.value)]);
            }
            if filter != SmoothFilter::All {
                let c = smooth::psi_exact(x, y, filter)?;
                table.push(vec!["psi_filtered".into(), format!("x={x};y={y};filter={}", cfg.str("filter").unwrap_or_default()), s(c.value)]);
            }
        }
    }
    match (cfg.uint("tail_w")?, cfg.uint("tail_y")?) {
        (Some(w), Some(y)) => {
            table.push(vec!["smooth_tail_sum".into(), format!("w={w};Y={y}"), fmt_f64(smooth::smooth_tail_sum(w, y))]);
        }
        (None, None) => {}
        _ => return Err(cfg.error("tail_w", "tail_w and tail_y go together")),
    }
    Ok(table)
}

fn rho(cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(&["u", "rho"]);
    for &u in cfg.floats("u").unwrap_or_default() {
        table.push(vec![fmt_f64(u), fmt_f64(smooth::dickman_rho(u)?)]);
    }
    Ok(table)
}

fn alpha(cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(&["x", "y", "u", "alpha", "residual"]);
    for &x in cfg.floats("x").unwrap_or_default() {
        for &y in cfg.floats("y").unwrap_or_default() {
            let sp = smooth::alpha_saddle(x, y)?;
            table.push(vec![fmt_f64(x), fmt_f64(y), fmt_f64(x.ln() / y.ln()), fmt_f64(sp.alpha), fmt_f64(sp.residual)]);
        }
    }
    Ok(table)
}

fn ramare_run(cfg: &ExperimentConfig, seed: u64) -> Result<Table> {
    let xs = int_xs(cfg)?;
    let f = function(cfg, "f", seed)?;
    let qspec: QSpec = cfg.parsed("q_spec")?.expect("required key");
    let mut params = RamareParams::new(cfg.float("sieve_y").expect("required"), cfg.float("sieve_z").expect("required"))?;
    params.restrict_main = cfg.bool("restrict_main").unwrap_or(true);
    let samples = Samples::new(&f, xs.iter().copied().max().unwrap_or(1))?;
    let mut table = Table::new(&["x", "quantity", "scale", "value"]);
    for &x in &xs {
        let range = qspec.range(x as f64);
        let w = cfg.uint("w")?.unwrap_or_else(|| default_w(x));
        let spec = match cfg.int("residue") {
            Some(a) => FSpec::fixed_residue(&samples, x, range, a, w)?,
            None => FSpec::extremal(&samples, x, range, w)?,
        };
        let big_f = ramare::build_f(&spec)?;
        let d = ramare::decompose(&samples, &big_f, x, params)?;
        let diag = ramare::diagnostics(&d, &big_f)?;
        let norms = big_f.norms(x);
        let mut push = |q: &str, scale: String, v: String| table.push(vec![s(x), q.into(), scale, v]);
        push("main_sum", String::new(), fmt_c64(d.main_sum));
        push("abs_main_sum", String::new(), fmt_f64(d.main_sum.norm()));
        for (name, v) in [
            ("t", d.t),
            ("e_sieve", d.e_sieve),
            ("e_bilinear", d.e_bilinear),
            ("sieve_mass", d.sieve_mass),
            ("u_ramare", params.u_ramare()),
            ("c_envelope", diag.c_envelope),
            ("sieve_ratio", diag.sieve_ratio),
            ("f_sup", norms.sup),
            ("f_l1", norms.l1),
            ("f_l2_squared", norms.l2_squared),
        ] {
            push(name, String::new(), fmt_f64(v));
        }
        for sc in &d.scales {
            let p = fmt_f64(sc.p_scale);
            push("scale_primes", p.clone(), s(sc.primes));
            push("scale_average", p.clone(), fmt_f64(sc.average));
            push("scale_diagonal", p.clone(), fmt_f64(sc.diagonal));
            push("scale_value", p, fmt_f64(sc.value));
        }
        for &(p, bound, ratio) in &diag.bilinear {
            push("bilinear_bound", fmt_f64(p), fmt_f64(bound));
            push("bilinear_ratio", fmt_f64(p), fmt_f64(ratio));
        }
    }
    Ok(table)
}

fn parse_quad(cfg: &ExperimentConfig, text: &str, x: f64) -> Result<GQuadruple> {
    let nums: Vec<i64> = text
        .split(',')
        .map(|t| t.trim().parse::<i64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| cfg.error("quads", format!("`{text}`: want q,q',p,p',a")))?;
    let [q, qp, p, pp, a] = nums[..] else {
        return Err(cfg.error("quads", format!("`{text}`: want five integers q,q',p,p',a")));
    };
    if q <= 0 || qp <= 0 || p <= 0 || pp <= 0 {
        return Err(cfg.error("quads", format!("`{text}`: entries must be positive")));
    }
    let m = x / p.max(pp) as f64;
    GQuadruple::new(q as u64, qp as u64, p as u64, pp as u64, a, m).map_err(|e| cfg.error("quads", e))
}

fn barrier_run(cfg: &ExperimentConfig) -> Result<Table> {
    let x = *cfg.floats("x").unwrap_or_default().first().ok_or_else(|| cfg.error("x", "empty"))?;
    let bump = barrier::build_bump(cfg.float("eta").expect("required"))?;
    let quads = match cfg.strs("quads") {
        Some(list) => list.iter().map(|t| parse_quad(cfg, t, x)).collect::<Result<Vec<_>>>()?,
        None => {
            let range = cfg.ints("quad_range").unwrap_or(&[100, 200]);
            let [lo, hi] = range[..] else {
                return Err(cfg.error("quad_range", "want [lo, hi]"));
            };
            let big_p = cfg.uint("big_p")?.unwrap_or(10);
            let count = cfg.uint("quad_count")?.unwrap_or(20) as usize;
            barrier::admissible_quads(lo.max(0) as u64, hi.max(0) as u64, big_p, cfg.int("residue").unwrap_or(1), x, count)
        }
    };
    let h_poisson = cfg.uint("h_poisson")?.unwrap_or(10_000);
    let h_main: Vec<u64> = cfg.ints("h_main").unwrap_or(&[100, 1000, 10_000]).iter().map(|&h| h.max(0) as u64).collect();
    let mut table = Table::new(&[
        "q", "q'", "p", "p'", "a", "d", "M", "big_q", "h_poisson", "h_main", "g_exact", "g_poisson", "g_mainterm",
        "diff_exact_poisson", "diff_exact_main", "diff_poisson_main",
    ]);
    for quad in &quads {
        let big_q = cfg.float("big_q").unwrap_or(quad.q.max(quad.qp) as f64 / 2.0);
        for &h in &h_main {
            let c = barrier::g_compare(quad, &bump, h_poisson, h, big_q)?;
            table.push(vec![
                s(quad.q),
                s(quad.qp),
                s(quad.p),
                s(quad.pp),
                s(quad.a),
                s(quad.d),
                fmt_f64(quad.m),
                fmt_f64(big_q),
                s(h_poisson),
                s(h),
                fmt_f64(c.g_exact),
                fmt_f64(c.g_poisson),
                fmt_c64(c.g_mainterm),
                fmt_f64(c.diff_exact_poisson),
                fmt_f64(c.diff_exact_main),
                fmt_f64(c.diff_poisson_main),
            ]);
        }
    }
    Ok(table)
}

fn construct(cfg: &ExperimentConfig, seed: u64, meta: &mut Vec<String>) -> Result<Table> {
    let kind: ObstructionKind = cfg.parsed("kind")?.expect("required");
    let x = match cfg.floats("x") {
        Some(_) => *int_xs(cfg)?.first().ok_or_else(|| cfg.error("x", "empty"))?,
        None if kind == ObstructionKind::Gauss => 0,
        None => return Err(Error::Config { line: None, msg: format!("missing required key `x` for kind `{kind}`") }),
    };
    let big_q = match cfg.float("big_q") {
        Some(q) => q,
        None if kind == ObstructionKind::Gauss => 1.0,
        None => return Err(Error::Config { line: None, msg: format!("missing required key `big_q` for kind `{kind}`") }),
    };
    let mut spec = ObstructionSpec::new(kind, x, big_q);
    spec.q = cfg.uint("q")?;
    if kind == ObstructionKind::Gauss && spec.q.is_none() {
        return Err(Error::Config { line: None, msg: "missing required key `q` for kind `gauss`".into() });
    }
    spec.base = function(cfg, "base", seed)?;
    let ob = construct_obstruction(&spec)?;
    meta.push(format!("kind={kind} prime_set_size={} max_residual={}", ob.primes.len(), fmt_f64(ob.verification.max_residual())));
    meta.extend(ob.warnings.iter().map(|w| format!("warning: {w}")));
    Ok(match &ob.verification {
        Verification::Pair(rows) => {
            let mut t = Table::new(&[
                "q", "phi", "delta_plus", "delta_minus", "abs_delta_plus", "abs_delta_minus", "diff", "expected", "residual",
            ]);
            for r in rows {
                t.push(vec![
                    s(r.q),
                    s(r.phi),
                    fmt_c64(r.delta_plus),
                    fmt_c64(r.delta_minus),
                    fmt_f64(r.delta_plus.norm()),
                    fmt_f64(r.delta_minus.norm()),
                    fmt_c64(r.diff),
                    fmt_f64(r.expected),
                    fmt_f64(r.residual),
                ]);
            }
            t
        }
        Verification::NoBv(rows) => {
            let mut t = Table::new(&["q", "pi_star", "delta_indicator", "expected", "residual", "delta_f"]);
            for r in rows {
                t.push(vec![
                    s(r.q),
                    s(r.pi_star),
                    fmt_f64(r.delta_indicator),
                    fmt_f64(r.expected),
                    fmt_f64(r.residual),
                    fmt_c64(r.delta_f),
                ]);
            }
            t
        }
        Verification::NoBv2 { interval, rows } => {
            meta.push(format!("interval=({};{}]", fmt_f64(interval.0), fmt_f64(interval.1)));
            let mut t = Table::new(&["m", "ell", "primes_in_class", "all_in_set", "delta_f"]);
            for r in rows {
                t.push(vec![s(r.m), s(r.ell), s(r.primes_in_class), s(r.all_in_set), fmt_c64(r.delta_f)]);
            }
            t
        }
        Verification::Gauss { rows, in_class_c, reconstruction_error, gauss_modulus_error } => {
            meta.push(format!(
                "class_c={in_class_c} reconstruction_error={} gauss_modulus_error={}",
                fmt_f64(*reconstruction_error),
                fmt_f64(*gauss_modulus_error)
            ));
            let mut t = Table::new(&["n", "c_q", "expected", "error"]);
            for r in rows {
                t.push(vec![s(r.n), fmt_c64(r.c_q), fmt_c64(r.expected), fmt_f64(r.error)]);
            }
            t
        }
    })
}

fn uk_run(cfg: &ExperimentConfig, seed: u64) -> Result<Table> {
    let f = function(cfg, "f", seed)?;
    let q = cfg.uint("q")?.unwrap_or(1);
    let a = cfg.uint("a")?.unwrap_or(1);
    let y = cfg.uint("len")?.expect("required");
    let mut table = Table::new(&["k", "q", "a", "len", "n_cyclic", "norm", "u2_fourier"]);
    for &k in cfg.ints("k").unwrap_or_default() {
        let k32 = u32::try_from(k).map_err(|_| cfg.error("k", "must be 2 or 3"))?;
        let norm = uk_norm(&f, q, a, y, k32)?;
        let fourier = if k32 == 2 { fmt_f64(u2_fourier(&f, q, a, y)?) } else { String::new() };
        table.push(vec![s(k), s(q), s(a), s(y), s(cyclic_size(k32, y)), fmt_f64(norm), fourier]);
    }
    Ok(table)
}

/// Runs `cfg`. `seed` overrides the config's `seed` key (default 0).
pub fn run_experiment(cfg: &ExperimentConfig, seed: Option<u64>) -> Result<Artifact> {
    let seed = match seed {
        Some(s) => s,
        None => cfg.uint("seed")?.unwrap_or(0),
    };
    let mut meta = vec![format!(
        "mfbv {VERSION} subcommand={} config_sha256={} seed={seed}",
        cfg.subcommand, cfg.hash
    )];
    let table = match cfg.subcommand {
        Subcommand::BvScan => bv_scan(cfg, seed)?,
        Subcommand::XiFind => xi_find(cfg, seed)?,
        Subcommand::SmoothPsi => smooth_psi(cfg)?,
        Subcommand::Rho => rho(cfg)?,
        Subcommand::Alpha => alpha(cfg)?,
        Subcommand::Ramare => ramare_run(cfg, seed)?,
        Subcommand::Barrier => barrier_run(cfg)?,
        Subcommand::Construct => construct(cfg, seed, &mut meta)?,
        Subcommand::Uk => uk_run(cfg, seed)?,
    };
    Ok(Artifact { meta, table })
}
