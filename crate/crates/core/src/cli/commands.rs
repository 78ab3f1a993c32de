use std::fs::File;
use std::sync::Arc;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::{Format, Outcome, Params};
use crate::algebra::AlgebraElement;
use crate::error::{invalid, Result};
use crate::group::{FiniteGroup, GroupSubset, Quotient, SubgroupEmbedding};
use crate::harness::{
    delta_exact, gram_matrix, lattice_maps_report, lattice_refinement_report, periodization_residual,
    restriction_consistency, FundamentalDomain, ResidualReport,
};
use crate::lie::{
    ad_operator, build_model, exp_density_eigen, exp_density_series, max_nilpotent_dim, nilpotent_orbit_dim,
    AlgebraVector, GroupMatrix,
};
use crate::lp::Exponent;
use crate::mc::{
    delta_mc, growth_fit, key_lemma_schedule, sl2z_count, theorem_b_consistency, write_mc_csv, FiniteDeltaBackend,
    LieDeltaBackend, McConfig, McRow, Neighbourhood,
};
use crate::multiplier::{
    consummation_residual, estimate_norm, hertz_schur_transference, nested_residual, translation_residual,
    OptimizerConfig, Symbol,
};
use crate::suite::{self, bump};
use crate::Complex;

pub(super) fn dispatch(p: &Params) -> Result<Outcome> {
    match p.command.as_str() {
        "group" => group(p),
        "norm" => norm(p),
        "identity-check" => identity_check(p),
        "restrict" => restrict(p),
        "periodize" => periodize(p),
        "lattice-maps" => lattice_maps(p),
        "delta-exact" => delta_exact_cmd(p),
        "delta-mc" => delta_mc_cmd(p),
        "key-lemma" => key_lemma(p),
        "orbit-dim" => orbit_dim(p),
        "lattice-count" => lattice_count(p),
        "density" => density(p),
        "transference" => transference(p),
        other => invalid(format!("unknown command `{other}`")),
    }
}

/// JSON lines: a header with the resolved parameters, then one record per line.
struct Lines {
    body: String,
}

impl Lines {
    fn new(p: &Params) -> Self {
        let header = json!({ "command": p.command, "params": p.values });
        Self { body: format!("{header}\n") }
    }

    fn push(&mut self, record: &impl Serialize) -> Result<()> {
        self.body.push_str(&serde_json::to_string(record)?);
        self.body.push('\n');
        Ok(())
    }

    fn done(self, pass: bool) -> Outcome {
        Outcome { body: self.body, format: Format::Json, pass, streamed: false }
    }
}

fn csv_outcome(rows: &[McRow], pass: bool) -> Result<Outcome> {
    let mut buf = Vec::new();
    write_mc_csv(rows, &mut buf)?;
    Ok(Outcome { body: String::from_utf8(buf).expect("csv is utf-8"), format: Format::Csv, pass, streamed: false })
}

fn load_group(p: &Params) -> Result<Arc<FiniteGroup>> {
    Ok(Arc::new(FiniteGroup::parse(p.str("group")?)?))
}

fn load_symbol(g: &Arc<FiniteGroup>, arity: usize, spec: &str) -> Result<Symbol> {
    match spec.strip_prefix("file:") {
        Some(path) => {
            let m = Symbol::read_csv(g, File::open(path)?)?;
            if m.arity() != arity {
                return invalid(format!("symbol file has arity {}, expected {arity}", m.arity()));
            }
            Ok(m)
        }
        None => Symbol::family(g, arity, spec),
    }
}

fn exponents(p: &Params, arity: Option<usize>) -> Result<Vec<Exponent>> {
    let ps = Exponent::parse_list(p.str("p")?)?;
    match arity {
        Some(n) if ps.len() == 1 && n > 1 => Ok(vec![ps[0]; n]),
        Some(n) if ps.len() != n => invalid(format!("{} exponents for arity {n}", ps.len())),
        _ if ps.is_empty() => invalid("no exponents given"),
        _ => Ok(ps),
    }
}

fn mc_config(p: &Params) -> Result<McConfig> {
    let (samples, seed) = (p.usize("samples")?, p.u64("seed")?);
    let cfg = match p.opt("batch") {
        Some(b) => McConfig {
            samples,
            seed,
            batch: b.parse().map_err(|_| crate::Error::Invalid(format!("cannot parse `batch` = `{b}`")))?,
        },
        None => McConfig::new(samples, seed)?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn group(p: &Params) -> Result<Outcome> {
    let g = load_group(p)?;
    if p.bool("table")? {
        return Ok(Outcome { body: g.to_json() + "\n", format: Format::Json, pass: true, streamed: false });
    }
    let mut out = Lines::new(p);
    out.push(&json!({
        "label": g.label(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "center": g.center(),
        "generators": g.generators(),
        "element_orders": (0..g.order()).map(|a| g.element_order(a)).collect::<Vec<_>>(),
    }))?;
    Ok(out.done(true))
}

fn norm(p: &Params) -> Result<Outcome> {
    let g = load_group(p)?;
    let arity = p.usize("arity")?;
    let m = load_symbol(&g, arity, p.str("symbol")?)?;
    let ps = exponents(p, Some(arity))?;
    let q = Exponent::harmonic_sum(&ps)?;
    let cfg = OptimizerConfig {
        restarts: p.usize("restarts")?,
        max_iterations: p.usize("iterations")?,
        seed: p.u64("seed")?,
        ..Default::default()
    };
    log::info!("estimating the multiplier norm from L_{:?} to L_{q}", ps.iter().map(|e| e.value()).collect::<Vec<_>>());
    let est = estimate_norm(&m, &ps, q, &cfg)?;
    let mut out = Lines::new(p);
    out.push(&json!({ "output_exponent": q, "sup_norm": m.sup_norm(), "estimate": est }))?;
    Ok(out.done(true))
}

fn identity_check(p: &Params) -> Result<Outcome> {
    let g = load_group(p)?;
    let which = p.str("identity")?;
    let (k, trials, seed) = (p.usize("arity")?, p.usize("trials")?, p.u64("seed")?);
    if !matches!(which, "all" | "consummation" | "translation" | "nested") {
        return invalid(format!("unknown identity `{which}`"));
    }
    if k == 0 {
        return invalid("arity must be at least 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::new();
    if matches!(which, "all" | "consummation") {
        log::info!("checking the consummation identity");
        let m = Symbol::family(&g, k, &format!("random:{seed}"))?;
        let starts: Vec<usize> = (1..=k).collect();
        let r = consummation_residual(&m, &starts, k + 1, trials, &mut rng)?;
        reports.push(ResidualReport::new("consummation", r, 1e-10).with("starts", starts).with("n", k + 1));
    }
    if matches!(which, "all" | "translation") {
        log::info!("checking the translation identity");
        let n = k.max(2);
        let m = Symbol::family(&g, n, &format!("random:{}", seed + 1))?;
        let ord = g.order();
        let (r, t, r2) = (rng.gen_range(0..ord), rng.gen_range(0..ord), rng.gen_range(0..ord));
        let res = translation_residual(&m, 1, r, t, r2, trials, &mut rng)?;
        reports.push(ResidualReport::new("translation", res, 1e-10).with("i", 1).with("r", r).with("t", t).with("r2", r2));
    }
    if matches!(which, "all" | "nested") {
        log::info!("checking the nesting identity");
        let ms = (0..k.max(2))
            .map(|j| Symbol::family(&g, 1, &format!("random:{}", seed + 2 + j as u64)))
            .collect::<Result<Vec<_>>>()?;
        reports.push(ResidualReport::new("nested", nested_residual(&ms, trials, &mut rng)?, 1e-10).with("arity", ms.len()));
    }
    let mut out = Lines::new(p);
    for r in &reports {
        out.push(r)?;
    }
    Ok(out.done(reports.iter().all(|r| r.pass)))
}

fn restrict(p: &Params) -> Result<Outcome> {
    let g = load_group(p)?;
    let sub = GroupSubset::parse(&g, p.str("sub")?)?;
    let emb = SubgroupEmbedding::from_subset(&sub)?;
    let ps = exponents(p, None)?;
    let m = load_symbol(&g, ps.len(), p.str("symbol")?)?;
    let cfg = OptimizerConfig { restarts: p.usize("restarts")?, seed: p.u64("seed")?, ..Default::default() };
    log::info!("checking that restriction to a subgroup does not increase the multiplier norm");
    let r = restriction_consistency(&emb, &m, &ps, &cfg)?;
    let mut out = Lines::new(p);
    out.push(&r.transport)?;
    out.push(&r.restriction)?;
    out.push(&json!({ "sub_norm": r.sub_estimate.value, "amb_norm": r.amb_estimate.value }))?;
    Ok(out.done(r.pass()))
}

fn periodize(p: &Params) -> Result<Outcome> {
    let g = load_group(p)?;
    let q = Quotient::new(&GroupSubset::parse(&g, p.str("normal")?)?)?;
    let ps = exponents(p, None)?;
    let m = load_symbol(q.group(), ps.len(), p.str("symbol")?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.u64("seed")?);
    log::info!("checking periodization along the quotient {}", q.group().label());
    let r = periodization_residual(&q, &m, &ps, p.usize("trials")?, &mut rng)?;
    let mut out = Lines::new(p);
    for rep in [&r.intertwining, &r.isometry, &r.trace] {
        out.push(rep)?;
    }
    Ok(out.done(r.pass()))
}

fn lattice_maps(p: &Params) -> Result<Outcome> {
    let g = load_group(p)?;
    let steps = p.usize_list("step")?;
    if steps.is_empty() {
        return invalid("no lattice step given");
    }
    let ps = exponents(p, None)?;
    let m = load_symbol(&g, ps.len(), p.str("symbol")?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(p.u64("seed")?);
    let family = steps.iter().map(|&s| FundamentalDomain::cyclic_step(&g, s)).collect::<Result<Vec<_>>>()?;
    let mut out = Lines::new(p);
    let mut pass = true;
    log::info!("checking contraction of the lattice maps");
    for fd in &family {
        let r = lattice_maps_report(fd, &m, &ps, p.usize("trials")?, &mut rng)?;
        pass &= r.pass();
        out.push(&r.phi)?;
        out.push(&r.psi)?;
    }
    if family.len() > 1 {
        log::info!("checking that the pairing deviation shrinks as the lattice refines");
        let n = g.order();
        let xs = (0..ps.len())
            .map(|i| bump(&g, (3 + i * (n - 6)) % n, n as f64 / 16.0 + 2.0))
            .collect::<Result<Vec<_>>>()?;
        let y = bump(&g, 0, n as f64 / 10.0 + 2.0)?;
        let refs: Vec<&AlgebraElement> = xs.iter().collect();
        let r = lattice_refinement_report(&family, &m, &refs, &y, &ps)?;
        pass &= r.pass;
        out.push(&r)?;
    }
    Ok(out.done(pass))
}

fn delta_exact_cmd(p: &Params) -> Result<Outcome> {
    let g = load_group(p)?;
    let f = GroupSubset::parse(&g, p.str("F")?)?;
    let v = GroupSubset::parse(&g, p.str("V")?)?;
    let d = delta_exact(&f, &v)?;
    let gm = gram_matrix(&f, &v)?;
    log::info!("δ_F(V) = {d}");
    let mut out = Lines::new(p);
    out.push(&json!({
        "delta": d.to_string(),
        "value": d.value(),
        "numerator": d.numerator,
        "denominator": d.denominator,
        "gram_min_eigenvalue": gm.min_eigenvalue,
        "gram_min_eigenvalue_shifted": gm.min_eigenvalue_shifted,
    }))?;
    Ok(out.done(true))
}

fn parse_f64s(text: &str, what: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| crate::Error::Invalid(format!("cannot parse {what} entry `{s}`"))))
        .collect()
}

fn parse_neighbourhood(text: &str) -> Result<Neighbourhood> {
    if let Some(r) = text.strip_prefix("ball:") {
        let r = parse_f64s(r, "ball radius")?;
        if r.len() == 1 {
            return Ok(Neighbourhood::Ball { radius: r[0] });
        }
    } else if let Some(t) = text.strip_prefix("tube:") {
        let t = parse_f64s(t, "tube")?;
        if t.len() == 2 {
            return Ok(Neighbourhood::Tube { eps: t[0], r: t[1] });
        }
    }
    Err(crate::Error::Descriptor(text.into()))
}

fn delta_mc_cmd(p: &Params) -> Result<Outcome> {
    let cfg = mc_config(p)?;
    let fspec = p.str("F")?;
    match (p.opt("group"), p.opt("model")) {
        (Some(_), None) => {
            let g = load_group(p)?;
            let f = GroupSubset::parse(&g, fspec)?;
            let v = GroupSubset::parse(&g, p.opt("V").ok_or_else(|| crate::Error::Invalid("finite mode needs --V".into()))?)?;
            log::info!("estimating δ_F(V) by sampling V, seed {}", cfg.seed);
            let est = delta_mc(&FiniteDeltaBackend::new(&f, &v)?, &cfg)?;
            csv_outcome(&[McRow::new(None, None, None, &est)], true)
        }
        (None, Some(name)) => {
            if let Some(k) = fspec.strip_prefix("random:") {
                if name != "sl:2" {
                    return invalid("random F is drawn in sl:2 only");
                }
                let k: usize = k.parse().map_err(|_| crate::Error::Descriptor(fspec.into()))?;
                let rho = p.opt("rho").ok_or_else(|| crate::Error::Invalid("random F needs --rho".into()))?;
                let rho: f64 = rho.parse().map_err(|_| crate::Error::Invalid(format!("cannot parse rho `{rho}`")))?;
                let (eps, r) = (p.f64_list("eps")?, p.f64("R")?);
                log::info!("checking the lower bound δ_F(V) ≥ ρ^(-d/2) for F in the adjoint ball, seed {}", cfg.seed);
                let rep = theorem_b_consistency(rho, k, &eps, r, &cfg)?;
                log::info!("bound {:.6}; adjoint norms of F {:?}", rep.bound, rep.adjoint_norms);
                let rows: Vec<McRow> = rep.rows.iter().map(|(e, est)| McRow::new(Some(*e), Some(r), Some(rho), est)).collect();
                return csv_outcome(&rows, rep.pass);
            }
            let model = build_model(name)?;
            let n = model.matrix_size();
            let f = fspec
                .split(';')
                .filter(|s| !s.trim().is_empty())
                .map(|s| {
                    let e = parse_f64s(s, "matrix")?;
                    if e.len() != n * n {
                        return invalid(format!("matrix `{s}` needs {} entries", n * n));
                    }
                    GroupMatrix::new(&model, DMatrix::from_row_slice(n, n, &e))
                })
                .collect::<Result<Vec<_>>>()?;
            let w = parse_neighbourhood(p.opt("W").ok_or_else(|| crate::Error::Invalid("Lie mode needs --W".into()))?)?;
            log::info!("estimating δ_F(exp W) under Haar measure, seed {}", cfg.seed);
            let est = delta_mc(&LieDeltaBackend::new(&model, &f, w)?, &cfg)?;
            let row = match w {
                Neighbourhood::Ball { radius } => McRow::new(None, Some(radius), None, &est),
                Neighbourhood::Tube { eps, r } => McRow::new(Some(eps), Some(r), None, &est),
            };
            csv_outcome(&[row], true)
        }
        _ => invalid("delta-mc needs exactly one of --group and --model"),
    }
}

fn key_lemma(p: &Params) -> Result<Outcome> {
    let cfg = mc_config(p)?;
    let (rho, r, eps) = (p.f64("rho")?, p.f64("R")?, p.f64_list("eps")?);
    log::info!("checking that nilpotent-cone tube volumes scale like ρ^(d/2), seed {}", cfg.seed);
    let s = key_lemma_schedule(&eps, r, rho, &cfg)?;
    let last = s.last();
    let pass = (last.ratio - last.expected).abs() <= 0.10 * last.expected;
    log::info!(
        "final ratio {:.4} against {:.4}; monotone approach {}; extrapolated {:?}",
        last.ratio,
        last.expected,
        s.monotone_approach(),
        s.extrapolated
    );
    let rows: Vec<McRow> = s
        .rows
        .iter()
        .map(|k| McRow {
            eps: Some(k.eps),
            r: Some(k.r),
            rho: Some(k.rho),
            estimate: k.ratio,
            stderr: k.stderr,
            samples: cfg.samples,
            seed: cfg.seed,
        })
        .collect();
    csv_outcome(&rows, pass)
}

fn orbit_dim(p: &Params) -> Result<Outcome> {
    let model = build_model(p.str("model")?)?;
    let mut out = Lines::new(p);
    match p.opt("x") {
        Some(x) => {
            let n = model.matrix_size();
            let e = parse_f64s(x, "x")?;
            if e.len() != n * n {
                return invalid(format!("x needs {} entries", n * n));
            }
            let v = AlgebraVector::from_matrix(&model, &DMatrix::from_row_slice(n, n, &e))?;
            out.push(&json!({ "orbit_dim": nilpotent_orbit_dim(&v)? }))?;
        }
        None => {
            log::info!("computing the maximal nilpotent orbit dimension");
            let mut rng = ChaCha8Rng::seed_from_u64(p.u64("seed")?);
            out.push(&max_nilpotent_dim(&model, p.usize("samples")?, &mut rng)?)?;
        }
    }
    Ok(out.done(true))
}

fn lattice_count(p: &Params) -> Result<Outcome> {
    let radii = p.f64_list("rho")?;
    log::info!("counting SL(2,Z) points in adjoint-norm balls");
    let counts = radii.iter().map(|&r| sl2z_count(r)).collect::<Result<Vec<_>>>()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["rho", "count"])?;
    for (r, c) in radii.iter().zip(&counts) {
        w.write_record([r.to_string(), c.to_string()])?;
    }
    let body = String::from_utf8(w.into_inner().map_err(|e| crate::Error::Io(e.into_error()))?).expect("utf-8");
    match (growth_fit(&radii, &counts, 1), growth_fit(&radii, &counts, 0)) {
        (Ok((s1, res)), Ok((s0, _))) => log::info!("exponent after dividing by log ρ: {s1:.4} (rms {res:.2e}); raw {s0:.4}"),
        (Err(e), _) | (_, Err(e)) => log::info!("no growth fit: {e}"),
    }
    Ok(Outcome { body, format: Format::Csv, pass: true, streamed: false })
}

fn density(p: &Params) -> Result<Outcome> {
    let model = build_model(p.str("model")?)?;
    let terms = p.usize("terms")?;
    let mut out = Lines::new(p);
    if let Some(x) = p.opt("x") {
        let x = AlgebraVector::new(&model, parse_f64s(x, "x")?)?;
        let ad = model.operator_to_orthonormal(&ad_operator(&x)).singular_values().max();
        out.push(&json!({
            "series": exp_density_series(&x, terms),
            "eigen": exp_density_eigen(&x),
            "ad_norm": ad,
        }))?;
        return Ok(out.done(true));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.u64("seed")?);
    let radius = p.f64("radius")?;
    log::info!("comparing the series and eigenvalue forms of the exponential density");
    let mut worst = 0.0f64;
    for _ in 0..p.usize("points")? {
        let x = AlgebraVector::random(&model, &mut rng);
        let ad = model.operator_to_orthonormal(&ad_operator(&x)).singular_values().max();
        let x = if ad > 0.0 { x.scale(rng.gen_range(0.0..radius) / ad) } else { x };
        let diff = (exp_density_series(&x, terms) - exp_density_eigen(&x)).abs();
        worst = if diff.is_nan() { f64::INFINITY } else { worst.max(diff) };
    }
    let r = ResidualReport::new("density_paths", worst, 1e-8).with("radius", radius).with("terms", terms);
    let pass = r.pass;
    out.push(&r)?;
    Ok(out.done(pass))
}

fn transference(p: &Params) -> Result<Outcome> {
    let l = p.usize("L")?;
    let g = Arc::new(FiniteGroup::parse(&format!("cyclic:{l}"))?);
    let m = load_symbol(&g, 2, p.str("symbol")?)?;
    let support = p.usize("support")?;
    if 2 * support + 1 > l {
        return invalid("support does not fit in the group");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p.u64("seed")?);
    let mut draw = || {
        let mut c = vec![Complex::new(0.0, 0.0); l];
        for k in 0..=2 * support {
            c[(k + l - support) % l] = Complex::new(rng.gen_range(0.0..1.0), 0.0);
        }
        AlgebraElement::new(&g, c)
    };
    let (x, y, z) = (draw()?, draw()?, draw()?);
    let ps = (Exponent::new(p.f64("p1")?)?, Exponent::new(p.f64("p2")?)?);
    log::info!("comparing compressed Schur pairings with the Fourier pairing");
    let mut out = Lines::new(p);
    let mut rel = Vec::new();
    for a in p.usize_list("alpha")? {
        let r = hertz_schur_transference(&m, a, ps, &x, &y, &z)?;
        rel.push(r.relative);
        out.push(&r)?;
    }
    let pass = rel.last().is_some_and(|&r| r <= 0.05) && rel.windows(2).all(|w| w[1] <= w[0]);
    Ok(out.done(pass))
}

pub(super) fn suite(name: &str) -> Result<Outcome> {
    let ids = suite::bundle(name)?;
    let mut body = String::new();
    let mut pass = true;
    for id in ids {
        let c = suite::run(id);
        println!("{c}");
        body.push_str(&format!("{c}\n"));
        pass &= c.pass;
    }
    Ok(Outcome { body, format: Format::Text, pass, streamed: true })
}
