//! Pointwise numerical verification of the identities, with a residual report.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::algebra::run_suite;
use crate::dsl::{CompiledMetric, CoordBox, MetricEvalError};
use crate::geometry::{einstein_three_forms_upper, GeometryPoint};
use crate::jet::Jet;
use crate::linalg::Mat4;
use crate::metric::MetricJet2;
use crate::multivector::{IndexedFormSet, Multivector};
use crate::superpotential::{
    covariant_divergence_upper, d_star_s_upper, density_inverse_derivatives, lagrangian_slot_derivatives,
    SuperpotentialPoint,
};

pub const REPORT_VERSION: &str = "gralg report v1";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Identities whose derivatives come from jets.
    pub exact: f64,
    /// Finite-difference conservation check at the reference step.
    pub conservation: f64,
    /// Relative tolerance of the multivector suite.
    pub algebra: f64,
    /// Finite-difference step.
    pub step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { exact: 1e-8, conservation: 1e-5, algebra: 1e-11, step: 1e-3 }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub points: usize,
    pub seed: u64,
    pub algebra_cases: usize,
    pub algebra_metrics: usize,
    pub tol: Tolerances,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { points: 100, seed: 0, algebra_cases: 1000, algebra_metrics: 20, tol: Tolerances::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expect {
    /// Residual must not exceed the tolerance.
    AtMost,
    /// Residual must exceed the tolerance (a deliberately broken identity).
    Exceeds,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityEntry {
    pub name: String,
    pub max_abs: f64,
    pub max_rel: f64,
    pub tolerance: f64,
    pub expect: Expect,
    pub pass: bool,
    pub note: Option<String>,
}

impl IdentityEntry {
    fn at_most(name: &str, r: Residual, tolerance: f64) -> Self {
        IdentityEntry {
            name: name.to_string(),
            max_abs: r.abs,
            max_rel: r.rel(),
            tolerance,
            expect: Expect::AtMost,
            pass: r.abs <= tolerance,
            note: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub metric: String,
    pub bounds: CoordBox,
    pub seed: u64,
    pub requested: usize,
    pub evaluated: usize,
    pub skipped: usize,
    pub entries: Vec<IdentityEntry>,
}

fn num(x: f64) -> String {
    format!("{x:.11e}")
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn entry(&self, name: &str) -> Option<&IdentityEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{REPORT_VERSION}");
        let _ = writeln!(s, "metric: {}", self.metric);
        let b: Vec<String> = self.bounds.iter().map(|(lo, hi)| format!("[{}, {}]", num(*lo), num(*hi))).collect();
        let _ = writeln!(s, "box: {}", b.join(" "));
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = writeln!(
            s,
            "points: {} requested, {} evaluated, {} skipped",
            self.requested, self.evaluated, self.skipped
        );
        let _ = writeln!(s, "{:<24} {:>19} {:>19} {:>19} {:>6}  status", "identity", "max_abs", "max_rel", "tolerance", "expect");
        for e in &self.entries {
            let expect = match e.expect {
                Expect::AtMost => "<=",
                Expect::Exceeds => ">",
            };
            let _ = write!(
                s,
                "{:<24} {:>19} {:>19} {:>19} {:>6}  {}",
                e.name,
                num(e.max_abs),
                num(e.max_rel),
                num(e.tolerance),
                expect,
                if e.pass { "PASS" } else { "FAIL" }
            );
            if let Some(n) = &e.note {
                let _ = write!(s, "  ({n})");
            }
            s.push('\n');
        }
        let _ = writeln!(s, "overall: {}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }

    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "format={}", REPORT_VERSION.replace(' ', "-"));
        let _ = writeln!(s, "metric={}", self.metric);
        for (i, (lo, hi)) in self.bounds.iter().enumerate() {
            let _ = writeln!(s, "box.{i}={},{}", num(*lo), num(*hi));
        }
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "points.requested={}", self.requested);
        let _ = writeln!(s, "points.evaluated={}", self.evaluated);
        let _ = writeln!(s, "points.skipped={}", self.skipped);
        for e in &self.entries {
            let _ = writeln!(
                s,
                "identity={} residual={} relative={} tolerance={} expect={} status={}",
                e.name,
                num(e.max_abs),
                num(e.max_rel),
                num(e.tolerance),
                match e.expect {
                    Expect::AtMost => "at_most",
                    Expect::Exceeds => "exceeds",
                },
                if e.pass { "PASS" } else { "FAIL" }
            );
        }
        let _ = writeln!(s, "overall={}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

/// Running maximum of an absolute residual and of the magnitude of the terms it compares.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Residual {
    pub abs: f64,
    pub scale: f64,
}

impl Residual {
    pub fn push(&mut self, diff: f64, terms: &[f64]) {
        let d = diff.abs();
        if d > self.abs || d.is_nan() {
            self.abs = d;
        }
        for t in terms {
            self.scale = self.scale.max(t.abs());
        }
    }

    pub fn merge(self, o: Residual) -> Residual {
        let abs = if o.abs > self.abs || o.abs.is_nan() { o.abs } else { self.abs };
        Residual { abs, scale: self.scale.max(o.scale) }
    }

    pub fn rel(&self) -> f64 {
        if self.abs == 0.0 {
            0.0
        } else {
            self.abs / self.scale.max(1.0)
        }
    }
}

/// Everything the jet-based checks need at one point.
pub struct PointData {
    pub x: [f64; 4],
    pub mj: MetricJet2,
    pub gp: GeometryPoint,
    pub sp: SuperpotentialPoint,
}

impl PointData {
    pub fn new(m: &CompiledMetric, x: [f64; 4]) -> Result<Self, MetricEvalError> {
        let mj = m.eval_jet2(x)?;
        let gp = GeometryPoint::new(&mj);
        let sp = SuperpotentialPoint::new(&mj, &gp);
        Ok(PointData { x, mj, gp, sp })
    }

    fn ricci_mixed(&self) -> Mat4<f64> {
        let gi = &self.gp.metric.g_inv;
        std::array::from_fn(|i| std::array::from_fn(|k| (0..4).map(|a| gi[i][a] * self.gp.ricci[a][k]).sum()))
    }

    /// ½(Γ^ι_{μν}∂_κ𝔤^{μν} − Γ^ν_{μν}∂_κ𝔤^{μι}) `[κ][ι]`.
    fn pauli_direct(&self) -> Mat4<f64> {
        let dd = density_inverse_derivatives(&self.mj.level1());
        let g = &self.gp.gamma;
        std::array::from_fn(|k| {
            std::array::from_fn(|i| {
                let mut v = 0.0;
                for m in 0..4 {
                    for n in 0..4 {
                        v += g[i][m][n] * dd[k][m][n] - g[n][m][n] * dd[k][m][i];
                    }
                }
                0.5 * v
            })
        })
    }

    /// −½ ∂𝔏/∂(∂_ι g^{μν}) ∂_κ g^{μν} `[κ][ι]`, from per-slot jet derivatives.
    fn pauli_from_lagrangian(&self) -> Mat4<f64> {
        let f1 = self.mj.level1();
        let dgi = f1.dg_inv();
        let gi = self.gp.metric.g_inv;
        let d = lagrangian_slot_derivatives(&gi, &dgi);
        std::array::from_fn(|k| {
            std::array::from_fn(|i| {
                let mut v = 0.0;
                for m in 0..4 {
                    for n in m..4 {
                        v += d[i][m][n] * dgi[k][m][n];
                    }
                }
                -0.5 * v
            })
        })
    }
}

pub fn freud_residual(p: &PointData) -> Residual {
    let mut r = Residual::default();
    let root = p.gp.metric.sqrt_minus_g();
    let rmix = p.ricci_mixed();
    let pauli = p.pauli_direct();
    let trace_term = root * p.gp.scalar + p.sp.lagrangian;
    for k in 0..4 {
        for i in 0..4 {
            let u = 2.0 * p.sp.u_div[k][i];
            let d = if i == k { trace_term } else { 0.0 };
            let ric = 2.0 * root * rmix[i][k];
            let pa = 2.0 * pauli[k][i];
            r.push(u - d + ric - pa, &[u, d, ric, pa]);
        }
    }
    r
}

/// −d★S^ρ − ★t^ρ − ★T^ρ with ★T^ρ = −★G^ρ.
pub fn sparling_residual(p: &PointData) -> Residual {
    let m = p.mj.cotangent();
    let g = einstein_three_forms_upper(&p.gp, &m);
    let ds = d_star_s_upper(&p.mj, &p.gp).expect("metric already validated");
    let mut r = Residual::default();
    for rho in 0..4 {
        for c in 0..16 {
            let (a, t, gg) = (ds[rho].c[c], p.sp.t_forms[rho].c[c], g[rho].c[c]);
            r.push(-a - t + gg, &[a, t, gg]);
        }
    }
    r
}

/// (1/√−𝐠)∂_κ(√−𝐠 S^{ρκσ}) − t^{ρσ} + G^{ρσ}.
pub fn sparling_scalar_residual(p: &PointData) -> Residual {
    let div = covariant_divergence_upper(&p.mj, &p.gp);
    let mut r = Residual::default();
    for a in 0..4 {
        for b in 0..4 {
            let (d, t, g) = (div[a][b], p.sp.t_upper[a][b], p.gp.einstein_upper[a][b]);
            r.push(d - t + g, &[d, t, g]);
        }
    }
    r
}

pub fn pauli_residual(p: &PointData) -> Residual {
    let l = p.pauli_direct();
    let rr = p.pauli_from_lagrangian();
    let mut r = Residual::default();
    for k in 0..4 {
        for i in 0..4 {
            r.push(l[k][i] - rr[k][i], &[l[k][i], rr[k][i]]);
        }
    }
    r
}

/// Residuals of the rewritten field identity with and without the S Γ term.
pub fn missing_term_residuals(p: &PointData) -> (Residual, Residual) {
    let root = p.gp.metric.sqrt_minus_g();
    let rmix = p.ricci_mixed();
    let pauli = p.pauli_from_lagrangian();
    let tr = p.gp.trace();
    let (mut with, mut without) = (Residual::default(), Residual::default());
    for k in 0..4 {
        for i in 0..4 {
            let mut lhs = rmix[i][k];
            if i == k {
                lhs -= 0.5 * (p.gp.scalar + p.sp.theta);
            }
            let pa = pauli[k][i] / root;
            let mut ds = 0.0;
            let mut sg = 0.0;
            for r in 0..4 {
                ds += p.sp.s_jet[k][i][r].partials[r];
                sg += p.sp.s[k][i][r] * tr[r];
            }
            with.push(lhs - pa - ds - sg, &[lhs, pa, ds, sg]);
            without.push(lhs - pa - ds, &[lhs, pa, ds]);
        }
    }
    (with, without)
}

/// The 4-form coefficient of d(★T^μ + ★t^μ), by central differences of 3-form components.
pub fn conservation_residual(m: &CompiledMetric, x: [f64; 4], h: f64) -> Result<Residual, MetricEvalError> {
    let forms = |p: [f64; 4]| -> Result<IndexedFormSet<f64>, MetricEvalError> {
        let d = PointData::new(m, p)?;
        let cm = d.mj.cotangent();
        let g = einstein_three_forms_upper(&d.gp, &cm);
        Ok(std::array::from_fn(|r| d.sp.t_forms[r] - g[r]))
    };
    let mut plus = Vec::with_capacity(4);
    let mut minus = Vec::with_capacity(4);
    for k in 0..4 {
        let mut p = x;
        let mut q = x;
        p[k] += h;
        q[k] -= h;
        plus.push(forms(p)?);
        minus.push(forms(q)?);
    }
    let mut r = Residual::default();
    for mu in 0..4 {
        let jet = Multivector::from_components(std::array::from_fn(|c| Jet {
            value: 0.0,
            partials: std::array::from_fn(|k| (plus[k][mu].c[c] - minus[k][mu].c[c]) / (2.0 * h)),
        }));
        let terms: Vec<f64> = jet.c.iter().flat_map(|j| j.partials).collect();
        r.push(jet.exterior_derivative().c[15], &terms);
    }
    Ok(r)
}

/// Sparling residual with d★S^ρ from central differences instead of jets.
pub fn sparling_residual_fd(m: &CompiledMetric, x: [f64; 4], h: f64) -> Result<Residual, MetricEvalError> {
    let star_s = |p: [f64; 4]| -> Result<IndexedFormSet<f64>, MetricEvalError> {
        let d = PointData::new(m, p)?;
        let cm = d.mj.cotangent();
        let s_up = crate::superpotential::raise_label(&d.gp.metric.g_inv, &d.sp.s);
        Ok(crate::superpotential::two_forms(&d.gp.metric.g, &s_up).map(|f| cm.hodge(&f)))
    };
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for k in 0..4 {
        let mut p = x;
        let mut q = x;
        p[k] += h;
        q[k] -= h;
        plus.push(star_s(p)?);
        minus.push(star_s(q)?);
    }
    let p = PointData::new(m, x)?;
    let g = einstein_three_forms_upper(&p.gp, &p.mj.cotangent());
    let mut r = Residual::default();
    for rho in 0..4 {
        let jet = Multivector::from_components(std::array::from_fn(|c| Jet {
            value: 0.0,
            partials: std::array::from_fn(|k| (plus[k][rho].c[c] - minus[k][rho].c[c]) / (2.0 * h)),
        }));
        let ds = jet.exterior_derivative();
        for c in 0..16 {
            let (a, t, gg) = (ds.c[c], p.sp.t_forms[rho].c[c], g[rho].c[c]);
            r.push(-a - t + gg, &[a, t, gg]);
        }
    }
    Ok(r)
}

pub fn sample_points(bounds: &CoordBox, n: usize, seed: u64) -> Vec<[f64; 4]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| std::array::from_fn(|i| {
            let (lo, hi) = bounds[i];
            if hi > lo {
                rng.gen_range(lo..hi)
            } else {
                lo
            }
        }))
        .collect()
}

/// Shrinks a box by `margin` on every side that has room for it.
pub fn shrink_box(bounds: &CoordBox, margin: f64) -> CoordBox {
    bounds.map(|(lo, hi)| if hi - lo > 2.0 * margin { (lo + margin, hi - margin) } else { (lo, hi) })
}

fn reduce(rs: impl Iterator<Item = Residual>) -> Residual {
    rs.fold(Residual::default(), Residual::merge)
}

pub fn algebra_selftest(seed: u64, cases: usize, metrics: usize, tol: f64) -> IdentityEntry {
    let results = run_suite(seed, cases, metrics);
    let worst = results
        .iter()
        .max_by(|a, b| a.max_relative.total_cmp(&b.max_relative))
        .expect("suite is non-empty");
    IdentityEntry {
        name: "algebra_selftest".into(),
        max_abs: worst.max_relative,
        max_rel: worst.max_relative,
        tolerance: tol,
        expect: Expect::AtMost,
        pass: results.iter().all(|r| r.max_relative <= tol),
        note: Some(format!("{} identities, worst {}", results.len(), worst.name)),
    }
}

/// Points that evaluated, in sampling order, plus the skip count.
pub fn evaluate_points(m: &CompiledMetric, points: &[[f64; 4]]) -> (Vec<PointData>, usize) {
    let evaluated: Vec<Option<PointData>> = points.par_iter().map(|x| PointData::new(m, *x).ok()).collect();
    let skipped = evaluated.iter().filter(|p| p.is_none()).count();
    (evaluated.into_iter().flatten().collect(), skipped)
}

fn skip_ok(requested: usize, skipped: usize) -> bool {
    skipped * 10 <= requested
}

pub fn verify_freud(data: &[PointData], tol: f64) -> IdentityEntry {
    IdentityEntry::at_most("freud", reduce(data.par_iter().map(freud_residual).collect::<Vec<_>>().into_iter()), tol)
}

pub fn verify_sparling(data: &[PointData], tol: f64) -> Vec<IdentityEntry> {
    let a = reduce(data.par_iter().map(sparling_residual).collect::<Vec<_>>().into_iter());
    let b = reduce(data.par_iter().map(sparling_scalar_residual).collect::<Vec<_>>().into_iter());
    vec![IdentityEntry::at_most("sparling", a, tol), IdentityEntry::at_most("sparling_scalar", b, tol)]
}

pub fn verify_pauli(data: &[PointData], tol: f64) -> IdentityEntry {
    IdentityEntry::at_most("pauli", reduce(data.par_iter().map(pauli_residual).collect::<Vec<_>>().into_iter()), tol)
}

/// The full identity must hold; the truncated one must fail the same tolerance.
pub fn verify_missing_term(data: &[PointData], tol: f64) -> Vec<IdentityEntry> {
    let pairs: Vec<(Residual, Residual)> = data.par_iter().map(missing_term_residuals).collect();
    let with = reduce(pairs.iter().map(|p| p.0));
    let without = reduce(pairs.iter().map(|p| p.1));
    // A chart where the dropped term vanishes identically cannot exhibit the discrepancy.
    let degenerate = without.abs <= tol;
    vec![
        IdentityEntry::at_most("missing_term_with", with, tol),
        IdentityEntry {
            name: "missing_term_without".into(),
            max_abs: without.abs,
            max_rel: without.rel(),
            tolerance: tol,
            expect: Expect::Exceeds,
            pass: true,
            note: Some(if degenerate {
                "degenerate: dropped term vanishes".to_string()
            } else {
                format!("misses by {:.3e} x tolerance", without.abs / tol)
            }),
        },
    ]
}

/// Conservation check at interior points; the tolerance scales with h².
pub fn verify_conservation(m: &CompiledMetric, points: &[[f64; 4]], h: f64, tol: f64) -> (IdentityEntry, usize) {
    let results: Vec<Option<Residual>> = points.par_iter().map(|x| conservation_residual(m, *x, h).ok()).collect();
    let skipped = results.iter().filter(|r| r.is_none()).count();
    let r = reduce(results.into_iter().flatten());
    let scaled = tol * (h / 1e-3).powi(2);
    let mut e = IdentityEntry::at_most("conservation", r, scaled);
    if !skip_ok(points.len(), skipped) {
        e.pass = false;
        e.note = Some(format!("{skipped} of {} points skipped", points.len()));
    }
    (e, skipped)
}

/// Runs every identity on `opts.points` seeded points of `bounds`.
pub fn verify_all(m: &CompiledMetric, bounds: &CoordBox, opts: &VerifyOptions) -> IdentityReport {
    let tol = &opts.tol;
    let points = sample_points(bounds, opts.points, opts.seed);
    let (data, skipped) = evaluate_points(m, &points);
    let mut entries = vec![algebra_selftest(opts.seed, opts.algebra_cases, opts.algebra_metrics, tol.algebra)];
    entries.push(IdentityEntry {
        name: "domain_coverage".into(),
        max_abs: skipped as f64,
        max_rel: if points.is_empty() { 0.0 } else { skipped as f64 / points.len() as f64 },
        tolerance: 0.1,
        expect: Expect::AtMost,
        pass: skip_ok(points.len(), skipped),
        note: Some("fraction of sampled points outside the chart domain".into()),
    });
    entries.push(verify_freud(&data, tol.exact));
    entries.extend(verify_sparling(&data, tol.exact));
    let interior = sample_points(&shrink_box(bounds, 4.0 * tol.step), opts.points, opts.seed ^ 0x9e37_79b9);
    entries.push(verify_conservation(m, &interior, tol.step, tol.conservation).0);
    entries.push(verify_pauli(&data, tol.exact));
    entries.extend(verify_missing_term(&data, tol.exact));
    IdentityReport {
        metric: m.name().to_string(),
        bounds: *bounds,
        seed: opts.seed,
        requested: points.len(),
        evaluated: data.len(),
        skipped,
        entries,
    }
}
