//! Suite runner and single-quantity evaluation behind the
//! `cliffbundle` binary: resolves metrics, runs the registered identity
//! checks at seeded random points, and assembles deterministic reports.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use cliffbundle_core::algebra::CliffordContext;
use cliffbundle_core::coupling::{
    gauge_lagrangians, theta_admissible, total_connection, ThetaField,
};
use cliffbundle_core::expr::parse_expression;
use cliffbundle_core::geometry::GeometryPoint;
use cliffbundle_core::linalg::{
    mat16_add, mat16_commutator, mat16_max_abs, mat16_mul, mat16_scale, mat16_sub, mat16_transpose,
    mat16_vec, mat16_zero, mat4_mul, Mat16, Mat4,
};
use cliffbundle_core::metric::{
    builtin_metric, builtin_names, parse_metric_file, sample_point, MetricJet, MetricSpec,
};
use cliffbundle_core::multivector::{mv_basis, Mv};
use cliffbundle_core::transforms::{
    change_data_at, curvature_transformation_defect, lorentz_generator, parse_matrix_field,
    primed_xconn, sigma_of, spin_action_check, transform_report, MatrixField,
};
use cliffbundle_core::variational::{
    closed_form_q, einstein_coupling, field_variation, lagrangian_densities, metric_variation_pq,
    random_spinor_field, MetricSeeds, SpinorPolyField, VariationConfig, SYM_PAIRS,
};
use cliffbundle_core::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Algebra,
    Geometry,
    Transforms,
    Variational,
    Coupling,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Suite> {
        match s {
            "algebra" => Some(Suite::Algebra),
            "geometry" => Some(Suite::Geometry),
            "transforms" => Some(Suite::Transforms),
            "variational" => Some(Suite::Variational),
            "coupling" => Some(Suite::Coupling),
            "all" => Some(Suite::All),
            _ => None,
        }
    }

    fn parts(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Algebra,
                Suite::Geometry,
                Suite::Transforms,
                Suite::Variational,
                Suite::Coupling,
            ],
            s => vec![s],
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub metric: String,
    pub points: usize,
    pub seed: u64,
    /// Overrides every check's intrinsic tolerance when set.
    pub tol: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub err: f64,
    pub tol: f64,
    pub pass: bool,
    pub exploratory: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PointResult {
    pub point: [f64; 4],
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub exploratory: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub config: SuiteConfig,
    pub results: Vec<PointResult>,
    pub summary: Summary,
}

impl Report {
    /// True when some non-exploratory check failed.
    pub fn failed(&self) -> bool {
        self.results
            .iter()
            .flat_map(|r| r.checks.iter())
            .any(|c| !c.pass && !c.exploratory)
    }
}

/// Builtin catalog name, or a path to a metric file.
pub fn resolve_metric(reference: &str) -> Result<MetricSpec> {
    if let Ok(spec) = builtin_metric(reference) {
        return Ok(spec);
    }
    match std::fs::read_to_string(reference) {
        Ok(text) => parse_metric_file(&text),
        Err(_) => Err(Error::MetricNotFound(reference.to_string())),
    }
}

/// Sample a point in the metric's safe box, resampling on domain
/// errors up to 100 times.
fn sample_jet(spec: &MetricSpec, rng: &mut ChaCha8Rng) -> Result<MetricJet> {
    let mut last = Error::MetricNotFound(spec.name.clone());
    for _ in 0..100 {
        let x = sample_point(spec, rng);
        match spec.jet(&x) {
            Ok(mj) => return Ok(mj),
            Err(e @ Error::Domain { .. }) => last = e,
            Err(e) => return Err(e),
        }
    }
    Err(last)
}

struct Recorder<'a> {
    checks: Vec<CheckRecord>,
    tol_override: Option<f64>,
    suffix: &'a str,
}

impl<'a> Recorder<'a> {
    fn new(tol_override: Option<f64>) -> Self {
        Recorder {
            checks: Vec::new(),
            tol_override,
            suffix: "",
        }
    }

    fn push(&mut self, name: &str, err: f64, tol: f64, exploratory: bool) {
        let tol = self.tol_override.unwrap_or(tol);
        let name = if self.suffix.is_empty() {
            name.to_string()
        } else {
            format!("{name}-{}", self.suffix)
        };
        self.checks.push(CheckRecord {
            name,
            err,
            tol,
            pass: err <= tol,
            exploratory,
        });
    }
}

fn rand_mv(rng: &mut ChaCha8Rng) -> Mv<f64> {
    core::array::from_fn(|_| rng.gen::<f64>() - 0.5)
}

fn rand_vec4(rng: &mut ChaCha8Rng) -> [f64; 4] {
    core::array::from_fn(|_| rng.gen::<f64>() - 0.5)
}

// ---------------------------------------------------------------- algebra

fn algebra_checks(gp: &GeometryPoint, rng: &mut ChaCha8Rng, rec: &mut Recorder) {
    let ctx = &gp.ctx;
    let g = &gp.mj.g;
    let g_inv = &gp.mj.g_inv;

    // e_a e_b + e_b e_a = 2 g_ab, and the raised-index version
    let mut clifford: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let lo = mat16_add(
                &mat16_mul(&ctx.gamma_lo[a], &ctx.gamma_lo[b]),
                &mat16_mul(&ctx.gamma_lo[b], &ctx.gamma_lo[a]),
            );
            let hi = mat16_add(
                &mat16_mul(&ctx.gamma_hi[a], &ctx.gamma_hi[b]),
                &mat16_mul(&ctx.gamma_hi[b], &ctx.gamma_hi[a]),
            );
            for i in 0..16 {
                for j in 0..16 {
                    let id = if i == j { 1.0 } else { 0.0 };
                    clifford = clifford
                        .max((lo[i][j] - 2.0 * g[a][b] * id).abs())
                        .max((hi[i][j] - 2.0 * g_inv[a][b] * id).abs());
                }
            }
        }
    }
    rec.push("clifford-relation", clifford, 1e-10, false);

    // (e_I e_J) r = e_I (e_J r) over all 16^2 basis pairs
    let r = rand_mv(rng);
    let mut assoc: f64 = 0.0;
    for i in 0..16 {
        for j in 0..16 {
            let ei = mv_basis::<f64>(i);
            let ej = mv_basis::<f64>(j);
            let lhs = ctx.product(&ctx.product(&ei, &ej), &r);
            let rhs = ctx.product(&ei, &ctx.product(&ej, &r));
            for k in 0..16 {
                assoc = assoc.max((lhs[k] - rhs[k]).abs());
            }
        }
    }
    rec.push("associativity", assoc, 1e-10, false);

    rec.push(
        "ghat-symmetry",
        mat16_max_abs(&mat16_sub(&ctx.ghat, &mat16_transpose(&ctx.ghat))),
        1e-10,
        false,
    );

    let mut xmetric: f64 = 0.0;
    for a in 0..4 {
        let m = mat16_add(
            &mat16_mul(&mat16_transpose(&ctx.gamma_lo[a]), &ctx.ghat),
            &mat16_mul(&ctx.ghat, &ctx.gamma_lo[a]),
        );
        xmetric = xmetric.max(mat16_max_abs(&m));
    }
    rec.push("gamma-xmetric", xmetric, 1e-10, false);

    // ĝ(uψ, φ) + ĝ(ψ, uφ) = 0 for a grade-1 u
    let u = rand_vec4(rng);
    let psi = rand_mv(rng);
    let phi = rand_mv(rng);
    let gu = ctx.gamma_of(&u);
    let quad = |a: &Mv<f64>, b: &Mv<f64>| {
        let gb = mat16_vec(&ctx.ghat, b);
        (0..16).map(|i| a[i] * gb[i]).sum::<f64>()
    };
    let skew = (quad(&mat16_vec(&gu, &psi), &phi) + quad(&psi, &mat16_vec(&gu, &phi))).abs();
    rec.push("ghat-vector-skew", skew, 1e-10, false);
}

// --------------------------------------------------------------- geometry

fn geometry_checks(gp: &GeometryPoint, diag: bool, rec: &mut Recorder) {
    // ∂_νĝ = Γ̂_ν^Tĝ + ĝΓ̂_ν (verified scope: diagonal metrics)
    let mut compat: f64 = 0.0;
    for nu in 0..4 {
        let lhs = mat16_add(
            &mat16_mul(&mat16_transpose(&gp.xconn[nu]), &gp.ctx.ghat),
            &mat16_mul(&gp.ctx.ghat, &gp.xconn[nu]),
        );
        compat = compat.max(mat16_max_abs(&mat16_sub(&lhs, &gp.dghat[nu])));
    }
    rec.push("metric-compat", compat, 1e-9, !diag);

    // [γ_α, Γ̂_β] = ∂_βγ_α − Γ^ε_{αβ}γ_ε
    let mut lo: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let mut rhs = gp.dgamma_lo[b][a];
            for e in 0..4 {
                rhs = mat16_sub(&rhs, &mat16_scale(&gp.ctx.gamma_lo[e], gp.conn.gamma2[e][a][b]));
            }
            let comm = mat16_commutator(&gp.ctx.gamma_lo[a], &gp.xconn[b]);
            lo = lo.max(mat16_max_abs(&mat16_sub(&comm, &rhs)));
        }
    }
    rec.push("gamma-xconn-lo", lo, 1e-9, false);

    // [γ^α, Γ̂_β] = ∂_βγ^α + Γ^α_{βε}γ^ε
    let mut hi: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let mut rhs = gp.dgamma_hi[b][a];
            for e in 0..4 {
                rhs = mat16_add(&rhs, &mat16_scale(&gp.ctx.gamma_hi[e], gp.conn.gamma2[a][b][e]));
            }
            let comm = mat16_commutator(&gp.ctx.gamma_hi[a], &gp.xconn[b]);
            hi = hi.max(mat16_max_abs(&mat16_sub(&comm, &rhs)));
        }
    }
    rec.push("gamma-xconn-hi", hi, 1e-9, false);

    // grade-1 block of Ω̂_{αβ} is the classical Riemann tensor
    let mut grade1: f64 = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            for r in 0..4 {
                for s in 0..4 {
                    grade1 = grade1
                        .max((gp.xcurv[a][b][r + 1][s + 1] - gp.curv.riemann[r][s][a][b]).abs());
                }
            }
        }
    }
    rec.push("curvature-grade1", grade1, 1e-8, false);
}

// -------------------------------------------------------------- transforms

fn boost01() -> Mat4<f64> {
    let t = 0.3f64;
    let (c, s) = (t.cosh(), t.sinh());
    [
        [c, s, 0.0, 0.0],
        [s, c, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
}

fn const_diag() -> Mat4<f64> {
    [
        [1.2, 0.0, 0.0, 0.0],
        [0.0, 0.9, 0.0, 0.0],
        [0.0, 0.0, 1.1, 0.0],
        [0.0, 0.0, 0.0, 0.8],
    ]
}

pub fn poly_field() -> MatrixField {
    // invertible across every catalog safe box, position-dependent
    let raw = [
        ["1 + 0.1*x1", "0.05*x0", "0", "0.02*x3"],
        ["0", "1 - 0.08*x2", "0.03*x0", "0"],
        ["0.04*x2", "0", "1 + 0.06*x3", "0.01*x1"],
        ["0", "0.02*x1", "0", "1 + 0.05*x0"],
    ];
    MatrixField {
        entries: core::array::from_fn(|i| {
            core::array::from_fn(|j| parse_expression(raw[i][j]).unwrap())
        }),
    }
}

/// The three basis-change families exercised by the transform suite.
pub fn change_families() -> [(&'static str, MatrixField); 3] {
    [
        ("const-lorentz", MatrixField::constant(&boost01())),
        ("const-diag", MatrixField::constant(&const_diag())),
        ("poly", poly_field()),
    ]
}

fn transform_checks(gp: &GeometryPoint, rng: &mut ChaCha8Rng, rec: &mut Recorder) -> Result<()> {
    let psi = rand_mv(rng);
    let dpsi: [Mv<f64>; 4] = core::array::from_fn(|_| rand_mv(rng));
    for (label, field) in change_families() {
        let tr = transform_report(gp, &field, &psi, &dpsi)?;
        rec.suffix = label;
        rec.push("xmetric-grade1", tr.xmetric_grade1, 1e-8, false);
        rec.push("xgamma", tr.xgamma, 1e-8, false);
        rec.push("xchristoffel", tr.xchristoffel, 1e-8, false);
        rec.push("dirac-covariance", tr.dirac, 1e-8, false);
        rec.push("theorem1-invariants", tr.invariants, 1e-8, false);
        rec.suffix = "";
    }
    rec.push(
        "curvature-trans-poly",
        curvature_transformation_defect(gp, &poly_field())?,
        1e-8,
        false,
    );

    // Theorem 2 over the six generator planes and three parameters
    let mut spin: f64 = 0.0;
    let vs: Vec<[f64; 4]> = (0..4).map(|_| rand_vec4(rng)).collect();
    for (a, b) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
        for t in [0.25, 0.6, 1.0] {
            let mut u = [0.0; 4];
            let mut v = [0.0; 4];
            u[a] = 1.0;
            v[b] = 1.0;
            let mut l = lorentz_generator(&u, &v, &gp.mj.g);
            // normalize to unit max entry so exp stays well-conditioned
            // even where the metric components are large
            let m = l
                .iter()
                .flatten()
                .fold(0.0f64, |acc, x| acc.max(x.abs()))
                .max(1e-300);
            for row in l.iter_mut() {
                for x in row.iter_mut() {
                    *x *= t / m;
                }
            }
            let r = spin_action_check(&gp.ctx, &l, &vs);
            spin = spin.max(r.metric_defect).max(r.ghat_defect).max(r.conj_defect);
        }
    }
    rec.push("spin-action", spin, 1e-10, false);

    // σ([L1, L2]) = [σ(L1), σ(L2)]
    let l1 = lorentz_generator(&rand_vec4(rng), &rand_vec4(rng), &gp.mj.g);
    let l2 = lorentz_generator(&rand_vec4(rng), &rand_vec4(rng), &gp.mj.g);
    let mut bracket = mat4_mul(&l1, &l2);
    let m21 = mat4_mul(&l2, &l1);
    for i in 0..4 {
        for j in 0..4 {
            bracket[i][j] -= m21[i][j];
        }
    }
    let lie = mat16_max_abs(&mat16_sub(
        &sigma_of(&gp.ctx, &bracket),
        &mat16_commutator(&sigma_of(&gp.ctx, &l1), &sigma_of(&gp.ctx, &l2)),
    ));
    rec.push("sigma-lie-hom", lie, 1e-10, false);
    Ok(())
}

// ------------------------------------------------------------- variational

fn variational_checks(
    gp: &GeometryPoint,
    diag: bool,
    rng: &mut ChaCha8Rng,
    rec: &mut Recorder,
) -> Result<()> {
    let cfg = VariationConfig::default();
    let field = random_spinor_field(rng);
    let fv = field_variation(gp, &field)?;
    rec.push("euler-lagrange-mass", fv.el_lm_defect, 1e-8, false);
    rec.push("euler-lagrange-dirac", fv.el_ld_defect, 1e-8, !diag);

    let sj = field.eval(&gp.mj.x)?;
    let lag = lagrangian_densities(gp, &sj.psi, &sj.dpsi, &cfg);
    let want = -8.0 * gp.mj.omega * gp.curv.scalar;
    rec.push(
        "lg-is-minus-8-omega-r",
        (lag[2] - want).abs() / (1.0 + want.abs()),
        1e-8,
        !diag,
    );

    let seeds = MetricSeeds::new(&gp.mj);
    let (p_mats, q_mats) = metric_variation_pq(gp, &seeds);
    let mut p_norm: f64 = 0.0;
    for m in &p_mats {
        p_norm = p_norm.max(mat16_max_abs(m));
    }
    rec.push("p-vanishes", p_norm, 1e-8, !diag);

    if diag {
        let closed = closed_form_q(gp)?;
        let mut q_defect: f64 = 0.0;
        for s in 0..10 {
            for e in 0..4 {
                q_defect = q_defect.max(mat16_max_abs(&mat16_sub(&q_mats[s][e], &closed[s][e])));
            }
        }
        rec.push("q-closed-form", q_defect, 1e-8, false);
    }

    let ec = einstein_coupling(gp, &seeds, &field, &cfg)?;
    rec.push("variational-identity", ec.identity_defect, 1e-7, false);
    Ok(())
}

// ---------------------------------------------------------------- coupling

/// Random multivector supported on the dagger-odd basis elements, so
/// that u† = −u.
pub fn dagger_odd_mv(ctx: &CliffordContext<f64>, rng: &mut ChaCha8Rng) -> Mv<f64> {
    let mut u = [0.0; 16];
    for i in 0..16 {
        if ctx.dagger_basis[i][i] < 0.0 {
            u[i] = rng.gen::<f64>() - 0.5;
        }
    }
    u
}

fn coupling_checks(
    gp: &GeometryPoint,
    diag: bool,
    rng: &mut ChaCha8Rng,
    rec: &mut Recorder,
) -> Result<()> {
    let ctx = &gp.ctx;

    // θ_α = right multiplication by u_α with u† = −u
    let theta: [Mat16<f64>; 4] =
        core::array::from_fn(|_| ctx.right_mul(&dagger_odd_mv(ctx, rng)));
    let adm = theta_admissible(ctx, &theta);
    rec.push("right-mult-admissible", adm.max_defect(), 1e-10, !diag);

    // θ'_α from the force transformation law vs C' − Γ̂'
    let cd = change_data_at(&gp.mj, &poly_field())?;
    let c_total = total_connection(&gp.xconn, &theta);
    let c_primed = primed_xconn(&cd, &c_total);
    let xconn_primed = primed_xconn(&cd, &gp.xconn);
    let mut xforce: f64 = 0.0;
    for a in 0..4 {
        let mut theta_p = mat16_zero::<f64>();
        for b in 0..4 {
            let m = mat16_mul(&mat16_mul(&cd.bhat, &theta[b]), &cd.bhat_inv);
            theta_p = mat16_add(&theta_p, &mat16_scale(&m, cd.b_inv[b][a]));
        }
        let got = mat16_sub(&c_primed[a], &xconn_primed[a]);
        xforce = xforce.max(mat16_max_abs(&mat16_sub(&got, &theta_p)));
    }
    rec.push("xforce-transform", xforce, 1e-8, false);

    // commuting-θ gauge sector is trivial on flat space; only run where
    // the extended connection actually vanishes
    let flat = (0..4).all(|a| mat16_max_abs(&gp.xconn[a]) < 1e-10);
    if flat {
        let u = dagger_odd_mv(ctx, rng);
        let fs: [_; 4] = core::array::from_fn(|a| {
            let c0 = rng.gen::<f64>() - 0.5;
            let c1 = rng.gen::<f64>() - 0.5;
            parse_expression(&format!("{c0} + {c1}*x{a}")).unwrap()
        });
        let tf = ThetaField::scaled(&[ctx.right_mul(&u); 4], &fs);
        let tj = tf.eval(&gp.mj.x)?;
        let gl = gauge_lagrangians(gp, &tj, &VariationConfig::default());
        rec.push("flat-gauge-trace", gl.tr_gamma_gamma_f.abs(), 1e-10, false);
    }
    Ok(())
}

// ------------------------------------------------------------------ runner

pub fn run_suite(cfg: &SuiteConfig) -> Result<Report> {
    let spec = resolve_metric(&cfg.metric)?;
    let diag = spec.is_diagonal();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut results = Vec::with_capacity(cfg.points);
    for _ in 0..cfg.points {
        let mj = sample_jet(&spec, &mut rng)?;
        let gp = GeometryPoint::new(&mj);
        let mut rec = Recorder::new(cfg.tol);
        for part in cfg.suite.parts() {
            match part {
                Suite::Algebra => algebra_checks(&gp, &mut rng, &mut rec),
                Suite::Geometry => geometry_checks(&gp, diag, &mut rec),
                Suite::Transforms => transform_checks(&gp, &mut rng, &mut rec)?,
                Suite::Variational => variational_checks(&gp, diag, &mut rng, &mut rec)?,
                Suite::Coupling => coupling_checks(&gp, diag, &mut rng, &mut rec)?,
                Suite::All => unreachable!(),
            }
        }
        let mut checks = rec.checks;
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        results.push(PointResult {
            point: mj.x,
            checks,
        });
    }
    let mut summary = Summary {
        pass: 0,
        fail: 0,
        exploratory: 0,
    };
    for c in results.iter().flat_map(|r| r.checks.iter()) {
        if c.exploratory {
            summary.exploratory += 1;
        } else if c.pass {
            summary.pass += 1;
        } else {
            summary.fail += 1;
        }
    }
    Ok(Report {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        results,
        summary,
    })
}

pub fn render_report(report: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "suite {:?} on {} (points = {}, seed = {})",
        report.config.suite, report.config.metric, report.config.points, report.config.seed
    );
    for (k, r) in report.results.iter().enumerate() {
        let _ = writeln!(
            out,
            "point {k}: [{:+.4}, {:+.4}, {:+.4}, {:+.4}]",
            r.point[0], r.point[1], r.point[2], r.point[3]
        );
        for c in &r.checks {
            let status = if c.pass { "pass" } else { "FAIL" };
            let tag = if c.exploratory { " (exploratory)" } else { "" };
            let _ = writeln!(
                out,
                "  {:<32} err = {:9.3e}  tol = {:7.1e}  {status}{tag}",
                c.name, c.err, c.tol
            );
        }
    }
    let _ = writeln!(
        out,
        "summary: {} passed, {} failed, {} exploratory",
        report.summary.pass, report.summary.fail, report.summary.exploratory
    );
    out
}

// --------------------------------------------------------------------- eval

pub fn parse_point(s: &str) -> Result<[f64; 4]> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(Error::Parse {
            offset: 0,
            expected: "four comma-separated coordinates".to_string(),
        });
    }
    let mut x = [0.0; 4];
    for (i, p) in parts.iter().enumerate() {
        x[i] = p.parse().map_err(|_| Error::Parse {
            offset: 0,
            expected: "a real number".to_string(),
        })?;
    }
    Ok(x)
}

fn fmt_mat4(m: &Mat4<f64>) -> String {
    let mut out = String::new();
    for row in m {
        let _ = writeln!(
            out,
            "  [{:+.12e}, {:+.12e}, {:+.12e}, {:+.12e}]",
            row[0], row[1], row[2], row[3]
        );
    }
    out
}

fn fmt_mat16(m: &Mat16<f64>) -> String {
    let mut out = String::new();
    for row in m {
        let mut line = String::from("  [");
        for (j, v) in row.iter().enumerate() {
            if j > 0 {
                line.push_str(", ");
            }
            let _ = write!(line, "{v:+.6e}");
        }
        line.push(']');
        let _ = writeln!(out, "{line}");
    }
    out
}

pub fn eval_quantity(metric: &str, quantity: &str, point: &str) -> Result<String> {
    let spec = resolve_metric(metric)?;
    let x = parse_point(point)?;
    let mj = spec.jet(&x)?;
    let mut out = String::new();
    match quantity {
        "omega" => {
            let _ = writeln!(out, "omega = {:.12e}", mj.omega);
        }
        "scalar-curvature" => {
            let gp = GeometryPoint::new(&mj);
            let _ = writeln!(out, "R = {:.12e}", gp.curv.scalar);
        }
        "einstein" => {
            let gp = GeometryPoint::new(&mj);
            let _ = writeln!(out, "G_ab (lower indices):");
            out.push_str(&fmt_mat4(&gp.curv.einstein_lo));
        }
        "extended-christoffel" => {
            let gp = GeometryPoint::new(&mj);
            for a in 0..4 {
                let _ = writeln!(out, "Gammahat_{a}:");
                out.push_str(&fmt_mat16(&gp.xconn[a]));
            }
        }
        "extended-curvature-trace" => {
            let gp = GeometryPoint::new(&mj);
            let _ = writeln!(out, "tr(gamma^a gamma^b Omegahat_ab) = {:.12e}", gp.curvature_trace());
        }
        "lagrangian-densities" => {
            let gp = GeometryPoint::new(&mj);
            // fixed reference field: psi = e_emptyset, constant
            let field = SpinorPolyField::constant(&mv_basis::<f64>(0));
            let sj = field.eval(&x)?;
            let lag = lagrangian_densities(&gp, &sj.psi, &sj.dpsi, &VariationConfig::default());
            let _ = writeln!(out, "L_m = {:.12e}", lag[0]);
            let _ = writeln!(out, "L_d = {:.12e}", lag[1]);
            let _ = writeln!(out, "L_g = {:.12e}", lag[2]);
            let _ = writeln!(out, "L_c = {:.12e}", lag[3]);
        }
        "q-tensor" => {
            if !spec.is_diagonal() {
                return Err(Error::UnsupportedMetric(
                    "q-tensor closed form requires a diagonal metric",
                ));
            }
            let gp = GeometryPoint::new(&mj);
            let seeds = MetricSeeds::new(&mj);
            let (_, q_num) = metric_variation_pq(&gp, &seeds);
            let q_closed = closed_form_q(&gp)?;
            let _ = writeln!(out, "(a,b,e)  ||numeric||_inf  ||closed||_inf  max|diff|");
            for (s, &(a, b)) in SYM_PAIRS.iter().enumerate() {
                for e in 0..4 {
                    let _ = writeln!(
                        out,
                        "({a},{b},{e})  {:14.6e}  {:14.6e}  {:9.3e}",
                        mat16_max_abs(&q_num[s][e]),
                        mat16_max_abs(&q_closed[s][e]),
                        mat16_max_abs(&mat16_sub(&q_num[s][e], &q_closed[s][e]))
                    );
                }
            }
        }
        other => {
            return Err(Error::Parse {
                offset: 0,
                expected: format!(
                    "a quantity name (got '{other}'); one of scalar-curvature, einstein, omega, \
                     extended-christoffel, extended-curvature-trace, lagrangian-densities, q-tensor"
                ),
            })
        }
    }
    Ok(out)
}

pub fn metrics_list() -> String {
    let mut out = String::new();
    for name in builtin_names() {
        let _ = writeln!(out, "{name}");
    }
    out
}

/// Keep a reference so user-supplied B-field files share the metric
/// file plumbing. Used by the binary when a path is given for a basis
/// change; exposed here for tests.
pub fn load_matrix_field(path: &str) -> Result<MatrixField> {
    let text = std::fs::read_to_string(path)
        .map_err(|_| Error::MetricNotFound(path.to_string()))?;
    parse_matrix_field(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(suite: Suite, metric: &str, seed: u64) -> SuiteConfig {
        SuiteConfig {
            suite,
            metric: metric.to_string(),
            points: 2,
            seed,
            tol: None,
        }
    }

    #[test]
    fn resolve_builtin_and_file_metrics() {
        assert_eq!(resolve_metric("flrw").unwrap().name, "flrw");
        let path = std::env::temp_dir().join("cliffbundle_metric_test.txt");
        std::fs::write(&path, "name = custom\ng[0][0] = -1 - x1*x1\n").unwrap();
        let spec = resolve_metric(path.to_str().unwrap()).unwrap();
        assert_eq!(spec.name, "custom");
        assert!(matches!(
            resolve_metric("no-such-metric"),
            Err(Error::MetricNotFound(_))
        ));
    }

    #[test]
    fn algebra_suite_passes_on_catalog() {
        for name in ["minkowski", "nondiag-perturb-1"] {
            let report = run_suite(&cfg(Suite::Algebra, name, 5)).unwrap();
            assert!(!report.failed(), "{name}");
            assert_eq!(report.summary.fail, 0);
            assert_eq!(report.summary.exploratory, 0);
        }
    }

    #[test]
    fn geometry_suite_marks_offdiagonal_compat_exploratory() {
        let report = run_suite(&cfg(Suite::Geometry, "nondiag-perturb-2", 5)).unwrap();
        // genuine defect, reported but never gating
        assert!(!report.failed());
        let compat: Vec<&CheckRecord> = report
            .results
            .iter()
            .flat_map(|r| r.checks.iter())
            .filter(|c| c.name == "metric-compat")
            .collect();
        assert_eq!(compat.len(), 2);
        assert!(compat.iter().all(|c| c.exploratory && !c.pass));
    }

    #[test]
    fn reports_are_deterministic() {
        let a = serde_json::to_string(&run_suite(&cfg(Suite::Geometry, "flrw", 9)).unwrap());
        let b = serde_json::to_string(&run_suite(&cfg(Suite::Geometry, "flrw", 9)).unwrap());
        assert_eq!(a.unwrap(), b.unwrap());
    }

    #[test]
    fn tol_override_applies_to_every_check() {
        let mut c = cfg(Suite::Algebra, "flrw", 5);
        c.tol = Some(0.5);
        let report = run_suite(&c).unwrap();
        assert!(report
            .results
            .iter()
            .flat_map(|r| r.checks.iter())
            .all(|ck| ck.tol == 0.5));
    }

    #[test]
    fn checks_sorted_by_name_within_points() {
        let report = run_suite(&cfg(Suite::Geometry, "flrw", 1)).unwrap();
        for r in &report.results {
            for w in r.checks.windows(2) {
                assert!(w[0].name <= w[1].name);
            }
        }
    }

    #[test]
    fn eval_examples() {
        let out = eval_quantity("flrw", "omega", "2,0,0,0").unwrap();
        assert!(out.contains("8.000000000000e0"), "{out}");
        let out = eval_quantity("schwarzschild", "scalar-curvature", "0,4,1.2,0.3").unwrap();
        let r: f64 = out.trim().strip_prefix("R = ").unwrap().parse().unwrap();
        assert!(r.abs() < 1e-8, "{r}");
        assert!(matches!(
            eval_quantity("nondiag-perturb-1", "q-tensor", "0,0,0,0"),
            Err(Error::UnsupportedMetric(_))
        ));
        assert!(eval_quantity("flrw", "no-such-quantity", "0,0,0,0").is_err());
    }

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point(" 1, 2 ,3,4").unwrap(), [1.0, 2.0, 3.0, 4.0]);
        assert!(parse_point("1,2,3").is_err());
        assert!(parse_point("1,2,3,x").is_err());
    }

    #[test]
    fn matrix_field_file_roundtrip() {
        let path = std::env::temp_dir().join("cliffbundle_bfield_test.txt");
        std::fs::write(&path, "# basis change\nb[0][0] = 1 + 0.1*x1\nb[1][0] = 0.05*x2\n")
            .unwrap();
        let field = load_matrix_field(path.to_str().unwrap()).unwrap();
        let m = field.eval_jet(&[0.0, 2.0, 1.0, 0.0]).unwrap();
        assert!((m[0][0].v - 1.2).abs() < 1e-15);
        assert!((m[1][0].v - 0.05).abs() < 1e-15);
        assert!((m[2][2].v - 1.0).abs() < 1e-15);
    }
}
