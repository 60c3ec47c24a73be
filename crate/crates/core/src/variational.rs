//! Lagrangian densities, field and metric variation, the A/P/Q
//! variation matrices with the closed-form K table, and the coupled
//! Einstein residual.

use alloc::vec::Vec;

use crate::algebra::CliffordContext;
use crate::error::Result;
use crate::expr::Expression;
use crate::geometry::{dirac_operator, point_data, GeometryPoint, PointData};
use crate::linalg::{
    mat16_add, mat16_mul, mat16_scale, mat16_sub, mat16_transpose, mat16_vec, mat16_zero,
    mat4_det, mat4_zero, Mat16, Mat4,
};
use crate::metric::MetricJet;
use crate::multivector::{mv_add, mv_scale, mv_zero, Mv};
use crate::scalar::{Dual, Grad4, Scalar};

/// Independent metric entries (α ≤ β) in row-major order.
pub const SYM_PAIRS: [(usize, usize); 10] = [
    (0, 0),
    (0, 1),
    (0, 2),
    (0, 3),
    (1, 1),
    (1, 2),
    (1, 3),
    (2, 2),
    (2, 3),
    (3, 3),
];

#[derive(Clone, Copy, Debug)]
pub struct VariationConfig {
    pub mu: f64,
    pub kappa: f64,
    pub lambda: f64,
    pub tau: f64,
}

impl Default for VariationConfig {
    fn default() -> Self {
        VariationConfig {
            mu: 1.0,
            kappa: 1.0,
            lambda: 0.0,
            tau: 1.0,
        }
    }
}

/// A spinor field given by 16 expressions in the coordinates.
#[derive(Clone, Debug)]
pub struct SpinorPolyField {
    pub entries: [Expression; 16],
}

pub struct SpinorJet {
    pub psi: Mv<f64>,
    pub dpsi: [Mv<f64>; 4],
    /// ddpsi[nu][alpha] = ∂_ν∂_αψ
    pub ddpsi: [[Mv<f64>; 4]; 4],
}

impl SpinorPolyField {
    pub fn constant(psi: &Mv<f64>) -> Self {
        SpinorPolyField {
            entries: core::array::from_fn(|i| Expression::num(psi[i])),
        }
    }

    pub fn eval(&self, x: &[f64; 4]) -> Result<SpinorJet> {
        let mut psi = mv_zero::<f64>();
        let mut dpsi = [mv_zero::<f64>(); 4];
        let mut ddpsi = [[mv_zero::<f64>(); 4]; 4];
        for i in 0..16 {
            let j = self.entries[i].eval_jet(x)?;
            psi[i] = j.v;
            for a in 0..4 {
                dpsi[a][i] = j.d[a];
                for n in 0..4 {
                    ddpsi[n][a][i] = j.h[n][a];
                }
            }
        }
        Ok(SpinorJet { psi, dpsi, ddpsi })
    }
}

/// Degree-≤2 polynomial spinor field with coefficients in [−1, 1].
pub fn random_spinor_field<R: rand::Rng>(rng: &mut R) -> SpinorPolyField {
    let coeff = |rng: &mut R| rng.gen_range(-1.0..1.0);
    SpinorPolyField {
        entries: core::array::from_fn(|_| {
            let mut e = Expression::num(coeff(rng));
            for a in 0..4 {
                let lin = Expression::Mul(
                    alloc::boxed::Box::new(Expression::num(coeff(rng))),
                    alloc::boxed::Box::new(Expression::Var(a)),
                );
                e = Expression::Add(alloc::boxed::Box::new(e), alloc::boxed::Box::new(lin));
                for b in a..4 {
                    let quad = Expression::Mul(
                        alloc::boxed::Box::new(Expression::num(coeff(rng))),
                        alloc::boxed::Box::new(Expression::Mul(
                            alloc::boxed::Box::new(Expression::Var(a)),
                            alloc::boxed::Box::new(Expression::Var(b)),
                        )),
                    );
                    e = Expression::Add(alloc::boxed::Box::new(e), alloc::boxed::Box::new(quad));
                }
            }
            e
        }),
    }
}

pub fn bilinear<T: Scalar>(m: &Mat16<T>, a: &Mv<T>, b: &Mv<T>) -> T {
    let mb = mat16_vec(m, b);
    let mut s = T::zero();
    for i in 0..16 {
        s = s + a[i] * mb[i];
    }
    s
}

fn omega_of<T: Scalar>(g: &Mat4<T>) -> T {
    (T::zero() - mat4_det(g)).sqrt()
}

/// (L_m, L_d, L_g, L_c) at a point.
pub fn lagrangian_densities(
    gp: &GeometryPoint,
    psi: &Mv<f64>,
    dpsi: &[Mv<f64>; 4],
    cfg: &VariationConfig,
) -> [f64; 4] {
    let w = gp.mj.omega;
    let dp = dirac_operator(&gp.ctx, &gp.xconn, psi, dpsi);
    [
        w * bilinear(&gp.ctx.ghat, psi, psi),
        w * bilinear(&gp.ctx.ghat, psi, &dp),
        w * gp.curvature_trace(),
        cfg.lambda * w,
    ]
}

/// Dψ + μψ.
pub fn dirac_residual(
    gp: &GeometryPoint,
    psi: &Mv<f64>,
    dpsi: &[Mv<f64>; 4],
    mu: f64,
) -> Mv<f64> {
    let dp = dirac_operator(&gp.ctx, &gp.xconn, psi, dpsi);
    mv_add(&dp, &mv_scale(psi, mu))
}

fn lift16<T: Scalar>(m: &Mat16<f64>) -> Mat16<T> {
    core::array::from_fn(|i| core::array::from_fn(|j| T::from_f64(m[i][j])))
}

/// L_d as a function of (ψ, ∂ψ) with the geometry held fixed.
fn dirac_lagrangian<T: Scalar>(
    ghat: &Mat16<T>,
    gamma_hi: &[Mat16<T>; 4],
    xconn: &[Mat16<T>; 4],
    omega: T,
    psi: &Mv<T>,
    dpsi: &[Mv<T>; 4],
) -> T {
    let mut dp = mv_zero::<T>();
    for a in 0..4 {
        let nabla = mv_add(&dpsi[a], &mat16_vec(&xconn[a], psi));
        dp = mv_add(&dp, &mat16_vec(&gamma_hi[a], &nabla));
    }
    omega * bilinear(ghat, psi, &dp)
}

pub struct FieldVariation {
    /// 2ωĝψ
    pub delta_lm: Mv<f64>,
    /// 2ωĝDψ
    pub delta_ld: Mv<f64>,
    /// ‖Euler–Lagrange numerics − closed form‖∞ for L_m and L_d
    pub el_lm_defect: f64,
    pub el_ld_defect: f64,
}

/// Closed-form field variations plus a numeric Euler–Lagrange check:
/// δL/δψ^I = ∂L/∂ψ^I − ∂_α(∂L/∂ψ^I_α), with the momentum field
/// differentiated through coordinate jets.
pub fn field_variation(gp: &GeometryPoint, field: &SpinorPolyField) -> Result<FieldVariation> {
    let sj = field.eval(&gp.mj.x)?;
    let w = gp.mj.omega;
    let dp = dirac_operator(&gp.ctx, &gp.xconn, &sj.psi, &sj.dpsi);
    let delta_lm = mv_scale(&mat16_vec(&gp.ctx.ghat, &sj.psi), 2.0 * w);
    let delta_ld = mv_scale(&mat16_vec(&gp.ctx.ghat, &dp), 2.0 * w);

    // L_m has no momentum: δL_m/δψ^I = ∂L_m/∂ψ^I via dual seeding
    let mut el_lm_defect: f64 = 0.0;
    let ghat_d = lift16::<Dual<f64>>(&gp.ctx.ghat);
    for i in 0..16 {
        let mut psi_d: Mv<Dual<f64>> = core::array::from_fn(|k| Dual::constant(sj.psi[k]));
        psi_d[i] = Dual::seeded(sj.psi[i]);
        let lm = Dual::constant(w) * bilinear(&ghat_d, &psi_d, &psi_d);
        el_lm_defect = el_lm_defect.max((lm.e - delta_lm[i]).abs());
    }

    // geometry over Dual<Grad4> with constant perturbation slots; only
    // the ψ arguments carry seeds
    type S = Dual<Grad4>;
    let lift = |m: &Mat16<Grad4>| -> Mat16<S> {
        core::array::from_fn(|i| core::array::from_fn(|j| Dual::constant(m[i][j])))
    };
    let (g4, dg4) = crate::geometry::grad4_seeds(&gp.mj);
    let pd = point_data::<Grad4>(g4, dg4);
    let ghat_s = lift(&pd.ctx.ghat);
    let gamma_hi_s: [Mat16<S>; 4] = core::array::from_fn(|a| lift(&pd.ctx.gamma_hi[a]));
    let xconn_s: [Mat16<S>; 4] = core::array::from_fn(|a| lift(&pd.xconn[a]));
    let omega_s = Dual::constant(Grad4::new(gp.mj.omega, gp.mj.domega));
    let psi_base: Mv<S> = core::array::from_fn(|k| {
        Dual::constant(Grad4::new(sj.psi[k], core::array::from_fn(|n| sj.dpsi[n][k])))
    });
    let dpsi_base: [Mv<S>; 4] = core::array::from_fn(|a| {
        core::array::from_fn(|k| {
            Dual::constant(Grad4::new(
                sj.dpsi[a][k],
                core::array::from_fn(|n| sj.ddpsi[n][a][k]),
            ))
        })
    });

    let mut el_ld_defect: f64 = 0.0;
    for i in 0..16 {
        // ∂L_d/∂ψ^I
        let mut psi_s = psi_base;
        psi_s[i] = Dual::new(psi_base[i].v, Grad4::constant(1.0));
        let dl_dpsi =
            dirac_lagrangian(&ghat_s, &gamma_hi_s, &xconn_s, omega_s, &psi_s, &dpsi_base).e.v;
        // Σ_α ∂_α(∂L_d/∂ψ^I_α)
        let mut div = 0.0;
        for a in 0..4 {
            let mut dpsi_s = dpsi_base;
            dpsi_s[a][i] = Dual::new(dpsi_base[a][i].v, Grad4::constant(1.0));
            let momentum =
                dirac_lagrangian(&ghat_s, &gamma_hi_s, &xconn_s, omega_s, &psi_base, &dpsi_s).e;
            div += momentum.d[a];
        }
        el_ld_defect = el_ld_defect.max((dl_dpsi - div - delta_ld[i]).abs());
    }

    Ok(FieldVariation {
        delta_lm,
        delta_ld,
        el_lm_defect,
        el_ld_defect,
    })
}

type SG = Dual<Grad4>;

fn base_inputs(mj: &MetricJet) -> (Mat4<SG>, [Mat4<SG>; 4]) {
    let g: Mat4<SG> = core::array::from_fn(|a| {
        core::array::from_fn(|b| {
            Dual::constant(Grad4::new(mj.g[a][b], core::array::from_fn(|n| mj.dg[n][a][b])))
        })
    });
    let dg: [Mat4<SG>; 4] = core::array::from_fn(|e| {
        core::array::from_fn(|a| {
            core::array::from_fn(|b| {
                Dual::constant(Grad4::new(
                    mj.dg[e][a][b],
                    core::array::from_fn(|n| mj.ddg[n][e][a][b]),
                ))
            })
        })
    });
    (g, dg)
}

/// Symmetric ½-weight perturbation of entry (a, b): the off-diagonal
/// variable g_{ab} is seeded with weight ½ on each of (a,b) and (b,a),
/// calibrated so that ∂ω/∂g_{αβ} = ½g^{αβ}ω holds for all entries.
fn seed_entry(m: &mut Mat4<SG>, a: usize, b: usize) {
    if a == b {
        m[a][a].e = Grad4::constant(1.0);
    } else {
        m[a][b].e = Grad4::constant(0.5);
        m[b][a].e = Grad4::constant(0.5);
    }
}

/// Point data with one seeded metric-variation direction each: 10 for
/// the g_{αβ} values and 10×4 for the g_{αβε} derivative values.
pub struct MetricSeeds {
    /// g_seeded[s] for SYM_PAIRS[s]
    pub g_seeded: Vec<PointData<SG>>,
    /// dg_seeded[s][ε] for (SYM_PAIRS[s], ε)
    pub dg_seeded: Vec<[PointData<SG>; 4]>,
    /// ∂ω/∂g_{αβ} for each pair
    pub domega_dg: [f64; 10],
}

impl MetricSeeds {
    pub fn new(mj: &MetricJet) -> MetricSeeds {
        let (g0, dg0) = base_inputs(mj);
        let mut g_seeded = Vec::with_capacity(10);
        let mut dg_seeded = Vec::with_capacity(10);
        let mut domega_dg = [0.0; 10];
        for (s, &(a, b)) in SYM_PAIRS.iter().enumerate() {
            let mut g = g0;
            seed_entry(&mut g, a, b);
            domega_dg[s] = omega_of(&g).e.v;
            g_seeded.push(point_data::<SG>(g, dg0));
            dg_seeded.push(core::array::from_fn(|e| {
                let mut dg = dg0;
                seed_entry(&mut dg[e], a, b);
                point_data::<SG>(g0, dg)
            }));
        }
        MetricSeeds {
            g_seeded,
            dg_seeded,
            domega_dg,
        }
    }
}

fn dual_e16(m: &Mat16<SG>) -> Mat16<f64> {
    core::array::from_fn(|i| core::array::from_fn(|j| m[i][j].e.v))
}

/// A^{αβ} = ½g^{αβ}ĝ + ∂ĝ/∂g_{αβ}, indexed by SYM_PAIRS.
pub fn metric_variation_a(gp: &GeometryPoint, seeds: &MetricSeeds) -> [Mat16<f64>; 10] {
    core::array::from_fn(|s| {
        let (a, b) = SYM_PAIRS[s];
        let dghat = dual_e16(&seeds.g_seeded[s].ctx.ghat);
        mat16_add(&mat16_scale(&gp.ctx.ghat, 0.5 * gp.mj.g_inv[a][b]), &dghat)
    })
}

/// (P^{αβ}, Q^{αβε} numeric), both indexed by SYM_PAIRS (with Q also
/// carrying the free index ε).
pub fn metric_variation_pq(
    gp: &GeometryPoint,
    seeds: &MetricSeeds,
) -> ([Mat16<f64>; 10], [[Mat16<f64>; 4]; 10]) {
    let ghat = &gp.ctx.ghat;
    let mut p = [mat16_zero::<f64>(); 10];
    let mut q = [[mat16_zero::<f64>(); 4]; 10];
    for s in 0..10 {
        // ∂Γ̂_ν/∂g_{αβ} and ∂γ^ε/∂g_{αβ}
        let dxconn_dg: [Mat16<f64>; 4] =
            core::array::from_fn(|n| dual_e16(&seeds.g_seeded[s].xconn[n]));
        let dgamma_dg: [Mat16<f64>; 4] =
            core::array::from_fn(|e| dual_e16(&seeds.g_seeded[s].ctx.gamma_hi[e]));
        // E[ε][ν] = ∂Γ̂_ν/∂g_{αβε}, with coordinate derivatives
        let mut acc_p = mat16_zero::<f64>();
        for n in 0..4 {
            acc_p = mat16_add(
                &acc_p,
                &mat16_mul(&mat16_mul(ghat, &gp.ctx.gamma_hi[n]), &dxconn_dg[n]),
            );
        }
        for e in 0..4 {
            let pd = &seeds.dg_seeded[s][e];
            let mut q_term = mat16_zero::<f64>();
            for n in 0..4 {
                let e_nu = dual_e16(&pd.xconn[n]);
                let de_nu: Mat16<f64> =
                    core::array::from_fn(|i| core::array::from_fn(|j| pd.xconn[n][i][j].e.d[e]));
                let gh_gam = mat16_mul(ghat, &gp.ctx.gamma_hi[n]);
                // trace term −Γ^μ_{με} ĝγ^ν E
                let mut tr = 0.0;
                for m in 0..4 {
                    tr += gp.conn.gamma2[m][m][e];
                }
                acc_p = mat16_sub(&acc_p, &mat16_scale(&mat16_mul(&gh_gam, &e_nu), tr));
                // −ĝ_{,ε}γ^ν E − ĝγ^ν_{,ε} E − ĝγ^ν ∂_ε E
                acc_p = mat16_sub(
                    &acc_p,
                    &mat16_mul(&mat16_mul(&gp.dghat[e], &gp.ctx.gamma_hi[n]), &e_nu),
                );
                acc_p = mat16_sub(
                    &acc_p,
                    &mat16_mul(&mat16_mul(ghat, &gp.dgamma_hi[e][n]), &e_nu),
                );
                acc_p = mat16_sub(&acc_p, &mat16_mul(&gh_gam, &de_nu));
                // +Γ̂_ε^T ĝγ^ν E + ĝγ^ν E Γ̂_ε
                acc_p = mat16_add(
                    &acc_p,
                    &mat16_mul(
                        &mat16_mul(&mat16_transpose(&gp.xconn[e]), &gh_gam),
                        &e_nu,
                    ),
                );
                acc_p = mat16_add(&acc_p, &mat16_mul(&mat16_mul(&gh_gam, &e_nu), &gp.xconn[e]));
                // ∂/∂g_{αβε}(ĝγ^νΓ̂_ν + transpose) = ĝγ^νE_ν + (ĝγ^νE_ν)^T
                let t = mat16_mul(&gh_gam, &e_nu);
                q_term = mat16_add(&q_term, &mat16_add(&t, &mat16_transpose(&t)));
            }
            q[s][e] = mat16_sub(&mat16_mul(ghat, &dgamma_dg[e]), &q_term);
        }
        p[s] = acc_p;
    }
    (p, q)
}

/// K(αβε) of the closed form, a diagonal ±1 matrix.
pub fn k_matrix(ctx: &CliffordContext<f64>, a: usize, b: usize, e: usize) -> Mat16<f64> {
    use crate::multivector::{basis_index, complement_index};
    let reflect2 = |p: usize, q: usize| -> Mat16<f64> {
        let mut s = mat4_zero::<f64>();
        for i in 0..4 {
            s[i][i] = if i == p || i == q { -1.0 } else { 1.0 };
        }
        ctx.extend_map(&s)
    };
    let neg = |m: &Mat16<f64>| mat16_scale(m, -1.0);
    if a == b {
        if e == a {
            return crate::linalg::mat16_identity::<f64>();
        }
        return reflect2(a, e);
    }
    if e == a {
        return neg(&crate::linalg::mat16_identity::<f64>());
    }
    if e == b {
        return neg(&reflect2(a, b));
    }
    // distinct indices: reflection of the 4-plane spanned by e_{aε},
    // e_{aε*}, e_b, e_{b*}
    let mut s = crate::linalg::mat16_identity::<f64>();
    let mut ae = [a, e];
    ae.sort_unstable();
    let i1 = basis_index(&ae);
    for i in [i1, complement_index(i1), basis_index(&[b]), complement_index(basis_index(&[b]))] {
        s[i][i] = -1.0;
    }
    neg(&s)
}

/// Eq.-(Q) closed form for diagonal metrics:
/// Q^{αβε} = −½ĝK(αβε)γ^αγ^βγ^ε for α ≤ β.
pub fn closed_form_q(gp: &GeometryPoint) -> Result<[[Mat16<f64>; 4]; 10]> {
    for a in 0..4 {
        for b in 0..4 {
            if a != b && gp.mj.g[a][b] != 0.0 {
                return Err(crate::error::Error::UnsupportedMetric(
                    "closed-form Q requires a diagonal metric",
                ));
            }
        }
    }
    let mut out = [[mat16_zero::<f64>(); 4]; 10];
    for (s, &(a, b)) in SYM_PAIRS.iter().enumerate() {
        for e in 0..4 {
            let k = k_matrix(&gp.ctx, a, b, e);
            let m = mat16_mul(
                &mat16_mul(
                    &mat16_mul(&mat16_mul(&gp.ctx.ghat, &k), &gp.ctx.gamma_hi[a]),
                    &gp.ctx.gamma_hi[b],
                ),
                &gp.ctx.gamma_hi[e],
            );
            out[s][e] = mat16_scale(&m, -0.5);
        }
    }
    Ok(out)
}

pub struct EinsteinCoupling {
    pub g_lo: Mat4<f64>,
    pub source_lo: Mat4<f64>,
    pub residual: Mat4<f64>,
    /// max over α ≤ β of |numeric δ(L_d + μL_m)/δg_{αβ} −
    /// ω(ψ^TA^{αβ}(Dψ + μψ) + ψ^TP^{αβ}ψ + ψ^TQ^{αβε}∇_εψ)|
    pub identity_defect: f64,
}

/// Eq.-(einstein) sides plus the numeric total-variation identity; the
/// gravity term enters through its closed form δL_g/δg = −8ωG^{αβ}, so
/// the identity reduces to matching the matter-sector variations.
pub fn einstein_coupling(
    gp: &GeometryPoint,
    seeds: &MetricSeeds,
    field: &SpinorPolyField,
    cfg: &VariationConfig,
) -> Result<EinsteinCoupling> {
    let sj = field.eval(&gp.mj.x)?;
    let w = gp.mj.omega;
    let a_mats = metric_variation_a(gp, seeds);
    let (p_mats, q_mats) = metric_variation_pq(gp, seeds);
    let dp = dirac_operator(&gp.ctx, &gp.xconn, &sj.psi, &sj.dpsi);
    let nabla: [Mv<f64>; 4] =
        core::array::from_fn(|e| mv_add(&sj.dpsi[e], &mat16_vec(&gp.xconn[e], &sj.psi)));

    // source^{αβ} = (1/8κ)(ψ^TA^{αβ}(Dψ+μψ) + ψ^TQ^{αβε}∇_εψ), then
    // lower indices
    let dirac_res = mv_add(&dp, &mv_scale(&sj.psi, cfg.mu));
    let mut source_hi = mat4_zero::<f64>();
    for (s, &(a, b)) in SYM_PAIRS.iter().enumerate() {
        let mut v = bilinear(&a_mats[s], &sj.psi, &dirac_res);
        for e in 0..4 {
            v += bilinear(&q_mats[s][e], &sj.psi, &nabla[e]);
        }
        v /= 8.0 * cfg.kappa;
        source_hi[a][b] = v;
        source_hi[b][a] = v;
    }
    let mut source_lo = mat4_zero::<f64>();
    for a in 0..4 {
        for b in 0..4 {
            for r in 0..4 {
                for c in 0..4 {
                    source_lo[a][b] += gp.mj.g[a][r] * gp.mj.g[b][c] * source_hi[r][c];
                }
            }
        }
    }
    let g_lo = gp.curv.einstein_lo;
    let mut residual = mat4_zero::<f64>();
    for a in 0..4 {
        for b in 0..4 {
            residual[a][b] = g_lo[a][b] - source_lo[a][b];
        }
    }

    // numeric total variation of L_d + μL_m through the seeded builds
    let psi_s: Mv<SG> = core::array::from_fn(|k| {
        Dual::constant(Grad4::new(sj.psi[k], core::array::from_fn(|n| sj.dpsi[n][k])))
    });
    let dpsi_s: [Mv<SG>; 4] = core::array::from_fn(|a| {
        core::array::from_fn(|k| {
            Dual::constant(Grad4::new(
                sj.dpsi[a][k],
                core::array::from_fn(|n| sj.ddpsi[n][a][k]),
            ))
        })
    });
    let matter = |pd: &PointData<SG>, omega: SG| -> SG {
        let ld = dirac_lagrangian(&pd.ctx.ghat, &pd.ctx.gamma_hi, &pd.xconn, omega, &psi_s, &dpsi_s);
        let lm = omega * bilinear(&pd.ctx.ghat, &psi_s, &psi_s);
        ld + lm * SG::from_f64(cfg.mu)
    };
    let mut identity_defect: f64 = 0.0;
    for s in 0..10 {
        // ∂L/∂g_{αβ}: reseed ω with the same direction
        let (mut g, _) = base_inputs(&gp.mj);
        let (a, b) = SYM_PAIRS[s];
        seed_entry(&mut g, a, b);
        let numeric_partial = matter(&seeds.g_seeded[s], omega_of(&g)).e.v;
        // Σ_ε ∂_ε(∂L_d/∂g_{αβε}); L_m has no g_{αβε} dependence
        let omega_const = Dual::constant(Grad4::new(gp.mj.omega, gp.mj.domega));
        let mut div = 0.0;
        for e in 0..4 {
            div += matter(&seeds.dg_seeded[s][e], omega_const).e.d[e];
        }
        let numeric = numeric_partial - div;
        let mut closed = bilinear(&a_mats[s], &sj.psi, &dirac_res)
            + bilinear(&p_mats[s], &sj.psi, &sj.psi);
        for e in 0..4 {
            closed += bilinear(&q_mats[s][e], &sj.psi, &nabla[e]);
        }
        identity_defect = identity_defect.max((numeric - w * closed).abs());
    }

    Ok(EinsteinCoupling {
        g_lo,
        source_lo,
        residual,
        identity_defect,
    })
}
