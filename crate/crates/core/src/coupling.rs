//! Minimal coupling: the total connection C_α = Γ̂_α + θ_α, the
//! admissibility conditions on θ, right-multiplication candidate
//! fields, and the gauge Lagrangian variants.

use alloc::boxed::Box;
use alloc::string::ToString;

use crate::algebra::CliffordContext;
use crate::error::{Error, Result};
use crate::expr::{parse_expression, Expression};
use crate::geometry::GeometryPoint;
use crate::linalg::{
    mat16_add, mat16_commutator, mat16_max_abs, mat16_mul, mat16_sub, mat16_trace, mat16_zero,
    trace_k, Mat16,
};
use crate::transforms::curvature_contraction;
use crate::variational::VariationConfig;

/// Four 16×16 matrices of expressions describing a force field θ_α.
pub struct ThetaField {
    pub entries: [Box<[[Expression; 16]; 16]>; 4],
}

pub type ThetaJet = ([Mat16<f64>; 4], [[Mat16<f64>; 4]; 4]);

impl ThetaField {
    pub fn zero() -> Self {
        ThetaField {
            entries: core::array::from_fn(|_| {
                Box::new(core::array::from_fn(|_| {
                    core::array::from_fn(|_| Expression::zero())
                }))
            }),
        }
    }

    pub fn constant(ms: &[Mat16<f64>; 4]) -> Self {
        ThetaField {
            entries: core::array::from_fn(|a| {
                Box::new(core::array::from_fn(|i| {
                    core::array::from_fn(|j| Expression::num(ms[a][i][j]))
                }))
            }),
        }
    }

    /// Scale each θ_α by a scalar expression f_α.
    pub fn scaled(ms: &[Mat16<f64>; 4], fs: &[Expression; 4]) -> Self {
        ThetaField {
            entries: core::array::from_fn(|a| {
                Box::new(core::array::from_fn(|i| {
                    core::array::from_fn(|j| {
                        if ms[a][i][j] == 0.0 {
                            Expression::zero()
                        } else {
                            Expression::Mul(
                                Box::new(Expression::num(ms[a][i][j])),
                                Box::new(fs[a].clone()),
                            )
                        }
                    })
                }))
            }),
        }
    }

    /// (θ_α, ∂_νθ_α) at x.
    pub fn eval(&self, x: &[f64; 4]) -> Result<ThetaJet> {
        let mut theta = [mat16_zero::<f64>(); 4];
        let mut dtheta = [[mat16_zero::<f64>(); 4]; 4];
        for a in 0..4 {
            for i in 0..16 {
                for j in 0..16 {
                    if self.entries[a][i][j].is_zero() {
                        continue;
                    }
                    let jet = self.entries[a][i][j].eval_jet(x)?;
                    theta[a][i][j] = jet.v;
                    for n in 0..4 {
                        dtheta[n][a][i][j] = jet.d[n];
                    }
                }
            }
        }
        Ok((theta, dtheta))
    }
}

/// Parse a θ field from lines `theta[a][i][j] = <expr>` with a in 0..3
/// indexing the connection slot; unset entries are zero.
pub fn parse_theta_file(text: &str) -> Result<ThetaField> {
    let mut field = ThetaField::zero();
    let mut offset = 0usize;
    for line in text.split('\n') {
        let line_start = offset;
        offset += line.len() + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let eq = trimmed.find('=').ok_or(Error::Parse {
            offset: line_start,
            expected: "'='".to_string(),
        })?;
        let (lhs, rhs) = (trimmed[..eq].trim(), trimmed[eq + 1..].trim());
        let idx = parse_theta_target(lhs).ok_or(Error::Parse {
            offset: line_start,
            expected: "'theta[a][i][j]' with a in 0..3, i,j in 0..15".to_string(),
        })?;
        let (a, i, j) = idx;
        field.entries[a][i][j] = parse_expression(rhs)?;
    }
    Ok(field)
}

fn parse_theta_target(lhs: &str) -> Option<(usize, usize, usize)> {
    let rest = lhs.strip_prefix("theta")?;
    let mut nums = [0usize; 3];
    let mut rest = rest;
    for slot in nums.iter_mut() {
        let inner = rest.strip_prefix('[')?;
        let close = inner.find(']')?;
        *slot = inner[..close].parse().ok()?;
        rest = &inner[close + 1..];
    }
    if !rest.is_empty() || nums[0] > 3 || nums[1] > 15 || nums[2] > 15 {
        return None;
    }
    Some((nums[0], nums[1], nums[2]))
}

/// C_α = Γ̂_α + θ_α.
pub fn total_connection(xconn: &[Mat16<f64>; 4], theta: &[Mat16<f64>; 4]) -> [Mat16<f64>; 4] {
    core::array::from_fn(|a| mat16_add(&xconn[a], &theta[a]))
}

pub struct AdmissibilityReport {
    /// ‖θ_α^Tĝ + ĝθ_α‖∞ per α
    pub antisym: [f64; 4],
    /// per_pair[α][β] = ‖[γ^α, θ_β]‖∞
    pub per_pair: [[f64; 4]; 4],
    /// ‖Σ_α [γ^α, θ_α]‖∞ (the repeated-index reading)
    pub summed: f64,
}

impl AdmissibilityReport {
    pub fn max_defect(&self) -> f64 {
        let mut m = self.summed;
        for a in 0..4 {
            m = m.max(self.antisym[a]);
            for b in 0..4 {
                m = m.max(self.per_pair[a][b]);
            }
        }
        m
    }
}

pub fn theta_admissible(ctx: &CliffordContext<f64>, theta: &[Mat16<f64>; 4]) -> AdmissibilityReport {
    let antisym = core::array::from_fn(|a| {
        let t = crate::linalg::mat16_transpose(&theta[a]);
        mat16_max_abs(&mat16_add(&mat16_mul(&t, &ctx.ghat), &mat16_mul(&ctx.ghat, &theta[a])))
    });
    let per_pair = core::array::from_fn(|a| {
        core::array::from_fn(|b| mat16_max_abs(&mat16_commutator(&ctx.gamma_hi[a], &theta[b])))
    });
    let mut sum = mat16_zero::<f64>();
    for a in 0..4 {
        sum = mat16_add(&sum, &mat16_commutator(&ctx.gamma_hi[a], &theta[a]));
    }
    AdmissibilityReport {
        antisym,
        per_pair,
        summed: mat16_max_abs(&sum),
    }
}

/// F_{αβ} = ∂_αC_β − ∂_βC_α + [C_α, C_β].
pub fn total_curvature(c: &[Mat16<f64>; 4], dc: &[[Mat16<f64>; 4]; 4]) -> [[Mat16<f64>; 4]; 4] {
    core::array::from_fn(|a| {
        core::array::from_fn(|b| {
            mat16_add(
                &mat16_sub(&dc[a][b], &dc[b][a]),
                &mat16_commutator(&c[a], &c[b]),
            )
        })
    })
}

pub struct GaugeLagrangians {
    pub tr_gamma_gamma_f: f64,
    pub tr_ff: f64,
    pub tr2_gamma_gamma_f: f64,
    /// ωτ^k tr_k(γ^αγ^βF_{αβ}) for k = 0..=16; their sum is
    /// ω det(I + τγ^αγ^βF_{αβ})
    pub det_expansion: [f64; 17],
}

pub fn gauge_lagrangians(
    gp: &GeometryPoint,
    theta_jet: &ThetaJet,
    cfg: &VariationConfig,
) -> GaugeLagrangians {
    let (theta, dtheta) = theta_jet;
    let c = total_connection(&gp.xconn, theta);
    let dc: [[Mat16<f64>; 4]; 4] =
        core::array::from_fn(|n| core::array::from_fn(|a| mat16_add(&gp.dxconn[n][a], &dtheta[n][a])));
    let f = total_curvature(&c, &dc);
    let w = gp.mj.omega;
    let m = curvature_contraction(&gp.ctx.gamma_hi, &f);

    let mut tr_ff = 0.0;
    for a in 0..4 {
        for b in 0..4 {
            let mut f_hi = mat16_zero::<f64>();
            for r in 0..4 {
                for s in 0..4 {
                    f_hi = mat16_add(
                        &f_hi,
                        &crate::linalg::mat16_scale(&f[r][s], gp.mj.g_inv[a][r] * gp.mj.g_inv[b][s]),
                    );
                }
            }
            tr_ff += mat16_trace(&mat16_mul(&f[a][b], &f_hi));
        }
    }

    let mut flat = [0.0f64; 256];
    for i in 0..16 {
        for j in 0..16 {
            flat[i * 16 + j] = m[i][j];
        }
    }
    let det_expansion: [f64; 17] = core::array::from_fn(|k| {
        let trk = if k == 0 { 1.0 } else { trace_k(&flat, 16, k).unwrap() };
        w * libm::pow(cfg.tau, k as f64) * trk
    });
    GaugeLagrangians {
        tr_gamma_gamma_f: w * mat16_trace(&m),
        tr_ff: w * tr_ff,
        tr2_gamma_gamma_f: w * trace_k(&flat, 16, 2).unwrap(),
        det_expansion,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MetricPoint;
    use crate::multivector::Mv;
    use crate::linalg::{mat16_scale, mat16_vec};
    use crate::metric::{builtin_metric, sample_point};
    use crate::multivector::{basis_index, mv_basis, mv_scale};
    use crate::transforms::{change_data_at, primed_xconn, MatrixField};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn geom(name: &str, x: &[f64; 4]) -> GeometryPoint {
        let spec = builtin_metric(name).unwrap();
        let mj = spec.jet(x).unwrap();
        GeometryPoint::new(&mj)
    }

    #[test]
    fn total_connection_basics() {
        let gp = geom("flrw", &[2.0, 0.1, 0.2, 0.3]);
        let zero = [mat16_zero::<f64>(); 4];
        let c = total_connection(&gp.xconn, &zero);
        for a in 0..4 {
            assert_eq!(c[a], gp.xconn[a]);
        }
        let mink = geom("minkowski", &[0.0; 4]);
        let theta: [Mat16<f64>; 4] = core::array::from_fn(|a| mink.ctx.right_mul(&mv_scale(&mv_basis(5), a as f64 + 1.0)));
        let c = total_connection(&mink.xconn, &theta);
        for a in 0..4 {
            assert_eq!(c[a], theta[a]);
        }
        // additivity
        let c2 = total_connection(&gp.xconn, &theta);
        let sum: [Mat16<f64>; 4] = core::array::from_fn(|a| mat16_add(&gp.xconn[a], &theta[a]));
        for a in 0..4 {
            assert_eq!(c2[a], sum[a]);
        }
    }

    #[test]
    fn admissibility_cases() {
        let gp = geom("minkowski", &[0.0; 4]);
        let zero = [mat16_zero::<f64>(); 4];
        let rep = theta_admissible(&gp.ctx, &zero);
        assert_eq!(rep.max_defect(), 0.0);
        // θ_α = right multiplication by e_12: passes both conditions
        let rho = gp.ctx.right_mul(&mv_basis(basis_index(&[1, 2])));
        let rep = theta_admissible(&gp.ctx, &[rho; 4]);
        assert!(rep.max_defect() < 1e-14, "{}", rep.max_defect());
        // θ_α = γ_0: fails the commutation condition
        let rep = theta_admissible(&gp.ctx, &[gp.ctx.gamma_lo[0]; 4]);
        let mut worst: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                worst = worst.max(rep.per_pair[a][b]);
            }
        }
        assert!(worst > 0.5);
    }

    #[test]
    fn right_multiplication_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(157);
        // exact commutation with every γ for all basis u, any metric
        for name in ["minkowski", "flrw", "nondiag-perturb-2", "schwarzschild"] {
            let spec = builtin_metric(name).unwrap();
            let x = sample_point(&spec, &mut rng);
            let mj = spec.jet(&x).unwrap();
            let ctx = CliffordContext::from_metric(MetricPoint {
                g: mj.g,
                g_inv: mj.g_inv,
            });
            for u in 0..16 {
                let rho = ctx.right_mul(&mv_basis(u));
                for a in 0..4 {
                    let d = mat16_max_abs(&mat16_commutator(&ctx.gamma_lo[a], &rho));
                    assert!(d < 1e-12, "{name} u={u} a={a}: {d}");
                }
            }
            // ρ_{e_∅} = Id
            let rho0 = ctx.right_mul(&mv_basis(0));
            assert!(mat16_max_abs(&mat16_sub(&rho0, &crate::linalg::mat16_identity())) < 1e-15);
        }
        // antisymmetry w.r.t. ĝ exactly when u† = −u (diagonal metrics)
        for name in ["minkowski", "flrw", "diag-poly-random-3"] {
            let spec = builtin_metric(name).unwrap();
            let x = sample_point(&spec, &mut rng);
            let mj = spec.jet(&x).unwrap();
            let ctx = CliffordContext::from_metric(MetricPoint {
                g: mj.g,
                g_inv: mj.g_inv,
            });
            for u in 0..16 {
                let uv = mv_basis::<f64>(u);
                let rho = ctx.right_mul(&uv);
                let defect = mat16_max_abs(&mat16_add(
                    &mat16_mul(&crate::linalg::mat16_transpose(&rho), &ctx.ghat),
                    &mat16_mul(&ctx.ghat, &rho),
                ));
                let dag = ctx.dagger(&uv);
                let anti = crate::linalg::vec16_max_abs(&crate::multivector::mv_add(&dag, &uv));
                if anti < 1e-12 {
                    assert!(defect < 1e-10, "{name} u={u}: {defect}");
                } else {
                    assert!(defect > 1e-3, "{name} u={u}: {defect}");
                }
            }
        }
    }

    #[test]
    fn curvature_antisymmetry_random_field() {
        let mut rng = ChaCha8Rng::seed_from_u64(163);
        let gp = geom("flrw", &[1.7, 0.3, -0.2, 0.5]);
        let mut field = ThetaField::zero();
        for a in 0..4 {
            for _ in 0..30 {
                let i = rng.gen_range(0..16);
                let j = rng.gen_range(0..16);
                let coef = Expression::num(rng.gen_range(-1.0..1.0));
                let var = Expression::Var(rng.gen_range(0..4));
                field.entries[a][i][j] =
                    Expression::Mul(Box::new(coef), Box::new(var));
            }
        }
        let tj = field.eval(&gp.mj.x).unwrap();
        let c = total_connection(&gp.xconn, &tj.0);
        let dc: [[Mat16<f64>; 4]; 4] = core::array::from_fn(|n| {
            core::array::from_fn(|a| mat16_add(&gp.dxconn[n][a], &tj.1[n][a]))
        });
        let f = total_curvature(&c, &dc);
        for a in 0..4 {
            for b in 0..4 {
                let d = mat16_max_abs(&mat16_add(&f[a][b], &f[b][a]));
                assert!(d < 1e-12, "({a},{b}): {d}");
            }
        }
    }

    #[test]
    fn gauge_lagrangians_flat_trivial() {
        let gp = geom("minkowski", &[0.1, 0.2, 0.3, 0.4]);
        let cfg = VariationConfig::default();
        let tj = ThetaField::zero().eval(&gp.mj.x).unwrap();
        let gl = gauge_lagrangians(&gp, &tj, &cfg);
        assert_eq!(gl.tr_gamma_gamma_f, 0.0);
        assert_eq!(gl.tr_ff, 0.0);
        assert_eq!(gl.tr2_gamma_gamma_f, 0.0);
        assert_eq!(gl.det_expansion[0], gp.mj.omega);
        for k in 1..17 {
            assert_eq!(gl.det_expansion[k], 0.0);
        }
    }

    #[test]
    fn commuting_theta_kills_minimal_gauge_term() {
        // flat spacetime, x-dependent right multiplications: F ≠ 0 but
        // tr(γ^αγ^βF_{αβ}) = 0 because F commutes with the gammas
        let gp = geom("minkowski", &[0.2, -0.1, 0.4, 0.3]);
        let cfg = VariationConfig::default();
        let ms: [Mat16<f64>; 4] = [
            gp.ctx.right_mul(&mv_basis(basis_index(&[1, 2]))),
            gp.ctx.right_mul(&mv_basis(basis_index(&[0]))),
            gp.ctx.right_mul(&mv_basis(basis_index(&[0, 1, 2]))),
            gp.ctx.right_mul(&mv_basis(basis_index(&[2, 3]))),
        ];
        let fs: [Expression; 4] = [
            parse_expression("0.7*x1").unwrap(),
            parse_expression("0.3*x0 + 0.2*x2").unwrap(),
            parse_expression("0.5*x3").unwrap(),
            parse_expression("0.4*x0*x1").unwrap(),
        ];
        let field = ThetaField::scaled(&ms, &fs);
        let tj = field.eval(&gp.mj.x).unwrap();
        let c = total_connection(&gp.xconn, &tj.0);
        let f = total_curvature(&c, &tj.1);
        let mut fmax: f64 = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                fmax = fmax.max(mat16_max_abs(&f[a][b]));
            }
        }
        assert!(fmax > 0.1, "field should be non-trivial: {fmax}");
        let gl = gauge_lagrangians(&gp, &tj, &cfg);
        assert!(gl.tr_gamma_gamma_f.abs() < 1e-10, "{}", gl.tr_gamma_gamma_f);
        assert!(gl.tr_ff.abs() > 1e-3);
    }

    #[test]
    fn det_expansion_sums_to_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(167);
        let gp = geom("flrw", &[1.4, 0.2, 0.1, -0.3]);
        let cfg = VariationConfig {
            tau: 0.05,
            ..Default::default()
        };
        let mut field = ThetaField::zero();
        for a in 0..4 {
            for _ in 0..20 {
                let i = rng.gen_range(0..16);
                let j = rng.gen_range(0..16);
                field.entries[a][i][j] = Expression::Mul(
                    Box::new(Expression::num(rng.gen_range(-0.5..0.5))),
                    Box::new(Expression::Var(rng.gen_range(0..4))),
                );
            }
        }
        let tj = field.eval(&gp.mj.x).unwrap();
        let gl = gauge_lagrangians(&gp, &tj, &cfg);
        // order-1 coefficient is ωτ tr(γγF)
        assert!((gl.det_expansion[1] - cfg.tau * gl.tr_gamma_gamma_f).abs() < 1e-12);
        // independent determinant: Gaussian elimination of I + τM
        let c = total_connection(&gp.xconn, &tj.0);
        let dc: [[Mat16<f64>; 4]; 4] = core::array::from_fn(|n| {
            core::array::from_fn(|a| mat16_add(&gp.dxconn[n][a], &tj.1[n][a]))
        });
        let f = total_curvature(&c, &dc);
        let m = curvature_contraction(&gp.ctx.gamma_hi, &f);
        let mut a = crate::linalg::mat16_identity::<f64>();
        for i in 0..16 {
            for j in 0..16 {
                a[i][j] += cfg.tau * m[i][j];
            }
        }
        let mut det = gp.mj.omega;
        for col in 0..16 {
            let mut piv = col;
            for r in (col + 1)..16 {
                if a[r][col].abs() > a[piv][col].abs() {
                    piv = r;
                }
            }
            if piv != col {
                a.swap(piv, col);
                det = -det;
            }
            det *= a[col][col];
            for r in (col + 1)..16 {
                let fac = a[r][col] / a[col][col];
                for cc in col..16 {
                    a[r][cc] -= fac * a[col][cc];
                }
            }
        }
        let sum: f64 = gl.det_expansion.iter().sum();
        assert!((sum - det).abs() < 1e-9, "{sum} vs {det}");
    }

    #[test]
    fn theta_transforms_by_xforce() {
        // θ' from Eq. (xforce) equals C' − Γ̂' with both connections
        // transformed by the Eq. (xchristoffel) law
        let raw = [
            ["1 + 0.1*x1", "0.05*x0", "0", "0"],
            ["0", "1 - 0.08*x2", "0.03*x0", "0"],
            ["0.04*x2", "0", "1 + 0.06*x3", "0"],
            ["0", "0.02*x1", "0", "1 + 0.05*x0"],
        ];
        let bf = MatrixField {
            entries: core::array::from_fn(|i| {
                core::array::from_fn(|j| parse_expression(raw[i][j]).unwrap())
            }),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(173);
        for name in ["flrw", "schwarzschild"] {
            let spec = builtin_metric(name).unwrap();
            let x = sample_point(&spec, &mut rng);
            let gp = geom(name, &x);
            let cd = change_data_at(&gp.mj, &bf).unwrap();
            let theta: [Mat16<f64>; 4] = core::array::from_fn(|a| {
                let mut m = mat16_zero::<f64>();
                for _ in 0..25 {
                    m[rng.gen_range(0..16)][rng.gen_range(0..16)] = rng.gen_range(-1.0..1.0);
                }
                let _ = a;
                m
            });
            let c = total_connection(&gp.xconn, &theta);
            let c_p = primed_xconn(&cd, &c);
            let xconn_p = primed_xconn(&cd, &gp.xconn);
            for a in 0..4 {
                // tensorial law
                let mut want = mat16_zero::<f64>();
                for b in 0..4 {
                    let m = mat16_mul(&mat16_mul(&cd.bhat, &theta[b]), &cd.bhat_inv);
                    want = mat16_add(&want, &mat16_scale(&m, cd.b_inv[b][a]));
                }
                let got = mat16_sub(&c_p[a], &xconn_p[a]);
                let d = mat16_max_abs(&mat16_sub(&got, &want));
                assert!(d < 1e-8, "{name} a={a}: {d}");
            }
        }
    }

    #[test]
    fn theta_file_roundtrip() {
        let text = "# a force field\ntheta[0][1][2] = 0.5*x0\ntheta[3][15][0] = sin(x1)\n";
        let field = parse_theta_file(text).unwrap();
        let x = [0.4, 0.7, 0.0, 0.0];
        let (theta, dtheta) = field.eval(&x).unwrap();
        assert!((theta[0][1][2] - 0.2).abs() < 1e-15);
        assert!((theta[3][15][0] - libm::sin(0.7)).abs() < 1e-15);
        assert!((dtheta[0][0][1][2] - 0.5).abs() < 1e-15);
        assert!((dtheta[1][3][15][0] - libm::cos(0.7)).abs() < 1e-15);
        assert!(parse_theta_file("theta[4][0][0] = 1").is_err());
        assert!(parse_theta_file("nonsense").is_err());
    }

    #[test]
    fn coupled_dirac_matches_shifted_connection() {
        // minimal coupling: using C in the Dirac operator equals adding
        // γ^αθ_αψ
        let gp = geom("flrw", &[2.2, 0.4, 0.1, 0.0]);
        let mut rng = ChaCha8Rng::seed_from_u64(179);
        let theta: [Mat16<f64>; 4] =
            core::array::from_fn(|_| gp.ctx.right_mul(&mv_basis(rng.gen_range(1..16))));
        let psi: Mv<f64> = core::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let dpsi: [Mv<f64>; 4] =
            core::array::from_fn(|_| core::array::from_fn(|_| rng.gen_range(-1.0..1.0)));
        let c = total_connection(&gp.xconn, &theta);
        let coupled = crate::geometry::dirac_operator(&gp.ctx, &c, &psi, &dpsi);
        let mut want = crate::geometry::dirac_operator(&gp.ctx, &gp.xconn, &psi, &dpsi);
        for a in 0..4 {
            want = crate::multivector::mv_add(
                &want,
                &mat16_vec(&mat16_mul(&gp.ctx.gamma_hi[a], &theta[a]), &psi),
            );
        }
        assert!(crate::linalg::vec16_max_abs(&crate::multivector::mv_sub(&coupled, &want)) < 1e-12);
    }

    #[test]
    fn admissible_theta_on_curved_metric() {
        // right multiplications stay admissible on curved diagonal
        // metrics under the per-pair reading
        let gp = geom("schwarzschild", &[0.5, 6.0, 1.2, 0.4]);
        let u = mv_basis::<f64>(basis_index(&[1, 2]));
        let dag = gp.ctx.dagger(&u);
        assert!(crate::linalg::vec16_max_abs(&crate::multivector::mv_add(&dag, &u)) < 1e-12);
        let rho = gp.ctx.right_mul(&u);
        let rep = theta_admissible(&gp.ctx, &[rho; 4]);
        assert!(rep.max_defect() < 1e-12, "{}", rep.max_defect());
    }
}
