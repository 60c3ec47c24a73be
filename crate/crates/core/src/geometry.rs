//! Connections and curvatures, classical and extended, the Dirac
//! operator, and the spin-connection comparator. Everything is generic
//! over the scalar type so that coordinate derivatives (and, later,
//! metric-variation partials) come from seeded rebuilds instead of
//! finite differences.

use alloc::vec::Vec;

use crate::algebra::{CliffordContext, MetricPoint};
use crate::error::{Error, Result};
use crate::linalg::{
    mat16_add, mat16_commutator, mat16_scale, mat16_sub, mat16_vec, mat16_zero, mat4_inv, Mat16,
    Mat4,
};
use crate::metric::MetricJet;
use crate::multivector::{mv_add, mv_basis, mv_scale, mv_zero, Mv, BASIS};
use crate::scalar::{Grad4, Scalar};

/// Christoffel symbols of the first and second kind at a point.
#[derive(Clone, Debug)]
pub struct ConnectionPoint<T> {
    /// gamma1[nu][alpha][beta] = Γ_{ναβ}
    pub gamma1: [[[T; 4]; 4]; 4],
    /// gamma2[mu][alpha][beta] = Γ^μ_{αβ}
    pub gamma2: [[[T; 4]; 4]; 4],
}

/// Γ_{ναβ} = ½(g_{να,β} − g_{αβ,ν} + g_{βν,α}), Γ^μ_{αβ} = g^{μν}Γ_{ναβ}.
pub fn christoffel<T: Scalar>(g_inv: &Mat4<T>, dg: &[Mat4<T>; 4]) -> ConnectionPoint<T> {
    let half = T::from_f64(0.5);
    let mut gamma1 = [[[T::zero(); 4]; 4]; 4];
    for nu in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                gamma1[nu][a][b] = half * (dg[b][nu][a] - dg[nu][a][b] + dg[a][b][nu]);
            }
        }
    }
    let mut gamma2 = [[[T::zero(); 4]; 4]; 4];
    for mu in 0..4 {
        for a in 0..4 {
            for b in 0..4 {
                let mut s = T::zero();
                for nu in 0..4 {
                    s = s + g_inv[mu][nu] * gamma1[nu][a][b];
                }
                gamma2[mu][a][b] = s;
            }
        }
    }
    ConnectionPoint { gamma1, gamma2 }
}

/// Column I of Γ̂_μ: Leibniz over the factors of e_I, replacing each
/// generator e_α by Γ^β_{μα} e_β and expanding in the canonical basis.
pub fn extended_christoffel<T: Scalar>(
    ctx: &CliffordContext<T>,
    cp: &ConnectionPoint<T>,
) -> [Mat16<T>; 4] {
    let mut xconn = [mat16_zero::<T>(); 4];
    for mu in 0..4 {
        for i in 0..16 {
            let word = BASIS[i];
            let mut col: Mv<T> = mv_zero();
            for j in 0..word.len() {
                for beta in 0..4 {
                    let coef = cp.gamma2[beta][mu][word[j]];
                    // product of the word with slot j replaced by e_beta
                    let mut m: Mv<T> = mv_basis(0);
                    for (k, &a) in word.iter().enumerate() {
                        let gen = if k == j { beta } else { a };
                        let factor: Mv<T> = mv_basis(crate::multivector::basis_index(&[gen]));
                        m = ctx.product(&m, &factor);
                    }
                    col = mv_add(&col, &mv_scale(&m, coef));
                }
            }
            for row in 0..16 {
                xconn[mu][row][i] = col[row];
            }
        }
    }
    xconn
}

/// Everything derivable from (g, dg) at one point, over any scalar.
pub struct PointData<T: Scalar> {
    pub ctx: CliffordContext<T>,
    pub conn: ConnectionPoint<T>,
    pub xconn: [Mat16<T>; 4],
}

pub fn point_data<T: Scalar>(g: Mat4<T>, dg: [Mat4<T>; 4]) -> PointData<T> {
    let g_inv = mat4_inv(&g);
    let conn = christoffel(&g_inv, &dg);
    let ctx = CliffordContext::from_metric(MetricPoint { g, g_inv });
    let xconn = extended_christoffel(&ctx, &conn);
    PointData { ctx, conn, xconn }
}

/// Ω̂_{αβ} = ∂_αΓ̂_β − ∂_βΓ̂_α + [Γ̂_α, Γ̂_β].
pub fn extended_curvature(
    xconn: &[Mat16<f64>; 4],
    dxconn: &[[Mat16<f64>; 4]; 4],
) -> [[Mat16<f64>; 4]; 4] {
    let mut omega = [[mat16_zero::<f64>(); 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            omega[a][b] = mat16_add(
                &mat16_sub(&dxconn[a][b], &dxconn[b][a]),
                &mat16_commutator(&xconn[a], &xconn[b]),
            );
        }
    }
    omega
}

/// Classical curvature data at a point.
#[derive(Clone, Debug)]
pub struct CurvaturePoint {
    /// riemann[rho][sigma][alpha][beta] = R^ρ_{σαβ}
    pub riemann: [[[[f64; 4]; 4]; 4]; 4],
    pub ricci: Mat4<f64>,
    pub scalar: f64,
    pub einstein_lo: Mat4<f64>,
    pub einstein_hi: Mat4<f64>,
}

pub fn riemann_ricci(
    g: &Mat4<f64>,
    g_inv: &Mat4<f64>,
    gamma2: &[[[f64; 4]; 4]; 4],
    dgamma2: &[[[[f64; 4]; 4]; 4]; 4],
) -> CurvaturePoint {
    let mut riemann = [[[[0.0; 4]; 4]; 4]; 4];
    for r in 0..4 {
        for s in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    let mut v = dgamma2[a][r][b][s] - dgamma2[b][r][a][s];
                    for l in 0..4 {
                        v += gamma2[r][a][l] * gamma2[l][b][s] - gamma2[r][b][l] * gamma2[l][a][s];
                    }
                    riemann[r][s][a][b] = v;
                }
            }
        }
    }
    let mut ricci = [[0.0; 4]; 4];
    for s in 0..4 {
        for b in 0..4 {
            for r in 0..4 {
                ricci[s][b] += riemann[r][s][r][b];
            }
        }
    }
    let mut scalar = 0.0;
    for s in 0..4 {
        for b in 0..4 {
            scalar += g_inv[s][b] * ricci[s][b];
        }
    }
    let mut einstein_lo = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            einstein_lo[a][b] = ricci[a][b] - 0.5 * g[a][b] * scalar;
        }
    }
    let mut einstein_hi = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    einstein_hi[a][b] += g_inv[a][c] * g_inv[b][d] * einstein_lo[c][d];
                }
            }
        }
    }
    CurvaturePoint {
        riemann,
        ricci,
        scalar,
        einstein_lo,
        einstein_hi,
    }
}

/// Dψ = γ^α(∂_αψ + Γ̂_αψ).
pub fn dirac_operator<T: Scalar>(
    ctx: &CliffordContext<T>,
    xconn: &[Mat16<T>; 4],
    psi: &Mv<T>,
    dpsi: &[Mv<T>; 4],
) -> Mv<T> {
    let mut out: Mv<T> = mv_zero();
    for a in 0..4 {
        let nabla = mv_add(&dpsi[a], &mat16_vec(&xconn[a], psi));
        out = mv_add(&out, &mat16_vec(&ctx.gamma_hi[a], &nabla));
    }
    out
}

fn split_grad4_mat16(m: &Mat16<Grad4>) -> (Mat16<f64>, [Mat16<f64>; 4]) {
    let mut v = mat16_zero::<f64>();
    let mut d = [mat16_zero::<f64>(); 4];
    for i in 0..16 {
        for j in 0..16 {
            v[i][j] = m[i][j].v;
            for nu in 0..4 {
                d[nu][i][j] = m[i][j].d[nu];
            }
        }
    }
    (v, d)
}

/// Seed the metric jet into Grad4 scalars: values carry g (resp. dg),
/// gradients carry dg (resp. ddg).
pub fn grad4_seeds(mj: &MetricJet) -> (Mat4<Grad4>, [Mat4<Grad4>; 4]) {
    let mut g4 = [[Grad4::constant(0.0); 4]; 4];
    let mut dg4 = [[[Grad4::constant(0.0); 4]; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            g4[a][b] = Grad4::new(
                mj.g[a][b],
                core::array::from_fn(|nu| mj.dg[nu][a][b]),
            );
            for nu in 0..4 {
                dg4[nu][a][b] = Grad4::new(
                    mj.dg[nu][a][b],
                    core::array::from_fn(|mu| mj.ddg[mu][nu][a][b]),
                );
            }
        }
    }
    (g4, dg4)
}

/// Full geometric state at one point: f64 values of every object plus
/// their coordinate derivatives, extracted from one Grad4 rebuild.
pub struct GeometryPoint {
    pub mj: MetricJet,
    pub ctx: CliffordContext<f64>,
    pub conn: ConnectionPoint<f64>,
    /// dgamma2[eps][mu][alpha][beta] = ∂_ε Γ^μ_{αβ}
    pub dgamma2: [[[[f64; 4]; 4]; 4]; 4],
    pub xconn: [Mat16<f64>; 4],
    /// dxconn[nu][alpha] = ∂_ν Γ̂_α
    pub dxconn: [[Mat16<f64>; 4]; 4],
    /// dghat[nu] = ∂_ν ĝ
    pub dghat: [Mat16<f64>; 4],
    /// dgamma_lo[nu][alpha] = ∂_ν γ_α
    pub dgamma_lo: [[Mat16<f64>; 4]; 4],
    /// dgamma_hi[nu][alpha] = ∂_ν γ^α
    pub dgamma_hi: [[Mat16<f64>; 4]; 4],
    /// xcurv[alpha][beta] = Ω̂_{αβ}
    pub xcurv: [[Mat16<f64>; 4]; 4],
    pub curv: CurvaturePoint,
}

impl GeometryPoint {
    pub fn new(mj: &MetricJet) -> GeometryPoint {
        let (g4, dg4) = grad4_seeds(mj);
        let pd = point_data::<Grad4>(g4, dg4);

        let mut conn = ConnectionPoint {
            gamma1: [[[0.0; 4]; 4]; 4],
            gamma2: [[[0.0; 4]; 4]; 4],
        };
        let mut dgamma2 = [[[[0.0; 4]; 4]; 4]; 4];
        for mu in 0..4 {
            for a in 0..4 {
                for b in 0..4 {
                    conn.gamma1[mu][a][b] = pd.conn.gamma1[mu][a][b].v;
                    conn.gamma2[mu][a][b] = pd.conn.gamma2[mu][a][b].v;
                    for e in 0..4 {
                        dgamma2[e][mu][a][b] = pd.conn.gamma2[mu][a][b].d[e];
                    }
                }
            }
        }

        let mut xconn = [mat16_zero::<f64>(); 4];
        let mut dxconn = [[mat16_zero::<f64>(); 4]; 4];
        for a in 0..4 {
            let (v, d) = split_grad4_mat16(&pd.xconn[a]);
            xconn[a] = v;
            for nu in 0..4 {
                dxconn[nu][a] = d[nu];
            }
        }
        let (_, dghat) = split_grad4_mat16(&pd.ctx.ghat);
        let mut dgamma_lo = [[mat16_zero::<f64>(); 4]; 4];
        let mut dgamma_hi = [[mat16_zero::<f64>(); 4]; 4];
        for a in 0..4 {
            let (_, d) = split_grad4_mat16(&pd.ctx.gamma_lo[a]);
            for nu in 0..4 {
                dgamma_lo[nu][a] = d[nu];
            }
            let (_, d) = split_grad4_mat16(&pd.ctx.gamma_hi[a]);
            for nu in 0..4 {
                dgamma_hi[nu][a] = d[nu];
            }
        }

        let ctx = CliffordContext::from_metric(MetricPoint {
            g: mj.g,
            g_inv: mj.g_inv,
        });
        let xcurv = extended_curvature(&xconn, &dxconn);
        let curv = riemann_ricci(&mj.g, &mj.g_inv, &conn.gamma2, &dgamma2);

        GeometryPoint {
            mj: mj.clone(),
            ctx,
            conn,
            dgamma2,
            xconn,
            dxconn,
            dghat,
            dgamma_lo,
            dgamma_hi,
            xcurv,
            curv,
        }
    }

    /// tr(γ^αγ^βΩ̂_{αβ}), the extended-curvature scalar (= −8R on
    /// diagonal metrics).
    pub fn curvature_trace(&self) -> f64 {
        let mut s = 0.0;
        for a in 0..4 {
            for b in 0..4 {
                let gg = crate::linalg::mat16_mul(&self.ctx.gamma_hi[a], &self.ctx.gamma_hi[b]);
                let m = crate::linalg::mat16_mul(&gg, &self.xcurv[a][b]);
                s += crate::linalg::mat16_trace(&m);
            }
        }
        s
    }
}

/// Diagonal vierbein data: e_μ^a = √|g_μμ| δ_μ^a and its derivatives.
pub struct VierbeinPoint {
    pub e: Mat4<f64>,
    /// de[nu][mu][a] = ∂_ν e_μ^a
    pub de: [Mat4<f64>; 4],
    pub eta: Mat4<f64>,
    pub gamma_flat: [Mat16<f64>; 4],
}

pub fn vierbein(mj: &MetricJet) -> Result<VierbeinPoint> {
    for a in 0..4 {
        for b in 0..4 {
            if a != b && (mj.g[a][b] != 0.0 || (0..4).any(|nu| mj.dg[nu][a][b] != 0.0)) {
                return Err(Error::UnsupportedMetric(
                    "diagonal vierbein requires a diagonal metric",
                ));
            }
        }
    }
    let mut e = [[0.0; 4]; 4];
    let mut de = [[[0.0; 4]; 4]; 4];
    for mu in 0..4 {
        let sign = if mu == 0 { -1.0 } else { 1.0 };
        let root = libm::sqrt(sign * mj.g[mu][mu]);
        e[mu][mu] = root;
        for nu in 0..4 {
            de[nu][mu][mu] = sign * mj.dg[nu][mu][mu] / (2.0 * root);
        }
    }
    let flat = CliffordContext::from_metric(MetricPoint {
        g: crate::algebra::MINKOWSKI,
        g_inv: crate::algebra::MINKOWSKI,
    });
    let mut eta = [[0.0; 4]; 4];
    eta[0][0] = -1.0;
    for i in 1..4 {
        eta[i][i] = 1.0;
    }
    Ok(VierbeinPoint {
        e,
        de,
        eta,
        gamma_flat: flat.gamma_lo,
    })
}

/// Γ^{(s)}_μ = ⅛([γ^ν, ∂_μγ_ν] − Γ^ρ_{νμ}[γ^ν, γ_ρ]) with γ_μ = e_μ^a γ_a.
pub fn spin_connection(mj: &MetricJet, cp: &ConnectionPoint<f64>) -> Result<[Mat16<f64>; 4]> {
    let vb = vierbein(mj)?;
    // gamma_lo[nu] = e_nu^nu * gamma_flat[nu] (diagonal vierbein)
    let gamma_lo: Vec<Mat16<f64>> = (0..4)
        .map(|nu| mat16_scale(&vb.gamma_flat[nu], vb.e[nu][nu]))
        .collect();
    // dgamma_lo[mu][nu] = ∂_mu gamma_nu
    let dgamma_lo: Vec<Vec<Mat16<f64>>> = (0..4)
        .map(|mu| {
            (0..4)
                .map(|nu| mat16_scale(&vb.gamma_flat[nu], vb.de[mu][nu][nu]))
                .collect()
        })
        .collect();
    // gamma^nu = g^{nu nu} gamma_nu (diagonal metric)
    let gamma_hi: Vec<Mat16<f64>> = (0..4)
        .map(|nu| mat16_scale(&gamma_lo[nu], mj.g_inv[nu][nu]))
        .collect();

    let mut out = [mat16_zero::<f64>(); 4];
    for mu in 0..4 {
        let mut acc = mat16_zero::<f64>();
        for nu in 0..4 {
            acc = mat16_add(&acc, &mat16_commutator(&gamma_hi[nu], &dgamma_lo[mu][nu]));
            for rho in 0..4 {
                let c = mat16_commutator(&gamma_hi[nu], &gamma_lo[rho]);
                acc = mat16_sub(&acc, &mat16_scale(&c, cp.gamma2[rho][nu][mu]));
            }
        }
        out[mu] = mat16_scale(&acc, 0.125);
    }
    Ok(out)
}
