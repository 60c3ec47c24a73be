//! Metric specifications: symmetric 4x4 arrays of expressions, their
//! pointwise jets, the plain-text file format, and the builtin catalog.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::expr::{parse_expression, Expression};
use crate::linalg::{mat4_det, mat4_inv, Mat4};
use crate::scalar::{Jet2, Scalar};

/// A metric given by expressions; symmetric by construction.
#[derive(Clone, Debug)]
pub struct MetricSpec {
    pub name: String,
    entries: [[Expression; 4]; 4],
    /// Per-coordinate sampling box avoiding coordinate singularities.
    pub domain: [[f64; 2]; 4],
}

fn zero_entries() -> [[Expression; 4]; 4] {
    core::array::from_fn(|_| core::array::from_fn(|_| Expression::zero()))
}

impl MetricSpec {
    pub fn new(name: &str) -> Self {
        MetricSpec {
            name: name.to_string(),
            entries: zero_entries(),
            domain: [[-1.0, 1.0]; 4],
        }
    }

    /// Set g[i][j]; the (j,i) entry is completed symmetrically. Setting
    /// both (i,j) and (j,i) to different expressions is an error.
    pub fn set(&mut self, i: usize, j: usize, e: Expression) -> Result<()> {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        if !self.entries[a][b].is_zero() && self.entries[a][b] != e {
            return Err(Error::ConflictingSymmetricEntry { i, j });
        }
        self.entries[a][b] = e.clone();
        self.entries[b][a] = e;
        Ok(())
    }

    pub fn entry(&self, i: usize, j: usize) -> &Expression {
        &self.entries[i][j]
    }

    /// True when every off-diagonal component is the literal zero.
    pub fn is_diagonal(&self) -> bool {
        for i in 0..4 {
            for j in 0..4 {
                if i != j && !self.entries[i][j].is_zero() {
                    return false;
                }
            }
        }
        true
    }

    pub fn jet(&self, x: &[f64; 4]) -> Result<MetricJet> {
        let mut jets: [[Jet2; 4]; 4] = [[Jet2::constant(0.0); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                jets[i][j] = self.entries[i][j].eval_jet(x)?;
            }
        }
        MetricJet::from_jets(&jets, *x)
    }
}

/// Metric value, first and second coordinate derivatives, inverse, and
/// the density omega at one point.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub x: [f64; 4],
    pub g: Mat4<f64>,
    /// dg[nu][a][b] = ∂_ν g_{ab}
    pub dg: [Mat4<f64>; 4],
    /// ddg[mu][nu][a][b] = ∂_μ ∂_ν g_{ab}
    pub ddg: [[Mat4<f64>; 4]; 4],
    pub g_inv: Mat4<f64>,
    pub omega: f64,
    pub domega: [f64; 4],
}

impl MetricJet {
    pub fn from_jets(jets: &[[Jet2; 4]; 4], x: [f64; 4]) -> Result<MetricJet> {
        let mut g = [[0.0; 4]; 4];
        let mut dg = [[[0.0; 4]; 4]; 4];
        let mut ddg = [[[[0.0; 4]; 4]; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                g[a][b] = jets[a][b].v;
                for nu in 0..4 {
                    dg[nu][a][b] = jets[a][b].d[nu];
                    for mu in 0..4 {
                        ddg[mu][nu][a][b] = jets[a][b].h[mu][nu];
                    }
                }
            }
        }
        let det = mat4_det(&g);
        if libm::fabs(det) < 1e-12 {
            return Err(Error::SingularMetric { det });
        }
        if det >= 0.0 {
            return Err(Error::NonLorentzian { det });
        }
        let g_inv = mat4_inv(&g);
        // omega = sqrt(-det g), with derivatives through the jet
        let det_jet = mat4_det(jets);
        let omega_jet = (-det_jet).sqrt();
        Ok(MetricJet {
            x,
            g,
            dg,
            ddg,
            g_inv,
            omega: omega_jet.v,
            domega: omega_jet.d,
        })
    }

    /// True when the off-diagonal metric values and first derivatives
    /// vanish at this point.
    pub fn is_diagonal_point(&self) -> bool {
        for a in 0..4 {
            for b in 0..4 {
                if a != b && (self.g[a][b] != 0.0) {
                    return false;
                }
            }
        }
        true
    }
}

/// Parse the line-oriented metric file format:
/// `name = <ident>`, `g[<i>][<j>] = <expression>`, `#` comments.
pub fn parse_metric_file(text: &str) -> Result<MetricSpec> {
    let mut spec = MetricSpec::new("unnamed");
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
        if lhs == "name" {
            spec.name = rhs.to_string();
            continue;
        }
        let (i, j) = parse_g_target(lhs).ok_or(Error::Parse {
            offset: line_start,
            expected: "'name' or 'g[i][j]' with i,j in 0..3".to_string(),
        })?;
        let e = parse_expression(rhs).map_err(|err| match err {
            Error::Parse {
                offset: o,
                expected,
            } => Error::Parse {
                offset: line_start + eq + 1 + (line.len() - line.trim_start().len()) + o,
                expected,
            },
            other => other,
        })?;
        spec.set(i, j, e)?;
    }
    Ok(spec)
}

fn parse_g_target(s: &str) -> Option<(usize, usize)> {
    let s = s.strip_prefix('g')?;
    let s = s.strip_prefix('[')?;
    let close = s.find(']')?;
    let i: usize = s[..close].parse().ok()?;
    let s = s[close + 1..].strip_prefix('[')?;
    let close = s.find(']')?;
    let j: usize = s[..close].parse().ok()?;
    if s[close + 1..].trim().is_empty() && i < 4 && j < 4 {
        Some((i, j))
    } else {
        None
    }
}

/// Random polynomial of total degree <= 2 with coefficients in
/// [-scale, scale].
fn random_quadratic(rng: &mut ChaCha8Rng, scale: f64) -> Expression {
    let mut e = Expression::num(scale * (2.0 * rng.gen::<f64>() - 1.0));
    for i in 0..4 {
        let c = scale * (2.0 * rng.gen::<f64>() - 1.0);
        e = Expression::Add(
            e.into(),
            Expression::Mul(Expression::num(c).into(), Expression::Var(i).into()).into(),
        );
    }
    for i in 0..4 {
        for j in i..4 {
            let c = scale * (2.0 * rng.gen::<f64>() - 1.0);
            e = Expression::Add(
                e.into(),
                Expression::Mul(
                    Expression::num(c).into(),
                    Expression::Mul(Expression::Var(i).into(), Expression::Var(j).into()).into(),
                )
                .into(),
            );
        }
    }
    e
}

/// Builtin metric catalog. `diag-poly-random-<k>` and
/// `nondiag-perturb-<k>` for k = 1..5 are seeded random families; the
/// bare names alias k = 1.
pub fn builtin_metric(name: &str) -> Result<MetricSpec> {
    let expr = |s: &str| parse_expression(s).expect("builtin expression");
    match name {
        "minkowski" => {
            let mut m = MetricSpec::new("minkowski");
            m.set(0, 0, expr("-1"))?;
            for i in 1..4 {
                m.set(i, i, expr("1"))?;
            }
            m.domain = [[-1.0, 1.0]; 4];
            Ok(m)
        }
        // FLRW with scale factor a(t) = x0, flat spatial sections
        "flrw" => {
            let mut m = MetricSpec::new("flrw");
            m.set(0, 0, expr("-1"))?;
            for i in 1..4 {
                m.set(i, i, expr("x0^2"))?;
            }
            m.domain = [[0.5, 3.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]];
            Ok(m)
        }
        // Schwarzschild in diagonal coordinates (t, r, theta, phi), M = 1
        "schwarzschild" | "schwarzschild-diagonal" => {
            let mut m = MetricSpec::new("schwarzschild");
            m.set(0, 0, expr("-(1 - 2/x1)"))?;
            m.set(1, 1, expr("1/(1 - 2/x1)"))?;
            m.set(2, 2, expr("x1^2"))?;
            m.set(3, 3, expr("x1^2 * sin(x2)^2"))?;
            m.domain = [[0.0, 1.0], [3.0, 10.0], [0.6, 2.5], [0.0, 1.0]];
            Ok(m)
        }
        _ => {
            let (family, k) = split_seeded_name(name)?;
            let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 + k);
            match family {
                "diag-poly-random" => {
                    let mut m = MetricSpec::new(name);
                    // diagonal entries: constant +-1 plus a small random
                    // quadratic, Lorentzian throughout the unit box
                    m.set(
                        0,
                        0,
                        Expression::Sub(
                            Expression::num(-1.0).into(),
                            random_quadratic(&mut rng, 0.1).into(),
                        ),
                    )?;
                    for i in 1..4 {
                        m.set(
                            i,
                            i,
                            Expression::Add(
                                Expression::num(1.0).into(),
                                random_quadratic(&mut rng, 0.1).into(),
                            ),
                        )?;
                    }
                    m.domain = [[-0.5, 0.5]; 4];
                    Ok(m)
                }
                "nondiag-perturb" => {
                    let mut m = MetricSpec::new(name);
                    let eps = 0.05;
                    for i in 0..4 {
                        for j in i..4 {
                            let base = if i != j {
                                0.0
                            } else if i == 0 {
                                -1.0
                            } else {
                                1.0
                            };
                            m.set(
                                i,
                                j,
                                Expression::Add(
                                    Expression::num(base).into(),
                                    Expression::Mul(
                                        Expression::num(eps).into(),
                                        random_quadratic(&mut rng, 1.0).into(),
                                    )
                                    .into(),
                                ),
                            )?;
                        }
                    }
                    m.domain = [[-0.5, 0.5]; 4];
                    Ok(m)
                }
                _ => Err(Error::MetricNotFound(name.to_string())),
            }
        }
    }
}

fn split_seeded_name(name: &str) -> Result<(&str, u64)> {
    for family in ["diag-poly-random", "nondiag-perturb"] {
        if name == family {
            return Ok((family, 1));
        }
        if let Some(rest) = name.strip_prefix(family) {
            if let Some(num) = rest.strip_prefix('-') {
                if let Ok(k) = num.parse::<u64>() {
                    if (1..=5).contains(&k) {
                        return Ok((family, k));
                    }
                }
            }
        }
    }
    Err(Error::MetricNotFound(name.to_string()))
}

/// Full list of builtin metric names.
pub fn builtin_names() -> Vec<String> {
    let mut names = Vec::new();
    names.push("minkowski".to_string());
    names.push("flrw".to_string());
    names.push("schwarzschild".to_string());
    for k in 1..=5 {
        names.push(format!("diag-poly-random-{k}"));
    }
    for k in 1..=5 {
        names.push(format!("nondiag-perturb-{k}"));
    }
    names
}

/// Sample a point uniformly in the metric's safe box.
pub fn sample_point<R: Rng>(spec: &MetricSpec, rng: &mut R) -> [f64; 4] {
    core::array::from_fn(|i| {
        let [lo, hi] = spec.domain[i];
        lo + (hi - lo) * rng.gen::<f64>()
    })
}
