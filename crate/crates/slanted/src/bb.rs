//! Lower-bound machinery for slanted sections.
//!
//! The pieces fit together as follows: the windowed commutator measures how
//! far a slanted matrix is from commuting with a tent window and its slope-
//! corrected dilate; the iteration constants a_{j,p}, b_{j,p} and the scale
//! sequence Z_j turn that commutator bound into a window-iteration
//! inequality; the certificate search walks a deterministic (delta, M, j)
//! grid until the assembled contraction factor drops below 1, at which
//! point a lower bound in one ell^p norm transfers to another with an
//! explicit constant. A descent estimator and an approximate null-vector
//! construction for slopes above 1 round out the toolbox.

use nalgebra::DMatrix;

use crate::cesaro::CesaroWindow;
use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::SlantedMatrix;
use crate::weight::Weight;
use crate::NormP;

/// Row selection for operator-norm measurements: everything, or only rows
/// further than `margin` from the window edge (where the section acts like
/// the bi-infinite extension).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RowRange {
    All,
    Interior { margin: i64 },
}

/// (2M)^{d+1} / (2N) * sup; the windowed commutator never exceeds this.
pub fn cesaro_commutator_bound(m_width: i64, n_scale: f64, d: u32, sup: f64) -> f64 {
    (2.0 * m_width as f64).powi(d as i32 + 1) / (2.0 * n_scale) * sup
}

/// Commutator budget aleph = (2M)^{d+1} sup / N, twice the commutator bound.
pub fn aleph(m_width: i64, n_scale: f64, d: u32, sup: f64) -> f64 {
    (2.0 * m_width as f64).powi(d as i32 + 1) / n_scale * sup
}

/// Operator q-norm of A Psi_n^N - Psi_{beta n}^{beta N} A on the section,
/// where beta = 1/alpha corrects the row window for the slope. Requires a
/// positive slope so the dilated window keeps a positive scale.
pub fn commutator_norm(
    a: &SlantedMatrix,
    center: i64,
    scale: u32,
    q: NormP,
    rows: RowRange,
) -> Result<f64> {
    if !a.slant().is_positive() {
        return Err(Error::InvalidSlant(format!(
            "commutator windows need a positive slope, got {}",
            a.slant()
        )));
    }
    if scale == 0 {
        return Err(Error::InvalidParameter("window scale must be positive".into()));
    }
    let col_window = CesaroWindow::new(center as f64, scale as f64)?;
    let beta = a.slant().recip().as_f64();
    let row_window = col_window.dilated(beta)?;
    let w = a.window();
    let row_cap = match rows {
        RowRange::All => w.half_width(),
        RowRange::Interior { margin } => {
            if margin < 0 || margin > w.half_width() {
                return Err(Error::InvalidParameter(format!(
                    "interior margin {margin} out of range for half-width {}",
                    w.half_width()
                )));
            }
            w.half_width() - margin
        }
    };
    let size = w.size();
    let mut dense = DMatrix::zeros(size, size);
    for (m, k, v) in a.entries() {
        if m.abs() > row_cap {
            continue;
        }
        let weight = col_window.eval(k as f64) - row_window.eval(m as f64);
        if weight == 0.0 {
            continue;
        }
        let mi = w.index_of(m).expect("row inside window");
        let ki = w.index_of(k).expect("column inside window");
        dense[(mi, ki)] = v * weight;
    }
    Ok(linalg::operator_norm(&dense, q))
}

/// Window growth sequence Z_j = 2^{j-1} N + (2^j - 2) M, j >= 1.
pub fn z_scale(j: u32, n_scale: f64, m_width: f64) -> f64 {
    debug_assert!(j >= 1);
    2.0_f64.powi(j as i32 - 1) * n_scale + (2.0_f64.powi(j as i32) - 2.0) * m_width
}

/// Iteration constants: a_{j,p} = (sum_{i<j} r^i) / gamma and b_{j,p} = r^j
/// with contraction ratio r = aleph / gamma.
pub fn iteration_coefficients(j: u32, gamma: f64, aleph: f64) -> (f64, f64) {
    debug_assert!(gamma > 0.0);
    let r = aleph / gamma;
    let mut geom = 0.0;
    let mut power = 1.0;
    for _ in 0..j {
        geom += power;
        power *= r;
    }
    (geom / gamma, power)
}

/// Deterministic budget for the certificate search.
#[derive(Clone, Debug)]
pub struct CertificateSearch {
    /// Log-spaced interior points of the delta interval.
    pub delta_points: u32,
    /// Iteration depth cap.
    pub j_max: u32,
    /// Truncation width cap; defaults to the window half-width.
    pub m_max: Option<u32>,
    /// Search below the critical decay exponent anyway; such runs report
    /// their best contraction factor but are never marked valid.
    pub allow_weak_decay: bool,
}

impl Default for CertificateSearch {
    fn default() -> Self {
        CertificateSearch {
            delta_points: 16,
            j_max: 40,
            m_max: None,
            allow_weak_decay: false,
        }
    }
}

/// Constant-chasing record transferring a lower bound between norms.
///
/// For a finite target exponent the contraction factor is tilde_aleph and
/// validity means tilde_aleph < 1; for a sup-norm target the same slot holds
/// the remainder of the reverse step, with the same validity reading. When
/// both exponents are finite the transfer runs through the sup norm and the
/// reported search constants are those of the second leg; kappa_mid keeps
/// the intermediate sup-norm bound.
#[derive(Clone, Debug)]
pub struct LowerBoundCertificate {
    pub p_in: f64,
    pub q_out: f64,
    pub kappa_in: f64,
    pub s: f64,
    pub d: u32,
    pub delta: f64,
    pub j: u32,
    pub m_width: u32,
    pub n_scale: f64,
    pub aleph: f64,
    pub gamma: f64,
    pub a_coeff: f64,
    pub b_coeff: f64,
    pub z_seq: Vec<f64>,
    pub tilde_aleph: f64,
    pub kappa_out: f64,
    pub kappa_mid: Option<f64>,
    pub valid: bool,
}

impl LowerBoundCertificate {
    pub const CSV_HEADER: &'static str =
        "p,q,kappa_in,s,delta,j,M,N,aleph,tilde_aleph,kappa_out,valid";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            fmt_exponent(self.p_in),
            fmt_exponent(self.q_out),
            self.kappa_in,
            self.s,
            self.delta,
            self.j,
            self.m_width,
            self.n_scale,
            self.aleph,
            self.tilde_aleph,
            self.kappa_out,
            self.valid
        )
    }
}

pub fn fmt_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".to_string()
    } else {
        format!("{p}")
    }
}

fn validate_exponent(p: f64, what: &str) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "{what} must be a norm exponent in [1, inf], got {p}"
        )));
    }
    Ok(())
}

/// Search for a certificate transferring the lower bound kappa_in for the
/// p_in norm into a lower bound for the q_out norm, assuming the matrix
/// extends with polynomial slant decay of exponent s. Exhausting the budget
/// is not an error: the best (smallest) contraction factor found is
/// returned on an invalid certificate.
///
/// Distinct finite exponents chain through the sup norm, and each leg is
/// conservative by orders of magnitude, so chained certificates rarely
/// validate at realistic truncation widths. The intermediate sup-norm
/// bound is recorded in kappa_mid either way.
pub fn certificate(
    a: &SlantedMatrix,
    p_in: f64,
    kappa_in: f64,
    s: f64,
    q_out: f64,
    search: &CertificateSearch,
) -> Result<LowerBoundCertificate> {
    validate_exponent(p_in, "input exponent")?;
    validate_exponent(q_out, "target exponent")?;
    if !kappa_in.is_finite() || kappa_in <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "input lower bound must be positive, got {kappa_in}"
        )));
    }
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "decay exponent must be positive, got {s}"
        )));
    }
    let d = a.window().dim();
    let critical = ((d + 1) * (d + 1)) as f64;
    if s <= critical && !search.allow_weak_decay {
        return Err(Error::InvalidParameter(format!(
            "decay exponent s = {s} must exceed (d+1)^2 = {critical}"
        )));
    }
    if p_in == q_out {
        return Ok(trivial_certificate(a, p_in, kappa_in, s));
    }
    if p_in.is_infinite() {
        step_search(a, StepKind::FromSup, q_out, kappa_in, s, search)
    } else if q_out.is_infinite() {
        step_search(a, StepKind::ToSup, p_in, kappa_in, s, search)
    } else {
        let first = step_search(a, StepKind::ToSup, p_in, kappa_in, s, search)?;
        if !first.valid {
            let mut c = first;
            c.q_out = q_out;
            return Ok(c);
        }
        let mid = first.kappa_out;
        let mut second = step_search(a, StepKind::FromSup, q_out, mid, s, search)?;
        second.p_in = p_in;
        second.kappa_in = kappa_in;
        second.kappa_mid = Some(mid);
        Ok(second)
    }
}

fn trivial_certificate(
    a: &SlantedMatrix,
    p: f64,
    kappa_in: f64,
    s: f64,
) -> LowerBoundCertificate {
    LowerBoundCertificate {
        p_in: p,
        q_out: p,
        kappa_in,
        s,
        d: a.window().dim(),
        delta: 0.0,
        j: 0,
        m_width: 0,
        n_scale: 0.0,
        aleph: 0.0,
        gamma: kappa_in,
        a_coeff: 0.0,
        b_coeff: 0.0,
        z_seq: Vec::new(),
        tilde_aleph: 0.0,
        kappa_out: kappa_in,
        kappa_mid: None,
        valid: true,
    }
}

enum StepKind {
    /// Transfer a sup-norm lower bound to a finite exponent.
    FromSup,
    /// Transfer a finite-exponent lower bound to the sup norm.
    ToSup,
}

struct Candidate {
    delta: f64,
    j: u32,
    m_width: u32,
    n_scale: f64,
    aleph: f64,
    gamma: f64,
    a_coeff: f64,
    b_coeff: f64,
    tilde: f64,
    kappa: f64,
}

fn step_search(
    a: &SlantedMatrix,
    kind: StepKind,
    p: f64,
    kappa_in: f64,
    s: f64,
    search: &CertificateSearch,
) -> Result<LowerBoundCertificate> {
    debug_assert!(p.is_finite());
    let d = a.window().dim();
    let df = d as f64;
    let sup = a.sup_norm();
    let snorm = a.slant_norm(&Weight::polynomial(s)?);
    let m_cap = search
        .m_max
        .unwrap_or_else(|| a.window().half_width().min(u32::MAX as i64) as u32)
        .max(2);
    let critical = ((d + 1) * (d + 1)) as f64;
    let delta_max = s * p / critical;
    let mut best: Option<Candidate> = None;
    if delta_max > 1.0 {
        'grid: for k in 1..=search.delta_points {
            let delta = delta_max.powf(k as f64 / (search.delta_points as f64 + 1.0));
            let j_floor = (delta * (df + 1.0) / (p * (delta - 1.0))).floor();
            let j_min = (j_floor as u32 + 1).max(1);
            if j_min > search.j_max {
                continue;
            }
            for m in 2..=m_cap {
                let mf = m as f64;
                let n_scale = mf.powf(delta * (df + 1.0));
                let tau = snorm * mf.powf(-s);
                let gamma = kappa_in - tau;
                if gamma <= 0.0 {
                    continue;
                }
                let al = aleph(m as i64, n_scale, d, sup);
                for j in j_min..=search.j_max {
                    let (a_coeff, b_coeff) = iteration_coefficients(j, gamma, al);
                    let zj = z_scale(j, n_scale, mf);
                    let zj1 = z_scale(j + 1, n_scale, mf);
                    let (tilde, kappa) = match kind {
                        StepKind::FromSup => {
                            let front = 2.0_f64.powf(2.0 * df + p - 1.0);
                            let tilde = front
                                * n_scale.powf(df)
                                * (a_coeff.powf(p) * zj.powf(df) * tau.powf(p)
                                    + b_coeff.powf(p) * zj1.powf(df));
                            let kappa = if tilde < 1.0 {
                                ((1.0 - tilde)
                                    / (front
                                        * a_coeff.powf(p)
                                        * n_scale.powf(df)
                                        * zj.powf(df)))
                                .powf(1.0 / p)
                            } else {
                                0.0
                            };
                            (tilde, kappa)
                        }
                        StepKind::ToSup => {
                            let remainder = 2.0_f64.powf(df / p)
                                * (a_coeff * zj.powf(df / p) * tau
                                    + b_coeff * zj1.powf(df / p));
                            let kappa = if remainder < 1.0 {
                                (1.0 - remainder)
                                    / (a_coeff * (2.0 * zj).powf(df / p))
                            } else {
                                0.0
                            };
                            (remainder, kappa)
                        }
                    };
                    let candidate = Candidate {
                        delta,
                        j,
                        m_width: m,
                        n_scale,
                        aleph: al,
                        gamma,
                        a_coeff,
                        b_coeff,
                        tilde,
                        kappa,
                    };
                    // First valid combination wins; a subcritical run only
                    // keeps hunting for its best contraction factor.
                    if tilde < 1.0 && kappa > 0.0 && s > critical {
                        best = Some(candidate);
                        break 'grid;
                    }
                    if tilde.is_finite()
                        && best.as_ref().map_or(true, |b| tilde < b.tilde)
                    {
                        best = Some(candidate);
                    }
                }
            }
        }
    }
    let subcritical = s <= critical;
    Ok(match best {
        Some(c) => {
            let valid = c.tilde < 1.0 && c.kappa > 0.0 && !subcritical;
            let z_seq = (1..=c.j + 1)
                .map(|i| z_scale(i, c.n_scale, c.m_width as f64))
                .collect();
            LowerBoundCertificate {
                p_in: match kind {
                    StepKind::FromSup => f64::INFINITY,
                    StepKind::ToSup => p,
                },
                q_out: match kind {
                    StepKind::FromSup => p,
                    StepKind::ToSup => f64::INFINITY,
                },
                kappa_in,
                s,
                d,
                delta: c.delta,
                j: c.j,
                m_width: c.m_width,
                n_scale: c.n_scale,
                aleph: c.aleph,
                gamma: c.gamma,
                a_coeff: c.a_coeff,
                b_coeff: c.b_coeff,
                z_seq,
                tilde_aleph: c.tilde,
                kappa_out: if valid { c.kappa } else { 0.0 },
                kappa_mid: None,
                valid,
            }
        }
        None => LowerBoundCertificate {
            p_in: match kind {
                StepKind::FromSup => f64::INFINITY,
                StepKind::ToSup => p,
            },
            q_out: match kind {
                StepKind::FromSup => p,
                StepKind::ToSup => f64::INFINITY,
            },
            kappa_in,
            s,
            d,
            delta: 0.0,
            j: 0,
            m_width: 0,
            n_scale: 0.0,
            aleph: 0.0,
            gamma: 0.0,
            a_coeff: 0.0,
            b_coeff: 0.0,
            z_seq: Vec::new(),
            tilde_aleph: f64::INFINITY,
            kappa_out: 0.0,
            kappa_mid: None,
            valid: false,
        },
    })
}

/// Lower-bound estimate for the section: exact smallest singular value at
/// p = 2, multi-start descent upper estimate at p in {1, inf}.
pub fn estimate_kappa(a: &SlantedMatrix, p: NormP, trials: u32, seed: u64) -> f64 {
    let dense = linalg::to_dense(a);
    linalg::lower_norm_estimate(&dense, p, trials, seed)
}

/// Same estimate restricted to columns at least `margin` from the window
/// edge, where the section sees the full band.
pub fn estimate_kappa_interior(
    a: &SlantedMatrix,
    p: NormP,
    margin: i64,
    trials: u32,
    seed: u64,
) -> Result<f64> {
    let w = a.window();
    if margin < 0 || margin > w.half_width() {
        return Err(Error::InvalidParameter(format!(
            "column margin {margin} leaves no interior in half-width {}",
            w.half_width()
        )));
    }
    let dense = linalg::to_dense(a);
    let first = w.index_of(-w.half_width() + margin).expect("interior start");
    let last = w.index_of(w.half_width() - margin).expect("interior end");
    let stripped = linalg::keep_columns(&dense, first, last);
    Ok(linalg::lower_norm_estimate(&stripped, p, trials, seed))
}

/// Approximate null vector for a matrix of slope above 1: returns x with
/// ||x||_p = 1 and ||A x||_p <= epsilon (up to roundoff in the exactly
/// singular boxed solve).
///
/// Construction: truncate until the slant-norm tail is below epsilon, then
/// box the section at radius R large enough that R (alpha - 1) >= M. Rows
/// at the box edge then have their whole band outside the box, so the boxed
/// submatrix is singular; its null vector, zero-extended, is annihilated by
/// the truncated matrix everywhere, and the tail bounds the rest.
pub fn approximate_null_witness(
    a: &SlantedMatrix,
    epsilon: f64,
    p: NormP,
) -> Result<Vec<f64>> {
    if !epsilon.is_finite() || epsilon <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be positive, got {epsilon}"
        )));
    }
    let slant = a.slant();
    if slant.num() <= slant.den() {
        return Err(Error::InvalidSlant(format!(
            "approximate null vectors need slope > 1, got {slant}"
        )));
    }
    let mut m_width = a.class_width();
    for m in 1..=a.class_width() {
        if a.truncation_tail(m) <= epsilon {
            m_width = m;
            break;
        }
    }
    let truncated = a.truncate(m_width)?;
    // R (alpha - 1) >= M, i.e. R >= M den / (num - den).
    let num = slant.num();
    let den = slant.den();
    let needed = (m_width * den + (num - den) - 1) / (num - den);
    let radius = needed.max(m_width + 1);
    let w = a.window();
    if radius > w.half_width() {
        return Err(Error::WindowTooSmall(format!(
            "null-vector box needs radius {radius}, window half-width is {}",
            w.half_width()
        )));
    }
    let span = (2 * radius + 1) as usize;
    let mut boxed = DMatrix::zeros(span, span);
    for (m, k, v) in truncated.entries() {
        if m.abs() <= radius && k.abs() <= radius {
            boxed[((m + radius) as usize, (k + radius) as usize)] = v;
        }
    }
    let null = linalg::smallest_singular_vector(&boxed)?;
    let mut x = vec![0.0; w.size()];
    for (i, &v) in null.iter().enumerate() {
        let coord = i as i64 - radius;
        x[w.index_of(coord).expect("box inside window")] = v;
    }
    let norm = linalg::vec_norm(&x, p);
    if norm == 0.0 {
        return Err(Error::InvalidParameter(
            "null vector collapsed to zero".into(),
        ));
    }
    for v in &mut x {
        *v /= norm;
    }
    Ok(x)
}
