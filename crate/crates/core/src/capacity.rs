//! Secrecy capacity, optimal beamformer, masked-beamforming rate, SNR
//! asymptotes and the noise-correlation certificate for the converse.
//!
//! Channel model: the receiver sees `y_r = h_r† x + z_r`, the eavesdropper
//! `y_e = H_e x + z_e`, unit-variance noise, average input power `P`. All
//! rates are in bits per channel use.

use nalgebra::Complex;

use crate::error::{Error, Result};
use crate::geig::{self, HermitianMatrix};
use crate::scalar::{all_finite_mat, all_finite_vec, inner, log2, modulus, norm_sqr, CMatrix, CVector, Real};

/// One fixed realization of the receiver and eavesdropper channel gains.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization<T: Real> {
    h_r: CVector<T>,
    h_e: CMatrix<T>,
}

impl<T: Real> ChannelRealization<T> {
    /// `h_e` is `n_e × n_t`; `n_e = 0` means no eavesdropper.
    pub fn new(h_r: CVector<T>, h_e: CMatrix<T>) -> Result<Self> {
        if h_r.is_empty() {
            return Err(Error::DimensionMismatch("n_t must be positive".into()));
        }
        if h_e.ncols() != h_r.len() {
            return Err(Error::DimensionMismatch(format!(
                "h_r has {} entries but H_e has {} columns",
                h_r.len(),
                h_e.ncols()
            )));
        }
        if !all_finite_vec(&h_r) {
            return Err(Error::NonFinite("h_r"));
        }
        if !all_finite_mat(&h_e) {
            return Err(Error::NonFinite("H_e"));
        }
        Ok(Self { h_r, h_e })
    }

    /// Channel with no eavesdropper antennas.
    pub fn without_eavesdropper(h_r: CVector<T>) -> Result<Self> {
        let n = h_r.len();
        Self::new(h_r, CMatrix::zeros(0, n))
    }

    pub fn n_t(&self) -> usize {
        self.h_r.len()
    }

    pub fn n_e(&self) -> usize {
        self.h_e.nrows()
    }

    pub fn h_r(&self) -> &CVector<T> {
        &self.h_r
    }

    pub fn h_e(&self) -> &CMatrix<T> {
        &self.h_e
    }

    /// The same channel restricted to the first `rows` eavesdropper antennas.
    pub fn with_eavesdropper_rows(&self, rows: usize) -> Result<Self> {
        if rows > self.n_e() {
            return Err(Error::InvalidArgument(format!("only {} eavesdropper rows", self.n_e())));
        }
        Self::new(self.h_r.clone(), self.h_e.rows(0, rows).into_owned())
    }

    /// `(I + P h h†, I + P H† H)`.
    pub fn pencil(&self, p: T) -> (HermitianMatrix<T>, HermitianMatrix<T>) {
        (
            HermitianMatrix::identity_plus_outer(p, &self.h_r),
            HermitianMatrix::identity_plus_gram(p, &self.h_e),
        )
    }

    /// `(1 + P |h† psi|²) / (1 + P ‖H psi‖²)` for unit `psi`.
    pub fn rayleigh_ratio(&self, p: T, psi: &CVector<T>) -> T {
        let num = T::one() + p * inner(&self.h_r, psi).norm_sqr();
        let den = T::one() + p * eaves_gain(&self.h_e, psi);
        num / den
    }

    fn receiver_norm_sqr_nonzero(&self) -> Result<T> {
        let n2 = norm_sqr(&self.h_r);
        if n2 == T::zero() {
            return Err(Error::ZeroReceiverChannel);
        }
        Ok(n2)
    }
}

fn eaves_gain<T: Real>(h_e: &CMatrix<T>, psi: &CVector<T>) -> T {
    if h_e.nrows() == 0 {
        T::zero()
    } else {
        norm_sqr(&(h_e * psi))
    }
}

fn check_power<T: Real>(p: T) -> Result<()> {
    if !(p > T::zero()) || !p.is_finite_value() {
        return Err(Error::NonPositivePower(p.to_f64_lossy()));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport<T: Real> {
    pub capacity_bits: T,
    pub lambda_max: T,
    /// Capacity-achieving beamforming direction (unit norm, canonical phase).
    pub psi_max: CVector<T>,
    /// `lambda_max <= 1`: no positive secrecy rate.
    pub clamped: bool,
    pub power: T,
}

/// `{log2 lambda_max(I + P h h†, I + P H† H)}⁺`, attained by beamforming
/// along the generalized eigenvector.
pub fn secrecy_capacity<T: Real>(p: T, ch: &ChannelRealization<T>) -> Result<CapacityReport<T>> {
    check_power(p)?;
    // lambda_max(A, B) - 1 = lambda_max(A - B, B), and A - B = P(h h† - H†H)
    // carries no identity term to cancel, so values near 1 stay accurate.
    let b = HermitianMatrix::identity_plus_gram(p, &ch.h_e);
    let d = HermitianMatrix::outer(&ch.h_r).into_matrix() - HermitianMatrix::gram(&ch.h_e).into_matrix();
    let d = HermitianMatrix::symmetrized(d.map(|z| z.scale(p)));
    let r = geig::lambda_max(&d, &b)?;
    let excess = r.lambda_max;
    let clamped = excess <= T::lit(T::CLAMP_TOL);
    let capacity_bits = if clamped { T::zero() } else { excess.ln_1p() / T::ln_2() };
    Ok(CapacityReport {
        capacity_bits,
        lambda_max: T::one() + excess,
        psi_max: r.psi_max,
        clamped,
        power: p,
    })
}

pub fn optimal_beamformer<T: Real>(p: T, ch: &ChannelRealization<T>) -> Result<CVector<T>> {
    Ok(secrecy_capacity(p, ch)?.psi_max)
}

/// Masked-beamforming rate before the `{·}⁺` clamp:
/// `log2(P̃ h†(I + P̃ H†H)^-1 h) + log2(1 + n_t/(P‖h‖²))` with `P̃ = P/n_t`.
pub fn masked_beamforming_rate_unclamped<T: Real>(p: T, ch: &ChannelRealization<T>) -> Result<T> {
    check_power(p)?;
    let hn2 = ch.receiver_norm_sqr_nonzero()?;
    let nt = T::from_usize(ch.n_t()).expect("n_t fits");
    let pt = p / nt;
    let b = HermitianMatrix::identity_plus_gram(pt, ch.h_e());
    // lambda_max(P̃ h h†, B) = P̃ · h† B^-1 h
    let q = geig::lambda_max_rank_one(ch.h_r(), &b)?.lambda_max;
    Ok(log2(pt * q) + log2(T::one() + nt / (p * hn2)))
}

/// Rate of masked beamforming (message along `h_r`, artificial noise in the
/// orthogonal complement, isotropic total covariance).
pub fn masked_beamforming_rate<T: Real>(p: T, ch: &ChannelRealization<T>) -> Result<T> {
    Ok(masked_beamforming_rate_unclamped(p, ch)?.max(T::zero()))
}

/// Bracket `[lower, upper]` on `C(P/n_t) - R_MB(P)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapBracket<T> {
    pub lower: T,
    pub upper: T,
}

/// `(0, log2(1 + n_t/(P |h† psi|²)))` where `psi` is the capacity-achieving
/// direction at power `P/n_t`.
pub fn mb_gap_bound<T: Real>(p: T, ch: &ChannelRealization<T>) -> Result<GapBracket<T>> {
    check_power(p)?;
    let nt = T::from_usize(ch.n_t()).expect("n_t fits");
    let rep = secrecy_capacity(p / nt, ch)?;
    let proj = inner(ch.h_r(), &rep.psi_max).norm_sqr();
    let upper = if proj == T::zero() {
        T::infinity()
    } else {
        log2(T::one() + nt / (p * proj))
    };
    Ok(GapBracket { lower: T::zero(), upper })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HighSnrRegime<T> {
    /// `h_r` has no component in `Null(H_e)`: capacity saturates at `limit_bits`.
    FiniteLimit { limit_bits: T },
    /// `C(P) - log2 P → offset_bits = log2 ‖H_e⊥ h_r‖²`.
    LogGrowth { offset_bits: T },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteReport<T> {
    pub regime: HighSnrRegime<T>,
    /// `lim C(P)/P` as `P → 0`, bits per unit power.
    pub low_snr_slope: T,
}

impl<T: Real> AsymptoteReport<T> {
    /// High-SNR asymptote of `C(P)`.
    pub fn asymptote_bits(&self, p: T) -> T {
        match self.regime {
            HighSnrRegime::FiniteLimit { limit_bits } => limit_bits,
            HighSnrRegime::LogGrowth { offset_bits } => log2(p) + offset_bits,
        }
    }

    pub fn is_log_growth(&self) -> bool {
        matches!(self.regime, HighSnrRegime::LogGrowth { .. })
    }
}

/// Component of `h_r` in the null space of `H_e`.
pub fn null_component<T: Real>(ch: &ChannelRealization<T>) -> CVector<T> {
    geig::null_projector(ch.h_e()).matrix() * ch.h_r()
}

/// `lambda_max(h h†, H† H)`, finite only when `h` lies in the row space of `H`.
/// Evaluated on the reduced channel when `H` is column-rank deficient.
fn infinite_snr_lambda<T: Real>(ch: &ChannelRealization<T>) -> Result<T> {
    let rank = geig::column_rank(ch.h_e());
    if rank == ch.n_t() {
        let g = HermitianMatrix::gram(ch.h_e());
        return Ok(geig::lambda_max_rank_one(ch.h_r(), &g)?.lambda_max);
    }
    if rank == 0 {
        return Ok(T::zero());
    }
    let (g, gm) = geig::reduce_rank_deficient(ch.h_r(), ch.h_e())?;
    let gram = HermitianMatrix::gram(&gm);
    Ok(geig::lambda_max_rank_one(&g, &gram)?.lambda_max)
}

pub fn high_snr_asymptote<T: Real>(ch: &ChannelRealization<T>) -> Result<AsymptoteReport<T>> {
    let hn2 = ch.receiver_norm_sqr_nonzero()?;
    let perp = norm_sqr(&null_component(ch));
    let tol = T::lit(T::RANK_TOL);
    let regime = if perp.sqrt() > tol * hn2.sqrt() {
        HighSnrRegime::LogGrowth { offset_bits: log2(perp) }
    } else {
        let lam = infinite_snr_lambda(ch)?;
        let limit_bits = if lam > T::one() { log2(lam) } else { T::zero() };
        HighSnrRegime::FiniteLimit { limit_bits }
    };
    Ok(AsymptoteReport { regime, low_snr_slope: low_snr_slope(ch) })
}

/// `(1/ln 2)·{lambda_max(h h† - H† H)}⁺`.
pub fn low_snr_slope<T: Real>(ch: &ChannelRealization<T>) -> T {
    let d = HermitianMatrix::outer(ch.h_r()).into_matrix() - HermitianMatrix::gram(ch.h_e()).into_matrix();
    let (top, _) = HermitianMatrix::symmetrized(d).max_eigenpair();
    top.max(T::zero()) / T::ln_2()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateCase {
    /// `lambda_max > 1`: `phi = H psi / (h† psi)`.
    LambdaGt1,
    /// `lambda_max <= 1` and `H_e` has full column rank: `phi = H (H†H)^-1 h`.
    LambdaLe1FullRank,
    /// `lambda_max <= 1`, rank-deficient `H_e`: the full-rank choice on the
    /// reduced channel `(Q† h, H Q)`.
    LambdaLe1Reduced,
}

impl CertificateCase {
    pub fn label(self) -> &'static str {
        match self {
            CertificateCase::LambdaGt1 => "lambda_gt_1",
            CertificateCase::LambdaLe1FullRank => "lambda_le_1_full_rank",
            CertificateCase::LambdaLe1Reduced => "lambda_le_1_reduced",
        }
    }

    pub fn code(self) -> u8 {
        match self {
            CertificateCase::LambdaGt1 => 1,
            CertificateCase::LambdaLe1FullRank => 2,
            CertificateCase::LambdaLe1Reduced => 3,
        }
    }
}

/// Cross-correlation `phi = E[z_e z_r*]` between eavesdropper and receiver
/// noise for which the genie-aided upper bound meets the capacity.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseCorrelation<T: Real> {
    pub phi: CVector<T>,
    pub case: CertificateCase,
}

impl<T: Real> NoiseCorrelation<T> {
    pub fn norm(&self) -> T {
        norm_sqr(&self.phi).sqrt()
    }

    /// Joint noise covariance `[[1, phi†], [phi, I]]`.
    pub fn covariance(&self) -> HermitianMatrix<T> {
        let n = self.phi.len();
        let mut k = CMatrix::identity(n + 1, n + 1);
        for i in 0..n {
            k[(i + 1, 0)] = self.phi[i];
            k[(0, i + 1)] = self.phi[i].conj();
        }
        HermitianMatrix::symmetrized(k)
    }
}

/// `H (H†H)^-1 h`.
fn projected_correlation<T: Real>(h: &CVector<T>, hm: &CMatrix<T>) -> Result<CVector<T>> {
    let x = geig::solve_definite(&HermitianMatrix::gram(hm), h)?;
    Ok(hm * x)
}

pub fn converse_certificate<T: Real>(p: T, ch: &ChannelRealization<T>) -> Result<NoiseCorrelation<T>> {
    let rep = secrecy_capacity(p, ch)?;
    let n_e = ch.n_e();
    if !rep.clamped {
        let proj = inner(ch.h_r(), &rep.psi_max);
        if modulus(proj) == T::zero() {
            return Err(Error::DegenerateCertificate(rep.lambda_max.to_f64_lossy()));
        }
        let phi = if n_e == 0 {
            CVector::zeros(0)
        } else {
            (ch.h_e() * &rep.psi_max).map(|z| z / proj)
        };
        return Ok(NoiseCorrelation { phi, case: CertificateCase::LambdaGt1 });
    }
    let rank = geig::column_rank(ch.h_e());
    if rank == ch.n_t() {
        let phi = projected_correlation(ch.h_r(), ch.h_e())?;
        return Ok(NoiseCorrelation { phi, case: CertificateCase::LambdaLe1FullRank });
    }
    let (g, gm) = geig::reduce_rank_deficient(ch.h_r(), ch.h_e())?;
    let phi = if gm.ncols() == 0 {
        CVector::zeros(n_e)
    } else {
        projected_correlation(&g, &gm)?
    };
    Ok(NoiseCorrelation { phi, case: CertificateCase::LambdaLe1Reduced })
}

/// Minimizer of the genie bound's conditional-entropy objective for a given
/// `phi`: `theta = (I + P H H†)^-1 (P H h + phi)`.
pub fn certificate_theta<T: Real>(p: T, ch: &ChannelRealization<T>, phi: &CVector<T>) -> Result<CVector<T>> {
    check_power(p)?;
    if phi.len() != ch.n_e() {
        return Err(Error::CertificateMismatch(format!(
            "phi has {} entries, channel has {} eavesdropper antennas",
            phi.len(),
            ch.n_e()
        )));
    }
    if ch.n_e() == 0 {
        return Ok(CVector::zeros(0));
    }
    let hh = ch.h_e().adjoint();
    let k = HermitianMatrix::identity_plus_gram(p, &hh);
    let rhs = (ch.h_e() * ch.h_r()).map(|z| z.scale(p)) + phi;
    geig::solve_definite(&k, &rhs)
}

/// `P ‖h - H† theta‖² + 1 + ‖theta‖² - 2 Re(theta† phi)`.
pub fn entropy_objective<T: Real>(p: T, ch: &ChannelRealization<T>, phi: &CVector<T>, theta: &CVector<T>) -> T {
    let resid = if ch.n_e() == 0 {
        ch.h_r().clone()
    } else {
        ch.h_r() - ch.h_e().adjoint() * theta
    };
    let cross = if ch.n_e() == 0 { T::zero() } else { inner(theta, phi).re };
    p * norm_sqr(&resid) + T::one() + norm_sqr(theta) - T::lit(2.0) * cross
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateCheck<T> {
    /// `|upper bound - capacity|` in bits.
    pub gap_bits: T,
    pub upper_bound_bits: T,
    pub capacity_bits: T,
    /// `‖theta - lambda_max phi‖ / max(1, ‖lambda_max phi‖)`; `lambda_max > 1` case only.
    pub theta_residual: Option<T>,
}

/// Tolerance on the `theta = lambda_max · phi` identity.
pub const THETA_IDENTITY_TOL: f64 = 1e-8;

/// Evaluates the genie-aided upper bound induced by `nc` and compares it with
/// the capacity. Returns the detailed check; see [`verify_certificate`].
pub fn check_certificate<T: Real>(
    p: T,
    ch: &ChannelRealization<T>,
    nc: &NoiseCorrelation<T>,
) -> Result<CertificateCheck<T>> {
    let rep = secrecy_capacity(p, ch)?;
    if nc.phi.len() != ch.n_e() {
        return Err(Error::CertificateMismatch(format!(
            "phi has {} entries, channel has {} eavesdropper antennas",
            nc.phi.len(),
            ch.n_e()
        )));
    }
    let phi_n2 = norm_sqr(&nc.phi);
    if phi_n2.sqrt() > T::one() + T::lit(1e-10) {
        return Err(Error::CertificateMismatch(format!(
            "‖phi‖ = {} exceeds 1",
            phi_n2.sqrt()
        )));
    }
    let is_gt1 = nc.case == CertificateCase::LambdaGt1;
    if is_gt1 == rep.clamped {
        return Err(Error::CertificateMismatch(format!(
            "case {} does not match lambda_max = {}",
            nc.case.label(),
            rep.lambda_max
        )));
    }
    if is_gt1 {
        let theta = certificate_theta(p, ch, &nc.phi)?;
        let target = nc.phi.map(|z| z.scale(rep.lambda_max));
        let resid = (norm_sqr(&(&theta - &target)).sqrt()) / T::one().max(norm_sqr(&target).sqrt());
        if resid > T::lit(THETA_IDENTITY_TOL) {
            return Err(Error::CertificateMismatch(format!(
                "theta deviates from lambda_max·phi by {resid}"
            )));
        }
        let f = entropy_objective(p, ch, &nc.phi, &theta);
        let upper = log2(f) - log2(T::one() - phi_n2);
        Ok(CertificateCheck {
            gap_bits: (upper - rep.capacity_bits).abs(),
            upper_bound_bits: upper,
            capacity_bits: rep.capacity_bits,
            theta_residual: Some(resid),
        })
    } else {
        // theta = phi: bound log2(P‖h - H†phi‖² / (1 - ‖phi‖²) + 1)
        let resid = if ch.n_e() == 0 {
            ch.h_r().clone()
        } else {
            ch.h_r() - ch.h_e().adjoint() * &nc.phi
        };
        let num = p * norm_sqr(&resid);
        let den = T::one() - phi_n2;
        let scale = T::one().max(p * norm_sqr(ch.h_r()));
        let ratio = if num <= T::lit(T::RANK_TOL) * T::lit(T::RANK_TOL) * scale {
            T::zero()
        } else if den <= T::zero() {
            T::infinity()
        } else {
            num / den
        };
        let upper = log2(T::one() + ratio);
        Ok(CertificateCheck {
            gap_bits: (upper - rep.capacity_bits).abs(),
            upper_bound_bits: upper,
            capacity_bits: rep.capacity_bits,
            theta_residual: None,
        })
    }
}

/// `|upper_bound_bits - capacity_bits|` for the bound induced by `nc`.
pub fn verify_certificate<T: Real>(p: T, ch: &ChannelRealization<T>, nc: &NoiseCorrelation<T>) -> Result<T> {
    Ok(check_certificate(p, ch, nc)?.gap_bits)
}

/// Complex scalar helper used in examples and tests.
pub fn cplx<T: Real>(re: f64, im: f64) -> Complex<T> {
    Complex::new(T::lit(re), T::lit(im))
}

/// The two-antenna example channel used throughout the documentation and
/// the `example` command: `n_t = 2`, `n_e = 2`.
pub fn example_channel<T: Real>() -> ChannelRealization<T> {
    let h_r = CVector::from_vec(vec![cplx(0.0991, 0.8676), cplx(1.0814, -1.1281)]);
    let h_e = CMatrix::from_row_slice(
        2,
        2,
        &[
            cplx(0.3880, 1.2024),
            cplx(-0.9825, 0.5914),
            cplx(0.4709, -0.3073),
            cplx(0.6815, -0.2125),
        ],
    );
    ChannelRealization::new(h_r, h_e).expect("example channel is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C;

    /// `h†` as a one-row matrix.
    fn row(h: &CVector<f64>) -> CMatrix<f64> {
        CMatrix::from_iterator(1, h.len(), h.iter().map(|z| z.conj()))
    }

    fn v(x: &[(f64, f64)]) -> CVector<f64> {
        CVector::from_iterator(x.len(), x.iter().map(|&(a, b)| C::new(a, b)))
    }

    #[test]
    fn no_eavesdropper_is_miso_log() {
        let h = v(&[(0.3, -1.0), (2.0, 0.5), (0.0, 0.1)]);
        let ch = ChannelRealization::without_eavesdropper(h.clone()).unwrap();
        for p in [0.01, 1.0, 37.0] {
            let r = secrecy_capacity(p, &ch).unwrap();
            assert!((r.capacity_bits - (1.0 + p * norm_sqr(&h)).log2()).abs() < 1e-12);
            assert!(!r.clamped);
        }
    }

    #[test]
    fn identical_channels_clamp() {
        let h = v(&[(0.3, -1.0), (2.0, 0.5)]);
        let ch = ChannelRealization::new(h.clone(), row(&h)).unwrap();
        let r = secrecy_capacity(3.0, &ch).unwrap();
        assert!((r.lambda_max - 1.0).abs() < 1e-12);
        assert!(r.clamped);
        assert_eq!(r.capacity_bits, 0.0);
    }

    #[test]
    fn nonpositive_power_rejected() {
        let ch = example_channel::<f64>();
        assert!(matches!(secrecy_capacity(0.0, &ch), Err(Error::NonPositivePower(_))));
        assert!(matches!(secrecy_capacity(-1.0, &ch), Err(Error::NonPositivePower(_))));
        assert!(matches!(mb_gap_bound(0.0, &ch), Err(Error::NonPositivePower(_))));
        assert!(matches!(converse_certificate(-2.0, &ch), Err(Error::NonPositivePower(_))));
    }

    #[test]
    fn beamformer_along_receiver_without_eavesdropper() {
        let h = v(&[(1.0, 1.0), (0.0, -2.0)]);
        let ch = ChannelRealization::new(h.clone(), CMatrix::zeros(1, 2)).unwrap();
        let psi = optimal_beamformer(5.0, &ch).unwrap();
        let align = inner(&h, &psi).norm() / norm_sqr(&h).sqrt();
        assert!((align - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beamformer_along_receiver_for_orthogonal_equal_norm_columns() {
        // columns orthogonal with equal norm: H†H = 4 I
        let he = CMatrix::from_row_slice(
            3,
            2,
            &[C::new(2.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 2.0), C::new(0.0, 0.0), C::new(0.0, 0.0)],
        );
        let h = v(&[(3.0, 1.0), (-1.0, 2.5)]);
        let ch = ChannelRealization::new(h.clone(), he).unwrap();
        let psi = optimal_beamformer(10.0, &ch).unwrap();
        let align = inner(&h, &psi).norm() / norm_sqr(&h).sqrt();
        assert!((align - 1.0).abs() < 1e-12);
    }

    #[test]
    fn masked_beamforming_scalar_and_no_eavesdropper() {
        let ch = ChannelRealization::new(v(&[(0.7, 0.4)]), CMatrix::from_element(1, 1, C::new(0.2, -0.1))).unwrap();
        for p in [0.1, 1.0, 100.0] {
            let c = secrecy_capacity(p, &ch).unwrap().capacity_bits;
            let r = masked_beamforming_rate(p, &ch).unwrap();
            assert!((c - r).abs() < 1e-12, "{c} vs {r}");
        }
        let h = v(&[(0.3, -1.0), (2.0, 0.5), (1.0, 1.0)]);
        let ch = ChannelRealization::new(h.clone(), CMatrix::zeros(2, 3)).unwrap();
        let p = 7.0;
        let want = (1.0 + p * norm_sqr(&h) / 3.0).log2();
        assert!((masked_beamforming_rate(p, &ch).unwrap() - want).abs() < 1e-12);
        let gap = secrecy_capacity(p / 3.0, &ch).unwrap().capacity_bits - masked_beamforming_rate(p, &ch).unwrap();
        assert!(gap.abs() < 1e-12);
    }

    #[test]
    fn masked_beamforming_rejects_zero_receiver() {
        let ch = ChannelRealization::new(CVector::<f64>::zeros(2), CMatrix::zeros(1, 2)).unwrap();
        assert_eq!(masked_beamforming_rate(1.0, &ch), Err(Error::ZeroReceiverChannel));
        assert_eq!(high_snr_asymptote(&ch).map(|_| ()), Err(Error::ZeroReceiverChannel));
    }

    #[test]
    fn asymptote_trivial_cases() {
        let h = v(&[(1.0, 2.0), (0.5, 0.0)]);
        let a = high_snr_asymptote(&ChannelRealization::without_eavesdropper(h.clone()).unwrap()).unwrap();
        match a.regime {
            HighSnrRegime::LogGrowth { offset_bits } => assert!((offset_bits - norm_sqr(&h).log2()).abs() < 1e-12),
            r => panic!("{r:?}"),
        }
        let ch = ChannelRealization::new(v(&[(1.0, 0.0), (0.0, 0.0)]), CMatrix::from_row_slice(1, 2, &[C::new(0.0, 0.0), C::new(1.0, 0.0)])).unwrap();
        match high_snr_asymptote(&ch).unwrap().regime {
            HighSnrRegime::LogGrowth { offset_bits } => assert!(offset_bits.abs() < 1e-12),
            r => panic!("{r:?}"),
        }
    }

    #[test]
    fn low_snr_slope_trivial_cases() {
        let h = v(&[(1.0, 2.0), (0.5, 0.0)]);
        let ch = ChannelRealization::new(h.clone(), CMatrix::zeros(1, 2)).unwrap();
        assert!((low_snr_slope(&ch) - norm_sqr(&h) / std::f64::consts::LN_2).abs() < 1e-12);
        let ch = ChannelRealization::new(h.clone(), row(&h)).unwrap();
        assert!(low_snr_slope(&ch).abs() < 1e-12);
    }

    #[test]
    fn certificate_trivial_cases() {
        let h = v(&[(1.0, 2.0), (0.5, 0.0)]);
        let ch = ChannelRealization::new(h.clone(), CMatrix::zeros(2, 2)).unwrap();
        let nc = converse_certificate(3.0, &ch).unwrap();
        assert_eq!(nc.case, CertificateCase::LambdaGt1);
        assert_eq!(nc.norm(), 0.0);
        let chk = check_certificate(3.0, &ch, &nc).unwrap();
        assert!((chk.upper_bound_bits - (1.0 + 3.0 * norm_sqr(&h)).log2()).abs() < 1e-12);
        assert_eq!(verify_certificate(3.0, &ch, &nc).unwrap(), chk.gap_bits);
        assert!(chk.gap_bits < 1e-12);

        let ch = ChannelRealization::new(v(&[(1.0, 0.0), (0.0, 0.0)]), CMatrix::identity(2, 2).map(|z: C<f64>| z * 2.0)).unwrap();
        let nc = converse_certificate(1.0, &ch).unwrap();
        assert_eq!(nc.case, CertificateCase::LambdaLe1FullRank);
        assert!((nc.phi[0] - C::new(0.5, 0.0)).norm() < 1e-14 && nc.phi[1].norm() < 1e-14);
        assert_eq!(verify_certificate(1.0, &ch, &nc).unwrap(), 0.0);
    }

    #[test]
    fn certificate_mismatch_detected() {
        let ch = example_channel::<f64>();
        let nc = converse_certificate(10.0, &ch).unwrap();
        let one_row = ch.with_eavesdropper_rows(1).unwrap();
        assert!(matches!(verify_certificate(10.0, &one_row, &nc), Err(Error::CertificateMismatch(_))));
        let wrong_case = NoiseCorrelation { phi: nc.phi.clone(), case: CertificateCase::LambdaLe1FullRank };
        assert!(matches!(verify_certificate(10.0, &ch, &wrong_case), Err(Error::CertificateMismatch(_))));
        let too_big = NoiseCorrelation { phi: nc.phi.map(|z| z * 10.0), case: nc.case };
        assert!(matches!(verify_certificate(10.0, &ch, &too_big), Err(Error::CertificateMismatch(_))));
    }

    #[test]
    fn covariance_is_psd_for_certificate() {
        let ch = example_channel::<f64>();
        let nc = converse_certificate(10.0, &ch).unwrap();
        assert!(nc.norm() < 1.0);
        let ev = nc.covariance().eigenvalues();
        assert!(ev[0] >= -1e-12);
    }

    #[test]
    fn single_precision_capacity_tracks_double() {
        let c64 = secrecy_capacity(10.0, &example_channel::<f64>()).unwrap().capacity_bits;
        let c32 = secrecy_capacity(10.0f32, &example_channel::<f32>()).unwrap().capacity_bits;
        assert!((c64 - c32 as f64).abs() < 1e-4);
    }
}
