//! Theta nullwerte, the level-2 forms `δ₁, ε₁, δ₂, ε₂`, and triangular
//! decompositions against the monomial basis `(8δ₂)^a ε₂^r`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chroot::RootProfile;
use crate::error::{Error, Result};
use crate::qseries::{Coefficient, HalfExp, HalfQSeries};
use crate::rational::{int, rat, Rational};
use crate::witten::{CharacterElement, ThetaBundleKind, ThetaBundleSeries, ThetaSource};

/// The four Jacobi theta functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaKind {
    Theta,
    Theta1,
    Theta2,
    Theta3,
}

impl ThetaKind {
    pub fn from_index(i: u32) -> Result<Self> {
        match i {
            0 => Ok(ThetaKind::Theta),
            1 => Ok(ThetaKind::Theta1),
            2 => Ok(ThetaKind::Theta2),
            3 => Ok(ThetaKind::Theta3),
            _ => Err(Error::InvalidArgument(format!("no theta function with index {i}"))),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ThetaKind::Theta => "theta",
            ThetaKind::Theta1 => "theta1",
            ThetaKind::Theta2 => "theta2",
            ThetaKind::Theta3 => "theta3",
        }
    }
}

/// `Π_j (1 + sign q^{(2j - shift)/2})^{power}` for `j ≥ 1`.
fn product_series(q_order: u32, factors: &[(u32, bool, u32)]) -> HalfQSeries<Rational> {
    let mut out = HalfQSeries::one((), q_order);
    for &(shift, plus, power) in factors {
        let mut j = 1;
        while 2 * j - shift < q_order {
            let c = if plus { int(1) } else { int(-1) };
            let factor = HalfQSeries::from_terms((), q_order, [(0, int(1)), (2 * j - shift, c)]);
            out = out.mul(&factor.pow(power)).expect("rational ring");
            j += 1;
        }
    }
    out
}

/// `θ(0,τ)`, `θ₂(0,τ)`, `θ₃(0,τ)` as exact series. `θ₁(0,τ)` carries the
/// prefactor `q^{1/8}` and is only available through [`theta_nullwert_fourth`].
pub fn theta_nullwert(kind: ThetaKind, q_order: u32) -> Result<HalfQSeries<Rational>> {
    match kind {
        ThetaKind::Theta => Ok(HalfQSeries::zero((), q_order)),
        ThetaKind::Theta1 => Err(Error::FractionalExponent),
        ThetaKind::Theta2 => Ok(product_series(q_order, &[(0, false, 1), (1, false, 2)])),
        ThetaKind::Theta3 => Ok(product_series(q_order, &[(0, false, 1), (1, true, 2)])),
    }
}

/// Fourth power of a theta nullwert; integral in `q^{1/2}` for every kind.
pub fn theta_nullwert_fourth(kind: ThetaKind, q_order: u32) -> HalfQSeries<Rational> {
    match kind {
        ThetaKind::Theta1 => {
            let body = product_series(q_order, &[(0, false, 4), (0, true, 8)]);
            HalfQSeries::monomial((), 1, int(16), q_order).mul(&body).expect("rational ring")
        }
        other => theta_nullwert(other, q_order).expect("integral kinds").pow(4),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CongruenceGroup {
    /// Lower-left entry even.
    #[serde(rename = "Gamma_0(2)")]
    LowerLevel2,
    /// Upper-right entry even.
    #[serde(rename = "Gamma^0(2)")]
    UpperLevel2,
}

impl fmt::Display for CongruenceGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CongruenceGroup::LowerLevel2 => f.write_str("Gamma_0(2)"),
            CongruenceGroup::UpperLevel2 => f.write_str("Gamma^0(2)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModularFormSeries {
    pub series: HalfQSeries<Rational>,
    pub weight: u32,
    pub group: Option<CongruenceGroup>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeltaEps {
    Delta1,
    Eps1,
    Delta2,
    Eps2,
}

impl DeltaEps {
    pub const ALL: [DeltaEps; 4] = [DeltaEps::Delta1, DeltaEps::Eps1, DeltaEps::Delta2, DeltaEps::Eps2];

    pub fn as_str(self) -> &'static str {
        match self {
            DeltaEps::Delta1 => "delta1",
            DeltaEps::Eps1 => "eps1",
            DeltaEps::Delta2 => "delta2",
            DeltaEps::Eps2 => "eps2",
        }
    }
}

impl FromStr for DeltaEps {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "delta1" => Ok(DeltaEps::Delta1),
            "eps1" | "epsilon1" => Ok(DeltaEps::Eps1),
            "delta2" => Ok(DeltaEps::Delta2),
            "eps2" | "epsilon2" => Ok(DeltaEps::Eps2),
            other => Err(Error::Parse(format!("unknown form {other:?} (delta1, eps1, delta2, eps2)"))),
        }
    }
}

/// `δ₁ = (θ₂⁴+θ₃⁴)/8`, `ε₁ = θ₂⁴θ₃⁴/16`, `δ₂ = -(θ₁⁴+θ₃⁴)/8`, `ε₂ = θ₁⁴θ₃⁴/16`.
pub fn delta_epsilon(which: DeltaEps, q_order: u32) -> ModularFormSeries {
    let t3 = theta_nullwert_fourth(ThetaKind::Theta3, q_order);
    let other = match which {
        DeltaEps::Delta1 | DeltaEps::Eps1 => theta_nullwert_fourth(ThetaKind::Theta2, q_order),
        DeltaEps::Delta2 | DeltaEps::Eps2 => theta_nullwert_fourth(ThetaKind::Theta1, q_order),
    };
    let (series, weight) = match which {
        DeltaEps::Delta1 => (other.add(&t3).expect("rational").scale(&rat(1, 8)), 2),
        DeltaEps::Delta2 => (other.add(&t3).expect("rational").scale(&rat(-1, 8)), 2),
        DeltaEps::Eps1 | DeltaEps::Eps2 => (other.mul(&t3).expect("rational").scale(&rat(1, 16)), 4),
    };
    let group = match which {
        DeltaEps::Delta1 | DeltaEps::Eps1 => CongruenceGroup::LowerLevel2,
        DeltaEps::Delta2 | DeltaEps::Eps2 => CongruenceGroup::UpperLevel2,
    };
    ModularFormSeries { series, weight, group: Some(group) }
}

/// `(8δ₂)^{weight/2 - 2r} ε₂^r` for `r = 0..=weight/4`.
pub fn modular_basis(weight: u32, q_order: u32) -> Result<Vec<HalfQSeries<Rational>>> {
    if !weight.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("odd weight {weight} has no level-2 basis")));
    }
    let d = delta_epsilon(DeltaEps::Delta2, q_order).series.scale(&int(8));
    let e = delta_epsilon(DeltaEps::Eps2, q_order).series;
    Ok((0..=weight / 4).map(|r| d.pow(weight / 2 - 2 * r).mul(&e.pow(r)).expect("rational")).collect())
}

/// Result of matching a series against the level-2 basis.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisFit<C: Coefficient> {
    pub coefficients: Vec<C>,
    /// `f - Σ h_r g_r` over the full available truncation.
    pub residual: HalfQSeries<C>,
}

fn diagonal(g: &HalfQSeries<Rational>, r: u32) -> Result<Rational> {
    let d = g.coeff2(r);
    if d.abs() != Rational::one() {
        return Err(Error::SingularSystem(r as usize));
    }
    Ok(d)
}

/// Solves `f = Σ h_r (8δ₂)^{w/2-2r} ε₂^r` on the first `w/4 + 1` coefficients and
/// reports the reconstruction residual over the whole truncation of `f`.
pub fn basis_fit<C: Coefficient>(f: &HalfQSeries<C>, weight: u32) -> Result<BasisFit<C>> {
    let n = weight / 4 + 1;
    if f.order2() < n {
        return Err(Error::InsufficientTruncation { have: f.order2() as usize, need: n as usize });
    }
    let ring = f.ring_id().clone();
    let basis = modular_basis(weight, f.order2())?;
    let mut h: Vec<C> = Vec::with_capacity(n as usize);
    for r in 0..n {
        let mut acc = f.coeff2(r);
        for (s, hs) in h.iter().enumerate() {
            acc = acc.minus(&hs.scaled(&basis[s].coeff2(r)));
        }
        h.push(acc.scaled(&diagonal(&basis[r as usize], r)?.recip()));
    }
    let mut recon = HalfQSeries::zero(ring.clone(), f.order2());
    for (g, hr) in basis.iter().zip(&h) {
        recon = recon.add(&g.lift::<C>(&ring).scale_by(hr)?)?;
    }
    Ok(BasisFit { coefficients: h, residual: f.sub(&recon)? })
}

/// Like [`basis_fit`] but rejects inputs outside the span.
pub fn basis_decompose<C: Coefficient>(f: &HalfQSeries<C>, weight: u32) -> Result<Vec<C>> {
    let fit = basis_fit(f, weight)?;
    if let Some((e, _)) = fit.residual.terms().next() {
        return Err(Error::NotInSpan { exp2: e.twice_value() });
    }
    Ok(fit.coefficients)
}

/// Which family of virtual bundles a fiber dimension admits for a given `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecompositionCase {
    /// Fiber dimension `8m+1, 8m+2, 8m+3`: bundles `b_r`, form degree `8m+4`.
    B,
    /// Fiber dimension `8m-1, 8m-2, 8m-3`, `m ≥ 1`: bundles `z_r`, form degree `8m`.
    Z,
}

impl DecompositionCase {
    pub fn classify(m: u32, fiber_dim: u32) -> Result<Self> {
        if (8 * m + 1..=8 * m + 3).contains(&fiber_dim) {
            Ok(DecompositionCase::B)
        } else if m >= 1 && (8 * m - 3..=8 * m - 1).contains(&fiber_dim) {
            Ok(DecompositionCase::Z)
        } else {
            Err(Error::FiberDimMismatch {
                fiber_dim,
                m,
                reason: "expected 8m+1..8m+3, or 8m-3..8m-1 with m >= 1".into(),
            })
        }
    }

    /// The `(m, case)` pairs admitted by a fiber dimension.
    pub fn for_dimension(fiber_dim: u32) -> Vec<(u32, Self)> {
        (0..=fiber_dim / 8 + 1).filter_map(|m| Self::classify(m, fiber_dim).ok().map(|c| (m, c))).collect()
    }

    /// Form degree of the identity: `8m+4` or `8m`.
    pub fn form_degree(self, m: u32) -> u32 {
        match self {
            DecompositionCase::B => 8 * m + 4,
            DecompositionCase::Z => 8 * m,
        }
    }

    /// Modular weight of the form: `4m+2` or `4m`.
    pub fn weight(self, m: u32) -> u32 {
        self.form_degree(m) / 2
    }

    pub fn letter(self) -> char {
        match self {
            DecompositionCase::B => 'b',
            DecompositionCase::Z => 'z',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theta2Decomposition {
    pub case: DecompositionCase,
    pub m: u32,
    /// `b_0..b_m` or `z_0..z_m`, labelled.
    pub elements: Vec<CharacterElement>,
    /// `elements[r] = Σ_j combination[r][j] · B_j`.
    pub combination: Vec<Vec<BigInt>>,
}

/// Solves `Θ₂ ≡ Σ_r b_r (8δ₂)^{2m+1-2r} ε₂^r` (or the `z_r` analogue) modulo
/// `q^{(m+1)/2}` from an already built `Θ₂`.
pub fn decompose_theta2_series(m: u32, theta2: &ThetaBundleSeries) -> Result<Theta2Decomposition> {
    if theta2.kind() != ThetaBundleKind::Theta2 {
        return Err(Error::InvalidArgument("decomposition needs the Theta2 bundle".into()));
    }
    let profile = theta2.profile();
    let case = DecompositionCase::classify(m, profile.fiber_dim())?;
    let window = m + 1;
    if theta2.order2() < window {
        return Err(Error::InsufficientTruncation { have: theta2.order2() as usize, need: window as usize });
    }
    let basis = modular_basis(case.weight(m), window)?;

    // Rows of the inverse of the lower-triangular matrix [g_s]_r.
    let mut comb: Vec<Vec<Rational>> = Vec::with_capacity(window as usize);
    for r in 0..window {
        let mut row = vec![Rational::zero(); window as usize];
        row[r as usize] = Rational::one();
        for (s, prev) in comb.iter().enumerate() {
            let g = basis[s].coeff2(r);
            for (x, p) in row.iter_mut().zip(prev) {
                *x -= &g * p;
            }
        }
        let d_inv = diagonal(&basis[r as usize], r)?.recip();
        comb.push(row.into_iter().map(|x| x * &d_inv).collect());
    }
    if comb.iter().flatten().any(|x| !x.is_integer()) {
        return Err(Error::InvalidArgument("combination matrix is not integral".into()));
    }

    let coeffs: Vec<CharacterElement> =
        (0..window).map(|j| theta2.extract_fourier(HalfExp(j))).collect::<Result<_>>()?;
    let mut elements = Vec::with_capacity(window as usize);
    for (r, row) in comb.iter().enumerate() {
        let mut acc = CharacterElement::trivial(profile, 0);
        for (c, bj) in row.iter().zip(&coeffs) {
            let n: i64 =
                c.to_integer().try_into().map_err(|_| Error::InvalidArgument("combination overflow".into()))?;
            acc = acc.add(&bj.scale(n))?;
        }
        elements.push(acc.with_label(format!("{}_{r}", case.letter())));
    }

    // The matched window must reproduce Θ₂ exactly.
    let theta_window = theta2.series().truncate(window);
    let mut recon = HalfQSeries::zero(profile, window);
    for (g, b) in basis.iter().zip(&elements) {
        recon = recon.add(&g.lift(&profile).scale_by(&b.character())?)?;
    }
    if let Some((e, _)) = theta_window.sub(&recon)?.terms().next() {
        return Err(Error::NotInSpan { exp2: e.twice_value() });
    }

    Ok(Theta2Decomposition {
        case,
        m,
        elements,
        combination: comb.into_iter().map(|row| row.into_iter().map(|x| x.to_integer()).collect()).collect(),
    })
}

/// Fetches `Θ₂` over the matched window and decomposes it.
pub fn decompose_theta2(m: u32, profile: RootProfile, source: &dyn ThetaSource) -> Result<Theta2Decomposition> {
    DecompositionCase::classify(m, profile.fiber_dim())?;
    let theta2 = source.theta_bundle(ThetaBundleKind::Theta2, profile, m + 1)?;
    decompose_theta2_series(m, &theta2)
}
