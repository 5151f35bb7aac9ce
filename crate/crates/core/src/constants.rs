//! Explicit constants appearing in the variance and moment bounds, evaluated
//! in double-double precision and returned as `f64`.
//!
//! Exponents like `(16a - 10)/a` amplify rounding near the domain edges, so
//! every evaluator works in extended precision internally. Preconditions are
//! strict inequalities with no epsilon slack; pass interior points if you
//! want limit behaviour.

use crate::error::{Error, Result};
use serde::Serialize;
use twofloat::TwoFloat;

/// Double-double elementary functions built on the (exact) TwoFloat
/// arithmetic kernels. The library's own exp/ln lose ~1e-14 through a
/// range-reduction defect at negative arguments, which the exponents here
/// would amplify past the 1e-12 contract; a Taylor exp with proper
/// round-to-nearest reduction and a Newton-polished ln stay at the
/// double-double noise floor.
mod ddmath {
    use twofloat::TwoFloat;

    fn ln2() -> TwoFloat {
        // hi + lo covers ln 2 to 107 bits
        TwoFloat::new_add(std::f64::consts::LN_2, 2.319_046_813_846_299_6e-17)
    }

    pub fn exp(x: TwoFloat) -> TwoFloat {
        let xf = f64::from(x);
        if xf < -709.0 {
            return TwoFloat::from(0.0);
        }
        if xf > 709.0 {
            return TwoFloat::from(f64::INFINITY);
        }
        let k = (xf / std::f64::consts::LN_2).round();
        let r = x - ln2() * TwoFloat::from(k);
        // |r| <= ln2/2; 26 Taylor terms reach the dd noise floor
        let mut term = TwoFloat::from(1.0);
        let mut sum = TwoFloat::from(1.0);
        for n in 1..=26 {
            term = term * r / TwoFloat::from(n as f64);
            sum += term;
        }
        sum * TwoFloat::from(2f64.powi(k as i32))
    }

    pub fn ln(x: TwoFloat) -> TwoFloat {
        let mut y = TwoFloat::from(f64::from(x).ln());
        for _ in 0..2 {
            y = y + x * exp(-y) - TwoFloat::from(1.0);
        }
        y
    }

    /// x^y for x >= 0, with 0^positive = 0.
    pub fn pow(x: TwoFloat, y: TwoFloat) -> TwoFloat {
        if x == TwoFloat::from(0.0) {
            TwoFloat::from(0.0)
        } else {
            exp(y * ln(x))
        }
    }
}

trait Pow {
    fn pow(self, y: Self) -> Self;
}

impl Pow for TwoFloat {
    fn pow(self, y: TwoFloat) -> TwoFloat {
        ddmath::pow(self, y)
    }
}

/// Inputs echoed alongside every evaluated constant.
#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct ConstantInputs {
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub cheeger: Option<f64>,
    pub lambda: Option<f64>,
}

/// An evaluated constant with its validity domain.
#[derive(Debug, Clone, Serialize)]
pub struct BoundConstants {
    pub name: String,
    pub value: f64,
    pub domain_note: String,
    pub inputs: ConstantInputs,
}

fn finish(
    name: &str,
    value: TwoFloat,
    domain: &str,
    inputs: ConstantInputs,
) -> Result<BoundConstants> {
    let v = f64::from(value);
    if !(v.is_finite() && v > 0.0) {
        return Err(Error::numeric(format!(
            "constant {name} evaluated to a non-finite or non-positive value ({v})"
        )));
    }
    Ok(BoundConstants {
        name: name.to_string(),
        value: v,
        domain_note: domain.to_string(),
        inputs,
    })
}

fn check_alpha_half(alpha: f64, who: &str) -> Result<()> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "{who} requires 1/2 < alpha < 1 (got {alpha})"
        )));
    }
    Ok(())
}

fn check_beta(alpha: f64, beta: f64, who: &str) -> Result<()> {
    if !(beta >= 1.0 && beta < alpha / (1.0 - alpha)) {
        return Err(Error::domain(format!(
            "{who} requires 1 <= beta < alpha/(1-alpha) = {} (got beta={beta})",
            alpha / (1.0 - alpha)
        )));
    }
    Ok(())
}

fn check_gamma_lt(alpha: f64, gamma: f64, who: &str) -> Result<()> {
    if !(gamma >= 1.0 && gamma < alpha / (1.0 - alpha)) {
        return Err(Error::domain(format!(
            "{who} requires 1 <= gamma < alpha/(1-alpha) = {} (got gamma={gamma})",
            alpha / (1.0 - alpha)
        )));
    }
    Ok(())
}

fn check_cheeger(cheeger: f64, who: &str) -> Result<()> {
    if !(cheeger > 0.0) {
        return Err(Error::domain(format!(
            "{who} requires cheeger > 0 (got {cheeger})"
        )));
    }
    Ok(())
}

/// c1: constant of the truncation inequality,
/// `1 + I^{b/a} (a/(1-a))^b (a/(a - b(1-a))) 2^{g - (g-1) b (1-a)/a}`.
///
/// Accepts `cheeger = 0`, where the I-term vanishes and the value is 1.
pub fn truncation_constant(
    alpha: f64,
    beta: f64,
    gamma: f64,
    cheeger: f64,
) -> Result<BoundConstants> {
    const WHO: &str = "truncation constant c1";
    check_alpha_half(alpha, WHO)?;
    check_beta(alpha, beta, WHO)?;
    if !(gamma >= 1.0 && gamma <= beta) {
        return Err(Error::domain(format!(
            "{WHO} requires 1 <= gamma <= beta (got gamma={gamma}, beta={beta})"
        )));
    }
    if !(cheeger >= 0.0) {
        return Err(Error::domain(format!(
            "{WHO} requires cheeger >= 0 (got {cheeger})"
        )));
    }
    let inputs = ConstantInputs {
        alpha: Some(alpha),
        beta: Some(beta),
        gamma: Some(gamma),
        cheeger: Some(cheeger),
        lambda: None,
    };
    let a = TwoFloat::from(alpha);
    let b = TwoFloat::from(beta);
    let g = TwoFloat::from(gamma);
    let one = TwoFloat::from(1.0);
    let term = if cheeger == 0.0 {
        TwoFloat::from(0.0)
    } else {
        let i = TwoFloat::from(cheeger);
        i.pow(b / a)
            * (a / (one - a)).pow(b)
            * (a / (a - b * (one - a)))
            * TwoFloat::from(2.0).pow(g - (g - one) * b * (one - a) / a)
    };
    finish(
        "c1",
        one + term,
        "1/2 < alpha < 1, 1 <= beta < alpha/(1-alpha), 1 <= gamma <= beta, cheeger >= 0",
        inputs,
    )
}

fn tail_area_tf(alpha: f64, gamma: f64, cheeger: f64) -> TwoFloat {
    let a = TwoFloat::from(alpha);
    let g = TwoFloat::from(gamma);
    let i = TwoFloat::from(cheeger);
    let one = TwoFloat::from(1.0);
    i.pow(g / a) * (a / (one - a)).pow(g) * (g * (one - a) / (a + g * a - g))
}

/// c2: the majorant tail-area constant
/// `I^{g/a} (a/(1-a))^g (g(1-a) / (a + g a - g))`.
pub fn tail_area_constant(alpha: f64, gamma: f64, cheeger: f64) -> Result<BoundConstants> {
    const WHO: &str = "tail-area constant c2";
    check_alpha_half(alpha, WHO)?;
    check_gamma_lt(alpha, gamma, WHO)?;
    check_cheeger(cheeger, WHO)?;
    finish(
        "c2",
        tail_area_tf(alpha, gamma, cheeger),
        "1/2 < alpha < 1, 1 <= gamma < alpha/(1-alpha), cheeger > 0",
        ConstantInputs {
            alpha: Some(alpha),
            gamma: Some(gamma),
            cheeger: Some(cheeger),
            ..Default::default()
        },
    )
}

fn half_mass_tf(alpha: f64, gamma: f64, cheeger: f64) -> TwoFloat {
    let a = TwoFloat::from(alpha);
    let g = TwoFloat::from(gamma);
    let c2 = tail_area_tf(alpha, gamma, cheeger);
    (TwoFloat::from(2.0) * c2).pow(-a / (a + g * a - g))
}

/// c3 = (2 c2)^{-a/(a + g a - g)}: lower bound rate for the half-mass point.
pub fn half_mass_constant(alpha: f64, gamma: f64, cheeger: f64) -> Result<BoundConstants> {
    const WHO: &str = "half-mass constant c3";
    check_alpha_half(alpha, WHO)?;
    check_gamma_lt(alpha, gamma, WHO)?;
    check_cheeger(cheeger, WHO)?;
    finish(
        "c3",
        half_mass_tf(alpha, gamma, cheeger),
        "1/2 < alpha < 1, 1 <= gamma < alpha/(1-alpha), cheeger > 0",
        ConstantInputs {
            alpha: Some(alpha),
            gamma: Some(gamma),
            cheeger: Some(cheeger),
            ..Default::default()
        },
    )
}

fn tail_moment_tf(alpha: f64, beta: f64, gamma: f64, cheeger: f64) -> TwoFloat {
    half_mass_tf(alpha, gamma, cheeger).pow(TwoFloat::from(beta) - TwoFloat::from(1.0))
        / TwoFloat::from(2.0)
}

/// c4 = c3^{beta-1} / 2: constant of the tail-moment lower bound. At
/// beta = 1 it is exactly 1/2 for any admissible (alpha, gamma, I).
pub fn tail_moment_constant(
    alpha: f64,
    beta: f64,
    gamma: f64,
    cheeger: f64,
) -> Result<BoundConstants> {
    const WHO: &str = "tail-moment constant c4";
    check_alpha_half(alpha, WHO)?;
    check_gamma_lt(alpha, gamma, WHO)?;
    check_cheeger(cheeger, WHO)?;
    if !(beta >= 1.0) {
        return Err(Error::domain(format!(
            "{WHO} requires beta >= 1 (got {beta})"
        )));
    }
    finish(
        "c4",
        tail_moment_tf(alpha, beta, gamma, cheeger),
        "1/2 < alpha < 1, beta >= 1, 1 <= gamma < alpha/(1-alpha), cheeger > 0",
        ConstantInputs {
            alpha: Some(alpha),
            beta: Some(beta),
            gamma: Some(gamma),
            cheeger: Some(cheeger),
            ..Default::default()
        },
    )
}

/// All three auxiliary constants c2, c3, c4 for one parameter set.
pub fn auxiliary_constants(
    alpha: f64,
    beta: f64,
    gamma: f64,
    cheeger: f64,
) -> Result<[BoundConstants; 3]> {
    Ok([
        tail_area_constant(alpha, gamma, cheeger)?,
        half_mass_constant(alpha, gamma, cheeger)?,
        tail_moment_constant(alpha, beta, gamma, cheeger)?,
    ])
}

/// C1: moment bound constant,
/// `I^{a - b(1-a)} [1 + 2 I^{b/a} (a/(1-a))^b (a/(a-b(1-a)))]`.
/// Bounds E|f - med|^b by C1 * (E|grad f|)^{a - b(1-a)}.
pub fn moment_bound_constant(alpha: f64, beta: f64, cheeger: f64) -> Result<BoundConstants> {
    const WHO: &str = "moment bound constant C1";
    check_alpha_half(alpha, WHO)?;
    check_beta(alpha, beta, WHO)?;
    check_cheeger(cheeger, WHO)?;
    let a = TwoFloat::from(alpha);
    let b = TwoFloat::from(beta);
    let i = TwoFloat::from(cheeger);
    let one = TwoFloat::from(1.0);
    let bracket = one
        + TwoFloat::from(2.0) * i.pow(b / a) * (a / (one - a)).pow(b) * (a / (a - b * (one - a)));
    finish(
        "C1",
        i.pow(a - b * (one - a)) * bracket,
        "1/2 < alpha < 1, 1 <= beta < alpha/(1-alpha), cheeger > 0",
        ConstantInputs {
            alpha: Some(alpha),
            beta: Some(beta),
            cheeger: Some(cheeger),
            ..Default::default()
        },
    )
}

fn variance_bound_tf(alpha: f64, cheeger: f64) -> TwoFloat {
    let a = TwoFloat::from(alpha);
    let i = TwoFloat::from(cheeger);
    let one = TwoFloat::from(1.0);
    let two = TwoFloat::from(2.0);
    let bracket =
        two * i.pow(two / a) * (two * a * a / ((TwoFloat::from(3.0) * a - two) * (one - a)));
    two.pow((TwoFloat::from(16.0) * a - TwoFloat::from(10.0)) / a)
        * i.pow((TwoFloat::from(6.0) * a - TwoFloat::from(4.0)) / a)
        * bracket.pow(two * (one - a) / a)
}

/// C2: variance bound constant. Bounds E|f - med|^2 by
/// C2 * (E|grad f|^2)^{(3a-2)/a} whenever the alpha-Cheeger certificate
/// holds with 2/3 < alpha < 1.
pub fn variance_bound_constant(alpha: f64, cheeger: f64) -> Result<BoundConstants> {
    const WHO: &str = "variance bound constant C2";
    if !(alpha > 2.0 / 3.0 && alpha < 1.0) {
        return Err(Error::domain(format!(
            "{WHO} requires 2/3 < alpha < 1 (got {alpha})"
        )));
    }
    check_cheeger(cheeger, WHO)?;
    finish(
        "C2",
        variance_bound_tf(alpha, cheeger),
        "2/3 < alpha < 1, cheeger > 0",
        ConstantInputs {
            alpha: Some(alpha),
            cheeger: Some(cheeger),
            ..Default::default()
        },
    )
}

/// C3: first-moment bound constant,
/// `2 (2I)^{(2a-1)/a} [2 I^{1/a} (a/(2a-1))]^{(1-a)/a}`.
pub fn mean_bound_constant(alpha: f64, cheeger: f64) -> Result<BoundConstants> {
    const WHO: &str = "mean bound constant C3";
    check_alpha_half(alpha, WHO)?;
    check_cheeger(cheeger, WHO)?;
    let a = TwoFloat::from(alpha);
    let i = TwoFloat::from(cheeger);
    let one = TwoFloat::from(1.0);
    let two = TwoFloat::from(2.0);
    let bracket = two * i.pow(one / a) * (a / (two * a - one));
    finish(
        "C3",
        two * (two * i).pow((two * a - one) / a) * bracket.pow((one - a) / a),
        "1/2 < alpha < 1, cheeger > 0",
        ConstantInputs {
            alpha: Some(alpha),
            cheeger: Some(cheeger),
            ..Default::default()
        },
    )
}

/// C(lambda): the product-measure variance constant for the power-law family,
/// `2^{(6L-16)/(L-1)} (L-1)^{-(2L-6)/L} (4/(L-3))^{2/(L-1)}`.
pub fn pareto_product_constant(lambda: f64) -> Result<BoundConstants> {
    if !(lambda > 3.0) {
        return Err(Error::domain(format!(
            "pareto product constant requires lambda > 3 (got {lambda})"
        )));
    }
    let l = TwoFloat::from(lambda);
    let one = TwoFloat::from(1.0);
    let v = TwoFloat::from(2.0).pow((TwoFloat::from(6.0) * l - TwoFloat::from(16.0)) / (l - one))
        * (l - one).pow(-(TwoFloat::from(2.0) * l - TwoFloat::from(6.0)) / l)
        * (TwoFloat::from(4.0) / (l - TwoFloat::from(3.0))).pow(TwoFloat::from(2.0) / (l - one));
    finish(
        "C_pareto",
        v,
        "lambda > 3",
        ConstantInputs {
            lambda: Some(lambda),
            ..Default::default()
        },
    )
}

/// The alternative instantiation of C(lambda) appearing with the exponent
/// `-L/(L-1)` on the certificate: C2((L-1)/L, (L-1)^{-L/(L-1)}). The two
/// disagree; both are reported side by side and neither is adjudicated.
pub fn pareto_product_constant_alt(lambda: f64) -> Result<BoundConstants> {
    if !(lambda > 3.0) {
        return Err(Error::domain(format!(
            "pareto product constant (alt) requires lambda > 3 (got {lambda})"
        )));
    }
    let l = TwoFloat::from(lambda);
    let one = TwoFloat::from(1.0);
    let alpha = f64::from((l - one) / l);
    let cheeger = f64::from((l - one).pow(-l / (l - one)));
    let mut c = variance_bound_constant(alpha, cheeger)?;
    c.name = "C_pareto_alt".to_string();
    c.inputs.lambda = Some(lambda);
    Ok(c)
}

/// Half-line certificate for the power-law measure: alpha = (L-1)/L and
/// I(mu_L, alpha) <= (L-1)^{-(L-1)/L}, valid for lambda > 2.
pub fn pareto_cheeger_certificate(lambda: f64) -> Result<BoundConstants> {
    if !(lambda > 2.0) {
        return Err(Error::domain(format!(
            "pareto cheeger certificate requires lambda > 2 (got {lambda})"
        )));
    }
    let l = TwoFloat::from(lambda);
    let one = TwoFloat::from(1.0);
    let alpha = (l - one) / l;
    let bound = (l - one).pow(-alpha);
    finish(
        "I_pareto",
        bound,
        "lambda > 2; certificate holds at alpha = (lambda-1)/lambda",
        ConstantInputs {
            alpha: Some(f64::from(alpha)),
            lambda: Some(lambda),
            ..Default::default()
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    // Golden values frozen from a 60-digit arbitrary-precision evaluation
    // of the same formulas at exact rational inputs.
    const C1_08_1_1: f64 = 11.666_666_666_666_666; // 35/3
    const C1_09_2_1: f64 = 209.285_714_285_714_28; // 1465/7
    const C2_08_1: f64 = 64.0;
    const C2_09_1: f64 = 69.470_676_454_053_32;
    const C3_08_1: f64 = 4.298_279_727_294_168;
    const C_PARETO_5: f64 = 5.278_031_643_091_577; // 2^2.4
    const C_PARETO_7: f64 = 2.601_043_406_554_304_7;
    const PCB_5: f64 = 0.329_876_977_693_223_55; // 4^{-4/5}
    const PCB_4: f64 = 0.438_691_337_650_830_8; // 3^{-3/4}

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn golden_values_match_high_precision_oracle() {
        assert!(close(
            moment_bound_constant(0.8, 1.0, 1.0).unwrap().value,
            C1_08_1_1,
            1e-12
        ));
        assert!(close(
            moment_bound_constant(0.9, 2.0, 1.0).unwrap().value,
            C1_09_2_1,
            1e-12
        ));
        assert!(close(
            variance_bound_constant(0.8, 1.0).unwrap().value,
            C2_08_1,
            1e-12
        ));
        assert!(close(
            variance_bound_constant(0.9, 1.0).unwrap().value,
            C2_09_1,
            1e-12
        ));
        assert!(close(
            mean_bound_constant(0.8, 1.0).unwrap().value,
            C3_08_1,
            1e-12
        ));
        assert!(close(
            pareto_product_constant(5.0).unwrap().value,
            C_PARETO_5,
            1e-12
        ));
        assert!(close(
            pareto_product_constant(7.0).unwrap().value,
            C_PARETO_7,
            1e-12
        ));
        assert!(close(
            pareto_cheeger_certificate(5.0).unwrap().value,
            PCB_5,
            1e-12
        ));
        assert!(close(
            pareto_cheeger_certificate(4.0).unwrap().value,
            PCB_4,
            1e-12
        ));
    }

    #[test]
    fn auxiliaries_match_hand_evaluation() {
        // alpha=0.8, gamma=2, I=1: c2 = 16, c3 = 32^{-2} = 1/1024
        assert!(close(
            tail_area_constant(0.8, 2.0, 1.0).unwrap().value,
            16.0,
            1e-13
        ));
        assert!(close(
            half_mass_constant(0.8, 2.0, 1.0).unwrap().value,
            1.0 / 1024.0,
            1e-13
        ));
        // c1(0.8,1,1,1) = 35/3
        assert!(close(
            truncation_constant(0.8, 1.0, 1.0, 1.0).unwrap().value,
            C1_08_1_1,
            1e-13
        ));
        // beta=1 collapses c4 to exactly 1/2
        for (alpha, gamma, i) in [(0.8, 2.0, 1.0), (0.75, 1.5, 0.3), (0.9, 3.0, 2.0)] {
            let c4 = tail_moment_constant(alpha, 1.0, gamma, i).unwrap().value;
            assert_eq!(c4, 0.5, "alpha={alpha}");
        }
    }

    #[test]
    fn zero_cheeger_collapses_truncation_constant_to_one() {
        assert_eq!(truncation_constant(0.8, 1.0, 1.0, 0.0).unwrap().value, 1.0);
    }

    #[test]
    fn strict_boundaries_error() {
        // beta at the alpha/(1-alpha) pole; alpha = 0.75 keeps the pole
        // exactly representable (0.75/0.25 = 3)
        assert!(truncation_constant(0.75, 3.0, 1.0, 1.0).is_err());
        assert!(moment_bound_constant(0.75, 3.0, 1.0).is_err());
        // alpha at or below 2/3 for C2
        assert!(variance_bound_constant(2.0 / 3.0, 1.0).is_err());
        assert!(variance_bound_constant(0.5, 1.0).is_err());
        // alpha at 1/2 for C3
        assert!(mean_bound_constant(0.5, 1.0).is_err());
        // lambda poles
        assert!(pareto_product_constant(3.0).is_err());
        assert!(pareto_cheeger_certificate(2.0).is_err());
    }

    #[test]
    fn interior_values_are_finite_and_positive() {
        for alpha in [0.55, 0.7, 0.85, 0.99] {
            let v = mean_bound_constant(alpha, 0.7).unwrap().value;
            assert!(v.is_finite() && v > 0.0);
        }
        for alpha in [0.67, 0.75, 0.9, 0.99] {
            let v = variance_bound_constant(alpha, 0.7).unwrap().value;
            assert!(v.is_finite() && v > 0.0);
        }
    }

    #[test]
    fn c3_consistency_with_tail_moment_route() {
        // C3(a, I) = 2 I^{(2a-1)/a} c4(a, 1/a, 1, I)^{-(2a-1)/a}
        for (alpha, i) in [(0.8, 1.0), (0.75, 0.33), (0.9, 2.5), (0.6, 0.9)] {
            let direct = mean_bound_constant(alpha, i).unwrap().value;
            let c4 = tail_moment_constant(alpha, 1.0 / alpha, 1.0, i)
                .unwrap()
                .value;
            let via =
                2.0 * i.powf((2.0 * alpha - 1.0) / alpha) * c4.powf(-(2.0 * alpha - 1.0) / alpha);
            assert!(
                close(direct, via, 1e-12),
                "alpha={alpha}: {direct} vs {via}"
            );
        }
    }

    #[test]
    fn c2_consistency_with_tail_moment_route() {
        // C2(a, I) = 2^{(10a-6)/a} I^{(6a-4)/a} c4(a, 1/a, 2, I)^{-(6a-4)/a}
        for (alpha, i) in [(0.8, 1.0), (0.7, 0.33), (0.9, 2.5)] {
            let direct = variance_bound_constant(alpha, i).unwrap().value;
            let c4 = tail_moment_constant(alpha, 1.0 / alpha, 2.0, i)
                .unwrap()
                .value;
            let e = (6.0 * alpha - 4.0) / alpha;
            let via = 2f64.powf((10.0 * alpha - 6.0) / alpha) * i.powf(e) * c4.powf(-e);
            assert!(
                close(direct, via, 1e-12),
                "alpha={alpha}: {direct} vs {via}"
            );
        }
    }

    #[test]
    #[allow(clippy::excessive_precision)] // literals carry the oracle's digits
    fn wide_domain_sweep_matches_high_precision_oracle() {
        // 50-digit evaluations of the same formulas across the validity
        // domains, including near-edge parameters where the exponents
        // amplify rounding hardest
        enum Kind {
            C1,
            C2,
            C3,
            SmallC1,
            SmallC4,
            CLam,
        }
        use Kind::*;
        let table: &[(Kind, [f64; 4], f64)] = &[
            (C2, [0.67, 0.0, 0.0, 0.001], 1.280098054749950829e-6),
            (C2, [0.7, 0.0, 0.0, 0.33], 5.690681550228490144),
            (C2, [0.75, 0.0, 0.0, 7.0], 8055.209954425042369),
            (C2, [0.9, 0.0, 0.0, 1000.0], 97712398.96010482606),
            (C2, [0.99, 0.0, 0.0, 0.5], 16.83634459313148864),
            (C2, [0.999, 0.0, 0.0, 2.0], 258.4878072218860366),
            (C3, [0.51, 0.0, 0.0, 0.001], 0.00015279960825719776),
            (C3, [0.6, 0.0, 0.0, 0.33], 1.677493952536437672),
            (C3, [0.75, 0.0, 0.0, 7.0], 39.78825566677255196),
            (C3, [0.99, 0.0, 0.0, 1000.0], 4003.230705083363334),
            (C1, [0.8, 3.9, 0.0, 0.33], 79.36608970504010288),
            (C1, [0.9, 8.9, 0.0, 1.5], 3098408296038.946091),
            (C1, [0.6, 1.49, 0.0, 7.0], 69429.50351875473297),
            (C1, [0.51, 1.0, 0.0, 0.001], 0.871024206522297896),
            (SmallC1, [0.8, 3.9, 2.0, 0.33], 82.54646887546221688),
            (SmallC1, [0.9, 5.0, 3.0, 1.5], 4680498.86925939118),
            (SmallC1, [0.75, 2.9, 1.0, 7.0], 2688533.621941508248),
            (SmallC4, [0.8, 1.25, 2.0, 0.33], 0.3533886446589800357),
            (SmallC4, [0.9, 4.0, 6.0, 1.5], 1.534118931588755208e-68),
            (SmallC4, [0.67, 1.0, 1.9, 0.7], 0.5),
            (CLam, [3.001, 0.0, 0.0, 0.0], 7977.031214696438701),
            (CLam, [3.5, 0.0, 0.0, 0.0], 16.2493066878051191),
            (CLam, [20.0, 0.0, 0.0, 0.0], 0.2556912164830880298),
            (CLam, [100.0, 0.0, 0.0, 0.0], 0.00752084523141877493),
        ];
        for (kind, [a, b, g, i], expect) in table {
            let got = match kind {
                C1 => moment_bound_constant(*a, *b, *i).unwrap().value,
                C2 => variance_bound_constant(*a, *i).unwrap().value,
                C3 => mean_bound_constant(*a, *i).unwrap().value,
                SmallC1 => truncation_constant(*a, *b, *g, *i).unwrap().value,
                SmallC4 => tail_moment_constant(*a, *b, *g, *i).unwrap().value,
                CLam => pareto_product_constant(*a).unwrap().value,
            };
            assert!(
                close(got, *expect, 1e-12),
                "inputs [{a},{b},{g},{i}]: {got} vs {expect}"
            );
        }
    }

    #[test]
    fn alt_pareto_constant_differs_and_is_reported() {
        let main = pareto_product_constant(5.0).unwrap().value;
        let alt = pareto_product_constant_alt(5.0).unwrap().value;
        assert!(main > alt, "statement {main} vs proof-text {alt}");
        assert!((alt - 1.296_839_554_651_009_6).abs() < 1e-12);
    }
}
