//! Symmetric triangle rules in barycentric coordinates. Weights sum to one and
//! are scaled by the triangle area at the call site.

/// A quadrature point: barycentric coordinates and area-relative weight.
pub type QuadPoint = ([f64; 3], f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureRule {
    /// Three edge midpoints, exact for quadratics.
    EdgeMidpoint,
    /// Six points, exact for degree 4.
    Degree4,
    /// Twelve points, exact for degree 6.
    Degree6,
}

const H: f64 = 0.5;
const EDGE_MIDPOINT: [QuadPoint; 3] = [([0.0, H, H], 1.0 / 3.0), ([H, 0.0, H], 1.0 / 3.0), ([H, H, 0.0], 1.0 / 3.0)];

const A4: f64 = 0.108_103_018_168_070;
const B4: f64 = 0.445_948_490_915_965;
const W4A: f64 = 0.223_381_589_678_011;
const C4: f64 = 0.816_847_572_980_459;
const D4: f64 = 0.091_576_213_509_771;
const W4B: f64 = 0.109_951_743_655_322;
const DEGREE4: [QuadPoint; 6] = [
    ([A4, B4, B4], W4A),
    ([B4, A4, B4], W4A),
    ([B4, B4, A4], W4A),
    ([C4, D4, D4], W4B),
    ([D4, C4, D4], W4B),
    ([D4, D4, C4], W4B),
];

const A6: f64 = 0.501_426_509_658_179;
const B6: f64 = 0.249_286_745_170_910;
const W6A: f64 = 0.116_786_275_726_379;
const C6: f64 = 0.873_821_971_016_996;
const D6: f64 = 0.063_089_014_491_502;
const W6B: f64 = 0.050_844_906_370_207;
const P6: f64 = 0.053_145_049_844_817;
const Q6: f64 = 0.310_352_451_033_784;
const R6: f64 = 0.636_502_499_121_399;
const W6C: f64 = 0.082_851_075_618_374;
const DEGREE6: [QuadPoint; 12] = [
    ([A6, B6, B6], W6A),
    ([B6, A6, B6], W6A),
    ([B6, B6, A6], W6A),
    ([C6, D6, D6], W6B),
    ([D6, C6, D6], W6B),
    ([D6, D6, C6], W6B),
    ([P6, Q6, R6], W6C),
    ([P6, R6, Q6], W6C),
    ([Q6, P6, R6], W6C),
    ([Q6, R6, P6], W6C),
    ([R6, P6, Q6], W6C),
    ([R6, Q6, P6], W6C),
];

impl QuadratureRule {
    pub fn points(self) -> &'static [QuadPoint] {
        match self {
            Self::EdgeMidpoint => &EDGE_MIDPOINT,
            Self::Degree4 => &DEGREE4,
            Self::Degree6 => &DEGREE6,
        }
    }

    pub fn degree(self) -> usize {
        match self {
            Self::EdgeMidpoint => 2,
            Self::Degree4 => 4,
            Self::Degree6 => 6,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // ∫_T λ1^a λ2^b λ3^c = 2|T| a! b! c! / (a+b+c+2)!
    fn exact_monomial(a: u32, b: u32, c: u32) -> f64 {
        let fact = |n: u32| (1..=n).map(f64::from).product::<f64>();
        2.0 * fact(a) * fact(b) * fact(c) / fact(a + b + c + 2)
    }

    #[test]
    fn rules_integrate_monomials_up_to_their_degree() {
        for rule in [QuadratureRule::EdgeMidpoint, QuadratureRule::Degree4, QuadratureRule::Degree6] {
            let d = rule.degree() as u32;
            let wsum: f64 = rule.points().iter().map(|p| p.1).sum();
            assert!((wsum - 1.0).abs() < 1e-14, "{rule:?}");
            for a in 0..=d {
                for b in 0..=d - a {
                    let c = d - a - b;
                    let q: f64 = rule
                        .points()
                        .iter()
                        .map(|(l, w)| w * l[0].powi(a as i32) * l[1].powi(b as i32) * l[2].powi(c as i32))
                        .sum();
                    assert!((q - exact_monomial(a, b, c)).abs() < 1e-14, "{rule:?} {a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn edge_midpoint_rule_is_not_exact_for_cubics() {
        let q: f64 = QuadratureRule::EdgeMidpoint.points().iter().map(|(l, w)| w * l[0].powi(3)).sum();
        assert!((q - exact_monomial(3, 0, 0)).abs() > 1e-3);
    }
}
