#pragma once
// fsqkd/constants.hpp - Physical constants and model coefficients.

namespace fsqkd {

inline constexpr double kPlanck = 6.62607015e-34;      ///< [J s]
inline constexpr double kLightSpeed = 299792458.0;     ///< [m/s]
inline constexpr double kHc = kPlanck * kLightSpeed;   ///< [J m]

/// Fried coherence lengths are referenced at 500 nm throughout.
inline constexpr double kReferenceWavelengthNm = 500.0;

/// Fraction of signal energy inside the Airy core of an unobscured aperture.
inline constexpr double kAiryCoreFraction = 0.84;
/// First Airy zero: spot diameter 2.44 lambda f / D, half-angle 1.22 lambda / D.
inline constexpr double kAiryDiameterFactor = 2.44;
inline constexpr double kAiryRadiusFactor = 1.22;

/// Full-aperture residual phase variance coefficient: 1.03 (D/r)^(5/3).
inline constexpr double kApertureRpeCoeff = 1.03;
/// Fried length path-integral coefficient: [0.423 k^2 sec(theta) Int Cn2]^(-3/5).
inline constexpr double kFriedIntegralCoeff = 0.423;
/// Greenwood frequency coefficient: [0.1022 k^2 sec(theta) Int Cn2 v^(5/3)]^(3/5).
inline constexpr double kGreenwoodIntegralCoeff = 0.1022;
/// Tracking-Greenwood coefficient: 5.268e-2 D^(-1/6) k [sec(theta) Int Cn2 v^2]^(1/2).
inline constexpr double kTrackingGreenwoodCoeff = 5.268e-2;

} // namespace fsqkd
