#pragma once

// Frozen expected values for the unit and acceptance tests.
//
// Every constant below was produced by an oracle that is independent of the
// library code: 30-digit mpmath evaluation of the closed forms, sympy
// symbolic differentiation for the perturbation partials, mpmath adaptive
// quadrature for the 2D integrals that have no closed form, and direct
// summation for M(n). Where a value is cheap to recompute, the test also
// recomputes it in place (finite differences, brute-force quadrature).

namespace oracles {

// 0.125 + 0.5 - 1/sqrt(2)
inline constexpr double kHamiltonianSample = -0.082106781186547524;

// (omega, h) = (1, -0.375): e = 1/2
inline constexpr double kActionRef = 0.97201214975728493;    // 2 pi (2/sqrt(3) - 1)
inline constexpr double kVolumeRef = 0.94480761927577850;    // action^2
inline constexpr double kKeplerPeriodRef = 9.6735966092491619; // 2 pi (4/3)^(3/2)
inline constexpr double kCircularBrakeR = 1.1547005383792515;  // 1/sqrt(0.75)
inline constexpr double kCofE = 0.15470053837925153;           // 2/sqrt(3) - 1

// ellipsoid perturbation partials at (1, 0), symbolic oracle
inline constexpr double kEllipsoidFzz10 = 9.0;
inline constexpr double kEllipsoidFr10 = 3.0;
inline constexpr double kEllipsoidDphi2At1 = 6.0; // r^2 f_zz - r f_r at r = 1

// M(n) by direct summation
inline constexpr double kM3 = 1.1547005383792515; // 2/sqrt(3)
inline constexpr double kM3Quarter = 0.28867513459481288;

// G(e)
inline constexpr double kG05 = 0.99741928187554527;

// cosine series integral, e = 1/2
inline constexpr double kCosSeries0 = 3.6275987284684357;
inline constexpr double kCosSeries1 = -0.97201214975728493;
inline constexpr double kCosSeries2 = 0.26044987056070400;
inline constexpr double kCosSeries4 = 0.018699459381420307;

// pi/(1 + sqrt(0.25))
inline constexpr double kHalfAngleIntegralA025 = 2.0943951023931955;

// ellipsoid functionals at (1, -0.375), closed forms
inline constexpr double kEllVt = -0.63813600776042675; // -(pi/4) e^2 (4 - 3 e^2)
inline constexpr double kEllAt = -3.1415926535897932;  // -pi
inline constexpr double kEllTt = 18.849555921538759;   // 6 pi
inline constexpr double kEllEf = 37.699111843077519;   // 12 pi
inline constexpr double kEllDf = 1421.2230337568676;   // (12 pi)^2
inline constexpr double kEllRhs = -0.52089974112140800; // 2 pi C (3C - 1)

// pyramid n = 2 at (1, -0.375)
inline constexpr double kPyr2At = -0.90689968211710893;
inline constexpr double kPyr2Ef = 6.3482977748197625;
inline constexpr double kPyr2Df = 40.093142599114092;
inline constexpr double kPyr2SqrtDf = 6.3319146076928495;
inline constexpr double kPyr2VtNum = -0.21586545919157903;  // mpmath 2D quadrature
inline constexpr double kPyr2VtBound = -0.21480851189957892;
inline constexpr double kPyr2Rhs = -0.20482723565836711;

// pyramid n = 3 at (1, -0.375)
inline constexpr double kPyr3At = -2.0943951023931955; // -2 pi / 3
inline constexpr double kPyr3Ef = 8.7884010830121116;
inline constexpr double kPyr3Df = 76.837859338729390;
inline constexpr double kPyr3VtNum = -0.55937506877350141; // mpmath 2D quadrature

// brake shooting at (1, -0.375)
inline constexpr double kBrakeSlope = -0.75; // 2h/omega at the root

// d(Rot)/d(eps) for the ellipsoid at omega = 1
inline constexpr double kEllRotSlope = 6.0;

} // namespace oracles
