#pragma once

// Generated by oracles/generate_oracles.py (mpmath, 50 digits). Times in tau_k
// units unless noted; kOneWayDwellHalf4Pi is absolute (m = w = 1).

namespace oracle {

inline constexpr double kAlphaHalf4Pi = 8.885765876316732494;
inline constexpr double kStandardTimeHalf4Pi = 0.22507907042364846423;
inline constexpr double kSymmetricTimeHalf4Pi = 0.22535575879039444754;
inline constexpr double kDwellTimeHalf4Pi = 0.11281622357857021543;
inline constexpr double kSelfInterferenceHalf4Pi = 0.11253953521182423212;
inline constexpr double kAbsTHalf4Pi = 0.00027668836674598331097;
inline constexpr double kStandardTimeHalfPi = 0.87938352131701902616;
inline constexpr double kPhiPlusHalf4Pi = -1.5705196384246202558;
inline constexpr double kPhiMinusHalf4Pi = -1.5710730151651729826;
inline constexpr double kThetaTransQuarter4Pi = -0.52359877529290946541;
inline constexpr double kAntisymmetricTimeHalf4Pi = 0.22480238205690248092;
inline constexpr double kSymmetricTimeFromPhiHalf4Pi = 0.22535575879039444754;
inline constexpr double kOneWayDwellHalf4Pi = 1.9999999234435462422;
inline constexpr double kSymmetricTimeNearOne4Pi = 1.9999483632655585831;
inline constexpr double kSelfInterferenceNearOne4Pi = 9.9998784068363173956e-7;
inline constexpr double kStandardTimeHalf16Pi = 0.056269769759819129347;
inline constexpr double kSymmetricTimeHalf16Pi = 0.056269769759819861959;
inline constexpr double kHartmanLimitHalf16Pi = 0.056269769759819129347;

}  // namespace oracle
