#pragma once

// Reference values from tests/oracles/pgf_oracle.py (40-digit arithmetic).

namespace oracle {

inline constexpr double kAlpha_14_2 = 0.17597820003225451061;
inline constexpr double kC_14_2 = 0.82033192869863712322;
inline constexpr double kRatio_14_2 = 1.7484599533547215478;
inline constexpr double kAlpha_13_11 = 0.27218874671515977517;
inline constexpr double kRatio_13_11 = 1.7529953544143264421;

inline constexpr double kBmExit0_14 = 1.4663219254502265286;
inline constexpr double kGeom_17492 = 3.987240829346092504;
inline constexpr double kDrift1_14_2 = 1.1924120638227966233;
inline constexpr double kDrift2_14_2 = 1.4218465299501412078;
inline constexpr double kDrift9_13_11 = 11.58485591306209927;

inline constexpr double kB_2_14_2 = 6.9510202318615222448;
inline constexpr double kB_10_13_11 = 62.626221491639695985;

inline constexpr double kHit_b2_t20 = 0.0083078345503077177402;
inline constexpr double kHit_b2_t19 = 0.011630968370430804836;
inline constexpr double kHit_b11_t34 = 0.0083691669473813067074;
inline constexpr double kHit_b11_t33 = 0.01087991703159569872;

inline constexpr double kTvHead_b2_t20 = 0.0082689727020149902478;
inline constexpr double kTvTail_b2_t20 = 0.000040342615232253014274;
inline constexpr double kTv_b2_t20 = 0.0083093153172472432621;
inline constexpr double kTv_b2_t19 = 0.011633041444146140567;
inline constexpr double kTv_b11_t34 = 0.0083691720435871657412;
inline constexpr double kTv_b11_t33 = 0.010879923656663315464;

inline constexpr double kHalfErf2 = 0.49766113250947636708;
inline constexpr double kZ_b11 = 1.9298249780221029011;

}  // namespace oracle
