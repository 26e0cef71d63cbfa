#pragma once

#include <algorithm>
#include <cmath>

namespace mchit::detail {

// Decides when a survival sequence has been extended far enough. Cutting a
// pmf at n loses about surv(n) * (n + rho/(1-rho)) of its mean (the n*surv
// boundary term plus the geometric remainder), so the loop keeps going until
// both the survival itself and that mean estimate are under eps. The decay
// ratio is tracked as an envelope of recent consecutive ratios.
//
// Iterations that subtract against the stationary vector can stall on a
// float plateau (the matvec fixed point and the solved pi disagree by a few
// ulps, amplified by small pi entries). A stall is a run of steps whose
// ratios sit within 1e-12 of 1 - genuinely slow chains decay measurably
// faster per step - and terminates the loop once the outstanding mass is
// below the distribution mass tolerance; the plateau value stays in the
// tail bound.
struct TailTarget {
  static constexpr double kPlateauCeiling = 1e-9;
  static constexpr long kStallLimit = 100;

  double eps;
  double noise_floor;  // survival values below this are float artifacts

  double prev = -1.0;
  double rho = 0.0;
  long stall = 0;

  bool reached(double surv, long n) {
    if (prev > 0.0) {
      rho = std::max(std::min(surv / prev, 1.0 - 1e-6), 0.9 * rho);
      stall = surv >= prev * (1.0 - 1e-12) ? stall + 1 : 0;
    }
    prev = surv;
    if (surv <= noise_floor) return true;
    if (surv <= kPlateauCeiling && stall >= kStallLimit) return true;
    if (surv > eps) return false;
    double mean_tail = surv * (double(n) + 1.0 / (1.0 - rho));
    return mean_tail <= eps * 1e-2 || surv <= noise_floor * 10.0;
  }
};

}  // namespace mchit::detail
