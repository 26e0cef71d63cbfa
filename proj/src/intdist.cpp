#include "mchit/intdist.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mchit {

namespace {
constexpr double kNegativeDust = 1e-15;
constexpr double kMassTol = 1e-9;
}  // namespace

IntDist::IntDist(std::vector<double> pmf, double tail_bound)
    : pmf_(std::move(pmf)), tail_bound_(tail_bound) {
  if (pmf_.empty())
    throw Error(Errc::InvalidParameter, "empty pmf");
  if (!(tail_bound_ >= 0.0))
    throw Error(Errc::InvalidParameter, "negative tail bound");
  for (double& p : pmf_) {
    if (p < 0.0) {
      if (p < -kNegativeDust) {
        std::ostringstream os;
        os << "pmf entry " << p << " below clamping threshold";
        throw Error(Errc::InvalidParameter, os.str());
      }
      tail_bound_ += -p;
      p = 0.0;
    }
  }
  suffix_.assign(pmf_.size() + 1, 0.0);
  for (size_t k = pmf_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + pmf_[k];
  if (std::abs(suffix_[0] + tail_bound_ - 1.0) > kMassTol) {
    std::ostringstream os;
    os << "pmf mass " << suffix_[0] << " + tail " << tail_bound_
       << " is not 1";
    throw Error(Errc::InvalidParameter, os.str());
  }
}

IntDist IntDist::from_survival(const std::vector<double>& surv) {
  if (surv.empty())
    throw Error(Errc::InvalidParameter, "empty survival sequence");
  std::vector<double> pmf(surv.size());
  pmf[0] = 1.0 - surv[0];
  for (size_t t = 1; t < surv.size(); ++t) pmf[t] = surv[t - 1] - surv[t];
  return IntDist(std::move(pmf), surv.back());
}

double IntDist::total_mass() const { return suffix_[0]; }

double IntDist::survival(long t) const {
  if (t < 0) return 1.0;
  size_t idx = static_cast<size_t>(std::min<long>(t + 1, n_max() + 1));
  return suffix_[idx] + tail_bound_;
}

double IntDist::mean() const {
  double m = 0.0;
  for (size_t k = 1; k < pmf_.size(); ++k) m += double(k) * pmf_[k];
  return m;
}

double IntDist::tail_ratio() const {
  const long n = n_max();
  if (n < 1) return 0.0;
  long window = std::max<long>(2, std::min<long>(20, n / 5 + 1));
  long start = std::max<long>(0, n - window);
  double rho = 0.0;
  for (long k = start; k < n; ++k) {
    double a = pmf_[static_cast<size_t>(k)];
    double b = pmf_[static_cast<size_t>(k + 1)];
    if (a > 0.0)
      rho = std::max(rho, b / a);
    else if (b > 0.0)
      return std::numeric_limits<double>::infinity();
  }
  return rho;
}

IntDist::MgfValue IntDist::mgf(double theta) const {
  bool divergent = false;
  if (theta > 0.0 && tail_bound_ > 0.0) {
    double rho = tail_ratio();
    if (std::exp(theta) * rho >= 1.0) divergent = true;
  }
  double v = 0.0;
  for (size_t k = 0; k < pmf_.size(); ++k) {
    if (pmf_[k] > 0.0) v += std::exp(theta * double(k)) * pmf_[k];
  }
  if (!std::isfinite(v)) divergent = true;
  return {v, divergent};
}

IntDist geometric(double p, long n_max) {
  if (!(p > 0.0 && p <= 1.0))
    throw Error(Errc::InvalidParameter,
                "geometric parameter must be in (0,1]");
  if (n_max < 0 || n_max > kTruncationCap)
    throw Error(Errc::InvalidParameter, "geometric support out of range");
  std::vector<double> pmf(static_cast<size_t>(n_max) + 1);
  double q = 1.0 - p;
  double term = p;
  for (long k = 0; k <= n_max; ++k) {
    pmf[static_cast<size_t>(k)] = term;
    term *= q;
  }
  // term is now p(1-p)^{n+1}; the exact tail is (1-p)^{n+1}
  return IntDist(std::move(pmf), std::pow(q, double(n_max) + 1.0));
}

TvResult tv_distance(const IntDist& d1, const IntDist& d2) {
  long n = std::max(d1.n_max(), d2.n_max());
  double l1 = 0.0;
  for (long k = 0; k <= n; ++k) l1 += std::abs(d1.pmf(k) - d2.pmf(k));
  return {0.5 * l1, 0.5 * (d1.tail_bound() + d2.tail_bound())};
}

IntDist geometric_compound(double p, const IntDist& f_T, double eps_tail) {
  if (!(p > 0.0 && p <= 1.0))
    throw Error(Errc::InvalidParameter,
                "geometric parameter must be in (0,1]");
  if (f_T.pmf(0) > 1e-12)
    throw Error(Errc::CompounderHasMassAtZero,
                "compounding distribution has mass " +
                    std::to_string(f_T.pmf(0)) + " at zero");
  const double q = 1.0 - p;
  // f_T is truncated: each summand independently stays inside the truncated
  // support with probability 1 - d, so only this much mass is reachable.
  const double d = f_T.tail_bound();
  const double reachable = p / (1.0 - q * (1.0 - d));
  std::vector<double> u;
  u.reserve(256);
  u.push_back(p);
  double cum = p;
  while (cum < reachable - eps_tail) {
    long n = static_cast<long>(u.size());
    if (n > kTruncationCap)
      throw Error(Errc::TruncationCap,
                  "geometric compound support exceeded cap");
    double s = 0.0;
    long m_hi = std::min<long>(n, f_T.n_max());
    for (long m = 1; m <= m_hi; ++m)
      s += f_T.pmf(m) * u[static_cast<size_t>(n - m)];
    u.push_back(q * s);
    cum += u.back();
    // once increments stop moving the accumulator, eps_tail is below float
    // resolution; the remaining gap goes into the tail bound
    if (n > f_T.n_max() && u.back() < cum * 1e-17) break;
  }
  return IntDist(std::move(u), std::max(0.0, 1.0 - cum));
}

DominanceWitness check_stochastic_dominance(const IntDist& upper,
                                            const IntDist& lower, double tol) {
  long n = std::max(upper.n_max(), lower.n_max());
  DominanceWitness w{true, 0, -std::numeric_limits<double>::infinity()};
  for (long t = 0; t <= n; ++t) {
    double slack = 0.0;
    if (t >= upper.n_max()) slack += upper.tail_bound();
    if (t >= lower.n_max()) slack += lower.tail_bound();
    double gap = lower.survival(t) - upper.survival(t) - slack;
    if (gap > w.worst_gap) {
      w.worst_gap = gap;
      w.worst_t = t;
    }
  }
  w.holds = w.worst_gap <= tol;
  return w;
}

}  // namespace mchit
