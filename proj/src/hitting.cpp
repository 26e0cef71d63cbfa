#include "mchit/hitting.hpp"

#include <cmath>
#include <sstream>

#include "truncation.hpp"

namespace mchit {

namespace {
constexpr double kMeanAgreementTol = 1e-8;
// Consecutive sub-threshold terms required before the Kac sum stops; a single
// small term can be a sign crossing, not convergence.
constexpr int kKacQuietRun = 5;

struct KacValue {
  double mean;
  double error;  // stopped remainder plus accumulated float dust, over pi_j
};

KacValue kac_with_error(const MarkovChain& chain, int j, double eps_tail) {
  const int n = chain.size();
  if (j < 0 || j >= n)
    throw Error(Errc::InvalidParameter, "state index out of range");
  const double pi_j = chain.pi()(j);
  // the summand is a subtraction against pi_j and is pure noise below ~1e-16
  const double threshold = std::max(eps_tail * pi_j, 5e-16);

  Vec r = point_mass(n, j);
  double sum = 0.0;
  int quiet = 0;
  long t = 0;
  double prev_abs = -1.0;
  double rho = 0.0;
  double remaining = 0.0;
  while (true) {
    if (t > kTruncationCap)
      throw Error(Errc::TruncationCap, "Kac sum exceeded cap");
    double term = r(j) - pi_j;
    sum += term;
    double mag = std::abs(term);
    // geometric envelope of the remaining sum; ratios can spike near sign
    // crossings, so the estimate decays slowly
    if (prev_abs > 0.0)
      rho = std::max(std::min(mag / prev_abs, 1.0 - 1e-6), 0.9 * rho);
    prev_abs = mag;
    quiet = mag <= threshold ? quiet + 1 : 0;
    if (quiet >= kKacQuietRun) {
      remaining = mag * rho / (1.0 - rho);
      if (remaining <= threshold * 1e-2 || mag <= 1e-12) break;
    }
    r = chain.transition().transpose() * r;
    ++t;
  }
  double abs_err = remaining + double(t) * 2e-16;
  return {sum / pi_j, abs_err / pi_j};
}

}  // namespace

HittingResult hitting_time_dist(const MarkovChain& chain, int j,
                                double eps_tail) {
  const int n = chain.size();
  if (j < 0 || j >= n)
    throw Error(Errc::InvalidParameter, "state index out of range");
  const double pi_j = chain.pi()(j);

  // Substochastic block over S \ {j} plus the absorption column into j.
  const int m = n - 1;
  Mat q(m, m);
  Vec absorb(m);
  std::vector<int> others;
  others.reserve(m);
  for (int l = 0; l < n; ++l)
    if (l != j) others.push_back(l);
  for (int a = 0; a < m; ++a) {
    absorb(a) = chain.transition()(others[a], j);
    for (int b = 0; b < m; ++b)
      q(a, b) = chain.transition()(others[a], others[b]);
  }

  Vec alive(m);
  for (int a = 0; a < m; ++a) alive(a) = chain.pi()(others[a]) / (1.0 - pi_j);

  std::vector<double> cond_pmf{0.0};
  double surv = alive.sum();
  detail::TailTarget stop{eps_tail, 0.0};  // multiplicative, no noise floor
  while (!stop.reached(surv, static_cast<long>(cond_pmf.size()) - 1)) {
    if (static_cast<long>(cond_pmf.size()) > kTruncationCap)
      throw Error(Errc::TruncationCap, "hitting-time support exceeded cap");
    cond_pmf.push_back(alive.dot(absorb));
    alive = q.transpose() * alive;
    surv = alive.sum();
  }
  IntDist conditional(cond_pmf, surv);

  std::vector<double> pmf(cond_pmf.size());
  pmf[0] = pi_j;
  for (size_t t = 1; t < pmf.size(); ++t)
    pmf[t] = (1.0 - pi_j) * cond_pmf[t];
  IntDist dist(std::move(pmf), (1.0 - pi_j) * surv);

  double mean_direct = dist.mean();
  KacValue kac = kac_with_error(chain, j, eps_tail);
  // direct-route residual: the mean mass lost at truncation
  double rho = std::min(conditional.tail_ratio(), 1.0 - 1e-6);
  double direct_err = (1.0 - pi_j) * conditional.tail_bound() *
                      (double(conditional.n_max()) + 1.0 / (1.0 - rho));
  if (std::abs(mean_direct - kac.mean) >
      kMeanAgreementTol + kac.error + direct_err) {
    std::ostringstream os;
    os << "hitting mean disagreement: direct " << mean_direct << " vs kac "
       << kac.mean << " (certified residuals " << kac.error + direct_err
       << ")";
    throw Error(Errc::KacMismatch, os.str());
  }
  return {std::move(dist), std::move(conditional), mean_direct, kac.mean,
          kac.error, pi_j};
}

double expected_hitting_kac(const MarkovChain& chain, int j, double eps_tail) {
  return kac_with_error(chain, j, eps_tail).mean;
}

double average_hitting_time(const MarkovChain& chain, double eps_tail) {
  double w = 0.0;
  for (int j = 0; j < chain.size(); ++j)
    w += chain.pi()(j) * expected_hitting_kac(chain, j, eps_tail);
  return w;
}

}  // namespace mchit
