#include "q1d/verification/markov_oracle.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "q1d/error.hpp"

namespace q1d::verification {

namespace {

std::vector<double> poisson_pmf(double mean, int kmax) {
  std::vector<double> p(kmax + 1);
  p[0] = std::exp(-mean);
  for (int k = 1; k <= kmax; ++k) p[k] = p[k - 1] * mean / k;
  return p;
}

}  // namespace

StationaryResult stationary_phonon_number(double gamma, double eta_SP, double tau_I, double h,
                                          const sim::TransferProbability& transfer, int n_cap) {
  if (!(gamma > 0.0) || !(eta_SP > 0.0) || !(tau_I > 0.0) || h < 0.0 || n_cap < 2) {
    throw DomainError("bad Markov-chain oracle parameters");
  }
  const double lam = gamma * eta_SP;  // D-phase duration ~ Exp(lam)
  const int size = n_cap + 1;
  const int kmax = std::min(n_cap, 60);
  const auto k1 = poisson_pmf(h * tau_I, kmax);         // heating during step I
  const double q = h / (lam + h);                        // heating during step II: geometric
  std::vector<double> k2(kmax + 1);
  for (int k = 0; k <= kmax; ++k) k2[k] = (1.0 - q) * std::pow(q, k);

  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(size, size);
  std::vector<double> reward(size), length(size);
  for (int n = 0; n < size; ++n) {
    double r = n * tau_I + 0.5 * h * tau_I * tau_I;
    double len = tau_I;
    double covered1 = 0.0;
    for (int a = 0; a <= kmax; ++a) {
      covered1 += k1[a];
      const int m = std::min(n + a, n_cap);
      const double pt = m >= 1 ? transfer(m) : 0.0;
      // No transfer: next step I starts at m.
      P(n, m) += k1[a] * (1.0 - pt);
      if (pt > 0.0) {
        const int after = m - 1;
        r += k1[a] * pt * (after / lam + h / (lam * lam));
        len += k1[a] * pt / lam;
        double covered2 = 0.0;
        for (int b = 0; b <= kmax; ++b) {
          covered2 += k2[b];
          P(n, std::min(after + b, n_cap)) += k1[a] * pt * k2[b];
        }
        P(n, std::min(after + kmax, n_cap)) += k1[a] * pt * (1.0 - covered2);
      }
    }
    P(n, std::min(n + kmax, n_cap)) += 1.0 - covered1;
    reward[n] = r;
    length[n] = len;
  }

  // pi (P - I) = 0 with sum(pi) = 1: replace one equation by the normalization.
  Eigen::MatrixXd A = P.transpose() - Eigen::MatrixXd::Identity(size, size);
  A.row(size - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs(size - 1) = 1.0;
  const Eigen::VectorXd pi = A.fullPivLu().solve(rhs);

  StationaryResult out;
  out.embedded.assign(pi.data(), pi.data() + size);
  double num = 0.0, den = 0.0;
  for (int n = 0; n < size; ++n) {
    num += pi(n) * reward[n];
    den += pi(n) * length[n];
  }
  out.mean_n = num / den;
  out.mean_cycle_s = den;
  return out;
}

double small_heating_mean_n(double gamma, double eta_SP, double tau_I, double h) {
  const double c = tau_I + 1.0 / (gamma * eta_SP);
  return h * c / (1.0 - h * c);
}

}  // namespace q1d::verification
