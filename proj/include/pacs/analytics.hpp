#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "pacs/errors.hpp"
#include "pacs/special_math.hpp"

namespace pacs {

struct SnrReport {
  double snr = 0.0;                  // (mean - m) / stddev
  double snr_ratio = 0.0;            // vs coherent baseline sqrt(nbar)
  double success_probability = 0.0;
  double weighted_metric = 0.0;      // sqrt(P) * snr
};

struct FisherReport {
  double phi = 0.0;
  double fisher_success = 0.0;
  double fisher_failure = 0.0;
  double fisher_combined = 0.0;  // P_s F_s + P_f F_f
  double fisher_joint = 0.0;     // over the joint (branch, count) outcome space
  double qcrb = 0.0;
  long trials = 1;
};

// Success probability of m-photon addition via the beam-splitter model:
//   P_m = (1 - T)^m e^{nbar (T - 1)} L_m(-T nbar)
// m = 0 degenerates to the attenuation survival probability.
inline double p_add_closed(int m, double t, double nbar) {
  if (m < 0 || m > kMaxLaguerreOrder) throw std::domain_error("p_add_closed: m out of range");
  if (!(t >= 0.0 && t <= 1.0)) throw std::domain_error("p_add_closed: T out of [0, 1]");
  if (nbar < 0.0) throw std::domain_error("p_add_closed: nbar must be >= 0");
  return std::pow(1.0 - t, m) * std::exp(nbar * (t - 1.0)) * laguerre(m, -t * nbar);
}

// Single-photon special case: P_1 = -(T - 1)(1 + T nbar) e^{nbar (T - 1)}.
inline double p_add_single(double t, double nbar) {
  return -(t - 1.0) * (1.0 + t * nbar) * std::exp(nbar * (t - 1.0));
}

// <n> of the m-photon-added coherent state:
//   T nbar + 2m - m L_{m-1}(-T nbar) / L_m(-T nbar)
inline double mean_n_added(int m, double t, double nbar) {
  if (m == 0) return t * nbar;
  const double x = -t * nbar;
  return t * nbar + 2.0 * m - m * laguerre(m - 1, x) / laguerre(m, x);
}

// <n^2> of the m-photon-added coherent state:
//   [(m+2)(m+1) L_{m+2} - 3(m+1) L_{m+1} + L_m] / L_m  at -T nbar
inline double second_moment_added(int m, double t, double nbar) {
  const double x = -t * nbar;
  const double lm = laguerre(m, x);
  return ((m + 2.0) * (m + 1.0) * laguerre(m + 2, x) - 3.0 * (m + 1.0) * laguerre(m + 1, x) +
          lm) /
         lm;
}

// SNR with the m injected photons subtracted from the signal:
//   (<n> - m) / sqrt(<n^2> - <n>^2)
inline double snr_added(int m, double t, double nbar) {
  const double mean = mean_n_added(m, t, nbar);
  const double variance = second_moment_added(m, t, nbar) - mean * mean;
  if (variance <= 0.0) {
    throw DivergentSnrError("snr_added: zero variance (Fock-like state)");
  }
  return (mean - m) / std::sqrt(variance);
}

// SNR of a plain (mean, second moment) pair, no photon offset.
inline double snr_plain(double mean, double second_moment) {
  const double variance = second_moment - mean * mean;
  if (variance <= 0.0) throw DivergentSnrError("snr_plain: zero variance");
  return mean / std::sqrt(variance);
}

inline double snr_coherent(double nbar) { return std::sqrt(nbar); }

inline double weighted_metric(double p, double snr) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("weighted_metric: P out of [0, 1]");
  return std::sqrt(p) * snr;
}

inline SnrReport snr_report(int m, double t, double nbar) {
  SnrReport rep;
  rep.snr = snr_added(m, t, nbar);
  rep.snr_ratio = rep.snr / snr_coherent(nbar);
  rep.success_probability = p_add_closed(m, t, nbar);
  rep.weighted_metric = weighted_metric(rep.success_probability, rep.snr);
  return rep;
}

// Shot-noise limit on phase variance: 1 / (nu nbar).
inline double qcrb(double nbar, long nu) {
  if (nbar <= 0.0) throw std::domain_error("qcrb: nbar must be > 0");
  if (nu < 1) throw std::domain_error("qcrb: nu must be >= 1");
  return 1.0 / (static_cast<double>(nu) * nbar);
}

// Classical Fisher information of a phi-dependent outcome distribution,
// by central differences: sum_n (d p_n / d phi)^2 / p_n. Outcomes with
// p_n < 1e-14 are dropped.
inline double fisher_from_distribution(
    const std::function<std::vector<double>(double)>& distribution, double phi,
    double dphi = 1e-4) {
  if (!(dphi >= 1e-5 && dphi <= 1e-2)) {
    throw std::domain_error("fisher_from_distribution: dphi out of [1e-5, 1e-2]");
  }
  const std::vector<double> p0 = distribution(phi);
  const std::vector<double> pm = distribution(phi - dphi);
  const std::vector<double> pp = distribution(phi + dphi);
  for (const auto* p : {&pm, &pp}) {
    double total = 0.0;
    for (double v : *p) total += v;
    if (std::abs(total - 1.0) > 1e-6) {
      throw std::domain_error("fisher_from_distribution: distribution not normalized");
    }
  }
  const std::size_t n = std::min({p0.size(), pm.size(), pp.size()});
  double fisher = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p0[i] < 1e-14) continue;
    const double deriv = (pp[i] - pm[i]) / (2.0 * dphi);
    fisher += deriv * deriv / p0[i];
  }
  return fisher;
}

// Branch-weighted Fisher information F = P_s F_s + P_f F_f.
inline double fisher_combined(double ps, double fs, double pf, double ff) {
  if (ps < 0.0 || pf < 0.0 || fs < 0.0 || ff < 0.0) {
    throw std::domain_error("fisher_combined: negative input");
  }
  if (std::abs(ps + pf - 1.0) > 1e-9) {
    throw std::domain_error("fisher_combined: P_s + P_f must equal 1");
  }
  return ps * fs + pf * ff;
}

}  // namespace pacs
