#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "pacs/analytics.hpp"
#include "pacs/circuit.hpp"
#include "pacs/experiment.hpp"
#include "pacs/fock.hpp"
#include "pacs/herald.hpp"

namespace pacs {

// Truncated Poisson distribution with the given mean.
inline std::vector<double> poisson_distribution(double mean, int cutoff) {
  std::vector<double> p(static_cast<std::size_t>(cutoff) + 1);
  for (int n = 0; n <= cutoff; ++n) {
    p[static_cast<std::size_t>(n)] =
        std::exp(-mean + (mean > 0.0 ? n * std::log(mean) : (n == 0 ? 0.0 : -1e300)) -
                 log_factorial(n));
  }
  return p;
}

// Classical Fisher information of plain photon counting at both MZI output
// ports (no addition stage): independent Poisson ports with means
// nbar cos^2(phi/2) and nbar sin^2(phi/2).
inline double mzi_counting_fisher(double nbar, double phi, double dphi = 1e-4) {
  const int cutoff = suggest_cutoff(nbar);
  const auto top = [&](double f) {
    return poisson_distribution(nbar * std::pow(std::cos(f / 2.0), 2), cutoff);
  };
  const auto bottom = [&](double f) {
    return poisson_distribution(nbar * std::pow(std::sin(f / 2.0), 2), cutoff);
  };
  return fisher_from_distribution(top, phi, dphi) + fisher_from_distribution(bottom, phi, dphi);
}

namespace detail {

struct SchemeDistributions {
  // Joint distribution over (auxiliary count k, final count n), flattened
  // as k * (cutoff + 1) + n with a phi-independent layout.
  std::function<std::vector<double>(double)> joint;
  std::function<std::vector<double>(double)> success_conditional;
  std::function<std::vector<double>(double)> failure_conditional;
  std::function<double(double)> success_probability;
};

inline SchemeDistributions scheme_distributions(const RunConfig& config, double sweep_value) {
  // Fix the layout from the brightest port setting (phi = 0) so the
  // flattened index is identical at phi and phi +- dphi.
  RunConfig bright = config;
  bright.phi = 0.0;
  const double nbar_max = std::norm(detail::effective_amplitude(bright));
  const int cut_in = suggest_cutoff(nbar_max, config.m);
  const int cut = config.model == HeraldModel::kBeamSplitter
                      ? cut_in + config.m
                      : suggest_cutoff(2.0 * sweep_value * (nbar_max + 1.0), config.m);

  const auto herald_at = [config, sweep_value, cut_in](double phi) {
    RunConfig local = config;
    local.phi = phi;
    const Complex alpha_eff = detail::effective_amplitude(local);
    const PureState input = coherent_state(alpha_eff, cut_in);
    return config.model == HeraldModel::kBeamSplitter
               ? herald_addition_bs(input, config.m, sweep_value)
               : herald_addition_pdc(input, config.m, sweep_value);
  };

  SchemeDistributions out;
  out.joint = [herald_at, cut](double phi) {
    const HeraldResult h = herald_at(phi);
    std::vector<double> p(static_cast<std::size_t>(cut + 1) * (cut + 1), 0.0);
    const auto place = [&](int k, double weight, const PureState& state) {
      for (int n = 0; n <= std::min(cut, state.cutoff()); ++n) {
        p[static_cast<std::size_t>(k) * (cut + 1) + n] += weight * std::norm(state.amplitude(n));
      }
    };
    place(0, h.success_probability, h.success_state);
    for (const auto& member : h.failure_branch.members) {
      place(std::min(member.outcome, cut), member.weight, member.state);
    }
    return p;
  };
  out.success_conditional = [herald_at](double phi) {
    return number_distribution(herald_at(phi).success_state);
  };
  out.failure_conditional = [herald_at](double phi) {
    return herald_at(phi).failure_branch.pooled_distribution();
  };
  out.success_probability = [herald_at](double phi) {
    const HeraldResult h = herald_at(phi);
    return h.success_probability / (h.success_probability + h.failure_branch.total_weight);
  };
  return out;
}

}  // namespace detail

// Full Fisher report for the post-selected scheme at one (phi, sweep)
// point: branch Fisher informations, their probability-weighted sum, and
// the joint-outcome value (which additionally carries the branch-label
// information).
inline FisherReport scheme_fisher_report(const RunConfig& config, double sweep_value,
                                         double phi, long nu = 1, double dphi = 1e-4) {
  const detail::SchemeDistributions dists = detail::scheme_distributions(config, sweep_value);
  FisherReport report;
  report.phi = phi;
  report.trials = nu;
  report.qcrb = qcrb(config.nbar, nu);
  report.fisher_success = fisher_from_distribution(dists.success_conditional, phi, dphi);
  report.fisher_failure = fisher_from_distribution(dists.failure_conditional, phi, dphi);
  const double ps = dists.success_probability(phi);
  report.fisher_combined =
      fisher_combined(ps, report.fisher_success, 1.0 - ps, report.fisher_failure);
  report.fisher_joint = fisher_from_distribution(dists.joint, phi, dphi);
  return report;
}

}  // namespace pacs
