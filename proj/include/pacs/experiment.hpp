#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pacs/analytics.hpp"
#include "pacs/circuit.hpp"
#include "pacs/fock.hpp"
#include "pacs/herald.hpp"

namespace pacs {

enum class HeraldModel { kBeamSplitter, kPdc };

struct RunConfig {
  double nbar = 1.0;
  double theta = 0.0;
  double phi = 0.0;
  int m = 1;
  HeraldModel model = HeraldModel::kBeamSplitter;
  LossSpec loss;
  long trials_per_point = 3600;
  std::vector<double> sweep_values;  // T for BS, G for PDC
  std::uint64_t seed = 0;
};

struct TrialRecord {
  double sweep_value;
  bool success;
  int herald_outcome;  // auxiliary detector count
  int detected_n;      // final photon count
};

struct AggregateStats {
  double sweep_value = 0.0;
  long kept = 0;  // M, number of successful trials
  double empirical_success_rate = 0.0;
  bool snr_defined = false;
  double empirical_snr = std::numeric_limits<double>::quiet_NaN();
  double empirical_snr_ratio = std::numeric_limits<double>::quiet_NaN();
  double theory_snr_ratio = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based uniform in [0, 1): a pure function of its indices, so
// serial and parallel execution produce identical streams.
inline double trial_uniform(std::uint64_t seed, std::uint64_t sweep_index,
                            std::uint64_t trial_index, std::uint64_t draw_index) {
  std::uint64_t h = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
  h = splitmix64(h ^ sweep_index);
  h = splitmix64(h ^ (trial_index * 0x2545f4914f6cdd1dULL));
  h = splitmix64(h ^ (draw_index + 0x9e3779b97f4a7c15ULL));
  return (h >> 11) * 0x1.0p-53;
}

inline int sample_from_distribution(const std::vector<double>& p, double u) {
  double acc = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    acc += p[n];
    if (u < acc) return static_cast<int>(n);
  }
  return static_cast<int>(p.size()) - 1;
}

// Post-loss amplitude entering the addition stage: MZI bright port with
// loss folded in by the alpha substitution.
inline Complex effective_amplitude(const RunConfig& config) {
  const Complex alpha = std::polar(std::sqrt(config.nbar), config.theta);
  return apply_loss(mzi_ports({alpha, config.phi}).top, config.loss);
}

inline HeraldResult build_herald(const RunConfig& config, double sweep_value) {
  const Complex alpha_eff = effective_amplitude(config);
  const PureState input =
      coherent_state(alpha_eff, suggest_cutoff(std::norm(alpha_eff), config.m));
  return config.model == HeraldModel::kBeamSplitter
             ? herald_addition_bs(input, config.m, sweep_value)
             : herald_addition_pdc(input, config.m, sweep_value);
}

}  // namespace detail

// One Monte Carlo pass: per trial, sample the heralding branch by its
// probability, then the final detector count from that branch's number
// distribution. Deterministic given (seed, sweep index, trial index).
inline std::vector<TrialRecord> run_trials(const RunConfig& config) {
  if (config.trials_per_point < 1) {
    throw std::domain_error("run_trials: trials_per_point must be >= 1");
  }
  std::vector<TrialRecord> records;
  records.reserve(config.sweep_values.size() *
                  static_cast<std::size_t>(config.trials_per_point));

  for (std::size_t s = 0; s < config.sweep_values.size(); ++s) {
    const double value = config.sweep_values[s];
    const HeraldResult herald = detail::build_herald(config, value);
    const std::vector<double> success_dist = number_distribution(herald.success_state);
    std::vector<std::vector<double>> failure_dists;
    failure_dists.reserve(herald.failure_branch.members.size());
    for (const auto& member : herald.failure_branch.members) {
      failure_dists.push_back(number_distribution(member.state));
    }
    const double total = herald.success_probability + herald.failure_branch.total_weight;

    for (long trial = 0; trial < config.trials_per_point; ++trial) {
      const double u_branch =
          detail::trial_uniform(config.seed, s, static_cast<std::uint64_t>(trial), 0) * total;
      const double u_count =
          detail::trial_uniform(config.seed, s, static_cast<std::uint64_t>(trial), 1);

      TrialRecord record{value, false, 0, 0};
      if (u_branch < herald.success_probability) {
        record.success = true;
        record.herald_outcome = config.model == HeraldModel::kPdc ? config.m : 0;
        record.detected_n = detail::sample_from_distribution(success_dist, u_count);
      } else {
        double acc = herald.success_probability;
        std::size_t pick = herald.failure_branch.members.empty()
                               ? 0
                               : herald.failure_branch.members.size() - 1;
        for (std::size_t i = 0; i < herald.failure_branch.members.size(); ++i) {
          acc += herald.failure_branch.members[i].weight;
          if (u_branch < acc) {
            pick = i;
            break;
          }
        }
        record.herald_outcome = herald.failure_branch.members[pick].outcome;
        record.detected_n = detail::sample_from_distribution(failure_dists[pick], u_count);
      }
      records.push_back(record);
    }
  }
  return records;
}

// Per sweep value: kept count M, empirical success-branch SNR (with the m
// injected photons subtracted) and its ratio to the lossy coherent
// baseline, plus the theory curve from the heralded state's moments.
inline std::vector<AggregateStats> aggregate(const std::vector<TrialRecord>& records,
                                             const RunConfig& config) {
  const double nbar_eff = std::norm(detail::effective_amplitude(config));
  std::vector<AggregateStats> stats;
  stats.reserve(config.sweep_values.size());

  std::size_t cursor = 0;
  for (std::size_t s = 0; s < config.sweep_values.size(); ++s) {
    const double value = config.sweep_values[s];
    AggregateStats point;
    point.sweep_value = value;

    long total = 0;
    double sum = 0.0, sum_sq = 0.0;
    while (cursor < records.size() && records[cursor].sweep_value == value &&
           total < config.trials_per_point) {
      const TrialRecord& r = records[cursor++];
      ++total;
      if (r.success) {
        ++point.kept;
        sum += r.detected_n;
        sum_sq += static_cast<double>(r.detected_n) * r.detected_n;
      }
    }
    point.empirical_success_rate = total > 0 ? static_cast<double>(point.kept) / total : 0.0;

    if (point.kept >= 2) {
      const double mean = sum / point.kept;
      const double variance = (sum_sq - point.kept * mean * mean) / (point.kept - 1);
      if (variance > 0.0 && nbar_eff > 0.0) {
        point.snr_defined = true;
        point.empirical_snr = (mean - config.m) / std::sqrt(variance);
        point.empirical_snr_ratio = point.empirical_snr / std::sqrt(nbar_eff);
      }
    }

    if (nbar_eff > 0.0) {
      const HeraldResult herald = detail::build_herald(config, value);
      const double t_mean = mean_photon(herald.success_state);
      const double t_var = second_moment(herald.success_state) - t_mean * t_mean;
      if (t_var > 0.0) {
        point.theory_snr_ratio = (t_mean - config.m) / std::sqrt(t_var) / std::sqrt(nbar_eff);
      }
    }
    stats.push_back(point);
  }
  return stats;
}

}  // namespace pacs
