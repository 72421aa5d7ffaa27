#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "pacs/circuit.hpp"
#include "pacs/errors.hpp"
#include "pacs/fock.hpp"

namespace pacs {

// Outcome of a heralded (post-selected) operation. The success branch is a
// single pure state; the failure branch is a classical ensemble over the
// auxiliary detector's photon count (number-resolving heralding assumed).
struct HeraldResult {
  PureState success_state;
  double success_probability = 0.0;
  BranchEnsemble failure_branch;
};

namespace detail {

// Project mode 2 of a joint state onto |k>. Returns the unnormalized
// signal-mode amplitudes; their norm^2 is the outcome probability.
inline PureState project_mode2(const TwoModeState& joint, int k) {
  PureState out(joint.cutoff());
  for (int n = 0; n <= joint.cutoff(); ++n) out.amplitude(n) = joint.amplitude(n, k);
  return out;
}

// Split a joint state into a HeraldResult with success defined by the
// auxiliary count `success_outcome`.
inline HeraldResult split_branches(const TwoModeState& joint, int success_outcome) {
  HeraldResult result{PureState(joint.cutoff()), 0.0, {}};
  for (int k = 0; k <= joint.cutoff(); ++k) {
    PureState proj = detail::project_mode2(joint, k);
    const double weight = proj.norm_squared();
    if (k == success_outcome) {
      result.success_probability = weight;
      result.success_state = weight > 1e-30 ? proj.normalized() : fock_state(0, joint.cutoff());
    } else if (weight > 1e-18) {
      result.failure_branch.members.push_back({weight, k, proj.normalized()});
      result.failure_branch.total_weight += weight;
    }
  }
  return result;
}

inline void check_order(int m) {
  if (m < 0 || m > kMaxLaguerreOrder) {
    throw std::domain_error("photon order m must lie in [0, 32]");
  }
}

// Normalized m-fold creation-operator state on `input`:
// c'_{n+m} prop c_n sqrt((n+m)!/n!).
inline PureState raised_state(const PureState& input, int m, int cutoff) {
  PureState raised(cutoff);
  for (int n = 0; n + m <= cutoff && n <= input.cutoff(); ++n) {
    raised.amplitude(n + m) =
        input.amplitude(n) * std::exp(0.5 * (log_factorial(n + m) - log_factorial(n)));
  }
  return raised.normalized();
}

// Normalized m-fold annihilation-operator state on `input`.
inline PureState lowered_state(const PureState& input, int m, int cutoff) {
  PureState lowered(cutoff);
  for (int n = 0; n + m <= input.cutoff() && n <= cutoff; ++n) {
    lowered.amplitude(n) =
        input.amplitude(n + m) * std::exp(0.5 * (log_factorial(n + m) - log_factorial(n)));
  }
  return lowered.normalized();
}

}  // namespace detail

// m-photon addition via the beam-splitter model: input (x) |m> through a
// beam splitter of transmissivity T, success heralded by vacuum on the
// auxiliary output.
inline HeraldResult herald_addition_bs(const PureState& input, int m, double t) {
  detail::check_order(m);
  BeamSplitterSpec spec(t);
  const int cut = input.cutoff() + m;
  if (t == 1.0 && m >= 1) {
    // No-interaction endpoint: the success probability vanishes, but the
    // conditional state converges to the ideal creation-operator state;
    // all auxiliary photons pass straight to the detector on failure.
    HeraldResult result{detail::raised_state(input, m, cut), 0.0, {}};
    result.failure_branch.members.push_back({1.0, m, with_cutoff(input, cut)});
    result.failure_branch.total_weight = 1.0;
    return result;
  }
  const TwoModeState joint = TwoModeState::product(with_cutoff(input, cut), fock_state(m, cut));
  return detail::split_branches(beam_splitter(joint, spec), 0);
}

// m-photon addition via parametric down conversion: input (x) vacuum
// through a two-mode squeezer of gain G = cosh^2(r), success heralded by
// exactly m photons in the idler.
inline HeraldResult herald_addition_pdc(const PureState& input, int m, double gain) {
  detail::check_order(m);
  const double r = squeezing_from_gain(gain);
  if (gain == 1.0 && m >= 1) {
    const int cut = input.cutoff() + m;
    HeraldResult result{detail::raised_state(input, m, cut), 0.0, {}};
    result.failure_branch.members.push_back({1.0, 0, with_cutoff(input, cut)});
    result.failure_branch.total_weight = 1.0;
    return result;
  }
  int cut = std::max(input.cutoff(), suggest_cutoff(gain * (mean_photon(input) + 1.0), m));
  // The 6-sigma Poisson rule underestimates the squeezer's geometric tail;
  // escalate the cutoff until the edge-leakage check passes.
  for (int attempt = 0; attempt < 5; ++attempt) {
    try {
      const TwoModeState joint =
          TwoModeState::product(with_cutoff(input, cut), fock_state(0, cut));
      return detail::split_branches(two_mode_squeezer(joint, r), m);
    } catch (const TruncationError&) {
      if (attempt == 4) throw;
      cut = cut + cut / 2 + 10;
    }
  }
  throw TruncationError("herald_addition_pdc: unreachable");
}

// m-photon subtraction: a tap beam splitter with vacuum on the auxiliary
// input, success heralded by exactly m photons at the tap detector.
inline HeraldResult herald_subtraction(const PureState& input, int m, double t) {
  detail::check_order(m);
  BeamSplitterSpec spec(t);
  const int cut = input.cutoff();
  if (t == 1.0 && m >= 1) {
    HeraldResult result{detail::lowered_state(input, m, cut), 0.0, {}};
    result.failure_branch.members.push_back({1.0, 0, input});
    result.failure_branch.total_weight = 1.0;
    return result;
  }
  const TwoModeState joint = TwoModeState::product(input, fock_state(0, cut));
  return detail::split_branches(beam_splitter(joint, spec), m);
}

}  // namespace pacs
