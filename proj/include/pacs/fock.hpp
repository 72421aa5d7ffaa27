#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pacs/errors.hpp"
#include "pacs/special_math.hpp"

namespace pacs {

using Complex = std::complex<double>;

// Global normalization tolerance for state invariants.
inline constexpr double kNormTolerance = 1e-10;

// Truncation rule: Poisson-dominated tails decay super-exponentially, so
// mean + 6 sigma + slack keeps the tail mass below test tolerances.
inline int suggest_cutoff(double nbar_eff, int extra_photons = 0) {
  const double n = nbar_eff + extra_photons;
  return static_cast<int>(std::ceil(n + 6.0 * std::sqrt(n) + 10.0));
}

// Single-mode truncated Fock state, amplitudes c_0..c_N.
class PureState {
 public:
  explicit PureState(int cutoff) : amps_(static_cast<std::size_t>(cutoff) + 1) {
    if (cutoff < 0) throw std::domain_error("PureState: negative cutoff");
  }
  explicit PureState(std::vector<Complex> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) throw std::domain_error("PureState: empty amplitude vector");
  }

  int cutoff() const { return static_cast<int>(amps_.size()) - 1; }
  Complex amplitude(int n) const { return amps_[static_cast<std::size_t>(n)]; }
  Complex& amplitude(int n) { return amps_[static_cast<std::size_t>(n)]; }
  const std::vector<Complex>& amplitudes() const { return amps_; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& c : amps_) s += std::norm(c);
    return s;
  }

  // Mass in the top two levels; small values certify truncation adequacy.
  double tail_mass() const {
    const std::size_t n = amps_.size();
    double t = std::norm(amps_[n - 1]);
    if (n > 1) t += std::norm(amps_[n - 2]);
    return t;
  }

  PureState normalized() const {
    const double ns = norm_squared();
    if (ns <= 0.0) throw std::domain_error("PureState: cannot normalize zero state");
    PureState out = *this;
    const double inv = 1.0 / std::sqrt(ns);
    for (auto& c : out.amps_) c *= inv;
    return out;
  }

 private:
  std::vector<Complex> amps_;
};

// |alpha>: c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), computed in log
// space to stay finite for large cutoffs.
inline PureState coherent_state(Complex alpha, int cutoff) {
  PureState out(cutoff);
  const double a2 = std::norm(alpha);
  const double mag = std::abs(alpha);
  const double phase = std::arg(alpha);
  for (int n = 0; n <= cutoff; ++n) {
    const double logmag =
        -0.5 * a2 + (mag > 0.0 ? n * std::log(mag) : (n == 0 ? 0.0 : -1e300)) -
        0.5 * log_factorial(n);
    out.amplitude(n) = std::polar(std::exp(logmag), n * phase);
  }
  if (out.tail_mass() > kNormTolerance) {
    throw TruncationError("coherent_state: cutoff too small for |alpha|^2 = " +
                          std::to_string(a2));
  }
  return out;
}

inline PureState fock_state(int m, int cutoff) {
  if (m < 0 || m > cutoff) throw std::domain_error("fock_state: m outside [0, cutoff]");
  PureState out(cutoff);
  out.amplitude(m) = 1.0;
  return out;
}

inline double mean_photon(const PureState& s) {
  double acc = 0.0;
  for (int n = 0; n <= s.cutoff(); ++n) acc += n * std::norm(s.amplitude(n));
  return acc;
}

inline double second_moment(const PureState& s) {
  double acc = 0.0;
  for (int n = 0; n <= s.cutoff(); ++n) {
    acc += static_cast<double>(n) * n * std::norm(s.amplitude(n));
  }
  return acc;
}

inline Complex inner_product(const PureState& a, const PureState& b) {
  if (a.cutoff() != b.cutoff()) throw std::domain_error("inner_product: cutoff mismatch");
  Complex acc = 0.0;
  for (int n = 0; n <= a.cutoff(); ++n) {
    acc += std::conj(a.amplitude(n)) * b.amplitude(n);
  }
  return acc;
}

inline double fidelity(const PureState& a, const PureState& b) {
  return std::norm(inner_product(a, b));
}

inline std::vector<double> number_distribution(const PureState& s) {
  std::vector<double> p(static_cast<std::size_t>(s.cutoff()) + 1);
  for (int n = 0; n <= s.cutoff(); ++n) p[static_cast<std::size_t>(n)] = std::norm(s.amplitude(n));
  return p;
}

// Two-mode truncated Fock state c_{n1,n2}, both modes sharing one cutoff.
// Mode 1 is the signal, mode 2 the auxiliary/idler.
class TwoModeState {
 public:
  explicit TwoModeState(int cutoff)
      : cutoff_(cutoff),
        amps_(static_cast<std::size_t>(cutoff + 1) * static_cast<std::size_t>(cutoff + 1)) {
    if (cutoff < 0) throw std::domain_error("TwoModeState: negative cutoff");
  }

  int cutoff() const { return cutoff_; }
  Complex amplitude(int n1, int n2) const { return amps_[index(n1, n2)]; }
  Complex& amplitude(int n1, int n2) { return amps_[index(n1, n2)]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& c : amps_) s += std::norm(c);
    return s;
  }

  // Mass along the top edge of each mode.
  double edge_mass() const {
    double t = 0.0;
    for (int n = 0; n <= cutoff_; ++n) {
      t += std::norm(amplitude(cutoff_, n));
      if (n != cutoff_) t += std::norm(amplitude(n, cutoff_));
    }
    return t;
  }

  static TwoModeState product(const PureState& mode1, const PureState& mode2) {
    if (mode1.cutoff() != mode2.cutoff()) {
      throw std::domain_error("TwoModeState::product: cutoff mismatch");
    }
    TwoModeState out(mode1.cutoff());
    for (int n1 = 0; n1 <= out.cutoff_; ++n1) {
      for (int n2 = 0; n2 <= out.cutoff_; ++n2) {
        out.amplitude(n1, n2) = mode1.amplitude(n1) * mode2.amplitude(n2);
      }
    }
    return out;
  }

 private:
  std::size_t index(int n1, int n2) const {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(cutoff_ + 1) +
           static_cast<std::size_t>(n2);
  }

  int cutoff_;
  std::vector<Complex> amps_;
};

// Re-embed a state at a different cutoff. Growing pads with zeros;
// shrinking requires the discarded tail to be negligible.
inline PureState with_cutoff(const PureState& s, int cutoff) {
  PureState out(cutoff);
  double dropped = 0.0;
  for (int n = 0; n <= s.cutoff(); ++n) {
    if (n <= cutoff) {
      out.amplitude(n) = s.amplitude(n);
    } else {
      dropped += std::norm(s.amplitude(n));
    }
  }
  if (dropped > kNormTolerance) {
    throw TruncationError("with_cutoff: discarded amplitude mass " + std::to_string(dropped));
  }
  return out;
}

// Weighted list of conditional pure states (one heralding branch).
struct BranchEnsemble {
  struct Member {
    double weight;    // unconditional probability of this outcome
    int outcome;      // auxiliary detector photon count
    PureState state;  // normalized conditional state
  };

  std::vector<Member> members;
  double total_weight = 0.0;

  // Pooled photon-number distribution, weighted by branch probability and
  // normalized by the total weight.
  std::vector<double> pooled_distribution() const {
    std::size_t len = 0;
    for (const auto& m : members) {
      len = std::max(len, m.state.amplitudes().size());
    }
    std::vector<double> p(len, 0.0);
    for (const auto& m : members) {
      for (int n = 0; n <= m.state.cutoff(); ++n) {
        p[static_cast<std::size_t>(n)] += m.weight * std::norm(m.state.amplitude(n));
      }
    }
    if (total_weight > 0.0) {
      for (auto& v : p) v /= total_weight;
    }
    return p;
  }

  double mean_photon() const {
    double acc = 0.0;
    for (const auto& m : members) acc += m.weight * pacs::mean_photon(m.state);
    return total_weight > 0.0 ? acc / total_weight : 0.0;
  }

  double second_moment() const {
    double acc = 0.0;
    for (const auto& m : members) acc += m.weight * pacs::second_moment(m.state);
    return total_weight > 0.0 ? acc / total_weight : 0.0;
  }
};

}  // namespace pacs
