#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "pacs/errors.hpp"
#include "pacs/fock.hpp"
#include "pacs/special_math.hpp"

namespace pacs {

struct BeamSplitterSpec {
  double transmissivity;  // intensity transmissivity T, R = 1 - T

  explicit BeamSplitterSpec(double t) : transmissivity(t) {
    if (!(t >= 0.0 && t <= 1.0)) {
      throw std::domain_error("BeamSplitterSpec: T must lie in [0, 1]");
    }
  }
};

struct MziSpec {
  Complex alpha;  // coherent input amplitude (phase theta folded in)
  double phi;     // interferometer phase, radians
};

struct LossSpec {
  double photon_loss = 0.0;         // L in [0, 1]
  double detector_efficiency = 1.0; // D in [0, 1]

  LossSpec() = default;
  LossSpec(double loss, double det_eff)
      : photon_loss(loss), detector_efficiency(det_eff) {
    if (!(loss >= 0.0 && loss <= 1.0) || !(det_eff >= 0.0 && det_eff <= 1.0)) {
      throw std::domain_error("LossSpec: L and D must lie in [0, 1]");
    }
  }
};

// alpha -> (1 - L) D alpha
inline Complex apply_loss(Complex alpha, const LossSpec& loss) {
  return (1.0 - loss.photon_loss) * loss.detector_efficiency * alpha;
}

// Beam splitter in the photon-number basis. Creation-operator convention
// (real orthogonal):
//   a^dag -> sqrt(T) a^dag - sqrt(R) b^dag
//   b^dag -> sqrt(R) a^dag + sqrt(T) b^dag
// Total photon number is conserved, so the map is exact on the truncated
// space whenever the input's occupied total number fits under the cutoff.
inline TwoModeState beam_splitter(const TwoModeState& in, const BeamSplitterSpec& spec) {
  const double t = spec.transmissivity;
  const double r = 1.0 - t;
  const int cut = in.cutoff();
  TwoModeState out(cut);

  const double log_t = t > 0.0 ? std::log(t) : 0.0;
  const double log_r = r > 0.0 ? std::log(r) : 0.0;

  for (int n1 = 0; n1 <= cut; ++n1) {
    for (int n2 = 0; n2 <= cut; ++n2) {
      const Complex c = in.amplitude(n1, n2);
      if (c == Complex(0.0, 0.0)) continue;
      for (int j = 0; j <= n1; ++j) {
        for (int k = 0; k <= n2; ++k) {
          const int out1 = j + k;
          const int out2 = n1 + n2 - out1;
          if (out1 > cut || out2 > cut) continue;
          // exponents of sqrt(T) and sqrt(R)
          const int et = j + n2 - k;
          const int er = n1 - j + k;
          if (t == 0.0 && et > 0) continue;
          if (r == 0.0 && er > 0) continue;
          const double logmag =
              log_factorial(n1) - log_factorial(j) - log_factorial(n1 - j) +
              log_factorial(n2) - log_factorial(k) - log_factorial(n2 - k) +
              0.5 * (et * log_t + er * log_r) +
              0.5 * (log_factorial(out1) + log_factorial(out2) -
                     log_factorial(n1) - log_factorial(n2));
          const double sign = ((n1 - j) % 2 == 0) ? 1.0 : -1.0;
          out.amplitude(out1, out2) += c * sign * std::exp(logmag);
        }
      }
    }
  }
  return out;
}

// Port amplitudes of an MZI (50/50 splitters, phase phi in the lower arm)
// fed by coherent |alpha> and vacuum. Closed form: the input is a product
// of coherent states everywhere inside the interferometer.
//   top    = -alpha e^{i phi/2} cos(phi/2)   (bright port at phi = 0)
//   bottom = -i alpha e^{i phi/2} sin(phi/2)
struct MziPorts {
  Complex top;
  Complex bottom;
};

inline MziPorts mzi_ports(const MziSpec& spec) {
  const Complex half_phase = std::polar(1.0, spec.phi / 2.0);
  const double c = std::cos(spec.phi / 2.0);
  const double s = std::sin(spec.phi / 2.0);
  return {-spec.alpha * half_phase * c,
          Complex(0.0, -1.0) * spec.alpha * half_phase * s};
}

inline Complex mzi_output_amplitude(const MziSpec& spec) {
  return mzi_ports(spec).top;
}

inline double squeezing_from_gain(double gain) {
  if (gain < 1.0) throw std::domain_error("squeezing_from_gain: G must be >= 1");
  return std::acosh(std::sqrt(gain));
}

inline double gain_from_squeezing(double r) { return std::pow(std::cosh(r), 2); }

// Two-mode squeezer exp[r (a^dag b^dag - a b)]. The generator conserves
// n1 - n2, so the exponential is computed blockwise: each block is a real
// antisymmetric tridiagonal matrix whose exponential is orthogonal on the
// truncated space. Accuracy near the cutoff is certified by the edge-mass
// check.
inline TwoModeState two_mode_squeezer(const TwoModeState& in, double r,
                                      double leakage_tolerance = 1e-6) {
  if (r < 0.0) throw std::domain_error("two_mode_squeezer: r must be >= 0");
  const int cut = in.cutoff();
  TwoModeState out(cut);
  if (r == 0.0) {
    out = in;
    return out;
  }

  for (int d = -cut; d <= cut; ++d) {
    // Block basis: n2 = 0..cut-|d|, n1 = n2 + d (d >= 0) or n2 = n1 - d.
    const int len = cut - std::abs(d) + 1;
    const int base1 = d >= 0 ? d : 0;
    const int base2 = d >= 0 ? 0 : -d;

    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(len, len);
    for (int i = 0; i + 1 < len; ++i) {
      const int n1 = base1 + i;
      const int n2 = base2 + i;
      const double coupling = r * std::sqrt(static_cast<double>(n1 + 1) * (n2 + 1));
      gen(i + 1, i) = coupling;   // raising a^dag b^dag
      gen(i, i + 1) = -coupling;  // lowering -a b
    }
    const Eigen::MatrixXd block = gen.exp();

    Eigen::VectorXcd v(len);
    for (int i = 0; i < len; ++i) v(i) = in.amplitude(base1 + i, base2 + i);
    const Eigen::VectorXcd w = block * v;
    for (int i = 0; i < len; ++i) out.amplitude(base1 + i, base2 + i) = w(i);
  }

  const double leakage = out.edge_mass();
  if (leakage > leakage_tolerance) {
    throw TruncationError("two_mode_squeezer: edge leakage " + std::to_string(leakage) +
                          " exceeds tolerance; increase cutoff");
  }
  return out;
}

}  // namespace pacs
