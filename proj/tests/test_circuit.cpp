#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "pacs/circuit.hpp"
#include "pacs/fock.hpp"

using namespace pacs;

namespace {

PureState mode1_amplitudes(const TwoModeState& joint, int n2) {
  PureState out(joint.cutoff());
  for (int n = 0; n <= joint.cutoff(); ++n) out.amplitude(n) = joint.amplitude(n, n2);
  return out;
}

}  // namespace

TEST_CASE("beam splitter with T=1 is the identity") {
  const int cut = 18;
  const TwoModeState in =
      TwoModeState::product(coherent_state(0.9, cut), fock_state(1, cut));
  const TwoModeState out = beam_splitter(in, BeamSplitterSpec(1.0));
  for (int n1 = 0; n1 <= cut; ++n1) {
    for (int n2 = 0; n2 <= cut; ++n2) {
      CHECK_THAT(std::abs(out.amplitude(n1, n2) - in.amplitude(n1, n2)),
                 Catch::Matchers::WithinAbs(0.0, 1e-12));
    }
  }
}

TEST_CASE("beam splitter maps coherent x vacuum to a coherent product") {
  const Complex alpha(1.0, 0.4);
  const int cut = suggest_cutoff(std::norm(alpha)) + 4;
  const TwoModeState in =
      TwoModeState::product(coherent_state(alpha, cut), fock_state(0, cut));
  const TwoModeState out = beam_splitter(in, BeamSplitterSpec(0.5));

  const double s = std::sqrt(0.5);
  const TwoModeState expected = TwoModeState::product(coherent_state(s * alpha, cut),
                                                      coherent_state(-s * alpha, cut));
  double overlap_sq = 0.0;
  Complex overlap = 0.0;
  for (int n1 = 0; n1 <= cut; ++n1) {
    for (int n2 = 0; n2 <= cut; ++n2) {
      overlap += std::conj(expected.amplitude(n1, n2)) * out.amplitude(n1, n2);
    }
  }
  overlap_sq = std::norm(overlap);
  CHECK_THAT(overlap_sq, Catch::Matchers::WithinAbs(1.0, 1e-9));
}

TEST_CASE("single photon splits with the stated sign convention") {
  const int cut = 4;
  const TwoModeState in = TwoModeState::product(fock_state(1, cut), fock_state(0, cut));
  const TwoModeState out = beam_splitter(in, BeamSplitterSpec(0.5));
  const double s = std::sqrt(0.5);
  CHECK_THAT(std::abs(out.amplitude(1, 0) - Complex(s, 0.0)),
             Catch::Matchers::WithinAbs(0.0, 1e-12));
  CHECK_THAT(std::abs(out.amplitude(0, 1) - Complex(-s, 0.0)),
             Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("beam splitter preserves norm and inverts") {
  const int cut = 16;
  const TwoModeState in =
      TwoModeState::product(coherent_state(0.8, cut), fock_state(2, cut));
  const double t = 0.35;
  const TwoModeState out = beam_splitter(in, BeamSplitterSpec(t));
  CHECK_THAT(out.norm_squared(), Catch::Matchers::WithinAbs(in.norm_squared(), 1e-10));

  // Inverse transform: swap the sign convention by conjugating with a
  // mode swap is overkill; the adjoint equals the transform at the
  // reflected angle, applied to swapped modes. Instead verify round trip
  // through the swap-free identity B(t)^T = B applied with reversed sign,
  // realized here by swapping modes before and after.
  TwoModeState swapped(cut);
  for (int n1 = 0; n1 <= cut; ++n1)
    for (int n2 = 0; n2 <= cut; ++n2) swapped.amplitude(n1, n2) = out.amplitude(n2, n1);
  TwoModeState back_swapped = beam_splitter(swapped, BeamSplitterSpec(t));
  TwoModeState back(cut);
  for (int n1 = 0; n1 <= cut; ++n1)
    for (int n2 = 0; n2 <= cut; ++n2) back.amplitude(n1, n2) = back_swapped.amplitude(n2, n1);

  Complex overlap = 0.0;
  for (int n1 = 0; n1 <= cut; ++n1)
    for (int n2 = 0; n2 <= cut; ++n2)
      overlap += std::conj(in.amplitude(n1, n2)) * back.amplitude(n1, n2);
  CHECK(std::norm(overlap) > 1.0 - 1e-9);
}

TEST_CASE("beam splitter rejects out-of-range transmissivity") {
  CHECK_THROWS_AS(BeamSplitterSpec(1.2), std::domain_error);
  CHECK_THROWS_AS(BeamSplitterSpec(-0.1), std::domain_error);
}

TEST_CASE("mzi port powers") {
  const Complex alpha(1.3, 0.0);
  for (double phi : {0.0, M_PI / 2.0, M_PI, 1.1, 2.7}) {
    const MziPorts ports = mzi_ports({alpha, phi});
    const double expected_top = std::norm(alpha) * std::pow(std::cos(phi / 2.0), 2);
    CHECK_THAT(std::norm(ports.top), Catch::Matchers::WithinAbs(expected_top, 1e-12));
    CHECK_THAT(std::norm(ports.top) + std::norm(ports.bottom),
               Catch::Matchers::WithinAbs(std::norm(alpha), 1e-12));
  }
  CHECK_THAT(std::norm(mzi_output_amplitude({alpha, M_PI})),
             Catch::Matchers::WithinAbs(0.0, 1e-12));
}

TEST_CASE("loss substitution") {
  const Complex alpha(0.7, -0.2);
  CHECK(apply_loss(alpha, LossSpec(0.0, 1.0)) == alpha);
  CHECK_THAT(std::abs(apply_loss(alpha, LossSpec(0.3, 0.7)) - 0.49 * alpha),
             Catch::Matchers::WithinAbs(0.0, 1e-15));
  CHECK(apply_loss(alpha, LossSpec(1.0, 0.5)) == Complex(0.0, 0.0));
  CHECK_THROWS_AS(LossSpec(1.4, 0.5), std::domain_error);
}

TEST_CASE("gain and squeezing conversions") {
  CHECK(squeezing_from_gain(1.0) == 0.0);
  CHECK_THAT(gain_from_squeezing(squeezing_from_gain(1.8)),
             Catch::Matchers::WithinRel(1.8, 1e-12));
  CHECK_THROWS_AS(squeezing_from_gain(0.9), std::domain_error);
}

TEST_CASE("two-mode squeezer identity at r=0") {
  const int cut = 12;
  const TwoModeState in = TwoModeState::product(coherent_state(0.6, cut), fock_state(0, cut));
  const TwoModeState out = two_mode_squeezer(in, 0.0);
  for (int n1 = 0; n1 <= cut; ++n1)
    for (int n2 = 0; n2 <= cut; ++n2)
      CHECK(out.amplitude(n1, n2) == in.amplitude(n1, n2));
}

TEST_CASE("two-mode squeezed vacuum matches the TMSV series") {
  const double gain = 1.2;
  const double r = squeezing_from_gain(gain);
  const int cut = suggest_cutoff(gain, 0) + 20;
  const TwoModeState in = TwoModeState::product(fock_state(0, cut), fock_state(0, cut));
  const TwoModeState out = two_mode_squeezer(in, r);

  CHECK_THAT(out.norm_squared(), Catch::Matchers::WithinAbs(1.0, 1e-8));
  const double th = std::tanh(r), ch = std::cosh(r);
  for (int n = 0; n <= 10; ++n) {
    const double expected = std::pow(th, 2 * n) / (ch * ch);
    CHECK_THAT(std::norm(out.amplitude(n, n)), Catch::Matchers::WithinAbs(expected, 1e-8));
  }
  for (int n1 = 0; n1 <= 8; ++n1)
    for (int n2 = 0; n2 <= 8; ++n2)
      if (n1 != n2) CHECK(std::norm(out.amplitude(n1, n2)) < 1e-20);
}

TEST_CASE("two-mode squeezer thermal marginal at r=1.5") {
  const double r = 1.5;
  const int cut = 90;  // geometric tail: tanh^2(1.5) ~ 0.82 needs a deep cutoff
  const TwoModeState in = TwoModeState::product(fock_state(0, cut), fock_state(0, cut));
  const TwoModeState out = two_mode_squeezer(in, r);
  const double th = std::tanh(r), ch = std::cosh(r);
  for (int n = 0; n <= 20; ++n) {
    CHECK_THAT(std::norm(out.amplitude(n, n)),
               Catch::Matchers::WithinAbs(std::pow(th, 2 * n) / (ch * ch), 1e-8));
  }
}

TEST_CASE("two-mode squeezer flags inadequate cutoffs") {
  const int cut = 6;
  const TwoModeState in = TwoModeState::product(fock_state(0, cut), fock_state(0, cut));
  CHECK_THROWS_AS(two_mode_squeezer(in, 1.5), TruncationError);
}
