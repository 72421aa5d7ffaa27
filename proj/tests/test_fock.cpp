#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "pacs/fock.hpp"
#include "pacs/herald.hpp"

using namespace pacs;

TEST_CASE("coherent state basics") {
  const PureState vac = coherent_state(0.0, 10);
  CHECK(vac.amplitude(0) == Complex(1.0, 0.0));
  CHECK(vac.amplitude(3) == Complex(0.0, 0.0));

  const PureState one = coherent_state(1.0, suggest_cutoff(1.0));
  CHECK_THAT(std::norm(one.amplitude(0)), Catch::Matchers::WithinAbs(std::exp(-1.0), 1e-12));
  CHECK_THAT(one.norm_squared(), Catch::Matchers::WithinAbs(1.0, kNormTolerance));

  // Poisson-mean oracle at |alpha|^2 = 4
  const PureState four = coherent_state(2.0, suggest_cutoff(4.0));
  CHECK_THAT(mean_photon(four), Catch::Matchers::WithinAbs(4.0, 1e-9));
  CHECK(four.tail_mass() < kNormTolerance);
}

TEST_CASE("coherent state with complex phase stays normalized") {
  const Complex alpha = std::polar(1.3, 0.7);
  const PureState s = coherent_state(alpha, suggest_cutoff(std::norm(alpha)));
  CHECK_THAT(s.norm_squared(), Catch::Matchers::WithinAbs(1.0, kNormTolerance));
  CHECK_THAT(mean_photon(s), Catch::Matchers::WithinAbs(std::norm(alpha), 1e-9));
}

TEST_CASE("coherent constructor rejects inadequate cutoffs") {
  CHECK_THROWS_AS(coherent_state(3.0, 5), TruncationError);
}

TEST_CASE("fock states") {
  const PureState vac = fock_state(0, 5);
  CHECK(mean_photon(vac) == 0.0);
  CHECK(second_moment(vac) == 0.0);

  const PureState one = fock_state(1, 5);
  CHECK(mean_photon(one) == 1.0);

  const PureState three = fock_state(3, 5);
  CHECK(second_moment(three) == 9.0);

  CHECK_THROWS_AS(fock_state(6, 5), std::domain_error);
}

TEST_CASE("moments of a coherent state are Poissonian") {
  const PureState s = coherent_state(1.0, suggest_cutoff(1.0));
  CHECK_THAT(mean_photon(s), Catch::Matchers::WithinAbs(1.0, 1e-10));
  CHECK_THAT(second_moment(s), Catch::Matchers::WithinAbs(2.0, 1e-10));
}

TEST_CASE("mean photon of a normalized a^dag|alpha> state") {
  // Explicit amplitude construction: c'_{n+1} prop c_n sqrt(n+1)
  const PureState base = coherent_state(1.0, suggest_cutoff(1.0, 1));
  PureState raised(base.cutoff());
  for (int n = 0; n + 1 <= base.cutoff(); ++n) {
    raised.amplitude(n + 1) = base.amplitude(n) * std::sqrt(n + 1.0);
  }
  const PureState added = raised.normalized();
  CHECK_THAT(mean_photon(added), Catch::Matchers::WithinAbs(2.5, 1e-9));
}

TEST_CASE("fidelity") {
  const PureState a = coherent_state(0.8, 30);
  CHECK_THAT(fidelity(a, a), Catch::Matchers::WithinAbs(1.0, 1e-12));
  CHECK(fidelity(fock_state(0, 30), fock_state(1, 30)) == 0.0);

  // Analytic coherent overlap: |<a|b>|^2 = exp(-|a-b|^2)
  const Complex alpha(0.8, 0.0), beta(0.3, 0.4);
  const PureState b = coherent_state(beta, 30);
  CHECK_THAT(fidelity(a, b),
             Catch::Matchers::WithinAbs(std::exp(-std::norm(alpha - beta)), 1e-10));

  CHECK_THROWS_AS(fidelity(a, fock_state(0, 10)), std::domain_error);
}

TEST_CASE("number distribution") {
  const auto p1 = number_distribution(fock_state(1, 6));
  CHECK(p1[1] == 1.0);

  const auto pc = number_distribution(coherent_state(1.0, suggest_cutoff(1.0)));
  double total = 0.0;
  for (std::size_t n = 0; n < pc.size(); ++n) {
    total += pc[n];
    CHECK_THAT(pc[n], Catch::Matchers::WithinAbs(
                          std::exp(-1.0 - log_factorial(static_cast<int>(n))), 1e-12));
  }
  CHECK_THAT(total, Catch::Matchers::WithinAbs(1.0, kNormTolerance));
}

TEST_CASE("photon-added distribution shifts right and vacates p_0") {
  const PureState input = coherent_state(1.0, suggest_cutoff(1.0, 1));
  const HeraldResult added = herald_addition_bs(input, 1, 1.0);
  const auto p = number_distribution(added.success_state);
  CHECK(p[0] < 1e-20);
  CHECK(mean_photon(added.success_state) > mean_photon(input) + 1.0);
}

TEST_CASE("ensemble moments match the pooled distribution") {
  const PureState input = coherent_state(1.0, suggest_cutoff(1.0, 1));
  const BranchEnsemble& failure = herald_addition_bs(input, 1, 0.6).failure_branch;
  REQUIRE(failure.total_weight > 0.0);

  const auto pooled = failure.pooled_distribution();
  double mean = 0.0, second = 0.0;
  for (std::size_t n = 0; n < pooled.size(); ++n) {
    mean += n * pooled[n];
    second += static_cast<double>(n) * n * pooled[n];
  }
  CHECK_THAT(failure.mean_photon(), Catch::Matchers::WithinAbs(mean, 1e-12));
  CHECK_THAT(failure.second_moment(), Catch::Matchers::WithinAbs(second, 1e-12));
}
