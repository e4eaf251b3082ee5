#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "dsq/errors.hpp"
#include "dsq/fock.hpp"
#include "support/expm_oracle.hpp"

namespace {

dsq::InteractionParams params_for(double chi_total, double eta) {
  return dsq::InteractionParams::make(chi_total * std::cos(eta),
                                      chi_total * std::sin(eta));
}

// Kept weight of one squeezer pair truncated at n_max quanta.
double pair_kept(double r, int n_max) {
  const double t2 = std::tanh(r) * std::tanh(r);
  return 1.0 - std::pow(t2, n_max + 1);
}

std::vector<dsq::Occupation> all_occupations(int n_max) {
  std::vector<dsq::Occupation> occs;
  for (int a = 0; a <= n_max; ++a)
    for (int b = 0; b <= n_max; ++b)
      for (int s = 0; s <= n_max; ++s)
        for (int t = 0; t <= n_max; ++t) occs.push_back({a, b, s, t});
  return occs;
}

}  // namespace

TEST_CASE("closed-form amplitudes match the generator exponential") {
  const int n_max = 6;
  const struct {
    double chi, eta;
  } cases[] = {{0.15, 0.25 * M_PI}, {0.2, 0.3}, {0.12, 1.2}, {0.05, 0.9}};
  for (const auto& c : cases) {
    CAPTURE(c.chi);
    CAPTURE(c.eta);
    const auto params = params_for(c.chi, c.eta);
    const auto psi = dsq::build_entangled_state(params, n_max, 1e-9);
    const auto oracle = dsq_test::squeezer_exponential(
        params.chi_85, params.chi_87, n_max + 10);
    double sup = 0;
    for (const auto& occ : all_occupations(n_max)) {
      const std::complex<double> amp = psi.at(occ);
      CHECK(amp.imag() == 0.0);
      sup = std::max(sup, std::abs(amp.real() -
                                   oracle.at(occ[0], occ[1], occ[2], occ[3])));
    }
    CHECK(sup < 1e-9);
  }
}

TEST_CASE("amplitudes live only on twinned occupations") {
  const auto psi = dsq::build_entangled_state(params_for(0.15, 0.6), 5);
  for (const auto& occ : all_occupations(5)) {
    if (occ[0] != occ[2] || occ[1] != occ[3]) {
      CHECK(psi.at(occ) == std::complex<double>(0.0));
    }
  }
}

TEST_CASE("truncation leakage matches the closed form") {
  for (double chi : {0.1, 0.15, 0.2}) {
    for (int n_max : {4, 6}) {
      CAPTURE(chi);
      CAPTURE(n_max);
      const auto params = params_for(chi, 0.25 * M_PI);
      const auto psi = dsq::build_entangled_state(params, n_max, 1e-4);
      const double expected =
          1.0 - pair_kept(params.chi_85, n_max) * pair_kept(params.chi_87, n_max);
      CHECK(psi.truncation_leakage() ==
            doctest::Approx(expected).epsilon(1e-13).scale(1));
      CHECK(psi.norm2() + psi.truncation_leakage() ==
            doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("leakage bound is enforced and can be relaxed") {
  // tanh(0.2 cos 0.1)^14 sits just above 1e-10, just below 1e-9.
  const auto params = params_for(0.2, 0.1);
  CHECK_THROWS_AS(dsq::build_entangled_state(params, 6), dsq::NumericalError);
  CHECK_NOTHROW(dsq::build_entangled_state(params, 6, 1e-9));
  CHECK_NOTHROW(dsq::build_entangled_state(params, 8));
}

TEST_CASE("single-species drive leaves the other pair in vacuum") {
  const auto psi = dsq::build_entangled_state(params_for(0.18, 0.0), 5, 1e-6);
  const double r = 0.18;
  for (const auto& occ : all_occupations(5)) {
    if (occ[1] > 0 || occ[3] > 0) {
      CHECK(psi.at(occ) == std::complex<double>(0.0));
    }
  }
  for (int n = 0; n <= 5; ++n) {
    const double expected = std::pow(std::tanh(r), n) / std::cosh(r);
    CHECK(psi.at({n, 0, n, 0}).real() == doctest::Approx(expected).epsilon(1e-14));
  }
}

TEST_CASE("balanced drive is symmetric under species swap") {
  const double r = 0.16 / std::sqrt(2.0);
  const auto psi =
      dsq::build_entangled_state(dsq::InteractionParams::make(r, r), 6);
  for (int n = 0; n <= 6; ++n)
    for (int np = 0; np <= 6; ++np)
      CHECK(psi.at({n, np, n, np}).real() ==
            doctest::Approx(psi.at({np, n, np, n}).real()).epsilon(1e-14));
}

TEST_CASE("default truncation depth steps up with the coupling") {
  CHECK(dsq::default_n_max(0.02) == 4);
  CHECK(dsq::default_n_max(0.1) == 4);
  CHECK(dsq::default_n_max(0.11) == 6);
  CHECK(dsq::default_n_max(0.2) == 6);
}

TEST_CASE("density operator from a pure state") {
  const auto psi = dsq::build_entangled_state(params_for(0.15, 0.6), 4, 1e-6);
  const auto rho = dsq::MixedState::from_pure(psi);
  CHECK(rho.trace() == doctest::Approx(psi.norm2()).epsilon(1e-14));
  CHECK(rho.support_size() == 25 * 25);  // 5x5 twinned kets, outer product
  const std::complex<double> a00 = psi.at({0, 0, 0, 0});
  const std::complex<double> a11 = psi.at({1, 0, 1, 0});
  CHECK(std::abs(rho.entry({0, 0, 0, 0}, {1, 0, 1, 0}) - a00 * std::conj(a11)) <
        1e-16);
}

TEST_CASE("loss channel is trace preserving and composes multiplicatively") {
  const auto psi = dsq::build_entangled_state(params_for(0.18, 0.7), 4, 1e-6);
  const auto rho = dsq::MixedState::from_pure(psi);
  const auto once = rho.apply_loss(dsq::Mode::spin_85, 0.28);
  CHECK(once.trace() == doctest::Approx(rho.trace()).epsilon(1e-13));

  const auto twice = once.apply_loss(dsq::Mode::spin_85, 0.5);
  const auto direct = rho.apply_loss(dsq::Mode::spin_85, 0.14);
  double worst = 0;
  for (const auto& ket : all_occupations(4))
    for (const auto& bra : all_occupations(4))
      worst = std::max(worst,
                       std::abs(twice.entry(ket, bra) - direct.entry(ket, bra)));
  CHECK(worst < 1e-14);

  const auto ident = rho.apply_loss(dsq::Mode::signal_87, 1.0);
  CHECK(ident.entry({1, 1, 1, 1}, {0, 0, 0, 0}) ==
        rho.entry({1, 1, 1, 1}, {0, 0, 0, 0}));
  CHECK(ident.support_size() == rho.support_size());

  const auto dark = rho.apply_loss(dsq::Mode::signal_85, 0.0);
  CHECK(dark.mean_occupation(dsq::Mode::signal_85) == 0.0);
  CHECK(dark.trace() == doctest::Approx(rho.trace()).epsilon(1e-13));
}

TEST_CASE("loss rescales occupations and normally ordered moments") {
  const auto params = params_for(0.17, 0.8);
  const auto rho = dsq::MixedState::from_pure(
      dsq::build_entangled_state(params, 6));
  const double eps85 = 0.37, eps87 = 0.61;
  const auto lossy = rho.apply_loss(dsq::Mode::spin_85, eps85)
                         .apply_loss(dsq::Mode::spin_87, eps87);

  CHECK(lossy.mean_occupation(dsq::Mode::spin_85) ==
        doctest::Approx(eps85 * rho.mean_occupation(dsq::Mode::spin_85))
            .epsilon(1e-12));
  CHECK(lossy.mean_occupation(dsq::Mode::signal_85) ==
        doctest::Approx(rho.mean_occupation(dsq::Mode::signal_85)).epsilon(1e-12));

  using dsq::Iso;
  // One spin annihilation per side: sqrt(eps) each.
  const auto cross = lossy.moment(Iso::rb85, Iso::rb85, Iso::rb87, Iso::rb87);
  const auto cross0 = rho.moment(Iso::rb85, Iso::rb85, Iso::rb87, Iso::rb87);
  CHECK(cross.real() ==
        doctest::Approx(std::sqrt(eps85 * eps87) * cross0.real()).epsilon(1e-12));
  const auto diag = lossy.moment(Iso::rb85, Iso::rb85, Iso::rb85, Iso::rb85);
  const auto diag0 = rho.moment(Iso::rb85, Iso::rb85, Iso::rb85, Iso::rb85);
  CHECK(diag.real() == doctest::Approx(eps85 * diag0.real()).epsilon(1e-12));
}

TEST_CASE("pure-state moments match squeezed-vacuum closed forms") {
  const auto params = params_for(0.16, 0.6);
  const double r85 = params.chi_85, r87 = params.chi_87;
  const auto rho = dsq::MixedState::from_pure(
      dsq::build_entangled_state(params, 8));
  using dsq::Iso;

  const double x = std::tanh(r85) * std::tanh(r85);
  const double pair85 = x * (1 + x) / ((1 - x) * (1 - x));
  CHECK(rho.moment(Iso::rb85, Iso::rb85, Iso::rb85, Iso::rb85).real() ==
        doctest::Approx(pair85).epsilon(1e-10));

  const double indep = std::sinh(r85) * std::sinh(r85) * std::sinh(r87) *
                       std::sinh(r87);
  CHECK(rho.moment(Iso::rb85, Iso::rb87, Iso::rb87, Iso::rb85).real() ==
        doctest::Approx(indep).epsilon(1e-10).scale(1));

  const double inter = std::sinh(r85) * std::cosh(r85) * std::sinh(r87) *
                       std::cosh(r87);
  CHECK(rho.moment(Iso::rb85, Iso::rb85, Iso::rb87, Iso::rb87).real() ==
        doctest::Approx(inter).epsilon(1e-10));
  CHECK(rho.moment(Iso::rb87, Iso::rb87, Iso::rb85, Iso::rb85).real() ==
        doctest::Approx(inter).epsilon(1e-10));

  CHECK(rho.mean_occupation(dsq::Mode::signal_85) ==
        doctest::Approx(std::sinh(r85) * std::sinh(r85)).epsilon(1e-10));
}

TEST_CASE("moments are hermitian under index reversal") {
  using dsq::Iso;
  const auto rho = dsq::MixedState::from_pure(
      dsq::build_entangled_state(params_for(0.18, 0.5), 5, 1e-6))
                       .apply_loss(dsq::Mode::spin_85, 0.4)
                       .apply_loss(dsq::Mode::signal_87, 0.8);
  const Iso isos[] = {Iso::rb85, Iso::rb87};
  for (Iso p : isos)
    for (Iso q : isos)
      for (Iso r : isos)
        for (Iso t : isos) {
          const auto fwd = rho.moment(p, q, r, t);
          const auto rev = rho.moment(t, r, q, p);
          CHECK(std::abs(fwd - std::conj(rev)) < 1e-14);
        }
}

TEST_CASE("loss keeps the ket-bra twin difference pattern") {
  const auto rho = dsq::MixedState::from_pure(
      dsq::build_entangled_state(params_for(0.2, 0.6), 4, 1e-4))
                       .apply_loss(dsq::Mode::signal_85, 0.3)
                       .apply_loss(dsq::Mode::spin_87, 0.7);
  const auto occs = all_occupations(4);
  int violations = 0;
  for (const auto& ket : occs)
    for (const auto& bra : occs) {
      if (std::abs(rho.entry(ket, bra)) == 0.0) continue;
      if (ket[0] - bra[0] != ket[2] - bra[2]) ++violations;
      if (ket[1] - bra[1] != ket[3] - bra[3]) ++violations;
    }
  CHECK(violations == 0);
}

TEST_CASE("loss transmissivity outside the unit interval is rejected") {
  const auto rho = dsq::MixedState::from_pure(
      dsq::build_entangled_state(params_for(0.1, 0.5), 3, 1e-6));
  CHECK_THROWS_AS(rho.apply_loss(dsq::Mode::spin_85, -0.01), dsq::ConfigError);
  CHECK_THROWS_AS(rho.apply_loss(dsq::Mode::spin_85, 1.01), dsq::ConfigError);
}

TEST_CASE("text dump lists the twinned amplitudes") {
  const auto psi = dsq::build_entangled_state(params_for(0.1, 0.25 * M_PI), 2, 1e-4);
  const std::string text = psi.to_text();
  CHECK(text.find("n_a85") != std::string::npos);
  CHECK(text.find("0 0 0 0") != std::string::npos);
  CHECK(text.find("2 2 2 2") != std::string::npos);
}
