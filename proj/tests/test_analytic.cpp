#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qbus/analytic.hpp"
#include "qbus/dicke.hpp"
#include "qbus/dynamics.hpp"
#include "qbus/metrics.hpp"
#include "qbus/operators.hpp"

using namespace qbus;

namespace {

CouplingProfile random_profile(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> chi(static_cast<std::size_t>(n));
  for (auto& c : chi) c = u(rng);
  return CouplingProfile(chi);
}

// Solve Delta2 with delta(Delta2) = target by fixed-point iteration on Delta2 - Delta1 + g2^2/Delta2 - lambda1.
double delta2_for(double g1, double g2, double d1, double target) {
  double d2 = d1;
  for (int i = 0; i < 200; ++i) d2 = target + d1 + g1 * g1 / d1 - g2 * g2 / d2;
  return d2;
}

}  // namespace

TEST_CASE("mu") {
  CHECK(mu(CouplingProfile({3.0, 4.0})) == doctest::Approx(5.0));
  CHECK(mu(CouplingProfile({-2.5})) == doctest::Approx(2.5));
  CHECK(mu(CouplingProfile({3.0, 1.0, 1.0, 1.0})) == doctest::Approx(std::sqrt(12.0)));
}

TEST_CASE("resonant amplitudes") {
  SUBCASE("initial condition and half period") {
    const CouplingProfile p({1.0, 0.4, -0.9});
    const auto a0 = resonant_amplitudes(p, 1, 0.0);
    CHECK(std::abs(a0.c[1] - 1.0) < 1e-15);
    CHECK(std::abs(a0.c0) < 1e-15);
    const double m = mu(p);
    const auto a = resonant_amplitudes(p, 1, kPi / m);
    CHECK(std::abs(a.c0) < 1e-15);
    for (int j = 0; j < 3; ++j)
      CHECK(std::abs(a.c[static_cast<std::size_t>(j)] - ((j == 1 ? 1.0 : 0.0) - 2.0 * p[static_cast<std::size_t>(j)] * p[1] / (m * m))) < 1e-14);
    CHECK_THROWS(resonant_amplitudes(p, 3, 0.0));
  }
  SUBCASE("Bell ratio") {
    const CouplingProfile p({1.0, std::sqrt(2.0) - 1.0});
    const auto a = resonant_amplitudes(p, 0, kPi / mu(p));
    CHECK(std::abs(std::abs(a.c[0]) - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(std::abs(a.c[1]) - 1 / std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(a.c0) < 1e-15);
    Vec two(4);
    two << 0.0, a.c[1], a.c[0], 0.0;
    CHECK(std::abs(concurrence(StateVector(SpaceSpec::qubits({2}), two)) - 1.0) < 1e-12);
  }
  SUBCASE("normalization for random profiles and times") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> ut(0.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
      const auto p = random_profile(rng, 1 + trial % 6);
      const auto a = resonant_amplitudes(p, trial % static_cast<int>(p.size()), ut(rng));
      CHECK(std::abs(a.norm_squared() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("closed form agrees with numeric evolution") {
  const CouplingProfile p({0.8, 1.3});
  const double m = mu(p);
  const auto h = resonant_tc(p, 1);
  const auto psi0 = to_state(resonant_amplitudes(p, 0, 0.0));
  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) ts.push_back(2 * kPi / m * i / 40.0);
  const auto res = evolve_exact(h, psi0, ts.back(), ts);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const auto an = resonant_amplitudes(p, 0, ts[i]);
    CHECK((res.states[i].amplitudes() - to_state(an).amplitudes()).norm() < 1e-10);
  }
}

TEST_CASE("single-excitation propagation of superpositions") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  const auto p = random_profile(rng, 4);
  ResonantAmplitudes init;
  init.c0 = cplx(nd(rng), nd(rng));
  for (int j = 0; j < 4; ++j) init.c.emplace_back(nd(rng), nd(rng));
  const double n = std::sqrt(init.norm_squared());
  init.c0 /= n;
  for (auto& c : init.c) c /= n;
  const auto ex = evolve_exact(resonant_tc(p, 1), to_state(init), 2.7).states.back();
  const auto an = propagate_single_excitation(p, init, 2.7);
  CHECK((to_state(an).amplitudes() - ex.amplitudes()).norm() < 1e-12);
  const auto back = from_state(ex);
  CHECK(std::abs(back.c0 - an.c0) < 1e-12);
  CHECK(std::abs(back.norm_squared() - 1.0) < 1e-12);
}

TEST_CASE("closed form satisfies the Schroedinger equation") {
  const CouplingProfile p({0.9, -0.3, 1.7});
  const double m = mu(p);
  const Mat H = resonant_tc(p, 1).dense(0.0);
  const double h = 1e-6 / m;
  for (double t : {0.3, 1.1, 2.5}) {
    const Vec fwd = to_state(resonant_amplitudes(p, 2, t + h)).amplitudes();
    const Vec bwd = to_state(resonant_amplitudes(p, 2, t - h)).amplitudes();
    const Vec mid = to_state(resonant_amplitudes(p, 2, t)).amplitudes();
    CHECK(((fwd - bwd) / (2 * h) - (-kI) * (H * mid)).norm() < 1e-6);
  }
}

TEST_CASE("f_factor and stark_shift") {
  CHECK(f_factor(3, 1, 3, 3) == 0.0);
  CHECK(f_factor(2, 1, 3, 3) == doctest::Approx(std::sqrt(12.0)));
  CHECK(f_factor(0, 3, 1, 6) == doctest::Approx(std::sqrt(12.0)));
  CHECK_THROWS(f_factor(4, 0, 3, 3));

  const DispersiveParams p(3, 3, 1.0, 1.5, 20.0, 25.0);
  CHECK(stark_shift(3, 0, p) == 0.0);
  CHECK(stark_shift(2, 1, p) == doctest::Approx(2 * p.lambda1() + 2 * p.lambda2()));
  const DispersiveParams p16(1, 6, 1.0, 1.5, 20.0, 25.0);
  CHECK(stark_shift(0, 3, p16) == doctest::Approx(9 * p16.lambda2()));
  CHECK_THROWS(stark_shift(0, 7, p16));

  // Equals the diagonal of the effective Hamiltonian.
  const auto h = effective_dicke(p);
  const Mat H = h.dense(0.0);
  for (int k = 0; k <= 3; ++k)
    for (int q = 0; q <= 3; ++q) {
      const auto i = static_cast<Eigen::Index>(h.space().symmetric_index({k, q}));
      CHECK(std::abs(H(i, i).real() - stark_shift(k, q, p)) < 1e-12);
    }
}

TEST_CASE("transitions") {
  const TransitionSpec minus(DickePair(3, 3, 3, 0), Branch::Minus);
  CHECK(minus.valid());
  CHECK(minus.target() == DickePair(3, 2, 3, 1));
  CHECK(minus.reversed() == TransitionSpec(DickePair(3, 2, 3, 1), Branch::Plus));
  const TransitionSpec bottom(DickePair(3, 0, 3, 2), Branch::Minus);
  CHECK_FALSE(bottom.valid());
  CHECK_THROWS_AS(bottom.target(), std::domain_error);
  CHECK_FALSE(TransitionSpec(DickePair(3, 3, 3, 1), Branch::Plus).valid());

  const DispersiveParams p(3, 3, 1.0, 1.2, 20.0, 21.0);
  CHECK(transition_element(bottom, p) == 0.0);
  CHECK(transition_element(minus, p) == doctest::Approx(transition_element(minus.reversed(), p)));

  SUBCASE("N = 1 element") {
    const DispersiveParams q(1, 5, 1.0, 1.2, 20.0, 21.0);
    for (int qq = 0; qq < 5; ++qq) {
      const TransitionSpec t(DickePair(1, 1, 5, qq), Branch::Minus);
      CHECK(transition_element(t, q) == doctest::Approx(q.omega_eff() * std::sqrt((qq + 1.0) * (5 - qq))));
    }
  }

  SUBCASE("elements equal explicit-basis collective-operator matrix elements") {
    for (int N = 1; N <= 5; ++N)
      for (int M = 1; M <= 5; ++M) {
        if (N + M > 9) continue;
        const DispersiveParams pp(N, M, 1.0, 1.0, 10.0, 10.0);
        const auto sp = SpaceSpec::qubits({N, M});
        const Mat hop = Mat(ops::collective_lower(sp, 0, N)) * Mat(ops::collective_raise(sp, N, M));  // S J^dagger
        for (int k = 1; k <= N; ++k)
          for (int q = 0; q < M; ++q) {
            const TransitionSpec t(DickePair(N, k, M, q), Branch::Minus);
            const auto src = tensor(dicke_state({N, k}), dicke_state({M, q}));
            const auto dst = tensor(dicke_state({N, k - 1}), dicke_state({M, q + 1}));
            const double ref = pp.omega_eff() * std::abs(dst.amplitudes().dot(hop * src.amplitudes()));
            CHECK(std::abs(transition_element(t, pp) - ref) < 1e-12);
          }
      }
  }

  SUBCASE("symmetric detuning") {
    // N = M, lambda1 = lambda2, delta = 0: both branches from (k, k) have equal |detuning|.
    const DispersiveParams s(3, 3, 1.0, 1.0, 20.0, 20.0);
    CHECK(s.detuning() == 0.0);
    for (int k = 1; k <= 2; ++k) {
      const auto up = transition_detuning(TransitionSpec(DickePair(3, k, 3, k), Branch::Plus), s);
      const auto dn = transition_detuning(TransitionSpec(DickePair(3, k, 3, k), Branch::Minus), s);
      CHECK(std::abs(std::abs(up.validated) - std::abs(dn.validated)) < 1e-14);
      CHECK(std::abs(std::abs(up.literal) - std::abs(dn.literal)) < 1e-14);
    }
  }

  SUBCASE("literal-sign example") {
    // (3,0) minus branch with delta = 2(lambda1 + lambda2) vanishes under the literal convention;
    // the validated resonance sits at delta = -2(lambda1 + lambda2).
    const double g = 1.0, d1 = 40.0;
    for (double sign : {1.0, -1.0}) {
      double d2 = d1;
      for (int i = 0; i < 200; ++i) d2 = sign * 2 * (g * g / d1 + g * g / d2) + d1 + g * g / d1 - g * g / d2;
      const DispersiveParams pp(3, 3, g, g, d1, d2);
      const auto det = transition_detuning(TransitionSpec(DickePair(3, 3, 3, 0), Branch::Minus), pp);
      CHECK(std::abs(sign > 0 ? det.literal : det.validated) < 1e-12);
    }
  }
}

TEST_CASE("validated detuning sign matches effective-model dynamics") {
  // N = 1, M = 4, sector k + q = 2 is exactly two-level: (1,1) <-> (0,2).
  // Peak transfer of a detuned Rabi problem is 4 el^2 / (4 el^2 + D^2) at t = pi / sqrt(4 el^2 + D^2).
  const double g = 1.0, d1 = 20.0;
  const TransitionSpec t(DickePair(1, 1, 4, 1), Branch::Minus);
  for (double offset : {0.0, 0.1, -0.07}) {
    double lambda2 = g * g / d1;
    double d2 = d1;
    for (int i = 0; i < 50; ++i) {
      d2 = delta2_for(g, g, d1, -lambda2 + offset);
      lambda2 = g * g / d2;
    }
    const DispersiveParams p(1, 4, g, g, d1, d2);
    const auto det = transition_detuning(t, p);
    CHECK(std::abs(det.validated - offset) < 1e-10);
    const double el = transition_element(t, p);
    const double rabi = std::sqrt(4 * el * el + det.validated * det.validated);
    const auto h = effective_dicke(p);
    const auto psi0 = StateVector::basis(h.space(), h.space().symmetric_index({1, 1}));
    const auto res = evolve_tdep(h, psi0, kPi / rabi, {1e-11});
    const double pop = std::norm(res.states.back()[h.space().symmetric_index({0, 2})]);
    CHECK(pop == doctest::Approx(4 * el * el / (rabi * rabi)).epsilon(1e-7));
    const double lit = 4 * el * el / (4 * el * el + det.literal * det.literal);
    CHECK(std::abs(pop - lit) > 0.05);
  }
}

TEST_CASE("tau_dicke") {
  CHECK(tau_dicke(3, 3, 1.0) == 0.0);
  CHECK(tau_dicke(3, 0, 1.0) == doctest::Approx(kPi / 3));
  CHECK(tau_dicke(3, 0, 2.0) == doctest::Approx(kPi / 6));
  CHECK_THROWS(tau_dicke(3, 4, 1.0));
  CHECK_THROWS(tau_dicke(3, 1, 0.0));

  SUBCASE("evolving for tau merges into the larger Dicke state") {
    for (int M = 1; M <= 6; ++M)
      for (int q = 0; q < M; ++q) {
        // Resonant two-level model |e>|D_q> <-> |g>|D_{q+1}> with the operator-algebra element.
        const double el = 0.37 * std::sqrt((q + 1.0) * (M - q));
        const double tau = tau_dicke(M, q, el);
        const double a = std::cos(el * tau), b = std::sin(el * tau);
        const Vec v = a * tensor(dicke_state({1, 1}), dicke_state({M, q})).amplitudes() +
                      b * tensor(dicke_state({1, 0}), dicke_state({M, q + 1})).amplitudes();
        CHECK(std::abs(std::abs(dicke_state({M + 1, q + 1}).amplitudes().dot(v)) - 1.0) < 1e-12);
      }
  }
}
