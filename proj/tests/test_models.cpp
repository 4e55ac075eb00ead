#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qbus/dicke.hpp"
#include "qbus/models.hpp"
#include "qbus/operators.hpp"

using namespace qbus;

namespace {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Dense single-site operator embedded among n qubits and a mode of dimension d.
Mat embed(const Mat& site, int qubit, int n, int d) {
  Mat out = Mat::Identity(1, 1);
  for (int j = 0; j < n; ++j) out = kron(out, j == qubit ? site : Mat(Mat::Identity(2, 2)));
  return kron(out, Mat::Identity(d, d));
}

Mat raise2() {
  Mat s = Mat::Zero(2, 2);
  s(1, 0) = 1.0;  // index 1 = excited
  return s;
}

Mat mode_lower(int n, int d) {
  Mat a = Mat::Zero(d, d);
  for (int m = 1; m < d; ++m) a(m - 1, m) = std::sqrt(static_cast<double>(m));
  return kron(Mat::Identity(1 << n, 1 << n), a);
}

double commutator_norm(const Mat& a, const Mat& b) { return (a * b - b * a).norm(); }

bool hermitian(const Mat& h) { return (h - h.adjoint()).norm() < 1e-12 * std::max(1.0, h.norm()); }

}  // namespace

TEST_CASE("single-site operators match Kronecker products") {
  const int n = 3, cutoff = 2, d = cutoff + 1;
  const auto sp = SpaceSpec::qubits({n}, cutoff);
  for (int j = 0; j < n; ++j) {
    CHECK((Mat(ops::sigma_plus(sp, j)) - embed(raise2(), j, n, d)).norm() < 1e-15);
    CHECK((Mat(ops::sigma_minus(sp, j)) - embed(raise2().adjoint(), j, n, d)).norm() < 1e-15);
    Mat z = Mat::Zero(2, 2);
    z(0, 0) = -1.0;
    z(1, 1) = 1.0;
    CHECK((Mat(ops::sigma_z(sp, j)) - embed(z, j, n, d)).norm() < 1e-15);
  }
  CHECK((Mat(ops::annihilation(sp)) - mode_lower(n, d)).norm() < 1e-15);
  const Mat a = mode_lower(n, d);
  CHECK((Mat(ops::number(sp)) - a.adjoint() * a).norm() < 1e-14);
}

TEST_CASE("resonant model") {
  const CouplingProfile prof({0.3, 1.1, -0.7, 2.0});
  const auto h = resonant_tc(prof, 2);
  const Mat H = h.dense(0.0);
  CHECK_FALSE(h.time_dependent());
  CHECK(hermitian(H));
  CHECK(commutator_norm(H, Mat(ops::excitation_number(h.space()))) < 1e-12);

  // Oracle: explicit sum of Kronecker-built terms.
  const int n = 4, d = 3;
  const Mat a = mode_lower(n, d);
  Mat ref = Mat::Zero(H.rows(), H.cols());
  for (int j = 0; j < n; ++j) {
    const Mat up = embed(raise2(), j, n, d) * a;
    ref += prof[static_cast<std::size_t>(j)] * (up + up.adjoint());
  }
  CHECK((H - ref).norm() < 1e-13);

  CHECK_THROWS(CouplingProfile({0.0, 0.0}));
  CHECK_THROWS(CouplingProfile({}));
  CHECK_THROWS(resonant_tc(prof, 0));
}

TEST_CASE("sideband model") {
  const auto h = sideband(0.8, 1.3, 3);
  const Mat H = h.dense(0.0);
  CHECK(hermitian(H));
  const auto& sp = h.space();
  const Mat inv = 2.0 * Mat(ops::number(sp)) - Mat(ops::sigma_z(sp, 0)) + Mat(ops::sigma_z(sp, 1));
  CHECK(commutator_norm(H, inv) < 1e-12);
  // The plain excitation number is not conserved by the blue sideband.
  CHECK(commutator_norm(H, Mat(ops::excitation_number(sp))) > 0.1);
}

TEST_CASE("lab-frame dispersive model") {
  const DispersiveParams p(2, 3, 0.4, 0.9, 10.0, 12.5);
  const auto h = lab_dispersive(p, 2);
  CHECK(h.time_dependent());
  CHECK(h.max_frequency() == doctest::Approx(12.5));
  const auto& sp = h.space();
  CHECK(sp.groups() == std::vector<int>{2, 3});
  const int n = 5, d = 3;
  const Mat a = mode_lower(n, d);
  Mat S = Mat::Zero(a.rows(), a.cols()), J = S;
  for (int j = 0; j < 2; ++j) S += embed(raise2(), j, n, d);
  for (int j = 2; j < 5; ++j) J += embed(raise2(), j, n, d);
  const Mat K = Mat(ops::excitation_number(sp));
  for (double t : {0.0, 0.37, 2.9, -1.4}) {
    const Mat H = h.dense(t);
    CHECK(hermitian(H));
    CHECK(commutator_norm(H, K) < 1e-12);
    const Mat t1 = 0.4 * std::exp(kI * 10.0 * t) * a * S;
    const Mat t2 = 0.9 * std::exp(kI * 12.5 * t) * a * J;
    CHECK((H - (t1 + t1.adjoint() + t2 + t2.adjoint())).norm() < 1e-12);
  }
}

TEST_CASE("dispersive parameter bookkeeping") {
  const DispersiveParams p(3, 3, 2.0, 1.0, 40.0, 41.0);
  CHECK(p.lambda1() == doctest::Approx(0.1));
  CHECK(p.lambda2() == doctest::Approx(1.0 / 41.0));
  CHECK(p.mean_detuning() == doctest::Approx(2.0 * 40 * 41 / 81.0));
  CHECK(p.omega_eff() == doctest::Approx(2.0 / (2.0 * 40 * 41 / 81.0)));
  CHECK(p.detuning() == doctest::Approx(1.0 + 1.0 / 41.0 - 0.1));
  CHECK(p.dispersive_ratio() == doctest::Approx(20.0));
  CHECK(p.is_dispersive());
  CHECK_FALSE(p.is_dispersive(25.0));
  CHECK_THROWS(DispersiveParams(0, 3, 1, 1, 1, 1));
  CHECK_THROWS(DispersiveParams(1, 1, 1, 1, 0, 1));
  CHECK_THROWS(DispersiveParams(1, 1, 1, 1, 1, -1));
}

TEST_CASE("effective Dicke model matches explicit collective operators") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int N = 1; N <= 5; ++N) {
    for (int M = 1; M <= 5; ++M) {
      if (N + M > 9) continue;
      const DispersiveParams p(N, M, u(rng), u(rng), 30.0 * u(rng), 30.0 * u(rng));
      const auto h = effective_dicke(p);
      CHECK(h.space() == SpaceSpec::symmetric({N, M}));
      const int n = N + M;
      Mat S = Mat::Zero(1 << n, 1 << n), J = S, nS = S, nJ = S;
      Mat proj = Mat::Zero(2, 2);
      proj(1, 1) = 1.0;
      for (int j = 0; j < N; ++j) {
        S += embed(raise2(), j, n, 1);
        nS += embed(proj, j, n, 1);
      }
      for (int j = N; j < n; ++j) {
        J += embed(raise2(), j, n, 1);
        nJ += embed(proj, j, n, 1);
      }
      // Stark part: lambda (C+ C- - n) has eigenvalue lambda k (N - k) on Dicke states.
      const Mat diag = p.lambda1() * (S * S.adjoint() - nS) + p.lambda2() * (J * J.adjoint() - nJ);
      const Mat hop = S * J.adjoint();  // S^dagger J: one excitation from group 2 to group 1

      Mat V(1 << n, (N + 1) * (M + 1));
      for (int k = 0; k <= N; ++k)
        for (int q = 0; q <= M; ++q)
          V.col(static_cast<Eigen::Index>(h.space().symmetric_index({k, q}))) =
              tensor(dicke_state({N, k}), dicke_state({M, q})).amplitudes();

      for (double t : {0.0, 1.3}) {
        const cplx ph = std::exp(-kI * p.detuning() * t);
        const Mat ref = V.adjoint() * (diag + p.omega_eff() * (ph * hop + std::conj(ph) * hop.adjoint())) * V;
        const Mat H = h.dense(t);
        CHECK(hermitian(H));
        CHECK((H - ref).norm() < 1e-12 * std::max(1.0, ref.norm()));
      }
    }
  }
}

TEST_CASE("dissipators") {
  const auto sp = SpaceSpec::qubits({3}, 2);
  CHECK(lindblad_dissipators(sp, {}).empty());
  CHECK(lindblad_dissipators(sp, {1.0, 0.0, 0.0}).size() == 1);
  CHECK(lindblad_dissipators(sp, {1.0, 0.5, 0.0}).size() == 4);
  const auto all = lindblad_dissipators(sp, {1.0, 0.5, 0.2});
  CHECK(all.size() == 7);
  CHECK(all.back().rate == doctest::Approx(0.1));
  CHECK_THROWS(lindblad_dissipators(sp, {-1.0, 0.0, 0.0}));
  CHECK_THROWS(lindblad_dissipators(SpaceSpec::qubits({2}), {1.0, 0.0, 0.0}));
  CHECK_THROWS(lindblad_dissipators(SpaceSpec::symmetric({2}), {0.0, 1.0, 0.0}));
}
