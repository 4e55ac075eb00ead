#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qbus/kernels.hpp"
#include "qbus/models.hpp"

using namespace qbus;

namespace {

Vec random_vec(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(nd(rng), nd(rng));
  return v;
}

Mat random_density(Eigen::Index n, std::mt19937_64& rng) {
  Mat x(n, n);
  for (Eigen::Index j = 0; j < n; ++j) x.col(j) = random_vec(n, rng);
  Mat rho = x * x.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST_CASE("parallel Schroedinger kernel matches the serial reference") {
  std::mt19937_64 rng(1);
  for (auto [N, M] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 4}}) {
    const auto h = lab_dispersive(DispersiveParams(N, M, 0.3, 0.5, 9.0, 11.0), 2);
    const Vec y = random_vec(static_cast<Eigen::Index>(h.space().dim()), rng);
    for (double t : {0.0, 0.7}) {
      Vec a, b;
      kernels::schrodinger_rhs(h.terms(), t, y, a);
      kernels::serial::schrodinger_rhs(h.terms(), t, y, b);
      CHECK((a - b).norm() < 1e-12 * b.norm());
      // and against the dense Hamiltonian
      CHECK((b - (-kI) * (h.dense(t) * y)).norm() < 1e-12 * b.norm());
    }
  }
}

TEST_CASE("parallel Lindblad kernel matches the serial reference") {
  std::mt19937_64 rng(2);
  for (auto [N, M] : {std::pair{1, 1}, std::pair{2, 2}, std::pair{2, 3}}) {
    const auto h = lab_dispersive(DispersiveParams(N, M, 0.3, 0.5, 9.0, 11.0), 2);
    const auto gen = kernels::make_lindblad_generator(h, lindblad_dissipators(h.space(), {0.2, 0.05, 0.03}));
    const Mat rho = random_density(static_cast<Eigen::Index>(h.space().dim()), rng);
    Mat a, b;
    kernels::lindblad_rhs(gen, 0.4, rho, a);
    kernels::serial::lindblad_rhs(gen, 0.4, rho, b);
    CHECK((a - b).norm() < 1e-12 * b.norm());
    // Trace preservation and Hermiticity of the generator output.
    CHECK(std::abs(b.trace()) < 1e-12 * b.norm());
    CHECK((b - b.adjoint()).norm() < 1e-12 * b.norm());
  }
}

TEST_CASE("Lindblad kernel on a single decaying qubit") {
  // H = 0, L = sqrt(g) sigma-: d rho_ee = -g rho_ee, d rho_eg = -g/2 rho_eg
  const auto sp = SpaceSpec::qubits({1});
  const SparseOp zero(2, 2);
  const HamiltonianSpec h(ResonantTC{CouplingProfile({1.0}), 1}, sp, {GeneratorTerm{zero, 0.0}});
  const auto gen = kernels::make_lindblad_generator(h, lindblad_dissipators(sp, {0.0, 0.8, 0.0}));
  Mat rho(2, 2);
  rho << 0.25, 0.2, 0.2, 0.75;
  Mat d;
  kernels::lindblad_rhs(gen, 0.0, rho, d);
  CHECK(d(1, 1).real() == doctest::Approx(-0.8 * 0.75));
  CHECK(d(0, 0).real() == doctest::Approx(0.8 * 0.75));
  CHECK(d(0, 1).real() == doctest::Approx(-0.4 * 0.2));
}

TEST_CASE("sparse-dense accumulate") {
  std::mt19937_64 rng(3);
  const auto h = lab_dispersive(DispersiveParams(2, 3, 0.3, 0.5, 9.0, 11.0), 2);
  const SparseOp& op = h.terms()[0].op;
  const auto n = op.rows();
  Mat x(n, 50), y(n, 50);
  for (int j = 0; j < 50; ++j) {
    x.col(j) = random_vec(n, rng);
    y.col(j) = random_vec(n, rng);
  }
  Mat ref = y + cplx(0.3, -1.2) * (Mat(op) * x);
  kernels::sparse_dense_accumulate(op, cplx(0.3, -1.2), x, y);
  CHECK((y - ref).norm() < 1e-12 * ref.norm());
}
