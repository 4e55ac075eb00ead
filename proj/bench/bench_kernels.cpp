#include <benchmark/benchmark.h>

#include "qbus/kernels.hpp"
#include "qbus/models.hpp"

namespace {

qbus::HamiltonianSpec lab_model(int n) {
  return qbus::lab_dispersive(qbus::DispersiveParams(n / 2, n - n / 2, 0.5, 1.0, 20.0, 20.5), 2);
}

qbus::Vec random_state(Eigen::Index dim) {
  qbus::Vec v = qbus::Vec::Random(dim);
  return v / v.norm();
}

qbus::Mat random_density(Eigen::Index dim) {
  qbus::Mat a = qbus::Mat::Random(dim, dim);
  qbus::Mat rho = a * a.adjoint();
  return rho / rho.trace();
}

void BM_SchrodingerParallel(benchmark::State& state) {
  const auto h = lab_model(static_cast<int>(state.range(0)));
  const auto y = random_state(static_cast<Eigen::Index>(h.space().dim()));
  qbus::Vec dy(y.size());
  for (auto _ : state) {
    qbus::kernels::schrodinger_rhs(h.terms(), 0.3, y, dy);
    benchmark::DoNotOptimize(dy.data());
  }
}

void BM_SchrodingerSerial(benchmark::State& state) {
  const auto h = lab_model(static_cast<int>(state.range(0)));
  const auto y = random_state(static_cast<Eigen::Index>(h.space().dim()));
  qbus::Vec dy(y.size());
  for (auto _ : state) {
    qbus::kernels::serial::schrodinger_rhs(h.terms(), 0.3, y, dy);
    benchmark::DoNotOptimize(dy.data());
  }
}

void BM_LindbladParallel(benchmark::State& state) {
  const auto h = lab_model(static_cast<int>(state.range(0)));
  const auto gen = qbus::kernels::make_lindblad_generator(
      h, qbus::lindblad_dissipators(h.space(), qbus::LindbladSpec{0.1, 0.02, 0.0}));
  const auto rho = random_density(static_cast<Eigen::Index>(h.space().dim()));
  qbus::Mat drho(rho.rows(), rho.cols());
  for (auto _ : state) {
    qbus::kernels::lindblad_rhs(gen, 0.3, rho, drho);
    benchmark::DoNotOptimize(drho.data());
  }
}

void BM_LindbladSerial(benchmark::State& state) {
  const auto h = lab_model(static_cast<int>(state.range(0)));
  const auto gen = qbus::kernels::make_lindblad_generator(
      h, qbus::lindblad_dissipators(h.space(), qbus::LindbladSpec{0.1, 0.02, 0.0}));
  const auto rho = random_density(static_cast<Eigen::Index>(h.space().dim()));
  qbus::Mat drho(rho.rows(), rho.cols());
  for (auto _ : state) {
    qbus::kernels::serial::lindblad_rhs(gen, 0.3, rho, drho);
    benchmark::DoNotOptimize(drho.data());
  }
}

}  // namespace

BENCHMARK(BM_SchrodingerParallel)->DenseRange(4, 10, 2);
BENCHMARK(BM_SchrodingerSerial)->DenseRange(4, 10, 2);
BENCHMARK(BM_LindbladParallel)->DenseRange(2, 6, 2);
BENCHMARK(BM_LindbladSerial)->DenseRange(2, 6, 2);

BENCHMARK_MAIN();
