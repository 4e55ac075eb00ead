#include "qbus/kernels.hpp"

#include <cmath>

namespace qbus::kernels {

namespace {

cplx phase_of(const GeneratorTerm& term, double t) {
  return term.frequency == 0.0 ? cplx{1.0} : std::exp(kI * term.frequency * t);
}

}  // namespace

void schrodinger_rhs(std::span<const GeneratorTerm> terms, double t, const Vec& y, Vec& dy) {
  const Eigen::Index n = y.size();
  dy.setZero(n);
  for (const auto& term : terms) {
    const cplx scale = -kI * phase_of(term, t);
    const auto* outer = term.op.outerIndexPtr();
    const auto* inner = term.op.innerIndexPtr();
    const cplx* val = term.op.valuePtr();
    const cplx* x = y.data();
    cplx* out = dy.data();
#pragma omp parallel for schedule(static) if (n >= kParallelThreshold)
    for (Eigen::Index r = 0; r < n; ++r) {
      cplx s{};
      for (auto p = outer[r]; p < outer[r + 1]; ++p) s += val[p] * x[inner[p]];
      out[r] += scale * s;
    }
  }
}

void sparse_dense_accumulate(const SparseOp& a, cplx alpha, const Mat& x, Mat& y) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = x.cols();
  const auto* outer = a.outerIndexPtr();
  const auto* inner = a.innerIndexPtr();
  const cplx* val = a.valuePtr();
#pragma omp parallel for schedule(static) if (rows >= kParallelThreshold)
  for (Eigen::Index c = 0; c < cols; ++c) {
    const cplx* xc = x.data() + c * x.rows();
    cplx* yc = y.data() + c * y.rows();
    for (Eigen::Index r = 0; r < rows; ++r) {
      cplx s{};
      for (auto p = outer[r]; p < outer[r + 1]; ++p) s += val[p] * xc[inner[p]];
      yc[r] += alpha * s;
    }
  }
}

LindbladGenerator make_lindblad_generator(const HamiltonianSpec& h, const std::vector<JumpOperator>& jumps) {
  LindbladGenerator gen;
  gen.hamiltonian.assign(h.terms().begin(), h.terms().end());
  const auto n = static_cast<Eigen::Index>(h.space().dim());
  gen.half_decay = SparseOp(n, n);
  for (const auto& j : jumps) {
    SparseOp l = std::sqrt(j.rate) * j.op;
    l.makeCompressed();
    gen.half_decay += 0.5 * SparseOp(l.adjoint() * l);
    gen.jumps.push_back(std::move(l));
  }
  gen.half_decay.makeCompressed();
  return gen;
}

void lindblad_rhs(const LindbladGenerator& gen, double t, const Mat& rho, Mat& drho) {
  const Eigen::Index n = rho.rows();
  // A = (H - i D) rho, then drho = -iA + (-iA)^dagger + sum L rho L^dagger.
  Mat a = Mat::Zero(n, n);
  for (const auto& term : gen.hamiltonian) sparse_dense_accumulate(term.op, phase_of(term, t), rho, a);
  if (gen.half_decay.nonZeros() > 0) sparse_dense_accumulate(gen.half_decay, -kI, rho, a);
  a *= -kI;
  drho = a + a.adjoint();
  Mat b(n, n), bt(n, n);
  for (const auto& l : gen.jumps) {
    b.setZero();
    sparse_dense_accumulate(l, 1.0, rho, b);  // L rho
    bt = b.adjoint();                         // rho L^dagger
    sparse_dense_accumulate(l, 1.0, bt, drho);
  }
}

namespace serial {

void schrodinger_rhs(std::span<const GeneratorTerm> terms, double t, const Vec& y, Vec& dy) {
  const auto n = y.size();
  SparseOp h(n, n);
  for (const auto& term : terms) h += phase_of(term, t) * term.op;
  dy = -kI * (h * y);
}

void lindblad_rhs(const LindbladGenerator& gen, double t, const Mat& rho, Mat& drho) {
  const auto n = rho.rows();
  Mat h = Mat::Zero(n, n);
  for (const auto& term : gen.hamiltonian) h += phase_of(term, t) * Mat(term.op);
  drho = -kI * (h * rho - rho * h);
  for (const auto& sparse_l : gen.jumps) {
    const Mat l(sparse_l);
    const Mat ldl = l.adjoint() * l;
    drho += l * rho * l.adjoint() - 0.5 * (ldl * rho + rho * ldl);
  }
}

}  // namespace serial

}  // namespace qbus::kernels
