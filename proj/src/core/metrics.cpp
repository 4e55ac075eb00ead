#include "qbus/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qbus {

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  return std::norm(b.inner(a));
}

double fidelity(const DensityMatrix& rho, const StateVector& b) {
  if (rho.dim() != b.dim()) throw std::invalid_argument("fidelity: dimension mismatch");
  const Vec& v = b.amplitudes();
  return std::clamp(v.dot(rho.matrix() * v).real(), 0.0, 1.0);
}

double phase_corrected_fidelity(const StateVector& state, const StateVector& target) {
  if (state.dim() != target.dim()) throw std::invalid_argument("phase_corrected_fidelity: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) s += std::abs(target[i]) * std::abs(state[i]);
  return s * s;
}

namespace {

// sigma_y (x) sigma_y in the |gg>,|ge>,|eg>,|ee> ordering; real and symmetric.
Eigen::Matrix4d spin_flip() {
  Eigen::Matrix4d y = Eigen::Matrix4d::Zero();
  y(0, 3) = -1;
  y(1, 2) = 1;
  y(2, 1) = 1;
  y(3, 0) = -1;
  return y;
}

}  // namespace

double concurrence(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw std::invalid_argument("concurrence needs a two-qubit (4-dimensional) state");
  // Singular values of tau_ij = v_i^T Y v_j, with v_i = sqrt(p_i) e_i the
  // subnormalized eigenvectors, equal Wootters' lambda_i without square roots
  // of near-zero eigenvalues.
  Mat h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Mat v = es.eigenvectors();
  for (int i = 0; i < 4; ++i) v.col(i) *= std::sqrt(std::max(es.eigenvalues()(i), 0.0));
  const Mat tau = v.transpose() * spin_flip().cast<cplx>() * v;
  Eigen::JacobiSVD<Mat> svd(tau);
  const auto& s = svd.singularValues();  // sorted descending
  return std::max(0.0, s(0) - s(1) - s(2) - s(3));
}

double concurrence(const StateVector& psi) {
  if (psi.dim() != 4) throw std::invalid_argument("concurrence needs a two-qubit (4-dimensional) state");
  const Vec& a = psi.amplitudes();
  const cplx amp = (a.transpose() * spin_flip().cast<cplx>() * a)(0, 0);
  return std::abs(amp) / a.squaredNorm();
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
  const auto& sp = rho.space();
  const auto dims = sp.factor_dims();
  const int nf = static_cast<int>(dims.size());
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) throw std::invalid_argument("duplicate subsystem index");
  for (int k : keep) {
    if (k < 0 || k >= nf) throw std::out_of_range("subsystem index " + std::to_string(k) + " out of range");
  }
  std::vector<bool> kept(static_cast<std::size_t>(nf), false);
  for (int k : keep) kept[static_cast<std::size_t>(k)] = true;

  const std::size_t full = sp.dim();
  std::size_t kdim = 1, tdim = 1;
  for (int f = 0; f < nf; ++f) (kept[static_cast<std::size_t>(f)] ? kdim : tdim) *= dims[static_cast<std::size_t>(f)];

  // Split every full index into (kept, traced) mixed-radix parts.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> by_traced(tdim);
  for (std::size_t i = 0; i < full; ++i) {
    std::size_t rest = i, ki = 0, ti = 0, kscale = 1, tscale = 1;
    for (int f = nf - 1; f >= 0; --f) {
      const std::size_t d = dims[static_cast<std::size_t>(f)];
      const std::size_t digit = rest % d;
      rest /= d;
      if (kept[static_cast<std::size_t>(f)]) {
        ki += digit * kscale;
        kscale *= d;
      } else {
        ti += digit * tscale;
        tscale *= d;
      }
    }
    by_traced[ti].emplace_back(i, ki);
  }
  Mat out = Mat::Zero(static_cast<Eigen::Index>(kdim), static_cast<Eigen::Index>(kdim));
  const Mat& m = rho.matrix();
  for (const auto& block : by_traced) {
    for (const auto& [i, ki] : block) {
      for (const auto& [j, kj] : block) {
        out(static_cast<Eigen::Index>(ki), static_cast<Eigen::Index>(kj)) +=
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }

  const bool boson_kept = sp.has_boson() && kept[static_cast<std::size_t>(nf - 1)];
  std::vector<int> groups;
  if (sp.representation() == Representation::Computational) {
    int q = 0;
    for (int g : sp.groups()) {
      int count = 0;
      for (int j = 0; j < g; ++j, ++q) count += kept[static_cast<std::size_t>(q)] ? 1 : 0;
      if (count > 0) groups.push_back(count);
    }
    return DensityMatrix(SpaceSpec::qubits(groups, boson_kept ? sp.cutoff() : std::nullopt), std::move(out));
  }
  for (std::size_t g = 0; g < sp.groups().size(); ++g) {
    if (kept[g]) groups.push_back(sp.groups()[g]);
  }
  return DensityMatrix(SpaceSpec::symmetric(groups), std::move(out));
}

}  // namespace qbus
