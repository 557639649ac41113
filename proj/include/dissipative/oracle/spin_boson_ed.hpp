#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "dissipative/errors.hpp"
#include "dissipative/oracle/discrete_bath.hpp"
#include "dissipative/spin_state.hpp"

namespace dissipative::oracle {

struct EdOptions {
  std::size_t fock_cut = 8;
  bool validate_truncation = true;
  double truncation_tolerance = 1e-3;
  /// Hilbert spaces up to this size use a dense eigensolver, larger ones Lanczos.
  Eigen::Index dense_limit = 2048;
};

struct EdResult {
  ReducedSpinState state;  ///< sx is the magnitude |<sigma_x>|
  double sx_signed;
  std::array<double, 2> rho_eigenvalues;
  double trace;
  double ground_energy;
  double truncation_shift;  ///< |sx(fock_cut) - sx(fock_cut - 1)|, NaN if not validated
  Eigen::Index dimension;
};

inline constexpr std::size_t kEdMaxModes = 4;
inline constexpr std::size_t kEdMaxFock = 8;
inline constexpr Eigen::Index kEdMaxDimension = Eigen::Index{1} << 14;

namespace detail {

/// H = (delta0/2) sigma_x + sum w_k b_k^+ b_k + sigma_z sum (lambda_k/2)(b_k + b_k^+)
/// in the basis |spin> (x) |n_1 .. n_M>, index = spin * B + sum n_k F^k.
inline Eigen::SparseMatrix<double> spin_boson_hamiltonian(double delta0, const DiscreteBath& bath,
                                                          std::size_t fock_cut) {
  const std::size_t modes = bath.n_modes();
  std::size_t bath_dim = 1;
  for (std::size_t k = 0; k < modes; ++k) bath_dim *= fock_cut;
  const auto dim = static_cast<Eigen::Index>(2 * bath_dim);

  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(static_cast<std::size_t>(dim) * (2 + 2 * modes));
  std::vector<std::size_t> occ(modes);
  for (std::size_t b = 0; b < bath_dim; ++b) {
    std::size_t rest = b;
    double boson_energy = 0.0;
    for (std::size_t k = 0; k < modes; ++k) {
      occ[k] = rest % fock_cut;
      rest /= fock_cut;
      boson_energy += bath.modes[k].omega * static_cast<double>(occ[k]);
    }
    for (int spin = 0; spin < 2; ++spin) {
      const auto row = static_cast<Eigen::Index>(spin * bath_dim + b);
      const double sz = spin == 0 ? 1.0 : -1.0;
      entries.emplace_back(row, row, boson_energy);
      entries.emplace_back(row, static_cast<Eigen::Index>((1 - spin) * bath_dim + b), 0.5 * delta0);
      std::size_t stride = 1;
      for (std::size_t k = 0; k < modes; ++k) {
        if (occ[k] + 1 < fock_cut) {
          const auto up = row + static_cast<Eigen::Index>(stride);
          const double amp = 0.5 * sz * bath.modes[k].lambda * std::sqrt(static_cast<double>(occ[k] + 1));
          entries.emplace_back(row, up, amp);
          entries.emplace_back(up, row, amp);
        }
        stride *= fock_cut;
      }
    }
  }
  Eigen::SparseMatrix<double> h(dim, dim);
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

struct GroundState {
  double energy;
  Eigen::VectorXd vector;
};

/// Lowest eigenpair by Lanczos with full reorthogonalisation. The start
/// vector comes from a fixed-seed generator, so results are reproducible.
inline GroundState lanczos_ground_state(const Eigen::SparseMatrix<double>& h, double tol = 1e-11) {
  const Eigen::Index dim = h.rows();
  const Eigen::Index max_steps = std::min<Eigen::Index>(dim, 600);
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);
  Eigen::VectorXd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = uniform(rng);
  v.normalize();

  Eigen::MatrixXd basis(dim, max_steps);
  std::vector<double> alpha;
  std::vector<double> beta;
  basis.col(0) = v;
  for (Eigen::Index j = 0; j < max_steps; ++j) {
    Eigen::VectorXd w = h * basis.col(j);
    alpha.push_back(basis.col(j).dot(w));
    // two passes of classical Gram-Schmidt against the whole Krylov basis
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd coeff = basis.leftCols(j + 1).transpose() * w;
      w -= basis.leftCols(j + 1) * coeff;
    }
    const double b = w.norm();
    const bool last = b < 1e-14 || j + 1 == max_steps;
    if ((j + 1) % 10 != 0 && !last) {
      beta.push_back(b);
      basis.col(j + 1) = w / b;
      continue;
    }

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri(t);
    const double residual = b * std::abs(tri.eigenvectors()(m - 1, 0));
    if (residual < tol || last) {
      if (residual >= tol && b >= 1e-14) throw NumericalError("Lanczos did not converge");
      Eigen::VectorXd ground = basis.leftCols(m) * tri.eigenvectors().col(0);
      ground.normalize();
      return {tri.eigenvalues()(0), ground};
    }
    beta.push_back(b);
    basis.col(j + 1) = w / b;
  }
  throw NumericalError("Lanczos did not converge");
}

inline GroundState ground_state(const Eigen::SparseMatrix<double>& h, Eigen::Index dense_limit) {
  if (h.rows() <= dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver{Eigen::MatrixXd(h)};
    if (solver.info() != Eigen::Success) throw NumericalError("ED: dense eigensolver failed");
    return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
  }
  return lanczos_ground_state(h);
}

struct SpinReduction {
  double rho00, rho11, rho01;
};

inline SpinReduction reduce_to_spin(const Eigen::VectorXd& psi) {
  const Eigen::Index half = psi.size() / 2;
  const auto up = psi.head(half);
  const auto down = psi.tail(half);
  return {up.squaredNorm(), down.squaredNorm(), up.dot(down)};
}

inline EdResult solve_once(double delta0, const DiscreteBath& bath, const EdOptions& options) {
  const auto h = spin_boson_hamiltonian(delta0, bath, options.fock_cut);
  const auto gs = ground_state(h, options.dense_limit);
  const auto red = reduce_to_spin(gs.vector);

  Eigen::Matrix2d rho;
  rho << red.rho00, red.rho01, red.rho01, red.rho11;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> spin_solver(rho);
  const Eigen::Vector2d lam = spin_solver.eigenvalues();
  double entropy = 0.0;
  for (int i = 0; i < 2; ++i) entropy -= lam(i) > 0.0 ? lam(i) * std::log(lam(i)) : 0.0;

  EdResult result{};
  result.sx_signed = 2.0 * red.rho01;
  result.state = {std::abs(result.sx_signed), red.rho00 - red.rho11, entropy};
  result.rho_eigenvalues = {lam(0), lam(1)};
  result.trace = red.rho00 + red.rho11;
  result.ground_energy = gs.energy;
  result.truncation_shift = std::nan("");
  result.dimension = h.rows();
  return result;
}

}  // namespace detail

/// Exact diagonalisation of the unbiased spin-boson Hamiltonian with a few
/// bath modes in a truncated Fock basis. Qualitative oracle for trends in
/// <sigma_x> and the entropy; not a quantitative substitute for the scaling
/// theory. When validate_truncation is set the calculation is repeated at
/// fock_cut - 1 and NumericalError is thrown if <sigma_x> moves by more than
/// the tolerance.
inline EdResult spin_boson_ed(double delta0, const DiscreteBath& bath, const EdOptions& options = {}) {
  if (!(delta0 >= 0.0)) throw DomainError("spin_boson_ed: delta0 must be >= 0");
  if (bath.n_modes() == 0 || bath.n_modes() > kEdMaxModes) {
    throw ConfigError("spin_boson_ed: between 1 and 4 bath modes are supported");
  }
  if (options.fock_cut < 2 || options.fock_cut > kEdMaxFock) {
    throw ConfigError("spin_boson_ed: fock_cut must be in [2, 8]");
  }
  Eigen::Index dim = 2;
  for (std::size_t k = 0; k < bath.n_modes(); ++k) dim *= static_cast<Eigen::Index>(options.fock_cut);
  if (dim > kEdMaxDimension) {
    throw ConfigError("spin_boson_ed: Hilbert space dimension " + std::to_string(dim) + " exceeds 2^14");
  }

  EdResult result = detail::solve_once(delta0, bath, options);
  if (options.validate_truncation && options.fock_cut > 2) {
    EdOptions coarse = options;
    coarse.fock_cut -= 1;
    const EdResult reference = detail::solve_once(delta0, bath, coarse);
    result.truncation_shift = std::abs(result.state.sx - reference.state.sx);
    if (result.truncation_shift >= options.truncation_tolerance) {
      throw NumericalError("spin_boson_ed: Fock truncation not converged (|d sx| = " +
                           std::to_string(result.truncation_shift) + ")");
    }
  }
  return result;
}

}  // namespace dissipative::oracle
