// Copyright 2026 The noknow Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Dense Liouvillian assembly and stationary states. Column-stacking convention
// throughout, see superoperator.hpp.

#ifndef NOKNOW_STEADY_STATE_HPP
#define NOKNOW_STEADY_STATE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "noknow/core.hpp"
#include "noknow/model.hpp"

namespace noknow {

/// Largest superoperator dimension d^2 accepted by `vectorize`.
inline constexpr Eigen::Index kMaxLiouvillianDim = 4096;
/// Up to this d^2 the steady state comes from a full eigendecomposition.
inline constexpr Eigen::Index kDenseEigenLimit = 1024;

struct LiouvillianMatrix {
    Eigen::MatrixXcd matrix;  // d^2 x d^2, acts on vec(rho)
    Eigen::Index system_dim = 0;

    Eigen::Index dim() const { return matrix.rows(); }
};

/// L such that vec(lindblad_rhs(H, Ls, rho)) == L vec(rho).
/// Throws DimensionError, ModelError (non-Hermitian H) or ResourceError (d^2 too large).
LiouvillianMatrix vectorize(const Operator &h, std::span<const Operator> ls);

/// Unconditional generator of a monitored model, feedback included. Hamiltonian
/// feedback G y on a homodyne channel with quadrature Z adds
/// -i sqrt(eta) [G, Z rho + rho Z^dagger] + D[G] rho; a jump unitary U on a
/// photodetection channel replaces L rho L^dagger by U L rho L^dagger U^dagger.
LiouvillianMatrix model_liouvillian(const MonitoredModel &model);

struct SteadyStateFlags {
    bool gap_estimated = false;       // spectrum only partially resolved (iterative path)
    bool integrated = false;          // result came from long-time integration
    bool degraded_precision = false;  // residual above tolerance even after the fallback
};

struct SteadyStateResult {
    QuantumState rho_ss;
    double residual = 0.0;      // ||L vec(rho_ss)|| for unit-trace rho_ss
    double spectral_gap = 0.0;  // -max Re(lambda) over eigenvalues counted as nonzero
    bool degenerate = false;
    std::size_t null_dimension = 0;
    double min_eigenvalue = 0.0;  // smallest eigenvalue of rho_ss
    SteadyStateFlags flags;
};

/// Stationary state of `lmat`. Eigenvalues with |Re(lambda)| < tol ||L||_F count as
/// zero; more than one of them marks the result degenerate, and the state returned is
/// the projection of I/d onto the null space. Throws SolverError when the eigensolver
/// or factorization fails.
SteadyStateResult steady_state(const LiouvillianMatrix &lmat, double tol = 1e-9);

/// Classical RK4 on d rho/dt = lindblad_rhs(H, Ls, rho) with a fixed step.
QuantumState evolve_master_equation(const Operator &h, std::span<const Operator> ls, const QuantumState &rho0,
                                    double t, double dt);

/// Same on the vectorized generator.
QuantumState evolve_liouvillian(const LiouvillianMatrix &lmat, const QuantumState &rho0, double t, double dt);

struct FidelityRow {
    std::size_t n_qubits = 0;
    std::optional<double> eta;  // empty: no feedback
    double gamma_over_alpha = 0.0;
    double fidelity = 0.0;
    double spectral_gap = 0.0;
    double residual = 0.0;
    bool degenerate = false;
};

/// Cluster-state fidelity of the chain steady state. Rows are grouped by N in the
/// order of `ns`; within a group the no-feedback row (if requested) comes first,
/// then one row per eta. The order does not depend on `threads`.
std::vector<FidelityRow> fidelity_scan(std::span<const std::size_t> ns, double gamma_over_alpha,
                                       std::span<const double> etas, double alpha = 1.0,
                                       bool include_no_feedback = true, unsigned threads = 1);

}  // namespace noknow

#endif  // NOKNOW_STEADY_STATE_HPP
