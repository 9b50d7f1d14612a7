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

// Operator and state algebra for finite-dimensional open quantum systems.
//
// Basis convention used everywhere in this library: a single qubit has
// |e> = (1, 0)^T and |g> = (0, 1)^T, so sigma_z |e> = +|e> and
// sigma_minus = |g><e|. Multi-qubit operators are Kronecker products with
// site 0 as the leftmost (most significant) factor.

#ifndef NOKNOW_CORE_HPP
#define NOKNOW_CORE_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "noknow/errors.hpp"

namespace noknow {

using cplx = std::complex<double>;
using Operator = Eigen::MatrixXcd;

inline constexpr cplx kI{0.0, 1.0};

/// Default tolerances. Every check that uses one of these accepts an override.
struct Tolerances {
    double algebraic = 1e-12;
    double hermiticity = 1e-10;
};

bool is_hermitian(const Operator &op, double tol = Tolerances{}.hermiticity);
bool is_unitary(const Operator &op, double tol = Tolerances{}.hermiticity);

/// ||A - A^dagger||_F / ||A||_F, zero for the zero matrix.
double hermiticity_defect(const Operator &op);

/// (A + A^dagger)/2, exactly Hermitian in floating point.
Operator hermitian_part(const Operator &op);

/// A density operator stored unnormalized, with the natural log of every trace factor
/// that has been divided out kept in `log_norm`. The stored matrix is always exactly
/// Hermitian and has strictly positive trace.
class QuantumState {
  public:
    /// Validates that `matrix` is square, Hermitian within `hermiticity_tol` (relative)
    /// and has positive trace, then symmetrizes it.
    explicit QuantumState(Operator matrix, double log_norm = 0.0,
                          double hermiticity_tol = Tolerances{}.hermiticity);

    /// The pure state |psi><psi|, normalized.
    static QuantumState pure(const Eigen::VectorXcd &psi);

    /// (I + x sigma_x + y sigma_y + z sigma_z)/2.
    static QuantumState from_bloch(double x, double y, double z);

    /// I/dim.
    static QuantumState maximally_mixed(std::size_t dim);

    /// Builds the state after an update step: symmetrizes, checks trace and finiteness,
    /// and folds the trace into `log_norm` whenever it leaves [1e-3, 1e3].
    static QuantumState after_update(Operator matrix, double log_norm);

    std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }
    const Operator &matrix() const { return matrix_; }
    double log_norm() const { return log_norm_; }
    double trace() const { return matrix_.trace().real(); }

    /// matrix / trace.
    Operator normalized() const { return matrix_ / trace(); }

    /// Tr[rho_bar^2] of the normalized view.
    double purity() const;

    /// Same physical state with trace exactly 1 and log_norm adjusted.
    QuantumState renormalized() const;

  private:
    QuantumState(Operator matrix, double log_norm, bool /*trusted*/);

    Operator matrix_;
    double log_norm_;
};

// Superoperator actions. The Operator overloads act on any square matrix (used for
// differences of states and for building superoperators); the QuantumState overloads
// act on the stored unnormalized matrix.

/// D[Z]rho = Z rho Z^dagger - (Z^dagger Z rho + rho Z^dagger Z)/2
Operator dissipator(const Operator &z, const Operator &rho);
Operator dissipator(const Operator &z, const QuantumState &rho);

/// A[Z]rho = Z rho + rho Z^dagger
Operator innovation_action(const Operator &z, const Operator &rho);
Operator innovation_action(const Operator &z, const QuantumState &rho);

/// A^2[Z]rho = Z (A[Z]rho) + (A[Z]rho) Z^dagger
Operator innovation_squared(const Operator &z, const Operator &rho);
Operator innovation_squared(const Operator &z, const QuantumState &rho);

/// -i[H, rho] + sum_k D[L_k] rho. Throws ModelError when H is not Hermitian.
Operator lindblad_rhs(const Operator &h, std::span<const Operator> ls, const Operator &rho,
                      double hermiticity_tol = Tolerances{}.hermiticity);
Operator lindblad_rhs(const Operator &h, std::span<const Operator> ls, const QuantumState &rho,
                      double hermiticity_tol = Tolerances{}.hermiticity);

/// Tr[X rho] / Tr[rho].
cplx expectation(const Operator &x, const QuantumState &rho);

/// sqrt(Tr[(a - b)^2]) between the normalized views.
double frobenius_distance(const QuantumState &a, const QuantumState &b);

/// sqrt(Tr[rho_ss rho_target]) between normalized views. This is the trace-overlap
/// figure of merit, not the Uhlmann fidelity; the two agree when the target is pure.
/// Tiny negative overlaps (above -1e-10) are clipped to zero.
double overlap_fidelity(const QuantumState &rho_ss, const QuantumState &rho_target);

enum class Pauli { X, Y, Z, Plus, Minus };

/// Single-qubit matrix for `which`.
Operator pauli_matrix(Pauli which);

/// I x ... x sigma_which x ... x I with sigma at `site`; dim 2^n_sites.
Operator pauli(Pauli which, std::size_t site, std::size_t n_sites);

/// Linear-cluster stabilizer K_i = Z_{i-1} X_i Z_{i+1}; missing neighbours at the
/// ends are dropped.
Operator cluster_stabilizer(std::size_t site, std::size_t n_sites);

/// Pure linear cluster state prod_i (I + K_i)/2.
QuantumState cluster_state(std::size_t n_sites);

/// Kronecker product a (x) b.
Operator kron(const Operator &a, const Operator &b);

/// exp(-i H t), computed from the Hermitian eigendecomposition of H.
Operator unitary_propagator(const Operator &h, double t);

}  // namespace noknow

#endif  // NOKNOW_CORE_HPP
