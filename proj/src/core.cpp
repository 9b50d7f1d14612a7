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

#include "noknow/core.hpp"

#include <cmath>
#include <sstream>

namespace noknow {

namespace {

constexpr double kMinTrace = 1e-300;
constexpr double kRescaleLow = 1e-3;
constexpr double kRescaleHigh = 1e3;

void require_square(const Operator &m, const char *what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        std::ostringstream msg;
        msg << what << " must be a non-empty square matrix, got " << m.rows() << "x" << m.cols();
        throw DimensionError(msg.str());
    }
}

void require_same_dim(const Operator &a, const Operator &b, const char *what) {
    require_square(a, what);
    require_square(b, what);
    if (a.rows() != b.rows()) {
        std::ostringstream msg;
        msg << what << ": dimension mismatch " << a.rows() << " vs " << b.rows();
        throw DimensionError(msg.str());
    }
}

}  // namespace

double hermiticity_defect(const Operator &op) {
    const double scale = op.norm();
    if (scale == 0.0) return 0.0;
    return (op - op.adjoint()).norm() / scale;
}

bool is_hermitian(const Operator &op, double tol) {
    return op.rows() == op.cols() && hermiticity_defect(op) <= tol;
}

bool is_unitary(const Operator &op, double tol) {
    if (op.rows() != op.cols()) return false;
    const auto id = Operator::Identity(op.rows(), op.cols());
    return (op.adjoint() * op - id).norm() <= tol * std::sqrt(static_cast<double>(op.rows())) &&
           (op * op.adjoint() - id).norm() <= tol * std::sqrt(static_cast<double>(op.rows()));
}

Operator hermitian_part(const Operator &op) {
    Operator out = op + op.adjoint();
    out *= 0.5;
    return out;
}

// ---------------------------------------------------------------------------
// QuantumState

QuantumState::QuantumState(Operator matrix, double log_norm, double hermiticity_tol)
    : matrix_(std::move(matrix)), log_norm_(log_norm) {
    require_square(matrix_, "density matrix");
    if (!matrix_.allFinite()) throw NumericalError("density matrix has non-finite entries");
    if (hermiticity_defect(matrix_) > hermiticity_tol) {
        throw StateError("density matrix is not Hermitian within tolerance");
    }
    matrix_ = hermitian_part(matrix_);
    if (!(trace() > 0.0)) throw StateError("density matrix must have strictly positive trace");
}

QuantumState::QuantumState(Operator matrix, double log_norm, bool)
    : matrix_(std::move(matrix)), log_norm_(log_norm) {}

QuantumState QuantumState::pure(const Eigen::VectorXcd &psi) {
    const double n2 = psi.squaredNorm();
    if (!(n2 > 0.0)) throw StateError("pure state vector must be nonzero");
    return QuantumState(Operator(psi * psi.adjoint() / n2));
}

QuantumState QuantumState::from_bloch(double x, double y, double z) {
    Operator m = Operator::Identity(2, 2);
    m += x * pauli_matrix(Pauli::X) + y * pauli_matrix(Pauli::Y) + z * pauli_matrix(Pauli::Z);
    return QuantumState(Operator(0.5 * m));
}

QuantumState QuantumState::maximally_mixed(std::size_t dim) {
    if (dim == 0) throw DimensionError("dimension must be positive");
    const auto d = static_cast<Eigen::Index>(dim);
    return QuantumState(Operator(Operator::Identity(d, d) / static_cast<double>(dim)));
}

QuantumState QuantumState::after_update(Operator matrix, double log_norm) {
    if (!matrix.allFinite()) throw NumericalError("state update produced non-finite entries");
    Operator sym = hermitian_part(matrix);
    const double tr = sym.trace().real();
    if (!(tr > kMinTrace)) {
        std::ostringstream msg;
        msg << "trace collapsed to " << tr;
        throw StateError(msg.str());
    }
    if (tr < kRescaleLow || tr > kRescaleHigh) {
        sym /= tr;
        log_norm += std::log(tr);
    }
    return QuantumState(std::move(sym), log_norm, true);
}

double QuantumState::purity() const {
    const double tr = trace();
    // Tr[rho^2] = sum |rho_ij|^2 for Hermitian rho.
    return matrix_.squaredNorm() / (tr * tr);
}

QuantumState QuantumState::renormalized() const {
    const double tr = trace();
    return QuantumState(Operator(matrix_ / tr), log_norm_ + std::log(tr), true);
}

// ---------------------------------------------------------------------------
// Superoperator actions

Operator dissipator(const Operator &z, const Operator &rho) {
    require_same_dim(z, rho, "dissipator");
    const Operator zd = z.adjoint();
    const Operator zdz = zd * z;
    Operator out = z * rho * zd;
    out -= 0.5 * (zdz * rho + rho * zdz);
    return out;
}

Operator dissipator(const Operator &z, const QuantumState &rho) { return dissipator(z, rho.matrix()); }

Operator innovation_action(const Operator &z, const Operator &rho) {
    require_same_dim(z, rho, "innovation_action");
    return z * rho + rho * z.adjoint();
}

Operator innovation_action(const Operator &z, const QuantumState &rho) {
    return innovation_action(z, rho.matrix());
}

Operator innovation_squared(const Operator &z, const Operator &rho) {
    const Operator a = innovation_action(z, rho);
    return z * a + a * z.adjoint();
}

Operator innovation_squared(const Operator &z, const QuantumState &rho) {
    return innovation_squared(z, rho.matrix());
}

Operator lindblad_rhs(const Operator &h, std::span<const Operator> ls, const Operator &rho,
                      double hermiticity_tol) {
    require_same_dim(h, rho, "lindblad_rhs");
    if (!is_hermitian(h, hermiticity_tol)) throw ModelError("Hamiltonian is not Hermitian");
    Operator out = -kI * (h * rho - rho * h);
    for (const auto &l : ls) out += dissipator(l, rho);
    return out;
}

Operator lindblad_rhs(const Operator &h, std::span<const Operator> ls, const QuantumState &rho,
                      double hermiticity_tol) {
    return lindblad_rhs(h, ls, rho.matrix(), hermiticity_tol);
}

cplx expectation(const Operator &x, const QuantumState &rho) {
    require_same_dim(x, rho.matrix(), "expectation");
    const double tr = rho.trace();
    if (!(tr > 0.0)) throw StateError("expectation requires positive trace");
    // Tr[X rho] without forming the product.
    const cplx num = (x.transpose().cwiseProduct(rho.matrix())).sum();
    return num / tr;
}

double frobenius_distance(const QuantumState &a, const QuantumState &b) {
    require_same_dim(a.matrix(), b.matrix(), "frobenius_distance");
    // Hermitian difference: Tr[D^2] = ||D||_F^2.
    return (a.normalized() - b.normalized()).norm();
}

double overlap_fidelity(const QuantumState &rho_ss, const QuantumState &rho_target) {
    require_same_dim(rho_ss.matrix(), rho_target.matrix(), "overlap_fidelity");
    const Operator a = rho_ss.normalized();
    const Operator b = rho_target.normalized();
    const double overlap = (a.transpose().cwiseProduct(b)).sum().real();
    if (overlap < -1e-10) {
        std::ostringstream msg;
        msg << "negative trace overlap " << overlap;
        throw NumericalError(msg.str());
    }
    return std::sqrt(std::max(overlap, 0.0));
}

// ---------------------------------------------------------------------------
// Pauli algebra and target states

Operator pauli_matrix(Pauli which) {
    Operator m = Operator::Zero(2, 2);
    switch (which) {
        case Pauli::X: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
        case Pauli::Y: m(0, 1) = -kI; m(1, 0) = kI; break;
        case Pauli::Z: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
        case Pauli::Plus: m(0, 1) = 1.0; break;   // |e><g|
        case Pauli::Minus: m(1, 0) = 1.0; break;  // |g><e|
    }
    return m;
}

Operator kron(const Operator &a, const Operator &b) {
    Operator out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Operator pauli(Pauli which, std::size_t site, std::size_t n_sites) {
    if (site >= n_sites) {
        std::ostringstream msg;
        msg << "site " << site << " out of range for " << n_sites << " sites";
        throw IndexError(msg.str());
    }
    const Operator left = Operator::Identity(Eigen::Index{1} << site, Eigen::Index{1} << site);
    const auto right_dim = Eigen::Index{1} << (n_sites - site - 1);
    const Operator right = Operator::Identity(right_dim, right_dim);
    return kron(kron(left, pauli_matrix(which)), right);
}

Operator cluster_stabilizer(std::size_t site, std::size_t n_sites) {
    Operator k = pauli(Pauli::X, site, n_sites);
    if (site > 0) k = pauli(Pauli::Z, site - 1, n_sites) * k;
    if (site + 1 < n_sites) k = k * pauli(Pauli::Z, site + 1, n_sites);
    return k;
}

QuantumState cluster_state(std::size_t n_sites) {
    if (n_sites == 0) throw DimensionError("cluster state needs at least one site");
    const auto dim = Eigen::Index{1} << n_sites;
    const Operator id = Operator::Identity(dim, dim);
    Operator proj = id;
    for (std::size_t i = 0; i < n_sites; ++i) {
        proj = proj * (0.5 * (id + cluster_stabilizer(i, n_sites)));
    }
    return QuantumState(std::move(proj));
}

Operator unitary_propagator(const Operator &h, double t) {
    Eigen::SelfAdjointEigenSolver<Operator> eig(hermitian_part(h));
    if (eig.info() != Eigen::Success) throw NumericalError("Hamiltonian eigensolve failed");
    const Eigen::VectorXcd phases =
        (-kI * t * eig.eigenvalues().cast<cplx>()).array().exp().matrix();
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace noknow
