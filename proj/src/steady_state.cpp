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

#include "noknow/steady_state.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/QR>

#include "noknow/models.hpp"
#include "noknow/superoperator.hpp"

namespace noknow {

namespace {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kResidualTol = 1e-10;     // relative to ||L||_F
constexpr std::size_t kMaxFallbackSteps = 200000;

// M += c (A (x) B), skipping the zero entries of A; the operators here are sparse.
void add_kron(Matrix &m, cplx c, const Operator &a, const Operator &b) {
    const Eigen::Index nb = b.rows();
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            if (a(i, j) == cplx{0.0, 0.0}) continue;
            m.block(i * nb, j * nb, nb, nb) += (c * a(i, j)) * b;
        }
    }
}

// M += c (I (x) A): X -> c A X.
void add_left(Matrix &m, cplx c, const Operator &a) {
    const Eigen::Index d = a.rows();
    for (Eigen::Index i = 0; i < d; ++i) m.block(i * d, i * d, d, d) += c * a;
}

// M += c (B^T (x) I): X -> c X B.
void add_right(Matrix &m, cplx c, const Operator &b) {
    const Eigen::Index d = b.rows();
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            const cplx v = b(j, i);
            if (v == cplx{0.0, 0.0}) continue;
            m.block(i * d, j * d, d, d).diagonal().array() += c * v;
        }
    }
}

void add_hamiltonian(Matrix &m, const Operator &h) {
    add_left(m, -kI, h);
    add_right(m, kI, h);
}

// Jump term J rho J^dagger minus the anticommutator with L^dagger L.
void add_jump(Matrix &m, const Operator &jump, const Operator &l) {
    const Operator ldl = l.adjoint() * l;
    add_kron(m, 1.0, jump.conjugate(), jump);
    add_left(m, -0.5, ldl);
    add_right(m, -0.5, ldl);
}

void check_size(Eigen::Index d) {
    if (d * d > kMaxLiouvillianDim) {
        throw ResourceError("Liouvillian of dimension " + std::to_string(d * d) + " exceeds the limit of " +
                            std::to_string(kMaxLiouvillianDim));
    }
}

Operator to_density(const Vector &v, Eigen::Index d) { return hermitian_part(superop::unvec(v, d)); }

SteadyStateResult blank_result(Eigen::Index d) {
    return {QuantumState::maximally_mixed(static_cast<std::size_t>(d)), 0.0, 0.0, false, 0, 0.0, {}};
}

SteadyStateResult finish(const LiouvillianMatrix &lmat, Operator rho, double norm, SteadyStateResult out) {
    out.residual = (lmat.matrix * superop::vec(rho)).norm();
    if (!(out.residual <= kResidualTol * norm)) {
        // Integrate from the candidate itself so the long run only has to remove the error.
        const double t = out.spectral_gap > 0.0 ? 50.0 / out.spectral_gap : 50.0 * static_cast<double>(lmat.dim()) / norm;
        const double dt = 1.0 / norm;
        const auto wanted = static_cast<std::size_t>(std::ceil(t / dt));
        const std::size_t steps = std::min(wanted, kMaxFallbackSteps);
        QuantumState start(hermitian_part(rho) + 1e-12 * Operator::Identity(rho.rows(), rho.cols()));
        const Operator evolved = evolve_liouvillian(lmat, start, static_cast<double>(steps) * dt, dt).normalized();
        const double r = (lmat.matrix * superop::vec(evolved)).norm();
        out.flags.integrated = true;
        if (r < out.residual) {
            rho = evolved;
            out.residual = r;
        }
        out.flags.degraded_precision = !(out.residual <= kResidualTol * norm) || steps < wanted;
    }
    rho = hermitian_part(rho);
    rho /= rho.trace().real();
    Eigen::SelfAdjointEigenSolver<Operator> herm(rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = herm.eigenvalues().minCoeff();
    out.rho_ss = QuantumState(std::move(rho));
    return out;
}

// Real coordinates r of a Hermitian X in the orthonormal basis {E_ii, (E_ij + E_ji)/sqrt2,
// i(E_ij - E_ji)/sqrt2}. The generator maps Hermitian to Hermitian, so in this basis it
// is a real matrix and the eigen and LU work runs in real arithmetic.
struct HermitianBasis {
    Eigen::Index d;
    // Column c of the basis has entries `value[c][0..1]` at vec positions `pos[c][0..1]`.
    std::vector<std::array<Eigen::Index, 2>> pos;
    std::vector<std::array<cplx, 2>> value;

    explicit HermitianBasis(Eigen::Index dim) : d(dim) {
        const double s = 1.0 / std::sqrt(2.0);
        for (Eigen::Index i = 0; i < d; ++i) {
            pos.push_back({i + i * d, i + i * d});
            value.push_back({cplx{1.0, 0.0}, cplx{0.0, 0.0}});
        }
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index i = 0; i < j; ++i) {
                pos.push_back({i + j * d, j + i * d});
                value.push_back({cplx{s, 0.0}, cplx{s, 0.0}});
                pos.push_back({i + j * d, j + i * d});
                value.push_back({cplx{0.0, s}, cplx{0.0, -s}});
            }
        }
    }

    Eigen::Index size() const { return d * d; }

    Eigen::MatrixXd represent(const Matrix &l) const {
        const Eigen::Index n = size();
        Matrix lt(n, n);
        for (Eigen::Index c = 0; c < n; ++c) {
            const auto &p = pos[static_cast<std::size_t>(c)];
            const auto &v = value[static_cast<std::size_t>(c)];
            lt.col(c) = v[0] * l.col(p[0]);
            if (v[1] != cplx{0.0, 0.0}) lt.col(c) += v[1] * l.col(p[1]);
        }
        Eigen::MatrixXd out(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto &p = pos[static_cast<std::size_t>(r)];
            const auto &v = value[static_cast<std::size_t>(r)];
            Eigen::VectorXcd row = std::conj(v[0]) * lt.row(p[0]).transpose();
            if (v[1] != cplx{0.0, 0.0}) row += std::conj(v[1]) * lt.row(p[1]).transpose();
            out.row(r) = row.real().transpose();
        }
        return out;
    }

    Eigen::VectorXd coords_of_identity() const {
        Eigen::VectorXd r = Eigen::VectorXd::Zero(size());
        r.head(d).setConstant(1.0 / static_cast<double>(d));
        return r;
    }

    Operator to_operator(const Eigen::VectorXd &r) const {
        Vector v = Vector::Zero(size());
        for (Eigen::Index c = 0; c < size(); ++c) {
            const auto &p = pos[static_cast<std::size_t>(c)];
            const auto &val = value[static_cast<std::size_t>(c)];
            v(p[0]) += val[0] * r(c);
            if (val[1] != cplx{0.0, 0.0}) v(p[1]) += val[1] * r(c);
        }
        return to_density(v, d);
    }
};

struct Spectrum {
    std::size_t null_dimension = 0;
    double gap = 0.0;
};

// |Re| below thr counts as zero; the gap is -max Re over the rest.
template <typename Values>
Spectrum classify(const Values &evals, double thr) {
    Spectrum s;
    double max_re = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < evals.size(); ++i) {
        if (std::abs(evals(i).real()) < thr) {
            ++s.null_dimension;
        } else {
            max_re = std::max(max_re, evals(i).real());
        }
    }
    s.gap = std::isfinite(max_re) ? -max_re : 0.0;
    return s;
}

// Block inverse iteration on the real generator around a small positive shift, which
// lies outside the spectrum of a contractive generator, followed by Rayleigh-Ritz.
class ShiftedInverse {
  public:
    ShiftedInverse(const Eigen::MatrixXd &r, double norm) : r_(r) {
        Eigen::MatrixXd shifted = r;
        shifted.diagonal().array() -= 1e-8 * norm;
        lu_.compute(shifted);
        norm_ = norm;
    }

    // Converges the `k` eigenvalues nearest the shift; `start` seeds the first column.
    void iterate(Eigen::Index k, const Eigen::VectorXd &start) {
        const Eigen::Index n = r_.rows();
        k = std::min(k, n);
        Eigen::MatrixXd x(n, k);
        std::mt19937_64 rng(0x5eed);
        std::normal_distribution<double> normal;
        for (Eigen::Index j = 0; j < k; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) x(i, j) = normal(rng);
        }
        x.col(0) = start;
        q_ = orthonormalize(x);
        Eigen::VectorXcd prev = Eigen::VectorXcd::Zero(k);
        for (int iter = 1; iter <= 400; ++iter) {
            q_ = orthonormalize(lu_.solve(q_));
            if (!q_.allFinite()) throw SolverError("steady state: inverse iteration produced non-finite values");
            if (iter % 5 != 0) continue;
            ritz_.compute(q_.transpose() * (r_ * q_), true);
            if (ritz_.info() != Eigen::Success) throw SolverError("steady state: Ritz eigenproblem failed");
            Eigen::VectorXcd vals = ritz_.eigenvalues();
            std::sort(vals.data(), vals.data() + vals.size(),
                      [](cplx a, cplx b) { return std::abs(a) < std::abs(b); });
            const bool settled = (vals - prev).cwiseAbs().maxCoeff() <= 1e-10 * norm_;
            prev = vals;
            if (settled) break;
        }
    }

    Eigen::VectorXcd ritz_values() const { return ritz_.eigenvalues(); }

    // Projection of `target` onto the Ritz vectors whose value is below thr in modulus,
    // polished by two more inverse steps.
    Eigen::VectorXd null_projection(const Eigen::VectorXd &target, double thr) const {
        const Eigen::MatrixXcd vecs = q_.cast<cplx>() * ritz_.eigenvectors();
        const auto &vals = ritz_.eigenvalues();
        std::vector<Eigen::Index> keep;
        Eigen::Index closest = 0;
        for (Eigen::Index i = 0; i < vals.size(); ++i) {
            if (std::abs(vals(i)) < std::abs(vals(closest))) closest = i;
            if (std::abs(vals(i)) < thr) keep.push_back(i);
        }
        if (keep.empty()) keep.push_back(closest);
        Eigen::MatrixXcd basis(vecs.rows(), static_cast<Eigen::Index>(keep.size()));
        for (std::size_t c = 0; c < keep.size(); ++c) basis.col(static_cast<Eigen::Index>(c)) = vecs.col(keep[c]);
        const Eigen::VectorXcd t = target.cast<cplx>();
        Eigen::VectorXd v = (basis * basis.colPivHouseholderQr().solve(t)).real();
        if (v.norm() < 1e-8 * target.norm()) {
            // I/d has no overlap with the null space; fall back to the nearest Ritz vector.
            const Eigen::VectorXcd w = vecs.col(closest);
            Eigen::Index big = 0;
            w.cwiseAbs().maxCoeff(&big);
            v = (w * (std::abs(w(big)) / w(big))).real();
        }
        for (int polish = 0; polish < 2; ++polish) {
            v = lu_.solve(v);
            v /= v.norm();
        }
        return v;
    }

  private:
    static Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd &m) {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(m);
        return qr.householderQ() * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    }

    const Eigen::MatrixXd &r_;
    double norm_ = 0.0;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
    Eigen::MatrixXd q_;
    Eigen::EigenSolver<Eigen::MatrixXd> ritz_;
};

SteadyStateResult solve(const LiouvillianMatrix &lmat, double tol, double norm) {
    const HermitianBasis basis(lmat.system_dim);
    const Eigen::MatrixXd r = basis.represent(lmat.matrix);
    const double thr = tol * norm;
    SteadyStateResult out = blank_result(lmat.system_dim);
    ShiftedInverse inverse(r, norm);
    Eigen::Index block = 8;
    if (lmat.dim() <= kDenseEigenLimit) {
        Eigen::EigenSolver<Eigen::MatrixXd> es(r, false);
        if (es.info() != Eigen::Success) throw SolverError("steady state: eigendecomposition did not converge");
        const Spectrum s = classify(es.eigenvalues(), thr);
        out.null_dimension = s.null_dimension;
        out.spectral_gap = s.gap;
        block = std::max<Eigen::Index>(4, static_cast<Eigen::Index>(s.null_dimension) + 2);
        inverse.iterate(block, basis.coords_of_identity());
    } else {
        inverse.iterate(block, basis.coords_of_identity());
        const Spectrum s = classify(inverse.ritz_values(), thr);
        out.null_dimension = s.null_dimension;
        out.spectral_gap = s.gap;
        out.flags.gap_estimated = true;
    }
    out.degenerate = out.null_dimension > 1;
    Operator rho = basis.to_operator(inverse.null_projection(basis.coords_of_identity(), thr));
    const double tr = rho.trace().real();
    if (!(std::abs(tr) > 0.0) || !std::isfinite(tr)) throw SolverError("steady state: null vector has no trace");
    return finish(lmat, rho / tr, norm, std::move(out));
}

}  // namespace

LiouvillianMatrix vectorize(const Operator &h, std::span<const Operator> ls) {
    if (h.rows() != h.cols()) throw DimensionError("vectorize: Hamiltonian must be square");
    const Eigen::Index d = h.rows();
    for (const auto &l : ls) {
        if (l.rows() != d || l.cols() != d) throw DimensionError("vectorize: coupling operator dimension mismatch");
    }
    if (!is_hermitian(h)) throw ModelError("vectorize: Hamiltonian is not Hermitian");
    check_size(d);
    LiouvillianMatrix out{Matrix::Zero(d * d, d * d), d};
    add_hamiltonian(out.matrix, h);
    for (const auto &l : ls) add_jump(out.matrix, l, l);
    return out;
}

LiouvillianMatrix model_liouvillian(const MonitoredModel &model) {
    model.validate();
    const Eigen::Index d = model.H.rows();
    check_size(d);
    LiouvillianMatrix out{Matrix::Zero(d * d, d * d), d};
    add_hamiltonian(out.matrix, model.H);
    const bool jump_fb = model.feedback && model.feedback->kind() == FeedbackKind::JumpUnitary;
    for (const auto &ch : model.channels) {
        if (jump_fb && ch.detection == Detection::Photodetect) {
            add_jump(out.matrix, model.feedback->correction() * ch.L, ch.L);
        } else {
            add_jump(out.matrix, ch.L, ch.L);
        }
    }
    if (model.feedback && model.feedback->kind() == FeedbackKind::HamiltonianModulation) {
        for (const auto &g : model.feedback->gains()) {
            const Channel &ch = model.channels[g.channel];
            const Operator z = ch.quadrature();
            const Operator &f = g.gain;
            // -i sqrt(eta) (G Z rho + G rho Z^dagger - Z rho G - rho Z^dagger G)
            const cplx c = -kI * std::sqrt(ch.eta);
            add_left(out.matrix, c, f * z);
            add_kron(out.matrix, c, z.conjugate(), f);
            add_kron(out.matrix, -c, f.transpose(), z);
            add_right(out.matrix, -c, z.adjoint() * f);
            add_jump(out.matrix, f, f);
        }
    }
    return out;
}

SteadyStateResult steady_state(const LiouvillianMatrix &lmat, double tol) {
    const Eigen::Index d = lmat.system_dim;
    if (d <= 0 || lmat.matrix.rows() != d * d || lmat.matrix.cols() != d * d) {
        throw DimensionError("steady_state: Liouvillian does not match its system dimension");
    }
    if (!lmat.matrix.allFinite()) throw NumericalError("steady_state: Liouvillian has non-finite entries");
    if (!(tol > 0.0)) throw ConfigError("steady_state: tolerance must be positive");
    const double norm = lmat.matrix.norm();
    if (norm == 0.0) {
        SteadyStateResult out = blank_result(d);
        out.null_dimension = static_cast<std::size_t>(d * d);
        out.degenerate = d > 1;
        out.min_eigenvalue = 1.0 / static_cast<double>(d);
        return out;
    }
    return solve(lmat, tol, norm);
}

QuantumState evolve_master_equation(const Operator &h, std::span<const Operator> ls, const QuantumState &rho0,
                                    double t, double dt) {
    if (!(t >= 0.0) || !(dt > 0.0)) throw ConfigError("evolve_master_equation: need t >= 0 and dt > 0");
    const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
    const double step = steps > 0 ? t / static_cast<double>(steps) : 0.0;
    Operator rho = rho0.normalized();
    auto f = [&](const Operator &r) { return lindblad_rhs(h, ls, r); };
    for (std::size_t n = 0; n < steps; ++n) {
        const Operator k1 = f(rho);
        const Operator k2 = f(rho + 0.5 * step * k1);
        const Operator k3 = f(rho + 0.5 * step * k2);
        const Operator k4 = f(rho + step * k3);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!rho.allFinite()) throw NumericalError("evolve_master_equation: state became non-finite");
    return QuantumState(hermitian_part(rho));
}

QuantumState evolve_liouvillian(const LiouvillianMatrix &lmat, const QuantumState &rho0, double t, double dt) {
    if (!(t >= 0.0) || !(dt > 0.0)) throw ConfigError("evolve_liouvillian: need t >= 0 and dt > 0");
    if (static_cast<Eigen::Index>(rho0.dim()) != lmat.system_dim) {
        throw DimensionError("evolve_liouvillian: state dimension mismatch");
    }
    const auto steps = static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
    const double step = steps > 0 ? t / static_cast<double>(steps) : 0.0;
    Vector v = superop::vec(rho0.normalized());
    const Matrix &m = lmat.matrix;
    for (std::size_t n = 0; n < steps; ++n) {
        const Vector k1 = m * v;
        const Vector k2 = m * (v + 0.5 * step * k1);
        const Vector k3 = m * (v + 0.5 * step * k2);
        const Vector k4 = m * (v + step * k3);
        v += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!v.allFinite()) throw NumericalError("evolve_liouvillian: state became non-finite");
    return QuantumState(to_density(v, lmat.system_dim));
}

std::vector<FidelityRow> fidelity_scan(std::span<const std::size_t> ns, double gamma_over_alpha,
                                       std::span<const double> etas, double alpha, bool include_no_feedback,
                                       unsigned threads) {
    std::vector<FidelityRow> rows;
    for (const auto n : ns) {
        DqcChainParams check{n, alpha, gamma_over_alpha * alpha, 1.0};
        check.validate();
        if (include_no_feedback) rows.push_back({n, std::nullopt, gamma_over_alpha});
        for (const double eta : etas) {
            check.eta = eta;
            check.validate();
            rows.push_back({n, eta, gamma_over_alpha});
        }
    }
    auto solve = [&](FidelityRow &row) {
        const DqcChainParams p{row.n_qubits, alpha, gamma_over_alpha * alpha, row.eta.value_or(1.0)};
        const auto ss = steady_state(model_liouvillian(dqc_chain(p, row.eta.has_value())));
        row.fidelity = overlap_fidelity(ss.rho_ss, cluster_state(row.n_qubits));
        row.spectral_gap = ss.spectral_gap;
        row.residual = ss.residual;
        row.degenerate = ss.degenerate;
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(rows.size(), 1)));
    if (threads <= 1) {
        for (auto &row : rows) solve(row);
        return rows;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(rows.size());
    {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < rows.size(); i = next++) {
                    try {
                        solve(rows[i]);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (const auto &e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

}  // namespace noknow
