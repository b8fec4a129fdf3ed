#pragma once

/**
 * @file evolve.hpp
 * @brief Closed-system propagation by spectral decomposition and open-system
 * propagation of the Lindblad master equation with fixed-step RK4.
 *
 * Both propagators treat the initial state as the state at grid.t_start and
 * record one state per grid point. Each comes in two flavours: one that
 * returns a Trajectory, and one that streams states to an observer so long
 * runs on large spaces need not keep every density matrix alive.
 */

#include "cavent/hilbert.hpp"
#include "cavent/model.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavent {

/// A propagated state broke one of its numerical invariants.
class InvariantViolation : public std::runtime_error {
public:
    InvariantViolation(std::string invariant, const std::string& detail)
        : std::runtime_error(invariant + ": " + detail), invariant_(std::move(invariant)) {}
    const std::string& invariant() const { return invariant_; }

private:
    std::string invariant_;
};

struct TimeGrid {
    double t_start = 0.0;
    double t_end = 1.0;
    int n_points = 2;

    void validate() const {
        if (n_points < 2) throw std::invalid_argument("time grid needs at least 2 points");
        if (!(t_end > t_start)) throw std::invalid_argument("time grid needs t_end > t_start");
        if (!std::isfinite(t_start) || !std::isfinite(t_end)) throw std::invalid_argument("time grid must be finite");
    }
    double spacing() const { return (t_end - t_start) / (n_points - 1); }
    double time(int k) const { return k == n_points - 1 ? t_end : t_start + k * spacing(); }
    std::vector<double> times() const {
        std::vector<double> ts(static_cast<std::size_t>(n_points));
        for (int k = 0; k < n_points; ++k) ts[static_cast<std::size_t>(k)] = time(k);
        return ts;
    }
};

struct TrajectoryMeta {
    ModelParams params;
    HamiltonianLevel level = HamiltonianLevel::full;
};

template <class State>
struct Trajectory {
    TimeGrid grid;
    std::vector<State> states;
    std::optional<TrajectoryMeta> meta;
};

inline constexpr double unitary_norm_tolerance = 1e-9;

/// Spectral propagator exp(-iHt) built from one Hermitian eigendecomposition.
class UnitaryPropagator {
public:
    explicit UnitaryPropagator(const OperatorMatrix& H) : space_(H.space) {
        if (!H.hermitian || H.hermiticity_error() > 1e-12)
            throw std::invalid_argument("propagate_unitary needs a Hermitian operator");
        Eigen::SelfAdjointEigenSolver<CMatrix> es(H.entries);
        if (es.info() != Eigen::Success) throw std::runtime_error("Hermitian eigendecomposition failed");
        energies_ = es.eigenvalues();
        vectors_ = es.eigenvectors();
    }

    /// exp(-iHt) psi0
    StateVector evolve(const StateVector& psi0, double t) const {
        require_same_space(space_, psi0.space);
        const CVector coeff = vectors_.adjoint() * psi0.amplitudes;
        return at(coeff, t);
    }

    const Eigen::VectorXd& energies() const { return energies_; }

    /// Streams exp(-iH (t_k - t_start)) psi0 at every grid point.
    void run(const StateVector& psi0, const TimeGrid& grid,
             const std::function<void(int, double, const StateVector&)>& observer) const {
        require_same_space(space_, psi0.space);
        grid.validate();
        const CVector coeff = vectors_.adjoint() * psi0.amplitudes;
        const double n0 = psi0.norm();
        for (int k = 0; k < grid.n_points; ++k) {
            const double t = grid.time(k);
            StateVector psi = at(coeff, t - grid.t_start);
            const double drift = std::abs(psi.norm() - n0);
            if (drift > unitary_norm_tolerance)
                throw InvariantViolation("norm", "drift " + std::to_string(drift) + " at t=" + std::to_string(t));
            observer(k, t, psi);
        }
    }

private:
    StateVector at(const CVector& coeff, double t) const {
        CVector phased(coeff.size());
        for (Eigen::Index j = 0; j < coeff.size(); ++j) phased(j) = std::polar(1.0, -energies_(j) * t) * coeff(j);
        return {space_, vectors_ * phased};
    }

    HilbertSpace space_;
    Eigen::VectorXd energies_;
    CMatrix vectors_;
};

inline Trajectory<StateVector> propagate_unitary(const OperatorMatrix& H, const StateVector& psi0,
                                                 const TimeGrid& grid) {
    Trajectory<StateVector> traj{grid, {}, std::nullopt};
    traj.states.reserve(static_cast<std::size_t>(grid.n_points));
    UnitaryPropagator(H).run(psi0, grid, [&](int, double, const StateVector& psi) { traj.states.push_back(psi); });
    return traj;
}

inline double spectral_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

/// 0.05 / (||H||_2 + sum_j ||C_j||_2^2); infinite when the generator vanishes.
inline double default_step(const OperatorMatrix& H, const std::vector<OperatorMatrix>& c_ops) {
    double bound = spectral_norm(H.entries);
    for (const auto& c : c_ops) {
        const double s = spectral_norm(c.entries);
        bound += s * s;
    }
    if (bound == 0.0) return std::numeric_limits<double>::infinity();
    return 0.05 / bound;
}

struct LindbladOptions {
    double trace_tolerance = 1e-6;
    double eigenvalue_tolerance = 1e-6;
    bool check_invariants = true;
};

/// Right-hand side of the master equation,
///   drho/dt = A rho + (A rho)^dag + sum_j C_j rho C_j^dag,  A = -iH - 1/2 sum_j C_j^dag C_j,
/// evaluated with sparse operators.
class LindbladGenerator {
public:
    using Sparse = Eigen::SparseMatrix<cplx>;

    LindbladGenerator(const OperatorMatrix& H, const std::vector<OperatorMatrix>& c_ops) : space_(H.space) {
        CMatrix a = cplx(0.0, -1.0) * H.entries;
        for (const auto& c : c_ops) {
            require_same_space(space_, c.space);
            a -= 0.5 * c.entries.adjoint() * c.entries;
            jumps_.push_back(c.entries.sparseView(1.0, 1e-300));
            jumps_adj_.push_back(Sparse(jumps_.back().adjoint()));
        }
        drift_ = a.sparseView(1.0, 1e-300);
    }

    void operator()(const CMatrix& rho, CMatrix& out) const {
        out.noalias() = drift_ * rho;
        out += out.adjoint().eval();
        for (std::size_t j = 0; j < jumps_.size(); ++j) {
            const CMatrix cr = jumps_[j] * rho;
            out.noalias() += cr * jumps_adj_[j];
        }
    }

    const HilbertSpace& space() const { return space_; }

private:
    HilbertSpace space_;
    Sparse drift_;
    std::vector<Sparse> jumps_;
    std::vector<Sparse> jumps_adj_;
};

/// Classical RK4 on the density matrix. The requested step is shrunk so that
/// a whole number of steps spans each grid interval.
inline void propagate_lindblad(const OperatorMatrix& H, const std::vector<OperatorMatrix>& c_ops,
                               const DensityMatrix& rho0, const TimeGrid& grid, double step,
                               const std::function<void(int, double, const DensityMatrix&)>& observer,
                               const LindbladOptions& opts = {}) {
    if (!(step > 0.0)) throw std::invalid_argument("Lindblad step must be > 0");
    grid.validate();
    require_same_space(H.space, rho0.space);
    for (const auto& c : c_ops) require_same_space(H.space, c.space);

    const LindbladGenerator generator(H, c_ops);
    const double spacing = grid.spacing();
    const long substeps = std::isinf(step) ? 1L : std::max(1L, static_cast<long>(std::ceil(spacing / step - 1e-9)));
    const double h = spacing / static_cast<double>(substeps);
    const double trace0 = rho0.trace();

    const auto audit = [&](const CMatrix& rho, double t) {
        if (!opts.check_invariants) return;
        const double tr = rho.trace().real();
        if (std::abs(tr - trace0) > opts.trace_tolerance)
            throw InvariantViolation("trace", "drift " + std::to_string(tr - trace0) + " at t=" + std::to_string(t));
        Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
        const double lo = es.eigenvalues().minCoeff();
        if (lo < -opts.eigenvalue_tolerance)
            throw InvariantViolation("positivity", "min eigenvalue " + std::to_string(lo) + " at t=" +
                                                       std::to_string(t));
    };

    const Eigen::Index d = rho0.entries.rows();
    CMatrix rho = rho0.entries;
    CMatrix k1(d, d), k2(d, d), k3(d, d), k4(d, d), tmp(d, d);
    audit(rho, grid.time(0));
    observer(0, grid.time(0), DensityMatrix(rho0.space, rho));
    for (int k = 1; k < grid.n_points; ++k) {
        for (long s = 0; s < substeps; ++s) {
            generator(rho, k1);
            tmp = rho + (0.5 * h) * k1;
            generator(tmp, k2);
            tmp = rho + (0.5 * h) * k2;
            generator(tmp, k3);
            tmp = rho + h * k3;
            generator(tmp, k4);
            rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        const double t = grid.time(k);
        audit(rho, t);
        observer(k, t, DensityMatrix(rho0.space, rho));
    }
}

inline Trajectory<DensityMatrix> propagate_lindblad(const OperatorMatrix& H, const std::vector<OperatorMatrix>& c_ops,
                                                    const DensityMatrix& rho0, const TimeGrid& grid,
                                                    std::optional<double> step = std::nullopt,
                                                    const LindbladOptions& opts = {}) {
    Trajectory<DensityMatrix> traj{grid, {}, std::nullopt};
    traj.states.reserve(static_cast<std::size_t>(grid.n_points));
    propagate_lindblad(H, c_ops, rho0, grid, step.value_or(default_step(H, c_ops)),
                       [&](int, double, const DensityMatrix& rho) { traj.states.push_back(rho); }, opts);
    return traj;
}

}  // namespace cavent
