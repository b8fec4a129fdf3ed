#pragma once

/**
 * @file hilbert.hpp
 * @brief Truncated atom (x) mode_a (x) mode_b Hilbert space, elementary
 * operators, states and partial traces.
 *
 * Factor ordering is fixed as atom (x) mode_a (x) mode_b. The basis index of
 * (atom=alpha, m photons in a, n photons in b) is
 *     alpha*(n_max+1)^2 + m*(n_max+1) + n.
 * All index arithmetic goes through HilbertSpace::encode / decode.
 */

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace cavent {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Atomic levels. Not every level exists in every space: the two-photon
/// model only has g and e, the effective model only g.
enum class Level { g, i1, i2, e };

enum class Mode { a, b };

enum class Subsystem { atom, mode_a, mode_b };

inline const char* to_string(Level l) {
    switch (l) {
        case Level::g: return "g";
        case Level::i1: return "i1";
        case Level::i2: return "i2";
        case Level::e: return "e";
    }
    return "?";
}

struct BasisLabel {
    int atom;  // atom index within the space, not a Level
    int m;
    int n;
    bool operator==(const BasisLabel&) const = default;
};

class HilbertSpace {
public:
    HilbertSpace(int n_max, int atom_dim) : n_max_(n_max), atom_dim_(atom_dim) {
        if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
        if (atom_dim != 1 && atom_dim != 2 && atom_dim != 4)
            throw std::invalid_argument("atom_dim must be 1, 2 or 4, got " + std::to_string(atom_dim));
    }

    int n_max() const { return n_max_; }
    int atom_dim() const { return atom_dim_; }
    int fock_dim() const { return n_max_ + 1; }
    int mode_block() const { return fock_dim() * fock_dim(); }
    int dim() const { return atom_dim_ * mode_block(); }

    std::size_t encode(int atom, int m, int n) const {
        return static_cast<std::size_t>(atom * mode_block() + m * fock_dim() + n);
    }
    BasisLabel decode(std::size_t index) const {
        const int i = static_cast<int>(index);
        return {i / mode_block(), (i % mode_block()) / fock_dim(), i % fock_dim()};
    }

    bool has_level(Level l) const {
        switch (atom_dim_) {
            case 4: return true;
            case 2: return l == Level::g || l == Level::e;
            default: return l == Level::g;
        }
    }

    /// Index of a level inside this space's atomic factor.
    int level_index(Level l) const {
        if (!has_level(l))
            throw std::invalid_argument(std::string("level ") + to_string(l) + " does not exist for atom_dim " +
                                        std::to_string(atom_dim_));
        if (atom_dim_ == 4) return static_cast<int>(l);
        return l == Level::g ? 0 : 1;
    }

    /// Number of excitation quanta carried by the atom index (g:0, i:1, e:2).
    int atom_excitation(int atom) const {
        if (atom_dim_ == 4) return atom == 3 ? 2 : (atom == 0 ? 0 : 1);
        if (atom_dim_ == 2) return atom == 1 ? 2 : 0;
        return 0;
    }

    bool operator==(const HilbertSpace&) const = default;

private:
    int n_max_;
    int atom_dim_;
};

inline HilbertSpace make_space(int n_max, int atom_dim) { return HilbertSpace(n_max, atom_dim); }

inline void require_same_space(const HilbertSpace& x, const HilbertSpace& y) {
    if (!(x == y)) throw std::invalid_argument("operands live on different Hilbert spaces");
}

struct StateVector {
    HilbertSpace space;
    CVector amplitudes;

    StateVector(HilbertSpace s, CVector amps) : space(s), amplitudes(std::move(amps)) {
        if (amplitudes.size() != space.dim()) throw std::invalid_argument("state length does not match space dimension");
    }

    double norm() const { return amplitudes.norm(); }

    StateVector normalized() const {
        const double nrm = norm();
        if (nrm == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
        return {space, amplitudes / nrm};
    }

    cplx operator[](std::size_t i) const { return amplitudes(static_cast<Eigen::Index>(i)); }
};

struct DensityMatrix {
    HilbertSpace space;
    CMatrix entries;

    DensityMatrix(HilbertSpace s, CMatrix rho) : space(s), entries(std::move(rho)) {
        if (entries.rows() != space.dim() || entries.cols() != space.dim())
            throw std::invalid_argument("density matrix shape does not match space dimension");
    }

    static DensityMatrix pure(const StateVector& psi) {
        return {psi.space, psi.amplitudes * psi.amplitudes.adjoint()};
    }

    double trace() const { return entries.trace().real(); }
    double hermiticity_error() const { return (entries - entries.adjoint()).cwiseAbs().maxCoeff(); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(entries, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }
};

struct OperatorMatrix {
    HilbertSpace space;
    CMatrix entries;
    bool hermitian = false;

    OperatorMatrix(HilbertSpace s, CMatrix m, bool herm = false)
        : space(s), entries(std::move(m)), hermitian(herm) {
        if (entries.rows() != space.dim() || entries.cols() != space.dim())
            throw std::invalid_argument("operator shape does not match space dimension");
    }

    OperatorMatrix adjoint() const { return {space, entries.adjoint(), hermitian}; }

    double hermiticity_error() const { return (entries - entries.adjoint()).cwiseAbs().maxCoeff(); }

    StateVector apply(const StateVector& psi) const {
        require_same_space(space, psi.space);
        return {space, entries * psi.amplitudes};
    }

    cplx element(std::size_t row, std::size_t col) const {
        return entries(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    }
};

inline OperatorMatrix operator+(const OperatorMatrix& x, const OperatorMatrix& y) {
    require_same_space(x.space, y.space);
    return {x.space, x.entries + y.entries, x.hermitian && y.hermitian};
}

inline OperatorMatrix operator*(const OperatorMatrix& x, const OperatorMatrix& y) {
    require_same_space(x.space, y.space);
    return {x.space, x.entries * y.entries, false};
}

inline OperatorMatrix operator*(double s, const OperatorMatrix& x) { return {x.space, s * x.entries, x.hermitian}; }

inline OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y) {
    require_same_space(x.space, y.space);
    return {x.space, x.entries * y.entries - y.entries * x.entries, false};
}

inline OperatorMatrix identity(const HilbertSpace& space) {
    return {space, CMatrix::Identity(space.dim(), space.dim()), true};
}

inline StateVector basis_state(const HilbertSpace& space, Level atom, int m, int n) {
    const int alpha = space.level_index(atom);
    if (m < 0 || m > space.n_max() || n < 0 || n > space.n_max())
        throw std::out_of_range("photon numbers (" + std::to_string(m) + "," + std::to_string(n) +
                                ") exceed truncation n_max=" + std::to_string(space.n_max()));
    CVector v = CVector::Zero(space.dim());
    v(static_cast<Eigen::Index>(space.encode(alpha, m, n))) = 1.0;
    return {space, v};
}

inline OperatorMatrix annihilator(const HilbertSpace& space, Mode mode) {
    CMatrix op = CMatrix::Zero(space.dim(), space.dim());
    for (int alpha = 0; alpha < space.atom_dim(); ++alpha)
        for (int m = 0; m <= space.n_max(); ++m)
            for (int n = 0; n <= space.n_max(); ++n) {
                const int k = mode == Mode::a ? m : n;
                if (k == 0) continue;
                const auto col = space.encode(alpha, m, n);
                const auto row = mode == Mode::a ? space.encode(alpha, m - 1, n) : space.encode(alpha, m, n - 1);
                op(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = std::sqrt(static_cast<double>(k));
            }
    return {space, op, false};
}

inline OperatorMatrix creator(const HilbertSpace& space, Mode mode) { return annihilator(space, mode).adjoint(); }

inline OperatorMatrix number_operator(const HilbertSpace& space, Mode mode) {
    const auto a = annihilator(space, mode);
    return {space, a.entries.adjoint() * a.entries, true};
}

/// |to><from| on the atom, identity on both modes.
inline OperatorMatrix atomic_transition(const HilbertSpace& space, Level to, Level from) {
    const int row_atom = space.level_index(to);
    const int col_atom = space.level_index(from);
    CMatrix op = CMatrix::Zero(space.dim(), space.dim());
    for (int m = 0; m <= space.n_max(); ++m)
        for (int n = 0; n <= space.n_max(); ++n)
            op(static_cast<Eigen::Index>(space.encode(row_atom, m, n)),
               static_cast<Eigen::Index>(space.encode(col_atom, m, n))) = 1.0;
    return {space, op, to == from};
}

inline OperatorMatrix projector(const HilbertSpace& space, Level level) { return atomic_transition(space, level, level); }

/// a^dag a + b^dag b + (atomic excitation quanta): P_i1 + P_i2 + 2 P_e for the
/// four-level atom, 2 P_e for the two-level atom, photon number alone otherwise.
inline OperatorMatrix excitation_operator(const HilbertSpace& space) {
    CMatrix op = CMatrix::Zero(space.dim(), space.dim());
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
        const auto lbl = space.decode(static_cast<std::size_t>(i));
        op(i, i) = static_cast<double>(lbl.m + lbl.n + space.atom_excitation(lbl.atom));
    }
    return {space, op, true};
}

/// Density matrix of a single tensor factor.
struct ReducedDensityMatrix {
    Subsystem factor;
    CMatrix entries;

    double trace() const { return entries.trace().real(); }
};

inline int factor_dim(const HilbertSpace& space, Subsystem s) {
    return s == Subsystem::atom ? space.atom_dim() : space.fock_dim();
}

inline ReducedDensityMatrix partial_trace(const DensityMatrix& rho, Subsystem keep) {
    const auto& sp = rho.space;
    const int d = factor_dim(sp, keep);
    CMatrix out = CMatrix::Zero(d, d);
    const auto pick = [keep](const BasisLabel& l) {
        return keep == Subsystem::atom ? l.atom : (keep == Subsystem::mode_a ? l.m : l.n);
    };
    // rho_red(x, y) = sum over environment labels of rho((x, env), (y, env))
    for (Eigen::Index r = 0; r < sp.dim(); ++r) {
        const auto lr = sp.decode(static_cast<std::size_t>(r));
        for (Eigen::Index c = 0; c < sp.dim(); ++c) {
            const auto lc = sp.decode(static_cast<std::size_t>(c));
            const bool same_env = keep == Subsystem::atom   ? (lr.m == lc.m && lr.n == lc.n)
                                  : keep == Subsystem::mode_a ? (lr.atom == lc.atom && lr.n == lc.n)
                                                              : (lr.atom == lc.atom && lr.m == lc.m);
            if (same_env) out(pick(lr), pick(lc)) += rho.entries(r, c);
        }
    }
    return {keep, out};
}

/// Pure-state partial trace without forming the full projector.
inline ReducedDensityMatrix partial_trace(const StateVector& psi, Subsystem keep) {
    const auto& sp = psi.space;
    const int d = factor_dim(sp, keep);
    const int env = sp.dim() / d;
    // Reshape amplitudes into a d x env matrix M so that rho_red = M M^dag.
    CMatrix mat = CMatrix::Zero(d, env);
    for (Eigen::Index i = 0; i < sp.dim(); ++i) {
        const auto l = sp.decode(static_cast<std::size_t>(i));
        int row = 0, col = 0;
        switch (keep) {
            case Subsystem::atom: row = l.atom; col = l.m * sp.fock_dim() + l.n; break;
            case Subsystem::mode_a: row = l.m; col = l.atom * sp.fock_dim() + l.n; break;
            case Subsystem::mode_b: row = l.n; col = l.atom * sp.fock_dim() + l.m; break;
        }
        mat(row, col) = psi.amplitudes(i);
    }
    return {keep, mat * mat.adjoint()};
}

}  // namespace cavent
