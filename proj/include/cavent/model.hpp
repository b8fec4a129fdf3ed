#pragma once

/**
 * @file model.hpp
 * @brief Hamiltonians of the two-cavity / four-level-atom system at three
 * levels of approximation, collapse operators and regime diagnostics.
 *
 * Every Hamiltonian is returned divided by hbar, in the frame rotating at the
 * cavity frequency times the conserved excitation number. The frame unitary is
 * diagonal in the Fock (x) atom basis, so populations and reduced spectra are
 * unaffected by it. Rates and times are in units of g and 1/g.
 */

#include "cavent/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavent {

enum class HamiltonianLevel { full, two_photon, effective };

inline const char* to_string(HamiltonianLevel h) {
    switch (h) {
        case HamiltonianLevel::full: return "full";
        case HamiltonianLevel::two_photon: return "two_photon";
        case HamiltonianLevel::effective: return "effective";
    }
    return "?";
}

/// Atomic factor dimension used by each Hamiltonian level.
inline int atom_dim_for(HamiltonianLevel h) {
    switch (h) {
        case HamiltonianLevel::full: return 4;
        case HamiltonianLevel::two_photon: return 2;
        case HamiltonianLevel::effective: return 1;
    }
    return 0;
}

struct ModelParams {
    double g = 1.0;
    double delta_1 = 20.0;      // Omega - omega_i1
    double delta_2 = 20.0;      // Omega - omega_i2
    double delta_small = 5.0;   // 2 Omega - omega_e
    double kappa = 0.0;         // cavity field decay per mode
    double gamma = 0.0;         // atomic decay
    int n_max = 2;

    void validate() const {
        if (!(g > 0.0)) throw std::invalid_argument("g must be > 0");
        if (n_max < 0) throw std::invalid_argument("n_max must be >= 0");
        if (!(kappa >= 0.0)) throw std::invalid_argument("kappa must be >= 0");
        if (!(gamma >= 0.0)) throw std::invalid_argument("gamma must be >= 0");
        if (delta_1 == 0.0 || delta_2 == 0.0 || delta_small == 0.0)
            throw std::invalid_argument("detunings delta_1, delta_2, delta_small must be nonzero");
        if (!std::isfinite(delta_1) || !std::isfinite(delta_2) || !std::isfinite(delta_small) || !std::isfinite(g) ||
            !std::isfinite(kappa) || !std::isfinite(gamma))
            throw std::invalid_argument("model parameters must be finite");
    }

    bool degenerate_detuning() const { return delta_1 == delta_2; }

    /// Delta used by the regime ratios: the smaller intermediate detuning.
    double delta_min() const { return std::min(std::abs(delta_1), std::abs(delta_2)); }

    /// Two-photon coupling lambda = g^2 / Delta. Requires equal detunings.
    double lambda() const {
        require_degenerate("lambda");
        return g * g / delta_1;
    }

    /// Effective mode-mode rate lambda^2 / delta.
    double effective_rate() const { return lambda() * lambda() / delta_small; }

    void require_degenerate(const char* what) const {
        if (!degenerate_detuning())
            throw std::invalid_argument(std::string(what) + " needs delta_1 == delta_2");
    }
};

inline void require_atom_dim(const HilbertSpace& space, int expected, const char* what) {
    if (space.atom_dim() != expected)
        throw std::invalid_argument(std::string(what) + " needs atom_dim " + std::to_string(expected) + ", got " +
                                    std::to_string(space.atom_dim()));
}

/// -D1 P_i1 - D2 P_i2 - delta P_e + g(|g><i1|a^dag + |i1><e|a^dag + |g><i2|b^dag + |i2><e|b^dag + h.c.)
inline OperatorMatrix full_hamiltonian(const ModelParams& p, const HilbertSpace& space) {
    p.validate();
    require_atom_dim(space, 4, "full_hamiltonian");
    const auto ad = creator(space, Mode::a);
    const auto bd = creator(space, Mode::b);
    const auto T = [&](Level to, Level from) { return atomic_transition(space, to, from); };

    CMatrix h = -p.delta_1 * T(Level::i1, Level::i1).entries - p.delta_2 * T(Level::i2, Level::i2).entries -
                p.delta_small * T(Level::e, Level::e).entries;
    const CMatrix up = T(Level::g, Level::i1).entries * ad.entries + T(Level::i1, Level::e).entries * ad.entries +
                       T(Level::g, Level::i2).entries * bd.entries + T(Level::i2, Level::e).entries * bd.entries;
    h += p.g * (up + up.adjoint());
    return {space, h, true};
}

/// 2 lambda (a^dag a + b^dag b) - delta P_e + lambda(|g><e|(a^dag^2 + b^dag^2) + h.c.)
inline OperatorMatrix two_photon_hamiltonian(const ModelParams& p, const HilbertSpace& space) {
    p.validate();
    require_atom_dim(space, 2, "two_photon_hamiltonian");
    p.require_degenerate("two_photon_hamiltonian");
    const double lam = p.lambda();
    const auto ad = creator(space, Mode::a).entries;
    const auto bd = creator(space, Mode::b).entries;
    const auto ge = atomic_transition(space, Level::g, Level::e).entries;

    CMatrix h = 2.0 * lam * (number_operator(space, Mode::a).entries + number_operator(space, Mode::b).entries) -
                p.delta_small * projector(space, Level::e).entries;
    const CMatrix down = ge * (ad * ad + bd * bd);
    h += lam * (down + down.adjoint());
    return {space, h, true};
}

/// (lambda^2/delta)(a^dag^2 a^2 + b^dag^2 b^2 + a^dag^2 b^2 + b^dag^2 a^2), modes only.
inline OperatorMatrix effective_hamiltonian(const ModelParams& p, const HilbertSpace& space) {
    p.validate();
    require_atom_dim(space, 1, "effective_hamiltonian");
    p.require_degenerate("effective_hamiltonian");
    const auto a = annihilator(space, Mode::a).entries;
    const auto b = annihilator(space, Mode::b).entries;
    const CMatrix a2 = a * a;
    const CMatrix b2 = b * b;
    CMatrix h = a2.adjoint() * a2 + b2.adjoint() * b2 + a2.adjoint() * b2 + b2.adjoint() * a2;
    h *= p.effective_rate();
    return {space, h, true};
}

inline OperatorMatrix hamiltonian(HamiltonianLevel level, const ModelParams& p, const HilbertSpace& space) {
    switch (level) {
        case HamiltonianLevel::full: return full_hamiltonian(p, space);
        case HamiltonianLevel::two_photon: return two_photon_hamiltonian(p, space);
        case HamiltonianLevel::effective: return effective_hamiltonian(p, space);
    }
    throw std::invalid_argument("unknown Hamiltonian level");
}

/// sqrt(kappa) a, sqrt(kappa) b, plus atomic cascade channels when gamma > 0.
inline std::vector<OperatorMatrix> collapse_operators(const ModelParams& p, const HilbertSpace& space) {
    std::vector<OperatorMatrix> ops;
    if (p.kappa > 0.0) {
        ops.push_back(std::sqrt(p.kappa) * annihilator(space, Mode::a));
        ops.push_back(std::sqrt(p.kappa) * annihilator(space, Mode::b));
    }
    if (p.gamma > 0.0) {
        const double s = std::sqrt(p.gamma);
        if (space.atom_dim() == 4) {
            ops.push_back(s * atomic_transition(space, Level::g, Level::i1));
            ops.push_back(s * atomic_transition(space, Level::g, Level::i2));
            ops.push_back(s * atomic_transition(space, Level::i1, Level::e));
            ops.push_back(s * atomic_transition(space, Level::i2, Level::e));
        } else if (space.atom_dim() == 2) {
            ops.push_back(s * atomic_transition(space, Level::g, Level::e));
        }
    }
    for (auto& op : ops) op.hermitian = false;
    return ops;
}

/// A "much greater than" condition counts as satisfied at this ratio.
inline constexpr double regime_threshold = 4.0;

struct RegimeReport {
    double ratio_Delta_over_g = 0;
    double ratio_Delta_over_delta = 0;
    double ratio_delta_over_lambda = 0;
    double ratio_lambda2_over_delta_vs_kappa = 0;
    double ratio_lambda2_over_delta_vs_gamma = 0;

    static bool passes(double r) { return r >= regime_threshold; }
    bool Delta_over_g_ok() const { return passes(ratio_Delta_over_g); }
    bool Delta_over_delta_ok() const { return passes(ratio_Delta_over_delta); }
    bool delta_over_lambda_ok() const { return passes(ratio_delta_over_lambda); }
    bool kappa_ok() const { return passes(ratio_lambda2_over_delta_vs_kappa); }
    bool gamma_ok() const { return passes(ratio_lambda2_over_delta_vs_gamma); }

    /// Strong-detuning conditions under which the atom can be eliminated.
    bool adiabatic() const { return Delta_over_g_ok() && Delta_over_delta_ok() && delta_over_lambda_ok(); }
};

inline RegimeReport validate_regime(const ModelParams& p) {
    p.validate();
    const double big = p.delta_min();
    const double small = std::abs(p.delta_small);
    const double lam = p.g * p.g / big;
    const double rate = lam * lam / small;
    const double inf = std::numeric_limits<double>::infinity();

    RegimeReport r;
    r.ratio_Delta_over_g = big / p.g;
    r.ratio_Delta_over_delta = big / small;
    r.ratio_delta_over_lambda = small / lam;
    r.ratio_lambda2_over_delta_vs_kappa = p.kappa > 0.0 ? rate / p.kappa : inf;
    r.ratio_lambda2_over_delta_vs_gamma = p.gamma > 0.0 ? rate / p.gamma : inf;
    return r;
}

inline void print_regime(std::ostream& os, const RegimeReport& r, const char* prefix = "") {
    const auto line = [&](const char* name, double v, bool ok) {
        os << prefix << name << " = " << v << (ok ? "  ok" : "  VIOLATED") << '\n';
    };
    line("Delta/g", r.ratio_Delta_over_g, r.Delta_over_g_ok());
    line("Delta/delta", r.ratio_Delta_over_delta, r.Delta_over_delta_ok());
    line("delta/(g^2/Delta)", r.ratio_delta_over_lambda, r.delta_over_lambda_ok());
    line("(lambda^2/delta)/kappa", r.ratio_lambda2_over_delta_vs_kappa, r.kappa_ok());
    line("(lambda^2/delta)/gamma", r.ratio_lambda2_over_delta_vs_gamma, r.gamma_ok());
    os << prefix << "adiabatic elimination " << (r.adiabatic() ? "valid" : "NOT valid") << '\n';
}

/// Entangling time delta*pi/(8 lambda^2) = delta*pi*Delta^2/(8 g^4).
inline double t0(const ModelParams& p) {
    p.validate();
    p.require_degenerate("t0");
    const double lam = p.g * p.g / p.delta_1;
    return p.delta_small * std::numbers::pi / (8.0 * lam * lam);
}

/// Conserved excitation count of the initial basis state: photons plus atomic quanta.
inline int initial_excitations(Level atom, int m, int n) {
    const int q = atom == Level::g ? 0 : (atom == Level::e ? 2 : 1);
    return m + n + q;
}

}  // namespace cavent
