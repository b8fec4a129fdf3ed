#pragma once

// Observables evaluated along a trajectory: Fock populations (summed over the
// atom), atomic ground-state probability, base-2 entropy of mode a, the
// phase-optimised Bell fidelity and the excitation number.

#include "cavent/hilbert.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <utility>

namespace cavent {

using PhotonLabel = std::pair<int, int>;
using PopulationMap = std::map<PhotonLabel, double>;

struct ObservableRecord {
    double t = 0.0;
    PopulationMap pop;
    double p_ground = 1.0;
    double entropy_bits = 0.0;
    std::optional<double> bell_fidelity;
    double n_expect = 0.0;
    std::optional<double> trace;  // mixed states only

    double population(int m, int n) const {
        const auto it = pop.find({m, n});
        return it == pop.end() ? 0.0 : it->second;
    }
};

namespace detail {

inline double diag_weight(const StateVector& psi, std::size_t i) { return std::norm(psi[i]); }
inline double diag_weight(const DensityMatrix& rho, std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    return rho.entries(k, k).real();
}

template <class State>
PopulationMap photon_populations(const State& s) {
    const auto& sp = s.space;
    PopulationMap pop;
    for (int m = 0; m <= sp.n_max(); ++m)
        for (int n = 0; n <= sp.n_max(); ++n) {
            double p = 0.0;
            for (int alpha = 0; alpha < sp.atom_dim(); ++alpha) p += diag_weight(s, sp.encode(alpha, m, n));
            pop[{m, n}] = p;
        }
    return pop;
}

template <class State>
double atom_ground_probability(const State& s) {
    const auto& sp = s.space;
    if (sp.atom_dim() == 1) return 1.0;
    double p = 0.0;
    for (int m = 0; m <= sp.n_max(); ++m)
        for (int n = 0; n <= sp.n_max(); ++n) p += diag_weight(s, sp.encode(0, m, n));
    return p;
}

template <class State>
double excitation_number(const State& s) {
    const auto& sp = s.space;
    double total = 0.0;
    for (Eigen::Index i = 0; i < sp.dim(); ++i) {
        const auto l = sp.decode(static_cast<std::size_t>(i));
        total += (l.m + l.n + sp.atom_excitation(l.atom)) * diag_weight(s, static_cast<std::size_t>(i));
    }
    return total;
}

inline void check_bell_m(const HilbertSpace& sp, int m) {
    if (m < 1 || m > sp.n_max())
        throw std::out_of_range("Bell target photon number " + std::to_string(m) + " outside [1, " +
                                std::to_string(sp.n_max()) + "]");
}

}  // namespace detail

inline PopulationMap photon_populations(const StateVector& psi) { return detail::photon_populations(psi); }
inline PopulationMap photon_populations(const DensityMatrix& rho) { return detail::photon_populations(rho); }

/// Probability of |g> regardless of the photons. Always 1 on the modes-only space.
inline double atom_ground_probability(const StateVector& psi) { return detail::atom_ground_probability(psi); }
inline double atom_ground_probability(const DensityMatrix& rho) { return detail::atom_ground_probability(rho); }

inline double excitation_number(const StateVector& psi) { return detail::excitation_number(psi); }
inline double excitation_number(const DensityMatrix& rho) { return detail::excitation_number(rho); }

/// Base-2 von Neumann entropy; eigenvalues below 1e-12 contribute nothing.
inline double von_neumann_entropy_bits(const CMatrix& rho) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho, Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double lam = es.eigenvalues()(i);
        if (lam > 1e-12) s -= lam * std::log2(lam);
    }
    return s;
}

/// Entropy of mode a with the atom and mode b traced out. For decaying
/// (mixed) states this is the entropy of the marginal, not an entanglement
/// measure.
inline double entanglement_entropy(const StateVector& psi) {
    return von_neumann_entropy_bits(partial_trace(psi, Subsystem::mode_a).entries);
}
inline double entanglement_entropy(const DensityMatrix& rho) {
    return von_neumann_entropy_bits(partial_trace(rho, Subsystem::mode_a).entries);
}

/// max over phi of <Phi_phi|rho|Phi_phi>, |Phi_phi> = |g>(|m,0> + e^{i phi}|0,m>)/sqrt(2).
inline double bell_fidelity(const StateVector& psi, int m) {
    const auto& sp = psi.space;
    detail::check_bell_m(sp, m);
    const cplx x = psi[sp.encode(0, m, 0)];
    const cplx y = psi[sp.encode(0, 0, m)];
    return 0.5 * (std::norm(x) + std::norm(y)) + std::abs(x) * std::abs(y);
}

inline double bell_fidelity(const DensityMatrix& rho, int m) {
    const auto& sp = rho.space;
    detail::check_bell_m(sp, m);
    const auto i = static_cast<Eigen::Index>(sp.encode(0, m, 0));
    const auto j = static_cast<Eigen::Index>(sp.encode(0, 0, m));
    return 0.5 * (rho.entries(i, i).real() + rho.entries(j, j).real()) + std::abs(rho.entries(i, j));
}

template <class State>
ObservableRecord observe(const State& s, double t, std::optional<int> bell_m) {
    ObservableRecord r;
    r.t = t;
    r.pop = photon_populations(s);
    r.p_ground = atom_ground_probability(s);
    r.entropy_bits = entanglement_entropy(s);
    if (bell_m) r.bell_fidelity = bell_fidelity(s, *bell_m);
    r.n_expect = excitation_number(s);
    if constexpr (std::is_same_v<State, DensityMatrix>) r.trace = s.trace();
    return r;
}

}  // namespace cavent
