#pragma once

/**
 * @file oracle.hpp
 * @brief Closed-form solutions of the effective mode-mode Hamiltonian on its
 * two- and three-dimensional invariant subspaces.
 *
 * Nothing here touches the Hilbert-space machinery or the propagators: the
 * 2x2 and 3x3 problems are diagonalised by hand so that agreement with the
 * general-purpose simulator is independent evidence.
 *
 * Restricted to span{|2,0>, |0,2>} the effective Hamiltonian reads
 *     (lambda^2/delta) [[2, 2], [2, 2]],
 * and restricted to span{|4,0>, |2,2>, |0,4>}
 *     (lambda^2/delta) [[12, 2 sqrt6, 0], [2 sqrt6, 4, 2 sqrt6], [0, 2 sqrt6, 12]].
 * The latter splits into the antisymmetric vector (|4,0> - |0,4>)/sqrt2 at
 * 12 lambda^2/delta and a 2x2 symmetric block on {(|4,0> + |0,4>)/sqrt2, |2,2>}
 * with entries [[12, 4 sqrt3], [4 sqrt3, 4]], eigenvalues 0 and 16.
 */

#include "cavent/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace cavent::oracle {

using Amplitude = std::complex<double>;

struct SubspaceSolution {
    std::vector<double> times;
    std::vector<std::pair<int, int>> basis;           // (m, n) photon labels
    std::vector<std::vector<Amplitude>> amplitudes;   // amplitudes[k][j] at times[k] on basis[j]

    double population(std::size_t k, std::size_t j) const { return std::norm(amplitudes[k][j]); }
};

namespace detail {

inline double rate(const ModelParams& p) {
    if (p.delta_1 != p.delta_2) throw std::invalid_argument("oracle needs delta_1 == delta_2");
    const double lam = p.g * p.g / p.delta_1;
    return lam * lam / p.delta_small;
}

/// Eigen-pairs of the real symmetric matrix [[a, b], [b, c]].
struct Sym2Eigen {
    std::array<double, 2> values;
    std::array<std::array<double, 2>, 2> vectors;  // vectors[i] is the i-th eigenvector
};

inline Sym2Eigen eig_sym2(double a, double b, double c) {
    const double mean = 0.5 * (a + c);
    const double half = 0.5 * (a - c);
    const double r = std::hypot(half, b);
    Sym2Eigen out{};
    out.values = {mean - r, mean + r};
    // Rotation angle theta with tan(2 theta) = 2b / (a - c).
    const double theta = 0.5 * std::atan2(b, half);
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    out.vectors[1] = {cs, sn};   // mean + r
    out.vectors[0] = {-sn, cs};  // mean - r
    return out;
}

}  // namespace detail

/// Initial |2,0>: amplitude on |0,2> is -i e^{-2i chi t} sin(2 chi t), chi = lambda^2/delta.
inline SubspaceSolution rabi_two_level(const ModelParams& p, const std::vector<double>& times) {
    const double chi = detail::rate(p);
    SubspaceSolution sol;
    sol.times = times;
    sol.basis = {{2, 0}, {0, 2}};
    const Amplitude i{0.0, 1.0};
    for (double t : times) {
        const double theta = 2.0 * chi * t;
        const Amplitude phase = std::exp(-i * theta);
        sol.amplitudes.push_back({phase * std::cos(theta), -i * phase * std::sin(theta)});
    }
    return sol;
}

/// Eigenvalues of the three-level block in units of lambda^2/delta, ascending.
inline std::array<double, 3> three_level_spectrum() {
    const auto sym = detail::eig_sym2(12.0, 4.0 * std::sqrt(3.0), 4.0);
    std::array<double, 3> ev{sym.values[0], sym.values[1], 12.0};
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Exact evolution inside span{|4,0>, |2,2>, |0,4>}; defaults to starting in |4,0>.
inline SubspaceSolution three_level(const ModelParams& p, const std::vector<double>& times,
                                    std::array<Amplitude, 3> initial = {1.0, 0.0, 0.0}) {
    const double chi = detail::rate(p);
    const double r2 = std::sqrt(0.5);
    const auto sym = detail::eig_sym2(12.0, 4.0 * std::sqrt(3.0), 4.0);

    // Coordinates: s = (c40 + c04)/sqrt2, c22, a = (c40 - c04)/sqrt2.
    const Amplitude s0 = r2 * (initial[0] + initial[2]);
    const Amplitude m0 = initial[1];
    const Amplitude a0 = r2 * (initial[0] - initial[2]);
    std::array<Amplitude, 2> proj{};
    for (int j = 0; j < 2; ++j) proj[j] = sym.vectors[j][0] * s0 + sym.vectors[j][1] * m0;

    SubspaceSolution sol;
    sol.times = times;
    sol.basis = {{4, 0}, {2, 2}, {0, 4}};
    const Amplitude i{0.0, 1.0};
    for (double t : times) {
        Amplitude s{}, mid{};
        for (int j = 0; j < 2; ++j) {
            const Amplitude c = proj[j] * std::exp(-i * sym.values[j] * chi * t);
            s += c * sym.vectors[j][0];
            mid += c * sym.vectors[j][1];
        }
        const Amplitude a = a0 * std::exp(-i * 12.0 * chi * t);
        sol.amplitudes.push_back({r2 * (s + a), mid, r2 * (s - a)});
    }
    return sol;
}

/// delta pi / (8 lambda^2), written out independently of model::t0.
inline double predicted_t0(const ModelParams& p) {
    if (p.delta_1 != p.delta_2) throw std::invalid_argument("oracle needs delta_1 == delta_2");
    const double lam = p.g * p.g / p.delta_1;
    return p.delta_small * std::numbers::pi / (8.0 * lam * lam);
}

}  // namespace cavent::oracle
