#include "cavent/hilbert.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace cavent;

TEST(HilbertSpace, Dimensions) {
    EXPECT_EQ(make_space(2, 4).dim(), 36);
    EXPECT_EQ(make_space(4, 4).dim(), 100);
    EXPECT_EQ(make_space(4, 1).dim(), 25);
    EXPECT_EQ(make_space(0, 2).dim(), 2);
}

TEST(HilbertSpace, RejectsBadAtomDim) {
    EXPECT_THROW(make_space(2, 3), std::invalid_argument);
    EXPECT_THROW(make_space(2, 0), std::invalid_argument);
    EXPECT_THROW(make_space(-1, 4), std::invalid_argument);
}

TEST(HilbertSpace, EncodeDecodeRoundTrip) {
    for (int atom_dim : {1, 2, 4})
        for (int n_max : {0, 1, 2, 4}) {
            const auto sp = make_space(n_max, atom_dim);
            std::vector<bool> seen(static_cast<std::size_t>(sp.dim()), false);
            for (int a = 0; a < atom_dim; ++a)
                for (int m = 0; m <= n_max; ++m)
                    for (int n = 0; n <= n_max; ++n) {
                        const auto idx = sp.encode(a, m, n);
                        ASSERT_LT(idx, static_cast<std::size_t>(sp.dim()));
                        EXPECT_FALSE(seen[idx]);
                        seen[idx] = true;
                        EXPECT_EQ(sp.decode(idx), (BasisLabel{a, m, n}));
                    }
        }
}

TEST(BasisState, IndexConvention) {
    const auto sp = make_space(2, 4);
    const auto psi = basis_state(sp, Level::g, 0, 2);
    EXPECT_EQ(psi[2], cplx(1.0));
    EXPECT_DOUBLE_EQ(psi.norm(), 1.0);
    EXPECT_EQ(basis_state(sp, Level::e, 0, 0)[27], cplx(1.0));
}

TEST(BasisState, Errors) {
    const auto sp = make_space(2, 4);
    EXPECT_THROW(basis_state(sp, Level::g, 4, 0), std::out_of_range);
    EXPECT_THROW(basis_state(sp, Level::g, 0, -1), std::out_of_range);
    EXPECT_THROW(basis_state(make_space(2, 2), Level::i1, 0, 0), std::invalid_argument);
    EXPECT_THROW(basis_state(make_space(2, 1), Level::e, 0, 0), std::invalid_argument);
    // two-level atom maps e to index 1
    EXPECT_EQ(basis_state(make_space(2, 2), Level::e, 0, 0)[9], cplx(1.0));
}

TEST(Annihilator, LadderElementsAndVacuum) {
    const auto sp = make_space(2, 4);
    const auto a = annihilator(sp, Mode::a);
    EXPECT_NEAR(std::abs(a.element(sp.encode(0, 1, 0), sp.encode(0, 2, 0)) - std::sqrt(2.0)), 0.0, 1e-15);
    for (int n = 0; n <= 2; ++n) EXPECT_NEAR(a.apply(basis_state(sp, Level::g, 0, n)).norm(), 0.0, 0.0);
    const auto b = annihilator(sp, Mode::b);
    EXPECT_NEAR(b.apply(basis_state(sp, Level::e, 2, 0)).norm(), 0.0, 0.0);
}

TEST(Annihilator, CommutatorIsIdentityBelowTruncation) {
    const auto sp = make_space(3, 2);
    for (Mode mode : {Mode::a, Mode::b}) {
        const auto a = annihilator(sp, mode);
        const auto c = commutator(a, a.adjoint());
        for (Eigen::Index i = 0; i < sp.dim(); ++i) {
            const auto l = sp.decode(static_cast<std::size_t>(i));
            const int k = mode == Mode::a ? l.m : l.n;
            for (Eigen::Index j = 0; j < sp.dim(); ++j) {
                const cplx expect = (i == j) ? cplx(k < sp.n_max() ? 1.0 : -static_cast<double>(sp.n_max())) : 0.0;
                EXPECT_NEAR(std::abs(c.entries(i, j) - expect), 0.0, 1e-13);
            }
        }
    }
}

TEST(Annihilator, NumberOperatorSpectrum) {
    const auto sp = make_space(3, 4);
    const auto num = number_operator(sp, Mode::a);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(num.entries);
    std::vector<int> counts(4, 0);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double ev = es.eigenvalues()(i);
        const long r = std::lround(ev);
        ASSERT_NEAR(ev, static_cast<double>(r), 1e-12);
        ++counts[static_cast<std::size_t>(r)];
    }
    for (int c : counts) EXPECT_EQ(c, 4 * 4);
}

TEST(AtomicTransition, ActionAndAdjoint) {
    const auto sp = make_space(2, 4);
    const auto gi = atomic_transition(sp, Level::g, Level::i1);
    EXPECT_NEAR((gi.apply(basis_state(sp, Level::i1, 0, 0)).amplitudes - basis_state(sp, Level::g, 0, 0).amplitudes)
                    .norm(),
                0.0, 0.0);
    EXPECT_EQ(gi.apply(basis_state(sp, Level::e, 0, 0)).norm(), 0.0);
    EXPECT_EQ((atomic_transition(sp, Level::e, Level::g).adjoint().entries -
               atomic_transition(sp, Level::g, Level::e).entries)
                  .norm(),
              0.0);
    EXPECT_THROW(atomic_transition(make_space(2, 2), Level::g, Level::i2), std::invalid_argument);
}

TEST(PartialTrace, ProductState) {
    const auto sp = make_space(2, 4);
    const auto r = partial_trace(DensityMatrix::pure(basis_state(sp, Level::g, 2, 0)), Subsystem::mode_a);
    CMatrix expect = CMatrix::Zero(3, 3);
    expect(2, 2) = 1.0;
    EXPECT_NEAR((r.entries - expect).norm(), 0.0, 1e-15);
}

TEST(PartialTrace, BellMarginal) {
    const auto sp = make_space(2, 4);
    const StateVector psi{sp, (basis_state(sp, Level::g, 0, 2).amplitudes + basis_state(sp, Level::g, 2, 0).amplitudes) /
                                  std::sqrt(2.0)};
    for (const auto& r : {partial_trace(psi, Subsystem::mode_a), partial_trace(DensityMatrix::pure(psi), Subsystem::mode_a)}) {
        EXPECT_NEAR(r.entries(0, 0).real(), 0.5, 1e-15);
        EXPECT_NEAR(r.entries(2, 2).real(), 0.5, 1e-15);
        EXPECT_NEAR(std::abs(r.entries(0, 2)), 0.0, 1e-15);
        EXPECT_NEAR(r.entries(1, 1).real(), 0.0, 1e-15);
    }
}

TEST(PartialTrace, MaximallyMixed) {
    const auto sp = make_space(4, 4);
    const DensityMatrix rho{sp, CMatrix::Identity(sp.dim(), sp.dim()) / static_cast<double>(sp.dim())};
    const auto r = partial_trace(rho, Subsystem::mode_a);
    EXPECT_NEAR((r.entries - CMatrix::Identity(5, 5) / 5.0).norm(), 0.0, 1e-14);
}

TEST(PartialTraceProperty, SchmidtSpectraAgree) {
    std::mt19937_64 rng(20240611);
    for (int trial = 0; trial < 50; ++trial) {
        const auto sp = make_space(1 + trial % 3, trial % 2 ? 4 : 2);
        const auto psi = test_support::random_state(sp, rng);
        const auto ra = partial_trace(psi, Subsystem::mode_a).entries;
        // Complement of mode a: build (atom, b) reduced state directly from amplitudes.
        const int env = sp.atom_dim() * sp.fock_dim();
        CMatrix rest = CMatrix::Zero(env, env);
        for (int m = 0; m <= sp.n_max(); ++m)
            for (int x = 0; x < env; ++x)
                for (int y = 0; y < env; ++y) {
                    const auto ix = sp.encode(x / sp.fock_dim(), m, x % sp.fock_dim());
                    const auto iy = sp.encode(y / sp.fock_dim(), m, y % sp.fock_dim());
                    rest(x, y) += psi[ix] * std::conj(psi[iy]);
                }
        auto ev_a = test_support::sorted_eigenvalues(ra);
        auto ev_r = test_support::sorted_eigenvalues(rest);
        const auto drop_small = [](std::vector<double>& v) {
            v.erase(std::remove_if(v.begin(), v.end(), [](double x) { return x < 1e-10; }), v.end());
        };
        drop_small(ev_a);
        drop_small(ev_r);
        ASSERT_EQ(ev_a.size(), ev_r.size());
        for (std::size_t i = 0; i < ev_a.size(); ++i) EXPECT_NEAR(ev_a[i], ev_r[i], 1e-10);
    }
}

TEST(PartialTraceProperty, TraceAndPositivityPreserved) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        const auto sp = make_space(2, trial % 3 == 0 ? 1 : (trial % 3 == 1 ? 2 : 4));
        const auto rho = test_support::random_density(sp, rng, 1 + trial % 4);
        for (Subsystem keep : {Subsystem::atom, Subsystem::mode_a, Subsystem::mode_b}) {
            const auto r = partial_trace(rho, keep);
            EXPECT_NEAR(r.trace(), rho.trace(), 1e-10);
            EXPECT_GE(test_support::sorted_eigenvalues(r.entries).front(), -1e-12);
            EXPECT_NEAR((r.entries - r.entries.adjoint()).norm(), 0.0, 1e-12);
        }
    }
}

TEST(PartialTraceProperty, PureAndMixedPathsAgree) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        const auto sp = make_space(2, 4);
        const auto psi = test_support::random_state(sp, rng);
        for (Subsystem keep : {Subsystem::atom, Subsystem::mode_a, Subsystem::mode_b})
            EXPECT_NEAR((partial_trace(psi, keep).entries - partial_trace(DensityMatrix::pure(psi), keep).entries).norm(),
                        0.0, 1e-13);
    }
}

TEST(ExcitationOperator, Diagonal) {
    const auto sp = make_space(2, 4);
    const auto N = excitation_operator(sp);
    EXPECT_DOUBLE_EQ(N.element(sp.encode(3, 0, 0), sp.encode(3, 0, 0)).real(), 2.0);
    EXPECT_DOUBLE_EQ(N.element(sp.encode(1, 1, 0), sp.encode(1, 1, 0)).real(), 2.0);
    EXPECT_DOUBLE_EQ(N.element(sp.encode(0, 0, 2), sp.encode(0, 0, 2)).real(), 2.0);
}
