#include "lgcy/genus.hpp"
#include "lgcy/lg.hpp"
#include "lgcy/n2.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lgcy;
using namespace lgcy::ff;

namespace {

State st(std::vector<Mode> modes) { return State::from_modes(modes); }

Mode mx(int i, int l = 1) { return {Kind::x, i, l}; }
Mode mdelx(int i, int l = 1) { return {Kind::del_x, i, l}; }
Mode mdx(int i, int l = 1) { return {Kind::dx, i, l}; }
Mode mdeldx(int i, int l = 1) { return {Kind::del_dx, i, l}; }

State times(const Rational& c, const State& v) { return c * v; }

// [a, b] with a of parity pa and b of parity pb, as a difference of compositions.
State graded_commutator(const State& ab, const State& ba, bool pa, bool pb) {
    State r = ab;
    r.add(ba, (pa && pb) ? 1 : -1);
    return r;
}

}  // namespace

TEST(ModeApply, AnnihilationPairsWithCreation) {
    Engine E;
    EXPECT_EQ(E.apply(Field::del_x(0), 0, st({mx(0)})), State::vacuum());
    // the odd pair anticommutes to one as well
    EXPECT_EQ(E.apply(Field::del_dx(0), 0, st({mdx(0)})), State::vacuum());
    EXPECT_TRUE(E.apply(Field::del_x(1), 0, st({mx(0)})).is_zero());
}

TEST(ModeApply, AnnihilatorsKillVacuum) {
    Engine E;
    for (Kind k : all_kinds)
        for (int i = 0; i < 3; ++i)
            for (long n = 0; n <= 3; ++n) EXPECT_TRUE(E.apply(Field::gen(k, i), n, State::vacuum()).is_zero());
}

TEST(ModeApply, NormalOrderedProductZeroMode) {
    Engine E;
    Field f = nop(Field::dx(0), Field::del_x(0));
    EXPECT_EQ(E.apply(f, 0, st({mx(0)})), st({mdx(0)}));
}

TEST(ModeApply, FermionsSquareToZero) {
    Engine E;
    State v = E.apply(Field::dx(0), -1, st({mdx(0)}));
    EXPECT_TRUE(v.is_zero());
    // reordering two odd creators costs a sign
    EXPECT_EQ(st({mdx(0), mdx(1)}), times(-1, st({mdx(1), mdx(0)})));
}

TEST(ModeApply, CanonicalFormIsOrderIndependentForBosons) {
    EXPECT_EQ(st({mx(0), mdelx(1, 2), mx(0, 3)}), st({mx(0, 3), mx(0), mdelx(1, 2)}));
}

TEST(Ope, CentralTermOfJJ) {
    Engine E;
    auto s = msv1(1);
    State jj = ope_state(E, s.J, 1, s.J);
    EXPECT_EQ(jj, State::vacuum());  // C/3 = 1
    EXPECT_TRUE(ope_state(E, s.J, 2, s.J).is_zero());
}

TEST(Ope, QGProducesLAndJ) {
    Engine E;
    for (auto s : {lg(1, 3), lg(2, 3), lg(2, 4)}) {
        State L = E.apply(s.L, -1, State::vacuum());
        State J = E.apply(s.J, -1, State::vacuum());
        EXPECT_EQ(ope_state(E, s.Q, 0, s.G), L) << s.name << " N=" << s.N << " p=" << s.p;
        EXPECT_EQ(ope_state(E, s.Q, 1, s.G), times(-1, J)) << s.name << " N=" << s.N << " p=" << s.p;
    }
}

TEST(Ope, JZeroModesCommute) {
    Engine E;
    auto s = lg(2, 3);
    for (auto& m : monomials_by_level(2, 2)) {
        State v = State::of(m);
        EXPECT_EQ(commutator(E, s.J, 0, s.J, 0, v), State{});
    }
}

TEST(N2, DeRhamStructureN2) {
    auto rep = verify_n2(msv1(2), 2, 2);
    ASSERT_TRUE(rep.pass) << rep.witness->pair << " on " << rep.witness->state;
    EXPECT_EQ(rep.c_from_jj, 6);
    EXPECT_EQ(rep.c_from_qg, 6);
}

TEST(N2, PolyvectorStructureN1) {
    auto rep = verify_n2(msv2(1), 2, 2);
    ASSERT_TRUE(rep.pass) << rep.witness->pair;
    EXPECT_EQ(rep.c_from_jj, 3);
}

TEST(N2, LandauGinzburgCentralCharge) {
    // C = 3 N (p - 2) / p
    for (auto [N, p] : std::vector<std::pair<int, int>>{{1, 3}, {1, 4}, {2, 3}, {2, 2}}) {
        auto rep = verify_n2(lg(N, p), 2, 2);
        ASSERT_TRUE(rep.pass) << "N=" << N << " p=" << p << ": " << rep.witness->pair;
        EXPECT_EQ(rep.c_from_jj, rat(3 * N * (p - 2), p));
        EXPECT_EQ(rep.c_from_jj, rep.c_from_qg);
    }
}

TEST(N2, BrokenStructureGivesWitness) {
    auto s = lg(1, 3);
    s.Q = Rational(2) * s.Q;
    auto rep = verify_n2(s, 1, 1);
    EXPECT_FALSE(rep.pass);
    ASSERT_TRUE(rep.witness.has_value());
    EXPECT_FALSE(rep.witness->pair.empty());
}

TEST(Translation, GeneratorsShift) {
    Engine E;
    Field T = msv1(1).L;
    // [T, x_(-1)] |0> = x_(-2) |0>
    EXPECT_EQ(commutator(E, T, 0, Field::x(0), -1, State::vacuum()), st({mx(0, 2)}));
    EXPECT_TRUE(commutator(E, T, 0, Field::dx(0), 1, State::vacuum()).is_zero());
    auto rep = verify_translation(2, 2, 2);
    EXPECT_TRUE(rep.pass) << *rep.witness;
    EXPECT_GT(rep.checks, 0u);
}

TEST(Borcherds, RandomPairs) {
    auto rep = borcherds_audit(2, 20, 1, 2, 7);
    EXPECT_TRUE(rep.pass) << *rep.witness;
    EXPECT_EQ(rep.pairs, 20u);
}

TEST(DLG, Examples) {
    LGModel M1(HomogeneousPoly::fermat(1, 2));
    EXPECT_TRUE(M1.d_lg(0, State::vacuum()).is_zero());
    EXPECT_EQ(M1.d_lg(0, st({mdeldx(0)})), times(2, st({mx(0)})));
}

TEST(DLG, KillsN2Generators) {
    for (auto [N, p] : std::vector<std::pair<int, int>>{{1, 3}, {2, 3}, {3, 3}}) {
        LGModel M(HomogeneousPoly::fermat(N, p));
        for (char w : {'G', 'Q', 'J', 'L'}) {
            State a = M.engine().apply(M.structure().get(w), -1, State::vacuum());
            EXPECT_TRUE(M.d_lg(0, a).is_zero()) << w << " N=" << N << " p=" << p;
        }
    }
}

TEST(DLG, SquaresToZeroInEverySector) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    for (int j = 0; j < 3; ++j)
        for (auto& b : cohomology_dims(M, j, 1, M.vacuum_grade(j).second - 2, false))
            EXPECT_TRUE(b.d_squared_zero) << "sector " << j << " block (" << b.w << "," << b.m << ")";
}

TEST(DLG, SupercommutesWithN2Modes) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    for (int j = 0; j < 2; ++j) {
        auto states = M.enumerate(j, 1, M.vacuum_grade(j).second - 2);
        for (char w : {'G', 'Q', 'J', 'L'}) {
            bool odd = M.structure().get(w).odd();
            for (long r = -1; r <= 1; ++r)
                for (auto& m : states) {
                    State v = State::of(m);
                    State dA = M.d_lg(j, M.mode(w, j, r, v));
                    State Ad = M.mode(w, j, r, M.d_lg(j, v));
                    EXPECT_TRUE(graded_commutator(dA, Ad, true, odd).is_zero())
                        << w << "_(" << r << ") sector " << j << " on " << m.str();
                }
        }
    }
}

TEST(Basis, SectorZeroExamples) {
    LGModel M(HomogeneousPoly::fermat(1, 3));
    auto b0 = M.basis(0, 0, 0);
    ASSERT_EQ(b0.size(), 1u);
    EXPECT_TRUE(b0[0].is_vacuum());
    // x has J-charge -1/p; below p-1 the x-power is alone in its block
    for (int k = 1; k < 2; ++k) {
        auto b = M.basis(0, 0, rat(-k, 3));
        ASSERT_EQ(b.size(), 1u);
        Monomial xk;
        for (int i = 0; i < k; ++i) xk.insert(Kind::x, 0, 1);
        EXPECT_EQ(b[0], xk);
    }
    // from k = p-1 on, x^{k-p+1} dx shares the block
    auto b2 = M.basis(0, 0, rat(-2, 3));
    EXPECT_EQ(b2.size(), 2u);
}

TEST(Basis, TwistedSectorsAreOneDimensionalAfterProjection) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    for (int i = 1; i < 3; ++i) {
        size_t tot = 0;
        for (auto& b : cohomology_dims(M, i, 0, M.vacuum_grade(i).second - 3, true)) tot += b.dim_H();
        EXPECT_EQ(tot, 1u) << "sector " << i;
    }
}

TEST(ZN, ProjectExamples) {
    EXPECT_EQ(zn_project(State::vacuum(), 2), State::vacuum());
    EXPECT_TRUE(zn_project(st({mx(0)}), 2).is_zero());
    State xx = st({mx(0), mx(1)});
    EXPECT_EQ(zn_project(xx, 2), xx);
}

TEST(ZN, ProjectionEqualsGroupAverage) {
    std::mt19937_64 rng(11);
    for (int N : {2, 3, 4}) {
        auto monos = monomials_by_level(N == 4 ? 2 : N, 2);
        for (int trial = 0; trial < 20; ++trial) {
            State v;
            for (int t = 0; t < 6; ++t) v.add(monos[rng() % monos.size()], Rational(long(rng() % 7) - 3));
            EXPECT_EQ(zn_project(v, N), zn_average(v, N)) << "N=" << N;
        }
    }
}

TEST(ZN, ProjectionCommutesWithDifferentialAndModes) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    auto monos = M.enumerate(0, 1, -2);
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        State v;
        for (int t = 0; t < 4; ++t) v.add(monos[rng() % monos.size()], Rational(long(rng() % 5) + 1));
        EXPECT_EQ(zn_project(M.d_lg(0, v), 3), M.d_lg(0, zn_project(v, 3)));
        for (char w : {'G', 'Q', 'J', 'L'})
            for (long r = -1; r <= 1; ++r)
                EXPECT_EQ(zn_project(M.mode(w, 0, r, v), 3), M.mode(w, 0, r, zn_project(v, 3)));
    }
}

TEST(Cohomology, CubicInThreeVariablesMatchesMilnorRing) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    size_t tot = 0;
    for (auto& b : cohomology_dims(M, 0, 0, -2, false)) tot += b.dim_H();
    EXPECT_EQ(tot, 8u);
}

TEST(Cohomology, OneVariableHasPMinusOneClasses) {
    for (int p = 2; p <= 6; ++p) {
        LGModel M(HomogeneousPoly::fermat(1, p));
        std::map<Rational, size_t> by_charge;
        for (auto& b : cohomology_dims(M, 0, 0, -2, false))
            if (b.dim_H()) by_charge[b.m] += b.dim_H();
        // representatives 1, x, ..., x^{p-2} at charges -k/p
        std::map<Rational, size_t> want;
        for (int k = 0; k <= p - 2; ++k) want[rat(-k, p)] = 1;
        EXPECT_EQ(by_charge, want) << "p=" << p;
    }
}

TEST(Cohomology, KunnethForTwoVariables) {
    using Table = std::map<std::pair<Rational, Rational>, size_t>;
    auto table = [](int N, const Rational& mlo) {
        LGModel M(HomogeneousPoly::fermat(N, 3));
        Table t;
        for (auto& b : cohomology_dims(M, 0, 1, mlo, false))
            if (b.dim_H()) t[{b.w, b.m}] = b.dim_H();
        return t;
    };
    Table one = table(1, -5), two = table(2, -2);
    Table prod;
    for (auto& [a, da] : one)
        for (auto& [b, db] : one) {
            Rational w = a.first + b.first, m = a.second + b.second;
            if (w <= 1 && m >= -2) prod[{w, m}] += da * db;
        }
    EXPECT_EQ(two, prod);
}

TEST(SpectralFlow, IdentityAndGradingShifts) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    SectorState s{1, st({mx(0)})};
    EXPECT_EQ(spectral_flow_map(0, s).j, 1);
    EXPECT_EQ(spectral_flow_map(0, s).v, s.v);
    const Rational c3(1);
    for (int j = 1; j < 3; ++j)
        for (auto& m : M.enumerate(0, 1, -2)) {
            auto [w0, m0] = M.measure(0, m);
            auto [wj, mj] = M.measure(j, m);
            EXPECT_EQ(mj, m0 - c3 * j);
            EXPECT_EQ(wj, w0 - Rational(j) * m0 + rat(j * (j - 1), 2) * c3);
        }
}

// Q index +j, G index -j, J and L shifted by the charge and central term.
TEST(SpectralFlow, ConjugatesN2Modes) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    const Rational c3(1);
    for (int j = 1; j < 3; ++j) {
        auto states = M.enumerate(j, 1, M.vacuum_grade(j).second - 2);
        for (long r = -1; r <= 1; ++r)
            for (auto& m : states) {
                State v = State::of(m);
                EXPECT_EQ(M.mode('Q', j, r, v), M.mode('Q', 0, r + j, v));
                EXPECT_EQ(M.mode('G', j, r, v), M.mode('G', 0, r - j, v));
                State J = M.mode('J', 0, r, v);
                if (r == 0) J.add(v, -c3 * j);
                EXPECT_EQ(M.mode('J', j, r, v), J);
                State L = M.mode('L', 0, r, v);
                L.add(M.mode('J', 0, r - 1, v), -j);
                if (r == 1) L.add(v, rat(j * (j - 1), 2) * c3);
                EXPECT_EQ(M.mode('L', j, r, v), L) << "sector " << j << " r=" << r << " on " << m.str();
            }
    }
}

TEST(SpectralFlow, IntertwinesDifferential) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    for (auto& m : M.enumerate(0, 1, -2)) {
        for (int dj = 1; dj < 3; ++dj) {
            SectorState s = spectral_flow_map(dj, {0, State::of(m)});
            EXPECT_EQ(M.d_lg(s.j, s.v), M.d_lg(0, State::of(m)));
        }
    }
}

TEST(Character, WeightZeroRowIsMilnorPoincare) {
    for (auto [N, p] : std::vector<std::pair<int, int>>{{1, 3}, {1, 5}, {2, 3}}) {
        LGModel M(HomogeneousPoly::fermat(N, p));
        Rational ylo = -2;
        auto eu = character(M, 0, 0, ylo, TraceMode::eu, false);
        MilnorRing R(HomogeneousPoly::fermat(N, p));
        auto dims = R.poincare();
        for (auto& [q, y, c] : eu.terms()) {
            ASSERT_EQ(q, 0);
            Rational d = -y * p;
            long want = (is_integer(d) && d >= 0 && d < long(dims.size())) ? long(dims[size_t(to_long(d))]) : 0;
            EXPECT_EQ(c, Cyclotomic(c.order(), want)) << "N=" << N << " p=" << p << " y^" << y;
        }
        for (size_t d = 0; d < dims.size(); ++d)
            EXPECT_EQ(eu.coeff(0, rat(-long(d), p)), Cyclotomic(eu.order(), long(dims[d])));
    }
}

TEST(Character, SectorTraceMatchesClosedForm) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    for (int j = 0; j < 3; ++j) {
        Rational ylo = M.vacuum_grade(j).second - 3;
        Window w = Window::box(Rational(1), ylo, Rational(6));
        auto brute = character(M, j, 1, ylo, TraceMode::eu, false).restricted(w);
        auto closed = genus::sector_eu(3, j, 1, w);
        EXPECT_FALSE(PuiseuxSeries::first_difference(brute, closed, w).has_value()) << "sector " << j;
    }
}

TEST(Character, EulerInvariantBlockByBlock) {
    LGModel M(HomogeneousPoly::fermat(2, 3));
    for (auto& b : cohomology_dims(M, 0, 2, -2, false)) EXPECT_EQ(b.euler(), b.euler_H());
}

TEST(Twist, FractionalIndexRaises) {
    LGModel M(HomogeneousPoly::fermat(3, 3));
    EXPECT_THROW(M.mode('J', 1, rat(1, 2), State::vacuum()), TwistMismatch);
    EXPECT_NO_THROW(M.mode('J', 1, 0, State::vacuum()));
}

TEST(Twist, SectorsNeedCalabiYauDegree) {
    LGModel M(HomogeneousPoly::fermat(2, 3));
    EXPECT_THROW(M.check_sector(1), std::invalid_argument);
}
