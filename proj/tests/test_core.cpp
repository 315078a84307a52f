#include "lgcy/factors.hpp"
#include "lgcy/io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace lgcy;

namespace {

Cyclotomic Z(int m, long k) { return Cyclotomic::zeta_pow(m, k); }
Cyclotomic C(int m, long v) { return Cyclotomic(m, v); }

PuiseuxSeries poly(int m, int D, std::initializer_list<std::tuple<Rational, Rational, long>> ts) {
    PuiseuxSeries s(m, D);
    Support sup = Support::none();
    for (auto& [q, y, c] : ts) {
        s.add_term(q, y, C(m, c));
        sup = Support::join(sup, Support::point(q, y));
    }
    s.set_support(sup);
    return s;
}

// evaluate sum over l directly as complex-free check: collect c * zeta^k
Cyclotomic naive_root_sum(int m, long j) {
    std::vector<Rational> p(m);
    for (long l = 0; l < m; ++l) p[mod(j * l, m)] += 1;
    return Cyclotomic::from_poly(m, p);
}

}  // namespace

TEST(Rational, CanonicalForm) {
    Rational r = rat(6, -4);
    EXPECT_EQ(r.get_num(), -3);
    EXPECT_EQ(r.get_den(), 2);
    EXPECT_EQ(parse_rational(" -10/4 "), rat(-5, 2));
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_EQ(binomial(-3, 2), 6);
    EXPECT_EQ(floor(rat(-1, 2)), -1);
    EXPECT_EQ(ceil(rat(-1, 2)), 0);
}

TEST(Cyclotomic, Examples) {
    EXPECT_EQ(cyclo_mul(Z(4, 1), Z(4, 1)), C(4, -1));
    EXPECT_EQ(cyclo_mul(C(3, 1) + Z(3, 1), C(3, 1) + Z(3, 2)), C(3, 1));
    EXPECT_EQ(Z(10, 5), C(10, -1));
    EXPECT_THROW(cyclo_mul(Z(4, 1), Z(3, 1)), OrderMismatch);
}

TEST(Cyclotomic, RingAxioms) {
    for (int m = 1; m <= 12; ++m) {
        EXPECT_EQ(Z(m, m), C(m, 1));
        // Phi_m(zeta) = 0
        auto P = detail::cyclotomic_poly(m);
        Cyclotomic acc(m);
        for (size_t k = 0; k < P.size(); ++k) acc += Z(m, k) * Rational(P[k]);
        EXPECT_TRUE(acc.is_zero()) << m;
        std::mt19937 rng(m);
        std::uniform_int_distribution<int> d(-3, 3);
        auto rnd = [&] {
            std::vector<Rational> p(m);
            for (auto& v : p) v = d(rng);
            return Cyclotomic::from_poly(m, p);
        };
        for (int t = 0; t < 10; ++t) {
            Cyclotomic a = rnd(), b = rnd(), c = rnd();
            EXPECT_EQ(a * b, b * a);
            EXPECT_EQ((a * b) * c, a * (b * c));
            EXPECT_EQ(a * (b + c), a * b + a * c);
            Cyclotomic r = Cyclotomic::from_poly(m, a.coeffs());
            EXPECT_EQ(r, a);  // reduction idempotent
            if (!a.is_zero()) {
                EXPECT_EQ(a * a.inverse(), C(m, 1));
            }
        }
        for (long v = -5; v <= 5; ++v) EXPECT_EQ(C(m, v).is_zero(), v == 0);
    }
}

TEST(Cyclotomic, RootSum) {
    EXPECT_EQ(root_sum(5, 0), C(5, 5));
    EXPECT_EQ(root_sum(5, 2), C(5, 0));
    EXPECT_EQ(root_sum(6, 3), C(6, 0));
    for (int m = 1; m <= 12; ++m)
        for (long j = 0; j < m; ++j) {
            Cyclotomic s = root_sum(m, j);
            EXPECT_EQ(s, naive_root_sum(m, j));
            EXPECT_EQ(s, C(m, j % m == 0 ? m : 0)) << m << " " << j;
        }
    // divisor orders inside a larger ring
    for (int m = 2; m <= 12; ++m)
        for (int k = 1; k <= m; ++k) {
            if (m % k) continue;
            for (long j = 0; j < k; ++j) {
                Cyclotomic s(m);
                for (long l = 0; l < k; ++l) s += Z(m, (m / k) * j * l);
                EXPECT_EQ(s, C(m, j == 0 ? k : 0));
            }
        }
}

TEST(Series, MulExamples) {
    auto a = poly(1, 1, {{0, 0, 1}, {1, 0, 1}});
    auto b = poly(1, 1, {{0, 0, 1}, {1, 0, -1}});
    auto p = a * b;
    EXPECT_EQ(p.size(), 2u);
    EXPECT_EQ(p.coeff(0, 0), C(1, 1));
    EXPECT_EQ(p.coeff(2, 0), C(1, -1));
    EXPECT_TRUE(p.coeff(1, 0).is_zero());

    auto g = expand_factor(-1, 1, 0, C(1, 1), 1, Window{Rational(3), {}, {}}, 1);
    EXPECT_EQ(g.size(), 4u);
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(g.coeff(k, 0), C(1, 1));
    EXPECT_THROW(g.coeff(4, 0), WindowInsufficient);

    auto h = expand_factor(-1, 0, rat(-1, 5), C(1, 1), 1, Window{{}, rat(-3, 5), {}}, 5);
    EXPECT_EQ(h.size(), 4u);
    for (int k = 0; k <= 3; ++k) EXPECT_EQ(h.coeff(0, rat(-k, 5)), C(1, 1));
}

TEST(Series, ExpandFactorExamples) {
    auto p = expand_factor(1, 1, rat(4, 5), C(1, 1), 5, Window::all(), 5);
    EXPECT_EQ(p.size(), 6u);
    for (int k = 0; k <= 5; ++k) EXPECT_EQ(p.coeff(k, rat(4 * k, 5)), C(1, (k % 2 ? -1 : 1) * to_long(Rational(binomial(5, k)))));

    auto e = expand_factor(-1, 0, rat(-1, 5), C(1, 1), 1, Window{{}, rat(-2, 5), Rational(0)}, 5);
    EXPECT_EQ(e.size(), 3u);

    // (1 - u)^{-1} with u = q^{-1/2} y^{1/2} against -u^{-1} (1 - u^{-1})^{-1}
    Window w{Rational(3), {}, {}};
    auto lhs = expand_factor(-1, rat(-1, 2), rat(1, 2), C(1, 1), 1, w, 2);
    auto inner = expand_factor(-1, rat(1, 2), rat(-1, 2), C(1, 1), 1, w.shifted(rat(-1, 2), rat(1, 2)), 2);
    auto rhs = inner.shifted(rat(1, 2), rat(-1, 2), C(1, -1));
    EXPECT_TRUE(PuiseuxSeries::equal_on(lhs, rhs, w));
    EXPECT_EQ(lhs.coeff(rat(1, 2), rat(-1, 2)), C(1, -1));
    EXPECT_EQ(lhs.coeff(1, -1), C(1, -1));
    // (1 - u) * that = 1
    auto one = expand_factor(1, rat(-1, 2), rat(1, 2), C(1, 1), 1, w, 2);
    auto prod = PuiseuxSeries::mul(one, lhs, w.intersect(Window{rat(5, 2), {}, {}}));
    EXPECT_TRUE(PuiseuxSeries::equal_on(prod, PuiseuxSeries::one(1, 2), prod.window()));

    EXPECT_THROW(expand_factor(-1, 0, 0, C(1, 1), 1, Window::all(), 1), SingularFactor);
    EXPECT_THROW(expand_factor(-1, 1, 0, C(1, 1), 1, Window::all(), 1), WindowInsufficient);
}

TEST(Series, InverseFactorsGiveOne) {
    int m = 6, D = 6;
    std::vector<Factor> fs = {
        {1, 1, rat(1, 3), Z(m, 1), 3}, {1, 0, rat(-2, 3), C(m, 1), 2}, {1, rat(-1, 2), rat(1, 6), Z(m, 5), 2}};
    Window w{Rational(4), Rational(-3), Rational(3)};
    for (auto f : fs) {
        auto num = expand_factor(f, Window::all(), D);
        f.sign = -1;
        std::vector<Factor> both = {f, Factor{1, f.aq, f.ay, f.phase, f.power}};
        auto p = expand_product(both, w, m, D);
        EXPECT_TRUE(PuiseuxSeries::equal_on(p, PuiseuxSeries::one(m, D), w)) << f.str() << " " << p.str();
    }
}

TEST(Series, MulAssociativeCommutative) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> c(-3, 3), e(-4, 4), q(0, 4);
    int m = 4, D = 4;
    auto rnd = [&] {
        PuiseuxSeries s(m, D);
        Support sup = Support::none();
        for (int i = 0; i < 6; ++i) {
            Rational qq = rat(q(rng), 2), yy = rat(e(rng), 4);
            Cyclotomic v = C(m, c(rng)) + Z(m, 1) * Rational(c(rng));
            s.add_term(qq, yy, v);
            sup = Support::join(sup, Support::point(qq, yy));
        }
        s.set_support(sup);
        return s;
    };
    for (int t = 0; t < 30; ++t) {
        auto a = rnd(), b = rnd(), d = rnd();
        Window w{Rational(3), Rational(-2), Rational(2)};
        auto ab = PuiseuxSeries::mul(a, b);
        EXPECT_TRUE(PuiseuxSeries::equal_on(ab, PuiseuxSeries::mul(b, a), Window::all()));
        auto l = PuiseuxSeries::mul(ab, d, w);
        auto r = PuiseuxSeries::mul(a, PuiseuxSeries::mul(b, d), w);
        EXPECT_TRUE(PuiseuxSeries::equal_on(l, r, w));
    }
}

TEST(Series, TruncatedProductMatchesLongerExpansion) {
    // (1 - y^{-1/3})^{-3} (1 - q^{1/3} y^{-1/3})^{-3} (1 - q^{-1} y^{2/3})^2.
    int m = 2, D = 3;
    std::vector<Factor> fs = {{-1, 0, rat(-1, 3), C(m, 1), 3},
                              {-1, rat(1, 3), rat(-1, 3), C(m, 1), 3},
                              {1, rat(-1, 1), rat(2, 3), C(m, 1), 2}};
    Window w{Rational(2), Rational(-2), Rational(2)};
    auto a = expand_product(fs, w, m, D);
    Window big{Rational(5), Rational(-5), Rational(5)};
    auto b = expand_product(fs, big, m, D);
    EXPECT_TRUE(PuiseuxSeries::equal_on(a, b, w));
    // a product whose inputs are too short names the missing range
    auto f0 = expand_factor(fs[1], Window{Rational(1), {}, {}}, D);
    auto f1 = expand_factor(fs[2], Window::all(), D);
    try {
        PuiseuxSeries::mul(f0, f1, w);
        FAIL();
    } catch (const WindowInsufficient& e) {
        EXPECT_NE(std::string(e.what()).find("q in"), std::string::npos);
    }
}

TEST(Series, SubstituteShift) {
    int N = 3, m = 6;
    std::vector<Factor> fs = {{1, 2, rat(-1, 3), C(m, 1), 1}};
    auto same = substitute_shift(fs, N, 0, 0);
    EXPECT_EQ(same[0].aq, fs[0].aq);
    EXPECT_EQ(same[0].phase, fs[0].phase);
    for (long l = 0; l < N; ++l) {
        auto s = substitute_shift(fs, N, 1, l);
        EXPECT_EQ(s[0].aq, 2 + rat(1, 3));
        EXPECT_EQ(s[0].ay, rat(-1, 3));
        EXPECT_EQ(s[0].phase, Z(m, 2 * l));  // zeta_3^l
    }
    // l-average of constant phases collapses like root_sum
    for (long k = -4; k <= 4; ++k) {
        std::vector<Factor> g = {{1, 1, rat(k, 3), C(m, 1), 1}};
        Cyclotomic acc(m);
        for (long l = 0; l < N; ++l) acc += substitute_shift(g, N, 0, l)[0].phase;
        EXPECT_EQ(acc, C(m, mod(k, 3) == 0 ? 3 : 0));
    }
}

TEST(Series, JsonRoundTrip) {
    int m = 6, D = 6;
    auto s = expand_factor(1, rat(1, 2), rat(-1, 3), Z(m, 1), 3, Window::all(), D);
    auto j = series_to_json(s);
    EXPECT_EQ(j["m"], 6);
    EXPECT_EQ(j["D"], 6);
    auto back = series_from_json(j);
    EXPECT_TRUE(PuiseuxSeries::equal_on(s, back, Window::all()));
    auto terms = j["terms"];
    for (size_t i = 1; i < terms.size(); ++i) {
        Rational q0 = parse_rational(terms[i - 1]["q"].get<std::string>());
        Rational q1 = parse_rational(terms[i]["q"].get<std::string>());
        EXPECT_LE(q0, q1);
    }
    std::string tsv = series_to_tsv(s);
    EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), static_cast<long>(s.size()) + 1);
}
