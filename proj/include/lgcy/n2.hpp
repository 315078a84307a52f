#pragma once

#include "lgcy/freefield.hpp"

#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace lgcy::ff {

struct N2Structure {
    std::string name;
    int N = 1;
    int p = 0;  // 0 for the de Rham / polyvector structures
    Field G, Q, J, L;
    Rational expected_c3;  // C/3

    const Field& get(char c) const {
        switch (c) {
            case 'G': return G;
            case 'Q': return Q;
            case 'J': return J;
            default: return L;
        }
    }
};

// Structure on the chiral de Rham side: Q is the de Rham differential.
inline N2Structure msv1(int N) {
    std::vector<Field> g, q, j, l;
    for (int i = 0; i < N; ++i) {
        auto x = Field::x(i), bx = Field::del_x(i), dx = Field::dx(i), bdx = Field::del_dx(i);
        q.push_back(nop(dx, bx));
        g.push_back(nop(deriv(x), bdx));
        j.push_back(Rational(-1) * nop(dx, bdx));
        l.push_back(nop(deriv(x), bx) + nop(deriv(dx), bdx));
    }
    return {"msv1", N, 0, Field::sum_of(g), Field::sum_of(q), Field::sum_of(j), Field::sum_of(l), Rational(N)};
}

// Polyvector structure: the roles of dx and d/d(dx) are exchanged.
inline N2Structure msv2(int N) {
    std::vector<Field> g, q, j, l;
    for (int i = 0; i < N; ++i) {
        auto x = Field::x(i), bx = Field::del_x(i), dx = Field::dx(i), bdx = Field::del_dx(i);
        q.push_back(nop(deriv(x), bdx));
        g.push_back(nop(dx, bx));
        j.push_back(nop(dx, bdx));
        l.push_back(nop(deriv(x), bx) - nop(dx, deriv(bdx)));
    }
    return {"msv2", N, 0, Field::sum_of(g), Field::sum_of(q), Field::sum_of(j), Field::sum_of(l), Rational(N)};
}

// Landau-Ginzburg structure for a degree-p superpotential; commutes with df_(0).
inline N2Structure lg(int N, int p) {
    if (p < 1) throw std::invalid_argument("p must be positive");
    Rational ip = rat(1, p);
    std::vector<Field> g, q, j, l;
    for (int i = 0; i < N; ++i) {
        auto x = Field::x(i), bx = Field::del_x(i), dx = Field::dx(i), bdx = Field::del_dx(i);
        g.push_back(nop(bx, dx));
        q.push_back(Rational(-ip) * nop(x, deriv(bdx)) - (ip - 1) * nop(deriv(x), bdx));
        j.push_back(Rational(-ip) * nop(bx, x) + (ip - 1) * nop(bdx, dx));
        l.push_back(nop(bx, deriv(x)) + nop(deriv(bdx), dx));
    }
    return {"lg", N, p, Field::sum_of(g), Field::sum_of(q), Field::sum_of(j), Field::sum_of(l),
            Rational(N) * Rational(p - 2) / Rational(p)};
}

inline N2Structure structure_by_name(const std::string& s, int N, int p) {
    if (s == "msv1") return msv1(N);
    if (s == "msv2") return msv2(N);
    if (s == "lg") return lg(N, p);
    throw std::invalid_argument("unknown structure '" + s + "' (expected msv1, msv2 or lg)");
}

// [a_(m), b_(n)] v with the graded sign.
inline State commutator(Engine& E, const Field& a, long m, const Field& b, long n, const State& v) {
    State r = E.apply(a, m, E.apply(b, n, v));
    State s = E.apply(b, n, E.apply(a, m, v));
    r.add(s, (a.odd() && b.odd()) ? 1 : -1);
    return r;
}

// Right-hand side of the N=2 relations as the states c_j = A_(j)B, j >= 0,
// written in terms of the structure's own fields. Only the ordered pairs
// listed appear; others follow by skew-symmetry.
inline std::optional<std::vector<Field>> n2_products(const N2Structure& s, char a, char b, const Rational& c3) {
    Field one = c3 * Field::identity();
    Field zero;
    auto key = std::string{a, b};
    if (key == "LL") return std::vector<Field>{deriv(s.L), Rational(2) * s.L};
    if (key == "JJ") return std::vector<Field>{zero, one};
    if (key == "LG") return std::vector<Field>{deriv(s.G), Rational(2) * s.G};
    if (key == "JG") return std::vector<Field>{s.G};
    if (key == "LQ") return std::vector<Field>{deriv(s.Q), s.Q};
    if (key == "JQ") return std::vector<Field>{Rational(-1) * s.Q};
    if (key == "LJ") return std::vector<Field>{deriv(s.J), s.J, one};
    if (key == "QG") return std::vector<Field>{s.L, Rational(-1) * s.J, one};
    if (key == "GG" || key == "QQ") return std::vector<Field>{};
    return std::nullopt;
}

struct N2Witness {
    std::string pair;
    long m = 0, n = 0;
    std::string state;
    std::string difference;
};

struct N2Report {
    std::string structure;
    int N = 0, p = 0;
    bool pass = true;
    Rational c_from_jj, c_from_qg, expected_c;
    size_t checks = 0;
    size_t states = 0;
    std::optional<N2Witness> witness;
};

// Operator-level check of all sixteen ordered pairs on states of total
// creation level <= max_level.
inline N2Report verify_n2(const N2Structure& s, int max_level, int max_mode) {
    Engine E;
    N2Report rep;
    rep.structure = s.name;
    rep.N = s.N;
    rep.p = s.p;
    rep.expected_c = 3 * s.expected_c3;

    auto coefficient_of_vacuum = [&](const State& st) -> std::optional<Rational> {
        if (st.is_zero()) return Rational(0);
        if (st.size() != 1 || !st.terms().begin()->first.is_vacuum()) return std::nullopt;
        return st.terms().begin()->second;
    };
    auto jj = coefficient_of_vacuum(ope_state(E, s.J, 1, s.J));
    auto qg = coefficient_of_vacuum(ope_state(E, s.Q, 2, s.G));
    if (!jj || !qg) {
        rep.pass = false;
        rep.witness = N2Witness{"central", 1, 2, "|0>", "J_(1)J or Q_(2)G is not a multiple of the vacuum"};
        return rep;
    }
    rep.c_from_jj = 3 * *jj;
    rep.c_from_qg = 3 * *qg;
    if (rep.c_from_jj != rep.c_from_qg || rep.c_from_jj != rep.expected_c) {
        rep.pass = false;
        rep.witness = N2Witness{"central", 1, 2, "|0>",
                                "C from J_(1)J = " + rep.c_from_jj.get_str() + ", from Q_(2)G = " +
                                    rep.c_from_qg.get_str() + ", expected " + rep.expected_c.get_str()};
        return rep;
    }
    Rational c3 = *jj;

    auto states = monomials_by_level(s.N, max_level);
    rep.states = states.size();
    const std::string names = "GQJL";
    for (char a : names) {
        for (char b : names) {
            bool reversed = false;
            auto prods = n2_products(s, a, b, c3);
            if (!prods) {
                prods = n2_products(s, b, a, c3);
                reversed = true;
            }
            const Field& A = s.get(a);
            const Field& B = s.get(b);
            // [B_n, A_m] = -(-1)^{|A||B|} [A_m, B_n]
            Rational rsign = reversed ? Rational((A.odd() && B.odd()) ? 1 : -1) : Rational(1);
            for (long m = -max_mode; m <= max_mode; ++m) {
                for (long n = -max_mode; n <= max_mode; ++n) {
                    // for reversed pairs the listed products are B_(j)A with modes (n, m)
                    long mm = reversed ? n : m, nn = reversed ? m : n;
                    for (auto& mono : states) {
                        State v = State::of(mono);
                        State lhs = commutator(E, A, m, B, n, v);
                        State rhs;
                        for (size_t j = 0; j < prods->size(); ++j) {
                            Rational bc(binomial(mm, long(j)));
                            if (bc == 0) continue;
                            rhs.add(E.apply((*prods)[j], mm + nn - long(j), v), bc * rsign);
                        }
                        ++rep.checks;
                        if (lhs != rhs) {
                            rep.pass = false;
                            rep.witness = N2Witness{std::string{a, b}, m, n, mono.str(), (lhs - rhs).str()};
                            return rep;
                        }
                    }
                }
            }
        }
    }
    return rep;
}

struct TranslationReport {
    bool pass = true;
    size_t checks = 0;
    std::optional<std::string> witness;
};

// With T = L_(0) of the de Rham structure: [T, a_(r)] = -r a_(r-1).
inline TranslationReport verify_translation(int N, int max_mode, int max_level = 2) {
    Engine E;
    TranslationReport rep;
    Field L = msv1(N).L;
    auto states = monomials_by_level(N, max_level);
    for (Kind k : all_kinds) {
        for (int i = 0; i < N; ++i) {
            Field g = Field::gen(k, i);
            for (long r = -max_mode; r <= max_mode; ++r) {
                for (auto& mono : states) {
                    State v = State::of(mono);
                    State lhs = commutator(E, L, 0, g, r, v);
                    State rhs = Rational(-r) * E.apply(g, r - 1, v);
                    ++rep.checks;
                    if (lhs != rhs) {
                        rep.pass = false;
                        rep.witness = std::string(kind_name(k)) + std::to_string(i) + "_(" + std::to_string(r) +
                                      ") on " + mono.str() + ": " + (lhs - rhs).str();
                        return rep;
                    }
                }
            }
        }
    }
    return rep;
}

struct RandomField {
    Field f;
    std::string desc;
};

// Generator, derivative of a generator, or a normally ordered pair of those.
inline RandomField random_field(std::mt19937_64& rng, int N) {
    auto gen = [&]() -> RandomField {
        Kind k = all_kinds[rng() % 4];
        int i = int(rng() % N);
        Field g = Field::gen(k, i);
        std::string d = std::string(kind_name(k)) + std::to_string(i);
        if (rng() % 3 == 0) return {deriv(g), "T" + d};
        return {g, d};
    };
    if (rng() % 2 == 0) return gen();
    auto a = gen(), b = gen();
    Rational c(long(rng() % 5) - 2);
    if (c == 0) c = 1;
    return {c * nop(a.f, b.f), c.get_str() + ":" + a.desc + " " + b.desc + ":"};
}

struct BorcherdsReport {
    bool pass = true;
    size_t pairs = 0, checks = 0;
    std::optional<std::string> witness;
};

// [a_(m), b_(n)] = sum_j binom(m, j) (a_(j) b)_(m+n-j) for random a, b.
inline BorcherdsReport borcherds_audit(int N, int npairs, int max_level, int max_mode, uint64_t seed = 20240517) {
    std::mt19937_64 rng(seed);
    Engine E;
    BorcherdsReport rep;
    auto states = monomials_by_level(N, max_level);
    for (int t = 0; t < npairs; ++t) {
        auto a = random_field(rng, N), b = random_field(rng, N);
        std::vector<Field> prods;
        int jmax = a.f.weight() + b.f.weight() + 1;
        for (int j = 0; j <= jmax; ++j) prods.push_back(field_of_state(ope_state(E, a.f, j, b.f)));
        ++rep.pairs;
        for (long m = -max_mode; m <= max_mode; ++m) {
            for (long n = -max_mode; n <= max_mode; ++n) {
                for (auto& mono : states) {
                    State v = State::of(mono);
                    State lhs = commutator(E, a.f, m, b.f, n, v);
                    State rhs;
                    for (int j = 0; j <= jmax; ++j) {
                        Rational bc(binomial(m, j));
                        if (bc != 0) rhs.add(E.apply(prods[j], m + n - j, v), bc);
                    }
                    ++rep.checks;
                    if (lhs != rhs) {
                        rep.pass = false;
                        rep.witness = "a=" + a.desc + " b=" + b.desc + " m=" + std::to_string(m) +
                                      " n=" + std::to_string(n) + " on " + mono.str();
                        return rep;
                    }
                }
            }
        }
    }
    return rep;
}

}  // namespace lgcy::ff
