#pragma once

#include "lgcy/cyclotomic.hpp"
#include "lgcy/linalg.hpp"
#include "lgcy/n2.hpp"
#include "lgcy/series.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgcy::ff {

struct TwistMismatch : std::domain_error {
    using std::domain_error::domain_error;
};

// d f(z) = sum_i (d_i f)(x(z)) dx_i(z)
inline Field df_field(const HomogeneousPoly& f) {
    std::vector<Field> terms;
    auto jac = jacobian(f);
    for (int i = 0; i < f.n; ++i) {
        if (jac[i].terms.empty()) continue;
        terms.push_back(nop(polynomial_of_x(jac[i].terms), Field::dx(i)));
    }
    return Field::sum_of(terms);
}

// Field acting on the sector-j module obtained from the untwisted space by
// the Delta-operator of h = -j J. Its modes are
//   rho(a)_(r) = sum_n sum_sigma ((E_n a)_sigma)_(r + sigma - n)
// where sigma runs over h_(0)-eigenvalues.
class TwistedField {
public:
    struct Part {
        Rational sigma;
        long n;
        Field f;
    };

    TwistedField(Engine& E, const Field& a, const Field& J, long j) : odd_(a.odd()) {
        State u = E.apply(a, -1, State::vacuum());
        Field h = Rational(-j) * J;
        std::vector<State> En{u};
        int wmax = u.bound_weight();
        for (int n = 1; n <= wmax; ++n) {
            // n E_n = sum_{k=1}^n (-1)^{k+1} h_(k) E_{n-k}
            State s;
            for (int k = 1; k <= n; ++k) s.add(E.apply(h, k, En[n - k]), (k % 2) ? 1 : -1);
            En.push_back(Rational(1, n) * s);
        }
        for (int n = 0; n <= wmax; ++n) {
            std::map<Rational, State> by_sigma;
            for (auto& [m, c] : En[n].terms()) {
                State hm = E.apply(h, 0, State::of(m));
                Rational sigma = 0;
                if (!hm.is_zero()) {
                    if (hm.size() != 1 || !(hm.terms().begin()->first == m))
                        throw std::logic_error("h_(0) is not diagonal on monomials");
                    sigma = hm.terms().begin()->second;
                }
                by_sigma[sigma].add(m, c);
            }
            for (auto& [sg, st] : by_sigma)
                if (!st.is_zero()) parts_.push_back({sg, n, field_of_state(st)});
        }
    }

    bool odd() const { return odd_; }
    const std::vector<Part>& parts() const { return parts_; }

    State apply(Engine& E, const Rational& r, const State& v) const {
        State out;
        for (auto& pt : parts_) {
            Rational idx = r + pt.sigma - pt.n;
            if (!is_integer(idx))
                throw TwistMismatch("mode index " + r.get_str() + " is incompatible with the sector twist " +
                                    pt.sigma.get_str());
            out += E.apply(pt.f, to_long(idx), v);
        }
        return out;
    }

private:
    bool odd_;
    std::vector<Part> parts_;
};

struct SectorState {
    int j = 0;
    State v;
};

// Per-mode contribution of a creation mode to the sector gradings.
struct ModeGrade {
    Kind kind;
    int level;
    Rational dw, dm;
};

// The LG model with superpotential f and its twisted sectors. Gradings are
// measured from the LG structure's own L_(1) and J_(0), sector-shifted.
class LGModel {
public:
    LGModel(HomogeneousPoly f) : f_(std::move(f)), N_(f_.n), p_(f_.p), s_(lg(N_, p_)), df_(df_field(f_)) {}

    int N() const { return N_; }
    int p() const { return p_; }
    const HomogeneousPoly& poly() const { return f_; }
    const N2Structure& structure() const { return s_; }
    const Field& df() const { return df_; }
    Engine& engine() { return E_; }

    void check_sector(int j) const {
        if (j != 0 && p_ != N_) throw std::invalid_argument("twisted sectors require p = N");
        if (j < 0) throw std::invalid_argument("sector must be non-negative");
    }

    const TwistedField& twisted(char which, int j) {
        check_sector(j);
        auto key = std::make_pair(which, j);
        auto it = tw_.find(key);
        if (it != tw_.end()) return it->second;
        Field a = which == 'd' ? df_ : s_.get(which);
        return tw_.emplace(key, TwistedField(E_, a, s_.J, j)).first->second;
    }

    // rho_j(A)_(r) v for A in {G, Q, J, L} or 'd' for df.
    State mode(char which, int j, const Rational& r, const State& v) { return twisted(which, j).apply(E_, r, v); }

    State d_lg(int j, const State& v) { return mode('d', j, 0, v); }

    // Eigenvalues of the sector L_(1) and J_(0) on a monomial; throws if it is not an eigenvector.
    std::pair<Rational, Rational> measure(int j, const Monomial& m) {
        auto eig = [&](char w, long r) {
            State s = mode(w, j, r, State::of(m));
            if (s.is_zero()) return Rational(0);
            if (s.size() != 1 || !(s.terms().begin()->first == m))
                throw std::logic_error("monomial is not a grading eigenvector");
            return s.terms().begin()->second;
        };
        return {eig('L', 1), eig('J', 0)};
    }

    const std::vector<ModeGrade>& grades(int j, int max_level) {
        auto& g = grades_[j];
        while (int(g.vac.size()) == 0 || g.levels < max_level) {
            if (g.vac.empty()) {
                auto [w, m] = measure(j, Monomial{});
                g.vac = {w, m};
            }
            int l = ++g.levels;
            for (Kind k : all_kinds) {
                Monomial mono;
                mono.insert(k, 0, l);
                auto [w, m] = measure(j, mono);
                g.modes.push_back({k, l, w - g.vac[0], m - g.vac[1]});
            }
        }
        return g.modes;
    }
    std::pair<Rational, Rational> vacuum_grade(int j) {
        grades(j, 1);
        return {grades_[j].vac[0], grades_[j].vac[1]};
    }

    // Additive gradings of a monomial from the measured per-mode data.
    std::pair<Rational, Rational> grade_of(int j, const Monomial& m) {
        int lmax = 1;
        for (auto e : m.entries()) lmax = std::max(lmax, Monomial::level_of(e));
        auto& gs = grades(j, lmax);
        auto [w, c] = vacuum_grade(j);
        for (auto e : m.entries()) {
            auto& g = gs[(Monomial::level_of(e) - 1) * 4 + int(Monomial::kind_of(e))];
            w += g.dw * Monomial::exp_of(e);
            c += g.dm * Monomial::exp_of(e);
        }
        return {w, c};
    }

    // Super-parity in sector j: monomial parity shifted by N j.
    int parity(int j, const Monomial& m) const { return (m.parity() + N_ * j) % 2; }

    // All monomials of sector weight <= wmax and charge >= mlo.
    std::vector<Monomial> enumerate(int j, const Rational& wmax, const Rational& mlo) {
        auto [vw, vm] = vacuum_grade(j);
        Rational budget = wmax - vw;
        // fermions may have negative weight; find all such modes first
        int L = 1;
        Rational negsum = 0;
        while (true) {
            auto& gs = grades(j, L);
            bool any_neg = false;
            for (int k = 0; k < 4; ++k) {
                auto& g = gs[(L - 1) * 4 + k];
                if (g.dw < 0) {
                    if (!is_odd(g.kind)) throw std::logic_error("bosonic mode of negative weight");
                    any_neg = true;
                    negsum += g.dw * N_;
                }
            }
            if (!any_neg && L > 1) break;
            ++L;
        }
        while (true) {
            auto& gs = grades(j, L + 1);
            bool any = false;
            for (int k = 0; k < 4; ++k)
                if (gs[L * 4 + k].dw <= budget - negsum) any = true;
            if (!any) break;
            ++L;
        }
        auto& gs = grades(j, L);
        struct M {
            Kind kind;
            int var, level;
            Rational dw, dm;
        };
        std::vector<M> modes;
        for (auto& g : gs) {
            if (g.level > L || g.dw > budget - negsum) continue;
            if (!is_odd(g.kind) && g.dw == 0 && g.dm >= 0)
                throw std::logic_error("infinite-dimensional graded piece");
            for (int i = 0; i < N_; ++i) modes.push_back({g.kind, i, g.level, g.dw, g.dm});
        }
        size_t K = modes.size();
        std::vector<Rational> NW(K + 1, 0), FP(K + 1, 0), R(K + 1, 0);
        for (size_t i = K; i-- > 0;) {
            NW[i] = NW[i + 1];
            FP[i] = FP[i + 1];
            R[i] = R[i + 1];
            auto& md = modes[i];
            if (is_odd(md.kind)) {
                if (md.dw < 0) NW[i] += md.dw;
                if (md.dm > 0) FP[i] += md.dm;
            } else if (md.dm > 0) {
                Rational ratio = md.dm / md.dw;
                if (ratio > R[i]) R[i] = ratio;
            }
        }
        std::vector<Monomial> out;
        Monomial cur;
        Rational mlo_rel = mlo - vm;
        auto rec = [&](auto&& self, size_t i, const Rational& w, const Rational& c) -> void {
            if (w + NW[i] > budget) return;
            if (c + FP[i] + R[i] * (budget - w - NW[i]) < mlo_rel) return;
            if (i == K) {
                out.push_back(cur);
                return;
            }
            auto& md = modes[i];
            self(self, i + 1, w, c);
            Monomial save = cur;
            Rational ww = w, cc = c;
            int emax = is_odd(md.kind) ? 1 : 1 << 20;
            for (int e = 1; e <= emax; ++e) {
                ww += md.dw;
                cc += md.dm;
                if (ww + NW[i + 1] > budget) break;
                if (md.dw == 0 && cc + FP[i + 1] + R[i + 1] * (budget - ww - NW[i + 1]) < mlo_rel) break;
                cur.insert(md.kind, md.var, md.level);
                self(self, i + 1, ww, cc);
            }
            cur = save;
        };
        rec(rec, 0, Rational(0), Rational(0));
        std::sort(out.begin(), out.end());
        return out;
    }

    // Basis of the (w, m) piece of sector j.
    std::vector<Monomial> basis(int j, const Rational& w, const Rational& m, bool invariant = false) {
        std::vector<Monomial> out;
        for (auto& mono : enumerate(j, w, m)) {
            auto [ww, mm] = grade_of(j, mono);
            if (ww == w && mm == m && (!invariant || zn_invariant(mono))) out.push_back(mono);
        }
        return out;
    }

    // Distinct (w, m) bigrades present in sector j with w <= wmax, m >= mlo.
    std::map<std::pair<Rational, Rational>, std::vector<Monomial>> blocks(int j, const Rational& wmax,
                                                                          const Rational& mlo, bool invariant) {
        std::map<std::pair<Rational, Rational>, std::vector<Monomial>> out;
        for (auto& mono : enumerate(j, wmax, mlo)) {
            if (invariant && !zn_invariant(mono)) continue;
            out[grade_of(j, mono)].push_back(mono);
        }
        return out;
    }

    bool zn_invariant(const Monomial& m) const { return zn_charge(m) == 0; }

    // (#x + #dx - #del_x - #del_dx) mod N
    long zn_charge(const Monomial& m) const {
        auto c = m.kind_counts();
        return mod(long(c[0]) + c[2] - c[1] - c[3], N_);
    }

private:
    struct SectorGrades {
        std::vector<Rational> vac;
        int levels = 0;
        std::vector<ModeGrade> modes;
    };

    HomogeneousPoly f_;
    int N_, p_;
    N2Structure s_;
    Field df_;
    Engine E_;
    std::map<std::pair<char, int>, TwistedField> tw_;
    std::map<int, SectorGrades> grades_;
};

inline State zn_project(const State& v, int N) {
    State out;
    for (auto& [m, c] : v.terms()) {
        auto k = m.kind_counts();
        if (mod(long(k[0]) + k[2] - k[1] - k[3], N) == 0) out.add(m, c);
    }
    return out;
}

// (1/N) sum_l g^l with g acting on a monomial by zeta_N^{count}; exact over Q(zeta_N).
inline State zn_average(const State& v, int N) {
    State out;
    for (auto& [m, c] : v.terms()) {
        auto k = m.kind_counts();
        Cyclotomic s = root_sum(N, long(k[0]) + k[2] - k[1] - k[3]);
        if (!s.is_rational()) throw std::logic_error("non-rational group average");
        out.add(m, c * s.rational() / Rational(N));
    }
    return out;
}

inline SectorState spectral_flow_map(int jdelta, const SectorState& s) { return {s.j + jdelta, s.v}; }

// Matrix of a sector operator on a block, columns indexed by the basis.
inline std::optional<Matrix> block_matrix(LGModel& M, int j, const std::vector<Monomial>& basis, char which,
                                          const Rational& r, std::string* err = nullptr) {
    std::unordered_map<Monomial, size_t, MonomialHash> index;
    for (size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
    Matrix A(basis.size(), basis.size());
    for (size_t c = 0; c < basis.size(); ++c) {
        State img = M.mode(which, j, r, State::of(basis[c]));
        for (auto& [m, v] : img.terms()) {
            auto it = index.find(m);
            if (it == index.end()) {
                if (err) *err = "image of " + basis[c].str() + " leaves the block: " + m.str();
                return std::nullopt;
            }
            A(it->second, c) = v;
        }
    }
    return A;
}

struct CohomologyBlock {
    Rational w, m;
    size_t dim = 0, dim_even = 0, dim_odd = 0;
    size_t rank_even = 0, rank_odd = 0;  // rank of d restricted to even / odd states
    bool d_squared_zero = true;

    size_t rank() const { return rank_even + rank_odd; }
    size_t dim_Z() const { return dim - rank(); }
    size_t dim_B() const { return rank(); }
    size_t dim_H() const { return dim - 2 * rank(); }
    size_t h_even() const { return dim_even - rank_even - rank_odd; }
    size_t h_odd() const { return dim_odd - rank_odd - rank_even; }
    long euler() const { return long(dim_even) - long(dim_odd); }
    long euler_H() const { return long(h_even()) - long(h_odd()); }
};

// Cohomology of d_lg on one bigraded block. Parities are sector super-parities.
inline CohomologyBlock cohomology_block(LGModel& M, int j, const Rational& w, const Rational& m,
                                        const std::vector<Monomial>& basis) {
    CohomologyBlock b;
    b.w = w;
    b.m = m;
    b.dim = basis.size();
    std::vector<Monomial> ev, od;
    for (auto& x : basis) (M.parity(j, x) ? od : ev).push_back(x);
    b.dim_even = ev.size();
    b.dim_odd = od.size();
    std::string err;
    auto D = block_matrix(M, j, basis, 'd', 0, &err);
    if (!D) throw std::logic_error("d_lg does not preserve the bigrading: " + err);
    b.d_squared_zero = matmul(*D, *D).is_zero();
    std::vector<size_t> ei, oi;
    for (size_t i = 0; i < basis.size(); ++i) (M.parity(j, basis[i]) ? oi : ei).push_back(i);
    auto sub = [&](const std::vector<size_t>& rows, const std::vector<size_t>& cols) {
        Matrix S(rows.size(), cols.size());
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t c = 0; c < cols.size(); ++c) S(r, c) = (*D)(rows[r], cols[c]);
        return S;
    };
    b.rank_even = rank(sub(oi, ei));
    b.rank_odd = rank(sub(ei, oi));
    return b;
}

inline std::vector<CohomologyBlock> cohomology_dims(LGModel& M, int j, const Rational& wmax, const Rational& mlo,
                                                    bool invariant) {
    std::vector<CohomologyBlock> out;
    for (auto& [wm, basis] : M.blocks(j, wmax, mlo, invariant))
        out.push_back(cohomology_block(M, j, wm.first, wm.second, basis));
    return out;
}

enum class TraceMode { ch, eu };

// Brute-force trace of q^{L_(1)} y^{J_(0)} over sector j, exact for q <= K and y >= ylo.
inline PuiseuxSeries character(LGModel& M, int j, long K, const Rational& ylo, TraceMode mode, bool invariant) {
    int N = M.N();
    int m = int(lcm(2, N)), D = 2 * int(lcm(N, M.p()));
    PuiseuxSeries s(m, D);
    Support sup = Support::none();
    for (auto& mono : M.enumerate(j, Rational(K), ylo)) {
        if (invariant && !M.zn_invariant(mono)) continue;
        auto [w, c] = M.grade_of(j, mono);
        long sign = (mode == TraceMode::eu && M.parity(j, mono)) ? -1 : 1;
        s.add_term(w, c, Cyclotomic(m, sign));
        sup = Support::join(sup, Support::point(w, c));
    }
    s.set_support(sup);
    s.set_window(Window::box(Rational(K), ylo, std::nullopt));
    return s;
}

}  // namespace lgcy::ff
