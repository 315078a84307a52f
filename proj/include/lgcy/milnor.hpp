#pragma once

#include "lgcy/linalg.hpp"
#include "lgcy/rational.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgcy {

using Exps = std::vector<int>;

struct IsolatedSingularityViolation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HomogeneousPoly {
    int n = 1;  // number of variables
    int p = 2;  // degree
    std::map<Exps, Rational> terms;

    HomogeneousPoly() = default;
    HomogeneousPoly(int nvars, int deg) : n(nvars), p(deg) {}

    static HomogeneousPoly fermat(int nvars, int deg) {
        HomogeneousPoly f(nvars, deg);
        for (int i = 0; i < nvars; ++i) {
            Exps e(nvars, 0);
            e[i] = deg;
            f.terms[e] = 1;
        }
        return f;
    }

    void add(const Exps& e, const Rational& c) {
        if (static_cast<int>(e.size()) != n) throw std::invalid_argument("exponent vector has wrong length");
        int d = 0;
        for (int v : e) {
            if (v < 0) throw std::invalid_argument("negative exponent");
            d += v;
        }
        if (d != p) throw std::invalid_argument("term of degree " + std::to_string(d) + " in polynomial of degree " + std::to_string(p));
        Rational& t = terms[e];
        t += c;
        if (t == 0) terms.erase(e);
    }

    bool is_fermat() const {
        if (static_cast<int>(terms.size()) != n) return false;
        for (auto& [e, c] : terms) {
            int nz = 0;
            for (int v : e) nz += v != 0;
            if (nz != 1 || c == 0) return false;
        }
        return true;
    }

    std::string str() const {
        std::ostringstream os;
        bool any = false;
        for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
            if (any) os << " + ";
            os << it->second.get_str();
            for (int i = 0; i < n; ++i)
                if (it->first[i]) os << "*x" << i << (it->first[i] > 1 ? "^" + std::to_string(it->first[i]) : "");
            any = true;
        }
        return any ? os.str() : "0";
    }
};

// Lines "coeff e0 e1 ... e{N-1}"; blank lines and '#' comments ignored.
inline HomogeneousPoly parse_poly(std::istream& in, int nvars) {
    std::string line;
    std::vector<std::pair<Rational, Exps>> rows;
    int deg = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto h = line.find('#');
        if (h != std::string::npos) line = line.substr(0, h);
        std::istringstream ls(line);
        std::string c;
        if (!(ls >> c)) continue;
        Exps e;
        int v;
        while (ls >> v) e.push_back(v);
        if (!ls.eof()) throw std::invalid_argument("line " + std::to_string(lineno) + ": bad exponent");
        if (static_cast<int>(e.size()) != nvars)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected " + std::to_string(nvars) + " exponents");
        int d = 0;
        for (int x : e) d += x;
        if (deg < 0) deg = d;
        if (d != deg) throw std::invalid_argument("line " + std::to_string(lineno) + ": polynomial is not homogeneous");
        rows.emplace_back(parse_rational(c), e);
    }
    if (deg < 2) throw std::invalid_argument("polynomial must have degree >= 2");
    HomogeneousPoly f(nvars, deg);
    for (auto& [c, e] : rows) f.add(e, c);
    return f;
}

inline HomogeneousPoly parse_poly_file(const std::string& path, int nvars) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open polynomial file " + path);
    return parse_poly(in, nvars);
}

// Sparse polynomial, not necessarily homogeneous.
using Poly = std::map<Exps, Rational>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
    Poly r;
    for (auto& [ea, ca] : a)
        for (auto& [eb, cb] : b) {
            Exps e(ea.size());
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            Rational& t = r[e];
            t += ca * cb;
            if (t == 0) r.erase(e);
        }
    return r;
}

inline int exps_degree(const Exps& e) {
    int d = 0;
    for (int v : e) d += v;
    return d;
}

// All exponent vectors of total degree d in n variables, lexicographically descending.
inline std::vector<Exps> monomials(int n, int d) {
    std::vector<Exps> out;
    if (d < 0) return out;
    Exps cur(n, 0);
    auto rec = [&](auto&& self, int i, int left) -> void {
        if (i == n - 1) {
            cur[i] = left;
            out.push_back(cur);
            return;
        }
        for (int v = left; v >= 0; --v) {
            cur[i] = v;
            self(self, i + 1, left - v);
        }
    };
    if (n == 0) {
        if (d == 0) out.push_back({});
        return out;
    }
    rec(rec, 0, d);
    return out;
}

inline std::vector<HomogeneousPoly> jacobian(const HomogeneousPoly& f) {
    std::vector<HomogeneousPoly> out;
    for (int i = 0; i < f.n; ++i) {
        HomogeneousPoly g(f.n, f.p - 1);
        for (auto& [e, c] : f.terms) {
            if (e[i] == 0) continue;
            Exps d = e;
            d[i] -= 1;
            g.add(d, c * e[i]);
        }
        out.push_back(std::move(g));
    }
    return out;
}

// Degree-d piece of C[x]/<df>.
struct QuotientDegree {
    int degree = 0;
    std::vector<Exps> basis;                                   // representatives
    std::map<Exps, std::vector<std::pair<size_t, Rational>>> nf;  // monomial -> combination of basis
};

class MilnorRing {
public:
    // fast_path = false forces per-degree linear algebra even for Fermat f.
    explicit MilnorRing(HomogeneousPoly f, bool fast_path = true)
        : f_(std::move(f)), jac_(jacobian(f_)), fermat_(fast_path && f_.is_fermat()) {
        if (f_.p < 2) throw std::invalid_argument("degree must be >= 2");
    }

    const HomogeneousPoly& poly() const { return f_; }
    int top_degree() const { return f_.n * (f_.p - 2); }
    bool fermat() const { return fermat_; }

    // Throws IsolatedSingularityViolation when d exceeds the top degree and
    // the quotient there is nonzero.
    const QuotientDegree& quotient_basis(int d) const {
        const QuotientDegree& q = degree_data(d);
        if (d > top_degree() && !q.basis.empty())
            throw IsolatedSingularityViolation("quotient is nonzero in degree " + std::to_string(d) + " > " +
                                               std::to_string(top_degree()) + "; singularity of " + f_.str() +
                                               " is not isolated");
        return q;
    }

    bool isolated() const { return degree_data(top_degree() + 1).basis.empty(); }
    void require_isolated() const { quotient_basis(top_degree() + 1); }

    std::vector<size_t> poincare() const {
        std::vector<size_t> dims;
        for (int d = 0; d <= top_degree(); ++d) dims.push_back(quotient_basis(d).basis.size());
        return dims;
    }
    size_t total_dim() const {
        size_t s = 0;
        for (auto v : poincare()) s += v;
        return s;
    }

    // Normal form of a polynomial in terms of basis monomials.
    Poly normal_form(const Poly& a) const {
        Poly r;
        for (auto& [e, c] : a) {
            int d = exps_degree(e);
            if (d > top_degree() && isolated()) continue;
            const QuotientDegree& q = quotient_basis(d);
            auto it = q.nf.find(e);
            if (it == q.nf.end()) throw std::logic_error("monomial missing from normal-form table");
            for (auto& [bi, v] : it->second) {
                Rational& t = r[q.basis[bi]];
                t += c * v;
                if (t == 0) r.erase(q.basis[bi]);
            }
        }
        return r;
    }

    Poly multiply(const Poly& a, const Poly& b) const { return normal_form(poly_mul(a, b)); }

private:
    const QuotientDegree& degree_data(int d) const {
        std::lock_guard<std::mutex> lk(*mu_);
        auto it = cache_.find(d);
        if (it != cache_.end()) return *it->second;
        auto q = std::make_unique<QuotientDegree>(fermat_ ? fermat_degree(d) : general_degree(d));
        return *cache_.emplace(d, std::move(q)).first->second;
    }

    QuotientDegree fermat_degree(int d) const {
        QuotientDegree q;
        q.degree = d;
        for (auto& e : monomials(f_.n, d)) {
            bool red = std::all_of(e.begin(), e.end(), [&](int v) { return v <= f_.p - 2; });
            if (red) {
                q.nf[e] = {{q.basis.size(), Rational(1)}};
                q.basis.push_back(e);
            } else {
                q.nf[e] = {};
            }
        }
        return q;
    }

    QuotientDegree general_degree(int d) const {
        QuotientDegree q;
        q.degree = d;
        std::vector<Exps> mons = monomials(f_.n, d);
        std::map<Exps, size_t> col;
        for (size_t i = 0; i < mons.size(); ++i) col[mons[i]] = i;
        std::vector<Exps> mult = monomials(f_.n, d - (f_.p - 1));
        Matrix m(mult.size() * f_.n, mons.size());
        size_t row = 0;
        for (auto& a : mult)
            for (auto& g : jac_) {
                for (auto& [e, c] : g.terms) {
                    Exps s = e;
                    for (int i = 0; i < f_.n; ++i) s[i] += a[i];
                    m(row, col.at(s)) += c;
                }
                ++row;
            }
        Echelon ech = rref(m);
        std::vector<bool> pivot(mons.size(), false);
        for (auto p : ech.pivots) pivot[p] = true;
        std::vector<size_t> bidx(mons.size(), SIZE_MAX);
        for (size_t j = 0; j < mons.size(); ++j)
            if (!pivot[j]) {
                bidx[j] = q.basis.size();
                q.basis.push_back(mons[j]);
                q.nf[mons[j]] = {{bidx[j], Rational(1)}};
            }
        for (size_t r = 0; r < ech.pivots.size(); ++r) {
            std::vector<std::pair<size_t, Rational>> v;
            for (size_t j = 0; j < mons.size(); ++j)
                if (!pivot[j] && ech.r(r, j) != 0) v.emplace_back(bidx[j], -ech.r(r, j));
            q.nf[mons[ech.pivots[r]]] = std::move(v);
        }
        return q;
    }

    HomogeneousPoly f_;
    std::vector<HomogeneousPoly> jac_;
    bool fermat_;
    mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
    mutable std::map<int, std::unique_ptr<QuotientDegree>> cache_;
};

inline MilnorRing quotient_ring(const HomogeneousPoly& f) { return MilnorRing(f); }

// Dimensions of the Z_N-invariant part: degrees divisible by group_order.
inline std::vector<std::pair<int, size_t>> invariant_poincare(const HomogeneousPoly& f, int group_order) {
    MilnorRing R(f);
    R.require_isolated();
    std::vector<std::pair<int, size_t>> out;
    for (int d = 0; d <= R.top_degree(); d += group_order) out.emplace_back(d, R.quotient_basis(d).basis.size());
    return out;
}

// Koszul complex Lambda^k T tensor C[x] with contraction by df. Internal
// degree of x^a d_I is |a| + k(p-1).
struct KoszulDims {
    size_t chain_dim = 0, rank_out = 0, rank_in = 0;
    size_t homology() const { return chain_dim - rank_out - rank_in; }
};

namespace detail {

inline std::vector<std::vector<int>> subsets(int n, int k) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(cur.size()) == k) {
            out.push_back(cur);
            return;
        }
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return out;
}

inline std::vector<std::pair<Exps, std::vector<int>>> koszul_basis(const HomogeneousPoly& f, int k, int d) {
    std::vector<std::pair<Exps, std::vector<int>>> out;
    if (k < 0 || k > f.n) return out;
    int a = d - k * (f.p - 1);
    if (a < 0) return out;
    for (auto& I : subsets(f.n, k))
        for (auto& e : monomials(f.n, a)) out.emplace_back(e, I);
    return out;
}

// matrix of C_k -> C_{k-1} at internal degree d (rows: target basis)
inline Matrix koszul_differential(const HomogeneousPoly& f, const std::vector<HomogeneousPoly>& jac, int k, int d) {
    auto src = koszul_basis(f, k, d);
    auto dst = koszul_basis(f, k - 1, d);
    std::map<std::pair<Exps, std::vector<int>>, size_t> idx;
    for (size_t i = 0; i < dst.size(); ++i) idx[dst[i]] = i;
    Matrix m(dst.size(), src.size());
    for (size_t c = 0; c < src.size(); ++c) {
        auto& [e, I] = src[c];
        for (size_t t = 0; t < I.size(); ++t) {
            std::vector<int> J = I;
            J.erase(J.begin() + t);
            Rational sgn = (t % 2) ? -1 : 1;
            for (auto& [g, cg] : jac[I[t]].terms) {
                Exps s = e;
                for (int i = 0; i < f.n; ++i) s[i] += g[i];
                m(idx.at({s, J}), c) += sgn * cg;
            }
        }
    }
    return m;
}

}  // namespace detail

inline KoszulDims koszul_dims(const HomogeneousPoly& f, int k, int d) {
    auto jac = jacobian(f);
    KoszulDims r;
    r.chain_dim = detail::koszul_basis(f, k, d).size();
    if (k >= 1) r.rank_out = rank(detail::koszul_differential(f, jac, k, d));
    if (k + 1 <= f.n) r.rank_in = rank(detail::koszul_differential(f, jac, k + 1, d));
    return r;
}

inline size_t koszul_homology(const HomogeneousPoly& f, int k, int d) {
    if (k < 0 || k > f.n) throw std::invalid_argument("polyvector degree out of range");
    return koszul_dims(f, k, d).homology();
}

// Hodge numbers of the degree-N Fermat hypersurface in P^{N-1}.
struct HodgeTable {
    int dim = 0;
    std::map<std::pair<int, int>, long> h;

    long at(int p, int q) const {
        auto it = h.find({p, q});
        return it == h.end() ? 0 : it->second;
    }
    long euler() const {
        long s = 0;
        for (auto& [pq, v] : h) s += ((pq.first + pq.second) % 2 ? -1 : 1) * v;
        return s;
    }
};

inline HodgeTable hodge_numbers(int N) {
    if (N < 3) throw std::invalid_argument("hodge_numbers requires N >= 3");
    HodgeTable t;
    t.dim = N - 2;
    for (int p = 0; p <= t.dim; ++p)
        for (int q = 0; q <= t.dim; ++q) t.h[{p, q}] = 0;
    // invariant Milnor classes of degree mN sit in H^m(Lambda^m T) = H^m(Omega^{N-2-m})
    for (auto& [d, dim] : invariant_poincare(HomogeneousPoly::fermat(N, N), N)) {
        int m = d / N;
        t.h[{N - 2 - m, m}] += static_cast<long>(dim);
    }
    // twisted class e_i in H^{i-1}(Lambda^{N-i-1} T) = H^{i-1}(Omega^{i-1})
    for (int i = 1; i <= N - 1; ++i) t.h[{i - 1, i - 1}] += 1;
    return t;
}

// chi = N [h^{N-2}] (1+h)^N / (1+Nh)
inline Integer euler_number_oracle(int N) {
    if (N < 3) throw std::invalid_argument("euler_number_oracle requires N >= 3");
    Integer s = 0;
    for (int k = N - 2; k >= 0; --k) {
        // coefficient: binom(N, N-2-k) * (-N)^k
        Integer t = binomial(N, N - 2 - k);
        Integer pk;
        mpz_pow_ui(pk.get_mpz_t(), Integer(-N).get_mpz_t(), static_cast<unsigned long>(k));
        s += t * pk;
    }
    return s * N;
}

// chi_y = sum (-1)^q h^{p,q} y^p, as exponent -> coefficient
inline std::map<int, Integer> chi_y_oracle(int N) {
    HodgeTable t = hodge_numbers(N);
    std::map<int, Integer> out;
    for (auto& [pq, v] : t.h) {
        if (v == 0) continue;
        out[pq.first] += (pq.second % 2 ? -1 : 1) * v;
    }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

}  // namespace lgcy
