#pragma once

#include "lgcy/linalg.hpp"
#include "lgcy/milnor.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgcy::chiral {

// Vector in the lattice spanned by X_i, X_i^* (rational coefficients allowed on
// X^*, for multiples of X^*_orb) and the odd orthonormal chi_i.
struct LatticeVector {
    std::vector<Rational> x, xs;
    std::vector<long> chi;

    explicit LatticeVector(int N = 0) : x(N, 0), xs(N, 0), chi(N, 0) {}
    int rank() const { return int(x.size()); }
    bool is_zero() const {
        for (int i = 0; i < rank(); ++i)
            if (x[i] != 0 || xs[i] != 0 || chi[i] != 0) return false;
        return true;
    }
    friend LatticeVector operator+(LatticeVector a, const LatticeVector& b) {
        for (int i = 0; i < a.rank(); ++i) {
            a.x[i] += b.x[i];
            a.xs[i] += b.xs[i];
            a.chi[i] += b.chi[i];
        }
        return a;
    }
    friend bool operator==(const LatticeVector&, const LatticeVector&) = default;

    static LatticeVector X(int N, int i) {
        LatticeVector v(N);
        v.x[i] = 1;
        return v;
    }
    static LatticeVector Xs(int N, int i) {
        LatticeVector v(N);
        v.xs[i] = 1;
        return v;
    }
    static LatticeVector chi_(int N, int i) {
        LatticeVector v(N);
        v.chi[i] = 1;
        return v;
    }
    // (1/N) sum_j X_j^*
    static LatticeVector xs_orb(int N) {
        LatticeVector v(N);
        for (auto& c : v.xs) c = rat(1, N);
        return v;
    }
    // i X^*_orb - sum_j (X_j + chi_j)
    static LatticeVector twisted(int N, int i) {
        LatticeVector v(N);
        for (int j = 0; j < N; ++j) {
            v.xs[j] = rat(i, N);
            v.x[j] = -1;
            v.chi[j] = -1;
        }
        return v;
    }
    // sum_j m_j X_j
    static LatticeVector milnor(const Exps& m) {
        LatticeVector v(int(m.size()));
        for (size_t j = 0; j < m.size(); ++j) v.x[j] = m[j];
        return v;
    }
};

inline Rational pairing(const LatticeVector& a, const LatticeVector& b) {
    Rational r = 0;
    for (int i = 0; i < a.rank(); ++i) r += a.xs[i] * b.x[i] + a.x[i] * b.xs[i] + Rational(a.chi[i] * b.chi[i]);
    return r;
}

struct ChiralOptions {
    // test hook: breaks the cocycle normalization eps(a, 0) = 1
    bool mutate_epsilon = false;
};

// Bimultiplicative sign: (-1)^{a^*(b)} on the bosonic part and the
// ordered-basis cocycle eps(chi_i, chi_j) = -1 for i > j on the odd part.
inline int epsilon(const LatticeVector& a, const LatticeVector& b, const ChiralOptions& opt = {}) {
    if (opt.mutate_epsilon && b.is_zero()) return -1;
    Rational e = 0;
    for (int i = 0; i < a.rank(); ++i) e += a.xs[i] * b.x[i];
    if (!is_integer(e)) throw std::domain_error("epsilon needs an integral pairing, got " + e.get_str());
    long s = to_long(e);
    for (int i = 0; i < a.rank(); ++i)
        for (int j = 0; j < i; ++j) s += a.chi[i] * b.chi[j];
    return mod(s, 2) ? -1 : 1;
}

struct LatticeTerm {
    int sign = 0;  // 0 means the product vanishes
    LatticeVector v;
};

// (e^a)_(-1) e^b: 0 if (a,b) > 0, eps(a,b) e^{a+b} if (a,b) = 0.
inline LatticeTerm lattice_product(const LatticeVector& a, const LatticeVector& b, const ChiralOptions& opt = {}) {
    Rational p = pairing(a, b);
    if (p < 0)
        throw std::domain_error("lattice product with negative pairing " + p.get_str() + " is not supported");
    if (p > 0) return {0, LatticeVector(a.rank())};
    return {epsilon(a, b, opt), a + b};
}

// Constant c with e^{N X^*_orb - 2 sum_j (X_j + chi_j)} = c * prod_j x_j^{N-2}
// in cohomology. It cancels the odd-lattice cocycle so that e_s e_{N-s} = (-1)^s top.
inline int top_identification(int N) { return ((N * (N - 1) / 2) % 2) ? -1 : 1; }

struct BasisClass {
    enum class Kind { twisted, milnor } kind;
    int index = 0;  // twisted: i; milnor: unused
    Exps mono;      // milnor monomial
    int cdeg = 0, pdeg = 0;

    std::string str() const {
        if (kind == Kind::twisted) return "e" + std::to_string(index);
        std::string s;
        for (size_t j = 0; j < mono.size(); ++j)
            if (mono[j]) s += "x" + std::to_string(j) + (mono[j] > 1 ? "^" + std::to_string(mono[j]) : "");
        return s.empty() ? "1" : s;
    }
    int total() const { return cdeg + pdeg; }
};

using Class = std::vector<Rational>;
// sorted (basis index, coefficient) pairs
using Sparse = std::vector<std::pair<size_t, Rational>>;

inline Sparse sparse_of(const Class& c) {
    Sparse s;
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) s.emplace_back(i, c[i]);
    return s;
}

// The ring C^{N-1} + (M_f)^{Z_N} for the Fermat polynomial of degree N.
class ChiralRing {
public:
    explicit ChiralRing(int N, ChiralOptions opt = {})
        : N_(N), opt_(opt), milnor_(HomogeneousPoly::fermat(N, N)) {
        if (N < 3) throw std::invalid_argument("chiral ring needs N >= 3");
        for (int i = 1; i <= N - 1; ++i)
            basis_.push_back({BasisClass::Kind::twisted, i, {}, i - 1, N - i - 1});
        for (int m = 0; m * N <= milnor_.top_degree(); ++m)
            for (auto& e : milnor_.quotient_basis(m * N).basis) {
                index_[e] = basis_.size();
                basis_.push_back({BasisClass::Kind::milnor, 0, e, m, m});
            }
        Exps top(N, N - 2);
        top_ = index_.at(top);
        build_table();
    }

    int N() const { return N_; }
    size_t dim() const { return basis_.size(); }
    const std::vector<BasisClass>& basis() const { return basis_; }
    size_t top_index() const { return top_; }
    const MilnorRing& milnor() const { return milnor_; }

    LatticeVector vector_of(const BasisClass& b) const {
        return b.kind == BasisClass::Kind::twisted ? LatticeVector::twisted(N_, b.index) : LatticeVector::milnor(b.mono);
    }

    Class unit(size_t i) const {
        Class c(dim(), 0);
        c[i] = 1;
        return c;
    }

    const Sparse& table(size_t a, size_t b) const { return table_[a][b]; }

    Sparse multiply(const Sparse& a, const Sparse& b) const {
        std::map<size_t, Rational> acc;
        for (auto& [i, ca] : a)
            for (auto& [j, cb] : b)
                for (auto& [k, ct] : table_[i][j]) acc[k] += ca * cb * ct;
        Sparse r;
        for (auto& [k, v] : acc)
            if (v != 0) r.emplace_back(k, v);
        return r;
    }
    Class multiply(const Class& a, const Class& b) const {
        Class r(dim(), 0);
        for (auto& [k, v] : multiply(sparse_of(a), sparse_of(b))) r[k] = v;
        return r;
    }
    Sparse unit_sparse(size_t i) const { return {{i, Rational(1)}}; }

    std::string str(const Sparse& c) const {
        std::string s;
        for (auto& [i, v] : c) {
            if (!s.empty()) s += " + ";
            s += "(" + v.get_str() + ")" + basis_[i].str();
        }
        return s.empty() ? "0" : s;
    }
    std::string str(const Class& c) const { return str(sparse_of(c)); }

private:
    // Product of two basis classes.
    Class basis_product(const BasisClass& a, const BasisClass& b) const {
        using K = BasisClass::Kind;
        Class r(dim(), 0);
        if (a.kind == K::milnor && b.kind == K::milnor) {
            Poly pa{{a.mono, 1}}, pb{{b.mono, 1}};
            for (auto& [e, c] : milnor_.multiply(pa, pb)) r[index_.at(e)] += c;
            return r;
        }
        // bigrade overflow: the target exceeds the top class
        if (a.cdeg + b.cdeg > N_ - 2 || a.pdeg + b.pdeg > N_ - 2) return r;
        LatticeTerm t = lattice_product(vector_of(a), vector_of(b), opt_);
        if (t.sign == 0) return r;
        if (a.kind == K::twisted && b.kind == K::twisted) {
            r[top_] = Rational(t.sign * top_identification(N_));
            return r;
        }
        // twisted times the unit class
        int i = a.kind == K::twisted ? a.index : b.index;
        if (!(t.v == LatticeVector::twisted(N_, i))) throw std::logic_error("unexpected lattice product");
        r[size_t(i - 1)] = Rational(t.sign);
        return r;
    }

    void build_table() {
        table_.assign(dim(), std::vector<Sparse>(dim()));
        for (size_t i = 0; i < dim(); ++i)
            for (size_t j = 0; j < dim(); ++j) table_[i][j] = sparse_of(basis_product(basis_[i], basis_[j]));
    }

    int N_;
    ChiralOptions opt_;
    MilnorRing milnor_;
    std::vector<BasisClass> basis_;
    std::map<Exps, size_t> index_;
    size_t top_ = 0;
    std::vector<std::vector<Sparse>> table_;
};

struct RingCheck {
    bool pass = true;
    size_t checked = 0;
    std::optional<std::string> witness;
};

inline RingCheck check_associative(const ChiralRing& R) {
    RingCheck r;
    for (size_t a = 0; a < R.dim(); ++a)
        for (size_t b = 0; b < R.dim(); ++b)
            for (size_t c = 0; c < R.dim(); ++c) {
                ++r.checked;
                Sparse l = R.multiply(R.table(a, b), R.unit_sparse(c));
                Sparse rr = R.multiply(R.unit_sparse(a), R.table(b, c));
                if (l != rr) {
                    r.pass = false;
                    r.witness = "(" + R.basis()[a].str() + "*" + R.basis()[b].str() + ")*" + R.basis()[c].str() +
                                " = " + R.str(l) + " but " + R.basis()[a].str() + "*(" + R.basis()[b].str() + "*" +
                                R.basis()[c].str() + ") = " + R.str(rr);
                    return r;
                }
            }
    return r;
}

inline RingCheck check_graded_commutative(const ChiralRing& R) {
    RingCheck r;
    for (size_t a = 0; a < R.dim(); ++a)
        for (size_t b = 0; b < R.dim(); ++b) {
            ++r.checked;
            int s = (R.basis()[a].total() * R.basis()[b].total()) % 2 ? -1 : 1;
            Sparse ba = R.table(b, a);
            for (auto& kv : ba) kv.second *= s;
            if (R.table(a, b) != ba) {
                r.pass = false;
                r.witness = R.basis()[a].str() + "*" + R.basis()[b].str() + " = " + R.str(R.table(a, b)) +
                            " vs " + R.str(R.table(b, a));
                return r;
            }
        }
    return r;
}

inline RingCheck check_bigrades(const ChiralRing& R) {
    RingCheck r;
    for (size_t a = 0; a < R.dim(); ++a)
        for (size_t b = 0; b < R.dim(); ++b) {
            ++r.checked;
            auto& A = R.basis()[a];
            auto& B = R.basis()[b];
            for (auto& [k, v] : R.table(a, b))
                if (v != 0 && (R.basis()[k].cdeg != A.cdeg + B.cdeg || R.basis()[k].pdeg != A.pdeg + B.pdeg)) {
                    r.pass = false;
                    r.witness = A.str() + "*" + B.str() + " has a component outside the summed bigrade";
                    return r;
                }
        }
    return r;
}

// The product rules stated case by case, checked against the table.
inline RingCheck check_product_rules(const ChiralRing& R) {
    RingCheck r;
    int N = R.N();
    using K = BasisClass::Kind;
    for (size_t a = 0; a < R.dim(); ++a)
        for (size_t b = 0; b < R.dim(); ++b) {
            auto& A = R.basis()[a];
            auto& B = R.basis()[b];
            Class expect(R.dim(), 0);
            if (A.kind == K::twisted && B.kind == K::twisted) {
                if (A.index + B.index == N) expect[R.top_index()] = (A.index % 2) ? -1 : 1;
            } else if (A.kind == K::twisted || B.kind == K::twisted) {
                const BasisClass& T = A.kind == K::twisted ? A : B;
                const BasisClass& M = A.kind == K::twisted ? B : A;
                if (exps_degree(M.mono) == 0) expect[size_t(T.index - 1)] = 1;
            } else {
                continue;  // Milnor products are the normal-form products by construction
            }
            ++r.checked;
            if (R.table(a, b) != sparse_of(expect)) {
                r.pass = false;
                r.witness = A.str() + "*" + B.str() + " = " + R.str(R.table(a, b)) + ", rule gives " + R.str(expect);
                return r;
            }
        }
    return r;
}

struct PairingBlock {
    int p, q;  // bigrade of the rows; columns have the complementary bigrade
    std::vector<size_t> rows, cols;
    Matrix M;
    size_t rank = 0;
    bool nondegenerate() const { return rows.size() == cols.size() && rank == rows.size(); }
};

// Coefficient of the top class in products, per complementary bigrade pair.
inline std::vector<PairingBlock> pairing_matrix(const ChiralRing& R) {
    int top = R.N() - 2;
    std::map<std::pair<int, int>, std::vector<size_t>> by;
    for (size_t i = 0; i < R.dim(); ++i) by[{R.basis()[i].cdeg, R.basis()[i].pdeg}].push_back(i);
    std::vector<PairingBlock> out;
    for (auto& [g, rows] : by) {
        auto it = by.find({top - g.first, top - g.second});
        std::vector<size_t> cols = it == by.end() ? std::vector<size_t>{} : it->second;
        PairingBlock b{g.first, g.second, rows, cols, Matrix(rows.size(), cols.size()), 0};
        for (size_t r = 0; r < rows.size(); ++r)
            for (size_t c = 0; c < cols.size(); ++c)
                for (auto& [k, v] : R.table(rows[r], cols[c]))
                    if (k == R.top_index()) b.M(r, c) = v;
        b.rank = rank(b.M);
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace lgcy::chiral
