#pragma once

#include "lgcy/milnor.hpp"
#include "lgcy/rational.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace lgcy::ff {

// x, its conjugate d/dx, the odd dx, and its conjugate d/d(dx).
enum class Kind : uint8_t { x = 0, del_x = 1, dx = 2, del_dx = 3 };

constexpr Kind all_kinds[] = {Kind::x, Kind::del_x, Kind::dx, Kind::del_dx};

inline bool is_odd(Kind k) { return k == Kind::dx || k == Kind::del_dx; }

inline Kind partner(Kind k) {
    switch (k) {
        case Kind::x: return Kind::del_x;
        case Kind::del_x: return Kind::x;
        case Kind::dx: return Kind::del_dx;
        default: return Kind::dx;
    }
}

inline const char* kind_name(Kind k) {
    switch (k) {
        case Kind::x: return "x";
        case Kind::del_x: return "Dx";
        case Kind::dx: return "dx";
        default: return "Ddx";
    }
}

// Grading used only to bound normally ordered sums: a creation mode g_(-l)
// adds h(g) + l - 1 >= 0.
inline int bound_weight(Kind k) { return (k == Kind::del_x || k == Kind::del_dx) ? 1 : 0; }

// A creation operator g_(-level) with level >= 1.
struct Mode {
    Kind kind;
    int var;
    int level;
    bool operator==(const Mode&) const = default;
};

// Product of creation modes on the vacuum. Entries are kept sorted by
// (kind, var, level); the state is the product in that order applied to |0>.
// Odd modes appear with exponent 1.
class Monomial {
public:
    static uint64_t pack(Kind k, int var, int level, int exp) {
        return (uint64_t(k) << 56) | (uint64_t(var) << 40) | (uint64_t(level) << 16) | uint64_t(exp);
    }
    static uint64_t key_of(uint64_t e) { return e >> 16; }
    static Kind kind_of(uint64_t e) { return Kind(e >> 56); }
    static int var_of(uint64_t e) { return int((e >> 40) & 0xFFFF); }
    static int level_of(uint64_t e) { return int((e >> 16) & 0xFFFFFF); }
    static int exp_of(uint64_t e) { return int(e & 0xFFFF); }

    const std::vector<uint64_t>& entries() const { return e_; }
    bool is_vacuum() const { return e_.empty(); }

    int exponent(Kind k, int var, int level) const {
        auto it = find(pack(k, var, level, 0) >> 16);
        return it == e_.end() ? 0 : exp_of(*it);
    }

    // Multiplies by g_(-level) from the left; returns the sign (0 if it vanishes).
    int insert(Kind k, int var, int level) {
        if (level < 1) throw std::invalid_argument("creation level must be >= 1");
        uint64_t key = pack(k, var, level, 0) >> 16;
        auto it = lower(key);
        int sign = 1;
        if (is_odd(k)) sign = odd_before(it) % 2 ? -1 : 1;
        if (it != e_.end() && key_of(*it) == key) {
            if (is_odd(k)) return 0;
            *it += 1;
        } else {
            e_.insert(it, pack(k, var, level, 1));
        }
        return sign;
    }

    // Removes one g_(-level) acting from the left as a (graded) derivative.
    // Returns the coefficient (exponent times sign), 0 if absent.
    long remove(Kind k, int var, int level) {
        uint64_t key = pack(k, var, level, 0) >> 16;
        auto it = lower(key);
        if (it == e_.end() || key_of(*it) != key) return 0;
        long c = exp_of(*it);
        if (is_odd(k)) c = odd_before(it) % 2 ? -1 : 1;
        if (exp_of(*it) == 1)
            e_.erase(it);
        else
            *it -= 1;
        return c;
    }

    int bound_weight() const {
        int w = 0;
        for (auto e : e_) w += exp_of(e) * (ff::bound_weight(kind_of(e)) + level_of(e) - 1);
        return w;
    }
    int total_level() const {
        int w = 0;
        for (auto e : e_) w += exp_of(e) * level_of(e);
        return w;
    }
    int parity() const {
        int p = 0;
        for (auto e : e_)
            if (is_odd(kind_of(e))) p ^= 1;
        return p;
    }
    // number of x, del_x, dx, del_dx factors
    std::array<int, 4> kind_counts() const {
        std::array<int, 4> c{0, 0, 0, 0};
        for (auto e : e_) c[int(kind_of(e))] += exp_of(e);
        return c;
    }

    std::string str() const {
        if (e_.empty()) return "|0>";
        std::ostringstream os;
        for (auto e : e_) {
            os << kind_name(kind_of(e)) << var_of(e) << "(-" << level_of(e) << ")";
            if (exp_of(e) > 1) os << "^" << exp_of(e);
            os << " ";
        }
        os << "|0>";
        return os.str();
    }

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
    friend bool operator<(const Monomial& a, const Monomial& b) {
        if (a.total_level() != b.total_level()) return a.total_level() < b.total_level();
        return a.e_ < b.e_;
    }

    size_t hash() const {
        uint64_t h = 1469598103934665603ull;
        for (auto e : e_) {
            h ^= e + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
            h *= 1099511628211ull;
        }
        return size_t(h);
    }

private:
    std::vector<uint64_t>::iterator lower(uint64_t key) {
        return std::lower_bound(e_.begin(), e_.end(), key << 16);
    }
    std::vector<uint64_t>::const_iterator find(uint64_t key) const {
        auto it = std::lower_bound(e_.begin(), e_.end(), key << 16);
        if (it != e_.end() && key_of(*it) == key) return it;
        return e_.end();
    }
    int odd_before(std::vector<uint64_t>::const_iterator it) const {
        int c = 0;
        for (auto j = e_.cbegin(); j != it; ++j)
            if (is_odd(kind_of(*j))) ++c;
        return c;
    }

    std::vector<uint64_t> e_;
};

struct MonomialHash {
    size_t operator()(const Monomial& m) const { return m.hash(); }
};

// Applies the creation modes in order, rightmost first: modes[0] ends up leftmost.
inline std::pair<int, Monomial> make_monomial(const std::vector<Mode>& modes) {
    Monomial m;
    int sign = 1;
    for (size_t i = modes.size(); i-- > 0;) {
        sign *= m.insert(modes[i].kind, modes[i].var, modes[i].level);
        if (sign == 0) return {0, Monomial{}};
    }
    return {sign, m};
}

// Finite rational combination of monomials.
class State {
public:
    using Map = std::unordered_map<Monomial, Rational, MonomialHash>;

    State() = default;
    static State vacuum() {
        State s;
        s.add(Monomial{}, 1);
        return s;
    }
    static State of(const Monomial& m, const Rational& c = 1) {
        State s;
        s.add(m, c);
        return s;
    }
    static State from_modes(const std::vector<Mode>& modes) {
        auto [sgn, m] = make_monomial(modes);
        State s;
        if (sgn) s.add(m, sgn);
        return s;
    }

    void add(const Monomial& m, const Rational& c) {
        if (c == 0) return;
        auto [it, ins] = t_.try_emplace(m, c);
        if (!ins) {
            it->second += c;
            if (it->second == 0) t_.erase(it);
        }
    }
    void add(const State& o, const Rational& c = 1) {
        if (c == 0) return;
        for (auto& [m, v] : o.t_) add(m, v * c);
    }
    State& operator+=(const State& o) {
        add(o);
        return *this;
    }
    State& operator-=(const State& o) {
        add(o, -1);
        return *this;
    }
    friend State operator+(State a, const State& b) { return a += b; }
    friend State operator-(State a, const State& b) { return a -= b; }
    friend State operator*(const Rational& c, const State& s) {
        State r;
        r.add(s, c);
        return r;
    }

    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }
    const Map& terms() const { return t_; }
    Rational coeff(const Monomial& m) const {
        auto it = t_.find(m);
        return it == t_.end() ? Rational(0) : it->second;
    }

    int bound_weight() const {
        int w = 0;
        for (auto& [m, c] : t_) w = std::max(w, m.bound_weight());
        return w;
    }

    std::vector<std::pair<Monomial, Rational>> sorted() const {
        std::vector<std::pair<Monomial, Rational>> v(t_.begin(), t_.end());
        std::sort(v.begin(), v.end(), [](auto& a, auto& b) { return a.first < b.first; });
        return v;
    }

    friend bool operator==(const State& a, const State& b) {
        if (a.t_.size() != b.t_.size()) return false;
        for (auto& [m, c] : a.t_) {
            auto it = b.t_.find(m);
            if (it == b.t_.end() || it->second != c) return false;
        }
        return true;
    }
    friend bool operator!=(const State& a, const State& b) { return !(a == b); }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto& [m, c] : sorted()) {
            if (!first) os << " + ";
            os << "(" << c.get_str() << ") " << m.str();
            first = false;
        }
        return os.str();
    }

private:
    Map t_;
};

// ---------------------------------------------------------------------------
// Field expressions

struct FieldNode;
using FieldPtr = std::shared_ptr<const FieldNode>;

struct FieldNode {
    enum class Type { gen, identity, deriv, nop, scale, sum } type;
    Kind kind = Kind::x;
    int var = 0;
    FieldPtr a, b;
    Rational c;
    std::vector<FieldPtr> terms;
    bool odd = false;
    int weight = 0;  // bound for the mode-sum truncation
    uint64_t id = 0;

    static uint64_t next_id() {
        static std::atomic<uint64_t> n{1};
        return n++;
    }
};

class Field {
public:
    Field() : Field(sum_of({})) {}
    explicit Field(FieldPtr p) : p_(std::move(p)) {}

    static Field gen(Kind k, int var) {
        auto n = std::make_shared<FieldNode>();
        n->type = FieldNode::Type::gen;
        n->kind = k;
        n->var = var;
        n->odd = is_odd(k);
        n->weight = ff::bound_weight(k);
        n->id = FieldNode::next_id();
        return Field(n);
    }
    static Field identity() {
        static const Field one = [] {
            auto n = std::make_shared<FieldNode>();
            n->type = FieldNode::Type::identity;
            n->id = FieldNode::next_id();
            return Field(n);
        }();
        return one;
    }
    static Field x(int i) { return gen(Kind::x, i); }
    static Field del_x(int i) { return gen(Kind::del_x, i); }
    static Field dx(int i) { return gen(Kind::dx, i); }
    static Field del_dx(int i) { return gen(Kind::del_dx, i); }

    friend Field deriv(const Field& f) {
        auto n = std::make_shared<FieldNode>();
        n->type = FieldNode::Type::deriv;
        n->a = f.p_;
        n->odd = f.p_->odd;
        n->weight = f.p_->weight + 1;
        n->id = FieldNode::next_id();
        return Field(n);
    }
    friend Field nop(const Field& a, const Field& b) {
        auto n = std::make_shared<FieldNode>();
        n->type = FieldNode::Type::nop;
        n->a = a.p_;
        n->b = b.p_;
        n->odd = a.p_->odd != b.p_->odd;
        n->weight = a.p_->weight + b.p_->weight;
        n->id = FieldNode::next_id();
        return Field(n);
    }
    friend Field operator*(const Rational& c, const Field& f) {
        auto n = std::make_shared<FieldNode>();
        n->type = FieldNode::Type::scale;
        n->a = f.p_;
        n->c = c;
        n->odd = f.p_->odd;
        n->weight = f.p_->weight;
        n->id = FieldNode::next_id();
        return Field(n);
    }
    friend Field operator+(const Field& a, const Field& b) { return sum_of({a, b}); }
    friend Field operator-(const Field& a, const Field& b) { return sum_of({a, Rational(-1) * b}); }

    static Field sum_of(const std::vector<Field>& fs) {
        auto n = std::make_shared<FieldNode>();
        n->type = FieldNode::Type::sum;
        bool have = false;
        for (auto& f : fs) {
            if (f.p_->type == FieldNode::Type::sum && f.p_->terms.empty()) continue;
            if (have && f.p_->odd != n->odd) throw std::invalid_argument("sum of fields with mixed parity");
            n->odd = f.p_->odd;
            have = true;
            n->weight = std::max(n->weight, f.p_->weight);
            if (f.p_->type == FieldNode::Type::sum)
                n->terms.insert(n->terms.end(), f.p_->terms.begin(), f.p_->terms.end());
            else
                n->terms.push_back(f.p_);
        }
        n->id = FieldNode::next_id();
        return Field(n);
    }

    bool odd() const { return p_->odd; }
    int weight() const { return p_->weight; }
    const FieldNode* node() const { return p_.get(); }
    const FieldPtr& ptr() const { return p_; }

private:
    FieldPtr p_;
};

// :x^e: for an exponent vector as nested normally ordered products.
inline Field x_power(const Exps& e) {
    std::vector<Field> xs;
    for (size_t i = 0; i < e.size(); ++i)
        for (int k = 0; k < e[i]; ++k) xs.push_back(Field::x(int(i)));
    if (xs.empty()) return Field::identity();
    Field f = xs.back();
    for (size_t i = xs.size() - 1; i-- > 0;) f = nop(xs[i], f);
    return f;
}

inline Field polynomial_of_x(const Poly& p) {
    std::vector<Field> ts;
    for (auto& [e, c] : p) ts.push_back(c * x_power(e));
    return Field::sum_of(ts);
}

// ---------------------------------------------------------------------------
// Mode engine

class Engine {
public:
    // f_(n) v
    State apply(const Field& f, long n, const State& v) { return apply(f.node(), n, v); }

    State apply(const FieldNode* f, long n, const State& v) {
        State out;
        for (auto& [m, c] : v.terms()) out.add(apply_mono(f, n, m), c);
        return out;
    }

    State apply_mono(const FieldNode* f, long n, const Monomial& m) {
        using T = FieldNode::Type;
        switch (f->type) {
            case T::gen: return apply_gen(f->kind, f->var, n, m);
            case T::identity: return n == -1 ? State::of(m) : State{};
            case T::scale: return f->c * apply_mono(f->a.get(), n, m);
            case T::sum: {
                State out;
                for (auto& t : f->terms) out += apply_mono(t.get(), n, m);
                return out;
            }
            case T::deriv: {
                // (Ta)_(n) = -n a_(n-1)
                if (n == 0) return State{};
                return Rational(-n) * apply_mono(f->a.get(), n - 1, m);
            }
            case T::nop: break;
        }
        MemoKey key{f->id, n, m};
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        State out = apply_nop(f, n, m);
        if (memo_.size() > memo_limit_) memo_.clear();
        memo_.emplace(std::move(key), out);
        return out;
    }

    static State apply_gen(Kind k, int var, long n, const Monomial& m) {
        Monomial r = m;
        if (n <= -1) {
            int s = r.insert(k, var, int(-n));
            return s ? State::of(r, s) : State{};
        }
        // annihilator: graded derivative in the conjugate mode at level n+1
        long c = r.remove(partner(k), var, int(n + 1));
        if (c == 0) return State{};
        if (k == Kind::x) c = -c;
        return State::of(r, c);
    }

    void clear_cache() { memo_.clear(); }
    void set_cache_limit(size_t n) { memo_limit_ = n; }

private:
    State apply_nop(const FieldNode* f, long n, const Monomial& m) {
        // (:AB:)_(n) = sum_{k<0} A_(k) B_(n-k-1) + (-1)^{|A||B|} sum_{k>=0} B_(n-k-1) A_(k)
        const FieldNode* A = f->a.get();
        const FieldNode* B = f->b.get();
        long w = m.bound_weight();
        State out;
        for (long k = n - w - B->weight; k <= -1; ++k) {
            State t = apply_mono(B, n - k - 1, m);
            if (!t.is_zero()) out += apply(A, k, t);
        }
        Rational sign = (A->odd && B->odd) ? -1 : 1;
        for (long k = 0; k <= w + A->weight - 1; ++k) {
            State t = apply_mono(A, k, m);
            if (!t.is_zero()) out.add(apply(B, n - k - 1, t), sign);
        }
        return out;
    }

    struct MemoKey {
        uint64_t id;
        long n;
        Monomial m;
        bool operator==(const MemoKey& o) const { return id == o.id && n == o.n && m == o.m; }
    };
    struct MemoHash {
        size_t operator()(const MemoKey& k) const {
            return k.m.hash() ^ (std::hash<uint64_t>()(k.id) * 31 + std::hash<long>()(k.n) * 1000003);
        }
    };
    std::unordered_map<MemoKey, State, MemoHash> memo_;
    size_t memo_limit_ = 400000;
};

// Field Y(v, z) of a state: nested normally ordered product of
// T^(l-1) g / (l-1)! over the creation modes of each monomial.
inline Field field_of_state(const State& v) {
    std::vector<Field> terms;
    for (auto& [m, c] : v.sorted()) {
        std::vector<Field> fs;
        for (auto e : m.entries()) {
            Field g = Field::gen(Monomial::kind_of(e), Monomial::var_of(e));
            int l = Monomial::level_of(e);
            for (int k = 1; k < l; ++k) g = deriv(g);
            if (l > 1) g = Rational(1, 1) / Rational(factorial(l - 1)) * g;
            for (int r = 0; r < Monomial::exp_of(e); ++r) fs.push_back(g);
        }
        Field f = Field::identity();
        if (!fs.empty()) {
            f = fs.back();
            for (size_t i = fs.size() - 1; i-- > 0;) f = nop(fs[i], f);
        }
        terms.push_back(c * f);
    }
    return Field::sum_of(terms);
}

// a_(n) b as a state, untwisted sector.
inline State ope_state(Engine& E, const Field& a, long n, const Field& b) {
    return E.apply(a, n, E.apply(b, -1, State::vacuum()));
}

// All monomials in N variables with total creation level <= L (4N symbols).
inline std::vector<Monomial> monomials_by_level(int N, int L) {
    std::vector<Mode> modes;
    for (int l = 1; l <= L; ++l)
        for (Kind k : all_kinds)
            for (int i = 0; i < N; ++i) modes.push_back({k, i, l});
    std::vector<Monomial> out;
    Monomial cur;
    auto rec = [&](auto&& self, size_t idx, int left) -> void {
        if (idx == modes.size()) {
            out.push_back(cur);
            return;
        }
        const Mode& md = modes[idx];
        self(self, idx + 1, left);
        Monomial save = cur;
        int maxe = is_odd(md.kind) ? 1 : left / md.level;
        for (int e = 1; e <= maxe && e * md.level <= left; ++e) {
            cur.insert(md.kind, md.var, md.level);
            self(self, idx + 1, left - e * md.level);
        }
        cur = save;
    };
    rec(rec, 0, L);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace lgcy::ff
