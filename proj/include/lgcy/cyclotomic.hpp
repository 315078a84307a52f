#pragma once

#include "lgcy/linalg.hpp"
#include "lgcy/rational.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <vector>

namespace lgcy {

struct OrderMismatch : std::invalid_argument {
    OrderMismatch(int a, int b)
        : std::invalid_argument("cyclotomic order mismatch: " + std::to_string(a) + " vs " + std::to_string(b)) {}
};

namespace detail {

struct CycloContext {
    int m;
    int phi;
    std::vector<Integer> poly;                 // monic Phi_m, low degree first, size phi+1
    std::vector<std::vector<Rational>> power;  // zeta^k reduced, k in [0, m)
};

inline std::vector<Integer> poly_divide_exact(std::vector<Integer> num, const std::vector<Integer>& den) {
    // den monic
    size_t dn = den.size() - 1;
    std::vector<Integer> q(num.size() - dn);
    for (size_t i = num.size(); i-- > dn;) {
        Integer c = num[i];
        q[i - dn] = c;
        if (c == 0) continue;
        for (size_t k = 0; k <= dn; ++k) num[i - dn + k] -= c * den[k];
    }
    for (size_t k = 0; k < dn; ++k)
        if (num[k] != 0) throw std::logic_error("cyclotomic polynomial division not exact");
    return q;
}

inline std::vector<Integer> cyclotomic_poly(int m) {
    static std::map<int, std::vector<Integer>> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
    }
    std::vector<Integer> p(m + 1);
    p[0] = -1;
    p[m] = 1;
    for (int d = 1; d < m; ++d)
        if (m % d == 0) p = poly_divide_exact(p, cyclotomic_poly(d));
    std::lock_guard<std::mutex> lk(mu);
    cache.emplace(m, p);
    return p;
}

inline std::shared_ptr<const CycloContext> context(int m) {
    static std::map<int, std::shared_ptr<const CycloContext>> cache;
    static std::mutex mu;
    {
        std::lock_guard<std::mutex> lk(mu);
        auto it = cache.find(m);
        if (it != cache.end()) return it->second;
    }
    if (m < 1) throw std::invalid_argument("cyclotomic order must be >= 1");
    auto c = std::make_shared<CycloContext>();
    c->m = m;
    c->poly = cyclotomic_poly(m);
    c->phi = static_cast<int>(c->poly.size()) - 1;
    std::vector<Rational> cur(c->phi);
    cur[0] = 1;
    for (int k = 0; k < m; ++k) {
        c->power.push_back(cur);
        // multiply by zeta
        Rational top = c->phi > 0 ? cur[c->phi - 1] : Rational(0);
        for (int i = c->phi - 1; i > 0; --i) cur[i] = cur[i - 1];
        cur[0] = 0;
        if (top != 0)
            for (int i = 0; i < c->phi; ++i) cur[i] -= top * c->poly[i];
    }
    std::lock_guard<std::mutex> lk(mu);
    auto [it, _] = cache.emplace(m, std::move(c));
    return it->second;
}

}  // namespace detail

// Element of Q(zeta_m) in the power basis 1, zeta, ..., zeta^{phi(m)-1}.
class Cyclotomic {
public:
    Cyclotomic() : Cyclotomic(1) {}
    explicit Cyclotomic(int m) : ctx_(detail::context(m)), c_(ctx_->phi) {}
    Cyclotomic(int m, const Rational& r) : Cyclotomic(m) { c_[0] = r; }

    static Cyclotomic zeta_pow(int m, long k) {
        Cyclotomic z(m);
        z.c_ = z.ctx_->power[mod(k, m)];
        return z;
    }

    // From a coefficient vector of any length; reduces mod Phi_m.
    static Cyclotomic from_poly(int m, const std::vector<Rational>& p) {
        Cyclotomic z(m);
        for (size_t k = 0; k < p.size(); ++k) {
            if (p[k] == 0) continue;
            const auto& zk = z.ctx_->power[k % m];
            for (int i = 0; i < z.ctx_->phi; ++i)
                if (zk[i] != 0) z.c_[i] += p[k] * zk[i];
        }
        return z;
    }

    int order() const { return ctx_->m; }
    int degree() const { return ctx_->phi; }
    const std::vector<Rational>& coeffs() const { return c_; }

    bool is_zero() const {
        for (auto& v : c_)
            if (v != 0) return false;
        return true;
    }
    bool is_rational() const {
        for (size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }
    bool is_integer() const { return is_rational() && lgcy::is_integer(c_[0]); }
    Rational rational() const {
        if (!is_rational()) throw std::domain_error("cyclotomic " + str() + " is not rational");
        return c_[0];
    }

    Cyclotomic& operator+=(const Cyclotomic& o) {
        check(o);
        for (size_t i = 0; i < c_.size(); ++i)
            if (o.c_[i] != 0) c_[i] += o.c_[i];
        return *this;
    }
    Cyclotomic& operator-=(const Cyclotomic& o) {
        check(o);
        for (size_t i = 0; i < c_.size(); ++i)
            if (o.c_[i] != 0) c_[i] -= o.c_[i];
        return *this;
    }
    Cyclotomic& operator*=(const Rational& r) {
        for (auto& v : c_)
            if (v != 0) v *= r;
        return *this;
    }
    Cyclotomic operator-() const {
        Cyclotomic z = *this;
        for (auto& v : z.c_) v = -v;
        return z;
    }
    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Rational& r) { return a *= r; }
    friend Cyclotomic operator*(const Rational& r, Cyclotomic a) { return a *= r; }

    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b) {
        a.check(b);
        int phi = a.ctx_->phi;
        if (phi == 1) return Cyclotomic(a.ctx_, {a.c_[0] * b.c_[0]});
        std::vector<Rational> prod(2 * phi - 1);
        for (int i = 0; i < phi; ++i) {
            if (a.c_[i] == 0) continue;
            for (int j = 0; j < phi; ++j)
                if (b.c_[j] != 0) prod[i + j] += a.c_[i] * b.c_[j];
        }
        const auto& P = a.ctx_->poly;
        for (int k = 2 * phi - 2; k >= phi; --k) {
            if (prod[k] == 0) continue;
            Rational c = prod[k];
            for (int i = 0; i <= phi; ++i)
                if (P[i] != 0) prod[k - phi + i] -= c * P[i];
        }
        prod.resize(phi);
        return Cyclotomic(a.ctx_, std::move(prod));
    }
    Cyclotomic& operator*=(const Cyclotomic& o) { return *this = *this * o; }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
        return a.ctx_->m == b.ctx_->m && a.c_ == b.c_;
    }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    // Inverse in Q(zeta_m) via the multiplication matrix.
    Cyclotomic inverse() const {
        if (is_zero()) throw std::domain_error("inverse of zero cyclotomic");
        int phi = ctx_->phi;
        Matrix M(phi, phi);
        for (int j = 0; j < phi; ++j) {
            Cyclotomic col = *this * zeta_pow(ctx_->m, j);
            for (int i = 0; i < phi; ++i) M(i, j) = col.c_[i];
        }
        std::vector<Rational> e(phi);
        e[0] = 1;
        auto x = solve(M, e);
        if (!x) throw std::logic_error("singular multiplication matrix");
        return Cyclotomic(ctx_, std::move(*x));
    }

    std::string str() const {
        std::ostringstream os;
        bool any = false;
        for (size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            if (any) os << " + ";
            os << "(" << c_[i].get_str() << ")";
            if (i > 0) os << "*z^" << i;
            any = true;
        }
        if (!any) os << "0";
        return os.str();
    }

private:
    Cyclotomic(std::shared_ptr<const detail::CycloContext> ctx, std::vector<Rational> c)
        : ctx_(std::move(ctx)), c_(std::move(c)) {}
    void check(const Cyclotomic& o) const {
        if (ctx_->m != o.ctx_->m) throw OrderMismatch(ctx_->m, o.ctx_->m);
    }

    std::shared_ptr<const detail::CycloContext> ctx_;
    std::vector<Rational> c_;
};

inline Cyclotomic cyclo_mul(const Cyclotomic& a, const Cyclotomic& b) { return a * b; }

// sum_{l=0}^{m-1} zeta_m^{j l}
inline Cyclotomic root_sum(int m, long j) {
    Cyclotomic s(m);
    for (long l = 0; l < m; ++l) s += Cyclotomic::zeta_pow(m, j * l);
    return s;
}

}  // namespace lgcy
