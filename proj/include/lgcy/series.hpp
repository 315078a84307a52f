#pragma once

#include "lgcy/cyclotomic.hpp"
#include "lgcy/rational.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lgcy {

struct WindowInsufficient : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Region on which a series is known exactly: q <= q_hi and y_lo <= y <= y_hi.
// An empty optional means unbounded in that direction.
struct Window {
    std::optional<Rational> q_hi, y_lo, y_hi;

    static Window all() { return {}; }
    static Window box(Rational qh, std::optional<Rational> ylo, std::optional<Rational> yhi) {
        return {std::move(qh), std::move(ylo), std::move(yhi)};
    }

    bool contains(const Rational& q, const Rational& y) const {
        if (q_hi && q > *q_hi) return false;
        if (y_lo && y < *y_lo) return false;
        if (y_hi && y > *y_hi) return false;
        return true;
    }
    // Every point of o lies in *this.
    bool covers(const Window& o) const {
        if (q_hi && (!o.q_hi || *o.q_hi > *q_hi)) return false;
        if (y_lo && (!o.y_lo || *o.y_lo < *y_lo)) return false;
        if (y_hi && (!o.y_hi || *o.y_hi > *y_hi)) return false;
        return true;
    }
    Window intersect(const Window& o) const {
        Window w = *this;
        if (o.q_hi && (!w.q_hi || *o.q_hi < *w.q_hi)) w.q_hi = o.q_hi;
        if (o.y_lo && (!w.y_lo || *o.y_lo > *w.y_lo)) w.y_lo = o.y_lo;
        if (o.y_hi && (!w.y_hi || *o.y_hi < *w.y_hi)) w.y_hi = o.y_hi;
        return w;
    }
    Window shifted(const Rational& dq, const Rational& dy) const {
        Window w = *this;
        if (w.q_hi) *w.q_hi += dq;
        if (w.y_lo) *w.y_lo += dy;
        if (w.y_hi) *w.y_hi += dy;
        return w;
    }
    std::string str() const {
        auto f = [](const std::optional<Rational>& v, const char* inf) {
            return v ? v->get_str() : std::string(inf);
        };
        return "{q <= " + f(q_hi, "inf") + ", " + f(y_lo, "-inf") + " <= y <= " + f(y_hi, "inf") + "}";
    }
};

// Half-plane bound on y along the support: y <= y0 + slope*(q - q_min) for
// the upper envelope, >= for the lower one.
struct Envelope {
    Rational y0, slope;
};

// Conservative description of where the full (untruncated) series can be
// nonzero. Used to decide how far inputs must be expanded.
struct Support {
    bool empty = false;
    Rational q_min;
    std::optional<Envelope> upper, lower;

    static Support none() {
        Support s;
        s.empty = true;
        return s;
    }
    static Support point(const Rational& q, const Rational& y) { return {false, q, Envelope{y, 0}, Envelope{y, 0}}; }

    // sup of y over the support restricted to q <= Q (Q empty = unbounded).
    std::optional<Rational> max_y(const std::optional<Rational>& Q) const {
        if (!upper) return std::nullopt;
        if (upper->slope <= 0) return upper->y0;
        if (!Q) return std::nullopt;
        return upper->y0 + upper->slope * std::max(Rational(0), Rational(*Q - q_min));
    }
    std::optional<Rational> min_y(const std::optional<Rational>& Q) const {
        if (!lower) return std::nullopt;
        if (lower->slope >= 0) return lower->y0;
        if (!Q) return std::nullopt;
        return lower->y0 + lower->slope * std::max(Rational(0), Rational(*Q - q_min));
    }

    Support shifted(const Rational& dq, const Rational& dy) const {
        Support s = *this;
        s.q_min += dq;
        if (s.upper) s.upper->y0 += dy;
        if (s.lower) s.lower->y0 += dy;
        return s;
    }

    static Support product(const Support& a, const Support& b) {
        if (a.empty || b.empty) return none();
        Support s;
        s.q_min = a.q_min + b.q_min;
        if (a.upper && b.upper)
            s.upper = Envelope{a.upper->y0 + b.upper->y0, std::max(a.upper->slope, b.upper->slope)};
        if (a.lower && b.lower)
            s.lower = Envelope{a.lower->y0 + b.lower->y0, std::min(a.lower->slope, b.lower->slope)};
        return s;
    }

    static Support join(const Support& a, const Support& b) {
        if (a.empty) return b;
        if (b.empty) return a;
        Support s;
        s.q_min = std::min(a.q_min, b.q_min);
        if (a.upper && b.upper) {
            Rational sl = std::max(a.upper->slope, b.upper->slope);
            Rational ya = a.upper->y0 - sl * (a.q_min - s.q_min);
            Rational yb = b.upper->y0 - sl * (b.q_min - s.q_min);
            s.upper = Envelope{std::max(ya, yb), sl};
        }
        if (a.lower && b.lower) {
            Rational sl = std::min(a.lower->slope, b.lower->slope);
            Rational ya = a.lower->y0 - sl * (a.q_min - s.q_min);
            Rational yb = b.lower->y0 - sl * (b.q_min - s.q_min);
            s.lower = Envelope{std::min(ya, yb), sl};
        }
        return s;
    }
};

// Windows the two factors must be exact on for their product to be exact on out.
inline std::pair<Window, Window> required_factor_windows(const Support& sa, const Support& sb, const Window& out) {
    Window wa, wb;
    if (sa.empty || sb.empty) return {wa, wb};
    if (out.q_hi) {
        wa.q_hi = *out.q_hi - sb.q_min;
        wb.q_hi = *out.q_hi - sa.q_min;
    }
    if (out.y_lo) {
        auto mb = sb.max_y(wb.q_hi);
        auto ma = sa.max_y(wa.q_hi);
        if (mb) wa.y_lo = *out.y_lo - *mb;
        if (ma) wb.y_lo = *out.y_lo - *ma;
    }
    if (out.y_hi) {
        auto mb = sb.min_y(wb.q_hi);
        auto ma = sa.min_y(wa.q_hi);
        if (mb) wa.y_hi = *out.y_hi - *mb;
        if (ma) wb.y_hi = *out.y_hi - *ma;
    }
    return {wa, wb};
}

// Largest window on which the product of a (exact on wa) and b (exact on wb)
// is exact; nullopt if no bounded-below y range is guaranteed in some direction.
struct ProductWindow {
    Window w;
    bool y_lo_infeasible = false, y_hi_infeasible = false;
};

inline ProductWindow product_window(const Support& sa, const Window& wa, const Support& sb, const Window& wb) {
    ProductWindow r;
    if (sa.empty || sb.empty) return r;
    if (wa.q_hi) r.w.q_hi = *wa.q_hi + sb.q_min;
    if (wb.q_hi) {
        Rational t = *wb.q_hi + sa.q_min;
        if (!r.w.q_hi || t < *r.w.q_hi) r.w.q_hi = t;
    }
    std::optional<Rational> qa, qb;  // q range of a's and b's contributing points
    if (r.w.q_hi) {
        qa = *r.w.q_hi - sb.q_min;
        qb = *r.w.q_hi - sa.q_min;
    }
    auto lo_term = [&](const Window& w, const Support& other, const std::optional<Rational>& qo,
                       std::optional<Rational>& acc, bool& infeasible) {
        if (!w.y_lo) return;
        auto m = other.max_y(qo);
        if (!m) {
            infeasible = true;
            return;
        }
        Rational t = *w.y_lo + *m;
        if (!acc || t > *acc) acc = t;
    };
    auto hi_term = [&](const Window& w, const Support& other, const std::optional<Rational>& qo,
                       std::optional<Rational>& acc, bool& infeasible) {
        if (!w.y_hi) return;
        auto m = other.min_y(qo);
        if (!m) {
            infeasible = true;
            return;
        }
        Rational t = *w.y_hi + *m;
        if (!acc || t < *acc) acc = t;
    };
    lo_term(wa, sb, qb, r.w.y_lo, r.y_lo_infeasible);
    lo_term(wb, sa, qa, r.w.y_lo, r.y_lo_infeasible);
    hi_term(wa, sb, qb, r.w.y_hi, r.y_hi_infeasible);
    hi_term(wb, sa, qa, r.w.y_hi, r.y_hi_infeasible);
    return r;
}

// Truncated two-variable series sum c q^a y^b with a, b in (1/D)Z and
// coefficients in Q(zeta_m). Exact on window(); every stored term lies in it.
class PuiseuxSeries {
public:
    using Key = std::pair<long, long>;  // (q*D, y*D)

    PuiseuxSeries() : PuiseuxSeries(1, 1) {}
    PuiseuxSeries(int m, int D) : m_(m), D_(D), support_(Support::none()) {
        if (D < 1) throw std::invalid_argument("exponent denominator bound must be >= 1");
    }

    static PuiseuxSeries monomial(const Cyclotomic& c, const Rational& q, const Rational& y, int D) {
        PuiseuxSeries s(c.order(), D);
        if (c.is_zero()) return s;
        s.terms_.emplace(s.key(q, y), c);
        s.support_ = Support::point(q, y);
        return s;
    }
    static PuiseuxSeries one(int m, int D) { return monomial(Cyclotomic(m, 1), 0, 0, D); }

    int order() const { return m_; }
    int denom() const { return D_; }
    const Window& window() const { return window_; }
    const Support& support() const { return support_; }
    size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }
    const std::map<Key, Cyclotomic>& raw_terms() const { return terms_; }

    Rational q_of(const Key& k) const { return rat(k.first, D_); }
    Rational y_of(const Key& k) const { return rat(k.second, D_); }

    Key key(const Rational& q, const Rational& y) const {
        Rational a = q * D_, b = y * D_;
        if (!is_integer(a) || !is_integer(b))
            throw std::domain_error("exponent (" + q.get_str() + ", " + y.get_str() +
                                    ") has denominator not dividing D=" + std::to_string(D_));
        return {to_long(a), to_long(b)};
    }

    // Coefficient of q^a y^b; throws if the point is outside the exact window.
    Cyclotomic coeff(const Rational& q, const Rational& y) const {
        if (!window_.contains(q, y))
            throw WindowInsufficient("coefficient at (q=" + q.get_str() + ", y=" + y.get_str() +
                                     ") requested outside exact window " + window_.str());
        auto it = terms_.find(key(q, y));
        return it == terms_.end() ? Cyclotomic(m_) : it->second;
    }

    // Adds a term; the caller is responsible for the window/support bookkeeping.
    void add_term(const Rational& q, const Rational& y, const Cyclotomic& c) { add_key(key(q, y), c); }
    void set_window(const Window& w) {
        window_ = w;
        prune();
    }
    void set_support(const Support& s) { support_ = s; }

    std::vector<std::tuple<Rational, Rational, Cyclotomic>> terms() const {
        std::vector<std::tuple<Rational, Rational, Cyclotomic>> out;
        out.reserve(terms_.size());
        for (auto& [k, c] : terms_) out.emplace_back(q_of(k), y_of(k), c);
        return out;
    }

    PuiseuxSeries restricted(const Window& w) const {
        PuiseuxSeries s = *this;
        s.window_ = window_.intersect(w);
        s.prune();
        return s;
    }

    PuiseuxSeries with_denom(int D) const {
        if (D % D_ != 0) throw std::invalid_argument("new exponent denominator must be a multiple");
        PuiseuxSeries s(m_, D);
        long f = D / D_;
        for (auto& [k, c] : terms_) s.terms_.emplace(Key{k.first * f, k.second * f}, c);
        s.window_ = window_;
        s.support_ = support_;
        return s;
    }

    // Multiply by c q^dq y^dy.
    PuiseuxSeries shifted(const Rational& dq, const Rational& dy, const Cyclotomic& c) const {
        PuiseuxSeries s(m_, D_);
        if (c.is_zero()) {
            s.window_ = Window::all();
            return s;
        }
        Key d = key(dq, dy);
        for (auto& [k, v] : terms_) s.terms_.emplace(Key{k.first + d.first, k.second + d.second}, v * c);
        s.window_ = window_.shifted(dq, dy);
        s.support_ = support_.empty ? support_ : support_.shifted(dq, dy);
        return s;
    }
    PuiseuxSeries shifted(const Rational& dq, const Rational& dy) const { return shifted(dq, dy, Cyclotomic(m_, 1)); }

    // Coefficientwise map f(q, y, c); window and support are kept, so f must not
    // create terms where the true series vanishes.
    PuiseuxSeries map_terms(const std::function<Cyclotomic(const Rational&, const Rational&, const Cyclotomic&)>& f,
                            int new_order) const {
        PuiseuxSeries s(new_order, D_);
        for (auto& [k, c] : terms_) s.add_key(k, f(q_of(k), y_of(k), c));
        s.window_ = window_;
        s.support_ = support_;
        return s;
    }

    PuiseuxSeries& operator+=(const PuiseuxSeries& o) {
        check(o);
        for (auto& [k, c] : o.terms_) add_key(k, c);
        window_ = window_.intersect(o.window_);
        support_ = Support::join(support_, o.support_);
        prune();
        return *this;
    }
    PuiseuxSeries& operator-=(const PuiseuxSeries& o) { return *this += o.negated(); }
    friend PuiseuxSeries operator+(PuiseuxSeries a, const PuiseuxSeries& b) { return a += b; }
    friend PuiseuxSeries operator-(PuiseuxSeries a, const PuiseuxSeries& b) { return a -= b; }

    PuiseuxSeries negated() const { return scaled(Cyclotomic(m_, -1)); }
    PuiseuxSeries scaled(const Cyclotomic& c) const {
        PuiseuxSeries s = *this;
        if (c.is_zero()) {
            s.terms_.clear();
            s.support_ = Support::none();
            return s;
        }
        for (auto& [k, v] : s.terms_) v *= c;
        return s;
    }

    // Product exact on the largest derivable window, cut to target if given.
    // Throws WindowInsufficient when target is not covered.
    static PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b,
                             const std::optional<Window>& target = std::nullopt) {
        a.check(b);
        ProductWindow pw = product_window(a.support_, a.window_, b.support_, b.window_);
        Window w = pw.w;
        if (target) {
            std::string miss;
            if (target->q_hi && w.q_hi && *target->q_hi > *w.q_hi)
                miss += " q in (" + w.q_hi->get_str() + ", " + target->q_hi->get_str() + "]";
            if (!target->q_hi && w.q_hi) miss += " q above " + w.q_hi->get_str();
            if (pw.y_lo_infeasible || (w.y_lo && (!target->y_lo || *target->y_lo < *w.y_lo)))
                miss += " y below " + (w.y_lo && !pw.y_lo_infeasible ? w.y_lo->get_str() : std::string("+inf"));
            if (pw.y_hi_infeasible || (w.y_hi && (!target->y_hi || *target->y_hi > *w.y_hi)))
                miss += " y above " + (w.y_hi && !pw.y_hi_infeasible ? w.y_hi->get_str() : std::string("-inf"));
            if (!miss.empty())
                throw WindowInsufficient("product not exact on target " + target->str() + "; missing" + miss);
            w = w.intersect(*target);
        } else if (pw.y_lo_infeasible || pw.y_hi_infeasible) {
            throw WindowInsufficient("product has no exact y range; expand inputs further");
        }
        PuiseuxSeries s(a.m_, a.D_);
        s.window_ = w;
        s.support_ = Support::product(a.support_, b.support_);
        if (a.terms_.empty() || b.terms_.empty()) return s;
        long qmax = 0, ylo = 0, yhi = 0;
        bool hq = w.q_hi.has_value(), hl = w.y_lo.has_value(), hh = w.y_hi.has_value();
        if (hq) qmax = to_long(floor(*w.q_hi * a.D_));
        if (hl) ylo = to_long(ceil(*w.y_lo * a.D_));
        if (hh) yhi = to_long(floor(*w.y_hi * a.D_));
        // b sorted by q: stop early once q exceeds the bound
        std::vector<std::pair<Key, const Cyclotomic*>> bs;
        bs.reserve(b.terms_.size());
        for (auto& [k, c] : b.terms_) bs.emplace_back(k, &c);
        for (auto& [ka, ca] : a.terms_) {
            for (auto& [kb, cb] : bs) {
                long q = ka.first + kb.first;
                if (hq && q > qmax) break;
                long y = ka.second + kb.second;
                if ((hl && y < ylo) || (hh && y > yhi)) continue;
                s.add_key(Key{q, y}, ca * *cb);
            }
        }
        return s;
    }
    friend PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) { return mul(a, b); }

    // Equality of coefficients on the common window of both series and w.
    static bool equal_on(const PuiseuxSeries& a, const PuiseuxSeries& b, const Window& w) {
        Window c = a.window_.intersect(b.window_).intersect(w);
        if (!c.covers(w)) throw WindowInsufficient("comparison window " + w.str() + " exceeds exact windows");
        return first_difference(a, b, w) == std::nullopt;
    }
    static std::optional<std::tuple<Rational, Rational, Cyclotomic, Cyclotomic>> first_difference(
        const PuiseuxSeries& a, const PuiseuxSeries& b, const Window& w) {
        a.check(b);
        std::map<Key, int> keys;
        for (auto& [k, c] : a.terms_)
            if (w.contains(a.q_of(k), a.y_of(k))) keys[k] = 1;
        for (auto& [k, c] : b.terms_)
            if (w.contains(b.q_of(k), b.y_of(k))) keys[k] = 1;
        for (auto& [k, _] : keys) {
            auto ia = a.terms_.find(k);
            auto ib = b.terms_.find(k);
            Cyclotomic va = ia == a.terms_.end() ? Cyclotomic(a.m_) : ia->second;
            Cyclotomic vb = ib == b.terms_.end() ? Cyclotomic(a.m_) : ib->second;
            if (va != vb) return std::make_tuple(a.q_of(k), a.y_of(k), va, vb);
        }
        return std::nullopt;
    }

    // Lowest and highest stored q exponent.
    std::optional<std::pair<Rational, Rational>> q_range() const {
        if (terms_.empty()) return std::nullopt;
        return std::make_pair(q_of(terms_.begin()->first), q_of(terms_.rbegin()->first));
    }

    std::string str() const {
        std::ostringstream os;
        bool any = false;
        for (auto& [k, c] : terms_) {
            if (any) os << " + ";
            os << "[" << c.str() << "]q^" << q_of(k).get_str() << "y^" << y_of(k).get_str();
            any = true;
        }
        if (!any) os << "0";
        return os.str();
    }

private:
    void check(const PuiseuxSeries& o) const {
        if (m_ != o.m_) throw OrderMismatch(m_, o.m_);
        if (D_ != o.D_)
            throw std::invalid_argument("exponent denominator mismatch: " + std::to_string(D_) + " vs " +
                                        std::to_string(o.D_));
    }
    void add_key(const Key& k, const Cyclotomic& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.try_emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();) {
            if (!window_.contains(q_of(it->first), y_of(it->first)))
                it = terms_.erase(it);
            else
                ++it;
        }
    }

    int m_, D_;
    std::map<Key, Cyclotomic> terms_;
    Window window_;
    Support support_;
};

inline PuiseuxSeries series_mul(const PuiseuxSeries& a, const PuiseuxSeries& b,
                                const std::optional<Window>& target = std::nullopt) {
    return PuiseuxSeries::mul(a, b, target);
}

}  // namespace lgcy
