#pragma once

#include "lgcy/series.hpp"

#include <string>
#include <vector>

namespace lgcy {

struct SingularFactor : std::domain_error {
    using std::domain_error::domain_error;
};

// (1 - phase * q^aq * y^ay)^(sign * power)
struct Factor {
    int sign = 1;
    Rational aq, ay;
    Cyclotomic phase;
    long power = 1;

    std::string str() const {
        return "(1 - [" + phase.str() + "] q^" + aq.get_str() + " y^" + ay.get_str() + ")^" +
               std::to_string(sign * power);
    }
};

namespace detail {

inline Support line_support(const Rational& aq, const Rational& ay, long kmax) {
    // points k*(aq, ay) for 0 <= k <= kmax (kmax < 0: unbounded), aq != 0
    Support s;
    Rational slope = ay / aq;
    s.q_min = (aq < 0 && kmax >= 0) ? Rational(aq * kmax) : Rational(0);
    Rational y0 = slope * s.q_min;
    s.upper = Envelope{y0, slope};
    s.lower = Envelope{y0, slope};
    return s;
}

inline bool phase_is_one(const Cyclotomic& c) { return c == Cyclotomic(c.order(), 1); }

inline Cyclotomic cyclo_pow(Cyclotomic base, Integer e) {
    Cyclotomic r(base.order(), 1);
    if (e < 0) {
        base = base.inverse();
        e = -e;
    }
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r *= base;
        base *= base;
        e /= 2;
    }
    return r;
}

}  // namespace detail

// Where the fully expanded factor can be nonzero.
inline Support factor_support(const Factor& f) {
    if (f.aq == 0 && f.ay == 0) return detail::phase_is_one(f.phase) && f.sign > 0 ? Support::none() : Support::point(0, 0);
    if (f.sign > 0) {
        if (f.aq != 0) return detail::line_support(f.aq, f.ay, f.power);
        Support s;
        Rational top = f.ay * f.power;
        s.q_min = 0;
        s.upper = Envelope{std::max(Rational(0), top), 0};
        s.lower = Envelope{std::min(Rational(0), top), 0};
        return s;
    }
    if (f.aq > 0) return detail::line_support(f.aq, f.ay, -1);
    if (f.aq < 0) {
        // (-u)^{-P} (1 - u^{-1})^{-P}: ray from -P*(aq, ay) in direction -(aq, ay)
        Support s = detail::line_support(-f.aq, -f.ay, -1);
        return s.shifted(-f.aq * f.power, -f.ay * f.power);
    }
    Support s;
    s.q_min = 0;
    if (f.ay < 0)
        s.upper = Envelope{0, 0};
    else
        s.lower = Envelope{0, 0};
    return s;
}

// Expansion of a single elementary factor, exact on (at least) target.
inline PuiseuxSeries expand_factor(const Factor& f, const Window& target, int D) {
    int m = f.phase.order();
    PuiseuxSeries s(m, D);
    if (f.power < 0) throw std::invalid_argument("factor power must be non-negative");
    Cyclotomic one(m, 1);
    if (f.sign > 0) {
        // binomial theorem; exact everywhere
        Cyclotomic mphase = -f.phase;
        Cyclotomic cur = one;
        for (long k = 0; k <= f.power; ++k) {
            s.add_term(f.aq * k, f.ay * k, cur * Rational(binomial(f.power, k)));
            cur *= mphase;
        }
        s.set_window(Window::all());
        s.set_support(factor_support(f));
        return s;
    }
    if (f.aq == 0 && f.ay == 0) {
        if (detail::phase_is_one(f.phase)) throw SingularFactor("denominator factor " + f.str() + " vanishes identically");
        s.add_term(0, 0, detail::cyclo_pow(one - f.phase, -Integer(f.power)));
        s.set_window(Window::all());
        s.set_support(Support::point(0, 0));
        return s;
    }
    if (f.aq < 0) {
        // (1 - u)^{-P} = (-u)^{-P} (1 - u^{-1})^{-P}
        Factor inv = f;
        inv.aq = -f.aq;
        inv.ay = -f.ay;
        inv.phase = f.phase.inverse();
        Rational pq = -f.aq * f.power, py = -f.ay * f.power;
        PuiseuxSeries inner = expand_factor(inv, target.shifted(-pq, -py), D);
        return inner.shifted(pq, py, detail::cyclo_pow(-f.phase, -Integer(f.power)));
    }
    // (1 - u)^{-P} = sum_k binom(P + k - 1, k) u^k
    long kmax;
    Window w;
    if (f.aq > 0) {
        if (!target.q_hi) throw WindowInsufficient("denominator factor " + f.str() + " needs a q bound");
        kmax = to_long(floor(*target.q_hi / f.aq));
        w.q_hi = target.q_hi;
    } else if (f.ay < 0) {
        if (!target.y_lo) throw WindowInsufficient("denominator factor " + f.str() + " needs a lower y bound");
        kmax = to_long(floor(*target.y_lo / f.ay));
        w.y_lo = target.y_lo;
    } else {
        if (!target.y_hi) throw WindowInsufficient("denominator factor " + f.str() + " needs an upper y bound");
        kmax = to_long(floor(*target.y_hi / f.ay));
        w.y_hi = target.y_hi;
    }
    Cyclotomic cur = one;
    for (long k = 0; k <= kmax; ++k) {
        s.add_term(f.aq * k, f.ay * k, cur * Rational(binomial(f.power + k - 1, k)));
        cur *= f.phase;
    }
    s.set_window(w);
    s.set_support(factor_support(f));
    return s;
}

inline PuiseuxSeries expand_factor(int sign, const Rational& aq, const Rational& ay, const Cyclotomic& phase,
                                   long power, const Window& target, int D) {
    return expand_factor(Factor{sign, aq, ay, phase, power}, target, D);
}

// Product of factors exact on target. Working windows for every partial
// product are planned backwards from the factor supports.
inline PuiseuxSeries expand_product(const std::vector<Factor>& fs, const Window& target, int m, int D) {
    size_t M = fs.size();
    std::vector<Support> sup(M), prefix(M + 1);
    prefix[0] = Support::point(0, 0);
    for (size_t i = 0; i < M; ++i) {
        sup[i] = factor_support(fs[i]);
        prefix[i + 1] = Support::product(prefix[i], sup[i]);
    }
    if (prefix[M].empty) {
        PuiseuxSeries z(m, D);
        z.set_window(target);
        return z;
    }
    std::vector<Window> wprod(M + 1), wfac(M);
    wprod[M] = target;
    for (size_t i = M; i-- > 0;) {
        auto [wp, wf] = required_factor_windows(prefix[i], sup[i], wprod[i + 1]);
        wprod[i] = wp;
        wfac[i] = wf;
    }
    PuiseuxSeries cur = PuiseuxSeries::one(m, D);
    for (size_t i = 0; i < M; ++i) {
        PuiseuxSeries fi = expand_factor(fs[i], wfac[i], D);
        cur = PuiseuxSeries::mul(cur, fi, wprod[i + 1]);
    }
    return cur;
}

// Replace every e^{2 pi i a s} by y^a q^{-j a} e^{-2 pi i a l}. Requires a*N integral.
inline std::vector<Factor> substitute_shift(const std::vector<Factor>& fs, long N, long j, long l) {
    std::vector<Factor> out;
    out.reserve(fs.size());
    for (auto f : fs) {
        int m = f.phase.order();
        if (m % N != 0) throw std::invalid_argument("phase ring order must be a multiple of N");
        Rational aN = f.ay * N;
        if (!is_integer(aN)) throw std::domain_error("y exponent " + f.ay.get_str() + " not in (1/N)Z");
        f.aq -= f.ay * j;
        f.phase *= Cyclotomic::zeta_pow(m, -to_long(aN) * l * (m / N));
        out.push_back(std::move(f));
    }
    return out;
}

}  // namespace lgcy
