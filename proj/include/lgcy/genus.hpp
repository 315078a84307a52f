#pragma once

#include "lgcy/factors.hpp"
#include "lgcy/milnor.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgcy::genus {

struct IntegralityViolation : std::runtime_error {
    Rational q, y;
    std::string coeff;
    IntegralityViolation(const Rational& q_, const Rational& y_, const std::string& c)
        : std::runtime_error("non-integral coefficient " + c + " at q^" + q_.get_str() + " y^" + y_.get_str()),
          q(q_), y(y_), coeff(c) {}
};

inline int ring_order(int N) { return int(lcm(2, N)); }
inline int denom(int N) { return 2 * N; }

inline void require_N(int N) {
    if (N < 3) throw std::invalid_argument("the orbifold formulas are only defined for N >= 3 (got " + std::to_string(N) + ")");
}

// The four factors of E with index n (tilde: numerator signs +).
inline std::vector<Factor> e_factors_at(int N, long n, bool tilde) {
    int m = ring_order(N);
    Cyclotomic num_phase(m, tilde ? -1 : 1);
    Cyclotomic one(m, 1);
    Rational a = 1 - rat(1, N), b = rat(1, N);
    return {{1, Rational(n + 1), a, num_phase, N},
            {1, Rational(n), -a, num_phase, N},
            {-1, Rational(n + 1), b, one, N},
            {-1, Rational(n), -b, one, N}};
}

// Factors of E for n = 0..nmax.
inline std::vector<Factor> e_factors(int N, long nmax, bool tilde) {
    std::vector<Factor> fs;
    for (long n = 0; n <= nmax; ++n) {
        auto g = e_factors_at(N, n, tilde);
        fs.insert(fs.end(), g.begin(), g.end());
    }
    return fs;
}

// E(tau, s - j tau) with phases for s -> s - l, truncated so that the
// coefficients on the target window are exact.
inline PuiseuxSeries shifted_E(int N, long j, long l, const Window& target, bool tilde) {
    if (!target.q_hi) throw std::invalid_argument("q-window must be bounded");
    int m = ring_order(N), D = denom(N);
    // Normalized numerators with negative q-exponent contribute a monomial
    // prefactor of negative valuation; the total bounds how far a factor's own
    // q-exponent can be compensated by the others.
    auto group = [&](long n) { return substitute_shift(e_factors_at(N, n, tilde), N, j, l); };
    Rational neg = 0;
    for (long n = 0;; ++n) {
        bool any = false;
        for (auto& f : group(n))
            if (f.aq < 0) {
                neg += f.aq * f.power;
                any = true;
            }
        if (!any && n > j) break;
    }
    std::vector<Factor> fs;
    for (long n = 0;; ++n) {
        auto g = group(n);
        Rational minq = g[0].aq;
        for (auto& f : g)
            if (f.aq < minq) minq = f.aq;
        if (minq > *target.q_hi - neg) break;
        fs.insert(fs.end(), g.begin(), g.end());
    }
    return expand_product(fs, target, m, D);
}

// (-1)^{(N-2)j^2} y^{-(N-2)j} q^{(N-2)(j^2-j)/2} over the sector used by the Euler character.
struct SectorPrefactor {
    long sign;
    Rational dq, dy;
};

inline SectorPrefactor sector_prefactor(int N, long j, bool with_sign, const Rational& y_per_j) {
    long sign = (with_sign && ((N - 2) * j * j) % 2) ? -1 : 1;
    return {sign, rat((N - 2) * (j * j - j), 2), -y_per_j * j};
}

inline PuiseuxSeries apply_prefactor(const PuiseuxSeries& E, const SectorPrefactor& p) {
    return E.shifted(p.dq, p.dy, Cyclotomic(E.order(), p.sign));
}

inline Window pull_back(const Window& w, const SectorPrefactor& p) { return w.shifted(-p.dq, -p.dy); }

inline PuiseuxSeries big_E(int N, long K, const Window& w) {
    if (N < 2) throw SingularFactor("E has the vanishing factor (1 - y^0) for N = 1");
    Window t = w;
    t.q_hi = Rational(K);
    return shifted_E(N, 0, 0, t, false);
}

inline PuiseuxSeries big_E_tilde(int N, long K, const Window& w) {
    if (N < 2) throw SingularFactor("E~ has the degenerate factor (1 + y^0) for N = 1");
    Window t = w;
    t.q_hi = Rational(K);
    return shifted_E(N, 0, 0, t, true);
}

// Single-sector Euler character in its own (L0, J0) coordinates.
inline PuiseuxSeries sector_eu(int N, long j, long K, const Window& w) {
    if (j < 0 || j >= N) throw std::invalid_argument("sector out of range");
    auto p = sector_prefactor(N, j, true, Rational(N - 2));
    Window t = w;
    t.q_hi = Rational(K);
    PuiseuxSeries E = shifted_E(N, j, 0, pull_back(t, p), false);
    return apply_prefactor(E, p).restricted(t);
}

struct OrbifoldOptions {
    // test hook: multiply the j = 1 summand by an extra primitive root of unity
    bool mutate_phase = false;
};

enum class Variant { eu, ch, ell_literal };

// (1/N) sum_{j,l} prefactor_j E(tau, s - j tau - l). The l-sum is applied
// termwise to the expansion of E(tau, s - j tau): s -> s - l multiplies y^b by
// e^{-2 pi i b l}.
inline PuiseuxSeries orbifold_sum(int N, long K, const Window& w, Variant v, const OrbifoldOptions& opt = {}) {
    require_N(N);
    int m = ring_order(N), D = denom(N);
    Window t = w;
    t.q_hi = Rational(K);
    PuiseuxSeries total(m, D);
    total.set_window(t);
    for (long j = 0; j < N; ++j) {
        SectorPrefactor p = v == Variant::ell_literal ? sector_prefactor(N, j, true, rat(N - 2, 2))
                            : v == Variant::eu        ? sector_prefactor(N, j, true, Rational(N - 2))
                                                      : sector_prefactor(N, j, false, Rational(N - 2));
        PuiseuxSeries E = shifted_E(N, j, 0, pull_back(t, p), v == Variant::ch);
        PuiseuxSeries avg(m, D);
        for (auto& [key, c] : E.raw_terms()) {
            Rational y = E.y_of(key);
            Rational bN = y * N;
            Cyclotomic acc(m);
            for (long l = 0; l < N; ++l) acc += c * Cyclotomic::zeta_pow(m, -to_long(bN) * l * (m / N));
            if (!acc.is_zero()) avg.add_term(E.q_of(key), y, acc);
        }
        avg.set_window(E.window());
        avg.set_support(E.support());
        if (opt.mutate_phase && j == 1) avg = avg.scaled(Cyclotomic::zeta_pow(m, 1));
        total += apply_prefactor(avg, p).restricted(t);
    }
    PuiseuxSeries out(m, D);
    for (auto& [q, y, c] : total.terms()) out.add_term(q, y, c * rat(1, N));
    out.set_window(t);
    return out;
}

inline void require_integral(const PuiseuxSeries& s) {
    for (auto& [q, y, c] : s.terms())
        if (!c.is_integer()) throw IntegralityViolation(q, y, c.str());
}

inline PuiseuxSeries orbifold_eu(int N, long K, const Window& w, const OrbifoldOptions& opt = {}) {
    auto s = orbifold_sum(N, K, w, Variant::eu, opt);
    require_integral(s);
    return s;
}

inline PuiseuxSeries orbifold_ch(int N, long K, const Window& w, const OrbifoldOptions& opt = {}) {
    auto s = orbifold_sum(N, K, w, Variant::ch, opt);
    require_integral(s);
    return s;
}

// Elliptic genus from the Euler character: (-1)^{N-2} y^{(N-2)/2} Eu.
inline PuiseuxSeries orbifold_ell(int N, long K, const Window& w, const OrbifoldOptions& opt = {}) {
    require_N(N);
    Rational sh = rat(N - 2, 2);
    PuiseuxSeries eu = orbifold_eu(N, K, w.shifted(0, -sh), opt);
    long sign = (N % 2) ? -1 : 1;
    return eu.shifted(0, sh, Cyclotomic(eu.order(), sign)).restricted(w);
}

// The double sum with the phase in s halved, taken as written.
inline PuiseuxSeries orbifold_ell_literal(int N, long K, const Window& w) {
    return orbifold_sum(N, K, w, Variant::ell_literal);
}

inline Window symmetric_window(long K, const Rational& Y) { return Window::box(Rational(K), -Y, Y); }

struct JacobiCheck {
    bool integral = true, exponents_ok = true, symmetric = true, boundary_vanishes = true;
    std::optional<std::string> witness;
    bool ok() const { return integral && exponents_ok && symmetric && boundary_vanishes; }
};

// Structural assertions on a genus series computed on |y| <= Y, q <= K.
inline JacobiCheck check_jacobi(const PuiseuxSeries& s, int N, long K, const Rational& Y) {
    JacobiCheck r;
    auto fail = [&](bool& flag, const std::string& msg) {
        flag = false;
        if (!r.witness) r.witness = msg;
    };
    Rational half_index = rat(N - 2, 2);
    for (auto& [q, y, c] : s.terms()) {
        std::string at = " at q^" + q.get_str() + " y^" + y.get_str();
        if (!c.is_integer()) fail(r.integral, "non-integral coefficient " + c.str() + at);
        if (!is_integer(q) || q < 0 || !is_integer(2 * y)) fail(r.exponents_ok, "exponent off lattice" + at);
        Rational ay = y < 0 ? Rational(-y) : y;
        if (ay > half_index + q) fail(r.boundary_vanishes, "nonzero tail coefficient " + c.str() + at);
        if (ay <= Y && s.coeff(q, -y) != c) fail(r.symmetric, "y -> 1/y asymmetry" + at);
    }
    (void)K;
    return r;
}

// Sum of the coefficients at each q-order (the s = 0 specialization).
inline std::map<Rational, Integer> specialize_s0(const PuiseuxSeries& s) {
    std::map<Rational, Integer> out;
    for (auto& [q, y, c] : s.terms()) out[q] += c.rational().get_num();
    return out;
}

// The q^0 row as exponent -> integer.
inline std::map<Rational, Integer> q0_row(const PuiseuxSeries& s) {
    std::map<Rational, Integer> out;
    for (auto& [q, y, c] : s.terms())
        if (q == 0) out[y] = c.rational().get_num();
    return out;
}

// y^{-(N-2)/2} chi_{-y} from the Hodge numbers.
inline std::map<Rational, Integer> expected_q0_row(int N) {
    std::map<Rational, Integer> out;
    for (auto& [p, v] : chi_y_oracle(N)) {
        if (v == 0) continue;
        out[Rational(p) - rat(N - 2, 2)] = (p % 2) ? Integer(-v) : v;
    }
    return out;
}

}  // namespace lgcy::genus
