#pragma once

#include "lgcy/chiralring.hpp"
#include "lgcy/genus.hpp"
#include "lgcy/lg.hpp"
#include "lgcy/milnor.hpp"
#include "lgcy/n2.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace lgcy::verify {

struct Bounds {
    int n2_level = 3, n2_mode = 2;
    double n2_seconds = 60;
    bool twisted_n4 = true;
    int flow_weight = 2;
    long sector_K = 2;
    long ell_K = 4;
    double ell_seconds = 120;
    long jacobi_K = 3;
    int borcherds_pairs = 50;
    int borcherds_level = 2;

    static Bounds full() { return {}; }
    static Bounds quick() {
        Bounds b;
        b.n2_level = 2;
        b.twisted_n4 = false;
        b.flow_weight = 1;
        b.sector_K = 1;
        b.ell_K = 2;
        b.jacobi_K = 2;
        b.borcherds_pairs = 10;
        b.borcherds_level = 1;
        return b;
    }
};

struct Hooks {
    bool mutate_epsilon = false;
    bool mutate_phase = false;
};

struct Result {
    int id;
    std::string name;
    bool pass = true;
    std::string detail;
    double seconds = 0;
};

namespace detail {

struct Ctx {
    Result r;
    std::ostringstream note;
    void fail(const std::string& s) {
        if (r.pass) note.str("");
        r.pass = false;
        note << s;
    }
    void info(const std::string& s) {
        if (r.pass) note << s;
    }
};

inline Result timed(int id, const std::string& name, const std::function<void(Ctx&)>& body) {
    Ctx c;
    c.r.id = id;
    c.r.name = name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.fail(std::string("exception: ") + e.what());
    }
    c.r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.r.detail = c.note.str();
    return c.r;
}

inline std::string fmt(const std::map<Rational, Integer>& m) {
    std::string s;
    for (auto& [k, v] : m) s += (s.empty() ? "" : " ") + k.get_str() + ":" + v.get_str();
    return "{" + s + "}";
}

// Weight-0 cohomology by Milnor degree (charge = -degree/p); sector 0.
inline std::map<int, size_t> weight0_by_degree(ff::LGModel& M, bool invariant, std::string* err) {
    int top = M.N() * (M.p() - 2);
    std::map<int, size_t> out;
    for (auto& b : ff::cohomology_dims(M, 0, 0, Rational(-top - 1, M.p()), invariant)) {
        if (!b.d_squared_zero && err) *err = "d_lg^2 != 0 on block (" + b.w.get_str() + "," + b.m.get_str() + ")";
        Rational d = -b.m * M.p();
        if (!is_integer(d)) {
            if (b.dim_H() && err) *err = "cohomology at non-integral degree";
            continue;
        }
        if (b.dim_H()) out[int(to_long(d))] += b.dim_H();
    }
    return out;
}

}  // namespace detail

inline Result n2_relations(const Bounds& B) {
    return detail::timed(1, "N=2 relations", [&](detail::Ctx& c) {
        std::vector<ff::N2Structure> ss = {ff::msv1(1), ff::msv1(2), ff::msv2(1), ff::msv2(2),
                                           ff::lg(1, 3), ff::lg(1, 4), ff::lg(2, 3), ff::lg(2, 2)};
        auto t0 = std::chrono::steady_clock::now();
        for (auto& s : ss) {
            auto rep = ff::verify_n2(s, B.n2_level, B.n2_mode);
            if (!rep.pass) {
                c.fail(s.name + " N=" + std::to_string(s.N) + " p=" + std::to_string(s.p) + ": " + rep.witness->pair +
                       " m=" + std::to_string(rep.witness->m) + " n=" + std::to_string(rep.witness->n) + " on " +
                       rep.witness->state + ": " + rep.witness->difference);
                return;
            }
            c.info(s.name + "(" + std::to_string(s.N) + (s.p ? "," + std::to_string(s.p) : "") +
                   ") C=" + rep.c_from_jj.get_str() + " ");
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt > B.n2_seconds) c.fail("runtime " + std::to_string(dt) + " s exceeds target");
    });
}

inline Result lg_cohomology(const Bounds&) {
    return detail::timed(2, "LG cohomology = Milnor ring", [&](detail::Ctx& c) {
        std::vector<std::pair<int, int>> cases = {{1, 3}, {1, 4}, {1, 5}, {2, 2}, {3, 3}};
        for (auto [N, p] : cases) {
            auto f = HomogeneousPoly::fermat(N, p);
            ff::LGModel M(f);
            std::string err;
            auto h = detail::weight0_by_degree(M, false, &err);
            if (!err.empty()) return c.fail(err);
            MilnorRing R(f);
            size_t tot = 0;
            for (int d = 0; d <= R.top_degree(); ++d) {
                size_t want = R.quotient_basis(d).basis.size();
                tot += h[d];
                if (h[d] != want)
                    return c.fail("N=" + std::to_string(N) + " p=" + std::to_string(p) + " degree " + std::to_string(d) +
                                  ": H=" + std::to_string(h[d]) + " Milnor=" + std::to_string(want));
            }
            c.info("(" + std::to_string(N) + "," + std::to_string(p) + "):" + std::to_string(tot) + " ");
        }
    });
}

inline Result twisted_sectors(const Bounds& B) {
    return detail::timed(3, "twisted-sector cohomology", [&](detail::Ctx& c) {
        std::vector<int> Ns = {3};
        if (B.twisted_n4) Ns.push_back(4);
        for (int N : Ns) {
            auto f = HomogeneousPoly::fermat(N, N);
            ff::LGModel M(f);
            std::string err;
            auto h0 = detail::weight0_by_degree(M, true, &err);
            if (!err.empty()) return c.fail(err);
            for (auto& [d, dim] : invariant_poincare(f, N))
                if (h0[d] != dim)
                    return c.fail("N=" + std::to_string(N) + " sector 0 degree " + std::to_string(d) + ": " +
                                  std::to_string(h0[d]) + " vs " + std::to_string(dim));
            for (int i = 1; i < N; ++i) {
                auto [vw, vm] = M.vacuum_grade(i);
                Rational mlo = vm - Rational(N);
                size_t tot = 0;
                for (auto& b : ff::cohomology_dims(M, i, 0, mlo, true)) {
                    if (!b.d_squared_zero) return c.fail("d_lg^2 != 0 in sector " + std::to_string(i));
                    tot += b.dim_H();
                }
                if (tot != 1)
                    return c.fail("N=" + std::to_string(N) + " sector " + std::to_string(i) + ": dim H = " +
                                  std::to_string(tot));
            }
            c.info("N=" + std::to_string(N) + " ok ");
        }
    });
}

inline Result spectral_flow(const Bounds& B) {
    return detail::timed(4, "spectral-flow grading shifts", [&](detail::Ctx& c) {
        const int N = 3;
        ff::LGModel M(HomogeneousPoly::fermat(N, N));
        Rational c3(N - 2);
        size_t n = 0;
        for (int j = 0; j < N; ++j) {
            auto [vw, vm] = M.vacuum_grade(j);
            for (auto& mono : M.enumerate(j, B.flow_weight, vm - 3)) {
                auto [w0, m0] = M.measure(0, mono);
                auto [wj, mj] = M.measure(j, mono);
                ++n;
                if (mj != m0 - c3 * j || wj != w0 - Rational(j) * m0 + Rational(j * (j - 1)) * c3 / 2)
                    return c.fail("sector " + std::to_string(j) + " state " + mono.str() + ": (L0,J0) = (" +
                                  wj.get_str() + "," + mj.get_str() + ") from untwisted (" + w0.get_str() + "," +
                                  m0.get_str() + ")");
                // flow to the next sectors: gradings compose and d_lg intertwines
                for (int dj = 1; j + dj < N; ++dj) {
                    ff::SectorState s = ff::spectral_flow_map(dj, {j, ff::State::of(mono)});
                    auto [wf, mf] = M.measure(s.j, mono);
                    if (mf != mj - c3 * dj || wf != wj - Rational(dj) * mj + Rational(dj * (dj - 1)) * c3 / 2)
                        return c.fail("flow by " + std::to_string(dj) + " from sector " + std::to_string(j) + " on " +
                                      mono.str());
                    if (M.d_lg(s.j, s.v) != M.d_lg(j, ff::State::of(mono)))
                        return c.fail("d_lg does not intertwine the flow on " + mono.str());
                }
            }
        }
        c.info(std::to_string(n) + " states");
    });
}

inline Result sector_euler(const Bounds& B) {
    return detail::timed(5, "sector Euler characters", [&](detail::Ctx& c) {
        const int N = 3;
        ff::LGModel M(HomogeneousPoly::fermat(N, N));
        for (int j = 0; j < N; ++j) {
            Rational ylo = M.vacuum_grade(j).second - 3, yhi = 10;
            auto brute = ff::character(M, j, B.sector_K, ylo, ff::TraceMode::eu, false);
            Window w = Window::box(Rational(B.sector_K), ylo, yhi);
            auto closed = genus::sector_eu(N, j, B.sector_K, w);
            if (auto d = PuiseuxSeries::first_difference(brute.restricted(w), closed, w))
                return c.fail("sector " + std::to_string(j) + " differs at q^" + std::get<0>(*d).get_str() + " y^" +
                              std::get<1>(*d).get_str() + ": trace " + std::get<2>(*d).str() + " vs formula " +
                              std::get<3>(*d).str());
            c.info("j=" + std::to_string(j) + ":" + std::to_string(closed.size()) + " terms ");
        }
    });
}

inline Result orbifold_characters(const Bounds& B) {
    return detail::timed(6, "orbifold Eu and ch", [&](detail::Ctx& c) {
        const int N = 3;
        ff::LGModel M(HomogeneousPoly::fermat(N, N));
        Rational ylo = -4, yhi = 6;
        Window w = Window::box(Rational(B.sector_K), ylo, yhi);
        for (auto mode : {ff::TraceMode::eu, ff::TraceMode::ch}) {
            PuiseuxSeries sum(genus::ring_order(N), genus::denom(N));
            for (int j = 0; j < N; ++j) sum += ff::character(M, j, B.sector_K, ylo, mode, true).restricted(w);
            auto closed = mode == ff::TraceMode::eu ? genus::orbifold_eu(N, B.sector_K, w) : genus::orbifold_ch(N, B.sector_K, w);
            const char* nm = mode == ff::TraceMode::eu ? "Eu" : "ch";
            if (auto d = PuiseuxSeries::first_difference(sum, closed, w))
                return c.fail(std::string(nm) + " differs at q^" + std::get<0>(*d).get_str() + " y^" +
                              std::get<1>(*d).get_str() + ": traces " + std::get<2>(*d).str() + " vs formula " +
                              std::get<3>(*d).str());
            c.info(std::string(nm) + ":" + std::to_string(closed.size()) + " terms ");
        }
    });
}

inline Result genus_oracles(const Bounds& B, const Hooks& H) {
    return detail::timed(7, "elliptic genus oracles", [&](detail::Ctx& c) {
        auto t0 = std::chrono::steady_clock::now();
        genus::OrbifoldOptions opt{H.mutate_phase};
        auto ell = [&](int N, long K) {
            Rational Y = rat(N - 2, 2) + K + 2;
            return genus::orbifold_ell(N, K, genus::symmetric_window(K, Y), opt);
        };
        auto e3 = ell(3, B.ell_K);
        if (!e3.empty()) return c.fail("Ell(N=3) is not zero: " + e3.str());
        for (int N = 3; N <= 6; ++N) {
            long K = N <= 5 ? std::min<long>(B.ell_K, 2) : 1;
            auto s = ell(N, K);
            auto row = genus::q0_row(s), want = genus::expected_q0_row(N);
            if (row != want) return c.fail("N=" + std::to_string(N) + " q^0 row " + detail::fmt(row) + " vs " + detail::fmt(want));
            auto s0 = genus::specialize_s0(s);
            Integer chi = euler_number_oracle(N);
            for (auto& [q, v] : s0)
                if (v != (q == 0 ? chi : Integer(0)))
                    return c.fail("N=" + std::to_string(N) + " s=0 value " + v.get_str() + " at q^" + q.get_str());
            if (chi != 0 && s0[Rational(0)] != chi) return c.fail("N=" + std::to_string(N) + " missing s=0 constant");
            c.info("N=" + std::to_string(N) + " chi=" + chi.get_str() + " ");
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (dt > B.ell_seconds) c.fail("runtime " + std::to_string(dt) + " s exceeds target");
    });
}

inline Result jacobi_structure(const Bounds& B, const Hooks& H) {
    return detail::timed(8, "Jacobi-form structure", [&](detail::Ctx& c) {
        genus::OrbifoldOptions opt{H.mutate_phase};
        for (int N : {4, 5}) {
            long K = B.jacobi_K;
            Rational Y = rat(N - 2, 2) + K + 2;
            auto s = genus::orbifold_ell(N, K, genus::symmetric_window(K, Y), opt);
            auto chk = genus::check_jacobi(s, N, K, Y);
            if (!chk.ok()) return c.fail("N=" + std::to_string(N) + ": " + *chk.witness);
            c.info("N=" + std::to_string(N) + ":" + std::to_string(s.size()) + " terms ");
        }
    });
}

inline Result hodge(const Bounds&) {
    return detail::timed(9, "Hodge numbers", [&](detail::Ctx& c) {
        auto h5 = hodge_numbers(5), h4 = hodge_numbers(4);
        if (h5.at(2, 1) != 101 || h5.at(1, 1) != 1) return c.fail("quintic h21/h11 wrong");
        if (h4.at(1, 1) != 20) return c.fail("quartic h11 = " + std::to_string(h4.at(1, 1)));
        for (int N = 3; N <= 6; ++N) {
            auto t = hodge_numbers(N);
            if (Integer(t.euler()) != euler_number_oracle(N))
                return c.fail("N=" + std::to_string(N) + " alternating sum " + std::to_string(t.euler()));
            for (auto& [pq, v] : t.h)
                if (t.at(pq.second, pq.first) != v) return c.fail("Hodge symmetry fails for N=" + std::to_string(N));
        }
        c.info("h21(5)=101 h11(5)=1 h11(4)=20");
    });
}

inline Result chiral_ring(const Bounds&, const Hooks& H) {
    return detail::timed(10, "chiral ring", [&](detail::Ctx& c) {
        for (int N : {3, 4, 5}) {
            chiral::ChiralRing R(N, chiral::ChiralOptions{H.mutate_epsilon});
            std::string tag = "N=" + std::to_string(N) + ": ";
            size_t want = size_t(N - 1);
            for (auto& [d, dim] : invariant_poincare(HomogeneousPoly::fermat(N, N), N)) want += dim;
            if (R.dim() != want) return c.fail(tag + "dimension " + std::to_string(R.dim()));
            for (auto chk : {chiral::check_associative(R), chiral::check_graded_commutative(R),
                             chiral::check_product_rules(R), chiral::check_bigrades(R)})
                if (!chk.pass) return c.fail(tag + *chk.witness);
            for (auto& b : chiral::pairing_matrix(R))
                if (!b.nondegenerate())
                    return c.fail(tag + "pairing degenerate at (" + std::to_string(b.p) + "," + std::to_string(b.q) + ")");
            c.info(tag + "dim " + std::to_string(R.dim()) + " ");
        }
    });
}

inline Result engine_audit(const Bounds& B) {
    return detail::timed(11, "engine audit", [&](detail::Ctx& c) {
        auto rep = ff::borcherds_audit(2, B.borcherds_pairs, B.borcherds_level, 2);
        if (!rep.pass) return c.fail("commutator formula: " + *rep.witness);
        size_t blocks = 0;
        auto audit = [&](ff::LGModel& M, int j, const Rational& wmax, const Rational& mlo, bool inv) -> bool {
            for (auto& b : ff::cohomology_dims(M, j, wmax, mlo, inv)) {
                ++blocks;
                if (b.euler() != b.euler_H() || !b.d_squared_zero) {
                    c.fail("Euler invariance fails on block (" + b.w.get_str() + "," + b.m.get_str() + ")");
                    return false;
                }
            }
            return true;
        };
        ff::LGModel M3(HomogeneousPoly::fermat(3, 3));
        for (int j = 0; j < 3; ++j)
            if (!audit(M3, j, 1, M3.vacuum_grade(j).second - 2, false)) return;
        ff::LGModel M23(HomogeneousPoly::fermat(2, 3));
        if (!audit(M23, 0, 1, -2, false)) return;
        c.info(std::to_string(rep.pairs) + " pairs, " + std::to_string(blocks) + " blocks");
    });
}

using Criterion = std::function<Result()>;

inline std::vector<Criterion> criteria(const Bounds& B, const Hooks& H = {}) {
    return {[B] { return n2_relations(B); },          [B] { return lg_cohomology(B); },
            [B] { return twisted_sectors(B); },       [B] { return spectral_flow(B); },
            [B] { return sector_euler(B); },          [B] { return orbifold_characters(B); },
            [B, H] { return genus_oracles(B, H); },   [B, H] { return jacobi_structure(B, H); },
            [B] { return hodge(B); },                 [B, H] { return chiral_ring(B, H); },
            [B] { return engine_audit(B); }};
}

// Runs the criteria on up to `threads` workers; results come back in input order.
inline std::vector<Result> run_parallel(const std::vector<Criterion>& cs, int threads) {
    std::vector<Result> out(cs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i; (i = next++) < cs.size();) out[i] = cs[i]();
    };
    int n = std::max(1, std::min<int>(threads, int(cs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return out;
}

inline std::vector<Result> run_all(const Bounds& B, const Hooks& H = {}, int threads = 1) {
    return run_parallel(criteria(B, H), threads);
}

}  // namespace lgcy::verify
