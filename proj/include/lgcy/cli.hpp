#pragma once

#include "lgcy/chiralring.hpp"
#include "lgcy/genus.hpp"
#include "lgcy/io.hpp"
#include "lgcy/lg.hpp"
#include "lgcy/milnor.hpp"
#include "lgcy/n2.hpp"
#include "lgcy/verify.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lgcy::cli {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum Exit { exit_ok = 0, exit_usage = 1, exit_witness = 2 };

struct RunConfig {
    std::string subcommand;  // milnor ellgenus character euler chiy cohomology chiralring verify
    std::string target;      // verify: n2 translation flow genus all
    std::vector<std::string> args;  // echoed verbatim

    int N = 3;
    std::optional<int> p;  // default N
    long K = 2;
    std::optional<Rational> Y;
    int sector = 0;
    std::optional<Rational> max_weight;
    int max_mode = 2;
    std::optional<Rational> min_charge;

    std::string format = "json";
    std::string output;
    int threads = 1;
    bool timing = false;

    std::string milnor_mode = "graded";  // graded invariant hodge
    std::string poly_file;
    bool invariant = false;
    bool orb = false;
    std::string trace = "ch";  // ch eu
    bool literal = false;
    std::string ring_mode = "table";  // table pairing
    std::string structure = "msv1";
    bool quick = false;
    verify::Hooks hooks;
};

// Parallelism from LGCY_THREADS, else 1.
inline int default_threads() {
    if (const char* s = std::getenv("LGCY_THREADS")) {
        try {
            int n = std::stoi(s);
            if (n >= 1) return n;
        } catch (...) {
        }
    }
    return 1;
}

struct Report {
    std::string command;
    std::string status = "computed";  // pass fail computed
    Json witnesses = Json::array();
    std::optional<double> seconds;
    Json payload = Json::object();
    std::string tsv;
    int exit_code = exit_ok;

    Json json() const {
        Json j;
        j["command"] = command;
        j["status"] = status;
        j["witnesses"] = witnesses;
        j["timing"] = seconds ? Json{{"seconds", *seconds}} : Json(nullptr);
        j["payload"] = payload;
        return j;
    }
    std::string render(const std::string& format) const {
        if (format == "tsv") return tsv;
        return json().dump(2) + "\n";
    }
    void witness(Json w) {
        status = "fail";
        exit_code = exit_witness;
        witnesses.push_back(std::move(w));
    }
};

namespace detail {

inline void validate(const RunConfig& c) {
    if (c.N < 1) throw UsageError("--n must be >= 1");
    if (c.p && *c.p < 2) throw UsageError("--p must be >= 2");
    if (c.K < 0) throw UsageError("--qorder must be >= 0");
    if (c.Y && *c.Y < 0) throw UsageError("--ywindow must be >= 0");
    if (c.max_mode < 0) throw UsageError("--max-mode must be >= 0");
    if (c.threads < 1) throw UsageError("--threads must be >= 1");
    if (c.format != "json" && c.format != "tsv") throw UsageError("--format must be json or tsv");
}

inline void need_calabi_yau(const RunConfig& c, const char* what) {
    if (c.N < 3) throw UsageError(std::string(what) + " needs --n >= 3");
    if (c.p && *c.p != c.N) throw UsageError(std::string(what) + " is defined for the degree-N Fermat polynomial only");
}

inline int whole(const Rational& r, const char* flag) {
    if (!is_integer(r)) throw UsageError(std::string(flag) + " must be an integer here");
    return int(to_long(r));
}

inline Json exps_json(const Exps& e) {
    Json a = Json::array();
    for (int v : e) a.push_back(v);
    return a;
}

inline std::string exps_str(const Exps& e) {
    std::string s;
    for (size_t i = 0; i < e.size(); ++i) s += (i ? "," : "") + std::to_string(e[i]);
    return s;
}

inline void put_series(Report& r, const PuiseuxSeries& s) {
    r.payload["series"] = series_to_json(s);
    r.tsv = series_to_tsv(s);
}

inline void milnor(const RunConfig& c, Report& r) {
    HomogeneousPoly f = c.poly_file.empty() ? HomogeneousPoly::fermat(c.N, c.p.value_or(c.N))
                                            : parse_poly_file(c.poly_file, c.N);
    r.payload["poly"] = f.str();
    r.payload["nvars"] = f.n;
    r.payload["degree"] = f.p;
    if (c.milnor_mode == "hodge") {
        if (!c.poly_file.empty()) throw UsageError("--hodge uses the Fermat polynomial; drop --poly");
        need_calabi_yau(c, "--hodge");
        HodgeTable t = hodge_numbers(c.N);
        Json h = Json::array();
        std::ostringstream os;
        os << "p\tq\th\n";
        for (auto& [pq, v] : t.h) {
            h.push_back({{"p", pq.first}, {"q", pq.second}, {"h", v}});
            os << pq.first << '\t' << pq.second << '\t' << v << '\n';
        }
        r.payload["dim"] = t.dim;
        r.payload["hodge"] = h;
        r.payload["euler"] = t.euler();
        r.tsv = os.str();
        return;
    }
    MilnorRing R(f);
    try {
        R.require_isolated();
    } catch (const IsolatedSingularityViolation& e) {
        r.witness({{"kind", "non-isolated singularity"}, {"message", e.what()}});
        return;
    }
    r.payload["top_degree"] = R.top_degree();
    Json degs = Json::array();
    std::ostringstream os;
    if (c.milnor_mode == "invariant") {
        r.payload["group_order"] = f.p;
        os << "degree\tdim\n";
        for (auto& [d, n] : invariant_poincare(f, f.p)) {
            degs.push_back({{"degree", d}, {"dim", n}});
            os << d << '\t' << n << '\n';
        }
    } else {
        r.payload["total"] = R.total_dim();
        os << "degree\tdim\tbasis\n";
        for (int d = 0; d <= R.top_degree(); ++d) {
            auto& q = R.quotient_basis(d);
            Json basis = Json::array();
            std::string bs;
            for (auto& e : q.basis) {
                basis.push_back(exps_json(e));
                bs += (bs.empty() ? "" : ";") + exps_str(e);
            }
            degs.push_back({{"degree", d}, {"dim", q.basis.size()}, {"basis", basis}});
            os << d << '\t' << q.basis.size() << '\t' << bs << '\n';
        }
    }
    r.payload["degrees"] = degs;
    r.tsv = os.str();
}

inline void ellgenus(const RunConfig& c, Report& r) {
    need_calabi_yau(c, "ellgenus");
    Rational Y = c.Y.value_or(rat(c.N - 2, 2) + c.K);
    Window w = genus::symmetric_window(c.K, Y);
    r.payload["N"] = c.N;
    r.payload["qorder"] = c.K;
    r.payload["ywindow"] = rational_json(Y);
    r.payload["variant"] = c.literal ? "literal" : "normalized";
    try {
        put_series(r, c.literal ? genus::orbifold_ell_literal(c.N, c.K, w) : genus::orbifold_ell(c.N, c.K, w));
    } catch (const genus::IntegralityViolation& e) {
        r.witness({{"kind", "integrality"}, {"q", rational_json(e.q)}, {"y", rational_json(e.y)}, {"coeff", e.coeff}});
    }
}

inline void character(const RunConfig& c, Report& r) {
    if (c.trace != "ch" && c.trace != "eu") throw UsageError("--trace must be ch or eu");
    auto mode = c.trace == "eu" ? ff::TraceMode::eu : ff::TraceMode::ch;
    r.payload["N"] = c.N;
    r.payload["qorder"] = c.K;
    r.payload["trace"] = c.trace;
    if (c.orb) {
        need_calabi_yau(c, "character --orb");
        Rational Y = c.Y.value_or(Rational(c.N + c.K));
        Window w = genus::symmetric_window(c.K, Y);
        r.payload["ywindow"] = rational_json(Y);
        try {
            put_series(r, mode == ff::TraceMode::eu ? genus::orbifold_eu(c.N, c.K, w) : genus::orbifold_ch(c.N, c.K, w));
        } catch (const genus::IntegralityViolation& e) {
            r.witness({{"kind", "integrality"}, {"q", rational_json(e.q)}, {"y", rational_json(e.y)}, {"coeff", e.coeff}});
        }
        return;
    }
    ff::LGModel M(HomogeneousPoly::fermat(c.N, c.p.value_or(c.N)));
    M.check_sector(c.sector);
    if (c.sector >= c.N) throw UsageError("--sector must be < N");
    Rational ylo = c.min_charge.value_or(M.vacuum_grade(c.sector).second - c.N);
    r.payload["sector"] = c.sector;
    r.payload["invariant"] = c.invariant;
    r.payload["min_charge"] = rational_json(ylo);
    put_series(r, ff::character(M, c.sector, c.K, ylo, mode, c.invariant));
}

inline void euler(const RunConfig& c, Report& r) {
    need_calabi_yau(c, "euler");
    Integer oracle = euler_number_oracle(c.N);
    long hodge = hodge_numbers(c.N).euler();
    Rational Y = rat(c.N - 2, 2);
    auto s0 = genus::specialize_s0(genus::orbifold_ell(c.N, 0, genus::symmetric_window(0, Y)));
    Integer from_genus = s0.count(Rational(0)) ? s0[Rational(0)] : Integer(0);
    r.payload["N"] = c.N;
    r.payload["euler"] = oracle.get_str();
    r.payload["hodge_alternating_sum"] = hodge;
    r.payload["genus_at_s0"] = from_genus.get_str();
    r.status = "pass";
    if (Integer(hodge) != oracle || from_genus != oracle)
        r.witness({{"kind", "euler mismatch"}, {"oracle", oracle.get_str()}, {"hodge", hodge}, {"genus", from_genus.get_str()}});
    r.tsv = "source\tvalue\noracle\t" + oracle.get_str() + "\nhodge\t" + std::to_string(hodge) + "\ngenus\t" +
            from_genus.get_str() + "\n";
}

inline void chiy(const RunConfig& c, Report& r) {
    need_calabi_yau(c, "chiy");
    Json a = Json::array();
    std::ostringstream os;
    os << "p\tcoeff\n";
    for (auto& [p, v] : chi_y_oracle(c.N)) {
        a.push_back({{"p", p}, {"coeff", v.get_str()}});
        os << p << '\t' << v.get_str() << '\n';
    }
    r.payload["N"] = c.N;
    r.payload["chi_y"] = a;
    Rational Y = rat(c.N - 2, 2);
    auto row = genus::q0_row(genus::orbifold_ell(c.N, 0, genus::symmetric_window(0, Y)));
    auto want = genus::expected_q0_row(c.N);
    Json q0 = Json::array();
    for (auto& [y, v] : row) q0.push_back({{"y", rational_json(y)}, {"coeff", v.get_str()}});
    r.payload["genus_q0_row"] = q0;
    r.status = "pass";
    if (row != want)
        r.witness({{"kind", "q^0 row differs from y^{-(N-2)/2} chi_{-y}"}, {"got", verify::detail::fmt(row)},
                   {"expected", verify::detail::fmt(want)}});
    r.tsv = os.str();
}

inline void cohomology(const RunConfig& c, Report& r) {
    ff::LGModel M(HomogeneousPoly::fermat(c.N, c.p.value_or(c.N)));
    M.check_sector(c.sector);
    if (c.sector >= c.N && c.sector != 0) throw UsageError("--sector must be < N");
    Rational wmax = c.max_weight.value_or(0);
    Rational mlo = c.min_charge.value_or(M.vacuum_grade(c.sector).second - c.N);
    Json blocks = Json::array();
    std::ostringstream os;
    os << "weight\tcharge\tdim\tdim_even\tdim_odd\th_even\th_odd\n";
    size_t total = 0;
    for (auto& b : ff::cohomology_dims(M, c.sector, wmax, mlo, c.invariant)) {
        blocks.push_back({{"weight", rational_json(b.w)},
                          {"charge", rational_json(b.m)},
                          {"dim", b.dim},
                          {"dim_even", b.dim_even},
                          {"dim_odd", b.dim_odd},
                          {"h_even", b.h_even()},
                          {"h_odd", b.h_odd()},
                          {"euler", b.euler()}});
        os << b.w.get_str() << '\t' << b.m.get_str() << '\t' << b.dim << '\t' << b.dim_even << '\t' << b.dim_odd
           << '\t' << b.h_even() << '\t' << b.h_odd() << '\n';
        total += b.dim_H();
        if (!b.d_squared_zero)
            r.witness({{"kind", "d^2 != 0"}, {"weight", rational_json(b.w)}, {"charge", rational_json(b.m)}});
        else if (b.euler() != b.euler_H())
            r.witness({{"kind", "Euler characteristic changed"}, {"weight", rational_json(b.w)}, {"charge", rational_json(b.m)}});
    }
    r.payload["N"] = c.N;
    r.payload["p"] = M.p();
    r.payload["sector"] = c.sector;
    r.payload["invariant"] = c.invariant;
    r.payload["max_weight"] = rational_json(wmax);
    r.payload["min_charge"] = rational_json(mlo);
    r.payload["total"] = total;
    r.payload["blocks"] = blocks;
    r.tsv = os.str();
}

inline Json sparse_json(const chiral::ChiralRing& R, const chiral::Sparse& v) {
    Json a = Json::array();
    for (auto& [i, x] : v) a.push_back({{"class", R.basis()[i].str()}, {"coeff", rational_json(x)}});
    return a;
}

inline void chiralring(const RunConfig& c, Report& r) {
    need_calabi_yau(c, "chiralring");
    chiral::ChiralRing R(c.N, chiral::ChiralOptions{c.hooks.mutate_epsilon});
    Json basis = Json::array();
    for (auto& b : R.basis()) basis.push_back({{"class", b.str()}, {"bigrade", {b.cdeg, b.pdeg}}});
    r.payload["N"] = c.N;
    r.payload["dim"] = R.dim();
    r.payload["basis"] = basis;
    std::ostringstream os;
    if (c.ring_mode == "pairing") {
        r.status = "pass";
        Json blocks = Json::array();
        os << "p\tq\tsize\trank\tnondegenerate\n";
        for (auto& b : chiral::pairing_matrix(R)) {
            Json M = Json::array();
            for (size_t i = 0; i < b.M.rows; ++i) {
                Json row = Json::array();
                for (size_t j = 0; j < b.M.cols; ++j) row.push_back(rational_json(b.M(i, j)));
                M.push_back(row);
            }
            blocks.push_back({{"bigrade", {b.p, b.q}},
                              {"rows", b.rows.size()},
                              {"cols", b.cols.size()},
                              {"rank", b.rank},
                              {"nondegenerate", b.nondegenerate()},
                              {"matrix", M}});
            os << b.p << '\t' << b.q << '\t' << b.rows.size() << "x" << b.cols.size() << '\t' << b.rank << '\t'
               << (b.nondegenerate() ? "yes" : "no") << '\n';
            if (!b.nondegenerate()) r.witness({{"kind", "degenerate pairing"}, {"bigrade", {b.p, b.q}}});
        }
        r.payload["pairing"] = blocks;
    } else {
        Json rows = Json::array();
        os << "a\tb\tproduct\n";
        for (size_t i = 0; i < R.dim(); ++i)
            for (size_t j = 0; j < R.dim(); ++j) {
                auto& t = R.table(i, j);
                rows.push_back({{"a", R.basis()[i].str()}, {"b", R.basis()[j].str()}, {"product", sparse_json(R, t)}});
                os << R.basis()[i].str() << '\t' << R.basis()[j].str() << '\t' << R.str(t) << '\n';
            }
        r.payload["table"] = rows;
    }
    r.tsv = os.str();
}

inline void verify_criteria(const std::vector<verify::Result>& rs, Report& r) {
    r.status = "pass";
    Json a = Json::array();
    std::ostringstream os;
    os << "criterion\tname\tstatus\tdetail\n";
    for (auto& x : rs) {
        a.push_back({{"criterion", x.id}, {"name", x.name}, {"status", x.pass ? "pass" : "fail"}, {"detail", x.detail}});
        os << x.id << '\t' << x.name << '\t' << (x.pass ? "pass" : "fail") << '\t' << x.detail << '\n';
        if (!x.pass) r.witness({{"criterion", x.id}, {"name", x.name}, {"detail", x.detail}});
    }
    r.payload["criteria"] = a;
    r.tsv = os.str();
}

inline void verify_cmd(const RunConfig& c, Report& r) {
    verify::Bounds B = c.quick ? verify::Bounds::quick() : verify::Bounds::full();
    if (c.target == "n2") {
        int p = c.p.value_or(c.N);
        auto s = ff::structure_by_name(c.structure, c.N, p);
        auto rep = ff::verify_n2(s, whole(c.max_weight.value_or(3), "--max-weight"), c.max_mode);
        r.status = "pass";
        r.payload = {{"structure", rep.structure},
                     {"N", rep.N},
                     {"p", rep.p},
                     {"c_from_jj", rational_json(rep.c_from_jj)},
                     {"c_from_qg", rational_json(rep.c_from_qg)},
                     {"expected_c", rational_json(rep.expected_c)},
                     {"checks", rep.checks},
                     {"states", rep.states}};
        if (!rep.pass) {
            Json w = {{"kind", "relation"}};
            if (rep.witness)
                w = {{"pair", rep.witness->pair},
                     {"m", rep.witness->m},
                     {"n", rep.witness->n},
                     {"state", rep.witness->state},
                     {"difference", rep.witness->difference}};
            r.witness(w);
        }
        r.tsv = "structure\tN\tp\tC\tchecks\tstatus\n" + rep.structure + "\t" + std::to_string(rep.N) + "\t" +
                std::to_string(rep.p) + "\t" + rep.c_from_jj.get_str() + "\t" + std::to_string(rep.checks) + "\t" +
                r.status + "\n";
    } else if (c.target == "translation") {
        auto rep = ff::verify_translation(c.N, c.max_mode, whole(c.max_weight.value_or(2), "--max-weight"));
        r.status = "pass";
        r.payload = {{"N", c.N}, {"checks", rep.checks}};
        if (!rep.pass) r.witness({{"kind", "translation"}, {"detail", *rep.witness}});
        r.tsv = "N\tchecks\tstatus\n" + std::to_string(c.N) + "\t" + std::to_string(rep.checks) + "\t" + r.status + "\n";
    } else if (c.target == "flow") {
        verify_criteria(verify::run_parallel({[B] { return verify::spectral_flow(B); }}, c.threads), r);
    } else if (c.target == "genus") {
        auto H = c.hooks;
        verify_criteria(verify::run_parallel({[B, H] { return verify::genus_oracles(B, H); },
                                              [B, H] { return verify::jacobi_structure(B, H); }},
                                             c.threads),
                        r);
    } else if (c.target == "all") {
        verify_criteria(verify::run_all(B, c.hooks, c.threads), r);
    } else {
        throw UsageError("verify target must be one of n2, translation, flow, genus, all");
    }
}

}  // namespace detail

inline std::string join_args(const std::vector<std::string>& a) {
    std::string s;
    for (auto& x : a) s += (s.empty() ? "" : " ") + x;
    return s;
}

// Dispatches one subcommand. Usage errors escape as UsageError; domain
// errors raised by the library on bad input are reported as usage errors too.
inline Report run(const RunConfig& c) {
    detail::validate(c);
    Report r;
    r.command = join_args(c.args);
    auto t0 = std::chrono::steady_clock::now();
    try {
        if (c.subcommand == "milnor") detail::milnor(c, r);
        else if (c.subcommand == "ellgenus") detail::ellgenus(c, r);
        else if (c.subcommand == "character") detail::character(c, r);
        else if (c.subcommand == "euler") detail::euler(c, r);
        else if (c.subcommand == "chiy") detail::chiy(c, r);
        else if (c.subcommand == "cohomology") detail::cohomology(c, r);
        else if (c.subcommand == "chiralring") detail::chiralring(c, r);
        else if (c.subcommand == "verify") detail::verify_cmd(c, r);
        else throw UsageError("unknown subcommand '" + c.subcommand + "'");
    } catch (const UsageError&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    if (c.timing) r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

inline void emit(const Report& r, const RunConfig& c, std::ostream& out) {
    std::string text = r.render(c.format);
    if (c.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(c.output, std::ios::binary);
    if (!f) throw UsageError("cannot open output file " + c.output);
    f << text;
}

}  // namespace lgcy::cli
