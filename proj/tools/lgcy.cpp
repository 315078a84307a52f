#include "lgcy/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using lgcy::Rational;
using lgcy::cli::RunConfig;

// Rational-valued option stored through a string.
struct RationalOpt {
    std::string text;
    std::optional<Rational> get(const char* flag) const {
        if (text.empty()) return std::nullopt;
        try {
            Rational r(text);
            r.canonicalize();
            return r;
        } catch (const std::exception&) {
            throw lgcy::cli::UsageError(std::string(flag) + ": expected a rational number, got '" + text + "'");
        }
    }
};

void add_n(CLI::App* s, RunConfig& c, bool required = true) {
    auto* o = s->add_option("--n", c.N, "number of variables (Fermat degree by default)");
    if (required) o->required();
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig c;
    c.threads = lgcy::cli::default_threads();
    for (int i = 1; i < argc; ++i) c.args.emplace_back(argv[i]);

    CLI::App app{"Landau-Ginzburg / Calabi-Yau computations: Milnor rings, free-field cohomology, orbifold genera"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all");
    int p = 0;
    RationalOpt Y, W, mlo;
    auto common = [&](CLI::App* s) {
        s->add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "tsv"}));
        s->add_option("--output", c.output, "write the report to this file instead of stdout");
        s->add_option("--threads", c.threads, "parallelism degree (default: $LGCY_THREADS or 1)");
        s->add_flag("--timing", c.timing, "include wall-clock time in the report");
    };

    auto* milnor = app.add_subcommand("milnor", "graded Milnor ring, invariant part, Hodge numbers");
    add_n(milnor, c);
    milnor->add_option("--p", p, "degree of the Fermat polynomial (default N)");
    milnor->add_option("--poly", c.poly_file, "polynomial file: lines 'coeff e0 ... e{N-1}'");
    auto* g1 = milnor->add_flag("--graded", "graded quotient basis (default)");
    auto* g2 = milnor->add_flag("--invariant", "dimensions of the invariant part by degree");
    auto* g3 = milnor->add_flag("--hodge", "Hodge numbers of the Fermat hypersurface");
    g1->excludes(g2)->excludes(g3);
    g2->excludes(g3);
    common(milnor);

    auto* ell = app.add_subcommand("ellgenus", "orbifold elliptic genus as a q, y series");
    add_n(ell, c);
    ell->add_option("--qorder", c.K, "highest q power");
    ell->add_option("--ywindow", Y.text, "|y| bound (default (N-2)/2 + K)");
    ell->add_flag("--literal", c.literal, "use the un-normalized variant of the double sum");
    common(ell);

    auto* chr = app.add_subcommand("character", "free-field sector trace or orbifold closed form");
    add_n(chr, c);
    chr->add_option("--p", p, "degree of the Fermat polynomial (default N)");
    chr->add_option("--sector", c.sector, "twisted sector j");
    chr->add_option("--qorder", c.K, "highest q power");
    chr->add_option("--min-charge", mlo.text, "lowest J0 charge enumerated (default vacuum charge - N)");
    chr->add_option("--ywindow", Y.text, "|y| bound for --orb (default N + K)");
    chr->add_option("--trace", c.trace, "ch or eu (super-trace)")->check(CLI::IsMember({"ch", "eu"}));
    chr->add_flag("--orb", c.orb, "closed-form orbifold sum over all sectors");
    chr->add_flag("--invariant", c.invariant, "project onto Z_N invariants");
    common(chr);

    auto* eul = app.add_subcommand("euler", "Euler number from three routes");
    add_n(eul, c);
    common(eul);

    auto* chy = app.add_subcommand("chiy", "chi_y genus from Hodge numbers, checked against the genus q^0 row");
    add_n(chy, c);
    common(chy);

    auto* coh = app.add_subcommand("cohomology", "d_lg cohomology by (weight, charge) block");
    add_n(coh, c);
    coh->add_option("--p", p, "degree of the Fermat polynomial (default N)");
    coh->add_option("--sector", c.sector, "twisted sector j");
    coh->add_option("--max-weight", W.text, "highest L0 weight (default 0)");
    coh->add_option("--min-charge", mlo.text, "lowest J0 charge enumerated (default vacuum charge - N)");
    coh->add_flag("--invariant", c.invariant, "restrict to Z_N invariant states");
    common(coh);

    auto* ring = app.add_subcommand("chiralring", "chiral ring multiplication table or pairing");
    add_n(ring, c);
    auto* t1 = ring->add_flag("--table", "full multiplication table (default)");
    auto* t2 = ring->add_flag("--pairing", "top-class pairing per complementary bigrade");
    t1->excludes(t2);
    common(ring);

    auto* ver = app.add_subcommand("verify", "verification suites");
    ver->require_subcommand(1);
    auto* vn2 = ver->add_subcommand("n2", "N=2 relations of a free-field structure");
    vn2->add_option("--structure", c.structure, "msv1, msv2 or lg")->check(CLI::IsMember({"msv1", "msv2", "lg"}));
    add_n(vn2, c);
    vn2->add_option("--p", p, "degree for the lg structure (default N)");
    vn2->add_option("--max-weight", W.text, "highest creation level of test states (default 3)");
    vn2->add_option("--max-mode", c.max_mode, "mode range [-M, M]");
    common(vn2);
    auto* vtr = ver->add_subcommand("translation", "[T, a_(r)] = -r a_(r-1) on generators");
    add_n(vtr, c, false);
    vtr->add_option("--max-weight", W.text, "highest creation level of test states (default 2)");
    vtr->add_option("--max-mode", c.max_mode, "mode range [-M, M]");
    common(vtr);
    for (auto [name, help] : {std::pair{"flow", "spectral-flow grading shifts"},
                              std::pair{"genus", "elliptic genus oracles and Jacobi structure"},
                              std::pair{"all", "every acceptance criterion"}}) {
        auto* s = ver->add_subcommand(name, help);
        add_n(s, c, false);
        s->add_flag("--quick", c.quick, "reduced bounds");
        s->add_flag("--inject-epsilon-error", c.hooks.mutate_epsilon, "test hook: corrupt the cocycle sign");
        s->add_flag("--inject-phase-error", c.hooks.mutate_phase, "test hook: corrupt one orbifold phase");
        common(s);
    }
    vtr->callback([&] {
        if (vtr->count("--n") == 0) c.N = 2;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return lgcy::cli::exit_usage;
    }

    for (auto* s : app.get_subcommands()) {
        c.subcommand = s->get_name();
        for (auto* t : s->get_subcommands()) c.target = t->get_name();
    }
    if (p) c.p = p;
    if (milnor->parsed()) c.milnor_mode = milnor->count("--invariant") ? "invariant" : milnor->count("--hodge") ? "hodge" : "graded";
    if (ring->parsed()) c.ring_mode = ring->count("--pairing") ? "pairing" : "table";

    try {
        c.Y = Y.get("--ywindow");
        c.max_weight = W.get("--max-weight");
        c.min_charge = mlo.get("--min-charge");
        auto r = lgcy::cli::run(c);
        lgcy::cli::emit(r, c, std::cout);
        return r.exit_code;
    } catch (const lgcy::cli::UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lgcy::cli::exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lgcy::cli::exit_usage;
    }
}
