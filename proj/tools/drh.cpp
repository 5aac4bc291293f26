// drh: exact workbench for hamiltonian hierarchies built from
// double-ramification intersection data.

#include "drh/hierarchy.hpp"
#include "drh/kdv.hpp"
#include "drh/render.hpp"
#include "drh/serialize.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>

using namespace drh;

namespace {

struct Options {
    std::string cohft = "trivial";
    int genus_max = 1;
    int deg_max = 3;
    int eps_max = -1; // unlimited
    int alpha = 1;
    int d = 0;
    int d_max = 1;
    int depth = 5;
    int t_order = 3;
    bool modes = false;
    std::string pairs;
    std::string suite = "all";
    std::string format = "plain";
    std::string out;
};

std::unique_ptr<Oracle> make_oracle(const std::string& selector) {
    if (selector == "trivial") return std::make_unique<TrivialOracle>();
    if (selector == "hodge") return std::make_unique<HodgeOracle>();
    if (selector.rfind("table=", 0) == 0)
        return std::make_unique<TableOracle>(TableOracle::from_file(selector.substr(6)));
    throw CLI::ValidationError("--cohft must be trivial, hodge or table=PATH");
}

Truncation truncation_of(const Options& o) {
    Truncation t;
    t.genus_max = o.genus_max;
    t.deg_max = o.deg_max;
    t.eps_max = o.eps_max < 0 ? Truncation::unlimited : o.eps_max;
    return t;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot open output file '" + o.out + "'");
    f << text;
    if (!text.empty() && text.back() != '\n') f << "\n";
}

std::string render_functional(const Options& o, const LocalFunctional& h) {
    if (o.format == "latex") return to_latex(h);
    if (o.format == "json") return to_json(h).dump(1);
    return to_plain(h);
}

std::vector<std::pair<int, int>> parse_pairs(const std::string& s, int d_max, int dim) {
    std::vector<std::pair<int, int>> targets;
    if (s.empty()) {
        for (int alpha = 1; alpha <= dim; ++alpha)
            for (int d = 0; d <= d_max; ++d) targets.push_back({alpha, d});
        return targets;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ';')) {
        auto comma = item.find(',');
        if (comma == std::string::npos)
            throw CLI::ValidationError("--pairs entries must look like alpha,d");
        targets.push_back({std::stoi(item.substr(0, comma)), std::stoi(item.substr(comma + 1))});
    }
    return targets;
}

int run_hamiltonian(const Options& o) {
    auto oracle = make_oracle(o.cohft);
    if (o.modes) {
        BSeries s = g_series(*oracle, o.alpha, o.d, truncation_of(o));
        emit(o, o.format == "json" ? to_json(s).dump(1) : to_plain(s));
        return 0;
    }
    emit(o, render_functional(o, hamiltonian(*oracle, o.alpha, o.d, truncation_of(o))));
    return 0;
}

int run_flow(const Options& o) {
    auto oracle = make_oracle(o.cohft);
    Hierarchy H = build_hierarchy(*oracle, truncation_of(o), {{o.alpha, o.d}}, false, false);
    auto rhs = dr_flow(H, o.alpha, o.d);
    std::ostringstream os;
    if (o.format == "json") {
        OrderedJson arr = OrderedJson::array();
        for (const auto& f : rhs) arr.push_back(to_json(f));
        os << arr.dump(1);
    } else {
        for (int c = 1; c <= H.spec.dim; ++c) {
            const DiffPoly& f = rhs[static_cast<std::size_t>(c - 1)];
            if (H.spec.dim > 1) os << "u" << c << "_t = ";
            os << (o.format == "latex" ? to_latex(f) : to_plain(f)) << "\n";
        }
    }
    emit(o, os.str());
    return 0;
}

int run_gbar(const Options& o) {
    auto oracle = make_oracle(o.cohft);
    emit(o, render_functional(o, g_total(*oracle, truncation_of(o))));
    return 0;
}

int run_bracket(const Options& o, int alpha2, int d2) {
    auto oracle = make_oracle(o.cohft);
    Truncation t = truncation_of(o);
    Hierarchy H = build_hierarchy(*oracle, t, {{o.alpha, o.d}, {alpha2, d2}}, false, false);
    Truncation window = t;
    if (window.deg_max != Truncation::unlimited) window.deg_max -= 1;
    LocalFunctional br;
    {
        TruncationScope scope(window);
        br = bracket(H.hams.at({o.alpha, o.d}).h, H.hams.at({alpha2, d2}).h, H.K);
    }
    // zero functionals print as 0, not as an exact representative
    if (lf_equal(br, LocalFunctional(DiffPoly(H.spec.dim))))
        br = LocalFunctional(DiffPoly(H.spec.dim));
    emit(o, render_functional(o, br));
    return 0;
}

int run_kdv(const Options& o) {
    KdvChain chain = kdv_chain(o.depth);
    std::ostringstream os;
    if (o.format == "json") {
        OrderedJson arr = OrderedJson::array();
        for (const auto& h : chain.hams) arr.push_back(to_json(h));
        os << arr.dump(1);
    } else {
        for (std::size_t i = 0; i < chain.hams.size(); ++i)
            os << "h" << i << " = "
               << (o.format == "latex" ? to_latex(chain.hams[i]) : to_plain(chain.hams[i]))
               << "\n";
    }
    emit(o, os.str());
    return 0;
}

int run_string_solution(const Options& o) {
    auto oracle = make_oracle(o.cohft);
    Truncation t = truncation_of(o);
    auto targets = parse_pairs(o.pairs, o.d_max, oracle->spec().dim);
    Hierarchy H = build_hierarchy(*oracle, t, targets, false, true);
    TaylorSolution sol = string_solution(H, o.t_order);
    emit(o, to_plain(sol));
    return 0;
}

int run_verify(const Options& o) {
    auto oracle = make_oracle(o.cohft);
    Truncation t = truncation_of(o);
    auto targets = parse_pairs(o.pairs, o.d_max, oracle->spec().dim);
    Report rep;

    bool all = o.suite == "all";
    bool needs_hierarchy = all || o.suite == "commutativity" || o.suite == "string" ||
                           o.suite == "dilaton" || o.suite == "first-derivative" ||
                           o.suite == "string-solution";
    Hierarchy H;
    if (needs_hierarchy) {
        bool with_gbar = all || o.suite == "dilaton" || o.suite == "first-derivative";
        H = build_hierarchy(*oracle, t, targets, with_gbar, true);
    }
    if (all || o.suite == "commutativity") rep.merge(verify_commutativity_all(H));
    if (all || o.suite == "string") rep.merge(verify_string(H));
    if (all || o.suite == "dilaton") rep.merge(verify_dilaton(H));
    if (all || o.suite == "first-derivative") rep.merge(verify_first_derivative(H));
    if (all || o.suite == "genus0")
        rep.merge(verify_genus0_identity(*oracle, oracle->spec().unit,
                                         std::max(0, std::min(o.d_max, o.deg_max - 2)),
                                         o.deg_max));
    if (all || o.suite == "string-solution")
        rep.merge(verify_string_solution(string_solution(H, o.t_order)));
    if (o.suite == "kdv") {
        KdvChain chain = kdv_chain(o.depth);
        LocalFunctional zero{DiffPoly(1)};
        for (std::size_t i = 0; i < chain.hams.size(); ++i)
            for (std::size_t j = i; j < chain.hams.size(); ++j) {
                CheckResult c;
                c.name = "chain commutator h" + std::to_string(i) + " ~ h" + std::to_string(j);
                c.pass = lf_equal(bracket(chain.hams[i], chain.hams[j], chain.k1), zero);
                rep.add(std::move(c));
            }
        if (o.cohft == "trivial") {
            Truncation t13 = t;
            t13.genus_max = 1;
            Hierarchy Ht = build_hierarchy(*oracle, t13, {{1, 0}, {1, 1}}, false, false);
            CheckResult c0;
            c0.name = "h0 matches g[1,0]";
            c0.window = t13;
            c0.pass = lf_equal(chain.hams[0], Ht.hams.at({1, 0}).h);
            rep.add(std::move(c0));
            CheckResult c1;
            c1.name = "h1 matches g[1,1]";
            c1.window = t13;
            c1.pass = lf_equal(chain.hams[1], Ht.hams.at({1, 1}).h);
            rep.add(std::move(c1));
            for (std::size_t dd = 0; dd < chain.hams.size(); ++dd) {
                CheckResult c;
                c.name = "g[1,1] ~ h" + std::to_string(dd);
                c.pass = lf_equal(bracket(Ht.hams.at({1, 1}).h, chain.hams[dd], chain.k1), zero);
                rep.add(std::move(c));
            }
        }
    }

    std::ostringstream os;
    if (o.format == "json") {
        os << to_json(rep).dump(1);
    } else {
        rep.print(os);
    }
    emit(o, os.str());
    return rep.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"drh: exact workbench for hamiltonian hierarchies from intersection data"};
    app.require_subcommand(1);

    Options o;
    int alpha2 = 1, d2 = 0;

    auto add_common = [&](CLI::App* cmd, bool with_target) {
        cmd->add_option("--cohft", o.cohft, "theory selector: trivial | hodge | table=PATH");
        cmd->add_option("--genus-max,-G", o.genus_max, "hbar (genus) cap");
        cmd->add_option("--deg-max,-D", o.deg_max, "monomial arity cap");
        cmd->add_option("--eps-max,-E", o.eps_max, "eps cap (-1 = unlimited)");
        cmd->add_option("--format", o.format, "plain | latex | json")
            ->check(CLI::IsMember({"plain", "latex", "json"}));
        cmd->add_option("--out", o.out, "write output to a file instead of stdout");
        if (with_target) {
            cmd->add_option("--alpha", o.alpha, "color index of the Hamiltonian");
            cmd->add_option("--d", o.d, "descendant index of the Hamiltonian");
        }
    };

    auto* ham = app.add_subcommand("hamiltonian", "assemble and print a Hamiltonian");
    add_common(ham, true);
    ham->add_flag("--modes", o.modes, "print the mode-space generating series instead");
    auto* flow = app.add_subcommand("flow", "print the evolution equations of a Hamiltonian");
    add_common(flow, true);
    auto* gbar = app.add_subcommand("gbar", "assemble and print the total functional");
    add_common(gbar, false);
    auto* br = app.add_subcommand("bracket", "bracket of two Hamiltonians");
    add_common(br, true);
    br->add_option("--alpha2", alpha2, "color index of the second Hamiltonian");
    br->add_option("--d2", d2, "descendant index of the second Hamiltonian");
    auto* verify = app.add_subcommand("verify", "run verification suites and report");
    add_common(verify, false);
    verify->add_option("--suite", o.suite,
                       "all | commutativity | string | dilaton | first-derivative | genus0 | "
                       "string-solution | kdv")
        ->check(CLI::IsMember({"all", "commutativity", "string", "dilaton", "first-derivative",
                               "genus0", "string-solution", "kdv"}));
    verify->add_option("--pairs", o.pairs,
                       "Hamiltonian list \"a,d;a,d;...\" (default: all d <= d-max)");
    verify->add_option("--d-max", o.d_max, "largest descendant index to build");
    verify->add_option("--depth", o.depth, "chain depth for the kdv suite");
    verify->add_option("--t-order", o.t_order, "Taylor order for the string solution");
    auto* kdv = app.add_subcommand("kdv", "print the bihamiltonian reference chain");
    add_common(kdv, false);
    kdv->add_option("--depth", o.depth, "chain depth");
    auto* ssol = app.add_subcommand("string-solution", "Taylor solution with string initial datum");
    add_common(ssol, false);
    ssol->add_option("--t-order", o.t_order, "Taylor order");
    ssol->add_option("--d-max", o.d_max, "largest descendant index to build");
    ssol->add_option("--pairs", o.pairs, "Hamiltonian list \"a,d;a,d;...\"");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(ham)) return run_hamiltonian(o);
        if (app.got_subcommand(flow)) return run_flow(o);
        if (app.got_subcommand(gbar)) return run_gbar(o);
        if (app.got_subcommand(br)) return run_bracket(o, alpha2, d2);
        if (app.got_subcommand(verify)) return run_verify(o);
        if (app.got_subcommand(kdv)) return run_kdv(o);
        if (app.got_subcommand(ssol)) return run_string_solution(o);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MissingOracleData& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
