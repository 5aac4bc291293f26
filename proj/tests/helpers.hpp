#ifndef DRH_TESTS_HELPERS_HPP
#define DRH_TESTS_HELPERS_HPP

#include "drh/cohft.hpp"
#include "drh/diffpoly.hpp"
#include "drh/fourier.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <functional>
#include <random>
#include <vector>

namespace drh::testing {

// fixed seed so every property run is reproducible
inline constexpr std::uint32_t kSeed = 20140817;

struct RandomSpec {
    int dim = 1;
    int max_terms = 5;
    int max_arity = 4;
    int max_order = 3;
    int max_hpow = 2;
    int max_epow = 0;
    int coeff_range = 3; // coefficients uniform in {-range..range}
};

inline DiffPoly random_diffpoly(std::mt19937& rng, const RandomSpec& spec) {
    std::uniform_int_distribution<int> nterms(1, spec.max_terms);
    std::uniform_int_distribution<int> arity(0, spec.max_arity);
    std::uniform_int_distribution<int> color(1, spec.dim);
    std::uniform_int_distribution<int> order(0, spec.max_order);
    std::uniform_int_distribution<int> hpow(0, spec.max_hpow);
    std::uniform_int_distribution<int> epow(0, spec.max_epow);
    std::uniform_int_distribution<int> coeff(-spec.coeff_range, spec.coeff_range);
    DiffPoly f(spec.dim);
    int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
        Mono m;
        m.hpow = hpow(rng);
        m.epow = epow(rng);
        int a = arity(rng);
        for (int j = 0; j < a; ++j) {
            Mono one;
            one.jets.push_back({JetVar{color(rng), order(rng)}, 1});
            m = m.times(one);
        }
        int c = coeff(rng);
        if (c == 0) c = 1;
        f.add_term(m, Scalar(c));
    }
    return f;
}

// random density with no constant and no linear part (unique t0 preimages)
inline DiffPoly random_density_no_linear(std::mt19937& rng, RandomSpec spec) {
    DiffPoly f = random_diffpoly(rng, spec);
    DiffPoly g(spec.dim);
    for (const auto& [m, c] : f.terms())
        if (m.arity() >= 2) g.add_term(m, c);
    if (g.is_zero()) {
        Mono m;
        m.jets.push_back({JetVar{1, 0}, 2});
        g.add_term(m, Scalar(1));
    }
    return g;
}

inline BSeries random_bseries(std::mt19937& rng, int dim, int max_blocks = 4, int max_arity = 4,
                              int max_expo = 3, int max_hpow = 2) {
    std::uniform_int_distribution<int> nblocks(1, max_blocks);
    std::uniform_int_distribution<int> arity(2, max_arity);
    std::uniform_int_distribution<int> color(1, dim);
    std::uniform_int_distribution<int> expo(0, max_expo);
    std::uniform_int_distribution<int> hpow(0, max_hpow);
    std::uniform_int_distribution<int> coeff(-3, 3);
    BSeries b(dim);
    int n = nblocks(rng);
    for (int t = 0; t < n; ++t) {
        BKey k;
        k.hpow = hpow(rng);
        int a = arity(rng);
        for (int j = 0; j < a; ++j) k.factors.push_back({color(rng), expo(rng)});
        int c = coeff(rng);
        if (c == 0) c = 2;
        b.add_term(std::move(k), Scalar(c));
    }
    return b;
}

// independent genus-0 correlator oracle: the string-equation recursion
// <tau_0 tau_{d_1}..> = sum_j <tau_{d_j - 1} ..> with base <tau_0^3> = 1
inline Rational genus0_string_recursion(std::vector<int> d) {
    const int m = static_cast<int>(d.size());
    if (m < 3) throw std::invalid_argument("need at least three points");
    long sum = 0;
    for (int v : d) sum += v;
    if (sum != m - 3) return Rational(0);
    if (m == 3) return Rational(1); // only <tau_0^3> survives the dimension count
    // at least one entry vanishes; remove it and apply the recursion
    auto z = std::find(d.begin(), d.end(), 0);
    d.erase(z);
    Rational acc(0);
    for (std::size_t j = 0; j < d.size(); ++j) {
        if (d[j] == 0) continue;
        std::vector<int> next = d;
        next[j] -= 1;
        acc += genus0_string_recursion(next);
    }
    return acc;
}

// brute-force x-derivative: expand every monomial into single letters and
// apply the product rule position by position
inline DiffPoly naive_dx(const DiffPoly& f) {
    DiffPoly out(f.dim());
    for (const auto& [m, c] : f.terms()) {
        std::vector<JetVar> letters;
        for (const auto& jf : m.jets)
            for (int p = 0; p < jf.power; ++p) letters.push_back(jf.var);
        for (std::size_t i = 0; i < letters.size(); ++i) {
            Mono n;
            n.hpow = m.hpow;
            n.epow = m.epow;
            for (std::size_t j = 0; j < letters.size(); ++j) {
                Mono one;
                JetVar v = letters[j];
                if (j == i) v.order += 1;
                one.jets.push_back({v, 1});
                n = n.times(one);
            }
            out.add_term(n, c);
        }
    }
    return out;
}

inline LocalFunctional lf(DiffPoly f) { return LocalFunctional(std::move(f)); }

// serialize a window of oracle values into the table document format
inline std::string dump_table(const Oracle& oracle, int g_max, int n_max, int d_max) {
    nlohmann::ordered_json doc;
    doc["dimension"] = oracle.spec().dim;
    nlohmann::ordered_json metric = nlohmann::ordered_json::array();
    for (const auto& row : oracle.spec().eta) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (const auto& v : row) r.push_back(rat_str(v));
        metric.push_back(r);
    }
    doc["metric"] = metric;
    doc["unit"] = oracle.spec().unit;
    doc["name"] = oracle.spec().name + "-dump";
    auto entries = nlohmann::ordered_json::array();
    const int N = oracle.spec().dim;
    for (int g = 0; g <= g_max; ++g) {
        for (int n = 2; n <= n_max; ++n) {
            std::vector<int> colors(static_cast<std::size_t>(n), 1);
            std::function<void(int, int)> rec = [&](int pos, int lo) {
                if (pos == n) {
                    for (int alpha = 1; alpha <= N; ++alpha) {
                        for (int d = 0; d <= d_max; ++d) {
                            auto p = oracle.dr_poly(g, d, alpha, colors);
                            if (!p) continue;
                            nlohmann::ordered_json e;
                            e["g"] = g;
                            e["d"] = d;
                            e["alpha"] = alpha;
                            e["insertions"] = colors;
                            auto poly = nlohmann::ordered_json::array();
                            for (const auto& [m, c] : *p) {
                                nlohmann::ordered_json t;
                                t["coeff"] = rat_str(c);
                                if (m.epow) t["e"] = m.epow;
                                t["exps"] = m.exps;
                                poly.push_back(t);
                            }
                            e["poly"] = poly;
                            entries.push_back(e);
                        }
                    }
                    return;
                }
                for (int c = lo; c <= N; ++c) {
                    colors[static_cast<std::size_t>(pos)] = c;
                    rec(pos + 1, c);
                }
            };
            rec(0, 1);
        }
    }
    doc["entries"] = entries;
    return doc.dump(1);
}

// compact builder: mono(dim, {{color,order,power},...}, h, e)
inline DiffPoly mono(int dim, std::vector<std::array<int, 3>> jets, long num = 1, long den = 1,
                     int hpow = 0, int epow = 0) {
    DiffPoly f(dim);
    Mono m;
    m.hpow = hpow;
    m.epow = epow;
    for (const auto& j : jets) {
        Mono one;
        one.jets.push_back({JetVar{j[0], j[1]}, j[2]});
        m = m.times(one);
    }
    f.add_term(m, Scalar(rat(num, den)));
    return f;
}

} // namespace drh::testing

#endif
