#include "drh/hierarchy.hpp"

#include "drh/render.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <sstream>

namespace drh {

bool Report::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void Report::merge(const Report& o) {
    checks.insert(checks.end(), o.checks.begin(), o.checks.end());
}

void Report::print(std::ostream& os) const {
    for (const auto& c : checks) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  (" << c.window.str() << ")";
        if (!c.pass && !c.witness.empty()) os << "  witness: " << c.witness;
        os << "\n";
    }
}

// ------------------------------------------------------------- assembly

namespace {

void for_each_multiset(int n_colors, int size, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> mu(static_cast<std::size_t>(size), 1);
    std::function<void(int, int)> rec = [&](int pos, int lo) {
        if (pos == size) {
            fn(mu);
            return;
        }
        for (int c = lo; c <= n_colors; ++c) {
            mu[static_cast<std::size_t>(pos)] = c;
            rec(pos + 1, c);
        }
    };
    rec(0, 1);
}

Rational multiset_symmetry_factor(const std::vector<int>& mu) {
    Rational f(1);
    int run = 1;
    for (std::size_t i = 1; i <= mu.size(); ++i) {
        if (i < mu.size() && mu[i] == mu[i - 1]) {
            ++run;
        } else {
            f *= factorial(run);
            run = 1;
        }
    }
    return f;
}

void require_finite(const Truncation& t) {
    if (t.genus_max == Truncation::unlimited || t.deg_max == Truncation::unlimited)
        throw std::invalid_argument("hierarchy assembly needs finite genus and degree caps");
}

std::string ham_name(int alpha, int d) {
    return "g[" + std::to_string(alpha) + "," + std::to_string(d) + "]";
}

} // namespace

BSeries g_series(const Oracle& oracle, int alpha, int d, const Truncation& trunc) {
    require_finite(trunc);
    const int N = oracle.spec().dim;
    BSeries out(N);
    std::vector<std::string> missing;
    TruncationScope scope(trunc);
    for (int g = 0; g <= trunc.genus_max; ++g) {
        for (int n = 2; n <= trunc.deg_max; ++n) {
            for_each_multiset(N, n, [&](const std::vector<int>& mu) {
                auto p = oracle.dr_poly(g, d, alpha, mu);
                if (!p) {
                    missing.push_back(DrKey{g, d, alpha, mu}.str());
                    return;
                }
                Rational base = (g % 2 ? Rational(-1) : Rational(1)) / multiset_symmetry_factor(mu);
                for (const auto& [mono, c] : *p) {
                    BKey key;
                    key.hpow = g;
                    key.epow = mono.epow;
                    for (std::size_t i = 0; i < mu.size(); ++i)
                        key.factors.push_back({mu[i], mono.exps[i]});
                    out.add_term(std::move(key), Scalar(c * base));
                }
            });
        }
    }
    if (!missing.empty()) throw MissingOracleData(std::move(missing));
    return out;
}

LocalFunctional hamiltonian(const Oracle& oracle, int alpha, int d, const Truncation& trunc) {
    TruncationScope scope(trunc);
    LocalFunctional h = q_inverse(g_series(oracle, alpha, d, trunc));
    if (!is_real(h.density))
        throw std::logic_error("hamiltonian has a nonzero imaginary part (internal error)");
    if (!has_lambda_degree(h.density, 0))
        throw std::logic_error("hamiltonian violates the degree-zero grading (internal error)");
    return h;
}

LocalFunctional g_total(const Oracle& oracle, const Truncation& trunc) {
    require_finite(trunc);
    const int N = oracle.spec().dim;
    const int unit = oracle.spec().unit;
    BSeries series(N);
    std::vector<std::string> missing;
    TruncationScope scope(trunc);
    for (int g = 0; g <= trunc.genus_max; ++g) {
        for (int n = 2; n <= trunc.deg_max; ++n) {
            if (2 * g - 2 + n <= 0) continue;
            for_each_multiset(N, n, [&](const std::vector<int>& mu) {
                auto p = oracle.dr_poly(g, 1, unit, mu);
                if (!p) {
                    missing.push_back(DrKey{g, 1, unit, mu}.str() + " (for the unpointed value)");
                    return;
                }
                Rational base = (g % 2 ? Rational(-1) : Rational(1)) / multiset_symmetry_factor(mu);
                base /= Rational(2 * g - 2 + n);
                for (const auto& [mono, c] : *p) {
                    BKey key;
                    key.hpow = g;
                    key.epow = mono.epow;
                    for (std::size_t i = 0; i < mu.size(); ++i)
                        key.factors.push_back({mu[i], mono.exps[i]});
                    series.add_term(std::move(key), Scalar(c * base));
                }
            });
        }
    }
    if (!missing.empty()) throw MissingOracleData(std::move(missing));
    LocalFunctional h = q_inverse(series);
    if (!is_real(h.density))
        throw std::logic_error("total functional has a nonzero imaginary part (internal error)");
    return h;
}

int max_complete_genus(const Oracle& oracle, int alpha, int d, const Truncation& trunc) {
    require_finite(trunc);
    const int N = oracle.spec().dim;
    for (int g = 0; g <= trunc.genus_max; ++g) {
        bool complete = true;
        for (int n = 2; n <= trunc.deg_max && complete; ++n)
            for_each_multiset(N, n, [&](const std::vector<int>& mu) {
                if (complete && !oracle.dr_poly(g, d, alpha, mu)) complete = false;
            });
        if (!complete) return g - 1;
    }
    return trunc.genus_max;
}

int max_complete_genus_gbar(const Oracle& oracle, const Truncation& trunc) {
    require_finite(trunc);
    const int N = oracle.spec().dim;
    const int unit = oracle.spec().unit;
    for (int g = 0; g <= trunc.genus_max; ++g) {
        bool complete = true;
        for (int n = 2; n <= trunc.deg_max && complete; ++n) {
            if (2 * g - 2 + n <= 0) continue;
            for_each_multiset(N, n, [&](const std::vector<int>& mu) {
                if (complete && !oracle.dr_poly(g, 1, unit, mu)) complete = false;
            });
        }
        if (!complete) return g - 1;
    }
    return trunc.genus_max;
}

Hierarchy build_hierarchy(const Oracle& oracle, const Truncation& trunc,
                          const std::vector<std::pair<int, int>>& targets, bool with_gbar,
                          bool auto_genus_window) {
    Hierarchy H;
    H.spec = oracle.spec();
    H.trunc = trunc;
    H.K = make_eta_dx(invert_matrix(oracle.spec().eta));
    for (const auto& [alpha, d] : targets) {
        Truncation t = trunc;
        if (auto_genus_window)
            t.genus_max = std::max(0, max_complete_genus(oracle, alpha, d, trunc));
        H.hams[{alpha, d}] = BuiltHam{hamiltonian(oracle, alpha, d, t), t};
    }
    if (with_gbar) {
        Truncation t = trunc;
        if (auto_genus_window)
            t.genus_max = std::max(0, max_complete_genus_gbar(oracle, trunc));
        H.gbar = BuiltHam{g_total(oracle, t), t};
    }
    return H;
}

std::vector<DiffPoly> dr_flow(const Hierarchy& h, int alpha, int d) {
    auto it = h.hams.find({alpha, d});
    if (it == h.hams.end())
        throw std::invalid_argument("flow requested for a Hamiltonian that was not built");
    TruncationScope scope(it->second.window);
    return flows(it->second.h, h.K);
}

EvolutionSystem hierarchy_system(const Hierarchy& h) {
    EvolutionSystem sys;
    sys.dim = h.spec.dim;
    for (const auto& [key, built] : h.hams) sys.rhs[key] = dr_flow(h, key.first, key.second);
    return sys;
}

// ------------------------------------------------------------- verifiers

static std::string nonzero_witness(const LocalFunctional& f) {
    for (int color = 1; color <= f.dim(); ++color) {
        DiffPoly v = var_derivative(f, color);
        if (!v.is_zero()) {
            auto it = v.terms().begin();
            DiffPoly w(f.dim());
            w.add_term(it->first, it->second);
            return "delta/delta u^" + std::to_string(color) + " contains " + to_plain(w);
        }
    }
    DiffPoly c0 = arity0_part(f.density);
    if (!c0.is_zero()) return "constant part " + to_plain(c0);
    return "";
}

Report verify_commutativity(
    const Hierarchy& h,
    const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>& pairs) {
    Report rep;
    for (const auto& [ka, kb] : pairs) {
        const BuiltHam& A = h.hams.at(ka);
        const BuiltHam& B = h.hams.at(kb);
        Truncation window = A.window.min_with(B.window);
        if (window.deg_max != Truncation::unlimited) window.deg_max -= 1; // one u feeds the bracket
        LocalFunctional br;
        {
            TruncationScope scope(window);
            br = bracket(A.h, B.h, h.K);
        }
        bool graded = has_lambda_degree(br.density, 1);
        bool zero = lf_equal(br, LocalFunctional(DiffPoly(h.spec.dim)));
        CheckResult c;
        c.name = "commutator " + ham_name(ka.first, ka.second) + " ~ " +
                 ham_name(kb.first, kb.second);
        c.window = window;
        c.pass = graded && zero;
        if (!zero)
            c.witness = nonzero_witness(br);
        else if (!graded)
            c.witness = "bracket leaves the expected degree-one grading";
        rep.add(std::move(c));
    }
    return rep;
}

Report verify_commutativity_all(const Hierarchy& h) {
    std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>> pairs;
    for (auto ia = h.hams.begin(); ia != h.hams.end(); ++ia)
        for (auto ib = ia; ib != h.hams.end(); ++ib) pairs.push_back({ia->first, ib->first});
    return verify_commutativity(h, pairs);
}

Report verify_string(const Hierarchy& h) {
    Report rep;
    const int unit = h.spec.unit;
    for (const auto& [key, built] : h.hams) {
        auto [alpha, d] = key;
        Truncation window = built.window;
        LocalFunctional rhs(DiffPoly(h.spec.dim));
        if (d == 0) {
            DiffPoly density(h.spec.dim);
            for (int mu = 1; mu <= h.spec.dim; ++mu) {
                DiffPoly term = DiffPoly::jet(h.spec.dim, mu, 0);
                term.scale(Scalar(h.spec.eta[static_cast<std::size_t>(alpha - 1)]
                                            [static_cast<std::size_t>(mu - 1)]));
                density += term;
            }
            rhs = LocalFunctional(std::move(density));
        } else {
            auto prev = h.hams.find({alpha, d - 1});
            if (prev == h.hams.end()) continue; // nothing to compare against
            window = window.min_with(prev->second.window);
            rhs = prev->second.h;
        }
        if (window.deg_max != Truncation::unlimited) window.deg_max -= 1; // d/du^1 removes one u
        LocalFunctional lhs = lf_partial_u(built.h, unit);
        LocalFunctional diff = truncate(lhs, window) - truncate(rhs, window);
        CheckResult c;
        c.name = "string d/du^1 " + ham_name(alpha, d);
        c.window = window;
        c.pass = lf_equal(diff, LocalFunctional(DiffPoly(h.spec.dim)));
        if (!c.pass) c.witness = nonzero_witness(diff);
        rep.add(std::move(c));
    }
    return rep;
}

LocalFunctional dilaton_apply(const LocalFunctional& h) {
    DiffPoly out(h.dim());
    for (const auto& [m, c] : h.density.terms())
        out.add_term(m, c * Scalar(2 * m.hpow - 2 + m.arity()));
    return LocalFunctional(std::move(out));
}

Report verify_dilaton(const Hierarchy& h) {
    Report rep;
    CheckResult c;
    c.name = "dilaton O(gbar) = " + ham_name(h.spec.unit, 1);
    auto it = h.hams.find({h.spec.unit, 1});
    if (!h.gbar || it == h.hams.end()) {
        c.pass = false;
        c.witness = "needs gbar and the (unit,1) Hamiltonian";
        rep.add(std::move(c));
        return rep;
    }
    Truncation window = h.gbar->window.min_with(it->second.window);
    c.window = window;
    LocalFunctional diff =
        truncate(dilaton_apply(h.gbar->h), window) - truncate(it->second.h, window);
    c.pass = lf_equal(diff, LocalFunctional(DiffPoly(h.spec.dim)));
    if (!c.pass) c.witness = nonzero_witness(diff);
    rep.add(std::move(c));
    return rep;
}

Report verify_first_derivative(const Hierarchy& h) {
    Report rep;
    for (int alpha = 1; alpha <= h.spec.dim; ++alpha) {
        auto it = h.hams.find({alpha, 0});
        if (!h.gbar || it == h.hams.end()) continue;
        Truncation window = h.gbar->window.min_with(it->second.window);
        if (window.deg_max != Truncation::unlimited) window.deg_max -= 1;
        LocalFunctional diff = truncate(lf_partial_u(h.gbar->h, alpha), window) -
                               truncate(it->second.h, window);
        CheckResult c;
        c.name = "d/du^" + std::to_string(alpha) + " gbar = " + ham_name(alpha, 0);
        c.window = window;
        c.pass = lf_equal(diff, LocalFunctional(DiffPoly(h.spec.dim)));
        if (!c.pass) c.witness = nonzero_witness(diff);
        rep.add(std::move(c));
    }
    return rep;
}

DiffPoly omega_genus0(const Oracle& oracle, int alpha, int d, int deg_max) {
    if (deg_max == Truncation::unlimited)
        throw std::invalid_argument("omega_genus0 needs a finite degree cap");
    const int N = oracle.spec().dim;
    DiffPoly out(N);
    std::vector<std::string> missing;
    for (int n = 2; n <= deg_max; ++n) {
        for_each_multiset(N, n, [&](const std::vector<int>& mu) {
            auto p = oracle.dr_poly(0, d, alpha, mu);
            if (!p) {
                missing.push_back(DrKey{0, d, alpha, mu}.str());
                return;
            }
            Rational sym = multiset_symmetry_factor(mu);
            for (const auto& [mono, c] : *p) { // genus-0 monomials are constant in the a_i
                Mono m;
                m.epow = mono.epow;
                for (int col : mu) {
                    Mono one;
                    one.jets.push_back({JetVar{col, 0}, 1});
                    m = m.times(one);
                }
                out.add_term(m, Scalar(c / sym));
            }
        });
    }
    if (!missing.empty()) throw MissingOracleData(std::move(missing));
    return out;
}

Report verify_genus0_identity(const Oracle& oracle, int alpha, int d_max, int deg_max) {
    Report rep;
    for (int d = 0; d <= d_max; ++d) {
        Truncation window{0, deg_max, Truncation::unlimited};
        LocalFunctional omega(omega_genus0(oracle, alpha, d, deg_max));
        LocalFunctional ham = hamiltonian(oracle, alpha, d, window);
        LocalFunctional diff = omega - ham; // genus-0 window: ham has no hbar terms
        CheckResult c;
        c.name = "genus-0 one-point series = " + ham_name(alpha, d) + "|_{h=0}";
        c.window = window;
        c.pass = lf_equal(diff, LocalFunctional(DiffPoly(oracle.spec().dim)));
        if (!c.pass) c.witness = nonzero_witness(diff);
        rep.add(std::move(c));
    }
    return rep;
}

// ------------------------------------------------------------- string solution

int XtKey::tdeg() const {
    int s = 0;
    for (const auto& [idx, p] : tpow) s += p;
    return s;
}

namespace {

struct XtCaps {
    int tdeg_max;
    int x_cap;
    Truncation trunc;
};

void xt_add(XtPoly& p, const XtKey& k, const Rational& v, const XtCaps& caps) {
    if (v == 0) return;
    if (k.xpow > caps.x_cap)
        throw std::runtime_error("string solution: x-degree cap exceeded");
    if (k.hpow > caps.trunc.genus_max || k.epow > caps.trunc.eps_max) return;
    if (k.tdeg() > caps.tdeg_max) return;
    auto it = p.find(k);
    if (it == p.end())
        p.emplace(k, v);
    else {
        it->second += v;
        if (it->second == 0) p.erase(it);
    }
}

XtKey xt_key_mul(const XtKey& a, const XtKey& b) {
    XtKey r;
    r.xpow = a.xpow + b.xpow;
    r.hpow = a.hpow + b.hpow;
    r.epow = a.epow + b.epow;
    auto ia = a.tpow.begin(), ib = b.tpow.begin();
    while (ia != a.tpow.end() && ib != b.tpow.end()) {
        if (ia->first == ib->first) {
            r.tpow.emplace_back(ia->first, ia->second + ib->second);
            ++ia; ++ib;
        } else if (ia->first < ib->first) {
            r.tpow.push_back(*ia++);
        } else {
            r.tpow.push_back(*ib++);
        }
    }
    r.tpow.insert(r.tpow.end(), ia, a.tpow.end());
    r.tpow.insert(r.tpow.end(), ib, b.tpow.end());
    return r;
}

XtPoly xt_mul(const XtPoly& a, const XtPoly& b, const XtCaps& caps) {
    XtPoly r;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) xt_add(r, xt_key_mul(ka, kb), va * vb, caps);
    return r;
}

XtPoly xt_dx(const XtPoly& a) {
    XtPoly r;
    for (const auto& [k, v] : a) {
        if (k.xpow == 0) continue;
        XtKey nk = k;
        nk.xpow -= 1;
        r[nk] = v * k.xpow;
    }
    return r;
}

XtPoly xt_tderiv(const XtPoly& a, int tidx) {
    XtPoly r;
    for (const auto& [k, v] : a) {
        for (std::size_t i = 0; i < k.tpow.size(); ++i) {
            if (k.tpow[i].first != tidx) continue;
            XtKey nk = k;
            Rational nv = v * k.tpow[i].second;
            if (nk.tpow[i].second > 1)
                nk.tpow[i].second -= 1;
            else
                nk.tpow.erase(nk.tpow.begin() + static_cast<long>(i));
            r[nk] += nv;
            if (r[nk] == 0) r.erase(nk);
            break;
        }
    }
    return r;
}

XtPoly xt_times_t(const XtPoly& a, int tidx, const XtCaps& caps) {
    XtPoly r;
    XtKey t;
    t.tpow.emplace_back(tidx, 1);
    for (const auto& [k, v] : a) xt_add(r, xt_key_mul(k, t), v, caps);
    return r;
}

// substitute the jet variables of f by x-derivatives of the current solution
XtPoly xt_eval(const DiffPoly& f, const std::vector<XtPoly>& comps, const XtCaps& caps,
               std::map<std::pair<int, int>, XtPoly>& dx_cache) {
    std::function<const XtPoly&(int, int)> jet_of = [&](int color, int order) -> const XtPoly& {
        auto key = std::make_pair(color, order);
        auto it = dx_cache.find(key);
        if (it != dx_cache.end()) return it->second;
        if (order == 0)
            return dx_cache.emplace(key, comps[static_cast<std::size_t>(color - 1)]).first->second;
        XtPoly d = xt_dx(jet_of(color, order - 1));
        return dx_cache.emplace(key, std::move(d)).first->second;
    };
    XtPoly out;
    for (const auto& [m, c] : f.terms()) {
        if (!c.is_real())
            throw std::logic_error("string solution: flow with imaginary coefficient");
        XtPoly acc;
        XtKey base;
        base.hpow = m.hpow;
        base.epow = m.epow;
        acc.emplace(base, c.re);
        for (const auto& jf : m.jets)
            for (int p = 0; p < jf.power; ++p)
                acc = xt_mul(acc, jet_of(jf.var.color, jf.var.order), caps);
        for (const auto& [k, v] : acc) xt_add(out, k, v, caps);
    }
    return out;
}

} // namespace

TaylorSolution string_solution(const Hierarchy& h, int t_order, int x_degree_cap) {
    TaylorSolution sol;
    sol.dim = h.spec.dim;
    sol.unit = h.spec.unit;
    sol.t_order = t_order;
    sol.trunc = h.trunc;
    for (const auto& [key, built] : h.hams) sol.times.push_back(TimeVar{key.first, key.second});
    std::sort(sol.times.begin(), sol.times.end());

    std::vector<std::vector<DiffPoly>> flow_rhs;
    for (const auto& tv : sol.times) flow_rhs.push_back(dr_flow(h, tv.color, tv.d));

    sol.comps.assign(static_cast<std::size_t>(sol.dim), XtPoly{});
    XtKey x1;
    x1.xpow = 1;
    sol.comps[static_cast<std::size_t>(sol.unit - 1)].emplace(x1, Rational(1));

    for (int order = 1; order <= t_order; ++order) {
        XtCaps caps{order - 1, x_degree_cap, h.trunc};
        // route tau: coefficient candidates keyed by the full monomial
        std::vector<std::map<XtKey, Rational>> cand(
            static_cast<std::size_t>(sol.dim) * sol.times.size());
        for (std::size_t ti = 0; ti < sol.times.size(); ++ti) {
            std::map<std::pair<int, int>, XtPoly> dx_cache;
            for (int color = 1; color <= sol.dim; ++color) {
                XtPoly g = xt_eval(flow_rhs[ti][static_cast<std::size_t>(color - 1)], sol.comps,
                                   caps, dx_cache);
                auto& slot = cand[static_cast<std::size_t>(color - 1) * sol.times.size() + ti];
                for (const auto& [k, v] : g) {
                    if (k.tdeg() != order - 1) continue;
                    XtKey nk = k;
                    int mult = 1;
                    bool placed = false;
                    for (auto& [idx, p] : nk.tpow)
                        if (idx == static_cast<int>(ti)) {
                            p += 1;
                            mult = p;
                            placed = true;
                            break;
                        }
                    if (!placed) {
                        nk.tpow.emplace_back(static_cast<int>(ti), 1);
                        std::sort(nk.tpow.begin(), nk.tpow.end());
                    }
                    slot[nk] += v / mult;
                }
            }
        }
        for (int color = 1; color <= sol.dim; ++color) {
            std::map<XtKey, std::map<std::size_t, Rational>> by_route;
            for (std::size_t ti = 0; ti < sol.times.size(); ++ti)
                for (const auto& [k, v] :
                     cand[static_cast<std::size_t>(color - 1) * sol.times.size() + ti])
                    by_route[k][ti] = v;
            for (const auto& [k, routes] : by_route) {
                std::optional<Rational> ref;
                for (const auto& [idx, p] : k.tpow) {
                    auto it = routes.find(static_cast<std::size_t>(idx));
                    Rational v = (it == routes.end()) ? Rational(0) : it->second;
                    if (!ref) {
                        ref = v;
                    } else if (*ref != v) {
                        throw std::runtime_error(
                            "string solution: mixed t-derivatives disagree at order " +
                            std::to_string(order));
                    }
                }
                if (ref && *ref != 0)
                    sol.comps[static_cast<std::size_t>(color - 1)].emplace(k, *ref);
            }
        }
    }
    return sol;
}

Report verify_string_solution(const TaylorSolution& sol) {
    Report rep;
    int string_idx = -1;
    for (std::size_t i = 0; i < sol.times.size(); ++i)
        if (sol.times[i].color == sol.unit && sol.times[i].d == 0)
            string_idx = static_cast<int>(i);
    XtCaps caps{sol.t_order - 1, Truncation::unlimited, sol.trunc};
    for (int color = 1; color <= sol.dim; ++color) {
        CheckResult c;
        c.name = "string identity for u^" + std::to_string(color);
        c.window = sol.trunc;
        if (string_idx < 0) {
            c.pass = false;
            c.witness = "the (unit,0) time was not retained";
            rep.add(std::move(c));
            continue;
        }
        const XtPoly& u = sol.comps[static_cast<std::size_t>(color - 1)];
        XtPoly defect = xt_tderiv(u, string_idx);
        for (std::size_t ti = 0; ti < sol.times.size(); ++ti) {
            const TimeVar& tv = sol.times[ti];
            if (tv.d == 0) continue;
            int lower = -1;
            for (std::size_t tj = 0; tj < sol.times.size(); ++tj)
                if (sol.times[tj].color == tv.color && sol.times[tj].d == tv.d - 1)
                    lower = static_cast<int>(tj);
            if (lower < 0) continue; // the variable never appears in retained monomials
            XtPoly term = xt_times_t(xt_tderiv(u, lower), static_cast<int>(ti), caps);
            for (const auto& [k, v] : term) {
                defect[k] -= v;
                if (defect[k] == 0) defect.erase(k);
            }
        }
        if (color == sol.unit) {
            XtKey one;
            defect[one] -= 1;
            if (defect[one] == 0) defect.erase(one);
        }
        // restrict to the window where all pieces are complete
        for (auto it = defect.begin(); it != defect.end();)
            it = (it->first.tdeg() > sol.t_order - 1) ? defect.erase(it) : std::next(it);
        c.pass = defect.empty();
        if (!c.pass) {
            std::ostringstream os;
            os << defect.size() << " nonvanishing coefficient(s)";
            c.witness = os.str();
        }
        rep.add(std::move(c));
    }
    return rep;
}

std::string to_plain(const TaylorSolution& sol) {
    std::ostringstream os;
    for (int color = 1; color <= sol.dim; ++color) {
        os << "u";
        if (sol.dim > 1) os << color;
        os << " = ";
        const XtPoly& p = sol.comps[static_cast<std::size_t>(color - 1)];
        if (p.empty()) {
            os << "0\n";
            continue;
        }
        bool first = true;
        for (const auto& [k, v] : p) {
            bool neg = v < 0;
            Rational mag = neg ? Rational(-v) : v;
            std::vector<std::string> parts;
            if (k.hpow > 0) parts.push_back(k.hpow == 1 ? "h" : "h^" + std::to_string(k.hpow));
            if (k.epow > 0) parts.push_back(k.epow == 1 ? "e" : "e^" + std::to_string(k.epow));
            if (k.xpow > 0) parts.push_back(k.xpow == 1 ? "x" : "x^" + std::to_string(k.xpow));
            for (const auto& [idx, p2] : k.tpow) {
                const TimeVar& tv = sol.times[static_cast<std::size_t>(idx)];
                std::string s = "t" + std::to_string(tv.color) + "_" + std::to_string(tv.d);
                if (p2 > 1) s += "^" + std::to_string(p2);
                parts.push_back(s);
            }
            std::string mono;
            for (std::size_t i = 0; i < parts.size(); ++i) {
                if (i) mono += "*";
                mono += parts[i];
            }
            std::string body;
            if (mono.empty())
                body = rat_str(mag);
            else if (mag == 1)
                body = mono;
            else
                body = rat_str(mag) + "*" + mono;
            if (first) {
                if (neg) os << "-";
                first = false;
            } else {
                os << (neg ? " - " : " + ");
            }
            os << body;
        }
        os << "\n";
    }
    return os.str();
}

// ------------------------------------------------------------- Miura

std::map<int, DiffPoly> miura_invert(const std::map<int, DiffPoly>& M, const Truncation& trunc) {
    if (trunc.genus_max == Truncation::unlimited)
        throw std::invalid_argument("miura_invert needs a finite genus cap");
    if (M.empty()) throw std::invalid_argument("empty Miura data");
    const int N = M.begin()->second.dim();
    std::map<int, DiffPoly> correction; // M - id, all terms must carry hbar
    for (int color = 1; color <= N; ++color) {
        auto it = M.find(color);
        if (it == M.end()) throw std::invalid_argument("Miura data misses a color");
        DiffPoly r = it->second - DiffPoly::jet(N, color, 0);
        for (const auto& [m, c] : r.terms())
            if (m.hpow == 0)
                throw NonUnitLeading("Miura data is not the identity at leading order");
        correction.emplace(color, std::move(r));
    }
    TruncationScope scope(trunc);
    std::map<int, DiffPoly> W;
    for (int color = 1; color <= N; ++color) W.emplace(color, DiffPoly::jet(N, color, 0));
    for (int it = 0; it <= trunc.genus_max; ++it) {
        std::map<int, DiffPoly> next;
        for (int color = 1; color <= N; ++color)
            next.emplace(color, DiffPoly::jet(N, color, 0) - substitute(correction.at(color), W));
        W = std::move(next);
    }
    for (int color = 1; color <= N; ++color) {
        DiffPoly check = substitute(M.at(color), W) - DiffPoly::jet(N, color, 0);
        if (!check.is_zero())
            throw std::logic_error("miura_invert: fixed point did not close (internal error)");
    }
    return W;
}

EvolutionSystem miura_apply(const EvolutionSystem& sys, const std::map<int, DiffPoly>& M,
                            const Truncation& trunc) {
    auto W = miura_invert(M, trunc);
    TruncationScope scope(trunc);
    EvolutionSystem out;
    out.dim = sys.dim;
    for (const auto& [time, rhs] : sys.rhs) {
        std::vector<DiffPoly> nrhs;
        for (int alpha = 1; alpha <= sys.dim; ++alpha) {
            DiffPoly acc(sys.dim);
            const DiffPoly& img = M.at(alpha);
            for (int gamma = 1; gamma <= sys.dim; ++gamma) {
                int top = max_jet_order(img, gamma);
                for (int n = 0; n <= top; ++n)
                    acc += jet_derivative(img, gamma, n) *
                           dx_pow(rhs[static_cast<std::size_t>(gamma - 1)], n);
            }
            nrhs.push_back(substitute(acc, W));
        }
        out.rhs.emplace(time, std::move(nrhs));
    }
    return out;
}

} // namespace drh
