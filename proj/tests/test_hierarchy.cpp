#include "drh/hierarchy.hpp"

#include "drh/kdv.hpp"
#include "drh/render.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <sstream>

using namespace drh;
using namespace drh::testing;

namespace {

Truncation tr(int g, int d, int e = Truncation::unlimited) {
    Truncation t;
    t.genus_max = g;
    t.deg_max = d;
    t.eps_max = e;
    return t;
}

const LocalFunctional kZero1{DiffPoly(1)};

// the first deformed-KdV Hamiltonian density up to genus gmax:
// u^3/6 + sum_g h^g e^{g-1} |B_2g|/(2 (2g)!) u u_{2g}
DiffPoly hodge_g1_density(int gmax) {
    DiffPoly f = mono(1, {{1, 0, 3}}, 1, 6);
    for (int g = 1; g <= gmax; ++g) {
        Rational c = abs(bernoulli(2 * g)) / (Rational(2) * factorial(2 * g));
        DiffPoly t = mono(1, {{1, 0, 1}, {1, 2 * g, 1}});
        t.scale(Scalar(c));
        t.mul_hbar(g);
        t.mul_eps(g - 1);
        f += t;
    }
    return f;
}

} // namespace

TEST_CASE("g_series assembly") {
    TrivialOracle oracle;
    // quadratic generator: one block of arity 2 and weight 1/2
    BSeries s = g_series(oracle, 1, 0, tr(2, 4));
    BSeries expect(1);
    BKey k;
    k.factors = {{1, 0}, {1, 0}};
    expect.add_term(std::move(k), Scalar(rat(1, 2)));
    CHECK(b_equal(s, expect));

    // next generator at one loop: cubic genus-0 block plus the two-point correction
    BSeries s1 = g_series(oracle, 1, 1, tr(1, 3));
    BSeries e1(1);
    BKey k3;
    k3.factors = {{1, 0}, {1, 0}, {1, 0}};
    e1.add_term(std::move(k3), Scalar(rat(1, 6)));
    BKey k2;
    k2.hpow = 1;
    k2.factors = {{1, 1}, {1, 1}};
    e1.add_term(std::move(k2), Scalar(rat(1, 24))); // -(1/2) * (-a1 a2 /12)
    CHECK(b_equal(s1, e1));

    // a genus cap of zero keeps only dispersionless blocks
    BSeries s0 = g_series(oracle, 1, 1, tr(0, 4));
    for (const auto& [key, c] : s0.terms()) CHECK(key.hpow == 0);
}

TEST_CASE("hamiltonian assembly") {
    TrivialOracle oracle;
    CHECK(hamiltonian(oracle, 1, 0, tr(3, 4)).density == mono(1, {{1, 0, 2}}, 1, 2));

    DiffPoly kdv1 = mono(1, {{1, 0, 3}}, 1, 6) + mono(1, {{1, 0, 1}, {1, 2, 1}}, 1, 24, 1);
    CHECK(hamiltonian(oracle, 1, 1, tr(1, 3)).density == kdv1);

    HodgeOracle hodge;
    CHECK(hamiltonian(hodge, 1, 1, tr(3, 3)).density == hodge_g1_density(3));
}

TEST_CASE("missing oracle data fails loudly with all keys") {
    TrivialOracle oracle;
    try {
        (void)hamiltonian(oracle, 1, 3, tr(2, 4));
        FAIL("expected MissingOracleData");
    } catch (const MissingOracleData& e) {
        REQUIRE(e.keys.size() == 2);
        CHECK(e.keys[0] == "g=1, d=3, alpha=1, insertions=[1,1,1,1]");
        CHECK(e.keys[1] == "g=2, d=3, alpha=1, insertions=[1,1,1]");
    }
}

TEST_CASE("total functional") {
    TrivialOracle oracle;
    CHECK(g_total(oracle, tr(0, 3)).density == mono(1, {{1, 0, 3}}, 1, 6));
    // at degree two only the genus-one two-point term survives
    CHECK(g_total(oracle, tr(1, 2)).density == mono(1, {{1, 0, 1}, {1, 2, 1}}, 1, 48, 1));
    CHECK(g_total(oracle, tr(0, 2)).density.is_zero());
}

TEST_CASE("flows of the hierarchy") {
    TrivialOracle oracle;
    Hierarchy H = build_hierarchy(oracle, tr(1, 3), {{1, 0}, {1, 1}}, false, false);
    CHECK(dr_flow(H, 1, 0)[0] == DiffPoly::jet(1, 1, 1));
    DiffPoly kdv = mono(1, {{1, 0, 1}, {1, 1, 1}}) + mono(1, {{1, 3, 1}}, 1, 12, 1);
    CHECK(dr_flow(H, 1, 1)[0] == kdv);

    HodgeOracle hodge;
    Hierarchy Hh = build_hierarchy(hodge, tr(2, 3), {{1, 1}}, false, false);
    DiffPoly expect = kdv + mono(1, {{1, 5, 1}}, 1, 720, 2, 1);
    CHECK(dr_flow(Hh, 1, 1)[0] == expect);
}

TEST_CASE("commutativity within the sound window") {
    TrivialOracle oracle;
    Hierarchy H = build_hierarchy(oracle, tr(1, 4), {{1, 0}, {1, 1}, {1, 2}, {1, 3}}, false, true);
    // the auto windows: full genus for d <= 1, dispersionless beyond
    CHECK(H.hams.at({1, 0}).window.genus_max == 1);
    CHECK(H.hams.at({1, 1}).window.genus_max == 1);
    CHECK(H.hams.at({1, 2}).window.genus_max == 0);
    CHECK(H.hams.at({1, 3}).window.genus_max == 0);
    Report rep = verify_commutativity_all(H);
    CHECK(rep.checks.size() == 10);
    CHECK(rep.all_pass());
}

TEST_CASE("string identity for the Hamiltonians") {
    TrivialOracle oracle;
    Hierarchy H = build_hierarchy(oracle, tr(1, 4), {{1, 0}, {1, 1}}, false, false);
    Report rep = verify_string(H);
    REQUIRE(rep.checks.size() == 2);
    CHECK(rep.all_pass());

    HodgeOracle hodge;
    Hierarchy Hh = build_hierarchy(hodge, tr(3, 4), {{1, 0}, {1, 1}}, false, false);
    CHECK(verify_string(Hh).all_pass());
}

TEST_CASE("dilaton identity") {
    TrivialOracle oracle;
    Hierarchy H = build_hierarchy(oracle, tr(1, 3), {{1, 1}}, true, false);
    Report rep = verify_dilaton(H);
    CHECK(rep.all_pass());

    // dispersionless arithmetic: O(int u^3/6) = (3-2) int u^3/6
    LocalFunctional g0 = lf(mono(1, {{1, 0, 3}}, 1, 6));
    CHECK(lf_equal(dilaton_apply(g0), g0));
    CHECK(dilaton_apply(kZero1).density.is_zero());

    HodgeOracle hodge;
    Hierarchy Hh = build_hierarchy(hodge, tr(4, 3), {{1, 1}}, true, false);
    CHECK(verify_dilaton(Hh).all_pass());
}

TEST_CASE("derivative identity for the total functional") {
    TrivialOracle oracle;
    Hierarchy H = build_hierarchy(oracle, tr(1, 3), {{1, 0}}, true, false);
    CHECK(verify_first_derivative(H).all_pass());

    HodgeOracle hodge;
    Hierarchy Hh = build_hierarchy(hodge, tr(3, 4), {{1, 0}}, true, false);
    CHECK(verify_first_derivative(Hh).all_pass());

    // degenerate window: both sides vanish at degree 2, genus 0
    Hierarchy Hd = build_hierarchy(oracle, tr(0, 2), {{1, 0}}, true, false);
    CHECK(verify_first_derivative(Hd).all_pass());
}

TEST_CASE("dispersionless one-point series") {
    TrivialOracle oracle;
    for (int d = 0; d <= 4; ++d) {
        DiffPoly omega = omega_genus0(oracle, 1, d, d + 2);
        CHECK(omega == mono(1, {{1, 0, d + 2}}, 1, 1) *
                           DiffPoly::constant(1, Scalar(Rational(1) / factorial(d + 2))));
    }
    CHECK(verify_genus0_identity(oracle, 1, 4, 6).all_pass());
    HodgeOracle hodge;
    CHECK(verify_genus0_identity(hodge, 1, 3, 6).all_pass());
}

TEST_CASE("string solution") {
    TrivialOracle oracle;
    Hierarchy H = build_hierarchy(oracle, tr(1, 3), {{1, 0}, {1, 1}}, false, false);
    TaylorSolution sol = string_solution(H, 3);

    // order zero: u = x
    XtKey x1;
    x1.xpow = 1;
    REQUIRE(sol.comps[0].count(x1));
    CHECK(sol.comps[0].at(x1) == Rational(1));

    // coefficient of t[1,0] is 1, coefficient of t[1,1] is x
    XtKey t0key;
    t0key.tpow = {{0, 1}};
    REQUIRE(sol.comps[0].count(t0key));
    CHECK(sol.comps[0].at(t0key) == Rational(1));
    XtKey t1key;
    t1key.xpow = 1;
    t1key.tpow = {{1, 1}};
    REQUIRE(sol.comps[0].count(t1key));
    CHECK(sol.comps[0].at(t1key) == Rational(1));

    Report rep = verify_string_solution(sol);
    CHECK(rep.all_pass());
}

TEST_CASE("string solution of the Hodge theory degenerates at eps = 0") {
    TrivialOracle triv;
    HodgeOracle hodge;
    Truncation cap = tr(1, 3, 0); // eps cap 0 removes every Hodge correction
    Hierarchy Ht = build_hierarchy(triv, tr(1, 3), {{1, 0}, {1, 1}}, false, false);
    Hierarchy Hh = build_hierarchy(hodge, cap, {{1, 0}, {1, 1}}, false, false);
    TaylorSolution st = string_solution(Ht, 3);
    TaylorSolution sh = string_solution(Hh, 3);
    REQUIRE(st.comps.size() == sh.comps.size());
    CHECK(st.comps[0] == sh.comps[0]);
    CHECK(verify_string_solution(sh).all_pass());
}

TEST_CASE("miura transforms") {
    Truncation t = tr(2, 6);
    // identity leaves a system alone
    EvolutionSystem sys;
    sys.dim = 1;
    sys.rhs[{1, 0}] = {DiffPoly::jet(1, 1, 1)};
    std::map<int, DiffPoly> ident{{1, DiffPoly::jet(1, 1, 0)}};
    EvolutionSystem same = miura_apply(sys, ident, t);
    CHECK(same.rhs.at({1, 0})[0] == DiffPoly::jet(1, 1, 1));

    // u -> u + h u_2 carries u_t = u_x to itself
    std::map<int, DiffPoly> M{{1, DiffPoly::jet(1, 1, 0) + mono(1, {{1, 2, 1}}, 1, 1, 1)}};
    EvolutionSystem moved = miura_apply(sys, M, t);
    CHECK(moved.rhs.at({1, 0})[0] == DiffPoly::jet(1, 1, 1));

    // inversion is an exact fixed point within the truncation
    auto W = miura_invert(M, t);
    DiffPoly check = substitute(M.at(1), W);
    CHECK(truncate(check, t) == DiffPoly::jet(1, 1, 0));

    // leading-order failure is rejected
    std::map<int, DiffPoly> bad{{1, DiffPoly::jet(1, 1, 0) + mono(1, {{1, 2, 1}})}};
    CHECK_THROWS_AS((void)miura_invert(bad, t), NonUnitLeading);

    // the deformed-KdV change of coordinates: u -> u - (1/24) h e u_2 + ...
    HodgeOracle hodge;
    Truncation th = tr(1, 3, 1);
    Hierarchy Hh = build_hierarchy(hodge, th, {{1, 1}}, false, false);
    EvolutionSystem hsys = hierarchy_system(Hh);
    std::map<int, DiffPoly> Mh{{1, DiffPoly::jet(1, 1, 0) +
                                       Scalar(rat(-1, 24)) * [&] {
                                           DiffPoly f = mono(1, {{1, 2, 1}});
                                           f.mul_hbar(1);
                                           f.mul_eps(1);
                                           return f;
                                       }()}};
    EvolutionSystem pushed = miura_apply(hsys, Mh, th);
    auto Wh = miura_invert(Mh, th);
    EvolutionSystem back = miura_apply(pushed, Wh, th);
    CHECK(truncate(back.rhs.at({1, 1})[0], th) == truncate(hsys.rhs.at({1, 1})[0], th));
}

TEST_CASE("hierarchy flows stay real and graded") {
    HodgeOracle hodge;
    Hierarchy H = build_hierarchy(hodge, tr(3, 3), {{1, 0}, {1, 1}}, true, false);
    for (const auto& [key, built] : H.hams) {
        CHECK(is_real(built.h.density));
        CHECK(has_lambda_degree(built.h.density, 0));
    }
    CHECK(is_real(H.gbar->h.density));
    for (const auto& [key, built] : H.hams) {
        auto rhs = dr_flow(H, key.first, key.second);
        for (const auto& f : rhs) CHECK(is_real(f));
    }
}

TEST_CASE("two-dimensional table theory with a non-involutive metric") {
    // Frobenius data: e1 the unit, e2^2 = 2 e2, theta(1) = 0, theta(e2) = 1;
    // eta = [[0,1],[1,2]] differs from its inverse, pinning index placement
    std::string doc = R"({
      "dimension": 2, "metric": [["0","1"],["1","2"]], "unit": 1,
      "entries": [
        {"g":0,"d":0,"alpha":1,"insertions":[1,1],"poly":[]},
        {"g":0,"d":0,"alpha":1,"insertions":[1,2],"poly":[{"coeff":"1","exps":[0,0]}]},
        {"g":0,"d":0,"alpha":1,"insertions":[2,2],"poly":[{"coeff":"2","exps":[0,0]}]},
        {"g":0,"d":0,"alpha":2,"insertions":[1,1],"poly":[{"coeff":"1","exps":[0,0]}]},
        {"g":0,"d":0,"alpha":2,"insertions":[1,2],"poly":[{"coeff":"2","exps":[0,0]}]},
        {"g":0,"d":0,"alpha":2,"insertions":[2,2],"poly":[{"coeff":"4","exps":[0,0]}]},
        {"g":0,"d":0,"alpha":2,"insertions":[1,1,1],"poly":[]},
        {"g":0,"d":0,"alpha":2,"insertions":[1,1,2],"poly":[]},
        {"g":0,"d":0,"alpha":2,"insertions":[1,2,2],"poly":[]},
        {"g":0,"d":0,"alpha":2,"insertions":[2,2,2],"poly":[]}
      ]
    })";
    TableOracle oracle(doc);
    Hierarchy H = build_hierarchy(oracle, tr(0, 3), {{1, 0}, {2, 0}}, false, false);

    // g[1,0] = (1/2) int sum eta_{ab} u^a u^b = int (u1 u2 + u2^2)
    DiffPoly quad = mono(2, {{1, 0, 1}, {2, 0, 1}}) + mono(2, {{2, 0, 2}});
    CHECK(lf_equal(H.hams.at({1, 0}).h, lf(quad)));

    // the unit flow must be u^a_x, which requires the inverse metric in K
    auto rhs = dr_flow(H, 1, 0);
    CHECK(rhs[0] == DiffPoly::jet(2, 1, 1));
    CHECK(rhs[1] == DiffPoly::jet(2, 2, 1));

    CHECK(verify_commutativity_all(H).all_pass());
    CHECK(verify_string(H).all_pass());
}

TEST_CASE("report printing and serialization") {
    TrivialOracle oracle;
    Hierarchy H = build_hierarchy(oracle, tr(1, 3), {{1, 0}, {1, 1}}, false, false);
    Report rep = verify_commutativity_all(H);
    std::ostringstream os;
    rep.print(os);
    CHECK(os.str().find("[PASS] commutator g[1,0] ~ g[1,1]") != std::string::npos);
}
