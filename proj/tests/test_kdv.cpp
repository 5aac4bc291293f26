#include "drh/kdv.hpp"

#include "drh/hierarchy.hpp"
#include "drh/render.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace drh;
using namespace drh::testing;

namespace {
const LocalFunctional kZero1{DiffPoly(1)};

Truncation tr(int g, int d) {
    Truncation t;
    t.genus_max = g;
    t.deg_max = d;
    return t;
}
} // namespace

TEST_CASE("second structure") {
    HamOperator K2 = kdv_second_structure();
    CHECK(validate_operator(K2).clean());

    // K2 applied to delta(h_0) = u reproduces the flow of h_1
    DiffPoly flow1 = K2.apply_entry(1, 1, DiffPoly::jet(1, 1, 0));
    DiffPoly expect = mono(1, {{1, 0, 1}, {1, 1, 1}}) + mono(1, {{1, 3, 1}}, 1, 12, 1);
    CHECK(flow1 == expect);

    // dispersionless limit drops the third derivative
    DiffPoly nohbar = hbar_part(flow1, 0);
    CHECK(nohbar == mono(1, {{1, 0, 1}, {1, 1, 1}}));
}

TEST_CASE("gradient potentials") {
    // delta h = u^2/2 + h/12 u_2 integrates to u^3/6 + h/24 u u_2
    DiffPoly grad = mono(1, {{1, 0, 2}}, 1, 2) + mono(1, {{1, 2, 1}}, 1, 12, 1);
    LocalFunctional h = potential_of_gradient({grad});
    CHECK(lf_equal(h, lf(mono(1, {{1, 0, 3}}, 1, 6) + mono(1, {{1, 0, 1}, {1, 2, 1}}, 1, 24, 1))));
    // a non-gradient is refused
    CHECK_THROWS_AS((void)potential_of_gradient({DiffPoly::jet(1, 1, 1)}), NotExact);
}

TEST_CASE("first Lenard step") {
    LocalFunctional h0 = lf(mono(1, {{1, 0, 2}}, 1, 2));
    LocalFunctional h1 = kdv_lenard_next(h0, 0);
    DiffPoly expect = mono(1, {{1, 0, 3}}, 1, 6) + mono(1, {{1, 0, 1}, {1, 2, 1}}, 1, 24, 1);
    CHECK(lf_equal(h1, lf(expect)));
}

TEST_CASE("chain to depth three") {
    KdvChain chain = kdv_chain(3);
    REQUIRE(chain.hams.size() == 4);

    // dispersionless densities are u^{d+2}/(d+2)!
    for (int d = 0; d <= 3; ++d) {
        DiffPoly lead(1);
        Mono m;
        m.jets.push_back({JetVar{1, 0}, d + 2});
        lead.add_term(m, Scalar(Rational(1) / factorial(d + 2)));
        CHECK(hbar_part(chain.hams[static_cast<std::size_t>(d)].density, 0) == lead);
    }

    // pairwise brackets vanish exactly
    for (std::size_t i = 0; i < chain.hams.size(); ++i)
        for (std::size_t j = i; j < chain.hams.size(); ++j)
            CHECK(lf_equal(bracket(chain.hams[i], chain.hams[j], chain.k1), kZero1));
}

TEST_CASE("chain matches the trivial-theory hierarchy") {
    KdvChain chain = kdv_chain(2);
    TrivialOracle oracle;
    Hierarchy H = build_hierarchy(oracle, tr(1, 3), {{1, 0}, {1, 1}}, false, false);
    CHECK(lf_equal(chain.hams[0], H.hams.at({1, 0}).h));
    CHECK(lf_equal(chain.hams[1], H.hams.at({1, 1}).h));
    // the flow generated by h_1 is the dispersive equation of the hierarchy
    CHECK(flows(chain.hams[1], chain.k1)[0] == dr_flow(H, 1, 1)[0]);
    // the assembled Hamiltonian commutes with the deeper chain
    for (const auto& h : chain.hams)
        CHECK(lf_equal(bracket(H.hams.at({1, 1}).h, h, chain.k1), kZero1));
}
