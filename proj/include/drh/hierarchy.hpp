#ifndef DRH_HIERARCHY_HPP
#define DRH_HIERARCHY_HPP

#include "drh/cohft.hpp"
#include "drh/poisson.hpp"

#include <iosfwd>
#include <optional>

namespace drh {

struct CheckResult {
    std::string name;
    Truncation window;
    bool pass = false;
    std::string witness;
};

struct Report {
    std::vector<CheckResult> checks;
    bool all_pass() const;
    void add(CheckResult c) { checks.push_back(std::move(c)); }
    void merge(const Report& o);
    void print(std::ostream& os) const;
};

// mode-space assembly of the Hamiltonian generating series for (alpha, d)
BSeries g_series(const Oracle& oracle, int alpha, int d, const Truncation& trunc);

// the local functional obtained by pulling g_series back through q_inverse
LocalFunctional hamiltonian(const Oracle& oracle, int alpha, int d, const Truncation& trunc);

// the generating functional without the marked psi-point; unpointed integrals
// are recovered from the d=1 unit-insertion data via the (2g-2+n) identity
LocalFunctional g_total(const Oracle& oracle, const Truncation& trunc);

// largest genus cap <= trunc.genus_max for which the oracle has complete data
// (-1 when even genus 0 is incomplete)
int max_complete_genus(const Oracle& oracle, int alpha, int d, const Truncation& trunc);
int max_complete_genus_gbar(const Oracle& oracle, const Truncation& trunc);

struct BuiltHam {
    LocalFunctional h;
    Truncation window; // truncation at which the data was complete
};

struct Hierarchy {
    CohFTSpec spec;
    Truncation trunc;
    HamOperator K; // eta^{-1} dx
    std::map<std::pair<int, int>, BuiltHam> hams;
    std::optional<BuiltHam> gbar;

    Hierarchy() : K(1) {}
};

Hierarchy build_hierarchy(const Oracle& oracle, const Truncation& trunc,
                          const std::vector<std::pair<int, int>>& targets, bool with_gbar,
                          bool auto_genus_window);

std::vector<DiffPoly> dr_flow(const Hierarchy& h, int alpha, int d);
EvolutionSystem hierarchy_system(const Hierarchy& h);

// bracket of every requested pair vanishes inside the sound window
Report verify_commutativity(
    const Hierarchy& h,
    const std::vector<std::pair<std::pair<int, int>, std::pair<int, int>>>& pairs);
Report verify_commutativity_all(const Hierarchy& h);

// d/du^1 lowers d by one and terminates in the metric quadratic
Report verify_string(const Hierarchy& h);

// g_{1,1} equals the Euler-type operator applied to the total functional
Report verify_dilaton(const Hierarchy& h);

// g_{alpha,0} is the u^alpha-derivative of the total functional
Report verify_first_derivative(const Hierarchy& h);

// dispersionless one-point series in the flat coordinates
DiffPoly omega_genus0(const Oracle& oracle, int alpha, int d, int deg_max);
Report verify_genus0_identity(const Oracle& oracle, int alpha, int d_max, int deg_max);

// 2 h d/dh - 2 + sum u^g_n d/du^g_n, termwise on representatives
LocalFunctional dilaton_apply(const LocalFunctional& h);

// ------------------------------------------------------------ string solution

struct TimeVar {
    int color = 1;
    int d = 0;
    friend auto operator<=>(const TimeVar&, const TimeVar&) = default;
};

// monomial x^xpow h^hpow e^epow * prod t_i^p_i over retained times
struct XtKey {
    int xpow = 0;
    int hpow = 0;
    int epow = 0;
    std::vector<std::pair<int, int>> tpow; // (time index, power), sorted by index

    int tdeg() const;
    friend auto operator<=>(const XtKey&, const XtKey&) = default;
};
using XtPoly = std::map<XtKey, Rational>;

struct TaylorSolution {
    int dim = 1;
    int unit = 1;
    int t_order = 0;
    Truncation trunc;
    std::vector<TimeVar> times;
    std::vector<XtPoly> comps; // one per color
};

// Taylor expansion in the times of the solution with initial datum
// u^alpha = delta_{alpha,unit} x; mixed t-derivative consistency is checked
// at every produced order and a mismatch throws
TaylorSolution string_solution(const Hierarchy& h, int t_order, int x_degree_cap = 64);

Report verify_string_solution(const TaylorSolution& sol);

std::string to_plain(const TaylorSolution& sol);

// ------------------------------------------------------------ Miura utilities

// inverse of an identity-plus-higher-genus substitution, by fixed point
std::map<int, DiffPoly> miura_invert(const std::map<int, DiffPoly>& M, const Truncation& trunc);

EvolutionSystem miura_apply(const EvolutionSystem& sys, const std::map<int, DiffPoly>& M,
                            const Truncation& trunc);

} // namespace drh

#endif
