#ifndef DRH_KDV_HPP
#define DRH_KDV_HPP

#include "drh/poisson.hpp"

namespace drh {

// second Hamiltonian structure normalized to the flow u_t = u u_x + (h/12) u_3:
// K2 = (h/12) dx^3 + (2/3) u dx + (1/3) u_x.
//
// Derivation from the classical pair: for v_t = 6 v v_x + v_3 the second
// structure is dx^3 + 4 v dx + 2 v_x. The substitution v = (2/h) u carries the
// flow to u_t = u u_x + (h/12) u_3 after the time rescaling tau = (12/h) t,
// and transforms the operator to (h^2/4) dx^3 + 2 h u dx + h u_x. Dividing by
// the overall factor 3h (absorbed into the recursion constants) gives K2.
HamOperator kdv_second_structure();

struct KdvChain {
    std::vector<LocalFunctional> hams; // h_0 .. h_depth
    HamOperator k1;                    // dx
    HamOperator k2;

    KdvChain() : k1(1), k2(1) {}
};

// solves K1 delta(h_{d+1}) = c_d K2 delta(h_d); the constant c_d and the
// integration ambiguities are pinned by the leading density u^{d+3}/(d+3)!
// and the absence of constant and linear terms
LocalFunctional kdv_lenard_next(const LocalFunctional& h_d, int d);

KdvChain kdv_chain(int depth);

// reconstructs a functional from its variational derivative; throws NotExact
// when the candidate density fails to reproduce the gradient
LocalFunctional potential_of_gradient(const std::vector<DiffPoly>& grad);

} // namespace drh

#endif
