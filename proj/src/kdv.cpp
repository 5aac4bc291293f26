#include "drh/kdv.hpp"

#include "drh/cohft.hpp"

namespace drh {

HamOperator kdv_second_structure() {
    HamOperator K2(1);
    DiffPoly disp = DiffPoly::constant(1, Scalar(rat(1, 12)));
    disp.mul_hbar(1);
    K2.add_entry_term(1, 1, disp, 3);
    K2.add_entry_term(1, 1, Scalar(rat(2, 3)) * DiffPoly::jet(1, 1, 0), 1);
    K2.add_entry_term(1, 1, Scalar(rat(1, 3)) * DiffPoly::jet(1, 1, 1), 0);
    return K2;
}

LocalFunctional potential_of_gradient(const std::vector<DiffPoly>& grad) {
    if (grad.empty()) throw std::invalid_argument("empty gradient");
    const int N = grad.front().dim();
    if (static_cast<int>(grad.size()) != N)
        throw DimensionMismatch("gradient size does not match dimension");
    DiffPoly density(N);
    for (int alpha = 1; alpha <= N; ++alpha) {
        for (const auto& [m, c] : grad[static_cast<std::size_t>(alpha - 1)].terms()) {
            Mono u0;
            u0.jets.push_back({JetVar{alpha, 0}, 1});
            density.add_term(m.times(u0), c.divided_by(m.arity() + 1));
        }
    }
    LocalFunctional h(std::move(density));
    for (int alpha = 1; alpha <= N; ++alpha)
        if (!(var_derivative(h, alpha) == grad[static_cast<std::size_t>(alpha - 1)]))
            throw NotExact("no local functional has the requested gradient");
    return h;
}

LocalFunctional kdv_lenard_next(const LocalFunctional& h_d, int d) {
    TruncationScope exact(Truncation{}); // the chain is exact, no caps
    HamOperator K2 = kdv_second_structure();
    DiffPoly rhs = K2.apply_entry(1, 1, var_derivative(h_d, 1));
    DiffPoly grad = antiderivative(rhs);
    LocalFunctional raw = potential_of_gradient({grad});
    // pin the scale by the dispersionless leading density u^{d+3}/(d+3)!
    Mono lead;
    lead.jets.push_back({JetVar{1, 0}, d + 3});
    Scalar have = raw.density.coeff(lead);
    if (have.is_zero() || !have.is_real())
        throw std::logic_error("Lenard step lost the dispersionless leading term");
    Rational scale = (Rational(1) / factorial(d + 3)) / have.re;
    return Scalar(scale) * raw;
}

KdvChain kdv_chain(int depth) {
    if (depth < 0) throw std::invalid_argument("negative chain depth");
    TruncationScope exact(Truncation{});
    KdvChain chain;
    chain.k1 = make_eta_dx({{Rational(1)}});
    chain.k2 = kdv_second_structure();
    DiffPoly h0(1);
    Mono u2;
    u2.jets.push_back({JetVar{1, 0}, 2});
    h0.add_term(u2, Scalar(rat(1, 2)));
    chain.hams.emplace_back(std::move(h0));
    for (int d = 0; d < depth; ++d)
        chain.hams.push_back(kdv_lenard_next(chain.hams.back(), d));
    return chain;
}

} // namespace drh
