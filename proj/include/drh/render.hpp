#ifndef DRH_RENDER_HPP
#define DRH_RENDER_HPP

#include "drh/diffpoly.hpp"

#include <string>

namespace drh {

class BSeries;

// plain-text grammar: rationals "p/q", hbar "h", eps "e", jets "u_k"
// (colors "u1".."uN" when dim > 1), products "*", powers "^"
std::string to_plain(const Scalar& c);
std::string to_plain(const Mono& m, int dim);
std::string to_plain(const DiffPoly& f);
std::string to_plain(const LocalFunctional& h);
std::string to_plain(const BSeries& b);

std::string to_latex(const DiffPoly& f);
std::string to_latex(const LocalFunctional& h);

} // namespace drh

#endif
