#ifndef DRH_SERIALIZE_HPP
#define DRH_SERIALIZE_HPP

#include "drh/fourier.hpp"
#include "drh/hierarchy.hpp"
#include "drh/poisson.hpp"

#include <json.hpp>

namespace drh {

using OrderedJson = nlohmann::ordered_json;

// lossless structured forms; rationals travel as "p/q" strings and term
// order follows the canonical in-memory order, so output is byte-stable
OrderedJson to_json(const Scalar& c);
OrderedJson to_json(const DiffPoly& f);
OrderedJson to_json(const LocalFunctional& h);
OrderedJson to_json(const HamOperator& K);
OrderedJson to_json(const BSeries& b);
OrderedJson to_json(const Report& r);

Scalar scalar_from_json(const OrderedJson& j);
DiffPoly diffpoly_from_json(const OrderedJson& j);
LocalFunctional functional_from_json(const OrderedJson& j);
HamOperator operator_from_json(const OrderedJson& j);
BSeries bseries_from_json(const OrderedJson& j);

} // namespace drh

#endif
