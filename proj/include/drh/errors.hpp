#ifndef DRH_ERRORS_HPP
#define DRH_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace drh {

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// thrown when a density is not a total x-derivative
struct NotExact : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonSymmetric : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// arity-1 mode blocks have no preimage normalization
struct HasLinearBlock : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Miura data must be the identity plus higher genus corrections
struct NonUnitLeading : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// an oracle could not supply every integral a build requested;
// carries the full list of missing keys, never silently zero
struct MissingOracleData : std::runtime_error {
    std::vector<std::string> keys;
    explicit MissingOracleData(std::vector<std::string> ks);
};

} // namespace drh

#endif
