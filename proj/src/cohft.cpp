#include "drh/cohft.hpp"

#include "drh/poisson.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <sstream>

namespace drh {

std::string DrKey::str() const {
    std::ostringstream os;
    os << "g=" << g << ", d=" << d << ", alpha=" << alpha << ", insertions=[";
    for (std::size_t i = 0; i < insertions.size(); ++i) {
        if (i) os << ",";
        os << insertions[i];
    }
    os << "]";
    return os.str();
}

Rational factorial(int n) {
    if (n < 0) throw std::invalid_argument("factorial of negative number");
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), static_cast<unsigned long>(n));
    return Rational(f);
}

Rational genus0_correlator(const std::vector<int>& d) {
    const int m = static_cast<int>(d.size());
    if (m < 3) throw std::invalid_argument("genus-0 correlator needs at least 3 points");
    long sum = 0;
    for (int v : d) {
        if (v < 0) throw std::invalid_argument("negative psi power");
        sum += v;
    }
    if (sum != m - 3) return Rational(0);
    Rational r = factorial(m - 3);
    for (int v : d) r /= factorial(v);
    return r;
}

Rational bernoulli(int n) {
    if (n < 0) throw std::invalid_argument("bernoulli index must be nonnegative");
    static std::mutex mu;
    static std::vector<Rational> cache{Rational(1)};
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(cache.size()) <= n) {
        int m = static_cast<int>(cache.size());
        // sum_{j=0}^{m} binom(m+1, j) B_j = 0
        Rational s(0);
        for (int j = 0; j < m; ++j) {
            mpz_class b;
            mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(m + 1),
                         static_cast<unsigned long>(j));
            s += Rational(b) * cache[static_cast<std::size_t>(j)];
        }
        cache.push_back(-s / Rational(m + 1));
    }
    return cache[static_cast<std::size_t>(n)];
}

// ---------------------------------------------------------------- Oracle base

Oracle::Oracle(CohFTSpec spec) : spec_(std::move(spec)) {
    const int n = spec_.dim;
    if (n < 1) throw ValidationError("cohft dimension must be >= 1");
    if (static_cast<int>(spec_.eta.size()) != n)
        throw ValidationError("metric size does not match dimension");
    for (const auto& row : spec_.eta)
        if (static_cast<int>(row.size()) != n)
            throw ValidationError("metric is not square");
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (spec_.eta[i][j] != spec_.eta[j][i]) throw ValidationError("metric is not symmetric");
    invert_matrix(spec_.eta); // throws on singular metric
    if (spec_.unit < 1 || spec_.unit > n) throw ValidationError("unit index out of range");
}

static void validate_dr_poly(const DrKey& key, const DrPoly& poly) {
    const std::size_t n = key.insertions.size();
    for (const auto& [mono, c] : poly) {
        if (mono.exps.size() != n)
            throw ValidationError("entry " + key.str() + ": exponent vector length mismatch");
        long deg = 0;
        for (int e : mono.exps) {
            if (e < 0) throw ValidationError("entry " + key.str() + ": negative exponent");
            deg += e;
        }
        if (mono.epow < 0) throw ValidationError("entry " + key.str() + ": negative eps power");
        if (c != 0 && deg != 2L * key.g)
            throw ValidationError("entry " + key.str() +
                                  ": polynomial is not homogeneous of degree 2g");
    }
    // symmetry under transpositions of equal-color slots
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (key.insertions[i] != key.insertions[j]) continue;
            for (const auto& [mono, c] : poly) {
                DrMono swapped = mono;
                std::swap(swapped.exps[i], swapped.exps[j]);
                auto it = poly.find(swapped);
                Rational other = (it == poly.end()) ? Rational(0) : it->second;
                if (other != c)
                    throw ValidationError("entry " + key.str() +
                                          ": data not symmetric under marked-point permutation");
            }
        }
    }
}

std::optional<DrPoly> Oracle::dr_poly(int g, int d, int alpha,
                                      std::vector<int> insertions) const {
    if (g < 0 || d < 0) throw std::invalid_argument("negative genus or psi power");
    if (alpha < 1 || alpha > spec_.dim) throw DimensionMismatch("oracle color out of range");
    for (int c : insertions)
        if (c < 1 || c > spec_.dim) throw DimensionMismatch("oracle insertion out of range");
    std::sort(insertions.begin(), insertions.end());
    DrKey key{g, d, alpha, std::move(insertions)};
    const int n = static_cast<int>(key.insertions.size());

    // lambda_g psi^d already exceeds the cycle dimension 2g-2+n
    if (d > g + n - 2) return DrPoly{};
    // the d=0 unit insertion is pulled back along the forgetful map
    if (d == 0 && alpha == spec_.unit && 2 * g - 2 + n > 0) return DrPoly{};

    auto out = dr_poly_impl(key);
    if (out) {
        validate_dr_poly(key, *out);
        if (g == 0 && d == 0 && alpha == spec_.unit && n == 2) {
            Rational want = spec_.eta[static_cast<std::size_t>(key.insertions[0] - 1)]
                                     [static_cast<std::size_t>(key.insertions[1] - 1)];
            Rational got(0);
            for (const auto& [mono, c] : *out) got += c; // constant polynomial
            if (got != want)
                throw ValidationError("entry " + key.str() + ": metric axiom violated");
        }
    }
    return out;
}

// ---------------------------------------------------------------- built-ins

static CohFTSpec one_dim_spec(std::string name, bool eps) {
    CohFTSpec s;
    s.dim = 1;
    s.eta = {{Rational(1)}};
    s.unit = 1;
    s.name = std::move(name);
    s.uses_eps = eps;
    return s;
}

TrivialOracle::TrivialOracle() : Oracle(one_dim_spec("trivial", false)) {}

static DrPoly constant_poly(std::size_t n, const Rational& v) {
    DrPoly p;
    if (v != 0) p.emplace(DrMono{std::vector<int>(n, 0), 0}, v);
    return p;
}

// symmetric representative (a_1^{2g} + a_2^{2g})/2 * c of the two-point value
static DrPoly two_point_power(int g, const Rational& c, int epow) {
    DrPoly p;
    if (c == 0) return p;
    Rational half = c / 2;
    p.emplace(DrMono{{2 * g, 0}, epow}, half);
    p.emplace(DrMono{{0, 2 * g}, epow}, half);
    return p;
}

std::optional<DrPoly> TrivialOracle::dr_poly_impl(const DrKey& key) const {
    const int n = static_cast<int>(key.insertions.size());
    if (key.g == 0) {
        std::vector<int> d{key.d};
        d.insert(d.end(), static_cast<std::size_t>(n), 0);
        return constant_poly(static_cast<std::size_t>(n), genus0_correlator(d));
    }
    // the integrand is lambda_g psi^d, of pure degree g+d
    if (key.d != key.g + n - 2) return DrPoly{};
    if (key.g == 1 && n == 2 && key.d == 1)
        return two_point_power(1, Rational(1, 12), 0);
    return std::nullopt;
}

HodgeOracle::HodgeOracle() : Oracle(one_dim_spec("hodge", true)) {}

std::optional<DrPoly> HodgeOracle::dr_poly_impl(const DrKey& key) const {
    const int n = static_cast<int>(key.insertions.size());
    if (key.g == 0) {
        // no higher Hodge classes in genus 0
        std::vector<int> d{key.d};
        d.insert(d.end(), static_cast<std::size_t>(n), 0);
        return constant_poly(static_cast<std::size_t>(n), genus0_correlator(d));
    }
    // only the eps^j component with g + d + j = 2g - 2 + n survives
    const int j = key.g + n - 2 - key.d;
    if (j > key.g) return DrPoly{};
    if (j == key.g) return DrPoly{}; // lambda_g^2 = 0 for g >= 1
    if (n == 2 && key.d == 1) {
        Rational c = abs(bernoulli(2 * key.g)) / factorial(2 * key.g);
        return two_point_power(key.g, c, key.g - 1);
    }
    return std::nullopt;
}

// ---------------------------------------------------------------- table oracle

using nlohmann::json;

static Rational json_rational(const json& v, const std::string& where) {
    if (v.is_string()) return rat_parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
    throw SchemaError("table: " + where + " must be a rational string or integer");
}

namespace {
struct ParsedTable {
    CohFTSpec spec;
    std::map<DrKey, DrPoly> table;
};

ParsedTable parse_table_document(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("table: invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("table: top level must be an object");
    for (const char* field : {"dimension", "metric", "unit", "entries"})
        if (!doc.contains(field))
            throw SchemaError(std::string("table: missing field '") + field + "'");

    ParsedTable out;
    if (!doc["dimension"].is_number_integer())
        throw SchemaError("table: dimension must be an integer");
    out.spec.dim = doc["dimension"].get<int>();
    if (out.spec.dim < 1) throw SchemaError("table: dimension must be >= 1");

    if (!doc["metric"].is_array() || static_cast<int>(doc["metric"].size()) != out.spec.dim)
        throw SchemaError("table: metric must be an NxN array");
    for (const auto& row : doc["metric"]) {
        if (!row.is_array() || static_cast<int>(row.size()) != out.spec.dim)
            throw SchemaError("table: metric must be an NxN array");
        std::vector<Rational> r;
        for (const auto& v : row) r.push_back(json_rational(v, "metric entry"));
        out.spec.eta.push_back(std::move(r));
    }
    if (!doc["unit"].is_number_integer()) throw SchemaError("table: unit must be an integer");
    out.spec.unit = doc["unit"].get<int>();
    out.spec.name = doc.value("name", std::string("table"));
    if (!doc["entries"].is_array()) throw SchemaError("table: entries must be an array");

    for (const auto& e : doc["entries"]) {
        if (!e.is_object()) throw SchemaError("table: entry must be an object");
        for (const char* field : {"g", "d", "alpha", "insertions", "poly"})
            if (!e.contains(field))
                throw SchemaError(std::string("table: entry missing field '") + field + "'");
        DrKey key;
        key.g = e["g"].get<int>();
        key.d = e["d"].get<int>();
        key.alpha = e["alpha"].get<int>();
        if (key.g < 0 || key.d < 0) throw SchemaError("table: entry with negative g or d");
        if (key.alpha < 1 || key.alpha > out.spec.dim)
            throw SchemaError("table: entry alpha out of range");
        if (!e["insertions"].is_array() || e["insertions"].empty())
            throw SchemaError("table: insertions must be a nonempty array");
        for (const auto& c : e["insertions"]) {
            int v = c.get<int>();
            if (v < 1 || v > out.spec.dim)
                throw SchemaError("table: insertion color out of range");
            key.insertions.push_back(v);
        }
        if (!std::is_sorted(key.insertions.begin(), key.insertions.end()))
            throw ValidationError("entry " + key.str() + ": insertions must be sorted");
        if (!e["poly"].is_array()) throw SchemaError("table: poly must be an array");
        DrPoly poly;
        for (const auto& t : e["poly"]) {
            if (!t.is_object() || !t.contains("coeff") || !t.contains("exps"))
                throw SchemaError("table: poly term needs 'coeff' and 'exps'");
            DrMono mono;
            mono.epow = t.value("e", 0);
            if (!t["exps"].is_array() || t["exps"].size() != key.insertions.size())
                throw SchemaError("table: exps must align with insertions");
            for (const auto& x : t["exps"]) mono.exps.push_back(x.get<int>());
            Rational c = json_rational(t["coeff"], "poly coeff");
            if (c != 0) poly[mono] += c;
        }
        for (auto it = poly.begin(); it != poly.end();)
            it = (it->second == 0) ? poly.erase(it) : std::next(it);
        if (out.table.count(key))
            throw ValidationError("entry " + key.str() + ": duplicate key");
        out.table.emplace(std::move(key), std::move(poly));
    }
    return out;
}
} // namespace

TableOracle::TableOracle(const std::string& json_text)
    : Oracle(parse_table_document(json_text).spec) {
    auto parsed = parse_table_document(json_text);
    table_ = std::move(parsed.table);
    // table-wide semantic validation, beyond the per-query checks
    for (const auto& [key, poly] : table_) {
        validate_dr_poly(key, poly);
        const int n = static_cast<int>(key.insertions.size());
        if (key.d == 0 && key.alpha == spec().unit && 2 * key.g - 2 + n > 0 && !poly.empty())
            throw ValidationError("entry " + key.str() +
                                  ": unit insertion with d=0 must vanish for stable (g,n)");
        if (key.g == 0 && key.d == 0 && key.alpha == spec().unit && n == 2) {
            Rational want = spec().eta[static_cast<std::size_t>(key.insertions[0] - 1)]
                                      [static_cast<std::size_t>(key.insertions[1] - 1)];
            Rational got(0);
            for (const auto& [mono, c] : poly) got += c;
            if (got != want)
                throw ValidationError("entry " + key.str() + ": metric axiom violated");
        }
    }
}

TableOracle TableOracle::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("table: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return TableOracle(buf.str());
}

std::optional<DrPoly> TableOracle::dr_poly_impl(const DrKey& key) const {
    auto it = table_.find(key);
    if (it == table_.end()) return std::nullopt;
    return it->second;
}

// ---------------------------------------------------------------- Hain data

std::map<std::string, UniPoly> hain_dr1_two_point_expansion() {
    // (a^2/2)(psi1_pull + psi2_pull) - (a_1 a_2) * boundary_both, a_2 = -a_1
    std::map<std::string, UniPoly> out;
    out["psi1_pull"] = UniPoly{{2, Rational(1, 2)}};
    out["psi2_pull"] = UniPoly{{2, Rational(1, 2)}};
    out["boundary_both"] = UniPoly{{2, Rational(1)}};
    return out;
}

std::map<std::string, Rational> genus1_two_point_pairings() {
    // psi pullbacks from the one-pointed space pair to zero against lambda_1;
    // the boundary divisor contributes the elliptic tail integral 1/24
    return {{"psi1_pull", Rational(0)},
            {"psi2_pull", Rational(0)},
            {"boundary_both", Rational(1, 24)}};
}

UniPoly hain_dr1_two_point() {
    UniPoly out;
    auto classes = hain_dr1_two_point_expansion();
    auto pairings = genus1_two_point_pairings();
    for (const auto& [name, coeff] : classes) {
        const Rational& w = pairings.at(name);
        if (w == 0) continue;
        for (const auto& [pow, c] : coeff) {
            out[pow] += c * w;
            if (out[pow] == 0) out.erase(pow);
        }
    }
    return out;
}

} // namespace drh
