#ifndef DRH_COHFT_HPP
#define DRH_COHFT_HPP

#include "drh/fourier.hpp"
#include "drh/scalar.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace drh {

struct CohFTSpec {
    int dim = 1;
    ScalarMatrix eta;           // metric eta_{ab} = (e_a, e_b)
    int unit = 1;               // index of the unit vector
    std::string name;
    bool uses_eps = false;
};

struct DrKey {
    int g = 0;
    int d = 0;
    int alpha = 1;
    std::vector<int> insertions; // colors, sorted ascending

    friend auto operator<=>(const DrKey&, const DrKey&) = default;
    std::string str() const;
};

// monomial a_1^{e_1}..a_n^{e_n} e^epow of an integrand polynomial,
// exponents aligned with the insertion list
struct DrMono {
    std::vector<int> exps;
    int epow = 0;
    friend auto operator<=>(const DrMono&, const DrMono&) = default;
};
using DrPoly = std::map<DrMono, Rational>;

// supplier of the cycle integrals indexed by DrKey; a present value is exact
// data (possibly zero), absence means the integral is not known
class Oracle {
  public:
    explicit Oracle(CohFTSpec spec);
    virtual ~Oracle() = default;

    const CohFTSpec& spec() const { return spec_; }

    // applies universal dimension-vanishing rules, then the backend, then
    // validates homogeneity of degree 2g and marked-point symmetry
    std::optional<DrPoly> dr_poly(int g, int d, int alpha, std::vector<int> insertions) const;

  protected:
    virtual std::optional<DrPoly> dr_poly_impl(const DrKey& key) const = 0;

  private:
    CohFTSpec spec_;
};

// <tau_{d_1} ... tau_{d_m}>_0 for the one-dimensional unit theory:
// (m-3)!/(d_1!...d_m!) when sum d_i = m-3, else 0
Rational genus0_correlator(const std::vector<int>& d);

Rational bernoulli(int n);
Rational factorial(int n);

class TrivialOracle : public Oracle {
  public:
    TrivialOracle();

  protected:
    std::optional<DrPoly> dr_poly_impl(const DrKey& key) const override;
};

class HodgeOracle : public Oracle {
  public:
    HodgeOracle();

  protected:
    std::optional<DrPoly> dr_poly_impl(const DrKey& key) const override;
};

class TableOracle : public Oracle {
  public:
    explicit TableOracle(const std::string& json_text);
    static TableOracle from_file(const std::string& path);

  protected:
    std::optional<DrPoly> dr_poly_impl(const DrKey& key) const override;

  private:
    std::map<DrKey, DrPoly> table_;
    friend TableOracle parse_table(const std::string&);
};

// polynomial in the single ramification parameter a, keyed by power
using UniPoly = std::map<int, Rational>;

// genus-1 two-point expansion of the Jacobian-side cycle in the fixed basis
// {psi1_pull, psi2_pull, boundary_both}; coefficients are polynomials in a
std::map<std::string, UniPoly> hain_dr1_two_point_expansion();
// integrals of lambda_1 against those basis classes on the two-pointed space
std::map<std::string, Rational> genus1_two_point_pairings();
// the pairing of the two: a^2/24
UniPoly hain_dr1_two_point();

} // namespace drh

#endif
