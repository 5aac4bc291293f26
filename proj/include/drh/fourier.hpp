#ifndef DRH_FOURIER_HPP
#define DRH_FOURIER_HPP

#include "drh/diffpoly.hpp"

#include <map>
#include <vector>

namespace drh {

using ScalarMatrix = std::vector<std::vector<Rational>>;

// one Fourier letter: a factor p^color_a weighted by a^expo, a the mode variable
struct BFactor {
    int color = 1;
    int expo = 0;
    friend auto operator<=>(const BFactor&, const BFactor&) = default;
};

// h^hpow e^epow * sum over ordered nonzero integer tuples (a_1..a_k) with
// sum a_i = 0 of prod a_i^expo_i p^color_i_{a_i}; factors sorted
struct BKey {
    int hpow = 0;
    int epow = 0;
    std::vector<BFactor> factors;

    int arity() const { return static_cast<int>(factors.size()); }
    int poly_degree() const;
    bool operator<(const BKey& o) const;
    friend bool operator==(const BKey&, const BKey&) = default;
};

class BSeries {
  public:
    explicit BSeries(int dim = 1);

    int dim() const { return dim_; }
    const std::map<BKey, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(BKey k, const Scalar& c); // canonicalizes, truncates

    BSeries& operator+=(const BSeries& o);
    BSeries& operator-=(const BSeries& o);
    BSeries& scale(const Scalar& c);
    friend BSeries operator+(BSeries a, const BSeries& b) { a += b; return a; }
    friend BSeries operator-(BSeries a, const BSeries& b) { a -= b; return a; }

  private:
    int dim_;
    std::map<BKey, Scalar> terms_;
};

// same block data with modes running over all integers including zero
struct ZSeries {
    BSeries data;
};

// zero Fourier mode of a local functional; kills all arity-1 monomials
BSeries t0(const LocalFunctional& h);

// the normalized section of t0: the unique preimage with no linear part
// (and matching constant part); throws HasLinearBlock on arity-1 data
LocalFunctional q_inverse(const BSeries& f);

// equality modulo the zero-sum relation per block
bool b_equal(const BSeries& a, const BSeries& b);

ZSeries z_extend(const BSeries& f);

// d/dp^color_0 followed by evaluation at p^*_0 = 0
BSeries z_partial_p0(const ZSeries& f, int color);

// Poisson bracket {p^a_m, p^b_n} = i m eta^{ab} delta_{m+n,0} on block data
BSeries p_bracket(const BSeries& f, const BSeries& g, const ScalarMatrix& eta);

} // namespace drh

#endif
