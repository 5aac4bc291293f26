#ifndef DRH_DIFFPOLY_HPP
#define DRH_DIFFPOLY_HPP

#include "drh/errors.hpp"
#include "drh/scalar.hpp"

#include <map>
#include <optional>
#include <vector>

namespace drh {

// jet variable u^color_order; colors run 1..N, u^color_0 is the undifferentiated field
struct JetVar {
    int color = 1;
    int order = 0;
    friend auto operator<=>(const JetVar&, const JetVar&) = default;
};

struct JetFactor {
    JetVar var;
    int power = 1;
    friend auto operator<=>(const JetFactor&, const JetFactor&) = default;
};

// h^hpow e^epow * prod of jet factors; jets kept sorted by (color, order)
struct Mono {
    int hpow = 0;
    int epow = 0;
    std::vector<JetFactor> jets;

    int arity() const;   // total number of jet letters
    int deg_dif() const; // sum of jet orders, with multiplicity
    Mono times(const Mono& o) const;

    // canonical order: (hpow, epow, arity, expanded jet word)
    bool operator<(const Mono& o) const;
    friend bool operator==(const Mono&, const Mono&) = default;
};

class DiffPoly {
  public:
    explicit DiffPoly(int dim = 1);

    int dim() const { return dim_; }
    const std::map<Mono, Scalar>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    // canonicalizing insert; applies the active truncation
    void add_term(const Mono& m, const Scalar& c);
    Scalar coeff(const Mono& m) const;

    static DiffPoly constant(int dim, const Scalar& c);
    static DiffPoly jet(int dim, int color, int order, int power = 1);

    DiffPoly& operator+=(const DiffPoly& o);
    DiffPoly& operator-=(const DiffPoly& o);
    DiffPoly& operator*=(const DiffPoly& o);
    DiffPoly& scale(const Scalar& c);
    DiffPoly& mul_hbar(int k); // multiply by h^k
    DiffPoly& mul_eps(int k);  // multiply by e^k

    friend DiffPoly operator+(DiffPoly a, const DiffPoly& b) { a += b; return a; }
    friend DiffPoly operator-(DiffPoly a, const DiffPoly& b) { a -= b; return a; }
    friend DiffPoly operator*(DiffPoly a, const DiffPoly& b) { a *= b; return a; }
    friend DiffPoly operator*(const Scalar& c, DiffPoly a) { a.scale(c); return a; }
    friend bool operator==(const DiffPoly& a, const DiffPoly& b) {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

  private:
    int dim_;
    std::map<Mono, Scalar> terms_;
};

// equivalence class of a density modulo total x-derivatives; the stored
// density is just a chosen representative, equality goes through lf_equal
struct LocalFunctional {
    DiffPoly density;

    LocalFunctional() : density(1) {}
    explicit LocalFunctional(DiffPoly d) : density(std::move(d)) {}
    int dim() const { return density.dim(); }

    LocalFunctional& operator+=(const LocalFunctional& o) { density += o.density; return *this; }
    LocalFunctional& operator-=(const LocalFunctional& o) { density -= o.density; return *this; }
    friend LocalFunctional operator+(LocalFunctional a, const LocalFunctional& b) { a += b; return a; }
    friend LocalFunctional operator-(LocalFunctional a, const LocalFunctional& b) { a -= b; return a; }
    friend LocalFunctional operator*(const Scalar& c, LocalFunctional a) { a.density.scale(c); return a; }
};

DiffPoly dx(const DiffPoly& f);
DiffPoly dx_pow(const DiffPoly& f, int n);
DiffPoly jet_derivative(const DiffPoly& f, int color, int order);

DiffPoly var_derivative_density(const DiffPoly& f, int color);
DiffPoly var_derivative(const LocalFunctional& h, int color);

bool lf_equal(const LocalFunctional& a, const LocalFunctional& b);
LocalFunctional lf_partial_u(const LocalFunctional& h, int color);

// replaces u^color_n by dx^n(images[color]) and expands
DiffPoly substitute(const DiffPoly& f, const std::map<int, DiffPoly>& images);

// constructive witness of membership in im dx; throws NotExact otherwise
DiffPoly antiderivative(const DiffPoly& f);

DiffPoly truncate(const DiffPoly& f, const Truncation& t);
LocalFunctional truncate(const LocalFunctional& h, const Truncation& t);

// u-independent part (may still carry h/e powers)
DiffPoly arity0_part(const DiffPoly& f);
DiffPoly arity_part(const DiffPoly& f, int arity);
DiffPoly hbar_part(const DiffPoly& f, int hpow); // coefficient poly of h^hpow (h removed)
DiffPoly eps_subst_zero(const DiffPoly& f);      // set e = 0

int max_jet_order(const DiffPoly& f, int color);
bool is_real(const DiffPoly& f);

// true when every monomial satisfies deg_dif = 2*hpow + k
bool has_lambda_degree(const DiffPoly& f, int k);

} // namespace drh

#endif
