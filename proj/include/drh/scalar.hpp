#ifndef DRH_SCALAR_HPP
#define DRH_SCALAR_HPP

#include <gmpxx.h>
#include <limits>
#include <string>

namespace drh {

using Rational = mpq_class;

Rational rat(long p, long q = 1);
Rational rat_parse(const std::string& s); // "p/q" or "p"
std::string rat_str(const Rational& r);

// element of Q(i): re + im*i
struct Scalar {
    Rational re, im;

    Scalar() : re(0), im(0) {}
    Scalar(int v) : re(v), im(0) {}
    Scalar(long v) : re(v), im(0) {}
    Scalar(const Rational& r) : re(r), im(0) {}
    Scalar(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    static Scalar unit_i() { return Scalar(Rational(0), Rational(1)); }

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    Scalar operator-() const { return Scalar(-re, -im); }
    Scalar& operator+=(const Scalar& o) { re += o.re; im += o.im; return *this; }
    Scalar& operator-=(const Scalar& o) { re -= o.re; im -= o.im; return *this; }
    Scalar& operator*=(const Scalar& o) {
        Rational r = re * o.re - im * o.im;
        Rational i = re * o.im + im * o.re;
        re = r; im = i;
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar& b) { a += b; return a; }
    friend Scalar operator-(Scalar a, const Scalar& b) { a -= b; return a; }
    friend Scalar operator*(Scalar a, const Scalar& b) { a *= b; return a; }
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    Scalar divided_by(long n) const { return Scalar(re / n, im / n); }
    Scalar divided_by(const Rational& q) const { return Scalar(re / q, im / q); }
};

// i^n, n >= 0
Scalar i_pow(int n);
// (-i)^n, n >= 0
Scalar neg_i_pow(int n);

// caps on the hbar power (genus), monomial arity (u-degree) and eps power;
// operations drop terms beyond the caps and raise a sticky flag when they do
struct Truncation {
    static constexpr int unlimited = std::numeric_limits<int>::max();
    int genus_max = unlimited;
    int deg_max = unlimited;
    int eps_max = unlimited;

    bool keeps(int hpow, int epow, int arity) const {
        return hpow <= genus_max && epow <= eps_max && arity <= deg_max;
    }
    Truncation min_with(const Truncation& o) const {
        return Truncation{std::min(genus_max, o.genus_max),
                          std::min(deg_max, o.deg_max),
                          std::min(eps_max, o.eps_max)};
    }
    bool is_unlimited() const {
        return genus_max == unlimited && deg_max == unlimited && eps_max == unlimited;
    }
    std::string str() const;
    friend bool operator==(const Truncation&, const Truncation&) = default;
};

const Truncation& active_truncation();
bool truncation_dropped_terms();
void reset_truncation_drop_flag();
void note_truncation_drop();

// RAII installer for the active truncation on the current thread
class TruncationScope {
  public:
    explicit TruncationScope(const Truncation& t);
    ~TruncationScope();
    TruncationScope(const TruncationScope&) = delete;
    TruncationScope& operator=(const TruncationScope&) = delete;

  private:
    Truncation saved_;
};

} // namespace drh

#endif
