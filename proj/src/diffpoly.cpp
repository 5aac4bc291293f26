#include "drh/diffpoly.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace drh {

// ---------------------------------------------------------------- scalar bits

Rational rat(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

Rational rat_parse(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: '" + s + "'");
    r.canonicalize();
    return r;
}

std::string rat_str(const Rational& r) { return r.get_str(); }

Scalar i_pow(int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return Scalar(1);
        case 1: return Scalar::unit_i();
        case 2: return Scalar(-1);
        default: return -Scalar::unit_i();
    }
}

Scalar neg_i_pow(int n) { return i_pow(3 * n); }

std::string Truncation::str() const {
    auto one = [](int v) {
        return v == unlimited ? std::string("*") : std::to_string(v);
    };
    return "G=" + one(genus_max) + ",D=" + one(deg_max) + ",E=" + one(eps_max);
}

namespace {
thread_local Truncation g_active{};
thread_local bool g_dropped = false;
} // namespace

const Truncation& active_truncation() { return g_active; }
bool truncation_dropped_terms() { return g_dropped; }
void reset_truncation_drop_flag() { g_dropped = false; }
void note_truncation_drop() { g_dropped = true; }

TruncationScope::TruncationScope(const Truncation& t) : saved_(g_active) { g_active = t; }
TruncationScope::~TruncationScope() { g_active = saved_; }

// ---------------------------------------------------------------- monomials

int Mono::arity() const {
    int a = 0;
    for (const auto& jf : jets) a += jf.power;
    return a;
}

int Mono::deg_dif() const {
    int d = 0;
    for (const auto& jf : jets) d += jf.power * jf.var.order;
    return d;
}

Mono Mono::times(const Mono& o) const {
    Mono r;
    r.hpow = hpow + o.hpow;
    r.epow = epow + o.epow;
    r.jets.reserve(jets.size() + o.jets.size());
    auto ia = jets.begin(), ib = o.jets.begin();
    while (ia != jets.end() && ib != o.jets.end()) {
        if (ia->var == ib->var) {
            r.jets.push_back({ia->var, ia->power + ib->power});
            ++ia; ++ib;
        } else if (ia->var < ib->var) {
            r.jets.push_back(*ia++);
        } else {
            r.jets.push_back(*ib++);
        }
    }
    r.jets.insert(r.jets.end(), ia, jets.end());
    r.jets.insert(r.jets.end(), ib, o.jets.end());
    return r;
}

bool Mono::operator<(const Mono& o) const {
    if (hpow != o.hpow) return hpow < o.hpow;
    if (epow != o.epow) return epow < o.epow;
    int a = arity(), b = o.arity();
    if (a != b) return a < b;
    // expanded jet word, lexicographic
    auto ia = jets.begin(); int ca = 0;
    auto ib = o.jets.begin(); int cb = 0;
    while (ia != jets.end() && ib != o.jets.end()) {
        if (ia->var != ib->var) return ia->var < ib->var;
        int step = std::min(ia->power - ca, ib->power - cb);
        ca += step; cb += step;
        if (ca == ia->power) { ++ia; ca = 0; }
        if (cb == ib->power) { ++ib; cb = 0; }
    }
    return ib != o.jets.end();
}

// ---------------------------------------------------------------- DiffPoly

DiffPoly::DiffPoly(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("DiffPoly dimension must be >= 1");
}

void DiffPoly::add_term(const Mono& m, const Scalar& c) {
    if (c.is_zero()) return;
    if (!active_truncation().keeps(m.hpow, m.epow, m.arity())) {
        g_dropped = true;
        return;
    }
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Scalar DiffPoly::coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Scalar() : it->second;
}

DiffPoly DiffPoly::constant(int dim, const Scalar& c) {
    DiffPoly f(dim);
    f.add_term(Mono{}, c);
    return f;
}

DiffPoly DiffPoly::jet(int dim, int color, int order, int power) {
    if (color < 1 || color > dim) throw DimensionMismatch("jet color out of range");
    if (order < 0 || power < 1) throw std::invalid_argument("bad jet order/power");
    DiffPoly f(dim);
    Mono m;
    m.jets.push_back({JetVar{color, order}, power});
    f.add_term(m, Scalar(1));
    return f;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
    if (dim_ != o.dim_) throw DimensionMismatch("adding polynomials of different dimension");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
    if (dim_ != o.dim_) throw DimensionMismatch("subtracting polynomials of different dimension");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

DiffPoly& DiffPoly::operator*=(const DiffPoly& o) {
    if (dim_ != o.dim_) throw DimensionMismatch("multiplying polynomials of different dimension");
    DiffPoly r(dim_);
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_)
            r.add_term(ma.times(mb), ca * cb);
    terms_.swap(r.terms_);
    return *this;
}

DiffPoly& DiffPoly::scale(const Scalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

DiffPoly& DiffPoly::mul_hbar(int k) {
    DiffPoly r(dim_);
    for (const auto& [m, c] : terms_) {
        Mono n = m;
        n.hpow += k;
        r.add_term(n, c);
    }
    terms_.swap(r.terms_);
    return *this;
}

DiffPoly& DiffPoly::mul_eps(int k) {
    DiffPoly r(dim_);
    for (const auto& [m, c] : terms_) {
        Mono n = m;
        n.epow += k;
        r.add_term(n, c);
    }
    terms_.swap(r.terms_);
    return *this;
}

// ---------------------------------------------------------------- operations

DiffPoly dx(const DiffPoly& f) {
    DiffPoly r(f.dim());
    for (const auto& [m, c] : f.terms()) {
        for (std::size_t k = 0; k < m.jets.size(); ++k) {
            const JetFactor& jf = m.jets[k];
            Mono n;
            n.hpow = m.hpow;
            n.epow = m.epow;
            n.jets.reserve(m.jets.size() + 1);
            for (std::size_t t = 0; t < m.jets.size(); ++t) {
                if (t == k) {
                    if (jf.power > 1) n.jets.push_back({jf.var, jf.power - 1});
                } else {
                    n.jets.push_back(m.jets[t]);
                }
            }
            Mono bump;
            bump.jets.push_back({JetVar{jf.var.color, jf.var.order + 1}, 1});
            r.add_term(n.times(bump), c * Scalar(jf.power));
        }
    }
    return r;
}

DiffPoly dx_pow(const DiffPoly& f, int n) {
    DiffPoly r = f;
    for (int i = 0; i < n; ++i) r = dx(r);
    return r;
}

DiffPoly jet_derivative(const DiffPoly& f, int color, int order) {
    if (color < 1 || color > f.dim()) throw DimensionMismatch("jet color out of range");
    DiffPoly r(f.dim());
    JetVar v{color, order};
    for (const auto& [m, c] : f.terms()) {
        for (std::size_t k = 0; k < m.jets.size(); ++k) {
            if (!(m.jets[k].var == v)) continue;
            Mono n = m;
            if (n.jets[k].power > 1)
                n.jets[k].power -= 1;
            else
                n.jets.erase(n.jets.begin() + static_cast<long>(k));
            r.add_term(n, c * Scalar(m.jets[k].power));
            break;
        }
    }
    return r;
}

int max_jet_order(const DiffPoly& f, int color) {
    int k = -1;
    for (const auto& [m, c] : f.terms())
        for (const auto& jf : m.jets)
            if (jf.var.color == color) k = std::max(k, jf.var.order);
    return k;
}

DiffPoly var_derivative_density(const DiffPoly& f, int color) {
    DiffPoly acc(f.dim());
    int top = max_jet_order(f, color);
    for (int i = 0; i <= top; ++i) {
        DiffPoly t = dx_pow(jet_derivative(f, color, i), i);
        if (i % 2 == 1) t.scale(Scalar(-1));
        acc += t;
    }
    return acc;
}

DiffPoly var_derivative(const LocalFunctional& h, int color) {
    return var_derivative_density(h.density, color);
}

DiffPoly arity0_part(const DiffPoly& f) {
    DiffPoly r(f.dim());
    for (const auto& [m, c] : f.terms())
        if (m.jets.empty()) r.add_term(m, c);
    return r;
}

DiffPoly arity_part(const DiffPoly& f, int arity) {
    DiffPoly r(f.dim());
    for (const auto& [m, c] : f.terms())
        if (m.arity() == arity) r.add_term(m, c);
    return r;
}

DiffPoly hbar_part(const DiffPoly& f, int hpow) {
    DiffPoly r(f.dim());
    for (const auto& [m, c] : f.terms())
        if (m.hpow == hpow) {
            Mono n = m;
            n.hpow = 0;
            r.add_term(n, c);
        }
    return r;
}

DiffPoly eps_subst_zero(const DiffPoly& f) {
    DiffPoly r(f.dim());
    for (const auto& [m, c] : f.terms())
        if (m.epow == 0) r.add_term(m, c);
    return r;
}

bool lf_equal(const LocalFunctional& a, const LocalFunctional& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("comparing functionals of different dimension");
    DiffPoly d = a.density - b.density;
    if (!arity0_part(d).is_zero()) return false;
    for (int color = 1; color <= d.dim(); ++color)
        if (!var_derivative_density(d, color).is_zero()) return false;
    return true;
}

LocalFunctional lf_partial_u(const LocalFunctional& h, int color) {
    return LocalFunctional(jet_derivative(h.density, color, 0));
}

DiffPoly substitute(const DiffPoly& f, const std::map<int, DiffPoly>& images) {
    for (const auto& [m, c] : f.terms())
        for (const auto& jf : m.jets)
            if (!images.count(jf.var.color))
                throw std::invalid_argument("substitute: no image for color " +
                                            std::to_string(jf.var.color));
    int dim = f.dim();
    if (!images.empty()) dim = images.begin()->second.dim();
    std::map<std::pair<int, int>, DiffPoly> dxcache; // (color, order) -> dx^order(image)
    std::function<const DiffPoly&(int, int)> image_jet = [&](int color, int order) -> const DiffPoly& {
        auto key = std::make_pair(color, order);
        auto it = dxcache.find(key);
        if (it != dxcache.end()) return it->second;
        if (order == 0)
            return dxcache.emplace(key, images.at(color)).first->second;
        return dxcache.emplace(key, dx(image_jet(color, order - 1))).first->second;
    };
    DiffPoly out(dim);
    for (const auto& [m, c] : f.terms()) {
        DiffPoly prod = DiffPoly::constant(dim, c);
        Mono he;
        he.hpow = m.hpow;
        he.epow = m.epow;
        DiffPoly hewrap(dim);
        hewrap.add_term(he, Scalar(1));
        prod *= hewrap;
        for (const auto& jf : m.jets) {
            const DiffPoly& g = image_jet(jf.var.color, jf.var.order);
            for (int p = 0; p < jf.power; ++p) prod *= g;
        }
        out += prod;
    }
    return out;
}

DiffPoly antiderivative(const DiffPoly& f) {
    if (!arity0_part(f).is_zero())
        throw NotExact("antiderivative: nonzero u-independent part");
    for (int color = 1; color <= f.dim(); ++color)
        if (!var_derivative_density(f, color).is_zero())
            throw NotExact("antiderivative: nonzero variational derivative in color " +
                           std::to_string(color));

    DiffPoly g(f.dim());
    DiffPoly r = f;
    long guard = 0;
    while (!r.is_zero()) {
        if (++guard > 200000)
            throw std::logic_error("antiderivative: no progress (internal error)");
        // highest jet variable by (order, color)
        bool found = false;
        JetVar top{0, 0};
        for (const auto& [m, c] : r.terms())
            for (const auto& jf : m.jets) {
                auto cand = std::make_pair(jf.var.order, jf.var.color);
                if (!found || cand > std::make_pair(top.order, top.color)) {
                    top = jf.var;
                    found = true;
                }
            }
        if (!found || top.order == 0)
            throw NotExact("antiderivative: input is not a total x-derivative");
        JetVar low{top.color, top.order - 1};
        DiffPoly step(f.dim());
        for (const auto& [m, c] : r.terms()) {
            const JetFactor* hit = nullptr;
            for (const auto& jf : m.jets)
                if (jf.var == top) { hit = &jf; break; }
            if (!hit) continue;
            if (hit->power != 1)
                throw NotExact("antiderivative: top jet variable occurs nonlinearly");
            Mono n;
            n.hpow = m.hpow;
            n.epow = m.epow;
            int lowcount = 0;
            for (const auto& jf : m.jets) {
                if (jf.var == top) continue;
                if (jf.var == low) lowcount = jf.power;
                n.jets.push_back(jf);
            }
            Mono bump;
            bump.jets.push_back({low, 1});
            step.add_term(n.times(bump), c.divided_by(lowcount + 1));
        }
        g += step;
        r -= dx(step);
    }
    return g;
}

DiffPoly truncate(const DiffPoly& f, const Truncation& t) {
    DiffPoly r(f.dim());
    TruncationScope scope(t);
    for (const auto& [m, c] : f.terms()) r.add_term(m, c);
    return r;
}

LocalFunctional truncate(const LocalFunctional& h, const Truncation& t) {
    return LocalFunctional(truncate(h.density, t));
}

bool is_real(const DiffPoly& f) {
    for (const auto& [m, c] : f.terms())
        if (!c.is_real()) return false;
    return true;
}

bool has_lambda_degree(const DiffPoly& f, int k) {
    for (const auto& [m, c] : f.terms())
        if (m.deg_dif() != 2 * m.hpow + k) return false;
    return true;
}

MissingOracleData::MissingOracleData(std::vector<std::string> ks)
    : std::runtime_error([&ks] {
          std::ostringstream os;
          os << "missing oracle data for " << ks.size() << " key(s):";
          for (const auto& k : ks) os << "\n  " << k;
          return os.str();
      }()),
      keys(std::move(ks)) {}

} // namespace drh
