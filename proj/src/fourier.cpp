#include "drh/fourier.hpp"

#include <algorithm>
#include <functional>

namespace drh {

int BKey::poly_degree() const {
    int d = 0;
    for (const auto& f : factors) d += f.expo;
    return d;
}

bool BKey::operator<(const BKey& o) const {
    if (hpow != o.hpow) return hpow < o.hpow;
    if (epow != o.epow) return epow < o.epow;
    if (factors.size() != o.factors.size()) return factors.size() < o.factors.size();
    return factors < o.factors;
}

BSeries::BSeries(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("BSeries dimension must be >= 1");
}

void BSeries::add_term(BKey k, const Scalar& c) {
    if (c.is_zero()) return;
    std::sort(k.factors.begin(), k.factors.end());
    if (!active_truncation().keeps(k.hpow, k.epow, k.arity())) {
        note_truncation_drop();
        return;
    }
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(std::move(k), c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

BSeries& BSeries::operator+=(const BSeries& o) {
    if (dim_ != o.dim_) throw DimensionMismatch("adding mode series of different dimension");
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

BSeries& BSeries::operator-=(const BSeries& o) {
    if (dim_ != o.dim_) throw DimensionMismatch("subtracting mode series of different dimension");
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

BSeries& BSeries::scale(const Scalar& c) {
    if (c.is_zero()) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}

// ---------------------------------------------------------------- T0 and Q

BSeries t0(const LocalFunctional& h) {
    BSeries out(h.dim());
    for (const auto& [m, c] : h.density.terms()) {
        int k = m.arity();
        if (k == 1) continue; // the zero mode of a single nonzero-mode letter is empty
        BKey key;
        key.hpow = m.hpow;
        key.epow = m.epow;
        for (const auto& jf : m.jets)
            for (int p = 0; p < jf.power; ++p)
                key.factors.push_back({jf.var.color, jf.var.order});
        out.add_term(std::move(key), c * i_pow(m.deg_dif()));
    }
    return out;
}

LocalFunctional q_inverse(const BSeries& f) {
    DiffPoly density(f.dim());
    for (const auto& [key, c] : f.terms()) {
        if (key.arity() == 1)
            throw HasLinearBlock("q_inverse: arity-1 block present");
        Mono m;
        m.hpow = key.hpow;
        m.epow = key.epow;
        for (const auto& bf : key.factors) {
            Mono one;
            one.jets.push_back({JetVar{bf.color, bf.expo}, 1});
            m = m.times(one);
        }
        density.add_term(m, c * neg_i_pow(key.poly_degree()));
    }
    LocalFunctional out(std::move(density));
    if (!b_equal(t0(out), f))
        throw std::logic_error("q_inverse: round-trip through t0 failed (internal error)");
    return out;
}

// ------------------------------------------------- canonical block reduction

namespace detail {

// iterate over compositions (c_1..c_m) of p with the multinomial coefficient p!/prod c_i!
void for_each_composition(int p, int m,
                          const std::function<void(const std::vector<int>&, const Rational&)>& fn) {
    std::vector<int> comp(static_cast<std::size_t>(m), 0);
    std::function<void(int, int, Rational)> rec = [&](int idx, int left, Rational coef) {
        if (idx == m - 1) {
            comp[static_cast<std::size_t>(idx)] = left;
            fn(comp, coef);
            return;
        }
        Rational c = coef;
        for (int take = 0; take <= left; ++take) {
            comp[static_cast<std::size_t>(idx)] = take;
            rec(idx + 1, left - take, c);
            // choose(left, take+1) = choose(left, take) * (left-take)/(take+1)
            c = c * Rational(left - take) / Rational(take + 1);
        }
    };
    if (m <= 0) {
        if (p == 0) fn(comp, Rational(1));
        return;
    }
    rec(0, p, Rational(1));
}

using OrdKey = std::vector<int>;            // exponent per slot
using OrdPoly = std::map<OrdKey, Scalar>;   // ordered colored polynomial

// sum over bijections position -> slot consistent with slot colors
void accumulate_assignments(const std::vector<BFactor>& factors,
                            const std::vector<int>& slot_colors, const Scalar& c,
                            OrdPoly& out) {
    const std::size_t k = factors.size();
    std::vector<int> exps(k, 0);
    std::vector<bool> used(k, false);
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == k) {
            auto it = out.find(exps);
            if (it == out.end())
                out.emplace(exps, c);
            else {
                it->second += c;
                if (it->second.is_zero()) out.erase(it);
            }
            return;
        }
        for (std::size_t s = 0; s < k; ++s) {
            if (used[s] || slot_colors[s] != factors[pos].color) continue;
            used[s] = true;
            exps[s] = factors[pos].expo;
            rec(pos + 1);
            used[s] = false;
        }
    };
    rec(0);
}

// substitute z_k := -(z_1 + ... + z_{k-1}); zero result means the polynomial
// lies in the zero-sum ideal
bool vanishes_after_zero_sum_subst(const OrdPoly& p, std::size_t k) {
    std::map<OrdKey, Scalar> acc;
    for (const auto& [exps, c] : p) {
        int tail = exps[k - 1];
        Scalar sign = (tail % 2 == 0) ? Scalar(1) : Scalar(-1);
        for_each_composition(tail, static_cast<int>(k) - 1,
                             [&](const std::vector<int>& comp, const Rational& multinom) {
                                 OrdKey key(exps.begin(), exps.end() - 1);
                                 for (std::size_t i = 0; i + 1 < k; ++i) key[i] += comp[i];
                                 Scalar add = c * sign * Scalar(multinom);
                                 auto it = acc.find(key);
                                 if (it == acc.end())
                                     acc.emplace(std::move(key), add);
                                 else {
                                     it->second += add;
                                     if (it->second.is_zero()) acc.erase(it);
                                 }
                             });
    }
    return acc.empty();
}

} // namespace detail

bool b_equal(const BSeries& a, const BSeries& b) {
    if (a.dim() != b.dim()) throw DimensionMismatch("comparing mode series of different dimension");
    BSeries d = a;
    d -= b;
    // group the leftover terms by (hpow, epow, sorted color word)
    struct Group {
        std::vector<int> colors;
        std::vector<std::pair<std::vector<BFactor>, Scalar>> items;
    };
    std::map<std::tuple<int, int, std::vector<int>>, Group> groups;
    for (const auto& [key, c] : d.terms()) {
        if (key.arity() == 0) return false; // constants cancel exactly or not at all
        if (key.arity() == 1) continue;     // empty sums, identically zero
        std::vector<int> colors;
        colors.reserve(key.factors.size());
        for (const auto& f : key.factors) colors.push_back(f.color);
        auto& g = groups[{key.hpow, key.epow, colors}];
        g.colors = colors;
        g.items.emplace_back(key.factors, c);
    }
    for (const auto& [gk, g] : groups) {
        detail::OrdPoly poly;
        for (const auto& [factors, c] : g.items)
            detail::accumulate_assignments(factors, g.colors, c, poly);
        if (!detail::vanishes_after_zero_sum_subst(poly, g.colors.size()))
            return false;
    }
    return true;
}

// ---------------------------------------------------------------- Z machinery

ZSeries z_extend(const BSeries& f) { return ZSeries{f}; }

BSeries z_partial_p0(const ZSeries& f, int color) {
    BSeries out(f.data.dim());
    for (const auto& [key, c] : f.data.terms()) {
        for (std::size_t j = 0; j < key.factors.size(); ++j) {
            // only mode-0 letters with zero weight survive a^expo at a = 0
            if (key.factors[j].color != color || key.factors[j].expo != 0) continue;
            BKey nk;
            nk.hpow = key.hpow;
            nk.epow = key.epow;
            for (std::size_t t = 0; t < key.factors.size(); ++t)
                if (t != j) nk.factors.push_back(key.factors[t]);
            out.add_term(std::move(nk), c);
        }
    }
    return out;
}

// ---------------------------------------------------------------- bracket

BSeries p_bracket(const BSeries& f, const BSeries& g, const ScalarMatrix& eta) {
    if (f.dim() != g.dim()) throw DimensionMismatch("bracket of mode series of different dimension");
    const int n = f.dim();
    if (static_cast<int>(eta.size()) != n)
        throw DimensionMismatch("eta size does not match dimension");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(eta[i].size()) != n)
            throw DimensionMismatch("eta is not square");
        for (int j = 0; j < n; ++j)
            if (eta[i][j] != eta[j][i]) throw NonSymmetric("eta is not symmetric");
    }

    BSeries out(n);
    for (const auto& [fk, fc] : f.terms()) {
        if (fk.arity() < 2) continue;
        for (const auto& [gk, gc] : g.terms()) {
            if (gk.arity() < 2) continue;
            for (std::size_t j = 0; j < fk.factors.size(); ++j) {
                const BFactor& a = fk.factors[j];
                for (std::size_t l = 0; l < gk.factors.size(); ++l) {
                    const BFactor& b = gk.factors[l];
                    const Rational& w = eta[a.color - 1][b.color - 1];
                    if (w == 0) continue;

                    std::vector<BFactor> rest_f;
                    for (std::size_t t = 0; t < fk.factors.size(); ++t)
                        if (t != j) rest_f.push_back(fk.factors[t]);
                    std::vector<BFactor> rest_g;
                    for (std::size_t t = 0; t < gk.factors.size(); ++t)
                        if (t != l) rest_g.push_back(gk.factors[t]);

                    // contracted mode m enters as i * m^(e_a + e_b + 1) * (-1)^{e_b},
                    // then m = -(sum of the remaining f-modes) is expanded
                    int power = a.expo + b.expo + 1;
                    Scalar base = Scalar::unit_i() * Scalar(w) * fc * gc;
                    if (b.expo % 2 == 1) base = -base;
                    if (power % 2 == 1) base = -base; // sign of (-1)^power from m = -sum

                    detail::for_each_composition(
                        power, static_cast<int>(rest_f.size()),
                        [&](const std::vector<int>& comp, const Rational& multinom) {
                            BKey nk;
                            nk.hpow = fk.hpow + gk.hpow;
                            nk.epow = fk.epow + gk.epow;
                            nk.factors = rest_f;
                            for (std::size_t t = 0; t < nk.factors.size(); ++t)
                                nk.factors[t].expo += comp[t];
                            nk.factors.insert(nk.factors.end(), rest_g.begin(), rest_g.end());
                            out.add_term(std::move(nk), base * Scalar(multinom));
                        });
                }
            }
        }
    }
    return out;
}

} // namespace drh
