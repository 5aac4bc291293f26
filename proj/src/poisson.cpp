#include "drh/poisson.hpp"

#include "drh/render.hpp"

#include <sstream>

namespace drh {

HamOperator::HamOperator(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("operator dimension must be >= 1");
    entries_.assign(static_cast<std::size_t>(dim),
                    std::vector<std::vector<OpTerm>>(static_cast<std::size_t>(dim)));
}

const std::vector<OpTerm>& HamOperator::entry(int row, int col) const {
    if (row < 1 || row > dim_ || col < 1 || col > dim_)
        throw DimensionMismatch("operator entry out of range");
    return entries_[static_cast<std::size_t>(row - 1)][static_cast<std::size_t>(col - 1)];
}

void HamOperator::add_entry_term(int row, int col, DiffPoly coeff, int dxpow) {
    if (row < 1 || row > dim_ || col < 1 || col > dim_)
        throw DimensionMismatch("operator entry out of range");
    if (coeff.dim() != dim_)
        throw DimensionMismatch("operator coefficient dimension mismatch");
    if (dxpow < 0) throw std::invalid_argument("negative dx power");
    if (coeff.is_zero()) return;
    entries_[static_cast<std::size_t>(row - 1)][static_cast<std::size_t>(col - 1)].push_back(
        {std::move(coeff), dxpow});
}

DiffPoly HamOperator::apply_entry(int row, int col, const DiffPoly& f) const {
    DiffPoly out(dim_);
    for (const auto& t : entry(row, col)) out += t.coeff * dx_pow(f, t.dxpow);
    return out;
}

std::vector<DiffPoly> HamOperator::apply(const std::vector<DiffPoly>& grad) const {
    if (static_cast<int>(grad.size()) != dim_)
        throw DimensionMismatch("gradient size does not match operator dimension");
    std::vector<DiffPoly> out;
    out.reserve(static_cast<std::size_t>(dim_));
    for (int row = 1; row <= dim_; ++row) {
        DiffPoly acc(dim_);
        for (int col = 1; col <= dim_; ++col)
            acc += apply_entry(row, col, grad[static_cast<std::size_t>(col - 1)]);
        out.push_back(std::move(acc));
    }
    return out;
}

HamOperator make_eta_dx(const ScalarMatrix& eta) {
    const int n = static_cast<int>(eta.size());
    if (n < 1) throw std::invalid_argument("empty eta");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(eta[i].size()) != n) throw DimensionMismatch("eta is not square");
        for (int j = 0; j < n; ++j)
            if (eta[i][j] != eta[j][i]) throw NonSymmetric("eta is not symmetric");
    }
    HamOperator K(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            K.add_entry_term(i, j, DiffPoly::constant(n, Scalar(eta[i - 1][j - 1])), 1);
    return K;
}

static std::vector<DiffPoly> gradient(const LocalFunctional& h) {
    std::vector<DiffPoly> g;
    g.reserve(static_cast<std::size_t>(h.dim()));
    for (int color = 1; color <= h.dim(); ++color) g.push_back(var_derivative(h, color));
    return g;
}

LocalFunctional bracket(const LocalFunctional& g, const LocalFunctional& h, const HamOperator& K) {
    if (g.dim() != h.dim() || g.dim() != K.dim())
        throw DimensionMismatch("bracket dimension mismatch");
    auto gg = gradient(g);
    auto kh = K.apply(gradient(h));
    DiffPoly integrand(g.dim());
    for (int c = 0; c < g.dim(); ++c)
        integrand += gg[static_cast<std::size_t>(c)] * kh[static_cast<std::size_t>(c)];
    return LocalFunctional(std::move(integrand));
}

std::vector<DiffPoly> flows(const LocalFunctional& h, const HamOperator& K) {
    if (h.dim() != K.dim()) throw DimensionMismatch("flow dimension mismatch");
    return K.apply(gradient(h));
}

LocalFunctional jacobi_defect(const LocalFunctional& f, const LocalFunctional& g,
                              const LocalFunctional& h, const HamOperator& K) {
    LocalFunctional s = bracket(bracket(f, g, K), h, K);
    s += bracket(bracket(g, h, K), f, K);
    s += bracket(bracket(h, f, K), g, K);
    return s;
}

OperatorReport validate_operator(const HamOperator& K) {
    OperatorReport rep;
    for (int row = 1; row <= K.dim(); ++row)
        for (int col = 1; col <= K.dim(); ++col)
            for (const auto& t : K.entry(row, col))
                for (const auto& [m, c] : t.coeff.terms()) {
                    int want = 2 * m.hpow - t.dxpow + 1;
                    if (m.deg_dif() != want) {
                        std::ostringstream os;
                        os << "entry (" << row << "," << col << ") dx^" << t.dxpow << ": term "
                           << to_plain(m, K.dim()) << " has deg_dif " << m.deg_dif()
                           << ", rule requires " << want;
                        rep.violations.push_back(os.str());
                    }
                }
    return rep;
}

LocalFunctional lie_derivative(const LocalFunctional& h, const std::vector<DiffPoly>& rhs) {
    if (static_cast<int>(rhs.size()) != h.dim())
        throw DimensionMismatch("lie_derivative dimension mismatch");
    DiffPoly acc(h.dim());
    for (int color = 1; color <= h.dim(); ++color) {
        int top = max_jet_order(h.density, color);
        for (int n = 0; n <= top; ++n)
            acc += jet_derivative(h.density, color, n) *
                   dx_pow(rhs[static_cast<std::size_t>(color - 1)], n);
    }
    return LocalFunctional(std::move(acc));
}

ScalarMatrix invert_matrix(const ScalarMatrix& m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw DimensionMismatch("matrix is not square");
    ScalarMatrix a = m;
    ScalarMatrix inv(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw ValidationError("matrix is singular");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rational p = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

} // namespace drh
