#ifndef DRH_POISSON_HPP
#define DRH_POISSON_HPP

#include "drh/diffpoly.hpp"
#include "drh/fourier.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace drh {

// one summand f * dx^dxpow of a matrix entry; hbar powers live inside f
struct OpTerm {
    DiffPoly coeff;
    int dxpow = 0;
};

// matrix of differential operators sum_j f_j dx^j
class HamOperator {
  public:
    explicit HamOperator(int dim = 1);

    int dim() const { return dim_; }
    const std::vector<OpTerm>& entry(int row, int col) const;
    void add_entry_term(int row, int col, DiffPoly coeff, int dxpow);

    // apply entry (row,col) to a differential polynomial
    DiffPoly apply_entry(int row, int col, const DiffPoly& f) const;
    // (K grad)^row = sum_col K^{row,col} grad[col]
    std::vector<DiffPoly> apply(const std::vector<DiffPoly>& grad) const;

  private:
    int dim_;
    std::vector<std::vector<std::vector<OpTerm>>> entries_;
};

HamOperator make_eta_dx(const ScalarMatrix& eta);

LocalFunctional bracket(const LocalFunctional& g, const LocalFunctional& h, const HamOperator& K);

std::vector<DiffPoly> flows(const LocalFunctional& h, const HamOperator& K);

// {{f,g},h} + {{g,h},f} + {{h,f},g}
LocalFunctional jacobi_defect(const LocalFunctional& f, const LocalFunctional& g,
                              const LocalFunctional& h, const HamOperator& K);

// violations of the extended degree rule deg_dif f_{i,j} = 2i - j + 1
struct OperatorReport {
    std::vector<std::string> violations;
    bool clean() const { return violations.empty(); }
};
OperatorReport validate_operator(const HamOperator& K);

// derivative of the functional h along the evolution u^c_t = rhs[c-1]
LocalFunctional lie_derivative(const LocalFunctional& h, const std::vector<DiffPoly>& rhs);

struct EvolutionSystem {
    int dim = 1;
    // time label (alpha, d) -> right-hand sides indexed by color
    std::map<std::pair<int, int>, std::vector<DiffPoly>> rhs;
};

ScalarMatrix invert_matrix(const ScalarMatrix& m); // exact Gauss-Jordan

} // namespace drh

#endif
