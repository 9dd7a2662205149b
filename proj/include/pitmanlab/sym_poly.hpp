#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pitmanlab/distribution.hpp"
#include "pitmanlab/rational.hpp"

namespace pitmanlab {

// Multivariate polynomial over sample coordinates x_1..x_n with exact
// rational coefficients. Terms are keyed by dense exponent vectors; zero
// coefficients are never stored.
class SymPoly {
  public:
    using Key = std::vector<unsigned>;

    explicit SymPoly(std::size_t n_vars = 0) : n_vars_(n_vars) {}

    static SymPoly constant(std::size_t n_vars, Rat c);
    static SymPoly variable(std::size_t n_vars, std::size_t index); // 0-based

    std::size_t n_vars() const { return n_vars_; }
    const std::map<Key, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int total_degree() const;

    void add_term(const Key& k, const Rat& c);

    SymPoly operator+(const SymPoly& o) const;
    SymPoly operator-(const SymPoly& o) const;
    SymPoly operator*(const SymPoly& o) const;
    SymPoly operator*(const Rat& c) const;
    SymPoly pow(unsigned e) const;

    double eval(const double* x) const;
    double eval(const std::vector<double>& x) const { return eval(x.data()); }

    // Canonical sorted-term dump, e.g. "1/2*x1^2*x2 - x3".
    std::string str() const;

  private:
    std::size_t n_vars_;
    std::map<Key, Rat> terms_;
};

SymPoly mean_poly(std::size_t n);                 // (x_1+...+x_n)/n
SymPoly residual_poly(std::size_t n, std::size_t i); // x_i - xbar, 0-based i
SymPoly central_moment_poly(std::size_t n, unsigned j); // m_j = (1/n) sum (x_i-xbar)^j

// E p(X_1,...,X_n) for iid coordinates with the given raw moments.
Rat expect_iid_exact(const SymPoly& p, const MomentTable& moments);
double expect_iid(const SymPoly& p, const MomentTable& moments);
// E[a*b] without materializing the product polynomial.
Rat expect_product_exact(const SymPoly& a, const SymPoly& b, const MomentTable& moments);

// Spanning set of the polynomials of total degree <= k in the residuals:
// monomials in the n-1 free residuals r_1..r_{n-1} (r_n is dependent),
// graded-lex order, constant 1 first. Size C(n-1+k, k).
std::vector<SymPoly> residual_basis(std::size_t n, unsigned k);

struct GramSystem {
    std::vector<SymPoly> basis;
    std::vector<Rat> gram_exact; // row-major, symmetric
    std::vector<Rat> rhs_exact;
    Eigen::MatrixXd gram;
    Eigen::VectorXd rhs;

    std::size_t size() const { return basis.size(); }
};

GramSystem build_gram(const std::vector<SymPoly>& basis, const SymPoly& target,
                      const MomentTable& moments);

} // namespace pitmanlab
