#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "pitmanlab/errors.hpp"
#include "pitmanlab/rational.hpp"
#include "pitmanlab/rng.hpp"
#include "pitmanlab/sample.hpp"

namespace pitmanlab {

class DistributionSpec;

enum class Family {
    gaussian,
    uniform,
    exponential,
    laplace,
    cauchy,
    discrete_lattice,
    convolution,
    scaled,
    shifted,
    product
};

struct GaussianParams {
    double mean;
    double sigma; // > 0
};
struct UniformParams {
    double a;
    double b; // a < b
};
// Exponential(scale): density (1/scale)*exp(-x/scale) on x >= 0, mean = scale.
struct ExponentialParams {
    double scale;
};
struct LaplaceParams {
    double scale;
};
struct CauchyParams {
    double gamma;
};
// Finite pmf on a common lattice. dim > 1 stores s-variate support points
// flat (row-major); each coordinate must itself live on a lattice.
struct LatticeParams {
    std::size_t dim = 1;
    std::vector<double> points; // n_points * dim, strictly increasing for dim==1
    std::vector<double> probs;  // same n_points, nonnegative, sums to 1

    std::size_t count() const { return probs.size(); }
    const double* point(std::size_t i) const { return points.data() + i * dim; }
    double scalar_point(std::size_t i) const { return points[i]; }
};
struct ConvolutionParams {
    std::vector<DistributionSpec> children;
};
struct ScaledParams {
    std::vector<DistributionSpec> base; // exactly one element
    double lambda;                      // any real, 0 degenerates to a point mass
};
struct ShiftedParams {
    std::vector<DistributionSpec> base; // exactly one element
    double offset;
};
struct ProductParams {
    std::vector<DistributionSpec> components; // univariate components
};

struct DistNode;

// Immutable, cheaply copyable description of a population. All operations
// are free functions; specs are safe to share across threads.
class DistributionSpec {
  public:
    DistributionSpec() = default;
    explicit DistributionSpec(std::shared_ptr<const DistNode> node) : node_(std::move(node)) {}

    Family family() const;
    std::size_t dim() const;
    const DistNode& node() const { return *node_; }
    bool valid() const { return node_ != nullptr; }

    template <class T> const T& get() const;
    template <class T> const T* get_if() const;

  private:
    std::shared_ptr<const DistNode> node_;
};

struct DistNode {
    std::variant<GaussianParams, UniformParams, ExponentialParams, LaplaceParams, CauchyParams,
                 LatticeParams, ConvolutionParams, ScaledParams, ShiftedParams, ProductParams>
        v;
};

template <class T> const T& DistributionSpec::get() const { return std::get<T>(node_->v); }
template <class T> const T* DistributionSpec::get_if() const { return std::get_if<T>(&node_->v); }

// --- constructors -----------------------------------------------------------

DistributionSpec gaussian(double mean, double sigma);
DistributionSpec uniform(double a, double b);
DistributionSpec exponential(double scale);
DistributionSpec laplace(double scale);
DistributionSpec cauchy(double gamma);
DistributionSpec discrete_lattice(std::vector<double> points, std::vector<double> probs);
DistributionSpec discrete_lattice_multivariate(std::size_t dim, std::vector<double> flat_points,
                                               std::vector<double> probs);
DistributionSpec convolve(std::vector<DistributionSpec> children);
DistributionSpec scaled(DistributionSpec base, double lambda);
DistributionSpec shifted(DistributionSpec base, double offset);
DistributionSpec product_multivariate(std::vector<DistributionSpec> components);

// Midpoint discretization of a univariate density onto a K-point lattice
// (support truncated for unbounded families, probabilities renormalized).
DistributionSpec discretize(const DistributionSpec& spec, std::size_t k_points);

// --- exact moments ----------------------------------------------------------

struct MomentTable {
    std::vector<Rat> raw; // raw[0] == 1

    int order_limit() const { return static_cast<int>(raw.size()) - 1; }
    const Rat& raw_exact(int j) const;
    double raw_moment(int j) const { return to_double(raw_exact(j)); }
    Rat central_exact(int j) const; // E (X - mu)^j via binomial expansion
    Rat variance_exact() const { return central_exact(2); }
    double variance() const { return to_double(variance_exact()); }
};

MomentTable moment_table(const DistributionSpec& spec, int order_limit);
Rat raw_moment_exact(const DistributionSpec& spec, int j);
double raw_moment(const DistributionSpec& spec, int j);
double variance_of(const DistributionSpec& spec);
double mean_of(const DistributionSpec& spec);

// --- densities and friends --------------------------------------------------

bool has_density(const DistributionSpec& spec);
double density(const DistributionSpec& spec, double x);
double cdf(const DistributionSpec& spec, double x);
// Support interval [lo, hi] of a univariate spec; +-inf for unbounded tails.
std::pair<double, double> support(const DistributionSpec& spec);
// Locations where the density is continuous but not smooth (integration hints).
std::vector<double> density_breakpoints(const DistributionSpec& spec);

double fisher_information(const DistributionSpec& spec);
// Fisher score J(x) = -f'(x)/f(x).
double score(const DistributionSpec& spec, double x);

// --- sampling ---------------------------------------------------------------

double draw1(const DistributionSpec& spec, SeededStream& stream);
void draw_point(const DistributionSpec& spec, SeededStream& stream, double* out);
Sample sample(const DistributionSpec& spec, SeededStream& stream, std::size_t count);

// --- structure --------------------------------------------------------------

// Collapses analytically known structure: nested scales/shifts, Gaussian and
// Cauchy convolutions, lattice convolutions, zero-scale degeneracies.
DistributionSpec simplify(const DistributionSpec& spec);
bool is_symmetric_zero(const DistributionSpec& spec);
// Self-decomposable noise registry: Gaussian and Cauchy (stable laws);
// Uniform is not self-decomposable and is rejected.
bool is_self_decomposable(const DistributionSpec& spec);
std::string family_name(Family f);

// --- serialization ----------------------------------------------------------

nlohmann::json to_json(const DistributionSpec& spec);
DistributionSpec spec_from_json(const nlohmann::json& j);

} // namespace pitmanlab
