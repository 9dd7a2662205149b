#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "pitmanlab/errors.hpp"

namespace pitmanlab {

// Observation vector, univariate or s-variate. Points are stored flat,
// row-major: observation i occupies data[i*dim .. i*dim+dim).
struct Sample {
    std::size_t dim = 1;
    std::vector<double> data;

    Sample() = default;
    Sample(std::vector<double> values) : dim(1), data(std::move(values)) { validate(); }
    Sample(std::size_t s, std::vector<double> flat) : dim(s), data(std::move(flat)) { validate(); }

    std::size_t size() const { return data.size() / dim; }
    double x(std::size_t i) const { return data[i * dim]; }
    const double* point(std::size_t i) const { return data.data() + i * dim; }

    double mean() const {
        double s = 0.0;
        for (double v : data) s += v;
        return s / static_cast<double>(data.size());
    }

    Eigen::VectorXd mean_vec() const {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t d = 0; d < dim; ++d) m[static_cast<Eigen::Index>(d)] += point(i)[d];
        return m / static_cast<double>(n);
    }

    void validate() const {
        if (dim == 0 || data.empty() || data.size() % dim != 0)
            throw ShapeError("sample must be nonempty with all points of equal dimension");
    }
};

enum class Method { exact_enumeration, monte_carlo, closed_form };

inline const char* method_name(Method m) {
    switch (m) {
        case Method::exact_enumeration: return "exact_enumeration";
        case Method::monte_carlo: return "monte_carlo";
        case Method::closed_form: return "closed_form";
    }
    return "?";
}

// Scalar variance estimate with its provenance.
struct VarianceEstimate {
    double value = 0.0;
    double stderr_ = 0.0; // 0 unless method == monte_carlo
    double ci_low = 0.0;
    double ci_high = 0.0;
    Method method = Method::closed_form;
    std::int64_t replications = 0;

    static VarianceEstimate exact(double v, Method m, std::int64_t reps = 0) {
        return VarianceEstimate{v, 0.0, v, v, m, reps};
    }

    nlohmann::json to_json() const {
        return nlohmann::json{{"value", value},
                              {"stderr", stderr_},
                              {"ci", {ci_low, ci_high}},
                              {"method", method_name(method)},
                              {"reps", replications}};
    }
};

// Covariance-matrix analog for s-variate estimators.
struct CovarianceEstimate {
    Eigen::MatrixXd value;
    double stderr_norm = 0.0;
    Method method = Method::closed_form;
    std::int64_t replications = 0;
};

} // namespace pitmanlab
