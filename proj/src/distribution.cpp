#include "pitmanlab/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "pitmanlab/quadrature.hpp"

namespace pitmanlab {

namespace {

template <class T> DistributionSpec make_spec(T params) {
    return DistributionSpec(std::make_shared<const DistNode>(DistNode{std::move(params)}));
}

// Euclidean gcd on positive reals; returns 0 when the inputs are
// incommensurable at the given tolerance.
double dgcd(double a, double b, double eps) {
    a = std::abs(a);
    b = std::abs(b);
    if (a < b) std::swap(a, b);
    while (b > eps) {
        double r = std::fmod(a, b);
        if (r > b - eps) r = 0.0;
        a = b;
        b = r;
    }
    return a;
}

void validate_lattice_axis(std::vector<double> values, double span) {
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    if (values.size() < 2) return;
    const double eps = 1e-9 * std::max(1.0, span);
    double g = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) g = dgcd(g, values[i] - values[0], eps);
    if (g <= eps) throw DomainError("lattice points are not commensurable");
    for (std::size_t i = 1; i < values.size(); ++i) {
        const double d = values[i] - values[0];
        if (std::abs(d - std::round(d / g) * g) > eps)
            throw DomainError("lattice points do not share a common step");
    }
}

double odd_double_factorial(int m) { // 1*3*...*m for odd m
    double out = 1.0;
    for (int i = 3; i <= m; i += 2) out *= i;
    return out;
}

Rat rat_factorial(int j) {
    Rat out = 1;
    for (int i = 2; i <= j; ++i) out *= i;
    return out;
}

double phi_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

// Density of the sum of k iid Uniform(a,b) variables (scaled Irwin-Hall).
double uniform_sum_density(int k, double a, double b, double x) {
    const double w = b - a;
    const double s = (x - k * a) / w; // standardized to sum of k U(0,1)
    if (s <= 0.0 || s >= k) return 0.0;
    double acc = 0.0;
    double comb = 1.0; // C(k, j)
    double sign = 1.0;
    for (int j = 0; j <= static_cast<int>(s); ++j) {
        acc += sign * comb * std::pow(s - j, k - 1);
        sign = -sign;
        comb = comb * (k - j) / (j + 1);
    }
    double fact = 1.0;
    for (int i = 2; i < k; ++i) fact *= i;
    return acc / (fact * w);
}

const char* kFamilyNames[] = {"gaussian", "uniform",     "exponential", "laplace", "cauchy",
                              "discrete_lattice", "convolution", "scaled",      "shifted", "product"};

} // namespace

Family DistributionSpec::family() const {
    return static_cast<Family>(node_->v.index());
}

std::size_t DistributionSpec::dim() const {
    switch (family()) {
        case Family::discrete_lattice: return get<LatticeParams>().dim;
        case Family::product: return get<ProductParams>().components.size();
        case Family::scaled: return get<ScaledParams>().base[0].dim();
        case Family::shifted: return get<ShiftedParams>().base[0].dim();
        default: return 1;
    }
}

std::string family_name(Family f) { return kFamilyNames[static_cast<int>(f)]; }

// --- constructors -----------------------------------------------------------

DistributionSpec gaussian(double mean, double sigma) {
    if (!(sigma > 0)) throw DomainError("gaussian sigma must be > 0");
    return make_spec(GaussianParams{mean, sigma});
}

DistributionSpec uniform(double a, double b) {
    if (!(a < b)) throw DomainError("uniform requires a < b");
    return make_spec(UniformParams{a, b});
}

DistributionSpec exponential(double scale) {
    if (!(scale > 0)) throw DomainError("exponential scale must be > 0");
    return make_spec(ExponentialParams{scale});
}

DistributionSpec laplace(double scale) {
    if (!(scale > 0)) throw DomainError("laplace scale must be > 0");
    return make_spec(LaplaceParams{scale});
}

DistributionSpec cauchy(double gamma) {
    if (!(gamma > 0)) throw DomainError("cauchy gamma must be > 0");
    return make_spec(CauchyParams{gamma});
}

DistributionSpec discrete_lattice_multivariate(std::size_t dim, std::vector<double> flat_points,
                                               std::vector<double> probs) {
    if (dim == 0 || probs.empty() || flat_points.size() != probs.size() * dim)
        throw ShapeError("lattice points/probs size mismatch");
    double total = 0.0;
    for (double p : probs) {
        if (p < 0) throw DomainError("lattice probabilities must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw DomainError("lattice probabilities must sum to 1");

    // Drop zero-probability atoms.
    std::vector<std::pair<std::vector<double>, double>> atoms;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] == 0.0) continue;
        atoms.emplace_back(
            std::vector<double>(flat_points.begin() + static_cast<long>(i * dim),
                                flat_points.begin() + static_cast<long>((i + 1) * dim)),
            probs[i]);
    }
    if (atoms.empty()) throw DomainError("lattice needs at least one atom with positive mass");
    std::sort(atoms.begin(), atoms.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t i = 1; i < atoms.size(); ++i)
        if (atoms[i].first == atoms[i - 1].first) throw DomainError("duplicate lattice point");

    LatticeParams lp;
    lp.dim = dim;
    for (auto& [pt, p] : atoms) {
        lp.points.insert(lp.points.end(), pt.begin(), pt.end());
        lp.probs.push_back(p);
    }
    for (std::size_t d = 0; d < dim; ++d) {
        std::vector<double> axis;
        double lo = lp.points[d], hi = lp.points[d];
        for (std::size_t i = 0; i < lp.count(); ++i) {
            axis.push_back(lp.point(i)[d]);
            lo = std::min(lo, axis.back());
            hi = std::max(hi, axis.back());
        }
        validate_lattice_axis(std::move(axis), hi - lo);
    }
    return make_spec(std::move(lp));
}

DistributionSpec discrete_lattice(std::vector<double> points, std::vector<double> probs) {
    return discrete_lattice_multivariate(1, std::move(points), std::move(probs));
}

DistributionSpec convolve(std::vector<DistributionSpec> children) {
    if (children.empty()) throw ShapeError("convolution needs at least one child");
    for (const auto& c : children)
        if (c.dim() != 1) throw CapabilityError("convolution children must be univariate");
    if (children.size() == 1) return children[0];
    return make_spec(ConvolutionParams{std::move(children)});
}

DistributionSpec scaled(DistributionSpec base, double lambda) {
    return make_spec(ScaledParams{{std::move(base)}, lambda});
}

DistributionSpec shifted(DistributionSpec base, double offset) {
    return make_spec(ShiftedParams{{std::move(base)}, offset});
}

DistributionSpec product_multivariate(std::vector<DistributionSpec> components) {
    if (components.size() < 2) throw ShapeError("product needs at least two components");
    for (const auto& c : components)
        if (c.dim() != 1) throw CapabilityError("product components must be univariate");
    return make_spec(ProductParams{std::move(components)});
}

// --- structure --------------------------------------------------------------

namespace {

DistributionSpec point_mass(double x) { return discrete_lattice({x}, {1.0}); }

bool is_point_mass(const DistributionSpec& s, double* value) {
    if (const auto* lp = s.get_if<LatticeParams>(); lp && lp->dim == 1 && lp->count() == 1) {
        if (value) *value = lp->points[0];
        return true;
    }
    return false;
}

DistributionSpec conv_two_lattices(const LatticeParams& a, const LatticeParams& b) {
    if (a.dim != 1 || b.dim != 1)
        throw CapabilityError("convolution of multivariate lattices is not supported");
    const double span = (a.points.back() - a.points.front()) + (b.points.back() - b.points.front());
    const double eps = 1e-9 * std::max(1.0, span);
    // Common grid step across both supports and the cross differences.
    double g = 0.0;
    for (std::size_t i = 1; i < a.count(); ++i) g = dgcd(g, a.points[i] - a.points[0], eps);
    for (std::size_t i = 1; i < b.count(); ++i) g = dgcd(g, b.points[i] - b.points[0], eps);
    const double origin = a.points[0] + b.points[0];
    std::map<long long, double> acc;
    if (g <= eps) {
        if (a.count() > 1 && b.count() > 1)
            throw DomainError("incommensurable lattice steps in convolution");
        g = 1.0; // at least one side is a point mass; any step works
    }
    for (std::size_t i = 0; i < a.count(); ++i)
        for (std::size_t j = 0; j < b.count(); ++j) {
            const double v = a.points[i] + b.points[j];
            const long long key = std::llround((v - origin) / g);
            if (std::abs(v - (origin + static_cast<double>(key) * g)) > eps)
                throw DomainError("incommensurable lattice steps in convolution");
            acc[key] += a.probs[i] * b.probs[j];
        }
    std::vector<double> pts, ps;
    for (auto& [k, p] : acc) {
        pts.push_back(origin + static_cast<double>(k) * g);
        ps.push_back(p);
    }
    // Renormalize away accumulated rounding.
    double tot = 0.0;
    for (double p : ps) tot += p;
    for (double& p : ps) p /= tot;
    return discrete_lattice(std::move(pts), std::move(ps));
}

} // namespace

DistributionSpec simplify(const DistributionSpec& spec) {
    switch (spec.family()) {
        case Family::gaussian:
        case Family::uniform:
        case Family::exponential:
        case Family::laplace:
        case Family::cauchy:
        case Family::discrete_lattice: return spec;

        case Family::shifted: {
            const auto& p = spec.get<ShiftedParams>();
            DistributionSpec base = simplify(p.base[0]);
            double off = p.offset;
            if (const auto* sh = base.get_if<ShiftedParams>()) {
                off += sh->offset;
                base = sh->base[0];
            }
            if (off == 0.0) return base;
            switch (base.family()) {
                case Family::gaussian: {
                    const auto& g = base.get<GaussianParams>();
                    return gaussian(g.mean + off, g.sigma);
                }
                case Family::uniform: {
                    const auto& u = base.get<UniformParams>();
                    return uniform(u.a + off, u.b + off);
                }
                case Family::discrete_lattice: {
                    const auto& l = base.get<LatticeParams>();
                    if (l.dim != 1) break;
                    std::vector<double> pts = l.points;
                    for (double& v : pts) v += off;
                    return discrete_lattice(std::move(pts), l.probs);
                }
                default: break;
            }
            return shifted(base, off);
        }

        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            DistributionSpec base = simplify(p.base[0]);
            double lam = p.lambda;
            if (lam == 0.0) return point_mass(0.0);
            if (const auto* sc = base.get_if<ScaledParams>()) {
                lam *= sc->lambda;
                base = simplify(sc->base[0]);
            }
            if (const auto* sh = base.get_if<ShiftedParams>())
                return simplify(shifted(scaled(sh->base[0], lam), lam * sh->offset));
            if (lam == 1.0) return base;
            switch (base.family()) {
                case Family::gaussian: {
                    const auto& g = base.get<GaussianParams>();
                    return gaussian(lam * g.mean, std::abs(lam) * g.sigma);
                }
                case Family::cauchy: return cauchy(std::abs(lam) * base.get<CauchyParams>().gamma);
                case Family::laplace: return laplace(std::abs(lam) * base.get<LaplaceParams>().scale);
                case Family::uniform: {
                    const auto& u = base.get<UniformParams>();
                    return uniform(std::min(lam * u.a, lam * u.b), std::max(lam * u.a, lam * u.b));
                }
                case Family::exponential:
                    if (lam > 0) return exponential(lam * base.get<ExponentialParams>().scale);
                    break;
                case Family::discrete_lattice: {
                    const auto& l = base.get<LatticeParams>();
                    std::vector<double> pts = l.points;
                    for (double& v : pts) v *= lam;
                    if (l.dim == 1 && lam < 0) {
                        std::vector<double> ps(l.probs.rbegin(), l.probs.rend());
                        std::reverse(pts.begin(), pts.end());
                        return discrete_lattice(std::move(pts), std::move(ps));
                    }
                    return discrete_lattice_multivariate(l.dim, std::move(pts), l.probs);
                }
                default: break;
            }
            return scaled(base, lam);
        }

        case Family::convolution: {
            const auto& p = spec.get<ConvolutionParams>();
            std::vector<DistributionSpec> flat;
            double offset = 0.0;
            std::vector<DistributionSpec> queue(p.children.rbegin(), p.children.rend());
            while (!queue.empty()) {
                DistributionSpec c = simplify(queue.back());
                queue.pop_back();
                if (const auto* conv = c.get_if<ConvolutionParams>()) {
                    for (auto it = conv->children.rbegin(); it != conv->children.rend(); ++it)
                        queue.push_back(*it);
                    continue;
                }
                if (const auto* sh = c.get_if<ShiftedParams>()) {
                    offset += sh->offset;
                    queue.push_back(sh->base[0]);
                    continue;
                }
                double pm;
                if (is_point_mass(c, &pm)) {
                    offset += pm;
                    continue;
                }
                flat.push_back(std::move(c));
            }

            // Merge closed-under-convolution groups.
            std::optional<GaussianParams> gauss;
            std::optional<CauchyParams> cau;
            std::optional<DistributionSpec> lattice;
            std::vector<DistributionSpec> rest;
            for (auto& c : flat) {
                if (const auto* g = c.get_if<GaussianParams>()) {
                    if (!gauss)
                        gauss = *g;
                    else
                        gauss = GaussianParams{gauss->mean + g->mean,
                                               std::hypot(gauss->sigma, g->sigma)};
                } else if (const auto* cc = c.get_if<CauchyParams>()) {
                    if (!cau)
                        cau = *cc;
                    else
                        cau = CauchyParams{cau->gamma + cc->gamma};
                } else if (c.family() == Family::discrete_lattice) {
                    if (!lattice)
                        lattice = c;
                    else
                        lattice = conv_two_lattices(lattice->get<LatticeParams>(),
                                                    c.get<LatticeParams>());
                } else {
                    rest.push_back(std::move(c));
                }
            }
            std::vector<DistributionSpec> out;
            if (gauss) out.push_back(make_spec(*gauss));
            if (cau) out.push_back(make_spec(*cau));
            if (lattice) out.push_back(*lattice);
            for (auto& r : rest) out.push_back(std::move(r));

            DistributionSpec core;
            if (out.empty())
                core = point_mass(0.0);
            else if (out.size() == 1)
                core = out[0];
            else
                core = make_spec(ConvolutionParams{std::move(out)});
            return offset == 0.0 ? core : simplify(shifted(core, offset));
        }

        case Family::product: {
            const auto& p = spec.get<ProductParams>();
            std::vector<DistributionSpec> comps;
            comps.reserve(p.components.size());
            for (const auto& c : p.components) comps.push_back(simplify(c));
            return product_multivariate(std::move(comps));
        }
    }
    return spec;
}

bool is_symmetric_zero(const DistributionSpec& spec) {
    switch (spec.family()) {
        case Family::gaussian: return spec.get<GaussianParams>().mean == 0.0;
        case Family::uniform: {
            const auto& u = spec.get<UniformParams>();
            return u.a == -u.b;
        }
        case Family::laplace:
        case Family::cauchy: return true;
        case Family::exponential: return false;
        case Family::discrete_lattice: {
            const auto& l = spec.get<LatticeParams>();
            if (l.dim != 1) return false;
            const std::size_t n = l.count();
            for (std::size_t i = 0; i < n; ++i) {
                if (std::abs(l.points[i] + l.points[n - 1 - i]) > 1e-12) return false;
                if (std::abs(l.probs[i] - l.probs[n - 1 - i]) > 1e-12) return false;
            }
            return true;
        }
        case Family::convolution: {
            for (const auto& c : spec.get<ConvolutionParams>().children)
                if (!is_symmetric_zero(c)) return false;
            return true;
        }
        case Family::scaled: return is_symmetric_zero(spec.get<ScaledParams>().base[0]);
        case Family::shifted:
            return spec.get<ShiftedParams>().offset == 0.0 &&
                   is_symmetric_zero(spec.get<ShiftedParams>().base[0]);
        case Family::product: {
            for (const auto& c : spec.get<ProductParams>().components)
                if (!is_symmetric_zero(c)) return false;
            return true;
        }
    }
    return false;
}

bool is_self_decomposable(const DistributionSpec& spec) {
    const DistributionSpec s = simplify(spec);
    switch (s.family()) {
        case Family::gaussian:
        case Family::cauchy: return true;
        case Family::shifted: return is_self_decomposable(s.get<ShiftedParams>().base[0]);
        default: return false;
    }
}

// --- exact moments ----------------------------------------------------------

const Rat& MomentTable::raw_exact(int j) const {
    if (j < 0) throw OrderError("moment order must be nonnegative");
    if (j >= static_cast<int>(raw.size()))
        throw OrderError("moment order " + std::to_string(j) + " beyond table limit");
    return raw[static_cast<std::size_t>(j)];
}

Rat MomentTable::central_exact(int j) const {
    const Rat mu = raw_exact(1);
    Rat acc = 0;
    for (int i = 0; i <= j; ++i) {
        Rat term = binomial_rat(static_cast<unsigned>(j), static_cast<unsigned>(i)) * raw_exact(i) *
                   rat_pow(-mu, static_cast<unsigned>(j - i));
        acc += term;
    }
    return acc;
}

Rat raw_moment_exact(const DistributionSpec& spec, int j) {
    if (j < 0) throw OrderError("moment order must be nonnegative");
    if (j == 0) return 1;
    switch (spec.family()) {
        case Family::gaussian: {
            const auto& g = spec.get<GaussianParams>();
            const Rat m(g.mean), s2 = Rat(g.sigma) * Rat(g.sigma);
            Rat acc = 0;
            for (int i = 0; i <= j; i += 2) {
                // E Z^i = (i-1)!! sigma^i for even i
                Rat central = rat_pow(s2, static_cast<unsigned>(i / 2)) *
                              Rat(odd_double_factorial(i - 1));
                acc += binomial_rat(static_cast<unsigned>(j), static_cast<unsigned>(i)) * central *
                       rat_pow(m, static_cast<unsigned>(j - i));
            }
            return acc;
        }
        case Family::uniform: {
            const auto& u = spec.get<UniformParams>();
            const Rat a(u.a), b(u.b);
            return (rat_pow(b, static_cast<unsigned>(j + 1)) -
                    rat_pow(a, static_cast<unsigned>(j + 1))) /
                   (Rat(j + 1) * (b - a));
        }
        case Family::exponential:
            return rat_factorial(j) *
                   rat_pow(Rat(spec.get<ExponentialParams>().scale), static_cast<unsigned>(j));
        case Family::laplace:
            if (j % 2 == 1) return 0;
            return rat_factorial(j) *
                   rat_pow(Rat(spec.get<LaplaceParams>().scale), static_cast<unsigned>(j));
        case Family::cauchy:
            throw CapabilityError("cauchy has no moments of order >= 1");
        case Family::discrete_lattice: {
            const auto& l = spec.get<LatticeParams>();
            if (l.dim != 1)
                throw CapabilityError("scalar moments of a multivariate lattice are undefined");
            Rat acc = 0;
            for (std::size_t i = 0; i < l.count(); ++i)
                acc += Rat(l.probs[i]) * rat_pow(Rat(l.points[i]), static_cast<unsigned>(j));
            return acc;
        }
        case Family::convolution: {
            const auto& ch = spec.get<ConvolutionParams>().children;
            // E (X+Y)^j by binomial expansion, folded over the children.
            std::vector<Rat> acc(static_cast<std::size_t>(j) + 1);
            for (int i = 0; i <= j; ++i) acc[static_cast<std::size_t>(i)] = raw_moment_exact(ch[0], i);
            for (std::size_t c = 1; c < ch.size(); ++c) {
                std::vector<Rat> next(static_cast<std::size_t>(j) + 1);
                std::vector<Rat> cm(static_cast<std::size_t>(j) + 1);
                for (int i = 0; i <= j; ++i) cm[static_cast<std::size_t>(i)] = raw_moment_exact(ch[c], i);
                for (int t = 0; t <= j; ++t) {
                    Rat s = 0;
                    for (int i = 0; i <= t; ++i)
                        s += binomial_rat(static_cast<unsigned>(t), static_cast<unsigned>(i)) *
                             acc[static_cast<std::size_t>(i)] * cm[static_cast<std::size_t>(t - i)];
                    next[static_cast<std::size_t>(t)] = s;
                }
                acc = std::move(next);
            }
            return acc[static_cast<std::size_t>(j)];
        }
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            return rat_pow(Rat(p.lambda), static_cast<unsigned>(j)) *
                   raw_moment_exact(p.base[0], j);
        }
        case Family::shifted: {
            const auto& p = spec.get<ShiftedParams>();
            const Rat c(p.offset);
            Rat acc = 0;
            for (int i = 0; i <= j; ++i)
                acc += binomial_rat(static_cast<unsigned>(j), static_cast<unsigned>(i)) *
                       raw_moment_exact(p.base[0], i) * rat_pow(c, static_cast<unsigned>(j - i));
            return acc;
        }
        case Family::product:
            throw CapabilityError("scalar moments of a product population are undefined");
    }
    throw Error("unreachable");
}

MomentTable moment_table(const DistributionSpec& spec, int order_limit) {
    if (order_limit < 0) throw OrderError("order limit must be nonnegative");
    MomentTable t;
    t.raw.reserve(static_cast<std::size_t>(order_limit) + 1);
    for (int j = 0; j <= order_limit; ++j) t.raw.push_back(raw_moment_exact(spec, j));
    return t;
}

double raw_moment(const DistributionSpec& spec, int j) {
    return to_double(raw_moment_exact(spec, j));
}

double mean_of(const DistributionSpec& spec) { return raw_moment(spec, 1); }

double variance_of(const DistributionSpec& spec) {
    const Rat m1 = raw_moment_exact(spec, 1);
    return to_double(raw_moment_exact(spec, 2) - m1 * m1);
}

// --- support / density ------------------------------------------------------

std::pair<double, double> support(const DistributionSpec& spec) {
    switch (spec.family()) {
        case Family::gaussian:
        case Family::laplace:
        case Family::cauchy: return {-kInf, kInf};
        case Family::uniform: {
            const auto& u = spec.get<UniformParams>();
            return {u.a, u.b};
        }
        case Family::exponential: return {0.0, kInf};
        case Family::discrete_lattice: {
            const auto& l = spec.get<LatticeParams>();
            if (l.dim != 1) throw CapabilityError("support interval is univariate");
            return {l.points.front(), l.points.back()};
        }
        case Family::convolution: {
            double lo = 0.0, hi = 0.0;
            for (const auto& c : spec.get<ConvolutionParams>().children) {
                auto [a, b] = support(c);
                lo += a;
                hi += b;
            }
            return {lo, hi};
        }
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            auto [a, b] = support(p.base[0]);
            const double x = p.lambda * a, y = p.lambda * b;
            return {std::min(x, y), std::max(x, y)};
        }
        case Family::shifted: {
            const auto& p = spec.get<ShiftedParams>();
            auto [a, b] = support(p.base[0]);
            return {a + p.offset, b + p.offset};
        }
        case Family::product: throw CapabilityError("support interval is univariate");
    }
    throw Error("unreachable");
}

bool has_density(const DistributionSpec& spec) {
    switch (spec.family()) {
        case Family::gaussian:
        case Family::uniform:
        case Family::exponential:
        case Family::laplace:
        case Family::cauchy: return true;
        case Family::discrete_lattice: return false;
        case Family::convolution: {
            for (const auto& c : spec.get<ConvolutionParams>().children)
                if (has_density(c)) return true; // lattice + continuous has a density
            return false;
        }
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            return p.lambda != 0.0 && has_density(p.base[0]);
        }
        case Family::shifted: return has_density(spec.get<ShiftedParams>().base[0]);
        case Family::product: {
            for (const auto& c : spec.get<ProductParams>().components)
                if (!has_density(c)) return false;
            return true;
        }
    }
    return false;
}

namespace {

double density_conv(const std::vector<DistributionSpec>& children, double x);

double density_impl(const DistributionSpec& spec, double x) {
    switch (spec.family()) {
        case Family::gaussian: {
            const auto& g = spec.get<GaussianParams>();
            return phi_pdf((x - g.mean) / g.sigma) / g.sigma;
        }
        case Family::uniform: {
            const auto& u = spec.get<UniformParams>();
            return (x >= u.a && x <= u.b) ? 1.0 / (u.b - u.a) : 0.0;
        }
        case Family::exponential: {
            const double s = spec.get<ExponentialParams>().scale;
            return x >= 0 ? std::exp(-x / s) / s : 0.0;
        }
        case Family::laplace: {
            const double b = spec.get<LaplaceParams>().scale;
            return std::exp(-std::abs(x) / b) / (2.0 * b);
        }
        case Family::cauchy: {
            const double g = spec.get<CauchyParams>().gamma;
            return g / (std::numbers::pi * (x * x + g * g));
        }
        case Family::discrete_lattice:
            throw CapabilityError("a lattice distribution has no density");
        case Family::convolution: return density_conv(spec.get<ConvolutionParams>().children, x);
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            if (p.lambda == 0.0) throw CapabilityError("a point mass has no density");
            return density_impl(p.base[0], x / p.lambda) / std::abs(p.lambda);
        }
        case Family::shifted: {
            const auto& p = spec.get<ShiftedParams>();
            return density_impl(p.base[0], x - p.offset);
        }
        case Family::product:
            throw CapabilityError("density(spec, x) is univariate; use per-component densities");
    }
    throw Error("unreachable");
}

double density_conv(const std::vector<DistributionSpec>& children, double x) {
    if (children.size() == 1) return density_impl(children[0], x);

    // Lattice child: finite mixture of translated densities of the rest.
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (children[i].family() != Family::discrete_lattice) continue;
        const auto& l = children[i].get<LatticeParams>();
        std::vector<DistributionSpec> rest;
        for (std::size_t j = 0; j < children.size(); ++j)
            if (j != i) rest.push_back(children[j]);
        double acc = 0.0;
        for (std::size_t a = 0; a < l.count(); ++a)
            acc += l.probs[a] * density_conv(rest, x - l.points[a]);
        return acc;
    }

    // All-equal uniforms: scaled Irwin-Hall.
    bool all_uniform_equal = true;
    const auto* u0 = children[0].get_if<UniformParams>();
    for (const auto& c : children) {
        const auto* u = c.get_if<UniformParams>();
        if (!u0 || !u || u->a != u0->a || u->b != u0->b) {
            all_uniform_equal = false;
            break;
        }
    }
    if (all_uniform_equal)
        return uniform_sum_density(static_cast<int>(children.size()), u0->a, u0->b, x);

    // Gaussian + uniform: smoothed box via the normal cdf.
    if (children.size() == 2) {
        const GaussianParams* g = children[0].get_if<GaussianParams>();
        const UniformParams* u = children[1].get_if<UniformParams>();
        if (!g || !u) {
            g = children[1].get_if<GaussianParams>();
            u = children[0].get_if<UniformParams>();
        }
        if (g && u) {
            const double z1 = (x - u->a - g->mean) / g->sigma;
            const double z2 = (x - u->b - g->mean) / g->sigma;
            return (phi_cdf(z1) - phi_cdf(z2)) / (u->b - u->a);
        }
    }

    // Generic numeric convolution of the first child against the rest.
    std::vector<DistributionSpec> rest(children.begin() + 1, children.end());
    const DistributionSpec& first = children[0];
    auto [flo, fhi] = support(first);
    double rlo = 0.0, rhi = 0.0;
    for (const auto& r : rest) {
        auto [a, b] = support(r);
        rlo += a;
        rhi += b;
    }
    const double lo = std::max(rlo, x - fhi);
    const double hi = std::min(rhi, x - flo);
    if (!(lo < hi)) return 0.0;
    std::vector<double> breaks;
    for (const auto& r : rest)
        for (double b : density_breakpoints(r)) breaks.push_back(b);
    for (double b : density_breakpoints(first)) breaks.push_back(x - b);
    return integrate_segmented(
        [&](double y) { return density_impl(first, x - y) * density_conv(rest, y); }, lo, hi,
        std::move(breaks), 1e-10);
}

} // namespace

double density(const DistributionSpec& spec, double x) {
    if (!has_density(spec)) throw CapabilityError("spec has no density");
    return density_impl(simplify(spec), x);
}

std::vector<double> density_breakpoints(const DistributionSpec& spec) {
    switch (spec.family()) {
        case Family::gaussian:
        case Family::cauchy: return {};
        case Family::uniform: {
            const auto& u = spec.get<UniformParams>();
            return {u.a, u.b};
        }
        case Family::exponential: return {0.0};
        case Family::laplace: return {0.0};
        case Family::discrete_lattice: return {};
        case Family::convolution: {
            const auto& ch = spec.get<ConvolutionParams>().children;
            // Any infinitely smooth child smooths the whole convolution.
            for (const auto& c : ch)
                if (c.family() == Family::gaussian || c.family() == Family::cauchy) return {};
            std::vector<double> acc{0.0};
            for (const auto& c : ch) {
                std::vector<double> bp = density_breakpoints(c);
                if (c.family() == Family::discrete_lattice) {
                    const auto& l = c.get<LatticeParams>();
                    bp.assign(l.points.begin(), l.points.end());
                }
                if (bp.empty()) return {}; // smooth child
                std::vector<double> next;
                for (double a : acc)
                    for (double b : bp) next.push_back(a + b);
                if (next.size() > 128) return {}; // too many kinks to matter
                acc = std::move(next);
            }
            return acc;
        }
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            auto bp = density_breakpoints(p.base[0]);
            for (double& b : bp) b *= p.lambda;
            return bp;
        }
        case Family::shifted: {
            const auto& p = spec.get<ShiftedParams>();
            auto bp = density_breakpoints(p.base[0]);
            for (double& b : bp) b += p.offset;
            return bp;
        }
        case Family::product: return {};
    }
    return {};
}

double cdf(const DistributionSpec& in, double x) {
    const DistributionSpec spec = simplify(in);
    switch (spec.family()) {
        case Family::gaussian: {
            const auto& g = spec.get<GaussianParams>();
            return phi_cdf((x - g.mean) / g.sigma);
        }
        case Family::uniform: {
            const auto& u = spec.get<UniformParams>();
            if (x <= u.a) return 0.0;
            if (x >= u.b) return 1.0;
            return (x - u.a) / (u.b - u.a);
        }
        case Family::exponential: {
            const double s = spec.get<ExponentialParams>().scale;
            return x <= 0 ? 0.0 : -std::expm1(-x / s);
        }
        case Family::laplace: {
            const double b = spec.get<LaplaceParams>().scale;
            return x < 0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
        }
        case Family::cauchy: {
            const double g = spec.get<CauchyParams>().gamma;
            return 0.5 + std::atan(x / g) / std::numbers::pi;
        }
        case Family::discrete_lattice: {
            const auto& l = spec.get<LatticeParams>();
            if (l.dim != 1) throw CapabilityError("cdf is univariate");
            double acc = 0.0;
            for (std::size_t i = 0; i < l.count(); ++i)
                if (l.points[i] <= x) acc += l.probs[i];
            return acc;
        }
        case Family::shifted: {
            const auto& p = spec.get<ShiftedParams>();
            return cdf(p.base[0], x - p.offset);
        }
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            if (p.lambda > 0) return cdf(p.base[0], x / p.lambda);
            return 1.0 - cdf(p.base[0], x / p.lambda); // continuous base after simplify
        }
        default: {
            // Numeric fallback: integrate the density up to x.
            auto [lo, hi] = support(spec);
            if (x <= lo) return 0.0;
            if (x >= hi) return 1.0;
            return integrate_segmented([&](double t) { return density_impl(spec, t); }, lo, x,
                                       density_breakpoints(spec), 1e-10);
        }
    }
}

// --- fisher information and score -------------------------------------------

double score(const DistributionSpec& in, double x) {
    const DistributionSpec spec = simplify(in);
    switch (spec.family()) {
        case Family::gaussian: {
            const auto& g = spec.get<GaussianParams>();
            return (x - g.mean) / (g.sigma * g.sigma);
        }
        case Family::laplace: {
            const double b = spec.get<LaplaceParams>().scale;
            if (x == 0.0) throw DomainError("laplace score undefined at 0");
            return (x > 0 ? 1.0 : -1.0) / b;
        }
        case Family::cauchy: {
            const double g = spec.get<CauchyParams>().gamma;
            return 2.0 * x / (x * x + g * g);
        }
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            return score(p.base[0], x / p.lambda) / p.lambda;
        }
        case Family::shifted: {
            const auto& p = spec.get<ShiftedParams>();
            return score(p.base[0], x - p.offset);
        }
        case Family::uniform:
        case Family::exponential:
            throw CapabilityError("score undefined: density is not absolutely continuous");
        default: throw CapabilityError("score unavailable for this spec");
    }
}

double fisher_information(const DistributionSpec& in) {
    const DistributionSpec spec = simplify(in);
    switch (spec.family()) {
        case Family::gaussian: {
            const double s = spec.get<GaussianParams>().sigma;
            return 1.0 / (s * s);
        }
        case Family::cauchy: {
            const double g = spec.get<CauchyParams>().gamma;
            return 1.0 / (2.0 * g * g);
        }
        case Family::laplace: {
            // I = E J^2 by quadrature, split at the density kink.
            const double b = spec.get<LaplaceParams>().scale;
            auto integrand = [&](double x) {
                const double j = 1.0 / b;
                return j * j * density_impl(spec, x);
            };
            return integrate(integrand, -kInf, 0.0) + integrate(integrand, 0.0, kInf);
        }
        case Family::shifted: return fisher_information(spec.get<ShiftedParams>().base[0]);
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            return fisher_information(p.base[0]) / (p.lambda * p.lambda);
        }
        case Family::uniform:
        case Family::exponential:
            throw CapabilityError("fisher information is infinite for this family");
        case Family::discrete_lattice:
            throw CapabilityError("fisher information undefined for lattice distributions");
        default:
            throw CapabilityError("fisher information unavailable outside the closed registry");
    }
}

// --- sampling ---------------------------------------------------------------

double draw1(const DistributionSpec& spec, SeededStream& stream) {
    switch (spec.family()) {
        case Family::gaussian: {
            const auto& g = spec.get<GaussianParams>();
            return stream.gaussian(g.mean, g.sigma);
        }
        case Family::uniform: {
            const auto& u = spec.get<UniformParams>();
            return stream.uniform(u.a, u.b);
        }
        case Family::exponential: return stream.exponential(spec.get<ExponentialParams>().scale);
        case Family::laplace: return stream.laplace(spec.get<LaplaceParams>().scale);
        case Family::cauchy: return stream.cauchy(spec.get<CauchyParams>().gamma);
        case Family::discrete_lattice: {
            const auto& l = spec.get<LatticeParams>();
            if (l.dim != 1) throw CapabilityError("scalar draw from multivariate lattice");
            double u = stream.uniform01();
            for (std::size_t i = 0; i + 1 < l.count(); ++i) {
                u -= l.probs[i];
                if (u <= 0) return l.points[i];
            }
            return l.points[l.count() - 1];
        }
        case Family::convolution: {
            double acc = 0.0;
            for (const auto& c : spec.get<ConvolutionParams>().children) acc += draw1(c, stream);
            return acc;
        }
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            if (p.lambda == 0.0) return 0.0;
            return p.lambda * draw1(p.base[0], stream);
        }
        case Family::shifted: {
            const auto& p = spec.get<ShiftedParams>();
            return p.offset + draw1(p.base[0], stream);
        }
        case Family::product: throw CapabilityError("scalar draw from product population");
    }
    throw Error("unreachable");
}

void draw_point(const DistributionSpec& spec, SeededStream& stream, double* out) {
    switch (spec.family()) {
        case Family::product: {
            const auto& p = spec.get<ProductParams>();
            for (std::size_t d = 0; d < p.components.size(); ++d)
                out[d] = draw1(p.components[d], stream);
            return;
        }
        case Family::discrete_lattice: {
            const auto& l = spec.get<LatticeParams>();
            if (l.dim == 1) {
                out[0] = draw1(spec, stream);
                return;
            }
            double u = stream.uniform01();
            std::size_t idx = l.count() - 1;
            for (std::size_t i = 0; i + 1 < l.count(); ++i) {
                u -= l.probs[i];
                if (u <= 0) {
                    idx = i;
                    break;
                }
            }
            const double* pt = l.point(idx);
            std::copy(pt, pt + l.dim, out);
            return;
        }
        default: out[0] = draw1(spec, stream);
    }
}

Sample sample(const DistributionSpec& spec, SeededStream& stream, std::size_t count) {
    if (count < 1) throw ShapeError("sample count must be >= 1");
    const std::size_t d = spec.dim();
    std::vector<double> flat(count * d);
    for (std::size_t i = 0; i < count; ++i) draw_point(spec, stream, flat.data() + i * d);
    return Sample(d, std::move(flat));
}

// --- discretization ---------------------------------------------------------

DistributionSpec discretize(const DistributionSpec& in, std::size_t k_points) {
    const DistributionSpec spec = simplify(in);
    if (!has_density(spec)) throw CapabilityError("discretize needs a density");
    if (spec.dim() != 1) throw CapabilityError("discretize is univariate");
    if (k_points < 2) throw DomainError("discretize needs at least 2 cells");

    auto [lo, hi] = support(spec);
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        // Truncate where the tail mass drops below ~1e-12.
        double center = 0.0;
        try {
            center = mean_of(spec);
        } catch (const CapabilityError&) {
            center = 0.0;
        }
        double r = 1.0;
        while (cdf(spec, center + r) < 1.0 - 1e-12 || cdf(spec, center - r) > 1e-12) {
            r *= 2.0;
            if (r > 1e12) break;
        }
        lo = std::isfinite(lo) ? lo : center - r;
        hi = std::isfinite(hi) ? hi : center + r;
    }

    const double step = (hi - lo) / static_cast<double>(k_points);
    std::vector<double> pts, ps;
    pts.reserve(k_points);
    ps.reserve(k_points);
    double prev = cdf(spec, lo);
    for (std::size_t i = 0; i < k_points; ++i) {
        const double right = lo + step * static_cast<double>(i + 1);
        const double cur = cdf(spec, right);
        pts.push_back(lo + step * (static_cast<double>(i) + 0.5));
        ps.push_back(std::max(0.0, cur - prev));
        prev = cur;
    }
    double tot = 0.0;
    for (double p : ps) tot += p;
    if (tot <= 0) throw DegenerateError("discretization produced zero mass");
    for (double& p : ps) p /= tot;
    return discrete_lattice(std::move(pts), std::move(ps));
}

// --- serialization ----------------------------------------------------------

nlohmann::json to_json(const DistributionSpec& spec) {
    nlohmann::json j;
    j["family"] = family_name(spec.family());
    switch (spec.family()) {
        case Family::gaussian: {
            const auto& g = spec.get<GaussianParams>();
            j["params"] = {{"mean", g.mean}, {"sigma", g.sigma}};
            break;
        }
        case Family::uniform: {
            const auto& u = spec.get<UniformParams>();
            j["params"] = {{"a", u.a}, {"b", u.b}};
            break;
        }
        case Family::exponential:
            j["params"] = {{"scale", spec.get<ExponentialParams>().scale}};
            break;
        case Family::laplace: j["params"] = {{"scale", spec.get<LaplaceParams>().scale}}; break;
        case Family::cauchy: j["params"] = {{"gamma", spec.get<CauchyParams>().gamma}}; break;
        case Family::discrete_lattice: {
            const auto& l = spec.get<LatticeParams>();
            j["params"] = {{"dim", l.dim}, {"points", l.points}, {"probs", l.probs}};
            break;
        }
        case Family::convolution: {
            auto arr = nlohmann::json::array();
            for (const auto& c : spec.get<ConvolutionParams>().children) arr.push_back(to_json(c));
            j["children"] = std::move(arr);
            break;
        }
        case Family::scaled: {
            const auto& p = spec.get<ScaledParams>();
            j["params"] = {{"lambda", p.lambda}};
            j["children"] = nlohmann::json::array({to_json(p.base[0])});
            break;
        }
        case Family::shifted: {
            const auto& p = spec.get<ShiftedParams>();
            j["params"] = {{"offset", p.offset}};
            j["children"] = nlohmann::json::array({to_json(p.base[0])});
            break;
        }
        case Family::product: {
            auto arr = nlohmann::json::array();
            for (const auto& c : spec.get<ProductParams>().components) arr.push_back(to_json(c));
            j["children"] = std::move(arr);
            break;
        }
    }
    return j;
}

namespace {

double require_number(const nlohmann::json& j, const char* key, const std::string& ptr) {
    if (!j.contains("params") || !j["params"].contains(key) || !j["params"][key].is_number())
        throw ConfigError(ptr + "/params/" + key, "missing or non-numeric parameter");
    return j["params"][key].get<double>();
}

DistributionSpec from_json_impl(const nlohmann::json& j, const std::string& ptr) {
    if (!j.is_object() || !j.contains("family") || !j["family"].is_string())
        throw ConfigError(ptr + "/family", "expected an object with a string 'family'");
    const std::string fam = j["family"].get<std::string>();

    auto children = [&](std::size_t exactly = 0) {
        if (!j.contains("children") || !j["children"].is_array())
            throw ConfigError(ptr + "/children", "missing children array");
        const auto& arr = j["children"];
        if (exactly != 0 && arr.size() != exactly)
            throw ConfigError(ptr + "/children", "expected exactly " + std::to_string(exactly) +
                                                     " child(ren)");
        std::vector<DistributionSpec> out;
        for (std::size_t i = 0; i < arr.size(); ++i)
            out.push_back(from_json_impl(arr[i], ptr + "/children/" + std::to_string(i)));
        return out;
    };

    try {
        if (fam == "gaussian")
            return gaussian(require_number(j, "mean", ptr), require_number(j, "sigma", ptr));
        if (fam == "uniform")
            return uniform(require_number(j, "a", ptr), require_number(j, "b", ptr));
        if (fam == "exponential") return exponential(require_number(j, "scale", ptr));
        if (fam == "laplace") return laplace(require_number(j, "scale", ptr));
        if (fam == "cauchy") return cauchy(require_number(j, "gamma", ptr));
        if (fam == "discrete_lattice") {
            if (!j.contains("params"))
                throw ConfigError(ptr + "/params", "missing lattice parameters");
            const auto& p = j["params"];
            if (!p.contains("points") || !p.contains("probs"))
                throw ConfigError(ptr + "/params", "lattice needs points and probs");
            std::size_t dim = p.value("dim", std::size_t{1});
            return discrete_lattice_multivariate(dim, p["points"].get<std::vector<double>>(),
                                                 p["probs"].get<std::vector<double>>());
        }
        if (fam == "convolution") return convolve(children());
        if (fam == "scaled") {
            auto ch = children(1);
            return scaled(ch[0], require_number(j, "lambda", ptr));
        }
        if (fam == "shifted") {
            auto ch = children(1);
            return shifted(ch[0], require_number(j, "offset", ptr));
        }
        if (fam == "product") return product_multivariate(children());
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(ptr, e.what());
    }
    throw ConfigError(ptr + "/family", "unknown family '" + fam + "'");
}

} // namespace

DistributionSpec spec_from_json(const nlohmann::json& j) { return from_json_impl(j, ""); }

} // namespace pitmanlab
