#include "pitmanlab/sym_poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace pitmanlab {

SymPoly SymPoly::constant(std::size_t n_vars, Rat c) {
    SymPoly p(n_vars);
    if (c != 0) p.terms_.emplace(Key(n_vars, 0u), std::move(c));
    return p;
}

SymPoly SymPoly::variable(std::size_t n_vars, std::size_t index) {
    SymPoly p(n_vars);
    Key k(n_vars, 0u);
    k.at(index) = 1;
    p.terms_.emplace(std::move(k), Rat(1));
    return p;
}

int SymPoly::total_degree() const {
    int deg = 0;
    for (const auto& [k, c] : terms_) {
        int d = 0;
        for (unsigned e : k) d += static_cast<int>(e);
        deg = std::max(deg, d);
    }
    return deg;
}

void SymPoly::add_term(const Key& k, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        terms_.emplace(k, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

SymPoly SymPoly::operator+(const SymPoly& o) const {
    SymPoly out = *this;
    for (const auto& [k, c] : o.terms_) out.add_term(k, c);
    return out;
}

SymPoly SymPoly::operator-(const SymPoly& o) const {
    SymPoly out = *this;
    for (const auto& [k, c] : o.terms_) out.add_term(k, -c);
    return out;
}

SymPoly SymPoly::operator*(const SymPoly& o) const {
    SymPoly out(n_vars_);
    Key key(n_vars_, 0u);
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_) {
            for (std::size_t i = 0; i < n_vars_; ++i) key[i] = ka[i] + kb[i];
            out.add_term(key, ca * cb);
        }
    return out;
}

SymPoly SymPoly::operator*(const Rat& c) const {
    SymPoly out(n_vars_);
    if (c == 0) return out;
    for (const auto& [k, v] : terms_) out.terms_.emplace(k, v * c);
    return out;
}

SymPoly SymPoly::pow(unsigned e) const {
    SymPoly out = SymPoly::constant(n_vars_, 1);
    SymPoly base = *this;
    while (e != 0) {
        if (e & 1u) out = out * base;
        if (e >>= 1) base = base * base;
    }
    return out;
}

double SymPoly::eval(const double* x) const {
    double acc = 0.0;
    for (const auto& [k, c] : terms_) {
        double t = to_double(c);
        for (std::size_t i = 0; i < n_vars_; ++i)
            for (unsigned e = 0; e < k[i]; ++e) t *= x[i];
        acc += t;
    }
    return acc;
}

std::string SymPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : terms_) {
        if (!first) os << (c < 0 ? " - " : " + ");
        if (first && c < 0) os << "-";
        first = false;
        const Rat a = c < 0 ? Rat(-c) : c;
        bool printed = false;
        if (a != 1) {
            os << rat_str(a);
            printed = true;
        }
        for (std::size_t i = 0; i < n_vars_; ++i) {
            if (k[i] == 0) continue;
            if (printed) os << "*";
            os << "x" << (i + 1);
            if (k[i] > 1) os << "^" << k[i];
            printed = true;
        }
        if (!printed) os << "1";
    }
    return os.str();
}

SymPoly mean_poly(std::size_t n) {
    SymPoly p(n);
    const Rat inv = Rat(1) / Rat(static_cast<int>(n));
    for (std::size_t i = 0; i < n; ++i) p = p + SymPoly::variable(n, i) * inv;
    return p;
}

SymPoly residual_poly(std::size_t n, std::size_t i) {
    return SymPoly::variable(n, i) - mean_poly(n);
}

SymPoly central_moment_poly(std::size_t n, unsigned j) {
    SymPoly acc(n);
    for (std::size_t i = 0; i < n; ++i) acc = acc + residual_poly(n, i).pow(j);
    return acc * (Rat(1) / Rat(static_cast<int>(n)));
}

namespace {

// Expectation of a monomial given by its exponent vector: independence
// factorizes it into a product of raw moments.
Rat monomial_expectation(const SymPoly::Key& k, const MomentTable& m) {
    Rat acc = 1;
    for (unsigned e : k)
        if (e != 0) acc *= m.raw_exact(static_cast<int>(e));
    return acc;
}

} // namespace

Rat expect_iid_exact(const SymPoly& p, const MomentTable& moments) {
    Rat acc = 0;
    for (const auto& [k, c] : p.terms()) acc += c * monomial_expectation(k, moments);
    return acc;
}

double expect_iid(const SymPoly& p, const MomentTable& moments) {
    return to_double(expect_iid_exact(p, moments));
}

Rat expect_product_exact(const SymPoly& a, const SymPoly& b, const MomentTable& moments) {
    // Accumulate E over term pairs; the expectation of each combined monomial
    // depends only on the multiset of its exponents, so cache by sorted key.
    std::map<SymPoly::Key, Rat> cache;
    SymPoly::Key key(a.n_vars(), 0u), sorted;
    Rat acc = 0;
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms()) {
            for (std::size_t i = 0; i < key.size(); ++i) key[i] = ka[i] + kb[i];
            sorted = key;
            std::sort(sorted.begin(), sorted.end());
            auto it = cache.find(sorted);
            if (it == cache.end())
                it = cache.emplace(sorted, monomial_expectation(key, moments)).first;
            acc += ca * cb * it->second;
        }
    return acc;
}

std::vector<SymPoly> residual_basis(std::size_t n, unsigned k) {
    if (n < 2) throw ShapeError("residual basis needs n >= 2");
    std::vector<SymPoly> residuals;
    for (std::size_t i = 0; i + 1 < n; ++i) residuals.push_back(residual_poly(n, i));

    // Exponent vectors over the n-1 free residuals, graded-lex.
    std::vector<std::vector<unsigned>> exps;
    std::vector<unsigned> cur(n - 1, 0u);
    auto rec = [&](auto&& self, std::size_t pos, unsigned left) -> void {
        if (pos == n - 1) {
            exps.push_back(cur);
            return;
        }
        for (unsigned e = 0; e <= left; ++e) {
            cur[pos] = e;
            self(self, pos + 1, left - e);
        }
        cur[pos] = 0;
    };
    for (unsigned d = 0; d <= k; ++d) rec(rec, 0, d);
    std::stable_sort(exps.begin(), exps.end(), [](const auto& x, const auto& y) {
        unsigned dx = 0, dy = 0;
        for (unsigned e : x) dx += e;
        for (unsigned e : y) dy += e;
        if (dx != dy) return dx < dy;
        return x < y;
    });
    exps.erase(std::unique(exps.begin(), exps.end()), exps.end());

    std::vector<SymPoly> basis;
    basis.reserve(exps.size());
    for (const auto& e : exps) {
        SymPoly q = SymPoly::constant(n, 1);
        for (std::size_t i = 0; i + 1 < n; ++i)
            if (e[i] != 0) q = q * residuals[i].pow(e[i]);
        basis.push_back(std::move(q));
    }
    return basis;
}

GramSystem build_gram(const std::vector<SymPoly>& basis, const SymPoly& target,
                      const MomentTable& moments) {
    GramSystem g;
    g.basis = basis;
    const std::size_t m = basis.size();
    g.gram_exact.assign(m * m, Rat(0));
    g.rhs_exact.assign(m, Rat(0));
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = a; b < m; ++b) {
            Rat v = expect_product_exact(basis[a], basis[b], moments);
            g.gram_exact[a * m + b] = v;
            g.gram_exact[b * m + a] = v;
        }
        g.rhs_exact[a] = expect_product_exact(target, basis[a], moments);
    }
    g.gram.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    g.rhs.resize(static_cast<Eigen::Index>(m));
    for (std::size_t a = 0; a < m; ++a) {
        g.rhs[static_cast<Eigen::Index>(a)] = to_double(g.rhs_exact[a]);
        for (std::size_t b = 0; b < m; ++b)
            g.gram(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                to_double(g.gram_exact[a * m + b]);
    }
    return g;
}

} // namespace pitmanlab
