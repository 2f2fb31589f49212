#include "geointerp/polyalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "geointerp/errors.hpp"

namespace geointerp::polyalg {

namespace {

void require_same_length(std::span<const double> nodes, std::span<const double> values) {
    if (nodes.size() != values.size()) {
        throw InvalidArgument("node and value counts differ (" + std::to_string(nodes.size()) +
                              " vs " + std::to_string(values.size()) + ")");
    }
    if (nodes.empty()) {
        throw InvalidArgument("at least one node is required");
    }
}

void require_finite(std::span<const double> nodes) {
    for (double t : nodes) {
        if (!std::isfinite(t)) throw InvalidArgument("non-finite node");
    }
}

// V(nodes with index `skip` removed).
double vandermonde_without(std::span<const double> nodes, std::size_t skip) {
    double v = 1.0;
    for (std::size_t l = 0; l < nodes.size(); ++l) {
        if (l == skip) continue;
        for (std::size_t i = 0; i < l; ++i) {
            if (i == skip) continue;
            v *= nodes[l] - nodes[i];
        }
    }
    return v;
}

}  // namespace

bool nodes_coincide(double a, double b) noexcept {
    const double scale = std::max({1.0, std::abs(a), std::abs(b)});
    return std::abs(a - b) < 1e-13 * scale;
}

void require_distinct(std::span<const double> nodes) {
    for (std::size_t l = 0; l < nodes.size(); ++l) {
        for (std::size_t i = 0; i < l; ++i) {
            if (nodes_coincide(nodes[i], nodes[l])) {
                throw RepeatedNodes("nodes " + std::to_string(i) + " and " + std::to_string(l) +
                                    " coincide");
            }
        }
    }
}

double vandermonde(std::span<const double> nodes) {
    return vandermonde_without(nodes, nodes.size());
}

double modified_vandermonde(std::span<const double> nodes, std::span<const double> values) {
    require_same_length(nodes, values);
    const std::size_t r = nodes.size();
    double sum = 0.0;
    for (std::size_t l = 0; l < r; ++l) {
        // 1-based sign (-1)^(r + l + 1) with 0-based l.
        const double sign = ((r + l + 1) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * values[l] * vandermonde_without(nodes, l);
    }
    return sum;
}

double divided_difference(std::span<const double> nodes, std::span<const double> values) {
    require_same_length(nodes, values);
    require_finite(nodes);
    require_distinct(nodes);
    std::vector<double> table(values.begin(), values.end());
    const std::size_t m = nodes.size();
    for (std::size_t level = 1; level < m; ++level) {
        for (std::size_t i = m - 1; i >= level; --i) {
            table[i] = (table[i] - table[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }
    return table[m - 1];
}

double divided_difference_quotient(std::span<const double> nodes,
                                   std::span<const double> values) {
    require_same_length(nodes, values);
    require_finite(nodes);
    require_distinct(nodes);
    return modified_vandermonde(nodes, values) / vandermonde(nodes);
}

Polynomial1D::Polynomial1D(std::vector<double> basis_nodes, std::vector<double> coefficients)
    : nodes_(std::move(basis_nodes)), coeffs_(std::move(coefficients)) {
    if (nodes_.size() != coeffs_.size()) {
        throw InvalidArgument("Newton form needs one basis node per coefficient");
    }
    require_finite(nodes_);
}

Polynomial1D Polynomial1D::constant(double value) { return Polynomial1D({0.0}, {value}); }

double Polynomial1D::eval_truncated(double x, std::size_t terms) const noexcept {
    terms = std::min(terms, coeffs_.size());
    if (terms == 0) return 0.0;
    double p = coeffs_[terms - 1];
    for (std::size_t k = terms - 1; k-- > 0;) {
        p = p * (x - nodes_[k]) + coeffs_[k];
    }
    return p;
}

double Polynomial1D::operator()(double x) const noexcept { return eval_truncated(x, size()); }

double Polynomial1D::derivative(double x) const noexcept {
    if (coeffs_.size() < 2) return 0.0;
    double p = coeffs_.back();
    double dp = 0.0;
    for (std::size_t k = coeffs_.size() - 1; k-- > 0;) {
        dp = dp * (x - nodes_[k]) + p;
        p = p * (x - nodes_[k]) + coeffs_[k];
    }
    return dp;
}

Polynomial1D newton_interpolant(std::span<const double> nodes, std::span<const double> values) {
    require_same_length(nodes, values);
    require_finite(nodes);
    require_distinct(nodes);
    const std::size_t m = nodes.size();
    std::vector<double> table(values.begin(), values.end());
    for (std::size_t level = 1; level < m; ++level) {
        for (std::size_t i = m - 1; i >= level; --i) {
            table[i] = (table[i] - table[i - 1]) / (nodes[i] - nodes[i - level]);
        }
    }
    return Polynomial1D(std::vector<double>(nodes.begin(), nodes.end()), std::move(table));
}

double eval_poly(const Polynomial1D& p, double x) noexcept { return p(x); }

}  // namespace geointerp::polyalg
