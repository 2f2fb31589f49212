#pragma once

#include <span>
#include <vector>

namespace geointerp::polyalg {

/// True when two nodes coincide: |a - b| < 1e-13 * max(1, |a|, |b|).
bool nodes_coincide(double a, double b) noexcept;

/// Throws RepeatedNodes if any pair of nodes coincides.
void require_distinct(std::span<const double> nodes);

/// Vandermonde determinant prod_{i<l} (t_l - t_i), evaluated as a product.
/// Repeated nodes give exactly zero.
double vandermonde(std::span<const double> nodes);

/// Vandermonde determinant with its last row (the highest powers) replaced
/// by `values`, expanded along that row:
///   sum_l (-1)^(r+l) c_l V(t without node l),  l = 1..r.
/// Defined for repeated nodes as well.
double modified_vandermonde(std::span<const double> nodes, std::span<const double> values);

/// Divided difference [t_0,...,t_r]c by the recursive table.
double divided_difference(std::span<const double> nodes, std::span<const double> values);

/// Divided difference as the quotient modified_vandermonde / vandermonde.
/// Kept as a cross-check of the recursive table; cancellation makes it less
/// accurate for clustered nodes.
double divided_difference_quotient(std::span<const double> nodes,
                                   std::span<const double> values);

/// Univariate polynomial in Newton form
///   p(x) = c_0 + c_1 (x - z_0) + ... + c_k (x - z_0)...(x - z_{k-1}).
class Polynomial1D {
public:
    Polynomial1D() = default;
    Polynomial1D(std::vector<double> basis_nodes, std::vector<double> coefficients);

    static Polynomial1D constant(double value);

    const std::vector<double>& basis_nodes() const noexcept { return nodes_; }
    const std::vector<double>& coefficients() const noexcept { return coeffs_; }

    /// Number of Newton terms; the degree is at most size() - 1.
    std::size_t size() const noexcept { return coeffs_.size(); }

    double operator()(double x) const noexcept;
    double derivative(double x) const noexcept;

    /// Evaluates only the first `terms` Newton terms.
    double eval_truncated(double x, std::size_t terms) const noexcept;

private:
    std::vector<double> nodes_;
    std::vector<double> coeffs_;
};

/// Newton-form interpolant of (t_k, c_k); throws RepeatedNodes.
Polynomial1D newton_interpolant(std::span<const double> nodes, std::span<const double> values);

/// Nested (Horner-style) evaluation of the Newton form.
double eval_poly(const Polynomial1D& p, double x) noexcept;

}  // namespace geointerp::polyalg
