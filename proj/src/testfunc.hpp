#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "util.hpp"

namespace qprog {

// Smooth compactly supported test function on (0, infinity).
//
// The bump kind is exp(-1/(t(1-t))) in the affine chart t = (y-y0)/(y1-y0);
// its plain and invariant derivatives (Df = y f') are maintained symbolically
// as f(y) * P(t) / (t(1-t))^m, so any requested order is available.  The
// tabulated kind wraps a callable and differentiates by central differences;
// it exists for functions like f_ell that have no closed form.
class TestFunction {
public:
    static TestFunction bump(double y0, double y1);
    // y -> f(a*y); support becomes [y0/a, y1/a]
    TestFunction scaled(double a) const;
    static TestFunction tabulated(std::function<double(double)> f, double y0, double y1);

    double operator()(double y) const;
    double deriv(int order, double y) const;            // d^j f / dy^j
    double invariant_deriv(int order, double y) const;  // D^j f, D = y d/dy

    double support_lo() const { return y0_; }
    double support_hi() const { return y1_; }
    bool is_tabulated() const { return tab_ != nullptr; }

    // int_0^infty f(y) dy (Gauss-Legendre over the support)
    double integral() const;
    // sup |f''| by dense grid with one refinement pass
    double sup_abs_second_deriv() const;

private:
    TestFunction() = default;

    struct SymDeriv;  // polynomial tower for the bump kind
    double y0_ = 0, y1_ = 0;
    std::shared_ptr<std::vector<SymDeriv>> plain_;      // index = order
    std::shared_ptr<std::vector<SymDeriv>> invariant_;  // index = order
    std::function<double(double)> tab_;

    double eval_sym(const SymDeriv& d, double y) const;
    double tab_deriv(int order, double y) const;
};

// S_N(f) = max_{j<=N} sup_y (y+1/y)^N |D^j f(y)|, approximated on a dense
// log grid (2^12 points per unit log-interval) with one refinement pass.
// The reported value is accurate to ~5 percent for the smooth functions here.
double sobolev_norm(const TestFunction& f, int N);

// Composite 32-point Gauss-Legendre quadrature over [a, b].
double gauss_legendre(double a, double b, const std::function<double(double)>& f,
                      int panels);

}  // namespace qprog
