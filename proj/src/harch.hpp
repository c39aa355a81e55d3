#pragma once

#include "special.hpp"
#include "testfunc.hpp"

namespace qprog {

// h(y) = int_{Re s = sigma} (2s-1) 2 xi(2s) (sum_{d | d_B} d^s) y^s ds/(2 pi i),
// with the contour fixed at sigma = 2 for y >= 1 and sigma = 6 for y < 1 and
// truncated at |Im s| = 48 (the Gamma decay puts the tail far below 1e-10).
// Domain y in [1e-4, 1e6]; h(y) -> tau(d_B) as y -> infinity, h(y) << y^6
// as y -> 0.
double h_eval(double y, i64 d_B);

// h_ell(y) = h(y) W_Psi(ell y) / y
double h_ell(i64 ell, double y, const MaassData& data, i64 d_B);

// V_k(ell, m) for m = (ell + n/sqrt(D))/2: vanishes unless n^2 - D ell^2 > 0,
// else ((1 - D ell^2/n^2)^{k/2} / Gamma(k)) *
//      int h_ell(sqrt(D) y / (2 pi n)) y^k e^{-y} dy/y
// over the window [k - 30 sqrt(k), k + 30 sqrt(k)] (mass > 1 - 1e-12).
double v_k(i64 k, i64 D, i64 ell, i64 n, const MaassData& data, i64 d_B);

// J(s) = Gamma(s)^{-1} int f(y) y^s e^{-y} dy/y and the certified bound
// |J(s) - f(s)| <= (s/2) ||f''||_inf.
struct IwaniecResult {
    double j;
    double bound;
};
IwaniecResult iwaniec_j(const TestFunction& f, double s);

// f_ell(u) = (rho(|ell|)/sqrt(|ell|)) (2/u) h_ell(sqrt(D)/(2 pi u))
double f_ell(i64 ell, double u, const MaassData& data, i64 D, i64 d_B);

// Log-grid cubic interpolation of h over [ymin, ymax]; the period sums
// evaluate h thousands of times, the contour integral only feeds the table.
// Below ymin the table returns 0 and reports |h| <= small_bound(ymin).
class HTable {
public:
    HTable(i64 d_B, double ymin, double ymax);
    double eval(double y) const;
    double ymin() const { return ymin_; }
    double ymax() const { return ymax_; }
    double max_abs() const { return max_abs_; }
    // bound C6 with |h(y)| <= C6 y^6 for y < 1 (from the sigma = 6 contour)
    double c6() const { return c6_; }
    i64 d_B() const { return dB_; }

private:
    i64 dB_;
    double ymin_, ymax_, log_ymin_, step_;
    double max_abs_ = 0.0, c6_ = 0.0;
    std::vector<double> values_;
};

double h_ell_fast(const HTable& table, i64 ell, double y, const MaassData& data);

struct VkValue {
    double value;
    double quad_err;  // |fine - coarse| panel-refinement estimate
};
VkValue v_k_fast(const HTable& table, i64 k, i64 D, i64 ell, i64 n,
                 const MaassData& data);

}  // namespace qprog
