#pragma once

#include <complex>
#include <string>
#include <vector>

#include "util.hpp"

namespace qprog {

using cplx = std::complex<double>;

// Riemann zeta by Euler-Maclaurin; validated domain Re(s) > -1, |Im s| <= 200
// at relative error <= 1e-10.  The pole at s = 1 is signaled.
cplx zeta_line(cplx s);

// Complex Gamma (Lanczos, reflection for Re(s) < 1/2).  Poles at nonpositive
// integers are signaled.
cplx gamma_c(cplx s);
cplx log_gamma_c(cplx s);  // principal branch along the Lanczos path

// Completed zeta xi(s) = Gamma_R(s) zeta(s), Gamma_R(s) = pi^(-s/2) Gamma(s/2).
cplx xi_c(cplx s);

// L^2-normalized holomorphic Whittaker function
// W_k(y) = 1_{y>0} Gamma(k)^{-1/2} (4 pi y)^{k/2} e^{-2 pi y},
// evaluated in the log domain (safe for k up to ~10^4).
double whittaker_wk(i64 k, double y);

// exp(x) * K_{ir}(x) via trapezoidal quadrature of
// int_0^inf exp(-x(cosh t - 1)) cos(rt) dt  (x > 0).
double bessel_k_ir_scaled(double r, double x);
// Independent second route: composite Gauss-Legendre panels.
double bessel_k_ir_scaled_gl(double r, double x);

// Ingested Maass cusp form data: spectral parameter r, parity, normalized
// Hecke eigenvalues rho(1..nmax).  Values are data, not asserted ground
// truth; ingestion validates rho(1) = 1, the Hecke relations
// rho(m) rho(n) = sum_{d | (m,n)} rho(mn/d^2) to 1e-6, and the Rankin-style
// bound |rho(n)| <= tau(n) n^{7/64} * 1.01.
struct MaassData {
    double r = 0.0;
    bool even = true;
    std::vector<double> rho;  // rho[0] unused
    std::string source;

    i64 nmax() const { return static_cast<i64>(rho.size()) - 1; }
    double rho_at(i64 n) const {
        if (n < 1 || n > nmax())
            throw RangeError("MaassData: rho index out of range", n);
        return rho[static_cast<std::size_t>(n)];
    }
};

// Load + validate a Maass data JSON file
// {version, r: decimal string, parity: "even"|"odd", rho: [decimal strings], source}.
MaassData load_maass(const std::string& path);
// Validation entry point (also used on synthetic data in tests).
void validate_maass(const MaassData& d);

// W_Psi(y) = eps(sign y) sqrt(|y|) e^{pi r/2} K_{ir}(2 pi |y|), eps = 1 for
// even parity and sgn for odd.  y = 0 is rejected.  Accuracy target 1e-8
// relative for 2 pi |y| >= 1e-3; values below the binary64 underflow range
// come back as 0.
double maass_whittaker(const MaassData& data, double y);

}  // namespace qprog
