#include "special.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "testfunc.hpp"

namespace qprog {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Bernoulli numbers B_2..B_32 for Euler-Maclaurin
const double kBern[] = {
    1.0 / 6,       -1.0 / 30,      1.0 / 42,      -1.0 / 30,
    5.0 / 66,      -691.0 / 2730,  7.0 / 6,       -3617.0 / 510,
    43867.0 / 798, -174611.0 / 330, 854513.0 / 138, -236364091.0 / 2730,
    8553103.0 / 6, -23749461029.0 / 870, 8615841276005.0 / 14322,
    -7709321041217.0 / 510};

}  // namespace

cplx zeta_line(cplx s) {
    if (std::abs(s - cplx(1.0, 0.0)) < 1e-12)
        throw ConfigError("zeta_line: pole at s = 1");
    if (s.real() < -1.0)
        throw ConfigError("zeta_line: Re(s) > -1 required");
    int N = std::max(24, static_cast<int>(std::ceil(0.7 * std::abs(s.imag()))) + 8);
    const int J = 12;
    cplx sum = 0.0;
    for (int n = 1; n < N; ++n) sum += std::exp(-s * std::log(static_cast<double>(n)));
    cplx Nd(static_cast<double>(N), 0.0);
    cplx logN = std::log(static_cast<double>(N));
    sum += std::exp((1.0 - s) * logN) / (s - 1.0);
    sum += 0.5 * std::exp(-s * logN);
    // correction terms B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{1-s-2j}
    cplx poch = s;                       // s ... (s+2j-2), built incrementally
    double fact = 2.0;                   // (2j)!
    cplx npow = std::exp((-s - 1.0) * logN);
    for (int j = 1; j <= J; ++j) {
        sum += (kBern[j - 1] / fact) * poch * npow;
        poch *= (s + cplx(2.0 * j - 1.0)) * (s + cplx(2.0 * j));
        fact *= (2.0 * j + 1.0) * (2.0 * j + 2.0);
        npow /= Nd * Nd;
    }
    return sum;
}

namespace {

// Lanczos g = 7, 9 coefficients; relative error ~1e-13 on Re(s) >= 1/2
const double kLanczos[9] = {
    0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,  12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

cplx lanczos_log_gamma(cplx s) {
    // valid for Re(s) >= 0.5; log Gamma(s)
    cplx x = kLanczos[0];
    cplx z = s - 1.0;
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + cplx(static_cast<double>(i)));
    cplx t = z + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace

cplx log_gamma_c(cplx s) {
    if (s.real() >= 0.5) return lanczos_log_gamma(s);
    // reflection: Gamma(s) Gamma(1-s) = pi / sin(pi s)
    if (s.imag() == 0.0 && s.real() == std::floor(s.real()))
        throw ConfigError("gamma_c: pole at nonpositive integer");
    return std::log(kPi) - std::log(std::sin(kPi * s)) - lanczos_log_gamma(1.0 - s);
}

cplx gamma_c(cplx s) { return std::exp(log_gamma_c(s)); }

cplx xi_c(cplx s) {
    return std::pow(kPi, -0.5 * s) * gamma_c(0.5 * s) * zeta_line(s);
}

double whittaker_wk(i64 k, double y) {
    if (k < 2 || k % 2 != 0) throw ConfigError("whittaker_wk: k must be even, >= 2");
    if (y <= 0.0) return 0.0;
    double logv = 0.5 * k * std::log(4.0 * kPi * y) - 2.0 * kPi * y -
                  0.5 * std::lgamma(static_cast<double>(k));
    if (logv < -740.0) return 0.0;
    return std::exp(logv);
}

double bessel_k_ir_scaled(double r, double x) {
    if (x <= 0.0) throw ConfigError("bessel_k_ir: x must be positive");
    // The cosh factor already decays doubly exponentially in t, so the
    // trapezoid rule converges geometrically.  Cutoff where the envelope
    // drops below 1e-34.
    double T = std::acosh(1.0 + 80.0 / x);
    double h = 0.05;
    int n = static_cast<int>(std::ceil(T / h));
    h = T / n;
    Kahan acc;
    acc.add(0.5);  // t = 0 endpoint, integrand = 1
    for (int i = 1; i <= n; ++i) {
        double t = i * h;
        double w = (i == n) ? 0.5 : 1.0;
        acc.add(w * std::exp(-x * (std::cosh(t) - 1.0)) * std::cos(r * t));
    }
    return h * acc.value();
}

double bessel_k_ir_scaled_gl(double r, double x) {
    if (x <= 0.0) throw ConfigError("bessel_k_ir: x must be positive");
    double T = std::acosh(1.0 + 80.0 / x);
    int panels = std::max(8, static_cast<int>(std::ceil(T * (std::fabs(r) + 4.0) / 4.0)));
    return gauss_legendre(
        0.0, T,
        [&](double t) { return std::exp(-x * (std::cosh(t) - 1.0)) * std::cos(r * t); },
        panels);
}

MaassData load_maass(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("maass data: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw IngestError(std::string("maass data: invalid JSON: ") + e.what());
    }
    MaassData d;
    try {
        if (j.at("version").get<int>() != 1)
            throw IngestError("maass data: unsupported version");
        d.r = std::stod(j.at("r").get<std::string>());
        std::string parity = j.at("parity").get<std::string>();
        if (parity == "even")
            d.even = true;
        else if (parity == "odd")
            d.even = false;
        else
            throw IngestError("maass data: parity must be \"even\" or \"odd\"");
        d.rho.push_back(0.0);
        for (const auto& v : j.at("rho")) d.rho.push_back(std::stod(v.get<std::string>()));
        d.source = j.value("source", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw IngestError(std::string("maass data: missing field: ") + e.what());
    }
    validate_maass(d);
    return d;
}

void validate_maass(const MaassData& d) {
    if (!(d.r > 0.0)) throw IngestError("maass data invariant: spectral parameter r > 0");
    i64 N = d.nmax();
    if (N < 1) throw IngestError("maass data invariant: need rho(1)");
    if (std::fabs(d.rho[1] - 1.0) > 1e-12)
        throw IngestError("maass data invariant: rho(1) = 1");
    for (i64 n = 1; n <= N; ++n) {
        double bound =
            static_cast<double>(divisor_count(static_cast<u64>(n))) *
            std::pow(static_cast<double>(n), 7.0 / 64.0) * 1.01;
        if (std::fabs(d.rho[n]) > bound)
            throw IngestError("maass data invariant: |rho(" + std::to_string(n) +
                              ")| exceeds tau(n) n^{7/64} * 1.01");
    }
    for (i64 m = 2; m * 2 <= N; ++m) {
        for (i64 n = m; m * n <= N; ++n) {
            double rhs = 0.0;
            for (i64 dd = 1; dd <= std::min(m, n); ++dd) {
                if (m % dd || n % dd) continue;
                rhs += d.rho[(m * n) / (dd * dd)];
            }
            if (std::fabs(d.rho[m] * d.rho[n] - rhs) > 1e-6)
                throw IngestError("maass data invariant: Hecke relation fails at (m,n) = (" +
                                  std::to_string(m) + "," + std::to_string(n) + ")");
        }
    }
}

double maass_whittaker(const MaassData& data, double y) {
    if (y == 0.0) throw ConfigError("maass_whittaker: y must be nonzero");
    double ay = std::fabs(y);
    double sign = (y > 0.0 || data.even) ? 1.0 : -1.0;
    double x = 2.0 * kPi * ay;
    double expo = 0.5 * kPi * data.r - x + 0.5 * std::log(ay);
    if (expo < -740.0) return 0.0;
    return sign * std::exp(expo) * bessel_k_ir_scaled(data.r, x);
}

}  // namespace qprog
