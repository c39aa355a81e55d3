#include "harch.hpp"

#include <cmath>

namespace qprog {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kContourT = 48.0;

double contour_sigma(double y) { return y >= 1.0 ? 2.0 : 6.0; }

// F(s) = (2s - 1) 2 xi(2s) sum_{d|d_B} d^s
cplx h_integrand_factor(cplx s, i64 d_B) {
    cplx divsum = 0.0;
    for (i64 d = 1; d <= d_B; ++d)
        if (d_B % d == 0) divsum += std::exp(s * std::log(static_cast<double>(d)));
    return (2.0 * s - 1.0) * 2.0 * xi_c(2.0 * s) * divsum;
}

struct ContourNodes {
    double sigma;
    std::vector<double> t, w;  // nodes/weights on [0, kContourT]
    std::vector<cplx> f;       // F(sigma + i t)

    ContourNodes(double sig, double max_abs_log_y, i64 d_B) : sigma(sig) {
        double width = std::min(1.0, 6.0 / std::max(1.0, max_abs_log_y));
        int panels = std::max(8, static_cast<int>(std::ceil(kContourT / width)));
        // 16-point Gauss-Legendre per panel
        static const double xs[8] = {0.0950125098376374402, 0.2816035507792589132,
                                     0.4580167776572273863, 0.6178762444026437484,
                                     0.7554044083550030339, 0.8656312023878317439,
                                     0.9445750230732325761, 0.9894009349916499326};
        static const double ws[8] = {0.1894506104550684963, 0.1826034150449235889,
                                     0.1691565193950025382, 0.1495959888165767320,
                                     0.1246289712555338720, 0.0951585116824927848,
                                     0.0622535239386478929, 0.0271524594117540949};
        double pw = kContourT / panels;
        for (int p = 0; p < panels; ++p) {
            double c = (p + 0.5) * pw, h = 0.5 * pw;
            for (int i = 0; i < 8; ++i) {
                t.push_back(c + h * xs[i]);
                w.push_back(h * ws[i]);
                t.push_back(c - h * xs[i]);
                w.push_back(h * ws[i]);
            }
        }
        f.resize(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            f[i] = h_integrand_factor(cplx(sigma, t[i]), d_B);
    }

    // (1/pi) Re int_0^T F(sigma+it) y^{sigma+it} dt
    double eval(double y) const {
        double ly = std::log(y);
        double ys = std::pow(y, sigma);
        Kahan acc;
        for (std::size_t i = 0; i < t.size(); ++i) {
            double phase = t[i] * ly;
            double re = f[i].real() * std::cos(phase) - f[i].imag() * std::sin(phase);
            acc.add(w[i] * re);
        }
        return ys * acc.value() / kPi;
    }
};

}  // namespace

double h_eval(double y, i64 d_B) {
    if (!(y > 0.0)) throw ConfigError("h_eval: y must be positive");
    if (y < 1e-4 || y > 1e6)
        throw RangeError("h_eval: y outside the validated domain [1e-4, 1e6]");
    if (d_B < 1) throw ConfigError("h_eval: d_B must be a positive integer");
    ContourNodes nodes(contour_sigma(y), std::fabs(std::log(y)), d_B);
    return nodes.eval(y);
}

double h_ell(i64 ell, double y, const MaassData& data, i64 d_B) {
    if (ell == 0) throw ConfigError("h_ell: ell must be nonzero");
    return h_eval(y, d_B) * maass_whittaker(data, static_cast<double>(ell) * y) / y;
}

namespace {

struct VkWindow {
    double lo, hi;
};

VkWindow vk_window(i64 k) {
    double kk = static_cast<double>(k);
    double lo = std::max(1e-3, kk - 30.0 * std::sqrt(kk));
    double hi = kk + 30.0 * std::sqrt(kk);
    return {lo, hi};
}

}  // namespace

double v_k(i64 k, i64 D, i64 ell, i64 n, const MaassData& data, i64 d_B) {
    if (k < 12 || k % 2 != 0) throw ConfigError("v_k: k must be even and >= 12");
    if (ell == 0 || n <= 0) throw ConfigError("v_k: need ell != 0 and n > 0");
    double Dd = static_cast<double>(D);
    double nn = static_cast<double>(n);
    double disc = nn * nn - Dd * static_cast<double>(ell) * static_cast<double>(ell);
    if (disc <= 0.0) return 0.0;
    double c = std::sqrt(Dd) / (2.0 * kPi * nn);
    double log_front = 0.5 * k * std::log1p(-Dd * ell * ell / (nn * nn));
    VkWindow win = vk_window(k);
    double lg = std::lgamma(static_cast<double>(k));
    double integral = gauss_legendre(
        win.lo, win.hi,
        [&](double y) {
            double u = c * y;
            double h = (u >= 1e-4 && u <= 1e6) ? h_eval(u, d_B) : 0.0;
            if (h == 0.0) return 0.0;
            double wpsi = maass_whittaker(data, static_cast<double>(ell) * u);
            double weight = std::exp(k * std::log(y) - y - lg);
            return h * wpsi / u * weight / y;
        },
        48);
    return std::exp(log_front) * integral;
}

IwaniecResult iwaniec_j(const TestFunction& f, double s) {
    if (!(s > 0.0)) throw ConfigError("iwaniec_j: s must be positive");
    double lg = std::lgamma(s);
    double j = gauss_legendre(
        f.support_lo(), f.support_hi(),
        [&](double y) { return f(y) * std::exp(s * std::log(y) - y - lg) / y; }, 24);
    double bound = 0.5 * s * f.sup_abs_second_deriv();
    return {j, bound};
}

double f_ell(i64 ell, double u, const MaassData& data, i64 D, i64 d_B) {
    if (ell == 0) throw ConfigError("f_ell: ell must be nonzero");
    i64 al = ell < 0 ? -ell : ell;
    if (al > data.nmax())
        throw RangeError("f_ell: |ell| beyond Maass data range", al);
    if (!(u > 0.0)) throw ConfigError("f_ell: u must be positive");
    double y = std::sqrt(static_cast<double>(D)) / (2.0 * kPi * u);
    return data.rho_at(al) / std::sqrt(static_cast<double>(al)) * (2.0 / u) *
           h_ell(ell, y, data, d_B);
}

HTable::HTable(i64 d_B, double ymin, double ymax) : dB_(d_B) {
    if (!(ymin > 0.0) || !(ymax > ymin)) throw ConfigError("HTable: bad range");
    ymin_ = std::max(ymin, 1e-4);
    ymax_ = ymax;
    log_ymin_ = std::log(ymin_);
    step_ = 0.01;
    std::size_t count =
        static_cast<std::size_t>(std::ceil((std::log(ymax_) - log_ymin_) / step_)) + 4;
    values_.resize(count);

    ContourNodes low(6.0, std::fabs(log_ymin_), d_B);
    ContourNodes high(2.0, std::fabs(std::log(ymax_)) + 1.0, d_B);
    for (std::size_t i = 0; i < count; ++i) {
        double y = std::exp(log_ymin_ + step_ * static_cast<double>(i));
        values_[i] = (y >= 1.0 ? high : low).eval(y);
        max_abs_ = std::max(max_abs_, std::fabs(values_[i]));
    }
    // |h(y)| <= c6 * y^6 for y < 1, from the sigma = 6 contour
    Kahan acc;
    for (std::size_t i = 0; i < low.t.size(); ++i) acc.add(low.w[i] * std::abs(low.f[i]));
    c6_ = acc.value() / kPi;
}

double HTable::eval(double y) const {
    if (y < ymin_) return 0.0;  // |h| <= c6 * ymin^6 there
    double u = (std::log(y) - log_ymin_) / step_;
    if (u > static_cast<double>(values_.size() - 3))
        throw RangeError("HTable::eval: y above table range");
    std::size_t i = static_cast<std::size_t>(u);
    if (i < 1) i = 1;
    if (i > values_.size() - 3) i = values_.size() - 3;
    double x = u - static_cast<double>(i);
    // Catmull-Rom cubic through the four surrounding samples
    double p0 = values_[i - 1], p1 = values_[i], p2 = values_[i + 1], p3 = values_[i + 2];
    double a = -0.5 * p0 + 1.5 * p1 - 1.5 * p2 + 0.5 * p3;
    double b = p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3;
    double cc = -0.5 * p0 + 0.5 * p2;
    return ((a * x + b) * x + cc) * x + p1;
}

double h_ell_fast(const HTable& table, i64 ell, double y, const MaassData& data) {
    if (ell == 0) throw ConfigError("h_ell_fast: ell must be nonzero");
    double h = table.eval(y);
    if (h == 0.0) return 0.0;
    return h * maass_whittaker(data, static_cast<double>(ell) * y) / y;
}

VkValue v_k_fast(const HTable& table, i64 k, i64 D, i64 ell, i64 n,
                 const MaassData& data) {
    if (ell == 0 || n <= 0) throw ConfigError("v_k_fast: need ell != 0 and n > 0");
    double Dd = static_cast<double>(D);
    double nn = static_cast<double>(n);
    double disc = nn * nn - Dd * static_cast<double>(ell) * static_cast<double>(ell);
    if (disc <= 0.0) return {0.0, 0.0};
    double c = std::sqrt(Dd) / (2.0 * kPi * nn);
    double log_front = 0.5 * k * std::log1p(-Dd * ell * ell / (nn * nn));
    VkWindow win = vk_window(k);
    double lg = std::lgamma(static_cast<double>(k));
    auto integrand = [&](double y) {
        double u = c * y;
        double h = table.eval(u);
        if (h == 0.0) return 0.0;
        double wpsi = maass_whittaker(data, static_cast<double>(ell) * u);
        double weight = std::exp(k * std::log(y) - y - lg);
        return h * wpsi / u * weight / y;
    };
    double fine = gauss_legendre(win.lo, win.hi, integrand, 32);
    double coarse = gauss_legendre(win.lo, win.hi, integrand, 16);
    double front = std::exp(log_front);
    return {front * fine, front * std::fabs(fine - coarse) + 1e-300};
}

}  // namespace qprog
