#include "testfunc.hpp"

#include <algorithm>
#include <cmath>

namespace qprog {

namespace {

using Poly = std::vector<double>;  // coefficients, low degree first

Poly poly_mul(const Poly& a, const Poly& b) {
    Poly c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly c(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

Poly poly_scale(const Poly& a, double s) {
    Poly c = a;
    for (auto& x : c) x *= s;
    return c;
}

Poly poly_diff(const Poly& a) {
    if (a.size() <= 1) return {0.0};
    Poly c(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) c[i - 1] = a[i] * static_cast<double>(i);
    return c;
}

double poly_eval(const Poly& a, double t) {
    double v = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) v = v * t + a[i];
    return v;
}

const Poly kU = {0.0, 1.0, -1.0};   // u(t) = t - t^2
const Poly kUp = {1.0, -2.0};       // u'(t) = 1 - 2t

constexpr int kMaxOrder = 16;

}  // namespace

// derivative term f(y) * P(t) / u(t)^m
struct TestFunction::SymDeriv {
    Poly p;
    int m = 0;
};

TestFunction TestFunction::bump(double y0, double y1) {
    if (!(0.0 < y0 && y0 < y1))
        throw ConfigError("TestFunction::bump: need 0 < y0 < y1");
    TestFunction f;
    f.y0_ = y0;
    f.y1_ = y1;
    double w = y1 - y0;
    // Build both derivative towers up front so instances stay immutable.
    // d/dt [ f P/u^m ] = f [ P(1-2t) + (P'u - m P u') u ] / u^{m+2}
    auto step = [&](const SymDeriv& prev, bool invariant) {
        SymDeriv d;
        Poly term1 = poly_mul(prev.p, kUp);
        Poly term2 = poly_mul(poly_add(poly_mul(poly_diff(prev.p), kU),
                                       poly_scale(poly_mul(prev.p, kUp), -prev.m)),
                              kU);
        d.p = poly_add(term1, term2);
        d.m = prev.m + 2;
        if (invariant)
            d.p = poly_mul(d.p, Poly{y0 / w, 1.0});  // D = ((y0 + w t)/w) d/dt
        else
            d.p = poly_scale(d.p, 1.0 / w);
        return d;
    };
    f.plain_ = std::make_shared<std::vector<SymDeriv>>();
    f.invariant_ = std::make_shared<std::vector<SymDeriv>>();
    f.plain_->push_back({Poly{1.0}, 0});
    f.invariant_->push_back({Poly{1.0}, 0});
    for (int j = 1; j <= kMaxOrder; ++j) {
        f.plain_->push_back(step(f.plain_->back(), false));
        f.invariant_->push_back(step(f.invariant_->back(), true));
    }
    return f;
}

TestFunction TestFunction::scaled(double a) const {
    if (a <= 0) throw ConfigError("TestFunction::scaled: need a > 0");
    if (tab_) {
        auto base = tab_;
        return tabulated([base, a](double y) { return base(a * y); }, y0_ / a, y1_ / a);
    }
    return bump(y0_ / a, y1_ / a);
}

TestFunction TestFunction::tabulated(std::function<double(double)> f, double y0, double y1) {
    TestFunction t;
    t.y0_ = y0;
    t.y1_ = y1;
    t.tab_ = std::move(f);
    return t;
}

double TestFunction::eval_sym(const SymDeriv& d, double y) const {
    double w = y1_ - y0_;
    double t = (y - y0_) / w;
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double u = t * (1.0 - t);
    double logs = -1.0 / u - d.m * std::log(u);
    if (logs < -700.0) return 0.0;
    return poly_eval(d.p, t) * std::exp(logs);
}

double TestFunction::operator()(double y) const {
    if (tab_) {
        if (y <= y0_ || y >= y1_) return 0.0;
        return tab_(y);
    }
    return eval_sym((*plain_)[0], y);
}

double TestFunction::tab_deriv(int order, double y) const {
    if (order == 0) return (*this)(y);
    double h = std::max(1e-5 * (y1_ - y0_), 1e-7 * std::max(1.0, std::fabs(y)));
    return (tab_deriv(order - 1, y + h) - tab_deriv(order - 1, y - h)) / (2.0 * h);
}

double TestFunction::deriv(int order, double y) const {
    if (order < 0) throw ConfigError("TestFunction::deriv: negative order");
    if (tab_) return tab_deriv(order, y);
    if (order > kMaxOrder)
        throw ConfigError("TestFunction: derivative order beyond available tower");
    return eval_sym((*plain_)[order], y);
}

double TestFunction::invariant_deriv(int order, double y) const {
    if (order < 0) throw ConfigError("TestFunction::invariant_deriv: negative order");
    if (tab_) {
        if (order == 0) return (*this)(y);
        double h = std::max(1e-5 * (y1_ - y0_), 1e-7 * std::max(1.0, std::fabs(y)));
        return y * (invariant_deriv(order - 1, y + h) - invariant_deriv(order - 1, y - h)) /
               (2.0 * h);
    }
    if (order > kMaxOrder)
        throw ConfigError("TestFunction: derivative order beyond available tower");
    return eval_sym((*invariant_)[order], y);
}

namespace {

// 32-point Gauss-Legendre nodes/weights on [-1, 1] (symmetric halves)
struct GL32 {
    double x[16], w[16];
    GL32() {
        static const double xs[16] = {
            0.0483076656877383162, 0.1444719615827964934, 0.2392873622521370745,
            0.3318686022821276497, 0.4213512761306353453, 0.5068999089322293900,
            0.5877157572407623290, 0.6630442669302152009, 0.7321821187402896803,
            0.7944837959679424069, 0.8493676137325699701, 0.8963211557660521239,
            0.9349060759377396891, 0.9647622555875064307, 0.9856115115452683354,
            0.9972638618494815635};
        static const double ws[16] = {
            0.0965400885147278006, 0.0956387200792748594, 0.0938443990808045654,
            0.0911738786957638847, 0.0876520930044038111, 0.0833119242269467552,
            0.0781938957870703065, 0.0723457941088485062, 0.0658222227763618468,
            0.0586840934785355471, 0.0509980592623761762, 0.0428358980222266807,
            0.0342738629130214331, 0.0253920653092620595, 0.0162743947309056706,
            0.0070186100094700966};
        for (int i = 0; i < 16; ++i) { x[i] = xs[i]; w[i] = ws[i]; }
    }
};
const GL32 g_gl32;

}  // namespace

double gauss_legendre(double a, double b, const std::function<double(double)>& f,
                      int panels) {
    Kahan acc;
    double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * width, c = lo + 0.5 * width, h = 0.5 * width;
        for (int i = 0; i < 16; ++i) {
            acc.add(g_gl32.w[i] * h * f(c + h * g_gl32.x[i]));
            acc.add(g_gl32.w[i] * h * f(c - h * g_gl32.x[i]));
        }
    }
    return acc.value();
}

double TestFunction::integral() const {
    return gauss_legendre(y0_, y1_, [this](double y) { return (*this)(y); }, 16);
}

double TestFunction::sup_abs_second_deriv() const {
    double best = 0.0, at = y0_;
    int n = 4096;
    for (int i = 1; i < n; ++i) {
        double y = y0_ + (y1_ - y0_) * i / n;
        double v = std::fabs(deriv(2, y));
        if (v > best) { best = v; at = y; }
    }
    double lo = std::max(y0_, at - 2.0 * (y1_ - y0_) / n);
    double hi = std::min(y1_, at + 2.0 * (y1_ - y0_) / n);
    for (int i = 0; i <= 512; ++i) {
        double y = lo + (hi - lo) * i / 512;
        best = std::max(best, std::fabs(deriv(2, y)));
    }
    return best;
}

double sobolev_norm(const TestFunction& f, int N) {
    if (N < 0) throw ConfigError("sobolev_norm: N must be >= 0");
    double lo = f.support_lo(), hi = f.support_hi();
    if (!(lo > 0.0) || !(hi > lo)) throw ConfigError("sobolev_norm: bad support");
    double best = 0.0;
    for (int j = 0; j <= N; ++j) {
        double jbest = 0.0, at = lo;
        double llo = std::log(lo), lhi = std::log(hi);
        int n = std::max(64, static_cast<int>(4096.0 * (lhi - llo)));
        for (int i = 1; i < n; ++i) {
            double y = std::exp(llo + (lhi - llo) * i / n);
            double v = std::pow(y + 1.0 / y, N) * std::fabs(f.invariant_deriv(j, y));
            if (v > jbest) { jbest = v; at = y; }
        }
        double step = (lhi - llo) / n;
        for (int i = 0; i <= 256; ++i) {
            double y = std::exp(std::log(at) - step + 2.0 * step * i / 256);
            if (y <= lo || y >= hi) continue;
            double v = std::pow(y + 1.0 / y, N) * std::fabs(f.invariant_deriv(j, y));
            jbest = std::max(jbest, v);
        }
        best = std::max(best, jbest);
    }
    return best;
}

}  // namespace qprog
