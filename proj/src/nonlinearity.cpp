#include "greenlab/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

namespace greenlab {

Nonlinearity Nonlinearity::power(double p) {
    if (!(p >= 1.0)) throw NonlinearityError("power nonlinearity: need p >= 1");
    Nonlinearity g;
    g.eval_ = [p](double t) { return t == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(t), p), t); };
    g.desc_ = "power(p=" + std::to_string(p) + ")";
    g.power_exponent_ = p;
    return g;
}

Nonlinearity Nonlinearity::saturating(double cap) {
    if (!(cap > 0.0)) throw NonlinearityError("saturating nonlinearity: cap must be positive");
    Nonlinearity g;
    g.eval_ = [cap](double t) { return cap * std::tanh(t / cap); };
    g.desc_ = "saturating(cap=" + std::to_string(cap) + ")";
    g.bounded_ = true;
    return g;
}

Nonlinearity Nonlinearity::table(std::vector<double> t, std::vector<double> v) {
    const std::size_t n = t.size();
    if (n < 2 || v.size() != n) throw NonlinearityError("table nonlinearity: need >= 2 matching knots");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(t[i] > t[i - 1])) throw NonlinearityError("table nonlinearity: abscissae must increase");
        if (v[i] < v[i - 1]) throw NonlinearityError("table nonlinearity: values must be nondecreasing");
    }
    // Fritsch-Carlson slopes: keeps the cubic monotone on each interval
    std::vector<double> h(n - 1), d(n - 1), m(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = t[i + 1] - t[i];
        d[i] = (v[i + 1] - v[i]) / h[i];
    }
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0) { m[i] = 0.0; continue; }
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) { m[i] = m[i + 1] = 0.0; continue; }
        const double a = m[i] / d[i], b = m[i + 1] / d[i];
        const double r = a * a + b * b;
        if (r > 9.0) {
            const double tscale = 3.0 / std::sqrt(r);
            m[i] = tscale * a * d[i];
            m[i + 1] = tscale * b * d[i];
        }
    }
    Nonlinearity g;
    g.desc_ = "table(" + std::to_string(n) + " knots)";
    g.eval_ = [t = std::move(t), v = std::move(v), m = std::move(m)](double x) {
        const std::size_t n = t.size();
        if (x <= t.front()) return v.front() + m.front() * (x - t.front());
        if (x >= t.back()) return v.back() + m.back() * (x - t.back());
        const auto it = std::upper_bound(t.begin(), t.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
        const double h = t[i + 1] - t[i];
        const double u = (x - t[i]) / h;
        const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
        const double h10 = u * (1.0 - u) * (1.0 - u);
        const double h01 = u * u * (3.0 - 2.0 * u);
        const double h11 = u * u * (u - 1.0);
        return h00 * v[i] + h10 * h * m[i] + h01 * v[i + 1] + h11 * h * m[i + 1];
    };
    return g;
}

void Nonlinearity::audit(double span, int samples) const {
    if (std::abs(eval_(0.0)) > 1e-14)
        throw NonlinearityError("nonlinearity audit: g(0) != 0");
    double prev = eval_(-span);
    for (int i = 1; i < samples; ++i) {
        const double t = -span + 2.0 * span * i / (samples - 1);
        const double cur = eval_(t);
        if (cur < prev - 1e-12 * (1.0 + std::abs(cur)))
            throw NonlinearityError("nonlinearity audit: not nondecreasing");
        prev = cur;
    }
}

} // namespace greenlab
