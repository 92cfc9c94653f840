#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace greenlab {

struct NonlinearityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Nondecreasing continuous absorption g with g(0) = 0.
/// Kinds: power |t|^{p-1} t, monotone-cubic table interpolant, bounded saturating.
class Nonlinearity {
  public:
    static Nonlinearity power(double p);
    static Nonlinearity linear() { return power(1.0); }
    /// Fritsch-Carlson monotone cubic through (t_i, g_i); extended linearly outside.
    static Nonlinearity table(std::vector<double> t, std::vector<double> g);
    /// g(t) = cap * tanh(t / cap); |g| < cap.
    static Nonlinearity saturating(double cap);

    double operator()(double t) const { return eval_(t); }
    const std::string& description() const { return desc_; }
    bool is_power() const { return power_exponent_ > 0.0; }
    double power_exponent() const { return power_exponent_; }
    bool is_bounded() const { return bounded_; }

    /// Checks g nondecreasing and g(0) = 0 on a sign-spanning sample; throws on failure.
    void audit(double span = 64.0, int samples = 257) const;

  private:
    Nonlinearity() = default;
    std::function<double(double)> eval_;
    std::string desc_;
    double power_exponent_ = 0.0; // > 0 iff power kind
    bool bounded_ = false;
};

} // namespace greenlab
