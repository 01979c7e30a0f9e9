#pragma once

#include <cmath>
#include <limits>

namespace gtdpp {

/// Signed log-domain scalar: value = sign * exp(log_mag).
/// Used where products of factorials, powers and Vandermonde-type
/// denominators overflow or underflow an IEEE double.
struct SignedLog {
    double log_mag = -std::numeric_limits<double>::infinity();
    int sign = 0;  // -1, 0, +1

    SignedLog() = default;
    SignedLog(double lm, int s) : log_mag(lm), sign(s) {}

    static SignedLog from_value(double v) {
        if (v == 0.0) return {};
        return {std::log(std::fabs(v)), v > 0 ? +1 : -1};
    }
    static SignedLog zero() { return {}; }
    static SignedLog one() { return {0.0, +1}; }

    bool is_zero() const { return sign == 0; }

    double value() const {
        if (sign == 0) return 0.0;
        return sign * std::exp(log_mag);
    }

    SignedLog operator*(const SignedLog& o) const {
        if (sign == 0 || o.sign == 0) return {};
        return {log_mag + o.log_mag, sign * o.sign};
    }
    SignedLog operator/(const SignedLog& o) const {
        if (sign == 0) return {};
        return {log_mag - o.log_mag, sign * o.sign};
    }

    /// log-sum-exp with sign tracking.
    SignedLog operator+(const SignedLog& o) const {
        if (sign == 0) return o;
        if (o.sign == 0) return *this;
        const SignedLog& big = (log_mag >= o.log_mag) ? *this : o;
        const SignedLog& small = (log_mag >= o.log_mag) ? o : *this;
        const double r = std::exp(small.log_mag - big.log_mag);  // in [0,1]
        const double t = (big.sign == small.sign) ? 1.0 + r : 1.0 - r;
        if (t <= 0.0) {
            if (t == 0.0) return {};
            // exact cancellation below representable resolution
            return {big.log_mag + std::log(-t), -big.sign};
        }
        return {big.log_mag + std::log(t), big.sign};
    }
    SignedLog& operator+=(const SignedLog& o) { return *this = *this + o; }
    SignedLog& operator*=(const SignedLog& o) { return *this = *this * o; }
};

}  // namespace gtdpp
