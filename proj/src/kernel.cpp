#include "gtdpp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "gtdpp/logdomain.hpp"

namespace gtdpp {

namespace {

void check_row(const TopRow& x, int r) {
    if (r < 1 || r > x.n() - 1) throw DomainError("row index must lie in {1,...,n-1}");
}

/// m! * [y^m] prod_i (y + d_i), by sequential coefficient build.
double shifted_poly_derivative(const std::vector<double>& d, int m) {
    const int deg = static_cast<int>(d.size());
    if (m > deg) return 0.0;
    std::vector<double> coeff(deg + 1, 0.0);
    coeff[0] = 1.0;
    int top = 0;
    for (double di : d) {
        ++top;
        for (int j = top; j >= 1; --j) coeff[j] = coeff[j - 1] + di * coeff[j];
        coeff[0] *= di;
    }
    double mfac = 1.0;
    for (int j = 2; j <= m; ++j) mfac *= j;
    return mfac * coeff[m];
}

}  // namespace

double phi(int r, int s, double u, double v) {
    if (!(v > u) || s <= r) return 0.0;
    if (s == r + 1) return 1.0;
    return std::exp((s - r - 1) * std::log(v - u) - std::lgamma(s - r));
}

double ktilde_exact(const TopRow& x, ParticleCoord p, ParticleCoord q) {
    const int n = x.n();
    if (n > kExactSizeLimit)
        throw SizeError("exact path limited to n <= 40; use the contour path");
    check_row(x, p.r);
    check_row(x, q.r);
    const double u = p.u, v = q.u;
    const int r = p.r, s = q.r;

    SignedLog total = SignedLog::zero();
    for (int j = 0; j < n; ++j) {
        const double xj = x[j];
        if (!(xj > u)) continue;

        // (x_j - u)^(n-r-1) / (n-r-1)!
        SignedLog factor((n - r - 1) * std::log(xj - u) - std::lgamma(n - r), +1);

        // d^(n-s)/dv^(n-s) prod_{i != j} (v - x_i), via the y-shifted product
        std::vector<double> diffs;
        diffs.reserve(n - 1);
        for (int i = 0; i < n; ++i)
            if (i != j) diffs.push_back(v - x[i]);
        const double deriv = shifted_poly_derivative(diffs, n - s);
        if (deriv == 0.0) continue;
        factor *= SignedLog::from_value(deriv);

        // / prod_{i != j} (x_j - x_i)
        for (int i = 0; i < n; ++i) {
            if (i == j) continue;
            factor = factor / SignedLog::from_value(xj - x[i]);
        }
        total += factor;
    }
    return total.value();
}

double kernel(const TopRow& x, ParticleCoord p, ParticleCoord q) {
    return ktilde_exact(x, p, q) - phi(p.r, q.r, p.u, q.u);
}

ContourSpec choose_contours(const TopRow& x, double u, double v) {
    const int n = x.n();
    for (int i = 0; i < n; ++i)
        if (std::fabs(x[i] - u) < 1e-12)
            throw DegenerateError("u collides with a top-row point");

    double above_max = -std::numeric_limits<double>::infinity();
    double above_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        if (x[i] > u) {
            above_max = std::max(above_max, x[i]);
            above_min = std::min(above_min, x[i]);
        }
    }
    if (!std::isfinite(above_max))
        throw DegenerateError("no top-row points above u: empty inner contour");

    ContourSpec spec;
    spec.inner_center = 0.5 * (above_max + above_min);
    // reach down to the midpoint of the gap between u and the points above it
    spec.inner_radius = spec.inner_center - 0.5 * (u + above_min);
    spec.outer_center = spec.inner_center;
    spec.outer_radius =
        1.5 * std::max(spec.inner_radius, std::fabs(v - spec.outer_center));
    spec.points_per_circle = 512;
    return spec;
}

namespace {

void validate_contours(const TopRow& x, double u, double v, const ContourSpec& spec) {
    const int n = x.n();
    for (int i = 0; i < n; ++i) {
        const double dist = std::fabs(x[i] - spec.inner_center);
        if (x[i] > u && !(dist < spec.inner_radius))
            throw ContourError("inner circle misses a point above u");
        if (x[i] < u && !(dist > spec.inner_radius))
            throw ContourError("inner circle swallows a point below u");
    }
    if (!(std::fabs(spec.outer_center - spec.inner_center) + spec.inner_radius <
          spec.outer_radius))
        throw ContourError("outer circle does not enclose the inner circle");
    if (!(std::fabs(v - spec.outer_center) < spec.outer_radius))
        throw ContourError("outer circle does not enclose v");
}

struct LogIntegrand {
    // n f_n(w) = sum_i log(w - x_i) - (n - s + 1) log(w - v)
    // n f~_n(z) = sum_i log(z - x_i) - (n - r - 1) log(z - u)
    const TopRow& x;
    double u, v;
    int r, s;

    cplx w_part(cplx w) const {
        cplx acc = 0.0;
        for (int i = 0; i < x.n(); ++i) acc += std::log(w - x[i]);
        acc -= static_cast<double>(x.n() - s + 1) * std::log(w - v);
        return acc;
    }
    cplx z_part(cplx z) const {  // -n f~_n(z)
        cplx acc = 0.0;
        for (int i = 0; i < x.n(); ++i) acc -= std::log(z - x[i]);
        acc += static_cast<double>(x.n() - r - 1) * std::log(z - u);
        return acc;
    }
};

/// One trapezoid pass with N points per circle; returns log-scaled value:
/// J = exp(shift) * sum_value.
std::pair<double, cplx> jn_pass(const LogIntegrand& li, const ContourSpec& spec, int N) {
    const double two_pi = 2.0 * M_PI;
    std::vector<cplx> wp(N), zp(N), wnode(N), znode(N);
    double mw = -std::numeric_limits<double>::infinity();
    double mz = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < N; ++j) {
        const double phi_w = two_pi * j / N;
        const cplx e = std::polar(1.0, phi_w);
        wnode[j] = spec.outer_center + spec.outer_radius * e;
        znode[j] = spec.inner_center + spec.inner_radius * std::polar(1.0, two_pi * (j + 0.5) / N);
        wp[j] = li.w_part(wnode[j]);
        zp[j] = li.z_part(znode[j]);
        mw = std::max(mw, wp[j].real());
        mz = std::max(mz, zp[j].real());
    }
    // A_j carries the dw factor, B_k the dz factor; (1/(2 pi i)) dw over the
    // circle contributes rho e^{i phi} / N per node
    std::vector<cplx> A(N), B(N);
    for (int j = 0; j < N; ++j) {
        A[j] = std::exp(wp[j] - mw) * (wnode[j] - spec.outer_center);
        B[j] = std::exp(zp[j] - mz) * (znode[j] - spec.inner_center);
    }
    cplx sum = 0.0;
    for (int j = 0; j < N; ++j) {
        cplx row = 0.0;
        for (int k = 0; k < N; ++k) row += B[k] / (wnode[j] - znode[k]);
        sum += A[j] * row;
    }
    sum /= static_cast<double>(N) * static_cast<double>(N);
    return {mw + mz, sum};
}

/// Converged J_n as (shift, value): J_n = exp(shift) * value.
std::pair<double, cplx> jn_log(const TopRow& x, ParticleCoord p, ParticleCoord q,
                               const ContourSpec& spec, double rtol) {
    const int n = x.n();
    check_row(x, p.r);
    check_row(x, q.r);
    if (p.r > n - 2) throw DomainError("contour path requires r <= n-2");
    validate_contours(x, p.u, q.u, spec);

    const LogIntegrand li{x, p.u, q.u, p.r, q.r};
    int N = std::max(spec.points_per_circle, 16);
    auto prev = jn_pass(li, spec, N);
    while (N < (1 << 14)) {
        N *= 2;
        auto cur = jn_pass(li, spec, N);
        const cplx prev_val = prev.second * std::exp(cplx(prev.first - cur.first, 0.0));
        const double denom = std::max(std::abs(cur.second), 1e-300);
        if (std::abs(cur.second - prev_val) <= rtol * denom) return cur;
        prev = cur;
    }
    throw NonConvergedError("contour quadrature did not converge by 2^14 points");
}

}  // namespace

cplx jn_quadrature(const TopRow& x, ParticleCoord p, ParticleCoord q,
                   const ContourSpec& spec, double rtol) {
    auto [shift, val] = jn_log(x, p, q, spec, rtol);
    return val * std::exp(cplx(shift, 0.0));
}

double kernel_quadrature(const TopRow& x, ParticleCoord p, ParticleCoord q,
                         const ContourSpec& spec, double rtol) {
    const int n = x.n();
    auto [shift, val] = jn_log(x, p, q, spec, rtol);
    const double logratio = std::lgamma(n - q.r + 1) - std::lgamma(n - p.r);
    const cplx k = val * std::exp(cplx(shift + logratio, 0.0));
    return k.real() - phi(p.r, q.r, p.u, q.u);
}

double kernel_density(const TopRow& x, double u, int r) {
    check_row(x, r);
    if (u >= x.max() || u <= x.min()) return 0.0;
    if (x.n() <= kExactSizeLimit) return kernel(x, {u, r}, {u, r});
    const ContourSpec spec = choose_contours(x, u, u);
    return kernel_quadrature(x, {u, r}, {u, r}, spec);
}

double expected_count(const TopRow& x, int r, double lo, double hi, int quad_points) {
    check_row(x, r);
    if (!(hi > lo)) return 0.0;
    // particles live inside [x_n, x_1]; clip and split at top-row positions
    const double clo = std::max(lo, x.min());
    const double chi_ = std::min(hi, x.max());
    if (!(chi_ > clo)) return 0.0;
    std::vector<double> cuts = {clo, chi_};
    for (int i = 0; i < x.n(); ++i)
        if (x[i] > clo && x[i] < chi_) cuts.push_back(x[i]);
    std::sort(cuts.begin(), cuts.end());

    using gauss = boost::math::quadrature::gauss<double, 32>;
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double a = cuts[i], b = cuts[i + 1];
        if (!(b - a > 1e-13)) continue;
        // keep panels at a resolution the rule handles; split further if wide
        const int pieces = std::max(1, quad_points / 32);
        for (int pc = 0; pc < pieces; ++pc) {
            const double pa = a + (b - a) * pc / pieces;
            const double pb = a + (b - a) * (pc + 1) / pieces;
            total += gauss::integrate([&](double u) { return kernel_density(x, u, r); },
                                      pa, pb);
        }
    }
    return total;
}

}  // namespace gtdpp
