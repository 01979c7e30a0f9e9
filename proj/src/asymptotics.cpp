#include "gtdpp/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gtdpp/region.hpp"

namespace gtdpp {

namespace {

double log_factor(int k) {  // (k-1)! with sign (-1)^(k-1), as a double
    double f = 1.0;
    for (int j = 2; j <= k - 1; ++j) f *= j;
    return ((k - 1) % 2 == 0) ? f : -f;
}

cplx log_sum_deriv(const TopRow& x, cplx w, int k) {
    cplx acc = 0.0;
    if (k == 0) {
        for (int i = 0; i < x.n(); ++i) acc += std::log(w - x[i]);
    } else {
        const double f = log_factor(k);
        for (int i = 0; i < x.n(); ++i) acc += f / std::pow(w - x[i], k);
    }
    return acc / static_cast<double>(x.n());
}

cplx pole_term(double pole, cplx w, int k) {
    if (k == 0) return std::log(w - pole);
    return log_factor(k) / std::pow(w - pole, k);
}

void check_off_poles(const TopRow& x, double extra, cplx w) {
    if (std::fabs(w.imag()) > 1e-14) return;
    for (int i = 0; i < x.n(); ++i)
        if (std::fabs(w.real() - x[i]) <= 1e-14)
            throw PoleError("evaluation point collides with a top-row point");
    if (std::fabs(w.real() - extra) <= 1e-14)
        throw PoleError("evaluation point collides with the particle position");
}

/// Re f_n with coefficient c on the particle log; cheap real-only path.
double re_logsum(const TopRow& x, double pos, double coeff, cplx w) {
    const double wr = w.real(), wi = w.imag();
    double acc = 0.0;
    for (int i = 0; i < x.n(); ++i) {
        const double dx = wr - x[i];
        acc += 0.5 * std::log(dx * dx + wi * wi);
    }
    acc /= x.n();
    const double dp = wr - pos;
    return acc - coeff * 0.5 * std::log(dp * dp + wi * wi);
}

double newton_real_root(const TopRow& x, double pos, double coeff, double seed) {
    auto d1 = [&](double w) {
        double acc = 0.0;
        for (int i = 0; i < x.n(); ++i) acc += 1.0 / (w - x[i]);
        return acc / x.n() - coeff / (w - pos);
    };
    auto d2 = [&](double w) {
        double acc = 0.0;
        for (int i = 0; i < x.n(); ++i) acc -= 1.0 / ((w - x[i]) * (w - x[i]));
        return acc / x.n() + coeff / ((w - pos) * (w - pos));
    };
    double w = seed;
    for (int it = 0; it < 100; ++it) {
        const double g = d1(w);
        const double d = d2(w);
        if (d == 0.0) break;
        const double step = g / d;
        w -= step;
        if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(w))) break;
    }
    if (!(std::fabs(d1(w)) < 1e-9))
        throw ConvergenceError("steepest-descent root refinement failed");
    return w;
}

}  // namespace

cplx f_n_value(const TopRow& x, double v, int s_n, cplx w) {
    check_off_poles(x, v, w);
    const double c = 1.0 - (s_n - 1.0) / x.n();
    return log_sum_deriv(x, w, 0) - c * pole_term(v, w, 0);
}

cplx f_n_deriv(const TopRow& x, double v, int s_n, cplx w, int k) {
    if (k < 1) throw DomainError("derivative order must be positive");
    check_off_poles(x, v, w);
    const double c = 1.0 - (s_n - 1.0) / x.n();
    return log_sum_deriv(x, w, k) - c * pole_term(v, w, k);
}

cplx f_tilde_n_value(const TopRow& x, double u, int r_n, cplx w) {
    check_off_poles(x, u, w);
    const double c = 1.0 - (r_n + 1.0) / x.n();
    return log_sum_deriv(x, w, 0) - c * pole_term(u, w, 0);
}

cplx f_tilde_n_deriv(const TopRow& x, double u, int r_n, cplx w, int k) {
    if (k < 1) throw DomainError("derivative order must be positive");
    check_off_poles(x, u, w);
    const double c = 1.0 - (r_n + 1.0) / x.n();
    return log_sum_deriv(x, w, k) - c * pole_term(u, w, k);
}

std::pair<double, double> nonasymptotic_map(const TopRow& x, double t, double s) {
    if (!(t > s) || !(s > x.max()))
        throw DomainError("nonasymptotic_map requires t > s > x_1");
    auto Cn = [&](double w) {
        double acc = 0.0;
        for (int i = 0; i < x.n(); ++i) acc += 1.0 / (w - x[i]);
        return acc / x.n();
    };
    const double Ct = Cn(t), Cs = Cn(s);
    const double dc = Ct - Cs;
    return {(t * Ct - s * Cs) / dc, 1.0 + Ct * Cs * (t - s) / dc};
}

double xi_for(const AtomicMeasure& mu, double t, double s, double chi, double eta) {
    auto chain = [&](double xi) {
        return t - 4 * xi > s + 4 * xi && s - 4 * xi > mu.b() + 4 * xi &&
               mu.b() - 4 * xi > chi + 4 * xi && chi - 4 * xi > mu.a() + 4 * xi &&
               1 - 2 * xi > 1 - eta + 2 * xi && 1 - eta - 2 * xi > 2 * xi;
    };
    double lo = 0.0, hi = mu.spread();
    if (!chain(1e-300)) throw DomainError("isolation chain cannot be satisfied");
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (chain(mid))
            lo = mid;
        else
            hi = mid;
    }
    return 0.9 * lo;  // 10% slack
}

SteepestSetup make_setup(const AtomicMeasure& mu, const TopRow& x, double t, double s,
                         double theta) {
    const auto [chi, eta] = outside_map(mu, t, s);
    const int r = std::clamp(static_cast<int>(std::lround(x.n() * eta)), 1, x.n() - 1);
    return make_setup_explicit(mu, x, t, s, theta, chi, r, chi, r);
}

SteepestSetup make_setup_explicit(const AtomicMeasure& mu, const TopRow& x, double t,
                                  double s, double theta, double u_n, int r_n,
                                  double v_n, int s_n) {
    if (!(theta > 1.0 / 3.0 && theta < 0.5))
        throw DomainError("theta must lie in (1/3, 1/2)");
    if (r_n < 1 || r_n > x.n() - 1 || s_n < 1 || s_n > x.n() - 1)
        throw DomainError("rows must lie in {1,...,n-1}");
    const auto [chi, eta] = outside_map(mu, t, s);
    const auto [chi_n, eta_n] = nonasymptotic_map(x, t, s);

    SteepestSetup st{mu, x, t, s, theta, 0.0, chi, eta, chi_n, eta_n, u_n, v_n, r_n, s_n};
    st.xi = xi_for(mu, t, s, chi, eta);
    const int n = x.n();
    st.m_n = 0.0;
    st.m_tilde_n = 0.0;
    st.y1_n = n * (v_n - chi_n);
    st.y2_n = s_n - 1.0 - n * eta_n;
    st.y1_tilde_n = n * (u_n - chi_n);
    st.y2_tilde_n = r_n + 1.0 - n * eta_n;
    return st;
}

FeasibilityReport feasibility_check(const SteepestSetup& st) {
    FeasibilityReport rep;
    auto add = [&](const std::string& name, double lhs, double rhs) {
        rep.items.push_back({name, lhs, rhs, lhs < rhs});
    };
    const AtomicMeasure& mu = st.mu;
    const TopRow& x = st.x;
    const int n = st.n();
    const double xi = st.xi, theta = st.theta;

    add("xi-chain: 8xi < t-s", 8 * xi, st.t - st.s);
    add("xi-chain: 8xi < s-b", 8 * xi, st.s - mu.b());
    add("xi-chain: 8xi < b-chi", 8 * xi, mu.b() - st.chi);
    add("xi-chain: 8xi < chi-a", 8 * xi, st.chi - mu.a());
    add("xi-chain: 4xi < eta", 4 * xi, st.eta);
    add("xi-chain: 4xi < 1-eta", 4 * xi, 1.0 - st.eta);

    add("x1 < b+4xi", x.max(), mu.b() + 4 * xi);
    add("b-4xi < x1", mu.b() - 4 * xi, x.max());
    add("xn < a+4xi", x.min(), mu.a() + 4 * xi);
    add("a-4xi < xn", mu.a() - 4 * xi, x.min());

    const double dev_chi = std::max({std::fabs(st.chi_n - st.chi), std::fabs(st.v_n - st.chi),
                                     std::fabs(st.u_n - st.chi)});
    add("chi_n,v_n,u_n within chi+-4xi", dev_chi, 4 * xi);
    const double dev_eta =
        std::max({std::fabs(st.eta_n - st.eta), std::fabs((st.s_n - 1.0) / n - st.eta),
                  std::fabs((st.r_n + 1.0) / n - st.eta)});
    add("row heights within eta+-2xi", dev_eta, 2 * xi);

    const double hi_particle = std::max(st.u_n, st.v_n);
    const double lo_particle = std::min(st.u_n, st.v_n);
    add("top-row points above particles", hi_particle, x.max());
    add("top-row points below particles", x.min(), lo_particle);

    add("n^(1/3-theta) < 1/2", std::pow(n, 1.0 / 3.0 - theta), 0.5);
    add("n^(theta-1/2) < 1/2", std::pow(n, theta - 0.5), 0.5);
    add("n^-theta < xi", std::pow(n, -theta), xi);
    add("n^-1/2 < xi/2", std::pow(n, -0.5), 0.5 * xi);
    add("|v_n-u_n| < xi/2", std::fabs(st.v_n - st.u_n), 0.5 * xi);
    add("1/n < xi", 1.0 / n, xi);

    const double fpp_t = f_prime(mu, st.chi, st.eta, cplx(st.t, 0.0), 2).real();
    add("n^-theta < 2^-6 (t-chi)(t-b)^3 |f''(t)| / (b-a)", std::pow(n, -theta),
        std::pow(2.0, -6) * (st.t - st.chi) * std::pow(st.t - mu.b(), 3) *
            std::fabs(fpp_t) / mu.spread());

    // Taylor-remainder surrogate: third derivatives bounded by central
    // differences of the second derivative on the disk boundary
    const double rad = 2.0 * std::pow(n, -theta);
    auto sup_fd3 = [&](auto&& second, double center) {
        const double h = 1e-6 * std::max(1.0, std::fabs(center));
        double m3 = 0.0;
        for (int j = 0; j < 64; ++j) {
            const cplx w = center + rad * std::polar(1.0, 2.0 * M_PI * j / 64.0);
            const cplx d3 = (second(w + h) - second(w - h)) / (2.0 * h);
            m3 = std::max(m3, std::abs(d3));
        }
        return m3;
    };
    auto fn2 = [&](cplx w) { return f_n_deriv(x, st.v_n, st.s_n, w, 2); };
    auto ftn2 = [&](cplx w) { return f_tilde_n_deriv(x, st.u_n, st.r_n, w, 2); };
    const double fn1_t = std::abs(f_n_deriv(x, st.v_n, st.s_n, cplx(st.t, 0.0), 1));
    const double ftn1_s = std::abs(f_tilde_n_deriv(x, st.u_n, st.r_n, cplx(st.s, 0.0), 1));
    const double E2 = 2.0 * std::pow(n, 2 * theta) * fn1_t + (4.0 / 3.0) * sup_fd3(fn2, st.t);
    const double E2t =
        2.0 * std::pow(n, 2 * theta) * ftn1_s + (4.0 / 3.0) * sup_fd3(ftn2, st.s);
    add("n^(1-3theta) (E2+E2~) < 1", std::pow(n, 1.0 - 3.0 * theta) * (E2 + E2t), 1.0);

    rep.all_pass = std::all_of(rep.items.begin(), rep.items.end(),
                               [](const FeasibilityItem& it) { return it.pass; });
    return rep;
}

SteepestRoots steepest_roots(const SteepestSetup& st) {
    const TopRow& x = st.x;
    const int n = st.n();
    const double c_s = 1.0 - (st.s_n - 1.0) / n;
    const double c_r = 1.0 - (st.r_n + 1.0) / n;

    SteepestRoots out;
    out.t_n = newton_real_root(x, st.v_n, c_s, st.t);
    out.s_n_root = newton_real_root(x, st.v_n, c_s, st.s);
    out.t_tilde_n = newton_real_root(x, st.u_n, c_r, st.t);
    out.s_tilde_n = newton_real_root(x, st.u_n, c_r, st.s);

    const double primary = std::pow(n, -0.5);
    if (!(std::fabs(out.t_n - st.t) < primary))
        throw RootEscapeError("t_n escaped its n^-1/2 bracket");
    if (!(std::fabs(out.s_tilde_n - st.s) < primary))
        throw RootEscapeError("s~_n escaped its n^-1/2 bracket");
    if (!(std::fabs(out.s_n_root - st.s) < st.xi))
        throw RootEscapeError("s_n escaped its xi bracket");
    if (!(std::fabs(out.t_tilde_n - st.t) < st.xi))
        throw RootEscapeError("t~_n escaped its xi bracket");
    return out;
}

double ContourPath::length() const {
    double len = 0.0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i)
        len += std::abs(points[i + 1] - points[i]);
    if (points.size() > 2) len += std::abs(points.front() - points.back());
    return len;
}

int ContourPath::winding_number(cplx z0) const {
    double total = 0.0;
    const std::size_t m = points.size();
    for (std::size_t i = 0; i < m; ++i) {
        const cplx d1 = points[i] - z0;
        const cplx d2 = points[(i + 1) % m] - z0;
        total += std::arg(d2 / d1);
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

DescentContours descent_contours(const SteepestSetup& st, int samples_per_piece) {
    DescentContours dc;
    dc.roots = steepest_roots(st);
    const int n = st.n();
    const double h = std::pow(n, -st.theta);

    const cplx top_gamma(dc.roots.t_n, h);
    const cplx top_Gamma(dc.roots.s_tilde_n, h);
    dc.q_n = std::abs(top_gamma - st.v_n);
    dc.q_tilde_n = std::abs(top_Gamma - st.u_n);

    const double d = dc.roots.s_tilde_n - st.u_n;
    if (!(d > 0.0)) throw GeometryError("s~_n must lie right of u_n");
    const double ratio = 0.5 * dc.q_tilde_n * dc.q_tilde_n / (d * d);
    auto Rn = [&](double y) { return d * (1.0 - ratio * std::log(y)) * y; };
    auto In2 = [&](double y) { return dc.q_tilde_n * dc.q_tilde_n * y - Rn(y) * Rn(y); };
    for (int i = 1; i < 10000; ++i) {
        const double y = i / 10000.0;
        if (In2(y) < -1e-15) throw GeometryError("I_n^2 went negative on the grid");
    }

    const int S = std::max(samples_per_piece, 8);

    // gamma: line t -> t_n + i h, then the circle arc about v_n to v_n - q_n
    std::vector<cplx> upper;
    for (int i = 0; i < S; ++i)
        upper.push_back(cplx(st.t, 0.0) + (top_gamma - st.t) * (static_cast<double>(i) / S));
    const double beta = std::arg(top_gamma - st.v_n);
    dc.gamma_arc.clear();
    for (int i = 0; i <= S; ++i) {
        const double ang = beta + (M_PI - beta) * i / S;
        const cplx w = st.v_n + dc.q_n * std::polar(1.0, ang);
        dc.gamma_arc.push_back(w);
        upper.push_back(w);
    }
    dc.gamma.points = upper;
    for (std::size_t i = upper.size() - 1; i-- > 1;)
        dc.gamma.points.push_back(std::conj(upper[i]));

    // Gamma: line s -> s~_n + i h, then (R_n, I_n) down to u_n
    std::vector<cplx> upper2;
    for (int i = 0; i < S; ++i)
        upper2.push_back(cplx(st.s, 0.0) + (top_Gamma - st.s) * (static_cast<double>(i) / S));
    dc.Gamma_param.clear();
    for (int i = 0; i <= S; ++i) {
        const double y = 1.0 - static_cast<double>(i) / S;  // parameter of R_n, I_n
        cplx z;
        if (y <= 0.0)
            z = cplx(st.u_n, 0.0);
        else
            z = cplx(st.u_n + Rn(y), std::sqrt(std::max(In2(y), 0.0)));
        dc.Gamma_param.push_back(z);
        upper2.push_back(z);
    }
    dc.Gamma.points = upper2;
    for (std::size_t i = upper2.size() - 1; i-- > 1;)
        dc.Gamma.points.push_back(std::conj(upper2[i]));

    return dc;
}

TaylorQuantities taylor_quantities(const SteepestSetup& st, const SteepestRoots& roots) {
    const int n = st.n();
    const double h = std::pow(n, -st.theta);
    TaylorQuantities tq;
    tq.b_n = std::abs(cplx(roots.t_n - st.t, h)) * std::pow(n, st.theta);
    tq.b_tilde_n = std::abs(cplx(roots.s_tilde_n - st.s, h)) * std::pow(n, st.theta);
    tq.alpha_n = std::arg(cplx(roots.t_n - st.t, h));
    tq.alpha_tilde_n = std::arg(cplx(roots.s_tilde_n - st.s, h));
    tq.D_n =
        std::sqrt(0.5 * std::abs(f_n_deriv(st.x, st.v_n, st.s_n, cplx(st.t, 0.0), 2)));
    tq.D_tilde_n = std::sqrt(
        0.5 * std::abs(f_tilde_n_deriv(st.x, st.u_n, st.r_n, cplx(st.s, 0.0), 2)));
    return tq;
}

DecayReport decay_estimate(const SteepestSetup& st) {
    if (st.r_n != st.s_n)
        throw DomainError("decay estimate requires r_n == s_n");
    const SteepestRoots roots = steepest_roots(st);
    const TaylorQuantities tq = taylor_quantities(st, roots);
    const int n = st.n();

    DecayReport rep;
    rep.t = st.t;
    rep.s = st.s;
    rep.chi_n = st.chi_n;
    rep.eta_n = st.eta_n;
    rep.t_n = roots.t_n;
    rep.s_n_root = roots.s_n_root;
    rep.t_tilde_n = roots.t_tilde_n;
    rep.s_tilde_n = roots.s_tilde_n;
    rep.D_n = tq.D_n;
    rep.D_tilde_n = tq.D_tilde_n;
    rep.exponent_n = f_n_value(st.x, st.v_n, st.s_n, cplx(st.t, 0.0)).real() -
                     f_tilde_n_value(st.x, st.u_n, st.r_n, cplx(st.s, 0.0)).real();
    rep.leading = std::exp(n * rep.exponent_n) /
                  (4.0 * M_PI * (st.t - st.s) * tq.D_n * tq.D_tilde_n);
    rep.kernel_estimate = (1.0 - static_cast<double>(st.s_n) / n) * rep.leading;
    rep.rel_envelope_taylor = std::pow(n, 1.0 - 3.0 * st.theta);
    const double dmin2 = std::min(tq.D_n * tq.D_n, tq.D_tilde_n * tq.D_tilde_n);
    rep.rel_envelope_tail =
        std::exp(-0.25 * std::pow(n, 1.0 - 2.0 * st.theta) * dmin2) *
        std::pow(n, 1.0 - st.theta);
    rep.envelope_constants_computed = false;
    return rep;
}

MonotonicityReport descent_monotonicity_probe(const SteepestSetup& st,
                                              const DescentContours& dc) {
    const double c_s = 1.0 - (st.s_n - 1.0) / st.n();
    const double c_r = 1.0 - (st.r_n + 1.0) / st.n();

    MonotonicityReport rep{-std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity()};
    const double ref_desc = re_logsum(st.x, st.v_n, c_s, dc.gamma_arc.front());
    for (const cplx& w : dc.gamma_arc)
        rep.descent_violation =
            std::max(rep.descent_violation, re_logsum(st.x, st.v_n, c_s, w) - ref_desc);

    const double ref_asc = re_logsum(st.x, st.u_n, c_r, dc.Gamma_param.front());
    for (std::size_t i = 0; i + 1 < dc.Gamma_param.size(); ++i)  // skip singular endpoint
        rep.ascent_violation = std::max(
            rep.ascent_violation, ref_asc - re_logsum(st.x, st.u_n, c_r, dc.Gamma_param[i]));
    return rep;
}

}  // namespace gtdpp
