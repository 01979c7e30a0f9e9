#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gtdpp/measure.hpp"

namespace gtdpp {

/// f_n(w) = (1/n) sum_i log(w - x_i) - (1 - (s_n - 1)/n) log(w - v).
cplx f_n_value(const TopRow& x, double v, int s_n, cplx w);
/// k-th derivative of f_n.
cplx f_n_deriv(const TopRow& x, double v, int s_n, cplx w, int k);

/// f~_n(w) = (1/n) sum_i log(w - x_i) - (1 - (r_n + 1)/n) log(w - u).
cplx f_tilde_n_value(const TopRow& x, double u, int r_n, cplx w);
cplx f_tilde_n_deriv(const TopRow& x, double u, int r_n, cplx w, int k);

/// Finite-n analogue of the outside map, built from the empirical Cauchy
/// transform of the top row.
std::pair<double, double> nonasymptotic_map(const TopRow& x, double t, double s);

/// All data needed by the steepest descent quantities: the limiting measure,
/// the top row, the outside pair (t, s), the exponent theta in (1/3, 1/2),
/// the isolation margin xi, and the particle coordinates.
struct SteepestSetup {
    AtomicMeasure mu;
    TopRow x;
    double t, s;
    double theta;
    double xi;
    double chi, eta;      // limiting outside point
    double chi_n, eta_n;  // non-asymptotic outside point
    double u_n, v_n;
    int r_n, s_n;
    // offsets relative to (chi_n, eta_n) in the scaled particle coordinates
    double m_n = 0.0, m_tilde_n = 0.0;
    double y1_n = 0.0, y2_n = 0.0, y1_tilde_n = 0.0, y2_tilde_n = 0.0;

    int n() const { return x.n(); }
};

/// Default setup: zero first-order offsets, particle at (chi, round(n eta)).
SteepestSetup make_setup(const AtomicMeasure& mu, const TopRow& x, double t, double s,
                         double theta = 5.0 / 12.0);

/// Setup with explicit particle coordinates (bound-checked, not prescribed).
SteepestSetup make_setup_explicit(const AtomicMeasure& mu, const TopRow& x, double t,
                                  double s, double theta, double u_n, int r_n,
                                  double v_n, int s_n);

/// Largest xi compatible with the isolation chain, with 10% slack.
double xi_for(const AtomicMeasure& mu, double t, double s, double chi, double eta);

struct FeasibilityItem {
    std::string name;
    double lhs, rhs;  // condition is lhs < rhs
    bool pass;
};

struct FeasibilityReport {
    std::vector<FeasibilityItem> items;
    bool all_pass = false;
};

/// Structured pass/fail for every inequality the decay bound requires at
/// this n. Report only; never throws on failure.
FeasibilityReport feasibility_check(const SteepestSetup& setup);

/// First n in candidates for which the setup built by factory passes.
/// Returns -1 when none does.
template <typename Factory>
int first_feasible_n(const std::vector<int>& candidates, Factory&& factory) {
    for (int n : candidates)
        if (feasibility_check(factory(n)).all_pass) return n;
    return -1;
}

struct SteepestRoots {
    double t_n;         // root of f_n' near t
    double s_n_root;    // root of f_n' near s
    double t_tilde_n;   // root of f~_n' near t
    double s_tilde_n;   // root of f~_n' near s
};

/// Newton-refined roots of f_n' and f~_n' near t and s. The primary roots
/// t_n and s~_n must stay within n^(-1/2) of their seeds, the secondary
/// roots within xi; violation raises RootEscapeError.
SteepestRoots steepest_roots(const SteepestSetup& setup);

/// Sampled polygonal contour, closed, counter-clockwise.
struct ContourPath {
    std::vector<cplx> points;
    double length() const;
    /// Winding number about z0 by summed argument increments.
    int winding_number(cplx z0) const;
};

struct DescentContours {
    ContourPath gamma;        // closed w-contour through t
    ContourPath Gamma;        // closed z-contour through s
    std::vector<cplx> gamma_arc;    // upper arc piece of gamma (descent check)
    std::vector<cplx> Gamma_param;  // upper parametric piece of Gamma (ascent check)
    double q_n, q_tilde_n;
    SteepestRoots roots;
};

/// The descent/ascent contours: gamma runs from t to t_n + i n^-theta, then
/// around the circle about v_n; Gamma runs from s to s~_n + i n^-theta, then
/// along (R_n, I_n) down to u_n; both mirrored into the lower half plane.
/// GeometryError if I_n^2 goes negative on a 10^4-point grid.
DescentContours descent_contours(const SteepestSetup& setup, int samples_per_piece = 512);

struct TaylorQuantities {
    double b_n, b_tilde_n;
    double alpha_n, alpha_tilde_n;
    double D_n, D_tilde_n;
};

TaylorQuantities taylor_quantities(const SteepestSetup& setup, const SteepestRoots& roots);

struct DecayReport {
    double t, s;
    double chi_n, eta_n;
    double t_n, s_n_root, t_tilde_n, s_tilde_n;
    double D_n, D_tilde_n;
    double exponent_n;       // f_n(t) - f~_n(s)
    double leading;          // exp(n exponent_n) / (4 pi (t-s) D_n D~_n), the n J_n term
    double kernel_estimate;  // (1 - s_n/n) * leading
    // relative error envelopes with unit constants; the true constants are
    // not assembled
    double rel_envelope_taylor;  // n^(1-3 theta)
    double rel_envelope_tail;    // exp(-n^(1-2 theta) (D^2 ^ D~^2)/4) n^(1-theta)
    bool envelope_constants_computed = false;
};

/// Leading-order decay quantities. Requires r_n == s_n.
DecayReport decay_estimate(const SteepestSetup& setup);

struct MonotonicityReport {
    double descent_violation;  // max over the arc of Re f_n(w) - Re f_n(arc start)
    double ascent_violation;   // max over the piece of Re f~_n(start) - Re f~_n(z)
};

/// Samples Re f_n along the gamma arc (must not exceed its start) and
/// Re f~_n along the Gamma parametric piece (must not drop below its start).
MonotonicityReport descent_monotonicity_probe(const SteepestSetup& setup,
                                              const DescentContours& contours);

}  // namespace gtdpp
