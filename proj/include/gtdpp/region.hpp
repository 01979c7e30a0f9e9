#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gtdpp/measure.hpp"

namespace gtdpp {

enum class RegionLabel { Liquid, EdgePlus, EdgeMinus, Edge0, Edge1, Outside, Other };

std::string to_string(RegionLabel label);

/// Classified point with the witness data that certifies its label.
struct RegionPoint {
    double chi = 0.0;
    double eta = 0.0;
    RegionLabel label = RegionLabel::Other;
    std::optional<cplx> liquid_root;    // Liquid: the root in the upper half plane
    std::optional<double> edge_root;    // Edge+/-: the repeated real root
    int edge_multiplicity = 0;          // Edge+/-: its multiplicity (2 or 3)
    std::optional<std::pair<double, double>> outside_roots;  // Outside: (t, s), t > s > b
};

/// Local shape of the edge curve around a point, in the frame (x, y):
/// a(s) = a1 (s-t) + a2 (s-t)^2 + ..., b(s) = b1 (s-t)^2 + b2 (s-t)^3 + ...
struct EdgeLocalGeometry {
    double a1 = 0.0, a2 = 0.0, b1 = 0.0, b2 = 0.0;
    int m = 0;  // multiplicity of t as root of f' (0..3)
    double x_frame[2] = {0.0, 0.0};
    double y_frame[2] = {0.0, 0.0};
};

struct RealRoot {
    double x;
    int multiplicity;
};

enum class EdgeBranch { RPlus, RMinus, RZero, ROne };

struct EdgePoint {
    double chi;
    double eta;
    EdgeBranch branch;
};

enum class OutsideBoundarySide { Edge, Bottom, Right };

struct EdgeEpsilonBounds {
    double t_lo, t_hi;  // bracket for the upper root
    double s_lo, s_hi;  // bracket for the lower root
    double exponent_bound;  // strictly negative
    double c;               // curvature constant ((theta-chi) f'''(theta))^-1
};

/// f_{(chi,eta)}(w) = int log(w-x) mu[dx] - (1-eta) log(w-chi), principal logs.
cplx f_value(const AtomicMeasure& mu, double chi, double eta, cplx w);

/// k-th w-derivative of f_{(chi,eta)}, in closed form via the Cauchy transform.
cplx f_prime(const AtomicMeasure& mu, double chi, double eta, cplx w, int k = 1);

/// All real roots of f' in (lo, hi) with multiplicities. Pole-interval
/// bisection for sign changes of f' and f'' plus Newton refinement.
std::vector<RealRoot> real_roots(const AtomicMeasure& mu, double chi, double eta,
                                 double lo, double hi);

/// Every root of f' in the closed upper half plane: real roots carry their
/// multiplicity, the at-most-one root with positive imaginary part is listed
/// as is. Complex Newton with deflation from a deterministic seed grid.
struct RootCensus {
    std::vector<cplx> upper_roots;      // Im > 0
    std::vector<RealRoot> real_roots_;  // all real roots with multiplicity
};
RootCensus root_census(const AtomicMeasure& mu, double chi, double eta);

RegionPoint classify(const AtomicMeasure& mu, double chi, double eta,
                     double tol = 1e-9);

/// Forward liquid map H -> L.
std::pair<double, double> liquid_map(const AtomicMeasure& mu, cplx w);

/// Inverse liquid map: the unique root of f' in H. Throws NotInRegionError.
cplx liquid_inverse(const AtomicMeasure& mu, double chi, double eta);

/// Edge curve R -> boundary of L, with the branch of R the parameter lies in.
EdgePoint edge_curve(const AtomicMeasure& mu, double t);

EdgeLocalGeometry edge_local_geometry(const AtomicMeasure& mu, double t);

/// Forward outside map: (t, s) with t > s > b to (chi, eta).
std::pair<double, double> outside_map(const AtomicMeasure& mu, double t, double s);

/// Inverse outside map: the two simple roots in (b, inf), returned as (t, s).
std::pair<double, double> outside_inverse(const AtomicMeasure& mu, double chi,
                                          double eta);

/// Boundary pieces of O: the edge curve on (b, inf), the bottom curve
/// s -> (g(s), 0) with g(s) = s - 1/C(s), and the right curve
/// t -> (b, h(t)) with h(t) = 1 - (t-b) C(t).
std::pair<double, double> outside_boundary(const AtomicMeasure& mu,
                                           OutsideBoundarySide side, double param);

/// First-order coefficients (c1, c2) of the outside map at (t, s); both negative.
std::pair<double, double> outside_tangent(const AtomicMeasure& mu, double t, double s);

/// f(t) - f(s) at the outside witnesses; strictly negative.
double exponent(const AtomicMeasure& mu, double chi, double eta);

/// Root brackets theta +- sqrt(c eps), theta +- 2 sqrt(c eps) and the exponent
/// bound -(5/6) sqrt(c)/(theta-chi) eps^(3/2) for the point eps below the edge
/// point of parameter theta. eps is the vertical drop eta_E(theta) - eta.
/// With enforce set, the two sufficiency inequalities are checked and
/// EpsTooLargeError is thrown when they fail.
EdgeEpsilonBounds edge_epsilon_bounds(const AtomicMeasure& mu, double theta,
                                      double eps, bool enforce = true);

/// ||A||_t = sup { x : (x, t) in L }: solves eta_E(theta) = t on the
/// decreasing right edge branch; returns b when the top atom persists.
double free_compressed_norm(const AtomicMeasure& mu, double t);

namespace detail {
/// Multiplicity of a root of f' per the derivative-magnitude rule:
/// largest k <= 3 with |f^(j)| < mult_tol * |f^(k+1)| * spread^k for j=1..k.
int root_multiplicity(const AtomicMeasure& mu, double chi, double eta, double root);
constexpr double root_tol = 1e-11;  // tolerance on |f'| at a root
}  // namespace detail

}  // namespace gtdpp
