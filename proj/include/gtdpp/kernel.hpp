#pragma once

#include <utility>

#include "gtdpp/measure.hpp"

namespace gtdpp {

/// Particle coordinate (u, r): position u on row r, 1 <= r <= n-1.
struct ParticleCoord {
    double u;
    int r;
};

/// Two concentric-ish circles for the double contour integral: the inner
/// circle must enclose exactly the top-row points above u, the outer circle
/// must enclose the inner circle and v.
struct ContourSpec {
    double inner_center = 0.0;
    double inner_radius = 0.0;
    double outer_center = 0.0;
    double outer_radius = 0.0;
    int points_per_circle = 512;
};

/// phi_{r,s}(u,v): 0 unless v > u and s > r; 1 when s = r+1;
/// (v-u)^(s-r-1)/(s-r-1)! when s > r+1.
double phi(int r, int s, double u, double v);

/// Size gate between the exact polynomial path and the contour path.
constexpr int kExactSizeLimit = 40;

/// Exact evaluation of the pre-kernel K~ by polynomial derivative
/// manipulation; valid for n <= kExactSizeLimit.
double ktilde_exact(const TopRow& x, ParticleCoord p, ParticleCoord q);

/// Correlation kernel K = K~ - phi (exact path).
double kernel(const TopRow& x, ParticleCoord p, ParticleCoord q);

/// Double contour integral J_n by trapezoidal quadrature on the two circles,
/// integrand exp(n f_n(w) - n f~_n(z)) / (w - z) handled in log domain.
/// Points per circle double until the relative change drops below rtol.
cplx jn_quadrature(const TopRow& x, ParticleCoord p, ParticleCoord q,
                   const ContourSpec& spec, double rtol = 1e-9);

/// Kernel assembled from the contour path:
/// (n-s)!/(n-r-1)! * J_n - phi, factorial ratio in log domain.
double kernel_quadrature(const TopRow& x, ParticleCoord p, ParticleCoord q,
                         const ContourSpec& spec, double rtol = 1e-9);

/// Contours satisfying the enclosure conditions for given u, v, with
/// clearance factor 1.5 on the outer circle.
ContourSpec choose_contours(const TopRow& x, double u, double v);

/// Diagonal kernel value at (u, r), choosing the evaluation path by size.
double kernel_density(const TopRow& x, double u, int r);

/// Expected number of particles of row r in (lo, hi): Gauss-Legendre
/// integration of the diagonal kernel with panels split at the top-row
/// positions.
double expected_count(const TopRow& x, int r, double lo, double hi,
                      int quad_points = 32);

}  // namespace gtdpp
