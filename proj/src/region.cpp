#include "gtdpp/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gtdpp {

namespace {

constexpr double kMultTol = 1e-6;

bool effectively_real(cplx w) { return std::fabs(w.imag()) < 1e-14; }

/// Poles of f' with residues: the atoms (residue w_i) and chi (residue
/// -(1-eta)), merged when chi coincides with an atom.
struct PoleSet {
    std::vector<double> pos;
    std::vector<double> residue;
};

PoleSet poles_of_f_prime(const AtomicMeasure& mu, double chi, double eta) {
    PoleSet p;
    bool chi_merged = false;
    for (const Atom& at : mu.atoms()) {
        double res = at.w;
        if (std::fabs(at.x - chi) <= AtomicMeasure::pole_tol) {
            res -= (1.0 - eta);
            chi_merged = true;
        }
        p.pos.push_back(at.x);
        p.residue.push_back(res);
    }
    if (!chi_merged && std::fabs(1.0 - eta) > 1e-15) {
        auto it = std::upper_bound(p.pos.begin(), p.pos.end(), chi);
        const auto idx = it - p.pos.begin();
        p.pos.insert(it, chi);
        p.residue.insert(p.residue.begin() + idx, -(1.0 - eta));
    }
    // drop removable singularities
    PoleSet q;
    for (std::size_t i = 0; i < p.pos.size(); ++i) {
        if (std::fabs(p.residue[i]) > 1e-15) {
            q.pos.push_back(p.pos[i]);
            q.residue.push_back(p.residue[i]);
        }
    }
    return q;
}

double f_prime_real(const AtomicMeasure& mu, double chi, double eta, double w) {
    return f_prime(mu, chi, eta, cplx(w, 0.0), 1).real();
}

double f_second_real(const AtomicMeasure& mu, double chi, double eta, double w) {
    return f_prime(mu, chi, eta, cplx(w, 0.0), 2).real();
}

/// Safeguarded Newton inside a sign-change bracket of fn.
template <typename F, typename DF>
double bracketed_newton(F fn, DF dfn, double lo, double hi, double flo) {
    double w = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fw = fn(w);
        if (fw == 0.0) return w;
        if ((fw > 0) == (flo > 0))
            lo = w;
        else
            hi = w;
        const double d = dfn(w);
        double next = (d != 0.0) ? w - fw / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - w) < 1e-16 * (1.0 + std::fabs(w))) return next;
        w = next;
    }
    return w;
}

/// Upper bound beyond which w*f'(w) stays within eta/2 of eta, so no roots.
double root_window(const AtomicMeasure& mu, double chi, double eta) {
    double m1 = 0.0;
    for (const Atom& at : mu.atoms()) m1 += at.w * std::fabs(at.x);
    const double num = m1 + (1.0 + std::fabs(1.0 - eta)) * std::fabs(chi) + mu.spread() + 1.0;
    const double floor_eta = std::max(eta, 1e-12);
    double w = 2.0 * std::max({std::fabs(mu.a()), std::fabs(mu.b()), std::fabs(chi)}) + 2.0;
    w = std::max(w, 4.0 * num / floor_eta);
    return std::min(w, 1e12);
}

struct Candidate {
    double x;
    int mult;
};

void merge_candidate(std::vector<Candidate>& roots, double x, int mult, double merge_eps) {
    for (Candidate& c : roots) {
        if (std::fabs(c.x - x) < merge_eps) {
            c.mult = std::max(c.mult, mult);
            return;
        }
    }
    roots.push_back({x, mult});
}

}  // namespace

std::string to_string(RegionLabel label) {
    switch (label) {
        case RegionLabel::Liquid: return "Liquid";
        case RegionLabel::EdgePlus: return "EdgePlus";
        case RegionLabel::EdgeMinus: return "EdgeMinus";
        case RegionLabel::Edge0: return "Edge0";
        case RegionLabel::Edge1: return "Edge1";
        case RegionLabel::Outside: return "Outside";
        case RegionLabel::Other: return "Other";
    }
    return "?";
}

cplx f_value(const AtomicMeasure& mu, double chi, double eta, cplx w) {
    const bool real_w = effectively_real(w);
    cplx s = 0.0;
    for (const Atom& at : mu.atoms()) {
        const cplx d = w - at.x;
        if (real_w && std::abs(d) <= AtomicMeasure::pole_tol)
            throw PoleError("f evaluated at an atom");
        s += at.w * std::log(d);
    }
    const double coeff = 1.0 - eta;
    if (std::fabs(coeff) > 1e-15) {
        const cplx d = w - chi;
        if (real_w && std::abs(d) <= AtomicMeasure::pole_tol)
            throw PoleError("f evaluated at chi");
        s -= coeff * std::log(d);
    }
    return s;
}

cplx f_prime(const AtomicMeasure& mu, double chi, double eta, cplx w, int k) {
    if (k < 1) throw DomainError("derivative order must be positive");
    const bool real_w = effectively_real(w);
    const cplx c = cauchy(mu, w, k - 1);  // throws PoleError at atoms
    const double coeff = 1.0 - eta;
    if (std::fabs(coeff) <= 1e-15) return c;
    const cplx d = w - chi;
    if (real_w && std::abs(d) <= AtomicMeasure::pole_tol)
        throw PoleError("f' evaluated at chi");
    double kfac = 1.0;
    for (int j = 2; j <= k - 1; ++j) kfac *= j;
    const double sgn = ((k - 1) % 2 == 0) ? 1.0 : -1.0;
    return c - coeff * sgn * kfac / std::pow(d, k);
}

namespace detail {

int root_multiplicity(const AtomicMeasure& mu, double chi, double eta, double root) {
    const double spread = mu.spread();
    double d[5];
    for (int j = 1; j <= 4; ++j)
        d[j] = std::abs(f_prime(mu, chi, eta, cplx(root, 0.0), j));
    int m = 0;
    for (int k = 1; k <= 3; ++k) {
        const double scale = d[k + 1] * std::pow(spread, k);
        bool ok = scale > 0.0;
        for (int j = 1; j <= k && ok; ++j) ok = d[j] < kMultTol * scale;
        if (ok) m = k;
    }
    return m;
}

}  // namespace detail

std::vector<RealRoot> real_roots(const AtomicMeasure& mu, double chi, double eta,
                                 double lo, double hi) {
    if (!(hi > lo)) throw DomainError("real_roots: empty interval");
    const PoleSet ps = poles_of_f_prime(mu, chi, eta);
    const double scale = std::max(1.0, mu.spread());
    const double merge_eps = 1e-8 * scale;

    // split (lo, hi) at the poles
    std::vector<double> cuts = {lo, hi};
    for (double p : ps.pos)
        if (p > lo && p < hi) cuts.push_back(p);
    std::sort(cuts.begin(), cuts.end());

    auto fp = [&](double w) { return f_prime_real(mu, chi, eta, w); };
    auto fpp = [&](double w) { return f_second_real(mu, chi, eta, w); };

    std::vector<Candidate> found;
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double p = cuts[seg], q = cuts[seg + 1];
        const double len = q - p;
        if (!(len > 4.0 * AtomicMeasure::pole_tol)) continue;

        // uniform interior samples plus geometric refinement at both ends,
        // where roots can hide next to a pole
        std::vector<double> pts;
        const int N = 513;
        for (int i = 0; i < N; ++i) pts.push_back(p + len * (i + 0.5) / N);
        for (int j = 2; j <= 14; ++j) {
            const double off = len * std::pow(10.0, -j);
            pts.push_back(p + off);
            pts.push_back(q - off);
        }
        std::sort(pts.begin(), pts.end());

        std::vector<double> f1(pts.size()), f2(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            f1[i] = fp(pts[i]);
            f2[i] = fpp(pts[i]);
        }
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            if (f1[i] == 0.0) {
                merge_candidate(found, pts[i],
                                std::max(1, detail::root_multiplicity(mu, chi, eta, pts[i])),
                                merge_eps);
            }
            if (f1[i] * f1[i + 1] < 0.0) {
                const double r = bracketed_newton(fp, fpp, pts[i], pts[i + 1], f1[i]);
                if (std::abs(fp(r)) > 1e-7 * std::max(1.0, std::abs(fpp(r)) * scale))
                    throw ConvergenceError("real root refinement stalled");
                merge_candidate(found, r,
                                std::max(1, detail::root_multiplicity(mu, chi, eta, r)),
                                merge_eps);
            }
            // sign change of f'' locates touch points (even multiplicity)
            if (f2[i] * f2[i + 1] < 0.0) {
                auto fp3 = [&](double w) {
                    return f_prime(mu, chi, eta, cplx(w, 0.0), 3).real();
                };
                const double e = bracketed_newton(fpp, fp3, pts[i], pts[i + 1], f2[i]);
                const int m = detail::root_multiplicity(mu, chi, eta, e);
                if (m >= 2) merge_candidate(found, e, m, merge_eps);
            }
        }
    }
    std::sort(found.begin(), found.end(),
              [](const Candidate& l, const Candidate& r) { return l.x < r.x; });
    std::vector<RealRoot> out;
    for (const Candidate& c : found) out.push_back({c.x, c.mult});
    return out;
}

RootCensus root_census(const AtomicMeasure& mu, double chi, double eta) {
    RootCensus census;
    const double a = mu.a(), b = mu.b();
    const double spread = mu.spread();
    const double scale = std::max(1.0, spread);

    const PoleSet ps = poles_of_f_prime(mu, chi, eta);
    double residue_sum = 0.0;
    for (double r : ps.residue) residue_sum += r;
    int expected = static_cast<int>(ps.pos.size()) - 1;
    if (std::fabs(residue_sum) <= 1e-12) expected -= 1;
    expected = std::max(expected, 0);

    // real roots over the finite window containing all of them
    const double W = root_window(mu, chi, eta);
    census.real_roots_ = real_roots(mu, chi, eta, -W, W);
    int found_total = 0;
    for (const RealRoot& r : census.real_roots_) found_total += r.multiplicity;

    // complex Newton with deflation from the deterministic seed grid
    std::vector<cplx> deflate;
    for (const RealRoot& r : census.real_roots_)
        for (int m = 0; m < r.multiplicity; ++m) deflate.push_back(cplx(r.x, 0.0));

    auto fp = [&](cplx w) { return f_prime(mu, chi, eta, w, 1); };
    auto fpp = [&](cplx w) { return f_prime(mu, chi, eta, w, 2); };

    const int nx = 41, ny = 21;
    for (int iy = 0; iy < ny && found_total < expected; ++iy) {
        const double im = 1e-3 + (spread - 1e-3) * iy / (ny - 1.0);
        for (int ix = 0; ix < nx && found_total < expected; ++ix) {
            const double re = (a - 1.0) + (b + 1.0 - (a - 1.0)) * ix / (nx - 1.0);
            cplx w(re, im);
            bool converged = false;
            for (int it = 0; it < 80; ++it) {
                cplx g;
                try {
                    g = fp(w);
                } catch (const PoleError&) {
                    break;
                }
                if (std::abs(g) < detail::root_tol) {
                    converged = true;
                    break;
                }
                cplx d = fpp(w) / g;
                for (const cplx& r : deflate) {
                    const cplx dd = w - r;
                    if (std::abs(dd) < 1e-13) {
                        d = std::numeric_limits<double>::infinity();
                        break;
                    }
                    d -= 1.0 / dd;
                }
                if (!(std::abs(d) > 0.0) || !std::isfinite(std::abs(d))) break;
                const cplx step = -1.0 / d;
                if (!(std::abs(step) < 1e6)) break;
                w += step;
                if (std::abs(step) < 1e-15 * (1.0 + std::abs(w))) {
                    converged = std::abs(fp(w)) < detail::root_tol;
                    break;
                }
            }
            if (!converged) continue;
            // polish on the undeflated function
            for (int it = 0; it < 4; ++it) {
                const cplx g = fp(w);
                const cplx d = fpp(w);
                if (std::abs(d) == 0.0) break;
                w -= g / d;
            }
            if (std::abs(fp(w)) > detail::root_tol) continue;
            if (std::fabs(w.imag()) < 1e-9 * scale) continue;  // real roots handled above
            if (w.imag() < 0.0) w = std::conj(w);
            bool dup = false;
            for (const cplx& r : census.upper_roots)
                if (std::abs(w - r) < 1e-8 * scale) dup = true;
            if (dup) continue;
            census.upper_roots.push_back(w);
            deflate.push_back(w);
            deflate.push_back(std::conj(w));
            found_total += 2;
        }
    }
    return census;
}

RegionPoint classify(const AtomicMeasure& mu, double chi, double eta, double tol) {
    const double a = mu.a(), b = mu.b();
    if (!(chi >= a && chi <= b && eta >= 0.0 && eta <= 1.0))
        throw DomainError("classify: point outside [a,b] x [0,1]");

    RegionPoint rp;
    rp.chi = chi;
    rp.eta = eta;

    const double scale = std::max(1.0, mu.spread());
    const double im_thresh = 1e-6 * scale;
    const double amb_lo = std::max(tol, 1e-12) * scale;

    const RootCensus census = root_census(mu, chi, eta);

    // liquid: a genuinely non-real root
    cplx best(0.0, 0.0);
    for (const cplx& w : census.upper_roots)
        if (w.imag() > best.imag()) best = w;
    if (best.imag() > im_thresh) {
        rp.label = RegionLabel::Liquid;
        rp.liquid_root = best;
        return rp;
    }
    if (best.imag() > amb_lo)
        throw AmbiguousError("root too close to the real axis to separate Liquid from Edge");

    // repeated real root off the support: the edge
    for (const RealRoot& r : census.real_roots_) {
        if (r.multiplicity >= 2 && !mu.is_atom(r.x) &&
            std::fabs(r.x - chi) > AtomicMeasure::pole_tol) {
            rp.label = (r.x > chi) ? RegionLabel::EdgePlus : RegionLabel::EdgeMinus;
            rp.edge_root = r.x;
            rp.edge_multiplicity = r.multiplicity;
            return rp;
        }
    }

    // two simple roots beyond b: outside
    std::vector<double> beyond;
    for (const RealRoot& r : census.real_roots_)
        if (r.x > b + AtomicMeasure::pole_tol && r.multiplicity == 1) beyond.push_back(r.x);
    if (beyond.size() == 2 && mu.mass_at(b) > 0.0 && chi < b && chi > a && eta > 0.0 &&
        eta < 1.0 && 1.0 - eta > mu.mass_at(chi)) {
        const double t = std::max(beyond[0], beyond[1]);
        const double s = std::min(beyond[0], beyond[1]);
        if (t - s < tol * scale)
            throw AmbiguousError("outside witnesses within tol of coalescing (edge)");
        rp.label = RegionLabel::Outside;
        rp.outside_roots = {t, s};
        return rp;
    }

    // degenerate edge pieces
    if (!mu.is_atom(chi) && std::fabs(eta - 1.0) <= tol &&
        std::abs(cauchy(mu, cplx(chi, 0.0), 0)) <= 1e-9 / scale) {
        rp.label = RegionLabel::Edge0;
        rp.edge_root = chi;
        rp.edge_multiplicity = 1;
        return rp;
    }
    if (mu.is_atom(chi) && std::fabs(eta - (1.0 - mu.mass_at(chi))) <= tol) {
        rp.label = RegionLabel::Edge1;
        rp.edge_root = chi;
        return rp;
    }

    rp.label = RegionLabel::Other;
    return rp;
}

std::pair<double, double> liquid_map(const AtomicMeasure& mu, cplx w) {
    if (!(w.imag() > 0.0)) throw DomainError("liquid_map: Im(w) must be positive");
    const cplx cw = cauchy(mu, w, 0);
    const cplx cwb = cauchy(mu, std::conj(w), 0);
    const cplx dc = cw - cwb;
    if (std::abs(dc) < 1e-14) throw DegenerateError("C(w) = C(conj w)");
    const cplx dw = w - std::conj(w);
    const cplx chi = w + cwb * dw / dc;
    const cplx eta = 1.0 + cw * cwb * dw / dc;
    if (std::fabs(chi.imag()) > 1e-10 || std::fabs(eta.imag()) > 1e-10)
        throw ConvergenceError("liquid_map: imaginary residue above 1e-10");
    return {chi.real(), eta.real()};
}

cplx liquid_inverse(const AtomicMeasure& mu, double chi, double eta) {
    RegionPoint rp = classify(mu, chi, eta);
    if (rp.label != RegionLabel::Liquid)
        throw NotInRegionError("liquid_inverse: point is not in the liquid region");
    return *rp.liquid_root;
}

EdgePoint edge_curve(const AtomicMeasure& mu, double t) {
    if (!std::isfinite(t)) throw NotInRError("edge parameter must be finite");
    if (mu.is_atom(t)) {
        // every atom of a finitely atomic measure is isolated
        return {t, 1.0 - mu.mass_at(t), EdgeBranch::ROne};
    }
    const cplx C = cauchy(mu, cplx(t, 0.0), 0);
    const double c0 = C.real();
    const double scale = std::max(1.0, mu.spread());
    if (std::fabs(c0) <= 1e-11 / scale) return {t, 1.0, EdgeBranch::RZero};
    const double c1 = cauchy(mu, cplx(t, 0.0), 1).real();
    const double chi = t + c0 / c1;
    const double eta = 1.0 + c0 * c0 / c1;
    return {chi, eta, c0 > 0.0 ? EdgeBranch::RPlus : EdgeBranch::RMinus};
}

namespace {

/// Cauchy transform of mu with the atom at t removed (not renormalised).
cplx cauchy_without_atom(const AtomicMeasure& mu, double t, cplx w, int k) {
    double kfac = 1.0;
    for (int j = 2; j <= k; ++j) kfac *= j;
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    cplx s = 0.0;
    for (const Atom& at : mu.atoms()) {
        if (std::fabs(at.x - t) <= AtomicMeasure::pole_tol) continue;
        s += at.w * sgn * kfac / std::pow(w - at.x, k + 1);
    }
    return s;
}

}  // namespace

EdgeLocalGeometry edge_local_geometry(const AtomicMeasure& mu, double t) {
    EdgeLocalGeometry g;
    const EdgePoint ep = edge_curve(mu, t);
    const double spread = mu.spread();

    if (ep.branch == EdgeBranch::RPlus || ep.branch == EdgeBranch::RMinus) {
        const double C = cauchy(mu, cplx(t, 0.0), 0).real();
        const double Cp = cauchy(mu, cplx(t, 0.0), 1).real();
        const double f3 = f_prime(mu, ep.chi, ep.eta, cplx(t, 0.0), 3).real();
        const double f4 = f_prime(mu, ep.chi, ep.eta, cplx(t, 0.0), 4).real();
        g.x_frame[0] = 1.0;
        g.x_frame[1] = C;
        g.y_frame[0] = C;
        g.y_frame[1] = -1.0;
        const bool cusp = std::fabs(f3) < kMultTol * std::fabs(f4) * spread;
        if (cusp) {
            g.m = 3;
            g.a1 = g.b1 = 0.0;
            g.a2 = -C / (2.0 * Cp * Cp) * f4;
            g.b2 = C / (3.0 * Cp * (1.0 + C * C)) * f4;
        } else {
            g.m = 2;
            g.a1 = -C / (Cp * Cp) * f3;
            g.b1 = C / (2.0 * Cp * (1.0 + C * C)) * f3;
        }
        return g;
    }

    if (ep.branch == EdgeBranch::RZero) {
        g.m = 1;
        g.x_frame[0] = 1.0;
        g.x_frame[1] = 0.0;
        g.y_frame[0] = 0.0;
        g.y_frame[1] = 1.0;
        g.a1 = 2.0;
        g.b1 = cauchy(mu, cplx(t, 0.0), 1).real();
        return g;
    }

    // R1: f' extends through the atom, f'(t) = C_I(t), f''(t) = C_I'(t)
    const double mass = mu.mass_at(t);
    const double fp1 = cauchy_without_atom(mu, t, cplx(t, 0.0), 0).real();
    const double fp2 = cauchy_without_atom(mu, t, cplx(t, 0.0), 1).real();
    g.x_frame[0] = 0.0;
    g.x_frame[1] = 1.0;
    g.y_frame[0] = 1.0;
    g.y_frame[1] = 0.0;
    const bool cusp = std::fabs(fp1) < kMultTol * std::fabs(fp2) * spread;
    if (cusp) {
        g.m = 1;
        g.a1 = g.b1 = 0.0;
        g.a2 = -3.0 * fp2;
        g.b2 = -2.0 * fp2 / mass;
    } else {
        g.m = 0;
        g.a1 = -2.0 * fp1;
        g.b1 = -fp1 / mass;
    }
    return g;
}

std::pair<double, double> outside_map(const AtomicMeasure& mu, double t, double s) {
    if (!(t > s) || !(s > mu.b())) throw DomainError("outside_map requires t > s > b");
    if (!(mu.mass_at(mu.b()) > 0.0))
        throw DomainError("outside_map requires an atom at b");
    const double Ct = cauchy(mu, cplx(t, 0.0), 0).real();
    const double Cs = cauchy(mu, cplx(s, 0.0), 0).real();
    const double dc = Ct - Cs;
    const double chi = (t * Ct - s * Cs) / dc;
    const double eta = 1.0 + Ct * Cs * (t - s) / dc;
    return {chi, eta};
}

std::pair<double, double> outside_inverse(const AtomicMeasure& mu, double chi,
                                          double eta) {
    RegionPoint rp = classify(mu, chi, eta);
    if (rp.label != RegionLabel::Outside)
        throw NotInRegionError("outside_inverse: point is not in O");
    return *rp.outside_roots;
}

std::pair<double, double> outside_boundary(const AtomicMeasure& mu,
                                           OutsideBoundarySide side, double param) {
    const double b = mu.b();
    if (!(param > b)) throw DomainError("boundary parameter must exceed b");
    switch (side) {
        case OutsideBoundarySide::Edge: {
            const EdgePoint ep = edge_curve(mu, param);
            return {ep.chi, ep.eta};
        }
        case OutsideBoundarySide::Bottom: {
            const double Cs = cauchy(mu, cplx(param, 0.0), 0).real();
            return {param - 1.0 / Cs, 0.0};
        }
        case OutsideBoundarySide::Right: {
            const double Ct = cauchy(mu, cplx(param, 0.0), 0).real();
            return {b, 1.0 - (param - b) * Ct};
        }
    }
    throw DomainError("unknown boundary side");
}

std::pair<double, double> outside_tangent(const AtomicMeasure& mu, double t, double s) {
    if (!(t > s) || !(s > mu.b())) throw DomainError("outside_tangent requires t > s > b");
    const auto [chi, eta] = outside_map(mu, t, s);
    const double Ct = cauchy(mu, cplx(t, 0.0), 0).real();
    const double Cs = cauchy(mu, cplx(s, 0.0), 0).real();
    const double dc2 = (Ct - Cs) * (Ct - Cs);
    const double ft = f_prime(mu, chi, eta, cplx(t, 0.0), 2).real();
    const double fs = f_prime(mu, chi, eta, cplx(s, 0.0), 2).real();
    const double c1 = -(t - s) * Cs * ft / dc2;
    const double c2 = (t - s) * Ct * fs / dc2;
    return {c1, c2};
}

double exponent(const AtomicMeasure& mu, double chi, double eta) {
    RegionPoint rp = classify(mu, chi, eta);
    if (rp.label != RegionLabel::Outside)
        throw NotInRegionError("exponent: point is not in O");
    const auto [t, s] = *rp.outside_roots;
    return f_value(mu, chi, eta, cplx(t, 0.0)).real() -
           f_value(mu, chi, eta, cplx(s, 0.0)).real();
}

EdgeEpsilonBounds edge_epsilon_bounds(const AtomicMeasure& mu, double theta,
                                      double eps, bool enforce) {
    const double b = mu.b();
    if (!(theta > b)) throw DomainError("theta must lie in (b, inf)");
    if (!(eps > 0.0)) throw DomainError("eps must be positive");
    const EdgePoint ep = edge_curve(mu, theta);
    const double f3 = f_prime(mu, ep.chi, ep.eta, cplx(theta, 0.0), 3).real();
    if (!(f3 > 0.0)) throw DomainError("f''' must be positive at the edge parameter");
    const double c = 1.0 / ((theta - ep.chi) * f3);
    const double rad = std::sqrt(c * eps);

    if (enforce) {
        const double tb = theta - b;
        if (!(rad < 0.25 * tb))
            throw EpsTooLargeError("sqrt(c eps) must stay below (theta-b)/4");
        if (!(ep.eta - eps > 0.0)) throw EpsTooLargeError("eps must keep eta positive");
        const double lhs1 = 0.25 * eps / (theta - ep.chi);
        const double rhs1 = 128.0 * std::pow(c, 1.5) / std::pow(tb, 4) * std::pow(eps, 1.5) +
                            2.0 * std::sqrt(c) / (tb * tb) * std::pow(eps, 1.5);
        if (!(lhs1 > rhs1))
            throw EpsTooLargeError("first sufficiency inequality fails");
        const double lhs2 = (5.0 / 6.0) * std::sqrt(c) / (theta - ep.chi) * std::pow(eps, 1.5);
        const double rhs2 = 64.0 * c * c / std::pow(tb, 4) * std::pow(eps, 4) +
                            8.0 * c / (tb * tb) * eps * eps;
        if (!(lhs2 > rhs2))
            throw EpsTooLargeError("second sufficiency inequality fails");
    }

    EdgeEpsilonBounds out;
    out.t_lo = theta + rad;
    out.t_hi = theta + 2.0 * rad;
    out.s_lo = theta - 2.0 * rad;
    out.s_hi = theta - rad;
    out.exponent_bound = -(5.0 / 6.0) * std::sqrt(c) / (theta - ep.chi) * std::pow(eps, 1.5);
    out.c = c;
    return out;
}

double free_compressed_norm(const AtomicMeasure& mu, double t) {
    if (!(t > 0.0 && t < 1.0)) throw DomainError("height t must lie in (0,1)");
    const double b = mu.b();
    const double top_mass = mu.mass_at(b);
    if (top_mass > 0.0 && t >= 1.0 - top_mass) return b;  // the top atom persists

    auto eta_at = [&](double th) { return edge_curve(mu, th).eta; };

    double lo = b + 1e-9 * std::max(1.0, mu.spread());
    while (eta_at(lo) < t) {
        lo = b + 0.5 * (lo - b);
        if (lo - b < 1e-13) return b;
    }
    double hi = b + std::max(1.0, mu.spread());
    int guard = 0;
    while (eta_at(hi) > t) {
        hi = b + 2.0 * (hi - b);
        if (++guard > 200) throw ConvergenceError("free_compressed_norm: bracket failed");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (eta_at(mid) > t)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-14 * (1.0 + std::fabs(hi))) break;
    }
    return edge_curve(mu, 0.5 * (lo + hi)).chi;
}

}  // namespace gtdpp
