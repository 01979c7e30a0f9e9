#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "gtdpp/region.hpp"

using namespace gtdpp;

namespace {

AtomicMeasure quarter_measure() {
    return AtomicMeasure({{1.0, 0.25}, {-1.0, 0.75}});
}

AtomicMeasure half_measure() {
    return AtomicMeasure({{1.0, 0.5}, {-1.0, 0.5}});
}

AtomicMeasure projection_measure() {  // trace-1/2 projection spectrum
    return AtomicMeasure({{0.0, 0.5}, {1.0, 0.5}});
}

AtomicMeasure random_measure(std::mt19937_64& rng, int k) {
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    std::uniform_real_distribution<double> wt(0.15, 1.0);
    std::vector<Atom> atoms;
    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        double x;
        bool ok;
        do {
            x = pos(rng);
            ok = true;
            for (const Atom& at : atoms) ok = ok && std::fabs(at.x - x) > 0.3;
        } while (!ok);
        atoms.push_back({x, wt(rng)});
        total += atoms.back().w;
    }
    for (Atom& at : atoms) at.w /= total;
    return AtomicMeasure(std::move(atoms));
}

}  // namespace

TEST_CASE("f value by direct substitution") {
    const AtomicMeasure mu = quarter_measure();
    // 1/4 log 2 + 3/4 log 4 - 3/4 log 2.5 at w=3, (chi,eta)=(1/2,1/4)
    const double oracle =
        0.25 * std::log(2.0) + 0.75 * std::log(4.0) - 0.75 * std::log(2.5);
    CHECK(f_value(mu, 0.5, 0.25, 3.0).real() == doctest::Approx(oracle).epsilon(1e-14));
    CHECK(oracle == doctest::Approx(0.5258).epsilon(1e-3));

    // eta = 1 drops the chi term entirely
    const cplx w(0.3, 0.8);
    cplx logsum = 0.25 * std::log(w - 1.0) + 0.75 * std::log(w + 1.0);
    CHECK(std::abs(f_value(mu, 0.123, 1.0, w) - logsum) < 1e-14);

    // real w above b with real data keeps the value real
    CHECK(f_value(mu, 0.5, 0.25, 7.0).imag() == 0.0);
    CHECK_THROWS_AS(f_value(mu, 0.5, 0.25, cplx(1.0, 0.0)), PoleError);
}

TEST_CASE("f derivatives at the reference edge and outside points") {
    const AtomicMeasure mu = quarter_measure();
    // (1/2, 1/4): double root at 2 with f''' = 1/9
    CHECK(std::abs(f_prime(mu, 0.5, 0.25, 2.0, 1)) < 1e-14);
    CHECK(std::abs(f_prime(mu, 0.5, 0.25, 2.0, 2)) < 1e-14);
    CHECK(f_prime(mu, 0.5, 0.25, 2.0, 3).real() == doctest::Approx(1.0 / 9).epsilon(1e-12));

    // (1/3, 1/6): C(2) = (5/6)/(5/3) and C(3) = (5/6)/(8/3), so both are roots
    CHECK(std::abs(f_prime(mu, 1.0 / 3, 1.0 / 6, 2.0, 1)) < 1e-14);
    CHECK(std::abs(f_prime(mu, 1.0 / 3, 1.0 / 6, 3.0, 1)) < 1e-14);
}

TEST_CASE("f derivatives match finite differences of f") {
    const AtomicMeasure mu = quarter_measure();
    const cplx w(2.3, 0.7);
    const double h = 1e-5;
    for (int k = 1; k <= 2; ++k) {
        auto g = [&](cplx z) {
            return k == 1 ? f_value(mu, 0.4, 0.3, z) : f_prime(mu, 0.4, 0.3, z, 1);
        };
        const cplx fd = (g(w + h) - g(w - h)) / (2.0 * h);
        CHECK(std::abs(f_prime(mu, 0.4, 0.3, w, k) - fd) < 1e-8);
    }
}

TEST_CASE("real roots with multiplicities") {
    const AtomicMeasure mu = quarter_measure();
    SUBCASE("two simple roots") {
        const auto roots = real_roots(mu, 1.0 / 3, 1.0 / 6, 1.0, 10.0);
        REQUIRE(roots.size() == 2);
        CHECK(roots[0].x == doctest::Approx(2.0).epsilon(1e-10));
        CHECK(roots[0].multiplicity == 1);
        CHECK(roots[1].x == doctest::Approx(3.0).epsilon(1e-10));
        CHECK(roots[1].multiplicity == 1);
    }
    SUBCASE("double root") {
        const auto roots = real_roots(mu, 0.5, 0.25, 1.0, 10.0);
        REQUIRE(roots.size() == 1);
        CHECK(roots[0].x == doctest::Approx(2.0).epsilon(1e-8));
        CHECK(roots[0].multiplicity == 2);
    }
}

TEST_CASE("classification of the reference points") {
    const AtomicMeasure mu = quarter_measure();

    const RegionPoint liq = classify(mu, 0.0, 0.5);
    CHECK(liq.label == RegionLabel::Liquid);
    REQUIRE(liq.liquid_root.has_value());
    CHECK(liq.liquid_root->imag() > 0.0);
    CHECK(std::abs(f_prime(mu, 0.0, 0.5, *liq.liquid_root, 1)) < 1e-10);

    const RegionPoint edge = classify(mu, 0.5, 0.25);
    CHECK(edge.label == RegionLabel::EdgePlus);
    REQUIRE(edge.edge_root.has_value());
    CHECK(*edge.edge_root == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(edge.edge_multiplicity == 2);

    const RegionPoint out = classify(mu, 1.0 / 3, 1.0 / 6);
    CHECK(out.label == RegionLabel::Outside);
    REQUIRE(out.outside_roots.has_value());
    CHECK(out.outside_roots->first == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(out.outside_roots->second == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("classification handles the degenerate edge pieces") {
    // symmetric three-atom measure: C vanishes between neighbouring atoms
    const AtomicMeasure mu({{1.0, 1.0 / 3}, {0.0, 1.0 / 3}, {-1.0, 1.0 / 3}});
    // atoms disappear at eta = 1 - 1/3
    const RegionPoint e1 = classify(mu, 0.0, 2.0 / 3.0);
    CHECK(e1.label == RegionLabel::Edge1);

    // find the zero of C in (0,1) by bisection and check Edge0 at eta=1
    double lo = 0.55, hi = 0.95;
    auto c0 = [&](double t) { return cauchy(mu, t, 0).real(); };
    REQUIRE(c0(lo) > 0.0);
    REQUIRE(c0(hi) < 0.0);
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (c0(mid) > 0 ? lo : hi) = mid;
    }
    const RegionPoint e0 = classify(mu, 0.5 * (lo + hi), 1.0);
    CHECK(e0.label == RegionLabel::Edge0);
}

TEST_CASE("classify is stable under tiny perturbations of the measure") {
    const AtomicMeasure base = quarter_measure();
    const AtomicMeasure wiggled(
        {{1.0, 0.25 - 0.5e-15}, {-1.0, 0.75 - 0.5e-15}, {0.1, 1e-15}});
    for (auto [chi, eta] : {std::pair{0.0, 0.5}, {1.0 / 3, 1.0 / 6}, {-0.4, 0.8}}) {
        CHECK(classify(base, chi, eta).label == classify(wiggled, chi, eta).label);
    }
}

TEST_CASE("liquid map reference value and limits") {
    const AtomicMeasure mu = half_measure();
    // C(i) = -i/2 by hand; the map sends i to (0, 1/2)
    const auto [chi, eta] = liquid_map(mu, cplx(0.0, 1.0));
    CHECK(chi == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(eta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(f_prime(mu, chi, eta, cplx(0.0, 1.0), 1)) < 1e-14);

    // |w| large: the image approaches (mu_1, 0)
    const AtomicMeasure mq = quarter_measure();
    const auto [chi2, eta2] = liquid_map(mq, cplx(0.0, 1e6));
    CHECK(std::fabs(chi2 - (-0.5)) < 1e-5);
    CHECK(std::fabs(eta2) < 1e-5);

    // continuity probe
    const cplx w(0.37, 0.61);
    const auto [c1, e1] = liquid_map(mq, w);
    const auto [c2, e2] = liquid_map(mq, w * 1.0001);
    CHECK(std::fabs(c1 - c2) < 1e-3);
    CHECK(std::fabs(e1 - e2) < 1e-3);
}

TEST_CASE("liquid inverse and round trips") {
    const AtomicMeasure mu = half_measure();
    const cplx w = liquid_inverse(mu, 0.0, 0.5);
    CHECK(std::abs(w - cplx(0.0, 1.0)) < 1e-9);

    const AtomicMeasure mq = quarter_measure();
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> re(-1.5, 1.5), im(0.05, 1.5);
    int tested = 0;
    while (tested < 100) {
        const cplx seed(re(rng), im(rng));
        std::pair<double, double> pt;
        try {
            pt = liquid_map(mq, seed);
        } catch (const Error&) {
            continue;
        }
        if (!(pt.first > -1 && pt.first < 1 && pt.second > 0 && pt.second < 1)) continue;
        const cplx back = liquid_inverse(mq, pt.first, pt.second);
        CHECK(std::abs(back - seed) < 1e-8);
        ++tested;
    }

    CHECK_THROWS_AS(liquid_inverse(mq, 0.5, 0.25), NotInRegionError);
}

TEST_CASE("edge curve reference values") {
    const AtomicMeasure mu = quarter_measure();
    const EdgePoint e = edge_curve(mu, 2.0);
    CHECK(e.chi == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.eta == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(e.branch == EdgeBranch::RPlus);

    // atom endpoints map to (b_l, 1 - alpha_l)
    std::mt19937_64 rng(22);
    for (int rep = 0; rep < 20; ++rep) {
        const AtomicMeasure m = random_measure(rng, 2 + rep % 5);
        for (const Atom& at : m.atoms()) {
            const EdgePoint ep = edge_curve(m, at.x);
            CHECK(ep.branch == EdgeBranch::ROne);
            CHECK(ep.chi == doctest::Approx(at.x).epsilon(1e-13));
            CHECK(ep.eta == doctest::Approx(1.0 - at.w).epsilon(1e-13));
        }
    }

    // t large: the curve approaches (mu_1, 0)
    const EdgePoint far = edge_curve(mu, 1e6);
    CHECK(std::fabs(far.chi - (-0.5)) < 1e-5);
    CHECK(std::fabs(far.eta) < 1e-5);
}

TEST_CASE("edge curve is strictly decreasing beyond b") {
    const AtomicMeasure mu = quarter_measure();
    double prev_chi = edge_curve(mu, 1.0 + 1e-6).chi;
    double prev_eta = edge_curve(mu, 1.0 + 1e-6).eta;
    for (int i = 1; i <= 100; ++i) {
        const double t = 1.0 + 1e-6 + 0.2 * i;
        const EdgePoint e = edge_curve(mu, t);
        CHECK(e.chi < prev_chi);
        CHECK(e.eta < prev_eta);
        prev_chi = e.chi;
        prev_eta = e.eta;
    }
    // the curve leaves from (b, 1 - mu[{b}]) when the top atom is charged
    const EdgePoint near_b = edge_curve(mu, 1.0 + 1e-9);
    CHECK(std::fabs(near_b.chi - 1.0) < 1e-6);
    CHECK(std::fabs(near_b.eta - 0.75) < 1e-6);
}

TEST_CASE("edge local geometry") {
    const AtomicMeasure mu = quarter_measure();
    const EdgeLocalGeometry g = edge_local_geometry(mu, 2.0);
    CHECK(g.m == 2);
    // a1 = -C f''' / C'^2 = -(1/2)(1/9)/(1/9) = -1/2
    CHECK(g.a1 == doctest::Approx(-0.5).epsilon(1e-10));
    CHECK(g.x_frame[0] == 1.0);
    CHECK(g.x_frame[1] == doctest::Approx(0.5));
    CHECK(g.b1 != 0.0);

    // R0 point of the symmetric three-atom measure
    const AtomicMeasure thirds({{1.0, 1.0 / 3}, {0.0, 1.0 / 3}, {-1.0, 1.0 / 3}});
    double lo = 0.55, hi = 0.95;
    auto c0 = [&](double t) { return cauchy(thirds, t, 0).real(); };
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (c0(mid) > 0 ? lo : hi) = mid;
    }
    const double t0 = 0.5 * (lo + hi);
    const EdgeLocalGeometry g0 = edge_local_geometry(thirds, t0);
    CHECK(g0.m == 1);
    CHECK(g0.a1 == doctest::Approx(2.0));
    CHECK(g0.b1 == doctest::Approx(cauchy(thirds, t0, 1).real()));

    // cusp at the inner atom: C without the atom vanishes there by symmetry
    const EdgeLocalGeometry g1 = edge_local_geometry(thirds, 0.0);
    CHECK(g1.m == 1);
    CHECK(g1.a1 == 0.0);
    CHECK(g1.b1 == 0.0);
    CHECK(g1.a2 == doctest::Approx(2.0));   // -3 f'' with f'' = -2/3
    CHECK(g1.b2 == doctest::Approx(4.0));   // -2 f'' / (1/3)

    // generic atom endpoint has m = 0 and nonzero leading coefficients
    const EdgeLocalGeometry gq = edge_local_geometry(mu, 1.0);
    CHECK(gq.m == 0);
    CHECK(gq.a1 != 0.0);
}

TEST_CASE("outside map reference value and limits") {
    const AtomicMeasure mu = quarter_measure();
    const auto [chi, eta] = outside_map(mu, 3.0, 2.0);
    CHECK(chi == doctest::Approx(1.0 / 3).epsilon(1e-14));
    CHECK(eta == doctest::Approx(1.0 / 6).epsilon(1e-14));

    // coalescing pair approaches the edge curve
    const auto [cc, ee] = outside_map(mu, 2.0 + 1e-4, 2.0 - 1e-4);
    CHECK(std::fabs(cc - 0.5) < 1e-3);
    CHECK(std::fabs(ee - 0.25) < 1e-3);

    // t large: the bottom boundary g(s) = s - 1/C(s)
    const double s = 1.7;
    const double g = s - 1.0 / cauchy(mu, s, 0).real();
    const auto [cb, eb] = outside_map(mu, 1e7, s);
    CHECK(std::fabs(cb - g) < 1e-5);
    CHECK(std::fabs(eb) < 1e-5);

    CHECK_THROWS_AS(outside_map(mu, 2.0, 2.0), DomainError);
    CHECK_THROWS_AS(outside_map(mu, 3.0, 0.5), DomainError);
}

TEST_CASE("outside inverse and round trips") {
    const AtomicMeasure mu = quarter_measure();
    const auto [t, s] = outside_inverse(mu, 1.0 / 3, 1.0 / 6);
    CHECK(t == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(s == doctest::Approx(2.0).epsilon(1e-9));

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> dt(0.15, 2.5), ds(0.1, 1.2);
    for (int rep = 0; rep < 60; ++rep) {
        const double ss = 1.0 + ds(rng);
        const double tt = ss + dt(rng);
        const auto [chi, eta] = outside_map(mu, tt, ss);
        const auto [tb, sb] = outside_inverse(mu, chi, eta);
        CHECK(std::fabs(tb - tt) < 1e-8);
        CHECK(std::fabs(sb - ss) < 1e-8);
    }

    CHECK_THROWS_AS(outside_inverse(mu, 0.5, 0.25), NotInRegionError);
}

TEST_CASE("outside boundary pieces") {
    const AtomicMeasure mu = quarter_measure();
    const auto [cb, eb] = outside_boundary(mu, OutsideBoundarySide::Right, 1.0 + 1e-8);
    CHECK(cb == doctest::Approx(1.0));
    CHECK(eb == doctest::Approx(0.75).epsilon(1e-6));

    const auto [cf, ef] = outside_boundary(mu, OutsideBoundarySide::Bottom, 1e8);
    CHECK(std::fabs(cf - (-0.5)) < 1e-5);
    CHECK(ef == 0.0);

    double prev = outside_boundary(mu, OutsideBoundarySide::Bottom, 1.05).first;
    for (int i = 1; i <= 10; ++i) {
        const double cur =
            outside_boundary(mu, OutsideBoundarySide::Bottom, 1.05 + 0.8 * i).first;
        CHECK(cur < prev);
        prev = cur;
    }

    const auto [ce, ee] = outside_boundary(mu, OutsideBoundarySide::Edge, 2.0);
    CHECK(ce == doctest::Approx(0.5));
    CHECK(ee == doctest::Approx(0.25));
}

TEST_CASE("outside tangent coefficients") {
    const AtomicMeasure mu = quarter_measure();
    const auto [c1, c2] = outside_tangent(mu, 3.0, 2.0);
    CHECK(c1 < 0.0);
    CHECK(c2 < 0.0);

    // finite-difference Taylor checks in both arguments
    const double h = 1e-6;
    const auto [chi0, eta0] = outside_map(mu, 3.0, 2.0);
    const auto [chiT, etaT] = outside_map(mu, 3.0 + h, 2.0);
    const double Cs = cauchy(mu, 2.0, 0).real();
    CHECK(std::fabs((chiT - chi0) - h * c1) < 40.0 * h * h);
    CHECK(std::fabs((etaT - eta0) - h * c1 * Cs) < 40.0 * h * h);

    const auto [chiS, etaS] = outside_map(mu, 3.0, 2.0 + h);
    const double Ct = cauchy(mu, 3.0, 0).real();
    CHECK(std::fabs((chiS - chi0) - h * c2) < 40.0 * h * h);
    CHECK(std::fabs((etaS - eta0) - h * c2 * Ct) < 40.0 * h * h);
}

TEST_CASE("exponent at the reference outside point") {
    const AtomicMeasure mu = quarter_measure();
    // direct evaluation of the explicit two-atom formula at t=3, s=2
    const double f3 = 0.25 * std::log(2.0) + 0.75 * std::log(4.0) -
                      (5.0 / 6.0) * std::log(3.0 - 1.0 / 3);
    const double f2 = 0.25 * std::log(1.0) + 0.75 * std::log(3.0) -
                      (5.0 / 6.0) * std::log(2.0 - 1.0 / 3);
    const double oracle = f3 - f2;
    const double e = exponent(mu, 1.0 / 3, 1.0 / 6);
    CHECK(e == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(std::fabs(e - (-2.6e-3)) < 1e-4);
    CHECK(e < 0.0);
    CHECK_THROWS_AS(exponent(mu, 0.0, 0.5), NotInRegionError);
}

TEST_CASE("exponent monotonicity along horizontal and vertical moves") {
    const AtomicMeasure mu = quarter_measure();
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> dchi(0.02, 0.2);
    int done = 0;
    while (done < 25) {
        const double s = 1.0 + 0.2 + 0.8 * std::generate_canonical<double, 40>(rng);
        const double t = s + 0.3 + 1.2 * std::generate_canonical<double, 40>(rng);
        const auto [chi, eta] = outside_map(mu, t, s);
        const double chi2 = chi + dchi(rng);
        RegionPoint rp2;
        try {
            rp2 = classify(mu, chi2, eta);
        } catch (const Error&) {
            continue;
        }
        if (rp2.label != RegionLabel::Outside) continue;
        const auto [T, S] = *rp2.outside_roots;
        CHECK(T > t);
        CHECK(S < s);
        CHECK(exponent(mu, chi2, eta) < exponent(mu, chi, eta));
        CHECK(exponent(mu, chi, eta) < 0.0);
        ++done;
    }
}

TEST_CASE("edge epsilon bounds") {
    const AtomicMeasure mu = quarter_measure();
    const double eps_ok = 1e-9;
    const EdgeEpsilonBounds eb = edge_epsilon_bounds(mu, 2.0, eps_ok);
    CHECK(eb.c == doctest::Approx(6.0).epsilon(1e-10));
    CHECK(eb.t_lo == doctest::Approx(2.0 + std::sqrt(6.0 * eps_ok)));
    CHECK(eb.t_hi == doctest::Approx(2.0 + 2.0 * std::sqrt(6.0 * eps_ok)));

    // vertical drop 1/(4l) below the edge point reproduces the reference
    // constants: outer bracket 2 + sqrt(6/l), bound -(5/(12 sqrt 6)) l^-3/2
    const double l = 4.0;
    const EdgeEpsilonBounds shape = edge_epsilon_bounds(mu, 2.0, 1.0 / (4.0 * l), false);
    CHECK(shape.t_hi == doctest::Approx(2.0 + std::sqrt(6.0 / l)).epsilon(1e-12));
    CHECK(shape.exponent_bound ==
          doctest::Approx(-5.0 / (12.0 * std::sqrt(6.0)) * std::pow(l, -1.5))
              .epsilon(1e-12));

    // and the true witnesses fall inside the brackets once eps is legal
    const double eps = 1e-9;
    const EdgeEpsilonBounds ebb = edge_epsilon_bounds(mu, 2.0, eps);
    const auto [tz, sz] = outside_inverse(mu, 0.5, 0.25 - eps);
    CHECK(tz > ebb.t_lo);
    CHECK(tz < ebb.t_hi);
    CHECK(sz > ebb.s_lo);
    CHECK(sz < ebb.s_hi);
    CHECK(exponent(mu, 0.5, 0.25 - eps) < ebb.exponent_bound);

    CHECK_THROWS_AS(edge_epsilon_bounds(mu, 2.0, 0.25), EpsTooLargeError);
}

TEST_CASE("free compressed norm against the projection formula") {
    const AtomicMeasure mu = projection_measure();
    for (double t : {0.1, 0.25, 0.5}) {
        const double oracle = 0.5 + std::sqrt(t * (1.0 - t));
        CHECK(free_compressed_norm(mu, t) == doctest::Approx(oracle).epsilon(1e-8));
    }
    CHECK(free_compressed_norm(mu, 0.1) == doctest::Approx(0.8).epsilon(1e-8));
    // t -> 0+: the norm tends to mu_1
    CHECK(free_compressed_norm(mu, 1e-9) == doctest::Approx(0.5).epsilon(1e-3));
    // above the atom persistence height the norm sticks at b
    CHECK(free_compressed_norm(mu, 0.7) == 1.0);
}

TEST_CASE("forward and backward consistency on a liquid grid") {
    const AtomicMeasure mu = quarter_measure();
    for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
            const cplx w(-1.4 + 2.8 * i / 19.0, 0.05 + 1.4 * j / 19.0);
            double chi, eta;
            try {
                std::tie(chi, eta) = liquid_map(mu, w);
            } catch (const Error&) {
                continue;
            }
            CHECK(std::abs(f_prime(mu, chi, eta, w, 1)) < 1e-10);
        }
    }
}

TEST_CASE("root count law on random interior points") {
    std::mt19937_64 rng(25);
    int done = 0;
    while (done < 60) {
        const AtomicMeasure mu = random_measure(rng, 2 + done % 5);
        std::uniform_real_distribution<double> uchi(mu.a(), mu.b());
        std::uniform_real_distribution<double> ueta(0.02, 0.98);
        const double chi = uchi(rng);
        const double eta = ueta(rng);
        if (!(1.0 - eta > mu.mass_at(chi))) continue;
        if (mu.is_atom(chi)) continue;
        RootCensus census;
        try {
            census = root_census(mu, chi, eta);
        } catch (const Error&) {
            continue;
        }
        CHECK(census.upper_roots.size() <= 1);

        // count real roots per pole gap: at most 3 anywhere, at most 2 in the
        // intervals adjacent to chi and the two outer rays
        std::vector<double> cuts;
        for (const Atom& at : mu.atoms()) cuts.push_back(at.x);
        cuts.push_back(chi);
        std::sort(cuts.begin(), cuts.end());
        auto interval_count = [&](double lo, double hi) {
            int c = 0;
            for (const RealRoot& r : census.real_roots_)
                if (r.x > lo && r.x < hi) c += r.multiplicity;
            return c;
        };
        CHECK(interval_count(mu.b(), 1e18) <= 2);              // beyond b
        CHECK(interval_count(-1e18, mu.a()) <= 2);             // below a
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const int c = interval_count(cuts[i], cuts[i + 1]);
            const bool adjacent_chi = (cuts[i] == chi || cuts[i + 1] == chi);
            CHECK(c <= (adjacent_chi ? 2 : 3));
        }
        if (!census.upper_roots.empty()) {
            for (const RealRoot& r : census.real_roots_) CHECK(r.multiplicity <= 1);
        }
        ++done;
    }
}
