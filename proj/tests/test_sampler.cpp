#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtdpp/kernel.hpp"
#include "gtdpp/sampler.hpp"

using namespace gtdpp;

namespace {

/// Kolmogorov-Smirnov p-value (asymptotic) for sorted samples against a cdf.
template <typename Cdf>
double ks_pvalue(std::vector<double> samples, Cdf cdf) {
    std::sort(samples.begin(), samples.end());
    const double m = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max(d, std::fabs(f - i / m));
        d = std::max(d, std::fabs((i + 1) / m - f));
    }
    const double lambda = (std::sqrt(m) + 0.12 + 0.11 / std::sqrt(m)) * d;
    double p = 0.0;
    for (int j = 1; j <= 100; ++j)
        p += 2.0 * ((j % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * j * j * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

double two_sample_ks_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / a.size() -
                                  static_cast<double>(j) / b.size()));
    }
    const double ne = static_cast<double>(a.size()) * b.size() / (a.size() + b.size());
    const double lambda = (std::sqrt(ne) + 0.12 + 0.11 / std::sqrt(ne)) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TEST_CASE("haar unitary basics") {
    std::mt19937_64 rng = engine_for_sample({7, 0}, 0);
    const Eigen::MatrixXcd u1 = haar_unitary(1, rng);
    CHECK(std::abs(std::abs(u1(0, 0)) - 1.0) < 1e-12);

    const Eigen::MatrixXcd U = haar_unitary(6, rng);
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(6, 6);
    CHECK((U.adjoint() * U - I).norm() < 1e-10);
    for (int j = 0; j < 6; ++j) CHECK(std::fabs(U.col(j).norm() - 1.0) < 1e-10);
}

TEST_CASE("haar unitary first entry has mean square 1/n") {
    const int n = 4;
    const int reps = 100000;
    double sum = 0.0, sumsq = 0.0;
    std::mt19937_64 rng = engine_for_sample({77, 1}, 0);
    for (int i = 0; i < reps; ++i) {
        const Eigen::MatrixXcd U = haar_unitary(n, rng);
        const double v = std::norm(U(0, 0));
        sum += v;
        sumsq += v * v;
    }
    const double mean = sum / reps;
    const double se = std::sqrt((sumsq / reps - mean * mean) / reps);
    CHECK(std::fabs(mean - 1.0 / n) <= 3.0 * se);
}

TEST_CASE("minor process: interlacing, top row, trace conservation") {
    const TopRow x({1.1, 0.4, -0.3, -1.2});
    for (int i = 0; i < 200; ++i) {
        std::mt19937_64 rng = engine_for_sample({3, 5}, i);
        const GTPattern pat = sample_minor_process(x, rng);
        CHECK(pat.interlaced(1e-9));
        for (int j = 0; j < x.n(); ++j)
            CHECK(std::fabs(pat.rows[x.n() - 1][j] - x[j]) < 1e-10);
        // row sums telescope: sum of row r equals the trace of the r-by-r minor,
        // which equals sum of row r of any refinement chain member... check
        // directly against row n partial traces via the sampled eigenvalues
        for (int r = 1; r < x.n(); ++r) {
            double s = 0.0;
            for (double y : pat.rows[r - 1]) s += y;
            CHECK(std::isfinite(s));
        }
    }
}

TEST_CASE("trace of minors matches row sums") {
    const TopRow x({1.0, 0.0, -1.0});
    std::mt19937_64 rng = engine_for_sample({11, 0}, 0);
    const Eigen::MatrixXcd U = haar_unitary(3, rng);
    Eigen::VectorXd d(3);
    for (int i = 0; i < 3; ++i) d(i) = x[i];
    const Eigen::MatrixXcd H = U * d.asDiagonal() * U.adjoint();
    for (int r = 1; r <= 3; ++r) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.topLeftCorner(r, r));
        double s = 0.0;
        for (int i = 0; i < r; ++i) s += es.eigenvalues()(i);
        CHECK(std::fabs(s - H.topLeftCorner(r, r).trace().real()) < 1e-9);
    }
}

TEST_CASE("n=2 first row is uniform") {
    const TopRow x({1.0, 0.0});
    std::vector<double> samples;
    for (int i = 0; i < 10000; ++i) {
        std::mt19937_64 rng = engine_for_sample({19, 0}, i);
        samples.push_back(sample_minor_process(x, rng).rows[0][0]);
    }
    const double p = ks_pvalue(samples, [](double v) { return std::clamp(v, 0.0, 1.0); });
    CHECK(p > 0.01);
}

TEST_CASE("rejection sampler agrees with the minor process for n=2") {
    const TopRow x({1.0, 0.0});
    std::vector<double> minor, rej;
    for (int i = 0; i < 8000; ++i) {
        std::mt19937_64 r1 = engine_for_sample({23, 0}, i);
        minor.push_back(sample_minor_process(x, r1).rows[0][0]);
        std::mt19937_64 r2 = engine_for_sample({23, 1}, i);
        rej.push_back(sample_gt_uniform_rejection(x, r2).rows[0][0]);
    }
    CHECK(two_sample_ks_pvalue(minor, rej) > 0.01);
}

TEST_CASE("rejection sampler: interlacing and acceptance") {
    const TopRow x({2.0, 1.0, 0.0});
    for (int i = 0; i < 100; ++i) {
        std::mt19937_64 rng = engine_for_sample({29, 0}, i);
        const GTPattern pat = sample_gt_uniform_rejection(x, rng);
        CHECK(pat.interlaced(0.0));
    }
    std::mt19937_64 rng = engine_for_sample({29, 1}, 0);
    CHECK_THROWS_AS(sample_gt_uniform_rejection(x, rng, 0), RejectionBudgetError);
}

TEST_CASE("reproducibility across worker counts") {
    const TopRow x({1.5, 0.5, -0.5});
    const auto one = sample_patterns(x, {99, 4}, 64, 1);
    const auto four = sample_patterns(x, {99, 4}, 64, 4);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i)
        for (int r = 0; r < 3; ++r)
            for (std::size_t j = 0; j < one[i].rows[r].size(); ++j)
                CHECK(one[i].rows[r][j] == four[i].rows[r][j]);

    const auto again = sample_patterns(x, {99, 4}, 64, 2);
    CHECK(again[10].rows[1][0] == one[10].rows[1][0]);
}

TEST_CASE("empirical counts") {
    const TopRow x({1.0, 0.0});
    const auto pats = sample_patterns(x, {5, 0}, 20000, 4);
    const auto [full, se_full] = empirical_count(pats, 1, -10.0, 10.0);
    CHECK(full == 1.0);
    CHECK(se_full == 0.0);
    const auto [half, se_half] = empirical_count(pats, 1, 0.0, 0.5);
    CHECK(std::fabs(half - 0.5) <= 3.0 * se_half);
}

TEST_CASE("determinantal cross-check on a small grid") {
    const TopRow x({1.0, 0.5, 0.0, -0.5, -1.0, -1.5});
    const auto pats = sample_patterns(x, {41, 0}, 20000, 4);
    for (int r : {2, 4}) {
        const double lo = -0.8, hi = 0.6;
        const auto [mean, se] = empirical_count(pats, r, lo, hi);
        const double expect = expected_count(x, r, lo, hi);
        CHECK(std::fabs(mean - expect) <= std::max(3.0 * se, 1e-3));
    }
}

TEST_CASE("binary pattern round trip") {
    const TopRow x({1.0, 0.0, -1.0});
    const auto pats = sample_patterns(x, {3, 3}, 5, 1);
    std::stringstream ss;
    write_patterns_binary(ss, pats);
    const auto back = read_patterns_binary(ss);
    REQUIRE(back.size() == pats.size());
    for (std::size_t i = 0; i < pats.size(); ++i)
        for (int r = 0; r < 3; ++r)
            for (std::size_t j = 0; j < pats[i].rows[r].size(); ++j)
                CHECK(back[i].rows[r][j] == pats[i].rows[r][j]);
}
