#include "gtdpp/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace gtdpp {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

bool GTPattern::interlaced(double slack) const {
    const int n = depth();
    for (int r = 0; r + 1 < n; ++r) {
        const auto& lower = rows[r];      // r+1 entries
        const auto& upper = rows[r + 1];  // r+2 entries
        for (std::size_t i = 0; i < lower.size(); ++i) {
            if (!(upper[i] >= lower[i] - slack)) return false;
            if (!(lower[i] >= upper[i + 1] - slack)) return false;
        }
    }
    return true;
}

std::mt19937_64 engine_for_sample(RngSeed seed, std::uint64_t index) {
    const std::uint64_t mixed =
        splitmix64(seed.seed ^ splitmix64(seed.stream ^ splitmix64(index)));
    return std::mt19937_64(mixed);
}

Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng) {
    if (n < 1) throw DomainError("unitary dimension must be positive");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = cplx(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
    Eigen::MatrixXcd Q = qr.householderQ();
    const Eigen::MatrixXcd R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const cplx d = R(j, j);
        const cplx phase = (std::abs(d) > 0.0) ? d / std::abs(d) : cplx(1.0, 0.0);
        Q.col(j) *= phase;
    }
    return Q;
}

GTPattern sample_minor_process(const TopRow& x, std::mt19937_64& rng) {
    const int n = x.n();
    const Eigen::MatrixXcd U = haar_unitary(n, rng);
    Eigen::VectorXd d(n);
    for (int i = 0; i < n; ++i) d(i) = x[i];
    Eigen::MatrixXcd H = U * d.asDiagonal() * U.adjoint();
    H = 0.5 * (H + H.adjoint()).eval();

    GTPattern pat;
    pat.rows.resize(n);
    for (int r = 1; r <= n; ++r) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.topLeftCorner(r, r));
        if (es.info() != Eigen::Success)
            throw EigensolverError("principal minor eigensolve failed");
        std::vector<double> row(r);
        for (int i = 0; i < r; ++i) row[i] = es.eigenvalues()(r - 1 - i);  // descending
        pat.rows[r - 1] = std::move(row);
    }
    return pat;
}

GTPattern sample_gt_uniform_rejection(const TopRow& x, std::mt19937_64& rng, long budget) {
    const int n = x.n();
    std::uniform_real_distribution<double> unif(x.min(), x.max());
    GTPattern pat;
    pat.rows.resize(n);
    pat.rows[n - 1] = x.values();
    for (long attempt = 0; attempt < budget; ++attempt) {
        for (int r = 1; r < n; ++r) {
            std::vector<double> row(r);
            for (int i = 0; i < r; ++i) row[i] = unif(rng);
            std::sort(row.begin(), row.end(), std::greater<double>());
            pat.rows[r - 1] = std::move(row);
        }
        if (pat.interlaced(0.0)) return pat;
    }
    throw RejectionBudgetError("rejection sampler exhausted its proposal budget");
}

std::vector<GTPattern> sample_patterns(const TopRow& x, RngSeed seed, int count,
                                       int workers, bool rejection) {
    std::vector<GTPattern> out(count);
    workers = std::max(1, workers);
    auto work = [&](int begin, int end) {
        for (int i = begin; i < end; ++i) {
            std::mt19937_64 rng = engine_for_sample(seed, static_cast<std::uint64_t>(i));
            out[i] = rejection ? sample_gt_uniform_rejection(x, rng)
                               : sample_minor_process(x, rng);
        }
    };
    if (workers == 1 || count < 2 * workers) {
        work(0, count);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (count + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const int begin = w * chunk;
            const int end = std::min(count, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

std::pair<double, double> empirical_count(const std::vector<GTPattern>& patterns, int r,
                                          double lo, double hi) {
    if (patterns.size() < 2) throw DomainError("need at least 2 patterns");
    const auto m = patterns.size();
    double sum = 0.0, sumsq = 0.0;
    for (const GTPattern& pat : patterns) {
        if (r < 1 || r > pat.depth()) throw DomainError("row index out of range");
        long c = 0;
        for (double y : pat.rows[r - 1])
            if (y > lo && y < hi) ++c;
        sum += c;
        sumsq += static_cast<double>(c) * c;
    }
    const double mean = sum / m;
    const double var = std::max(0.0, (sumsq - m * mean * mean) / (m - 1.0));
    return {mean, std::sqrt(var / m)};
}

void write_patterns_binary(std::ostream& out, const std::vector<GTPattern>& patterns) {
    if (patterns.empty()) throw DomainError("nothing to write");
    const std::uint32_t version = 1;
    const std::uint64_t n = patterns.front().depth();
    const std::uint64_t count = patterns.size();
    out.write("GTPB", 4);
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(&count), sizeof count);
    for (const GTPattern& pat : patterns)
        for (const auto& row : pat.rows)
            out.write(reinterpret_cast<const char*>(row.data()),
                      static_cast<std::streamsize>(row.size() * sizeof(double)));
}

std::vector<GTPattern> read_patterns_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "GTPB", 4) != 0)
        throw DomainError("bad pattern file magic");
    std::uint32_t version = 0;
    std::uint64_t n = 0, count = 0;
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    in.read(reinterpret_cast<char*>(&count), sizeof count);
    if (!in || version != 1) throw DomainError("bad pattern file header");
    std::vector<GTPattern> out(count);
    for (auto& pat : out) {
        pat.rows.resize(n);
        for (std::uint64_t r = 1; r <= n; ++r) {
            pat.rows[r - 1].resize(r);
            in.read(reinterpret_cast<char*>(pat.rows[r - 1].data()),
                    static_cast<std::streamsize>(r * sizeof(double)));
        }
    }
    if (!in) throw DomainError("truncated pattern file");
    return out;
}

}  // namespace gtdpp
