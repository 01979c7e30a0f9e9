#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gtdpp/measure.hpp"

namespace gtdpp {

/// Seed plus stream index; a fixed (seed, stream) reproduces identical
/// sample sequences regardless of the worker count.
struct RngSeed {
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
};

/// Triangular array: rows[r-1] holds the r entries of row r, non-increasing.
struct GTPattern {
    std::vector<std::vector<double>> rows;

    int depth() const { return static_cast<int>(rows.size()); }
    /// Consecutive rows interlace, with slack on the weak inequalities.
    bool interlaced(double slack = 1e-9) const;
};

/// Engine for one sample: mixes (seed, stream, index) so that samples are
/// independent of how they are distributed over workers.
std::mt19937_64 engine_for_sample(RngSeed seed, std::uint64_t index);

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the
/// R-diagonal phase correction.
Eigen::MatrixXcd haar_unitary(int n, std::mt19937_64& rng);

/// Eigenvalues of the nested principal minors of U diag(x) U*; row r holds
/// the spectrum of the leading r-by-r block, sorted descending.
GTPattern sample_minor_process(const TopRow& x, std::mt19937_64& rng);

/// Uniform pattern by rejection: every row i.i.d. uniform on [x_n, x_1],
/// accepted when the whole pattern interlaces. Exact uniform law on the
/// polytope; practical only for small n.
GTPattern sample_gt_uniform_rejection(const TopRow& x, std::mt19937_64& rng,
                                      long budget = 10'000'000);

/// count patterns drawn in parallel over workers with per-sample engines.
std::vector<GTPattern> sample_patterns(const TopRow& x, RngSeed seed, int count,
                                       int workers = 1, bool rejection = false);

/// Sample mean and standard error of the number of row-r particles in (lo, hi).
std::pair<double, double> empirical_count(const std::vector<GTPattern>& patterns, int r,
                                          double lo, double hi);

/// Binary pattern dump: header (magic "GTPB", u32 version, u64 n, u64 count)
/// then count patterns of n(n+1)/2 doubles, rows 1..n concatenated.
void write_patterns_binary(std::ostream& out, const std::vector<GTPattern>& patterns);
std::vector<GTPattern> read_patterns_binary(std::istream& in);

}  // namespace gtdpp
