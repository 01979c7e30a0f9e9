#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "gtdpp/errors.hpp"

namespace gtdpp {

using cplx = std::complex<double>;

struct Atom {
    double x;  // position
    double w;  // weight
};

/// Finitely atomic probability measure, positions strictly increasing.
/// Weights must be positive and sum to 1 within 1e-12; at least two
/// distinct positions are required.
class AtomicMeasure {
  public:
    explicit AtomicMeasure(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    int size() const { return static_cast<int>(atoms_.size()); }

    double a() const { return atoms_.front().x; }  // min of support
    double b() const { return atoms_.back().x; }   // max of support
    double spread() const { return b() - a(); }

    /// mu[{x}]; positions matched within the pole tolerance.
    double mass_at(double x) const;
    bool is_atom(double x) const;

    static constexpr double pole_tol = 1e-14;
    static constexpr double weight_sum_tol = 1e-12;

  private:
    std::vector<Atom> atoms_;
};

/// k-th moment of mu: sum_i w_i x_i^k. moment(mu, 0) == 1.
double moment(const AtomicMeasure& mu, int k);

/// k-th derivative of the Cauchy transform,
/// C^(k)(w) = sum_i w_i (-1)^k k! / (w - x_i)^(k+1).
/// Throws PoleError if w collides with an atom.
cplx cauchy(const AtomicMeasure& mu, cplx w, int k = 0);

/// Strictly decreasing top row x_1 > x_2 > ... > x_n.
class TopRow {
  public:
    explicit TopRow(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    int n() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }  // 0-based
    double max() const { return values_.front(); }
    double min() const { return values_.back(); }

  private:
    std::vector<double> values_;
};

/// Empirical measure of the top row: n atoms of weight 1/n each.
AtomicMeasure empirical_from_top_row(const TopRow& x);

/// Top row whose empirical measure converges to mu: for each atom, a
/// cluster of round(w_i * n) points spaced 1/n^2 apart. The cluster at
/// the largest atom hangs down from it, the cluster at the smallest
/// hangs up from it, interior clusters are centered.
TopRow clustered_top_row(const AtomicMeasure& mu, int n);

/// JSON measure format: {"atoms": [{"x": <real>, "w": <real>}, ...]}.
/// Positions need not be pre-sorted in the file.
AtomicMeasure load_measure_json(std::istream& in);
AtomicMeasure load_measure_file(const std::string& path);
void save_measure_json(const AtomicMeasure& mu, std::ostream& out);

/// Inline atom list "x1:w1,x2:w2,...".
AtomicMeasure parse_measure_inline(const std::string& text);

}  // namespace gtdpp
