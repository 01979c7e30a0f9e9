#include "gtdpp/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gtdpp {

AtomicMeasure::AtomicMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw DomainError("measure has no atoms");
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& l, const Atom& r) { return l.x < r.x; });

    // merge positions that coincide to machine resolution
    std::vector<Atom> merged;
    for (const Atom& at : atoms_) {
        if (!merged.empty() && at.x - merged.back().x < 1e-15) {
            merged.back().w += at.w;
        } else {
            merged.push_back(at);
        }
    }
    atoms_ = std::move(merged);

    if (atoms_.size() < 2)
        throw DomainError("measure must have at least 2 distinct positions");
    double sum = 0.0;
    for (const Atom& at : atoms_) {
        if (!(at.w > 0.0)) throw DomainError("atom weights must be positive");
        sum += at.w;
    }
    if (std::fabs(sum - 1.0) > weight_sum_tol)
        throw DomainError("atom weights must sum to 1 within 1e-12, got " +
                          std::to_string(sum));
    for (std::size_t i = 1; i < atoms_.size(); ++i)
        if (!(atoms_[i].x > atoms_[i - 1].x))
            throw DomainError("atom positions must be strictly increasing");
}

double AtomicMeasure::mass_at(double x) const {
    for (const Atom& at : atoms_)
        if (std::fabs(x - at.x) <= pole_tol) return at.w;
    return 0.0;
}

bool AtomicMeasure::is_atom(double x) const {
    for (const Atom& at : atoms_)
        if (std::fabs(x - at.x) <= pole_tol) return true;
    return false;
}

double moment(const AtomicMeasure& mu, int k) {
    if (k < 0) throw DomainError("moment order must be nonnegative");
    double s = 0.0;
    for (const Atom& at : mu.atoms()) s += at.w * std::pow(at.x, k);
    return s;
}

cplx cauchy(const AtomicMeasure& mu, cplx w, int k) {
    if (k < 0) throw DomainError("derivative order must be nonnegative");
    double kfac = 1.0;
    for (int j = 2; j <= k; ++j) kfac *= j;
    const double sgn = (k % 2 == 0) ? 1.0 : -1.0;
    cplx s = 0.0;
    for (const Atom& at : mu.atoms()) {
        const cplx d = w - at.x;
        if (std::abs(d) <= AtomicMeasure::pole_tol)
            throw PoleError("cauchy transform evaluated at an atom");
        s += at.w * sgn * kfac / std::pow(d, k + 1);
    }
    return s;
}

TopRow::TopRow(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw DomainError("top row is empty");
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (!(values_[i - 1] > values_[i]))
            throw DomainError("top row must be strictly decreasing");
}

AtomicMeasure empirical_from_top_row(const TopRow& x) {
    const double w = 1.0 / x.n();
    std::vector<Atom> atoms;
    atoms.reserve(x.n());
    for (int i = x.n() - 1; i >= 0; --i) atoms.push_back({x[i], w});
    return AtomicMeasure(std::move(atoms));
}

TopRow clustered_top_row(const AtomicMeasure& mu, int n) {
    if (n < mu.size()) throw DomainError("need at least one point per atom");
    const int k = mu.size();

    // largest-remainder apportionment of n points over the weights
    std::vector<int> counts(k, 0);
    std::vector<std::pair<double, int>> rem;
    int assigned = 0;
    for (int i = 0; i < k; ++i) {
        const double exact = mu.atoms()[i].w * n;
        counts[i] = static_cast<int>(std::floor(exact));
        rem.push_back({exact - counts[i], i});
        assigned += counts[i];
    }
    std::sort(rem.begin(), rem.end(), [](auto& l, auto& r) {
        return l.first > r.first || (l.first == r.first && l.second < r.second);
    });
    for (int j = 0; assigned < n; ++j, ++assigned) counts[rem[j % k].second]++;
    for (int i = 0; i < k; ++i)
        if (counts[i] == 0) throw DomainError("atom received no points; increase n");

    const double h = 1.0 / (static_cast<double>(n) * n);
    std::vector<double> vals;
    vals.reserve(n);
    // atoms descending: cluster hangs down from the top atom, up from the
    // bottom atom, centered otherwise
    for (int i = k - 1; i >= 0; --i) {
        const double pos = mu.atoms()[i].x;
        const int m = counts[i];
        double top;
        if (i == k - 1)
            top = pos;
        else if (i == 0)
            top = pos + (m - 1) * h;
        else
            top = pos + 0.5 * (m - 1) * h;
        for (int j = 0; j < m; ++j) vals.push_back(top - j * h);
    }
    return TopRow(std::move(vals));
}

AtomicMeasure load_measure_json(std::istream& in) {
    nlohmann::json j;
    in >> j;
    if (!j.contains("atoms") || !j["atoms"].is_array())
        throw DomainError("measure JSON must contain an \"atoms\" array");
    std::vector<Atom> atoms;
    for (const auto& item : j["atoms"]) {
        if (!item.contains("x") || !item.contains("w"))
            throw DomainError("each atom needs \"x\" and \"w\"");
        atoms.push_back({item["x"].get<double>(), item["w"].get<double>()});
    }
    return AtomicMeasure(std::move(atoms));
}

AtomicMeasure load_measure_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open measure file: " + path);
    return load_measure_json(in);
}

void save_measure_json(const AtomicMeasure& mu, std::ostream& out) {
    nlohmann::json j;
    j["atoms"] = nlohmann::json::array();
    for (const Atom& at : mu.atoms()) j["atoms"].push_back({{"x", at.x}, {"w", at.w}});
    out << j.dump(2) << "\n";
}

AtomicMeasure parse_measure_inline(const std::string& text) {
    std::vector<Atom> atoms;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos)
            throw DomainError("inline atom must be \"position:weight\": " + tok);
        atoms.push_back({std::stod(tok.substr(0, colon)), std::stod(tok.substr(colon + 1))});
    }
    return AtomicMeasure(std::move(atoms));
}

}  // namespace gtdpp
