// gtdpp command line: region classification, edge/outside maps, correlation
// kernels, decay estimates, pattern sampling, and the reference decay
// experiment for two-atom measures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gtdpp/asymptotics.hpp"
#include "gtdpp/kernel.hpp"
#include "gtdpp/region.hpp"
#include "gtdpp/sampler.hpp"

using namespace gtdpp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitPrecondition = 4;

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool looks_numeric(const std::string& tok) {
    if (tok.empty()) return false;
    char* end = nullptr;
    std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size();
}

/// Fixed-column record stream; CSV and JSON emissions carry the exact same
/// value tokens.
class Emitter {
  public:
    explicit Emitter(std::vector<std::string> cols) : cols_(std::move(cols)) {}

    void add(std::vector<std::string> row) {
        if (row.size() != cols_.size()) throw Error("emitter row arity mismatch");
        rows_.push_back(std::move(row));
    }

    void write(std::ostream& out, const std::string& format) const {
        if (format == "csv") {
            for (std::size_t c = 0; c < cols_.size(); ++c)
                out << cols_[c] << (c + 1 < cols_.size() ? "," : "\n");
            for (const auto& row : rows_)
                for (std::size_t c = 0; c < row.size(); ++c)
                    out << row[c] << (c + 1 < row.size() ? "," : "\n");
        } else {
            out << "[";
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                out << (r ? ",\n " : "\n ") << "{";
                for (std::size_t c = 0; c < cols_.size(); ++c) {
                    out << "\"" << cols_[c] << "\": ";
                    if (looks_numeric(rows_[r][c]))
                        out << rows_[r][c];
                    else
                        out << "\"" << rows_[r][c] << "\"";
                    if (c + 1 < cols_.size()) out << ", ";
                }
                out << "}";
            }
            out << "\n]\n";
        }
    }

  private:
    std::vector<std::string> cols_;
    std::vector<std::vector<std::string>> rows_;
};

struct CommonOpts {
    std::string measure_path;
    std::string atoms_inline;
    std::string format = "csv";
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_measure = true) {
    if (needs_measure) {
        cmd->add_option("--measure", o.measure_path, "measure JSON file");
        cmd->add_option("--atoms", o.atoms_inline, "inline atoms x1:w1,x2:w2,...");
    }
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", o.out_path, "output path (default stdout)");
}

AtomicMeasure resolve_measure(const CommonOpts& o) {
    if (!o.measure_path.empty()) return load_measure_file(o.measure_path);
    if (!o.atoms_inline.empty()) return parse_measure_inline(o.atoms_inline);
    throw DomainError("a measure is required (--measure or --atoms)");
}

void emit(const Emitter& em, const CommonOpts& o) {
    if (o.out_path.empty()) {
        em.write(std::cout, o.format);
    } else {
        std::ofstream out(o.out_path);
        if (!out) throw Error("cannot open output path: " + o.out_path);
        em.write(out, o.format);
    }
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw DomainError(std::string(what) + " must be \"a,b\"");
    return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

TopRow load_toprow_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open top-row file: " + path);
    nlohmann::json j;
    in >> j;
    if (!j.is_array()) throw DomainError("top-row file must be a JSON array");
    std::vector<double> vals;
    for (const auto& v : j) vals.push_back(v.get<double>());
    return TopRow(std::move(vals));
}

struct RowSource {
    std::string toprow_path;
    int n = 0;
};

TopRow resolve_row(const CommonOpts& common, const RowSource& rs) {
    if (!rs.toprow_path.empty()) return load_toprow_file(rs.toprow_path);
    if (rs.n > 0) return clustered_top_row(resolve_measure(common), rs.n);
    throw DomainError("a top row is required (--toprow or --measure with --n)");
}

void append_witness(std::vector<std::string>& row, const RegionPoint& rp) {
    row.push_back(to_string(rp.label));
    row.push_back(rp.liquid_root ? fmt_real(rp.liquid_root->real()) : "");
    row.push_back(rp.liquid_root ? fmt_real(rp.liquid_root->imag()) : "");
    row.push_back(rp.edge_root ? fmt_real(*rp.edge_root) : "");
    row.push_back(rp.edge_root ? std::to_string(rp.edge_multiplicity) : "");
    row.push_back(rp.outside_roots ? fmt_real(rp.outside_roots->first) : "");
    row.push_back(rp.outside_roots ? fmt_real(rp.outside_roots->second) : "");
}

int run_app(int argc, char** argv) {
    CLI::App app{"Gelfand-Tsetlin determinantal point process toolkit"};
    app.require_subcommand(1);
    app.set_config("--config")->configurable(false);
    app.allow_config_extras(false);

    // classify
    CommonOpts cl_common;
    std::string cl_point, cl_grid;
    double cl_tol = 1e-9;
    auto* cmd_classify = app.add_subcommand("classify", "label points of [a,b]x[0,1]");
    add_common(cmd_classify, cl_common);
    cmd_classify->add_option("--point", cl_point, "single point CHI,ETA");
    cmd_classify->add_option("--grid", cl_grid, "grid NXxNY over [a,b]x[0,1]");
    cmd_classify->add_option("--tol", cl_tol, "classification tolerance");

    // edge
    CommonOpts ed_common;
    double ed_t = std::numeric_limits<double>::quiet_NaN();
    std::string ed_interval;
    int ed_count = 0;
    auto* cmd_edge = app.add_subcommand("edge", "edge curve points");
    add_common(cmd_edge, ed_common);
    cmd_edge->add_option("--t", ed_t, "single edge parameter");
    cmd_edge->add_option("--interval", ed_interval, "parameter range LO,HI");
    cmd_edge->add_option("--n", ed_count, "number of parameters in the range");

    // outside
    CommonOpts ou_common;
    std::string ou_ts, ou_point;
    auto* cmd_outside = app.add_subcommand("outside", "outside map and inverse");
    add_common(cmd_outside, ou_common);
    cmd_outside->add_option("--ts", ou_ts, "forward input T,S with t > s > b");
    cmd_outside->add_option("--point", ou_point, "inverse input CHI,ETA");

    // kernel
    CommonOpts ke_common;
    RowSource ke_row;
    double ke_u = 0.0, ke_v = std::numeric_limits<double>::quiet_NaN();
    int ke_r = 0, ke_s = 0;
    auto* cmd_kernel = app.add_subcommand("kernel", "correlation kernel value");
    add_common(cmd_kernel, ke_common);
    cmd_kernel->add_option("--toprow", ke_row.toprow_path, "top row JSON array file");
    cmd_kernel->add_option("--n", ke_row.n, "clustered top-row size");
    cmd_kernel->add_option("--u", ke_u, "first particle position")->required();
    cmd_kernel->add_option("--v", ke_v, "second particle position (default u)");
    cmd_kernel->add_option("--row", ke_r, "first particle row")->required();
    cmd_kernel->add_option("--row2", ke_s, "second particle row (default row)");

    // expected-count
    CommonOpts ec_common;
    RowSource ec_row;
    int ec_r = 0;
    std::string ec_interval;
    auto* cmd_count = app.add_subcommand("expected-count", "expected particles in an interval");
    add_common(cmd_count, ec_common);
    cmd_count->add_option("--toprow", ec_row.toprow_path, "top row JSON array file");
    cmd_count->add_option("--n", ec_row.n, "clustered top-row size");
    cmd_count->add_option("--row", ec_r, "row index")->required();
    cmd_count->add_option("--interval", ec_interval, "interval LO,HI")->required();

    // decay
    CommonOpts dc_common;
    RowSource dc_row;
    std::string dc_ts;
    double dc_theta = 5.0 / 12.0;
    bool dc_force = false;
    auto* cmd_decay = app.add_subcommand("decay", "steepest-descent decay report");
    add_common(cmd_decay, dc_common);
    cmd_decay->add_option("--toprow", dc_row.toprow_path, "top row JSON array file");
    cmd_decay->add_option("--n", dc_row.n, "clustered top-row size");
    cmd_decay->add_option("--ts", dc_ts, "outside pair T,S")->required();
    cmd_decay->add_option("--theta", dc_theta, "exponent theta in (1/3,1/2)");
    cmd_decay->add_flag("--force", dc_force, "run even when infeasible");

    // sample
    CommonOpts sa_common;
    RowSource sa_row;
    int sa_count = 100, sa_workers = 1, sa_r = 0;
    std::uint64_t sa_seed = 0, sa_stream = 0;
    bool sa_rejection = false;
    std::string sa_interval, sa_binary;
    auto* cmd_sample = app.add_subcommand("sample", "Monte Carlo pattern sampling");
    add_common(cmd_sample, sa_common);
    cmd_sample->add_option("--toprow", sa_row.toprow_path, "top row JSON array file");
    cmd_sample->add_option("--n", sa_row.n, "clustered top-row size");
    cmd_sample->add_option("--count", sa_count, "number of samples");
    cmd_sample->add_option("--seed", sa_seed, "RNG seed");
    cmd_sample->add_option("--stream", sa_stream, "RNG stream index");
    cmd_sample->add_option("--workers", sa_workers, "worker threads");
    cmd_sample->add_flag("--rejection", sa_rejection, "uniform rejection sampler");
    cmd_sample->add_option("--row", sa_r, "summarise counts on this row");
    cmd_sample->add_option("--interval", sa_interval, "count interval LO,HI");
    cmd_sample->add_option("--binary-out", sa_binary, "binary pattern dump path");

    // norm
    CommonOpts no_common;
    double no_t = 0.0;
    auto* cmd_norm = app.add_subcommand("norm", "free compressed norm");
    add_common(cmd_norm, no_common);
    cmd_norm->add_option("--t", no_t, "height t in (0,1)")->required();

    // reproduce-atoms
    CommonOpts ra_common;
    int ra_l = 4;
    std::vector<int> ra_ns;
    std::string ra_interval = "0.5,0.99";
    auto* cmd_atoms = app.add_subcommand(
        "reproduce-atoms", "two-atom decay experiment on [.5,.99]");
    add_common(cmd_atoms, ra_common, false);
    cmd_atoms->add_option("--l", ra_l, "height parameter l >= 2");
    cmd_atoms->add_option("--n", ra_ns, "top-row sizes (each a multiple of 4l)")
        ->required();
    cmd_atoms->add_option("--interval", ra_interval, "count interval LO,HI");

    CLI11_PARSE(app, argc, argv);

    if (cmd_classify->parsed()) {
        const AtomicMeasure mu = resolve_measure(cl_common);
        Emitter em({"chi", "eta", "label", "root_re", "root_im", "edge_root",
                    "edge_mult", "t", "s"});
        if (!cl_point.empty()) {
            const auto [chi, eta] = parse_pair(cl_point, "--point");
            const RegionPoint rp = classify(mu, chi, eta, cl_tol);
            std::vector<std::string> row{fmt_real(chi), fmt_real(eta)};
            append_witness(row, rp);
            em.add(std::move(row));
        } else if (!cl_grid.empty()) {
            const auto xpos = cl_grid.find('x');
            if (xpos == std::string::npos) throw DomainError("--grid must be NXxNY");
            const int nx = std::stoi(cl_grid.substr(0, xpos));
            const int ny = std::stoi(cl_grid.substr(xpos + 1));
            if (nx < 1 || ny < 1) throw DomainError("grid sizes must be positive");
            for (int i = 0; i < nx; ++i) {
                for (int j = 0; j < ny; ++j) {
                    const double chi = mu.a() + mu.spread() * (i + 0.5) / nx;
                    const double eta = (j + 0.5) / ny;
                    std::vector<std::string> row{fmt_real(chi), fmt_real(eta)};
                    try {
                        const RegionPoint rp = classify(mu, chi, eta, cl_tol);
                        append_witness(row, rp);
                    } catch (const AmbiguousError&) {
                        row.insert(row.end(), {"Ambiguous", "", "", "", "", "", ""});
                    }
                    em.add(std::move(row));
                }
            }
        } else {
            throw DomainError("classify needs --point or --grid");
        }
        emit(em, cl_common);
        return kExitOk;
    }

    if (cmd_edge->parsed()) {
        const AtomicMeasure mu = resolve_measure(ed_common);
        Emitter em({"t", "chi", "eta", "branch"});
        auto branch_name = [](EdgeBranch b) {
            switch (b) {
                case EdgeBranch::RPlus: return "R+";
                case EdgeBranch::RMinus: return "R-";
                case EdgeBranch::RZero: return "R0";
                case EdgeBranch::ROne: return "R1";
            }
            return "?";
        };
        auto add_point = [&](double t) {
            const EdgePoint ep = edge_curve(mu, t);
            em.add({fmt_real(t), fmt_real(ep.chi), fmt_real(ep.eta), branch_name(ep.branch)});
        };
        if (!ed_interval.empty()) {
            if (ed_count < 2) throw DomainError("edge range needs --n >= 2");
            const auto [lo, hi] = parse_pair(ed_interval, "--interval");
            for (int i = 0; i < ed_count; ++i)
                add_point(lo + (hi - lo) * i / (ed_count - 1.0));
        } else if (std::isfinite(ed_t)) {
            add_point(ed_t);
        } else {
            throw DomainError("edge needs --t or --interval with --n");
        }
        emit(em, ed_common);
        return kExitOk;
    }

    if (cmd_outside->parsed()) {
        const AtomicMeasure mu = resolve_measure(ou_common);
        Emitter em({"mode", "t", "s", "chi", "eta"});
        if (!ou_ts.empty()) {
            const auto [t, s] = parse_pair(ou_ts, "--ts");
            const auto [chi, eta] = outside_map(mu, t, s);
            em.add({"forward", fmt_real(t), fmt_real(s), fmt_real(chi), fmt_real(eta)});
        } else if (!ou_point.empty()) {
            const auto [chi, eta] = parse_pair(ou_point, "--point");
            const auto [t, s] = outside_inverse(mu, chi, eta);
            em.add({"inverse", fmt_real(t), fmt_real(s), fmt_real(chi), fmt_real(eta)});
        } else {
            throw DomainError("outside needs --ts or --point");
        }
        emit(em, ou_common);
        return kExitOk;
    }

    if (cmd_kernel->parsed()) {
        const TopRow x = resolve_row(ke_common, ke_row);
        if (!std::isfinite(ke_v)) ke_v = ke_u;
        if (ke_s == 0) ke_s = ke_r;
        double value;
        const char* path;
        if (x.n() <= kExactSizeLimit) {
            value = kernel(x, {ke_u, ke_r}, {ke_v, ke_s});
            path = "exact";
        } else {
            const ContourSpec spec = choose_contours(x, ke_u, ke_v);
            value = kernel_quadrature(x, {ke_u, ke_r}, {ke_v, ke_s}, spec);
            path = "quadrature";
        }
        Emitter em({"n", "u", "r", "v", "s", "kernel", "path"});
        em.add({std::to_string(x.n()), fmt_real(ke_u), std::to_string(ke_r),
                fmt_real(ke_v), std::to_string(ke_s), fmt_real(value), path});
        emit(em, ke_common);
        return kExitOk;
    }

    if (cmd_count->parsed()) {
        const TopRow x = resolve_row(ec_common, ec_row);
        const auto [lo, hi] = parse_pair(ec_interval, "--interval");
        const double value = expected_count(x, ec_r, lo, hi);
        Emitter em({"n", "row", "lo", "hi", "expected_count"});
        em.add({std::to_string(x.n()), std::to_string(ec_r), fmt_real(lo), fmt_real(hi),
                fmt_real(value)});
        emit(em, ec_common);
        return kExitOk;
    }

    if (cmd_decay->parsed()) {
        const AtomicMeasure mu = resolve_measure(dc_common);
        const TopRow x = resolve_row(dc_common, dc_row);
        const auto [t, s] = parse_pair(dc_ts, "--ts");
        const SteepestSetup setup = make_setup(mu, x, t, s, dc_theta);
        const FeasibilityReport rep = feasibility_check(setup);
        if (!rep.all_pass && !dc_force) {
            std::cerr << "infeasible at n=" << x.n() << "; failing conditions:\n";
            for (const auto& item : rep.items)
                if (!item.pass)
                    std::cerr << "  " << item.name << " (lhs=" << item.lhs
                              << ", rhs=" << item.rhs << ")\n";
            std::cerr << "use --force to compute the report anyway\n";
            return kExitPrecondition;
        }
        const DecayReport d = decay_estimate(setup);
        Emitter em({"n", "t", "s", "chi_n", "eta_n", "t_n", "s_n_root", "t_tilde_n",
                    "s_tilde_n", "D_n", "D_tilde_n", "exponent_n", "leading",
                    "kernel_estimate", "envelope_taylor", "envelope_tail", "feasible"});
        em.add({std::to_string(x.n()), fmt_real(d.t), fmt_real(d.s), fmt_real(d.chi_n),
                fmt_real(d.eta_n), fmt_real(d.t_n), fmt_real(d.s_n_root),
                fmt_real(d.t_tilde_n), fmt_real(d.s_tilde_n), fmt_real(d.D_n),
                fmt_real(d.D_tilde_n), fmt_real(d.exponent_n), fmt_real(d.leading),
                fmt_real(d.kernel_estimate), fmt_real(d.rel_envelope_taylor),
                fmt_real(d.rel_envelope_tail), rep.all_pass ? "1" : "0"});
        emit(em, dc_common);
        return kExitOk;
    }

    if (cmd_sample->parsed()) {
        const TopRow x = resolve_row(sa_common, sa_row);
        const auto patterns =
            sample_patterns(x, {sa_seed, sa_stream}, sa_count, sa_workers, sa_rejection);
        if (!sa_binary.empty()) {
            std::ofstream out(sa_binary, std::ios::binary);
            if (!out) throw Error("cannot open binary output path");
            write_patterns_binary(out, patterns);
        }
        if (sa_r > 0) {
            if (sa_interval.empty())
                throw DomainError("--row summaries need --interval");
            const auto [lo, hi] = parse_pair(sa_interval, "--interval");
            const auto [mean, se] = empirical_count(patterns, sa_r, lo, hi);
            Emitter em({"n", "count", "row", "lo", "hi", "mean", "stderr"});
            em.add({std::to_string(x.n()), std::to_string(sa_count), std::to_string(sa_r),
                    fmt_real(lo), fmt_real(hi), fmt_real(mean), fmt_real(se)});
            emit(em, sa_common);
        } else {
            Emitter em({"sample", "row", "index", "value"});
            for (std::size_t i = 0; i < patterns.size(); ++i)
                for (int r = 1; r <= patterns[i].depth(); ++r)
                    for (std::size_t j = 0; j < patterns[i].rows[r - 1].size(); ++j)
                        em.add({std::to_string(i), std::to_string(r), std::to_string(j),
                                fmt_real(patterns[i].rows[r - 1][j])});
            emit(em, sa_common);
        }
        return kExitOk;
    }

    if (cmd_norm->parsed()) {
        const AtomicMeasure mu = resolve_measure(no_common);
        const double value = free_compressed_norm(mu, no_t);
        Emitter em({"t", "norm"});
        em.add({fmt_real(no_t), fmt_real(value)});
        emit(em, no_common);
        return kExitOk;
    }

    if (cmd_atoms->parsed()) {
        if (ra_l < 2) {
            std::cerr << "l must be at least 2\n";
            return kExitPrecondition;
        }
        for (int n : ra_ns)
            if (n <= 0 || n % (4 * ra_l) != 0) {
                std::cerr << "n=" << n << " is not a positive multiple of 4l=" << 4 * ra_l
                          << "\n";
                return kExitPrecondition;
            }
        const AtomicMeasure mu({{1.0, 0.25}, {-1.0, 0.75}});
        const double eta = (1.0 - 1.0 / ra_l) * 0.25;
        const auto [lo, hi] = parse_pair(ra_interval, "--interval");
        const double rate = 5.0 / (12.0 * std::sqrt(6.0)) * std::pow(ra_l, -1.5);
        Emitter em({"n", "l", "row", "expected_count", "bound_shape"});
        for (int n : ra_ns) {
            const TopRow x = clustered_top_row(mu, n);
            const int row = static_cast<int>(std::lround(n * eta));
            const double count = expected_count(x, row, lo, hi);
            const double bound = ra_l * std::exp(-n * rate);
            em.add({std::to_string(n), std::to_string(ra_l), std::to_string(row),
                    fmt_real(count), fmt_real(bound)});
        }
        emit(em, ra_common);
        return kExitOk;
    }

    return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run_app(argc, argv);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DomainError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const SizeError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const NotInRegionError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const EpsTooLargeError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return kExitPrecondition;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}
