// agnodol: sweep driver for the coherent-state classification library.
// Subcommands fig2..fig6 write one CSV data file plus a JSON run manifest;
// `verify` runs the cross-validation oracle suite and reports a table.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "agnodol/agnostic.hpp"
#include "agnodol/bounds.hpp"
#include "agnodol/dolinar.hpp"
#include "agnodol/estimate.hpp"
#include "agnodol/optics.hpp"
#include "agnodol/telegraph.hpp"

namespace {

using namespace agnodol;
using nlohmann::json;

// ---------------------------------------------------------------- formatting

std::string fmt_data(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_short(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

// ------------------------------------------------------------- grid parsing

std::vector<std::string> split_on(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (true) {
        const std::size_t next = s.find(sep, pos);
        parts.push_back(s.substr(pos, next - pos));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    return parts;
}

double to_real(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
    if (used != s.size()) throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

// "a,b,c" | "start:stop:points" (linear) | single value
std::vector<double> parse_real_grid(const std::string& s) {
    if (s.find(',') != std::string::npos) {
        std::vector<double> out;
        for (const std::string& p : split_on(s, ',')) out.push_back(to_real(p));
        return out;
    }
    if (s.find(':') != std::string::npos) {
        const std::vector<std::string> p = split_on(s, ':');
        if (p.size() != 3) throw std::invalid_argument("range must be start:stop:points");
        const double start = to_real(p[0]), stop = to_real(p[1]);
        const int points = static_cast<int>(to_real(p[2]));
        if (points < 2 || start >= stop)
            throw std::invalid_argument("range needs points >= 2 and start < stop");
        std::vector<double> out(points);
        for (int i = 0; i < points; ++i)
            out[i] = start + (stop - start) * i / static_cast<double>(points - 1);
        return out;
    }
    return {to_real(s)};
}

// "a,b,c" | "start:stop:points" (log-spaced, rounded, deduplicated) | single
std::vector<int> parse_copy_grid(const std::string& s) {
    std::vector<int> out;
    if (s.find(',') != std::string::npos) {
        for (const std::string& p : split_on(s, ',')) out.push_back(static_cast<int>(to_real(p)));
    } else if (s.find(':') != std::string::npos) {
        const std::vector<std::string> p = split_on(s, ':');
        if (p.size() != 3) throw std::invalid_argument("range must be start:stop:points");
        const double start = to_real(p[0]), stop = to_real(p[1]);
        const int points = static_cast<int>(to_real(p[2]));
        if (points < 2 || start < 1.0 || start >= stop)
            throw std::invalid_argument("copy range needs points >= 2 and 1 <= start < stop");
        const double ratio = stop / start;
        for (int i = 0; i < points; ++i) {
            const int n = static_cast<int>(
                std::lround(start * std::pow(ratio, i / static_cast<double>(points - 1))));
            if (out.empty() || n != out.back()) out.push_back(n);
        }
    } else {
        out.push_back(static_cast<int>(to_real(s)));
    }
    for (int n : out)
        if (n < 1) throw std::invalid_argument("copy counts must be >= 1");
    return out;
}

// "a,b,c" | "start:stop:points" (linear, rounded, deduplicated) | single
std::vector<int> parse_int_grid(const std::string& s) {
    std::vector<int> out;
    if (s.find(':') != std::string::npos) {
        for (double v : parse_real_grid(s)) {
            const int k = static_cast<int>(std::lround(v));
            if (out.empty() || k != out.back()) out.push_back(k);
        }
    } else {
        for (double v : parse_real_grid(s)) out.push_back(static_cast<int>(std::lround(v)));
    }
    return out;
}

// -------------------------------------------------------------- parallelism

// Dispatches [0, count) over a small thread pool; each index's work is
// independent and lands in a caller-indexed slot, so scheduling order never
// shows in the output. Rethrows the first worker exception.
template <class Body>
void parallel_for(int count, const Body& body) {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const int n_threads = std::min<int>(static_cast<int>(std::min(hw, 8u)), count);
    if (n_threads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ---------------------------------------------------------- output plumbing

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

struct OutputRecord {
    std::string file;
    std::uint64_t hash = 0;
    std::size_t bytes = 0;
};

OutputRecord write_data_file(const std::filesystem::path& dir, const std::string& name,
                             const std::string& content) {
    std::filesystem::create_directories(dir);
    const std::filesystem::path path = dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw std::runtime_error("short write to " + path.string());
    return {name, fnv1a64(content), content.size()};
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Manifest goes last so a complete manifest implies complete data files.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const std::string& argv_line, const json& params, const json& tolerances,
                    const std::vector<OutputRecord>& outputs, double duration_seconds,
                    const json& extra = json()) {
    json m;
    m["command"] = command;
    m["command_line"] = argv_line;
    m["parameters"] = params;
    m["tolerances"] = tolerances;
    m["outputs"] = json::array();
    for (const OutputRecord& rec : outputs) {
        m["outputs"].push_back(
            {{"file", rec.file}, {"fnv1a64", hash_hex(rec.hash)}, {"bytes", rec.bytes}});
    }
    m["duration_seconds"] = duration_seconds;
    if (!extra.is_null())
        for (auto it = extra.begin(); it != extra.end(); ++it) m[it.key()] = it.value();
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / (command + ".manifest.json"), std::ios::binary);
    out << m.dump(2) << "\n";
}

std::string join_csv(const std::vector<std::string>& cells) {
    std::string row;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) row += ',';
        row += cells[i];
    }
    row += '\n';
    return row;
}

// --------------------------------------------------------------- CLI state

struct Options {
    std::string alpha;        // |alpha| grid
    std::string alpha_sq;     // |alpha|^2 grid (alternative to --alpha)
    std::string n;            // copy-count grid
    std::string m;            // estimation-copy grid (fig4)
    std::string estimator;    // photon | heterodyne (empty = both)
    double sigma = 0.1;       // Rice prior width (fig6)
    std::string xc;           // Rice prior center grid (fig6)
    long long trials = 100000;
    int slices = 2000;
    std::uint64_t seed = 1;
    int grid_steps = 2000;
    bool paper_literal = false;
    std::string out = ".";
    std::string format = "csv";
};

std::vector<double> resolve_alphas(const Options& opt, const std::string& fallback) {
    if (!opt.alpha_sq.empty()) {
        std::vector<double> out;
        for (double a : parse_real_grid(opt.alpha_sq)) {
            if (a < 0.0) throw std::invalid_argument("--alpha-sq values must be >= 0");
            out.push_back(std::sqrt(a));
        }
        return out;
    }
    return parse_real_grid(opt.alpha.empty() ? fallback : opt.alpha);
}

json grid_json(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

json grid_json(const std::vector<int>& v) {
    json a = json::array();
    for (int x : v) a.push_back(x);
    return a;
}

std::string describe_grid(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt_short(v[i]);
    }
    return s + "]";
}

std::string describe_grid(const std::vector<int>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s + "]";
}

// ------------------------------------------------------------- fig commands

int run_fig2(const Options& opt, const std::string& argv_line) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> alphas = resolve_alphas(opt, "0.25,0.625");
    const std::vector<int> ns = parse_copy_grid(opt.n.empty() ? "1:128:25" : opt.n);

    std::string csv;
    csv += "# fig2: classification error vs training copies: agnostic receiver, "
           "phase-invariant optimal bound, known-amplitude (Helstrom) limit\n";
    csv += "# params: alpha=" + describe_grid(alphas) + " n=" + describe_grid(ns) +
           " grid_steps=" + std::to_string(opt.grid_steps) +
           " paper_literal=" + (opt.paper_literal ? std::string("true") : std::string("false")) +
           "\n";
    csv += "# columns: n";
    for (double al : alphas) {
        const std::string tag = "(alpha=" + fmt_short(al) + ")";
        csv += ",pe_agnostic" + tag + ",pe_bound" + tag + ",pe_helstrom" + tag;
    }
    csv += "\n";

    std::vector<std::string> rows(ns.size());
    parallel_for(static_cast<int>(ns.size()), [&](int i) {
        const int n = ns[static_cast<std::size_t>(i)];
        std::vector<std::string> cells{std::to_string(n)};
        for (double al : alphas) {
            const double a = al * al;
            const double pc = agnostic_ode_solve(AgnosticConfig{n, a, a}, opt.grid_steps).pc.back();
            cells.push_back(fmt_data(1.0 - pc));
            cells.push_back(fmt_data(mec_optimal_error(n, a, opt.paper_literal)));
            cells.push_back(fmt_data(helstrom_error_symmetric(a)));
        }
        rows[static_cast<std::size_t>(i)] = join_csv(cells);
    });
    for (const std::string& r : rows) csv += r;

    const OutputRecord rec = write_data_file(opt.out, "fig2.csv", csv);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opt.out, "fig2", argv_line,
                   {{"alpha", grid_json(alphas)},
                    {"n", grid_json(ns)},
                    {"grid_steps", opt.grid_steps},
                    {"paper_literal", opt.paper_literal},
                    {"format", opt.format}},
                   {{"agnostic_ode_grid_steps", opt.grid_steps}}, {rec}, dt);
    return 0;
}

int run_fig3(const Options& opt, const std::string& argv_line) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> alphas = resolve_alphas(opt, "0.25,0.625,1");
    const std::vector<int> ns = parse_copy_grid(opt.n.empty() ? "1:128:25" : opt.n);

    std::string csv;
    csv += "# fig3: Estimate&Discriminate classification error vs training copies, with the "
           "known-amplitude (Helstrom) reference\n";
    csv += "# params: alpha=" + describe_grid(alphas) + " n=" + describe_grid(ns) + "\n";
    csv += "# columns: n";
    for (double al : alphas) csv += ",pe_eande(alpha=" + fmt_short(al) + ")";
    for (double al : alphas) csv += ",pe_helstrom(alpha=" + fmt_short(al) + ")";
    csv += "\n";

    std::vector<std::string> rows(ns.size());
    parallel_for(static_cast<int>(ns.size()), [&](int i) {
        const int n = ns[static_cast<std::size_t>(i)];
        std::vector<std::string> cells{std::to_string(n)};
        for (double al : alphas)
            cells.push_back(fmt_data(1.0 - eande_success(Amplitude(al, 0.0), n)));
        for (double al : alphas) cells.push_back(fmt_data(helstrom_error_symmetric(al * al)));
        rows[static_cast<std::size_t>(i)] = join_csv(cells);
    });
    for (const std::string& r : rows) csv += r;

    const OutputRecord rec = write_data_file(opt.out, "fig3.csv", csv);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opt.out, "fig3", argv_line,
                   {{"alpha", grid_json(alphas)}, {"n", grid_json(ns)}, {"format", opt.format}},
                   {{"gauss_hermite_points", 64}}, {rec}, dt);
    return 0;
}

int run_fig4(const Options& opt, const std::string& argv_line) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> ns = parse_copy_grid(opt.n.empty() ? "15" : opt.n);
    if (ns.size() != 1 || ns[0] < 2)
        throw std::invalid_argument("fig4 takes a single --n >= 2");
    const int n_total = ns[0];
    const std::vector<double> alphas = resolve_alphas(opt, "0.05:1.5:30");
    std::vector<int> ms;
    if (opt.m.empty()) {
        for (int m = 1; m < n_total; ++m) ms.push_back(m);
    } else {
        ms = parse_int_grid(opt.m);
        for (int m : ms)
            if (m < 0 || m >= n_total)
                throw std::invalid_argument("--m values must satisfy 0 <= m < n");
    }
    const bool want_ph = opt.estimator.empty() || opt.estimator == "photon";
    const bool want_he = opt.estimator.empty() || opt.estimator == "heterodyne";

    std::string csv;
    csv += "# fig4: split-strategy success vs amplitude and estimation budget "
           "(m copies estimate, n-m train the receiver)\n";
    csv += "# params: n=" + std::to_string(n_total) + " alpha=" + describe_grid(alphas) +
           " m=" + describe_grid(ms) + "\n";
    csv += "# columns: alpha,m";
    if (want_ph) csv += ",pc_photon";
    if (want_he) csv += ",pc_heterodyne";
    csv += "\n";

    const int cells_n = static_cast<int>(alphas.size() * ms.size());
    std::vector<std::string> rows(static_cast<std::size_t>(cells_n));
    parallel_for(cells_n, [&](int idx) {
        const std::size_t ia = static_cast<std::size_t>(idx) / ms.size();
        const std::size_t im = static_cast<std::size_t>(idx) % ms.size();
        const Amplitude alpha(alphas[ia], 0.0);
        const SplitConfig split{n_total, ms[im]};
        std::vector<std::string> cells{fmt_short(alphas[ia]), std::to_string(ms[im])};
        if (want_ph)
            cells.push_back(fmt_data(split_performance(alpha, split, EstimatorKind::photon_counting)));
        if (want_he)
            cells.push_back(fmt_data(split_performance(alpha, split, EstimatorKind::heterodyne)));
        rows[static_cast<std::size_t>(idx)] = join_csv(cells);
    });
    for (const std::string& r : rows) csv += r;

    const OutputRecord rec = write_data_file(opt.out, "fig4.csv", csv);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opt.out, "fig4", argv_line,
                   {{"n", n_total},
                    {"alpha", grid_json(alphas)},
                    {"m", grid_json(ms)},
                    {"estimator", opt.estimator.empty() ? "both" : opt.estimator},
                    {"format", opt.format}},
                   {{"receiver_ode_steps", 600},
                    {"photon_tail_mass", 1e-12},
                    {"heterodyne_quad_abs_tol", 1e-8}},
                   {rec}, dt);
    return 0;
}

int run_fig5(const Options& opt, const std::string& argv_line) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> ns = parse_copy_grid(opt.n.empty() ? "4,8" : opt.n);
    for (int n : ns)
        if (n < 2) throw std::invalid_argument("fig5 needs n >= 2");
    const std::vector<double> alphas = resolve_alphas(opt, "0.05:1.5:60");
    std::vector<int> ms;
    for (int n : ns) ms.push_back(apriori_m(n));

    std::string csv;
    csv += "# fig5: classification error vs amplitude: split-estimation receivers "
           "(photon-counting / heterodyne estimate), miscalibrated Estimate&Discriminate, "
           "and the known-amplitude (Helstrom) limit\n";
    csv += "# params: n=" + describe_grid(ns) + " m=" + describe_grid(ms) +
           " alpha=" + describe_grid(alphas) + "\n";
    csv += "# columns: alpha";
    for (int n : ns) {
        const std::string tag = "(n=" + std::to_string(n) + ")";
        csv += ",pe_photon" + tag + ",pe_heterodyne" + tag + ",pe_misED" + tag;
    }
    csv += ",pe_helstrom\n";

    std::vector<std::string> rows(alphas.size());
    parallel_for(static_cast<int>(alphas.size()), [&](int i) {
        const double al = alphas[static_cast<std::size_t>(i)];
        const Amplitude alpha(al, 0.0);
        std::vector<std::string> cells{fmt_short(al)};
        for (std::size_t k = 0; k < ns.size(); ++k) {
            const SplitConfig split{ns[k], ms[k]};
            cells.push_back(fmt_data(
                1.0 - split_performance(alpha, split, EstimatorKind::photon_counting)));
            cells.push_back(
                fmt_data(1.0 - split_performance(alpha, split, EstimatorKind::heterodyne)));
            cells.push_back(fmt_data(1.0 - eande_success(alpha, ns[k])));
        }
        cells.push_back(fmt_data(helstrom_error_symmetric(al * al)));
        rows[static_cast<std::size_t>(i)] = join_csv(cells);
    });
    for (const std::string& r : rows) csv += r;

    const OutputRecord rec = write_data_file(opt.out, "fig5.csv", csv);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opt.out, "fig5", argv_line,
                   {{"n", grid_json(ns)},
                    {"m", grid_json(ms)},
                    {"alpha", grid_json(alphas)},
                    {"format", opt.format}},
                   {{"receiver_ode_steps", 600},
                    {"photon_tail_mass", 1e-12},
                    {"heterodyne_quad_abs_tol", 1e-8},
                    {"gauss_hermite_points", 64}},
                   {rec}, dt);
    return 0;
}

int run_fig6(const Options& opt, const std::string& argv_line) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<int> ns = parse_copy_grid(opt.n.empty() ? "4,8" : opt.n);
    for (int n : ns)
        if (n < 2) throw std::invalid_argument("fig6 needs n >= 2");
    if (opt.sigma <= 0.0) throw std::invalid_argument("--sigma must be > 0");
    const std::vector<double> xcs = parse_real_grid(opt.xc.empty() ? "0.1:1.2:45" : opt.xc);
    const bool want_ph = opt.estimator.empty() || opt.estimator == "photon";
    const bool want_he = opt.estimator.empty() || opt.estimator == "heterodyne";

    std::string csv;
    csv += "# fig6: expected classification error under a Rice amplitude prior vs prior "
           "center, split-estimation receivers and the phase-invariant optimal bound\n";
    csv += "# params: n=" + describe_grid(ns) + " sigma=" + fmt_short(opt.sigma) +
           " xc=" + describe_grid(xcs) +
           " paper_literal=" + (opt.paper_literal ? std::string("true") : std::string("false")) +
           "\n";
    csv += "# columns: xc";
    for (int n : ns) {
        const std::string tag = "(n=" + std::to_string(n) + ")";
        if (want_he) csv += ",pe_heterodyne" + tag;
        if (want_ph) csv += ",pe_photon" + tag;
        csv += ",pe_bound" + tag;
    }
    csv += "\n";

    std::vector<std::string> rows(xcs.size());
    parallel_for(static_cast<int>(xcs.size()), [&](int i) {
        const double xc = xcs[static_cast<std::size_t>(i)];
        const RicePrior prior{opt.sigma, xc};
        std::vector<std::string> cells{fmt_short(xc)};
        for (int n : ns) {
            if (want_he)
                cells.push_back(fmt_data(rice_averaged_error(n, prior, EstimatorKind::heterodyne)));
            if (want_ph)
                cells.push_back(
                    fmt_data(rice_averaged_error(n, prior, EstimatorKind::photon_counting)));
            cells.push_back(fmt_data(mec_optimal_error_with_prior(n, prior, opt.paper_literal)));
        }
        rows[static_cast<std::size_t>(i)] = join_csv(cells);
    });
    for (const std::string& r : rows) csv += r;

    const OutputRecord rec = write_data_file(opt.out, "fig6.csv", csv);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opt.out, "fig6", argv_line,
                   {{"n", grid_json(ns)},
                    {"sigma", opt.sigma},
                    {"xc", grid_json(xcs)},
                    {"estimator", opt.estimator.empty() ? "both" : opt.estimator},
                    {"paper_literal", opt.paper_literal},
                    {"format", opt.format}},
                   {{"receiver_ode_steps", 600},
                    {"photon_tail_mass", 1e-12},
                    {"heterodyne_quad_abs_tol", 1e-8},
                    {"prior_quad_abs_tol", 1e-7}},
                   {rec}, dt);
    return 0;
}

// ------------------------------------------------------------ verify command

struct CheckRow {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

int run_verify(const Options& opt, const std::string& argv_line) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<CheckRow> table;
    auto add = [&](const std::string& name, double measured, double tol) {
        table.push_back({name, measured, tol, measured <= tol});
    };

    // closed-form receiver equals the Helstrom optimum
    {
        double worst = 0.0;
        for (double al : {0.1, 0.25, 0.625, 1.0, 2.0}) {
            const double a = al * al;
            worst = std::max(worst, std::fabs(dolinar_success(0.5, 0.5, a, 1.0) -
                                              helstrom_success(0.5, 0.5, Amplitude(al, 0.0),
                                                               Amplitude(-al, 0.0))));
        }
        add("receiver closed form vs Helstrom optimum", worst, 1e-12);
    }
    // ODE solve vs closed form
    {
        double worst = 0.0;
        for (double al : {0.1, 0.25, 0.625, 1.0, 2.0}) {
            const double a = al * al;
            worst = std::max(worst, std::fabs(dolinar_ode_solve(0.5, a, 10000).pc.back() -
                                              dolinar_success(0.5, 0.5, a, 1.0)));
        }
        worst = std::max(worst, std::fabs(dolinar_ode_solve(0.7, 0.25, 10000).pc.back() -
                                          dolinar_success(0.7, 0.3, 0.25, 1.0)));
        add("success ODE vs closed form (1e4 steps)", worst, 1e-6);
    }
    // agnostic implicit-solution residuals
    {
        double worst = 0.0;
        for (int n : {1, 2, 4, 8, 16})
            for (double al : {0.1, 0.25, 0.5, 0.625, 1.0}) {
                const double a = al * al;
                worst = std::max(
                    worst, agnostic_ode_solve(AgnosticConfig{n, a, a}, opt.grid_steps).max_residual);
            }
        add("agnostic ODE implicit-relation residual", worst, 1e-8);
    }
    // classification bound: series vs trace-norm reconstruction
    {
        double worst = 0.0;
        for (int n : {1, 2, 5, 10})
            for (double al : {0.25, 0.625, 1.0}) {
                const double a = al * al;
                const std::vector<double> t =
                    sector_trace_norm_oracle(n, Amplitude(al, 0.0), 60);
                double sum = 0.0;
                for (double v : t) sum += v;
                worst = std::max(worst,
                                 std::fabs(0.5 * (1.0 - 0.5 * sum) - mec_optimal_error(n, a)));
            }
        add("classification bound series vs trace norm", worst, 1e-8);
    }
    // asymptotic remainder scaling
    {
        double worst = 0.0;
        for (int n : {100, 200, 500, 1000}) {
            const double d =
                std::fabs(mec_optimal_error(n, 0.25) - mec_optimal_error_asymptotic(n, 0.25));
            worst = std::max(worst, d * n * n);
        }
        add("large-n expansion: n^2 x remainder", worst, 1.0);
    }
    // miscalibrated receiver closed form vs propagation
    {
        double worst = 0.0;
        const Amplitude pairs[][2] = {
            {Amplitude(0.3, 0.0), Amplitude(0.5, 0.0)},
            {Amplitude(0.5, 0.2), Amplitude(0.5, 0.0)},
            {Amplitude(1.2, 0.4), Amplitude(0.25, 0.0)},
        };
        for (const auto& pr : pairs)
            worst = std::max(worst, std::fabs(miscalibrated_success(pr[0], pr[1]) -
                                              miscalibrated_success_propagated(pr[0], pr[1])));
        add("miscalibrated closed form vs propagation", worst, 1e-10);
    }
    // slice-chain receiver converges to the optimum
    {
        double worst = 0.0;
        for (double al : {0.25, 0.625}) {
            const double a = al * al;
            worst = std::max(worst, std::fabs(discretized_dolinar(10000, Amplitude(al, 0.0), 0.5) -
                                              dolinar_success(0.5, 0.5, a, 1.0)));
        }
        add("slice-chain receiver vs optimum (K=1e4)", worst, 1e-3);
    }
    // Monte Carlo vs deterministic solves (3 sigma)
    {
        const double a = 0.25;
        const int n = 4;
        ControlTrajectory ctl = optimal_trajectory(a, n, 4000);
        const RateFn rates = [a, n, &ctl](double t) {
            return agnostic_rates(ctl.theta_at(t), a, n);
        };
        const McConfig cfg{opt.trials, opt.slices, opt.seed};
        const McResult mc = simulate_receiver(rates, cfg, 0.5);
        const double ode = agnostic_ode_solve(AgnosticConfig{n, a, a}, 4000).pc.back();
        add("Monte Carlo vs agnostic ODE (3 sigma)", std::fabs(mc.success_rate - ode),
            3.0 * mc.std_error);
    }
    {
        const double a = 0.390625;
        const RateFn rates = [a](double t) { return dolinar_optimal_rates(0.5, a, t); };
        const double t_start = 1e-3;
        const McConfig cfg{opt.trials, opt.slices, opt.seed};
        const McResult mc =
            simulate_receiver(rates, cfg, 0.5, t_start, dolinar_success(0.5, 0.5, a, t_start));
        add("Monte Carlo vs calibrated closed form (3 sigma)",
            std::fabs(mc.success_rate - dolinar_success(0.5, 0.5, a, 1.0)), 3.0 * mc.std_error);
    }

    bool all_pass = true;
    std::printf("%-6s %-46s %12s %12s\n", "status", "check", "measured", "tolerance");
    for (const CheckRow& row : table) {
        all_pass = all_pass && row.pass;
        std::printf("%-6s %-46s %12.3e %12.3e\n", row.pass ? "ok" : "FAIL", row.name.c_str(),
                    row.measured, row.tolerance);
    }
    std::printf("verify: %s (%zu checks)\n", all_pass ? "all checks passed" : "FAILURES PRESENT",
                table.size());

    json checks = json::array();
    for (const CheckRow& row : table)
        checks.push_back({{"name", row.name},
                          {"measured", row.measured},
                          {"tolerance", row.tolerance},
                          {"pass", row.pass}});
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(opt.out, "verify", argv_line,
                   {{"trials", opt.trials},
                    {"slices", opt.slices},
                    {"seed", opt.seed},
                    {"grid_steps", opt.grid_steps}},
                   json::object(), {}, dt, {{"checks", checks}, {"all_pass", all_pass}});
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    std::string argv_line;
    for (int i = 0; i < argc; ++i) {
        if (i) argv_line += ' ';
        argv_line += argv[i];
    }

    CLI::App app{"coherent-state classification receivers: bounds, simulations, sweeps"};
    app.require_subcommand(1);
    Options opt;

    const std::string grid_help = " ('a,b,c' list or start:stop:points range)";
    auto add_common = [&](CLI::App* cmd, bool with_alpha) {
        if (with_alpha) {
            CLI::Option* alpha =
                cmd->add_option("--alpha", opt.alpha, "|alpha| grid" + grid_help);
            cmd->add_option("--alpha-sq", opt.alpha_sq, "|alpha|^2 grid" + grid_help)
                ->excludes(alpha);
        }
        cmd->add_option("--out", opt.out, "output directory (default '.')");
        cmd->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"csv"}));
    };

    CLI::App* fig2 = app.add_subcommand(
        "fig2", "agnostic receiver error vs training copies, with bound and Helstrom reference");
    add_common(fig2, true);
    fig2->add_option("--n", opt.n, "copy-count grid, colon ranges log-spaced" + grid_help);
    fig2->add_option("--grid-steps", opt.grid_steps, "ODE grid steps (default 2000)");
    fig2->add_flag("--paper-literal", opt.paper_literal,
                   "use the historical inner-factor variant of the bound");

    CLI::App* fig3 = app.add_subcommand(
        "fig3", "Estimate&Discriminate error vs training copies, with Helstrom reference");
    add_common(fig3, true);
    fig3->add_option("--n", opt.n, "copy-count grid, colon ranges log-spaced" + grid_help);

    CLI::App* fig4 = app.add_subcommand(
        "fig4", "split-strategy success over the (alpha, m) grid at fixed n");
    add_common(fig4, true);
    fig4->add_option("--n", opt.n, "total copies (single value, default 15)");
    fig4->add_option("--m", opt.m, "estimation-copy grid (default 1..n-1)" + grid_help);
    fig4->add_option("--estimator", opt.estimator, "restrict to one estimator")
        ->check(CLI::IsMember({"photon", "heterodyne"}));

    CLI::App* fig5 = app.add_subcommand(
        "fig5",
        "error vs amplitude: split receivers, miscalibrated E&D, Helstrom (default n=4,8)");
    add_common(fig5, true);
    fig5->add_option("--n", opt.n, "copy-count list (default 4,8)");

    CLI::App* fig6 = app.add_subcommand(
        "fig6", "expected error under a Rice amplitude prior vs prior center (default n=4,8)");
    add_common(fig6, false);
    fig6->add_option("--n", opt.n, "copy-count list (default 4,8)");
    fig6->add_option("--sigma", opt.sigma, "Rice prior width (default 0.1)");
    fig6->add_option("--xc", opt.xc, "prior-center grid" + grid_help);
    fig6->add_option("--estimator", opt.estimator, "restrict to one estimator")
        ->check(CLI::IsMember({"photon", "heterodyne"}));
    fig6->add_flag("--paper-literal", opt.paper_literal,
                   "use the historical inner-factor variant of the bound");

    CLI::App* verify = app.add_subcommand(
        "verify", "run the cross-validation oracle suite; nonzero exit on any failure");
    add_common(verify, false);
    verify->add_option("--trials", opt.trials, "Monte Carlo trials (default 1e5)");
    verify->add_option("--slices", opt.slices, "Monte Carlo time slices (default 2000)");
    verify->add_option("--seed", opt.seed, "Monte Carlo seed (default 1)");
    verify->add_option("--grid-steps", opt.grid_steps, "ODE grid steps (default 2000)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fig2->parsed()) return run_fig2(opt, argv_line);
        if (fig3->parsed()) return run_fig3(opt, argv_line);
        if (fig4->parsed()) return run_fig4(opt, argv_line);
        if (fig5->parsed()) return run_fig5(opt, argv_line);
        if (fig6->parsed()) return run_fig6(opt, argv_line);
        if (verify->parsed()) return run_verify(opt, argv_line);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "invalid arguments: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
