#include "page_entropy/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "page_entropy/dimensions.hpp"
#include "page_entropy/entropy.hpp"
#include "page_entropy/haar_sampler.hpp"
#include "page_entropy/local_model.hpp"
#include "page_entropy/parallel.hpp"
#include "page_entropy/saddle.hpp"
#include "page_entropy/spectra.hpp"

namespace page_entropy::cli {

namespace {

using nlohmann::json;

const std::set<std::string> kCommands{"beta", "page", "scaling", "variance", "mc", "ed", "dims"};

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

json jnum(double x) {
    if (std::isfinite(x)) return x;
    return num(x);
}

class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    void write_csv(std::ostream& os) const {
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
            os << '\n';
        };
        line(columns_);
        for (const auto& r : rows_) line(r);
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LocalModel load_model(const std::string& spec) {
    const auto first = spec.find_first_not_of(" \t\n");
    if (first != std::string::npos && spec[first] == '{') return model_from_json(spec);
    if (spec.ends_with(".json") || std::filesystem::is_regular_file(spec)) return model_from_json(read_file(spec));
    return parse_model(spec);
}

template <class T>
std::vector<T> as_list(const json& j, const std::string& key) {
    if (j.is_array()) return j.get<std::vector<T>>();
    if (j.is_number()) return {j.get<T>()};
    throw std::invalid_argument("config field '" + key + "' must be a number or a list of numbers");
}

void apply_json(RunConfig& c, const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");
    for (const auto& [key, v] : j.items()) {
        try {
            if (key == "command") c.command = v.get<std::string>();
            else if (key == "model") c.model = v.is_object() ? v.dump() : v.get<std::string>();
            else if (key == "V") c.V = as_list<std::size_t>(v, key);
            else if (key == "N") c.N = v.get<std::size_t>();
            else if (key == "M") c.M = v.get<long>();
            else if (key == "n") c.n = v.get<double>();
            else if (key == "f") c.f = v.get<double>();
            else if (key == "VA") c.VA = as_list<std::size_t>(v, key);
            else if (key == "grid") c.grid = v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>());
            else if (key == "samples") c.samples = v.get<std::size_t>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "window") c.window = v.get<std::size_t>();
            else if (key == "lambda") c.lambda = v.get<double>();
            else if (key == "Delta") c.Delta = v.get<double>();
            else if (key == "U") c.U = v.get<double>();
            else if (key == "nmax") c.nmax = v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>());
            else if (key == "methods") c.methods = v.get<std::vector<std::string>>();
            else if (key == "out") c.out = v.get<std::string>();
            else if (key == "format") c.format = v.get<std::string>();
            else if (key == "threads") c.threads = v.get<unsigned>();
            else throw std::invalid_argument("unknown config field '" + key + "'");
        } catch (const json::exception& e) {
            throw std::invalid_argument("config field '" + key + "': " + e.what());
        }
    }
}

void validate(const RunConfig& c) {
    if (!kCommands.count(c.command)) throw std::invalid_argument("unknown command '" + c.command + "'");
    if (c.format != "csv" && c.format != "json") throw std::invalid_argument("field 'format' must be csv or json");
    if (c.threads == 0) throw std::invalid_argument("field 'threads' must be >= 1");
    auto need_single_V = [&] {
        if (c.V.size() != 1) throw std::invalid_argument("field 'V': command '" + c.command + "' needs exactly one V");
        if (c.V[0] == 0) throw std::invalid_argument("field 'V' must be >= 1");
    };
    auto need_filling = [&] {
        if (!c.N && !c.n && !(c.command == "ed" && c.M))
            throw std::invalid_argument("command '" + c.command + "' needs 'N' or 'n'");
    };
    if (c.command == "page" || c.command == "variance" || c.command == "mc") {
        need_single_V();
        need_filling();
    } else if (c.command == "scaling") {
        if (c.V.empty()) throw std::invalid_argument("field 'V': scaling needs a list of volumes");
        if (!c.f) throw std::invalid_argument("field 'f': scaling needs the subsystem fraction");
        if (!c.n) throw std::invalid_argument("field 'n': scaling needs the density");
    } else if (c.command == "ed") {
        need_single_V();
        need_filling();
    } else if (c.command == "dims") {
        need_single_V();
    }
    if (c.command == "mc" && c.samples < 2) throw std::invalid_argument("field 'samples' must be >= 2");
    for (const auto& m : c.methods)
        if (m != "exact" && m != "asymptotic" && m != "resolved" && m != "variance")
            throw std::invalid_argument("field 'methods': unknown method '" + m + "'");
}

std::size_t particle_count(const RunConfig& c, std::size_t V) {
    if (c.N) return *c.N;
    if (*c.n < 0) throw std::invalid_argument("field 'n' must be >= 0");
    return static_cast<std::size_t>(std::llround(*c.n * static_cast<double>(V)));
}

std::vector<std::size_t> subsystem_list(const RunConfig& c, std::size_t V) {
    if (!c.VA.empty()) {
        for (const auto v : c.VA)
            if (v > V) throw std::invalid_argument("field 'VA': " + std::to_string(v) + " exceeds V");
        return c.VA;
    }
    std::vector<std::size_t> all(V + 1);
    for (std::size_t i = 0; i <= V; ++i) all[i] = i;
    return all;
}

// ---- beta -------------------------------------------------------------------

std::vector<double> density_grid(const RunConfig& c, const LocalModel& model) {
    const double upper = model.is_finite() ? static_cast<double>(*model.n_max()) : 5.0;
    std::vector<double> grid;
    const std::string g = c.grid.value_or("101");
    if (g.find(':') == std::string::npos) {
        const long count = std::stol(g);
        if (count < 1) throw std::invalid_argument("field 'grid': point count must be >= 1");
        for (long k = 1; k <= count; ++k) grid.push_back(upper * static_cast<double>(k) / static_cast<double>(count + 1));
    } else {
        std::vector<double> parts;
        std::stringstream ss(g);
        for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(std::stod(tok));
        if (parts.size() != 3 || parts[2] < 1)
            throw std::invalid_argument("field 'grid' must be COUNT or LO:HI:COUNT");
        const auto count = static_cast<long>(parts[2]);
        for (long k = 0; k < count; ++k)
            grid.push_back(count == 1 ? parts[0] : parts[0] + (parts[1] - parts[0]) * static_cast<double>(k) / static_cast<double>(count - 1));
    }
    for (const double n : grid)
        if (!(n > 0.0) || (model.is_finite() && !(n < upper)))
            throw std::invalid_argument("field 'grid': density " + num(n) + " outside (0, n_max)");
    return grid;
}

void cmd_beta(const RunConfig& c, std::ostream& out) {
    const LocalModel model = load_model(c.model);
    auto grid = density_grid(c, model);
    struct Row {
        SaddleSolution s;
        std::string mark;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(grid.size(), c.threads, [&](std::size_t i) { rows[i] = {beta_family(model, grid[i]), ""}; });
    if (const auto ns = n_star(model)) {
        auto it = std::find_if(rows.begin(), rows.end(), [&](const Row& r) { return std::abs(r.s.n - *ns) < 1e-12; });
        if (it != rows.end()) it->mark = "n_star";
        else {
            Row r{beta_family(model, *ns), "n_star"};
            rows.insert(std::lower_bound(rows.begin(), rows.end(), r, [](const Row& a, const Row& b) { return a.s.n < b.s.n; }), r);
        }
    }
    if (model.is_finite()) {
        const double nm = static_cast<double>(*model.n_max());
        SaddleSolution s;
        s.n = nm;
        s.z0 = std::numeric_limits<double>::infinity();
        s.beta = ln_big(model.coefficient(*model.n_max()));
        s.beta1 = -std::numeric_limits<double>::infinity();
        s.beta2 = -std::numeric_limits<double>::infinity();
        s.alpha = std::numeric_limits<double>::infinity();
        s.at_boundary = true;
        rows.push_back({s, "n_max"});
    }
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"n", jnum(r.s.n)}, {"z0", jnum(r.s.z0)}, {"beta", jnum(r.s.beta)}, {"beta1", jnum(r.s.beta1)},
                           {"beta2", jnum(r.s.beta2)}, {"alpha", jnum(r.s.alpha)}, {"mark", r.mark}});
        out << json{{"model", model.label()}, {"rows", arr}}.dump(2) << '\n';
        return;
    }
    Table t({"n", "z0", "beta", "beta1", "beta2", "alpha", "mark"});
    for (const auto& r : rows)
        t.add({num(r.s.n), num(r.s.z0), num(r.s.beta), num(r.s.beta1), num(r.s.beta2), num(r.s.alpha), r.mark});
    t.write_csv(out);
}

// ---- page / variance -----------------------------------------------------------

void cmd_page(const RunConfig& c, std::ostream& out) {
    const LocalModel model = load_model(c.model);
    const std::size_t V = c.V[0];
    const std::size_t N = particle_count(c, V);
    const auto rows = page_curve(model, V, N, c.threads);
    std::vector<std::string> methods = c.methods;
    if (methods.empty()) methods = {"exact", "asymptotic", "resolved", "variance"};
    auto has = [&](const std::string& m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };

    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) {
            json row{{"V_A", r.V_A}, {"f", r.f}};
            if (has("exact")) row["exact"] = jnum(r.exact_mean);
            if (has("asymptotic")) {
                row["asymptotic"] = jnum(r.asym.value);
                row["terms"] = {{"a", r.asym.a}, {"b", r.asym.b}, {"c", r.asym.c},
                                {"delta_f_half", r.asym.f_half}, {"delta_n_star", r.asym.n_star}};
            }
            if (has("resolved")) row["resolved"] = jnum(r.resolved_mean);
            if (has("variance")) {
                row["exact_var"] = jnum(r.exact_variance.value);
                row["exact_var_log"] = jnum(r.exact_variance.log_value);
                row["asym_var"] = jnum(r.asym_variance.value);
                row["asym_var_log"] = jnum(std::log(std::abs(r.asym_variance.prefactor)) + r.asym_variance.log_exponential);
            }
            arr.push_back(row);
        }
        out << json{{"model", model.label()}, {"V", V}, {"N", N}, {"rows", arr}}.dump(2) << '\n';
        return;
    }
    std::vector<std::string> cols{"V_A", "f"};
    if (has("exact")) cols.push_back("exact");
    if (has("asymptotic")) cols.push_back("asymptotic");
    if (has("resolved")) cols.push_back("resolved");
    if (has("variance")) cols.insert(cols.end(), {"exact_var", "asym_var"});
    Table t(cols);
    for (const auto& r : rows) {
        std::vector<std::string> cells{std::to_string(r.V_A), num(r.f)};
        if (has("exact")) cells.push_back(num(r.exact_mean));
        if (has("asymptotic")) cells.push_back(num(r.asym.value));
        if (has("resolved")) cells.push_back(num(r.resolved_mean));
        if (has("variance")) cells.insert(cells.end(), {num(r.exact_variance.value), num(r.asym_variance.value)});
        t.add(std::move(cells));
    }
    t.write_csv(out);
}

void cmd_variance(const RunConfig& c, std::ostream& out) {
    const LocalModel model = load_model(c.model);
    const std::size_t V = c.V[0];
    const std::size_t N = particle_count(c, V);
    const auto list = subsystem_list(c, V);
    const double n = static_cast<double>(N) / static_cast<double>(V);
    struct Row {
        std::size_t V_A;
        VarianceValue exact;
        AsymptoticVariance asym;
    };
    std::vector<Row> rows(list.size());
    parallel_for(list.size(), c.threads, [&](std::size_t i) {
        const BipartitionSpec spec{V, N, list[i]};
        rows[i].V_A = list[i];
        rows[i].exact = exact_variance(model, spec);
        const double f = spec.f();
        const bool interior = n > 1e-9 && (!model.is_finite() || static_cast<double>(*model.n_max()) - n > 1e-9);
        if (f > 0.0 && f < 1.0 && interior) rows[i].asym = asymptotic_variance(model, V, f, n);
    });
    auto asym_log = [](const AsymptoticVariance& a) {
        return a.prefactor == 0.0 ? -std::numeric_limits<double>::infinity()
                                  : std::log(std::abs(a.prefactor)) + a.log_exponential;
    };
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"V_A", r.V_A}, {"exact_var", jnum(r.exact.value)}, {"exact_var_log", jnum(r.exact.log_value)},
                           {"bracket", jnum(r.exact.bracket)}, {"asym_var", jnum(r.asym.value)},
                           {"asym_var_log", jnum(asym_log(r.asym))}});
        out << json{{"model", model.label()}, {"V", V}, {"N", N}, {"rows", arr}}.dump(2) << '\n';
        return;
    }
    Table t({"V_A", "f", "exact_var", "exact_var_log", "bracket", "asym_var", "asym_var_log"});
    for (const auto& r : rows)
        t.add({std::to_string(r.V_A), num(static_cast<double>(r.V_A) / static_cast<double>(V)), num(r.exact.value),
               num(r.exact.log_value), num(r.exact.bracket), num(r.asym.value), num(asym_log(r.asym))});
    t.write_csv(out);
}

// ---- scaling ----------------------------------------------------------------

void cmd_scaling(const RunConfig& c, std::ostream& out) {
    const LocalModel model = load_model(c.model);
    const double f = *c.f, n = *c.n;
    if (!(f > 0.0 && f < 1.0)) throw std::invalid_argument("field 'f' must lie in (0, 1)");
    struct Row {
        std::size_t V, N, V_A;
        double exact, asym, resolved, sqrt_coeff;
    };
    std::vector<Row> rows(c.V.size());
    parallel_for(c.V.size(), c.threads, [&](std::size_t i) {
        const std::size_t V = c.V[i];
        const auto N = static_cast<std::size_t>(std::llround(n * static_cast<double>(V)));
        const auto V_A = static_cast<std::size_t>(std::llround(f * static_cast<double>(V)));
        const BipartitionSpec spec{V, N, V_A};
        Row& r = rows[i];
        r = {V, N, V_A, exact_average(model, spec), 0, 0, 0};
        const auto terms = asymptotic_average(model, spec);
        r.asym = terms.value;
        r.resolved = V >= 4 ? resolved_average(model, V, spec.f(), spec.n()) : std::numeric_limits<double>::quiet_NaN();
        r.sqrt_coeff = (r.exact - terms.a * static_cast<double>(V) - terms.c) / std::sqrt(static_cast<double>(V));
    });
    if (c.format == "json") {
        json arr = json::array();
        for (const auto& r : rows)
            arr.push_back({{"V", r.V}, {"inv_V", 1.0 / static_cast<double>(r.V)}, {"N", r.N}, {"V_A", r.V_A},
                           {"exact", jnum(r.exact)}, {"asymptotic", jnum(r.asym)}, {"resolved", jnum(r.resolved)},
                           {"sqrt_coefficient", jnum(r.sqrt_coeff)}});
        out << json{{"model", model.label()}, {"f", f}, {"n", n}, {"rows", arr}}.dump(2) << '\n';
        return;
    }
    Table t({"V", "inv_V", "N", "V_A", "exact", "asymptotic", "resolved", "sqrt_coefficient"});
    for (const auto& r : rows)
        t.add({std::to_string(r.V), num(1.0 / static_cast<double>(r.V)), std::to_string(r.N), std::to_string(r.V_A),
               num(r.exact), num(r.asym), num(r.resolved), num(r.sqrt_coeff)});
    t.write_csv(out);
}

// ---- mc ---------------------------------------------------------------------

void cmd_mc(const RunConfig& c, std::ostream& out) {
    const LocalModel model = load_model(c.model);
    const std::size_t V = c.V[0];
    const std::size_t N = particle_count(c, V);
    std::vector<std::size_t> list = c.VA.empty() ? std::vector<std::size_t>{V / 2} : subsystem_list(c, V);
    json arr = json::array();
    Table t({"V_A", "samples", "seed", "mean", "sem", "variance", "variance_sem", "exact_mean", "exact_var"});
    for (const auto V_A : list) {
        const BipartitionSpec spec{V, N, V_A};
        const SectorBasis basis = build_sector_basis(model, spec);
        const McSummary s = mc_average(basis, c.samples, c.seed, c.threads);
        const ExactStatistics ex = exact_statistics(model, spec);
        arr.push_back({{"model", model.label()}, {"V", V}, {"N", N}, {"V_A", V_A}, {"samples", s.samples},
                       {"seed", s.seed}, {"mean", s.mean}, {"sem", s.sem}, {"variance", s.variance},
                       {"variance_sem", s.variance_sem}, {"exact_mean", ex.mean}, {"exact_var", ex.variance.value}});
        t.add({std::to_string(V_A), std::to_string(s.samples), std::to_string(s.seed), num(s.mean), num(s.sem),
               num(s.variance), num(s.variance_sem), num(ex.mean), num(ex.variance.value)});
    }
    if (c.format == "json") out << (arr.size() == 1 ? arr[0] : arr).dump(2) << '\n';
    else t.write_csv(out);
}

// ---- ed ---------------------------------------------------------------------

void cmd_ed(const RunConfig& c, std::ostream& out) {
    const std::size_t V = c.V[0];
    SectorHamiltonian H;
    std::string params;
    if (c.model == "spin1_xxz" || c.model == "spin1") {
        long M = 0;
        if (c.M) M = *c.M;
        else M = static_cast<long>(particle_count(c, V)) - static_cast<long>(V);
        H = build_spin1_xxz(V, M, c.lambda, c.Delta);
        params = "lambda=" + num(c.lambda) + ";Delta=" + num(c.Delta) + ";M=" + std::to_string(M);
    } else if (c.model == "bose_hubbard") {
        std::optional<std::size_t> cap;
        if (c.nmax && *c.nmax != "inf") cap = std::stoul(*c.nmax);
        H = build_bose_hubbard(V, particle_count(c, V), c.U, cap);
        params = "U=" + num(c.U) + ";nmax=" + c.nmax.value_or("inf");
    } else {
        throw std::invalid_argument("field 'model': ed supports spin1_xxz or bose_hubbard");
    }
    const std::size_t window = c.window.value_or(std::min<std::size_t>(100, H.dimension()));
    std::vector<std::size_t> list = subsystem_list(c, V);
    const auto report = mid_spectrum_entropies(H, window, list, c.threads);
    const LocalModel model = H.local_model();
    std::vector<double> exact(report.rows.size());
    for (std::size_t i = 0; i < report.rows.size(); ++i)
        exact[i] = exact_average(model, BipartitionSpec{V, H.N, report.rows[i].V_A});
    if (c.format == "json") {
        json arr = json::array();
        for (std::size_t i = 0; i < report.rows.size(); ++i) {
            const auto& r = report.rows[i];
            arr.push_back({{"V_A", r.V_A}, {"f", r.f}, {"mean_S", r.mean}, {"std_S", r.std}, {"exact", exact[i]}});
        }
        out << json{{"hamiltonian", c.model}, {"V", V}, {"N", H.N}, {"dimension", H.dimension()},
                    {"window", report.window}, {"first", report.first}, {"params", params}, {"rows", arr}}
                   .dump(2)
            << '\n';
        return;
    }
    Table t({"V_A", "f", "mean_S", "std_S", "window", "params", "exact"});
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& r = report.rows[i];
        t.add({std::to_string(r.V_A), num(r.f), num(r.mean), num(r.std), std::to_string(report.window), params,
               num(exact[i])});
    }
    t.write_csv(out);
}

// ---- dims -------------------------------------------------------------------

void cmd_dims(const RunConfig& c, std::ostream& out) {
    const LocalModel model = load_model(c.model);
    const std::size_t V = c.V[0];
    std::size_t cap;
    if (c.N) cap = *c.N;
    else if (model.is_finite()) cap = V * *model.n_max();
    else throw std::invalid_argument("field 'N': dims needs a cap for infinite local Hilbert spaces");
    const auto table = dim_table(model, V, cap);
    if (c.format == "json") {
        std::vector<std::string> entries;
        for (const auto& d : table.entries) entries.push_back(d.to_string());
        out << json{{"model", model.label()}, {"V", V}, {"d_N", entries}}.dump(2) << '\n';
        return;
    }
    out << table.to_csv();
}

}  // namespace

RunConfig parse_arguments(const std::vector<std::string>& args) {
    CLI::App app{"Typical entanglement entropy with particle-number conservation", "page-entropy"};
    app.fallthrough();
    app.require_subcommand(0, 1);
    std::string config_path;
    std::string model;
    std::vector<std::size_t> V, VA;
    std::size_t N = 0, samples = 0, window = 0;
    long M = 0;
    double n = 0, f = 0, lambda = 0, Delta = 0, U = 0;
    std::uint64_t seed = 0;
    std::string grid, nmax, out, format, methods;
    unsigned threads = 0;

    app.add_option("--config", config_path, "JSON file with default parameters (flags win)");
    auto* o_model = app.add_option("--model", model, "catalog expression, model JSON path, or Hamiltonian for ed");
    auto* o_V = app.add_option("--V", V, "volume, or comma-separated volumes for scaling")->delimiter(',');
    auto* o_N = app.add_option("--N", N, "particle number");
    auto* o_M = app.add_option("--M", M, "magnetization (spin-1 ed)");
    auto* o_n = app.add_option("--n", n, "density N/V");
    auto* o_f = app.add_option("--f", f, "subsystem fraction (scaling)");
    auto* o_VA = app.add_option("--VA", VA, "subsystem sizes, comma-separated")->delimiter(',');
    auto* o_grid = app.add_option("--grid", grid, "density grid: COUNT or LO:HI:COUNT");
    auto* o_samples = app.add_option("--samples", samples, "Monte Carlo samples");
    auto* o_seed = app.add_option("--seed", seed, "Monte Carlo seed");
    auto* o_window = app.add_option("--window", window, "mid-spectrum window size");
    auto* o_lambda = app.add_option("--lambda", lambda, "integrability-breaking weight (spin-1)");
    auto* o_Delta = app.add_option("--Delta", Delta, "anisotropy (spin-1)");
    auto* o_U = app.add_option("--U", U, "on-site interaction (Bose-Hubbard)");
    auto* o_nmax = app.add_option("--nmax", nmax, "occupancy cap (Bose-Hubbard), integer or inf");
    auto* o_methods = app.add_option("--methods", methods, "page columns: exact,asymptotic,resolved,variance");
    auto* o_out = app.add_option("--out", out, "output file (default stdout)");
    auto* o_format = app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    auto* o_threads = app.add_option("--threads", threads, "worker threads (default PAGE_ENTROPY_THREADS or 1)");

    for (const auto& name : kCommands) app.add_subcommand(name, "run the " + name + " command");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw;
    } catch (const CLI::ParseError& e) {
        throw std::invalid_argument(e.what());
    }

    RunConfig c;
    c.threads = default_threads();
    if (!config_path.empty()) {
        try {
            apply_json(c, json::parse(read_file(config_path)));
        } catch (const json::parse_error& e) {
            throw std::invalid_argument("config file '" + config_path + "': " + e.what());
        }
    }
    if (const auto subs = app.get_subcommands(); !subs.empty()) c.command = subs.front()->get_name();
    if (o_model->count()) c.model = model;
    if (o_V->count()) c.V = V;
    if (o_N->count()) c.N = N;
    if (o_M->count()) c.M = M;
    if (o_n->count()) c.n = n;
    if (o_f->count()) c.f = f;
    if (o_VA->count()) c.VA = VA;
    if (o_grid->count()) c.grid = grid;
    if (o_samples->count()) c.samples = samples;
    if (o_seed->count()) c.seed = seed;
    if (o_window->count()) c.window = window;
    if (o_lambda->count()) c.lambda = lambda;
    if (o_Delta->count()) c.Delta = Delta;
    if (o_U->count()) c.U = U;
    if (o_nmax->count()) c.nmax = nmax;
    if (o_methods->count()) {
        c.methods.clear();
        std::stringstream ss(methods);
        for (std::string tok; std::getline(ss, tok, ',');)
            if (!tok.empty()) c.methods.push_back(tok);
    }
    if (o_out->count()) c.out = out;
    if (o_format->count()) c.format = format;
    if (o_threads->count()) c.threads = threads;
    if (c.command.empty()) throw std::invalid_argument("no command given (beta, page, scaling, variance, mc, ed, dims)");
    if (c.command == "ed" && !o_model->count() && c.model == "fermions") c.model = "spin1_xxz";
    validate(c);
    return c;
}

void execute(const RunConfig& c, std::ostream& out) {
    validate(c);
    std::ofstream file;
    std::ostream* sink = &out;
    if (c.out) {
        file.open(*c.out);
        if (!file) throw std::invalid_argument("field 'out': cannot write '" + *c.out + "'");
        sink = &file;
    }
    if (c.command == "beta") cmd_beta(c, *sink);
    else if (c.command == "page") cmd_page(c, *sink);
    else if (c.command == "scaling") cmd_scaling(c, *sink);
    else if (c.command == "variance") cmd_variance(c, *sink);
    else if (c.command == "mc") cmd_mc(c, *sink);
    else if (c.command == "ed") cmd_ed(c, *sink);
    else if (c.command == "dims") cmd_dims(c, *sink);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        execute(parse_arguments(args), out);
        return kOk;
    } catch (const CLI::CallForHelp&) {
        err << "usage: page-entropy {beta|page|scaling|variance|mc|ed|dims} [--model M] [--V V] [--N N | --n n]\n"
               "       [--VA list] [--f f] [--grid G] [--samples S] [--seed S] [--window W] [--lambda L]\n"
               "       [--Delta D] [--U U] [--nmax K] [--methods list] [--config file.json]\n"
               "       [--out path] [--format csv|json] [--threads T]\n";
        return kOk;
    } catch (const InfeasibleError& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::overflow_error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::out_of_range& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
}

}  // namespace page_entropy::cli
