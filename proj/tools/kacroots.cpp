// Command-line frontend: subcommands map one-to-one onto the experiments and
// exact oracles; every run writes its data file(s) plus a manifest that
// records parameters, seed and output digests.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <map>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kacroots/atom.hpp"
#include "kacroots/double_root.hpp"
#include "kacroots/ek.hpp"
#include "kacroots/errors.hpp"
#include "kacroots/joint_table.hpp"
#include "kacroots/mc.hpp"
#include "kacroots/report.hpp"
#include "kacroots/smallball.hpp"

using namespace kac;
namespace fs = std::filesystem;

namespace {

mpq_class parse_rational(const std::string& text) {
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        mpq_class q(text.substr(0, slash) + "/" + text.substr(slash + 1));
        q.canonicalize();
        return q;
    }
    auto dot = text.find('.');
    if (dot != std::string::npos) {
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        std::size_t frac = text.size() - dot - 1;
        mpz_class num(digits);
        mpz_class den = 1;
        for (std::size_t i = 0; i < frac; ++i) den *= 10;
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    }
    return mpq_class(mpz_class(text));
}

std::vector<int> parse_degrees(const std::string& text) {
    std::vector<int> out;
    auto dots = text.find("..");
    if (text.rfind("2^", 0) == 0 && dots != std::string::npos) {
        int a = std::stoi(text.substr(2, dots - 2));
        std::string rest = text.substr(dots + 2);
        if (rest.rfind("2^", 0) == 0) rest = rest.substr(2);
        int b = std::stoi(rest);
        for (int e = a; e <= b; ++e) out.push_back(1 << e);
        return out;
    }
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto comma = text.find(',', pos);
        std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        if (!tok.empty()) out.push_back(static_cast<int>(std::llround(std::strtod(tok.c_str(), nullptr))));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (out.empty()) throw CLI::ValidationError("--degrees", "no degrees parsed from '" + text + "'");
    return out;
}

std::optional<DInterval> parse_interval(const std::string& text) {
    if (text.empty()) return std::nullopt;
    auto comma = text.find(',');
    if (comma == std::string::npos)
        throw CLI::ValidationError("--interval", "expected 'lo,hi'");
    return DInterval{std::strtod(text.substr(0, comma).c_str(), nullptr),
                     std::strtod(text.substr(comma + 1).c_str(), nullptr)};
}

int default_threads() {
    if (const char* env = std::getenv("KACROOTS_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0; // hardware concurrency
}

nlohmann::ordered_json rational_json(const mpq_class& q) {
    nlohmann::ordered_json j;
    j["num"] = q.get_num().get_str();
    j["den"] = q.get_den().get_str();
    j["approx"] = q.get_d();
    return j;
}

// plain key=value config; values apply only where the flag was not given
std::map<std::string, std::string> read_config(const std::string& path) {
    std::map<std::string, std::string> kv;
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return kv;
}

void apply_config(CLI::App* sub, const std::string& path,
                  const std::map<std::string, std::function<void(const std::string&)>>& setters) {
    if (path.empty()) return;
    for (const auto& [key, value] : read_config(path)) {
        auto it = setters.find(key);
        if (it == setters.end()) continue;
        const CLI::Option* opt = sub->get_option_no_throw("--" + key);
        if (opt && opt->count() > 0) continue; // flags win
        it->second(value);
    }
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void write_json_file(const nlohmann::ordered_json& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    out << j.dump(2) << "\n";
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
    std::string config;
    std::string atom = "bernoulli";
    std::string degrees = "64";
    int trials = 1000;
    std::uint64_t seed = 0;
    std::string stat = "mean";
    double epsilon = 0.125;
    double B = 16.0;
    std::string interval;
    std::string out = ".";
    int threads = default_threads();
};

int run_simulate(const SimulateArgs& a) {
    Timer timer;
    SimConfig cfg;
    cfg.atom = parse_atom(a.atom);
    cfg.degrees = parse_degrees(a.degrees);
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    cfg.epsilon = a.epsilon;
    cfg.B = a.B;
    cfg.threads = a.threads;
    cfg.restrict_to = parse_interval(a.interval);
    cfg.collect_gaps = a.stat == "gaps";
    cfg.collect_near_double = a.stat == "near-double";

    std::vector<SimSummary> rows = run_expectation(cfg);
    std::vector<VarianceRow> vrows;
    if (a.stat == "variance") vrows = variance_ratio(cfg);

    fs::create_directories(a.out);
    std::string csv_path = (fs::path(a.out) / "summary.csv").string();
    {
        CsvWriter csv(csv_path);
        csv.header({"n", "trials", "mean", "variance", "residual", "ci_half_width",
                    "near_double_freq", "min_gap_p01", "min_gap_p50"});
        for (const auto& r : rows)
            csv.row({std::to_string(r.n), std::to_string(r.trials - r.excluded),
                     format_double(r.mean), format_double(r.variance), format_double(r.residual),
                     format_double(r.ci_half), format_double(r.near_double_freq),
                     format_double(r.min_gap_p01), format_double(r.min_gap_p50)});
    }

    RunManifest m;
    m.subcommand = "simulate";
    m.parameters = {{"atom", a.atom},       {"degrees", a.degrees},
                    {"trials", std::to_string(a.trials)}, {"stat", a.stat},
                    {"epsilon", format_double(a.epsilon)}, {"B", format_double(a.B)},
                    {"interval", a.interval}};
    int excluded_total = 0;
    for (const auto& r : rows) excluded_total += r.excluded;
    m.parameters.emplace_back("excluded_trials", std::to_string(excluded_total));
    if (!vrows.empty()) {
        for (const auto& v : vrows)
            m.parameters.emplace_back("variance_ratio_n" + std::to_string(v.n),
                                      format_double(v.ratio) + " +- " + format_double(v.se));
    }
    m.seed = a.seed;
    m.threads = a.threads;
    m.duration_seconds = timer.seconds();
    m.output_files = {csv_path};
    write_manifest(m, (fs::path(a.out) / "manifest.json").string());
    if (excluded_total > 0)
        std::cerr << "note: " << excluded_total << " trial(s) excluded by certification failure\n";
    return 0;
}

// --- ek ---------------------------------------------------------------------

struct EkArgs {
    std::string config;
    int n = 0;
    std::string sweep;
    std::string interval;
    double tolerance = 1e-10;
    std::string out = ".";
};

int run_ek(const EkArgs& a) {
    Timer timer;
    std::vector<int> ns;
    if (!a.sweep.empty()) ns = parse_degrees(a.sweep);
    else if (a.n >= 1) ns.push_back(a.n);
    else throw CLI::ValidationError("ek", "provide --n or --n-sweep");

    std::optional<std::pair<double, double>> interval;
    if (auto iv = parse_interval(a.interval)) interval = std::make_pair(iv->lo, iv->hi);

    fs::create_directories(a.out);
    std::string csv_path = (fs::path(a.out) / "ek.csv").string();
    {
        CsvWriter csv(csv_path);
        csv.header({"n", "expected", "residual", "quad_error"});
        for (int n : ns) {
            QuadResult qr = ek_expected(n, interval, a.tolerance);
            double residual = qr.value - (2.0 / std::numbers::pi) * std::log(static_cast<double>(n));
            csv.row({std::to_string(n), format_double(qr.value), format_double(residual),
                     format_double(qr.error_estimate)});
        }
    }
    RunManifest m;
    m.subcommand = "ek";
    m.parameters = {{"n", a.sweep.empty() ? std::to_string(a.n) : a.sweep},
                    {"interval", a.interval},
                    {"tolerance", format_double(a.tolerance)}};
    m.duration_seconds = timer.seconds();
    m.output_files = {csv_path};
    write_manifest(m, (fs::path(a.out) / "manifest.json").string());
    return 0;
}

// --- exact ------------------------------------------------------------------

struct ExactArgs {
    int n = 3;
    int N = 1;
    std::string x = "4/5";
    std::string delta = "0";
    std::string weights = "u";
    std::string variant = "claim1";
    long k = 3;
    std::string c0 = "1/50";
    std::string sweep;
    std::string out = ".";
};

int run_exact(const std::string& op, const ExactArgs& a) {
    Timer timer;
    nlohmann::ordered_json j;
    j["operation"] = op;
    nlohmann::ordered_json params;
    nlohmann::ordered_json results;

    if (op == "double-root") {
        params["n"] = a.n;
        params["N"] = a.N;
        DoubleRootResult r = double_root_prob_exact(a.n, a.N);
        results["p1"] = rational_json(r.p1);
        results["pm1"] = rational_json(r.pm1);
        results["p_union"] = rational_json(r.p_union);
        results["certificate"] = to_string(r.certificate);
    } else if (op == "anticonc") {
        params["n"] = a.n;
        params["N"] = a.N;
        params["weights"] = a.weights;
        JointWeights w = a.weights == "v" ? JointWeights::V : JointWeights::U;
        JointSumTable t = build_joint_table(a.n, a.N, w);
        auto sup = t.sup();
        mpq_class p(sup.count, t.total());
        p.canonicalize();
        results["sup_probability"] = rational_json(p);
        results["attained_at"] = {sup.s, sup.t};
        results["n2_scaled"] = p.get_d() * a.n * a.n;
    } else if (op == "small-ball") {
        params["n"] = a.n;
        params["N"] = a.N;
        params["x"] = a.x;
        params["delta"] = a.delta;
        mpq_class p = smallball_prob(a.n, a.N, parse_rational(a.x), parse_rational(a.delta));
        results["probability"] = rational_json(p);
    } else if (op == "separation") {
        params["variant"] = a.variant;
        params["x"] = a.x;
        params["N"] = a.N;
        params["k"] = a.k;
        SeparationVariant v = a.variant == "claim2"  ? SeparationVariant::Claim2
                              : a.variant == "uniform" ? SeparationVariant::Uniform
                                                       : SeparationVariant::Claim1;
        SeparationResult r = separation_check(v, parse_rational(a.x), a.N, a.k,
                                              parse_rational(a.c0));
        results["pass"] = r.pass;
        results["ell"] = r.ell;
        results["set_size"] = r.set_size;
        results["min_gap"] = rational_json(r.min_gap);
        results["bound"] = rational_json(r.bound);
        if (!r.reason.empty()) results["reason"] = r.reason;
    } else if (op == "clt-calibrate") {
        params["N"] = a.N;
        std::vector<int> ns;
        if (!a.sweep.empty()) ns = parse_degrees(a.sweep);
        else ns.push_back(a.n);
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (int n : ns) {
            double approx = double_root_prob_clt(n, a.N); // throws InfeasibleError if obstructed
            DoubleRootResult ex = double_root_prob_exact(n, a.N);
            nlohmann::ordered_json row;
            row["n"] = n;
            row["clt"] = approx;
            row["exact_p1"] = rational_json(ex.p1);
            row["ratio_exact_over_clt"] = ex.p1.get_d() / approx;
            arr.push_back(row);
        }
        results["rows"] = arr;
    } else {
        throw CLI::ValidationError("exact", "unknown operation " + op);
    }

    j["parameters"] = params;
    j["results"] = results;
    fs::create_directories(a.out);
    std::string json_path = (fs::path(a.out) / "result.json").string();
    write_json_file(j, json_path);

    RunManifest m;
    m.subcommand = "exact " + op;
    for (auto& [key, value] : params.items())
        m.parameters.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
    m.duration_seconds = timer.seconds();
    m.output_files = {json_path};
    write_manifest(m, (fs::path(a.out) / "manifest.json").string());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"kacroots: real-root statistics of Kac random polynomials"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo root-count experiments");
    simulate->add_option("--config", sim.config, "key=value defaults; flags win");
    simulate->add_option("--atom", sim.atom, "bernoulli|typeI:N|gaussian|uniform");
    simulate->add_option("--degrees", sim.degrees, "comma list or 2^a..2^b");
    simulate->add_option("--trials", sim.trials);
    simulate->add_option("--seed", sim.seed);
    simulate->add_option("--stat", sim.stat, "mean|residual|variance|gaps|near-double");
    simulate->add_option("--epsilon", sim.epsilon);
    simulate->add_option("--B", sim.B);
    simulate->add_option("--interval", sim.interval, "lo,hi restriction");
    simulate->add_option("--out", sim.out);
    simulate->add_option("--threads", sim.threads);

    EkArgs ek;
    CLI::App* ekcmd = app.add_subcommand("ek", "Gaussian expected-roots quadrature");
    ekcmd->add_option("--config", ek.config, "key=value defaults; flags win");
    ekcmd->add_option("--n", ek.n);
    ekcmd->add_option("--n-sweep", ek.sweep);
    ekcmd->add_option("--interval", ek.interval);
    ekcmd->add_option("--tolerance", ek.tolerance);
    ekcmd->add_option("--out", ek.out);

    ExactArgs ex;
    CLI::App* exact = app.add_subcommand("exact", "exact combinatorial oracles");
    exact->require_subcommand(1);
    std::vector<std::string> ops = {"double-root", "anticonc", "small-ball", "separation",
                                    "clt-calibrate"};
    for (const auto& op : ops) {
        CLI::App* sub = exact->add_subcommand(op);
        sub->add_option("--n", ex.n);
        sub->add_option("--N", ex.N);
        sub->add_option("--x", ex.x, "rational p/q");
        sub->add_option("--delta", ex.delta, "rational p/q");
        sub->add_option("--weights", ex.weights, "u|v");
        sub->add_option("--variant", ex.variant, "claim1|claim2|uniform");
        sub->add_option("--k", ex.k);
        sub->add_option("--c0", ex.c0, "rational p/q");
        sub->add_option("--n-sweep", ex.sweep);
        sub->add_option("--out", ex.out);
    }

    try {
        app.parse(argc, argv);
        if (*simulate) {
            apply_config(simulate, sim.config,
                         {{"atom", [&](const std::string& v) { sim.atom = v; }},
                          {"degrees", [&](const std::string& v) { sim.degrees = v; }},
                          {"trials", [&](const std::string& v) { sim.trials = std::stoi(v); }},
                          {"seed", [&](const std::string& v) { sim.seed = std::stoull(v); }},
                          {"stat", [&](const std::string& v) { sim.stat = v; }},
                          {"epsilon", [&](const std::string& v) { sim.epsilon = std::stod(v); }},
                          {"B", [&](const std::string& v) { sim.B = std::stod(v); }},
                          {"interval", [&](const std::string& v) { sim.interval = v; }},
                          {"out", [&](const std::string& v) { sim.out = v; }},
                          {"threads", [&](const std::string& v) { sim.threads = std::stoi(v); }}});
            return run_simulate(sim);
        }
        if (*ekcmd) {
            apply_config(ekcmd, ek.config,
                         {{"n", [&](const std::string& v) { ek.n = std::stoi(v); }},
                          {"n-sweep", [&](const std::string& v) { ek.sweep = v; }},
                          {"interval", [&](const std::string& v) { ek.interval = v; }},
                          {"tolerance", [&](const std::string& v) { ek.tolerance = std::stod(v); }},
                          {"out", [&](const std::string& v) { ek.out = v; }}});
            return run_ek(ek);
        }
        for (const auto& op : ops)
            if (exact->get_subcommand(op)->parsed()) return run_exact(op, ex);
        return 1;
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << "\ncertificate: " << e.certificate() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
