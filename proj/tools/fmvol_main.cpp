#include <chrono>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "fmvol/cluster.hpp"
#include "fmvol/errors.hpp"
#include "fmvol/instance_io.hpp"
#include "fmvol/oracle.hpp"

using json = nlohmann::ordered_json;
using namespace fmvol;

namespace {

// Rational literal "p/q", integer, or plain decimal like 0.01.
Rat parse_number(const std::string& text) {
    if (text.find('/') != std::string::npos)
        return parse_rat(text);
    size_t dot = text.find('.');
    if (dot == std::string::npos)
        return parse_rat(text);
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    if (digits.empty() || digits == "-")
        throw ParseError("bad numeric literal: " + text);
    Rat num = parse_rat(digits);
    return num / rat_pow(Rat(10), static_cast<long>(text.size() - dot - 1));
}

std::string real_str(const Real& r) { return r.str(25); }

int run(int argc, char** argv) {
    CLI::App app{"Deterministic volume approximation for truncated fractional "
                 "matching polytopes"};
    std::string input, delta_str, epsilon_str = "1/100", rho_str = "1/10";
    std::string mode_str = "auto", oracle_str = "none", format = "json";
    long mc_samples = 1000000;
    uint64_t seed = 0;
    int max_cluster_size = 0, dimension_cap = 16;
    bool force = false;
    app.add_option("--input", input, "instance file")->required();
    app.add_option("--delta", delta_str, "truncation parameter p/q")->required();
    app.add_option("--epsilon", epsilon_str, "relative error tolerance");
    app.add_option("--mode", mode_str, "expansion mode")
        ->check(CLI::IsMember({"auto", "graph", "mcs"}));
    app.add_option("--rho", rho_str, "decay rate p/q");
    app.add_option("--oracle", oracle_str, "verification oracle")
        ->check(CLI::IsMember({"none", "ie", "volume", "mc"}));
    app.add_option("--mc-samples", mc_samples, "Monte Carlo sample count");
    app.add_option("--seed", seed, "Monte Carlo seed");
    app.add_option("--max-cluster-size", max_cluster_size,
                   "truncation depth override");
    app.add_option("--dimension-cap", dimension_cap,
                   "polytope dimension cap");
    app.add_flag("--force", force, "proceed with inadmissible delta");
    app.add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "text"}));
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    auto start = std::chrono::steady_clock::now();
    Hypergraph h = load_instance(input);
    Rat delta = parse_rat(delta_str);
    Rat epsilon = parse_number(epsilon_str);
    Rat rho = parse_rat(rho_str);
    Mode mode = mode_str == "auto"  ? auto_mode(h)
                : mode_str == "graph" ? Mode::Graph
                                      : Mode::Mcs;
    PlanOptions opts;
    opts.rho = rho;
    opts.force = force;
    opts.m_override = max_cluster_size;
    opts.limits.dim_cap = dimension_cap;
    ExpansionPlan plan = validate_plan(h, delta, epsilon, mode, opts);
    VolumeResult res = approximate_volume(h, plan);

    json rec;
    rec["mode"] = mode == Mode::Graph ? "graph" : "mcs";
    rec["n"] = h.vertex_count();
    rec["m_edges"] = h.edge_count();
    rec["delta"] = rat_str(delta);
    rec["epsilon"] = rat_str(epsilon);
    rec["rho"] = rat_str(rho);
    rec["truncation_depth"] = plan.m;
    rec["log_xi"] = rat_str(res.log_xi);
    rec["log_volume"] = real_str(res.log_volume);
    rec["volume"] = real_str(res.volume);
    rec["cluster_count"] = res.cluster_count;
    rec["max_cluster_size"] = res.max_cluster_size;
    rec["polymer_count"] = res.polymer_count;
    rec["strategy"] = res.strategy;
    rec["tail_bound"] = real_str(res.tail_bound);
    rec["guarantee"] = res.guarantee;
    if (oracle_str == "ie") {
        Rat xi = xi_bruteforce(h, delta, plan.limits);
        Rat vol = rat_pow(box_upper(h, delta), h.edge_count()) * xi;
        json o;
        o["kind"] = "ie";
        o["xi"] = rat_str(xi);
        o["volume"] = rat_str(vol);
        o["relative_discrepancy"] =
            real_str(abs(res.volume - to_real(vol)) / to_real(vol));
        rec["oracle"] = o;
    } else if (oracle_str == "volume") {
        Rat vol = volume_bruteforce(h, delta, plan.limits);
        json o;
        o["kind"] = "volume";
        o["volume"] = rat_str(vol);
        o["relative_discrepancy"] =
            real_str(abs(res.volume - to_real(vol)) / to_real(vol));
        rec["oracle"] = o;
    } else if (oracle_str == "mc") {
        McEstimate mc = volume_montecarlo(h, delta, mc_samples, seed);
        json o;
        o["kind"] = "mc";
        o["estimate"] = real_str(mc.estimate);
        o["std_error"] = real_str(mc.std_error);
        o["samples"] = mc.samples;
        o["seed"] = mc.seed;
        o["relative_discrepancy"] =
            real_str(abs(res.volume - mc.estimate) / mc.estimate);
        rec["oracle"] = o;
    }
    rec["wall_time_ms"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();

    if (format == "json") {
        std::cout << rec.dump(2) << "\n";
    } else {
        for (auto& [key, value] : rec.items()) {
            if (value.is_object()) {
                for (auto& [k2, v2] : value.items())
                    std::cout << key << "." << k2 << ": "
                              << (v2.is_string() ? v2.get<std::string>()
                                                 : v2.dump())
                              << "\n";
            } else {
                std::cout << key << ": "
                          << (value.is_string() ? value.get<std::string>()
                                                : value.dump())
                          << "\n";
            }
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const PlanError& e) {
        std::cerr << "plan error: " << e.what() << "\n";
        return 3;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << "\n";
        return 4;
    } catch (const InvariantError& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 5;
    } catch (const GeometryError& e) {
        std::cerr << "geometry contract violation: " << e.what() << "\n";
        return 5;
    } catch (const ArgumentError& e) {
        std::cerr << "argument error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    }
}
