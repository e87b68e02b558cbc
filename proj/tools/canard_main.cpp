#include "canard/model.hpp"
#include "canard/oracle.hpp"
#include "canard/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace canard;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitNoHopf = 2;
constexpr int kExitDegenerate = 3;
constexpr int kExitResonance = 4;
constexpr int kExitOracleBracket = 5;
constexpr int kExitConfig = 6;

struct CommonOpts {
    std::string model_name;
    std::string config_path;
    double eps = 0.0;
    std::vector<double> bracket;
    double lambda_tol = 1e-9;
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    bool json = false;
    bool table = false;
    bool no_timing = false;
    std::string out_path;
};

model::SystemModel resolve_model(const CommonOpts& o) {
    if (!o.config_path.empty()) {
        std::ifstream in(o.config_path);
        if (!in) throw ConfigError("cannot open config file '" + o.config_path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return model::load_model(ss.str());
    }
    if (auto m = model::builtin_by_name(o.model_name)) return std::move(*m);
    throw ConfigError("unknown model '" + o.model_name + "' (builtins: vdp, fhn)");
}

std::pair<double, double> default_hopf_bracket(const model::SystemModel& m, double eps) {
    if (m.name() == "vdp") {
        const double half = std::max(0.5 * std::sqrt(eps), 1e-4);
        return {-half, half};
    }
    if (m.name() == "fhn") return {0.045, 0.10};
    throw ConfigError("no default Hopf bracket for model '" + m.name() +
                      "'; pass --bracket LO HI");
}

Vec default_guess(const model::SystemModel& m) {
    if (m.name() == "fhn") {
        Vec g(3);
        g << 0.05, 0.0, 0.05;
        return g;
    }
    return Vec::Zero(m.dim());
}

void write_output(const CommonOpts& o, const std::string& text) {
    if (o.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(o.out_path);
    if (!out) throw Error("cannot open output file '" + o.out_path + "'");
    out << text;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_eps = true) {
    cmd->add_option("--model", o.model_name, "built-in model name (vdp | fhn)");
    cmd->add_option("--config", o.config_path, "model config JSON path");
    auto* eps = cmd->add_option("--eps", o.eps, "singular perturbation parameter");
    if (needs_eps) eps->required();
    cmd->add_option("--bracket", o.bracket, "parameter bracket LO HI")->expected(2);
    cmd->add_option("--lambda-tol", o.lambda_tol, "oracle bisection tolerance");
    cmd->add_option("--rel-tol", o.rel_tol, "integrator relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "integrator absolute tolerance");
    cmd->add_flag("--json", o.json, "machine-readable JSON output");
    cmd->add_flag("--table", o.table, "human-readable table output");
    cmd->add_flag("--no-timing", o.no_timing, "omit the timing field (deterministic output)");
    cmd->add_option("--out", o.out_path, "write output to PATH instead of stdout");
}

int cmd_analyze(const CommonOpts& o, bool with_oracle) {
    auto t0 = std::chrono::steady_clock::now();
    model::SystemModel m = resolve_model(o);
    double lo, hi;
    if (o.bracket.size() == 2) {
        lo = o.bracket[0];
        hi = o.bracket[1];
    } else {
        std::tie(lo, hi) = default_hopf_bracket(m, o.eps);
    }
    oracle::PipelineResult pr = oracle::predict_canard(m, o.eps, lo, hi, default_guess(m));

    report::AnalysisReport rep;
    rep.model = m.name();
    rep.epsilon = o.eps;
    rep.hopf = pr.hopf_point;
    rep.lyapunov = pr.lyapunov_report;
    using prediction::Route;
    auto add_pred = [&](Route route, double l1) {
        const double K = prediction::k_from_l1(route, l1, o.eps, rep.hopf.omega0);
        rep.predictions.push_back(
            prediction::predict_lambda_c(rep.hopf.lambda, K, o.eps, route));
    };
    add_pred(Route::ku, rep.lyapunov.l1_ku);
    add_pred(Route::mc, rep.lyapunov.l1_mc);
    if (rep.lyapunov.l1_gh) add_pred(Route::gh, *rep.lyapunov.l1_gh);
    if (rep.lyapunov.l1_clw) add_pred(Route::clw, *rep.lyapunov.l1_clw);
    if (rep.lyapunov.l1_pe) add_pred(Route::pe, *rep.lyapunov.l1_pe);

    if (with_oracle) {
        oracle::IntegratorSettings is;
        is.rtol = o.rel_tol;
        is.atol = o.abs_tol;
        const double d = rep.hopf.lambda - pr.lambda_c_pred;
        oracle::OracleResult orc = oracle::bisect_canard(
            m, o.eps, rep.hopf.lambda - 3.0 * d, rep.hopf.lambda - 0.4 * d, o.lambda_tol, is,
            oracle::default_exit_geometry(m, o.eps));
        rep.oracle = orc;
    }

    if (!o.no_timing)
        rep.timing_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (o.table && !o.json)
        write_output(o, report::to_table(rep));
    else
        write_output(o, report::to_json(rep).dump(2) + "\n");
    return kExitOk;
}

int cmd_oracle(const CommonOpts& o) {
    model::SystemModel m = resolve_model(o);
    if (o.bracket.size() != 2)
        throw OracleError("oracle requires --bracket LO HI around the explosion");
    oracle::IntegratorSettings is;
    is.rtol = o.rel_tol;
    is.atol = o.abs_tol;
    oracle::OracleResult orc =
        oracle::bisect_canard(m, o.eps, o.bracket[0], o.bracket[1], o.lambda_tol, is,
                              oracle::default_exit_geometry(m, o.eps));
    write_output(o, report::to_json(orc).dump(2) + "\n");
    return kExitOk;
}

int cmd_sweep(const CommonOpts& o, const std::vector<double>& eps_list,
              const std::vector<double>& hopf_bracket, const std::string& orbits_path, int jobs) {
    model::SystemModel m = resolve_model(o);
    if (eps_list.empty()) throw ConfigError("sweep requires --eps-list E1,E2,...");
    oracle::SweepOptions opts;
    if (hopf_bracket.size() == 2) {
        opts.hopf_lo = hopf_bracket[0];
        opts.hopf_hi = hopf_bracket[1];
    } else {
        std::tie(opts.hopf_lo, opts.hopf_hi) =
            default_hopf_bracket(m, *std::min_element(eps_list.begin(), eps_list.end()));
    }
    if (o.bracket.size() == 2) opts.oracle_bracket = std::make_pair(o.bracket[0], o.bracket[1]);
    opts.lambda_tol = o.lambda_tol;
    opts.integrator.rtol = o.rel_tol;
    opts.integrator.atol = o.abs_tol;
    opts.equilibrium_guess = default_guess(m);
    opts.jobs = jobs;
    oracle::SweepResult sw = oracle::sweep_epsilon(m, eps_list, opts);

    if (!orbits_path.empty()) {
        // Orbit samples at a few parameter values across the last row's
        // bracket, gnuplot block format: one block per parameter value.
        std::ofstream orb(orbits_path);
        if (!orb) throw Error("cannot open orbit file '" + orbits_path + "'");
        for (const auto& row : sw.rows) {
            if (!row.ok) continue;
            const double eps = row.eps;
            oracle::ExitGeometry geom = oracle::default_exit_geometry(m, eps);
            oracle::IntegratorSettings is;
            is.rtol = o.rel_tol;
            is.atol = o.abs_tol;
            is.record = true;
            const double lams[4] = {row.lambda_c_obs - 2e-4, row.lambda_c_obs - 1e-5,
                                    row.lambda_c_obs + 1e-5, row.lambda_c_obs + 2e-4};
            for (double lam : lams) {
                Params p{{m.bifurcation_param(), lam}, {m.epsilon_param(), eps}};
                oracle::Classification c;
                try {
                    c = oracle::classify_exit(m, p, is, geom);
                } catch (const Error&) {
                    continue;
                }
                orb << "# eps=" << eps << " " << m.bifurcation_param() << "=" << lam
                    << " side=" << oracle::side_name(c.side) << "\n";
                for (std::size_t i = 0; i < c.ts.size(); ++i) {
                    orb << c.ts[i];
                    for (int k = 0; k < c.ys[i].size(); ++k) orb << ' ' << c.ys[i][k];
                    orb << '\n';
                }
                orb << "\n\n";
            }
        }
    }

    if (o.json)
        write_output(o, report::to_json(sw).dump(2) + "\n");
    else
        write_output(o, report::sweep_csv(sw) +
                            (sw.error_slope
                                 ? ("# error_slope " + std::to_string(*sw.error_slope) + "\n")
                                 : std::string()));
    for (const auto& row : sw.rows)
        if (!row.ok) return kExitOracleBracket;
    return kExitOk;
}

int cmd_models() {
    for (const char* name : {"vdp", "fhn"}) {
        model::SystemModel m = *model::builtin_by_name(name);
        std::cout << m.name() << "  (" << m.dim() << "-D)\n";
        std::cout << "  states:";
        for (const auto& s : m.states()) std::cout << ' ' << s;
        std::cout << "\n  params:";
        for (const auto& [k, v] : m.default_params()) std::cout << ' ' << k << " = " << v;
        std::cout << "\n  epsilon_param: " << m.epsilon_param()
                  << "\n  bifurcation_param: " << m.bifurcation_param() << "\n";
        for (std::size_t i = 0; i < m.equation_text().size(); ++i)
            std::cout << "  " << m.states()[i] << "' = " << m.equation_text()[i] << "\n";
        std::cout << "\n";
    }
    return kExitOk;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"canard: locate canard explosions from first Lyapunov coefficients"};
    app.require_subcommand(1);

    CommonOpts a_opts, o_opts, s_opts;
    bool with_oracle = false;
    auto* analyze = app.add_subcommand("analyze", "Hopf -> Lyapunov -> prediction pipeline");
    add_common(analyze, a_opts);
    analyze->add_flag("--with-oracle", with_oracle, "append a simulation-oracle bisection");

    auto* orc = app.add_subcommand("oracle", "bisect the observed explosion location");
    add_common(orc, o_opts);

    auto* sweep = app.add_subcommand("sweep", "full pipeline over a list of epsilon values");
    std::vector<double> eps_list, hopf_bracket;
    std::string orbits_path;
    int jobs = 1;
    add_common(sweep, s_opts, false);
    sweep->add_option("--eps-list", eps_list, "epsilon values")->required()->delimiter(',');
    sweep->add_option("--hopf-bracket", hopf_bracket, "Hopf search bracket LO HI")->expected(2);
    sweep->add_option("--orbits", orbits_path, "write orbit samples (gnuplot blocks) to PATH");
    sweep->add_option("--jobs", jobs, "parallel sweep rows");

    auto* models = app.add_subcommand("models", "list built-in models");

    CLI11_PARSE(app, argc, argv);

    if (analyze->parsed()) return cmd_analyze(a_opts, with_oracle);
    if (orc->parsed()) return cmd_oracle(o_opts);
    if (sweep->parsed()) return cmd_sweep(s_opts, eps_list, hopf_bracket, orbits_path, jobs);
    if (models->parsed()) return cmd_models();
    return kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const canard::NoHopfError& e) {
        std::cerr << "error (no Hopf): " << e.what() << "\n";
        return kExitNoHopf;
    } catch (const canard::DegenerateHopfError& e) {
        std::cerr << "error (degenerate Hopf): " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const canard::ResonanceError& e) {
        std::cerr << "error (resonance): " << e.what() << "\n";
        return kExitResonance;
    } catch (const canard::OracleError& e) {
        std::cerr << "error (oracle): " << e.what() << "\n";
        return kExitOracleBracket;
    } catch (const canard::ParseError& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return kExitConfig;
    } catch (const canard::ConfigError& e) {
        std::cerr << "error (config): " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
