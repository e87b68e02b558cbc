#include "canard/report.hpp"

#include <cstdio>
#include <sstream>

namespace canard::report {

namespace {

nlohmann::json complex_json(const Complex& z) { return {z.real(), z.imag()}; }

nlohmann::json cvec_json(const CVec& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v[i]));
    return out;
}

nlohmann::json vec_json(const Vec& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

std::string sig6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

nlohmann::json to_json(const oracle::OracleResult& r) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& e : r.trace)
        trace.push_back({{"lambda", e.lambda},
                         {"side", oracle::side_name(e.side)},
                         {"by_timeout", e.by_timeout}});
    return {{"bracket", {r.lambda_lo, r.lambda_hi}},
            {"lambda_star", r.lambda_star},
            {"lo_side", oracle::side_name(r.lo_side)},
            {"hi_side", oracle::side_name(r.hi_side)},
            {"trace", trace},
            {"stats",
             {{"rhs_evaluations", r.stats.n_rhs},
              {"accepted_steps", r.stats.n_accepted},
              {"rejected_steps", r.stats.n_rejected}}}};
}

nlohmann::json to_json(const AnalysisReport& r) {
    nlohmann::json j;
    j["tool"] = "canard";
    j["version"] = kToolVersion;
    j["model"] = r.model;
    j["epsilon"] = r.epsilon;
    j["hopf"] = {{"lambda_H", r.hopf.lambda},
                 {"omega0", r.hopf.omega0},
                 {"equilibrium", vec_json(r.hopf.eq.z)},
                 {"residual", r.hopf.eq.residual},
                 {"q", cvec_json(r.hopf.q)},
                 {"p", cvec_json(r.hopf.p)},
                 {"d_re_d_lambda", r.hopf.d_re_d_lambda}};
    nlohmann::json lya;
    lya["l1_ku"] = r.lyapunov.l1_ku;
    lya["l1_mc"] = r.lyapunov.l1_mc;
    if (r.lyapunov.l1_planar) lya["l1_planar_g"] = *r.lyapunov.l1_planar;
    if (r.lyapunov.l1_gh) lya["l1_gh"] = *r.lyapunov.l1_gh;
    if (r.lyapunov.l1_clw) lya["l1_clw"] = *r.lyapunov.l1_clw;
    if (r.lyapunov.l1_pe) lya["l1_pe"] = *r.lyapunov.l1_pe;
    if (r.lyapunov.g) {
        lya["g20"] = complex_json(r.lyapunov.g->g20);
        lya["g11"] = complex_json(r.lyapunov.g->g11);
        lya["g21"] = complex_json(r.lyapunov.g->g21);
    }
    lya["criticality"] =
        r.lyapunov.criticality == lyapunov::Criticality::supercritical ? "super" : "sub";
    j["lyapunov"] = std::move(lya);

    nlohmann::json preds = nlohmann::json::array();
    for (const auto& p : r.predictions)
        preds.push_back({{"route", prediction::route_name(p.route)},
                         {"K", p.K},
                         {"lambda_H", p.lambda_H},
                         {"epsilon", p.epsilon},
                         {"lambda_c", p.lambda_c},
                         {"error_order", prediction::CanardPrediction::error_order}});
    j["predictions"] = std::move(preds);
    if (r.oracle) j["oracle"] = to_json(*r.oracle);
    if (r.timing_seconds) j["timing_seconds"] = *r.timing_seconds;
    return j;
}

nlohmann::json to_json(const oracle::SweepResult& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json jr = {{"epsilon", row.eps}, {"ok", row.ok}};
        if (row.ok) {
            jr["lambda_H"] = row.lambda_H;
            jr["omega0"] = row.omega0;
            jr["l1_mc"] = row.l1_mc;
            jr["K"] = row.K;
            jr["route"] = prediction::route_name(row.route);
            jr["lambda_c_pred"] = row.lambda_c_pred;
            jr["lambda_c_obs"] = row.lambda_c_obs;
            jr["abs_err"] = row.abs_err;
        } else {
            jr["error"] = row.error;
        }
        rows.push_back(std::move(jr));
    }
    nlohmann::json j = {{"tool", "canard"}, {"version", kToolVersion}, {"rows", rows}};
    if (r.error_slope) j["error_slope"] = *r.error_slope;
    return j;
}

std::string to_table(const AnalysisReport& r) {
    std::ostringstream os;
    os << "model        " << r.model << "\n";
    os << "epsilon      " << sig6(r.epsilon) << "\n";
    os << "lambda_H     " << sig6(r.hopf.lambda) << "\n";
    os << "omega0       " << sig6(r.hopf.omega0) << "\n";
    os << "l1_ku        " << sig6(r.lyapunov.l1_ku) << "\n";
    os << "l1_mc        " << sig6(r.lyapunov.l1_mc) << "\n";
    if (r.lyapunov.l1_gh) os << "l1_gh        " << sig6(*r.lyapunov.l1_gh) << "\n";
    if (r.lyapunov.l1_clw) os << "l1_clw       " << sig6(*r.lyapunov.l1_clw) << "\n";
    if (r.lyapunov.l1_pe) os << "l1_pe        " << sig6(*r.lyapunov.l1_pe) << "\n";
    os << "criticality  "
       << (r.lyapunov.criticality == lyapunov::Criticality::supercritical ? "super" : "sub")
       << "\n";
    for (const auto& p : r.predictions)
        os << "lambda_c[" << prediction::route_name(p.route) << "]"
           << std::string(std::max<std::size_t>(1, 4 - std::string(prediction::route_name(p.route)).size()), ' ')
           << sig6(p.lambda_c) << "  (K = " << sig6(p.K) << ")\n";
    if (r.oracle)
        os << "lambda_c*    " << sig6(r.oracle->lambda_star) << "  (oracle, bracket width "
           << sig6(r.oracle->lambda_hi - r.oracle->lambda_lo) << ")\n";
    if (r.timing_seconds) os << "time_s       " << sig6(*r.timing_seconds) << "\n";
    return os.str();
}

std::string sweep_csv(const oracle::SweepResult& r) {
    std::ostringstream os;
    os << "epsilon,lambda_H,omega0,l1_mc,K_route,lambda_c_pred,lambda_c_obs,abs_err,error\n";
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& row : r.rows) {
        if (row.ok) {
            os << num(row.eps) << ',' << num(row.lambda_H) << ',' << num(row.omega0) << ','
               << num(row.l1_mc) << ',' << num(row.K) << ',' << num(row.lambda_c_pred) << ','
               << num(row.lambda_c_obs) << ',' << num(row.abs_err) << ",\n";
        } else {
            std::string msg = row.error;
            for (char& ch : msg)
                if (ch == ',' || ch == '\n') ch = ';';
            os << num(row.eps) << ",,,,,,,," << msg << "\n";
        }
    }
    return os.str();
}

}  // namespace canard::report
