#pragma once

#include "canard/hopf.hpp"
#include "canard/lyapunov.hpp"
#include "canard/oracle.hpp"
#include "canard/prediction.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace canard::report {

inline constexpr const char* kToolVersion = "1.0.0";

/// Everything one `analyze` run produces. Routes present depend on the
/// system dimension (planar-only conventions are absent for n > 2).
struct AnalysisReport {
    std::string model;
    double epsilon = 0.0;
    hopf::HopfPoint hopf;
    lyapunov::Report lyapunov;
    std::vector<prediction::CanardPrediction> predictions;
    std::optional<oracle::OracleResult> oracle;
    std::optional<double> timing_seconds;
};

nlohmann::json to_json(const AnalysisReport& r);
nlohmann::json to_json(const oracle::OracleResult& r);
nlohmann::json to_json(const oracle::SweepResult& r);

/// Human-readable table, values rounded to 6 significant digits.
std::string to_table(const AnalysisReport& r);

/// CSV with the fixed column set
/// epsilon,lambda_H,omega0,l1_mc,K_route,lambda_c_pred,lambda_c_obs,abs_err,error
std::string sweep_csv(const oracle::SweepResult& r);

}  // namespace canard::report
