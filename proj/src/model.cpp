#include "canard/model.hpp"

#include <json.hpp>

#include <set>

namespace canard::model {

SystemModel::SystemModel(std::string name, std::vector<std::string> states, Params params,
                         std::string epsilon_param, std::string bifurcation_param,
                         std::vector<std::string> equation_text)
    : name_(std::move(name)),
      states_(std::move(states)),
      params_(std::move(params)),
      epsilon_param_(std::move(epsilon_param)),
      bifurcation_param_(std::move(bifurcation_param)),
      equation_text_(std::move(equation_text)) {
    if (states_.empty()) throw ConfigError("model '" + name_ + "' has no states");
    std::set<std::string> seen;
    for (const auto& s : states_)
        if (!seen.insert(s).second) throw ConfigError("duplicate state name '" + s + "'");
    for (const auto& [p, v] : params_) {
        (void)v;
        if (!seen.insert(p).second)
            throw ConfigError("parameter '" + p + "' collides with a state or another parameter");
    }
    if (!params_.count(epsilon_param_))
        throw ConfigError("epsilon_param '" + epsilon_param_ + "' is not a declared parameter");
    if (!params_.count(bifurcation_param_))
        throw ConfigError("bifurcation_param '" + bifurcation_param_ + "' is not a declared parameter");
    if (epsilon_param_ == bifurcation_param_)
        throw ConfigError("epsilon_param and bifurcation_param must differ");
    if (equation_text_.size() != states_.size())
        throw ConfigError("expected " + std::to_string(states_.size()) + " equations, got " +
                          std::to_string(equation_text_.size()));

    slot_names_ = states_;
    for (const auto& [p, v] : params_) {
        (void)v;
        slot_names_.push_back(p);
    }
    std::set<std::string> allowed(slot_names_.begin(), slot_names_.end());
    for (const auto& text : equation_text_) {
        try {
            equations_.push_back(expr::parse(text, allowed));
        } catch (const ParseError& e) {
            throw ConfigError("in equation \"" + text + "\": " + e.what());
        }
        programs_.emplace_back(equations_.back(), slot_names_);
    }
}

Params SystemModel::params_with(const Params& overrides) const {
    Params p = params_;
    for (const auto& [k, v] : overrides) {
        if (!p.count(k)) throw ConfigError("unknown parameter '" + k + "'");
        p[k] = v;
    }
    return p;
}

BoundSystem SystemModel::bind(const Params& overrides) const {
    Params p = params_with(overrides);
    BoundSystem out;
    out.n = dim();
    if (native_rhs_) {
        out.rhs = [f = native_rhs_, p](const Vec& z) { return f(z, p); };
        if (native_jac_) out.jac = [j = native_jac_, p](const Vec& z) { return j(z, p); };
        return out;
    }
    const int n = dim();
    std::vector<double> base(slot_names_.size(), 0.0);
    for (std::size_t i = static_cast<std::size_t>(n); i < slot_names_.size(); ++i)
        base[i] = p.at(slot_names_[i]);
    out.rhs = [progs = &programs_, base, n](const Vec& z) {
        std::vector<double> slots = base;
        for (int i = 0; i < n; ++i) slots[static_cast<std::size_t>(i)] = z[i];
        Vec dz(n);
        for (int i = 0; i < n; ++i) dz[i] = (*progs)[static_cast<std::size_t>(i)].run(slots);
        return dz;
    };
    return out;
}

Vec SystemModel::rhs_from_expressions(const Vec& state, const Params& overrides) const {
    Params bindings = params_with(overrides);
    for (int i = 0; i < dim(); ++i) bindings[states_[static_cast<std::size_t>(i)]] = state[i];
    Vec dz(dim());
    for (int i = 0; i < dim(); ++i) dz[i] = expr::eval(equations_[static_cast<std::size_t>(i)], bindings);
    return dz;
}

void SystemModel::set_native(NativeRhs rhs, NativeJac jac) {
    native_rhs_ = std::move(rhs);
    native_jac_ = std::move(jac);
}

SystemModel load_model(const std::string& config_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(config_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    auto require = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw ConfigError(std::string("missing key \"") + key + "\"");
        return j.at(key);
    };
    try {
        std::string name = require("name").get<std::string>();
        std::vector<std::string> states = require("states").get<std::vector<std::string>>();
        Params params;
        for (const auto& [k, v] : require("params").items()) {
            if (!v.is_number()) throw ConfigError("parameter \"" + k + "\" is not a number");
            params[k] = v.get<double>();
        }
        std::string eps = require("epsilon_param").get<std::string>();
        std::string lam = require("bifurcation_param").get<std::string>();
        std::vector<std::string> eqs = require("equations").get<std::vector<std::string>>();
        return SystemModel(std::move(name), std::move(states), std::move(params), std::move(eps),
                           std::move(lam), std::move(eqs));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

namespace {

const char* kVdpConfig = R"json({
  "name": "vdp",
  "states": ["x", "y"],
  "params": {"lambda": 0.0, "eps": 0.05},
  "epsilon_param": "eps",
  "bifurcation_param": "lambda",
  "equations": ["x^2 + x^3/3 - y", "eps*(x - lambda)"]
})json";

const char* kFhnConfig = R"json({
  "name": "fhn",
  "states": ["x1", "x2", "y"],
  "params": {"I": 0.05, "s": 1.37, "eps": 0.01},
  "epsilon_param": "eps",
  "bifurcation_param": "I",
  "equations": ["x2",
                "(1/5)*(s*x2 - x1*(x1 - 1)*(0.1 - x1) + y - I)",
                "(eps/s)*(x1 - y)"]
})json";

}  // namespace

SystemModel builtin_vdp() {
    SystemModel m = load_model(kVdpConfig);
    m.set_native(
        [](const Vec& z, const Params& p) {
            const double x = z[0], y = z[1];
            const double eps = p.at("eps"), lam = p.at("lambda");
            Vec dz(2);
            dz[0] = x * x + x * x * x / 3.0 - y;
            dz[1] = eps * (x - lam);
            return dz;
        },
        [](const Vec& z, const Params& p) {
            const double x = z[0];
            Mat J(2, 2);
            J << 2.0 * x + x * x, -1.0, p.at("eps"), 0.0;
            return J;
        });
    return m;
}

SystemModel builtin_fhn() {
    SystemModel m = load_model(kFhnConfig);
    m.set_native(
        [](const Vec& z, const Params& p) {
            const double x1 = z[0], x2 = z[1], y = z[2];
            const double I = p.at("I"), s = p.at("s"), eps = p.at("eps");
            Vec dz(3);
            dz[0] = x2;
            dz[1] = 0.2 * (s * x2 - x1 * (x1 - 1.0) * (0.1 - x1) + y - I);
            dz[2] = (eps / s) * (x1 - y);
            return dz;
        },
        [](const Vec& z, const Params& p) {
            const double x1 = z[0];
            const double s = p.at("s"), eps = p.at("eps");
            // d/dx1 of x1(x1-1)(0.1-x1) = -3 x1^2 + 2.2 x1 - 0.1
            const double cp = -3.0 * x1 * x1 + 2.2 * x1 - 0.1;
            Mat J(3, 3);
            J << 0.0, 1.0, 0.0,
                -0.2 * cp, 0.2 * s, 0.2,
                eps / s, 0.0, -eps / s;
            return J;
        });
    return m;
}

std::optional<SystemModel> builtin_by_name(const std::string& name) {
    if (name == "vdp") return builtin_vdp();
    if (name == "fhn") return builtin_fhn();
    return std::nullopt;
}

}  // namespace canard::model
