#pragma once

#include "canard/expr.hpp"
#include "canard/types.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace canard::model {

/// A model with parameters substituted: plain callables on the state,
/// which is what all numerical routines consume. Evaluation is pure and
/// instances are safe to share across threads.
struct BoundSystem {
    int n = 0;
    std::function<Vec(const Vec&)> rhs;
    std::function<Mat(const Vec&)> jac;  // analytic Jacobian; null when unavailable
};

/// An ODE system z' = F(z; params) on the fast time scale, with the
/// singular-perturbation and bifurcation parameters identified by name.
/// Immutable after construction; parameter changes happen through the
/// bindings passed to bind().
class SystemModel {
  public:
    using NativeRhs = std::function<Vec(const Vec&, const Params&)>;
    using NativeJac = std::function<Mat(const Vec&, const Params&)>;

    SystemModel(std::string name, std::vector<std::string> states, Params params,
                std::string epsilon_param, std::string bifurcation_param,
                std::vector<std::string> equation_text);

    const std::string& name() const { return name_; }
    int dim() const { return static_cast<int>(states_.size()); }
    const std::vector<std::string>& states() const { return states_; }
    const Params& default_params() const { return params_; }
    const std::string& epsilon_param() const { return epsilon_param_; }
    const std::string& bifurcation_param() const { return bifurcation_param_; }
    const std::vector<std::string>& equation_text() const { return equation_text_; }

    /// Merge overrides into the default parameters.
    Params params_with(const Params& overrides) const;

    /// Substitute parameters and return fast evaluators. Native evaluators
    /// (built-in models) win over the parsed expressions.
    BoundSystem bind(const Params& overrides = {}) const;

    /// Evaluate the right-hand side once via the parsed expressions,
    /// regardless of native evaluators (used for cross-checks).
    Vec rhs_from_expressions(const Vec& state, const Params& overrides = {}) const;

    void set_native(NativeRhs rhs, NativeJac jac);
    bool has_native() const { return static_cast<bool>(native_rhs_); }

  private:
    std::string name_;
    std::vector<std::string> states_;
    Params params_;
    std::string epsilon_param_, bifurcation_param_;
    std::vector<std::string> equation_text_;
    std::vector<expr::Ast> equations_;
    std::vector<expr::Program> programs_;   // slots: states then params (declaration order)
    std::vector<std::string> slot_names_;
    NativeRhs native_rhs_;
    NativeJac native_jac_;
};

/// Parse a model from the JSON config format:
/// { "name": str, "states": [str], "params": {str: num},
///   "epsilon_param": str, "bifurcation_param": str, "equations": [str] }
SystemModel load_model(const std::string& config_text);

/// Time-reversed van der Pol:  x' = x^2 + x^3/3 - y,  y' = eps*(x - lambda).
SystemModel builtin_vdp();

/// FitzHugh-Nagumo (3-D):  x1' = x2,
/// x2' = (1/5)(s*x2 - x1(x1-1)(0.1-x1) + y - I),  y' = (eps/s)(x1 - y).
SystemModel builtin_fhn();

/// Look up a built-in by name ("vdp" | "fhn").
std::optional<SystemModel> builtin_by_name(const std::string& name);

}  // namespace canard::model
