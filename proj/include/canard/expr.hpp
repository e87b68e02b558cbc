#pragma once

#include "canard/types.hpp"

#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace canard::expr {

enum class BinaryOp { add, sub, mul, div, pow };
enum class Func { sin, cos, exp, log, sqrt, abs };

struct Node;
using Ast = std::shared_ptr<const Node>;

/// Immutable expression tree node. `kind` decides which members are active.
struct Node {
    enum class Kind { constant, variable, negate, binary, call };
    Kind kind;
    double value = 0.0;      // constant
    std::string ident;       // variable
    BinaryOp op{};           // binary
    Func fn{};               // call
    Ast a, b;                // children (negate/call use a only)
};

/// Parse `text` into an AST. Every identifier must be in `allowed`,
/// otherwise a ParseError names the offender. Precedence:
/// pow > unary minus > mul/div > add/sub; pow is right-associative,
/// the rest left-associative.
Ast parse(std::string_view text, const std::set<std::string>& allowed);

/// Evaluate with named bindings. Throws EvalError on domain failures
/// (division by zero, log/sqrt out of range, fractional power of a
/// negative base) and on unbound variables.
double eval(const Ast& ast, const Params& bindings);

/// Fully parenthesized rendering; reparsing yields an equivalent tree.
std::string to_string(const Ast& ast);

/// Flat evaluator with identifiers resolved to slot indices; this is the
/// hot path used by bound models inside the integrator.
class Program {
  public:
    Program() = default;
    Program(const Ast& ast, std::span<const std::string> slot_names);
    double run(std::span<const double> slots) const;

  private:
    enum class OpCode { push_const, push_slot, negate, binary, call };
    struct Instr {
        OpCode code;
        double value = 0.0;
        int slot = 0;
        BinaryOp op{};
        Func fn{};
    };
    std::vector<Instr> code_;
    int max_stack_ = 0;
};

}  // namespace canard::expr
