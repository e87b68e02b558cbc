#include "canard/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace canard::expr {

namespace {

Ast make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::constant;
    n->value = v;
    return n;
}

Ast make_var(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::variable;
    n->ident = std::move(name);
    return n;
}

Ast make_neg(Ast a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::negate;
    n->a = std::move(a);
    return n;
}

Ast make_bin(BinaryOp op, Ast a, Ast b) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

Ast make_call(Func fn, Ast a) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::call;
    n->fn = fn;
    n->a = std::move(a);
    return n;
}

const std::map<std::string, Func, std::less<>> kFuncs = {
    {"sin", Func::sin}, {"cos", Func::cos},   {"exp", Func::exp},
    {"log", Func::log}, {"sqrt", Func::sqrt}, {"abs", Func::abs},
};

class Parser {
  public:
    Parser(std::string_view text, const std::set<std::string>& allowed)
        : text_(text), allowed_(allowed) {}

    Ast run() {
        if (text_.find_first_not_of(" \t\r\n") == std::string_view::npos)
            throw ParseError("empty expression", 0);
        Ast e = expression();
        skip_ws();
        if (pos_ != text_.size())
            throw ParseError("unexpected trailing input", pos_);
        return e;
    }

  private:
    // expression := term (('+'|'-') term)*
    Ast expression() {
        Ast lhs = term();
        for (;;) {
            skip_ws();
            if (consume('+'))
                lhs = make_bin(BinaryOp::add, lhs, term());
            else if (consume('-'))
                lhs = make_bin(BinaryOp::sub, lhs, term());
            else
                return lhs;
        }
    }

    // term := unary (('*'|'/') unary)*
    Ast term() {
        Ast lhs = unary();
        for (;;) {
            skip_ws();
            if (consume('*'))
                lhs = make_bin(BinaryOp::mul, lhs, unary());
            else if (consume('/'))
                lhs = make_bin(BinaryOp::div, lhs, unary());
            else
                return lhs;
        }
    }

    // unary := '-' unary | power          (so -x^2 parses as -(x^2))
    Ast unary() {
        skip_ws();
        if (consume('-')) return make_neg(unary());
        if (consume('+')) return unary();
        return power();
    }

    // power := primary ('^' unary)?       (right-associative)
    Ast power() {
        Ast base = primary();
        skip_ws();
        if (consume('^')) return make_bin(BinaryOp::pow, base, unary());
        return base;
    }

    Ast primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of expression", pos_);
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Ast e = expression();
            skip_ws();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    Ast number() {
        const char* begin = text_.data() + pos_;
        const char* end = text_.data() + text_.size();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc{}) throw ParseError("malformed number", pos_);
        pos_ = static_cast<std::size_t>(ptr - text_.data());
        return make_const(v);
    }

    Ast identifier() {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        std::string name(text_.substr(start, pos_ - start));
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == '(') {
            auto it = kFuncs.find(name);
            if (it == kFuncs.end())
                throw ParseError("unknown function '" + name + "'", start);
            ++pos_;
            Ast arg = expression();
            skip_ws();
            if (!consume(')')) throw ParseError("expected ')' after function argument", pos_);
            return make_call(it->second, arg);
        }
        if (!allowed_.count(name))
            throw ParseError("unknown identifier '" + name + "'", start);
        return make_var(std::move(name));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool consume(char c) {
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::string_view text_;
    const std::set<std::string>& allowed_;
    std::size_t pos_ = 0;
};

double apply_bin(BinaryOp op, double a, double b) {
    switch (op) {
        case BinaryOp::add: return a + b;
        case BinaryOp::sub: return a - b;
        case BinaryOp::mul: return a * b;
        case BinaryOp::div:
            if (b == 0.0) throw EvalError("division by zero");
            return a / b;
        case BinaryOp::pow: {
            if (a < 0.0 && b != std::nearbyint(b))
                throw EvalError("fractional power of a negative base");
            double r = std::pow(a, b);
            if (!std::isfinite(r)) throw EvalError("pow overflow");
            return r;
        }
    }
    throw EvalError("bad operator");
}

double apply_fn(Func fn, double x) {
    switch (fn) {
        case Func::sin: return std::sin(x);
        case Func::cos: return std::cos(x);
        case Func::exp: {
            double r = std::exp(x);
            if (!std::isfinite(r)) throw EvalError("exp overflow");
            return r;
        }
        case Func::log:
            if (x <= 0.0) throw EvalError("log of a non-positive value");
            return std::log(x);
        case Func::sqrt:
            if (x < 0.0) throw EvalError("sqrt of a negative value");
            return std::sqrt(x);
        case Func::abs: return std::fabs(x);
    }
    throw EvalError("bad function");
}

const char* fn_name(Func fn) {
    switch (fn) {
        case Func::sin: return "sin";
        case Func::cos: return "cos";
        case Func::exp: return "exp";
        case Func::log: return "log";
        case Func::sqrt: return "sqrt";
        case Func::abs: return "abs";
    }
    return "?";
}

}  // namespace

Ast parse(std::string_view text, const std::set<std::string>& allowed) {
    return Parser(text, allowed).run();
}

double eval(const Ast& ast, const Params& bindings) {
    switch (ast->kind) {
        case Node::Kind::constant: return ast->value;
        case Node::Kind::variable: {
            auto it = bindings.find(ast->ident);
            if (it == bindings.end()) throw EvalError("unbound variable '" + ast->ident + "'");
            return it->second;
        }
        case Node::Kind::negate: return -eval(ast->a, bindings);
        case Node::Kind::binary: return apply_bin(ast->op, eval(ast->a, bindings), eval(ast->b, bindings));
        case Node::Kind::call: return apply_fn(ast->fn, eval(ast->a, bindings));
    }
    throw EvalError("bad node");
}

std::string to_string(const Ast& ast) {
    switch (ast->kind) {
        case Node::Kind::constant: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", ast->value);
            return buf;
        }
        case Node::Kind::variable: return ast->ident;
        case Node::Kind::negate: return "(-" + to_string(ast->a) + ")";
        case Node::Kind::binary: {
            const char* op = "?";
            switch (ast->op) {
                case BinaryOp::add: op = "+"; break;
                case BinaryOp::sub: op = "-"; break;
                case BinaryOp::mul: op = "*"; break;
                case BinaryOp::div: op = "/"; break;
                case BinaryOp::pow: op = "^"; break;
            }
            return "(" + to_string(ast->a) + op + to_string(ast->b) + ")";
        }
        case Node::Kind::call: return std::string(fn_name(ast->fn)) + "(" + to_string(ast->a) + ")";
    }
    return "?";
}

Program::Program(const Ast& ast, std::span<const std::string> slot_names) {
    int depth = 0;
    auto emit = [&](const Instr& i, int push) {
        code_.push_back(i);
        depth += push;
        if (depth > max_stack_) max_stack_ = depth;
    };
    auto compile = [&](auto&& self, const Ast& node) -> void {
        switch (node->kind) {
            case Node::Kind::constant:
                emit({OpCode::push_const, node->value}, +1);
                return;
            case Node::Kind::variable: {
                int slot = -1;
                for (std::size_t i = 0; i < slot_names.size(); ++i)
                    if (slot_names[i] == node->ident) slot = static_cast<int>(i);
                if (slot < 0) throw EvalError("variable '" + node->ident + "' has no slot");
                Instr in{OpCode::push_slot};
                in.slot = slot;
                emit(in, +1);
                return;
            }
            case Node::Kind::negate:
                self(self, node->a);
                emit({OpCode::negate}, 0);
                return;
            case Node::Kind::binary: {
                self(self, node->a);
                self(self, node->b);
                Instr in{OpCode::binary};
                in.op = node->op;
                emit(in, -1);
                return;
            }
            case Node::Kind::call: {
                self(self, node->a);
                Instr in{OpCode::call};
                in.fn = node->fn;
                emit(in, 0);
                return;
            }
        }
    };
    compile(compile, ast);
}

double Program::run(std::span<const double> slots) const {
    double stack[64];
    int top = -1;
    for (const Instr& in : code_) {
        switch (in.code) {
            case OpCode::push_const: stack[++top] = in.value; break;
            case OpCode::push_slot: stack[++top] = slots[static_cast<std::size_t>(in.slot)]; break;
            case OpCode::negate: stack[top] = -stack[top]; break;
            case OpCode::binary: {
                double b = stack[top--];
                stack[top] = apply_bin(in.op, stack[top], b);
                break;
            }
            case OpCode::call: stack[top] = apply_fn(in.fn, stack[top]); break;
        }
    }
    return stack[0];
}

}  // namespace canard::expr
