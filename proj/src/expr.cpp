#include "attrlab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "attrlab/errors.hpp"

namespace attrlab {

namespace {
enum class Op {
    num, var_v, var_t, var_T,
    add, sub, mul, div, pow, neg,
    fabs, fmin, fmax, fsin, fexp,
};
}

struct Expr::Node {
    Op op;
    double value = 0.0;
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

class Parser {
  public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size()) fail("trailing input");
        return e;
    }

  private:
    const std::string& s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) {
        throw ValidationError("expression: " + what + " at position " +
                              std::to_string(pos_) + " in \"" + s_ + "\"");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    static NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr,
                        double v = 0.0) {
        auto n = std::make_shared<Expr::Node>();
        n->op = op;
        n->value = v;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = make(Op::add, lhs, term());
            else if (eat('-'))
                lhs = make(Op::sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = factor();
        for (;;) {
            if (eat('*'))
                lhs = make(Op::mul, lhs, factor());
            else if (eat('/'))
                lhs = make(Op::div, lhs, factor());
            else
                return lhs;
        }
    }

    // '^' binds tighter than unary minus: -v^2 = -(v^2), 2^-3 is valid
    NodePtr factor() {
        if (eat('-')) return make(Op::neg, factor());
        return power();
    }

    NodePtr power() {
        NodePtr base = primary();
        if (eat('^')) return make(Op::pow, base, factor());  // right-assoc
        return base;
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) fail("unexpected end");
        const char c = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return ident();
        if (eat('(')) {
            NodePtr e = expr();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        fail("unexpected character");
    }

    NodePtr number() {
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail("bad number");
        pos_ += static_cast<std::size_t>(end - begin);
        return make(Op::num, nullptr, nullptr, v);
    }

    NodePtr ident() {
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               std::isalnum(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        const std::string name = s_.substr(start, pos_ - start);
        if (name == "v") return make(Op::var_v);
        if (name == "t") return make(Op::var_t);
        if (name == "T") return make(Op::var_T);
        Op op;
        int arity = 1;
        if (name == "abs")
            op = Op::fabs;
        else if (name == "sin")
            op = Op::fsin;
        else if (name == "exp")
            op = Op::fexp;
        else if (name == "min") {
            op = Op::fmin;
            arity = 2;
        } else if (name == "max") {
            op = Op::fmax;
            arity = 2;
        } else {
            pos_ = start;
            fail("unknown identifier '" + name + "'");
        }
        if (!eat('(')) fail("expected '(' after " + name);
        NodePtr a = expr();
        NodePtr b;
        if (arity == 2) {
            if (!eat(',')) fail("expected ','");
            b = expr();
        }
        if (!eat(')')) fail("expected ')'");
        return make(op, a, b);
    }
};

double eval_node(const Expr::Node& n, double v, double t) {
    switch (n.op) {
        case Op::num: return n.value;
        case Op::var_v: return v;
        case Op::var_t: return t;
        case Op::var_T: return t > 0.0 ? t : 0.0;
        case Op::add: return eval_node(*n.a, v, t) + eval_node(*n.b, v, t);
        case Op::sub: return eval_node(*n.a, v, t) - eval_node(*n.b, v, t);
        case Op::mul: return eval_node(*n.a, v, t) * eval_node(*n.b, v, t);
        case Op::div: return eval_node(*n.a, v, t) / eval_node(*n.b, v, t);
        case Op::pow: return std::pow(eval_node(*n.a, v, t), eval_node(*n.b, v, t));
        case Op::neg: return -eval_node(*n.a, v, t);
        case Op::fabs: return std::fabs(eval_node(*n.a, v, t));
        case Op::fmin:
            return std::fmin(eval_node(*n.a, v, t), eval_node(*n.b, v, t));
        case Op::fmax:
            return std::fmax(eval_node(*n.a, v, t), eval_node(*n.b, v, t));
        case Op::fsin: return std::sin(eval_node(*n.a, v, t));
        case Op::fexp: return std::exp(eval_node(*n.a, v, t));
    }
    return 0.0;
}

}  // namespace

Expr Expr::parse(const std::string& text) {
    Expr e;
    e.root_ = Parser(text).run();
    e.text_ = text;
    return e;
}

double Expr::eval(double v, double t) const {
    if (!root_) throw ValidationError("empty expression");
    return eval_node(*root_, v, t);
}

}  // namespace attrlab
