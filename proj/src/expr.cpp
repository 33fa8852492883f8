#include "connforge/expr.hpp"

#include <cctype>
#include <cmath>
#include <sstream>
#include <vector>

namespace connforge {

enum class Kind { Const, Var, Add, Sub, Mul, Div, Pow, Exp, Sin, Cos, Neg };

struct ScalarExpr::Node {
    Kind kind;
    double value = 0.0;  // Const
    int index = 0;       // Var; exponent for Pow
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const ScalarExpr::Node>;

NodePtr make(Kind k, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<ScalarExpr::Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_const(double v) {
    auto n = std::make_shared<ScalarExpr::Node>();
    n->kind = Kind::Const;
    n->value = v;
    return n;
}

NodePtr make_var(int i) {
    auto n = std::make_shared<ScalarExpr::Node>();
    n->kind = Kind::Var;
    n->index = i;
    return n;
}

NodePtr make_pow(NodePtr base, int e) {
    auto n = std::make_shared<ScalarExpr::Node>();
    n->kind = Kind::Pow;
    n->index = e;
    n->a = std::move(base);
    return n;
}

bool is_const(const NodePtr& n, double v) {
    return n->kind == Kind::Const && n->value == v;
}

// Light constant folding; keeps derivative trees from ballooning.
NodePtr add(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return b;
    if (is_const(b, 0.0)) return a;
    if (a->kind == Kind::Const && b->kind == Kind::Const)
        return make_const(a->value + b->value);
    return make(Kind::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
    if (is_const(b, 0.0)) return a;
    if (a->kind == Kind::Const && b->kind == Kind::Const)
        return make_const(a->value - b->value);
    if (is_const(a, 0.0)) return make(Kind::Neg, std::move(b));
    return make(Kind::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
    if (is_const(a, 1.0)) return b;
    if (is_const(b, 1.0)) return a;
    if (a->kind == Kind::Const && b->kind == Kind::Const)
        return make_const(a->value * b->value);
    return make(Kind::Mul, std::move(a), std::move(b));
}

NodePtr divide(NodePtr a, NodePtr b) {
    if (is_const(a, 0.0)) return make_const(0.0);
    if (is_const(b, 1.0)) return a;
    return make(Kind::Div, std::move(a), std::move(b));
}

double eval_node(const ScalarExpr::Node& n, std::span<const double> p) {
    switch (n.kind) {
    case Kind::Const: return n.value;
    case Kind::Var: return p[static_cast<std::size_t>(n.index)];
    case Kind::Add: return eval_node(*n.a, p) + eval_node(*n.b, p);
    case Kind::Sub: return eval_node(*n.a, p) - eval_node(*n.b, p);
    case Kind::Neg: return -eval_node(*n.a, p);
    case Kind::Mul: return eval_node(*n.a, p) * eval_node(*n.b, p);
    case Kind::Div: {
        double den = eval_node(*n.b, p);
        if (den == 0.0) throw EvalError("division by zero");
        return eval_node(*n.a, p) / den;
    }
    case Kind::Pow: {
        double base = eval_node(*n.a, p);
        if (n.index < 0 && base == 0.0) throw EvalError("division by zero in negative power");
        return std::pow(base, n.index);
    }
    case Kind::Exp: return std::exp(eval_node(*n.a, p));
    case Kind::Sin: return std::sin(eval_node(*n.a, p));
    case Kind::Cos: return std::cos(eval_node(*n.a, p));
    }
    throw EvalError("corrupt expression node");
}

NodePtr diff_node(const NodePtr& n, int i) {
    switch (n->kind) {
    case Kind::Const: return make_const(0.0);
    case Kind::Var: return make_const(n->index == i ? 1.0 : 0.0);
    case Kind::Add: return add(diff_node(n->a, i), diff_node(n->b, i));
    case Kind::Sub: return sub(diff_node(n->a, i), diff_node(n->b, i));
    case Kind::Neg: return sub(make_const(0.0), diff_node(n->a, i));
    case Kind::Mul:
        return add(mul(diff_node(n->a, i), n->b), mul(n->a, diff_node(n->b, i)));
    case Kind::Div:
        // (a/b)' = a'/b - a b'/b^2
        return sub(divide(diff_node(n->a, i), n->b),
                   divide(mul(n->a, diff_node(n->b, i)), make_pow(n->b, 2)));
    case Kind::Pow: {
        if (n->index == 0) return make_const(0.0);
        return mul(mul(make_const(static_cast<double>(n->index)),
                       make_pow(n->a, n->index - 1)),
                   diff_node(n->a, i));
    }
    case Kind::Exp: return mul(make(Kind::Exp, n->a), diff_node(n->a, i));
    case Kind::Sin: return mul(make(Kind::Cos, n->a), diff_node(n->a, i));
    case Kind::Cos:
        return sub(make_const(0.0), mul(make(Kind::Sin, n->a), diff_node(n->a, i)));
    }
    throw EvalError("corrupt expression node");
}

void print_node(const ScalarExpr::Node& n, std::ostream& os) {
    switch (n.kind) {
    case Kind::Const: {
        std::ostringstream tmp;
        tmp.precision(17);
        tmp << n.value;
        std::string s = tmp.str();
        if (n.value < 0)
            os << "(0 - " << s.substr(1) << ")";
        else
            os << s;
        return;
    }
    case Kind::Var: os << "x" << (n.index + 1); return;
    case Kind::Add:
        os << "("; print_node(*n.a, os); os << " + "; print_node(*n.b, os); os << ")";
        return;
    case Kind::Sub:
        os << "("; print_node(*n.a, os); os << " - "; print_node(*n.b, os); os << ")";
        return;
    case Kind::Neg:
        os << "(0 - "; print_node(*n.a, os); os << ")";
        return;
    case Kind::Mul:
        os << "("; print_node(*n.a, os); os << " * "; print_node(*n.b, os); os << ")";
        return;
    case Kind::Div:
        os << "("; print_node(*n.a, os); os << " / "; print_node(*n.b, os); os << ")";
        return;
    case Kind::Pow:
        os << "("; print_node(*n.a, os); os << ")^" << n.index;
        return;
    case Kind::Exp: os << "exp("; print_node(*n.a, os); os << ")"; return;
    case Kind::Sin: os << "sin("; print_node(*n.a, os); os << ")"; return;
    case Kind::Cos: os << "cos("; print_node(*n.a, os); os << ")"; return;
    }
}

class Parser {
public:
    Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input");
        return e;
    }

private:
    std::string_view text_;
    int dim_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(msg + " at position " + std::to_string(pos_), pos_);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek(c)) { ++pos_; return true; }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(std::string("expected '") + c + "'");
    }

    NodePtr expr() {
        bool neg = false;
        skip_ws();
        if (accept('-')) neg = true;
        NodePtr e = term();
        if (neg) e = sub(make_const(0.0), e);
        for (;;) {
            if (accept('+')) e = add(e, term());
            else if (accept('-')) e = sub(e, term());
            else return e;
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            if (accept('*')) e = mul(e, factor());
            else if (accept('/')) e = divide(e, factor());
            else return e;
        }
    }

    NodePtr factor() {
        NodePtr b = base();
        if (accept('^')) return make_pow(std::move(b), integer());
        return b;
    }

    int integer() {
        skip_ws();
        std::size_t start = pos_;
        if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start || (pos_ == start + 1 && !std::isdigit(static_cast<unsigned char>(text_[start]))))
            fail("expected integer exponent");
        return std::stoi(std::string(text_.substr(start, pos_ - start)));
    }

    NodePtr base() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (accept('-')) return sub(make_const(0.0), base());
        char c = text_[pos_];
        if (accept('(')) {
            NodePtr e = expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return number();
        if (std::isalpha(static_cast<unsigned char>(c)))
            return name();
        fail("unexpected character");
    }

    NodePtr number() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    ++pos_;
            } else {
                pos_ = save;  // 'e' belongs to a following token, not this number
            }
        }
        return make_const(std::stod(std::string(text_.substr(start, pos_ - start))));
    }

    NodePtr name() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        std::string id(text_.substr(start, pos_ - start));
        if (id[0] == 'x' && id.size() > 1 &&
            std::isdigit(static_cast<unsigned char>(id[1]))) {
            int coord = 0;
            for (std::size_t k = 1; k < id.size(); ++k) {
                if (!std::isdigit(static_cast<unsigned char>(id[k]))) {
                    pos_ = start;
                    fail("unknown symbol '" + id + "'");
                }
                coord = coord * 10 + (id[k] - '0');
            }
            if (coord < 1 || coord > dim_) {
                pos_ = start;
                fail("coordinate '" + id + "' out of range for dimension " +
                     std::to_string(dim_));
            }
            return make_var(coord - 1);
        }
        if (id == "exp" || id == "sin" || id == "cos") {
            expect('(');
            NodePtr arg = expr();
            expect(')');
            Kind k = id == "exp" ? Kind::Exp : id == "sin" ? Kind::Sin : Kind::Cos;
            return make(k, std::move(arg));
        }
        pos_ = start;
        fail("unknown symbol '" + id + "'");
    }
};

} // namespace

ScalarExpr ScalarExpr::constant(double value) {
    return ScalarExpr(make_const(value), 0);
}

ScalarExpr ScalarExpr::variable(int index, int dimension) {
    if (index < 0 || index >= dimension)
        throw ParseError("coordinate index out of range", 0);
    return ScalarExpr(make_var(index), dimension);
}

ScalarExpr ScalarExpr::parse(std::string_view text, int dimension) {
    return ScalarExpr(Parser(text, dimension).run(), dimension);
}

double ScalarExpr::eval(std::span<const double> point) const {
    if (!root_) throw EvalError("empty expression");
    if (static_cast<int>(point.size()) < dim_)
        throw EvalError("point dimension smaller than expression dimension");
    double v = eval_node(*root_, point);
    if (!std::isfinite(v)) throw EvalError("non-finite value in evaluation");
    return v;
}

ScalarExpr ScalarExpr::diff(int index) const {
    if (!root_) throw EvalError("empty expression");
    if (index < 0 || (dim_ > 0 && index >= dim_))
        throw ParseError("derivative index out of range", 0);
    return ScalarExpr(diff_node(root_, index), dim_);
}

bool ScalarExpr::is_zero() const {
    return root_ && root_->kind == Kind::Const && root_->value == 0.0;
}

std::string ScalarExpr::to_string() const {
    if (!root_) return "0";
    std::ostringstream os;
    print_node(*root_, os);
    return os.str();
}

} // namespace connforge
