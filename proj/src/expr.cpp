#include "colehopf/expr.hpp"

#include "colehopf/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>

namespace colehopf {

namespace detail {

enum class Kind : std::uint8_t {
    constant,
    variable,
    parameter,
    add,
    sub,
    mul,
    div,
    pow,
    neg,
    fun,
    deriv,
};

enum class FunId : std::uint8_t { sin, cos, tan, exp, ln, sinh, cosh, tanh, sqrt };

struct Node {
    Kind kind;
    double value = 0.0;    // constant
    std::string name;      // parameter
    FunId fun = FunId::sin;
    int dorder = 0;        // deriv
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
}

NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

bool node_depends_on_var(const Node* n) {
    if (!n) return false;
    if (n->kind == Kind::variable) return true;
    return node_depends_on_var(n->a.get()) || node_depends_on_var(n->b.get());
}

constexpr std::array<std::string_view, 9> kFunNames = {
    "sin", "cos", "tan", "exp", "ln", "sinh", "cosh", "tanh", "sqrt"};

} // namespace
} // namespace detail

using detail::FunId;
using detail::Kind;
using detail::Node;
using detail::NodePtr;

void Bindings::set(std::string name, double value) {
    auto it = std::lower_bound(items_.begin(), items_.end(), name,
                               [](const auto& p, const std::string& n) { return p.first < n; });
    if (it != items_.end() && it->first == name) {
        it->second = value;
    } else {
        items_.insert(it, {std::move(name), value});
    }
}

const double* Bindings::find(std::string_view name) const {
    auto it = std::lower_bound(items_.begin(), items_.end(), name,
                               [](const auto& p, std::string_view n) { return p.first < n; });
    if (it != items_.end() && it->first == name) return &it->second;
    return nullptr;
}

Expr::Expr() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    node_ = std::move(n);
}

Expr constant(double value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = value;
    return Expr(NodePtr(n));
}

Expr variable() { return Expr(detail::make(Kind::variable)); }

Expr parameter(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::parameter;
    n->name = std::move(name);
    return Expr(NodePtr(n));
}

Expr operator+(const Expr& a, const Expr& b) {
    return Expr(detail::make_binary(Kind::add, a.share(), b.share()));
}
Expr operator-(const Expr& a, const Expr& b) {
    return Expr(detail::make_binary(Kind::sub, a.share(), b.share()));
}
Expr operator*(const Expr& a, const Expr& b) {
    return Expr(detail::make_binary(Kind::mul, a.share(), b.share()));
}
Expr operator/(const Expr& a, const Expr& b) {
    return Expr(detail::make_binary(Kind::div, a.share(), b.share()));
}
Expr operator-(const Expr& a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::neg;
    n->a = a.share();
    return Expr(NodePtr(n));
}
Expr operator+(const Expr& a, double b) { return a + constant(b); }
Expr operator+(double a, const Expr& b) { return constant(a) + b; }
Expr operator-(const Expr& a, double b) { return a - constant(b); }
Expr operator-(double a, const Expr& b) { return constant(a) - b; }
Expr operator*(const Expr& a, double b) { return a * constant(b); }
Expr operator*(double a, const Expr& b) { return constant(a) * b; }
Expr operator/(const Expr& a, double b) { return a / constant(b); }
Expr operator/(double a, const Expr& b) { return constant(a) / b; }

Expr pow(const Expr& base, const Expr& exponent) {
    if (depends_on_var(exponent))
        throw ConfigError("power exponent must not depend on the coordinate");
    return Expr(detail::make_binary(Kind::pow, base.share(), exponent.share()));
}

Expr pow(const Expr& base, double exponent) { return pow(base, constant(exponent)); }

namespace {
Expr make_fun(FunId f, const Expr& u) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::fun;
    n->fun = f;
    n->a = u.share();
    return Expr(NodePtr(n));
}
} // namespace

Expr sin(const Expr& u) { return make_fun(FunId::sin, u); }
Expr cos(const Expr& u) { return make_fun(FunId::cos, u); }
Expr tan(const Expr& u) { return make_fun(FunId::tan, u); }
Expr exp(const Expr& u) { return make_fun(FunId::exp, u); }
Expr ln(const Expr& u) { return make_fun(FunId::ln, u); }
Expr sinh(const Expr& u) { return make_fun(FunId::sinh, u); }
Expr cosh(const Expr& u) { return make_fun(FunId::cosh, u); }
Expr tanh(const Expr& u) { return make_fun(FunId::tanh, u); }
Expr sqrt(const Expr& u) { return make_fun(FunId::sqrt, u); }

Expr diff(const Expr& e, int k) {
    if (k < 0) throw ConfigError("negative derivative order");
    if (k == 0) return e;
    auto n = std::make_shared<Node>();
    n->kind = Kind::deriv;
    if (e.node() && e.node()->kind == Kind::deriv) {
        // collapse nested markers so the jet cap applies to the total order
        n->dorder = e.node()->dorder + k;
        n->a = e.node()->a;
    } else {
        n->dorder = k;
        n->a = e.share();
    }
    return Expr(NodePtr(n));
}

bool depends_on_var(const Expr& e) { return detail::node_depends_on_var(e.node()); }

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Jet eval_node(const Node* n, double x, int order, const Bindings& bound);

Jet eval_pow(const Node* n, double x, int order, const Bindings& bound) {
    const double e = eval_node(n->b.get(), x, 0, bound).d[0];
    const double r = std::nearbyint(e);
    const bool integral = std::abs(e - r) <= 1e-12 * std::max(1.0, std::abs(e)) &&
                          std::abs(r) < 9.0e15;
    Jet base = eval_node(n->a.get(), x, order, bound);
    if (integral) return jpow_int(base, static_cast<long long>(r));
    return jpow_real(base, e);
}

Jet eval_node(const Node* n, double x, int order, const Bindings& bound) {
    switch (n->kind) {
    case Kind::constant:
        return Jet::constant(n->value, order);
    case Kind::variable:
        return Jet::variable(x, order);
    case Kind::parameter: {
        const double* v = bound.find(n->name);
        if (!v) throw ConfigError("unbound parameter '" + n->name + "'");
        return Jet::constant(*v, order);
    }
    case Kind::add:
        return jadd(eval_node(n->a.get(), x, order, bound), eval_node(n->b.get(), x, order, bound));
    case Kind::sub:
        return jsub(eval_node(n->a.get(), x, order, bound), eval_node(n->b.get(), x, order, bound));
    case Kind::mul:
        return jmul(eval_node(n->a.get(), x, order, bound), eval_node(n->b.get(), x, order, bound));
    case Kind::div:
        return jdiv(eval_node(n->a.get(), x, order, bound), eval_node(n->b.get(), x, order, bound));
    case Kind::pow:
        return eval_pow(n, x, order, bound);
    case Kind::neg:
        return jneg(eval_node(n->a.get(), x, order, bound));
    case Kind::fun: {
        Jet u = eval_node(n->a.get(), x, order, bound);
        switch (n->fun) {
        case FunId::sin: return jsin(u);
        case FunId::cos: return jcos(u);
        case FunId::tan: return jtan(u);
        case FunId::exp: return jexp(u);
        case FunId::ln: return jln(u);
        case FunId::sinh: return jsinh(u);
        case FunId::cosh: return jcosh(u);
        case FunId::tanh: return jtanh(u);
        case FunId::sqrt: return jsqrt(u);
        }
        throw Error("unreachable function id");
    }
    case Kind::deriv: {
        const int inner = order + n->dorder;
        if (inner > kMaxJetOrder)
            throw NumericError("derivative marker exceeds the jet order cap");
        Jet u = eval_node(n->a.get(), x, inner, bound);
        Jet h;
        h.order = order;
        for (int m = 0; m <= order; ++m) h.d[m] = u.d[m + n->dorder];
        return h;
    }
    }
    throw Error("unreachable node kind");
}

} // namespace

Jet eval_jet(const Expr& e, double x, int order, const Bindings& bound) {
    if (order < 0 || order > kMaxJetOrder) throw ConfigError("jet order out of range");
    return eval_node(e.node(), x, order, bound);
}

double eval(const Expr& e, double x, const Bindings& bound) {
    return eval_node(e.node(), x, 0, bound).d[0];
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// precedence: 1 add/sub, 2 mul/div, 3 unary minus, 4 pow, 5 atoms
int node_prec(const Node* n) {
    switch (n->kind) {
    case Kind::add:
    case Kind::sub: return 1;
    case Kind::mul:
    case Kind::div: return 2;
    case Kind::neg: return 3;
    case Kind::pow: return 4;
    case Kind::constant:
        return n->value < 0.0 ? 3 : 5; // a negative literal prints with a sign
    default: return 5;
    }
}

void format_double_into(std::string& out, double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, res.ptr);
}

void print_node(std::string& out, const Node* n);

void print_child(std::string& out, const Node* c, bool parens) {
    if (parens) {
        out.push_back('(');
        print_node(out, c);
        out.push_back(')');
    } else {
        print_node(out, c);
    }
}

void print_node(std::string& out, const Node* n) {
    switch (n->kind) {
    case Kind::constant:
        format_double_into(out, n->value);
        return;
    case Kind::variable:
        out.push_back('x');
        return;
    case Kind::parameter:
        out += n->name;
        return;
    case Kind::add:
    case Kind::sub:
    case Kind::mul:
    case Kind::div: {
        const int p = node_prec(n);
        const bool tight = n->kind == Kind::sub || n->kind == Kind::div;
        print_child(out, n->a.get(), node_prec(n->a.get()) < p);
        out.push_back(n->kind == Kind::add   ? '+'
                      : n->kind == Kind::sub ? '-'
                      : n->kind == Kind::mul ? '*'
                                             : '/');
        const int bp = node_prec(n->b.get());
        print_child(out, n->b.get(), bp < p || (tight && bp == p));
        return;
    }
    case Kind::pow:
        print_child(out, n->a.get(), node_prec(n->a.get()) < 5);
        out.push_back('^');
        print_child(out, n->b.get(), node_prec(n->b.get()) < 3);
        return;
    case Kind::neg:
        out.push_back('-');
        print_child(out, n->a.get(), node_prec(n->a.get()) < 3);
        return;
    case Kind::fun:
        out += detail::kFunNames[static_cast<std::size_t>(n->fun)];
        out.push_back('(');
        print_node(out, n->a.get());
        out.push_back(')');
        return;
    case Kind::deriv:
        out.push_back('D');
        out += std::to_string(n->dorder);
        out.push_back('(');
        print_node(out, n->a.get());
        out.push_back(')');
        return;
    }
}

} // namespace

std::string to_string(const Expr& e) {
    std::string out;
    print_node(out, e.node());
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
    enum class Kind { number, ident, ch, end };
    Kind kind;
    double num = 0.0;
    std::string_view text;
    char c = 0;
    std::size_t offset = 0;
};

std::vector<Token> lex(std::string_view text) {
    std::vector<Token> toks;
    std::size_t i = 0;
    const auto n = text.size();
    while (i < n) {
        const char c = text[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '.' && i + 1 < n && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
            double value = 0.0;
            auto res = std::from_chars(text.data() + i, text.data() + n, value);
            if (res.ec != std::errc()) throw ParseError("malformed number", i);
            Token t;
            t.kind = Token::Kind::number;
            t.num = value;
            t.offset = i;
            toks.push_back(t);
            i = static_cast<std::size_t>(res.ptr - text.data());
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i + 1;
            while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            Token t;
            t.kind = Token::Kind::ident;
            t.text = text.substr(i, j - i);
            t.offset = i;
            toks.push_back(t);
            i = j;
            continue;
        }
        if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^' || c == '(' || c == ')') {
            Token t;
            t.kind = Token::Kind::ch;
            t.c = c;
            t.offset = i;
            toks.push_back(t);
            ++i;
            continue;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", i);
    }
    Token t;
    t.kind = Token::Kind::end;
    t.offset = n;
    toks.push_back(t);
    return toks;
}

class Parser {
public:
    Parser(std::vector<Token> toks, const std::vector<std::string>& params,
           std::string_view var_name)
        : toks_(std::move(toks)), params_(params), var_(var_name) {}

    NodePtr run() {
        NodePtr e = expr();
        if (peek().kind != Token::Kind::end)
            throw ParseError("unexpected trailing input", peek().offset);
        return e;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& advance() { return toks_[pos_++]; }
    bool accept(char c) {
        if (peek().kind == Token::Kind::ch && peek().c == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr left = term();
        while (peek().kind == Token::Kind::ch && (peek().c == '+' || peek().c == '-')) {
            const char op = advance().c;
            left = detail::make_binary(op == '+' ? Kind::add : Kind::sub, left, term());
        }
        return left;
    }

    NodePtr term() {
        NodePtr left = unary();
        while (peek().kind == Token::Kind::ch && (peek().c == '*' || peek().c == '/')) {
            const char op = advance().c;
            left = detail::make_binary(op == '*' ? Kind::mul : Kind::div, left, unary());
        }
        return left;
    }

    NodePtr unary() {
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Kind::neg;
            n->a = unary();
            return n;
        }
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (peek().kind == Token::Kind::ch && peek().c == '^') {
            const std::size_t caret = advance().offset;
            NodePtr exponent = unary();
            if (detail::node_depends_on_var(exponent.get()))
                throw ParseError("exponent must not depend on '" + std::string(var_) + "'",
                                 caret);
            return detail::make_binary(Kind::pow, base, exponent);
        }
        return base;
    }

    NodePtr atom() {
        const Token& t = peek();
        switch (t.kind) {
        case Token::Kind::number: {
            advance();
            auto n = std::make_shared<Node>();
            n->kind = Kind::constant;
            n->value = t.num;
            return n;
        }
        case Token::Kind::ident: {
            advance();
            const bool call = peek().kind == Token::Kind::ch && peek().c == '(';
            if (call) {
                auto fit = std::find(detail::kFunNames.begin(), detail::kFunNames.end(), t.text);
                if (fit == detail::kFunNames.end())
                    throw ParseError("unknown function '" + std::string(t.text) + "'", t.offset);
                advance(); // '('
                NodePtr arg = expr();
                if (!accept(')')) throw ParseError("expected ')'", peek().offset);
                auto n = std::make_shared<Node>();
                n->kind = Kind::fun;
                n->fun = static_cast<FunId>(fit - detail::kFunNames.begin());
                n->a = arg;
                return n;
            }
            if (t.text == var_) return detail::make(Kind::variable);
            if (std::find(params_.begin(), params_.end(), t.text) != params_.end()) {
                auto n = std::make_shared<Node>();
                n->kind = Kind::parameter;
                n->name = std::string(t.text);
                return n;
            }
            if (std::find(detail::kFunNames.begin(), detail::kFunNames.end(), t.text) !=
                detail::kFunNames.end())
                throw ParseError("expected '(' after function '" + std::string(t.text) + "'",
                                 peek().offset);
            throw ParseError("unknown identifier '" + std::string(t.text) + "'", t.offset);
        }
        case Token::Kind::ch:
            if (t.c == '(') {
                advance();
                NodePtr inner = expr();
                if (!accept(')')) throw ParseError("expected ')'", peek().offset);
                return inner;
            }
            throw ParseError(std::string("syntax error: unexpected '") + t.c + "'", t.offset);
        case Token::Kind::end:
            throw ParseError("unexpected end of input", t.offset);
        }
        throw ParseError("syntax error", t.offset);
    }

    std::vector<Token> toks_;
    const std::vector<std::string>& params_;
    std::string_view var_;
    std::size_t pos_ = 0;
};

} // namespace

Expr parse_expr(std::string_view text, const std::vector<std::string>& params,
                std::string_view var_name) {
    std::vector<Token> toks = lex(text);
    if (toks.size() == 1) throw ParseError("empty expression", 0);
    Parser p(std::move(toks), params, var_name);
    return Expr(p.run());
}

} // namespace colehopf
