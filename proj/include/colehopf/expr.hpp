#pragma once

#include "colehopf/jet.hpp"

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace colehopf {

namespace detail {
struct Node;
}

// Named parameter values supplied at evaluation time. Kept sorted by name so
// iteration order (and anything serialized from it) is deterministic.
class Bindings {
public:
    void set(std::string name, double value);
    const double* find(std::string_view name) const;
    bool empty() const { return items_.empty(); }
    const std::vector<std::pair<std::string, double>>& items() const { return items_; }

private:
    std::vector<std::pair<std::string, double>> items_;
};

// Immutable scalar expression in one coordinate plus named parameters.
// Composition is purely structural: no simplification is ever applied, so a
// tree evaluates exactly as it was built. Value-semantic handle; copies share
// nodes and are safe to read from multiple threads.
class Expr {
public:
    Expr(); // constant 0

    explicit Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}
    const detail::Node* node() const { return node_.get(); }
    std::shared_ptr<const detail::Node> share() const { return node_; }

private:
    std::shared_ptr<const detail::Node> node_;
};

Expr constant(double value);
Expr variable();                 // the coordinate (x, or t for boundary data)
Expr parameter(std::string name);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(const Expr& a, double b);
Expr operator+(double a, const Expr& b);
Expr operator-(const Expr& a, double b);
Expr operator-(double a, const Expr& b);
Expr operator*(const Expr& a, double b);
Expr operator*(double a, const Expr& b);
Expr operator/(const Expr& a, double b);
Expr operator/(double a, const Expr& b);

// The exponent must not depend on the coordinate (checked on construction).
Expr pow(const Expr& base, const Expr& exponent);
Expr pow(const Expr& base, double exponent);

Expr sin(const Expr& u);
Expr cos(const Expr& u);
Expr tan(const Expr& u);
Expr exp(const Expr& u);
Expr ln(const Expr& u);
Expr sinh(const Expr& u);
Expr cosh(const Expr& u);
Expr tanh(const Expr& u);
Expr sqrt(const Expr& u);

// Structural derivative marker: eval_jet(diff(e, k), x, n) returns the jet of
// the k-th derivative of e. Costs nothing at build time; at evaluation the
// child is evaluated at order n + k, so n + k must stay within the jet cap.
Expr diff(const Expr& e, int k = 1);

// Recursive-descent parser. Identifiers resolve to `var_name`, a listed
// parameter, or one of the built-in functions; anything else is a ParseError
// carrying a 0-based offset into `text`.
Expr parse_expr(std::string_view text, const std::vector<std::string>& params = {},
                std::string_view var_name = "x");

Jet eval_jet(const Expr& e, double x, int order, const Bindings& bound = {});
double eval(const Expr& e, double x, const Bindings& bound = {});

// Round-trippable text form (except for derivative markers, which print as
// D<k>(...) for diagnostics and are not part of the grammar).
std::string to_string(const Expr& e);

bool depends_on_var(const Expr& e);

} // namespace colehopf
