#pragma once
// Arithmetic-expression grammar for manifest-declared nonlinearities and
// force time profiles. Operators + - * / ^, functions abs, min, max, sin,
// exp, variables v and t, and the symbol T = max(0,t).

#include <memory>
#include <string>

namespace attrlab {

class Expr {
  public:
    // throws ValidationError with position context on parse failure
    static Expr parse(const std::string& text);

    double eval(double v, double t) const;
    const std::string& text() const { return text_; }

    Expr() = default;

    struct Node;  // implementation detail, public for the parser TU

  private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

}  // namespace attrlab
