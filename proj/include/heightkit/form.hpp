#pragma once

#include <map>
#include <string>
#include <vector>

#include "heightkit/matrix.hpp"
#include "heightkit/numeric.hpp"

namespace heightkit {

using Exponents = std::vector<int>;

/// Homogeneous polynomial with rational coefficients: a global section of O(m) on P^(vars-1).
class Form {
 public:
  /// x^exponents; the degree is the exponent sum.
  static Form monomial(const Exponents& exponents, const Rat& coefficient = 1);
  /// The coordinate x_i among `vars` variables.
  static Form variable(std::size_t i, std::size_t vars);

  std::size_t variables() const { return vars_; }
  int degree() const { return degree_; }
  const std::map<Exponents, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  /// Exponent vector of a monomial form.
  const Exponents& monomial_exponents() const;

  Rat evaluate(const RatVector& x) const;
  Real evaluate(const RealVector& x) const;

  /// x -> f(A x).
  Form substitute(const RatMatrix& a) const;

  Form operator+(const Form& o) const;
  Form operator*(const Form& o) const;
  Form scaled(const Rat& c) const;
  bool operator==(const Form& o) const { return vars_ == o.vars_ && terms_ == o.terms_; }

  std::string to_string() const;

 private:
  Form(std::size_t vars, int degree) : vars_(vars), degree_(degree) {}
  void add_term(const Exponents& e, const Rat& c);

  std::size_t vars_ = 0;
  int degree_ = 0;
  std::map<Exponents, Rat> terms_;
};

/// Parses "x0^2*x1 - 3/2*x1^3" style input; terms must share a degree.
Form parse_form(const std::string& text, std::size_t vars);

}  // namespace heightkit
